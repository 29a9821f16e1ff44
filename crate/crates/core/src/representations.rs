//! Regular representations (direct and conjugate parastrophic matrices),
//! the metric-conjugation cross-check, block decomposition into complex and
//! quaternion forms, the approximate (folded) representations, and the
//! gamma-matrix dictionary.

use crate::algebra::{CliffordAlgebra, StructureTensor};
use crate::error::{AlgebraError, Result};
use crate::units::{UnitMatrix, UnitSystem};
use num::BigRational;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    Direct,
    Conjugate,
}

impl RepKind {
    pub fn name(&self) -> &'static str {
        match self {
            RepKind::Direct => "direct",
            RepKind::Conjugate => "conjugate",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(RepKind::Direct),
            "conjugate" => Ok(RepKind::Conjugate),
            other => Err(AlgebraError::BadLabel(other.into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepForm {
    Real,
    Complex,
    Quaternion,
}

impl RepForm {
    pub fn name(&self) -> &'static str {
        match self {
            RepForm::Real => "real",
            RepForm::Complex => "complex",
            RepForm::Quaternion => "quaternion",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(RepForm::Real),
            "complex" => Ok(RepForm::Complex),
            "quaternion" => Ok(RepForm::Quaternion),
            other => Err(AlgebraError::BadLabel(other.into())),
        }
    }
}

/// Which 2-blade plays the imaginary unit in the complex decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasicDirection {
    /// eps_21 -> i (the printed tables)
    E21,
    /// eps_13 -> j (second generation)
    E13,
    /// eps_32 -> k (third generation)
    E32,
}

impl BasicDirection {
    pub fn unit_char(&self) -> char {
        match self {
            BasicDirection::E21 => 'i',
            BasicDirection::E13 => 'j',
            BasicDirection::E32 => 'k',
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "21" => Ok(BasicDirection::E21),
            "13" => Ok(BasicDirection::E13),
            "32" => Ok(BasicDirection::E32),
            other => Err(AlgebraError::BadLabel(other.into())),
        }
    }

    /// Spatial index replacement realizing this choice (identity for E21).
    pub fn permutation(&self) -> [u8; 3] {
        // entry p[i-1] is the image of index i
        match self {
            BasicDirection::E21 => [1, 2, 3],
            BasicDirection::E13 => [3, 1, 2], // 1->3, 2->1, 3->2
            BasicDirection::E32 => [2, 3, 1], // 1->2, 2->3, 3->1
        }
    }
}

/// A family of matrices indexed by basis label.
#[derive(Debug, Clone)]
pub struct RegularRep {
    pub kind: RepKind,
    pub form: RepForm,
    pub algebra_id: String,
    pub basic: BasicDirection,
    /// Which basis vector each matrix represents.
    pub matrix_labels: Vec<String>,
    /// Row/column labels: basis labels (real form) or group representatives.
    pub axis_labels: Vec<String>,
    pub matrices: Vec<UnitMatrix>,
}

impl RegularRep {
    pub fn matrix(&self, label: &str) -> Result<&UnitMatrix> {
        let pos = self
            .matrix_labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| AlgebraError::BadLabel(label.into()))?;
        Ok(&self.matrices[pos])
    }

    /// Unit algebra used by the matrices of this rep.
    pub fn system(&self) -> UnitSystem {
        self.matrices
            .first()
            .map(|m| m.system)
            .unwrap_or(UnitSystem::Real)
    }
}

/// Direct regular representation: matrix I holds `C^L_KI` at (row L,
/// column K), i.e. column K of matrix I is the product `eps_K ∘ eps_I`
/// (I is the right comultiplier).
pub fn regular_rep_direct(a: &CliffordAlgebra) -> RegularRep {
    let d = a.dim();
    let mut matrices = Vec::with_capacity(d);
    for i in 0..d {
        let mut m = UnitMatrix::zero(UnitSystem::Real, d);
        for k in 0..d {
            let (l, s) = a.tensor().get(k, i);
            m.set(l, k, BigRational::from_integer((s as i64).into()), 0);
        }
        matrices.push(m);
    }
    RegularRep {
        kind: RepKind::Direct,
        form: RepForm::Real,
        algebra_id: a.id(),
        basic: BasicDirection::E21,
        matrix_labels: a.order().labels().to_vec(),
        axis_labels: a.order().labels().to_vec(),
        matrices,
    }
}

/// Conjugate structure constants from the left-comultiplier rule:
/// `conj.get(i, k) = (l, s)` with `E^I ∘ E^K = s E^L`. For blade bases the
/// products coincide with the direct ones taken in the same order.
pub fn conjugate_tensor(a: &CliffordAlgebra) -> StructureTensor {
    StructureTensor::from_fn(a.dim(), |i, k| a.tensor().get(i, k))
}

/// Conjugate structure constants by metric conjugation:
/// `C^RQ_P = g^RI g^QK C^L_KI g_LP` (all metrics diagonal here).
pub fn conjugate_constants_via_f10(a: &CliffordAlgebra) -> StructureTensor {
    let g = a.metric().diag();
    let ginv = a.metric().inverse_diag();
    StructureTensor::from_fn(a.dim(), |r, q| {
        // note the reversed order inside the direct constants
        let (p, s) = a.tensor().get(q, r);
        (p, s * ginv[r] * ginv[q] * g[p])
    })
}

/// Conjugate regular representation: matrix I holds `(E^I)^2 * C^IK_L` at
/// (row K, column L); the square factor is kept as the displayed global
/// prefactor.
pub fn regular_rep_conjugate(a: &CliffordAlgebra) -> RegularRep {
    rep_from_conjugate_tensor(a, &conjugate_tensor(a))
}

/// The representation induced by an explicit conjugate tensor (used to
/// cross-check the two computation routes).
pub fn rep_from_conjugate_tensor(a: &CliffordAlgebra, conj: &StructureTensor) -> RegularRep {
    let d = a.dim();
    let mut matrices = Vec::with_capacity(d);
    for i in 0..d {
        let mut m = UnitMatrix::zero(UnitSystem::Real, d);
        for k in 0..d {
            let (l, s) = conj.get(i, k);
            m.set(k, l, BigRational::from_integer((s as i64).into()), 0);
        }
        m.prefactor = (a.metric().diag()[i], 0);
        matrices.push(m);
    }
    RegularRep {
        kind: RepKind::Conjugate,
        form: RepForm::Real,
        algebra_id: a.id(),
        basic: BasicDirection::E21,
        matrix_labels: a.order().labels().to_vec(),
        axis_labels: a.order().labels().to_vec(),
        matrices,
    }
}

/// Signed permutation of basis positions induced by a spatial index
/// replacement: returns `(positions, signs)` with
/// `eps_{perm(L)} = signs[L] * (image of eps_L)`.
pub fn signed_label_permutation(a: &CliffordAlgebra, p: [u8; 3]) -> Result<(Vec<usize>, Vec<i8>)> {
    let mut perm = Vec::with_capacity(a.dim());
    let mut signs = Vec::with_capacity(a.dim());
    for label in a.order().labels() {
        let word = crate::blades::parse_label(label)?;
        let mapped: Vec<u8> = word
            .iter()
            .map(|&i| {
                if (i as usize) <= 3 {
                    p[(i - 1) as usize]
                } else {
                    i
                }
            })
            .collect();
        let normal = crate::blades::canonicalize(&mapped, a.signature())?;
        let (s, l) = a.label_map().to_label(&normal)?;
        perm.push(a.order().position(&l)?);
        signs.push(s);
    }
    Ok((perm, signs))
}

/// Conjugate a real unit matrix by a signed permutation: `P M P^-1`.
fn conjugate_by_signed_perm(m: &UnitMatrix, perm: &[usize], signs: &[i8]) -> UnitMatrix {
    let mut out = UnitMatrix::zero(m.system, m.dim);
    out.prefactor = m.prefactor;
    for r in 0..m.dim {
        for c in 0..m.dim {
            if let Some(cell) = &m.cells[r][c] {
                let coef =
                    &cell.coef * BigRational::from_integer(((signs[r] * signs[c]) as i64).into());
                out.set(perm[r], perm[c], coef, cell.unit);
            }
        }
    }
    out
}

/// Block-decompose a real-form representation into its complex or
/// quaternion form. The grouping is the consecutive pair/quadruple
/// structure of the printed basis order; choosing an alternate basic
/// direction permutes which 2-blade plays the imaginary unit.
pub fn block_decompose(
    a: &CliffordAlgebra,
    rep: &RegularRep,
    form: RepForm,
    basic: BasicDirection,
) -> Result<RegularRep> {
    if rep.form != RepForm::Real {
        return Err(AlgebraError::BadSystemShape(
            "block_decompose expects the real form".into(),
        ));
    }
    let system = match (rep.kind, form) {
        (_, RepForm::Real) => UnitSystem::Real,
        (RepKind::Direct, RepForm::Complex) => UnitSystem::ComplexAbi,
        (RepKind::Conjugate, RepForm::Complex) => UnitSystem::ComplexI,
        (RepKind::Direct, RepForm::Quaternion) => UnitSystem::QuatAbi,
        (RepKind::Conjugate, RepForm::Quaternion) => UnitSystem::Pauli,
    };
    let g = system.block();
    let dim = rep.matrices[0].dim;
    if !dim.is_multiple_of(g) {
        return Err(AlgebraError::ShapeMismatch(format!(
            "dimension {dim} not divisible by block {g}"
        )));
    }
    // decompose against the permuted grouping: rewrite every matrix in the
    // coordinates where the image pairs sit consecutively, i.e. conjugate by
    // the inverse signed permutation
    let matrices_in: Vec<UnitMatrix> = if basic == BasicDirection::E21 {
        rep.matrices.clone()
    } else {
        let (perm, signs) = signed_label_permutation(a, basic.permutation())?;
        let mut inv_perm = vec![0usize; perm.len()];
        let mut inv_signs = vec![1i8; perm.len()];
        for (l, &p) in perm.iter().enumerate() {
            inv_perm[p] = l;
            inv_signs[p] = signs[l];
        }
        rep.matrices
            .iter()
            .map(|m| conjugate_by_signed_perm(m, &inv_perm, &inv_signs))
            .collect()
    };
    let labels_in = rep.matrix_labels.clone();
    let mut matrices = Vec::with_capacity(matrices_in.len());
    for m in &matrices_in {
        let global = m.prefactor.0;
        let folded = UnitMatrix {
            prefactor: (1, 0),
            ..m.clone()
        };
        let real = folded.expand_real();
        let mut compressed = UnitMatrix::compress(&real, system)?;
        compressed.extract_prefactor(global);
        matrices.push(compressed);
    }
    let axis_labels: Vec<String> = rep
        .axis_labels
        .iter()
        .skip(g - 1)
        .step_by(g)
        .cloned()
        .collect();
    Ok(RegularRep {
        kind: rep.kind,
        form,
        algebra_id: rep.algebra_id.clone(),
        basic,
        matrix_labels: labels_in,
        axis_labels,
        matrices,
    })
}

/// Relabeling that folds half (or more) of the basis onto a subalgebra.
#[derive(Debug, Clone)]
pub struct CorrespondenceMap {
    pub name: &'static str,
    pub kept: Vec<String>,
    pub fold: BTreeMap<String, String>,
}

impl CorrespondenceMap {
    fn build(name: &'static str, kept: &[&str], folds: &[(&str, &str)]) -> Self {
        CorrespondenceMap {
            name,
            kept: kept.iter().map(|s| s.to_string()).collect(),
            fold: folds
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        }
    }

    /// Fold onto the 8-dimensional subalgebra.
    pub fn r1() -> Self {
        Self::build(
            "r1",
            &["32", "13", "21", "0", "1", "2", "3", "123"],
            &[
                ("42", "32"),
                ("14", "13"),
                ("1324", "21"),
                ("34", "0"),
                ("134", "1"),
                ("234", "2"),
                ("4", "3"),
                ("124", "123"),
            ],
        )
    }

    /// Fold onto the 4-dimensional subalgebra (three quadruple foldings).
    pub fn r2() -> Self {
        Self::build(
            "r2",
            &["32", "13", "21", "0"],
            &[
                ("42", "32"),
                ("14", "13"),
                ("1324", "21"),
                ("34", "0"),
                ("1", "32"),
                ("2", "13"),
                ("3", "21"),
                ("123", "0"),
                ("134", "32"),
                ("234", "13"),
                ("4", "21"),
                ("124", "0"),
            ],
        )
    }

    /// Fold onto the 2-dimensional subalgebra (seven pair foldings).
    pub fn r3() -> Self {
        Self::build(
            "r3",
            &["21", "0"],
            &[
                ("32", "21"),
                ("13", "0"),
                ("42", "21"),
                ("14", "0"),
                ("1324", "21"),
                ("34", "0"),
                ("1", "21"),
                ("2", "0"),
                ("3", "21"),
                ("123", "0"),
                ("134", "21"),
                ("234", "0"),
                ("4", "21"),
                ("124", "0"),
            ],
        )
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "r1" => Ok(Self::r1()),
            "r2" => Ok(Self::r2()),
            "r3" => Ok(Self::r3()),
            other => Err(AlgebraError::BadCorrespondence(other.into())),
        }
    }

    fn validate(&self, a: &CliffordAlgebra) -> Result<()> {
        let mut covered: Vec<&String> = self.kept.iter().collect();
        covered.extend(self.fold.keys());
        if covered.len() != a.dim() {
            return Err(AlgebraError::BadCorrespondence(format!(
                "map covers {} of {} labels",
                covered.len(),
                a.dim()
            )));
        }
        for l in covered {
            a.order().position(l)?;
        }
        for target in self.fold.values() {
            if !self.kept.contains(target) {
                return Err(AlgebraError::BadCorrespondence(format!(
                    "fold target {target} is not kept"
                )));
            }
        }
        // the kept half must be closed under multiplication
        let sig = a.signature();
        for x in &self.kept {
            for y in &self.kept {
                let (_, l) = crate::blades::blade_product(x, y, sig, a.label_map())?;
                if !self.kept.contains(&l) {
                    return Err(AlgebraError::BadCorrespondence(format!(
                        "kept set not closed: {x} ∘ {y} = {l}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Approximate representation: replaced labels are folded onto their kept
/// counterparts, halving (or further reducing) the matrix dimension.
/// Direct kind uses the right-comultiplier rule, conjugate the left rule
/// with the square prefactor.
pub fn approx_rep(
    a: &CliffordAlgebra,
    map: &CorrespondenceMap,
    kind: RepKind,
) -> Result<RegularRep> {
    map.validate(a)?;
    let kept = &map.kept;
    let kd = kept.len();
    let kept_pos = |label: &str| -> Result<usize> {
        if let Some(p) = kept.iter().position(|l| l == label) {
            return Ok(p);
        }
        let target = map
            .fold
            .get(label)
            .ok_or_else(|| AlgebraError::BadCorrespondence(label.into()))?;
        Ok(kept.iter().position(|l| l == target).unwrap())
    };
    let sig = a.signature();
    let mut matrices = Vec::with_capacity(a.dim());
    for label_i in a.order().labels() {
        let mut m = UnitMatrix::zero(UnitSystem::Real, kd);
        for (kpos, label_k) in kept.iter().enumerate() {
            let (s, l) = match kind {
                RepKind::Direct => {
                    crate::blades::blade_product(label_k, label_i, sig, a.label_map())?
                }
                RepKind::Conjugate => {
                    crate::blades::blade_product(label_i, label_k, sig, a.label_map())?
                }
            };
            let target = kept_pos(&l)?;
            match kind {
                RepKind::Direct => m.set(
                    target,
                    kpos,
                    BigRational::from_integer((s as i64).into()),
                    0,
                ),
                RepKind::Conjugate => m.set(
                    kpos,
                    target,
                    BigRational::from_integer((s as i64).into()),
                    0,
                ),
            }
        }
        if kind == RepKind::Conjugate {
            let ipos = a.order().position(label_i)?;
            m.prefactor = (a.metric().diag()[ipos], 0);
        }
        matrices.push(m);
    }
    Ok(RegularRep {
        kind,
        form: RepForm::Real,
        algebra_id: format!("{}~{}", a.id(), map.name),
        basic: BasicDirection::E21,
        matrix_labels: a.order().labels().to_vec(),
        axis_labels: kept.clone(),
        matrices,
    })
}

/// Compress an approximate representation; the grouping is the consecutive
/// pair/quadruple structure of the kept labels.
pub fn approx_decompose(rep: &RegularRep, form: RepForm) -> Result<RegularRep> {
    let system = match (rep.kind, form) {
        (_, RepForm::Real) => UnitSystem::Real,
        (RepKind::Direct, RepForm::Complex) => UnitSystem::ComplexAbi,
        (RepKind::Conjugate, RepForm::Complex) => UnitSystem::ComplexI,
        (RepKind::Direct, RepForm::Quaternion) => UnitSystem::QuatAbi,
        (RepKind::Conjugate, RepForm::Quaternion) => UnitSystem::Pauli,
    };
    let g = system.block();
    let mut matrices = Vec::with_capacity(rep.matrices.len());
    for m in &rep.matrices {
        let global = m.prefactor.0;
        let folded = UnitMatrix {
            prefactor: (1, 0),
            ..m.clone()
        };
        let mut compressed = UnitMatrix::compress(&folded.expand_real(), system)?;
        compressed.extract_prefactor(global);
        matrices.push(compressed);
    }
    let axis_labels: Vec<String> = rep
        .axis_labels
        .iter()
        .skip(g - 1)
        .step_by(g)
        .cloned()
        .collect();
    Ok(RegularRep {
        kind: rep.kind,
        form,
        algebra_id: rep.algebra_id.clone(),
        basic: rep.basic,
        matrix_labels: rep.matrix_labels.clone(),
        axis_labels,
        matrices,
    })
}

/// The gamma-matrix dictionary over the first approximate conjugate
/// representation: 2x2 matrices over Pauli blocks with the square factors
/// folded in.
pub fn gamma_set(a4: &CliffordAlgebra) -> Result<Vec<(String, UnitMatrix)>> {
    let rep = approx_rep(a4, &CorrespondenceMap::r1(), RepKind::Conjugate)?;
    let quat = approx_decompose(&rep, RepForm::Quaternion)?;
    let value = |label: &str| -> Result<UnitMatrix> { Ok(quat.matrix(label)?.fold_prefactor()) };
    let sys = UnitSystem::Pauli;
    let iu = sys.unit_index("i")?;
    let minus_i = |m: &UnitMatrix| m.scale_unit(-1, iu);
    let plus_i = |m: &UnitMatrix| m.scale_unit(1, iu);
    let mut out: Vec<(String, UnitMatrix)> = Vec::new();
    out.push(("gamma0".into(), value("0")?));
    for k in 1..=4u8 {
        out.push((format!("gamma{k}"), minus_i(&value(&k.to_string())?)?));
    }
    out.push(("gamma12".into(), value("21")?));
    out.push(("gamma31".into(), value("13")?));
    out.push(("gamma23".into(), value("32")?));
    out.push(("gamma41".into(), value("14")?));
    out.push(("gamma24".into(), value("42")?));
    out.push(("gamma43".into(), value("34")?));
    out.push(("gamma123".into(), plus_i(&value("123")?)?));
    out.push(("gamma124".into(), plus_i(&value("124")?)?));
    out.push(("gamma234".into(), plus_i(&value("234")?)?));
    // the printed 314 label is the negated 134 blade
    let e314 = value("134")?.scale(&BigRational::from_integer((-1).into()));
    out.push(("gamma314".into(), plus_i(&e314)?));
    out.push(("gamma1234".into(), value("1324")?));
    Ok(out)
}
