//! Clifford algebras with a fixed basis ordering: structure constants,
//! exact multivector arithmetic, inverses, signature classification and the
//! structure-equation differentials.

use crate::blades::{blade_square, canonicalize, parse_label, LabelMap, Signature};
use crate::error::{AlgebraError, Result};
use num::{BigRational, One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// An explicit ordering of the `2^n` basis labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisOrder {
    labels: Vec<String>,
}

impl BasisOrder {
    pub fn new(labels: Vec<String>) -> Self {
        BasisOrder { labels }
    }

    /// The printed ordering for the three-dimensional algebra.
    pub fn c3_standard() -> Self {
        BasisOrder::new(
            ["32", "13", "21", "0", "1", "2", "3", "123"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        )
    }

    /// The printed ordering for the space-time algebra.
    pub fn c4_standard() -> Self {
        BasisOrder::new(
            [
                "32", "13", "21", "0", "42", "14", "1324", "34", "1", "2", "3", "123", "134",
                "234", "4", "124",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        )
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| AlgebraError::BadLabel(label.to_string()))
    }
}

/// Sparse structure-constant tensor: for each ordered pair of basis
/// positions exactly one target position with a sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureTensor {
    dim: usize,
    // entry[a][b] = (target, sign)
    entry: Vec<Vec<(usize, i8)>>,
}

impl StructureTensor {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> (usize, i8)) -> Self {
        let entry = (0..dim)
            .map(|a| (0..dim).map(|b| f(a, b)).collect())
            .collect();
        StructureTensor { dim, entry }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The unique `(target, sign)` for a pair of factor positions.
    pub fn get(&self, a: usize, b: usize) -> (usize, i8) {
        self.entry[a][b]
    }

    /// The coefficient at `target` for a pair of factor positions.
    pub fn coeff(&self, target: usize, a: usize, b: usize) -> i8 {
        let (l, s) = self.entry[a][b];
        if l == target {
            s
        } else {
            0
        }
    }
}

/// Diagonal metric over basis labels, `g_IK = C^0_IK`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metric {
    diag: Vec<i8>,
}

impl Metric {
    pub fn diag(&self) -> &[i8] {
        &self.diag
    }

    /// Diagonal entries of the inverse; for a +/-1 diagonal this is itself.
    pub fn inverse_diag(&self) -> &[i8] {
        &self.diag
    }
}

/// A Clifford algebra with its structure-constant tensor. The tensor is laid
/// out as `product[k][i] = (l, s)` meaning `eps_K ∘ eps_I = s * eps_L`, i.e.
/// `C^L_KI = s`.
#[derive(Debug, Clone)]
pub struct CliffordAlgebra {
    n: usize,
    sig: Signature,
    order: BasisOrder,
    labels: LabelMap,
    product: StructureTensor,
    metric: Metric,
    unit: usize,
}

impl CliffordAlgebra {
    pub fn build(n: usize, sig: Signature, order: BasisOrder) -> Result<Self> {
        if sig.n() != n {
            return Err(AlgebraError::BadBasisOrder(format!(
                "signature has {} entries for n={n}",
                sig.n()
            )));
        }
        if order.len() != 1 << n {
            return Err(AlgebraError::BadBasisOrder(format!(
                "order has {} labels for n={n}",
                order.len()
            )));
        }
        let labels = LabelMap::new(order.labels(), n)?;
        let dim = order.len();
        let mut entry = vec![vec![(0usize, 0i8); dim]; dim];
        for (k, kl) in order.labels().iter().enumerate() {
            for (i, il) in order.labels().iter().enumerate() {
                let mut word = parse_label(kl)?;
                word.extend(parse_label(il)?);
                let normal = canonicalize(&word, &sig)?;
                let (s, l) = labels.to_label(&normal)?;
                entry[k][i] = (order.position(&l)?, s);
            }
        }
        let product = StructureTensor { dim, entry };
        let unit = order.position("0")?;
        let diag = order
            .labels()
            .iter()
            .map(|l| {
                let (blade, _) = labels.resolve(l)?;
                Ok(blade_square(blade, &sig))
            })
            .collect::<Result<Vec<i8>>>()?;
        let algebra = CliffordAlgebra {
            n,
            sig,
            order,
            labels,
            product,
            metric: Metric { diag },
            unit,
        };
        algebra.check_unit_laws()?;
        Ok(algebra)
    }

    pub fn c3() -> Self {
        CliffordAlgebra::build(3, Signature::space(), BasisOrder::c3_standard())
            .expect("built-in preset")
    }

    pub fn c4() -> Self {
        CliffordAlgebra::build(4, Signature::space_time(), BasisOrder::c4_standard())
            .expect("built-in preset")
    }

    fn check_unit_laws(&self) -> Result<()> {
        for x in 0..self.dim() {
            if self.product.get(x, self.unit) != (x, 1) || self.product.get(self.unit, x) != (x, 1)
            {
                return Err(AlgebraError::BadBasisOrder("unit laws violated".into()));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.product.dim()
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn order(&self) -> &BasisOrder {
        &self.order
    }

    pub fn label_map(&self) -> &LabelMap {
        &self.labels
    }

    /// `C^L_KI` as the sparse pair map `(k,i) -> (l, s)`.
    pub fn tensor(&self) -> &StructureTensor {
        &self.product
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn unit_position(&self) -> usize {
        self.unit
    }

    /// Identifier used in serialized documents.
    pub fn id(&self) -> String {
        format!("c{}", self.n)
    }

    pub fn basis_label(&self, pos: usize) -> &str {
        &self.order.labels()[pos]
    }

    /// Basis multivector for a label.
    pub fn basis(&self, label: &str) -> Result<MultiVector> {
        Ok(MultiVector::basis(self.order.position(label)?))
    }

    pub fn unit_vector(&self) -> MultiVector {
        MultiVector::basis(self.unit)
    }

    /// Bilinear product: `multiply(x, y) = x ∘ y`, coordinates
    /// `(x∘y)^L = C^L_KI x^K y^I`.
    pub fn multiply(&self, x: &MultiVector, y: &MultiVector) -> MultiVector {
        let mut coords: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (&k, xv) in &x.coords {
            if xv.is_zero() {
                continue;
            }
            for (&i, yv) in &y.coords {
                let (l, s) = self.product.get(k, i);
                let term = xv * yv * BigRational::from_integer(s.into());
                let slot = coords.entry(l).or_insert_with(BigRational::zero);
                *slot += term;
            }
        }
        coords.retain(|_, v| !v.is_zero());
        MultiVector { coords }
    }

    /// Left-regular action matrix of `x`: column `i` holds the coordinates of
    /// `x ∘ eps_I`.
    pub fn left_action_matrix(&self, x: &MultiVector) -> Vec<Vec<BigRational>> {
        let d = self.dim();
        let mut m = vec![vec![BigRational::zero(); d]; d];
        for (&k, xv) in &x.coords {
            for i in 0..d {
                let (l, s) = self.product.get(k, i);
                m[l][i] += xv * BigRational::from_integer(s.into());
            }
        }
        m
    }

    /// Exact inverse via the left-regular linear system. Errors on zero
    /// divisors. Both one-sided identities are verified.
    pub fn inverse(&self, x: &MultiVector) -> Result<MultiVector> {
        if x.is_zero() {
            return Err(AlgebraError::NotInvertible);
        }
        let d = self.dim();
        let m = self.left_action_matrix(x);
        let mut rhs = vec![BigRational::zero(); d];
        rhs[self.unit] = BigRational::one();
        let y = solve_exact(m, rhs).ok_or(AlgebraError::NotInvertible)?;
        let inv = MultiVector::from_coords(y);
        // left-regular action solved x ∘ inv = 1; the right identity is
        // asserted, not assumed
        let left = self.multiply(&inv, x);
        if left != self.unit_vector() {
            return Err(AlgebraError::NotInvertible);
        }
        Ok(inv)
    }

    /// Second differential at the unit: `dx1 ∘ dx2` (coordinate form
    /// `C^L_KI dx2^I dx1^K`).
    pub fn second_differential(&self, dx1: &MultiVector, dx2: &MultiVector) -> MultiVector {
        self.multiply(dx1, dx2)
    }

    /// n-th order chain: `d1 ∘ d2 ∘ ... ∘ dn`.
    pub fn nth_differential(&self, ds: &[MultiVector]) -> MultiVector {
        let mut acc = self.unit_vector();
        for d in ds {
            acc = self.multiply(&acc, d);
        }
        acc
    }

    /// General structure differential `dx1 ∘ x^{-1} ∘ dx2`; reduces to
    /// `second_differential` at `x = eps_0`.
    pub fn general_structure_differential(
        &self,
        dx1: &MultiVector,
        dx2: &MultiVector,
        x: &MultiVector,
    ) -> Result<MultiVector> {
        let inv = self.inverse(x)?;
        Ok(self.multiply(&self.multiply(dx1, &inv), dx2))
    }
}

/// Exact Gaussian elimination; `None` when the matrix is singular.
pub fn solve_exact(
    mut m: Vec<Vec<BigRational>>,
    mut rhs: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let d = m.len();
    for col in 0..d {
        let pivot = (col..d).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = m[col][col].clone();
        for r in 0..d {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..d {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
            let sub = &factor * &rhs[col];
            rhs[r] -= sub;
        }
    }
    Some((0..d).map(|r| &rhs[r] / &m[r][r]).collect())
}

/// Finitely supported exact coordinates over a basis ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiVector {
    coords: BTreeMap<usize, BigRational>,
}

impl MultiVector {
    pub fn zero() -> Self {
        MultiVector {
            coords: BTreeMap::new(),
        }
    }

    pub fn basis(pos: usize) -> Self {
        let mut coords = BTreeMap::new();
        coords.insert(pos, BigRational::one());
        MultiVector { coords }
    }

    pub fn from_coords(v: Vec<BigRational>) -> Self {
        let coords = v
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        MultiVector { coords }
    }

    pub fn from_pairs(pairs: &[(usize, BigRational)]) -> Self {
        let mut coords = BTreeMap::new();
        for (p, c) in pairs {
            if !c.is_zero() {
                coords.insert(*p, c.clone());
            }
        }
        MultiVector { coords }
    }

    pub fn coord(&self, pos: usize) -> BigRational {
        self.coords
            .get(&pos)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coords(&self) -> &BTreeMap<usize, BigRational> {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return MultiVector::zero();
        }
        MultiVector {
            coords: self.coords.iter().map(|(&p, c)| (p, c * factor)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coords = self.coords.clone();
        for (&p, c) in &other.coords {
            let slot = coords.entry(p).or_insert_with(BigRational::zero);
            *slot += c;
        }
        coords.retain(|_, v| !v.is_zero());
        MultiVector { coords }
    }
}

/// Per-grade square signs of the basis blades, grouped and ordered the way
/// the classification lists them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub grades: Vec<Vec<(String, i8)>>,
}

/// Label order used inside each grade of the classification listing.
fn grade_labels(n: usize, grade: usize) -> Vec<String> {
    match (n, grade) {
        (_, 0) => vec!["0".into()],
        (_, 1) => (1..=n).map(|i| i.to_string()).collect(),
        (2, 2) => vec!["21".into()],
        (3, 2) => vec!["21".into(), "13".into(), "32".into()],
        (4, 2) => ["21", "13", "32", "14", "24", "34"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        (3, 3) => vec!["123".into()],
        (4, 3) => ["123", "124", "134", "234"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        (4, 4) => vec!["1234".into()],
        _ => {
            // beyond the printed listings fall back to ascending label order
            let mut out = Vec::new();
            let mut pick = vec![0u8; grade];
            fn rec(
                n: usize,
                grade: usize,
                start: u8,
                pick: &mut Vec<u8>,
                depth: usize,
                out: &mut Vec<String>,
            ) {
                if depth == grade {
                    out.push(pick.iter().map(|i| i.to_string()).collect::<String>());
                    return;
                }
                for i in start..=(n as u8) {
                    pick[depth] = i;
                    rec(n, grade, i + 1, pick, depth + 1, out);
                }
            }
            rec(n, grade, 1, &mut pick, 0, &mut out);
            out
        }
    }
}

/// Square signs of every basis blade, in grade order, using the printed
/// per-grade label sequences.
pub fn classify(n: usize, sig: &Signature) -> Result<Classification> {
    if sig.n() != n {
        return Err(AlgebraError::BadBasisOrder(format!(
            "signature has {} entries for n={n}",
            sig.n()
        )));
    }
    let mut grades = Vec::with_capacity(n + 1);
    for g in 0..=n {
        let mut row = Vec::new();
        for label in grade_labels(n, g) {
            let word = parse_label(&label)?;
            let normal = canonicalize(&word, sig)?;
            row.push((label, blade_square(&normal.blade, sig)));
        }
        grades.push(row);
    }
    Ok(Classification { grades })
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (gi, grade) in self.grades.iter().enumerate() {
            if gi > 0 {
                write!(f, ", ")?;
            }
            for (_, s) in grade {
                write!(f, "{}", if *s > 0 { '+' } else { '-' })?;
            }
        }
        write!(f, ")")
    }
}
