//! Golden-fixture files: a line-oriented format for representation tables,
//! hand-transcribed reference tables, plus the cell-by-cell
//! comparison harness. Comparison is at cell-product level (global
//! prefactor times entry unit, expanded to its concrete block), so two
//! different but equal factorizations of the same matrix never diff.

use crate::error::{AlgebraError, Result};
use crate::representations::{RegularRep, RepForm, RepKind};
use crate::units::{parse_token, token, UnitMatrix, UnitSystem};
use num::{BigRational, One, Zero};
use std::fmt;

#[derive(Debug, Clone)]
pub struct GoldenMatrix {
    pub label: String,
    pub matrix: UnitMatrix,
}

#[derive(Debug, Clone)]
pub struct GoldenFile {
    pub algebra: String,
    pub kind: RepKind,
    pub form: RepForm,
    pub order: Vec<String>,
    pub matrices: Vec<GoldenMatrix>,
}

/// Unit system used by a representation of the given kind and form.
pub fn unit_system_for(kind: RepKind, form: RepForm) -> UnitSystem {
    match (kind, form) {
        (_, RepForm::Real) => UnitSystem::Real,
        (RepKind::Direct, RepForm::Complex) => UnitSystem::ComplexAbi,
        (RepKind::Conjugate, RepForm::Complex) => UnitSystem::ComplexI,
        (RepKind::Direct, RepForm::Quaternion) => UnitSystem::QuatAbi,
        (RepKind::Conjugate, RepForm::Quaternion) => UnitSystem::Pauli,
    }
}

impl GoldenFile {
    pub fn parse(text: &str) -> Result<GoldenFile> {
        let mut algebra = None;
        let mut kind = None;
        let mut form = None;
        let mut order: Vec<String> = Vec::new();
        let mut matrices: Vec<GoldenMatrix> = Vec::new();
        type Partial = (String, (i8, usize), Vec<Vec<Option<(BigRational, usize)>>>);
        let mut current: Option<Partial> = None;
        let mut system = UnitSystem::Real;

        let err = |line: usize, msg: &str| AlgebraError::Parse {
            line,
            msg: msg.to_string(),
        };

        let finish = |current: &mut Option<Partial>,
                      matrices: &mut Vec<GoldenMatrix>,
                      dim: usize,
                      system: UnitSystem|
         -> Result<()> {
            if let Some((label, prefactor, cells)) = current.take() {
                if cells.len() != dim {
                    return Err(AlgebraError::ShapeMismatch(format!(
                        "matrix {label} has {} rows, expected {dim}",
                        cells.len()
                    )));
                }
                let mut m = UnitMatrix::zero(system, dim);
                m.prefactor = prefactor;
                for (r, row) in cells.into_iter().enumerate() {
                    for (c, cell) in row.into_iter().enumerate() {
                        if let Some((coef, unit)) = cell {
                            m.set(r, c, coef, unit);
                        }
                    }
                }
                matrices.push(GoldenMatrix { label, matrix: m });
            }
            Ok(())
        };

        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap();
            match head {
                "algebra" => {
                    algebra = Some(
                        words
                            .next()
                            .ok_or_else(|| err(ln + 1, "missing algebra"))?
                            .to_string(),
                    )
                }
                "kind" => {
                    kind = Some(RepKind::parse(
                        words.next().ok_or_else(|| err(ln + 1, "missing kind"))?,
                    )?)
                }
                "form" => {
                    form = Some(RepForm::parse(
                        words.next().ok_or_else(|| err(ln + 1, "missing form"))?,
                    )?);
                    if let (Some(k), Some(f)) = (kind, form) {
                        system = unit_system_for(k, f);
                    }
                }
                "order" => order = words.map(|w| w.to_string()).collect(),
                "matrix" => {
                    finish(&mut current, &mut matrices, order.len(), system)?;
                    let label = words
                        .next()
                        .ok_or_else(|| err(ln + 1, "missing label"))?
                        .to_string();
                    let kw = words
                        .next()
                        .ok_or_else(|| err(ln + 1, "missing prefactor"))?;
                    if kw != "prefactor" {
                        return Err(err(ln + 1, "expected 'prefactor'"));
                    }
                    let tok = words
                        .next()
                        .ok_or_else(|| err(ln + 1, "missing prefactor token"))?;
                    let (coef, unit) =
                        parse_token(tok)?.ok_or_else(|| err(ln + 1, "zero prefactor"))?;
                    let sign = if coef == BigRational::one() {
                        1
                    } else if coef == -BigRational::one() {
                        -1
                    } else {
                        return Err(err(ln + 1, "prefactor coefficient must be +-1"));
                    };
                    current = Some((label, (sign, system.unit_index(&unit)?), Vec::new()));
                }
                _ => {
                    let (_, _, cells) = current
                        .as_mut()
                        .ok_or_else(|| err(ln + 1, "row outside matrix block"))?;
                    let mut row = Vec::new();
                    for tok in line.split_whitespace() {
                        let cell = parse_token(tok)?;
                        row.push(match cell {
                            None => None,
                            Some((coef, unit)) => Some((coef, system.unit_index(&unit)?)),
                        });
                    }
                    if row.len() != order.len() {
                        return Err(err(ln + 1, "row width does not match order"));
                    }
                    cells.push(row);
                }
            }
        }
        finish(&mut current, &mut matrices, order.len(), system)?;
        Ok(GoldenFile {
            algebra: algebra.ok_or_else(|| err(0, "missing algebra header"))?,
            kind: kind.ok_or_else(|| err(0, "missing kind header"))?,
            form: form.ok_or_else(|| err(0, "missing form header"))?,
            order,
            matrices,
        })
    }

    /// Deterministic serialization; `parse(dump(g)) == g` and dumping again
    /// is byte-identical.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("algebra {}\n", self.algebra));
        out.push_str(&format!("kind {}\n", self.kind.name()));
        out.push_str(&format!("form {}\n", self.form.name()));
        out.push_str(&format!("order {}\n", self.order.join(" ")));
        for gm in &self.matrices {
            out.push_str(&format!(
                "matrix {} prefactor {}\n",
                gm.label,
                gm.matrix.prefactor_token()
            ));
            for r in 0..gm.matrix.dim {
                let row: Vec<String> = (0..gm.matrix.dim)
                    .map(|c| gm.matrix.cell_token(r, c))
                    .collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

/// Serialize a computed representation into the golden format.
pub fn dump_rep(rep: &RegularRep) -> GoldenFile {
    GoldenFile {
        algebra: rep.algebra_id.clone(),
        kind: rep.kind,
        form: rep.form,
        order: rep.axis_labels.clone(),
        matrices: rep
            .matrix_labels
            .iter()
            .cloned()
            .zip(rep.matrices.iter().cloned())
            .map(|(label, matrix)| GoldenMatrix { label, matrix })
            .collect(),
    }
}

/// One mismatching cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Erratum {
    pub matrix: String,
    pub row: String,
    pub col: String,
    pub fixture: String,
    pub computed: String,
}

impl fmt::Display for Erratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "matrix {} cell ({}, {}): fixture {}, computed {}",
            self.matrix, self.row, self.col, self.fixture, self.computed
        )
    }
}

/// Empty report if and only if the two tables agree everywhere.
#[derive(Debug, Clone, Default)]
pub struct ErrataReport {
    pub entries: Vec<Erratum>,
}

impl ErrataReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for ErrataReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return writeln!(f, "ok: no mismatches");
        }
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        writeln!(f, "{} mismatching cell(s)", self.entries.len())
    }
}

/// Concrete block value of a cell with the prefactor folded; `None` for zero.
fn cell_block(m: &UnitMatrix, r: usize, c: usize) -> Option<Vec<Vec<BigRational>>> {
    let cell = m.cells[r][c].as_ref()?;
    let tbl = crate::units::table(m.system);
    let (ps, pu) = m.prefactor;
    let (ms, mu) = m.system.mul_units(pu, cell.unit).ok()?;
    let total = &cell.coef * BigRational::from_integer(((ps * ms) as i64).into());
    if total.is_zero() {
        return None;
    }
    Some(
        tbl.units[mu]
            .real
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| &total * BigRational::from_integer((x as i64).into()))
                    .collect()
            })
            .collect(),
    )
}

/// Token for the folded cell value (for reporting).
fn folded_token(m: &UnitMatrix, r: usize, c: usize) -> String {
    match &m.cells[r][c] {
        None => ".".to_string(),
        Some(cell) => {
            let (ps, pu) = m.prefactor;
            match m.system.mul_units(pu, cell.unit) {
                Ok((s, u)) => token(
                    &(&cell.coef * BigRational::from_integer(((ps * s) as i64).into())),
                    m.system.unit_name(u),
                ),
                Err(_) => format!(
                    "{}∘{}",
                    m.prefactor_token(),
                    token(&cell.coef, m.system.unit_name(cell.unit))
                ),
            }
        }
    }
}

/// Cell-by-cell comparison of a computed representation against a fixture.
/// Shape differences (wrong algebra, ordering, label set, dimensions) are
/// hard errors, not errata.
pub fn verify_against_golden(rep: &RegularRep, golden: &GoldenFile) -> Result<ErrataReport> {
    if rep.algebra_id != golden.algebra {
        return Err(AlgebraError::ShapeMismatch(format!(
            "algebra {} vs fixture {}",
            rep.algebra_id, golden.algebra
        )));
    }
    if rep.kind != golden.kind || rep.form != golden.form {
        return Err(AlgebraError::ShapeMismatch("kind/form differ".into()));
    }
    if rep.axis_labels != golden.order {
        return Err(AlgebraError::ShapeMismatch(format!(
            "axis order {:?} vs fixture {:?}",
            rep.axis_labels, golden.order
        )));
    }
    let mut fixture_labels: Vec<&String> = golden.matrices.iter().map(|g| &g.label).collect();
    fixture_labels.sort();
    let mut rep_labels: Vec<&String> = rep.matrix_labels.iter().collect();
    rep_labels.sort();
    if fixture_labels != rep_labels {
        return Err(AlgebraError::ShapeMismatch(
            "matrix label sets differ".into(),
        ));
    }
    let mut report = ErrataReport::default();
    for gm in &golden.matrices {
        let computed = rep.matrix(&gm.label)?;
        if computed.dim != gm.matrix.dim {
            return Err(AlgebraError::ShapeMismatch(format!(
                "matrix {} dimension {} vs fixture {}",
                gm.label, computed.dim, gm.matrix.dim
            )));
        }
        for r in 0..gm.matrix.dim {
            for c in 0..gm.matrix.dim {
                let want = cell_block(&gm.matrix, r, c);
                let got = cell_block(computed, r, c);
                if want != got {
                    report.entries.push(Erratum {
                        matrix: gm.label.clone(),
                        row: golden.order[r].clone(),
                        col: golden.order[c].clone(),
                        fixture: folded_token(&gm.matrix, r, c),
                        computed: folded_token(computed, r, c),
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CliffordAlgebra;
    use crate::representations::{block_decompose, regular_rep_direct, BasicDirection};

    #[test]
    fn parse_dump_fixed_point() {
        let text = "algebra c3\nkind direct\nform quaternion\norder 0 123\nmatrix 0 prefactor +1\n+1 .\n. +1\nmatrix 3 prefactor +i\n. -1\n+1 .\n";
        let g = GoldenFile::parse(text).unwrap();
        assert_eq!(g.dump(), text);
        let again = GoldenFile::parse(&g.dump()).unwrap();
        assert_eq!(again.dump(), text);
    }

    #[test]
    fn self_comparison_is_clean_and_corruption_is_one_cell() {
        let a = CliffordAlgebra::c3();
        let rep = regular_rep_direct(&a);
        let complex = block_decompose(&a, &rep, RepForm::Complex, BasicDirection::E21).unwrap();
        let dumped = dump_rep(&complex);
        let report = verify_against_golden(&complex, &dumped).unwrap();
        assert!(report.is_empty());

        let mut corrupted = dumped.clone();
        // flip one cell of the eps_3 matrix
        let idx = corrupted
            .matrices
            .iter()
            .position(|m| m.label == "3")
            .unwrap();
        let cell = corrupted.matrices[idx].matrix.cells[0][2].clone().unwrap();
        corrupted.matrices[idx]
            .matrix
            .set(0, 2, -cell.coef, cell.unit);
        let report = verify_against_golden(&complex, &corrupted).unwrap();
        assert_eq!(report.entries.len(), 1);
        assert_eq!(report.entries[0].matrix, "3");
    }

    #[test]
    fn shape_mismatch_is_hard_error() {
        let a = CliffordAlgebra::c3();
        let rep = regular_rep_direct(&a);
        let complex = block_decompose(&a, &rep, RepForm::Complex, BasicDirection::E21).unwrap();
        let mut dumped = dump_rep(&complex);
        dumped.order = vec!["13".into(), "0".into()];
        assert!(matches!(
            verify_against_golden(&complex, &dumped),
            Err(AlgebraError::ShapeMismatch(_))
        ));
    }
}
