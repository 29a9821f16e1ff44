//! Unit algebras and matrices whose entries are rational multiples of units.
//!
//! A unit is a named block pattern (the printed legend blocks: 1, a, b, i at
//! the complex level; the 2x2-of-complex patterns at the quaternion level).
//! Every unit carries its fully expanded real matrix, so equality of two
//! symbolic matrices is decided exactly by expanding them.

use crate::error::{AlgebraError, Result};
use num::{BigRational, One, Signed, Zero};
use std::fmt;
use std::sync::OnceLock;

/// Which unit set a matrix's entries are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitSystem {
    /// Plain real coefficients.
    Real,
    /// The number algebra {1, a, b, i}.
    ComplexAbi,
    /// Complex-linear entries {1, i} only.
    ComplexI,
    /// Quaternion blocks of a direct algebra: {1, i, a, b} x {unity, I}.
    QuatAbi,
    /// Quaternion blocks of a conjugate algebra: {1, i} x {unity, sigma}.
    Pauli,
    /// Pauli set extended with the antilinear blocks needed by the
    /// antiparticle system (aI, bI and friends).
    PauliExt,
}

#[derive(Debug, Clone)]
pub struct UnitDef {
    pub name: &'static str,
    /// Fully expanded real matrix, entries in {-1, 0, 1}.
    pub real: Vec<Vec<i8>>,
    /// 2x2 complex form (re, im) when the unit is complex-linear at the
    /// quaternion level; `Some` only for Pauli-type units.
    pub complex2: Option<[[(i8, i8); 2]; 2]>,
    /// Complex scalar (re, im) for level-1 complex-linear units.
    pub complex1: Option<(i8, i8)>,
}

pub struct UnitTable {
    pub system: UnitSystem,
    pub units: Vec<UnitDef>,
    /// Expanded block size of each unit.
    pub block: usize,
    /// mul[a][b] = (sign, unit) with concrete(a)*concrete(b) = sign*concrete(unit),
    /// or None when the product leaves the listed set.
    mul: Vec<Vec<Option<(i8, usize)>>>,
}

type SmallMat = Vec<Vec<i8>>;

fn ident(n: usize) -> SmallMat {
    let mut m = vec![vec![0i8; n]; n];
    for (r, row) in m.iter_mut().enumerate() {
        row[r] = 1;
    }
    m
}

fn mat_mul_i8(a: &[Vec<i8>], b: &[Vec<i8>]) -> Vec<Vec<i8>> {
    let n = a.len();
    let mut out = vec![vec![0i8; n]; n];
    for r in 0..n {
        for c in 0..n {
            let mut acc = 0i16;
            for k in 0..n {
                acc += a[r][k] as i16 * b[k][c] as i16;
            }
            out[r][c] = acc as i8;
        }
    }
    out
}

fn neg(m: &[Vec<i8>]) -> Vec<Vec<i8>> {
    m.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
}

/// 2x2 block assembly: each slot is `Some((sign, block))` or `None` for zero.
fn block2(slots: [[Option<(i8, &SmallMat)>; 2]; 2]) -> SmallMat {
    let g = slots
        .iter()
        .flatten()
        .find_map(|s| s.as_ref().map(|(_, b)| b.len()))
        .expect("at least one block");
    let mut out = vec![vec![0i8; 2 * g]; 2 * g];
    for (br, row) in slots.iter().enumerate() {
        for (bc, slot) in row.iter().enumerate() {
            if let Some((sign, blockm)) = slot {
                for r in 0..g {
                    for c in 0..g {
                        out[br * g + r][bc * g + c] = sign * blockm[r][c];
                    }
                }
            }
        }
    }
    out
}

fn level1_mats() -> (SmallMat, SmallMat, SmallMat, SmallMat) {
    let one = ident(2);
    let a = vec![vec![0, 1], vec![1, 0]];
    let b = vec![vec![-1, 0], vec![0, 1]];
    let i = vec![vec![0, 1], vec![-1, 0]];
    (one, a, b, i)
}

fn build_table(system: UnitSystem) -> UnitTable {
    let (c1, ca, cb, ci) = level1_mats();
    let mut units: Vec<UnitDef> = Vec::new();
    let push = |name: &'static str,
                real: Vec<Vec<i8>>,
                complex2: Option<[[(i8, i8); 2]; 2]>,
                complex1: Option<(i8, i8)>,
                units: &mut Vec<UnitDef>| {
        units.push(UnitDef {
            name,
            real,
            complex2,
            complex1,
        });
    };
    match system {
        UnitSystem::Real => {
            push("1", vec![vec![1]], None, Some((1, 0)), &mut units);
        }
        UnitSystem::ComplexAbi | UnitSystem::ComplexI => {
            push("1", c1.clone(), None, Some((1, 0)), &mut units);
            push("i", ci.clone(), None, Some((0, 1)), &mut units);
            if system == UnitSystem::ComplexAbi {
                push("a", ca.clone(), None, None, &mut units);
                push("b", cb.clone(), None, None, &mut units);
            }
        }
        UnitSystem::QuatAbi => {
            // c x unity = diag(c, c); c x I = [[0, c], [-c, 0]]
            for (cn, cm) in [("1", &c1), ("i", &ci), ("a", &ca), ("b", &cb)] {
                let diag = block2([[Some((1, cm)), None], [None, Some((1, cm))]]);
                let name: &'static str = cn;
                push(name, diag, None, None, &mut units);
            }
            for (cn, cm) in [("I", &c1), ("iI", &ci), ("aI", &ca), ("bI", &cb)] {
                let anti = block2([[None, Some((1, cm))], [Some((-1, cm)), None]]);
                push(cn, anti, None, None, &mut units);
            }
        }
        UnitSystem::Pauli | UnitSystem::PauliExt => {
            // sigma patterns over complex entries; sigma3 carries the flipped
            // sign the source tables use
            let unity = |cm: &Vec<Vec<i8>>| block2([[Some((1, cm)), None], [None, Some((1, cm))]]);
            let s1 = |cm: &Vec<Vec<i8>>| block2([[None, Some((1, cm))], [Some((1, cm)), None]]);
            let s3 = |cm: &Vec<Vec<i8>>| block2([[Some((-1, cm)), None], [None, Some((1, cm))]]);
            // sigma2 = [[0, -i], [i, 0]]; multiplying by a level-1 scalar c
            // turns entry +-i into -+(c*i)
            let s2 = |cm: &Vec<Vec<i8>>| {
                let cxi = mat_mul_i8(cm, &ci);
                block2([[None, Some((-1, &cxi))], [Some((1, &cxi)), None]])
            };
            let z = (0i8, 0i8);
            let p = |re: i8, im: i8| (re, im);
            push(
                "1",
                unity(&c1),
                Some([[p(1, 0), z], [z, p(1, 0)]]),
                None,
                &mut units,
            );
            push(
                "s1",
                s1(&c1),
                Some([[z, p(1, 0)], [p(1, 0), z]]),
                None,
                &mut units,
            );
            push(
                "s2",
                s2(&c1),
                Some([[z, p(0, -1)], [p(0, 1), z]]),
                None,
                &mut units,
            );
            push(
                "s3",
                s3(&c1),
                Some([[p(-1, 0), z], [z, p(1, 0)]]),
                None,
                &mut units,
            );
            push(
                "i",
                unity(&ci),
                Some([[p(0, 1), z], [z, p(0, 1)]]),
                None,
                &mut units,
            );
            push(
                "is1",
                s1(&ci),
                Some([[z, p(0, 1)], [p(0, 1), z]]),
                None,
                &mut units,
            );
            push(
                "is2",
                s2(&ci),
                Some([[z, p(1, 0)], [p(-1, 0), z]]),
                None,
                &mut units,
            );
            push(
                "is3",
                s3(&ci),
                Some([[p(0, -1), z], [z, p(0, 1)]]),
                None,
                &mut units,
            );
            if system == UnitSystem::PauliExt {
                push(
                    "a",
                    block2([[Some((1, &ca)), None], [None, Some((1, &ca))]]),
                    None,
                    None,
                    &mut units,
                );
                push(
                    "b",
                    block2([[Some((1, &cb)), None], [None, Some((1, &cb))]]),
                    None,
                    None,
                    &mut units,
                );
                push(
                    "aI",
                    block2([[None, Some((1, &ca))], [Some((-1, &ca)), None]]),
                    None,
                    None,
                    &mut units,
                );
                push(
                    "bI",
                    block2([[None, Some((1, &cb))], [Some((-1, &cb)), None]]),
                    None,
                    None,
                    &mut units,
                );
                push(
                    "as1",
                    block2([[None, Some((1, &ca))], [Some((1, &ca)), None]]),
                    None,
                    None,
                    &mut units,
                );
                push(
                    "bs1",
                    block2([[None, Some((1, &cb))], [Some((1, &cb)), None]]),
                    None,
                    None,
                    &mut units,
                );
                push(
                    "as3",
                    block2([[Some((-1, &ca)), None], [None, Some((1, &ca))]]),
                    None,
                    None,
                    &mut units,
                );
                push(
                    "bs3",
                    block2([[Some((-1, &cb)), None], [None, Some((1, &cb))]]),
                    None,
                    None,
                    &mut units,
                );
            }
        }
    }
    let block = units[0].real.len();
    let n = units.len();
    let mut mul: Vec<Vec<Option<(i8, usize)>>> = vec![vec![None; n]; n];
    for x in 0..n {
        for y in 0..n {
            let prod = mat_mul_i8(&units[x].real, &units[y].real);
            for (u, def) in units.iter().enumerate() {
                if prod == def.real {
                    mul[x][y] = Some((1, u));
                    break;
                }
                if prod == neg(&def.real) {
                    mul[x][y] = Some((-1, u));
                    break;
                }
            }
        }
    }
    UnitTable {
        system,
        units,
        block,
        mul,
    }
}

static TABLES: OnceLock<[UnitTable; 6]> = OnceLock::new();

pub fn table(system: UnitSystem) -> &'static UnitTable {
    let all = TABLES.get_or_init(|| {
        [
            build_table(UnitSystem::Real),
            build_table(UnitSystem::ComplexAbi),
            build_table(UnitSystem::ComplexI),
            build_table(UnitSystem::QuatAbi),
            build_table(UnitSystem::Pauli),
            build_table(UnitSystem::PauliExt),
        ]
    });
    let idx = match system {
        UnitSystem::Real => 0,
        UnitSystem::ComplexAbi => 1,
        UnitSystem::ComplexI => 2,
        UnitSystem::QuatAbi => 3,
        UnitSystem::Pauli => 4,
        UnitSystem::PauliExt => 5,
    };
    &all[idx]
}

impl UnitSystem {
    pub fn name(&self) -> &'static str {
        match self {
            UnitSystem::Real => "real",
            UnitSystem::ComplexAbi => "complex_abi",
            UnitSystem::ComplexI => "complex_i",
            UnitSystem::QuatAbi => "quat_abi",
            UnitSystem::Pauli => "pauli",
            UnitSystem::PauliExt => "pauli_ext",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "real" => UnitSystem::Real,
            "complex_abi" => UnitSystem::ComplexAbi,
            "complex_i" => UnitSystem::ComplexI,
            "quat_abi" => UnitSystem::QuatAbi,
            "pauli" => UnitSystem::Pauli,
            "pauli_ext" => UnitSystem::PauliExt,
            other => return Err(AlgebraError::BadLabel(other.to_string())),
        })
    }

    pub fn block(&self) -> usize {
        table(*self).block
    }

    pub fn unit_index(&self, name: &str) -> Result<usize> {
        table(*self)
            .units
            .iter()
            .position(|u| u.name == name)
            .ok_or_else(|| AlgebraError::BadLabel(name.to_string()))
    }

    pub fn unit_name(&self, idx: usize) -> &'static str {
        table(*self).units[idx].name
    }

    /// Product in the unit table; errors if the product leaves the set.
    pub fn mul_units(&self, x: usize, y: usize) -> Result<(i8, usize)> {
        table(*self).mul[x][y].ok_or(AlgebraError::Decomposition {
            algebra: self.name(),
            row: x,
            col: y,
            size: self.block(),
        })
    }

    pub fn inverse_unit(&self, x: usize) -> Result<(i8, usize)> {
        // every listed unit squares to +-1
        let (s, sq) = self.mul_units(x, x)?;
        if sq != 0 {
            return Err(AlgebraError::Decomposition {
                algebra: self.name(),
                row: x,
                col: x,
                size: self.block(),
            });
        }
        Ok((s, x))
    }
}

/// One matrix entry: a rational multiple of a unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub coef: BigRational,
    pub unit: usize,
}

/// A square matrix over unit-valued cells, with a displayed global prefactor
/// `(sign, unit)` multiplying every cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitMatrix {
    pub system: UnitSystem,
    pub dim: usize,
    pub prefactor: (i8, usize),
    pub cells: Vec<Vec<Option<Cell>>>,
}

impl UnitMatrix {
    pub fn zero(system: UnitSystem, dim: usize) -> Self {
        UnitMatrix {
            system,
            dim,
            prefactor: (1, 0),
            cells: vec![vec![None; dim]; dim],
        }
    }

    pub fn identity(system: UnitSystem, dim: usize) -> Self {
        let mut m = UnitMatrix::zero(system, dim);
        for r in 0..dim {
            m.cells[r][r] = Some(Cell {
                coef: BigRational::one(),
                unit: 0,
            });
        }
        m
    }

    pub fn set(&mut self, r: usize, c: usize, coef: BigRational, unit: usize) {
        if coef.is_zero() {
            self.cells[r][c] = None;
        } else {
            self.cells[r][c] = Some(Cell { coef, unit });
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().flatten().all(|c| c.is_none())
    }

    /// Expanded real matrix with the prefactor folded in.
    pub fn expand_real(&self) -> Vec<Vec<BigRational>> {
        let tbl = table(self.system);
        let g = tbl.block;
        let d = self.dim * g;
        let mut out = vec![vec![BigRational::zero(); d]; d];
        let (ps, pu) = self.prefactor;
        for (r, row) in self.cells.iter().enumerate() {
            for (c, slot) in row.iter().enumerate() {
                if let Some(cell) = slot {
                    let (ms, mu) = tbl.mul[pu][cell.unit].expect("prefactor product closes");
                    let total = &cell.coef * BigRational::from_integer(((ps * ms) as i64).into());
                    let concrete = &tbl.units[mu].real;
                    for br in 0..g {
                        for bc in 0..g {
                            if concrete[br][bc] != 0 {
                                out[r * g + br][c * g + bc] = &total
                                    * BigRational::from_integer((concrete[br][bc] as i64).into());
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Compress a real matrix into unit cells; block size comes from the
    /// system. Prefactor is left at `+1`.
    pub fn compress(real: &[Vec<BigRational>], system: UnitSystem) -> Result<UnitMatrix> {
        let tbl = table(system);
        let g = tbl.block;
        let d = real.len();
        if !d.is_multiple_of(g) {
            return Err(AlgebraError::ShapeMismatch(format!(
                "matrix of size {d} cannot be blocked by {g}"
            )));
        }
        let dim = d / g;
        let mut out = UnitMatrix::zero(system, dim);
        for br in 0..dim {
            for bc in 0..dim {
                let mut all_zero = true;
                'scan: for r in 0..g {
                    for c in 0..g {
                        if !real[br * g + r][bc * g + c].is_zero() {
                            all_zero = false;
                            break 'scan;
                        }
                    }
                }
                if all_zero {
                    continue;
                }
                let mut matched = false;
                'units: for (u, def) in tbl.units.iter().enumerate() {
                    // locate a non-zero pattern entry to fix the scale
                    let mut q: Option<BigRational> = None;
                    for r in 0..g {
                        for c in 0..g {
                            if def.real[r][c] != 0 {
                                q = Some(
                                    &real[br * g + r][bc * g + c]
                                        / BigRational::from_integer((def.real[r][c] as i64).into()),
                                );
                                break;
                            }
                        }
                        if q.is_some() {
                            break;
                        }
                    }
                    let q = q.unwrap();
                    if q.is_zero() {
                        continue;
                    }
                    for r in 0..g {
                        for c in 0..g {
                            let want =
                                &q * BigRational::from_integer((def.real[r][c] as i64).into());
                            if real[br * g + r][bc * g + c] != want {
                                continue 'units;
                            }
                        }
                    }
                    out.set(br, bc, q, u);
                    matched = true;
                    break;
                }
                if !matched {
                    return Err(AlgebraError::Decomposition {
                        algebra: system.name(),
                        row: br,
                        col: bc,
                        size: g,
                    });
                }
            }
        }
        Ok(out)
    }

    /// Pull the complex-level unit of the first non-zero cell out as the
    /// display prefactor, the way the printed tables factor their matrices.
    pub fn extract_prefactor(&mut self, global_sign: i8) {
        let sys = self.system;
        let first = self.cells.iter().flatten().flatten().next().map(|c| c.unit);
        let Some(first_unit) = first else {
            self.prefactor = (global_sign, 0);
            return;
        };
        let cname = complex_part_name(sys, first_unit);
        let cunit = sys.unit_index(cname).expect("complex part is a unit");
        let Ok((inv_sign, inv_unit)) = sys.inverse_unit(cunit) else {
            self.prefactor = (global_sign, 0);
            return;
        };
        // entries become cunit^-1 * cell
        let mut ok = true;
        let mut new_cells = self.cells.clone();
        for row in new_cells.iter_mut() {
            for cell in row.iter_mut().flatten() {
                {
                    match sys.mul_units(inv_unit, cell.unit) {
                        Ok((s, u)) => {
                            cell.coef = &cell.coef
                                * BigRational::from_integer(((s * inv_sign) as i64).into());
                            cell.unit = u;
                        }
                        Err(_) => {
                            ok = false;
                        }
                    }
                }
            }
        }
        if ok {
            self.cells = new_cells;
            self.prefactor = (global_sign, cunit);
        } else {
            self.prefactor = (global_sign, 0);
        }
    }

    /// Matrix product via the unit table (exact).
    pub fn mul(&self, other: &UnitMatrix) -> Result<UnitMatrix> {
        assert_eq!(self.system, other.system);
        assert_eq!(self.dim, other.dim);
        let sys = self.system;
        let mut acc: Vec<Vec<Vec<BigRational>>> = Vec::new();
        let nunits = table(sys).units.len();
        for _ in 0..self.dim {
            acc.push(vec![vec![BigRational::zero(); nunits]; self.dim]);
        }
        for r in 0..self.dim {
            for k in 0..self.dim {
                let Some(x) = &self.cells[r][k] else { continue };
                for c in 0..self.dim {
                    let Some(y) = &other.cells[k][c] else {
                        continue;
                    };
                    let (s, u) = sys.mul_units(x.unit, y.unit)?;
                    acc[r][c][u] +=
                        &x.coef * &y.coef * BigRational::from_integer((s as i64).into());
                }
            }
        }
        let mut out = UnitMatrix::zero(sys, self.dim);
        let (p1s, p1u) = self.prefactor;
        let (p2s, p2u) = other.prefactor;
        let (ps, pu) = sys.mul_units(p1u, p2u)?;
        out.prefactor = (p1s * p2s * ps, pu);
        for r in 0..self.dim {
            for c in 0..self.dim {
                let units: Vec<usize> = (0..nunits).filter(|&u| !acc[r][c][u].is_zero()).collect();
                match units.len() {
                    0 => {}
                    1 => out.set(r, c, acc[r][c][units[0]].clone(), units[0]),
                    _ => {
                        return Err(AlgebraError::Decomposition {
                            algebra: sys.name(),
                            row: r,
                            col: c,
                            size: sys.block(),
                        })
                    }
                }
            }
        }
        Ok(out)
    }

    /// Add (prefactors must already be folded or equal).
    pub fn add(&self, other: &UnitMatrix) -> Result<UnitMatrix> {
        let a = self.fold_prefactor();
        let b = other.fold_prefactor();
        let mut out = UnitMatrix::zero(self.system, self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                match (&a.cells[r][c], &b.cells[r][c]) {
                    (None, None) => {}
                    (Some(x), None) => out.cells[r][c] = Some(x.clone()),
                    (None, Some(y)) => out.cells[r][c] = Some(y.clone()),
                    (Some(x), Some(y)) => {
                        if x.unit == y.unit {
                            let coef = &x.coef + &y.coef;
                            out.set(r, c, coef, x.unit);
                        } else {
                            return Err(AlgebraError::Decomposition {
                                algebra: self.system.name(),
                                row: r,
                                col: c,
                                size: self.system.block(),
                            });
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &BigRational) -> UnitMatrix {
        let mut out = self.clone();
        for cell in out.cells.iter_mut().flatten().flatten() {
            cell.coef = &cell.coef * factor;
        }
        if factor.is_zero() {
            out = UnitMatrix::zero(self.system, self.dim);
        }
        out
    }

    /// Left-multiply every cell by `sign * unit`.
    pub fn scale_unit(&self, sign: i8, unit: usize) -> Result<UnitMatrix> {
        let sys = self.system;
        let mut out = self.clone();
        for cell in out.cells.iter_mut().flatten().flatten() {
            let (s, u) = sys.mul_units(unit, cell.unit)?;
            cell.coef = &cell.coef * BigRational::from_integer(((s * sign) as i64).into());
            cell.unit = u;
        }
        Ok(out)
    }

    /// Fold the prefactor into the cells, leaving prefactor `+1`.
    pub fn fold_prefactor(&self) -> UnitMatrix {
        let (ps, pu) = self.prefactor;
        if ps == 1 && pu == 0 {
            return self.clone();
        }
        let mut out = self.scale_unit(ps, pu).expect("prefactor product closes");
        out.prefactor = (1, 0);
        out
    }

    /// Exact value equality (prefactors folded, expansion compared).
    pub fn value_eq(&self, other: &UnitMatrix) -> bool {
        self.expand_real() == other.expand_real()
    }

    /// Complex expansion for numeric work: `Some` when every unit used is
    /// complex-representable. The returned matrix has size
    /// `dim * c` where `c` is 1 for level-1 systems and 2 for Pauli.
    pub fn expand_complex(&self) -> Option<Vec<Vec<(f64, f64)>>> {
        let tbl = table(self.system);
        let m = self.fold_prefactor();
        let csize = match self.system {
            UnitSystem::Real | UnitSystem::ComplexAbi | UnitSystem::ComplexI => 1,
            UnitSystem::Pauli | UnitSystem::PauliExt => 2,
            UnitSystem::QuatAbi => return None,
        };
        let d = self.dim * csize;
        let mut out = vec![vec![(0.0, 0.0); d]; d];
        for (r, row) in m.cells.iter().enumerate() {
            for (c, slot) in row.iter().enumerate() {
                let Some(cell) = slot else { continue };
                let q = rational_to_f64(&cell.coef);
                let def = &tbl.units[cell.unit];
                if csize == 1 {
                    let (re, im) = def.complex1?;
                    out[r][c] = (q * re as f64, q * im as f64);
                } else {
                    let blocks = def.complex2?;
                    for br in 0..2 {
                        for bc in 0..2 {
                            let (re, im) = blocks[br][bc];
                            out[r * 2 + br][c * 2 + bc] = (q * re as f64, q * im as f64);
                        }
                    }
                }
            }
        }
        Some(out)
    }

    /// Real f64 expansion (prefactor folded).
    pub fn expand_real_f64(&self) -> Vec<Vec<f64>> {
        self.expand_real()
            .iter()
            .map(|row| row.iter().map(rational_to_f64).collect())
            .collect()
    }

    /// Token for a cell: `.` for zero, otherwise `<sign>[<coef>*]<unit>`.
    pub fn cell_token(&self, r: usize, c: usize) -> String {
        match &self.cells[r][c] {
            None => ".".to_string(),
            Some(cell) => token(&cell.coef, self.system.unit_name(cell.unit)),
        }
    }

    pub fn prefactor_token(&self) -> String {
        let (s, u) = self.prefactor;
        token(
            &BigRational::from_integer((s as i64).into()),
            self.system.unit_name(u),
        )
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    use num::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// `+1`, `-i`, `+2*1`, `-1/2*s3`, ...
pub fn token(coef: &BigRational, unit: &str) -> String {
    let sign = if coef.is_negative() { '-' } else { '+' };
    let mag = coef.abs();
    if mag.is_one() {
        format!("{sign}{unit}")
    } else {
        format!("{sign}{mag}*{unit}")
    }
}

/// Parse a cell token back into `(coef, unit name)`.
pub fn parse_token(tok: &str) -> Result<Option<(BigRational, String)>> {
    if tok == "." {
        return Ok(None);
    }
    let bad = || AlgebraError::BadLabel(tok.to_string());
    let (sign, rest) = match tok.chars().next() {
        Some('+') => (1i64, &tok[1..]),
        Some('-') => (-1i64, &tok[1..]),
        _ => return Err(bad()),
    };
    let (coef, unit) = match rest.split_once('*') {
        Some((num, unit)) => {
            let coef = match num.split_once('/') {
                Some((n, d)) => BigRational::new(
                    n.parse::<i64>().map_err(|_| bad())?.into(),
                    d.parse::<i64>().map_err(|_| bad())?.into(),
                ),
                None => BigRational::from_integer(num.parse::<i64>().map_err(|_| bad())?.into()),
            };
            (coef, unit.to_string())
        }
        None => (BigRational::one(), rest.to_string()),
    };
    Ok(Some((coef * BigRational::from_integer(sign.into()), unit)))
}

/// Declared complex-level part of a unit (for prefactor extraction).
fn complex_part_name(system: UnitSystem, unit: usize) -> &'static str {
    let name = system.unit_name(unit);
    match system {
        UnitSystem::Real => "1",
        UnitSystem::ComplexAbi | UnitSystem::ComplexI => name,
        UnitSystem::QuatAbi => match name {
            "1" | "I" => "1",
            "i" | "iI" => "i",
            "a" | "aI" => "a",
            "b" | "bI" => "b",
            _ => "1",
        },
        UnitSystem::Pauli | UnitSystem::PauliExt => match name {
            "1" | "s1" | "s2" | "s3" => "1",
            "i" | "is1" | "is2" | "is3" => "i",
            _ => "1",
        },
    }
}

impl fmt::Display for UnitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "prefactor {}", self.prefactor_token())?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|c| self.cell_token(r, c)).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}
