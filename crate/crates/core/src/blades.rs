//! Exact blade calculus.
//!
//! A blade is an ordered product of distinct generators; multiplying two
//! blades concatenates their index words and normalizes the word by adjacent
//! transpositions (each worth a factor of -1) and contractions of equal
//! neighbours (each worth the metric square of that generator). Everything
//! here is integer arithmetic.

use crate::error::{AlgebraError, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Squares of the generating vectors, one per index `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    squares: Vec<i8>,
}

impl Signature {
    pub fn new(squares: Vec<i8>) -> Result<Self> {
        for &s in &squares {
            if s != 1 && s != -1 {
                return Err(AlgebraError::BadSignatureEntry(s));
            }
        }
        Ok(Signature { squares })
    }

    /// Parse a string like `"+++-"`.
    pub fn parse(text: &str) -> Result<Self> {
        let squares = text
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(AlgebraError::BadLabel(other.to_string())),
            })
            .collect::<Result<Vec<i8>>>()?;
        Signature::new(squares)
    }

    pub fn euclidean(n: usize) -> Self {
        Signature {
            squares: vec![1; n],
        }
    }

    /// `(+,+,+)`: the three-dimensional geometric space.
    pub fn space() -> Self {
        Signature::euclidean(3)
    }

    /// `(+,+,+,-)`: space-time with a negative time square.
    pub fn space_time() -> Self {
        Signature {
            squares: vec![1, 1, 1, -1],
        }
    }

    pub fn n(&self) -> usize {
        self.squares.len()
    }

    /// Metric square of generator `index` (1-based).
    pub fn square(&self, index: u8) -> i8 {
        self.squares[(index - 1) as usize]
    }

    pub fn check_index(&self, index: u8) -> Result<()> {
        if index == 0 || (index as usize) > self.n() {
            return Err(AlgebraError::IndexOutOfRange { index, n: self.n() });
        }
        Ok(())
    }

    pub fn squares(&self) -> &[i8] {
        &self.squares
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.squares {
            write!(f, "{}", if s > 0 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

/// A basis blade in canonical form: strictly increasing generator indices.
/// The empty blade is the algebra unit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blade(Vec<u8>);

impl Blade {
    pub fn scalar() -> Self {
        Blade(Vec::new())
    }

    /// Build from indices that must already be strictly increasing.
    pub fn from_sorted(indices: Vec<u8>) -> Result<Self> {
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(AlgebraError::BadLabel(format!("{indices:?}")));
            }
        }
        Ok(Blade(indices))
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    pub fn grade(&self) -> usize {
        self.0.len()
    }

    pub fn is_scalar(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for i in &self.0 {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// A blade together with an accumulated sign. Sign 0 encodes annihilation
/// and is never produced while all signature entries are non-degenerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedBlade {
    pub sign: i8,
    pub blade: Blade,
}

impl SignedBlade {
    pub fn new(sign: i8, blade: Blade) -> Self {
        SignedBlade { sign, blade }
    }
}

/// Normalize a generator-index word: sort it by adjacent transpositions
/// (factor -1 each) and contract equal neighbours (factor `g_kk` each).
/// Returns the canonical blade of the surviving indices with the total sign.
pub fn canonicalize(seq: &[u8], sig: &Signature) -> Result<SignedBlade> {
    let mut sign: i8 = 1;
    let mut word: Vec<u8> = Vec::with_capacity(seq.len());
    for &idx in seq {
        sig.check_index(idx)?;
        // insert from the right; `word` stays strictly increasing
        let mut pos = word.len();
        while pos > 0 && word[pos - 1] > idx {
            pos -= 1;
            sign = -sign;
        }
        if pos > 0 && word[pos - 1] == idx {
            sign *= sig.square(idx);
            word.remove(pos - 1);
        } else {
            word.insert(pos, idx);
        }
    }
    Ok(SignedBlade::new(sign, Blade(word)))
}

/// Sign of `a ∘ a`. For a k-blade of distinct indices this is
/// `(-1)^(k(k-1)/2) * prod g_ii`.
pub fn blade_square(blade: &Blade, sig: &Signature) -> i8 {
    let k = blade.grade();
    let mut s: i8 = if (k * (k.saturating_sub(1)) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    };
    for &i in blade.indices() {
        s *= sig.square(i);
    }
    s
}

/// Bijection between label strings as printed ("21", "1324", "0", ...) and
/// canonical blades, remembering the parity of the permutation that sorts
/// each label.
#[derive(Debug, Clone)]
pub struct LabelMap {
    n: usize,
    by_label: BTreeMap<String, (Blade, i8)>,
    by_blade: BTreeMap<Blade, (String, i8)>,
}

/// Parse a label string into its generator-index word. `"0"` is the unit.
pub fn parse_label(label: &str) -> Result<Vec<u8>> {
    if label == "0" {
        return Ok(Vec::new());
    }
    if label.is_empty() {
        return Err(AlgebraError::BadLabel(label.to_string()));
    }
    label
        .chars()
        .map(|c| {
            c.to_digit(10)
                .filter(|&d| d >= 1)
                .map(|d| d as u8)
                .ok_or_else(|| AlgebraError::BadLabel(label.to_string()))
        })
        .collect()
}

impl LabelMap {
    /// Build the map for a full set of `2^n` labels. Each label must name a
    /// distinct blade; duplicates or gaps are configuration errors.
    pub fn new(labels: &[String], n: usize) -> Result<Self> {
        let mut by_label = BTreeMap::new();
        let mut by_blade = BTreeMap::new();
        for label in labels {
            let word = parse_label(label)?;
            for &i in &word {
                if i as usize > n {
                    return Err(AlgebraError::IndexOutOfRange { index: i, n });
                }
            }
            let (blade, sign) = sort_word(&word).ok_or_else(|| {
                AlgebraError::BadBasisOrder(format!("label {label:?} repeats an index"))
            })?;
            if by_label
                .insert(label.clone(), (blade.clone(), sign))
                .is_some()
            {
                return Err(AlgebraError::BadBasisOrder(format!(
                    "duplicate label {label:?}"
                )));
            }
            if by_blade.insert(blade, (label.clone(), sign)).is_some() {
                return Err(AlgebraError::BadBasisOrder(format!(
                    "two labels name the same blade (second: {label:?})"
                )));
            }
        }
        if by_label.len() != 1 << n {
            return Err(AlgebraError::BadBasisOrder(format!(
                "expected {} labels, got {}",
                1 << n,
                by_label.len()
            )));
        }
        Ok(LabelMap {
            n,
            by_label,
            by_blade,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Canonical blade and sorting sign of a label: `eps_label = sign * blade`.
    pub fn resolve(&self, label: &str) -> Result<&(Blade, i8)> {
        self.by_label
            .get(label)
            .ok_or_else(|| AlgebraError::BadLabel(label.to_string()))
    }

    /// Label and sign for a canonical blade: `eps_label = sign * blade`.
    pub fn label_of(&self, blade: &Blade) -> Result<&(String, i8)> {
        self.by_blade
            .get(blade)
            .ok_or_else(|| AlgebraError::BadLabel(blade.to_string()))
    }

    /// Re-express a signed canonical blade against its display label.
    pub fn to_label(&self, sb: &SignedBlade) -> Result<(i8, String)> {
        let (label, lsign) = self.label_of(&sb.blade)?;
        // eps_label = lsign * blade  =>  blade = lsign * eps_label
        Ok((sb.sign * lsign, label.clone()))
    }
}

/// Sort a distinct-index word, returning the canonical blade and permutation
/// parity. `None` if an index repeats.
fn sort_word(word: &[u8]) -> Option<(Blade, i8)> {
    let mut v = word.to_vec();
    let mut sign: i8 = 1;
    // insertion sort with parity
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((Blade(v), sign))
}

/// Product of two blades given by their display labels, re-expressed against
/// the display label of the result: the label word of `a` is concatenated with
/// the label word of `b` and normalized.
pub fn blade_product(a: &str, b: &str, sig: &Signature, labels: &LabelMap) -> Result<(i8, String)> {
    let mut word = parse_label(a)?;
    word.extend(parse_label(b)?);
    let normal = canonicalize(&word, sig)?;
    labels.to_label(&normal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3_labels() -> Vec<String> {
        ["32", "13", "21", "0", "1", "2", "3", "123"]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    #[test]
    fn canonicalize_reference_example() {
        // x^{43142} = -x^{312} = -x^{123} (312 is an even permutation of 123)
        let sig = Signature::space_time();
        let got = canonicalize(&[4, 3, 1, 4, 2], &sig).unwrap();
        assert_eq!(got.sign, -1);
        assert_eq!(got.blade.indices(), &[1, 2, 3]);
    }

    #[test]
    fn canonicalize_contractions() {
        let sig = Signature::space();
        let got = canonicalize(&[1, 1], &sig).unwrap();
        assert_eq!(got, SignedBlade::new(1, Blade::scalar()));

        let sig2 = Signature::euclidean(2);
        // 2121 -> -(2211) -> -(g22 g11) = -1 on the scalar
        let got = canonicalize(&[2, 1, 2, 1], &sig2).unwrap();
        assert_eq!(got, SignedBlade::new(-1, Blade::scalar()));
    }

    #[test]
    fn canonicalize_rejects_out_of_range() {
        let sig = Signature::space();
        assert!(matches!(
            canonicalize(&[4], &sig),
            Err(AlgebraError::IndexOutOfRange { index: 4, n: 3 })
        ));
    }

    #[test]
    fn product_matches_reference_cells() {
        let sig = Signature::space();
        let labels = LabelMap::new(&c3_labels(), 3).unwrap();
        // eps_13 ∘ eps_21 = +eps_32
        assert_eq!(
            blade_product("13", "21", &sig, &labels).unwrap(),
            (1, "32".into())
        );
        // eps_123 ∘ eps_1 = -eps_32
        assert_eq!(
            blade_product("123", "1", &sig, &labels).unwrap(),
            (-1, "32".into())
        );
        // unit is neutral
        for x in ["32", "13", "21", "0", "1", "2", "3", "123"] {
            assert_eq!(blade_product("0", x, &sig, &labels).unwrap(), (1, x.into()));
            assert_eq!(blade_product(x, "0", &sig, &labels).unwrap(), (1, x.into()));
        }
    }

    #[test]
    fn square_formula() {
        let sig = Signature::space();
        let b12 = Blade::from_sorted(vec![1, 2]).unwrap();
        assert_eq!(blade_square(&b12, &sig), -1);
        assert_eq!(blade_square(&Blade::scalar(), &sig), 1);
        let st = Signature::space_time();
        let b1234 = Blade::from_sorted(vec![1, 2, 3, 4]).unwrap();
        assert_eq!(blade_square(&b1234, &st), -1);
    }

    #[test]
    fn square_consistent_with_product() {
        let sig = Signature::space_time();
        let labels = LabelMap::new(crate::algebra::BasisOrder::c4_standard().labels(), 4).unwrap();
        for (label, (blade, _)) in labels.by_label.iter() {
            let (s, l) = blade_product(label, label, &sig, &labels).unwrap();
            assert_eq!(l, "0");
            assert_eq!(s, blade_square(blade, &sig), "square of {label}");
        }
    }

    #[test]
    fn label_map_reference_examples() {
        let labels = LabelMap::new(crate::algebra::BasisOrder::c4_standard().labels(), 4).unwrap();
        let (b, s) = labels.resolve("21").unwrap();
        assert_eq!((b.indices(), *s), ([1u8, 2].as_slice(), -1));
        let (b, s) = labels.resolve("1324").unwrap();
        assert_eq!((b.indices(), *s), ([1u8, 2, 3, 4].as_slice(), -1));
        let (b, s) = labels.resolve("0").unwrap();
        assert_eq!((b.indices(), *s), ([].as_slice(), 1));
    }

    #[test]
    fn label_map_rejects_duplicates() {
        let labels: Vec<String> = ["32", "23", "21", "0", "1", "2", "3", "123"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert!(LabelMap::new(&labels, 3).is_err());
    }

    /// Brute-force oracle: expand the word by single rewriting steps applied
    /// at every position, in every order, and check the set of reachable
    /// normal forms is exactly the canonicalize result.
    fn oracle(seq: &[u8], sig: &Signature) -> SignedBlade {
        use std::collections::HashSet;
        fn is_normal(w: &[u8]) -> bool {
            w.windows(2).all(|p| p[0] < p[1])
        }
        let mut normals: HashSet<(i8, Vec<u8>)> = HashSet::new();
        let mut stack = vec![(1i8, seq.to_vec())];
        let mut seen: HashSet<(i8, Vec<u8>)> = HashSet::new();
        while let Some((sign, w)) = stack.pop() {
            if !seen.insert((sign, w.clone())) {
                continue;
            }
            if is_normal(&w) {
                normals.insert((sign, w));
                continue;
            }
            for p in 0..w.len().saturating_sub(1) {
                if w[p] > w[p + 1] {
                    let mut v = w.clone();
                    v.swap(p, p + 1);
                    stack.push((-sign, v));
                } else if w[p] == w[p + 1] {
                    let mut v = w.clone();
                    v.remove(p + 1);
                    v.remove(p);
                    stack.push((sign * sig.square(w[p]), v));
                }
            }
        }
        assert_eq!(normals.len(), 1, "rewriting not confluent for {seq:?}");
        let (sign, w) = normals.into_iter().next().unwrap();
        SignedBlade::new(sign, Blade(w))
    }

    #[test]
    fn oracle_agrees_on_short_words() {
        let sig = Signature::space_time();
        // all words of length <= 4 here; the acceptance suite covers <= 6
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &words {
                for i in 1..=4u8 {
                    let mut v = w.clone();
                    v.push(i);
                    next.push(v);
                }
            }
            for w in &next {
                assert_eq!(
                    canonicalize(w, &sig).unwrap(),
                    oracle(w, &sig),
                    "word {w:?}"
                );
            }
            words = next;
        }
    }
}
