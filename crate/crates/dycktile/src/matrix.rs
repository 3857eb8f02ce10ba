//! The incidence matrix of the parenthesis-reversal relation, its exact
//! inverse, and the skew-shape view of the inverse entries.
//!
//! Rows and columns are indexed by Dyck paths in ascending height-sequence
//! order, which makes the matrix unit upper triangular.  Row labels are read
//! as confining sets, column labels as noncrossing pairings; inverse entries
//! depend only on the translation class of the skew shape between the two
//! paths and multiply over its connected components.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::catalan::{
    dyck_to_confining, dyck_to_pairing, enumerate_dyck_paths, pushdown_related, DyckPath,
};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::skew::SkewShape;

/// A square matrix of exact integers indexed by the lex positions of Dyck
/// paths, unit upper triangular by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriMatrix {
    n: usize,
    paths: Vec<DyckPath>,
    entries: Vec<Vec<BigInt>>,
}

impl TriMatrix {
    pub fn order(&self) -> usize {
        self.entries.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn paths(&self) -> &[DyckPath] {
        &self.paths
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    /// Row label in the three vocabularies: (word, confining set, pairing).
    pub fn labels(&self, index: usize) -> (String, String, String) {
        let p = &self.paths[index];
        (
            p.to_word().to_paren_string(),
            dyck_to_confining(p).to_string(),
            dyck_to_pairing(p).to_string(),
        )
    }

    pub fn is_unit_upper_triangular(&self) -> bool {
        let m = self.order();
        (0..m).all(|r| {
            self.entries[r][r].is_one() && (0..r).all(|c| self.entries[r][c].is_zero())
        })
    }

    /// Exact inverse of a unit upper triangular matrix by back substitution.
    pub fn invert_unitriangular(&self) -> Result<TriMatrix> {
        if !self.is_unit_upper_triangular() {
            return Err(Error::Singular("matrix is not unit upper triangular".into()));
        }
        let m = self.order();
        let mut inv = vec![vec![BigInt::zero(); m]; m];
        for r in (0..m).rev() {
            inv[r][r] = BigInt::one();
            for c in r + 1..m {
                // inv[r][c] = -sum_{k in (r, c]} self[r][k] * inv[k][c]
                let mut acc = BigInt::zero();
                for k in r + 1..=c {
                    if !self.entries[r][k].is_zero() {
                        acc += &self.entries[r][k] * &inv[k][c];
                    }
                }
                inv[r][c] = -acc;
            }
        }
        Ok(TriMatrix {
            n: self.n,
            paths: self.paths.clone(),
            entries: inv,
        })
    }

    pub fn matmul(&self, other: &TriMatrix) -> TriMatrix {
        let m = self.order();
        let mut out = vec![vec![BigInt::zero(); m]; m];
        for r in 0..m {
            for k in 0..m {
                if self.entries[r][k].is_zero() {
                    continue;
                }
                for c in 0..m {
                    if !other.entries[k][c].is_zero() {
                        out[r][c] += &self.entries[r][k] * &other.entries[k][c];
                    }
                }
            }
        }
        TriMatrix {
            n: self.n,
            paths: self.paths.clone(),
            entries: out,
        }
    }

    pub fn identity(n: usize, caps: &Caps) -> Result<TriMatrix> {
        let paths = enumerate_dyck_paths(n, caps)?;
        let m = paths.len();
        let mut entries = vec![vec![BigInt::zero(); m]; m];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        Ok(TriMatrix { n, paths, entries })
    }

    /// The skew shape attached to an entry: lower path = row, upper = column.
    pub fn entry_shape(&self, row: usize, col: usize) -> SkewShape {
        SkewShape::new(self.paths[row].clone(), self.paths[col].clone())
            .expect("paths of equal length")
    }
}

/// Incidence matrix of the reversal relation: entry (r, c) is 1 exactly when
/// the row path is obtained from the column path by reversing some matched
/// parenthesis pairs.
pub fn build_m(n: usize, caps: &Caps) -> Result<TriMatrix> {
    let paths = enumerate_dyck_paths(n, caps)?;
    let words: Vec<_> = paths.iter().map(|p| p.to_word()).collect();
    let m = paths.len();
    let mut entries = vec![vec![BigInt::zero(); m]; m];
    for r in 0..m {
        for c in 0..m {
            if pushdown_related(&words[r], &words[c])? {
                entries[r][c] = BigInt::one();
            }
        }
    }
    Ok(TriMatrix { n, paths, entries })
}

/// The incidence matrix and its inverse, cached per order.
pub fn m_and_inverse(n: usize, caps: &Caps) -> Result<(TriMatrix, TriMatrix)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, (TriMatrix, TriMatrix)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(pair) = cache.lock().unwrap().get(&n) {
        return Ok(pair.clone());
    }
    let m = build_m(n, caps)?;
    let inv = m.invert_unitriangular()?;
    cache.lock().unwrap().insert(n, (m.clone(), inv.clone()));
    Ok((m, inv))
}

// ---- Inverse entries keyed on skew shapes ----

type EntryCache = Mutex<HashMap<Vec<(i64, i64)>, BigInt>>;

fn minv_cache() -> &'static EntryCache {
    static CACHE: OnceLock<EntryCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The inverse-matrix entry attached to a skew shape, computed by the
/// downward recurrence over chord pushes and memoized by translation class.
/// Invalid containment yields 0; the empty shape yields 1.
pub fn minv_of_skew(shape: &SkewShape) -> BigInt {
    if !shape.is_valid() {
        return BigInt::zero();
    }
    if shape.is_empty() {
        return BigInt::one();
    }
    // The entry multiplies over connected components.
    let mut acc = BigInt::one();
    for comp in shape.connected_components() {
        acc *= minv_connected(&comp);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

fn minv_connected(shape: &SkewShape) -> BigInt {
    let key = shape.canonical_key();
    if let Some(v) = minv_cache().lock().unwrap().get(&key) {
        return v.clone();
    }
    let value = minv_by_recurrence(shape);
    minv_cache().lock().unwrap().insert(key, value.clone());
    value
}

/// Chords of the upper path that can be pushed one level down while staying
/// inside the shape.  Pushing a chord reverses its parenthesis pair, lowering
/// the path by two along the chord's span.
pub(crate) fn pushable_chords(shape: &SkewShape) -> Vec<(usize, usize)> {
    let upper_word = shape.upper().to_word();
    upper_word
        .matched_pairs()
        .into_iter()
        .filter(|&(a, b)| {
            if let Some(pushed) = upper_word.reverse_pairs(&[(a, b)]) {
                let pushed_path = crate::catalan::bpe_to_dyck(&pushed);
                crate::catalan::dominates(shape.lower(), &pushed_path).unwrap_or(false)
            } else {
                false
            }
        })
        .collect()
}

fn minv_by_recurrence(shape: &SkewShape) -> BigInt {
    // M^-1 over a nonempty shape = - sum over nonempty chord sets S of
    // M^-1 of the shape with S pushed down (0 when the push escapes).
    let chords = pushable_chords(shape);
    let upper_word = shape.upper().to_word();
    let mut total = BigInt::zero();
    let k = chords.len();
    for mask in 1u32..(1 << k) {
        let subset: Vec<(usize, usize)> = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| chords[i])
            .collect();
        let Some(pushed) = upper_word.reverse_pairs(&subset) else {
            continue;
        };
        let pushed_path = crate::catalan::bpe_to_dyck(&pushed);
        let sub = SkewShape::new(shape.lower().clone(), pushed_path).expect("equal lengths");
        if !sub.is_valid() {
            continue;
        }
        total -= minv_of_skew(&sub);
    }
    total
}

/// Validation for the upward recurrence: summing inverse entries over all
/// paths that push down onto `lower` must give the Kronecker delta.
pub fn upward_recurrence_check(lower: &DyckPath, upper: &DyckPath, caps: &Caps) -> Result<bool> {
    if lower.len() != upper.len() {
        return Err(Error::LengthMismatch {
            left: lower.len(),
            right: upper.len(),
        });
    }
    let lower_word = lower.to_word();
    let mut total = BigInt::zero();
    for mid in enumerate_dyck_paths(lower.n(), caps)? {
        if pushdown_related(&lower_word, &mid.to_word())? {
            let shape = SkewShape::new(mid, upper.clone())?;
            total += minv_of_skew(&shape);
        }
    }
    let expected = if lower == upper { BigInt::one() } else { BigInt::zero() };
    Ok(total == expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalan::catalan;

    fn caps() -> Caps {
        Caps::default()
    }

    fn int_rows(m: &TriMatrix) -> Vec<Vec<i64>> {
        m.rows()
            .iter()
            .map(|r| r.iter().map(|v| i64::try_from(v).unwrap()).collect())
            .collect()
    }

    #[test]
    fn m_n3_matches_table() {
        let m = build_m(3, &caps()).unwrap();
        assert_eq!(
            int_rows(&m),
            vec![
                vec![1, 1, 1, 1, 1],
                vec![0, 1, 0, 1, 0],
                vec![0, 0, 1, 1, 0],
                vec![0, 0, 0, 1, 1],
                vec![0, 0, 0, 0, 1],
            ]
        );
    }

    #[test]
    fn m_small_orders() {
        assert_eq!(int_rows(&build_m(1, &caps()).unwrap()), vec![vec![1]]);
        assert_eq!(
            int_rows(&build_m(2, &caps()).unwrap()),
            vec![vec![1, 1], vec![0, 1]]
        );
    }

    #[test]
    fn minv_n3_matches_table() {
        let inv = build_m(3, &caps()).unwrap().invert_unitriangular().unwrap();
        assert_eq!(
            int_rows(&inv),
            vec![
                vec![1, -1, -1, 1, -2],
                vec![0, 1, 0, -1, 1],
                vec![0, 0, 1, -1, 1],
                vec![0, 0, 0, 1, -1],
                vec![0, 0, 0, 0, 1],
            ]
        );
    }

    #[test]
    fn identity_inverts_to_identity() {
        let id = TriMatrix::identity(3, &caps()).unwrap();
        assert_eq!(id.invert_unitriangular().unwrap(), id);
    }

    #[test]
    fn inverse_product_checks() {
        for n in 1..=6 {
            let m = build_m(n, &caps()).unwrap();
            assert!(m.is_unit_upper_triangular());
            assert_eq!(m.order() as u128, catalan(n));
            let inv = m.invert_unitriangular().unwrap();
            let id = TriMatrix::identity(n, &caps()).unwrap();
            assert_eq!(m.matmul(&inv), id);
            assert_eq!(inv.matmul(&m), id);
        }
    }

    #[test]
    fn minv_of_skew_examples() {
        // single box
        let s = SkewShape::new(
            DyckPath::parse("UDUD").unwrap(),
            DyckPath::parse("UUDD").unwrap(),
        )
        .unwrap();
        assert_eq!(minv_of_skew(&s), BigInt::from(-1));

        // empty shape
        let z = DyckPath::parse("UDUD").unwrap();
        let s = SkewShape::new(z.clone(), z).unwrap();
        assert_eq!(minv_of_skew(&s), BigInt::from(1));

        // (zigzag, fully nested) at n = 3
        let s = SkewShape::new(
            DyckPath::parse("UDUDUD").unwrap(),
            DyckPath::parse("UUUDDD").unwrap(),
        )
        .unwrap();
        assert_eq!(minv_of_skew(&s), BigInt::from(-2));

        // invalid containment
        let s = SkewShape::new(
            DyckPath::parse("UUDD").unwrap(),
            DyckPath::parse("UDUD").unwrap(),
        )
        .unwrap();
        assert_eq!(minv_of_skew(&s), BigInt::zero());
    }

    #[test]
    fn minv_of_skew_matches_matrix_inverse() {
        for n in 1..=5 {
            let m = build_m(n, &caps()).unwrap();
            let inv = m.invert_unitriangular().unwrap();
            for r in 0..m.order() {
                for c in 0..m.order() {
                    let shape = m.entry_shape(r, c);
                    assert_eq!(&minv_of_skew(&shape), inv.entry(r, c), "n={n} r={r} c={c}");
                }
            }
        }
    }

    #[test]
    fn translation_invariance_of_entries() {
        // entries with translate-equivalent shapes agree, for M and its inverse
        for n in 1..=5 {
            let m = build_m(n, &caps()).unwrap();
            let inv = m.invert_unitriangular().unwrap();
            let mut by_class: HashMap<Vec<(i64, i64)>, (BigInt, BigInt)> = HashMap::new();
            for r in 0..m.order() {
                for c in 0..m.order() {
                    let shape = m.entry_shape(r, c);
                    if !shape.is_valid() {
                        continue;
                    }
                    let key = shape.canonical_key();
                    let pair = (m.entry(r, c).clone(), inv.entry(r, c).clone());
                    if let Some(prev) = by_class.get(&key) {
                        assert_eq!(prev, &pair, "translation class mismatch at n={n}");
                    } else {
                        by_class.insert(key, pair);
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicativity_over_components() {
        for n in 1..=5 {
            let m = build_m(n, &caps()).unwrap();
            let inv = m.invert_unitriangular().unwrap();
            for r in 0..m.order() {
                for c in 0..m.order() {
                    let shape = m.entry_shape(r, c);
                    if !shape.is_valid() {
                        continue;
                    }
                    let comps = shape.connected_components();
                    if comps.len() < 2 {
                        continue;
                    }
                    let mut prod = BigInt::one();
                    for comp in comps {
                        prod *= minv_of_skew(&comp);
                    }
                    assert_eq!(&prod, inv.entry(r, c));
                }
            }
        }
    }

    #[test]
    fn disconnected_two_boxes() {
        let s = SkewShape::new(
            DyckPath::parse("UDUDUD").unwrap(),
            DyckPath::parse("UUDUDD").unwrap(),
        )
        .unwrap();
        let comps = s.connected_components();
        assert_eq!(comps.len(), 2);
        let prod: BigInt = comps.iter().map(minv_of_skew).product();
        assert_eq!(prod, BigInt::one());
        assert_eq!(minv_of_skew(&s), BigInt::one());
    }

    #[test]
    fn upward_recurrence_examples() {
        let caps = caps();
        let z3 = DyckPath::zigzag(3);
        let nest3 = DyckPath::nested(3);
        assert!(upward_recurrence_check(&z3, &z3, &caps).unwrap());
        assert!(upward_recurrence_check(&nest3, &z3, &caps).unwrap());
        for n in 1..=5 {
            for a in enumerate_dyck_paths(n, &caps).unwrap() {
                for b in enumerate_dyck_paths(n, &caps).unwrap() {
                    assert!(upward_recurrence_check(&a, &b, &caps).unwrap());
                }
            }
        }
    }

    #[test]
    fn downward_recurrence_exhaustive() {
        // sum over paths rho obtained by pushing chord sets of mu, of the
        // inverse entry for lambda/rho, equals the Kronecker delta
        let caps = caps();
        for n in 1..=5 {
            let paths = enumerate_dyck_paths(n, &caps).unwrap();
            for lambda in &paths {
                for mu in &paths {
                    let mu_word = mu.to_word();
                    let mut total = BigInt::zero();
                    for rho in &paths {
                        if pushdown_related(&rho.to_word(), &mu_word).unwrap() {
                            let shape = SkewShape::new(lambda.clone(), rho.clone()).unwrap();
                            total += minv_of_skew(&shape);
                        }
                    }
                    let expected = if lambda == mu { BigInt::one() } else { BigInt::zero() };
                    assert_eq!(total, expected);
                }
            }
        }
    }

    #[test]
    fn labels_for_n3() {
        let m = build_m(3, &caps()).unwrap();
        let (word, set, pairing) = m.labels(1);
        assert_eq!(word, "()(())");
        assert_eq!(set, "{1,2,3,6}");
        assert_eq!(pairing, "1-2,3-6,4-5");
    }
}
