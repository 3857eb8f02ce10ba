//! Double-dimer pairing probabilities from boundary measurements.
//!
//! The signed determinants `D_S` of gated boundary measurements satisfy
//! `D_S/D_∅ = Σ_π M_{S,π} Pr(π)`, so inverting the incidence matrix turns
//! measured determinants into the exact pairing distribution.  Marginal
//! probabilities of partial pairings reduce to formal integer combinations of
//! `D_S` terms: contiguous blocks read off an inverse-matrix row, chords
//! joining distinct blocks are filled in over the finitely many completions
//! of the gap, and the remaining cross-block pairings are recursively
//! subtracted.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::catalan::{dyck_to_confining, dyck_to_pairing, pairing_to_dyck, NoncrossingPairing};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::graph::{parse_rational_value, rational_to_value};
use crate::linalg::determinant;
use crate::matrix::m_and_inverse;

/// Boundary measurements: values `X_(i,j)` for odd node position `i` and even
/// node position `j` (1-based positions in the circular node order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XMatrix {
    n: usize,
    entries: BTreeMap<(usize, usize), BigRational>,
}

impl XMatrix {
    pub fn new(n: usize, entries: BTreeMap<(usize, usize), BigRational>) -> Result<Self> {
        for i in (1..=2 * n).step_by(2) {
            for j in (2..=2 * n).step_by(2) {
                if !entries.contains_key(&(i, j)) {
                    return Err(Error::BadParameter(format!("missing X entry ({i},{j})")));
                }
            }
        }
        Ok(XMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// X value for odd position `i`, even position `j`.
    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[&(i, j)]
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), BigRational> {
        &self.entries
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        let n = value
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("missing \"n\"".into()))? as usize;
        let mut entries = BTreeMap::new();
        for e in value
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("missing \"entries\"".into()))?
        {
            let arr = e
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| Error::Json("entry must be [i, j, value]".into()))?;
            let i = arr[0]
                .as_u64()
                .ok_or_else(|| Error::Json("entry index must be an integer".into()))?
                as usize;
            let j = arr[1]
                .as_u64()
                .ok_or_else(|| Error::Json("entry index must be an integer".into()))?
                as usize;
            if i % 2 == 0 || j % 2 == 1 || i > 2 * n || j > 2 * n {
                return Err(Error::Json(format!("entry ({i},{j}) must be (odd, even) in range")));
            }
            entries.insert((i, j), parse_rational_value(&arr[2])?);
        }
        XMatrix::new(n, entries)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "entries": self
                .entries
                .iter()
                .map(|(&(i, j), v)| json!([i, j, rational_to_value(v)]))
                .collect::<Vec<_>>(),
        })
    }
}

/// Exact distribution of the node pairing.
#[derive(Debug, Clone)]
pub struct PairingDistribution {
    pub probabilities: BTreeMap<NoncrossingPairing, BigRational>,
    /// False when some value is negative, which can happen for measurement
    /// matrices that do not come from a genuine graph.  Values are reported
    /// as computed, never clamped.
    pub all_nonnegative: bool,
}

impl PairingDistribution {
    pub fn total(&self) -> BigRational {
        self.probabilities.values().sum()
    }
}

/// The gated determinant `D_S`: entry (i, j) is `(-1)^((|i-j|-1)/2) X_(i,j)`
/// when i and j are both inside or both outside `S`, else 0; rows run over
/// odd positions, columns over even positions.
pub fn d_s(x: &XMatrix, s: &BTreeSet<usize>) -> Result<BigRational> {
    let m = 2 * x.n();
    if let Some(&max) = s.iter().next_back() {
        if max > m || s.iter().any(|&v| v == 0) {
            return Err(Error::BadParameter("set element out of range".into()));
        }
    }
    let odd_in = s.iter().filter(|&&v| v % 2 == 1).count();
    if 2 * odd_in != s.len() {
        return Err(Error::BadParameter(format!(
            "set {s:?} must have equally many odd and even elements"
        )));
    }
    let mut mat = Vec::with_capacity(x.n());
    for i in (1..=m).step_by(2) {
        let mut row = Vec::with_capacity(x.n());
        for j in (2..=m).step_by(2) {
            if s.contains(&i) == s.contains(&j) {
                let gap = i.abs_diff(j);
                let sign = if ((gap - 1) / 2) % 2 == 0 { 1 } else { -1 };
                row.push(x.entry(i, j) * BigRational::from(BigInt::from(sign)));
            } else {
                row.push(BigRational::zero());
            }
        }
        mat.push(row);
    }
    Ok(determinant(&mat))
}

/// Solves for the full pairing distribution: probabilities are inverse-matrix
/// rows applied to the normalized determinants.
pub fn pairing_distribution(x: &XMatrix, caps: &Caps) -> Result<PairingDistribution> {
    let n = x.n();
    let (m, inv) = m_and_inverse(n, caps)?;
    let d_empty = d_s(x, &BTreeSet::new())?;
    if d_empty.is_zero() {
        return Err(Error::Singular("D over the empty set vanishes".into()));
    }
    let ratios: Vec<BigRational> = m
        .paths()
        .iter()
        .map(|p| {
            let set: BTreeSet<usize> = dyck_to_confining(p).members().clone();
            Ok(d_s(x, &set)? / &d_empty)
        })
        .collect::<Result<_>>()?;
    let mut probabilities = BTreeMap::new();
    let mut all_nonnegative = true;
    for (r, path) in m.paths().iter().enumerate() {
        let mut p = BigRational::zero();
        for (c, ratio) in ratios.iter().enumerate() {
            let coeff = inv.entry(r, c);
            if !coeff.is_zero() {
                p += BigRational::from(coeff.clone()) * ratio;
            }
        }
        if p.is_negative() {
            all_nonnegative = false;
        }
        probabilities.insert(dyck_to_pairing(path), p);
    }
    Ok(PairingDistribution { probabilities, all_nonnegative })
}

// ---- Partial pairings and marginals ----

/// A partial noncrossing pairing of `{1,…,2n}`: disjoint chords, each joining
/// an odd position to an even position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subpairing {
    n_nodes: usize,
    chords: Vec<(usize, usize)>, // (min, max), sorted
}

impl Subpairing {
    pub fn new(n_nodes: usize, chords: &[(usize, usize)]) -> Result<Self> {
        if n_nodes == 0 || n_nodes % 2 != 0 {
            return Err(Error::BadParameter("node count must be positive and even".into()));
        }
        let mut sorted: Vec<(usize, usize)> =
            chords.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        sorted.sort();
        let mut seen = BTreeSet::new();
        for &(a, b) in &sorted {
            if a == 0 || b > n_nodes {
                return Err(Error::InvalidPairing(format!("chord ({a},{b}) out of range")));
            }
            if (a + b) % 2 == 0 {
                return Err(Error::InvalidPairing(format!(
                    "chord ({a},{b}) joins positions of equal parity"
                )));
            }
            if !seen.insert(a) || !seen.insert(b) {
                return Err(Error::InvalidPairing("chords must be disjoint".into()));
            }
        }
        for &(a, b) in &sorted {
            for &(c, d) in &sorted {
                if a < c && c < b && b < d {
                    return Err(Error::InvalidPairing(format!(
                        "chords ({a},{b}) and ({c},{d}) cross"
                    )));
                }
            }
        }
        Ok(Subpairing { n_nodes, chords: sorted })
    }

    /// Parses `"1-2,3-6,5-4"` over `n_nodes` positions.
    pub fn parse(text: &str, n_nodes: usize) -> Result<Self> {
        let mut chords = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (a, b) = part
                .split_once('-')
                .ok_or_else(|| Error::InvalidPairing(format!("expected a-b, got {part:?}")))?;
            let a: usize = a
                .trim()
                .parse()
                .map_err(|_| Error::InvalidPairing(format!("bad index {a:?}")))?;
            let b: usize = b
                .trim()
                .parse()
                .map_err(|_| Error::InvalidPairing(format!("bad index {b:?}")))?;
            chords.push((a, b));
        }
        Subpairing::new(n_nodes, &chords)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn chords(&self) -> &[(usize, usize)] {
        &self.chords
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.chords.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    /// Maximal runs of consecutive support positions, as (start, end) pairs.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let support = self.support();
        let mut blocks = Vec::new();
        let mut run: Option<(usize, usize)> = None;
        for &v in &support {
            match &mut run {
                Some((_, end)) if *end + 1 == v => *end = v,
                Some(done) => {
                    blocks.push(*done);
                    run = Some((v, v));
                }
                None => run = Some((v, v)),
            }
        }
        if let Some(done) = run {
            blocks.push(done);
        }
        blocks
    }

    fn block_of(&self, blocks: &[(usize, usize)], v: usize) -> usize {
        blocks
            .iter()
            .position(|&(s, e)| s <= v && v <= e)
            .expect("support position lies in a block")
    }

    /// A chord whose endpoints lie in different blocks, if any.
    pub fn cross_block_chord(&self) -> Option<(usize, usize)> {
        let blocks = self.blocks();
        self.chords
            .iter()
            .copied()
            .find(|&(a, b)| self.block_of(&blocks, a) != self.block_of(&blocks, b))
    }

    fn with_extra(&self, extra: &[(usize, usize)]) -> Result<Subpairing> {
        let mut chords = self.chords.clone();
        chords.extend_from_slice(extra);
        Subpairing::new(self.n_nodes, &chords)
    }

    /// True when a full pairing contains every chord of this subpairing.
    pub fn consistent_with(&self, pairing: &NoncrossingPairing) -> bool {
        self.chords.iter().all(|&(a, b)| pairing.partner(a) == b)
    }
}

impl fmt::Display for Subpairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.chords.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Formal integer combination of node subsets; the union operator extends
/// bilinearly.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalSetCombo {
    terms: BTreeMap<BTreeSet<usize>, BigInt>,
}

impl FormalSetCombo {
    pub fn zero() -> Self {
        FormalSetCombo::default()
    }

    pub fn single(set: BTreeSet<usize>, coeff: BigInt) -> Self {
        let mut combo = FormalSetCombo::default();
        combo.add_term(set, coeff);
        combo
    }

    pub fn terms(&self) -> &BTreeMap<BTreeSet<usize>, BigInt> {
        &self.terms
    }

    pub fn add_term(&mut self, set: BTreeSet<usize>, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(set).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            let dead: Vec<BTreeSet<usize>> = self
                .terms
                .iter()
                .filter(|(_, c)| c.is_zero())
                .map(|(s, _)| s.clone())
                .collect();
            for s in dead {
                self.terms.remove(&s);
            }
        }
    }

    pub fn add(&mut self, other: &FormalSetCombo) {
        for (s, c) in &other.terms {
            self.add_term(s.clone(), c.clone());
        }
    }

    pub fn sub_scaled(&mut self, other: &FormalSetCombo, scale: &BigInt) {
        for (s, c) in &other.terms {
            self.add_term(s.clone(), -(c * scale));
        }
    }

    /// Bilinear union: every term of `self` united with every term of `other`.
    pub fn union_product(&self, other: &FormalSetCombo) -> FormalSetCombo {
        let mut out = FormalSetCombo::default();
        for (s1, c1) in &self.terms {
            for (s2, c2) in &other.terms {
                let mut s = s1.clone();
                s.extend(s2.iter().copied());
                out.add_term(s, c1 * c2);
            }
        }
        out
    }

    /// Evaluates against measurements: `Σ coeff · D_S / D_∅`.
    pub fn evaluate(&self, x: &XMatrix) -> Result<BigRational> {
        let d_empty = d_s(x, &BTreeSet::new())?;
        if d_empty.is_zero() {
            return Err(Error::Singular("D over the empty set vanishes".into()));
        }
        let mut total = BigRational::zero();
        for (set, coeff) in &self.terms {
            total += BigRational::from(coeff.clone()) * d_s(x, set)? / &d_empty;
        }
        Ok(total)
    }
}

/// Formal combination for a subpairing whose support is one contiguous block:
/// the inverse-matrix row of the block pairing, sets shifted into place.
pub fn contiguous_marginal_combo(sub: &Subpairing, caps: &Caps) -> Result<FormalSetCombo> {
    if sub.chords().is_empty() {
        return Ok(FormalSetCombo::single(BTreeSet::new(), BigInt::one()));
    }
    let blocks = sub.blocks();
    if blocks.len() != 1 {
        return Err(Error::BadParameter(
            "support is not contiguous; use the local marginal".into(),
        ));
    }
    let (start, end) = blocks[0];
    let k = (end - start + 1) / 2;
    let offset = start - 1;
    let local: Vec<(usize, usize)> = sub
        .chords()
        .iter()
        .map(|&(a, b)| (a - offset, b - offset))
        .collect();
    let local_pairing = NoncrossingPairing::from_pairs(k, &local)?;
    let local_path = pairing_to_dyck(&local_pairing);
    let (m, inv) = m_and_inverse(k, caps)?;
    let row = m
        .paths()
        .iter()
        .position(|p| p == &local_path)
        .expect("pairing path is enumerated");
    let mut combo = FormalSetCombo::zero();
    for (c, path) in m.paths().iter().enumerate() {
        let coeff = inv.entry(row, c);
        if coeff.is_zero() {
            continue;
        }
        let shifted: BTreeSet<usize> = dyck_to_confining(path)
            .members()
            .iter()
            .map(|&v| v + offset)
            .collect();
        combo.add_term(shifted, coeff.clone());
    }
    Ok(combo)
}

type ComboCache = Mutex<HashMap<Subpairing, FormalSetCombo>>;

fn combo_cache() -> &'static ComboCache {
    static CACHE: OnceLock<ComboCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Formal combination for an arbitrary local subpairing, by the fill-in and
/// subtraction recursion.  Memoized on the subpairing.
pub fn marginal_combo(sub: &Subpairing, caps: &Caps) -> Result<FormalSetCombo> {
    if let Some(c) = combo_cache().lock().unwrap().get(sub) {
        return Ok(c.clone());
    }
    let combo = marginal_combo_uncached(sub, caps)?;
    combo_cache().lock().unwrap().insert(sub.clone(), combo.clone());
    Ok(combo)
}

fn marginal_combo_uncached(sub: &Subpairing, caps: &Caps) -> Result<FormalSetCombo> {
    if sub.chords().is_empty() {
        return Ok(FormalSetCombo::single(BTreeSet::new(), BigInt::one()));
    }
    // (a) fill in a chord joining two blocks: the positions strictly inside
    // it that are not yet in the support must pair among themselves
    if let Some((a, b)) = sub.cross_block_chord() {
        let support = sub.support();
        let gap: Vec<usize> = (a + 1..b).filter(|v| !support.contains(v)).collect();
        let mut total = FormalSetCombo::zero();
        for completion in gap_pairings(&gap) {
            if let Ok(filled) = sub.with_extra(&completion) {
                total.add(&marginal_combo(&filled, caps)?);
            }
        }
        return Ok(total);
    }
    let blocks = sub.blocks();
    if blocks.len() == 1 {
        return contiguous_marginal_combo(sub, caps);
    }
    // (b) every chord lies inside one block: take the bilinear union of the
    // per-block combinations
    let mut alpha = FormalSetCombo::single(BTreeSet::new(), BigInt::one());
    for &(start, end) in &blocks {
        let block_chords: Vec<(usize, usize)> = sub
            .chords()
            .iter()
            .copied()
            .filter(|&(a, _)| start <= a && a <= end)
            .collect();
        let block_sub = Subpairing::new(sub.n_nodes(), &block_chords)?;
        alpha = alpha.union_product(&contiguous_marginal_combo(&block_sub, caps)?);
    }
    // (c) subtract the cross-block pairings of the support that the
    // combination still counts
    let support: Vec<usize> = sub.support().into_iter().collect();
    let mut combo = alpha.clone();
    for other in support_pairings(&support) {
        let other_sub = Subpairing::new(sub.n_nodes(), &other)?;
        if &other_sub == sub {
            continue;
        }
        let mut coeff = BigInt::zero();
        for (set, c) in alpha.terms() {
            if other.iter().all(|&(p, q)| set.contains(&p) == set.contains(&q)) {
                coeff += c;
            }
        }
        if other_sub.cross_block_chord().is_none() {
            // a different pairing that stays within the blocks: the row
            // construction gives it coefficient zero
            debug_assert!(coeff.is_zero());
            continue;
        }
        if coeff.is_zero() {
            continue;
        }
        let rec = marginal_combo(&other_sub, caps)?;
        combo.sub_scaled(&rec, &coeff);
    }
    Ok(combo)
}

/// Noncrossing pairings of a gap of consecutive positions (odd-even chords).
fn gap_pairings(gap: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(rest: &[usize], current: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some(&first) = rest.first() else {
            out.push(current.clone());
            return;
        };
        for k in (1..rest.len()).step_by(2) {
            let partner = rest[k];
            if (first + partner) % 2 == 0 {
                continue;
            }
            current.push((first, partner));
            let inside: Vec<usize> = rest[1..k].to_vec();
            let outside: Vec<usize> = rest[k + 1..].to_vec();
            rec_two(&inside, &outside, current, out);
            current.pop();
        }
    }
    fn rec_two(
        inside: &[usize],
        outside: &[usize],
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        // pair the inside completely, then the outside
        let mut inner_results = Vec::new();
        let mut tmp = Vec::new();
        rec(inside, &mut tmp, &mut inner_results);
        for inner in inner_results {
            let before = current.len();
            current.extend(inner);
            rec(outside, current, out);
            current.truncate(before);
        }
    }
    rec(gap, &mut current, &mut out);
    out
}

/// All complete noncrossing pairings of an arbitrary support set, respecting
/// position parity.
fn support_pairings(support: &[usize]) -> Vec<Vec<(usize, usize)>> {
    gap_pairings(support)
}

/// Marginal probability of a subpairing whose support is one contiguous
/// block of positions.
pub fn contiguous_marginal(x: &XMatrix, sub: &Subpairing, caps: &Caps) -> Result<BigRational> {
    if 2 * x.n() != sub.n_nodes() {
        return Err(Error::LengthMismatch { left: 2 * x.n(), right: sub.n_nodes() });
    }
    contiguous_marginal_combo(sub, caps)?.evaluate(x)
}

/// Marginal probability of an arbitrary local subpairing.
pub fn local_marginal(x: &XMatrix, sub: &Subpairing, caps: &Caps) -> Result<BigRational> {
    if 2 * x.n() != sub.n_nodes() {
        return Err(Error::LengthMismatch { left: 2 * x.n(), right: sub.n_nodes() });
    }
    marginal_combo(sub, caps)?.evaluate(x)
}
