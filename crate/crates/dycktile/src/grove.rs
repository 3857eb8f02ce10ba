//! Grove pairing partition-function ratios from electrical response matrices.
//!
//! The response matrix is the negated Schur complement of the weighted graph
//! Laplacian onto the boundary nodes, so that `L[i][j]` for `i != j` is the
//! current flowing out of the network through node `j` when node `i` is held
//! at one volt and the others at zero (positive off-diagonal entries, zero
//! row sums).  With this convention, determinants of L over a transversal
//! `S*` against its complement expand over compatible grove pairings with
//! permutation signs, and the inverse incidence matrix solves for each
//! `Z_pairing / Z_singletons` exactly.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::catalan::{dyck_to_confining, dyck_to_pairing, NoncrossingPairing};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::{determinant, solve};
use crate::matrix::m_and_inverse;

/// Boundary-to-boundary current response; symmetric with zero row sums.
/// Row/column `i` (0-based) corresponds to boundary node position `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseMatrix {
    entries: Vec<Vec<BigRational>>,
}

impl ResponseMatrix {
    pub fn from_entries(entries: Vec<Vec<BigRational>>) -> Result<Self> {
        let m = entries.len();
        if entries.iter().any(|r| r.len() != m) {
            return Err(Error::BadParameter("response matrix must be square".into()));
        }
        for i in 0..m {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::BadParameter("response matrix must be symmetric".into()));
                }
            }
            let row_sum: BigRational = entries[i].iter().sum();
            if !row_sum.is_zero() {
                return Err(Error::BadParameter(format!("row {i} does not sum to zero")));
            }
        }
        Ok(ResponseMatrix { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Entry for 1-based node positions.
    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    /// Relabels positions cyclically: new position p reads old position
    /// p + shift (wrapping).
    pub fn rotate(&self, shift: usize) -> ResponseMatrix {
        let m = self.size();
        let mut out = vec![vec![BigRational::zero(); m]; m];
        for i in 0..m {
            for j in 0..m {
                out[i][j] = self.entries[(i + shift) % m][(j + shift) % m].clone();
            }
        }
        ResponseMatrix { entries: out }
    }
}

/// Response matrix of a connected network: negated Schur complement of the
/// weighted Laplacian onto the boundary nodes.
pub fn response_matrix(graph: &WeightedGraph) -> Result<ResponseMatrix> {
    if graph.nodes().is_empty() {
        return Err(Error::InvalidGraph("no boundary nodes".into()));
    }
    if !graph.is_connected() {
        return Err(Error::InvalidGraph("network must be connected".into()));
    }
    let n = graph.vertex_count();
    let mut lap = vec![vec![BigRational::zero(); n]; n];
    for &(u, v, ref w) in graph.edges() {
        lap[u][u] += w;
        lap[v][v] += w;
        lap[u][v] -= w;
        lap[v][u] -= w;
    }
    let boundary = graph.nodes();
    let interior: Vec<usize> =
        (0..n).filter(|v| !boundary.contains(v)).collect();
    let b = boundary.len();
    let k = interior.len();
    // Schur complement: L_BB - L_BI (L_II)^-1 L_IB
    let mut schur = vec![vec![BigRational::zero(); b]; b];
    for (i, &u) in boundary.iter().enumerate() {
        for (j, &v) in boundary.iter().enumerate() {
            schur[i][j] = lap[u][v].clone();
        }
    }
    if k > 0 {
        let ii: Vec<Vec<BigRational>> = interior
            .iter()
            .map(|&u| interior.iter().map(|&v| lap[u][v].clone()).collect())
            .collect();
        for (j, &v) in boundary.iter().enumerate() {
            let rhs: Vec<BigRational> = interior.iter().map(|&u| lap[u][v].clone()).collect();
            let col = solve(&ii, &rhs)
                .map_err(|_| Error::Singular("interior block is singular".into()))?;
            for (i, &u) in boundary.iter().enumerate() {
                let dot: BigRational = interior
                    .iter()
                    .enumerate()
                    .map(|(t, &w)| &lap[u][w] * &col[t])
                    .sum();
                schur[i][j] -= dot;
            }
        }
    }
    for row in schur.iter_mut() {
        for e in row.iter_mut() {
            *e = -e.clone();
        }
    }
    ResponseMatrix::from_entries(schur)
}

/// Maps a transversal `S*` to the confining-style set: odd members of `S*`
/// together with the even positions outside it.
pub fn s_star_to_s(s_star: &BTreeSet<usize>, n_nodes: usize) -> Result<BTreeSet<usize>> {
    if 2 * s_star.len() != n_nodes {
        return Err(Error::BadParameter(format!(
            "transversal must have {} elements, got {}",
            n_nodes / 2,
            s_star.len()
        )));
    }
    if s_star.iter().any(|&v| v == 0 || v > n_nodes) {
        return Err(Error::BadParameter("transversal element out of range".into()));
    }
    let mut s = BTreeSet::new();
    for &v in s_star {
        if v % 2 == 1 {
            s.insert(v);
        }
    }
    for v in (2..=n_nodes).step_by(2) {
        if !s_star.contains(&v) {
            s.insert(v);
        }
    }
    Ok(s)
}

/// Inverse of `s_star_to_s`.
pub fn s_to_s_star(s: &BTreeSet<usize>, n_nodes: usize) -> BTreeSet<usize> {
    let mut s_star = BTreeSet::new();
    for v in 1..=n_nodes {
        if v % 2 == 1 {
            if s.contains(&v) {
                s_star.insert(v);
            }
        } else if !s.contains(&v) {
            s_star.insert(v);
        }
    }
    s_star
}

/// Determinant of the response matrix over rows `S*` (sorted) and columns of
/// its complement (sorted).
pub fn cim_determinant(l: &ResponseMatrix, s_star: &BTreeSet<usize>) -> Result<BigRational> {
    let m = l.size();
    if 2 * s_star.len() != m {
        return Err(Error::BadParameter(format!(
            "transversal must have {} elements, got {}",
            m / 2,
            s_star.len()
        )));
    }
    if s_star.iter().any(|&v| v == 0 || v > m) {
        return Err(Error::BadParameter("transversal element out of range".into()));
    }
    let rows: Vec<usize> = s_star.iter().copied().collect();
    let cols: Vec<usize> = (1..=m).filter(|v| !s_star.contains(v)).collect();
    let mat: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| l.entry(i, j).clone()).collect())
        .collect();
    Ok(determinant(&mat))
}

/// Sign of the permutation sending a sorted compatible transversal to its
/// sorted complement through the pairing; well-defined independently of the
/// transversal chosen.
pub fn pairing_sign(pairing: &NoncrossingPairing) -> i8 {
    let s_star: BTreeSet<usize> = pairing.pairs().iter().map(|&(a, _)| a).collect();
    sign_for_transversal(pairing, &s_star)
}

/// Sign computed from one specific compatible transversal.
pub fn sign_for_transversal(pairing: &NoncrossingPairing, s_star: &BTreeSet<usize>) -> i8 {
    let complement: Vec<usize> =
        (1..=pairing.len()).filter(|v| !s_star.contains(v)).collect();
    let images: Vec<usize> = s_star
        .iter()
        .map(|&v| {
            complement
                .iter()
                .position(|&c| c == pairing.partner(v))
                .expect("compatible transversal")
        })
        .collect();
    let mut sign = 1i8;
    for a in 0..images.len() {
        for b in a + 1..images.len() {
            if images[a] > images[b] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Partition-function ratios `Z_pairing / Z_singletons` for every noncrossing
/// pairing of the boundary nodes.
#[derive(Debug, Clone)]
pub struct GroveRatios {
    pub ratios: BTreeMap<NoncrossingPairing, BigRational>,
    pub all_nonnegative: bool,
}

/// Solves for every ratio via the inverse incidence matrix applied to the
/// transversal determinants.
pub fn grove_ratios(l: &ResponseMatrix, caps: &Caps) -> Result<GroveRatios> {
    let m = l.size();
    if m == 0 || m % 2 != 0 {
        return Err(Error::BadParameter("need an even number of nodes".into()));
    }
    let n = m / 2;
    let (mat, inv) = m_and_inverse(n, caps)?;
    let dets: Vec<BigRational> = mat
        .paths()
        .iter()
        .map(|p| {
            let s = dyck_to_confining(p).members().clone();
            let s_star = s_to_s_star(&s, m);
            cim_determinant(l, &s_star)
        })
        .collect::<Result<_>>()?;
    let mut ratios = BTreeMap::new();
    let mut all_nonnegative = true;
    for (r, path) in mat.paths().iter().enumerate() {
        let pairing = dyck_to_pairing(path);
        let mut total = BigRational::zero();
        for (c, det) in dets.iter().enumerate() {
            let coeff = inv.entry(r, c);
            if !coeff.is_zero() {
                total += BigRational::from(coeff.clone()) * det;
            }
        }
        let signed = if pairing_sign(&pairing) >= 0 { total } else { -total };
        if signed.is_negative() {
            all_nonnegative = false;
        }
        ratios.insert(pairing, signed);
    }
    Ok(GroveRatios { ratios, all_nonnegative })
}

/// Rotates a pairing's positions by `shift` (new position p corresponds to
/// old position p + shift, wrapping around the circle).
pub fn rotate_pairing(pairing: &NoncrossingPairing, shift: usize) -> Result<NoncrossingPairing> {
    let m = pairing.len();
    let relabel = |v: usize| -> usize { ((v + m - 1 - (shift % m)) % m) + 1 };
    let pairs: Vec<(usize, usize)> = pairing
        .pairs()
        .iter()
        .map(|&(a, b)| (relabel(a), relabel(b)))
        .collect();
    NoncrossingPairing::from_pairs(pairing.n(), &pairs)
}
