//! Closed forms for the tiling polynomial on special shape families: shapes
//! with a V-shaped lower boundary, chevron bands, shapes over the zigzag
//! path, and width-one strips.  Each materializer/extractor validates its
//! hypothesis and the formulas are cross-checked against direct enumeration
//! in the test suite.

use num_bigint::BigInt;
use num_traits::One;

use crate::catalan::DyckPath;
use crate::error::{Error, Result};
use crate::qpoly::{q_binom, q_int, QPoly};
use crate::skew::SkewShape;

/// Column extent of a nonempty shape: (first cell column, last cell column).
fn extent(shape: &SkewShape) -> Option<(usize, usize)> {
    let len = shape.lower().len();
    let has = |col: usize| shape.upper().height(col) > shape.lower().height(col);
    let first = (1..len).find(|&c| has(c))?;
    let last = (1..len).rev().find(|&c| has(c))?;
    Some((first, last))
}

/// Maximal runs of the lower path over the shape's extent, as signed lengths
/// (negative = descending run, positive = ascending run).
fn lower_runs(shape: &SkewShape) -> Option<Vec<i64>> {
    let (first, last) = extent(shape)?;
    let mut runs: Vec<i64> = Vec::new();
    for col in first..=last + 1 {
        let step = shape.lower().height(col) - shape.lower().height(col - 1);
        match runs.last_mut() {
            Some(r) if (*r > 0) == (step > 0) => *r += step,
            _ => runs.push(step),
        }
    }
    Some(runs)
}

fn upper_runs(shape: &SkewShape) -> Option<Vec<i64>> {
    let (first, last) = extent(shape)?;
    let mut runs: Vec<i64> = Vec::new();
    for col in first..=last + 1 {
        let step = shape.upper().height(col) - shape.upper().height(col - 1);
        match runs.last_mut() {
            Some(r) if (*r > 0) == (step > 0) => *r += step,
            _ => runs.push(step),
        }
    }
    Some(runs)
}

/// V-shaped lower boundary: over the extent the lower path descends once and
/// ascends once.  Returns the two arm lengths.
pub fn v_shape_params(shape: &SkewShape) -> Option<(usize, usize)> {
    if !shape.is_valid() || shape.is_empty() || shape.connected_components().len() != 1 {
        return None;
    }
    match lower_runs(shape)?.as_slice() {
        [down, up] if *down < 0 && *up > 0 => Some(((-down) as usize, *up as usize)),
        _ => None,
    }
}

/// Tiling polynomial for a shape with V-shaped lower boundary: a single
/// all-singleton tiling, so `q^area`.
pub fn closed_form_v(shape: &SkewShape) -> Result<QPoly> {
    if v_shape_params(shape).is_none() {
        return Err(Error::InvalidShape("lower boundary is not V-shaped".into()));
    }
    Ok(QPoly::monomial(shape.area() as i64, 1))
}

/// Chevron-band parameters: the lower boundary reads descend `a`, ascend `b`,
/// descend `c`, ascend `d` (a single interior peak), and the upper boundary
/// is single-peaked.
pub fn chevron_params(shape: &SkewShape) -> Option<(usize, usize, usize, usize)> {
    if !shape.is_valid() || shape.is_empty() || shape.connected_components().len() != 1 {
        return None;
    }
    let lower = lower_runs(shape)?;
    let upper = upper_runs(shape)?;
    if !matches!(upper.as_slice(), [up, down] if *up > 0 && *down < 0) {
        return None;
    }
    match lower.as_slice() {
        [da, ub, dc, ud] if *da < 0 && *ub > 0 && *dc < 0 && *ud > 0 => {
            Some(((-da) as usize, *ub as usize, (-dc) as usize, *ud as usize))
        }
        _ => None,
    }
}

/// Materializes the chevron band with lower boundary `D^a U^b D^c U^d` and a
/// single-peaked upper boundary over the same extent.
pub fn chevron_shape(a: usize, b: usize, c: usize, d: usize) -> Result<SkewShape> {
    if a == 0 || d == 0 || b == 0 || c == 0 {
        return Err(Error::BadParameter(
            "chevron arms must be positive (use the V form when b = c = 0)".into(),
        ));
    }
    let start = (a as i64) + 0.max(c as i64 - b as i64);
    let mut lower: Vec<i64> = (0..=start).collect();
    let mut upper = lower.clone();
    let mut lo = start;
    for run in [-(a as i64), b as i64, -(c as i64), d as i64] {
        let step = run.signum();
        for _ in 0..run.abs() {
            lo += step;
            lower.push(lo);
        }
    }
    let mut up = start;
    for run in [(b + d) as i64, -((a + c) as i64)] {
        let step = run.signum();
        for _ in 0..run.abs() {
            up += step;
            upper.push(up);
        }
    }
    debug_assert_eq!(lo, up);
    for h in (0..lo).rev() {
        lower.push(h);
        upper.push(h);
    }
    let shape = SkewShape::new(DyckPath::from_heights(lower)?, DyckPath::from_heights(upper)?)?;
    if !shape.is_valid() || chevron_params(&shape) != Some((a, b, c, d)) {
        return Err(Error::BadParameter(format!(
            "parameters ({a},{b},{c},{d}) do not describe a chevron band"
        )));
    }
    Ok(shape)
}

/// Closed form for a chevron band: `q^area` times the Gaussian binomial
/// `(min(a,d)+min(b,c) choose min(a,d))` in `q^-2`.
pub fn closed_form_lambda_shape(a: usize, b: usize, c: usize, d: usize) -> Result<(SkewShape, QPoly)> {
    let shape = chevron_shape(a, b, c, d)?;
    let poly = chevron_formula(shape.area(), a, b, c, d)?;
    Ok((shape, poly))
}

/// Applies the chevron closed form to an existing shape.
pub fn closed_form_lambda_of(shape: &SkewShape) -> Result<QPoly> {
    let (a, b, c, d) = chevron_params(shape)
        .ok_or_else(|| Error::InvalidShape("shape is not a chevron band".into()))?;
    chevron_formula(shape.area(), a, b, c, d)
}

fn chevron_formula(area: usize, a: usize, b: usize, c: usize, d: usize) -> Result<QPoly> {
    let arm = a.min(d);
    let layers = b.min(c);
    let binom = q_binom(arm + layers, arm)?.substitute_inv_square();
    Ok(&QPoly::monomial(area as i64, 1) * &binom)
}

/// Closed form for shapes whose lower path is the zigzag: `q^area` times a
/// product over odd columns of height analogues in `q^-2`.  The factor at odd
/// column `x` is `((upper(x)+1)/2)` as a `q^-2` integer; it counts, for the
/// tower of cells over that column, the choices of how many get glued to
/// their lower neighbors.
pub fn closed_form_zigzag_row(shape: &SkewShape) -> Result<QPoly> {
    let n = shape.lower().n();
    if shape.lower() != &DyckPath::zigzag(n) {
        return Err(Error::InvalidShape("lower path is not the zigzag".into()));
    }
    if !shape.is_valid() {
        return Ok(QPoly::zero());
    }
    let mut out = QPoly::monomial(shape.area() as i64, 1);
    for x in (1..2 * n).step_by(2) {
        let h = (shape.upper().height(x) + 1) / 2;
        out = &out * &q_int(h as usize).substitute_inv_square();
    }
    Ok(out)
}

/// Heights of the single cell in each column of a width-one strip, left to
/// right.  `None` when some column has zero or several cells.
pub fn strip_profile(shape: &SkewShape) -> Option<Vec<i64>> {
    if !shape.is_valid() || shape.is_empty() {
        return None;
    }
    let (first, last) = extent(shape)?;
    let mut profile = Vec::with_capacity(last - first + 1);
    for col in first..=last {
        if shape.upper().height(col) - shape.lower().height(col) != 2 {
            return None;
        }
        profile.push(shape.lower().height(col) + 1);
    }
    Some(profile)
}

/// Materializes a width-one strip with the given cell-row profile (entries
/// must change by exactly one from column to column).
pub fn strip_shape_from_profile(profile: &[i64]) -> Result<SkewShape> {
    if profile.is_empty() {
        return Err(Error::BadParameter("empty strip profile".into()));
    }
    if profile.windows(2).any(|w| (w[1] - w[0]).abs() != 1) {
        return Err(Error::BadParameter("strip profile must move by one per column".into()));
    }
    let min = *profile.iter().min().unwrap();
    let shift = if min >= 1 { 0 } else { 1 - min };
    let rows: Vec<i64> = profile.iter().map(|r| r + shift).collect();
    // lower path passes one below each cell, upper one above; the paths meet
    // at the cell row just outside each end and ramp down to the ground
    let start = rows[0];
    let mut lower: Vec<i64> = (0..=start).collect();
    let mut upper = lower.clone();
    for r in &rows {
        lower.push(r - 1);
        upper.push(r + 1);
    }
    let end = *rows.last().unwrap();
    lower.push(end);
    upper.push(end);
    for h in (0..end).rev() {
        lower.push(h);
        upper.push(h);
    }
    SkewShape::new(DyckPath::from_heights(lower)?, DyckPath::from_heights(upper)?)
}

/// Signed inverse entry for a width-one strip via the nested product/plus-one
/// expression: chords of the profile evaluate to (product of children) + 1
/// and top-level chords multiply.
pub fn closed_form_strip(shape: &SkewShape) -> Result<BigInt> {
    let profile = strip_profile(shape)
        .ok_or_else(|| Error::InvalidShape("shape is not a width-one strip".into()))?;
    let count = strip_count(&profile);
    if shape.area() % 2 == 1 {
        Ok(-count)
    } else {
        Ok(count)
    }
}

/// Number of ways to cut a strip profile into valid tiles, via the chord
/// forest of the profile.
pub fn strip_count(profile: &[i64]) -> BigInt {
    // match up-moves with down-moves of the profile
    #[derive(Default)]
    struct Node {
        children: Vec<Node>,
    }
    fn value(node: &Node) -> BigInt {
        let mut prod = BigInt::one();
        for child in &node.children {
            prod *= value(child);
        }
        prod + BigInt::one()
    }
    let mut roots: Vec<Node> = Vec::new();
    let mut stack: Vec<Node> = Vec::new();
    for w in profile.windows(2) {
        if w[1] > w[0] {
            stack.push(Node::default());
        } else if let Some(done) = stack.pop() {
            match stack.last_mut() {
                Some(parent) => parent.children.push(done),
                None => roots.push(done),
            }
        }
        // an unmatched down-move closes nothing and contributes no chord
    }
    // unmatched up-moves on the stack contribute no chords either; their
    // children never complete, hence never entered `roots`... but children
    // of an unmatched chord ARE complete chords and do count.
    fn flush(node: Node, roots: &mut Vec<Node>) {
        for child in node.children {
            roots.push(child);
        }
    }
    for leftover in stack {
        flush(leftover, &mut roots);
    }
    let mut total = BigInt::one();
    for root in &roots {
        total *= value(root);
    }
    total
}
