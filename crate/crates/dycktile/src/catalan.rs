//! The four Catalan object families — balanced words, Dyck paths, noncrossing
//! pairings, confining sets — with the bijections among them, chords, the
//! parenthesis-reversal relation, and the dominance order.
//!
//! Indices on `{1,…,2n}` are 1-based in every public interface.  The canonical
//! textual form of a path is a `U`/`D` string; word parsers also accept the
//! `(`/`)` alphabet.

use std::collections::BTreeSet;
use std::fmt;

use crate::config::Caps;
use crate::error::{Error, Result};

/// One step of a balanced word (`Up` = `(` = up step).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Down,
    Up,
}

/// A balanced parenthesis word of length 2n: every prefix has at least as
/// many `(` as `)`, and the totals agree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BalancedWord {
    steps: Vec<Step>,
}

impl BalancedWord {
    pub fn from_steps(steps: Vec<Step>) -> Result<Self> {
        let mut balance: i64 = 0;
        for (i, s) in steps.iter().enumerate() {
            balance += if *s == Step::Up { 1 } else { -1 };
            if balance < 0 {
                return Err(Error::MalformedWord(format!(
                    "prefix of length {} closes more than it opens",
                    i + 1
                )));
            }
        }
        if balance != 0 {
            return Err(Error::MalformedWord("unbalanced totals".into()));
        }
        Ok(BalancedWord { steps })
    }

    /// Parses either alphabet: `"(()())"` or `"UUDUDD"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut steps = Vec::with_capacity(text.len());
        for ch in text.chars() {
            match ch {
                '(' | 'U' | 'u' => steps.push(Step::Up),
                ')' | 'D' | 'd' => steps.push(Step::Down),
                c if c.is_whitespace() => {}
                c => {
                    return Err(Error::MalformedWord(format!("unexpected character {c:?}")));
                }
            }
        }
        BalancedWord::from_steps(steps)
    }

    pub fn n(&self) -> usize {
        self.steps.len() / 2
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Step at 1-based position `i`.
    pub fn step(&self, i: usize) -> Step {
        self.steps[i - 1]
    }

    /// Matched pairs `(open, close)` in 1-based positions, ordered by the
    /// position of the opening step.
    pub fn matched_pairs(&self) -> Vec<(usize, usize)> {
        let mut stack = Vec::new();
        let mut pairs = vec![(0usize, 0usize); self.n()];
        let mut next = 0;
        for (i, s) in self.steps.iter().enumerate() {
            match s {
                Step::Up => {
                    stack.push((i + 1, next));
                    next += 1;
                }
                Step::Down => {
                    let (open, slot) = stack.pop().expect("balanced");
                    pairs[slot] = (open, i + 1);
                }
            }
        }
        pairs
    }

    /// Reverses the given matched pairs; `None` when the result is not a
    /// balanced word (e.g. a ground-level pair got reversed).
    pub fn reverse_pairs(&self, pairs: &[(usize, usize)]) -> Option<BalancedWord> {
        let mut steps = self.steps.clone();
        for &(a, b) in pairs {
            steps[a - 1] = Step::Down;
            steps[b - 1] = Step::Up;
        }
        BalancedWord::from_steps(steps).ok()
    }

    pub fn to_paren_string(&self) -> String {
        self.steps
            .iter()
            .map(|s| if *s == Step::Up { '(' } else { ')' })
            .collect()
    }

    pub fn to_ud_string(&self) -> String {
        self.steps
            .iter()
            .map(|s| if *s == Step::Up { 'U' } else { 'D' })
            .collect()
    }
}

impl fmt::Display for BalancedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_paren_string())
    }
}

impl fmt::Debug for BalancedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BalancedWord({})", self.to_paren_string())
    }
}

/// A Dyck path of length 2n: heights `h(0..=2n)` with `h(0)=h(2n)=0`,
/// unit steps, and no height below zero.
///
/// `Ord` compares height sequences lexicographically; this is exactly the
/// row/column order of the incidence matrix (the zigzag path is least, the
/// fully nested path greatest).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckPath {
    heights: Vec<i64>,
}

impl DyckPath {
    pub fn from_heights(heights: Vec<i64>) -> Result<Self> {
        if heights.len() % 2 == 0 || heights.is_empty() {
            return Err(Error::InvalidPath("height sequence must have odd length".into()));
        }
        if heights[0] != 0 || *heights.last().unwrap() != 0 {
            return Err(Error::InvalidPath("must start and end at height 0".into()));
        }
        for w in heights.windows(2) {
            if (w[1] - w[0]).abs() != 1 {
                return Err(Error::InvalidPath("steps must change height by exactly 1".into()));
            }
        }
        if heights.iter().any(|&h| h < 0) {
            return Err(Error::InvalidPath("height below zero".into()));
        }
        Ok(DyckPath { heights })
    }

    pub fn from_word(word: &BalancedWord) -> Self {
        bpe_to_dyck(word)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(bpe_to_dyck(&BalancedWord::parse(text)?))
    }

    pub fn n(&self) -> usize {
        (self.heights.len() - 1) / 2
    }

    /// Number of unit steps, i.e. 2n.
    pub fn len(&self) -> usize {
        self.heights.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Height at position `i`, 0 ≤ i ≤ 2n.
    pub fn height(&self, i: usize) -> i64 {
        self.heights[i]
    }

    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    pub fn to_word(&self) -> BalancedWord {
        let steps = self
            .heights
            .windows(2)
            .map(|w| if w[1] > w[0] { Step::Up } else { Step::Down })
            .collect();
        BalancedWord::from_steps(steps).expect("valid path yields valid word")
    }

    /// The path 0,1,0,1,…,0 — the minimum of the dominance order.
    pub fn zigzag(n: usize) -> Self {
        let mut heights = Vec::with_capacity(2 * n + 1);
        for i in 0..=2 * n {
            heights.push((i % 2) as i64);
        }
        DyckPath { heights }
    }

    /// The path 0,1,…,n,…,1,0 — the maximum of the dominance order.
    pub fn nested(n: usize) -> Self {
        let mut heights = Vec::with_capacity(2 * n + 1);
        for i in 0..=2 * n {
            heights.push(i.min(2 * n - i) as i64);
        }
        DyckPath { heights }
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_word().to_ud_string())
    }
}

impl fmt::Debug for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DyckPath({})", self.to_word().to_ud_string())
    }
}

/// A fixed-point-free noncrossing involution of `{1,…,2n}` in which every
/// pair joins an odd position to an even position.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NoncrossingPairing {
    partner: Vec<usize>, // 0-based internally; partner[i] is the 0-based partner of i
}

impl NoncrossingPairing {
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let m = 2 * n;
        if pairs.len() != n {
            return Err(Error::InvalidPairing(format!(
                "expected {n} pairs, got {}",
                pairs.len()
            )));
        }
        let mut partner = vec![usize::MAX; m];
        for &(a, b) in pairs {
            if a == 0 || b == 0 || a > m || b > m || a == b {
                return Err(Error::InvalidPairing(format!("pair ({a},{b}) out of range")));
            }
            if (a + b) % 2 == 0 {
                return Err(Error::InvalidPairing(format!(
                    "pair ({a},{b}) joins positions of equal parity"
                )));
            }
            if partner[a - 1] != usize::MAX || partner[b - 1] != usize::MAX {
                return Err(Error::InvalidPairing(format!("position reused in ({a},{b})")));
            }
            partner[a - 1] = b - 1;
            partner[b - 1] = a - 1;
        }
        let p = NoncrossingPairing { partner };
        for (a, b) in p.pairs() {
            for (c, d) in p.pairs() {
                if a < c && c < b && b < d {
                    return Err(Error::InvalidPairing(format!(
                        "pairs ({a},{b}) and ({c},{d}) cross"
                    )));
                }
            }
        }
        Ok(p)
    }

    /// Parses the textual form `"1-2,3-4,5-6"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
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
            pairs.push((a, b));
        }
        NoncrossingPairing::from_pairs(pairs.len(), &pairs)
    }

    pub fn n(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    /// 1-based partner of 1-based position `i`.
    pub fn partner(&self, i: usize) -> usize {
        self.partner[i - 1] + 1
    }

    /// Pairs as `(min, max)`, sorted by the smaller endpoint.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n());
        for i in 0..self.partner.len() {
            if self.partner[i] > i {
                out.push((i + 1, self.partner[i] + 1));
            }
        }
        out
    }
}

impl fmt::Display for NoncrossingPairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().iter().map(|(a, b)| format!("{a}-{b}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for NoncrossingPairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NoncrossingPairing({self})")
    }
}

/// A confining subset of `{1,…,2n}`: it has as many odd as even members, and
/// every position outside it sees strictly more odd members than even members
/// below it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConfiningSet {
    n: usize,
    members: BTreeSet<usize>,
}

impl ConfiningSet {
    pub fn new(n: usize, members: BTreeSet<usize>) -> Result<Self> {
        if let Some(&max) = members.iter().next_back() {
            if max > 2 * n {
                return Err(Error::NotConfining(format!("member {max} exceeds 2n = {}", 2 * n)));
            }
        }
        if members.iter().any(|&x| x == 0) {
            return Err(Error::NotConfining("members must be in 1..=2n".into()));
        }
        let odd = members.iter().filter(|&&x| x % 2 == 1).count();
        let even = members.len() - odd;
        if odd != even {
            return Err(Error::NotConfining(format!("{odd} odd vs {even} even members")));
        }
        // For every i outside the set, strictly more odd members than even
        // members lie below i.
        let mut odd_below = 0i64;
        let mut even_below = 0i64;
        for i in 1..=2 * n {
            if !members.contains(&i) && odd_below <= even_below {
                return Err(Error::NotConfining(format!(
                    "position {i} is outside but sees {odd_below} odd / {even_below} even members below"
                )));
            }
            if members.contains(&i) {
                if i % 2 == 1 {
                    odd_below += 1;
                } else {
                    even_below += 1;
                }
            }
        }
        Ok(ConfiningSet { n, members })
    }

    /// Parses the textual form `"{1,2,3,6}"` (braces optional).
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let trimmed = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut members = BTreeSet::new();
        for part in trimmed.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let v: usize = part
                .parse()
                .map_err(|_| Error::NotConfining(format!("bad member {part:?}")))?;
            members.insert(v);
        }
        ConfiningSet::new(n, members)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }
}

impl fmt::Display for ConfiningSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for ConfiningSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConfiningSet({self})")
    }
}

/// A horizontal chord under a Dyck path joining an up step to its matching
/// down step.  The path stays strictly above `height` strictly between the
/// two steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Chord {
    pub up: usize,
    pub down: usize,
    pub height: i64,
}

impl Chord {
    /// Chord length measured as 1, 2, 3, …: a unit chord has length 1.
    pub fn length(&self) -> usize {
        (self.down - self.up + 1) / 2
    }
}

// ---- Bijections ----

/// Heights are the prefix balances of the word.
pub fn bpe_to_dyck(word: &BalancedWord) -> DyckPath {
    let mut heights = Vec::with_capacity(word.len() + 1);
    let mut h = 0i64;
    heights.push(h);
    for s in word.steps() {
        h += if *s == Step::Up { 1 } else { -1 };
        heights.push(h);
    }
    DyckPath::from_heights(heights).expect("balanced word yields valid path")
}

pub fn dyck_to_bpe(path: &DyckPath) -> BalancedWord {
    path.to_word()
}

/// Each up step is paired with the first position at which the path returns
/// to the height it had before the up step.
pub fn dyck_to_pairing(path: &DyckPath) -> NoncrossingPairing {
    let word = path.to_word();
    let pairs = word.matched_pairs();
    NoncrossingPairing::from_pairs(path.n(), &pairs).expect("matched pairs are noncrossing")
}

pub fn pairing_to_bpe(pairing: &NoncrossingPairing) -> BalancedWord {
    let mut steps = vec![Step::Down; pairing.len()];
    for (a, b) in pairing.pairs() {
        steps[a - 1] = Step::Up;
        steps[b - 1] = Step::Down;
    }
    BalancedWord::from_steps(steps).expect("noncrossing pairing yields balanced word")
}

pub fn pairing_to_dyck(pairing: &NoncrossingPairing) -> DyckPath {
    bpe_to_dyck(&pairing_to_bpe(pairing))
}

/// Odd members and even non-members become `(`; the rest become `)`.
pub fn confining_to_bpe(set: &ConfiningSet) -> BalancedWord {
    let mut steps = Vec::with_capacity(2 * set.n());
    for i in 1..=2 * set.n() {
        let open = if i % 2 == 1 { set.contains(i) } else { !set.contains(i) };
        steps.push(if open { Step::Up } else { Step::Down });
    }
    BalancedWord::from_steps(steps).expect("confining set yields balanced word")
}

pub fn bpe_to_confining(word: &BalancedWord) -> ConfiningSet {
    let mut members = BTreeSet::new();
    for i in 1..=word.len() {
        let open = word.step(i) == Step::Up;
        if (i % 2 == 1) == open {
            members.insert(i);
        }
    }
    ConfiningSet::new(word.n(), members).expect("balanced word yields confining set")
}

pub fn confining_to_dyck(set: &ConfiningSet) -> DyckPath {
    bpe_to_dyck(&confining_to_bpe(set))
}

pub fn dyck_to_confining(path: &DyckPath) -> ConfiningSet {
    bpe_to_confining(&path.to_word())
}

// ---- Chords, orders, relations ----

/// The n chords under the path; endpoints agree with `dyck_to_pairing`.
pub fn chords_of(path: &DyckPath) -> Vec<Chord> {
    path.to_word()
        .matched_pairs()
        .into_iter()
        .map(|(up, down)| Chord {
            up,
            down,
            height: path.height(up - 1),
        })
        .collect()
}

/// Pointwise comparison: does `lower` stay at or below `upper` everywhere?
pub fn dominates(lower: &DyckPath, upper: &DyckPath) -> Result<bool> {
    if lower.len() != upper.len() {
        return Err(Error::LengthMismatch {
            left: lower.len(),
            right: upper.len(),
        });
    }
    Ok(lower
        .heights()
        .iter()
        .zip(upper.heights())
        .all(|(a, b)| a <= b))
}

/// True when `p1` is obtained from `p2` by reversing some subset (possibly
/// empty) of the matched parenthesis pairs of `p2`.
pub fn pushdown_related(p1: &BalancedWord, p2: &BalancedWord) -> Result<bool> {
    if p1.len() != p2.len() {
        return Err(Error::LengthMismatch {
            left: p1.len(),
            right: p2.len(),
        });
    }
    for (a, b) in p2.matched_pairs() {
        let (sa, sb) = (p1.step(a), p1.step(b));
        let keep = sa == Step::Up && sb == Step::Down;
        let reversed = sa == Step::Down && sb == Step::Up;
        if !keep && !reversed {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True when no pair of `pairing` joins `set` to its complement.
pub fn is_compatible(set: &ConfiningSet, pairing: &NoncrossingPairing) -> Result<bool> {
    if 2 * set.n() != pairing.len() {
        return Err(Error::LengthMismatch {
            left: 2 * set.n(),
            right: pairing.len(),
        });
    }
    Ok(pairing
        .pairs()
        .iter()
        .all(|&(a, b)| set.contains(a) == set.contains(b)))
}

/// All Dyck paths of semilength `n` in ascending height-sequence order (the
/// zigzag first, the fully nested path last).  The position of a path in this
/// list is its matrix row/column index.
pub fn enumerate_dyck_paths(n: usize, caps: &Caps) -> Result<Vec<DyckPath>> {
    if n == 0 {
        return Err(Error::BadParameter("n must be at least 1".into()));
    }
    if n > caps.max_matrix_n {
        return Err(Error::CapExceeded {
            what: "n",
            value: n,
            cap: caps.max_matrix_n,
        });
    }
    let mut out = Vec::new();
    let mut steps = Vec::with_capacity(2 * n);
    gen_words(n, 0, 0, &mut steps, &mut out);
    Ok(out)
}

// Emits Down before Up at every free position, which is exactly ascending
// lexicographic order on height sequences.
fn gen_words(n: usize, opens: usize, closes: usize, steps: &mut Vec<Step>, out: &mut Vec<DyckPath>) {
    if steps.len() == 2 * n {
        let word = BalancedWord::from_steps(steps.clone()).expect("generator respects balance");
        out.push(bpe_to_dyck(&word));
        return;
    }
    if closes < opens {
        steps.push(Step::Down);
        gen_words(n, opens, closes + 1, steps, out);
        steps.pop();
    }
    if opens < n {
        steps.push(Step::Up);
        gen_words(n, opens + 1, closes, steps, out);
        steps.pop();
    }
}

/// Catalan number C(n) as u128 (exact through n = 36).
pub fn catalan(n: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..n {
        c = c * 2 * (2 * i as u128 + 1) / (i as u128 + 2);
    }
    c
}
