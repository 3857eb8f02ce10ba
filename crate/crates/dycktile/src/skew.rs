//! Skew shapes between two nested Dyck paths.
//!
//! Cells are unit diamonds in the lattice picture: the cell with center
//! `(col, row)` (with `col + row` odd) has its bottom vertex at
//! `(col, row - 1)` and top vertex at `(col, row + 1)`.  The cell belongs to
//! the shape `lower/upper` exactly when `lower(col) <= row - 1` and
//! `row + 1 <= upper(col)`.  Cells are edge-adjacent to the four diagonal
//! neighbors `(col ± 1, row ± 1)`.

use std::collections::BTreeSet;
use std::fmt;

use crate::catalan::{dominates, DyckPath};
use crate::error::{Error, Result};

/// Center coordinates of a unit cell; `col + row` is odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub col: i64,
    pub row: i64,
}

/// A pair of Dyck paths of equal length.  The shape is *valid* when the upper
/// path dominates the lower one pointwise; operations treat an invalid shape
/// as having no tilings and matrix entry zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SkewShape {
    lower: DyckPath,
    upper: DyckPath,
    valid: bool,
}

impl SkewShape {
    pub fn new(lower: DyckPath, upper: DyckPath) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::LengthMismatch {
                left: lower.len(),
                right: upper.len(),
            });
        }
        let valid = dominates(&lower, &upper)?;
        Ok(SkewShape { lower, upper, valid })
    }

    pub fn lower(&self) -> &DyckPath {
        &self.lower
    }

    pub fn upper(&self) -> &DyckPath {
        &self.upper
    }

    /// False when the upper path fails to stay above the lower one; such
    /// shapes have no cells, no tilings, and matrix entry 0.
    pub fn is_valid(&self) -> bool {
        self.valid
    }

    pub fn is_empty(&self) -> bool {
        !self.valid || self.lower == self.upper
    }

    /// Number of cells.
    pub fn area(&self) -> usize {
        if !self.valid {
            return 0;
        }
        let total: i64 = (0..=self.lower.len())
            .map(|i| self.upper.height(i) - self.lower.height(i))
            .sum();
        (total / 2) as usize
    }

    /// All cells, sorted by (col, row).
    pub fn cells(&self) -> BTreeSet<Cell> {
        let mut out = BTreeSet::new();
        if !self.valid {
            return out;
        }
        for col in 1..self.lower.len() as i64 {
            let lo = self.lower.height(col as usize);
            let hi = self.upper.height(col as usize);
            let mut row = lo + 1;
            while row < hi {
                out.insert(Cell { col, row });
                row += 2;
            }
        }
        out
    }

    /// Edge-connected components, each returned as a skew shape whose upper
    /// path bounds exactly that component's cells (and equals the lower path
    /// elsewhere).
    pub fn connected_components(&self) -> Vec<SkewShape> {
        if !self.valid {
            return Vec::new();
        }
        // Columns with cells form runs separated by columns where the paths
        // touch; each run is one component (cells within a column are
        // vertically connected through a diagonal neighbor).
        let len = self.lower.len();
        let mut components = Vec::new();
        let mut run: Option<(usize, usize)> = None;
        for col in 1..len {
            let has_cells = self.upper.height(col) > self.lower.height(col);
            match (&mut run, has_cells) {
                (None, true) => run = Some((col, col)),
                (Some((_, end)), true) => *end = col,
                (Some((start, end)), false) => {
                    components.push(self.component_shape(*start, *end));
                    run = None;
                }
                (None, false) => {}
            }
        }
        if let Some((start, end)) = run {
            components.push(self.component_shape(start, end));
        }
        components
    }

    fn component_shape(&self, start_col: usize, end_col: usize) -> SkewShape {
        let mut heights = self.lower.heights().to_vec();
        for col in start_col..=end_col {
            heights[col] = self.upper.height(col);
        }
        let upper = DyckPath::from_heights(heights).expect("component bound is a valid path");
        SkewShape::new(self.lower.clone(), upper).expect("component shape is valid")
    }

    /// Canonical representative of the translation class: the cell set
    /// shifted so the leftmost column is 0 and the lowest row is 0 or 1
    /// (translations must preserve the parity of col + row).
    pub fn canonical_key(&self) -> Vec<(i64, i64)> {
        canonical_cells(&self.cells())
    }
}

/// Canonicalizes an arbitrary cell set under lattice translations.
pub fn canonical_cells(cells: &BTreeSet<Cell>) -> Vec<(i64, i64)> {
    if cells.is_empty() {
        return Vec::new();
    }
    let min_col = cells.iter().map(|c| c.col).min().unwrap();
    let min_row = cells.iter().map(|c| c.row).min().unwrap();
    let dc = -min_col;
    // row shift must have the same parity as the column shift
    let mut dr = -min_row;
    if (dr - dc).rem_euclid(2) != 0 {
        dr += 1;
    }
    cells.iter().map(|c| (c.col + dc, c.row + dr)).collect()
}

impl fmt::Debug for SkewShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewShape({}/{})", self.lower, self.upper)
    }
}

impl fmt::Display for SkewShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.lower, self.upper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalan::DyckPath;

    fn shape(lower: &str, upper: &str) -> SkewShape {
        SkewShape::new(DyckPath::parse(lower).unwrap(), DyckPath::parse(upper).unwrap()).unwrap()
    }

    #[test]
    fn cells_of_small_shapes() {
        // single box between the zigzag and (()) at n = 2
        let s = shape("UDUD", "UUDD");
        assert_eq!(s.area(), 1);
        assert_eq!(s.cells().into_iter().collect::<Vec<_>>(), vec![Cell { col: 2, row: 1 }]);

        // three-cell chevron between the zigzag and ((( ))) at n = 3
        let s = shape("UDUDUD", "UUUDDD");
        assert_eq!(s.area(), 3);
        let cells: Vec<Cell> = s.cells().into_iter().collect();
        assert_eq!(
            cells,
            vec![
                Cell { col: 2, row: 1 },
                Cell { col: 3, row: 2 },
                Cell { col: 4, row: 1 }
            ]
        );
    }

    #[test]
    fn empty_and_invalid() {
        let s = shape("UDUD", "UDUD");
        assert!(s.is_empty());
        assert_eq!(s.area(), 0);
        assert!(s.connected_components().is_empty());
        let s = shape("UUDD", "UDUD");
        assert!(!s.is_valid());
        assert_eq!(s.area(), 0);
        assert!(s.cells().is_empty());
        assert!(s.connected_components().is_empty());
    }

    #[test]
    fn components() {
        // two separated boxes between the zigzag and (()()) at n = 3
        let s = shape("UDUDUD", "UUDUDD");
        assert_eq!(s.area(), 2);
        let comps = s.connected_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].area(), 1);
        assert_eq!(comps[1].area(), 1);
        assert_eq!(comps[0].canonical_key(), comps[1].canonical_key());

        let s = shape("UDUDUD", "UUUDDD");
        assert_eq!(s.connected_components().len(), 1);
        assert_eq!(s.connected_components()[0].cells(), s.cells());
    }

    #[test]
    fn translation_classes_match() {
        // the single box appears at many positions inside n = 3 pairs
        let a = shape("UDUDUD", "UUDDUD");
        let b = shape("UDUDUD", "UDUUDD");
        assert_eq!(a.area(), 1);
        assert_eq!(b.area(), 1);
        assert_eq!(a.canonical_key(), b.canonical_key());
        assert_ne!(a.cells(), b.cells());
    }
}
