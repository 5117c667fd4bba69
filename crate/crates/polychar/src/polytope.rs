//! The bounded-filling polytope of a composition and a normal subposet.
//!
//! For a composition `beta` with `l` parts and a normal subposet `P` of the
//! l-chain, the polytope lives in one coordinate per strict relation
//! `(i, j)` of `P` (a cell of its Ferrers shape). A point assigns a
//! nonnegative value to every cell subject to row bounds (the values in
//! cells `(i, *)` sum to at most `beta_i`) and column bounds (the values in
//! cells `(*, j)` sum to at most `beta_j`). Integer points are tableaux;
//! they index superclasses and supercharacters of the pattern group of
//! `(beta, P)`.

use crate::posets::{Composition, Poset};
use crate::qarith::{Int, Rat};
use crate::{invalid, Error, Result};
use num::{One, Signed, Zero};
use std::fmt;

/// Default cap on the number of search nodes visited during enumeration.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// A composition `beta` and a normal subposet `P` of the chain on its parts,
/// together with the cell list of the Ferrers shape of `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    beta: Composition,
    poset: Poset,
    cells: Vec<(u32, u32)>,
}

impl Polytope {
    pub fn new(beta: Composition, poset: Poset) -> Result<Self> {
        if poset.len() != beta.len() {
            return Err(invalid(format!(
                "poset on {} elements does not match composition with {} parts",
                poset.len(),
                beta.len()
            )));
        }
        if !poset.is_normal() {
            return Err(invalid("poset is not normal"));
        }
        let cells = poset.pairs();
        Ok(Polytope { beta, poset, cells })
    }

    /// The polytope of `beta` with the full chain order.
    pub fn chain(beta: Composition) -> Self {
        let poset = Poset::chain(beta.len());
        Polytope::new(beta, poset).expect("chain is normal")
    }

    pub fn beta(&self) -> &Composition {
        &self.beta
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    /// Shape cells `(i, j)`, sorted by row then column, 1-based.
    pub fn cells(&self) -> &[(u32, u32)] {
        &self.cells
    }

    pub fn cell_index(&self, i: u32, j: u32) -> Option<usize> {
        self.cells.binary_search(&(i, j)).ok()
    }

    /// The all-zero tableau.
    pub fn zero(&self) -> Tableau {
        Tableau {
            cells: self.cells.clone(),
            vals: vec![0; self.cells.len()],
        }
    }

    /// Build a tableau from `(i, j, value)` entries; unlisted cells are zero.
    pub fn tableau(&self, entries: &[(u32, u32, u32)]) -> Result<Tableau> {
        let mut vals = vec![0u32; self.cells.len()];
        for &(i, j, v) in entries {
            let at = self
                .cell_index(i, j)
                .ok_or_else(|| invalid(format!("({i},{j}) is not a cell of the shape")))?;
            if entries.iter().filter(|e| (e.0, e.1) == (i, j)).count() > 1 {
                return Err(invalid(format!("cell ({i},{j}) listed twice")));
            }
            vals[at] = v;
        }
        Ok(Tableau {
            cells: self.cells.clone(),
            vals,
        })
    }

    /// Parse the text form produced by [`Tableau::text`]: entries `i,j:v`
    /// joined by semicolons, `0` for the zero tableau.
    pub fn parse_tableau(&self, text: &str) -> Result<Tableau> {
        let text = text.trim();
        if text == "0" {
            return Ok(self.zero());
        }
        let mut entries = Vec::new();
        for piece in text.split(';') {
            let piece = piece.trim();
            let (cell, val) = piece
                .split_once(':')
                .ok_or_else(|| invalid(format!("entry '{piece}' is not of the form i,j:v")))?;
            let (i, j) = cell
                .split_once(',')
                .ok_or_else(|| invalid(format!("entry '{piece}' is not of the form i,j:v")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| invalid(format!("'{s}' is not a nonnegative integer")))
            };
            entries.push((parse(i)?, parse(j)?, parse(val)?));
        }
        self.tableau(&entries)
    }

    fn check_shape(&self, t: &Tableau) -> Result<()> {
        if t.cells != self.cells {
            return Err(invalid("tableau shape does not match the polytope"));
        }
        Ok(())
    }

    /// Row and column sums of a tableau against the bounds of this polytope.
    /// The shape must match; the sums decide membership.
    pub fn member(&self, t: &Tableau) -> Result<bool> {
        self.check_shape(t)?;
        let l = self.beta.len();
        let mut row = vec![0u64; l + 1];
        let mut col = vec![0u64; l + 1];
        for (&(i, j), &v) in t.cells.iter().zip(&t.vals) {
            row[i as usize] += v as u64;
            col[j as usize] += v as u64;
        }
        Ok((1..=l).all(|k| {
            row[k] <= self.beta.part(k) as u64 && col[k] <= self.beta.part(k) as u64
        }))
    }

    /// Membership for a rational point, one coordinate per cell in cell
    /// order: all coordinates nonnegative, all row and column sums within
    /// the bounds.
    pub fn contains(&self, point: &[Rat]) -> Result<bool> {
        if point.len() != self.cells.len() {
            return Err(invalid(format!(
                "point has {} coordinates but the shape has {} cells",
                point.len(),
                self.cells.len()
            )));
        }
        if point.iter().any(|x| x.is_negative()) {
            return Ok(false);
        }
        let l = self.beta.len();
        let mut row = vec![Rat::zero(); l + 1];
        let mut col = vec![Rat::zero(); l + 1];
        for (&(i, j), x) in self.cells.iter().zip(point) {
            row[i as usize] += x;
            col[j as usize] += x;
        }
        Ok((1..=l).all(|k| {
            let bound = Rat::from_integer(Int::from(self.beta.part(k)));
            row[k] <= bound && col[k] <= bound
        }))
    }
}

impl fmt::Display for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} with {}", self.beta, self.poset)
    }
}

/// An integer filling of the shape of a polytope. Fillings compare in cell
/// order, so sorting tableaux of one polytope is lexicographic on values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tableau {
    cells: Vec<(u32, u32)>,
    vals: Vec<u32>,
}

impl Tableau {
    pub(crate) fn with_values(cells: Vec<(u32, u32)>, vals: Vec<u32>) -> Tableau {
        assert_eq!(cells.len(), vals.len(), "one value per cell");
        Tableau { cells, vals }
    }

    /// Value at a cell; zero when `(i, j)` is not a cell of the shape.
    pub fn get(&self, i: u32, j: u32) -> u32 {
        match self.cells.binary_search(&(i, j)) {
            Ok(at) => self.vals[at],
            Err(_) => 0,
        }
    }

    pub fn cells(&self) -> &[(u32, u32)] {
        &self.cells
    }

    pub fn values(&self) -> &[u32] {
        &self.vals
    }

    pub fn is_zero(&self) -> bool {
        self.vals.iter().all(|&v| v == 0)
    }

    /// Canonical text form: nonzero entries `i,j:v` in cell order joined by
    /// semicolons, or `0` for the zero filling.
    pub fn text(&self) -> String {
        let mut parts = Vec::new();
        for (&(i, j), &v) in self.cells.iter().zip(&self.vals) {
            if v != 0 {
                parts.push(format!("{i},{j}:{v}"));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(";")
        }
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

/// Product of `1 + min(row bound, column bound)` over the cells: the size of
/// the candidate box the search walks through.
fn box_bound(poly: &Polytope, dilate: u32) -> Int {
    let mut bound = Int::one();
    for &(i, j) in &poly.cells {
        let cap = poly.beta.part(i as usize).min(poly.beta.part(j as usize)) as u64
            * dilate as u64;
        bound *= Int::from(cap + 1);
    }
    bound
}

/// Depth-first scan over all integer points of the `dilate`-fold dilation.
/// Every attempted value assignment costs one node against the budget.
fn scan(
    poly: &Polytope,
    dilate: u32,
    budget: u64,
    visit: &mut impl FnMut(&[u64]),
) -> Result<()> {
    let l = poly.beta.len();
    let mut row_rem = vec![0u64; l + 1];
    let mut col_rem = vec![0u64; l + 1];
    for k in 1..=l {
        row_rem[k] = poly.beta.part(k) as u64 * dilate as u64;
        col_rem[k] = row_rem[k];
    }
    let mut vals = vec![0u64; poly.cells.len()];
    let mut nodes = 0u64;
    fn rec(
        poly: &Polytope,
        at: usize,
        row_rem: &mut [u64],
        col_rem: &mut [u64],
        vals: &mut [u64],
        nodes: &mut u64,
        budget: u64,
        dilate: u32,
        visit: &mut impl FnMut(&[u64]),
    ) -> Result<()> {
        if at == poly.cells.len() {
            visit(vals);
            return Ok(());
        }
        let (i, j) = poly.cells[at];
        let cap = row_rem[i as usize].min(col_rem[j as usize]);
        for v in 0..=cap {
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::Budget {
                    limit: budget,
                    estimate: box_bound(poly, dilate),
                });
            }
            row_rem[i as usize] -= v;
            col_rem[j as usize] -= v;
            vals[at] = v;
            let res = rec(
                poly, at + 1, row_rem, col_rem, vals, nodes, budget, dilate, visit,
            );
            row_rem[i as usize] += v;
            col_rem[j as usize] += v;
            res?;
        }
        Ok(())
    }
    rec(
        poly,
        0,
        &mut row_rem,
        &mut col_rem,
        &mut vals,
        &mut nodes,
        budget,
        dilate,
        visit,
    )
}

/// All integer points of the polytope, in lexicographic value order.
pub fn enumerate_lattice_points(poly: &Polytope, budget: u64) -> Result<Vec<Tableau>> {
    let mut out = Vec::new();
    scan(poly, 1, budget, &mut |vals| {
        out.push(Tableau {
            cells: poly.cells.clone(),
            vals: vals.iter().map(|&v| v as u32).collect(),
        })
    })?;
    Ok(out)
}

/// Number of integer points of the `dilate`-fold dilation.
pub fn count_lattice_points(poly: &Polytope, dilate: u32, budget: u64) -> Result<Int> {
    let mut count = Int::zero();
    scan(poly, dilate, budget, &mut |_| count += 1)?;
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posets::enumerate_normal_subposets;
    use proptest::prelude::*;

    fn fixture() -> Polytope {
        let beta = Composition::new(vec![4, 1, 2]).unwrap();
        let poset = Poset::new(3, &[(1, 3), (2, 3)], false).unwrap();
        Polytope::new(beta, poset).unwrap()
    }

    #[test]
    fn rejects_mismatched_or_nonnormal_input() {
        let beta = Composition::new(vec![1, 1]).unwrap();
        assert!(Polytope::new(beta.clone(), Poset::chain(3)).is_err());
        let beta3 = Composition::new(vec![1, 1, 1]).unwrap();
        let nonnormal = Poset::new(3, &[(1, 2)], false).unwrap();
        assert!(Polytope::new(beta3, nonnormal).is_err());
    }

    #[test]
    fn fixture_has_five_points() {
        let poly = fixture();
        let pts = enumerate_lattice_points(&poly, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(pts.len(), 5);
        // Column 3 carries at most 2 in total, row 2 at most 1.
        let texts: Vec<String> = pts.iter().map(Tableau::text).collect();
        assert_eq!(
            texts,
            vec!["0", "2,3:1", "1,3:1", "1,3:1;2,3:1", "1,3:2"]
        );
    }

    #[test]
    fn membership_checks_sums() {
        let poly = fixture();
        let inside = poly.tableau(&[(1, 3, 2)]).unwrap();
        assert!(poly.member(&inside).unwrap());
        let outside = poly.tableau(&[(1, 3, 2), (2, 3, 1)]).unwrap();
        assert!(!poly.member(&outside).unwrap());
        assert!(poly.tableau(&[(1, 2, 1)]).is_err());
    }

    #[test]
    fn rational_membership() {
        let poly = fixture();
        let half = Rat::new(Int::one(), Int::from(2));
        // (1/2, 1/2) keeps every sum within bounds.
        assert!(poly.contains(&[half.clone(), half.clone()]).unwrap());
        // (3/2, 3/2) pushes column 3 to 3 > 2.
        let t = Rat::new(Int::from(3), Int::from(2));
        assert!(!poly.contains(&[t.clone(), t]).unwrap());
        assert!(!poly.contains(&[-half.clone(), half]).unwrap());
        assert!(poly.contains(&[Rat::zero()]).is_err());
    }

    #[test]
    fn text_round_trip_and_zero_form() {
        let poly = fixture();
        assert_eq!(poly.zero().text(), "0");
        assert_eq!(poly.parse_tableau("0").unwrap(), poly.zero());
        let t = poly.tableau(&[(1, 3, 2), (2, 3, 1)]).unwrap();
        assert_eq!(t.text(), "1,3:2;2,3:1");
        assert_eq!(poly.parse_tableau("1,3:2;2,3:1").unwrap(), t);
        assert!(poly.parse_tableau("1,3").is_err());
        assert!(poly.parse_tableau("1,2:1").is_err());
        assert!(poly.parse_tableau("1,3:1;1,3:2").is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let poly = fixture();
        match enumerate_lattice_points(&poly, 3) {
            Err(Error::Budget { limit, estimate }) => {
                assert_eq!(limit, 3);
                assert_eq!(estimate, Int::from(3 * 2));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn dilation_at_one_matches_enumeration() {
        let poly = fixture();
        let count = count_lattice_points(&poly, 1, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(count, Int::from(5));
        assert_eq!(
            count_lattice_points(&poly, 0, DEFAULT_NODE_BUDGET).unwrap(),
            Int::one()
        );
        // Dilation by 2 doubles both row and column budgets: values a + b
        // with a <= 4 (column), b <= 2 (row), a + b <= 4.
        let two = count_lattice_points(&poly, 2, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(two, Int::from(12));
    }

    fn arb_config() -> impl Strategy<Value = Polytope> {
        (proptest::collection::vec(1u32..=3, 1..=4), any::<u64>()).prop_map(
            |(parts, seed)| {
                let beta = Composition::new(parts).unwrap();
                let all = enumerate_normal_subposets(beta.len()).unwrap();
                let poset = all[(seed % all.len() as u64) as usize].clone();
                Polytope::new(beta, poset).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn points_are_members_sorted_and_round_trip(poly in arb_config()) {
            let pts = enumerate_lattice_points(&poly, DEFAULT_NODE_BUDGET).unwrap();
            prop_assert!(!pts.is_empty());
            prop_assert_eq!(&pts[0], &poly.zero());
            for w in pts.windows(2) {
                prop_assert!(w[0] < w[1], "enumeration must be strictly increasing");
            }
            for t in &pts {
                prop_assert!(poly.member(t).unwrap());
                prop_assert_eq!(&poly.parse_tableau(&t.text()).unwrap(), t);
            }
        }

        #[test]
        fn count_matches_enumeration_length(poly in arb_config()) {
            let pts = enumerate_lattice_points(&poly, DEFAULT_NODE_BUDGET).unwrap();
            let count = count_lattice_points(&poly, 1, DEFAULT_NODE_BUDGET).unwrap();
            prop_assert_eq!(count, Int::from(pts.len() as u64));
        }
    }
}
