//! Brute-force finite field oracle.
//!
//! Everything in this module works directly with matrices over a prime
//! field `F_q`, with no reference to the closed character formulas. It
//! provides the independent route against which those formulas are checked:
//!
//! * rank labels of matrices and of functionals, whose fibers are the
//!   superclasses and the coadjoint orbit sums;
//! * orbit closures under explicit generator sets, acting on matrices by
//!   multiplication and on functionals by the dual (transpose-inverse)
//!   action followed by restriction to the supported cells;
//! * character values as literal sums of roots of unity over a label fiber.
//!
//! Oracle scans enumerate all `q^(number of supported cells)` functionals,
//! so they carry an explicit work budget.

use crate::polytope::{enumerate_lattice_points, Polytope, Tableau, DEFAULT_NODE_BUDGET};
use crate::posets::support_cells;
use crate::qarith::{int_pow, root_sum_to_int, Int};
use crate::{chars, invalid, Error, Result};
use std::collections::BTreeSet;

/// Default cap on the number of functionals an oracle scan may visit.
pub const DEFAULT_ORACLE_BUDGET: u64 = 1 << 24;

/// Default cap on the size of an orbit closure.
pub const DEFAULT_ORBIT_BUDGET: u64 = 1 << 20;

/// Prime moduli the oracle supports; root-of-unity sums are reduced in the
/// corresponding cyclotomic integers.
pub const ORACLE_PRIMES: [u64; 3] = [2, 3, 5];

fn require_prime(q: u64) -> Result<u8> {
    if ORACLE_PRIMES.contains(&q) {
        Ok(q as u8)
    } else {
        Err(invalid(format!(
            "oracle modulus must be one of {ORACLE_PRIMES:?}, got {q}"
        )))
    }
}

/// Multiplicative inverse in `F_q`.
pub fn fq_inv(q: u8, a: u8) -> u8 {
    assert!(a % q != 0, "zero has no inverse");
    let a = a % q;
    (1..q).find(|&b| (a as u16 * b as u16) % q as u16 == 1).unwrap()
}

/// A dense matrix over a prime field `F_q`. Row and column indices are
/// 1-based, matching cell coordinates elsewhere in the crate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqMatrix {
    q: u8,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl FqMatrix {
    pub fn zero(q: u64, rows: usize, cols: usize) -> Result<Self> {
        let q = require_prime(q)?;
        Ok(FqMatrix {
            q,
            rows,
            cols,
            data: vec![0; rows * cols],
        })
    }

    pub fn identity(q: u64, n: usize) -> Result<Self> {
        let mut m = Self::zero(q, n, n)?;
        for i in 1..=n {
            m.set(i as u32, i as u32, 1);
        }
        Ok(m)
    }

    /// 0/1 indicator matrix of a set of cells.
    pub fn indicator(q: u64, n: usize, cells: &[(u32, u32)]) -> Result<Self> {
        let mut m = Self::zero(q, n, n)?;
        for &(r, c) in cells {
            m.set(r, c, 1);
        }
        Ok(m)
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: u32, c: u32) -> u8 {
        assert!(r >= 1 && r as usize <= self.rows && c >= 1 && c as usize <= self.cols);
        self.data[(r as usize - 1) * self.cols + (c as usize - 1)]
    }

    pub fn set(&mut self, r: u32, c: u32, v: u8) {
        assert!(r >= 1 && r as usize <= self.rows && c >= 1 && c as usize <= self.cols);
        self.data[(r as usize - 1) * self.cols + (c as usize - 1)] = v % self.q;
    }

    pub fn mul(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.q, other.q, "mixed moduli");
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = FqMatrix {
            q: self.q,
            rows: self.rows,
            cols: other.cols,
            data: vec![0; self.rows * other.cols],
        };
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.data[k * other.cols + c];
                    if b != 0 {
                        let cell = &mut out.data[r * other.cols + c];
                        *cell = ((*cell as u16 + a as u16 * b as u16) % self.q as u16) as u8;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut out = FqMatrix {
            q: self.q,
            rows: self.cols,
            cols: self.rows,
            data: vec![0; self.data.len()],
        };
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    /// Zero every entry outside the listed cells.
    pub fn mask(&self, cells: &[(u32, u32)]) -> FqMatrix {
        let mut out = FqMatrix {
            q: self.q,
            rows: self.rows,
            cols: self.cols,
            data: vec![0; self.data.len()],
        };
        for &(r, c) in cells {
            out.set(r, c, self.get(r, c));
        }
        out
    }

    /// Rank over `F_q` of the window with inclusive 1-based bounds; an empty
    /// window has rank zero.
    pub fn window_rank(&self, r1: u32, r2: u32, c1: u32, c2: u32) -> usize {
        if r1 > r2 || c1 > c2 {
            return 0;
        }
        let nr = (r2 - r1 + 1) as usize;
        let nc = (c2 - c1 + 1) as usize;
        let q = self.q as u16;
        let mut m: Vec<u8> = Vec::with_capacity(nr * nc);
        for r in r1..=r2 {
            for c in c1..=c2 {
                m.push(self.get(r, c));
            }
        }
        let mut rank = 0usize;
        for col in 0..nc {
            let Some(pivot) = (rank..nr).find(|&r| m[r * nc + col] != 0) else {
                continue;
            };
            for c in 0..nc {
                m.swap(rank * nc + c, pivot * nc + c);
            }
            let inv = fq_inv(self.q, m[rank * nc + col]) as u16;
            for c in 0..nc {
                m[rank * nc + c] = ((m[rank * nc + c] as u16 * inv) % q) as u8;
            }
            for r in 0..nr {
                if r != rank && m[r * nc + col] != 0 {
                    let f = m[r * nc + col] as u16;
                    for c in 0..nc {
                        let sub = (f * m[rank * nc + c] as u16) % q;
                        m[r * nc + c] =
                            (((m[r * nc + c] as u16) + q * q - sub) % q) as u8;
                    }
                }
            }
            rank += 1;
            if rank == nr {
                break;
            }
        }
        rank
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.window_rank(1, self.rows as u32, 1, self.cols as u32)
    }
}

fn check_square(poly: &Polytope, m: &FqMatrix) -> Result<usize> {
    let n = poly.beta().total() as usize;
    if m.rows() != n || m.cols() != n {
        return Err(invalid(format!(
            "matrix is {}x{} but the composition needs {n}x{n}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(n)
}

fn check_supported(m: &FqMatrix, cells: &[(u32, u32)], what: &str) -> Result<()> {
    let allowed: BTreeSet<(u32, u32)> = cells.iter().copied().collect();
    for r in 1..=m.rows() as u32 {
        for c in 1..=m.cols() as u32 {
            if m.get(r, c) != 0 && !allowed.contains(&(r, c)) {
                return Err(invalid(format!(
                    "{what} has a nonzero entry at ({r},{c}) outside its support"
                )));
            }
        }
    }
    Ok(())
}

/// Rank label of a matrix in the nilpotent algebra: for blocks `a` below `b`
/// the label entry is the double difference of ranks of the lower-left-closed
/// windows `rows [start(a)..N] x cols [1..end(b)]`. The label is constant on
/// superclasses. The input must vanish on and below the block diagonal;
/// weight landing outside the shape of the polytope is an error.
pub fn block_label(poly: &Polytope, x: &FqMatrix) -> Result<Tableau> {
    let n = check_square(poly, x)? as u32;
    let beta = poly.beta();
    let chain_cells = support_cells(beta, &crate::posets::Poset::chain(beta.len()))?;
    check_supported(x, &chain_cells, "matrix")?;
    let l = beta.len();
    // r[a][b] = rank of rows start(a)..N, cols 1..end(b); a in 1..=l+1, b in 0..=l.
    let rank_at = |a: usize, b: usize| -> i64 {
        if a > l || b == 0 {
            return 0;
        }
        let (r1, _) = beta.block_range(a);
        let (_, c2) = beta.block_range(b);
        x.window_rank(r1, n, 1, c2) as i64
    };
    let mut entries = Vec::new();
    for a in 1..=l as u32 {
        for b in a + 1..=l as u32 {
            let (a_, b_) = (a as usize, b as usize);
            let d = rank_at(a_, b_) - rank_at(a_ + 1, b_) - rank_at(a_, b_ - 1)
                + rank_at(a_ + 1, b_ - 1);
            if d < 0 {
                return Err(invalid(format!(
                    "rank label is negative at ({a},{b})"
                )));
            }
            if d > 0 {
                if poly.cell_index(a, b).is_none() {
                    return Err(invalid(format!(
                        "rank label has weight at ({a},{b}) outside the shape"
                    )));
                }
                entries.push((a, b, d as u32));
            }
        }
    }
    poly.tableau(&entries)
}

/// Upper-right corner-rank weights over the chain refinement: for blocks
/// `a` below `b` the double difference of ranks of the windows
/// `rows [1..end(a)] x cols [start(b)..N]`. Returns `None` on a negative
/// difference, which only arises for inputs with weight below the block
/// diagonal.
fn dual_corner_weights(poly: &Polytope, y: &FqMatrix) -> Option<Vec<(u32, u32, u32)>> {
    let beta = poly.beta();
    let n = y.rows() as u32;
    let l = beta.len();
    // s[a][b] = rank of rows 1..end(a), cols start(b)..N; a in 0..=l, b in 1..=l+1.
    let rank_at = |a: usize, b: usize| -> i64 {
        if a == 0 || b > l {
            return 0;
        }
        let (_, r2) = beta.block_range(a);
        let (c1, _) = beta.block_range(b);
        y.window_rank(1, r2, c1, n) as i64
    };
    let mut entries = Vec::new();
    for a in 1..=l as u32 {
        for b in a + 1..=l as u32 {
            let (a_, b_) = (a as usize, b as usize);
            let d = rank_at(a_, b_) - rank_at(a_ - 1, b_) - rank_at(a_, b_ + 1)
                + rank_at(a_ - 1, b_ + 1);
            if d < 0 {
                return None;
            }
            if d > 0 {
                entries.push((a, b, d as u32));
            }
        }
    }
    Some(entries)
}

/// Rank label of a functional on the nilpotent algebra, the mirror of
/// [`block_label`]. The fibers of this label are the orbit sums entering
/// character values. The input must be supported on the cells of the
/// pattern group.
///
/// The functional space of a proper subposet is a quotient of the chain
/// functional space by the complementary cells, and the group action
/// projects along that quotient, so corner ranks of `y` itself are not
/// invariant. Instead the label is the unique corner-rank label supported
/// inside the shape among all extensions of `y` by values on the
/// complementary cells. The search costs `q^(number of complementary
/// cells)` rank computations; on the chain it degenerates to a single one.
pub fn dual_label(poly: &Polytope, y: &FqMatrix) -> Result<Tableau> {
    check_square(poly, y)?;
    let beta = poly.beta();
    let supp = support_cells(beta, poly.poset())?;
    check_supported(y, &supp, "functional")?;
    let chain_cells = support_cells(beta, &crate::posets::Poset::chain(beta.len()))?;
    let in_supp: BTreeSet<(u32, u32)> = supp.iter().copied().collect();
    let spare: Vec<(u32, u32)> = chain_cells
        .into_iter()
        .filter(|c| !in_supp.contains(c))
        .collect();
    let q = y.q() as u8;
    let mut probe = y.clone();
    let mut digits = vec![0u8; spare.len()];
    let mut found: Option<Tableau> = None;
    loop {
        if let Some(entries) = dual_corner_weights(poly, &probe) {
            if entries.iter().all(|&(a, b, _)| poly.cell_index(a, b).is_some()) {
                let label = poly.tableau(&entries)?;
                match &found {
                    Some(prev) if *prev != label => {
                        return Err(invalid(format!(
                            "functional has two in-shape labels {} and {}",
                            prev.text(),
                            label.text()
                        )));
                    }
                    Some(_) => {}
                    None => found = Some(label),
                }
            }
        }
        let mut at = 0;
        loop {
            if at == digits.len() {
                return found.ok_or_else(|| {
                    invalid("no extension of the functional has an in-shape label")
                });
            }
            digits[at] += 1;
            if digits[at] < q {
                probe.set(spare[at].0, spare[at].1, digits[at]);
                break;
            }
            digits[at] = 0;
            probe.set(spare[at].0, spare[at].1, 0);
            at += 1;
        }
    }
}

/// Iterate over every assignment of field values to the supported cells.
fn scan_support(
    q: u8,
    n: usize,
    cells: &[(u32, u32)],
    budget: u64,
    mut visit: impl FnMut(&FqMatrix) -> Result<()>,
) -> Result<()> {
    let mut total: u64 = 1;
    for _ in cells {
        total = total
            .checked_mul(q as u64)
            .filter(|&t| t <= budget)
            .ok_or_else(|| Error::Budget {
                limit: budget,
                estimate: int_pow(q as u64, cells.len() as u64),
            })?;
    }
    let mut digits = vec![0u8; cells.len()];
    let mut m = FqMatrix::zero(q as u64, n, n).expect("prime checked");
    loop {
        visit(&m)?;
        // Odometer step.
        let mut at = 0;
        loop {
            if at == digits.len() {
                return Ok(());
            }
            digits[at] += 1;
            if digits[at] < q {
                m.set(cells[at].0, cells[at].1, digits[at]);
                break;
            }
            digits[at] = 0;
            m.set(cells[at].0, cells[at].1, 0);
            at += 1;
        }
    }
}

/// All functionals with the given rank label.
pub fn enumerate_dual_fiber(
    poly: &Polytope,
    lam: &Tableau,
    q: u64,
    budget: u64,
) -> Result<Vec<FqMatrix>> {
    let q = require_prime(q)?;
    let n = poly.beta().total() as usize;
    let supp = support_cells(poly.beta(), poly.poset())?;
    let mut out = Vec::new();
    scan_support(q, n, &supp, budget, |m| {
        if &dual_label(poly, m)? == lam {
            out.push(m.clone());
        }
        Ok(())
    })?;
    Ok(out)
}

/// Number of matrices with the given rank label: the superclass size,
/// counted one matrix at a time.
pub fn oracle_superclass_size(
    poly: &Polytope,
    mu: &Tableau,
    q: u64,
    budget: u64,
) -> Result<Int> {
    let q = require_prime(q)?;
    let n = poly.beta().total() as usize;
    let supp = support_cells(poly.beta(), poly.poset())?;
    let mut count = Int::from(0);
    scan_support(q, n, &supp, budget, |m| {
        if &block_label(poly, m)? == mu {
            count += 1;
        }
        Ok(())
    })?;
    Ok(count)
}

fn pairing(y: &FqMatrix, cells: &[(u32, u32)]) -> u8 {
    let q = y.q() as u16;
    let mut acc = 0u16;
    for &(r, c) in cells {
        acc = (acc + y.get(r, c) as u16) % q;
    }
    acc as u8
}

/// Character value as a literal root-of-unity sum over the label fiber:
/// the sum of `z^(<Y, e>)` over all functionals `Y` labelled `lam`, where
/// `e` is the representative matrix of the class of `mu` and `z` is a
/// primitive q-th root of unity. The sum is a rational integer.
pub fn oracle_char_value(
    poly: &Polytope,
    lam: &Tableau,
    mu: &Tableau,
    q: u64,
    budget: u64,
) -> Result<Int> {
    let qp = require_prime(q)?;
    if !poly.member(lam)? || !poly.member(mu)? {
        return Err(invalid("tableau is not a lattice point of the polytope"));
    }
    let n = poly.beta().total() as usize;
    let supp = support_cells(poly.beta(), poly.poset())?;
    let rep = chars::superclass_representative(poly, mu)?;
    let mut counts = vec![Int::from(0); q as usize];
    scan_support(qp, n, &supp, budget, |m| {
        if &dual_label(poly, m)? == lam {
            counts[pairing(m, &rep) as usize] += 1;
        }
        Ok(())
    })?;
    root_sum_to_int(q, &counts)
        .ok_or_else(|| invalid("orbit sum is not a rational integer"))
}

/// The full character table by a single scan: row `i`, column `j` holds the
/// root-of-unity sum over the fiber of tableau `i` paired against the
/// representative of tableau `j`. Tableaux are indexed in enumeration order.
pub fn oracle_char_table(
    poly: &Polytope,
    q: u64,
    budget: u64,
) -> Result<(Vec<Tableau>, Vec<Vec<Int>>)> {
    let qp = require_prime(q)?;
    let index = enumerate_lattice_points(poly, DEFAULT_NODE_BUDGET)?;
    let n = poly.beta().total() as usize;
    let supp = support_cells(poly.beta(), poly.poset())?;
    let reps: Vec<Vec<(u32, u32)>> = index
        .iter()
        .map(|mu| chars::superclass_representative(poly, mu))
        .collect::<Result<_>>()?;
    let mut counts = vec![vec![vec![Int::from(0); q as usize]; index.len()]; index.len()];
    scan_support(qp, n, &supp, budget, |m| {
        let label = dual_label(poly, m)?;
        let li = index
            .binary_search(&label)
            .map_err(|_| invalid("label fell outside the tableau index"))?;
        for (mi, rep) in reps.iter().enumerate() {
            counts[li][mi][pairing(m, rep) as usize] += 1;
        }
        Ok(())
    })?;
    let mut values = Vec::with_capacity(index.len());
    for row in counts {
        let mut out = Vec::with_capacity(row.len());
        for cell in row {
            out.push(
                root_sum_to_int(q, &cell)
                    .ok_or_else(|| invalid("orbit sum is not a rational integer"))?,
            );
        }
        values.push(out);
    }
    Ok((index, values))
}

/// Which side a group element acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    TwoSided,
}

/// Group generators as explicit matrices: the cross-block transvections
/// `Id + t E_(r,c)` over the supported cells of the chain refinement, and
/// with `parabolic` set also the within-block transvections and the
/// diagonal dilations, generating the full block upper triangular group.
fn generators(poly: &Polytope, q: u8, parabolic: bool) -> Vec<FqMatrix> {
    let beta = poly.beta();
    let n = beta.total() as usize;
    let chain_cells =
        support_cells(beta, &crate::posets::Poset::chain(beta.len())).expect("chain refines");
    let mut gens = Vec::new();
    let mut cells = chain_cells;
    if parabolic {
        for block in 1..=beta.len() {
            let (lo, hi) = beta.block_range(block);
            for r in lo..=hi {
                for c in lo..=hi {
                    if r != c {
                        cells.push((r, c));
                    }
                }
            }
        }
    }
    for (r, c) in cells {
        for t in 1..q {
            let mut g = FqMatrix::identity(q as u64, n).expect("prime checked");
            g.set(r, c, t);
            gens.push(g);
        }
    }
    if parabolic {
        for r in 1..=n as u32 {
            for t in 2..q {
                let mut g = FqMatrix::identity(q as u64, n).expect("prime checked");
                g.set(r, r, t);
                gens.push(g);
            }
        }
    }
    gens
}

fn close_orbit(
    seed: FqMatrix,
    budget: u64,
    step: impl Fn(&FqMatrix, &mut Vec<FqMatrix>),
) -> Result<BTreeSet<FqMatrix>> {
    let mut seen = BTreeSet::new();
    let mut frontier = vec![seed];
    let mut scratch = Vec::new();
    while let Some(m) = frontier.pop() {
        if !seen.insert(m.clone()) {
            continue;
        }
        if seen.len() as u64 > budget {
            return Err(Error::Budget {
                limit: budget,
                estimate: Int::from(seen.len() as u64),
            });
        }
        scratch.clear();
        step(&m, &mut scratch);
        for next in scratch.drain(..) {
            if !seen.contains(&next) {
                frontier.push(next);
            }
        }
    }
    Ok(seen)
}

/// Orbit of a functional under the action of the group on the chosen side,
/// using the dual action (multiply by the transpose and restrict back to the
/// supported cells). With `parabolic` unset the acting group is the
/// unipotent group of the chain refinement; with it set, the full block
/// upper triangular group.
pub fn dual_orbit(
    poly: &Polytope,
    seed: &FqMatrix,
    side: Side,
    parabolic: bool,
    budget: u64,
) -> Result<BTreeSet<FqMatrix>> {
    let q = require_prime(seed.q())?;
    check_square(poly, seed)?;
    let supp = support_cells(poly.beta(), poly.poset())?;
    check_supported(seed, &supp, "functional")?;
    let gens = generators(poly, q, parabolic);
    close_orbit(seed.clone(), budget, move |m, out| {
        for g in &gens {
            let gt = g.transpose();
            if side != Side::Right {
                out.push(gt.mul(m).mask(&supp));
            }
            if side != Side::Left {
                out.push(m.mul(&gt).mask(&supp));
            }
        }
    })
}

/// Orbit of a matrix in the nilpotent algebra under two-sided multiplication
/// by the group. Products stay inside the supported cells; leakage outside
/// is an error rather than silently masked.
pub fn primal_orbit(
    poly: &Polytope,
    seed: &FqMatrix,
    parabolic: bool,
    budget: u64,
) -> Result<BTreeSet<FqMatrix>> {
    let q = require_prime(seed.q())?;
    check_square(poly, seed)?;
    let supp = support_cells(poly.beta(), poly.poset())?;
    check_supported(seed, &supp, "matrix")?;
    let gens = generators(poly, q, parabolic);
    let orbit = close_orbit(seed.clone(), budget, move |m, out| {
        for g in &gens {
            out.push(g.mul(m));
            out.push(m.mul(g));
        }
    })?;
    for m in &orbit {
        check_supported(m, &supp, "orbit member")?;
    }
    Ok(orbit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posets::{enumerate_normal_subposets, Composition, Poset};
    use proptest::prelude::*;

    fn poly_of(parts: &[u32], pairs: &[(u32, u32)]) -> Polytope {
        let beta = Composition::new(parts.to_vec()).unwrap();
        let poset = Poset::new(beta.len(), pairs, true).unwrap();
        Polytope::new(beta, poset).unwrap()
    }

    fn chain_poly(parts: &[u32]) -> Polytope {
        Polytope::chain(Composition::new(parts.to_vec()).unwrap())
    }

    #[test]
    fn field_inverses() {
        for q in [2u8, 3, 5] {
            for a in 1..q {
                assert_eq!((a as u16 * fq_inv(q, a) as u16) % q as u16, 1);
            }
        }
    }

    #[test]
    fn rank_distribution_of_two_by_two_matrices() {
        // Over F_2 the sixteen 2x2 matrices split as 1 of rank 0, 9 of rank
        // 1, 6 of rank 2.
        let mut counts = [0u32; 3];
        for bits in 0u8..16 {
            let mut m = FqMatrix::zero(2, 2, 2).unwrap();
            for (at, (r, c)) in [(1, 1), (1, 2), (2, 1), (2, 2)].iter().enumerate() {
                m.set(*r, *c, (bits >> at) & 1);
            }
            counts[m.rank()] += 1;
        }
        assert_eq!(counts, [1, 9, 6]);
    }

    #[test]
    fn window_ranks() {
        let mut m = FqMatrix::zero(3, 3, 3).unwrap();
        m.set(1, 2, 1);
        m.set(2, 3, 2);
        m.set(1, 3, 1);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.window_rank(1, 1, 1, 3), 1);
        assert_eq!(m.window_rank(3, 3, 1, 3), 0);
        assert_eq!(m.window_rank(2, 1, 1, 3), 0);
        // Rank depends on the field: [2 1] = 2 * [1 2] over F_3 but the
        // same integer matrix is invertible over F_5.
        for (q, rank) in [(3u64, 1usize), (5, 2)] {
            let mut a = FqMatrix::zero(q, 2, 2).unwrap();
            a.set(1, 1, 1);
            a.set(1, 2, 2);
            a.set(2, 1, 2);
            a.set(2, 2, 1);
            assert_eq!(a.rank(), rank);
        }
    }

    #[test]
    fn block_label_collapses_a_superclass() {
        // On the full chain of three singleton blocks the matrices
        // E12 + E23 + E13 and E12 + E23 carry the same label.
        let poly = chain_poly(&[1, 1, 1]);
        let mut x = FqMatrix::zero(2, 3, 3).unwrap();
        x.set(1, 2, 1);
        x.set(2, 3, 1);
        let plain = block_label(&poly, &x).unwrap();
        x.set(1, 3, 1);
        let shifted = block_label(&poly, &x).unwrap();
        assert_eq!(plain.text(), "1,2:1;2,3:1");
        assert_eq!(shifted, plain);
    }

    #[test]
    fn dual_label_prefers_the_outer_cell() {
        // The functional E13 + E12 lies in the same coadjoint orbit as E13.
        let poly = chain_poly(&[1, 1, 1]);
        let mut y = FqMatrix::zero(2, 3, 3).unwrap();
        y.set(1, 3, 1);
        y.set(1, 2, 1);
        assert_eq!(dual_label(&poly, &y).unwrap().text(), "1,3:1");
    }

    #[test]
    fn labels_reject_unsupported_entries() {
        let poly = poly_of(&[1, 1, 1], &[(1, 3), (2, 3)]);
        let mut x = FqMatrix::zero(2, 3, 3).unwrap();
        x.set(2, 1, 1);
        assert!(block_label(&poly, &x).is_err());
        let mut y = FqMatrix::zero(2, 3, 3).unwrap();
        y.set(1, 2, 1);
        // (1,2) is outside the shape {13, 23}: fine for the matrix side
        // (it only needs the chain support) but an off-shape label results.
        assert!(block_label(&poly, &y).is_err());
        assert!(dual_label(&poly, &y).is_err());
    }

    #[test]
    fn fibers_partition_the_functional_space() {
        for (parts, pairs, q) in [
            (vec![1u32, 1, 1], vec![(1u32, 3u32), (2, 3)], 2u64),
            (vec![2, 1], vec![(1, 2)], 3),
            (vec![1, 2, 1], vec![(1, 2), (1, 3), (2, 3)], 2),
        ] {
            let poly = poly_of(&parts, &pairs);
            let pts = enumerate_lattice_points(&poly, DEFAULT_NODE_BUDGET).unwrap();
            let mut total = 0usize;
            for t in &pts {
                total += enumerate_dual_fiber(&poly, t, q, DEFAULT_ORACLE_BUDGET)
                    .unwrap()
                    .len();
            }
            let supp = support_cells(poly.beta(), poly.poset()).unwrap().len();
            assert_eq!(total as u64, q.pow(supp as u32), "q={q} parts={parts:?}");
        }
    }

    #[test]
    fn dual_fibers_are_parabolic_orbits() {
        for (parts, q) in [(vec![1u32, 1], 2u64), (vec![1, 1], 3), (vec![2, 2], 2)] {
            let poly = chain_poly(&parts);
            let pts = enumerate_lattice_points(&poly, DEFAULT_NODE_BUDGET).unwrap();
            for t in &pts {
                let fiber: BTreeSet<FqMatrix> =
                    enumerate_dual_fiber(&poly, t, q, DEFAULT_ORACLE_BUDGET)
                        .unwrap()
                        .into_iter()
                        .collect();
                let rep = chars::superclass_representative(&poly, t).unwrap();
                let n = poly.beta().total() as usize;
                let seed = FqMatrix::indicator(q, n, &rep).unwrap();
                let orbit =
                    dual_orbit(&poly, &seed, Side::TwoSided, true, DEFAULT_ORBIT_BUDGET)
                        .unwrap();
                assert_eq!(orbit, fiber, "tableau {} at q={q}", t.text());
            }
        }
    }

    #[test]
    fn block_fibers_are_parabolic_orbits() {
        for (parts, pairs, q) in [
            (vec![1u32, 1, 1], vec![(1u32, 3u32), (2, 3)], 2u64),
            (vec![2, 1], vec![(1, 2)], 3),
        ] {
            let poly = poly_of(&parts, &pairs);
            let pts = enumerate_lattice_points(&poly, DEFAULT_NODE_BUDGET).unwrap();
            let n = poly.beta().total() as usize;
            let supp = support_cells(poly.beta(), poly.poset()).unwrap();
            for t in &pts {
                let mut fiber = BTreeSet::new();
                scan_support(q as u8, n, &supp, DEFAULT_ORACLE_BUDGET, |m| {
                    if &block_label(&poly, m).unwrap() == t {
                        fiber.insert(m.clone());
                    }
                    Ok(())
                })
                .unwrap();
                let rep = chars::superclass_representative(&poly, t).unwrap();
                let seed = FqMatrix::indicator(q, n, &rep).unwrap();
                let orbit = primal_orbit(&poly, &seed, true, DEFAULT_ORBIT_BUDGET).unwrap();
                assert_eq!(orbit, fiber, "tableau {} at q={q}", t.text());
            }
        }
    }

    #[test]
    fn oracle_budget_is_enforced() {
        let poly = chain_poly(&[2, 2]);
        let t = poly.zero();
        match enumerate_dual_fiber(&poly, &t, 2, 8) {
            Err(Error::Budget { limit, estimate }) => {
                assert_eq!(limit, 8);
                assert_eq!(estimate, Int::from(16));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn labels_are_orbit_invariants(seed in any::<u64>()) {
            // Random configuration, random functional, random short product
            // of parabolic generators on either side: labels must agree.
            let mut rng = seed;
            let mut next = move || {
                rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                rng >> 33
            };
            let parts: Vec<u32> = (0..1 + next() % 3).map(|_| 1 + (next() % 2) as u32).collect();
            let beta = Composition::new(parts).unwrap();
            let all = enumerate_normal_subposets(beta.len()).unwrap();
            let poset = all[(next() % all.len() as u64) as usize].clone();
            let poly = Polytope::new(beta, poset).unwrap();
            let q = [2u64, 3][(next() % 2) as usize];
            let n = poly.beta().total() as usize;
            let supp = support_cells(poly.beta(), poly.poset()).unwrap();

            let mut y = FqMatrix::zero(q, n, n).unwrap();
            for &(r, c) in &supp {
                y.set(r, c, (next() % q) as u8);
            }
            let gens = generators(&poly, q as u8, true);
            let mut moved = y.clone();
            for _ in 0..6 {
                if gens.is_empty() { break; }
                let g = &gens[(next() % gens.len() as u64) as usize];
                let gt = g.transpose();
                moved = if next() % 2 == 0 {
                    gt.mul(&moved).mask(&supp)
                } else {
                    moved.mul(&gt).mask(&supp)
                };
            }
            prop_assert_eq!(
                dual_label(&poly, &y).unwrap(),
                dual_label(&poly, &moved).unwrap()
            );
        }
    }
}
