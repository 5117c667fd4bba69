//! Tableau statistics feeding the character formulas.
//!
//! Throughout, `lam` and `mu` are fillings of the shape of one polytope for
//! a composition `beta` and normal subposet `P`. Cell `(i, k)` sits in row
//! block `i` and column block `k` with `i` below `k` in `P`. Two kinds of
//! middle conditions appear and they are not interchangeable:
//!
//! * poset conditions (`j` strictly between in `P`) count dimensions that
//!   are genuinely inside the group, and
//! * chain conditions (`j` strictly between as integers) count positions in
//!   the ambient block triangle.
//!
//! The mix used here is the one under which the left and right orbit
//! dimension identities and the worked character values all hold; the
//! finite field oracle pins each choice down.

use crate::polytope::{Polytope, Tableau};
use crate::posets::Poset;
use crate::{invalid, Result};


fn check_shape(poly: &Polytope, t: &Tableau) -> Result<()> {
    if t.cells() != poly.cells() {
        return Err(invalid("tableau shape does not match the polytope"));
    }
    Ok(())
}

/// Sum of all entries.
pub fn size(t: &Tableau) -> u64 {
    t.values().iter().map(|&v| v as u64).sum()
}

/// Dimension exponent of the left orbit: each entry at `(i, k)` is weighted
/// by the parts `beta_j` over blocks `j` with `i` below `j` in the poset and
/// `j < k` as integers.
pub fn dim_left(poly: &Polytope, t: &Tableau) -> Result<u64> {
    check_shape(poly, t)?;
    let beta = poly.beta();
    let p = poly.poset();
    let mut acc = 0u64;
    for (&(i, k), &v) in t.cells().iter().zip(t.values()) {
        let mut weight = 0u64;
        for j in 1..k {
            if j > i && p.less(i, j) {
                weight += beta.part(j as usize) as u64;
            }
        }
        acc += v as u64 * weight;
    }
    Ok(acc)
}

/// Dimension exponent of the right orbit: the mirror of [`dim_left`], with
/// `i < j` as integers and `j` below `k` in the poset.
pub fn dim_right(poly: &Polytope, t: &Tableau) -> Result<u64> {
    check_shape(poly, t)?;
    let beta = poly.beta();
    let p = poly.poset();
    let mut acc = 0u64;
    for (&(i, k), &v) in t.cells().iter().zip(t.values()) {
        let mut weight = 0u64;
        for j in i + 1..k {
            if p.less(j, k) {
                weight += beta.part(j as usize) as u64;
            }
        }
        acc += v as u64 * weight;
    }
    Ok(acc)
}

/// Crossing number: entry pairs at `(i, k)` and `(j, l)` with `i < j` and
/// `k < l` as integers and `j` below `k` in the poset, weighted by the
/// product of the entries. This is the overlap exponent of the left and
/// right orbits.
pub fn crossings(poly: &Polytope, t: &Tableau) -> Result<u64> {
    check_shape(poly, t)?;
    let p = poly.poset();
    let mut acc = 0u64;
    for (&(i, k), &a) in t.cells().iter().zip(t.values()) {
        for (&(j, l), &b) in t.cells().iter().zip(t.values()) {
            if i < j && k < l && p.less(j, k) {
                acc += a as u64 * b as u64;
            }
        }
    }
    Ok(acc)
}

/// Nesting number of `mu` inside `lam`: entry pairs with a `mu` entry at
/// `(j, k)` strictly inside the span of a `lam` entry at `(i, l)` in the
/// integer order, `i < j` and `k < l`, weighted by the product.
pub fn nestings(poly: &Polytope, lam: &Tableau, mu: &Tableau) -> Result<u64> {
    check_shape(poly, lam)?;
    check_shape(poly, mu)?;
    let mut acc = 0u64;
    for (&(i, l), &a) in lam.cells().iter().zip(lam.values()) {
        for (&(j, k), &b) in mu.cells().iter().zip(mu.values()) {
            if i < j && k < l {
                acc += a as u64 * b as u64;
            }
        }
    }
    Ok(acc)
}

/// Cellwise minimum of two fillings of the same shape.
pub fn intersect(lam: &Tableau, mu: &Tableau) -> Result<Tableau> {
    if lam.cells() != mu.cells() {
        return Err(invalid("tableaux live on different shapes"));
    }
    let vals: Vec<u32> = lam
        .values()
        .iter()
        .zip(mu.values())
        .map(|(&a, &b)| a.min(b))
        .collect();
    Ok(Tableau::with_values(lam.cells().to_vec(), vals))
}

/// Pad a filling out to the full chain shape on the same composition:
/// returns the chain polytope and the tableau with the original values on
/// the old cells and zero on the new ones.
pub fn extend(poly: &Polytope, t: &Tableau) -> Result<(Polytope, Tableau)> {
    check_shape(poly, t)?;
    let chain = Polytope::new(poly.beta().clone(), Poset::chain(poly.beta().len()))
        .expect("chain is normal");
    let entries: Vec<(u32, u32, u32)> = t
        .cells()
        .iter()
        .zip(t.values())
        .map(|(&(i, j), &v)| (i, j, v))
        .collect();
    let padded = chain.tableau(&entries)?;
    Ok((chain, padded))
}

/// Local bounds at a cell `(j, l)`: the two effective dimensions left over
/// at that cell once `mu` uses up space inside the span (chain-interior
/// entries of row `j` and column `l`) and `lam` uses up space outside it
/// (row entries beyond `l`, column entries before `j`).
pub fn loc(
    poly: &Polytope,
    lam: &Tableau,
    mu: &Tableau,
    j: u32,
    l: u32,
) -> Result<(i64, i64)> {
    check_shape(poly, lam)?;
    check_shape(poly, mu)?;
    if poly.cell_index(j, l).is_none() {
        return Err(invalid(format!("({j},{l}) is not a cell of the shape")));
    }
    let beta = poly.beta();
    let mut m = beta.part(j as usize) as i64;
    let mut n = beta.part(l as usize) as i64;
    for k in j + 1..l {
        m -= mu.get(j, k) as i64;
        n -= mu.get(k, l) as i64;
    }
    for k in l + 1..=beta.len() as u32 {
        m -= lam.get(j, k) as i64;
    }
    for i in 1..j {
        n -= lam.get(i, l) as i64;
    }
    Ok((m, n))
}
