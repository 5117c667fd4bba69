//! Closed-form supercharacter values in exact arithmetic.
//!
//! The centerpiece is [`char_value`]: the value of the supercharacter
//! labelled by one tableau at the superclass labelled by another, computed as
//! a power of `q` from the dimension, crossing, and nesting statistics times
//! one two-block "line" character per cell. Degrees come from the same
//! product specialized to the zero superclass; superclass sizes come from a
//! separate flag-orbit factorization of the two-sided parabolic action.
//! Everything is a polynomial in `q` evaluated over `BigInt`, so the whole
//! character table of a desk-scale theory is exact.

use num::{Integer, One, Zero};
use serde_json::json;

use crate::polytope::{enumerate_lattice_points, Polytope, Tableau};
use crate::posets::{enumerate_normal_subposets, support_cells, Composition, Poset};
use crate::qarith::{
    choose2, gl_order, int_pow, is_integral, q_binomial, rat_pow, to_int, Int, Rat,
};
use crate::stats;
use crate::{invalid, Result};

/// Number of `m` by `n` matrices of rank `l` over `F_q`:
/// `|GL_l| * qbin(m, l) * qbin(n, l)`. Zero outside `0 <= l <= min(m, n)`;
/// negative `m` or `n` admit no rank at all, so every `l` gives zero there.
pub fn rank_count(m: i64, n: i64, l: i64, q: u64) -> Int {
    if l < 0 || l > m || l > n {
        return Int::zero();
    }
    gl_order(l as u64, q) * q_binomial(m, l, q) * q_binomial(n, l, q)
}

/// Supercharacter of the two-block group on blocks `(m, n)`: the character
/// labelled by rank `l` evaluated at the superclass labelled by rank `j`.
/// At `j = 0` this is the degree, i.e. the rank count. Out-of-range labels
/// return zero; those guards are where the full product formula vanishes.
pub fn line_char(m: i64, n: i64, l: i64, j: i64, q: u64) -> Int {
    if l < 0 || j < 0 {
        return Int::zero();
    }
    if j == 0 {
        return rank_count(m, n, l, q);
    }
    if j > m || j > n || l > m || l > n {
        return Int::zero();
    }
    let mut sum = Int::zero();
    for a in 0..=l {
        let b = l - a;
        let mut term = int_pow(q, (b * j) as u64 + choose2(a as u64))
            * q_binomial(j, a, q)
            * rank_count(m - j, n - j, b, q);
        if a % 2 == 1 {
            term = -term;
        }
        sum += term;
    }
    sum
}

fn require_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(invalid("q must be at least 2"));
    }
    Ok(())
}

fn require_member(poly: &Polytope, t: &Tableau, what: &str) -> Result<()> {
    if !poly.member(t)? {
        return Err(invalid(format!(
            "{what} is not a lattice point of the polytope"
        )));
    }
    Ok(())
}

/// Exact value of the supercharacter labelled by `lam` at the superclass
/// labelled by `mu`. The result is always a rational integer; a fractional
/// outcome would mean a defect in the statistics and is reported as an
/// error instead of being rounded.
pub fn char_value(poly: &Polytope, lam: &Tableau, mu: &Tableau, q: u64) -> Result<Int> {
    require_q(q)?;
    require_member(poly, lam, "lambda")?;
    require_member(poly, mu, "mu")?;
    let mut product = Int::one();
    for &(j, l) in poly.cells() {
        let (m, n) = stats::loc(poly, lam, mu, j, l)?;
        product *= line_char(m, n, lam.get(j, l) as i64, mu.get(j, l) as i64, q);
        if product.is_zero() {
            return Ok(product);
        }
    }
    let up = stats::dim_left(poly, lam)? + stats::dim_right(poly, lam)?;
    let down = stats::crossings(poly, lam)? + stats::nestings(poly, lam, mu)?;
    let value = rat_pow(q, up as i64 - down as i64) * Rat::from(product);
    if !is_integral(&value) {
        return Err(invalid(format!("character value {value} is not an integer")));
    }
    Ok(to_int(&value))
}

/// Degree of the supercharacter labelled by `lam`, via the orbit-size
/// product formula: a `q`-power from the dimension and crossing statistics
/// times one rank count per cell. Always equals `char_value(poly, lam, 0, q)`.
pub fn degree(poly: &Polytope, lam: &Tableau, q: u64) -> Result<Int> {
    require_q(q)?;
    require_member(poly, lam, "lambda")?;
    let zero = poly.zero();
    let mut product = Int::one();
    for &(j, l) in poly.cells() {
        let (m, n) = stats::loc(poly, lam, &zero, j, l)?;
        product *= rank_count(m, n, lam.get(j, l) as i64, q);
    }
    let up = stats::dim_left(poly, lam)? + stats::dim_right(poly, lam)?;
    let down = stats::crossings(poly, lam)?;
    let value = rat_pow(q, up as i64 - down as i64) * Rat::from(product);
    if !is_integral(&value) {
        return Err(invalid(format!("degree {value} is not an integer")));
    }
    Ok(to_int(&value))
}

/// Number of group elements in the superclass labelled by `mu`.
///
/// The two-sided parabolic orbit of the canonical representative factors
/// through the flag of column spaces spanned by its leading block columns:
/// the orbit is a disjoint union of right orbits, one per flag in the
/// parabolic orbit of the pivot flag, and all of the same size. The right
/// orbit size is a per-block surjection count with free movement inside the
/// span already established; the flag orbit is the parabolic order divided
/// by the flag stabilizer. Each factor is an explicit product, so the
/// result is a polynomial in `q` evaluated exactly.
pub fn superclass_size(poly: &Polytope, mu: &Tableau, q: u64) -> Result<Int> {
    require_q(q)?;
    require_member(poly, mu, "mu")?;
    let beta = poly.beta();
    let l = beta.len();
    let v = |i: usize, k: usize| mu.get(i as u32, k as u32) as u64;
    let bpart = |i: usize| beta.part(i) as u64;
    // s[i][k]: pivot rows of block i consumed by column blocks up to k
    let mut s = vec![vec![0u64; l + 1]; l + 1];
    for i in 1..=l {
        for k in 1..=l {
            s[i][k] = s[i][k - 1] + v(i, k);
        }
    }

    // Right orbit of the representative: block column k spans c_k new
    // directions (a surjection onto the new quotient) and moves freely
    // inside the directions spanned by earlier blocks.
    let mut right = Int::one();
    let mut spanned = 0u64;
    for k in 1..=l {
        let ck: u64 = (1..=l).map(|i| v(i, k)).sum();
        for t in 0..ck {
            right *= int_pow(q, bpart(k)) - int_pow(q, t);
        }
        right *= int_pow(q, spanned * bpart(k));
        spanned += ck;
    }

    // Parabolic orbit of the pivot flag: group order over stabilizer order.
    let mut group = Int::one();
    let mut gexp = 0u64;
    for i in 1..=l {
        group *= gl_order(bpart(i), q);
        for ip in (i + 1)..=l {
            gexp += bpart(i) * bpart(ip);
        }
    }
    group *= int_pow(q, gexp);

    let mut stab = Int::one();
    let mut sexp = 0u64;
    for i in 1..=l {
        let used = s[i][l];
        let free = bpart(i) - used;
        // within-block: the stabilizer of the pivot filtration of block i
        for k in 1..=l {
            stab *= gl_order(v(i, k), q);
        }
        stab *= gl_order(free, q);
        let mut radical = used * free;
        for k in 1..=l {
            for kp in (k + 1)..=l {
                radical += v(i, k) * v(i, kp);
            }
        }
        sexp += radical;
        // across blocks: a pivot column of a later block may only hit the
        // span established at its own stage; free columns are unconstrained
        for ip in (i + 1)..=l {
            let mut z = (bpart(ip) - s[ip][l]) * bpart(i);
            for k in 1..=l {
                z += v(ip, k) * s[i][k];
            }
            sexp += z;
        }
    }
    stab *= int_pow(q, sexp);

    let (flag, rem) = group.div_rem(&stab);
    debug_assert!(rem.is_zero(), "flag stabilizer must divide the group order");
    Ok(flag * right)
}

/// Specialized closed form for compositions with all parts 1, kept as an
/// independent route to the same values as [`char_value`]. Vanishes when
/// some weighted cell of `lam` strictly covers an endpoint of a weighted
/// cell of `mu`; otherwise a signed product of `q`-powers and `q - 1`s.
pub fn bn_char_value(poly: &Polytope, lam: &Tableau, mu: &Tableau, q: u64) -> Result<Int> {
    require_q(q)?;
    if poly.beta().parts().iter().any(|&b| b != 1) {
        return Err(invalid("the specialized formula needs all parts equal to 1"));
    }
    require_member(poly, lam, "lambda")?;
    require_member(poly, mu, "mu")?;
    for (&(i, k), &w) in lam.cells().iter().zip(lam.values()) {
        if w == 0 {
            continue;
        }
        for j in (i + 1)..k {
            if mu.get(i, j) != 0 || mu.get(j, k) != 0 {
                return Ok(Int::zero());
            }
        }
    }
    let up = stats::dim_left(poly, lam)? + stats::dim_right(poly, lam)?;
    let down = stats::crossings(poly, lam)? + stats::nestings(poly, lam, mu)?;
    let arcs = stats::size(lam);
    let shared = stats::size(&stats::intersect(lam, mu)?);
    let mut scale = Int::one();
    for _ in shared..arcs {
        scale *= Int::from(q) - Int::one();
    }
    if shared % 2 == 1 {
        scale = -scale;
    }
    let value = rat_pow(q, up as i64 - down as i64) * Rat::from(scale);
    if !is_integral(&value) {
        return Err(invalid(format!("character value {value} is not an integer")));
    }
    Ok(to_int(&value))
}

/// Whether the supercharacter normalized by its degree survives zero-padding
/// onto the full chain: the identity is cross-multiplied so the check stays
/// in integers.
pub fn normalized_restriction_check(
    poly: &Polytope,
    lam: &Tableau,
    mu: &Tableau,
    q: u64,
) -> Result<bool> {
    let value = char_value(poly, lam, mu, q)?;
    let (chain, lam_ext) = stats::extend(poly, lam)?;
    let (_, mu_ext) = stats::extend(poly, mu)?;
    let lhs = value * degree(&chain, &lam_ext, q)?;
    let rhs = char_value(&chain, &lam_ext, &mu_ext, q)? * degree(poly, lam, q)?;
    Ok(lhs == rhs)
}

/// Global 1-based positions of the ones in the canonical superclass
/// representative. Within block row `i` the rows serving column block `k`
/// sit just above the rows already claimed by earlier column blocks,
/// counted from the bottom; within block column `k` the columns serving row
/// block `i` sit at the front, after those claimed by later row blocks; the
/// ones fill the anti-diagonal of each square sub-block. The pattern is a
/// partial permutation matrix, so every corner rank equals the number of
/// ones it encloses and the block label of the result is `mu` itself.
pub fn superclass_representative(poly: &Polytope, mu: &Tableau) -> Result<Vec<(u32, u32)>> {
    require_member(poly, mu, "mu")?;
    let beta = poly.beta();
    let mut ones = Vec::new();
    for (&(i, k), &v) in mu.cells().iter().zip(mu.values()) {
        if v == 0 {
            continue;
        }
        let (rstart, _) = beta.block_range(i as usize);
        let (cstart, _) = beta.block_range(k as usize);
        let bi = beta.part(i as usize);
        let si: u32 = (1..=k).map(|j| mu.get(i, j)).sum();
        let tk: u32 = (i..k).map(|j| mu.get(j, k)).sum();
        for r in 0..v {
            ones.push((rstart + bi - si + r, cstart + tk - 1 - r));
        }
    }
    ones.sort_unstable();
    Ok(ones)
}

/// The canonical two-block representative of rank `j`: a reversed identity
/// occupying the last `j` rows of the first block and the first `j` columns
/// of the second.
pub fn line_representative(m: u32, n: u32, j: u32) -> Result<Vec<(u32, u32)>> {
    if j > m.min(n) {
        return Err(invalid(format!("rank {j} exceeds the {m} by {n} block")));
    }
    Ok((0..j).map(|r| (m - j + r + 1, m + j - r)).collect())
}

/// The normal subposet cut out by a family of chain tableaux: `j` stays
/// below `k` exactly when no tableau in the family has weight on a cell
/// enclosing the step from `j` to `k`. The relation is transitive and
/// normal by construction, since enclosure only grows under widening.
pub fn kernel_poset(beta: &Composition, family: &[Tableau]) -> Result<Poset> {
    let chain = Polytope::chain(beta.clone());
    for t in family {
        require_member(&chain, t, "family tableau")?;
    }
    let l = beta.len();
    let mut pairs = Vec::new();
    for j in 1..=l as u32 {
        for k in (j + 1)..=l as u32 {
            let blocked = family.iter().any(|t| {
                t.cells()
                    .iter()
                    .zip(t.values())
                    .any(|(&(i, c), &w)| w != 0 && i <= j && k <= c)
            });
            if !blocked {
                pairs.push((j, k));
            }
        }
    }
    Poset::new(l, &pairs, false)
}

/// Every normal subgroup visible to the chain theory on `beta`, each given
/// as the normal subposet cutting it out. For each candidate subposet the
/// canonical one-tableau family puts weight on the maximal cells of the
/// staircase complement of its shape; the kernel of that family recovers
/// the subposet, so the collection runs over all normal subposets.
pub fn kernel_subgroup_family(beta: &Composition) -> Result<Vec<Poset>> {
    let l = beta.len();
    let chain = Polytope::chain(beta.clone());
    let mut family = Vec::new();
    for p in enumerate_normal_subposets(l)? {
        let mut entries = Vec::new();
        for i in 1..=l as u32 {
            for j in (i + 1)..=l as u32 {
                if p.less(i, j) {
                    continue;
                }
                let covered_up = i == 1 || p.less(i - 1, j);
                let covered_right = j == l as u32 || p.less(i, j + 1);
                if covered_up && covered_right {
                    entries.push((i, j, 1));
                }
            }
        }
        let marker = chain.tableau(&entries)?;
        family.push(kernel_poset(beta, &[marker])?);
    }
    Ok(family)
}

/// A complete character table: rows are supercharacters, columns are
/// superclasses, both in lattice enumeration order.
#[derive(Clone, Debug)]
pub struct CharTable {
    polytope: Polytope,
    q: u64,
    index: Vec<Tableau>,
    degrees: Vec<Int>,
    class_sizes: Vec<Int>,
    values: Vec<Vec<Int>>,
}

/// All pairwise supercharacter values for one theory, plus degrees and
/// class sizes. The budget bounds the lattice enumeration.
pub fn char_table(poly: &Polytope, q: u64, budget: u64) -> Result<CharTable> {
    require_q(q)?;
    let index = enumerate_lattice_points(poly, budget)?;
    let mut degrees = Vec::with_capacity(index.len());
    let mut class_sizes = Vec::with_capacity(index.len());
    let mut values = Vec::with_capacity(index.len());
    for lam in &index {
        degrees.push(degree(poly, lam, q)?);
        class_sizes.push(superclass_size(poly, lam, q)?);
        let mut row = Vec::with_capacity(index.len());
        for mu in &index {
            row.push(char_value(poly, lam, mu, q)?);
        }
        values.push(row);
    }
    Ok(CharTable {
        polytope: poly.clone(),
        q,
        index,
        degrees,
        class_sizes,
        values,
    })
}

fn csv_field(text: &str) -> String {
    if text.contains(',') || text.contains('"') || text.contains('\n') {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

impl CharTable {
    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Tableaux in enumeration order; rows and columns both follow it.
    pub fn index(&self) -> &[Tableau] {
        &self.index
    }

    pub fn degrees(&self) -> &[Int] {
        &self.degrees
    }

    pub fn class_sizes(&self) -> &[Int] {
        &self.class_sizes
    }

    pub fn values(&self) -> &[Vec<Int>] {
        &self.values
    }

    pub fn position(&self, t: &Tableau) -> Option<usize> {
        self.index.iter().position(|u| u == t)
    }

    /// Canonical inner product of the supercharacters labelled by `nu` and
    /// `mu`: the class-size-weighted sum of products of values over the
    /// group order. Values are integers, so conjugation drops out.
    pub fn inner_product(&self, nu: &Tableau, mu: &Tableau) -> Result<Rat> {
        let a = self
            .position(nu)
            .ok_or_else(|| invalid("nu is not in the table index"))?;
        let b = self
            .position(mu)
            .ok_or_else(|| invalid("mu is not in the table index"))?;
        let mut sum = Int::zero();
        for (m, size) in self.class_sizes.iter().enumerate() {
            sum += size * &self.values[a][m] * &self.values[b][m];
        }
        let cells = support_cells(self.polytope.beta(), self.polytope.poset())?;
        Ok(Rat::from(sum) / Rat::from(int_pow(self.q, cells.len() as u64)))
    }

    /// CSV rendering: the first row carries the superclass labels with their
    /// class sizes, the first column the supercharacter labels with their
    /// degrees, the body the integer values.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let mut header = vec!["lambda\\mu".to_string()];
        for (t, size) in self.index.iter().zip(&self.class_sizes) {
            header.push(csv_field(&format!("{} #{}", t.text(), size)));
        }
        out.push_str(&header.join(","));
        out.push('\n');
        for ((lam, deg), row) in self.index.iter().zip(&self.degrees).zip(&self.values) {
            let mut line = vec![csv_field(&format!("{} #{}", lam.text(), deg))];
            for v in row {
                line.push(v.to_string());
            }
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON rendering with every big integer as a decimal string.
    pub fn to_json(&self) -> String {
        let decimal = |xs: &[Int]| xs.iter().map(Int::to_string).collect::<Vec<_>>();
        let doc = json!({
            "beta": self.polytope.beta().parts(),
            "poset": self.polytope.poset().pairs(),
            "q": self.q,
            "index": self.index.iter().map(Tableau::text).collect::<Vec<_>>(),
            "degrees": decimal(&self.degrees),
            "class_sizes": decimal(&self.class_sizes),
            "values": self.values.iter().map(|row| decimal(row)).collect::<Vec<_>>(),
        });
        serde_json::to_string_pretty(&doc).expect("tables serialize cleanly")
    }
}
