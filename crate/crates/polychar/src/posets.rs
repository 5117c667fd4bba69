//! Compositions, normal subposets of a chain, and the bijections that
//! classify them.
//!
//! A subposet here is a strict partial order on `{1, ..., l}` that refines
//! the natural chain order (`i` below `j` forces `i < j`). The normal ones
//! are exactly those whose relation set, drawn as cells `(i, j)` with
//! `i` below `j`, forms a right-justified Ferrers shape inside the staircase;
//! equivalently, the relation set is an upper set in the strict interval
//! poset of the chain. Normal subposets of an l-chain are counted by the
//! Catalan number `C_l` and correspond to Dyck words with `l` up-steps and
//! `l` down-steps.
//!
//! All element and block indices in this module are 1-based.

use crate::{invalid, Result};
use std::fmt;

/// A composition: an ordered list of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(invalid("composition must have at least one part"));
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(invalid("composition parts must be positive"));
        }
        Ok(Composition { parts })
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sum of the parts.
    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The j-th part, 1-based.
    pub fn part(&self, j: usize) -> u32 {
        self.parts[j - 1]
    }

    /// Inclusive range `(first, last)` of 1-based row/column indices covered
    /// by block `j`.
    pub fn block_range(&self, j: usize) -> (u32, u32) {
        let before: u32 = self.parts[..j - 1].iter().sum();
        (before + 1, before + self.parts[j - 1])
    }

    /// Block containing the 1-based matrix index `a`.
    pub fn block_of(&self, a: u32) -> usize {
        assert!(a >= 1 && a <= self.total(), "index {a} out of range");
        let mut acc = 0;
        for (j, &p) in self.parts.iter().enumerate() {
            acc += p;
            if a <= acc {
                return j + 1;
            }
        }
        unreachable!()
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", text.join(","))
    }
}

/// A strict partial order on `{1, ..., l}` refining the chain order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poset {
    n: usize,
    rel: Vec<bool>,
}

impl Poset {
    /// Build from a list of strict relations `i` below `j`.
    ///
    /// Every pair must satisfy `1 <= i < j <= l`. With `close` set the
    /// relation is closed transitively; otherwise a missing composite is an
    /// error.
    pub fn new(l: usize, pairs: &[(u32, u32)], close: bool) -> Result<Self> {
        let mut p = Poset {
            n: l,
            rel: vec![false; l * l],
        };
        for &(i, j) in pairs {
            if i == 0 || j == 0 || i as usize > l || j as usize > l {
                return Err(invalid(format!(
                    "relation ({i},{j}) out of range for {l} elements"
                )));
            }
            if i >= j {
                return Err(invalid(format!(
                    "relation ({i},{j}) does not refine the chain order"
                )));
            }
            p.rel[(i as usize - 1) * l + (j as usize - 1)] = true;
        }
        if close {
            p.close_transitively();
        } else if let Some((i, j, k)) = p.transitivity_gap() {
            return Err(invalid(format!(
                "relation is not transitive: {i}<{j} and {j}<{k} but ({i},{k}) is missing"
            )));
        }
        Ok(p)
    }

    /// The chain itself: every `i < j` related.
    pub fn chain(l: usize) -> Self {
        let mut rel = vec![false; l * l];
        for i in 0..l {
            for j in i + 1..l {
                rel[i * l + j] = true;
            }
        }
        Poset { n: l, rel }
    }

    /// The poset with the empty relation.
    pub fn antichain(l: usize) -> Self {
        Poset {
            n: l,
            rel: vec![false; l * l],
        }
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Strict comparison, 1-based.
    pub fn less(&self, i: u32, j: u32) -> bool {
        assert!(
            i >= 1 && j >= 1 && i as usize <= self.n && j as usize <= self.n,
            "element out of range"
        );
        self.rel[(i as usize - 1) * self.n + (j as usize - 1)]
    }

    /// All strict relations as sorted pairs.
    pub fn pairs(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for i in 1..=self.n as u32 {
            for j in i + 1..=self.n as u32 {
                if self.less(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_chain(&self) -> bool {
        (1..=self.n as u32).all(|i| (i + 1..=self.n as u32).all(|j| self.less(i, j)))
    }

    fn close_transitively(&mut self) {
        let n = self.n;
        for k in 0..n {
            for i in 0..n {
                if self.rel[i * n + k] {
                    for j in 0..n {
                        if self.rel[k * n + j] {
                            self.rel[i * n + j] = true;
                        }
                    }
                }
            }
        }
    }

    fn transitivity_gap(&self) -> Option<(u32, u32, u32)> {
        for i in 1..=self.n as u32 {
            for j in i + 1..=self.n as u32 {
                if !self.less(i, j) {
                    continue;
                }
                for k in j + 1..=self.n as u32 {
                    if self.less(j, k) && !self.less(i, k) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// True when the relation set is closed under widening intervals: if
    /// `i` is below `j` then so is every `i' <= i` below every `j' >= j`.
    pub fn is_normal(&self) -> bool {
        for (i, j) in self.pairs() {
            if i > 1 && !self.less(i - 1, j) {
                return false;
            }
            if (j as usize) < self.n && !self.less(i, j + 1) {
                return false;
            }
        }
        true
    }

    /// Row lengths of the Ferrers shape of a normal subposet: entry `i` is
    /// the number of elements above `i`.
    pub fn ferrers(&self) -> Result<Vec<u32>> {
        if !self.is_normal() {
            return Err(invalid("poset is not normal: no Ferrers shape"));
        }
        Ok((1..=self.n as u32)
            .map(|i| (i + 1..=self.n as u32).filter(|&j| self.less(i, j)).count() as u32)
            .collect())
    }

    /// Rebuild a normal subposet from Ferrers row lengths. Row `i` of the
    /// shape is right-justified: `i` is below the last `rows[i]` elements.
    pub fn from_ferrers(rows: &[u32]) -> Result<Self> {
        let l = rows.len();
        for i in 0..l {
            if rows[i] as usize > l - i - 1 {
                return Err(invalid(format!(
                    "row {} has length {} exceeding the staircase bound {}",
                    i + 1,
                    rows[i],
                    l - i - 1
                )));
            }
            if i > 0 && rows[i] > rows[i - 1] {
                return Err(invalid("row lengths must be weakly decreasing"));
            }
        }
        let mut rel = vec![false; l * l];
        for (i, &r) in rows.iter().enumerate() {
            for j in l - r as usize..l {
                rel[i * l + j] = true;
            }
        }
        let p = Poset { n: l, rel };
        debug_assert!(p.is_normal());
        Ok(p)
    }

    /// The Dyck word of a normal subposet: a string over `U`/`D` with one
    /// up-step and one down-step per element, the i-th down-step placed after
    /// `l - rows[i]` up-steps. The antichain maps to `U...UD...D`.
    pub fn dyck(&self) -> Result<String> {
        let rows = self.ferrers()?;
        let l = self.n;
        let mut word = String::with_capacity(2 * l);
        let mut ups = 0;
        for &r in &rows {
            let need = l - r as usize;
            for _ in ups..need {
                word.push('U');
            }
            ups = ups.max(need);
            word.push('D');
        }
        for _ in ups..l {
            word.push('U');
        }
        Ok(word)
    }

    /// Rebuild a normal subposet from its Dyck word.
    pub fn from_dyck(word: &str) -> Result<Self> {
        let mut ups = 0usize;
        let mut downs = 0usize;
        let mut rows = Vec::new();
        let l = word.len() / 2;
        if word.len() % 2 != 0 {
            return Err(invalid("Dyck word must have even length"));
        }
        for c in word.chars() {
            match c {
                'U' => ups += 1,
                'D' => {
                    downs += 1;
                    if downs > ups {
                        return Err(invalid(
                            "Dyck word dips below the diagonal: more down-steps than up-steps",
                        ));
                    }
                    rows.push((l - ups) as u32);
                }
                other => return Err(invalid(format!("unexpected step '{other}'"))),
            }
        }
        if ups != downs {
            return Err(invalid(format!(
                "Dyck word must balance: {ups} up-steps, {downs} down-steps"
            )));
        }
        Self::from_ferrers(&rows)
    }
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs = self.pairs();
        if pairs.is_empty() {
            return write!(f, "{{}}");
        }
        let text: Vec<String> = pairs.iter().map(|(i, j)| format!("{i}<{j}")).collect();
        write!(f, "{{{}}}", text.join(","))
    }
}

/// Cap on the chain length for exhaustive normal subposet enumeration.
pub const NORMAL_ENUM_CAP: usize = 10;

/// All normal subposets of the l-chain, in lexicographic order of their
/// Ferrers row-length vectors. There are Catalan-many.
pub fn enumerate_normal_subposets(l: usize) -> Result<Vec<Poset>> {
    if l > NORMAL_ENUM_CAP {
        return Err(invalid(format!(
            "chain length {l} exceeds the enumeration cap {NORMAL_ENUM_CAP}"
        )));
    }
    let mut out = Vec::new();
    let mut rows: Vec<u32> = Vec::with_capacity(l);
    fn rec(l: usize, rows: &mut Vec<u32>, out: &mut Vec<Poset>) {
        if rows.len() == l {
            out.push(Poset::from_ferrers(rows).expect("shape within bounds"));
            return;
        }
        let i = rows.len();
        let cap = (l - i - 1).min(rows.last().copied().unwrap_or(u32::MAX as usize as u32) as usize);
        for r in 0..=cap as u32 {
            rows.push(r);
            rec(l, rows, out);
            rows.pop();
        }
    }
    rec(l, &mut rows, &mut out);
    Ok(out)
}

/// The strict interval poset of a poset `P`: elements are the strict
/// relations `(i, j)` of `P`, and `(j, k) <= (i, l)` exactly when `i` is
/// weakly below `j` and `k` weakly below `l` in `P`.
#[derive(Clone, Debug)]
pub struct IntervalPoset {
    elements: Vec<(u32, u32)>,
    rel: Vec<bool>,
}

impl IntervalPoset {
    pub fn elements(&self) -> &[(u32, u32)] {
        &self.elements
    }

    /// Weak comparison by position in `elements`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.rel[a * self.elements.len() + b]
    }

    /// Position of an interval, if present.
    pub fn index_of(&self, e: (u32, u32)) -> Option<usize> {
        self.elements.iter().position(|&x| x == e)
    }
}

/// Build the strict interval poset of `p`.
pub fn strict_interval_poset(p: &Poset) -> IntervalPoset {
    let elements = p.pairs();
    let m = elements.len();
    let mut rel = vec![false; m * m];
    let weakly = |a: u32, b: u32| a == b || p.less(a, b);
    for (a, &(j, k)) in elements.iter().enumerate() {
        for (b, &(i, l)) in elements.iter().enumerate() {
            if weakly(i, j) && weakly(k, l) {
                rel[a * m + b] = true;
            }
        }
    }
    IntervalPoset { elements, rel }
}

/// The parabolic poset of a composition: `a` below `b` on `{1, ..., N}`
/// exactly when `a`'s block strictly precedes `b`'s block.
pub fn bdry_inverse(beta: &Composition) -> Poset {
    let n = beta.total() as usize;
    let mut rel = vec![false; n * n];
    for a in 1..=n as u32 {
        for b in a + 1..=n as u32 {
            if beta.block_of(a) < beta.block_of(b) {
                rel[(a as usize - 1) * n + (b as usize - 1)] = true;
            }
        }
    }
    Poset { n, rel }
}

/// Recover the composition whose parabolic poset is `p`, if there is one.
pub fn bdry(p: &Poset) -> Result<Composition> {
    let n = p.len();
    if n == 0 {
        return Err(invalid("empty poset has no block composition"));
    }
    // Blocks are maximal runs of consecutive elements with no relation
    // between neighbours.
    let mut parts = Vec::new();
    let mut current = 1u32;
    for a in 1..n as u32 {
        if p.less(a, a + 1) {
            parts.push(current);
            current = 1;
        } else {
            current += 1;
        }
    }
    parts.push(current);
    let beta = Composition::new(parts)?;
    let candidate = bdry_inverse(&beta);
    if &candidate == p {
        Ok(beta)
    } else {
        Err(invalid("poset is not parabolic: not of block form"))
    }
}

/// Refine a poset on blocks to the matrix scale: `a` below `b` on
/// `{1, ..., N}` exactly when `a`'s block is below `b`'s block in `p`.
pub fn fat(beta: &Composition, p: &Poset) -> Result<Poset> {
    if p.len() != beta.len() {
        return Err(invalid(format!(
            "poset on {} elements does not match composition with {} parts",
            p.len(),
            beta.len()
        )));
    }
    let n = beta.total() as usize;
    let mut rel = vec![false; n * n];
    for a in 1..=n as u32 {
        for b in 1..=n as u32 {
            let (ba, bb) = (beta.block_of(a) as u32, beta.block_of(b) as u32);
            if ba < bb && p.less(ba, bb) {
                rel[(a as usize - 1) * n + (b as usize - 1)] = true;
            }
        }
    }
    Ok(Poset { n, rel })
}

/// Matrix cells `(r, c)` supported by the pattern group of `(beta, p)`:
/// those whose row block is strictly below the column block in `p`.
/// Sorted by row, then column.
pub fn support_cells(beta: &Composition, p: &Poset) -> Result<Vec<(u32, u32)>> {
    let refined = fat(beta, p)?;
    Ok(refined.pairs())
}
