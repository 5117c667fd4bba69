//! Exact arithmetic: Gaussian binomials, orders of finite general linear
//! groups, and integer combinations of roots of unity.
//!
//! Everything here is exact. Integers are arbitrary precision, ratios are
//! kept in lowest terms with positive denominator, and sums of roots of
//! unity are reduced in the power basis of the cyclotomic integers.

use num::{BigInt, BigRational, Integer, One, Zero};

/// Arbitrary precision integer.
pub type Int = BigInt;
/// Arbitrary precision rational, always in lowest terms.
pub type Rat = BigRational;

/// `q^e` as an exact integer.
pub fn int_pow(q: u64, e: u64) -> Int {
    assert!(e <= u32::MAX as u64, "exponent {e} out of range");
    Int::from(q).pow(e as u32)
}

/// `q^e` as an exact rational, for signed exponents.
pub fn rat_pow(q: u64, e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(int_pow(q, e as u64))
    } else {
        Rat::new(Int::one(), int_pow(q, (-e) as u64))
    }
}

/// The q-integer `[n]_q = 1 + q + ... + q^{n-1}`, which is zero at `n = 0`.
pub fn q_int(n: u64, q: u64) -> Int {
    let mut acc = Int::zero();
    let mut pw = Int::one();
    for _ in 0..n {
        acc += &pw;
        pw *= q;
    }
    acc
}

/// The q-factorial `[n]_q! = [1]_q [2]_q ... [n]_q`.
pub fn q_factorial(n: u64, q: u64) -> Int {
    let mut acc = Int::one();
    for k in 1..=n {
        acc *= q_int(k, q);
    }
    acc
}

/// The Gaussian binomial coefficient `[n choose k]_q`.
///
/// Zero outside `0 <= k <= n`, including every `n < 0`. For prime powers q
/// this counts the k-dimensional subspaces of an n-dimensional space over
/// `F_q`.
pub fn q_binomial(n: i64, k: i64, q: u64) -> Int {
    if n < 0 || k < 0 || k > n {
        return Int::zero();
    }
    let (n, k) = (n as u64, k as u64);
    let num = q_factorial(n, q);
    let den = q_factorial(k, q) * q_factorial(n - k, q);
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero(), "q-binomial division must be exact");
    quot
}

/// The order of `GL_n(F_q)`, the empty product 1 at `n = 0`.
pub fn gl_order(n: u64, q: u64) -> Int {
    let qn = int_pow(q, n);
    let mut acc = Int::one();
    let mut qi = Int::one();
    for _ in 0..n {
        acc *= &qn - &qi;
        qi *= q;
    }
    acc
}

/// Inversion generating function `sum_{w in S_n} q^{inv(w)}`.
///
/// Brute force over all n! permutations; this is a test oracle for the
/// q-factorial and is capped accordingly.
pub fn inv_generating_function(n: u64, q: u64) -> Int {
    assert!(n <= 8, "oracle cap exceeded: n = {n}");
    let n = n as usize;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = Int::zero();
    permute(&mut perm, 0, &mut |w| {
        let mut inv = 0u64;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    inv += 1;
                }
            }
        }
        acc += int_pow(q, inv);
    });
    if n == 0 {
        acc = Int::one();
    }
    acc
}

fn permute(v: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, visit);
        v.swap(k, i);
    }
}

/// An integer combination of p-th roots of unity for a prime p, kept in the
/// power basis `1, z, ..., z^{p-2}` of the cyclotomic integers, where z is a
/// primitive p-th root and `z^{p-1} = -(1 + z + ... + z^{p-2})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicInt {
    p: u64,
    coeffs: Vec<Int>,
}

impl CyclotomicInt {
    /// The zero element of `Z[z_p]`.
    pub fn zero(p: u64) -> Self {
        assert!(p >= 2, "order must be at least 2");
        CyclotomicInt {
            p,
            coeffs: vec![Int::zero(); (p - 1) as usize],
        }
    }

    /// `z^t`, reduced into the power basis.
    pub fn root_power(p: u64, t: u64) -> Self {
        let mut out = Self::zero(p);
        let t = (t % p) as usize;
        if t < (p - 1) as usize {
            out.coeffs[t] = Int::one();
        } else {
            for c in out.coeffs.iter_mut() {
                *c = -Int::one();
            }
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add_assign(&mut self, other: &CyclotomicInt) {
        assert_eq!(self.p, other.p, "mixed root orders");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn scale(&mut self, by: &Int) {
        for c in self.coeffs.iter_mut() {
            *c *= by;
        }
    }

    /// Multiply by z once.
    pub fn mul_root(&mut self) {
        let top = self.coeffs.pop().expect("nonempty basis");
        for c in self.coeffs.iter_mut() {
            *c -= &top;
        }
        self.coeffs.insert(0, -top);
    }

    /// The element as a rational integer, if it is one.
    pub fn to_int(&self) -> Option<Int> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }
}

/// Reduce weighted root-of-unity counts to a rational integer.
///
/// `counts[t]` is the multiplicity of `z^t` in a sum over a group algebra;
/// the sum lies in `Z` exactly when all multiplicities for t >= 1 agree,
/// and then equals `counts[0] - counts[1]`.
pub fn root_sum_to_int(p: u64, counts: &[Int]) -> Option<Int> {
    assert_eq!(counts.len() as u64, p, "one count per residue");
    let mut acc = CyclotomicInt::zero(p);
    for (t, c) in counts.iter().enumerate() {
        let mut term = CyclotomicInt::root_power(p, t as u64);
        term.scale(c);
        acc.add_assign(&term);
    }
    acc.to_int()
}

/// True when the rational is an integer.
pub fn is_integral(r: &Rat) -> bool {
    r.denom().is_one()
}

/// The rational as an integer; panics when it is not one.
pub fn to_int(r: &Rat) -> Int {
    assert!(is_integral(r), "expected an integer, got {r}");
    r.numer().clone()
}

/// Binomial coefficient `C(n, 2)` as a u64 exponent.
pub fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_int_small_values() {
        assert_eq!(q_int(0, 2), Int::zero());
        assert_eq!(q_int(1, 7), Int::one());
        assert_eq!(q_int(3, 2), Int::from(7));
        assert_eq!(q_int(3, 3), Int::from(13));
    }

    #[test]
    fn q_factorial_small_values() {
        assert_eq!(q_factorial(0, 2), Int::one());
        assert_eq!(q_factorial(3, 2), Int::from(21));
    }

    #[test]
    fn q_binomial_counts_lines_in_the_plane() {
        // Lines through the origin of F_q^2: enumerate nonzero vectors up to
        // scale. For q = 2 the three lines are the spans of (1,0), (0,1), (1,1).
        assert_eq!(q_binomial(2, 1, 2), Int::from(3));
        assert_eq!(q_binomial(2, 1, 3), Int::from(4));
        assert_eq!(q_binomial(4, 2, 2), Int::from(35));
    }

    #[test]
    fn q_binomial_vanishes_outside_range() {
        assert_eq!(q_binomial(3, -1, 2), Int::zero());
        assert_eq!(q_binomial(3, 5, 2), Int::zero());
        assert_eq!(q_binomial(-2, 0, 2), Int::zero());
        assert_eq!(q_binomial(-1, -1, 2), Int::zero());
        assert_eq!(q_binomial(0, 0, 2), Int::one());
    }

    #[test]
    fn q_binomial_subset_weight_identity() {
        // [n choose k]_q = sum over k-subsets {a_1 < ... < a_k} of {1..n}
        // of q^{(a_1-1) + (a_2-2) + ... + (a_k-k)}.
        for n in 0..=8i64 {
            for k in 0..=n {
                for q in [2u64, 3] {
                    let mut acc = Int::zero();
                    for mask in 0u32..(1 << n) {
                        if mask.count_ones() as i64 != k {
                            continue;
                        }
                        let mut wt = 0u64;
                        let mut seen = 0u64;
                        for a in 0..n as u32 {
                            if mask & (1 << a) != 0 {
                                seen += 1;
                                wt += a as u64 + 1 - seen;
                            }
                        }
                        acc += int_pow(q, wt);
                    }
                    assert_eq!(acc, q_binomial(n, k, q), "n={n} k={k} q={q}");
                }
            }
        }
    }

    #[test]
    fn gl_order_matches_brute_force_for_two_by_two() {
        // Count invertible 2x2 matrices over F_2 and F_3 by nonzero determinant.
        for q in [2u64, 3] {
            let mut count = 0u64;
            for a in 0..q {
                for b in 0..q {
                    for c in 0..q {
                        for d in 0..q {
                            let det = (a * d % q + q - b * c % q) % q;
                            if det != 0 {
                                count += 1;
                            }
                        }
                    }
                }
            }
            assert_eq!(Int::from(count), gl_order(2, q), "q={q}");
        }
        assert_eq!(gl_order(2, 2), Int::from(6));
        assert_eq!(gl_order(0, 5), Int::one());
    }

    #[test]
    fn gl_order_factors_through_q_factorial() {
        // |GL_n(F_q)| = (q-1)^n q^{C(n,2)} [n]_q!
        for n in 0..=5u64 {
            for q in [2u64, 3] {
                let expect = Int::from(q - 1).pow(n as u32)
                    * int_pow(q, choose2(n))
                    * q_factorial(n, q);
                assert_eq!(gl_order(n, q), expect, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn inversions_generate_the_q_factorial() {
        for n in 0..=6u64 {
            for q in [2u64, 3] {
                assert_eq!(inv_generating_function(n, q), q_factorial(n, q));
            }
        }
    }

    #[test]
    fn inversion_palindromy() {
        // sum_w q^{-inv(w)} = q^{-C(n,2)} [n]_q!; equivalently the inversion
        // statistic is symmetric about C(n,2)/2.
        for n in 0..=5u64 {
            for q in [2u64, 3] {
                let lhs = {
                    let mut perm: Vec<usize> = (0..n as usize).collect();
                    let mut acc = Rat::zero();
                    let mut visit = |w: &[usize]| {
                        let mut inv = 0i64;
                        for i in 0..w.len() {
                            for j in i + 1..w.len() {
                                if w[i] > w[j] {
                                    inv += 1;
                                }
                            }
                        }
                        acc += rat_pow(q, -inv);
                    };
                    if n == 0 {
                        Rat::one()
                    } else {
                        permute(&mut perm, 0, &mut visit);
                        acc
                    }
                };
                let rhs = rat_pow(q, -(choose2(n) as i64))
                    * Rat::from_integer(q_factorial(n, q));
                assert_eq!(lhs, rhs, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn root_powers_cycle_and_sum_to_zero() {
        for p in [2u64, 3, 5] {
            // z^p = 1 by repeated multiplication.
            let mut x = CyclotomicInt::root_power(p, 0);
            for _ in 0..p {
                x.mul_root();
            }
            assert_eq!(x, CyclotomicInt::root_power(p, 0), "p={p}");
            // 1 + z + ... + z^{p-1} = 0.
            let mut acc = CyclotomicInt::zero(p);
            for t in 0..p {
                acc.add_assign(&CyclotomicInt::root_power(p, t));
            }
            assert!(acc.is_zero(), "p={p}");
            // z^t as an integer only for p = 2 or t = 0.
            assert_eq!(CyclotomicInt::root_power(p, 0).to_int(), Some(Int::one()));
        }
        assert_eq!(
            CyclotomicInt::root_power(2, 1).to_int(),
            Some(-Int::one())
        );
        assert_eq!(CyclotomicInt::root_power(3, 1).to_int(), None);
    }

    #[test]
    fn root_sum_reduction() {
        // Equal counts on every residue sum to zero.
        for p in [2u64, 3, 5] {
            let counts: Vec<Int> = (0..p).map(|_| Int::from(4)).collect();
            assert_eq!(root_sum_to_int(p, &counts), Some(Int::zero()));
        }
        // c_0 = 5, others 2: integer 5 - 2 = 3.
        let counts: Vec<Int> = vec![Int::from(5), Int::from(2), Int::from(2)];
        assert_eq!(root_sum_to_int(3, &counts), Some(Int::from(3)));
        // Unequal nonconstant tail is not an integer.
        let counts: Vec<Int> = vec![Int::from(5), Int::from(2), Int::from(1)];
        assert_eq!(root_sum_to_int(3, &counts), None);
    }

    #[test]
    fn rational_helpers() {
        assert!(is_integral(&Rat::from_integer(Int::from(9))));
        assert!(!is_integral(&Rat::new(Int::from(1), Int::from(2))));
        assert_eq!(to_int(&rat_pow(2, 5)), Int::from(32));
        assert_eq!(rat_pow(2, -2), Rat::new(Int::one(), Int::from(4)));
    }
}
