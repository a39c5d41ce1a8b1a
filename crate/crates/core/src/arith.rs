//! Exact arithmetic in the localization Z_(p) and in Q.
//!
//! Everything downstream (tables, spectral sequences, certificates) reduces to
//! unit/valuation tests and exact ring arithmetic, so elements are kept as
//! reduced big-rational fractions with a tracked odd prime. p-adic expansions
//! are never needed.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// p-valuation of a rational number; `Infinite` is the v_p(0) sentinel and
/// orders above every finite value, so minima need no special-casing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// Finite value, or `None` for the infinite sentinel.
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn min(self, other: Valuation) -> Valuation {
        std::cmp::min(self, other)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// Largest e with p^e dividing `n`; `Infinite` for n = 0.
pub fn int_valuation(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut cur = n.abs();
    loop {
        let (q, r) = cur.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        v += 1;
        cur = q;
    }
}

/// v_p(a/b) = v_p(a) - v_p(b) on a reduced fraction.
pub fn rational_valuation(q: &BigRational, p: u64) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinite;
    }
    let num = int_valuation(q.numer(), p).finite().expect("nonzero numerator");
    let den = int_valuation(q.denom(), p).finite().expect("nonzero denominator");
    Valuation::Finite(num - den)
}

/// Trial-division primality check; the primes in play are tiny.
pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn check_odd_prime(p: u64) -> Result<()> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{p} is not an odd prime")))
    }
}

/// Exact element of Z_(p) or Q with a tracked odd prime.
///
/// The fraction is kept reduced with positive denominator (`BigRational`
/// maintains both). Membership in Z_(p) is a queryable predicate rather than
/// an enforced invariant: Chern-character data is genuinely Q-valued.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalScalar {
    value: BigRational,
    prime: u64,
}

impl LocalScalar {
    pub fn new(value: BigRational, prime: u64) -> Result<Self> {
        check_odd_prime(prime)?;
        Ok(LocalScalar { value, prime })
    }

    pub fn from_integer<T: Into<BigInt>>(n: T, prime: u64) -> Result<Self> {
        Self::new(BigRational::from_integer(n.into()), prime)
    }

    pub fn from_ratio<T: Into<BigInt>, U: Into<BigInt>>(num: T, den: U, prime: u64) -> Result<Self> {
        let den: BigInt = den.into();
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Self::new(BigRational::new(num.into(), den), prime)
    }

    pub fn zero(prime: u64) -> Self {
        LocalScalar { value: BigRational::zero(), prime }
    }

    pub fn one(prime: u64) -> Self {
        LocalScalar { value: BigRational::one(), prime }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn numerator(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// True iff the element lies in Z_(p), i.e. p does not divide the
    /// reduced denominator.
    pub fn is_p_local(&self) -> bool {
        !int_valuation(self.value.denom(), self.prime)
            .finite()
            .map(|v| v > 0)
            .unwrap_or(false)
    }

    /// True iff the element is a unit of Z_(p): nonzero with v_p = 0.
    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(0)
    }

    pub fn valuation(&self) -> Valuation {
        rational_valuation(&self.value, self.prime)
    }

    fn assert_same_prime(&self, other: &LocalScalar) {
        assert_eq!(
            self.prime, other.prime,
            "mixed localizations: Z_({}) vs Z_({})",
            self.prime, other.prime
        );
    }

    pub fn checked_div(&self, rhs: &LocalScalar) -> Result<LocalScalar> {
        self.assert_same_prime(rhs);
        if rhs.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(LocalScalar { value: &self.value / &rhs.value, prime: self.prime })
    }
}

impl fmt::Display for LocalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &LocalScalar {
            type Output = LocalScalar;
            fn $method(self, rhs: &LocalScalar) -> LocalScalar {
                self.assert_same_prime(rhs);
                LocalScalar { value: &self.value $op &rhs.value, prime: self.prime }
            }
        }
        impl $trait for LocalScalar {
            type Output = LocalScalar;
            fn $method(self, rhs: LocalScalar) -> LocalScalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl Neg for &LocalScalar {
    type Output = LocalScalar;
    fn neg(self) -> LocalScalar {
        LocalScalar { value: -self.value.clone(), prime: self.prime }
    }
}

impl Neg for LocalScalar {
    type Output = LocalScalar;
    fn neg(self) -> LocalScalar {
        LocalScalar { value: -self.value, prime: self.prime }
    }
}

/// Exact C(n, j). Errors on j > n rather than returning 0: the callers all
/// index binomials inside a window where j > n is a bug.
pub fn binomial(n: u64, j: u64) -> Result<BigInt> {
    if j > n {
        return Err(Error::Domain(format!("binomial({n}, {j}) with j > n")));
    }
    let j = j.min(n - j);
    let mut acc = BigInt::one();
    for i in 0..j {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Ok(acc)
}

/// Complete homogeneous sum h_j(l) = sum over multi-indices I >= 0 with
/// |I| = j of l^I, computed by dynamic programming over the generating
/// function prod_i 1/(1 - l_i t).
pub fn complete_symmetric_sum(l: &[i64], j: usize) -> Result<BigInt> {
    if l.is_empty() {
        return Err(Error::Domain("complete_symmetric_sum on empty tuple".into()));
    }
    // coeffs[m] = h_m of the generators folded in so far
    let mut coeffs = vec![BigInt::zero(); j + 1];
    coeffs[0] = BigInt::one();
    for &li in l {
        let li = BigInt::from(li);
        // 1/(1 - li t) convolution: new[m] = old[m] + li * new[m-1]
        for m in 1..=j {
            let carry = &coeffs[m - 1] * &li;
            coeffs[m] += carry;
        }
    }
    Ok(coeffs.pop().expect("nonempty"))
}

/// p-part of the Adams denominator function: v_p(m(r)) = floor(r / (p-1)).
pub fn adams_m_valuation(r: u64, p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    Ok(r / (p - 1))
}

/// Legendre's formula: v_p(i!) = sum_{t>=1} floor(i / p^t).
pub fn factorial_valuation(i: u64, p: u64) -> u64 {
    let mut total = 0u64;
    let mut q = i / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

/// Odd primes in ascending order within `[lo, hi]`.
pub fn odd_primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(3)..=hi).filter(|&p| is_odd_prime(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ls(num: i64, den: i64, p: u64) -> LocalScalar {
        LocalScalar::from_ratio(num, den, p).unwrap()
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 3).unwrap(), BigInt::from(10));
        assert_eq!(binomial(7, 7).unwrap(), BigInt::one());
        assert_eq!(binomial(9, 4).unwrap(), BigInt::from(126));
        assert!(binomial(3, 4).is_err());
    }

    #[test]
    fn binomial_pascal_recurrence() {
        for n in 1..=64u64 {
            for j in 1..n {
                let lhs = binomial(n, j).unwrap();
                let rhs = binomial(n - 1, j - 1).unwrap() + binomial(n - 1, j).unwrap();
                assert_eq!(lhs, rhs, "Pascal fails at ({n},{j})");
            }
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(ls(10, 1, 5).valuation(), Valuation::Finite(1));
        assert_eq!(ls(1, 6, 5).valuation(), Valuation::Finite(0));
        assert_eq!(LocalScalar::zero(7).valuation(), Valuation::Infinite);
        assert_eq!(ls(1, 25, 5).valuation(), Valuation::Finite(-2));
    }

    #[test]
    fn p_local_membership() {
        assert!(ls(3, 4, 5).is_p_local());
        assert!(!ls(1, 5, 5).is_p_local());
        assert!(LocalScalar::zero(5).is_p_local());
        assert!(ls(5, 3, 5).is_p_local());
        assert!(!ls(7, 25, 5).is_unit());
        assert!(ls(7, 4, 5).is_unit());
    }

    #[test]
    fn valuation_ordering_sentinel() {
        assert!(Valuation::Infinite > Valuation::Finite(i64::MAX));
        assert_eq!(
            Valuation::Infinite.min(Valuation::Finite(-3)),
            Valuation::Finite(-3)
        );
    }

    #[test]
    fn symmetric_sum_examples() {
        assert_eq!(complete_symmetric_sum(&[1, 1], 2).unwrap(), BigInt::from(3));
        assert_eq!(complete_symmetric_sum(&[1, 2], 2).unwrap(), BigInt::from(7));
        assert_eq!(complete_symmetric_sum(&[9, -4, 17], 0).unwrap(), BigInt::one());
        assert!(complete_symmetric_sum(&[], 3).is_err());
    }

    #[test]
    fn symmetric_sum_cancellation() {
        // h_j(1, -1) alternates 1, 0, 1, 0, ...
        for j in 0..8 {
            let expect = if j % 2 == 0 { BigInt::one() } else { BigInt::zero() };
            assert_eq!(complete_symmetric_sum(&[1, -1], j).unwrap(), expect);
        }
    }

    /// Brute-force enumeration of multi-indices, the independent oracle for
    /// the generating-function route.
    fn symmetric_sum_brute(l: &[i64], j: usize) -> BigInt {
        fn rec(l: &[i64], j: usize) -> BigInt {
            if l.len() == 1 {
                return BigInt::from(l[0]).pow(j as u32);
            }
            let mut acc = BigInt::zero();
            for first in 0..=j {
                acc += BigInt::from(l[0]).pow(first as u32) * rec(&l[1..], j - first);
            }
            acc
        }
        rec(l, j)
    }

    #[test]
    fn symmetric_sum_matches_bruteforce() {
        let tuples: Vec<Vec<i64>> = vec![
            vec![1],
            vec![2, 3],
            vec![1, -1],
            vec![1, 2, 3],
            vec![-2, 5, 7],
            vec![1, 1, 1, 1],
            vec![3, -4, 5, -6],
        ];
        for l in &tuples {
            for j in 0..=8 {
                assert_eq!(
                    complete_symmetric_sum(l, j).unwrap(),
                    symmetric_sum_brute(l, j),
                    "mismatch at l={l:?}, j={j}"
                );
            }
        }
    }

    #[test]
    fn adams_valuation_examples() {
        assert_eq!(adams_m_valuation(3, 5).unwrap(), 0);
        assert_eq!(adams_m_valuation(4, 5).unwrap(), 1);
        assert_eq!(adams_m_valuation(0, 11).unwrap(), 0);
        assert!(adams_m_valuation(4, 2).is_err());
    }

    #[test]
    fn adams_vanishing_window() {
        // v_p(m(r)) = 0 exactly when r < p - 1
        for p in [3u64, 5, 7, 11, 13] {
            for r in 0..3 * p {
                let vanish = adams_m_valuation(r, p).unwrap() == 0;
                assert_eq!(vanish, r < p - 1, "window fails at r={r}, p={p}");
            }
        }
    }

    #[test]
    fn factorial_valuation_legendre() {
        assert_eq!(factorial_valuation(4, 5), 0);
        assert_eq!(factorial_valuation(5, 5), 1);
        assert_eq!(factorial_valuation(120, 5), 28);
        // direct product check
        for i in 0..40u64 {
            let mut fact = BigInt::one();
            for t in 1..=i {
                fact *= BigInt::from(t);
            }
            assert_eq!(
                Valuation::Finite(factorial_valuation(i, 3) as i64),
                int_valuation(&fact, 3)
            );
        }
    }

    proptest! {
        #[test]
        fn valuation_multiplicative(a in -400i64..400, b in 1i64..400, c in -400i64..400, d in 1i64..400) {
            prop_assume!(a != 0 && c != 0);
            for p in [3u64, 5, 7] {
                let s = ls(a, b, p);
                let t = ls(c, d, p);
                prop_assert_eq!((&s * &t).valuation(), s.valuation() + t.valuation());
            }
        }

        #[test]
        fn valuation_ultrametric(a in -400i64..400, b in 1i64..400, c in -400i64..400, d in 1i64..400) {
            for p in [3u64, 5, 7] {
                let s = ls(a, b, p);
                let t = ls(c, d, p);
                let sum = &s + &t;
                prop_assert!(sum.valuation() >= s.valuation().min(t.valuation()));
            }
        }

        #[test]
        fn symmetric_sum_recurrence(l0 in -6i64..7, l1 in -6i64..7, l2 in -6i64..7, j in 1usize..7) {
            // h_j(l0,l1,l2) = h_j(l0,l1) + l2 * h_{j-1}(l0,l1,l2)
            let full = complete_symmetric_sum(&[l0, l1, l2], j).unwrap();
            let drop = complete_symmetric_sum(&[l0, l1], j).unwrap();
            let prev = complete_symmetric_sum(&[l0, l1, l2], j - 1).unwrap();
            prop_assert_eq!(full, drop + BigInt::from(l2) * prev);
        }
    }
}
