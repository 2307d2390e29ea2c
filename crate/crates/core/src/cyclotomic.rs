//! Exact arithmetic in cyclotomic fields `Q(E(n))`, `E(n) = exp(2 pi i / n)`.
//!
//! Values are kept in the Zumbroich basis of their minimal conductor, so two
//! values are equal exactly when their term lists are equal. For each prime
//! power `q = p^e` exactly dividing `n`, an exponent `k` decomposes into a
//! `q`-component whose top base-`p` digit selects a power of `E(p)`. The basis
//! keeps digits `1..p-1` for odd `p` and digit `0` for `p = 2`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::integer::{gcd, lcm};
use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    conductor: u32,
    /// `(exponent, coefficient)`, exponents ascending, coefficients nonzero.
    terms: Vec<(u32, BigRational)>,
}

/// Prime powers `(p, e)` with `p^e` exactly dividing `n`.
fn factor(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i64 % m as i64, m as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i64) as u64
}

/// Digit structure of exponents modulo `n` for one prime power.
struct PrimeDigit {
    p: u32,
    /// `(n / q)^-1 mod q`
    inv: u64,
    q: u64,
    /// `p^(e-1)`
    low: u64,
}

impl PrimeDigit {
    fn new(n: u32, p: u32, e: u32) -> Self {
        let q = (p as u64).pow(e);
        let inv = mod_inverse((n as u64 / q) % q, q);
        PrimeDigit { p, inv, q, low: q / p as u64 }
    }

    fn digit(&self, k: u32) -> u32 {
        let c = (k as u64 % self.q) * self.inv % self.q;
        (c / self.low) as u32
    }

    fn is_basis(&self, k: u32) -> bool {
        let j = self.digit(k);
        if self.p == 2 {
            j == 0
        } else {
            j != 0
        }
    }
}

/// Rewrites a dense coefficient vector of length `n` into the Zumbroich basis of `Q(E(n))`.
fn reduce_to_basis(n: u32, dense: &mut [BigRational]) {
    for (p, e) in factor(n) {
        let d = PrimeDigit::new(n, p, e);
        let step = n / p;
        for k in 0..n {
            if dense[k as usize].is_zero() || d.is_basis(k) {
                continue;
            }
            let a = std::mem::replace(&mut dense[k as usize], BigRational::zero());
            if p == 2 {
                let t = ((k + step) % n) as usize;
                dense[t] -= a;
            } else {
                for t in 1..p {
                    let idx = ((k + t * step) % n) as usize;
                    dense[idx] -= &a;
                }
            }
        }
    }
}

/// Basis exponents of `Q(E(n))`, ascending.
pub fn zumbroich_basis(n: u32) -> Vec<u32> {
    let digits: Vec<_> = factor(n).into_iter().map(|(p, e)| PrimeDigit::new(n, p, e)).collect();
    (0..n).filter(|&k| digits.iter().all(|d| d.is_basis(k))).collect()
}

/// Euler's totient.
pub fn phi(n: u32) -> u32 {
    factor(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { conductor: 1, terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        if r.is_zero() {
            Self::zero()
        } else {
            Cyclotomic { conductor: 1, terms: vec![(0, r)] }
        }
    }

    pub fn from_int(i: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(i)))
    }

    /// `E(n)^k`.
    pub fn root_of_unity(n: u32, k: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroConductor);
        }
        let k = k.rem_euclid(n as i64) as u32;
        let mut dense = vec![BigRational::zero(); n as usize];
        dense[k as usize] = BigRational::one();
        Ok(Self::from_dense(n, dense))
    }

    /// Normalizes a dense coefficient vector over `E(n)^0 .. E(n)^(n-1)`.
    pub fn from_dense(n: u32, mut dense: Vec<BigRational>) -> Self {
        debug_assert_eq!(dense.len(), n as usize);
        reduce_to_basis(n, &mut dense);
        let (n, dense) = reduce_conductor(n, dense);
        let terms = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as u32, c))
            .collect();
        Cyclotomic { conductor: n, terms }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn terms(&self) -> &[(u32, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Dense coefficients over `E(m)^k`; `m` must be a multiple of the conductor.
    pub fn to_dense(&self, m: u32) -> Vec<BigRational> {
        debug_assert_eq!(m % self.conductor, 0);
        let scale = m / self.conductor;
        let mut dense = vec![BigRational::zero(); m as usize];
        for (k, c) in &self.terms {
            dense[(k * scale) as usize] += c;
        }
        dense
    }

    /// Coordinates in the Zumbroich basis of `Q(E(m))`, in the order of [`zumbroich_basis`].
    /// `m` must be a multiple of the conductor. Algebraic integers have integral coordinates.
    pub fn basis_coordinates(&self, m: u32) -> Vec<BigRational> {
        let mut dense = self.to_dense(m);
        reduce_to_basis(m, &mut dense);
        zumbroich_basis(m).into_iter().map(|k| dense[k as usize].clone()).collect()
    }

    /// Inverse of [`Cyclotomic::basis_coordinates`].
    pub fn from_basis_coordinates(m: u32, coords: &[BigRational]) -> Self {
        let mut dense = vec![BigRational::zero(); m as usize];
        for (k, c) in zumbroich_basis(m).into_iter().zip(coords) {
            dense[k as usize] = c.clone();
        }
        Cyclotomic::from_dense(m, dense)
    }

    pub fn try_rational(&self) -> Option<BigRational> {
        match (self.conductor, self.terms.as_slice()) {
            (1, []) => Some(BigRational::zero()),
            (1, [(_, c)]) => Some(c.clone()),
            _ => None,
        }
    }

    /// The Galois automorphism `E(n) -> E(n)^a`; `a` must be coprime to the conductor.
    pub fn galois(&self, a: i64) -> Self {
        let n = self.conductor;
        if n == 1 {
            return self.clone();
        }
        let a = a.rem_euclid(n as i64) as u64;
        debug_assert_eq!(gcd(a, n as u64), 1);
        let mut dense = vec![BigRational::zero(); n as usize];
        for (k, c) in &self.terms {
            dense[(*k as u64 * a % n as u64) as usize] += c;
        }
        Self::from_dense(n, dense)
    }

    /// Complex conjugate, `E(n) -> E(n)^-1`.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            conductor: self.conductor,
            terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect(),
        }
    }

    pub fn div_rational(&self, r: &BigRational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.scale(&r.recip()))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn combine(&self, other: &Self, sign: i32) -> Self {
        let n = lcm(self.conductor, other.conductor);
        let mut dense = self.to_dense(n);
        let s = n / other.conductor;
        for (k, c) in &other.terms {
            let idx = (k * s) as usize;
            if sign > 0 {
                dense[idx] += c;
            } else {
                dense[idx] -= c;
            }
        }
        Self::from_dense(n, dense)
    }

    /// Canonical text form, `c1*E(n)^k1 + c2*E(n)^k2 + ...`; rationals print as `p/q`.
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

/// Lowers the conductor while the value lies in a proper subfield.
fn reduce_conductor(mut n: u32, mut dense: Vec<BigRational>) -> (u32, Vec<BigRational>) {
    'outer: loop {
        if n == 1 {
            return (n, dense);
        }
        for (p, e) in factor(n) {
            if e >= 2 || p == 2 {
                // subfield Q(E(n/p)) is spanned by basis exponents divisible by p
                if dense.iter().enumerate().all(|(k, c)| c.is_zero() || k as u32 % p == 0) {
                    let m = n / p;
                    let mut next = vec![BigRational::zero(); m as usize];
                    for (k, c) in dense.into_iter().enumerate() {
                        if !c.is_zero() {
                            next[k / p as usize] = c;
                        }
                    }
                    reduce_to_basis(m, &mut next);
                    n = m;
                    dense = next;
                    continue 'outer;
                }
            } else {
                // p exactly divides n: coefficients must be constant on each fibre
                // k0 + t*n/p, t = 1..p-1, with k0 divisible by p
                let step = n / p;
                let constant = (0..n).step_by(p as usize).all(|k0| {
                    let first = &dense[((k0 + step) % n) as usize];
                    (2..p).all(|t| &dense[((k0 + t * step) % n) as usize] == first)
                });
                if constant {
                    let m = n / p;
                    let mut next = vec![BigRational::zero(); m as usize];
                    for k0 in (0..n).step_by(p as usize) {
                        let a = &dense[((k0 + step) % n) as usize];
                        if !a.is_zero() {
                            next[(k0 / p) as usize] -= a;
                        }
                    }
                    reduce_to_basis(m, &mut next);
                    n = m;
                    dense = next;
                    continue 'outer;
                }
            }
        }
        return (n, dense);
    }
}

/// Sum of many terms at a fixed conductor, normalized once at the end.
pub struct DenseAccumulator {
    n: u32,
    dense: Vec<BigRational>,
}

impl DenseAccumulator {
    pub fn new(n: u32) -> Self {
        DenseAccumulator { n, dense: vec![BigRational::zero(); n as usize] }
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Adds `c * E(n)^k`.
    pub fn add_term(&mut self, k: u64, c: &BigRational) {
        let idx = (k % self.n as u64) as usize;
        self.dense[idx] += c;
    }

    /// Adds `r * E(n)^shift * z`; the conductor of `z` must divide `n`.
    pub fn add_scaled(&mut self, z: &Cyclotomic, r: &BigRational, shift: u64) {
        let s = self.n / z.conductor;
        for (k, c) in &z.terms {
            let idx = ((*k as u64 * s as u64 + shift) % self.n as u64) as usize;
            self.dense[idx] += c * r;
        }
    }

    pub fn finish(self) -> Cyclotomic {
        Cyclotomic::from_dense(self.n, self.dense)
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        self.combine(rhs, 1)
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        if rhs.is_zero() {
            return self.clone();
        }
        self.combine(rhs, -1)
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        if self.is_zero() || rhs.is_zero() {
            return Cyclotomic::zero();
        }
        if let Some(r) = self.try_rational() {
            return rhs.scale(&r);
        }
        if let Some(r) = rhs.try_rational() {
            return self.scale(&r);
        }
        let n = lcm(self.conductor, rhs.conductor);
        let (sa, sb) = (n / self.conductor, n / rhs.conductor);
        let mut dense = vec![BigRational::zero(); n as usize];
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let idx = ((ka * sa + kb * sb) % n) as usize;
                dense[idx] += ca * cb;
            }
        }
        Cyclotomic::from_dense(n, dense)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.try_rational() {
            return write!(f, "{r}");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*E({})^{k}", self.conductor)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q = BigInt::from_str(q).ok()?;
            if q.is_zero() || q.is_negative() {
                return None;
            }
            Some(BigRational::new(BigInt::from_str(p).ok()?, q))
        }
        None => Some(BigRational::from_integer(BigInt::from_str(s).ok()?)),
    }
}

impl FromStr for Cyclotomic {
    type Err = Error;

    /// Parses sums of `c*E(n)^k` terms and rationals; the result is normalized.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::CyclotomicParse(s.to_string());
        let mut acc = Cyclotomic::zero();
        for term in s.split(" + ") {
            let term = term.trim();
            let value = match term.split_once("*E(") {
                Some((c, rest)) => {
                    let c = parse_rational(c).ok_or_else(bad)?;
                    let (n, k) = rest.split_once(")^").ok_or_else(bad)?;
                    let n: u32 = n.parse().map_err(|_| bad())?;
                    let k: i64 = k.parse().map_err(|_| bad())?;
                    Cyclotomic::root_of_unity(n, k)?.scale(&c)
                }
                None => Cyclotomic::from_rational(parse_rational(term).ok_or_else(bad)?),
            };
            acc = &acc + &value;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k).unwrap()
    }

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(e(1, 0), Cyclotomic::one());
        assert_eq!(e(2, 1), Cyclotomic::from_int(-1));
        assert_eq!(&e(3, 1) + &e(3, 2), Cyclotomic::from_int(-1));
        assert!(matches!(Cyclotomic::root_of_unity(0, 0), Err(Error::ZeroConductor)));
        for n in 1..40 {
            assert_eq!(e(n, 1).pow(n), Cyclotomic::one(), "n = {n}");
        }
    }

    #[test]
    fn golden_ratio() {
        let z = &e(5, 1) + &e(5, 4);
        let lhs = &(&(&z * &z) + &z) - &Cyclotomic::one();
        assert!(lhs.is_zero());
        assert_eq!(z.conductor(), 5);
    }

    #[test]
    fn zeta8_norm_expansion() {
        // (2 + E(8)) (2 + E(8)^7) = 5 + 2 (E(8) + E(8)^7) = 5 + 2 sqrt 2
        let z = &Cyclotomic::from_int(2) + &e(8, 1);
        let n = &z * &z.conjugate();
        let sqrt2 = &e(8, 1) + &e(8, 7);
        assert_eq!(n, &Cyclotomic::from_int(5) + &sqrt2.scale(&q(2, 1)));
        assert_eq!(n.conjugate(), n);
        assert_eq!(&sqrt2 * &sqrt2, Cyclotomic::from_int(2));
    }

    #[test]
    fn try_rational_cases() {
        assert_eq!((&e(3, 1) + &e(3, 2)).try_rational(), Some(q(-1, 1)));
        assert_eq!(e(5, 1).try_rational(), None);
        // E(6) = -E(3)^2 lives in conductor 3
        let z6 = e(6, 1);
        assert_eq!(z6.try_rational(), None);
        assert_eq!(z6.conductor(), 3);
        assert_eq!(z6, -&e(3, 2));
    }

    #[test]
    fn text_round_trip() {
        for z in [
            Cyclotomic::zero(),
            Cyclotomic::from_rational(q(-3, 7)),
            &e(5, 1) + &e(5, 4),
            (&e(12, 1) - &e(4, 1)).scale(&q(1, 3)),
        ] {
            let s = z.canonical();
            let back: Cyclotomic = s.parse().unwrap();
            assert_eq!(back, z);
            assert_eq!(back.canonical(), s);
        }
        assert_eq!(e(4, 1).canonical(), "1*E(4)^1");
        assert!("E(5)".parse::<Cyclotomic>().is_err());
    }

    #[test]
    fn basis_sizes_match_totient() {
        for n in 1..=120 {
            assert_eq!(zumbroich_basis(n).len() as u32, phi(n), "n = {n}");
        }
    }

    /// Möbius function by trial division.
    fn mobius(n: u32) -> i64 {
        let f = factor(n);
        if f.iter().any(|&(_, e)| e > 1) {
            0
        } else if f.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn galois_sums_are_mobius() {
        for n in 1..=30u32 {
            let mut acc = Cyclotomic::zero();
            for k in (0..n).filter(|&k| gcd(k, n) == 1) {
                acc = &acc + &e(n, k as i64);
            }
            assert_eq!(acc, Cyclotomic::from_int(mobius(n)), "n = {n}");
        }
    }

    #[test]
    fn scalar_division() {
        let z = e(7, 3);
        assert!(matches!(z.div_rational(&BigRational::zero()), Err(Error::DivisionByZero)));
        assert_eq!(z.div_rational(&q(2, 1)).unwrap().scale(&q(2, 1)), z);
    }

    fn arb_cyclotomic() -> impl Strategy<Value = Cyclotomic> {
        let conductors = prop::sample::select(vec![1u32, 3, 4, 5, 8, 9, 12, 15, 20, 24, 40, 60, 120]);
        (conductors, prop::collection::vec((0u32..120, -4i64..5, 1i64..4), 0..5)).prop_map(
            |(n, terms)| {
                terms.into_iter().fold(Cyclotomic::zero(), |acc, (k, c, d)| {
                    &acc + &e(n, k as i64).scale(&q(c, d))
                })
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in arb_cyclotomic(), b in arb_cyclotomic(), c in arb_cyclotomic()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(&Cyclotomic::zero() + &a, a.clone());
        }

        #[test]
        fn conjugation_is_multiplicative_involution(a in arb_cyclotomic(), b in arb_cyclotomic()) {
            prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
            prop_assert_eq!(a.conjugate().conjugate(), a.clone());
            let n = &a * &a.conjugate();
            prop_assert_eq!(n.conjugate(), n);
        }

        #[test]
        fn canonical_text_round_trips(a in arb_cyclotomic()) {
            let s = a.canonical();
            let back: Cyclotomic = s.parse().unwrap();
            prop_assert_eq!(back.canonical(), s);
            prop_assert_eq!(back, a);
        }

        #[test]
        fn rational_values_have_conductor_one(r in -50i64..50, d in 1i64..9, n in 1u32..40, k in 0i64..40) {
            // E(n)^k * conj(E(n)^k) = 1
            let z = e(n, k).scale(&q(r, d));
            let w = &z * &e(n, -k);
            prop_assert_eq!(w.conductor(), 1);
            prop_assert_eq!(w.try_rational(), Some(q(r, d)));
        }
    }
}
