//! Exact arithmetic in the cyclotomic field `Q(ζ_N)` and sign decisions for
//! its real elements.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::QPoly;

/// `N`-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: usize) -> QPoly {
    fn go(n: usize, memo: &mut HashMap<usize, QPoly>) -> QPoly {
        if let Some(p) = memo.get(&n) {
            return p.clone();
        }
        // x^n - 1 divided by every Φ_d with d a proper divisor
        let mut p = QPoly::monomial(n).sub(&QPoly::one());
        for d in 1..n {
            if n.is_multiple_of(d) {
                let q = go(d, memo);
                p = p.div_rem(&q).0;
            }
        }
        memo.insert(n, p.clone());
        p
    }
    assert!(n >= 1);
    go(n, &mut HashMap::new())
}

/// `Q(ζ_N)` with `ζ_N = exp(2πi/N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloField {
    n: usize,
    modulus: QPoly,
}

/// An element of a [`CycloField`]: a polynomial in `ζ` reduced modulo `Φ_N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Cyc(QPoly);

impl CycloField {
    pub fn new(n: usize) -> Self {
        Self { n, modulus: cyclotomic_poly(n) }
    }

    pub fn conductor(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn zero(&self) -> Cyc {
        Cyc(QPoly::zero())
    }

    pub fn one(&self) -> Cyc {
        Cyc(QPoly::one())
    }

    pub fn rational(&self, q: BigRational) -> Cyc {
        Cyc(QPoly::new(vec![q]))
    }

    pub fn int(&self, k: i64) -> Cyc {
        self.rational(BigRational::from_integer(k.into()))
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> Cyc {
        let e = k.rem_euclid(self.n as i64) as usize;
        Cyc(QPoly::monomial(e).rem(&self.modulus))
    }

    /// `cos(2πk/N)` as `(ζ^k + ζ^-k) / 2`.
    pub fn cos_2pi(&self, k: i64) -> Cyc {
        let s = self.add(&self.zeta_pow(k), &self.zeta_pow(-k));
        self.scale(&s, &BigRational::new(1.into(), 2.into()))
    }

    pub fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.add(&b.0))
    }

    pub fn sub(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.sub(&b.0))
    }

    pub fn neg(&self, a: &Cyc) -> Cyc {
        Cyc(a.0.scale(&-BigRational::one()))
    }

    pub fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.mul(&b.0).rem(&self.modulus))
    }

    pub fn scale(&self, a: &Cyc, q: &BigRational) -> Cyc {
        Cyc(a.0.scale(q))
    }

    /// Sign of a real element; the result is meaningless for non-real ones.
    pub fn sign(&self, a: &Cyc) -> Ordering {
        if a.is_zero() {
            return Ordering::Equal;
        }
        if let Some(s) = self.sign_f64(a) {
            return s;
        }
        let mut bits = 64;
        loop {
            let (lo, hi) = self.enclose(a, bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    pub fn cmp(&self, a: &Cyc, b: &Cyc) -> Ordering {
        self.sign(&self.sub(a, b))
    }

    // Floating-point estimate, trusted only when far from zero.
    fn sign_f64(&self, a: &Cyc) -> Option<Ordering> {
        let mut v = 0.0f64;
        let mut mag = 0.0f64;
        for (k, c) in a.0.coeffs().iter().enumerate() {
            let c = c.to_f64()?;
            let t = c * (2.0 * std::f64::consts::PI * k as f64 / self.n as f64).cos();
            v += t;
            mag += c.abs();
        }
        if !v.is_finite() || !mag.is_finite() {
            return None;
        }
        let tol = 1e-9 * (1.0 + mag);
        (v.abs() > tol).then_some(if v > 0.0 { Ordering::Greater } else { Ordering::Less })
    }

    /// Rational interval containing the (real) value of `a`.
    pub fn enclose(&self, a: &Cyc, bits: u32) -> (BigRational, BigRational) {
        let pi = pi_bounds(bits + 8);
        let (mut lo, mut hi) = (BigRational::zero(), BigRational::zero());
        for (k, c) in a.0.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (clo, chi) = cos_2pi_bounds(k, self.n, &pi, bits + 8);
            if c.is_positive() {
                lo += c * &clo;
                hi += c * &chi;
            } else {
                lo += c * &chi;
                hi += c * &clo;
            }
        }
        (lo, hi)
    }

    pub fn to_f64(&self, a: &Cyc) -> f64 {
        a.0.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c.to_f64().unwrap_or(f64::NAN) * (2.0 * std::f64::consts::PI * k as f64 / self.n as f64).cos())
            .sum()
    }
}

impl Cyc {
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        self.0.coeffs()
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.0.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.0.coeff(0)),
            _ => None,
        }
    }
}

fn dyadic_floor(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let n = (x * BigRational::from_integer(scale.clone())).floor().to_integer();
    BigRational::new(n, scale)
}

fn dyadic_ceil(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let n = (x * BigRational::from_integer(scale.clone())).ceil().to_integer();
    BigRational::new(n, scale)
}

/// `atan(1/q)` to within `2^-bits` by the alternating series; returns
/// lower and upper bounds.
fn atan_inv_bounds(q: i64, bits: u32) -> (BigRational, BigRational) {
    let eps = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let x = BigRational::new(1.into(), q.into());
    let x2 = &x * &x;
    let mut pow = x.clone();
    let mut sum = BigRational::zero();
    let mut j: i64 = 0;
    loop {
        let term = &pow / BigRational::from_integer((2 * j + 1).into());
        if term < eps {
            // remainder is at most this term and has its sign
            return if j % 2 == 0 { (sum.clone(), sum + term) } else { (sum.clone() - term, sum) };
        }
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        pow = &pow * &x2;
        j += 1;
    }
}

/// Dyadic bounds on `π` from Machin's formula.
pub fn pi_bounds(bits: u32) -> (BigRational, BigRational) {
    let (a_lo, a_hi) = atan_inv_bounds(5, bits + 6);
    let (b_lo, b_hi) = atan_inv_bounds(239, bits + 6);
    let sixteen = BigRational::from_integer(16.into());
    let four = BigRational::from_integer(4.into());
    let lo = &sixteen * a_lo - &four * b_hi;
    let hi = &sixteen * a_hi - &four * b_lo;
    (dyadic_floor(&lo, bits), dyadic_ceil(&hi, bits))
}

/// Bounds on `cos(θ)` for `0 <= θ < 3.4`, from the Taylor series.
fn cos_bounds_at(theta: &BigRational, bits: u32) -> (BigRational, BigRational) {
    let eps = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let t2 = theta * theta;
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    let mut j: i64 = 0;
    loop {
        if j >= 2 && term < eps {
            let (lo, hi) = (&sum - &term, &sum + &term);
            return (dyadic_floor(&lo, bits), dyadic_ceil(&hi, bits));
        }
        if j % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        term = term * &t2 / BigRational::from_integer(((2 * j + 1) * (2 * j + 2)).into());
        j += 1;
    }
}

/// Bounds on `cos(2πk/n)`.
fn cos_2pi_bounds(k: usize, n: usize, pi: &(BigRational, BigRational), bits: u32) -> (BigRational, BigRational) {
    let k = k % n;
    let k = if 2 * k > n { n - k } else { k };
    let exact = |v: i64| (BigRational::from_integer(v.into()), BigRational::from_integer(v.into()));
    if k == 0 {
        return exact(1);
    }
    if 2 * k == n {
        return exact(-1);
    }
    if 4 * k == n {
        return exact(0);
    }
    // θ = 2πk/n lies strictly inside (0, π), where cos decreases
    let f = BigRational::new((2 * k).into(), n.into());
    let (th_lo, th_hi) = (&pi.0 * &f, &pi.1 * &f);
    let lo = cos_bounds_at(&th_hi, bits).0;
    let hi = cos_bounds_at(&th_lo, bits).1;
    let one = BigRational::one();
    (lo.max(-one.clone()), hi.min(one))
}

/// Least common multiple helper for conductors.
pub fn lcm(a: usize, b: usize) -> usize {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), QPoly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), QPoly::from_ints(&[1, 1]));
        assert_eq!(cyclotomic_poly(4), QPoly::from_ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), QPoly::from_ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(8), QPoly::from_ints(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_poly(12).degree(), Some(4));
    }

    #[test]
    fn exact_cosines() {
        let f = CycloField::new(6);
        // cos(π/3) = 1/2
        assert_eq!(f.cos_2pi(1).as_rational(), Some(BigRational::new(1.into(), 2.into())));
        let f = CycloField::new(8);
        // cos(π/4)^2 = 1/2
        let c = f.cos_2pi(1);
        assert_eq!(f.mul(&c, &c).as_rational(), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(f.cos_2pi(2).as_rational(), Some(BigRational::zero()));
        let f = CycloField::new(10);
        // cos(π/5) = (1 + √5)/4 solves 4c^2 - 2c - 1 = 0
        let c = f.cos_2pi(1);
        let e = f.sub(&f.sub(&f.scale(&f.mul(&c, &c), &BigRational::from_integer(4.into())), &f.scale(&c, &BigRational::from_integer(2.into()))), &f.one());
        assert!(e.is_zero());
    }

    #[test]
    fn signs() {
        let f = CycloField::new(10);
        let c = f.cos_2pi(1); // ≈ 0.809
        assert_eq!(f.sign(&c), Ordering::Greater);
        assert_eq!(f.sign(&f.sub(&c, &f.one())), Ordering::Less);
        let (lo, hi) = f.enclose(&c, 80);
        assert!(lo.to_f64().unwrap() <= 0.8090169943749475 && hi.to_f64().unwrap() >= 0.8090169943749474);
        // positive but far below f64 resolution, so decided by intervals
        let sqrt5_over_4 = f.sub(&c, &f.rational(BigRational::new(1.into(), 4.into())));
        let z = f.sub(&f.add(&sqrt5_over_4, &f.rational(BigRational::new(1.into(), BigInt::from(10).pow(25)))), &f.rational(BigRational::new(559016994374947424u64.into(), BigInt::from(10).pow(18))));
        // √5/4 = 0.55901699437494742410...
        assert_eq!(f.sign(&z), Ordering::Greater);
    }

    #[test]
    fn pi_enclosure() {
        let (lo, hi) = pi_bounds(100);
        assert!(lo < hi);
        assert!(lo.to_f64().unwrap() <= std::f64::consts::PI && hi.to_f64().unwrap() >= std::f64::consts::PI);
        assert!(&hi - &lo <= BigRational::new(1.into(), BigInt::one() << 98));
    }
}
