//! Dense univariate polynomials with exact rational coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients in increasing degree; always trimmed (no trailing zeros).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly(Vec<BigRational>);

impl QPoly {
    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn one() -> Self {
        QPoly(vec![BigRational::one()])
    }

    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = BigRational::one();
        QPoly(c)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    /// Truncation modulo `x^n`.
    pub fn truncate(&self, n: usize) -> QPoly {
        QPoly::new(self.0.iter().take(n).cloned().collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.0[dd].clone();
        let mut rem = self.0.clone();
        let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = &rem[top] / &lead;
            if !c.is_zero() {
                for (j, d) in divisor.0.iter().enumerate() {
                    rem[top - dd + j] -= &c * d;
                }
                quot[top - dd] = c;
            }
            rem.pop();
        }
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn rem(&self, divisor: &QPoly) -> QPoly {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        match a.0.last().cloned() {
            Some(lead) => a.scale(&lead.recip()),
            None => a,
        }
    }

    /// Rescales by a positive rational to a primitive integer polynomial.
    pub fn to_primitive_ints(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * &lcm).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        ints.into_iter().map(|c| c / &g).collect()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn abs_coeff_sum(&self) -> BigRational {
        self.0.iter().map(|c| c.abs()).fold(BigRational::zero(), |a, b| a + b)
    }
}

/// Formats an integer polynomial in `x`, e.g. `1 + 2x - x^2`.
pub fn format_int_poly(coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        if i == 0 || !mag.is_one() {
            out.push_str(&mag.to_string());
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let a = QPoly::from_ints(&[-1, 0, 1]);
        let b = QPoly::from_ints(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, QPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let g = a.gcd(&QPoly::from_ints(&[1, 2, 1]));
        assert_eq!(g, b);
    }

    #[test]
    fn formatting() {
        let c: Vec<BigInt> = [1, 2, -1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(format_int_poly(&c), "1 + 2x - x^2");
        assert_eq!(format_int_poly(&[BigInt::from(-3)]), "-3");
        assert_eq!(format_int_poly(&[]), "0");
    }
}
