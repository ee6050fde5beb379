use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::{Error, Result};

/// A polynomial with exact rational coefficients, `coefficients[k]` multiplying `x^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolynomial {
    coefficients: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(coefficients: Vec<BigRational>) -> Self {
        let mut p = RationalPolynomial { coefficients };
        p.trim();
        p
    }

    /// Integer coefficients in ascending degree order.
    pub fn from_integers(coefficients: &[i64]) -> Self {
        Self::new(
            coefficients
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    fn trim(&mut self) {
        while self.coefficients.last().is_some_and(Zero::is_zero) {
            self.coefficients.pop();
        }
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn evaluate(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Remainder of Euclidean division by a nonzero `divisor`.
    fn remainder(&self, divisor: &Self) -> Self {
        let d = divisor.degree().expect("nonzero divisor");
        let lead = &divisor.coefficients[d];
        let mut r = self.coefficients.clone();
        while r.len() > d && !r.is_empty() {
            let top = r.len() - 1;
            let q = &r[top] / lead;
            if !q.is_zero() {
                for (k, c) in divisor.coefficients.iter().enumerate() {
                    let prod = &q * c;
                    r[top - d + k] -= prod;
                }
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Self::new(r)
    }

    fn negated(self) -> Self {
        Self::new(self.coefficients.into_iter().map(|c| -c).collect())
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}x")?,
                _ => write!(f, "{a}x^{k}")?,
            }
        }
        Ok(())
    }
}

fn sign_changes(chain: &[RationalPolynomial], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in chain {
        let v = p.evaluate(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots of `p` in `(a, b]`, computed exactly.
pub fn sturm_root_count(p: &RationalPolynomial, a: &BigRational, b: &BigRational) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if a >= b {
        return Err(Error::domain("interval", format!("need a < b, got ({a}, {b}]")));
    }
    for end in [a, b] {
        if p.evaluate(end).is_zero() {
            return Err(Error::EndpointRoot {
                endpoint: end.to_string(),
            });
        }
    }
    let mut chain = vec![p.clone(), p.derivative()];
    while !chain[chain.len() - 1].is_zero() {
        let n = chain.len();
        let next = chain[n - 2].remainder(&chain[n - 1]).negated();
        chain.push(next);
    }
    chain.pop();
    Ok(sign_changes(&chain, a) - sign_changes(&chain, b))
}
