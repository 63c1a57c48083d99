//! Laurent polynomials in one variable with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bigfloat::{horner_precise, PreciseValue};
use crate::error::{Error, Result};

type C = Complex64;

pub type Rational = BigRational;

/// A finite sum `Σ c_k ζ^k`, `k ∈ ℤ`, with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
    var: char,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: i64,
    num: String,
    den: String,
}

impl Default for LaurentPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new(), var: 'ζ' }
    }

    pub fn one() -> Self {
        Self::monomial(0, Rational::one())
    }

    pub fn monomial(exp: i64, c: Rational) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// Builds from `(exponent, integer coefficient)` pairs; repeated exponents add.
    pub fn from_ints<I: IntoIterator<Item = (i64, i64)>>(it: I) -> Self {
        Self::from_terms(it.into_iter().map(|(k, c)| (k, Rational::from_integer(BigInt::from(c)))))
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in it {
            p.add_term(k, &c);
        }
        p
    }

    pub fn with_var(mut self, var: char) -> Self {
        self.var = var;
        self
    }

    pub fn var(&self) -> char {
        self.var
    }

    fn add_term(&mut self, k: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// Common denominator `d` and the integer coefficients of `d·p`.
    fn integer_form(&self) -> (BigInt, Vec<(i64, BigInt)>) {
        let d = self.terms.values().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let nums = self.terms.iter().map(|(k, c)| (*k, c.numer() * (&d / c.denom()))).collect();
        (d, nums)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: i64) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.min_exp().is_some_and(|k| k < 0)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero().with_var(self.var);
        }
        LaurentPoly { terms: self.terms.iter().map(|(k, c)| (*k, c * s)).collect(), var: self.var }
    }

    /// Multiplication by `ζ^s`.
    pub fn shift(&self, s: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(k, c)| (k + s, c.clone())).collect(), var: self.var }
    }

    pub fn derivative(&self) -> Self {
        let mut p = Self::zero().with_var(self.var);
        for (k, c) in &self.terms {
            if *k != 0 {
                p.terms.insert(k - 1, c * Rational::from_integer(BigInt::from(*k)));
            }
        }
        p
    }

    /// Exact quotient `q` with `q·den = self`; errors when the remainder is nonzero.
    pub fn exact_divide(&self, den: &LaurentPoly) -> Result<LaurentPoly> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut q = LaurentPoly::zero().with_var(self.var);
        if self.is_zero() {
            return Ok(q);
        }
        let (dt, dc) = den.terms.iter().next_back().map(|(k, c)| (*k, c.clone())).unwrap();
        let lo = self.min_exp().unwrap() - den.min_exp().unwrap();
        let mut rem = self.clone();
        while let Some(t) = rem.max_exp() {
            let e = t - dt;
            if e < lo {
                return Err(Error::NonExactDivision);
            }
            let c = rem.terms[&t].clone() / &dc;
            for (k, d) in &den.terms {
                rem.add_term(k + e, &-(d * &c));
            }
            q.terms.insert(e, c);
        }
        Ok(q)
    }

    /// Double-precision evaluation; coefficients are rounded only here.
    pub fn eval_complex(&self, zeta: C) -> Result<C> {
        if self.is_zero() {
            return Ok(C::new(0.0, 0.0));
        }
        if zeta == C::new(0.0, 0.0) {
            if self.has_negative_exponents() {
                return Err(Error::PoleAtZero);
            }
            return Ok(C::new(self.coeff(0).to_f64().unwrap_or(f64::NAN), 0.0));
        }
        let mut pos = C::new(0.0, 0.0);
        let top = self.max_exp().unwrap().max(0);
        for k in (0..=top).rev() {
            pos = pos * zeta + self.coeff_f64(k);
        }
        let mut neg = C::new(0.0, 0.0);
        let bottom = self.min_exp().unwrap();
        if bottom < 0 {
            let inv = zeta.inv();
            for k in bottom..0 {
                neg = (neg + self.coeff_f64(k)) * inv;
            }
        }
        Ok(pos + neg)
    }

    fn coeff_f64(&self, k: i64) -> f64 {
        self.terms.get(&k).map(|c| c.to_f64().unwrap_or(f64::NAN)).unwrap_or(0.0)
    }

    /// Evaluation with adaptive working precision; safe under heavy cancellation
    /// and for values outside `f64` range.
    pub fn eval_precise(&self, zeta: C) -> Result<PreciseValue> {
        if zeta == C::new(0.0, 0.0) && self.has_negative_exponents() {
            return Err(Error::PoleAtZero);
        }
        let terms: Vec<(i64, &Rational)> = self.terms().collect();
        Ok(horner_precise(&terms, zeta))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let v: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(k, c)| TermJson { exp: *k, num: c.numer().to_string(), den: c.denom().to_string() })
            .collect();
        serde_json::to_value(v).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let items: Vec<TermJson> = serde_json::from_value(v.clone())?;
        let mut p = Self::zero();
        for t in items {
            let num: BigInt = t.num.parse().map_err(|_| Error::Parse(format!("numerator {}", t.num)))?;
            let den: BigInt = t.den.parse().map_err(|_| Error::Parse(format!("denominator {}", t.den)))?;
            if den.is_zero() || den.is_negative() {
                return Err(Error::Parse("denominator must be positive".into()));
            }
            p.add_term(t.exp, &Rational::new(num, den));
        }
        Ok(p)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, c);
        }
        r
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self + &(-o)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(), var: self.var }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let (da, na) = self.integer_form();
        let (db, nb) = o.integer_form();
        let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (a, ca) in &na {
            for (b, cb) in &nb {
                *acc.entry(a + b).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        let den = da * db;
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, Rational::new(c, den.clone())))
            .collect();
        LaurentPoly { terms, var: self.var }
    }
}

pub fn add(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    a + b
}

pub fn mul(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    a * b
}

pub fn derivative(a: &LaurentPoly) -> LaurentPoly {
    a.derivative()
}

pub fn exact_divide(num: &LaurentPoly, den: &LaurentPoly) -> Result<LaurentPoly> {
    num.exact_divide(den)
}

pub fn eval_complex(a: &LaurentPoly, zeta: C) -> Result<C> {
    a.eval_complex(zeta)
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = a.is_one();
            if !unit || *k == 0 {
                write!(f, "{a}")?;
            }
            match *k {
                0 => {}
                1 => write!(f, "{}", self.var)?,
                _ => write!(f, "{}^{}", self.var, k)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(t: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_ints(t.iter().copied())
    }

    #[test]
    fn add_examples() {
        assert!(add(&lp(&[(2, 1)]), &lp(&[(2, -1)])).is_zero());
        assert_eq!(add(&lp(&[(5, 1), (3, -1)]), &lp(&[(3, 1)])), lp(&[(5, 1)]));
        assert_eq!(add(&lp(&[(-1, 1), (-3, 1)]), &lp(&[(-1, 1)])), lp(&[(-1, 2), (-3, 1)]));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(mul(&lp(&[(2, 1)]), &lp(&[(3, 1)])), lp(&[(5, 1)]));
        assert_eq!(mul(&lp(&[(-1, 1)]), &lp(&[(2, 1)])), lp(&[(1, 1)]));
        assert_eq!(mul(&lp(&[(5, 1), (3, -1)]), &lp(&[(2, 1)])), lp(&[(7, 1), (5, -1)]));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(lp(&[(2, 1)]).derivative(), lp(&[(1, 2)]));
        assert_eq!(lp(&[(-1, 1)]).derivative(), lp(&[(-2, -1)]));
        assert_eq!(lp(&[(5, 1), (3, -1)]).derivative(), lp(&[(4, 5), (2, -3)]));
    }

    #[test]
    fn divide_examples() {
        assert_eq!(lp(&[(7, 1), (5, -1)]).exact_divide(&lp(&[(2, 1)])).unwrap(), lp(&[(5, 1), (3, -1)]));
        assert_eq!(lp(&[(5, 1), (3, -1)]).exact_divide(&lp(&[(3, 1)])).unwrap(), lp(&[(2, 1), (0, -1)]));
        assert_eq!(lp(&[(2, 1), (0, 1)]).exact_divide(&lp(&[(1, 1)])).unwrap(), lp(&[(1, 1), (-1, 1)]));
        assert_eq!(lp(&[(2, 1), (0, 1)]).exact_divide(&lp(&[(1, 1), (0, 1)])), Err(Error::NonExactDivision));
        assert_eq!(lp(&[(1, 1)]).exact_divide(&LaurentPoly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn eval_examples() {
        let two = C::new(2.0, 0.0);
        assert_eq!(lp(&[(2, 1)]).eval_complex(two).unwrap(), C::new(4.0, 0.0));
        assert_eq!(lp(&[(5, 1), (3, -1)]).eval_complex(C::new(1.0, 0.0)).unwrap(), C::new(0.0, 0.0));
        assert_eq!(lp(&[(-1, 1), (-3, 1)]).eval_complex(C::new(0.0, 0.0)), Err(Error::PoleAtZero));
        let v = lp(&[(-1, 1), (-3, 1), (2, 3)]).eval_complex(two).unwrap();
        assert!((v - C::new(0.5 + 0.125 + 12.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn json_roundtrip_and_display() {
        let p = LaurentPoly::from_terms([(-4, Rational::new(5.into(), 7.into())), (9, Rational::from_integer((-4).into()))]);
        let back = LaurentPoly::from_json(&p.to_json()).unwrap();
        assert_eq!(p, back);
        assert_eq!(lp(&[(9, 1), (7, -4), (5, 5)]).to_string(), "ζ^9 - 4ζ^7 + 5ζ^5");
    }
}
