//! Wide-range complex numbers and a fixed-precision complex bigfloat.
//!
//! `Scaled` carries an `f64` mantissa and a binary exponent so that values such
//! as `R_64(ζ)` (far beyond `f64` range) can be multiplied and divided safely.
//! `BigC` is `(re + i·im)·2^e` with integer mantissas, truncated to a working
//! precision; it drives the adaptive Horner scheme in [`horner_precise`].

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

type C = Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub mant: C,
    pub exp2: i64,
}

fn ldexp(x: f64, e: i64) -> f64 {
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { mant: C::new(0.0, 0.0), exp2: 0 };

    pub fn new(mant: C, exp2: i64) -> Self {
        let mut s = Scaled { mant, exp2 };
        s.normalize();
        s
    }

    pub fn from_c(z: C) -> Self {
        Scaled::new(z, 0)
    }

    fn normalize(&mut self) {
        let m = self.mant.re.abs().max(self.mant.im.abs());
        if m == 0.0 || !m.is_finite() {
            if m == 0.0 {
                self.exp2 = 0;
            }
            return;
        }
        let k = m.log2().floor() as i64 + 1;
        self.mant = C::new(ldexp(self.mant.re, -k), ldexp(self.mant.im, -k));
        self.exp2 += k;
    }

    pub fn is_zero(&self) -> bool {
        self.mant.re == 0.0 && self.mant.im == 0.0
    }

    /// log2 of the modulus; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mant.norm().log2() + self.exp2 as f64
        }
    }

    pub fn to_c(&self) -> C {
        C::new(ldexp(self.mant.re, self.exp2), ldexp(self.mant.im, self.exp2))
    }

    pub fn mul(&self, o: &Scaled) -> Scaled {
        Scaled::new(self.mant * o.mant, self.exp2 + o.exp2)
    }

    pub fn div(&self, o: &Scaled) -> Scaled {
        Scaled::new(self.mant / o.mant, self.exp2 - o.exp2)
    }

    pub fn scale(&self, f: C) -> Scaled {
        Scaled::new(self.mant * f, self.exp2)
    }

    pub fn add(&self, o: &Scaled) -> Scaled {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        let e = self.exp2.max(o.exp2);
        let a = C::new(ldexp(self.mant.re, self.exp2 - e), ldexp(self.mant.im, self.exp2 - e));
        let b = C::new(ldexp(o.mant.re, o.exp2 - e), ldexp(o.mant.im, o.exp2 - e));
        Scaled::new(a + b, e)
    }

    pub fn powi(&self, k: i64) -> Scaled {
        if k < 0 {
            return Scaled::from_c(C::new(1.0, 0.0)).div(&self.powi(-k));
        }
        let mut base = *self;
        let mut acc = Scaled::from_c(C::new(1.0, 0.0));
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }
}

/// Complex bigfloat `(re + i·im)·2^e`.
#[derive(Clone, Debug)]
pub struct BigC {
    re: BigInt,
    im: BigInt,
    e: i64,
}

fn decode_f64(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let neg = bits >> 63 == 1;
    let ex = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if ex == 0 { (frac, -1074) } else { (frac | (1u64 << 52), ex - 1075) };
    let m = BigInt::from(m);
    (if neg { -m } else { m }, e)
}

pub fn log2_bigint(x: &BigInt) -> f64 {
    let b = x.bits() as i64;
    if b == 0 {
        return f64::NEG_INFINITY;
    }
    let sh = (b - 60).max(0);
    let top = (x.abs() >> sh as usize).to_f64().unwrap_or(0.0);
    top.log2() + sh as f64
}

pub fn log2_rational(x: &BigRational) -> f64 {
    log2_bigint(x.numer()) - log2_bigint(x.denom())
}

impl BigC {
    pub fn zero() -> Self {
        BigC { re: BigInt::zero(), im: BigInt::zero(), e: 0 }
    }

    pub fn from_c(z: C) -> Self {
        let (mr, er) = decode_f64(z.re);
        let (mi, ei) = decode_f64(z.im);
        let e = if mr.is_zero() {
            ei
        } else if mi.is_zero() {
            er
        } else {
            er.min(ei)
        };
        let re = if mr.is_zero() { mr } else { mr << (er - e) as usize };
        let im = if mi.is_zero() { mi } else { mi << (ei - e) as usize };
        BigC { re, im, e }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn bits(&self) -> u64 {
        self.re.bits().max(self.im.bits())
    }

    pub fn mul(&self, o: &BigC) -> BigC {
        BigC {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
            e: self.e + o.e,
        }
    }

    pub fn truncate(&mut self, prec: u64) {
        let b = self.bits();
        if b > prec {
            let sh = (b - prec) as usize;
            self.re >>= sh;
            self.im >>= sh;
            self.e += sh as i64;
        }
    }

    fn align_to(&mut self, e: i64) {
        if e < self.e {
            let sh = (self.e - e) as usize;
            self.re <<= sh;
            self.im <<= sh;
            self.e = e;
        }
    }

    /// Adds `re_part·2^e` (a real value) in place.
    fn add_real(&mut self, m: &BigInt, e: i64) {
        if m.is_zero() {
            return;
        }
        if self.is_zero() {
            self.re = m.clone();
            self.im = BigInt::zero();
            self.e = e;
            return;
        }
        if e >= self.e {
            self.re += m << (e - self.e) as usize;
        } else {
            self.align_to(e);
            self.re += m;
        }
    }

    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let b = self.bits() as i64;
        let sh = (b - 60).max(0) as usize;
        let r = (&self.re >> sh).to_f64().unwrap_or(0.0);
        let i = (&self.im >> sh).to_f64().unwrap_or(0.0);
        C::new(r, i).norm().log2() + (sh as i64 + self.e) as f64
    }

    pub fn to_scaled(&self) -> Scaled {
        if self.is_zero() {
            return Scaled::ZERO;
        }
        let b = self.bits() as i64;
        let sh = (b - 62).max(0) as usize;
        let r = (&self.re >> sh).to_f64().unwrap_or(0.0);
        let i = (&self.im >> sh).to_f64().unwrap_or(0.0);
        Scaled::new(C::new(r, i), self.e + sh as i64)
    }
}

fn rational_at_precision(q: &BigRational, prec: u64) -> (BigInt, i64) {
    if q.denom() == &BigInt::from(1) {
        return (q.numer().clone(), 0);
    }
    let shift = prec + q.denom().bits() + 2;
    let num = q.numer() << shift as usize;
    let (quot, _) = num.div_rem(q.denom());
    (quot, -(shift as i64))
}

/// Result of a precision-controlled evaluation.
#[derive(Clone, Copy, Debug)]
pub struct PreciseValue {
    pub value: Scaled,
    /// log2 of the a-priori absolute error bound.
    pub log2_err: f64,
    /// log2 of Σ|a_k||ζ|^k.
    pub log2_mag: f64,
    pub precision: u64,
}

impl PreciseValue {
    pub fn resolved(&self) -> bool {
        self.value.log2_abs() - self.log2_err >= 50.0
    }
}

const MAX_PRECISION: u64 = 1 << 15;

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Evaluates `Σ c_k ζ^k` for sparse exponents with automatic working precision.
///
/// The working precision is raised until the computed value exceeds the
/// rounding error bound by at least 2^60, or the precision cap is reached.
pub fn horner_precise(terms: &[(i64, &BigRational)], zeta: C) -> PreciseValue {
    if terms.is_empty() {
        return PreciseValue { value: Scaled::ZERO, log2_err: f64::NEG_INFINITY, log2_mag: f64::NEG_INFINITY, precision: 0 };
    }
    let kmin = terms.iter().map(|t| t.0).min().unwrap();
    let kmax = terms.iter().map(|t| t.0).max().unwrap();
    let g = terms.iter().fold(0, |acc, t| gcd_i64(acc, t.0 - kmin)).max(1);
    let jmax = ((kmax - kmin) / g) as usize;
    let mut dense: Vec<Option<&BigRational>> = vec![None; jmax + 1];
    for (k, c) in terms {
        dense[((k - kmin) / g) as usize] = Some(*c);
    }
    let zb = BigC::from_c(zeta);
    let mut w = BigC::from_c(C::new(1.0, 0.0));
    for _ in 0..g {
        w = w.mul(&zb);
    }
    let lw = (g as f64) * zeta.norm().log2();
    let mut lmax = f64::NEG_INFINITY;
    let logs: Vec<f64> = dense
        .iter()
        .enumerate()
        .map(|(j, c)| match c {
            Some(c) => log2_rational(c) + j as f64 * lw,
            None => f64::NEG_INFINITY,
        })
        .collect();
    for &l in &logs {
        lmax = lmax.max(l);
    }
    let lsum: f64 = logs.iter().map(|l| (l - lmax).exp2()).sum::<f64>().log2() + lmax;
    let scale = Scaled::from_c(zeta).powi(kmin);
    let mut prec: u64 = 160;
    loop {
        let mut acc = BigC::zero();
        for c in dense.iter().rev() {
            acc = acc.mul(&w);
            acc.truncate(prec);
            if let Some(c) = c {
                let (m, e) = rational_at_precision(c, prec);
                acc.add_real(&m, e);
            }
        }
        acc.truncate(prec);
        let log2_err = lsum + ((jmax + 2) as f64).log2() + 3.0 - prec as f64;
        let lv = acc.log2_abs();
        let value = acc.to_scaled().mul(&scale);
        let lscale = scale.log2_abs();
        if lv - log2_err >= 60.0 || prec >= MAX_PRECISION {
            return PreciseValue { value, log2_err: log2_err + lscale, log2_mag: lsum + lscale, precision: prec };
        }
        let need = if lv.is_finite() { (log2_err - lv + 80.0).ceil() as u64 } else { prec };
        prec = (prec + need.max(64)).min(MAX_PRECISION);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_roundtrip_and_range() {
        let a = Scaled::from_c(C::new(3.0, -4.0));
        assert!((a.to_c() - C::new(3.0, -4.0)).norm() < 1e-15);
        let big = a.powi(1000);
        assert!((big.log2_abs() - 1000.0 * 5f64.log2()).abs() < 1e-9);
        let back = big.div(&a.powi(999));
        assert!((back.to_c() - C::new(3.0, -4.0)).norm() < 1e-12);
    }

    #[test]
    fn bigc_exact_from_f64() {
        let z = C::new(0.1, -2.5e-3);
        let b = BigC::from_c(z);
        let s = b.to_scaled().to_c();
        assert_eq!(s.re, 0.1);
        assert_eq!(s.im, -2.5e-3);
    }

    #[test]
    fn horner_detects_cancellation() {
        // (ζ-1)^40 at ζ = 1 + 2^-20: huge cancellation, exact value 2^-800.
        let mut coeffs = Vec::new();
        let mut binom = BigInt::from(1);
        for k in 0..=40i64 {
            let sign = if (40 - k) % 2 == 0 { 1 } else { -1 };
            coeffs.push((k, BigRational::from_integer(&binom * sign)));
            binom = binom * (40 - k) / (k + 1);
        }
        let terms: Vec<(i64, &BigRational)> = coeffs.iter().map(|(k, c)| (*k, c)).collect();
        let v = horner_precise(&terms, C::new(1.0 + 2f64.powi(-20), 0.0));
        assert!(v.resolved());
        assert!((v.value.log2_abs() + 800.0).abs() < 1e-9);
    }
}
