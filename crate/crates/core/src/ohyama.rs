//! The polynomials `R_n(ζ)` generated by
//! `2ζ R_{n+1} R_{n-1} = -R_n R_n'' + (R_n')² - ζ^{-1} R_n R_n' + 2(ζ² - n) R_n²`,
//! with `R_0 = 1`, `R_1 = ζ²`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Rational};

/// Memoized table of `R_n`, optionally persisted as one JSON file per index.
#[derive(Debug, Clone)]
pub struct OhyamaTable {
    entries: BTreeMap<i64, LaurentPoly>,
    max_computed_up: i64,
    min_computed_down: i64,
    cache_dir: Option<PathBuf>,
}

impl Default for OhyamaTable {
    fn default() -> Self {
        Self::new()
    }
}

/// Top exponent of `R_n` for `n ≥ 1`.
pub fn expected_degree(n: i64) -> i64 {
    n * (n + 3) / 2
}

impl OhyamaTable {
    pub fn new() -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(0, LaurentPoly::one());
        entries.insert(1, LaurentPoly::from_ints([(2, 1)]));
        OhyamaTable { entries, max_computed_up: 1, min_computed_down: 0, cache_dir: None }
    }

    pub fn with_cache_dir<P: AsRef<Path>>(dir: P) -> Self {
        let mut t = Self::new();
        t.cache_dir = Some(dir.as_ref().to_path_buf());
        t
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    pub fn max_computed_up(&self) -> i64 {
        self.max_computed_up
    }

    pub fn min_computed_down(&self) -> i64 {
        self.min_computed_down
    }

    fn cache_file(&self, n: i64) -> Option<PathBuf> {
        self.cache_dir.as_ref().map(|d| d.join(format!("R_{n}.json")))
    }

    fn load_cached(&self, n: i64) -> Option<LaurentPoly> {
        let path = self.cache_file(n)?;
        let text = std::fs::read_to_string(path).ok()?;
        let v: serde_json::Value = serde_json::from_str(&text).ok()?;
        if v.get("n")?.as_i64()? != n {
            return None;
        }
        LaurentPoly::from_json(v.get("terms")?).ok()
    }

    fn store_cached(&self, n: i64, p: &LaurentPoly) -> Result<()> {
        if let Some(path) = self.cache_file(n) {
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir)?;
            }
            let v = serde_json::json!({ "n": n, "terms": p.to_json() });
            let tmp = path.with_extension("json.tmp");
            std::fs::write(&tmp, serde_json::to_string(&v)?)?;
            std::fs::rename(tmp, path)?;
        }
        Ok(())
    }

    /// Returns `R_n`, extending the table upward or downward as needed.
    pub fn get(&mut self, n: i64) -> Result<&LaurentPoly> {
        while self.max_computed_up < n {
            let k = self.max_computed_up;
            let next = match self.load_cached(k + 1) {
                Some(p) => p,
                None => {
                    let p = step(&self.entries[&k], &self.entries[&(k - 1)], k)?;
                    self.store_cached(k + 1, &p)?;
                    p
                }
            };
            check_shape(k + 1, &next)?;
            self.entries.insert(k + 1, next);
            self.max_computed_up = k + 1;
        }
        while self.min_computed_down > n {
            let k = self.min_computed_down;
            let next = match self.load_cached(k - 1) {
                Some(p) => p,
                None => {
                    let p = step(&self.entries[&k], &self.entries[&(k + 1)], k)?;
                    self.store_cached(k - 1, &p)?;
                    p
                }
            };
            self.entries.insert(k - 1, next);
            self.min_computed_down = k - 1;
        }
        Ok(&self.entries[&n])
    }

    pub fn compute(&mut self, n: i64) -> Result<LaurentPoly> {
        self.get(n).cloned()
    }

    /// Exact check of the recurrence at index `n` using `R_{n-1}, R_n, R_{n+1}`.
    pub fn verify_recurrence(&mut self, n: i64) -> Result<bool> {
        let rm = self.compute(n - 1)?;
        let r = self.compute(n)?;
        let rp = self.compute(n + 1)?;
        let lhs = (&rp * &rm).shift(1).scale(&Rational::from_integer(BigInt::from(2)));
        Ok(lhs == rhs_exact(&r, n))
    }

    /// `R_{-n}(ζ) = ε ζ^{-3n} R_n(iζ)` for a unit `ε`.
    pub fn mirror_holds(&mut self, n: i64) -> Result<bool> {
        let rn = self.compute(n)?;
        let rmn = self.compute(-n)?;
        let Some(k0) = rn.min_exp() else { return Ok(rmn.is_zero()) };
        if rn.terms().any(|(k, _)| (k - k0) % 2 != 0) {
            return Ok(false);
        }
        let rotated = LaurentPoly::from_terms(rn.terms().map(|(k, c)| {
            let s = if ((k - k0) / 2) % 2 == 0 { c.clone() } else { -c.clone() };
            (k - 3 * n, s)
        }));
        Ok(rotated == rmn || rotated == -&rmn)
    }
}

/// RHS of the recurrence computed with generic exact Laurent arithmetic.
pub fn rhs_exact(r: &LaurentPoly, n: i64) -> LaurentPoly {
    let d1 = r.derivative();
    let d2 = d1.derivative();
    let two = Rational::from_integer(BigInt::from(2));
    let sq = r * r;
    let mut out = &(-&(r * &d2)) + &(&d1 * &d1);
    out = &out - &(r * &d1).shift(-1);
    out = &out + &sq.shift(2).scale(&two);
    &out - &sq.scale(&Rational::from_integer(BigInt::from(2 * n)))
}

fn check_shape(n: i64, p: &LaurentPoly) -> Result<()> {
    if n >= 1 && p.max_exp() != Some(expected_degree(n)) {
        return Err(Error::StructureViolation(format!(
            "top exponent of R_{n} is {:?}, expected {}",
            p.max_exp(),
            expected_degree(n)
        )));
    }
    if n >= 2 && p.min_exp().is_none_or(|k| k <= 0) {
        return Err(Error::StructureViolation(format!("R_{n} is not divisible by ζ")));
    }
    Ok(())
}

/// Solves the recurrence at index `k` for the neighbour opposite to `other`.
fn step(r: &LaurentPoly, other: &LaurentPoly, k: i64) -> Result<LaurentPoly> {
    if r.is_integral() && other.is_integral() {
        if let Some(p) = step_integer(r, other, k) {
            return Ok(p);
        }
    }
    let den = other.shift(1).scale(&Rational::from_integer(BigInt::from(2)));
    rhs_exact(r, k).exact_divide(&den)
}

struct Dense {
    low: i64,
    c: Vec<BigInt>,
}

impl Dense {
    fn from_poly(p: &LaurentPoly) -> Dense {
        let low = p.min_exp().unwrap_or(0);
        let high = p.max_exp().unwrap_or(0);
        let mut c = vec![BigInt::zero(); (high - low + 1) as usize];
        for (k, v) in p.terms() {
            c[(k - low) as usize] = v.numer().clone();
        }
        Dense { low, c }
    }

    fn nonzero(&self) -> Vec<(i64, &BigInt)> {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (self.low + i as i64, v))
            .collect()
    }
}

/// Integer kernel. The first three terms of the right-hand side combine into
/// `-½ζ^{-2} Σ_{a,b} r_a r_b (a-b)² ζ^{a+b}`, so one symmetric pass over
/// coefficient pairs yields both that sum and `R²`.
fn step_integer(r: &LaurentPoly, other: &LaurentPoly, k: i64) -> Option<LaurentPoly> {
    let rd = Dense::from_poly(r);
    let nz = rd.nonzero();
    let len = rd.c.len();
    let mut sq = vec![BigInt::zero(); 2 * len - 1];
    let mut dd = vec![BigInt::zero(); 2 * len - 1];
    for (i, &(a, ca)) in nz.iter().enumerate() {
        let ia = (a - rd.low) as usize;
        sq[2 * ia] += ca * ca;
        for &(b, cb) in &nz[i + 1..] {
            let ib = (b - rd.low) as usize;
            let p = ca * cb;
            let gap = BigInt::from((a - b) * (a - b));
            dd[ia + ib] -= &p * gap;
            sq[ia + ib] += p << 1;
        }
    }
    // rhs(m) = dd[m+2] + 2 sq[m-2] - 2k sq[m], exponents relative to 2·low.
    let base = 2 * rd.low - 2;
    let size = 2 * len + 3;
    let mut rhs = vec![BigInt::zero(); size];
    let two_k = BigInt::from(2 * k);
    for (j, v) in dd.iter().enumerate() {
        if !v.is_zero() {
            rhs[j] += v;
        }
    }
    for (j, v) in sq.iter().enumerate() {
        if !v.is_zero() {
            rhs[j + 4] += v << 1;
            rhs[j + 2] -= v * &two_k;
        }
    }
    for v in rhs.iter_mut() {
        if v.is_odd() {
            return None;
        }
        *v >>= 1;
    }
    // divide by ζ·other
    let od = Dense::from_poly(other);
    let onz = od.nonzero();
    let (dt, lc) = *onz.last()?;
    let dlow = onz.first()?.0;
    let dt = dt + 1;
    let dlow = dlow + 1;
    let first_nz = rhs.iter().position(|v| !v.is_zero());
    let Some(first_nz) = first_nz else { return Some(LaurentPoly::zero()) };
    let lo = base + first_nz as i64 - dlow;
    let mut quot: Vec<(i64, BigInt)> = Vec::new();
    let mut t = rhs.len() as i64 - 1;
    while t >= 0 {
        if rhs[t as usize].is_zero() {
            t -= 1;
            continue;
        }
        let e = base + t - dt;
        if e < lo {
            return None;
        }
        let (q, rem) = rhs[t as usize].div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        for &(kk, dk) in &onz {
            let idx = (kk + 1 + e - base) as usize;
            rhs[idx] -= &q * dk;
        }
        quot.push((e, q));
        t -= 1;
    }
    Some(LaurentPoly::from_terms(quot.into_iter().map(|(e, q)| (e, Rational::from_integer(q)))))
}

static SHARED: OnceLock<Mutex<OhyamaTable>> = OnceLock::new();

/// Process-wide table. Its cache directory is taken from `PD7KIT_CACHE_DIR`
/// on first use unless [`init_shared`] ran earlier.
pub fn shared() -> &'static Mutex<OhyamaTable> {
    SHARED.get_or_init(|| {
        let t = match std::env::var_os("PD7KIT_CACHE_DIR") {
            Some(d) => OhyamaTable::with_cache_dir(d),
            None => OhyamaTable::new(),
        };
        Mutex::new(t)
    })
}

/// Sets the cache directory of the shared table; returns false if it was already initialised.
pub fn init_shared(cache_dir: Option<PathBuf>) -> bool {
    let t = match cache_dir {
        Some(d) => OhyamaTable::with_cache_dir(d),
        None => OhyamaTable::new(),
    };
    SHARED.set(Mutex::new(t)).is_ok()
}

/// `R_n` from the shared table.
pub fn compute(n: i64) -> Result<LaurentPoly> {
    shared().lock().unwrap_or_else(|e| e.into_inner()).compute(n)
}

pub fn verify_recurrence(n: i64) -> Result<bool> {
    shared().lock().unwrap_or_else(|e| e.into_inner()).verify_recurrence(n)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn lp(t: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_ints(t.iter().copied())
    }

    #[test]
    fn listed_polynomials() {
        let mut t = OhyamaTable::new();
        assert_eq!(t.compute(2).unwrap(), lp(&[(5, 1), (3, -1)]));
        assert_eq!(t.compute(3).unwrap(), lp(&[(9, 1), (7, -4), (5, 5)]));
        assert_eq!(t.compute(-1).unwrap(), lp(&[(-1, 1)]));
        assert_eq!(t.compute(-2).unwrap(), lp(&[(-3, 1), (-1, 1)]));
        assert_eq!(t.compute(-3).unwrap(), lp(&[(0, 1), (-2, 4), (-4, 5)]));
    }

    #[test]
    fn integer_kernel_matches_rational_path() {
        let mut t = OhyamaTable::new();
        for k in [2i64, 5, 9, -2, -6] {
            let r = t.compute(k).unwrap();
            let other = t.compute(if k > 0 { k - 1 } else { k + 1 }).unwrap();
            let fast = step_integer(&r, &other, k).unwrap();
            let den = other.shift(1).scale(&Rational::from_integer(BigInt::from(2)));
            let slow = rhs_exact(&r, k).exact_divide(&den).unwrap();
            assert_eq!(fast, slow, "k = {k}");
        }
    }

    #[test]
    fn recurrence_and_mirror() {
        let mut t = OhyamaTable::new();
        for n in -6..=6 {
            assert!(t.verify_recurrence(n).unwrap(), "n = {n}");
        }
        for n in 1..=3 {
            assert!(t.mirror_holds(n).unwrap());
        }
    }

    #[test]
    fn disk_cache_roundtrip() {
        let dir = std::env::temp_dir().join(format!("pd7kit-ohyama-{}", std::process::id()));
        let mut a = OhyamaTable::with_cache_dir(&dir);
        let r6 = a.compute(6).unwrap();
        let mut b = OhyamaTable::with_cache_dir(&dir);
        assert_eq!(b.compute(6).unwrap(), r6);
        assert!(dir.join("R_6.json").exists());
        let _ = std::fs::remove_dir_all(dir);
    }
}
