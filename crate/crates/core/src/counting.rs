//! Counting functions `S_P(N,x)`, the constant `t_P(N)`, and the error term
//! `T_P(N,x)` in its fractional-sum, count-derived and Fourier forms, plus
//! the deduction identities relating different moduli.

use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::admissible::{enumerate_w, is_admissible_u64, ResiduePattern};
use crate::arith::sin_turns;
use crate::error::{Error, Result};
use crate::modulus::{
    inverse_bar, inverse_of_cofactor, reduced_instance, transported_instance, ProblemInstance,
};
use crate::spectra::Spectrum;

/// An exact evaluation point. Desk-scale values fit comfortably in `i128`.
pub type Point = Ratio<i128>;

/// Default guard for direct per-`n` counting.
pub const DIRECT_GUARD: u64 = 1_000_000_000;

/// `n + 1/2`.
pub fn half_point(n: i64) -> Point {
    Point::new(2 * n as i128 + 1, 2)
}

pub fn is_integer(x: &Point) -> bool {
    x.is_integer()
}

/// Parse `"7.5"`, `"15/2"` or `"-3"` into an exact point.
pub fn parse_point(s: &str) -> Result<Point> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a = i128::from_str(a.trim()).map_err(|_| bad())?;
        let b = i128::from_str(b.trim()).map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(Point::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) || frac.len() > 18 {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_val = if int.is_empty() || int == "-" {
            0
        } else {
            i128::from_str(int).map_err(|_| bad())?
        };
        let den = 10i128.pow(frac.len() as u32);
        let frac_val = i128::from_str(frac).map_err(|_| bad())?;
        let num = int_val.abs() * den + frac_val;
        return Ok(Point::new(if neg { -num } else { num }, den));
    }
    Ok(Point::from_integer(i128::from_str(s).map_err(|_| bad())?))
}

fn require_fraction(x: &Point) -> Result<()> {
    if x.is_integer() {
        Err(Error::IntegerPoint(x.to_string()))
    } else {
        Ok(())
    }
}

/// `δ₆(n, m)`: `1/2` when `n | 6` and `n ⊥ m`, else 0.
pub fn delta6(n: u64, m: u64) -> Point {
    if 6 % n == 0 && crate::arith::gcd(n, m) == 1 {
        Point::new(1, 2)
    } else {
        Point::zero()
    }
}

/// `t_P(N)` (1/2 iff `N_P = 1`) or, for a slice, `t_P^d(N) = δ₆(P_d, d̄N)`.
pub fn t_term(inst: &ProblemInstance, slice: Option<u64>) -> Result<Point> {
    match slice {
        None => Ok(if inst.n_p() == 1 {
            Point::new(1, 2)
        } else {
            Point::zero()
        }),
        Some(d) => {
            inst.slice_primes(d)?;
            let pd = inst.modulus().cofactor(d);
            match pd.as_u64() {
                // d̄ is a unit mod P_d, so gcd(P_d, d̄N) = gcd(P_d, N)
                Some(v) if v <= 6 => Ok(delta6(v, inst.n())),
                _ => Ok(Point::zero()),
            }
        }
    }
}

/// Count of admissible `n ∈ [1, x]` by testing each `n`.
pub fn count_s_direct(inst: &ProblemInstance, x: &Point, slice: Option<u64>) -> Result<u64> {
    if *x < Point::zero() {
        return Err(Error::Invalid("x must be nonnegative".into()));
    }
    let top = x.floor().to_integer() as u64;
    if top > DIRECT_GUARD {
        return Err(Error::SizeGuard {
            what: "direct count range",
            size: top.to_string(),
            limit: DIRECT_GUARD,
        });
    }
    let mut count = 0;
    for n in 1..=top {
        if is_admissible_u64(inst, n, slice)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Desk-scale counting over an enumerated residue pattern. `S` and `T` are
/// evaluated in `O(log |W|)` and `O(|W|)` respectively.
#[derive(Clone, Debug)]
pub struct Counter {
    pattern: ResiduePattern,
    period: i128,
}

impl Counter {
    pub fn new(inst: &ProblemInstance) -> Result<Self> {
        let pattern = enumerate_w(inst)?;
        let period = pattern.modulus as i128;
        Ok(Self { pattern, period })
    }

    pub fn instance(&self) -> &ProblemInstance {
        &self.pattern.instance
    }

    pub fn pattern(&self) -> &ResiduePattern {
        &self.pattern
    }

    fn members(&self, slice: Option<u64>) -> Result<&[u64]> {
        match slice {
            None => Ok(&self.pattern.members),
            Some(d) => {
                self.instance().slice_primes(d)?;
                Ok(self.pattern.slice(d))
            }
        }
    }

    /// `|W|` or `|W^d|`.
    pub fn size(&self, slice: Option<u64>) -> Result<u64> {
        Ok(self.members(slice)?.len() as u64)
    }

    /// `S(x)` extended periodically to every real `x`:
    /// `S(qP + r) = q·|W| + #{m ∈ W : m ≤ r}` for `0 ≤ r < P`.
    pub fn s_extended(&self, x: &Point, slice: Option<u64>) -> Result<i128> {
        let members = self.members(slice)?;
        let fl = x.floor().to_integer();
        let q = fl.div_euclid(self.period);
        let r = fl.rem_euclid(self.period) as u64;
        let below = members.partition_point(|&m| m <= r) as i128;
        Ok(q * members.len() as i128 + below)
    }

    /// `S_P(N,x)` (or `S_P^d`) for `x ≥ 0`.
    pub fn count_s(&self, x: &Point, slice: Option<u64>) -> Result<u64> {
        if *x < Point::zero() {
            return Err(Error::Invalid("x must be nonnegative".into()));
        }
        Ok(self.s_extended(x, slice)? as u64)
    }

    pub fn t_term(&self, slice: Option<u64>) -> Result<Point> {
        t_term(self.instance(), slice)
    }

    /// `|W|·x/P`.
    pub fn linear_term(&self, x: &Point, slice: Option<u64>) -> Result<Point> {
        Ok(x * Point::from_integer(self.size(slice)? as i128) / Point::from_integer(self.period))
    }

    /// `T = Σ_{n∈W} ({(x-n)/P} - 1/2)`, exactly.
    pub fn t_fracsum(&self, x: &Point, slice: Option<u64>) -> Result<Point> {
        require_fraction(x)?;
        let members = self.members(slice)?;
        let (a, b) = (*x.numer(), *x.denom());
        let den = b * self.period;
        let mut acc: i128 = 0;
        for &n in members {
            acc += (a - n as i128 * b).rem_euclid(den);
        }
        Ok(Point::new(2 * acc - members.len() as i128 * den, 2 * den))
    }

    /// `T = |W|x/P - t - S(x)`, from the periodic count.
    pub fn t_from_counts(&self, x: &Point, slice: Option<u64>) -> Result<Point> {
        let s = Point::from_integer(self.s_extended(x, slice)?);
        Ok(self.linear_term(x, slice)? - self.t_term(slice)? - s)
    }

    /// Partial Fourier sum `-Σ_{k=1}^{K} C(k) sin(2kπx/P) / (kπ)`.
    pub fn t_fourier(&self, x: &Point, terms: u64, slice: Option<u64>) -> Result<f64> {
        error_t_fourier(self.instance(), x, terms, slice)
    }
}

/// Admissibility of every `n ∈ [0, top]` (index 0 is always false), found by
/// striking `n ≡ ±N (mod q)` for every prime `q | P`.
pub fn sieve_admissible(inst: &ProblemInstance, top: u64) -> Result<Vec<bool>> {
    if top > DIRECT_GUARD {
        return Err(Error::SizeGuard {
            what: "sieve range",
            size: top.to_string(),
            limit: DIRECT_GUARD,
        });
    }
    let mut ok = vec![true; top as usize + 1];
    ok[0] = false;
    let n = inst.n();
    for &q in inst.modulus().factors() {
        let nq = n % q;
        for start in [nq, (q - nq) % q] {
            let mut v = if start == 0 { q } else { start };
            while v <= top {
                ok[v as usize] = false;
                v += q;
            }
        }
    }
    Ok(ok)
}

/// `S_P(N, top)` via [`sieve_admissible`]; works for any size of `P`.
pub fn sieve_count(inst: &ProblemInstance, top: u64) -> Result<u64> {
    Ok(sieve_admissible(inst, top)?.iter().filter(|&&b| b).count() as u64)
}

/// `S_P(N,x)`: by pattern when `P` is enumerable, otherwise by direct scan.
pub fn count_s(inst: &ProblemInstance, x: &Point, slice: Option<u64>) -> Result<u64> {
    match Counter::new(inst) {
        Ok(c) => c.count_s(x, slice),
        Err(Error::SizeGuard { .. }) => count_s_direct(inst, x, slice),
        Err(e) => Err(e),
    }
}

pub fn error_t_fracsum(inst: &ProblemInstance, x: &Point, slice: Option<u64>) -> Result<Point> {
    Counter::new(inst)?.t_fracsum(x, slice)
}

/// `T = |W|x/P - t - S` with `S` counted directly (any size of `P`).
pub fn error_t_from_counts(
    inst: &ProblemInstance,
    x: &Point,
    slice: Option<u64>,
) -> Result<num_rational::BigRational> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let size = match slice {
        None => crate::admissible::size_w(inst),
        Some(d) => crate::admissible::size_w_d(inst, d)?,
    };
    let s = count_s(inst, x, slice)?;
    let xb = BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()));
    let lin = xb * BigRational::from_integer(size.into())
        / BigRational::from_integer(inst.modulus().value().clone().into());
    let t = t_term(inst, slice)?;
    let tb = BigRational::new(BigInt::from(*t.numer()), BigInt::from(*t.denom()));
    Ok(lin - tb - BigRational::from_integer(BigInt::from(s)))
}

/// Truncated Fourier form of `T` (or `T^d`) through `k = terms`.
pub fn error_t_fourier(
    inst: &ProblemInstance,
    x: &Point,
    terms: u64,
    slice: Option<u64>,
) -> Result<f64> {
    let p = inst
        .modulus()
        .as_u64()
        .ok_or_else(|| Error::Invalid("Fourier form needs P below 2^64".into()))?;
    let (a, b) = (*x.numer(), *x.denom());
    let den = b as u128 * p as u128;
    if den > u64::MAX as u128 {
        return Err(Error::Invalid("denominator of x/P too large".into()));
    }
    if a.rem_euclid(den as i128) == 0 {
        return Err(Error::IntegerPoint(format!("{x}/P")));
    }
    let den = den as u64;
    let a_mod = a.rem_euclid(den as i128) as u128;
    if let Some(d) = slice {
        inst.slice_primes(d)?;
    }
    let spectrum = Spectrum::new(inst);
    let mut acc = 0.0;
    for k in 1..=terms {
        let c = match slice {
            None => spectrum.product(k as i64),
            Some(d) => spectrum.slice_product(d, k as i64)?,
        };
        if c != 0.0 {
            acc += c * sin_turns(a_mod * k as u128, den) / (k as f64);
        }
    }
    Ok(-acc / std::f64::consts::PI)
}

/// The instance `(N, P_p)` that keeps `N` and drops `p`.
fn drop_prime(inst: &ProblemInstance, p: u64) -> Result<ProblemInstance> {
    ProblemInstance::new(inst.n(), inst.modulus().cofactor(p))
}

/// `y = N·overline(P_p)·P_p`, literally (not reduced mod `P`).
pub fn deduction_center(inst: &ProblemInstance, p: u64) -> Result<i128> {
    let inv = inverse_of_cofactor(inst.modulus(), p)? as i128;
    let cof = (inst.modulus().value() / p)
        .to_i128()
        .ok_or_else(|| Error::Invalid("P_p too large for desk evaluation".into()))?;
    Ok(inst.n() as i128 * inv * cof)
}

fn pt(v: i128) -> Point {
    Point::from_integer(v)
}

/// Both sides of the first deduction formula for `S` (`p | P_2N`, `x < y`).
pub fn deduction_s_first_sides(inst: &ProblemInstance, p: u64, x: &Point) -> Result<(i128, i128)> {
    if !inst.p_2n().has_prime(p) {
        return Err(Error::NotAPrimeFactor(p, inst.p_2n().to_string()));
    }
    require_fraction(x)?;
    let y = pt(deduction_center(inst, p)?);
    if *x >= y || *x < Point::zero() {
        return Err(Error::Invalid(format!("need 0 ≤ x < y = {y}")));
    }
    let full = Counter::new(inst)?;
    let same = Counter::new(&drop_prime(inst, p)?)?;
    let moved = Counter::new(&transported_instance(inst, p)?)?;
    let pp = pt(p as i128);
    let lhs = full.s_extended(x, None)?;
    let rhs = same.s_extended(x, None)? - moved.s_extended(&((y + x) / pp), None)?
        + moved.s_extended(&((y - x) / pp), None)?;
    Ok((lhs, rhs))
}

pub fn deduction_check_s_first(inst: &ProblemInstance, p: u64, x: &Point) -> Result<bool> {
    let (l, r) = deduction_s_first_sides(inst, p, x)?;
    Ok(l == r)
}

/// Which deduction formula for `T` to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Deduction {
    /// `p | P_2N`: `T = T_{P_p}(N,x) - T_{P_p}(p̄N,(y+x)/p) + T_{P_p}(p̄N,(y-x)/p)`.
    First { p: u64 },
    /// `p | P_6N`, `d | P_6pN`:
    /// `T^d = T^d_{P_p}(N,x) - T^{dp}(x) - T^{dp}(y+x) + T^{dp}(y-x)`.
    FirstSlice { p: u64, d: u64 },
    /// `p | N_P`: `T = T_{P_p}(N,x) - T_{P_p}(p̄N, x/p)`.
    Second { p: u64 },
    /// `p | N_P`, `d | P_6N`: the same relation slice by slice.
    SecondSlice { p: u64, d: u64 },
    /// `T_P(N,x) = T_{P_c}(c̄N, x/c)`, optionally for a slice `d`.
    Third { d: Option<u64> },
}

/// Both sides of a deduction formula for `T`, all terms by exact fractional
/// sums.
pub fn deduction_t_sides(
    inst: &ProblemInstance,
    variant: Deduction,
    x: &Point,
) -> Result<(Point, Point)> {
    require_fraction(x)?;
    let full = Counter::new(inst)?;
    match variant {
        Deduction::First { p } => {
            if !inst.p_2n().has_prime(p) {
                return Err(Error::NotAPrimeFactor(p, inst.p_2n().to_string()));
            }
            let y = pt(deduction_center(inst, p)?);
            let same = Counter::new(&drop_prime(inst, p)?)?;
            let moved = Counter::new(&transported_instance(inst, p)?)?;
            let pp = pt(p as i128);
            let lhs = full.t_fracsum(x, None)?;
            let rhs = same.t_fracsum(x, None)? - moved.t_fracsum(&((y + x) / pp), None)?
                + moved.t_fracsum(&((y - x) / pp), None)?;
            Ok((lhs, rhs))
        }
        Deduction::FirstSlice { p, d } => {
            if !inst.p_6n().has_prime(p) {
                return Err(Error::NotAPrimeFactor(p, inst.p_6n().to_string()));
            }
            if d % p == 0 {
                return Err(Error::Invalid(format!("slice {d} must not contain {p}")));
            }
            inst.slice_primes(d)?;
            let y = pt(deduction_center(inst, p)?);
            let same = Counter::new(&drop_prime(inst, p)?)?;
            let dp = Some(d * p);
            let lhs = full.t_fracsum(x, Some(d))?;
            let rhs = same.t_fracsum(x, Some(d))?
                - full.t_fracsum(x, dp)?
                - full.t_fracsum(&(y + x), dp)?
                + full.t_fracsum(&(y - x), dp)?;
            Ok((lhs, rhs))
        }
        Deduction::Second { p } | Deduction::SecondSlice { p, .. } => {
            if inst.n_p() % p != 0 || !inst.modulus().has_prime(p) {
                return Err(Error::NotAPrimeFactor(p, format!("N_P = {}", inst.n_p())));
            }
            let slice = match variant {
                Deduction::SecondSlice { d, .. } => {
                    inst.slice_primes(d)?;
                    Some(d)
                }
                _ => None,
            };
            let same = Counter::new(&drop_prime(inst, p)?)?;
            let moved = Counter::new(&transported_instance(inst, p)?)?;
            let lhs = full.t_fracsum(x, slice)?;
            let rhs = same.t_fracsum(x, slice)? - moved.t_fracsum(&(x / pt(p as i128)), slice)?;
            Ok((lhs, rhs))
        }
        Deduction::Third { d } => {
            let c = inst.index();
            if let Some(d) = d {
                inst.slice_primes(d)?;
            }
            let cbar = inverse_bar(inst.modulus(), c)?;
            let moved = reduced_instance(&(cbar * inst.n()), inst.modulus().cofactor(c))?;
            let lhs = full.t_fracsum(x, d)?;
            let rhs = Counter::new(&moved)?.t_fracsum(&(x / pt(c as i128)), d)?;
            Ok((lhs, rhs))
        }
    }
}

pub fn deduction_check_t(inst: &ProblemInstance, variant: Deduction, x: &Point) -> Result<bool> {
    let (l, r) = deduction_t_sides(inst, variant, x)?;
    Ok(l == r)
}

/// `S_{P_d}^1 + S_{P_p}^1 - S_P^1` and `S_{P_dp}^1` at `x`, together with the
/// number of `n ≤ x` in `W_{P_dp}^1` excluded both by a prime of `d` and by
/// `p`. The first value plus the third equals the second.
pub fn inclusion_exclusion_terms(
    inst: &ProblemInstance,
    p: u64,
    d: u64,
    x: &Point,
) -> Result<(i128, i128, i128)> {
    if !inst.p_6n().has_prime(p) || d % p == 0 {
        return Err(Error::Invalid(format!("need p | P_6N and p ∤ d (p={p}, d={d})")));
    }
    inst.slice_primes(d)?;
    let m = inst.modulus();
    let with = |modulus| -> Result<Counter> { Counter::new(&ProblemInstance::new(inst.n(), modulus)?) };
    let full = with(m.clone())?;
    let drop_d = with(m.cofactor(d))?;
    let drop_p = with(m.cofactor(p))?;
    let drop_dp = with(m.cofactor(d * p))?;
    let combined = drop_d.s_extended(x, Some(1))? + drop_p.s_extended(x, Some(1))?
        - full.s_extended(x, Some(1))?;
    let outer = drop_dp.s_extended(x, Some(1))?;
    // n fails at q when n ≡ ±N (mod q), or q | n for the slice-1 condition
    let n = inst.n();
    let fails_at = |q: u64, v: u64| {
        let (r, nq) = (v % q, n % q);
        r == nq || (r + nq) % q == 0 || r == 0
    };
    let d_primes: Vec<u64> = m.factors().iter().copied().filter(|q| d % q == 0).collect();
    let top = x.floor().to_integer().max(0) as u64;
    let period = drop_dp.period as u64;
    let mut both = 0i128;
    for v in 1..=top {
        if drop_dp.pattern().slice(1).binary_search(&((v - 1) % period + 1)).is_ok()
            && fails_at(p, v)
            && d_primes.iter().any(|&q| fails_at(q, v))
        {
            both += 1;
        }
    }
    Ok((combined, outer, both))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: u64, p: u64) -> ProblemInstance {
        ProblemInstance::from_values(n, p).unwrap()
    }

    fn q(a: i128, b: i128) -> Point {
        Point::new(a, b)
    }

    #[test]
    fn parse_points() {
        assert_eq!(parse_point("7.5").unwrap(), q(15, 2));
        assert_eq!(parse_point("15/2").unwrap(), q(15, 2));
        assert_eq!(parse_point("-3").unwrap(), q(-3, 1));
        assert_eq!(parse_point("-0.25").unwrap(), q(-1, 4));
        assert!(parse_point("x").is_err());
        assert!(parse_point("1/0").is_err());
    }

    #[test]
    fn count_examples() {
        let i = inst(4, 15);
        assert_eq!(count_s(&i, &q(15, 2), None).unwrap(), 1);
        assert_eq!(count_s(&i, &q(41, 2), None).unwrap(), 4);
        assert_eq!(count_s(&i, &q(1, 2), None).unwrap(), 0);
        assert_eq!(count_s_direct(&i, &q(41, 2), None).unwrap(), 4);
    }

    #[test]
    fn t_examples() {
        assert_eq!(t_term(&inst(4, 15), None).unwrap(), q(1, 2));
        assert_eq!(t_term(&inst(5, 15), None).unwrap(), q(0, 1));
        assert_eq!(t_term(&inst(4, 15), Some(5)).unwrap(), q(1, 2));
        assert_eq!(t_term(&inst(4, 15), Some(1)).unwrap(), q(0, 1));
    }

    #[test]
    fn sieve_matches_direct() {
        for (n, p) in [(4u64, 15u64), (7, 210), (100, 30030)] {
            let i = inst(n, p);
            let ok = sieve_admissible(&i, 500).unwrap();
            for v in 1..=500u64 {
                assert_eq!(ok[v as usize], is_admissible_u64(&i, v, None).unwrap());
            }
        }
        assert_eq!(sieve_count(&inst(4, 15), 20).unwrap(), 4);
    }

    #[test]
    fn error_term_examples() {
        let c = Counter::new(&inst(4, 15)).unwrap();
        assert_eq!(c.t_fracsum(&q(15, 2), None).unwrap(), q(0, 1));
        assert_eq!(c.t_fracsum(&q(45, 2), None).unwrap(), q(0, 1));
        assert_eq!(c.t_fracsum(&q(41, 2), None).unwrap(), q(-2, 5));
        assert!(c.t_fracsum(&q(7, 1), None).is_err());
        assert_eq!(c.t_from_counts(&q(15, 2), None).unwrap(), q(0, 1));
        assert_eq!(c.t_from_counts(&q(1, 2), None).unwrap(), q(-2, 5));
        let one = Counter::new(&inst(1, 1)).unwrap();
        assert_eq!(one.t_from_counts(&q(5, 2), None).unwrap(), q(0, 1));
    }

    #[test]
    fn fourier_converges() {
        let i = inst(4, 15);
        let a = error_t_fourier(&i, &q(15, 2), 100_000, None).unwrap();
        assert!(a.abs() < 1e-3, "{a}");
        let b = error_t_fourier(&i, &q(41, 2), 100_000, None).unwrap();
        assert!((b + 0.4).abs() < 1e-3, "{b}");
        let c = error_t_fourier(&i, &q(41 + 30, 2), 1000, None).unwrap();
        assert_eq!(error_t_fourier(&i, &q(41, 2), 1000, None).unwrap(), c);
    }

    #[test]
    fn counting_formula_and_slices() {
        for (n, p) in [(4u64, 15u64), (7, 210), (10, 2310), (1, 1), (9, 30)] {
            let i = inst(n, p);
            let c = Counter::new(&i).unwrap();
            let slices: Vec<u64> = i.p_6n().divisors();
            for h in 0..(3 * p as i64) {
                let x = half_point(h);
                let t = c.t_fracsum(&x, None).unwrap();
                assert_eq!(t, c.t_from_counts(&x, None).unwrap());
                let total: i128 = slices.iter().map(|&d| c.s_extended(&x, Some(d)).unwrap()).sum();
                assert_eq!(total, c.s_extended(&x, None).unwrap());
                for &d in &slices {
                    let td = c.t_fracsum(&x, Some(d)).unwrap();
                    assert_eq!(td, c.t_from_counts(&x, Some(d)).unwrap(), "N={n} P={p} d={d} x={x}");
                }
            }
        }
    }

    #[test]
    fn deduction_examples() {
        let i = inst(4, 15);
        assert!(deduction_check_s_first(&i, 5, &q(15, 2)).unwrap());
        assert!(deduction_check_s_first(&i, 5, &q(1, 2)).unwrap());
        assert!(deduction_check_s_first(&inst(3, 10), 5, &q(5, 2)).unwrap());
        assert!(deduction_check_t(&i, Deduction::First { p: 5 }, &q(15, 2)).unwrap());
        assert!(deduction_check_t(&inst(5, 15), Deduction::Second { p: 5 }, &q(9, 2)).unwrap());
        assert!(deduction_check_t(&i, Deduction::Third { d: None }, &q(15, 2)).unwrap());
        assert!(deduction_check_t(&i, Deduction::FirstSlice { p: 5, d: 1 }, &q(15, 2)).unwrap());
        assert!(deduction_check_t(&i, Deduction::First { p: 3 }, &q(15, 2)).is_ok());
        assert!(deduction_check_t(&i, Deduction::Second { p: 5 }, &q(15, 2)).is_err());
    }
}
