//! Densities `ω_P(N) = |W|/P` and `ω_P^d(N)`, the constants `C1`, `C2`,
//! `C3`, the threshold inequalities behind `N₀ = 312`, and the empirical
//! error ratio `T/S`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::admissible::{size_w, size_w_d};
use crate::arith::prime_factors;
use crate::error::{Error, Result};
use crate::modulus::{goldbach_modulus, ProblemInstance};
use crate::primes::PrimeTable;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// An exact density together with its floating-point value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityValue {
    #[serde(with = "crate::report::ratio_string")]
    pub exact: BigRational,
    pub approx: f64,
}

impl DensityValue {
    fn new(exact: BigRational) -> Self {
        let approx = ratio_to_f64(&exact);
        Self { exact, approx }
    }
}

/// A big rational as `f64`, robust to numerators beyond the `f64` range.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let shift = |v: &BigInt| v.bits().saturating_sub(60);
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (shift(n), shift(d));
    let nf = (n >> sn).to_f64().unwrap_or(0.0);
    let df = (d >> sd).to_f64().unwrap_or(1.0);
    nf / df * 2f64.powi(sn as i32 - sd as i32)
}

/// `num / den` as a big rational.
pub fn big_ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn frac(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// `ω_P(N) = |W|/P`, or `ω_P^d(N) = |W^d|/P` for a slice.
pub fn omega(inst: &ProblemInstance, slice: Option<u64>) -> Result<DensityValue> {
    let size = match slice {
        None => size_w(inst),
        Some(d) => size_w_d(inst, d)?,
    };
    Ok(DensityValue::new(big_ratio(size, inst.modulus().value().clone())))
}

/// The product form `(1/c') ∏_{p|N_P} (1-1/p) ∏_{p|P_2N} (1-2/p)`, or for a
/// slice `(1/(cd)) ∏_{p|N_P} (1-1/p) ∏_{p|P_6dN} (1-3/p)`.
pub fn omega_product(inst: &ProblemInstance, slice: Option<u64>) -> Result<BigRational> {
    let mut acc = BigRational::one();
    for p in inst.n_p_primes() {
        acc *= frac(p as i64 - 1, p as i64);
    }
    match slice {
        None => {
            acc /= BigRational::from_integer(inst.index_2().into());
            for &p in inst.p_2n().factors() {
                acc *= frac(p as i64 - 2, p as i64);
            }
        }
        Some(d) => {
            inst.slice_primes(d)?;
            acc /= BigRational::from_integer((inst.index() * d).into());
            for &p in inst.p_6dn(d).factors() {
                acc *= frac(p as i64 - 3, p as i64);
            }
        }
    }
    Ok(acc)
}

/// `2 ∏_{3≤p≤z} (p-2)p/(p-1)² · ∏_{p|N, 3≤p≤z} (p-1)/(p-2) · ∏_{p≤z} (1-1/p)²`
/// for `P` = primorial(`z`).
pub fn omega_rewritten(n: u64, z: u64) -> BigRational {
    let table = PrimeTable::shared(z.max(2));
    let mut acc = frac(2, 1);
    for &p in table.up_to(z) {
        let p = p as i64;
        if p >= 3 {
            acc *= frac((p - 2) * p, (p - 1) * (p - 1));
            if n % p as u64 == 0 {
                acc *= frac(p - 1, p - 2);
            }
        }
        acc *= frac((p - 1) * (p - 1), p * p);
    }
    acc
}

/// `(9/2) ∏_{5≤p≤z} (p-3)p²/(p-1)³ · 2^{[3|N]} ∏_{p|N, 5≤p≤z} (p-1)/(p-3) · ∏_{p≤z} (1-1/p)³`.
/// Valid for `z ≥ 3`, where `gcd(NP, 6) = 6`.
pub fn omega1_rewritten(n: u64, z: u64) -> BigRational {
    let table = PrimeTable::shared(z.max(2));
    let mut acc = frac(9, 2);
    if n % 3 == 0 {
        acc *= frac(2, 1);
    }
    for &p in table.up_to(z) {
        let p = p as i64;
        if p >= 5 {
            acc *= frac((p - 3) * p * p, (p - 1) * (p - 1) * (p - 1));
            if n % p as u64 == 0 {
                acc *= frac(p - 1, p - 3);
            }
        }
        acc *= frac((p - 1) * (p - 1) * (p - 1), p * p * p);
    }
    acc
}

/// `d_N = ∏_{p|N, p≥3} (p-1)/(p-2)`.
pub fn d_n(n: u64) -> BigRational {
    prime_factors(n)
        .into_iter()
        .filter(|&p| p >= 3)
        .fold(BigRational::one(), |acc, p| acc * frac(p as i64 - 1, p as i64 - 2))
}

/// `d_N' = 2^{[3|N]} ∏_{p|N, p≥5} (p-1)/(p-3)`.
pub fn d_n_prime(n: u64) -> BigRational {
    let base = if n % 3 == 0 { frac(2, 1) } else { BigRational::one() };
    prime_factors(n)
        .into_iter()
        .filter(|&p| p >= 5)
        .fold(base, |acc, p| acc * frac(p as i64 - 1, p as i64 - 3))
}

/// Constants computed from primes up to a cutoff.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticConstants {
    pub z: u64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Bound on `|log(C/partial)|` for both partial products.
    pub tail_bound: f64,
    pub c2_lower: f64,
    pub c3_lower: f64,
    pub d_n: Option<f64>,
    pub d_n_prime: Option<f64>,
    pub hl_ratio: f64,
}

/// `(8/C1² - 2)/2`.
pub fn hl_ratio() -> f64 {
    let c1 = EULER_GAMMA.exp();
    (8.0 / (c1 * c1) - 2.0) / 2.0
}

/// Bound on the log-tail `Σ_{p>z} -log(1 - u_p)` with `u_p ≤ 3.1/p²` past
/// the cutoff; `Σ_{p>z} p⁻² < 1.3/(z log z)` for `z ≥ 17`.
pub fn tail_bound(z: u64) -> f64 {
    let z = z.max(17) as f64;
    4.0 / (z * z.ln())
}

pub fn constants(z: u64, n: Option<u64>) -> Result<AsymptoticConstants> {
    if z < 5 {
        return Err(Error::Invalid("cutoff z must be at least 5".into()));
    }
    let table = PrimeTable::shared(z);
    let mut log_c2 = 0.0f64;
    let mut log_c3 = 0.0f64;
    for &p in table.up_to(z) {
        let pf = p as f64;
        if p >= 3 {
            // log(p(p-2)/(p-1)²) = log(1 - 1/(p-1)²)
            log_c2 += (-1.0 / ((pf - 1.0) * (pf - 1.0))).ln_1p();
        }
        if p >= 5 {
            // log((p-3)p²/(p-1)³) = log(1 - (3p-1)/(p-1)³)
            log_c3 += (-(3.0 * pf - 1.0) / ((pf - 1.0).powi(3))).ln_1p();
        }
    }
    let tail = tail_bound(z);
    let (c2, c3) = (log_c2.exp(), log_c3.exp());
    Ok(AsymptoticConstants {
        z,
        c1: EULER_GAMMA.exp(),
        c2,
        c3,
        tail_bound: tail,
        c2_lower: c2 * (-tail).exp(),
        c3_lower: c3 * (-tail).exp(),
        d_n: n.map(|n| ratio_to_f64(&d_n(n))),
        d_n_prime: n.map(|n| ratio_to_f64(&d_n_prime(n))),
        hl_ratio: hl_ratio(),
    })
}

/// `log z · ∏_{p≤z} (1 - 1/p)`, which tends to `e^{-γ}`.
pub fn mertens_partial(z: u64) -> Result<f64> {
    if z < 2 {
        return Err(Error::Invalid("z must be at least 2".into()));
    }
    let table = PrimeTable::shared(z);
    let log_prod: f64 = table
        .up_to(z)
        .iter()
        .map(|&p| (-1.0 / p as f64).ln_1p())
        .sum();
    Ok((z as f64).ln() * log_prod.exp())
}

/// `#N`, the number of distinct prime factors.
pub fn num_prime_factors(n: u64) -> u32 {
    prime_factors(n).len() as u32
}

/// The two threshold inequalities `(N-2)ω¹ > 2^{#N-1}` and `Nω¹ > 4` with
/// `P` = primorial(√(2N)), by exact cross-multiplication.
pub fn threshold_check(n: u64) -> Result<(bool, bool)> {
    if n < 2 {
        return Err(Error::Invalid("N must be at least 2".into()));
    }
    let inst = ProblemInstance::new(n, goldbach_modulus(n))?;
    let w1 = size_w_d(&inst, 1)?;
    let p = inst.modulus().value();
    // (N-2)|W¹|/P > 2^{#N-1}  ⇔  2(N-2)|W¹| > 2^{#N} P
    let lhs1 = &w1 * BigUint::from(2 * (n - 2));
    let rhs1 = p << num_prime_factors(n) as usize;
    let lhs2 = &w1 * BigUint::from(n);
    let rhs2 = p * 4u32;
    Ok((lhs1 > rhs1, lhs2 > rhs2))
}

/// Everything needed for the empirical error ratio at `x = N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRatio {
    pub n: u64,
    pub s: u64,
    #[serde(with = "crate::report::ratio_string")]
    pub ratio: BigRational,
    pub approx: f64,
}

/// `(ω_P(N)·N - t - S_P(N,N)) / S_P(N,N)` with `P` = primorial(√(2N)).
pub fn hl_ratio_empirical(n: u64) -> Result<ErrorRatio> {
    let inst = ProblemInstance::goldbach(n)?;
    let s = crate::counting::sieve_count(&inst, n)?;
    if s == 0 {
        return Err(Error::Invalid(format!("S_P(N,N) = 0 at N = {n}")));
    }
    let omega = omega(&inst, None)?.exact;
    let t = crate::counting::t_term(&inst, None)?;
    let t = BigRational::new(BigInt::from(*t.numer()), BigInt::from(*t.denom()));
    let s_big = BigRational::from_integer(BigInt::from(s));
    let ratio = (omega * BigRational::from_integer(BigInt::from(n)) - t - &s_big) / s_big;
    let approx = ratio_to_f64(&ratio);
    Ok(ErrorRatio {
        n,
        s,
        ratio,
        approx,
    })
}
