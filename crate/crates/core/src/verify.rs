//! Seeded invariant suites, one per module, reporting per-check tallies.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::admissible::{
    enumerate_w, factor_sum_identity_check, is_admissible_u64, momentum_check, random_assignment,
    size_w, size_w_d,
};
use crate::arith::{gcd, is_squarefree};
use crate::counting::{
    count_s_direct, deduction_center, deduction_check_s_first, deduction_check_t, half_point,
    Counter, Deduction, Point,
};
use crate::density::{constants, omega, omega1_rewritten, omega_product, omega_rewritten, threshold_check};
use crate::error::{Error, Result};
use crate::modset::{offset_reflection_check, ModuloSet, MAX_PRIMES};
use crate::modulus::{primorial_upto, ProblemInstance, SquareFreeModulus};
use crate::spectra::{
    slice_spectrum_deduction_check, slice_spectrum_direct, slice_transport_check,
    spectrum_deduction_check, spectrum_direct, spectrum_second_deduction_check, Spectrum,
};
use crate::window::window_offsets;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Sets,
    Modset,
    Spectra,
    Counting,
    Deduction,
    Density,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Sets,
        Suite::Modset,
        Suite::Spectra,
        Suite::Counting,
        Suite::Deduction,
        Suite::Density,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sets => "sets",
            Suite::Modset => "modset",
            Suite::Spectra => "spectra",
            Suite::Counting => "counting",
            Suite::Deduction => "deduction",
            Suite::Density => "density",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub max_p: u64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_p: 2310,
            samples: 40,
            seed: 42,
        }
    }
}

/// Tally for one named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    pub fn ok(&self) -> bool {
        self.failed == 0 && self.passed > 0
    }
}

#[derive(Default)]
struct Recorder {
    checks: Vec<CheckOutcome>,
}

impl Recorder {
    fn check(&mut self, name: &str, ok: bool, context: impl FnOnce() -> String) {
        let idx = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(CheckOutcome {
                    name: name.to_string(),
                    passed: 0,
                    failed: 0,
                    first_failure: None,
                });
                self.checks.len() - 1
            }
        };
        let c = &mut self.checks[idx];
        if ok {
            c.passed += 1;
        } else {
            c.failed += 1;
            c.first_failure.get_or_insert_with(context);
        }
    }
}

fn random_squarefree(rng: &mut ChaCha8Rng, max_p: u64, max_primes: usize) -> Result<SquareFreeModulus> {
    loop {
        let v = rng.gen_range(1..=max_p);
        if is_squarefree(v) {
            let m = SquareFreeModulus::from_u64(v)?;
            if m.num_factors() <= max_primes {
                return Ok(m);
            }
        }
    }
}

/// The worked instance `(4, 15)` followed by seeded samples with `N <= 100`.
fn instances(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, max_primes: usize) -> Result<Vec<ProblemInstance>> {
    let mut out = vec![ProblemInstance::from_values(4, 15)?];
    for _ in 0..cfg.samples {
        let m = random_squarefree(rng, cfg.max_p.max(1), max_primes)?;
        out.push(ProblemInstance::new(rng.gen_range(1..=100), m)?);
    }
    Ok(out)
}

fn tag(i: &ProblemInstance) -> String {
    format!("N={} P={}", i.n(), i.modulus().value())
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-9 * scale.max(1.0)
}

/// Run one suite.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rec = Recorder::default();
    match suite {
        Suite::Sets => sets(cfg, &mut rng, &mut rec)?,
        Suite::Modset => modset(cfg, &mut rng, &mut rec)?,
        Suite::Spectra => spectra(cfg, &mut rng, &mut rec)?,
        Suite::Counting => counting(cfg, &mut rng, &mut rec)?,
        Suite::Deduction => deduction(cfg, &mut rng, &mut rec)?,
        Suite::Density => density(cfg, &mut rng, &mut rec)?,
    }
    Ok(rec.checks)
}

fn sets(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    for i in instances(cfg, rng, usize::MAX)? {
        let p = i.desk_modulus(u64::MAX)?;
        let n = i.n();
        let brute: Vec<u64> = (1..=p)
            .filter(|&m| {
                let (a, b) = ((n as i64 - m as i64).unsigned_abs(), n + m);
                gcd(a % p, p) == 1 && gcd(b % p, p) == 1
            })
            .collect();
        let pattern = enumerate_w(&i)?;
        rec.check("membership", pattern.members == brute, || tag(&i));
        rec.check("size_W", size_w(&i) == BigUint::from(brute.len()), || tag(&i));
        for d in i.p_6n().divisors() {
            let got = size_w_d(&i, d)?;
            rec.check("size_W_d", got == BigUint::from(pattern.slice(d).len()), || {
                format!("{} d={d}", tag(&i))
            });
            rec.check("slice divisibility", pattern.slice(d).iter().all(|m| m % (i.index() * d) == 0), || {
                format!("{} d={d}", tag(&i))
            });
        }
        let h = random_assignment(i.modulus(), rng);
        rec.check("factor-sum identity", factor_sum_identity_check(i.modulus(), &h)?, || tag(&i));
        let f = random_assignment(i.modulus(), rng);
        rec.check("momentum identity", momentum_check(&i, &f)?, || tag(&i));
    }
    Ok(())
}

fn modset(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    for i in instances(cfg, rng, MAX_PRIMES)? {
        let q = ModuloSet::new(&i)?;
        let p = i.desk_modulus(u64::MAX)?;
        let mut units_ok = true;
        for n in 1..=p {
            let want = i64::from(is_admissible_u64(&i, n, None)?);
            units_ok &= q.unit_value(n) == want;
        }
        rec.check("unit value = admissibility", units_ok, || tag(&i));
        for pair in q.pairs.iter() {
            rec.check("offset reflection", offset_reflection_check(&i, pair.a, pair.b)?, || {
                format!("{} a={} b={}", tag(&i), pair.a, pair.b)
            });
        }
        for d in i.modulus().divisors() {
            let k = d * rng.gen_range(1..=3u64);
            rec.check("Q_d cosine product", q.qd_cosine_product_check(d, k)?, || {
                format!("{} d={d} k={k}", tag(&i))
            });
        }
        let table: Vec<i64> = (0..64).map(|_| rng.gen_range(-10..=10)).collect();
        let f = |m: u64, l: u64| table[((m * 31 + l * 7) % 64) as usize];
        let (l, r) = q.collapse_sides(f);
        rec.check("Q_d collapse", l == r, || tag(&i));
        for _ in 0..4 {
            let x = rng.gen_range(0.0..(2.0 * p as f64));
            let s = rng.gen_range(0.05..3.0);
            if let Ok(e) = q.sum_sieve(x, s, 1e-6) {
                let direct = q.sum_sieve_direct(x, s)?;
                rec.check("sum-sieve equation", (e - direct).norm() <= 1e-8 * (1.0 + x), || {
                    format!("{} x={x} s={s}", tag(&i))
                });
            }
        }
    }
    Ok(())
}

fn spectra(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    for i in instances(cfg, rng, usize::MAX)? {
        let p = i.desk_modulus(u64::MAX)?;
        let spectrum = Spectrum::new(&i);
        let w = size_w(&i).try_into().unwrap_or(u64::MAX) as f64;
        for _ in 0..12 {
            let k = rng.gen_range(1..=p as i64);
            let (a, b) = (spectrum.product(k), spectrum_direct(&i, k)?);
            rec.check("product = direct", close(a, b, w), || format!("{} k={k}", tag(&i)));
            rec.check("P_2N and P_6N forms", close(spectrum.product_p2n(k), a, w), || {
                format!("{} k={k}", tag(&i))
            });
            let mut total = 0.0;
            for d in i.p_6n().divisors() {
                let s = spectrum.slice_product(d, k)?;
                rec.check("slice product = direct", close(s, slice_spectrum_direct(&i, d, k)?, w), || {
                    format!("{} d={d} k={k}", tag(&i))
                });
                rec.check("slice transport", slice_transport_check(&i, d, k)?, || {
                    format!("{} d={d} k={k}", tag(&i))
                });
                total += s;
            }
            rec.check("slice decomposition", close(total, a, w), || format!("{} k={k}", tag(&i)));
            for &q in i.p_2n().factors() {
                rec.check("first spectral deduction", spectrum_deduction_check(&i, q, k)?, || {
                    format!("{} p={q} k={k}", tag(&i))
                });
            }
            for &q in i.p_6n().factors() {
                for d in i.p_6n().cofactor(q).divisors() {
                    rec.check("slice spectral deduction", slice_spectrum_deduction_check(&i, d, q, k)?, || {
                        format!("{} p={q} d={d} k={k}", tag(&i))
                    });
                }
            }
            for q in i.n_p_primes().collect::<Vec<_>>() {
                rec.check("second spectral deduction", spectrum_second_deduction_check(&i, q, k)?, || {
                    format!("{} p={q} k={k}", tag(&i))
                });
            }
        }
        let full = spectrum.product(p as i64);
        rec.check("k = P gives |W|", close(full, w, w), || tag(&i));
    }
    Ok(())
}

fn counting(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    for i in instances(cfg, rng, usize::MAX)? {
        let c = Counter::new(&i)?;
        let p = i.desk_modulus(u64::MAX)?;
        for _ in 0..30 {
            let x = half_point(rng.gen_range(0..3 * p as i64));
            let s = Point::from_integer(c.count_s(&x, None)? as i128);
            let t = c.t_fracsum(&x, None)?;
            rec.check("counting formula", s == c.linear_term(&x, None)? - c.t_term(None)? - t, || {
                format!("{} x={x}", tag(&i))
            });
            rec.check("fracsum = from counts", t == c.t_from_counts(&x, None)?, || {
                format!("{} x={x}", tag(&i))
            });
            let mut total = 0;
            let mut t_total = Point::zero();
            for d in i.p_6n().divisors() {
                total += c.count_s(&x, Some(d))?;
                let td = c.t_fracsum(&x, Some(d))?;
                let sd = Point::from_integer(c.count_s(&x, Some(d))? as i128);
                rec.check("slice counting formula", sd == c.linear_term(&x, Some(d))? - c.t_term(Some(d))? - td, || {
                    format!("{} d={d} x={x}", tag(&i))
                });
                t_total += td;
            }
            rec.check("slice decomposition of S", Point::from_integer(total as i128) == s, || {
                format!("{} x={x}", tag(&i))
            });
            rec.check("slice decomposition of T", t_total == t, || format!("{} x={x}", tag(&i)));
            if x <= Point::from_integer(5000) {
                rec.check("direct count", count_s_direct(&i, &x, None)? == c.count_s(&x, None)?, || {
                    format!("{} x={x}", tag(&i))
                });
            }
        }
        if p >= 4 {
            let center = rng.gen_range(0..p);
            let h = rng.gen_range(1..=(p - 1) / 2);
            for d in i.p_6n().divisors() {
                let got = window_offsets(&i, &|q| center % q, h, d)?;
                let want: Vec<i64> = (-(h as i64) + 1..=h as i64)
                    .filter(|&delta| {
                        let v = (center as i64 + delta).rem_euclid(p as i64) as u64;
                        is_admissible_u64(&i, v, Some(d)).unwrap_or(false)
                    })
                    .collect();
                rec.check("window = scan", got == want, || format!("{} d={d} r={center} h={h}", tag(&i)));
            }
        }
    }
    Ok(())
}

fn deduction(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    for i in instances(cfg, rng, usize::MAX)? {
        let p = i.desk_modulus(u64::MAX)?;
        let x = half_point(rng.gen_range(0..2 * p as i64));
        let ctx = |what: String| format!("{} {what} x={x}", tag(&i));
        for &q in i.p_2n().factors() {
            if x < Point::from_integer(deduction_center(&i, q)?) {
                rec.check("first S", deduction_check_s_first(&i, q, &x)?, || ctx(format!("p={q}")));
            }
            rec.check("first T", deduction_check_t(&i, Deduction::First { p: q }, &x)?, || {
                ctx(format!("p={q}"))
            });
        }
        for &q in i.p_6n().factors() {
            for d in i.p_6n().cofactor(q).divisors() {
                let v = Deduction::FirstSlice { p: q, d };
                rec.check("first slice T", deduction_check_t(&i, v, &x)?, || ctx(format!("p={q} d={d}")));
            }
        }
        for q in i.n_p_primes().collect::<Vec<_>>() {
            rec.check("second T", deduction_check_t(&i, Deduction::Second { p: q }, &x)?, || {
                ctx(format!("p={q}"))
            });
            for d in i.p_6n().divisors() {
                let v = Deduction::SecondSlice { p: q, d };
                rec.check("second slice T", deduction_check_t(&i, v, &x)?, || ctx(format!("p={q} d={d}")));
            }
        }
        rec.check("third T", deduction_check_t(&i, Deduction::Third { d: None }, &x)?, || ctx(String::new()));
        for d in i.p_6n().divisors() {
            rec.check("third slice T", deduction_check_t(&i, Deduction::Third { d: Some(d) }, &x)?, || {
                ctx(format!("d={d}"))
            });
        }
    }
    Ok(())
}

fn density(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    for i in instances(cfg, rng, usize::MAX)? {
        let w = omega(&i, None)?.exact;
        rec.check("omega product form", w == omega_product(&i, None)?, || tag(&i));
        let mut total = BigRational::zero();
        for d in i.p_6n().divisors() {
            let wd = omega(&i, Some(d))?.exact;
            rec.check("slice omega product form", wd == omega_product(&i, Some(d))?, || {
                format!("{} d={d}", tag(&i))
            });
            total += wd;
        }
        rec.check("slice densities sum to omega", total == w, || tag(&i));
    }
    for _ in 0..cfg.samples.min(50) {
        let z = rng.gen_range(3..=200u64);
        let n = rng.gen_range(1..=10_000u64);
        let i = ProblemInstance::new(n, primorial_upto(z))?;
        rec.check("rewritten omega", omega(&i, None)?.exact == omega_rewritten(n, z), || {
            format!("N={n} z={z}")
        });
        rec.check("rewritten omega^1", omega(&i, Some(1))?.exact == omega1_rewritten(n, z), || {
            format!("N={n} z={z}")
        });
    }
    rec.check("threshold at 312", threshold_check(312)? == (true, true), String::new);
    let c = constants(100_000, None)?;
    rec.check("C1 = e^gamma", (c.c1 - 1.781_072_418).abs() < 1e-9, || format!("{}", c.c1));
    rec.check("C2 bracket", (c.c2 - 0.66016).abs() < 5e-5 + c.tail_bound, || format!("{}", c.c2));
    rec.check("C3 bracket", (c.c3 - 0.635166).abs() < 5e-5 + c.tail_bound, || format!("{}", c.c3));
    rec.check("hl ratio", (c.hl_ratio - 0.260947).abs() < 1e-6, || format!("{}", c.hl_ratio));
    Ok(())
}
