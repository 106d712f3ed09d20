//! Exact scanners for the upper-bound hypotheses on windowed slice counts,
//! and Goldbach / twin-prime witness search.
//!
//! For a prime `p | P_6N` the window is centred on `y = N·overline(P_p)·P_p`,
//! whose residue is `N` modulo `p` and `0` modulo every other prime of `P`.
//! The count `S^p(y+x) - S^p(y-x)` is a step function of `x` while the bound
//! `3x|W^p|/P` is linear, so checking every jump abscissa together with the
//! left end of the range is exhaustive. Positions are carried doubled
//! (`x2 = 2x`) so that `x = N/2` stays integral.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admissible::{admissible_by, size_w_d};
use crate::counting::{Counter, Point};
use crate::density::ratio_to_f64;
use crate::error::{Error, Result};
use crate::modulus::{crt_solve, primorial_upto, ProblemInstance};
use crate::primes::is_prime;
use crate::report::{int_string, opt_ratio_string, ratio_string};
use crate::window::sieve_window_periodic;

/// Largest `N` accepted by the brute-force oracle.
pub const BRUTE_LIMIT: u64 = 2000;

/// Largest window half-width `M² - N` accepted by the twin scanner.
pub const TWIN_WINDOW_LIMIT: u64 = 100_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Violated,
    Vacuous,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Violated => "violated",
            Status::Vacuous => "vacuous",
        })
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "holds" => Ok(Status::Holds),
            "violated" => Ok(Status::Violated),
            "vacuous" => Ok(Status::Vacuous),
            _ => Err(Error::Parse(format!("unknown status {s:?}"))),
        }
    }
}

/// Outcome of one `(N, p)` sweep.
///
/// `rhs_num / rhs_den` is `3x|W^p|/P` at `worst_x` and `margin = rhs - lhs`.
/// With a slack term `θ` present, `theta_sq` holds `θ²` and the verdict is
/// a violation exactly when `margin < 0` and `margin² > θ²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UbhVerdict {
    #[serde(rename = "N")]
    pub big_n: u64,
    pub p: Option<u64>,
    pub status: Status,
    #[serde(with = "ratio_string")]
    pub worst_x: BigRational,
    pub lhs: u64,
    #[serde(with = "int_string")]
    pub rhs_num: BigUint,
    #[serde(with = "int_string")]
    pub rhs_den: BigUint,
    #[serde(with = "ratio_string")]
    pub margin: BigRational,
    #[serde(with = "opt_ratio_string", default, skip_serializing_if = "Option::is_none")]
    pub theta_sq: Option<BigRational>,
}

impl UbhVerdict {
    fn vacuous(big_n: u64) -> Self {
        Self {
            big_n,
            p: None,
            status: Status::Vacuous,
            worst_x: BigRational::zero(),
            lhs: 0,
            rhs_num: BigUint::zero(),
            rhs_den: 1u8.into(),
            margin: BigRational::zero(),
            theta_sq: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UbhOptions {
    /// Add the slack `θ(N) = √N·ω^1` (or `θ'(M) = M·ω^1` for the twin form).
    pub theta: bool,
}

/// The exact right-hand side for one slice.
struct Bound {
    size: BigUint,
    modulus: BigUint,
    omega: f64,
    theta_sq: Option<BigRational>,
}

impl Bound {
    fn new(inst: &ProblemInstance, p: u64, theta_sq: Option<BigRational>) -> Result<Self> {
        let size = size_w_d(inst, p)?;
        let modulus = inst.modulus().value().clone();
        let omega = ratio_to_f64(&BigRational::new(size.clone().into(), modulus.clone().into()));
        Ok(Self {
            size,
            modulus,
            omega,
            theta_sq,
        })
    }

    fn rhs(&self, x2: u64) -> BigRational {
        BigRational::new(
            BigInt::from(&self.size * 3u64 * x2),
            BigInt::from(&self.modulus * 2u64),
        )
    }

    fn margin(&self, x2: u64, lhs: u64) -> BigRational {
        self.rhs(x2) - BigRational::from_integer(lhs.into())
    }

    fn violated(&self, margin: &BigRational) -> bool {
        margin.is_negative()
            && match &self.theta_sq {
                None => true,
                Some(t) => &(margin * margin) > t,
            }
    }

    /// The point of smallest margin (earliest on ties). Floats only discard
    /// points whose margin is certainly above the float minimum; the
    /// survivors are compared exactly.
    fn worst(&self, points: &[(u64, u64)]) -> (u64, u64) {
        let approx = |&(x2, lhs): &(u64, u64)| 1.5 * x2 as f64 * self.omega - lhs as f64;
        let top = points.iter().map(|&(x2, _)| x2).max().unwrap_or(0);
        let tol = 1e-9 * (1.0 + 1.5 * top as f64 * self.omega);
        let floor = points.iter().map(approx).fold(f64::INFINITY, f64::min);
        let mut best: Option<((u64, u64), BigRational)> = None;
        for pt in points.iter().filter(|pt| approx(pt) <= floor + 2.0 * tol) {
            let m = self.margin(pt.0, pt.1);
            if best.as_ref().is_none_or(|(_, b)| m < *b) {
                best = Some((*pt, m));
            }
        }
        best.expect("at least one point").0
    }

    fn verdict(&self, big_n: u64, p: u64, x2: u64, lhs: u64) -> UbhVerdict {
        let rhs = self.rhs(x2);
        let margin = &rhs - BigRational::from_integer(lhs.into());
        let status = if self.violated(&margin) {
            Status::Violated
        } else {
            Status::Holds
        };
        UbhVerdict {
            big_n,
            p: Some(p),
            status,
            worst_x: BigRational::new(x2.into(), 2.into()),
            lhs,
            rhs_num: rhs.numer().to_biguint().expect("nonnegative"),
            rhs_den: rhs.denom().to_biguint().expect("positive"),
            margin,
            theta_sq: self.theta_sq.clone(),
        }
    }
}

/// Check points `(x2, lhs)`: the left end `lo2` and every doubled distance
/// `2|δ|` in `(lo2, hi2)`, each with the count of offsets `2|δ| <= x2`.
fn jump_points(abs2: &[u64], lo2: u64, hi2: u64) -> Vec<(u64, u64)> {
    let mut i = abs2.partition_point(|&v| v <= lo2);
    let mut points = vec![(lo2, i as u64)];
    while i < abs2.len() && abs2[i] < hi2 {
        let v = abs2[i];
        while i < abs2.len() && abs2[i] == v {
            i += 1;
        }
        points.push((v, i as u64));
    }
    points
}

/// Count of `δ ∈ [lo, hi]` with `δ ≡ a (mod q)`.
fn count_congruent(lo: i64, hi: i64, a: i64, q: i64) -> u64 {
    if hi < lo {
        return 0;
    }
    ((hi - a).div_euclid(q) - (lo - 1 - a).div_euclid(q)) as u64
}

/// Sweep one slice `p` over `x ∈ [lo2/2, hi)`.
fn sweep(
    inst: &ProblemInstance,
    p: u64,
    lo2: u64,
    hi: u64,
    theta_sq: Option<BigRational>,
) -> Result<(UbhVerdict, u64)> {
    let np = inst.n() % p;
    let center = move |q: u64| if q == p { np } else { 0 };
    let mut abs2 = Vec::new();
    sieve_window_periodic(inst, &center, hi, p, |delta| {
        abs2.push(2 * delta.unsigned_abs())
    })?;
    abs2.sort_unstable();
    let bound = Bound::new(inst, p, theta_sq)?;
    let (x2, lhs) = bound.worst(&jump_points(&abs2, lo2, 2 * hi));
    let h = hi as i64;
    let cells = count_congruent(-h + 1, h, (p - np) as i64, p as i64);
    Ok((bound.verdict(inst.n(), p, x2, lhs), cells))
}

/// `ω^1` as an exact ratio.
fn omega_one(inst: &ProblemInstance) -> Result<BigRational> {
    Ok(BigRational::new(
        size_w_d(inst, 1)?.into(),
        inst.modulus().value().clone().into(),
    ))
}

fn scan_instance(
    inst: &ProblemInstance,
    lo2: u64,
    hi: u64,
    theta_sq: Option<BigRational>,
) -> Result<(Vec<UbhVerdict>, u64)> {
    let primes = inst.p_6n().factors().to_vec();
    if primes.is_empty() {
        return Ok((vec![UbhVerdict::vacuous(inst.n())], 0));
    }
    let results: Vec<Result<(UbhVerdict, u64)>> = primes
        .par_iter()
        .map(|&p| sweep(inst, p, lo2, hi, theta_sq.clone()))
        .collect();
    let mut verdicts = Vec::with_capacity(results.len());
    let mut cells = 0;
    for r in results {
        let (v, c) = r?;
        verdicts.push(v);
        cells += c;
    }
    Ok((verdicts, cells))
}

fn goldbach_scan(n: u64, opts: UbhOptions) -> Result<(Vec<UbhVerdict>, u64)> {
    if n < 2 {
        return Err(Error::Invalid(format!("N = {n} must be at least 2")));
    }
    let inst = ProblemInstance::goldbach(n)?;
    let theta_sq = theta_sq(&inst, opts, n)?;
    scan_instance(&inst, n, n - 1, theta_sq)
}

/// The hypothesis at `N` with `P = primorial(√(2N))`: for each `p | P_6N`
/// and `N/2 <= x < N-1`, `S^p(y+x) - S^p(y-x) <= 3x|W^p|/P` (plus `θ(N)`).
pub fn check_ubh(n: u64, opts: UbhOptions) -> Result<Vec<UbhVerdict>> {
    Ok(goldbach_scan(n, opts)?.0)
}

fn twin_scan(n: u64, m: u64, opts: UbhOptions) -> Result<(Vec<UbhVerdict>, u64)> {
    if n == 0 {
        return Err(Error::Invalid("N must be at least 1".into()));
    }
    if m < 2 * n + 1 {
        return Err(Error::Invalid(format!("M = {m} must be at least 2N+1 = {}", 2 * n + 1)));
    }
    let hi = m
        .checked_mul(m)
        .map(|sq| sq - n)
        .filter(|&hi| hi <= TWIN_WINDOW_LIMIT)
        .ok_or_else(|| Error::SizeGuard {
            what: "twin window M^2 - N",
            size: format!("{m}^2 - {n}"),
            limit: TWIN_WINDOW_LIMIT,
        })?;
    let lo = m * m - 7 * n;
    let inst = ProblemInstance::new(n, primorial_upto(m))?;
    let theta_sq = theta_sq(&inst, opts, m * m)?;
    scan_instance(&inst, 2 * lo, hi, theta_sq)
}

/// The twin form: `P = primorial(M)`, `M >= 2N+1`, `M²-7N <= x < M²-N`,
/// with the optional slack `θ'(M) = M·ω^1`.
pub fn check_ubh_prime(n: u64, m: u64, opts: UbhOptions) -> Result<Vec<UbhVerdict>> {
    Ok(twin_scan(n, m, opts)?.0)
}

/// Earliest point of smallest margin, comparing numerators over the
/// common denominator `2P` in machine integers when they fit.
fn argmin_margin(size: &BigUint, modulus: &BigUint, points: &[(u64, u64)]) -> (u64, u64) {
    let top = points.iter().map(|&(x2, lhs)| x2.max(lhs)).max().unwrap_or(0);
    let small = modulus
        .to_i128()
        .zip(size.to_i128())
        .filter(|(p, _)| p.checked_mul(4 * top as i128 + 4).is_some());
    let mut best: Option<(BigInt, (u64, u64))> = None;
    let mut best_small: Option<(i128, (u64, u64))> = None;
    for &(x2, lhs) in points {
        match small {
            Some((p, w)) => {
                let num = 3 * x2 as i128 * w - 2 * p * lhs as i128;
                if best_small.is_none_or(|(b, _)| num < b) {
                    best_small = Some((num, (x2, lhs)));
                }
            }
            None => {
                let num = BigInt::from(size * 3u64 * x2) - BigInt::from(modulus * 2u64 * lhs);
                if best.as_ref().is_none_or(|(b, _)| num < *b) {
                    best = Some((num, (x2, lhs)));
                }
            }
        }
    }
    best_small.map(|b| b.1).or(best.map(|b| b.1)).expect("nonempty grid")
}

/// Brute force over one instance: every integer of the window classified
/// prime by prime, every half-integer `x ∈ [lo2/2, hi)` scanned.
fn brute_instance(
    inst: &ProblemInstance,
    lo2: u64,
    hi: u64,
    theta_sq: Option<BigRational>,
) -> Result<Vec<UbhVerdict>> {
    if inst.p_6n().is_one() {
        return Ok(vec![UbhVerdict::vacuous(inst.n())]);
    }
    let n = inst.n();
    let reach = hi as i64;
    let mut out = Vec::new();
    for &p in inst.p_6n().factors() {
        let mut hits = vec![0u64; hi as usize + 1];
        for delta in -reach..=reach {
            let residue = |q: u64| {
                let r = if q == p { n % p } else { 0 };
                (r as i64 + delta).rem_euclid(q as i64) as u64
            };
            if admissible_by(inst, residue, Some(p))? {
                hits[delta.unsigned_abs() as usize] += 1;
            }
        }
        let mut grid = Vec::new();
        let mut lhs: u64 = hits[..=(lo2 / 2) as usize].iter().sum();
        grid.push((lo2, lhs));
        for x2 in lo2 + 1..2 * hi {
            if x2 % 2 == 0 {
                lhs += hits[(x2 / 2) as usize];
            }
            grid.push((x2, lhs));
        }
        let bound = Bound::new(inst, p, theta_sq.clone())?;
        let (x2, lhs) = argmin_margin(&bound.size, &bound.modulus, &grid);
        out.push(bound.verdict(n, p, x2, lhs));
    }
    Ok(out)
}

/// Reference implementation of [`check_ubh`] for `N <= 2000`.
pub fn check_ubh_brute(n: u64, opts: UbhOptions) -> Result<Vec<UbhVerdict>> {
    if !(2..=BRUTE_LIMIT).contains(&n) {
        return Err(Error::SizeGuard {
            what: "brute-force N",
            size: n.to_string(),
            limit: BRUTE_LIMIT,
        });
    }
    let inst = ProblemInstance::goldbach(n)?;
    let theta_sq = theta_sq(&inst, opts, n)?;
    brute_instance(&inst, n, n - 1, theta_sq)
}

/// Reference implementation of [`check_ubh_prime`] for `M <= 400`.
pub fn check_ubh_prime_brute(n: u64, m: u64, opts: UbhOptions) -> Result<Vec<UbhVerdict>> {
    if n == 0 || m < 2 * n + 1 || m > 400 {
        return Err(Error::Invalid(format!("brute force needs 2N+1 <= M <= 400, got N={n}, M={m}")));
    }
    let inst = ProblemInstance::new(n, primorial_upto(m))?;
    let theta_sq = theta_sq(&inst, opts, m * m)?;
    brute_instance(&inst, 2 * (m * m - 7 * n), m * m - n, theta_sq)
}

/// `θ² = scale·(ω^1)²`, present only when requested and meaningful.
fn theta_sq(inst: &ProblemInstance, opts: UbhOptions, scale: u64) -> Result<Option<BigRational>> {
    if !opts.theta || inst.p_6n().is_one() {
        return Ok(None);
    }
    let w = omega_one(inst)?;
    Ok(Some(&w * &w * BigRational::from_integer(scale.into())))
}

/// [`check_ubh`] restated through the error terms,
/// `T^p(y-x) - T^p(y+x) <= xω^p`, each `T` a fractional-part sum over the
/// enumerated pattern. Jumps at integer points are resolved with
/// `T(z) = T(z+1/2) - ω/2` and `T(z⁻) = T(z-1/2) + ω/2`. Desk scale only.
pub fn check_ubh_t_form(n: u64, opts: UbhOptions) -> Result<Vec<UbhVerdict>> {
    let inst = ProblemInstance::goldbach(n)?;
    if inst.p_6n().is_one() {
        return Ok(vec![UbhVerdict::vacuous(n)]);
    }
    let counter = Counter::new(&inst)?;
    let modulus = inst.desk_modulus(u64::MAX)? as i128;
    let theta_sq = theta_sq(&inst, opts, n)?;
    let half = Point::new(1, 2);
    let mut out = Vec::new();
    for &p in inst.p_6n().factors() {
        let residues: Vec<(u64, u64)> = inst
            .modulus()
            .factors()
            .iter()
            .map(|&q| (q, if q == p { n % p } else { 0 }))
            .collect();
        let y = crt_solve(&residues)?.to_i128().expect("below P");
        let omega = Point::new(counter.size(Some(p))? as i128, modulus);
        let t = |z: Point| counter.t_fracsum(&z, Some(p));
        let mut best: Option<(Point, u64, u64)> = None;
        for x2 in n..2 * n - 2 {
            let x = Point::new(x2 as i128, 2);
            let (lo, up) = (Point::from_integer(y) - x, Point::from_integer(y) + x);
            let diff = if x2 % 2 == 1 {
                t(lo)? - t(up)?
            } else {
                (t(lo - half)? + omega * half) - (t(up + half)? - omega * half)
            };
            let margin = x * omega - diff;
            let lhs = Point::from_integer(3) * x * omega - margin;
            if !lhs.is_integer() {
                return Err(Error::Invalid(format!("non-integral count at N={n}, p={p}")));
            }
            if best.is_none_or(|(b, _, _)| margin < b) {
                best = Some((margin, x2, lhs.to_integer() as u64));
            }
        }
        let (_, x2, lhs) = best.expect("nonempty range");
        let bound = Bound::new(&inst, p, theta_sq.clone())?;
        out.push(bound.verdict(n, p, x2, lhs));
    }
    Ok(out)
}

/// A prime pair `p_small`, `p_large` with offset `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPair {
    pub n: u64,
    pub p_small: u64,
    pub p_large: u64,
}

/// Witness search outcome. `pair` is `None` only for a counterexample.
/// `admissible` reports whether `n` lies in `W_P(N)` for the search's `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    #[serde(rename = "N")]
    pub big_n: u64,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    pub pair: Option<WitnessPair>,
    pub admissible: bool,
}

/// Smallest `n >= 1` with `N - n` and `N + n` both prime.
pub fn goldbach_witness(n: u64) -> Result<WitnessRecord> {
    if !(4..=u64::MAX / 2).contains(&n) {
        return Err(Error::Invalid(format!("N = {n} must be at least 4")));
    }
    let pair = (1..=n - 2)
        .find(|&k| is_prime(n - k) && is_prime(n + k))
        .map(|k| WitnessPair {
            n: k,
            p_small: n - k,
            p_large: n + k,
        });
    let admissible = match &pair {
        Some(w) => admissible_by(&ProblemInstance::goldbach(n)?, |q| w.n % q, None)?,
        None => false,
    };
    Ok(WitnessRecord {
        big_n: n,
        m: None,
        pair,
        admissible,
    })
}

/// Smallest `n <= M² - N` with `n - N > M` and `n ± N` both prime.
pub fn twin_witness(n: u64, m: u64) -> Result<WitnessRecord> {
    if n == 0 || m < 2 * n + 1 {
        return Err(Error::Invalid(format!("need N >= 1 and M >= 2N+1, got N={n}, M={m}")));
    }
    let top = m
        .checked_mul(m)
        .filter(|&sq| sq <= u64::MAX / 2)
        .ok_or_else(|| Error::Invalid(format!("M = {m} is too large")))?
        - n;
    let pair = (m + n + 1..=top)
        .find(|&k| is_prime(k - n) && is_prime(k + n))
        .map(|k| WitnessPair {
            n: k,
            p_small: k - n,
            p_large: k + n,
        });
    let admissible = match &pair {
        Some(w) => {
            let inst = ProblemInstance::new(n, primorial_upto(m))?;
            admissible_by(&inst, |q| w.n % q, None)?
        }
        None => false,
    };
    Ok(WitnessRecord {
        big_n: n,
        m: Some(m),
        pair,
        admissible,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    Ubh,
    UbhTheta,
    Twin,
    TwinTheta,
}

impl ScanKind {
    pub fn theta(self) -> bool {
        matches!(self, ScanKind::UbhTheta | ScanKind::TwinTheta)
    }

    pub fn is_twin(self) -> bool {
        matches!(self, ScanKind::Twin | ScanKind::TwinTheta)
    }
}

/// What to scan. `full` keeps every verdict; otherwise held `N` are
/// summarised by their tightest slice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub kind: ScanKind,
    pub from: u64,
    pub to: u64,
    #[serde(rename = "M")]
    pub m: Option<u64>,
    pub full: bool,
    /// Number of `N` per checkpoint flush.
    pub stride: u64,
}

impl ScanConfig {
    pub fn new(kind: ScanKind, from: u64, to: u64) -> Self {
        Self {
            kind,
            from,
            to,
            m: None,
            full: from == to,
            stride: 256,
        }
    }
}

/// One checkpoint line: `N<TAB>status<TAB>num/den`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointEntry {
    #[serde(rename = "N")]
    pub big_n: u64,
    pub status: Status,
    #[serde(with = "ratio_string")]
    pub worst_margin: BigRational,
}

impl CheckpointEntry {
    /// Overall status of `N`: violated if any slice is, and the smallest
    /// margin over all slices.
    pub fn summarize(big_n: u64, verdicts: &[UbhVerdict]) -> Self {
        let status = if verdicts.iter().any(|v| v.status == Status::Violated) {
            Status::Violated
        } else if verdicts.iter().all(|v| v.status == Status::Vacuous) {
            Status::Vacuous
        } else {
            Status::Holds
        };
        let worst_margin = verdicts
            .iter()
            .filter(|v| v.status != Status::Vacuous)
            .map(|v| v.margin.clone())
            .min()
            .unwrap_or_else(BigRational::zero);
        Self {
            big_n,
            status,
            worst_margin,
        }
    }

    pub fn line(&self) -> String {
        format!("{}\t{}\t{}", self.big_n, self.status, ratio_string::format(&self.worst_margin))
    }

    pub fn parse_line(line: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad checkpoint line {line:?}"));
        let mut cols = line.split('\t');
        let (Some(n), Some(s), Some(m), None) = (cols.next(), cols.next(), cols.next(), cols.next())
        else {
            return Err(bad());
        };
        Ok(Self {
            big_n: n.parse().map_err(|_| bad())?,
            status: s.parse()?,
            worst_margin: ratio_string::parse(m).map_err(Error::Parse)?,
        })
    }
}

/// Completed entries of a checkpoint file; a missing file is empty.
pub fn read_checkpoint(path: &Path) -> Result<BTreeMap<u64, CheckpointEntry>> {
    if !path.exists() {
        return Ok(BTreeMap::new());
    }
    let mut out = BTreeMap::new();
    for line in BufReader::new(std::fs::File::open(path)?).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let e = CheckpointEntry::parse_line(&line)?;
        out.insert(e.big_n, e);
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub checked: u64,
    pub holds: u64,
    pub violated: u64,
    pub vacuous: u64,
    pub resumed: u64,
}

/// A scan over `N ∈ [from, to]`. Content depends only on the config and
/// the checkpoint contents, never on the worker count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub summary: ScanSummary,
    pub cells_sieved: u64,
    pub verdicts: Vec<UbhVerdict>,
    /// Entries taken from the checkpoint instead of being recomputed.
    pub resumed: Vec<CheckpointEntry>,
}

pub const CSV_HEADER: &str = "N,p,status,worst_x,lhs,rhs_num,rhs_den,margin";

impl ScanReport {
    pub fn has_violations(&self) -> bool {
        self.summary.violated > 0
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Invalid(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for v in &self.verdicts {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                v.big_n,
                v.p.map(|p| p.to_string()).unwrap_or_default(),
                v.status,
                ratio_string::format(&v.worst_x),
                v.lhs,
                v.rhs_num,
                v.rhs_den,
                ratio_string::format(&v.margin),
            ));
        }
        out
    }
}

/// Verdicts for one `N` under `config`, with the number of sieve cells.
pub fn verdicts_for(config: &ScanConfig, n: u64) -> Result<(Vec<UbhVerdict>, u64)> {
    let opts = UbhOptions {
        theta: config.kind.theta(),
    };
    if config.kind.is_twin() {
        let m = config
            .m
            .ok_or_else(|| Error::Invalid("twin scans need M".into()))?;
        twin_scan(n, m, opts)
    } else {
        goldbach_scan(n, opts)
    }
}

fn keep(config: &ScanConfig, verdicts: Vec<UbhVerdict>) -> Vec<UbhVerdict> {
    if config.full || verdicts.iter().any(|v| v.status != Status::Holds) {
        return verdicts
            .into_iter()
            .filter(|v| config.full || v.status != Status::Holds)
            .collect();
    }
    let worst = verdicts
        .into_iter()
        .min_by(|a, b| a.margin.cmp(&b.margin))
        .expect("non-empty");
    vec![worst]
}

/// Run `config` over its range with an optional worker count and checkpoint
/// file. `N` already in the checkpoint are skipped; newly finished `N` are
/// appended in order after every `stride` values.
pub fn scan_ubh_range(
    config: &ScanConfig,
    workers: Option<usize>,
    checkpoint: Option<&Path>,
) -> Result<ScanReport> {
    if config.from > config.to {
        return Err(Error::Invalid(format!(
            "empty range: from {} exceeds to {}",
            config.from, config.to
        )));
    }
    if config.kind.is_twin() && config.m.is_none() {
        return Err(Error::Invalid("twin scans need M".into()));
    }
    let done = match checkpoint {
        Some(path) => read_checkpoint(path)?,
        None => BTreeMap::new(),
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;

    let mut summary = ScanSummary::default();
    let mut resumed = Vec::new();
    let mut pending = Vec::new();
    for n in config.from..=config.to {
        match done.get(&n) {
            Some(e) => resumed.push(e.clone()),
            None => pending.push(n),
        }
    }
    for e in &resumed {
        summary.resumed += 1;
        tally(&mut summary, e.status);
    }

    let mut verdicts = Vec::new();
    let mut cells = 0u64;
    for chunk in pending.chunks(config.stride.max(1) as usize) {
        let results: Vec<Result<(Vec<UbhVerdict>, u64)>> =
            pool.install(|| chunk.par_iter().map(|&n| verdicts_for(config, n)).collect());
        let mut lines = String::new();
        for (&n, r) in chunk.iter().zip(results) {
            let (vs, c) = r?;
            let entry = CheckpointEntry::summarize(n, &vs);
            tally(&mut summary, entry.status);
            lines.push_str(&entry.line());
            lines.push('\n');
            cells += c;
            verdicts.extend(keep(config, vs));
        }
        if let Some(path) = checkpoint {
            let mut f = OpenOptions::new().create(true).append(true).open(path)?;
            f.write_all(lines.as_bytes())?;
            f.flush()?;
        }
    }
    Ok(ScanReport {
        config: config.clone(),
        summary,
        cells_sieved: cells,
        verdicts,
        resumed,
    })
}

fn tally(summary: &mut ScanSummary, status: Status) {
    summary.checked += 1;
    match status {
        Status::Holds => summary.holds += 1,
        Status::Violated => summary.violated += 1,
        Status::Vacuous => summary.vacuous += 1,
    }
}
