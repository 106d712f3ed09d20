//! The modulo set: pairs `(a, b)` with `[a,b] | P` and `gcd(a,b) | 2N`, their
//! least offsets `m_ab`, unit values, the sum-sieve equation and the `Q_d`
//! collapse. Everything here is exponential in `#P` and stays at desk scale.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{cos_turns, gcd, lcm, rem_i};
use crate::error::{Error, Result};
use crate::modulus::{crt_solve, idempotent_mod_p, ProblemInstance};

/// `Q` has up to `4^#P` pairs, so enumeration stops here.
pub const MAX_PRIMES: usize = 6;

/// Largest modulus accepted by the offset routines.
const DESK_LIMIT: u64 = u32::MAX as u64;

/// A pair `(a, b) ∈ Q` with its least offset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModPair {
    pub a: u64,
    pub b: u64,
    pub lcm: u64,
    pub m: u64,
}

impl ModPair {
    /// `μ(a)μ(b)`.
    pub fn weight(&self) -> i64 {
        mobius_sf(self.a) * mobius_sf(self.b)
    }

    /// `A_ab = [a,b] - 2m_ab`.
    pub fn a_term(&self) -> i64 {
        self.lcm as i64 - 2 * self.m as i64
    }

    /// `n_ab(x) = ⌊(x + m_ab) / [a,b]⌋`.
    pub fn n_of(&self, x: f64) -> i64 {
        ((x + self.m as f64) / self.lcm as f64).floor() as i64
    }

    /// `B_ab(x) = A_ab + 2 n_ab(x) [a,b]`.
    pub fn b_term(&self, x: f64) -> i64 {
        self.a_term() + 2 * self.n_of(x) * self.lcm as i64
    }
}

fn mobius_sf(n: u64) -> i64 {
    if crate::arith::prime_factors(n).len() % 2 == 0 {
        1
    } else {
        -1
    }
}

fn check_pair(inst: &ProblemInstance, a: u64, b: u64) -> Result<()> {
    let p = inst.modulus();
    for v in [a, b] {
        if !p.divides_into(v) {
            return Err(Error::NotADivisor {
                value: v,
                modulus: p.to_string(),
            });
        }
    }
    let g = gcd(a, b);
    let two_n = 2 * inst.n() as u128;
    if two_n % g as u128 != 0 {
        return Err(Error::NoOffset { gcd: g, two_n });
    }
    if lcm(a, b) > DESK_LIMIT {
        return Err(Error::SizeGuard {
            what: "[a,b]",
            size: lcm(a, b).to_string(),
            limit: DESK_LIMIT,
        });
    }
    Ok(())
}

/// Least `m ≥ 0` with `a | N - m` and `b | N + m`. Prime by prime the
/// congruence is `m ≡ N` on primes of `a` and `m ≡ -N` on primes of `b`
/// only; the shared primes divide `2N` so both readings agree there.
pub fn least_offset(inst: &ProblemInstance, a: u64, b: u64) -> Result<u64> {
    check_pair(inst, a, b)?;
    let n = inst.n();
    let l = lcm(a, b);
    let residues: Vec<(u64, u64)> = crate::arith::prime_factors(l)
        .into_iter()
        .map(|q| {
            let r = if a % q == 0 { n % q } else { (q - n % q) % q };
            (q, r)
        })
        .collect();
    let m = crt_solve(&residues)? % l;
    Ok(u64::try_from(m).expect("below lcm"))
}

/// `m_ab + m_ba` is 0 when `[a,b] | N` and `[a,b]` otherwise.
pub fn offset_reflection_check(inst: &ProblemInstance, a: u64, b: u64) -> Result<bool> {
    let l = lcm(a, b);
    let sum = least_offset(inst, a, b)? + least_offset(inst, b, a)?;
    let expected = if inst.n() % l == 0 { 0 } else { l };
    Ok(sum == expected)
}

/// `m'_ab = δ₂ N e_2 + N Σ_{p|a'} e_p - N Σ_{p|b'} e_p` reduced mod `[a,b]`,
/// with `e_p` the idempotents of `P`, `a' = a/gcd(2N,a)`, `b' = b/gcd(2N,b)`.
pub fn canonical_offset(inst: &ProblemInstance, a: u64, b: u64) -> Result<u64> {
    check_pair(inst, a, b)?;
    let l = lcm(a, b);
    let n = inst.n();
    let two_n = 2 * n as u128;
    let reduced = |v: u64| v / gcd_u128_u64(two_n, v);
    let (a1, b1) = (reduced(a), reduced(b));
    let e = |p: u64| -> Result<i128> {
        let v = idempotent_mod_p(inst.modulus(), p)? % l;
        Ok(i128::from(u64::try_from(v).expect("below lcm")))
    };
    let n_l = i128::from(n % l);
    let mut acc: i128 = 0;
    if l % 2 == 0 && n % 2 == 1 {
        acc += n_l * e(2)?;
    }
    for p in crate::arith::prime_factors(a1) {
        acc += n_l * e(p)?;
    }
    for p in crate::arith::prime_factors(b1) {
        acc -= n_l * e(p)?;
    }
    Ok(rem_i(acc, l))
}

fn gcd_u128_u64(a: u128, b: u64) -> u64 {
    crate::arith::gcd_u128(a, b as u128) as u64
}

/// The full modulo set with its `Q_d` slices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuloSet {
    pub instance: ProblemInstance,
    pub pairs: Vec<ModPair>,
}

impl ModuloSet {
    pub fn new(inst: &ProblemInstance) -> Result<Self> {
        let primes = inst.modulus().factors();
        if primes.len() > MAX_PRIMES {
            return Err(Error::SizeGuard {
                what: "prime factors of P for Q",
                size: primes.len().to_string(),
                limit: MAX_PRIMES as u64,
            });
        }
        let two_n = 2 * inst.n() as u128;
        // Each prime is in neither, a only, b only, or both (if it divides 2N).
        let mut pairs = vec![(1u64, 1u64)];
        for &q in primes {
            let shared = two_n % q as u128 == 0;
            let mut next = Vec::with_capacity(pairs.len() * 4);
            for &(a, b) in &pairs {
                next.push((a, b));
                next.push((a * q, b));
                next.push((a, b * q));
                if shared {
                    next.push((a * q, b * q));
                }
            }
            pairs = next;
        }
        let pairs = pairs
            .into_iter()
            .map(|(a, b)| {
                Ok(ModPair {
                    a,
                    b,
                    lcm: lcm(a, b),
                    m: least_offset(inst, a, b)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            instance: inst.clone(),
            pairs,
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, a: u64, b: u64) -> Option<&ModPair> {
        self.pairs.iter().find(|q| q.a == a && q.b == b)
    }

    /// `Q_d = {(a,b) ∈ Q : ab = P_d, b ⊥ 2N}`.
    pub fn q_d(&self, d: u64) -> Vec<ModPair> {
        let pd = self.modulus() / d;
        let two_n = 2 * self.instance.n() as u128;
        self.pairs
            .iter()
            .filter(|q| q.a * q.b == pd && gcd_u128_u64(two_n, q.b) == 1)
            .copied()
            .collect()
    }

    /// All `Q_d`, keyed by `d | P`.
    pub fn slices(&self) -> BTreeMap<u64, Vec<ModPair>> {
        self.instance
            .modulus()
            .divisors()
            .into_iter()
            .map(|d| (d, self.q_d(d)))
            .collect()
    }

    fn modulus(&self) -> u64 {
        self.instance
            .modulus()
            .as_u64()
            .expect("enumerable moduli fit in u64")
    }

    /// The unit set `U_n = {(a,b) ∈ Q : [a,b] | n - m_ab}`.
    pub fn unit_set(&self, n: u64) -> Vec<ModPair> {
        self.pairs
            .iter()
            .filter(|q| n % q.lcm == q.m % q.lcm)
            .copied()
            .collect()
    }

    /// `u_n = Σ_{U_n} μ(a)μ(b)`, summed literally.
    pub fn unit_value(&self, n: u64) -> i64 {
        self.unit_set(n).iter().map(ModPair::weight).sum()
    }

    fn guard_sine(&self, s: f64, eps: f64) -> Result<()> {
        for q in &self.pairs {
            let v = (q.lcm as f64 * s).sin();
            if v.abs() <= eps {
                return Err(Error::NearSingular {
                    s,
                    lcm: q.lcm,
                    value: v,
                });
            }
        }
        Ok(())
    }

    /// Left side of the sum-sieve equation,
    /// `E(x,s) = Σ_Q μ(a)μ(b) (e^{iB(x)s} - e^{iAs}) / (2i sin([a,b]s))`.
    pub fn sum_sieve(&self, x: f64, s: f64, eps: f64) -> Result<Complex64> {
        if x < 0.0 {
            return Err(Error::Invalid("x must be nonnegative".into()));
        }
        self.guard_sine(s, eps)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for q in &self.pairs {
            let num = Complex64::from_polar(1.0, q.b_term(x) as f64 * s)
                - Complex64::from_polar(1.0, q.a_term() as f64 * s);
            let den = Complex64::new(0.0, 2.0 * (q.lcm as f64 * s).sin());
            acc += num / den * q.weight() as f64;
        }
        Ok(acc)
    }

    /// Right side of the sum-sieve equation, `Σ_{1≤n≤x} u_n e^{2ins}`, with
    /// `u_n` taken from the admissibility test.
    pub fn sum_sieve_direct(&self, x: f64, s: f64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        let top = x.floor() as u64;
        for n in 1..=top {
            if crate::admissible::is_admissible_u64(&self.instance, n, None)? {
                acc += Complex64::from_polar(1.0, 2.0 * n as f64 * s);
            }
        }
        Ok(acc)
    }

    /// Both sides of `Σ_Q μ(a)μ(b) F(m,[a,b]) = Σ_{d|P} μ(P_d) Σ_{Q_d} F(m,[a,b])`.
    pub fn collapse_sides<F: Fn(u64, u64) -> i64>(&self, f: F) -> (i64, i64) {
        let left = self.pairs.iter().map(|q| q.weight() * f(q.m, q.lcm)).sum();
        let p = self.modulus();
        let right = self
            .instance
            .modulus()
            .divisors()
            .into_iter()
            .map(|d| {
                let sign = mobius_sf(p / d);
                sign * self.q_d(d).iter().map(|q| f(q.m, q.lcm)).sum::<i64>()
            })
            .sum();
        (left, right)
    }

    /// `Σ_{Q_d} cos(2 m_ab k π / P)` by direct summation.
    pub fn qd_cosine_direct(&self, d: u64, k: u64) -> f64 {
        let p = self.modulus();
        self.q_d(d)
            .iter()
            .map(|q| cos_turns(q.m as u128 * k as u128, p))
            .sum()
    }

    /// `(-1)^{k + k P_dN} ∏_{p|P_2dN} 2cos(2kN·overline(P_p)π/p)` for `d | k`.
    pub fn qd_cosine_product(&self, d: u64, k: u64) -> Result<f64> {
        if k == 0 || k % d != 0 {
            return Err(Error::Invalid(format!("d = {d} must divide k = {k}")));
        }
        let inst = &self.instance;
        let n = inst.n();
        let p_dn = inst.modulus().cofactor(d).cofactor(n);
        let sign_exp = k + k * (p_dn.rem(2));
        let mut acc = if sign_exp % 2 == 0 { 1.0 } else { -1.0 };
        for &p in p_dn.factors() {
            if p == 2 {
                continue;
            }
            let inv = crate::modulus::inverse_of_cofactor(inst.modulus(), p)?;
            let num = (k as u128 % p as u128) * (n % p) as u128 * inv as u128;
            acc *= 2.0 * cos_turns(num, p);
        }
        Ok(acc)
    }

    pub fn qd_cosine_product_check(&self, d: u64, k: u64) -> Result<bool> {
        let product = self.qd_cosine_product(d, k)?;
        let direct = self.qd_cosine_direct(d, k);
        let scale = self.q_d(d).len().max(1) as f64;
        Ok((product - direct).abs() <= 1e-9 * scale)
    }

    /// `C_P(N,k)` via `Σ_{d|gcd(k,P)} μ(P_d) d Σ_{Q_d} cos(2 m_ab k π / P)`.
    pub fn cosine_via_modset(&self, k: u64) -> f64 {
        let p = self.modulus();
        self.instance
            .modulus()
            .divisors()
            .into_iter()
            .filter(|&d| k % d == 0)
            .map(|d| mobius_sf(p / d) as f64 * d as f64 * self.qd_cosine_direct(d, k))
            .sum()
    }
}

/// Convenience wrapper: `u_n` for one instance.
pub fn unit_value(inst: &ProblemInstance, n: u64) -> Result<i64> {
    Ok(ModuloSet::new(inst)?.unit_value(n))
}

/// Convenience wrapper: left side of the sum-sieve equation with the default
/// pole guard `10⁻⁹`.
pub fn sum_sieve_eval(inst: &ProblemInstance, x: f64, s: f64) -> Result<Complex64> {
    ModuloSet::new(inst)?.sum_sieve(x, s, 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: u64, p: u64) -> ProblemInstance {
        ProblemInstance::from_values(n, p).unwrap()
    }

    fn brute_offset(n: u64, a: u64, b: u64) -> u64 {
        (0..)
            .find(|&m| (n as i64 - m as i64).rem_euclid(a as i64) == 0 && (n + m) % b == 0)
            .unwrap()
    }

    #[test]
    fn offset_examples() {
        let i = inst(4, 15);
        assert_eq!(least_offset(&i, 3, 5).unwrap(), 1);
        assert_eq!(least_offset(&i, 5, 3).unwrap(), 14);
        assert_eq!(least_offset(&i, 1, 1).unwrap(), 0);
        assert!(matches!(
            least_offset(&i, 3, 3),
            Err(Error::NoOffset { gcd: 3, .. })
        ));
        assert!(offset_reflection_check(&i, 3, 5).unwrap());
        let j = inst(6, 6);
        assert_eq!(least_offset(&j, 2, 3).unwrap(), 0);
        assert_eq!(least_offset(&j, 3, 2).unwrap(), 0);
        assert!(offset_reflection_check(&j, 2, 3).unwrap());
    }

    #[test]
    fn offsets_match_search() {
        for p in [30u64, 42, 210] {
            for n in 1..=30 {
                let q = ModuloSet::new(&inst(n, p)).unwrap();
                for pair in &q.pairs {
                    assert_eq!(pair.m, brute_offset(n, pair.a, pair.b));
                    let i = &q.instance;
                    assert_eq!(canonical_offset(i, pair.a, pair.b).unwrap(), pair.m);
                    assert!(offset_reflection_check(i, pair.a, pair.b).unwrap());
                }
            }
        }
    }

    #[test]
    fn canonical_with_parity_term() {
        let i = inst(5, 6);
        assert_eq!(
            canonical_offset(&i, 2, 3).unwrap(),
            brute_offset(5, 2, 3)
        );
        assert_eq!(canonical_offset(&inst(4, 15), 1, 1).unwrap(), 0);
    }

    #[test]
    fn unit_values() {
        let q = ModuloSet::new(&inst(4, 15)).unwrap();
        assert_eq!(q.unit_value(3), 1);
        assert_eq!(q.unit_value(1), 0);
        let one = ModuloSet::new(&inst(9, 1)).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.unit_value(17), 1);
    }

    #[test]
    fn sum_sieve_examples() {
        let i = inst(4, 15);
        let q = ModuloSet::new(&i).unwrap();
        assert!(q.sum_sieve(0.0, 0.3, 1e-9).unwrap().norm() < 1e-12);
        let lhs = q.sum_sieve(7.5, 0.3, 1e-9).unwrap();
        let rhs = q.sum_sieve_direct(7.5, 0.3).unwrap();
        assert!((lhs - rhs).norm() < 1e-8);
        let j = ModuloSet::new(&inst(2, 6)).unwrap();
        let lhs = j.sum_sieve(6.0, 1.0, 1e-9).unwrap();
        assert!((lhs - j.sum_sieve_direct(6.0, 1.0).unwrap()).norm() < 1e-8);
        assert!(matches!(
            q.sum_sieve(3.0, std::f64::consts::PI, 1e-9),
            Err(Error::NearSingular { .. })
        ));
    }

    #[test]
    fn qd_product_examples() {
        let q = ModuloSet::new(&inst(4, 15)).unwrap();
        assert_eq!(q.q_d(15), vec![q.get(1, 1).copied().unwrap()]);
        assert!(q.qd_cosine_product_check(15, 15).unwrap());
        assert!(q.qd_cosine_product_check(1, 1).unwrap());
        assert!(q.qd_cosine_product(5, 1).is_err());
        let r = ModuloSet::new(&inst(1, 2)).unwrap();
        assert!(r.qd_cosine_product_check(2, 2).unwrap());
    }

    #[test]
    fn guard_on_prime_count() {
        assert!(ModuloSet::new(&inst(1, 30030)).is_ok());
        assert!(ModuloSet::new(&inst(1, 510510)).is_err());
    }
}
