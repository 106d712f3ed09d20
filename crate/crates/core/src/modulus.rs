//! Squarefree-modulus arithmetic: primorials, cofactors `P_n`, the modular
//! inverses `d̄` and `overline(P_p)`, CRT solving and idempotents.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, gcd, mod_inverse};
use crate::error::{Error, Result};
use crate::primes::PrimeTable;

/// A squarefree positive integer carried with its sorted prime factors.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquareFreeModulus {
    value: BigUint,
    factors: Vec<u64>,
}

impl fmt::Debug for SquareFreeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_u64() {
            Some(v) => write!(f, "SquareFreeModulus({v} = {:?})", self.factors),
            None => write!(f, "SquareFreeModulus(<{} primes>)", self.factors.len()),
        }
    }
}

impl fmt::Display for SquareFreeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl SquareFreeModulus {
    pub fn one() -> Self {
        Self {
            value: BigUint::one(),
            factors: Vec::new(),
        }
    }

    /// Build from distinct primes (any order). Primality is not re-checked;
    /// duplicates are rejected.
    pub fn from_primes(mut primes: Vec<u64>) -> Result<Self> {
        primes.sort_unstable();
        if let Some(w) = primes.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::NotSquarefree(w[0] * w[1]));
        }
        let value = primes.iter().fold(BigUint::one(), |acc, &p| acc * p);
        Ok(Self {
            value,
            factors: primes,
        })
    }

    /// Factor a small squarefree integer by trial division.
    pub fn from_u64(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("modulus must be positive".into()));
        }
        if !arith::is_squarefree(n) {
            return Err(Error::NotSquarefree(n));
        }
        Self::from_primes(arith::prime_factors(n))
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// Number of distinct prime factors.
    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }

    /// The value as `u64`, refusing anything above `limit`.
    pub fn desk_value(&self, limit: u64) -> Result<u64> {
        match self.as_u64() {
            Some(v) if v <= limit => Ok(v),
            _ => Err(Error::SizeGuard {
                what: "modulus",
                size: self.value.to_string(),
                limit,
            }),
        }
    }

    pub fn has_prime(&self, p: u64) -> bool {
        self.factors.binary_search(&p).is_ok()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Möbius function of the (squarefree) value.
    pub fn mobius(&self) -> i64 {
        if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `d | P` for a small `d`.
    pub fn divides_into(&self, d: u64) -> bool {
        d != 0 && (&self.value % d).is_zero()
    }

    /// Primes of `d`, requiring `d | P`.
    pub fn divisor_primes(&self, d: u64) -> Result<Vec<u64>> {
        if !self.divides_into(d) {
            return Err(Error::NotADivisor {
                value: d,
                modulus: self.value.to_string(),
            });
        }
        Ok(self.factors.iter().copied().filter(|p| d % p == 0).collect())
    }

    /// `P_n = P / gcd(P, n)`: drop every prime dividing `n`.
    pub fn cofactor(&self, n: u64) -> Self {
        self.filter(|p| n % p != 0)
    }

    /// `P_n` for a big `n` (e.g. `n = d·N` with a large `d`).
    pub fn cofactor_big(&self, n: &BigUint) -> Self {
        self.filter(|p| !(n % p).is_zero())
    }

    /// Keep only primes satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(u64) -> bool) -> Self {
        let factors: Vec<u64> = self.factors.iter().copied().filter(|&p| keep(p)).collect();
        let value = factors.iter().fold(BigUint::one(), |acc, &p| acc * p);
        Self { value, factors }
    }

    /// Product of the primes dividing `n` (i.e. `gcd(P, n)`).
    pub fn gcd_part(&self, n: u64) -> Self {
        self.filter(|p| n % p == 0)
    }

    /// All divisors of a desk-scale modulus, in subset order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &p in &self.factors {
            let len = out.len();
            for i in 0..len {
                out.push(out[i] * p);
            }
        }
        out
    }

    /// Residue of `P` modulo a small `m`.
    pub fn rem(&self, m: u64) -> u64 {
        self.factors
            .iter()
            .fold(1 % m, |acc, &p| arith::mul_mod(acc, p % m, m))
    }
}

/// Product of all primes `<= bound`.
pub fn primorial_upto(bound: u64) -> SquareFreeModulus {
    let table = PrimeTable::shared(bound.max(2));
    SquareFreeModulus::from_primes(table.up_to(bound).to_vec())
        .expect("prime table yields distinct primes")
}

/// Product of all primes `<= z` for real `z`. `z < 2` gives 1.
pub fn primorial(z: f64) -> SquareFreeModulus {
    if z < 2.0 || !z.is_finite() {
        return SquareFreeModulus::one();
    }
    primorial_upto(z.floor() as u64)
}

/// Product of all primes `<= sqrt(2N)`, with the bound computed exactly.
pub fn goldbach_modulus(n: u64) -> SquareFreeModulus {
    primorial_upto(arith::isqrt(2 * n))
}

/// `P_n = P / gcd(P, n)`.
pub fn cofactor(p: &SquareFreeModulus, n: u64) -> SquareFreeModulus {
    p.cofactor(n)
}

fn require_prime_factor(modulus: &SquareFreeModulus, p: u64) -> Result<()> {
    if modulus.has_prime(p) {
        Ok(())
    } else {
        Err(Error::NotAPrimeFactor(p, modulus.value.to_string()))
    }
}

/// `overline(P_p)`: the inverse of `P/p` modulo `p`, in `[1, p-1]` (1 when
/// `p = 2`).
pub fn inverse_of_cofactor(modulus: &SquareFreeModulus, p: u64) -> Result<u64> {
    require_prime_factor(modulus, p)?;
    let cof = modulus
        .factors
        .iter()
        .filter(|&&q| q != p)
        .fold(1 % p, |acc, &q| arith::mul_mod(acc, q % p, p));
    Ok(mod_inverse(cof, p)
        .expect("distinct primes are coprime")
        .max(1))
}

/// The idempotent `e_p = overline(P_p)·P_p mod P`: `1 mod p`, `0 mod P_p`.
pub fn idempotent_mod_p(modulus: &SquareFreeModulus, p: u64) -> Result<BigUint> {
    let inv = inverse_of_cofactor(modulus, p)?;
    let cof = &modulus.value / p;
    Ok((cof * inv) % &modulus.value)
}

/// `d̄ = ∏_{p|d} p̄` reduced into `[1, P]`, where `p̄ ≡ p⁻¹ (mod P_p)` and
/// `p̄ ≡ 1 (mod p)`. Satisfies `d̄·d ≡ 1 (mod P_d)`.
pub fn inverse_bar(modulus: &SquareFreeModulus, d: u64) -> Result<BigUint> {
    modulus.divisor_primes(d)?;
    // Per prime q: q ∤ d gives d⁻¹; q | d gives (d/q)⁻¹, since the factor
    // q̄ is 1 mod q and every other p̄ is p⁻¹ mod q.
    let residues: Vec<(u64, u64)> = modulus
        .factors
        .iter()
        .map(|&q| {
            let unit = if d % q == 0 { d / q } else { d };
            let r = mod_inverse(unit % q, q).expect("coprime by construction");
            (q, r)
        })
        .collect();
    crt_solve(&residues)
}

/// `d̄` as a `u64` residue, for desk-scale moduli.
pub fn inverse_bar_u64(modulus: &SquareFreeModulus, d: u64) -> Result<u64> {
    let v = inverse_bar(modulus, d)?;
    v.to_u64()
        .ok_or_else(|| Error::Invalid("inverse exceeds u64".into()))
}

/// Unique solution in `[1, ∏ m]` of `x ≡ r (mod m)` for pairwise coprime
/// moduli. The empty system yields 1.
pub fn crt_solve(residues: &[(u64, u64)]) -> Result<BigUint> {
    for (i, &(a, _)) in residues.iter().enumerate() {
        if a == 0 {
            return Err(Error::Invalid("modulus 0 in CRT system".into()));
        }
        for &(b, _) in &residues[i + 1..] {
            if gcd(a, b) != 1 {
                return Err(Error::NotCoprime(a, b));
            }
        }
    }
    let total = residues
        .iter()
        .fold(BigUint::one(), |acc, &(m, _)| acc * m);
    let mut x = BigUint::zero();
    for &(m, r) in residues {
        let cof = &total / m;
        let cof_mod = (&cof % m).to_u64().expect("residue below m");
        let inv = mod_inverse(cof_mod, m).expect("pairwise coprime");
        x += cof * arith::mul_mod(r % m, inv, m);
    }
    x %= &total;
    if x.is_zero() {
        x = total;
    }
    Ok(x)
}

/// A problem instance `(N, P)` with its cached derived quantities.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemInstance {
    n: u64,
    modulus: SquareFreeModulus,
    n_p: u64,
    p_2n: SquareFreeModulus,
    p_6n: SquareFreeModulus,
    index: u64,
    index_2: u64,
}

impl fmt::Debug for ProblemInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProblemInstance(N={}, P={:?})", self.n, self.modulus)
    }
}

impl ProblemInstance {
    pub fn new(n: u64, modulus: SquareFreeModulus) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("N must be at least 1".into()));
        }
        let n_p = modulus
            .factors
            .iter()
            .filter(|&&p| n % p == 0)
            .product::<u64>();
        let p_2n = modulus.filter(|p| p != 2 && n % p != 0);
        let p_6n = p_2n.filter(|p| p != 3);
        let index = [2u64, 3]
            .iter()
            .filter(|&&q| modulus.has_prime(q) && n % q != 0)
            .product();
        let index_2 = if modulus.has_prime(2) && n % 2 != 0 { 2 } else { 1 };
        Ok(Self {
            n,
            modulus,
            n_p,
            p_2n,
            p_6n,
            index,
            index_2,
        })
    }

    pub fn from_values(n: u64, p: u64) -> Result<Self> {
        Self::new(n, SquareFreeModulus::from_u64(p)?)
    }

    /// The Goldbach instance: `P` = product of primes `<= sqrt(2N)`.
    pub fn goldbach(n: u64) -> Result<Self> {
        Self::new(n, goldbach_modulus(n))
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn modulus(&self) -> &SquareFreeModulus {
        &self.modulus
    }

    /// `N_P = gcd(N, P)`.
    pub fn n_p(&self) -> u64 {
        self.n_p
    }

    pub fn p_2n(&self) -> &SquareFreeModulus {
        &self.p_2n
    }

    pub fn p_6n(&self) -> &SquareFreeModulus {
        &self.p_6n
    }

    /// The index `c = gcd(NP, 6) / gcd(N, 6)`.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// `c' = gcd(NP, 2) / gcd(N, 2)`.
    pub fn index_2(&self) -> u64 {
        self.index_2
    }

    /// Primes of `P` dividing `N`.
    pub fn n_p_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.modulus
            .factors
            .iter()
            .copied()
            .filter(move |p| self.n % p == 0)
    }

    /// Check `d | P_6N` and return its primes.
    pub fn slice_primes(&self, d: u64) -> Result<Vec<u64>> {
        self.p_6n.divisor_primes(d)
    }

    /// `P_{6dN}` for a slice divisor `d | P_6N`.
    pub fn p_6dn(&self, d: u64) -> SquareFreeModulus {
        self.p_6n.filter(|p| d % p != 0)
    }

    pub fn desk_modulus(&self, limit: u64) -> Result<u64> {
        self.modulus.desk_value(limit)
    }

    /// The instance `(m, P')` sharing nothing but the caller's choices; used
    /// when a formula moves to `P_p` or `P_d` and a transformed `N`.
    pub fn derived(n: &BigUint, modulus: SquareFreeModulus) -> Result<Self> {
        let n = n
            .to_u64()
            .ok_or_else(|| Error::Invalid(format!("derived N = {n} exceeds u64")))?;
        Self::new(n, modulus)
    }
}

/// Transform `(N, P)` into `(d̄N, P_d)`. Membership only sees `N` modulo
/// the primes of `P_d`, so the representative is reduced into `[1, P_d]`.
pub fn transported_instance(inst: &ProblemInstance, d: u64) -> Result<ProblemInstance> {
    let dbar = inverse_bar(inst.modulus(), d)?;
    let pd = inst.modulus().cofactor(d);
    reduced_instance(&(dbar * inst.n()), pd)
}

/// The instance `(m mod P, P)` with residue 0 represented by `P` itself.
pub fn reduced_instance(m: &BigUint, modulus: SquareFreeModulus) -> Result<ProblemInstance> {
    let mut r = m % modulus.value();
    if r.is_zero() {
        r = modulus.value().clone();
    }
    ProblemInstance::derived(&r, modulus)
}

pub fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

pub fn is_odd_big(n: &BigUint) -> bool {
    n.is_odd()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sfm(n: u64) -> SquareFreeModulus {
        SquareFreeModulus::from_u64(n).unwrap()
    }

    #[test]
    fn primorial_examples() {
        let one = primorial(1.0);
        assert_eq!(one.as_u64(), Some(1));
        assert!(one.factors().is_empty());
        assert_eq!(primorial(13.0).as_u64(), Some(30030));
        let p5 = primorial(5.0);
        assert_eq!(p5.as_u64(), Some(30));
        assert_eq!(p5.factors(), &[2, 3, 5]);
        assert_eq!(primorial(5.999).as_u64(), Some(30));
    }

    #[test]
    fn cofactor_examples() {
        assert_eq!(cofactor(&sfm(15), 24).as_u64(), Some(5));
        assert_eq!(cofactor(&sfm(15), 1).as_u64(), Some(15));
        assert_eq!(cofactor(&sfm(30030), 30030).as_u64(), Some(1));
    }

    #[test]
    fn inverse_bar_examples() {
        assert_eq!(inverse_bar_u64(&sfm(15), 1).unwrap(), 1);
        assert_eq!(inverse_bar_u64(&sfm(15), 5).unwrap(), 11);
        assert_eq!(inverse_bar_u64(&sfm(15), 3).unwrap(), 7);
        assert!(inverse_bar(&sfm(15), 7).is_err());
        assert!(inverse_bar(&sfm(15), 4).is_err());
    }

    #[test]
    fn inverse_of_cofactor_examples() {
        assert_eq!(inverse_of_cofactor(&sfm(15), 5).unwrap(), 2);
        assert_eq!(inverse_of_cofactor(&sfm(15), 3).unwrap(), 2);
        assert_eq!(inverse_of_cofactor(&sfm(6), 3).unwrap(), 2);
        assert_eq!(inverse_of_cofactor(&sfm(6), 2).unwrap(), 1);
        assert!(inverse_of_cofactor(&sfm(6), 5).is_err());
    }

    #[test]
    fn idempotent_examples() {
        assert_eq!(idempotent_mod_p(&sfm(15), 5).unwrap(), big(6));
        assert_eq!(idempotent_mod_p(&sfm(15), 3).unwrap(), big(10));
        assert_eq!(idempotent_mod_p(&sfm(2), 2).unwrap(), big(1));
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_solve(&[(3, 1), (5, 1)]).unwrap(), big(1));
        assert_eq!(crt_solve(&[(3, 1), (5, 4)]).unwrap(), big(4));
        assert_eq!(crt_solve(&[(2, 0), (3, 0), (5, 3)]).unwrap(), big(18));
        assert_eq!(crt_solve(&[]).unwrap(), big(1));
        assert!(matches!(
            crt_solve(&[(6, 1), (4, 1)]),
            Err(Error::NotCoprime(6, 4))
        ));
    }

    #[test]
    fn instance_derived_quantities() {
        let i = ProblemInstance::from_values(4, 15).unwrap();
        assert_eq!(i.n_p(), 1);
        assert_eq!(i.p_2n().as_u64(), Some(15));
        assert_eq!(i.p_6n().as_u64(), Some(5));
        assert_eq!(i.index(), 3);
        assert_eq!(i.index_2(), 1);

        let j = ProblemInstance::from_values(5, 30).unwrap();
        assert_eq!(j.n_p(), 5);
        assert_eq!(j.p_6n().as_u64(), Some(1));
        assert_eq!(j.index(), 6);
        assert_eq!(j.index_2(), 2);

        assert!(ProblemInstance::from_values(0, 15).is_err());
        assert!(SquareFreeModulus::from_u64(12).is_err());
    }
}
