//! The admissible residues `W_P(N)`: exact sizes, per-prime membership,
//! desk-scale enumeration with the slice partition, and the factor-sum and
//! momentum identities.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modulus::{ProblemInstance, SquareFreeModulus};

/// Default cap on `P` for anything that walks all of `[1, P]`.
pub const ENUMERATION_GUARD: u64 = 10_000_000;

/// `|W_P(N)| = ∏_{p|N_P} (p-1) · ∏_{p|P_6N} (p-2)`.
pub fn size_w(inst: &ProblemInstance) -> BigUint {
    let mut acc = BigUint::one();
    for p in inst.n_p_primes() {
        acc *= p - 1;
    }
    for &p in inst.p_6n().factors() {
        acc *= p - 2;
    }
    acc
}

/// `|W_P^d(N)| = |V_P^d(N)| = ∏_{p|N_P} (p-1) · ∏_{p|P_6dN} (p-3)`.
pub fn size_w_d(inst: &ProblemInstance, d: u64) -> Result<BigUint> {
    inst.slice_primes(d)?;
    let mut acc = BigUint::one();
    for p in inst.n_p_primes() {
        acc *= p - 1;
    }
    for &p in inst.p_6n().factors() {
        if d % p != 0 {
            acc *= p - 3;
        }
    }
    Ok(acc)
}

/// Size of the slice `V_P^d(N)`; equal to `|W_P^d(N)|`.
pub fn size_v_d(inst: &ProblemInstance, d: u64) -> Result<BigUint> {
    size_w_d(inst, d)
}

/// Membership of a residue given per prime: `n mod q ∉ {±N mod q}` for every
/// prime `q | P`, plus the slice condition when `d` is given.
/// Membership decided from the residues of `n` modulo each prime of `P`.
pub fn admissible_by<F: Fn(u64) -> u64>(
    inst: &ProblemInstance,
    residue: F,
    slice: Option<u64>,
) -> Result<bool> {
    if let Some(d) = slice {
        inst.slice_primes(d)?;
    }
    let n = inst.n();
    for &q in inst.modulus().factors() {
        let r = residue(q);
        let nq = n % q;
        if r == nq || (r + nq) % q == 0 {
            return Ok(false);
        }
    }
    if let Some(d) = slice {
        for &q in inst.p_6n().factors() {
            if (residue(q) == 0) != (d % q == 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Membership of `n` in `W_P(N)` (or in the slice `W_P^d(N)`), reading `n`
/// modulo `P`. Costs `O(#P)` and never touches `P` itself.
pub fn is_admissible(inst: &ProblemInstance, n: &BigUint, slice: Option<u64>) -> Result<bool> {
    admissible_by(inst, |q| (n % q).try_into().expect("residue below q"), slice)
}

/// [`is_admissible`] for machine-size `n`.
pub fn is_admissible_u64(inst: &ProblemInstance, n: u64, slice: Option<u64>) -> Result<bool> {
    admissible_by(inst, |q| n % q, slice)
}

/// `gcd(P_6N, n)` computed prime by prime.
pub fn slice_of(inst: &ProblemInstance, n: u64) -> u64 {
    inst.p_6n()
        .factors()
        .iter()
        .filter(|&&q| n % q == 0)
        .product()
}

/// Explicit `W_P(N) ⊆ [1, P]` with its partition into slices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResiduePattern {
    pub instance: ProblemInstance,
    pub modulus: u64,
    pub members: Vec<u64>,
    pub slices: BTreeMap<u64, Vec<u64>>,
}

impl ResiduePattern {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn slice(&self, d: u64) -> &[u64] {
        self.slices.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }

    /// `V_P^d(N) = { n / (cd) : n ∈ W_P^d(N) }`, sorted.
    pub fn v_slice(&self, d: u64) -> Vec<u64> {
        let cd = self.instance.index() * d;
        self.slice(d).iter().map(|n| n / cd).collect()
    }
}

/// Allowed residues modulo a single prime `q`.
fn allowed_residues(n: u64, q: u64) -> Vec<u64> {
    let nq = n % q;
    (0..q).filter(|&r| r != nq && (r + nq) % q != 0).collect()
}

/// Enumerate `W_P(N)` with the default guard `P ≤ 10⁷`.
pub fn enumerate_w(inst: &ProblemInstance) -> Result<ResiduePattern> {
    enumerate_w_with_guard(inst, ENUMERATION_GUARD)
}

/// Enumerate `W_P(N)` by combining the allowed residues prime by prime with
/// the CRT, so the cost is proportional to `|W|` rather than `P`.
pub fn enumerate_w_with_guard(inst: &ProblemInstance, guard: u64) -> Result<ResiduePattern> {
    let modulus = inst.desk_modulus(guard)?;
    let n = inst.n();
    let mut residues: Vec<u64> = vec![0];
    let mut m: u64 = 1;
    for &q in inst.modulus().factors() {
        let allowed = allowed_residues(n, q);
        // x ≡ s (mod m), x ≡ r (mod q)  ⇒  x = s + m·((r - s)·m⁻¹ mod q)
        let m_inv = crate::arith::mod_inverse(m % q, q).expect("distinct primes");
        let mut next = Vec::with_capacity(residues.len() * allowed.len());
        for &s in &residues {
            let s_q = s % q;
            for &r in &allowed {
                let t = ((r + q - s_q) % q) * m_inv % q;
                next.push(s + m * t);
            }
        }
        residues = next;
        m *= q;
    }
    for r in residues.iter_mut() {
        if *r == 0 {
            *r = modulus;
        }
    }
    residues.sort_unstable();

    let mut slices: BTreeMap<u64, Vec<u64>> = inst
        .p_6n()
        .divisors()
        .into_iter()
        .map(|d| (d, Vec::new()))
        .collect();
    for &r in &residues {
        slices.entry(slice_of(inst, r)).or_default().push(r);
    }
    Ok(ResiduePattern {
        instance: inst.clone(),
        modulus,
        members: residues,
        slices,
    })
}

fn lookup(h: &BTreeMap<u64, BigRational>, p: u64) -> Result<&BigRational> {
    h.get(&p).ok_or(Error::MissingValue(p))
}

/// Both sides of `∏_{p|K} (h_p + 1) = Σ_{d|K} ∏_{p|K_d} h_p`.
pub fn factor_sum_sides(
    k: &SquareFreeModulus,
    h: &BTreeMap<u64, BigRational>,
) -> Result<(BigRational, BigRational)> {
    let primes = k.factors();
    let mut left = BigRational::one();
    for &p in primes {
        left *= lookup(h, p)? + BigRational::one();
    }
    let mut right = BigRational::zero();
    for mask in 0u64..(1u64 << primes.len()) {
        // `mask` selects the primes of d; the product runs over the rest.
        let mut term = BigRational::one();
        for (i, &p) in primes.iter().enumerate() {
            if mask >> i & 1 == 0 {
                term *= lookup(h, p)?;
            }
        }
        right += term;
    }
    Ok((left, right))
}

pub fn factor_sum_identity_check(
    k: &SquareFreeModulus,
    h: &BTreeMap<u64, BigRational>,
) -> Result<bool> {
    if k.num_factors() > 24 {
        return Err(Error::SizeGuard {
            what: "number of prime factors",
            size: k.num_factors().to_string(),
            limit: 24,
        });
    }
    let (l, r) = factor_sum_sides(k, h)?;
    Ok(l == r)
}

/// Both sides of the momentum formula
/// `Σ_{n∈W} ∏_{p|P_n} (f_p-1)/(p-1) = ∏_{p|N_P} (f_p-1) · ∏_{p|P_6N} (f_p - 2(f_p-1)/(p-1))`.
pub fn momentum_sides(
    inst: &ProblemInstance,
    f: &BTreeMap<u64, BigRational>,
) -> Result<(BigRational, BigRational)> {
    let pattern = enumerate_w(inst)?;
    let primes = inst.modulus().factors();
    let ratios = primes
        .iter()
        .map(|&p| Ok((lookup(f, p)? - BigRational::one()) / int(p - 1)))
        .collect::<Result<Vec<_>>>()?;

    let mut left = BigRational::zero();
    for &n in &pattern.members {
        let mut term = BigRational::one();
        for (i, &p) in primes.iter().enumerate() {
            if n % p != 0 {
                term *= &ratios[i];
            }
        }
        left += term;
    }

    let mut right = BigRational::one();
    for p in inst.n_p_primes() {
        right *= lookup(f, p)? - BigRational::one();
    }
    for &p in inst.p_6n().factors() {
        let fp = lookup(f, p)?;
        let two = int(2);
        right *= fp - two * (fp - BigRational::one()) / int(p - 1);
    }
    Ok((left, right))
}

pub fn momentum_check(inst: &ProblemInstance, f: &BTreeMap<u64, BigRational>) -> Result<bool> {
    let (l, r) = momentum_sides(inst, f)?;
    Ok(l == r)
}

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// A rational `a/b` with `a, b ∈ [-20, 20]`, `b ≠ 0`.
pub fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    let a: i64 = rng.gen_range(-20..=20);
    let mut b: i64 = 0;
    while b == 0 {
        b = rng.gen_range(-20..=20);
    }
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// One random rational per prime of `modulus`.
pub fn random_assignment<R: Rng>(
    modulus: &SquareFreeModulus,
    rng: &mut R,
) -> BTreeMap<u64, BigRational> {
    modulus
        .factors()
        .iter()
        .map(|&p| (p, random_rational(rng)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulus::transported_instance;
    use num_traits::ToPrimitive;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn inst(n: u64, p: u64) -> ProblemInstance {
        ProblemInstance::from_values(n, p).unwrap()
    }

    fn brute(n: u64, p: u64) -> Vec<u64> {
        (1..=p)
            .filter(|&k| {
                let a = n.abs_diff(k);
                crate::arith::gcd(a, p) == 1 && crate::arith::gcd(n + k, p) == 1
            })
            .collect()
    }

    #[test]
    fn worked_example() {
        let w = enumerate_w(&inst(4, 15)).unwrap();
        assert_eq!(w.members, vec![3, 12, 15]);
        assert_eq!(w.slice(1), &[3, 12]);
        assert_eq!(w.slice(5), &[15]);
        assert_eq!(size_w(&inst(4, 15)), BigUint::from(3u32));
        assert_eq!(size_w_d(&inst(4, 15), 1).unwrap(), BigUint::from(2u32));
        assert_eq!(size_w_d(&inst(4, 15), 5).unwrap(), BigUint::from(1u32));
        assert!(size_w_d(&inst(4, 15), 3).is_err());
    }

    #[test]
    fn trivial_modulus() {
        let i = inst(1, 1);
        assert_eq!(enumerate_w(&i).unwrap().members, vec![1]);
        assert_eq!(size_w(&i), BigUint::one());
        assert_eq!(size_w_d(&i, 1).unwrap(), BigUint::one());
    }

    #[test]
    fn membership_examples() {
        let i = inst(4, 15);
        assert!(is_admissible_u64(&i, 3, None).unwrap());
        assert!(!is_admissible_u64(&i, 1, None).unwrap());
        assert!(is_admissible_u64(&i, 18, Some(1)).unwrap());
        assert!(!is_admissible_u64(&i, 15, Some(1)).unwrap());
        assert!(is_admissible(&i, &BigUint::from(18u32), Some(1)).unwrap());
    }

    #[test]
    fn enumeration_matches_gcd_scan() {
        for p in [1u64, 2, 3, 6, 10, 30, 42, 105, 210, 2310] {
            for n in 1..=60 {
                let i = inst(n, p);
                let w = enumerate_w(&i).unwrap();
                assert_eq!(w.members, brute(n, p), "N={n} P={p}");
                assert_eq!(size_w(&i).to_usize().unwrap(), w.len());
                let total: usize = w.slices.values().map(Vec::len).sum();
                assert_eq!(total, w.len());
                for (&d, members) in &w.slices {
                    assert_eq!(size_w_d(&i, d).unwrap().to_usize().unwrap(), members.len());
                }
            }
        }
    }

    #[test]
    fn index_divides_members_and_v_transport() {
        for p in [30u64, 210, 2310] {
            for n in 1..=40 {
                let i = inst(n, p);
                let w = enumerate_w(&i).unwrap();
                let c = i.index();
                assert_eq!(crate::arith::gcd(c, n), 1);
                assert!(w.members.iter().all(|m| m % c == 0));
                for &d in w.slices.keys() {
                    let moved = transported_instance(&i, d).unwrap();
                    let wd = enumerate_w(&moved).unwrap();
                    let mut v1 = wd.v_slice(1);
                    v1.sort_unstable();
                    assert_eq!(w.v_slice(d), v1, "N={n} P={p} d={d}");
                }
            }
        }
    }

    #[test]
    fn factor_sum_examples() {
        let one = SquareFreeModulus::one();
        assert!(factor_sum_identity_check(&one, &BTreeMap::new()).unwrap());
        let k = SquareFreeModulus::from_u64(15).unwrap();
        let h: BTreeMap<_, _> = [(3, -BigRational::one()), (5, -BigRational::one())].into();
        let (l, r) = factor_sum_sides(&k, &h).unwrap();
        assert!(l.is_zero() && r.is_zero());
        let missing: BTreeMap<_, _> = [(3, BigRational::one())].into();
        assert!(matches!(
            factor_sum_identity_check(&k, &missing),
            Err(Error::MissingValue(5))
        ));
    }

    #[test]
    fn momentum_reduces_to_size() {
        for (n, p) in [(4u64, 15u64), (6, 30), (7, 210), (1, 1)] {
            let i = inst(n, p);
            let f: BTreeMap<_, _> = i.modulus().factors().iter().map(|&q| (q, int(q))).collect();
            let (l, r) = momentum_sides(&i, &f).unwrap();
            assert_eq!(l, r);
            assert_eq!(l, BigRational::from_integer(size_w(&i).into()));
        }
        let i = inst(4, 15);
        let f: BTreeMap<_, _> = [(3, int(1)), (5, int(1))].into();
        assert_eq!(momentum_sides(&i, &f).unwrap(), (int(1), int(1)));
    }

    #[test]
    fn momentum_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let i = inst(4, 15);
        for _ in 0..100 {
            let f = random_assignment(i.modulus(), &mut rng);
            assert!(momentum_check(&i, &f).unwrap());
        }
    }
}
