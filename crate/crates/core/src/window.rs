//! Windowed slice counting around a huge centre `r`: the admissible
//! `r + δ` in a slice `d`, found by striking forbidden residues along the
//! progression `δ ≡ -r (mod d)`. Only `r mod q` is ever needed.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::arith::mod_inverse;
use crate::error::{Error, Result};
use crate::modulus::ProblemInstance;

const BLOCK: usize = 1 << 15;

/// Sorted offsets `δ ∈ (-h, h]` with `center + δ` admissible in slice `d`.
pub fn count_window(
    inst: &ProblemInstance,
    center: &BigUint,
    halfwidth: u64,
    d: u64,
) -> Result<Vec<i64>> {
    let residue = |q: u64| (center % q).to_u64().expect("below q");
    window_offsets(inst, &residue, halfwidth, d)
}

/// [`count_window`] with the centre given by its residues modulo each prime
/// of `P`.
pub fn window_offsets(
    inst: &ProblemInstance,
    center_mod: &dyn Fn(u64) -> u64,
    halfwidth: u64,
    d: u64,
) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    sieve_window(inst, center_mod, halfwidth, d, |delta| out.push(delta))?;
    Ok(out)
}

/// Number of surviving offsets, without collecting them.
pub fn window_count(
    inst: &ProblemInstance,
    center_mod: &dyn Fn(u64) -> u64,
    halfwidth: u64,
    d: u64,
) -> Result<u64> {
    let mut count = 0u64;
    sieve_window(inst, center_mod, halfwidth, d, |_| count += 1)?;
    Ok(count)
}

/// Core sieve. Candidates are `δ = δ₀ + j·d`; for every prime `q ∤ d` the
/// forbidden residues `±N` (and `0` when `q | P_6N`) translate into one
/// arithmetic progression of `j` each, struck block by block.
pub fn sieve_window(
    inst: &ProblemInstance,
    center_mod: &dyn Fn(u64) -> u64,
    halfwidth: u64,
    d: u64,
    emit: impl FnMut(i64),
) -> Result<()> {
    if let Some(pv) = inst.modulus().as_u64() {
        if halfwidth.saturating_mul(2) >= pv {
            return Err(Error::Invalid(format!(
                "window of half-width {halfwidth} does not fit inside P = {pv}"
            )));
        }
    }
    sieve_window_periodic(inst, center_mod, halfwidth, d, emit)
}

/// [`sieve_window`] without the fit check. A window wider than `P` simply
/// revisits residues; every integer `r + δ` is still classified correctly.
pub fn sieve_window_periodic(
    inst: &ProblemInstance,
    center_mod: &dyn Fn(u64) -> u64,
    halfwidth: u64,
    d: u64,
    mut emit: impl FnMut(i64),
) -> Result<()> {
    inst.slice_primes(d)?;
    let p = inst.modulus();
    if halfwidth == 0 {
        return Ok(());
    }
    let h = halfwidth as i64;
    let n = inst.n();

    // centre residue modulo d
    let d_primes: Vec<u64> = p.factors().iter().copied().filter(|q| d % q == 0).collect();
    let center_mod_d = {
        let residues: Vec<(u64, u64)> = d_primes.iter().map(|&q| (q, center_mod(q))).collect();
        let r = crate::modulus::crt_solve(&residues)? % d;
        r.to_u64().expect("below d")
    };
    // smallest δ > -h with center + δ ≡ 0 (mod d)
    let start = -h + 1;
    let shift = (-(start as i128) - center_mod_d as i128).rem_euclid(d as i128) as i64;
    let delta0 = start + shift;
    if delta0 > h {
        return Ok(());
    }
    let total = ((h - delta0) / d as i64 + 1) as u64;

    // For each other prime: up to three residues of j to strike, kept as the
    // next index still to be struck.
    struct Strike {
        q: u64,
        next: u64,
    }
    let mut strikes: Vec<Strike> = Vec::new();
    let p6n = inst.p_6n();
    for &q in p.factors() {
        if d % q == 0 {
            continue;
        }
        let c0 = (center_mod(q) as i128 + delta0 as i128).rem_euclid(q as i128) as u64;
        let d_inv = mod_inverse(d % q, q).expect("q does not divide d");
        let nq = n % q;
        let mut forbidden = vec![nq, (q - nq) % q];
        if p6n.has_prime(q) {
            forbidden.push(0);
        }
        forbidden.sort_unstable();
        forbidden.dedup();
        for f in forbidden {
            let j = ((f + q - c0) % q) as u128 * d_inv as u128 % q as u128;
            strikes.push(Strike { q, next: j as u64 });
        }
    }

    let mut alive = vec![true; BLOCK];
    let mut base = 0u64;
    while base < total {
        let len = (total - base).min(BLOCK as u64) as usize;
        alive[..len].fill(true);
        let end = base + len as u64;
        for s in strikes.iter_mut() {
            let mut j = s.next;
            while j < end {
                alive[(j - base) as usize] = false;
                j += s.q;
            }
            s.next = j;
        }
        for (i, &ok) in alive[..len].iter().enumerate() {
            if ok {
                emit(delta0 + (base + i as u64) as i64 * d as i64);
            }
        }
        base = end;
    }
    Ok(())
}
