//! Cosine spectra `C_P(N,k) = Σ_{n∈W} cos(2nkπ/P)` and their slice versions,
//! in closed product form and by direct summation.

use num_traits::ToPrimitive;

use crate::admissible::{enumerate_w, size_w, size_w_d};
use crate::arith::cos_turns;
use crate::error::{Error, Result};
use crate::modulus::{inverse_of_cofactor, transported_instance, ProblemInstance};

/// Per-instance cache of `overline(P_p)` so repeated spectra cost `O(#P)`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    inst: ProblemInstance,
    /// `(p, overline(P_p), N mod p)` for every prime of `P`.
    table: Vec<(u64, u64, u64)>,
}

impl Spectrum {
    pub fn new(inst: &ProblemInstance) -> Self {
        let n = inst.n();
        let table = inst
            .modulus()
            .factors()
            .iter()
            .map(|&p| {
                let inv = inverse_of_cofactor(inst.modulus(), p).expect("p | P");
                (p, inv, n % p)
            })
            .collect();
        Self {
            inst: inst.clone(),
            table,
        }
    }

    pub fn instance(&self) -> &ProblemInstance {
        &self.inst
    }

    fn entry(&self, p: u64) -> Result<(u64, u64, u64)> {
        self.table
            .iter()
            .find(|e| e.0 == p)
            .copied()
            .ok_or_else(|| Error::NotAPrimeFactor(p, self.inst.modulus().to_string()))
    }

    /// `α_p(P, kN)`.
    fn alpha_kn(&self, (p, inv, n_mod): (u64, u64, u64), k: u64) -> f64 {
        let m = (k % p) * n_mod % p;
        if m == 0 {
            (p - 2) as f64
        } else {
            -2.0 * cos_turns(m as u128 * inv as u128, p)
        }
    }

    /// Sign and `N_P` factor shared by every form:
    /// `μ(N_P) ∏_{p|gcd(k,N_P)} (1-p)`.
    fn n_p_factor(&self, k: u64) -> f64 {
        let mut acc = 1.0;
        for p in self.inst.n_p_primes() {
            acc *= if k % p == 0 { -((1 - p as i64) as f64) } else { -1.0 };
        }
        acc
    }

    fn size(&self) -> f64 {
        size_w(&self.inst).to_f64().unwrap_or(f64::INFINITY)
    }

    /// `C_P(N,k)` in the form whose product runs over `P_2N`.
    pub fn product_p2n(&self, k: i64) -> f64 {
        let k = k.unsigned_abs();
        if k == 0 {
            return self.size();
        }
        let p2n = self.inst.p_2n();
        let mut acc = self.n_p_factor(k);
        for e in &self.table {
            if p2n.has_prime(e.0) {
                acc *= self.alpha_kn(*e, k);
            }
        }
        acc
    }

    /// `C_P(N,k)` with the product over `P_6N` (every `α_3` equals 1).
    pub fn product(&self, k: i64) -> f64 {
        let k = k.unsigned_abs();
        if k == 0 {
            return self.size();
        }
        let p6n = self.inst.p_6n();
        let mut acc = self.n_p_factor(k);
        for e in &self.table {
            if p6n.has_prime(e.0) {
                acc *= self.alpha_kn(*e, k);
            }
        }
        acc
    }

    /// `C_P^d(N,k) = μ(N_P) ∏_{p|gcd(k,N_P)} (1-p) ∏_{p|P_6dN} (α_p - 1)`.
    pub fn slice_product(&self, d: u64, k: i64) -> Result<f64> {
        self.inst.slice_primes(d)?;
        let k = k.unsigned_abs();
        if k == 0 {
            return Ok(size_w_d(&self.inst, d)?.to_f64().unwrap_or(f64::INFINITY));
        }
        let p6n = self.inst.p_6n();
        let mut acc = self.n_p_factor(k);
        for e in &self.table {
            if p6n.has_prime(e.0) && d % e.0 != 0 {
                acc *= self.alpha_kn(*e, k) - 1.0;
            }
        }
        Ok(acc)
    }

    /// `α_p(P, m)` for an arbitrary integer `m`.
    pub fn alpha(&self, p: u64, m: i128) -> Result<f64> {
        let (p, inv, _) = self.entry(p)?;
        let r = crate::arith::rem_i(m, p);
        Ok(if r == 0 {
            (p - 2) as f64
        } else {
            -2.0 * cos_turns(r as u128 * inv as u128, p)
        })
    }
}

/// `α_p(P, m)`: `p - 2` when `p | m`, else `-2cos(2m·overline(P_p)π/p)`.
pub fn alpha(inst: &ProblemInstance, p: u64, m: i128) -> Result<f64> {
    if !inst.modulus().has_prime(p) {
        return Err(Error::NotAPrimeFactor(p, inst.modulus().to_string()));
    }
    let inv = inverse_of_cofactor(inst.modulus(), p)?;
    let r = crate::arith::rem_i(m, p);
    Ok(if r == 0 {
        (p - 2) as f64
    } else {
        -2.0 * cos_turns(r as u128 * inv as u128, p)
    })
}

/// Closed-form `C_P(N,k)`. Both product forms are computed and must agree.
pub fn spectrum_product(inst: &ProblemInstance, k: i64) -> f64 {
    let s = Spectrum::new(inst);
    let v = s.product(k);
    debug_assert!((v - s.product_p2n(k)).abs() <= 1e-9 * v.abs().max(1.0));
    v
}

/// Both product forms, for callers that want to compare them.
pub fn spectrum_product_forms(inst: &ProblemInstance, k: i64) -> (f64, f64) {
    let s = Spectrum::new(inst);
    (s.product_p2n(k), s.product(k))
}

/// `C_P(N,k)` as the literal cosine sum over the enumerated residues.
pub fn spectrum_direct(inst: &ProblemInstance, k: i64) -> Result<f64> {
    let w = enumerate_w(inst)?;
    let k = k.unsigned_abs() as u128;
    Ok(w.members.iter().map(|&n| cos_turns(n as u128 * k, w.modulus)).sum())
}

pub fn slice_spectrum_product(inst: &ProblemInstance, d: u64, k: i64) -> Result<f64> {
    Spectrum::new(inst).slice_product(d, k)
}

/// `C_P^d(N,k)` summed directly over the slice.
pub fn slice_spectrum_direct(inst: &ProblemInstance, d: u64, k: i64) -> Result<f64> {
    inst.slice_primes(d)?;
    let w = enumerate_w(inst)?;
    let k = k.unsigned_abs() as u128;
    Ok(w.slice(d).iter().map(|&n| cos_turns(n as u128 * k, w.modulus)).sum())
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-9 * scale.max(1.0)
}

/// `C_P(N,k) = C_{P_p}(p̄N, k) · α_p(P, kN)` for `p | P_2N`.
pub fn spectrum_deduction_check(inst: &ProblemInstance, p: u64, k: i64) -> Result<bool> {
    if !inst.p_2n().has_prime(p) {
        return Err(Error::NotAPrimeFactor(p, inst.p_2n().to_string()));
    }
    let moved = transported_instance(inst, p)?;
    let lhs = spectrum_product(inst, k);
    let a = alpha(inst, p, k as i128 * inst.n() as i128)?;
    let rhs = spectrum_product(&moved, k) * a;
    Ok(close(lhs, rhs, size_w(inst).to_f64().unwrap_or(1.0)))
}

/// `C_P^d(N,k) = C_{P_p}^d(p̄N, k) · (α_p(P, kN) - 1)` for `p | P_6dN`.
pub fn slice_spectrum_deduction_check(
    inst: &ProblemInstance,
    d: u64,
    p: u64,
    k: i64,
) -> Result<bool> {
    inst.slice_primes(d)?;
    if !inst.p_6dn(d).has_prime(p) {
        return Err(Error::NotAPrimeFactor(p, inst.p_6dn(d).to_string()));
    }
    let moved = transported_instance(inst, p)?;
    let lhs = slice_spectrum_product(inst, d, k)?;
    let a = alpha(inst, p, k as i128 * inst.n() as i128)?;
    let rhs = slice_spectrum_product(&moved, d, k)? * (a - 1.0);
    Ok(close(lhs, rhs, size_w(inst).to_f64().unwrap_or(1.0)))
}

/// For `p | N_P`: `C_P(N,k) = -C_{P_p}(p̄N, k) · p_k` with `p_k = 1` when
/// `p ∤ k` and `1 - p` otherwise. Checked on direct sums.
pub fn spectrum_second_deduction_check(inst: &ProblemInstance, p: u64, k: i64) -> Result<bool> {
    if inst.n_p() % p != 0 || !inst.modulus().has_prime(p) {
        return Err(Error::NotAPrimeFactor(p, inst.n_p().to_string()));
    }
    let moved = transported_instance(inst, p)?;
    let pk = if k.unsigned_abs() % p == 0 { 1.0 - p as f64 } else { 1.0 };
    let lhs = spectrum_direct(inst, k)?;
    let rhs = -spectrum_direct(&moved, k)? * pk;
    Ok(close(lhs, rhs, size_w(inst).to_f64().unwrap_or(1.0)))
}

/// `C_P^d(N,k) = C_{P_d}^1(d̄N, k)`, both sides summed directly.
pub fn slice_transport_check(inst: &ProblemInstance, d: u64, k: i64) -> Result<bool> {
    let moved = transported_instance(inst, d)?;
    let lhs = slice_spectrum_direct(inst, d, k)?;
    let rhs = slice_spectrum_direct(&moved, 1, k)?;
    Ok(close(lhs, rhs, size_w(inst).to_f64().unwrap_or(1.0)))
}
