//! Small fixed-width integer helpers shared by the desk-scale modules.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Inverse of `a` modulo `m`, or `None` when `gcd(a, m) != 1`. For `m == 1`
/// the answer is 0.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let n = n as u128;
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x as u64
}

/// Euclidean residue of a signed value.
#[inline]
pub fn rem_i(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// `cos(2π·num/den)` with the angle reduced exactly before it reaches
/// floating point.
pub fn cos_turns(num: u128, den: u64) -> f64 {
    let r = (num % den as u128) as u64;
    // fold into [0, den/2] where cos is evaluated on a short argument
    let r = r.min(den - r);
    (std::f64::consts::TAU * (r as f64 / den as f64)).cos()
}

/// `sin(2π·num/den)`, exactly reduced.
pub fn sin_turns(num: u128, den: u64) -> f64 {
    let r = (num % den as u128) as u64;
    if 2 * r > den {
        -(std::f64::consts::TAU * ((den - r) as f64 / den as f64)).sin()
    } else {
        (std::f64::consts::TAU * (r as f64 / den as f64)).sin()
    }
}

/// Distinct prime factors by trial division. Only used on small inputs
/// (N values and desk-scale moduli).
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_squarefree(mut n: u64) -> bool {
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return false;
            }
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_gcd() {
        assert_eq!(mod_inverse(3, 5), Some(2));
        assert_eq!(mod_inverse(5, 3), Some(2));
        assert_eq!(mod_inverse(6, 9), None);
        assert_eq!(mod_inverse(7, 1), Some(0));
        assert_eq!(gcd(0, 12), 12);
        assert_eq!(lcm(4, 6), 12);
    }

    #[test]
    fn isqrt_edges() {
        for n in 0..10_000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert_eq!(isqrt(u64::MAX >> 2), (1u64 << 31) - 1);
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(1), Vec::<u64>::new());
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(prime_factors(30030), vec![2, 3, 5, 7, 11, 13]);
        assert!(is_squarefree(30030));
        assert!(!is_squarefree(12));
    }
}
