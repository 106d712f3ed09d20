//! Prime tables and 64-bit primality.

use std::sync::{Arc, Mutex, OnceLock};

use crate::arith::{mul_mod, pow_mod};

const SEGMENT: usize = 1 << 15;

/// All primes up to `limit`, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Segmented sieve of Eratosthenes over `[2, limit]`.
    pub fn new(limit: u64) -> Self {
        if limit < 2 {
            return Self {
                limit,
                primes: Vec::new(),
            };
        }
        let root = crate::arith::isqrt(limit);
        let base = simple_sieve(root);
        let mut primes = Vec::new();
        let mut seg = vec![true; SEGMENT];
        let mut lo = 2u64;
        while lo <= limit {
            let hi = (lo + SEGMENT as u64 - 1).min(limit);
            let len = (hi - lo + 1) as usize;
            seg[..len].iter_mut().for_each(|b| *b = true);
            for &p in &base {
                if p * p > hi {
                    break;
                }
                let mut start = (lo.div_ceil(p) * p).max(p * p);
                while start <= hi {
                    seg[(start - lo) as usize] = false;
                    start += p;
                }
            }
            primes.extend(
                seg[..len]
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(i, _)| lo + i as u64),
            );
            lo = hi + 1;
        }
        Self { limit, primes }
    }

    /// A process-wide table covering at least `limit`. The table only grows;
    /// callers receive a shared read-only handle.
    pub fn shared(limit: u64) -> Arc<PrimeTable> {
        static TABLE: OnceLock<Mutex<Arc<PrimeTable>>> = OnceLock::new();
        let cell = TABLE.get_or_init(|| Mutex::new(Arc::new(PrimeTable::new(1 << 16))));
        let mut guard = cell.lock().expect("prime table lock poisoned");
        if guard.limit < limit {
            *guard = Arc::new(PrimeTable::new(limit.max(guard.limit * 2)));
        }
        Arc::clone(&guard)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `<= bound` (bound may be below the table limit).
    pub fn up_to(&self, bound: u64) -> &[u64] {
        assert!(
            bound <= self.limit,
            "prime table limit {} below requested bound {bound}",
            self.limit
        );
        let end = self.primes.partition_point(|&p| p <= bound);
        &self.primes[..end]
    }

    /// Number of primes `<= bound`.
    pub fn pi(&self, bound: u64) -> usize {
        self.up_to(bound).len()
    }
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut is = vec![true; n + 1];
    is[0] = false;
    is[1] = false;
    let mut i = 2;
    while i * i <= n {
        if is[i] {
            let mut j = i * i;
            while j <= n {
                is[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

/// Deterministic Miller–Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_matches_trial_division() {
        let t = PrimeTable::new(100_000);
        let naive: Vec<u64> = (2..=100_000u64)
            .filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        assert_eq!(t.primes(), &naive[..]);
        assert_eq!(t.pi(100), 25);
        assert_eq!(t.up_to(13), &[2, 3, 5, 7, 11, 13]);
    }

    #[test]
    fn tiny_tables() {
        assert!(PrimeTable::new(0).primes().is_empty());
        assert!(PrimeTable::new(1).primes().is_empty());
        assert_eq!(PrimeTable::new(2).primes(), &[2]);
    }

    #[test]
    fn miller_rabin_agrees_with_table() {
        let t = PrimeTable::new(200_000);
        let mut it = t.primes().iter().peekable();
        for n in 0..200_000u64 {
            let expect = it.peek().is_some_and(|&&p| p == n);
            if expect {
                it.next();
            }
            assert_eq!(is_prime(n), expect, "n = {n}");
        }
    }

    #[test]
    fn miller_rabin_large() {
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(18_446_744_073_709_551_559));
        // strong pseudoprime to bases 2..=37 would need > 3.3e24; check a
        // classic base-2 pseudoprime
        assert!(!is_prime(3_215_031_751));
        assert!(is_prime(1_000_000_007));
    }

    #[test]
    fn shared_table_grows() {
        let a = PrimeTable::shared(1000);
        assert!(a.limit() >= 1000);
        let b = PrimeTable::shared(200_000);
        assert!(b.limit() >= 200_000);
        assert_eq!(b.pi(1000), 168);
    }
}
