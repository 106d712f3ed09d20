//! Admissible-residue sieve machinery for the Goldbach and twin-prime
//! problems over squarefree moduli.

pub mod admissible;
pub mod arith;
pub mod counting;
pub mod density;
pub mod error;
pub mod modset;
pub mod modulus;
pub mod primes;
pub mod report;
pub mod scanner;
pub mod spectra;
pub mod verify;
pub mod window;

pub use error::{Error, Result};
