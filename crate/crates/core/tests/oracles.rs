//! Fixed values worked out by hand or by exhaustive search, frozen here.

use goldbach_core::admissible::{enumerate_w, is_admissible_u64, size_w, size_w_d};
use goldbach_core::counting::{delta6, error_t_fourier, parse_point, Counter, Point};
use goldbach_core::modset::{canonical_offset, least_offset, unit_value};
use goldbach_core::modulus::{
    crt_solve, idempotent_mod_p, inverse_bar, inverse_of_cofactor, primorial, ProblemInstance,
    SquareFreeModulus,
};
use goldbach_core::spectra::{alpha, slice_spectrum_product, spectrum_direct, spectrum_product};
use num_bigint::BigUint;

fn inst(n: u64, p: u64) -> ProblemInstance {
    ProblemInstance::from_values(n, p).unwrap()
}

fn m(p: u64) -> SquareFreeModulus {
    SquareFreeModulus::from_u64(p).unwrap()
}

fn pt(s: &str) -> Point {
    parse_point(s).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

const GOLDEN: f64 = 1.618_033_988_749_895;

#[test]
fn moduli() {
    assert_eq!(primorial(13.0).as_u64(), Some(30030));
    assert_eq!(primorial(5.0).factors(), &[2, 3, 5]);
    assert_eq!(primorial(1.0).as_u64(), Some(1));
    assert_eq!(m(15).cofactor(24).as_u64(), Some(5));
    assert_eq!(m(30030).cofactor(30030).as_u64(), Some(1));
}

#[test]
fn inverses_and_idempotents() {
    for (d, want) in [(1u64, 1u64), (5, 11), (3, 7)] {
        assert_eq!(inverse_bar(&m(15), d).unwrap(), BigUint::from(want));
    }
    assert_eq!(inverse_of_cofactor(&m(15), 5).unwrap(), 2);
    assert_eq!(inverse_of_cofactor(&m(15), 3).unwrap(), 2);
    assert_eq!(inverse_of_cofactor(&m(6), 3).unwrap(), 2);
    assert_eq!(idempotent_mod_p(&m(15), 5).unwrap(), BigUint::from(6u8));
    assert_eq!(idempotent_mod_p(&m(15), 3).unwrap(), BigUint::from(10u8));
    assert_eq!(idempotent_mod_p(&m(2), 2).unwrap(), BigUint::from(1u8));
    assert_eq!(crt_solve(&[(3, 1), (5, 1)]).unwrap(), BigUint::from(1u8));
    assert_eq!(crt_solve(&[(3, 1), (5, 4)]).unwrap(), BigUint::from(4u8));
    assert_eq!(crt_solve(&[(2, 0), (3, 0), (5, 3)]).unwrap(), BigUint::from(18u8));
}

#[test]
fn worked_instance_sets() {
    let i = inst(4, 15);
    let w = enumerate_w(&i).unwrap();
    assert_eq!(w.members, vec![3, 12, 15]);
    assert_eq!(w.slice(1), &[3, 12]);
    assert_eq!(w.slice(5), &[15]);
    assert_eq!(size_w(&i), BigUint::from(3u8));
    assert_eq!(size_w_d(&i, 1).unwrap(), BigUint::from(2u8));
    assert_eq!(size_w_d(&i, 5).unwrap(), BigUint::from(1u8));
    assert_eq!(enumerate_w(&inst(1, 1)).unwrap().members, vec![1]);
    assert!(is_admissible_u64(&i, 3, None).unwrap());
    assert!(!is_admissible_u64(&i, 1, None).unwrap());
    assert!(is_admissible_u64(&i, 18, Some(1)).unwrap());
    assert!(size_w_d(&i, 3).is_err());
}

#[test]
fn modulo_set_offsets() {
    let i = inst(4, 15);
    assert_eq!(least_offset(&i, 3, 5).unwrap(), 1);
    assert_eq!(least_offset(&i, 5, 3).unwrap(), 14);
    assert_eq!(least_offset(&i, 1, 1).unwrap(), 0);
    assert_eq!(canonical_offset(&i, 3, 5).unwrap(), 1);
    assert_eq!(canonical_offset(&i, 1, 1).unwrap(), 0);
    let j = inst(5, 6);
    assert_eq!(canonical_offset(&j, 2, 3).unwrap(), least_offset(&j, 2, 3).unwrap());
    assert_eq!(unit_value(&i, 3).unwrap(), 1);
    assert_eq!(unit_value(&i, 1).unwrap(), 0);
    assert_eq!(unit_value(&inst(9, 1), 5).unwrap(), 1);
}

#[test]
fn spectra_values() {
    let i = inst(4, 15);
    assert_eq!(alpha(&i, 5, 20).unwrap(), 3.0);
    assert!(close(alpha(&i, 5, 4).unwrap(), GOLDEN));
    assert!(close(alpha(&i, 3, 4).unwrap(), 1.0));
    assert!(close(spectrum_product(&i, 1), GOLDEN));
    assert!(close(spectrum_direct(&i, 1).unwrap(), GOLDEN));
    assert!(close(spectrum_product(&i, 5), 3.0));
    assert!(close(spectrum_product(&i, 15), 3.0));
    assert!(close(spectrum_product(&inst(1, 1), 7), 1.0));
    assert!(close(slice_spectrum_product(&i, 5, 1).unwrap(), 1.0));
    assert!(close(slice_spectrum_product(&i, 1, 1).unwrap(), GOLDEN - 1.0));
    assert!(close(slice_spectrum_product(&i, 1, 5).unwrap(), 2.0));
}

#[test]
fn counting_values() {
    let i = inst(4, 15);
    let c = Counter::new(&i).unwrap();
    assert_eq!(c.count_s(&pt("7.5"), None).unwrap(), 1);
    assert_eq!(c.count_s(&pt("20.5"), None).unwrap(), 4);
    assert_eq!(c.count_s(&pt("0.5"), None).unwrap(), 0);
    assert_eq!(c.t_term(None).unwrap(), Point::new(1, 2));
    assert_eq!(Counter::new(&inst(5, 15)).unwrap().t_term(None).unwrap(), Point::from_integer(0));
    assert_eq!(c.t_term(Some(5)).unwrap(), Point::new(1, 2));
    assert_eq!(c.t_term(Some(1)).unwrap(), Point::from_integer(0));
    assert_eq!(delta6(3, 20), Point::new(1, 2));
    assert_eq!(c.t_fracsum(&pt("7.5"), None).unwrap(), Point::from_integer(0));
    assert_eq!(c.t_fracsum(&pt("20.5"), None).unwrap(), Point::new(-2, 5));
    assert_eq!(c.t_fracsum(&pt("0.5"), None).unwrap(), Point::new(-2, 5));
    assert_eq!(c.t_from_counts(&pt("7.5"), None).unwrap(), Point::from_integer(0));
    let one = Counter::new(&inst(1, 1)).unwrap();
    assert_eq!(one.t_fracsum(&pt("2.5"), None).unwrap(), Point::from_integer(0));
    assert!(c.t_fracsum(&pt("7"), None).is_err());
    assert!(error_t_fourier(&i, &pt("7.5"), 100_000, None).unwrap().abs() < 1e-3);
    assert!((error_t_fourier(&i, &pt("20.5"), 100_000, None).unwrap() + 0.4).abs() < 1e-3);
}
