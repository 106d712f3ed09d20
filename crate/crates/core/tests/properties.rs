use goldbach_core::admissible::{enumerate_w, is_admissible_u64, size_w, size_w_d};
use goldbach_core::arith::{gcd, is_squarefree};
use goldbach_core::counting::{half_point, Counter, Point};
use goldbach_core::modulus::{
    crt_solve, idempotent_mod_p, inverse_bar, ProblemInstance, SquareFreeModulus,
};
use goldbach_core::scanner::{check_ubh, check_ubh_brute, CheckpointEntry, UbhOptions};
use goldbach_core::spectra::{spectrum_direct, spectrum_product};
use goldbach_core::window::window_offsets;
use num_bigint::BigUint;
use proptest::prelude::*;

fn squarefree(limit: u64) -> impl Strategy<Value = u64> {
    (1..=limit).prop_filter("squarefree", |&p| is_squarefree(p))
}

fn instance(limit: u64, n_max: u64) -> impl Strategy<Value = ProblemInstance> {
    (1..=n_max, squarefree(limit)).prop_map(|(n, p)| ProblemInstance::from_values(n, p).unwrap())
}

fn modulus_of(i: &ProblemInstance) -> u64 {
    i.modulus().as_u64().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pattern_structure(i in instance(2310, 300)) {
        let p = modulus_of(&i);
        let w = enumerate_w(&i).unwrap();
        prop_assert_eq!(size_w(&i), BigUint::from(w.len()));
        let mut total = 0usize;
        for d in i.p_6n().divisors() {
            let slice = w.slice(d);
            prop_assert_eq!(size_w_d(&i, d).unwrap(), BigUint::from(slice.len()));
            total += slice.len();
        }
        prop_assert_eq!(total, w.len());
        for &m in &w.members {
            prop_assert_eq!(m % i.index(), 0);
            prop_assert!(m == p || w.contains(p - m));
        }
        prop_assert_eq!(gcd(i.index(), i.n()), 1);
    }

    #[test]
    fn inverse_bar_inverts_on_cofactor(p in squarefree(30030), pick in any::<u64>()) {
        let m = SquareFreeModulus::from_u64(p).unwrap();
        let divisors = m.divisors();
        let d = divisors[(pick % divisors.len() as u64) as usize];
        let pd = p / d;
        let dbar = inverse_bar(&m, d).unwrap();
        prop_assert_eq!((dbar * d) % pd, BigUint::from(1u8) % pd);
    }

    #[test]
    fn idempotents_split(p in squarefree(30030)) {
        let m = SquareFreeModulus::from_u64(p).unwrap();
        for &q in m.factors() {
            let e = idempotent_mod_p(&m, q).unwrap();
            for &r in m.factors() {
                prop_assert_eq!(&e % r, BigUint::from(u8::from(r == q)));
            }
        }
    }

    #[test]
    fn crt_reproduces_residues(p in squarefree(30030), seed in any::<u64>()) {
        let m = SquareFreeModulus::from_u64(p).unwrap();
        let system: Vec<(u64, u64)> = m.factors().iter().map(|&q| (q, seed % q)).collect();
        let x = crt_solve(&system).unwrap();
        prop_assert!(x >= BigUint::from(1u8) && x <= BigUint::from(p));
        for (q, r) in system {
            prop_assert_eq!(&x % q, BigUint::from(r));
        }
    }

    #[test]
    fn counting_formula_and_slices(i in instance(2310, 150), k in 0i64..7000) {
        let c = Counter::new(&i).unwrap();
        let x = half_point(k);
        let s = c.count_s(&x, None).unwrap();
        let brute = (1..=k as u64).filter(|&m| is_admissible_u64(&i, m, None).unwrap()).count() as u64;
        prop_assert_eq!(s, brute);
        let t = c.t_fracsum(&x, None).unwrap();
        prop_assert_eq!(Point::from_integer(s as i128), c.linear_term(&x, None).unwrap() - c.t_term(None).unwrap() - t);
        let by_slice: u64 = i.p_6n().divisors().into_iter().map(|d| c.count_s(&x, Some(d)).unwrap()).sum();
        prop_assert_eq!(by_slice, s);
    }

    #[test]
    fn error_term_is_periodic(i in instance(2310, 150), k in 0i64..2310) {
        let c = Counter::new(&i).unwrap();
        let p = modulus_of(&i) as i64;
        let x = half_point(k);
        prop_assert_eq!(c.t_fracsum(&x, None).unwrap(), c.t_fracsum(&half_point(k + p), None).unwrap());
    }

    #[test]
    fn spectrum_forms_agree(i in instance(2310, 200), k in 1i64..5000) {
        let w = u64::try_from(size_w(&i)).unwrap() as f64;
        let direct = spectrum_direct(&i, k).unwrap();
        prop_assert!((direct - spectrum_product(&i, k)).abs() <= 1e-9 * w.max(1.0));
    }

    #[test]
    fn window_matches_scan(i in instance(2310, 150), c in any::<u64>(), h in 1u64..1000) {
        let p = modulus_of(&i);
        prop_assume!(p >= 4);
        let center = c % p;
        let h = 1 + h % ((p - 1) / 2);
        for d in i.p_6n().divisors() {
            let got = window_offsets(&i, &|q| center % q, h, d).unwrap();
            let want: Vec<i64> = (1 - h as i64..=h as i64)
                .filter(|&delta| {
                    let v = (center as i64 + delta).rem_euclid(p as i64) as u64;
                    is_admissible_u64(&i, v, Some(d)).unwrap()
                })
                .collect();
            prop_assert_eq!(got, want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sweep_matches_brute_force(n in 2u64..700, theta in any::<bool>()) {
        let opts = UbhOptions { theta };
        prop_assert_eq!(check_ubh(n, opts).unwrap(), check_ubh_brute(n, opts).unwrap());
    }

    #[test]
    fn checkpoint_lines_round_trip(n in 2u64..3000) {
        let v = check_ubh(n, UbhOptions::default()).unwrap();
        let e = CheckpointEntry::summarize(n, &v);
        prop_assert_eq!(CheckpointEntry::parse_line(&e.line()).unwrap(), e);
    }
}
