use std::collections::HashSet;

use proptest::prelude::*;
use proptest::sample::select;

use discrim::casework::counting::DEFAULT_BUDGET;
use discrim::casework::{classify, construct_collision, count_n, decomposition, n_lower_bound, window, CaseTag};
use discrim::charsum::{ap_direct, ap_kloosterman, ell_p, gauss_sum, half_sum, l_p};
use discrim::discriminator::{delta_bruteforce, delta_closed_form, find_collision, is_injective, InjectivityScanner};
use discrim::modarith::{ceil_log3, factorize, legendre, lift_root_prime_power, sqrt_mod_prime};
use discrim::report::{load_log, params, JsonlSink, RecordSink, VerificationRecord};
use discrim::suites::partition_point;

fn trial_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| trial_prime(n)).collect()
}

fn naive_pow(base: u64, exp: u64, m: u64) -> u64 {
    (0..exp).fold(1u128, |acc, _| acc * base as u128 % m as u128) as u64
}

/// `f(x) = x^3 + x mod m` with no shared code path.
fn f_mod(x: u64, m: u64) -> u128 {
    let (x, m) = (x as u128 % m as u128, m as u128);
    (x * x % m * x + x) % m
}

fn injective_by_set(n: u64, m: u64) -> bool {
    let mut seen = HashSet::new();
    (1..=n).all(|a| seen.insert(f_mod(a, m)))
}

fn naive_ceil_log3(n: u64) -> u32 {
    let (mut k, mut pow) = (0, 1u64);
    while pow < n {
        pow *= 3;
        k += 1;
    }
    k
}

proptest! {
    #[test]
    fn legendre_is_euler_criterion(p in select(primes(3, 200)), a in -1000i128..1000) {
        let e = naive_pow(a.rem_euclid(p as i128) as u64, (p - 1) / 2, p);
        let expected = if e == p - 1 { -1 } else { e as i8 };
        prop_assert_eq!(legendre(a, p).unwrap(), expected);
    }

    #[test]
    fn square_roots_square_back(p in select(primes(3, 200)), a in 0i128..200) {
        let a = a % p as i128;
        match sqrt_mod_prime(a, p).unwrap() {
            Some(x) => prop_assert_eq!(x as u128 * x as u128 % p as u128, a as u128),
            None => prop_assert_eq!(legendre(a, p).unwrap(), -1),
        }
    }

    #[test]
    fn hensel_lift_squares_back(p in select(primes(3, 50)), a in 1i128..10_000, r in 1u32..=5) {
        prop_assume!(a % p as i128 != 0);
        if let Some(x0) = sqrt_mod_prime(a, p).unwrap() {
            let q = (p as u128).pow(r);
            let x = lift_root_prime_power(x0, a, p, r).unwrap() as u128;
            prop_assert_eq!(x * x % q, a as u128 % q);
        }
    }

    #[test]
    fn factorization_reconstructs(m in 1u64..1_000_000) {
        let f = factorize(m);
        let product: u64 = f.factors().iter().map(|&(q, e)| q.pow(e)).product();
        prop_assert_eq!(product, m);
        prop_assert!(f.factors().iter().all(|&(q, _)| trial_prime(q)));
    }

    #[test]
    fn ceil_log3_matches_repeated_multiplication(n in 1u64..10_000_000) {
        prop_assert_eq!(ceil_log3(n), naive_ceil_log3(n));
    }

    #[test]
    fn ap_forms_agree(p in select(primes(5, 199)), d in 1u64..199, u in 0i64..199) {
        let (delta, u) = (1 + d % (p - 1), u % p as i64);
        let direct = ap_direct(p, delta, u).unwrap();
        prop_assert_eq!(&direct, &ap_kloosterman(p, delta, u).unwrap());
        if u == 0 {
            prop_assert_eq!(direct.rational_value(), Some(-1));
        } else {
            prop_assert!(direct.abs() <= 2.0 * (p as f64).sqrt() + 1e-6);
        }
    }

    #[test]
    fn gauss_sum_norm(p in select(primes(3, 199))) {
        let tau = gauss_sum(p).unwrap();
        prop_assert_eq!((&tau * &tau.conj()).rational_value(), Some(p as i64));
    }

    #[test]
    fn half_sum_is_minus_one(p in select(primes(5, 499)), d in 1u64..499) {
        prop_assert_eq!(half_sum(p, 1 + d % (p - 1)).unwrap(), -1);
    }

    #[test]
    fn ell_within_bound(p in select(primes(5, 997)), d in 1u64..997) {
        prop_assert!(ell_p(p, 1 + d % (p - 1)).unwrap() <= l_p(p).unwrap());
    }

    #[test]
    fn l_p_below_a_third(p in select(primes(5, 20_000))) {
        prop_assert_eq!(3 * l_p(p).unwrap() < p, p != 7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_agrees_and_is_sandwiched(n in 1u64..3000) {
        let brute = delta_bruteforce(n, false).unwrap().result;
        let closed = delta_closed_form(n).unwrap();
        prop_assert_eq!(brute.delta_value, closed.delta_value);
        prop_assert!(n <= brute.delta_value && brute.delta_value <= 3u64.pow(naive_ceil_log3(n)));
        prop_assert!(injective_by_set(n, brute.delta_value));
        if brute.delta_value > n {
            prop_assert!(!injective_by_set(n, brute.delta_value - 1));
        }
    }

    #[test]
    fn scanner_matches_hash_set(n in 1u64..600, m in 1u64..2000) {
        prop_assert_eq!(is_injective(n, m), injective_by_set(n, m));
        prop_assert_eq!(InjectivityScanner::new().is_injective(n, m), injective_by_set(n, m));
    }

    #[test]
    fn witnesses_recheck(n in 2u64..600, m in 2u64..2000) {
        if let Some(w) = find_collision(n, m) {
            prop_assert!(w.a < w.b && w.b <= n && w.m == m);
            prop_assert_eq!(f_mod(w.a, m), f_mod(w.b, m));
        }
    }

    #[test]
    fn rejection_is_monotone(n in 1u64..400, extra in 0u64..400, m in 1u64..1500) {
        if !is_injective(n, m) {
            prop_assert!(!is_injective(n + extra, m));
        }
    }

    #[test]
    fn no_three_adic_zero(a in 1u64..10_000, b in 1u64..10_000) {
        prop_assume!(a < b);
        prop_assert_ne!((a * a + a * b + b * b + 1) % 3, 0);
    }

    #[test]
    fn partition_is_total_and_constructive(n in 1u64..2000, pick in any::<u64>()) {
        let (lo, hi) = window(n);
        prop_assume!(hi > lo);
        let m = lo + pick % (hi - lo);
        let tag = classify(&factorize(m), n).unwrap();
        prop_assert!(tag.is_well_formed());
        prop_assert_eq!(tag.modulus(), m);
        match partition_point(&mut InjectivityScanner::new(), n, m).unwrap() {
            None => {
                let is_power = matches!(tag, CaseTag::PowerOfThree { .. });
                prop_assert!(is_power);
            }
            Some(point) => prop_assert!(point.conforms(), "{:?}", point),
        }
    }

    #[test]
    fn construction_satisfies_collision_algebra(n in 1u64..2000, pick in any::<u64>()) {
        let (lo, hi) = window(n);
        prop_assume!(hi > lo);
        let m = lo + pick % (hi - lo);
        let tag = classify(&factorize(m), n).unwrap();
        let is_power = matches!(tag, CaseTag::PowerOfThree { .. });
        prop_assume!(!is_power);
        if let Some(c) = construct_collision(m, n, &tag).unwrap() {
            let (a, b, m) = (c.witness.a as u128, c.witness.b as u128, m as u128);
            prop_assert_eq!((b - a) % m * ((a * a + a * b + b * b + 1) % m) % m, 0);
            prop_assert!(c.witness.b <= n);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decomposition_and_lower_bound(p in select(primes(5, 50)), t in 1u32..=3, delta in 1u64..=3) {
        prop_assume!(p.pow(t) <= 3000);
        let d = decomposition(p, t, delta, DEFAULT_BUDGET).unwrap();
        prop_assert!(d.holds());
        let n = count_n(p, t, delta).unwrap().n.unwrap();
        prop_assert!(n_lower_bound(p, t).unwrap().admits(n));
    }

    #[test]
    fn log_roundtrip(ns in proptest::collection::vec(1u64..1_000_000, 1..20)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.jsonl");
        let records: Vec<VerificationRecord> = ns
            .iter()
            .map(|&n| VerificationRecord {
                suite: "delta_verify".into(),
                params: params([("n", n)]),
                computed: n.to_string(),
                expected: n.to_string(),
                pass: n % 2 == 0,
                elapsed_us: n,
                worker: 0,
            })
            .collect();
        let mut sink = JsonlSink::append(&path).unwrap();
        for r in &records {
            sink.emit(r).unwrap();
        }
        drop(sink);
        prop_assert_eq!(load_log(&path).unwrap(), records);
    }
}
