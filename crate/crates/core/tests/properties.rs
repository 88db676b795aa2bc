use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

use rfubini::combinatorics::{
    factorial, fubini, r_fubini, r_stirling_explicit, r_stirling_recurrence, stirling2,
    StirlingQuery,
};
use rfubini::modular::{
    factorize, mod_pow, r_fubini_mod, residue_stream, totient, truncation_bound,
    weighted_r_stirling_mod, Modulus,
};
use rfubini::oracles::{enumerate_partitions, enumerate_weak_orders, naive_min_period};
use rfubini::periodicity::{detect_in_sequence, predict_period, PeriodBound};

fn q(n: usize, m: usize, r: usize) -> StirlingQuery {
    StirlingQuery::new(n, m, r).unwrap()
}

fn modulus(s: u64) -> Modulus {
    Modulus::new(s).unwrap()
}

fn reduce(x: &BigUint, s: u64) -> u64 {
    (x % s).to_u64().unwrap()
}

#[test]
fn explicit_and_recurrence_agree_up_to_25() {
    for n in 1..=25 {
        for m in 1..=n {
            for r in 1..=m {
                assert_eq!(
                    r_stirling_explicit(&q(n, m, r)),
                    r_stirling_recurrence(&q(n, m, r)),
                    "n={n} m={m} r={r}"
                );
            }
        }
    }
}

#[test]
fn lowering_r_identity() {
    for n in 2..=20 {
        for m in 2..=n {
            for r in 2..=m {
                let lhs = r_stirling_explicit(&q(n, m, r));
                let a = r_stirling_explicit(&q(n, m, r - 1));
                let b = r_stirling_explicit(&q(n - 1, m, r - 1)) * (r - 1);
                assert_eq!(lhs, a - b, "n={n} m={m} r={r}");
            }
        }
    }
}

#[test]
fn r_equal_one_is_classical() {
    for n in 1..=20 {
        for m in 1..=n {
            assert_eq!(r_stirling_explicit(&q(n, m, 1)), stirling2(n, m));
        }
    }
}

#[test]
fn diagonal_closed_forms() {
    for r in 1..=8usize {
        for n in 0..=12u32 {
            let rb = BigUint::from(r);
            assert_eq!(r_stirling_explicit(&q(n as usize + r, r, r)), rb.pow(n));
            if n >= 1 {
                let next = BigUint::from(r + 1).pow(n) - rb.pow(n);
                assert_eq!(r_stirling_explicit(&q(n as usize + r, r + 1, r)), next);
            }
        }
    }
}

#[test]
fn oracles_agree_with_formulas() {
    for r in 1..=8 {
        for n in 0..=(8 - r) {
            assert_eq!(
                r_fubini(n, r).unwrap(),
                enumerate_weak_orders(n, r).unwrap()
            );
        }
    }
    for n in 1..=9 {
        for m in 1..=n {
            for r in 1..=m {
                assert_eq!(
                    r_stirling_explicit(&q(n, m, r)),
                    enumerate_partitions(n, m, r).unwrap()
                );
            }
        }
    }
}

#[test]
fn r_one_shifts_fubini() {
    for n in 0..=15 {
        assert_eq!(r_fubini(n, 1).unwrap(), fubini(n + 1));
    }
}

#[test]
fn modular_matches_exact() {
    for r in 1..=4 {
        for n in 0..=20 {
            let exact = r_fubini(n, r).unwrap();
            for s in 1..=64 {
                assert_eq!(
                    r_fubini_mod(n, r, modulus(s)).unwrap().value(),
                    reduce(&exact, s),
                    "n={n} r={r} s={s}"
                );
            }
        }
    }
}

#[test]
fn truncated_terms_vanish() {
    for r in 1..=4 {
        for s in 1..=64 {
            let bound = truncation_bound(r, modulus(s));
            for n in 0..=20 {
                for k in bound..=n {
                    let term = factorial(k + r) * r_stirling_explicit(&q(n + r, k + r, r));
                    assert!(
                        reduce(&term, s) == 0,
                        "r={r} s={s} n={n} k={k} survives truncation"
                    );
                }
            }
        }
    }
}

#[test]
fn weighted_values_match_exact() {
    for n in 1..=18 {
        for m in 1..=n {
            for r in 1..=m {
                let exact = factorial(m) * r_stirling_explicit(&q(n, m, r));
                for s in [2, 7, 12, 64, 97, 360] {
                    let got = weighted_r_stirling_mod(n, m, r, modulus(s)).unwrap();
                    assert_eq!(got.value(), reduce(&exact, s));
                }
            }
        }
    }
}

#[test]
fn totient_counts_coprimes() {
    for s in 1..=2000u64 {
        let direct = (1..=s).filter(|&j| j.gcd(&s) == 1).count() as u64;
        assert_eq!(totient(modulus(s)), direct, "s={s}");
    }
}

#[test]
fn euler_theorem_smoke() {
    for s in 2..=500u64 {
        let phi = totient(modulus(s));
        for j in 1..s {
            if j.gcd(&s) == 1 {
                assert_eq!(mod_pow(j as i64, phi, modulus(s)).value(), 1);
            }
        }
    }
}

#[test]
fn lcm_composition() {
    for r in 1..=6 {
        for s1 in 2..=40u64 {
            for s2 in 2..=40u64 {
                if s1.gcd(&s2) != 1 {
                    continue;
                }
                let w1 = predict_period(r, modulus(s1)).unwrap().omega;
                let w2 = predict_period(r, modulus(s2)).unwrap().omega;
                let w = predict_period(r, modulus(s1 * s2)).unwrap().omega;
                assert_eq!(w, w1.lcm(&w2), "r={r} s1={s1} s2={s2}");
            }
        }
    }
}

#[test]
fn small_odd_prime_powers_give_zero_residues() {
    for r in 1..=6usize {
        for q in [3u64, 5, 9] {
            if q as usize <= r {
                let v = residue_stream(r, modulus(q)).unwrap().take_values(40);
                assert!(v.iter().all(|&x| x == 0), "r={r} q={q}");
            }
        }
    }
}

#[test]
fn bounded_and_unbounded_detection_agree() {
    for r in 1..=6 {
        for s in 2..=300 {
            let p = predict_period(r, modulus(s)).unwrap();
            let bound = p.bound();
            let seq = residue_stream(r, modulus(s))
                .unwrap()
                .take_values(bound.required_window() + 48);
            let with = detect_in_sequence(&seq, Some(bound)).unwrap();
            let without = detect_in_sequence(&seq, None).unwrap();
            if with.conclusive && without.conclusive {
                assert_eq!(
                    (with.preperiod, with.period),
                    (without.preperiod, without.period),
                    "r={r} s={s}"
                );
            }
        }
    }
}

#[test]
fn naive_scan_matches_unbounded_detection_on_residues() {
    for r in 1..=4 {
        for s in 2..=80 {
            let seq = residue_stream(r, modulus(s)).unwrap().take_values(96);
            assert_eq!(
                naive_min_period(&seq),
                detect_in_sequence(&seq, None).unwrap(),
                "r={r} s={s}"
            );
        }
    }
}

proptest! {
    #[test]
    fn naive_scan_matches_unbounded_detection(seq in prop::collection::vec(0u64..4, 2..40)) {
        prop_assert_eq!(naive_min_period(&seq), detect_in_sequence(&seq, None).unwrap());
    }

    #[test]
    fn planted_period_is_found(
        head in prop::collection::vec(10u64..20, 0..6),
        cycle in prop::collection::vec(0u64..3, 1..6),
        reps in 4usize..7,
    ) {
        let reps = reps.max(head.len());
        let mut seq = head.clone();
        for _ in 0..reps {
            seq.extend_from_slice(&cycle);
        }
        let bound = PeriodBound { preperiod: head.len() as u64, period: cycle.len() as u64 };
        if seq.len() >= bound.required_window() {
            let obs = detect_in_sequence(&seq, Some(bound)).unwrap();
            prop_assert!(obs.conclusive);
            let p = obs.period.unwrap();
            prop_assert_eq!(cycle.len() as u64 % p, 0);
            prop_assert!(obs.preperiod.unwrap() <= head.len() as u64);
        }
        let obs = detect_in_sequence(&seq, None).unwrap();
        prop_assert!(obs.conclusive);
        prop_assert_eq!(cycle.len() as u64 % obs.period.unwrap(), 0);
    }

    #[test]
    fn factorization_multiplies_back(s in 1u64..1_000_000) {
        let f = factorize(modulus(s));
        let product: u64 = f.factors().iter().map(|pp| pp.value()).product();
        prop_assert_eq!(product, s);
        let primes: Vec<u64> = f.factors().iter().map(|pp| pp.p).collect();
        prop_assert!(primes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn stream_matches_pointwise(r in 1usize..7, s in 1u64..200, count in 1usize..40) {
        let v = residue_stream(r, modulus(s)).unwrap().take_values(count);
        for (n, x) in v.iter().enumerate() {
            prop_assert_eq!(*x, r_fubini_mod(n, r, modulus(s)).unwrap().value());
        }
    }

    #[test]
    fn explicit_sum_is_integral(
        (n, m, r) in (1usize..30)
            .prop_flat_map(|n| (Just(n), 1..=n))
            .prop_flat_map(|(n, m)| (Just(n), Just(m), 1..=m))
    ) {
        let v = r_stirling_explicit(&q(n, m, r));
        prop_assert!(!v.is_zero());
        prop_assert_eq!(v, r_stirling_recurrence(&q(n, m, r)));
    }
}
