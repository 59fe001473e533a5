use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

use pellroot::corpus::golden;
use pellroot::eval::{convergence_table_at, digits_per_term, EXACT_SUM_TERMS};
use pellroot::hyper::terms;
use pellroot::{
    amplify_binomial, amplify_power, build, evaluate, fundamental_solution, integer_sqrt, partial_sum, term_ratio,
    BigFixed, EvalConfig, PellInstance, PellSolution, SeriesFamily, SeriesSpec, Theorem,
};

const RADICANDS: [u32; 6] = [2, 3, 5, 7, 11, 13];

fn base(p: u32) -> PellSolution {
    fundamental_solution(&PellInstance::new(p).unwrap())
}

fn corpus_specs() -> Vec<SeriesSpec> {
    golden()
        .iter()
        .map(|e| {
            let sol = amplify_power(&base(e.p.parse().unwrap()), e.s.parse().unwrap()).unwrap();
            build(e.theorem, &sol).unwrap()
        })
        .collect()
}

#[test]
fn integer_sqrt_million_random_values() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    for _ in 0..1_000_000 {
        let words: [u32; 8] = rng.gen();
        let n = BigUint::new(words.to_vec()) >> rng.gen_range(0..256u32);
        let r = integer_sqrt(&n);
        assert!(&r * &r <= n);
        assert!((&r + 1u32) * (&r + 1u32) > n);
    }
}

#[test]
fn term_ratio_tends_to_one_from_below() {
    for f in SeriesFamily::ALL {
        let gaps: Vec<BigRational> =
            [10u64, 100, 1000, 10_000].iter().map(|&k| BigRational::one() - term_ratio(f, k)).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0] && w[1].is_positive()), "{f:?}");
        assert!(gaps[3] < BigRational::new(1.into(), 1000.into()));
    }
}

#[test]
fn squared_expansion_recovers_p() {
    // c^2 F(z)^2 = p, checked on the 50-digit evaluation: |v^2 - p| < 3 sqrt(p) 10^-50.
    let cfg = EvalConfig::default();
    for p in RADICANDS {
        for s in 1..=4 {
            let sol = amplify_power(&base(p), s).unwrap();
            for t in Theorem::ALL {
                let Ok(spec) = build(t, &sol) else { continue };
                let r = evaluate(&spec, 50, &cfg).unwrap();
                let v: BigInt = r.decimal.replace('.', "").parse().unwrap();
                let scale = BigInt::from(10u32).pow(100);
                let diff = (&v * &v - BigInt::from(p) * &scale).abs();
                assert!(diff < BigInt::from(3 * 4) * BigInt::from(10u32).pow(50), "p={p} s={s} {t}");
            }
        }
    }
}

#[test]
fn argument_shrinks_with_power() {
    for p in RADICANDS {
        for t in Theorem::ALL {
            let mut prev: Option<BigRational> = None;
            for s in 1..=8 {
                let Ok(spec) = build(t, &amplify_power(&base(p), s).unwrap()) else { continue };
                let z = spec.argument().abs();
                if let Some(prev) = &prev {
                    assert!(&z < prev, "p={p} {t} s={s}");
                }
                prev = Some(z);
            }
        }
    }
}

#[test]
fn fixed_point_sum_tracks_exact_sum() {
    let scale = 80;
    for spec in corpus_specs().iter().step_by(5) {
        for k in [1usize, 7, 20] {
            let exact = partial_sum(spec.family(), spec.argument(), k).unwrap();
            let fixed = terms(spec.family(), spec.argument())
                .take(k)
                .fold(BigFixed::zero(scale), |acc, t| &acc + &BigFixed::from_rational(&t, scale));
            let err = (fixed.to_rational() - exact).abs();
            assert!(err < BigRational::new(BigInt::from(k), BigInt::from(10u32).pow(scale)));
        }
    }
}

#[test]
fn long_evaluations_use_recurrence_and_still_agree() {
    let cfg = EvalConfig::default();
    for p in RADICANDS {
        let spec = build(Theorem::E, &base(p)).or_else(|_| build(Theorem::A, &base(p))).unwrap();
        let r = evaluate(&spec, 400, &cfg).unwrap();
        assert!(r.oracle_agrees, "p={p}");
        if digits_per_term(&spec) < 400.0 / EXACT_SUM_TERMS as f64 {
            assert!(r.terms_used > EXACT_SUM_TERMS);
        }
    }
}

#[test]
fn digit_gain_per_term_after_the_second() {
    for spec in corpus_specs() {
        let dpt = digits_per_term(&spec);
        let precision = 250;
        let n = ((precision as f64 - 20.0) / dpt) as u64;
        let table = convergence_table_at(&spec, n, precision);
        let step = dpt.floor() as u32 - 1;
        for w in table.windows(2).skip(1) {
            assert!(w[1].1 >= w[0].1 + step, "{spec}: {w:?}");
        }
    }
}

#[test]
fn reproduction_is_deterministic() {
    let cfg = EvalConfig::default();
    let a = pellroot::reproduce(&golden(), None, &cfg).render();
    let b = pellroot::reproduce(&golden(), None, &cfg).render();
    assert_eq!(a, b);
    assert!(a.ends_with("72/72 expansions reproduced\n"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn amplification_is_a_homomorphism(i in 0usize..6, s in 1u32..9, t in 1u32..9) {
        let b = base(RADICANDS[i]);
        let lhs = amplify_power(&b, s + t).unwrap();
        let rhs = amplify_binomial(&b, s).unwrap().compose(&amplify_power(&b, t).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mirrored_argument_gives_mirrored_terms(n in -1000i64..1000, d in 1001i64..100_000, f in 0usize..3) {
        let family = SeriesFamily::ALL[f];
        let z = BigRational::new(n.into(), d.into());
        let neg = -z.clone();
        for (a, b) in terms(family, &z).zip(terms(family, &neg)).take(12) {
            prop_assert_eq!(a.abs(), b.abs());
        }
    }

    #[test]
    fn spec_json_round_trips(p in prop::sample::select(vec![2u32, 3, 6, 7, 10, 13, 19, 61]), s in 1u32..6, t in 0usize..6) {
        let sol = amplify_power(&base(p), s).unwrap();
        if let Ok(spec) = build(Theorem::ALL[t], &sol) {
            let json = spec.to_json();
            let back = SeriesSpec::from_json(&json).unwrap();
            prop_assert_eq!(&back, &spec);
            prop_assert_eq!(back.to_json(), json);
        }
    }

    #[test]
    fn prefix_sums_are_consistent(f in 0usize..3, k in 1usize..30) {
        let family = SeriesFamily::ALL[f];
        let z = BigRational::new(1.into(), 7.into());
        let a = partial_sum(family, &z, k).unwrap();
        let b = partial_sum(family, &z, k + 1).unwrap();
        prop_assert!(b > a);
        prop_assert!(!(b - a).is_zero());
    }
}
