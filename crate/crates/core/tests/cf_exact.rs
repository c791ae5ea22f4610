use cflab::cf::{
    continuant, convergents, expand_rational, fundamental_interval, gauss_step, gauss_step_exact,
    sample_next_quotient, ContinuantRatioState, QuotientSequence,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

fn rat(p: u64, q: u64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `[a₁, …, a_n]` evaluated from the back, with `tail` added to the last quotient.
fn eval_back(word: &[u64], tail: &BigRational) -> BigRational {
    let mut x = tail.clone();
    for &a in word.iter().rev() {
        x = (BigRational::from_integer(BigInt::from(a)) + x).recip();
    }
    x
}

fn seq(v: &[u64]) -> QuotientSequence {
    QuotientSequence::new(v.to_vec()).unwrap()
}

#[test]
fn expansion_examples() {
    assert_eq!(expand_rational(2, 5, 10).unwrap().terms(), &[2, 2]);
    assert_eq!(expand_rational(1, 2, 10).unwrap().terms(), &[2]);
    assert_eq!(expand_rational(113, 355, 10).unwrap().terms(), &[3, 7, 16]);
    assert!(expand_rational(1, 0, 10).is_err());
}

#[test]
fn convergent_examples() {
    let fib: Vec<BigUint> = convergents(&seq(&[1, 1, 1, 1]), 4)
        .unwrap()
        .into_iter()
        .map(|c| c.q)
        .collect();
    assert_eq!(fib, [1u32, 2, 3, 5].map(BigUint::from));
    let c = convergents(&seq(&[2, 2]), 2).unwrap();
    assert_eq!(
        (c[1].p.clone(), c[1].q.clone()),
        (BigUint::from(2u32), BigUint::from(5u32))
    );
    let c = convergents(&seq(&[5]), 1).unwrap();
    assert_eq!(
        (c[0].p.clone(), c[0].q.clone()),
        (BigUint::one(), BigUint::from(5u32))
    );
    assert!(matches!(
        convergents(&seq(&[5]), 2),
        Err(cflab::Error::Length { .. })
    ));
}

#[test]
fn interval_examples() {
    let i = fundamental_interval(&seq(&[1]), 1).unwrap();
    assert_eq!(
        (i.left, i.right, i.length),
        (rat(1, 2), rat(1, 1), rat(1, 2))
    );
    assert_eq!(
        fundamental_interval(&seq(&[2]), 1).unwrap().length,
        rat(1, 6)
    );
    assert_eq!(
        fundamental_interval(&seq(&[1, 1]), 2).unwrap().length,
        rat(1, 6)
    );
}

#[test]
fn gauss_step_examples() {
    let (a, y) = gauss_step(0.4).unwrap().unwrap();
    assert_eq!(a, 2);
    assert!((y - 0.5).abs() < 1e-15);
    let (a, y) = gauss_step_exact(&rat(2, 5)).unwrap().unwrap();
    assert_eq!((a, y), (BigUint::from(2u32), rat(1, 2)));
    let (a, y) = gauss_step_exact(&rat(1, 2)).unwrap().unwrap();
    assert_eq!((a, y), (BigUint::from(2u32), BigRational::zero()));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (a, y) = gauss_step(g).unwrap().unwrap();
    assert_eq!(a, 1);
    assert!((y - g).abs() < 1e-12);
}

#[test]
fn sampler_examples() {
    let s = ContinuantRatioState::new();
    assert_eq!(sample_next_quotient(s, 0.6).unwrap().0, 2);
    assert_eq!(sample_next_quotient(s, 0.4).unwrap().0, 1);
    assert!(sample_next_quotient(s, 0.0).is_err());
    assert!(sample_next_quotient(s, 1.0).is_err());
    for k in 1..50u64 {
        let expected = 1.0 / (k * (k + 1)) as f64;
        assert!((s.probability(k) - expected).abs() < 1e-15);
    }
}

#[test]
fn sampler_telescopes_to_one() {
    for r in [0.0, 0.5, 0.9] {
        let state = ContinuantRatioState::with_ratio(r, 1).unwrap();
        let k_max = 10_000u64;
        let partial: f64 = (1..=k_max).map(|k| state.probability(k)).sum();
        // Σ_{k>K} (1+r)/((k+r)(k+r+1)) = (1+r)/(K+1+r)
        let tail = (1.0 + r) / (k_max as f64 + 1.0 + r);
        assert!((partial + tail - 1.0).abs() < 1e-12, "r = {r}");
    }
}

#[test]
fn sampler_law_is_the_ratio_of_interval_lengths() {
    for prefix in [
        vec![1u64],
        vec![3],
        vec![2, 7],
        vec![1, 1, 1],
        vec![5, 1, 4],
    ] {
        let mut state = ContinuantRatioState::new();
        for &a in &prefix {
            state = state.advance(a);
        }
        let parent = fundamental_interval(&seq(&prefix), prefix.len())
            .unwrap()
            .length;
        for k in 1..30u64 {
            let mut w = prefix.clone();
            w.push(k);
            let child = fundamental_interval(&seq(&w), w.len()).unwrap().length;
            let exact = (child / &parent).to_f64().unwrap();
            assert!(
                (state.probability(k) - exact).abs() < 1e-13,
                "{prefix:?} then {k}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn expansion_roundtrip(den in 1u64..=1_000_000_000, raw in any::<u64>(), extra in 0usize..3) {
        let num = raw % den;
        let s = expand_rational(num, den, 200).unwrap();
        if num == 0 {
            prop_assert!(s.is_empty());
        } else {
            prop_assert!(s.terms().iter().all(|&a| a >= 1));
            if s.len() > 1 {
                prop_assert!(*s.terms().last().unwrap() >= 2);
            }
            let back = eval_back(s.terms(), &BigRational::zero());
            prop_assert_eq!(&back, &rat(num, den));
            let c = convergents(&s, s.len()).unwrap();
            prop_assert_eq!(c.last().unwrap().to_rational(), back);
            let truncated = expand_rational(num, den, (s.len() + extra).max(1)).unwrap();
            prop_assert_eq!(truncated.terms(), s.terms());
        }
    }

    #[test]
    fn interval_endpoints_and_bounds(word in prop::collection::vec(1u64..=100, 1..=30)) {
        let n = word.len();
        let i = fundamental_interval(&seq(&word), n).unwrap();
        // tails 0 and 1 added to the last quotient give the two endpoints
        let a = eval_back(&word, &BigRational::zero());
        let b = eval_back(&word, &BigRational::one());
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert_eq!(&i.left, &lo);
        prop_assert_eq!(&i.right, &hi);
        prop_assert_eq!(&i.length, &(&hi - &lo));
        let q = BigInt::from(continuant(&word));
        let q2 = BigRational::from_integer(&q * &q);
        let two = BigRational::from_integer(BigInt::from(2));
        prop_assert!(i.length <= q2.recip());
        prop_assert!(i.length >= (two * q2).recip());
    }

    #[test]
    fn continuant_product_bounds(a in prop::collection::vec(1u64..=1000, 1..=20), b in prop::collection::vec(1u64..=1000, 1..=20)) {
        let ab: Vec<u64> = a.iter().chain(&b).copied().collect();
        let prod = continuant(&a) * continuant(&b);
        let whole = continuant(&ab);
        prop_assert!(prod <= whole);
        prop_assert!(whole <= prod * 2u32);
    }

    #[test]
    fn deletion_ratio_bounds(word in prop::collection::vec(1u64..=1000, 2..=25), pos in any::<prop::sample::Index>()) {
        let k = pos.index(word.len());
        let mut deleted = word.clone();
        let ak = deleted.remove(k);
        let q = BigRational::from_integer(BigInt::from(continuant(&word)));
        let qd = BigRational::from_integer(BigInt::from(continuant(&deleted)));
        let ratio = q / qd;
        let ak = BigRational::from_integer(BigInt::from(ak));
        prop_assert!(ratio <= &ak + BigRational::one());
        prop_assert!(ratio >= (ak + BigRational::one()) / BigRational::from_integer(BigInt::from(2)));
    }

    #[test]
    fn ratio_state_tracks_continuants(word in prop::collection::vec(1u64..=50, 1..=40)) {
        let mut state = ContinuantRatioState::new();
        for &a in &word {
            state = state.advance(a);
        }
        let (q_prev, q) = cflab::cf::continuant_pair(&word);
        let exact = q_prev.to_f64().unwrap() / q.to_f64().unwrap();
        prop_assert!((state.ratio() - exact).abs() < 1e-12);
        prop_assert!(state.ratio() > 0.0 && state.ratio() < 1.0);
        prop_assert_eq!(state.depth(), word.len() as u64);
    }
}
