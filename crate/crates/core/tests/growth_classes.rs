use cflab::growth::{
    classify_series, growth_constants, wlog_threshold, Classification::*, GrowthFunction, Theorem,
};
use proptest::prelude::*;

fn pl(a: f64, b: f64) -> GrowthFunction {
    GrowthFunction::power_log(a, b).unwrap()
}

#[test]
fn log_phi_examples() {
    let e = GrowthFunction::exponential(2.0).unwrap();
    assert!((e.log_phi(10) - 10.0 * 2f64.ln()).abs() < 1e-14);
    let n = 7u64; // nearest integer to e²
    let ln = (n as f64).ln();
    assert!((pl(1.0, 2.0).log_phi(n) - (ln + 2.0 * ln.ln())).abs() < 1e-14);
    let d = GrowthFunction::doubly_exponential(2.0, 3.0).unwrap();
    assert!((d.log_phi(4) - 81.0 * 2f64.ln()).abs() < 1e-12);
    assert_eq!(
        d.exact_value(4),
        Some(num_bigint::BigUint::from(2u32).pow(81))
    );
}

#[test]
fn growth_constant_examples() {
    let c = growth_constants(&GrowthFunction::exponential(2.0).unwrap()).unwrap();
    assert!((c.big_b() - 2.0).abs() < 1e-15 && c.small_b() == 1.0);
    let c = growth_constants(&pl(3.0, 1.5)).unwrap();
    assert_eq!((c.big_b(), c.small_b()), (1.0, 1.0));
    let c = growth_constants(&GrowthFunction::doubly_exponential(2.0, 3.0).unwrap()).unwrap();
    assert!(c.big_b().is_infinite() && (c.small_b() - 3.0).abs() < 1e-15);
    let short = GrowthFunction::table(vec![2.0; 50]).unwrap();
    assert!(growth_constants(&short).is_err());
}

#[test]
fn table_constants_follow_the_running_liminf() {
    let values: Vec<f64> = (1..=400).map(|n| 3f64.powi(n)).collect();
    let c = growth_constants(&GrowthFunction::table(values).unwrap()).unwrap();
    assert!((c.big_b() - 3.0).abs() < 1e-9);
    assert_eq!(c.horizon, Some(400));
}

#[test]
fn classification_examples() {
    assert_eq!(classify_series(&pl(1.0, 2.0), Theorem::Main3), Divergent);
    assert_eq!(classify_series(&pl(1.2, 0.0), Theorem::Main3), Convergent);
    assert_eq!(classify_series(&pl(1.0, 1.0), Theorem::Hwx(1)), Divergent);
    assert_eq!(classify_series(&pl(1.0, 0.5), Theorem::Ttw), Divergent);
    assert_eq!(classify_series(&pl(1.0, 0.6), Theorem::Ttw), Convergent);
    assert_eq!(classify_series(&pl(1.0, 1.0), Theorem::Ttw), Convergent);
    assert_eq!(classify_series(&pl(1.0, 1.0), Theorem::Tz), Divergent);
    assert_eq!(classify_series(&pl(1.0, 1.1), Theorem::Tz), Convergent);
    assert_eq!(
        classify_series(&GrowthFunction::exponential(1.01).unwrap(), Theorem::Main3),
        Convergent
    );
}

/// Partial sums of a series over the dyadic block `[2^k, 2^{k+1})`.
fn dyadic_block(f: &GrowthFunction, t: Theorem, k: u32) -> f64 {
    (1u64 << k..1u64 << (k + 1)).map(|n| t.term(f, n)).sum()
}

#[test]
fn dyadic_blocks_agree_with_classification() {
    // divergent borderline series have dyadic blocks bounded below by c/k,
    // convergent power-type ones decay geometrically
    let cases = [
        (pl(1.0, 1.0), Theorem::Hwx(1)),
        (pl(1.0, 2.0), Theorem::Main3),
        (pl(2.0, 0.0), Theorem::Main3),
        (pl(1.5, 0.0), Theorem::Ttw),
    ];
    for (f, t) in cases {
        let b10 = dyadic_block(&f, t, 10);
        let b20 = dyadic_block(&f, t, 20);
        match classify_series(&f, t) {
            Divergent => assert!(b20 > 0.5 * b10 * 10.0 / 20.0, "{f:?} {t:?}"),
            Convergent => assert!(b20 < 0.5 * b10, "{f:?} {t:?}"),
            Inconclusive => panic!("parametric family left inconclusive"),
        }
    }
}

#[test]
fn normalization_preserves_the_length_three_dichotomy() {
    for (f, expected) in [
        (pl(1.0, 2.0), Divergent),
        (pl(1.0, 1.5), Divergent),
        (pl(1.0, 3.0), Convergent),
        (pl(1.2, 0.0), Convergent),
        (pl(2.0, 0.0), Convergent),
    ] {
        let psi = f.clone().normalized();
        assert_eq!(classify_series(&f, Theorem::Main3), expected);
        assert_eq!(classify_series(&psi, Theorem::Main3), expected, "{f:?}");
        for n in [1u64, 10, 1000, 100_000, 10_000_000] {
            assert!(psi.log_phi(n) >= f.log_phi(n));
            assert!(psi.log_phi(n) >= wlog_threshold(n).ln() - 1e-12);
        }
        if expected == Divergent {
            let b = dyadic_block(&psi, Theorem::Main3, 18);
            assert!(b > 0.1, "ψ series block {b}");
        }
    }
}

#[test]
fn wlog_threshold_solves_its_equation() {
    for n in [3u64, 10, 1000, 1_000_000, 1_000_000_000] {
        let x = wlog_threshold(n);
        let lhs = x / x.ln().powi(2);
        assert!((lhs / n as f64 - 1.0).abs() < 1e-10, "n = {n}");
    }
    let mut prev = 0.0;
    for n in 1..2000u64 {
        let x = wlog_threshold(n);
        assert!(x >= prev);
        prev = x;
    }
}

proptest! {
    #[test]
    fn log_phi_is_monotone_and_floored(alpha in 0.0f64..4.0, beta in 0.0f64..4.0, n in 1u64..1_000_000) {
        for f in [pl(alpha, beta), GrowthFunction::exponential(1.0 + alpha).unwrap()] {
            prop_assert!(f.log_phi(n + 1) >= f.log_phi(n));
            prop_assert!(f.log_phi(n) >= 2f64.ln() - 1e-15);
        }
    }

    #[test]
    fn larger_phi_never_flips_to_divergent(alpha in 0.5f64..2.5, beta in 0.0f64..3.0, da in 0.0f64..0.5, db in 0.0f64..2.0, ell in 1u32..4) {
        let small = pl(alpha, beta);
        let large = pl(alpha + da, beta + db);
        for t in [Theorem::Hwx(ell), Theorem::Ttw, Theorem::Tz, Theorem::Main3] {
            if classify_series(&small, t) == Convergent {
                prop_assert_eq!(classify_series(&large, t), Convergent);
            }
        }
    }

    #[test]
    fn spec_round_trip(alpha in 0.0f64..4.0, beta in 0.0f64..4.0) {
        let f = pl(alpha, beta);
        let (fam, params) = f.to_spec();
        let g = GrowthFunction::parse(&fam, &params).unwrap();
        for n in [1u64, 5, 1000] {
            prop_assert!((g.log_phi(n) - f.log_phi(n)).abs() <= 1e-12 * f.log_phi(n).abs().max(1.0));
        }
    }
}
