use nanofiber::atom::AtomicData;
use nanofiber::dynamics::{pump_evolution, pump_rates, pump_steady_state, PopulationVector};
use proptest::prelude::*;

fn fractions() -> impl Strategy<Value = [f64; 3]> {
    (0.01f64..1.0, 0.0f64..1.0, 0.0f64..1.0).prop_map(|(a, b, c)| {
        let n = a + b + c;
        [a / n, b / n, c / n]
    })
}

fn populations() -> impl Strategy<Value = PopulationVector> {
    prop::collection::vec(0.0f64..1.0, 9).prop_filter_map("all zero", |v| {
        let n: f64 = v.iter().sum();
        (n > 1e-3).then(|| PopulationVector::new(4, v.iter().map(|x| x / n).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn population_is_conserved(f in fractions(), s in 0.01f64..2.0, p in populations(), t in 1e-7f64..5e-5) {
        let rates = pump_rates(&AtomicData::cesium(), f, s).unwrap();
        let after = pump_evolution(&rates, &p, t).unwrap();
        let total: f64 = after.populations.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9, "{total}");
        prop_assert!(after.populations.iter().all(|&x| x > -1e-12));
    }

    #[test]
    fn mirror_covariance(f in fractions(), s in 0.01f64..2.0, p in populations(), t in 1e-7f64..2e-5) {
        let cs = AtomicData::cesium();
        let rates = pump_rates(&cs, f, s).unwrap();
        let mirror = pump_rates(&cs, [f[2], f[1], f[0]], s).unwrap();
        let a = pump_evolution(&rates, &p, t).unwrap().mirrored();
        let b = pump_evolution(&mirror, &p.mirrored(), t).unwrap();
        for (x, y) in a.populations.iter().zip(&b.populations) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn long_evolution_reaches_steady_state(f in fractions(), p in populations()) {
        let rates = pump_rates(&AtomicData::cesium(), f, 0.5).unwrap();
        let steady = pump_steady_state(&rates).unwrap();
        let late = pump_evolution(&rates, &p, 5e-3).unwrap();
        for (x, y) in late.populations.iter().zip(&steady.populations) {
            prop_assert!((x - y).abs() < 1e-6, "{:?} vs {:?}", late.populations, steady.populations);
        }
    }
}

#[test]
fn steady_state_forgets_initial_populations() {
    use rand::{Rng, SeedableRng};
    let cs = AtomicData::cesium();
    let rates = pump_rates(&cs, [0.9207, 0.0, 0.0793], 0.1).unwrap();
    let steady = pump_steady_state(&rates).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let p: Vec<f64> = (0..9).map(|_| rng.random_range(0.0..1.0)).collect();
        let n: f64 = p.iter().sum();
        let start = PopulationVector::new(4, p.iter().map(|x| x / n).collect()).unwrap();
        let late = pump_evolution(&rates, &start, 20e-3).unwrap();
        for (x, y) in late.populations.iter().zip(&steady.populations) {
            assert!((x - y).abs() < 1e-9, "{:?} vs {:?}", late.populations, steady.populations);
        }
    }
}
