//! Property tests for the randomized-input invariants.

use proptest::prelude::*;

use ped_core::data::{generate, write_csv, GeneratorSpec};
use ped_core::metrics::{accuracy, auc_binary, energy_distance};
use ped_core::sampler::{allocate, select_uniform, twin_within};
use ped_core::Seed;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn subdata_indices_are_distinct_in_range_and_sized(
        seed in 0u64..1_000,
        n_rows in 20usize..200,
        frac in 0.05f64..1.0,
    ) {
        let data = generate(&GeneratorSpec::Twonorm { p: 2 }, n_rows, Seed::new(seed)).unwrap();
        let n = ((n_rows as f64 * frac) as usize).max(1);

        let uniform = select_uniform(&data, n, Seed::new(seed + 1)).unwrap();
        let rows: Vec<usize> = (0..n_rows).collect();
        let twin = twin_within(&data, &rows, n, Seed::new(seed + 2)).unwrap();

        for indices in [&uniform.indices, &twin] {
            prop_assert_eq!(indices.len(), n);
            let mut sorted = indices.clone();
            sorted.sort_unstable();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), n);
            prop_assert!(sorted.iter().all(|&i| i < n_rows));
        }
    }

    #[test]
    fn allocation_respects_budget_and_bounds(
        seed in 0u64..1_000,
        l in 1usize..6,
    ) {
        use rand::Rng;
        let mut rng = Seed::new(seed).rng();
        let strata: Vec<(u64, f64)> = (0..l)
            .map(|_| (rng.random_range(1..500u64), rng.random_range(0.0..0.5f64)))
            .collect();
        let t_h = 5usize;
        let lower: usize = strata.iter().map(|&(n, _)| (n as usize).min(t_h)).sum();
        let upper: usize = strata.iter().map(|&(n, _)| n as usize).sum();
        let budget = lower + (upper - lower) / 3;

        let plan = allocate(&strata, budget, t_h).unwrap();
        prop_assert_eq!(plan.n_l.iter().sum::<usize>(), budget);
        for (l, &n_l) in plan.n_l.iter().enumerate() {
            prop_assert!(n_l >= plan.lower[l] && n_l <= plan.upper[l]);
            if n_l > 0 {
                prop_assert!(plan.r_l[l] >= 1);
                prop_assert_eq!(plan.r_l[l], plan.upper[l] / n_l);
            }
        }
    }

    #[test]
    fn auc_is_invariant_under_monotone_transforms(
        scores in prop::collection::vec(0.0f64..1.0, 8..64),
        flips in prop::collection::vec(prop::bool::ANY, 8..64),
    ) {
        let n = scores.len().min(flips.len());
        let scores = &scores[..n];
        let truth: Vec<u32> = flips[..n].iter().map(|&b| u32::from(b)).collect();
        prop_assume!(truth.iter().any(|&t| t == 0) && truth.iter().any(|&t| t == 1));

        let base = auc_binary(scores, &truth).unwrap();
        let warped: Vec<f64> = scores.iter().map(|s| (4.0 * s).exp() + 3.0).collect();
        let after = auc_binary(&warped, &truth).unwrap();
        prop_assert!((base - after).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&base));
    }

    #[test]
    fn accuracy_stays_in_unit_interval(
        pred in prop::collection::vec(0u32..4, 1..50),
    ) {
        let truth: Vec<u32> = pred.iter().map(|&p| (p + 1) % 4).collect();
        let a = accuracy(&pred, &truth).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn energy_distance_nonnegative_and_symmetric(
        a in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 2), 1..20),
        b in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 2), 1..20),
    ) {
        let ab = energy_distance(&a, &b).unwrap();
        let ba = energy_distance(&b, &a).unwrap();
        prop_assert!(ab >= -1e-12);
        prop_assert!((ab - ba).abs() < 1e-12);
    }

    #[test]
    fn generated_datasets_roundtrip_through_csv(
        seed in 0u64..500,
        n_rows in 5usize..60,
    ) {
        let spec = GeneratorSpec::Threenorm { p: 3 };
        let data = generate(&spec, n_rows, Seed::new(seed)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        write_csv(&data, &path).unwrap();
        let meta = ped_core::data::DatasetMeta::of(&data);
        ped_core::data::write_meta(&ped_core::data::meta_path(&path), &meta).unwrap();
        let back = ped_core::data::load_csv_auto(&path, "y", &[]).unwrap();
        prop_assert_eq!(back, data);
    }
}
