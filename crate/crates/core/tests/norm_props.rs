use proptest::prelude::*;
use seqnorm::conditions::{check, CheckOptions, ConditionId};
use seqnorm::norm::{grid_oracle, norm_estimate, Method, NormOptions};
use seqnorm::spaces::{space_norm, SpaceSpec, WeightSeq};
use seqnorm::{Matrix, Space};

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(n, m)| {
        prop::collection::vec(0.0f64..1.0, n * m).prop_map(move |v| Matrix::new(n, m, v).unwrap())
    })
}

fn space(dim: usize) -> impl Strategy<Value = Space> {
    let lp = prop_oneof![Just(1.0), Just(2.0), 1.1f64..4.0].prop_map(|p| SpaceSpec::lp(p).unwrap());
    let weights = move || {
        prop::collection::vec(0.1f64..1.0, dim).prop_map(|mut w| {
            w.sort_by(|a, b| b.partial_cmp(a).unwrap());
            WeightSeq::new(w).unwrap()
        })
    };
    prop_oneof![
        3 => lp,
        1 => Just(SpaceSpec::lp_inf()),
        1 => (prop_oneof![Just(1.0), 1.1f64..3.0], weights()).prop_map(|(p, w)| SpaceSpec::weighted(p, w).unwrap()),
        1 => (prop_oneof![Just(1.0), 1.1f64..3.0], weights()).prop_map(|(p, w)| SpaceSpec::lorentz(p, w).unwrap()),
    ]
}

fn instance(max: usize) -> impl Strategy<Value = (Matrix, Space, Space)> {
    matrix(max, max).prop_flat_map(|a| {
        let (n, m) = (a.rows(), a.cols());
        (Just(a), space(m), space(n))
    })
}

fn est(a: &Matrix, e: &Space, f: &Space, restricted: bool) -> seqnorm::Estimate {
    norm_estimate(a, e, f, restricted, &NormOptions::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn estimates_are_consistent((a, e, f) in instance(5)) {
        let full = est(&a, &e, &f, false);
        let dec = est(&a, &e, &f, true);
        prop_assert!(dec.value <= full.value * (1.0 + 1e-9) + 1e-12);
        for r in [&full, &dec] {
            prop_assert!(r.value >= 0.0);
            prop_assert!((space_norm(&e, &r.maximizer).unwrap() - 1.0).abs() <= 1e-9);
            let image = space_norm(&f, &a.apply(&r.maximizer).unwrap()).unwrap();
            prop_assert!((image - r.value).abs() <= 1e-9 * r.value.max(1.0));
        }
        prop_assert!(dec.maximizer.windows(2).all(|p| p[0] >= p[1]));
    }

    #[test]
    fn positively_homogeneous((a, e, f) in instance(4), c in 0.1f64..10.0) {
        for restricted in [false, true] {
            let base = est(&a, &e, &f, restricted).value;
            let scaled = est(&a.scaled(c).unwrap(), &e, &f, restricted).value;
            prop_assert!((scaled - c * base).abs() <= 1e-7 * (c * base).max(1.0), "{} vs {}", scaled, c * base);
        }
    }

    #[test]
    fn monotone_in_entries((a, e, f) in instance(4), bump in prop::collection::vec(0.0f64..0.5, 16)) {
        let bigger = Matrix::from_fn(a.rows(), a.cols(), |j, k| a.get(j, k) + bump[j * 4 + k]).unwrap();
        for restricted in [false, true] {
            let small = est(&a, &e, &f, restricted).value;
            let large = est(&bigger, &e, &f, restricted).value;
            prop_assert!(small <= large * (1.0 + 1e-7) + 1e-9, "{} > {}", small, large);
        }
    }

    /// Ascent over the ℓ1 ball is local: it stops at some vertex, which need
    /// not be the best one. The exact scan is the maximum over all vertices.
    #[test]
    fn exact_l1_bounds_iteration(a in matrix(5, 5), q in prop_oneof![Just(1.0), Just(2.0), 1.2f64..4.0]) {
        let (e, f) = (SpaceSpec::lp(1.0).unwrap(), SpaceSpec::lp(q).unwrap());
        let forced = NormOptions { force_iteration: true, ..NormOptions::default() };
        let m = a.cols();
        for restricted in [false, true] {
            // unit vectors, or normalized head indicators on the decreasing cone
            let vertices: Vec<f64> = (1..=m)
                .map(|k| {
                    let x: Vec<f64> = (0..m)
                        .map(|i| match restricted {
                            false => f64::from(u8::from(i + 1 == k)),
                            true => if i < k { 1.0 / k as f64 } else { 0.0 },
                        })
                        .collect();
                    space_norm(&f, &a.apply(&x).unwrap()).unwrap()
                })
                .collect();
            let best = vertices.iter().copied().fold(0.0, f64::max);
            let exact = est(&a, &e, &f, restricted);
            prop_assert_eq!(exact.method, Method::ExactP1);
            prop_assert!((exact.value - best).abs() <= 1e-12, "{} vs {}", exact.value, best);
            let iter = norm_estimate(&a, &e, &f, restricted, &forced).unwrap();
            prop_assert!(iter.value <= exact.value * (1.0 + 1e-9) + 1e-12, "{} > {}", iter.value, exact.value);
            prop_assert!(
                vertices.iter().any(|v| (v - iter.value).abs() <= 1e-8 * v.max(1.0)),
                "iteration stopped off a vertex: {} not in {:?}", iter.value, vertices
            );
        }
    }

    #[test]
    fn row_decreasing_matrices_attain_on_decreasing_vectors(
        a in matrix(5, 5),
        p in prop_oneof![Just(1.0), Just(2.0), 1.2f64..4.0],
        q in prop_oneof![Just(1.0), Just(2.0), 1.2f64..4.0],
    ) {
        let sorted = Matrix::from_rows(
            a.to_rows()
                .into_iter()
                .map(|mut r| {
                    r.sort_by(|x, y| y.partial_cmp(x).unwrap());
                    r
                })
                .collect(),
        )
        .unwrap();
        prop_assert!(check(ConditionId::RowDecreasing, &sorted, &CheckOptions::default()).unwrap().holds);
        let (e, f) = (SpaceSpec::lp(p).unwrap(), SpaceSpec::lp(q).unwrap());
        let full = est(&sorted, &e, &f, false).value;
        let dec = est(&sorted, &e, &f, true).value;
        prop_assert!((full - dec).abs() <= 1e-6 * full.max(1.0), "{} vs {}", full, dec);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn agrees_with_grid_oracle((a, e, f) in instance(3)) {
        let resolution = 60;
        for restricted in [false, true] {
            let v = est(&a, &e, &f, restricted).value;
            let g = grid_oracle(&a, &e, &f, restricted, resolution).unwrap();
            prop_assert!((v - g).abs() <= 2.0 / resolution as f64, "{} vs grid {}", v, g);
            prop_assert!(g <= v * (1.0 + 1e-9) + 1e-12, "grid {} above estimate {}", g, v);
        }
    }
}
