//! Property tests for the step rules and the spectral split.

use gradlab_core::analysis::{eta_pair, split_gradient};
use gradlab_core::quadprob::build_problem;
use gradlab_core::steps::{bb1_alpha, bb2_alpha, rbb_alpha};
use proptest::prelude::*;

/// Eigenvalues (descending, smallest pinned at 1) and a direction giving an
/// exact SPD (s, y = A s) pair.
fn spd_state() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..8)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(0.0f64..3.0, n - 1),
                proptest::collection::vec(-1.0f64..1.0, n),
            )
        })
        .prop_filter_map("nonzero s", |(logs, s)| {
            if s.iter().map(|v| v * v).sum::<f64>() < 1e-4 {
                return None;
            }
            let mut eigs: Vec<f64> = logs.iter().map(|e| 10f64.powf(*e)).collect();
            eigs.push(1.0);
            eigs.sort_by(|a, b| b.total_cmp(a));
            Some((eigs, s))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ordering_chain_and_tau_monotonicity((eigs, s) in spd_state()) {
        let y: Vec<f64> = eigs.iter().zip(&s).map(|(a, si)| a * si).collect();
        let bb1 = bb1_alpha(&s, &y).unwrap();
        let bb2 = bb2_alpha(&s, &y).unwrap();
        prop_assert!(bb1 <= bb2 * (1.0 + 1e-12));
        let mut last = rbb_alpha(&s, &y, 0.0).unwrap();
        // tau = 0 reduces exactly to bb1
        prop_assert_eq!(last, bb1);
        for tau in [0.1, 1.0, 10.0, 100.0] {
            let v = rbb_alpha(&s, &y, tau).unwrap();
            prop_assert!(v >= bb1 * (1.0 - 1e-12));
            prop_assert!(v <= bb2 * (1.0 + 1e-12));
            prop_assert!(v >= last * (1.0 - 1e-12), "rbb must be non-decreasing in tau");
            last = v;
        }
    }

    #[test]
    fn parallel_s_y_collapses_the_chain((eigs, s) in spd_state(), a in 0.1f64..50.0) {
        // y parallel to s: every two-point rule returns the same scalar
        let _ = eigs;
        let y: Vec<f64> = s.iter().map(|v| a * v).collect();
        let bb1 = bb1_alpha(&s, &y).unwrap();
        let bb2 = bb2_alpha(&s, &y).unwrap();
        let mid = rbb_alpha(&s, &y, 3.0).unwrap();
        prop_assert!((bb1 - a).abs() <= 1e-12 * a);
        prop_assert!((bb2 - a).abs() <= 1e-12 * a);
        prop_assert!((mid - a).abs() <= 1e-12 * a);
    }

    #[test]
    fn alphas_stay_inside_the_spectrum((eigs, s) in spd_state()) {
        let y: Vec<f64> = eigs.iter().zip(&s).map(|(a, si)| a * si).collect();
        let lo = eigs[eigs.len() - 1] * (1.0 - 1e-12);
        let hi = eigs[0] * (1.0 + 1e-12);
        for alpha in [
            bb1_alpha(&s, &y).unwrap(),
            bb2_alpha(&s, &y).unwrap(),
            rbb_alpha(&s, &y, 3.7).unwrap(),
        ] {
            prop_assert!(alpha >= lo && alpha <= hi, "alpha {} outside [{lo}, {hi}]", alpha);
        }
    }

    #[test]
    fn two_point_rules_are_scale_invariant((eigs, s) in spd_state(), c in 1e-3f64..1e3) {
        let y: Vec<f64> = eigs.iter().zip(&s).map(|(a, si)| a * si).collect();
        let cs: Vec<f64> = s.iter().map(|v| c * v).collect();
        let cy: Vec<f64> = y.iter().map(|v| c * v).collect();
        let pairs = [
            (bb1_alpha(&s, &y).unwrap(), bb1_alpha(&cs, &cy).unwrap()),
            (bb2_alpha(&s, &y).unwrap(), bb2_alpha(&cs, &cy).unwrap()),
            (rbb_alpha(&s, &y, 2.0).unwrap(), rbb_alpha(&cs, &cy, 2.0).unwrap()),
        ];
        for (a, b) in pairs {
            prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(b.abs()));
        }
    }

    #[test]
    fn eta_pair_ordered_and_bounded((eigs, g) in spd_state()) {
        // needs a simple smallest eigenvalue and a nonzero head
        prop_assume!(eigs[eigs.len() - 2] > eigs[eigs.len() - 1] * (1.0 + 1e-9));
        let head = &g[..g.len() - 1];
        prop_assume!(head.iter().map(|v| v * v).sum::<f64>() > 1e-6);
        let p = build_problem(&eigs, &vec![0.0; eigs.len()]).unwrap();
        let e = eta_pair(&p, head).unwrap();
        let gamma_over_lambda = eigs[eigs.len() - 2] / eigs[0];
        prop_assert!(e.eta >= gamma_over_lambda - 1e-12 && e.eta <= 1.0 + 1e-12);
        prop_assert!(e.eta_bar >= gamma_over_lambda - 1e-12 && e.eta_bar <= 1.0 + 1e-12);
        prop_assert!(e.eta_bar >= e.eta - 1e-12);
    }

    #[test]
    fn split_norm_identity((eigs, g) in spd_state()) {
        prop_assume!(eigs[eigs.len() - 2] > eigs[eigs.len() - 1] * (1.0 + 1e-9));
        let p = build_problem(&eigs, &vec![0.0; eigs.len()]).unwrap();
        let split = split_gradient(&p, &g).unwrap();
        if let Some(r) = split.r {
            let norm_sq: f64 = g.iter().map(|v| v * v).sum();
            let reconstructed = split.tail * split.tail * (r + 1.0);
            prop_assert!((norm_sq - reconstructed).abs() <= 1e-12 * norm_sq);
        }
    }
}
