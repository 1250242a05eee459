use gradlab_core::analysis::*;
use gradlab_core::quadprob::*;
use gradlab_core::solver::*;
use gradlab_core::steps::*;
use gradlab_core::recurrence::trace_vs_recurrence;

fn main() {
    for (label, policy, lambda, x0, tol) in [
        ("bb1", StepPolicy::Bb1, 5.0f64, (0.202, 1.0), 1e-40),
        ("delayed2", StepPolicy::Delayed { delay: 2, power: 1.0 }, 5.0, (0.202, 1.0), 1e-40),
        ("bb1tight", StepPolicy::Bb1, 5.0, (0.2002, 1.0), 1e-60),
    ] {
        let p = build_problem(&[lambda, 1.0], &[0.0, 0.0]).unwrap();
        let cfg = RunConfig::new(vec![x0.0, x0.1])
            .with_rel_tol(tol)
            .with_max_iters(600)
            .with_gradient_mode(GradientMode::Recursive);
        let mut t = run(&p, &policy, &cfg).unwrap();
        attach_diagnostics(&p, &mut t).unwrap();
        let r: Vec<Option<f64>> = t.diagnostics.unwrap().into_iter().map(|d| d.r).collect();
        let finite = r.iter().flatten().count();
        let d = match policy { StepPolicy::Delayed { delay, .. } => delay + 1, _ => 2 };
        match trace_vs_recurrence(&r, d, 25) {
            Ok(rep) => println!(
                "{label}: rows={} finite_r={} status={:?} window={} err={:e}",
                r.len(), finite, t.status, rep.window, rep.max_scaled_error
            ),
            Err(e) => println!("{label}: rows={} finite_r={} err: {e}", r.len(), finite),
        }
    }
}
