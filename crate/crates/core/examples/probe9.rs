use gradlab_core::analysis::*;
use gradlab_core::quadprob::*;
use gradlab_core::solver::*;
use gradlab_core::steps::*;

fn main() {
    let eigs = generate_spectrum(&SpectrumSpec::DeAsmundis { n: 5, ncond: 3.0 }).unwrap();
    let p = build_problem(&eigs, &[1.0; 5]).unwrap();
    for (label, tol, mode) in [
        ("recursive tol=1e-20", 1e-20, GradientMode::Recursive),
        ("recursive tol=1e-40", 1e-40, GradientMode::Recursive),
        ("recursive tol=1e-60", 1e-60, GradientMode::Recursive),
        ("fromx    tol=1e-20", 1e-20, GradientMode::FromX),
    ] {
        let cfg = RunConfig::new(vec![0.0; 5]).with_gradient_mode(mode).with_rel_tol(tol);
        let mut t = run(&p, &StepPolicy::Bb1, &cfg).unwrap();
        attach_diagnostics(&p, &mut t).unwrap();
        let d = t.diagnostics.as_ref().unwrap();
        let r: Vec<Option<f64>> = d.iter().map(|x| x.r).collect();
        let horizon = (r.len() as f64 * 0.8) as usize;
        let mut missing = Vec::new();
        for k in 0..horizon {
            if r[k].is_some() && find_descent_n(&r, k).is_none() {
                missing.push(k);
            }
        }
        println!(
            "{label}: status={:?} rows={} horizon={horizon} unanswered={:?}",
            t.status, r.len(), missing
        );
    }
}
