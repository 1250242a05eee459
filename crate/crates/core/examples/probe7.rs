use gradlab_core::analysis::*;
use gradlab_core::quadprob::*;
use gradlab_core::solver::*;
use gradlab_core::steps::*;

fn main() {
    let eigs = generate_spectrum(&SpectrumSpec::DeAsmundis { n: 5, ncond: 3.0 }).unwrap();
    let p = build_problem(&eigs, &[1.0; 5]).unwrap();
    let cfg = RunConfig::new(vec![0.0; 5]).with_gradient_mode(GradientMode::Recursive);
    let mut t = run(&p, &StepPolicy::Bb1, &cfg).unwrap();
    attach_diagnostics(&p, &mut t).unwrap();
    let d = t.diagnostics.as_ref().unwrap();
    for i in 150..210.min(d.len()) {
        let lnr = d[i].r.map(|r| r.ln());
        println!(
            "i={i} ln r={:?} gnorm={:.3e} alpha={:?} head_dom?",
            lnr.map(|v| (v * 100.0).round() / 100.0),
            t.rows[i].grad_norm,
            t.rows[i].alpha.map(|a| (a * 1000.0).round() / 1000.0)
        );
    }
}
