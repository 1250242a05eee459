use gradlab_core::analysis::*;
use gradlab_core::quadprob::*;
use gradlab_core::solver::*;
use gradlab_core::steps::*;

fn main() {
    let eigs = generate_spectrum(&SpectrumSpec::DeAsmundis { n: 5, ncond: 3.0 }).unwrap();
    let p = build_problem(&eigs, &[1.0; 5]).unwrap();
    for mode in [GradientMode::Recursive, GradientMode::FromX] {
        let cfg = RunConfig::new(vec![0.0; 5]).with_gradient_mode(mode);
        let mut t = run(&p, &StepPolicy::Bb1, &cfg).unwrap();
        attach_diagnostics(&p, &mut t).unwrap();
        let d = t.diagnostics.as_ref().unwrap();
        let r: Vec<Option<f64>> = d.iter().map(|x| x.r).collect();
        let signs: Vec<i8> = r
            .iter()
            .filter_map(|v| v.map(|x| if x > 1.0 { 1 } else if x < 1.0 { -1 } else { 0 }))
            .collect();
        let mut runs: Vec<(i8, usize)> = Vec::new();
        for &s in &signs {
            if s == 0 { continue; }
            match runs.last_mut() {
                Some((ls, n)) if *ls == s => *n += 1,
                _ => runs.push((s, 1)),
            }
        }
        let lens: Vec<usize> = runs.iter().map(|(_, n)| *n).collect();
        let total: usize = lens.iter().sum();
        println!("mode {:?}: iters={} defined r={} runs={} mean={:.3}", mode, t.iterations, signs.len(), lens.len(), total as f64 / lens.len() as f64);
        println!("  run lengths: {:?}", lens);
    }
}
