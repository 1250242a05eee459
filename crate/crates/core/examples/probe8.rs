use gradlab_core::analysis::*;
use gradlab_core::quadprob::*;
use gradlab_core::solver::*;
use gradlab_core::steps::*;

fn interior_mean(r: &[Option<f64>]) -> (f64, usize) {
    let signs: Vec<i8> = r.iter().filter_map(|v| v.map(|x| if x > 1.0 { 1 } else { -1 })).collect();
    let mut runs: Vec<usize> = Vec::new();
    let mut cur = 0usize;
    let mut last = 0i8;
    for &s in &signs {
        if s == last { cur += 1; } else { if last != 0 { runs.push(cur); } cur = 1; last = s; }
    }
    runs.push(cur);
    if runs.len() <= 2 { return (f64::NAN, 0); }
    let interior = &runs[1..runs.len() - 1];
    let total: usize = interior.iter().sum();
    (total as f64 / interior.len() as f64, interior.len())
}

fn main() {
    let eigs = generate_spectrum(&SpectrumSpec::DeAsmundis { n: 5, ncond: 3.0 }).unwrap();
    let p = build_problem(&eigs, &[1.0; 5]).unwrap();
    for mode in [GradientMode::Recursive, GradientMode::FromX] {
        let cfg = RunConfig::new(vec![0.0; 5]).with_gradient_mode(mode);
        let mut t = run(&p, &StepPolicy::Bb1, &cfg).unwrap();
        attach_diagnostics(&p, &mut t).unwrap();
        let d = t.diagnostics.as_ref().unwrap();
        let g1 = t.rows[0].grad_norm;
        let r_all: Vec<Option<f64>> = d.iter().map(|x| x.r).collect();
        let guard_end = t.rows.iter().position(|row| row.grad_norm < 1e-8 * g1).unwrap_or(t.rows.len());
        let pct80 = (r_all.len() as f64 * 0.8) as usize;
        let (m_all, n_all) = interior_mean(&r_all);
        let (m_guard, n_guard) = interior_mean(&r_all[..guard_end]);
        let (m_80, n_80) = interior_mean(&r_all[..pct80]);
        println!("{mode:?}: guard_end={guard_end}/{} | interior mean full={m_all:.3} ({n_all}) guard={m_guard:.3} ({n_guard}) first80={m_80:.3} ({n_80})", r_all.len());
    }
}
