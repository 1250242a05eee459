use gradlab_core::analysis::*;
use gradlab_core::quadprob::*;
use gradlab_core::solver::*;
use gradlab_core::steps::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_spectrum(rng: &mut ChaCha8Rng, n: usize, kappa_max: f64, scale: f64) -> Vec<f64> {
    let span = kappa_max.log10();
    loop {
        let mut logs: Vec<f64> = (0..n - 1).map(|_| rng.gen::<f64>() * span).collect();
        logs.push(span);
        logs.sort_by(|a, b| b.total_cmp(a));
        let eigs: Vec<f64> = logs.iter().map(|e| scale * 10f64.powf(*e)).collect();
        let m = eigs.len();
        if eigs[m - 2] > eigs[m - 1] * (1.0 + 1e-6) {
            return eigs;
        }
    }
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let n = 3;
    let kappa = 10f64.powf(rng.gen_range(1.0..3.0));
    let scale = rng.gen_range(0.1..10.0);
    let eigs = random_spectrum(&mut rng, n, kappa, scale);
    let x_star: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    println!("kappa={kappa} scale={scale} eigs={eigs:?}");
    println!("x_star={x_star:?} x0={x0:?}");
    let p = build_problem(&eigs, &x_star).unwrap();
    let lambda = p.condition_number();
    println!("lambda (cond) = {lambda}, eig_min={}, eig_max={}", p.eig_min(), p.eig_max());
    let a_min = p.eig_min();
    let cfg = RunConfig::new(x0)
        .with_rel_tol(1e-12)
        .with_max_iters(6)
        .with_gradient_mode(GradientMode::Recursive);
    let mut t = run(&p, &StepPolicy::Bb1, &cfg).unwrap();
    attach_diagnostics(&p, &mut t).unwrap();
    let d = t.diagnostics.as_ref().unwrap();
    for i in 0..t.rows.len() {
        let row = &t.rows[i];
        println!(
            "i={i} alpha={:?} r={:?} eta={:?} ebar={:?} xi_emp={:?} 1-amin/alpha={:?}",
            row.alpha, d[i].r, d[i].eta, d[i].eta_bar, d[i].xi,
            row.alpha.map(|a| 1.0 - a_min / a)
        );
        if i >= 1 {
            if let (Some(rp), Some(ep), Some(ebp)) = (d[i - 1].r, d[i - 1].eta, d[i - 1].eta_bar) {
                let f = xi_formula(rp, ep, ebp, lambda, row.tau.unwrap_or(0.0));
                println!("    formula = {f:?}");
            }
        }
    }
}
