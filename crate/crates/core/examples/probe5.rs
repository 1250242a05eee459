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
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    // replicate the 2-D draws
    for _ in 0..10 {
        let _ = rng.gen_range(2.0f64..100.0);
        let _: Vec<f64> = (0..2).map(|_| rng.gen_range(0.2f64..2.0)).collect();
    }
    // n-D trial 0
    let n = 5;
    let eigs = random_spectrum(&mut rng, n, 100.0, 1.0);
    let x_star: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    println!("eigs={eigs:?}");
    let p = build_problem(&eigs, &x_star).unwrap();
    let lambda = p.condition_number();
    let cfg = RunConfig::new(x0)
        .with_rel_tol(1e-6)
        .with_max_iters(1500)
        .with_gradient_mode(GradientMode::Recursive);
    let mut t = run(&p, &StepPolicy::Rbb { schedule: TauSchedule::ratio_mu1() }, &cfg).unwrap();
    attach_diagnostics(&p, &mut t).unwrap();
    println!("status={:?} iters={}", t.status, t.iterations);
    let d = t.diagnostics.as_ref().unwrap();
    let mut worst = (0usize, 0.0f64);
    for i in 1..t.rows.len().saturating_sub(1) {
        let (Some(rp), Some(rc), Some(rn)) = (d[i - 1].r, d[i].r, d[i + 1].r) else { continue };
        let (Some(ep), Some(ebp)) = (d[i - 1].eta, d[i - 1].eta_bar) else { continue };
        let (Some(ec), Some(ebc)) = (d[i].eta, d[i].eta_bar) else { continue };
        let tau = t.rows[i].tau.unwrap_or(0.0);
        let h_emp = rp * rp * rn / rc;
        let h_pred = h_formula(rp, ep, ebp, ec, ebc, lambda, tau).unwrap();
        let err = (h_emp - h_pred).abs() / h_pred;
        if err > worst.1 {
            worst = (i, err);
        }
    }
    println!("worst window i={} err={:e}", worst.0, worst.1);
    let i = worst.0;
    for j in i.saturating_sub(2)..=(i + 2).min(t.rows.len() - 1) {
        println!(
            "  j={j} alpha={:?} tau={:?} r={:?} eta={:?} ebar={:?} xi={:?} gnorm={:e}",
            t.rows[j].alpha, t.rows[j].tau, d[j].r, d[j].eta, d[j].eta_bar, d[j].xi, t.rows[j].grad_norm
        );
    }
    // also show the gradient components around the worst row
    for j in i.saturating_sub(1)..=(i + 1).min(t.gradients.len() - 1) {
        println!("  g[{j}] = {:?}", t.gradients[j]);
    }
}
