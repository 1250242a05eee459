use gradlab_core::analysis::*;
use gradlab_core::quadprob::*;
use gradlab_core::solver::*;
use gradlab_core::steps::*;

fn main() {
    let p = build_problem(&[9.0, 3.0, 1.0], &[0.0; 3]).unwrap();
    let lambda = p.condition_number();
    let cfg = RunConfig::new(vec![1.0, 0.8, 0.6])
        .with_rel_tol(1e-6)
        .with_max_iters(12)
        .with_gradient_mode(GradientMode::Recursive);
    let mut t = run(&p, &StepPolicy::Rbb { schedule: TauSchedule::ratio_mu1() }, &cfg).unwrap();
    attach_diagnostics(&p, &mut t).unwrap();
    let d = t.diagnostics.as_ref().unwrap();
    for i in 1..t.rows.len().saturating_sub(1) {
        let (Some(rp), Some(rc), Some(rn)) = (d[i - 1].r, d[i].r, d[i + 1].r) else { continue };
        let (Some(ep), Some(ebp)) = (d[i - 1].eta, d[i - 1].eta_bar) else { continue };
        let (Some(ec), Some(ebc)) = (d[i].eta, d[i].eta_bar) else { continue };
        let tau = t.rows[i].tau.unwrap_or(0.0);
        let h_emp = rp * rp * rn / rc;
        let h_pred = h_formula(rp, ep, ebp, ec, ebc, lambda, tau).unwrap();
        let beta_pred = beta_formula(rp, ep, ebp, ec, ebc, lambda, tau).unwrap();
        let beta_emp = d[i].beta;
        let xi_emp = d[i].xi.unwrap();
        // alternate route: h = r_prev^2 * beta / xi^2
        let h_via_emp = rp * rp * beta_emp.unwrap() / (xi_emp * xi_emp);
        // delta route: h = delta^2 [(alpha_norm - eta_k l)^2 + F]
        let alpha = t.rows[i].alpha.unwrap() / p.eig_min();
        let delta = delta_formula(rp, ep, ebp, lambda, tau).unwrap();
        let f = ec * (ebc - ec) * lambda * lambda;
        let h_delta = delta * delta * ((alpha - ec * lambda).powi(2) + f);
        println!(
            "i={i}: h_emp={h_emp:.9e} h_pred={h_pred:.9e} h_via_beta_xi={h_via_emp:.9e} h_delta_route={h_delta:.9e} beta_emp={:?} beta_pred={beta_pred:.9e}",
            beta_emp
        );
    }
}
