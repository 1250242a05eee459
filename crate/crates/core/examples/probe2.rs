// deviation profile vs guard level
use gradlab_core::*;

fn main() {
    for (ncond, n) in [(2.0, 5usize), (3.0, 5)] {
        let eigs = generate_spectrum(&SpectrumSpec::DeAsmundis { n, ncond }).unwrap();
        let p = build_problem(&eigs, &vec![1.0; n]).unwrap();
        let cfg = RunConfig::new(vec![0.0; n]).with_gradient_mode(GradientMode::Recursive);
        let t = run(&p, &StepPolicy::Bb1, &cfg).unwrap();
        let offsets = t.replay_offsets(&cfg.x0, &vec![1.0; n]);
        let g1 = t.rows[0].grad_norm;
        for guard in [1e-2, 1e-4, 1e-6, 1e-8] {
            let mut max_rel = 0f64;
            for (i, row) in t.rows.iter().enumerate() {
                if row.grad_norm < guard * g1 { break; }
                let true_g = p.matvec(&offsets[i]);
                for (a, b) in t.gradients[i].iter().zip(&true_g) {
                    max_rel = max_rel.max((a - b).abs() / row.grad_norm);
                }
            }
            println!("ncond={ncond}: guard {guard:e} -> max deviation {max_rel:e}");
        }
    }
}
