// scratch probe for iteration-count float-path variants
use gradlab_core::*;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// plain recursive BB1, alpha from weighted sums over g_prev^2
fn bb1_sumalpha(eigs: &[f64], x0: &[f64], xstar: &[f64], tol: f64) -> usize {
    let n = eigs.len();
    let mut g: Vec<f64> = (0..n).map(|i| eigs[i] * (x0[i] - xstar[i])).collect();
    let g1 = norm(&g);
    let mut gprev: Option<Vec<f64>> = None;
    for k in 1..100000 {
        let w: Vec<f64> = match &gprev {
            None => g.iter().map(|v| v * v).collect(),
            Some(gp) => gp.iter().map(|v| v * v).collect(),
        };
        let alpha = dot(eigs, &w) / w.iter().sum::<f64>();
        gprev = Some(g.clone());
        let ag: Vec<f64> = g.iter().zip(eigs).map(|(gi, a)| a * gi).collect();
        for i in 0..n {
            g[i] -= ag[i] / alpha;
        }
        if norm(&g) <= tol * g1 {
            return k;
        }
    }
    0
}

// plain recursive BB1, alpha from s'y/s's with recursive s
fn bb1_dotalpha(eigs: &[f64], x0: &[f64], xstar: &[f64], tol: f64) -> usize {
    let n = eigs.len();
    let mut g: Vec<f64> = (0..n).map(|i| eigs[i] * (x0[i] - xstar[i])).collect();
    let g1 = norm(&g);
    let mut gprev: Option<(Vec<f64>, f64)> = None; // (g_{k-1}, alpha_{k-1})
    for k in 1..100000 {
        let alpha = match &gprev {
            None => {
                let ag: Vec<f64> = g.iter().zip(eigs).map(|(gi, a)| a * gi).collect();
                dot(&ag, &g) / dot(&g, &g)
            }
            Some((gp, ap)) => {
                let s: Vec<f64> = gp.iter().map(|v| -v / ap).collect();
                let y: Vec<f64> = g.iter().zip(gp).map(|(a, b)| a - b).collect();
                dot(&s, &y) / dot(&s, &s)
            }
        };
        gprev = Some((g.clone(), alpha));
        let ag: Vec<f64> = g.iter().zip(eigs).map(|(gi, a)| a * gi).collect();
        for i in 0..n {
            g[i] -= ag[i] / alpha;
        }
        if norm(&g) <= tol * g1 {
            return k;
        }
    }
    0
}

// plain recursive RBB with tau_k = mu * alpha_{k-1}/alpha_{k-2}
fn rbb_sumalpha(eigs: &[f64], x0: &[f64], xstar: &[f64], tol: f64, alpha_scaled: bool) -> usize {
    let n = eigs.len();
    let mut g: Vec<f64> = (0..n).map(|i| eigs[i] * (x0[i] - xstar[i])).collect();
    let g1 = norm(&g);
    let mut gprev: Option<Vec<f64>> = None;
    let (mut a1, mut a2): (Option<f64>, Option<f64>) = (None, None);
    for k in 1..100000 {
        let tau = match (a1, a2) {
            (Some(p), Some(q)) => {
                let base = p / q;
                if alpha_scaled {
                    p * base
                } else {
                    base
                }
            }
            _ => 0.0,
        };
        let w: Vec<f64> = match &gprev {
            None => g.iter().map(|v| v * v).collect(),
            Some(gp) => gp.iter().map(|v| v * v).collect(),
        };
        let num: f64 = eigs.iter().zip(&w).map(|(a, wi)| (a + tau * a * a) * wi).sum();
        let den: f64 = eigs.iter().zip(&w).map(|(a, wi)| (1.0 + tau * a) * wi).sum();
        let alpha = num / den;
        a2 = a1;
        a1 = Some(alpha);
        gprev = Some(g.clone());
        let ag: Vec<f64> = g.iter().zip(eigs).map(|(gi, a)| a * gi).collect();
        for i in 0..n {
            g[i] -= ag[i] / alpha;
        }
        if norm(&g) <= tol * g1 {
            return k;
        }
    }
    0
}

// plain recursive RBB via (s,y) dot products
fn rbb_dotalpha(eigs: &[f64], x0: &[f64], xstar: &[f64], tol: f64, alpha_scaled: bool) -> usize {
    let n = eigs.len();
    let mut g: Vec<f64> = (0..n).map(|i| eigs[i] * (x0[i] - xstar[i])).collect();
    let g1 = norm(&g);
    let mut gprev: Option<(Vec<f64>, f64)> = None;
    let (mut a1, mut a2): (Option<f64>, Option<f64>) = (None, None);
    for k in 1..100000 {
        let alpha = match &gprev {
            None => {
                let ag: Vec<f64> = g.iter().zip(eigs).map(|(gi, a)| a * gi).collect();
                dot(&ag, &g) / dot(&g, &g)
            }
            Some((gp, ap)) => {
                let tau = match (a1, a2) {
                    (Some(p), Some(q)) => {
                        let base = p / q;
                        if alpha_scaled {
                            p * base
                        } else {
                            base
                        }
                    }
                    _ => 0.0,
                };
                let s: Vec<f64> = gp.iter().map(|v| -v / ap).collect();
                let y: Vec<f64> = g.iter().zip(gp).map(|(a, b)| a - b).collect();
                (dot(&s, &y) + tau * dot(&y, &y)) / (dot(&s, &s) + tau * dot(&s, &y))
            }
        };
        a2 = a1;
        a1 = Some(alpha);
        gprev = Some((g.clone(), alpha));
        let ag: Vec<f64> = g.iter().zip(eigs).map(|(gi, a)| a * gi).collect();
        for i in 0..n {
            g[i] -= ag[i] / alpha;
        }
        if norm(&g) <= tol * g1 {
            return k;
        }
    }
    0
}

fn main() {
    let eigs = generate_spectrum(&SpectrumSpec::DeAsmundis { n: 5, ncond: 3.0 }).unwrap();
    let x0 = vec![0.0; 5];
    let xs = vec![1.0; 5];
    println!("BB1 plain recursive, sum-alpha: {}", bb1_sumalpha(&eigs, &x0, &xs, 1e-20));
    println!("BB1 plain recursive, dot-alpha: {}", bb1_dotalpha(&eigs, &x0, &xs, 1e-20));
    println!("RBB1 plain recursive, sum-alpha: {}", rbb_sumalpha(&eigs, &x0, &xs, 1e-20, false));
    println!("RBB1 plain recursive, dot-alpha: {}", rbb_dotalpha(&eigs, &x0, &xs, 1e-20, false));
    println!("RBB2 plain recursive, sum-alpha: {}", rbb_sumalpha(&eigs, &x0, &xs, 1e-20, true));
    println!("RBB2 plain recursive, dot-alpha: {}", rbb_dotalpha(&eigs, &x0, &xs, 1e-20, true));
    for m in ["bb1", "bb2", "rbb1", "rbb2"] {
        println!("{m} from-x dot: {}", fromx(&eigs, &x0, &xs, 1e-20, m));
    }
}

// from-x loop in the conventional shape: s = x - xold, y = g - gold
fn fromx(eigs: &[f64], x0: &[f64], xstar: &[f64], tol: f64, method: &str) -> usize {
    let n = eigs.len();
    let mut x = x0.to_vec();
    let mut g: Vec<f64> = (0..n).map(|i| eigs[i] * (x[i] - xstar[i])).collect();
    let g1 = norm(&g);
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None; // (xold, gold)
    let (mut a1, mut a2): (Option<f64>, Option<f64>) = (None, None);
    for k in 1..100000 {
        let alpha = match &prev {
            None => {
                let ag: Vec<f64> = g.iter().zip(eigs).map(|(gi, a)| a * gi).collect();
                dot(&ag, &g) / dot(&g, &g)
            }
            Some((xold, gold)) => {
                let s: Vec<f64> = x.iter().zip(xold).map(|(a, b)| a - b).collect();
                let y: Vec<f64> = g.iter().zip(gold).map(|(a, b)| a - b).collect();
                match method {
                    "bb1" => dot(&s, &y) / dot(&s, &s),
                    "bb2" => dot(&y, &y) / dot(&s, &y),
                    "rbb1" | "rbb2" => {
                        let tau = match (a1, a2) {
                            (Some(p), Some(q)) => {
                                let base = p / q;
                                if method == "rbb2" { p * base } else { base }
                            }
                            _ => 0.0,
                        };
                        (dot(&s, &y) + tau * dot(&y, &y)) / (dot(&s, &s) + tau * dot(&s, &y))
                    }
                    _ => unreachable!(),
                }
            }
        };
        a2 = a1;
        a1 = Some(alpha);
        prev = Some((x.clone(), g.clone()));
        for i in 0..n {
            x[i] -= g[i] / alpha;
        }
        g = (0..n).map(|i| eigs[i] * (x[i] - xstar[i])).collect();
        if norm(&g) <= tol * g1 {
            return k;
        }
    }
    0
}
