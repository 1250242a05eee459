//! Strictly convex quadratic test problems.
//!
//! A problem is `f(x) = 1/2 (x - x*)' A (x - x*)` (equivalently
//! `1/2 x'Ax - b'x` with `b = A x*`), with the Hessian held either in
//! spectral form (positive eigenvalues on the standard basis, sorted
//! non-increasing) or as an explicit symmetric positive definite matrix.
//! The spectral form is the canonical one: every diagnostic in
//! [`crate::analysis`] works in the eigenbasis.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg;

/// Relative symmetry tolerance accepted for dense Hessians.
const SYMMETRY_RTOL: f64 = 1e-12;

/// Hessian storage.
#[derive(Debug, Clone)]
pub enum Hessian {
    /// Eigenvalues in non-increasing order; eigenbasis is the standard basis.
    Spectral { eigenvalues: Vec<f64> },
    /// Symmetric positive definite matrix, row-major.
    Dense { matrix: Vec<Vec<f64>> },
}

/// Source of the linear term: either the optimal point or the raw
/// coefficient vector. Exactly one is stored; the other is derived.
#[derive(Debug, Clone)]
enum LinearTerm {
    XStar(Vec<f64>),
    B(Vec<f64>),
}

/// An n-dimensional strictly convex quadratic, immutable after construction.
#[derive(Debug, Clone)]
pub struct QuadraticProblem {
    hessian: Hessian,
    linear: LinearTerm,
    n: usize,
    eig_min: f64,
    eig_max: f64,
}

/// Recipe for an eigenvalue list.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum SpectrumSpec {
    /// Logarithmically spaced diagonal: `a_i = 10^{ncond/(n-1) * (n-i)}`,
    /// so the condition number is exactly `10^ncond`.
    #[serde(rename = "deasmundis")]
    DeAsmundis { n: usize, ncond: f64 },
    /// Explicit positive eigenvalues (sorted non-increasing on output).
    #[serde(rename = "explicit")]
    Explicit { eigenvalues: Vec<f64> },
    /// `log10(a_i)` uniform on `[0, log10(kappa)]` with both endpoints
    /// pinned, so the realized condition number equals `kappa`.
    #[serde(rename = "random")]
    RandomLogUniform { n: usize, kappa: f64, seed: u64 },
}

/// Produce an eigenvalue list (non-increasing) from a spectrum recipe.
pub fn generate_spectrum(spec: &SpectrumSpec) -> Result<Vec<f64>> {
    match spec {
        SpectrumSpec::DeAsmundis { n, ncond } => {
            if *n < 2 {
                return Err(Error::InvalidSpec(format!("n must be >= 2, got {n}")));
            }
            if !(*ncond > 0.0) {
                return Err(Error::InvalidSpec(format!("ncond must be > 0, got {ncond}")));
            }
            let n = *n;
            Ok((1..=n)
                .map(|i| 10f64.powf(ncond * (n - i) as f64 / (n - 1) as f64))
                .collect())
        }
        SpectrumSpec::Explicit { eigenvalues } => {
            if eigenvalues.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
                return Err(Error::InvalidSpec(
                    "explicit spectrum must be strictly positive and finite".into(),
                ));
            }
            let mut eigs = eigenvalues.clone();
            eigs.sort_by(|a, b| b.total_cmp(a));
            Ok(eigs)
        }
        SpectrumSpec::RandomLogUniform { n, kappa, seed } => {
            if *n < 2 {
                return Err(Error::InvalidSpec(format!("n must be >= 2, got {n}")));
            }
            if !(*kappa > 1.0) {
                return Err(Error::InvalidSpec(format!("kappa must be > 1, got {kappa}")));
            }
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
            let span = kappa.log10();
            let mut logs: Vec<f64> = (0..n - 2).map(|_| rng.gen::<f64>() * span).collect();
            logs.push(span);
            logs.push(0.0);
            logs.sort_by(|a, b| b.total_cmp(a));
            let mut eigs: Vec<f64> = logs.iter().map(|&e| 10f64.powf(e)).collect();
            // pin the endpoints so the realized condition number is exact
            eigs[0] = *kappa;
            eigs[n - 1] = 1.0;
            Ok(eigs)
        }
    }
}

/// Assemble a problem from an eigenvalue list and its optimal point.
pub fn build_problem(spectrum: &[f64], x_star: &[f64]) -> Result<QuadraticProblem> {
    if spectrum.len() != x_star.len() {
        return Err(Error::DimensionMismatch {
            expected: spectrum.len(),
            got: x_star.len(),
        });
    }
    QuadraticProblem::from_spectrum(spectrum.to_vec(), x_star.to_vec())
}

impl QuadraticProblem {
    /// Spectral problem with optimal point `x_star`.
    pub fn from_spectrum(mut eigenvalues: Vec<f64>, x_star: Vec<f64>) -> Result<Self> {
        let n = eigenvalues.len();
        if n < 2 {
            return Err(Error::InvalidSpec(format!("dimension must be >= 2, got {n}")));
        }
        if x_star.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x_star.len() });
        }
        if eigenvalues.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidSpec(
                "eigenvalues must be strictly positive and finite".into(),
            ));
        }
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let eig_max = eigenvalues[0];
        let eig_min = eigenvalues[n - 1];
        Ok(Self {
            hessian: Hessian::Spectral { eigenvalues },
            linear: LinearTerm::XStar(x_star),
            n,
            eig_min,
            eig_max,
        })
    }

    /// Spectral problem given the linear term `b` instead of `x_star`.
    pub fn from_spectrum_with_b(mut eigenvalues: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let n = eigenvalues.len();
        if n < 2 {
            return Err(Error::InvalidSpec(format!("dimension must be >= 2, got {n}")));
        }
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: b.len() });
        }
        if eigenvalues.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidSpec(
                "eigenvalues must be strictly positive and finite".into(),
            ));
        }
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let eig_max = eigenvalues[0];
        let eig_min = eigenvalues[n - 1];
        Ok(Self {
            hessian: Hessian::Spectral { eigenvalues },
            linear: LinearTerm::B(b),
            n,
            eig_min,
            eig_max,
        })
    }

    /// Dense SPD problem. The matrix must be symmetric to `1e-12` relative
    /// and have a strictly positive smallest eigenvalue.
    pub fn from_dense(matrix: Vec<Vec<f64>>, x_star: Vec<f64>) -> Result<Self> {
        let n = matrix.len();
        if n < 2 {
            return Err(Error::InvalidSpec(format!("dimension must be >= 2, got {n}")));
        }
        if x_star.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x_star.len() });
        }
        let mut scale = 0f64;
        for row in &matrix {
            if row.len() != n {
                return Err(Error::InvalidSpec("matrix must be square".into()));
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::InvalidSpec("matrix entries must be finite".into()));
                }
                scale = scale.max(v.abs());
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (matrix[i][j] - matrix[j][i]).abs() > SYMMETRY_RTOL * scale {
                    return Err(Error::InvalidSpec(format!(
                        "matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let (eigs, _) = linalg::sym_eigen_desc(&matrix);
        let eig_max = eigs[0];
        let eig_min = eigs[n - 1];
        if !(eig_min > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "matrix not positive definite (smallest eigenvalue {eig_min:e})"
            )));
        }
        Ok(Self {
            hessian: Hessian::Dense { matrix },
            linear: LinearTerm::XStar(x_star),
            n,
            eig_min,
            eig_max,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn hessian(&self) -> &Hessian {
        &self.hessian
    }

    pub fn is_spectral(&self) -> bool {
        matches!(self.hessian, Hessian::Spectral { .. })
    }

    /// Eigenvalues in non-increasing order (spectral form only).
    pub fn eigenvalues(&self) -> Option<&[f64]> {
        match &self.hessian {
            Hessian::Spectral { eigenvalues } => Some(eigenvalues),
            Hessian::Dense { .. } => None,
        }
    }

    pub fn eig_max(&self) -> f64 {
        self.eig_max
    }

    pub fn eig_min(&self) -> f64 {
        self.eig_min
    }

    /// Condition number `lambda_max / lambda_min`.
    pub fn condition_number(&self) -> f64 {
        self.eig_max / self.eig_min
    }

    /// The optimal point, if the problem was built from one.
    pub fn x_star(&self) -> Option<&[f64]> {
        match &self.linear {
            LinearTerm::XStar(x) => Some(x),
            LinearTerm::B(_) => None,
        }
    }

    /// Linear term `b = A x_star`, derived when `x_star` is stored.
    pub fn b(&self) -> Vec<f64> {
        match &self.linear {
            LinearTerm::B(b) => b.clone(),
            LinearTerm::XStar(x) => self.matvec(x),
        }
    }

    /// `A v`.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        match &self.hessian {
            Hessian::Spectral { eigenvalues } => {
                eigenvalues.iter().zip(v).map(|(a, x)| a * x).collect()
            }
            Hessian::Dense { matrix } => linalg::matvec(matrix, v),
        }
    }

    /// `A^m v`. The spectral path accepts any real `m >= 0`; the dense path
    /// is restricted to integer `m >= 0` (repeated products).
    pub fn matvec_power(&self, v: &[f64], m: f64) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: v.len() });
        }
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::InvalidSpec(format!("power must be >= 0, got {m}")));
        }
        match &self.hessian {
            Hessian::Spectral { eigenvalues } => Ok(eigenvalues
                .iter()
                .zip(v)
                .map(|(a, x)| a.powf(m) * x)
                .collect()),
            Hessian::Dense { matrix } => {
                if m.fract() != 0.0 {
                    return Err(Error::Unsupported(format!(
                        "real matrix power {m} requires a spectral Hessian"
                    )));
                }
                let mut out = v.to_vec();
                for _ in 0..(m as u64) {
                    out = linalg::matvec(matrix, &out);
                }
                Ok(out)
            }
        }
    }

    /// Gradient `A(x - x*)`, equivalently `Ax - b`.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        match &self.linear {
            LinearTerm::XStar(xs) => {
                let diff: Vec<f64> = x.iter().zip(xs).map(|(a, b)| a - b).collect();
                Ok(self.matvec(&diff))
            }
            LinearTerm::B(b) => {
                let ax = self.matvec(x);
                Ok(ax.iter().zip(b).map(|(a, b)| a - b).collect())
            }
        }
    }

    /// Objective value. With `x_star` stored this is
    /// `1/2 (x-x*)'A(x-x*)` (zero at the optimum); with `b` stored it is
    /// `1/2 x'Ax - b'x`.
    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        match &self.linear {
            LinearTerm::XStar(xs) => {
                let diff: Vec<f64> = x.iter().zip(xs).map(|(a, b)| a - b).collect();
                Ok(0.5 * linalg::dot(&self.matvec(&diff), &diff))
            }
            LinearTerm::B(b) => {
                let ax = self.matvec(x);
                Ok(0.5 * linalg::dot(&ax, x) - linalg::dot(b, x))
            }
        }
    }

    /// `1/2 g' A^{-1} g`, the gap `f(x) - f(x*)` expressed through the
    /// gradient. Spectral form only.
    pub fn gap_from_gradient(&self, g: &[f64]) -> Result<f64> {
        match &self.hessian {
            Hessian::Spectral { eigenvalues } => {
                Ok(0.5 * eigenvalues.iter().zip(g).map(|(a, gi)| gi * gi / a).sum::<f64>())
            }
            Hessian::Dense { .. } => Err(Error::Unsupported(
                "gap_from_gradient requires a spectral Hessian".into(),
            )),
        }
    }

    /// Short stable identifier derived from the serialized form.
    pub fn digest(&self) -> String {
        let json = self.to_json_string().expect("problem serialization");
        let mut hasher = Sha256::new();
        hasher.update(json.as_bytes());
        let hex = format!("{:x}", hasher.finalize());
        hex[..16].to_string()
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string(&ProblemJson::from(self))?)
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ProblemJson::from(self))?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: ProblemJson = serde_json::from_str(s)?;
        doc.try_into()
    }
}

/// Wire format: `{"kind":"spectral"|"dense", "eigenvalues"|"matrix", "x_star"|"b", "n"}`.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ProblemJson {
    Spectral {
        eigenvalues: Vec<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        x_star: Option<Vec<f64>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        b: Option<Vec<f64>>,
        n: usize,
    },
    Dense {
        matrix: Vec<Vec<f64>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        x_star: Option<Vec<f64>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        b: Option<Vec<f64>>,
        n: usize,
    },
}

impl From<&QuadraticProblem> for ProblemJson {
    fn from(p: &QuadraticProblem) -> Self {
        let (x_star, b) = match &p.linear {
            LinearTerm::XStar(x) => (Some(x.clone()), None),
            LinearTerm::B(b) => (None, Some(b.clone())),
        };
        match &p.hessian {
            Hessian::Spectral { eigenvalues } => ProblemJson::Spectral {
                eigenvalues: eigenvalues.clone(),
                x_star,
                b,
                n: p.n,
            },
            Hessian::Dense { matrix } => ProblemJson::Dense {
                matrix: matrix.clone(),
                x_star,
                b,
                n: p.n,
            },
        }
    }
}

impl TryFrom<ProblemJson> for QuadraticProblem {
    type Error = Error;

    fn try_from(doc: ProblemJson) -> Result<Self> {
        let check_n = |n: usize, len: usize| -> Result<()> {
            if n != len {
                Err(Error::InvalidSpec(format!("declared n={n} but stored dimension {len}")))
            } else {
                Ok(())
            }
        };
        match doc {
            ProblemJson::Spectral { eigenvalues, x_star, b, n } => {
                check_n(n, eigenvalues.len())?;
                match (x_star, b) {
                    (Some(x), None) => QuadraticProblem::from_spectrum(eigenvalues, x),
                    (None, Some(b)) => QuadraticProblem::from_spectrum_with_b(eigenvalues, b),
                    _ => Err(Error::InvalidSpec(
                        "exactly one of x_star / b must be present".into(),
                    )),
                }
            }
            ProblemJson::Dense { matrix, x_star, b, n } => {
                check_n(n, matrix.len())?;
                match (x_star, b) {
                    (Some(x), None) => QuadraticProblem::from_dense(matrix, x),
                    (None, Some(_)) => Err(Error::Unsupported(
                        "dense problems are described by x_star in this schema".into(),
                    )),
                    _ => Err(Error::InvalidSpec(
                        "exactly one of x_star / b must be present".into(),
                    )),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, rtol: f64) {
        let scale = a.abs().max(b.abs()).max(1e-300);
        assert!(
            (a - b).abs() <= rtol * scale,
            "expected {a} ~ {b} (rtol {rtol})"
        );
    }

    #[test]
    fn deasmundis_n5_ncond3() {
        let eigs =
            generate_spectrum(&SpectrumSpec::DeAsmundis { n: 5, ncond: 3.0 }).unwrap();
        let expected = [1000.0, 10f64.powf(2.25), 10f64.powf(1.5), 10f64.powf(0.75), 1.0];
        for (a, e) in eigs.iter().zip(expected) {
            assert_close(*a, e, 1e-13);
        }
        assert_close(eigs[0] / eigs[4], 1000.0, 1e-12);
    }

    #[test]
    fn deasmundis_n2_ncond1() {
        let eigs =
            generate_spectrum(&SpectrumSpec::DeAsmundis { n: 2, ncond: 1.0 }).unwrap();
        assert_close(eigs[0], 10.0, 1e-14);
        assert_close(eigs[1], 1.0, 1e-14);
    }

    #[test]
    fn explicit_passthrough() {
        let eigs = generate_spectrum(&SpectrumSpec::Explicit {
            eigenvalues: vec![4.0, 1.0],
        })
        .unwrap();
        assert_eq!(eigs, vec![4.0, 1.0]);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(generate_spectrum(&SpectrumSpec::DeAsmundis { n: 1, ncond: 3.0 }).is_err());
        assert!(generate_spectrum(&SpectrumSpec::DeAsmundis { n: 5, ncond: 0.0 }).is_err());
        assert!(generate_spectrum(&SpectrumSpec::DeAsmundis { n: 5, ncond: -1.0 }).is_err());
    }

    #[test]
    fn random_log_uniform_pins_endpoints_and_is_deterministic() {
        let spec = SpectrumSpec::RandomLogUniform { n: 50, kappa: 1e4, seed: 7 };
        let a = generate_spectrum(&spec).unwrap();
        let b = generate_spectrum(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0], 1e4);
        assert_eq!(a[49], 1.0);
        assert!(a.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn build_problem_gradient_at_origin() {
        let p = build_problem(&[4.0, 1.0], &[1.0, 1.0]).unwrap();
        let g = p.gradient(&[0.0, 0.0]).unwrap();
        assert_eq!(g, vec![-4.0, -1.0]);
    }

    #[test]
    fn gradient_and_objective_vanish_at_optimum() {
        let p = build_problem(&[4.0, 1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(p.gradient(&[1.0, 1.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(p.objective(&[1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn one_dimensional_problem_rejected() {
        assert!(build_problem(&[1.0], &[0.0]).is_err());
    }

    #[test]
    fn dense_gradient() {
        let p = QuadraticProblem::from_dense(
            vec![vec![2.0, 1.0], vec![1.0, 2.0]],
            vec![0.0, 0.0],
        )
        .unwrap();
        assert_eq!(p.gradient(&[1.0, 0.0]).unwrap(), vec![2.0, 1.0]);
    }

    #[test]
    fn asymmetric_dense_rejected() {
        let res = QuadraticProblem::from_dense(
            vec![vec![2.0, 1.0], vec![0.5, 2.0]],
            vec![0.0, 0.0],
        );
        assert!(res.is_err());
    }

    #[test]
    fn indefinite_dense_rejected() {
        let res = QuadraticProblem::from_dense(
            vec![vec![1.0, 2.0], vec![2.0, 1.0]],
            vec![0.0, 0.0],
        );
        assert!(res.is_err());
    }

    #[test]
    fn matvec_power_examples() {
        let p = build_problem(&[4.0, 1.0], &[0.0, 0.0]).unwrap();
        assert_eq!(p.matvec_power(&[1.0, 1.0], 2.0).unwrap(), vec![16.0, 1.0]);
        assert_eq!(p.matvec_power(&[1.0, 1.0], 1.0).unwrap(), vec![4.0, 1.0]);
        let half = p.matvec_power(&[1.0, 0.0], 0.5).unwrap();
        assert_close(half[0], 2.0, 1e-15);
        assert_eq!(half[1], 0.0);
    }

    #[test]
    fn dense_real_power_unsupported() {
        let p = QuadraticProblem::from_dense(
            vec![vec![2.0, 1.0], vec![1.0, 2.0]],
            vec![0.0, 0.0],
        )
        .unwrap();
        assert!(matches!(
            p.matvec_power(&[1.0, 0.0], 0.5),
            Err(Error::Unsupported(_))
        ));
        assert!(p.matvec_power(&[1.0, 0.0], 2.0).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let p = build_problem(&[4.0, 2.0, 1.0], &[1.0, -1.0, 0.5]).unwrap();
        let s = p.to_json_string().unwrap();
        let q = QuadraticProblem::from_json_str(&s).unwrap();
        assert_eq!(s, q.to_json_string().unwrap());
        assert_eq!(p.digest(), q.digest());
    }

    #[test]
    fn json_rejects_inconsistent_n() {
        let bad = r#"{"kind":"spectral","eigenvalues":[4.0,1.0],"x_star":[0.0,0.0],"n":3}"#;
        assert!(QuadraticProblem::from_json_str(bad).is_err());
    }

    #[test]
    fn spectral_matches_dense_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let eigs = vec![9.0, 5.5, 2.0, 1.0];
        let xs = vec![1.0, -2.0, 0.25, 3.0];
        let spectral = build_problem(&eigs, &xs).unwrap();
        let dense = QuadraticProblem::from_dense(
            (0..4)
                .map(|i| (0..4).map(|j| if i == j { eigs[i] } else { 0.0 }).collect())
                .collect(),
            xs.clone(),
        )
        .unwrap();
        for _ in 0..100 {
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let gs = spectral.gradient(&x).unwrap();
            let gd = dense.gradient(&x).unwrap();
            for (a, b) in gs.iter().zip(&gd) {
                assert_close(*a, *b, 1e-13);
            }
            assert_close(
                spectral.objective(&x).unwrap(),
                dense.objective(&x).unwrap(),
                1e-13,
            );
            let ps = spectral.matvec_power(&x, 3.0).unwrap();
            let pd = dense.matvec_power(&x, 3.0).unwrap();
            for (a, b) in ps.iter().zip(&pd) {
                assert_close(*a, *b, 1e-13);
            }
        }
    }

    #[test]
    fn objective_gap_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let p = build_problem(&[100.0, 7.0, 2.5, 1.0], &[1.0, 1.0, 1.0, 1.0]).unwrap();
        for _ in 0..100 {
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let g = p.gradient(&x).unwrap();
            let f = p.objective(&x).unwrap();
            assert_close(f, p.gap_from_gradient(&g).unwrap(), 1e-12);
        }
    }

    #[test]
    fn rayleigh_quotient_within_spectrum_bounds() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let p = build_problem(&[50.0, 3.0, 1.2, 1.0], &[0.0; 4]).unwrap();
        for _ in 0..1000 {
            let g: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let gg = crate::linalg::dot(&g, &g);
            if gg == 0.0 {
                continue;
            }
            let q = crate::linalg::dot(&p.matvec(&g), &g) / gg;
            assert!(q >= p.eig_min() - 1e-12 && q <= p.eig_max() + 1e-12);
        }
    }
}
