//! The 2x2 Hamiltonian `[[r e^{i theta}, s], [s, r e^{-i theta}]]`.

use num_complex::Complex64;
use serde::Serialize;

pub type Vec2 = [Complex64; 2];
pub type Mat2 = [[Complex64; 2]; 2];

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative tolerance used to flag the exceptional point `s^2 = r^2 sin^2 theta`.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum MatrixModelError {
    #[error("operation requires the unbroken phase, model is {0:?}")]
    NotUnbroken(Phase),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoLevelModel {
    pub r: f64,
    pub s: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Unbroken,
    Broken,
    Boundary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoLevelSolution {
    pub model: TwoLevelModel,
    pub phase: Phase,
    /// `sin alpha = (r/s) sin theta`; complex in the broken phase, absent for `s = 0`.
    pub alpha: Option<Complex64>,
    /// `[e_plus, e_minus]`, paired with `eigenvectors`.
    pub eigenvalues: [Complex64; 2],
    pub eigenvectors: [Vec2; 2],
    pub c_matrix: Option<Mat2>,
}

pub fn parity() -> Mat2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat_vec(a: &Mat2, v: &Vec2) -> Vec2 {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

pub fn conj_mat(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[0][1].conj()], [a[1][0].conj(), a[1][1].conj()]]
}

pub fn transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

/// Largest entry modulus of `a - b`.
pub fn max_diff(a: &Mat2, b: &Mat2) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

pub fn identity() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

impl TwoLevelModel {
    pub fn new(r: f64, s: f64, theta: f64) -> Self {
        Self { r, s, theta }
    }

    pub fn hamiltonian(&self) -> Mat2 {
        let d = Complex64::from_polar(self.r, self.theta);
        let s = Complex64::from(self.s);
        [[d, s], [s, d.conj()]]
    }

    pub fn phase(&self) -> Phase {
        let a = self.s * self.s;
        let b = (self.r * self.theta.sin()).powi(2);
        let scale = a.max(b);
        if (a - b).abs() <= BOUNDARY_TOL * scale || scale == 0.0 {
            Phase::Boundary
        } else if a > b {
            Phase::Unbroken
        } else {
            Phase::Broken
        }
    }
}

/// `e^{i alpha/2}`-type eigenvectors for a given (possibly complex) alpha.
fn eigenvectors_for(alpha: Complex64) -> [Vec2; 2] {
    let norm = (2.0 * alpha.cos()).sqrt();
    let h = alpha / 2.0;
    let plus = [(I * h).exp() / norm, (-I * h).exp() / norm];
    let minus = [I * (-I * h).exp() / norm, -I * (I * h).exp() / norm];
    [plus, minus]
}

/// `C = [[i sin a, 1], [1, -i sin a]] / cos a`.
pub fn c_for(alpha: f64) -> Mat2 {
    let (s, c) = alpha.sin_cos();
    [[I * s / c, ONE / c], [ONE / c, -I * s / c]]
}

pub fn solve(model: TwoLevelModel) -> TwoLevelSolution {
    let phase = model.phase();
    let TwoLevelModel { r, s, theta } = model;
    let mean = Complex64::from(r * theta.cos());
    let disc = Complex64::from(s * s - (r * theta.sin()).powi(2)).sqrt();
    if s == 0.0 {
        // alpha undefined; the Hamiltonian is diagonal
        let h = model.hamiltonian();
        return TwoLevelSolution {
            model,
            phase,
            alpha: None,
            eigenvalues: [h[0][0], h[1][1]],
            eigenvectors: [[ONE, ZERO], [ZERO, ONE]],
            c_matrix: None,
        };
    }
    let sin_a = Complex64::from(r / s * theta.sin());
    let alpha = sin_a.asin();
    let eigenvectors = eigenvectors_for(alpha);
    // H v_plus = (r cos theta + s cos alpha) v_plus
    let split = Complex64::from(s) * alpha.cos();
    let eigenvalues = [mean + split, mean - split];
    debug_assert!((split.norm() - disc.norm()).abs() <= 1e-9 * (1.0 + disc.norm()));
    let c_matrix = (phase == Phase::Unbroken).then(|| c_for(alpha.re));
    TwoLevelSolution { model, phase, alpha: Some(alpha), eigenvalues, eigenvectors, c_matrix }
}

/// `(PT u) . v` with `T` complex conjugation.
pub fn pt_inner(u: &Vec2, v: &Vec2) -> Complex64 {
    u[1].conj() * v[0] + u[0].conj() * v[1]
}

impl TwoLevelSolution {
    fn c(&self) -> Result<&Mat2, MatrixModelError> {
        self.c_matrix.as_ref().ok_or(MatrixModelError::NotUnbroken(self.phase))
    }

    /// `(CPT u) . v`.
    pub fn cpt_inner(&self, u: &Vec2, v: &Vec2) -> Result<Complex64, MatrixModelError> {
        let cpt_u = self.cpt(u)?;
        Ok(cpt_u[0] * v[0] + cpt_u[1] * v[1])
    }

    /// `C P conj(u)`.
    pub fn cpt(&self, u: &Vec2) -> Result<Vec2, MatrixModelError> {
        let pu = [u[1].conj(), u[0].conj()];
        Ok(mat_vec(self.c()?, &pu))
    }

    /// `sum_k |e_k><e_k|` with CPT bras, weighted by `weights`.
    pub fn cpt_projector_sum(&self, weights: [f64; 2]) -> Result<Mat2, MatrixModelError> {
        let mut out = [[ZERO; 2]; 2];
        for (k, v) in self.eigenvectors.iter().enumerate() {
            let bra = self.cpt(v)?;
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] += weights[k] * v[i] * bra[j];
                }
            }
        }
        Ok(out)
    }

    /// `e^{-iHt} psi0` from the eigen-expansion of `psi0`.
    pub fn evolve(&self, psi0: &Vec2, t: f64) -> Vec2 {
        let [a, b] = self.eigenvectors;
        let det = a[0] * b[1] - b[0] * a[1];
        let ca = (psi0[0] * b[1] - b[0] * psi0[1]) / det;
        let cb = (a[0] * psi0[1] - psi0[0] * a[1]) / det;
        let pa = ca * (-I * self.eigenvalues[0] * t).exp();
        let pb = cb * (-I * self.eigenvalues[1] * t).exp();
        [pa * a[0] + pb * b[0], pa * a[1] + pb * b[1]]
    }

    /// `A^T = (CPT) A (CPT)` within `tol` relative to the size of `A`.
    pub fn is_observable(&self, a: &Mat2, tol: f64) -> Result<bool, MatrixModelError> {
        let cp = mat_mul(self.c()?, &parity());
        let rhs = mat_mul(&mat_mul(&cp, &conj_mat(a)), &conj_mat(&cp));
        let scale = a.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
        Ok(max_diff(&transpose(a), &rhs) <= tol * scale)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let c = |z: &Complex64| [z.re, z.im];
        serde_json::json!({
            "model": self.model,
            "phase": self.phase,
            "alpha": self.alpha.as_ref().map(c),
            "eigenvalues": self.eigenvalues.iter().map(c).collect::<Vec<_>>(),
            "eigenvectors": self.eigenvectors.iter().map(|v| v.iter().map(c).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "pt_norms": self.eigenvectors.iter().map(|v| c(&pt_inner(v, v))).collect::<Vec<_>>(),
            "c_matrix": self.c_matrix.as_ref().map(|m| m.iter().map(|r| r.iter().map(c).collect::<Vec<_>>()).collect::<Vec<_>>()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn zero_r_gives_parity() {
        let sol = solve(TwoLevelModel::new(0.0, 1.0, 0.7));
        assert_eq!(sol.phase, Phase::Unbroken);
        assert!(close(sol.eigenvalues[0], ONE) && close(sol.eigenvalues[1], -ONE));
        assert!(max_diff(sol.c_matrix.as_ref().unwrap(), &parity()) < 1e-15);
    }

    #[test]
    fn hermitian_limit() {
        let sol = solve(TwoLevelModel::new(2.0, 0.5, 0.0));
        assert!(max_diff(sol.c_matrix.as_ref().unwrap(), &parity()) < 1e-15);
    }

    #[test]
    fn broken_phase_spectrum() {
        let sol = solve(TwoLevelModel::new(1.0, 0.5, FRAC_PI_2));
        assert_eq!(sol.phase, Phase::Broken);
        let want = 3f64.sqrt() / 2.0;
        let mut ims: Vec<f64> = sol.eigenvalues.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + want).abs() < 1e-12 && (ims[1] - want).abs() < 1e-12);
        assert!(sol.eigenvalues.iter().all(|z| z.re.abs() < 1e-12));
        for v in &sol.eigenvectors {
            assert!(pt_inner(v, v).norm() < 1e-10);
        }
        assert!(sol.c_matrix.is_none());
    }

    #[test]
    fn pt_and_cpt_norms() {
        let sol = solve(TwoLevelModel::new(1.0, 2.0, 0.9));
        let [p, m] = sol.eigenvectors;
        assert!(close(pt_inner(&p, &p), ONE));
        assert!(close(pt_inner(&m, &m), -ONE));
        assert!(close(pt_inner(&p, &m), ZERO));
        assert!(close(sol.cpt_inner(&m, &m).unwrap(), ONE));
        let a = sol.alpha.unwrap().re;
        assert!(close(sol.cpt_inner(&[ONE, ZERO], &[ONE, ZERO]).unwrap(), Complex64::from(1.0 / a.cos())));
    }

    #[test]
    fn observables() {
        let sol = solve(TwoLevelModel::new(1.0, 2.0, 0.9));
        assert!(sol.is_observable(&sol.model.hamiltonian(), 1e-12).unwrap());
        assert!(sol.is_observable(sol.c_matrix.as_ref().unwrap(), 1e-12).unwrap());
        assert!(!sol.is_observable(&[[ZERO, ONE], [ZERO, ZERO]], 1e-12).unwrap());
    }

    #[test]
    fn evolution_at_zero_is_identity() {
        let sol = solve(TwoLevelModel::new(1.0, 2.0, 0.9));
        let psi = [Complex64::new(0.3, -0.2), Complex64::new(1.1, 0.4)];
        let out = sol.evolve(&psi, 0.0);
        assert!(close(out[0], psi[0]) && close(out[1], psi[1]));
    }

    #[test]
    fn negative_s_swaps_ordering() {
        let sol = solve(TwoLevelModel::new(1.0, -2.0, 0.4));
        let h = sol.model.hamiltonian();
        for k in 0..2 {
            let hv = mat_vec(&h, &sol.eigenvectors[k]);
            assert!(close(hv[0], sol.eigenvalues[k] * sol.eigenvectors[k][0]));
        }
        assert!(sol.eigenvalues[0].re < sol.eigenvalues[1].re);
    }
}
