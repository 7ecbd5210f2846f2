//! Truncated oscillator-basis spectra of non-Hermitian PT-symmetric Hamiltonians.

pub mod hamiltonian;
pub mod matching;
pub mod quadrature;
pub mod reconstruct;
pub mod zeta;

use faer::linalg::solvers::Solve;
use faer::Mat;
use num_complex::Complex64;
use thiserror::Error;

pub use hamiltonian::{build_matrix, build_matrix_on, Contour, GradedMatrices, HamiltonianFamily};
pub use matching::{kernel_consistency, perturbative_match, KernelConsistency, PerturbativeFit};
pub use reconstruct::{completeness_residual, numeric_c_matrix, reconstruct_operators, CMatrixReport, Reconstruction};
pub use zeta::{hurwitz_zeta, zeta_numeric, ZetaEstimate};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("eps = {eps} lies outside (-1, 2), where the integration path is not valid")]
    ContourValidity { eps: f64 },
    #[error("quartic coupling must be positive, got {g}")]
    InvalidCoupling { g: f64 },
    #[error("oscillator mass must be positive, got {m}")]
    InvalidMass { m: f64 },
    #[error("basis size {n} is below the minimum of 4")]
    BasisTooSmall { n: usize },
    #[error("eigenvalue iteration failed for a {size}x{size} matrix: {reason}")]
    Eigen { size: usize, reason: String },
    #[error("level {n} has complex energy {energy}")]
    BrokenLevel { n: usize, energy: Complex64 },
    #[error("level {n} is not among the converged levels")]
    NotRetained { n: usize },
    #[error("spectral zeta needs eps > 0, got {eps}")]
    ZetaDomain { eps: f64 },
    #[error("{0}")]
    Fit(String),
}

/// Default acceptance threshold for `|E(N) - E(N/2)| / max(1, |E|)`.
pub const RETENTION_TOL: f64 = 1e-6;
/// `|Im E| < REALITY_TOL * max(1, |E|)` counts as real.
pub const REALITY_TOL: f64 = 1e-8;
/// PT norms below this magnitude mark a state close to the broken phase.
pub const NEAR_BROKEN: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtNorm {
    pub sign: i8,
    /// `|u^T P G u| / |u|^2` before normalization.
    pub magnitude: f64,
    pub near_broken: bool,
}

impl PtNorm {
    pub fn deviation(&self) -> f64 {
        (1.0 - self.magnitude).abs()
    }
}

#[derive(Debug, Clone)]
pub struct Level {
    pub energy: Complex64,
    pub real: bool,
    /// Distance to the closest eigenvalue of the half-size problem.
    pub convergence: f64,
    pub converged: bool,
    pub pt: Option<PtNorm>,
    /// Graded real eigenvector scaled to `|u^T P G u| = 1`; real levels only.
    pub vector: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub family: HamiltonianFamily,
    pub basis_size: usize,
    pub matrices: GradedMatrices,
    /// Sorted by real part.
    pub levels: Vec<Level>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub retention_tol: f64,
    pub contour: Option<Contour>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { retention_tol: RETENTION_TOL, contour: None }
    }
}

struct RawEigen {
    value: Complex64,
    vector: Option<Vec<f64>>,
}

fn is_real(z: Complex64) -> bool {
    z.im.abs() < REALITY_TOL * z.norm().max(1.0)
}

fn eigensolve(m: &GradedMatrices, want_vectors: bool) -> Result<Vec<RawEigen>, SpectralError> {
    let n = m.size();
    let fail = |reason: String| SpectralError::Eigen { size: n, reason };
    let lu = m.gram.partial_piv_lu();
    let a: Mat<f64> = lu.solve(&m.h);
    if (0..n).any(|i| (0..n).any(|j| !a[(i, j)].is_finite())) {
        return Err(fail("singular gram matrix".into()));
    }
    if !want_vectors {
        let vals = a.eigenvalues().map_err(|e| fail(format!("{e:?}")))?;
        return Ok(vals.into_iter().map(|value| RawEigen { value, vector: None }).collect());
    }
    let evd = a.eigen().map_err(|e| fail(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    Ok((0..n)
        .map(|k| {
            let value = s[k];
            let vector = is_real(value).then(|| {
                let re: Vec<f64> = (0..n).map(|i| u[(i, k)].re).collect();
                let im: Vec<f64> = (0..n).map(|i| u[(i, k)].im).collect();
                let nr: f64 = re.iter().map(|v| v * v).sum();
                let ni: f64 = im.iter().map(|v| v * v).sum();
                if nr >= ni { re } else { im }
            });
            RawEigen { value, vector }
        })
        .collect())
}

/// `u^T P G u` with `P = diag((-1)^k)`.
pub fn pt_product(gram: &Mat<f64>, u: &[f64], v: &[f64]) -> f64 {
    let n = u.len();
    let mut acc = 0.0;
    for j in 0..n {
        let row: f64 = (0..n).map(|k| gram[(j, k)] * v[k]).sum();
        acc += if j % 2 == 0 { u[j] * row } else { -u[j] * row };
    }
    acc
}

/// Diagonalizes at `n` and `n/2` and keeps the levels that agree.
pub fn diagonalize(family: HamiltonianFamily, n: usize) -> Result<SpectrumResult, SpectralError> {
    diagonalize_with(family, n, SolveOptions::default())
}

pub fn diagonalize_with(family: HamiltonianFamily, n: usize, opts: SolveOptions) -> Result<SpectrumResult, SpectralError> {
    let build = |size| match opts.contour {
        Some(c) => build_matrix_on(family, size, c),
        None => build_matrix(family, size),
    };
    let matrices = build(n)?;
    let half = build((n / 2).max(4))?;
    let coarse: Vec<Complex64> = eigensolve(&half, false)?.into_iter().map(|e| e.value).collect();
    let mut raw = eigensolve(&matrices, true)?;
    raw.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));

    let levels = raw
        .into_iter()
        .map(|e| {
            let convergence = coarse.iter().map(|z| (z - e.value).norm()).fold(f64::INFINITY, f64::min);
            let real = is_real(e.value);
            let converged = convergence < opts.retention_tol * e.value.norm().max(1.0);
            let (pt, vector) = match e.vector {
                Some(mut u) => {
                    let norm2: f64 = u.iter().map(|v| v * v).sum();
                    let nu = pt_product(&matrices.gram, &u, &u);
                    let magnitude = nu.abs() / norm2;
                    let scale = nu.abs().sqrt();
                    let lead = u.iter().copied().fold(0.0f64, |a, v| if v.abs() > a.abs() { v } else { a });
                    let flip = if lead < 0.0 { -1.0 } else { 1.0 };
                    u.iter_mut().for_each(|v| *v *= flip / scale);
                    let sign = if nu >= 0.0 { 1 } else { -1 };
                    (Some(PtNorm { sign, magnitude, near_broken: magnitude < NEAR_BROKEN }), Some(u))
                }
                None => (None, None),
            };
            Level { energy: e.value, real, convergence, converged, pt, vector }
        })
        .collect();
    Ok(SpectrumResult { family, basis_size: n, matrices, levels })
}

impl SpectrumResult {
    /// Number of leading levels that are real and converged.
    pub fn retained(&self) -> usize {
        self.levels.iter().take_while(|l| l.real && l.converged && l.vector.is_some()).count()
    }

    /// Real parts of the retained levels.
    pub fn retained_energies(&self) -> Vec<f64> {
        self.levels[..self.retained()].iter().map(|l| l.energy.re).collect()
    }

    pub fn converged_levels(&self) -> impl Iterator<Item = &Level> {
        self.levels.iter().filter(|l| l.converged)
    }

    pub fn reality_flags(&self) -> Vec<bool> {
        self.levels.iter().map(|l| l.real).collect()
    }

    pub fn level(&self, n: usize) -> Result<&Level, SpectralError> {
        let l = self.levels.get(n).ok_or(SpectralError::NotRetained { n })?;
        if !l.converged {
            return Err(SpectralError::NotRetained { n });
        }
        Ok(l)
    }

    /// Ungraded oscillator-basis coefficients `c_k = i^k u_k`, fixed so that
    /// `PT phi = phi`.
    pub fn coefficients(&self, n: usize) -> Result<Vec<Complex64>, SpectralError> {
        let l = self.level(n)?;
        let u = l.vector.as_ref().ok_or(SpectralError::BrokenLevel { n, energy: l.energy })?;
        Ok(u.iter()
            .enumerate()
            .map(|(k, &v)| match k % 4 {
                0 => Complex64::new(v, 0.0),
                1 => Complex64::new(0.0, v),
                2 => Complex64::new(-v, 0.0),
                _ => Complex64::new(0.0, -v),
            })
            .collect())
    }

    /// Converged non-real levels whose conjugate partner is missing.
    pub fn unpaired_complex(&self, tol: f64) -> Vec<Complex64> {
        let complex: Vec<Complex64> = self.converged_levels().filter(|l| !l.real).map(|l| l.energy).collect();
        complex
            .iter()
            .filter(|z| !complex.iter().any(|w| (w.conj() - **z).norm() < tol * z.norm().max(1.0)))
            .copied()
            .collect()
    }
}

pub fn pt_norm(result: &SpectrumResult, n: usize) -> Result<PtNorm, SpectralError> {
    let l = result.level(n)?;
    if !l.real {
        return Err(SpectralError::BrokenLevel { n, energy: l.energy });
    }
    l.pt.ok_or(SpectralError::BrokenLevel { n, energy: l.energy })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_levels_and_norms() {
        let r = diagonalize(HamiltonianFamily::Epsilon { eps: 0.0 }, 60).unwrap();
        for n in 0..=20 {
            assert!((r.levels[n].energy.re - (2 * n + 1) as f64).abs() < 1e-8);
            let p = pt_norm(&r, n).unwrap();
            assert_eq!(p.sign, if n % 2 == 0 { 1 } else { -1 });
            assert!(p.deviation() < 1e-10);
        }
    }

    #[test]
    fn cubic_ground_state() {
        let r = diagonalize(HamiltonianFamily::Epsilon { eps: 1.0 }, 100).unwrap();
        let e = r.retained_energies();
        for (got, want) in e.iter().zip([1.15626707, 4.10922875, 7.56227385, 11.31442182, 15.29155375]) {
            assert!((got - want).abs() < 1e-7, "{got} vs {want}");
        }
        assert!(r.retained() > 10);
    }

    #[test]
    fn coefficients_are_pt_symmetric() {
        let r = diagonalize(HamiltonianFamily::Epsilon { eps: 0.5 }, 60).unwrap();
        let c = r.coefficients(2).unwrap();
        for (k, z) in c.iter().enumerate() {
            // (PT c)_k = (-1)^k conj(c_k)
            let pt = z.conj() * if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((pt - z).norm() < 1e-14);
        }
    }

    #[test]
    fn negative_eps_broken_levels_pair_up() {
        let r = diagonalize(HamiltonianFamily::Epsilon { eps: -0.7 }, 120).unwrap();
        assert!(r.unpaired_complex(1e-6).is_empty());
        assert!(pt_norm(&r, 0).is_ok());
    }
}
