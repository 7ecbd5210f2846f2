//! Completeness, operator reconstructions and the numerical `C` matrix from
//! the retained eigenvectors.
//!
//! In the graded basis the bilinear pairing `int f g dx` is `v^T P G w`.
//! With normalized states `(phi_n, phi_n) = s_n = +-1`:
//! - identity `sum_n s_n u_n u_n^T P G`
//! - parity `sum_n s_n u_n u_n^T G`
//! - Hamiltonian `sum_n s_n E_n u_n u_n^T P G`
//! - Green function `sum_n s_n / E_n u_n u_n^T P G`
//! - `C` `sum_n u_n u_n^T P G`

use faer::linalg::matmul::matmul;
use faer::linalg::solvers::Solve;
use faer::{Accum, Mat, Par};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::quadrature::{hermite_functions, GaussLegendre};
use super::{SpectralError, SpectrumResult};

struct Retained {
    /// Columns are the PT-normalized vectors.
    u: Mat<f64>,
    signs: Vec<f64>,
    energies: Vec<f64>,
    /// Graded metric `P G`.
    metric: Mat<f64>,
}

fn retained(result: &SpectrumResult, m: usize) -> Result<Retained, SpectralError> {
    let avail = result.retained();
    if m > avail {
        return Err(SpectralError::NotRetained { n: avail });
    }
    let n = result.basis_size;
    let lv = &result.levels[..m];
    let u = Mat::from_fn(n, m, |i, k| lv[k].vector.as_ref().expect("retained levels carry vectors")[i]);
    let signs = lv.iter().map(|l| l.pt.map_or(1.0, |p| p.sign as f64)).collect();
    let energies = lv.iter().map(|l| l.energy.re).collect();
    let g = &result.matrices.gram;
    let metric = Mat::from_fn(n, n, |j, k| if j % 2 == 0 { g[(j, k)] } else { -g[(j, k)] });
    Ok(Retained { u, signs, energies, metric })
}

fn mul(a: &Mat<f64>, b: &Mat<f64>) -> Mat<f64> {
    let mut out = Mat::<f64>::zeros(a.nrows(), b.ncols());
    matmul(out.as_mut(), Accum::Replace, a.as_ref(), b.as_ref(), 1.0, Par::Seq);
    out
}

impl Retained {
    /// `sum_n w_n u_n u_n^T right`.
    fn outer(&self, weights: impl Fn(usize) -> f64, right: &Mat<f64>) -> Mat<f64> {
        let m = self.u.ncols();
        let left = Mat::from_fn(self.u.nrows(), m, |i, k| weights(k) * self.u[(i, k)]);
        let ut = self.u.transpose().to_owned();
        mul(&left, &mul(&ut, right))
    }

    /// Unit-length copies of the retained vectors.
    fn probes(&self) -> Mat<f64> {
        let (n, m) = (self.u.nrows(), self.u.ncols());
        let norms: Vec<f64> = (0..m).map(|k| (0..n).map(|i| self.u[(i, k)].powi(2)).sum::<f64>().sqrt()).collect();
        Mat::from_fn(n, m, |i, k| self.u[(i, k)] / norms[k])
    }
}

/// `max_k |X t_k - target_k|` over probe columns.
fn column_residual(x: &Mat<f64>, t: &Mat<f64>, target: &Mat<f64>) -> f64 {
    let xt = mul(x, t);
    (0..t.ncols())
        .map(|k| (0..t.nrows()).map(|i| (xt[(i, k)] - target[(i, k)]).powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

/// Coefficients `f_k = int chi_k(y) f(y) dy` of a function of the path parameter.
pub fn project_function(result: &SpectrumResult, f: impl Fn(f64) -> f64) -> Vec<Complex64> {
    let n = result.basis_size;
    let s = result.matrices.contour.scale;
    let half = s * ((2.0 * n as f64 + 1.0).sqrt() + 12.0);
    let rule = GaussLegendre::scaled(3 * n + 200, half);
    let ts: Vec<f64> = rule.nodes.iter().map(|y| y / s).collect();
    let (psi, _) = hermite_functions(n, &ts);
    (0..n)
        .map(|k| {
            let v: f64 = (0..ts.len()).map(|q| rule.weights[q] * psi[(k, q)] * f(rule.nodes[q])).sum();
            Complex64::new(v / s.sqrt(), 0.0)
        })
        .collect()
}

fn i_pow(k: usize) -> Complex64 {
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)][k % 4]
}

/// Sup over `grid` (path parameter) of `|sum_{n<m} s_n phi_n (phi_n, f) - f|`,
/// with `f` given by ungraded basis coefficients.
pub fn completeness_residual(
    result: &SpectrumResult,
    coeffs: &[Complex64],
    m: usize,
    grid: &[f64],
) -> Result<f64, SpectralError> {
    let r = retained(result, m)?;
    let n = result.basis_size;
    let graded: Vec<Complex64> = coeffs.iter().enumerate().map(|(k, c)| c * i_pow(k).conj()).collect();
    let re = Mat::from_fn(n, 1, |i, _| graded[i].re);
    let im = Mat::from_fn(n, 1, |i, _| graded[i].im);
    let proj = r.outer(|k| r.signs[k], &r.metric);
    let (pre, pim) = (mul(&proj, &re), mul(&proj, &im));
    let resid: Vec<Complex64> = (0..n)
        .map(|k| i_pow(k) * Complex64::new(pre[(k, 0)] - re[(k, 0)], pim[(k, 0)] - im[(k, 0)]))
        .collect();
    let s = result.matrices.contour.scale;
    let ts: Vec<f64> = grid.iter().map(|y| y / s).collect();
    let (psi, _) = hermite_functions(n, &ts);
    Ok((0..grid.len())
        .map(|q| (0..n).map(|k| resid[k] * psi[(k, q)]).sum::<Complex64>().norm() / s.sqrt())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub levels: usize,
    /// `max |(P_M^2 - 1) t|` over unit retained vectors `t`.
    pub parity_residual: f64,
    /// `max |(H_M - H) t| / max(1, E)`.
    pub hamiltonian_residual: f64,
    pub green_residual: f64,
    /// Same as `green_residual` with the factors swapped.
    pub green_left_residual: f64,
}

pub fn reconstruct_operators(result: &SpectrumResult, m: usize) -> Result<Reconstruction, SpectralError> {
    let r = retained(result, m)?;
    let t = r.probes();
    let parity = r.outer(|k| r.signs[k], &result.matrices.gram);
    let ham = r.outer(|k| r.signs[k] * r.energies[k], &r.metric);
    let green = r.outer(|k| r.signs[k] / r.energies[k], &r.metric);

    let exact: Mat<f64> = result.matrices.gram.partial_piv_lu().solve(&result.matrices.h);
    let ht = mul(&ham, &t);
    let et = mul(&exact, &t);
    let hamiltonian_residual = (0..m)
        .map(|k| {
            let d: f64 = (0..t.nrows()).map(|i| (ht[(i, k)] - et[(i, k)]).powi(2)).sum::<f64>().sqrt();
            d / r.energies[k].abs().max(1.0)
        })
        .fold(0.0, f64::max);

    Ok(Reconstruction {
        levels: m,
        parity_residual: column_residual(&mul(&parity, &parity), &t, &t),
        hamiltonian_residual,
        green_residual: column_residual(&mul(&ham, &green), &t, &t),
        green_left_residual: column_residual(&mul(&green, &ham), &t, &t),
    })
}

#[derive(Debug, Clone)]
pub struct CMatrixReport {
    pub levels: usize,
    /// Graded `sum_n u_n u_n^T P G`.
    pub matrix: Mat<f64>,
    pub c_squared_residual: f64,
    pub commutator_residual: f64,
    /// Smallest `<v|v>_CPT / |a|^2` over the random draws `v = sum a_n u_n`.
    pub min_cpt_product: f64,
    /// Completeness of `sum_n phi_n (CPT phi_n)` on the retained span.
    pub cpt_completeness_residual: f64,
    /// `max |C_jk - P_jk|` over the leading `levels x levels` block.
    pub parity_deviation: f64,
}

pub fn numeric_c_matrix(result: &SpectrumResult, m: usize, samples: usize, seed: u64) -> Result<CMatrixReport, SpectralError> {
    let r = retained(result, m)?;
    let t = r.probes();
    let c = r.outer(|_| 1.0, &r.metric);
    let ham = r.outer(|k| r.signs[k] * r.energies[k], &r.metric);
    let ident = r.outer(|k| r.signs[k], &r.metric);

    let ch = mul(&c, &ham);
    let hc = mul(&ham, &c);
    let commutator_residual = column_residual(&(&ch - &hc), &t, &Mat::zeros(t.nrows(), t.ncols()))
        / r.energies.iter().fold(1.0f64, |a, e| a.max(e.abs()));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_cpt = f64::INFINITY;
    for _ in 0..samples {
        let a: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a2: f64 = a.iter().map(|x| x * x).sum();
        let av = Mat::from_fn(m, 1, |k, _| a[k]);
        let v = mul(&r.u, &av);
        let cv = mul(&c, &v);
        let gv = mul(&r.metric, &v);
        let prod: f64 = (0..v.nrows()).map(|i| cv[(i, 0)] * gv[(i, 0)]).sum();
        min_cpt = min_cpt.min(prod / a2);
    }

    let parity_deviation = (0..m)
        .flat_map(|j| (0..m).map(move |k| (j, k)))
        .map(|(j, k)| {
            let p = if j != k { 0.0 } else if j % 2 == 0 { 1.0 } else { -1.0 };
            (c[(j, k)] - p).abs()
        })
        .fold(0.0, f64::max);

    Ok(CMatrixReport {
        levels: m,
        c_squared_residual: column_residual(&mul(&c, &c), &t, &t),
        commutator_residual,
        min_cpt_product: if samples == 0 { f64::NAN } else { min_cpt },
        cpt_completeness_residual: column_residual(&ident, &t, &t),
        parity_deviation,
        matrix: c,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{diagonalize, HamiltonianFamily};
    use super::*;

    #[test]
    fn harmonic_reconstructions_exact() {
        let r = diagonalize(HamiltonianFamily::Epsilon { eps: 0.0 }, 80).unwrap();
        let rec = reconstruct_operators(&r, 30).unwrap();
        assert!(rec.parity_residual < 1e-10);
        assert!(rec.hamiltonian_residual < 1e-10);
        assert!(rec.green_residual < 1e-10 && rec.green_left_residual < 1e-10);
        let c = numeric_c_matrix(&r, 30, 50, 7).unwrap();
        assert!(c.parity_deviation < 1e-10);
        assert!(c.min_cpt_product > 0.0);
    }

    #[test]
    fn harmonic_gaussian_completeness() {
        let r = diagonalize(HamiltonianFamily::Epsilon { eps: 0.0 }, 120).unwrap();
        let f = project_function(&r, |y| (-(y - 0.5) * (y - 0.5)).exp());
        let grid: Vec<f64> = (0..=80).map(|i| -8.0 + 0.2 * i as f64).collect();
        assert!(completeness_residual(&r, &f, 60, &grid).unwrap() < 1e-6);
    }

    #[test]
    fn eigenstate_projects_onto_itself() {
        let r = diagonalize(HamiltonianFamily::Epsilon { eps: 1.0 }, 100).unwrap();
        let c3 = r.coefficients(3).unwrap();
        let grid: Vec<f64> = (0..=60).map(|i| -6.0 + 0.2 * i as f64).collect();
        let scale: f64 = c3.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for m in [4, 8, 12] {
            assert!(completeness_residual(&r, &c3, m, &grid).unwrap() < 1e-10 * scale.max(1.0));
        }
    }

    #[test]
    fn cpt_product_positive() {
        let r = diagonalize(HamiltonianFamily::Epsilon { eps: 1.0 }, 100).unwrap();
        let c = numeric_c_matrix(&r, 12, 100, 3).unwrap();
        assert!(c.min_cpt_product > 0.0);
    }
}
