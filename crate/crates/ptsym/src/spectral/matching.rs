//! Cross-checks of the spectral solver against the exact perturbative results
//! for `p^2/2 + x^2/2 + i eps x^3`.

use faer::linalg::matmul::matmul;
use faer::linalg::solvers::Solve;
use faer::{Accum, Mat, Par};

use super::hamiltonian::{derivative_matrix, position_matrix};
use super::{diagonalize, HamiltonianFamily, SpectralError};
use crate::algebra::DiffOp;
use crate::c_operator::build_c;
use crate::perturbation::ModelId;

/// Symmetric grid: `E(eps) = E(-eps)`, so the odd coefficient is pinned by data
/// on both sides.
pub const MATCH_GRID: [f64; 6] = [-0.04, -0.02, -0.01, 0.01, 0.02, 0.04];

#[derive(Debug, Clone, PartialEq)]
pub struct LevelFit {
    pub level: usize,
    pub linear: f64,
    pub quadratic: f64,
    pub quartic: f64,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbativeFit {
    pub grid: Vec<f64>,
    pub basis: usize,
    pub levels: Vec<LevelFit>,
}

/// Least-squares fit of `E_n - n - 1/2 = a eps + b eps^2 + c eps^4` on the grid.
pub fn perturbative_match(grid: &[f64], basis: usize, levels: usize) -> Result<PerturbativeFit, SpectralError> {
    let spectra = grid
        .iter()
        .map(|&eps| diagonalize(HamiltonianFamily::Cubic { eps }, basis))
        .collect::<Result<Vec<_>, _>>()?;
    let design = Mat::from_fn(grid.len(), 3, |i, j| grid[i].powi([1, 2, 4][j]));
    let mut normal = Mat::<f64>::zeros(3, 3);
    matmul(normal.as_mut(), Accum::Replace, design.transpose(), design.as_ref(), 1.0, Par::Seq);
    let lu = normal.partial_piv_lu();

    let mut fits = Vec::new();
    for n in 0..levels {
        let shift: Vec<f64> = spectra
            .iter()
            .map(|s| s.level(n).map(|l| l.energy.re - n as f64 - 0.5))
            .collect::<Result<_, _>>()?;
        let y = Mat::from_fn(grid.len(), 1, |i, _| shift[i]);
        let mut rhs = Mat::<f64>::zeros(3, 1);
        matmul(rhs.as_mut(), Accum::Replace, design.transpose(), y.as_ref(), 1.0, Par::Seq);
        let c = lu.solve(&rhs);
        let max_residual = (0..grid.len())
            .map(|i| (shift[i] - (0..3).map(|j| design[(i, j)] * c[(j, 0)]).sum::<f64>()).abs())
            .fold(0.0, f64::max);
        fits.push(LevelFit { level: n, linear: c[(0, 0)], quadratic: c[(1, 0)], quartic: c[(2, 0)], max_residual });
    }
    Ok(PerturbativeFit { grid: grid.to_vec(), basis, levels: fits })
}

/// Matrix of a one-dimensional normal-ordered operator in the unit oscillator
/// basis, as `(Re, Im)`.
pub fn operator_matrix(op: &DiffOp, n: usize) -> (Mat<f64>, Mat<f64>) {
    let deg = op.terms().map(|(k, _)| (k.x[0] + k.d[0]) as usize).max().unwrap_or(0);
    let big = n + deg;
    let x = position_matrix(big, 1.0);
    let d = derivative_matrix(big);
    let mut re = Mat::<f64>::zeros(n, n);
    let mut im = Mat::<f64>::zeros(n, n);
    for (key, c) in op.terms() {
        let mut m = Mat::<f64>::identity(big, big);
        for f in std::iter::repeat_n(&x, key.x[0] as usize).chain(std::iter::repeat_n(&d, key.d[0] as usize)) {
            let mut next = Mat::<f64>::zeros(big, big);
            matmul(next.as_mut(), Accum::Replace, m.as_ref(), f.as_ref(), 1.0, Par::Seq);
            m = next;
        }
        let (cr, ci) = c.to_f64_pair();
        for j in 0..n {
            for k in 0..n {
                re[(j, k)] += cr * m[(j, k)];
                im[(j, k)] += ci * m[(j, k)];
            }
        }
    }
    (re, im)
}

/// Graded `(1 + eps L1 + ... + eps^order L_order) P` for the cubic model.
pub fn perturbative_c_matrix(eps: f64, n: usize, order: u32) -> Result<Mat<f64>, SpectralError> {
    let kernel = build_c(ModelId::Ix3, order).map_err(|e| SpectralError::Fit(e.to_string()))?;
    let mut re = Mat::<f64>::identity(n, n);
    let mut im = Mat::<f64>::zeros(n, n);
    let mut power = 1.0;
    for corr in kernel.corrections.iter().skip(1) {
        power *= eps;
        let (r, i) = operator_matrix(corr, n);
        re += power * r;
        im += power * i;
    }
    // graded entry of M P: Re(i^{k-j} M_jk) (-1)^k
    Ok(Mat::from_fn(n, n, |j, k| {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let v = match (k as i64 - j as i64).rem_euclid(4) {
            0 => re[(j, k)],
            1 => -im[(j, k)],
            2 => -re[(j, k)],
            _ => im[(j, k)],
        };
        sign * v
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelConsistency {
    pub eps: Vec<f64>,
    pub deviation: Vec<f64>,
    /// Log-log slope of `deviation` against `eps`.
    pub slope: f64,
    pub block: usize,
    pub order: u32,
}

/// Largest entry of `C_numeric - C_perturbative` on the leading `block x block`
/// corner for each `eps`, and the fitted power of `eps`.
pub fn kernel_consistency(eps: &[f64], basis: usize, block: usize, order: u32) -> Result<KernelConsistency, SpectralError> {
    let mut deviation = Vec::new();
    for &e in eps {
        let res = diagonalize(HamiltonianFamily::Cubic { eps: e }, basis)?;
        let m = res.retained();
        if m < block {
            return Err(SpectralError::NotRetained { n: m });
        }
        let numeric = super::numeric_c_matrix(&res, m, 0, 0)?.matrix;
        let pert = perturbative_c_matrix(e, basis, order)?;
        let d = (0..block)
            .flat_map(|j| (0..block).map(move |k| (j, k)))
            .map(|(j, k)| (numeric[(j, k)] - pert[(j, k)]).abs())
            .fold(0.0, f64::max);
        deviation.push(d);
    }
    let xs: Vec<f64> = eps.iter().map(|e| e.abs().ln()).collect();
    let ys: Vec<f64> = deviation.iter().map(|d| d.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(KernelConsistency { eps: eps.to_vec(), deviation, slope: sxy / sxx, block, order })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_limit_matches() {
        let p = perturbative_c_matrix(0.0, 8, 1).unwrap();
        for j in 0..8 {
            for k in 0..8 {
                let expect = if j != k { 0.0 } else if j % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(p[(j, k)], expect);
            }
        }
    }

    #[test]
    fn derivative_of_ground_state() {
        let d = DiffOp::monomial(1, crate::algebra::GaussRational::from_ratio(1, 1), &[0], &[1]).unwrap();
        let (re, im) = operator_matrix(&d, 4);
        // psi_0' = -psi_1 / sqrt 2
        assert!((re[(1, 0)] + 0.5f64.sqrt()).abs() < 1e-15);
        assert!(im[(1, 0)] == 0.0);
    }

    #[test]
    fn ground_state_second_order() {
        let fit = perturbative_match(&MATCH_GRID, 80, 2).unwrap();
        assert!(fit.levels[0].linear.abs() < 1e-6);
        assert!((fit.levels[0].quadratic - 11.0 / 8.0).abs() < 0.01 * 11.0 / 8.0);
        assert!((fit.levels[1].quadratic - 71.0 / 8.0).abs() < 0.01 * 71.0 / 8.0);
    }
}
