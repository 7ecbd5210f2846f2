//! Numerical spectral zeta function `sum_n 1/E_n`.

use super::{diagonalize_with, HamiltonianFamily, SolveOptions, SpectralError};

/// Levels entering the sum must agree between `N` and `N/2` to this relative accuracy.
pub const ZETA_RETENTION_TOL: f64 = 1e-8;
/// The sum is reported as converged when the tail uncertainty is below this
/// fraction of the value.
pub const ZETA_TAIL_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaEstimate {
    pub eps: f64,
    pub value: f64,
    pub partial_sum: f64,
    pub tail: f64,
    pub tail_error: f64,
    pub levels: usize,
    /// Fitted `E_n ~ A (n + c)^p`.
    pub amplitude: f64,
    pub offset: f64,
    pub exponent: f64,
    pub converged: bool,
}

/// `sum_{k>=0} (k + q)^{-s}` for `s > 1`, `q > 0`, by Euler–Maclaurin.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    assert!(s > 1.0 && q > 0.0, "hurwitz_zeta needs s > 1 and q > 0");
    const B2J: [f64; 7] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0];
    let m = 24usize;
    let mut sum: f64 = (0..m).map(|k| (q + k as f64).powf(-s)).sum();
    let a = q + m as f64;
    sum += a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    let mut rising = s;
    let mut fact = 2.0;
    let mut pow = a.powf(-s - 1.0);
    for (j, b) in B2J.iter().enumerate() {
        sum += b / fact * rising * pow;
        let k = 2.0 * (j as f64 + 1.0);
        rising *= (s + k - 1.0) * (s + k);
        fact *= (k + 1.0) * (k + 2.0);
        pow /= a * a;
    }
    sum
}

#[derive(Debug, Clone, Copy)]
struct PowerFit {
    log_amp: f64,
    offset: f64,
    exponent: f64,
    /// Coefficient of `(n + c)^{-2}` in `ln E`.
    correction: f64,
}

/// Least squares of `ln E = a + p ln(n + c) + d (n + c)^{-2}`, linear in
/// `(a, p, d)` for fixed `c`. Returns the coefficients and the residual.
fn linear_fit(ns: &[f64], lne: &[f64], c: f64) -> ([f64; 3], f64) {
    let rows: Vec<[f64; 3]> = ns.iter().map(|n| [1.0, (n + c).ln(), (n + c).powi(-2)]).collect();
    let mut ata = [[0.0; 3]; 3];
    let mut aty = [0.0; 3];
    for (r, y) in rows.iter().zip(lne) {
        for i in 0..3 {
            aty[i] += r[i] * y;
            for j in 0..3 {
                ata[i][j] += r[i] * r[j];
            }
        }
    }
    let coef = solve3(ata, aty);
    let sse = rows.iter().zip(lne).map(|(r, y)| (y - (0..3).map(|i| r[i] * coef[i]).sum::<f64>()).powi(2)).sum();
    (coef, sse)
}

/// Gaussian elimination with partial pivoting on a 3x3 system.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

fn power_fit(energies: &[f64], from: usize) -> PowerFit {
    let ns: Vec<f64> = (from..energies.len()).map(|n| n as f64).collect();
    let lne: Vec<f64> = energies[from..].iter().map(|e| e.ln()).collect();
    let cost = |c: f64| linear_fit(&ns, &lne, c).1;
    let (mut lo, mut hi) = (-0.95, 4.0);
    let grid = 80;
    let best = (0..=grid)
        .map(|i| lo + (hi - lo) * i as f64 / grid as f64)
        .min_by(|a, b| cost(*a).total_cmp(&cost(*b)))
        .unwrap();
    let step = (hi - lo) / grid as f64;
    lo = (best - step).max(lo);
    hi = (best + step).min(hi);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
    let (mut f1, mut f2) = (cost(x1), cost(x2));
    for _ in 0..200 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = cost(x2);
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    let c = 0.5 * (lo + hi);
    let ([a, p, d], _) = linear_fit(&ns, &lne, c);
    PowerFit { log_amp: a, offset: c, exponent: p, correction: d }
}

/// `sum_{n>=k} 1/E_n` for the fitted law, with `exp(-d/(n+c)^2)` expanded to second order.
fn tail(fit: &PowerFit, k: usize) -> f64 {
    if fit.exponent <= 1.0 {
        return f64::INFINITY;
    }
    let q = k as f64 + fit.offset;
    let d = fit.correction;
    let s = fit.exponent;
    (hurwitz_zeta(s, q) - d * hurwitz_zeta(s + 2.0, q) + 0.5 * d * d * hurwitz_zeta(s + 4.0, q)) * (-fit.log_amp).exp()
}

/// Sum over the converged levels plus a fitted power-law tail. The tail
/// error is the spread between fits over the upper half and upper third.
pub fn zeta_numeric(eps: f64, basis: usize) -> Result<ZetaEstimate, SpectralError> {
    if !(eps > 0.0) {
        return Err(SpectralError::ZetaDomain { eps });
    }
    let opts = SolveOptions { retention_tol: ZETA_RETENTION_TOL, contour: None };
    let res = diagonalize_with(HamiltonianFamily::Epsilon { eps }, basis, opts)?;
    zeta_from_levels(eps, &res.retained_energies())
}

pub fn zeta_from_levels(eps: f64, energies: &[f64]) -> Result<ZetaEstimate, SpectralError> {
    let k = energies.len();
    if k < 12 {
        return Err(SpectralError::Fit(format!("only {k} converged levels, need at least 12")));
    }
    let partial_sum: f64 = energies.iter().map(|e| 1.0 / e).sum();
    let half = power_fit(energies, k / 2);
    let third = power_fit(energies, 2 * k / 3);
    let t = tail(&half, k);
    let tail_error = (t - tail(&third, k)).abs();
    let value = partial_sum + t;
    Ok(ZetaEstimate {
        eps,
        value,
        partial_sum,
        tail: t,
        tail_error,
        levels: k,
        amplitude: half.log_amp.exp(),
        offset: half.offset,
        exponent: half.exponent,
        converged: tail_error.is_finite() && tail_error < ZETA_TAIL_TOL * value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurwitz_reduces_to_riemann() {
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((hurwitz_zeta(2.0, 1.0) - z2).abs() < 1e-14);
        assert!((hurwitz_zeta(2.0, 3.0) - (z2 - 1.0 - 0.25)).abs() < 1e-14);
        // zeta(s, 1/2) = (2^s - 1) zeta(s)
        assert!((hurwitz_zeta(4.0, 0.5) - 15.0 * std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-12);
        assert!((hurwitz_zeta(1.1, 1.0) - 10.584448464950809).abs() < 1e-10);
    }

    #[test]
    fn recovers_exact_power_law_tail() {
        let e: Vec<f64> = (0..40).map(|n| 1.7 * (n as f64 + 0.4).powf(1.25)).collect();
        let z = zeta_from_levels(1.0, &e).unwrap();
        let exact = hurwitz_zeta(1.25, 0.4) / 1.7;
        assert!((z.value - exact).abs() < 1e-9 * exact, "{} vs {exact}", z.value);
        assert!((z.exponent - 1.25).abs() < 1e-8);
    }

    #[test]
    fn rejects_nonpositive_eps() {
        assert!(matches!(zeta_numeric(0.0, 40), Err(SpectralError::ZetaDomain { .. })));
    }
}
