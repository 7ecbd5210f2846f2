//! Gauss–Legendre nodes and normalized Hermite functions.

use std::f64::consts::PI;

use faer::Mat;

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// `k`-point rule on `[-1, 1]`, nodes ascending.
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "empty quadrature rule");
        let mut nodes = vec![0.0; k];
        let mut weights = vec![0.0; k];
        let kf = k as f64;
        for i in 0..k.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (kf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(k, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(k, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[k - 1 - i] = x;
            weights[i] = w;
            weights[k - 1 - i] = w;
        }
        if k % 2 == 1 {
            nodes[k / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// The rule mapped to `[-half, half]`.
    pub fn scaled(k: usize, half: f64) -> Self {
        let mut g = Self::new(k);
        g.nodes.iter_mut().for_each(|x| *x *= half);
        g.weights.iter_mut().for_each(|w| *w *= half);
        g
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(k: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if k == 0 {
        return (1.0, 0.0);
    }
    (p1, k as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Values and derivatives of `psi_0 .. psi_{n-1}` at `xs`, one row per function.
pub fn hermite_functions(n: usize, xs: &[f64]) -> (Mat<f64>, Mat<f64>) {
    let k = xs.len();
    let mut psi = Mat::<f64>::zeros(n + 1, k);
    let c0 = PI.powf(-0.25);
    for (q, &x) in xs.iter().enumerate() {
        psi[(0, q)] = c0 * (-0.5 * x * x).exp();
        psi[(1, q)] = 2f64.sqrt() * x * psi[(0, q)];
        for j in 2..=n {
            let jf = j as f64;
            psi[(j, q)] = (2.0 / jf).sqrt() * x * psi[(j - 1, q)] - ((jf - 1.0) / jf).sqrt() * psi[(j - 2, q)];
        }
    }
    let dpsi = Mat::<f64>::from_fn(n, k, |j, q| {
        let down = if j > 0 { (j as f64 / 2.0).sqrt() * psi[(j - 1, q)] } else { 0.0 };
        down - ((j as f64 + 1.0) / 2.0).sqrt() * psi[(j + 1, q)]
    });
    let vals = Mat::<f64>::from_fn(n, k, |j, q| psi[(j, q)]);
    (vals, dpsi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_exact_for_polynomials() {
        let g = GaussLegendre::new(7);
        for p in 0..14 {
            let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
            assert!((g.integrate(|x| x.powi(p)) - exact).abs() < 1e-14, "degree {p}");
        }
        let big = GaussLegendre::new(1400);
        assert!((big.weights.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        assert!(big.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn hermite_functions_orthonormal() {
        let g = GaussLegendre::scaled(400, 20.0);
        let (psi, dpsi) = hermite_functions(30, &g.nodes);
        for i in 0..30 {
            for j in 0..30 {
                let s: f64 = (0..g.nodes.len()).map(|q| g.weights[q] * psi[(i, q)] * psi[(j, q)]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-12);
            }
        }
        // -psi'' + x^2 psi = (2n+1) psi, so <psi', psi'> + <x psi, x psi> = 2n+1
        for n in 0..30 {
            let s: f64 = (0..g.nodes.len())
                .map(|q| g.weights[q] * (dpsi[(n, q)].powi(2) + (g.nodes[q] * psi[(n, q)]).powi(2)))
                .sum();
            assert!((s - (2 * n + 1) as f64).abs() < 1e-10);
        }
    }
}
