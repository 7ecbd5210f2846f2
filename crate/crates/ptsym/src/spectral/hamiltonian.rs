//! Hamiltonian families and their parity-graded matrices.
//!
//! Every family is represented by a real pencil `(h, gram)` obtained from the
//! complex symmetric oscillator-basis matrices by `D^{-1} M D`, `D = diag(i^k)`.
//! Eigenvectors `u` of `h u = E gram u` then map back as `c_k = i^k u_k`.

use std::fmt;

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, Par};
use num_complex::Complex64;
use serde::Serialize;

use super::quadrature::{hermite_functions, GaussLegendre};
use super::SpectralError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum HamiltonianFamily {
    /// `p^2 + x^2 (i x)^eps`
    Epsilon { eps: f64 },
    /// `p^2/2 + x^2/2 + i eps x^3`
    Cubic { eps: f64 },
    /// `p^2/2 + m^2 x^2/2 + g x^4/4`
    QuarticPlus { m: f64, g: f64 },
}

impl HamiltonianFamily {
    pub fn validate(&self) -> Result<(), SpectralError> {
        match *self {
            HamiltonianFamily::Epsilon { eps } if !(eps > -1.0 && eps < 2.0) => {
                Err(SpectralError::ContourValidity { eps })
            }
            HamiltonianFamily::Cubic { eps } if !eps.is_finite() => Err(SpectralError::ContourValidity { eps }),
            HamiltonianFamily::QuarticPlus { g, .. } if !(g > 0.0) => Err(SpectralError::InvalidCoupling { g }),
            HamiltonianFamily::QuarticPlus { m, .. } if !(m > 0.0) => Err(SpectralError::InvalidMass { m }),
            _ => Ok(()),
        }
    }

    /// The deformation parameter, or the coupling for the quartic family.
    pub fn parameter(&self) -> f64 {
        match *self {
            HamiltonianFamily::Epsilon { eps } | HamiltonianFamily::Cubic { eps } => eps,
            HamiltonianFamily::QuarticPlus { g, .. } => g,
        }
    }

    pub fn with_parameter(&self, v: f64) -> Self {
        match *self {
            HamiltonianFamily::Epsilon { .. } => HamiltonianFamily::Epsilon { eps: v },
            HamiltonianFamily::Cubic { .. } => HamiltonianFamily::Cubic { eps: v },
            HamiltonianFamily::QuarticPlus { m, .. } => HamiltonianFamily::QuarticPlus { m, g: v },
        }
    }
}

impl fmt::Display for HamiltonianFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HamiltonianFamily::Epsilon { eps } => write!(f, "p^2 + x^2 (ix)^{eps}"),
            HamiltonianFamily::Cubic { eps } => write!(f, "p^2/2 + x^2/2 + i {eps} x^3"),
            HamiltonianFamily::QuarticPlus { m, g } => write!(f, "p^2/2 + {m}^2 x^2/2 + {g} x^4/4"),
        }
    }
}

/// Integration path `x(y) = cos(t) y - i (sin(t) sqrt(y^2 + offset^2) + shift)`
/// and the length scale of the oscillator basis along `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Contour {
    pub angle: f64,
    pub offset: f64,
    pub shift: f64,
    pub scale: f64,
}

impl Contour {
    pub const REAL_AXIS: Contour = Contour { angle: 0.0, offset: 1.0, shift: 0.0, scale: 1.0 };

    /// Path through the centres of the Stokes wedges for `eps > 0`; for
    /// `eps < 0` a horizontal line below the branch point.
    pub fn for_epsilon(eps: f64) -> Self {
        if eps > 0.0 {
            Contour { angle: std::f64::consts::PI * eps / (2.0 * (4.0 + eps)), offset: 4.0, shift: 0.0, scale: 0.5 }
        } else if eps < 0.0 {
            Contour { shift: 1.0, ..Contour::REAL_AXIS }
        } else {
            Contour::REAL_AXIS
        }
    }

    pub fn point(&self, y: f64) -> (Complex64, Complex64) {
        let (s, c) = self.angle.sin_cos();
        let r = (y * y + self.offset * self.offset).sqrt();
        (Complex64::new(c * y, -s * r - self.shift), Complex64::new(c, -s * y / r))
    }
}

/// Real pencil `(h, gram)` in the graded basis.
#[derive(Debug, Clone)]
pub struct GradedMatrices {
    pub family: HamiltonianFamily,
    pub contour: Contour,
    pub h: Mat<f64>,
    pub gram: Mat<f64>,
    /// Largest imaginary part discarded by the grading, relative to the largest entry.
    pub grading_residual: f64,
}

impl GradedMatrices {
    pub fn size(&self) -> usize {
        self.h.nrows()
    }

    /// `max |(P B P - B^T)_{jk}|` over both matrices.
    pub fn pt_transpose_residual(&self) -> f64 {
        let n = self.size();
        let mut worst = 0.0f64;
        for m in [&self.h, &self.gram] {
            for j in 0..n {
                for k in 0..n {
                    let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
                    worst = worst.max((sign * m[(j, k)] - m[(k, j)]).abs());
                }
            }
        }
        worst
    }

    /// The complex symmetric Hamiltonian in the ungraded oscillator basis.
    pub fn complex_hamiltonian(&self) -> Vec<Vec<Complex64>> {
        ungrade(&self.h)
    }

    pub fn complex_gram(&self) -> Vec<Vec<Complex64>> {
        ungrade(&self.gram)
    }
}

fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn ungrade(m: &Mat<f64>) -> Vec<Vec<Complex64>> {
    let n = m.nrows();
    (0..n).map(|j| (0..n).map(|k| i_pow(j as i64 - k as i64) * m[(j, k)]).collect()).collect()
}

/// `Re(i^{k-j} (re + i im)_{jk})`, with the size of the dropped imaginary part.
fn grade(re: &Mat<f64>, im: &Mat<f64>) -> (Mat<f64>, f64) {
    let n = re.nrows();
    let mut scale = 0.0f64;
    let mut lost = 0.0f64;
    let out = Mat::from_fn(n, n, |j, k| {
        let z = i_pow(k as i64 - j as i64) * Complex64::new(re[(j, k)], im[(j, k)]);
        scale = scale.max(z.norm());
        lost = lost.max(z.im.abs());
        z.re
    });
    (out, if scale > 0.0 { lost / scale } else { 0.0 })
}

pub fn build_matrix(family: HamiltonianFamily, n: usize) -> Result<GradedMatrices, SpectralError> {
    let contour = match family {
        HamiltonianFamily::Epsilon { eps } => Contour::for_epsilon(eps),
        _ => Contour::REAL_AXIS,
    };
    build_matrix_on(family, n, contour)
}

/// As [`build_matrix`] with an explicit path; only the continuum family uses it.
pub fn build_matrix_on(family: HamiltonianFamily, n: usize, contour: Contour) -> Result<GradedMatrices, SpectralError> {
    family.validate()?;
    if n < 4 {
        return Err(SpectralError::BasisTooSmall { n });
    }
    let (re, im, gram, gram_lost) = match family {
        HamiltonianFamily::Epsilon { eps } => continuum_matrices(eps, n, &contour),
        HamiltonianFamily::Cubic { eps } => {
            let x3 = ladder_power(n, 1.0, 3);
            let re = Mat::from_fn(n, n, |j, k| if j == k { j as f64 + 0.5 } else { 0.0 });
            let im = Mat::from_fn(n, n, |j, k| eps * x3[(j, k)]);
            (re, im, Mat::identity(n, n), 0.0)
        }
        HamiltonianFamily::QuarticPlus { m, g } => {
            let x4 = ladder_power(n, m, 4);
            let re = Mat::from_fn(n, n, |j, k| if j == k { m * (j as f64 + 0.5) } else { 0.0 } + 0.25 * g * x4[(j, k)]);
            (re, Mat::zeros(n, n), Mat::identity(n, n), 0.0)
        }
    };
    let (h, lost) = grade(&re, &im);
    Ok(GradedMatrices { family, contour, h, gram, grading_residual: lost.max(gram_lost) })
}

/// `x^power` in the oscillator basis of frequency `freq`, exact for the
/// retained block.
pub fn ladder_power(n: usize, freq: f64, power: usize) -> Mat<f64> {
    let big = n + power;
    let x = position_matrix(big, freq);
    let mut acc = Mat::<f64>::identity(big, big);
    for _ in 0..power {
        let mut next = Mat::<f64>::zeros(big, big);
        matmul(next.as_mut(), Accum::Replace, acc.as_ref(), x.as_ref(), 1.0, Par::Seq);
        acc = next;
    }
    Mat::from_fn(n, n, |j, k| acc[(j, k)])
}

/// `<j| x |k>` for frequency `freq`.
pub fn position_matrix(n: usize, freq: f64) -> Mat<f64> {
    let c = (2.0 * freq).sqrt();
    Mat::from_fn(n, n, |j, k| {
        if j + 1 == k {
            (k as f64).sqrt() / c
        } else if k + 1 == j {
            (j as f64).sqrt() / c
        } else {
            0.0
        }
    })
}

/// `<j| d/dx |k>` at unit frequency.
pub fn derivative_matrix(n: usize) -> Mat<f64> {
    Mat::from_fn(n, n, |j, k| {
        if j + 1 == k {
            (k as f64 / 2.0).sqrt()
        } else if k + 1 == j {
            -(j as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    })
}

/// Returns `(Re A, Im A, graded gram, gram grading loss)` with
/// `A = int psi' psi' / x' + int psi psi V x'`.
fn continuum_matrices(eps: f64, n: usize, contour: &Contour) -> (Mat<f64>, Mat<f64>, Mat<f64>, f64) {
    let s = contour.scale;
    let k = 3 * n + 200;
    let half = s * ((2.0 * n as f64 + 1.0).sqrt() + 12.0);
    let rule = GaussLegendre::scaled(k, half);
    let ts: Vec<f64> = rule.nodes.iter().map(|y| y / s).collect();
    let (mut psi, mut dpsi) = hermite_functions(n, &ts);
    let (vs, ds) = (s.sqrt().recip(), (s * s.sqrt()).recip());
    for q in 0..k {
        for j in 0..n {
            psi[(j, q)] *= vs;
            dpsi[(j, q)] *= ds;
        }
    }

    let mut wk = vec![Complex64::default(); k];
    let mut wv = vec![Complex64::default(); k];
    let mut ws = vec![Complex64::default(); k];
    for q in 0..k {
        let (x, dx) = contour.point(rule.nodes[q]);
        let w = rule.weights[q];
        let ix = Complex64::new(0.0, 1.0) * x;
        let v = if eps == 0.0 { x * x } else { x * x * ix.powf(eps) };
        wk[q] = w / dx;
        wv[q] = w * v * dx;
        ws[q] = w * dx;
    }

    let weighted = |rows: &Mat<f64>, wts: &[Complex64], part: fn(&Complex64) -> f64| -> Mat<f64> {
        let scaled = Mat::from_fn(k, n, |q, j| part(&wts[q]) * rows[(j, q)]);
        let mut out = Mat::<f64>::zeros(n, n);
        matmul(out.as_mut(), Accum::Replace, rows.as_ref(), scaled.as_ref(), 1.0, Par::Seq);
        out
    };
    let re_part = |z: &Complex64| z.re;
    let im_part = |z: &Complex64| z.im;

    let mut re = weighted(&dpsi, &wk, re_part);
    re += weighted(&psi, &wv, re_part);
    let mut im = weighted(&dpsi, &wk, im_part);
    im += weighted(&psi, &wv, im_part);
    let (gram, lost) = grade(&weighted(&psi, &ws, re_part), &weighted(&psi, &ws, im_part));
    (re, im, gram, lost)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_limit_is_diagonal() {
        let m = build_matrix(HamiltonianFamily::Epsilon { eps: 0.0 }, 40).unwrap();
        for j in 0..40 {
            for k in 0..40 {
                let expect = if j == k { 2.0 * j as f64 + 1.0 } else { 0.0 };
                assert!((m.h[(j, k)] - expect).abs() < 1e-12, "({j},{k}) = {}", m.h[(j, k)]);
                let g = if j == k { 1.0 } else { 0.0 };
                assert!((m.gram[(j, k)] - g).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn boundary_rejected() {
        assert!(matches!(
            build_matrix(HamiltonianFamily::Epsilon { eps: 2.0 }, 10),
            Err(SpectralError::ContourValidity { .. })
        ));
        assert!(matches!(
            build_matrix(HamiltonianFamily::QuarticPlus { m: 1.0, g: 0.0 }, 10),
            Err(SpectralError::InvalidCoupling { .. })
        ));
        assert!(matches!(build_matrix(HamiltonianFamily::Cubic { eps: 0.1 }, 3), Err(SpectralError::BasisTooSmall { .. })));
    }

    #[test]
    fn odd_part_couples_opposite_parity_imaginarily() {
        let m = build_matrix_on(HamiltonianFamily::Epsilon { eps: 1.0 }, 12, Contour::REAL_AXIS).unwrap();
        let h = m.complex_hamiltonian();
        assert!(h[0][1].re.abs() < 1e-12 && h[0][1].im.abs() > 1e-3);
        assert!(h[0][2].im.abs() < 1e-12);
    }

    #[test]
    fn graded_form_is_real_and_pt_transposed() {
        for fam in [
            HamiltonianFamily::Epsilon { eps: 1.0 },
            HamiltonianFamily::Epsilon { eps: 0.5 },
            HamiltonianFamily::Cubic { eps: 0.2 },
            HamiltonianFamily::QuarticPlus { m: 1.0, g: 0.3 },
        ] {
            let m = build_matrix(fam, 30).unwrap();
            assert!(m.grading_residual < 1e-12, "{fam}: {}", m.grading_residual);
            let scale = (0..30).map(|j| m.h[(j, j)].abs()).fold(1.0, f64::max);
            assert!(m.pt_transpose_residual() < 1e-11 * scale, "{fam}");
        }
    }

    #[test]
    fn ladder_cube_entries() {
        let x3 = ladder_power(6, 1.0, 3);
        // <0|x^3|1> = 3 / (2 sqrt 2), <0|x^3|3> = sqrt(6) / (2 sqrt 2)
        assert!((x3[(0, 1)] - 3.0 / 8f64.sqrt()).abs() < 1e-14);
        assert!((x3[(0, 3)] - 6f64.sqrt() / 8f64.sqrt()).abs() < 1e-14);
        let d = derivative_matrix(5);
        assert!((d[(0, 1)] + d[(1, 0)]).abs() < 1e-15);
    }
}
