//! Analytic results: the spectral zeta function of `p^2 + x^2 (ix)^eps` and
//! weak-coupling energies of the quartic oscillator.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClosedFormError {
    #[error("eps must be positive, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("coupling must be positive, got {0}")]
    NonPositiveCoupling(f64),
    #[error("binding energies need k >= 2, got {0}")]
    TooFewParticles(u32),
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function on the real line (Lanczos, g = 7), with reflection below 1/2.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        let s = (PI * x).sin();
        if s == 0.0 {
            return f64::INFINITY;
        }
        return PI / (s * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// `eps > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ZetaInput(f64);

impl ZetaInput {
    pub fn new(eps: f64) -> Result<Self, ClosedFormError> {
        if eps > 0.0 {
            Ok(Self(eps))
        } else {
            Err(ClosedFormError::NonPositiveEpsilon(eps))
        }
    }

    pub fn eps(&self) -> f64 {
        self.0
    }
}

/// Which trigonometric denominator enters the prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZetaPrefactor {
    /// `cos(eps pi / (2 eps + 8))`, consistent with the numerical spectrum.
    #[default]
    Consistent,
    /// `cos(eps pi / (4 + 2 eps))`.
    Alternate,
}

/// `sum_n 1/E_n` for `p^2 + x^2 (ix)^eps`. Returns `+inf` once the gamma
/// pole at `eps = 0` is numerically reached.
pub fn zeta_closed(eps: f64) -> Result<f64, ClosedFormError> {
    zeta_closed_with(ZetaInput::new(eps)?, ZetaPrefactor::Consistent)
}

pub fn zeta_closed_with(input: ZetaInput, prefactor: ZetaPrefactor) -> Result<f64, ClosedFormError> {
    let e = input.eps();
    let d = 4.0 + e;
    let denom_angle = match prefactor {
        ZetaPrefactor::Consistent => e * PI / (2.0 * e + 8.0),
        ZetaPrefactor::Alternate => e * PI / (4.0 + 2.0 * e),
    };
    let pre = 1.0 + (3.0 * e * PI / (2.0 * e + 8.0)).cos() * (PI / d).sin() / (denom_angle.cos() * (3.0 * PI / d).sin());
    let num = gamma(1.0 / d) * gamma(2.0 / d) * gamma(e / d);
    let den = d.powf((4.0 + 2.0 * e) / d) * gamma((1.0 + e) / d) * gamma((2.0 + e) / d);
    let v = pre * num / den;
    Ok(if v.is_finite() { v } else { f64::INFINITY })
}

/// Mass and coupling of `p^2/2 + m^2 x^2/2 + g x^4/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnharmonicParams {
    m: f64,
    g: f64,
}

impl AnharmonicParams {
    pub fn new(m: f64, g: f64) -> Result<Self, ClosedFormError> {
        if !(m > 0.0) {
            return Err(ClosedFormError::NonPositiveMass(m));
        }
        if !(g > 0.0) {
            return Err(ClosedFormError::NonPositiveCoupling(g));
        }
        Ok(Self { m, g })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Dimensionless coupling `g / (4 m^3)`.
    pub fn nu(&self) -> f64 {
        self.g / (4.0 * self.m.powi(3))
    }
}

/// Sign of the quartic term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuarticModel {
    /// `+g x^4/4`
    Conventional,
    /// `-g x^4/4` on a PT-symmetric contour, obtained by `nu -> -nu`.
    PtSymmetric,
}

impl QuarticModel {
    fn nu_sign(self) -> f64 {
        match self {
            QuarticModel::Conventional => 1.0,
            QuarticModel::PtSymmetric => -1.0,
        }
    }
}

fn energy_with_nu(m: f64, nu: f64, k: u32) -> f64 {
    let k = k as f64;
    m * (k + 0.5 + 0.75 * (2.0 * k * k + 2.0 * k + 1.0) * nu)
}

/// First-order weak-coupling energy `m [k + 1/2 + 3/4 (2k^2 + 2k + 1) nu]`.
pub fn anharmonic_energy(params: &AnharmonicParams, k: u32) -> f64 {
    energy_with_nu(params.m, params.nu(), k)
}

/// Rayleigh-Schrodinger series `m sum_j c_j(k) nu^j` through `order <= 3`.
pub fn anharmonic_series(params: &AnharmonicParams, k: u32, order: u32) -> f64 {
    let (m, nu) = (params.m, params.nu());
    let k = k as f64;
    let coeffs = [
        k + 0.5,
        0.75 * (2.0 * k * k + 2.0 * k + 1.0),
        -(34.0 * k.powi(3) + 51.0 * k * k + 59.0 * k + 21.0) / 8.0,
        (375.0 * k.powi(4) + 750.0 * k.powi(3) + 1416.0 * k * k + 1041.0 * k + 333.0) / 16.0,
    ];
    m * coeffs.iter().take(order.min(3) as usize + 1).rev().fold(0.0, |acc, c| acc * nu + c)
}

/// `M = E_1 - E_0 = m (1 + 3 nu)` for the chosen sign of the coupling.
pub fn renormalized_mass(params: &AnharmonicParams, model: QuarticModel) -> f64 {
    let nu = model.nu_sign() * params.nu();
    energy_with_nu(params.m, nu, 1) - energy_with_nu(params.m, nu, 0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BindingEnergy {
    pub k: u32,
    /// `B_k = E_k - E_0`.
    pub energy: f64,
    pub mass: f64,
    /// `(B_k - k M) / M` from the first-order energies.
    pub ratio: f64,
    /// Leading term `-+ 3 k (k - 1) nu / 2`.
    pub leading: f64,
}

impl BindingEnergy {
    pub fn is_bound(&self) -> bool {
        self.leading < 0.0
    }
}

pub fn binding_energy(params: &AnharmonicParams, k: u32, model: QuarticModel) -> Result<BindingEnergy, ClosedFormError> {
    if k < 2 {
        return Err(ClosedFormError::TooFewParticles(k));
    }
    let nu = model.nu_sign() * params.nu();
    let energy = energy_with_nu(params.m, nu, k) - energy_with_nu(params.m, nu, 0);
    let mass = renormalized_mass(params, model);
    let kf = k as f64;
    Ok(BindingEnergy {
        k,
        energy,
        mass,
        ratio: (energy - kf * mass) / mass,
        leading: 1.5 * kf * (kf - 1.0) * nu,
    })
}

/// Nonperturbative reference couplings for the PT-symmetric quartic
/// oscillator, reported alongside the first-order results but not computed here.
pub mod thresholds {
    /// The two-particle bound state disappears above this `nu`.
    pub const TWO_PARTICLE_UNBINDS: f64 = 0.0465;
    /// `nu` at which `Delta_2` is largest.
    pub const DELTA2_PEAK_NU: f64 = 0.13;
    pub const DELTA2_PEAK: f64 = 0.427;
    /// `Delta_2` as `nu -> infinity`.
    pub const DELTA2_LIMIT: f64 = 0.28;
    /// Unbinding couplings for `k = 3, 4, 5, 6`.
    pub const K_PARTICLE_UNBINDS: [(u32, f64); 4] = [(3, 0.039), (4, 0.034), (5, 0.030), (6, 0.027)];
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_factorials() {
        let mut f = 1.0;
        for n in 1..=12u32 {
            assert!((gamma(n as f64) / f - 1.0).abs() < 1e-12, "n = {n}");
            f *= n as f64;
        }
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn gamma_reflection() {
        for i in 1..100 {
            let z = i as f64 / 100.0;
            assert!((gamma(z) * gamma(1.0 - z) * (PI * z).sin() - PI).abs() < 1e-10);
        }
    }

    #[test]
    fn zeta_harmonic_limit_diverges() {
        assert!(zeta_closed(1e-4).unwrap() > 1e3);
        assert!(matches!(zeta_closed(0.0), Err(ClosedFormError::NonPositiveEpsilon(_))));
        assert!(zeta_closed(4.0).unwrap().is_finite());
    }

    #[test]
    fn variants_differ() {
        let x = ZetaInput::new(1.0).unwrap();
        let a = zeta_closed_with(x, ZetaPrefactor::Consistent).unwrap();
        let b = zeta_closed_with(x, ZetaPrefactor::Alternate).unwrap();
        assert!((a - 2.835_094_933_971_79).abs() < 1e-12);
        assert!((b / a - 1.0).abs() > 1e-2);
    }

    #[test]
    fn quartic_weak_coupling() {
        let p = AnharmonicParams::new(1.0, 0.04).unwrap();
        assert!((p.nu() - 0.01).abs() < 1e-15);
        assert!((anharmonic_energy(&p, 2) - 2.5975).abs() < 1e-12);
        assert!((renormalized_mass(&p, QuarticModel::Conventional) - 1.03).abs() < 1e-12);
        let free = AnharmonicParams::new(2.0, 1e-300).unwrap();
        assert!((anharmonic_energy(&free, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn series_orders() {
        let p = AnharmonicParams::new(1.0, 0.04).unwrap();
        assert!((anharmonic_series(&p, 2, 1) - anharmonic_energy(&p, 2)).abs() < 1e-15);
        assert!((anharmonic_series(&p, 0, 2) - (0.5 + 0.0075 - 21.0 / 8.0 * 1e-4)).abs() < 1e-15);
        assert!((anharmonic_series(&p, 1, 3) - (1.5 + 0.0375 - 165.0 / 8.0 * 1e-4 + 3915.0 / 16.0 * 1e-6)).abs() < 1e-14);
        let q = AnharmonicParams::new(2.0, 0.32).unwrap();
        assert!((anharmonic_series(&q, 3, 3) - 2.0 * anharmonic_series(&p, 3, 3)).abs() < 1e-14);
    }

    #[test]
    fn binding_signs() {
        let p = AnharmonicParams::new(1.0, 0.04).unwrap();
        let nu = p.nu();
        let pt2 = binding_energy(&p, 2, QuarticModel::PtSymmetric).unwrap();
        assert!((pt2.leading + 3.0 * nu).abs() < 1e-15 && pt2.is_bound());
        let pt3 = binding_energy(&p, 3, QuarticModel::PtSymmetric).unwrap();
        assert!((pt3.leading + 9.0 * nu).abs() < 1e-15);
        let c2 = binding_energy(&p, 2, QuarticModel::Conventional).unwrap();
        assert!((c2.energy - 2.0 * c2.mass - 3.0 * nu).abs() < 1e-14);
        assert!(!c2.is_bound());
        assert!(binding_energy(&p, 1, QuarticModel::Conventional).is_err());
    }
}
