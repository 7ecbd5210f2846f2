//! Rayleigh-Schrodinger perturbation theory in the Hermite basis for the cubic
//! couplings `i eps x^3`, `i eps x^2 y` and `i eps xyz` added to an isotropic
//! oscillator `(p^2 + r^2)/2`.
//!
//! A state of level `n = |index|` is written
//! `phi = i^n a / sqrt(norm) * e^{-r^2/2} (H_index + eps P + eps^2 Q)`
//! and each correction solves `sum_k c_k (|k| - n) H_k = rhs` exactly.

pub mod degenerate;
pub mod poly;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::gauss::fmt_ratio;
use crate::algebra::json::{series_to_json, SeriesJson};
use crate::algebra::{AlgebraError, GaussRational, HermiteSeries, MultiIndex};

pub use degenerate::{degenerate_block, DegenerateBlock, MixingVectors};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PerturbationError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("model {model} expects {expected} quantum numbers, got {got}")]
    IndexArity { model: ModelId, expected: usize, got: usize },
    #[error("first-order equation has a resonant term at {0}")]
    Resonance(MultiIndex),
    #[error("empty degenerate subspace")]
    EmptySubspace,
    #[error("state {index} does not belong to level {level}")]
    WrongLevel { index: MultiIndex, level: u32 },
    #[error("subspace is not closed: {from} couples to {to} outside the selection")]
    SubsetNotClosed { from: MultiIndex, to: MultiIndex },
    #[error("unknown model '{0}'")]
    UnknownModel(String),
}

/// The three cubic couplings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ModelId {
    Ix3,
    Ix2y,
    Ixyz,
}

impl ModelId {
    pub const ALL: [ModelId; 3] = [ModelId::Ix3, ModelId::Ix2y, ModelId::Ixyz];

    pub fn arity(self) -> usize {
        match self {
            ModelId::Ix3 => 1,
            ModelId::Ix2y => 2,
            ModelId::Ixyz => 3,
        }
    }

    /// Exponents of the coupling monomial `V` in `H = H_0 + i eps V`.
    pub fn coupling(self) -> &'static [u32] {
        match self {
            ModelId::Ix3 => &[3],
            ModelId::Ix2y => &[2, 1],
            ModelId::Ixyz => &[1, 1, 1],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelId::Ix3 => "ix3",
            ModelId::Ix2y => "ix2y",
            ModelId::Ixyz => "ixyz",
        }
    }

    fn check(self, index: &MultiIndex) -> Result<(), PerturbationError> {
        if index.arity() == self.arity() {
            Ok(())
        } else {
            Err(PerturbationError::IndexArity { model: self, expected: self.arity(), got: index.arity() })
        }
    }

    /// `V * s` in the Hermite basis.
    pub fn apply_coupling(self, s: &HermiteSeries) -> Result<HermiteSeries, AlgebraError> {
        match self {
            ModelId::Ix3 => s.mul_x3(0),
            _ => s.mul_monomial(self.coupling()),
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = PerturbationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ix3" => Ok(ModelId::Ix3),
            "ix2y" => Ok(ModelId::Ix2y),
            "ixyz" => Ok(ModelId::Ixyz),
            _ => Err(PerturbationError::UnknownModel(s.to_string())),
        }
    }
}

/// Eigenstate corrections `P` and `Q` of `H_index + eps P + eps^2 Q`,
/// so `p` has purely imaginary coefficients and `i*p` is real.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbedEigenstate {
    pub model: ModelId,
    pub index: MultiIndex,
    pub p: HermiteSeries,
    pub q: Option<HermiteSeries>,
    /// First-order energy coefficient.
    pub a: BigRational,
    /// Second-order energy coefficient.
    pub b: Option<BigRational>,
    /// `eps^2` coefficient of the normalization constant.
    pub norm_eps2: Option<BigRational>,
}

impl PerturbedEigenstate {
    pub fn level(&self) -> u32 {
        self.index.total()
    }

    /// `i P`, which has real coefficients.
    pub fn i_p(&self) -> HermiteSeries {
        self.p.mul_i_pow(1)
    }

    /// Highest implemented order in eps.
    pub fn order(&self) -> u32 {
        if self.q.is_some() {
            2
        } else {
            1
        }
    }

    /// Polynomial part of the state at each eps-power, `[H, P, Q]`.
    pub fn orders(&self) -> Vec<HermiteSeries> {
        let mut v = vec![HermiteSeries::basis(&self.index.0).expect("index arity validated"), self.p.clone()];
        if let Some(q) = &self.q {
            v.push(q.clone());
        }
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        let opt = |r: &Option<BigRational>| r.as_ref().map(fmt_ratio);
        serde_json::json!({
            "model": self.model.name(),
            "index": self.index.0,
            "A": fmt_ratio(&self.a),
            "B": opt(&self.b),
            "a_eps2": opt(&self.norm_eps2),
            "P": series_to_json(&self.p),
            "iP": series_to_json(&self.i_p()),
            "Q": self.q.as_ref().map(|q| serde_json::to_value(SeriesJson::from(q)).expect("plain data")),
        })
    }
}

/// Solves `sum_k c_k (|k| - n) H_k = rhs` with `c` vanishing on level `n`.
/// Returns the solution and the discarded level-`n` part of `rhs`.
fn invert_unperturbed(rhs: &HermiteSeries, n: u32) -> (HermiteSeries, HermiteSeries) {
    let resonant = rhs.filter(|k| k.total() == n);
    let sol = rhs.map_terms(|k, c| {
        if k.total() == n {
            GaussRational::zero()
        } else {
            c.scale(&BigRational::new(BigInt::one(), BigInt::from(k.total() as i64 - n as i64)))
        }
    });
    (sol, resonant)
}

/// First-order correction: `sum p_k (|k| - n) H_k = (A - i V) H_index`.
pub fn first_order_state(model: ModelId, index: &MultiIndex) -> Result<PerturbedEigenstate, PerturbationError> {
    model.check(index)?;
    let n = index.total();
    let h = HermiteSeries::basis(&index.0)?;
    let rhs = model.apply_coupling(&h)?.mul_i_pow(3);
    let (p, resonant) = invert_unperturbed(&rhs, n);
    if let Some((k, _)) = resonant.terms().next() {
        return Err(PerturbationError::Resonance(k.clone()));
    }
    Ok(PerturbedEigenstate {
        model,
        index: index.clone(),
        p,
        q: None,
        a: BigRational::zero(),
        b: None,
        norm_eps2: None,
    })
}

/// Second order for the one-dimensional `i x^3` coupling:
/// `sum q_k (k - n) H_k = B H_n - i x^3 P`, with `q_n = 0`.
pub fn second_order_state_ix3(n: u32) -> Result<PerturbedEigenstate, PerturbationError> {
    let index = MultiIndex::new(&[n]);
    let mut st = first_order_state(ModelId::Ix3, &index)?;
    let ivp = ModelId::Ix3.apply_coupling(&st.p)?.mul_i_pow(1);
    let b = ivp.coefficient(&[n]);
    debug_assert!(b.is_real());
    let rhs = ivp.scale(&-GaussRational::one());
    let (q, _) = invert_unperturbed(&rhs, n);
    st.q = Some(q);
    st.b = Some(b.re);
    st.norm_eps2 = Some(pt_normalize(&st)?.eps2.expect("second order present"));
    Ok(st)
}

/// Normalization coefficients `a = 1 + eps a1 + eps^2 a2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalization {
    pub eps1: BigRational,
    pub eps2: Option<BigRational>,
}

/// Chooses `a` so that `int phi^2 = (-1)^n` through the state's order.
pub fn pt_normalize(state: &PerturbedEigenstate) -> Result<Normalization, PerturbationError> {
    let h = HermiteSeries::basis(&state.index.0)?;
    let norm = h.gaussian_inner_product(&h)?.coeff;
    let ratio = |g: GaussRational| -> BigRational {
        debug_assert!(g.is_real());
        g.re / &norm.re
    };
    let hp = ratio(h.gaussian_inner_product(&state.p)?.coeff);
    // a^2 (1 + 2 eps hp + eps^2 s2) = 1
    let eps1 = -hp.clone();
    let eps2 = match &state.q {
        Some(q) => {
            let pp = ratio(state.p.gaussian_inner_product(&state.p)?.coeff);
            let hq = ratio(h.gaussian_inner_product(q)?.coeff);
            let s2 = pp + hq * BigRational::from_integer(2.into());
            let three_halves = BigRational::new(3.into(), 2.into());
            Some(three_halves * &hp * &hp - s2 / BigRational::from_integer(2.into()))
        }
        None => None,
    };
    Ok(Normalization { eps1, eps2 })
}

/// `(-1/2 lap + r.grad - n) s`, the unperturbed operator on `e^{-r^2/2} s`
/// with the Gaussian stripped, computed from derivatives directly.
fn unperturbed_action(s: &HermiteSeries, n: u32) -> Result<HermiteSeries, AlgebraError> {
    let mut out = s.scale_rational(&-BigRational::from_integer(n.into()));
    let half = GaussRational::real(BigRational::new((-1).into(), 2.into()));
    for axis in 0..s.arity() {
        let d = s.differentiate(axis)?;
        out = out.add(&d.differentiate(axis)?.scale(&half))?;
        out = out.add(&d.mul_x(axis)?)?;
    }
    Ok(out)
}

/// Residual of the Schrodinger equation at each eps-power up to `order`.
pub fn schrodinger_residual(state: &PerturbedEigenstate, order: u32) -> Result<Vec<HermiteSeries>, PerturbationError> {
    let n = state.level();
    let parts = state.orders();
    let energies = [BigRational::zero(), state.a.clone(), state.b.clone().unwrap_or_else(BigRational::zero)];
    let mut out = Vec::new();
    for k in 0..=(order as usize).min(parts.len() - 1) {
        let mut r = unperturbed_action(&parts[k], n)?;
        if k >= 1 {
            r = r.add(&state.model.apply_coupling(&parts[k - 1])?.mul_i_pow(1))?;
        }
        for j in 1..=k {
            r = r.sub(&parts[k - j].scale_rational(&energies[j]))?;
        }
        out.push(r);
    }
    Ok(out)
}

/// The closed-form second-order energy coefficient `(30n^2 + 30n + 11)/8`.
pub fn ix3_b_closed(n: u32) -> BigRational {
    let n = BigInt::from(n);
    BigRational::new(&n * &n * 30 + &n * 30 + 11, 8.into())
}

/// The closed-form normalization coefficient `(2n+1)(82n^2+82n+87)/144`.
pub fn ix3_norm_closed(n: u32) -> BigRational {
    let n = BigInt::from(n);
    BigRational::new((&n * 2 + 1) * (&n * &n * 82 + &n * 82 + 87), 144.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gauss::{int, rat};

    fn real(r: BigRational) -> GaussRational {
        GaussRational::real(r)
    }

    #[test]
    fn ix3_ground_state() {
        let st = first_order_state(ModelId::Ix3, &MultiIndex::new(&[0])).unwrap();
        let ip = st.i_p();
        assert_eq!(ip.coefficient(&[3]), real(rat(1, 24)));
        assert_eq!(ip.coefficient(&[1]), real(rat(3, 4)));
        assert_eq!(ip.len(), 2);
        assert!(st.a.is_zero());
    }

    #[test]
    fn ix2y_and_ixyz_ground_states() {
        let st = first_order_state(ModelId::Ix2y, &MultiIndex::new(&[0, 0])).unwrap();
        let ip = st.i_p();
        assert_eq!(ip.coefficient(&[2, 1]), real(rat(1, 24)));
        assert_eq!(ip.coefficient(&[0, 1]), real(rat(1, 4)));
        assert_eq!(ip.len(), 2);
        let st = first_order_state(ModelId::Ixyz, &MultiIndex::new(&[0, 0, 0])).unwrap();
        assert_eq!(st.i_p(), HermiteSeries::basis(&[1, 1, 1]).unwrap().scale_rational(&rat(1, 24)));
    }

    #[test]
    fn second_order_ground_state() {
        let st = second_order_state_ix3(0).unwrap();
        assert_eq!(st.b, Some(rat(11, 8)));
        let q = st.q.unwrap();
        assert_eq!(q.coefficient(&[6]), real(rat(-1, 1152)));
        assert_eq!(q.coefficient(&[4]), real(rat(-7, 128)));
        assert_eq!(q.coefficient(&[2]), real(rat(-27, 32)));
        assert_eq!(q.len(), 3);
        assert_eq!(st.norm_eps2, Some(rat(29, 48)));
    }

    #[test]
    fn second_order_closed_forms() {
        for n in 0..=10 {
            let st = second_order_state_ix3(n).unwrap();
            assert_eq!(st.b, Some(ix3_b_closed(n)), "B_{n}");
            assert_eq!(st.norm_eps2, Some(ix3_norm_closed(n)), "a_{n}");
        }
        assert_eq!(second_order_state_ix3(1).unwrap().norm_eps2, Some(rat(251, 48)));
        assert_eq!(second_order_state_ix3(2).unwrap().q.unwrap().coefficient(&[0]), real(rat(9, 4)));
    }

    #[test]
    fn residuals_vanish() {
        let st = second_order_state_ix3(3).unwrap();
        for r in schrodinger_residual(&st, 2).unwrap() {
            assert!(r.is_zero());
        }
        let st = first_order_state(ModelId::Ix2y, &MultiIndex::new(&[1, 0])).unwrap();
        for r in schrodinger_residual(&st, 1).unwrap() {
            assert!(r.is_zero());
        }
    }

    #[test]
    fn corrupted_state_has_residual() {
        let mut st = second_order_state_ix3(0).unwrap();
        let q = st.q.take().unwrap();
        st.q = Some(q.add(&HermiteSeries::basis(&[4]).unwrap().scale_rational(&int(1))).unwrap());
        let r = schrodinger_residual(&st, 2).unwrap();
        assert!(r[0].is_zero() && r[1].is_zero());
        assert!(!r[2].is_zero());
    }

    #[test]
    fn ixyz_first_order_normalization_vanishes() {
        let st = first_order_state(ModelId::Ixyz, &MultiIndex::new(&[2, 1, 0])).unwrap();
        assert!(pt_normalize(&st).unwrap().eps1.is_zero());
    }

    #[test]
    fn index_arity_checked() {
        assert!(matches!(
            first_order_state(ModelId::Ix2y, &MultiIndex::new(&[1])),
            Err(PerturbationError::IndexArity { .. })
        ));
        assert_eq!("IXYZ".parse::<ModelId>().unwrap(), ModelId::Ixyz);
        assert!("x4".parse::<ModelId>().is_err());
    }
}
