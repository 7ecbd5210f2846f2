//! The `C` operator as a differential operator acting on the parity kernel,
//! `C = (1 + eps L1 + eps^2 L2 + ...) P`, with every check done exactly.
//!
//! Kernel operators act on the first argument. Coordinates of the second
//! argument enter as [`Factor::Mirror`] and are eliminated against the parity
//! kernel.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::gauss::rat;
use crate::algebra::{AlgebraError, DiffOp, Factor, GaussRational, HermiteSeries, MultiIndex, Word};
use crate::perturbation::{first_order_state, second_order_state_ix3, ModelId, PerturbedEigenstate};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum COperatorError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("order {order} is not available for model {model}")]
    Unsupported { model: ModelId, order: u32 },
    #[error("kernel model {kernel} does not match state model {state}")]
    ModelMismatch { kernel: ModelId, state: ModelId },
    #[error("state carries order {have}, kernel needs {need}")]
    StateOrder { have: u32, need: u32 },
    #[error(transparent)]
    Perturbation(#[from] crate::perturbation::PerturbationError),
}

/// Corrections `[1, L1, L2, ...]` multiplying the parity kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CKernel {
    pub model: ModelId,
    pub order: u32,
    pub corrections: Vec<DiffOp>,
}

fn q(n: i64, d: i64) -> GaussRational {
    GaussRational::real(rat(n, d))
}

/// The first-order generator `delta` with `i P = e^{r^2/2} delta e^{-r^2/2} H`,
/// written on unprimed (`primed = false`) or primed coordinates.
pub fn delta_words(model: ModelId, primed: bool) -> Vec<Word> {
    use Factor::{Mirror, X, D};
    let c = |a: usize| if primed { Mirror(a) } else { X(a) };
    match model {
        ModelId::Ix3 => vec![
            Word::new(q(2, 3), vec![D(0), D(0), D(0)]),
            Word::new(q(-1, 1), vec![c(0), c(0), D(0)]),
            Word::new(q(-1, 1), vec![c(0)]),
        ],
        ModelId::Ix2y => vec![
            Word::new(q(2, 3), vec![D(0), D(0), D(1)]),
            Word::new(q(-1, 3), vec![c(0), c(0), D(1)]),
            Word::new(q(-2, 3), vec![c(0), c(1), D(0)]),
            Word::new(q(-1, 3), vec![c(1)]),
        ],
        ModelId::Ixyz => vec![
            Word::new(q(2, 3), vec![D(0), D(1), D(2)]),
            Word::new(q(-1, 3), vec![c(0), c(1), D(2)]),
            Word::new(q(-1, 3), vec![c(0), c(2), D(1)]),
            Word::new(q(-1, 3), vec![c(1), c(2), D(0)]),
        ],
    }
}

/// `delta` as a normal-ordered operator on the unprimed coordinates.
pub fn delta_operator(model: ModelId) -> Result<DiffOp, AlgebraError> {
    DiffOp::normal_order(model.arity(), &delta_words(model, false))
}

/// Words of `p^k = (-i D)^k` on axis 0, with a coefficient prefix.
fn p_word(coeff: GaussRational, prefix: &[Factor], k: u32) -> Word {
    let mut f = prefix.to_vec();
    f.extend(std::iter::repeat_n(Factor::D(0), k as usize));
    Word::new(coeff.mul_i_pow(3 * k), f)
}

/// Second-order kernel of the one-dimensional model in momentum form:
/// `8/9 p^6 - 8/3 x y p^4 + (2 x^2 y^2 - 12) p^2`, with `y` the second argument.
pub fn ix3_second_order_words() -> Vec<Word> {
    use Factor::{Mirror, X};
    vec![
        p_word(q(8, 9), &[], 6),
        p_word(q(-8, 3), &[X(0), Mirror(0)], 4),
        p_word(q(2, 1), &[X(0), X(0), Mirror(0), Mirror(0)], 2),
        p_word(q(-12, 1), &[], 2),
    ]
}

/// First-order kernel of the one-dimensional model in momentum form:
/// `-(4/3 p^3 - 2 x y p)`.
pub fn ix3_first_order_momentum_words() -> Vec<Word> {
    use Factor::{Mirror, X};
    vec![p_word(q(-4, 3), &[], 3), p_word(q(2, 1), &[X(0), Mirror(0)], 1)]
}

pub fn build_c(model: ModelId, order: u32) -> Result<CKernel, COperatorError> {
    if order == 0 || order > 2 || (order == 2 && model != ModelId::Ix3) {
        return Err(COperatorError::Unsupported { model, order });
    }
    let arity = model.arity();
    let mut words = delta_words(model, false);
    words.extend(delta_words(model, true));
    // L1 = -i (delta + delta')
    let l1 = DiffOp::normal_order(arity, &words)?.scale(&-GaussRational::i());
    let mut corrections = vec![DiffOp::identity(arity)?, l1];
    if order == 2 {
        corrections.push(DiffOp::normal_order(1, &ix3_second_order_words())?);
    }
    Ok(CKernel { model, order, corrections })
}

impl CKernel {
    /// The pure parity kernel, i.e. the eps -> 0 limit.
    pub fn parity_limit(&self) -> &DiffOp {
        &self.corrections[0]
    }

    /// Residuals `sum_{j<=k} L_j P L_{k-j} P` of `C^2 = 1` for `k = 1..=order`.
    pub fn compose_c(&self) -> Result<Vec<DiffOp>, COperatorError> {
        let arity = self.model.arity();
        let mut out = Vec::new();
        for k in 1..self.corrections.len() {
            let mut acc = DiffOp::zero(arity)?;
            for j in 0..=k {
                let prod = self.corrections[j].compose(&self.corrections[k - j].parity_conjugate())?;
                acc = acc.add(&prod)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// `CP = (PC)^*`, order by order: `L_k = conj(P L_k P)`.
    pub fn cp_pc_relation(&self) -> bool {
        self.corrections.iter().all(|l| l.parity_conjugate().conj() == *l)
    }

    /// `[C, PT] = 0`, order by order: `L_k T = P T L_k P`.
    pub fn commutes_with_pt(&self) -> bool {
        // PT L P = P conj(L) P T, so the condition is conj(P L P) = L
        self.corrections.iter().all(|l| l.conj().parity_conjugate() == *l)
    }

    /// With `C = C_R + i C_I`: `C_R P = P C_R` and `C_I P = -P C_I` at every order.
    pub fn real_imag_parity_split(&self) -> bool {
        self.corrections.iter().all(|l| {
            let re = l.real_part();
            let im = l.imag_part();
            re.parity_conjugate() == re && im.parity_conjugate() == im.scale(&-GaussRational::one())
        })
    }

    /// Applies the kernel to a state and returns, per eps-power, the residual
    /// `(C phi - (-1)^n phi)` with the common prefactor stripped.
    pub fn apply_c(&self, state: &PerturbedEigenstate) -> Result<Vec<HermiteSeries>, COperatorError> {
        if state.model != self.model {
            return Err(COperatorError::ModelMismatch { kernel: self.model, state: state.model });
        }
        if state.order() < self.order {
            return Err(COperatorError::StateOrder { have: state.order(), need: self.order });
        }
        let parts = state.orders();
        let sign = if state.level().is_multiple_of(2) { GaussRational::one() } else { -GaussRational::one() };
        let mut out = Vec::new();
        for k in 0..=self.order as usize {
            let mut acc = parts[k].scale(&-sign.clone());
            for j in 0..=k {
                acc = acc.add(&self.corrections[j].apply_gaussian(&parts[k - j].parity())?)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Applies the kernel to `e^{-r^2/2} f`, returning each eps-power.
    pub fn act(&self, f: &HermiteSeries) -> Result<Vec<HermiteSeries>, COperatorError> {
        let pf = f.parity();
        self.corrections.iter().map(|l| Ok(l.apply_gaussian(&pf)?)).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("1");
        for (k, l) in self.corrections.iter().enumerate().skip(1) {
            let eps = if k == 1 { "eps".to_string() } else { format!("eps^{k}") };
            if l.is_zero() {
                continue;
            }
            if l.terms().all(|(_, c)| c.is_imaginary()) {
                let body = l.scale(&GaussRational::i());
                s.push_str(&format!(" - i*{eps}*({body})"));
            } else {
                s.push_str(&format!(" + {eps}*({l})"));
            }
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "model": self.model.name(),
            "order": self.order,
            "text": self.to_text(),
            "corrections": self.corrections.iter().map(crate::algebra::json::op_to_json).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for CKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] P", self.to_text())
    }
}

/// `exp(eps G)` with `G = -(4/3 p^3 + 2 x p x)` expanded to second order,
/// returned as `[1, G, G^2/2]`.
pub fn ix3_exponential_expansion() -> Result<Vec<DiffOp>, AlgebraError> {
    use Factor::{X, D};
    let g = DiffOp::normal_order(
        1,
        &[p_word(q(-4, 3), &[], 3), Word::new(q(-2, 1).mul_i_pow(3), vec![X(0), D(0), X(0)])],
    )?;
    let half = GaussRational::real(BigRational::new(1.into(), 2.into()));
    Ok(vec![DiffOp::identity(1)?, g.clone(), g.compose(&g)?.scale(&half)])
}

/// Evaluates `sum_m phi_m(x) (phi_m, f)` over all states with `|m| <= max_level`,
/// per eps-power up to `order`, with the common Gaussian stripped.
pub fn apply_c_by_sum(
    model: ModelId,
    order: u32,
    f: &HermiteSeries,
    max_level: u32,
) -> Result<Vec<HermiteSeries>, COperatorError> {
    if order == 0 || order > 2 || (order == 2 && model != ModelId::Ix3) {
        return Err(COperatorError::Unsupported { model, order });
    }
    let arity = model.arity();
    let mut out = vec![HermiteSeries::zero(arity)?; order as usize + 1];
    for idx in indices_up_to(arity, max_level) {
        let st = if order == 2 { second_order_state_ix3(idx.0[0])? } else { first_order_state(model, &idx)? };
        let parts = st.orders();
        let h = &parts[0];
        let norm = h.gaussian_inner_product(h)?.coeff.re;
        let sign = if idx.total() % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        // a^2 = 1 + 2 a2 eps^2
        let mut a_sq = vec![BigRational::one(), BigRational::zero()];
        if order == 2 {
            a_sq.push(st.norm_eps2.clone().unwrap_or_else(BigRational::zero) * BigRational::from_integer(2.into()));
        }
        let overlaps: Vec<GaussRational> = parts
            .iter()
            .map(|p| p.gaussian_inner_product(f).map(|v| v.coeff))
            .collect::<Result<_, _>>()?;
        for k in 0..=order as usize {
            for l in 0..=k {
                for i in 0..=(k - l) {
                    let j = k - l - i;
                    if overlaps[j].is_zero() || a_sq[l].is_zero() {
                        continue;
                    }
                    let c = overlaps[j].scale(&(&a_sq[l] * &sign / &norm));
                    out[k] = out[k].add(&parts[i].scale(&c))?;
                }
            }
        }
    }
    Ok(out)
}

/// All multi-indices of the given arity with total degree at most `max_level`.
pub fn indices_up_to(arity: usize, max_level: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; arity];
    fn rec(out: &mut Vec<MultiIndex>, cur: &mut Vec<u32>, axis: usize, left: u32) {
        if axis == cur.len() {
            out.push(MultiIndex::new(cur));
            return;
        }
        for k in 0..=left {
            cur[axis] = k;
            rec(out, cur, axis + 1, left - k);
        }
        cur[axis] = 0;
    }
    rec(&mut out, &mut cur, 0, max_level);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_ix3_first() -> DiffOp {
        use Factor::{X, D};
        DiffOp::normal_order(
            1,
            &[Word::new(q(4, 3), vec![D(0), D(0), D(0)]), Word::new(q(-2, 1), vec![X(0), D(0), X(0)])],
        )
        .unwrap()
        .scale(&-GaussRational::i())
    }

    #[test]
    fn ix3_first_order_matches_reference() {
        let k = build_c(ModelId::Ix3, 1).unwrap();
        assert_eq!(k.corrections[1], reference_ix3_first());
        assert_eq!(k.to_text(), "1 - i*eps*(4/3*Dx^3 - 2*x^2*Dx - 2*x)");
    }

    #[test]
    fn momentum_form_agrees_at_first_order() {
        let m = DiffOp::normal_order(1, &ix3_first_order_momentum_words()).unwrap();
        assert_eq!(m, reference_ix3_first());
    }

    #[test]
    fn delta_generates_first_order_states() {
        for model in ModelId::ALL {
            let d = delta_operator(model).unwrap();
            for idx in indices_up_to(model.arity(), 4) {
                let st = first_order_state(model, &idx).unwrap();
                let via = d.apply_gaussian(&HermiteSeries::basis(&idx.0).unwrap()).unwrap();
                assert_eq!(via, st.i_p(), "{model} {idx}");
            }
        }
    }

    #[test]
    fn square_is_identity() {
        for (model, order) in [(ModelId::Ix3, 1), (ModelId::Ix3, 2), (ModelId::Ix2y, 1), (ModelId::Ixyz, 1)] {
            let k = build_c(model, order).unwrap();
            for r in k.compose_c().unwrap() {
                assert!(r.is_zero(), "{model} order {order}: {r}");
            }
            assert!(k.cp_pc_relation());
            assert!(k.commutes_with_pt());
            assert!(k.real_imag_parity_split());
        }
    }

    #[test]
    fn second_order_is_exponential() {
        let k = build_c(ModelId::Ix3, 2).unwrap();
        let e = ix3_exponential_expansion().unwrap();
        assert_eq!(e[1], k.corrections[1]);
        assert_eq!(e[2], k.corrections[2]);
    }

    #[test]
    fn eigenstates_of_c() {
        let k = build_c(ModelId::Ix3, 2).unwrap();
        for n in 0..=6 {
            let st = second_order_state_ix3(n).unwrap();
            for r in k.apply_c(&st).unwrap() {
                assert!(r.is_zero(), "n = {n}");
            }
        }
        let k = build_c(ModelId::Ixyz, 1).unwrap();
        let st = first_order_state(ModelId::Ixyz, &MultiIndex::new(&[1, 0, 0])).unwrap();
        assert!(k.apply_c(&st).unwrap().iter().all(|r| r.is_zero()));
    }

    #[test]
    fn sum_over_states_matches_kernel() {
        let k = build_c(ModelId::Ix3, 2).unwrap();
        for n in 0..=6 {
            let f = HermiteSeries::basis(&[n]).unwrap();
            assert_eq!(apply_c_by_sum(ModelId::Ix3, 2, &f, 12).unwrap(), k.act(&f).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn unsupported_orders() {
        assert!(build_c(ModelId::Ixyz, 2).is_err());
        assert!(build_c(ModelId::Ix3, 3).is_err());
        let k = build_c(ModelId::Ix2y, 1).unwrap();
        let st = first_order_state(ModelId::Ix3, &MultiIndex::new(&[0])).unwrap();
        assert!(matches!(k.apply_c(&st), Err(COperatorError::ModelMismatch { .. })));
    }
}
