//! Second-order mixing inside a degenerate level of the `i eps xyz` model.
//!
//! With `psi = sum_j v_j (H_{b_j} + eps P_{b_j} + ...)`, the eps^2 equation is
//! solvable only if the level-`n` part of `B v_j H_{b_j} - i xyz P` vanishes,
//! i.e. `(B I - W) v = 0` with `W_ij = [xyz * iP_{b_j}]_{b_i}`.

use std::collections::{BTreeMap, BTreeSet};

use faer::Mat;
use num_rational::BigRational;
use num_traits::Zero;

use super::poly::{characteristic_polynomial, nullspace, RatPoly, RootValue};
use super::{first_order_state, ModelId, PerturbationError};
use crate::algebra::gauss::{fmt_ratio, ratio_to_f64, rat};
use crate::algebra::MultiIndex;

/// Nullspace basis for one root.
#[derive(Debug, Clone, PartialEq)]
pub enum MixingVectors {
    Exact(Vec<Vec<BigRational>>),
    Approximate(Vec<Vec<f64>>),
}

impl MixingVectors {
    pub fn dimension(&self) -> usize {
        match self {
            MixingVectors::Exact(v) => v.len(),
            MixingVectors::Approximate(v) => v.len(),
        }
    }

    pub fn as_f64(&self) -> Vec<Vec<f64>> {
        match self {
            MixingVectors::Exact(v) => v.iter().map(|r| r.iter().map(ratio_to_f64).collect()).collect(),
            MixingVectors::Approximate(v) => v.clone(),
        }
    }
}

/// A second-order energy coefficient with its algebraic multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct BRoot {
    pub value: RootValue,
    pub multiplicity: usize,
    pub mixing: MixingVectors,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegenerateBlock {
    pub level: u32,
    pub basis: Vec<MultiIndex>,
    pub matrix: Vec<Vec<BigRational>>,
    /// Monic `det(B I - W)`.
    pub char_poly: RatPoly,
    /// Characteristic polynomials of the decoupled sub-blocks.
    pub factors: Vec<RatPoly>,
    pub roots: Vec<BRoot>,
    /// Number of roots off the real axis.
    pub complex_roots: usize,
}

/// All `(k, l, m)` with `k + l + m = n`, in descending lexicographic order.
pub fn level_states(n: u32) -> Vec<MultiIndex> {
    let mut v = Vec::new();
    for k in (0..=n).rev() {
        for l in (0..=n - k).rev() {
            v.push(MultiIndex::new(&[k, l, n - k - l]));
        }
    }
    v
}

/// Coupling of every state of the level to the level itself through `xyz iP`.
fn coupling_column(b: &MultiIndex) -> Result<BTreeMap<MultiIndex, BigRational>, PerturbationError> {
    let st = first_order_state(ModelId::Ixyz, b)?;
    let s = ModelId::Ixyz.apply_coupling(&st.i_p())?;
    Ok(s.terms().filter(|(k, _)| k.total() == b.total()).map(|(k, c)| (k.clone(), c.re.clone())).collect())
}

pub fn degenerate_block(level: u32, subset: Option<&[MultiIndex]>) -> Result<DegenerateBlock, PerturbationError> {
    let basis: Vec<MultiIndex> = match subset {
        Some(s) => s.to_vec(),
        None => level_states(level),
    };
    if basis.is_empty() {
        return Err(PerturbationError::EmptySubspace);
    }
    for b in &basis {
        if b.arity() != 3 {
            return Err(PerturbationError::IndexArity { model: ModelId::Ixyz, expected: 3, got: b.arity() });
        }
        if b.total() != level {
            return Err(PerturbationError::WrongLevel { index: b.clone(), level });
        }
    }
    let pos: BTreeMap<&MultiIndex, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let d = basis.len();
    let mut w = vec![vec![BigRational::zero(); d]; d];
    for (j, b) in basis.iter().enumerate() {
        for (k, c) in coupling_column(b)? {
            match pos.get(&k) {
                Some(&i) => w[i][j] = c,
                None => return Err(PerturbationError::SubsetNotClosed { from: b.clone(), to: k }),
            }
        }
    }

    let comps = components(&w);
    let mut factors = Vec::new();
    let mut char_poly = RatPoly::from_ints(&[1]);
    for comp in &comps {
        let sub: Vec<Vec<BigRational>> = comp.iter().map(|&i| comp.iter().map(|&j| w[i][j].clone()).collect()).collect();
        let f = characteristic_polynomial(&sub);
        char_poly = char_poly.mul(&f);
        factors.push(f);
    }

    let mut roots = Vec::new();
    let mut real_count = 0;
    for (mult, part) in char_poly.square_free_parts().into_iter().enumerate() {
        for value in part.isolate(&rat(1, 1_000_000_000_000)) {
            real_count += mult + 1;
            let mixing = mixing_vectors(&w, &value, mult + 1);
            roots.push(BRoot { value, multiplicity: mult + 1, mixing });
        }
    }
    roots.sort_by(|a, b| b.value.midpoint().partial_cmp(&a.value.midpoint()).unwrap());
    Ok(DegenerateBlock {
        level,
        basis,
        matrix: w,
        char_poly,
        factors,
        roots,
        complex_roots: d - real_count,
    })
}

/// Connected components of the coupling graph of `w`.
fn components(w: &[Vec<BigRational>]) -> Vec<Vec<usize>> {
    let n = w.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(i) = stack.pop() {
            comp.insert(i);
            for j in 0..n {
                if !seen[j] && (!w[i][j].is_zero() || !w[j][i].is_zero()) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        out.push(comp.into_iter().collect());
    }
    out
}

fn mixing_vectors(w: &[Vec<BigRational>], root: &RootValue, mult: usize) -> MixingVectors {
    let n = w.len();
    match root {
        RootValue::Exact(r) => {
            let shifted: Vec<Vec<BigRational>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { &w[i][j] - r } else { w[i][j].clone() }).collect())
                .collect();
            MixingVectors::Exact(nullspace(&shifted))
        }
        RootValue::Interval { .. } => {
            let lam = root.midpoint();
            let m = Mat::<f64>::from_fn(n, n, |i, j| ratio_to_f64(&w[i][j]) - if i == j { lam } else { 0.0 });
            let svd = m.svd().expect("svd of a small dense matrix");
            let s = svd.S().column_vector();
            let v = svd.V();
            let scale = (0..n).map(|i| s[i]).fold(0.0f64, f64::max).max(1.0);
            let mut vecs = Vec::new();
            for k in (0..n).rev() {
                if vecs.len() == mult || s[k] > 1e-7 * scale {
                    break;
                }
                vecs.push((0..n).map(|i| v[(i, k)]).collect());
            }
            MixingVectors::Approximate(vecs)
        }
    }
}

impl DegenerateBlock {
    /// Real roots with multiplicity, as floats.
    pub fn root_values(&self) -> Vec<(f64, usize)> {
        self.roots.iter().map(|r| (r.value.midpoint(), r.multiplicity)).collect()
    }

    /// Whether `p` (with the eps^2 variable `B`) equals the characteristic
    /// polynomial up to a constant factor.
    pub fn matches(&self, p: &RatPoly) -> bool {
        p.monic() == self.char_poly
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "level": self.level,
            "basis": self.basis.iter().map(|b| b.0.clone()).collect::<Vec<_>>(),
            "matrix": self.matrix.iter().map(|r| r.iter().map(fmt_ratio).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "char_poly": self.char_poly.coeffs().iter().map(fmt_ratio).collect::<Vec<_>>(),
            "char_poly_text": self.char_poly.to_string(),
            "factors": self.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "complex_roots": self.complex_roots,
            "roots": self.roots.iter().map(|r| serde_json::json!({
                "value": r.value.to_string(),
                "approx": r.value.midpoint(),
                "exact": r.value.exact().is_some(),
                "multiplicity": r.multiplicity,
                "mixing": r.mixing.as_f64(),
                "mixing_exact": match &r.mixing {
                    MixingVectors::Exact(v) => Some(v.iter().map(|x| x.iter().map(fmt_ratio).collect::<Vec<_>>()).collect::<Vec<_>>()),
                    MixingVectors::Approximate(_) => None,
                },
            })).collect::<Vec<_>>(),
        })
    }
}

/// The all-even index states of a level, which close under the second-order coupling.
pub fn even_class(level: u32) -> Vec<MultiIndex> {
    level_states(level).into_iter().filter(|b| b.0.iter().all(|k| k % 2 == 0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_two_even_block() {
        let blk = degenerate_block(2, Some(&even_class(2))).unwrap();
        assert_eq!(blk.matrix[0][0], rat(3, 8));
        assert_eq!(blk.matrix[0][1], rat(1, 4));
        let expected = RatPoly::linear(&rat(1, 8)).pow(2).mul(&RatPoly::linear(&rat(7, 8)));
        assert!(blk.matches(&expected));
        let top = &blk.roots[0];
        assert_eq!(top.value, RootValue::Exact(rat(7, 8)));
        let MixingVectors::Exact(v) = &top.mixing else { panic!() };
        assert_eq!(v.len(), 1);
        assert!(v[0][0] == v[0][1] && v[0][1] == v[0][2]);
        let low = &blk.roots[1];
        assert_eq!(low.multiplicity, 2);
        let MixingVectors::Exact(v) = &low.mixing else { panic!() };
        for u in v {
            assert!((u[0].clone() + &u[1] + &u[2]).is_zero());
        }
    }

    #[test]
    fn level_four_subset() {
        let blk = degenerate_block(4, Some(&even_class(4))).unwrap();
        assert_eq!(blk.basis.len(), 6);
        let a = RatPoly::from_ints(&[-33, -496, 192]);
        let b = RatPoly::from_ints(&[81, -352, 192]);
        assert!(blk.matches(&a.mul(&b.pow(2))));
        assert_eq!(blk.complex_roots, 0);
    }

    #[test]
    fn full_level_multiplicities_sum() {
        let blk = degenerate_block(2, None).unwrap();
        let total: usize = blk.roots.iter().map(|r| r.multiplicity).sum::<usize>() + blk.complex_roots;
        assert_eq!(total, 6);
    }

    #[test]
    fn open_subset_rejected() {
        let sub = [MultiIndex::new(&[2, 0, 0]), MultiIndex::new(&[0, 2, 0])];
        assert!(matches!(degenerate_block(2, Some(&sub)), Err(PerturbationError::SubsetNotClosed { .. })));
        assert!(matches!(degenerate_block(2, Some(&[])), Err(PerturbationError::EmptySubspace)));
        let wrong = [MultiIndex::new(&[1, 0, 0])];
        assert!(matches!(degenerate_block(2, Some(&wrong)), Err(PerturbationError::WrongLevel { .. })));
    }
}
