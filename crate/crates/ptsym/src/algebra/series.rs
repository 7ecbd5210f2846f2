//! Multi-variable polynomials stored in the physicists' Hermite basis.
//!
//! A [`HermiteSeries`] of arity `k` is a finite sum
//! `sum c_idx H_{i1}(x1) ... H_{ik}(xk)` with Gaussian-rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gauss::{int, GaussRational};
use super::AlgebraError;

/// Hermite degrees per coordinate, e.g. `(k, l, m)` for `H_k(x) H_l(y) H_m(z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn new(degrees: &[u32]) -> Self {
        Self(degrees.to_vec())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|idx|`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    pub(crate) fn shifted(&self, axis: usize, delta: i64) -> Option<Self> {
        let v = self.0[axis] as i64 + delta;
        if v < 0 {
            return None;
        }
        let mut out = self.0.clone();
        out[axis] = v as u32;
        Some(Self(out))
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(v: &[u32]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub(crate) fn check_arity(arity: usize) -> Result<(), AlgebraError> {
    if (1..=3).contains(&arity) {
        Ok(())
    } else {
        Err(AlgebraError::InvalidArity(arity))
    }
}

/// Sparse Hermite expansion; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteSeries {
    arity: usize,
    terms: BTreeMap<MultiIndex, GaussRational>,
}

/// A value `coeff * pi^(half_powers/2)`, keeping the transcendental factor symbolic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiMultiple {
    pub coeff: GaussRational,
    pub half_powers: u32,
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.half_powers {
            0 => write!(f, "{}", self.coeff),
            1 => write!(f, "({})*sqrt(pi)", self.coeff),
            2 => write!(f, "({})*pi", self.coeff),
            k => write!(f, "({})*pi^({}/2)", self.coeff, k),
        }
    }
}

/// `2^n n!`, the Gaussian norm of `H_n` divided by `sqrt(pi)`.
pub fn hermite_norm(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 1..=n {
        acc *= 2 * k;
    }
    acc
}

impl HermiteSeries {
    pub fn zero(arity: usize) -> Result<Self, AlgebraError> {
        check_arity(arity)?;
        Ok(Self { arity, terms: BTreeMap::new() })
    }

    /// The single product `H_idx`.
    pub fn basis(idx: &[u32]) -> Result<Self, AlgebraError> {
        let mut s = Self::zero(idx.len())?;
        s.add_term(MultiIndex::new(idx), GaussRational::one());
        Ok(s)
    }

    pub fn from_terms<I>(arity: usize, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (MultiIndex, GaussRational)>,
    {
        let mut s = Self::zero(arity)?;
        for (idx, c) in terms {
            if idx.arity() != arity {
                return Err(AlgebraError::ArityMismatch { left: arity, right: idx.arity() });
            }
            s.add_term(idx, c);
        }
        Ok(s)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &GaussRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coefficient(&self, idx: &[u32]) -> GaussRational {
        self.terms.get(&MultiIndex::new(idx)).cloned().unwrap_or_else(GaussRational::zero)
    }

    pub fn max_total_degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::total).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, idx: MultiIndex, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&idx) {
            Some(existing) => {
                *existing += &c;
                existing.is_zero()
            }
            None => {
                self.terms.insert(idx.clone(), c);
                false
            }
        };
        if remove {
            self.terms.remove(&idx);
        }
    }

    fn same_arity(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.arity == other.arity {
            Ok(())
        } else {
            Err(AlgebraError::ArityMismatch { left: self.arity, right: other.arity })
        }
    }

    fn check_axis(&self, axis: usize) -> Result<(), AlgebraError> {
        if axis < self.arity {
            Ok(())
        } else {
            Err(AlgebraError::AxisOutOfRange { axis, arity: self.arity })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_arity(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.scale(&-GaussRational::one()))
    }

    pub fn scale(&self, k: &GaussRational) -> Self {
        let mut out = Self { arity: self.arity, terms: BTreeMap::new() };
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c * k);
        }
        out
    }

    pub fn scale_rational(&self, k: &BigRational) -> Self {
        self.scale(&GaussRational::real(k.clone()))
    }

    /// Multiply by `i^k`.
    pub fn mul_i_pow(&self, k: u32) -> Self {
        let terms = self.terms.iter().map(|(i, c)| (i.clone(), c.mul_i_pow(k))).collect();
        Self { arity: self.arity, terms }
    }

    pub fn conj(&self) -> Self {
        let terms = self.terms.iter().map(|(i, c)| (i.clone(), c.conj())).collect();
        Self { arity: self.arity, terms }
    }

    /// `s(x) -> s(-x)` in every coordinate, using `H_k(-x) = (-1)^k H_k(x)`.
    pub fn parity(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(i, c)| (i.clone(), if i.total() % 2 == 1 { -c.clone() } else { c.clone() }))
            .collect();
        Self { arity: self.arity, terms }
    }

    /// Combined parity and complex conjugation.
    pub fn pt(&self) -> Self {
        self.parity().conj()
    }

    /// `x_axis * s` via `x H_n = H_{n+1}/2 + n H_{n-1}`.
    pub fn mul_x(&self, axis: usize) -> Result<Self, AlgebraError> {
        self.check_axis(axis)?;
        let half = GaussRational::real(super::gauss::rat(1, 2));
        let mut out = Self { arity: self.arity, terms: BTreeMap::new() };
        for (idx, c) in &self.terms {
            let n = idx.get(axis);
            out.add_term(idx.shifted(axis, 1).unwrap(), c * &half);
            if n > 0 {
                out.add_term(idx.shifted(axis, -1).unwrap(), c.scale(&int(n as i64)));
            }
        }
        Ok(out)
    }

    /// `x_axis^3 * s` from the closed three-step expansion of `x^3 H_n`.
    pub fn mul_x3(&self, axis: usize) -> Result<Self, AlgebraError> {
        self.check_axis(axis)?;
        let mut out = Self { arity: self.arity, terms: BTreeMap::new() };
        for (idx, c) in &self.terms {
            let n = idx.get(axis) as i64;
            out.add_term(idx.shifted(axis, 3).unwrap(), c.scale(&super::gauss::rat(1, 8)));
            out.add_term(idx.shifted(axis, 1).unwrap(), c.scale(&super::gauss::rat(3 * (n + 1), 4)));
            if n >= 1 {
                out.add_term(idx.shifted(axis, -1).unwrap(), c.scale(&super::gauss::rat(3 * n * n, 2)));
            }
            if n >= 3 {
                out.add_term(idx.shifted(axis, -3).unwrap(), c.scale(&int(n * (n - 1) * (n - 2))));
            }
        }
        Ok(out)
    }

    /// Multiply by the monomial `prod x_a^{e_a}`.
    pub fn mul_monomial(&self, exps: &[u32]) -> Result<Self, AlgebraError> {
        if exps.len() != self.arity {
            return Err(AlgebraError::ArityMismatch { left: self.arity, right: exps.len() });
        }
        let mut out = self.clone();
        for (axis, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                out = out.mul_x(axis)?;
            }
        }
        Ok(out)
    }

    /// `d/dx_axis` via `H_n' = 2n H_{n-1}`.
    pub fn differentiate(&self, axis: usize) -> Result<Self, AlgebraError> {
        self.check_axis(axis)?;
        let mut out = Self { arity: self.arity, terms: BTreeMap::new() };
        for (idx, c) in &self.terms {
            let n = idx.get(axis);
            if n > 0 {
                out.add_term(idx.shifted(axis, -1).unwrap(), c.scale(&int(2 * n as i64)));
            }
        }
        Ok(out)
    }

    /// `e^{x^2/2} (d/dx) e^{-x^2/2}` on the axis: `H_n -> n H_{n-1} - H_{n+1}/2`.
    pub(crate) fn lowered_derivative(&self, axis: usize) -> Result<Self, AlgebraError> {
        self.check_axis(axis)?;
        let half = GaussRational::real(-super::gauss::rat(1, 2));
        let mut out = Self { arity: self.arity, terms: BTreeMap::new() };
        for (idx, c) in &self.terms {
            let n = idx.get(axis);
            out.add_term(idx.shifted(axis, 1).unwrap(), c * &half);
            if n > 0 {
                out.add_term(idx.shifted(axis, -1).unwrap(), c.scale(&int(n as i64)));
            }
        }
        Ok(out)
    }

    /// Exact `int e^{-r^2} a b` over all coordinates (bilinear, no conjugation).
    pub fn gaussian_inner_product(&self, other: &Self) -> Result<PiMultiple, AlgebraError> {
        self.same_arity(other)?;
        let mut acc = GaussRational::zero();
        for (idx, c) in &self.terms {
            if let Some(d) = other.terms.get(idx) {
                let norm: BigInt = idx.0.iter().map(|&n| hermite_norm(n)).product();
                acc += &(c * d).scale(&BigRational::from_integer(norm));
            }
        }
        Ok(PiMultiple { coeff: acc, half_powers: self.arity as u32 })
    }

    /// Keeps only the terms whose index satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&MultiIndex) -> bool) -> Self {
        let terms = self.terms.iter().filter(|(i, _)| keep(i)).map(|(i, c)| (i.clone(), c.clone())).collect();
        Self { arity: self.arity, terms }
    }

    /// Applies `f` to each coefficient, dropping terms that become zero.
    pub fn map_terms(&self, mut f: impl FnMut(&MultiIndex, &GaussRational) -> GaussRational) -> Self {
        let mut out = Self { arity: self.arity, terms: BTreeMap::new() };
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), f(idx, c));
        }
        out
    }
}

impl fmt::Display for HermiteSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["x", "y", "z"];
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, c)| {
                let h: Vec<String> =
                    idx.0.iter().enumerate().map(|(a, n)| format!("H{}({})", n, names[a])).collect();
                format!("({})*{}", c, h.join("*"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::super::gauss::rat;
    use super::*;

    fn r(n: i64, d: i64) -> GaussRational {
        GaussRational::real(rat(n, d))
    }

    #[test]
    fn x_times_h0_and_h1() {
        let s = HermiteSeries::basis(&[0]).unwrap().mul_x(0).unwrap();
        assert_eq!(s, HermiteSeries::from_terms(1, [(MultiIndex::new(&[1]), r(1, 2))]).unwrap());
        let s = HermiteSeries::basis(&[1]).unwrap().mul_x(0).unwrap();
        assert_eq!(s.coefficient(&[2]), r(1, 2));
        assert_eq!(s.coefficient(&[0]), r(1, 1));
    }

    #[test]
    fn x_times_h3() {
        let s = HermiteSeries::basis(&[3]).unwrap().mul_x(0).unwrap();
        assert_eq!(s.coefficient(&[4]), r(1, 2));
        assert_eq!(s.coefficient(&[2]), r(3, 1));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn cube_expansion_examples() {
        let s = HermiteSeries::basis(&[1]).unwrap().mul_x3(0).unwrap();
        assert_eq!(s.coefficient(&[4]), r(1, 8));
        assert_eq!(s.coefficient(&[2]), r(3, 2));
        assert_eq!(s.coefficient(&[0]), r(3, 2));
        let s = HermiteSeries::basis(&[0]).unwrap().mul_x3(0).unwrap();
        assert_eq!(s.coefficient(&[3]), r(1, 8));
        assert_eq!(s.coefficient(&[1]), r(3, 4));
        let s = HermiteSeries::basis(&[2]).unwrap().mul_x3(0).unwrap();
        assert_eq!(s.coefficient(&[5]), r(1, 8));
        assert_eq!(s.coefficient(&[3]), r(9, 4));
        assert_eq!(s.coefficient(&[1]), r(6, 1));
    }

    #[test]
    fn derivative_examples() {
        let s = HermiteSeries::basis(&[3]).unwrap().differentiate(0).unwrap();
        assert_eq!(s.coefficient(&[2]), r(6, 1));
        assert!(HermiteSeries::basis(&[0]).unwrap().differentiate(0).unwrap().is_zero());
    }

    #[test]
    fn axis_errors() {
        let s = HermiteSeries::basis(&[1, 2]).unwrap();
        assert!(matches!(s.mul_x(2), Err(AlgebraError::AxisOutOfRange { .. })));
        assert!(matches!(HermiteSeries::zero(4), Err(AlgebraError::InvalidArity(4))));
    }

    #[test]
    fn orthogonality() {
        let h2 = HermiteSeries::basis(&[2]).unwrap();
        let h1 = HermiteSeries::basis(&[1]).unwrap();
        let ip = h2.gaussian_inner_product(&h2).unwrap();
        assert_eq!(ip.coeff, r(8, 1));
        assert_eq!(ip.half_powers, 1);
        assert!(h1.gaussian_inner_product(&h2).unwrap().coeff.is_zero());
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let a = HermiteSeries::basis(&[2]).unwrap();
        assert!(a.sub(&a).unwrap().is_zero());
    }
}
