//! Normal-ordered differential operators `sum c x^a D^b` in up to three
//! coordinates, with all derivatives acting to the right of all
//! multiplications.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gauss::{fmt_ratio, GaussRational};
use super::monomial::MonomialPoly;
use super::series::{check_arity, HermiteSeries, MultiIndex};
use super::AlgebraError;

/// One factor of an operator word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    /// Multiplication by the coordinate.
    X(usize),
    /// Partial derivative in the coordinate.
    D(usize),
    /// Multiplication by the matching coordinate of the second kernel
    /// argument. Against the parity kernel `delta(x + x')` it commutes with
    /// everything acting on `x`, so it becomes `-x` placed rightmost.
    Mirror(usize),
}

/// A coefficient times an ordered product of factors (leftmost acts last).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub coeff: GaussRational,
    pub factors: Vec<Factor>,
}

impl Word {
    pub fn new(coeff: GaussRational, factors: Vec<Factor>) -> Self {
        Self { coeff, factors }
    }
}

/// Exponent tuple of a normal-ordered term `x^x D^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpKey {
    pub x: Vec<u32>,
    pub d: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp {
    arity: usize,
    terms: BTreeMap<OpKey, GaussRational>,
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |a, j| a * (n - j))
}

/// `x^a D^b x^c D^d` on one axis as `(coefficient, x power, D power)` terms.
fn reorder_axis(a: u32, b: u32, c: u32, d: u32) -> Vec<(BigInt, u32, u32)> {
    (0..=b.min(c)).map(|k| (binomial(b, k) * falling(c, k), a + c - k, b - k + d)).collect()
}

impl DiffOp {
    pub fn zero(arity: usize) -> Result<Self, AlgebraError> {
        check_arity(arity)?;
        Ok(Self { arity, terms: BTreeMap::new() })
    }

    pub fn identity(arity: usize) -> Result<Self, AlgebraError> {
        Self::monomial(arity, GaussRational::one(), &vec![0; arity], &vec![0; arity])
    }

    /// The single normal-ordered term `c x^x D^d`.
    pub fn monomial(arity: usize, c: GaussRational, x: &[u32], d: &[u32]) -> Result<Self, AlgebraError> {
        let mut op = Self::zero(arity)?;
        if x.len() != arity || d.len() != arity {
            return Err(AlgebraError::ArityMismatch { left: arity, right: x.len().max(d.len()) });
        }
        op.add_term(OpKey { x: x.to_vec(), d: d.to_vec() }, c);
        Ok(op)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpKey, &GaussRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, x: &[u32], d: &[u32]) -> GaussRational {
        self.terms.get(&OpKey { x: x.to_vec(), d: d.to_vec() }).cloned().unwrap_or_else(GaussRational::zero)
    }

    fn add_term(&mut self, key: OpKey, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(GaussRational::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn same_arity(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.arity == other.arity {
            Ok(())
        } else {
            Err(AlgebraError::ArityMismatch { left: self.arity, right: other.arity })
        }
    }

    /// Normal-orders a sum of operator words.
    pub fn normal_order(arity: usize, words: &[Word]) -> Result<Self, AlgebraError> {
        let mut out = Self::zero(arity)?;
        for w in words {
            let mut acc = Self::monomial(arity, w.coeff.clone(), &vec![0; arity], &vec![0; arity])?;
            let mut mirrors = Vec::new();
            for f in &w.factors {
                let axis = match f {
                    Factor::X(a) | Factor::D(a) | Factor::Mirror(a) => *a,
                };
                if axis >= arity {
                    return Err(AlgebraError::AxisOutOfRange { axis, arity });
                }
                match f {
                    Factor::Mirror(a) => mirrors.push(*a),
                    _ => acc = acc.compose(&Self::factor(arity, *f)?)?,
                }
            }
            for a in mirrors {
                acc = acc.compose(&Self::factor(arity, Factor::X(a))?)?.scale(&-GaussRational::one());
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    fn factor(arity: usize, f: Factor) -> Result<Self, AlgebraError> {
        let mut x = vec![0; arity];
        let mut d = vec![0; arity];
        match f {
            Factor::X(a) | Factor::Mirror(a) => x[a] = 1,
            Factor::D(a) => d[a] = 1,
        }
        Self::monomial(arity, GaussRational::one(), &x, &d)
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_arity(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.scale(&-GaussRational::one()))
    }

    pub fn scale(&self, k: &GaussRational) -> Self {
        let mut out = Self { arity: self.arity, terms: BTreeMap::new() };
        for (key, c) in &self.terms {
            out.add_term(key.clone(), c * k);
        }
        out
    }

    /// Operator product `self * other` (other acts first), normal-ordered.
    pub fn compose(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_arity(other)?;
        let mut out = Self { arity: self.arity, terms: BTreeMap::new() };
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let c = c1 * c2;
                let mut partial: Vec<(BigInt, Vec<u32>, Vec<u32>)> = vec![(BigInt::one(), vec![], vec![])];
                for axis in 0..self.arity {
                    let pieces = reorder_axis(k1.x[axis], k1.d[axis], k2.x[axis], k2.d[axis]);
                    let mut next = Vec::with_capacity(partial.len() * pieces.len());
                    for (m, xs, ds) in &partial {
                        for (m2, xp, dp) in &pieces {
                            let mut xs = xs.clone();
                            let mut ds = ds.clone();
                            xs.push(*xp);
                            ds.push(*dp);
                            next.push((m * m2, xs, ds));
                        }
                    }
                    partial = next;
                }
                for (m, x, d) in partial {
                    out.add_term(OpKey { x, d }, c.scale(&BigRational::from_integer(m)));
                }
            }
        }
        Ok(out)
    }

    /// `P op P` with `P: x -> -x`, i.e. every term picks up `(-1)^(|x|+|d|)`.
    pub fn parity_conjugate(&self) -> Self {
        let mut out = Self { arity: self.arity, terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            let deg: u32 = k.x.iter().sum::<u32>() + k.d.iter().sum::<u32>();
            out.add_term(k.clone(), if deg % 2 == 1 { -c.clone() } else { c.clone() });
        }
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = Self { arity: self.arity, terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.conj());
        }
        out
    }

    /// Operator with only the real parts of the coefficients.
    pub fn real_part(&self) -> Self {
        let mut out = Self { arity: self.arity, terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            out.add_term(k.clone(), GaussRational::real(c.re.clone()));
        }
        out
    }

    /// Operator with the imaginary parts as (real) coefficients.
    pub fn imag_part(&self) -> Self {
        let mut out = Self { arity: self.arity, terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            out.add_term(k.clone(), GaussRational::real(c.im.clone()));
        }
        out
    }

    /// Acts on `s(r) e^{-r^2/2}` and returns the polynomial factor of the result,
    /// i.e. applies `e^{r^2/2} op e^{-r^2/2}` where each `D` becomes `D - x`.
    pub fn apply_gaussian(&self, s: &HermiteSeries) -> Result<HermiteSeries, AlgebraError> {
        if s.arity() != self.arity {
            return Err(AlgebraError::ArityMismatch { left: self.arity, right: s.arity() });
        }
        let mut out = HermiteSeries::zero(self.arity)?;
        for (k, c) in &self.terms {
            let mut t = s.clone();
            for axis in 0..self.arity {
                for _ in 0..k.d[axis] {
                    t = t.lowered_derivative(axis)?;
                }
            }
            t = t.mul_monomial(&k.x)?;
            out = out.add(&t.scale(c))?;
        }
        Ok(out)
    }

    /// Plain action on a polynomial in the monomial basis.
    pub fn apply_polynomial(&self, p: &MonomialPoly) -> Result<MonomialPoly, AlgebraError> {
        if p.arity() != self.arity {
            return Err(AlgebraError::ArityMismatch { left: self.arity, right: p.arity() });
        }
        let mut out = MonomialPoly::zero(self.arity)?;
        for (k, c) in &self.terms {
            let mut t = p.clone();
            for axis in 0..self.arity {
                for _ in 0..k.d[axis] {
                    t = t.differentiate(axis)?;
                }
                for _ in 0..k.x[axis] {
                    t = t.mul_x(axis)?;
                }
            }
            let merged: Vec<(MultiIndex, GaussRational)> = out
                .terms()
                .map(|(e, v)| (e.clone(), v.clone()))
                .chain(t.terms().map(|(e, v)| (e.clone(), v * c)))
                .collect();
            out = MonomialPoly::from_terms(self.arity, merged)?;
        }
        Ok(out)
    }
}

fn axis_name(arity: usize, axis: usize) -> &'static str {
    if arity == 1 {
        "x"
    } else {
        ["x", "y", "z"][axis]
    }
}

fn fmt_key(arity: usize, k: &OpKey) -> String {
    let mut parts = Vec::new();
    for a in 0..arity {
        match k.x[a] {
            0 => {}
            1 => parts.push(axis_name(arity, a).to_string()),
            p => parts.push(format!("{}^{}", axis_name(arity, a), p)),
        }
    }
    for a in 0..arity {
        match k.d[a] {
            0 => {}
            1 => parts.push(format!("D{}", axis_name(arity, a))),
            p => parts.push(format!("D{}^{}", axis_name(arity, a), p)),
        }
    }
    parts.join("*")
}

fn fmt_real_coeff(r: &BigRational, body: &str, first: bool) -> String {
    let sign = if r.is_negative() {
        if first {
            "-".to_string()
        } else {
            " - ".to_string()
        }
    } else if first {
        String::new()
    } else {
        " + ".to_string()
    };
    let mag = r.abs();
    if body.is_empty() {
        format!("{sign}{}", fmt_ratio(&mag))
    } else if mag.is_one() {
        format!("{sign}{body}")
    } else {
        format!("{sign}{}*{body}", fmt_ratio(&mag))
    }
}

impl DiffOp {
    /// Canonical text for an operator whose coefficients are all real.
    /// Returns `None` if any coefficient has an imaginary part.
    pub fn real_text(&self) -> Option<String> {
        if self.terms.values().any(|c| !c.is_real()) {
            return None;
        }
        if self.terms.is_empty() {
            return Some("0".into());
        }
        let mut keys: Vec<&OpKey> = self.terms.keys().collect();
        keys.sort_by_key(|k| std::cmp::Reverse(k.d.iter().sum::<u32>() * 100 + k.x.iter().sum::<u32>()));
        let mut out = String::new();
        for (i, k) in keys.into_iter().enumerate() {
            out.push_str(&fmt_real_coeff(&self.terms[k].re, &fmt_key(self.arity, k), i == 0));
        }
        Some(out)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(t) = self.real_text() {
            return write!(f, "{t}");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(k, c)| format!("({})*{}", c, fmt_key(self.arity, k))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::super::gauss::{int, rat};
    use super::super::monomial::to_monomials;
    use super::*;

    fn one() -> GaussRational {
        GaussRational::one()
    }

    #[test]
    fn d_then_x_reorders() {
        let op = DiffOp::normal_order(1, &[Word::new(one(), vec![Factor::D(0), Factor::X(0)])]).unwrap();
        assert_eq!(op.coefficient(&[0], &[0]), one());
        assert_eq!(op.coefficient(&[1], &[1]), one());
        let already = DiffOp::normal_order(1, &[Word::new(one(), vec![Factor::X(0), Factor::D(0)])]).unwrap();
        assert_eq!(already, DiffOp::monomial(1, one(), &[1], &[1]).unwrap());
    }

    #[test]
    fn x_d_x_reorders() {
        let two = GaussRational::from(2);
        let op = DiffOp::normal_order(1, &[Word::new(two.clone(), vec![Factor::X(0), Factor::D(0), Factor::X(0)])])
            .unwrap();
        assert_eq!(op.coefficient(&[1], &[0]), two);
        assert_eq!(op.coefficient(&[2], &[1]), two);
        assert_eq!(op.terms().count(), 2);
        // same action on x, x^2, x^3
        for k in 1..=3u32 {
            let p = MonomialPoly::from_terms(1, [(MultiIndex::new(&[k]), one())]).unwrap();
            let direct = p.mul_x(0).unwrap().differentiate(0).unwrap().mul_x(0).unwrap().scale(&two);
            assert_eq!(op.apply_polynomial(&p).unwrap(), direct);
        }
    }

    #[test]
    fn mirror_becomes_negated_rightmost_coordinate() {
        let op = DiffOp::normal_order(1, &[Word::new(one(), vec![Factor::X(0), Factor::Mirror(0), Factor::D(0)])])
            .unwrap();
        // x * D * (-x) = -x - x^2 D
        assert_eq!(op.coefficient(&[1], &[0]), -one());
        assert_eq!(op.coefficient(&[2], &[1]), -one());
    }

    #[test]
    fn gaussian_conjugated_derivative() {
        // e^{x^2/2} D e^{-x^2/2} H_1 = H_0 - H_2/2
        let d = DiffOp::monomial(1, one(), &[0], &[1]).unwrap();
        let s = d.apply_gaussian(&HermiteSeries::basis(&[1]).unwrap()).unwrap();
        assert_eq!(s.coefficient(&[0]), one());
        assert_eq!(s.coefficient(&[2]), GaussRational::real(rat(-1, 2)));
    }

    #[test]
    fn gaussian_action_matches_monomial_action() {
        // (D - x) on H_3 computed two ways
        let op = DiffOp::monomial(1, one(), &[0], &[1])
            .unwrap()
            .sub(&DiffOp::monomial(1, one(), &[1], &[0]).unwrap())
            .unwrap();
        let s = HermiteSeries::basis(&[3]).unwrap();
        let via_gauss = to_monomials(&DiffOp::monomial(1, one(), &[0], &[1]).unwrap().apply_gaussian(&s).unwrap());
        let via_poly = op.apply_polynomial(&to_monomials(&s)).unwrap();
        assert_eq!(via_gauss, via_poly);
    }

    #[test]
    fn compose_is_associative_on_sample() {
        let a = DiffOp::monomial(2, one(), &[1, 2], &[2, 0]).unwrap();
        let b = DiffOp::monomial(2, GaussRational::i(), &[3, 0], &[1, 1]).unwrap();
        let c = DiffOp::monomial(2, GaussRational::real(int(5)), &[0, 1], &[0, 2]).unwrap();
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn text_form() {
        let op = DiffOp::normal_order(
            1,
            &[
                Word::new(GaussRational::real(rat(4, 3)), vec![Factor::D(0), Factor::D(0), Factor::D(0)]),
                Word::new(GaussRational::from(-2), vec![Factor::X(0), Factor::D(0), Factor::X(0)]),
            ],
        )
        .unwrap();
        assert_eq!(op.real_text().unwrap(), "4/3*Dx^3 - 2*x^2*Dx - 2*x");
    }
}
