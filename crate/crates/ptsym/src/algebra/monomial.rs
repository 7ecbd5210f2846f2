//! Dense-coefficient polynomials in the monomial basis and the exact change of
//! basis to and from Hermite products.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gauss::GaussRational;
use super::series::{check_arity, HermiteSeries, MultiIndex};
use super::AlgebraError;

/// `sum c_e x1^{e1} ... xk^{ek}`; keys are exponent tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialPoly {
    arity: usize,
    terms: BTreeMap<MultiIndex, GaussRational>,
}

/// Integer coefficients of `H_n` in powers of `x`, index `j` holding `x^j`.
pub fn hermite_coefficients(n: u32) -> Vec<BigInt> {
    let mut prev: Vec<BigInt> = vec![BigInt::one()];
    if n == 0 {
        return prev;
    }
    let mut cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::from(2)];
    for k in 1..n {
        let mut next = vec![BigInt::zero(); k as usize + 2];
        for (j, c) in cur.iter().enumerate() {
            next[j + 1] += c * 2;
        }
        for (j, c) in prev.iter().enumerate() {
            next[j] -= c * (2 * k);
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Hermite coefficients of `x^n`: `x^n = sum_m n!/(2^n m! (n-2m)!) H_{n-2m}`.
fn power_in_hermite(n: u32) -> Vec<(u32, BigRational)> {
    let fact = |k: u32| -> BigInt { (1..=k).fold(BigInt::one(), |a, b| a * b) };
    let two_n = BigInt::one() << n as usize;
    (0..=n / 2)
        .map(|m| {
            let c = BigRational::new(fact(n), &two_n * fact(m) * fact(n - 2 * m));
            (n - 2 * m, c)
        })
        .collect()
}

fn cartesian<T: Clone>(per_axis: &[Vec<(u32, T)>], mul: impl Fn(&T, &T) -> T, one: T) -> Vec<(Vec<u32>, T)> {
    let mut acc: Vec<(Vec<u32>, T)> = vec![(Vec::new(), one)];
    for axis in per_axis {
        let mut next = Vec::with_capacity(acc.len() * axis.len());
        for (idx, c) in &acc {
            for (k, d) in axis {
                let mut i = idx.clone();
                i.push(*k);
                next.push((i, mul(c, d)));
            }
        }
        acc = next;
    }
    acc
}

impl MonomialPoly {
    pub fn zero(arity: usize) -> Result<Self, AlgebraError> {
        check_arity(arity)?;
        Ok(Self { arity, terms: BTreeMap::new() })
    }

    pub fn from_terms<I>(arity: usize, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (MultiIndex, GaussRational)>,
    {
        let mut p = Self::zero(arity)?;
        for (e, c) in terms {
            if e.arity() != arity {
                return Err(AlgebraError::ArityMismatch { left: arity, right: e.arity() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &GaussRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> GaussRational {
        self.terms.get(&MultiIndex::new(exps)).cloned().unwrap_or_else(GaussRational::zero)
    }

    fn add_term(&mut self, e: MultiIndex, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(GaussRational::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Multiply by `x_axis`.
    pub fn mul_x(&self, axis: usize) -> Result<Self, AlgebraError> {
        if axis >= self.arity {
            return Err(AlgebraError::AxisOutOfRange { axis, arity: self.arity });
        }
        let mut out = Self { arity: self.arity, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.add_term(e.shifted(axis, 1).unwrap(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &GaussRational) -> Self {
        let mut out = Self { arity: self.arity, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn differentiate(&self, axis: usize) -> Result<Self, AlgebraError> {
        if axis >= self.arity {
            return Err(AlgebraError::AxisOutOfRange { axis, arity: self.arity });
        }
        let mut out = Self { arity: self.arity, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let k = e.get(axis);
            if k > 0 {
                out.add_term(e.shifted(axis, -1).unwrap(), c.scale(&BigRational::from_integer(k.into())));
            }
        }
        Ok(out)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> GaussRational {
        let mut acc = GaussRational::zero();
        for (e, c) in &self.terms {
            let mut m = BigRational::one();
            for (a, &k) in e.0.iter().enumerate() {
                for _ in 0..k {
                    m *= &point[a];
                }
            }
            acc += &c.scale(&m);
        }
        acc
    }
}

/// Expand a Hermite series in monomials.
pub fn to_monomials(s: &HermiteSeries) -> MonomialPoly {
    let mut out = MonomialPoly { arity: s.arity(), terms: BTreeMap::new() };
    let mut cache: BTreeMap<u32, Vec<(u32, BigRational)>> = BTreeMap::new();
    for (idx, c) in s.terms() {
        let per_axis: Vec<Vec<(u32, BigRational)>> = idx
            .0
            .iter()
            .map(|&n| {
                cache
                    .entry(n)
                    .or_insert_with(|| {
                        hermite_coefficients(n)
                            .into_iter()
                            .enumerate()
                            .filter(|(_, v)| !v.is_zero())
                            .map(|(j, v)| (j as u32, BigRational::from_integer(v)))
                            .collect()
                    })
                    .clone()
            })
            .collect();
        for (e, k) in cartesian(&per_axis, |a, b| a * b, BigRational::one()) {
            out.add_term(MultiIndex(e), c.scale(&k));
        }
    }
    out
}

/// Re-express a monomial polynomial in the Hermite basis.
pub fn from_monomials(p: &MonomialPoly) -> HermiteSeries {
    let mut out = HermiteSeries::zero(p.arity).expect("arity validated on construction");
    let mut cache: BTreeMap<u32, Vec<(u32, BigRational)>> = BTreeMap::new();
    for (e, c) in &p.terms {
        let per_axis: Vec<Vec<(u32, BigRational)>> =
            e.0.iter().map(|&n| cache.entry(n).or_insert_with(|| power_in_hermite(n)).clone()).collect();
        for (idx, k) in cartesian(&per_axis, |a, b| a * b, BigRational::one()) {
            out.add_term(MultiIndex(idx), c.scale(&k));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::gauss::{int, rat};
    use super::*;

    #[test]
    fn h2_in_monomials() {
        let m = to_monomials(&HermiteSeries::basis(&[2]).unwrap());
        assert_eq!(m.coefficient(&[2]), GaussRational::from(4));
        assert_eq!(m.coefficient(&[0]), GaussRational::from(-2));
    }

    #[test]
    fn cube_in_hermite() {
        let p = MonomialPoly::from_terms(1, [(MultiIndex::new(&[3]), GaussRational::from(1))]).unwrap();
        let s = from_monomials(&p);
        assert_eq!(s.coefficient(&[3]), GaussRational::real(rat(1, 8)));
        assert_eq!(s.coefficient(&[1]), GaussRational::real(rat(3, 4)));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn recurrence_consistency_to_thirty() {
        for n in 0..=30u32 {
            let h = to_monomials(&HermiteSeries::basis(&[n]).unwrap());
            let two_x_h = h.mul_x(0).unwrap().scale(&GaussRational::from(2));
            let lhs = from_monomials(&two_x_h);
            let mut rhs = HermiteSeries::basis(&[n + 1]).unwrap();
            if n > 0 {
                rhs = rhs.add(&HermiteSeries::basis(&[n - 1]).unwrap().scale_rational(&int(2 * n as i64))).unwrap();
            }
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn evaluation_at_rational_point() {
        let m = to_monomials(&HermiteSeries::basis(&[3, 1]).unwrap());
        // H3(1/2) = 8/8 - 12/2 = -5, H1(2) = 4
        let v = m.eval(&[rat(1, 2), int(2)]);
        assert_eq!(v, GaussRational::from(-20));
    }
}
