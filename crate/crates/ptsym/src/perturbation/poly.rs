//! Univariate polynomials over the rationals with exact real-root isolation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::gauss::{fmt_ratio, ratio_to_f64};

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly(Vec<BigRational>);

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// `x - r`.
    pub fn linear(r: &BigRational) -> Self {
        Self::new(vec![-r.clone(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.leading();
        Self::new(self.0.iter().map(|c| c / &lead).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + ratio_to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0.iter().enumerate().skip(1).map(|(k, c)| c * BigRational::from_integer(BigInt::from(k))).collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self(vec![]);
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::from_ints(&[1]), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        Self::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z)).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.0.clone();
        let dd = d.degree();
        let lead = d.leading();
        if rem.len() < d.0.len() {
            return (Self(vec![]), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            for (j, dc) in d.0.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Clears denominators and content, leaving a primitive integer polynomial
    /// with positive leading coefficient.
    pub fn primitive(&self) -> Vec<BigInt> {
        let l = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if self.leading().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    /// Yun's square-free decomposition: returns `f_1, f_2, ...` with
    /// `monic(self) = prod f_i^i` and each `f_i` square-free and monic.
    pub fn square_free_parts(&self) -> Vec<Self> {
        let f = self.monic();
        if f.degree() == 0 {
            return vec![];
        }
        let mut out = Vec::new();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_rem(&a0).0;
        let mut c = fp.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        loop {
            let a = b.gcd(&d);
            out.push(a.clone());
            b = b.div_rem(&a).0;
            if b.degree() == 0 {
                break;
            }
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
        }
        while out.last().is_some_and(|p| p.degree() == 0) {
            out.pop();
        }
        out
    }

    fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(r.scale(&-BigRational::one()));
        }
        chain
    }

    fn cauchy_bound(&self) -> BigRational {
        let lead = self.leading().abs();
        let m = self.0.iter().take(self.degree()).map(|c| c.abs() / &lead).max().unwrap_or_else(BigRational::zero);
        m + BigRational::one()
    }

    /// Distinct real roots, each as an exact value or an isolating interval
    /// narrower than `width`. Exact values are found whenever a root is rational.
    pub fn real_roots(&self, width: &BigRational) -> Vec<RootValue> {
        let mut out = Vec::new();
        for part in self.square_free_parts_flat() {
            out.extend(part.isolate(width));
        }
        out.sort_by(|a, b| a.midpoint().partial_cmp(&b.midpoint()).unwrap());
        out
    }

    fn square_free_parts_flat(&self) -> Vec<Self> {
        self.square_free_parts().into_iter().filter(|p| p.degree() > 0).collect()
    }

    /// Root isolation for a square-free polynomial.
    pub fn isolate(&self, width: &BigRational) -> Vec<RootValue> {
        if self.degree() == 0 {
            return vec![];
        }
        let chain = self.sturm_chain();
        let variations = |x: &BigRational| -> usize {
            let signs: Vec<i8> = chain
                .iter()
                .map(|p| {
                    let v = p.eval(x);
                    if v.is_positive() {
                        1
                    } else if v.is_negative() {
                        -1
                    } else {
                        0
                    }
                })
                .filter(|s| *s != 0)
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let bound = self.cauchy_bound();
        let ints = self.primitive();
        let lead = ints.last().cloned().unwrap_or_else(BigInt::one).abs();
        // rational roots have denominators dividing the leading coefficient,
        // so they are separated by at least 1/lead^2
        let sep = BigRational::new(BigInt::one(), &lead * &lead * 4);
        let target = if &sep < width { sep } else { width.clone() };
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        let two = BigRational::from_integer(2.into());
        while let Some((lo, hi)) = stack.pop() {
            // Sturm counts roots in (lo, hi]; the outer bound is never a root
            let count = variations(&lo) - variations(&hi);
            if count == 0 {
                continue;
            }
            if count == 1 && &hi - &lo < target {
                let cand = simplest_between(&lo, &hi);
                if self.eval(&cand).is_zero() {
                    out.push(RootValue::Exact(cand));
                } else if self.eval(&hi).is_zero() {
                    out.push(RootValue::Exact(hi));
                } else {
                    out.push(RootValue::Interval { lo, hi });
                }
                continue;
            }
            let mid = (&lo + &hi) / &two;
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        out
    }
}

/// The rational with the smallest denominator in `[lo, hi]`.
pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return BigRational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    let fl = lo.floor();
    if fl == *lo {
        return lo.clone();
    }
    if &fl + BigRational::one() <= *hi {
        return fl + BigRational::one();
    }
    // lo and hi share the integer part; recurse on reciprocals of the fractions
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// A real root, exact when rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootValue {
    Exact(BigRational),
    Interval { lo: BigRational, hi: BigRational },
}

impl RootValue {
    pub fn midpoint(&self) -> f64 {
        match self {
            RootValue::Exact(r) => ratio_to_f64(r),
            RootValue::Interval { lo, hi } => ratio_to_f64(&((lo + hi) / BigRational::from_integer(2.into()))),
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            RootValue::Exact(r) => Some(r),
            RootValue::Interval { .. } => None,
        }
    }
}

impl fmt::Display for RootValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootValue::Exact(r) => write!(f, "{}", fmt_ratio(r)),
            RootValue::Interval { lo, hi } => write!(f, "[{:.12}, {:.12}]", ratio_to_f64(lo), ratio_to_f64(hi)),
        }
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let body = match k {
                0 => fmt_ratio(&mag),
                _ => {
                    let var = if k == 1 { "B".to_string() } else { format!("B^{k}") };
                    if mag.is_one() {
                        var
                    } else {
                        format!("{}*{var}", fmt_ratio(&mag))
                    }
                }
            };
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(B I - W)` by the Faddeev-LeVerrier recursion.
pub fn characteristic_polynomial(w: &[Vec<BigRational>]) -> RatPoly {
    let n = w.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = W M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(W M_k)/k
        let mut next = matmul(w, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let wm = matmul(w, &m);
        let tr = (0..n).fold(BigRational::zero(), |acc, i| acc + &wm[i][i]);
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    RatPoly::new(coeffs)
}

fn matmul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    let t = &a[i][k] * &b[k][j];
                    out[i][j] += t;
                }
            }
        }
    }
    out
}

/// Basis of the rational nullspace of `a`, via reduced row echelon form.
pub fn nullspace(a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let rows = a.len();
    if rows == 0 {
        return vec![];
    }
    let cols = a[0].len();
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gauss::{int, rat};

    #[test]
    fn square_free_split() {
        // (x-1)^2 (x+2)
        let p = RatPoly::linear(&int(1)).pow(2).mul(&RatPoly::linear(&int(-2)));
        let parts = p.square_free_parts();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], RatPoly::linear(&int(-2)));
        assert_eq!(parts[1], RatPoly::linear(&int(1)));
    }

    #[test]
    fn rational_and_irrational_roots() {
        // (8x - 5)(x^2 - 2)
        let p = RatPoly::from_ints(&[-5, 8]).mul(&RatPoly::from_ints(&[-2, 0, 1]));
        let roots = p.real_roots(&rat(1, 1_000_000_000));
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[1], RootValue::Exact(rat(5, 8)));
        assert!((roots[2].midpoint() - 2f64.sqrt()).abs() < 1e-9);
        assert!(roots[0].exact().is_none());
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_between(&rat(3, 10), &rat(7, 20)), rat(1, 3));
        assert_eq!(simplest_between(&rat(-7, 20), &rat(-3, 10)), rat(-1, 3));
        assert_eq!(simplest_between(&rat(5, 2), &rat(7, 2)), int(3));
    }

    #[test]
    fn faddeev_leverrier_small() {
        let w = vec![vec![int(2), int(1)], vec![int(1), int(2)]];
        assert_eq!(characteristic_polynomial(&w), RatPoly::from_ints(&[3, -4, 1]));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = vec![vec![int(1), int(1), int(1)]; 3];
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!((v[0].clone() + &v[1] + &v[2]).is_zero());
        }
    }
}
