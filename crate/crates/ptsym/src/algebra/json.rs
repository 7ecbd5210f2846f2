//! Canonical JSON for series and operators. Rationals travel as `"p/q"` strings.

use serde::{Deserialize, Serialize};

use super::diffop::{DiffOp, OpKey};
use super::gauss::{fmt_ratio, parse_ratio, GaussRational};
use super::series::{HermiteSeries, MultiIndex};
use super::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub idx: Vec<u32>,
    pub re: String,
    pub im: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub arity: usize,
    pub terms: Vec<SeriesTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTerm {
    pub x: Vec<u32>,
    pub d: Vec<u32>,
    pub re: String,
    pub im: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpJson {
    pub arity: usize,
    pub terms: Vec<OpTerm>,
}

fn parse_coeff(re: &str, im: &str) -> Result<GaussRational, AlgebraError> {
    let re = parse_ratio(re).ok_or_else(|| AlgebraError::Malformed(re.to_string()))?;
    let im = parse_ratio(im).ok_or_else(|| AlgebraError::Malformed(im.to_string()))?;
    Ok(GaussRational::new(re, im))
}

impl From<&HermiteSeries> for SeriesJson {
    fn from(s: &HermiteSeries) -> Self {
        Self {
            arity: s.arity(),
            terms: s
                .terms()
                .map(|(i, c)| SeriesTerm { idx: i.0.clone(), re: fmt_ratio(&c.re), im: fmt_ratio(&c.im) })
                .collect(),
        }
    }
}

impl TryFrom<&SeriesJson> for HermiteSeries {
    type Error = AlgebraError;
    fn try_from(j: &SeriesJson) -> Result<Self, AlgebraError> {
        let terms = j
            .terms
            .iter()
            .map(|t| Ok((MultiIndex(t.idx.clone()), parse_coeff(&t.re, &t.im)?)))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        HermiteSeries::from_terms(j.arity, terms)
    }
}

impl From<&DiffOp> for OpJson {
    fn from(op: &DiffOp) -> Self {
        Self {
            arity: op.arity(),
            terms: op
                .terms()
                .map(|(k, c)| OpTerm { x: k.x.clone(), d: k.d.clone(), re: fmt_ratio(&c.re), im: fmt_ratio(&c.im) })
                .collect(),
        }
    }
}

impl TryFrom<&OpJson> for DiffOp {
    type Error = AlgebraError;
    fn try_from(j: &OpJson) -> Result<Self, AlgebraError> {
        let mut op = DiffOp::zero(j.arity)?;
        for t in &j.terms {
            let key = OpKey { x: t.x.clone(), d: t.d.clone() };
            op = op.add(&DiffOp::monomial(j.arity, parse_coeff(&t.re, &t.im)?, &key.x, &key.d)?)?;
        }
        Ok(op)
    }
}

pub fn series_to_json(s: &HermiteSeries) -> serde_json::Value {
    serde_json::to_value(SeriesJson::from(s)).expect("plain data serializes")
}

pub fn op_to_json(op: &DiffOp) -> serde_json::Value {
    serde_json::to_value(OpJson::from(op)).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gauss::rat;

    #[test]
    fn series_round_trip() {
        let s = HermiteSeries::basis(&[3, 0]).unwrap().scale(&GaussRational::new(rat(1, 24), rat(-3, 4)));
        let j = SeriesJson::from(&s);
        assert_eq!(j.terms[0].re, "1/24");
        assert_eq!(j.terms[0].im, "-3/4");
        let text = serde_json::to_string(&j).unwrap();
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(HermiteSeries::try_from(&back).unwrap(), s);
    }

    #[test]
    fn operator_round_trip() {
        let op = DiffOp::monomial(2, GaussRational::i(), &[1, 0], &[0, 2]).unwrap();
        let j = OpJson::from(&op);
        assert_eq!(DiffOp::try_from(&j).unwrap(), op);
    }

    #[test]
    fn bad_ratio_rejected() {
        let j = SeriesJson { arity: 1, terms: vec![SeriesTerm { idx: vec![0], re: "1/0".into(), im: "0".into() }] };
        assert!(HermiteSeries::try_from(&j).is_err());
    }
}
