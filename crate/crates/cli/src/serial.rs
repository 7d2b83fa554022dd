//! JSON exchange format for polynomials.
//!
//! ```json
//! {"chart": {"name": "C", "coords": [{"name": "x", "parity": "even"}], "hatted": true},
//!  "terms": [{"coeff": "3/2", "exponents": {"x": 2, "#x": 1, "t": "1/2"}}]}
//! ```
//!
//! Factors of a term are multiplied in chart order (base coordinates,
//! fiber coordinates, `t`, `#t`), which fixes the sign of odd products.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use densilift_core::poly::ordered_terms;
use densilift_core::rational::{parse_rational, to_fraction_string};
use densilift_core::{BigRational, Chart, Error, Parity, Result, SPoly, VarId, VarKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordDescriptor {
    pub name: String,
    pub parity: Parity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartDescriptor {
    pub name: String,
    pub coords: Vec<CoordDescriptor>,
    #[serde(default)]
    pub hatted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Int(u32),
    Rational(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializedTerm {
    pub coeff: String,
    pub exponents: BTreeMap<String, Exponent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializedPoly {
    pub chart: ChartDescriptor,
    pub terms: Vec<SerializedTerm>,
}

pub fn describe_chart(chart: &Chart) -> ChartDescriptor {
    ChartDescriptor {
        name: chart.name().to_string(),
        coords: chart
            .base_coords()
            .iter()
            .map(|(name, parity)| CoordDescriptor { name: name.clone(), parity: *parity })
            .collect(),
        hatted: chart.is_hatted(),
    }
}

pub fn to_serialized(p: &SPoly) -> SerializedPoly {
    let chart = p.chart();
    let terms = ordered_terms(p)
        .into_iter()
        .map(|(m, c)| {
            let mut exponents = BTreeMap::new();
            for v in chart.variables() {
                if v.kind() == VarKind::T {
                    if !m.t_exponent().is_zero() {
                        exponents.insert(v.name().to_string(), Exponent::Rational(rational_text(m.t_exponent())));
                    }
                } else if m.exponent(v.id()) > 0 {
                    exponents.insert(v.name().to_string(), Exponent::Int(m.exponent(v.id())));
                }
            }
            SerializedTerm { coeff: rational_text(c), exponents }
        })
        .collect();
    SerializedPoly { chart: describe_chart(chart), terms }
}

fn rational_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        to_fraction_string(r)
    }
}

fn rational(text: &str) -> Result<BigRational> {
    parse_rational(text).ok_or_else(|| Error::Precondition(format!("`{text}` is not a rational number")))
}

pub fn from_serialized(s: &SerializedPoly) -> Result<SPoly> {
    let coords = s.chart.coords.iter().map(|c| (c.name.clone(), c.parity)).collect();
    let chart = Chart::new(s.chart.name.clone(), coords, s.chart.hatted)?;
    let mut out = SPoly::zero(&chart);
    for term in &s.terms {
        let mut factors: Vec<(VarId, u32)> = Vec::new();
        let mut t_exp = BigRational::from_integer(0.into());
        for (name, e) in &term.exponents {
            let id = chart.lookup(name).ok_or_else(|| Error::UnknownVariable(name.clone()))?;
            let var = chart.var(id)?;
            match (var.kind(), e) {
                (VarKind::T, Exponent::Int(n)) => t_exp = BigRational::from_integer((*n).into()),
                (VarKind::T, Exponent::Rational(r)) => t_exp = rational(r)?,
                (_, Exponent::Int(n)) => factors.push((id, *n)),
                (_, Exponent::Rational(r)) => {
                    return Err(Error::Precondition(format!("exponent `{r}` of `{name}` must be a natural number")))
                }
            }
        }
        factors.sort();
        let mut p = SPoly::from_factors(&chart, &[(rational(&term.coeff)?, factors)])?;
        if !t_exp.is_zero() {
            p = &p * &SPoly::t_pow(&chart, t_exp)?;
        }
        out = out + p;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use densilift_core::rational::frac;

    #[test]
    fn round_trip_with_odd_factors_and_rational_t() {
        let c = Chart::from_coords("C", &[("x", Parity::Even), ("xi", Parity::Odd)], true).unwrap();
        let v = |n: &str| SPoly::named(&c, n).unwrap();
        let p = &(&v("#xi") * &v("xi")) * &v("#t") + (&v("x") * &v("#x")).scale(&frac(-3, 2));
        let p = &p * &SPoly::t_pow(&c, frac(1, 2)).unwrap();
        let ser = to_serialized(&p);
        let text = serde_json::to_string(&ser).unwrap();
        let back: SerializedPoly = serde_json::from_str(&text).unwrap();
        assert_eq!(from_serialized(&back).unwrap(), p);
        assert!(text.contains("\"t\":\"3/2\"") || text.contains("\"t\":\"1/2\""));
    }

    #[test]
    fn rejects_unknown_variables() {
        let text = r#"{"chart":{"name":"C","coords":[{"name":"x","parity":"even"}]},
                       "terms":[{"coeff":"1","exponents":{"y":1}}]}"#;
        let s: SerializedPoly = serde_json::from_str(text).unwrap();
        assert!(matches!(from_serialized(&s), Err(Error::UnknownVariable(_))));
    }
}
