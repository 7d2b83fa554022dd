//! Canonical text form.
//!
//! Terms are ordered by fiber degree (descending), then weight
//! (descending), then monomial (descending). Factors appear in canonical
//! variable order, and `t^(μ+1)·t*` is printed as `t^μ*w`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::chart::Chart;
use super::monomial::Monomial;
use super::spoly::SPoly;

fn t_factor(exp: &BigRational) -> Option<String> {
    if exp.is_zero() {
        None
    } else if exp.is_one() {
        Some("t".into())
    } else if exp.is_integer() && exp.is_positive() {
        Some(format!("t^{}", exp.numer()))
    } else {
        Some(format!("t^({exp})"))
    }
}

pub(crate) fn monomial_factors(m: &Monomial, chart: &Chart) -> Vec<String> {
    let mut out = Vec::new();
    let tstar = chart.t_star().ok();
    for v in chart.variables() {
        if Some(v.id()) == tstar || Some(v.id().0) == chart.t_slot() {
            continue;
        }
        match m.exponent(v.id()) {
            0 => {}
            1 => out.push(v.name().to_string()),
            e => out.push(format!("{}^{e}", v.name())),
        }
    }
    let has_tstar = tstar.is_some_and(|id| m.exponent(id) > 0);
    if has_tstar {
        if let Some(f) = t_factor(&(m.t_exponent() - BigRational::one())) {
            out.push(f);
        }
        out.push("w".into());
    } else if let Some(f) = t_factor(m.t_exponent()) {
        out.push(f);
    }
    out
}

/// Terms in printing order.
pub fn ordered_terms(p: &SPoly) -> Vec<(&Monomial, &BigRational)> {
    let chart = p.chart();
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by(|(a, _), (b, _)| {
        b.fiber_degree(chart)
            .cmp(&a.fiber_degree(chart))
            .then_with(|| b.weight(chart).cmp(&a.weight(chart)))
            .then_with(|| b.cmp(a))
    });
    terms
}

impl fmt::Display for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in ordered_terms(self).into_iter().enumerate() {
            let factors = monomial_factors(m, self.chart());
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Parity;
    use crate::rational::{frac, int};

    #[test]
    fn printing() {
        let c = Chart::from_coords("C", &[("x", Parity::Even), ("xi", Parity::Odd)], true).unwrap();
        let v = |n: &str| SPoly::named(&c, n).unwrap();
        assert_eq!(SPoly::zero(&c).to_string(), "0");
        let p = &(&v("x") * &v("x")).scale(&frac(3, 2)) - &v("xi");
        assert_eq!(p.to_string(), "3/2*x^2 - xi");
        let w = &v("t") * &v("#t");
        assert_eq!(w.to_string(), "w");
        let tw = &SPoly::t_pow(&c, frac(3, 2)).unwrap() * &v("#t");
        assert_eq!(tw.to_string(), "t^(1/2)*w");
        let neg = SPoly::t_pow(&c, int(-1)).unwrap() * v("#x");
        assert_eq!((-neg).to_string(), "-#x*t^(-1)");
        assert_eq!(SPoly::constant(&c, frac(-2, 3)).to_string(), "-2/3");
    }
}
