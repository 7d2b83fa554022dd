//! The canonical lift
//!
//! ```text
//! s(x, x*) |Dx|^λ  ↦  ŝ = s(x, x̂*) t^λ + 1/(1-λ) · t^{λ+1} t* · Δs(x, x̂*)      (λ ≠ 1)
//! ```
//!
//! from weighted functions on the odd cotangent bundle to functions on the
//! odd cotangent bundle of the algebra of densities, and the transformation
//! law of the hatted coordinates used to check that it is natural.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bracket::{antibracket, divergence};
use crate::error::{Error, Result};
use crate::poly::{Chart, Parity, SPoly, VarId};
use crate::rational::rational_pow;

/// `s · |Dx|^λ`: a polynomial on an unhatted chart together with a weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityElement {
    body: SPoly,
    weight: BigRational,
}

impl DensityElement {
    pub fn new(body: SPoly, weight: BigRational) -> Result<DensityElement> {
        if body.chart().is_hatted() {
            return Err(Error::InvalidChart("density bodies live on unhatted charts".into()));
        }
        Ok(DensityElement { body, weight })
    }

    /// Weight-zero element (a multivector field).
    pub fn function(body: SPoly) -> Result<DensityElement> {
        DensityElement::new(body, BigRational::zero())
    }

    pub fn body(&self) -> &SPoly {
        &self.body
    }

    pub fn weight(&self) -> &BigRational {
        &self.weight
    }

    pub fn chart(&self) -> &Chart {
        self.body.chart()
    }

    /// Pullback of `s |Dx|^λ` along a coordinate change: the body is
    /// rewritten in the new coordinates and multiplied by `|J|^λ`.
    pub fn pullback(&self, change: &CoordinateChange) -> Result<DensityElement> {
        let body = change.pullback_function(&self.body)?;
        let k = rational_pow(&change.jac_det.abs(), &self.weight)
            .ok_or_else(|| Error::IrrationalPower(format!("|{}|^({})", change.jac_det, self.weight)))?;
        DensityElement::new(body.scale(&k), self.weight.clone())
    }
}

fn check_weight(w: &BigRational) -> Result<()> {
    if w.is_one() {
        Err(Error::WeightOne(w.clone()))
    } else {
        Ok(())
    }
}

/// The canonical lift of `s`; it lives on the hatted version of the chart.
pub fn lift(s: &DensityElement) -> Result<SPoly> {
    let lambda = s.weight();
    check_weight(lambda)?;
    let hatted = s.chart().hatted();
    let ts = SPoly::var(&hatted, hatted.t_star()?)?;
    let body = s.body.to_chart(&hatted)?;
    let leading = if lambda.is_zero() { body } else { body.mul_t_pow(lambda)? };
    let div = divergence(&s.body).to_chart(&hatted)?;
    if div.is_zero() {
        return Ok(leading);
    }
    let factor = (BigRational::one() - lambda).recip();
    let correction = (&ts * &div).mul_t_pow(&(lambda + BigRational::one()))?.scale(&factor);
    Ok(leading + correction)
}

/// `(ŝ, û) - ((s,u))^` with the base bracket taken at weight `λ + μ`.
///
/// Vanishes for `λ = μ = 0`. For other weights the `(t, t*)` part of the
/// bracket contributes; see [`lifted_bracket_base`].
pub fn lift_commutes_check(s: &DensityElement, u: &DensityElement) -> Result<SPoly> {
    let sum = s.weight() + u.weight();
    check_weight(s.weight())?;
    check_weight(u.weight())?;
    check_weight(&sum)?;
    let base = DensityElement::new(antibracket(s.body(), u.body())?, sum)?;
    Ok(antibracket(&lift(s)?, &lift(u)?)? - lift(&base)?)
}

/// The projection of `(ŝ, û)`:
/// `(s,u) + (-1)^{s̃} λ/(1-μ) s·Δu + μ/(1-λ) Δs·u` at weight `λ + μ`.
///
/// `(ŝ, û)` is `δ`-closed, so it is the lift of this element.
pub fn lifted_bracket_base(s: &DensityElement, u: &DensityElement) -> Result<DensityElement> {
    let (lambda, mu) = (s.weight(), u.weight());
    let sum = lambda + mu;
    check_weight(lambda)?;
    check_weight(mu)?;
    check_weight(&sum)?;
    let one = BigRational::one();
    let mut body = antibracket(s.body(), u.body())?;
    if !lambda.is_zero() {
        let c = lambda / (&one - mu);
        let c = if s.body().homogeneous_parity()?.is_odd() { -c } else { c };
        body = body + (s.body() * &divergence(u.body())).scale(&c);
    }
    if !mu.is_zero() {
        body = body + (&divergence(s.body()) * u.body()).scale(&(mu / (&one - lambda)));
    }
    DensityElement::new(body, sum)
}

/// `(ŝ, û) - lift(lifted_bracket_base(s, u))`; zero for all admissible weights.
pub fn lift_bracket_residual(s: &DensityElement, u: &DensityElement) -> Result<SPoly> {
    let base = lifted_bracket_base(s, u)?;
    Ok(antibracket(&lift(s)?, &lift(u)?)? - lift(&base)?)
}

fn det(m: &[Vec<SPoly>], chart: &Chart) -> SPoly {
    match m.len() {
        0 => SPoly::one(chart),
        1 => m[0][0].clone(),
        n => {
            let mut acc = SPoly::zero(chart);
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<SPoly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = &m[0][col] * &det(&minor, chart);
                acc = if col % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// An invertible polynomial change of even coordinates with constant
/// Jacobian determinant.
///
/// `forward[a]` expresses the old coordinate `x^a` as a polynomial in the
/// new coordinates and `inverse[a]` expresses the new coordinate `x'^a` in
/// the old ones. Old and new coordinates share the chart's names.
#[derive(Debug, Clone)]
pub struct CoordinateChange {
    chart: Chart,
    forward: Vec<SPoly>,
    inverse: Vec<SPoly>,
    jac_det: BigRational,
    /// `∂x'^b/∂x^a` written in the new coordinates, indexed `[a][b]`.
    inverse_jacobian: Vec<Vec<SPoly>>,
    /// `Σ_{a,c} ∂_{b'c'} x^a · ∂_a x^{c'}` (the `w*` coefficient in the law
    /// for `x̂*`), indexed by `b`.
    log_jacobian: Vec<SPoly>,
}

impl CoordinateChange {
    pub fn new(chart: &Chart, forward: Vec<SPoly>, inverse: Vec<SPoly>) -> Result<CoordinateChange> {
        let chart = chart.unhatted();
        let n = chart.n_base();
        if chart.base_coords().iter().any(|(_, p)| *p == Parity::Odd) {
            return Err(Error::InvalidChange("only even coordinates are supported".into()));
        }
        if forward.len() != n || inverse.len() != n {
            return Err(Error::InvalidChange(format!("expected {n} component polynomials")));
        }
        let forward = forward.iter().map(|p| p.to_chart(&chart)).collect::<Result<Vec<_>>>()?;
        let inverse = inverse.iter().map(|p| p.to_chart(&chart)).collect::<Result<Vec<_>>>()?;
        for p in forward.iter().chain(&inverse) {
            if !p.fiber_degree_of().matches(&0) {
                return Err(Error::InvalidChange(format!("component {p} involves fiber coordinates")));
            }
        }
        let subst = |map: &[SPoly]| -> BTreeMap<VarId, SPoly> {
            map.iter().enumerate().map(|(i, p)| (chart.base(i), p.clone())).collect()
        };
        for i in 0..n {
            let x = SPoly::var(&chart, chart.base(i))?;
            if forward[i].substitute(&subst(&inverse))? != x || inverse[i].substitute(&subst(&forward))? != x {
                return Err(Error::InvalidChange("forward and inverse maps are not mutually inverse".into()));
            }
        }
        let jac: Vec<Vec<SPoly>> = forward.iter().map(|f| (0..n).map(|b| f.dl(chart.base(b))).collect()).collect();
        let d = det(&jac, &chart);
        let jac_det = match d.terms().next() {
            None => return Err(Error::InvalidChange("Jacobian determinant vanishes".into())),
            Some((m, c)) if d.len() == 1 && m.is_one() => c.clone(),
            _ => return Err(Error::InvalidChange(format!("Jacobian determinant {d} is not constant"))),
        };
        let to_new = subst(&forward);
        let inverse_jacobian = (0..n)
            .map(|a| (0..n).map(|b| inverse[b].dl(chart.base(a)).substitute(&to_new)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let log_jacobian = (0..n)
            .map(|b| {
                let mut acc = SPoly::zero(&chart);
                for (a, fa) in forward.iter().enumerate() {
                    let d_b = fa.dl(chart.base(b));
                    for (c, row) in inverse_jacobian[a].iter().enumerate() {
                        acc = acc + &d_b.dl(chart.base(c)) * row;
                    }
                }
                acc
            })
            .collect();
        Ok(CoordinateChange { chart, forward, inverse, jac_det, inverse_jacobian, log_jacobian })
    }

    pub fn identity(chart: &Chart) -> Result<CoordinateChange> {
        let chart = chart.unhatted();
        let xs = (0..chart.n_base()).map(|i| SPoly::var(&chart, chart.base(i))).collect::<Result<Vec<_>>>()?;
        CoordinateChange::new(&chart, xs.clone(), xs)
    }

    /// `x = A x' + b` for an invertible rational matrix `A`.
    pub fn affine(chart: &Chart, a: &[Vec<BigRational>], shift: &[BigRational]) -> Result<CoordinateChange> {
        let chart = chart.unhatted();
        let n = chart.n_base();
        if a.len() != n || a.iter().any(|r| r.len() != n) || shift.len() != n {
            return Err(Error::InvalidChange(format!("expected an {n}x{n} matrix and {n} offsets")));
        }
        let inv = crate::linalg::inverse(a).ok_or_else(|| Error::InvalidChange("linear part is singular".into()))?;
        let xs = (0..n).map(|i| SPoly::var(&chart, chart.base(i))).collect::<Result<Vec<_>>>()?;
        let apply = |m: &[Vec<BigRational>], off: &[BigRational]| -> Vec<SPoly> {
            (0..n)
                .map(|i| {
                    let mut acc = SPoly::constant(&chart, off[i].clone());
                    for (j, x) in xs.iter().enumerate() {
                        acc = acc + x.scale(&m[i][j]);
                    }
                    acc
                })
                .collect()
        };
        // x' = A⁻¹ (x - b)
        let inv_shift: Vec<BigRational> =
            (0..n).map(|i| -(0..n).map(|j| &inv[i][j] * &shift[j]).sum::<BigRational>()).collect();
        CoordinateChange::new(&chart, apply(a, shift), apply(&inv, &inv_shift))
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn forward(&self) -> &[SPoly] {
        &self.forward
    }

    pub fn inverse(&self) -> &[SPoly] {
        &self.inverse
    }

    /// Determinant of `∂x/∂x'`.
    pub fn jac_det(&self) -> &BigRational {
        &self.jac_det
    }

    /// The correction coefficients of the `x̂*` law.
    pub fn log_jacobian(&self) -> &[SPoly] {
        &self.log_jacobian
    }

    /// Rewrites a function on the odd cotangent bundle (unhatted) in the
    /// new coordinates: `x^a ↦ F^a(x')`, `x*_a ↦ Σ_b ∂_a x^{b'} x*'_b`.
    pub fn pullback_function(&self, f: &SPoly) -> Result<SPoly> {
        let chart = &self.chart;
        let f = f.to_chart(chart)?;
        f.substitute(&self.images(chart, None)?)
    }

    fn images(&self, chart: &Chart, w: Option<&SPoly>) -> Result<BTreeMap<VarId, SPoly>> {
        let n = self.chart.n_base();
        let mut images = BTreeMap::new();
        for a in 0..n {
            images.insert(chart.base(a), self.forward[a].to_chart(chart)?);
            let mut fiber = SPoly::zero(chart);
            for b in 0..n {
                let mut mom = SPoly::var(chart, chart.fiber(b))?;
                if let Some(w) = w {
                    mom = mom - &self.log_jacobian[b].to_chart(chart)? * w;
                }
                fiber = fiber + &self.inverse_jacobian[a][b].to_chart(chart)? * &mom;
            }
            images.insert(chart.fiber(a), fiber);
        }
        Ok(images)
    }
}

/// Result of rewriting a hatted function in new coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transformed {
    pub poly: SPoly,
    /// The Jacobian determinant was negative and its absolute value used.
    pub orientation_reversed: bool,
}

/// Rewrites `S` on the hatted chart in the new coordinates of `change`:
/// `x ↦ F(x')`, `t ↦ |J| t'`, `t* ↦ t*'/|J|` (so `w*` is invariant) and
///
/// ```text
/// x̂*_a ↦ Σ_b ∂_a x^{b'} (x̂*'_b - Σ_{c,d} ∂_{b'c'} x^d ∂_d x^{c'} · w*)
/// ```
pub fn transform_hatted(s: &SPoly, change: &CoordinateChange, strict_orientation: bool) -> Result<Transformed> {
    let chart = s.chart();
    if !chart.is_hatted() || !chart.same_base(change.chart()) {
        return Err(Error::ChartMismatch {
            left: format!("{chart:?}"),
            right: format!("{:?}", change.chart().hatted()),
        });
    }
    let negative = change.jac_det.is_negative();
    if negative && strict_orientation {
        return Err(Error::Orientation(change.jac_det.clone()));
    }
    let j = change.jac_det.abs();
    let (t, ts) = (chart.t()?, chart.t_star()?);
    let w = &SPoly::var(chart, t)? * &SPoly::var(chart, ts)?;
    let mut images = change.images(chart, Some(&w))?;
    images.insert(t, SPoly::var(chart, t)?.scale(&j));
    images.insert(ts, SPoly::var(chart, ts)?.scale(&j.recip()));
    Ok(Transformed { poly: s.substitute(&images)?, orientation_reversed: negative })
}
