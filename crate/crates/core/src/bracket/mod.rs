//! The canonical odd bracket on the odd cotangent bundle, the divergence
//! operator, the canonical operator on the algebra of densities, and the
//! derived-bracket construction of r-ary brackets.
//!
//! Conventions (all derivatives act from the left):
//!
//! * `(f, g) = Σ (-1)^{ã+f̃+ãf̃} ∂_a f ∂_{a*} g + (-1)^{ã+ãf̃} ∂_{a*} f ∂_a g`,
//!   which is `(-1)^{f̃}` times the usual antibracket. In particular
//!   `(x, x*) = (x*, x) = 1` for an even coordinate.
//! * `Δ = Σ (-1)^{ã} ∂_{x^a} ∂_{x*_a}`.
//! * `δ = Δ + ∂_{t*}(∂_t - 2/t)`, and `δ(fg) = δf·g + (-1)^{f̃} f·δg + (f, g)`.
//!
//! The bracket signs are the unique survivor of an exhaustive search over a
//! candidate family; see [`pinning`].

mod convention;
pub mod identities;
pub mod pinning;

pub use convention::{SignConvention, TermSign};

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lift::DensityElement;
use crate::poly::{signed, Chart, Parity, SPoly};
use crate::rational::int;

fn same_chart(f: &SPoly, g: &SPoly) -> Result<()> {
    if f.chart() == g.chart() {
        Ok(())
    } else {
        Err(Error::ChartMismatch { left: format!("{:?}", f.chart()), right: format!("{:?}", g.chart()) })
    }
}

/// The canonical odd bracket. On hatted charts the `(t, t*)` pair
/// contributes like an even coordinate.
pub fn antibracket(f: &SPoly, g: &SPoly) -> Result<SPoly> {
    same_chart(f, g)?;
    Ok(SignConvention::PINNED.bracket(f, g))
}

fn laplacian_pairs(f: &SPoly, with_t: bool) -> SPoly {
    let chart = f.chart();
    let mut out = SPoly::zero(chart);
    for (q, qs, a) in chart.conjugate_pairs() {
        if !with_t && Some(q.0) == chart.t().ok().map(|t| t.0) {
            continue;
        }
        let d = f.dl(qs).dl(q);
        out = out + signed(a, d);
    }
    out
}

/// `Δ_{|Dx|} = Σ (-1)^{ã} ∂_{x^a} ∂_{x*_a}` over base coordinates only.
pub fn divergence(f: &SPoly) -> SPoly {
    laplacian_pairs(f, false)
}

/// `Δ` including the `(t, t*)` pair on hatted charts.
pub fn divergence_full(f: &SPoly) -> SPoly {
    laplacian_pairs(f, true)
}

/// `ρ⁻¹ Δ(f ρ)` for a unit density coefficient `ρ = c·t^μ`.
pub fn divergence_wrt(f: &SPoly, rho: &SPoly) -> Result<SPoly> {
    same_chart(f, rho)?;
    let (c, mu) = unit_density(rho)?;
    let prod = f.scale(&c).mul_t_pow_any(&mu)?;
    divergence_full(&prod).scale(&c.recip()).mul_t_pow_any(&-mu)
}

fn unit_density(rho: &SPoly) -> Result<(BigRational, BigRational)> {
    let mut it = rho.terms();
    if let (Some((m, c)), None) = (it.next(), it.next()) {
        if m.exponents().iter().all(|&e| e == 0) {
            return Ok((c.clone(), m.t_exponent().clone()));
        }
    }
    Err(Error::NonInvertibleDensity(rho.to_string()))
}

impl SPoly {
    pub(crate) fn mul_t_pow_any(&self, exp: &BigRational) -> Result<SPoly> {
        if exp.is_zero() {
            Ok(self.clone())
        } else {
            self.mul_t_pow(exp)
        }
    }
}

/// The canonical operator `δ = Δ_{|Dx|} + ∂_{t*}(∂_t - 2/t)`.
pub fn delta_op(f: &SPoly) -> Result<SPoly> {
    let chart = f.chart();
    let (t, ts) = (chart.t()?, chart.t_star()?);
    let dt = f.dl(t);
    let over_t = f.mul_t_pow(&-BigRational::one())?.scale(&int(2));
    let t_part = (dt - over_t).dl(ts);
    Ok(divergence(f) + t_part)
}

/// Sets `t*` to zero and splits by `t`-exponent. Components come back in
/// increasing weight, as densities over the unhatted chart.
pub fn project_base(s: &SPoly) -> Result<Vec<DensityElement>> {
    let chart = s.chart();
    let ts = chart.t_star()?;
    let base = chart.unhatted();
    let mut groups: BTreeMap<BigRational, SPoly> = BTreeMap::new();
    for (m, c) in s.terms() {
        if m.exponent(ts) > 0 {
            continue;
        }
        let lambda = m.t_exponent().clone();
        let stripped = m.with_t_exponent(BigRational::zero());
        let term = SPoly::monomial(chart, stripped, c.clone()).to_chart(&base)?;
        let slot = groups.entry(lambda).or_insert_with(|| SPoly::zero(&base));
        *slot = &*slot + &term;
    }
    groups.into_iter().map(|(lambda, body)| DensityElement::new(body, lambda)).collect()
}

/// Pullback along the zero section: every fiber variable (and `t*`) is set
/// to zero.
pub fn restrict_to_base(f: &SPoly) -> SPoly {
    let fibers: Vec<_> = f.chart().variables().iter().filter(|v| v.is_fiber()).map(|v| v.id()).collect();
    f.set_zero(&fibers)
}

/// Derived r-ary bracket `{f₁ ⋯ f_r} = i*(⋯((S, f₁), f₂)⋯, f_r)` with the
/// operators `(·, f)` acting from the right. With left derivatives this is
/// `i*(f_r, ⋯(f₂, (f₁, S))⋯)`; for even `S` the binary bracket then obeys
/// `{f,g} = (-1)^{(f̃+1)(g̃+1)} {g,f}`.
pub fn r_ary_bracket(s: &SPoly, args: &[SPoly]) -> Result<SPoly> {
    let mut acc = s.clone();
    for (i, f) in args.iter().enumerate() {
        same_chart(s, f)?;
        if !f.fiber_degree_of().matches(&0) {
            return Err(Error::NonzeroFiberDegree { index: i });
        }
        acc = antibracket(f, &acc)?;
    }
    Ok(restrict_to_base(&acc))
}

/// Parity of `{⋯}_{S,r}` as an operator: `S̃ + r`.
pub fn r_ary_operator_parity(s_parity: Parity, r: usize) -> Parity {
    s_parity + Parity::from_bit((r % 2) as u8)
}

/// Chart used by the convention tooling: two even and two odd base
/// coordinates.
pub fn reference_chart(hatted: bool) -> Chart {
    Chart::from_coords(
        "R",
        &[("x", Parity::Even), ("y", Parity::Even), ("xi", Parity::Odd), ("eta", Parity::Odd)],
        hatted,
    )
    .expect("valid chart")
}
