//! Residuals of the identities the odd bracket and its generating operators
//! must satisfy. Each function returns the difference of the two sides; it
//! vanishes exactly when the identity holds. The bracket is a parameter so
//! the same code can screen candidate sign conventions.

use crate::error::Result;
use crate::poly::{signed, Parity, SPoly};

use super::{delta_op, divergence};

pub type Bracket<'a> = &'a dyn Fn(&SPoly, &SPoly) -> SPoly;

fn par(f: &SPoly) -> Result<Parity> {
    f.homogeneous_parity()
}

/// `(f,g) - (-1)^{f̃g̃} (g,f)`.
pub fn symmetry(br: Bracket, f: &SPoly, g: &SPoly) -> Result<SPoly> {
    let (pf, pg) = (par(f)?, par(g)?);
    let e = Parity::from_bit(pf.bit() & pg.bit());
    Ok(br(f, g) - signed(e, br(g, f)))
}

/// `(fg,h) - (-1)^{f̃} f(g,h) - (-1)^{g̃h̃} (f,h)g`.
pub fn leibniz(br: Bracket, f: &SPoly, g: &SPoly, h: &SPoly) -> Result<SPoly> {
    let (pf, pg, ph) = (par(f)?, par(g)?, par(h)?);
    let lhs = br(&(f * g), h);
    let first = signed(pf, f * &br(g, h));
    let second = signed(Parity::from_bit(pg.bit() & ph.bit()), &br(f, h) * g);
    Ok(lhs - first - second)
}

/// `(f,(g,h)) - (-1)^{f̃+1} ((f,g),h) - (-1)^{(f̃+1)(g̃+1)} (g,(f,h))`.
pub fn jacobi(br: Bracket, f: &SPoly, g: &SPoly, h: &SPoly) -> Result<SPoly> {
    let (pf, pg) = (par(f)?, par(g)?);
    let lhs = br(f, &br(g, h));
    let first = signed(pf.flip(), br(&br(f, g), h));
    let second = signed(Parity::from_bit(pf.flip().bit() & pg.flip().bit()), br(g, &br(f, h)));
    Ok(lhs - first - second)
}

/// The same identity written without the `(-1)^{f̃+1}` factor; kept to
/// document that this placement does not hold for the bracket in use.
pub fn jacobi_unsigned(br: Bracket, f: &SPoly, g: &SPoly, h: &SPoly) -> Result<SPoly> {
    let (pf, pg) = (par(f)?, par(g)?);
    let lhs = br(f, &br(g, h));
    let first = br(&br(f, g), h);
    let second = signed(Parity::from_bit(pf.flip().bit() & pg.flip().bit()), br(g, &br(f, h)));
    Ok(lhs - first - second)
}

/// `Δ(f,g) + (Δf,g) + (-1)^{f̃} (f,Δg)` with `Δ` over base coordinates.
pub fn divergence_derivation(br: Bracket, f: &SPoly, g: &SPoly) -> Result<SPoly> {
    let pf = par(f)?;
    Ok(divergence(&br(f, g)) + br(&divergence(f), g) + signed(pf, br(f, &divergence(g))))
}

/// `Δ(fg) - Δf·g - (-1)^{f̃} f·Δg - (f,g)`: `Δ` generates the bracket.
pub fn divergence_generates(br: Bracket, f: &SPoly, g: &SPoly) -> Result<SPoly> {
    let pf = par(f)?;
    Ok(divergence(&(f * g)) - &divergence(f) * g - signed(pf, f * &divergence(g)) - br(f, g))
}

/// `δ(fg) - δf·g - (-1)^{f̃} f·δg - (f,g)` on hatted charts.
pub fn delta_generates(br: Bracket, f: &SPoly, g: &SPoly) -> Result<SPoly> {
    let pf = par(f)?;
    Ok(delta_op(&(f * g))? - &delta_op(f)? * g - signed(pf, f * &delta_op(g)?) - br(f, g))
}

/// `{f,g} - (-1)^{(f̃+1)(g̃+1)} {g,f}` for the binary bracket derived from
/// an even `s`.
pub fn derived_antisymmetry(s: &SPoly, f: &SPoly, g: &SPoly) -> Result<SPoly> {
    let (pf, pg) = (par(f)?, par(g)?);
    let fg = super::r_ary_bracket(s, &[f.clone(), g.clone()])?;
    let gf = super::r_ary_bracket(s, &[g.clone(), f.clone()])?;
    Ok(fg - signed(Parity::from_bit(pf.flip().bit() & pg.flip().bit()), gf))
}

/// Graded Jacobi identity of the binary bracket derived from an even `s`
/// with `(s,s) = 0`:
/// `{f,{g,h}} - (-1)^{h̃}{{f,g},h} - (-1)^{f̃+g̃+f̃g̃}{g,{f,h}}`.
pub fn derived_jacobi(s: &SPoly, f: &SPoly, g: &SPoly, h: &SPoly) -> Result<SPoly> {
    let b = |a: &SPoly, c: &SPoly| super::r_ary_bracket(s, &[a.clone(), c.clone()]);
    let (pf, pg, ph) = (par(f)?, par(g)?, par(h)?);
    let lhs = b(f, &b(g, h)?)?;
    let first = signed(ph, b(&b(f, g)?, h)?);
    let second = signed(pf + pg + Parity::from_bit(pf.bit() & pg.bit()), b(g, &b(f, h)?)?);
    Ok(lhs - first - second)
}
