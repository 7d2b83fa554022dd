use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::chart::{Chart, Parity, VarId, VarKind};
use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::rational::rational_pow;

/// Common grade of all terms of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Grade<T> {
    /// The zero polynomial, homogeneous of every grade.
    Zero,
    Pure(T),
    Mixed,
}

impl<T: PartialEq> Grade<T> {
    pub fn matches(&self, value: &T) -> bool {
        match self {
            Grade::Zero => true,
            Grade::Pure(v) => v == value,
            Grade::Mixed => false,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        !matches!(self, Grade::Mixed)
    }

    /// The grade if the polynomial is nonzero and homogeneous.
    pub fn pure(self) -> Option<T> {
        match self {
            Grade::Pure(v) => Some(v),
            _ => None,
        }
    }

    fn collect<I: Iterator<Item = T>>(mut it: I) -> Grade<T> {
        let Some(first) = it.next() else {
            return Grade::Zero;
        };
        for g in it {
            if g != first {
                return Grade::Mixed;
            }
        }
        Grade::Pure(first)
    }
}

/// Supercommutative polynomial with exact rational coefficients, Laurent
/// (with rational exponents) in `t` on hatted charts.
///
/// The term map never stores zero coefficients and monomials are kept in
/// canonical order, so structural equality is equality of polynomials.
#[derive(Clone, PartialEq, Eq)]
pub struct SPoly {
    chart: Chart,
    terms: BTreeMap<Monomial, BigRational>,
}

fn accumulate(terms: &mut BTreeMap<Monomial, BigRational>, m: Monomial, c: BigRational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl SPoly {
    pub fn zero(chart: &Chart) -> SPoly {
        SPoly { chart: chart.clone(), terms: BTreeMap::new() }
    }

    pub fn one(chart: &Chart) -> SPoly {
        SPoly::constant(chart, BigRational::one())
    }

    pub fn constant(chart: &Chart, c: BigRational) -> SPoly {
        SPoly::monomial(chart, Monomial::one(chart.n_vars()), c)
    }

    pub fn monomial(chart: &Chart, m: Monomial, c: BigRational) -> SPoly {
        debug_assert_eq!(m.n_vars(), chart.n_vars());
        let mut terms = BTreeMap::new();
        accumulate(&mut terms, m, c);
        SPoly { chart: chart.clone(), terms }
    }

    pub fn var(chart: &Chart, id: VarId) -> Result<SPoly> {
        let v = chart.var(id)?;
        let m = match v.kind() {
            VarKind::T => Monomial::one(chart.n_vars()).with_t_exponent(BigRational::one()),
            _ => Monomial::one(chart.n_vars()).with_exponent(id, 1),
        };
        Ok(SPoly::monomial(chart, m, BigRational::one()))
    }

    /// Looks a variable up by name (`x`, `#x`, `t`, `#t`).
    pub fn named(chart: &Chart, name: &str) -> Result<SPoly> {
        let id = chart.lookup(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        SPoly::var(chart, id)
    }

    /// `t^exp` on a hatted chart.
    pub fn t_pow(chart: &Chart, exp: BigRational) -> Result<SPoly> {
        chart.t()?;
        let m = Monomial::one(chart.n_vars()).with_t_exponent(exp);
        Ok(SPoly::monomial(chart, m, BigRational::one()))
    }

    /// Builds a polynomial from raw terms, canonicalizing along the way.
    /// Each term lists `(variable, exponent)` factors in the order they are
    /// multiplied.
    pub fn from_factors(chart: &Chart, terms: &[(BigRational, Vec<(VarId, u32)>)]) -> Result<SPoly> {
        let mut out = SPoly::zero(chart);
        for (c, factors) in terms {
            let mut p = SPoly::constant(chart, c.clone());
            for &(id, e) in factors {
                p = &p * &SPoly::var(chart, id)?.pow(e);
            }
            out = &out + &p;
        }
        Ok(out)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&Monomial::one(self.chart.n_vars()))
    }

    pub(crate) fn from_map(chart: &Chart, terms: BTreeMap<Monomial, BigRational>) -> SPoly {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        SPoly { chart: chart.clone(), terms }
    }

    fn check_chart(&self, other: &SPoly) -> Result<()> {
        if self.chart == other.chart {
            Ok(())
        } else {
            Err(Error::ChartMismatch { left: format!("{:?}", self.chart), right: format!("{:?}", other.chart) })
        }
    }

    pub fn checked_add(&self, other: &SPoly) -> Result<SPoly> {
        self.check_chart(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut terms, m.clone(), c.clone());
        }
        Ok(SPoly { chart: self.chart.clone(), terms })
    }

    pub fn checked_sub(&self, other: &SPoly) -> Result<SPoly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &SPoly) -> Result<SPoly> {
        self.check_chart(other)?;
        let odd = self.chart.odd_mask();
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, neg)) = m1.mul(m2, odd) {
                    let c = c1 * c2;
                    accumulate(&mut terms, m, if neg { -c } else { c });
                }
            }
        }
        Ok(SPoly { chart: self.chart.clone(), terms })
    }

    pub fn scale(&self, c: &BigRational) -> SPoly {
        if c.is_zero() {
            return SPoly::zero(&self.chart);
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        SPoly { chart: self.chart.clone(), terms }
    }

    pub fn pow(&self, n: u32) -> SPoly {
        let mut acc = SPoly::one(&self.chart);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplies every term by `t^exp` (an even, central factor).
    pub fn mul_t_pow(&self, exp: &BigRational) -> Result<SPoly> {
        self.chart.t()?;
        let terms = self.terms.iter().map(|(m, c)| (m.with_t_exponent(m.t_exponent() + exp), c.clone())).collect();
        Ok(SPoly { chart: self.chart.clone(), terms })
    }

    fn derive(&self, id: VarId, left: bool) -> Result<SPoly> {
        self.chart.var(id)?;
        let odd = self.chart.odd_mask();
        let t_slot = self.chart.t_slot();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some((k, dm)) = m.derive(id, odd, t_slot, left) {
                accumulate(&mut terms, dm, c * k);
            }
        }
        Ok(SPoly { chart: self.chart.clone(), terms })
    }

    /// Derivative acting from the left: an odd variable is moved to the
    /// front (one sign per odd variable passed) and deleted.
    pub fn derive_left(&self, id: VarId) -> Result<SPoly> {
        self.derive(id, true)
    }

    /// Derivative acting from the right.
    pub fn derive_right(&self, id: VarId) -> Result<SPoly> {
        self.derive(id, false)
    }

    pub(crate) fn dl(&self, id: VarId) -> SPoly {
        self.derive(id, true).expect("variable of this chart")
    }

    pub fn parity_of(&self) -> Grade<Parity> {
        Grade::collect(self.terms.keys().map(|m| m.parity(&self.chart)))
    }

    pub fn weight_of(&self) -> Grade<BigRational> {
        Grade::collect(self.terms.keys().map(|m| m.weight(&self.chart)))
    }

    pub fn fiber_degree_of(&self) -> Grade<u32> {
        Grade::collect(self.terms.keys().map(|m| m.fiber_degree(&self.chart)))
    }

    /// Parity of a homogeneous polynomial; zero counts as even.
    pub fn homogeneous_parity(&self) -> Result<Parity> {
        match self.parity_of() {
            Grade::Zero => Ok(Parity::Even),
            Grade::Pure(p) => Ok(p),
            Grade::Mixed => Err(Error::Inhomogeneous(format!("mixed parity in {self}"))),
        }
    }

    /// Splits into even and odd parts (zero parts omitted).
    pub fn parity_parts(&self) -> Vec<(Parity, SPoly)> {
        let mut even = BTreeMap::new();
        let mut odd = BTreeMap::new();
        for (m, c) in &self.terms {
            match m.parity(&self.chart) {
                Parity::Even => even.insert(m.clone(), c.clone()),
                Parity::Odd => odd.insert(m.clone(), c.clone()),
            };
        }
        let mut parts = Vec::new();
        if !even.is_empty() {
            parts.push((Parity::Even, SPoly::from_map(&self.chart, even)));
        }
        if !odd.is_empty() {
            parts.push((Parity::Odd, SPoly::from_map(&self.chart, odd)));
        }
        parts
    }

    /// Keeps only the terms satisfying `keep`.
    pub fn filter_terms<F: Fn(&Monomial) -> bool>(&self, keep: F) -> SPoly {
        let terms = self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect();
        SPoly { chart: self.chart.clone(), terms }
    }

    /// Sets the listed variables to zero. `t` cannot be set to zero.
    pub fn set_zero(&self, vars: &[VarId]) -> SPoly {
        self.filter_terms(|m| vars.iter().all(|&v| m.exponent(v) == 0))
    }

    /// Re-reads the polynomial on another chart with the same base
    /// coordinates, e.g. moving between `x*` and the hatted `x̂*`.
    pub fn to_chart(&self, target: &Chart) -> Result<SPoly> {
        if !self.chart.same_base(target) {
            return Err(Error::ChartMismatch { left: format!("{:?}", self.chart), right: format!("{:?}", target) });
        }
        if self.chart.is_hatted() && !target.is_hatted() {
            let n = 2 * self.chart.n_base();
            if self.terms.keys().any(|m| !m.t_exponent().is_zero() || m.exponents()[n..].iter().any(|&e| e > 0)) {
                return Err(Error::UnexpectedDensityVariables);
            }
        }
        let terms = self.terms.iter().map(|(m, c)| (m.resized(target.n_vars()), c.clone())).collect();
        Ok(SPoly { chart: target.clone(), terms })
    }

    /// Simultaneous substitution of variables by polynomials.
    ///
    /// Images of odd variables must be odd and images of even variables
    /// even. `t` may only be sent to `c·t` with `c` a positive rational;
    /// then `t^λ` becomes `c^λ t^λ`, which must itself be rational.
    pub fn substitute(&self, images: &BTreeMap<VarId, SPoly>) -> Result<SPoly> {
        let chart = &self.chart;
        let t_slot = chart.t_slot();
        let mut t_scale: Option<BigRational> = None;
        for (id, img) in images {
            let v = chart.var(*id)?;
            self.check_chart(img)?;
            if Some(id.0) == t_slot {
                t_scale = Some(t_image_scale(img)?);
                continue;
            }
            if !img.parity_of().matches(&v.parity()) {
                return Err(Error::ParityMismatch(v.name().to_string()));
            }
        }
        let mut out = SPoly::zero(chart);
        for (m, c) in &self.terms {
            let mut term = SPoly::constant(chart, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let id = VarId(i);
                let factor = match images.get(&id) {
                    Some(img) => img.pow(e),
                    None => SPoly::var(chart, id)?.pow(e),
                };
                term = &term * &factor;
                if term.is_zero() {
                    break;
                }
            }
            if term.is_zero() {
                continue;
            }
            let lambda = m.t_exponent();
            if !lambda.is_zero() {
                if let Some(scale) = &t_scale {
                    let k = rational_pow(scale, lambda)
                        .ok_or_else(|| Error::IrrationalPower(format!("({scale})^({lambda})")))?;
                    term = term.scale(&k);
                }
                term = term.mul_t_pow(lambda)?;
            }
            out = &out + &term;
        }
        Ok(out)
    }
}

fn t_image_scale(img: &SPoly) -> Result<BigRational> {
    let chart = img.chart();
    let mut it = img.terms();
    if let (Some((m, c)), None) = (it.next(), it.next()) {
        let t = SPoly::t_pow(chart, BigRational::one())?;
        let (tm, _) = t.terms().next().expect("t is a monomial");
        if m == tm && c.is_positive() {
            return Ok(c.clone());
        }
    }
    Err(Error::NonInvertibleT(img.to_string()))
}

impl std::fmt::Debug for SPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SPoly[{}]({})", self.chart.name(), self)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&SPoly> for &SPoly {
            type Output = SPoly;

            /// Panics if the operands live on different charts; use the
            /// `checked_*` form to get an error instead.
            fn $method(self, rhs: &SPoly) -> SPoly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $trait<SPoly> for SPoly {
            type Output = SPoly;

            fn $method(self, rhs: SPoly) -> SPoly {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&SPoly> for SPoly {
            type Output = SPoly;

            fn $method(self, rhs: &SPoly) -> SPoly {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &SPoly {
    type Output = SPoly;

    fn neg(self) -> SPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        SPoly { chart: self.chart.clone(), terms }
    }
}

impl Neg for SPoly {
    type Output = SPoly;

    fn neg(self) -> SPoly {
        -&self
    }
}

/// `(-1)^p` times `f`.
pub fn signed(p: Parity, f: SPoly) -> SPoly {
    if p.is_odd() {
        -f
    } else {
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn chart() -> Chart {
        Chart::from_coords("C", &[("x", Parity::Even), ("xi", Parity::Odd), ("eta", Parity::Odd)], true).unwrap()
    }

    fn v(c: &Chart, name: &str) -> SPoly {
        SPoly::named(c, name).unwrap()
    }

    #[test]
    fn odd_square_vanishes() {
        let c = chart();
        let xi = v(&c, "xi");
        assert!((&xi * &xi).is_zero());
        // #x is odd as the partner of an even coordinate
        let px = v(&c, "#x");
        assert!((&px * &px).is_zero());
    }

    #[test]
    fn anticommutativity_and_centrality() {
        let c = chart();
        let (x, xi, eta) = (v(&c, "x"), v(&c, "xi"), v(&c, "eta"));
        assert_eq!(&xi * &eta, -(&eta * &xi));
        assert_eq!(&x * &xi, &xi * &x);
        // #xi is even, so it commutes with everything
        let pxi = v(&c, "#xi");
        assert_eq!(&pxi * &eta, &eta * &pxi);
        assert_eq!(pxi.pow(3).len(), 1);
    }

    #[test]
    fn derivative_examples() {
        let c = chart();
        let (x, xi, eta) = (v(&c, "x"), v(&c, "xi"), v(&c, "eta"));
        let x_id = c.lookup("x").unwrap();
        assert_eq!((&x * &x).derive_left(x_id).unwrap(), x.scale(&int(2)));
        let xe = &xi * &eta;
        assert_eq!(xe.derive_left(c.lookup("xi").unwrap()).unwrap(), eta);
        assert_eq!(xe.derive_left(c.lookup("eta").unwrap()).unwrap(), -&xi);
        let lambda = frac(-3, 2);
        let t_id = c.t().unwrap();
        let tl = SPoly::t_pow(&c, lambda.clone()).unwrap();
        let expected = SPoly::t_pow(&c, &lambda - int(1)).unwrap().scale(&lambda);
        assert_eq!(tl.derive_left(t_id).unwrap(), expected);
        assert!(SPoly::one(&c).derive_left(t_id).unwrap().is_zero());
        assert!(x.derive_left(VarId(99)).is_err());
    }

    #[test]
    fn grades() {
        let c = chart();
        let w = &v(&c, "t") * &v(&c, "#t");
        assert_eq!(w.weight_of(), Grade::Pure(int(0)));
        assert_eq!(w.parity_of(), Grade::Pure(Parity::Odd));
        assert_eq!(v(&c, "#x").parity_of(), Grade::Pure(Parity::Odd));
        let f = &v(&c, "#xi") * &v(&c, "#eta") + &v(&c, "#t") * &v(&c, "#xi");
        assert_eq!(f.fiber_degree_of(), Grade::Pure(2));
        assert_eq!((&v(&c, "x") + &v(&c, "xi")).parity_of(), Grade::Mixed);
        let z = SPoly::zero(&c);
        assert!(z.parity_of().matches(&Parity::Odd));
        assert!(z.weight_of().matches(&int(5)));
    }

    #[test]
    fn substitution_examples() {
        let c = chart();
        let (x, xi, eta) = (v(&c, "x"), v(&c, "xi"), v(&c, "eta"));
        let (xid, xiid) = (c.lookup("x").unwrap(), c.lookup("xi").unwrap());
        let one = SPoly::one(&c);
        let img = BTreeMap::from([(xid, &x + &one)]);
        assert_eq!((&x * &x).substitute(&img).unwrap(), &(&x * &x) + &(&x.scale(&int(2)) + &one));
        let img = BTreeMap::from([(xiid, eta.clone())]);
        assert!((&xi * &eta).substitute(&img).unwrap().is_zero());
        let fwd = BTreeMap::from([(xiid, &xi + &(&x * &eta))]);
        let inv = BTreeMap::from([(xiid, &xi - &(&x * &eta))]);
        assert_eq!(xi.substitute(&fwd).unwrap().substitute(&inv).unwrap(), xi);
        // parity violations and bad t images are rejected
        let bad = BTreeMap::from([(xiid, x.clone())]);
        assert!(matches!(xi.substitute(&bad), Err(Error::ParityMismatch(_))));
        let t_id = c.t().unwrap();
        let bad_t = BTreeMap::from([(t_id, &v(&c, "t") + &one)]);
        assert!(matches!(x.substitute(&bad_t), Err(Error::NonInvertibleT(_))));
        let half = SPoly::t_pow(&c, frac(1, 2)).unwrap();
        let scale_t = BTreeMap::from([(t_id, v(&c, "t").scale(&int(4)))]);
        assert_eq!(half.substitute(&scale_t).unwrap(), half.scale(&int(2)));
        let scale_t = BTreeMap::from([(t_id, v(&c, "t").scale(&int(2)))]);
        assert!(matches!(half.substitute(&scale_t), Err(Error::IrrationalPower(_))));
    }

    #[test]
    fn chart_mismatch_is_an_error() {
        let c = chart();
        let d = c.unhatted();
        assert!(SPoly::one(&c).checked_add(&SPoly::one(&d)).is_err());
        let moved = v(&d, "#x").to_chart(&c).unwrap();
        assert_eq!(moved, v(&c, "#x"));
        assert!(v(&c, "t").to_chart(&d).is_err());
    }
}
