use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::chart::{Chart, Parity, VarId};

/// A monomial in canonical order.
///
/// `exps[i]` is the exponent of variable `i`; odd variables only ever carry
/// 0 or 1 and are implicitly multiplied in increasing index order. The
/// slot of `t` is always zero; its (rational) exponent lives in `t_exp`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Box<[u32]>,
    t_exp: BigRational,
}

impl Monomial {
    pub fn one(n_vars: usize) -> Monomial {
        Monomial { exps: vec![0; n_vars].into_boxed_slice(), t_exp: BigRational::zero() }
    }

    pub(crate) fn from_parts(exps: Vec<u32>, t_exp: BigRational) -> Monomial {
        Monomial { exps: exps.into_boxed_slice(), t_exp }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, id: VarId) -> u32 {
        self.exps[id.0]
    }

    pub fn t_exponent(&self) -> &BigRational {
        &self.t_exp
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0) && self.t_exp.is_zero()
    }

    pub fn n_vars(&self) -> usize {
        self.exps.len()
    }

    pub(crate) fn with_exponent(&self, id: VarId, e: u32) -> Monomial {
        let mut m = self.clone();
        m.exps[id.0] = e;
        m
    }

    pub(crate) fn with_t_exponent(&self, e: BigRational) -> Monomial {
        Monomial { exps: self.exps.clone(), t_exp: e }
    }

    pub(crate) fn resized(&self, n_vars: usize) -> Monomial {
        let mut exps = vec![0; n_vars];
        let k = n_vars.min(self.exps.len());
        exps[..k].copy_from_slice(&self.exps[..k]);
        Monomial { exps: exps.into_boxed_slice(), t_exp: self.t_exp.clone() }
    }

    pub fn parity(&self, chart: &Chart) -> Parity {
        let odd = chart.odd_mask();
        let count = self.exps.iter().zip(odd).filter(|(&e, &o)| o && e > 0).count();
        Parity::from_bit((count & 1) as u8)
    }

    pub fn fiber_degree(&self, chart: &Chart) -> u32 {
        chart.variables().iter().filter(|v| v.is_fiber()).map(|v| self.exps[v.id().0]).sum()
    }

    /// `t`-exponent minus the `t*`-exponent.
    pub fn weight(&self, chart: &Chart) -> BigRational {
        let tstar = match chart.t_star() {
            Ok(id) => self.exps[id.0],
            Err(_) => 0,
        };
        &self.t_exp - BigRational::from_integer(BigInt::from(tstar))
    }

    /// Total degree in the even base coordinates.
    pub fn even_base_degree(&self, chart: &Chart) -> u32 {
        (0..chart.n_base()).filter(|&i| !chart.odd_mask()[i]).map(|i| self.exps[i]).sum()
    }

    /// Product in canonical order. Returns `None` when an odd variable
    /// would be squared, otherwise the product and whether the Koszul sign
    /// is negative.
    pub fn mul(&self, other: &Monomial, odd: &[bool]) -> Option<(Monomial, bool)> {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let mut exps = Vec::with_capacity(self.exps.len());
        // Number of transpositions: odd variables of `other` moved past
        // larger-index odd variables of `self`.
        let mut swaps = 0usize;
        let mut other_odd_seen = 0usize;
        for i in 0..self.exps.len() {
            let (a, b) = (self.exps[i], other.exps[i]);
            if odd[i] {
                if a > 0 && b > 0 {
                    return None;
                }
                if a > 0 {
                    swaps += other_odd_seen;
                }
                if b > 0 {
                    other_odd_seen += 1;
                }
            }
            exps.push(a + b);
        }
        let t_exp = &self.t_exp + &other.t_exp;
        Some((Monomial { exps: exps.into_boxed_slice(), t_exp }, swaps % 2 == 1))
    }

    /// Number of odd variables present with index below `id`.
    fn odd_before(&self, id: VarId, odd: &[bool]) -> usize {
        (0..id.0).filter(|&i| odd[i] && self.exps[i] > 0).count()
    }

    fn odd_after(&self, id: VarId, odd: &[bool]) -> usize {
        (id.0 + 1..self.exps.len()).filter(|&i| odd[i] && self.exps[i] > 0).count()
    }

    /// Derivative with respect to `id`, acting from the left or from the
    /// right. `t_slot` is the index of `t`, whose exponent is rational.
    pub(crate) fn derive(
        &self,
        id: VarId,
        odd: &[bool],
        t_slot: Option<usize>,
        left: bool,
    ) -> Option<(BigRational, Monomial)> {
        if Some(id.0) == t_slot {
            if self.t_exp.is_zero() {
                return None;
            }
            let coeff = self.t_exp.clone();
            let m = self.with_t_exponent(&self.t_exp - BigRational::one());
            return Some((coeff, m));
        }
        let e = self.exps[id.0];
        if e == 0 {
            return None;
        }
        if odd[id.0] {
            let passes = if left { self.odd_before(id, odd) } else { self.odd_after(id, odd) };
            let sign = if passes % 2 == 0 { BigRational::one() } else { -BigRational::one() };
            Some((sign, self.with_exponent(id, 0)))
        } else {
            Some((BigRational::from_integer(BigInt::from(e)), self.with_exponent(id, e - 1)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(exps: &[u32]) -> Monomial {
        Monomial::from_parts(exps.to_vec(), BigRational::zero())
    }

    #[test]
    fn koszul_sign_of_product() {
        // three odd variables a < b < c
        let odd = [true, true, true];
        let a = mono(&[1, 0, 0]);
        let b = mono(&[0, 1, 0]);
        let c = mono(&[0, 0, 1]);
        assert!(!a.mul(&b, &odd).unwrap().1);
        assert!(b.mul(&a, &odd).unwrap().1);
        assert!(a.mul(&a, &odd).is_none());
        // (b c) * a = a b c with two transpositions
        let bc = b.mul(&c, &odd).unwrap().0;
        assert!(!bc.mul(&a, &odd).unwrap().1);
        // (a c) * b = -(a b c)
        let ac = a.mul(&c, &odd).unwrap().0;
        assert!(ac.mul(&b, &odd).unwrap().1);
    }

    #[test]
    fn even_variables_do_not_contribute_signs() {
        let odd = [false, true, true];
        let x = mono(&[2, 0, 1]);
        let y = mono(&[1, 1, 0]);
        let (p, neg) = x.mul(&y, &odd).unwrap();
        assert_eq!(p.exponents(), &[3, 1, 1]);
        assert!(neg);
    }

    #[test]
    fn odd_derivative_directions() {
        let odd = [true, true];
        let ab = mono(&[1, 1]);
        let (c, m) = ab.derive(VarId(1), &odd, None, true).unwrap();
        assert_eq!(c, -BigRational::one());
        assert_eq!(m.exponents(), &[1, 0]);
        let (c, _) = ab.derive(VarId(1), &odd, None, false).unwrap();
        assert_eq!(c, BigRational::one());
        let (c, _) = ab.derive(VarId(0), &odd, None, false).unwrap();
        assert_eq!(c, -BigRational::one());
    }
}
