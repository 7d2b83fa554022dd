use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Z/2 grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Parity {
        if bit & 1 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Parity {
        self + Parity::Odd
    }

    /// `(-1)^self` as an integer.
    pub fn sign(self) -> i32 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

impl Add for Parity {
    type Output = Parity;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() ^ rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

/// Position of a variable inside its chart.
///
/// For a chart with `n` base coordinates the layout is: base coordinates
/// `0..n`, their fiber partners `n..2n`, then `t` at `2n` and `t*` at
/// `2n + 1` on hatted charts. The unhatted chart is a prefix of the hatted
/// one, so the same id names the same variable in both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    BaseEven,
    BaseOdd,
    /// Fiber partner of the base coordinate with the given index.
    FiberStar(usize),
    T,
    TStar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    name: String,
    kind: VarKind,
    parity: Parity,
    id: VarId,
}

impl Variable {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn id(&self) -> VarId {
        self.id
    }

    /// Density weight: 1 for `t`, -1 for `t*`, 0 otherwise.
    pub fn weight(&self) -> BigRational {
        match self.kind {
            VarKind::T => BigRational::one(),
            VarKind::TStar => -BigRational::one(),
            _ => BigRational::zero(),
        }
    }

    pub fn is_fiber(&self) -> bool {
        matches!(self.kind, VarKind::FiberStar(_) | VarKind::TStar)
    }
}

#[derive(Debug, PartialEq, Eq)]
struct ChartData {
    name: String,
    base: Vec<(String, Parity)>,
    hatted: bool,
    vars: Vec<Variable>,
    odd: Vec<bool>,
}

/// A coordinate chart: base coordinates with parities, their fiber partners
/// on the odd cotangent bundle, and optionally the density variables.
///
/// Cheap to clone. Two charts are equal when their names, coordinate tables
/// and hatted flags agree.
#[derive(Clone)]
pub struct Chart(Arc<ChartData>);

impl PartialEq for Chart {
    fn eq(&self, other: &Chart) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Chart {}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({}", self.0.name)?;
        if self.0.hatted {
            f.write_str(", hatted")?;
        }
        f.write_str(")")
    }
}

const RESERVED: [&str; 2] = ["t", "w"];

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Chart {
    pub fn new<S: Into<String>>(name: S, base: Vec<(String, Parity)>, hatted: bool) -> Result<Chart> {
        let name = name.into();
        for (i, (coord, _)) in base.iter().enumerate() {
            if !valid_identifier(coord) {
                return Err(Error::InvalidChart(format!("`{coord}` is not a valid coordinate name")));
            }
            if RESERVED.contains(&coord.as_str()) {
                return Err(Error::InvalidChart(format!("`{coord}` is reserved")));
            }
            if base[..i].iter().any(|(c, _)| c == coord) {
                return Err(Error::InvalidChart(format!("duplicate coordinate `{coord}`")));
            }
        }
        let n = base.len();
        let mut vars = Vec::with_capacity(2 * n + 2);
        for (i, (coord, parity)) in base.iter().enumerate() {
            let kind = if parity.is_odd() { VarKind::BaseOdd } else { VarKind::BaseEven };
            vars.push(Variable { name: coord.clone(), kind, parity: *parity, id: VarId(i) });
        }
        for (i, (coord, parity)) in base.iter().enumerate() {
            vars.push(Variable {
                name: format!("#{coord}"),
                kind: VarKind::FiberStar(i),
                parity: parity.flip(),
                id: VarId(n + i),
            });
        }
        if hatted {
            vars.push(Variable { name: "t".into(), kind: VarKind::T, parity: Parity::Even, id: VarId(2 * n) });
            vars.push(Variable { name: "#t".into(), kind: VarKind::TStar, parity: Parity::Odd, id: VarId(2 * n + 1) });
        }
        let odd = vars.iter().map(|v| v.parity.is_odd()).collect();
        Ok(Chart(Arc::new(ChartData { name, base, hatted, vars, odd })))
    }

    /// Convenience constructor from `(name, parity)` string pairs.
    pub fn from_coords(name: &str, coords: &[(&str, Parity)], hatted: bool) -> Result<Chart> {
        Chart::new(name, coords.iter().map(|(c, p)| (c.to_string(), *p)).collect(), hatted)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn is_hatted(&self) -> bool {
        self.0.hatted
    }

    pub fn base_coords(&self) -> &[(String, Parity)] {
        &self.0.base
    }

    pub fn n_base(&self) -> usize {
        self.0.base.len()
    }

    pub fn n_vars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.0.vars
    }

    pub fn var(&self, id: VarId) -> Result<&Variable> {
        self.0.vars.get(id.0).ok_or_else(|| Error::UnknownVariable(format!("#{}", id.0)))
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.0.vars.iter().find(|v| v.name == name).map(|v| v.id)
    }

    pub fn base(&self, i: usize) -> VarId {
        debug_assert!(i < self.n_base());
        VarId(i)
    }

    pub fn fiber(&self, i: usize) -> VarId {
        debug_assert!(i < self.n_base());
        VarId(self.n_base() + i)
    }

    pub fn t(&self) -> Result<VarId> {
        if self.is_hatted() {
            Ok(VarId(2 * self.n_base()))
        } else {
            Err(Error::UnhattedChart)
        }
    }

    pub fn t_star(&self) -> Result<VarId> {
        if self.is_hatted() {
            Ok(VarId(2 * self.n_base() + 1))
        } else {
            Err(Error::UnhattedChart)
        }
    }

    /// Index of `t` if present; monomials store its exponent separately.
    pub(crate) fn t_slot(&self) -> Option<usize> {
        self.is_hatted().then(|| 2 * self.n_base())
    }

    pub(crate) fn odd_mask(&self) -> &[bool] {
        &self.0.odd
    }

    pub fn parity(&self, id: VarId) -> Parity {
        self.0.vars[id.0].parity
    }

    /// Canonically conjugate pairs `(q, q*, parity of q)`: every base
    /// coordinate with its fiber partner, then `(t, t*)` on hatted charts.
    pub fn conjugate_pairs(&self) -> Vec<(VarId, VarId, Parity)> {
        let n = self.n_base();
        let mut pairs: Vec<_> = (0..n).map(|i| (VarId(i), VarId(n + i), self.0.base[i].1)).collect();
        if self.is_hatted() {
            pairs.push((VarId(2 * n), VarId(2 * n + 1), Parity::Even));
        }
        pairs
    }

    /// Same base coordinates with density variables adjoined.
    pub fn hatted(&self) -> Chart {
        if self.is_hatted() {
            return self.clone();
        }
        Chart::new(self.0.name.clone(), self.0.base.clone(), true).expect("valid base table")
    }

    /// Same base coordinates without density variables.
    pub fn unhatted(&self) -> Chart {
        if !self.is_hatted() {
            return self.clone();
        }
        Chart::new(self.0.name.clone(), self.0.base.clone(), false).expect("valid base table")
    }

    /// True if `other` has the same base coordinates (hatted or not).
    pub fn same_base(&self, other: &Chart) -> bool {
        self.0.name == other.0.name && self.0.base == other.0.base
    }
}
