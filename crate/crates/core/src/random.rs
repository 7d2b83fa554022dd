//! Seeded generators of random homogeneous polynomials for the randomized
//! identity suites.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{Chart, Monomial, Parity, SPoly, VarKind};
use crate::rational::{frac, int};

/// Grades a sample must have. `None` leaves a grade free.
#[derive(Debug, Clone, Default)]
pub struct Shape {
    pub parity: Option<Parity>,
    pub fiber_degree: Option<u32>,
    /// Weight on hatted charts (`t`-exponent minus `t*`-exponent).
    pub weight: Option<BigRational>,
}

impl Shape {
    pub fn parity(p: Parity) -> Shape {
        Shape { parity: Some(p), ..Shape::default() }
    }

    pub fn with_fiber_degree(mut self, d: u32) -> Shape {
        self.fiber_degree = Some(d);
        self
    }

    pub fn with_weight(mut self, w: BigRational) -> Shape {
        self.weight = Some(w);
        self
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
    pub max_fiber_degree: u32,
    pub max_coeff_degree: u32,
    pub max_terms: usize,
    pub t_exponents: Vec<BigRational>,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_fiber_degree: 3,
            max_coeff_degree: 3,
            max_terms: 4,
            t_exponents: vec![int(-2), int(-1), frac(-1, 2), int(0), frac(1, 2), int(1), int(2)],
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coefficient(&mut self) -> BigRational {
        let mut p = 0;
        while p == 0 {
            p = self.rng.gen_range(-5i64..=5);
        }
        let q = self.rng.gen_range(1i64..=3);
        frac(p, q)
    }

    pub fn small_int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn parity(&mut self) -> Parity {
        if self.rng.gen_bool(0.5) {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    fn raw_monomial(&mut self, chart: &Chart, shape: &Shape) -> Monomial {
        let n_vars = chart.n_vars();
        let mut exps = vec![0u32; n_vars];
        let base_budget = self.rng.gen_range(0..=self.max_coeff_degree);
        let mut used = 0;
        for v in chart.variables() {
            match v.kind() {
                VarKind::BaseEven if used < base_budget => {
                    let e = self.rng.gen_range(0..=base_budget - used);
                    exps[v.id().0] = e;
                    used += e;
                }
                VarKind::BaseOdd => exps[v.id().0] = self.rng.gen_range(0..=1),
                _ => {}
            }
        }
        let fiber_target = shape.fiber_degree.unwrap_or_else(|| self.rng.gen_range(0..=self.max_fiber_degree));
        let mut fibers: Vec<_> = chart.variables().iter().filter(|v| v.is_fiber()).collect();
        let mut placed = 0;
        // Spread the fiber degree over random fiber variables; odd ones take
        // at most one unit each.
        for _ in 0..fiber_target * 4 {
            if placed == fiber_target {
                break;
            }
            fibers.shuffle(&mut self.rng);
            let v = fibers[0];
            let i = v.id().0;
            if v.parity().is_odd() && exps[i] > 0 {
                continue;
            }
            exps[i] += 1;
            placed += 1;
        }
        let mut t_exp = BigRational::zero();
        if let Ok(ts) = chart.t_star() {
            let tstar = BigRational::from_integer(BigInt::from(exps[ts.0]));
            t_exp = match &shape.weight {
                Some(w) => w + tstar,
                None => self.t_exponents.choose(&mut self.rng).cloned().unwrap_or_default(),
            };
        }
        Monomial::from_parts(exps, t_exp)
    }

    /// A random polynomial of the requested shape (may be zero only when no
    /// monomial of that shape could be found).
    pub fn poly(&mut self, chart: &Chart, shape: &Shape) -> SPoly {
        let n_terms = self.rng.gen_range(1..=self.max_terms);
        let mut out = SPoly::zero(chart);
        for _ in 0..n_terms {
            for _ in 0..64 {
                let m = self.raw_monomial(chart, shape);
                if shape.fiber_degree.is_some_and(|d| m.fiber_degree(chart) != d) {
                    continue;
                }
                if shape.parity.is_some_and(|p| m.parity(chart) != p) {
                    continue;
                }
                let c = self.coefficient();
                out = &out + &SPoly::monomial(chart, m, c);
                break;
            }
        }
        out
    }

    /// A parity-homogeneous sample of random parity.
    pub fn homogeneous(&mut self, chart: &Chart) -> SPoly {
        let p = self.parity();
        self.poly(chart, &Shape::parity(p))
    }
}
