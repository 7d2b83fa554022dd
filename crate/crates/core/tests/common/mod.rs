//! Independent oracles and fixtures shared by the integration tests.
//!
//! The oracles avoid the kernel's bracket and linear algebra: the bracket
//! is recovered from the second-order operator through the generator
//! identity, and kernels are computed by a plain dense Gauss–Jordan
//! elimination written here.
#![allow(dead_code)]

use std::collections::BTreeSet;

use densilift_core::random::{Sampler, Shape};
use densilift_core::rational::{frac, int};
use densilift_core::{BigRational, Chart, Monomial, Parity, SPoly};
use num_traits::{One, Zero};

pub fn even_odd_chart(evens: &[&str], odds: &[&str]) -> Chart {
    let mut coords: Vec<(&str, Parity)> = evens.iter().map(|e| (*e, Parity::Even)).collect();
    coords.extend(odds.iter().map(|o| (*o, Parity::Odd)));
    Chart::from_coords("C", &coords, false).unwrap()
}

/// Two even and one odd base coordinate.
pub fn small_chart() -> Chart {
    even_odd_chart(&["x", "y"], &["xi"])
}

/// Two even and two odd base coordinates.
pub fn wide_chart() -> Chart {
    even_odd_chart(&["x", "y"], &["xi", "eta"])
}

pub fn var(c: &Chart, name: &str) -> SPoly {
    SPoly::named(c, name).unwrap()
}

pub fn parity_of(p: &SPoly) -> Parity {
    p.homogeneous_parity().unwrap()
}

pub fn sign(p: Parity, f: SPoly) -> SPoly {
    if p.is_odd() {
        -f
    } else {
        f
    }
}

/// `Σ (-1)^{q̃} ∂_q ∂_{q*}` over every conjugate pair of the chart,
/// including `(t, t*)` on hatted charts.
pub fn laplacian(f: &SPoly) -> SPoly {
    let c = f.chart();
    let mut out = SPoly::zero(c);
    for (q, qs, p) in c.conjugate_pairs() {
        let d = f.derive_left(qs).unwrap().derive_left(q).unwrap();
        out = out + sign(p, d);
    }
    out
}

/// `(f,g) = Δ(fg) - Δf·g - (-1)^{f̃} f·Δg`.
pub fn oracle_bracket(f: &SPoly, g: &SPoly) -> SPoly {
    let pf = parity_of(f);
    laplacian(&(f * g)) - &laplacian(f) * g - sign(pf, f * &laplacian(g))
}

/// Bilinear extension of the oracle to inhomogeneous arguments.
pub fn oracle_bracket_any(f: &SPoly, g: &SPoly) -> SPoly {
    let mut out = SPoly::zero(f.chart());
    for (_, fp) in f.parity_parts() {
        for (_, gp) in g.parity_parts() {
            out = out + oracle_bracket(&fp, &gp);
        }
    }
    out
}

/// Reduced row echelon form by straightforward Gauss–Jordan elimination.
/// Returns the pivot columns.
pub fn rref(m: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let v = &m[row][c] * &f;
                    m[r][c] -= v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn oracle_rank(rows: &[Vec<BigRational>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Kernel basis of `m` (rows of length `ncols`).
pub fn oracle_nullspace(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Matrix of `Q ↦ (s, Q)` on `ansatz`, built with the oracle bracket.
pub fn oracle_matrix(s: &SPoly, ansatz: &[SPoly]) -> Vec<Vec<BigRational>> {
    let cols: Vec<SPoly> = ansatz.iter().map(|a| oracle_bracket(s, a)).collect();
    let rows: BTreeSet<Monomial> = cols.iter().flat_map(|c| c.terms().map(|(m, _)| m.clone())).collect();
    rows.iter().map(|m| cols.iter().map(|c| c.coefficient(m)).collect()).collect()
}

pub fn combine(ansatz: &[SPoly], v: &[BigRational]) -> SPoly {
    let mut out = SPoly::zero(ansatz[0].chart());
    for (a, c) in ansatz.iter().zip(v) {
        out = out + a.scale(c);
    }
    out
}

/// Whether two sets of vectors span the same space.
pub fn same_span(a: &[Vec<BigRational>], b: &[Vec<BigRational>], ncols: usize) -> bool {
    let ra = oracle_rank(a, ncols);
    let rb = oracle_rank(b, ncols);
    let both: Vec<_> = a.iter().chain(b).cloned().collect();
    ra == rb && oracle_rank(&both, ncols) == ra
}

pub fn nonzero_poly(s: &mut Sampler, c: &Chart, shape: &Shape) -> SPoly {
    loop {
        let p = s.poly(c, shape);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn weights() -> Vec<BigRational> {
    vec![int(0), int(-1), frac(1, 2), int(2)]
}
