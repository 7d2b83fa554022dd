mod common;

use proptest::prelude::*;

use common::{
    combine, even_odd_chart, oracle_bracket, oracle_matrix, oracle_nullspace, parity_of, same_span, var, weights,
};
use densilift_core::bracket::r_ary_bracket;
use densilift_core::classify::{
    ansatz, classify_lifts_with, darboux_form, de_rham_element, decompose, density_evolution, exterior_derivative,
    lie_poisson, lift_correction, master_check, master_residual_of_lift, q_manifold_lifts, supertrace_extension,
    AnsatzParity, LiftDecomposition,
};
use densilift_core::random::{Sampler, Shape};
use densilift_core::rational::{frac, int};
use densilift_core::{lift, BigRational, Chart, DensityElement, Error, LieAlgebraData, Parity, SPoly};

const E: Parity = Parity::Even;
const O: Parity = Parity::Odd;

fn so3() -> LieAlgebraData {
    LieAlgebraData::new(vec![E; 3], &[(0, 1, 2, int(1)), (1, 2, 0, int(1)), (2, 0, 1, int(1))]).unwrap()
}

fn solvable() -> LieAlgebraData {
    LieAlgebraData::new(vec![E; 2], &[(0, 1, 1, int(1))]).unwrap()
}

fn gl11() -> LieAlgebraData {
    LieAlgebraData::new(
        vec![E, E, O, O],
        &[
            (0, 2, 2, int(1)),
            (0, 3, 3, int(-1)),
            (1, 2, 2, int(-1)),
            (1, 3, 3, int(1)),
            (2, 3, 0, int(1)),
            (2, 3, 1, int(1)),
        ],
    )
    .unwrap()
}

/// `[e1,e2] = e1`, `[e2,e3] = e2`, `[e3,e1] = 0`: the Jacobiator of
/// `(e1, e2, e3)` is `-e1`.
fn broken() -> LieAlgebraData {
    LieAlgebraData::new(vec![E; 3], &[(0, 1, 0, int(1)), (1, 2, 1, int(1))]).unwrap()
}

fn darboux_chart() -> Chart {
    even_odd_chart(&["p", "q"], &[])
}

fn tangent_chart(n: usize) -> Chart {
    let evens: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let odds: Vec<String> = (1..=n).map(|i| format!("dx{i}")).collect();
    let e: Vec<&str> = evens.iter().map(String::as_str).collect();
    let o: Vec<&str> = odds.iter().map(String::as_str).collect();
    even_odd_chart(&e, &o)
}

/// Valid structures `s` with `(s,s) = 0`, one of each flavour.
fn structures() -> Vec<SPoly> {
    let c2 = darboux_chart();
    let t1 = tangent_chart(1);
    let t2 = tangent_chart(2);
    vec![
        lie_poisson(&so3()).unwrap().body().clone(),
        lie_poisson(&solvable()).unwrap().body().clone(),
        lie_poisson(&gl11()).unwrap().body().clone(),
        darboux_form(&c2).unwrap(),
        de_rham_element(&t1).unwrap(),
        de_rham_element(&t2).unwrap(),
        &var(&c2, "q") * &var(&c2, "#p"),
    ]
}

fn random_q(s: &mut Sampler, body: &SPoly, bound: u32) -> SPoly {
    let r = body.fiber_degree_of().pure().unwrap_or(1);
    let basis = ansatz(body.chart(), r.saturating_sub(1), bound, Some(parity_of(body).flip()));
    let coeffs: Vec<BigRational> =
        basis.iter().map(|_| if s.small_int(0, 2) == 0 { s.coefficient() } else { int(0) }).collect();
    if basis.is_empty() {
        SPoly::zero(body.chart())
    } else {
        combine(&basis, &coeffs)
    }
}

fn times_w(q: &SPoly, lambda: &BigRational) -> SPoly {
    let h = q.chart().hatted();
    let tail = &var(&h, "#t") * &SPoly::t_pow(&h, lambda + int(1)).unwrap();
    &q.to_chart(&h).unwrap() * &tail
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `(S,S) = (1 + (-1)^{s̃}) (s,Q) w*` at weight zero.
    #[test]
    fn residual_formula_at_weight_zero(seed in any::<u64>(), which in 0usize..7) {
        let body = structures()[which].clone();
        let mut s = Sampler::new(seed);
        let q = random_q(&mut s, &body, 2);
        let d = DensityElement::function(body.clone()).unwrap();
        let r = master_residual_of_lift(&d, &q).unwrap();
        prop_assert!(r.matches());
        let factor = if parity_of(&body).is_odd() { int(0) } else { int(2) };
        let predicted = times_w(&oracle_bracket(&body, &q), &int(0)).scale(&factor);
        prop_assert_eq!(&r.residual, &predicted);
        let full = lift(&d).unwrap() + times_w(&q, &int(0));
        prop_assert_eq!(oracle_bracket(&full, &full), predicted);
    }

    /// At other weights the residual picks up `(ŝ,ŝ) - (1+(-1)^{s̃}) λ t^{2λ} sQ`.
    #[test]
    fn residual_expansion_at_any_weight(seed in any::<u64>(), which in 0usize..7, wi in 1usize..4) {
        let body = structures()[which].clone();
        let lambda = weights()[wi].clone();
        let mut s = Sampler::new(seed);
        let q = random_q(&mut s, &body, 1);
        let d = DensityElement::new(body.clone(), lambda.clone()).unwrap();
        let r = master_residual_of_lift(&d, &q).unwrap();
        let lifted = lift(&d).unwrap();
        let full = &lifted + &times_w(&q, &lambda);
        prop_assert_eq!(&r.residual, &oracle_bracket(&full, &full));
        let factor = if parity_of(&body).is_odd() { int(0) } else { int(2) };
        let two_l = &lambda * int(2);
        let h = lifted.chart().clone();
        let sq = &(&body * &q).to_chart(&h).unwrap() * &SPoly::t_pow(&h, two_l.clone()).unwrap();
        let weight_terms = oracle_bracket(&lifted, &lifted) - sq.scale(&(&factor * &lambda));
        prop_assert_eq!(&r.weight_terms, &weight_terms);
        prop_assert_eq!(&r.predicted, &times_w(&oracle_bracket(&body, &q), &two_l).scale(&factor));
        if parity_of(&body).is_odd() {
            prop_assert!(r.matches());
        }
    }

    /// `decompose` inverts `Q ↦ ŝ + t^λ Q w*`.
    #[test]
    fn decompose_round_trip(seed in any::<u64>(), which in 0usize..7, wi in 0usize..4) {
        let body = structures()[which].clone();
        let lambda = weights()[wi].clone();
        let mut s = Sampler::new(seed);
        let q = random_q(&mut s, &body, 2);
        let d = DensityElement::new(body, lambda.clone()).unwrap();
        let built = LiftDecomposition::new(d.clone(), q.clone()).unwrap().recompose().unwrap();
        prop_assert_eq!(&built, &(lift(&d).unwrap() + times_w(&q, &lambda)));
        let back = decompose(&built, &d).unwrap();
        prop_assert_eq!(back.q_part(), &q);
    }

    /// `((Ω_X, H), Ψ) = ({H,ψ} + λ{H,f}ψ) t^λ` on random Darboux inputs.
    #[test]
    fn density_evolution_on_random_inputs(seed in any::<u64>(), wi in 0usize..4, four in any::<bool>()) {
        let c = if four { even_odd_chart(&["p1", "p2", "q1", "q2"], &[]) } else { darboux_chart() };
        let mut s = Sampler::new(seed);
        s.max_coeff_degree = 2;
        let mut f = || s.poly(&c, &Shape::parity(E).with_fiber_degree(0));
        let (h, fx, psi) = (f(), f(), f());
        let lambda = weights()[wi].clone();
        let out = density_evolution(&h, &fx, &psi, &lambda).unwrap();
        let omega = darboux_form(&c).unwrap();
        let pb = |a: &SPoly, b: &SPoly| oracle_bracket(b, &oracle_bracket(a, &omega)).to_chart(&c).unwrap_or_else(|_| unreachable!());
        let base = pb(&h, &psi) + (&pb(&h, &fx) * &psi).scale(&lambda);
        let hc = c.hatted();
        prop_assert_eq!(out, &base.to_chart(&hc).unwrap() * &SPoly::t_pow(&hc, lambda).unwrap());
    }
}

/// Kernel bases agree with an independent dense row reduction.
#[test]
fn kernels_match_dense_oracle() {
    let mut cases: Vec<(SPoly, u32, AnsatzParity)> = Vec::new();
    for d in 0..=3 {
        let t1 = tangent_chart(1);
        let s = de_rham_element(&t1).unwrap();
        cases.push((s.clone(), d, AnsatzParity::Any));
        cases.push((s, d, AnsatzParity::Opposite));
    }
    for b in 0..=1 {
        cases.push((darboux_form(&darboux_chart()).unwrap(), b, AnsatzParity::Opposite));
        cases.push((lie_poisson(&so3()).unwrap().body().clone(), b, AnsatzParity::Opposite));
        cases.push((lie_poisson(&solvable()).unwrap().body().clone(), b, AnsatzParity::Opposite));
        cases.push((de_rham_element(&tangent_chart(2)).unwrap(), b, AnsatzParity::Any));
    }
    cases.push((lie_poisson(&gl11()).unwrap().body().clone(), 0, AnsatzParity::Opposite));
    assert!(cases.len() >= 10);
    for (s, bound, mode) in cases {
        let d = DensityElement::function(s.clone()).unwrap();
        let k = classify_lifts_with(&d, bound, mode).unwrap();
        let n = k.ansatz.len();
        let oracle = if k.odd_mode && mode == AnsatzParity::Opposite {
            oracle_nullspace(&[], n)
        } else {
            oracle_nullspace(&oracle_matrix(&s, &k.ansatz), n)
        };
        assert_eq!(k.dim(), oracle.len(), "{s} bound {bound}");
        assert!(same_span(&k.basis, &oracle, n), "{s} bound {bound}");
        for q in k.elements() {
            if !k.odd_mode {
                assert!(oracle_bracket(&s, &q).is_zero());
            }
        }
    }
}

/// On `ΠTℝ¹` the kernel of `(ξx*, ·)` on functions is the constants plus
/// every 1-form; lifts keep the odd part.
#[test]
fn tangent_line_dimensions() {
    let c = tangent_chart(1);
    let s = DensityElement::function(de_rham_element(&c).unwrap()).unwrap();
    for d in 0..=4u32 {
        assert_eq!(classify_lifts_with(&s, d, AnsatzParity::Any).unwrap().dim(), d as usize + 2);
        assert_eq!(q_manifold_lifts(&c, d).unwrap().dim(), d as usize + 1);
    }
}

/// Lifts of `ω` on ℝ² with affine `Q`: the symplectic (here: divergence
/// free) affine vector fields, a 5-dimensional space.
#[test]
fn darboux_plane_lifts_are_symplectic_fields() {
    let c = darboux_chart();
    let omega = darboux_form(&c).unwrap();
    let k = classify_lifts_with(&DensityElement::function(omega).unwrap(), 1, AnsatzParity::Opposite).unwrap();
    assert_eq!(k.dim(), 5);
    for q in k.elements() {
        // Q = X^p p* + X^q q*; symplectic iff ∂_p X^p + ∂_q X^q = 0.
        let xp = q.derive_left(c.fiber(0)).unwrap();
        let xq = q.derive_left(c.fiber(1)).unwrap();
        let div = xp.derive_left(c.base(0)).unwrap() + xq.derive_left(c.base(1)).unwrap();
        assert!(div.is_zero(), "{q}");
    }
}

#[test]
fn tangent_plane_closed_forms() {
    let c = tangent_chart(2);
    let s = DensityElement::function(de_rham_element(&c).unwrap()).unwrap();
    let all = classify_lifts_with(&s, 1, AnsatzParity::Any).unwrap();
    // constants (1) + closed affine 1-forms (5) + affine 2-forms (3)
    assert_eq!(all.dim(), 9);
    let odd = q_manifold_lifts(&c, 1).unwrap();
    assert_eq!(odd.dim(), 5);
    let (x1, x2, dx1, dx2) = (var(&c, "x1"), var(&c, "x2"), var(&c, "dx1"), var(&c, "dx2"));
    let lonely = &x1 * &dx2;
    let exact = &x1 * &dx2 + &x2 * &dx1;
    assert!(!exterior_derivative(&c, &lonely).unwrap().is_zero());
    let in_span = |p: &SPoly| {
        let coords =
            |p: &SPoly| odd.ansatz.iter().map(|a| p.coefficient(a.terms().next().unwrap().0)).collect::<Vec<_>>();
        let mut rows = odd.basis.clone();
        let before = common::oracle_rank(&rows, odd.ansatz.len());
        rows.push(coords(p));
        common::oracle_rank(&rows, odd.ansatz.len()) == before
    };
    assert!(!in_span(&lonely));
    assert!(in_span(&exact));
}

#[test]
fn solvable_lie_poisson_and_extension() {
    let g = solvable();
    let pi = lie_poisson(&g).unwrap();
    let c = pi.chart().clone();
    // ½ C^{ij}_k x^k x*_j x*_i with C^{12}_2 = -C^{21}_2 = 1.
    assert_eq!(pi.body(), &(&(&var(&c, "x2") * &var(&c, "#x2")) * &var(&c, "#x1")));
    assert!(master_check(pi.body()).unwrap().is_zero());
    assert_eq!(supertrace_extension(&g).unwrap(), vec![int(1), int(0)]);
    assert_eq!(lift_correction(&pi).unwrap(), var(&c, "#x1"));
}

#[test]
fn so3_structure() {
    let g = so3();
    let pi = lie_poisson(&g).unwrap();
    let c = pi.chart().clone();
    let x = |i: usize| SPoly::var(&c, c.base(i)).unwrap();
    assert!(master_check(pi.body()).unwrap().is_zero());
    assert_eq!(supertrace_extension(&g).unwrap(), vec![int(0); 3]);
    // {x^i, x^j} = -C^{ij}_k x^k for an even algebra.
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        assert_eq!(r_ary_bracket(pi.body(), &[x(i), x(j)]).unwrap(), -x(k));
    }
}

#[test]
fn extension_is_basis_independent() {
    let mut s = Sampler::new(17);
    for g in [solvable(), so3(), gl11()] {
        let n = g.dimension();
        let base = supertrace_extension(&g).unwrap();
        for _ in 0..5 {
            let p: Vec<Vec<BigRational>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|a| {
                            if g.parities()[i] != g.parities()[a] {
                                int(0)
                            } else if i == a {
                                int(s.small_int(1, 3))
                            } else {
                                int(s.small_int(-2, 2))
                            }
                        })
                        .collect()
                })
                .collect();
            let Ok(h) = g.change_basis(&p) else { continue };
            let moved = supertrace_extension(&h).unwrap();
            // Covector: value on e'_i = Σ_a P_{ia} e_a.
            for i in 0..n {
                let expect: BigRational = (0..n).map(|a| &p[i][a] * &base[a]).sum();
                assert_eq!(moved[i], expect);
            }
        }
    }
}

#[test]
fn negative_control_fails_master_equation() {
    let g = broken();
    let pi = lie_poisson(&g).unwrap();
    let pp = master_check(pi.body()).unwrap();
    assert!(!pp.is_zero());
    assert_eq!(pp, oracle_bracket(pi.body(), pi.body()));
    assert!(matches!(supertrace_extension(&g), Err(Error::InvalidLieAlgebra(_))));
    assert!(classify_lifts_with(&pi, 0, AnsatzParity::Opposite).is_err());
}

/// `H = p²/2`, `f = ψ = q`, `λ = 1/2`: `{H, q} = p`.
#[test]
fn free_particle_evolution() {
    let c = darboux_chart();
    let (p, q) = (var(&c, "p"), var(&c, "q"));
    let h = p.pow(2).scale(&frac(1, 2));
    let omega = darboux_form(&c).unwrap();
    let hq = oracle_bracket(&q, &oracle_bracket(&h, &omega));
    assert_eq!(hq, p);
    let out = density_evolution(&h, &q, &q, &frac(1, 2)).unwrap();
    let hc = c.hatted();
    let expected = (&hq + &(&hq * &q).scale(&frac(1, 2))).to_chart(&hc).unwrap();
    assert_eq!(out, &expected * &SPoly::t_pow(&hc, frac(1, 2)).unwrap());
}

#[test]
fn hamiltonian_lift_recovers_the_field() {
    let c = darboux_chart();
    let f = &var(&c, "p").pow(2) * &var(&c, "q");
    let omega = darboux_form(&c).unwrap();
    let big = densilift_core::classify::hamiltonian_lift(&c, &f).unwrap();
    let dec = decompose(&big, &DensityElement::function(omega.clone()).unwrap()).unwrap();
    assert_eq!(dec.q_part(), &-oracle_bracket(&omega, &f));
}
