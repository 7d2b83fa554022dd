//! Convention pinning: screens every member of the sign-convention family
//! against the identity suite and reports the survivors, together with the
//! identities that rule out each single-bit deviation from the pinned
//! convention. The report renders as the convention ledger.

use std::fmt::Write as _;

use crate::poly::{Chart, Parity, SPoly};
use crate::random::Sampler;

use super::identities as id;
use super::{antibracket, divergence, reference_chart, SignConvention};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// `δ(fg) = δf·g + (-1)^{f̃} f·δg + (f,g)` on the hatted chart.
    DeltaGenerates,
    /// The same with `Δ` on the unhatted chart.
    DivergenceGenerates,
    Symmetry,
    Leibniz,
    Jacobi,
    /// `Δ(f,g) = -(Δf,g) - (-1)^{f̃}(f,Δg)`.
    DivergenceDerivation,
}

impl Identity {
    pub const ALL: [Identity; 6] = [
        Identity::DeltaGenerates,
        Identity::DivergenceGenerates,
        Identity::Symmetry,
        Identity::Leibniz,
        Identity::Jacobi,
        Identity::DivergenceDerivation,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Identity::DeltaGenerates => "δ(fg) - δf·g - (-1)^f f·δg = (f,g)",
            Identity::DivergenceGenerates => "Δ(fg) - Δf·g - (-1)^f f·Δg = (f,g)",
            Identity::Symmetry => "(f,g) = (-1)^{fg} (g,f)",
            Identity::Leibniz => "(fg,h) = (-1)^f f(g,h) + (-1)^{gh} (f,h)g",
            Identity::Jacobi => "(f,(g,h)) = (-1)^{f+1} ((f,g),h) + (-1)^{(f+1)(g+1)} (g,(f,h))",
            Identity::DivergenceDerivation => "Δ(f,g) = -(Δf,g) - (-1)^f (f,Δg)",
        }
    }
}

/// Fixed random samples shared by every candidate.
pub struct SampleSet {
    hatted: Vec<[SPoly; 3]>,
    plain: Vec<[SPoly; 3]>,
}

impl SampleSet {
    pub fn generate(seed: u64, count: usize) -> SampleSet {
        let mut s = Sampler::new(seed);
        let h = reference_chart(true);
        let p = reference_chart(false);
        let mut draw = |c: &Chart| [s.homogeneous(c), s.homogeneous(c), s.homogeneous(c)];
        let hatted = (0..count).map(|_| draw(&h)).collect();
        let plain = (0..count).map(|_| draw(&p)).collect();
        SampleSet { hatted, plain }
    }

    pub fn len(&self) -> usize {
        self.plain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plain.is_empty()
    }
}

/// Index of the first sample violating `identity`, if any.
pub fn first_violation(conv: &SignConvention, identity: Identity, samples: &SampleSet) -> Option<usize> {
    let br = |f: &SPoly, g: &SPoly| conv.bracket(f, g);
    let br: id::Bracket = &br;
    let set = match identity {
        Identity::DeltaGenerates | Identity::Jacobi => &samples.hatted,
        _ => &samples.plain,
    };
    set.iter().position(|[f, g, h]| {
        let r = match identity {
            Identity::DeltaGenerates => id::delta_generates(br, f, g),
            Identity::DivergenceGenerates => id::divergence_generates(br, f, g),
            Identity::Symmetry => id::symmetry(br, f, g),
            Identity::Leibniz => id::leibniz(br, f, g, h),
            Identity::Jacobi => id::jacobi(br, f, g, h),
            Identity::DivergenceDerivation => id::divergence_derivation(br, f, g),
        };
        !r.map(|p| p.is_zero()).unwrap_or(false)
    })
}

/// Whether a candidate passes the whole suite (stops at the first failure).
pub fn passes_all(conv: &SignConvention, samples: &SampleSet) -> bool {
    Identity::ALL.iter().all(|&i| first_violation(conv, i, samples).is_none())
}

#[derive(Debug, Clone)]
pub struct BitReport {
    pub bit: usize,
    pub failing: Vec<Identity>,
}

#[derive(Debug, Clone)]
pub struct PinningReport {
    pub seed: u64,
    pub samples: usize,
    pub candidates: usize,
    pub survivors: Vec<SignConvention>,
    pub bits: Vec<BitReport>,
    /// `(x*, x)` for an even coordinate.
    pub momentum_position: SPoly,
    /// `Δ(x x*)` for an even coordinate.
    pub divergence_pair: SPoly,
}

impl PinningReport {
    pub fn is_unique(&self) -> bool {
        self.survivors.len() == 1
    }

    pub fn pinned(&self) -> Option<SignConvention> {
        self.is_unique().then(|| self.survivors[0])
    }
}

/// Screens the whole candidate family on `count` sample triples per chart.
pub fn pin(seed: u64, count: usize) -> PinningReport {
    let samples = SampleSet::generate(seed, count);
    let survivors: Vec<_> = SignConvention::candidates().filter(|c| passes_all(c, &samples)).collect();
    let bits = (0..8)
        .map(|bit| {
            let c = SignConvention::PINNED.flip_bit(bit);
            let failing =
                Identity::ALL.iter().copied().filter(|&i| first_violation(&c, i, &samples).is_some()).collect();
            BitReport { bit, failing }
        })
        .collect();
    let chart = Chart::from_coords("P", &[("x", Parity::Even)], false).expect("valid chart");
    let x = SPoly::named(&chart, "x").expect("declared");
    let xs = SPoly::named(&chart, "#x").expect("declared");
    PinningReport {
        seed,
        samples: count,
        candidates: 256,
        momentum_position: antibracket(&xs, &x).expect("same chart"),
        divergence_pair: divergence(&(&x * &xs)),
        survivors,
        bits,
    }
}

fn bit_name(bit: usize) -> String {
    let term = if bit < 4 { "∂_q f ∂_q* g" } else { "∂_q* f ∂_q g" };
    let coeff = ["1", "ã", "f̃", "ã·f̃"][bit % 4];
    format!("coefficient of {coeff} in the sign of {term}")
}

/// Renders the convention ledger.
pub fn ledger(report: &PinningReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Sign convention ledger");
    let _ = writeln!(out);
    let _ =
        writeln!(out, "Candidate family: (f,g) = Σ (-1)^e1 ∂_q f ∂_q* g + (-1)^e2 ∂_q* f ∂_q g over conjugate pairs,");
    let _ = writeln!(
        out,
        "left derivatives, e1 and e2 each of the form c0 + c1·ã + c2·f̃ + c3·ã·f̃ (mod 2): {} candidates.",
        report.candidates
    );
    let _ = writeln!(
        out,
        "Screened on {} random homogeneous triples per chart (seed {}), chart R {{ even x, y; odd xi, eta }}.",
        report.samples, report.seed
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "Identity suite:");
    for i in Identity::ALL {
        let _ = writeln!(out, "  - {}", i.label());
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "Survivors: {}", report.survivors.len());
    for c in &report.survivors {
        let _ = writeln!(out, "  {c}");
    }
    let verdict = match report.pinned() {
        Some(c) if c == SignConvention::PINNED => "unique, equal to the built-in convention",
        Some(_) => "unique, but DIFFERENT from the built-in convention",
        None => "NOT unique",
    };
    let _ = writeln!(out, "Verdict: {verdict}");
    let _ = writeln!(out);
    let _ = writeln!(out, "Pinned sign bits (flipping the bit breaks the listed identities):");
    for b in &report.bits {
        let value = if b.bit < 4 {
            SignConvention::PINNED.position_first.bits() >> b.bit & 1
        } else {
            SignConvention::PINNED.momentum_first.bits() >> (b.bit - 4) & 1
        };
        let names: Vec<_> = b.failing.iter().map(|i| format!("{i:?}")).collect();
        let _ = writeln!(out, "  {} = {} | {}", bit_name(b.bit), value, names.join(", "));
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "Derived constants:");
    let _ = writeln!(out, "  Δ = Σ (-1)^ã ∂_{{x^a}} ∂_{{x*_a}} (left derivatives)");
    let _ = writeln!(out, "  δ = Δ + ∂_{{t*}}(∂_t - 2/t)");
    let _ = writeln!(out, "  generator sign σ(f̃) = +1");
    let _ = writeln!(out, "  (x*, x) = {} for even x", report.momentum_position);
    let _ = writeln!(out, "  Δ(x x*) = {} for even x", report.divergence_pair);
    let _ = writeln!(out, "  lift correction: + 1/(1-λ) t^(λ+1) t* Δs  (t* to the left of Δs)");
    out
}
