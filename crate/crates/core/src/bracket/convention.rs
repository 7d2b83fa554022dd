use std::fmt;

use crate::poly::{signed, Parity, SPoly};

/// Sign exponent `c0 + c1·ã + c2·f̃ + c3·ã·f̃ (mod 2)` of one term of the
/// coordinate bracket formula, where `ã` is the parity of the coordinate
/// and `f̃` the parity of the left argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TermSign {
    pub constant: bool,
    pub coord: bool,
    pub arg: bool,
    pub mixed: bool,
}

impl TermSign {
    pub const fn from_bits(bits: u8) -> TermSign {
        TermSign { constant: bits & 1 != 0, coord: bits & 2 != 0, arg: bits & 4 != 0, mixed: bits & 8 != 0 }
    }

    pub fn bits(self) -> u8 {
        self.constant as u8 | (self.coord as u8) << 1 | (self.arg as u8) << 2 | (self.mixed as u8) << 3
    }

    pub fn exponent(self, coord: Parity, arg: Parity) -> Parity {
        let (a, f) = (coord.bit(), arg.bit());
        let e = self.constant as u8 ^ (self.coord as u8 & a) ^ (self.arg as u8 & f) ^ (self.mixed as u8 & a & f);
        Parity::from_bit(e)
    }
}

impl fmt::Display for TermSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.constant {
            parts.push("1");
        }
        if self.coord {
            parts.push("a");
        }
        if self.arg {
            parts.push("f");
        }
        if self.mixed {
            parts.push("a·f");
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Per-term signs of the coordinate formula
///
/// ```text
/// (f, g) = Σ (-1)^{e₁(ã, f̃)} ∂f/∂q · ∂g/∂q*  +  (-1)^{e₂(ã, f̃)} ∂f/∂q* · ∂g/∂q
/// ```
///
/// summed over conjugate pairs `(q, q*)`, all derivatives acting from the
/// left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignConvention {
    pub position_first: TermSign,
    pub momentum_first: TermSign,
}

impl SignConvention {
    /// The unique member of the candidate family satisfying the identity
    /// suite (see [`crate::bracket::pinning`]):
    /// `e₁ = ã + f̃ + ã·f̃`, `e₂ = ã + ã·f̃`.
    pub const PINNED: SignConvention =
        SignConvention { position_first: TermSign::from_bits(0b1110), momentum_first: TermSign::from_bits(0b1010) };

    /// All 256 members of the candidate family, in a fixed order.
    pub fn candidates() -> impl Iterator<Item = SignConvention> {
        (0u16..256).map(|k| SignConvention {
            position_first: TermSign::from_bits((k & 0xf) as u8),
            momentum_first: TermSign::from_bits((k >> 4) as u8),
        })
    }

    /// Same convention with one of the eight sign bits flipped.
    pub fn flip_bit(self, bit: usize) -> SignConvention {
        let mut out = self;
        if bit < 4 {
            out.position_first = TermSign::from_bits(self.position_first.bits() ^ (1 << bit));
        } else {
            out.momentum_first = TermSign::from_bits(self.momentum_first.bits() ^ (1 << (bit - 4)));
        }
        out
    }

    pub fn bracket(&self, f: &SPoly, g: &SPoly) -> SPoly {
        let chart = f.chart();
        let mut out = SPoly::zero(chart);
        for (fp, fpart) in f.parity_parts() {
            for (q, qs, a) in chart.conjugate_pairs() {
                let dq_f = fpart.dl(q);
                if !dq_f.is_zero() {
                    let dqs_g = g.dl(qs);
                    if !dqs_g.is_zero() {
                        out = out + signed(self.position_first.exponent(a, fp), &dq_f * &dqs_g);
                    }
                }
                let dqs_f = fpart.dl(qs);
                if !dqs_f.is_zero() {
                    let dq_g = g.dl(q);
                    if !dq_g.is_zero() {
                        out = out + signed(self.momentum_first.exponent(a, fp), &dqs_f * &dq_g);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(f,g) = Σ (-1)^[{}] ∂_q f ∂_q* g + (-1)^[{}] ∂_q* f ∂_q g", self.position_first, self.momentum_first)
    }
}
