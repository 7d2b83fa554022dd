//! Evaluation of parsed scripts.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::json;

use densilift_core::bracket::pinning::{first_violation, Identity, SampleSet};
use densilift_core::classify::{classify_lifts, decompose, density_evolution, lie_poisson, master_check};
use densilift_core::rational::{rational_pow, to_fraction_string};
use densilift_core::{
    antibracket, delta_op, divergence, lift, lift_commutes_check, master_residual_of_lift, project_base,
    q_manifold_lifts, r_ary_bracket, supertrace_extension, transform_hatted, BigRational, Chart, CoordinateChange,
    DensityElement, Error, KernelBasis, LieAlgebraData, SPoly, SignConvention,
};

use crate::serial::{from_serialized, to_serialized, SerializedPoly};
use crate::syntax::{Expr, ExprKind, Pos, Script, StmtKind};

/// A failed statement, classified for the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Bad input: syntax, unknown names, unreadable files.
    Input { pos: Pos, message: String },
    /// The kernel rejected the request or an identity failed.
    Kernel { pos: Pos, error: Error },
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input { .. } => 2,
            Failure::Kernel { error, .. } if error.is_verification() => 4,
            Failure::Kernel { .. } => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input { pos, message } => write!(f, "error at {pos}: {message}"),
            Failure::Kernel { pos, error } => write!(f, "error at {pos}: {error}"),
        }
    }
}

type Eval<T> = std::result::Result<T, Failure>;

fn input<T>(pos: Pos, message: impl Into<String>) -> Eval<T> {
    Err(Failure::Input { pos, message: message.into() })
}

trait AtPos<T> {
    fn at(self, pos: Pos) -> Eval<T>;
}

impl<T> AtPos<T> for densilift_core::Result<T> {
    fn at(self, pos: Pos) -> Eval<T> {
        self.map_err(|error| Failure::Kernel { pos, error })
    }
}

#[derive(Debug, Clone)]
pub enum Value {
    Scalar(BigRational),
    Poly(SPoly),
    Text(String),
    Densities(Vec<DensityElement>),
    Basis(KernelBasis),
    Vector(Vec<BigRational>),
    /// Outcome of a check; a failed check makes the run exit with 4.
    Check {
        passed: bool,
        detail: String,
    },
}

fn rational_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        to_fraction_string(r)
    }
}

fn density_text(d: &DensityElement) -> String {
    if d.weight().is_zero() {
        format!("({})", d.body())
    } else {
        format!("({})|Dx|^({})", d.body(), rational_text(d.weight()))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(r) => f.write_str(&rational_text(r)),
            Value::Poly(p) => write!(f, "{p}"),
            Value::Text(s) => f.write_str(s),
            Value::Densities(ds) if ds.is_empty() => f.write_str("0"),
            Value::Densities(ds) => f.write_str(&ds.iter().map(density_text).collect::<Vec<_>>().join(" + ")),
            Value::Basis(b) => {
                let elems: Vec<String> = b.elements().iter().map(ToString::to_string).collect();
                write!(f, "dim {} [{}]", b.dim(), elems.join(", "))
            }
            Value::Vector(v) => {
                write!(f, "[{}]", v.iter().map(rational_text).collect::<Vec<_>>().join(", "))
            }
            Value::Check { passed: true, detail } if detail.is_empty() => f.write_str("PASS"),
            Value::Check { passed, detail } => {
                write!(f, "{}: {detail}", if *passed { "PASS" } else { "FAIL" })
            }
        }
    }
}

impl Value {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Scalar(r) => json!(rational_text(r)),
            Value::Poly(p) => serde_json::to_value(to_serialized(p)).expect("serializable"),
            Value::Text(s) => json!(s),
            Value::Densities(ds) => json!(ds
                .iter()
                .map(|d| json!({"weight": rational_text(d.weight()), "body": to_serialized(d.body())}))
                .collect::<Vec<_>>()),
            Value::Basis(b) => json!({
                "dim": b.dim(),
                "odd_mode": b.odd_mode,
                "elements": b.elements().iter().map(to_serialized).collect::<Vec<_>>(),
            }),
            Value::Vector(v) => json!(v.iter().map(rational_text).collect::<Vec<_>>()),
            Value::Check { passed, detail } => json!({"passed": passed, "detail": detail}),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub strict_orientation: bool,
    pub seed: u64,
    /// Directory that relative file names are resolved against.
    pub base_dir: PathBuf,
}

impl Default for Settings {
    fn default() -> Settings {
        Settings { strict_orientation: false, seed: 0, base_dir: PathBuf::from(".") }
    }
}

pub struct Interpreter {
    settings: Settings,
    chart: RefCell<Option<Chart>>,
    bindings: BTreeMap<String, Value>,
    changes: BTreeMap<String, CoordinateChange>,
}

impl Interpreter {
    pub fn new(settings: Settings) -> Interpreter {
        Interpreter { settings, chart: RefCell::new(None), bindings: BTreeMap::new(), changes: BTreeMap::new() }
    }

    /// Runs every statement, calling `emit` with the value of each bare
    /// expression. Stops at the first failure.
    pub fn run(&mut self, script: &Script, mut emit: impl FnMut(&Value)) -> Eval<()> {
        for stmt in &script.statements {
            match &stmt.kind {
                StmtKind::Chart { name, coords, hatted } => {
                    if let Some((c, _)) = coords.iter().find(|(c, _)| self.bindings.contains_key(c)) {
                        return input(stmt.pos, format!("coordinate `{c}` clashes with a binding"));
                    }
                    *self.chart.borrow_mut() = Some(Chart::new(name.clone(), coords.clone(), *hatted).at(stmt.pos)?);
                }
                StmtKind::Let { name, value } => {
                    if self.is_coordinate(name) || matches!(name.as_str(), "t" | "w") {
                        return input(stmt.pos, format!("`{name}` would shadow a coordinate"));
                    }
                    let v = self.eval(value)?;
                    self.bindings.insert(name.clone(), v);
                }
                StmtKind::Change { name, forward, inverse } => {
                    let change = self.change(stmt.pos, forward, inverse.as_deref())?;
                    self.changes.insert(name.clone(), change);
                }
                StmtKind::Expr(e) => {
                    let v = self.eval(e)?;
                    emit(&v);
                }
            }
        }
        Ok(())
    }

    fn is_coordinate(&self, name: &str) -> bool {
        self.chart.borrow().as_ref().is_some_and(|c| c.base_coords().iter().any(|(n, _)| n == name))
    }

    fn active(&self, pos: Pos) -> Eval<Chart> {
        match &*self.chart.borrow() {
            Some(c) => Ok(c.clone()),
            None => input(pos, "no chart declared"),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        let p = Path::new(name);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.settings.base_dir.join(p)
        }
    }

    fn read(&self, pos: Pos, name: &str) -> Eval<String> {
        std::fs::read_to_string(self.path(name)).or_else(|e| input(pos, format!("cannot read `{name}`: {e}")))
    }

    fn change(
        &self,
        pos: Pos,
        forward: &[(String, Expr)],
        inverse: Option<&[(String, Expr)]>,
    ) -> Eval<CoordinateChange> {
        let chart = self.active(pos)?.unhatted();
        let components = |map: &[(String, Expr)]| -> Eval<Vec<SPoly>> {
            let mut out: Vec<Option<SPoly>> = vec![None; chart.n_base()];
            for (name, e) in map {
                let i = match chart.base_coords().iter().position(|(n, _)| n == name) {
                    Some(i) => i,
                    None => return input(e.pos, format!("`{name}` is not a coordinate")),
                };
                if out[i].is_some() {
                    return input(e.pos, format!("`{name}` is mapped twice"));
                }
                out[i] = Some(self.poly_on(e, &chart)?);
            }
            out.into_iter()
                .zip(chart.base_coords())
                .map(|(p, (n, _))| match p {
                    Some(p) => Ok(p),
                    None => input(pos, format!("no image given for `{n}`")),
                })
                .collect()
        };
        let fwd = components(forward)?;
        match inverse {
            Some(inv) => CoordinateChange::new(&chart, fwd, components(inv)?).at(pos),
            None => {
                let (a, shift) = affine_parts(&chart, &fwd).at(pos)?;
                CoordinateChange::affine(&chart, &a, &shift).at(pos)
            }
        }
    }

    fn poly_on(&self, e: &Expr, chart: &Chart) -> Eval<SPoly> {
        let v = self.eval(e)?;
        self.as_poly(e.pos, v)?.to_chart(chart).at(e.pos)
    }

    fn as_poly(&self, pos: Pos, v: Value) -> Eval<SPoly> {
        match v {
            Value::Poly(p) => Ok(p),
            Value::Scalar(r) => Ok(SPoly::constant(&self.active(pos)?, r)),
            other => input(pos, format!("expected a polynomial, found `{other}`")),
        }
    }

    fn poly(&self, e: &Expr) -> Eval<SPoly> {
        let v = self.eval(e)?;
        self.as_poly(e.pos, v)
    }

    fn scalar(&self, e: &Expr) -> Eval<BigRational> {
        match self.eval(e)? {
            Value::Scalar(r) => Ok(r),
            Value::Poly(p) if p.is_zero() => Ok(BigRational::zero()),
            Value::Poly(p) if p.len() == 1 && p.terms().all(|(m, _)| m.is_one()) => Ok(p.constant_term()),
            other => input(e.pos, format!("expected a number, found `{other}`")),
        }
    }

    fn natural(&self, e: &Expr) -> Eval<u32> {
        let r = self.scalar(e)?;
        match r.is_integer().then(|| r.numer().to_u32()).flatten() {
            Some(n) => Ok(n),
            None => input(e.pos, format!("expected a natural number, found {r}")),
        }
    }

    fn string(&self, e: &Expr) -> Eval<String> {
        match &e.kind {
            ExprKind::Str(s) => Ok(s.clone()),
            _ => input(e.pos, "expected a string literal"),
        }
    }

    /// Unhatted body of a density: the argument may be written on the hatted
    /// chart as long as it avoids `t` and `#t`.
    fn body(&self, e: &Expr) -> Eval<SPoly> {
        let p = self.poly(e)?;
        let base = p.chart().unhatted();
        p.to_chart(&base).at(e.pos)
    }

    fn hatted(&self, e: &Expr) -> Eval<SPoly> {
        let p = self.poly(e)?;
        let h = p.chart().hatted();
        p.to_chart(&h).at(e.pos)
    }

    fn density_var(&self, pos: Pos, name: &str) -> Eval<SPoly> {
        let h = self.active(pos)?.hatted();
        SPoly::named(&h, name).at(pos)
    }

    fn eval(&self, e: &Expr) -> Eval<Value> {
        let pos = e.pos;
        match &e.kind {
            ExprKind::Int(n) => Ok(Value::Scalar(BigRational::from_integer(n.clone()))),
            ExprKind::Str(_) => input(pos, "string literals are only allowed as file arguments"),
            ExprKind::Name(name) => {
                if let Some(v) = self.bindings.get(name) {
                    return Ok(v.clone());
                }
                match name.as_str() {
                    "t" => return Ok(Value::Poly(self.density_var(pos, "t")?)),
                    "w" => {
                        let w = &self.density_var(pos, "t")? * &self.density_var(pos, "#t")?;
                        return Ok(Value::Poly(w));
                    }
                    _ => {}
                }
                if self.is_coordinate(name) {
                    let c = self.active(pos)?;
                    return Ok(Value::Poly(SPoly::named(&c, name).at(pos)?));
                }
                if self.changes.contains_key(name) {
                    return input(pos, format!("`{name}` is a coordinate change; use transform(expr, {name})"));
                }
                input(pos, format!("unknown name `{name}`"))
            }
            ExprKind::Fiber(name) => {
                if name == "t" {
                    return Ok(Value::Poly(self.density_var(pos, "#t")?));
                }
                if !self.is_coordinate(name) {
                    return input(pos, format!("`#{name}`: `{name}` is not a coordinate"));
                }
                let c = self.active(pos)?;
                Ok(Value::Poly(SPoly::named(&c, &format!("#{name}")).at(pos)?))
            }
            ExprKind::Neg(a) => match self.eval(a)? {
                Value::Scalar(r) => Ok(Value::Scalar(-r)),
                v => Ok(Value::Poly(-self.as_poly(pos, v)?)),
            },
            ExprKind::Add(a, b) => self.arith(pos, a, b, |x, y| x + y, |x, y| x.checked_add(y)),
            ExprKind::Sub(a, b) => self.arith(pos, a, b, |x, y| x - y, |x, y| x.checked_sub(y)),
            ExprKind::Mul(a, b) => self.arith(pos, a, b, |x, y| x * y, |x, y| x.checked_mul(y)),
            ExprKind::Div(a, b) => {
                let d = match self.eval(b)? {
                    Value::Scalar(r) => r,
                    _ => return input(b.pos, "division is only by a nonzero number"),
                };
                if d.is_zero() {
                    return input(b.pos, "division by zero");
                }
                match self.eval(a)? {
                    Value::Scalar(r) => Ok(Value::Scalar(r / d)),
                    v => Ok(Value::Poly(self.as_poly(a.pos, v)?.scale(&d.recip()))),
                }
            }
            ExprKind::Pow(a, exp) => self.power(pos, a, exp),
            ExprKind::Call(name, groups) => self.call(pos, name, groups),
        }
    }

    fn arith(
        &self,
        pos: Pos,
        a: &Expr,
        b: &Expr,
        scalar: impl Fn(&BigRational, &BigRational) -> BigRational,
        poly: impl Fn(&SPoly, &SPoly) -> densilift_core::Result<SPoly>,
    ) -> Eval<Value> {
        let (x, y) = (self.eval(a)?, self.eval(b)?);
        if let (Value::Scalar(x), Value::Scalar(y)) = (&x, &y) {
            return Ok(Value::Scalar(scalar(x, y)));
        }
        let (x, y) = (self.as_poly(a.pos, x)?, self.as_poly(b.pos, y)?);
        let (x, y) = promote(x, y).at(pos)?;
        Ok(Value::Poly(poly(&x, &y).at(pos)?))
    }

    fn power(&self, pos: Pos, a: &Expr, exp: &BigRational) -> Eval<Value> {
        let base = self.eval(a)?;
        if let Value::Scalar(r) = &base {
            return match rational_pow(r, exp) {
                Some(v) if !(r.is_zero() && exp.is_negative()) => Ok(Value::Scalar(v)),
                _ => input(pos, format!("({r})^({exp}) is not a rational number")),
            };
        }
        let p = self.as_poly(a.pos, base)?;
        if exp.is_integer() && !exp.is_negative() {
            return match exp.numer().to_u32() {
                Some(n) => Ok(Value::Poly(p.pow(n))),
                None => input(pos, "exponent too large"),
            };
        }
        // Negative and fractional powers only for c·t^μ.
        let mut terms = p.terms();
        let (m, c) = match (terms.next(), terms.next()) {
            (Some(t), None) if t.0.exponents().iter().all(|&e| e == 0) && !t.0.t_exponent().is_zero() => t,
            _ => return input(pos, "negative and fractional powers apply only to c*t^a"),
        };
        let k = rational_pow(c, exp)
            .ok_or_else(|| Failure::Kernel { pos, error: Error::IrrationalPower(format!("({c})^({exp})")) })?;
        let t = SPoly::t_pow(p.chart(), m.t_exponent() * exp).at(pos)?;
        Ok(Value::Poly(t.scale(&k)))
    }

    fn args<'a>(&self, pos: Pos, name: &str, groups: &'a [Vec<Expr>], n: usize) -> Eval<&'a [Expr]> {
        match groups {
            [g] if g.len() == n => Ok(g),
            _ => input(pos, format!("`{name}` takes {n} argument(s)")),
        }
    }

    fn call(&self, pos: Pos, name: &str, groups: &[Vec<Expr>]) -> Eval<Value> {
        let poly = Value::Poly;
        match name {
            "bracket" => {
                let a = self.args(pos, name, groups, 2)?;
                let (f, g) = promote(self.poly(&a[0])?, self.poly(&a[1])?).at(pos)?;
                Ok(poly(antibracket(&f, &g).at(pos)?))
            }
            "div" => {
                let a = self.args(pos, name, groups, 1)?;
                Ok(poly(divergence(&self.poly(&a[0])?)))
            }
            "delta" => {
                let a = self.args(pos, name, groups, 1)?;
                Ok(poly(delta_op(&self.hatted(&a[0])?).at(pos)?))
            }
            "lift" => {
                let a = self.args(pos, name, groups, 2)?;
                let s = DensityElement::new(self.body(&a[0])?, self.scalar(&a[1])?).at(pos)?;
                Ok(poly(lift(&s).at(pos)?))
            }
            "project" => {
                let a = self.args(pos, name, groups, 1)?;
                Ok(Value::Densities(project_base(&self.hatted(&a[0])?).at(pos)?))
            }
            "rary" => {
                let (s, fs) = match groups {
                    [s, fs] if s.len() == 1 => (&s[0], fs),
                    _ => return input(pos, "usage: rary(S; f1, ..., fr)"),
                };
                let s = self.poly(s)?;
                let fs = fs
                    .iter()
                    .map(|f| self.poly(f).and_then(|p| promote(s.clone(), p).map(|(_, p)| p).at(f.pos)))
                    .collect::<Eval<Vec<_>>>()?;
                let s = match fs.first() {
                    Some(f) => promote(s, f.clone()).at(pos)?.0,
                    None => s,
                };
                Ok(poly(r_ary_bracket(&s, &fs).at(pos)?))
            }
            "master" => {
                let a = self.args(pos, name, groups, 1)?;
                let ss = master_check(&self.poly(&a[0])?).at(pos)?;
                let passed = ss.is_zero();
                let detail = if passed { String::new() } else { format!("(S,S) = {ss}") };
                Ok(Value::Check { passed, detail })
            }
            "residual" => {
                let a = self.args(pos, name, groups, 3)?;
                let s = DensityElement::new(self.body(&a[0])?, self.scalar(&a[2])?).at(pos)?;
                let (body, q) = promote(s.body().clone(), self.body(&a[1])?).at(pos)?;
                let r = master_residual_of_lift(&DensityElement::new(body, s.weight().clone()).at(pos)?, &q).at(pos)?;
                Ok(poly(r.residual))
            }
            "decompose" => {
                let a = self.args(pos, name, groups, 3)?;
                let s = DensityElement::new(self.body(&a[1])?, self.scalar(&a[2])?).at(pos)?;
                let full = self.hatted(&a[0])?;
                Ok(poly(decompose(&full, &s).at(pos)?.q_part().clone()))
            }
            "commute" => {
                let a = self.args(pos, name, groups, 4)?;
                let s = DensityElement::new(self.body(&a[0])?, self.scalar(&a[1])?).at(pos)?;
                let u = DensityElement::new(self.body(&a[2])?, self.scalar(&a[3])?).at(pos)?;
                Ok(poly(lift_commutes_check(&s, &u).at(pos)?))
            }
            "classify" => {
                let a = self.args(pos, name, groups, 3)?;
                let s = DensityElement::new(self.body(&a[0])?, self.scalar(&a[1])?).at(pos)?;
                Ok(Value::Basis(classify_lifts(&s, self.natural(&a[2])?).at(pos)?))
            }
            "qlifts" => {
                let a = self.args(pos, name, groups, 1)?;
                let chart = self.active(pos)?.unhatted();
                Ok(Value::Basis(q_manifold_lifts(&chart, self.natural(&a[0])?).at(pos)?))
            }
            "evolve" => {
                let a = self.args(pos, name, groups, 4)?;
                let h = self.body(&a[0])?;
                let f = self.body(&a[1])?;
                let psi = self.body(&a[2])?;
                Ok(poly(density_evolution(&h, &f, &psi, &self.scalar(&a[3])?).at(pos)?))
            }
            "transform" => {
                let a = self.args(pos, name, groups, 2)?;
                let change = match &a[1].kind {
                    ExprKind::Name(n) => match self.changes.get(n) {
                        Some(c) => c,
                        None => return input(a[1].pos, format!("unknown coordinate change `{n}`")),
                    },
                    _ => return input(a[1].pos, "expected the name of a coordinate change"),
                };
                let out = transform_hatted(&self.hatted(&a[0])?, change, self.settings.strict_orientation).at(pos)?;
                if out.orientation_reversed {
                    return Ok(Value::Text(format!("{} (orientation reversed)", out.poly)));
                }
                Ok(poly(out.poly))
            }
            "parity" => {
                let a = self.args(pos, name, groups, 1)?;
                let p = self.poly(&a[0])?;
                Ok(Value::Text(match p.parity_of().pure() {
                    Some(par) => par.to_string(),
                    None if p.is_zero() => "zero".into(),
                    None => "mixed".into(),
                }))
            }
            "selfcheck" => {
                let a = self.args(pos, name, groups, 1)?;
                let n = self.natural(&a[0])? as usize;
                let samples = SampleSet::generate(self.settings.seed, n);
                let failing: Vec<&str> = Identity::ALL
                    .iter()
                    .filter(|&&i| first_violation(&SignConvention::PINNED, i, &samples).is_some())
                    .map(|i| i.label())
                    .collect();
                let detail = if failing.is_empty() {
                    format!("{} identities on {n} samples", Identity::ALL.len())
                } else {
                    failing.join("; ")
                };
                Ok(Value::Check { passed: failing.is_empty(), detail })
            }
            "liealg" | "extension" | "load" => self.file_command(pos, name, groups),
            _ => input(pos, format!("unknown function `{name}`")),
        }
    }

    fn file_command(&self, pos: Pos, name: &str, groups: &[Vec<Expr>]) -> Eval<Value> {
        let a = self.args(pos, name, groups, 1)?;
        let file = self.string(&a[0])?;
        let text = self.read(a[0].pos, &file)?;
        match name {
            "liealg" => {
                let g = LieAlgebraData::from_json(&text).at(pos)?;
                let pi = lie_poisson(&g).at(pos)?;
                *self.chart.borrow_mut() = Some(pi.chart().clone());
                Ok(Value::Poly(pi.body().clone()))
            }
            "extension" => {
                let g = LieAlgebraData::from_json(&text).at(pos)?;
                Ok(Value::Vector(supertrace_extension(&g).at(pos)?))
            }
            _ => {
                let ser: SerializedPoly = serde_json::from_str(&text)
                    .or_else(|e| input(a[0].pos, format!("`{file}` is not a serialized polynomial: {e}")))?;
                let p = from_serialized(&ser).at(pos)?;
                self.chart.borrow_mut().get_or_insert_with(|| p.chart().clone());
                Ok(Value::Poly(p))
            }
        }
    }
}

/// Moves an unhatted operand onto the hatted chart of the other one.
pub fn promote(a: SPoly, b: SPoly) -> densilift_core::Result<(SPoly, SPoly)> {
    if a.chart() == b.chart() {
        return Ok((a, b));
    }
    if a.chart().same_base(b.chart()) {
        if a.chart().is_hatted() && !b.chart().is_hatted() {
            let b = b.to_chart(a.chart())?;
            return Ok((a, b));
        }
        if b.chart().is_hatted() && !a.chart().is_hatted() {
            let a = a.to_chart(b.chart())?;
            return Ok((a, b));
        }
    }
    Err(Error::ChartMismatch { left: format!("{:?}", a.chart()), right: format!("{:?}", b.chart()) })
}

/// Matrix and offset of an affine map `x = A x' + b`.
fn affine_parts(chart: &Chart, forward: &[SPoly]) -> densilift_core::Result<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
    let n = chart.n_base();
    let mut a = vec![vec![BigRational::zero(); n]; n];
    let mut shift = vec![BigRational::zero(); n];
    for (i, f) in forward.iter().enumerate() {
        for (m, c) in f.terms() {
            let degree: u32 = m.exponents().iter().sum();
            if m.is_one() {
                shift[i] = c.clone();
            } else if degree == 1 && m.t_exponent().is_zero() {
                let j = (0..n).find(|&j| m.exponent(chart.base(j)) == 1).ok_or_else(|| {
                    Error::InvalidChange("affine components may only involve base coordinates".into())
                })?;
                a[i][j] = c.clone();
            } else {
                return Err(Error::InvalidChange(
                    "non-affine change: give the inverse map with `inverse { ... }`".into(),
                ));
            }
        }
    }
    Ok((a, shift))
}
