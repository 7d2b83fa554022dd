//! Script runner for the densilift kernel.
//!
//! A script declares a chart, binds polynomials and calls kernel
//! operations. Each bare expression prints one line:
//!
//! ```text
//! chart C { even x, y; odd xi }
//! let s = x * #y * #x
//! bracket(s, x)
//! lift(s, 1/2)
//! master(lift(s, 0))
//! ```

pub mod interp;
pub mod serial;
pub mod syntax;

use std::path::PathBuf;

pub use interp::{Failure, Interpreter, Settings, Value};
pub use serial::{from_serialized, to_serialized, SerializedPoly};

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub json: bool,
    pub strict_orientation: bool,
    pub seed: u64,
    pub base_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    /// 0 success, 2 bad input, 3 domain error, 4 failed verification.
    pub code: i32,
}

pub fn run(source: &str, options: &Options) -> Outcome {
    let mut stdout = String::new();
    let script = match syntax::parse(source) {
        Ok(s) => s,
        Err(e) => {
            return Outcome { stdout, stderr: format!("error at {}: {}\n", e.pos, e.message), code: 2 };
        }
    };
    let mut interp = Interpreter::new(Settings {
        strict_orientation: options.strict_orientation,
        seed: options.seed,
        base_dir: options.base_dir.clone().unwrap_or_else(|| PathBuf::from(".")),
    });
    let mut failed_check = false;
    let result = interp.run(&script, |v| {
        if let Value::Check { passed: false, .. } = v {
            failed_check = true;
        }
        if options.json {
            stdout.push_str(&v.to_json().to_string());
        } else {
            stdout.push_str(&v.to_string());
        }
        stdout.push('\n');
    });
    match result {
        Err(f) => Outcome { stdout, stderr: format!("{f}\n"), code: f.exit_code() },
        Ok(()) => Outcome { stdout, stderr: String::new(), code: if failed_check { 4 } else { 0 } },
    }
}
