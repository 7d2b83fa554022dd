use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use densilift_cli::{run, Options};
use densilift_core::bracket::pinning;

/// Run a densilift script.
#[derive(Parser)]
#[command(name = "densilift", version)]
struct Args {
    /// Script file; `-` or nothing reads standard input.
    script: Option<PathBuf>,
    /// Print one JSON value per line instead of text.
    #[arg(long)]
    json: bool,
    /// Reject coordinate changes with negative Jacobian determinant.
    #[arg(long)]
    strict_orientation: bool,
    /// Seed for randomized self-checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print the sign convention ledger (pinning run with this seed) first.
    #[arg(long)]
    ledger: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.ledger {
        print!("{}", pinning::ledger(&pinning::pin(args.seed, 200)));
        if args.script.is_none() {
            return ExitCode::SUCCESS;
        }
    }
    let (source, base_dir) = match &args.script {
        Some(p) if p.as_os_str() != "-" => match std::fs::read_to_string(p) {
            Ok(s) => (s, p.parent().map(PathBuf::from)),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        _ => {
            let mut s = String::new();
            if let Err(e) = std::io::stdin().read_to_string(&mut s) {
                eprintln!("error: cannot read standard input: {e}");
                return ExitCode::from(2);
            }
            (s, None)
        }
    };
    let options = Options { json: args.json, strict_orientation: args.strict_orientation, seed: args.seed, base_dir };
    let out = run(&source, &options);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
