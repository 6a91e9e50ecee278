//! `cgk` — batch front end for the congruence spectral-gap toolkit:
//! exact gap constants and thresholds, finite group orders, centralizer
//! scans, coadjoint-orbit bounds, hyperbolic lattice counting, and
//! spherical-function profiles, with reproducible JSON/CSV artifacts and a
//! machine-readable manifest per run.

use std::process::ExitCode;

mod args;
mod commands;
mod manifest;

use args::Args;

const USAGE: &str = "\
cgk — congruence spectral-gap toolkit

USAGE:
    cgk <subcommand> [--flag value ...]

SUBCOMMANDS:
    gap          exact spectral-gap report
                 --kind SO|SU --n N --alpha P/Q [--epsilon P/Q] [--out DIR]
    order        |G(Z/q)| via CRT over prime powers
                 --family SL|SO|SU --n N --q Q [--out DIR]
    centralizer  centralizer dimensions in g(F_p), one element or full scan
                 --family SL|SO|SU --n N --p P (--x '[[..],..]' [--group-count] | --scan)
                 [--out DIR]
    repbound     new-representation dimension bounds
                 --family SL|SO|SU --n N (--p P --r R | --q Q [--epsilon P/Q])
                 [--input FILE.json] [--out DIR]
    count        lattice points of Gamma(q) in SL2(Z) by hyperbolic distance
                 --q Q --rmax R [--grid N] [--alpha P/Q] [--shards S] [--out DIR]
    spherical    radial spherical-function profile
                 --n 2|3 --s VALUE [--imaginary] --tmax T [--points N] [--out DIR]
    verify-all   run the full verification suite; nonzero exit on failure
                 [--out DIR] [--rmax R]

OUTPUT:
    Each run writes its data files plus <subcommand>.manifest.json into the
    output directory (default cgk-out). JSON for reports, CSV for grids,
    UTF-8 with LF line endings. Rational values serialize as \"p/q\" strings.
    CSV column orders: count: T,N,bound,ratio; spherical: t,phi,scaled.
    SO/SU subcommands accept an optional --form '[[..],..]' invariant matrix
    (identity when omitted).

ENVIRONMENT:
    CGK_BUDGET   overrides the enumeration budget (default 100000000)

EXIT CODES:
    0 success, 1 verification failure, 2 usage error, 3 budget exhausted
";

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let Some(sub) = argv.first() else {
        eprint!("{USAGE}");
        return ExitCode::from(2);
    };
    let rest = &argv[1..];
    let parsed = match Args::parse(rest) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            eprint!("{USAGE}");
            return ExitCode::from(2);
        }
    };
    let result = match sub.as_str() {
        "gap" => commands::run_gap(&parsed),
        "order" => commands::run_order(&parsed),
        "centralizer" => commands::run_centralizer(&parsed),
        "repbound" => commands::run_repbound(&parsed),
        "count" => commands::run_count(&parsed),
        "spherical" => commands::run_spherical(&parsed),
        "verify-all" => commands::run_verify_all(&parsed),
        other => {
            eprintln!("error: unknown subcommand {other:?}");
            eprint!("{USAGE}");
            return ExitCode::from(2);
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(commands::CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprint!("{USAGE}");
            ExitCode::from(2)
        }
        Err(commands::CliError::Budget(msg)) => {
            eprintln!("error (budget): {msg}");
            ExitCode::from(3)
        }
        Err(commands::CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
