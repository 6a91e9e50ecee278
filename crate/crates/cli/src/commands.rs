//! Subcommand handlers. Each one validates flags, runs the corresponding
//! library pipeline, writes its data artifacts plus a run manifest, and
//! prints the main result to stdout.

use std::path::PathBuf;

use cgk_core::acceptance::{self, AcceptanceConfig};
use cgk_core::groupscheme::{
    self, CongruenceLevel, FamilyKind, GroupContext, GroupError, GroupFamily,
};
use cgk_core::hypcount;
use cgk_core::liealg::{self, LieError};
use cgk_core::rational::Rat;
use cgk_core::repbound::{self, RepError};
use cgk_core::ringalg::{Mat, Ring};
use cgk_core::spectral::{self, SParam, SpectralError};

use crate::args::Args;
use crate::manifest::RunWriter;

pub enum CliError {
    Usage(String),
    Budget(String),
    Failure(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("io error: {e}"))
    }
}

fn classify_group(e: GroupError) -> CliError {
    match e {
        GroupError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
        GroupError::RankOutOfRange { .. }
        | GroupError::BadLevel(_)
        | GroupError::FormInvalid(_)
        | GroupError::WrongRingKind
        | GroupError::BadPrime { .. } => CliError::Usage(e.to_string()),
        other => CliError::Failure(other.to_string()),
    }
}

fn classify_lie(e: LieError) -> CliError {
    match e {
        LieError::Group(g) => classify_group(g),
        other => CliError::Failure(other.to_string()),
    }
}

fn classify_rep(e: RepError) -> CliError {
    match e {
        RepError::Group(g) => classify_group(g),
        RepError::Lie(l) => classify_lie(l),
        RepError::UnsupportedRank { .. } | RepError::BadExponent { .. } | RepError::NegativeEpsilon => {
            CliError::Usage(e.to_string())
        }
    }
}

fn classify_spectral(e: SpectralError) -> CliError {
    match e {
        SpectralError::Rep(r) => classify_rep(r),
        other => CliError::Usage(other.to_string()),
    }
}

fn budget_from_env() -> u64 {
    std::env::var("CGK_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or_else(groupscheme::default_budget)
}

fn out_dir(args: &Args) -> PathBuf {
    PathBuf::from(args.get("out").unwrap_or("cgk-out"))
}

fn parse_kind(raw: &str) -> Result<FamilyKind, CliError> {
    FamilyKind::parse(raw).ok_or_else(|| CliError::Usage(format!("unknown family kind {raw:?}")))
}

fn parse_rat(args: &Args, key: &str, default: Option<Rat>) -> Result<Rat, CliError> {
    match (args.get(key), default) {
        (Some(raw), _) => {
            Rat::parse(raw).map_err(|e| CliError::Usage(format!("--{key}: {e}")))
        }
        (None, Some(d)) => Ok(d),
        (None, None) => Err(CliError::Usage(format!("missing required flag --{key}"))),
    }
}

fn family_from_args(args: &Args, kind_flag: &str) -> Result<GroupFamily, CliError> {
    let kind = parse_kind(args.require(kind_flag).map_err(CliError::Usage)?)?;
    let n: usize = args.parsed("n").map_err(CliError::Usage)?;
    let form = match args.get("form") {
        None => None,
        Some(raw) => Some(
            serde_json::from_str::<Vec<Vec<i64>>>(raw)
                .map_err(|e| CliError::Usage(format!("--form: {e}")))?,
        ),
    };
    GroupFamily::new(kind, n, form).map_err(classify_group)
}

pub fn run_gap(args: &Args) -> Result<u8, CliError> {
    let kind = parse_kind(args.require("kind").map_err(CliError::Usage)?)?;
    let n: usize = args.parsed("n").map_err(CliError::Usage)?;
    let alpha = parse_rat(args, "alpha", None)?;
    let epsilon = parse_rat(args, "epsilon", Some(Rat::ZERO))?;
    let report = spectral::gap_report(kind, n, alpha, epsilon).map_err(classify_spectral)?;
    let mut w = RunWriter::new("gap", &out_dir(args), args.all().clone(), budget_from_env())?;
    w.branch("exact-rational");
    w.write_json("gap.json", &report)?;
    w.finish()?;
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    Ok(0)
}

pub fn run_order(args: &Args) -> Result<u8, CliError> {
    let family = family_from_args(args, "family")?;
    let q: u64 = args.parsed("q").map_err(CliError::Usage)?;
    let budget = budget_from_env();
    let level = CongruenceLevel::new(q).map_err(classify_group)?;
    let v = groupscheme::index_v(&family, &level, budget).map_err(classify_group)?;
    let per_prime: Vec<serde_json::Value> = level
        .factors
        .iter()
        .map(|&(p, r)| {
            serde_json::json!({
                "p": p,
                "r": r,
                "good_prime": groupscheme::is_good_prime(&family, p),
            })
        })
        .collect();
    let report = serde_json::json!({
        "family": family.to_json(),
        "q": q,
        "order": v.to_string(),
        "factors": per_prime,
        "branch": "enumerated field level x kernel filtration",
    });
    let mut w = RunWriter::new("order", &out_dir(args), args.all().clone(), budget)?;
    w.branch("enumerated");
    w.write_json("order.json", &report)?;
    w.finish()?;
    println!("{v}");
    Ok(0)
}

fn parse_matrix(ring: Ring, raw: &str, dim: usize) -> Result<Mat, CliError> {
    let rows: Vec<Vec<serde_json::Value>> =
        serde_json::from_str(raw).map_err(|e| CliError::Usage(format!("--x: {e}")))?;
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(CliError::Usage(format!("--x: expected a {dim}x{dim} matrix")));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for row in rows {
        for v in row {
            let e = if let Some(i) = v.as_i64() {
                ring.embed(i)
            } else if let Some(pair) = v.as_array() {
                let a = pair.first().and_then(|x| x.as_i64()).unwrap_or(0);
                let b = pair.get(1).and_then(|x| x.as_i64()).unwrap_or(0);
                ring.embed_pair(a, b)
            } else {
                return Err(CliError::Usage("--x entries must be integers or [a,b] pairs".into()));
            };
            entries.push(e);
        }
    }
    Mat::new(ring, dim, entries).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn run_centralizer(args: &Args) -> Result<u8, CliError> {
    let family = family_from_args(args, "family")?;
    let p: u64 = args.parsed("p").map_err(CliError::Usage)?;
    let budget = budget_from_env();
    let ring = match family.kind {
        FamilyKind::Su => Ring::quadratic_field(p),
        _ => Ring::prime_field(p),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let ctx =
        GroupContext::new_allowing_bad_primes(family.clone(), ring).map_err(classify_group)?;
    let mut w = RunWriter::new("centralizer", &out_dir(args), args.all().clone(), budget)?;
    if args.flag("scan") {
        let report = liealg::scan_inequality(&ctx, budget).map_err(classify_lie)?;
        w.branch("exhaustive scan");
        w.write_json("centralizer_scan.json", &report)?;
        w.finish()?;
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
        return Ok(0);
    }
    let raw = args.require("x").map_err(CliError::Usage)?;
    let x = parse_matrix(ring, raw, family.matrix_size())?;
    let group_budget = if args.flag("group-count") {
        Some(budget)
    } else {
        None
    };
    let report = liealg::centralizer_report(&ctx, &x, group_budget).map_err(classify_lie)?;
    w.branch(if group_budget.is_some() {
        "kernel + enumerated group"
    } else {
        "kernel"
    });
    w.write_json("centralizer.json", &report)?;
    w.finish()?;
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    Ok(0)
}

pub fn run_repbound(args: &Args) -> Result<u8, CliError> {
    let budget = budget_from_env();
    // flags or an input JSON file {kind, n, p, r} / {kind, n, q}
    let (family, spec_p, spec_r, spec_q, epsilon) = if let Some(path) = args.get("input") {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("--input {path}: {e}")))?;
        let v: serde_json::Value =
            serde_json::from_str(&raw).map_err(|e| CliError::Usage(format!("--input: {e}")))?;
        let family = GroupFamily::from_json(&v).map_err(classify_group)?;
        let eps = match v.get("epsilon").and_then(|e| e.as_str()) {
            Some(s) => Rat::parse(s).map_err(|e| CliError::Usage(e.to_string()))?,
            None => Rat::new(1, 100),
        };
        (
            family,
            v.get("p").and_then(|x| x.as_u64()),
            v.get("r").and_then(|x| x.as_u64()).map(|r| r as u32),
            v.get("q").and_then(|x| x.as_u64()),
            eps,
        )
    } else {
        let family = family_from_args(args, "family")?;
        let eps = parse_rat(args, "epsilon", Some(Rat::new(1, 100)))?;
        (
            family,
            args.get("p").map(|_| args.parsed("p").map_err(CliError::Usage)).transpose()?,
            args.get("r").map(|_| args.parsed("r").map_err(CliError::Usage)).transpose()?,
            args.get("q").map(|_| args.parsed("q").map_err(CliError::Usage)).transpose()?,
            eps,
        )
    };
    let mut w = RunWriter::new("repbound", &out_dir(args), args.all().clone(), budget)?;
    let report = match (spec_p, spec_r, spec_q) {
        (Some(p), Some(r), None) => {
            let orbit = repbound::min_new_orbit(&family, p, r, budget).map_err(classify_rep)?;
            w.branch(&orbit.branch.clone());
            serde_json::json!({ "family": family.to_json(), "orbit": orbit })
        }
        (None, None, Some(q)) => {
            let level = CongruenceLevel::new(q).map_err(classify_group)?;
            let dim = repbound::new_rep_dim_lower(&family, &level, budget).map_err(classify_rep)?;
            for f in &dim.factors {
                w.branch(&f.branch);
            }
            let mult =
                repbound::multiplicity_lower(&family, &level, epsilon, budget).map_err(classify_rep)?;
            serde_json::json!({
                "family": family.to_json(),
                "rep_dim_lower": dim,
                "multiplicity_lower": mult,
            })
        }
        _ => {
            return Err(CliError::Usage(
                "repbound needs either --p and --r, or --q".to_string(),
            ))
        }
    };
    w.write_json("repbound.json", &report)?;
    w.finish()?;
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    Ok(0)
}

pub fn run_count(args: &Args) -> Result<u8, CliError> {
    let q: u32 = args.parsed_or("q", 1).map_err(CliError::Usage)?;
    let rmax: f64 = args.parsed("rmax").map_err(CliError::Usage)?;
    let grid_points: usize = args.parsed_or("grid", 24).map_err(CliError::Usage)?;
    let shards: usize = args.parsed_or("shards", 1).map_err(CliError::Usage)?;
    let alpha = parse_rat(args, "alpha", Some(Rat::new(25, 64)))?;
    if !(rmax > 1.0) || grid_points < 2 {
        return Err(CliError::Usage("need --rmax > 1 and --grid >= 2".to_string()));
    }
    let budget = budget_from_env();
    // candidate work is about 10·R² column pairs plus solutions
    if 10.0 * rmax * rmax > budget as f64 {
        return Err(CliError::Budget(format!(
            "rmax {rmax} needs ~{} candidates, budget {budget}",
            (10.0 * rmax * rmax) as u64
        )));
    }
    let fam = GroupFamily::sl(1).expect("SL2");
    let level = CongruenceLevel::new(q as u64).map_err(classify_group)?;
    let v_q = groupscheme::index_v(&fam, &level, budget).map_err(classify_group)?;
    let grid = hypcount::default_grid(1.0, rmax, grid_points);
    let counts = hypcount::count_grid(&[q], &grid, shards);
    let summary = hypcount::summarize(&counts, 0, v_q, alpha.to_f64(), 0.5)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut csv = String::from("T,N,bound,ratio\n");
    for i in 0..summary.t_values.len() {
        csv.push_str(&format!(
            "{:.6},{},{:.6e},{:.6e}\n",
            summary.t_values[i], summary.counts[i], summary.bounds[i], summary.ratios[i]
        ));
    }
    let mut w = RunWriter::new("count", &out_dir(args), args.all().clone(), budget)?;
    w.branch("enumerated");
    w.branch("fitted");
    w.write_data(&format!("count_q{q}.csv"), csv.as_bytes())?;
    w.write_json(&format!("count_q{q}.json"), &summary)?;
    w.finish()?;
    println!(
        "q = {q}: V(q) = {v_q}, N(T_max) = {}, fitted tail slope = {}",
        summary.counts.last().expect("nonempty"),
        summary
            .fitted_tail_slope
            .map(|s| format!("{s:.4}"))
            .unwrap_or_else(|| "n/a".to_string())
    );
    Ok(0)
}

pub fn run_spherical(args: &Args) -> Result<u8, CliError> {
    let n: usize = args.parsed("n").map_err(CliError::Usage)?;
    let tmax: f64 = args.parsed("tmax").map_err(CliError::Usage)?;
    let points: usize = args.parsed_or("points", 101).map_err(CliError::Usage)?;
    let raw_s = args.require("s").map_err(CliError::Usage)?;
    let s_val: f64 = match raw_s.parse::<f64>() {
        Ok(v) => v,
        Err(_) => Rat::parse(raw_s)
            .map_err(|e| CliError::Usage(format!("--s: {e}")))?
            .to_f64(),
    };
    let s = if args.flag("imaginary") {
        SParam::Imaginary(s_val)
    } else {
        SParam::Real(s_val)
    };
    if points < 2 {
        return Err(CliError::Usage("need --points >= 2".to_string()));
    }
    let ts: Vec<f64> = (0..points)
        .map(|i| tmax * i as f64 / (points - 1) as f64)
        .collect();
    let phis = spectral::spherical_profile(n, s, &ts, 1e-9).map_err(classify_spectral)?;
    let rho = spectral::rho_of_dimension(n);
    let mut csv = String::from("t,phi,scaled\n");
    for (&t, &phi) in ts.iter().zip(&phis) {
        let scaled = match s {
            SParam::Real(sv) => phi * ((rho - sv) * t).exp(),
            SParam::Imaginary(_) => phi.abs() * (rho * t).exp() / (1.0 + t),
        };
        csv.push_str(&format!("{t:.6},{phi:.12e},{scaled:.12e}\n"));
    }
    let mut w = RunWriter::new("spherical", &out_dir(args), args.all().clone(), budget_from_env())?;
    w.branch("ode-dopri5");
    w.write_data("spherical.csv", csv.as_bytes())?;
    w.finish()?;
    println!(
        "n = {n}, s = {raw_s}{}: {} samples to t = {tmax}, phi(tmax) = {:.6e}",
        if args.flag("imaginary") { "i" } else { "" },
        points,
        phis.last().expect("nonempty")
    );
    Ok(0)
}

pub fn run_verify_all(args: &Args) -> Result<u8, CliError> {
    let mut cfg = AcceptanceConfig::from_env();
    if let Some(r) = args.get("rmax") {
        cfg.count_rmax = r
            .parse()
            .map_err(|_| CliError::Usage(format!("cannot parse --rmax value {r:?}")))?;
    }
    let outcomes = acceptance::run_all(&cfg);
    let mut w = RunWriter::new(
        "verify-all",
        &out_dir(args),
        args.all().clone(),
        cfg.enumeration_budget,
    )?;
    let mut all_passed = true;
    for o in &outcomes {
        println!("{}", o.summary_line());
        if !o.passed {
            all_passed = false;
            for line in &o.details {
                println!("    {line}");
            }
        }
        w.branch(&o.summary_line());
    }
    for (name, bytes) in acceptance::render_artifacts(&outcomes) {
        w.write_data(&name, &bytes)?;
    }
    if !all_passed {
        w.mark_partial();
    }
    w.finish()?;
    Ok(if all_passed { 0 } else { 1 })
}
