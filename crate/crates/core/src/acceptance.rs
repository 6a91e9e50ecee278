//! The built-in verification suite behind `cgk verify-all` and the
//! `acceptance` integration test: nine numbered criteria, each returning a
//! pass/fail outcome with the measured values, serialized deterministically.

use serde::Serialize;

use crate::groupscheme::{
    self, CongruenceLevel, EnumOptions, FamilyKind, GroupContext, GroupFamily,
};
use crate::hypcount;
use crate::liealg::{self, scan::ScanOptions, AlgebraBasis};
use crate::rational::Rat;
use crate::repbound::{self, gap_constants};
use crate::ringalg::{Mat, Ring};
use crate::spectral::{self, SParam};

/// Budgets and sizes for one full run of the suite.
#[derive(Clone, Debug)]
pub struct AcceptanceConfig {
    pub enumeration_budget: u64,
    /// Frobenius-norm radius for the lattice count (criterion 6).
    pub count_rmax: f64,
    pub grid_points: usize,
    /// Reduced radius used by the determinism double-run (criterion 9).
    pub determinism_rmax: f64,
    /// (X, Y) pair budget for the exhaustive centralizer scans.
    pub scan_pair_budget: u64,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig {
            enumeration_budget: groupscheme::default_budget(),
            count_rmax: 2000.0,
            grid_points: 24,
            determinism_rmax: 300.0,
            scan_pair_budget: 4_000_000_000,
        }
    }
}

impl AcceptanceConfig {
    /// Default config with the CGK_BUDGET override applied.
    pub fn from_env() -> Self {
        let mut cfg = AcceptanceConfig::default();
        if let Ok(v) = std::env::var("CGK_BUDGET") {
            if let Ok(b) = v.trim().parse::<u64>() {
                cfg.enumeration_budget = b;
            }
        }
        cfg
    }
}

/// Result of one criterion: id, verdict, and the measured evidence lines.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
    /// Extra data files this criterion contributes to the artifact set
    /// (name, contents).
    pub artifacts: Vec<(String, String)>,
}

impl CriterionOutcome {
    fn new(id: u32, name: &str) -> Self {
        CriterionOutcome {
            id,
            name: name.to_string(),
            passed: true,
            details: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, line: String) {
        if !ok {
            self.passed = false;
        }
        self.details.push(format!("[{}] {line}", if ok { "ok" } else { "FAIL" }));
    }

    fn note(&mut self, line: String) {
        self.details.push(format!("[--] {line}"));
    }

    pub fn summary_line(&self) -> String {
        format!(
            "criterion {} ({}): {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

/// 1. Constants table: η and e per family branch, the SO branch switch at
/// n = 6, and the exact identity e = (3/2)·η·dim G.
pub fn criterion_1_constants() -> CriterionOutcome {
    let mut out = CriterionOutcome::new(1, "constants table");
    let so_expect: [(usize, &str, usize); 9] = [
        (2, "2/9", 1),
        (3, "1/9", 1),
        (4, "1/15", 1),
        (5, "2/45", 1),
        (6, "8/63", 4),
        (7, "5/42", 5),
        (8, "1/9", 6),
        (9, "14/135", 7),
        (10, "16/165", 8),
    ];
    for (n, eta_s, e) in so_expect {
        let c = gap_constants(FamilyKind::So, n).expect("supported n");
        let eta = Rat::parse(eta_s).unwrap();
        out.check(
            c.eta == eta && c.e == e && c.rho == Rat::new(n as i128 - 1, 2),
            format!("SO n={n}: eta={} (expect {eta_s}), e={} (expect {e})", c.eta, c.e),
        );
        out.check(
            Rat::int(c.e as i128) == Rat::new(3, 2) * c.eta * Rat::int(c.dim_g as i128),
            format!("SO n={n}: e = (3/2)·eta·dim identity"),
        );
    }
    let su_expect: [(usize, &str); 6] = [
        (1, "2/9"),
        (2, "1/6"),
        (3, "2/15"),
        (4, "1/9"),
        (5, "2/21"),
        (6, "1/12"),
    ];
    for (n, eta_s) in su_expect {
        let c = gap_constants(FamilyKind::Su, n).expect("supported n");
        let eta = Rat::parse(eta_s).unwrap();
        out.check(
            c.eta == eta && c.e == n && c.rho == Rat::new(n as i128, 2),
            format!("SU n={n}: eta={} (expect {eta_s}), e={} (expect {n})", c.eta, c.e),
        );
        out.check(
            Rat::int(c.e as i128) == Rat::new(3, 2) * c.eta * Rat::int(c.dim_g as i128),
            format!("SU n={n}: e = (3/2)·eta·dim identity"),
        );
    }
    out
}

/// 2. Group orders and strong approximation: enumerated |SL₂(ℤ/q)| against
/// the CRT/filtration prediction, and kernel cardinality p^{dim 𝔤}.
pub fn criterion_2_orders(cfg: &AcceptanceConfig) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(2, "group orders / strong approximation");
    let fam = GroupFamily::sl(1).expect("SL2");
    let expected: [(u64, u128); 9] = [
        (2, 6),
        (3, 24),
        (4, 48),
        (5, 120),
        (6, 144),
        (8, 384),
        (9, 648),
        (10, 720),
        (12, 1152),
    ];
    for (q, want) in expected {
        let level = CongruenceLevel::new(q).expect("positive level");
        let predicted = groupscheme::index_v(&fam, &level, cfg.enumeration_budget)
            .expect("within budget");
        let enumerated = groupscheme::count_sl2_zq_naive(q) as u128;
        out.check(
            predicted == want && enumerated == want,
            format!("|SL2(Z/{q})|: enumerated {enumerated}, CRT/filtration {predicted}, expect {want}"),
        );
    }
    // kernel of reduction: p^{dim sl2} = p³ elements
    for (p, r) in [(3u64, 2u32), (5, 2), (2, 3)] {
        let ring = Ring::integers_mod(p, r).expect("prime");
        let ctx = GroupContext::new_allowing_bad_primes(fam.clone(), ring).expect("ctx");
        let small = Ring::integers_mod(p, r - 1).expect("prime");
        let ident = Mat::identity(small, 2);
        let mut kernel = 0u64;
        let opts = EnumOptions {
            budget: cfg.enumeration_budget,
            ..EnumOptions::default()
        };
        groupscheme::for_each_element(&ctx, opts, &mut |g| {
            if g.reduce_to(small).expect("reduce") == ident {
                kernel += 1;
            }
        })
        .expect("within budget");
        out.check(
            kernel as u128 == (p as u128).pow(3),
            format!("|ker(SL2(Z/{p}^{r}) -> SL2(Z/{p}^{}))| = {kernel}, expect {p}^3", r - 1),
        );
    }
    out
}

/// 3. Centralizer formulas over the seven exhaustive scans:
/// (a) |C_𝔤(X)| = p^{dim C} for every X, (b) closed form = measured for
/// every pure X, (c) dim C ≤ dim G − 2e for every nonzero X. The (b)/(c)
/// assertions apply where the algebra is center-free; sl₂(𝔽₂) has a
/// nonzero center (2 | n+1) and its violations are recorded as bad-prime
/// diagnostics instead, following the same policy as the parity skips.
pub fn criterion_3_centralizers(cfg: &AcceptanceConfig) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(3, "centralizer formulas (exhaustive scans)");
    let scans: [(&str, FamilyKind, usize, u64); 7] = [
        ("sl2(F2)", FamilyKind::Sl, 1, 2),
        ("sl2(F3)", FamilyKind::Sl, 1, 3),
        ("sl2(F5)", FamilyKind::Sl, 1, 5),
        ("sl3(F2)", FamilyKind::Sl, 2, 2),
        ("so3(F3)", FamilyKind::So, 2, 3),
        ("so4(F3)", FamilyKind::So, 3, 3),
        ("so5(F3)", FamilyKind::So, 4, 3),
    ];
    for (label, kind, n, p) in scans {
        let fam = GroupFamily::new(kind, n, None).expect("family");
        let ring = Ring::prime_field(p).expect("prime");
        let ctx = GroupContext::new_allowing_bad_primes(fam, ring).expect("ctx");
        let opts = ScanOptions {
            element_budget: 10_000_000,
            exhaustive_counts: true,
            pair_budget: cfg.scan_pair_budget,
        };
        let r = liealg::exhaustive_centralizer_scan(&ctx, &opts).expect("scan");
        out.check(
            r.count_mismatches == 0,
            format!(
                "{label}: (a) |C(X)| = p^dim for all {} X (mismatches {})",
                r.algebra_card, r.count_mismatches
            ),
        );
        if r.central_nonzero == 0 {
            out.check(
                r.closed_form_mismatches == 0,
                format!(
                    "{label}: (b) closed form = measured on {} pure X (mismatches {}, parity skips {})",
                    r.pure_elements, r.closed_form_mismatches, r.parity_skipped
                ),
            );
            out.check(
                r.inequality_holds_noncentral && r.inequality_holds_nonzero,
                format!(
                    "{label}: (c) max dim C = {} <= bound {} over nonzero X",
                    r.max_dim_noncentral, r.bound
                ),
            );
        } else {
            out.note(format!(
                "{label}: nonzero center ({} elements; p divides n+1): (b) mismatches {} of {} pure, \
                 (c) max dim {} vs bound {} — recorded as bad-prime diagnostic, not asserted",
                r.central_nonzero,
                r.closed_form_mismatches,
                r.pure_elements,
                r.max_dim_nonzero,
                r.bound
            ));
        }
    }
    out
}

/// 4. Killing nondegeneracy: unit Gram determinant over ℤ/p^k, k ≤ 3, at
/// the good primes of each family; the two degenerate bad-prime cases
/// (sl₃ and so₅ at p = 3) are computed and recorded.
pub fn criterion_4_killing() -> CriterionOutcome {
    let mut out = CriterionOutcome::new(4, "Killing nondegeneracy over Z/p^k");
    let cases: [(&str, FamilyKind, usize, &[u64]); 4] = [
        ("sl2", FamilyKind::Sl, 1, &[3, 5, 7]),
        ("sl3", FamilyKind::Sl, 2, &[5, 7]),
        ("so3", FamilyKind::So, 2, &[3, 5, 7]),
        ("so5", FamilyKind::So, 4, &[5, 7]),
    ];
    for (label, kind, n, primes) in cases {
        for &p in primes {
            for k in 1..=3u32 {
                let fam = GroupFamily::new(kind, n, None).expect("family");
                let ring = Ring::integers_mod(p, k).expect("prime");
                let ctx = GroupContext::new_allowing_bad_primes(fam, ring).expect("ctx");
                let basis = AlgebraBasis::new(&ctx).expect("basis");
                let ok = basis.killing_nondegenerate().expect("gram");
                out.check(ok, format!("{label} over Z/{p}^{k}: Gram determinant is a unit"));
            }
        }
    }
    // degenerate-by-construction diagnostics at p = 3
    for (label, kind, n, why) in [
        ("sl3", FamilyKind::Sl, 2, "3 divides n+1"),
        ("so5", FamilyKind::So, 4, "Killing form is 3·Tr(XY)"),
    ] {
        let fam = GroupFamily::new(kind, n, None).expect("family");
        let ring = Ring::prime_field(3).expect("prime");
        let ctx = GroupContext::new_allowing_bad_primes(fam, ring).expect("ctx");
        let basis = AlgebraBasis::new(&ctx).expect("basis");
        let degenerate = !basis.killing_nondegenerate().expect("gram");
        out.note(format!(
            "{label} over F_3: degenerate as expected ({why}): {degenerate} — recorded, not asserted"
        ));
    }
    out
}

/// 5. Orbit bound: for SL₂ at (p, r) ∈ {(3,2), (5,2), (3,3)}, the measured
/// minimum coadjoint orbit over X ≢ 0 mod p against (i) the centralizer
/// formula bound and (ii) the constant-free analytic floor p^{2re/3}
/// (compared exactly as min³ ≥ p^{2re}).
pub fn criterion_5_orbit_bound(cfg: &AcceptanceConfig) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(5, "coadjoint orbit bound");
    let fam = GroupFamily::sl(1).expect("SL2");
    let e = fam.rep_exponent_e();
    for (p, r) in [(3u64, 2u32), (5, 2), (3, 3)] {
        let res = repbound::min_new_orbit(&fam, p, r, cfg.enumeration_budget).expect("orbit");
        out.check(
            res.partition_exact && res.orbits_divide_group,
            format!(
                "(p={p}, r={r}): orbit partition exact over {} admissible X, sizes divide |G| = {}",
                res.admissible_count, res.group_order
            ),
        );
        out.check(
            res.min_orbit >= res.formula_bound,
            format!(
                "(p={p}, r={r}): min orbit {} >= formula bound {}",
                res.min_orbit, res.formula_bound
            ),
        );
        let lhs = res.min_orbit.pow(3);
        let rhs = repbound::analytic_floor_cubed(p, r, e);
        out.check(
            lhs >= rhs,
            format!(
                "(p={p}, r={r}): min orbit {} >= p^(2re/3) with e={e} (exact cube test {lhs} >= {rhs})",
                res.min_orbit
            ),
        );
    }
    out
}

/// 6. Counting exponents at desk scale: tail slope of log N(1,T), the
/// V(q)-normalized ratios for q ∈ {2,3,5}, and one-constant domination by
/// the comparison curve with α = 25/64.
pub fn criterion_6_counting(cfg: &AcceptanceConfig) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(6, "lattice counting exponents");
    let qs = [1u32, 2, 3, 5];
    let grid = hypcount::default_grid(2.0, cfg.count_rmax, cfg.grid_points);
    let counts = hypcount::count_grid(&qs, &grid, 1);
    let rho = 0.5;
    let alpha = 25.0 / 64.0;
    let fam = GroupFamily::sl(1).expect("SL2");
    let vq: Vec<u128> = qs
        .iter()
        .map(|&q| {
            let level = CongruenceLevel::new(q as u64).expect("level");
            groupscheme::index_v(&fam, &level, cfg.enumeration_budget).expect("order")
        })
        .collect();

    // CSV artifact: q,T,N,bound,ratio
    let mut csv = String::from("q,T,N,bound,ratio\n");
    for (qi, &q) in qs.iter().enumerate() {
        for (ti, &t) in counts.t_values.iter().enumerate() {
            let n = counts.counts[qi][ti];
            let b = hypcount::bound_curve(t, vq[qi] as f64, alpha, rho).expect("alpha in range");
            csv.push_str(&format!("{q},{t:.6},{n},{b:.6e},{:.6e}\n", n as f64 / b));
        }
    }
    out.artifacts.push(("counts.csv".to_string(), csv));

    let slope = hypcount::fit_tail_slope(&counts.t_values, &counts.counts[0], 6).expect("fit");
    out.check(
        (0.85..=1.15).contains(&slope),
        format!("fitted tail slope of log N(1,T): {slope:.4} in [0.85, 1.15]"),
    );

    let nt = counts.t_values.len();
    let tail_start = nt - (nt / 3).max(6).min(nt);
    for (qi, &q) in qs.iter().enumerate().skip(1) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for ti in tail_start..nt {
            let r = counts.counts[qi][ti] as f64 * vq[qi] as f64 / counts.counts[0][ti] as f64;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        out.check(
            lo >= 0.4 && hi <= 2.5,
            format!("N({q},T)·V({q})/N(1,T) on tail: [{lo:.3}, {hi:.3}] within [0.4, 2.5]"),
        );
    }

    // one-constant domination: the per-level fitted constants against the
    // comparison curve must agree across q up to the same window
    let mut c_of_q = Vec::new();
    for (qi, &q) in qs.iter().enumerate() {
        let mut c = 0.0f64;
        for ti in tail_start..nt {
            let t = counts.t_values[ti];
            let b = hypcount::bound_curve(t, vq[qi] as f64, alpha, rho).expect("alpha");
            c = c.max(counts.counts[qi][ti] as f64 / b);
        }
        c_of_q.push((q, c));
    }
    let c1 = c_of_q[0].1;
    for &(q, c) in &c_of_q[1..] {
        let rel = c / c1;
        out.check(
            (0.4..=2.5).contains(&rel),
            format!("domination constant c({q})/c(1) = {rel:.3} within [0.4, 2.5] (c(1) = {c1:.3})"),
        );
    }
    out
}

/// 7. Spherical decay: scaled bands within max/min ≤ 10 for
/// s ∈ {ρ/4, ρ/2, 3ρ/4} at n ∈ {2, 3}; φ_ρ ≡ 1 to 1e−9.
pub fn criterion_7_spherical() -> CriterionOutcome {
    let mut out = CriterionOutcome::new(7, "spherical function decay");
    for n in [2usize, 3] {
        let rho = spectral::rho_of_dimension(n);
        for frac in [0.25, 0.5, 0.75] {
            let prof = spectral::decay_profile(n, SParam::Real(rho * frac), 1e-9).expect("ode");
            out.check(
                prof.band_ratio <= 10.0,
                format!(
                    "n={n}, s={}ρ: band ratio {:.4} <= 10 over t in [2, 25]",
                    frac, prof.band_ratio
                ),
            );
        }
        let ts: Vec<f64> = (0..=50).map(|i| 0.5 * i as f64).collect();
        let phis = spectral::spherical_profile(n, SParam::Real(rho), &ts, 1e-9).expect("ode");
        let max_dev = phis.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        out.check(
            max_dev <= 1e-9,
            format!("n={n}, s=ρ: max |φ−1| = {max_dev:.2e} <= 1e-9"),
        );
    }
    out
}

/// 8. End-to-end gap: threshold of gap_report(SO, 2, 25/64, 0) is exactly
/// 119/288, and the multiplicity-upper exponent at the threshold equals η.
pub fn criterion_8_gap() -> CriterionOutcome {
    let mut out = CriterionOutcome::new(8, "end-to-end gap report");
    let alpha = Rat::new(25, 64);
    let report = spectral::gap_report(FamilyKind::So, 2, alpha, Rat::ZERO).expect("inputs valid");
    out.check(
        report.threshold == Rat::new(119, 288),
        format!("threshold = {} (expect 119/288)", report.threshold),
    );
    out.check(report.excluded_nonempty, "exclusion window nonempty".to_string());
    let c = gap_constants(FamilyKind::So, 2).expect("constants");
    let at = spectral::multiplicity_upper(&c, report.threshold, alpha, None).expect("in range");
    out.check(
        at.exponent == c.eta,
        format!("multiplicity exponent at threshold = {} equals eta = {}", at.exponent, c.eta),
    );
    out
}

/// Artifact payload of a reduced verify run, used by the determinism check.
fn reduced_artifacts(cfg: &AcceptanceConfig) -> Vec<(String, Vec<u8>)> {
    let c1 = criterion_1_constants();
    let c8 = criterion_8_gap();
    let fam = GroupFamily::sl(1).expect("SL2");
    let orders: Vec<(u64, u128)> = [2u64, 3, 6, 9]
        .iter()
        .map(|&q| {
            let level = CongruenceLevel::new(q).expect("level");
            (q, groupscheme::index_v(&fam, &level, cfg.enumeration_budget).expect("order"))
        })
        .collect();
    let grid = hypcount::default_grid(1.0, cfg.determinism_rmax, 10);
    let counts = hypcount::count_grid(&[1, 2], &grid, 1);
    let mut csv = String::from("q,T,N\n");
    for (qi, &q) in counts.qs.iter().enumerate() {
        for (ti, &t) in counts.t_values.iter().enumerate() {
            csv.push_str(&format!("{q},{t:.6},{}\n", counts.counts[qi][ti]));
        }
    }
    let report = serde_json::json!({
        "criteria": [c1, c8],
        "orders": orders.iter().map(|(q, v)| serde_json::json!({"q": q, "v": v.to_string()})).collect::<Vec<_>>(),
    });
    vec![
        (
            "report.json".to_string(),
            serde_json::to_string_pretty(&report).expect("serialize").into_bytes(),
        ),
        ("counts.csv".to_string(), csv.into_bytes()),
    ]
}

/// 9. Determinism: the artifact payload is byte-identical across runs, and
/// enumeration results are independent of the shard count (1 vs 8).
pub fn criterion_9_determinism(cfg: &AcceptanceConfig) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(9, "determinism / shard independence");
    let run1 = reduced_artifacts(cfg);
    let run2 = reduced_artifacts(cfg);
    out.check(
        run1 == run2,
        format!("double run: {} artifacts byte-identical", run1.len()),
    );
    // group enumeration sharding
    let fam = GroupFamily::sl(1).expect("SL2");
    let ring = Ring::integers_mod(5, 1).expect("prime");
    let ctx = GroupContext::new(fam, ring).expect("ctx");
    let full = groupscheme::elements(&ctx, EnumOptions::default()).expect("enumerate");
    let mut stitched = Vec::new();
    for shard in 0..8 {
        let opts = EnumOptions {
            shard,
            shard_count: 8,
            ..EnumOptions::default()
        };
        stitched.extend(groupscheme::elements(&ctx, opts).expect("enumerate"));
    }
    out.check(
        full == stitched,
        format!("SL2(F5) enumeration: 8 shards concatenate to the 1-shard stream ({} elements)", full.len()),
    );
    // lattice count sharding
    let grid = hypcount::default_grid(1.0, cfg.determinism_rmax, 10);
    let one = hypcount::count_grid(&[1, 3], &grid, 1);
    let eight = hypcount::count_grid(&[1, 3], &grid, 8);
    out.check(
        one.counts == eight.counts,
        "lattice counts equal for 1 vs 8 shards".to_string(),
    );
    out
}

/// Runs all nine criteria with the given configuration.
pub fn run_all(cfg: &AcceptanceConfig) -> Vec<CriterionOutcome> {
    vec![
        criterion_1_constants(),
        criterion_2_orders(cfg),
        criterion_3_centralizers(cfg),
        criterion_4_killing(),
        criterion_5_orbit_bound(cfg),
        criterion_6_counting(cfg),
        criterion_7_spherical(),
        criterion_8_gap(),
        criterion_9_determinism(cfg),
    ]
}

/// Serializes the outcome set into the deterministic artifact files written
/// by `verify-all` (plus any per-criterion data files).
pub fn render_artifacts(outcomes: &[CriterionOutcome]) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    let report = serde_json::to_string_pretty(&outcomes).expect("serialize") + "\n";
    files.push(("acceptance_report.json".to_string(), report.into_bytes()));
    let mut summary = String::new();
    for o in outcomes {
        summary.push_str(&o.summary_line());
        summary.push('\n');
    }
    files.push(("acceptance_summary.txt".to_string(), summary.into_bytes()));
    for o in outcomes {
        for (name, contents) in &o.artifacts {
            files.push((name.clone(), contents.clone().into_bytes()));
        }
    }
    files
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_criteria_pass() {
        assert!(criterion_1_constants().passed);
        assert!(criterion_8_gap().passed);
    }

    #[test]
    fn outcome_lines_format() {
        let o = criterion_1_constants();
        assert!(o.summary_line().starts_with("criterion 1"));
        assert!(o.summary_line().ends_with("PASS"));
    }
}
