//! Desk-scale lattice-point counting for the congruence subgroups
//! Γ(q) ⊂ SL₂(ℤ): enumerate matrices by Frobenius norm, convert to
//! hyperbolic distance via cosh d(g·i, i) = ‖g‖²/2, bin against a T-grid,
//! fit tail growth exponents, and evaluate the comparison curve
//! e^{2ρT}/V(q) + e^{(2ρ−α)T}.
//!
//! Enumeration walks coprime first columns (a, c) and solves the
//! determinant equation for the second column along the lattice line
//! (b₀ + ta, d₀ + tc); each solution is visited exactly once. Work shards
//! by the a-coordinate and counts merge by addition, so results are
//! independent of the shard count.

use std::fmt;

use serde::Serialize;

/// Errors from the counting pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum CountError {
    /// Radius exceeds the enumeration budget.
    BudgetExceeded { rmax: f64, budget: f64 },
    /// α must lie in (0, ρ].
    AlphaOutOfRange { alpha: f64, rho: f64 },
    /// Tail fit needs at least this many grid points.
    TooFewPoints { have: usize, need: usize },
}

impl fmt::Display for CountError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountError::BudgetExceeded { rmax, budget } => {
                write!(f, "rmax {rmax} exceeds enumeration budget {budget}")
            }
            CountError::AlphaOutOfRange { alpha, rho } => {
                write!(f, "alpha {alpha} outside (0, {rho}]")
            }
            CountError::TooFewPoints { have, need } => {
                write!(f, "tail fit needs {need} points, have {have}")
            }
        }
    }
}

impl std::error::Error for CountError {}

/// The lattice under study: Γ(q) ⊂ SL₂(ℤ) (the spin double cover realizing
/// the real hyperbolic plane case), cut out by γ ≡ I mod q entrywise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeSpec {
    pub q: u32,
}

impl LatticeSpec {
    pub fn new(q: u32) -> Result<LatticeSpec, CountError> {
        if q == 0 {
            return Err(CountError::TooFewPoints { have: 0, need: 1 });
        }
        Ok(LatticeSpec { q })
    }

    /// Membership: det = 1 and γ ≡ I mod q.
    pub fn contains(&self, a: i64, b: i64, c: i64, d: i64) -> bool {
        a * d - b * c == 1 && congruent_identity(a, b, c, d, self.q as i64)
    }
}

/// ‖g‖² = a² + b² + c² + d².
pub fn norm2(a: i64, b: i64, c: i64, d: i64) -> i64 {
    a * a + b * b + c * c + d * d
}

/// Hyperbolic distance moved by g: T = arccosh(‖g‖²/2) on the curvature −1
/// upper half-plane; 0 exactly on SO(2).
pub fn distance(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let n2 = a * a + b * b + c * c + d * d;
    let x = (n2 / 2.0).max(1.0);
    x.acosh()
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    // returns (g, x, y) with a·x + b·y = g
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

fn isqrt_u128(x: u128) -> u128 {
    if x == 0 {
        return 0;
    }
    let mut r = (x as f64).sqrt() as u128;
    while r.saturating_mul(r) > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Visits every γ = `[[a,b],[c,d]]` ∈ SL₂(ℤ) with ‖γ‖² ≤ norm2_max, each
/// exactly once. Sharding partitions the a-axis round-robin; counts from
/// different shards merge by addition.
pub fn enumerate_by_norm(
    norm2_max: i64,
    shard: usize,
    shard_count: usize,
    visit: &mut dyn FnMut(i64, i64, i64, i64),
) {
    debug_assert!(norm2_max >= 0);
    let amax = (norm2_max as f64).sqrt() as i64 + 1;
    for a in -amax..=amax {
        if (a + amax) as usize % shard_count.max(1) != shard {
            continue;
        }
        let a2 = a * a;
        if a2 > norm2_max {
            continue;
        }
        let cmax = ((norm2_max - a2) as f64).sqrt() as i64 + 1;
        for c in -cmax..=cmax {
            let acc2 = a2 + c * c;
            if acc2 > norm2_max || (a == 0 && c == 0) {
                continue;
            }
            let (g, x, y) = ext_gcd(a, c);
            if g != 1 {
                continue;
            }
            // a·d − c·b = 1 with d₀ = x, b₀ = −y
            let d0 = x;
            let b0 = -y;
            let s = norm2_max - acc2;
            // (b₀+ta)² + (d₀+tc)² ≤ s: αt² + 2βt + γ ≤ 0
            let alpha = acc2;
            let beta = a * b0 + c * d0;
            let gamma = b0 * b0 + d0 * d0 - s;
            let disc = (beta as i128) * (beta as i128) - (alpha as i128) * (gamma as i128);
            if disc < 0 {
                continue;
            }
            let sq = isqrt_u128(disc as u128) as i128;
            let mut t_lo = ((-(beta as i128) - sq).div_euclid(alpha as i128)) as i64 - 1;
            let mut t_hi = ((-(beta as i128) + sq).div_euclid(alpha as i128)) as i64 + 1;
            let f = |t: i64| {
                let b = b0 + t * a;
                let d = d0 + t * c;
                b * b + d * d <= s
            };
            while t_lo <= t_hi && !f(t_lo) {
                t_lo += 1;
            }
            while t_hi >= t_lo && !f(t_hi) {
                t_hi -= 1;
            }
            for t in t_lo..=t_hi {
                let b = b0 + t * a;
                let d = d0 + t * c;
                debug_assert_eq!(a * d - b * c, 1);
                debug_assert!(norm2(a, b, c, d) <= norm2_max);
                visit(a, b, c, d);
            }
        }
    }
}

/// Independent O(R⁴) reference scan (test oracle for small radii).
pub fn enumerate_naive(norm2_max: i64, visit: &mut dyn FnMut(i64, i64, i64, i64)) {
    let r = (norm2_max as f64).sqrt() as i64 + 1;
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                for d in -r..=r {
                    if a * d - b * c == 1 && norm2(a, b, c, d) <= norm2_max {
                        visit(a, b, c, d);
                    }
                }
            }
        }
    }
}

fn congruent_identity(a: i64, b: i64, c: i64, d: i64, q: i64) -> bool {
    (a - 1).rem_euclid(q) == 0
        && b.rem_euclid(q) == 0
        && c.rem_euclid(q) == 0
        && (d - 1).rem_euclid(q) == 0
}

/// Grid of counts N(Γ(q), T) = #{γ ≡ I mod q : d(γ·i, i) ≤ T}.
#[derive(Clone, Debug, Serialize)]
pub struct CountGrid {
    pub qs: Vec<u32>,
    pub t_values: Vec<f64>,
    /// `counts[qi][ti]` = N(q_i, T_i); cumulative in T.
    pub counts: Vec<Vec<u64>>,
    pub norm2_max: i64,
}

/// Exact counts for each congruence level over the T-grid, in one
/// enumeration pass.
pub fn count_grid(qs: &[u32], t_grid: &[f64], shard_count: usize) -> CountGrid {
    let mut t_values: Vec<f64> = t_grid.to_vec();
    t_values.sort_by(|x, y| x.partial_cmp(y).expect("finite T"));
    // d(γ) ≤ T ⟺ ‖γ‖² ≤ 2cosh T (integer norm, so the floor is exact)
    let thresholds: Vec<i64> = t_values.iter().map(|t| (2.0 * t.cosh()).floor() as i64).collect();
    let norm2_max = *thresholds.last().expect("nonempty grid");
    let nq = qs.len();
    let nt = t_values.len();
    let mut bins = vec![vec![0u64; nt]; nq];
    for shard in 0..shard_count.max(1) {
        enumerate_by_norm(norm2_max, shard, shard_count.max(1), &mut |a, b, c, d| {
            let n2 = norm2(a, b, c, d);
            let idx = thresholds.partition_point(|&thr| thr < n2);
            if idx >= nt {
                return;
            }
            for (qi, &q) in qs.iter().enumerate() {
                if q == 1 || congruent_identity(a, b, c, d, q as i64) {
                    bins[qi][idx] += 1;
                }
            }
        });
    }
    // prefix sums: N is cumulative in T
    for row in bins.iter_mut() {
        for i in 1..nt {
            row[i] += row[i - 1];
        }
    }
    CountGrid {
        qs: qs.to_vec(),
        t_values,
        counts: bins,
        norm2_max,
    }
}

/// Ordinary least-squares slope of log N against T on the top third of the
/// grid (at least `min_points` points with N > 0).
pub fn fit_tail_slope(
    t_values: &[f64],
    counts: &[u64],
    min_points: usize,
) -> Result<f64, CountError> {
    let n = t_values.len();
    let start = n - (n / 3).max(min_points).min(n);
    let pts: Vec<(f64, f64)> = (start..n)
        .filter(|&i| counts[i] > 0)
        .map(|i| (t_values[i], (counts[i] as f64).ln()))
        .collect();
    if pts.len() < min_points {
        return Err(CountError::TooFewPoints {
            have: pts.len(),
            need: min_points,
        });
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    Ok((m * sxy - sx * sy) / (m * sxx - sx * sx))
}

/// The comparison curve e^{2ρT}/V(q) + e^{(2ρ−α)T}.
pub fn bound_curve(t: f64, v_q: f64, alpha: f64, rho: f64) -> Result<f64, CountError> {
    if !(alpha > 0.0 && alpha <= rho) {
        return Err(CountError::AlphaOutOfRange { alpha, rho });
    }
    Ok((2.0 * rho * t).exp() / v_q + ((2.0 * rho - alpha) * t).exp())
}

/// Per-level summary assembled by the `count` subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct CountResult {
    pub q: u32,
    pub v_q: u128,
    pub alpha: f64,
    pub rho: f64,
    pub t_values: Vec<f64>,
    pub counts: Vec<u64>,
    pub bounds: Vec<f64>,
    /// N(q,T) / bound_curve(T).
    pub ratios: Vec<f64>,
    pub fitted_tail_slope: Option<f64>,
}

/// Builds the full per-level report from a count grid row.
pub fn summarize(
    grid: &CountGrid,
    qi: usize,
    v_q: u128,
    alpha: f64,
    rho: f64,
) -> Result<CountResult, CountError> {
    let counts = grid.counts[qi].clone();
    let bounds: Vec<f64> = grid
        .t_values
        .iter()
        .map(|&t| bound_curve(t, v_q as f64, alpha, rho))
        .collect::<Result<_, _>>()?;
    let ratios: Vec<f64> = counts
        .iter()
        .zip(&bounds)
        .map(|(&n, &b)| n as f64 / b)
        .collect();
    let fitted_tail_slope = fit_tail_slope(&grid.t_values, &counts, 6).ok();
    Ok(CountResult {
        q: grid.qs[qi],
        v_q,
        alpha,
        rho,
        t_values: grid.t_values.clone(),
        counts,
        bounds,
        ratios,
        fitted_tail_slope,
    })
}

/// Evenly spaced T-grid from t_min to arccosh(R²/2).
pub fn default_grid(t_min: f64, rmax: f64, points: usize) -> Vec<f64> {
    let t_max = (rmax * rmax / 2.0).acosh();
    (0..points)
        .map(|i| t_min + (t_max - t_min) * i as f64 / (points - 1) as f64)
        .collect()
}
