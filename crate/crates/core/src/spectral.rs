//! Spherical functions on real hyperbolic space via the radial
//! eigen-equation φ'' + (n−1)coth(t)φ' + (ρ²−s²)φ = 0 with φ(0) = 1, the
//! decay-rate profiles, and the end-to-end spectral-gap calculator.
//!
//! All gap arithmetic is exact rational; floating point appears only inside
//! the ODE integrator (adaptive Dormand–Prince 5(4) with a two-term series
//! start to step past the coth singularity).

use std::fmt;

use serde::Serialize;

use crate::groupscheme::FamilyKind;
use crate::rational::Rat;
use crate::repbound::{gap_constants, GapConstants, RepError};

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralError {
    /// The ODE solver supports the hyperbolic plane and 3-space.
    UnsupportedDimension(usize),
    /// t must lie in [0, 30]; real s in (0, ρ].
    OutOfRange(&'static str),
    /// α must lie in (0, ρ] and ε must be ≥ 0.
    BadGapInputs(&'static str),
    Rep(RepError),
}

impl From<RepError> for SpectralError {
    fn from(e: RepError) -> Self {
        SpectralError::Rep(e)
    }
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralError::UnsupportedDimension(n) => {
                write!(f, "spherical ODE implemented for n ∈ {{2, 3}}, got {n}")
            }
            SpectralError::OutOfRange(what) => write!(f, "input out of range: {what}"),
            SpectralError::BadGapInputs(what) => write!(f, "invalid gap inputs: {what}"),
            SpectralError::Rep(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SpectralError {}

/// Spectral parameter: s ∈ (0, ρ] (complementary series) or s = i·ν
/// (tempered), stored as a tagged real.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum SValue {
    Real(Rat),
    Imaginary(Rat),
}

/// A point of the spectral parametrization; λ is recomputed from s, never
/// stored independently.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralPoint {
    pub rho: Rat,
    pub s: SValue,
}

impl SpectralPoint {
    /// λ_s = ρ² − s² (so ρ² + ν² for s = iν); λ = 0 iff s = ρ.
    pub fn lambda(&self) -> Rat {
        match self.s {
            SValue::Real(s) => self.rho * self.rho - s * s,
            SValue::Imaginary(v) => self.rho * self.rho + v * v,
        }
    }
}

/// Floating spectral parameter for the integrator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SParam {
    Real(f64),
    Imaginary(f64),
}

impl SParam {
    fn lambda(self, rho: f64) -> f64 {
        match self {
            SParam::Real(s) => rho * rho - s * s,
            SParam::Imaginary(v) => rho * rho + v * v,
        }
    }
}

pub fn rho_of_dimension(n: usize) -> f64 {
    (n as f64 - 1.0) / 2.0
}

const SERIES_HANDOFF: f64 = 1e-3;

/// Dormand–Prince 5(4) adaptive step on the radial system, evaluating φ at
/// each requested t (ascending). Relative tolerance `rtol`, absolute 1e−12.
pub fn spherical_profile(
    n: usize,
    s: SParam,
    ts: &[f64],
    rtol: f64,
) -> Result<Vec<f64>, SpectralError> {
    if !(n == 2 || n == 3) {
        return Err(SpectralError::UnsupportedDimension(n));
    }
    let rho = rho_of_dimension(n);
    match s {
        SParam::Real(v) => {
            if !(v > 0.0 && v <= rho) {
                return Err(SpectralError::OutOfRange("s must lie in (0, ρ]"));
            }
        }
        SParam::Imaginary(_) => {}
    }
    if ts.iter().any(|&t| !(0.0..=30.0).contains(&t)) {
        return Err(SpectralError::OutOfRange("t must lie in [0, 30]"));
    }
    let lambda = s.lambda(rho);
    let nf = n as f64;
    // two-term Frobenius start: φ = 1 + a t² + b t⁴
    let a = -lambda / (2.0 * nf);
    let b = -a * (lambda + 2.0 * (nf - 1.0) / 3.0) / (4.0 * (nf + 2.0));
    let series = |t: f64| (1.0 + a * t * t + b * t * t * t * t, 2.0 * a * t + 4.0 * b * t * t * t);

    let deriv = |t: f64, y: [f64; 2]| -> [f64; 2] {
        let coth = 1.0 / t.tanh();
        [y[1], -(nf - 1.0) * coth * y[1] - lambda * y[0]]
    };

    let mut out = Vec::with_capacity(ts.len());
    let mut t = SERIES_HANDOFF;
    let (phi0, dphi0) = series(t);
    let mut y = [phi0, dphi0];
    let mut h: f64 = 1e-4;
    let atol = 1e-12;
    for &target in ts {
        if target <= SERIES_HANDOFF {
            out.push(series(target).0);
            continue;
        }
        while t < target {
            let mut step = h.min(target - t);
            loop {
                let (y_next, err) = dopri5_step(&deriv, t, y, step);
                let scale = atol
                    + rtol
                        * y.iter()
                            .zip(&y_next)
                            .map(|(u, v)| u.abs().max(v.abs()))
                            .fold(0.0_f64, f64::max);
                if err <= scale || step < 1e-12 {
                    t += step;
                    y = y_next;
                    let factor = if err > 0.0 {
                        (0.9 * (scale / err).powf(0.2)).clamp(0.2, 5.0)
                    } else {
                        5.0
                    };
                    h = (step * factor).min(0.5);
                    break;
                }
                step *= (0.9 * (scale / err).powf(0.2)).clamp(0.1, 0.9);
            }
        }
        out.push(y[0]);
    }
    Ok(out)
}

/// φ_s(t) at a single time.
pub fn spherical_phi(n: usize, s: SParam, t: f64) -> Result<f64, SpectralError> {
    Ok(spherical_profile(n, s, &[t], 1e-9)?[0])
}

type Deriv<'a> = &'a dyn Fn(f64, [f64; 2]) -> [f64; 2];

fn dopri5_step(f: Deriv, t: f64, y: [f64; 2], h: f64) -> ([f64; 2], f64) {
    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    const E1: f64 = 5179.0 / 57600.0;
    const E3: f64 = 7571.0 / 16695.0;
    const E4: f64 = 393.0 / 640.0;
    const E5: f64 = -92097.0 / 339200.0;
    const E6: f64 = 187.0 / 2100.0;
    const E7: f64 = 1.0 / 40.0;

    let ax = |y: [f64; 2], k: &[[f64; 2]], cs: &[f64]| {
        let mut out = y;
        for (ki, &c) in k.iter().zip(cs) {
            out[0] += h * c * ki[0];
            out[1] += h * c * ki[1];
        }
        out
    };
    let k1 = f(t, y);
    let k2 = f(t + h / 5.0, ax(y, &[k1], &[A21]));
    let k3 = f(t + 3.0 * h / 10.0, ax(y, &[k1, k2], &[A31, A32]));
    let k4 = f(t + 4.0 * h / 5.0, ax(y, &[k1, k2, k3], &[A41, A42, A43]));
    let k5 = f(
        t + 8.0 * h / 9.0,
        ax(y, &[k1, k2, k3, k4], &[A51, A52, A53, A54]),
    );
    let k6 = f(
        t + h,
        ax(y, &[k1, k2, k3, k4, k5], &[A61, A62, A63, A64, A65]),
    );
    let y5 = ax(y, &[k1, k3, k4, k5, k6], &[B1, B3, B4, B5, B6]);
    let k7 = f(t + h, y5);
    let y4 = ax(y, &[k1, k3, k4, k5, k6, k7], &[E1, E3, E4, E5, E6, E7]);
    let err = ((y5[0] - y4[0]).abs()).max((y5[1] - y4[1]).abs());
    (y5, err)
}

/// Closed form on hyperbolic 3-space: φ_s(t) = sinh(st)/(s·sinh t)
/// (independent oracle for the integrator).
pub fn spherical_oracle_h3(s: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    (s * t).sinh() / (s * t.sinh())
}

/// Integral-representation oracle
/// φ_s(t) = ∫₀^π (cosh t − sinh t·cosθ)^{s−ρ} sin^{n−2}θ dθ / ∫₀^π sin^{n−2}θ dθ,
/// by adaptive Simpson quadrature (real s).
pub fn spherical_oracle_quadrature(n: usize, s: f64, t: f64) -> Result<f64, SpectralError> {
    if !(n == 2 || n == 3) {
        return Err(SpectralError::UnsupportedDimension(n));
    }
    let rho = rho_of_dimension(n);
    let integrand = |theta: f64| -> f64 {
        let base = t.cosh() - t.sinh() * theta.cos();
        let weight = if n == 2 { 1.0 } else { theta.sin() };
        base.powf(s - rho) * weight
    };
    let num = adaptive_simpson(&integrand, 0.0, std::f64::consts::PI, 1e-12, 40);
    let den = if n == 2 {
        std::f64::consts::PI
    } else {
        2.0
    };
    Ok(num / den)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Band of the scaled profile over t ∈ [2, 25]: for real s the ratio
/// φ_s(t)·e^{(ρ−s)t}, for imaginary s the majorant ratio |φ|·e^{ρt}/(1+t).
#[derive(Clone, Debug, Serialize)]
pub struct DecayProfile {
    pub n: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub band_min: f64,
    pub band_max: f64,
    /// max/min for real s (the C_s band); max alone matters for imaginary s.
    pub band_ratio: f64,
}

pub fn decay_profile(n: usize, s: SParam, rtol: f64) -> Result<DecayProfile, SpectralError> {
    let rho = rho_of_dimension(n);
    let ts: Vec<f64> = (0..=92).map(|i| 2.0 + 0.25 * i as f64).collect();
    let phis = spherical_profile(n, s, &ts, rtol)?;
    let mut band_min = f64::INFINITY;
    let mut band_max = f64::NEG_INFINITY;
    for (&t, &phi) in ts.iter().zip(&phis) {
        let scaled = match s {
            SParam::Real(sv) => phi * ((rho - sv) * t).exp(),
            SParam::Imaginary(_) => phi.abs() * (rho * t).exp() / (1.0 + t),
        };
        band_min = band_min.min(scaled);
        band_max = band_max.max(scaled);
    }
    Ok(DecayProfile {
        n,
        t_min: ts[0],
        t_max: *ts.last().unwrap(),
        band_min,
        band_max,
        band_ratio: band_max / band_min,
    })
}

/// Exact exponent (ρ−s)/α of the multiplicity upper bound
/// m(λ_s, Γ(q)) ≲ V(q)^{(ρ−s)/α}.
#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityUpper {
    pub s: Rat,
    pub rho: Rat,
    pub alpha: Rat,
    pub exponent: Rat,
    pub bound_approx: Option<f64>,
}

pub fn multiplicity_upper(
    constants: &GapConstants,
    s: Rat,
    alpha: Rat,
    v_q: Option<u128>,
) -> Result<MultiplicityUpper, SpectralError> {
    let rho = constants.rho;
    if !(s > Rat::ZERO && s < rho) {
        return Err(SpectralError::OutOfRange("s must lie in (0, ρ)"));
    }
    if !(alpha > Rat::ZERO) {
        return Err(SpectralError::BadGapInputs("alpha must be positive"));
    }
    let exponent = (rho - s) / alpha;
    let bound_approx = v_q.map(|v| (v as f64).powf(exponent.to_f64()));
    Ok(MultiplicityUpper {
        s,
        rho,
        alpha,
        exponent,
        bound_approx,
    })
}

/// The end-to-end gap statement: new spectrum at levels prime to the bad
/// set is confined to iℝ ∪ [0, ρ − ηα + ε], asymptotically in the level.
#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub constants: GapConstants,
    pub alpha: Rat,
    pub epsilon: Rat,
    /// ρ − ηα + ε, the top of the allowed complementary-series window.
    pub threshold: Rat,
    /// (threshold, ρ) is excluded for new spectrum; nonempty iff ηα > ε.
    pub excluded_nonempty: bool,
    /// The level threshold q₀(Γ, ε) is non-constructive; the exclusion is
    /// asymptotic-only.
    pub asymptotic_only: bool,
}

pub fn gap_report(
    kind: FamilyKind,
    n: usize,
    alpha: Rat,
    epsilon: Rat,
) -> Result<GapReport, SpectralError> {
    let constants = gap_constants(kind, n)?;
    if !(alpha > Rat::ZERO && alpha <= constants.rho) {
        return Err(SpectralError::BadGapInputs("alpha must lie in (0, ρ]"));
    }
    if epsilon.is_negative() {
        return Err(SpectralError::BadGapInputs("epsilon must be ≥ 0"));
    }
    let threshold = constants.rho - constants.eta * alpha + epsilon;
    let excluded_nonempty = threshold < constants.rho;
    Ok(GapReport {
        constants,
        alpha,
        epsilon,
        threshold,
        excluded_nonempty,
        asymptotic_only: true,
    })
}
