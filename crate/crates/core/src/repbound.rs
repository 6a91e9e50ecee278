//! Representation-theoretic constants e(G), η(G); congruence-kernel
//! characters via the Killing pairing; coadjoint orbits; the orbit lower
//! bound for dimensions of new representations at prime-power level; and
//! the multiplicative assembly over composite levels.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::groupscheme::{
    self, CongruenceLevel, EnumOptions, FamilyKind, GroupContext, GroupError, GroupFamily,
};
use crate::liealg::{AlgebraBasis, LieError};
use crate::rational::Rat;
use crate::ringalg::{Mat, Ring};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepError {
    Group(GroupError),
    Lie(LieError),
    /// gap constants need n ≥ 2 for SO, n ≥ 1 for SU.
    UnsupportedRank { n: usize },
    /// Orbit machinery needs exponent r ≥ 2.
    BadExponent { r: u32 },
    NegativeEpsilon,
}

impl From<GroupError> for RepError {
    fn from(e: GroupError) -> Self {
        RepError::Group(e)
    }
}

impl From<LieError> for RepError {
    fn from(e: LieError) -> Self {
        RepError::Lie(e)
    }
}

impl From<crate::ringalg::RingError> for RepError {
    fn from(e: crate::ringalg::RingError) -> Self {
        RepError::Group(GroupError::Ring(e))
    }
}

impl fmt::Display for RepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepError::Group(e) => write!(f, "{e}"),
            RepError::Lie(e) => write!(f, "{e}"),
            RepError::UnsupportedRank { n } => write!(f, "unsupported rank n = {n}"),
            RepError::BadExponent { r } => write!(f, "orbit bound needs r ≥ 2, got {r}"),
            RepError::NegativeEpsilon => write!(f, "epsilon must be nonnegative"),
        }
    }
}

impl std::error::Error for RepError {}

/// The spectral-gap constants of one family: ρ, dim G, e, η, linked by
/// e = (3/2)·η·dim G exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapConstants {
    pub kind: FamilyKind,
    pub n: usize,
    pub rho: Rat,
    pub dim_g: usize,
    pub e: usize,
    pub eta: Rat,
}

/// Exact constants per family branch:
/// η = 4/(3n(n+1)) for SO with 2 ≤ n < 6, 4(n−2)/(3n(n+1)) for SO with
/// n ≥ 6, 2/(3(n+2)) for SU with n ≥ 1; e = (3/2)·η·dim G.
///
/// SL is accepted as the split-prime reduction of the unitary family.
pub fn gap_constants(kind: FamilyKind, n: usize) -> Result<GapConstants, RepError> {
    let n_i = n as i128;
    match kind {
        FamilyKind::So => {
            if n < 2 {
                return Err(RepError::UnsupportedRank { n });
            }
            let dim_g = n * (n + 1) / 2;
            let rho = Rat::new(n_i - 1, 2);
            let (eta, e) = if n < 6 {
                (Rat::new(4, 3 * n_i * (n_i + 1)), 1usize)
            } else {
                (Rat::new(4 * (n_i - 2), 3 * n_i * (n_i + 1)), n - 2)
            };
            let c = GapConstants {
                kind,
                n,
                rho,
                dim_g,
                e,
                eta,
            };
            debug_assert_eq!(
                Rat::int(c.e as i128),
                Rat::new(3, 2) * c.eta * Rat::int(c.dim_g as i128)
            );
            Ok(c)
        }
        FamilyKind::Su | FamilyKind::Sl => {
            if n < 1 {
                return Err(RepError::UnsupportedRank { n });
            }
            let dim_g = n * (n + 2);
            let rho = Rat::new(n_i, 2);
            let eta = Rat::new(2, 3 * (n_i + 2));
            let c = GapConstants {
                kind,
                n,
                rho,
                dim_g,
                e: n,
                eta,
            };
            debug_assert_eq!(
                Rat::int(c.e as i128),
                Rat::new(3, 2) * c.eta * Rat::int(c.dim_g as i128)
            );
            Ok(c)
        }
    }
}

/// An element X of 𝔤(ℤ/p^k) standing for the character
/// χ_X(Y) = exp(2πi·B(X,Y)/p^k) of the congruence kernel.
#[derive(Clone, Debug)]
pub struct CharacterLabel {
    pub x: Mat,
}

/// The character exponent B(X, Y) mod p^k (an integer index of a p^k-th
/// root of unity; no floating point).
pub fn character_value(
    basis: &AlgebraBasis,
    label: &CharacterLabel,
    y: &Mat,
) -> Result<u64, RepError> {
    let v = basis.killing_form(&label.x, y)?;
    Ok(v.a)
}

/// Size of the conjugation orbit {g⁻¹Xg : g ∈ 𝔾(ℤ/p^k)} by full
/// enumeration.
pub fn coadjoint_orbit(ctx: &GroupContext, x: &Mat, opts: EnumOptions) -> Result<u64, RepError> {
    let mut orbit: HashSet<Mat> = HashSet::new();
    groupscheme::for_each_element(ctx, opts, &mut |g| {
        let gi = g.inverse().expect("group element");
        let conj = gi.mul(x).expect("ring").mul(g).expect("ring");
        orbit.insert(conj);
    })?;
    Ok(orbit.len() as u64)
}

/// Result of the minimum-orbit search at level p^r (k = ⌊r/2⌋).
#[derive(Clone, Debug, Serialize)]
pub struct OrbitResult {
    pub p: u64,
    pub r: u32,
    pub k: u32,
    /// Smallest coadjoint orbit over X ∈ 𝔤(ℤ/p^k), X ≢ 0 mod p.
    pub min_orbit: u128,
    pub min_orbit_witness: serde_json::Value,
    /// |𝔾(k)|·|𝔤(k)|^{k−1} / (|C_G(X)|·|C_𝔤(X)|^{k−1}) minimized over
    /// nonzero X ∈ 𝔤(k_p); always an integer (centralizer orders divide).
    pub formula_bound: u128,
    pub formula_witness: serde_json::Value,
    /// Orbit partition sanity: sizes sum to the number of admissible X.
    pub admissible_count: u64,
    pub orbit_count: u64,
    pub partition_exact: bool,
    /// Every orbit size divides |𝔾(ℤ/p^k)|.
    pub orbits_divide_group: bool,
    pub group_order: u128,
    pub branch: String,
}

/// Enumerates the coadjoint orbits of admissible characters (X ≢ 0 mod p)
/// at level p^r and compares the measured minimum against the
/// centralizer-formula bound.
pub fn min_new_orbit(
    family: &GroupFamily,
    p: u64,
    r: u32,
    budget: u64,
) -> Result<OrbitResult, RepError> {
    if r < 2 {
        return Err(RepError::BadExponent { r });
    }
    let k = r / 2;
    let ring_k = Ring::integers_mod(p, k)?;
    let ctx_k = GroupContext::new_allowing_bad_primes(family.clone(), ring_k)?;
    let opts = EnumOptions {
        budget,
        ..EnumOptions::default()
    };
    let group = groupscheme::elements(&ctx_k, opts)?;
    let group_inv: Vec<Mat> = group.iter().map(|g| g.inverse().expect("unit det")).collect();
    let group_order = group.len() as u128;

    // admissible X: coordinates over ℤ/p^k in the integral basis, X ≢ 0 mod p
    let basis_k = AlgebraBasis::new(&ctx_k)?;
    let d = basis_k.dim();
    let card = ring_k.card();
    let total = card.checked_pow(d as u32).filter(|&t| t <= budget).ok_or(
        GroupError::BudgetExceeded {
            visited: u64::MAX,
            budget,
        },
    )?;
    let field = Ring::prime_field(p)?;
    let elems: Vec<crate::ringalg::Elt> = ring_k.elements().collect();

    let mut admissible: Vec<Mat> = Vec::new();
    for idx in 0..total {
        let mut coords = Vec::with_capacity(d);
        let mut t = idx;
        for _ in 0..d {
            coords.push(elems[(t % card) as usize]);
            t /= card;
        }
        let x = basis_k.from_coords(&coords);
        let nonzero_mod_p = if k == 1 {
            !x.is_zero()
        } else {
            !x.reduce_to(field)?.is_zero()
        };
        if nonzero_mod_p {
            admissible.push(x);
        }
    }

    // orbit partition by sweep
    let mut seen: HashSet<Mat> = HashSet::new();
    let mut min_orbit = u128::MAX;
    let mut min_witness = None;
    let mut orbit_count = 0u64;
    let mut sizes_sum = 0u64;
    let mut orbits_divide = true;
    for x in &admissible {
        if seen.contains(x) {
            continue;
        }
        let mut orbit: HashSet<Mat> = HashSet::new();
        for (g, gi) in group.iter().zip(&group_inv) {
            let conj = gi.mul(x).expect("ring").mul(g).expect("ring");
            orbit.insert(conj);
        }
        let size = orbit.len() as u128;
        orbit_count += 1;
        sizes_sum += orbit.len() as u64;
        if group_order % size != 0 {
            orbits_divide = false;
        }
        if size < min_orbit {
            min_orbit = size;
            min_witness = Some(x.clone());
        }
        for m in orbit {
            seen.insert(m);
        }
    }
    let partition_exact = sizes_sum == admissible.len() as u64;

    // formula bound at field level, minimized over nonzero X ∈ 𝔤(k_p)
    let field_ctx = GroupContext::new_allowing_bad_primes(family.clone(), field)?;
    let field_basis = AlgebraBasis::new(&field_ctx)?;
    let field_group = groupscheme::elements(&field_ctx, opts)?;
    let g_ord = field_group.len() as u128;
    let lie_card = (p as u128).pow(field_basis.dim() as u32);
    let df = field_basis.dim();
    let field_elems: Vec<crate::ringalg::Elt> = field.elements().collect();
    let mut formula_bound = u128::MAX;
    let mut formula_witness = None;
    for idx in 1..(p as u64).pow(df as u32) {
        let mut coords = Vec::with_capacity(df);
        let mut t = idx;
        for _ in 0..df {
            coords.push(field_elems[(t % p) as usize]);
            t /= p;
        }
        let x = field_basis.from_coords(&coords);
        let mut cg = 0u128;
        for g in &field_group {
            if g.mul(&x).expect("ring") == x.mul(g).expect("ring") {
                cg += 1;
            }
        }
        let clie = (p as u128).pow(field_basis.centralizer_dim(&x)? as u32);
        let num = g_ord * lie_card.pow(k - 1);
        let den = cg * clie.pow(k - 1);
        debug_assert_eq!(num % den, 0);
        let bound = num / den;
        if bound < formula_bound {
            formula_bound = bound;
            formula_witness = Some(x);
        }
    }

    Ok(OrbitResult {
        p,
        r,
        k,
        min_orbit,
        min_orbit_witness: min_witness.map(|m| m.to_json()).unwrap_or(serde_json::Value::Null),
        formula_bound,
        formula_witness: formula_witness
            .map(|m| m.to_json())
            .unwrap_or(serde_json::Value::Null),
        admissible_count: admissible.len() as u64,
        orbit_count,
        partition_exact,
        orbits_divide_group: orbits_divide,
        group_order,
        branch: "enumerated".to_string(),
    })
}

/// Floor of p^{2re/3} (the analytic orbit floor with constant 1), as the
/// exact cube comparison pair (min³ vs p^{2re}).
pub fn analytic_floor_cubed(p: u64, r: u32, e: usize) -> u128 {
    (p as u128).pow(2 * r * e as u32)
}

/// One prime-power factor of the new-representation dimension bound.
#[derive(Clone, Debug, Serialize)]
pub struct RepDimFactor {
    pub p: u64,
    pub r: u32,
    /// "prime-level", "enumerated orbit", or "analytic".
    pub branch: String,
    /// The integer factor contributed to the product bound.
    pub value: u128,
    /// Exponent of the analytic form p^{2re/3}, as (numerator, denominator).
    pub analytic_exponent: (u64, u64),
    /// The reporting constant for the prime-level and analytic branches,
    /// printed separately so downstream users can rescale.
    pub constant: Rat,
}

/// Lower bound for dim ρ of any new representation at the given level,
/// multiplicative over the prime factorization.
#[derive(Clone, Debug, Serialize)]
pub struct RepDimLower {
    pub q: u64,
    pub factors: Vec<RepDimFactor>,
    pub total: u128,
}

fn icbrt(x: u128) -> u128 {
    let mut lo = 0u128;
    let mut hi = 1u128 << 43;
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if mid.saturating_mul(mid).saturating_mul(mid) <= x {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// dim ρ ≳ ∏ bounds over prime powers: Landazuri–Seitz exponent e at prime
/// level (constant 1/2 reported separately), the enumerated orbit bound
/// where the budget allows, and the analytic floor p^{2re/3} otherwise.
pub fn new_rep_dim_lower(
    family: &GroupFamily,
    level: &CongruenceLevel,
    budget: u64,
) -> Result<RepDimLower, RepError> {
    let half = Rat::new(1, 2);
    let e = family.rep_exponent_e();
    let mut factors = Vec::new();
    let mut total: u128 = 1;
    for &(p, r) in &level.factors {
        if !groupscheme::is_good_prime(family, p) {
            return Err(RepError::Group(GroupError::BadPrime { p }));
        }
        let factor = if r == 1 {
            // prime level: Landazuri–Seitz bound c·p^e with c = 1/2
            let value = (p as u128).pow(e as u32) / 2;
            RepDimFactor {
                p,
                r,
                branch: "prime-level".to_string(),
                value: value.max(1),
                analytic_exponent: (e as u64, 1),
                constant: half,
            }
        } else {
            match min_new_orbit(family, p, r, budget) {
                Ok(orbit) => RepDimFactor {
                    p,
                    r,
                    branch: "enumerated orbit".to_string(),
                    value: orbit.min_orbit,
                    analytic_exponent: (2 * r as u64 * e as u64, 3),
                    constant: Rat::ONE,
                },
                Err(RepError::Group(GroupError::BudgetExceeded { .. })) => {
                    let value = icbrt((p as u128).pow(2 * r * e as u32)) / 2;
                    RepDimFactor {
                        p,
                        r,
                        branch: "analytic".to_string(),
                        value: value.max(1),
                        analytic_exponent: (2 * r as u64 * e as u64, 3),
                        constant: half,
                    }
                }
                Err(err) => return Err(err),
            }
        };
        total = total
            .checked_mul(factor.value)
            .ok_or(RepError::Group(GroupError::Overflow))?;
        factors.push(factor);
    }
    Ok(RepDimLower {
        q: level.q,
        factors,
        total,
    })
}

/// The multiplicity lower-bound exponent: m(λ, Γ(q)) ≳ V(q)^{η−ε}, with the
/// strengthened exponent (3/2)η − ε at square-free levels.
#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityLower {
    pub q: u64,
    pub eta: Rat,
    pub epsilon: Rat,
    pub squarefree: bool,
    /// η − ε, or (3/2)η − ε when q is square-free.
    pub exponent: Rat,
    pub v_q: u128,
    /// V(q)^exponent, evaluated in floating point for convenience.
    pub bound_approx: f64,
}

pub fn multiplicity_lower(
    family: &GroupFamily,
    level: &CongruenceLevel,
    epsilon: Rat,
    budget: u64,
) -> Result<MultiplicityLower, RepError> {
    if epsilon.is_negative() {
        return Err(RepError::NegativeEpsilon);
    }
    let constants = gap_constants(family.kind, family.n)?;
    let squarefree = level.is_squarefree();
    if !squarefree && !level.all_good(family) {
        let &(p, _) = level
            .factors
            .iter()
            .find(|&&(p, _)| !groupscheme::is_good_prime(family, p))
            .expect("some bad prime");
        return Err(RepError::Group(GroupError::BadPrime { p }));
    }
    let exponent = if squarefree {
        Rat::new(3, 2) * constants.eta - epsilon
    } else {
        constants.eta - epsilon
    };
    let v_q = groupscheme::index_v(family, level, budget)?;
    let bound_approx = (v_q as f64).powf(exponent.to_f64());
    Ok(MultiplicityLower {
        q: level.q,
        eta: constants.eta,
        epsilon,
        squarefree,
        exponent,
        v_q,
        bound_approx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_match_branches() {
        let so2 = gap_constants(FamilyKind::So, 2).unwrap();
        assert_eq!(so2.eta, Rat::new(2, 9));
        assert_eq!(so2.e, 1);
        assert_eq!(so2.rho, Rat::new(1, 2));
        let so6 = gap_constants(FamilyKind::So, 6).unwrap();
        assert_eq!(so6.eta, Rat::new(8, 63));
        assert_eq!(so6.e, 4);
        let su3 = gap_constants(FamilyKind::Su, 3).unwrap();
        assert_eq!(su3.eta, Rat::new(2, 15));
        assert_eq!(su3.e, 3);
        assert_eq!(su3.rho, Rat::new(3, 2));
    }

    #[test]
    fn identity_e_eta_dim() {
        for n in 2..=10 {
            let c = gap_constants(FamilyKind::So, n).unwrap();
            assert_eq!(
                Rat::int(c.e as i128),
                Rat::new(3, 2) * c.eta * Rat::int(c.dim_g as i128)
            );
        }
        for n in 1..=6 {
            let c = gap_constants(FamilyKind::Su, n).unwrap();
            assert_eq!(
                Rat::int(c.e as i128),
                Rat::new(3, 2) * c.eta * Rat::int(c.dim_g as i128)
            );
        }
    }

    #[test]
    fn character_values_bilinear_and_separating() {
        // sl₂ over ℤ/9, k = 2... use k = 1 on 𝔽₃ and k = 2 on ℤ/9
        let fam = GroupFamily::sl(1).unwrap();
        let ring = Ring::integers_mod(3, 2).unwrap();
        let ctx = GroupContext::new_allowing_bad_primes(fam, ring).unwrap();
        let basis = AlgebraBasis::new(&ctx).unwrap();
        let els = crate::liealg::algebra_elements(&basis);
        // X = 0 gives value 0 for all Y
        let zero = CharacterLabel {
            x: Mat::zeros(ring, 2),
        };
        for y in els.iter().take(20) {
            assert_eq!(character_value(&basis, &zero, y).unwrap(), 0);
        }
        // bilinearity on a sample
        let x = CharacterLabel {
            x: els[5].clone(),
        };
        for (i, j) in [(1usize, 2usize), (3, 7), (10, 20), (40, 60)] {
            let sum = els[i].add(&els[j]).unwrap();
            let v = character_value(&basis, &x, &sum).unwrap();
            let vi = character_value(&basis, &x, &els[i]).unwrap();
            let vj = character_value(&basis, &x, &els[j]).unwrap();
            assert_eq!(v, (vi + vj) % 9);
        }
        // separation: X ≢ 0 mod 3 admits some Y with nonzero pairing
        let f3 = Ring::prime_field(3).unwrap();
        for x in &els {
            if x.reduce_to(f3).unwrap().is_zero() {
                continue;
            }
            let label = CharacterLabel { x: x.clone() };
            let found = els
                .iter()
                .any(|y| character_value(&basis, &label, y).unwrap() != 0);
            assert!(found);
        }
    }

    #[test]
    fn character_trivial_on_deepest_layer_iff_x_zero_mod_p() {
        // χ_X is trivial on p^{k−1}·𝔤 iff X ≡ 0 mod p (sl₂, ℤ/9, k = 2)
        let fam = GroupFamily::sl(1).unwrap();
        let ring = Ring::integers_mod(3, 2).unwrap();
        let ctx = GroupContext::new_allowing_bad_primes(fam, ring).unwrap();
        let basis = AlgebraBasis::new(&ctx).unwrap();
        let els = crate::liealg::algebra_elements(&basis);
        let f3 = Ring::prime_field(3).unwrap();
        for x in &els {
            let label = CharacterLabel { x: x.clone() };
            let trivial_on_layer = els.iter().all(|y| {
                let scaled = y.scalar_mul(ring.embed(3));
                character_value(&basis, &label, &scaled).unwrap() == 0
            });
            assert_eq!(trivial_on_layer, x.reduce_to(f3).unwrap().is_zero());
        }
    }

    #[test]
    fn character_pairing_is_ad_invariant_over_z9() {
        // χ_X(gYg⁻¹) = χ_{g⁻¹Xg}(Y): the identification the orbit method
        // rests on, checked over the ring ℤ/9
        let fam = GroupFamily::sl(1).unwrap();
        let ring = Ring::integers_mod(3, 2).unwrap();
        let ctx = GroupContext::new_allowing_bad_primes(fam, ring).unwrap();
        let basis = AlgebraBasis::new(&ctx).unwrap();
        let group = groupscheme::elements(&ctx, EnumOptions::default()).unwrap();
        let els = crate::liealg::algebra_elements(&basis);
        for (gi, xi, yi) in [(1usize, 5usize, 7usize), (100, 20, 33), (400, 60, 2), (647, 728, 301)] {
            let g = &group[gi];
            let ginv = g.inverse().unwrap();
            let x = &els[xi];
            let y = &els[yi];
            let lhs = {
                let conj_y = g.mul(y).unwrap().mul(&ginv).unwrap();
                character_value(&basis, &CharacterLabel { x: x.clone() }, &conj_y).unwrap()
            };
            let rhs = {
                let conj_x = ginv.mul(x).unwrap().mul(g).unwrap();
                character_value(&basis, &CharacterLabel { x: conj_x }, y).unwrap()
            };
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn min_new_orbit_rejects_su_prime_powers() {
        let fam = GroupFamily::su(1, None).unwrap();
        assert!(matches!(
            min_new_orbit(&fam, 3, 2, 10_000_000),
            Err(RepError::Group(GroupError::WrongRingKind))
        ));
    }

    #[test]
    fn orbit_of_nilpotent_sl2_f3() {
        let fam = GroupFamily::sl(1).unwrap();
        let ring = Ring::prime_field(3).unwrap();
        let ctx = GroupContext::new_allowing_bad_primes(fam, ring).unwrap();
        let x = Mat::from_rows(ring, &[vec![0, 1], vec![0, 0]]).unwrap();
        let orbit = coadjoint_orbit(&ctx, &x, EnumOptions::default()).unwrap();
        // |SL₂(𝔽₃)| / |±unipotent stabilizer| = 24/6
        assert_eq!(orbit, 4);
        let zero = Mat::zeros(ring, 2);
        assert_eq!(coadjoint_orbit(&ctx, &zero, EnumOptions::default()).unwrap(), 1);
        // orbit divides group order
        assert_eq!(24 % orbit, 0);
    }

    #[test]
    fn min_new_orbit_sl2() {
        let fam = GroupFamily::sl(1).unwrap();
        let r32 = min_new_orbit(&fam, 3, 2, 10_000_000).unwrap();
        assert_eq!(r32.k, 1);
        assert_eq!(r32.min_orbit, 4);
        assert_eq!(r32.formula_bound, 4); // 24 / max |C_G| = 24/6
        assert!(r32.partition_exact);
        assert!(r32.orbits_divide_group);
        assert_eq!(r32.admissible_count, 26);

        let r52 = min_new_orbit(&fam, 5, 2, 10_000_000).unwrap();
        assert_eq!(r52.min_orbit, 12);
        assert_eq!(r52.formula_bound, 12); // 120 / 10

        // k = ⌊r/2⌋: r = 3 uses the same level-1 orbit space as r = 2
        let r33 = min_new_orbit(&fam, 3, 3, 10_000_000).unwrap();
        assert_eq!(r33.k, 1);
        assert_eq!(r33.min_orbit, r32.min_orbit);
        assert_eq!(r33.formula_bound, r32.formula_bound);
    }

    #[test]
    fn min_new_orbit_at_k2_beats_formula_bound() {
        // r = 4 → k = 2: the orbit inequality becomes non-trivial
        let fam = GroupFamily::sl(1).unwrap();
        let r = min_new_orbit(&fam, 3, 4, 50_000_000).unwrap();
        assert_eq!(r.k, 2);
        assert!(r.partition_exact);
        assert!(r.orbits_divide_group);
        assert!(
            r.min_orbit >= r.formula_bound,
            "min orbit {} < formula bound {}",
            r.min_orbit,
            r.formula_bound
        );
    }

    #[test]
    fn min_new_orbit_orthogonal_family() {
        // SO₃ at (5, 2): orbit machinery on a second family
        let fam = GroupFamily::so(2, None).unwrap();
        let r = min_new_orbit(&fam, 5, 2, 10_000_000).unwrap();
        assert!(r.partition_exact);
        assert!(r.orbits_divide_group);
        assert_eq!(r.group_order, 120);
        assert!(
            r.min_orbit >= r.formula_bound,
            "min orbit {} < formula bound {}",
            r.min_orbit,
            r.formula_bound
        );
    }

    #[test]
    fn rep_dim_lower_multiplicative() {
        let fam = GroupFamily::sl(1).unwrap();
        let l15 = CongruenceLevel::new(15).unwrap();
        let b15 = new_rep_dim_lower(&fam, &l15, 10_000_000).unwrap();
        let l3 = CongruenceLevel::new(3).unwrap();
        let l5 = CongruenceLevel::new(5).unwrap();
        let b3 = new_rep_dim_lower(&fam, &l3, 10_000_000).unwrap();
        let b5 = new_rep_dim_lower(&fam, &l5, 10_000_000).unwrap();
        assert_eq!(b15.total, b3.total * b5.total);
        assert_eq!(b15.factors.len(), 2);
        assert!(b15.factors.iter().all(|f| f.branch == "prime-level"));
        // bad prime rejected
        let l2 = CongruenceLevel::new(2).unwrap();
        assert!(matches!(
            new_rep_dim_lower(&fam, &l2, 10_000_000),
            Err(RepError::Group(GroupError::BadPrime { p: 2 }))
        ));
    }

    #[test]
    fn rep_dim_orbit_branch_at_prime_square() {
        let fam = GroupFamily::sl(1).unwrap();
        let l9 = CongruenceLevel::new(9).unwrap();
        let b9 = new_rep_dim_lower(&fam, &l9, 10_000_000).unwrap();
        assert_eq!(b9.factors[0].branch, "enumerated orbit");
        assert_eq!(b9.total, 4);
        // with a tiny budget the analytic branch takes over
        let b9a = new_rep_dim_lower(&fam, &l9, 10).unwrap();
        assert_eq!(b9a.factors[0].branch, "analytic");
        // floor(3^{4/3}/2) = floor(4.32/2) = 2
        assert_eq!(b9a.total, 2);
    }

    #[test]
    fn multiplicity_lower_exponents() {
        let fam = GroupFamily::so(2, None).unwrap();
        // ε = η → exponent 0 at non-squarefree... use squarefree strengthening
        let l = CongruenceLevel::new(15).unwrap();
        let m = multiplicity_lower(&fam, &l, Rat::ZERO, 10_000_000).unwrap();
        assert!(m.squarefree);
        assert_eq!(m.exponent, Rat::new(1, 3)); // (3/2)(2/9)
        let l9 = CongruenceLevel::new(9).unwrap();
        let m9 = multiplicity_lower(&fam, &l9, Rat::new(1, 100), 10_000_000).unwrap();
        assert!(!m9.squarefree);
        assert_eq!(m9.exponent, Rat::new(2, 9) - Rat::new(1, 100));
        // ε = η gives exponent 0 and bound 1
        let m0 = multiplicity_lower(&fam, &l9, Rat::new(2, 9), 10_000_000).unwrap();
        assert!(m0.exponent.is_zero());
        assert_eq!(m0.bound_approx, 1.0);
    }
}
