//! Lie algebras 𝔤(k) of each family: bases, Killing form, Jordan
//! decomposition, Jordan-type extraction, centralizer dimensions, and the
//! closed-form centralizer dimension formulas.
//!
//! Coordinates are always taken over the base scalar ring: the ring itself
//! for SL/SO (including ℤ/p^k), and the prime subfield 𝔽_p for SU, whose
//! algebra is an 𝔽_p-form inside the 𝔽_{p²}-matrices. With that convention
//! |𝔤(k_p)| = p^dim and |C_𝔤(X)| = p^{dim C} in every family, matching the
//! point counts the dimension bounds refer to.

use std::fmt;

use serde::Serialize;

use crate::groupscheme::{
    EnumOptions, FamilyKind, GroupContext, GroupError,
};
use crate::ringalg::poly::{charpoly, factor_shape, squarefree_decomposition, Poly};
use crate::ringalg::{kernel_basis, linalg, Elt, Mat, Ring, RingError};

pub mod scan;

pub use scan::{exhaustive_centralizer_scan, scan_inequality, CentralizerScanOutcome, ScanReport};

/// Errors from Lie-algebra operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LieError {
    Ring(RingError),
    Group(GroupError),
    /// Jordan-type extraction needs a pure (semisimple or nilpotent) element.
    MixedElement,
    /// SO nilpotent data violates "r_j is even for even j" (bad prime).
    ParityViolation,
    /// Element not in the Lie algebra of the context.
    NotInAlgebra,
}

impl From<RingError> for LieError {
    fn from(e: RingError) -> Self {
        LieError::Ring(e)
    }
}

impl From<GroupError> for LieError {
    fn from(e: GroupError) -> Self {
        LieError::Group(e)
    }
}

impl fmt::Display for LieError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieError::Ring(e) => write!(f, "{e}"),
            LieError::Group(e) => write!(f, "{e}"),
            LieError::MixedElement => write!(f, "element is mixed; decompose first"),
            LieError::ParityViolation => {
                write!(f, "orthogonal Jordan type has odd count for an even block size")
            }
            LieError::NotInAlgebra => write!(f, "matrix fails the Lie-algebra equations"),
        }
    }
}

impl std::error::Error for LieError {}

/// A validated element of 𝔤(ring).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraElement {
    pub ctx: GroupContext,
    pub mat: Mat,
}

impl AlgebraElement {
    pub fn new(ctx: &GroupContext, mat: Mat) -> Result<AlgebraElement, LieError> {
        if !ctx.is_algebra_element(&mat)? {
            return Err(LieError::NotInAlgebra);
        }
        Ok(AlgebraElement {
            ctx: ctx.clone(),
            mat,
        })
    }
}

enum BasisKind {
    /// E_ij (i ≠ j, row-major), then H_k = E_kk − E_{k+1,k+1}.
    SlStandard,
    /// Q⁻¹(E_ij − E_ji) for i < j (row-major); coordinates read off Q·Y.
    SoStandard { q: Mat },
    /// Kernel basis of the linearized equations over 𝔽_p coordinates.
    SuSolved { vectors: Vec<Vec<Elt>> },
}

/// A basis of 𝔤 together with exact coordinate extraction.
pub struct AlgebraBasis {
    pub ctx: GroupContext,
    pub elements: Vec<Mat>,
    /// Scalar ring of the coordinates (prime subfield for SU).
    pub base: Ring,
    kind: BasisKind,
}

impl AlgebraBasis {
    /// Basis of the solution space of the linearized equations; length is
    /// dim 𝔤 = n(n+2) for SL/SU and n(n+1)/2 for SO.
    pub fn new(ctx: &GroupContext) -> Result<AlgebraBasis, LieError> {
        let ring = ctx.ring;
        let m = ctx.matrix_size();
        match ctx.family.kind {
            FamilyKind::Sl => {
                let mut els = Vec::new();
                for i in 0..m {
                    for j in 0..m {
                        if i != j {
                            let mut e = Mat::zeros(ring, m);
                            e.set(i, j, ring.one());
                            els.push(e);
                        }
                    }
                }
                for k in 0..m - 1 {
                    let mut h = Mat::zeros(ring, m);
                    h.set(k, k, ring.one());
                    h.set(k + 1, k + 1, ring.neg(ring.one()));
                    els.push(h);
                }
                Ok(AlgebraBasis {
                    ctx: ctx.clone(),
                    elements: els,
                    base: ring,
                    kind: BasisKind::SlStandard,
                })
            }
            FamilyKind::So => {
                let q = ctx.form_matrix().expect("SO form").clone();
                let qinv = q.inverse()?;
                let mut els = Vec::new();
                for i in 0..m {
                    for j in i + 1..m {
                        let mut s = Mat::zeros(ring, m);
                        s.set(i, j, ring.one());
                        s.set(j, i, ring.neg(ring.one()));
                        els.push(qinv.mul(&s)?);
                    }
                }
                Ok(AlgebraBasis {
                    ctx: ctx.clone(),
                    elements: els,
                    base: ring,
                    kind: BasisKind::SoStandard { q },
                })
            }
            FamilyKind::Su => {
                let base = Ring::prime_field(ring.char_p())?;
                let rows = su_constraint_rows(ctx)?;
                let vectors = kernel_basis(base, &rows, 2 * m * m)?;
                let els = vectors
                    .iter()
                    .map(|v| su_devectorize(ring, m, v))
                    .collect();
                Ok(AlgebraBasis {
                    ctx: ctx.clone(),
                    elements: els,
                    base,
                    kind: BasisKind::SuSolved { vectors },
                })
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Coordinates of an algebra element in this basis, over `base`.
    pub fn coords(&self, y: &Mat) -> Result<Vec<Elt>, LieError> {
        let ring = self.ctx.ring;
        let m = self.ctx.matrix_size();
        match &self.kind {
            BasisKind::SlStandard => {
                if y.trace() != ring.zero() {
                    return Err(LieError::NotInAlgebra);
                }
                let mut out = Vec::with_capacity(self.dim());
                for i in 0..m {
                    for j in 0..m {
                        if i != j {
                            out.push(y.get(i, j));
                        }
                    }
                }
                let mut acc = ring.zero();
                for k in 0..m - 1 {
                    acc = ring.add(acc, y.get(k, k));
                    out.push(acc);
                }
                Ok(out)
            }
            BasisKind::SoStandard { q, .. } => {
                let s = q.mul(y)?;
                // S must be skew-symmetric
                for i in 0..m {
                    if s.get(i, i) != ring.zero() {
                        return Err(LieError::NotInAlgebra);
                    }
                    for j in i + 1..m {
                        if ring.add(s.get(i, j), s.get(j, i)) != ring.zero() {
                            return Err(LieError::NotInAlgebra);
                        }
                    }
                }
                let mut out = Vec::with_capacity(self.dim());
                for i in 0..m {
                    for j in i + 1..m {
                        out.push(s.get(i, j));
                    }
                }
                Ok(out)
            }
            BasisKind::SuSolved { vectors } => {
                let target = su_vectorize(ring, y);
                match linalg::solve_coords(self.base, vectors, &target)? {
                    Some(x) => Ok(x),
                    None => Err(LieError::NotInAlgebra),
                }
            }
        }
    }

    /// Linear combination Σ cᵢ·bᵢ from base-ring coordinates.
    pub fn from_coords(&self, coords: &[Elt]) -> Mat {
        let ring = self.ctx.ring;
        let m = self.ctx.matrix_size();
        let mut out = Mat::zeros(ring, m);
        for (c, b) in coords.iter().zip(&self.elements) {
            if c.a == 0 && c.b == 0 {
                continue;
            }
            // base coordinates embed as scalars of the matrix ring
            let scalar = Elt { a: c.a, b: 0 };
            out = out.add(&b.scalar_mul(scalar)).expect("same ring");
        }
        out
    }

    /// The bracket [X, Y] = XY − YX.
    pub fn bracket(&self, x: &Mat, y: &Mat) -> Result<Mat, LieError> {
        Ok(x.mul(y)?.sub(&y.mul(x)?)?)
    }

    /// Matrix of ad X on this basis (dim × dim over `base`, row-major).
    pub fn ad_matrix(&self, x: &Mat) -> Result<Vec<Elt>, LieError> {
        let d = self.dim();
        let mut out = vec![self.base.zero(); d * d];
        for (col, b) in self.elements.iter().enumerate() {
            let c = self.bracket(x, b)?;
            let coords = self.coords(&c)?;
            for (row, v) in coords.into_iter().enumerate() {
                out[row * d + col] = v;
            }
        }
        Ok(out)
    }

    /// Killing form B(X, Y) = Tr(ad X · ad Y), over `base`.
    pub fn killing_form(&self, x: &Mat, y: &Mat) -> Result<Elt, LieError> {
        let d = self.dim();
        let ax = self.ad_matrix(x)?;
        let ay = self.ad_matrix(y)?;
        let ring = self.base;
        let mut acc = ring.zero();
        for i in 0..d {
            for j in 0..d {
                acc = ring.add(acc, ring.mul(ax[i * d + j], ay[j * d + i]));
            }
        }
        Ok(acc)
    }

    /// Gram matrix of the Killing form in this basis.
    pub fn killing_gram(&self) -> Result<Mat, LieError> {
        let d = self.dim();
        let ring = self.base;
        let ads: Vec<Vec<Elt>> = self
            .elements
            .iter()
            .map(|b| self.ad_matrix(b))
            .collect::<Result<_, _>>()?;
        let mut gram = Mat::zeros(ring, d);
        for i in 0..d {
            for j in i..d {
                let mut acc = ring.zero();
                for k in 0..d {
                    for l in 0..d {
                        acc = ring.add(acc, ring.mul(ads[i][k * d + l], ads[j][l * d + k]));
                    }
                }
                gram.set(i, j, acc);
                gram.set(j, i, acc);
            }
        }
        Ok(gram)
    }

    /// True iff the Killing Gram determinant is a unit over the base ring
    /// (equivalently, nonzero mod p).
    pub fn killing_nondegenerate(&self) -> Result<bool, LieError> {
        let gram = self.killing_gram()?;
        Ok(self.base.is_unit(gram.det()))
    }

    /// dim C_𝔤(X): nullity of ad X on 𝔤 (field coefficients).
    pub fn centralizer_dim(&self, x: &Mat) -> Result<usize, LieError> {
        if !self.base.is_field() {
            return Err(LieError::Ring(RingError::NotAField));
        }
        let d = self.dim();
        let ad = self.ad_matrix(x)?;
        let rows: Vec<Vec<Elt>> = (0..d).map(|i| ad[i * d..(i + 1) * d].to_vec()).collect();
        let basis = kernel_basis(self.base, &rows, d)?;
        Ok(basis.len())
    }
}

fn su_vectorize(_ring: Ring, y: &Mat) -> Vec<Elt> {
    let m = y.dim();
    let base_zero = Elt { a: 0, b: 0 };
    let mut out = Vec::with_capacity(2 * m * m);
    for i in 0..m {
        for j in 0..m {
            let e = y.get(i, j);
            out.push(Elt { a: e.a, ..base_zero });
            out.push(Elt { a: e.b, ..base_zero });
        }
    }
    out
}

fn su_devectorize(ring: Ring, m: usize, v: &[Elt]) -> Mat {
    let mut out = Mat::zeros(ring, m);
    for i in 0..m {
        for j in 0..m {
            let re = v[2 * (i * m + j)].a;
            let im = v[2 * (i * m + j) + 1].a;
            out.set(i, j, Elt { a: re, b: im });
        }
    }
    out
}

/// 𝔽_p-linear constraint rows for su(Q): X*Q + QX = 0 and Tr X = 0, on the
/// 2m² real/imaginary coordinates of X.
fn su_constraint_rows(ctx: &GroupContext) -> Result<Vec<Vec<Elt>>, LieError> {
    let ring = ctx.ring;
    let base = Ring::prime_field(ring.char_p())?;
    let m = ctx.matrix_size();
    let cols = 2 * m * m;
    let mut rows = Vec::new();
    // evaluate each constraint on every coordinate unit vector: constraints
    // are 𝔽_p-linear, so this assembles the exact matrix
    let q = ctx.form_matrix().expect("SU form").clone();
    let mut unit = vec![base.zero(); cols];
    let mut constraint_cols: Vec<Vec<Elt>> = Vec::with_capacity(cols);
    for k in 0..cols {
        unit[k] = base.one();
        let x = su_devectorize(ring, m, &unit);
        unit[k] = base.zero();
        let lhs = x.star()?.mul(&q)?.add(&q.mul(&x)?)?;
        let tr = x.trace();
        let mut col = su_vectorize(ring, &lhs);
        col.push(Elt { a: tr.a, b: 0 });
        col.push(Elt { a: tr.b, b: 0 });
        constraint_cols.push(col);
    }
    let n_constraints = 2 * m * m + 2;
    for r in 0..n_constraints {
        rows.push((0..cols).map(|c| constraint_cols[c][r]).collect());
    }
    Ok(rows)
}

/// Dimension of the linearized solution space found by the generic field
/// solver, independent of the structured bases (cross-check oracle).
pub fn solved_dimension_oracle(ctx: &GroupContext) -> Result<usize, LieError> {
    let ring = ctx.ring;
    let m = ctx.matrix_size();
    match ctx.family.kind {
        FamilyKind::Su => {
            let base = Ring::prime_field(ring.char_p())?;
            let rows = su_constraint_rows(ctx)?;
            Ok(kernel_basis(base, &rows, 2 * m * m)?.len())
        }
        FamilyKind::Sl => {
            let rows = vec![(0..m * m)
                .map(|k| if k % (m + 1) == 0 { ring.one() } else { ring.zero() })
                .collect()];
            Ok(kernel_basis(ring, &rows, m * m)?.len())
        }
        FamilyKind::So => {
            let q = ctx.form_matrix().expect("form").clone();
            let mut rows = Vec::new();
            for a in 0..m {
                for b in 0..m {
                    // (XᵀQ + QX)[a][b] as a linear functional of X's entries
                    let mut row = vec![ring.zero(); m * m];
                    for k in 0..m {
                        // XᵀQ term: X[k][a]·Q[k][b]
                        row[k * m + a] = ring.add(row[k * m + a], q.get(k, b));
                        // QX term: Q[a][k]·X[k][b]
                        row[k * m + b] = ring.add(row[k * m + b], q.get(a, k));
                    }
                    rows.push(row);
                }
            }
            Ok(kernel_basis(ring, &rows, m * m)?.len())
        }
    }
}

/// Jordan decomposition X = X_s + X_n over a field: X_s semisimple, X_n
/// nilpotent, both polynomials in X (so they commute), unique.
pub fn jordan_decompose(x: &Mat) -> Result<(Mat, Mat), LieError> {
    let ring = x.ring();
    if !ring.is_field() {
        return Err(LieError::Ring(RingError::NotAField));
    }
    let m = x.dim();
    let c = charpoly(x);
    let parts = squarefree_decomposition(&c)?;
    let mut rad = Poly::one(ring);
    let mut max_mult = 1u32;
    for p in &parts {
        rad = rad.mul(&p.factor);
        max_mult = max_mult.max(p.multiplicity);
    }
    if rad.eval_mat(x).is_zero() {
        return Ok((x.clone(), Mat::zeros(ring, m)));
    }
    // Newton iteration for a root of `rad` in ring[t]/(c) starting at t
    let mut q = Poly::x(ring).rem(&c)?;
    let radp = rad.derivative();
    let iterations = 2 + (32 - max_mult.leading_zeros()) as usize;
    for _ in 0..=iterations {
        let num = rad.compose_mod(&q, &c)?;
        if num.is_zero() {
            break;
        }
        let den = radp.compose_mod(&q, &c)?;
        let dinv = den
            .inv_mod(&c)?
            .expect("rad' stays invertible mod the characteristic polynomial");
        q = q.sub(&num.mul(&dinv)).rem(&c)?;
    }
    debug_assert!(rad.compose_mod(&q, &c)?.is_zero());
    let xs = q.eval_mat(x);
    let xn = x.sub(&xs)?;
    debug_assert!(xn.pow(m as u64).is_zero());
    Ok((xs, xn))
}

/// One eigenvalue class over the algebraic closure: `count·degree` distinct
/// eigenvalues, each with the same multiplicity.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct EigenvalueClass {
    pub degree: usize,
    pub multiplicity: usize,
    pub count: usize,
}

/// Jordan type of a pure element: semisimple eigenvalue multiplicities or
/// nilpotent block counts.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum JordanData {
    Semisimple {
        classes: Vec<EigenvalueClass>,
        /// Multiplicity of the eigenvalue 0 (r₀ in the orthogonal case).
        zero_multiplicity: usize,
    },
    Nilpotent {
        /// `block_counts[j]` = number of Jordan blocks of size j+1.
        block_counts: Vec<usize>,
    },
}

impl JordanData {
    /// Σ over distinct eigenvalues of multiplicity², computed from the
    /// factor classes.
    pub fn sum_multiplicity_squares(&self) -> Option<usize> {
        match self {
            JordanData::Semisimple { classes, .. } => Some(
                classes
                    .iter()
                    .map(|c| c.degree * c.count * c.multiplicity * c.multiplicity)
                    .sum(),
            ),
            JordanData::Nilpotent { .. } => None,
        }
    }
}

/// Jordan type of a pure (semisimple or nilpotent) element; errors with
/// [`LieError::MixedElement`] otherwise.
pub fn jordan_type(x: &Mat) -> Result<JordanData, LieError> {
    let ring = x.ring();
    if !ring.is_field() {
        return Err(LieError::Ring(RingError::NotAField));
    }
    let m = x.dim();
    let c = charpoly(x);
    let parts = squarefree_decomposition(&c)?;
    let mut rad = Poly::one(ring);
    for p in &parts {
        rad = rad.mul(&p.factor);
    }
    if rad.eval_mat(x).is_zero() {
        // semisimple (includes X = 0)
        let shape = factor_shape(&c)?;
        let classes = shape
            .iter()
            .map(|f| EigenvalueClass {
                degree: f.degree,
                multiplicity: f.multiplicity as usize,
                count: f.count,
            })
            .collect();
        let zero_multiplicity = c.coeffs.iter().take_while(|&&e| e == ring.zero()).count();
        return Ok(JordanData::Semisimple {
            classes,
            zero_multiplicity,
        });
    }
    let nilpotent = (0..m).all(|i| c.coeff(i) == ring.zero());
    if !nilpotent {
        return Err(LieError::MixedElement);
    }
    // r_j from ranks of powers: rank X⁰ = m
    let mut ranks = vec![m];
    let mut acc = Mat::identity(ring, m);
    for _ in 1..=m + 1 {
        acc = acc.mul(x)?;
        ranks.push(linalg::rank(&acc)?);
    }
    let mut block_counts = Vec::new();
    for j in 1..=m {
        let r = ranks[j - 1] + ranks[j + 1];
        let twice = 2 * ranks[j];
        block_counts.push(r.saturating_sub(twice));
    }
    while block_counts.last() == Some(&0) {
        block_counts.pop();
    }
    Ok(JordanData::Nilpotent { block_counts })
}

/// The closed-form centralizer dimension for a pure element:
/// SL/SU semisimple Σ rⱼ² − 1; SL/SU nilpotent Σ (rⱼ+…+r_d)² − 1;
/// SO semisimple r₀(r₀−1)/2 + Σ_pairs rⱼ²; SO nilpotent
/// ½Σ(rⱼ+…+r_d)² − ½Σ_{j odd} rⱼ.
pub fn closed_form_dim(kind: FamilyKind, jd: &JordanData) -> Result<usize, LieError> {
    match (kind, jd) {
        (FamilyKind::Sl | FamilyKind::Su, JordanData::Semisimple { .. }) => {
            Ok(jd.sum_multiplicity_squares().expect("semisimple") - 1)
        }
        (FamilyKind::Sl | FamilyKind::Su, JordanData::Nilpotent { block_counts }) => {
            let d = block_counts.len();
            let mut total = 0usize;
            for j in 0..d {
                let tail: usize = block_counts[j..].iter().sum();
                total += tail * tail;
            }
            Ok(total - 1)
        }
        (FamilyKind::So, JordanData::Semisimple { zero_multiplicity, .. }) => {
            let r0 = *zero_multiplicity;
            let all = jd.sum_multiplicity_squares().expect("semisimple");
            // nonzero eigenvalues pair off (λ, −λ) with equal multiplicity:
            // Σ_pairs rⱼ² = (Σ_all − r₀²)/2
            let nonzero = all - r0 * r0;
            if nonzero % 2 != 0 {
                return Err(LieError::ParityViolation);
            }
            Ok(r0 * (r0.saturating_sub(1)) / 2 + nonzero / 2)
        }
        (FamilyKind::So, JordanData::Nilpotent { block_counts }) => {
            let d = block_counts.len();
            for (idx, &r) in block_counts.iter().enumerate() {
                let size = idx + 1;
                if size % 2 == 0 && r % 2 != 0 {
                    return Err(LieError::ParityViolation);
                }
            }
            let mut tails = 0usize;
            let mut odd = 0usize;
            for j in 0..d {
                let tail: usize = block_counts[j..].iter().sum();
                tails += tail * tail;
                if (j + 1) % 2 == 1 {
                    odd += block_counts[j];
                }
            }
            Ok((tails - odd) / 2)
        }
    }
}

/// |C_G(X)| by filtering the group enumeration.
pub fn centralizer_group_count(
    ctx: &GroupContext,
    x: &Mat,
    opts: EnumOptions,
) -> Result<u128, LieError> {
    let mut count = 0u128;
    crate::groupscheme::for_each_element(ctx, opts, &mut |g| {
        let gx = g.mul(x).expect("same ring");
        let xg = x.mul(g).expect("same ring");
        if gx == xg {
            count += 1;
        }
    })?;
    Ok(count)
}

/// Everything the `centralizer` CLI subcommand reports about one element.
#[derive(Clone, Debug, Serialize)]
pub struct CentralizerReport {
    pub family: serde_json::Value,
    pub ring: String,
    pub matrix: serde_json::Value,
    /// dim C_𝔤(X) from the kernel of ad X (counted over 𝔽_p for SU; the
    /// dictionary with the algebraic dimension is |C| = p^dim).
    pub algebra_dim: usize,
    /// |C_G(X)| by enumeration, when the budget allows.
    pub group_count: Option<u128>,
    /// Closed-form dimension from the Jordan type (pure elements only).
    pub closed_form_dim: Option<usize>,
    /// dim G − 2e, the proposition's right-hand side.
    pub bound_rhs: i64,
    pub jordan_kind: String,
    pub is_central: bool,
    /// dim C ≤ dim G − 2e (reported for nonzero noncentral X).
    pub satisfies_bound: Option<bool>,
}

/// Builds the centralizer report for one algebra element at field level.
pub fn centralizer_report(
    ctx: &GroupContext,
    x: &Mat,
    group_budget: Option<u64>,
) -> Result<CentralizerReport, LieError> {
    let basis = AlgebraBasis::new(ctx)?;
    if !ctx.is_algebra_element(x)? {
        return Err(LieError::NotInAlgebra);
    }
    let algebra_dim = basis.centralizer_dim(x)?;
    let dim_g = ctx.dim_g();
    let e = ctx.family.rep_exponent_e();
    let bound_rhs = dim_g as i64 - 2 * e as i64;
    let is_central = algebra_dim == basis.dim() && !x.is_zero();
    let (jordan_kind, closed) = match jordan_type(x) {
        Ok(jd) => {
            let kind = match &jd {
                JordanData::Semisimple { .. } => "semisimple",
                JordanData::Nilpotent { .. } => "nilpotent",
            };
            match closed_form_dim(ctx.family.kind, &jd) {
                Ok(v) => (kind.to_string(), Some(v)),
                Err(_) => (format!("{kind} (parity diagnostic)"), None),
            }
        }
        Err(LieError::MixedElement) => ("mixed".to_string(), None),
        Err(e) => return Err(e),
    };
    let group_count = match group_budget {
        Some(budget) => {
            let opts = EnumOptions {
                budget,
                ..EnumOptions::default()
            };
            Some(centralizer_group_count(ctx, x, opts)?)
        }
        None => None,
    };
    let satisfies_bound = if x.is_zero() || is_central {
        None
    } else {
        Some(algebra_dim as i64 <= bound_rhs)
    };
    Ok(CentralizerReport {
        family: ctx.family.to_json(),
        ring: format!("Z/{}^{}", ctx.ring.char_p(), ctx.ring.exponent()),
        matrix: x.to_json(),
        algebra_dim,
        group_count,
        closed_form_dim: closed,
        bound_rhs,
        jordan_kind,
        is_central,
        satisfies_bound,
    })
}

/// All matrices of 𝔤 as coordinate combinations (odometer order).
pub fn algebra_elements(basis: &AlgebraBasis) -> Vec<Mat> {
    let d = basis.dim();
    let card = basis.base.card();
    let total = card.pow(d as u32);
    let elems: Vec<Elt> = basis.base.elements().collect();
    let mut out = Vec::with_capacity(total as usize);
    for idx in 0..total {
        let mut coords = Vec::with_capacity(d);
        let mut t = idx;
        for _ in 0..d {
            coords.push(elems[(t % card) as usize]);
            t /= card;
        }
        out.push(basis.from_coords(&coords));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupscheme::GroupFamily;

    fn sl_ctx(n: usize, p: u64) -> GroupContext {
        let ring = Ring::prime_field(p).unwrap();
        GroupContext::new_allowing_bad_primes(GroupFamily::sl(n).unwrap(), ring).unwrap()
    }

    fn so_ctx(n: usize, p: u64) -> GroupContext {
        let ring = Ring::prime_field(p).unwrap();
        GroupContext::new_allowing_bad_primes(GroupFamily::so(n, None).unwrap(), ring).unwrap()
    }

    #[test]
    fn basis_dimensions() {
        assert_eq!(AlgebraBasis::new(&sl_ctx(1, 5)).unwrap().dim(), 3);
        assert_eq!(AlgebraBasis::new(&sl_ctx(2, 5)).unwrap().dim(), 8);
        assert_eq!(AlgebraBasis::new(&so_ctx(3, 3)).unwrap().dim(), 6);
        assert_eq!(AlgebraBasis::new(&so_ctx(4, 3)).unwrap().dim(), 10);
        let su2 = GroupContext::new(
            GroupFamily::su(1, None).unwrap(),
            Ring::quadratic_field(3).unwrap(),
        )
        .unwrap();
        assert_eq!(AlgebraBasis::new(&su2).unwrap().dim(), 3);
    }

    #[test]
    fn basis_matches_solver_oracle() {
        for ctx in [sl_ctx(1, 5), sl_ctx(2, 3), so_ctx(2, 3), so_ctx(3, 5)] {
            let b = AlgebraBasis::new(&ctx).unwrap();
            assert_eq!(b.dim(), solved_dimension_oracle(&ctx).unwrap());
            assert_eq!(b.dim(), ctx.dim_g());
            for el in &b.elements {
                assert!(ctx.is_algebra_element(el).unwrap());
            }
        }
        let su3 = GroupContext::new(
            GroupFamily::su(2, None).unwrap(),
            Ring::quadratic_field(5).unwrap(),
        )
        .unwrap();
        let b = AlgebraBasis::new(&su3).unwrap();
        assert_eq!(b.dim(), 8);
        assert_eq!(b.dim(), solved_dimension_oracle(&su3).unwrap());
        for el in &b.elements {
            assert!(su3.is_algebra_element(el).unwrap());
        }
    }

    #[test]
    fn coords_are_unit_vectors_on_basis() {
        for ctx in [sl_ctx(2, 5), so_ctx(3, 3)] {
            let b = AlgebraBasis::new(&ctx).unwrap();
            for (i, el) in b.elements.iter().enumerate() {
                let c = b.coords(el).unwrap();
                for (j, v) in c.iter().enumerate() {
                    let expect = if i == j { b.base.one() } else { b.base.zero() };
                    assert_eq!(*v, expect);
                }
            }
        }
    }

    #[test]
    fn killing_on_sl2_f5() {
        // B(H, H) = 8 ≡ 3 mod 5, via explicit ad matrices
        let ctx = sl_ctx(1, 5);
        let b = AlgebraBasis::new(&ctx).unwrap();
        let h = Mat::from_rows(ctx.ring, &[vec![1, 0], vec![0, -1]]).unwrap();
        assert_eq!(b.killing_form(&h, &h).unwrap(), ctx.ring.embed(3));
        // B(X, 0) = 0
        let zero = Mat::zeros(ctx.ring, 2);
        assert_eq!(b.killing_form(&h, &zero).unwrap(), ctx.ring.zero());
        // B = 4·Tr(XY) on sl₂: verified, not assumed
        let e = Mat::from_rows(ctx.ring, &[vec![0, 1], vec![0, 0]]).unwrap();
        let f = Mat::from_rows(ctx.ring, &[vec![0, 0], vec![1, 0]]).unwrap();
        let four = ctx.ring.embed(4);
        for (x, y) in [(&h, &h), (&e, &f), (&h, &e), (&e, &e)] {
            let tr = x.mul(y).unwrap().trace();
            assert_eq!(b.killing_form(x, y).unwrap(), ctx.ring.mul(four, tr));
        }
    }

    #[test]
    fn killing_symmetric_and_invariant() {
        let ctx = sl_ctx(2, 5);
        let b = AlgebraBasis::new(&ctx).unwrap();
        let mut seed = 3u64;
        let mut rand_elt = || {
            let d = b.dim();
            let mut coords = Vec::with_capacity(d);
            for _ in 0..d {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
                coords.push(b.base.embed((seed >> 33) as i64));
            }
            b.from_coords(&coords)
        };
        for _ in 0..20 {
            let x = rand_elt();
            let y = rand_elt();
            let z = rand_elt();
            assert_eq!(
                b.killing_form(&x, &y).unwrap(),
                b.killing_form(&y, &x).unwrap()
            );
            // B([Z,X],Y) + B(X,[Z,Y]) = 0
            let zx = b.bracket(&z, &x).unwrap();
            let zy = b.bracket(&z, &y).unwrap();
            let lhs = b.killing_form(&zx, &y).unwrap();
            let rhs = b.killing_form(&x, &zy).unwrap();
            assert_eq!(ctx.ring.add(lhs, rhs), ctx.ring.zero());
        }
    }

    #[test]
    fn killing_nondegeneracy_over_local_rings() {
        // sl₂ over ℤ/25: Gram determinant a unit
        let ring = Ring::integers_mod(5, 2).unwrap();
        let ctx =
            GroupContext::new_allowing_bad_primes(GroupFamily::sl(1).unwrap(), ring).unwrap();
        let b = AlgebraBasis::new(&ctx).unwrap();
        assert!(b.killing_nondegenerate().unwrap());
        // sl₂ over ℤ/4 (bad prime 2): degenerate, recorded not asserted
        let ring = Ring::integers_mod(2, 2).unwrap();
        let ctx =
            GroupContext::new_allowing_bad_primes(GroupFamily::sl(1).unwrap(), ring).unwrap();
        let b = AlgebraBasis::new(&ctx).unwrap();
        assert!(!b.killing_nondegenerate().unwrap());
    }

    #[test]
    fn jordan_decompose_properties() {
        let ctx = sl_ctx(2, 5);
        let ring = ctx.ring;
        // nilpotent single block
        let n = Mat::from_rows(ring, &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]).unwrap();
        let (s, nn) = jordan_decompose(&n).unwrap();
        assert!(s.is_zero());
        assert_eq!(nn, n);
        // diagonal
        let d = Mat::from_rows(ring, &[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]).unwrap();
        let (s, nn) = jordan_decompose(&d).unwrap();
        assert_eq!(s, d);
        assert!(nn.is_zero());
        // mixed: diag(1,1,-2) + E12
        let x = Mat::from_rows(ring, &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, -2]]).unwrap();
        let (s, nn) = jordan_decompose(&x).unwrap();
        assert_eq!(s.add(&nn).unwrap(), x);
        // commute
        assert_eq!(s.mul(&nn).unwrap(), nn.mul(&s).unwrap());
        // x_n nilpotent, x_s semisimple (squarefree annihilator)
        assert!(nn.pow(3).is_zero());
        assert!(matches!(
            jordan_type(&s).unwrap(),
            JordanData::Semisimple { .. }
        ));
        assert!(!nn.is_zero());
    }

    #[test]
    fn jordan_decompose_char2_frobenius_case() {
        // over 𝔽₂: X = I + E₁₂ has (x+1)² as charpoly; X_s = I
        let ctx = sl_ctx(1, 2);
        let ring = ctx.ring;
        let x = Mat::from_rows(ring, &[vec![1, 1], vec![0, 1]]).unwrap();
        let (s, n) = jordan_decompose(&x).unwrap();
        assert_eq!(s, Mat::identity(ring, 2));
        assert_eq!(n, Mat::from_rows(ring, &[vec![0, 1], vec![0, 0]]).unwrap());
    }

    #[test]
    fn jordan_type_examples() {
        let ctx = sl_ctx(2, 7);
        let ring = ctx.ring;
        // zero: all eigenvalues 0 with multiplicity n+1
        let z = Mat::zeros(ring, 3);
        match jordan_type(&z).unwrap() {
            JordanData::Semisimple {
                classes,
                zero_multiplicity,
            } => {
                assert_eq!(zero_multiplicity, 3);
                assert_eq!(classes, vec![EigenvalueClass { degree: 1, multiplicity: 3, count: 1 }]);
            }
            _ => panic!("zero is semisimple"),
        }
        // nilpotent [[0,1],[0,0]]: one block of size 2
        let ctx2 = sl_ctx(1, 7);
        let n = Mat::from_rows(ctx2.ring, &[vec![0, 1], vec![0, 0]]).unwrap();
        assert_eq!(
            jordan_type(&n).unwrap(),
            JordanData::Nilpotent { block_counts: vec![0, 1] }
        );
        // diag(1,1,−2) in sl₃(𝔽₇): multiplicities {2, 1}
        let d = Mat::from_rows(ring, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, -2]]).unwrap();
        match jordan_type(&d).unwrap() {
            JordanData::Semisimple { classes, .. } => {
                let mut mults: Vec<(usize, usize)> =
                    classes.iter().map(|c| (c.multiplicity, c.degree * c.count)).collect();
                mults.sort();
                assert_eq!(mults, vec![(1, 1), (2, 1)]);
            }
            _ => panic!("diagonal is semisimple"),
        }
        // mixed element rejected
        let x = Mat::from_rows(ring, &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, -2]]).unwrap();
        assert_eq!(jordan_type(&x).unwrap_err(), LieError::MixedElement);
    }

    #[test]
    fn centralizer_dims_sl2() {
        let ctx = sl_ctx(1, 5);
        let b = AlgebraBasis::new(&ctx).unwrap();
        let zero = Mat::zeros(ctx.ring, 2);
        assert_eq!(b.centralizer_dim(&zero).unwrap(), 3);
        let h = Mat::from_rows(ctx.ring, &[vec![1, 0], vec![0, -1]]).unwrap();
        assert_eq!(b.centralizer_dim(&h).unwrap(), 1);
        // matches closed form Σ rⱼ² − 1 = 1² + 1² − 1
        let jd = jordan_type(&h).unwrap();
        assert_eq!(closed_form_dim(FamilyKind::Sl, &jd).unwrap(), 1);
    }

    #[test]
    fn centralizer_dim_regular_nilpotent_sl3() {
        let ctx = sl_ctx(2, 5);
        let b = AlgebraBasis::new(&ctx).unwrap();
        let n = Mat::from_rows(ctx.ring, &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]).unwrap();
        assert_eq!(b.centralizer_dim(&n).unwrap(), 2);
        let jd = jordan_type(&n).unwrap();
        assert_eq!(jd, JordanData::Nilpotent { block_counts: vec![0, 0, 1] });
        // (1)² + (1)² + (1)² − 1 = 2
        assert_eq!(closed_form_dim(FamilyKind::Sl, &jd).unwrap(), 2);
    }

    #[test]
    fn closed_form_paper_specializations() {
        // SL semisimple with multiplicities (1, n) → n²
        for n in 1..=4usize {
            let jd = JordanData::Semisimple {
                classes: vec![
                    EigenvalueClass { degree: 1, multiplicity: 1, count: 1 },
                    EigenvalueClass { degree: 1, multiplicity: n, count: 1 },
                ],
                zero_multiplicity: 0,
            };
            assert_eq!(closed_form_dim(FamilyKind::Sl, &jd).unwrap(), n * n);
        }
        // SO semisimple, one nonzero pair r₁ with r₀ = n+1−2r₁:
        // n(n+1)/2 + r₁(3r₁−2n−1)
        for n in 2..=7usize {
            for r1 in 1..=(n + 1) / 2 {
                let r0 = n + 1 - 2 * r1;
                let jd = JordanData::Semisimple {
                    classes: vec![
                        EigenvalueClass { degree: 1, multiplicity: r0, count: 1 },
                        EigenvalueClass { degree: 1, multiplicity: r1, count: 2 },
                    ],
                    zero_multiplicity: r0,
                };
                let expect = (n * (n + 1) / 2) as i64 + r1 as i64 * (3 * r1 as i64 - 2 * n as i64 - 1);
                assert_eq!(
                    closed_form_dim(FamilyKind::So, &jd).unwrap() as i64,
                    expect,
                    "n={n} r1={r1}"
                );
            }
        }
        // SO parity violation is flagged
        let bad = JordanData::Nilpotent { block_counts: vec![1, 1] };
        assert_eq!(closed_form_dim(FamilyKind::So, &bad).unwrap_err(), LieError::ParityViolation);
    }

    #[test]
    fn jordan_decomposition_unique_by_exhaustive_search() {
        // over 𝔽₃, for sample mixed 2×2 matrices, enumerate every split
        // X = S + N with S semisimple, N nilpotent, [S, N] = 0; exactly one
        // exists and it is the computed one
        let ring = Ring::prime_field(3).unwrap();
        let all: Vec<Mat> = (0..81u64)
            .map(|i| {
                Mat::from_rows(
                    ring,
                    &[
                        vec![(i % 3) as i64, (i / 3 % 3) as i64],
                        vec![(i / 9 % 3) as i64, (i / 27 % 3) as i64],
                    ],
                )
                .unwrap()
            })
            .collect();
        let is_ss = |m: &Mat| {
            let c = charpoly(m);
            let parts = squarefree_decomposition(&c).unwrap();
            let mut rad = Poly::one(ring);
            for p in &parts {
                rad = rad.mul(&p.factor);
            }
            rad.eval_mat(m).is_zero()
        };
        for x in [
            Mat::from_rows(ring, &[vec![1, 1], vec![0, 1]]).unwrap(),
            Mat::from_rows(ring, &[vec![2, 1], vec![0, 2]]).unwrap(),
            Mat::from_rows(ring, &[vec![1, 2], vec![2, 1]]).unwrap(),
        ] {
            let (xs, xn) = jordan_decompose(&x).unwrap();
            let mut found = Vec::new();
            for s in &all {
                let n = x.sub(s).unwrap();
                if s.mul(&n).unwrap() == n.mul(s).unwrap()
                    && n.pow(2).is_zero()
                    && is_ss(s)
                {
                    found.push((s.clone(), n));
                }
            }
            assert_eq!(found.len(), 1);
            assert_eq!(found[0], (xs, xn));
        }
    }

    #[test]
    fn group_count_within_component_ceiling() {
        // |C_G(X)| / p^{dim C_𝔤(X)} ≤ 4^rank over every X of the small scans
        for (kind, n, p, rank) in [
            (FamilyKind::Sl, 1usize, 3u64, 1u32),
            (FamilyKind::So, 2, 3, 1),
        ] {
            let fam = GroupFamily::new(kind, n, None).unwrap();
            let ring = Ring::prime_field(p).unwrap();
            let ctx = GroupContext::new_allowing_bad_primes(fam, ring).unwrap();
            let basis = AlgebraBasis::new(&ctx).unwrap();
            for x in algebra_elements(&basis) {
                let dim = basis.centralizer_dim(&x).unwrap();
                let count = centralizer_group_count(&ctx, &x, EnumOptions::default()).unwrap();
                let ceiling = 4u128.pow(rank) * (p as u128).pow(dim as u32);
                assert!(count <= ceiling, "count {count} > ceiling {ceiling}");
            }
        }
    }

    #[test]
    fn group_centralizer_of_split_torus_sl2_f5() {
        let ctx = sl_ctx(1, 5);
        let h = Mat::from_rows(ctx.ring, &[vec![1, 0], vec![0, -1]]).unwrap();
        let c = centralizer_group_count(&ctx, &h, EnumOptions::default()).unwrap();
        assert_eq!(c, 4); // the diagonal torus
        let zero = Mat::zeros(ctx.ring, 2);
        assert_eq!(
            centralizer_group_count(&ctx, &zero, EnumOptions::default()).unwrap(),
            120
        );
    }
}
