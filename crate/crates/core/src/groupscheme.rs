//! The finite groups 𝔾(ℤ/p^r) for the families SL_{n+1}, SO(Q), SU_{n+1}:
//! membership, enumeration, orders, reduction maps, congruence kernels, and
//! the strong-approximation/CRT factorization of levels.
//!
//! Enumeration builds matrices column by column with early rejection from
//! the form equations (SO/SU) or solves the last column from the determinant
//! constraint (SL); this is what makes SO₅(𝔽₃) feasible. Work splits
//! deterministically by first-column ranges so shards concatenate to the
//! same stream regardless of shard count.

use std::fmt;

use serde::Serialize;

use crate::ringalg::{Elt, Mat, Ring, RingError, RingKind};

/// Errors from group-scheme operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    Ring(RingError),
    /// Prime is in the bad set for this family (see [`is_good_prime`]).
    BadPrime { p: u64 },
    /// Rank outside the supported desk-scale window.
    RankOutOfRange { n: usize },
    /// Form matrix not symmetric / Hermitian / invertible mod p.
    FormInvalid(&'static str),
    /// Ring kind incompatible with the family (e.g. SU needs 𝔽_{p²}).
    WrongRingKind,
    /// Matrix fails the defining equations of the group.
    NotInGroup,
    /// Matrix fails the linearized (Lie-algebra) equations.
    NotInAlgebra,
    /// Element is not congruent to the identity at the requested level.
    NotInKernel,
    /// kernel_log/exp level must satisfy l ≤ r ≤ 2l.
    BadKernelLevel { r: u32, l: u32 },
    /// Candidate budget exhausted during enumeration.
    BudgetExceeded { visited: u64, budget: u64 },
    /// Order arithmetic does not fit in u128.
    Overflow,
    /// Level must be a positive integer.
    BadLevel(u64),
}

impl From<RingError> for GroupError {
    fn from(e: RingError) -> Self {
        GroupError::Ring(e)
    }
}

impl fmt::Display for GroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupError::Ring(e) => write!(f, "{e}"),
            GroupError::BadPrime { p } => write!(f, "prime {p} is bad for this family"),
            GroupError::RankOutOfRange { n } => write!(f, "rank n = {n} out of supported range"),
            GroupError::FormInvalid(msg) => write!(f, "invalid form matrix: {msg}"),
            GroupError::WrongRingKind => write!(f, "ring kind incompatible with family"),
            GroupError::NotInGroup => write!(f, "matrix fails the group equations"),
            GroupError::NotInAlgebra => write!(f, "matrix fails the Lie-algebra equations"),
            GroupError::NotInKernel => write!(f, "element is not in the congruence kernel"),
            GroupError::BadKernelLevel { r, l } => {
                write!(f, "kernel level l = {l} invalid for exponent r = {r} (need l ≤ r ≤ 2l)")
            }
            GroupError::BudgetExceeded { visited, budget } => {
                write!(f, "enumeration budget exceeded ({visited} candidates, budget {budget})")
            }
            GroupError::Overflow => write!(f, "order does not fit in 128 bits"),
            GroupError::BadLevel(q) => write!(f, "invalid congruence level {q}"),
        }
    }
}

impl std::error::Error for GroupError {}

/// Which classical family.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum FamilyKind {
    #[serde(rename = "SL")]
    Sl,
    #[serde(rename = "SO")]
    So,
    #[serde(rename = "SU")]
    Su,
}

impl FamilyKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyKind::Sl => "SL",
            FamilyKind::So => "SO",
            FamilyKind::Su => "SU",
        }
    }

    pub fn parse(s: &str) -> Option<FamilyKind> {
        match s.to_ascii_uppercase().as_str() {
            "SL" => Some(FamilyKind::Sl),
            "SO" => Some(FamilyKind::So),
            "SU" => Some(FamilyKind::Su),
            _ => None,
        }
    }
}

/// A family descriptor: kind, rank n (matrix size n+1), and the invariant
/// form Q for SO/SU (identity when omitted).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupFamily {
    pub kind: FamilyKind,
    pub n: usize,
    /// Symmetric (SO) or Hermitian (SU) form over the integers; `None` for SL
    /// and for the identity form.
    pub form: Option<Vec<Vec<i64>>>,
}

impl GroupFamily {
    pub fn sl(n: usize) -> Result<GroupFamily, GroupError> {
        GroupFamily::new(FamilyKind::Sl, n, None)
    }

    pub fn so(n: usize, form: Option<Vec<Vec<i64>>>) -> Result<GroupFamily, GroupError> {
        GroupFamily::new(FamilyKind::So, n, form)
    }

    pub fn su(n: usize, form: Option<Vec<Vec<i64>>>) -> Result<GroupFamily, GroupError> {
        GroupFamily::new(FamilyKind::Su, n, form)
    }

    pub fn new(
        kind: FamilyKind,
        n: usize,
        form: Option<Vec<Vec<i64>>>,
    ) -> Result<GroupFamily, GroupError> {
        let ok = match kind {
            FamilyKind::So => (2..=7).contains(&n),
            FamilyKind::Sl | FamilyKind::Su => (1..=4).contains(&n),
        };
        if !ok {
            return Err(GroupError::RankOutOfRange { n });
        }
        if let Some(q) = &form {
            if kind == FamilyKind::Sl {
                return Err(GroupError::FormInvalid("SL takes no form"));
            }
            let m = n + 1;
            if q.len() != m || q.iter().any(|row| row.len() != m) {
                return Err(GroupError::FormInvalid("wrong dimensions"));
            }
            for i in 0..m {
                for j in 0..m {
                    if q[i][j] != q[j][i] {
                        return Err(GroupError::FormInvalid("not symmetric"));
                    }
                }
            }
        }
        Ok(GroupFamily { kind, n, form })
    }

    /// Matrices are (n+1) × (n+1).
    pub fn matrix_size(&self) -> usize {
        self.n + 1
    }

    /// dim 𝔾 as an algebraic group: n(n+2) for SL/SU, n(n+1)/2 for SO.
    pub fn dim_g(&self) -> usize {
        match self.kind {
            FamilyKind::Sl | FamilyKind::Su => self.n * (self.n + 2),
            FamilyKind::So => self.n * (self.n + 1) / 2,
        }
    }

    /// The representation-dimension exponent e(𝔾): 1 for SO with n < 6,
    /// n − 2 for SO with n ≥ 6, n for SL/SU (SL is the split-prime reduction
    /// of the unitary family).
    pub fn rep_exponent_e(&self) -> usize {
        match self.kind {
            FamilyKind::So => {
                if self.n < 6 {
                    1
                } else {
                    self.n - 2
                }
            }
            FamilyKind::Sl | FamilyKind::Su => self.n,
        }
    }

    /// Integer form matrix (identity by default for SO/SU).
    pub fn form_rows(&self) -> Option<Vec<Vec<i64>>> {
        match self.kind {
            FamilyKind::Sl => None,
            _ => Some(self.form.clone().unwrap_or_else(|| {
                let m = self.matrix_size();
                (0..m)
                    .map(|i| (0..m).map(|j| i64::from(i == j)).collect())
                    .collect()
            })),
        }
    }

    /// JSON descriptor: {"kind": "SO", "n": 4, "Q": [[..]]}.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({ "kind": self.kind.as_str(), "n": self.n });
        if let Some(q) = self.form_rows() {
            v["Q"] = serde_json::json!(q);
        }
        v
    }

    pub fn from_json(v: &serde_json::Value) -> Result<GroupFamily, GroupError> {
        let kind = v
            .get("kind")
            .and_then(|k| k.as_str())
            .and_then(FamilyKind::parse)
            .ok_or(GroupError::FormInvalid("missing kind"))?;
        let n = v
            .get("n")
            .and_then(|n| n.as_u64())
            .ok_or(GroupError::FormInvalid("missing n"))? as usize;
        let form = match v.get("Q") {
            None => None,
            Some(q) => {
                let rows: Option<Vec<Vec<i64>>> = q.as_array().map(|rows| {
                    rows.iter()
                        .map(|r| {
                            r.as_array()
                                .map(|xs| xs.iter().filter_map(|x| x.as_i64()).collect())
                                .unwrap_or_default()
                        })
                        .collect()
                });
                rows
            }
        };
        GroupFamily::new(kind, n, form)
    }
}

fn int_det(rows: &[Vec<i64>]) -> i128 {
    let m = rows.len();
    if m == 0 {
        return 1;
    }
    let mut memo = vec![0i128; 1 << m];
    memo[0] = 1;
    for mask in 1usize..(1 << m) {
        let col = (mask.count_ones() - 1) as usize;
        let mut acc: i128 = 0;
        let mut sign: i128 = if col % 2 == 1 { -1 } else { 1 };
        for i in 0..m {
            if mask & (1 << i) == 0 {
                continue;
            }
            acc += sign * rows[i][col] as i128 * memo[mask & !(1 << i)];
            sign = -sign;
        }
        memo[mask] = acc;
    }
    memo[(1 << m) - 1]
}

/// The conservative bad-prime superset for a family: 2 always, 3 for SO with
/// n+1 ≥ 7, any p dividing n+1 for SL/SU, and any p dividing 2·det(Q).
pub fn is_good_prime(family: &GroupFamily, p: u64) -> bool {
    if p == 2 {
        return false;
    }
    match family.kind {
        FamilyKind::So => {
            if p == 3 && family.matrix_size() >= 7 {
                return false;
            }
        }
        FamilyKind::Sl | FamilyKind::Su => {
            if family.matrix_size() as u64 % p == 0 {
                return false;
            }
        }
    }
    if let Some(q) = family.form_rows() {
        let d = int_det(&q).unsigned_abs();
        if d == 0 || (2 * d) % p as u128 == 0 {
            return false;
        }
    }
    true
}

/// A family bound to a residue ring, with the form reduced into the ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupContext {
    pub family: GroupFamily,
    pub ring: Ring,
    form: Option<Mat>,
    /// Whether the residue characteristic is outside the bad-prime set.
    pub good_prime: bool,
}

impl GroupContext {
    /// Binds the family to a ring; errors on bad primes (mirroring the
    /// paper-level exclusion ideal).
    pub fn new(family: GroupFamily, ring: Ring) -> Result<GroupContext, GroupError> {
        let ctx = GroupContext::new_allowing_bad_primes(family, ring)?;
        if !ctx.good_prime {
            return Err(GroupError::BadPrime { p: ring.char_p() });
        }
        Ok(ctx)
    }

    /// Binds the family to a ring without the good-prime gate. Enumeration
    /// and order computation stay exact at bad primes; only the
    /// representation-theoretic bounds require goodness.
    pub fn new_allowing_bad_primes(family: GroupFamily, ring: Ring) -> Result<GroupContext, GroupError> {
        match (family.kind, ring.kind()) {
            (FamilyKind::Su, RingKind::QuadraticField) => {}
            (FamilyKind::Su, _) => return Err(GroupError::WrongRingKind),
            (_, RingKind::QuadraticField) => return Err(GroupError::WrongRingKind),
            _ => {}
        }
        let form = match family.form_rows() {
            None => None,
            Some(rows) => {
                let q = Mat::from_rows(ring, &rows)?;
                if !ring.is_unit(q.det()) {
                    return Err(GroupError::FormInvalid("not invertible mod p"));
                }
                if family.kind == FamilyKind::Su && q.star()? != q {
                    return Err(GroupError::FormInvalid("not Hermitian"));
                }
                Some(q)
            }
        };
        let good_prime = is_good_prime(&family, ring.char_p());
        Ok(GroupContext {
            family,
            ring,
            form,
            good_prime,
        })
    }

    pub fn matrix_size(&self) -> usize {
        self.family.matrix_size()
    }

    pub fn dim_g(&self) -> usize {
        self.family.dim_g()
    }

    pub fn form_matrix(&self) -> Option<&Mat> {
        self.form.as_ref()
    }

    /// True iff all defining equations hold exactly in the ring.
    pub fn contains(&self, m: &Mat) -> Result<bool, GroupError> {
        if m.ring() != self.ring || m.dim() != self.matrix_size() {
            return Err(GroupError::Ring(RingError::RingMismatch));
        }
        if m.det() != self.ring.one() {
            return Ok(false);
        }
        match (self.family.kind, &self.form) {
            (FamilyKind::Sl, _) => Ok(true),
            (FamilyKind::So, Some(q)) => Ok(&m.transpose().mul(q)?.mul(m)? == q),
            (FamilyKind::Su, Some(q)) => Ok(&m.star()?.mul(q)?.mul(m)? == q),
            _ => unreachable!("form present for SO/SU"),
        }
    }

    /// True iff the linearized equations hold: Tr X = 0 for SL,
    /// XᵀQ + QX = 0 for SO, X*Q + QX = 0 and Tr X = 0 for SU.
    pub fn is_algebra_element(&self, x: &Mat) -> Result<bool, GroupError> {
        if x.ring() != self.ring || x.dim() != self.matrix_size() {
            return Err(GroupError::Ring(RingError::RingMismatch));
        }
        let zero = Mat::zeros(self.ring, self.matrix_size());
        match (self.family.kind, &self.form) {
            (FamilyKind::Sl, _) => Ok(x.trace() == self.ring.zero()),
            (FamilyKind::So, Some(q)) => {
                Ok(x.transpose().mul(q)?.add(&q.mul(x)?)? == zero)
            }
            (FamilyKind::Su, Some(q)) => Ok(x.star()?.mul(q)?.add(&q.mul(x)?)? == zero
                && x.trace() == self.ring.zero()),
            _ => unreachable!(),
        }
    }
}

/// A validated group element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupElement {
    pub ctx: GroupContext,
    pub mat: Mat,
}

impl GroupElement {
    pub fn new(ctx: &GroupContext, mat: Mat) -> Result<GroupElement, GroupError> {
        if !ctx.contains(&mat)? {
            return Err(GroupError::NotInGroup);
        }
        Ok(GroupElement {
            ctx: ctx.clone(),
            mat,
        })
    }
}

/// Enumeration options: candidate budget and deterministic work split.
#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    pub budget: u64,
    pub shard: usize,
    pub shard_count: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            budget: default_budget(),
            shard: 0,
            shard_count: 1,
        }
    }
}

/// Default candidate budget (overridable via the CGK_BUDGET environment
/// variable at the CLI layer).
pub fn default_budget() -> u64 {
    100_000_000
}

fn vector_from_index(elems: &[Elt], m: usize, mut idx: u64) -> Vec<Elt> {
    let card = elems.len() as u64;
    let mut v = Vec::with_capacity(m);
    for _ in 0..m {
        v.push(elems[(idx % card) as usize]);
        idx /= card;
    }
    v
}

struct Enumerator<'a> {
    ctx: &'a GroupContext,
    elems: Vec<Elt>,
    budget: u64,
    visited: u64,
}

impl<'a> Enumerator<'a> {
    fn form_pair(&self, x: &[Elt], y: &[Elt]) -> Elt {
        // xᵀQy for SO, x*Qy for SU
        let ring = self.ctx.ring;
        let q = self.ctx.form.as_ref().expect("form");
        let m = x.len();
        let mut acc = ring.zero();
        for k in 0..m {
            let xk = match self.ctx.family.kind {
                FamilyKind::Su => ring.frobenius(x[k]).expect("quadratic ring"),
                _ => x[k],
            };
            if xk == ring.zero() {
                continue;
            }
            let mut qy = ring.zero();
            for l in 0..m {
                qy = ring.add(qy, ring.mul(q.get(k, l), y[l]));
            }
            acc = ring.add(acc, ring.mul(xk, qy));
        }
        acc
    }

    fn spend(&mut self) -> Result<(), GroupError> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(GroupError::BudgetExceeded {
                visited: self.visited,
                budget: self.budget,
            });
        }
        Ok(())
    }

    fn mat_from_columns(&self, cols: &[Vec<Elt>]) -> Mat {
        let m = self.ctx.matrix_size();
        let ring = self.ctx.ring;
        let mut out = Mat::zeros(ring, m);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..m {
                out.set(i, j, col[i]);
            }
        }
        out
    }

    fn run_form_family(
        &mut self,
        cols: &mut Vec<Vec<Elt>>,
        first_range: (u64, u64),
        f: &mut dyn FnMut(&Mat),
    ) -> Result<u64, GroupError> {
        let m = self.ctx.matrix_size();
        let ring = self.ctx.ring;
        let q = self.ctx.form.as_ref().expect("form").clone();
        let j = cols.len();
        if j == m {
            let mat = self.mat_from_columns(cols);
            if mat.det() == ring.one() {
                f(&mat);
                return Ok(1);
            }
            return Ok(0);
        }
        let card = self.elems.len() as u64;
        let total = card.pow(m as u32);
        let (lo, hi) = if j == 0 { first_range } else { (0, total) };
        let mut count = 0u64;
        for idx in lo..hi {
            self.spend()?;
            let v = vector_from_index(&self.elems, m, idx);
            if self.form_pair(&v, &v) != q.get(j, j) {
                continue;
            }
            let mut ok = true;
            for (i, prev) in cols.iter().enumerate() {
                if self.form_pair(prev, &v) != q.get(i, j) {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            cols.push(v);
            count += self.run_form_family(cols, first_range, f)?;
            cols.pop();
        }
        Ok(count)
    }

    fn run_sl(
        &mut self,
        cols: &mut Vec<Vec<Elt>>,
        first_range: (u64, u64),
        f: &mut dyn FnMut(&Mat),
    ) -> Result<u64, GroupError> {
        let m = self.ctx.matrix_size();
        let ring = self.ctx.ring;
        let j = cols.len();
        if j == m - 1 {
            // solve the last column from det = Σᵢ cᵢ·xᵢ = 1, cᵢ the
            // signed minors of the first m−1 columns
            let mut cof = Vec::with_capacity(m);
            for i in 0..m {
                let mut sub = Mat::zeros(ring, m - 1);
                let mut si = 0;
                for row in 0..m {
                    if row == i {
                        continue;
                    }
                    for (cj, col) in cols.iter().enumerate() {
                        sub.set(si, cj, col[row]);
                    }
                    si += 1;
                }
                let minor = sub.det();
                let sign_odd = (i + m - 1) % 2 == 1;
                cof.push(if sign_odd { ring.neg(minor) } else { minor });
            }
            let Some(pivot) = cof.iter().position(|&c| ring.is_unit(c)) else {
                return Ok(0);
            };
            let pinv = ring.inv(cof[pivot]).expect("unit");
            let card = self.elems.len() as u64;
            let free_total = card.pow((m - 1) as u32);
            let mut count = 0u64;
            for idx in 0..free_total {
                self.spend()?;
                let free = vector_from_index(&self.elems, m - 1, idx);
                let mut x = vec![ring.zero(); m];
                let mut partial = ring.zero();
                let mut fi = 0;
                for i in 0..m {
                    if i == pivot {
                        continue;
                    }
                    x[i] = free[fi];
                    partial = ring.add(partial, ring.mul(cof[i], free[fi]));
                    fi += 1;
                }
                x[pivot] = ring.mul(pinv, ring.sub(ring.one(), partial));
                cols.push(x);
                let mat = self.mat_from_columns(cols);
                debug_assert_eq!(mat.det(), ring.one());
                f(&mat);
                cols.pop();
                count += 1;
            }
            return Ok(count);
        }
        let card = self.elems.len() as u64;
        let total = card.pow(m as u32);
        let (lo, hi) = if j == 0 { first_range } else { (0, total) };
        let mut count = 0u64;
        for idx in lo..hi {
            self.spend()?;
            let v = vector_from_index(&self.elems, m, idx);
            cols.push(v);
            count += self.run_sl(cols, first_range, f)?;
            cols.pop();
        }
        Ok(count)
    }
}

/// Visits each group element exactly once (lexicographic by column indices)
/// and returns the count.
pub fn for_each_element(
    ctx: &GroupContext,
    opts: EnumOptions,
    f: &mut dyn FnMut(&Mat),
) -> Result<u64, GroupError> {
    let m = ctx.matrix_size();
    let ring = ctx.ring;
    let elems: Vec<Elt> = ring.elements().collect();
    let card = elems.len() as u64;
    let total = card.pow(m as u32);
    // contiguous first-column ranges so shard outputs concatenate in order
    let per = total.div_ceil(opts.shard_count.max(1) as u64);
    let lo = (opts.shard as u64 * per).min(total);
    let hi = ((opts.shard as u64 + 1) * per).min(total);
    let mut e = Enumerator {
        ctx,
        elems,
        budget: opts.budget,
        visited: 0,
    };
    let mut cols = Vec::with_capacity(m);
    match ctx.family.kind {
        FamilyKind::Sl => e.run_sl(&mut cols, (lo, hi), f),
        _ => e.run_form_family(&mut cols, (lo, hi), f),
    }
}

/// Collects all group elements (lexicographic order).
pub fn elements(ctx: &GroupContext, opts: EnumOptions) -> Result<Vec<Mat>, GroupError> {
    let mut out = Vec::new();
    for_each_element(ctx, opts, &mut |m| out.push(m.clone()))?;
    Ok(out)
}

/// |𝔾(ring)| by enumeration (any exponent; this is the brute-force oracle).
pub fn order_by_enumeration(ctx: &GroupContext, opts: EnumOptions) -> Result<u128, GroupError> {
    let count = for_each_element(ctx, opts, &mut |_| {})?;
    Ok(count as u128)
}

/// Exact |𝔾(ℤ/p^r)|: enumeration at the field level times the kernel
/// filtration factor p^{(r−1)·dim 𝔤}.
pub fn order(ctx: &GroupContext, budget: u64) -> Result<u128, GroupError> {
    let r = ctx.ring.exponent();
    let opts = EnumOptions {
        budget,
        ..EnumOptions::default()
    };
    if r == 1 {
        return order_by_enumeration(ctx, opts);
    }
    let field = ctx.ring.reduce_ring(1)?;
    let field_ctx = GroupContext::new_allowing_bad_primes(ctx.family.clone(), field)?;
    let base = order_by_enumeration(&field_ctx, opts)?;
    let p = ctx.ring.char_p() as u128;
    let mut factor: u128 = 1;
    for _ in 0..(r - 1) as usize * ctx.dim_g() {
        factor = factor.checked_mul(p).ok_or(GroupError::Overflow)?;
    }
    base.checked_mul(factor).ok_or(GroupError::Overflow)
}

/// A congruence level q = ∏ p_j^{r_j} with its exact factorization.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CongruenceLevel {
    pub q: u64,
    pub factors: Vec<(u64, u32)>,
}

impl CongruenceLevel {
    pub fn new(q: u64) -> Result<CongruenceLevel, GroupError> {
        if q == 0 {
            return Err(GroupError::BadLevel(q));
        }
        let mut factors = Vec::new();
        let mut rest = q;
        let mut p = 2u64;
        while p * p <= rest {
            if rest % p == 0 {
                let mut r = 0u32;
                while rest % p == 0 {
                    rest /= p;
                    r += 1;
                }
                factors.push((p, r));
            }
            p += 1;
        }
        if rest > 1 {
            factors.push((rest, 1));
        }
        Ok(CongruenceLevel { q, factors })
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, r)| r == 1)
    }

    /// True iff every prime divisor is good for the family.
    pub fn all_good(&self, family: &GroupFamily) -> bool {
        self.factors.iter().all(|&(p, _)| is_good_prime(family, p))
    }
}

/// V(q) = |Γ(q)\Γ| = ∏ |𝔾(ℤ/p_j^{r_j})| over the factorization of q.
///
/// Bad primes are allowed here (the order is still exact); callers that need
/// the representation-theoretic hypotheses check [`CongruenceLevel::all_good`].
/// SU supports square-free levels only: its residue rings at r ≥ 2 would be
/// Galois rings, which are outside the coefficient-ring system.
pub fn index_v(family: &GroupFamily, level: &CongruenceLevel, budget: u64) -> Result<u128, GroupError> {
    let mut v: u128 = 1;
    for &(p, r) in &level.factors {
        let ring = match family.kind {
            FamilyKind::Su => {
                if r > 1 {
                    return Err(GroupError::WrongRingKind);
                }
                Ring::quadratic_field(p)?
            }
            _ => Ring::integers_mod(p, r)?,
        };
        let ctx = GroupContext::new_allowing_bad_primes(family.clone(), ring)?;
        v = v.checked_mul(order(&ctx, budget)?).ok_or(GroupError::Overflow)?;
    }
    Ok(v)
}

/// Entrywise reduction 𝔾(ℤ/p^r) → 𝔾(ℤ/p^l), l ≤ r.
pub fn reduce(g: &GroupElement, l: u32) -> Result<GroupElement, GroupError> {
    let small = g.ctx.ring.reduce_ring(l)?;
    let ctx = GroupContext::new_allowing_bad_primes(g.ctx.family.clone(), small)?;
    let mat = g.mat.reduce_to(small)?;
    GroupElement::new(&ctx, mat)
}

/// For g ≡ I mod p^l with r ≤ 2l: the Lie-algebra logarithm
/// X = (g − I)/p^l over ℤ/p^{r−l}, satisfying the linearized equations.
pub fn kernel_log(g: &GroupElement, l: u32) -> Result<Mat, GroupError> {
    let ring = g.ctx.ring;
    let r = ring.exponent();
    if l == 0 || l > r || r > 2 * l {
        return Err(GroupError::BadKernelLevel { r, l });
    }
    let m = g.ctx.matrix_size();
    let pl = ring.char_p().pow(l);
    let small = Ring::integers_mod(ring.char_p(), r - l)?;
    let mut x = Mat::zeros(small, m);
    for i in 0..m {
        for j in 0..m {
            let mut e = g.mat.get(i, j).a;
            if i == j {
                // subtract 1 from the diagonal in ℤ/p^r
                e = (e + ring.modulus() - 1) % ring.modulus();
            }
            if e % pl != 0 {
                return Err(GroupError::NotInKernel);
            }
            x.set(i, j, small.embed((e / pl) as i64));
        }
    }
    let small_ctx = GroupContext::new_allowing_bad_primes(g.ctx.family.clone(), small)?;
    if !small_ctx.is_algebra_element(&x)? {
        return Err(GroupError::NotInAlgebra);
    }
    Ok(x)
}

/// Inverse of [`kernel_log`]: g = I + p^l·X lifted into 𝔾(ℤ/p^r).
pub fn kernel_exp(ctx: &GroupContext, x: &Mat, l: u32) -> Result<GroupElement, GroupError> {
    let ring = ctx.ring;
    let r = ring.exponent();
    if l == 0 || l > r || r > 2 * l {
        return Err(GroupError::BadKernelLevel { r, l });
    }
    if x.ring().exponent() != r - l || x.ring().char_p() != ring.char_p() {
        return Err(GroupError::Ring(RingError::RingMismatch));
    }
    let m = ctx.matrix_size();
    let pl = ring.char_p().pow(l);
    let mut g = Mat::identity(ring, m);
    for i in 0..m {
        for j in 0..m {
            let add = ring.embed((x.get(i, j).a * pl) as i64);
            let cur = g.get(i, j);
            g.set(i, j, ring.add(cur, add));
        }
    }
    GroupElement::new(ctx, g)
}

/// Witt index of the form mod p (field level): for odd size the index is
/// always (m−1)/2; for even size m = 2k the isotropic-vector count decides
/// between SO⁺ (index k) and SO⁻ (index k−1).
pub fn witt_index_mod_p(family: &GroupFamily, p: u64, budget: u64) -> Result<usize, GroupError> {
    if family.kind != FamilyKind::So {
        return Err(GroupError::WrongRingKind);
    }
    let m = family.matrix_size();
    if m % 2 == 1 {
        return Ok((m - 1) / 2);
    }
    let field = Ring::prime_field(p)?;
    let ctx = GroupContext::new_allowing_bad_primes(family.clone(), field)?;
    let q = ctx.form.as_ref().expect("form").clone();
    let total = (p as u64).pow(m as u32);
    if total > budget {
        return Err(GroupError::BudgetExceeded {
            visited: total,
            budget,
        });
    }
    let elems: Vec<Elt> = field.elements().collect();
    let mut zeros: u64 = 0;
    for idx in 0..total {
        let v = vector_from_index(&elems, m, idx);
        let mut acc = field.zero();
        for i in 0..m {
            if v[i] == field.zero() {
                continue;
            }
            for j in 0..m {
                acc = field.add(acc, field.mul(field.mul(v[i], q.get(i, j)), v[j]));
            }
        }
        if acc == field.zero() {
            zeros += 1;
        }
    }
    let k = m / 2;
    // #zeros (including 0) = q^{2k−1} + ε(q^k − q^{k−1})
    let base = (p as u128).pow((2 * k - 1) as u32);
    let delta = (p as u128).pow(k as u32) - (p as u128).pow((k - 1) as u32);
    if zeros as u128 == base + delta {
        Ok(k)
    } else if zeros as u128 + delta == base {
        Ok(k - 1)
    } else {
        Err(GroupError::FormInvalid("degenerate form (unexpected zero count)"))
    }
}

/// Independent oracle: counts |SL₂(ℤ/q)| for arbitrary (possibly composite)
/// modulus by the naive O(q⁴) scan. Test-side check for the CRT/filtration
/// prediction.
pub fn count_sl2_zq_naive(q: u64) -> u64 {
    let mut count = 0u64;
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if (a * d + q * q - (b * c) % (q * q)) % q == 1 % q {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}
