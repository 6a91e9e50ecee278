//! Exact arithmetic over ℤ/p^r, prime fields 𝔽_p, quadratic extensions
//! 𝔽_{p²}, and square matrices over these rings.
//!
//! Every element is kept in canonical form (representatives in `[0, p^r)`,
//! extension elements as pairs of such) after every operation, so equality
//! is plain `==` and hashing is well-defined.

use std::fmt;

pub mod linalg;
pub mod poly;

pub use linalg::{kernel_basis, row_reduce, solve_kernel, KernelInfo, RowReduced};
pub use poly::Poly;

/// Errors raised by ring and matrix operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingError {
    /// Modulus base failed the trial-division primality check.
    NotPrime(u64),
    /// Exponent r must be at least 1.
    ZeroExponent,
    /// Operands belong to different rings.
    RingMismatch,
    /// Matrix dimensions are incompatible.
    DimMismatch { left: usize, right: usize },
    /// Operation requires a field (r = 1 or quadratic extension).
    NotAField,
    /// Operation requires the quadratic extension ring.
    NotQuadratic,
    /// Matrix determinant is not a unit.
    NotInvertible,
    /// Modulus would overflow the 64-bit representation.
    ModulusOverflow,
}

impl fmt::Display for RingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingError::NotPrime(p) => write!(f, "{p} is not prime"),
            RingError::ZeroExponent => write!(f, "modulus exponent must be positive"),
            RingError::RingMismatch => write!(f, "operands live in different rings"),
            RingError::DimMismatch { left, right } => {
                write!(f, "matrix dimension mismatch: {left} vs {right}")
            }
            RingError::NotAField => write!(f, "operation requires a field"),
            RingError::NotQuadratic => write!(f, "operation requires the quadratic extension"),
            RingError::NotInvertible => write!(f, "matrix is not invertible (det ≡ 0 mod p)"),
            RingError::ModulusOverflow => write!(f, "modulus p^r does not fit in 64 bits"),
        }
    }
}

impl std::error::Error for RingError {}

/// Which of the three supported coefficient rings this is.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RingKind {
    /// ℤ/p^r with r ≥ 2.
    LocalRing,
    /// 𝔽_p.
    PrimeField,
    /// 𝔽_{p²} = 𝔽_p(t) with t² + f₁t + f₀ = 0.
    QuadraticField,
}

/// A residue ring descriptor: ℤ/p^r, 𝔽_p, or 𝔽_{p²}.
///
/// `Ring` is `Copy`; elements carry no back-pointer and all operations are
/// methods on the ring. The quadratic extension stores its defining monic
/// polynomial t² + f₁t + f₀ (the lexicographically least irreducible one,
/// unless constructed explicitly).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Ring {
    p: u64,
    r: u32,
    modulus: u64,
    /// (f₁, f₀) of the defining quadratic, present only for 𝔽_{p²}.
    ext: Option<(u64, u64)>,
}

/// An element of a [`Ring`], always reduced.
///
/// For ℤ/p^r and 𝔽_p only `a` is used (`b = 0`); for 𝔽_{p²} the element is
/// `a + b·t`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Elt {
    pub a: u64,
    pub b: u64,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    /// ℤ/p^r (normalizes to the prime field when r = 1).
    pub fn integers_mod(p: u64, r: u32) -> Result<Ring, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        if r == 0 {
            return Err(RingError::ZeroExponent);
        }
        let mut modulus: u64 = 1;
        for _ in 0..r {
            modulus = modulus.checked_mul(p).ok_or(RingError::ModulusOverflow)?;
        }
        Ok(Ring {
            p,
            r,
            modulus,
            ext: None,
        })
    }

    /// 𝔽_p.
    pub fn prime_field(p: u64) -> Result<Ring, RingError> {
        Ring::integers_mod(p, 1)
    }

    /// 𝔽_{p²} with the lexicographically least monic irreducible quadratic
    /// t² + f₁t + f₀ (ordered by (f₁, f₀)), found by root exhaustion.
    pub fn quadratic_field(p: u64) -> Result<Ring, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        for f1 in 0..p {
            for f0 in 0..p {
                if quadratic_is_irreducible(p, f1, f0) {
                    return Ok(Ring {
                        p,
                        r: 1,
                        modulus: p,
                        ext: Some((f1, f0)),
                    });
                }
            }
        }
        unreachable!("every prime field admits an irreducible quadratic")
    }

    pub fn kind(&self) -> RingKind {
        if self.ext.is_some() {
            RingKind::QuadraticField
        } else if self.r == 1 {
            RingKind::PrimeField
        } else {
            RingKind::LocalRing
        }
    }

    pub fn char_p(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.r
    }

    /// p^r, the modulus of the scalar coordinates.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of elements: p^r, p, or p².
    pub fn card(&self) -> u64 {
        if self.ext.is_some() {
            self.p * self.p
        } else {
            self.modulus
        }
    }

    /// Coefficients (f₁, f₀) of the defining quadratic, if any.
    pub fn extension_poly(&self) -> Option<(u64, u64)> {
        self.ext
    }

    pub fn is_field(&self) -> bool {
        self.r == 1
    }

    pub fn zero(&self) -> Elt {
        Elt { a: 0, b: 0 }
    }

    pub fn one(&self) -> Elt {
        Elt { a: 1 % self.modulus, b: 0 }
    }

    /// Canonical element from an integer (negative values allowed).
    pub fn embed(&self, x: i64) -> Elt {
        let m = self.modulus as i64;
        Elt {
            a: x.rem_euclid(m) as u64,
            b: 0,
        }
    }

    /// Canonical element a + b·t of 𝔽_{p²}; in the scalar rings b must be 0
    /// after reduction (callers use [`Ring::embed`] there).
    pub fn embed_pair(&self, a: i64, b: i64) -> Elt {
        let m = self.modulus as i64;
        Elt {
            a: a.rem_euclid(m) as u64,
            b: b.rem_euclid(m) as u64,
        }
    }

    pub fn add(&self, x: Elt, y: Elt) -> Elt {
        let m = self.modulus;
        let mut a = x.a + y.a;
        if a >= m {
            a -= m;
        }
        let mut b = x.b + y.b;
        if b >= m {
            b -= m;
        }
        Elt { a, b }
    }

    pub fn neg(&self, x: Elt) -> Elt {
        let m = self.modulus;
        Elt {
            a: if x.a == 0 { 0 } else { m - x.a },
            b: if x.b == 0 { 0 } else { m - x.b },
        }
    }

    pub fn sub(&self, x: Elt, y: Elt) -> Elt {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Elt, y: Elt) -> Elt {
        let m = self.modulus as u128;
        match self.ext {
            None => Elt {
                a: ((x.a as u128 * y.a as u128) % m) as u64,
                b: 0,
            },
            Some((f1, f0)) => {
                // (a + bt)(c + dt) with t² = −f₁t − f₀
                let (a, b, c, d) = (x.a as u128, x.b as u128, y.a as u128, y.b as u128);
                let ac = a * c % m;
                let bd = b * d % m;
                let ad_bc = (a * d + b * c) % m;
                let f1 = f1 as u128;
                let f0 = f0 as u128;
                let re = (ac + (m - f0) * bd) % m;
                let im = (ad_bc + (m - f1) * bd) % m;
                Elt {
                    a: re as u64,
                    b: im as u64,
                }
            }
        }
    }

    pub fn is_unit(&self, x: Elt) -> bool {
        match self.kind() {
            RingKind::LocalRing => x.a % self.p != 0,
            RingKind::PrimeField => x.a != 0,
            RingKind::QuadraticField => x.a != 0 || x.b != 0,
        }
    }

    /// Multiplicative inverse of a unit.
    pub fn inv(&self, x: Elt) -> Option<Elt> {
        if !self.is_unit(x) {
            return None;
        }
        match self.ext {
            None => mod_inverse(x.a, self.modulus).map(|a| Elt { a, b: 0 }),
            Some(_) => {
                // x⁻¹ = conj(x) / N(x) with N(x) = x·conj(x) ∈ 𝔽_p
                let conj = self.frobenius(x).expect("quadratic ring");
                let norm = self.mul(x, conj);
                debug_assert_eq!(norm.b, 0);
                let ninv = mod_inverse(norm.a, self.p)?;
                Some(self.mul(conj, Elt { a: ninv, b: 0 }))
            }
        }
    }

    pub fn pow(&self, x: Elt, mut e: u64) -> Elt {
        let mut base = x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The field automorphism x ↦ x^p of 𝔽_{p²}, fixing exactly 𝔽_p.
    ///
    /// Computed in closed form: the conjugate root of t² + f₁t + f₀ is
    /// −f₁ − t, so (a + bt)^p = (a − b·f₁) − b·t.
    pub fn frobenius(&self, x: Elt) -> Result<Elt, RingError> {
        let (f1, _) = self.ext.ok_or(RingError::NotQuadratic)?;
        let p = self.p;
        let a = (x.a + (p - x.b % p) * f1 % p) % p;
        let b = if x.b == 0 { 0 } else { p - x.b };
        Ok(Elt { a, b })
    }

    /// Iterator over all elements, in a fixed canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        let m = self.modulus;
        let ext = self.ext.is_some();
        (0..if ext { m * m } else { m }).map(move |i| {
            if ext {
                Elt { a: i % m, b: i / m }
            } else {
                Elt { a: i, b: 0 }
            }
        })
    }

    /// Reduction ℤ/p^r → ℤ/p^l for l ≤ r (identity on fields when l = r).
    pub fn reduce_ring(&self, l: u32) -> Result<Ring, RingError> {
        if self.ext.is_some() || l == 0 || l > self.r {
            return Err(RingError::ZeroExponent);
        }
        Ring::integers_mod(self.p, l)
    }

    pub fn reduce_elt(&self, small: &Ring, x: Elt) -> Elt {
        Elt {
            a: x.a % small.modulus,
            b: 0,
        }
    }
}

fn quadratic_is_irreducible(p: u64, f1: u64, f0: u64) -> bool {
    // root exhaustion: t² + f₁t + f₀ has no root in 𝔽_p
    for t in 0..p {
        let v = (t as u128 * t as u128 + f1 as u128 * t as u128 + f0 as u128) % p as u128;
        if v == 0 {
            return false;
        }
    }
    true
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

impl fmt::Display for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}t", self.a, self.b)
        }
    }
}

/// A square matrix over a [`Ring`], row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat {
    ring: Ring,
    dim: usize,
    entries: Vec<Elt>,
}

impl Mat {
    pub fn new(ring: Ring, dim: usize, entries: Vec<Elt>) -> Result<Mat, RingError> {
        if entries.len() != dim * dim {
            return Err(RingError::DimMismatch {
                left: dim * dim,
                right: entries.len(),
            });
        }
        Ok(Mat { ring, dim, entries })
    }

    pub fn zeros(ring: Ring, dim: usize) -> Mat {
        Mat {
            ring,
            dim,
            entries: vec![ring.zero(); dim * dim],
        }
    }

    pub fn identity(ring: Ring, dim: usize) -> Mat {
        let mut m = Mat::zeros(ring, dim);
        for i in 0..dim {
            m.set(i, i, ring.one());
        }
        m
    }

    /// Convenience constructor from integer rows.
    pub fn from_rows(ring: Ring, rows: &[Vec<i64>]) -> Result<Mat, RingError> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(RingError::DimMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            for &x in row {
                entries.push(ring.embed(x));
            }
        }
        Mat::new(ring, dim, entries)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Elt {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elt) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[Elt] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.a == 0 && e.b == 0)
    }

    fn check_compat(&self, other: &Mat) -> Result<(), RingError> {
        if self.ring != other.ring {
            return Err(RingError::RingMismatch);
        }
        if self.dim != other.dim {
            return Err(RingError::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Mat) -> Result<Mat, RingError> {
        self.check_compat(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&x, &y)| self.ring.add(x, y))
            .collect();
        Mat::new(self.ring, self.dim, entries)
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat, RingError> {
        self.check_compat(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&x, &y)| self.ring.sub(x, y))
            .collect();
        Mat::new(self.ring, self.dim, entries)
    }

    pub fn neg(&self) -> Mat {
        let entries = self.entries.iter().map(|&x| self.ring.neg(x)).collect();
        Mat {
            ring: self.ring,
            dim: self.dim,
            entries,
        }
    }

    pub fn scalar_mul(&self, c: Elt) -> Mat {
        let entries = self.entries.iter().map(|&x| self.ring.mul(c, x)).collect();
        Mat {
            ring: self.ring,
            dim: self.dim,
            entries,
        }
    }

    /// Exact matrix product.
    pub fn mul(&self, other: &Mat) -> Result<Mat, RingError> {
        self.check_compat(other)?;
        let n = self.dim;
        let ring = self.ring;
        let mut out = Mat::zeros(ring, n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik.a == 0 && aik.b == 0 {
                    continue;
                }
                for j in 0..n {
                    let cur = out.get(i, j);
                    out.set(i, j, ring.add(cur, ring.mul(aik, other.get(k, j))));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> Mat {
        let mut base = self.clone();
        let mut acc = Mat::identity(self.ring, self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            base = base.mul(&base).expect("same ring");
            e >>= 1;
        }
        acc
    }

    pub fn transpose(&self) -> Mat {
        let n = self.dim;
        let mut out = Mat::zeros(self.ring, n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Conjugate transpose over 𝔽_{p²} (entrywise Frobenius + transpose).
    pub fn star(&self) -> Result<Mat, RingError> {
        let n = self.dim;
        let mut out = Mat::zeros(self.ring, n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.ring.frobenius(self.get(i, j))?);
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Elt {
        let mut t = self.ring.zero();
        for i in 0..self.dim {
            t = self.ring.add(t, self.get(i, i));
        }
        t
    }

    /// Determinant by division-free Laplace expansion with subset memoization
    /// (exact over any of the supported rings, O(2^m · m)).
    pub fn det(&self) -> Elt {
        let n = self.dim;
        let ring = self.ring;
        if n == 0 {
            return ring.one();
        }
        // memo[mask] = determinant of the submatrix formed by the rows in
        // `mask` and the first popcount(mask) columns
        let mut memo = vec![ring.zero(); 1usize << n];
        memo[0] = ring.one();
        for mask in 1usize..(1 << n) {
            let col = (mask.count_ones() - 1) as usize;
            let mut acc = ring.zero();
            // expansion along column `col`: entry sign is (−1)^(row_pos + col)
            let mut sign_flip = col % 2 == 1;
            for i in 0..n {
                if mask & (1 << i) == 0 {
                    continue;
                }
                let sub = memo[mask & !(1 << i)];
                let term = ring.mul(self.get(i, col), sub);
                acc = if sign_flip {
                    ring.sub(acc, term)
                } else {
                    ring.add(acc, term)
                };
                sign_flip = !sign_flip;
            }
            memo[mask] = acc;
        }
        memo[(1 << n) - 1]
    }

    /// Inverse via adjugate·det⁻¹. Errors with [`RingError::NotInvertible`]
    /// when det is not a unit (det ≡ 0 mod p).
    pub fn inverse(&self) -> Result<Mat, RingError> {
        let d = self.det();
        let ring = self.ring;
        let dinv = ring.inv(d).ok_or(RingError::NotInvertible)?;
        let n = self.dim;
        if n == 0 {
            return Ok(self.clone());
        }
        let mut out = Mat::zeros(ring, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(j, i);
                let c = if (i + j) % 2 == 0 {
                    minor
                } else {
                    ring.neg(minor)
                };
                out.set(i, j, ring.mul(dinv, c));
            }
        }
        Ok(out)
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Elt {
        let n = self.dim;
        if n == 1 {
            return self.ring.one();
        }
        let mut sub = Mat::zeros(self.ring, n - 1);
        let mut si = 0;
        for i in 0..n {
            if i == skip_row {
                continue;
            }
            let mut sj = 0;
            for j in 0..n {
                if j == skip_col {
                    continue;
                }
                sub.set(si, sj, self.get(i, j));
                sj += 1;
            }
            si += 1;
        }
        sub.det()
    }

    /// Entrywise reduction into ℤ/p^l, l ≤ r.
    pub fn reduce_to(&self, small: Ring) -> Result<Mat, RingError> {
        if self.ring.ext.is_some() || small.ext.is_some() {
            return Err(RingError::NotQuadratic);
        }
        if small.p != self.ring.p || small.r > self.ring.r {
            return Err(RingError::RingMismatch);
        }
        let entries = self
            .entries
            .iter()
            .map(|&x| self.ring.reduce_elt(&small, x))
            .collect();
        Mat::new(small, self.dim, entries)
    }

    /// Lift into ℤ/p^R, R ≥ r, using the canonical representative.
    pub fn lift_to(&self, big: Ring) -> Result<Mat, RingError> {
        if self.ring.ext.is_some() || big.ext.is_some() {
            return Err(RingError::NotQuadratic);
        }
        if big.p != self.ring.p || big.r < self.ring.r {
            return Err(RingError::RingMismatch);
        }
        let entries = self.entries.iter().map(|&x| Elt { a: x.a, b: 0 }).collect();
        Mat::new(big, self.dim, entries)
    }

    /// Serializes as nested integer arrays (pairs for 𝔽_{p²}).
    pub fn to_json(&self) -> serde_json::Value {
        let quad = self.ring.ext.is_some();
        let rows: Vec<serde_json::Value> = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        let e = self.get(i, j);
                        if quad {
                            serde_json::json!([e.a, e.b])
                        } else {
                            serde_json::json!(e.a)
                        }
                    })
                    .collect()
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            write!(f, "[")?;
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
