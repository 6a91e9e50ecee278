//! Univariate polynomials over the residue rings.
//!
//! Characteristic polynomials use the division-free Berkowitz algorithm and
//! are exact over any of the supported rings. Factor-shape analysis
//! (squarefree decomposition, distinct-degree splitting) is restricted to
//! the field rings and never needs explicit roots: eigenvalue multiplicity
//! data is read off from degrees and multiplicities alone.

use super::{Elt, Mat, Ring, RingError};

/// Little-endian coefficient list, normalized so the last entry is nonzero
/// (the zero polynomial has an empty list).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    pub ring: Ring,
    pub coeffs: Vec<Elt>,
}

impl Poly {
    pub fn new(ring: Ring, mut coeffs: Vec<Elt>) -> Poly {
        while coeffs.last().map(|c| *c == ring.zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { ring, coeffs }
    }

    pub fn zero(ring: Ring) -> Poly {
        Poly { ring, coeffs: vec![] }
    }

    pub fn one(ring: Ring) -> Poly {
        Poly::new(ring, vec![ring.one()])
    }

    pub fn x(ring: Ring) -> Poly {
        Poly::new(ring, vec![ring.zero(), ring.one()])
    }

    pub fn constant(ring: Ring, c: Elt) -> Poly {
        Poly::new(ring, vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Elt {
        *self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn coeff(&self, i: usize) -> Elt {
        self.coeffs.get(i).copied().unwrap_or(self.ring.zero())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let ring = self.ring;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| ring.add(self.coeff(i), other.coeff(i)))
            .collect();
        Poly::new(ring, coeffs)
    }

    pub fn neg(&self) -> Poly {
        let ring = self.ring;
        Poly::new(ring, self.coeffs.iter().map(|&c| ring.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let ring = self.ring;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(ring);
        }
        let mut coeffs = vec![ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == ring.zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = ring.add(coeffs[i + j], ring.mul(a, b));
            }
        }
        Poly::new(ring, coeffs)
    }

    pub fn scale(&self, c: Elt) -> Poly {
        let ring = self.ring;
        Poly::new(ring, self.coeffs.iter().map(|&a| ring.mul(c, a)).collect())
    }

    /// Division with remainder; the divisor's leading coefficient must be a
    /// unit (always true over fields).
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly), RingError> {
        let ring = self.ring;
        if divisor.is_zero() {
            return Err(RingError::NotInvertible);
        }
        let dlead = divisor.leading();
        let dinv = ring.inv(dlead).ok_or(RingError::NotInvertible)?;
        let dd = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return Ok((Poly::zero(ring), self.clone()));
        }
        let qlen = rem.len() - dd;
        let mut quot = vec![ring.zero(); qlen];
        for k in (0..qlen).rev() {
            let c = ring.mul(rem[k + dd], dinv);
            quot[k] = c;
            if c == ring.zero() {
                continue;
            }
            for (i, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = ring.sub(rem[k + i], ring.mul(c, dc));
            }
        }
        Ok((Poly::new(ring, quot), Poly::new(ring, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly, RingError> {
        Ok(self.divmod(divisor)?.1)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.ring.inv(self.leading()).expect("field leading coeff");
        self.scale(inv)
    }

    /// Monic gcd over a field.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, RingError> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            Ok(a.monic())
        }
    }

    pub fn derivative(&self) -> Poly {
        let ring = self.ring;
        if self.coeffs.len() <= 1 {
            return Poly::zero(ring);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let k = ring.embed((i + 1) as i64);
                ring.mul(k, c)
            })
            .collect();
        Poly::new(ring, coeffs)
    }

    pub fn eval(&self, x: Elt) -> Elt {
        let ring = self.ring;
        let mut acc = ring.zero();
        for &c in self.coeffs.iter().rev() {
            acc = ring.add(ring.mul(acc, x), c);
        }
        acc
    }

    /// Evaluates the polynomial at a square matrix over the same ring.
    pub fn eval_mat(&self, m: &Mat) -> Mat {
        let ring = self.ring;
        let n = m.dim();
        let mut acc = Mat::zeros(ring, n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(m).expect("same ring");
            for i in 0..n {
                acc.set(i, i, ring.add(acc.get(i, i), c));
            }
        }
        acc
    }

    /// self^e mod m by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, modulus: &Poly) -> Result<Poly, RingError> {
        let mut base = self.rem(modulus)?;
        let mut acc = Poly::one(self.ring).rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus)?;
            }
            base = base.mul(&base).rem(modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Inverse of self in `ring[x]/(m)` when gcd(self, m) = 1.
    pub fn inv_mod(&self, modulus: &Poly) -> Result<Option<Poly>, RingError> {
        let ring = self.ring;
        let (mut r0, mut r1) = (modulus.clone(), self.rem(modulus)?);
        let (mut t0, mut t1) = (Poly::zero(ring), Poly::one(ring));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        match r0.degree() {
            Some(0) => {
                let c = ring.inv(r0.leading()).expect("field");
                Ok(Some(t0.scale(c).rem(modulus)?))
            }
            _ => Ok(None),
        }
    }

    /// Polynomial composition self(g) reduced mod m (Horner).
    pub fn compose_mod(&self, g: &Poly, modulus: &Poly) -> Result<Poly, RingError> {
        let ring = self.ring;
        let mut acc = Poly::zero(ring);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(g).rem(modulus)?;
            acc = acc.add(&Poly::constant(ring, c));
        }
        acc.rem(modulus)
    }
}

/// Characteristic polynomial det(xI − M) by the Berkowitz algorithm
/// (division-free, exact over ℤ/p^r as well as the fields).
pub fn charpoly(m: &Mat) -> Poly {
    let ring = m.ring();
    let n = m.dim();
    if n == 0 {
        return Poly::one(ring);
    }
    // Berkowitz: iteratively build the coefficient vector via Toeplitz
    // products over leading principal submatrices.
    let mut c: Vec<Elt> = vec![ring.one()];
    for k in 0..n {
        // principal k+1 x k+1 block data
        let akk = m.get(k, k);
        // row R = M[k][0..k], column S = M[0..k][k], block A = M[0..k][0..k]
        let mut powers: Vec<Vec<Elt>> = Vec::with_capacity(k + 1);
        // powers[j] = A^j · S
        let s: Vec<Elt> = (0..k).map(|i| m.get(i, k)).collect();
        powers.push(s.clone());
        for _ in 1..k {
            let prev = powers.last().unwrap();
            let mut next = vec![ring.zero(); k];
            for i in 0..k {
                let mut acc = ring.zero();
                for j in 0..k {
                    acc = ring.add(acc, ring.mul(m.get(i, j), prev[j]));
                }
                next[i] = acc;
            }
            powers.push(next);
        }
        // Toeplitz column t: t[0] = 1 (leading), t[1] = −akk,
        // t[j+2] = −R·A^j·S
        let mut t = vec![ring.zero(); k + 2];
        t[0] = ring.one();
        t[1] = ring.neg(akk);
        for j in 0..k {
            let mut acc = ring.zero();
            for i in 0..k {
                acc = ring.add(acc, ring.mul(m.get(k, i), powers[j][i]));
            }
            t[j + 2] = ring.neg(acc);
        }
        // c_new = T · c (lower-triangular Toeplitz convolution)
        let mut c_new = vec![ring.zero(); c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            if ci == ring.zero() {
                continue;
            }
            for (j, &tj) in t.iter().enumerate() {
                if i + j < c_new.len() {
                    c_new[i + j] = ring.add(c_new[i + j], ring.mul(tj, ci));
                }
            }
        }
        c = c_new;
    }
    // c is ordered from the leading coefficient down; flip to little-endian
    c.reverse();
    Poly::new(ring, c)
}

/// One part of a squarefree decomposition: `factor` squarefree, appearing
/// with the given multiplicity.
#[derive(Clone, Debug)]
pub struct SquarefreePart {
    pub factor: Poly,
    pub multiplicity: u32,
}

/// Squarefree decomposition over 𝔽_p or 𝔽_{p²}, with p-th-power extraction
/// (f = ∏ partᵢ^multᵢ, the parts pairwise coprime and squarefree).
pub fn squarefree_decomposition(f: &Poly) -> Result<Vec<SquarefreePart>, RingError> {
    let ring = f.ring;
    if !ring.is_field() {
        return Err(RingError::NotAField);
    }
    let f = f.monic();
    let mut out = Vec::new();
    sqf_rec(&f, 1, &mut out)?;
    out.sort_by_key(|p| (p.multiplicity, p.factor.degree()));
    Ok(out)
}

fn sqf_rec(f: &Poly, mult_scale: u32, out: &mut Vec<SquarefreePart>) -> Result<(), RingError> {
    let ring = f.ring;
    if f.degree() == Some(0) {
        return Ok(());
    }
    let fp = f.derivative();
    if fp.is_zero() {
        // pure p-th power: f(x) = g(x^p)^... take the p-th root and recurse
        let g = pth_root(f)?;
        return sqf_rec(&g, mult_scale * ring.char_p() as u32, out);
    }
    let mut c = f.gcd(&fp)?;
    let mut w = f.divmod(&c)?.0;
    let mut i = 1u32;
    while w.degree() != Some(0) {
        let y = w.gcd(&c)?;
        let fac = w.divmod(&y)?.0;
        if fac.degree().unwrap_or(0) > 0 {
            out.push(SquarefreePart {
                factor: fac.monic(),
                multiplicity: i * mult_scale,
            });
        }
        w = y;
        c = c.divmod(&w)?.0;
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        let g = pth_root(&c)?;
        sqf_rec(&g, mult_scale * ring.char_p() as u32, out)?;
    }
    Ok(())
}

/// p-th root of a polynomial whose derivative vanishes: the coefficients sit
/// at multiples of p, and each coefficient root is a^(q/p).
fn pth_root(f: &Poly) -> Result<Poly, RingError> {
    let ring = f.ring;
    let p = ring.char_p() as usize;
    let deg = f.degree().unwrap_or(0);
    debug_assert_eq!(deg % p, 0);
    let mut coeffs = Vec::with_capacity(deg / p + 1);
    for j in 0..=deg / p {
        let c = f.coeff(j * p);
        // q = p: a^{1/p} = a; q = p²: a^{1/p} = a^p
        let root = match ring.extension_poly() {
            None => c,
            Some(_) => ring.frobenius(c)?,
        };
        coeffs.push(root);
    }
    Ok(Poly::new(ring, coeffs))
}

/// For a squarefree polynomial, the total degree contributed by irreducible
/// factors of each degree d (so count of factors = total/d), found by
/// distinct-degree splitting with Frobenius powers. No explicit factors are
/// produced.
pub fn distinct_degree_profile(f: &Poly) -> Result<Vec<(usize, usize)>, RingError> {
    let ring = f.ring;
    if !ring.is_field() {
        return Err(RingError::NotAField);
    }
    let q = ring.card();
    let mut f = f.monic();
    let mut out = Vec::new();
    let mut h = Poly::x(ring).rem(&f)?;
    let mut d = 0usize;
    while f.degree().unwrap_or(0) > 0 {
        d += 1;
        if 2 * d > f.degree().unwrap() {
            // remainder is a single irreducible factor
            out.push((f.degree().unwrap(), f.degree().unwrap()));
            break;
        }
        h = h.pow_mod(q, &f)?;
        let diff = h.sub(&Poly::x(ring));
        let g = f.gcd(&diff)?;
        if g.degree().unwrap_or(0) > 0 {
            out.push((d, g.degree().unwrap()));
            f = f.divmod(&g)?.0;
            h = h.rem(&f)?;
        }
    }
    Ok(out)
}

/// Factor shape of an arbitrary polynomial over a field: for each
/// (degree, multiplicity) class, how many irreducible factors it contains.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FactorClass {
    pub degree: usize,
    pub multiplicity: u32,
    pub count: usize,
}

pub fn factor_shape(f: &Poly) -> Result<Vec<FactorClass>, RingError> {
    let mut out = Vec::new();
    for part in squarefree_decomposition(f)? {
        for (d, total) in distinct_degree_profile(&part.factor)? {
            debug_assert_eq!(total % d, 0);
            out.push(FactorClass {
                degree: d,
                multiplicity: part.multiplicity,
                count: total / d,
            });
        }
    }
    out.sort_by_key(|c| (c.degree, c.multiplicity));
    Ok(out)
}
