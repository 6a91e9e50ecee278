//! Row reduction, rank, and kernel bases over the field rings
//! (𝔽_p and 𝔽_{p²}).

use super::{Elt, Mat, Ring, RingError};

/// Result of reducing a rectangular system to reduced row-echelon form.
#[derive(Clone, Debug)]
pub struct RowReduced {
    pub ring: Ring,
    pub cols: usize,
    /// Nonzero rows of the RREF, one pivot each.
    pub rows: Vec<Vec<Elt>>,
    /// Pivot column of each row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl RowReduced {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduced row-echelon form of the given rows. Field rings only.
pub fn row_reduce(ring: Ring, mut rows: Vec<Vec<Elt>>, cols: usize) -> Result<RowReduced, RingError> {
    if !ring.is_field() {
        return Err(RingError::NotAField);
    }
    let mut pivots = Vec::new();
    let mut out: Vec<Vec<Elt>> = Vec::new();
    for col in 0..cols {
        let Some(idx) = rows.iter().position(|r| ring.is_unit(r[col])) else {
            continue;
        };
        let mut pivot_row = rows.swap_remove(idx);
        let inv = ring.inv(pivot_row[col]).expect("unit pivot");
        for e in pivot_row.iter_mut() {
            *e = ring.mul(inv, *e);
        }
        for r in rows.iter_mut() {
            let f = r[col];
            if ring.is_unit(f) {
                for (e, p) in r.iter_mut().zip(&pivot_row) {
                    *e = ring.sub(*e, ring.mul(f, *p));
                }
            }
        }
        for r in out.iter_mut() {
            let f = r[col];
            if f != ring.zero() {
                for (e, p) in r.iter_mut().zip(&pivot_row) {
                    *e = ring.sub(*e, ring.mul(f, *p));
                }
            }
        }
        pivots.push(col);
        out.push(pivot_row);
    }
    Ok(RowReduced {
        ring,
        cols,
        rows: out,
        pivots,
    })
}

/// Basis of the right kernel {x : A·x = 0} of the system given by `rows`.
pub fn kernel_basis(ring: Ring, rows: &[Vec<Elt>], cols: usize) -> Result<Vec<Vec<Elt>>, RingError> {
    let red = row_reduce(ring, rows.to_vec(), cols)?;
    let mut basis = Vec::new();
    let pivot_set: Vec<Option<usize>> = {
        let mut v = vec![None; cols];
        for (ri, &c) in red.pivots.iter().enumerate() {
            v[c] = Some(ri);
        }
        v
    };
    for free in 0..cols {
        if pivot_set[free].is_some() {
            continue;
        }
        let mut vec = vec![ring.zero(); cols];
        vec[free] = ring.one();
        for (ri, &pc) in red.pivots.iter().enumerate() {
            vec[pc] = ring.neg(red.rows[ri][free]);
        }
        basis.push(vec);
    }
    Ok(basis)
}

/// Kernel basis and rank of a square matrix over a field.
#[derive(Clone, Debug)]
pub struct KernelInfo {
    pub rank: usize,
    pub nullity: usize,
    /// Kernel vectors in coordinate form (length = matrix dimension).
    pub basis: Vec<Vec<Elt>>,
}

/// Null space of a square matrix over a field: row-reduced kernel basis
/// plus rank, with rank + nullity = dim.
pub fn solve_kernel(a: &Mat) -> Result<KernelInfo, RingError> {
    let ring = a.ring();
    if !ring.is_field() {
        return Err(RingError::NotAField);
    }
    let n = a.dim();
    let rows: Vec<Vec<Elt>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
    let basis = kernel_basis(ring, &rows, n)?;
    let rank = n - basis.len();
    Ok(KernelInfo {
        rank,
        nullity: basis.len(),
        basis,
    })
}

/// Rank of a square matrix over a field.
pub fn rank(a: &Mat) -> Result<usize, RingError> {
    let ring = a.ring();
    let n = a.dim();
    let rows: Vec<Vec<Elt>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
    Ok(row_reduce(ring, rows, n)?.rank())
}

/// Expresses `target` in terms of `spanning` columns, if possible.
/// Returns the coordinate vector x with spanning·x = target.
pub fn solve_coords(
    ring: Ring,
    spanning: &[Vec<Elt>],
    target: &[Elt],
) -> Result<Option<Vec<Elt>>, RingError> {
    if !ring.is_field() {
        return Err(RingError::NotAField);
    }
    let height = target.len();
    let w = spanning.len();
    // augmented rows of [S | t] with S's columns the spanning vectors
    let rows: Vec<Vec<Elt>> = (0..height)
        .map(|i| {
            let mut row: Vec<Elt> = spanning.iter().map(|v| v[i]).collect();
            row.push(target[i]);
            row
        })
        .collect();
    let red = row_reduce(ring, rows, w + 1)?;
    if red.pivots.contains(&w) {
        return Ok(None);
    }
    let mut x = vec![ring.zero(); w];
    for (ri, &pc) in red.pivots.iter().enumerate() {
        x[pc] = red.rows[ri][w];
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_zero_and_identity() {
        let f5 = Ring::prime_field(5).unwrap();
        let z = Mat::zeros(f5, 3);
        let k = solve_kernel(&z).unwrap();
        assert_eq!((k.rank, k.nullity), (0, 3));
        let i = Mat::identity(f5, 3);
        let k = solve_kernel(&i).unwrap();
        assert_eq!((k.rank, k.nullity), (3, 0));
    }

    #[test]
    fn kernel_requires_field() {
        let z9 = Ring::integers_mod(3, 2).unwrap();
        assert_eq!(
            solve_kernel(&Mat::identity(z9, 2)).unwrap_err(),
            RingError::NotAField
        );
    }

    // exhaustive-scan oracle: nullity = log_p #{v : Av = 0}
    fn kernel_count_oracle(a: &Mat) -> usize {
        let ring = a.ring();
        let n = a.dim();
        let card = ring.card();
        let total = card.pow(n as u32);
        let elems: Vec<Elt> = ring.elements().collect();
        let mut count = 0u64;
        for idx in 0..total {
            let mut v = Vec::with_capacity(n);
            let mut t = idx;
            for _ in 0..n {
                v.push(elems[(t % card) as usize]);
                t /= card;
            }
            let mut is_zero = true;
            for i in 0..n {
                let mut acc = ring.zero();
                for j in 0..n {
                    acc = ring.add(acc, ring.mul(a.get(i, j), v[j]));
                }
                if acc != ring.zero() {
                    is_zero = false;
                    break;
                }
            }
            if is_zero {
                count += 1;
            }
        }
        let mut log = 0usize;
        let mut c = count;
        while c > 1 {
            assert_eq!(c % card, 0);
            c /= card;
            log += 1;
        }
        log
    }

    #[test]
    fn nullity_matches_exhaustive_scan() {
        // every square matrix up to 3×3 over 𝔽₂ and 𝔽₃
        for p in [2u64, 3] {
            let f = Ring::prime_field(p).unwrap();
            for dim in [2usize, 3] {
                let cells = dim * dim;
                for idx in 0..p.pow(cells as u32) {
                    let mut t = idx;
                    let mut rows = vec![vec![0i64; dim]; dim];
                    for r in rows.iter_mut() {
                        for e in r.iter_mut() {
                            *e = (t % p) as i64;
                            t /= p;
                        }
                    }
                    let m = Mat::from_rows(f, &rows).unwrap();
                    let k = solve_kernel(&m).unwrap();
                    assert_eq!(k.nullity, kernel_count_oracle(&m));
                    assert_eq!(k.rank + k.nullity, dim);
                }
            }
        }
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let f9 = Ring::quadratic_field(3).unwrap();
        let m = Mat::from_rows(f9, &[vec![1, 2, 0], vec![2, 4, 0], vec![0, 0, 1]]).unwrap();
        let k = solve_kernel(&m).unwrap();
        assert_eq!(k.nullity, 1);
        for v in &k.basis {
            for i in 0..3 {
                let mut acc = f9.zero();
                for j in 0..3 {
                    acc = f9.add(acc, f9.mul(m.get(i, j), v[j]));
                }
                assert_eq!(acc, f9.zero());
            }
        }
    }

    #[test]
    fn solve_coords_roundtrip() {
        let f5 = Ring::prime_field(5).unwrap();
        let spanning = vec![
            vec![f5.embed(1), f5.embed(0), f5.embed(2)],
            vec![f5.embed(0), f5.embed(1), f5.embed(3)],
        ];
        let target = vec![f5.embed(2), f5.embed(4), f5.embed(2 * 2 + 4 * 3)];
        let x = solve_coords(f5, &spanning, &target).unwrap().unwrap();
        assert_eq!(x, vec![f5.embed(2), f5.embed(4)]);
        let bad = vec![f5.embed(0), f5.embed(0), f5.embed(1)];
        assert!(solve_coords(f5, &spanning, &bad).unwrap().is_none());
    }
}
