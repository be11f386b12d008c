//! Dense exact linear algebra over GF(q²): reduced row echelon form, rank,
//! right-kernel bases, and the exact count of kernel vectors with no zero
//! coordinate. The instances are small (at most a few thousand columns),
//! so everything is straightforward elimination.

use crate::field::{Elem, FieldCtx, ONE, ZERO};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>, // row-major
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Elem>) -> Matrix {
        assert_eq!(rows * cols, data.len());
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// New matrix keeping the listed columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            let row = self.row(r);
            data.extend(cols.iter().map(|&c| row[c]));
        }
        Matrix {
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    /// Reduced row echelon form and the pivot column list.
    pub fn rref(&self, ctx: &FieldCtx) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for pc in 0..m.cols {
            let Some(src) = (pr..m.rows).find(|&r| m.get(r, pc) != ZERO) else {
                continue;
            };
            if src != pr {
                for c in 0..m.cols {
                    let (a, b) = (m.get(pr, c), m.get(src, c));
                    m.set(pr, c, b);
                    m.set(src, c, a);
                }
            }
            let inv = ctx.inv(m.get(pr, pc)).expect("pivot is nonzero");
            for c in pc..m.cols {
                m.set(pr, c, ctx.mul(inv, m.get(pr, c)));
            }
            for r in 0..m.rows {
                if r == pr || m.get(r, pc) == ZERO {
                    continue;
                }
                let f = m.get(r, pc);
                for c in pc..m.cols {
                    let v = ctx.sub(m.get(r, c), ctx.mul(f, m.get(pr, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(pc);
            pr += 1;
            if pr == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    /// Rank by forward elimination on a scratch copy.
    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        let mut m = self.clone();
        let mut pr = 0;
        for pc in 0..m.cols {
            let Some(src) = (pr..m.rows).find(|&r| m.get(r, pc) != ZERO) else {
                continue;
            };
            if src != pr {
                for c in pc..m.cols {
                    let (a, b) = (m.get(pr, c), m.get(src, c));
                    m.set(pr, c, b);
                    m.set(src, c, a);
                }
            }
            let inv = ctx.inv(m.get(pr, pc)).expect("pivot is nonzero");
            for r in pr + 1..m.rows {
                let f = m.get(r, pc);
                if f == ZERO {
                    continue;
                }
                let f = ctx.mul(f, inv);
                m.set(r, pc, ZERO);
                for c in pc + 1..m.cols {
                    let v = ctx.sub(m.get(r, c), ctx.mul(f, m.get(pr, c)));
                    m.set(r, c, v);
                }
            }
            pr += 1;
            if pr == m.rows {
                break;
            }
        }
        pr
    }

    /// Basis of the right kernel {z : Mz = 0}; length = cols − rank.
    pub fn nullspace_basis(&self, ctx: &FieldCtx) -> Vec<Vec<Elem>> {
        let (r, pivots) = self.rref(ctx);
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![ZERO; self.cols];
            v[free] = ONE;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = ctx.neg(r.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Exact number of kernel vectors with every coordinate nonzero.
    ///
    /// Small nullspaces (dimension ≤ 3) are enumerated outright; larger ones
    /// go through inclusion–exclusion over forced-zero coordinate sets. The
    /// two routes are cross-checked against each other in the tests.
    pub fn count_full_support_kernel(&self, ctx: &FieldCtx) -> u128 {
        if self.cols == 0 {
            return 1; // the empty vector has no zero coordinate
        }
        let basis = self.nullspace_basis(ctx);
        let nullity = basis.len();
        if nullity == 0 {
            return 0;
        }
        if nullity <= 3 {
            return count_by_enumeration(ctx, &basis, self.cols);
        }
        self.count_full_support_kernel_by_exclusion(ctx)
    }

    /// Inclusion–exclusion over the coordinate subsets forced to zero:
    /// Σ_S (−1)^|S| · (q²)^nullity(M with the columns of S deleted).
    pub fn count_full_support_kernel_by_exclusion(&self, ctx: &FieldCtx) -> u128 {
        assert!(self.cols <= 30, "inclusion-exclusion over too many columns");
        let q2 = ctx.q2() as u128;
        let mut acc: i128 = 0;
        for mask in 0u32..1 << self.cols {
            let keep: Vec<usize> = (0..self.cols).filter(|&c| mask >> c & 1 == 0).collect();
            let dropped = self.cols - keep.len();
            let sub = self.select_cols(&keep);
            let nullity = keep.len() - sub.rank(ctx);
            let term = q2.pow(nullity as u32) as i128;
            acc += if dropped % 2 == 0 { term } else { -term };
        }
        debug_assert!(acc >= 0);
        acc as u128
    }
}

fn count_by_enumeration(ctx: &FieldCtx, basis: &[Vec<Elem>], cols: usize) -> u128 {
    let q2 = ctx.q2();
    let mut coeffs = vec![0u32; basis.len()];
    let mut count = 0u128;
    let mut vec = vec![ZERO; cols];
    loop {
        vec.iter_mut().for_each(|v| *v = ZERO);
        for (ci, &co) in coeffs.iter().enumerate() {
            if co == 0 {
                continue;
            }
            let co = Elem(co);
            for (v, &b) in vec.iter_mut().zip(&basis[ci]) {
                *v = ctx.add(*v, ctx.mul(co, b));
            }
        }
        if vec.iter().all(|&v| v != ZERO) {
            count += 1;
        }
        // odometer over coefficient tuples
        let mut i = 0;
        loop {
            if i == coeffs.len() {
                return count;
            }
            coeffs[i] += 1;
            if coeffs[i] < q2 {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

/// Vandermonde matrix on the given nodes: rows 1, x, x², …, x^(rows−1).
pub fn vandermonde(ctx: &FieldCtx, nodes: &[Elem], rows: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, nodes.len());
    for (c, &x) in nodes.iter().enumerate() {
        let mut acc = ONE;
        for r in 0..rows {
            m.set(r, c, acc);
            acc = ctx.mul(acc, x);
        }
    }
    m
}
