//! Exact dense linear algebra over the prime field GF(p).
//!
//! Everything downstream (Hom spaces, Ext groups, closures) reduces to
//! row reduction over GF(p), so this module is deliberately boring:
//! row-major matrices of reduced residues, Gauss–Jordan elimination with
//! deterministic pivoting (leftmost column, topmost row), and the three
//! derived operations `rref`, `kernel_basis` and `solve`.

use std::fmt;

/// A scalar in GF(p). The modulus travels with the value so that mixed-field
/// bugs surface immediately instead of silently wrapping.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    p: u32,
}

impl Fp {
    pub fn new(value: i64, p: u32) -> Self {
        debug_assert!(p >= 2);
        let m = value.rem_euclid(p as i64) as u32;
        Fp { value: m, p }
    }

    pub fn zero(p: u32) -> Self {
        Fp { value: 0, p }
    }

    pub fn one(p: u32) -> Self {
        Fp { value: 1 % p, p }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        let s = self.value as u64 + rhs.value as u64;
        Fp {
            value: (s % self.p as u64) as u32,
            p: self.p,
        }
    }

    pub fn sub(self, rhs: Fp) -> Fp {
        self.add(rhs.neg())
    }

    pub fn neg(self) -> Fp {
        if self.value == 0 {
            self
        } else {
            Fp {
                value: self.p - self.value,
                p: self.p,
            }
        }
    }

    pub fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        let m = self.value as u64 * rhs.value as u64;
        Fp {
            value: (m % self.p as u64) as u32,
            p: self.p,
        }
    }

    /// Multiplicative inverse by Fermat; panics on zero.
    pub fn inv(self) -> Fp {
        assert!(self.value != 0, "inverse of zero in GF({})", self.p);
        // p is small; square-and-multiply to the p-2 power is plenty.
        let mut acc = Fp::one(self.p);
        let mut base = self;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Returns true when `p` is prime. Trial division; session moduli are tiny.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense row-major matrix over GF(p). Entries are stored reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    p: u32,
    data: Vec<u32>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize, p: u32) -> Self {
        Mat {
            rows,
            cols,
            p,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, p: u32) -> Self {
        let mut m = Mat::zero(n, n, p);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>], p: u32) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Mat::zero(r, c, p);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> Fp {
        Fp {
            value: self.data[i * self.cols + j],
            p: self.p,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v.rem_euclid(self.p as i64) as u32;
    }

    pub fn set_fp(&mut self, i: usize, j: usize, v: Fp) {
        debug_assert_eq!(v.p, self.p);
        self.data[i * self.cols + j] = v.value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set_fp(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, &b) in m.data.iter_mut().zip(other.data.iter()) {
            *a = ((*a as u64 + b as u64) % self.p as u64) as u32;
        }
        m
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.scale(Fp::new(-1, self.p)))
    }

    pub fn scale(&self, s: Fp) -> Mat {
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a = ((*a as u64 * s.value as u64) % self.p as u64) as u32;
        }
        m
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let p = self.p as u64;
        let mut m = Mat::zero(self.rows, other.cols, self.p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.data[k * other.cols + j] as u64;
                    if b == 0 {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    m.data[idx] = ((m.data[idx] as u64 + a * b) % p) as u32;
                }
            }
        }
        m
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Fp]) -> Vec<Fp> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Fp::zero(self.p);
                for j in 0..self.cols {
                    acc = acc.add(self.get(i, j).mul(v[j]));
                }
                acc
            })
            .collect()
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut m = Mat::zero(self.rows + other.rows, self.cols, self.p);
        m.data[..self.data.len()].copy_from_slice(&self.data);
        m.data[self.data.len()..].copy_from_slice(&other.data);
        m
    }

    /// Stack `other` to the right of `self`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut m = Mat::zero(self.rows, self.cols + other.cols, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set_fp(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set_fp(i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    pub fn block_diag(blocks: &[&Mat], p: u32) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Mat::zero(rows, cols, p);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            assert_eq!(b.p, p);
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set_fp(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<Fp> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn from_columns(cols: &[Vec<Fp>], rows: usize, p: u32) -> Mat {
        let mut m = Mat::zero(rows, cols.len(), p);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.set_fp(i, j, v);
            }
        }
        m
    }

    /// Reduced row echelon form together with rank and pivot columns.
    /// Pivoting is deterministic: leftmost pivot column, topmost nonzero row.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            // topmost nonzero entry in this column at or below `row`
            let mut pivot_row = None;
            for r in row..m.rows {
                if m.get(r, col).value != 0 {
                    pivot_row = Some(r);
                    break;
                }
            }
            let Some(pr) = pivot_row else { continue };
            m.swap_rows(row, pr);
            let inv = m.get(row, col).inv();
            m.scale_row(row, inv);
            for r in 0..m.rows {
                if r != row {
                    let factor = m.get(r, col);
                    if !factor.is_zero() {
                        m.row_axpy(r, row, factor.neg());
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref {
            rank: pivots.len(),
            pivots,
            mat: m,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// A basis of the null space `{v : self · v = 0}`, one column vector per
    /// free column of the echelon form (free variables set to the standard
    /// unit values, so the result is deterministic).
    pub fn kernel_basis(&self) -> Vec<Vec<Fp>> {
        let r = self.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in r.pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![Fp::zero(self.p); self.cols];
            v[free] = Fp::one(self.p);
            for (row, &pc) in r.pivots.iter().enumerate() {
                v[pc] = r.mat.get(row, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `self · x = b`, or `None` when inconsistent.
    /// All free variables are set to zero, so the choice is deterministic.
    pub fn solve(&self, b: &[Fp]) -> Option<Vec<Fp>> {
        assert_eq!(b.len(), self.rows);
        let bm = Mat::from_columns(&[b.to_vec()], self.rows, self.p);
        let aug = self.hstack(&bm).rref();
        // a pivot in the augmented column means inconsistency
        if aug.pivots.last().is_some_and(|&c| c == self.cols) {
            return None;
        }
        let mut x = vec![Fp::zero(self.p); self.cols];
        for (row, &col) in aug.pivots.iter().enumerate() {
            x[col] = aug.mat.get(row, self.cols);
        }
        Some(x)
    }

    /// Solve `self · X = B` column by column; `None` if any column fails.
    pub fn solve_mat(&self, b: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, b.rows);
        let mut cols = Vec::with_capacity(b.cols);
        for j in 0..b.cols {
            cols.push(self.solve(&b.column(j))?);
        }
        Some(Mat::from_columns(&cols, self.cols, self.p))
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(n, self.p)).rref();
        if aug.rank < n {
            return None;
        }
        let mut inv = Mat::zero(n, n, self.p);
        for i in 0..n {
            for j in 0..n {
                inv.set_fp(i, j, aug.mat.get(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Column span basis in echelon form (columns of the result).
    pub fn column_space_basis(&self) -> Mat {
        let t = self.transpose().rref();
        let mut cols = Vec::new();
        for i in 0..t.rank {
            cols.push((0..self.rows).map(|j| t.mat.get(i, j)).collect());
        }
        Mat::from_columns(&cols, self.rows, self.p)
    }

    /// Extend the (independent) columns of `basis` to a basis of the full
    /// space by standard unit vectors, returning only the added complement
    /// columns. Deterministic: unit vectors are tried in index order.
    pub fn complement_basis(basis: &Mat) -> Mat {
        let n = basis.rows;
        let p = basis.p;
        let mut current = basis.clone();
        let mut added = Vec::new();
        for i in 0..n {
            if current.cols == n {
                break;
            }
            let mut e = vec![Fp::zero(p); n];
            e[i] = Fp::one(p);
            let cand = current.hstack(&Mat::from_columns(&[e.clone()], n, p));
            if cand.rank() == current.cols + 1 {
                current = cand;
                added.push(e);
            }
        }
        assert_eq!(current.cols, n, "complement_basis: basis not independent?");
        Mat::from_columns(&added, n, p)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, s: Fp) {
        for j in 0..self.cols {
            let v = self.get(r, j).mul(s);
            self.set_fp(r, j, v);
        }
    }

    /// row[r] += factor * row[src]
    fn row_axpy(&mut self, r: usize, src: usize, factor: Fp) {
        for j in 0..self.cols {
            let v = self.get(r, j).add(self.get(src, j).mul(factor));
            self.set_fp(r, j, v);
        }
    }

    /// Entries as a flat slice of reduced residues (row major).
    pub fn entries(&self) -> &[u32] {
        &self.data
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} mod {}", self.rows, self.cols, self.p)?;
        for i in 0..self.rows {
            let row: Vec<u32> = (0..self.cols).map(|j| self.get(i, j).value()).collect();
            writeln!(f, "  {:?}", row)?;
        }
        Ok(())
    }
}

pub struct Rref {
    pub mat: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rref_identity() {
        let id = Mat::identity(3, 2);
        let r = id.rref();
        assert_eq!(r.mat, id);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_zero() {
        let z = Mat::zero(2, 4, 2);
        let r = z.rref();
        assert_eq!(r.mat, z);
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_rank_one_over_gf2() {
        // hand row-reduction over GF(2): the two rows coincide
        let m = Mat::from_rows(&[vec![1, 1], vec![1, 1]], 2);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_identity_empty() {
        assert!(Mat::identity(4, 3).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_zero_full() {
        assert_eq!(Mat::zero(3, 3, 2).kernel_basis().len(), 3);
    }

    #[test]
    fn kernel_of_sum_constraint() {
        // x + y = 0 over GF(2) has kernel basis {(1,1)}
        let m = Mat::from_rows(&[vec![1, 1]], 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0].value(), 1);
        assert_eq!(k[0][1].value(), 1);
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let id = Mat::identity(2, 5);
        let b = vec![Fp::new(3, 5), Fp::new(4, 5)];
        assert_eq!(id.solve(&b).unwrap(), b);
        let z = Mat::zero(2, 2, 5);
        assert!(z.solve(&b).is_none());
    }

    #[test]
    fn solve_zeroes_free_variables() {
        // [[1,1]] x = (1) over GF(2): pivot var carries the value, free var 0
        let m = Mat::from_rows(&[vec![1, 1]], 2);
        let x = m.solve(&[Fp::one(2)]).unwrap();
        assert_eq!((x[0].value(), x[1].value()), (1, 0));
    }

    #[test]
    fn complement_fills_space() {
        let b = Mat::from_columns(&[vec![Fp::one(2), Fp::one(2)]], 2, 2);
        let c = Mat::complement_basis(&b);
        assert_eq!(c.cols(), 1);
        assert!(b.hstack(&c).is_invertible());
    }

    fn arb_mat(max_dim: usize, p: u32) -> impl Strategy<Value = Mat> {
        (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0..p, r * c).prop_map(move |data| {
                let mut m = Mat::zero(r, c, p);
                for i in 0..r {
                    for j in 0..c {
                        m.set(i, j, data[i * c + j] as i64);
                    }
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_mat(6, 2)) {
            let r = m.rref();
            prop_assert_eq!(r.rank + m.kernel_basis().len(), m.cols());
        }

        #[test]
        fn rank_nullity_gf5(m in arb_mat(5, 5)) {
            let r = m.rref();
            prop_assert_eq!(r.rank + m.kernel_basis().len(), m.cols());
        }

        #[test]
        fn rref_idempotent(m in arb_mat(6, 2)) {
            let r1 = m.rref();
            let r2 = r1.mat.rref();
            prop_assert_eq!(r1.mat, r2.mat);
        }

        #[test]
        fn kernel_vectors_annihilate(m in arb_mat(6, 3)) {
            for v in m.kernel_basis() {
                prop_assert!(m.apply(&v).iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn solve_is_checked_by_multiplication(m in arb_mat(5, 3), seed in proptest::collection::vec(0..3u32, 5)) {
            let x0: Vec<Fp> = seed.iter().take(m.cols()).map(|&v| Fp::new(v as i64, 3)).collect();
            if x0.len() == m.cols() {
                let b = m.apply(&x0);
                let x = m.solve(&b).expect("consistent by construction");
                prop_assert_eq!(m.apply(&x), b);
            }
        }
    }
}
