//! Dense matrices over a [`Field`]: products, Kronecker products, row
//! reduction, kernels and span closure under a set of operators.

use crate::ffield::{FElem, Field};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![FElem::ZERO; rows * cols],
        }
    }

    pub fn identity(f: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FElem>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
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

    pub fn get(&self, i: usize, j: usize) -> FElem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j);
                        out.set(i, j, f.add(cur, f.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, f: &Field, v: &[FElem]) -> Vec<FElem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (&a, &x)| f.add(acc, f.mul(a, x)))
            })
            .collect()
    }

    pub fn sub(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, f: &Field, c: FElem) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// Kronecker product; row index of the result is `i * other.rows + k`.
    pub fn kronecker(&self, f: &Field, other: &Matrix) -> Matrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, f.mul(a, other.get(k, l)));
                    }
                }
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, f: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in 0..self.cols {
                let v = self.get(r, j);
                self.set(r, j, f.mul(v, inv));
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of the right kernel, one vector per free column. The vector
    /// for free column `j` has a 1 in position `j`.
    pub fn kernel(&self, f: &Field) -> Vec<Vec<FElem>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&j| {
                let mut v = vec![f.zero(); self.cols];
                v[j] = f.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, j));
                }
                v
            })
            .collect()
    }

    pub fn is_invertible(&self, f: &Field) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }
}

/// Incrementally maintained row-reduced basis of a subspace of F^dim.
#[derive(Debug, Clone)]
pub struct Span {
    dim: usize,
    /// Reduced basis rows with their pivot column.
    basis: Vec<(usize, Vec<FElem>)>,
}

impl Span {
    pub fn new(dim: usize) -> Span {
        Span {
            dim,
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn reduce(&self, f: &Field, v: &[FElem]) -> Vec<FElem> {
        let mut w = v.to_vec();
        for (pc, row) in &self.basis {
            let c = w[*pc];
            if !c.is_zero() {
                for (x, &b) in w.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, b));
                }
            }
        }
        w
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, f: &Field, v: &[FElem]) -> bool {
        let mut w = self.reduce(f, v);
        let Some(pc) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(w[pc]).expect("nonzero");
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for (_, row) in self.basis.iter_mut() {
            let c = row[pc];
            if !c.is_zero() {
                for (x, &b) in row.iter_mut().zip(&w) {
                    *x = f.sub(*x, f.mul(c, b));
                }
            }
        }
        self.basis.push((pc, w));
        true
    }

    pub fn contains(&self, f: &Field, v: &[FElem]) -> bool {
        self.reduce(f, v).iter().all(|x| x.is_zero())
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[FElem]> {
        self.basis.iter().map(|(_, r)| r.as_slice())
    }
}

/// Smallest subspace containing `seeds` and stable under every operator.
pub fn closure_under(f: &Field, seeds: &[Vec<FElem>], operators: &[Matrix]) -> Span {
    let dim = seeds.first().map_or(0, Vec::len);
    let mut span = Span::new(dim);
    let mut queue: Vec<Vec<FElem>> = Vec::new();
    for s in seeds {
        if span.insert(f, s) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for op in operators {
            let w = op.apply(f, &v);
            if span.insert(f, &w) {
                queue.push(w);
            }
        }
        if span.dim() == dim {
            break;
        }
    }
    span
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Field {
        Field::new(5, 1).unwrap()
    }

    fn m(f: &Field, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| f.from_int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn kernel_of_rank_one() {
        let f = f5();
        let a = m(&f, &[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(&f), 1);
        let ker = a.kernel(&f);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(a.apply(&f, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn product_and_identity() {
        let f = f5();
        let a = m(&f, &[&[1, 2], &[3, 4]]);
        let id = Matrix::identity(&f, 2);
        assert_eq!(a.mul(&f, &id), a);
        // det = 4 - 6 = -2 != 0
        assert!(a.is_invertible(&f));
        assert!(!m(&f, &[&[1, 2], &[2, 4]]).is_invertible(&f));
    }

    #[test]
    fn kronecker_shape_and_entries() {
        let f = f5();
        let a = m(&f, &[&[1, 2], &[0, 1]]);
        let b = m(&f, &[&[3]]);
        let k = a.kronecker(&f, &b);
        assert_eq!(k, m(&f, &[&[3, 6], &[0, 3]]));
        let k2 = a.kronecker(&f, &Matrix::identity(&f, 2));
        assert_eq!(k2.rows(), 4);
        assert_eq!(k2.get(0, 2), f.from_int(2));
        assert_eq!(k2.get(1, 3), f.from_int(2));
        assert_eq!(k2.get(0, 3), f.zero());
    }

    #[test]
    fn closure_of_nilpotent_shift() {
        let f = f5();
        // e_0 -> e_1 -> e_2 -> 0
        let shift = m(&f, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        let e0 = vec![f.one(), f.zero(), f.zero()];
        let e2 = vec![f.zero(), f.zero(), f.one()];
        assert_eq!(closure_under(&f, &[e0], std::slice::from_ref(&shift)).dim(), 3);
        assert_eq!(closure_under(&f, &[e2], &[shift]).dim(), 1);
    }
}
