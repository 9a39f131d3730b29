//! Dense row-major matrices over an [`Algebra`].

use std::fmt;

use super::{Algebra, AlgebraError, Elem};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{:?}", self.to_rows())
    }
}

impl fmt::Display for Matrix {
    /// Rows separated by `;`, entries by a single space.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ";")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        Ok(())
    }
}

fn require_field(alg: &Algebra) -> Result<(), AlgebraError> {
    if alg.is_field() {
        Ok(())
    } else {
        Err(AlgebraError::NotAField(alg.to_string()))
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(alg: &Algebra, dim: usize) -> Matrix {
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, alg.one());
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Matrix, AlgebraError> {
        if data.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from rows, validating every entry against `alg`.
    pub fn from_rows(alg: &Algebra, rows: &[Vec<Elem>]) -> Result<Matrix, AlgebraError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(AlgebraError::DimensionMismatch("ragged rows".into()));
        }
        let data: Vec<Elem> = rows.concat();
        for &e in &data {
            alg.check(e)?;
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    /// Parses `;`-separated rows of whitespace-separated entries.
    pub fn parse(alg: &Algebra, text: &str) -> Result<Matrix, AlgebraError> {
        let rows: Result<Vec<Vec<Elem>>, _> = text
            .split(';')
            .map(|row| {
                row.split_whitespace()
                    .map(|t| t.parse::<Elem>())
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect();
        let rows = rows.map_err(|_| AlgebraError::Malformed(text.to_string()))?;
        if rows.iter().any(|r| r.is_empty()) {
            return Err(AlgebraError::Malformed(text.to_string()));
        }
        Matrix::from_rows(alg, &rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
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

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, alg: &Algebra, other: &Matrix) -> Result<Matrix, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = alg.add(out.get(r, c), alg.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, alg: &Algebra, other: &Matrix) -> Result<Matrix, AlgebraError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(AlgebraError::DimensionMismatch("matrix sum".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: alg.vec_add(&self.data, &other.data),
        })
    }

    pub fn sub(&self, alg: &Algebra, other: &Matrix) -> Result<Matrix, AlgebraError> {
        let neg = other.scale(alg, alg.neg(alg.one()));
        self.add(alg, &neg)
    }

    pub fn scale(&self, alg: &Algebra, c: Elem) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: alg.vec_scale(c, &self.data) }
    }

    /// Row vector times matrix, accumulated into `out`.
    pub fn accumulate_row_product(&self, alg: &Algebra, x: &[Elem], out: &mut [Elem]) {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        for (r, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(self.row(r)) {
                *o = alg.add(*o, alg.mul(a, m));
            }
        }
    }

    pub fn row_product(&self, alg: &Algebra, x: &[Elem]) -> Vec<Elem> {
        let mut out = vec![0; self.cols];
        self.accumulate_row_product(alg, x, &mut out);
        out
    }

    fn require_square(&self) -> Result<(), AlgebraError> {
        if self.rows == self.cols {
            Ok(())
        } else {
            Err(AlgebraError::DimensionMismatch(format!(
                "square matrix required, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    /// Reduced row echelon form over a field; returns pivot columns and the
    /// determinant factor accumulated from swaps and pivot scalings.
    fn rref(&mut self, alg: &Algebra) -> (Vec<usize>, Elem) {
        let mut pivots = Vec::new();
        let mut det = alg.one();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
                det = alg.neg(det);
            }
            let pv = self.get(row, col);
            det = alg.mul(det, pv);
            let inv = alg.unit_inverse(pv).expect("nonzero field element is a unit");
            for c in 0..self.cols {
                let v = alg.mul(inv, self.get(row, c));
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                let f = self.get(r, col);
                if r == row || f == 0 {
                    continue;
                }
                for c in 0..self.cols {
                    let v = alg.sub(self.get(r, c), alg.mul(f, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (pivots, det)
    }

    pub fn rank(&self, alg: &Algebra) -> Result<usize, AlgebraError> {
        require_field(alg)?;
        Ok(self.clone().rref(alg).0.len())
    }

    pub fn det(&self, alg: &Algebra) -> Result<Elem, AlgebraError> {
        require_field(alg)?;
        self.require_square()?;
        let mut m = self.clone();
        let (pivots, det) = m.rref(alg);
        Ok(if pivots.len() == self.rows { det } else { 0 })
    }

    /// Inverse over a field; `None` exactly when the determinant is zero.
    pub fn inverse(&self, alg: &Algebra) -> Result<Option<Matrix>, AlgebraError> {
        require_field(alg)?;
        self.require_square()?;
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, alg.one());
        }
        let (pivots, _) = aug.rref(alg);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Ok(Some(inv))
    }

    /// Basis of the left null space `{d : dM = 0}`, one vector per free
    /// variable in increasing order.
    pub fn left_nullspace_basis(&self, alg: &Algebra) -> Result<Vec<Vec<Elem>>, AlgebraError> {
        require_field(alg)?;
        // d M = 0  <=>  M^t d^t = 0, unknowns indexed by rows of M
        let mut t = self.transpose();
        let (pivots, _) = t.rref(alg);
        let unknowns = self.rows;
        let free: Vec<usize> = (0..unknowns).filter(|c| !pivots.contains(c)).collect();
        Ok(free
            .iter()
            .map(|&f| {
                let mut d = vec![0; unknowns];
                d[f] = alg.one();
                for (prow, &pcol) in pivots.iter().enumerate() {
                    d[pcol] = alg.neg(t.get(prow, f));
                }
                d
            })
            .collect())
    }

    /// Some nonzero `d` with `dM = 0`: the first free variable set to one,
    /// the others to zero. `None` when the rows are independent.
    pub fn left_nullspace_vector(&self, alg: &Algebra) -> Result<Option<Vec<Elem>>, AlgebraError> {
        Ok(self.left_nullspace_basis(alg)?.into_iter().next())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Algebra {
        Algebra::field(q).unwrap()
    }

    #[test]
    fn det_example() {
        let m = Matrix::parse(&gf(2), "1 0;1 1").unwrap();
        assert_eq!(m.det(&gf(2)), Ok(1));
    }

    #[test]
    fn inverse_examples() {
        let gf3 = gf(3);
        let id = Matrix::identity(&gf3, 3);
        assert_eq!(id.inverse(&gf3).unwrap(), Some(id.clone()));
        let m = Matrix::parse(&gf3, "1 1;0 1").unwrap();
        let inv = m.inverse(&gf3).unwrap().unwrap();
        assert_eq!(inv, Matrix::parse(&gf3, "1 2;0 1").unwrap());
        assert_eq!(m.mul(&gf3, &inv).unwrap(), Matrix::identity(&gf3, 2));
        let singular = Matrix::parse(&gf3, "1 2;2 1").unwrap();
        assert_eq!(singular.det(&gf3), Ok(0));
        assert_eq!(singular.inverse(&gf3), Ok(None));
    }

    #[test]
    fn nullspace_examples() {
        let gf2 = gf(2);
        let t = Matrix::parse(&gf2, "1 0;1 0;0 1").unwrap();
        assert_eq!(t.left_nullspace_vector(&gf2), Ok(Some(vec![1, 1, 0])));
        assert_eq!(Matrix::identity(&gf2, 3).left_nullspace_vector(&gf2), Ok(None));
        let z = Matrix::zeros(2, 2);
        assert_eq!(z.left_nullspace_vector(&gf(3)), Ok(Some(vec![1, 0])));
    }

    #[test]
    fn non_field_rejected() {
        let z4 = Algebra::integers_mod(4).unwrap();
        let m = Matrix::identity(&z4, 2);
        assert!(matches!(m.det(&z4), Err(AlgebraError::NotAField(_))));
        assert!(matches!(m.inverse(&z4), Err(AlgebraError::NotAField(_))));
        assert!(matches!(m.left_nullspace_vector(&z4), Err(AlgebraError::NotAField(_))));
        // multiplication works over any ring
        assert_eq!(m.mul(&z4, &m).unwrap(), m);
    }

    #[test]
    fn dimension_errors() {
        let gf2 = gf(2);
        let a = Matrix::zeros(2, 3);
        assert!(matches!(a.mul(&gf2, &a), Err(AlgebraError::DimensionMismatch(_))));
        assert!(matches!(a.det(&gf2), Err(AlgebraError::DimensionMismatch(_))));
        assert!(Matrix::parse(&gf2, "1 0;1").is_err());
        assert!(Matrix::parse(&gf2, "1 2").is_err());
        assert!(Matrix::parse(&gf2, "1 x").is_err());
    }

    #[test]
    fn display_roundtrip() {
        let gf3 = gf(3);
        let m = Matrix::parse(&gf3, "1 2 0;0 1 1").unwrap();
        assert_eq!(m.to_string(), "1 2 0;0 1 1");
        assert_eq!(Matrix::parse(&gf3, &m.to_string()).unwrap(), m);
    }
}
