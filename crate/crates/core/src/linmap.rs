//! Dense matrices acting on column vectors: basis vector `e_c` maps to
//! `Σ_r M[r][c] e_r`.

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};
use crate::tensor::{add_term, axpy, Tensor, Vector};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Scalar>>,
}

impl LinearMap {
    pub fn zero(rows: usize, cols: usize) -> Self {
        LinearMap { rows, cols, entries: vec![vec![Scalar::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = LinearMap::zero(n, n);
        for i in 0..n {
            m.entries[i][i] = Scalar::one();
        }
        m
    }

    pub fn diag(d: &[Scalar]) -> Self {
        let mut m = LinearMap::zero(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.entries[i][i] = x.clone();
        }
        m
    }

    pub fn from_rows(entries: Vec<Vec<Scalar>>) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(LinearMap { rows, cols, entries })
    }

    pub fn from_ints(entries: &[&[i64]]) -> Self {
        LinearMap::from_rows(entries.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect())
            .expect("rectangular integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) {
        self.entries[r][c] = x;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r]
    }

    pub fn is_identity(&self) -> bool {
        *self == LinearMap::identity(self.rows)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.entries[r][c].is_zero()))
    }

    /// Sparse image of basis vector `c`.
    pub fn column(&self, c: usize) -> Vec<(usize, Scalar)> {
        (0..self.rows)
            .filter(|&r| !self.entries[r][c].is_zero())
            .map(|r| (r, self.entries[r][c].clone()))
            .collect()
    }

    pub fn columns(&self) -> Vec<Vec<(usize, Scalar)>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> LinearMap {
        let mut t = LinearMap::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c][r] = self.entries[r][c].clone();
            }
        }
        t
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &LinearMap) -> Result<LinearMap> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "compose {}x{} with {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut m = LinearMap::zero(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.entries[r][k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let b = &o.entries[k][c];
                    if !b.is_zero() {
                        m.entries[r][c] = &m.entries[r][c] + &(a * b);
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn add(&self, o: &LinearMap) -> Result<LinearMap> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let mut m = self.clone();
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.entries[r][c] = &m.entries[r][c] + &o.entries[r][c];
            }
        }
        Ok(m)
    }

    pub fn scale(&self, k: &Scalar) -> LinearMap {
        let mut m = self.clone();
        for row in &mut m.entries {
            for x in row {
                *x = &*x * k;
            }
        }
        m
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut s = Scalar::zero();
                for (c, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self.entries[r][c].is_zero() {
                        s = &s + &(x * &self.entries[r][c]);
                    }
                }
                s
            })
            .collect())
    }

    pub fn apply_sparse(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (c, x) in v {
            let col: Vector = self.column(*c as usize).into_iter().map(|(r, y)| (r as u64, y)).collect();
            axpy(&mut out, x, &col);
        }
        out
    }

    /// Kronecker product; index `(a, b)` becomes `a·dim(o) + b`.
    pub fn kron(&self, o: &LinearMap) -> LinearMap {
        let mut m = LinearMap::zero(self.rows * o.rows, self.cols * o.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = &self.entries[r1][c1];
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..o.rows {
                    for c2 in 0..o.cols {
                        let b = &o.entries[r2][c2];
                        if !b.is_zero() {
                            m.entries[r1 * o.rows + r2][c1 * o.cols + c2] = a * b;
                        }
                    }
                }
            }
        }
        m
    }

    /// Row-reduces a copy; returns the rank and the inverse when square and full rank.
    fn gauss(&self) -> (usize, Option<LinearMap>) {
        let n = self.rows;
        let square = self.is_square();
        let mut a = self.entries.clone();
        let mut inv = LinearMap::identity(n).entries;
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..n).find(|&r| !a[r][c].is_zero()) else { continue };
            a.swap(rank, p);
            inv.swap(rank, p);
            let k = a[rank][c].inv();
            for x in a[rank].iter_mut().chain(inv[rank].iter_mut()) {
                *x = &*x * &k;
            }
            for r in 0..n {
                if r != rank && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for j in 0..self.cols {
                        if !a[rank][j].is_zero() {
                            a[r][j] = &a[r][j] - &(&f * &a[rank][j]);
                        }
                    }
                    for j in 0..n {
                        if !inv[rank][j].is_zero() {
                            inv[r][j] = &inv[r][j] - &(&f * &inv[rank][j]);
                        }
                    }
                }
            }
            rank += 1;
        }
        let inverse = (square && rank == n).then(|| LinearMap { rows: n, cols: n, entries: inv });
        (rank, inverse)
    }

    pub fn rank(&self) -> usize {
        self.gauss().0
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        if !self.is_square() {
            return Err(Error::Singular(format!("{}x{} matrix is not square", self.rows, self.cols)));
        }
        self.gauss().1.ok_or_else(|| Error::Singular(format!("{}x{} matrix has rank {}", self.rows, self.cols, self.rank())))
    }

    pub fn pow(&self, e: i64) -> Result<LinearMap> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = LinearMap::identity(self.rows);
        for _ in 0..e.unsigned_abs() {
            acc = acc.compose(&base)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(Scalar::zero(), |s, i| &s + &self.entries[i][i])
    }

    pub fn render(&self, field: &FieldSpec) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| field.format(x)).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&FieldSpec::rationals()))
    }
}

/// `(f_1⊗…⊗f_d)(t)`. All maps must share the same target dimension.
pub fn apply_slotwise(maps: &[&LinearMap], t: &Tensor) -> Result<Tensor> {
    if maps.len() != t.degree() {
        return Err(Error::DimensionMismatch(format!("{} maps for a degree {} tensor", maps.len(), t.degree())));
    }
    let Some(first) = maps.first() else { return Ok(t.clone()) };
    let out_base = first.rows();
    if maps.iter().any(|m| m.cols() != t.base() || m.rows() != out_base) {
        return Err(Error::DimensionMismatch("slot map shape".into()));
    }
    let cols: Vec<Vec<Vec<(usize, Scalar)>>> = maps.iter().map(|m| m.columns()).collect();
    let mut out = Vector::new();
    for (idx, x) in t.terms() {
        let mut partial: Vec<(u64, Scalar)> = vec![(0, x.clone())];
        for (slot, &k) in idx.0.iter().enumerate() {
            let col = &cols[slot][k];
            let mut next = Vec::with_capacity(partial.len() * col.len());
            for (code, c) in &partial {
                for (r, y) in col {
                    next.push((code * out_base as u64 + *r as u64, c * y));
                }
            }
            partial = next;
        }
        for (code, c) in partial {
            add_term(&mut out, code, &c);
        }
    }
    Ok(Tensor::from_vector(out_base, t.degree(), out))
}

/// Same map in every slot.
pub fn apply_power(map: &LinearMap, t: &Tensor) -> Result<Tensor> {
    let maps = vec![map; t.degree()];
    apply_slotwise(&maps, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_power() {
        let m = LinearMap::from_ints(&[&[1, 1], &[0, 1]]);
        assert_eq!(m.pow(-2).unwrap(), LinearMap::from_ints(&[&[1, -2], &[0, 1]]));
        assert!(LinearMap::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn slotwise_scaling() {
        let p = Scalar::param(0);
        let phi = LinearMap::diag(&[p.clone(), p.inv()]);
        let phi2 = phi.pow(2).unwrap();
        let t = Tensor::monomial(2, &[0, 0]);
        let out = apply_slotwise(&[&phi, &phi2], &t).unwrap();
        assert_eq!(out, t.scale(&p.pow(3).unwrap()));
        let zero = LinearMap::zero(2, 2);
        assert!(apply_slotwise(&[&phi, &zero], &t).unwrap().is_zero());
    }
}
