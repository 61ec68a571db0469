//! Reduced echelon forms over sparse vectors.
//!
//! Every row is keyed by its pivot, which is the smallest code in its
//! support; pivot entries are 1 and pivot columns vanish in all other rows.
//! Reducing a vector therefore takes a single pass over its pivot entries,
//! and the result is the normal form on the non-pivot monomials.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{axpy, pow_dim, scale_vec, Tensor, Vector};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Echelon {
    rows: BTreeMap<u64, Vector>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &BTreeMap<u64, Vector> {
        &self.rows
    }

    pub fn is_pivot(&self, code: u64) -> bool {
        self.rows.contains_key(&code)
    }

    pub fn reduce(&self, v: &Vector) -> Vector {
        if self.rows.is_empty() {
            return v.clone();
        }
        let mut out = v.clone();
        for (c, x) in v {
            if let Some(row) = self.rows.get(c) {
                axpy(&mut out, &-x, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds a vector to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &Vector) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        self.insert_reduced(r);
        true
    }

    fn insert_reduced(&mut self, r: Vector) {
        let (&p, lead) = r.iter().next().unwrap();
        let r = if lead.is_one() { r } else { scale_vec(&r, &lead.inv()) };
        for row in self.rows.values_mut() {
            if let Some(x) = row.get(&p).cloned() {
                axpy(row, &-x, &r);
            }
        }
        self.rows.insert(p, r);
    }

    pub fn extend<'a>(&mut self, vs: impl IntoIterator<Item = &'a Vector>) {
        for v in vs {
            self.insert(v);
        }
    }
}

/// Kernel of the linear map sending source basis vector `s` to `image(s)`.
/// Source codes are arbitrary `u64`; the result is an echelon basis.
pub fn kernel(images: impl IntoIterator<Item = (u64, Vector)>) -> Echelon {
    // Source codes are shifted above every image code so image entries pivot first.
    let images: Vec<(u64, Vector)> = images.into_iter().collect();
    let top = images
        .iter()
        .flat_map(|(_, v)| v.keys().copied())
        .max()
        .map_or(0, |m| m + 1);
    let mut ech = Echelon::new();
    let mut ker = Echelon::new();
    for (s, img) in &images {
        let mut aug = img.clone();
        aug.insert(top + s, Scalar::one());
        let r = ech.reduce(&aug);
        if r.is_empty() {
            continue;
        }
        if *r.keys().next().unwrap() >= top {
            ker.insert(&r.iter().map(|(k, x)| (k - top, x.clone())).collect());
        }
        ech.insert_reduced(r);
    }
    ker
}

/// Remainder of a two-factor tensor `Σ c (l, r)` modulo `K⊗W + V⊗J`, where
/// `K` and `J` are given by echelon forms on the left and right factors.
/// The remainder is zero exactly when the tensor lies in that sum.
pub fn bi_reduce(
    t: &BTreeMap<(u64, u64), Scalar>,
    left: &Echelon,
    right: &Echelon,
) -> BTreeMap<(u64, u64), Scalar> {
    let mut by_right: BTreeMap<u64, Vector> = BTreeMap::new();
    for ((l, r), x) in t {
        by_right.entry(*r).or_default().insert(*l, x.clone());
    }
    let mut by_left: BTreeMap<u64, Vector> = BTreeMap::new();
    for (r, v) in by_right {
        for (l, x) in left.reduce(&v) {
            by_left.entry(l).or_default().insert(r, x);
        }
    }
    let mut out = BTreeMap::new();
    for (l, v) in by_left {
        for (r, x) in right.reduce(&v) {
            out.insert((l, r), x);
        }
    }
    out
}

/// A subspace of `V^{⊗d}` for a base of size `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    base: usize,
    degree: usize,
    ech: Echelon,
}

impl Subspace {
    pub fn zero(base: usize, degree: usize) -> Self {
        Subspace { base, degree, ech: Echelon::new() }
    }

    pub fn full(base: usize, degree: usize) -> Self {
        let mut ech = Echelon::new();
        for c in 0..pow_dim(base, degree) {
            ech.rows.insert(c, std::iter::once((c, Scalar::one())).collect());
        }
        Subspace { base, degree, ech }
    }

    pub fn from_echelon(base: usize, degree: usize, ech: Echelon) -> Self {
        Subspace { base, degree, ech }
    }

    pub fn span<'a>(base: usize, degree: usize, vs: impl IntoIterator<Item = &'a Tensor>) -> Result<Self> {
        let mut s = Subspace::zero(base, degree);
        for v in vs {
            s.insert(v)?;
        }
        Ok(s)
    }

    pub fn span_vectors<'a>(base: usize, degree: usize, vs: impl IntoIterator<Item = &'a Vector>) -> Self {
        let mut ech = Echelon::new();
        ech.extend(vs);
        Subspace { base, degree, ech }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ambient_dim(&self) -> u64 {
        pow_dim(self.base, self.degree)
    }

    pub fn dim(&self) -> usize {
        self.ech.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.ech.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() as u64 == self.ambient_dim()
    }

    pub fn echelon(&self) -> &Echelon {
        &self.ech
    }

    pub fn rows(&self) -> impl Iterator<Item = &Vector> {
        self.ech.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = u64> + '_ {
        self.ech.rows.keys().copied()
    }

    pub fn basis(&self) -> Vec<Tensor> {
        self.rows().map(|r| Tensor::from_vector(self.base, self.degree, r.clone())).collect()
    }

    fn check_shape(&self, base: usize, degree: usize) -> Result<()> {
        if (self.base, self.degree) != (base, degree) {
            return Err(Error::DimensionMismatch(format!(
                "expected base {} degree {}, found base {base} degree {degree}",
                self.base, self.degree
            )));
        }
        Ok(())
    }

    pub fn insert(&mut self, v: &Tensor) -> Result<bool> {
        self.check_shape(v.base(), v.degree())?;
        Ok(self.ech.insert(v.coeffs()))
    }

    pub fn insert_vector(&mut self, v: &Vector) -> bool {
        self.ech.insert(v)
    }

    pub fn reduce(&self, v: &Vector) -> Vector {
        self.ech.reduce(v)
    }

    pub fn contains(&self, v: &Tensor) -> Result<bool> {
        self.check_shape(v.base(), v.degree())?;
        Ok(self.ech.contains(v.coeffs()))
    }

    pub fn contains_vector(&self, v: &Vector) -> bool {
        self.ech.contains(v)
    }

    pub fn contains_subspace(&self, o: &Subspace) -> Result<bool> {
        self.check_shape(o.base, o.degree)?;
        Ok(o.rows().all(|r| self.ech.contains(r)))
    }

    pub fn sum(&self, o: &Subspace) -> Result<Subspace> {
        self.check_shape(o.base, o.degree)?;
        let (big, small) = if self.dim() >= o.dim() { (self, o) } else { (o, self) };
        let mut s = big.clone();
        s.ech.extend(small.rows());
        Ok(s)
    }

    pub fn intersect(&self, o: &Subspace) -> Result<Subspace> {
        self.check_shape(o.base, o.degree)?;
        if self.is_full() {
            return Ok(o.clone());
        }
        if o.is_full() {
            return Ok(self.clone());
        }
        self.perp().sum(&o.perp()).map(|s| s.perp())
    }

    /// Non-pivot codes: the monomial basis of the chosen complement.
    pub fn complement(&self) -> Vec<u64> {
        (0..self.ambient_dim()).filter(|c| !self.ech.is_pivot(*c)).collect()
    }

    /// Annihilator under `⟨e^I, e_J⟩ = δ_{IJ}`.
    pub fn perp(&self) -> Subspace {
        let mut cols: BTreeMap<u64, Vec<(u64, Scalar)>> = BTreeMap::new();
        for (p, row) in &self.ech.rows {
            for (c, x) in row {
                if c != p {
                    cols.entry(*c).or_default().push((*p, x.clone()));
                }
            }
        }
        let mut ech = Echelon::new();
        for c in 0..self.ambient_dim() {
            if self.ech.is_pivot(c) {
                continue;
            }
            let mut u: Vector = std::iter::once((c, Scalar::one())).collect();
            if let Some(entries) = cols.get(&c) {
                for (p, x) in entries {
                    u.insert(*p, -x);
                }
            }
            ech.insert(&u);
        }
        Subspace { base: self.base, degree: self.degree, ech }
    }

    /// `v = Σ coords[c]·e_c + x` with `c` ranging over the complement and `x` in the subspace.
    pub fn complement_decompose(&self, v: &Tensor) -> Result<(Vector, Tensor)> {
        self.check_shape(v.base(), v.degree())?;
        let coords = self.ech.reduce(v.coeffs());
        let rem = v.sub(&Tensor::from_vector(self.base, self.degree, coords.clone()));
        Ok((coords, rem))
    }

    /// `self ⊗ V^{⊗k}` as a subspace of degree `degree + k`.
    pub fn pad_right(&self, k: usize) -> Subspace {
        let shift = pow_dim(self.base, k);
        let mut ech = Echelon::new();
        for (p, row) in &self.ech.rows {
            for s in 0..shift {
                let v: Vector = row.iter().map(|(c, x)| (c * shift + s, x.clone())).collect();
                ech.rows.insert(p * shift + s, v);
            }
        }
        // Rows stay reduced: distinct suffixes never share a column.
        Subspace { base: self.base, degree: self.degree + k, ech }
    }

    /// `V^{⊗k} ⊗ self`.
    pub fn pad_left(&self, k: usize) -> Subspace {
        let shift = pow_dim(self.base, self.degree);
        let mut ech = Echelon::new();
        for pre in 0..pow_dim(self.base, k) {
            for (p, row) in &self.ech.rows {
                let v: Vector = row.iter().map(|(c, x)| (pre * shift + c, x.clone())).collect();
                ech.rows.insert(pre * shift + p, v);
            }
        }
        Subspace { base: self.base, degree: self.degree + k, ech }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qplane_rel() -> Tensor {
        let q = Scalar::param(0);
        Tensor::from_terms(2, 2, &[(&[0, 1], Scalar::one()), (&[1, 0], -q)]).unwrap()
    }

    #[test]
    fn span_drops_duplicates() {
        let r = qplane_rel();
        let s = Subspace::span(2, 2, [&r, &r.scale(&Scalar::int(2))]).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(Subspace::span(2, 2, []).unwrap().dim(), 0);
    }

    #[test]
    fn perp_of_qplane() {
        let s = Subspace::span(2, 2, [&qplane_rel()]).unwrap();
        let p = s.perp();
        assert_eq!(p.dim(), 3);
        let q = Scalar::param(0);
        let cov = Tensor::from_terms(2, 2, &[(&[1, 0], Scalar::one()), (&[0, 1], q)]).unwrap();
        assert!(p.contains(&cov).unwrap());
        assert!(p.contains(&Tensor::monomial(2, &[0, 0])).unwrap());
        assert_eq!(p.perp(), s);
    }

    #[test]
    fn complement_normal_form() {
        let s = Subspace::span(2, 2, [&qplane_rel()]).unwrap();
        assert_eq!(s.complement(), vec![0, 2, 3]);
        let (coords, rem) = s.complement_decompose(&Tensor::monomial(2, &[0, 1])).unwrap();
        assert_eq!(coords.get(&2), Some(&Scalar::param(0)));
        assert!(s.contains(&rem).unwrap());
        let (coords, rem) = s.complement_decompose(&Tensor::monomial(2, &[1, 0])).unwrap();
        assert_eq!(coords.len(), 1);
        assert!(rem.is_zero());
    }

    #[test]
    fn kernel_of_projection() {
        // e0 -> e0, e1 -> e0, e2 -> 0
        let img = |k: Option<u64>| -> Vector { k.map(|k| (k, Scalar::one())).into_iter().collect() };
        let ker = kernel(vec![(0, img(Some(0))), (1, img(Some(0))), (2, img(None))]);
        assert_eq!(ker.dim(), 2);
        let v: Vector = [(0, Scalar::one()), (1, -Scalar::one())].into_iter().collect();
        assert!(ker.contains(&v));
    }

    #[test]
    fn padding_matches_ideal_dims() {
        let s = Subspace::span(2, 2, [&qplane_rel()]).unwrap();
        let three = s.pad_left(1).sum(&s.pad_right(1)).unwrap();
        assert_eq!(three.dim(), 4);
    }
}
