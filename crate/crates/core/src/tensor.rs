//! Sparse tensors over a finite base.
//!
//! A degree-`d` monomial `e_{k1}⊗…⊗e_{kd}` over a base of size `n` is stored
//! as the integer `Σ k_t n^{d-1-t}` (0-based slots). For a fixed degree the
//! numeric order of codes is the lexicographic order of the slots, so code
//! order is the deglex order within one tensor power.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Sparse coordinate vector keyed by monomial code.
pub type Vector = BTreeMap<u64, Scalar>;

pub fn pow_dim(base: usize, degree: usize) -> u64 {
    (base as u64).checked_pow(degree as u32).expect("tensor power too large")
}

/// Adds `k·src` into `dst`, dropping cancelled entries.
pub fn axpy(dst: &mut Vector, k: &Scalar, src: &Vector) {
    if k.is_zero() {
        return;
    }
    for (c, x) in src {
        add_term(dst, *c, &(k * x));
    }
}

/// Adds `k·e_code` into `dst`.
pub fn add_term(dst: &mut Vector, code: u64, k: &Scalar) {
    if k.is_zero() {
        return;
    }
    match dst.get_mut(&code) {
        Some(v) => {
            let s = &*v + k;
            if s.is_zero() {
                dst.remove(&code);
            } else {
                *v = s;
            }
        }
        None => {
            dst.insert(code, k.clone());
        }
    }
}

pub fn scale_vec(v: &Vector, k: &Scalar) -> Vector {
    if k.is_zero() {
        return Vector::new();
    }
    v.iter().map(|(c, x)| (*c, x * k)).collect()
}

/// Slot sequence of a monomial, ordered degree first and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn encode(&self, base: usize) -> u64 {
        self.0.iter().fold(0u64, |acc, &k| {
            debug_assert!(k < base);
            acc * base as u64 + k as u64
        })
    }

    pub fn decode(code: u64, base: usize, degree: usize) -> MultiIndex {
        let mut slots = vec![0usize; degree];
        let mut c = code;
        for t in (0..degree).rev() {
            slots[t] = (c % base as u64) as usize;
            c /= base as u64;
        }
        MultiIndex(slots)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.len().cmp(&o.0.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    base: usize,
    degree: usize,
    coeffs: Vector,
}

impl Tensor {
    pub fn zero(base: usize, degree: usize) -> Self {
        Tensor { base, degree, coeffs: Vector::new() }
    }

    pub fn from_vector(base: usize, degree: usize, mut coeffs: Vector) -> Self {
        coeffs.retain(|_, c| !c.is_zero());
        debug_assert!(coeffs.keys().all(|&k| k < pow_dim(base, degree)));
        Tensor { base, degree, coeffs }
    }

    pub fn monomial(base: usize, slots: &[usize]) -> Self {
        let mut coeffs = Vector::new();
        coeffs.insert(MultiIndex(slots.to_vec()).encode(base), Scalar::one());
        Tensor { base, degree: slots.len(), coeffs }
    }

    pub fn from_terms(base: usize, degree: usize, terms: &[(&[usize], Scalar)]) -> Result<Self> {
        let mut v = Vector::new();
        for (slots, c) in terms {
            if slots.len() != degree || slots.iter().any(|&k| k >= base) {
                return Err(Error::DimensionMismatch(format!("index {slots:?} outside base {base}, degree {degree}")));
            }
            add_term(&mut v, MultiIndex(slots.to_vec()).encode(base), c);
        }
        Ok(Tensor::from_vector(base, degree, v))
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &Vector {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vector {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, slots: &[usize]) -> Scalar {
        self.coeffs.get(&MultiIndex(slots.to_vec()).encode(self.base)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, &Scalar)> + '_ {
        self.coeffs.iter().map(move |(c, x)| (MultiIndex::decode(*c, self.base, self.degree), x))
    }

    pub fn scale(&self, k: &Scalar) -> Tensor {
        Tensor { base: self.base, degree: self.degree, coeffs: scale_vec(&self.coeffs, k) }
    }

    pub fn add(&self, o: &Tensor) -> Tensor {
        assert_eq!((self.base, self.degree), (o.base, o.degree));
        let mut v = self.coeffs.clone();
        axpy(&mut v, &Scalar::one(), &o.coeffs);
        Tensor { base: self.base, degree: self.degree, coeffs: v }
    }

    pub fn sub(&self, o: &Tensor) -> Tensor {
        self.add(&o.scale(&-Scalar::one()))
    }

    /// `self ⊗ o` as a tensor of degree `deg self + deg o`.
    pub fn concat(&self, o: &Tensor) -> Tensor {
        assert_eq!(self.base, o.base);
        let shift = pow_dim(self.base, o.degree);
        let mut v = Vector::new();
        for (a, x) in &self.coeffs {
            for (b, y) in &o.coeffs {
                v.insert(a * shift + b, x * y);
            }
        }
        Tensor { base: self.base, degree: self.degree + o.degree, coeffs: v }
    }

    /// Pairing with a covector of the same shape under `⟨e^I, e_J⟩ = δ`.
    pub fn pair(&self, o: &Tensor) -> Scalar {
        let mut s = Scalar::zero();
        for (c, x) in &self.coeffs {
            if let Some(y) = o.coeffs.get(c) {
                s = &s + &(x * y);
            }
        }
        s
    }
}

/// Composite code of a pair of words under `[W⊗V]^{⊗d} ≅ W^{⊗d}⊗V^{⊗d}`:
/// slot `t` of the result is `j_t·nv + k_t`.
pub fn interleave_code(u: u64, nu: usize, v: u64, nv: usize, degree: usize) -> u64 {
    let mut out = 0u64;
    let (pu, pv) = (pow_dim(nu, degree.saturating_sub(1)), pow_dim(nv, degree.saturating_sub(1)));
    let (mut u, mut v, mut pu, mut pv) = (u, v, pu, pv);
    let pair = (nu * nv) as u64;
    for _ in 0..degree {
        let (j, k) = (u / pu, v / pv);
        u %= pu;
        v %= pv;
        out = out * pair + j * nv as u64 + k;
        pu = (pu / nu as u64).max(1);
        pv = (pv / nv as u64).max(1);
    }
    out
}

/// Inverse of [`interleave_code`].
pub fn deinterleave_code(code: u64, nu: usize, nv: usize, degree: usize) -> (u64, u64) {
    let pair = (nu * nv) as u64;
    let mut digits = vec![0u64; degree];
    let mut c = code;
    for t in (0..degree).rev() {
        digits[t] = c % pair;
        c /= pair;
    }
    let (mut u, mut v) = (0u64, 0u64);
    for d in digits {
        u = u * nu as u64 + d / nv as u64;
        v = v * nv as u64 + d % nv as u64;
    }
    (u, v)
}

/// `interleave(upper, lower)`: the coefficient of `((j1,k1),…,(jd,kd))` is
/// `upper(j1…jd)·lower(k1…kd)`.
pub fn interleave(upper: &Tensor, lower: &Tensor) -> Result<Tensor> {
    if upper.degree != lower.degree {
        return Err(Error::DimensionMismatch(format!(
            "interleave of degrees {} and {}",
            upper.degree, lower.degree
        )));
    }
    let d = upper.degree;
    let mut v = Vector::new();
    for (a, x) in &upper.coeffs {
        for (b, y) in &lower.coeffs {
            v.insert(interleave_code(*a, upper.base, *b, lower.base, d), x * y);
        }
    }
    Ok(Tensor { base: upper.base * lower.base, degree: d, coeffs: v })
}

/// Splits a tensor over `(W⊗V)` into the pair representation
/// `Σ c (w-code, v-code)`.
pub fn deinterleave(t: &Tensor, nu: usize, nv: usize) -> BTreeMap<(u64, u64), Scalar> {
    assert_eq!(t.base, nu * nv);
    t.coeffs
        .iter()
        .map(|(c, x)| (deinterleave_code(*c, nu, nv, t.degree), x.clone()))
        .collect()
}
