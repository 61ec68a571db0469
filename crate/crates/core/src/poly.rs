//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept sorted by descending lexicographic order of their exponent
//! vectors, so the first term is the leading one.

use num_rational::BigRational;
use num_traits::{One, Zero};
use smallvec::SmallVec;
use std::collections::BTreeMap;

/// Exponent vector with trailing zeros trimmed. The derived order is the
/// lexicographic order on the declared variable list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Mono(SmallVec<[u32; 4]>);

impl Mono {
    pub fn one() -> Self {
        Mono(SmallVec::new())
    }

    pub fn var(i: usize, e: u32) -> Self {
        if e == 0 {
            return Mono::one();
        }
        let mut v: SmallVec<[u32; 4]> = SmallVec::from_elem(0, i + 1);
        v[i] = e;
        Mono(v)
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn trimmed(mut v: SmallVec<[u32; 4]>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        Mono(v)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let n = self.0.len().max(o.0.len());
        let v = (0..n).map(|i| self.exp(i) + o.exp(i)).collect();
        Mono(v)
    }

    pub fn div(&self, o: &Mono) -> Option<Mono> {
        if o.0.len() > self.0.len() {
            return None;
        }
        let mut v = self.0.clone();
        for (i, e) in o.0.iter().enumerate() {
            if v[i] < *e {
                return None;
            }
            v[i] -= e;
        }
        Some(Mono::trimmed(v))
    }

    fn without(&self, var: usize) -> Mono {
        if var >= self.0.len() {
            return self.clone();
        }
        let mut v = self.0.clone();
        v[var] = 0;
        Mono::trimmed(v)
    }

    fn lowest_var(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: Vec<(Mono, BigRational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Mono::one(), c)] }
        }
    }

    pub fn var(i: usize) -> Self {
        Poly { terms: vec![(Mono::var(i, 1), BigRational::one())] }
    }

    pub fn monomial(m: Mono, c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    fn from_map(map: BTreeMap<Mono, BigRational>) -> Self {
        let terms = map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Mono, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 if self.terms[0].0.is_one() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn leading_mono(&self) -> Option<&Mono> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    fn mul_term(&self, m: &Mono, k: &BigRational) -> Poly {
        Poly { terms: self.terms.iter().map(|(mm, c)| (mm.mul(m), c * k)).collect() }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.merge(o, true)
    }

    fn merge(&self, o: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let ord = match (self.terms.get(i), o.terms.get(j)) {
                (Some(a), Some(b)) => b.0.cmp(&a.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let (m, c) = &o.terms[j];
                    out.push((m.clone(), if negate { -c } else { c.clone() }));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &self.terms[i].1 - &o.terms[j].1 } else { &self.terms[i].1 + &o.terms[j].1 };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { terms: out }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        let mut acc: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let e = acc.entry(ma.mul(mb)).or_insert_with(BigRational::zero);
                *e += ca * cb;
            }
        }
        Poly::from_map(acc)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&(BigRational::one() / c)));
        }
        let (dm, dc) = (&d.terms[0].0, &d.terms[0].1);
        let mut rem = self.clone();
        let mut quot: Vec<(Mono, BigRational)> = Vec::new();
        while let Some((rm, rc)) = rem.terms.first() {
            let m = rm.div(dm)?;
            let c = rc / dc;
            rem = rem.sub(&d.mul_term(&m, &c));
            quot.push((m, c));
        }
        Some(Poly { terms: quot })
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&(BigRational::one() / c)),
        }
    }

    fn only_var(&self, v: usize) -> bool {
        self.terms.iter().all(|(m, _)| m.exps().iter().enumerate().all(|(i, e)| i == v || *e == 0))
    }

    /// Remainder of univariate division by a monic divisor.
    fn rem_monic(&self, d: &Poly) -> Poly {
        let (dm, _) = &d.terms[0];
        let mut rem = self.clone();
        loop {
            let Some(pos) = rem.terms.iter().position(|(m, _)| m.div(dm).is_some()) else { return rem };
            let (m, c) = rem.terms[pos].clone();
            rem = rem.sub(&d.mul_term(&m.div(dm).unwrap(), &c));
        }
    }

    fn lowest_var(&self) -> Option<usize> {
        self.terms.iter().filter_map(|(m, _)| m.lowest_var()).min()
    }

    fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut maps: Vec<BTreeMap<Mono, BigRational>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            maps[m.exp(v) as usize].insert(m.without(v), c.clone());
        }
        maps.into_iter().map(Poly::from_map).collect()
    }

    fn from_coeffs_in(v: usize, coeffs: &[Poly]) -> Poly {
        let mut acc: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (e, p) in coeffs.iter().enumerate() {
            let shift = Mono::var(v, e as u32);
            for (m, c) in &p.terms {
                acc.insert(m.mul(&shift), c.clone());
            }
        }
        Poly::from_map(acc)
    }

    /// Largest exponent of each variable occurring in the polynomial.
    pub fn max_exps(&self) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::new();
        for (m, _) in &self.terms {
            for (i, e) in m.exps().iter().enumerate() {
                if i >= out.len() {
                    out.resize(i + 1, 0);
                }
                out[i] = out[i].max(*e);
            }
        }
        out
    }
}

fn content_in(p: &Poly, v: usize) -> Poly {
    let mut g = Poly::zero();
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_in(p: &Poly, v: usize) -> Poly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

fn pseudo_rem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let bc = b.coeffs_in(v);
    let n = bc.len() - 1;
    let lb = &bc[n];
    let mut r = a.coeffs_in(v);
    while r.len() > n && !r.is_empty() {
        let k = r.len() - 1 - n;
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (i, bi) in bc.iter().enumerate() {
            r[i + k] = r[i + k].sub(&lr.mul(bi));
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    Poly::from_coeffs_in(v, &r)
}

/// Monic Euclidean algorithm for polynomials in a single variable.
fn euclid(a: &Poly, b: &Poly) -> Poly {
    let (mut r0, mut r1) = (a.monic(), b.monic());
    while !r1.is_zero() {
        let r = r0.rem_monic(&r1);
        r0 = r1;
        r1 = r.monic();
    }
    r0
}

/// Monic greatest common divisor, by recursive primitive remainder sequences.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.terms.len() <= b.terms.len() {
        if b.div_exact(a).is_some() {
            return a.monic();
        }
    } else if a.div_exact(b).is_some() {
        return b.monic();
    }
    let v = match (a.lowest_var(), b.lowest_var()) {
        (Some(x), Some(y)) => x.min(y),
        _ => unreachable!("non-constant polynomials carry a variable"),
    };
    let (da, db) = (a.degree_in(v), b.degree_in(v));
    if da == 0 {
        return gcd(a, &content_in(b, v));
    }
    if db == 0 {
        return gcd(&content_in(a, v), b);
    }
    if a.only_var(v) && b.only_var(v) {
        return euclid(a, b);
    }
    let g = gcd(&content_in(a, v), &content_in(b, v));
    let (pa, pb) = (primitive_in(a, v), primitive_in(b, v));
    let (mut r0, mut r1) = if da >= db { (pa, pb) } else { (pb, pa) };
    loop {
        let r = pseudo_rem(&r0, &r1, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            r1 = Poly::one();
            break;
        }
        r0 = r1;
        r1 = primitive_in(&r, v).monic();
    }
    g.mul(&primitive_in(&r1, v)).monic()
}
