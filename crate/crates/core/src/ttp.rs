//! Twisted tensor products driven by a bijection `τ̂` on `B₁⊗A₁`.
//!
//! `τ̂(b_i⊗a_j) = Σ τ̂_{ij}^{lk} b_l⊗a_k` encodes `τ(b_i⊗a_j) = Σ τ̂_{ij}^{lk} a_k⊗b_l`.
//! Codes on `B^{⊗p}⊗A^{⊗q}` are `β·n^q + α`; elements of `A^{⊗d}⊗B^{⊗e}` are
//! stored as maps from `(α, β)` pairs.

use crate::error::{Error, Result};
use crate::linmap::LinearMap;
use crate::presentation::{violation_by, Presentation, Violation};
use crate::products::{interleave_sum, product, swap_factors, ProductKind};
use crate::report::CheckItem;
use crate::scalar::Scalar;
use crate::subspace::{bi_reduce, kernel, Subspace};
use crate::tensor::{add_term, deinterleave, interleave_code, pow_dim, Tensor, Vector};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

pub type Pairs = BTreeMap<(u64, u64), Scalar>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveOrder {
    /// Always resolve the leftmost `b a` adjacency first.
    LeftFirst,
    /// Always resolve the rightmost `b a` adjacency first.
    RightFirst,
}

/// Columns of the extension of `τ̂` to `B^{⊗p}⊗A^{⊗q}` in flip-composed form.
/// `m` is the size of the `B` basis and `n` that of `A`.
pub fn extend_tau(tau_hat: &LinearMap, m: usize, n: usize, p: usize, q: usize, order: MoveOrder) -> Vec<Vector> {
    let cols = tau_hat.columns();
    let (mp, nq) = (pow_dim(m, p), pow_dim(n, q));
    let mut out = Vec::with_capacity((mp * nq) as usize);
    for beta in 0..mp {
        for alpha in 0..nq {
            // Slots hold (is_b, index); the word starts as b…b a…a.
            let mut word: Vec<(bool, usize)> = Vec::with_capacity(p + q);
            let mut bslots = crate::tensor::MultiIndex::decode(beta, m, p).0;
            let aslots = crate::tensor::MultiIndex::decode(alpha, n, q).0;
            word.extend(bslots.drain(..).map(|b| (true, b)));
            word.extend(aslots.into_iter().map(|a| (false, a)));
            let mut state: BTreeMap<Vec<(bool, usize)>, Scalar> = BTreeMap::new();
            state.insert(word, Scalar::one());
            for _ in 0..p * q {
                let mut next: BTreeMap<Vec<(bool, usize)>, Scalar> = BTreeMap::new();
                for (w, c) in state {
                    let pos = match order {
                        MoveOrder::LeftFirst => (0..w.len() - 1).find(|&t| w[t].0 && !w[t + 1].0),
                        MoveOrder::RightFirst => (0..w.len() - 1).rev().find(|&t| w[t].0 && !w[t + 1].0),
                    }
                    .expect("an inversion remains");
                    let (bi, aj) = (w[pos].1, w[pos + 1].1);
                    for (r, x) in &cols[bi * n + aj] {
                        let (l, k) = (r / n, r % n);
                        let mut w2 = w.clone();
                        w2[pos] = (false, k);
                        w2[pos + 1] = (true, l);
                        let e = next.entry(w2).or_insert_with(Scalar::zero);
                        *e = &*e + &(&c * x);
                    }
                }
                next.retain(|_, c| !c.is_zero());
                state = next;
            }
            let mut col = Vector::new();
            for (w, c) in state {
                let a = w[..q].iter().fold(0u64, |acc, s| acc * n as u64 + s.1 as u64);
                let b = w[q..].iter().fold(0u64, |acc, s| acc * m as u64 + s.1 as u64);
                add_term(&mut col, b * nq + a, &c);
            }
            out.push(col);
        }
    }
    out
}

fn columns_to_map(cols: &[Vector], dim: usize) -> LinearMap {
    let mut m = LinearMap::zero(dim, dim);
    for (c, v) in cols.iter().enumerate() {
        for (r, x) in v {
            m.set(*r as usize, c, x.clone());
        }
    }
    m
}

pub struct TwistingMap {
    b: Presentation,
    a: Presentation,
    tau_hat: LinearMap,
    validated_up_to: usize,
    cache: Mutex<HashMap<(usize, usize), Arc<Vec<Vector>>>>,
}

impl Clone for TwistingMap {
    fn clone(&self) -> Self {
        TwistingMap {
            b: self.b.clone(),
            a: self.a.clone(),
            tau_hat: self.tau_hat.clone(),
            validated_up_to: self.validated_up_to,
            cache: Mutex::new(self.cache.lock().expect("cache lock").clone()),
        }
    }
}

impl std::fmt::Debug for TwistingMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TwistingMap")
            .field("b", &self.b.name())
            .field("a", &self.a.name())
            .field("tau_hat", &self.tau_hat)
            .field("validated_up_to", &self.validated_up_to)
            .finish()
    }
}

/// A relation that the extension carries outside the target ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatibilityWitness {
    pub b_degree: usize,
    pub a_degree: usize,
    pub remainder: Pairs,
}

impl TwistingMap {
    /// Builds and validates a twisting map; `τ̂` acts on `B₁⊗A₁`.
    pub fn from_matrix(tau_hat: LinearMap, a: &Presentation, b: &Presentation, up_to: usize) -> Result<TwistingMap> {
        let t = TwistingMap::unchecked(tau_hat, a, b)?;
        if let Some(w) = t.compatibility_violation(up_to)? {
            return Err(Error::CheckFailed(format!(
                "τ̂ does not preserve the ideals at bidegree ({}, {}); remainder has {} terms",
                w.b_degree,
                w.a_degree,
                w.remainder.len()
            )));
        }
        Ok(TwistingMap { validated_up_to: up_to, ..t })
    }

    /// Shape and invertibility checks only.
    pub fn unchecked(tau_hat: LinearMap, a: &Presentation, b: &Presentation) -> Result<TwistingMap> {
        let dim = a.dim() * b.dim();
        if tau_hat.rows() != dim || tau_hat.cols() != dim {
            return Err(Error::DimensionMismatch(format!("τ̂ must be {dim}x{dim}")));
        }
        tau_hat.inverse()?;
        let field = a.field().join(b.field())?;
        Ok(TwistingMap {
            b: b.with_field(field.clone())?,
            a: a.with_field(field)?,
            tau_hat,
            validated_up_to: 0,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn flip(a: &Presentation, b: &Presentation) -> Result<TwistingMap> {
        TwistingMap::from_matrix(LinearMap::identity(a.dim() * b.dim()), a, b, a.cap().min(b.cap()))
    }

    pub fn a(&self) -> &Presentation {
        &self.a
    }

    pub fn b(&self) -> &Presentation {
        &self.b
    }

    pub fn tau_hat(&self) -> &LinearMap {
        &self.tau_hat
    }

    pub fn validated_up_to(&self) -> usize {
        self.validated_up_to
    }

    pub fn cap(&self) -> usize {
        self.a.cap().min(self.b.cap())
    }

    pub fn is_flip(&self) -> bool {
        self.tau_hat.is_identity()
    }

    pub fn columns(&self, p: usize, q: usize) -> Arc<Vec<Vector>> {
        let mut cache = self.cache.lock().expect("cache lock");
        cache
            .entry((p, q))
            .or_insert_with(|| Arc::new(extend_tau(&self.tau_hat, self.b.dim(), self.a.dim(), p, q, MoveOrder::LeftFirst)))
            .clone()
    }

    /// Extension to `B^{⊗p}⊗A^{⊗q}` in flip-composed form.
    pub fn extend(&self, p: usize, q: usize) -> LinearMap {
        let dim = (pow_dim(self.b.dim(), p) * pow_dim(self.a.dim(), q)) as usize;
        columns_to_map(&self.columns(p, q), dim)
    }

    /// First bidegree where `J_p⊗A^{⊗q}` or `B^{⊗p}⊗I_q` is not carried into `J_p⊗A^{⊗q} + B^{⊗p}⊗I_q`.
    pub fn compatibility_violation(&self, up_to: usize) -> Result<Option<CompatibilityWitness>> {
        let (m, n) = (self.b.dim(), self.a.dim());
        for total in 2..=up_to.min(self.cap()) {
            for p in 1..total {
                let q = total - p;
                let cols = self.columns(p, q);
                let (jp, iq) = (self.b.ideal(p)?, self.a.ideal(q)?);
                let nq = pow_dim(n, q);
                let image = |v: &Pairs| -> Pairs {
                    let mut out = Vector::new();
                    for ((beta, alpha), c) in v {
                        crate::tensor::axpy(&mut out, c, &cols[(beta * nq + alpha) as usize]);
                    }
                    out.into_iter().map(|(code, x)| ((code / nq, code % nq), x)).collect()
                };
                let mut probes: Vec<Pairs> = Vec::new();
                for row in jp.rows() {
                    for alpha in 0..nq {
                        probes.push(row.iter().map(|(b, x)| ((*b, alpha), x.clone())).collect());
                    }
                }
                for row in iq.rows() {
                    for beta in 0..pow_dim(m, p) {
                        probes.push(row.iter().map(|(a, x)| ((beta, *a), x.clone())).collect());
                    }
                }
                for probe in probes {
                    let rem = bi_reduce(&image(&probe), jp.echelon(), iq.echelon());
                    if !rem.is_empty() {
                        return Ok(Some(CompatibilityWitness { b_degree: p, a_degree: q, remainder: rem }));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Product in `A⊗_τB` of homogeneous elements, without reduction.
    pub fn multiply(&self, x: &BiElement, y: &BiElement) -> BiElement {
        let (m, n) = (self.b.dim(), self.a.dim());
        let cols = self.columns(x.b_deg, y.a_deg);
        let nq = pow_dim(n, y.a_deg);
        let mb = pow_dim(m, y.b_deg);
        let mut out: Pairs = Pairs::new();
        for ((a1, b1), c1) in &x.coeffs {
            for ((a2, b2), c2) in &y.coeffs {
                let c = c1 * c2;
                for (code, t) in &cols[(b1 * nq + a2) as usize] {
                    let (bm, am) = (code / nq, code % nq);
                    let key = (a1 * nq + am, bm * mb + b2);
                    let e = out.entry(key).or_insert_with(Scalar::zero);
                    *e = &*e + &(&c * t);
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        BiElement { a_deg: x.a_deg + y.a_deg, b_deg: x.b_deg + y.b_deg, coeffs: out }
    }

    /// Normal form in `A_d⊗B_e`.
    pub fn reduce(&self, x: &BiElement) -> Result<BiElement> {
        let coeffs = bi_reduce(&x.coeffs, self.a.ideal(x.a_deg)?.echelon(), self.b.ideal(x.b_deg)?.echelon());
        Ok(BiElement { coeffs, ..x.clone() })
    }

    /// Product followed by reduction; degrees beyond the cap are rejected.
    pub fn multiply_reduced(&self, x: &BiElement, y: &BiElement) -> Result<BiElement> {
        let d = x.a_deg.max(x.b_deg) + y.a_deg.max(y.b_deg);
        if d > self.cap() {
            return Err(Error::DegreeCap { degree: d, cap: self.cap() });
        }
        self.reduce(&self.multiply(x, y))
    }

    /// τ-product of the generators listed in an interleaved word, in `A^{⊗r}⊗B^{⊗r}`.
    pub fn word_product(&self, word: u64, r: usize) -> BiElement {
        let base = (self.a.dim() * self.b.dim()) as u64;
        let m = self.b.dim() as u64;
        let mut acc = BiElement::unit();
        let digits = crate::tensor::MultiIndex::decode(word, base as usize, r).0;
        for g in digits {
            let g = g as u64;
            acc = self.multiply(&acc, &BiElement::generator(g / m, g % m));
        }
        acc
    }

    /// Matrix relating τ-words of length `r` to untwisted words.
    pub fn gamma(&self, r: usize) -> LinearMap {
        let (n, m) = (self.a.dim(), self.b.dim());
        let dim = pow_dim(n * m, r);
        let cols: Vec<Vector> = (0..dim)
            .map(|w| {
                self.word_product(w, r)
                    .coeffs
                    .into_iter()
                    .map(|((a, b), x)| (interleave_code(a, n, b, m, r), x))
                    .collect()
            })
            .collect();
        columns_to_map(&cols, dim as usize)
    }

    /// The twisted product `A∘_τB` as a presentation on `a_i⊗b_j`.
    pub fn presentation(&self) -> Result<Presentation> {
        let (n, m) = (self.a.dim(), self.b.dim());
        let mut comps = Vec::new();
        for d in 0..=self.cap() {
            let (ia, jb) = (self.a.ideal(d)?.echelon().clone(), self.b.ideal(d)?.echelon().clone());
            let images = (0..pow_dim(n * m, d)).map(|w| {
                let prod = self.word_product(w, d);
                let rem = bi_reduce(&prod.coeffs, &ia, &jb);
                let v: Vector = rem.into_iter().map(|((a, b), x)| (interleave_code(a, n, b, m, d), x)).collect();
                (w, v)
            });
            comps.push(Subspace::from_echelon(n * m, d, kernel(images)));
        }
        let name = if self.is_flip() {
            format!("{}∘{}", self.a.name(), self.b.name())
        } else {
            format!("{}∘τ{}", self.a.name(), self.b.name())
        };
        let gens = self.a.gens().iter().flat_map(|x| self.b.gens().iter().map(move |y| format!("{x}_{y}"))).collect();
        Ok(Presentation::from_components(name, self.a.field().clone(), gens, comps))
    }

    /// `B∘_{τ⁻¹}A`, with `τ̂' = F τ̂⁻¹ F` for the factor flip `F`.
    pub fn opposite(&self) -> Result<TwistingMap> {
        let (n, m) = (self.a.dim(), self.b.dim());
        let f_ba = swap_factors(m, n);
        let f_ab = swap_factors(n, m);
        let t = f_ba.compose(&self.tau_hat.inverse()?)?.compose(&f_ab)?;
        let mut out = TwistingMap::unchecked(t, &self.b, &self.a)?;
        out.validated_up_to = self.validated_up_to;
        Ok(out)
    }

    /// Degree-one map `B₁⊗A₁ → A₁⊗B₁`, `b⊗a ↦ τ(b⊗a)`; the isomorphism
    /// `B∘_{τ⁻¹}A ≅ A∘_τB` on generators.
    pub fn opposite_iso(&self) -> Result<LinearMap> {
        swap_factors(self.b.dim(), self.a.dim()).compose(&self.tau_hat)
    }
}

/// Target `A∘B` or `A∘_τB` of a map, with ideal membership decided without
/// building the product presentation.
#[derive(Clone, Debug)]
pub enum ProductTarget {
    Plain(Presentation, Presentation),
    Twisted(TwistingMap),
}

impl ProductTarget {
    pub fn new(a: &Presentation, b: &Presentation, tau_hat: Option<&LinearMap>) -> Result<Self> {
        Ok(match tau_hat {
            None => ProductTarget::Plain(a.clone(), b.clone()),
            Some(t) => ProductTarget::Twisted(TwistingMap::unchecked(t.clone(), a, b)?),
        })
    }

    fn factors(&self) -> (&Presentation, &Presentation) {
        match self {
            ProductTarget::Plain(a, b) => (a, b),
            ProductTarget::Twisted(t) => (&t.a, &t.b),
        }
    }

    pub fn dim(&self) -> usize {
        let (a, b) = self.factors();
        a.dim() * b.dim()
    }

    pub fn cap(&self) -> usize {
        let (a, b) = self.factors();
        a.cap().min(b.cap())
    }

    /// Normal form in `A_d⊗B_d`, re-interleaved on the product generators.
    pub fn remainder(&self, t: &Tensor) -> Result<Tensor> {
        let (a, b) = self.factors();
        let (n, m, d) = (a.dim(), b.dim(), t.degree());
        if t.base() != n * m {
            return Err(Error::DimensionMismatch("tensor does not live on the product generators".into()));
        }
        let pairs = match self {
            ProductTarget::Plain(..) => deinterleave(t, n, m),
            ProductTarget::Twisted(tw) => {
                let mut acc = Pairs::new();
                for (w, c) in t.coeffs() {
                    for (key, x) in tw.word_product(*w, d).coeffs {
                        let e = acc.entry(key).or_insert_with(Scalar::zero);
                        *e = &*e + &(c * &x);
                    }
                }
                acc.retain(|_, x| !x.is_zero());
                acc
            }
        };
        let rem = bi_reduce(&pairs, a.ideal(d)?.echelon(), b.ideal(d)?.echelon());
        let v: Vector = rem.into_iter().map(|((x, y), c)| (interleave_code(x, n, y, m, d), c)).collect();
        Ok(Tensor::from_vector(n * m, d, v))
    }

    pub fn presentation(&self) -> Result<Presentation> {
        match self {
            ProductTarget::Plain(a, b) => product(ProductKind::Circ, a, b),
            ProductTarget::Twisted(t) => t.presentation(),
        }
    }
}

/// First relation of `src` whose image under `alpha` leaves the target ideal.
pub fn product_violation(src: &Presentation, target: &ProductTarget, alpha: &LinearMap, up_to: usize) -> Result<Option<Violation>> {
    if alpha.rows() != target.dim() {
        return Err(Error::DimensionMismatch("map does not match the product generators".into()));
    }
    violation_by(src, alpha, up_to.min(target.cap()), |t| target.remainder(t))
}

/// Homogeneous element of `A^{⊗a_deg}⊗B^{⊗b_deg}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiElement {
    pub a_deg: usize,
    pub b_deg: usize,
    pub coeffs: Pairs,
}

impl BiElement {
    pub fn unit() -> Self {
        BiElement { a_deg: 0, b_deg: 0, coeffs: std::iter::once(((0, 0), Scalar::one())).collect() }
    }

    pub fn generator(a: u64, b: u64) -> Self {
        BiElement { a_deg: 1, b_deg: 1, coeffs: std::iter::once(((a, b), Scalar::one())).collect() }
    }

    pub fn monomial(a: u64, a_deg: usize, b: u64, b_deg: usize) -> Self {
        BiElement { a_deg, b_deg, coeffs: std::iter::once(((a, b), Scalar::one())).collect() }
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        let coeffs = self.coeffs.iter().filter(|_| !k.is_zero()).map(|(key, x)| (*key, x * k)).collect();
        BiElement { coeffs, ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Extension consistency, associativity on normal monomials, Hilbert data, Γ invertibility and the flip comparison.
pub fn structural_checks(t: &TwistingMap, up_to: usize) -> Result<Vec<CheckItem>> {
    let d_max = up_to.min(t.cap());
    let (m, n) = (t.b.dim(), t.a.dim());
    let mut items = Vec::new();

    let violation = t.compatibility_violation(d_max)?;
    items.push(CheckItem::new(
        "ideal compatibility of extensions",
        violation.is_none(),
        violation.map_or("all bidegrees".to_string(), |w| format!("fails at ({}, {})", w.b_degree, w.a_degree)),
    ));

    let mut order_ok = true;
    let mut unit_ok = true;
    for p in 0..=d_max {
        for q in 0..=d_max - p {
            let left = t.columns(p, q);
            let right = extend_tau(&t.tau_hat, m, n, p, q, MoveOrder::RightFirst);
            order_ok &= *left == right;
            if p == 0 || q == 0 {
                unit_ok &= columns_to_map(&left, left.len()).is_identity();
            }
        }
    }
    items.push(CheckItem::new("extension independent of move order", order_ok, format!("p+q <= {d_max}")));
    items.push(CheckItem::new("unit slots fixed", unit_ok, ""));

    let mut mu_ok = true;
    for p1 in 1..d_max {
        for p2 in 1..=d_max - p1 {
            for q in 1..=d_max.saturating_sub(p1 + p2) {
                mu_ok &= mu_identity_holds(t, p1, p2, q);
            }
        }
    }
    items.push(CheckItem::new("multiplicativity of the extension", mu_ok, ""));

    let mut assoc_failure = None;
    'outer: for d1 in 1..=d_max {
        for d2 in 1..=d_max - d1 {
            for d3 in 1..=d_max.saturating_sub(d1 + d2) {
                for x in normal_basis(t, d1)? {
                    for y in normal_basis(t, d2)? {
                        let xy = t.reduce(&t.multiply(&x, &y))?;
                        for z in normal_basis(t, d3)? {
                            let l = t.reduce(&t.multiply(&xy, &z))?;
                            let yz = t.reduce(&t.multiply(&y, &z))?;
                            let r = t.reduce(&t.multiply(&x, &yz))?;
                            if l != r {
                                assoc_failure = Some((d1, d2, d3));
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
    }
    items.push(CheckItem::new(
        "associativity",
        assoc_failure.is_none(),
        assoc_failure.map_or(format!("degrees up to {d_max}"), |d| format!("fails at degrees {d:?}")),
    ));

    let twisted = t.presentation()?;
    let mut hilbert_ok = true;
    for d in 0..=d_max {
        hilbert_ok &= twisted.hilbert(d)? == t.a.hilbert(d)? * t.b.hilbert(d)?;
    }
    items.push(CheckItem::new("graded components equal those of the untwisted product", hilbert_ok, ""));

    let mut gamma_ok = true;
    for r in 1..=d_max {
        gamma_ok &= t.gamma(r).is_invertible();
    }
    items.push(CheckItem::new("Γ invertible", gamma_ok, format!("r <= {d_max}")));

    let flip = TwistingMap::flip(&t.a, &t.b)?;
    let flip_pres = flip.presentation()?;
    let circ = product(ProductKind::Circ, &t.a, &t.b)?;
    let mut flip_ok = true;
    for d in 0..=d_max {
        flip_ok &= flip_pres.ideal(d)? == circ.ideal(d)?;
    }
    items.push(CheckItem::new("flip twisting reproduces ∘", flip_ok, ""));
    Ok(items)
}

/// `τ_{p1+p2,q} = (τ_{p1,q}⊗id)(id⊗τ_{p2,q})` read on flip-composed forms.
fn mu_identity_holds(t: &TwistingMap, p1: usize, p2: usize, q: usize) -> bool {
    let (m, n) = (t.b.dim() as u64, t.a.dim() as u64);
    let whole = t.columns(p1 + p2, q);
    let inner = t.columns(p2, q);
    let outer = t.columns(p1, q);
    let (m2, nq) = (m.pow(p2 as u32), n.pow(q as u32));
    for b1 in 0..m.pow(p1 as u32) {
        for b2 in 0..m2 {
            for a in 0..nq {
                let mut acc = Vector::new();
                for (code, x) in &inner[(b2 * nq + a) as usize] {
                    let (b2p, ap) = (code / nq, code % nq);
                    for (code2, y) in &outer[(b1 * nq + ap) as usize] {
                        let (b1p, app) = (code2 / nq, code2 % nq);
                        add_term(&mut acc, (b1p * m2 + b2p) * nq + app, &(x * y));
                    }
                }
                if acc != whole[((b1 * m2 + b2) * nq + a) as usize] {
                    return false;
                }
            }
        }
    }
    true
}

fn normal_basis(t: &TwistingMap, d: usize) -> Result<Vec<BiElement>> {
    let am = t.a.normal_monomials(d)?;
    let bm = t.b.normal_monomials(d)?;
    Ok(am.iter().flat_map(|a| bm.iter().map(move |b| BiElement::monomial(*a, d, *b, d))).collect())
}

/// Isomorphism check `B∘_{τ⁻¹}A ≅ A∘_τB` on generators.
pub fn opposite_checks(t: &TwistingMap) -> Result<Vec<CheckItem>> {
    let op = t.opposite()?;
    let iso = t.opposite_iso()?;
    let iso_ok = crate::products::presentations_equal(&op.presentation()?, &t.presentation()?, &iso)?;
    let back = op.opposite()?;
    Ok(vec![
        CheckItem::new("τ-product iso to the opposite product", iso_ok, ""),
        CheckItem::new("double opposite is the identity", back.tau_hat == t.tau_hat, ""),
    ])
}

/// `A∘B` components computed directly; used to compare against the flip twisting.
pub fn untwisted_component(a: &Presentation, b: &Presentation, d: usize) -> Result<Subspace> {
    interleave_sum(a.ideal(d)?, b.ideal(d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;
    use crate::tensor::Tensor;

    fn plane(f: &FieldSpec, q: &str, gens: [&str; 2]) -> Presentation {
        let q = f.param(q).unwrap();
        let rel = Tensor::from_terms(2, 2, &[(&[0, 1], Scalar::one()), (&[1, 0], -q)]).unwrap();
        Presentation::new("P", f.clone(), gens.iter().map(|s| s.to_string()).collect(), &[rel], 4).unwrap()
    }

    fn field() -> FieldSpec {
        FieldSpec::new(&["q", "p"]).unwrap()
    }

    #[test]
    fn flip_extension_is_block_permutation() {
        let t = extend_tau(&LinearMap::identity(4), 2, 2, 2, 1, MoveOrder::LeftFirst);
        for (c, v) in t.iter().enumerate() {
            assert_eq!(v.len(), 1);
            assert_eq!(*v.keys().next().unwrap(), c as u64);
        }
    }

    #[test]
    fn scaling_twist_product() {
        let f = field();
        let a = plane(&f, "q", ["x", "y"]);
        let b = plane(&f, "q", ["u", "v"]);
        let p = f.param("p").unwrap();
        let t = TwistingMap::from_matrix(LinearMap::identity(4).scale(&p), &a, &b, 4).unwrap();
        // (x⊗u)·(y⊗v) = p·(xy⊗uv)
        let prod = t.multiply(&BiElement::generator(0, 0), &BiElement::generator(1, 1));
        assert_eq!(prod, BiElement::monomial(1, 2, 1, 2).scale(&p));
        let unit = t.multiply(&BiElement::generator(0, 1), &BiElement::unit());
        assert_eq!(unit, BiElement::generator(0, 1));
    }

    #[test]
    fn beta_alpha_twist_passes_checks() {
        let f = field();
        let a = plane(&f, "q", ["x", "y"]);
        let b = plane(&f, "p", ["u", "v"]);
        let alpha = LinearMap::diag(&[Scalar::int(2), Scalar::int(3)]);
        let beta = LinearMap::diag(&[Scalar::int(5), f.param("q").unwrap()]);
        let t = TwistingMap::from_matrix(beta.kron(&alpha), &a, &b, 3).unwrap();
        let ext = t.extend(2, 1);
        assert_eq!(ext, beta.kron(&beta).kron(&alpha.pow(2).unwrap()));
        for item in structural_checks(&t, 3).unwrap() {
            assert!(item.passed, "{}: {}", item.name, item.detail);
        }
        for item in opposite_checks(&t).unwrap() {
            assert!(item.passed, "{}", item.name);
        }
    }

    #[test]
    fn perturbed_twist_rejected() {
        let f = field();
        let a = plane(&f, "q", ["x", "y"]);
        let b = plane(&f, "p", ["u", "v"]);
        let mut t = LinearMap::identity(4);
        t.set(0, 1, Scalar::int(1));
        assert!(matches!(TwistingMap::from_matrix(t, &a, &b, 3), Err(Error::CheckFailed(_))));
        let mut z = LinearMap::identity(4);
        z.set(2, 2, Scalar::zero());
        assert!(matches!(TwistingMap::from_matrix(z, &a, &b, 3), Err(Error::Singular(_))));
    }

    #[test]
    fn flip_matches_circ() {
        let f = field();
        let a = plane(&f, "q", ["x", "y"]);
        let b = plane(&f, "p", ["u", "v"]);
        let t = TwistingMap::flip(&a, &b).unwrap();
        let pres = t.presentation().unwrap();
        for d in 0..=4 {
            assert_eq!(pres.ideal(d).unwrap(), &untwisted_component(&a, &b, d).unwrap());
        }
        assert!(t.gamma(3).is_identity());
    }
}
