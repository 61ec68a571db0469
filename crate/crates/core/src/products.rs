//! Monoidal products, the dual functor, the mixing functors and unit objects.
//!
//! A generator of a product over `V⊗W` sits at code `i·dim W + j`.

use crate::error::{Error, Result};
use crate::linmap::{apply_power, LinearMap};
use crate::presentation::Presentation;
use crate::scalar::FieldSpec;
use crate::subspace::{Echelon, Subspace};
use crate::tensor::{interleave_code, Vector};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductKind {
    Circ,
    Odot,
    Bullet(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MixKind {
    Right,
    Left,
    Diamond,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitKind {
    /// Ground field, no degree-one part.
    I,
    /// Free algebra on one generator.
    K,
    /// One generator with `e^m = 0`.
    U(usize),
}

pub fn unit(kind: UnitKind, cap: usize) -> Result<Presentation> {
    let e = vec!["e".to_string()];
    match kind {
        UnitKind::I => Ok(Presentation::trivial_unit(cap)),
        UnitKind::K => Presentation::new("K", FieldSpec::rationals(), e, &[], cap),
        UnitKind::U(m) => {
            if m < 2 {
                return Err(Error::Precondition(format!("U_m needs m >= 2, got {m}")));
            }
            let mut rels = BTreeMap::new();
            if m <= cap {
                rels.insert(m, Subspace::full(1, m));
            }
            let name = if m == 2 { "U".to_string() } else { format!("U{m}") };
            Presentation::from_generators(name, FieldSpec::rationals(), e, rels, cap)
        }
    }
}

fn pair_names(a: &[String], b: &[String]) -> Vec<String> {
    a.iter().flat_map(|x| b.iter().map(move |y| format!("{x}_{y}"))).collect()
}

pub fn dual_names(a: &[String]) -> Vec<String> {
    a.iter().map(|x| format!("{x}'")).collect()
}

fn joint(a: &Presentation, b: &Presentation) -> Result<(FieldSpec, usize)> {
    Ok((a.field().join(b.field())?, a.cap().min(b.cap())))
}

/// All `interleave(u, v)` for `u` in `upper` and `v` in `lower`, echelonized.
pub fn interleave_span(upper: &Subspace, lower: &Subspace) -> Result<Subspace> {
    if upper.degree() != lower.degree() {
        return Err(Error::DimensionMismatch("interleave of different degrees".into()));
    }
    let (nu, nv, d) = (upper.base(), lower.base(), upper.degree());
    let mut ech = Echelon::new();
    for u in upper.rows() {
        for v in lower.rows() {
            let mut w = Vector::new();
            for (a, x) in u {
                for (b, y) in v {
                    w.insert(interleave_code(*a, nu, *b, nv, d), x * y);
                }
            }
            ech.insert(&w);
        }
    }
    Ok(Subspace::from_echelon(nu * nv, d, ech))
}

/// `X⊗W^{⊗d} + V^{⊗d}⊗Y` under the interleaving identification.
pub fn interleave_sum(x: &Subspace, y: &Subspace) -> Result<Subspace> {
    let d = x.degree();
    let left = interleave_span(x, &Subspace::full(y.base(), d))?;
    let right = interleave_span(&Subspace::full(x.base(), d), y)?;
    left.sum(&right)
}

fn is_generated_in(p: &Presentation, m: usize) -> Result<bool> {
    for d in 0..=p.cap() {
        if d != m && !p.minimal_generators(d)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn product(kind: ProductKind, a: &Presentation, b: &Presentation) -> Result<Presentation> {
    if a.is_trivial_unit() || b.is_trivial_unit() {
        if kind != ProductKind::Circ {
            return Err(Error::Precondition("the trivial unit only takes part in the ∘ product".into()));
        }
        let other = if a.is_trivial_unit() { b } else { a };
        return Ok(other.with_cap(a.cap().min(b.cap())));
    }
    let (field, cap) = joint(a, b)?;
    let gens = pair_names(a.gens(), b.gens());
    match kind {
        ProductKind::Circ => {
            let comps = (0..=cap)
                .map(|d| interleave_sum(a.ideal(d)?, b.ideal(d)?))
                .collect::<Result<Vec<_>>>()?;
            Ok(Presentation::from_components(format!("{}∘{}", a.name(), b.name()), field, gens, comps))
        }
        ProductKind::Odot => {
            let comps = (0..=cap)
                .map(|d| interleave_span(a.ideal(d)?, b.ideal(d)?))
                .collect::<Result<Vec<_>>>()?;
            Ok(Presentation::from_components(format!("{}⊙{}", a.name(), b.name()), field, gens, comps))
        }
        ProductKind::Bullet(m) => {
            if m < 2 {
                return Err(Error::Precondition("• needs m >= 2".into()));
            }
            for p in [a, b] {
                if !is_generated_in(p, m)? {
                    return Err(Error::Precondition(format!("{} is not generated in degree {m}", p.name())));
                }
            }
            let mut rels = BTreeMap::new();
            if m <= cap {
                rels.insert(m, interleave_span(a.ideal(m)?, b.ideal(m)?)?);
            }
            Presentation::from_generators(format!("{}•{}", a.name(), b.name()), field, gens, rels, cap)
        }
    }
}

/// Perp of the degree-`d` ideal component, with the convention that degrees
/// 0 and 1 contribute nothing.
fn relation_perp(p: &Presentation, d: usize) -> Result<Subspace> {
    if d < 2 {
        return Ok(Subspace::zero(p.dim(), d));
    }
    Ok(p.ideal(d)?.perp())
}

pub fn bang(a: &Presentation) -> Result<Presentation> {
    if a.is_trivial_unit() {
        return Err(Error::Precondition("the dual of the trivial unit is not defined here".into()));
    }
    let mut rels = BTreeMap::new();
    for d in 2..=a.cap() {
        rels.insert(d, relation_perp(a, d)?);
    }
    Presentation::from_generators(format!("{}!", a.name()), a.field().clone(), dual_names(a.gens()), rels, a.cap())
}

pub fn mix(kind: MixKind, a: &Presentation, b: &Presentation) -> Result<Presentation> {
    if a.is_trivial_unit() || b.is_trivial_unit() {
        return Err(Error::Precondition("mixing products need conic inputs".into()));
    }
    let (field, cap) = joint(a, b)?;
    let (sym, gens) = match kind {
        MixKind::Right => ("▷", pair_names(&dual_names(a.gens()), b.gens())),
        MixKind::Left => ("◁", pair_names(a.gens(), &dual_names(b.gens()))),
        MixKind::Diamond => ("◇", pair_names(&dual_names(a.gens()), &dual_names(b.gens()))),
    };
    let mut rels = BTreeMap::new();
    for d in 2..=cap {
        let (u, v) = match kind {
            MixKind::Right => (relation_perp(a, d)?, b.ideal(d)?.clone()),
            MixKind::Left => (a.ideal(d)?.clone(), relation_perp(b, d)?),
            MixKind::Diamond => (relation_perp(a, d)?, relation_perp(b, d)?),
        };
        rels.insert(d, interleave_span(&u, &v)?);
    }
    Presentation::from_generators(format!("{}{sym}{}", a.name(), b.name()), field, gens, rels, cap)
}

/// Whether `ident^{⊗d}` carries the ideal of `p` onto that of `q` in every degree up to the common cap.
pub fn presentations_equal(p: &Presentation, q: &Presentation, ident: &LinearMap) -> Result<bool> {
    Ok(first_mismatch(p, q, ident)?.is_none())
}

/// First degree where the transported ideals differ.
pub fn first_mismatch(p: &Presentation, q: &Presentation, ident: &LinearMap) -> Result<Option<usize>> {
    if ident.cols() != p.dim() || ident.rows() != q.dim() {
        return Err(Error::DimensionMismatch("identification does not match the generators".into()));
    }
    ident.inverse()?;
    for d in 0..=p.cap().min(q.cap()) {
        let src = p.ideal(d)?;
        let tgt = q.ideal(d)?;
        if src.dim() != tgt.dim() {
            return Ok(Some(d));
        }
        for row in src.basis() {
            if !tgt.contains(&apply_power(ident, &row)?)? {
                return Ok(Some(d));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub mismatch_degree: Option<usize>,
}

fn identity_check(name: &str, p: &Presentation, q: &Presentation) -> Result<IdentityCheck> {
    let mismatch_degree = first_mismatch(p, q, &LinearMap::identity(p.dim()))?;
    Ok(IdentityCheck { name: name.to_string(), passed: mismatch_degree.is_none(), mismatch_degree })
}

/// The duality identities for a pair; quadratic-only items are skipped otherwise.
pub fn verify_identities(a: &Presentation, b: &Presentation) -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    let quadratic = a.is_quadratic() && b.is_quadratic();
    if quadratic {
        let lhs = bang(&product(ProductKind::Circ, a, b)?)?;
        let rhs = product(ProductKind::Bullet(2), &bang(a)?, &bang(b)?)?;
        out.push(identity_check("(A∘B)! = A!•B!", &lhs, &rhs)?);
        let lhs = bang(&product(ProductKind::Bullet(2), a, b)?)?;
        let rhs = product(ProductKind::Circ, &bang(a)?, &bang(b)?)?;
        out.push(identity_check("(A•B)! = A!∘B!", &lhs, &rhs)?);
        out.push(identity_check("A!! = A", &bang(&bang(a)?)?, a)?);
        out.push(identity_check("B!! = B", &bang(&bang(b)?)?, b)?);
        out.push(identity_check("A▷B = A!•B", &mix(MixKind::Right, a, b)?, &product(ProductKind::Bullet(2), &bang(a)?, b)?)?);
    }
    let lhs = bang(&product(ProductKind::Odot, a, b)?)?;
    let rhs = product(ProductKind::Circ, &bang(a)?, &bang(b)?)?;
    out.push(identity_check("(A⊙B)! = A!∘B!", &lhs, &rhs)?);
    let cap = a.cap().min(b.cap());
    let k = unit(UnitKind::K, cap)?;
    let u = unit(UnitKind::U(2), cap)?;
    out.push(identity_check("K! = U", &bang(&k)?, &u)?);
    out.push(identity_check("U! = K", &bang(&u)?, &k)?);
    Ok(out)
}

/// Dimension of the degree-`d` generator space `perp(I_d)⊗J_d` before closure.
pub fn mix_generator_dim(a: &Presentation, b: &Presentation, d: usize) -> Result<usize> {
    Ok(relation_perp(a, d)?.dim() * b.ideal(d)?.dim())
}

/// Degree-one identification `V⊗W → W⊗V`.
pub fn swap_factors(n: usize, m: usize) -> LinearMap {
    let mut s = LinearMap::zero(n * m, n * m);
    for i in 0..n {
        for j in 0..m {
            s.set(j * n + i, i * m + j, crate::scalar::Scalar::one());
        }
    }
    s
}
