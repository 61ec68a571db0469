//! Internal coHom objects, coevaluation, bialgebra checks, cocomposition,
//! the marked-basis enlargement and diagram specialization.
//!
//! Generators of `hom[B, A]` span `B₁^*⊗A₁`; `z[i,j]` pairs `a_i` with `b^j`
//! and sits at code `j·dim A + i`.

use crate::error::{Error, Result};
use crate::linmap::{apply_power, LinearMap};
use crate::presentation::{check_morphism, morphism_violation, Morphism, Presentation};
use crate::products::{interleave_span, mix, unit, MixKind, UnitKind};
use crate::report::CheckItem;
use crate::scalar::Scalar;
use crate::subspace::{kernel, Subspace};
use crate::tensor::{pow_dim, MultiIndex, Tensor};
use crate::ttp::{product_violation, ProductTarget};
use std::collections::BTreeMap;

/// `z[i,j]` names in code order, `i` over a basis of size `n`, `j` over one of size `m`.
pub fn z_names(n: usize, m: usize) -> Vec<String> {
    (0..m).flat_map(|j| (0..n).map(move |i| format!("z[{},{}]", i + 1, j + 1))).collect()
}

pub fn z_code(i: usize, j: usize, n: usize) -> usize {
    j * n + i
}

#[derive(Clone, Debug)]
pub struct HomObject {
    pub pres: Presentation,
    pub source: Presentation,
    pub target: Presentation,
    /// `τ̂` on `B₁⊗E₁` when the coevaluation lands in a twisted product.
    pub twist: Option<LinearMap>,
}

impl HomObject {
    pub fn new(pres: Presentation, source: &Presentation, target: &Presentation, twist: Option<LinearMap>) -> Self {
        HomObject { pres, source: source.clone(), target: target.clone(), twist }
    }

    pub fn is_twisted(&self) -> bool {
        self.twist.is_some()
    }

    pub fn is_end(&self) -> bool {
        self.source.dim() == self.target.dim() && self.source.same_ideal(&self.target).unwrap_or(false)
    }

    /// `a_i ↦ Σ_j z[i,j]⊗b_j`.
    pub fn coevaluation_map(&self) -> LinearMap {
        let (n, m) = (self.target.dim(), self.source.dim());
        let mut d = LinearMap::zero(n * m * m, n);
        for i in 0..n {
            for j in 0..m {
                d.set(z_code(i, j, n) * m + j, i, Scalar::one());
            }
        }
        d
    }

    /// `hom∘B`, or the twisted product when a twist is attached.
    pub fn coevaluation_target(&self) -> Result<ProductTarget> {
        ProductTarget::new(&self.pres, &self.source, self.twist.as_ref())
    }
}

pub fn hom_object(b: &Presentation, a: &Presentation) -> Result<HomObject> {
    let pres = mix(MixKind::Right, b, a)?;
    let name = format!("hom[{},{}]", b.name(), a.name());
    let pres = pres.with_gens(z_names(a.dim(), b.dim()))?.renamed(name);
    Ok(HomObject::new(pres, b, a, None))
}

pub fn end_object(a: &Presentation) -> Result<HomObject> {
    let h = hom_object(a, a)?;
    let name = format!("end[{}]", a.name());
    Ok(HomObject { pres: h.pres.renamed(name), ..h })
}

pub fn coevaluation_check(h: &HomObject, up_to: usize) -> Result<Morphism> {
    let map = h.coevaluation_map();
    let target = h.coevaluation_target()?;
    match product_violation(&h.target, &target, &map, up_to)? {
        None => Ok(Morphism { map, checked_up_to: up_to.min(target.cap()) }),
        Some(v) => Err(Error::CheckFailed(format!("coevaluation fails on a degree {} relation", v.degree))),
    }
}

/// `z[i,j] ↦ Σ_k z[i,k]⊗z[k,j]` on `E₁ → E₁⊗E₁`.
pub fn comultiplication_map(n: usize) -> LinearMap {
    let dim = n * n;
    let mut d = LinearMap::zero(dim * dim, dim);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                d.set(z_code(i, k, n) * dim + z_code(k, j, n), z_code(i, j, n), Scalar::one());
            }
        }
    }
    d
}

/// `z[i,j] ↦ δ_{ij} e`.
pub fn counit_map(n: usize) -> LinearMap {
    let mut e = LinearMap::zero(1, n * n);
    for i in 0..n {
        e.set(0, z_code(i, i, n), Scalar::one());
    }
    e
}

fn violation_item(name: &str, v: Option<crate::presentation::Violation>, up_to: usize) -> CheckItem {
    match v {
        None => CheckItem::new(name, true, format!("degrees <= {up_to}")),
        Some(v) => CheckItem::new(name, false, format!("relation at degree {} has nonzero image", v.degree)),
    }
}

pub fn bialgebra_checks(e: &HomObject, up_to: usize) -> Result<Vec<CheckItem>> {
    let n = e.target.dim();
    if e.source.dim() != n {
        return Err(Error::Precondition("bialgebra checks need an endomorphism object".into()));
    }
    let dim = n * n;
    let up_to = up_to.min(e.pres.cap());
    let delta = comultiplication_map(n);
    let eps = counit_map(n);
    let id = LinearMap::identity(dim);
    let ee = ProductTarget::Plain(e.pres.clone(), e.pres.clone());
    let k = unit(UnitKind::K, e.pres.cap())?;

    let mut items = vec![
        violation_item("Δ well-defined", product_violation(&e.pres, &ee, &delta, up_to)?, up_to),
        violation_item("ε well-defined", morphism_violation(&e.pres, &k, &eps, up_to)?, up_to),
    ];
    let left = delta.kron(&id).compose(&delta)?;
    let right = id.kron(&delta).compose(&delta)?;
    items.push(CheckItem::new("coassociativity on generators", left == right, ""));
    let counit_left = eps.kron(&id).compose(&delta)? == id;
    let counit_right = id.kron(&eps).compose(&delta)? == id;
    items.push(CheckItem::new("counit laws on generators", counit_left && counit_right, ""));
    let coaction = product_violation(&e.target, &e.coevaluation_target()?, &e.coevaluation_map(), up_to)?;
    items.push(violation_item("coaction well-defined", coaction, up_to));
    Ok(items)
}

#[derive(Clone, Debug)]
pub struct Cocomposition {
    pub map: LinearMap,
    pub items: Vec<CheckItem>,
}

/// `hom[B,A] → hom[C,A]∘hom[B,C]`, `z[i,j] ↦ Σ_k w[i,k]⊗v[k,j]`.
pub fn cocomposition(b: &Presentation, c: &Presentation, a: &Presentation, up_to: usize) -> Result<Cocomposition> {
    let (n, l, m) = (a.dim(), c.dim(), b.dim());
    let hba = hom_object(b, a)?;
    let hca = hom_object(c, a)?;
    let hbc = hom_object(b, c)?;
    let mut map = LinearMap::zero(n * l * l * m, n * m);
    for i in 0..n {
        for j in 0..m {
            for k in 0..l {
                map.set(z_code(i, k, n) * (l * m) + z_code(k, j, l), z_code(i, j, n), Scalar::one());
            }
        }
    }
    let target = ProductTarget::Plain(hca.pres.clone(), hbc.pres.clone());
    let up_to = up_to.min(target.cap()).min(hba.pres.cap());
    let v = product_violation(&hba.pres, &target, &map, up_to)?;
    let left = map.kron(&LinearMap::identity(m)).compose(&hba.coevaluation_map())?;
    let right = LinearMap::identity(n * l).kron(&hbc.coevaluation_map()).compose(&hca.coevaluation_map())?;
    let items = vec![
        violation_item("cocomposition well-defined", v, up_to),
        CheckItem::new("coevaluation square commutes", left == right, "generators"),
    ];
    Ok(Cocomposition { map, items })
}

/// coEnd enlarged by the relations forcing a simultaneous coaction on the dual.
pub fn e_marked(a: &Presentation, up_to: usize) -> Result<Presentation> {
    let n = a.dim();
    let cap = up_to.min(a.cap());
    let mut rels = BTreeMap::new();
    for d in 2..=cap {
        let ideal = a.ideal(d)?;
        let perp = ideal.perp();
        let direct = interleave_span(&perp, ideal)?;
        let dual = interleave_span(ideal, &perp)?;
        rels.insert(d, direct.sum(&dual)?);
    }
    Presentation::from_generators(format!("e[{}]", a.name()), a.field().clone(), z_names(n, n), rels, cap)
}

/// A map `φ(a_i) = Σ_j h[i,j]⊗b_j` into `H∘B` (or `H∘_τB`).
#[derive(Clone, Debug)]
pub struct DiagramObject {
    pub h_space: Presentation,
    pub source: Presentation,
    pub codomain_factor: Presentation,
    /// Column `z_code(i, j)` holds the coordinates of `h[i,j]` in `H₁`.
    pub h: LinearMap,
    pub twist: Option<LinearMap>,
}

impl DiagramObject {
    pub fn unchecked(h_space: &Presentation, a: &Presentation, b: &Presentation, h: LinearMap, twist: Option<LinearMap>) -> Result<Self> {
        if h.rows() != h_space.dim() || h.cols() != a.dim() * b.dim() {
            return Err(Error::DimensionMismatch(format!(
                "diagram map must be {}x{}",
                h_space.dim(),
                a.dim() * b.dim()
            )));
        }
        Ok(DiagramObject {
            h_space: h_space.clone(),
            source: a.clone(),
            codomain_factor: b.clone(),
            h,
            twist,
        })
    }

    /// Builds the diagram and verifies that `φ` respects the relations of `A`.
    pub fn new(h_space: &Presentation, a: &Presentation, b: &Presentation, h: LinearMap, twist: Option<LinearMap>, up_to: usize) -> Result<Self> {
        let dg = DiagramObject::unchecked(h_space, a, b, h, twist)?;
        if let Some(v) = product_violation(&dg.source, &dg.target()?, &dg.phi(), up_to)? {
            return Err(Error::CheckFailed(format!(
                "φ does not respect a degree {} relation of {}",
                v.degree,
                dg.source.name()
            )));
        }
        Ok(dg)
    }

    /// The coevaluation of a hom object as a diagram.
    pub fn initial(hom: &HomObject) -> Self {
        DiagramObject {
            h_space: hom.pres.clone(),
            source: hom.target.clone(),
            codomain_factor: hom.source.clone(),
            h: LinearMap::identity(hom.pres.dim()),
            twist: hom.twist.clone(),
        }
    }

    pub fn phi(&self) -> LinearMap {
        let (n, m, dh) = (self.source.dim(), self.codomain_factor.dim(), self.h_space.dim());
        let mut phi = LinearMap::zero(dh * m, n);
        for i in 0..n {
            for j in 0..m {
                for (r, x) in self.h.column(z_code(i, j, n)) {
                    phi.set(r * m + j, i, x);
                }
            }
        }
        phi
    }

    pub fn target(&self) -> Result<ProductTarget> {
        ProductTarget::new(&self.h_space, &self.codomain_factor, self.twist.as_ref())
    }
}

/// Presentation of the subalgebra of `H` generated by the `h[i,j]`.
pub fn specialize_diagram(dg: &DiagramObject, up_to: usize) -> Result<Presentation> {
    let (n, m) = (dg.source.dim(), dg.codomain_factor.dim());
    let dim = n * m;
    let cap = up_to.min(dg.h_space.cap());
    let mut comps = Vec::with_capacity(cap + 1);
    for d in 0..=cap {
        let mut images = Vec::new();
        for w in 0..pow_dim(dim, d) {
            let img = if d == 0 {
                Tensor::monomial(dg.h_space.dim(), &[])
            } else {
                let mono = Tensor::monomial(dim, &MultiIndex::decode(w, dim, d).0);
                dg.h_space.normal_form(&apply_power(&dg.h, &mono)?)?
            };
            images.push((w, img.into_coeffs()));
        }
        comps.push(Subspace::from_echelon(dim, d, kernel(images)));
    }
    Ok(Presentation::from_components(
        format!("{}^φ", dg.h_space.name()),
        dg.h_space.field().clone(),
        z_names(n, m),
        comps,
    ))
}

/// The unique map `hom[B,A] → H^φ`; fails with a witness when `z ↦ h` does not respect the relations.
pub fn initial_factor_map(dg: &DiagramObject, up_to: usize) -> Result<Morphism> {
    let hom = hom_object(&dg.codomain_factor, &dg.source)?;
    let hom_pres = match &dg.twist {
        None => hom.pres,
        Some(_) => return Err(Error::Precondition("twisted diagrams factor through the twisted hom object".into())),
    };
    factor_through(&hom_pres, dg, up_to)
}

/// Factor map from a given presentation on `z` generators (untwisted or twisted hom).
pub fn factor_through(hom: &Presentation, dg: &DiagramObject, up_to: usize) -> Result<Morphism> {
    if let Some(v) = morphism_violation(hom, &dg.h_space, &dg.h, up_to)? {
        return Err(Error::CheckFailed(format!(
            "relation of {} at degree {} is not killed by z ↦ h (remainder has {} terms)",
            hom.name(),
            v.degree,
            v.image_remainder.coeffs().len()
        )));
    }
    let image = specialize_diagram(dg, up_to)?;
    check_morphism(hom, &image, &LinearMap::identity(hom.dim()), up_to)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    fn qplane() -> Presentation {
        let f = FieldSpec::new(&["q"]).unwrap();
        let q = f.param("q").unwrap();
        let rel = Tensor::from_terms(2, 2, &[(&[0, 1], Scalar::one()), (&[1, 0], -q)]).unwrap();
        Presentation::new("Aq", f, vec!["x".into(), "y".into()], &[rel], 4).unwrap()
    }

    #[test]
    fn hom_of_planes() {
        let a = qplane();
        let h = hom_object(&a, &a).unwrap();
        assert_eq!(h.pres.dim(), 4);
        assert_eq!(h.pres.gens()[1], "z[2,1]");
        assert_eq!(h.pres.generator_relations(2).dim(), 3);
        assert!(coevaluation_check(&h, 3).is_ok());
    }

    #[test]
    fn hom_from_unit_is_target() {
        let a = qplane();
        let k = unit(UnitKind::K, 4).unwrap();
        let h = hom_object(&k, &a).unwrap();
        assert!(crate::products::presentations_equal(&h.pres, &a, &LinearMap::identity(2)).unwrap());
    }

    #[test]
    fn end_bialgebra() {
        let e = end_object(&qplane()).unwrap();
        for item in bialgebra_checks(&e, 3).unwrap() {
            assert!(item.passed, "{item}");
        }
    }

    #[test]
    fn marked_dims() {
        let e = e_marked(&qplane(), 3).unwrap();
        assert_eq!(e.ideal(2).unwrap().dim(), 6);
        let h = hom_object(&qplane(), &qplane()).unwrap();
        assert!(e.ideal(2).unwrap().contains_subspace(h.pres.ideal(2).unwrap()).unwrap());
    }

    #[test]
    fn initial_diagram_specializes_to_hom() {
        let h = hom_object(&qplane(), &qplane()).unwrap().pres.with_cap(3);
        let hom = HomObject::new(h, &qplane(), &qplane(), None);
        let dg = DiagramObject::initial(&hom);
        let spec = specialize_diagram(&dg, 3).unwrap();
        for d in 0..=3 {
            assert_eq!(spec.ideal(d).unwrap(), hom.pres.ideal(d).unwrap());
        }
        let m = initial_factor_map(&dg, 3).unwrap();
        assert!(m.map.is_identity());
    }

    #[test]
    fn zero_diagram_kills_everything() {
        let a = qplane();
        let k = unit(UnitKind::K, 3).unwrap();
        let dg = DiagramObject::new(&k, &a, &a, LinearMap::zero(1, 4), None, 3).unwrap();
        let spec = specialize_diagram(&dg, 3).unwrap();
        assert!(spec.ideal(1).unwrap().is_full());
        assert!(initial_factor_map(&dg, 3).is_ok());
    }

    #[test]
    fn three_planes_cocompose() {
        let f = FieldSpec::new(&["q", "p", "r"]).unwrap();
        let plane = |name: &str, k: usize| {
            let rel = Tensor::from_terms(2, 2, &[(&[0, 1], Scalar::one()), (&[1, 0], -Scalar::param(k))]).unwrap();
            Presentation::new(name, f.clone(), vec!["x".into(), "y".into()], &[rel], 2).unwrap()
        };
        let c = cocomposition(&plane("B", 0), &plane("C", 1), &plane("A", 2), 2).unwrap();
        for item in c.items {
            assert!(item.passed, "{item}");
        }
    }
}
