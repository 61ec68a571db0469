//! σ-deformed presentations, factorizable twists and the closed forms of `hom^Υ`.

use crate::cohom::{z_names, HomObject};
use crate::error::{Error, Result};
use crate::linmap::{apply_slotwise, LinearMap};
use crate::presentation::{check_sigma_ideal_stability, Presentation};
use crate::products::{interleave_span, mix, MixKind};
use crate::subspace::Subspace;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Powers {
    /// `id, φ, φ², …` across the slots.
    Ascending,
    /// `id, φ⁻¹, φ⁻², …`.
    Descending,
}

/// `(φ^{s}, φ^{s+1}, …)` applied slotwise to every element of `space`.
pub fn deform_subspace(space: &Subspace, phi: &LinearMap, start: i64, step: i64) -> Result<Subspace> {
    let maps: Vec<LinearMap> = (0..space.degree() as i64).map(|t| phi.pow(start + step * t)).collect::<Result<_>>()?;
    let refs: Vec<&LinearMap> = maps.iter().collect();
    let mut out = Subspace::zero(space.base(), space.degree());
    for row in space.basis() {
        out.insert(&apply_slotwise(&refs, &row)?)?;
    }
    Ok(out)
}

pub fn sigma_deform(p: &Presentation, phi: &LinearMap, powers: Powers) -> Result<Presentation> {
    if !phi.is_square() || phi.rows() != p.dim() {
        return Err(Error::DimensionMismatch("deformation map must act on the generators".into()));
    }
    phi.inverse()?;
    let step = match powers {
        Powers::Ascending => 1,
        Powers::Descending => -1,
    };
    let mut rels = BTreeMap::new();
    for d in 2..=p.cap() {
        let s = deform_subspace(&p.generator_relations(d), phi, 0, step)?;
        if !s.is_zero() {
            rels.insert(d, s);
        }
    }
    Presentation::from_generators(format!("{}^σ", p.name()), p.field().clone(), p.gens().to_vec(), rels, p.cap())
}

/// `τ̂ = id ⊗ (σ_B^{-1})^* ⊗ σ_A` on `B₁⊗E₁`, `E₁ = B₁^*⊗A₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizableTwist {
    pub sigma_a: LinearMap,
    pub sigma_b: LinearMap,
    pub a_automorphic: bool,
    pub b_automorphic: bool,
}

impl FactorizableTwist {
    pub fn new(sigma_a: LinearMap, sigma_b: LinearMap) -> Result<Self> {
        if !sigma_a.is_square() || !sigma_b.is_square() {
            return Err(Error::DimensionMismatch("twist matrices must be square".into()));
        }
        sigma_a.inverse()?;
        sigma_b.inverse()?;
        Ok(FactorizableTwist { sigma_a, sigma_b, a_automorphic: false, b_automorphic: false })
    }

    pub fn identity(n: usize, m: usize) -> Self {
        FactorizableTwist {
            sigma_a: LinearMap::identity(n),
            sigma_b: LinearMap::identity(m),
            a_automorphic: true,
            b_automorphic: true,
        }
    }

    /// Records whether each matrix preserves the ideal of its presentation.
    pub fn classify(mut self, b: &Presentation, a: &Presentation, up_to: usize) -> Result<Self> {
        self.check_shapes(b, a)?;
        self.a_automorphic = check_sigma_ideal_stability(a, &self.sigma_a, up_to)?.stable;
        self.b_automorphic = check_sigma_ideal_stability(b, &self.sigma_b, up_to)?.stable;
        Ok(self)
    }

    fn check_shapes(&self, b: &Presentation, a: &Presentation) -> Result<()> {
        if self.sigma_a.rows() != a.dim() || self.sigma_b.rows() != b.dim() {
            return Err(Error::DimensionMismatch("twist matrices do not match the generator counts".into()));
        }
        Ok(())
    }

    /// `z ↦ ž^{⟨r⟩}`: `z[k,l] ↦ Σ [σ_A^r]_k^p [σ_B^{-r}]_q^l z[p,q]`.
    pub fn shift_map(&self, r: i64) -> Result<LinearMap> {
        Ok(self.sigma_b.pow(-r)?.transpose().kron(&self.sigma_a.pow(r)?))
    }

    pub fn tau_hat(&self) -> Result<LinearMap> {
        Ok(LinearMap::identity(self.sigma_b.rows()).kron(&self.shift_map(1)?))
    }
}

fn named_hom(pres: Presentation, b: &Presentation, a: &Presentation, tw: &FactorizableTwist) -> Result<HomObject> {
    let name = format!("hom^Υ[{},{}]", b.name(), a.name());
    let pres = pres.with_gens(z_names(a.dim(), b.dim()))?.renamed(name);
    Ok(HomObject::new(pres, b, a, Some(tw.tau_hat()?)))
}

/// `hom^Υ[B,A]` for a factorizable twist, truncated at `up_to`.
pub fn hom_upsilon(b: &Presentation, a: &Presentation, tw: &FactorizableTwist, up_to: usize) -> Result<HomObject> {
    tw.check_shapes(b, a)?;
    let cap = up_to.min(a.cap()).min(b.cap());
    let (a, b) = (a.with_cap(cap), b.with_cap(cap));
    let stable_a = check_sigma_ideal_stability(&a, &tw.sigma_a, cap)?.stable;
    let stable_b = check_sigma_ideal_stability(&b, &tw.sigma_b, cap)?.stable;
    let pres = if stable_a && stable_b {
        let bd = sigma_deform(&b, &tw.sigma_b, Powers::Ascending)?;
        let ad = sigma_deform(&a, &tw.sigma_a, Powers::Ascending)?;
        mix(MixKind::Right, &bd, &ad)?
    } else {
        shift_family(&b, &a, tw, cap)?
    };
    named_hom(pres, &b, &a, tw)
}

/// Relations of shift `s ≥ 1` in degree `d`: `perp(σ_B-deformed J_d) ⊗ σ_A-deformed I_d`,
/// both deformations starting at power `s − 1`.
pub fn shift_relations(b: &Presentation, a: &Presentation, tw: &FactorizableTwist, d: usize, s: usize) -> Result<Subspace> {
    let start = s as i64 - 1;
    let upper = deform_subspace(b.ideal(d)?, &tw.sigma_b, start, 1)?.perp();
    let lower = deform_subspace(a.ideal(d)?, &tw.sigma_a, start, 1)?;
    interleave_span(&upper, &lower)
}

/// The relation family over all shifts, taken until a shift past `cap · max degree` adds nothing.
pub fn shift_family(b: &Presentation, a: &Presentation, tw: &FactorizableTwist, cap: usize) -> Result<Presentation> {
    let floor = cap * a.max_relation_degree().max(b.max_relation_degree()).max(1);
    let mut rels: BTreeMap<usize, Subspace> = BTreeMap::new();
    let mut s = 1;
    loop {
        let mut grew = false;
        for d in 2..=cap {
            let new = shift_relations(b, a, tw, d, s)?;
            let cur = rels.entry(d).or_insert_with(|| Subspace::zero(new.base(), d));
            for row in new.rows() {
                grew |= cur.insert_vector(row);
            }
        }
        if s >= floor && !grew {
            break;
        }
        s += 1;
    }
    let field = a.field().join(b.field())?;
    let gens = z_names(a.dim(), b.dim());
    Presentation::from_generators("Υ", field, gens, rels, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohom::{bialgebra_checks, coevaluation_check, end_object, hom_object};
    use crate::products::{presentations_equal, unit, UnitKind};
    use crate::scalar::{FieldSpec, Scalar};
    use crate::tensor::Tensor;

    fn qplane(q: &str) -> Presentation {
        let f = FieldSpec::new(&["q", "p"]).unwrap();
        let q = f.param(q).unwrap();
        let rel = Tensor::from_terms(2, 2, &[(&[0, 1], Scalar::one()), (&[1, 0], -q)]).unwrap();
        Presentation::new("Aq", f, vec!["x".into(), "y".into()], &[rel], 4).unwrap()
    }

    fn diag_p() -> LinearMap {
        let p = FieldSpec::new(&["q", "p"]).unwrap().param("p").unwrap();
        LinearMap::diag(&[p, Scalar::one()])
    }

    fn same(p: &Presentation, q: &Presentation) -> bool {
        presentations_equal(p, q, &LinearMap::identity(p.dim())).unwrap()
    }

    #[test]
    fn identity_deformation_is_trivial() {
        let a = qplane("q");
        assert!(same(&sigma_deform(&a, &LinearMap::identity(2), Powers::Ascending).unwrap(), &a));
    }

    #[test]
    fn diagonal_deformation_rescales_plane() {
        let a = qplane("q");
        let d = sigma_deform(&a, &diag_p(), Powers::Ascending).unwrap();
        let f = a.field().clone();
        let pq = &f.param("p").unwrap() * &f.param("q").unwrap();
        let rel = Tensor::from_terms(2, 2, &[(&[0, 1], Scalar::one()), (&[1, 0], -pq)]).unwrap();
        assert!(d.ideal(2).unwrap().contains(&rel).unwrap());
    }

    #[test]
    fn opposite_powers_undo_each_other() {
        let a = qplane("q");
        let phi = LinearMap::from_ints(&[&[1, 1], &[0, 1]]);
        let there = sigma_deform(&a, &phi, Powers::Ascending).unwrap();
        let back = sigma_deform(&there, &phi, Powers::Descending).unwrap();
        assert!(same(&back, &a));
    }

    #[test]
    fn identity_twist_gives_plain_hom() {
        let a = qplane("q");
        let h = hom_upsilon(&a, &a, &FactorizableTwist::identity(2, 2), 3).unwrap();
        let plain = hom_object(&a.with_cap(3), &a.with_cap(3)).unwrap();
        assert!(same(&h.pres, &plain.pres));
    }

    #[test]
    fn hom_from_unit_is_deformed_target() {
        let a = qplane("q");
        let k = unit(UnitKind::K, 4).unwrap();
        let tw = FactorizableTwist::new(diag_p(), LinearMap::identity(1)).unwrap();
        let h = hom_upsilon(&k, &a, &tw, 4).unwrap();
        let d = sigma_deform(&a, &diag_p(), Powers::Ascending).unwrap();
        assert!(same(&h.pres, &d));
    }

    #[test]
    fn diagonal_twist_matches_deformed_pair() {
        let a = qplane("q");
        let tw = FactorizableTwist::new(diag_p(), diag_p()).unwrap();
        let h = hom_upsilon(&a, &a, &tw, 3).unwrap();
        let d = sigma_deform(&a.with_cap(3), &diag_p(), Powers::Ascending).unwrap();
        assert!(same(&h.pres, &end_object(&d).unwrap().pres));
        assert!(coevaluation_check(&h, 3).is_ok());
        assert!(crate::report::all_passed(&bialgebra_checks(&h, 3).unwrap()));
    }

    #[test]
    fn unipotent_twist_uses_shift_family() {
        let a = qplane("q");
        let u = LinearMap::from_ints(&[&[1, 1], &[0, 1]]);
        let tw = FactorizableTwist::new(LinearMap::identity(2), u).unwrap().classify(&a, &a, 3).unwrap();
        assert!(!tw.b_automorphic && tw.a_automorphic);
        let h = hom_upsilon(&a, &a, &tw, 3).unwrap();
        assert!(coevaluation_check(&h, 3).is_ok());
        let plain = hom_object(&a.with_cap(3), &a.with_cap(3)).unwrap();
        assert!(h.pres.ideal(2).unwrap().dim() > plain.pres.ideal(2).unwrap().dim());
    }
}
