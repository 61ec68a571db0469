//! Graded algebras given by generators and homogeneous relations, truncated
//! at a degree cap.

use crate::error::{Error, Result};
use crate::linmap::{apply_power, LinearMap};
use crate::scalar::{FieldSpec, Scalar};
use crate::subspace::Subspace;
use crate::tensor::{pow_dim, Tensor, Vector};
use std::collections::BTreeMap;
use std::sync::OnceLock;

pub const DEFAULT_CAP: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Conic,
    /// The ground field viewed as an algebra with no degree-one part.
    TrivialUnit,
}

#[derive(Clone, Debug)]
pub struct Presentation {
    name: String,
    field: FieldSpec,
    gens: Vec<String>,
    rels: BTreeMap<usize, Subspace>,
    cap: usize,
    kind: Kind,
    ideal: Vec<OnceLock<Subspace>>,
}

impl Presentation {
    /// Builds a presentation from homogeneous relation tensors of degree ≥ 2.
    pub fn new(
        name: impl Into<String>,
        field: FieldSpec,
        gens: Vec<String>,
        relations: &[Tensor],
        cap: usize,
    ) -> Result<Self> {
        let n = gens.len();
        let mut rels: BTreeMap<usize, Subspace> = BTreeMap::new();
        for r in relations {
            if r.base() != n {
                return Err(Error::DimensionMismatch(format!("relation over {} generators, expected {n}", r.base())));
            }
            if r.degree() < 2 {
                return Err(Error::Precondition(format!(
                    "relations of degree {} are not allowed; degrees 0 and 1 are free",
                    r.degree()
                )));
            }
            if r.degree() > cap {
                return Err(Error::DegreeCap { degree: r.degree(), cap });
            }
            rels.entry(r.degree()).or_insert_with(|| Subspace::zero(n, r.degree())).insert(r)?;
        }
        Ok(Presentation::assemble(name.into(), field, gens, rels, cap, Kind::Conic))
    }

    /// Presentation whose generator relations are whole subspaces per degree.
    pub fn from_generators(
        name: impl Into<String>,
        field: FieldSpec,
        gens: Vec<String>,
        rels: BTreeMap<usize, Subspace>,
        cap: usize,
    ) -> Result<Self> {
        let n = gens.len();
        for (d, s) in &rels {
            if s.base() != n || s.degree() != *d {
                return Err(Error::DimensionMismatch(format!("relation subspace at degree {d}")));
            }
            if *d < 2 {
                return Err(Error::Precondition(format!("relations of degree {d} are not allowed")));
            }
            if *d > cap {
                return Err(Error::DegreeCap { degree: *d, cap });
            }
        }
        let rels = rels.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        Ok(Presentation::assemble(name.into(), field, gens, rels, cap, Kind::Conic))
    }

    /// Presentation from already closed ideal components for degrees `0..=cap`.
    /// Degree-one components are accepted here: images of generator maps may
    /// identify or kill generators.
    pub(crate) fn from_components(
        name: impl Into<String>,
        field: FieldSpec,
        gens: Vec<String>,
        components: Vec<Subspace>,
    ) -> Self {
        let cap = components.len().saturating_sub(1);
        let rels = components
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .map(|(d, s)| (d, s.clone()))
            .collect();
        let ideal = components
            .into_iter()
            .map(|s| {
                let cell = OnceLock::new();
                let _ = cell.set(s);
                cell
            })
            .collect();
        Presentation { name: name.into(), field, gens, rels, cap, kind: Kind::Conic, ideal }
    }

    pub fn trivial_unit(cap: usize) -> Self {
        Presentation::assemble("I".into(), FieldSpec::rationals(), Vec::new(), BTreeMap::new(), cap, Kind::TrivialUnit)
    }

    fn assemble(
        name: String,
        field: FieldSpec,
        gens: Vec<String>,
        rels: BTreeMap<usize, Subspace>,
        cap: usize,
        kind: Kind,
    ) -> Self {
        let ideal = (0..=cap).map(|_| OnceLock::new()).collect();
        Presentation { name, field, gens, rels, cap, kind, ideal }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn gens(&self) -> &[String] {
        &self.gens
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn is_trivial_unit(&self) -> bool {
        self.kind == Kind::TrivialUnit
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Presentation { name: name.into(), ..self.clone() }
    }

    pub fn with_gens(&self, gens: Vec<String>) -> Result<Self> {
        if gens.len() != self.gens.len() {
            return Err(Error::DimensionMismatch("generator rename changes the count".into()));
        }
        Ok(Presentation { gens, ..self.clone() })
    }

    pub fn with_field(&self, field: FieldSpec) -> Result<Self> {
        let field = self.field.join(&field)?;
        Ok(Presentation { field, ..self.clone() })
    }

    /// Same algebra with a different truncation.
    pub fn with_cap(&self, cap: usize) -> Self {
        if cap == self.cap {
            return self.clone();
        }
        let mut ideal: Vec<OnceLock<Subspace>> = (0..=cap).map(|_| OnceLock::new()).collect();
        if cap < self.cap {
            for (d, cell) in ideal.iter_mut().enumerate() {
                if let Some(s) = self.ideal[d].get() {
                    let _ = cell.set(s.clone());
                }
            }
        }
        let rels = self.rels.iter().filter(|(d, _)| **d <= cap).map(|(d, s)| (*d, s.clone())).collect();
        Presentation { rels, cap, ideal, ..self.clone() }
    }

    pub fn generator_relations(&self, d: usize) -> Subspace {
        self.rels.get(&d).cloned().unwrap_or_else(|| Subspace::zero(self.dim(), d))
    }

    pub fn relation_degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.rels.keys().copied()
    }

    pub fn max_relation_degree(&self) -> usize {
        self.rels.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_quadratic(&self) -> bool {
        (3..=self.cap).all(|d| self.minimal_generators(d).is_ok_and(|s| s.is_zero()))
    }

    /// Degree-`d` component of the two-sided ideal.
    pub fn ideal(&self, d: usize) -> Result<&Subspace> {
        if d > self.cap {
            return Err(Error::DegreeCap { degree: d, cap: self.cap });
        }
        if let Some(s) = self.ideal[d].get() {
            return Ok(s);
        }
        let s = if d == 0 {
            Subspace::zero(self.dim(), 0)
        } else {
            let lower = self.ideal(d - 1)?;
            let mut s = lower.pad_left(1).sum(&lower.pad_right(1))?;
            if let Some(g) = self.rels.get(&d) {
                s = s.sum(g)?;
            }
            s
        };
        Ok(self.ideal[d].get_or_init(|| s))
    }

    /// The relations not already implied by lower degrees, in canonical form.
    pub fn minimal_generators(&self, d: usize) -> Result<Subspace> {
        let full = self.ideal(d)?;
        if d == 0 {
            return Ok(full.clone());
        }
        let lower = self.ideal(d - 1)?;
        let padded = lower.pad_left(1).sum(&lower.pad_right(1))?;
        let mut out = Subspace::zero(self.dim(), d);
        for row in full.rows() {
            let r = padded.reduce(row);
            if !r.is_empty() {
                out.insert_vector(&r);
            }
        }
        Ok(out)
    }

    pub fn hilbert(&self, d: usize) -> Result<u64> {
        Ok(pow_dim(self.dim(), d) - self.ideal(d)?.dim() as u64)
    }

    pub fn hilbert_series(&self) -> Result<Vec<u64>> {
        (0..=self.cap).map(|d| self.hilbert(d)).collect()
    }

    /// Codes of the monomials spanning the degree-`d` quotient.
    pub fn normal_monomials(&self, d: usize) -> Result<Vec<u64>> {
        Ok(self.ideal(d)?.complement())
    }

    pub fn normal_form(&self, t: &Tensor) -> Result<Tensor> {
        if t.base() != self.dim() {
            return Err(Error::DimensionMismatch("tensor base differs from generator count".into()));
        }
        let s = self.ideal(t.degree())?;
        Ok(Tensor::from_vector(t.base(), t.degree(), s.reduce(t.coeffs())))
    }

    pub fn normal_form_vector(&self, d: usize, v: &Vector) -> Result<Vector> {
        Ok(self.ideal(d)?.reduce(v))
    }

    pub fn in_ideal(&self, t: &Tensor) -> Result<bool> {
        Ok(self.normal_form(t)?.is_zero())
    }

    /// Equality of ideals up to the common cap.
    pub fn same_ideal(&self, o: &Presentation) -> Result<bool> {
        if self.dim() != o.dim() {
            return Ok(false);
        }
        let cap = self.cap.min(o.cap);
        for d in 0..=cap {
            if self.ideal(d)? != o.ideal(d)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn ideal_dims(&self) -> Result<Vec<usize>> {
        (0..=self.cap).map(|d| self.ideal(d).map(Subspace::dim)).collect()
    }

    pub fn format_scalar(&self, x: &Scalar) -> String {
        self.field.format(x)
    }
}

/// Relations with components in several degrees. No ideal closure or normal forms.
#[derive(Clone, Debug)]
pub struct FilteredPresentation {
    pub name: String,
    pub field: FieldSpec,
    pub gens: Vec<String>,
    /// Each relation as its homogeneous components by degree.
    pub relations: Vec<BTreeMap<usize, Tensor>>,
}

impl FilteredPresentation {
    pub fn new(name: impl Into<String>, field: FieldSpec, gens: Vec<String>, relations: Vec<BTreeMap<usize, Tensor>>) -> Result<Self> {
        for r in &relations {
            for (d, t) in r {
                if t.base() != gens.len() || t.degree() != *d {
                    return Err(Error::DimensionMismatch(format!("relation component of degree {d}")));
                }
            }
        }
        let relations = relations
            .into_iter()
            .map(|r| r.into_iter().filter(|(_, t)| !t.is_zero()).collect::<BTreeMap<_, _>>())
            .filter(|r| !r.is_empty())
            .collect();
        Ok(FilteredPresentation { name: name.into(), field, gens, relations })
    }

    pub fn is_graded(&self) -> bool {
        self.relations.iter().all(|r| r.len() == 1)
    }
}

#[derive(Clone, Debug)]
pub struct Morphism {
    pub map: LinearMap,
    pub checked_up_to: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub degree: usize,
    pub relation: Tensor,
    pub image_remainder: Tensor,
}

/// First generator relation of `src` whose image is not in the ideal of `tgt`.
pub fn morphism_violation(src: &Presentation, tgt: &Presentation, alpha: &LinearMap, up_to: usize) -> Result<Option<Violation>> {
    if alpha.cols() != src.dim() || alpha.rows() != tgt.dim() {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{}, generators are {} -> {}",
            alpha.rows(),
            alpha.cols(),
            src.dim(),
            tgt.dim()
        )));
    }
    violation_by(src, alpha, up_to.min(tgt.cap()), |t| tgt.normal_form(t))
}

/// Like [`morphism_violation`], with target membership decided by `remainder`
/// (zero exactly on the target ideal).
pub fn violation_by(
    src: &Presentation,
    alpha: &LinearMap,
    up_to: usize,
    mut remainder: impl FnMut(&Tensor) -> Result<Tensor>,
) -> Result<Option<Violation>> {
    if alpha.cols() != src.dim() {
        return Err(Error::DimensionMismatch("map does not match the source generators".into()));
    }
    for d in 0..=up_to.min(src.cap()) {
        for rel in src.generator_relations(d).basis() {
            let rem = remainder(&apply_power(alpha, &rel)?)?;
            if !rem.is_zero() {
                return Ok(Some(Violation { degree: d, relation: rel, image_remainder: rem }));
            }
        }
    }
    Ok(None)
}

pub fn check_morphism(src: &Presentation, tgt: &Presentation, alpha: &LinearMap, up_to: usize) -> Result<Morphism> {
    match morphism_violation(src, tgt, alpha, up_to)? {
        None => Ok(Morphism { map: alpha.clone(), checked_up_to: up_to.min(src.cap()).min(tgt.cap()) }),
        Some(v) => Err(Error::CheckFailed(format!(
            "relation of {} at degree {} leaves the ideal of {}",
            src.name(),
            v.degree,
            tgt.name()
        ))),
    }
}

#[derive(Clone, Debug)]
pub struct SigmaStability {
    pub stable: bool,
    pub failing_degree: Option<usize>,
    /// Per degree, the matrix of `σ^{⊗d}` on the echelon basis of the ideal.
    pub change_of_basis: BTreeMap<usize, LinearMap>,
}

/// Whether `σ^{⊗d}` preserves every ideal component up to `up_to`.
pub fn check_sigma_ideal_stability(p: &Presentation, sigma: &LinearMap, up_to: usize) -> Result<SigmaStability> {
    if !sigma.is_square() || sigma.rows() != p.dim() {
        return Err(Error::DimensionMismatch("σ must be square on the generators".into()));
    }
    sigma.inverse()?;
    let mut change_of_basis = BTreeMap::new();
    for d in 0..=up_to.min(p.cap()) {
        let ideal = p.ideal(d)?;
        let pivots: Vec<u64> = ideal.pivots().collect();
        let mut c = LinearMap::zero(pivots.len(), pivots.len());
        for (col, row) in ideal.basis().iter().enumerate() {
            let img = apply_power(sigma, row)?;
            if !ideal.contains(&img)? {
                return Ok(SigmaStability { stable: false, failing_degree: Some(d), change_of_basis });
            }
            for (r, piv) in pivots.iter().enumerate() {
                if let Some(x) = img.coeffs().get(piv) {
                    c.set(r, col, x.clone());
                }
            }
        }
        change_of_basis.insert(d, c);
    }
    Ok(SigmaStability { stable: true, failing_degree: None, change_of_basis })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qplane() -> Presentation {
        let f = FieldSpec::new(&["q"]).unwrap();
        let q = f.param("q").unwrap();
        let rel = Tensor::from_terms(2, 2, &[(&[0, 1], Scalar::one()), (&[1, 0], -q)]).unwrap();
        Presentation::new("Aq", f, vec!["x".into(), "y".into()], &[rel], 4).unwrap()
    }

    #[test]
    fn qplane_ideal_and_hilbert() {
        let a = qplane();
        assert_eq!(a.ideal(2).unwrap().dim(), 1);
        assert_eq!(a.ideal(3).unwrap().dim(), 4);
        assert_eq!(a.hilbert_series().unwrap(), vec![1, 2, 3, 4, 5]);
        assert!(a.ideal(5).is_err());
    }

    #[test]
    fn truncated_polynomial_ring() {
        let e3 = Tensor::monomial(1, &[0, 0, 0]);
        let u3 = Presentation::new("U3", FieldSpec::rationals(), vec!["e".into()], &[e3], 4).unwrap();
        for d in 0..=4 {
            assert_eq!(u3.ideal(d).unwrap().dim(), usize::from(d >= 3));
        }
    }

    #[test]
    fn morphisms() {
        let a = qplane();
        let q = Scalar::param(0);
        assert!(check_morphism(&a, &a, &LinearMap::identity(2), 4).is_ok());
        let swap = LinearMap::from_ints(&[&[0, 1], &[1, 0]]);
        let v = morphism_violation(&a, &a, &swap, 4).unwrap().unwrap();
        assert_eq!(v.degree, 2);
        let scale = LinearMap::diag(&[Scalar::int(3), q]);
        assert!(check_morphism(&a, &a, &scale, 4).is_ok());
    }

    #[test]
    fn sigma_stability() {
        let a = qplane();
        let p = Scalar::param(1);
        let st = check_sigma_ideal_stability(&a, &LinearMap::diag(&[p.clone(), Scalar::one()]), 4).unwrap();
        assert!(st.stable);
        assert_eq!(st.change_of_basis[&2], LinearMap::diag(&[p]));
        let st = check_sigma_ideal_stability(&a, &LinearMap::from_ints(&[&[1, 1], &[0, 1]]), 4).unwrap();
        assert_eq!(st.failing_degree, Some(2));
    }

    #[test]
    fn normal_form_kills_relations() {
        let a = qplane();
        let rel = a.generator_relations(2).basis()[0].clone();
        assert!(a.normal_form(&rel).unwrap().is_zero());
        let w = Tensor::monomial(2, &[0, 1, 0]);
        let nf = a.normal_form(&w).unwrap();
        assert_eq!(a.normal_form(&nf).unwrap(), nf);
    }
}
