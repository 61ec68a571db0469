//! The `su(2)` R-matrix, its quantum plane, the RTT bialgebra and the multiparametric twist.
//!
//! `R` is stored as `M[(k,l)][(i,j)] = R_{ij}^{kl}` with pair code `2·first + second`.

use crate::cohom::{e_marked, end_object, initial_factor_map, z_code, z_names, DiagramObject};
use crate::error::{Error, Result};
use crate::linmap::LinearMap;
use crate::presentation::Presentation;
use crate::products::first_mismatch;
use crate::report::CheckItem;
use crate::scalar::{FieldSpec, Scalar};
use crate::subspace::Subspace;
use crate::tensor::{add_term, Vector};
use crate::twist::deform::{hom_upsilon, FactorizableTwist};
use std::collections::BTreeMap;

fn pair(a: usize, b: usize) -> usize {
    2 * a + b
}

/// `R_{11}^{11} = R_{22}^{22} = 1`, `R_{12}^{12} = R_{21}^{21} = q⁻¹`, `R_{21}^{12} = 1 − q⁻²`.
pub fn r_matrix(q: &Scalar) -> Result<LinearMap> {
    let qi = q.checked_inv()?;
    let mut r = LinearMap::zero(4, 4);
    r.set(pair(0, 0), pair(0, 0), Scalar::one());
    r.set(pair(1, 1), pair(1, 1), Scalar::one());
    r.set(pair(0, 1), pair(0, 1), qi.clone());
    r.set(pair(1, 0), pair(1, 0), qi.clone());
    r.set(pair(0, 1), pair(1, 0), &Scalar::one() - &(&qi * &qi));
    Ok(r)
}

/// `e_i⊗e_j ↦ e_j⊗e_i`.
pub fn flip_matrix() -> LinearMap {
    let mut p = LinearMap::zero(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            p.set(pair(j, i), pair(i, j), Scalar::one());
        }
    }
    p
}

pub fn yang_baxter_holds(r: &LinearMap) -> Result<bool> {
    let id = LinearMap::identity(2);
    let r12 = r.kron(&id);
    let r23 = id.kron(r);
    let p23 = id.kron(&flip_matrix());
    let r13 = p23.compose(&r12)?.compose(&p23)?;
    let lhs = r12.compose(&r13)?.compose(&r23)?;
    let rhs = r23.compose(&r13)?.compose(&r12)?;
    Ok(lhs == rhs)
}

/// `R^φ = (φ⁻¹⊗id) R (id⊗φ)`.
pub fn r_phi(r: &LinearMap, phi: &LinearMap) -> Result<LinearMap> {
    let id = LinearMap::identity(2);
    phi.inverse()?.kron(&id).compose(r)?.compose(&id.kron(phi))
}

/// Quadratic algebra with relations `R_{ij}^{kl} a_k a_l − a_j a_i`.
pub fn r_algebra(name: &str, field: &FieldSpec, r: &LinearMap, cap: usize) -> Result<Presentation> {
    let rels = r.add(&flip_matrix().scale(&-Scalar::one()))?;
    let cols: Vec<Vector> = rels.columns().into_iter().map(|c| c.into_iter().map(|(k, x)| (k as u64, x)).collect()).collect();
    let span = Subspace::span_vectors(2, 2, cols.iter());
    Presentation::from_generators(name, field.clone(), vec!["x".into(), "y".into()], BTreeMap::from([(2, span)]), cap)
}

/// The 16 vectors `R_{ij}^{kl} z[k,n] z[l,m] − z[j,l] z[i,k] R_{kl}^{nm}` over `E₁⊗E₁`.
pub fn rtt_vectors(r: &LinearMap) -> Vec<Vector> {
    let rr = |i: usize, j: usize, k: usize, l: usize| r.get(pair(k, l), pair(i, j)).clone();
    let zz = |a: usize, b: usize| (a * 4 + b) as u64;
    let mut out = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            for n in 0..2 {
                for m in 0..2 {
                    let mut v = Vector::new();
                    for k in 0..2 {
                        for l in 0..2 {
                            add_term(&mut v, zz(z_code(k, n, 2), z_code(l, m, 2)), &rr(i, j, k, l));
                            add_term(&mut v, zz(z_code(j, l, 2), z_code(i, k, 2)), &-rr(k, l, n, m));
                        }
                    }
                    out.push(v);
                }
            }
        }
    }
    out
}

/// The FRT bialgebra of `R`, on generators `z[i,j]`.
pub fn frt_algebra(field: &FieldSpec, r: &LinearMap, cap: usize) -> Result<Presentation> {
    let span = Subspace::span_vectors(4, 2, rtt_vectors(r).iter());
    Presentation::from_generators("M_q(2)", field.clone(), z_names(2, 2), BTreeMap::from([(2, span)]), cap)
}

#[derive(Clone, Debug)]
pub struct FrtReport {
    pub items: Vec<CheckItem>,
    pub a_r: Presentation,
    pub frt: Presentation,
}

fn commutes_with_square(r: &LinearMap, phi: &LinearMap) -> Result<bool> {
    let pp = phi.kron(phi);
    Ok(r.compose(&pp)? == pp.compose(r)?)
}

pub fn frt_suite(field: &FieldSpec, q: &Scalar, phi: &LinearMap, up_to: usize) -> Result<FrtReport> {
    if phi.rows() != 2 || !phi.is_square() {
        return Err(Error::DimensionMismatch("φ must be 2x2".into()));
    }
    let r = r_matrix(q)?;
    if !commutes_with_square(&r, phi)? {
        return Err(Error::Precondition("φ⊗φ does not commute with R".into()));
    }
    let cap = up_to.max(2);
    let mut items = vec![CheckItem::new("Yang-Baxter equation", yang_baxter_holds(&r)?, "")];

    let a_r = r_algebra("A_R", field, &r, cap)?;
    let plane = Vector::from([(1, Scalar::one()), (2, -q.clone())]);
    let gen = a_r.generator_relations(2);
    let is_plane = gen.dim() == 1 && gen.contains_vector(&plane);
    items.push(CheckItem::new("A_R is the quantum plane", is_plane, format!("relation dim {}", gen.dim())));

    let frt = frt_algebra(field, &r, cap)?;
    let rtt = frt.generator_relations(2);
    items.push(CheckItem::new("RTT relations", rtt.dim() == 6, format!("dim {}", rtt.dim())));
    let marked = e_marked(&a_r, 2)?;
    items.push(CheckItem::new("e[A_R] degree 2 = RTT span", *marked.ideal(2)? == rtt, ""));

    let dg = DiagramObject::new(&frt, &a_r, &a_r, LinearMap::identity(4), None, cap);
    let factor = dg.and_then(|dg| initial_factor_map(&dg, cap));
    items.push(match factor {
        Ok(_) => CheckItem::new("end[A_R] ↠ FRT image", true, format!("degrees <= {cap}")),
        Err(e) => CheckItem::new("end[A_R] ↠ FRT image", false, e.to_string()),
    });

    let tw = FactorizableTwist::new(phi.clone(), phi.clone())?;
    let upsilon = hom_upsilon(&a_r, &a_r, &tw, up_to)?.pres;
    let a_phi = r_algebra("A_Rφ", field, &r_phi(&r, phi)?, cap)?;
    let end_phi = end_object(&a_phi.with_cap(up_to))?.pres;
    items.push(match first_mismatch(&upsilon, &end_phi, &LinearMap::identity(4))? {
        None => CheckItem::new("end^Υ[A_R] = end[A_Rφ]", true, format!("degrees <= {up_to}")),
        Some(d) => CheckItem::new("end^Υ[A_R] = end[A_Rφ]", false, format!("ideals differ at degree {d}")),
    });
    Ok(FrtReport { items, a_r, frt })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::all_passed;

    fn field() -> FieldSpec {
        FieldSpec::new(&["q", "p"]).unwrap()
    }

    #[test]
    fn untwisted_suite_passes() {
        let f = field();
        let rep = frt_suite(&f, &f.param("q").unwrap(), &LinearMap::identity(2), 3).unwrap();
        assert!(all_passed(&rep.items), "{:?}", rep.items);
    }

    #[test]
    fn multiparametric_suite_passes() {
        let f = field();
        let p = f.param("p").unwrap();
        let phi = LinearMap::diag(&[p.clone(), p.inv()]);
        let rep = frt_suite(&f, &f.param("q").unwrap(), &phi, 2).unwrap();
        assert!(all_passed(&rep.items), "{:?}", rep.items);
    }

    #[test]
    fn twisted_matrix_gives_rescaled_plane() {
        let f = field();
        let (q, p) = (f.param("q").unwrap(), f.param("p").unwrap());
        let phi = LinearMap::diag(&[p.clone(), p.inv()]);
        let a = r_algebra("A", &f, &r_phi(&r_matrix(&q).unwrap(), &phi).unwrap(), 2).unwrap();
        let rel = Vector::from([(1, Scalar::one()), (2, -(&(&p * &p) * &q))]);
        assert!(a.generator_relations(2).contains_vector(&rel));
    }

    #[test]
    fn non_commuting_phi_is_rejected() {
        let f = field();
        let u = LinearMap::from_ints(&[&[1, 1], &[0, 1]]);
        assert!(matches!(frt_suite(&f, &f.param("q").unwrap(), &u, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn flip_is_not_a_deformation() {
        let f = field();
        assert!(yang_baxter_holds(&flip_matrix()).unwrap());
        let sym = r_algebra("S", &f, &flip_matrix(), 2).unwrap();
        assert_eq!(sym.generator_relations(2).dim(), 0);
    }
}
