//! Fixed-point computation of `hom^Υ[B,A]` for an arbitrary bijection `τ̂` on `B₁⊗E₁`.

use crate::cohom::{z_code, z_names, HomObject};
use crate::error::{Error, Result};
use crate::linmap::LinearMap;
use crate::presentation::Presentation;
use crate::scalar::Scalar;
use crate::subspace::{bi_reduce, Echelon, Subspace};
use crate::tensor::{add_term, axpy, pow_dim, Vector};
use crate::ttp::{BiElement, Pairs, TwistingMap};
use std::collections::BTreeMap;

/// Groups the `E` parts of a remainder by their `B` monomial.
fn coefficients_by_b(rem: &Pairs) -> BTreeMap<u64, Vector> {
    let mut out: BTreeMap<u64, Vector> = BTreeMap::new();
    for ((e, b), x) in rem {
        add_term(out.entry(*b).or_default(), *e, x);
    }
    out
}

struct Saturation {
    t: TwistingMap,
    b: Presentation,
    cap: usize,
    ideal: Vec<Subspace>,
}

impl Saturation {
    fn insert(&mut self, d: usize, v: &Vector) -> bool {
        self.ideal[d].insert_vector(v)
    }

    fn seeds(&mut self, a: &Presentation) -> Result<()> {
        let (n, m) = (a.dim(), self.b.dim());
        let phi: Vec<BiElement> = (0..n)
            .map(|i| {
                let coeffs = (0..m).map(|j| ((z_code(i, j, n) as u64, j as u64), Scalar::one())).collect();
                BiElement { a_deg: 1, b_deg: 1, coeffs }
            })
            .collect();
        for d in 1..=self.cap {
            let jd = self.b.ideal(d)?.echelon().clone();
            for r in a.ideal(d)?.basis() {
                let mut acc = Pairs::new();
                for (idx, c) in r.terms() {
                    let mut img = BiElement::unit();
                    for &i in &idx.0 {
                        img = self.t.multiply(&img, &phi[i]);
                    }
                    for (key, x) in img.coeffs {
                        let e = acc.entry(key).or_insert_with(Scalar::zero);
                        *e = &*e + &(c * &x);
                    }
                }
                acc.retain(|_, x| !x.is_zero());
                for v in coefficients_by_b(&bi_reduce(&acc, &Echelon::new(), &jd)).values() {
                    self.insert(d, v);
                }
            }
        }
        Ok(())
    }

    fn b_ideal_moves(&mut self) -> Result<()> {
        let e = self.t.a().dim();
        for p in 2..=self.b.cap() {
            let gens = self.b.minimal_generators(p)?;
            if gens.is_zero() {
                continue;
            }
            let jp = self.b.ideal(p)?.echelon().clone();
            for r in 1..=self.cap {
                let cols = self.t.columns(p, r);
                let er = pow_dim(e, r);
                for row in gens.rows() {
                    for zr in 0..er {
                        let mut img = Vector::new();
                        for (beta, x) in row {
                            axpy(&mut img, x, &cols[(beta * er + zr) as usize]);
                        }
                        let pairs: Pairs = img.into_iter().map(|(code, x)| ((code % er, code / er), x)).collect();
                        for v in coefficients_by_b(&bi_reduce(&pairs, &Echelon::new(), &jp)).values() {
                            self.insert(r, v);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// One pass of `b ⊗ l` moves and two-sided padding; reports growth.
    fn close_once(&mut self) -> bool {
        let e = self.t.a().dim();
        let m = self.b.dim() as u64;
        let mut grew = false;
        for k in 1..=self.cap {
            let cols = self.t.columns(1, k);
            let ek = pow_dim(e, k);
            let rows: Vec<Vector> = self.ideal[k].rows().cloned().collect();
            for row in &rows {
                for b in 0..m {
                    let mut img = Vector::new();
                    for (z, x) in row {
                        axpy(&mut img, x, &cols[(b * ek + z) as usize]);
                    }
                    let pairs: Pairs = img.into_iter().map(|(code, x)| ((code % ek, code / ek), x)).collect();
                    for v in coefficients_by_b(&pairs).values() {
                        grew |= self.insert(k, v);
                    }
                }
            }
            if k < self.cap {
                let cur = self.ideal[k].clone();
                for v in cur.pad_left(1).rows().chain(cur.pad_right(1).rows()) {
                    grew |= self.insert(k + 1, v);
                }
            }
        }
        grew
    }
}

/// Smallest relation ideal on `E₁ = B₁^*⊗A₁` making `a_i ↦ Σ_j z[i,j]⊗b_j` an algebra map
/// into the `τ`-twisted product, with `τ` compatible with both ideals.
pub fn saturate_hom_general(a: &Presentation, b: &Presentation, tau_hat: &LinearMap, up_to: usize) -> Result<HomObject> {
    let (n, m) = (a.dim(), b.dim());
    let e = n * m;
    if tau_hat.rows() != m * e || tau_hat.cols() != m * e {
        return Err(Error::DimensionMismatch(format!("τ̂ must be {0}x{0} on B₁⊗E₁", m * e)));
    }
    let cap = up_to.min(a.cap()).min(b.cap());
    let field = a.field().join(b.field())?;
    let free = Presentation::new("E", field.clone(), z_names(n, m), &[], cap)?;
    let b = b.with_cap(cap);
    let t = TwistingMap::unchecked(tau_hat.clone(), &free, &b)?;
    let ideal = (0..=cap).map(|d| Subspace::zero(e, d)).collect();
    let mut s = Saturation { t, b: b.clone(), cap, ideal };
    s.seeds(a)?;
    s.b_ideal_moves()?;
    while s.close_once() {}
    let name = format!("hom^τ[{},{}]", b.name(), a.name());
    let pres = Presentation::from_components(name, field, z_names(n, m), s.ideal);
    Ok(HomObject::new(pres, &b, &a.with_cap(cap), Some(tau_hat.clone())))
}
