//! Points of a twisted hom object with coordinates in `C = H⊗_τB`.

use crate::cohom::{z_code, HomObject};
use crate::error::{Error, Result};
use crate::linmap::LinearMap;
use crate::presentation::{morphism_violation, Presentation};
use crate::report::CheckItem;
use crate::scalar::Scalar;
use crate::ttp::{BiElement, Pairs, TwistingMap};

/// Images `z[e] ↦ 𝐡_e ∈ H₁` and `b_i ↦ 𝐛_i ∈ B₁` inside `H⊗_τB`.
#[derive(Clone, Debug)]
pub struct CPointData {
    pub h_space: Presentation,
    /// `τ̂` on `B₁⊗H₁`.
    pub tau: LinearMap,
    /// Column `e` holds the coordinates of `𝐡_e` in `H₁`.
    pub h: LinearMap,
    /// Column `i` holds the coordinates of `𝐛_i` in `B₁`.
    pub beta: LinearMap,
}

fn add_into(acc: &mut Pairs, x: &BiElement, k: &Scalar) {
    for (key, c) in &x.coeffs {
        let e = acc.entry(*key).or_insert_with(Scalar::zero);
        *e = &*e + &(c * k);
    }
}

fn sum(parts: impl IntoIterator<Item = (BiElement, Scalar)>, a_deg: usize, b_deg: usize) -> BiElement {
    let mut coeffs = Pairs::new();
    for (x, k) in parts {
        add_into(&mut coeffs, &x, &k);
    }
    coeffs.retain(|_, c| !c.is_zero());
    BiElement { a_deg, b_deg, coeffs }
}

struct Images {
    h: Vec<BiElement>,
    b: Vec<BiElement>,
}

impl Images {
    fn new(data: &CPointData) -> Self {
        let h = (0..data.h.cols())
            .map(|e| {
                let coeffs = data.h.column(e).into_iter().map(|(r, x)| ((r as u64, 0), x)).collect();
                BiElement { a_deg: 1, b_deg: 0, coeffs }
            })
            .collect();
        let b = (0..data.beta.cols())
            .map(|i| {
                let coeffs = data.beta.column(i).into_iter().map(|(k, x)| ((0, k as u64), x)).collect();
                BiElement { a_deg: 0, b_deg: 1, coeffs }
            })
            .collect();
        Images { h, b }
    }
}

/// Checks `𝐛_i𝐡_e = Σ T 𝐡_{e'}𝐛_j` in `C`, then compares the two sides of the point
/// criterion: `a_j ↦ Σ_k 𝐡_{z[j,k]}𝐛_k` kills the relations of `A` exactly when
/// `z ↦ 𝐡` kills the relations of the hom object.
pub fn check_c_point(hom: &HomObject, data: &CPointData, up_to: usize) -> Result<Vec<CheckItem>> {
    let (a, b) = (&hom.target, &hom.source);
    let (n, m) = (a.dim(), b.dim());
    let e = n * m;
    let dh = data.h_space.dim();
    if data.h.rows() != dh || data.h.cols() != e {
        return Err(Error::DimensionMismatch(format!("𝐡 must be {dh}x{e}")));
    }
    if data.beta.rows() != m || data.beta.cols() != m {
        return Err(Error::DimensionMismatch(format!("𝐛 must be {m}x{m}")));
    }
    let cap = up_to.min(a.cap()).min(b.cap()).min(data.h_space.cap());
    if let Some(v) = morphism_violation(b, b, &data.beta, cap)? {
        return Err(Error::Precondition(format!("b ↦ 𝐛 does not respect a degree {} relation of {}", v.degree, b.name())));
    }
    let t = TwistingMap::unchecked(data.tau.clone(), &data.h_space, b)?;
    let img = Images::new(data);
    let twist = hom.twist.clone().unwrap_or_else(|| LinearMap::identity(m * e));

    for i in 0..m {
        for z in 0..e {
            let lhs = t.reduce(&t.multiply(&img.b[i], &img.h[z]))?;
            let parts = (0..m).flat_map(|j| (0..e).map(move |z2| (j, z2))).filter_map(|(j, z2)| {
                let k = twist.get(j * e + z2, i * e + z);
                (!k.is_zero()).then(|| (t.multiply(&img.h[z2], &img.b[j]), k.clone()))
            });
            let rhs = t.reduce(&sum(parts, 1, 1))?;
            if lhs != rhs {
                return Err(Error::Precondition(format!("𝐛_{} and 𝐡_{} do not commute through τ̂", i + 1, z + 1)));
            }
        }
    }
    let mut items = vec![CheckItem::new("commutation through τ̂", true, "")];

    // a_j ↦ Σ_k 𝐡_{z[j,k]}𝐛_k
    let point: Vec<BiElement> = (0..n)
        .map(|j| sum((0..m).map(|k| (t.multiply(&img.h[z_code(j, k, n)], &img.b[k]), Scalar::one())), 1, 1))
        .collect();
    let mut extends = None;
    'rels: for d in 2..=cap {
        for rel in a.generator_relations(d).basis() {
            let parts = rel.terms().map(|(w, c)| {
                let prod = w.0.iter().fold(BiElement::unit(), |acc, &g| t.multiply(&acc, &point[g]));
                (prod, c.clone())
            });
            if !t.reduce(&sum(parts, d, d))?.is_zero() {
                extends = Some(d);
                break 'rels;
            }
        }
    }
    items.push(match extends {
        None => CheckItem::new("a ↦ 𝐡𝐛 respects the relations of A", true, format!("degrees <= {cap}")),
        Some(d) => CheckItem::new("a ↦ 𝐡𝐛 respects the relations of A", false, format!("fails at degree {d}")),
    });
    let morphism = morphism_violation(&hom.pres, &data.h_space, &data.h, cap)?;
    items.push(match &morphism {
        None => CheckItem::new("z ↦ 𝐡 respects the relations of the hom object", true, format!("degrees <= {cap}")),
        Some(v) => CheckItem::new("z ↦ 𝐡 respects the relations of the hom object", false, format!("fails at degree {}", v.degree)),
    });
    let agree = extends.is_none() == morphism.is_none();
    items.push(CheckItem::new("both criteria agree", agree, ""));
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;
    use crate::tensor::Tensor;
    use crate::twist::{hom_upsilon, FactorizableTwist};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn plane() -> Presentation {
        let f = FieldSpec::new(&["q", "p"]).unwrap();
        let q = f.param("q").unwrap();
        let rel = Tensor::from_terms(2, 2, &[(&[0, 1], Scalar::one()), (&[1, 0], -q)]).unwrap();
        Presentation::new("Aq", f, vec!["x".into(), "y".into()], &[rel], 3).unwrap()
    }

    fn diag_twist() -> FactorizableTwist {
        let p = FieldSpec::new(&["q", "p"]).unwrap().param("p").unwrap();
        let d = LinearMap::diag(&[p, Scalar::one()]);
        FactorizableTwist::new(d.clone(), d).unwrap()
    }

    fn on_hom(hom: &HomObject, h: LinearMap, beta: LinearMap) -> CPointData {
        CPointData { h_space: hom.pres.clone(), tau: hom.twist.clone().unwrap(), h, beta }
    }

    fn agree(items: &[CheckItem]) -> bool {
        items.last().unwrap().passed
    }

    #[test]
    fn canonical_point_holds() {
        let a = plane();
        let hom = hom_upsilon(&a, &a, &diag_twist(), 3).unwrap();
        let items = check_c_point(&hom, &on_hom(&hom, LinearMap::identity(4), LinearMap::identity(2)), 3).unwrap();
        assert!(items.iter().all(|i| i.passed), "{items:?}");
    }

    #[test]
    fn zero_point_holds_degenerately() {
        let a = plane();
        let hom = hom_upsilon(&a, &a, &diag_twist(), 3).unwrap();
        let items = check_c_point(&hom, &on_hom(&hom, LinearMap::zero(4, 4), LinearMap::identity(2)), 3).unwrap();
        assert!(items.iter().all(|i| i.passed));
    }

    #[test]
    fn corpus_agrees_case_by_case() {
        let a = plane();
        let tw = diag_twist();
        let hom = hom_upsilon(&a, &a, &tw, 3).unwrap();
        let c = tw.shift_map(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut outcomes = Vec::new();
        for _ in 0..6 {
            let (s, t) = (Scalar::int(rng.gen_range(-2..=2)), Scalar::int(rng.gen_range(-2..=2)));
            let h = LinearMap::identity(4).scale(&s).add(&c.scale(&t)).unwrap();
            let beta = LinearMap::diag(&[Scalar::int(rng.gen_range(1..=3)), Scalar::int(rng.gen_range(1..=3))]);
            let items = check_c_point(&hom, &on_hom(&hom, h, beta), 3).unwrap();
            assert!(agree(&items), "{items:?}");
            outcomes.push(items[1].passed);
        }
        let mut swap = LinearMap::zero(4, 4);
        for (r, col) in [1, 0, 3, 2].into_iter().enumerate() {
            swap.set(r, col, Scalar::one());
        }
        let items = check_c_point(&hom, &on_hom(&hom, swap, LinearMap::identity(2)), 3);
        match items {
            Ok(items) => assert!(agree(&items)),
            Err(e) => assert!(matches!(e, Error::Precondition(_))),
        }
        assert!(outcomes.iter().any(|&x| x));
    }

    #[test]
    fn free_target_fails_both_ways() {
        let a = plane();
        let tw = diag_twist();
        let hom = hom_upsilon(&a, &a, &tw, 3).unwrap();
        let free = Presentation::new("E", a.field().clone(), hom.pres.gens().to_vec(), &[], 3).unwrap();
        let data = CPointData { h_space: free, tau: tw.tau_hat().unwrap(), h: LinearMap::identity(4), beta: LinearMap::identity(2) };
        let items = check_c_point(&hom, &data, 3).unwrap();
        assert!(!items[1].passed && !items[2].passed && agree(&items));
    }

    #[test]
    fn broken_commutation_is_a_precondition_error() {
        let a = plane();
        let hom = hom_upsilon(&a, &a, &diag_twist(), 3).unwrap();
        let data = CPointData { tau: LinearMap::identity(8), ..on_hom(&hom, LinearMap::identity(4), LinearMap::identity(2)) };
        assert!(matches!(check_c_point(&hom, &data, 3), Err(Error::Precondition(_))));
    }
}
