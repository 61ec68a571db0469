//! A non-graded third space on which the factorizable twist fails to compose.
//!
//! `A` and `B` are free, `C` has the single relation `D^k c_k + λ`. Twisting `C` past
//! the hom generators `g ∈ C₁^*⊗B₁` forces `λ(g − ĝ) = 0`; the composite generators
//! `Σ_j h[n,j]⊗g[j,l]` then need `λ Σ_j (h⊗g − ĥ⊗ĝ) = 0` in `H₁⊗G₁`, which fails
//! as soon as `ĥ ≠ h` survives the forced relations.

use crate::cohom::{z_code, z_names};
use crate::error::{Error, Result};
use crate::linmap::LinearMap;
use crate::presentation::FilteredPresentation;
use crate::report::CheckItem;
use crate::scalar::{FieldSpec, Scalar};
use crate::subspace::{bi_reduce, Echelon, Subspace};
use crate::tensor::{add_term, Tensor, Vector};
use crate::ttp::Pairs;
use crate::twist::deform::FactorizableTwist;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct NonGradedSetup {
    pub sigma_a: LinearMap,
    pub sigma_b: LinearMap,
    pub sigma_c: LinearMap,
    pub lambda: Scalar,
    pub d: Vec<Scalar>,
}

impl NonGradedSetup {
    /// One `σ` for every space, as in a factorizable collection.
    pub fn collection(sigma: LinearMap, lambda: Scalar, d: Vec<Scalar>) -> Self {
        NonGradedSetup { sigma_a: sigma.clone(), sigma_b: sigma.clone(), sigma_c: sigma, lambda, d }
    }
}

impl Default for NonGradedSetup {
    fn default() -> Self {
        NonGradedSetup::collection(
            LinearMap::from_ints(&[&[1, 1], &[0, 1]]),
            Scalar::one(),
            vec![Scalar::one(), Scalar::zero()],
        )
    }
}

#[derive(Clone, Debug)]
pub struct NonGradedOutcome {
    pub c: FilteredPresentation,
    /// `span{λ(g − ĝ)}` in the free `G₁`.
    pub forced: Subspace,
    pub items: Vec<CheckItem>,
    pub failure_detected: bool,
    /// `(n, l)` of the first composite generator whose constraint survives.
    pub witness: Option<(usize, usize)>,
}

/// The relation as a vector on `𝕜 ⊕ C₁`: code 0 is the unit, code `1 + k` is `c_k`.
fn relation_vector(setup: &NonGradedSetup) -> Vector {
    let mut v = Vector::new();
    add_term(&mut v, 0, &setup.lambda);
    for (k, x) in setup.d.iter().enumerate() {
        add_term(&mut v, 1 + k as u64, x);
    }
    v
}

/// `τ̂(r ⊗ x) = Σ_k D^k x̂⊗c_k + λ x⊗1`, reduced modulo the relation on the right;
/// returns the coefficient vectors on the left, one per surviving right monomial.
fn forced_coefficients(setup: &NonGradedSetup, x: &Vector, x_hat: &Vector, rel: &Echelon) -> Vec<Vector> {
    let mut pairs = Pairs::new();
    for (k, dk) in setup.d.iter().enumerate() {
        for (code, c) in x_hat {
            let e = pairs.entry((*code, 1 + k as u64)).or_insert_with(Scalar::zero);
            *e = &*e + &(dk * c);
        }
    }
    for (code, c) in x {
        let e = pairs.entry((*code, 0)).or_insert_with(Scalar::zero);
        *e = &*e + &(&setup.lambda * c);
    }
    pairs.retain(|_, c| !c.is_zero());
    let mut by_right: BTreeMap<u64, Vector> = BTreeMap::new();
    for ((l, r), c) in bi_reduce(&pairs, &Echelon::new(), rel) {
        add_term(by_right.entry(r).or_default(), l, &c);
    }
    by_right.into_values().collect()
}

pub fn nongraded_counterexample(setup: &NonGradedSetup) -> Result<NonGradedOutcome> {
    let (n, m, p) = (setup.sigma_a.rows(), setup.sigma_b.rows(), setup.sigma_c.rows());
    if setup.d.len() != p {
        return Err(Error::DimensionMismatch(format!("D must have {p} entries")));
    }
    if setup.d.iter().all(Scalar::is_zero) {
        return Err(Error::Precondition("D must be nonzero".into()));
    }
    let c_gens: Vec<String> = (1..=p).map(|k| format!("c{k}")).collect();
    let mut comps = BTreeMap::from([(0, Tensor::from_vector(p, 0, [(0, setup.lambda.clone())].into()))]);
    comps.insert(1, Tensor::from_vector(p, 1, setup.d.iter().enumerate().map(|(k, x)| (k as u64, x.clone())).collect()));
    let c = FilteredPresentation::new("C", FieldSpec::rationals(), c_gens, vec![comps])?;

    let rel = Subspace::span_vectors(1 + p, 1, [relation_vector(setup)].iter());
    let shift_ab = FactorizableTwist::new(setup.sigma_a.clone(), setup.sigma_b.clone())?.shift_map(1)?;
    let shift_bc = FactorizableTwist::new(setup.sigma_b.clone(), setup.sigma_c.clone())?.shift_map(1)?;
    let dg = m * p;

    // g[j,l] sits at z_code(j, l, m): j indexes B₁, l indexes C₁^*.
    let mut forced = Subspace::zero(dg, 1);
    for g in 0..dg {
        let x: Vector = [(g as u64, Scalar::one())].into();
        let x_hat = shift_bc.apply_sparse(&x);
        for v in forced_coefficients(setup, &x, &x_hat, rel.echelon()) {
            forced.insert_vector(&v);
        }
    }

    let both = shift_ab.kron(&shift_bc);
    let mut witness = None;
    'outer: for a in 0..n {
        for l in 0..p {
            let mut u = Vector::new();
            for j in 0..m {
                add_term(&mut u, (z_code(a, j, n) * dg + z_code(j, l, m)) as u64, &Scalar::one());
            }
            let u_hat = both.apply_sparse(&u);
            for v in forced_coefficients(setup, &u, &u_hat, rel.echelon()) {
                let pairs: Pairs = v.into_iter().map(|(code, x)| ((code / dg as u64, code % dg as u64), x)).collect();
                if !bi_reduce(&pairs, &Echelon::new(), forced.echelon()).is_empty() {
                    witness = Some((a, l));
                    break 'outer;
                }
            }
        }
    }
    let failure_detected = witness.is_some();
    let items = vec![
        CheckItem::new("relations forced on G₁", true, format!("dim {} of {}", forced.dim(), dg)),
        CheckItem::new(
            "τ̂ on A,C extends to (H∘G)⊗C",
            !failure_detected,
            match witness {
                Some((a, l)) => format!("constraint for {} survives", z_names(n, p)[z_code(a, l, n)]),
                None => String::new(),
            },
        ),
    ];
    Ok(NonGradedOutcome { c, forced, items, failure_detected, witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_setup_fails() {
        let out = nongraded_counterexample(&NonGradedSetup::default()).unwrap();
        assert!(out.failure_detected);
        assert!(!out.c.is_graded());
        assert!(out.forced.dim() > 0);
    }

    #[test]
    fn graded_control_passes() {
        let setup = NonGradedSetup { lambda: Scalar::zero(), ..NonGradedSetup::default() };
        let out = nongraded_counterexample(&setup).unwrap();
        assert!(!out.failure_detected);
        assert!(out.c.is_graded());
        assert_eq!(out.forced.dim(), 0);
    }

    #[test]
    fn identity_twist_passes() {
        let setup = NonGradedSetup::collection(LinearMap::identity(2), Scalar::one(), vec![Scalar::one(), Scalar::zero()]);
        assert!(!nongraded_counterexample(&setup).unwrap().failure_detected);
    }

    #[test]
    fn diagonal_collection_fails() {
        let s = LinearMap::diag(&[Scalar::int(2), Scalar::one()]);
        let setup = NonGradedSetup::collection(s, Scalar::int(3), vec![Scalar::one(), Scalar::int(1)]);
        assert!(nongraded_counterexample(&setup).unwrap().failure_detected);
    }

    #[test]
    fn twist_on_middle_space_alone_is_absorbed() {
        let setup = NonGradedSetup {
            sigma_b: LinearMap::from_ints(&[&[1, 1], &[0, 1]]),
            sigma_a: LinearMap::identity(2),
            sigma_c: LinearMap::identity(2),
            ..NonGradedSetup::default()
        };
        assert!(!nongraded_counterexample(&setup).unwrap().failure_detected);
    }

    #[test]
    fn zero_d_is_rejected() {
        let setup = NonGradedSetup { d: vec![Scalar::zero(), Scalar::zero()], ..NonGradedSetup::default() };
        assert!(matches!(nongraded_counterexample(&setup), Err(Error::Precondition(_))));
    }
}
