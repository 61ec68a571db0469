//! The 2-form `χ` on `end[A]`, the convolution-twisted products and the twist equivalences.
//!
//! A `z`-monomial is a word of generator codes; code `c` stands for `z[i,j]` with
//! `i = c % n`, `j = c / n`.

use crate::cohom::{end_object, hom_object, z_code};
use crate::error::{Error, Result};
use crate::linmap::LinearMap;
use crate::presentation::{check_sigma_ideal_stability, Presentation};
use crate::products::first_mismatch;
use crate::report::CheckItem;
use crate::scalar::Scalar;
use crate::subspace::{kernel, Subspace};
use crate::tensor::{add_term, pow_dim, MultiIndex, Tensor, Vector};
use crate::twist::deform::{hom_upsilon, sigma_deform, FactorizableTwist, Powers};
use std::collections::BTreeMap;

/// Which matrix entry `χ` reads for a right-hand generator `z[i,j]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Orientation {
    /// Read `X[i][j]` instead of `X[j][i]`.
    pub transposed: bool,
    /// Sign of the power of `σ` paired with a left factor of degree `r`.
    pub sign: i64,
}

impl Orientation {
    /// The convention under which `z ·_χ ž⁽¹⁾ = z·z`.
    pub const PINNED: Orientation = Orientation { transposed: false, sign: -1 };

    pub fn all() -> [Orientation; 4] {
        [
            Orientation { transposed: false, sign: -1 },
            Orientation { transposed: false, sign: 1 },
            Orientation { transposed: true, sign: -1 },
            Orientation { transposed: true, sign: 1 },
        ]
    }
}

#[derive(Clone, Debug)]
pub struct Cocycle {
    pub sigma: LinearMap,
    pub n: usize,
    pub orientation: Orientation,
    powers: BTreeMap<i64, LinearMap>,
}

type Word = [usize];

impl Cocycle {
    pub fn new(sigma: LinearMap, orientation: Orientation) -> Result<Self> {
        if !sigma.is_square() {
            return Err(Error::DimensionMismatch("σ must be square".into()));
        }
        sigma.inverse()?;
        let n = sigma.rows();
        Ok(Cocycle { sigma, n, orientation, powers: BTreeMap::new() })
    }

    pub fn pinned(sigma: LinearMap) -> Result<Self> {
        Cocycle::new(sigma, Orientation::PINNED)
    }

    /// Caches `σ^k` for `|k| ≤ up_to`.
    pub fn with_powers(mut self, up_to: usize) -> Result<Self> {
        let up_to = up_to as i64;
        for k in -up_to..=up_to {
            self.powers.insert(k, self.sigma.pow(k)?);
        }
        Ok(self)
    }

    fn power(&self, k: i64) -> LinearMap {
        match self.powers.get(&k) {
            Some(m) => m.clone(),
            None => self.sigma.pow(k).expect("σ is invertible"),
        }
    }

    fn entry(&self, x: &LinearMap, code: usize) -> Scalar {
        let (i, j) = (code % self.n, code / self.n);
        if self.orientation.transposed {
            x.get(i, j).clone()
        } else {
            x.get(j, i).clone()
        }
    }

    fn eval_with(&self, left: &Word, right: &Word, sign: i64) -> Scalar {
        if !counit_word(left, self.n) {
            return Scalar::zero();
        }
        if right.is_empty() {
            return Scalar::one();
        }
        let x = self.power(sign * left.len() as i64);
        right.iter().fold(Scalar::one(), |acc, &c| &acc * &self.entry(&x, c))
    }

    /// `χ(L⊗R) = ε(L) Π_t [σ^{∓deg L}]` over the generators of `R`.
    pub fn eval(&self, left: &Word, right: &Word) -> Scalar {
        self.eval_with(left, right, self.orientation.sign)
    }

    /// The convolution inverse, with the opposite power.
    pub fn eval_inverse(&self, left: &Word, right: &Word) -> Scalar {
        self.eval_with(left, right, -self.orientation.sign)
    }
}

pub fn cocycle_eval(chi: &Cocycle, left: &Word, right: &Word) -> Scalar {
    chi.eval(left, right)
}

fn counit_word(w: &Word, n: usize) -> bool {
    w.iter().all(|&c| c % n == c / n)
}

fn words(base: usize, d: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..pow_dim(base, d)).map(move |c| MultiIndex::decode(c, base, d).0)
}

/// `Δ(z_I^J) = Σ_K z_I^K ⊗ z_K^J`.
fn coproduct(w: &Word, n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    words(n, w.len())
        .map(|k| {
            let left = w.iter().zip(&k).map(|(&c, &kk)| z_code(c % n, kk, n)).collect();
            let right = w.iter().zip(&k).map(|(&c, &kk)| z_code(kk, c / n, n)).collect();
            (left, right)
        })
        .collect()
}

fn concat(a: &Word, b: &Word) -> Vec<usize> {
    a.iter().chain(b).copied().collect()
}

fn encode(w: &Word, base: usize) -> u64 {
    MultiIndex(w.to_vec()).encode(base)
}

/// `μ_χ = χ ∗ μ ∗ χ⁻¹` on the free algebra over `z`; both arguments are tensors over `n²` generators.
pub fn mu_chi(chi: &Cocycle, x: &Tensor, y: &Tensor) -> Tensor {
    let (n, e) = (chi.n, chi.n * chi.n);
    let mut out = Vector::new();
    for (xi, cx) in x.terms() {
        for (yi, cy) in y.terms() {
            let k = cx * cy;
            for (x1, x23) in coproduct(&xi.0, n) {
                if !counit_word(&x1, n) {
                    continue;
                }
                for (x2, x3) in coproduct(&x23, n) {
                    if !counit_word(&x3, n) {
                        continue;
                    }
                    for (y1, y23) in coproduct(&yi.0, n) {
                        let a = chi.eval(&x1, &y1);
                        if a.is_zero() {
                            continue;
                        }
                        for (y2, y3) in coproduct(&y23, n) {
                            let b = chi.eval_inverse(&x3, &y3);
                            if !b.is_zero() {
                                add_term(&mut out, encode(&concat(&x2, &y2), e), &(&k * &(&a * &b)));
                            }
                        }
                    }
                }
            }
        }
    }
    Tensor::from_vector(e, x.degree() + y.degree(), out)
}

/// `a_I ·_χ a_J = Σ χ(z_I^K ⊗ z_J^L) a_K a_L` on the free algebra over `n` generators.
pub fn m_chi(chi: &Cocycle, x: &Tensor, y: &Tensor) -> Tensor {
    let n = chi.n;
    let mut out = Vector::new();
    for (xi, cx) in x.terms() {
        for (yi, cy) in y.terms() {
            let k = cx * cy;
            for kk in words(n, xi.degree()) {
                let left: Vec<usize> = xi.0.iter().zip(&kk).map(|(&i, &k)| z_code(i, k, n)).collect();
                if !counit_word(&left, n) {
                    continue;
                }
                for ll in words(n, yi.degree()) {
                    let right: Vec<usize> = yi.0.iter().zip(&ll).map(|(&j, &l)| z_code(j, l, n)).collect();
                    let c = chi.eval(&left, &right);
                    if !c.is_zero() {
                        add_term(&mut out, encode(&concat(&kk, &ll), n), &(&k * &c));
                    }
                }
            }
        }
    }
    Tensor::from_vector(n, x.degree() + y.degree(), out)
}

/// Presentation on the generators of `p` whose degree-`d` ideal is the kernel of
/// `w ↦ normal form of the left fold of w under product`.
fn twisted_presentation(
    p: &Presentation,
    name: String,
    up_to: usize,
    product: impl Fn(&Tensor, &Tensor) -> Tensor,
) -> Result<Presentation> {
    let base = p.dim();
    let cap = up_to.min(p.cap());
    let mut comps = Vec::with_capacity(cap + 1);
    for d in 0..=cap {
        let mut images = Vec::new();
        for (code, w) in words(base, d).enumerate() {
            let img = match w.split_first() {
                None => Tensor::monomial(base, &[]),
                Some((first, rest)) => {
                    let mut acc = Tensor::monomial(base, &[*first]);
                    for &g in rest {
                        acc = product(&acc, &Tensor::monomial(base, &[g]));
                    }
                    p.normal_form(&acc)?
                }
            };
            images.push((code as u64, img.into_coeffs()));
        }
        comps.push(Subspace::from_echelon(base, d, kernel(images)));
    }
    Ok(Presentation::from_components(name, p.field().clone(), p.gens().to_vec(), comps))
}

/// `end[A]` with the product `μ_χ`, presented on the `z` generators.
pub fn end_chi_presentation(a: &Presentation, chi: &Cocycle, up_to: usize) -> Result<Presentation> {
    let end = end_object(&a.with_cap(up_to.min(a.cap())))?.pres;
    let name = format!("{}_χ", end.name());
    twisted_presentation(&end, name, up_to, |x, y| mu_chi(chi, x, y))
}

/// `A` with the product `m_χ`.
pub fn a_chi_presentation(a: &Presentation, chi: &Cocycle, up_to: usize) -> Result<Presentation> {
    twisted_presentation(a, format!("{}_χ", a.name()), up_to, |x, y| m_chi(chi, x, y))
}

fn monomials(base: usize, up_to: usize) -> Vec<Vec<usize>> {
    (0..=up_to).flat_map(|d| words(base, d)).collect()
}

fn first_failure<T>(items: impl IntoIterator<Item = T>, mut ok: impl FnMut(&T) -> bool) -> Option<T> {
    items.into_iter().find(|t| !ok(t))
}

fn item<T: std::fmt::Debug>(name: &str, witness: Option<T>, detail: &str) -> CheckItem {
    match witness {
        None => CheckItem::new(name, true, detail),
        Some(w) => CheckItem::new(name, false, format!("witness {w:?}")),
    }
}

/// `Σ χ(x₁⊗y₁) χ(x₂y₂⊗w)` against `Σ χ(y₁⊗w₁) χ(x⊗y₂w₂)`.
fn cocycle_sides(chi: &Cocycle, x: &Word, y: &Word, w: &Word) -> (Scalar, Scalar) {
    let n = chi.n;
    let mut lhs = Scalar::zero();
    for (x1, x2) in coproduct(x, n) {
        if !counit_word(&x1, n) {
            continue;
        }
        for (y1, y2) in coproduct(y, n) {
            let a = chi.eval(&x1, &y1);
            if !a.is_zero() {
                lhs = &lhs + &(&a * &chi.eval(&concat(&x2, &y2), w));
            }
        }
    }
    let mut rhs = Scalar::zero();
    for (y1, y2) in coproduct(y, n) {
        if !counit_word(&y1, n) {
            continue;
        }
        for (w1, w2) in coproduct(w, n) {
            let a = chi.eval(&y1, &w1);
            if !a.is_zero() {
                rhs = &rhs + &(&a * &chi.eval(x, &concat(&y2, &w2)));
            }
        }
    }
    (lhs, rhs)
}

/// `Σ χ(x₁⊗y₁) χ⁻¹(x₂⊗y₂)`.
fn convolve(chi: &Cocycle, x: &Word, y: &Word, inverse_first: bool) -> Scalar {
    let n = chi.n;
    let mut s = Scalar::zero();
    for (x1, x2) in coproduct(x, n) {
        for (y1, y2) in coproduct(y, n) {
            let (a, b) = if inverse_first {
                (chi.eval_inverse(&x1, &y1), chi.eval(&x2, &y2))
            } else {
                (chi.eval(&x1, &y1), chi.eval_inverse(&x2, &y2))
            };
            if !a.is_zero() && !b.is_zero() {
                s = &s + &(&a * &b);
            }
        }
    }
    s
}

fn eps(w: &Word, n: usize) -> Scalar {
    if counit_word(w, n) {
        Scalar::one()
    } else {
        Scalar::zero()
    }
}

/// Counitality, the 2-cocycle identity (factors of degree ≤ 2), convolution inverse,
/// descent to `end[A]`, associativity of `μ_χ` and the shifted-product identity.
pub fn cocycle_checks(chi: &Cocycle, a: &Presentation, up_to: usize) -> Result<Vec<CheckItem>> {
    let n = chi.n;
    if a.dim() != n {
        return Err(Error::DimensionMismatch("σ must act on the generators of A".into()));
    }
    let e = n * n;
    let cap = up_to.min(a.cap());
    let chi = chi.clone().with_powers(cap + 1)?;
    let small = monomials(e, cap.min(2));
    let mut items = Vec::new();

    let counital = first_failure(monomials(e, cap), |m| {
        chi.eval(&[], m) == eps(m, n) && chi.eval(m, &[]) == eps(m, n)
    });
    items.push(item("counital", counital, &format!("monomials of degree <= {cap}")));

    let mut triples = Vec::new();
    for x in &small {
        for y in &small {
            for w in &small {
                triples.push((x.clone(), y.clone(), w.clone()));
            }
        }
    }
    let cocycle = first_failure(triples, |(x, y, w)| {
        let (l, r) = cocycle_sides(&chi, x, y, w);
        l == r
    });
    items.push(item("2-cocycle identity", cocycle, "factors of degree <= 2"));

    let mut pairs = Vec::new();
    for x in &small {
        for y in &small {
            pairs.push((x.clone(), y.clone()));
        }
    }
    let inverse = first_failure(pairs, |(x, y)| {
        let want = &eps(x, n) * &eps(y, n);
        convolve(&chi, x, y, false) == want && convolve(&chi, x, y, true) == want
    });
    items.push(item("convolution inverse", inverse, "factors of degree <= 2"));

    let end = end_object(&a.with_cap(cap))?.pres;
    let mut descent = None;
    'outer: for d in 2..=cap {
        for k in end.ideal(d)?.basis() {
            for m in monomials(e, (cap - d).max(1)) {
                let mut left = Scalar::zero();
                let mut right = Scalar::zero();
                for (w, c) in k.terms() {
                    left = &left + &(c * &chi.eval(&w.0, &m));
                    right = &right + &(c * &chi.eval(&m, &w.0));
                }
                if !left.is_zero() || !right.is_zero() {
                    descent = Some((d, m));
                    break 'outer;
                }
            }
        }
    }
    items.push(item("descent to end[A]", descent, &format!("ideal degrees 2..={cap}")));

    if cap >= 3 {
        let mut assoc = None;
        'gens: for g in words(e, 3) {
            let [x, y, w] = [0, 1, 2].map(|t| Tensor::monomial(e, &[g[t]]));
            let l = end.normal_form(&mu_chi(&chi, &mu_chi(&chi, &x, &y), &w))?;
            let r = end.normal_form(&mu_chi(&chi, &x, &mu_chi(&chi, &y, &w)))?;
            if l != r {
                assoc = Some(g);
                break 'gens;
            }
        }
        items.push(item("μ_χ associative", assoc, "generator triples"));
    }

    let shift = FactorizableTwist::new(chi.sigma.clone(), chi.sigma.clone())?.shift_map(1)?;
    let shifted = first_failure(words(e, 2), |w| {
        let x = Tensor::monomial(e, &[w[0]]);
        let y = Tensor::from_vector(e, 1, shift.apply_sparse(Tensor::monomial(e, &[w[1]]).coeffs()));
        mu_chi(&chi, &x, &y) == Tensor::monomial(e, w)
    });
    items.push(item("z ·_χ ž⁽¹⁾ = z·z", shifted, "generator pairs"));
    Ok(items)
}

fn require_stable(p: &Presentation, sigma: &LinearMap, up_to: usize) -> Result<()> {
    let s = check_sigma_ideal_stability(p, sigma, up_to)?;
    if !s.stable {
        return Err(Error::Precondition(format!(
            "σ does not preserve the ideal of {} (degree {})",
            p.name(),
            s.failing_degree.unwrap_or(0)
        )));
    }
    Ok(())
}

fn equality_item(name: &str, p: &Presentation, q: &Presentation) -> Result<CheckItem> {
    let ident = LinearMap::identity(p.dim());
    Ok(match first_mismatch(p, q, &ident)? {
        None => CheckItem::new(name, true, format!("ideal dims {:?}", p.ideal_dims()?)),
        Some(d) => CheckItem::new(name, false, format!("ideals differ at degree {d}")),
    })
}

/// `end^Υ[A] = end[A]_χ` and `A^Υ = A_χ`, degreewise up to `up_to`.
pub fn twist_equivalences(a: &Presentation, sigma: &LinearMap, up_to: usize) -> Result<Vec<CheckItem>> {
    let cap = up_to.min(a.cap());
    let a = a.with_cap(cap);
    require_stable(&a, sigma, cap)?;
    let chi = Cocycle::pinned(sigma.clone())?.with_powers(cap)?;
    let tw = FactorizableTwist::new(sigma.clone(), sigma.clone())?;
    let upsilon = hom_upsilon(&a, &a, &tw, cap)?.pres;
    let end_chi = end_chi_presentation(&a, &chi, cap)?;
    let a_upsilon = sigma_deform(&a, sigma, Powers::Ascending)?;
    let a_chi = a_chi_presentation(&a, &chi, cap)?;
    Ok(vec![
        equality_item("end^Υ[A] = end[A]_χ", &upsilon, &end_chi)?,
        equality_item("A^Υ = A_χ", &a_upsilon, &a_chi)?,
    ])
}

/// `hom^Υ[B,A] = hom[B_χ, A_χ]`.
pub fn hom_twist_equivalence(b: &Presentation, a: &Presentation, sigma_b: &LinearMap, sigma_a: &LinearMap, up_to: usize) -> Result<CheckItem> {
    let cap = up_to.min(a.cap()).min(b.cap());
    let (a, b) = (a.with_cap(cap), b.with_cap(cap));
    require_stable(&a, sigma_a, cap)?;
    require_stable(&b, sigma_b, cap)?;
    let tw = FactorizableTwist::new(sigma_a.clone(), sigma_b.clone())?;
    let upsilon = hom_upsilon(&b, &a, &tw, cap)?.pres;
    let a_chi = a_chi_presentation(&a, &Cocycle::pinned(sigma_a.clone())?.with_powers(cap)?, cap)?;
    let b_chi = a_chi_presentation(&b, &Cocycle::pinned(sigma_b.clone())?.with_powers(cap)?, cap)?;
    let plain = hom_object(&b_chi, &a_chi)?.pres;
    equality_item("hom^Υ[B,A] = hom[B_χ,A_χ]", &upsilon, &plain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::all_passed;
    use crate::scalar::FieldSpec;

    fn plane(q: &str) -> Presentation {
        let f = FieldSpec::new(&["q", "p", "s"]).unwrap();
        let k = f.param(q).unwrap();
        let rel = Tensor::from_terms(2, 2, &[(&[0, 1], Scalar::one()), (&[1, 0], -k)]).unwrap();
        Presentation::new(format!("A{q}"), f, vec!["x".into(), "y".into()], &[rel], 4).unwrap()
    }

    fn diag_p() -> LinearMap {
        let p = FieldSpec::new(&["q", "p", "s"]).unwrap().param("p").unwrap();
        LinearMap::diag(&[p, Scalar::one()])
    }

    #[test]
    fn identity_cocycle_is_trivial() {
        let chi = Cocycle::pinned(LinearMap::identity(2)).unwrap();
        for x in monomials(4, 2) {
            for y in monomials(4, 2) {
                assert_eq!(chi.eval(&x, &y), &eps(&x, 2) * &eps(&y, 2));
            }
        }
        let a = plane("q");
        let end = end_object(&a.with_cap(3)).unwrap().pres;
        let ech = end_chi_presentation(&a, &chi, 3).unwrap();
        assert!(end.same_ideal(&ech).unwrap());
        assert!(a.with_cap(3).same_ideal(&a_chi_presentation(&a, &chi, 3).unwrap()).unwrap());
    }

    #[test]
    fn degree_two_by_three_value() {
        let s = LinearMap::from_ints(&[&[2, 1], &[3, 2]]);
        let chi = Cocycle::pinned(s.clone()).unwrap();
        let m2 = s.pow(-2).unwrap();
        let left = [z_code(0, 0, 2), z_code(1, 1, 2)];
        let right = [z_code(0, 1, 2), z_code(1, 0, 2), z_code(1, 1, 2)];
        let want = &(m2.get(1, 0) * m2.get(0, 1)) * m2.get(1, 1);
        assert_eq!(chi.eval(&left, &right), want);
        assert!(chi.eval(&[z_code(0, 1, 2)], &right).is_zero());
    }

    #[test]
    fn generator_product_uses_inverse_matrix() {
        let s = LinearMap::from_ints(&[&[2, 1], &[3, 2]]);
        let chi = Cocycle::pinned(s.clone()).unwrap();
        let inv = s.inverse().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let got = m_chi(&chi, &Tensor::monomial(2, &[i]), &Tensor::monomial(2, &[j]));
                let mut want = Tensor::zero(2, 2);
                for k in 0..2 {
                    want = want.add(&Tensor::monomial(2, &[i, k]).scale(inv.get(k, j)));
                }
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn exactly_one_orientation_matches_shifted_product() {
        let s = LinearMap::from_ints(&[&[2, 1], &[3, 2]]);
        let a = Presentation::new("F", FieldSpec::rationals(), vec!["u".into(), "v".into()], &[], 3).unwrap();
        let matching: Vec<Orientation> = Orientation::all()
            .into_iter()
            .filter(|&o| {
                let chi = Cocycle::new(s.clone(), o).unwrap();
                let items = cocycle_checks(&chi, &a, 2).unwrap();
                items.iter().find(|i| i.name.starts_with("z ·_χ")).unwrap().passed
            })
            .collect();
        assert_eq!(matching, vec![Orientation::PINNED]);
    }

    #[test]
    fn diagonal_cocycle_checks_pass() {
        let chi = Cocycle::pinned(diag_p()).unwrap();
        let items = cocycle_checks(&chi, &plane("q"), 3).unwrap();
        assert_eq!(items.len(), 6);
        assert!(all_passed(&items), "{items:?}");
    }

    #[test]
    fn diagonal_equivalences_hold() {
        let items = twist_equivalences(&plane("q"), &diag_p(), 3).unwrap();
        assert!(all_passed(&items), "{items:?}");
    }

    #[test]
    fn opposite_sign_breaks_deformed_algebra() {
        let a = plane("q");
        let chi = Cocycle::new(diag_p(), Orientation { transposed: false, sign: 1 }).unwrap();
        let a_chi = a_chi_presentation(&a, &chi, 3).unwrap();
        let a_up = sigma_deform(&a.with_cap(3), &diag_p(), Powers::Ascending).unwrap();
        assert!(!a_chi.same_ideal(&a_up).unwrap());
    }

    #[test]
    fn distinct_planes_hom_equivalence() {
        let f = FieldSpec::new(&["q", "p", "s"]).unwrap();
        let p = f.param("p").unwrap();
        let sb = LinearMap::diag(&[Scalar::one(), p]);
        let it = hom_twist_equivalence(&plane("s"), &plane("q"), &sb, &diag_p(), 3).unwrap();
        assert!(it.passed, "{it:?}");
    }

    #[test]
    fn unstable_sigma_is_rejected() {
        let u = LinearMap::from_ints(&[&[1, 1], &[0, 1]]);
        assert!(matches!(twist_equivalences(&plane("q"), &u, 3), Err(Error::Precondition(_))));
    }
}
