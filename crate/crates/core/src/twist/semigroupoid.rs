//! Global collections `τ_{n,m}` on `𝕜^m⊗𝕜^{*m}⊗𝕜^n` and their factorization.
//!
//! `[τ]_{abc}^{def}` is the entry at row `(d·m + e)·n + f`, column `(a·m + b)·n + c`.

use crate::error::{Error, Result};
use crate::linmap::LinearMap;
use crate::report::CheckItem;
use crate::scalar::Scalar;
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Debug, Default)]
pub struct GlobalCollectionSample {
    /// `(n, m) ↦ τ_{n,m}`, a square matrix of size `m²n`.
    pub taus: BTreeMap<(usize, usize), LinearMap>,
}

impl GlobalCollectionSample {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, n: usize, m: usize, tau: LinearMap) -> Result<()> {
        let size = m * m * n;
        if tau.rows() != size || tau.cols() != size {
            return Err(Error::DimensionMismatch(format!("τ_({n},{m}) must be {size}x{size}")));
        }
        self.taus.insert((n, m), tau);
        Ok(())
    }

    /// `τ_{n,m} = id_m ⊗ σ_m⁻¹ ⊗ σ_n` for every ordered pair of the given sizes.
    pub fn factorizable(sigmas: &BTreeMap<usize, LinearMap>) -> Result<Self> {
        let mut out = Self::new();
        for (&n, sn) in sigmas {
            for (&m, sm) in sigmas {
                out.insert(n, m, factorizable_tau(sm, sn)?)?;
            }
        }
        Ok(out)
    }
}

pub fn factorizable_tau(sigma_m: &LinearMap, sigma_n: &LinearMap) -> Result<LinearMap> {
    let m = sigma_m.rows();
    Ok(LinearMap::identity(m).kron(&sigma_m.inverse()?.kron(sigma_n)))
}

type Key = [usize; 10];

fn entries(t: &LinearMap, m: usize, n: usize) -> Vec<([usize; 3], [usize; 3], Scalar)> {
    let mut out = Vec::new();
    for r in 0..t.rows() {
        for c in 0..t.cols() {
            let x = t.get(r, c);
            if !x.is_zero() {
                let up = [r / (m * n), (r / n) % m, r % n];
                let low = [c / (m * n), (c / n) % m, c % n];
                out.push((low, up, x.clone()));
            }
        }
    }
    out
}

fn accumulate(map: &mut HashMap<Key, Scalar>, key: Key, x: &Scalar) {
    let e = map.entry(key).or_insert_with(Scalar::zero);
    *e = &*e + x;
}

/// `[τ_{n,m}]_{kyj}^{slx} [τ_{m,p}]_{απl}^{rβq} = δ_k^s δ_y^q [τ_{n,p}]_{απj}^{rβx}`;
/// returns the first differing index tuple `(k,y,j,s,x,α,π,r,β,q)`.
pub fn coassociativity_witness(t_nm: &LinearMap, t_mp: &LinearMap, t_np: &LinearMap, dims: (usize, usize, usize)) -> Option<Key> {
    let (n, m, p) = dims;
    let mut lhs: HashMap<Key, Scalar> = HashMap::new();
    let mut by_l: HashMap<usize, Vec<([usize; 3], [usize; 3], Scalar)>> = HashMap::new();
    for (low, up, x) in entries(t_mp, p, m) {
        by_l.entry(low[2]).or_default().push((low, up, x));
    }
    for ([k, y, j], [s, l, x], a) in entries(t_nm, m, n) {
        for ([al, pi, _], [r, be, q], b) in by_l.get(&l).into_iter().flatten() {
            accumulate(&mut lhs, [k, y, j, s, x, *al, *pi, *r, *be, *q], &(&a * b));
        }
    }
    let mut rhs: HashMap<Key, Scalar> = HashMap::new();
    for ([al, pi, j], [r, be, x], c) in entries(t_np, p, n) {
        for k in 0..m {
            for y in 0..m {
                accumulate(&mut rhs, [k, y, j, k, x, al, pi, r, be, y], &c);
            }
        }
    }
    lhs.retain(|_, x| !x.is_zero());
    rhs.retain(|_, x| !x.is_zero());
    let mut bad: Vec<Key> = lhs
        .iter()
        .filter(|(k, x)| rhs.get(*k) != Some(*x))
        .map(|(k, _)| *k)
        .chain(rhs.keys().filter(|k| !lhs.contains_key(*k)).copied())
        .collect();
    bad.sort_unstable();
    bad.first().copied()
}

/// `Σ_α [τ_n]_{iαβ}^{klα} = δ_i^k δ_β^l`; returns the first failing `(i, β, k, l)`.
pub fn counit_witness(t: &LinearMap, n: usize) -> Option<[usize; 4]> {
    let code = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    for i in 0..n {
        for beta in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = Scalar::zero();
                    for al in 0..n {
                        s = &s + t.get(code(k, l, al), code(i, al, beta));
                    }
                    let want = if i == k && beta == l { Scalar::one() } else { Scalar::zero() };
                    if s != want {
                        return Some([i, beta, k, l]);
                    }
                }
            }
        }
    }
    None
}

pub fn check_semigroupoid(g: &GlobalCollectionSample) -> Vec<CheckItem> {
    let mut items = Vec::new();
    for (&(n, m), t_nm) in &g.taus {
        for (&(m2, p), t_mp) in &g.taus {
            if m2 != m {
                continue;
            }
            let Some(t_np) = g.taus.get(&(n, p)) else { continue };
            let name = format!("coassociativity ({n},{m},{p})");
            items.push(match coassociativity_witness(t_nm, t_mp, t_np, (n, m, p)) {
                None => CheckItem::new(name, true, ""),
                Some(w) => CheckItem::new(name, false, format!("witness {w:?}")),
            });
        }
        if n == m {
            let name = format!("counit ({n})");
            items.push(match counit_witness(t_nm, n) {
                None => CheckItem::new(name, true, ""),
                Some(w) => CheckItem::new(name, false, format!("witness {w:?}")),
            });
        }
    }
    items
}

/// Recovers `σ` from `τ_n = id ⊗ σ⁻¹ ⊗ σ`, normalized so the first nonzero entry is 1.
pub fn factor_tau(t: &LinearMap, n: usize) -> Result<LinearMap> {
    let size = n * n * n;
    if t.rows() != size || t.cols() != size {
        return Err(Error::DimensionMismatch(format!("τ_{n} must be {size}x{size}")));
    }
    let code = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    for r in 0..size {
        for c in 0..size {
            if r / (n * n) != c / (n * n) && !t.get(r, c).is_zero() {
                return Err(Error::CheckFailed(format!("entry ({r},{c}) mixes the identity slot")));
            }
        }
    }
    // η[(x,j)][(y,l)] = [τ]_{ryj}^{rlx} / n, independent of r.
    let mut eta = LinearMap::zero(n * n, n * n);
    let inv_n = Scalar::ratio(1, n as i64);
    for j in 0..n {
        for y in 0..n {
            for x in 0..n {
                for l in 0..n {
                    let theta = t.get(code(0, l, x), code(0, y, j)).clone();
                    for r in 1..n {
                        if *t.get(code(r, l, x), code(r, y, j)) != theta {
                            return Err(Error::CheckFailed(format!("θ depends on the identity index at {r}")));
                        }
                    }
                    eta.set(x * n + j, y * n + l, &theta * &inv_n);
                }
            }
        }
    }
    if eta.compose(&eta)? != eta || !eta.trace().is_one() {
        return Err(Error::CheckFailed("η is not a rank-one idempotent".into()));
    }
    let col = (0..n * n)
        .find(|&c| (0..n * n).any(|r| !eta.get(r, c).is_zero()))
        .ok_or_else(|| Error::CheckFailed("η vanishes".into()))?;
    let mut sigma = LinearMap::zero(n, n);
    for x in 0..n {
        for j in 0..n {
            sigma.set(x, j, eta.get(x * n + j, col).clone());
        }
    }
    let lead = (0..n * n)
        .map(|i| sigma.get(i / n, i % n).clone())
        .find(|x| !x.is_zero())
        .expect("nonzero column");
    let sigma = sigma.scale(&lead.inv());
    if factorizable_tau(&sigma, &sigma)? != *t {
        return Err(Error::CheckFailed("round trip id⊗σ⁻¹⊗σ does not reproduce τ".into()));
    }
    Ok(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::all_passed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> LinearMap {
        loop {
            let rows = (0..n).map(|_| (0..n).map(|_| Scalar::int(rng.gen_range(-3..=3))).collect()).collect();
            let m = LinearMap::from_rows(rows).unwrap();
            if m.is_invertible() {
                return m;
            }
        }
    }

    fn normalized(s: &LinearMap) -> LinearMap {
        let n = s.rows();
        let lead = (0..n * n).map(|i| s.get(i / n, i % n).clone()).find(|x| !x.is_zero()).unwrap();
        s.scale(&lead.inv())
    }

    #[test]
    fn identity_collection_passes() {
        let mut g = GlobalCollectionSample::new();
        g.insert(2, 2, LinearMap::identity(8)).unwrap();
        assert!(all_passed(&check_semigroupoid(&g)));
        assert_eq!(factor_tau(&LinearMap::identity(8), 2).unwrap(), LinearMap::identity(2));
    }

    #[test]
    fn mixed_sizes_factorizable() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sigmas: BTreeMap<usize, LinearMap> = [(2, random_invertible(&mut rng, 2)), (3, random_invertible(&mut rng, 3))].into();
        let g = GlobalCollectionSample::factorizable(&sigmas).unwrap();
        let items = check_semigroupoid(&g);
        assert_eq!(items.len(), 8 + 2);
        assert!(all_passed(&items));
    }

    #[test]
    fn unipotent_round_trip() {
        let s = LinearMap::from_ints(&[&[1, 1], &[0, 1]]);
        let t = factorizable_tau(&s, &s).unwrap();
        assert_eq!(factor_tau(&t, 2).unwrap(), s);
    }

    #[test]
    fn random_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 3] {
            for _ in 0..5 {
                let s = random_invertible(&mut rng, n);
                let t = factorizable_tau(&s, &s).unwrap();
                let mut g = GlobalCollectionSample::new();
                g.insert(n, n, t.clone()).unwrap();
                assert!(all_passed(&check_semigroupoid(&g)));
                assert_eq!(factor_tau(&t, n).unwrap(), normalized(&s));
            }
        }
    }

    #[test]
    fn generic_tau_fails_with_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_invertible(&mut rng, 8);
        let mut g = GlobalCollectionSample::new();
        g.insert(2, 2, t.clone()).unwrap();
        let items = check_semigroupoid(&g);
        assert!(!all_passed(&items));
        assert!(items.iter().any(|i| i.detail.starts_with("witness")));
        assert!(factor_tau(&t, 2).is_err());
    }
}
