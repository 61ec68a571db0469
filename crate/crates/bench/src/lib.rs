//! Fixtures shared by the benchmarks.

use qls_core::{FieldSpec, LinearMap, Presentation, Scalar, Tensor};

/// `xy − q·yx` over `ℚ(q, p)`.
pub fn plane(cap: usize) -> Presentation {
    let f = FieldSpec::new(&["q", "p"]).expect("distinct names");
    let q = f.param("q").expect("declared");
    let rel = Tensor::from_terms(2, 2, &[(&[0, 1], Scalar::one()), (&[1, 0], -q)]).expect("valid slots");
    Presentation::new("Aq", f, vec!["x".into(), "y".into()], &[rel], cap).expect("homogeneous")
}

/// `diag(p, 1)`.
pub fn diagonal_sigma() -> LinearMap {
    LinearMap::diag(&[Scalar::param(1), Scalar::one()])
}

pub fn unipotent_sigma() -> LinearMap {
    LinearMap::from_ints(&[&[1, 1], &[0, 1]])
}
