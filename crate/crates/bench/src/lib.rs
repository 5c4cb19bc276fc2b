//! Shared inputs for the benchmarks.

use smflag::fixtures;
use smflag::{FiniteGroup, GroupSpec, Preorder, PrimeField, StructAlgebra};

pub fn group(spec: &str) -> FiniteGroup {
    GroupSpec::parse(spec).and_then(|g| g.build()).expect("valid spec")
}

/// Preorders of increasing size used across the benchmarks.
pub fn preorders() -> Vec<(&'static str, Preorder)> {
    vec![
        ("EX56", fixtures::ex56()),
        ("EX56+APEX", fixtures::augment_with_apex(&fixtures::ex56())),
        ("CHAIN6", fixtures::chain(6)),
        ("BLOCKS212", fixtures::block_triangular(&[2, 1, 2])),
    ]
}

pub fn algebra(p: &Preorder, modulus: u32) -> StructAlgebra {
    StructAlgebra::new(p, PrimeField::new(modulus).expect("prime"))
}

/// Crowns on `2k` points: `k` minima and `k` maxima, minimum `i` below
/// maxima `i` and `i + 1 (mod k)`.
pub fn crown(k: usize) -> Preorder {
    let pairs: Vec<_> = (0..k).flat_map(|i| [(i, k + i), (i, k + (i + 1) % k)]).collect();
    Preorder::closure(2 * k, &pairs).expect("indices in range").preorder
}
