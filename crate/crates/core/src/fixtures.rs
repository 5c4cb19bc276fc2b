//! Small named preorders used by the test suites, the benches and the CLI's
//! `--fixture` flag.

use crate::poset::{Preorder, QuotientPoset};

fn closed(n: usize, pairs: &[(usize, usize)]) -> Preorder {
    Preorder::closure(n, pairs).expect("fixture pairs are in range").preorder
}

/// Upper triangular 2×2 matrices.
pub fn ut2() -> Preorder {
    closed(2, &[(0, 1)])
}

/// Full 2×2 matrices: one class of size two.
pub fn full2() -> Preorder {
    closed(2, &[(0, 1), (1, 0)])
}

/// Class `{0,1}` below the singleton `{2}`.
pub fn cls3() -> Preorder {
    closed(3, &[(0, 1), (1, 0), (0, 2), (1, 2)])
}

/// Two minimal singletons below a common top.
pub fn vee() -> Preorder {
    closed(3, &[(0, 2), (1, 2)])
}

/// The diamond `0,1 < 2,3` whose undirected Hasse graph is a 4-cycle with
/// no parallel paths.
pub fn ex56() -> Preorder {
    closed(4, &[(0, 2), (0, 3), (1, 2), (1, 3)])
}

/// Two parallel paths `0 → 1 → 2` and `0 → 3 → 2`.
pub fn twopaths() -> Preorder {
    closed(4, &[(0, 1), (1, 2), (0, 3), (3, 2)])
}

/// A chain of `m` singletons.
pub fn chain(m: usize) -> Preorder {
    let pairs: Vec<_> = (1..m).map(|i| (i - 1, i)).collect();
    closed(m, &pairs)
}

/// Upper block triangular matrices with the given block sizes.
pub fn block_triangular(blocks: &[usize]) -> Preorder {
    let n: usize = blocks.iter().sum();
    let mut starts = Vec::with_capacity(blocks.len());
    let mut acc = 0;
    for &b in blocks {
        starts.push(acc);
        acc += b;
    }
    let block_of = |i: usize| starts.iter().rposition(|&s| s <= i).unwrap();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if block_of(i) <= block_of(j) {
                pairs.push((i, j));
            }
        }
    }
    closed(n, &pairs)
}

/// Adds one new ground element above every maximal class that receives at
/// least two Hasse arrows.
///
/// Applied to a crown such as [`ex56`], this joins the sinks of the cycle to
/// a common apex.
pub fn augment_with_apex(p: &Preorder) -> Preorder {
    let q = QuotientPoset::new(p);
    let n = p.n();
    let mut pairs = p.pairs();
    for alpha in 0..q.len() {
        let out = q.hasse().iter().filter(|&&(s, _)| s == alpha).count();
        let inc = q.hasse().iter().filter(|&&(_, t)| t == alpha).count();
        if out == 0 && inc >= 2 {
            pairs.push((q.class(alpha)[0], n));
        }
    }
    closed(n + 1, &pairs)
}

/// Looks up a fixture by its (case-insensitive) name.
pub fn by_name(name: &str) -> Option<Preorder> {
    let p = match name.to_ascii_uppercase().as_str() {
        "UT2" => ut2(),
        "FULL2" => full2(),
        "CLS3" => cls3(),
        "VEE" => vee(),
        "EX56" => ex56(),
        "TWOPATHS" => twopaths(),
        "EX56+APEX" => augment_with_apex(&ex56()),
        _ => return None,
    };
    Some(p)
}

/// The named fixtures in a fixed order.
pub fn all() -> Vec<(&'static str, Preorder)> {
    vec![
        ("UT2", ut2()),
        ("FULL2", full2()),
        ("CLS3", cls3()),
        ("VEE", vee()),
        ("EX56", ex56()),
        ("TWOPATHS", twopaths()),
    ]
}
