//! Independent brute-force checks for the main algorithms.
//!
//! Everything here enumerates raw search spaces directly and shares no
//! code with the algorithms it checks beyond the basic data types.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::antichain::{poset_automorphisms, Antichain, AntichainLattice};
use crate::classify::{classify_orbits, end_graded_iso};
use crate::field::PrimeField;
use crate::grading::{all_trivial_abelian, all_trivial_for_group, check_transitive, decode, search_space, TransitiveLabeling};
use crate::group::FiniteGroup;
use crate::poset::{Preorder, QuotientPoset};
use crate::snf::hom_triviality;
use crate::structmat::{antichain_subspace, automorphism_group_order, submodule_oracle, StructAlgebra, SUBMODULE_ORACLE_MAX_N};
use crate::BudgetExceeded;

fn guard(required: u128, budget: u64) -> Result<(), BudgetExceeded> {
    if required > budget as u128 {
        Err(BudgetExceeded { required, budget })
    } else {
        Ok(())
    }
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).fold(1u128, |acc, x| acc.saturating_mul(x))
}

/// Every bijection of the antichain set that preserves and reflects `≤`.
pub fn lattice_automorphisms(lattice: &AntichainLattice, budget: u64) -> Result<Vec<BTreeMap<Antichain, Antichain>>, BudgetExceeded> {
    let elems = lattice.antichains();
    let k = elems.len();
    guard(factorial(k), budget)?;
    let leq: Vec<Vec<bool>> = elems
        .iter()
        .map(|&d| elems.iter().map(|&e| lattice.leq(d, e).expect("listed antichains")).collect())
        .collect();
    let mut out = Vec::new();
    let mut map = Vec::with_capacity(k);
    let mut used = vec![false; k];
    extend_bijection(&leq, &mut map, &mut used, &mut out);
    Ok(out
        .into_iter()
        .map(|m| m.iter().enumerate().map(|(a, &b)| (elems[a], elems[b])).collect())
        .collect())
}

fn extend_bijection(leq: &[Vec<bool>], map: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
    let a = map.len();
    if a == leq.len() {
        out.push(map.clone());
        return;
    }
    for b in 0..leq.len() {
        if used[b] {
            continue;
        }
        let ok = (0..a).all(|x| leq[x][a] == leq[map[x]][b] && leq[a][x] == leq[b][map[x]]) && leq[a][a] == leq[b][b];
        if !ok {
            continue;
        }
        used[b] = true;
        map.push(b);
        extend_bijection(leq, map, used, out);
        map.pop();
        used[b] = false;
    }
}

// rank of a list of vectors over F_p
fn rank(f: PrimeField, vectors: &[Vec<u32>]) -> usize {
    let mut rows: Vec<Vec<u32>> = vectors.to_vec();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pivot);
        let s = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, s);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let factor = rows[i][c];
                let pivot_row = rows[r].clone();
                for (x, &y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        r += 1;
    }
    r
}

/// Number of algebra automorphisms of `M(ρ, F_p)`, by trying every
/// assignment of images to the matrix units.
///
/// Images are assigned one unit at a time; a partial assignment is dropped
/// as soon as its images become dependent or a product among assigned units
/// fails to match.
pub fn algebra_automorphism_count(alg: &StructAlgebra, budget: u64) -> Result<u64, BudgetExceeded> {
    let dim = alg.dim();
    let f = alg.field();
    let p = f.modulus() as usize;
    let vectors = search_space(p, dim);
    guard(vectors.saturating_pow(dim as u32), budget)?;
    let basis = alg.basis();
    let index: BTreeMap<(usize, usize), usize> = basis.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let search = ImageSearch {
        dim,
        p,
        vectors: vectors as u64,
        f,
        product: basis
            .iter()
            .map(|&(i, j)| basis.iter().map(|&(k, l)| (j == k).then(|| index[&(i, l)])).collect())
            .collect(),
    };
    let mut images = Vec::with_capacity(dim);
    Ok(search.count(&mut images))
}

struct ImageSearch {
    dim: usize,
    p: usize,
    vectors: u64,
    f: PrimeField,
    /// `product[a][b]`: basis index of `e_a e_b`, if non-zero.
    product: Vec<Vec<Option<usize>>>,
}

impl ImageSearch {
    fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.f;
        let mut out = vec![0u32; self.dim];
        for (a, &xa) in x.iter().enumerate().filter(|(_, &v)| v != 0) {
            for (b, &yb) in y.iter().enumerate().filter(|(_, &v)| v != 0) {
                if let Some(c) = self.product[a][b] {
                    out[c] = f.add(out[c], f.mul(xa, yb));
                }
            }
        }
        out
    }

    // every product among the first k+1 images whose result is assigned
    fn consistent(&self, images: &[Vec<u32>]) -> bool {
        let k = images.len() - 1;
        (0..=k).all(|x| {
            (0..=k).filter(|&y| x == k || y == k || self.product[x][y] == Some(k)).all(|y| match self.product[x][y] {
                None => self.mul(&images[x], &images[y]).iter().all(|&c| c == 0),
                Some(c) if c <= k => self.mul(&images[x], &images[y]) == images[c],
                Some(_) => true,
            })
        })
    }

    fn count(&self, images: &mut Vec<Vec<u32>>) -> u64 {
        let k = images.len();
        if k == self.dim {
            return 1;
        }
        let mut total = 0;
        for v in 0..self.vectors {
            images.push(decode(v, self.p, self.dim).into_iter().map(|x| x as u32).collect());
            if rank(self.f, images) == k + 1 && self.consistent(images) {
                total += self.count(images);
            }
            images.pop();
        }
        total
    }
}

/// Number of homomorphisms `Z^free_rank ⊕ ⊕ Z/d_i → G`, counting tuples of
/// pairwise commuting images with `x_i^{d_i} = e`.
pub fn hom_count(factors: &[u64], free_rank: usize, g: &FiniteGroup, budget: u64) -> Result<u64, BudgetExceeded> {
    let exps: Vec<u64> = factors.iter().copied().chain(std::iter::repeat_n(0, free_rank)).collect();
    guard(search_space(g.order(), exps.len()), budget)?;
    let mut chosen = Vec::with_capacity(exps.len());
    Ok(count_homs(g, &exps, &mut chosen))
}

fn count_homs(g: &FiniteGroup, exps: &[u64], chosen: &mut Vec<usize>) -> u64 {
    let k = chosen.len();
    if k == exps.len() {
        return 1;
    }
    let mut total = 0;
    for x in g.elements() {
        if exps[k] != 0 && g.pow(x, exps[k]) != g.identity() {
            continue;
        }
        if chosen.iter().any(|&y| g.mul(x, y) != g.mul(y, x)) {
            continue;
        }
        chosen.push(x);
        total += count_homs(g, exps, chosen);
        chosen.pop();
    }
    total
}

/// Every transitive labeling of `ρ`, by scanning all of `G^{|ρ|}`.
pub fn transitive_labelings(p: &Preorder, g: &FiniteGroup, budget: u64) -> Result<Vec<TransitiveLabeling>, BudgetExceeded> {
    let pairs = p.pairs();
    let space = search_space(g.order(), pairs.len());
    guard(space, budget)?;
    let mut out = Vec::new();
    for idx in 0..space as u64 {
        let raw: BTreeMap<(usize, usize), usize> = pairs.iter().copied().zip(decode(idx, g.order(), pairs.len())).collect();
        let cocycle = pairs.iter().all(|&(i, j)| {
            pairs
                .iter()
                .filter(|&&(j2, _)| j2 == j)
                .all(|&(_, r)| g.mul(raw[&(i, j)], raw[&(j, r)]) == raw[&(i, r)])
        });
        if cocycle {
            out.push(check_transitive(p, g, &raw).expect("cocycle checked"));
        }
    }
    Ok(out)
}

/// Searches all of `G^n` for vertex weights realising `u`.
pub fn weights_by_search(p: &Preorder, g: &FiniteGroup, u: &TransitiveLabeling, budget: u64) -> Result<Option<Vec<usize>>, BudgetExceeded> {
    let n = p.n();
    let space = search_space(g.order(), n);
    guard(space, budget)?;
    let pairs = p.pairs();
    Ok((0..space as u64)
        .map(|idx| decode(idx, g.order(), n))
        .find(|w| pairs.iter().all(|&(i, j)| u.get(i, j) == g.div(w[i], w[j]))))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..n {
            let mut perm = rest.clone();
            perm.insert(pos, n - 1);
            out.push(perm);
        }
    }
    out
}

/// Orbit representatives of `G^n` under `h ↦ (h_{ψ(i)} σ)_i` for all
/// `ψ ∈ S_n`, `σ ∈ G`, found by applying every group element to every tuple.
pub fn permutation_translation_orbits(n: usize, g: &FiniteGroup, budget: u64) -> Result<Vec<Vec<usize>>, BudgetExceeded> {
    let space = search_space(g.order(), n);
    guard(space.saturating_mul(factorial(n)).saturating_mul(g.order() as u128), budget)?;
    let perms = permutations(n);
    let encode = |h: &[usize]| h.iter().fold(0u64, |acc, &x| acc * g.order() as u64 + x as u64);
    let mut reps = Vec::new();
    for idx in 0..space as u64 {
        let h = decode(idx, g.order(), n);
        let least = perms
            .iter()
            .flat_map(|psi| g.elements().map(move |s| (psi, s)))
            .map(|(psi, s)| encode(&psi.iter().map(|&i| g.mul(h[i], s)).collect::<Vec<_>>()))
            .min()
            .expect("non-empty group");
        if least == idx {
            reps.push(h);
        }
    }
    Ok(reps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Agree,
    Disagree,
    Skipped,
}

/// One oracle comparison: the brute-force value against the algorithm's.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub name: &'static str,
    pub oracle: String,
    pub algorithm: String,
    pub outcome: Outcome,
}

impl OracleCheck {
    fn compare<T: PartialEq + std::fmt::Display>(name: &'static str, oracle: T, algorithm: T) -> Self {
        let outcome = if oracle == algorithm { Outcome::Agree } else { Outcome::Disagree };
        OracleCheck {
            name,
            oracle: oracle.to_string(),
            algorithm: algorithm.to_string(),
            outcome,
        }
    }

    fn skipped(name: &'static str, reason: impl std::fmt::Display) -> Self {
        OracleCheck {
            name,
            oracle: reason.to_string(),
            algorithm: String::new(),
            outcome: Outcome::Skipped,
        }
    }
}

/// Runs every oracle that fits the budget on `ρ` and `G`.
pub fn run_suite(p: &Preorder, g: &FiniteGroup, budget: u64) -> Vec<OracleCheck> {
    let q = QuotientPoset::new(p);
    let mut out = Vec::new();

    const SUBSPACES: &str = "stable subspaces over F2 = antichains";
    let lattice = AntichainLattice::new(&q).ok();
    match &lattice {
        Some(l) if p.n() <= SUBMODULE_ORACLE_MAX_N => {
            let alg = StructAlgebra::new(p, PrimeField::new(2).expect("2 is prime"));
            let stable = submodule_oracle(&alg).expect("size checked");
            let mut from_antichains: Vec<_> = l.antichains().iter().map(|&d| antichain_subspace(l, d)).collect();
            from_antichains.sort();
            let same = stable == from_antichains;
            let mut check = OracleCheck::compare(SUBSPACES, stable.len(), from_antichains.len());
            if !same {
                check.outcome = Outcome::Disagree;
            }
            out.push(check);
        }
        _ => out.push(OracleCheck::skipped(SUBSPACES, format!("needs n <= {SUBMODULE_ORACLE_MAX_N}"))),
    }

    const LATTICE_AUT: &str = "lattice automorphisms = poset automorphisms";
    match lattice.as_ref().map(|l| lattice_automorphisms(l, budget)) {
        Some(Ok(maps)) => {
            let l = lattice.as_ref().expect("matched Some");
            let auts = poset_automorphisms(&q, false);
            let mut check = OracleCheck::compare(LATTICE_AUT, maps.len(), auts.len());
            if !maps.iter().all(|m| l.decompose(m).is_ok_and(|a| l.induced_map(&a) == *m)) {
                check.outcome = Outcome::Disagree;
            }
            out.push(check);
        }
        Some(Err(e)) => out.push(OracleCheck::skipped(LATTICE_AUT, e)),
        None => out.push(OracleCheck::skipped(LATTICE_AUT, "too many classes")),
    }

    const HOM: &str = "abelian verdict = homomorphism count";
    let abelian = all_trivial_abelian(p, Some(g));
    let small: Option<Vec<u64>> = abelian.torsion.iter().map(BigInt::to_u64).collect();
    match small.map(|f| hom_count(&f, abelian.free_rank, g, budget)) {
        Some(Ok(homs)) => out.push(OracleCheck::compare(HOM, homs == 1, hom_triviality(&abelian.torsion, abelian.free_rank, g))),
        Some(Err(e)) => out.push(OracleCheck::skipped(HOM, e)),
        None => out.push(OracleCheck::skipped(HOM, "invariant factor too large")),
    }

    const FIXED: &str = "all labelings trivial = weight search";
    let fixed = all_trivial_for_group(p, g, budget).and_then(|t| Ok((t, transitive_labelings(p, g, budget)?)));
    match fixed {
        Ok((verdict, labelings)) => {
            let per = search_space(g.order(), p.n()).saturating_mul(labelings.len() as u128);
            match guard(per, budget) {
                Ok(()) => {
                    // arrow labelings and labelings of ρ are counted differently,
                    // so only the verdicts are compared
                    let all = labelings
                        .iter()
                        .all(|u| weights_by_search(p, g, u, budget).expect("budget checked").is_some());
                    let check = OracleCheck::compare(FIXED, all, verdict.all_trivial());
                    out.push(check);
                }
                Err(e) => out.push(OracleCheck::skipped(FIXED, e)),
            }
        }
        Err(e) => out.push(OracleCheck::skipped(FIXED, e)),
    }

    const ALG_AUT: &str = "algebra automorphisms over F2 = order formula";
    let alg = StructAlgebra::new(p, PrimeField::new(2).expect("2 is prime"));
    match algebra_automorphism_count(&alg, budget) {
        Ok(count) => out.push(OracleCheck::compare(ALG_AUT, BigInt::from(count), automorphism_group_order(&alg))),
        Err(e) => out.push(OracleCheck::skipped(ALG_AUT, e)),
    }

    const ORBITS: &str = "orbits = pairwise graded isomorphism";
    let space = search_space(g.order(), p.n());
    match guard(space.saturating_mul(space), budget).and_then(|_| classify_orbits(p, g, budget)) {
        Ok(cls) => {
            let aut0 = poset_automorphisms(&q, true);
            let tuples: Vec<Vec<usize>> = (0..space as u64).map(|i| decode(i, g.order(), p.n())).collect();
            let mut agree = true;
            let mut classes = 0usize;
            for (a, h) in tuples.iter().enumerate() {
                let first_of_class = tuples[..a]
                    .iter()
                    .all(|h0| !end_graded_iso(&q, g, h0, h, &aut0, budget).expect("budget checked").is_some());
                classes += usize::from(first_of_class);
                for h2 in &tuples[a..] {
                    let iso = end_graded_iso(&q, g, h, h2, &aut0, budget).expect("budget checked").is_some();
                    agree &= iso == cls.same_orbit(h, h2);
                }
            }
            let mut check = OracleCheck::compare(ORBITS, classes, cls.orbits.len());
            if !agree {
                check.outcome = Outcome::Disagree;
            }
            out.push(check);
        }
        Err(e) => out.push(OracleCheck::skipped(ORBITS, e)),
    }

    const REDUCED: &str = "single-class orbits = permutation/translation orbits";
    if q.len() == 1 {
        match permutation_translation_orbits(p.n(), g, budget).and_then(|reps| Ok((reps, classify_orbits(p, g, budget)?))) {
            Ok((reps, cls)) => {
                let ours: Vec<Vec<usize>> = cls.orbits.iter().map(|o| o.representative.clone()).collect();
                let mut check = OracleCheck::compare(REDUCED, reps.len(), ours.len());
                if reps != ours {
                    check.outcome = Outcome::Disagree;
                }
                out.push(check);
            }
            Err(e) => out.push(OracleCheck::skipped(REDUCED, e)),
        }
    } else {
        out.push(OracleCheck::skipped(REDUCED, "needs a single class"));
    }
    out
}
