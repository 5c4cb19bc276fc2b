//! Graded flags as degree tuples in `G^n`, their END gradings, and the
//! classification of those gradings by the orbits of
//! `∏ S(α) ⋊ (Aut₀(C) ⋉ G^q)` on `G^n`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::antichain::PosetAutomorphism;
use crate::grading::{decode, search_space, TransitiveLabeling};
use crate::group::FiniteGroup;
use crate::poset::{Preorder, QuotientPoset};
use crate::structmat::{tilde_permutation, StructAlgebra, StructMatrix};
use crate::BudgetExceeded;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("component index {t} out of range (q = {q})")]
    InvalidComponent { t: usize, q: usize },
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{0} is not a group element")]
    NotAnElement(usize),
    #[error("permutation does not preserve every class")]
    NotYoung,
    #[error("poset automorphism does not preserve class sizes")]
    NotMultiplicityPreserving,
}

/// Degrees `(h_1, …, h_n)` of a homogeneous flag basis.
pub type GradingTuple = Vec<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suspension {
    /// `V(σ)`: degrees become `h_i σ⁻¹`.
    Right,
    /// `(σ)V`: degrees become `σ⁻¹ h_i`.
    Left,
}

fn check_tuple(n: usize, g: &FiniteGroup, h: &[usize]) -> Result<(), ClassifyError> {
    if h.len() != n {
        return Err(ClassifyError::LengthMismatch { expected: n, got: h.len() });
    }
    match h.iter().find(|&&x| x >= g.order()) {
        Some(&x) => Err(ClassifyError::NotAnElement(x)),
        None => Ok(()),
    }
}

/// The good grading `deg e_ij = h_i h_j⁻¹` induced by a graded flag.
pub fn grading_from_tuple(p: &Preorder, g: &FiniteGroup, h: &[usize]) -> Result<TransitiveLabeling, ClassifyError> {
    check_tuple(p.n(), g, h)?;
    Ok(TransitiveLabeling::from_weights(p, g, h))
}

/// Splits `x` into homogeneous components, keyed by degree.
pub fn graded_components(alg: &StructAlgebra, g: &FiniteGroup, h: &[usize], x: &StructMatrix) -> Result<BTreeMap<usize, StructMatrix>, ClassifyError> {
    check_tuple(alg.n(), g, h)?;
    let mut parts: BTreeMap<usize, Vec<_>> = BTreeMap::new();
    for ((i, j), c) in x.entries() {
        parts.entry(g.div(h[i], h[j])).or_default().push(((i, j), c));
    }
    Ok(parts
        .into_iter()
        .map(|(d, entries)| (d, alg.element(&entries).expect("entries come from an algebra element")))
        .collect())
}

/// Suspends component `t` of the flag by `sigma`.
pub fn suspend(q: &QuotientPoset, g: &FiniteGroup, h: &[usize], t: usize, sigma: usize, side: Suspension) -> Result<GradingTuple, ClassifyError> {
    check_tuple(q.ground_size(), g, h)?;
    if t >= q.num_components() {
        return Err(ClassifyError::InvalidComponent { t, q: q.num_components() });
    }
    if sigma >= g.order() {
        return Err(ClassifyError::NotAnElement(sigma));
    }
    let s = g.inv(sigma);
    Ok(h.iter()
        .enumerate()
        .map(|(i, &x)| {
            if q.component_of_element(i) != t {
                x
            } else if side == Suspension::Right {
                g.mul(x, s)
            } else {
                g.mul(s, x)
            }
        })
        .collect())
}

/// `(h ← ψ)_i = h_{ψ(i)}`.
pub fn act_young(h: &[usize], psi: &[usize]) -> GradingTuple {
    psi.iter().map(|&j| h[j]).collect()
}

/// `(h ← g)_i = h_{g̃(i)}`.
pub fn act_aut(h: &[usize], tilde: &[usize]) -> GradingTuple {
    tilde.iter().map(|&j| h[j]).collect()
}

/// `(h ← σ)_i = h_i σ_p` with `p` the component of `i`.
pub fn act_shift(q: &QuotientPoset, g: &FiniteGroup, h: &[usize], sigma: &[usize]) -> GradingTuple {
    h.iter()
        .enumerate()
        .map(|(i, &x)| g.mul(x, sigma[q.component_of_element(i)]))
        .collect()
}

/// `(σ ← g)_t = σ_{τ(t)}`.
pub fn shift_act_by_aut(sigma: &[usize], tau: &[usize]) -> Vec<usize> {
    tau.iter().map(|&t| sigma[t]).collect()
}

/// `g → ψ = g̃ ψ g̃⁻¹`.
pub fn young_conjugate(tilde: &[usize], psi: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; tilde.len()];
    for (i, &j) in tilde.iter().enumerate() {
        inv[j] = i;
    }
    (0..psi.len()).map(|i| tilde[psi[inv[i]]]).collect()
}

/// `(ψ, g, σ) ∈ ∏ S(α) ⋊ (Aut₀(C) ⋉ G^q)`; `ψ` is stored as one
/// permutation of the ground set that preserves every class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActionElement {
    pub psi: Vec<usize>,
    pub aut: PosetAutomorphism,
    pub shifts: Vec<usize>,
    tilde: Vec<usize>,
    tau: Vec<usize>,
}

impl ActionElement {
    pub fn new(q: &QuotientPoset, g: &FiniteGroup, psi: Vec<usize>, aut: PosetAutomorphism, shifts: Vec<usize>) -> Result<Self, ClassifyError> {
        let n = q.ground_size();
        if psi.len() != n {
            return Err(ClassifyError::LengthMismatch { expected: n, got: psi.len() });
        }
        let mut seen = vec![false; n];
        for (i, &j) in psi.iter().enumerate() {
            if j >= n || seen[j] || q.class_of(i) != q.class_of(j) {
                return Err(ClassifyError::NotYoung);
            }
            seen[j] = true;
        }
        check_tuple(q.num_components(), g, &shifts)?;
        let tilde = tilde_permutation(q, &aut).map_err(|_| ClassifyError::NotMultiplicityPreserving)?;
        let tau = aut.component_permutation(q);
        Ok(ActionElement { psi, aut, shifts, tilde, tau })
    }

    pub fn identity(q: &QuotientPoset) -> Self {
        let n = q.ground_size();
        ActionElement {
            psi: (0..n).collect(),
            aut: PosetAutomorphism::identity(q.len()),
            shifts: vec![0; q.num_components()],
            tilde: (0..n).collect(),
            tau: (0..q.num_components()).collect(),
        }
    }

    pub fn young(q: &QuotientPoset, g: &FiniteGroup, psi: Vec<usize>) -> Result<Self, ClassifyError> {
        Self::new(q, g, psi, PosetAutomorphism::identity(q.len()), vec![0; q.num_components()])
    }

    pub fn automorphism(q: &QuotientPoset, g: &FiniteGroup, aut: PosetAutomorphism) -> Result<Self, ClassifyError> {
        Self::new(q, g, (0..q.ground_size()).collect(), aut, vec![0; q.num_components()])
    }

    pub fn shift(q: &QuotientPoset, g: &FiniteGroup, shifts: Vec<usize>) -> Result<Self, ClassifyError> {
        Self::new(q, g, (0..q.ground_size()).collect(), PosetAutomorphism::identity(q.len()), shifts)
    }

    /// The product with `act(act(h, a), b) = act(h, a·b)`.
    pub fn product(&self, other: &ActionElement, g: &FiniteGroup) -> ActionElement {
        let conj = young_conjugate(&self.tilde, &other.psi);
        let psi = conj.iter().map(|&i| self.psi[i]).collect();
        let shifts = (0..self.shifts.len())
            .map(|t| g.mul(self.shifts[other.tau[t]], other.shifts[t]))
            .collect();
        ActionElement {
            psi,
            aut: self.aut.compose(&other.aut),
            shifts,
            tilde: other.tilde.iter().map(|&i| self.tilde[i]).collect(),
            tau: other.tau.iter().map(|&t| self.tau[t]).collect(),
        }
    }

    pub fn tilde(&self) -> &[usize] {
        &self.tilde
    }

    pub fn tau(&self) -> &[usize] {
        &self.tau
    }
}

/// `((h ← ψ) ← g) ← σ`.
pub fn act(q: &QuotientPoset, g: &FiniteGroup, h: &[usize], a: &ActionElement) -> GradingTuple {
    act_shift(q, g, &act_aut(&act_young(h, &a.psi), &a.tilde), &a.shifts)
}

fn class_multiset(g: &FiniteGroup, values: impl Iterator<Item = usize>, shift_inv: usize) -> Vec<usize> {
    let mut v: Vec<usize> = values.map(|x| g.mul(x, shift_inv)).collect();
    v.sort_unstable();
    v
}

/// Whether, for every class `α`, `{h_i σ_t⁻¹ : i ∈ α}` equals
/// `{h'_j : j ∈ g(α)}` as multisets (`σ_t` the shift of `α`'s component).
pub fn graded_flag_isomorphic(q: &QuotientPoset, g: &FiniteGroup, h: &[usize], h2: &[usize], aut: &PosetAutomorphism, shifts: Option<&[usize]>) -> bool {
    (0..q.len()).all(|alpha| class_matches(q, g, h, h2, aut, alpha, shifts.map_or(0, |s| s[q.component_of(alpha)])))
}

fn class_matches(q: &QuotientPoset, g: &FiniteGroup, h: &[usize], h2: &[usize], aut: &PosetAutomorphism, alpha: usize, shift: usize) -> bool {
    let lhs = class_multiset(g, q.class(alpha).iter().map(|&i| h[i]), g.inv(shift));
    let rhs = class_multiset(g, q.class(aut.apply(alpha)).iter().map(|&j| h2[j]), 0);
    lhs == rhs
}

/// A bijection `π` with `π(α) = g(α)` and `h'_{π(i)} = h_i`, when `h` and
/// `h'` are `g`-isomorphic without shift.
pub fn flag_isomorphism(q: &QuotientPoset, g: &FiniteGroup, h: &[usize], h2: &[usize], aut: &PosetAutomorphism) -> Option<Vec<usize>> {
    if !graded_flag_isomorphic(q, g, h, h2, aut, None) {
        return None;
    }
    let mut pi = vec![0; h.len()];
    for alpha in 0..q.len() {
        let mut src: Vec<usize> = q.class(alpha).to_vec();
        let mut dst: Vec<usize> = q.class(aut.apply(alpha)).to_vec();
        src.sort_by_key(|&i| (h[i], i));
        dst.sort_by_key(|&j| (h2[j], j));
        for (i, j) in src.into_iter().zip(dst) {
            pi[i] = j;
        }
    }
    Some(pi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    pub aut: PosetAutomorphism,
    /// `σ_t` per component of the source.
    pub shifts: Vec<usize>,
}

/// Decides whether the END gradings of `h` and `h'` are isomorphic, by
/// searching `g ∈ Aut₀(C)` and, per component independently, `σ_t ∈ G`.
pub fn end_graded_iso(
    q: &QuotientPoset,
    g: &FiniteGroup,
    h: &[usize],
    h2: &[usize],
    aut0: &[PosetAutomorphism],
    budget: u64,
) -> Result<Option<IsoWitness>, BudgetExceeded> {
    let required = (aut0.len() as u128) * (q.num_components() as u128) * (g.order() as u128);
    if required > budget as u128 {
        return Err(BudgetExceeded { required, budget });
    }
    let comps: Vec<Vec<usize>> = (0..q.num_components()).map(|t| q.component(t)).collect();
    for aut in aut0 {
        let shifts: Option<Vec<usize>> = comps
            .iter()
            .map(|classes| g.elements().find(|&s| classes.iter().all(|&alpha| class_matches(q, g, h, h2, aut, alpha, s))))
            .collect();
        if let Some(shifts) = shifts {
            return Ok(Some(IsoWitness { aut: aut.clone(), shifts }));
        }
    }
    Ok(None)
}

/// Generators of `∏ S(α) ⋊ (Aut₀(C) ⋉ G^q)`: adjacent transpositions inside
/// each class, every non-identity element of `Aut₀(C)`, and every
/// non-identity single-component shift.
pub fn action_generators(q: &QuotientPoset, g: &FiniteGroup, aut0: &[PosetAutomorphism]) -> Vec<ActionElement> {
    let n = q.ground_size();
    let mut gens = Vec::new();
    for class in q.classes() {
        for w in class.windows(2) {
            let mut psi: Vec<usize> = (0..n).collect();
            psi.swap(w[0], w[1]);
            gens.push(ActionElement::young(q, g, psi).expect("transposition inside a class"));
        }
    }
    for aut in aut0.iter().filter(|a| !a.is_identity()) {
        gens.push(ActionElement::automorphism(q, g, aut.clone()).expect("element of Aut0"));
    }
    for t in 0..q.num_components() {
        for s in g.elements().skip(1) {
            let mut shifts = vec![0; q.num_components()];
            shifts[t] = s;
            gens.push(ActionElement::shift(q, g, shifts).expect("valid shift"));
        }
    }
    gens
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Lexicographically least member.
    pub representative: GradingTuple,
    pub size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub order: usize,
    pub n: usize,
    /// Index (in lexicographic order of `G^n`) of each tuple's orbit
    /// representative.
    pub orbit_of: Vec<u64>,
    /// Sorted by representative.
    pub orbits: Vec<Orbit>,
}

impl Classification {
    pub fn index(&self, h: &[usize]) -> u64 {
        h.iter().fold(0u64, |acc, &x| acc * self.order as u64 + x as u64)
    }

    pub fn same_orbit(&self, h: &[usize], h2: &[usize]) -> bool {
        self.orbit_of[self.index(h) as usize] == self.orbit_of[self.index(h2) as usize]
    }
}

fn find(parent: &mut [u64], mut x: u64) -> u64 {
    while parent[x as usize] != x {
        let up = parent[parent[x as usize] as usize];
        parent[x as usize] = up;
        x = up;
    }
    x
}

/// Partitions `G^n` into orbits by union-find over generator images.
pub fn classify_orbits(p: &Preorder, g: &FiniteGroup, budget: u64) -> Result<Classification, BudgetExceeded> {
    let n = p.n();
    let space = search_space(g.order(), n);
    if space > budget as u128 {
        return Err(BudgetExceeded { required: space, budget });
    }
    let space = space as u64;
    let q = QuotientPoset::new(p);
    let aut0 = crate::antichain::poset_automorphisms(&q, true);
    let gens = action_generators(&q, g, &aut0);
    let index = |h: &[usize]| h.iter().fold(0u64, |acc, &x| acc * g.order() as u64 + x as u64);
    let mut parent: Vec<u64> = (0..space).collect();
    const CHUNK: u64 = 1 << 14;
    let mut start = 0;
    while start < space {
        let end = (start + CHUNK).min(space);
        let edges: Vec<(u64, u64)> = (start..end)
            .into_par_iter()
            .flat_map_iter(|idx| {
                let h = decode(idx, g.order(), n);
                gens.iter()
                    .map(|a| (idx, index(&act(&q, g, &h, a))))
                    .collect::<Vec<_>>()
            })
            .collect();
        for (x, y) in edges {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx != ry {
                let (lo, hi) = (rx.min(ry), rx.max(ry));
                parent[hi as usize] = lo;
            }
        }
        start = end;
    }
    let mut sizes: BTreeMap<u64, u64> = BTreeMap::new();
    for x in 0..space {
        let r = find(&mut parent, x);
        parent[x as usize] = r;
        *sizes.entry(r).or_default() += 1;
    }
    let orbits = sizes
        .into_iter()
        .map(|(r, size)| Orbit {
            representative: decode(r, g.order(), n),
            size,
        })
        .collect();
    Ok(Classification {
        order: g.order(),
        n,
        orbit_of: parent,
        orbits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antichain::poset_automorphisms;
    use crate::field::{FpMatrix, PrimeField};
    use crate::fixtures;
    use crate::group::GroupSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn group(s: &str) -> FiniteGroup {
        GroupSpec::parse(s).unwrap().build().unwrap()
    }

    fn all_actions(q: &QuotientPoset, g: &FiniteGroup) -> Vec<ActionElement> {
        let n = q.ground_size();
        let aut0 = poset_automorphisms(q, true);
        // the whole group is small for the fixtures used here
        let mut youngs: Vec<Vec<usize>> = vec![(0..n).collect()];
        for class in q.classes() {
            let mut next = Vec::new();
            for base in &youngs {
                for perm in permutations(class) {
                    let mut psi = base.clone();
                    for (&i, &j) in class.iter().zip(&perm) {
                        psi[i] = j;
                    }
                    next.push(psi);
                }
            }
            youngs = next;
        }
        let qn = q.num_components();
        let mut out = Vec::new();
        for psi in &youngs {
            for aut in &aut0 {
                for k in 0..search_space(g.order(), qn) as u64 {
                    out.push(ActionElement::new(q, g, psi.clone(), aut.clone(), decode(k, g.order(), qn)).unwrap());
                }
            }
        }
        out
    }

    fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for k in 0..items.len() {
            let mut rest = items.to_vec();
            let x = rest.remove(k);
            for mut p in permutations(&rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn grading_from_tuple_examples() {
        let z2 = group("Z2");
        let u = grading_from_tuple(&fixtures::full2(), &z2, &[0, 1]).unwrap();
        assert_eq!((u.get(0, 1), u.get(1, 0), u.get(0, 0), u.get(1, 1)), (1, 1, 0, 0));
        let u = grading_from_tuple(&fixtures::ut2(), &z2, &[1, 0]).unwrap();
        assert_eq!(u.get(0, 1), 1);
        let u = grading_from_tuple(&fixtures::ex56(), &group("S3"), &[4, 4, 4, 4]).unwrap();
        assert_eq!(u, TransitiveLabeling::constant_identity(&fixtures::ex56()));
        assert!(grading_from_tuple(&fixtures::ut2(), &z2, &[0]).is_err());
    }

    #[test]
    fn good_grading_is_multiplicative() {
        let s3 = group("S3");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (_, p) in fixtures::all() {
            let h: Vec<usize> = (0..p.n()).map(|_| rng.gen_range(0..6)).collect();
            let u = grading_from_tuple(&p, &s3, &h).unwrap();
            for (i, j) in p.pairs() {
                for r in 0..p.n() {
                    if p.related(j, r) {
                        assert_eq!(s3.mul(u.get(i, j), u.get(j, r)), u.get(i, r));
                    }
                }
            }
        }
    }

    #[test]
    fn components_examples() {
        let z2 = group("Z2");
        let alg = StructAlgebra::new(&fixtures::ut2(), PrimeField::new(3).unwrap());
        let x = alg.element(&[((0, 0), 1), ((0, 1), 1)]).unwrap();
        let parts = graded_components(&alg, &z2, &[1, 0], &x).unwrap();
        assert_eq!(parts[&0], alg.unit(0, 0).unwrap());
        assert_eq!(parts[&1], alg.unit(0, 1).unwrap());
        let e12 = alg.unit(0, 1).unwrap();
        assert_eq!(graded_components(&alg, &z2, &[1, 0], &e12).unwrap().len(), 1);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s3 = group("S3");
        for (_, p) in fixtures::all() {
            let alg = StructAlgebra::new(&p, PrimeField::new(3).unwrap());
            let h: Vec<usize> = (0..p.n()).map(|_| rng.gen_range(0..6)).collect();
            let x = alg.random_element(&mut rng);
            let parts = graded_components(&alg, &s3, &h, &x).unwrap();
            let sum = parts.values().fold(StructMatrix::zero(alg.field(), alg.n()), |acc, y| acc.add(y));
            assert_eq!(sum, x);
            for (&d, y) in &parts {
                assert!(y.entries().all(|((i, j), _)| s3.div(h[i], h[j]) == d));
            }
        }
    }

    #[test]
    fn suspension_examples() {
        let z2 = group("Z2");
        let s3 = group("S3");
        let q = QuotientPoset::new(&fixtures::full2());
        assert_eq!(suspend(&q, &z2, &[0, 1], 0, 1, Suspension::Right).unwrap(), vec![1, 0]);
        assert_eq!(suspend(&q, &z2, &[0, 1], 0, 0, Suspension::Right).unwrap(), vec![0, 1]);
        assert_eq!(
            suspend(&q, &z2, &[0, 1], 1, 1, Suspension::Right),
            Err(ClassifyError::InvalidComponent { t: 1, q: 1 })
        );
        let q = QuotientPoset::new(&fixtures::ex56());
        let h = vec![1, 2, 3, 4];
        for sigma in s3.elements() {
            for tau in s3.elements() {
                let back = suspend(&q, &s3, &suspend(&q, &s3, &h, 0, sigma, Suspension::Right).unwrap(), 0, s3.inv(sigma), Suspension::Right).unwrap();
                assert_eq!(back, h);
                // (V(σ))(τ) = V(τσ)
                let twice = suspend(&q, &s3, &suspend(&q, &s3, &h, 0, sigma, Suspension::Right).unwrap(), 0, tau, Suspension::Right).unwrap();
                assert_eq!(twice, suspend(&q, &s3, &h, 0, s3.mul(tau, sigma), Suspension::Right).unwrap());
                // ((σ)V)(τ) = (σ)(V(τ))
                let lr = suspend(&q, &s3, &suspend(&q, &s3, &h, 0, sigma, Suspension::Left).unwrap(), 0, tau, Suspension::Right).unwrap();
                let rl = suspend(&q, &s3, &suspend(&q, &s3, &h, 0, tau, Suspension::Right).unwrap(), 0, sigma, Suspension::Left).unwrap();
                assert_eq!(lr, rl);
            }
        }
    }

    #[test]
    fn act_examples() {
        let z2 = group("Z2");
        let q = QuotientPoset::new(&fixtures::full2());
        assert_eq!(act(&q, &z2, &[0, 1], &ActionElement::identity(&q)), vec![0, 1]);
        let swap = ActionElement::young(&q, &z2, vec![1, 0]).unwrap();
        assert_eq!(act(&q, &z2, &[0, 1], &swap), vec![1, 0]);
        let q = QuotientPoset::new(&fixtures::ex56());
        let g = PosetAutomorphism::new(&q, vec![1, 0, 3, 2]).unwrap();
        let a = ActionElement::automorphism(&q, &group("Z4"), g).unwrap();
        assert_eq!(act(&q, &group("Z4"), &[0, 1, 2, 3], &a), vec![1, 0, 3, 2]);
        assert_eq!(ActionElement::young(&q, &z2, vec![1, 0, 2, 3]), Err(ClassifyError::NotYoung));
    }

    #[test]
    fn act_is_a_right_action() {
        for (p, spec) in [(fixtures::ut2(), "Z2"), (fixtures::ex56(), "Z2"), (fixtures::cls3(), "Z2"), (fixtures::full2(), "Z3")] {
            let g = group(spec);
            let q = QuotientPoset::new(&p);
            let elems = all_actions(&q, &g);
            for k in 0..search_space(g.order(), p.n()) as u64 {
                let h = decode(k, g.order(), p.n());
                for a in &elems {
                    let ha = act(&q, &g, &h, a);
                    for b in &elems {
                        assert_eq!(act(&q, &g, &ha, b), act(&q, &g, &h, &a.product(b, &g)));
                    }
                }
            }
        }
    }

    #[test]
    fn compatibility_identities() {
        let g = group("S3");
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for (_, p) in fixtures::all() {
            let q = QuotientPoset::new(&p);
            let elems = all_actions(&q, &g);
            for _ in 0..50 {
                let h: Vec<usize> = (0..p.n()).map(|_| rng.gen_range(0..6)).collect();
                let a = &elems[rng.gen_range(0..elems.len())];
                let (tilde, tau) = (a.tilde(), a.tau());
                // shifts then automorphism
                let lhs = act_aut(&act_shift(&q, &g, &h, &a.shifts), tilde);
                let rhs = act_shift(&q, &g, &act_aut(&h, tilde), &shift_act_by_aut(&a.shifts, tau));
                assert_eq!(lhs, rhs);
                // automorphism then Young
                let lhs = act_young(&act_aut(&h, tilde), &a.psi);
                let rhs = act_aut(&act_young(&h, &young_conjugate(tilde, &a.psi)), tilde);
                assert_eq!(lhs, rhs);
                // Young and shift commute
                let lhs = act_shift(&q, &g, &act_young(&h, &a.psi), &a.shifts);
                let rhs = act_young(&act_shift(&q, &g, &h, &a.shifts), &a.psi);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn flag_isomorphism_examples() {
        let z2 = group("Z2");
        let full = QuotientPoset::new(&fixtures::full2());
        let id = PosetAutomorphism::identity(1);
        assert!(graded_flag_isomorphic(&full, &z2, &[0, 1], &[0, 1], &id, None));
        assert!(graded_flag_isomorphic(&full, &z2, &[0, 1], &[1, 0], &id, None));
        let ut = QuotientPoset::new(&fixtures::ut2());
        let id = PosetAutomorphism::identity(2);
        assert!(!graded_flag_isomorphic(&ut, &z2, &[0, 1], &[1, 0], &id, None));
        assert!(graded_flag_isomorphic(&ut, &z2, &[0, 1], &[1, 0], &id, Some(&[1])));
    }

    #[test]
    fn end_iso_examples() {
        let z2 = group("Z2");
        let z3 = group("Z3");
        let ut = QuotientPoset::new(&fixtures::ut2());
        let aut0 = poset_automorphisms(&ut, true);
        let w = end_graded_iso(&ut, &z2, &[0, 1], &[0, 1], &aut0, 100).unwrap().unwrap();
        assert_eq!(w.shifts, vec![0]);
        let w = end_graded_iso(&ut, &z2, &[0, 1], &[1, 0], &aut0, 100).unwrap().unwrap();
        assert_eq!(w.shifts, vec![1]);
        // deg e12 is σ⁻¹ on one side and σ⁻² on the other
        assert_eq!(end_graded_iso(&ut, &z3, &[0, 1], &[0, 2], &aut0, 100).unwrap(), None);
        assert!(end_graded_iso(&ut, &z3, &[0, 1], &[1, 2], &aut0, 100).unwrap().is_some());
        assert_eq!(end_graded_iso(&ut, &z3, &[0, 1], &[0, 0], &aut0, 100).unwrap(), None);
        assert!(end_graded_iso(&ut, &z3, &[0, 1], &[0, 0], &aut0, 2).is_err());
    }

    #[test]
    fn orbit_examples() {
        let z2 = group("Z2");
        let c = classify_orbits(&fixtures::full2(), &z2, 100).unwrap();
        let reps: Vec<_> = c.orbits.iter().map(|o| o.representative.clone()).collect();
        assert_eq!(reps, vec![vec![0, 0], vec![0, 1]]);
        assert!(c.same_orbit(&[0, 0], &[1, 1]));
        assert!(c.same_orbit(&[0, 1], &[1, 0]));
        assert_eq!(classify_orbits(&fixtures::ut2(), &z2, 100).unwrap().orbits.len(), 2);
        let one = Preorder::closure(1, &[]).unwrap().preorder;
        assert_eq!(classify_orbits(&one, &group("S3"), 100).unwrap().orbits.len(), 1);
        assert!(classify_orbits(&fixtures::ex56(), &group("S3"), 100).is_err());
    }

    #[test]
    fn orbits_match_end_isomorphism() {
        for (p, spec) in [(fixtures::full2(), "Z2"), (fixtures::ut2(), "Z3"), (fixtures::vee(), "Z2"), (fixtures::ex56(), "Z2"), (fixtures::cls3(), "S3")] {
            let g = group(spec);
            let q = QuotientPoset::new(&p);
            let aut0 = poset_automorphisms(&q, true);
            let c = classify_orbits(&p, &g, 1 << 12).unwrap();
            let total = search_space(g.order(), p.n()) as u64;
            for x in 0..total {
                let h = decode(x, g.order(), p.n());
                for y in 0..total {
                    let h2 = decode(y, g.order(), p.n());
                    let iso = end_graded_iso(&q, &g, &h, &h2, &aut0, 1 << 20).unwrap().is_some();
                    assert_eq!(iso, c.same_orbit(&h, &h2), "{spec} {h:?} {h2:?}");
                }
            }
        }
    }

    #[test]
    fn flag_isomorphism_conjugation_preserves_degrees() {
        let s3 = group("S3");
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (_, p) in fixtures::all() {
            let alg = StructAlgebra::new(&p, PrimeField::new(3).unwrap());
            let q = alg.quotient();
            let n = p.n();
            for aut in poset_automorphisms(q, true) {
                let h: Vec<usize> = (0..n).map(|_| rng.gen_range(0..6)).collect();
                // build h' from h through the class map of aut and a class-wise shuffle
                let mut h2 = vec![0; n];
                for alpha in 0..q.len() {
                    let mut vals: Vec<usize> = q.class(alpha).iter().map(|&i| h[i]).collect();
                    vals.reverse();
                    for (&j, v) in q.class(aut.apply(alpha)).iter().zip(vals) {
                        h2[j] = v;
                    }
                }
                let pi = flag_isomorphism(q, &s3, &h, &h2, &aut).unwrap();
                let mut u = FpMatrix::zeros(alg.field(), n);
                for (i, &pi_i) in pi.iter().enumerate() {
                    u.set(pi_i, i, 1);
                }
                let u_inv = u.inverse().unwrap();
                for &(i, j) in alg.basis() {
                    let img = u.mul(&alg.unit(i, j).unwrap().to_dense()).mul(&u_inv);
                    let img = alg.from_dense(&img).expect("conjugate stays in the algebra");
                    let parts = graded_components(&alg, &s3, &h2, &img).unwrap();
                    assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![s3.div(h[i], h[j])]);
                }
            }
        }
    }
}
