//! Arithmetic in `M(ρ, F_p)`, the shuffles `A^g` and `^gA`, the group `T`
//! of transitive scalar functions, and the map `F` from triples
//! `(A, g, (a_ij))` onto algebra automorphisms.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;
use thiserror::Error;

use crate::antichain::{poset_automorphisms, Antichain, AntichainLattice, PosetAutomorphism};
use crate::field::{FpMatrix, PrimeField};
use crate::grading::{all_trivial_abelian, enumerate_transitive};
use crate::group::FiniteGroup;
use crate::poset::{undirected_components, Preorder, QuotientPoset};
use crate::BudgetExceeded;

/// Largest ground set accepted by [`submodule_oracle`].
pub const SUBMODULE_ORACLE_MAX_N: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("entry ({0},{1}) lies outside the support of the algebra")]
    OutsideSupport(usize, usize),
    #[error("expected a {expected}x{expected} matrix, got {got}x{got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("field mismatch: F_{expected} vs F_{got}")]
    FieldMismatch { expected: u32, got: u32 },
    #[error("matrix is singular")]
    Singular,
    #[error("poset automorphism does not preserve class sizes")]
    NotMultiplicityPreserving,
    #[error("scalar function is missing the pair ({0},{1})")]
    MissingPair(usize, usize),
    #[error("scalar function is zero at ({0},{1})")]
    ZeroValue(usize, usize),
    #[error("scalar function violates a_ij a_jr = a_ir at ({0},{1},{2})")]
    NotTransitive(usize, usize, usize),
    #[error("edge ({0},{1}) is not an edge of the comparability graph")]
    NotDeltaEdge(usize, usize),
    #[error("edge set is not a spanning forest of the comparability graph")]
    NotSpanningForest,
    #[error("the submodule oracle needs F_2, got F_{0}")]
    OracleField(u32),
    #[error("the submodule oracle supports n <= {SUBMODULE_ORACLE_MAX_N}, got {0}")]
    OracleSize(usize),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// An element of `M(ρ, F_p)`, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StructMatrix {
    n: usize,
    field: PrimeField,
    coeffs: BTreeMap<(usize, usize), u32>,
}

impl StructMatrix {
    pub fn zero(field: PrimeField, n: usize) -> Self {
        StructMatrix {
            n,
            field,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Non-zero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn put(&mut self, i: usize, j: usize, x: u32) {
        let x = x % self.field.modulus();
        if x == 0 {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), x);
        }
    }

    pub fn add(&self, other: &StructMatrix) -> StructMatrix {
        let mut out = self.clone();
        for ((i, j), x) in other.entries() {
            out.put(i, j, self.field.add(out.get(i, j), x));
        }
        out
    }

    pub fn scale(&self, s: u32) -> StructMatrix {
        let mut out = StructMatrix::zero(self.field, self.n);
        for ((i, j), x) in self.entries() {
            out.put(i, j, self.field.mul(x, s));
        }
        out
    }

    pub fn to_dense(&self) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.field, self.n);
        for ((i, j), x) in self.entries() {
            m.set(i, j, x);
        }
        m
    }
}

/// The algebra `M(ρ, F_p)` together with its quotient poset.
#[derive(Debug, Clone)]
pub struct StructAlgebra {
    rho: Preorder,
    quotient: QuotientPoset,
    field: PrimeField,
    basis: Vec<(usize, usize)>,
}

impl StructAlgebra {
    pub fn new(rho: &Preorder, field: PrimeField) -> Self {
        StructAlgebra {
            quotient: QuotientPoset::new(rho),
            basis: rho.pairs(),
            rho: rho.clone(),
            field,
        }
    }

    pub fn preorder(&self) -> &Preorder {
        &self.rho
    }

    pub fn quotient(&self) -> &QuotientPoset {
        &self.quotient
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.rho.n()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The matrix units `e_ij`, `i ρ j`, row-major.
    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn unit(&self, i: usize, j: usize) -> Result<StructMatrix, AlgebraError> {
        self.element(&[((i, j), 1)])
    }

    pub fn identity(&self) -> StructMatrix {
        let mut m = StructMatrix::zero(self.field, self.n());
        for i in 0..self.n() {
            m.put(i, i, 1);
        }
        m
    }

    pub fn element(&self, entries: &[((usize, usize), u32)]) -> Result<StructMatrix, AlgebraError> {
        let mut m = StructMatrix::zero(self.field, self.n());
        for &((i, j), x) in entries {
            if i >= self.n() || j >= self.n() || !self.rho.related(i, j) {
                return Err(AlgebraError::OutsideSupport(i, j));
            }
            m.put(i, j, self.field.add(m.get(i, j), x % self.field.modulus()));
        }
        Ok(m)
    }

    pub fn from_dense(&self, m: &FpMatrix) -> Result<StructMatrix, AlgebraError> {
        self.check_shape(m.n(), m.field())?;
        let mut out = StructMatrix::zero(self.field, self.n());
        for i in 0..m.n() {
            for j in 0..m.n() {
                let x = m.get(i, j);
                if x == 0 {
                    continue;
                }
                if !self.rho.related(i, j) {
                    return Err(AlgebraError::OutsideSupport(i, j));
                }
                out.put(i, j, x);
            }
        }
        Ok(out)
    }

    fn check_shape(&self, n: usize, field: PrimeField) -> Result<(), AlgebraError> {
        if n != self.n() {
            return Err(AlgebraError::ShapeMismatch {
                expected: self.n(),
                got: n,
            });
        }
        if field != self.field {
            return Err(AlgebraError::FieldMismatch {
                expected: self.field.modulus(),
                got: field.modulus(),
            });
        }
        Ok(())
    }

    fn check(&self, x: &StructMatrix) -> Result<(), AlgebraError> {
        self.check_shape(x.n, x.field)?;
        match x.coeffs.keys().find(|&&(i, j)| !self.rho.related(i, j)) {
            Some(&(i, j)) => Err(AlgebraError::OutsideSupport(i, j)),
            None => Ok(()),
        }
    }

    pub fn multiply(&self, x: &StructMatrix, y: &StructMatrix) -> Result<StructMatrix, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        let f = self.field;
        let mut out = StructMatrix::zero(f, self.n());
        for ((i, j), a) in x.entries() {
            for ((_, r), b) in y.coeffs.range((j, 0)..(j + 1, 0)).map(|(&k, &v)| (k, v)) {
                out.put(i, r, f.add(out.get(i, r), f.mul(a, b)));
            }
        }
        Ok(out)
    }

    pub fn invert(&self, x: &StructMatrix) -> Result<StructMatrix, AlgebraError> {
        self.check(x)?;
        let inv = x.to_dense().inverse().ok_or(AlgebraError::Singular)?;
        let out = self.from_dense(&inv);
        debug_assert!(out.is_ok(), "inverse left the algebra");
        out
    }

    pub fn is_unit(&self, x: &StructMatrix) -> bool {
        self.check(x).is_ok() && x.to_dense().inverse().is_some()
    }

    /// `Aut₀(C)`, sorted.
    pub fn aut0(&self) -> Vec<PosetAutomorphism> {
        poset_automorphisms(&self.quotient, true)
    }

    /// `g̃` for `g ∈ Aut₀(C)`.
    pub fn tilde(&self, g: &PosetAutomorphism) -> Result<Vec<usize>, AlgebraError> {
        tilde_permutation(&self.quotient, g)
    }

    /// A uniformly random element of `M(ρ, F_p)` (not necessarily a unit).
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> StructMatrix {
        let mut m = StructMatrix::zero(self.field, self.n());
        for &(i, j) in &self.basis {
            m.put(i, j, rng.gen_range(0..self.field.modulus()));
        }
        m
    }

    /// A uniformly random unit, by rejection.
    pub fn random_unit<R: Rng>(&self, rng: &mut R) -> StructMatrix {
        loop {
            let m = self.random_element(rng);
            if self.is_unit(&m) {
                return m;
            }
        }
    }
}

/// The permutation `g̃` sending the sorted members of each class `α` to the
/// sorted members of `g(α)`.
pub fn tilde_permutation(q: &QuotientPoset, g: &PosetAutomorphism) -> Result<Vec<usize>, AlgebraError> {
    if !g.is_multiplicity_preserving() {
        return Err(AlgebraError::NotMultiplicityPreserving);
    }
    let mut perm = vec![0; q.ground_size()];
    for alpha in 0..q.len() {
        for (&i, &j) in q.class(alpha).iter().zip(q.class(g.apply(alpha))) {
            perm[i] = j;
        }
    }
    Ok(perm)
}

pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &j) in perm.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

/// `A^g` (right: columns) or `^gA` (left: rows), given `g̃`.
pub fn shuffle(a: &FpMatrix, tilde: &[usize], side: Side) -> FpMatrix {
    match side {
        Side::Right => a.shuffle_right(tilde),
        Side::Left => a.shuffle_left(tilde),
    }
}

/// `^{g⁻¹}A^{g⁻¹}`, the left action of `g` on matrices.
pub fn conjugate_shuffle(a: &FpMatrix, tilde: &[usize]) -> FpMatrix {
    let inv = invert_permutation(tilde);
    a.shuffle_left(&inv).shuffle_right(&inv)
}

/// A transitive function `ρ → F_p^*`, an element of `T`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScalarTransitive {
    values: BTreeMap<(usize, usize), u32>,
}

impl ScalarTransitive {
    pub fn new(alg: &StructAlgebra, values: BTreeMap<(usize, usize), u32>) -> Result<Self, AlgebraError> {
        let rho = alg.preorder();
        let f = alg.field();
        for &(i, j) in values.keys() {
            if i >= rho.n() || j >= rho.n() || !rho.related(i, j) {
                return Err(AlgebraError::OutsideSupport(i, j));
            }
        }
        for &(i, j) in alg.basis() {
            match values.get(&(i, j)) {
                None => return Err(AlgebraError::MissingPair(i, j)),
                Some(&x) if x % f.modulus() == 0 => return Err(AlgebraError::ZeroValue(i, j)),
                Some(_) => {}
            }
        }
        let values: BTreeMap<_, _> = values.into_iter().map(|(k, x)| (k, x % f.modulus())).collect();
        for &(i, j) in alg.basis() {
            for r in 0..rho.n() {
                if rho.related(j, r) && f.mul(values[&(i, j)], values[&(j, r)]) != values[&(i, r)] {
                    return Err(AlgebraError::NotTransitive(i, j, r));
                }
            }
        }
        Ok(ScalarTransitive { values })
    }

    pub fn ones(alg: &StructAlgebra) -> Self {
        ScalarTransitive {
            values: alg.basis().iter().map(|&k| (k, 1)).collect(),
        }
    }

    /// `(d_i⁻¹ d_j)`.
    pub fn from_diagonal(alg: &StructAlgebra, d: &[u32]) -> Self {
        let f = alg.field();
        ScalarTransitive {
            values: alg
                .basis()
                .iter()
                .map(|&(i, j)| ((i, j), f.mul(f.inv(d[i]), d[j])))
                .collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.values[&(i, j)]
    }

    pub fn values(&self) -> &BTreeMap<(usize, usize), u32> {
        &self.values
    }

    pub fn is_ones(&self) -> bool {
        self.values.values().all(|&x| x == 1)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &ScalarTransitive, f: PrimeField) -> ScalarTransitive {
        ScalarTransitive {
            values: self.values.iter().map(|(&k, &x)| (k, f.mul(x, other.values[&k]))).collect(),
        }
    }

    pub fn inverse(&self, f: PrimeField) -> ScalarTransitive {
        ScalarTransitive {
            values: self.values.iter().map(|(&k, &x)| (k, f.inv(x))).collect(),
        }
    }

    /// The right action `(a · g)_ij = a_{g̃(i) g̃(j)}`.
    pub fn act(&self, tilde: &[usize]) -> ScalarTransitive {
        ScalarTransitive {
            values: self.values.keys().map(|&(i, j)| ((i, j), self.values[&(tilde[i], tilde[j])])).collect(),
        }
    }

    /// The left action on matrices: entry `(i,j)` becomes `a_ij α_ij` on `ρ`
    /// and `0` elsewhere.
    pub fn scale_matrix(&self, a: &FpMatrix) -> FpMatrix {
        let f = a.field();
        let mut out = FpMatrix::zeros(f, a.n());
        for (&(i, j), &x) in &self.values {
            out.set(i, j, f.mul(x, a.get(i, j)));
        }
        out
    }
}

/// Every element of `T`, sorted.
pub fn enumerate_t(alg: &StructAlgebra, budget: u64) -> Result<Vec<ScalarTransitive>, BudgetExceeded> {
    let units = FiniteGroup::units_mod(alg.field().modulus());
    let mut out: Vec<ScalarTransitive> = enumerate_transitive(alg.preorder(), &units, budget)?
        .into_iter()
        .map(|u| ScalarTransitive {
            values: u.entries().into_iter().map(|(i, j, k)| ((i, j), k as u32 + 1)).collect(),
        })
        .collect();
    out.sort();
    Ok(out)
}

/// `|T| = (p−1)^{n−q} · |Hom(B/A, F_p^*)|`, from the abelian invariants of
/// the Hasse quiver.
pub fn t_order(alg: &StructAlgebra) -> BigInt {
    let pm1 = BigInt::from(alg.field().modulus() - 1);
    let ab = all_trivial_abelian(alg.preorder(), None);
    let q = alg.quotient().num_components();
    let mut order = num_traits::pow(pm1.clone(), alg.n() - q + ab.free_rank);
    for d in &ab.torsion {
        order *= d.gcd(&pm1);
    }
    order
}

fn gl_order(m: usize, p: &BigInt) -> BigInt {
    let pm = num_traits::pow(p.clone(), m);
    (0..m).map(|k| &pm - num_traits::pow(p.clone(), k)).product()
}

/// `|U(M(ρ, F_p))| = p^{dim − Σ m_α²} · Π |GL_{m_α}(p)|`.
pub fn unit_group_order(alg: &StructAlgebra) -> BigInt {
    let p = BigInt::from(alg.field().modulus());
    let q = alg.quotient();
    let blocks: usize = (0..q.len()).map(|a| q.multiplicity(a).pow(2)).sum();
    let mut order = num_traits::pow(p.clone(), alg.dim() - blocks);
    for a in 0..q.len() {
        order *= gl_order(q.multiplicity(a), &p);
    }
    order
}

/// `|Aut(M(ρ, F_p))| = |U| · |Aut₀| · |T| / (p−1)^n`.
pub fn automorphism_group_order(alg: &StructAlgebra) -> BigInt {
    let d = num_traits::pow(BigInt::from(alg.field().modulus() - 1), alg.n());
    unit_group_order(alg) * BigInt::from(alg.aut0().len()) * t_order(alg) / d
}

/// `(A, g, (a_ij))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutoTriple {
    pub a: StructMatrix,
    pub g: PosetAutomorphism,
    pub t: ScalarTransitive,
}

impl AutoTriple {
    pub fn new(alg: &StructAlgebra, a: StructMatrix, g: PosetAutomorphism, t: ScalarTransitive) -> Result<Self, AlgebraError> {
        if !alg.is_unit(&a) {
            alg.check(&a)?;
            return Err(AlgebraError::Singular);
        }
        alg.tilde(&g)?;
        ScalarTransitive::new(alg, t.values.clone())?;
        Ok(AutoTriple { a, g, t })
    }

    pub fn identity(alg: &StructAlgebra) -> Self {
        AutoTriple {
            a: alg.identity(),
            g: PosetAutomorphism::identity(alg.quotient().len()),
            t: ScalarTransitive::ones(alg),
        }
    }

    /// `diag(d) ⋊ (Id ⋉ (d_i⁻¹ d_j))`, an element of the kernel `D`.
    pub fn kernel_element(alg: &StructAlgebra, d: &[u32]) -> Self {
        let a = alg.from_dense(&FpMatrix::diagonal(alg.field(), d)).expect("diagonal lies in the algebra");
        AutoTriple {
            a,
            g: PosetAutomorphism::identity(alg.quotient().len()),
            t: ScalarTransitive::from_diagonal(alg, d),
        }
    }

    pub fn random<R: Rng>(alg: &StructAlgebra, aut0: &[PosetAutomorphism], t: &[ScalarTransitive], rng: &mut R) -> Self {
        AutoTriple {
            a: alg.random_unit(rng),
            g: aut0[rng.gen_range(0..aut0.len())].clone(),
            t: t[rng.gen_range(0..t.len())].clone(),
        }
    }

    pub fn is_in_kernel(&self, alg: &StructAlgebra) -> bool {
        if !self.g.is_identity() {
            return false;
        }
        let d: Vec<u32> = (0..alg.n()).map(|i| self.a.get(i, i)).collect();
        d.iter().all(|&x| x != 0) && *self == AutoTriple::kernel_element(alg, &d)
    }
}

/// An algebra map given by the images of the matrix units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMap {
    images: BTreeMap<(usize, usize), StructMatrix>,
}

impl AlgebraMap {
    pub fn identity(alg: &StructAlgebra) -> Self {
        AlgebraMap {
            images: alg.basis().iter().map(|&(i, j)| ((i, j), alg.unit(i, j).expect("basis pair"))).collect(),
        }
    }

    pub fn from_images(images: BTreeMap<(usize, usize), StructMatrix>) -> Self {
        AlgebraMap { images }
    }

    pub fn image(&self, i: usize, j: usize) -> &StructMatrix {
        &self.images[&(i, j)]
    }

    pub fn images(&self) -> &BTreeMap<(usize, usize), StructMatrix> {
        &self.images
    }

    pub fn apply(&self, alg: &StructAlgebra, x: &StructMatrix) -> StructMatrix {
        x.entries().fold(StructMatrix::zero(alg.field(), alg.n()), |acc, ((i, j), c)| acc.add(&self.images[&(i, j)].scale(c)))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, alg: &StructAlgebra, inner: &AlgebraMap) -> AlgebraMap {
        AlgebraMap {
            images: inner.images.iter().map(|(&k, x)| (k, self.apply(alg, x))).collect(),
        }
    }

    pub fn is_identity(&self, alg: &StructAlgebra) -> bool {
        *self == AlgebraMap::identity(alg)
    }

    /// Multiplicativity on basis products and `Σ φ(e_ii) = 1`.
    pub fn is_unital_homomorphism(&self, alg: &StructAlgebra) -> bool {
        let zero = StructMatrix::zero(alg.field(), alg.n());
        for (&(i, j), x) in &self.images {
            for (&(p, q), y) in &self.images {
                let expected = if j == p { &self.images[&(i, q)] } else { &zero };
                if alg.multiply(x, y).as_ref() != Ok(expected) {
                    return false;
                }
            }
        }
        let sum = (0..alg.n()).fold(zero.clone(), |acc, i| acc.add(&self.images[&(i, i)]));
        sum == alg.identity()
    }
}

/// `φ = F(A, g, (a_ij))` with `φ(e_ij) = a_ij Σ λ_{s g̃(i)} λ̄_{g̃(j) t} e_st`.
pub fn f_map(alg: &StructAlgebra, t: &AutoTriple) -> Result<AlgebraMap, AlgebraError> {
    let f = alg.field();
    let a = t.a.to_dense();
    let a_inv = a.inverse().ok_or(AlgebraError::Singular)?;
    let tilde = alg.tilde(&t.g)?;
    let n = alg.n();
    let mut images = BTreeMap::new();
    for &(i, j) in alg.basis() {
        let (gi, gj) = (tilde[i], tilde[j]);
        let mut img = StructMatrix::zero(f, n);
        for s in 0..n {
            let lam = a.get(s, gi);
            if lam == 0 {
                continue;
            }
            for c in 0..n {
                let lam_bar = a_inv.get(gj, c);
                if lam_bar != 0 {
                    img.put(s, c, f.mul(t.t.get(i, j), f.mul(lam, lam_bar)));
                }
            }
        }
        debug_assert!(alg.check(&img).is_ok());
        images.insert((i, j), img);
    }
    Ok(AlgebraMap { images })
}

/// `(B, h, b) · (A, g, a) = (B · ^{h⁻¹}(b·A)^{h⁻¹}, hg, (b_{g̃(i)g̃(j)} a_ij))`.
pub fn triple_multiply(alg: &StructAlgebra, left: &AutoTriple, right: &AutoTriple) -> Result<AutoTriple, AlgebraError> {
    let h_tilde = alg.tilde(&left.g)?;
    let g_tilde = alg.tilde(&right.g)?;
    let moved = conjugate_shuffle(&left.t.scale_matrix(&right.a.to_dense()), &h_tilde);
    let a = alg.from_dense(&left.a.to_dense().mul(&moved))?;
    let t = left.t.act(&g_tilde).mul(&right.t, alg.field());
    Ok(AutoTriple {
        a,
        g: left.g.compose(&right.g),
        t,
    })
}

pub fn triple_inverse(alg: &StructAlgebra, t: &AutoTriple) -> Result<AutoTriple, AlgebraError> {
    let f = alg.field();
    let g_tilde = alg.tilde(&t.g)?;
    let g_inv_tilde = invert_permutation(&g_tilde);
    let x = t.t.act(&g_inv_tilde).inverse(f);
    // X · ^g(x·A)^g = 1
    let moved = x.scale_matrix(&t.a.to_dense()).shuffle_left(&g_tilde).shuffle_right(&g_tilde);
    let a = alg.from_dense(&moved.inverse().ok_or(AlgebraError::Singular)?)?;
    Ok(AutoTriple {
        a,
        g: t.g.inverse(),
        t: x,
    })
}

/// Whether `(A, g, a) ≈ (B, h, b)`: `g = h` and some `d` has
/// `B^g = A^g diag(d)` and `a_ij b_ij⁻¹ = d_i d_j⁻¹`. Returns `d`.
pub fn approx_equivalent(alg: &StructAlgebra, first: &AutoTriple, second: &AutoTriple) -> Option<Vec<u32>> {
    if first.g != second.g {
        return None;
    }
    let f = alg.field();
    let n = alg.n();
    let tilde = alg.tilde(&first.g).ok()?;
    let a = first.a.to_dense();
    let b = second.a.to_dense();
    let mut d = Vec::with_capacity(n);
    for &c in &tilde {
        let r = (0..n).find(|&r| a.get(r, c) != 0)?;
        let dj = f.mul(b.get(r, c), f.inv(a.get(r, c)));
        if dj == 0 || (0..n).any(|s| b.get(s, c) != f.mul(dj, a.get(s, c))) {
            return None;
        }
        d.push(dj);
    }
    alg.basis()
        .iter()
        .all(|&(i, j)| f.mul(first.t.get(i, j), f.inv(second.t.get(i, j))) == f.mul(d[i], f.inv(d[j])))
        .then_some(d)
}

/// One indicator diagonal per connected component of `C`.
pub fn center_basis(alg: &StructAlgebra) -> Vec<StructMatrix> {
    let q = alg.quotient();
    (0..q.num_components())
        .map(|t| {
            let mut m = StructMatrix::zero(alg.field(), alg.n());
            for i in 0..alg.n() {
                if q.component_of_element(i) == t {
                    m.put(i, i, 1);
                }
            }
            m
        })
        .collect()
}

/// The comparability graph `Δ`: vertices are the elements of non-isolated
/// classes, edges join elements of distinct comparable classes.
pub fn delta_graph(alg: &StructAlgebra) -> (Vec<usize>, Vec<(usize, usize)>) {
    let q = alg.quotient();
    let vertices: Vec<usize> = (0..alg.n()).filter(|&i| !q.is_isolated(q.class_of(i))).collect();
    let mut edges = Vec::new();
    for (k, &i) in vertices.iter().enumerate() {
        for &j in &vertices[k + 1..] {
            let (a, b) = (q.class_of(i), q.class_of(j));
            if a != b && q.comparable(a, b) {
                edges.push((i, j));
            }
        }
    }
    (vertices, edges)
}

/// BFS spanning forest of `Δ` from the least vertex of each component, as
/// `(parent, child)` pairs in discovery order.
pub fn default_forest(alg: &StructAlgebra) -> Vec<(usize, usize)> {
    let (vertices, edges) = delta_graph(alg);
    let n = alg.n();
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in &edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut seen = vec![false; n];
    let mut forest = Vec::new();
    for &root in &vertices {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    forest.push((x, y));
                    queue.push_back(y);
                }
            }
        }
    }
    forest
}

/// Orients a user-supplied forest from the least vertex of each component,
/// checking that it spans `Δ`.
fn orient_forest(alg: &StructAlgebra, forest: &[(usize, usize)]) -> Result<Vec<(usize, usize)>, AlgebraError> {
    let (vertices, edges) = delta_graph(alg);
    let edge_set: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    let n = alg.n();
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in forest {
        let key = (i.min(j), i.max(j));
        if !edge_set.contains(&key) {
            return Err(AlgebraError::NotDeltaEdge(i, j));
        }
        adj[i].push(j);
        adj[j].push(i);
    }
    let index: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let local = |es: &[(usize, usize)]| es.iter().map(|&(i, j)| (index[&i], index[&j])).collect::<Vec<_>>();
    let (_, delta_parts) = undirected_components(vertices.len(), &local(&edges));
    let (_, forest_parts) = undirected_components(vertices.len(), &local(forest));
    if forest_parts != delta_parts || forest.len() + delta_parts != vertices.len() {
        return Err(AlgebraError::NotSpanningForest);
    }
    let mut seen = vec![false; n];
    let mut oriented = Vec::new();
    for &root in &vertices {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let mut next = adj[x].clone();
            next.sort_unstable();
            for y in next {
                if !seen[y] {
                    seen[y] = true;
                    oriented.push((x, y));
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(oriented)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoelhoDecomposition {
    pub d: Vec<u32>,
    /// `d_i⁻¹ d_j a_ij`, an element of `𝒢`.
    pub residual: ScalarTransitive,
}

impl CoelhoDecomposition {
    /// `a_ij = d_i d_j⁻¹ r_ij`.
    pub fn recompose(&self, f: PrimeField) -> ScalarTransitive {
        ScalarTransitive {
            values: self
                .residual
                .values
                .iter()
                .map(|(&(i, j), &r)| ((i, j), f.mul(f.mul(self.d[i], f.inv(self.d[j])), r)))
                .collect(),
        }
    }
}

/// Splits `a ∈ T` as `(d_i d_j⁻¹) · r` with `r ∈ 𝒢` for the given forest
/// (default: [`default_forest`]).
pub fn coelho_decompose(alg: &StructAlgebra, a: &ScalarTransitive, forest: Option<&[(usize, usize)]>) -> Result<CoelhoDecomposition, AlgebraError> {
    let f = alg.field();
    let q = alg.quotient();
    let oriented = match forest {
        Some(edges) => orient_forest(alg, edges)?,
        None => default_forest(alg),
    };
    let rho = alg.preorder();
    let mut d = vec![1u32; alg.n()];
    for &(p, c) in &oriented {
        d[c] = if rho.related(p, c) {
            f.mul(f.inv(a.get(p, c)), d[p])
        } else {
            f.mul(a.get(c, p), d[p])
        };
    }
    for alpha in (0..q.len()).filter(|&x| q.is_isolated(x)) {
        let class = q.class(alpha);
        let last = *class.last().expect("classes are non-empty");
        for &i in class {
            d[i] = a.get(i, last);
        }
    }
    let residual = ScalarTransitive {
        values: a
            .values
            .iter()
            .map(|(&(i, j), &x)| ((i, j), f.mul(f.mul(f.inv(d[i]), d[j]), x)))
            .collect(),
    };
    debug_assert!(in_g(alg, &residual, &oriented));
    Ok(CoelhoDecomposition { d, residual })
}

fn in_g(alg: &StructAlgebra, a: &ScalarTransitive, forest: &[(usize, usize)]) -> bool {
    let q = alg.quotient();
    let rho = alg.preorder();
    let on_forest = forest.iter().all(|&(i, j)| {
        let (x, y) = if rho.related(i, j) { (i, j) } else { (j, i) };
        a.get(x, y) == 1
    });
    let isolated = alg
        .basis()
        .iter()
        .filter(|&&(i, _)| q.is_isolated(q.class_of(i)))
        .all(|&(i, j)| a.get(i, j) == 1);
    on_forest && isolated
}

/// The subgroup `𝒢 ⊂ T` for a forest (default: [`default_forest`]).
pub fn enumerate_g(alg: &StructAlgebra, forest: Option<&[(usize, usize)]>, budget: u64) -> Result<Vec<ScalarTransitive>, AlgebraError> {
    let oriented = match forest {
        Some(edges) => orient_forest(alg, edges)?,
        None => default_forest(alg),
    };
    Ok(enumerate_t(alg, budget)?.into_iter().filter(|a| in_g(alg, a, &oriented)).collect())
}

/// A subspace of `F_2^n`, stored as the set of its vectors (bit `v` set when
/// the vector with coordinate mask `v` belongs to it).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace(pub u64);

impl Subspace {
    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn dim(self) -> u32 {
        self.0.count_ones().trailing_zeros()
    }

    fn add_vector(self, v: usize) -> Subspace {
        let mut out = self.0;
        let mut rest = self.0;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << (w ^ v);
        }
        Subspace(out)
    }
}

/// Exhaustive list of the subspaces of `F_2^n` stable under every `e_ij`,
/// `i ρ j`, sorted.
pub fn submodule_oracle(alg: &StructAlgebra) -> Result<Vec<Subspace>, AlgebraError> {
    if alg.field().modulus() != 2 {
        return Err(AlgebraError::OracleField(alg.field().modulus()));
    }
    let n = alg.n();
    if n > SUBMODULE_ORACLE_MAX_N {
        return Err(AlgebraError::OracleSize(n));
    }
    let vectors = 1usize << n;
    let mut all = BTreeSet::from([Subspace(1)]);
    let mut frontier = vec![Subspace(1)];
    while let Some(s) = frontier.pop() {
        for v in 0..vectors {
            if !s.contains(v) {
                let t = s.add_vector(v);
                if all.insert(t) {
                    frontier.push(t);
                }
            }
        }
    }
    // e_ij v = v_j e_i
    let stable = |s: Subspace| {
        (0..vectors)
            .filter(|&v| s.contains(v))
            .all(|v| alg.basis().iter().all(|&(i, j)| v >> j & 1 == 0 || s.contains(1 << i)))
    };
    Ok(all.into_iter().filter(|&s| stable(s)).collect())
}

/// `V_D`: spanned by the `v_i` whose class lies below a member of `D`.
pub fn antichain_subspace(lattice: &AntichainLattice, d: Antichain) -> Subspace {
    let q = lattice.poset();
    let down = lattice.lower_set(d);
    let mask: usize = (0..q.ground_size())
        .filter(|&i| down >> q.class_of(i) & 1 == 1)
        .map(|i| 1 << i)
        .sum();
    let vectors = 1usize << q.ground_size();
    Subspace((0..vectors).filter(|&v| v & !mask == 0).map(|v| 1u64 << v).sum())
}

/// `|GL_m(p)|` for tests and reports.
pub fn general_linear_order(m: usize, p: u32) -> BigInt {
    gl_order(m, &BigInt::from(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alg(p: &Preorder, m: u32) -> StructAlgebra {
        StructAlgebra::new(p, PrimeField::new(m).unwrap())
    }

    fn dense(a: &StructAlgebra, rows: &[Vec<u32>]) -> StructMatrix {
        a.from_dense(&FpMatrix::from_rows(a.field(), rows)).unwrap()
    }

    #[test]
    fn multiply_basis() {
        let a = alg(&fixtures::ut2(), 2);
        let e12 = a.unit(0, 1).unwrap();
        let e22 = a.unit(1, 1).unwrap();
        assert_eq!(a.multiply(&e12, &e22).unwrap(), e12);
        assert!(a.multiply(&e12, &e12).unwrap().is_zero());
        assert_eq!(a.multiply(&a.identity(), &e12).unwrap(), e12);
        assert_eq!(a.unit(1, 0), Err(AlgebraError::OutsideSupport(1, 0)));
    }

    #[test]
    fn multiply_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (_, p) in fixtures::all() {
            let a = alg(&p, 5);
            for _ in 0..20 {
                let (x, y) = (a.random_element(&mut rng), a.random_element(&mut rng));
                let prod = a.multiply(&x, &y).unwrap();
                assert_eq!(prod.to_dense(), x.to_dense().mul(&y.to_dense()));
            }
        }
    }

    #[test]
    fn invert_examples() {
        let a = alg(&fixtures::ut2(), 2);
        assert_eq!(a.invert(&a.identity()).unwrap(), a.identity());
        let m = dense(&a, &[vec![1, 1], vec![0, 1]]);
        assert_eq!(a.invert(&m).unwrap(), m);
        assert_eq!(a.invert(&a.unit(0, 0).unwrap()), Err(AlgebraError::Singular));
    }

    #[test]
    fn tilde_examples() {
        // two incomparable classes {0,1} and {2,3}
        let p = Preorder::closure(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap().preorder;
        let q = QuotientPoset::new(&p);
        let swap = PosetAutomorphism::new(&q, vec![1, 0]).unwrap();
        assert_eq!(tilde_permutation(&q, &swap).unwrap(), vec![2, 3, 0, 1]);
        let id = PosetAutomorphism::identity(2);
        assert_eq!(tilde_permutation(&q, &id).unwrap(), vec![0, 1, 2, 3]);

        let q = QuotientPoset::new(&fixtures::ex56());
        let g = PosetAutomorphism::new(&q, vec![1, 0, 3, 2]).unwrap();
        assert_eq!(tilde_permutation(&q, &g).unwrap(), vec![1, 0, 3, 2]);

        let q = QuotientPoset::new(&fixtures::cls3());
        let all = poset_automorphisms(&q, false);
        assert!(all.iter().all(|g| tilde_permutation(&q, g).is_ok() == g.is_multiplicity_preserving()));
    }

    #[test]
    fn tilde_is_a_homomorphism() {
        for (_, p) in fixtures::all() {
            let a = alg(&p, 2);
            let aut = a.aut0();
            for g in &aut {
                for h in &aut {
                    let hg = a.tilde(&h.compose(g)).unwrap();
                    let (tg, th) = (a.tilde(g).unwrap(), a.tilde(h).unwrap());
                    let composed: Vec<usize> = tg.iter().map(|&i| th[i]).collect();
                    assert_eq!(hg, composed);
                }
            }
        }
    }

    #[test]
    fn t_examples() {
        assert_eq!(enumerate_t(&alg(&fixtures::ut2(), 3), 1000).unwrap().len(), 2);
        assert_eq!(enumerate_t(&alg(&fixtures::ex56(), 2), 1000).unwrap().len(), 1);
        let full = enumerate_t(&alg(&fixtures::full2(), 3), 1000).unwrap();
        assert_eq!(full.len(), 2);
        for a in &full {
            assert_eq!(a.get(1, 0), PrimeField::new(3).unwrap().inv(a.get(0, 1)));
        }
        assert_eq!(enumerate_t(&alg(&fixtures::ex56(), 3), 1000).unwrap().len(), 16);
    }

    #[test]
    fn t_order_matches_enumeration() {
        for (name, p) in fixtures::all() {
            for m in [2, 3, 5] {
                let a = alg(&p, m);
                let t = enumerate_t(&a, 1 << 20).unwrap();
                assert_eq!(BigInt::from(t.len()), t_order(&a), "{name}/F{m}");
            }
        }
    }

    // rejection-free count of invertible elements
    fn brute_units(a: &StructAlgebra) -> usize {
        let p = a.field().modulus() as u64;
        let dim = a.dim();
        (0..p.pow(dim as u32))
            .filter(|&idx| {
                let mut x = idx;
                let entries: Vec<_> = a
                    .basis()
                    .iter()
                    .map(|&k| {
                        let v = (x % p) as u32;
                        x /= p;
                        (k, v)
                    })
                    .collect();
                a.is_unit(&a.element(&entries).unwrap())
            })
            .count()
    }

    #[test]
    fn unit_group_order_matches_brute_force() {
        for (p, m) in [(fixtures::ut2(), 2), (fixtures::ut2(), 3), (fixtures::full2(), 2), (fixtures::vee(), 3), (fixtures::cls3(), 2)] {
            let a = alg(&p, m);
            assert_eq!(unit_group_order(&a), BigInt::from(brute_units(&a)));
        }
        assert_eq!(general_linear_order(2, 2), BigInt::from(6));
    }

    #[test]
    fn shuffle_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = alg(&fixtures::ex56(), 3);
        let aut = a.aut0();
        for _ in 0..50 {
            let x = a.random_element(&mut rng).to_dense();
            let y = a.random_element(&mut rng).to_dense();
            let g = &aut[rng.gen_range(0..aut.len())];
            let h = &aut[rng.gen_range(0..aut.len())];
            let (tg, th) = (a.tilde(g).unwrap(), a.tilde(h).unwrap());
            let tgh = a.tilde(&g.compose(h)).unwrap();
            let tg_inv = invert_permutation(&tg);
            assert_eq!(x.shuffle_right(&tg).shuffle_right(&th), x.shuffle_right(&tgh));
            assert_eq!(x.shuffle_left(&tg).shuffle_left(&th), x.shuffle_left(&tgh));
            assert_eq!(x.shuffle_left(&tg).shuffle_right(&th), x.shuffle_right(&th).shuffle_left(&tg));
            assert_eq!(x.mul(&y).shuffle_right(&tg), x.mul(&y.shuffle_right(&tg)));
            assert_eq!(x.mul(&y).shuffle_left(&tg), x.shuffle_left(&tg).mul(&y));
            assert_eq!(x.shuffle_right(&tg).mul(&y), x.mul(&y.shuffle_left(&tg_inv)));
            if let Some(inv) = x.inverse() {
                assert!(x.shuffle_right(&tg).mul(&inv.shuffle_left(&tg)).is_identity());
            }
        }
    }

    #[test]
    fn identity_shuffle() {
        let f = PrimeField::new(3).unwrap();
        let x = FpMatrix::from_rows(f, &[vec![1, 2], vec![0, 1]]);
        assert_eq!(shuffle(&x, &[0, 1], Side::Right), x);
        assert_eq!(shuffle(&x, &[0, 1], Side::Left), x);
    }

    #[test]
    fn f_map_examples() {
        let a = alg(&fixtures::ut2(), 3);
        assert!(f_map(&a, &AutoTriple::identity(&a)).unwrap().is_identity(&a));
        let k = AutoTriple::kernel_element(&a, &[2, 1]);
        assert!(f_map(&a, &k).unwrap().is_identity(&a));

        let t = AutoTriple {
            a: dense(&a, &[vec![1, 1], vec![0, 1]]),
            g: PosetAutomorphism::identity(2),
            t: ScalarTransitive::ones(&a),
        };
        let phi = f_map(&a, &t).unwrap();
        // A e11 A⁻¹ = e11 - e12 = e11 + 2 e12 over F_3
        assert_eq!(*phi.image(0, 0), a.element(&[((0, 0), 1), ((0, 1), 2)]).unwrap());
        let conj = t.a.to_dense().mul(&a.unit(0, 0).unwrap().to_dense()).mul(&t.a.to_dense().inverse().unwrap());
        assert_eq!(phi.image(0, 0).to_dense(), conj);
        assert!(phi.is_unital_homomorphism(&a));
    }

    fn setup(p: &Preorder, m: u32) -> (StructAlgebra, Vec<PosetAutomorphism>, Vec<ScalarTransitive>) {
        let a = alg(p, m);
        let aut = a.aut0();
        let t = enumerate_t(&a, 1 << 20).unwrap();
        (a, aut, t)
    }

    #[test]
    fn multiplication_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [fixtures::ut2(), fixtures::vee(), fixtures::ex56(), fixtures::cls3()] {
            let (a, aut, ts) = setup(&p, 3);
            for _ in 0..20 {
                let x = AutoTriple::random(&a, &aut, &ts, &mut rng);
                let y = AutoTriple::random(&a, &aut, &ts, &mut rng);
                let xy = triple_multiply(&a, &x, &y).unwrap();
                let lhs = f_map(&a, &xy).unwrap();
                let rhs = f_map(&a, &x).unwrap().compose(&a, &f_map(&a, &y).unwrap());
                assert_eq!(lhs, rhs);
                assert!(lhs.is_unital_homomorphism(&a));
            }
        }
    }

    #[test]
    fn identity_and_inverse_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [fixtures::ut2(), fixtures::ex56(), fixtures::full2()] {
            let (a, aut, ts) = setup(&p, 3);
            let e = AutoTriple::identity(&a);
            for _ in 0..20 {
                let x = AutoTriple::random(&a, &aut, &ts, &mut rng);
                assert_eq!(triple_multiply(&a, &x, &e).unwrap(), x);
                assert_eq!(triple_multiply(&a, &e, &x).unwrap(), x);
                let inv = triple_inverse(&a, &x).unwrap();
                assert_eq!(triple_multiply(&a, &x, &inv).unwrap(), e);
                assert_eq!(triple_multiply(&a, &inv, &x).unwrap(), e);
            }
        }
    }

    #[test]
    fn equivalence_matches_equal_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (a, aut, ts) = setup(&fixtures::ex56(), 3);
        let x = AutoTriple::random(&a, &aut, &ts, &mut rng);
        assert_eq!(approx_equivalent(&a, &x, &x), Some(vec![1; 4]));
        for _ in 0..30 {
            let x = AutoTriple::random(&a, &aut, &ts, &mut rng);
            let d: Vec<u32> = (0..4).map(|_| rng.gen_range(1..3)).collect();
            let y = triple_multiply(&a, &x, &AutoTriple::kernel_element(&a, &d)).unwrap();
            assert!(approx_equivalent(&a, &x, &y).is_some());
            assert_eq!(f_map(&a, &x).unwrap(), f_map(&a, &y).unwrap());
            let z = AutoTriple::random(&a, &aut, &ts, &mut rng);
            assert_eq!(approx_equivalent(&a, &x, &z).is_some(), f_map(&a, &x).unwrap() == f_map(&a, &z).unwrap());
        }
        let g = aut.iter().find(|&g| *g != x.g).unwrap().clone();
        let y = AutoTriple { g, ..x.clone() };
        assert_eq!(approx_equivalent(&a, &x, &y), None);
    }

    #[test]
    fn equivalence_witness_in_matrix_form() {
        // A⁻¹B = ^{g⁻¹}D^{g⁻¹}; the form with AB⁻¹ needs A to commute with it
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let (a, aut, ts) = setup(&fixtures::ex56(), 3);
        let mut literal_fails = 0;
        for _ in 0..50 {
            let x = AutoTriple::random(&a, &aut, &ts, &mut rng);
            let d: Vec<u32> = (0..4).map(|_| rng.gen_range(1..3)).collect();
            let y = triple_multiply(&a, &x, &AutoTriple::kernel_element(&a, &d)).unwrap();
            let w = approx_equivalent(&a, &x, &y).unwrap();
            let tilde = a.tilde(&x.g).unwrap();
            let dm = FpMatrix::diagonal(a.field(), &w);
            let (am, bm) = (x.a.to_dense(), y.a.to_dense());
            let moved = conjugate_shuffle(&dm, &tilde);
            assert_eq!(am.inverse().unwrap().mul(&bm), moved);
            assert_eq!(bm.inverse().unwrap().mul(&am), moved.inverse().unwrap());
            if am.mul(&bm.inverse().unwrap()) != moved.inverse().unwrap() {
                literal_fails += 1;
            }
        }
        assert!(literal_fails > 0);
    }

    #[test]
    fn kernel_is_exactly_d() {
        let (a, aut, ts) = setup(&fixtures::ut2(), 3);
        let units: Vec<StructMatrix> = (0..27u32)
            .map(|k| a.element(&[((0, 0), k % 3), ((0, 1), k / 3 % 3), ((1, 1), k / 9)]).unwrap())
            .filter(|m| a.is_unit(m))
            .collect();
        assert_eq!(units.len(), 12);
        let mut kernel = 0;
        for m in &units {
            for g in &aut {
                for t in &ts {
                    let x = AutoTriple {
                        a: m.clone(),
                        g: g.clone(),
                        t: t.clone(),
                    };
                    let trivial = f_map(&a, &x).unwrap().is_identity(&a);
                    assert_eq!(trivial, x.is_in_kernel(&a));
                    assert_eq!(trivial, approx_equivalent(&a, &x, &AutoTriple::identity(&a)).is_some());
                    kernel += usize::from(trivial);
                }
            }
        }
        assert_eq!(kernel, 4);
    }

    // all x with x e_ij = e_ij x, by exhaustive search over F_2
    fn brute_center_size(a: &StructAlgebra) -> usize {
        let units: Vec<_> = a.basis().iter().map(|&(i, j)| a.unit(i, j).unwrap()).collect();
        (0..1u64 << a.dim())
            .filter(|&mask| {
                let entries: Vec<_> = a.basis().iter().enumerate().map(|(k, &b)| (b, (mask >> k & 1) as u32)).collect();
                let x = a.element(&entries).unwrap();
                units.iter().all(|e| a.multiply(&x, e) == a.multiply(e, &x))
            })
            .count()
    }

    #[test]
    fn center_examples() {
        assert_eq!(center_basis(&alg(&fixtures::ex56(), 2)).len(), 1);
        assert_eq!(center_basis(&alg(&fixtures::full2(), 2)).len(), 1);
        let two = Preorder::closure(2, &[]).unwrap().preorder;
        assert_eq!(center_basis(&alg(&two, 2)).len(), 2);
        let mut posets: Vec<Preorder> = fixtures::all().into_iter().map(|x| x.1).collect();
        posets.push(two);
        for p in posets {
            let a = alg(&p, 2);
            let basis = center_basis(&a);
            assert_eq!(brute_center_size(&a), 1 << basis.len());
            for z in &basis {
                for &(i, j) in a.basis() {
                    let e = a.unit(i, j).unwrap();
                    assert_eq!(a.multiply(z, &e), a.multiply(&e, z));
                }
            }
        }
    }

    #[test]
    fn coelho_examples() {
        let a = alg(&fixtures::ex56(), 3);
        assert_eq!(default_forest(&a), vec![(0, 2), (0, 3), (2, 1)]);
        let ones = ScalarTransitive::ones(&a);
        let c = coelho_decompose(&a, &ones, None).unwrap();
        assert_eq!(c.d, vec![1; 4]);
        assert!(c.residual.is_ones());

        let mut values: BTreeMap<_, _> = a.basis().iter().map(|&k| (k, 1)).collect();
        values.insert((1, 3), 2);
        let x = ScalarTransitive::new(&a, values).unwrap();
        let c = coelho_decompose(&a, &x, None).unwrap();
        assert_eq!(c.d, vec![1; 4]);
        assert_eq!(c.residual, x);
        assert_eq!(enumerate_g(&a, None, 1000).unwrap().len(), 2);

        let trivial = ScalarTransitive::from_diagonal(&a, &[2, 1, 2, 2]);
        assert!(coelho_decompose(&a, &trivial, None).unwrap().residual.is_ones());
    }

    #[test]
    fn coelho_round_trip_everywhere() {
        for (name, p) in fixtures::all() {
            let a = alg(&p, 3);
            let g = enumerate_g(&a, None, 1 << 20).unwrap();
            let t = enumerate_t(&a, 1 << 20).unwrap();
            let q = a.quotient().num_components();
            assert_eq!(t.len(), g.len() * 2usize.pow((a.n() - q) as u32), "{name}");
            for x in &t {
                let c = coelho_decompose(&a, x, None).unwrap();
                assert_eq!(c.recompose(a.field()), *x, "{name}");
                assert!(g.contains(&c.residual));
            }
        }
    }

    #[test]
    fn coelho_custom_forest() {
        let a = alg(&fixtures::ex56(), 3);
        let forest = [(0, 2), (1, 2), (1, 3)];
        let g = enumerate_g(&a, Some(&forest), 1000).unwrap();
        assert_eq!(g.len(), 2);
        for x in enumerate_t(&a, 1000).unwrap() {
            let c = coelho_decompose(&a, &x, Some(&forest)).unwrap();
            assert_eq!(c.recompose(a.field()), x);
        }
        assert_eq!(coelho_decompose(&a, &ScalarTransitive::ones(&a), Some(&[(0, 1)])), Err(AlgebraError::NotDeltaEdge(0, 1)));
        assert_eq!(
            coelho_decompose(&a, &ScalarTransitive::ones(&a), Some(&[(0, 2), (1, 2)])),
            Err(AlgebraError::NotSpanningForest)
        );
        assert_eq!(
            coelho_decompose(&a, &ScalarTransitive::ones(&a), Some(&[(0, 2), (1, 2), (1, 3), (0, 3)])),
            Err(AlgebraError::NotSpanningForest)
        );
    }

    #[test]
    fn submodules_are_antichain_subspaces() {
        for (name, expected) in [("VEE", 5), ("UT2", 3), ("EX56", 7), ("FULL2", 2)] {
            let p = fixtures::by_name(name).unwrap();
            let a = alg(&p, 2);
            let subs = submodule_oracle(&a).unwrap();
            assert_eq!(subs.len(), expected, "{name}");
            let lattice = AntichainLattice::new(a.quotient()).unwrap();
            let mut from_antichains: Vec<Subspace> = lattice.antichains().iter().map(|&d| antichain_subspace(&lattice, d)).collect();
            from_antichains.sort();
            assert_eq!(subs, from_antichains, "{name}");
        }
        assert_eq!(submodule_oracle(&alg(&fixtures::ut2(), 3)), Err(AlgebraError::OracleField(3)));
        assert_eq!(submodule_oracle(&alg(&fixtures::chain(6), 2)), Err(AlgebraError::OracleSize(6)));
    }

    #[test]
    fn subspace_counts_in_small_dimension() {
        // every subspace of F_2^3 is stable for the discrete order
        let full = alg(&fixtures::block_triangular(&[3]), 2);
        assert_eq!(submodule_oracle(&full).unwrap().len(), 2);
        let discrete = alg(&Preorder::closure(3, &[]).unwrap().preorder, 2);
        assert_eq!(submodule_oracle(&discrete).unwrap().len(), 8);
    }

    #[test]
    fn automorphism_group_order_examples() {
        assert_eq!(automorphism_group_order(&alg(&fixtures::ut2(), 2)), BigInt::from(2));
        // inner automorphisms of M_2(F_2) = PGL_2(F_2) ≅ S_3
        assert_eq!(automorphism_group_order(&alg(&fixtures::full2(), 2)), BigInt::from(6));
    }
}
