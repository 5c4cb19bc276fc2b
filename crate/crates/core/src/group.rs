//! Finite groups given by multiplication tables.

use std::fmt;
use std::path::Path;

use thiserror::Error;

/// Largest `m` accepted by [`GroupSpec::Symmetric`].
pub const MAX_SYMMETRIC_DEGREE: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order must be positive")]
    Empty,
    #[error("table is not square: row {row} has {len} entries, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("entry {value} at ({row},{col}) is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("element 0 is not the identity: 0*{0} != {0}")]
    Identity(usize),
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("associativity fails at ({0},{1},{2})")]
    NotAssociative(usize, usize, usize),
    #[error("symmetric group degree {0} exceeds the cap of {MAX_SYMMETRIC_DEGREE}")]
    SymmetricTooLarge(usize),
    #[error("unknown group spec `{0}`")]
    UnknownSpec(String),
    #[error("cannot read group table `{path}`: {reason}")]
    TableFile { path: String, reason: String },
}

/// Description of a group to build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Symmetric(usize),
    /// Dihedral group of order `2m`.
    Dihedral(usize),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Table(Vec<Vec<usize>>),
}

impl GroupSpec {
    /// Parses `Z6`, `S3`, `D4`, `Z2xZ3` or `table:<path>`.
    pub fn parse(s: &str) -> Result<GroupSpec, GroupError> {
        let s = s.trim();
        if let Some(path) = s.strip_prefix("table:") {
            return Ok(GroupSpec::Table(read_table_file(Path::new(path))?));
        }
        let unknown = || GroupError::UnknownSpec(s.to_string());
        let mut factors = s.split(['x', 'X']).map(|f| parse_factor(f.trim()).ok_or_else(unknown));
        let first = factors.next().ok_or_else(unknown)??;
        factors.try_fold(first, |acc, f| Ok(GroupSpec::Product(Box::new(acc), Box::new(f?))))
    }

    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        let g = match self {
            GroupSpec::Cyclic(m) => FiniteGroup::cyclic(*m)?,
            GroupSpec::Symmetric(m) => FiniteGroup::symmetric(*m)?,
            GroupSpec::Dihedral(m) => FiniteGroup::dihedral(*m)?,
            GroupSpec::Product(a, b) => FiniteGroup::product(&a.build()?, &b.build()?),
            GroupSpec::Table(t) => FiniteGroup::from_table(t.clone())?,
        };
        Ok(g.with_name(self.to_string()))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(m) => write!(f, "Z{m}"),
            GroupSpec::Symmetric(m) => write!(f, "S{m}"),
            GroupSpec::Dihedral(m) => write!(f, "D{m}"),
            GroupSpec::Product(a, b) => write!(f, "{a}x{b}"),
            GroupSpec::Table(t) => write!(f, "table({})", t.len()),
        }
    }
}

fn parse_factor(s: &str) -> Option<GroupSpec> {
    let (kind, num) = s.split_at(s.char_indices().nth(1)?.0);
    let m: usize = num.parse().ok()?;
    if m == 0 {
        return None;
    }
    match kind {
        "Z" | "C" => Some(GroupSpec::Cyclic(m)),
        "S" => Some(GroupSpec::Symmetric(m)),
        "D" => Some(GroupSpec::Dihedral(m)),
        _ => None,
    }
}

/// Reads an order followed by `order²` whitespace-separated entries.
fn read_table_file(path: &Path) -> Result<Vec<Vec<usize>>, GroupError> {
    let err = |reason: String| GroupError::TableFile {
        path: path.display().to_string(),
        reason,
    };
    let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
    let mut tokens = text.split_whitespace();
    let order: usize = tokens
        .next()
        .ok_or_else(|| err("empty file".into()))?
        .parse()
        .map_err(|_| err("order is not an integer".into()))?;
    let mut rows = Vec::with_capacity(order);
    for r in 0..order {
        let mut row = Vec::with_capacity(order);
        for _ in 0..order {
            let tok = tokens.next().ok_or_else(|| err(format!("row {r} is short")))?;
            row.push(tok.parse().map_err(|_| err(format!("bad entry `{tok}`")))?);
        }
        rows.push(row);
    }
    if let Some(tok) = tokens.next() {
        return Err(err(format!("trailing token `{tok}`")));
    }
    Ok(rows)
}

/// A validated finite group; element `0` is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
    abelian: bool,
}

impl FiniteGroup {
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(GroupError::Empty);
        }
        let mut table = Vec::with_capacity(order * order);
        for (row, entries) in rows.iter().enumerate() {
            if entries.len() != order {
                return Err(GroupError::NotSquare {
                    row,
                    len: entries.len(),
                    order,
                });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= order {
                    return Err(GroupError::OutOfRange { row, col, value });
                }
                table.push(value);
            }
        }
        Self::from_flat(order, table)
    }

    fn from_flat(order: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        let mul = |a: usize, b: usize| table[a * order + b];
        for a in 0..order {
            if mul(0, a) != a || mul(a, 0) != a {
                return Err(GroupError::Identity(a));
            }
        }
        let mut inv = vec![usize::MAX; order];
        for (a, slot) in inv.iter_mut().enumerate() {
            let b = (0..order).find(|&b| mul(a, b) == 0 && mul(b, a) == 0);
            *slot = b.ok_or(GroupError::NoInverse(a))?;
        }
        for a in 0..order {
            for b in 0..order {
                let ab = mul(a, b);
                for c in 0..order {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let abelian = (0..order).all(|a| (0..order).all(|b| mul(a, b) == mul(b, a)));
        Ok(FiniteGroup {
            name: format!("table({order})"),
            order,
            table,
            inv,
            abelian,
        })
    }

    fn with_name(mut self, name: String) -> Self {
        self.name = name;
        self
    }

    pub fn cyclic(m: usize) -> Result<Self, GroupError> {
        if m == 0 {
            return Err(GroupError::Empty);
        }
        let table = (0..m * m).map(|k| (k / m + k % m) % m).collect();
        Ok(Self::from_flat(m, table)?.with_name(format!("Z{m}")))
    }

    /// Permutations of `0..m` in lexicographic order, composed as functions:
    /// `(σ·τ)(x) = σ(τ(x))`.
    pub fn symmetric(m: usize) -> Result<Self, GroupError> {
        if m == 0 {
            return Err(GroupError::Empty);
        }
        if m > MAX_SYMMETRIC_DEGREE {
            return Err(GroupError::SymmetricTooLarge(m));
        }
        let perms = permutations(m);
        let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let order = perms.len();
        let mut table = Vec::with_capacity(order * order);
        for s in &perms {
            for t in &perms {
                let st: Vec<usize> = t.iter().map(|&x| s[x]).collect();
                table.push(index(&st));
            }
        }
        Ok(Self::from_flat(order, table)?.with_name(format!("S{m}")))
    }

    /// Dihedral group of order `2m`; element `k + m·e` is `r^k s^e`.
    pub fn dihedral(m: usize) -> Result<Self, GroupError> {
        if m == 0 {
            return Err(GroupError::Empty);
        }
        let order = 2 * m;
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            let (a, e) = (x % m, x / m);
            for y in 0..order {
                let (b, f) = (y % m, y / m);
                let k = if e == 0 { (a + b) % m } else { (a + m - b) % m };
                table.push(k + m * ((e + f) % 2));
            }
        }
        Ok(Self::from_flat(order, table)?.with_name(format!("D{m}")))
    }

    /// Direct product; `(a, b)` is element `a·|H| + b`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
        let (m, k) = (g.order, h.order);
        let order = m * k;
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                table.push(g.mul(x / k, y / k) * k + h.mul(x % k, y % k));
            }
        }
        let inv = (0..order).map(|x| g.inv(x / k) * k + h.inv(x % k)).collect();
        FiniteGroup {
            name: format!("{}x{}", g.name, h.name),
            order,
            table,
            inv,
            abelian: g.abelian && h.abelian,
        }
    }

    /// The multiplicative group `F_p^*`; element `k` stands for the residue `k + 1`.
    pub fn units_mod(p: u32) -> FiniteGroup {
        let order = (p - 1) as usize;
        let table: Vec<usize> = (0..order * order)
            .map(|k| {
                let a = (k / order + 1) as u64;
                let b = (k % order + 1) as u64;
                (a * b % p as u64 - 1) as usize
            })
            .collect();
        let mut inv = vec![0; order];
        for a in 0..order {
            inv[a] = (0..order).find(|&b| table[a * order + b] == 0).expect("F_p^* is a group");
        }
        FiniteGroup {
            name: format!("F{p}*"),
            order,
            table,
            inv,
            abelian: true,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `a·b⁻¹`.
    #[inline]
    pub fn div(&self, a: usize, b: usize) -> usize {
        self.mul(a, self.inv[b])
    }

    pub fn pow(&self, a: usize, mut e: u64) -> usize {
        let mut base = a;
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Product of a sequence, left to right.
    pub fn product_of(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems.into_iter().fold(0, |acc, x| self.mul(acc, x))
    }
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let m = used.len();
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for x in 0..m {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                go(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// The groups used for exhaustive evidence: `Z2, Z3, Z4, Z2xZ2, S3, D4`.
pub fn catalog() -> Vec<FiniteGroup> {
    ["Z2", "Z3", "Z4", "Z2xZ2", "S3", "D4"]
        .iter()
        .map(|s| GroupSpec::parse(s).and_then(|g| g.build()).expect("catalog specs are valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> FiniteGroup {
        GroupSpec::parse(s).unwrap().build().unwrap()
    }

    #[test]
    fn basic_groups() {
        let z2 = build("Z2");
        assert_eq!((z2.order(), z2.is_abelian()), (2, true));
        let s3 = build("S3");
        assert_eq!((s3.order(), s3.is_abelian()), (6, false));
        let d4 = build("D4");
        assert_eq!((d4.order(), d4.is_abelian()), (8, false));
        assert_eq!(build("S5").order(), 120);
    }

    #[test]
    fn z2xz3_is_cyclic_of_order_six() {
        let g = build("Z2xZ3");
        assert_eq!(g.order(), 6);
        assert!(g.is_abelian());
        assert!(g.elements().any(|a| g.element_order(a) == 6));
        assert_eq!(g.name(), "Z2xZ3");
    }

    #[test]
    fn group_string_parse_errors() {
        assert_eq!(GroupSpec::parse("Q8"), Err(GroupError::UnknownSpec("Q8".into())));
        assert!(GroupSpec::parse("Z0").is_err());
        assert!(GroupSpec::parse("").is_err());
        assert_eq!(GroupSpec::parse("S6").unwrap().build(), Err(GroupError::SymmetricTooLarge(6)));
    }

    #[test]
    fn corrupted_tables_are_caught() {
        let s3 = build("S3");
        let rows: Vec<Vec<usize>> = (0..6).map(|a| (0..6).map(|b| s3.mul(a, b)).collect()).collect();
        assert!(FiniteGroup::from_table(rows.clone()).is_ok());
        // every single-entry mutation must be rejected
        for r in 0..6 {
            for c in 0..6 {
                for v in 0..6 {
                    if v == rows[r][c] {
                        continue;
                    }
                    let mut bad = rows.clone();
                    bad[r][c] = v;
                    assert!(FiniteGroup::from_table(bad).is_err(), "mutation ({r},{c})->{v} accepted");
                }
            }
        }
    }

    #[test]
    fn table_shape_errors() {
        assert_eq!(FiniteGroup::from_table(vec![]), Err(GroupError::Empty));
        assert!(matches!(
            FiniteGroup::from_table(vec![vec![0, 1], vec![1]]),
            Err(GroupError::NotSquare { .. })
        ));
        assert!(matches!(
            FiniteGroup::from_table(vec![vec![0, 2], vec![1, 0]]),
            Err(GroupError::OutOfRange { .. })
        ));
    }

    #[test]
    fn units_group_is_cyclic() {
        let u = FiniteGroup::units_mod(7);
        assert_eq!(u.order(), 6);
        assert!(u.elements().any(|a| u.element_order(a) == 6));
        // 3 * 5 = 15 = 1 mod 7
        assert_eq!(u.mul(2, 4), 0);
    }

    #[test]
    fn table_file_round_trip() {
        let dir = std::env::temp_dir().join(format!("smflag-group-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("z3.txt");
        std::fs::write(&path, "3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
        let g = GroupSpec::parse(&format!("table:{}", path.display())).unwrap().build().unwrap();
        assert_eq!(g.order(), 3);
        std::fs::write(&path, "2\n0 1\n1\n").unwrap();
        assert!(matches!(
            GroupSpec::parse(&format!("table:{}", path.display())),
            Err(GroupError::TableFile { .. })
        ));
        std::fs::remove_dir_all(dir).ok();
    }
}
