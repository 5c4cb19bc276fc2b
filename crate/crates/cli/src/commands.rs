use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use smflag::antichain::poset_automorphisms;
use smflag::grading::GroupTriviality;
use smflag::group::catalog;
use smflag::oracle::{self, Outcome};
use smflag::structmat::{
    automorphism_group_order, center_basis, coelho_decompose, default_forest, enumerate_g, enumerate_t, t_order, unit_group_order,
};
use smflag::{
    all_trivial_abelian, all_trivial_for_group, classify_orbits, end_graded_iso, AlgebraError, AntichainLattice, BudgetExceeded, FiniteGroup, Preorder,
    PrimeField, QuotientPoset, StructAlgebra,
};

use crate::report::Report;

/// Antichain lattices larger than this get no meet/join tables.
pub const TABLE_CAP: usize = 16;

pub struct Job {
    pub preorder: Preorder,
    pub field: PrimeField,
    pub group: FiniteGroup,
    pub budget: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Done,
    Undecided,
}

fn undecided(report: &mut Report, e: &BudgetExceeded) -> Status {
    report.push("verdict", "undecided");
    report.push("reason", e.to_string());
    Status::Undecided
}

fn one_based(xs: &[usize]) -> Value {
    xs.iter().map(|x| x + 1).collect()
}

pub fn analyze(job: &Job) -> (Report, Status) {
    let q = QuotientPoset::new(&job.preorder);
    let mut r = Report::new("analyze");
    r.push("n", job.preorder.n());
    r.push("classes", q.len());
    r.push("class_members", q.classes().iter().map(|c| one_based(c)).collect::<Vec<_>>());
    r.push("hasse", q.hasse().iter().map(|&(a, b)| json!([a + 1, b + 1])).collect::<Vec<_>>());
    r.push("components", q.num_components());
    r.push("component_classes", (0..q.num_components()).map(|t| one_based(&q.component(t))).collect::<Vec<_>>());
    r.push("heights", q.heights().to_vec());
    r.push("multiplicities", (0..q.len()).map(|a| q.multiplicity(a)).collect::<Vec<_>>());
    match AntichainLattice::new(&q) {
        Ok(l) => r.push("antichains", l.len()),
        Err(e) => r.push("antichains", e.to_string()),
    }
    r.push("aut0", poset_automorphisms(&q, true).len());
    (r, Status::Done)
}

pub fn lattice(job: &Job) -> Result<(Report, Status), smflag::LatticeError> {
    let q = QuotientPoset::new(&job.preorder);
    let l = AntichainLattice::new(&q)?;
    let mut r = Report::new("lattice");
    let elems = l.antichains();
    r.push("count", elems.len());
    r.push("antichains", elems.iter().map(|d| one_based(&d.members())).collect::<Vec<_>>());
    if elems.len() <= TABLE_CAP {
        let index = |d| elems.iter().position(|&e| e == d).expect("closed under meet and join") + 1;
        let table = |op: &dyn Fn(_, _) -> Result<_, _>| -> Result<Vec<Vec<usize>>, smflag::LatticeError> {
            elems.iter().map(|&d| elems.iter().map(|&e| op(d, e).map(index)).collect()).collect()
        };
        r.push("meet", json!(table(&|d, e| l.meet(d, e))?));
        r.push("join", json!(table(&|d, e| l.join(d, e))?));
    } else {
        r.push("tables", format!("omitted above {TABLE_CAP} antichains"));
    }
    Ok((r, Status::Done))
}

pub fn aut(job: &Job) -> (Report, Status) {
    let alg = StructAlgebra::new(&job.preorder, job.field);
    let q = alg.quotient();
    let p = job.field.modulus();
    let mut r = Report::new("aut");
    let units = unit_group_order(&alg);
    let aut0 = alg.aut0().len();
    let t = t_order(&alg);
    let total = automorphism_group_order(&alg);
    let pm1 = BigInt::from(p - 1);
    let center_units = pm1.pow(q.num_components() as u32);
    let inner = &units / &center_units;
    r.push("field", p);
    r.push("dim", alg.dim());
    r.push("center_dim", center_basis(&alg).len());
    r.push("units", units.to_string());
    r.push("aut0", aut0);
    r.push("t", t.to_string());
    r.push("d", pm1.pow(alg.n() as u32).to_string());
    r.push("automorphisms", total.to_string());
    r.push("inner", inner.to_string());
    let forest = default_forest(&alg);
    r.push("forest", forest.iter().map(|&(a, b)| json!([a + 1, b + 1])).collect::<Vec<_>>());

    let enumerated = enumerate_t(&alg, job.budget).and_then(|all| {
        let g = enumerate_g(&alg, None, job.budget).map_err(|e| match e {
            AlgebraError::Budget(b) => b,
            other => unreachable!("default forest is valid: {other}"),
        })?;
        Ok((all, g))
    });
    let (all, g) = match enumerated {
        Ok(x) => x,
        Err(e) => {
            r.push("structure", format!("|Aut| = |U|*|Aut0|*|T|/|D| = {total}"));
            let status = undecided(&mut r, &e);
            return (r, status);
        }
    };
    r.push("t_enumerated", all.len());
    r.push("g", g.len());
    let consistent = &inner * BigInt::from(g.len() * aut0) == total;
    r.push(
        "structure",
        format!("|Aut| = |Inn|*|G|*|Aut0| = {inner}*{}*{aut0} = {total}", g.len()),
    );
    r.push("structure_consistent", consistent && BigInt::from(all.len()) == t);
    let mut rng = ChaCha8Rng::seed_from_u64(job.seed);
    let a = all.choose(&mut rng).expect("T contains the constant function");
    let dec = coelho_decompose(&alg, a, None).expect("default forest is valid");
    let entries = |s: &smflag::ScalarTransitive| s.values().iter().map(|(&(i, j), &v)| json!([i + 1, j + 1, v])).collect::<Vec<_>>();
    r.push(
        "decomposition",
        json!({
            "a": entries(a),
            "diagonal": dec.d,
            "residual": entries(&dec.residual),
            "round_trip": dec.recompose(job.field) == *a,
        }),
    );
    (r, Status::Done)
}

fn fixed_verdict(v: &GroupTriviality) -> Value {
    let mut out = json!({
        "verdict": v.all_trivial(),
        "labelings_scanned": v.labelings_scanned,
        "consistent": v.consistent,
        "trivial": v.trivial,
    });
    if let Some((arrows, u)) = &v.counterexample {
        out["counterexample"] = json!({
            "arrows": arrows.values(),
            "labeling": u.entries().iter().map(|&(i, j, x)| json!([i + 1, j + 1, x])).collect::<Vec<_>>(),
        });
    }
    out
}

fn abelian_verdict(v: Option<bool>) -> Value {
    v.map_or_else(|| "inconclusive".into(), Value::from)
}

pub fn triviality(job: &Job) -> (Report, Status) {
    let p = &job.preorder;
    let g = &job.group;
    let q = QuotientPoset::new(p);
    let mut r = Report::new("triviality");
    r.push("group", g.name());
    r.push("order", g.order());
    r.push("arrows", q.hasse().iter().map(|&(a, b)| json!([a + 1, b + 1])).collect::<Vec<_>>());
    let abelian = all_trivial_abelian(p, Some(g));
    r.push(
        "abelian",
        json!({
            "all_abelian_trivial": abelian.all_abelian_trivial,
            "cycle_rank": abelian.cycle_rank,
            "free_rank": abelian.free_rank,
            "torsion": abelian.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "group_verdict": abelian_verdict(abelian.group_verdict),
        }),
    );
    let evidence: Vec<Value> = catalog()
        .iter()
        .map(|h| {
            let fixed = match all_trivial_for_group(p, h, job.budget) {
                Ok(v) => Value::from(v.all_trivial()),
                Err(_) => "undecided".into(),
            };
            let abelian = all_trivial_abelian(p, Some(h)).group_verdict;
            json!({ "group": h.name(), "fixed": fixed, "abelian": abelian_verdict(abelian) })
        })
        .collect();
    r.push("catalog", evidence);
    match all_trivial_for_group(p, g, job.budget) {
        Ok(v) => {
            r.push("fixed", fixed_verdict(&v));
            r.push("verdict", v.all_trivial());
            (r, Status::Done)
        }
        Err(e) => {
            let status = undecided(&mut r, &e);
            (r, status)
        }
    }
}

pub fn classify(job: &Job) -> (Report, Status) {
    let p = &job.preorder;
    let g = &job.group;
    let mut r = Report::new("classify");
    r.push("group", g.name());
    let cls = match classify_orbits(p, g, job.budget) {
        Ok(c) => c,
        Err(e) => {
            let status = undecided(&mut r, &e);
            return (r, status);
        }
    };
    r.push("orbits", cls.orbits.len());
    r.push(
        "representatives",
        cls.orbits.iter().map(|o| json!({ "tuple": o.representative, "size": o.size })).collect::<Vec<_>>(),
    );
    let tuples = cls.orbit_of.len() as u128;
    let q = QuotientPoset::new(p);
    let aut0 = poset_automorphisms(&q, true);
    let pair_cost = tuples * tuples * (aut0.len() * q.num_components() * g.order()) as u128;
    if pair_cost <= job.budget as u128 {
        let all: Vec<Vec<usize>> = cls
            .orbit_of
            .iter()
            .enumerate()
            .map(|(k, _)| {
                let mut h = vec![0; p.n()];
                let mut k = k;
                for x in h.iter_mut().rev() {
                    *x = k % g.order();
                    k /= g.order();
                }
                h
            })
            .collect();
        let agree = all.iter().all(|h| {
            all.iter().all(|h2| {
                let iso = end_graded_iso(&q, g, h, h2, &aut0, job.budget).expect("cost checked").is_some();
                iso == cls.same_orbit(h, h2)
            })
        });
        r.push("cross_validated", agree);
    } else {
        r.push("cross_validated", "skipped");
    }
    (r, Status::Done)
}

pub fn oracle(job: &Job) -> (Report, Status) {
    let checks = oracle::run_suite(&job.preorder, &job.group, job.budget);
    let mut r = Report::new("oracle");
    r.push("group", job.group.name());
    r.push("agreement", checks.iter().all(|c| c.outcome != Outcome::Disagree));
    r.push("checks", serde_json::to_value(&checks).expect("checks serialize"));
    (r, Status::Done)
}
