//! Seeded self-test: each suite runs `cases` independent cases, each with its
//! own generator derived from `(seed, suite, case)`, so any failure can be
//! replayed alone and the summary does not depend on evaluation order.

use serde_json::{json, Value};

use super::instance::InstanceFile;
use crate::courant::{axioms_oracle, is_courant, sample_sections, AXIOM_PAIRING, AXIOM_SYMMETRIC};
use crate::graded_algebra::br;
use crate::random::{
    random_bivector, random_element, random_endomorphism, random_form2, random_instance, random_jacobi_violator,
    random_lie_algebroid, random_matrix, random_odd_monomial, twist, Profile, Rng,
};
use crate::report::{Condition, StructureKind, Witness};
use crate::structures::{is_closed, is_nijenhuis_lie, is_omega_n, is_pn, is_poisson, is_pomega};
use crate::supergeometry::{identity_element, mu_from_spec, PhaseSpace};
use crate::tensor_calculus::{nijenhuis_concomitant, torsion_sections, EndoTensor, Matrix};
use crate::{Courant, Element, Report};

type Case = fn(&mut Rng) -> std::result::Result<(), String>;

pub const SUITES: [(&str, Case); 6] = [
    ("algebra-laws", algebra_laws),
    ("convention-anchor", convention_anchor),
    ("courant-correspondence", courant_correspondence),
    ("tensor-identities", tensor_identities),
    ("structure-cross-checks", structure_cross_checks),
    ("instance-round-trip", instance_round_trip),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// `(case index, message)`, sorted by case index.
    pub failures: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestSummary {
    pub seed: u64,
    pub cases: usize,
    pub suites: Vec<SuiteResult>,
}

impl SelftestSummary {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed == s.total)
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new(StructureKind::Selftest);
        for s in &self.suites {
            let name = format!("{}: {}/{} passed", s.name, s.passed, s.total);
            r.push(match s.failures.first() {
                None => Condition::pass(name),
                Some((i, m)) => Condition::fail(name, Witness::Message(format!("case {i}: {m}"))),
            });
        }
        r
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "cases": self.cases,
            "suites": self.suites.iter().map(|s| json!({
                "name": s.name,
                "passed": s.passed,
                "total": s.total,
                "failures": s.failures.iter().map(|(i, m)| json!({ "case": i, "message": m })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// The generator for one case.
pub fn case_rng(seed: u64, suite: usize, case: usize) -> Rng {
    let mut base = Rng::new(seed ^ ((suite as u64) << 48));
    let mix = base.next_u64();
    Rng::new(mix ^ (case as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn run_selftest(seed: u64, cases: usize) -> SelftestSummary {
    let suites = SUITES
        .iter()
        .enumerate()
        .map(|(si, (name, case))| {
            let mut failures = Vec::new();
            for c in 0..cases {
                let mut rng = case_rng(seed, si, c);
                if let Err(m) = case(&mut rng) {
                    failures.push((c, m));
                }
            }
            SuiteResult { name, passed: cases - failures.len(), total: cases, failures }
        })
        .collect();
    SelftestSummary { seed, cases, suites }
}

fn random_space(rng: &mut Rng, max_rank: usize) -> PhaseSpace {
    PhaseSpace::new(rng.int(0, 1) as usize, rng.int(1, max_rank as i64) as usize).expect("small space")
}

fn degree_of(e: &Element) -> u32 {
    e.total_degree().unwrap_or(0)
}

fn sign(parity: u32) -> i64 {
    if parity % 2 == 0 {
        1
    } else {
        -1
    }
}

fn expect_zero(what: &str, e: Element) -> std::result::Result<(), String> {
    if e.is_zero() {
        Ok(())
    } else {
        Err(format!("{what}: residual {e}"))
    }
}

/// Graded commutativity, shifted antisymmetry, Leibniz, Jacobi and the
/// bidegree `(−1,−1)` law on homogeneous elements of degree ≤ 4.
fn algebra_laws(rng: &mut Rng) -> std::result::Result<(), String> {
    let space = random_space(rng, 4);
    let mut el = || {
        let deg = rng.int(0, 4) as u32;
        random_element(rng, space, deg, 3)
    };
    let (f, g, h) = (el(), el(), el());
    let (a, b) = (degree_of(&f), degree_of(&g));
    expect_zero("graded commutativity", &(&f * &g) - &(&g * &f).scale_int(sign(a * b)))?;
    expect_zero("shifted antisymmetry", &br(&f, &g) + &br(&g, &f).scale_int(sign(a * b)))?;
    let leibniz = &br(&f, &(&g * &h)) - &(&(&br(&f, &g) * &h) + &(&g * &br(&f, &h)).scale_int(sign(a * b)));
    expect_zero("Leibniz", leibniz)?;
    let jacobi = &br(&f, &br(&g, &h)) - &(&br(&br(&f, &g), &h) + &br(&g, &br(&f, &h)).scale_int(sign(a * b)));
    expect_zero("Jacobi", jacobi)?;
    for ((k1, l1), u) in f.components() {
        for ((k2, l2), v) in g.components() {
            let w = br(&u, &v);
            let ok = w.is_zero() || (k1 + k2 >= 1 && l1 + l2 >= 1 && w.has_bidegree(k1 + k2 - 1, l1 + l2 - 1));
            if !ok {
                return Err(format!("bidegree law: {{F^({k1},{l1}), F^({k2},{l2})}} ∌ {w}"));
            }
        }
    }
    Ok(())
}

/// `{id, u} = (l − k)u` for `u` of bidegree `(k, l)`, `k + l ≤ 4`.
fn convention_anchor(rng: &mut Rng) -> std::result::Result<(), String> {
    let space = random_space(rng, 4);
    let k = rng.int(0, 4) as usize;
    let l = rng.int(0, 4 - k as i64) as usize;
    let Some(mut u) = random_odd_monomial(rng, space, k.min(space.rank()), l.min(space.rank())) else {
        return Ok(());
    };
    if space.base_dim() > 0 && rng.chance(0.5) {
        u = &u * &(&space.x(0) * &space.p(0));
    }
    let (k, l) = u.bidegree().expect("monomial");
    let id = identity_element::<crate::Rational>(space);
    expect_zero("{id,u} = (l−k)u", &br(&id, &u) - &u.scale_int(l as i64 - k as i64))
}

/// `{Θ,Θ} = 0` agrees with the axioms oracle, and the first two axioms hold
/// for every twisted `μ`, valid or not.
fn courant_correspondence(rng: &mut Rng) -> std::result::Result<(), String> {
    let rank = if rng.chance(0.4) { 3 } else { 2 };
    let spec = if rank >= 3 && rng.chance(0.4) {
        random_jacobi_violator(rng, rank).map_err(|e| e.to_string())?
    } else {
        let n = if rank >= 3 { 0 } else { rng.int(0, 1) as usize };
        random_lie_algebroid(rng, rank, n).map_err(|e| e.to_string())?
    };
    let space = spec.space();
    let mu = mu_from_spec(space, &spec).map_err(|e| e.to_string())?;
    let twisted = twist(&twist(&mu, &random_form2(rng, space, 0.4)), &random_bivector(rng, space, 0.4));
    let theta = Courant::new(twisted).map_err(|e| e.to_string())?;
    let direct = is_courant(&theta).verdict;
    let oracle = axioms_oracle(&theta);
    if direct != oracle.verdict {
        return Err(format!("{{Θ,Θ}} = 0 is {direct} but the axioms give {}", oracle.verdict));
    }
    for ax in [AXIOM_PAIRING, AXIOM_SYMMETRIC] {
        if !oracle.holds(ax) {
            return Err(format!("{ax} fails"));
        }
    }
    Ok(())
}

/// `N_Θ(I, I) = 2 T_Θ I` on random pairs of sample sections for a random skew `I`.
fn tensor_identities(rng: &mut Rng) -> std::result::Result<(), String> {
    let rank = rng.int(2, 3) as usize;
    let n = if rank >= 3 { 0 } else { rng.int(0, 1) as usize };
    let spec = random_lie_algebroid(rng, rank, n).map_err(|e| e.to_string())?;
    let space = spec.space();
    let mu = mu_from_spec(space, &spec).map_err(|e| e.to_string())?;
    let d = space.rank();
    let n = random_matrix(rng, space, d, 0.5, false);
    let pi = crate::tensor_calculus::bivector_components(&random_bivector(rng, space, 0.5)).expect("bivector");
    let om = crate::tensor_calculus::form2_components(&random_form2(rng, space, 0.5)).expect("2-form");
    let i = EndoTensor::new(n, pi, om).map_err(|e| e.to_string())?;
    let xs = sample_sections::<crate::Rational>(space);
    for _ in 0..3 {
        let (x, y) = (&xs[rng.index(xs.len())], &xs[rng.index(xs.len())]);
        let lhs = nijenhuis_concomitant(&mu, &i, &i, x, y);
        let rhs = torsion_sections(&mu, &i, x, y).scale_int(2);
        expect_zero("N(I,I) = 2T(I)", &lhs - &rhs)?;
    }
    Ok(())
}

/// Every predicate's independent routes agree on random data.
fn structure_cross_checks(rng: &mut Rng) -> std::result::Result<(), String> {
    let rank = if rng.chance(0.4) { 3 } else { 2 };
    let n = if rank >= 3 { 0 } else { rng.int(0, 1) as usize };
    let spec = random_lie_algebroid(rng, rank, n).map_err(|e| e.to_string())?;
    let space = spec.space();
    let mu = mu_from_spec(space, &spec).map_err(|e| e.to_string())?;
    let n: Matrix<crate::Rational> = random_endomorphism(rng, space);
    let pi = random_bivector(rng, space, 0.5);
    let omega = random_form2(rng, space, 0.5);
    let reports = [
        is_poisson(&mu, &pi),
        is_closed(&mu, &omega),
        is_nijenhuis_lie(&mu, &n),
        is_pn(&mu, &pi, &n),
        is_omega_n(&mu, &omega, &n),
        is_pomega(&mu, &pi, &omega),
    ];
    for r in reports {
        let r = r.map_err(|e| e.to_string())?;
        let bad = r.disagreements().next().map(|c| format!("{}: cross-check {} disagrees", r.kind, c.name));
        if let Some(m) = bad {
            return Err(m);
        }
    }
    Ok(())
}

/// Serialize, parse and compare a random instance.
fn instance_round_trip(rng: &mut Rng) -> std::result::Result<(), String> {
    let profile = if rng.chance(0.5) { Profile::LieAlgebraSolvable } else { Profile::TensorsOnFixedMu };
    let (seed, rank, base) = (rng.next_u64(), rng.int(1, 4) as usize, rng.int(0, 1) as usize);
    let inst = random_instance(seed, profile, rank, base)
        .map_err(|e| e.to_string())?;
    let file = InstanceFile::from_instance(&inst).map_err(|e| e.to_string())?;
    let text = file.to_json();
    let back = InstanceFile::from_json(&text).map_err(|e| e.to_string())?;
    if back.to_json() != text {
        return Err("re-serialized file differs".into());
    }
    if back.to_instance().map_err(|e| e.to_string())? != inst {
        return Err("parsed instance differs".into());
    }
    Ok(())
}
