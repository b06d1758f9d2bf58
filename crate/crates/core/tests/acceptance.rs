//! Acceptance run: one line per criterion, exact arithmetic throughout.
//! Every tolerance is literal equality; wall-clock limits are pinned below.

use std::process::Command;
use std::time::{Duration, Instant};

use bigbracket::cli_io::InstanceFile;
use bigbracket::courant::{axioms_oracle, is_courant, sample_sections, AXIOM_PAIRING, AXIOM_SYMMETRIC};
use bigbracket::graded_algebra::br;
use bigbracket::hierarchy::{verify_hierarchy, verify_hierarchy_compatibility, Bounds, HierarchyRequest, Seed};
use bigbracket::random::{
    random_bivector, random_element, random_form, random_form2, random_jacobi_violator, random_lie_algebroid,
    random_matrix, random_square_root, search_omega_n, search_pn, search_pomega, search_pqn, twist, Instance, Rng,
};
use bigbracket::structures::{
    compatible_complementary, compatible_hitchin, compatible_omega_n, compatible_pn, compatible_pomega,
    is_closed, is_complementary_form, is_exact_pqn, is_exact_pqn_background, is_hitchin, is_nijenhuis_lie,
    is_omega_n, is_pn, is_poisson, is_pomega, j_n, j_omega, j_pi, omega_n_corollary, pn_corollary,
    pomega_corollary, pomega_tensor, relations_check, LambdaMode,
};
use bigbracket::supergeometry::{identity_element, mu_from_spec, AlgebroidSpec, PhaseSpace};
use bigbracket::tensor_calculus::{
    anticommutator, bivector_components, concomitant_c, evaluate_pair, form2_components, nijenhuis_concomitant,
    omega_deform, pi_deform, torsion_function_auto, torsion_sections, EndoTensor,
};
use bigbracket::{CourantStructure, Element, Outcome, RMatrix, Rational, Report};

const SEARCH_CAP: usize = 20_000;

type Check = Result<String, String>;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn aff1() -> (PhaseSpace, Element) {
    let spec = AlgebroidSpec::<Rational>::aff1();
    (spec.space(), mu_from_spec(spec.space(), &spec).unwrap())
}

fn top_pi(s: PhaseSpace) -> Element {
    &s.theta(0) * &s.theta(1)
}

fn top_omega(s: PhaseSpace) -> Element {
    &s.xi(0) * &s.xi(1)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn zero(what: &str, e: Element) -> Result<(), String> {
    ensure(e.is_zero(), || format!("{what}: residual {e}"))
}

/// The named cross-check exists and agrees.
fn agrees(r: &Report, name: &str) -> Result<(), String> {
    match r.cross_checks.iter().find(|c| c.name == name) {
        Some(c) if c.outcome == Outcome::Agree => Ok(()),
        Some(c) => Err(format!("{}: cross-check {name}: {:?}\n{r}", r.kind, c.outcome)),
        None => Err(format!("{}: no cross-check {name}\n{r}", r.kind)),
    }
}

fn consistent(r: &Report) -> Result<usize, String> {
    ensure(r.consistent(), || format!("inconsistent report\n{r}"))?;
    Ok(r.cross_checks.iter().filter(|c| c.outcome == Outcome::Agree).count())
}

fn algebroid(rng: &mut Rng, rank: usize, base: usize) -> (PhaseSpace, Element) {
    let spec = random_lie_algebroid(rng, rank, base).unwrap();
    let s = spec.space();
    (s, mu_from_spec(s, &spec).unwrap())
}

fn sign(parity: u32) -> i64 {
    if parity % 2 == 0 {
        1
    } else {
        -1
    }
}

// ---------------------------------------------------------------------------

fn algebra_laws() -> Check {
    let mut triples = 0;
    for case in 0..200u64 {
        let mut rng = Rng::new(0xA1 ^ (case << 8));
        let space = PhaseSpace::new(rng.int(0, 1) as usize, rng.int(1, 4) as usize).unwrap();
        let mut el = || {
            let d = rng.int(0, 4) as u32;
            (random_element(&mut rng, space, d, 3), d)
        };
        let ((f, a), (g, b), (h, _)) = (el(), el(), el());
        let s = sign(a * b);
        zero("graded commutativity", &(&f * &g) - &(&g * &f).scale_int(s))?;
        zero("shifted antisymmetry", &br(&f, &g) + &br(&g, &f).scale_int(s))?;
        zero("Leibniz", &br(&f, &(&g * &h)) - &(&(&br(&f, &g) * &h) + &(&g * &br(&f, &h)).scale_int(s)))?;
        zero("Jacobi", &br(&f, &br(&g, &h)) - &(&br(&br(&f, &g), &h) + &br(&g, &br(&f, &h)).scale_int(s)))?;
        for ((k1, l1), u) in f.components() {
            for ((k2, l2), v) in g.components() {
                let w = br(&u, &v);
                ensure(w.is_zero() || (k1 + k2 >= 1 && l1 + l2 >= 1 && w.has_bidegree(k1 + k2 - 1, l1 + l2 - 1)), || {
                    format!("bidegree law fails for F^({k1},{l1}) × F^({k2},{l2}): {w}")
                })?;
            }
        }
        triples += 1;
    }
    Ok(format!("{triples} random triples"))
}

/// Every monomial of bidegree `(k, l)` with `x`-exponents ≤ 1.
fn spanning_set(space: PhaseSpace, k: u32, l: u32) -> Vec<Element> {
    let d = space.rank();
    let n = space.base_dim();
    let mut out = Vec::new();
    let subsets = |size: u32| -> Vec<u32> { (0u32..1 << d).filter(|m| m.count_ones() == size).collect() };
    let max_p = if n == 0 { 0 } else { k.min(l) };
    for c in 0..=max_p {
        // p-monomials of degree c over n coordinates (n ≤ 1 here).
        let p_parts: Vec<Vec<u32>> = if n == 0 { vec![vec![]] } else { vec![vec![c]] };
        for p in &p_parts {
            for xs in 0u32..(1 << n) {
                let x: Vec<u32> = (0..n).map(|i| (xs >> i) & 1).collect();
                for th in subsets(k - c) {
                    for xi in subsets(l - c) {
                        let thetas: Vec<usize> = (0..d).filter(|a| th >> a & 1 == 1).collect();
                        let xis: Vec<usize> = (0..d).filter(|a| xi >> a & 1 == 1).collect();
                        out.push(Element::from_factors(space, q(1), &x, p, &xis, &thetas).unwrap());
                    }
                }
            }
        }
    }
    out
}

fn convention_anchor() -> Check {
    let mut count = 0;
    for (n, d) in [(0, 1), (0, 2), (0, 3), (0, 4), (1, 1), (1, 2), (1, 3), (1, 4)] {
        let space = PhaseSpace::new(n, d).unwrap();
        let id = identity_element::<Rational>(space);
        for k in 0..=4u32 {
            for l in 0..=(4 - k) {
                for u in spanning_set(space, k, l) {
                    zero(&format!("{{id,u}} = (l−k)u, u = {u}"), &br(&id, &u) - &u.scale_int(l as i64 - k as i64))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} spanning monomials"))
}

fn courant_correspondence() -> Check {
    let (mut valid, mut invalid) = (0, 0);
    for case in 0..50u64 {
        let mut rng = Rng::new(0xC3 ^ (case << 8));
        let rank = 2 + (case % 3) as usize;
        let spec = if rank >= 3 && case % 2 == 1 {
            random_jacobi_violator(&mut rng, rank).unwrap()
        } else {
            random_lie_algebroid(&mut rng, rank, if rank == 2 { (case % 4 / 2) as usize } else { 0 }).unwrap()
        };
        let space = spec.space();
        let mu = mu_from_spec(space, &spec).unwrap();
        let mut theta = twist(&twist(&mu, &random_form2(&mut rng, space, 0.4)), &random_bivector(&mut rng, space, 0.4));
        if rank >= 3 && case % 5 == 0 {
            theta += &random_form(&mut rng, space, 3, 0.5);
        }
        let theta = CourantStructure::new(theta).map_err(|e| e.to_string())?;
        let direct = is_courant(&theta);
        let oracle = axioms_oracle(&theta);
        ensure(direct.verdict == oracle.verdict, || format!("case {case}: {{Θ,Θ}} = 0 is {} but\n{oracle}", direct.verdict))?;
        for ax in [AXIOM_PAIRING, AXIOM_SYMMETRIC] {
            ensure(oracle.holds(ax), || format!("case {case}: {ax} fails\n{oracle}"))?;
        }
        if direct.verdict {
            valid += 1
        } else {
            invalid += 1
        }
    }
    ensure(valid > 0 && invalid > 0, || format!("need both verdicts: {valid} valid, {invalid} invalid"))?;
    Ok(format!("50 instances: {valid} valid, {invalid} invalid"))
}

fn iff_props() -> Check {
    let mut tallies = [(0, 0); 3];
    for case in 0..50u64 {
        let mut rng = Rng::new(0xD4 ^ (case << 8));
        let rank = 2 + (case % 3) as usize;
        let base = if rank <= 3 { (case / 3 % 2) as usize } else { 0 };
        let (space, mu) = algebroid(&mut rng, rank, base);

        let pi = random_bivector(&mut rng, space, 0.5);
        let r = is_poisson(&mu, &pi).map_err(|e| e.to_string())?;
        agrees(&r, "J_π Nijenhuis (F-level torsion, J_π² = 0)")?;
        agrees(&r, "J_π Nijenhuis (section-level torsion)")?;
        if r.verdict { tallies[0].0 += 1 } else { tallies[0].1 += 1 }

        let omega = random_form2(&mut rng, space, 0.5);
        let omega = if base > 0 { &omega * &(&space.x(0) + &Element::one(space)) } else { omega };
        let r = is_closed(&mu, &omega).map_err(|e| e.to_string())?;
        agrees(&r, "I_ω = J_ω + J_id Nijenhuis (F-level torsion)")?;
        agrees(&r, "I_ω Nijenhuis (section-level torsion)")?;
        if r.verdict { tallies[1].0 += 1 } else { tallies[1].1 += 1 }

        let n = random_square_root(&mut rng, space);
        let r = is_nijenhuis_lie(&mu, &n).map_err(|e| e.to_string())?;
        agrees(&r, "J_N Nijenhuis on the double (section-level)")?;
        agrees(&r, "J_N Nijenhuis on the double (F-level)")?;
        if r.verdict { tallies[2].0 += 1 } else { tallies[2].1 += 1 }
    }
    for (name, (t, f)) in ["Poisson", "closed", "Nijenhuis"].iter().zip(tallies) {
        ensure(t > 0 && f > 0, || format!("{name}: need both verdicts, got {t} true / {f} false"))?;
    }
    Ok(format!(
        "3 × 50 instances, true/false: Poisson {}/{}, closed {}/{}, Nijenhuis {}/{}",
        tallies[0].0, tallies[0].1, tallies[1].0, tallies[1].1, tallies[2].0, tallies[2].1
    ))
}

fn random_skew(rng: &mut Rng, space: PhaseSpace) -> EndoTensor<Rational> {
    let d = space.rank();
    EndoTensor::new(
        random_matrix(rng, space, d, 0.5, false),
        bivector_components(&random_bivector(rng, space, 0.5)).unwrap(),
        form2_components(&random_form2(rng, space, 0.5)).unwrap(),
    )
    .unwrap()
}

fn courant_instance(rng: &mut Rng, case: u64) -> (PhaseSpace, Element) {
    let rank = 2 + (case % 2) as usize;
    let base = if rank == 2 { (case / 2 % 2) as usize } else { 0 };
    let (space, mu) = algebroid(rng, rank, base);
    let theta = twist(&twist(&mu, &random_form2(rng, space, 0.4)), &random_bivector(rng, space, 0.4));
    (space, theta)
}

/// A pair of anticommuting tensors.
fn anticommuting_pair(rng: &mut Rng, space: PhaseSpace) -> (EndoTensor<Rational>, EndoTensor<Rational>) {
    let pi = random_bivector(rng, space, 0.6);
    let omega = random_form2(rng, space, 0.6);
    let c = q(rng.int(-2, 2));
    let n = &pomega_tensor(&pi, &omega).unwrap() + &RMatrix::scalar(space, space.rank(), c);
    match rng.index(3) {
        0 => (j_pi(&pi), j_n(&n)),
        1 => (j_omega(&omega), j_n(&n)),
        _ => (j_pi(&pi), j_pi(&random_bivector(rng, space, 0.6))),
    }
}

/// A tensor with `I² = λ·id`.
fn square_root_tensor(rng: &mut Rng, space: PhaseSpace) -> EndoTensor<Rational> {
    match rng.index(4) {
        0 => j_n(&random_square_root(rng, space)),
        1 => j_pi(&random_bivector(rng, space, 0.6)),
        2 => &j_omega(&random_form2(rng, space, 0.6)) + &EndoTensor::identity(space),
        _ => &j_pi(&random_bivector(rng, space, 0.6)) + &j_omega(&Element::zero(space)),
    }
}

fn tensor_identities() -> Check {
    let mut shortcut_nonzero = 0;
    for case in 0..50u64 {
        let mut rng = Rng::new(0xE5 ^ (case << 8));
        let (space, theta) = courant_instance(&mut rng, case);
        let xs = sample_sections::<Rational>(space);
        let (i, j) = (random_skew(&mut rng, space), random_skew(&mut rng, space));
        let (a, b) = anticommuting_pair(&mut rng, space);
        let s = square_root_tensor(&mut rng, space);
        ensure(anticommutator(&a, &b).is_zero(), || format!("case {case}: generated pair does not anticommute"))?;
        let c = concomitant_c(&theta, &a, &b);
        let (_, ts) = torsion_function_auto(&theta, &s).map_err(|e| e.to_string())?;
        if !ts.is_zero() {
            shortcut_nonzero += 1;
        }
        let ij = &i + &j;
        for x in &xs {
            for y in &xs {
                let t = |k: &EndoTensor<Rational>| torsion_sections(&theta, k, x, y);
                let n = |k: &EndoTensor<Rational>, l: &EndoTensor<Rational>| nijenhuis_concomitant(&theta, k, l, x, y);
                zero("T(I+J) = T(I) + T(J) + N(I,J)", &t(&ij) - &(&(&t(&i) + &t(&j)) + &n(&i, &j)))?;
                zero("N(I,I) = 2T(I)", &n(&i, &i) - &t(&i).scale_int(2))?;
                zero("C(I,J) = 2N(I,J) for anticommuting I, J", &evaluate_pair(&c, x, y) - &n(&a, &b).scale_int(2))?;
                zero("F-level torsion = section-level torsion (I² = λ id)", &evaluate_pair(&ts, x, y) - &t(&s))?;
            }
        }
    }
    Ok(format!("4 identities × 50 instances on all sample pairs ({shortcut_nonzero} nonzero F-level torsions)"))
}

fn aff1_tensors(s: PhaseSpace) -> Vec<RMatrix> {
    vec![
        RMatrix::scalar(s, 2, q(-1)),
        RMatrix::scalar(s, 2, q(2)),
        RMatrix::identity(s, 2),
        RMatrix::diagonal(s, &[1, 2]),
        RMatrix::diagonal(s, &[2, -3]),
        RMatrix::from_ints(s, &[vec![0, 1], vec![0, 0]]),
        RMatrix::from_ints(s, &[vec![1, 1], vec![0, 1]]),
    ]
}

fn characterizations() -> Check {
    let mut agreed = 0;
    let mut reports = 0;
    let (s, mu) = aff1();
    for c in [1, -2] {
        let (pi, omega) = (top_pi(s).scale_int(c), top_omega(s).scale_int(3 - c));
        for n in aff1_tensors(s) {
            for r in [is_pn(&mu, &pi, &n), is_omega_n(&mu, &omega, &n), is_hitchin(&mu, &omega, &n)] {
                agreed += consistent(&r.map_err(|e| e.to_string())?)?;
                reports += 1;
            }
        }
        let po = is_pomega(&mu, &pi, &omega).map_err(|e| e.to_string())?;
        ensure(po.verdict, || format!("aff(1) PΩ fails\n{po}"))?;
        agreed += consistent(&po)?;
        agreed += consistent(&relations_check(&mu, &pi, &omega).map_err(|e| e.to_string())?)?;
        reports += 2;
    }
    let mut searched = 0;
    for (rank, seeds) in [(3usize, 0..3u64), (4, 0..1)] {
        for seed in seeds {
            let mut rng = Rng::new(seed);
            let inst = search_pn(&mut rng, rank, 0, SEARCH_CAP).map_err(|e| e.to_string())?;
            let (mu, pi, n) = (inst.mu(), inst.element("pi").unwrap().clone(), inst.matrix("N").unwrap().clone());
            let r = is_pn(&mu, &pi, &n).map_err(|e| e.to_string())?;
            ensure(r.verdict, || format!("searched PN seed fails\n{r}"))?;
            agreed += consistent(&r)?;

            let mut rng = Rng::new(seed);
            let inst = search_omega_n(&mut rng, rank, 0, SEARCH_CAP).map_err(|e| e.to_string())?;
            let (mu, w, n) = (inst.mu(), inst.element("omega").unwrap().clone(), inst.matrix("N").unwrap().clone());
            let r = is_omega_n(&mu, &w, &n).map_err(|e| e.to_string())?;
            ensure(r.verdict, || format!("searched ΩN seed fails\n{r}"))?;
            agreed += consistent(&r)?;
            agreed += consistent(&is_hitchin(&mu, &w, &n).map_err(|e| e.to_string())?)?;

            let mut rng = Rng::new(seed);
            let inst = search_pomega(&mut rng, rank, 0, SEARCH_CAP).map_err(|e| e.to_string())?;
            let (mu, pi, w) = (inst.mu(), inst.element("pi").unwrap().clone(), inst.element("omega").unwrap().clone());
            let r = is_pomega(&mu, &pi, &w).map_err(|e| e.to_string())?;
            ensure(r.verdict, || format!("searched PΩ seed fails\n{r}"))?;
            agreed += consistent(&r)?;
            let rel = relations_check(&mu, &pi, &w).map_err(|e| e.to_string())?;
            ensure(rel.verdict, || format!("relations fail on a searched PΩ seed\n{rel}"))?;
            agreed += consistent(&rel)?;
            let n = pomega_tensor(&pi, &w).map_err(|e| e.to_string())?;
            agreed += consistent(&is_hitchin(&mu, &w, &n).map_err(|e| e.to_string())?)?;
            reports += 6;
            searched += 3;
        }
    }
    Ok(format!("{reports} reports ({searched} searched seeds of rank 3–4), {agreed} agreeing cross-checks, none disagreeing"))
}

fn background() -> Check {
    let (s, mu) = aff1();
    let zero_h = Element::zero(s);
    let mut applied = 0;
    let mut converse = 0;
    for c in [0, 1, -1] {
        for w in [0, 1, 2] {
            for a in [1, 2, -1] {
                let (pi, omega) = (top_pi(s).scale_int(c), top_omega(s).scale_int(w));
                let n = RMatrix::scalar(s, 2, q(a));
                let r = is_exact_pqn_background(&mu, &pi, &n, &omega, &zero_h, &LambdaMode::Computed)
                    .map_err(|e| e.to_string())?;
                consistent(&r)?;
                agrees(&r, "J_N + J_π + J_ω Nijenhuis on (A⊕A*, μ+H) (section-level)")?;
                agrees(&r, "J_N + J_π + J_ω Nijenhuis on (A⊕A*, μ+H) (F-level)")?;
                applied += 1;
                let e = is_exact_pqn(&mu, &pi, &n, &omega).map_err(|e| e.to_string())?;
                consistent(&e.report)?;
                if e.corollary_k.is_some() {
                    agrees(&e.report, "exact PqN ⇔ J_N + J_π + J_ω Nijenhuis (ω^♭∘π^# = k id)")?;
                    converse += 1;
                }
            }
        }
    }
    let mut with_h = 0;
    let mut seed = 0;
    while with_h < 2 {
        let mut rng = Rng::new(seed);
        seed += 1;
        let inst = search_pqn(&mut rng, 3, SEARCH_CAP).map_err(|e| e.to_string())?;
        let h = inst.element("H").unwrap().clone();
        ensure(!h.is_zero(), || "searched background has H = 0".into())?;
        let (mu, pi, n, omega) =
            (inst.mu(), inst.element_or_zero("pi"), inst.matrix("N").unwrap().clone(), inst.element_or_zero("omega"));
        let r = is_exact_pqn_background(&mu, &pi, &n, &omega, &h, &LambdaMode::Computed).map_err(|e| e.to_string())?;
        ensure(r.verdict, || format!("searched background fails\n{r}"))?;
        consistent(&r)?;
        agrees(&r, "J_N + J_π + J_ω Nijenhuis on (A⊕A*, μ+H) (section-level)")?;
        agrees(&r, "J_N + J_π + J_ω Nijenhuis on (A⊕A*, μ+H) (F-level)")?;
        with_h += 1;
    }
    Ok(format!("{applied} aff(1) background cases, {converse} converse cases, {with_h} rank-3 seeds with H ≠ 0"))
}

fn dual_complementary() -> Check {
    let (mut t, mut f) = (0, 0);
    for case in 0..30u64 {
        let mut rng = Rng::new(0xF6 ^ (case << 8));
        let rank = 2 + (case % 3) as usize;
        let (space, mu) = algebroid(&mut rng, rank, 0);
        let pi = (0..200)
            .map(|_| random_bivector(&mut rng, space, 0.5))
            .find(|p| br(p, &br(p, &mu)).is_zero())
            .ok_or_else(|| format!("case {case}: no Poisson bivector sampled"))?;
        let omega = random_form2(&mut rng, space, 0.6);
        let r = is_complementary_form(&mu, &pi, &omega).map_err(|e| e.to_string())?;
        consistent(&r)?;
        agrees(&r, "original-space bracket ⇔ dual-space torsion")?;
        if r.verdict { t += 1 } else { f += 1 }
    }
    ensure(t > 0 && f > 0, || format!("need both verdicts, got {t} true / {f} false"))?;
    Ok(format!("30 instances over a point: {t} complementary, {f} not"))
}

struct Tally {
    applied: usize,
    compatible: usize,
}

impl Tally {
    fn new() -> Self {
        Tally { applied: 0, compatible: 0 }
    }

    fn record(&mut self, r: &Report, criterion: &str) -> Result<bool, String> {
        consistent(r)?;
        if r.cross_checks.iter().any(|c| c.name == criterion && c.outcome == Outcome::Agree) {
            self.applied += 1;
        }
        if r.verdict {
            self.compatible += 1;
        }
        Ok(r.verdict)
    }
}

fn compatibilities() -> Check {
    const NEED: usize = 30;
    let mut pn = Tally::new();
    let mut on = Tally::new();
    let mut hit = Tally::new();
    let mut po = Tally::new();
    let mut comp = Tally::new();
    let mut corollaries = [0usize; 3];
    let members = |rng: &mut Rng, s: PhaseSpace, n: &RMatrix| -> Vec<RMatrix> {
        let d = s.rank();
        let (c, e) = (q(rng.nonzero(-2, 2)), q(rng.int(-2, 2)));
        vec![n.pow(2), &n.scale(&c) + &RMatrix::scalar(s, d, e), n.pow(3)]
    };
    let mut seed = 0u64;
    while pn.applied < NEED || on.applied < NEED || po.applied < NEED || comp.applied < NEED {
        ensure(seed < 40, || "too few hypothesis-satisfying instances".into())?;
        let mut rng = Rng::new(100 + seed);
        let rank = 3 + (seed % 4 == 3) as usize;
        // PN pairs: hierarchy members and rescalings of a searched structure.
        if pn.applied < NEED {
            let inst = search_pn(&mut rng, rank, 0, SEARCH_CAP).map_err(|e| e.to_string())?;
            let (mu, pi, n) = (inst.mu(), inst.element("pi").unwrap().clone(), inst.matrix("N").unwrap().clone());
            let s = inst.space();
            for m in members(&mut rng, s, &n) {
                let pi2 = pi_deform(&pi, &n).map_err(|e| e.to_string())?;
                for p2 in [pi.scale_int(2), pi2] {
                    if !is_pn(&mu, &p2, &m).map_err(|e| e.to_string())?.verdict {
                        continue;
                    }
                    let r = compatible_pn(&mu, (&pi, &n), (&p2, &m)).map_err(|e| e.to_string())?;
                    if pn.record(&r, "concomitant criterion for PN structures")? {
                        let c = pn_corollary(&mu, (&pi, &n), (&p2, &m)).map_err(|e| e.to_string())?;
                        ensure(c.verdict && c.consistent(), || format!("PN corollary fails\n{c}"))?;
                        corollaries[0] += 1;
                    }
                }
            }
        }
        if on.applied < NEED {
            let inst = search_omega_n(&mut rng, rank, 0, SEARCH_CAP).map_err(|e| e.to_string())?;
            let (mu, w, n) = (inst.mu(), inst.element("omega").unwrap().clone(), inst.matrix("N").unwrap().clone());
            let s = inst.space();
            for m in members(&mut rng, s, &n) {
                let w2 = omega_deform(&w, &n).map_err(|e| e.to_string())?;
                for ww in [w.scale_int(-3), w2] {
                    if !is_omega_n(&mu, &ww, &m).map_err(|e| e.to_string())?.verdict {
                        continue;
                    }
                    let r = compatible_omega_n(&mu, (&w, &n), (&ww, &m)).map_err(|e| e.to_string())?;
                    if on.record(&r, "concomitant criterion for ΩN structures")? {
                        let c = omega_n_corollary(&mu, (&w, &n), (&ww, &m)).map_err(|e| e.to_string())?;
                        ensure(c.verdict && c.consistent(), || format!("ΩN corollary fails\n{c}"))?;
                        corollaries[1] += 1;
                    }
                }
            }
        }
        if po.applied < NEED || comp.applied < NEED {
            let inst = search_pomega(&mut rng, rank, 0, SEARCH_CAP).map_err(|e| e.to_string())?;
            let (mu, pi, w) = (inst.mu(), inst.element("pi").unwrap().clone(), inst.element("omega").unwrap().clone());
            let n = pomega_tensor(&pi, &w).map_err(|e| e.to_string())?;
            for c in [1, 2, -3] {
                let (p2, w2) = (pi.scale_int(c), w.scale_int(-c));
                let r = compatible_pomega(&mu, (&pi, &w), (&p2, &w2)).map_err(|e| e.to_string())?;
                if po.record(&r, "concomitant criterion for PΩ structures")? {
                    let k = pomega_corollary(&mu, (&pi, &w), (&p2, &w2)).map_err(|e| e.to_string())?;
                    ensure(k.verdict && k.consistent(), || format!("PΩ corollary fails\n{k}"))?;
                    corollaries[2] += 1;
                }
            }
            let wn = omega_deform(&w, &n).map_err(|e| e.to_string())?;
            for w2 in [w.scale_int(2), wn.clone(), omega_deform(&wn, &n).map_err(|e| e.to_string())?] {
                let r = compatible_complementary(&mu, &pi, &w, &w2).map_err(|e| e.to_string())?;
                comp.record(&r, "N_{μ_π}(J_ω,J_ω′) = 0")?;
            }
        }
        seed += 1;
    }
    // Hitchin pairs: symplectic top forms with scalar tensors on rank-2
    // algebras, and PΩ-derived pairs on rank 4.
    let mut case = 0i64;
    while hit.applied < NEED {
        ensure(case < 200, || "too few Hitchin pairs".into())?;
        let (s, mu) = if case % 2 == 0 { aff1() } else { algebroid(&mut Rng::new(case as u64), 2, 0) };
        let (c1, c2) = (1 + case % 3, -(case % 5) + 5);
        let (a, b) = (q(case % 4 - 1), q(2 - case % 3));
        let (w1, w2) = (top_omega(s).scale_int(c1), top_omega(s).scale_int(c2));
        let (n1, n2) = (RMatrix::scalar(s, 2, a), RMatrix::scalar(s, 2, b));
        let r = compatible_hitchin(&mu, (&w1, &n1), (&w2, &n2)).map_err(|e| e.to_string())?;
        hit.record(&r, "concomitant criterion for Hitchin pairs")?;
        case += 1;
    }
    for (name, t) in [("PN", &pn), ("ΩN", &on), ("Hitchin", &hit), ("PΩ", &po), ("complementary", &comp)] {
        ensure(t.applied >= NEED, || format!("{name}: only {} applicable criteria", t.applied))?;
    }
    ensure(corollaries.iter().all(|&c| c > 0), || format!("corollary suites ran {corollaries:?} times"))?;
    Ok(format!(
        "criterion agreement PN {}, ΩN {}, Hitchin {}, PΩ {}, complementary {}; corollaries PN/ΩN/PΩ {:?}",
        pn.applied, on.applied, hit.applied, po.applied, comp.applied, corollaries
    ))
}

fn run_grids(label: &str, mu: Element, seed: Seed<Rational>) -> Result<usize, String> {
    let req = HierarchyRequest { mu, seed, bounds: Bounds::uniform(3).unwrap() };
    let mut conditions = 0;
    for r in [verify_hierarchy(&req), verify_hierarchy_compatibility(&req)] {
        let r = r.map_err(|e| format!("{label}: {e}"))?;
        ensure(r.verdict && r.consistent(), || format!("{label}\n{r}"))?;
        conditions += r.conditions.len();
    }
    Ok(conditions)
}

fn grids() -> Check {
    let (s, mu) = aff1();
    let (pi, w) = (top_pi(s), top_omega(s));
    let mut total = 0;
    total += run_grids("aff(1) PΩ", mu.clone(), Seed::POmega { pi: pi.clone(), omega: w.clone(), second: Some((pi.clone(), -&w)) })?;
    total += run_grids("aff(1) ΩN", mu.clone(), Seed::OmegaN { omega: w.clone(), n: RMatrix::scalar(s, 2, q(2)) })?;
    total += run_grids("aff(1) complementary", mu.clone(), Seed::Complementary { pi: pi.clone(), omega: w.clone() })?;
    total += run_grids("aff(1) PN", mu.clone(), Seed::PN { pi: pi.clone(), n: RMatrix::scalar(s, 2, q(2)) })?;

    let found = |inst: Instance, label: &str| -> Result<Instance, String> {
        let n = pomega_tensor(inst.element("pi").unwrap(), inst.element("omega").unwrap()).map_err(|e| e.to_string())?;
        ensure(n.proportional_to_identity().is_none(), || format!("{label}: N is scalar"))?;
        Ok(inst)
    };
    let pn = search_pn(&mut Rng::new(1), 3, 0, SEARCH_CAP).map_err(|e| e.to_string())?;
    let n = pn.matrix("N").unwrap().clone();
    ensure(n.proportional_to_identity().is_none(), || "rank-3 PN seed has scalar N".into())?;
    total += run_grids("rank-3 PN", pn.mu(), Seed::PN { pi: pn.element("pi").unwrap().clone(), n })?;
    let po = found(search_pomega(&mut Rng::new(0), 3, 0, SEARCH_CAP).map_err(|e| e.to_string())?, "rank-3 PΩ")?;
    let (p3, w3) = (po.element("pi").unwrap().clone(), po.element("omega").unwrap().clone());
    total += run_grids("rank-3 PΩ", po.mu(), Seed::POmega { pi: p3.clone(), omega: w3.clone(), second: Some((p3.clone(), -&w3)) })?;
    total += run_grids("rank-3 complementary", po.mu(), Seed::Complementary { pi: p3, omega: w3 })?;
    Ok(format!("{total} grid statements, bounds n = m = k = r = 3, on 4 aff(1) seeds and 3 rank-3 seeds with non-scalar N"))
}

const AFF1_FILE: &str = r#"{
  "base_dim": 0,
  "rank": 2,
  "coefficients": "integer",
  "algebroid": { "structure": [[["0", "0"], ["0", "0"]], [["0", "1"], ["-1", "0"]]] },
  "tensors": {
    "N": { "kind": "endomorphism", "matrix": [["1", "0"], ["0", "2"]] },
    "omega": { "kind": "2-form", "matrix": [["0", "1"], ["-1", "0"]] },
    "pi": { "kind": "bivector", "matrix": [["0", "1"], ["-1", "0"]] }
  }
}
"#;

fn bin(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_bigbracket")).args(args).output().map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn cli_contract() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let aff1_path = path("aff1.json");
    std::fs::write(&aff1_path, AFF1_FILE).map_err(|e| e.to_string())?;

    let parsed = InstanceFile::load(std::path::Path::new(&aff1_path)).map_err(|e| e.to_string())?;
    let (s, mu) = aff1();
    ensure(parsed.to_instance().map_err(|e| e.to_string())?.mu() == mu, || "aff(1) file does not parse to μ_aff(1)".into())?;
    let _ = s;
    let rnd = path("random.json");
    let (code, _) = bin(&["random", "--seed", "7", "--profile", "tensors-on-fixed-mu", "--rank", "3", "--base-dim", "1", "-o", &rnd])?;
    ensure(code == 0, || format!("random exited {code}"))?;
    let text = std::fs::read_to_string(&rnd).map_err(|e| e.to_string())?;
    let back = InstanceFile::from_json(&text).map_err(|e| e.to_string())?;
    ensure(back.to_json() == text, || "random instance does not round-trip".into())?;

    for (args, want) in [
        (vec!["check", aff1_path.as_str(), "--structure", "pomega"], 0),
        (vec!["check", aff1_path.as_str(), "--structure", "pn"], 1),
        (vec!["validate", aff1_path.as_str()], 0),
        (vec!["check", rnd.as_str(), "--structure", "pomega", "--pi", "nope"], 2),
    ] {
        let (code, _) = bin(&args)?;
        ensure(code == want, || format!("{args:?}: exit {code}, expected {want}"))?;
    }
    let bad = path("bad.json");
    std::fs::write(&bad, AFF1_FILE.replace(r#"[["0", "0"], ["0", "0"]], [["0", "1"]"#, r#"[["1", "0"], ["0", "0"]], [["0", "1"]"#))
        .map_err(|e| e.to_string())?;
    let (code, _) = bin(&["validate", &bad])?;
    ensure(code == 2, || format!("antisymmetry violation: exit {code}, expected 2"))?;

    let (c1, a) = bin(&["selftest", "--seed", "42", "--cases", "100", "--report", "json"])?;
    let (c2, b) = bin(&["selftest", "--seed", "42", "--cases", "100", "--report", "json"])?;
    ensure(c1 == 0 && c2 == 0, || format!("selftest exited {c1}, {c2}"))?;
    ensure(a == b, || "selftest reports differ between runs".into())?;
    Ok(format!("round trip, exit codes 0/1/2, selftest --seed 42 reports identical ({} bytes)", a.len()))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Check); 11] = [
        ("algebra laws of the big bracket", 10, algebra_laws),
        ("convention anchor {id,u} = (l−k)u", 1, convention_anchor),
        ("Courant structures vs Dorfman axioms", 30, courant_correspondence),
        ("Poisson / closed / Nijenhuis via tensors on the double", 60, iff_props),
        ("torsion and concomitant identities", 60, tensor_identities),
        ("PN, ΩN, Hitchin and PΩ characterizations", 120, characterizations),
        ("Poisson quasi-Nijenhuis structures with background", 120, background),
        ("complementary forms on the dual", 30, dual_complementary),
        ("compatible structures and their corollaries", 120, compatibilities),
        ("hierarchies and their compatibility grids", 300, grids),
        ("command-line contract", 10, cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = f();
        let el = t.elapsed();
        let res = match res {
            Ok(d) if el > Duration::from_secs(*limit) => Err(format!("{d}, but took longer than {limit} s")),
            r => r,
        };
        match res {
            Ok(d) => println!("PASS {:>2} {name}: {d} [{:.2} s / {limit} s]", i + 1, el.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {e} [{:.2} s / {limit} s]", i + 1, el.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
