//! Worked examples on the small algebroids: abelian, aff(1),
//! Heisenberg and the tangent line. Expected values follow from
//! hand expansion of the structure constants.

use bigbracket::courant::{anchor_apply, differential, dorfman, is_courant, is_lie_algebroid};
use bigbracket::hierarchy::{deform_iterated, omega_hierarchy, pi_hierarchy};
use bigbracket::random::{random_instance, Profile};
use bigbracket::structures::{
    is_closed, is_complementary_form, is_exact_pqn, is_hitchin, is_nijenhuis_lie, is_omega_n, is_pn, is_poisson,
    is_pomega, j_n,
};
use bigbracket::supergeometry::{mu_from_spec, AlgebroidSpec, PhaseSpace};
use bigbracket::tensor_calculus::deform;
use bigbracket::{CourantStructure, Element, RMatrix, Rational};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn algebroid(spec: AlgebroidSpec<Rational>) -> (PhaseSpace, Element) {
    let s = spec.space();
    (s, mu_from_spec(s, &spec).unwrap())
}

fn abelian2() -> (PhaseSpace, Element) {
    algebroid(AlgebroidSpec::abelian(2).unwrap())
}

fn aff1() -> (PhaseSpace, Element) {
    algebroid(AlgebroidSpec::aff1())
}

fn top(s: PhaseSpace) -> (Element, Element) {
    (&s.theta(0) * &s.theta(1), &s.xi(0) * &s.xi(1))
}

#[test]
fn calibration() {
    let (_, mu) = abelian2();
    assert!(mu.is_zero());

    let (s, mu) = aff1();
    assert_eq!(mu, -&(&(&s.xi(0) * &s.xi(1)) * &s.theta(1)));
    let theta = CourantStructure::new(mu.clone()).unwrap();
    assert_eq!(dorfman(&theta, &s.theta(0), &s.theta(1)), s.theta(1));
    assert!(dorfman(&theta, &s.theta(1), &s.theta(1)).is_zero());
    assert!(anchor_apply(&theta, &s.theta(0), &s.xi(0)).is_zero());
    assert!(differential(&mu, &(&s.xi(0) * &s.xi(1))).is_zero());
    assert!(is_courant(&theta).verdict);
    assert!(is_lie_algebroid(&mu).verdict);

    let (s, mu) = algebroid(AlgebroidSpec::tangent_line());
    let theta = CourantStructure::new(mu).unwrap();
    let x = s.x::<Rational>(0);
    assert_eq!(anchor_apply(&theta, &s.theta(0), &x), Element::one(s));
    assert_eq!(anchor_apply(&theta, &s.theta(0), &(&x * &x)), x.scale_int(2));
}

#[test]
fn deformed_bracket_on_aff1() {
    // [e1,e2]_N = [Ne1,e2] + [e1,Ne2] − N[e1,e2] = e2 + 2e2 − 2e2
    let (s, mu) = aff1();
    let n = RMatrix::diagonal(s, &[1, 2]);
    let deformed = CourantStructure::new(deform(&mu, &j_n(&n))).unwrap();
    assert_eq!(dorfman(&deformed, &s.theta(0), &s.theta(1)), s.theta(1));
    for (a, b) in [(1, 2), (2, -3), (0, 5)] {
        assert!(is_nijenhuis_lie(&mu, &RMatrix::diagonal(s, &[a, b])).unwrap().verdict);
    }
    let nil = is_nijenhuis_lie(&mu, &RMatrix::from_ints(s, &[vec![0, 1], vec![0, 0]])).unwrap();
    assert!(nil.consistent(), "{nil}");
}

#[test]
fn single_structures() {
    let (s, mu) = aff1();
    let (pi, omega) = top(s);
    assert!(is_poisson(&mu, &pi).unwrap().verdict);
    assert!(is_closed(&mu, &omega).unwrap().verdict);
    let (_, abelian_mu) = abelian2();
    assert!(is_poisson(&abelian_mu, &pi).unwrap().verdict);

    let (h, hmu) = algebroid(AlgebroidSpec::heisenberg());
    let r = is_closed(&hmu, &(&h.xi(0) * &h.xi(1))).unwrap();
    assert!(r.consistent(), "{r}");
}

#[test]
fn pn_omega_n_hitchin_on_aff1() {
    let (s, mu) = aff1();
    let (pi, omega) = top(s);
    let scalar = RMatrix::scalar(s, 2, q(3));
    let diag = RMatrix::diagonal(s, &[1, 2]);
    assert!(is_pn(&mu, &pi, &scalar).unwrap().verdict);
    let r = is_pn(&mu, &pi, &diag).unwrap();
    assert!(!r.verdict && r.consistent(), "{r}");
    assert!(is_omega_n(&mu, &omega, &scalar).unwrap().verdict);
    assert!(!is_omega_n(&mu, &omega, &diag).unwrap().verdict);
    assert!(is_hitchin(&mu, &omega, &scalar).unwrap().verdict);
    assert!(!is_hitchin(&mu, &Element::zero(s), &scalar).unwrap().verdict);
    assert!(is_pomega(&mu, &pi, &omega).unwrap().verdict);
}

#[test]
fn abelian_rank_four_hitchin() {
    let (s, mu) = algebroid(AlgebroidSpec::abelian(4).unwrap());
    let varpi = &(&s.xi(0) * &s.xi(1)) + &(&s.xi(2) * &s.xi(3));
    let n = RMatrix::diagonal(s, &[2, 2, -1, -1]);
    assert!(is_hitchin(&mu, &varpi, &n).unwrap().verdict);
}

#[test]
fn exact_pqn_and_complementary_on_aff1() {
    let (s, mu) = aff1();
    let (pi, omega) = top(s);
    for a in [1, 2, -1] {
        let e = is_exact_pqn(&mu, &pi, &RMatrix::scalar(s, 2, q(a)), &omega).unwrap();
        assert!(e.report.consistent(), "{}", e.report);
        assert!(e.corollary_k.is_some());
    }
    let zero = Element::zero(s);
    let z = RMatrix::scalar(s, 2, q(0));
    assert!(is_exact_pqn(&mu, &zero, &z, &zero).unwrap().report.verdict);
    assert!(is_complementary_form(&mu, &pi, &omega).unwrap().verdict);
    assert!(is_complementary_form(&mu, &zero, &omega).unwrap().verdict);
}

#[test]
fn hierarchy_members_for_scalar_tensors() {
    let (s, mu) = aff1();
    let (pi, omega) = top(s);
    let n = RMatrix::scalar(s, 2, q(3));
    assert_eq!(deform_iterated(&mu, &n, 0), mu);
    assert_eq!(deform_iterated(&mu, &n, 2), mu.scale_int(9));
    assert_eq!(omega_hierarchy(&omega, &n, 0).unwrap(), omega);
    assert_eq!(pi_hierarchy(&pi, &n, 0).unwrap(), pi);
    for k in 1..=3u32 {
        assert_eq!(omega_hierarchy(&omega, &n, k as usize).unwrap(), omega.scale_int(3i64.pow(k)));
        assert_eq!(pi_hierarchy(&pi, &n, k as usize).unwrap(), pi.scale_int(3i64.pow(k)));
    }
}

#[test]
fn generator_is_seeded() {
    let a = random_instance(1, Profile::LieAlgebraSolvable, 3, 0).unwrap();
    assert!(is_lie_algebroid(&a.mu()).verdict);
    assert_eq!(a, random_instance(1, Profile::LieAlgebraSolvable, 3, 0).unwrap());
}
