//! Iterated deformations `μ_{N^[k]}`, the hierarchies `ω_{N^n}` and
//! `N^n π`, and grid verification of the structures they carry.
//!
//! A grid statement is checked on every cell within the bounds, in the order
//! `k` (deformation depth) outer, then `n`, then `m`; the first failing cell
//! is reported, so reports are deterministic.

use std::fmt;

use crate::courant::is_lie_algebroid;
use crate::error::{Error, Result};
use crate::graded_algebra::{br, GradedElement};
use crate::report::{Condition, StructureKind, StructureReport, Witness};
use crate::scalar::Scalar;
use crate::structures::{
    compatible_complementary, compatible_omega_n, compatible_pn, compatible_pomega, is_closed,
    is_complementary_form, is_nijenhuis_lie, is_omega_n, is_pn, is_pomega, j_n, pomega_tensor,
};
use crate::tensor_calculus::{
    bivector, bivector_commutes, bivector_components, bivector_composite, deform, form2, form2_components,
    form_commutes, form_composite, omega_deform, pi_deform, Matrix,
};

type E<S> = GradedElement<S>;
type Report<S> = StructureReport<S>;

pub const DEFAULT_BOUND: usize = 3;
pub const MAX_BOUND: usize = 4;
/// Optional override of the default bounds: `"b"` or `"n,m,k"`.
pub const BOUNDS_VAR: &str = "BIGBRACKET_HIERARCHY_BOUNDS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub n: usize,
    pub m: usize,
    pub k: usize,
}

impl Bounds {
    pub fn new(n: usize, m: usize, k: usize) -> Result<Self> {
        if n.max(m).max(k) > MAX_BOUND {
            return Err(Error::Precondition(format!("hierarchy bounds ({n},{m},{k}) exceed {MAX_BOUND}")));
        }
        Ok(Bounds { n, m, k })
    }

    pub fn uniform(b: usize) -> Result<Self> {
        Self::new(b, b, b)
    }

    /// Default bounds, or those given in [`BOUNDS_VAR`].
    pub fn from_env() -> Result<Self> {
        match std::env::var(BOUNDS_VAR) {
            Ok(v) => Self::parse(&v),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::parse(BOUNDS_VAR, e.to_string()))?;
        match parts[..] {
            [b] => Self::uniform(b),
            [n, m, k] => Self::new(n, m, k),
            _ => Err(Error::parse(BOUNDS_VAR, format!("expected \"b\" or \"n,m,k\", found {s:?}"))),
        }
    }

    /// Upper bound on the number of grid cells of one statement.
    pub fn cells(&self) -> usize {
        (self.n + 1) * (self.m + 1) * (self.k + 1)
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { n: DEFAULT_BOUND, m: DEFAULT_BOUND, k: DEFAULT_BOUND }
    }
}

/// The structure a hierarchy grows from.
#[derive(Clone, Debug, PartialEq)]
pub enum Seed<S: Scalar> {
    PN { pi: E<S>, n: Matrix<S> },
    OmegaN { omega: E<S>, n: Matrix<S> },
    /// A PΩ structure; `second` optionally supplies `(π′, ω′)` for the
    /// mixed-tensor statement.
    POmega { pi: E<S>, omega: E<S>, second: Option<(E<S>, E<S>)> },
    /// A closed complementary form `ω` of the Poisson bivector `π`.
    Complementary { pi: E<S>, omega: E<S> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    POmega,
    OmegaN,
    Complementary,
    PnCompat,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::POmega, Family::OmegaN, Family::Complementary, Family::PnCompat];

    pub fn tag(self) -> &'static str {
        match self {
            Family::POmega => "pomega",
            Family::OmegaN => "omegan",
            Family::Complementary => "complementary",
            Family::PnCompat => "pn-compat",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.tag() == tag)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyRequest<S: Scalar> {
    pub mu: E<S>,
    pub seed: Seed<S>,
    pub bounds: Bounds,
}

// ---------------------------------------------------------------------------
// hierarchy members

/// `μ_{N^[k]} = {N, {N, … {N, μ}}}` with `k` nested deformations.
pub fn deform_iterated<S: Scalar>(mu: &E<S>, n: &Matrix<S>, k: usize) -> E<S> {
    let jn = j_n(n);
    (0..k).fold(mu.clone(), |acc, _| deform(&acc, &jn))
}

/// `ω_{N^n}`, by `n` successive bracket deformations `ω ↦ ½{N, ω}`,
/// validated against the matrix route `(ω_{N^n})^♭ = ω^♭ ∘ N^n`.
pub fn omega_hierarchy<S: Scalar>(omega: &E<S>, n: &Matrix<S>, power: usize) -> Result<E<S>> {
    let w = form2_components(omega)?;
    if !form_commutes(&w, n) {
        return Err(Error::Precondition(format!("ω^♭∘N ≠ N*∘ω^♭ for ω = {omega}, N = {n}")));
    }
    let mut out = omega.clone();
    for _ in 0..power {
        out = omega_deform(&out, n)?;
    }
    let direct = form2(&form_composite(&w, &n.pow(power as u32)))?;
    if direct != out {
        return Err(Error::Precondition(format!("bracket route {out} ≠ matrix route {direct} for ω_{{N^{power}}}")));
    }
    Ok(out)
}

/// `N^n π`, the bivector with `(N^n π)^# = N^n ∘ π^#`, validated against
/// `π^# ∘ (N*)^n`.
pub fn pi_hierarchy<S: Scalar>(pi: &E<S>, n: &Matrix<S>, power: usize) -> Result<E<S>> {
    let p = bivector_components(pi)?;
    if !bivector_commutes(&p, n) {
        return Err(Error::Precondition(format!("N∘π^# ≠ π^#∘N* for π = {pi}, N = {n}")));
    }
    let mut out = pi.clone();
    for _ in 0..power {
        out = pi_deform(&out, n)?;
    }
    let nk = n.pow(power as u32);
    let direct = bivector(&(&nk * &p))?;
    if direct != out || bivector(&bivector_composite(&p, &nk))? != out {
        return Err(Error::Precondition(format!("iterated {out} ≠ direct {direct} for N^{power}π")));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// grids

/// Precomputed `μ_{N^[k]}`, `N^n`, and the member families of one tensor.
struct Ladder<S: Scalar> {
    n: Matrix<S>,
    mus: Vec<E<S>>,
    powers: Vec<Matrix<S>>,
}

impl<S: Scalar> Ladder<S> {
    fn new(mu: &E<S>, n: &Matrix<S>, k_max: usize, p_max: usize) -> Self {
        let mut mus = vec![mu.clone()];
        let jn = j_n(n);
        for k in 0..k_max {
            let next = deform(&mus[k], &jn);
            mus.push(next);
        }
        let powers = (0..=p_max.max(1)).map(|p| n.pow(p as u32)).collect();
        Ladder { n: n.clone(), mus, powers }
    }

    fn omegas(&self, omega: &E<S>, count: usize) -> Result<Vec<E<S>>> {
        (0..=count).map(|p| omega_hierarchy(omega, &self.n, p)).collect()
    }

    fn pis(&self, pi: &E<S>, count: usize) -> Result<Vec<E<S>>> {
        (0..=count).map(|p| pi_hierarchy(pi, &self.n, p)).collect()
    }
}

/// One grid statement: a condition on the first failing cell, plus an
/// identity cross-check that every cell's own cross-checks agree.
fn grid<S: Scalar>(
    r: &mut Report<S>,
    name: &str,
    dims: &[usize],
    mut cell: impl FnMut(&[usize]) -> Result<Report<S>>,
) {
    let mut idx = vec![0usize; dims.len()];
    let mut failure: Option<Witness<S>> = None;
    let mut consistent = true;
    loop {
        match cell(&idx) {
            Ok(rep) => {
                consistent &= rep.consistent();
                if failure.is_none() && !rep.verdict {
                    let f = rep.first_failure().expect("a failing condition");
                    failure = Some(Witness::Grid { cell: idx.clone(), detail: format!("{}: {}", f.name, f.witness) });
                }
            }
            Err(e) => {
                if failure.is_none() {
                    failure = Some(Witness::Grid { cell: idx.clone(), detail: e.to_string() });
                }
            }
        }
        // odometer, last index fastest
        let mut d = dims.len();
        loop {
            if d == 0 {
                r.push(match failure {
                    None => Condition::pass(name),
                    Some(w) => Condition::fail(name, w),
                });
                r.identity(format!("{name}: cell cross-checks"), consistent);
                return;
            }
            d -= 1;
            if idx[d] < dims[d] {
                idx[d] += 1;
                break;
            }
            idx[d] = 0;
        }
    }
}

fn single<S: Scalar>(kind: StructureKind, c: Condition<S>) -> Report<S> {
    Report::new(kind).with(c)
}

pub const LIE_LADDER: &str = "μ_{N^[k]} is a Lie algebroid";
pub const NIJENHUIS_POWERS: &str = "N^n is Nijenhuis with respect to μ_{N^k}";
pub const ITERATED_EQUALS_POWER: &str = "μ_{N^[k]} = μ_{N^k}";
pub const CLOSED_GRID: &str = "d_{μ_{N^[k]}}(ω_{N^n}) = 0";
pub const OMEGA_RECURSION: &str = "ω_{N^{n+m}} = ½{N^m, ω_{N^n}}";
pub const FIXED_PN: &str = "(π, N) is PN on μ_{N^[k]}";
pub const FIXED_ON: &str = "(ω, N) is ΩN on μ_{N^[k]}";
pub const FIXED_POMEGA: &str = "(π, ω) is PΩ on μ_{N^[k]}";
pub const FIXED_COMPLEMENTARY: &str = "ω is a closed complementary form of π on μ_{N^[k]}";
pub const PN_GRID: &str = "(N^nπ, N^m) is PN on μ_{N^[k]}";
pub const ON_GRID: &str = "(ω_{N^n}, N^m) is ΩN on μ_{N^[k]}";
pub const POMEGA_GRID: &str = "(N^nπ, ω_{N^m}) is PΩ on μ_{N^[k]}";
pub const COMPLEMENTARY_GRID: &str = "ω_{N^n} is a closed complementary form of N^mπ on μ_{N^[k]}";
pub const MIXED_GRID: &str = "(ω_{I^n}, I^m) and (ω′_{I^n}, I^m) are ΩN on μ_{I^[k]}, I ∈ {N, N′, N̂}";

/// The Lie-algebroid and Nijenhuis-power statements for one tensor.
fn nijenhuis_grids<S: Scalar>(r: &mut Report<S>, mu: &E<S>, l: &Ladder<S>, b: Bounds) {
    grid(r, LIE_LADDER, &[b.k], |i| Ok(is_lie_algebroid(&l.mus[i[0]])));
    grid(r, ITERATED_EQUALS_POWER, &[b.k], |i| {
        let k = i[0];
        let power = deform(mu, &j_n(&l.powers_at(k)));
        Ok(single(StructureKind::Hierarchy, Condition::vanishing(ITERATED_EQUALS_POWER, &l.mus[k] - &power)))
    });
    grid(r, NIJENHUIS_POWERS, &[b.k, b.n], |i| {
        let mu_k = deform(mu, &j_n(&l.powers_at(i[0])));
        is_nijenhuis_lie(&mu_k, &l.powers_at(i[1]))
    });
}

impl<S: Scalar> Ladder<S> {
    fn powers_at(&self, p: usize) -> Matrix<S> {
        match self.powers.get(p) {
            Some(m) => m.clone(),
            None => self.n.pow(p as u32),
        }
    }
}

fn closed_grids<S: Scalar>(r: &mut Report<S>, l: &Ladder<S>, omegas: &[E<S>], b: Bounds) {
    grid(r, CLOSED_GRID, &[b.k, b.n], |i| is_closed(&l.mus[i[0]], &omegas[i[1]]));
    grid(r, OMEGA_RECURSION, &[b.n, b.m], |i| {
        let (n, m) = (i[0], i[1]);
        let target = omega_hierarchy(&omegas[0], &l.n, n + m)?;
        let via = br(&j_n(&l.powers_at(m)).to_function(), &omegas[n]).scale(&S::half());
        Ok(single(StructureKind::Hierarchy, Condition::vanishing(OMEGA_RECURSION, &via - &target)))
    });
}

fn closed_complementary<S: Scalar>(mu: &E<S>, pi: &E<S>, omega: &E<S>) -> Result<Report<S>> {
    let mut r = is_complementary_form(mu, pi, omega)?;
    r.push(Condition::vanishing("d_μω = 0", br(mu, omega)));
    Ok(r)
}

/// The seed predicate; an error when it does not hold.
fn check_seed<S: Scalar>(mu: &E<S>, seed: &Seed<S>) -> Result<Report<S>> {
    let r = match seed {
        Seed::PN { pi, n } => is_pn(mu, pi, n)?,
        Seed::OmegaN { omega, n } => is_omega_n(mu, omega, n)?,
        Seed::POmega { pi, omega, second } => {
            let r = is_pomega(mu, pi, omega)?;
            if let Some((pi2, omega2)) = second {
                for (name, p, w) in [("(π,ω′)", pi, omega2), ("(π′,ω)", pi2, omega), ("(π′,ω′)", pi2, omega2)] {
                    let s = is_pomega(mu, p, w)?;
                    if !s.verdict {
                        return Err(Error::Precondition(format!("seed {name} is not a PΩ structure")));
                    }
                }
                let d = &pomega_tensor(pi, omega2)? + &pomega_tensor(pi2, omega)?;
                if !d.is_zero() {
                    return Err(Error::Precondition("π^#∘(ω′)^♭ ≠ −(π′)^#∘ω^♭".into()));
                }
            }
            r
        }
        Seed::Complementary { pi, omega } => closed_complementary(mu, pi, omega)?,
    };
    if !r.verdict {
        let f = r.first_failure().expect("a failing condition");
        return Err(Error::Precondition(format!("seed fails {}: {}", f.name, f.witness)));
    }
    Ok(r)
}

/// All hierarchy statements for the seed, on every cell within the bounds.
pub fn verify_hierarchy<S: Scalar>(req: &HierarchyRequest<S>) -> Result<Report<S>> {
    let (mu, b) = (&req.mu, req.bounds);
    let seed_report = check_seed(mu, &req.seed)?;
    let mut r = Report::new(StructureKind::Hierarchy);
    r.absorb_checks("seed", &seed_report);
    let p_max = b.n.max(b.m) * 2 + 1;
    match &req.seed {
        Seed::PN { pi, n } => {
            let l = Ladder::new(mu, n, b.k, p_max);
            nijenhuis_grids(&mut r, mu, &l, b);
            let pis = l.pis(pi, b.n)?;
            grid(&mut r, FIXED_PN, &[b.k], |i| is_pn(&l.mus[i[0]], pi, n));
            grid(&mut r, PN_GRID, &[b.k, b.n, b.m], |i| is_pn(&l.mus[i[0]], &pis[i[1]], &l.powers_at(i[2])));
        }
        Seed::OmegaN { omega, n } => {
            let l = Ladder::new(mu, n, b.k, p_max);
            nijenhuis_grids(&mut r, mu, &l, b);
            let omegas = l.omegas(omega, b.n.max(b.m))?;
            closed_grids(&mut r, &l, &omegas, b);
            grid(&mut r, FIXED_ON, &[b.k], |i| is_omega_n(&l.mus[i[0]], omega, n));
            grid(&mut r, ON_GRID, &[b.k, b.n, b.m], |i| {
                is_omega_n(&l.mus[i[0]], &omegas[i[1]], &l.powers_at(i[2]))
            });
        }
        Seed::POmega { pi, omega, second } => {
            let t = pomega_tensor(pi, omega)?;
            let l = Ladder::new(mu, &t, b.k, p_max);
            nijenhuis_grids(&mut r, mu, &l, b);
            let omegas = l.omegas(omega, b.n.max(b.m))?;
            let pis = l.pis(pi, b.n.max(b.m))?;
            closed_grids(&mut r, &l, &omegas, b);
            grid(&mut r, FIXED_PN, &[b.k], |i| is_pn(&l.mus[i[0]], pi, &t));
            grid(&mut r, FIXED_ON, &[b.k], |i| is_omega_n(&l.mus[i[0]], omega, &t));
            grid(&mut r, FIXED_POMEGA, &[b.k], |i| is_pomega(&l.mus[i[0]], pi, omega));
            grid(&mut r, POMEGA_GRID, &[b.k, b.n, b.m], |i| is_pomega(&l.mus[i[0]], &pis[i[1]], &omegas[i[2]]));
            if mu.space().base_dim() == 0 {
                grid(&mut r, FIXED_COMPLEMENTARY, &[b.k], |i| closed_complementary(&l.mus[i[0]], pi, omega));
                grid(&mut r, COMPLEMENTARY_GRID, &[b.k, b.n, b.m], |i| {
                    closed_complementary(&l.mus[i[0]], &pis[i[2]], &omegas[i[1]])
                });
            } else {
                r.not_applicable(COMPLEMENTARY_GRID, "complementary forms are checked over a point only");
            }
            match second {
                Some((pi2, omega2)) => mixed_grid(&mut r, mu, (pi, omega), (pi2, omega2), b)?,
                None => r.not_applicable(MIXED_GRID, "no second PΩ pair supplied"),
            }
        }
        Seed::Complementary { pi, omega } => {
            let t = pomega_tensor(pi, omega)?;
            let l = Ladder::new(mu, &t, b.k, p_max);
            nijenhuis_grids(&mut r, mu, &l, b);
            let omegas = l.omegas(omega, b.n)?;
            let pis = l.pis(pi, b.m)?;
            grid(&mut r, FIXED_COMPLEMENTARY, &[b.k], |i| closed_complementary(&l.mus[i[0]], pi, omega));
            grid(&mut r, COMPLEMENTARY_GRID, &[b.k, b.n, b.m], |i| {
                closed_complementary(&l.mus[i[0]], &pis[i[2]], &omegas[i[1]])
            });
        }
    }
    Ok(r)
}

fn mixed_grid<S: Scalar>(
    r: &mut Report<S>,
    mu: &E<S>,
    a: (&E<S>, &E<S>),
    b2: (&E<S>, &E<S>),
    b: Bounds,
) -> Result<()> {
    let tensors = [pomega_tensor(a.0, a.1)?, pomega_tensor(b2.0, b2.1)?, pomega_tensor(a.0, b2.1)?];
    let ladders: Vec<Ladder<S>> = tensors.iter().map(|t| Ladder::new(mu, t, b.k, b.m)).collect();
    let mut families = Vec::new();
    for l in &ladders {
        families.push((l.omegas(a.1, b.n)?, l.omegas(b2.1, b.n)?));
    }
    grid(r, MIXED_GRID, &[tensors.len() - 1, b.k, b.n, b.m], |i| {
        let (l, (w, w2)) = (&ladders[i[0]], &families[i[0]]);
        let (mu_k, nm) = (&l.mus[i[1]], l.powers_at(i[3]));
        let mut rep = Report::new(StructureKind::Hierarchy);
        rep.push_report("(ω_{I^n}, I^m) ΩN", &is_omega_n(mu_k, &w[i[2]], &nm)?);
        rep.push_report("(ω′_{I^n}, I^m) ΩN", &is_omega_n(mu_k, &w2[i[2]], &nm)?);
        Ok(rep)
    });
    Ok(())
}

// ---------------------------------------------------------------------------
// compatibility within a hierarchy

pub const PN_COMPAT_GRID: &str = "(N^kπ, N^n) and (N^lπ, N^m) are compatible PN on μ_{N^[r]}";
pub const ON_COMPAT_GRID: &str = "(ω_{N^k}, N^n) and (ω_{N^l}, N^m) are compatible ΩN on μ_{N^[r]}";
pub const POMEGA_COMPAT_GRID: &str = "(N^nπ, ω_{N^m}) and (N^lπ, ω_{N^k}) are compatible PΩ on μ_{N^[r]}";
pub const COMPLEMENTARY_COMPAT_GRID: &str = "ω_{N^n} and ω_{N^m} are compatible complementary forms of N^kπ";
pub const COMPLEMENTARY_BRACKET_GRID: &str = "{ω_{N^n}, {ω_{N^m}, {N^kπ, μ}}} = 0";

/// Unordered pairs `(a, b)`, `a ≤ b`, of members indexed by two powers each.
fn member_pairs(p: usize, q: usize) -> Vec<((usize, usize), (usize, usize))> {
    let members: Vec<(usize, usize)> = (0..=p).flat_map(|i| (0..=q).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for (x, a) in members.iter().enumerate() {
        for c in &members[x..] {
            out.push((*a, *c));
        }
    }
    out
}

/// Pairwise compatibility of hierarchy members over `μ_{N^[r]}`, `r ≤ k`.
/// Compatibility is symmetric, so each unordered pair is checked once; the
/// grid cell is `[r, pair index]` and failures name the four powers.
pub fn verify_hierarchy_compatibility<S: Scalar>(req: &HierarchyRequest<S>) -> Result<Report<S>> {
    let (mu, b) = (&req.mu, req.bounds);
    let seed_report = check_seed(mu, &req.seed)?;
    let mut r = Report::new(StructureKind::HierarchyCompatibility);
    r.absorb_checks("seed", &seed_report);
    let pairs = member_pairs(b.n, b.m);
    let last = pairs.len() - 1;
    let label = |rep: Report<S>, i: &[usize]| -> Report<S> {
        let ((x0, x1), (y0, y1)) = pairs[i[1]];
        let mut out = Report::new(StructureKind::HierarchyCompatibility);
        out.push_report(format!("r={}, members ({x0},{x1}) and ({y0},{y1})", i[0]), &rep);
        out
    };
    match &req.seed {
        Seed::PN { pi, n } => {
            let l = Ladder::new(mu, n, b.k, b.m);
            let pis = l.pis(pi, b.n)?;
            grid(&mut r, PN_COMPAT_GRID, &[b.k, last], |i| {
                let ((k, n1), (l2, m)) = pairs[i[1]];
                let rep = compatible_pn(&l.mus[i[0]], (&pis[k], &l.powers_at(n1)), (&pis[l2], &l.powers_at(m)))?;
                Ok(label(rep, i))
            });
        }
        Seed::OmegaN { omega, n } => {
            let l = Ladder::new(mu, n, b.k, b.m);
            let omegas = l.omegas(omega, b.n)?;
            grid(&mut r, ON_COMPAT_GRID, &[b.k, last], |i| {
                let ((k, n1), (l2, m)) = pairs[i[1]];
                let rep =
                    compatible_omega_n(&l.mus[i[0]], (&omegas[k], &l.powers_at(n1)), (&omegas[l2], &l.powers_at(m)))?;
                Ok(label(rep, i))
            });
        }
        Seed::POmega { pi, omega, .. } => {
            let t = pomega_tensor(pi, omega)?;
            let l = Ladder::new(mu, &t, b.k, 1);
            let (pis, omegas) = (l.pis(pi, b.n)?, l.omegas(omega, b.m)?);
            grid(&mut r, POMEGA_COMPAT_GRID, &[b.k, last], |i| {
                let ((n1, m), (l2, k)) = pairs[i[1]];
                let rep = compatible_pomega(&l.mus[i[0]], (&pis[n1], &omegas[m]), (&pis[l2], &omegas[k]))?;
                Ok(label(rep, i))
            });
        }
        Seed::Complementary { pi, omega } => {
            if mu.space().base_dim() > 0 {
                return Err(Error::UnsupportedMode("complementary forms are checked over a point only".into()));
            }
            let t = pomega_tensor(pi, omega)?;
            let l = Ladder::new(mu, &t, 0, 1);
            let (pis, omegas) = (l.pis(pi, b.k)?, l.omegas(omega, b.n.max(b.m))?);
            grid(&mut r, COMPLEMENTARY_COMPAT_GRID, &[b.k, b.n, b.m], |i| {
                compatible_complementary(mu, &pis[i[0]], &omegas[i[1]], &omegas[i[2]])
            });
            grid(&mut r, COMPLEMENTARY_BRACKET_GRID, &[b.k, b.n, b.m], |i| {
                let v = br(&omegas[i[1]], &br(&omegas[i[2]], &br(&pis[i[0]], mu)));
                Ok(single(StructureKind::HierarchyCompatibility, Condition::vanishing(COMPLEMENTARY_BRACKET_GRID, v)))
            });
        }
    }
    Ok(r)
}
