//! Deterministic random instances: Lie algebras and algebroids with
//! structural Jacobi, tensors with small integer entries, random elements,
//! Jacobi violators, and rejection-sampled searches for structures.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng as _, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::courant::is_lie_algebroid;
use crate::error::{Error, Result};
use crate::graded_algebra::br;
use crate::structures::{self, LambdaMode};
use crate::supergeometry::{mu_from_spec, AlgebroidSpec, PhaseSpace};
use crate::tensor_calculus::{bivector, form2, form_from_components, Matrix};
use crate::{Algebroid, Element, RMatrix, Rational};

/// Seeded generator; every random choice in the crate goes through it.
pub struct Rng(SplitMix64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(SplitMix64::seed_from_u64(seed))
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.0.gen_range(lo..=hi)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.0.gen_range(0..len)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.0.gen_bool(p)
    }

    pub fn nonzero(&mut self, lo: i64, hi: i64) -> i64 {
        loop {
            let v = self.int(lo, hi);
            if v != 0 {
                return v;
            }
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.gen()
    }
}

fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

// ---------------------------------------------------------------------------
// Lie algebras and algebroids

/// `[E_ij, E_kl] = δ_jk E_il − δ_li E_kj` on elementary matrices.
fn elementary_bracket(a: (usize, usize), b: (usize, usize)) -> Vec<((usize, usize), i64)> {
    let mut out = Vec::new();
    if a.1 == b.0 {
        out.push(((a.0, b.1), 1));
    }
    if b.1 == a.0 {
        out.push(((b.0, a.1), -1));
    }
    // E_ii with itself, or the two terms cancelling
    if out.len() == 2 && out[0].0 == out[1].0 {
        out.clear();
    }
    out
}

/// A bracket-closed set of `rank` upper-triangular elementary matrices.
fn closed_subset(rng: &mut Rng, rank: usize) -> Vec<(usize, usize)> {
    loop {
        let m = 2 + rng.index(3);
        let mut pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
        if pairs.len() < rank {
            continue;
        }
        let mut chosen = Vec::new();
        while chosen.len() < rank {
            let p = pairs.swap_remove(rng.index(pairs.len()));
            chosen.push(p);
        }
        let closed = chosen.iter().all(|&a| {
            chosen.iter().all(|&b| elementary_bracket(a, b).iter().all(|(e, _)| chosen.contains(e)))
        });
        if closed {
            chosen.sort();
            return chosen;
        }
    }
}

/// Unimodular integer matrix `L·U` with small entries and its inverse.
pub fn unimodular(rng: &mut Rng, d: usize) -> (Vec<Vec<i64>>, Vec<Vec<Rational>>) {
    let mut l = vec![vec![0i64; d]; d];
    let mut u = vec![vec![0i64; d]; d];
    for i in 0..d {
        l[i][i] = 1;
        u[i][i] = if rng.chance(0.5) { 1 } else { -1 };
        for j in 0..i {
            if rng.chance(0.4) {
                l[i][j] = rng.int(-1, 1);
            }
            if rng.chance(0.4) {
                u[j][i] = rng.int(-1, 1);
            }
        }
    }
    let p: Vec<Vec<i64>> =
        (0..d).map(|i| (0..d).map(|j| (0..d).map(|k| l[i][k] * u[k][j]).sum()).collect()).collect();
    (p.clone(), invert(&p))
}

fn invert(p: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    let d = p.len();
    let mut a: Vec<Vec<Rational>> = p
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational> = row.iter().map(|&v| q(v)).collect();
            r.extend((0..d).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| !a[r][col].is_zero()).expect("invertible");
        a.swap(col, piv);
        let inv = Rational::one() / a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..d {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, pv) in a[r].iter_mut().zip(pivot_row) {
                    *v = &*v - &(&f * &pv);
                }
            }
        }
    }
    a.into_iter().map(|r| r[d..].to_vec()).collect()
}

/// Random solvable Lie algebra of rank `rank` (an upper-triangular matrix
/// subalgebra in a random integral basis), as an algebroid over `R^base_dim`
/// with `base_dim ≤ 1`. Over the line the anchor is `λ(e_a)·f(x)∂_x` for a
/// character `λ` (vanishing on the derived algebra) and a random quadratic `f`.
pub fn random_lie_algebroid(rng: &mut Rng, rank: usize, base_dim: usize) -> Result<Algebroid> {
    if base_dim > 1 {
        return Err(Error::UnsupportedMode("random algebroids over bases of dimension ≤ 1 only".into()));
    }
    let space = PhaseSpace::new(base_dim, rank)?;
    let basis = closed_subset(rng, rank);
    let pos = |e: &(usize, usize)| basis.iter().position(|b| b == e).expect("closed");
    let mut c = vec![vec![vec![Rational::zero(); rank]; rank]; rank];
    for (a, &ea) in basis.iter().enumerate() {
        for (b, &eb) in basis.iter().enumerate() {
            for (e, v) in elementary_bracket(ea, eb) {
                c[pos(&e)][a][b] += q(v);
            }
        }
    }
    let (p, pinv) = unimodular(rng, rank);
    // f_a = Σ_k P_ka e_k;  [f_a, f_b] = Σ P_ka P_lb c^m_kl (P⁻¹)_cm f_c
    let mut c2 = vec![vec![vec![Rational::zero(); rank]; rank]; rank];
    for (cc, plane) in c2.iter_mut().enumerate() {
        for (a, row) in plane.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                let mut acc = Rational::zero();
                for k in 0..rank {
                    for l in 0..rank {
                        if p[k][a] == 0 || p[l][b] == 0 {
                            continue;
                        }
                        for (m, pm) in pinv[cc].iter().enumerate() {
                            acc += q(p[k][a] * p[l][b]) * &c[m][k][l] * pm;
                        }
                    }
                }
                *entry = acc;
            }
        }
    }
    let structure = c2
        .into_iter()
        .map(|m| m.into_iter().map(|r| r.into_iter().map(|v| Element::constant(space, v)).collect()).collect())
        .collect();
    let anchor = if base_dim == 0 {
        vec![Vec::new(); rank]
    } else {
        let weights: Vec<i64> = (0..5).map(|_| rng.int(-1, 1)).collect();
        let lambda: Vec<i64> = (0..rank)
            .map(|a| (0..rank).filter(|&k| basis[k].0 == basis[k].1).map(|k| p[k][a] * weights[basis[k].0]).sum())
            .collect();
        let x: Element = space.x(0);
        let f = &(&Element::integer(space, rng.int(-1, 1)) + &x.scale_int(rng.int(-1, 1)))
            + &(&x * &x).scale_int(rng.int(-1, 1));
        lambda.iter().map(|&l| vec![f.scale_int(l)]).collect()
    };
    AlgebroidSpec::new(space, anchor, structure)
}

/// Random antisymmetric structure constants in `{−1, 0, 1}` over a point;
/// Jacobi generally fails.
pub fn random_bracket_constants(rng: &mut Rng, rank: usize) -> Result<Algebroid> {
    let mut brackets = Vec::new();
    for a in 0..rank {
        for b in (a + 1)..rank {
            for c in 0..rank {
                if rng.chance(0.35) {
                    brackets.push((a, b, c, rng.nonzero(-1, 1)));
                }
            }
        }
    }
    AlgebroidSpec::from_brackets(rank, &brackets)
}

/// Random antisymmetric constants that violate Jacobi.
pub fn random_jacobi_violator(rng: &mut Rng, rank: usize) -> Result<Algebroid> {
    if rank < 3 {
        return Err(Error::Precondition("Jacobi holds automatically below rank 3".into()));
    }
    for _ in 0..10_000 {
        let spec = random_bracket_constants(rng, rank)?;
        let mu = mu_from_spec(spec.space(), &spec)?;
        if !br(&mu, &mu).is_zero() {
            return Ok(spec);
        }
    }
    Err(Error::SearchExhausted("no Jacobi violator found".into()))
}

// ---------------------------------------------------------------------------
// tensors and elements

/// Small polynomial coefficient: an integer over a point, `a + b·x` over the line.
pub fn random_coefficient(rng: &mut Rng, space: PhaseSpace, lo: i64, hi: i64) -> Element {
    let mut f = Element::integer(space, rng.int(lo, hi));
    for i in 0..space.base_dim() {
        if rng.chance(0.3) {
            f += &space.x::<Rational>(i).scale_int(rng.int(lo, hi));
        }
    }
    f
}

/// `rows × cols` matrix, entries in `[lo, hi]`, each nonzero with probability `density`.
pub fn random_matrix(rng: &mut Rng, space: PhaseSpace, size: usize, density: f64, polynomial: bool) -> RMatrix {
    Matrix::from_fn(space, size, size, |_, _| {
        if !rng.chance(density) {
            Element::zero(space)
        } else if polynomial {
            random_coefficient(rng, space, -2, 2)
        } else {
            Element::integer(space, rng.int(-2, 2))
        }
    })
}

fn random_skew(rng: &mut Rng, space: PhaseSpace, density: f64) -> RMatrix {
    let d = space.rank();
    let mut m = Matrix::zero(space, d, d);
    for a in 0..d {
        for b in (a + 1)..d {
            if rng.chance(density) {
                let v = Element::integer(space, rng.nonzero(-2, 2));
                m.set(b, a, -&v);
                m.set(a, b, v);
            }
        }
    }
    m
}

pub fn random_bivector(rng: &mut Rng, space: PhaseSpace, density: f64) -> Element {
    bivector(&random_skew(rng, space, density)).expect("skew")
}

pub fn random_form2(rng: &mut Rng, space: PhaseSpace, density: f64) -> Element {
    form2(&random_skew(rng, space, density)).expect("skew")
}

pub fn random_form(rng: &mut Rng, space: PhaseSpace, k: usize, density: f64) -> Element {
    let mut cache = BTreeMap::new();
    form_from_components(space, k, |idx: &[usize]| {
        cache
            .entry(idx.to_vec())
            .or_insert_with(|| {
                let v = if rng.chance(density) { rng.nonzero(-2, 2) } else { 0 };
                Element::integer(space, v)
            })
            .clone()
    })
}

/// Random homogeneous element of total degree `degree` with up to `terms` terms.
pub fn random_element(rng: &mut Rng, space: PhaseSpace, degree: u32, terms: usize) -> Element {
    let n = space.base_dim();
    let d = space.rank();
    let mut out = Element::zero(space);
    for _ in 0..terms {
        let max_p = if n == 0 { 0 } else { degree / 2 };
        let np = rng.int(0, max_p as i64) as u32;
        let nodd = (degree - 2 * np) as usize;
        if nodd > 2 * d {
            continue;
        }
        let mut odd: Vec<usize> = (0..2 * d).collect();
        let mut chosen = Vec::new();
        for _ in 0..nodd {
            chosen.push(odd.swap_remove(rng.index(odd.len())));
        }
        let mut p = vec![0u32; n];
        for _ in 0..np {
            p[rng.index(n)] += 1;
        }
        let x: Vec<u32> = (0..n).map(|_| rng.int(0, 2) as u32).collect();
        let xi: Vec<usize> = chosen.iter().copied().filter(|&g| g < d).collect();
        let theta: Vec<usize> = chosen.iter().filter(|&&g| g >= d).map(|g| g - d).collect();
        out += &Element::from_factors(space, q(rng.nonzero(-3, 3)), &x, &p, &xi, &theta).expect("in range");
    }
    out
}

/// A random odd monomial `θ_{a_1}…θ_{a_k} ξ^{b_1}…ξ^{b_l}`.
pub fn random_odd_monomial(rng: &mut Rng, space: PhaseSpace, k: usize, l: usize) -> Option<Element> {
    let d = space.rank();
    if k > d || l > d {
        return None;
    }
    let mut mask = 0u32;
    let mut thetas: Vec<usize> = (0..d).collect();
    let mut xis: Vec<usize> = (0..d).collect();
    for _ in 0..l {
        mask |= 1 << xis.swap_remove(rng.index(xis.len()));
    }
    for _ in 0..k {
        mask |= 1 << (d + thetas.swap_remove(rng.index(thetas.len())));
    }
    Some(Element::odd_monomial(space, mask))
}

/// A matrix with `N² = λ·id`: `P·D·P⁻¹` with `D = diag(±a)`, or a conjugated
/// nilpotent square-zero block (`λ = 0`), or a scalar.
pub fn random_square_root(rng: &mut Rng, space: PhaseSpace) -> RMatrix {
    let d = space.rank();
    let (p, pinv) = unimodular(rng, d);
    let a = rng.nonzero(-2, 2);
    let mut core = vec![vec![0i64; d]; d];
    match rng.index(3) {
        0 => (0..d).for_each(|i| core[i][i] = a),
        1 => (0..d).for_each(|i| core[i][i] = if rng.chance(0.5) { a } else { -a }),
        _ => {
            let mut i = 0;
            while i + 1 < d {
                if rng.chance(0.7) {
                    core[i][i + 1] = a;
                }
                i += 2;
            }
        }
    }
    Matrix::from_fn(space, d, d, |i, j| {
        let mut acc = Rational::zero();
        for k in 0..d {
            for l in 0..d {
                if p[i][k] != 0 && core[k][l] != 0 {
                    acc += q(p[i][k] * core[k][l]) * &pinv[l][j];
                }
            }
        }
        Element::constant(space, acc)
    })
}

/// Propose a `(1,1)`-tensor: dense random, sparse random, diagonal, scalar
/// plus a nilpotent part, or a square root of a multiple of the identity.
pub fn random_endomorphism(rng: &mut Rng, space: PhaseSpace) -> RMatrix {
    let d = space.rank();
    match rng.index(5) {
        0 => random_matrix(rng, space, d, 0.6, false),
        1 => random_matrix(rng, space, d, 0.25, space.base_dim() > 0),
        2 => {
            let diag: Vec<i64> = (0..d).map(|_| rng.int(-2, 2)).collect();
            Matrix::diagonal(space, &diag)
        }
        3 => {
            let mut m = Matrix::scalar(space, d, q(rng.int(-2, 2)));
            let (i, j) = (rng.index(d), rng.index(d));
            if i < j {
                m.set(i, j, Element::integer(space, rng.nonzero(-2, 2)));
            }
            m
        }
        _ => random_square_root(rng, space),
    }
}

/// Apply `exp(ad_b)` to `theta`: a canonical transformation, so it
/// preserves `{Θ, Θ} = 0`. `b` must be a 2-form or a bivector (the series
/// then terminates); twist by each part in turn for a sum of both.
pub fn twist(theta: &Element, b: &Element) -> Element {
    assert!(
        b.is_zero() || b.has_bidegree(0, 2) || b.has_bidegree(2, 0),
        "twist needs a 2-form or a bivector, got {b}"
    );
    let mut out = theta.clone();
    let mut term = theta.clone();
    let mut k = 1i64;
    loop {
        term = br(b, &term).scale(&(Rational::one() / q(k)));
        if term.is_zero() {
            return out;
        }
        out += &term;
        k += 1;
    }
}

// ---------------------------------------------------------------------------
// instances and searches

/// A Lie algebroid with named tensors: `(1,1)`-tensors as matrices, and
/// multivectors, forms and raw functions as elements.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub spec: Algebroid,
    pub matrices: BTreeMap<String, RMatrix>,
    pub elements: BTreeMap<String, Element>,
    pub seed: Option<u64>,
    pub profile: Option<String>,
}

impl Instance {
    pub fn new(spec: Algebroid) -> Self {
        Instance { spec, matrices: BTreeMap::new(), elements: BTreeMap::new(), seed: None, profile: None }
    }

    pub fn space(&self) -> PhaseSpace {
        self.spec.space()
    }

    pub fn mu(&self) -> Element {
        mu_from_spec(self.space(), &self.spec).expect("spec matches its space")
    }

    pub fn with_matrix(mut self, name: &str, m: RMatrix) -> Self {
        self.matrices.insert(name.into(), m);
        self
    }

    pub fn with_element(mut self, name: &str, e: Element) -> Self {
        self.elements.insert(name.into(), e);
        self
    }

    pub fn matrix(&self, name: &str) -> Result<&RMatrix> {
        self.matrices.get(name).ok_or_else(|| Error::parse("instance", format!("missing tensor {name:?}")))
    }

    pub fn element(&self, name: &str) -> Result<&Element> {
        self.elements.get(name).ok_or_else(|| Error::parse("instance", format!("missing tensor {name:?}")))
    }

    /// The named element, or zero when absent.
    pub fn element_or_zero(&self, name: &str) -> Element {
        self.elements.get(name).cloned().unwrap_or_else(|| Element::zero(self.space()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    LieAlgebraSolvable,
    TensorsOnFixedMu,
    PomegaSearch,
    OmeganSearch,
    PqnSearch,
}

impl Profile {
    pub const ALL: [Profile; 5] = [
        Profile::LieAlgebraSolvable,
        Profile::TensorsOnFixedMu,
        Profile::PomegaSearch,
        Profile::OmeganSearch,
        Profile::PqnSearch,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Profile::LieAlgebraSolvable => "lie-algebra-solvable",
            Profile::TensorsOnFixedMu => "tensors-on-fixed-mu",
            Profile::PomegaSearch => "pomega-search",
            Profile::OmeganSearch => "omegan-search",
            Profile::PqnSearch => "pqn-search",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.tag() == tag)
    }
}

/// Attempt cap for the rejection-sampled profiles.
pub const SEARCH_CAP: usize = 20_000;

/// Deterministic instance for `(seed, profile)`.
pub fn random_instance(seed: u64, profile: Profile, rank: usize, base_dim: usize) -> Result<Instance> {
    let mut rng = Rng::new(seed);
    let mut inst = match profile {
        Profile::LieAlgebraSolvable => Instance::new(random_lie_algebroid(&mut rng, rank, base_dim)?),
        Profile::TensorsOnFixedMu => {
            let spec = random_lie_algebroid(&mut rng, rank, base_dim)?;
            let space = spec.space();
            Instance::new(spec)
                .with_matrix("N", random_endomorphism(&mut rng, space))
                .with_element("pi", random_bivector(&mut rng, space, 0.5))
                .with_element("omega", random_form2(&mut rng, space, 0.5))
                .with_element("H", random_form(&mut rng, space, 3, 0.5))
        }
        Profile::PomegaSearch => search_pomega(&mut rng, rank, base_dim, SEARCH_CAP)?,
        Profile::OmeganSearch => search_omega_n(&mut rng, rank, base_dim, SEARCH_CAP)?,
        Profile::PqnSearch => search_pqn(&mut rng, rank, SEARCH_CAP)?,
    };
    inst.seed = Some(seed);
    inst.profile = Some(profile.tag().into());
    Ok(inst)
}

/// A PΩ structure with `π ≠ 0`, `ω ≠ 0` (and, from rank 3 on, `N = π^#ω^♭`
/// not a multiple of the identity).
pub fn search_pomega(rng: &mut Rng, rank: usize, base_dim: usize, cap: usize) -> Result<Instance> {
    let mut spec = random_lie_algebroid(rng, rank, base_dim)?;
    for attempt in 0..cap {
        if attempt % 50 == 49 {
            spec = random_lie_algebroid(rng, rank, base_dim)?;
        }
        let space = spec.space();
        let mu = mu_from_spec(space, &spec)?;
        let pi = random_bivector(rng, space, 0.5);
        let omega = random_form2(rng, space, 0.5);
        if pi.is_zero() || omega.is_zero() || !br(&pi, &br(&pi, &mu)).is_zero() || !br(&mu, &omega).is_zero() {
            continue;
        }
        let n = structures::pomega_tensor(&pi, &omega)?;
        if n.is_zero() || (rank >= 3 && n.proportional_to_identity().is_some()) {
            continue;
        }
        if structures::is_pomega(&mu, &pi, &omega)?.verdict {
            return Ok(Instance::new(spec).with_element("pi", pi).with_element("omega", omega));
        }
    }
    Err(Error::SearchExhausted(format!("no PΩ structure of rank {rank} within {cap} attempts")))
}

/// An ΩN structure with `ω ≠ 0` and `N` not a multiple of the identity.
pub fn search_omega_n(rng: &mut Rng, rank: usize, base_dim: usize, cap: usize) -> Result<Instance> {
    let mut spec = random_lie_algebroid(rng, rank, base_dim)?;
    for attempt in 0..cap {
        if attempt % 50 == 49 {
            spec = random_lie_algebroid(rng, rank, base_dim)?;
        }
        let space = spec.space();
        let mu = mu_from_spec(space, &spec)?;
        let omega = random_form2(rng, space, 0.6);
        if omega.is_zero() || !br(&mu, &omega).is_zero() {
            continue;
        }
        let n = random_endomorphism(rng, space);
        if n.proportional_to_identity().is_some() || !n.is_constant() && space.base_dim() == 0 {
            continue;
        }
        if !crate::tensor_calculus::form_commutes(&crate::tensor_calculus::form2_components(&omega)?, &n) {
            continue;
        }
        if structures::is_omega_n(&mu, &omega, &n)?.verdict {
            return Ok(Instance::new(spec).with_element("omega", omega).with_matrix("N", n));
        }
    }
    Err(Error::SearchExhausted(format!("no ΩN structure of rank {rank} within {cap} attempts")))
}

/// A PN structure with `π ≠ 0` and `N` not a multiple of the identity.
pub fn search_pn(rng: &mut Rng, rank: usize, base_dim: usize, cap: usize) -> Result<Instance> {
    let mut spec = random_lie_algebroid(rng, rank, base_dim)?;
    for attempt in 0..cap {
        if attempt % 50 == 49 {
            spec = random_lie_algebroid(rng, rank, base_dim)?;
        }
        let space = spec.space();
        let mu = mu_from_spec(space, &spec)?;
        let pi = random_bivector(rng, space, 0.5);
        if pi.is_zero() || !br(&pi, &br(&pi, &mu)).is_zero() {
            continue;
        }
        let n = random_endomorphism(rng, space);
        if n.proportional_to_identity().is_some() {
            continue;
        }
        if !crate::tensor_calculus::bivector_commutes(&crate::tensor_calculus::bivector_components(&pi)?, &n) {
            continue;
        }
        if structures::is_pn(&mu, &pi, &n)?.verdict {
            return Ok(Instance::new(spec).with_element("pi", pi).with_matrix("N", n));
        }
    }
    Err(Error::SearchExhausted(format!("no PN structure of rank {rank} within {cap} attempts")))
}

/// Data `(π, N, ω, H)` with `N ≠ 0`, `(π, ω) ≠ 0`, `H ≠ 0` closed, both commutation conditions,
/// `N² + π^#ω^♭ = λ·id`, and the exact background conditions holding: the
/// setting in which the Courant-level characterization applies non-trivially.
pub fn search_pqn(rng: &mut Rng, rank: usize, cap: usize) -> Result<Instance> {
    let mut spec = random_lie_algebroid(rng, rank, 0)?;
    for attempt in 0..cap {
        if attempt % 50 == 49 {
            spec = random_lie_algebroid(rng, rank, 0)?;
        }
        let space = spec.space();
        let mu = mu_from_spec(space, &spec)?;
        let pi = if rng.chance(0.5) { Element::zero(space) } else { random_bivector(rng, space, 0.4) };
        let omega = if rng.chance(0.3) { Element::zero(space) } else { random_form2(rng, space, 0.5) };
        let h = random_form(rng, space, 3, 0.5);
        if h.is_zero() || !br(&mu, &h).is_zero() {
            continue;
        }
        let n = random_endomorphism(rng, space);
        if n.is_zero() || (pi.is_zero() && omega.is_zero()) {
            continue;
        }
        let (pm, wm) =
            (crate::tensor_calculus::bivector_components(&pi)?, crate::tensor_calculus::form2_components(&omega)?);
        if !crate::tensor_calculus::bivector_commutes(&pm, &n) || !crate::tensor_calculus::form_commutes(&wm, &n) {
            continue;
        }
        if structures::pqn_square(&pi, &n, &omega)?.proportional_to_identity().is_none() {
            continue;
        }
        let r = structures::is_exact_pqn_background(&mu, &pi, &n, &omega, &h, &LambdaMode::Computed)?;
        if r.verdict {
            return Ok(Instance::new(spec)
                .with_element("pi", pi)
                .with_matrix("N", n)
                .with_element("omega", omega)
                .with_element("H", h));
        }
    }
    Err(Error::SearchExhausted(format!("no exact PqN structure with background of rank {rank} within {cap} attempts")))
}

/// Is `mu` a Lie algebroid? Convenience for generators' self-checks.
pub fn is_valid_algebroid(spec: &Algebroid) -> bool {
    mu_from_spec(spec.space(), spec).map(|mu| is_lie_algebroid(&mu).verdict).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_algebras_satisfy_jacobi() {
        let mut rng = Rng::new(7);
        for rank in 1..=4 {
            for n in 0..=1 {
                for _ in 0..10 {
                    let spec = random_lie_algebroid(&mut rng, rank, n).unwrap();
                    assert!(is_valid_algebroid(&spec), "{spec:?}");
                }
            }
        }
    }

    #[test]
    fn square_roots_square_to_scalars() {
        let mut rng = Rng::new(3);
        let space = PhaseSpace::new(0, 4).unwrap();
        for _ in 0..30 {
            let n = random_square_root(&mut rng, space);
            assert!(n.pow(2).proportional_to_identity().is_some(), "{n}");
        }
    }

    #[test]
    fn twists_preserve_courant() {
        let mut rng = Rng::new(11);
        let spec = random_lie_algebroid(&mut rng, 3, 0).unwrap();
        let mu = mu_from_spec(spec.space(), &spec).unwrap();
        let b = random_form2(&mut rng, spec.space(), 0.7);
        let t = twist(&mu, &b);
        assert!(br(&t, &t).is_zero());
    }

    #[test]
    fn determinism() {
        let a = random_instance(1, Profile::TensorsOnFixedMu, 3, 0).unwrap();
        let b = random_instance(1, Profile::TensorsOnFixedMu, 3, 0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn jacobi_violators_violate() {
        let mut rng = Rng::new(5);
        let spec = random_jacobi_violator(&mut rng, 3).unwrap();
        assert!(!is_valid_algebroid(&spec));
    }
}
