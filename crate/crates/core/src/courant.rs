//! Courant structures on `A ⊕ A*` as degree-3 functions, their derived
//! anchors and brackets, and the Lie algebroid special case.

use crate::error::{Error, Result};
use crate::graded_algebra::{br, GradedElement};
use crate::report::{Condition, StructureKind, StructureReport, Witness};
use crate::scalar::Scalar;
use crate::supergeometry::{derived, PhaseSpace};
use crate::tensor_calculus::{deform, EndoTensor};

/// `Θ = μ + γ + φ + ψ ∈ F³` with its bidegree components cached.
#[derive(Clone, Debug, PartialEq)]
pub struct CourantStructure<S: Scalar> {
    theta: GradedElement<S>,
    mu: GradedElement<S>,
    gamma: GradedElement<S>,
    phi: GradedElement<S>,
    psi: GradedElement<S>,
    pre: bool,
}

impl<S: Scalar> CourantStructure<S> {
    pub fn new(theta: GradedElement<S>) -> Result<Self> {
        if !theta.has_degree(3) {
            return Err(Error::WrongDegree { expected: "total degree 3".into(), found: theta.to_string() });
        }
        Ok(CourantStructure {
            mu: theta.bidegree_component(1, 2),
            gamma: theta.bidegree_component(2, 1),
            phi: theta.bidegree_component(0, 3),
            psi: theta.bidegree_component(3, 0),
            theta,
            pre: false,
        })
    }

    /// Mark the structure as a pre-Courant one, so [`validated`](Self::validated)
    /// lets it through with `{Θ, Θ} ≠ 0`. Predicates never gate on
    /// `{Θ, Θ} = 0` themselves; they evaluate their conditions verbatim.
    pub fn pre(mut self) -> Self {
        self.pre = true;
        self
    }

    pub fn is_pre(&self) -> bool {
        self.pre
    }

    /// The structure itself if `{Θ, Θ} = 0` or it is marked pre-Courant.
    pub fn validated(self) -> Result<Self> {
        if self.pre {
            return Ok(self);
        }
        let sq = br(&self.theta, &self.theta);
        if sq.is_zero() {
            Ok(self)
        } else {
            Err(Error::Precondition(format!("{{Θ,Θ}} = {sq} ≠ 0; mark the structure pre-Courant to evaluate anyway")))
        }
    }

    pub fn theta(&self) -> &GradedElement<S> {
        &self.theta
    }

    pub fn mu(&self) -> &GradedElement<S> {
        &self.mu
    }

    pub fn gamma(&self) -> &GradedElement<S> {
        &self.gamma
    }

    pub fn phi(&self) -> &GradedElement<S> {
        &self.phi
    }

    pub fn psi(&self) -> &GradedElement<S> {
        &self.psi
    }

    pub fn space(&self) -> PhaseSpace {
        self.theta.space()
    }

    /// `Θ_I = {I, Θ}`, keeping the pre flag.
    pub fn deform(&self, i: &EndoTensor<S>) -> Self {
        let mut out = Self::new(deform(&self.theta, i)).unwrap_or_else(|_| Self::zero(self.space()));
        out.pre = self.pre;
        out
    }

    pub fn zero(space: PhaseSpace) -> Self {
        Self::new(GradedElement::zero(space)).expect("zero has every degree")
    }

    /// `Θ = μ + H` for `μ ∈ F^{1,2}` and a 3-form `H ∈ F^{0,3}`.
    pub fn with_background(mu: &GradedElement<S>, h: &GradedElement<S>) -> Result<Self> {
        if !mu.has_bidegree(1, 2) {
            return Err(Error::WrongDegree { expected: "μ in F^{1,2}".into(), found: mu.to_string() });
        }
        if !h.has_bidegree(0, 3) {
            return Err(Error::WrongDegree { expected: "H in F^{0,3}".into(), found: h.to_string() });
        }
        Self::new(mu + h)
    }
}

/// Validity of a background: `{μ, μ} = 0` and `d_μ H = 0`.
pub fn background_report<S: Scalar>(mu: &GradedElement<S>, h: &GradedElement<S>) -> StructureReport<S> {
    StructureReport::new(StructureKind::Courant)
        .with(Condition::vanishing("{μ,μ} = 0", br(mu, mu)))
        .with(Condition::vanishing("d_μ H = 0", br(mu, h)))
}

/// A section `X + α ∈ F¹ = Γ(A ⊕ A*)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Section<S: Scalar>(GradedElement<S>);

impl<S: Scalar> Section<S> {
    pub fn new(u: GradedElement<S>) -> Result<Self> {
        if !u.has_degree(1) {
            return Err(Error::WrongDegree { expected: "section in F^1".into(), found: u.to_string() });
        }
        Ok(Section(u))
    }

    pub fn element(&self) -> &GradedElement<S> {
        &self.0
    }

    pub fn into_element(self) -> GradedElement<S> {
        self.0
    }

    /// The `Γ(A)` and `Γ(A*)` parts.
    pub fn split(&self) -> (GradedElement<S>, GradedElement<S>) {
        (self.0.bidegree_component(1, 0), self.0.bidegree_component(0, 1))
    }
}

/// `[X, Y] = {{X, Θ}, Y}`.
pub fn dorfman<S: Scalar>(theta: &CourantStructure<S>, x: &GradedElement<S>, y: &GradedElement<S>) -> GradedElement<S> {
    derived(x, theta.theta(), y)
}

/// `ρ(X)·f = {{X, Θ}, f}`.
pub fn anchor_apply<S: Scalar>(theta: &CourantStructure<S>, x: &GradedElement<S>, f: &GradedElement<S>) -> GradedElement<S> {
    derived(x, theta.theta(), f)
}

/// `d_μ f = {μ, f}`.
pub fn differential<S: Scalar>(mu: &GradedElement<S>, f: &GradedElement<S>) -> GradedElement<S> {
    br(mu, f)
}

/// `{Θ, Θ} = 0`.
pub fn is_courant<S: Scalar>(theta: &CourantStructure<S>) -> StructureReport<S> {
    StructureReport::new(StructureKind::Courant).with(Condition::vanishing("{Θ,Θ} = 0", br(theta.theta(), theta.theta())))
}

/// `μ ∈ F^{1,2}` and `{μ, μ} = 0`.
pub fn is_lie_algebroid<S: Scalar>(mu: &GradedElement<S>) -> StructureReport<S> {
    let mut r = StructureReport::new(StructureKind::LieAlgebroid);
    r.push(Condition::boolean("bidegree (1,2)", mu.has_bidegree(1, 2), || {
        Witness::Message(format!("components {:?}", mu.components().keys().collect::<Vec<_>>()))
    }));
    r.push(Condition::vanishing("{μ,μ} = 0", br(mu, mu)));
    r
}

/// Test functions `{1, x^i, x^i x^j}` used to probe polynomial coefficients.
pub fn test_functions<S: Scalar>(space: PhaseSpace) -> Vec<GradedElement<S>> {
    let n = space.base_dim();
    let mut out = vec![GradedElement::one(space)];
    for i in 0..n {
        out.push(space.x(i));
    }
    for i in 0..n {
        for j in i..n {
            out.push(&space.x(i) * &space.x(j));
        }
    }
    out
}

fn times_tests<S: Scalar>(space: PhaseSpace, basis: Vec<GradedElement<S>>) -> Vec<GradedElement<S>> {
    let fs = test_functions::<S>(space);
    let mut out = Vec::with_capacity(basis.len() * fs.len());
    for f in &fs {
        for b in &basis {
            out.push(f * b);
        }
    }
    out
}

/// Basis sections `θ_a, ξ^a` times every test function.
pub fn sample_sections<S: Scalar>(space: PhaseSpace) -> Vec<GradedElement<S>> {
    times_tests(space, space.section_basis())
}

/// Basis sections of `A` times every test function.
pub fn sample_a_sections<S: Scalar>(space: PhaseSpace) -> Vec<GradedElement<S>> {
    times_tests(space, space.a_basis())
}

/// Basis sections of `A*` times every test function.
pub fn sample_dual_sections<S: Scalar>(space: PhaseSpace) -> Vec<GradedElement<S>> {
    times_tests(space, space.dual_basis())
}

/// First sample pair `(X, Y)` (in lexicographic order) where `f` is nonzero.
pub fn first_nonzero_pair<S: Scalar>(
    xs: &[GradedElement<S>],
    ys: &[GradedElement<S>],
    mut f: impl FnMut(&GradedElement<S>, &GradedElement<S>) -> GradedElement<S>,
) -> Option<Witness<S>> {
    for x in xs {
        for y in ys {
            let r = f(x, y);
            if !r.is_zero() {
                return Some(Witness::Sections { inputs: vec![x.clone(), y.clone()], residual: r });
            }
        }
    }
    None
}

/// Condition that `f(X, Y) = 0` on all sample pairs.
pub fn pairwise_condition<S: Scalar>(
    name: impl Into<String>,
    xs: &[GradedElement<S>],
    ys: &[GradedElement<S>],
    f: impl FnMut(&GradedElement<S>, &GradedElement<S>) -> GradedElement<S>,
) -> Condition<S> {
    match first_nonzero_pair(xs, ys, f) {
        None => Condition::pass(name),
        Some(w) => Condition::fail(name, w),
    }
}

pub const AXIOM_PAIRING: &str = "(1) ρ(X)⟨Y,Z⟩ = ⟨[X,Y],Z⟩ + ⟨Y,[X,Z]⟩";
pub const AXIOM_SYMMETRIC: &str = "(2) ρ(X)⟨Y,Z⟩ = ⟨X,[Y,Z]+[Z,Y]⟩";
pub const AXIOM_JACOBI: &str = "(3) [X,[Y,Z]] = [[X,Y],Z] + [Y,[X,Z]]";

/// Check the three Dorfman-bracket axioms directly on every triple of sample
/// sections; each failing axiom reports its lexicographically first triple.
pub fn axioms_oracle<S: Scalar>(theta: &CourantStructure<S>) -> StructureReport<S> {
    let samples = sample_sections::<S>(theta.space());
    let m = samples.len();
    let pairing = |u: &GradedElement<S>, v: &GradedElement<S>| br(u, v);
    let mut brackets = Vec::with_capacity(m * m);
    for x in &samples {
        for y in &samples {
            brackets.push(dorfman(theta, x, y));
        }
    }
    let b = |i: usize, j: usize| &brackets[i * m + j];
    let mut fails: [Option<Witness<S>>; 3] = [None, None, None];
    for i in 0..m {
        let xt = br(&samples[i], theta.theta());
        for j in 0..m {
            for k in 0..m {
                if fails.iter().all(|f| f.is_some()) {
                    break;
                }
                let (x, y, z) = (&samples[i], &samples[j], &samples[k]);
                let inputs = || vec![x.clone(), y.clone(), z.clone()];
                let rho = br(&xt, &pairing(y, z));
                if fails[0].is_none() {
                    let r = &(&rho - &pairing(b(i, j), z)) - &pairing(y, b(i, k));
                    if !r.is_zero() {
                        fails[0] = Some(Witness::Sections { inputs: inputs(), residual: r });
                    }
                }
                if fails[1].is_none() {
                    let r = &rho - &pairing(x, &(b(j, k) + b(k, j)));
                    if !r.is_zero() {
                        fails[1] = Some(Witness::Sections { inputs: inputs(), residual: r });
                    }
                }
                if fails[2].is_none() {
                    let lhs = dorfman(theta, x, b(j, k));
                    let r = &(&lhs - &dorfman(theta, b(i, j), z)) - &dorfman(theta, y, b(i, k));
                    if !r.is_zero() {
                        fails[2] = Some(Witness::Sections { inputs: inputs(), residual: r });
                    }
                }
            }
        }
    }
    let mut report = StructureReport::new(StructureKind::CourantAxioms);
    for (name, w) in [AXIOM_PAIRING, AXIOM_SYMMETRIC, AXIOM_JACOBI].into_iter().zip(fails) {
        report.push(match w {
            None => Condition::pass(name),
            Some(w) => Condition::fail(name, w),
        });
    }
    report
}
