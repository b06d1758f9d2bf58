//! Per-condition verdict reports shared by every predicate.

use std::fmt;

use crate::graded_algebra::GradedElement;
use crate::scalar::Scalar;
use crate::tensor_calculus::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureKind {
    LieAlgebroid,
    Courant,
    CourantAxioms,
    Poisson,
    Closed,
    NijenhuisLie,
    NijenhuisCourant,
    CompatiblePair,
    PN,
    OmegaN,
    Hitchin,
    POmega,
    PqNBackground,
    ExactPqNBackground,
    ExactPqN,
    Complementary,
    CompatibleStructures,
    Relations,
    Corollary,
    Hierarchy,
    HierarchyCompatibility,
    Selftest,
}

impl StructureKind {
    pub fn tag(self) -> &'static str {
        match self {
            StructureKind::LieAlgebroid => "lie-algebroid",
            StructureKind::Courant => "courant",
            StructureKind::CourantAxioms => "courant-axioms",
            StructureKind::Poisson => "poisson",
            StructureKind::Closed => "closed",
            StructureKind::NijenhuisLie => "nijenhuis-lie",
            StructureKind::NijenhuisCourant => "nijenhuis-courant",
            StructureKind::CompatiblePair => "compatible-pair",
            StructureKind::PN => "pn",
            StructureKind::OmegaN => "omegan",
            StructureKind::Hitchin => "hitchin",
            StructureKind::POmega => "pomega",
            StructureKind::PqNBackground => "pqn-bg",
            StructureKind::ExactPqNBackground => "exact-pqn-bg",
            StructureKind::ExactPqN => "exact-pqn",
            StructureKind::Complementary => "complementary",
            StructureKind::CompatibleStructures => "compatible-structures",
            StructureKind::Relations => "relations",
            StructureKind::Corollary => "corollary",
            StructureKind::Hierarchy => "hierarchy",
            StructureKind::HierarchyCompatibility => "hierarchy-compatibility",
            StructureKind::Selftest => "selftest",
        }
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Evidence attached to a condition; failing conditions always carry one
/// that is not [`Witness::None`].
#[derive(Clone, Debug, PartialEq)]
pub enum Witness<S: Scalar> {
    None,
    /// A nonzero element that should have vanished.
    Residual(GradedElement<S>),
    /// Inputs (sections) at which a pointwise identity fails, with the residual.
    Sections { inputs: Vec<GradedElement<S>>, residual: GradedElement<S> },
    /// A matrix that should have vanished (or the offending matrix).
    Matrix(Matrix<S>),
    /// A grid cell of a hierarchy check, with the failing sub-report summary.
    Grid { cell: Vec<usize>, detail: String },
    Message(String),
}

impl<S: Scalar> Witness<S> {
    pub fn is_none(&self) -> bool {
        matches!(self, Witness::None)
    }
}

impl<S: Scalar> fmt::Display for Witness<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::None => Ok(()),
            Witness::Residual(r) => write!(f, "residual {r}"),
            Witness::Sections { inputs, residual } => {
                write!(f, "at (")?;
                for (i, u) in inputs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{u}")?;
                }
                write!(f, ") residual {residual}")
            }
            Witness::Matrix(m) => write!(f, "matrix {m}"),
            Witness::Grid { cell, detail } => write!(f, "cell {cell:?}: {detail}"),
            Witness::Message(m) => f.write_str(m),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Condition<S: Scalar> {
    pub name: String,
    pub holds: bool,
    pub witness: Witness<S>,
}

impl<S: Scalar> Condition<S> {
    pub fn pass(name: impl Into<String>) -> Self {
        Condition { name: name.into(), holds: true, witness: Witness::None }
    }

    pub fn fail(name: impl Into<String>, witness: Witness<S>) -> Self {
        Condition { name: name.into(), holds: false, witness }
    }

    /// Holds iff `residual` is zero.
    pub fn vanishing(name: impl Into<String>, residual: GradedElement<S>) -> Self {
        if residual.is_zero() {
            Self::pass(name)
        } else {
            Self::fail(name, Witness::Residual(residual))
        }
    }

    /// Holds iff the matrix is zero.
    pub fn vanishing_matrix(name: impl Into<String>, m: Matrix<S>) -> Self {
        if m.is_zero() {
            Self::pass(name)
        } else {
            Self::fail(name, Witness::Matrix(m))
        }
    }

    pub fn boolean(name: impl Into<String>, holds: bool, otherwise: impl FnOnce() -> Witness<S>) -> Self {
        if holds {
            Self::pass(name)
        } else {
            Self::fail(name, otherwise())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The two routes gave the same verdict.
    Agree,
    /// The two routes disagree: a bug or a convention defect.
    Disagree,
    /// The hypotheses of the cross-check are not met.
    NotApplicable(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub name: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport<S: Scalar> {
    pub kind: StructureKind,
    pub verdict: bool,
    pub conditions: Vec<Condition<S>>,
    pub cross_checks: Vec<CrossCheck>,
}

impl<S: Scalar> StructureReport<S> {
    pub fn new(kind: StructureKind) -> Self {
        StructureReport { kind, verdict: true, conditions: Vec::new(), cross_checks: Vec::new() }
    }

    pub fn push(&mut self, c: Condition<S>) -> bool {
        let holds = c.holds;
        self.verdict &= holds;
        self.conditions.push(c);
        holds
    }

    pub fn with(mut self, c: Condition<S>) -> Self {
        self.push(c);
        self
    }

    /// Record whether an independent route reproduced `expected`.
    pub fn cross(&mut self, name: impl Into<String>, expected: bool, other: bool) {
        let outcome = if expected == other { Outcome::Agree } else { Outcome::Disagree };
        self.cross_checks.push(CrossCheck { name: name.into(), outcome });
    }

    /// Record that a claimed identity was (or was not) reproduced.
    pub fn identity(&mut self, name: impl Into<String>, holds: bool) {
        self.cross(name, true, holds);
    }

    pub fn not_applicable(&mut self, name: impl Into<String>, why: impl Into<String>) {
        self.cross_checks.push(CrossCheck { name: name.into(), outcome: Outcome::NotApplicable(why.into()) });
    }

    /// Absorb a sub-report's cross-checks under a prefix.
    pub fn absorb_checks(&mut self, prefix: &str, other: &StructureReport<S>) {
        for c in &other.cross_checks {
            self.cross_checks.push(CrossCheck { name: format!("{prefix}: {}", c.name), outcome: c.outcome.clone() });
        }
    }

    /// Add a sub-report as one condition named `name`.
    pub fn push_report(&mut self, name: impl Into<String>, other: &StructureReport<S>) -> bool {
        let name = name.into();
        self.absorb_checks(&name, other);
        let c = match other.first_failure() {
            None => Condition::pass(name),
            Some(f) => Condition::fail(name, Witness::Message(format!("{}: {}", f.name, f.witness))),
        };
        self.push(c)
    }

    /// True when no cross-check disagrees.
    pub fn consistent(&self) -> bool {
        self.cross_checks.iter().all(|c| c.outcome != Outcome::Disagree)
    }

    pub fn disagreements(&self) -> impl Iterator<Item = &CrossCheck> {
        self.cross_checks.iter().filter(|c| c.outcome == Outcome::Disagree)
    }

    pub fn condition(&self, name: &str) -> Option<&Condition<S>> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn holds(&self, name: &str) -> bool {
        self.condition(name).map(|c| c.holds).unwrap_or_else(|| panic!("no condition named {name:?}"))
    }

    pub fn first_failure(&self) -> Option<&Condition<S>> {
        self.conditions.iter().find(|c| !c.holds)
    }
}

impl<S: Scalar> fmt::Display for StructureReport<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.kind, if self.verdict { "true" } else { "false" })?;
        for c in &self.conditions {
            write!(f, "  [{}] {}", if c.holds { "ok" } else { "FAIL" }, c.name)?;
            if !c.witness.is_none() {
                write!(f, " -- {}", c.witness)?;
            }
            writeln!(f)?;
        }
        for c in &self.cross_checks {
            let o = match &c.outcome {
                Outcome::Agree => "agree".to_string(),
                Outcome::Disagree => "DISAGREE".to_string(),
                Outcome::NotApplicable(why) => format!("n/a ({why})"),
            };
            writeln!(f, "  cross-check {}: {o}", c.name)?;
        }
        Ok(())
    }
}
