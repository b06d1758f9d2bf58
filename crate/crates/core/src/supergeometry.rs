//! The phase space `T*[2]A[1]`, Lie algebroid data as `μ ∈ F^{1,2}`, the
//! identity element, the canonical pairing and the `ξ ↔ θ` dualization.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded_algebra::{br, Generator, GradedElement};
use crate::scalar::Scalar;

/// Largest supported rank; odd generators are tracked in a 32-bit mask.
pub const MAX_RANK: usize = 16;

/// Generator table of `T*[2]A[1]` for base dimension `n` and rank `d`.
///
/// The `dual` flag marks the phase space `T*[2]A*[1]` produced by
/// [`dualize_space`]; it has the same generator layout with the roles of
/// `ξ` and `θ` exchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhaseSpace {
    base_dim: usize,
    rank: usize,
    dual: bool,
}

impl PhaseSpace {
    pub fn new(base_dim: usize, rank: usize) -> Result<Self> {
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::DimensionMismatch(format!("rank must be in 1..={MAX_RANK}, got {rank}")));
        }
        Ok(PhaseSpace { base_dim, rank, dual: false })
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_dual(&self) -> bool {
        self.dual
    }

    pub fn x<S: Scalar>(&self, i: usize) -> GradedElement<S> {
        GradedElement::generator(*self, Generator::X(i))
    }

    pub fn p<S: Scalar>(&self, i: usize) -> GradedElement<S> {
        GradedElement::generator(*self, Generator::P(i))
    }

    pub fn xi<S: Scalar>(&self, a: usize) -> GradedElement<S> {
        GradedElement::generator(*self, Generator::Xi(a))
    }

    pub fn theta<S: Scalar>(&self, a: usize) -> GradedElement<S> {
        GradedElement::generator(*self, Generator::Theta(a))
    }

    pub fn generators(&self) -> Vec<Generator> {
        let mut g = Vec::with_capacity(2 * (self.base_dim + self.rank));
        g.extend((0..self.base_dim).map(Generator::X));
        g.extend((0..self.base_dim).map(Generator::P));
        g.extend((0..self.rank).map(Generator::Xi));
        g.extend((0..self.rank).map(Generator::Theta));
        g
    }

    /// Basis of `Γ(A ⊕ A*)`: `θ_1, …, θ_d` followed by `ξ^1, …, ξ^d`.
    pub fn section_basis<S: Scalar>(&self) -> Vec<GradedElement<S>> {
        let mut b: Vec<_> = (0..self.rank).map(|a| self.theta(a)).collect();
        b.extend((0..self.rank).map(|a| self.xi(a)));
        b
    }

    /// Basis `θ_1, …, θ_d` of `Γ(A)`.
    pub fn a_basis<S: Scalar>(&self) -> Vec<GradedElement<S>> {
        (0..self.rank).map(|a| self.theta(a)).collect()
    }

    /// Basis `ξ^1, …, ξ^d` of `Γ(A*)`.
    pub fn dual_basis<S: Scalar>(&self) -> Vec<GradedElement<S>> {
        (0..self.rank).map(|a| self.xi(a)).collect()
    }
}

impl fmt::Display for PhaseSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bundle = if self.dual { "A*" } else { "A" };
        write!(f, "T*[2]{bundle}[1](n={}, d={})", self.base_dim, self.rank)
    }
}

/// Anchor and structure functions of a Lie algebroid (or pre-Lie algebroid)
/// in a local frame `e_1, …, e_d`.
///
/// `anchor[a][i] = ρ^i_a` and `structure[c][a][b] = c^c_{ab}`, all entries
/// polynomials in the base coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebroidSpec<S: Scalar> {
    space: PhaseSpace,
    anchor: Vec<Vec<GradedElement<S>>>,
    structure: Vec<Vec<Vec<GradedElement<S>>>>,
}

impl<S: Scalar> AlgebroidSpec<S> {
    pub fn new(
        space: PhaseSpace,
        anchor: Vec<Vec<GradedElement<S>>>,
        structure: Vec<Vec<Vec<GradedElement<S>>>>,
    ) -> Result<Self> {
        let n = space.base_dim();
        let d = space.rank();
        if anchor.len() != d || anchor.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(format!("anchor must be {d}x{n}")));
        }
        if structure.len() != d || structure.iter().any(|m| m.len() != d || m.iter().any(|r| r.len() != d)) {
            return Err(Error::DimensionMismatch(format!("structure constants must be {d}x{d}x{d}")));
        }
        let entries = anchor.iter().flatten().chain(structure.iter().flatten().flatten());
        for e in entries {
            if e.space() != space || !e.is_base_function() {
                return Err(Error::Precondition(format!(
                    "algebroid data must be polynomials in the base coordinates, got {e}"
                )));
            }
        }
        for c in 0..d {
            for a in 0..d {
                for b in 0..d {
                    if structure[c][a][b] != -&structure[c][b][a] {
                        return Err(Error::NotSkew(format!(
                            "c^{}_{{{}{}}} = {} but c^{}_{{{}{}}} = {}",
                            c + 1,
                            a + 1,
                            b + 1,
                            structure[c][a][b],
                            c + 1,
                            b + 1,
                            a + 1,
                            structure[c][b][a]
                        )));
                    }
                }
            }
        }
        Ok(AlgebroidSpec { space, anchor, structure })
    }

    /// Lie algebra over a point from integer structure constants
    /// `constants[c][a][b] = c^c_{ab}`.
    pub fn from_constants(rank: usize, constants: &[Vec<Vec<i64>>]) -> Result<Self> {
        let space = PhaseSpace::new(0, rank)?;
        let structure = constants
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(|&v| GradedElement::integer(space, v)).collect()).collect())
            .collect();
        Self::new(space, vec![Vec::new(); rank], structure)
    }

    /// Lie algebra over a point with the listed nonzero brackets
    /// `[e_a, e_b] = Σ coeff·e_c`, given as `(a, b, c, coeff)` with zero-based indices.
    pub fn from_brackets(rank: usize, brackets: &[(usize, usize, usize, i64)]) -> Result<Self> {
        let mut c = vec![vec![vec![0i64; rank]; rank]; rank];
        for &(a, b, k, v) in brackets {
            c[k][a][b] += v;
            c[k][b][a] -= v;
        }
        Self::from_constants(rank, &c)
    }

    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    pub fn anchor(&self) -> &[Vec<GradedElement<S>>] {
        &self.anchor
    }

    pub fn structure(&self) -> &[Vec<Vec<GradedElement<S>>>] {
        &self.structure
    }

    /// Abelian Lie algebra of rank `d` over a point.
    pub fn abelian(rank: usize) -> Result<Self> {
        Self::from_brackets(rank, &[])
    }

    /// `aff(1)`: `[e_1, e_2] = e_2`.
    pub fn aff1() -> Self {
        Self::from_brackets(2, &[(0, 1, 1, 1)]).expect("rank 2")
    }

    /// Heisenberg algebra: `[e_1, e_2] = e_3`.
    pub fn heisenberg() -> Self {
        Self::from_brackets(3, &[(0, 1, 2, 1)]).expect("rank 3")
    }

    /// Tangent algebroid of the line: rank 1, `ρ(e_1) = ∂/∂x^1`.
    pub fn tangent_line() -> Self {
        let space = PhaseSpace::new(1, 1).expect("valid");
        Self::new(space, vec![vec![GradedElement::one(space)]], vec![vec![vec![GradedElement::zero(space)]]])
            .expect("valid")
    }

    /// Action algebroid of `sl(2)` acting on the line by `∂, x∂, x²∂`:
    /// `[e_1,e_2] = e_1`, `[e_1,e_3] = 2e_2`, `[e_2,e_3] = e_3`.
    pub fn sl2_on_line() -> Self {
        let space = PhaseSpace::new(1, 3).expect("valid");
        let x: GradedElement<S> = space.x(0);
        let anchor = vec![vec![GradedElement::one(space)], vec![x.clone()], vec![&x * &x]];
        let z = || GradedElement::zero(space);
        let mut structure = vec![vec![vec![z(); 3]; 3]; 3];
        let mut set = |a: usize, b: usize, c: usize, v: i64| {
            structure[c][a][b] = GradedElement::integer(space, v);
            structure[c][b][a] = GradedElement::integer(space, -v);
        };
        set(0, 1, 0, 1);
        set(0, 2, 1, 2);
        set(1, 2, 2, 1);
        Self::new(space, anchor, structure).expect("valid")
    }
}

/// The element `μ ∈ F^{1,2}` encoding an algebroid:
/// `μ = Σ ρ^i_a p_i ξ^a − ½ Σ c^c_{ab} ξ^a ξ^b θ_c`,
/// which makes `{{θ_a, μ}, θ_b} = Σ_c c^c_{ab} θ_c` and
/// `{{θ_a, μ}, f} = Σ_i ρ^i_a ∂f/∂x^i`.
pub fn mu_from_spec<S: Scalar>(space: PhaseSpace, spec: &AlgebroidSpec<S>) -> Result<GradedElement<S>> {
    if spec.space != space {
        return Err(Error::DimensionMismatch(format!("algebroid data lives on {}, not {space}", spec.space)));
    }
    let n = space.base_dim();
    let d = space.rank();
    let mut mu = GradedElement::zero(space);
    for a in 0..d {
        for i in 0..n {
            let rho = &spec.anchor[a][i];
            if !rho.is_zero() {
                mu += &(&(rho * &space.p(i)) * &space.xi(a));
            }
        }
    }
    for c in 0..d {
        for a in 0..d {
            for b in (a + 1)..d {
                let coef = &spec.structure[c][a][b];
                if !coef.is_zero() {
                    mu -= &(&(&(coef * &space.xi(a)) * &space.xi(b)) * &space.theta(c));
                }
            }
        }
    }
    Ok(mu)
}

/// `id = Σ_a ξ^a θ_a ∈ F^{1,1}`, the function of `J_id = diag(id, −id*)`;
/// `{id, u} = (q − p) u` for `u ∈ F^{p,q}`.
pub fn identity_element<S: Scalar>(space: PhaseSpace) -> GradedElement<S> {
    let mut id = GradedElement::zero(space);
    for a in 0..space.rank() {
        id += &(&space.xi(a) * &space.theta(a));
    }
    id
}

/// Canonical symmetric pairing `⟨u, v⟩ = {u, v}` of two sections of `A ⊕ A*`.
pub fn pairing<S: Scalar>(u: &GradedElement<S>, v: &GradedElement<S>) -> Result<GradedElement<S>> {
    for w in [u, v] {
        if !w.has_degree(1) {
            return Err(Error::WrongDegree { expected: "F^1".into(), found: w.to_string() });
        }
    }
    u.bracket(v)
}

/// The phase space with the roles of `A` and `A*` exchanged.
pub fn dualize_space(space: PhaseSpace) -> PhaseSpace {
    PhaseSpace { dual: !space.dual, ..space }
}

/// Rewrite `f` in the dual phase space by exchanging `ξ^a ↔ θ_a`; bidegree
/// `(k, l)` becomes `(l, k)`. Only available over a point.
pub fn dualize<S: Scalar>(f: &GradedElement<S>) -> Result<GradedElement<S>> {
    let space = f.space();
    if space.base_dim() > 0 {
        return Err(Error::UnsupportedMode(format!(
            "dualization is only implemented over a point (base dimension {})",
            space.base_dim()
        )));
    }
    Ok(f.swap_odd_roles(dualize_space(space)))
}

/// Derived bracket `{{X, Θ}, Y}`; shared by the Courant and tensor modules.
pub(crate) fn derived<S: Scalar>(
    x: &GradedElement<S>,
    theta: &GradedElement<S>,
    y: &GradedElement<S>,
) -> GradedElement<S> {
    br(&br(x, theta), y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type E = GradedElement<Rational>;

    #[test]
    fn generator_table() {
        let s = PhaseSpace::new(2, 3).unwrap();
        let gens = s.generators();
        assert_eq!(gens.iter().filter(|g| !g.is_odd()).count(), 4);
        assert_eq!(gens.iter().filter(|g| g.is_odd()).count(), 6);
        assert_eq!(s.p::<Rational>(1).bidegree(), Some((1, 1)));
        assert_eq!(s.xi::<Rational>(2).bidegree(), Some((0, 1)));
        assert_eq!(s.theta::<Rational>(0).bidegree(), Some((1, 0)));
        assert_eq!(s.x::<Rational>(0).bidegree(), Some((0, 0)));
        assert_eq!(dualize_space(dualize_space(s)), s);
        assert!(PhaseSpace::new(0, 0).is_err());
    }

    #[test]
    fn abelian_mu_is_zero() {
        let spec = AlgebroidSpec::<Rational>::abelian(2).unwrap();
        assert!(mu_from_spec(spec.space(), &spec).unwrap().is_zero());
    }

    #[test]
    fn aff1_mu_reproduces_bracket() {
        let spec = AlgebroidSpec::<Rational>::aff1();
        let s = spec.space();
        let mu = mu_from_spec(s, &spec).unwrap();
        assert_eq!(mu.len(), 1);
        assert_eq!(mu, -(&(&s.xi::<Rational>(0) * &s.xi(1)) * &s.theta(1)));
        assert_eq!(derived(&s.theta(0), &mu, &s.theta(1)), s.theta(1));
        assert_eq!(derived(&s.theta(1), &mu, &s.theta(0)), -s.theta::<Rational>(1));
        assert!(derived(&s.theta(1), &mu, &s.theta(1)).is_zero());
    }

    #[test]
    fn tangent_mu_reproduces_anchor() {
        let spec = AlgebroidSpec::<Rational>::tangent_line();
        let s = spec.space();
        let mu = mu_from_spec(s, &spec).unwrap();
        assert_eq!(mu, &s.p::<Rational>(0) * &s.xi(0));
        let x: E = s.x(0);
        assert_eq!(derived(&s.theta(0), &mu, &x), E::one(s));
        assert_eq!(derived(&s.theta(0), &mu, &(&x * &x)), x.scale_int(2));
    }

    #[test]
    fn spec_rejects_non_skew_constants() {
        let mut c = vec![vec![vec![0i64; 2]; 2]; 2];
        c[0][0][0] = 1;
        assert!(matches!(AlgebroidSpec::<Rational>::from_constants(2, &c), Err(Error::NotSkew(_))));
    }

    #[test]
    fn identity_law_on_generators() {
        let s = PhaseSpace::new(1, 2).unwrap();
        let id = identity_element::<Rational>(s);
        assert_eq!(br(&id, &s.xi(0)), s.xi(0));
        assert_eq!(br(&id, &s.theta(0)), -s.theta::<Rational>(0));
        assert!(br(&id, &s.p::<Rational>(0)).is_zero());
        let x: E = s.x(0);
        let mu = &(&(&x * &s.p(0)) * &s.xi(1)) - &(&(&s.xi(0) * &s.xi(1)) * &s.theta(1));
        assert_eq!(mu.bidegree(), Some((1, 2)));
        assert_eq!(br(&id, &mu), mu);
    }

    #[test]
    fn pairing_examples() {
        let s = PhaseSpace::new(0, 2).unwrap();
        let t1: E = s.theta(0);
        let x1: E = s.xi(0);
        assert_eq!(pairing(&t1, &x1).unwrap(), E::one(s));
        assert!(pairing(&t1, &s.theta(1)).unwrap().is_zero());
        let u = &t1 + &x1;
        assert_eq!(pairing(&u, &u).unwrap(), E::integer(s, 2));
        assert!(pairing(&(&t1 * &x1), &x1).is_err());
    }

    #[test]
    fn dualize_relabels_and_is_involutive() {
        let s = PhaseSpace::new(0, 2).unwrap();
        let f = &(&s.xi::<Rational>(0) * &s.xi(1)) * &s.theta(1);
        let g = dualize(&f).unwrap();
        let ds = dualize_space(s);
        assert_eq!(g, &(&ds.theta::<Rational>(0) * &ds.theta(1)) * &ds.xi(1));
        assert_eq!(g.bidegree(), Some((2, 1)));
        assert_eq!(dualize(&g).unwrap(), f);
        assert_eq!(dualize(&identity_element::<Rational>(s)).unwrap(), -identity_element::<Rational>(ds));
        let t = PhaseSpace::new(1, 1).unwrap();
        assert!(matches!(dualize(&t.xi::<Rational>(0)), Err(Error::UnsupportedMode(_))));
    }
}

