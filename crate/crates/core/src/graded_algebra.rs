//! The free graded-commutative algebra on the generators of `T*[2]A[1]`
//! and its big bracket.
//!
//! Generators and their bidegrees:
//!
//! | generator | bidegree | total degree | parity |
//! |-----------|----------|--------------|--------|
//! | `x^i`     | (0,0)    | 0            | even   |
//! | `p_i`     | (1,1)    | 2            | even   |
//! | `ξ^a`     | (0,1)    | 1            | odd    |
//! | `θ_a`     | (1,0)    | 1            | odd    |
//!
//! Monomials keep their odd factors in the canonical order
//! `ξ^1 < … < ξ^d < θ_1 < … < θ_d`; every reordering during construction is
//! absorbed into the coefficient as a Koszul sign.
//!
//! The big bracket is the degree `-2` Poisson bracket determined by
//! `{p_i, x^i} = {θ_a, ξ^a} = 1`. Written with right derivatives on the left
//! argument and left derivatives on the right one,
//!
//! ```text
//! {f,g} = Σ_a (f ∂⃖θ_a)(∂⃗ξ^a g) + (f ∂⃖ξ^a)(∂⃗θ_a g)
//!       + Σ_i (∂f/∂p_i)(∂g/∂x^i) − (∂f/∂x^i)(∂g/∂p_i)
//! ```
//!
//! which satisfies `{f,g} = −(−1)^{(|f|−2)(|g|−2)} {g,f}`, the Leibniz rule
//! `{f,gh} = {f,g}h + (−1)^{|f||g|} g{f,h}` and the graded Jacobi identity.
//! With this choice `Σ_a ξ^a θ_a` acts on `F^{p,q}` as multiplication by `q − p`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::supergeometry::PhaseSpace;

/// One generator of the function algebra; indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X(usize),
    P(usize),
    Xi(usize),
    Theta(usize),
}

impl Generator {
    pub fn bidegree(self) -> (u32, u32) {
        match self {
            Generator::X(_) => (0, 0),
            Generator::P(_) => (1, 1),
            Generator::Xi(_) => (0, 1),
            Generator::Theta(_) => (1, 0),
        }
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Generator::Xi(_) | Generator::Theta(_))
    }
}

/// Exponent vector of a monomial: `x` exponents, `p` exponents and the set
/// of odd generators present (bit `a` is `ξ^a`, bit `d + a` is `θ_a`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialKey {
    even: Box<[u32]>,
    odd: u32,
}

impl MonomialKey {
    pub fn unit(space: &PhaseSpace) -> Self {
        MonomialKey { even: vec![0; 2 * space.base_dim()].into_boxed_slice(), odd: 0 }
    }

    fn base_dim(&self) -> usize {
        self.even.len() / 2
    }

    pub fn x_exponents(&self) -> &[u32] {
        &self.even[..self.base_dim()]
    }

    pub fn p_exponents(&self) -> &[u32] {
        &self.even[self.base_dim()..]
    }

    pub fn odd_mask(&self) -> u32 {
        self.odd
    }

    pub fn xi_indices(&self, rank: usize) -> Vec<usize> {
        (0..rank).filter(|a| self.odd & (1 << a) != 0).collect()
    }

    pub fn theta_indices(&self, rank: usize) -> Vec<usize> {
        (0..rank).filter(|a| self.odd & (1 << (rank + a)) != 0).collect()
    }

    fn p_total(&self) -> u32 {
        self.p_exponents().iter().sum()
    }

    pub fn bidegree(&self, rank: usize) -> (u32, u32) {
        let xi_mask = (1u32 << rank) - 1;
        let xi = (self.odd & xi_mask).count_ones();
        let theta = (self.odd >> rank).count_ones();
        let p = self.p_total();
        (p + theta, p + xi)
    }

    pub fn total_degree(&self) -> u32 {
        2 * self.p_total() + self.odd.count_ones()
    }

    pub fn is_odd(&self) -> bool {
        self.odd.count_ones() % 2 == 1
    }

    /// Product of two monomials; `None` when an odd generator repeats. The
    /// boolean is true when the Koszul sign is negative.
    fn mul(&self, other: &MonomialKey) -> Option<(bool, MonomialKey)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut rest = other.odd;
        while rest != 0 {
            let j = rest.trailing_zeros();
            swaps += (self.odd >> j >> 1).count_ones();
            rest &= rest - 1;
        }
        let even = self.even.iter().zip(other.even.iter()).map(|(a, b)| a + b).collect();
        Some((swaps % 2 == 1, MonomialKey { even, odd: self.odd | other.odd }))
    }

    /// Left derivative with respect to odd bit `bit`.
    fn left_odd(&self, bit: u32) -> Option<(bool, MonomialKey)> {
        if self.odd & (1 << bit) == 0 {
            return None;
        }
        let before = (self.odd & ((1 << bit) - 1)).count_ones();
        Some((before % 2 == 1, MonomialKey { even: self.even.clone(), odd: self.odd & !(1 << bit) }))
    }

    /// Right derivative with respect to odd bit `bit`.
    fn right_odd(&self, bit: u32) -> Option<(bool, MonomialKey)> {
        if self.odd & (1 << bit) == 0 {
            return None;
        }
        let after = (self.odd >> bit >> 1).count_ones();
        Some((after % 2 == 1, MonomialKey { even: self.even.clone(), odd: self.odd & !(1 << bit) }))
    }

    /// Derivative with respect to the even slot `slot` (x's then p's).
    fn even_derivative(&self, slot: usize) -> Option<(u32, MonomialKey)> {
        let e = self.even[slot];
        if e == 0 {
            return None;
        }
        let mut even = self.even.clone();
        even[slot] -= 1;
        Some((e, MonomialKey { even, odd: self.odd }))
    }
}

/// A monomial together with its coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial<S: Scalar> {
    pub key: MonomialKey,
    pub coefficient: S,
}

/// An exact element of the function algebra of a fixed phase space.
///
/// Terms are kept in a sorted map with no zero coefficients, so structural
/// equality is mathematical equality and `is_zero` is an emptiness test.
#[derive(Clone, PartialEq)]
pub struct GradedElement<S: Scalar> {
    space: PhaseSpace,
    terms: BTreeMap<MonomialKey, S>,
}

impl<S: Scalar> GradedElement<S> {
    pub fn zero(space: PhaseSpace) -> Self {
        GradedElement { space, terms: BTreeMap::new() }
    }

    pub fn constant(space: PhaseSpace, value: S) -> Self {
        let mut e = Self::zero(space);
        e.add_term(MonomialKey::unit(&space), value);
        e
    }

    pub fn one(space: PhaseSpace) -> Self {
        Self::constant(space, S::one())
    }

    pub fn integer(space: PhaseSpace, value: i64) -> Self {
        Self::constant(space, S::from_int(value))
    }

    pub fn generator(space: PhaseSpace, g: Generator) -> Self {
        let mut key = MonomialKey::unit(&space);
        let n = space.base_dim();
        let d = space.rank();
        match g {
            Generator::X(i) => {
                assert!(i < n, "x index out of range");
                key.even[i] = 1;
            }
            Generator::P(i) => {
                assert!(i < n, "p index out of range");
                key.even[n + i] = 1;
            }
            Generator::Xi(a) => {
                assert!(a < d, "xi index out of range");
                key.odd = 1 << a;
            }
            Generator::Theta(a) => {
                assert!(a < d, "theta index out of range");
                key.odd = 1 << (d + a);
            }
        }
        let mut e = Self::zero(space);
        e.add_term(key, S::one());
        e
    }

    /// `coefficient · x^ex · p^ep · ξ^{xi[0]} ⋯ θ_{theta[0]} ⋯` with the odd
    /// factors multiplied in the order listed (ξ's first, then θ's).
    pub fn from_factors(
        space: PhaseSpace,
        coefficient: S,
        x: &[u32],
        p: &[u32],
        xi: &[usize],
        theta: &[usize],
    ) -> Result<Self> {
        let n = space.base_dim();
        let d = space.rank();
        if x.len() != n || p.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n} x and p exponents, got {} and {}",
                x.len(),
                p.len()
            )));
        }
        if let Some(&a) = xi.iter().chain(theta.iter()).find(|&&a| a >= d) {
            return Err(Error::DimensionMismatch(format!("odd index {} exceeds rank {d}", a + 1)));
        }
        let mut key = MonomialKey::unit(&space);
        key.even[..n].copy_from_slice(x);
        key.even[n..].copy_from_slice(p);
        let mut acc = Self::zero(space);
        acc.add_term(key, coefficient);
        for &a in xi {
            acc = acc.mul_ref(&Self::generator(space, Generator::Xi(a)));
        }
        for &a in theta {
            acc = acc.mul_ref(&Self::generator(space, Generator::Theta(a)));
        }
        Ok(acc)
    }

    pub fn from_terms(space: PhaseSpace, terms: impl IntoIterator<Item = (MonomialKey, S)>) -> Self {
        let mut e = Self::zero(space);
        for (k, c) in terms {
            assert_eq!(k.even.len(), 2 * space.base_dim(), "monomial key from another phase space");
            e.add_term(k, c);
        }
        e
    }

    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonomialKey, &S)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial<S>> + '_ {
        self.terms.iter().map(|(k, c)| Monomial { key: k.clone(), coefficient: c.clone() })
    }

    pub fn coefficient_of(&self, key: &MonomialKey) -> S {
        self.terms.get(key).cloned().unwrap_or_else(S::zero)
    }

    fn add_term(&mut self, key: MonomialKey, value: S) {
        if value.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c = c.clone() + value;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, value);
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::AmbientMismatch { left: self.space, right: other.space });
        }
        Ok(())
    }

    fn assert_same(&self, other: &Self) {
        if let Err(e) = self.check_same(other) {
            panic!("{e}");
        }
    }

    pub fn scale(&self, factor: &S) -> Self {
        if factor.is_zero() {
            return Self::zero(self.space);
        }
        GradedElement {
            space: self.space,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.clone() * factor.clone())).collect(),
        }
    }

    pub fn scale_int(&self, factor: i64) -> Self {
        self.scale(&S::from_int(factor))
    }

    /// Graded-commutative product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_ref(other))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.space);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                if let Some((neg, k)) = ka.mul(kb) {
                    let c = ca.clone() * cb.clone();
                    out.add_term(k, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// The big bracket `{self, other}`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.bracket_ref(other))
    }

    fn bracket_ref(&self, other: &Self) -> Self {
        let n = self.space.base_dim();
        let d = self.space.rank();
        let slots = 2 * d + 2 * n;
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.space);
        }
        // Slot layout: ξ^a → a, θ_a → d + a, x^i → 2d + i, p_i → 2d + n + i.
        let conjugate = |s: usize| -> (usize, bool) {
            if s < d {
                (s + d, false)
            } else if s < 2 * d {
                (s - d, false)
            } else if s < 2 * d + n {
                (s + n, true)
            } else {
                (s - n, false)
            }
        };
        type Deriv<S> = Vec<(usize, S, MonomialKey)>;
        let right: Vec<Deriv<S>> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut v = Vec::new();
                for bit in 0..2 * d {
                    if let Some((neg, r)) = k.right_odd(bit as u32) {
                        v.push((bit, if neg { -c.clone() } else { c.clone() }, r));
                    }
                }
                for slot in 0..2 * n {
                    if let Some((e, r)) = k.even_derivative(slot) {
                        v.push((2 * d + slot, c.clone() * S::from_int(e as i64), r));
                    }
                }
                v
            })
            .collect();
        let left: Vec<Vec<Option<(S, MonomialKey)>>> = other
            .terms
            .iter()
            .map(|(k, c)| {
                let mut v: Vec<Option<(S, MonomialKey)>> = vec![None; slots];
                for bit in 0..2 * d {
                    if let Some((neg, r)) = k.left_odd(bit as u32) {
                        v[bit] = Some((if neg { -c.clone() } else { c.clone() }, r));
                    }
                }
                for slot in 0..2 * n {
                    if let Some((e, r)) = k.even_derivative(slot) {
                        v[2 * d + slot] = Some((c.clone() * S::from_int(e as i64), r));
                    }
                }
                v
            })
            .collect();
        let mut out = Self::zero(self.space);
        for rf in &right {
            for lg in &left {
                for (slot, cf, kf) in rf {
                    let (conj, negate) = conjugate(*slot);
                    if let Some((cg, kg)) = &lg[conj] {
                        if let Some((neg, k)) = kf.mul(kg) {
                            let c = cf.clone() * cg.clone();
                            out.add_term(k, if neg != negate { -c } else { c });
                        }
                    }
                }
            }
        }
        out
    }

    /// Terms of bidegree exactly `(k, l)`.
    pub fn bidegree_component(&self, k: u32, l: u32) -> Self {
        let d = self.space.rank();
        GradedElement {
            space: self.space,
            terms: self
                .terms
                .iter()
                .filter(|(key, _)| key.bidegree(d) == (k, l))
                .map(|(a, b)| (a.clone(), b.clone()))
                .collect(),
        }
    }

    /// Terms of total degree exactly `t`.
    pub fn degree_component(&self, t: u32) -> Self {
        GradedElement {
            space: self.space,
            terms: self
                .terms
                .iter()
                .filter(|(key, _)| key.total_degree() == t)
                .map(|(a, b)| (a.clone(), b.clone()))
                .collect(),
        }
    }

    /// Decomposition into nonzero bidegree components.
    pub fn components(&self) -> BTreeMap<(u32, u32), Self> {
        let d = self.space.rank();
        let mut out: BTreeMap<(u32, u32), Self> = BTreeMap::new();
        for (k, c) in &self.terms {
            out.entry(k.bidegree(d))
                .or_insert_with(|| Self::zero(self.space))
                .terms
                .insert(k.clone(), c.clone());
        }
        out
    }

    /// Bidegree when the element is homogeneous and nonzero.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let d = self.space.rank();
        let mut it = self.terms.keys().map(|k| k.bidegree(d));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// Total degree when all terms share one.
    pub fn total_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|k| k.total_degree());
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.components().len() <= 1
    }

    /// True when every term has bidegree `(k, l)` (vacuously for zero).
    pub fn has_bidegree(&self, k: u32, l: u32) -> bool {
        let d = self.space.rank();
        self.terms.keys().all(|key| key.bidegree(d) == (k, l))
    }

    /// True when every term has total degree `t` (vacuously for zero).
    pub fn has_degree(&self, t: u32) -> bool {
        self.terms.keys().all(|key| key.total_degree() == t)
    }

    /// True for polynomials in the base coordinates only.
    pub fn is_base_function(&self) -> bool {
        self.terms.keys().all(|k| k.odd == 0 && k.p_exponents().iter().all(|&e| e == 0))
    }

    /// Value of a constant element, `None` if any non-constant term is present.
    pub fn as_constant(&self) -> Option<S> {
        let unit = MonomialKey::unit(&self.space);
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => self.terms.get(&unit).cloned(),
            _ => None,
        }
    }

    /// Left derivative `∂⃗/∂g`.
    pub fn left_derivative(&self, g: Generator) -> Self {
        self.derivative(g, true)
    }

    /// Right derivative `f ∂⃖/∂g`.
    pub fn right_derivative(&self, g: Generator) -> Self {
        self.derivative(g, false)
    }

    fn derivative(&self, g: Generator, left: bool) -> Self {
        let n = self.space.base_dim();
        let d = self.space.rank();
        let mut out = Self::zero(self.space);
        for (k, c) in &self.terms {
            let odd = |bit: usize| if left { k.left_odd(bit as u32) } else { k.right_odd(bit as u32) };
            let hit = match g {
                Generator::Xi(a) => odd(a).map(|(neg, r)| (if neg { -c.clone() } else { c.clone() }, r)),
                Generator::Theta(a) => odd(d + a).map(|(neg, r)| (if neg { -c.clone() } else { c.clone() }, r)),
                Generator::X(i) => k.even_derivative(i).map(|(e, r)| (c.clone() * S::from_int(e as i64), r)),
                Generator::P(i) => {
                    k.even_derivative(n + i).map(|(e, r)| (c.clone() * S::from_int(e as i64), r))
                }
            };
            if let Some((c, r)) = hit {
                out.add_term(r, c);
            }
        }
        out
    }

    /// Exchange `ξ^a ↔ θ_a` in every monomial, keeping the factor order of
    /// each monomial and renormalising.
    pub(crate) fn swap_odd_roles(&self, target: PhaseSpace) -> Self {
        let d = self.space.rank();
        let mut out = Self::zero(target);
        for (k, c) in &self.terms {
            let mut acc = GradedElement::<S>::zero(target);
            acc.add_term(MonomialKey { even: k.even.clone(), odd: 0 }, c.clone());
            for bit in 0..2 * d {
                if k.odd & (1 << bit) != 0 {
                    let g = if bit < d { Generator::Theta(bit) } else { Generator::Xi(bit - d) };
                    acc = acc.mul_ref(&GradedElement::generator(target, g));
                }
            }
            for (kk, cc) in acc.terms {
                out.add_term(kk, cc);
            }
        }
        out
    }

    /// Split as `Σ_m c_m · o_m`, where `o_m` is the canonically ordered odd
    /// monomial with mask `m` and every `c_m` is even (built from `x`, `p`).
    pub fn odd_coefficients(&self) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (k, c) in &self.terms {
            out.entry(k.odd)
                .or_insert_with(|| Self::zero(self.space))
                .terms
                .insert(MonomialKey { even: k.even.clone(), odd: 0 }, c.clone());
        }
        out
    }

    /// The canonically ordered odd monomial with the given mask.
    pub fn odd_monomial(space: PhaseSpace, mask: u32) -> Self {
        let mut key = MonomialKey::unit(&space);
        key.odd = mask;
        let mut e = Self::zero(space);
        e.add_term(key, S::one());
        e
    }

    /// Map the coefficients into another scalar type.
    pub fn map_coefficients<T: Scalar>(&self, f: impl Fn(&S) -> T) -> GradedElement<T> {
        let mut out = GradedElement::<T>::zero(self.space);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c));
        }
        out
    }
}

pub fn multiply<S: Scalar>(f: &GradedElement<S>, g: &GradedElement<S>) -> Result<GradedElement<S>> {
    f.multiply(g)
}

pub fn big_bracket<S: Scalar>(f: &GradedElement<S>, g: &GradedElement<S>) -> Result<GradedElement<S>> {
    f.bracket(g)
}

pub fn bidegree_component<S: Scalar>(f: &GradedElement<S>, k: u32, l: u32) -> GradedElement<S> {
    f.bidegree_component(k, l)
}

/// `{f, g}` for elements known to share a phase space.
///
/// # Panics
///
/// Panics on mismatched phase spaces.
pub fn br<S: Scalar>(f: &GradedElement<S>, g: &GradedElement<S>) -> GradedElement<S> {
    f.assert_same(g);
    f.bracket_ref(g)
}

impl<S: Scalar> Add for &GradedElement<S> {
    type Output = GradedElement<S>;
    fn add(self, rhs: Self) -> GradedElement<S> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<S: Scalar> Add for GradedElement<S> {
    type Output = GradedElement<S>;
    fn add(mut self, rhs: Self) -> GradedElement<S> {
        self += &rhs;
        self
    }
}

impl<S: Scalar> AddAssign<&GradedElement<S>> for GradedElement<S> {
    fn add_assign(&mut self, rhs: &GradedElement<S>) {
        self.assert_same(rhs);
        for (k, c) in &rhs.terms {
            self.add_term(k.clone(), c.clone());
        }
    }
}

impl<S: Scalar> Sub for &GradedElement<S> {
    type Output = GradedElement<S>;
    fn sub(self, rhs: Self) -> GradedElement<S> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<S: Scalar> Sub for GradedElement<S> {
    type Output = GradedElement<S>;
    fn sub(mut self, rhs: Self) -> GradedElement<S> {
        self -= &rhs;
        self
    }
}

impl<S: Scalar> SubAssign<&GradedElement<S>> for GradedElement<S> {
    fn sub_assign(&mut self, rhs: &GradedElement<S>) {
        self.assert_same(rhs);
        for (k, c) in &rhs.terms {
            self.add_term(k.clone(), -c.clone());
        }
    }
}

impl<S: Scalar> Neg for &GradedElement<S> {
    type Output = GradedElement<S>;
    fn neg(self) -> GradedElement<S> {
        GradedElement {
            space: self.space,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c.clone())).collect(),
        }
    }
}

impl<S: Scalar> Neg for GradedElement<S> {
    type Output = GradedElement<S>;
    fn neg(self) -> GradedElement<S> {
        -&self
    }
}

impl<S: Scalar> Mul for &GradedElement<S> {
    type Output = GradedElement<S>;
    fn mul(self, rhs: Self) -> GradedElement<S> {
        self.assert_same(rhs);
        self.mul_ref(rhs)
    }
}

impl<S: Scalar> Mul for GradedElement<S> {
    type Output = GradedElement<S>;
    fn mul(self, rhs: Self) -> GradedElement<S> {
        &self * &rhs
    }
}

impl<S: Scalar> fmt::Display for GradedElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let n = self.space.base_dim();
        let d = self.space.rank();
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            for i in 0..n {
                match k.even[i] {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    e => factors.push(format!("x{}^{e}", i + 1)),
                }
            }
            for i in 0..n {
                match k.even[n + i] {
                    0 => {}
                    1 => factors.push(format!("p{}", i + 1)),
                    e => factors.push(format!("p{}^{e}", i + 1)),
                }
            }
            for bit in 0..2 * d {
                if k.odd & (1 << bit) != 0 {
                    factors.push(if bit < d { format!("xi{}", bit + 1) } else { format!("theta{}", bit - d + 1) });
                }
            }
            let coef = c.to_string();
            let (neg, mag) = match coef.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, coef),
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for GradedElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedElement[{}]({self})", self.space)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn space(n: usize, d: usize) -> PhaseSpace {
        PhaseSpace::new(n, d).unwrap()
    }

    fn gen(s: PhaseSpace, g: Generator) -> GradedElement<Rational> {
        GradedElement::generator(s, g)
    }

    #[test]
    fn odd_generators_square_to_zero() {
        let s = space(0, 2);
        let xi1 = gen(s, Generator::Xi(0));
        assert!((&xi1 * &xi1).is_zero());
    }

    #[test]
    fn koszul_sign_for_two_odd_factors() {
        let s = space(0, 2);
        let xi1 = gen(s, Generator::Xi(0));
        let xi2 = gen(s, Generator::Xi(1));
        assert_eq!(&xi2 * &xi1, -(&xi1 * &xi2));
        assert_eq!((&xi1 * &xi2).to_string(), "xi1*xi2");
    }

    #[test]
    fn bidegrees_add_under_multiplication() {
        let s = space(1, 1);
        let m = &(&gen(s, Generator::X(0)) * &gen(s, Generator::P(0))) * &gen(s, Generator::Xi(0));
        assert_eq!(m.bidegree(), Some((1, 2)));
        assert_eq!(m.total_degree(), Some(3));
    }

    #[test]
    fn generator_pairings() {
        let s = space(1, 2);
        let one = GradedElement::<Rational>::one(s);
        assert_eq!(br(&gen(s, Generator::Theta(0)), &gen(s, Generator::Xi(0))), one);
        assert_eq!(br(&gen(s, Generator::Xi(0)), &gen(s, Generator::Theta(0))), one);
        assert_eq!(br(&gen(s, Generator::P(0)), &gen(s, Generator::X(0))), one);
        assert_eq!(br(&gen(s, Generator::X(0)), &gen(s, Generator::P(0))), -one);
        assert!(br(&gen(s, Generator::Theta(0)), &gen(s, Generator::Xi(1))).is_zero());
    }

    #[test]
    fn bracket_with_p_differentiates() {
        let s = space(1, 1);
        let x = gen(s, Generator::X(0));
        let got = br(&gen(s, Generator::P(0)), &(&x * &x));
        assert_eq!(got, x.scale_int(2));
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let a = gen(space(0, 2), Generator::Xi(0));
        let b = gen(space(0, 3), Generator::Xi(0));
        assert!(matches!(a.multiply(&b), Err(Error::AmbientMismatch { .. })));
        assert!(matches!(a.bracket(&b), Err(Error::AmbientMismatch { .. })));
    }

    #[test]
    fn components_partition_terms() {
        let s = space(0, 2);
        let xi1 = gen(s, Generator::Xi(0));
        let xi2 = gen(s, Generator::Xi(1));
        let th2 = gen(s, Generator::Theta(1));
        let mu = &(&xi1 * &xi2) * &th2;
        let omega = &xi1 * &xi2;
        let sum = &mu + &omega;
        assert_eq!(sum.bidegree_component(1, 2), mu);
        assert!(mu.bidegree_component(3, 0).is_zero());
        let total = sum.components().values().fold(GradedElement::zero(s), |acc, c| &acc + c);
        assert_eq!(total, sum);
        assert!(!sum.is_homogeneous());
    }

    #[test]
    fn from_factors_applies_koszul_sign() {
        let s = space(0, 2);
        let a = GradedElement::<Rational>::from_factors(s, Rational::from_int(1), &[], &[], &[1, 0], &[]).unwrap();
        assert_eq!(a, -(&gen(s, Generator::Xi(0)) * &gen(s, Generator::Xi(1))));
    }
}
