//! Skew-symmetric `(1,1)`-tensors on `A ⊕ A*`, deformations, torsion and the
//! two concomitants.
//!
//! A skew tensor `I` has two avatars: the block matrix
//!
//! ```text
//!       ( N     π^# )
//!   I = (           )
//!       ( ω^♭  −N*  )
//! ```
//!
//! acting on coordinates `(X^a, α_a)` of `X + α = X^a θ_a + α_a ξ^a`, and the
//! quadratic function `Σ N^a_b ξ^b θ_a + π + ω ∈ F²`, related by
//! `I(u) = {u, I}`. Here `N e_b = N^a_b e_a`, `π = Σ_{a<b} π^{ab} θ_a θ_b`,
//! `ω = Σ_{a<b} ω_{ab} ξ^a ξ^b`, `π^#(ξ^a) = π^{ab} e_b` and
//! `ω^♭(e_a) = ω_{ab} ξ^b`.
//!
//! Sections are elements of `F¹`; forms are evaluated by nested brackets,
//! `φ(X, Y, Z) = {Z, {Y, {X, φ}}}`, so that the contraction is `i_X φ = {X, φ}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::graded_algebra::{br, GradedElement};
use crate::scalar::Scalar;
use crate::supergeometry::{derived, PhaseSpace};

/// Dense matrix whose entries are polynomials in the base coordinates.
#[derive(Clone, PartialEq)]
pub struct Matrix<S: Scalar> {
    space: PhaseSpace,
    rows: usize,
    cols: usize,
    data: Vec<GradedElement<S>>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zero(space: PhaseSpace, rows: usize, cols: usize) -> Self {
        Matrix { space, rows, cols, data: vec![GradedElement::zero(space); rows * cols] }
    }

    pub fn identity(space: PhaseSpace, size: usize) -> Self {
        Self::scalar(space, size, S::one())
    }

    /// `value · identity`.
    pub fn scalar(space: PhaseSpace, size: usize, value: S) -> Self {
        let mut m = Self::zero(space, size, size);
        for i in 0..size {
            m.data[i * size + i] = GradedElement::constant(space, value.clone());
        }
        m
    }

    pub fn from_fn(
        space: PhaseSpace,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> GradedElement<S>,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { space, rows, cols, data }
    }

    /// Square matrix of integer constants given by rows.
    pub fn from_ints(space: PhaseSpace, rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self::from_fn(space, n, n, |i, j| GradedElement::integer(space, rows[i][j]))
    }

    /// Diagonal matrix of integer constants.
    pub fn diagonal(space: PhaseSpace, diag: &[i64]) -> Self {
        let n = diag.len();
        Self::from_fn(space, n, n, |i, j| GradedElement::integer(space, if i == j { diag[i] } else { 0 }))
    }

    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GradedElement<S> {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: GradedElement<S>) {
        self.data[i * self.cols + j] = value;
    }

    pub fn to_rows(&self) -> Vec<Vec<GradedElement<S>>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(|r| r.to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &GradedElement<S>> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.data.iter().all(|e| e.as_constant().is_some())
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| *self.get(i, j) == -self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.space, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, factor: &S) -> Self {
        Matrix { data: self.data.iter().map(|e| e.scale(factor)).collect(), ..self.clone() }
    }

    pub fn scale_by(&self, factor: &GradedElement<S>) -> Self {
        Matrix { data: self.data.iter().map(|e| e * factor).collect(), ..self.clone() }
    }

    pub fn pow(&self, k: u32) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut out = Self::identity(self.space, self.rows);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `Some(λ)` iff the matrix is exactly `λ · identity` for a constant `λ`.
    pub fn proportional_to_identity(&self) -> Option<S> {
        if !self.is_square() {
            return None;
        }
        if self.rows == 0 {
            return Some(S::zero());
        }
        let lambda = self.get(0, 0).as_constant()?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                let ok = if i == j { e.as_constant().as_ref() == Some(&lambda) } else { e.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(lambda)
    }

    /// Top-left `k × k` and other blocks of a `2k × 2k` matrix, in the order
    /// `(top-left, top-right, bottom-left, bottom-right)`.
    pub fn blocks(&self) -> (Self, Self, Self, Self) {
        assert!(self.is_square() && self.rows % 2 == 0, "block split needs an even square matrix");
        let k = self.rows / 2;
        let sub = |r0: usize, c0: usize| Self::from_fn(self.space, k, k, |i, j| self.get(r0 + i, c0 + j).clone());
        (sub(0, 0), sub(0, k), sub(k, 0), sub(k, k))
    }

    /// Assemble a `2k × 2k` matrix from four `k × k` blocks.
    pub fn from_blocks(tl: &Self, tr: &Self, bl: &Self, br: &Self) -> Self {
        let k = tl.rows;
        Self::from_fn(tl.space, 2 * k, 2 * k, |i, j| {
            let (blk, ii, jj) = match (i < k, j < k) {
                (true, true) => (tl, i, j),
                (true, false) => (tr, i, j - k),
                (false, true) => (bl, i - k, j),
                (false, false) => (br, i - k, j - k),
            };
            blk.get(ii, jj).clone()
        })
    }

    /// Exact determinant, a polynomial in the base coordinates.
    pub fn determinant(&self) -> GradedElement<S> {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.is_constant() {
            return GradedElement::constant(self.space, self.constant_determinant());
        }
        // Expansion over column subsets: row i is matched with column j once
        // the i columns in `mask` are used; the sign counts used columns > j.
        let n = self.rows;
        let mut dp: Vec<GradedElement<S>> = vec![GradedElement::zero(self.space); 1 << n];
        dp[0] = GradedElement::one(self.space);
        for mask in 0usize..(1 << n) {
            if dp[mask].is_zero() {
                continue;
            }
            let i = mask.count_ones() as usize;
            if i == n {
                continue;
            }
            let current = dp[mask].clone();
            for j in 0..n {
                if mask & (1 << j) != 0 || self.get(i, j).is_zero() {
                    continue;
                }
                let inversions = (mask >> j >> 1).count_ones();
                let term = &current * self.get(i, j);
                let term = if inversions % 2 == 1 { -term } else { term };
                dp[mask | (1 << j)] = &dp[mask | (1 << j)] + &term;
            }
        }
        dp[(1 << n) - 1].clone()
    }

    fn constant_determinant(&self) -> S {
        let n = self.rows;
        let mut a: Vec<S> = self.data.iter().map(|e| e.as_constant().expect("constant")).collect();
        let mut det = S::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return S::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det = det * p.clone();
            for r in (col + 1)..n {
                let factor = a[r * n + col].clone() / p.clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j].clone() * factor.clone();
                    a[r * n + j] = a[r * n + j].clone() - v;
                }
            }
        }
        det
    }

    fn same_shape(&self, other: &Self) {
        assert!(self.rows == other.rows && self.cols == other.cols, "matrix shape mismatch");
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;

    fn add(self, rhs: &Matrix<S>) -> Matrix<S> {
        self.same_shape(rhs);
        Matrix { data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(), ..self.clone() }
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;

    fn sub(self, rhs: &Matrix<S>) -> Matrix<S> {
        self.same_shape(rhs);
        Matrix { data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(), ..self.clone() }
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;

    fn neg(self) -> Matrix<S> {
        Matrix { data: self.data.iter().map(|a| -a).collect(), ..self.clone() }
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;

    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        Matrix::from_fn(self.space, self.rows, rhs.cols, |i, j| {
            let mut acc = GradedElement::zero(self.space);
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), rhs.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        })
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// ---------------------------------------------------------------------------
// sections and forms

fn xi_bit(a: usize) -> u32 {
    1 << a
}

fn theta_bit(d: usize, a: usize) -> u32 {
    1 << (d + a)
}

/// `Σ X^a θ_a + Σ α_a ξ^a` from coefficient lists (either may be empty).
pub fn section<S: Scalar>(
    space: PhaseSpace,
    a_part: &[GradedElement<S>],
    dual_part: &[GradedElement<S>],
) -> GradedElement<S> {
    let mut out = GradedElement::zero(space);
    for (a, c) in a_part.iter().enumerate() {
        out += &(c * &space.theta(a));
    }
    for (a, c) in dual_part.iter().enumerate() {
        out += &(c * &space.xi(a));
    }
    out
}

/// Coefficients `(X^a, α_a)` of a section `X + α ∈ F¹`.
pub fn section_components<S: Scalar>(u: &GradedElement<S>) -> Result<(Vec<GradedElement<S>>, Vec<GradedElement<S>>)> {
    let space = u.space();
    let d = space.rank();
    if !u.has_degree(1) {
        return Err(Error::WrongDegree { expected: "section in F^1".into(), found: u.to_string() });
    }
    let mut xs = vec![GradedElement::zero(space); d];
    let mut alphas = vec![GradedElement::zero(space); d];
    for (mask, c) in u.odd_coefficients() {
        let a = mask.trailing_zeros() as usize;
        if a < d {
            alphas[a] = c;
        } else {
            xs[a - d] = c;
        }
    }
    Ok((xs, alphas))
}

/// `Σ_{a<b} m[a][b] ξ^a ξ^b` (or `θ_a θ_b` when `on_dual` is false).
fn quadratic<S: Scalar>(m: &Matrix<S>, use_xi: bool) -> GradedElement<S> {
    let space = m.space();
    let d = m.rows();
    let mut out = GradedElement::zero(space);
    for a in 0..d {
        for b in (a + 1)..d {
            let c = m.get(a, b);
            if !c.is_zero() {
                let mask = if use_xi { xi_bit(a) | xi_bit(b) } else { theta_bit(d, a) | theta_bit(d, b) };
                out += &(c * &GradedElement::odd_monomial(space, mask));
            }
        }
    }
    out
}

/// The 2-form `ω = Σ_{a<b} ω_{ab} ξ^a ξ^b` with component matrix `ω_{ab}`.
pub fn form2<S: Scalar>(components: &Matrix<S>) -> Result<GradedElement<S>> {
    if !components.is_antisymmetric() {
        return Err(Error::NotSkew(format!("2-form components {components}")));
    }
    Ok(quadratic(components, true))
}

/// The bivector `π = Σ_{a<b} π^{ab} θ_a θ_b` with component matrix `π^{ab}`.
pub fn bivector<S: Scalar>(components: &Matrix<S>) -> Result<GradedElement<S>> {
    if !components.is_antisymmetric() {
        return Err(Error::NotSkew(format!("bivector components {components}")));
    }
    Ok(quadratic(components, false))
}

fn quadratic_matrix<S: Scalar>(q: &GradedElement<S>, use_xi: bool, what: &str) -> Result<Matrix<S>> {
    let space = q.space();
    let d = space.rank();
    let mut m = Matrix::zero(space, d, d);
    for (mask, c) in q.odd_coefficients() {
        let bits: Vec<usize> = (0..2 * d).filter(|b| mask & (1 << b) != 0).collect();
        let ok_side = |b: usize| if use_xi { b < d } else { b >= d };
        if bits.len() != 2 || !bits.iter().all(|&b| ok_side(b)) || !c.is_base_function() {
            return Err(Error::WrongDegree { expected: what.into(), found: q.to_string() });
        }
        let off = if use_xi { 0 } else { d };
        let (a, b) = (bits[0] - off, bits[1] - off);
        m.set(a, b, c.clone());
        m.set(b, a, -&c);
    }
    Ok(m)
}

/// Component matrix `ω_{ab}` of a 2-form `ω ∈ F^{0,2}`.
pub fn form2_components<S: Scalar>(omega: &GradedElement<S>) -> Result<Matrix<S>> {
    quadratic_matrix(omega, true, "2-form in F^{0,2}")
}

/// Component matrix `π^{ab}` of a bivector `π ∈ F^{2,0}`.
pub fn bivector_components<S: Scalar>(pi: &GradedElement<S>) -> Result<Matrix<S>> {
    quadratic_matrix(pi, false, "bivector in F^{2,0}")
}

/// The `k`-form with components `f(a_1, …, a_k)` for `a_1 < … < a_k`.
pub fn form_from_components<S: Scalar>(
    space: PhaseSpace,
    k: usize,
    mut f: impl FnMut(&[usize]) -> GradedElement<S>,
) -> GradedElement<S> {
    let d = space.rank();
    let mut out = GradedElement::zero(space);
    let mut idx: Vec<usize> = (0..k).collect();
    if k > d {
        return out;
    }
    loop {
        let c = f(&idx);
        if !c.is_zero() {
            let mask = idx.iter().fold(0u32, |m, &a| m | xi_bit(a));
            out += &(&c * &GradedElement::odd_monomial(space, mask));
        }
        // next increasing index tuple
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < d - k + i {
                idx[i] += 1;
                for j in (i + 1)..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `φ(u_1, …, u_k) = {u_k, … {u_1, φ}}`.
pub fn evaluate_form<S: Scalar>(phi: &GradedElement<S>, args: &[GradedElement<S>]) -> GradedElement<S> {
    args.iter().fold(phi.clone(), |acc, u| br(u, &acc))
}

/// Interior product `i_X φ = {X, φ}`.
pub fn contract<S: Scalar>(x: &GradedElement<S>, phi: &GradedElement<S>) -> GradedElement<S> {
    br(x, phi)
}

/// Derived-bracket evaluation `{{X, T}, Y}` of an element of `F³`.
pub fn evaluate_pair<S: Scalar>(t: &GradedElement<S>, x: &GradedElement<S>, y: &GradedElement<S>) -> GradedElement<S> {
    derived(x, t, y)
}

// ---------------------------------------------------------------------------
// skew tensors

/// A skew-symmetric `(1,1)`-tensor on `A ⊕ A*` in block form.
#[derive(Clone, PartialEq)]
pub struct EndoTensor<S: Scalar> {
    space: PhaseSpace,
    n: Matrix<S>,
    pi: Matrix<S>,
    omega: Matrix<S>,
}

impl<S: Scalar> EndoTensor<S> {
    /// From `N^a_b` (as `n[a][b]`), `π^{ab}` and `ω_{ab}`; the latter two
    /// must be antisymmetric.
    pub fn new(n: Matrix<S>, pi: Matrix<S>, omega: Matrix<S>) -> Result<Self> {
        let space = n.space();
        let d = space.rank();
        for (name, m) in [("N", &n), ("π", &pi), ("ω", &omega)] {
            if m.rows() != d || m.cols() != d || m.space() != space {
                return Err(Error::DimensionMismatch(format!("{name} block must be {d}x{d} on {space}")));
            }
            if let Some(e) = m.entries().find(|e| !e.is_base_function()) {
                return Err(Error::Precondition(format!("{name} block entry {e} is not a base function")));
            }
        }
        if !pi.is_antisymmetric() {
            return Err(Error::NotSkew(format!("π block {pi}")));
        }
        if !omega.is_antisymmetric() {
            return Err(Error::NotSkew(format!("ω block {omega}")));
        }
        Ok(EndoTensor { space, n, pi, omega })
    }

    pub fn zero(space: PhaseSpace) -> Self {
        let d = space.rank();
        EndoTensor { space, n: Matrix::zero(space, d, d), pi: Matrix::zero(space, d, d), omega: Matrix::zero(space, d, d) }
    }

    /// `J_id = diag(id, −id*)`.
    pub fn identity(space: PhaseSpace) -> Self {
        Self::endomorphism(Matrix::identity(space, space.rank())).expect("identity block")
    }

    /// `J_N = diag(N, −N*)`.
    pub fn endomorphism(n: Matrix<S>) -> Result<Self> {
        let space = n.space();
        let d = space.rank();
        Self::new(n, Matrix::zero(space, d, d), Matrix::zero(space, d, d))
    }

    /// `J_π` for a bivector `π ∈ F^{2,0}`.
    pub fn bivector(pi: &GradedElement<S>) -> Result<Self> {
        let m = bivector_components(pi)?;
        let space = pi.space();
        let d = space.rank();
        Self::new(Matrix::zero(space, d, d), m, Matrix::zero(space, d, d))
    }

    /// `J_ω` for a 2-form `ω ∈ F^{0,2}`.
    pub fn form(omega: &GradedElement<S>) -> Result<Self> {
        let m = form2_components(omega)?;
        let space = omega.space();
        let d = space.rank();
        Self::new(Matrix::zero(space, d, d), Matrix::zero(space, d, d), m)
    }

    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    /// `N^a_b` as `[a][b]`.
    pub fn n_block(&self) -> &Matrix<S> {
        &self.n
    }

    /// `π^{ab}`.
    pub fn pi_block(&self) -> &Matrix<S> {
        &self.pi
    }

    /// `ω_{ab}`.
    pub fn omega_block(&self) -> &Matrix<S> {
        &self.omega
    }

    /// True when the tensor is `J_N` for some `N` (no `π`, `ω` blocks).
    pub fn is_lie_level(&self) -> bool {
        self.pi.is_zero() && self.omega.is_zero()
    }

    pub fn scale(&self, factor: &S) -> Self {
        EndoTensor {
            space: self.space,
            n: self.n.scale(factor),
            pi: self.pi.scale(factor),
            omega: self.omega.scale(factor),
        }
    }

    /// The raw `2d × 2d` action matrix on coordinates `(X^a, α_a)`.
    pub fn as_matrix(&self) -> Matrix<S> {
        Matrix::from_blocks(&self.n, &pi_sharp(&self.pi), &omega_flat(&self.omega), &-&self.n.transpose())
    }

    /// Read a skew tensor back from its action matrix.
    pub fn from_matrix(m: &Matrix<S>) -> Result<Self> {
        let (tl, tr, bl, brm) = m.blocks();
        if brm != -&tl.transpose() {
            return Err(Error::NotSkew(format!("matrix {m} is not skew for the canonical pairing")));
        }
        Self::new(tl, -&tr, -&bl)
    }

    /// `I(u)` computed from the blocks:
    /// `X + α ↦ (N X + π^# α) + (ω^♭ X − N* α)`.
    pub fn apply(&self, u: &GradedElement<S>) -> Result<GradedElement<S>> {
        let (xs, alphas) = section_components(u)?;
        let m = self.as_matrix();
        let d = self.space.rank();
        let coords: Vec<&GradedElement<S>> = xs.iter().chain(alphas.iter()).collect();
        let image: Vec<GradedElement<S>> = (0..2 * d)
            .map(|i| {
                let mut acc = GradedElement::zero(self.space);
                for (j, c) in coords.iter().enumerate() {
                    let e = m.get(i, j);
                    if !e.is_zero() && !c.is_zero() {
                        acc += &(e * *c);
                    }
                }
                acc
            })
            .collect();
        Ok(section(self.space, &image[..d], &image[d..]))
    }

    /// The function `Σ N^a_b ξ^b θ_a + π + ω ∈ F²`.
    pub fn to_function(&self) -> GradedElement<S> {
        let space = self.space;
        let d = space.rank();
        let mut out = quadratic(&self.pi, false) + quadratic(&self.omega, true);
        for a in 0..d {
            for b in 0..d {
                let c = self.n.get(a, b);
                if !c.is_zero() {
                    out += &(c * &GradedElement::odd_monomial(space, xi_bit(b) | theta_bit(d, a)));
                }
            }
        }
        out
    }

    /// Inverse of [`EndoTensor::to_function`].
    pub fn from_function(q: &GradedElement<S>) -> Result<Self> {
        let space = q.space();
        let d = space.rank();
        let wrong = || Error::WrongDegree { expected: "quadratic function in F^2 without p".into(), found: q.to_string() };
        let mut n = Matrix::zero(space, d, d);
        for (mask, c) in q.bidegree_component(1, 1).odd_coefficients() {
            if mask.count_ones() != 2 || !c.is_base_function() {
                return Err(wrong());
            }
            let b = mask.trailing_zeros() as usize;
            let a = (31 - mask.leading_zeros()) as usize;
            if b >= d || a < d {
                return Err(wrong());
            }
            n.set(a - d, b, c);
        }
        let rest = q - &q.bidegree_component(1, 1);
        let pi = bivector_components(&rest.bidegree_component(2, 0)).map_err(|_| wrong())?;
        let omega = form2_components(&rest.bidegree_component(0, 2)).map_err(|_| wrong())?;
        if !(&rest - &(rest.bidegree_component(2, 0) + rest.bidegree_component(0, 2))).is_zero() {
            return Err(wrong());
        }
        Self::new(n, pi, omega)
    }
}

impl<S: Scalar> Add for &EndoTensor<S> {
    type Output = EndoTensor<S>;

    fn add(self, rhs: &EndoTensor<S>) -> EndoTensor<S> {
        EndoTensor { space: self.space, n: &self.n + &rhs.n, pi: &self.pi + &rhs.pi, omega: &self.omega + &rhs.omega }
    }
}

impl<S: Scalar> Sub for &EndoTensor<S> {
    type Output = EndoTensor<S>;

    fn sub(self, rhs: &EndoTensor<S>) -> EndoTensor<S> {
        EndoTensor { space: self.space, n: &self.n - &rhs.n, pi: &self.pi - &rhs.pi, omega: &self.omega - &rhs.omega }
    }
}

impl<S: Scalar> Neg for &EndoTensor<S> {
    type Output = EndoTensor<S>;

    fn neg(self) -> EndoTensor<S> {
        EndoTensor { space: self.space, n: -&self.n, pi: -&self.pi, omega: -&self.omega }
    }
}

impl<S: Scalar> fmt::Debug for EndoTensor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EndoTensor {{ N: {}, π: {}, ω: {} }}", self.n, self.pi, self.omega)
    }
}

pub fn function_to_endo<S: Scalar>(q: &GradedElement<S>) -> Result<EndoTensor<S>> {
    EndoTensor::from_function(q)
}

pub fn endo_to_function<S: Scalar>(i: &EndoTensor<S>) -> GradedElement<S> {
    i.to_function()
}

/// Matrix of `π^#` acting on `α`-coordinates: `(π^# α)^b = Σ_a α_a π^{ab}`.
pub fn pi_sharp<S: Scalar>(pi: &Matrix<S>) -> Matrix<S> {
    pi.transpose()
}

/// Matrix of `ω^♭` acting on `X`-coordinates: `(ω^♭ X)_b = Σ_a X^a ω_{ab}`.
pub fn omega_flat<S: Scalar>(omega: &Matrix<S>) -> Matrix<S> {
    omega.transpose()
}

/// Matrix of `N*` on `α`-coordinates.
pub fn dual_map<S: Scalar>(n: &Matrix<S>) -> Matrix<S> {
    n.transpose()
}

/// Block-matrix composition `I ∘ J` (generally not skew).
pub fn compose<S: Scalar>(i: &EndoTensor<S>, j: &EndoTensor<S>) -> Matrix<S> {
    &i.as_matrix() * &j.as_matrix()
}

/// `[I, J]_+ = I ∘ J + J ∘ I` as a raw matrix.
pub fn anticommutator<S: Scalar>(i: &EndoTensor<S>, j: &EndoTensor<S>) -> Matrix<S> {
    &compose(i, j) + &compose(j, i)
}

pub fn proportional_to_identity<S: Scalar>(m: &Matrix<S>) -> Option<S> {
    m.proportional_to_identity()
}

// ---------------------------------------------------------------------------
// deformations, torsion, concomitants

/// `Θ_I = {I, Θ}`.
pub fn deform<S: Scalar>(theta: &GradedElement<S>, i: &EndoTensor<S>) -> GradedElement<S> {
    br(&i.to_function(), theta)
}

/// `Θ_{I_1, …, I_k} = {I_k, … {I_1, Θ}}`.
pub fn deform_seq<S: Scalar>(theta: &GradedElement<S>, tensors: &[EndoTensor<S>]) -> GradedElement<S> {
    tensors.iter().fold(theta.clone(), |acc, i| deform(&acc, i))
}

fn ap<S: Scalar>(i: &EndoTensor<S>, u: &GradedElement<S>) -> GradedElement<S> {
    i.apply(u).expect("sections are in F^1")
}

/// Dorfman bracket `[X, Y] = {{X, Θ}, Y}`.
pub fn bracket_of<S: Scalar>(theta: &GradedElement<S>, x: &GradedElement<S>, y: &GradedElement<S>) -> GradedElement<S> {
    derived(x, theta, y)
}

/// `[X, Y]_I = [IX, Y] + [X, IY] − I[X, Y]` computed from sections.
pub fn deformed_bracket<S: Scalar>(
    theta: &GradedElement<S>,
    i: &EndoTensor<S>,
    x: &GradedElement<S>,
    y: &GradedElement<S>,
) -> GradedElement<S> {
    let b = |u: &GradedElement<S>, v: &GradedElement<S>| bracket_of(theta, u, v);
    &(&b(&ap(i, x), y) + &b(x, &ap(i, y))) - &ap(i, &b(x, y))
}

/// `T_Θ I(X, Y) = [IX, IY] − I[X, Y]_I`, the definition-level torsion.
pub fn torsion_sections<S: Scalar>(
    theta: &GradedElement<S>,
    i: &EndoTensor<S>,
    x: &GradedElement<S>,
    y: &GradedElement<S>,
) -> GradedElement<S> {
    let ix = ap(i, x);
    let iy = ap(i, y);
    &bracket_of(theta, &ix, &iy) - &ap(i, &deformed_bracket(theta, i, x, y))
}

/// `T_Θ I = ½(Θ_{I,I} − λΘ)`, valid when `I² = λ·id`; the precondition is
/// checked exactly.
pub fn torsion_function<S: Scalar>(theta: &GradedElement<S>, i: &EndoTensor<S>, lambda: &S) -> Result<GradedElement<S>> {
    let sq = compose(i, i);
    match sq.proportional_to_identity() {
        Some(l) if &l == lambda => {}
        _ => {
            return Err(Error::Precondition(format!("I∘I = {sq} is not {lambda}·id")));
        }
    }
    let f = i.to_function();
    let twice = &br(&f, &br(&f, theta)) - &theta.scale(lambda);
    Ok(twice.scale(&S::half()))
}

/// [`torsion_function`] with `λ` read off from `I ∘ I`.
pub fn torsion_function_auto<S: Scalar>(theta: &GradedElement<S>, i: &EndoTensor<S>) -> Result<(S, GradedElement<S>)> {
    let sq = compose(i, i);
    let lambda = sq
        .proportional_to_identity()
        .ok_or_else(|| Error::Precondition(format!("I∘I = {sq} is not proportional to the identity")))?;
    let t = torsion_function(theta, i, &lambda)?;
    Ok((lambda, t))
}

/// The eight-term Nijenhuis concomitant `N_Θ(I, J)(X, Y)`.
pub fn nijenhuis_concomitant<S: Scalar>(
    theta: &GradedElement<S>,
    i: &EndoTensor<S>,
    j: &EndoTensor<S>,
    x: &GradedElement<S>,
    y: &GradedElement<S>,
) -> GradedElement<S> {
    let b = |u: &GradedElement<S>, v: &GradedElement<S>| bracket_of(theta, u, v);
    let half = |p: &EndoTensor<S>, q: &EndoTensor<S>| {
        let qy = ap(q, y);
        let qx = ap(q, x);
        let mut out = b(&ap(p, x), &qy);
        out -= &ap(p, &b(x, &qy));
        out -= &ap(p, &b(&qx, y));
        out += &ap(p, &ap(q, &b(x, y)));
        out
    };
    &half(i, j) + &half(j, i)
}

/// `C_Θ(I, J) = Θ_{I,J} + Θ_{J,I}`.
pub fn concomitant_c<S: Scalar>(theta: &GradedElement<S>, i: &EndoTensor<S>, j: &EndoTensor<S>) -> GradedElement<S> {
    let fi = i.to_function();
    let fj = j.to_function();
    &br(&fj, &br(&fi, theta)) + &br(&fi, &br(&fj, theta))
}

// ---------------------------------------------------------------------------
// Lie-algebroid level

/// Torsion of `N` on `(A, μ)` evaluated at `X, Y ∈ Γ(A)`.
pub fn torsion_lie<S: Scalar>(
    mu: &GradedElement<S>,
    n: &Matrix<S>,
    x: &GradedElement<S>,
    y: &GradedElement<S>,
) -> Result<GradedElement<S>> {
    Ok(torsion_sections(mu, &EndoTensor::endomorphism(n.clone())?, x, y))
}

/// Nijenhuis concomitant of `(1,1)`-tensors `N, N'` on `(A, μ)` at `X, Y ∈ Γ(A)`.
pub fn concomitant_lie<S: Scalar>(
    mu: &GradedElement<S>,
    n: &Matrix<S>,
    n2: &Matrix<S>,
    x: &GradedElement<S>,
    y: &GradedElement<S>,
) -> Result<GradedElement<S>> {
    Ok(nijenhuis_concomitant(mu, &EndoTensor::endomorphism(n.clone())?, &EndoTensor::endomorphism(n2.clone())?, x, y))
}

/// True when `ω^♭ ∘ N = N* ∘ ω^♭`.
pub fn form_commutes<S: Scalar>(omega: &Matrix<S>, n: &Matrix<S>) -> bool {
    &omega_flat(omega) * n == &dual_map(n) * &omega_flat(omega)
}

/// True when `N ∘ π^# = π^# ∘ N*`.
pub fn bivector_commutes<S: Scalar>(pi: &Matrix<S>, n: &Matrix<S>) -> bool {
    n * &pi_sharp(pi) == &pi_sharp(pi) * &dual_map(n)
}

/// Components of `ω_M(X, Y) = ω(MX, Y)`, i.e. `(ω_M)^♭ = ω^♭ ∘ M`.
pub fn form_composite<S: Scalar>(omega: &Matrix<S>, m: &Matrix<S>) -> Matrix<S> {
    &m.transpose() * omega
}

/// Components of the bivector with `(Mπ)^# = M ∘ π^#`.
pub fn bivector_composite<S: Scalar>(pi: &Matrix<S>, m: &Matrix<S>) -> Matrix<S> {
    pi * &m.transpose()
}

/// `ω_N = ½{N, ω}`; requires `ω^♭ ∘ N = N* ∘ ω^♭`.
pub fn omega_deform<S: Scalar>(omega: &GradedElement<S>, n: &Matrix<S>) -> Result<GradedElement<S>> {
    let w = form2_components(omega)?;
    if !form_commutes(&w, n) {
        return Err(Error::Precondition(format!("ω^♭∘N ≠ N*∘ω^♭ for ω = {omega}, N = {n}")));
    }
    let jn = EndoTensor::endomorphism(n.clone())?;
    Ok(br(&jn.to_function(), omega).scale(&S::half()))
}

/// `Nπ` with `(Nπ)^# = N ∘ π^#`; requires `N ∘ π^# = π^# ∘ N*`.
pub fn pi_deform<S: Scalar>(pi: &GradedElement<S>, n: &Matrix<S>) -> Result<GradedElement<S>> {
    let p = bivector_components(pi)?;
    if !bivector_commutes(&p, n) {
        return Err(Error::Precondition(format!("N∘π^# ≠ π^#∘N* for π = {pi}, N = {n}")));
    }
    bivector(&bivector_composite(&p, n))
}

fn a_frame<S: Scalar>(space: PhaseSpace) -> Vec<GradedElement<S>> {
    space.a_basis()
}

fn degree_of_form<S: Scalar>(phi: &GradedElement<S>) -> Result<usize> {
    match phi.bidegree() {
        None if phi.is_zero() => Ok(0),
        Some((0, k)) if phi.is_base_function() || k > 0 => Ok(k as usize),
        _ => Err(Error::WrongDegree { expected: "form in F^{0,k}".into(), found: phi.to_string() }),
    }
}

/// `i_N φ(X_1, …, X_k) = Σ_j φ(X_1, …, N X_j, …, X_k)`, from components.
pub fn i_n_form<S: Scalar>(phi: &GradedElement<S>, n: &Matrix<S>) -> Result<GradedElement<S>> {
    let k = degree_of_form(phi)?;
    let space = phi.space();
    let jn = EndoTensor::endomorphism(n.clone())?;
    let frame = a_frame::<S>(space);
    Ok(form_from_components(space, k, |idx| {
        let mut acc = GradedElement::zero(space);
        for slot in 0..idx.len() {
            let args: Vec<_> = idx
                .iter()
                .enumerate()
                .map(|(j, &a)| if j == slot { ap(&jn, &frame[a]) } else { frame[a].clone() })
                .collect();
            acc += &evaluate_form(phi, &args);
        }
        acc
    }))
}

/// `𝓗(X, Y, Z) = ⟲ H(NX, NY, Z)` for a 3-form `H`, from components.
pub fn mathcal_h<S: Scalar>(h: &GradedElement<S>, n: &Matrix<S>) -> Result<GradedElement<S>> {
    if !h.is_zero() && degree_of_form(h)? != 3 {
        return Err(Error::WrongDegree { expected: "3-form in F^{0,3}".into(), found: h.to_string() });
    }
    let space = h.space();
    let jn = EndoTensor::endomorphism(n.clone())?;
    let frame = a_frame::<S>(space);
    Ok(form_from_components(space, 3, |idx| {
        let (x, y, z) = (&frame[idx[0]], &frame[idx[1]], &frame[idx[2]]);
        let term = |u: &GradedElement<S>, v: &GradedElement<S>, w: &GradedElement<S>| {
            evaluate_form(h, &[ap(&jn, u), ap(&jn, v), w.clone()])
        };
        &(&term(x, y, z) + &term(y, z, x)) + &term(z, x, y)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supergeometry::{identity_element, mu_from_spec, AlgebroidSpec};
    use crate::Rational;

    type E = GradedElement<Rational>;
    type M = Matrix<Rational>;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn p2() -> PhaseSpace {
        PhaseSpace::new(0, 2).unwrap()
    }

    #[test]
    fn identity_tensor_has_identity_function() {
        let s = p2();
        let id = EndoTensor::<Rational>::identity(s);
        assert_eq!(id.to_function(), identity_element::<Rational>(s));
        assert_eq!(function_to_endo(&identity_element::<Rational>(s)).unwrap(), id);
    }

    #[test]
    fn form_and_bivector_blocks() {
        let s = p2();
        let omega: E = &s.xi(0) * &s.xi(1);
        let j = EndoTensor::form(&omega).unwrap();
        assert_eq!(j.omega_block().get(0, 1), &E::integer(s, 1));
        assert_eq!(j.omega_block().get(1, 0), &E::integer(s, -1));
        let pi: E = &s.theta(0) * &s.theta(1);
        let jp = EndoTensor::bivector(&pi).unwrap();
        assert_eq!(jp.pi_block().get(0, 1), &E::integer(s, 1));
    }

    #[test]
    fn apply_matches_bracket_route() {
        let s = PhaseSpace::new(1, 2).unwrap();
        let x: E = s.x(0);
        let n = M::from_fn(s, 2, 2, |i, j| if i == 0 && j == 1 { x.clone() } else { E::integer(s, (i + 2 * j) as i64) });
        let pi = M::from_fn(s, 2, 2, |i, j| E::integer(s, (j as i64) - (i as i64)));
        let om = M::from_fn(s, 2, 2, |i, j| (&x * &E::integer(s, 3)).scale_int((i as i64) - (j as i64)));
        let t = EndoTensor::new(n, pi, om).unwrap();
        let f = t.to_function();
        for u in s.section_basis::<Rational>() {
            let u = &u * &(&x + &E::one(s));
            assert_eq!(t.apply(&u).unwrap(), br(&u, &f), "section {u}");
        }
    }

    #[test]
    fn apply_examples() {
        let s = p2();
        let id = EndoTensor::<Rational>::identity(s);
        let u = &s.theta(0) + &s.xi(0);
        assert_eq!(id.apply(&u).unwrap(), &s.theta(0) - &s.xi(0));
        let jp = EndoTensor::bivector(&(&s.theta(0) * &s.theta(1))).unwrap();
        assert!(jp.apply(&s.theta::<Rational>(0)).unwrap().is_zero());
        let jw = EndoTensor::form(&(&s.xi(0) * &s.xi(1))).unwrap();
        assert_eq!(jw.apply(&s.theta::<Rational>(0)).unwrap(), s.xi(1));
    }

    #[test]
    fn compositions() {
        let s = p2();
        let id = EndoTensor::<Rational>::identity(s);
        assert_eq!(compose(&id, &id).proportional_to_identity(), Some(r(1)));
        let jp = EndoTensor::bivector(&(&s.theta(0) * &s.theta(1))).unwrap();
        assert_eq!(compose(&jp, &jp).proportional_to_identity(), Some(r(0)));
        let n = M::from_ints(s, &[vec![1, 2], vec![0, 3]]);
        let jn = EndoTensor::endomorphism(n.clone()).unwrap();
        let om = M::from_ints(s, &[vec![0, 1], vec![-1, 0]]);
        let jw = EndoTensor::new(M::zero(s, 2, 2), M::zero(s, 2, 2), om.clone()).unwrap();
        let (tl, tr, bl, brm) = anticommutator(&jw, &jn).blocks();
        assert!(tl.is_zero() && tr.is_zero() && brm.is_zero());
        let expect = &(&omega_flat(&om) * &n) - &(&dual_map(&n) * &omega_flat(&om));
        assert_eq!(bl, expect);
    }

    #[test]
    fn matrix_round_trip_and_determinant() {
        let s = PhaseSpace::new(1, 2).unwrap();
        let x: E = s.x(0);
        let t = EndoTensor::new(
            M::from_ints(s, &[vec![1, 2], vec![3, 4]]),
            M::from_fn(s, 2, 2, |i, j| x.scale_int(i as i64 - j as i64)),
            M::from_ints(s, &[vec![0, 5], vec![-5, 0]]),
        )
        .unwrap();
        assert_eq!(EndoTensor::from_matrix(&t.as_matrix()).unwrap(), t);
        let m = M::from_fn(s, 2, 2, |i, j| if i == j { x.clone() } else { E::integer(s, 1) });
        assert_eq!(m.determinant(), &(&x * &x) - &E::one(s));
        assert_eq!(M::from_ints(s, &[vec![2, 1], vec![4, 3]]).determinant(), E::integer(s, 2));
    }

    #[test]
    fn deform_by_identity_is_trivial() {
        let s = p2();
        let mu = mu_from_spec(s, &AlgebroidSpec::<Rational>::aff1()).unwrap();
        assert_eq!(deform(&mu, &EndoTensor::identity(s)), mu);
    }

    #[test]
    fn diagonal_n_is_nijenhuis_on_aff1() {
        let s = p2();
        let mu = mu_from_spec(s, &AlgebroidSpec::<Rational>::aff1()).unwrap();
        let jn = EndoTensor::endomorphism(M::diagonal(s, &[2, -3])).unwrap();
        // Lie level only: on A ⊕ A* the mixed values need not vanish, since
        // N² is not a multiple of the identity.
        for x in s.a_basis::<Rational>() {
            for y in s.a_basis::<Rational>() {
                let t = torsion_sections(&mu, &jn, &x, &y);
                assert!(t.is_zero(), "{x} {y} -> {t}");
            }
        }
        let t = torsion_sections(&mu, &jn, &s.theta(1), &s.xi(1));
        assert_eq!(t, s.xi::<Rational>(0).scale_int(-5));
    }

    #[test]
    fn omega_deform_matches_matrix_route() {
        let s = PhaseSpace::new(0, 4).unwrap();
        // ω = ξ¹ξ² + ξ³ξ⁴ commutes with N = diag(2, 2, -1, -1).
        let om = M::from_ints(s, &[vec![0, 1, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, -1, 0]]);
        let n = M::diagonal(s, &[2, 2, -1, -1]);
        let omega = form2(&om).unwrap();
        let deformed = omega_deform(&omega, &n).unwrap();
        assert_eq!(deformed, form2(&form_composite(&om, &n)).unwrap());
        let bad = M::diagonal(s, &[1, 2, 3, 4]);
        assert!(matches!(omega_deform(&omega, &bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn scalar_examples() {
        let s = p2();
        let om: E = &s.xi(0) * &s.xi(1);
        let pi: E = &s.theta(0) * &s.theta(1);
        let a = M::scalar(s, 2, r(5));
        assert_eq!(omega_deform(&om, &a).unwrap(), om.scale_int(5));
        assert_eq!(pi_deform(&pi, &a).unwrap(), pi.scale_int(5));
        let s3 = PhaseSpace::new(0, 3).unwrap();
        let h: E = &(&s3.xi(0) * &s3.xi(1)) * &s3.xi(2);
        assert_eq!(mathcal_h(&h, &M::identity(s3, 3)).unwrap(), h.scale_int(3));
        assert_eq!(i_n_form(&h, &M::identity(s3, 3)).unwrap(), h.scale_int(3));
    }

    #[test]
    fn three_form_evaluation() {
        let s = PhaseSpace::new(0, 3).unwrap();
        let h: E = &(&s.xi(0) * &s.xi(1)) * &s.xi(2);
        let f = s.a_basis::<Rational>();
        assert_eq!(evaluate_form(&h, &f), E::one(s));
        assert_eq!(evaluate_form(&h, &[f[1].clone(), f[0].clone(), f[2].clone()]), E::integer(s, -1));
        let rebuilt = form_from_components(s, 3, |idx| evaluate_form(&h, &[f[idx[0]].clone(), f[idx[1]].clone(), f[idx[2]].clone()]));
        assert_eq!(rebuilt, h);
    }

    #[test]
    fn torsion_function_gate() {
        let s = p2();
        let mu = mu_from_spec(s, &AlgebroidSpec::<Rational>::aff1()).unwrap();
        let jn = EndoTensor::endomorphism(M::diagonal(s, &[1, 2])).unwrap();
        assert!(matches!(torsion_function(&mu, &jn, &r(1)), Err(Error::Precondition(_))));
        let id = EndoTensor::identity(s);
        assert!(torsion_function(&mu, &id, &r(1)).unwrap().is_zero());
    }
}
