//! Finite-dimensional Lie algebras over the rationals.
//!
//! Radical, Levi subalgebra and Chevalley-Eilenberg coboundary solving are all
//! explicit exact linear systems. Every result is checked against its
//! defining identities before it is returned.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::dense::{self, Matrix};
use crate::linalg::{Echelon, QuotientSpace, SparseVec};
use crate::poly::{format_rational, Rational};

pub type Vector = Vec<Rational>;

fn zero_vec(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

fn axpy(acc: &mut Vector, c: &Rational, v: &[Rational]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

fn unit(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Rational::one();
    v
}

/// Lie algebra given by structure constants: `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    structure: Vec<Vec<Vector>>,
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity exactly.
    pub fn new(structure: Vec<Vec<Vector>>) -> Result<Self> {
        let dim = structure.len();
        for row in &structure {
            if row.len() != dim || row.iter().any(|v| v.len() != dim) {
                return Err(Error::InvalidStructureConstants("shape".into()));
            }
        }
        let g = LieAlgebra { dim, structure };
        for i in 0..dim {
            for j in 0..dim {
                let s: Vector = g.structure[i][j].iter().zip(&g.structure[j][i]).map(|(a, b)| a + b).collect();
                if s.iter().any(|x| !x.is_zero()) {
                    return Err(Error::InvalidStructureConstants(format!("antisymmetry at ({i}, {j})")));
                }
            }
        }
        for i in 0..dim {
            for j in i + 1..dim {
                for k in j + 1..dim {
                    let (ei, ej, ek) = (unit(dim, i), unit(dim, j), unit(dim, k));
                    let mut s = g.bracket(&ei, &g.bracket(&ej, &ek));
                    let t = g.bracket(&ej, &g.bracket(&ek, &ei));
                    let u = g.bracket(&ek, &g.bracket(&ei, &ej));
                    axpy(&mut s, &Rational::one(), &t);
                    axpy(&mut s, &Rational::one(), &u);
                    if s.iter().any(|x| !x.is_zero()) {
                        return Err(Error::InvalidStructureConstants(format!("Jacobi at ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(g)
    }

    /// Builds the algebra from a bracket on basis indices.
    pub fn from_bracket(dim: usize, f: impl Fn(usize, usize) -> Vector) -> Result<Self> {
        Self::new((0..dim).map(|i| (0..dim).map(|j| f(i, j)).collect()).collect())
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            structure: vec![vec![zero_vec(dim); dim]; dim],
        }
    }

    pub fn zero() -> Self {
        Self::abelian(0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure(&self) -> &[Vec<Vector>] {
        &self.structure
    }

    pub fn constant(&self, i: usize, j: usize) -> &Vector {
        &self.structure[i][j]
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vector {
        let mut out = zero_vec(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                axpy(&mut out, &(xi * yj), &self.structure[i][j]);
            }
        }
        out
    }

    /// Matrix of `ad_x` (column j = `[x, e_j]`).
    pub fn ad(&self, x: &[Rational]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.bracket(x, &unit(self.dim, j))).collect();
        dense::transpose(&cols)
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.iter().all(|r| r.iter().all(|v| v.iter().all(Zero::is_zero)))
    }

    /// `κ(e_i, e_j) = tr(ad_i ∘ ad_j)`
    pub fn killing_form(&self) -> Matrix {
        let ads: Vec<Matrix> = (0..self.dim).map(|i| self.ad(&unit(self.dim, i))).collect();
        let mut k = dense::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in i..self.dim {
                let t = dense::trace(&dense::mul(&ads[i], &ads[j]));
                k[i][j] = t.clone();
                k[j][i] = t;
            }
        }
        k
    }

    pub fn is_semisimple(&self) -> bool {
        self.dim == 0 || !dense::determinant(&self.killing_form()).is_zero()
    }

    pub fn whole(&self) -> Subspace {
        Subspace::from_vectors(self.dim, (0..self.dim).map(|i| unit(self.dim, i)))
    }

    /// `span{[a, b] : a ∈ A, b ∈ B}`
    pub fn bracket_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                vs.push(self.bracket(x, y));
            }
        }
        Subspace::from_vectors(self.dim, vs)
    }

    pub fn derived_algebra(&self) -> Subspace {
        let w = self.whole();
        self.bracket_span(&w, &w)
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        self.bracket_span(&self.whole(), s).is_subspace_of(s)
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        self.bracket_span(s, s).is_subspace_of(s)
    }

    /// Derived series `S ⊇ [S,S] ⊇ ...`, ending at the first repeated term.
    pub fn derived_series(&self, s: &Subspace) -> Vec<Subspace> {
        let mut out = vec![s.clone()];
        loop {
            let last = out.last().unwrap();
            let next = self.bracket_span(last, last);
            if next.dim() == last.dim() {
                break;
            }
            out.push(next);
        }
        out
    }

    pub fn is_solvable_subspace(&self, s: &Subspace) -> bool {
        self.derived_series(s).last().unwrap().dim() == 0
    }

    /// Lower central series of a subalgebra `S ⊇ [S,S] ⊇ [S,[S,S]] ⊇ ...`.
    pub fn lower_central_series(&self, s: &Subspace) -> Vec<Subspace> {
        let mut out = vec![s.clone()];
        loop {
            let last = out.last().unwrap();
            let next = self.bracket_span(s, last);
            if next.dim() == last.dim() {
                break;
            }
            out.push(next);
        }
        out
    }

    pub fn is_nilpotent_subspace(&self, s: &Subspace) -> bool {
        self.lower_central_series(s).last().unwrap().dim() == 0
    }

    /// The maximal solvable ideal, computed as the Killing-orthogonal
    /// complement of the derived algebra.
    pub fn solvable_radical(&self) -> Result<Subspace> {
        let kappa = self.killing_form();
        let derived = self.derived_algebra();
        let rows: Matrix = derived.basis().iter().map(|d| dense::mul_vec(&kappa, d)).collect();
        let rad = Subspace::from_vectors(self.dim, dense::nullspace(&rows, self.dim));
        if !self.is_ideal(&rad) {
            return Err(Error::internal("radical is not an ideal"));
        }
        if !self.is_solvable_subspace(&rad) {
            return Err(Error::internal("radical is not solvable"));
        }
        Ok(rad)
    }

    /// Quotient by an ideal, with a projection and a linear lift.
    pub fn quotient(&self, ideal: &Subspace) -> Result<Quotient> {
        if !self.is_ideal(ideal) {
            return Err(Error::internal("quotient by a subspace that is not an ideal"));
        }
        let space = QuotientSpace::new(
            (0..self.dim).map(SparseVec::unit),
            ideal.basis().iter().map(|v| SparseVec::from_dense(v)),
        );
        let q = space.dim();
        let lift_cols: Vec<Vector> = (0..q).map(|a| space.lift(&unit(q, a)).to_dense(self.dim)).collect();
        let proj_cols: Vec<Vector> = (0..self.dim).map(|i| space.coords(&SparseVec::unit(i))).collect();
        let algebra = LieAlgebra::from_bracket(q, |a, b| {
            space.coords(&SparseVec::from_dense(&self.bracket(&lift_cols[a], &lift_cols[b])))
        })?;
        Ok(Quotient {
            algebra,
            projection: dense::transpose(&proj_cols),
            lift: if q == 0 {
                vec![Vec::new(); self.dim]
            } else {
                dense::transpose(&lift_cols)
            },
        })
    }

    /// Direct sum with block-diagonal structure constants.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let n = self.dim + other.dim;
        let mut s = vec![vec![zero_vec(n); n]; n];
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    s[i][j][k] = self.structure[i][j][k].clone();
                }
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                for k in 0..other.dim {
                    s[self.dim + i][self.dim + j][self.dim + k] = other.structure[i][j][k].clone();
                }
            }
        }
        LieAlgebra { dim: n, structure: s }
    }

    /// Same algebra in the basis `f_a = Σ_i p[i][a] e_i` (columns of `p`).
    pub fn change_basis(&self, p: &Matrix) -> Result<LieAlgebra> {
        let cols = dense::transpose(p);
        let mut inv = Echelon::tracking();
        for c in &cols {
            inv.insert(SparseVec::from_dense(c));
        }
        if inv.rank() != self.dim {
            return Err(Error::InvalidInput("singular change of basis".into()));
        }
        LieAlgebra::from_bracket(self.dim, |a, b| {
            let v = self.bracket(&cols[a], &cols[b]);
            inv.solve(&SparseVec::from_dense(&v)).unwrap().to_dense(self.dim)
        })
    }

    /// The split simple algebra sl2 in the basis (e, f, h).
    pub fn sl2() -> LieAlgebra {
        let r = |v: [i64; 3]| v.iter().map(|&x| Rational::from_integer(x.into())).collect::<Vector>();
        let table = |i: usize, j: usize| -> Vector {
            match (i, j) {
                (0, 1) => r([0, 0, 1]),
                (1, 0) => r([0, 0, -1]),
                (2, 0) => r([2, 0, 0]),
                (0, 2) => r([-2, 0, 0]),
                (2, 1) => r([0, -2, 0]),
                (1, 2) => r([0, 2, 0]),
                _ => r([0, 0, 0]),
            }
        };
        LieAlgebra::from_bracket(3, table).expect("sl2 structure constants")
    }
}

/// Subspace of a Lie algebra, stored as a reduced echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn from_vectors(ambient: usize, vs: impl IntoIterator<Item = Vector>) -> Self {
        let e = Echelon::from_vectors(vs.into_iter().map(|v| SparseVec::from_dense(&v)));
        Subspace {
            ambient,
            basis: e.basis().into_iter().map(|v| v.to_dense(ambient)).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    fn echelon(&self) -> Echelon {
        Echelon::from_vectors(self.basis.iter().map(|v| SparseVec::from_dense(v)))
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.echelon().contains(&SparseVec::from_dense(v))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        let e = other.echelon();
        self.basis.iter().all(|v| e.contains(&SparseVec::from_dense(v)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::from_vectors(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // u = Σ a_i u_i = Σ b_j w_j  <=>  (a, b) in the kernel of [U | -W]
        let k = self.dim();
        let cols: Vec<Vector> = self
            .basis
            .iter()
            .cloned()
            .chain(other.basis.iter().map(|w| w.iter().map(|x| -x).collect()))
            .collect();
        if cols.is_empty() {
            return Subspace::zero(self.ambient);
        }
        let m = dense::transpose(&cols);
        let kernel = dense::nullspace(&m, cols.len());
        Subspace::from_vectors(
            self.ambient,
            kernel.into_iter().map(|a| {
                let mut v = zero_vec(self.ambient);
                for (c, u) in a.iter().take(k).zip(&self.basis) {
                    axpy(&mut v, c, u);
                }
                v
            }),
        )
    }

    /// Image under a linear map given as a matrix (rows = target coordinates).
    pub fn image(&self, m: &Matrix, target_dim: usize) -> Subspace {
        Subspace::from_vectors(target_dim, self.basis.iter().map(|v| dense::mul_vec(m, v)))
    }
}

/// `g / ideal` with projection `g → q` and a linear (not bracket-preserving) lift.
#[derive(Clone, Debug, PartialEq)]
pub struct Quotient {
    pub algebra: LieAlgebra,
    /// `dim q × dim g`
    pub projection: Matrix,
    /// `dim g × dim q`
    pub lift: Matrix,
}

impl Quotient {
    pub fn project(&self, v: &[Rational]) -> Vector {
        dense::mul_vec(&self.projection, v)
    }

    pub fn lift_vec(&self, v: &[Rational]) -> Vector {
        dense::mul_vec(&self.lift, v)
    }
}

/// Linear representation `ρ : g → gl(V)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    algebra: LieAlgebra,
    space_dim: usize,
    action: Vec<Matrix>,
}

impl Representation {
    /// Checks `ρ([x,y]) = ρ(x)ρ(y) − ρ(y)ρ(x)` on basis pairs.
    pub fn new(algebra: LieAlgebra, space_dim: usize, action: Vec<Matrix>) -> Result<Self> {
        if action.len() != algebra.dim() {
            return Err(Error::InvalidRepresentation("one matrix per basis element required".into()));
        }
        if action.iter().any(|m| m.len() != space_dim || m.iter().any(|r| r.len() != space_dim)) {
            return Err(Error::InvalidRepresentation("matrix shape".into()));
        }
        let rep = Representation {
            algebra,
            space_dim,
            action,
        };
        let d = rep.algebra.dim();
        for i in 0..d {
            for j in i + 1..d {
                let lhs = rep.act_vec(rep.algebra.constant(i, j));
                let rhs = dense::sub(
                    &dense::mul(&rep.action[i], &rep.action[j]),
                    &dense::mul(&rep.action[j], &rep.action[i]),
                );
                if !dense::is_zero(&dense::sub(&lhs, &rhs)) {
                    return Err(Error::InvalidRepresentation(format!("bracket ({i}, {j})")));
                }
            }
        }
        Ok(rep)
    }

    pub fn adjoint(g: &LieAlgebra) -> Self {
        let action = (0..g.dim()).map(|i| g.ad(&unit(g.dim(), i))).collect();
        Representation {
            algebra: g.clone(),
            space_dim: g.dim(),
            action,
        }
    }

    pub fn trivial(g: &LieAlgebra, space_dim: usize) -> Self {
        Representation {
            algebra: g.clone(),
            space_dim,
            action: vec![dense::zeros(space_dim, space_dim); g.dim()],
        }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    /// `ρ(x)` for a general element `x`.
    pub fn act_vec(&self, x: &[Rational]) -> Matrix {
        let mut m = dense::zeros(self.space_dim, self.space_dim);
        for (xi, a) in x.iter().zip(&self.action) {
            if xi.is_zero() {
                continue;
            }
            for (r, ar) in m.iter_mut().zip(a) {
                axpy(r, xi, ar);
            }
        }
        m
    }

    /// Chevalley-Eilenberg differential of a cochain.
    pub fn coboundary(&self, omega: &Cochain) -> Cochain {
        let m = self.algebra.dim();
        let p = omega.degree;
        let mut out = Cochain::zero(m, p + 1, self.space_dim);
        let tuples = out.tuples.clone();
        for (t, tuple) in tuples.iter().enumerate() {
            let mut acc = zero_vec(self.space_dim);
            for a in 0..=p {
                let rest: Vec<usize> = tuple.iter().enumerate().filter(|&(i, _)| i != a).map(|(_, &x)| x).collect();
                let val = omega.eval(&rest);
                let sign = if a % 2 == 0 { Rational::one() } else { -Rational::one() };
                let acted = dense::mul_vec(&self.action[tuple[a]], &val);
                axpy(&mut acc, &sign, &acted);
            }
            for a in 0..=p {
                for b in a + 1..=p {
                    let rest: Vec<usize> = tuple
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != a && i != b)
                        .map(|(_, &x)| x)
                        .collect();
                    let sign = if (a + b) % 2 == 0 { Rational::one() } else { -Rational::one() };
                    for (k, c) in self.algebra.constant(tuple[a], tuple[b]).iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut args = vec![k];
                        args.extend_from_slice(&rest);
                        let val = omega.eval(&args);
                        axpy(&mut acc, &(&sign * c), &val);
                    }
                }
            }
            out.values[t] = acc;
        }
        out
    }

    /// Solves `δσ = cocycle` for a `(degree−1)`-cochain `σ`, after checking
    /// that the input is closed. The solution is the deterministic one picked
    /// by echelon pivoting over the unit cochains.
    pub fn ce_solve(&self, cocycle: &Cochain) -> Result<Cochain> {
        let p = cocycle.degree;
        if p == 0 {
            return Err(Error::UnsupportedDegree(0));
        }
        if cocycle.space_dim != self.space_dim || cocycle.algebra_dim != self.algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.space_dim,
                found: cocycle.space_dim,
            });
        }
        if !self.coboundary(cocycle).is_zero() {
            return Err(Error::NotACocycle { degree: p });
        }
        let template = Cochain::zero(self.algebra.dim(), p - 1, self.space_dim);
        let unknowns = template.flat_len();
        let mut e = Echelon::tracking();
        for u in 0..unknowns {
            let img = self.coboundary(&template.unit(u));
            e.insert(SparseVec::from_dense(&img.flatten()));
        }
        let target = SparseVec::from_dense(&cocycle.flatten());
        match e.solve(&target) {
            Some(x) => {
                let sigma = template.from_flat(&x.to_dense(unknowns));
                if self.coboundary(&sigma) != *cocycle {
                    return Err(Error::internal("coboundary solution does not verify"));
                }
                Ok(sigma)
            }
            None => {
                let residual = e.reduce(&target).to_dense(target_len(cocycle));
                Err(Error::NonzeroCohomologyClass {
                    residual: residual.iter().map(format_rational).collect(),
                })
            }
        }
    }
}

fn target_len(c: &Cochain) -> usize {
    c.flat_len()
}

/// Alternating `p`-linear map `g^p → V`, stored on increasing index tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    degree: usize,
    algebra_dim: usize,
    space_dim: usize,
    tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    values: Vec<Vector>,
}

fn combinations(m: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, p, &mut Vec::new(), &mut out);
    out
}

impl Cochain {
    pub fn zero(algebra_dim: usize, degree: usize, space_dim: usize) -> Self {
        let tuples = combinations(algebra_dim, degree);
        let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let values = vec![zero_vec(space_dim); tuples.len()];
        Cochain {
            degree,
            algebra_dim,
            space_dim,
            tuples,
            index,
            values,
        }
    }

    /// 0-cochain: a single vector.
    pub fn from_vector(algebra_dim: usize, v: Vector) -> Self {
        let mut c = Cochain::zero(algebra_dim, 0, v.len());
        c.values[0] = v;
        c
    }

    /// 1-cochain from `values[i] = ω(e_i)`.
    pub fn from_linear(values: Vec<Vector>, space_dim: usize) -> Self {
        let mut c = Cochain::zero(values.len(), 1, space_dim);
        c.values = values;
        c
    }

    /// 2-cochain from a function on pairs `i < j`.
    pub fn from_pairs(algebra_dim: usize, space_dim: usize, f: impl Fn(usize, usize) -> Vector) -> Self {
        let mut c = Cochain::zero(algebra_dim, 2, space_dim);
        for (t, tuple) in c.tuples.iter().enumerate() {
            c.values[t] = f(tuple[0], tuple[1]);
        }
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(Zero::is_zero))
    }

    /// Value on a sorted index tuple.
    pub fn value(&self, tuple: &[usize]) -> &Vector {
        &self.values[self.index[tuple]]
    }

    /// Value on an arbitrary tuple of basis indices (alternating extension).
    pub fn eval(&self, args: &[usize]) -> Vector {
        let mut sorted = args.to_vec();
        let mut sign = 1i32;
        // bubble sort to track the permutation sign
        for i in 0..sorted.len() {
            for j in 0..sorted.len().saturating_sub(i + 1) {
                if sorted[j] > sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return zero_vec(self.space_dim);
        }
        let v = self.value(&sorted);
        if sign > 0 {
            v.clone()
        } else {
            v.iter().map(|x| -x).collect()
        }
    }

    fn flat_len(&self) -> usize {
        self.tuples.len() * self.space_dim
    }

    fn flatten(&self) -> Vector {
        self.values.iter().flatten().cloned().collect()
    }

    fn unit(&self, u: usize) -> Cochain {
        let mut c = Cochain::zero(self.algebra_dim, self.degree, self.space_dim);
        c.values[u / self.space_dim][u % self.space_dim] = Rational::one();
        c
    }

    fn from_flat(&self, flat: &[Rational]) -> Cochain {
        let mut c = Cochain::zero(self.algebra_dim, self.degree, self.space_dim);
        for (t, v) in c.values.iter_mut().enumerate() {
            v.clone_from_slice(&flat[t * self.space_dim..(t + 1) * self.space_dim]);
        }
        c
    }

    pub fn values(&self) -> &[Vector] {
        &self.values
    }
}

/// Levi decomposition `g = levi ⋉ rad` together with the section
/// `g / rad → g` whose image is the Levi subalgebra.
#[derive(Clone, Debug, PartialEq)]
pub struct LeviData {
    pub radical: Subspace,
    pub levi_basis: Subspace,
    pub quotient: Quotient,
    /// `dim g × dim (g/rad)`; column `a` is the image of the a-th quotient basis vector.
    pub section: Matrix,
}

/// Bracket-preserving section of a surjection `proj : g → q` whose kernel
/// is solvable, built by killing the curvature one step of the derived
/// series of the kernel at a time.
pub fn levi_section(g: &LieAlgebra, proj: &Matrix, q: &LieAlgebra) -> Result<Matrix> {
    let n = g.dim();
    let m = q.dim();
    if m == 0 {
        return Ok(vec![Vec::new(); n]);
    }
    let kernel = Subspace::from_vectors(n, dense::nullspace(proj, n));
    if !g.is_ideal(&kernel) || !g.is_solvable_subspace(&kernel) {
        return Err(Error::internal("kernel of the projection is not a solvable ideal"));
    }
    // any linear right inverse to start with
    let mut section: Vec<Vector> = (0..m)
        .map(|a| dense::solve(proj, &unit(m, a), n).ok_or_else(|| Error::internal("projection is not onto")))
        .collect::<Result<_>>()?;
    let series = g.derived_series(&kernel);
    let curvature = |s: &Vec<Vector>, a: usize, b: usize| -> Vector {
        let mut c = g.bracket(&s[a], &s[b]);
        let mut sab = zero_vec(n);
        for (k, coef) in q.constant(a, b).iter().enumerate() {
            axpy(&mut sab, coef, &s[k]);
        }
        axpy(&mut c, &-Rational::one(), &sab);
        c
    };
    for step in 0..series.len() - 1 {
        let (num, den) = (&series[step], &series[step + 1]);
        let space = QuotientSpace::new(
            num.basis().iter().map(|v| SparseVec::from_dense(v)),
            den.basis().iter().map(|v| SparseVec::from_dense(v)),
        );
        let k = space.dim();
        let action: Vec<Matrix> = (0..m)
            .map(|a| {
                let cols: Vec<Vector> = (0..k)
                    .map(|b| {
                        let lifted = space.lift(&unit(k, b)).to_dense(n);
                        space.coords(&SparseVec::from_dense(&g.bracket(&section[a], &lifted)))
                    })
                    .collect();
                dense::transpose(&cols)
            })
            .map(|mm| if k == 0 { Vec::new() } else { mm })
            .collect();
        let rep = Representation::new(q.clone(), k, action)
            .map_err(|e| Error::internal(format!("curvature module: {e}")))?;
        for a in 0..m {
            for b in a + 1..m {
                if !num.contains(&curvature(&section, a, b)) {
                    return Err(Error::internal(format!("curvature leaves the derived series at step {step}")));
                }
            }
        }
        let cocycle = Cochain::from_pairs(m, k, |a, b| {
            space.coords(&SparseVec::from_dense(&curvature(&section, a, b)))
        });
        let sigma = rep.ce_solve(&cocycle)?;
        for (a, s) in section.iter_mut().enumerate() {
            let corr = space.lift(sigma.value(&[a])).to_dense(n);
            axpy(s, &-Rational::one(), &corr);
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            if curvature(&section, a, b).iter().any(|x| !x.is_zero()) {
                return Err(Error::internal("Levi section is not bracket preserving"));
            }
        }
        if dense::mul_vec(proj, &section[a]) != unit(m, a) {
            return Err(Error::internal("Levi section is not a section"));
        }
    }
    Ok(dense::transpose(&section))
}

/// Radical, Levi subalgebra and section for `g`.
pub fn levi_subalgebra(g: &LieAlgebra) -> Result<LeviData> {
    let radical = g.solvable_radical()?;
    let quotient = g.quotient(&radical)?;
    if !quotient.algebra.is_semisimple() {
        return Err(Error::internal("quotient by the radical is not semisimple"));
    }
    let section = levi_section(g, &quotient.projection, &quotient.algebra)?;
    let cols = if quotient.algebra.dim() == 0 {
        Vec::new()
    } else {
        dense::transpose(&section)
    };
    let levi_basis = Subspace::from_vectors(g.dim(), cols);
    if !g.is_subalgebra(&levi_basis) {
        return Err(Error::internal("Levi subspace is not a subalgebra"));
    }
    if levi_basis.intersection(&radical).dim() != 0 || levi_basis.dim() + radical.dim() != g.dim() {
        return Err(Error::internal("Levi subalgebra is not a complement of the radical"));
    }
    Ok(LeviData {
        radical,
        levi_basis,
        quotient,
        section,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| rat(x)).collect()
    }

    /// sl2 ⊕ (one-dimensional centre)
    fn gl2_like() -> LieAlgebra {
        LieAlgebra::sl2().direct_sum(&LieAlgebra::abelian(1))
    }

    /// sl2 ⋉ Q^2 (standard representation), basis e, f, h, u, w.
    pub(crate) fn sl2_standard_semidirect() -> LieAlgebra {
        let sl2 = LieAlgebra::sl2();
        // standard rep: e u = 0, e w = u, f u = w, f w = 0, h u = u, h w = -w
        let rho = |i: usize| -> Matrix {
            match i {
                0 => vec![v(&[0, 1]), v(&[0, 0])],
                1 => vec![v(&[0, 0]), v(&[1, 0])],
                _ => vec![v(&[1, 0]), v(&[0, -1])],
            }
        };
        LieAlgebra::from_bracket(5, |i, j| {
            let mut out = zero_vec(5);
            if i < 3 && j < 3 {
                for (k, c) in sl2.constant(i, j).iter().enumerate() {
                    out[k] = c.clone();
                }
            } else if i < 3 && j >= 3 {
                let m = rho(i);
                for r in 0..2 {
                    out[3 + r] = m[r][j - 3].clone();
                }
            } else if i >= 3 && j < 3 {
                let m = rho(j);
                for r in 0..2 {
                    out[3 + r] = -m[r][i - 3].clone();
                }
            }
            out
        })
        .unwrap()
    }

    #[test]
    fn rejects_bad_structure_constants() {
        let bad = LieAlgebra::from_bracket(2, |i, j| if (i, j) == (0, 1) { v(&[1, 0]) } else { v(&[0, 0]) });
        assert!(matches!(bad, Err(Error::InvalidStructureConstants(_))));
    }

    #[test]
    fn killing_form_examples() {
        assert!(dense::is_zero(&LieAlgebra::abelian(3).killing_form()));
        let k = LieAlgebra::sl2().killing_form();
        // basis (e, f, h)
        assert_eq!(k[2][2], rat(8));
        assert_eq!(k[0][1], rat(4));
        assert_eq!(k[1][0], rat(4));
        assert_eq!(k[0][0], rat(0));
        assert_eq!(k[1][1], rat(0));
        assert_eq!(k[2][0], rat(0));
        assert_eq!(k[2][1], rat(0));
        assert_eq!(dense::determinant(&gl2_like().killing_form()), rat(0));
        assert!(LieAlgebra::sl2().is_semisimple());
    }

    #[test]
    fn radical_examples() {
        let two_dim = LieAlgebra::from_bracket(2, |i, j| match (i, j) {
            (0, 1) => v(&[0, 1]),
            (1, 0) => v(&[0, -1]),
            _ => v(&[0, 0]),
        })
        .unwrap();
        assert_eq!(two_dim.solvable_radical().unwrap().dim(), 2);
        assert_eq!(two_dim.derived_series(&two_dim.whole()).len(), 3);
        assert_eq!(LieAlgebra::sl2().solvable_radical().unwrap().dim(), 0);
        let rad = gl2_like().solvable_radical().unwrap();
        assert_eq!(rad, Subspace::from_vectors(4, [v(&[0, 0, 0, 1])]));
    }

    #[test]
    fn levi_examples() {
        let sl2 = LieAlgebra::sl2();
        let d = levi_subalgebra(&sl2).unwrap();
        assert_eq!(d.levi_basis.dim(), 3);
        assert_eq!(d.radical.dim(), 0);

        let solv = LieAlgebra::abelian(2);
        let d = levi_subalgebra(&solv).unwrap();
        assert_eq!(d.levi_basis.dim(), 0);

        let g = sl2_standard_semidirect();
        let d = levi_subalgebra(&g).unwrap();
        assert_eq!(d.levi_basis.dim(), 3);
        assert_eq!(d.radical.dim(), 2);
        assert!(g.is_subalgebra(&d.levi_basis));
    }

    #[test]
    fn levi_after_a_shear() {
        // basis change mixing sl2 with the radical: the naive complement is
        // no longer a subalgebra, the iteration has to correct it
        let g = sl2_standard_semidirect();
        let mut p = dense::identity(5);
        p[3][0] = rat(1);
        p[4][2] = rat(2);
        p[3][1] = rat(-1);
        let g2 = g.change_basis(&p).unwrap();
        let d = levi_subalgebra(&g2).unwrap();
        let q = &d.quotient.algebra;
        for a in 0..3 {
            for b in 0..3 {
                let sa: Vector = d.section.iter().map(|r| r[a].clone()).collect();
                let sb: Vector = d.section.iter().map(|r| r[b].clone()).collect();
                let lhs = g2.bracket(&sa, &sb);
                let rhs = dense::mul_vec(&d.section, q.constant(a, b));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn ce_solve_examples() {
        let sl2 = LieAlgebra::sl2();
        let adj = Representation::adjoint(&sl2);
        let zero = Cochain::zero(3, 1, 3);
        assert!(adj.ce_solve(&zero).unwrap().is_zero());

        let v0 = Cochain::from_vector(3, v(&[1, -2, 3]));
        let c = adj.coboundary(&v0);
        let prim = adj.ce_solve(&c).unwrap();
        assert_eq!(adj.coboundary(&prim), c);

        let ab = LieAlgebra::abelian(2);
        let triv = Representation::trivial(&ab, 1);
        let c = Cochain::from_linear(vec![v(&[1]), v(&[0])], 1);
        assert!(matches!(triv.ce_solve(&c), Err(Error::NonzeroCohomologyClass { .. })));
    }

    #[test]
    fn ce_solve_rejects_non_cocycles() {
        let sl2 = LieAlgebra::sl2();
        let adj = Representation::adjoint(&sl2);
        let c = Cochain::from_linear(vec![v(&[1, 0, 0]), v(&[0, 0, 0]), v(&[0, 0, 0])], 3);
        assert_eq!(adj.ce_solve(&c), Err(Error::NotACocycle { degree: 1 }));
    }

    #[test]
    fn differential_squares_to_zero() {
        let g = sl2_standard_semidirect();
        let adj = Representation::adjoint(&g);
        for p in 0..3 {
            let template = Cochain::zero(g.dim(), p, g.dim());
            for u in 0..template.flat_len() {
                let d2 = adj.coboundary(&adj.coboundary(&template.unit(u)));
                assert!(d2.is_zero(), "δδ ≠ 0 in degree {p}");
            }
        }
    }

    #[test]
    fn quotient_of_gl2_is_sl2() {
        let g = gl2_like();
        let rad = g.solvable_radical().unwrap();
        let q = g.quotient(&rad).unwrap();
        assert_eq!(q.algebra.dim(), 3);
        assert!(q.algebra.is_semisimple());
    }
}
