//! Polynomial vector fields on affine n-space.
//!
//! A field `X = Σ X_i ∂/∂x_i` is stored as its component polynomials. The
//! grading operators `P^k = [E, ·] − (k−1)` and their inverse `Q^k` act
//! diagonally on homogeneous components, which is what makes exact
//! order-by-order normalization possible.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{default_names, render_term, Degree, Monomial, Polynomial, Rational, Valuation};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyVectorField {
    components: Vec<Polynomial>,
}

impl PolyVectorField {
    /// Builds a field from its components; component `i` is the coefficient of `∂/∂x_i`.
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::InvalidInput("vector field on zero variables".into()));
        }
        if let Some(bad) = components.iter().find(|c| c.nvars() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.nvars(),
            });
        }
        Ok(PolyVectorField { components })
    }

    pub fn zero(n: usize) -> Self {
        PolyVectorField {
            components: vec![Polynomial::zero(n); n],
        }
    }

    /// `f ∂/∂x_i`
    pub fn basis(i: usize, f: Polynomial) -> Self {
        let n = f.nvars();
        let mut v = Self::zero(n);
        v.components[i] = f;
        v
    }

    /// `Σ x_i ∂/∂x_i`
    pub fn euler(n: usize) -> Self {
        assert!(n >= 1, "euler field needs at least one variable");
        PolyVectorField {
            components: (0..n).map(|i| Polynomial::var(n, i)).collect(),
        }
    }

    /// The linear field whose action on coordinate functions has matrix `m`,
    /// i.e. `X(x_i) = Σ_j m[j][i] x_j`.
    pub fn from_linear_matrix(m: &[Vec<Rational>]) -> Self {
        let n = m.len();
        let components = (0..n)
            .map(|i| {
                Polynomial::from_terms(n, (0..n).map(|j| (Monomial::var(n, j), m[j][i].clone())))
            })
            .collect();
        PolyVectorField { components }
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub(crate) fn components_mut(&mut self) -> &mut [Polynomial] {
        &mut self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars() != other.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: other.nvars(),
            });
        }
        Ok(())
    }

    /// Applies the field as a derivation: `X(f) = Σ X_i ∂f/∂x_i`.
    pub fn derive(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars());
        for (i, xi) in self.components.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let d = f.derivative(i);
            if !d.is_zero() {
                out = out + xi * &d;
            }
        }
        out
    }

    /// `[X, Y]_j = X(Y_j) − Y(X_j)`
    pub fn lie_bracket(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.bracket(other))
    }

    pub(crate) fn bracket(&self, other: &Self) -> Self {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(xj, yj)| &self.derive(yj) - &other.derive(xj))
            .collect();
        PolyVectorField { components }
    }

    /// Minimal vanishing order over components.
    pub fn vanishing_order(&self) -> Valuation {
        self.components
            .iter()
            .map(Polynomial::vanishing_order)
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    pub fn degree(&self) -> Degree {
        self.components
            .iter()
            .map(Polynomial::degree)
            .max()
            .unwrap_or(Degree::MinusInfinity)
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.vanishing_order().at_least(1)
    }

    /// `true` iff every nonzero component is homogeneous of degree `k`.
    pub fn is_homogeneous_of_degree(&self, k: u32) -> bool {
        self.components
            .iter()
            .all(|c| c.terms().all(|(m, _)| m.degree() == k))
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        PolyVectorField {
            components: self.components.iter().map(|c| c.homogeneous_part(d)).collect(),
        }
    }

    /// Nonzero homogeneous components, by strictly increasing degree.
    pub fn homogeneous_components(&self) -> Vec<(u32, PolyVectorField)> {
        let mut degrees: Vec<u32> = self
            .components
            .iter()
            .flat_map(|c| c.terms().map(|(m, _)| m.degree()))
            .collect();
        degrees.sort_unstable();
        degrees.dedup();
        degrees.into_iter().map(|d| (d, self.homogeneous_part(d))).collect()
    }

    pub fn truncate(&self, max_degree: u32) -> Self {
        PolyVectorField {
            components: self.components.iter().map(|c| c.truncate(max_degree)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolyVectorField {
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// `f · X`
    pub fn mul_poly(&self, f: &Polynomial) -> Self {
        PolyVectorField {
            components: self.components.iter().map(|p| p * f).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        PolyVectorField {
            components: self.components.iter().map(|p| p.mul_monomial(m)).collect(),
        }
    }

    /// Matrix of the linear part acting on coordinate functions:
    /// `m[j][i]` is the coefficient of `x_j` in `X(x_i)`.
    pub fn linear_matrix(&self) -> Vec<Vec<Rational>> {
        let n = self.nvars();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for (i, c) in self.components.iter().enumerate() {
            for (j, row) in m.iter_mut().enumerate() {
                row[i] = c.coefficient(&Monomial::var(n, j));
            }
        }
        m
    }

    pub fn linear_part(&self) -> Self {
        self.homogeneous_part(1)
    }

    /// `P^k(X) = [E, X] − (k−1)·X`
    pub fn apply_p(&self, k: u32) -> Self {
        let e = Self::euler(self.nvars());
        let km1 = Rational::from_integer(BigInt::from(k) - BigInt::one());
        &e.bracket(self) - &self.scale(&km1)
    }

    /// Inverse of `P^k` on fields whose components all vanish to order `k+1`:
    /// the degree-m component is scaled by `1/(m−k)`.
    pub fn apply_q(&self, k: u32) -> Result<Self> {
        let mut out = Self::zero(self.nvars());
        for (m, part) in self.homogeneous_components() {
            if m <= k {
                return Err(Error::DegreeTooLow { degree: m, k });
            }
            let factor = Rational::new(BigInt::one(), BigInt::from(m - k));
            out = &out + &part.scale(&factor);
        }
        Ok(out)
    }

    /// `φ_* X` for a polynomial automorphism `φ` with polynomial inverse `ψ`:
    /// `(φ_* X)(u) = Dφ(ψ(u)) · X(ψ(u))`.
    pub fn pushforward(&self, phi: &[Polynomial], psi: &[Polynomial]) -> Result<Self> {
        let n = self.nvars();
        if phi.len() != n || psi.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: phi.len().min(psi.len()),
            });
        }
        let x_at_psi: Vec<Polynomial> = self.components.iter().map(|c| c.compose(psi)).collect();
        let components = (0..n)
            .map(|i| {
                let mut acc = Polynomial::zero(n);
                for (j, xj) in x_at_psi.iter().enumerate() {
                    let dphi = phi[i].derivative(j).compose(psi);
                    acc = acc + &dphi * xj;
                }
                acc
            })
            .collect();
        Ok(PolyVectorField { components })
    }

    pub fn render(&self, names: &[String]) -> String {
        self.display_with(names).to_string()
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> FieldDisplay<'a> {
        FieldDisplay { field: self, names }
    }
}

pub struct FieldDisplay<'a> {
    field: &'a PolyVectorField,
    names: &'a [String],
}

impl fmt::Display for FieldDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.field.components.iter().enumerate() {
            for (m, coef) in c.terms().rev() {
                let t = render_term(coef, m, self.names);
                let d = format!("d{}", self.names[i]);
                if m.is_one() && coef.is_one() {
                    parts.push(d);
                } else {
                    parts.push(format!("{t}*{d}"));
                }
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Display for PolyVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars());
        write!(f, "{}", self.display_with(&names))
    }
}

impl Add<&PolyVectorField> for &PolyVectorField {
    type Output = PolyVectorField;
    fn add(self, rhs: &PolyVectorField) -> PolyVectorField {
        assert_eq!(self.nvars(), rhs.nvars(), "vector field arity mismatch");
        PolyVectorField {
            components: self.components.iter().zip(&rhs.components).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&PolyVectorField> for &PolyVectorField {
    type Output = PolyVectorField;
    fn sub(self, rhs: &PolyVectorField) -> PolyVectorField {
        assert_eq!(self.nvars(), rhs.nvars(), "vector field arity mismatch");
        PolyVectorField {
            components: self.components.iter().zip(&rhs.components).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &PolyVectorField {
    type Output = PolyVectorField;
    fn neg(self) -> PolyVectorField {
        PolyVectorField {
            components: self.components.iter().map(|a| -a).collect(),
        }
    }
}
