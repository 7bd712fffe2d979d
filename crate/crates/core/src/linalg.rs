//! Exact linear algebra over the rationals.
//!
//! Everything is built on an incremental reduced row echelon form with
//! optional provenance tracking. The pivot of a row is its first nonzero
//! column, so the column numbering decides which coordinates are eliminated
//! first. Callers exploit this: jet spaces number their columns by
//! increasing degree, which makes the rows with pivot of degree `>= d`
//! a basis of the vectors vanishing below degree `d`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::poly::Rational;

/// Sparse vector: `(index, value)` pairs, sorted by index, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec {
            entries: vec![(i, Rational::one())],
        }
    }

    pub fn from_dense(v: &[Rational]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    /// Builds from unsorted pairs, summing duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut map: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, x) in pairs {
            *map.entry(i).or_insert_with(Rational::zero) += x;
        }
        SparseVec {
            entries: map.into_iter().filter(|(_, x)| !x.is_zero()).collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); len];
        for (i, x) in &self.entries {
            out[*i] = x.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn first(&self) -> Option<(usize, &Rational)> {
        self.entries.first().map(|(i, x)| (*i, x))
    }

    pub fn scale(&self, c: &Rational) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    /// `self += c * other`
    pub fn axpy(&mut self, c: &Rational, other: &SparseVec) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((ia, _)), Some((ib, _))) => {
                    if ia < ib {
                        out.push(a.next().unwrap());
                    } else if ib < ia {
                        let (ib, xb) = b.next().unwrap();
                        out.push((*ib, c * xb));
                    } else {
                        let (ia, xa) = a.next().unwrap();
                        let (_, xb) = b.next().unwrap();
                        let s = xa + c * xb;
                        if !s.is_zero() {
                            out.push((ia, s));
                        }
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (ib, xb) = b.next().unwrap();
                    out.push((*ib, c * xb));
                }
                (None, None) => break,
            }
        }
        self.entries = out;
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.axpy(&Rational::one(), other);
        out
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.axpy(&-Rational::one(), other);
        out
    }

    /// Keeps only the entries whose index satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(usize) -> bool) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().filter(|(i, _)| keep(*i)).cloned().collect(),
        }
    }

    /// Reindexes entries; `map` must be injective on the support.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().map(|(i, x)| (map(*i), x.clone())))
    }
}

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    /// Expresses `vec` as a combination of inserted inputs.
    combo: SparseVec,
}

/// Outcome of inserting a vector into an [`Echelon`].
#[derive(Clone, Debug, PartialEq)]
pub enum Insertion {
    /// The vector was independent; its reduced form has this pivot column.
    Pivot(usize),
    /// The vector was dependent. With tracking enabled, the payload is a
    /// kernel vector over input indices (zero combination of inputs).
    Dependent(SparseVec),
}

/// Incremental reduced row echelon form.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Row>,
    pivots: BTreeMap<usize, usize>,
    inputs: usize,
    track: bool,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    /// Echelon form that records how every row arises from the inputs.
    pub fn tracking() -> Self {
        Echelon {
            track: true,
            ..Echelon::default()
        }
    }

    pub fn from_vectors(vs: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut e = Echelon::new();
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    /// Rows sorted by pivot column.
    pub fn basis(&self) -> Vec<&SparseVec> {
        self.pivots.values().map(|&r| &self.rows[r].vec).collect()
    }

    /// `(pivot, row, combination of inputs)` sorted by pivot.
    pub fn rows_with_combos(&self) -> impl Iterator<Item = (usize, &SparseVec, &SparseVec)> {
        self.pivots
            .iter()
            .map(move |(&p, &r)| (p, &self.rows[r].vec, &self.rows[r].combo))
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    pub fn row_for_pivot(&self, col: usize) -> Option<&SparseVec> {
        self.pivots.get(&col).map(|&r| &self.rows[r].vec)
    }

    /// Reduces `v` against all rows. Returns the remainder and the
    /// coefficients (over row pivots) that were subtracted.
    pub fn reduce_with_coefficients(&self, v: &SparseVec) -> (SparseVec, Vec<(usize, Rational)>) {
        let mut rem = v.clone();
        let mut coeffs = Vec::new();
        // rows are reduced: the entry of v at a pivot column is unaffected
        // by subtracting the other rows
        let hits: Vec<(usize, Rational)> = v
            .entries()
            .iter()
            .filter(|(i, _)| self.pivots.contains_key(i))
            .cloned()
            .collect();
        for (p, c) in hits {
            let r = &self.rows[self.pivots[&p]];
            rem.axpy(&-c.clone(), &r.vec);
            coeffs.push((p, c));
        }
        (rem, coeffs)
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_with_coefficients(v).0
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Writes `v` as a combination of inputs, if it lies in the span.
    /// Requires tracking.
    pub fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        assert!(self.track, "solve needs a tracking echelon");
        let (rem, coeffs) = self.reduce_with_coefficients(v);
        if !rem.is_zero() {
            return None;
        }
        let mut x = SparseVec::new();
        for (p, c) in coeffs {
            x.axpy(&c, &self.rows[self.pivots[&p]].combo);
        }
        Some(x)
    }

    pub fn insert(&mut self, v: SparseVec) -> Insertion {
        let idx = self.inputs;
        self.inputs += 1;
        let (mut rem, coeffs) = self.reduce_with_coefficients(&v);
        let mut combo = SparseVec::new();
        if self.track {
            combo = SparseVec::unit(idx);
            for (p, c) in &coeffs {
                combo.axpy(&-c.clone(), &self.rows[self.pivots[p]].combo);
            }
        }
        let Some((pivot, lead)) = rem.first() else {
            return Insertion::Dependent(combo);
        };
        let inv = lead.recip();
        rem = rem.scale(&inv);
        if self.track {
            combo = combo.scale(&inv);
        }
        // keep the form reduced: clear the new pivot column elsewhere
        for row in &mut self.rows {
            let c = row.vec.get(pivot);
            if !c.is_zero() {
                row.vec.axpy(&-c.clone(), &rem);
                if self.track {
                    row.combo.axpy(&-c, &combo);
                }
            }
        }
        self.rows.push(Row { vec: rem, combo });
        self.pivots.insert(pivot, self.rows.len() - 1);
        Insertion::Pivot(pivot)
    }
}

/// Coordinates on `span(numerator) / span(denominator)`, where the
/// denominator lies inside the numerator. The complement is spanned by
/// reduced vectors whose pivots avoid the denominator's pivots.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    denominator: Echelon,
    complement: Echelon,
}

impl QuotientSpace {
    pub fn new(
        numerator: impl IntoIterator<Item = SparseVec>,
        denominator: impl IntoIterator<Item = SparseVec>,
    ) -> Self {
        let denominator = Echelon::from_vectors(denominator);
        let mut complement = Echelon::new();
        for v in numerator {
            let r = denominator.reduce(&v);
            complement.insert(r);
        }
        QuotientSpace {
            denominator,
            complement,
        }
    }

    pub fn dim(&self) -> usize {
        self.complement.rank()
    }

    /// Coordinates of the class of `v` (assumed to lie in the numerator).
    pub fn coords(&self, v: &SparseVec) -> Vec<Rational> {
        let r = self.denominator.reduce(v);
        let (_, coeffs) = self.complement.reduce_with_coefficients(&r);
        let mut out = vec![Rational::zero(); self.dim()];
        let order: BTreeMap<usize, usize> = self
            .complement
            .pivot_columns()
            .enumerate()
            .map(|(k, p)| (p, k))
            .collect();
        for (p, c) in coeffs {
            out[order[&p]] = c;
        }
        out
    }

    /// `true` iff `v` reduces to zero in the quotient.
    pub fn is_trivial(&self, v: &SparseVec) -> bool {
        self.denominator.contains(v)
    }

    /// Deterministic representative of the class with the given coordinates.
    pub fn lift(&self, coords: &[Rational]) -> SparseVec {
        let mut out = SparseVec::new();
        for (c, b) in coords.iter().zip(self.complement.basis()) {
            out.axpy(c, b);
        }
        out
    }

    pub fn denominator(&self) -> &Echelon {
        &self.denominator
    }
}

/// Dense matrix helpers (row-major `Vec<Vec<Rational>>`).
pub mod dense {
    use super::*;

    pub type Matrix = Vec<Vec<Rational>>;

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        vec![vec![Rational::zero(); cols]; rows]
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = zeros(n, n);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Rational::one();
        }
        m
    }

    pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
        let n = a.len();
        let k = b.len();
        let m = b.first().map_or(0, Vec::len);
        let mut out = zeros(n, m);
        for i in 0..n {
            for l in 0..k {
                if a[i][l].is_zero() {
                    continue;
                }
                for j in 0..m {
                    if !b[l][j].is_zero() {
                        out[i][j] += &a[i][l] * &b[l][j];
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(a: &Matrix, v: &[Rational]) -> Vec<Rational> {
        a.iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                    .fold(Rational::zero(), |s, (x, y)| s + x * y)
            })
            .collect()
    }

    pub fn sub(a: &Matrix, b: &Matrix) -> Matrix {
        a.iter()
            .zip(b)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
            .collect()
    }

    pub fn transpose(a: &Matrix) -> Matrix {
        let n = a.len();
        let m = a.first().map_or(0, Vec::len);
        (0..m).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
    }

    pub fn trace(a: &Matrix) -> Rational {
        a.iter().enumerate().fold(Rational::zero(), |s, (i, r)| s + &r[i])
    }

    pub fn is_zero(a: &Matrix) -> bool {
        a.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    pub fn rank(a: &Matrix) -> usize {
        Echelon::from_vectors(a.iter().map(|r| SparseVec::from_dense(r))).rank()
    }

    pub fn determinant(a: &Matrix) -> Rational {
        let n = a.len();
        let mut m = a.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Rational::zero();
            };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            let piv = m[col][col].clone();
            det *= &piv;
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = &m[r][col] / &piv;
                for c in col..n {
                    let t = &f * &m[col][c];
                    m[r][c] -= t;
                }
            }
        }
        det
    }

    /// Basis of `{x : a x = 0}`, deterministic.
    pub fn nullspace(a: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
        // the kernel of a is the space of dependencies among its columns
        let mut e = Echelon::tracking();
        let mut out = Vec::new();
        for j in 0..cols {
            let col = SparseVec::from_pairs(
                a.iter()
                    .enumerate()
                    .filter(|(_, r)| !r[j].is_zero())
                    .map(|(i, r)| (i, r[j].clone())),
            );
            if let Insertion::Dependent(k) = e.insert(col) {
                out.push(k.to_dense(cols));
            }
        }
        out
    }

    /// Some `x` with `a x = b`, deterministic, or `None` if inconsistent.
    pub fn solve(a: &Matrix, b: &[Rational], cols: usize) -> Option<Vec<Rational>> {
        let mut e = Echelon::tracking();
        for j in 0..cols {
            let col = SparseVec::from_pairs(
                a.iter()
                    .enumerate()
                    .filter(|(_, r)| !r[j].is_zero())
                    .map(|(i, r)| (i, r[j].clone())),
            );
            e.insert(col);
        }
        e.solve(&SparseVec::from_dense(b)).map(|x| x.to_dense(cols))
    }
}
