//! Finite jets of a module: `J^N(F)`, the space of degree-`≤ N` truncations
//! of elements of `F`, held as a reduced echelon form.
//!
//! Columns are ordered by ascending degree, so the rows whose pivot sits in
//! degree `≥ d` span the truncations of `F ∩ m^d X`. Each row optionally
//! carries "tag" columns (after all jet columns) recording the constant
//! parts of its cofactors, which is the class of the element in `F / mF`.

use std::collections::HashMap;

use num_traits::Zero;

use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Monomial, Polynomial, Rational};
use crate::vecfield::PolyVectorField;

/// Column layout for fields of degree `≤ order`.
#[derive(Clone, Debug)]
pub struct JetIndex {
    nvars: usize,
    order: u32,
    offsets: Vec<usize>,
    monomials: Vec<Vec<Monomial>>,
    lookup: Vec<HashMap<Monomial, usize>>,
}

impl JetIndex {
    pub fn new(nvars: usize, order: u32) -> Self {
        let mut offsets = Vec::new();
        let mut monomials = Vec::new();
        let mut lookup = Vec::new();
        let mut off = 0;
        for d in 0..=order {
            let ms = Monomial::all_of_degree(nvars, d);
            offsets.push(off);
            off += ms.len() * nvars;
            lookup.push(ms.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect());
            monomials.push(ms);
        }
        offsets.push(off);
        JetIndex {
            nvars,
            order,
            offsets,
            monomials,
            lookup,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Total number of jet columns.
    pub fn len(&self) -> usize {
        self.offsets[self.order as usize + 1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degree_range(&self, d: u32) -> std::ops::Range<usize> {
        self.offsets[d as usize]..self.offsets[d as usize + 1]
    }

    pub fn column(&self, component: usize, m: &Monomial) -> usize {
        let d = m.degree() as usize;
        self.offsets[d] + self.lookup[d][m] * self.nvars + component
    }

    pub fn degree_of(&self, col: usize) -> u32 {
        // offsets is sorted; find the last degree whose offset is ≤ col
        (self.offsets.partition_point(|&o| o <= col) - 1) as u32
    }

    pub fn entry(&self, col: usize) -> (usize, Monomial) {
        let d = self.degree_of(col);
        let local = col - self.offsets[d as usize];
        (local % self.nvars, self.monomials[d as usize][local / self.nvars].clone())
    }

    /// Terms of degree `≤ order`, as a sparse vector.
    pub fn encode(&self, x: &PolyVectorField) -> SparseVec {
        let mut pairs = Vec::new();
        for (i, p) in x.components().iter().enumerate() {
            for (m, c) in p.terms() {
                if m.degree() <= self.order {
                    pairs.push((self.column(i, m), c.clone()));
                }
            }
        }
        SparseVec::from_pairs(pairs)
    }

    /// Inverse of [`JetIndex::encode`]; columns past the jet range are ignored.
    pub fn decode(&self, v: &SparseVec) -> PolyVectorField {
        let mut comps = vec![Polynomial::zero(self.nvars); self.nvars];
        for (col, c) in v.entries() {
            if *col >= self.len() {
                continue;
            }
            let (i, m) = self.entry(*col);
            comps[i].add_term(m, c.clone());
        }
        PolyVectorField::new(comps).expect("jet index arity")
    }
}

/// Reduced echelon form of `J^N(F)`, with optional tags.
#[derive(Clone, Debug)]
pub struct JetSpace {
    index: JetIndex,
    ntags: usize,
    echelon: Echelon,
}

impl JetSpace {
    /// Spans `μ·g_j` truncated at `order`, for monomials `μ` of degree `< order`.
    /// All generators must vanish at the origin. With `tagged`, the products
    /// with `μ = 1` carry the unit tag of their generator.
    pub fn build(generators: &[PolyVectorField], nvars: usize, order: u32, tagged: bool) -> Self {
        let index = JetIndex::new(nvars, order);
        let base = index.len();
        let mut echelon = Echelon::new();
        for d in 0..order {
            for mu in Monomial::all_of_degree(nvars, d) {
                for (j, g) in generators.iter().enumerate() {
                    let mut v = index.encode(&g.mul_monomial(&mu).truncate(order));
                    if tagged && d == 0 {
                        v = v.add(&SparseVec::unit(base + j));
                    }
                    echelon.insert(v);
                }
            }
        }
        if order == 0 && tagged {
            for j in 0..generators.len() {
                echelon.insert(SparseVec::unit(base + j));
            }
        }
        JetSpace {
            index,
            ntags: if tagged { generators.len() } else { 0 },
            echelon,
        }
    }

    pub fn index(&self) -> &JetIndex {
        &self.index
    }

    pub fn order(&self) -> u32 {
        self.index.order
    }

    pub fn ntags(&self) -> usize {
        self.ntags
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    /// Degree of a pivot column, `None` for a tag column.
    pub fn pivot_degree(&self, col: usize) -> Option<u32> {
        (col < self.index.len()).then(|| self.index.degree_of(col))
    }

    pub fn tags_of(&self, v: &SparseVec) -> Vec<Rational> {
        let base = self.index.len();
        let mut out = vec![Rational::zero(); self.ntags];
        for (c, x) in v.entries() {
            if *c >= base {
                out[c - base] = x.clone();
            }
        }
        out
    }

    /// Rows whose jet vanishes below degree `d`, i.e. a spanning set for the
    /// truncations of `F ∩ m^d X` (with their tags). Rows that are pure tags
    /// come from elements whose jet is zero.
    pub fn rows_from_degree(&self, d: u32) -> Vec<&SparseVec> {
        self.echelon
            .rows_with_combos()
            .filter(|(p, _, _)| self.pivot_degree(*p).map_or(true, |pd| pd >= d))
            .map(|(_, r, _)| r)
            .collect()
    }

    /// Rows with pivot in degree exactly `d`.
    pub fn rows_at_degree(&self, d: u32) -> Vec<(usize, &SparseVec)> {
        self.echelon
            .rows_with_combos()
            .filter(|(p, _, _)| self.pivot_degree(*p) == Some(d))
            .map(|(p, r, _)| (p, r))
            .collect()
    }

    /// Degree-`d` parts of elements of `F ∩ m^d X`, as fields.
    pub fn leading_space(&self, d: u32) -> Vec<PolyVectorField> {
        let range = self.index.degree_range(d);
        self.rows_at_degree(d)
            .into_iter()
            .map(|(_, r)| self.index.decode(&r.filter(|c| range.contains(&c))))
            .collect()
    }

    /// Dimension of `J^d(F)` for `d ≤ order`.
    pub fn truncation_dim(&self, d: u32) -> usize {
        self.echelon
            .pivot_columns()
            .filter(|&p| self.pivot_degree(p).is_some_and(|pd| pd <= d))
            .count()
    }

    /// `true` when the `order`-jet of `x` is the jet of an element of `F`.
    pub fn contains(&self, x: &PolyVectorField) -> bool {
        self.express(x).is_some()
    }

    /// Tag vector of some element of `F` whose jet equals the jet of `x`.
    pub fn express(&self, x: &PolyVectorField) -> Option<Vec<Rational>> {
        let rem = self.echelon.reduce(&self.index.encode(x));
        if rem.entries().iter().any(|(c, _)| *c < self.index.len()) {
            return None;
        }
        Some(self.tags_of(&rem).into_iter().map(|t| -t).collect())
    }

    /// For a homogeneous degree-`d` field `w`, an element of `F ∩ m^d X`
    /// (as a jet row combination, tags included) whose degree-`d` part is `w`.
    pub fn lift_leading(&self, w: &PolyVectorField, d: u32) -> Option<SparseVec> {
        let target = self.index.encode(w);
        let mut acc = SparseVec::new();
        for (p, row) in self.rows_at_degree(d) {
            let c = target.get(p);
            if !c.is_zero() {
                acc.axpy(&c, row);
            }
        }
        let range = self.index.degree_range(d);
        let lead = acc.filter(|c| range.contains(&c));
        (lead == target).then_some(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        let idx = JetIndex::new(2, 3);
        assert_eq!(idx.len(), 2 * (1 + 2 + 3 + 4));
        for col in 0..idx.len() {
            let (i, m) = idx.entry(col);
            assert_eq!(idx.column(i, &m), col);
        }
        assert_eq!(idx.degree_of(0), 0);
        assert_eq!(idx.degree_of(2), 1);
        assert_eq!(idx.degree_of(idx.len() - 1), 3);
    }

    #[test]
    fn circles_jets() {
        let n = 2;
        let x = Polynomial::var(n, 0);
        let y = Polynomial::var(n, 1);
        let r = PolyVectorField::new(vec![-&y, x]).unwrap();
        let js = JetSpace::build(&[r.clone()], n, 3, true);
        assert_eq!(js.leading_space(1).len(), 1);
        assert_eq!(js.leading_space(2).len(), 2);
        assert_eq!(js.truncation_dim(3), 1 + 2 + 3);
        assert_eq!(js.express(&r), Some(vec![Rational::from_integer(1.into())]));
        let xr = r.mul_poly(&Polynomial::var(n, 0));
        assert_eq!(js.express(&xr), Some(vec![Rational::zero()]));
    }
}
