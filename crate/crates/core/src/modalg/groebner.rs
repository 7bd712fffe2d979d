//! Gröbner bases for submodules of the free module `Q[x]^n`.
//!
//! Module terms `m·e_i` are ordered position over term: a smaller
//! position index is larger, ties broken by grevlex on `m`. Every basis
//! element remembers how it is built from the original generators so that
//! membership answers come with explicit cofactors.

use num_traits::One;

use crate::poly::{Monomial, Polynomial, Rational};
use crate::vecfield::PolyVectorField;

/// Leading module term: position and monomial.
pub(crate) type ModTerm = (usize, Monomial);

pub(crate) fn leading(v: &PolyVectorField) -> Option<(ModTerm, Rational)> {
    v.components()
        .iter()
        .enumerate()
        .find(|(_, p)| !p.is_zero())
        .map(|(i, p)| {
            let (m, c) = p.leading_term().unwrap();
            ((i, m.clone()), c.clone())
        })
}

/// Scales `v` so that its leading coefficient is one.
pub(crate) fn make_monic(v: &PolyVectorField) -> PolyVectorField {
    match leading(v) {
        Some((_, c)) => v.scale(&c.recip()),
        None => v.clone(),
    }
}

#[derive(Clone, Debug)]
struct Element {
    field: PolyVectorField,
    lead: ModTerm,
    /// `field = Σ rep[j] · generator_j`
    rep: Vec<Polynomial>,
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    nvars: usize,
    ngens: usize,
    elements: Vec<Element>,
}

fn add_scaled_rep(acc: &mut [Polynomial], c: &Rational, m: &Monomial, rep: &[Polynomial]) {
    for (a, r) in acc.iter_mut().zip(rep) {
        a.add_scaled_shifted(c, m, r);
    }
}

fn add_scaled_field(acc: &mut PolyVectorField, c: &Rational, m: &Monomial, v: &PolyVectorField) {
    for (a, p) in acc.components_mut().iter_mut().zip(v.components()) {
        a.add_scaled_shifted(c, m, p);
    }
}

impl GroebnerBasis {
    /// Buchberger completion with the chain criterion.
    pub fn compute(generators: &[PolyVectorField], nvars: usize) -> Self {
        let ngens = generators.len();
        let mut gb = GroebnerBasis {
            nvars,
            ngens,
            elements: Vec::new(),
        };
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (j, g) in generators.iter().enumerate() {
            let mut rep = vec![Polynomial::zero(nvars); ngens];
            rep[j] = Polynomial::one(nvars);
            gb.push_reduced(g.clone(), rep, &mut pairs);
        }
        while let Some(idx) = Self::next_pair(&gb, &pairs) {
            let (i, j) = pairs.remove(idx);
            let lcm = gb.elements[i].lead.1.lcm(&gb.elements[j].lead.1);
            if gb.chain_criterion(i, j, &lcm, &pairs) {
                continue;
            }
            let (gi, gj) = (&gb.elements[i], &gb.elements[j]);
            let qi = gi.lead.1.quotient_of(&lcm);
            let qj = gj.lead.1.quotient_of(&lcm);
            let mut s = PolyVectorField::zero(nvars);
            add_scaled_field(&mut s, &Rational::one(), &qi, &gi.field);
            add_scaled_field(&mut s, &-Rational::one(), &qj, &gj.field);
            let mut rep = vec![Polynomial::zero(nvars); ngens];
            add_scaled_rep(&mut rep, &Rational::one(), &qi, &gi.rep);
            add_scaled_rep(&mut rep, &-Rational::one(), &qj, &gj.rep);
            gb.push_reduced(s, rep, &mut pairs);
        }
        gb.minimize_and_interreduce();
        gb
    }

    /// Pending pair with the smallest lcm (normal selection strategy).
    fn next_pair(gb: &GroebnerBasis, pairs: &[(usize, usize)]) -> Option<usize> {
        pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                let la = gb.elements[a.0].lead.1.lcm(&gb.elements[a.1].lead.1);
                let lb = gb.elements[b.0].lead.1.lcm(&gb.elements[b.1].lead.1);
                la.cmp(&lb).then(a.cmp(b))
            })
            .map(|(k, _)| k)
    }

    fn chain_criterion(&self, i: usize, j: usize, lcm: &Monomial, pairs: &[(usize, usize)]) -> bool {
        let pos = self.elements[i].lead.0;
        let pending = |a: usize, b: usize| pairs.contains(&(a.min(b), a.max(b)));
        (0..self.elements.len()).any(|k| {
            k != i
                && k != j
                && self.elements[k].lead.0 == pos
                && self.elements[k].lead.1.divides(lcm)
                && !pending(i, k)
                && !pending(j, k)
        })
    }

    fn push_reduced(&mut self, v: PolyVectorField, rep: Vec<Polynomial>, pairs: &mut Vec<(usize, usize)>) {
        let (r, quot) = self.reduce(&v);
        if r.is_zero() {
            return;
        }
        let mut rep = rep;
        for (k, q) in quot.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            for (a, b) in rep.iter_mut().zip(&self.elements[k].rep) {
                *a = &*a - &(q * b);
            }
        }
        let ((pos, mono), c) = leading(&r).unwrap();
        let inv = c.recip();
        let field = r.scale(&inv);
        let rep = rep.iter().map(|p| p.scale(&inv)).collect();
        let new = self.elements.len();
        for (k, e) in self.elements.iter().enumerate() {
            if e.lead.0 == pos {
                pairs.push((k, new));
            }
        }
        self.elements.push(Element {
            field,
            lead: (pos, mono),
            rep,
        });
    }

    fn minimize_and_interreduce(&mut self) {
        let mut keep: Vec<Element> = Vec::new();
        let mut elems = std::mem::take(&mut self.elements);
        elems.sort_by(|a, b| a.lead.0.cmp(&b.lead.0).then(a.lead.1.cmp(&b.lead.1)));
        for e in elems {
            let redundant = keep.iter().any(|k| k.lead.0 == e.lead.0 && k.lead.1.divides(&e.lead.1));
            if !redundant {
                keep.push(e);
            }
        }
        self.elements = keep;
        for i in 0..self.elements.len() {
            let e = self.elements[i].clone();
            let others = GroebnerBasis {
                nvars: self.nvars,
                ngens: self.ngens,
                elements: self
                    .elements
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, x)| x.clone())
                    .collect(),
            };
            let (r, quot) = others.reduce(&e.field);
            let mut rep = e.rep.clone();
            for (q, o) in quot.iter().zip(&others.elements) {
                if q.is_zero() {
                    continue;
                }
                for (a, b) in rep.iter_mut().zip(&o.rep) {
                    *a = &*a - &(q * b);
                }
            }
            // leading term is untouched since the basis is minimal
            self.elements[i] = Element {
                field: r,
                lead: e.lead,
                rep,
            };
        }
        self.elements.sort_by(|a, b| a.lead.0.cmp(&b.lead.0).then(b.lead.1.cmp(&a.lead.1)));
    }

    /// Full reduction. Returns the normal form and the quotients over the
    /// basis elements: `v = Σ quot_k · element_k + nf`.
    pub(crate) fn reduce(&self, v: &PolyVectorField) -> (PolyVectorField, Vec<Polynomial>) {
        let n = self.nvars;
        let mut p = v.clone();
        let mut rem = PolyVectorField::zero(n);
        let mut quot = vec![Polynomial::zero(n); self.elements.len()];
        while let Some(((pos, mono), c)) = leading(&p) {
            let hit = self
                .elements
                .iter()
                .position(|e| e.lead.0 == pos && e.lead.1.divides(&mono));
            match hit {
                Some(k) => {
                    let q = self.elements[k].lead.1.quotient_of(&mono);
                    add_scaled_field(&mut p, &-c.clone(), &q, &self.elements[k].field);
                    quot[k].add_term(q, c);
                }
                None => {
                    rem.components_mut()[pos].add_term(mono.clone(), c.clone());
                    p.components_mut()[pos].add_term(mono, -c);
                }
            }
        }
        (rem, quot)
    }

    pub fn normal_form(&self, v: &PolyVectorField) -> PolyVectorField {
        self.reduce(v).0
    }

    /// Cofactors over the original generators, when `v` is a member.
    pub fn cofactors(&self, v: &PolyVectorField) -> Result<Vec<Polynomial>, PolyVectorField> {
        let (r, quot) = self.reduce(v);
        if !r.is_zero() {
            return Err(r);
        }
        let mut out = vec![Polynomial::zero(self.nvars); self.ngens];
        for (q, e) in quot.iter().zip(&self.elements) {
            if q.is_zero() {
                continue;
            }
            for (a, b) in out.iter_mut().zip(&e.rep) {
                *a = &*a + &(q * b);
            }
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = &PolyVectorField> {
        self.elements.iter().map(|e| &e.field)
    }

    /// Leading terms of the basis elements.
    pub fn leading_terms(&self) -> impl Iterator<Item = &(usize, Monomial)> {
        self.elements.iter().map(|e| &e.lead)
    }
}
