//! Degree-bounded membership by plain linear algebra.
//!
//! Looks for cofactors of degree `≤ bound` with `Σ a_j g_j = X` exactly.
//! Completely independent of the Gröbner machinery, so it serves as a
//! cross-check: a solution certifies membership, and for members whose
//! cofactors fit under the bound it never misses.

use std::collections::BTreeMap;

use super::encode_generic;
use crate::linalg::Echelon;
use crate::poly::{Monomial, Polynomial};
use crate::vecfield::PolyVectorField;

/// Cofactors of degree at most `bound` expressing `x` in terms of `generators`.
pub fn truncated_membership(generators: &[PolyVectorField], x: &PolyVectorField, bound: u32) -> Option<Vec<Polynomial>> {
    let n = x.nvars();
    let mut keys = BTreeMap::new();
    let mut e = Echelon::tracking();
    let mut unknowns = Vec::new();
    for d in 0..=bound {
        for mu in Monomial::all_of_degree(n, d) {
            for (j, g) in generators.iter().enumerate() {
                e.insert(encode_generic(&g.mul_monomial(&mu), &mut keys));
                unknowns.push((j, mu.clone()));
            }
        }
    }
    let target = encode_generic(x, &mut keys);
    let sol = e.solve(&target)?;
    let mut cof = vec![Polynomial::zero(n); generators.len()];
    for (u, c) in sol.entries() {
        let (j, mu) = &unknowns[*u];
        cof[*j].add_term(mu.clone(), c.clone());
    }
    Some(cof)
}
