//! Holonomy invariants at the origin: the isotropy algebra `g = F / mF`,
//! its filtration by vanishing order, the linear and semisimple quotients,
//! and degree-capped Artin-Rees bounds.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::liealg::{levi_subalgebra, LeviData, LieAlgebra, Quotient, Subspace, Vector};
use crate::linalg::dense::{self, Matrix};
use crate::linalg::{Echelon, SparseVec};
use crate::modalg::{encode_generic, FoliationModule, Involutivity};
use crate::poly::{default_names, Monomial, Rational};
use crate::vecfield::PolyVectorField;

/// Default degree cap: twice the largest generator degree, plus two.
pub fn default_cap(f: &FoliationModule) -> u32 {
    2 * f.max_degree() + 2
}

#[derive(Clone, Debug)]
pub struct IsotropyData {
    pub algebra: LieAlgebra,
    /// One generator of `F` per basis class.
    pub representatives: Vec<PolyVectorField>,
    /// Positions of the representatives among the module generators.
    pub representative_indices: Vec<usize>,
    /// `dim g × #generators`: column `j` holds the class of generator `j`.
    pub generator_classes: Matrix,
    /// Linear parts of the representatives (matrices on coordinate functions).
    pub linearization: Vec<Matrix>,
    /// `g^0 ⊇ g^1 ⊇ ... ⊇ g^N`
    pub filtration: Vec<Subspace>,
    /// `g / g^2`
    pub lin: Quotient,
    /// Realization of the `g / g^2` basis by linear parts.
    pub lin_matrices: Vec<Matrix>,
    pub radical: Subspace,
    /// `g / rad(g)`
    pub ss: Quotient,
    /// `dim g^s × dim g^lin`, the factorization of `g → g^s` through `g^lin`.
    pub lin_to_ss: Matrix,
    ideal_module: FoliationModule,
    class_keys: BTreeMap<(usize, Monomial), usize>,
    class_basis: Echelon,
}

impl IsotropyData {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `mF`, the module the isotropy algebra is a quotient by.
    pub fn ideal_module(&self) -> &FoliationModule {
        &self.ideal_module
    }

    /// Class in `g` of an element of `F`.
    pub fn class_of(&self, x: &PolyVectorField) -> Result<Vector> {
        let nf = self.ideal_module.normal_form(x);
        let mut keys = self.class_keys.clone();
        let v = encode_generic(&nf, &mut keys);
        self.class_basis
            .solve(&v)
            .map(|c| c.to_dense(self.dim()))
            .ok_or_else(|| Error::internal("field has no class in the isotropy algebra"))
    }

    /// Class in `g` of an element of `F` described by the constant parts
    /// of its cofactors.
    pub fn class_of_tags(&self, tags: &[Rational]) -> Vector {
        dense::mul_vec(&self.generator_classes, tags)
    }

    /// A field of `F` in the given class (combination of representatives).
    pub fn realize(&self, class: &[Rational]) -> PolyVectorField {
        let n = self.ideal_module.nvars();
        let mut out = PolyVectorField::zero(n);
        for (c, r) in class.iter().zip(&self.representatives) {
            if !c.is_zero() {
                out = &out + &r.scale(c);
            }
        }
        out
    }

    /// Linear part of an element with the given class.
    pub fn linearize_class(&self, class: &[Rational]) -> Matrix {
        let n = self.ideal_module.nvars();
        let mut m = dense::zeros(n, n);
        for (c, l) in class.iter().zip(&self.linearization) {
            if c.is_zero() {
                continue;
            }
            for (row, lrow) in m.iter_mut().zip(l) {
                for (a, b) in row.iter_mut().zip(lrow) {
                    *a += c * b;
                }
            }
        }
        m
    }

    /// `g^i`, zero past the computed range.
    pub fn filtration_piece(&self, i: usize) -> Subspace {
        self.filtration
            .get(i)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.dim()))
    }

    /// First `i` with `g^i = 0`, if reached inside the computed range.
    pub fn vanishing_index(&self) -> Option<usize> {
        self.filtration.iter().position(|s| s.dim() == 0)
    }

    /// Levi decomposition of `g` itself.
    pub fn levi(&self) -> Result<LeviData> {
        levi_subalgebra(&self.algebra)
    }
}

/// Builds `g = F / mF` with all derived data, checking every invariant.
pub fn isotropy_algebra(f: &FoliationModule) -> Result<IsotropyData> {
    isotropy_algebra_to(f, default_cap(f))
}

/// As [`isotropy_algebra`], computing the filtration through degree `cap`.
pub fn isotropy_algebra_to(f: &FoliationModule, cap: u32) -> Result<IsotropyData> {
    if let Involutivity::Witness { i, j, bracket, .. } = f.check_involutive()? {
        return Err(Error::NotInvolutive {
            i,
            j,
            bracket: bracket.render(&default_names(f.nvars())),
        });
    }
    let gens = f.generators();
    let mf = f.multiply_by_ideal_power(1);
    let nfs: Vec<PolyVectorField> = gens.iter().map(|g| mf.normal_form(g)).collect();

    let mut keys = BTreeMap::new();
    let mut probe = Echelon::new();
    let mut indices = Vec::new();
    for (j, nf) in nfs.iter().enumerate() {
        if matches!(probe.insert(encode_generic(nf, &mut keys)), crate::linalg::Insertion::Pivot(_)) {
            indices.push(j);
        }
    }
    let dim = indices.len();
    let mut class_basis = Echelon::tracking();
    for &j in &indices {
        class_basis.insert(encode_generic(&nfs[j], &mut keys));
    }
    let representatives: Vec<PolyVectorField> = indices.iter().map(|&j| gens[j].clone()).collect();
    let solve = |nf: &PolyVectorField| -> Result<Vector> {
        let mut k = keys.clone();
        let v = encode_generic(nf, &mut k);
        class_basis
            .solve(&v)
            .map(|c| c.to_dense(dim))
            .ok_or_else(|| Error::internal("normal form outside the span of the class basis"))
    };
    let class_cols: Vec<Vector> = nfs.iter().map(solve).collect::<Result<_>>()?;
    let generator_classes = if dim == 0 {
        Vec::new()
    } else {
        dense::transpose(&class_cols)
    };

    let mut table = vec![vec![vec![Rational::zero(); dim]; dim]; dim];
    for a in 0..dim {
        for b in a + 1..dim {
            let br = representatives[a].bracket(&representatives[b]);
            let c = solve(&mf.normal_form(&br))?;
            let mut rest = br.clone();
            for (k, ck) in c.iter().enumerate() {
                if !ck.is_zero() {
                    rest = &rest - &representatives[k].scale(ck);
                }
            }
            if !mf.contains(&rest)? {
                return Err(Error::internal(format!("bracket of representatives {a}, {b} misses its class")));
            }
            table[b][a] = c.iter().map(|x| -x).collect();
            table[a][b] = c;
        }
    }
    let algebra = LieAlgebra::new(table).map_err(|e| Error::internal(format!("isotropy bracket: {e}")))?;
    let linearization: Vec<Matrix> = representatives.iter().map(|r| r.linear_matrix()).collect();

    let filtration = filtration_from_jets(f, &generator_classes, dim, cap);
    check_filtration_law(&algebra, &filtration)?;
    if filtration.len() > 1 && filtration[1].dim() != dim {
        return Err(Error::internal("g^1 differs from g"));
    }

    let g2 = filtration
        .get(2)
        .cloned()
        .unwrap_or_else(|| Subspace::zero(dim));
    let lin_kernel = Subspace::from_vectors(dim, dense::nullspace(&linear_map_matrix(&linearization, f.nvars()), dim));
    if lin_kernel != g2 {
        return Err(Error::internal("kernel of the linearization differs from g^2"));
    }
    if !algebra.is_nilpotent_subspace(&g2) {
        return Err(Error::internal("g^2 is not nilpotent"));
    }
    let lin = algebra.quotient(&g2)?;
    let lin_matrices: Vec<Matrix> = (0..lin.algebra.dim())
        .map(|a| {
            let e: Vector = (0..lin.algebra.dim()).map(|b| if a == b { Rational::from_integer(1.into()) } else { Rational::zero() }).collect();
            combine(&linearization, &lin.lift_vec(&e), f.nvars())
        })
        .collect();
    let radical = algebra.solvable_radical()?;
    if !g2.is_subspace_of(&radical) {
        return Err(Error::internal("g^2 is not inside the radical"));
    }
    let ss = algebra.quotient(&radical)?;
    if !ss.algebra.is_semisimple() {
        return Err(Error::internal("quotient by the radical is not semisimple"));
    }
    let lin_to_ss = if ss.algebra.dim() == 0 || lin.algebra.dim() == 0 {
        dense::zeros(ss.algebra.dim(), lin.algebra.dim())
    } else {
        dense::mul(&ss.projection, &lin.lift)
    };
    if dim > 0 && ss.algebra.dim() > 0 && dense::mul(&lin_to_ss, &lin.projection) != ss.projection {
        return Err(Error::internal("g → g^lin → g^s does not commute"));
    }
    Ok(IsotropyData {
        algebra,
        representatives,
        representative_indices: indices,
        generator_classes,
        linearization,
        filtration,
        lin,
        lin_matrices,
        radical,
        ss,
        lin_to_ss,
        ideal_module: mf,
        class_keys: keys,
        class_basis,
    })
}

fn combine(ms: &[Matrix], coeffs: &[Rational], n: usize) -> Matrix {
    let mut out = dense::zeros(n, n);
    for (c, m) in coeffs.iter().zip(ms) {
        if c.is_zero() {
            continue;
        }
        for (row, mrow) in out.iter_mut().zip(m) {
            for (a, b) in row.iter_mut().zip(mrow) {
                *a += c * b;
            }
        }
    }
    out
}

/// Matrix of `g → gl_n` with the `n²` entries flattened as rows.
fn linear_map_matrix(lins: &[Matrix], n: usize) -> Matrix {
    (0..n * n)
        .map(|e| lins.iter().map(|m| m[e / n][e % n].clone()).collect())
        .collect()
}

fn filtration_from_jets(f: &FoliationModule, classes: &Matrix, dim: usize, cap: u32) -> Vec<Subspace> {
    if dim == 0 {
        return vec![Subspace::zero(0); cap as usize + 1];
    }
    let js = f.jet_space(cap, true);
    (0..=cap)
        .map(|i| {
            Subspace::from_vectors(
                dim,
                js.rows_from_degree(i)
                    .into_iter()
                    .map(|r| dense::mul_vec(classes, &js.tags_of(r))),
            )
        })
        .collect()
}

fn check_filtration_law(g: &LieAlgebra, filtration: &[Subspace]) -> Result<()> {
    let last = filtration.len();
    for i in 1..last {
        for j in i..last {
            let target = i + j - 1;
            if target >= last {
                continue;
            }
            if !g.bracket_span(&filtration[i], &filtration[j]).is_subspace_of(&filtration[target]) {
                return Err(Error::internal(format!("[g^{i}, g^{j}] is not inside g^{target}")));
            }
        }
        if !filtration[i].is_subspace_of(&filtration[i - 1]) {
            return Err(Error::internal(format!("g^{i} is not inside g^{}", i - 1)));
        }
    }
    Ok(())
}

/// `g^0 ⊇ ... ⊇ g^cap`, with the first index where the filtration vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration {
    pub pieces: Vec<Subspace>,
    pub vanishes_at: Option<usize>,
}

pub fn holonomy_filtration(f: &FoliationModule, iso: &IsotropyData, cap: u32) -> Result<Filtration> {
    let pieces = filtration_from_jets(f, &iso.generator_classes, iso.dim(), cap);
    check_filtration_law(&iso.algebra, &pieces)?;
    let vanishes_at = pieces.iter().position(|s| s.dim() == 0);
    Ok(Filtration { pieces, vanishes_at })
}

/// `g^lin = g / g^2` with its realization by linear fields.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearHolonomy {
    pub algebra: LieAlgebra,
    pub matrices: Vec<Matrix>,
    pub projection: Matrix,
}

pub fn linear_holonomy(iso: &IsotropyData) -> LinearHolonomy {
    LinearHolonomy {
        algebra: iso.lin.algebra.clone(),
        matrices: iso.lin_matrices.clone(),
        projection: iso.lin.projection.clone(),
    }
}

/// `g^s = g / rad(g)` with projections from `g` and from `g^lin`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemisimpleHolonomy {
    pub algebra: LieAlgebra,
    pub from_isotropy: Matrix,
    pub from_linear: Matrix,
}

pub fn semisimple_holonomy(iso: &IsotropyData) -> SemisimpleHolonomy {
    SemisimpleHolonomy {
        algebra: iso.ss.algebra.clone(),
        from_isotropy: iso.ss.projection.clone(),
        from_linear: iso.lin_to_ss.clone(),
    }
}

/// Element of `F ∩ m^c X` that is not in `mF`.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundWitness {
    pub field: PolyVectorField,
    /// Normal form modulo `mF`; nonzero.
    pub remainder: PolyVectorField,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArtinReesCertificate {
    pub bound: u32,
    pub checked_up_to: u32,
    pub witness_lower: Option<LowerBoundWitness>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ArtinReesOutcome {
    Certified(ArtinReesCertificate),
    Unbounded { checked_up_to: u32 },
}

impl ArtinReesOutcome {
    pub fn bound(&self) -> Option<u32> {
        match self {
            ArtinReesOutcome::Certified(c) => Some(c.bound),
            ArtinReesOutcome::Unbounded { .. } => None,
        }
    }
}

/// Smallest `c` with `F ∩ m^d X = m^(d−c) (F ∩ m^c X)` on `N`-jets for
/// every `c < d ≤ N`.
pub fn artin_rees_certify(f: &FoliationModule, cap: u32) -> Result<ArtinReesOutcome> {
    let js = f.jet_space(cap, false);
    let idx = js.index();
    let n = f.nvars();
    let jet_rows = |d: u32| -> Vec<SparseVec> { js.rows_from_degree(d).into_iter().cloned().collect() };
    for c in 1..cap {
        let mut current = Echelon::from_vectors(jet_rows(c));
        let mut holds = true;
        for d in c + 1..=cap {
            let mut next = Echelon::new();
            for row in current.basis() {
                let field = idx.decode(row);
                for i in 0..n {
                    let prod = field.mul_monomial(&Monomial::var(n, i)).truncate(cap);
                    next.insert(idx.encode(&prod));
                }
            }
            if jet_rows(d).iter().any(|r| !next.contains(r)) {
                holds = false;
                break;
            }
            current = next;
        }
        if holds {
            let witness_lower = if c > 1 { Some(lower_bound_witness(f, c)?) } else { None };
            return Ok(ArtinReesOutcome::Certified(ArtinReesCertificate {
                bound: c,
                checked_up_to: cap,
                witness_lower,
            }));
        }
    }
    Ok(ArtinReesOutcome::Unbounded { checked_up_to: cap })
}

/// Some element of `F ∩ m^c X` outside `mF`. Generators and homogeneous
/// components of generators are tried first; otherwise an element is
/// rebuilt from the jet rows.
fn lower_bound_witness(f: &FoliationModule, c: u32) -> Result<LowerBoundWitness> {
    let mf = f.multiply_by_ideal_power(1);
    let mut candidates: Vec<PolyVectorField> = f.generators().to_vec();
    for g in f.generators() {
        for (_, h) in g.homogeneous_components() {
            candidates.push(h);
        }
    }
    for x in candidates {
        if !x.vanishing_order().at_least(c) || !f.contains(&x)? {
            continue;
        }
        let remainder = mf.normal_form(&x);
        if !remainder.is_zero() {
            return Ok(LowerBoundWitness { field: x, remainder });
        }
    }
    // general case: combinations μ·g_j whose c-jet vanishes
    let gens = f.generators();
    let n = f.nvars();
    let idx = crate::modalg::JetIndex::new(n, c - 1);
    let mut inputs = Vec::new();
    let mut e = Echelon::tracking();
    let mut kernel = Vec::new();
    for d in 0..c {
        for mu in Monomial::all_of_degree(n, d) {
            for g in gens {
                let p = g.mul_monomial(&mu);
                if let crate::linalg::Insertion::Dependent(k) = e.insert(idx.encode(&p.truncate(c - 1))) {
                    kernel.push(k);
                }
                inputs.push(p);
            }
        }
    }
    for k in kernel {
        let mut x = PolyVectorField::zero(n);
        for (i, coef) in k.entries() {
            x = &x + &inputs[*i].scale(coef);
        }
        let remainder = mf.normal_form(&x);
        if !x.is_zero() && !remainder.is_zero() {
            return Ok(LowerBoundWitness { field: x, remainder });
        }
    }
    Err(Error::internal_at(c, "no lower-bound witness found"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, Polynomial};

    fn v(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    fn circles() -> FoliationModule {
        FoliationModule::new(vec![PolyVectorField::new(vec![-&v(2, 1), v(2, 0)]).unwrap()]).unwrap()
    }

    fn sl2() -> FoliationModule {
        let n = 2;
        FoliationModule::new(vec![
            PolyVectorField::basis(1, v(n, 0)),
            PolyVectorField::basis(0, v(n, 1)),
            &PolyVectorField::basis(0, v(n, 0)) - &PolyVectorField::basis(1, v(n, 1)),
        ])
        .unwrap()
    }

    fn x2dx() -> FoliationModule {
        FoliationModule::new(vec![PolyVectorField::basis(0, &v(1, 0) * &v(1, 0))]).unwrap()
    }

    #[test]
    fn isotropy_examples() {
        let c = isotropy_algebra(&circles()).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.algebra.is_abelian());
        assert_eq!(c.ss.algebra.dim(), 0);

        let s = isotropy_algebra(&sl2()).unwrap();
        assert_eq!(s.dim(), 3);
        assert!(s.algebra.is_semisimple());
        assert_eq!(s.filtration_piece(2).dim(), 0);

        let q = isotropy_algebra(&x2dx()).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(q.filtration_piece(2).dim(), 1);
        assert_eq!(q.filtration_piece(3).dim(), 0);
        assert_eq!(q.lin.algebra.dim(), 0);
    }

    #[test]
    fn non_involutive_input_is_rejected() {
        let n = 2;
        let f = FoliationModule::new(vec![PolyVectorField::basis(1, v(n, 0)), PolyVectorField::basis(0, v(n, 1))]).unwrap();
        assert!(matches!(isotropy_algebra(&f), Err(Error::NotInvolutive { i: 0, j: 1, .. })));
    }

    #[test]
    fn linear_holonomy_examples() {
        let c = linear_holonomy(&isotropy_algebra(&circles()).unwrap());
        assert_eq!(c.algebra.dim(), 1);
        let m = &c.matrices[0];
        assert_eq!(m[0][0], rat(0));
        assert_eq!(m[1][1], rat(0));
        assert_eq!(&m[0][1], &-m[1][0].clone());
        assert_ne!(m[0][1], rat(0));

        let s = linear_holonomy(&isotropy_algebra(&sl2()).unwrap());
        assert_eq!(s.algebra.dim(), 3);
        for m in &s.matrices {
            assert_eq!(dense::trace(m), rat(0));
        }
    }

    #[test]
    fn artin_rees_simple() {
        let f = FoliationModule::new(vec![PolyVectorField::basis(0, v(1, 0))]).unwrap();
        assert_eq!(artin_rees_certify(&f, 4).unwrap().bound(), Some(1));
        assert_eq!(artin_rees_certify(&x2dx(), 6).unwrap().bound(), Some(2));
        assert_eq!(artin_rees_certify(&circles(), 4).unwrap().bound(), Some(1));
    }
}
