//! Formal Levi connections at the origin.
//!
//! A connection is a linear map `s` from the semisimple holonomy algebra
//! `g^s` into jets of `F`, together with a field `E` whose linear part is
//! the Euler field. Starting from a section of the linear holonomy, the
//! degree-`k` defects of `[s(ξ), E] = 0` are removed one degree at a time:
//! first by correcting `E` (a coboundary solve in `H_k / W_k`), then by
//! adding an element of `F ∩ m^k X` to each `s(ξ)`. Flatness of `s` at the
//! next order follows and is checked.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::holonomy::IsotropyData;
use crate::liealg::{levi_section, Cochain, LieAlgebra, Representation, Subspace, Vector};
use crate::linalg::dense::{self, Matrix};
use crate::linalg::{Echelon, QuotientSpace, SparseVec};
use crate::modalg::{FoliationModule, Involutivity, JetSpace};
use crate::poly::{default_names, Rational};
use crate::vecfield::PolyVectorField;

/// A field known modulo terms of degree above `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct JetField {
    field: PolyVectorField,
    order: u32,
}

impl JetField {
    pub fn new(field: &PolyVectorField, order: u32) -> Self {
        JetField {
            field: field.truncate(order),
            order,
        }
    }

    pub fn field(&self) -> &PolyVectorField {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Bracket of jets; exact up to `order` because both vanish at the origin.
    pub fn bracket(&self, other: &JetField) -> JetField {
        let order = self.order.min(other.order);
        JetField::new(&self.field.bracket(&other.field), order)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeviConnection {
    pub semisimple: LieAlgebra,
    /// `s(ξ)` for each basis element of `g^s`.
    pub images: Vec<JetField>,
    pub euler: JetField,
    /// Linearity and flatness defects vanish to this order.
    pub certified_order: u32,
    /// Classes in the isotropy algebra of the elements of `F` whose jets are
    /// the images. Empty when the connection was not built from `F`.
    pub classes: Vec<Vector>,
}

impl LeviConnection {
    pub fn order(&self) -> u32 {
        self.euler.order
    }

    pub fn nvars(&self) -> usize {
        self.euler.field.nvars()
    }

    /// `s(x)` for an arbitrary element of `g^s`.
    pub fn image_of(&self, x: &[Rational]) -> PolyVectorField {
        let mut out = PolyVectorField::zero(self.nvars());
        for (c, s) in x.iter().zip(&self.images) {
            if !c.is_zero() {
                out = &out + &s.field.scale(c);
            }
        }
        out
    }

    /// `[s(ξ), E]`
    pub fn linearity_defect(&self, xi: usize) -> PolyVectorField {
        self.images[xi].bracket(&self.euler).field
    }

    /// `[s(ξ), s(ζ)] − s([ξ, ζ])`
    pub fn curvature(&self, xi: usize, zeta: usize) -> PolyVectorField {
        let b = self.images[xi].bracket(&self.images[zeta]).field;
        &b - &self.image_of(self.semisimple.constant(xi, zeta)).truncate(self.order())
    }

    /// Smallest vanishing order over all linearity defects, capped at the jet order + 1.
    fn linearity_order(&self) -> u32 {
        let cap = self.order() + 1;
        (0..self.images.len())
            .map(|i| self.linearity_defect(i).vanishing_order().finite().unwrap_or(cap).min(cap))
            .min()
            .unwrap_or(cap)
    }

    fn flatness_order(&self) -> u32 {
        let cap = self.order() + 1;
        let m = self.images.len();
        (0..m)
            .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
            .map(|(a, b)| self.curvature(a, b).vanishing_order().finite().unwrap_or(cap).min(cap))
            .min()
            .unwrap_or(cap)
    }

    /// Map `g^s → g` given by the tracked classes (`dim g × dim g^s`).
    pub fn isotropy_section(&self) -> Option<Matrix> {
        if self.classes.len() != self.images.len() || self.classes.is_empty() {
            return None;
        }
        Some(dense::transpose(&self.classes))
    }
}

/// `s⁰` from a Lie section of `g^lin → g^s`, with `E⁰` the Euler field.
pub fn initial_connection(f: &FoliationModule, iso: &IsotropyData, order: u32) -> Result<LeviConnection> {
    let n = f.nvars();
    let ss = &iso.ss.algebra;
    let lin = &iso.lin;
    let z = levi_section(&lin.algebra, &iso.lin_to_ss, ss)?;
    let mut images = Vec::new();
    let mut classes = Vec::new();
    for xi in 0..ss.dim() {
        let zcol: Vector = z.iter().map(|r| r[xi].clone()).collect();
        let class = lin.lift_vec(&zcol);
        images.push(JetField::new(&iso.realize(&class), order));
        classes.push(class);
    }
    let conn = LeviConnection {
        semisimple: ss.clone(),
        images,
        euler: JetField::new(&PolyVectorField::euler(n), order),
        certified_order: 2.min(order),
        classes,
    };
    if conn.linearity_order() < conn.certified_order || conn.flatness_order() < conn.certified_order {
        return Err(Error::internal_at(1, "initial connection is not linear and flat to order 2"));
    }
    Ok(conn)
}

/// `V^k = H_k / W_k` with the action of `g^s` through the connection.
struct DegreeModule<'a> {
    js: &'a JetSpace,
    degree: u32,
    space: QuotientSpace,
    offset: usize,
}

impl<'a> DegreeModule<'a> {
    fn new(js: &'a JetSpace, degree: u32) -> Self {
        let range = js.index().degree_range(degree);
        let offset = range.start;
        let w = js
            .leading_space(degree)
            .into_iter()
            .map(|x| js.index().encode(&x).remap(|c| c - offset));
        let space = QuotientSpace::new(range.clone().map(|c| SparseVec::unit(c - offset)), w);
        DegreeModule {
            js,
            degree,
            space,
            offset,
        }
    }

    fn coords(&self, x: &PolyVectorField) -> Vector {
        let v = self.js.index().encode(&x.homogeneous_part(self.degree)).remap(|c| c - self.offset);
        self.space.coords(&v)
    }

    fn lift(&self, v: &[Rational]) -> PolyVectorField {
        self.js.index().decode(&self.space.lift(v).remap(|c| c + self.offset))
    }

    fn representation(&self, conn: &LeviConnection) -> Result<Representation> {
        let dim = self.space.dim();
        let action: Vec<Matrix> = conn
            .images
            .iter()
            .map(|s| {
                let cols: Vec<Vector> = (0..dim)
                    .map(|b| {
                        let mut e = vec![Rational::zero(); dim];
                        e[b] = Rational::one();
                        self.coords(&s.field.bracket(&self.lift(&e)))
                    })
                    .collect();
                if dim == 0 {
                    Vec::new()
                } else {
                    dense::transpose(&cols)
                }
            })
            .collect();
        Representation::new(conn.semisimple.clone(), dim, action)
            .map_err(|e| Error::internal_at(self.degree, format!("degree module: {e}")))
    }
}

/// One order of normalization: `(Lin^k, Flat^k) → (Lin^{k+1}, Flat^{k+1})`.
pub fn improve_step(conn: &LeviConnection, f: &FoliationModule, iso: &IsotropyData) -> Result<LeviConnection> {
    let k = conn.certified_order;
    let order = conn.order();
    if k < 2 {
        return Err(Error::InvalidInput("improve_step needs a connection certified to order 2".into()));
    }
    if k >= order + 1 {
        return Ok(conn.clone());
    }
    if conn.images.is_empty() {
        let mut out = conn.clone();
        out.certified_order = k + 1;
        return Ok(out);
    }
    let js = f.jet_space(order, true);
    let module = DegreeModule::new(&js, k);
    let rep = module.representation(conn)?;
    let m = conn.images.len();

    // defect cocycle and the correction of E
    let defect: Vec<Vector> = (0..m).map(|xi| module.coords(&conn.linearity_defect(xi))).collect();
    let cocycle = Cochain::from_linear(defect, module.space.dim());
    let primitive = rep.ce_solve(&cocycle).map_err(|e| e.at_degree(k))?;
    let eps = module.lift(primitive.value(&[]));
    let euler = JetField::new(&(&conn.euler.field - &eps), order);

    // corrections of s inside F ∩ m^k X
    let scale = Rational::new(1.into(), (k as i64 - 1).into());
    let mut images = Vec::with_capacity(m);
    let mut classes = Vec::with_capacity(m);
    for xi in 0..m {
        let w = conn.images[xi].bracket(&euler).field.homogeneous_part(k);
        let row = js
            .lift_leading(&w, k)
            .ok_or_else(|| Error::internal_at(k, "degree-k defect is not the leading part of an element of F"))?;
        let sigma = js.index().decode(&row);
        if !js.contains(&sigma) {
            return Err(Error::internal_at(k, "correction is not a jet of F"));
        }
        images.push(JetField::new(&(&conn.images[xi].field + &sigma.scale(&scale)), order));
        if let Some(c) = conn.classes.get(xi) {
            let dc = iso.class_of_tags(&js.tags_of(&row));
            classes.push(c.iter().zip(&dc).map(|(a, b)| a + b * &scale).collect());
        }
    }
    let out = LeviConnection {
        semisimple: conn.semisimple.clone(),
        images,
        euler,
        certified_order: k + 1,
        classes,
    };
    if out.linearity_order() < k + 1 {
        return Err(Error::internal_at(k, "linearity defect survives the correction"));
    }
    if out.flatness_order() < k + 1 {
        return Err(Error::internal_at(k, "linear to the next order but not flat"));
    }
    Ok(out)
}

/// Connection linear and flat to order `order` (jets truncated at `order`).
pub fn linearize(f: &FoliationModule, iso: &IsotropyData, order: u32) -> Result<LeviConnection> {
    let order = order.max(2);
    let mut conn = initial_connection(f, iso, order)?;
    for k in 2..order {
        debug_assert_eq!(conn.certified_order, k);
        conn = improve_step(&conn, f, iso).map_err(|e| e.at_degree(k))?;
    }
    Ok(conn)
}

/// Per-degree dimensions of the defect spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectRow {
    pub degree: u32,
    pub linearity: usize,
    pub flatness: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectReport {
    pub rows: Vec<DefectRow>,
}

impl DefectReport {
    /// First degree with a nonzero defect.
    pub fn first_nonzero(&self) -> Option<u32> {
        self.rows
            .iter()
            .find(|r| r.linearity > 0 || r.flatness > 0)
            .map(|r| r.degree)
    }

    pub fn all_zero_through(&self, d: u32) -> bool {
        self.rows
            .iter()
            .filter(|r| r.degree <= d)
            .all(|r| r.linearity == 0 && r.flatness == 0)
    }
}

/// Defect dimensions for degrees `1..=order`.
pub fn verify_connection(conn: &LeviConnection, order: u32) -> DefectReport {
    let order = order.min(conn.order());
    let m = conn.images.len();
    let lin: Vec<PolyVectorField> = (0..m).map(|i| conn.linearity_defect(i)).collect();
    let curv: Vec<PolyVectorField> = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .map(|(a, b)| conn.curvature(a, b))
        .collect();
    let n = conn.nvars();
    let idx = crate::modalg::JetIndex::new(n, order);
    let rank = |fields: &[PolyVectorField], d: u32| {
        Echelon::from_vectors(fields.iter().map(|x| idx.encode(&x.homogeneous_part(d)))).rank()
    };
    DefectReport {
        rows: (1..=order)
            .map(|d| DefectRow {
                degree: d,
                linearity: rank(&lin, d),
                flatness: rank(&curv, d),
            })
            .collect(),
    }
}

/// Image check: every `s(ξ)` is the jet of an element of `F`.
pub fn images_in_module(conn: &LeviConnection, f: &FoliationModule) -> bool {
    let js = f.jet_space(conn.order(), false);
    conn.images.iter().all(|s| js.contains(&s.field))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadicalDegree {
    pub degree: u32,
    pub module: usize,
    pub levi_span: usize,
    pub radical: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadicalFoliation {
    /// Generators of the radical module (those of `mF` plus representatives
    /// of the radical of `g`).
    pub generators: Vec<PolyVectorField>,
    pub per_degree: Vec<RadicalDegree>,
    pub invariant: bool,
    /// `true` when the connection is certified below the requested order.
    pub degraded: bool,
}

/// Radical module `R = ker(F → g^s)` and the jet decomposition
/// `F = s(g^s) ⊕ R` in every degree up to `order`.
pub fn radical_foliation(
    f: &FoliationModule,
    iso: &IsotropyData,
    conn: &LeviConnection,
    order: u32,
) -> Result<RadicalFoliation> {
    let order = order.min(conn.order());
    let mut generators: Vec<PolyVectorField> = iso.ideal_module().generators().to_vec();
    for r in iso.radical.basis() {
        generators.push(iso.realize(r));
    }
    let r_module = FoliationModule::new(generators.clone())?;
    let rjs = r_module.jet_space(order, false);
    let fjs = f.jet_space(order, false);
    let idx = fjs.index();
    let s_vecs: Vec<SparseVec> = conn.images.iter().map(|s| idx.encode(&s.field)).collect();

    let mut per_degree = Vec::new();
    for d in 1..=order {
        let keep = |c: usize| idx.degree_of(c) <= d;
        let s_dim = Echelon::from_vectors(s_vecs.iter().map(|v| v.filter(keep))).rank();
        let r_dim = rjs.truncation_dim(d);
        let f_dim = fjs.truncation_dim(d);
        let mut both = Echelon::from_vectors(rjs.echelon().basis().into_iter().map(|v| v.filter(keep)));
        let mut independent = true;
        for v in &s_vecs {
            if let crate::linalg::Insertion::Dependent(_) = both.insert(v.filter(keep)) {
                independent = false;
            }
        }
        if f_dim != s_dim + r_dim || !independent || s_dim != conn.images.len() {
            return Err(Error::internal_at(d, "Levi image and radical module do not split the jets of F"));
        }
        per_degree.push(RadicalDegree {
            degree: d,
            module: f_dim,
            levi_span: s_dim,
            radical: r_dim,
        });
    }
    let invariant = conn.images.iter().all(|s| {
        r_module
            .generators()
            .iter()
            .all(|r| rjs.contains(&s.field.bracket(&r.truncate(order)).truncate(order)))
    });
    if !invariant {
        return Err(Error::internal("radical module is not invariant under the Levi image"));
    }
    Ok(RadicalFoliation {
        generators: r_module.generators().to_vec(),
        per_degree,
        invariant,
        degraded: conn.certified_order < order,
    })
}

/// Module generated by a linear action together with an invariant module
/// meeting it trivially.
pub fn semidirect_product(linear_action: &[PolyVectorField], radical: &[PolyVectorField]) -> Result<FoliationModule> {
    let names = |x: &PolyVectorField| x.render(&default_names(x.nvars()));
    if radical.is_empty() && linear_action.is_empty() {
        return Err(Error::NoGenerators);
    }
    for a in linear_action {
        if !a.is_homogeneous_of_degree(1) {
            return Err(Error::InvalidInput(format!("action field {} is not linear", names(a))));
        }
    }
    let nvars = linear_action.first().or(radical.first()).unwrap().nvars();
    let idx = crate::modalg::JetIndex::new(nvars, 1);
    let span = Echelon::from_vectors(linear_action.iter().map(|a| idx.encode(a)));
    for i in 0..linear_action.len() {
        for j in i + 1..linear_action.len() {
            let b = linear_action[i].bracket(&linear_action[j]);
            if !span.contains(&idx.encode(&b)) {
                return Err(Error::ActionNotClosed { i, j });
            }
        }
    }
    if radical.is_empty() {
        return FoliationModule::new(linear_action.to_vec());
    }
    let r = FoliationModule::new(radical.to_vec())?;
    for (ai, a) in linear_action.iter().enumerate() {
        for (ri, g) in radical.iter().enumerate() {
            let b = a.bracket(g);
            if !r.contains(&b)? {
                return Err(Error::NotInvariant {
                    action: ai,
                    radical: ri,
                    bracket: names(&b),
                });
            }
        }
    }
    // linear parts of R against the span of the action
    let r_lin = Subspace::from_vectors(
        idx.len(),
        r.jet_space(1, false)
            .echelon()
            .basis()
            .into_iter()
            .map(|v| v.to_dense(idx.len())),
    );
    let a_span = Subspace::from_vectors(idx.len(), linear_action.iter().map(|a| idx.encode(a).to_dense(idx.len())));
    let meet = a_span.intersection(&r_lin);
    if let Some(w) = meet.basis().first() {
        return Err(Error::NontrivialIntersection {
            witness: names(&idx.decode(&SparseVec::from_dense(w))),
        });
    }
    let mut gens = linear_action.to_vec();
    gens.extend_from_slice(radical);
    let f = FoliationModule::new(gens)?;
    if let Involutivity::Witness { i, j, bracket, .. } = f.check_involutive()? {
        return Err(Error::NotInvolutive {
            i,
            j,
            bracket: names(&bracket),
        });
    }
    Ok(f)
}

/// Checks that a map `g^s → g` is a Lie section of the projection.
pub fn check_isotropy_section(iso: &IsotropyData, section: &Matrix) -> bool {
    let g = &iso.algebra;
    let q = &iso.ss.algebra;
    let m = q.dim();
    if m == 0 {
        return true;
    }
    let col = |a: usize| -> Vector { section.iter().map(|r| r[a].clone()).collect() };
    if dense::mul(&iso.ss.projection, section) != dense::identity(m) {
        return false;
    }
    for a in 0..m {
        for b in a + 1..m {
            if g.bracket(&col(a), &col(b)) != dense::mul_vec(section, q.constant(a, b)) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::isotropy_algebra;
    use crate::poly::Polynomial;

    fn v(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    fn sl2_fields() -> Vec<PolyVectorField> {
        let n = 2;
        vec![
            PolyVectorField::basis(1, v(n, 0)),
            PolyVectorField::basis(0, v(n, 1)),
            &PolyVectorField::basis(0, v(n, 0)) - &PolyVectorField::basis(1, v(n, 1)),
        ]
    }

    #[test]
    fn sl2_is_already_linear() {
        let f = FoliationModule::new(sl2_fields()).unwrap();
        let iso = isotropy_algebra(&f).unwrap();
        let c = initial_connection(&f, &iso, 5).unwrap();
        assert!(verify_connection(&c, 5).all_zero_through(5));
        let l = linearize(&f, &iso, 5).unwrap();
        assert_eq!(l.certified_order, 5);
        assert_eq!(l.images, c.images);
        assert_eq!(l.euler, c.euler);
    }

    #[test]
    fn circles_have_empty_connection() {
        let f = FoliationModule::new(vec![PolyVectorField::new(vec![-&v(2, 1), v(2, 0)]).unwrap()]).unwrap();
        let iso = isotropy_algebra(&f).unwrap();
        let c = linearize(&f, &iso, 4).unwrap();
        assert!(c.images.is_empty());
        assert_eq!(c.certified_order, 4);
        let r = radical_foliation(&f, &iso, &c, 4).unwrap();
        assert!(r.per_degree.iter().all(|d| d.module == d.radical));
    }

    #[test]
    fn semidirect_examples() {
        let e = PolyVectorField::euler(2);
        let f = semidirect_product(&sl2_fields(), &[e.clone()]).unwrap();
        assert_eq!(f.generators().len(), 4);
        let only_r = semidirect_product(&[], &[e]).unwrap();
        assert_eq!(only_r.generators().len(), 1);
        let bad = semidirect_product(&sl2_fields(), &[PolyVectorField::basis(1, v(2, 0))]);
        assert!(matches!(bad, Err(Error::NotInvariant { .. })));
    }

    #[test]
    fn semidirect_rejects_overlap() {
        let h = sl2_fields()[2].clone();
        let r = h.mul_poly(&Polynomial::one(2));
        assert!(matches!(
            semidirect_product(&[h], &[r]),
            Err(Error::NontrivialIntersection { .. })
        ));
    }
}
