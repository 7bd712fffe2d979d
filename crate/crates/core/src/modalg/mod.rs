//! Finitely generated modules of polynomial vector fields vanishing at the
//! origin: membership, involutivity, graded truncations, products with
//! powers of the maximal ideal and homogeneous generators.

mod groebner;
pub mod jets;
pub mod oracle;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};


use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{default_names, format_rational, Monomial, Polynomial};
use crate::vecfield::PolyVectorField;

pub use groebner::GroebnerBasis;
pub use jets::{JetIndex, JetSpace};

/// Submodule of `Q[x]^n` generated by fields that vanish at the origin.
///
/// Generators are normalized to leading coefficient one (position over
/// term order). The Gröbner basis and jet spaces are computed lazily and
/// cached; both caches are safe to fill from several threads.
#[derive(Debug)]
pub struct FoliationModule {
    nvars: usize,
    generators: Vec<PolyVectorField>,
    groebner: OnceLock<GroebnerBasis>,
    jets: Mutex<BTreeMap<(u32, bool), Arc<JetSpace>>>,
}

impl Clone for FoliationModule {
    fn clone(&self) -> Self {
        let m = FoliationModule::from_normalized(self.nvars, self.generators.clone());
        if let Some(gb) = self.groebner.get() {
            let _ = m.groebner.set(gb.clone());
        }
        m
    }
}

impl PartialEq for FoliationModule {
    /// Equality of generator lists (not of the generated modules; see
    /// [`FoliationModule::same_module`]).
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.generators == other.generators
    }
}

/// Answer to a membership query, checked on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct MembershipCertificate {
    member: bool,
    coefficients: Vec<Polynomial>,
    remainder: Option<PolyVectorField>,
}

impl MembershipCertificate {
    /// Member certificate; fails unless `Σ c_j g_j = x` holds exactly.
    pub fn member(x: &PolyVectorField, generators: &[PolyVectorField], coefficients: Vec<Polynomial>) -> Result<Self> {
        if coefficients.len() != generators.len() {
            return Err(Error::internal("cofactor count differs from generator count"));
        }
        let mut sum = PolyVectorField::zero(x.nvars());
        for (c, g) in coefficients.iter().zip(generators) {
            sum = &sum + &g.mul_poly(c);
        }
        if &sum != x {
            return Err(Error::internal("membership cofactors do not rebuild the field"));
        }
        Ok(MembershipCertificate {
            member: true,
            coefficients,
            remainder: None,
        })
    }

    pub fn non_member(remainder: PolyVectorField) -> Self {
        MembershipCertificate {
            member: false,
            coefficients: Vec::new(),
            remainder: Some(remainder),
        }
    }

    pub fn is_member(&self) -> bool {
        self.member
    }

    /// Cofactors `c_j` with `x = Σ c_j g_j` (empty for non-members).
    pub fn coefficients(&self) -> &[Polynomial] {
        &self.coefficients
    }

    /// Normal form of the field modulo the module (non-members only).
    pub fn remainder(&self) -> Option<&PolyVectorField> {
        self.remainder.as_ref()
    }
}

/// Outcome of the bracket-closure test.
#[derive(Clone, Debug, PartialEq)]
pub enum Involutivity {
    Closed,
    Witness {
        i: usize,
        j: usize,
        bracket: PolyVectorField,
        certificate: MembershipCertificate,
    },
}

impl Involutivity {
    pub fn is_closed(&self) -> bool {
        matches!(self, Involutivity::Closed)
    }
}

/// Bases of the degree-`d` pieces attached to a module.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedTruncation {
    pub degree: u32,
    /// Degree-`d` parts of arbitrary elements of the module.
    pub truncation: Vec<PolyVectorField>,
    /// Degree-`d` parts of elements vanishing to order `d`.
    pub filtered: Vec<PolyVectorField>,
}

impl FoliationModule {
    pub fn new(generators: Vec<PolyVectorField>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::NoGenerators);
        };
        let nvars = first.nvars();
        for (index, g) in generators.iter().enumerate() {
            if g.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: g.nvars(),
                });
            }
            if !g.vanishes_at_origin() {
                let constants = g
                    .components()
                    .iter()
                    .map(|p| format_rational(&p.constant_term()))
                    .collect::<Vec<_>>()
                    .join(", ");
                return Err(Error::NotVanishing { index, constants });
            }
        }
        let gens: Vec<_> = generators.iter().filter(|g| !g.is_zero()).map(groebner::make_monic).collect();
        if gens.is_empty() {
            return Err(Error::NoGenerators);
        }
        Ok(Self::from_normalized(nvars, gens))
    }

    fn from_normalized(nvars: usize, generators: Vec<PolyVectorField>) -> Self {
        FoliationModule {
            nvars,
            generators,
            groebner: OnceLock::new(),
            jets: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[PolyVectorField] {
        &self.generators
    }

    /// Largest total degree among the generators.
    pub fn max_degree(&self) -> u32 {
        self.generators
            .iter()
            .filter_map(|g| g.degree().finite())
            .max()
            .unwrap_or(0)
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        self.groebner
            .get_or_init(|| GroebnerBasis::compute(&self.generators, self.nvars))
    }

    /// Cached `J^order(F)`; tagged spaces record classes in `F / mF`.
    pub fn jet_space(&self, order: u32, tagged: bool) -> Arc<JetSpace> {
        let mut cache = self.jets.lock().expect("jet cache poisoned");
        cache
            .entry((order, tagged))
            .or_insert_with(|| Arc::new(JetSpace::build(&self.generators, self.nvars, order, tagged)))
            .clone()
    }

    fn check_nvars(&self, x: &PolyVectorField) -> Result<()> {
        if x.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: x.nvars(),
            });
        }
        Ok(())
    }

    pub fn membership(&self, x: &PolyVectorField) -> Result<MembershipCertificate> {
        self.check_nvars(x)?;
        match self.groebner().cofactors(x) {
            Ok(c) => MembershipCertificate::member(x, &self.generators, c),
            Err(r) => Ok(MembershipCertificate::non_member(r)),
        }
    }

    pub fn contains(&self, x: &PolyVectorField) -> Result<bool> {
        self.check_nvars(x)?;
        Ok(self.groebner().normal_form(x).is_zero())
    }

    /// Normal form modulo the module; linear in `x`.
    pub fn normal_form(&self, x: &PolyVectorField) -> PolyVectorField {
        self.groebner().normal_form(x)
    }

    /// `m^k F`, generated by all products of degree-`k` monomials with generators.
    pub fn multiply_by_ideal_power(&self, k: u32) -> FoliationModule {
        if k == 0 {
            return self.clone();
        }
        let mut gens = Vec::new();
        for g in &self.generators {
            for mu in Monomial::all_of_degree(self.nvars, k) {
                gens.push(g.mul_monomial(&mu));
            }
        }
        Self::from_normalized(self.nvars, gens.iter().map(groebner::make_monic).collect())
    }

    /// `true` when both generate the same submodule.
    pub fn same_module(&self, other: &FoliationModule) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Brackets of all generator pairs, tested for membership.
    pub fn check_involutive(&self) -> Result<Involutivity> {
        for i in 0..self.generators.len() {
            for j in i + 1..self.generators.len() {
                let b = self.generators[i].bracket(&self.generators[j]);
                let cert = self.membership(&b)?;
                if !cert.is_member() {
                    return Ok(Involutivity::Witness {
                        i,
                        j,
                        bracket: b,
                        certificate: cert,
                    });
                }
            }
        }
        Ok(Involutivity::Closed)
    }

    /// Fails with the first generator whose bracket with the Euler field
    /// leaves the module.
    pub fn check_euler_invariant(&self) -> Result<()> {
        let e = PolyVectorField::euler(self.nvars);
        let names = default_names(self.nvars);
        for (index, g) in self.generators.iter().enumerate() {
            let b = e.bracket(g);
            if !self.contains(&b)? {
                return Err(Error::NotEulerInvariant {
                    index,
                    bracket: b.render(&names),
                });
            }
        }
        Ok(())
    }

    /// Echelonized bases of the degree-`d` parts of elements of `F`, and of
    /// the degree-`d` parts of elements of `F ∩ m^d X`.
    pub fn graded_truncation_basis(&self, d: u32) -> GradedTruncation {
        let js = self.jet_space(d.max(1), false);
        let idx = js.index();
        let range = idx.degree_range(d);
        let projected = js
            .echelon()
            .basis()
            .into_iter()
            .map(|r| r.filter(|c| range.contains(&c)))
            .filter(|r| !r.is_zero());
        let truncation = Echelon::from_vectors(projected)
            .basis()
            .into_iter()
            .map(|r| idx.decode(r))
            .collect();
        GradedTruncation {
            degree: d,
            truncation,
            filtered: js.leading_space(d),
        }
    }

    /// Homogeneous generators for an Euler-invariant module.
    ///
    /// Homogeneous components of the generators all lie in `F`; a subset
    /// whose classes in `F / mF` form a basis generates `F` by the graded
    /// Nakayama lemma. The result is checked against `F` exactly, and
    /// additionally on jets up to `check_degree` (default: maximal generator
    /// degree plus two).
    pub fn homogeneous_generators(&self, check_degree: Option<u32>) -> Result<FoliationModule> {
        self.check_euler_invariant()?;
        let mut parts: Vec<(u32, usize, PolyVectorField)> = Vec::new();
        for (j, g) in self.generators.iter().enumerate() {
            for (d, h) in g.homogeneous_components() {
                parts.push((d, j, groebner::make_monic(&h)));
            }
        }
        parts.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mf = self.multiply_by_ideal_power(1);
        let mut keys = BTreeMap::new();
        let mut classes = Echelon::new();
        let mut kept = Vec::new();
        for (_, _, h) in parts {
            if !self.contains(&h)? {
                return Err(Error::internal("homogeneous component of an Euler-invariant module is not a member"));
            }
            let nf = mf.normal_form(&h);
            let v = encode_generic(&nf, &mut keys);
            if matches!(classes.insert(v), crate::linalg::Insertion::Pivot(_)) {
                kept.push(h);
            }
        }
        let out = Self::from_normalized(self.nvars, kept);
        if !self.same_module(&out)? {
            return Err(Error::internal("homogeneous generators span a different module"));
        }
        let cd = check_degree.unwrap_or(self.max_degree() + 2);
        let (a, b) = (self.jet_space(cd, false), out.jet_space(cd, false));
        let eb = b.echelon();
        if a.echelon().rank() != eb.rank() || a.echelon().basis().iter().any(|r| !eb.contains(r)) {
            return Err(Error::internal("homogeneous generators differ on jets"));
        }
        Ok(out)
    }
}

/// Sparse encoding keyed by (component, monomial), extending the key map on the fly.
pub(crate) fn encode_generic(x: &PolyVectorField, keys: &mut BTreeMap<(usize, Monomial), usize>) -> SparseVec {
    let mut pairs = Vec::new();
    for (i, p) in x.components().iter().enumerate() {
        for (m, c) in p.terms() {
            let next = keys.len();
            let col = *keys.entry((i, m.clone())).or_insert(next);
            pairs.push((col, c.clone()));
        }
    }
    SparseVec::from_pairs(pairs)
}
