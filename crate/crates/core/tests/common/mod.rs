#![allow(dead_code)]

use std::path::PathBuf;

use foliation_core::cli::{parse_spec, FoliationSpec};
use foliation_core::modalg::FoliationModule;
use foliation_core::{Monomial, PolyVectorField, Polynomial, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const FIXTURES: [&str; 8] = [
    "circles",
    "sl2",
    "perturbed-sl2",
    "weighted-n2",
    "weighted-n3",
    "sl2-semidirect-euler",
    "quadratic-x2dx",
    "non-involutive-pair",
];

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture_source(name: &str) -> String {
    std::fs::read_to_string(fixture_dir().join(format!("{name}.fol"))).expect("fixture readable")
}

pub fn fixture(name: &str) -> (FoliationSpec, FoliationModule) {
    let spec = parse_spec(&fixture_source(name)).expect("fixture parses");
    let f = FoliationModule::new(spec.generators.clone()).expect("fixture is a valid module");
    (spec, f)
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn rand_q(rng: &mut ChaCha8Rng) -> Rational {
    let n: i64 = rng.gen_range(-5..=5);
    let d: i64 = rng.gen_range(1..=3);
    Rational::new(n.into(), d.into())
}

/// Random monomial of total degree exactly `d`.
pub fn rand_monomial(rng: &mut ChaCha8Rng, n: usize, d: u32) -> Monomial {
    let mut e = vec![0u32; n];
    for _ in 0..d {
        e[rng.gen_range(0..n)] += 1;
    }
    Monomial::new(e)
}

/// Sparse polynomial with `terms` terms of degree in `lo..=hi`.
pub fn rand_poly(rng: &mut ChaCha8Rng, n: usize, lo: u32, hi: u32, terms: usize) -> Polynomial {
    let mut p = Polynomial::zero(n);
    for _ in 0..terms {
        let d = rng.gen_range(lo..=hi);
        p.add_term(rand_monomial(rng, n, d), rand_q(rng));
    }
    p
}

pub fn rand_field(rng: &mut ChaCha8Rng, n: usize, lo: u32, hi: u32, terms: usize) -> PolyVectorField {
    PolyVectorField::new((0..n).map(|_| rand_poly(rng, n, lo, hi, terms)).collect()).unwrap()
}

/// `Σ a_j g_j` for random cofactors `a_j` of degree `≤ deg`.
pub fn rand_combination(rng: &mut ChaCha8Rng, gens: &[PolyVectorField], deg: u32) -> PolyVectorField {
    let n = gens[0].nvars();
    let mut acc = PolyVectorField::zero(n);
    for g in gens {
        if rng.gen_bool(0.3) {
            continue;
        }
        let a = rand_poly(rng, n, 0, deg, 2);
        acc = &acc + &g.mul_poly(&a);
    }
    acc
}

pub fn names(vars: &str) -> Vec<String> {
    vars.split(',').map(|s| s.trim().to_string()).collect()
}

/// Field written in the input language over the given variables.
pub fn fld(vars: &str, src: &str) -> PolyVectorField {
    foliation_core::cli::parse_field(src, &names(vars)).expect("field parses")
}

pub fn module(vars: &str, gens: &[&str]) -> FoliationModule {
    FoliationModule::new(gens.iter().map(|g| fld(vars, g)).collect()).expect("valid module")
}

pub fn poly(vars: &str, src: &str) -> Polynomial {
    // a polynomial is read as the coefficient of the first derivation
    let first = names(vars)[0].clone();
    fld(vars, &format!("({src})*d{first}")).component(0).clone()
}
