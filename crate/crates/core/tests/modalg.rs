mod common;

use common::*;
use foliation_core::modalg::oracle::truncated_membership;
use foliation_core::modalg::{FoliationModule, Involutivity};
use foliation_core::{Monomial, PolyVectorField};

const XY: &str = "x, y";

fn sl2() -> FoliationModule {
    module(XY, &["x*dy", "y*dx", "x*dx - y*dy"])
}

#[test]
fn single_generator_membership() {
    let f = module(XY, &["x*dy"]);
    let cert = f.membership(&fld(XY, "x^2*dy + y*x*dy")).unwrap();
    assert!(cert.is_member());
    assert_eq!(cert.coefficients(), &[poly(XY, "x + y")]);
}

#[test]
fn h_is_not_in_the_span_of_e_and_f() {
    let f = module(XY, &["x*dy", "y*dx"]);
    let h = fld(XY, "x*dx - y*dy");
    let cert = f.membership(&h).unwrap();
    assert!(!cert.is_member());
    assert!(cert.remainder().is_some());
    assert!(truncated_membership(f.generators(), &h, 2).is_none());
}

#[test]
fn weighted_witness_is_not_in_mf() {
    let (_, f) = fixture("weighted-n2");
    let mf = f.multiply_by_ideal_power(1);
    let w = fld("x1, x2", "x1^2*dx2");
    assert!(f.contains(&w).unwrap());
    assert!(!mf.contains(&w).unwrap());
}

#[test]
fn ideal_powers() {
    let f = module(XY, &["x*dy"]);
    let m1 = f.multiply_by_ideal_power(1);
    assert!(m1.same_module(&module(XY, &["x^2*dy", "x*y*dy"])).unwrap());
    assert!(f.multiply_by_ideal_power(0).same_module(&f).unwrap());
}

#[test]
fn involutivity() {
    assert!(sl2().check_involutive().unwrap().is_closed());
    assert!(module(XY, &["-y*dx + x*dy"]).check_involutive().unwrap().is_closed());
    match module(XY, &["x*dy", "y*dx"]).check_involutive().unwrap() {
        Involutivity::Witness {
            i,
            j,
            bracket,
            certificate,
        } => {
            assert_eq!((i, j), (0, 1));
            assert_eq!(bracket, fld(XY, "x*dx - y*dy"));
            assert!(!certificate.is_member());
        }
        Involutivity::Closed => panic!("e and f alone are not closed"),
    }
}

#[test]
fn graded_truncations() {
    let circles = module(XY, &["-y*dx + x*dy"]);
    let t = circles.graded_truncation_basis(1);
    assert_eq!(t.truncation.len(), 1);
    let b = &t.truncation[0];
    assert!(b == &fld(XY, "-y*dx + x*dy") || b == &fld(XY, "y*dx - x*dy"));
    assert_eq!(sl2().graded_truncation_basis(1).truncation.len(), 3);
}

/// Degree-d parts of `F ∩ m^d X`, straight from dense linear algebra on products.
fn brute_force_filtered_dim(f: &FoliationModule, d: u32) -> usize {
    use foliation_core::linalg::dense;
    let n = f.nvars();
    let coords = |x: &PolyVectorField, lo: u32, hi: u32| -> Vec<foliation_core::Rational> {
        let mut out = Vec::new();
        for k in 0..n {
            for e in lo..=hi {
                for mu in Monomial::all_of_degree(n, e) {
                    out.push(x.component(k).coefficient(&mu));
                }
            }
        }
        out
    };
    let mut prods = Vec::new();
    for g in f.generators() {
        for e in 0..=d {
            for mu in Monomial::all_of_degree(n, e) {
                prods.push(g.mul_monomial(&mu));
            }
        }
    }
    // columns are products; kernel of the part below degree d
    let low: Vec<Vec<_>> = prods.iter().map(|p| coords(p, 0, d - 1)).collect();
    let kernel = dense::nullspace(&dense::transpose(&low), prods.len());
    let tops: Vec<Vec<_>> = kernel
        .iter()
        .map(|c| {
            let mut acc = PolyVectorField::zero(n);
            for (ci, p) in c.iter().zip(&prods) {
                acc = &acc + &p.scale(ci);
            }
            coords(&acc, d, d)
        })
        .collect();
    if tops.is_empty() {
        0
    } else {
        dense::rank(&tops)
    }
}

#[test]
fn filtered_dimensions_match_brute_force() {
    for name in ["sl2", "weighted-n2", "quadratic-x2dx", "circles"] {
        let (_, f) = fixture(name);
        for d in 1..=3 {
            assert_eq!(
                f.graded_truncation_basis(d).filtered.len(),
                brute_force_filtered_dim(&f, d),
                "{name} at degree {d}"
            );
        }
    }
}

#[test]
fn homogeneous_generators() {
    let f = module(XY, &["x*dy + x^2*dy", "x^2*dy"]);
    let h = f.homogeneous_generators(Some(2)).unwrap();
    assert!(h.same_module(&f).unwrap());
    assert!(h.generators().iter().all(|g| g.is_homogeneous_of_degree(g.degree().finite().unwrap())));
    assert!(h.contains(&fld(XY, "x*dy")).unwrap() && h.contains(&fld(XY, "x^2*dy")).unwrap());
    let circles = module(XY, &["-y*dx + x*dy"]);
    assert_eq!(circles.homogeneous_generators(Some(1)).unwrap(), circles);
}

#[test]
fn rejected_inputs() {
    assert!(FoliationModule::new(vec![]).is_err());
    assert!(FoliationModule::new(vec![fld(XY, "dx + x*dy")]).is_err());
    assert!(FoliationModule::new(vec![fld(XY, "x*dy"), fld("x", "x*dx")]).is_err());
}
