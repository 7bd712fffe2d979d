mod common;

use common::*;
use foliation_core::holonomy::{
    artin_rees_certify, holonomy_filtration, isotropy_algebra, linear_holonomy, semisimple_holonomy, ArtinReesOutcome,
};
use foliation_core::liealg::LieAlgebra;
use foliation_core::linalg::dense;

#[test]
fn circles() {
    let (_, f) = fixture("circles");
    let iso = isotropy_algebra(&f).unwrap();
    assert_eq!(iso.dim(), 1);
    assert!(iso.algebra.is_abelian());
    let lin = linear_holonomy(&iso);
    assert_eq!(lin.algebra.dim(), 1);
    // rotation generator, up to the normalization of the class
    let m = &lin.matrices[0];
    assert_eq!(m[0][0], q(0));
    assert_eq!(m[1][1], q(0));
    assert_eq!(&m[0][1] + &m[1][0], q(0));
    assert_ne!(m[0][1], q(0));
    assert_eq!(semisimple_holonomy(&iso).algebra.dim(), 0);
}

#[test]
fn sl2() {
    let (_, f) = fixture("sl2");
    let iso = isotropy_algebra(&f).unwrap();
    assert_eq!(iso.dim(), 3);
    assert!(iso.algebra.is_semisimple());
    // structure constants are those of sl2 in the generator basis (e, f, h)
    assert_eq!(iso.algebra, LieAlgebra::sl2());
    assert_eq!(holonomy_filtration(&f, &iso, 4).unwrap().pieces[2].dim(), 0);
    let lin = linear_holonomy(&iso);
    assert_eq!(lin.algebra.dim(), 3);
    assert!(lin.matrices.iter().all(|m| dense::trace(m) == q(0)));
    assert_eq!(semisimple_holonomy(&iso).algebra.dim(), 3);
}

#[test]
fn quadratic() {
    let (_, f) = fixture("quadratic-x2dx");
    let iso = isotropy_algebra(&f).unwrap();
    assert_eq!(iso.dim(), 1);
    let fil = holonomy_filtration(&f, &iso, 6).unwrap();
    assert_eq!(fil.pieces.iter().take(4).map(|s| s.dim()).collect::<Vec<_>>(), vec![1, 1, 1, 0]);
    assert_eq!(fil.vanishes_at, Some(3));
    assert_eq!(linear_holonomy(&iso).algebra.dim(), 0);
}

#[test]
fn weighted_filtration() {
    let (_, f) = fixture("weighted-n2");
    let iso = isotropy_algebra(&f).unwrap();
    let fil = holonomy_filtration(&f, &iso, 6).unwrap();
    assert!(fil.pieces[2].dim() > 0);
    assert_eq!(fil.pieces[3].dim(), 0);
    let w = iso.class_of(&fld("x1, x2", "x1^2*dx2")).unwrap();
    assert!(fil.pieces[2].contains(&w));
    assert!(w.iter().any(|c| c != &q(0)));
}

#[test]
fn filtration_bracket_law() {
    for name in ["weighted-n2", "weighted-n3", "sl2-semidirect-euler", "quadratic-x2dx"] {
        let (_, f) = fixture(name);
        let iso = isotropy_algebra(&f).unwrap();
        for i in 1..4 {
            for j in 1..4 {
                let b = iso.algebra.bracket_span(&iso.filtration_piece(i), &iso.filtration_piece(j));
                assert!(b.is_subspace_of(&iso.filtration_piece(i + j - 1)), "{name} {i} {j}");
            }
        }
    }
}

#[test]
fn semidirect_euler() {
    let (_, f) = fixture("sl2-semidirect-euler");
    let iso = isotropy_algebra(&f).unwrap();
    assert_eq!(iso.dim(), 4);
    assert_eq!(semisimple_holonomy(&iso).algebra.dim(), 3);
    assert_eq!(iso.radical.dim(), 1);
    let e = iso.class_of(&fld("x, y", "x*dx + y*dy")).unwrap();
    assert!(iso.radical.contains(&e));
}

#[test]
fn artin_rees_bounds() {
    let x = module("x", &["x*dx"]);
    assert_eq!(artin_rees_certify(&x, 6).unwrap().bound(), Some(1));
    let (_, w2) = fixture("weighted-n2");
    match artin_rees_certify(&w2, 8).unwrap() {
        ArtinReesOutcome::Certified(c) => {
            assert_eq!(c.bound, 2);
            assert_eq!(c.witness_lower.unwrap().field, fld("x1, x2", "x1^2*dx2"));
        }
        other => panic!("{other:?}"),
    }
    let (_, w3) = fixture("weighted-n3");
    assert_eq!(artin_rees_certify(&w3, 8).unwrap().bound(), Some(3));
}
