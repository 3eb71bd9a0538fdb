//! Yang-Baxter residuals, expansion extraction and the unitarity
//! proposition, with negative controls.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rmatrix::{
    cybe_residual, embed_pair, flip, qybe_grid, qybe_residual, semiclassical_extract,
    unitarity_proposition_check, yang_r, RMatrixFamily,
};

#[test]
fn r_at_zero_hbar_is_identity() {
    let fam = yang_r(2);
    let r = fam.eval(1.7, 0.0).unwrap();
    assert!((r - DMatrix::<Complex64>::identity(4, 4)).norm() < 1e-15);
}

#[test]
fn flip_conjugation_symmetry() {
    // R12(u, hbar) = R21(-u, -hbar) exactly for the rational family
    let fam = yang_r(3);
    let p = flip(3);
    for (u, h) in [(1.3, 0.2), (0.4, 0.7), (-2.1, 0.05)] {
        let lhs = fam.eval(u, h).unwrap();
        let rhs = &p * fam.eval(-u, -h).unwrap() * &p;
        assert!((lhs - rhs).norm() < 1e-14);
    }
}

#[test]
fn unitarity_product_is_scalar() {
    // R12(u) R21(-u) = (1 - hbar^2/u^2) I
    let fam = yang_r(2);
    let p = flip(2);
    let (u, h) = (1.3, 0.4);
    let prod = fam.eval(u, h).unwrap() * (&p * fam.eval(-u, h).unwrap() * &p);
    let expect = DMatrix::<Complex64>::identity(4, 4) * Complex64::new(1.0 - h * h / (u * u), 0.0);
    assert!((prod - expect).norm() < 1e-14);
}

#[test]
fn qybe_residual_single_point() {
    let fam = yang_r(2);
    let r = qybe_residual(&fam, 1.3, 0.7, 0.2).unwrap();
    assert!(r <= 1e-13, "residual {r:.3e}");
}

#[test]
fn qybe_residual_vanishes_at_zero_hbar() {
    let fam = yang_r(2);
    let r = qybe_residual(&fam, 1.1, 0.6, 0.0).unwrap();
    assert_eq!(r, 0.0);
}

#[test]
fn qybe_grid_for_both_dimensions() {
    let us = [0.7, 1.1, 1.9, -1.3, 2.6];
    let vs = [0.5, 0.9, 1.7, -0.4, 2.2];
    let hb = [0.1, 0.5];
    for n in [2usize, 3] {
        let fam = yang_r(n);
        let worst = qybe_grid(&fam, &us, &vs, &hb, false).unwrap();
        assert!(worst <= 1e-12, "N={n}: worst {worst:.3e}");
    }
}

#[test]
fn pole_arguments_error() {
    let fam = yang_r(2);
    assert!(qybe_residual(&fam, 1.0, -1.0, 0.3).is_err());
    assert!(fam.eval(0.0, 0.1).is_err());
}

#[test]
fn extraction_matches_declared_terms() {
    let fam = yang_r(2);
    for u in [0.8, 1.7, -1.1] {
        let terms = semiclassical_extract(&fam, u).unwrap();
        let declared = (fam.declared_r.as_ref().unwrap())(u);
        assert!((&terms.r - declared).norm() <= 1e-9, "u={u}");
        assert!(terms.s.norm() <= 1e-8, "u={u}: s = {:.3e}", terms.s.norm());
    }
}

#[test]
fn cybe_residual_for_extracted_r() {
    let fam = yang_r(2);
    let r_of = |u: f64| Ok(semiclassical_extract(&fam, u).unwrap().r);
    let res = cybe_residual(&r_of, 1.1, 0.4, 2).unwrap();
    assert!(res <= 1e-12, "CYBE residual {res:.3e}");
    // and for the declared closed form
    let r_decl = |u: f64| Ok((fam.declared_r.as_ref().unwrap())(u));
    let res = cybe_residual(&r_decl, 0.9, 1.6, 2).unwrap();
    assert!(res <= 1e-13);
}

#[test]
fn unitarity_proposition_holds_for_yang() {
    for n in [2usize, 3] {
        let fam = yang_r(n);
        let reports = unitarity_proposition_check(&fam, &[0.7, 1.2, 2.5], 0.3, 1e-8).unwrap();
        for rep in &reports {
            assert!(
                rep.pass,
                "N={n} u={}: unit {:.2e} sym {:.2e} scalar {:.2e} prop {:.2e}",
                rep.u,
                rep.unitarity_scalar_dev,
                rep.symmetry_dev,
                rep.rs_scalar_dev,
                rep.proposition_dev
            );
        }
        // scalar value check at one point: r^2/2 + s = -I/(2u^2)
        let terms = semiclassical_extract(&fam, 1.3).unwrap();
        let n2 = n * n;
        let rs = (&terms.r * &terms.r) * Complex64::new(0.5, 0.0) + &terms.s;
        let expect =
            DMatrix::<Complex64>::identity(n2, n2) * Complex64::new(-0.5 / (1.3 * 1.3), 0.0);
        assert!((rs - expect).norm() < 1e-8);
    }
}

#[test]
fn perturbed_family_fails_qybe() {
    // negative control: an O(eps) defect shows up as an O(eps) residual
    let eps = 1e-3;
    let fam = RMatrixFamily::new(
        2,
        Box::new(move |u, hbar| {
            let p = flip(2);
            let mut m = DMatrix::<Complex64>::identity(4, 4) + &p * Complex64::new(hbar / u, 0.0);
            // deterministic non-symmetric defect
            m[(0, 3)] += Complex64::new(eps * hbar, 0.0);
            m
        }),
    );
    let r = qybe_residual(&fam, 1.3, 0.7, 0.2).unwrap();
    assert!(r > 1e-5 && r < 1e-2, "control residual {r:.3e}");
}

#[test]
fn nonscalar_s_fails_proposition() {
    // negative control: an ad hoc hbar^2 term with non-scalar square
    let fam = RMatrixFamily::new(
        2,
        Box::new(move |u, hbar| {
            let p = flip(2);
            let mut m = DMatrix::<Complex64>::identity(4, 4) + &p * Complex64::new(hbar / u, 0.0);
            m[(1, 1)] += Complex64::new(hbar * hbar * 0.1, 0.0);
            m
        }),
    );
    let reports = unitarity_proposition_check(&fam, &[1.1], 0.3, 1e-8).unwrap();
    assert!(!reports[0].pass, "control should fail");
}

#[test]
fn embed_pair_is_consistent_with_flip_conjugation() {
    // R13 = P23 R12 P23 on the triple product
    let fam = yang_r(2);
    let r = fam.eval(0.9, 0.4).unwrap();
    let r12 = embed_pair(&r, 1, 2, 2);
    let r13 = embed_pair(&r, 1, 3, 2);
    let p23 = embed_pair(&flip(2), 2, 3, 2);
    assert!((&p23 * &r12 * &p23 - r13).norm() < 1e-14);
}
