//! Hybrid evolution laws, Haldane-Shastry operators and compatibility
//! checks along classical orbits.

use classical_cms::{flow, freezing_point, hamiltonian, PhasePoint, Segment};
use hybrid_dynamics::{
    density_evolve, exp_i_hermitian, expectation_value, gauge_shift_check, haldane_shastry,
    haldane_shastry_sin2, heisenberg_evolve, hermitian_spectrum, monodromy, transport,
    zero_curvature_residual, HamiltonianField, HybridDensity,
};
use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinspace::{SpinOperator, SpinVector};
use std::f64::consts::PI;

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> PhasePoint {
    loop {
        let q: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        let p: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = PhasePoint::new(p, q);
        if x.min_separation() > 0.6 {
            return x;
        }
    }
}

fn random_state(rng: &mut ChaCha8Rng, n: usize, local: usize) -> SpinVector {
    let dim = local.pow(n as u32);
    let amp = DVector::from_iterator(
        dim,
        (0..dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
    );
    SpinVector {
        sites: n,
        local_dim: local,
        amp,
    }
    .normalize()
}

#[test]
fn degree2_hand_value_two_sites() {
    // z = (1, -1): H^(1)_2 = 1/4 P_12
    let x = PhasePoint::new(vec![0.3, -0.3], vec![0.0, PI]);
    let h = HamiltonianField::new(2, 2, 2).unwrap().eval(&x).unwrap();
    let p12 = SpinOperator::permutation(1, 2, 2, 2).unwrap();
    let d = h.sub(&p12.scale(Complex64::new(0.25, 0.0))).unwrap();
    assert!(d.op_norm().unwrap() < 1e-14);
}

#[test]
fn degree2_freezing_matches_sin2_form() {
    for n in [3usize, 4, 5] {
        let m2 = haldane_shastry(2, n, 2).unwrap();
        let golden = haldane_shastry_sin2(n, 2).unwrap();
        let d = m2.sub(&golden).unwrap();
        assert!(d.op_norm().unwrap() < 1e-12, "n={n}");
    }
}

#[test]
fn degree3_at_zero_momentum_keeps_only_triples() {
    // n = 2 has no triples, so M_3 vanishes at the freezing point.
    let m3 = haldane_shastry(3, 2, 2).unwrap();
    assert!(m3.op_norm().unwrap() < 1e-13);
    let m3 = haldane_shastry(3, 3, 2).unwrap();
    assert!(m3.op_norm().unwrap() > 1e-3);
    assert!(m3.is_hermitian(1e-12).unwrap());
}

#[test]
fn haldane_shastry_commutativity() {
    for (n, local) in [(3usize, 2usize), (4, 2), (5, 2), (3, 3), (4, 3)] {
        let m2 = haldane_shastry(2, n, local).unwrap();
        let m3 = haldane_shastry(3, n, local).unwrap();
        let norm = m2.commutator(&m3).unwrap().op_norm().unwrap();
        assert!(norm <= 1e-11, "n={n} N={local}: |[M2,M3]| = {norm:.3e}");
    }
}

#[test]
fn degree4_field_commutes_at_freezing() {
    let m2 = haldane_shastry(2, 3, 2).unwrap();
    let m4 = haldane_shastry(4, 3, 2).unwrap();
    assert!(m4.is_hermitian(1e-11).unwrap());
    let norm = m2.commutator(&m4).unwrap().op_norm().unwrap();
    assert!(norm <= 1e-11, "|[M2,M4]| = {norm:.3e}");
}

#[test]
fn cyclic_shift_invariance_of_m2() {
    for n in [3usize, 4] {
        let m2 = haldane_shastry(2, n, 2).unwrap();
        let c = SpinOperator::from_perm(&spinspace::Perm::cycle(n), 2);
        let conj = c
            .mul(&m2)
            .unwrap()
            .mul(&c.adjoint().unwrap())
            .unwrap();
        let d = conj.sub(&m2).unwrap();
        assert!(d.op_norm().unwrap() < 1e-12, "n={n}");
    }
}

#[test]
fn transport_zero_duration_is_identity() {
    let x = freezing_point(3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let psi0 = random_state(&mut rng, 3, 2);
    let out = transport(&x, &[Segment { k: 2, duration: 0.0 }], 1e-3, 2, &psi0).unwrap();
    assert!(out.psi.sub(&psi0).norm() < 1e-15);
}

#[test]
fn transport_on_stationary_orbit_is_matrix_exponential() {
    let x = freezing_point(3);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let psi0 = random_state(&mut rng, 3, 2);
    let t = 1.3;
    let out = transport(&x, &[Segment { k: 2, duration: t }], 1e-3, 2, &psi0).unwrap();
    let m2 = haldane_shastry(2, 3, 2).unwrap().matrix().unwrap();
    let u = exp_i_hermitian(&m2, -t);
    let expect = &u * &psi0.amp;
    let dev = (&out.psi.amp - expect).norm();
    assert!(dev < 1e-9, "deviation {dev:.3e}");
    assert!(out.max_norm_drift() < 1e-10);
}

#[test]
fn eigenvector_transport_acquires_pure_phase() {
    let x = freezing_point(3);
    let m2 = haldane_shastry(2, 3, 2).unwrap().matrix().unwrap();
    let eig = nalgebra::SymmetricEigen::new(m2);
    let mu = eig.eigenvalues[0];
    let v = eig.eigenvectors.column(0).into_owned();
    let psi0 = SpinVector {
        sites: 3,
        local_dim: 2,
        amp: v.clone(),
    };
    let t = 0.9;
    let out = transport(&x, &[Segment { k: 2, duration: t }], 1e-3, 2, &psi0).unwrap();
    let overlap: Complex64 = psi0.dot(&out.psi);
    assert!((overlap.norm() - 1.0).abs() < 1e-8);
    let expect = Complex64::new(0.0, -mu * t).exp();
    assert!((overlap - expect).norm() < 1e-8);
}

#[test]
fn transport_norm_preserved_on_moving_orbit() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let x = random_point(&mut rng, 3);
    let psi0 = random_state(&mut rng, 3, 2);
    let out = transport(&x, &[Segment { k: 2, duration: 3.0 }], 1e-3, 2, &psi0).unwrap();
    assert!(out.max_norm_drift() < 1e-8, "{:.3e}", out.max_norm_drift());
}

#[test]
fn order_of_flows_compatibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let x = random_point(&mut rng, 3);
    let psi0 = random_state(&mut rng, 3, 2);
    let ab = transport(
        &x,
        &[
            Segment { k: 2, duration: 0.4 },
            Segment { k: 3, duration: 0.3 },
        ],
        1e-3,
        2,
        &psi0,
    )
    .unwrap();
    let ba = transport(
        &x,
        &[
            Segment { k: 3, duration: 0.3 },
            Segment { k: 2, duration: 0.4 },
        ],
        1e-3,
        2,
        &psi0,
    )
    .unwrap();
    let dev = ab.psi.sub(&ba.psi).norm() + ab.end.dist(&ba.end);
    assert!(dev <= 1e-6, "order-of-flows deviation {dev:.3e}");
}

#[test]
fn zero_curvature_plateaus() {
    // Centered differences decay as eps^2 (the Richardson ratio sits at
    // 4); halving continues until the residual clears the gate, well
    // above the roundoff floor of the difference quotient.
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for trial in 0..5 {
        let x = random_point(&mut rng, 3);
        let mut eps = 1e-3;
        let mut residual = zero_curvature_residual(&x, 2, 3, eps, 2).unwrap();
        while residual > 1e-7 && eps > 1.2e-5 {
            eps /= 2.0;
            let next = zero_curvature_residual(&x, 2, 3, eps, 2).unwrap();
            let ratio = residual / next.max(1e-300);
            assert!(
                ratio > 2.0 || next <= 1e-7,
                "trial {trial}: residual stopped contracting at {next:.3e} (ratio {ratio:.2})"
            );
            residual = next;
        }
        assert!(residual <= 1e-7, "trial {trial}: plateau {residual:.3e}");
    }
}

#[test]
fn zero_curvature_degree_one_pair() {
    // H^(1)_1 = 0 and H^(1)_2 is invariant under the rigid rotation
    // generated by H_1, so the (1,2) residual collapses.
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let x = random_point(&mut rng, 3);
    let r = zero_curvature_residual(&x, 1, 2, 1e-4, 2).unwrap();
    assert!(r <= 1e-10, "residual {r:.3e}");
}

#[test]
fn commutator_vanishes_at_freezing_point() {
    let m2 = haldane_shastry(2, 3, 2).unwrap();
    let m3 = haldane_shastry(3, 3, 2).unwrap();
    let norm = m2.commutator(&m3).unwrap().op_norm().unwrap();
    assert!(norm <= 1e-12, "|[M2,M3]|(x_*) = {norm:.3e}");
}

#[test]
fn heisenberg_identity_field_is_fixed() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let x = random_point(&mut rng, 3);
    let id_field = |_: &PhasePoint| Ok(SpinOperator::identity(3, 2));
    let s = heisenberg_evolve(&id_field, &x, &[Segment { k: 2, duration: 1.0 }], 1e-3, 2).unwrap();
    let d = s.sub(&SpinOperator::identity(3, 2)).unwrap();
    assert!(d.op_norm().unwrap() < 1e-9);
}

#[test]
fn heisenberg_own_hamiltonian_is_conserved_at_freezing() {
    let x = freezing_point(3);
    let field = |y: &PhasePoint| {
        HamiltonianField::new(2, 3, 2)
            .unwrap()
            .eval(y)
            .map_err(Into::into)
    };
    let s = heisenberg_evolve(&field, &x, &[Segment { k: 2, duration: 0.8 }], 1e-3, 2).unwrap();
    let m2 = haldane_shastry(2, 3, 2).unwrap();
    let d = s.sub(&m2).unwrap();
    assert!(d.op_norm().unwrap() < 1e-9);
}

#[test]
fn heisenberg_preserves_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let x = random_point(&mut rng, 3);
    let schedule = [Segment { k: 2, duration: 1.1 }];
    let field = |y: &PhasePoint| {
        HamiltonianField::new(3, 3, 2)
            .unwrap()
            .eval(y)
            .map_err(Into::into)
    };
    let s_t = heisenberg_evolve(&field, &x, &schedule, 1e-3, 2).unwrap();
    let endpoint = flow(&x, &schedule, 1e-3, &[]).unwrap().last().clone();
    let direct = field(&endpoint).unwrap();
    let a = hermitian_spectrum(&s_t).unwrap();
    let b = hermitian_spectrum(&direct).unwrap();
    for (u, v) in a.iter().zip(&b) {
        assert!((u - v).abs() < 1e-9, "{u} vs {v}");
    }
}

#[test]
fn density_of_pure_state_follows_transport() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let x = random_point(&mut rng, 3);
    let psi0 = random_state(&mut rng, 3, 2);
    let schedule = [Segment { k: 2, duration: 0.9 }];
    let rho0 = HybridDensity::pure(x.clone(), &psi0);
    let rho_t = density_evolve(&rho0, &schedule, 1e-3, 2).unwrap();
    let psi_t = transport(&x, &schedule, 1e-3, 2, &psi0).unwrap().psi;
    let expect = HybridDensity::pure(rho_t.at.clone(), &psi_t);
    let d = rho_t.rho.sub(&expect.rho).unwrap();
    assert!(d.op_norm().unwrap() < 1e-8);
    let tr = rho_t.trace().unwrap();
    assert!((tr - Complex64::new(1.0, 0.0)).norm() < 1e-9);
}

#[test]
fn density_heisenberg_duality() {
    // E_rho(s(t)) = E_{rho(t)}(s) on random pairs.
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..10 {
        let x = random_point(&mut rng, 3);
        let psi0 = random_state(&mut rng, 3, 2);
        let schedule = [Segment { k: 2, duration: 0.7 }];
        let field = |y: &PhasePoint| {
            HamiltonianField::new(3, 3, 2)
                .unwrap()
                .eval(y)
                .map_err(Into::into)
        };
        let rho0 = HybridDensity::pure(x.clone(), &psi0);
        // Heisenberg side
        let s_t = heisenberg_evolve(&field, &x, &schedule, 1e-3, 2).unwrap();
        let lhs = expectation_value(&rho0, &s_t).unwrap();
        // Schrodinger side
        let rho_t = density_evolve(&rho0, &schedule, 1e-3, 2).unwrap();
        let s_end = field(&rho_t.at).unwrap();
        let rhs = expectation_value(&rho_t, &s_end).unwrap();
        assert!((lhs - rhs).norm() <= 1e-9, "{lhs} vs {rhs}");
    }
}

#[test]
fn gauge_shift_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let x = random_point(&mut rng, 3);
    let psi0 = random_state(&mut rng, 3, 2);
    let report = gauge_shift_check(
        &x,
        &[Segment { k: 2, duration: 1.0 }],
        1e-3,
        2,
        &psi0,
        &|_| 0.8,
        1e-8,
    )
    .unwrap();
    assert!(report.pass, "max dev {:.3e}", report.max_deviation);
}

#[test]
fn gauge_shift_conserved_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let x = random_point(&mut rng, 3);
    let psi0 = random_state(&mut rng, 3, 2);
    let report = gauge_shift_check(
        &x,
        &[Segment { k: 2, duration: 1.0 }],
        1e-3,
        2,
        &psi0,
        &|y| hamiltonian(2, y).unwrap(),
        1e-8,
    )
    .unwrap();
    assert!(report.pass, "max dev {:.3e}", report.max_deviation);
}

#[test]
fn gauge_shift_momentum_dependent() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let x = random_point(&mut rng, 3);
    let psi0 = random_state(&mut rng, 3, 2);
    let report = gauge_shift_check(
        &x,
        &[Segment { k: 2, duration: 1.0 }],
        1e-3,
        2,
        &psi0,
        &|y| y.p[0] * y.p[0] + 0.3 * y.p[1],
        1e-8,
    )
    .unwrap();
    assert!(report.pass, "max dev {:.3e}", report.max_deviation);
}

#[test]
fn monodromy_stationary_orbit() {
    let x = freezing_point(3);
    let t = 2.0;
    let m = monodromy(&x, &[Segment { k: 2, duration: t }], 1e-3, 2).unwrap();
    let m2 = haldane_shastry(2, 3, 2).unwrap().matrix().unwrap();
    let expect = exp_i_hermitian(&m2, t);
    let d = (m.matrix().unwrap() - expect).norm();
    assert!(d < 1e-9, "monodromy deviation {d:.3e}");
}

#[test]
fn monodromy_free_rotation_is_identity() {
    // Single particle: no interaction, H^(1) = 0, orbit closes after 2 pi / p.
    let x = PhasePoint::new(vec![1.0], vec![0.4]);
    let m = monodromy(&x, &[Segment { k: 2, duration: 2.0 * PI }], 1e-4, 2).unwrap();
    let d = m.sub(&SpinOperator::identity(1, 2)).unwrap();
    assert!(d.op_norm().unwrap() < 1e-9);
}

/// Period of the two-body center-of-mass-frame oscillation by turning
/// point detection with secant refinement.
fn two_body_period(x0: &PhasePoint, step: f64) -> f64 {
    let mut crossings = Vec::new();
    let mut t = 0.0;
    let mut x = x0.clone();
    let mut prev_p = x.p[0];
    while crossings.len() < 2 && t < 50.0 {
        let traj = flow(&x, &[Segment { k: 2, duration: step }], step, &[]).unwrap();
        x = traj.last().clone();
        t += step;
        let cur_p = x.p[0];
        if prev_p.signum() != cur_p.signum() {
            // linear interpolation of the zero crossing
            let frac = prev_p / (prev_p - cur_p);
            crossings.push(t - step + frac * step);
        }
        prev_p = cur_p;
    }
    assert_eq!(crossings.len(), 2, "period detection failed");
    2.0 * (crossings[1] - crossings[0])
}

#[test]
fn monodromy_two_body_periodic_orbit() {
    let x0 = PhasePoint::new(vec![0.6, -0.6], vec![0.7, -0.7]);
    let period = two_body_period(&x0, 1e-3);
    // verify closure before asking for the monodromy
    let traj = flow(&x0, &[Segment { k: 2, duration: period }], 1e-4, &[]).unwrap();
    let closure = traj.last().dist(&x0);
    assert!(closure < 1e-7, "closure {closure:.3e}");
    let m = monodromy(&x0, &[Segment { k: 2, duration: period }], 1e-4, 2).unwrap();
    // eigenphase stability under step halving
    let m_half = monodromy(&x0, &[Segment { k: 2, duration: period }], 5e-5, 2).unwrap();
    let d = m.sub(&m_half).unwrap().op_norm().unwrap();
    assert!(d < 1e-7, "step-halving deviation {d:.3e}");
}
