//! Dynamics and Lax-structure tests with independent oracles.

use classical_cms::{
    flow, freezing_point, grad_hamiltonian, hamiltonian, lax, lax_det_exact, lax_spectrum,
    newton_from_power_sums, poisson_bracket, poisson_bracket_complex, tr_lax_power_exact,
    verify_fixed_point, PhasePoint, Segment,
};
use exactfun::{GaussianRational, Var};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::f64::consts::PI;

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> PhasePoint {
    // Angles kept apart so the collision guard stays safe.
    loop {
        let q: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        let p: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = PhasePoint::new(p, q);
        if n < 2 || x.min_separation() > 0.5 {
            return x;
        }
    }
}

#[test]
fn lax_matrix_two_body_antipodal() {
    // p = 0, z = (1, -1): M = [[0, 1/2], [1/2, 0]]
    let x = PhasePoint::new(vec![0.0, 0.0], vec![0.0, PI]);
    let l = lax(&x).unwrap().l;
    assert!((l[(0, 0)].norm()) < 1e-14);
    assert!((l[(0, 1)] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
    assert!((l[(1, 0)] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
}

#[test]
fn lax_single_particle() {
    let x = PhasePoint::new(vec![0.7], vec![1.1]);
    let l = lax(&x).unwrap().l;
    assert_eq!(l.nrows(), 1);
    assert!((l[(0, 0)] - Complex64::new(0.7, 0.0)).norm() < 1e-15);
}

#[test]
fn lax_traceless_at_freezing_point() {
    let x = freezing_point(3);
    let l = lax(&x).unwrap();
    assert!(l.l.trace().norm() < 1e-13);
    assert!(l.diag.norm() < 1e-13);
}

#[test]
fn h2_hand_value() {
    // H2 at n=2, p=(1,-1), z=(1,-1):
    // 1/2 (1 + 1) - z1 z2/(z1-z2)^2 = 1 - (-1/4) = 1.25
    let x = PhasePoint::new(vec![1.0, -1.0], vec![0.0, PI]);
    let h = hamiltonian(2, &x).unwrap();
    assert!((h - 1.25).abs() < 1e-12, "H2 = {h}");
}

#[test]
fn h1_is_total_momentum() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let x = random_point(&mut rng, 3);
        let h = hamiltonian(1, &x).unwrap();
        let expect: f64 = x.p.iter().sum();
        assert!((h - expect).abs() < 1e-12);
        let g = grad_hamiltonian(1, &x).unwrap();
        for i in 0..3 {
            assert!((g.dp[i] - 1.0).abs() < 1e-12);
            assert!(g.dq[i].abs() < 1e-12);
        }
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let eps = 1e-5;
    for _ in 0..10 {
        let x = random_point(&mut rng, 3);
        for k in [2u32, 3] {
            let g = grad_hamiltonian(k, &x).unwrap();
            for i in 0..x.n() {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp.p[i] += eps;
                xm.p[i] -= eps;
                let fd_p =
                    (hamiltonian(k, &xp).unwrap() - hamiltonian(k, &xm).unwrap()) / (2.0 * eps);
                let scale = 1.0 + g.dp[i].abs();
                assert!(
                    (fd_p - g.dp[i]).abs() / scale < 1e-6,
                    "dp k={k} i={i}: {} vs {}",
                    fd_p,
                    g.dp[i]
                );
                let mut xq = x.clone();
                let mut xr = x.clone();
                xq.q[i] += eps;
                xr.q[i] -= eps;
                let fd_q =
                    (hamiltonian(k, &xq).unwrap() - hamiltonian(k, &xr).unwrap()) / (2.0 * eps);
                let scale = 1.0 + g.dq[i].abs();
                assert!(
                    (fd_q - g.dq[i]).abs() / scale < 1e-6,
                    "dq k={k} i={i}: {} vs {}",
                    fd_q,
                    g.dq[i]
                );
            }
        }
    }
}

#[test]
fn hamiltonians_poisson_commute() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let x = random_point(&mut rng, 3);
        let g1 = grad_hamiltonian(1, &x).unwrap();
        let g2 = grad_hamiltonian(2, &x).unwrap();
        let g3 = grad_hamiltonian(3, &x).unwrap();
        assert!(poisson_bracket(&g1, &g2).abs() < 1e-10);
        assert!(poisson_bracket(&g2, &g3).abs() < 1e-9);
    }
}

#[test]
fn canonical_bracket_p_z() {
    // {p_1, z_1} = i z_1 with componentwise complex gradients
    let x = PhasePoint::new(vec![0.3, -0.2], vec![0.4, 2.0]);
    let z = x.z();
    let zero = vec![Complex64::new(0.0, 0.0); 2];
    let mut fp = zero.clone();
    fp[0] = Complex64::new(1.0, 0.0); // f = p_1
    let mut gq = zero.clone();
    gq[0] = Complex64::i() * z[0]; // g = z_1, dz/dq = i z
    let br = poisson_bracket_complex(&fp, &zero, &zero, &gq);
    assert!((br - Complex64::i() * z[0]).norm() < 1e-14);
}

#[test]
fn free_particle_rotates_uniformly() {
    // n = 1 under the t2 flow: q(t) = q0 + p t
    let x = PhasePoint::new(vec![0.8], vec![0.3]);
    let traj = flow(&x, &[Segment { k: 2, duration: 2.0 }], 1e-3, &[2]).unwrap();
    let end = traj.last();
    assert!((end.q[0] - (0.3 + 0.8 * 2.0)).abs() < 1e-10);
    assert!((end.p[0] - 0.8).abs() < 1e-12);
}

#[test]
fn energy_conserved_on_random_orbit() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let x = random_point(&mut rng, 3);
    let traj = flow(&x, &[Segment { k: 2, duration: 10.0 }], 1e-3, &[1, 2, 3]).unwrap();
    for k in [1, 2, 3] {
        let drift = traj.max_drift(k).unwrap();
        assert!(drift <= 1e-8, "H{k} drift {drift:.3e}");
    }
}

#[test]
fn freezing_point_layout() {
    let x2 = freezing_point(2);
    let z2 = x2.z();
    assert!((z2[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
    assert!((z2[1] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    let x4 = freezing_point(4);
    let z4 = x4.z();
    assert!((z4[0] - Complex64::new(0.0, 1.0)).norm() < 1e-13);
    assert!((z4[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-13);
    assert!((z4[2] - Complex64::new(0.0, -1.0)).norm() < 1e-13);
    assert!((z4[3] - Complex64::new(1.0, 0.0)).norm() < 1e-13);
}

#[test]
fn flow_is_stationary_at_freezing_point() {
    let x = freezing_point(3);
    let traj = flow(&x, &[Segment { k: 2, duration: 10.0 }], 1e-2, &[]).unwrap();
    let mut worst = 0.0f64;
    for s in &traj.states {
        worst = worst.max(s.dist(&x));
    }
    assert!(worst <= 1e-10, "t2 drift {worst:.3e}");
}

#[test]
fn t3_flow_at_freezing_point_is_rigid_rotation() {
    // dH_3(x_*) lies in span{dH_1}: every angle advances at the same
    // rate and momenta stay zero, a rotation of the whole configuration.
    let x = freezing_point(3);
    let traj = flow(&x, &[Segment { k: 3, duration: 10.0 }], 1e-2, &[]).unwrap();
    let end = traj.last();
    let shift = end.q[0] - x.q[0];
    for i in 0..3 {
        assert!((end.q[i] - x.q[i] - shift).abs() < 1e-10);
        assert!(end.p[i].abs() < 1e-10);
    }
    assert!(shift.abs() > 1e-3, "t3 flow should rotate the ring");
}

#[test]
fn fixed_point_report_passes() {
    for n in 2..=8 {
        let r = verify_fixed_point(n, &[0.37, 0.83, 1.41, 2.21, 3.13], 1e-11).unwrap();
        assert!(
            r.pass,
            "n={n}: g={:.2e} f={:.2e} dp={:.2e} dq={:.2e}",
            r.max_g, r.f_spread, r.dp_spread, r.dq_max
        );
    }
}

#[test]
fn isospectrality_along_flows() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let x = random_point(&mut rng, 3);
    let s0 = lax_spectrum(&x).unwrap();
    for k in [2u32, 3] {
        let traj = flow(&x, &[Segment { k, duration: 10.0 }], 1e-3, &[]).unwrap();
        let s1 = lax_spectrum(traj.last()).unwrap();
        for (a, b) in s0.iter().zip(&s1) {
            assert!((a - b).abs() < 1e-8, "k={k}: {a} vs {b}");
        }
    }
}

#[test]
fn flows_commute() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let x = random_point(&mut rng, 3);
    let ab = flow(
        &x,
        &[
            Segment { k: 2, duration: 0.7 },
            Segment { k: 3, duration: 0.4 },
        ],
        1e-4,
        &[],
    )
    .unwrap();
    let ba = flow(
        &x,
        &[
            Segment { k: 3, duration: 0.4 },
            Segment { k: 2, duration: 0.7 },
        ],
        1e-4,
        &[],
    )
    .unwrap();
    let d = ab.last().dist(ba.last());
    assert!(d < 1e-9, "flow order discrepancy {d:.3e}");
}

#[test]
fn newton_identities_at_exact_points() {
    // det(lambda + L) recomputed from power sums at random exact points.
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in [2usize, 3] {
        for _ in 0..5 {
            let p: Vec<GaussianRational> = (0..n)
                .map(|_| GaussianRational::from_ratio(rng.gen_range(-6..6), rng.gen_range(1..5)))
                .collect();
            let mut z: Vec<GaussianRational> = Vec::new();
            while z.len() < n {
                let re = GaussianRational::from_int(rng.gen_range(-9i64..9));
                let im = &GaussianRational::i() * &GaussianRational::from_int(rng.gen_range(1i64..9));
                let c = &re + &im;
                if !z.iter().any(|w| *w == c) {
                    z.push(c);
                }
            }
            // exact power sums from the symbolic trace
            let mut pt = BTreeMap::new();
            for (i, v) in z.iter().enumerate() {
                pt.insert(Var::Z(i as u32 + 1), v.clone());
            }
            for (i, v) in p.iter().enumerate() {
                pt.insert(Var::P(i as u32 + 1), v.clone());
            }
            pt.insert(Var::Hbar, GaussianRational::zero());
            pt.insert(Var::Lambda, GaussianRational::zero());
            let t: Vec<GaussianRational> = (1..=n as u32)
                .map(|k| {
                    tr_lax_power_exact(n, k)
                        .unwrap()
                        .eval_exact(&pt)
                        .unwrap()
                })
                .collect();
            let e = newton_from_power_sums(&t);
            for lam_i in [-2i64, 1, 3] {
                let lam = GaussianRational::from_int(lam_i);
                let det = lax_det_exact(&p, &z, &lam).unwrap();
                // det(lambda + L) = sum_k e_k lambda^{n-k}
                let mut expect = GaussianRational::zero();
                for (k, ek) in e.iter().enumerate() {
                    expect = &expect + &(ek * &lam.pow((n - k) as u32));
                }
                assert_eq!(det, expect, "n={n} lambda={lam_i}");
            }
        }
    }
}

#[test]
fn collision_is_detected() {
    let x = PhasePoint::new(vec![0.0, 0.0], vec![1.0, 1.0 + 1e-9]);
    assert!(lax(&x).is_err());
}

#[test]
fn csv_dump_has_expected_columns() {
    let x = PhasePoint::new(vec![0.5], vec![0.1]);
    let traj = flow(&x, &[Segment { k: 2, duration: 0.01 }], 1e-3, &[1, 2]).unwrap();
    let csv = traj.to_csv();
    let header = csv.lines().next().unwrap();
    assert_eq!(header, "t,p_1,q_1,H_1,H_2");
    assert_eq!(csv.lines().count(), traj.states.len() + 1);
}
