//! Multi-time Hamilton-Jacobi actions on commuting classical
//! backgrounds: quadrature along time-plane paths, path independence
//! and the Lagrangian property of the orbit sheet.

use classical_cms::{grad_hamiltonian, hamiltonian, PhasePoint};
use serde::Serialize;

use crate::Result;

/// One leg of a time-plane path: flow the weighted combination
/// `sum_i w_i H_{k_i}` for `duration`. A single-entry weight list is an
/// axis-parallel leg; several entries make a diagonal leg.
#[derive(Clone, Debug)]
pub struct MultiTimeLeg {
    pub weights: Vec<(u32, f64)>,
    pub duration: f64,
}

fn combined_rhs(weights: &[(u32, f64)], x: &PhasePoint) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = x.n();
    let mut dp = vec![0.0; n];
    let mut dq = vec![0.0; n];
    for &(k, w) in weights {
        let g = grad_hamiltonian(k, x)?;
        for i in 0..n {
            dp[i] -= w * g.dq[i];
            dq[i] += w * g.dp[i];
        }
    }
    Ok((dp, dq))
}

/// Integrate the combined flow and accumulate the multi-time action
/// `int (sum_j p_j dq_j/dtau - sum_k H_k gammadot_k) dtau` by composite
/// Simpson on the step grid. Returns the endpoint and the action.
pub fn multitime_action(
    x0: &PhasePoint,
    legs: &[MultiTimeLeg],
    step: f64,
) -> Result<(PhasePoint, f64)> {
    let mut x = x0.clone();
    let mut action = 0.0;
    for leg in legs {
        let mut nsteps = (leg.duration.abs() / step).ceil() as usize;
        nsteps += nsteps % 2;
        let nsteps = nsteps.max(2);
        let h = leg.duration / nsteps as f64;
        let mut nodes = Vec::with_capacity(nsteps + 1);
        nodes.push(integrand(&leg.weights, &x)?);
        for _ in 0..nsteps {
            x = rk4(&leg.weights, &x, h)?;
            nodes.push(integrand(&leg.weights, &x)?);
        }
        let mut m = 0;
        while m + 2 <= nsteps {
            action += h / 3.0 * (nodes[m] + 4.0 * nodes[m + 1] + nodes[m + 2]);
            m += 2;
        }
    }
    Ok((x, action))
}

/// `sum_j p_j qdot_j - sum_k w_k H_k` along the combined flow.
fn integrand(weights: &[(u32, f64)], x: &PhasePoint) -> Result<f64> {
    let (_, dq) = combined_rhs(weights, x)?;
    let kinetic: f64 = x.p.iter().zip(&dq).map(|(p, v)| p * v).sum();
    let mut pot = 0.0;
    for &(k, w) in weights {
        pot += w * hamiltonian(k, x)?;
    }
    Ok(kinetic - pot)
}

fn rk4(weights: &[(u32, f64)], x: &PhasePoint, h: f64) -> Result<PhasePoint> {
    let n = x.n();
    let adv = |x: &PhasePoint, d: &(Vec<f64>, Vec<f64>), w: f64| {
        PhasePoint::new(
            x.p.iter().zip(&d.0).map(|(v, dd)| v + w * dd).collect(),
            x.q.iter().zip(&d.1).map(|(v, dd)| v + w * dd).collect(),
        )
    };
    let k1 = combined_rhs(weights, x)?;
    let k2 = combined_rhs(weights, &adv(x, &k1, h / 2.0))?;
    let k3 = combined_rhs(weights, &adv(x, &k2, h / 2.0))?;
    let k4 = combined_rhs(weights, &adv(x, &k3, h))?;
    let mut p = x.p.clone();
    let mut q = x.q.clone();
    for i in 0..n {
        p[i] += h / 6.0 * (k1.0[i] + 2.0 * k2.0[i] + 2.0 * k3.0[i] + k4.0[i]);
        q[i] += h / 6.0 * (k1.1[i] + 2.0 * k2.1[i] + 2.0 * k3.1[i] + k4.1[i]);
    }
    Ok(PhasePoint::new(p, q))
}

/// Path-independence data for two routes to the same multi-time point.
#[derive(Clone, Debug, Serialize)]
pub struct PathReport {
    pub action_first: f64,
    pub action_second: f64,
    pub action_gap: f64,
    pub endpoint_gap: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Compare the L-shaped route (pure `t_k` then pure `t_l`) against the
/// diagonal route to `(t_k, t_l)`.
pub fn path_independence_check(
    x0: &PhasePoint,
    k: u32,
    l: u32,
    t_k: f64,
    t_l: f64,
    step: f64,
    tol: f64,
) -> Result<PathReport> {
    let l_shape = [
        MultiTimeLeg {
            weights: vec![(k, 1.0)],
            duration: t_k,
        },
        MultiTimeLeg {
            weights: vec![(l, 1.0)],
            duration: t_l,
        },
    ];
    let diag = [MultiTimeLeg {
        weights: vec![(k, t_k), (l, t_l)],
        duration: 1.0,
    }];
    let (end_a, s_a) = multitime_action(x0, &l_shape, step)?;
    let (end_b, s_b) = multitime_action(x0, &diag, step)?;
    Ok(PathReport {
        action_first: s_a,
        action_second: s_b,
        action_gap: (s_a - s_b).abs(),
        endpoint_gap: end_a.dist(&end_b),
        tol,
        pass: (s_a - s_b).abs() <= tol,
    })
}

/// Pullback of the symplectic form to the orbit sheet:
/// `omega(X_k, X_l) = sum_j (Xk_q Xl_p - Xk_p Xl_q)_j`, sampled along
/// the diagonal orbit. Vanishes when the Hamiltonians Poisson-commute.
pub fn lagrangian_check(
    x0: &PhasePoint,
    k: u32,
    l: u32,
    t_max: f64,
    samples: usize,
    step: f64,
) -> Result<f64> {
    let mut worst = 0.0f64;
    let mut x = x0.clone();
    let h = t_max / samples as f64;
    for _ in 0..=samples {
        let gk = grad_hamiltonian(k, &x)?;
        let gl = grad_hamiltonian(l, &x)?;
        // X = (qdot, pdot) = (H_p, -H_q)
        let mut omega = 0.0;
        for j in 0..x.n() {
            omega += gk.dp[j] * (-gl.dq[j]) - (-gk.dq[j]) * gl.dp[j];
        }
        worst = worst.max(omega.abs());
        let leg = [(k, 0.5), (l, 0.5)];
        x = rk4(&leg, &x, h)?;
        let _ = step;
    }
    Ok(worst)
}
