//! Multi-time flows by fixed-step RK4 in `(p, q)` with a collision
//! proximity monitor. The flows are non-separable, so conservation is
//! monitored instead of enforced; step halving engages when coordinates
//! approach each other.

use crate::{grad_hamiltonian, hamiltonian, CmsError, PhasePoint, Result};
use serde::Serialize;

/// One leg of a multi-time schedule: flow of `H_k` for `duration`
/// (negative durations integrate backwards).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Segment {
    pub k: u32,
    pub duration: f64,
}

/// Discretized multi-time orbit. States are recorded at every accepted
/// RK4 step, so the grid spacing within a segment equals the requested
/// step except near collisions.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub schedule: Vec<Segment>,
    /// Cumulative times (over all segments), starting at zero.
    pub times: Vec<f64>,
    pub states: Vec<PhasePoint>,
    /// Index of the first state of each segment.
    pub segment_starts: Vec<usize>,
    /// Monitored Hamiltonian indices and their recorded values per state.
    pub monitored: Vec<u32>,
    pub ham_values: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn last(&self) -> &PhasePoint {
        self.states.last().expect("nonempty trajectory")
    }

    pub fn first(&self) -> &PhasePoint {
        self.states.first().expect("nonempty trajectory")
    }

    /// Largest drift of a monitored Hamiltonian over the whole orbit.
    pub fn max_drift(&self, k: u32) -> Option<f64> {
        let col = self.monitored.iter().position(|&m| m == k)?;
        let vals: Vec<f64> = self.ham_values.iter().map(|row| row[col]).collect();
        let first = *vals.first()?;
        vals.iter()
            .map(|v| (v - first).abs())
            .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.max(d))))
    }

    /// CSV dump: `t, p_1..p_n, q_1..q_n, H_<m>...` per recorded state.
    pub fn to_csv(&self) -> String {
        let n = self.first().n();
        let mut s = String::from("t");
        for i in 1..=n {
            s.push_str(&format!(",p_{i}"));
        }
        for i in 1..=n {
            s.push_str(&format!(",q_{i}"));
        }
        for m in &self.monitored {
            s.push_str(&format!(",H_{m}"));
        }
        s.push('\n');
        for (idx, x) in self.states.iter().enumerate() {
            s.push_str(&format!("{:.12e}", self.times[idx]));
            for v in &x.p {
                s.push_str(&format!(",{v:.12e}"));
            }
            for v in &x.q {
                s.push_str(&format!(",{v:.12e}"));
            }
            for h in &self.ham_values[idx] {
                s.push_str(&format!(",{h:.12e}"));
            }
            s.push('\n');
        }
        s
    }
}

fn rhs(k: u32, x: &PhasePoint) -> Result<(Vec<f64>, Vec<f64>)> {
    let g = grad_hamiltonian(k, x)?;
    // q' = dH/dp, p' = -dH/dq
    Ok((g.dq.iter().map(|v| -v).collect(), g.dp))
}

fn rk4_step(k: u32, x: &PhasePoint, h: f64) -> Result<PhasePoint> {
    let n = x.n();
    let (kp1, kq1) = rhs(k, x)?;
    let mid1 = advance(x, &kp1, &kq1, h / 2.0);
    let (kp2, kq2) = rhs(k, &mid1)?;
    let mid2 = advance(x, &kp2, &kq2, h / 2.0);
    let (kp3, kq3) = rhs(k, &mid2)?;
    let end = advance(x, &kp3, &kq3, h);
    let (kp4, kq4) = rhs(k, &end)?;
    let mut p = x.p.clone();
    let mut q = x.q.clone();
    for i in 0..n {
        p[i] += h / 6.0 * (kp1[i] + 2.0 * kp2[i] + 2.0 * kp3[i] + kp4[i]);
        q[i] += h / 6.0 * (kq1[i] + 2.0 * kq2[i] + 2.0 * kq3[i] + kq4[i]);
    }
    Ok(PhasePoint::new(p, q))
}

fn advance(x: &PhasePoint, dp: &[f64], dq: &[f64], h: f64) -> PhasePoint {
    let p = x.p.iter().zip(dp).map(|(v, d)| v + d * h).collect();
    let q = x.q.iter().zip(dq).map(|(v, d)| v + d * h).collect();
    PhasePoint::new(p, q)
}

/// Proximity threshold that triggers step halving.
pub const HALVING_TOL: f64 = 1e-3;
const MAX_HALVINGS: u32 = 20;

/// Integrate a multi-time schedule from `x0`, recording every step and
/// the requested conserved quantities.
pub fn flow(
    x0: &PhasePoint,
    schedule: &[Segment],
    step: f64,
    monitored: &[u32],
) -> Result<Trajectory> {
    assert!(step > 0.0);
    x0.collision_guard()?;
    let mut traj = Trajectory {
        schedule: schedule.to_vec(),
        times: vec![0.0],
        states: vec![x0.clone()],
        segment_starts: Vec::new(),
        monitored: monitored.to_vec(),
        ham_values: vec![monitor(monitored, x0)?],
    };
    let mut t_accum = 0.0;
    for seg in schedule {
        traj.segment_starts.push(traj.states.len() - 1);
        let dir = seg.duration.signum();
        if seg.duration == 0.0 {
            continue;
        }
        let total = seg.duration.abs();
        let mut advanced = 0.0;
        let mut x = traj.last().clone();
        while advanced < total - 1e-15 {
            let mut h = step.min(total - advanced);
            // step halving near coordinate collisions
            let mut halvings = 0;
            while x.min_separation() < HALVING_TOL && halvings < MAX_HALVINGS {
                h /= 2.0;
                halvings += 1;
            }
            if h < 1e-14 {
                return Err(CmsError::StepUnderflow(t_accum + dir * advanced));
            }
            let next = rk4_step(seg.k, &x, dir * h)?;
            if next.n() >= 2 && next.min_separation() < crate::COLLISION_TOL {
                return Err(CmsError::CollisionDuringFlow {
                    at_time: t_accum + dir * advanced,
                    partial: traj,
                });
            }
            advanced += h;
            x = next.clone();
            traj.times.push(t_accum + dir * advanced);
            traj.ham_values.push(monitor(monitored, &x)?);
            traj.states.push(next);
        }
        t_accum += seg.duration;
    }
    Ok(traj)
}

fn monitor(monitored: &[u32], x: &PhasePoint) -> Result<Vec<f64>> {
    monitored.iter().map(|&k| hamiltonian(k, x)).collect()
}
