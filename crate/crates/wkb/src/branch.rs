//! Branch machinery: joint integration of the classical trajectory, the
//! Jacobi field, the action quadrature and the spin transport; shooting
//! from the initial Lagrangian graph to target fibers.

use crate::symbol::{wrap_angle, WkbProblem};
use crate::{Result, WkbError};
use nalgebra::DVector;
use num_complex::Complex64;

/// Everything the asymptotic needs from one classical branch.
#[derive(Clone, Debug)]
pub struct BranchData {
    pub q0: f64,
    pub p0: f64,
    pub q_end: f64,
    pub p_end: f64,
    /// Hamilton-Jacobi action `int (p qdot - H) dtau + f(q0)`.
    pub action: f64,
    /// Endpoint Jacobi field `dq(t)/dq0`; the amplitude is
    /// `|jacobi|^{-1/2}`.
    pub jacobi: f64,
    /// Sign changes of the Jacobi field on `(0, t]`.
    pub maslov: u32,
    /// Transported spin vector (initial value `phi(q0)`).
    pub psi: DVector<Complex64>,
    pub caustic: bool,
}

impl BranchData {
    pub fn amplitude(&self) -> f64 {
        self.jacobi.abs().powf(-0.5)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ShootOptions {
    pub step: f64,
    /// Size of the scan grid over one period of starting points.
    pub scan: usize,
    /// Endpoint match tolerance for the refined root.
    pub match_tol: f64,
    /// Endpoint Jacobians smaller than this flag a caustic.
    pub caustic_tol: f64,
}

impl Default for ShootOptions {
    fn default() -> Self {
        ShootOptions {
            step: 1e-3,
            scan: 720,
            match_tol: 1e-10,
            caustic_tol: 1e-6,
        }
    }
}

/// Integrate one branch from `q0` on the graph `p = f'(q0)`: the
/// classical pair, the variational (Jacobi) pair seeded by the graph
/// slope, Simpson quadrature of the action integrand and RK4 transport
/// of the profile spinor.
pub fn integrate_branch(problem: &WkbProblem, q0: f64, t: f64, step: f64) -> Result<BranchData> {
    let sym = &problem.symbol;
    let mut nsteps = (t / step).ceil() as usize;
    nsteps += nsteps % 2; // Simpson wants an even panel count
    let nsteps = nsteps.max(2);
    let h = t / nsteps as f64;

    let mut q = q0;
    let mut p = problem.phase.d1(q0);
    let p0 = p;
    let mut dq = 1.0f64;
    let mut dp = problem.phase.d2(q0);
    let mut maslov = 0u32;
    let mut psi = problem.profile.eval(q0);
    let norm0 = psi.norm();

    // Simpson accumulation of p H_p - H at the nodes.
    let mut integrand = Vec::with_capacity(nsteps + 1);
    integrand.push(p * sym.h_p(p, q) - sym.h(p, q));

    type State = (f64, f64, f64, f64, DVector<Complex64>);
    let deriv = |st: &State| -> State {
        let (q, p, dq, dp, psi) = st;
        let hp = sym.h_p(*p, *q);
        let hq = sym.h_q(*p, *q);
        let hpp = sym.h_pp(*p, *q);
        let hpq = sym.h_pq(*p, *q);
        let hqq = sym.h_qq(*p, *q);
        let h1 = problem.h1.eval(*p, *q);
        (
            hp,
            -hq,
            hpq * dq + hpp * dp,
            -hqq * dq - hpq * dp,
            -(h1 * psi) * Complex64::i(),
        )
    };
    let advance = |st: &State, d: &State, w: f64| -> State {
        (
            st.0 + w * d.0,
            st.1 + w * d.1,
            st.2 + w * d.2,
            st.3 + w * d.3,
            &st.4 + &d.4 * Complex64::new(w, 0.0),
        )
    };

    for _ in 0..nsteps {
        let st = (q, p, dq, dp, psi.clone());
        let k1 = deriv(&st);
        let k2 = deriv(&advance(&st, &k1, h / 2.0));
        let k3 = deriv(&advance(&st, &k2, h / 2.0));
        let k4 = deriv(&advance(&st, &k3, h));
        let prev_dq = dq;
        q += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        p += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        dq += h / 6.0 * (k1.2 + 2.0 * k2.2 + 2.0 * k3.2 + k4.2);
        dp += h / 6.0 * (k1.3 + 2.0 * k2.3 + 2.0 * k3.3 + k4.3);
        psi += (&k1.4 + &k2.4 * Complex64::new(2.0, 0.0) + &k3.4 * Complex64::new(2.0, 0.0)
            + &k4.4)
            * Complex64::new(h / 6.0, 0.0);
        if prev_dq.signum() != dq.signum() && prev_dq != 0.0 {
            maslov += 1;
        }
        integrand.push(p * sym.h_p(p, q) - sym.h(p, q));
    }
    let drift = (psi.norm() - norm0).abs();
    if drift > 1e-6 * (1.0 + norm0) {
        return Err(WkbError::NormDrift(drift));
    }
    // composite Simpson
    let mut s = 0.0;
    let mut m = 0;
    while m + 2 <= nsteps {
        s += h / 3.0 * (integrand[m] + 4.0 * integrand[m + 1] + integrand[m + 2]);
        m += 2;
    }
    Ok(BranchData {
        q0,
        p0,
        q_end: q,
        p_end: p,
        action: s + problem.phase.value(q0),
        jacobi: dq,
        maslov,
        psi,
        caustic: false,
    })
}

/// Endpoint table over one period of starting points.
pub fn endpoint_scan(problem: &WkbProblem, t: f64, opts: &ShootOptions) -> Result<Vec<BranchData>> {
    let n = opts.scan;
    let mut table = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let q0 = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / n as f64;
        table.push(integrate_branch(problem, q0, t, opts.step)?);
    }
    Ok(table)
}

/// All branches hitting the fiber over `q_target` (modulo the period) in
/// time `t`: a sign-change scan over the endpoint table refined by the
/// secant method. Branches at caustics come back flagged.
pub fn shoot(
    problem: &WkbProblem,
    table: &[BranchData],
    q_target: f64,
    t: f64,
    opts: &ShootOptions,
) -> Result<Vec<BranchData>> {
    let mut out: Vec<BranchData> = Vec::new();
    for w in table.windows(2) {
        let da = wrap_angle(w[0].q_end - q_target);
        let db = wrap_angle(w[1].q_end - q_target);
        // skip wrap seams
        if da.abs() + db.abs() > std::f64::consts::PI {
            continue;
        }
        if da == 0.0 {
            push_root(problem, &mut out, w[0].clone(), opts);
            continue;
        }
        if da.signum() == db.signum() {
            continue;
        }
        // secant refinement on q0 -> wrap(q_end - q_target)
        let mut a = (w[0].q0, da);
        let mut b = (w[1].q0, db);
        let mut best: Option<BranchData> = None;
        for _ in 0..60 {
            let denom = b.1 - a.1;
            if denom == 0.0 {
                break;
            }
            let c = b.0 - b.1 * (b.0 - a.0) / denom;
            let br = integrate_branch(problem, c, t, opts.step)?;
            let dc = wrap_angle(br.q_end - q_target);
            let done = dc.abs() <= opts.match_tol;
            best = Some(br);
            if done {
                break;
            }
            if dc.signum() == a.1.signum() {
                a = (c, dc);
            } else {
                b = (c, dc);
            }
        }
        match best {
            Some(br) if wrap_angle(br.q_end - q_target).abs() <= opts.match_tol * 1e3 => {
                push_root(problem, &mut out, br, opts);
            }
            _ => return Err(WkbError::ShootingFailed(q_target)),
        }
    }
    Ok(out)
}

fn push_root(_: &WkbProblem, out: &mut Vec<BranchData>, mut br: BranchData, opts: &ShootOptions) {
    if br.jacobi.abs() < opts.caustic_tol {
        br.caustic = true;
    }
    // deduplicate roots found from both sides of a node
    if out.iter().any(|b| (b.q0 - br.q0).abs() < 1e-7) {
        return;
    }
    out.push(br);
}

/// Residual of the Hamilton-Jacobi equation
/// `dS/dt + H^(0)(dS/dq, q)` at `(q, t)`, with both derivatives taken
/// by centered differences of fresh single-branch solves.
pub fn hj_residual(
    problem: &WkbProblem,
    table: &[BranchData],
    q: f64,
    t: f64,
    dq: f64,
    dt: f64,
    opts: &ShootOptions,
) -> Result<f64> {
    // anchor on the branch through (q, t); perturbed solves follow the
    // branch with the nearest starting point
    let base = shoot(problem, table, q, t, opts)?
        .into_iter()
        .next()
        .ok_or(WkbError::ShootingFailed(q))?;
    let pick = |q_t: f64, time: f64| -> Result<BranchData> {
        let branches = shoot(problem, table, q_t, time, opts)?;
        branches
            .into_iter()
            .min_by(|a, b| {
                (a.q0 - base.q0)
                    .abs()
                    .partial_cmp(&(b.q0 - base.q0).abs())
                    .unwrap()
            })
            .ok_or(WkbError::ShootingFailed(q_t))
    };
    let s_qp = pick(q + dq, t)?.action;
    let s_qm = pick(q - dq, t)?.action;
    let s_tp = pick(q, t + dt)?.action;
    let s_tm = pick(q, t - dt)?.action;
    let sq = (s_qp - s_qm) / (2.0 * dq);
    let st = (s_tp - s_tm) / (2.0 * dt);
    Ok((st + problem.symbol.h(sq, q)).abs())
}
