//! Transport of quantum data along classical orbits: Schrodinger
//! vectors, Heisenberg propagators, densities, gauge shifts, zero
//! curvature and monodromy.
//!
//! All evolutions integrate the coupled (classical, quantum) system
//! with one fixed-step RK4, evaluating the quantum generator at the
//! exact classical substage states.

use crate::field::HamiltonianField;
use crate::{HybridError, Result};
use classical_cms::{grad_hamiltonian, PhasePoint, Segment};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use spinspace::{SpinOperator, SpinVector};
use std::collections::BTreeMap;

/// Norm drift beyond this is a hard failure of the transport.
pub const NORM_DRIFT_HARD: f64 = 1e-6;

/// Quantum derivative at a substage: maps `(x, H1(x), Y) -> dY/dt`.
type QDeriv<'a> = &'a dyn Fn(&PhasePoint, &DMatrix<Complex64>, &DMatrix<Complex64>) -> DMatrix<Complex64>;

struct Joint {
    x: PhasePoint,
    y: DMatrix<Complex64>,
}

fn classical_rhs(k: u32, x: &PhasePoint) -> Result<(Vec<f64>, Vec<f64>)> {
    let g = grad_hamiltonian(k, x)?;
    Ok((g.dq.iter().map(|v| -v).collect(), g.dp))
}

fn advance(x: &PhasePoint, dp: &[f64], dq: &[f64], h: f64) -> PhasePoint {
    PhasePoint::new(
        x.p.iter().zip(dp).map(|(v, d)| v + d * h).collect(),
        x.q.iter().zip(dq).map(|(v, d)| v + d * h).collect(),
    )
}

fn rk4_joint(field: &HamiltonianField, st: &Joint, h: f64, qd: QDeriv) -> Result<Joint> {
    let k = field.k;
    let (kp1, kq1) = classical_rhs(k, &st.x)?;
    let h1_1 = field.eval(&st.x)?.matrix()?;
    let ky1 = qd(&st.x, &h1_1, &st.y);

    let x2 = advance(&st.x, &kp1, &kq1, h / 2.0);
    let y2 = &st.y + &ky1 * Complex64::new(h / 2.0, 0.0);
    let (kp2, kq2) = classical_rhs(k, &x2)?;
    let h1_2 = field.eval(&x2)?.matrix()?;
    let ky2 = qd(&x2, &h1_2, &y2);

    let x3 = advance(&st.x, &kp2, &kq2, h / 2.0);
    let y3 = &st.y + &ky2 * Complex64::new(h / 2.0, 0.0);
    let (kp3, kq3) = classical_rhs(k, &x3)?;
    let h1_3 = field.eval(&x3)?.matrix()?;
    let ky3 = qd(&x3, &h1_3, &y3);

    let x4 = advance(&st.x, &kp3, &kq3, h);
    let y4 = &st.y + &ky3 * Complex64::new(h, 0.0);
    let (kp4, kq4) = classical_rhs(k, &x4)?;
    let h1_4 = field.eval(&x4)?.matrix()?;
    let ky4 = qd(&x4, &h1_4, &y4);

    let n = st.x.n();
    let mut p = st.x.p.clone();
    let mut q = st.x.q.clone();
    for i in 0..n {
        p[i] += h / 6.0 * (kp1[i] + 2.0 * kp2[i] + 2.0 * kp3[i] + kp4[i]);
        q[i] += h / 6.0 * (kq1[i] + 2.0 * kq2[i] + 2.0 * kq3[i] + kq4[i]);
    }
    let y = &st.y
        + (ky1 + ky2 * Complex64::new(2.0, 0.0) + ky3 * Complex64::new(2.0, 0.0) + ky4)
            * Complex64::new(h / 6.0, 0.0);
    Ok(Joint {
        x: PhasePoint::new(p, q),
        y,
    })
}

/// Walk a multi-time schedule integrating the joint system; calls the
/// observer after every accepted step.
fn integrate_schedule(
    x0: &PhasePoint,
    y0: DMatrix<Complex64>,
    schedule: &[Segment],
    step: f64,
    local_dim: usize,
    qd: QDeriv,
    mut observe: impl FnMut(f64, &PhasePoint, &DMatrix<Complex64>),
) -> Result<(PhasePoint, DMatrix<Complex64>)> {
    let mut fields: BTreeMap<u32, HamiltonianField> = BTreeMap::new();
    let mut st = Joint {
        x: x0.clone(),
        y: y0,
    };
    let mut t_accum = 0.0;
    observe(0.0, &st.x, &st.y);
    for seg in schedule {
        if !fields.contains_key(&seg.k) {
            fields.insert(seg.k, HamiltonianField::new(seg.k, x0.n(), local_dim)?);
        }
        let field = &fields[&seg.k];
        let dir = seg.duration.signum();
        let total = seg.duration.abs();
        let mut advanced = 0.0;
        while advanced < total - 1e-15 {
            let h = step.min(total - advanced);
            st = rk4_joint(field, &st, dir * h, qd)?;
            advanced += h;
            observe(t_accum + dir * advanced, &st.x, &st.y);
        }
        t_accum += seg.duration;
    }
    Ok((st.x, st.y))
}

/// Transported Schrodinger vector along a multi-time orbit.
#[derive(Clone, Debug)]
pub struct TransportState {
    pub psi: SpinVector,
    pub end: PhasePoint,
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    /// `|<psi(0), psi(t)>|` per recorded time.
    pub fidelity_to_initial: Vec<f64>,
}

impl TransportState {
    pub fn max_norm_drift(&self) -> f64 {
        let n0 = self.norms[0];
        self.norms.iter().map(|n| (n - n0).abs()).fold(0.0, f64::max)
    }

    /// CSV dump: `t, norm, fidelity, Re a_0, Im a_0, ...` of the final
    /// state only carries the header row plus per-time norm data.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,norm,fidelity\n");
        for i in 0..self.times.len() {
            s.push_str(&format!(
                "{:.9e},{:.12e},{:.12e}\n",
                self.times[i], self.norms[i], self.fidelity_to_initial[i]
            ));
        }
        s
    }
}

/// Integrate `dpsi/dt_k = -i H^(1)_k(x(t)) psi` along the schedule.
pub fn transport(
    x0: &PhasePoint,
    schedule: &[Segment],
    step: f64,
    local_dim: usize,
    psi0: &SpinVector,
) -> Result<TransportState> {
    let y0 = DMatrix::from_column_slice(psi0.dim(), 1, psi0.amp.as_slice());
    let psi0c = psi0.clone();
    let mut times = Vec::new();
    let mut norms = Vec::new();
    let mut fid = Vec::new();
    let qd: QDeriv = &|_x, h1, y| -(h1 * y) * Complex64::i();
    let (end, y) = integrate_schedule(x0, y0, schedule, step, local_dim, qd, |t, _x, y| {
        times.push(t);
        norms.push(y.norm());
        let overlap: Complex64 = psi0c
            .amp
            .iter()
            .zip(y.column(0).iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        fid.push(overlap.norm() / (psi0c.norm() * psi0c.norm()));
    })?;
    let psi = SpinVector {
        sites: psi0.sites,
        local_dim: psi0.local_dim,
        amp: DVector::from_column_slice(y.column(0).as_slice()),
    };
    let out = TransportState {
        psi,
        end,
        times,
        norms,
        fidelity_to_initial: fid,
    };
    if out.max_norm_drift() > NORM_DRIFT_HARD * (1.0 + psi0.norm()) {
        return Err(HybridError::NormDrift(out.max_norm_drift()));
    }
    Ok(out)
}

/// The fiber propagator of the Heisenberg picture at the launch point:
/// `dU/dt = i U H^(1)(x(t))`, `U(0) = 1`.
pub fn heisenberg_propagator(
    x0: &PhasePoint,
    schedule: &[Segment],
    step: f64,
    local_dim: usize,
) -> Result<(SpinOperator, PhasePoint)> {
    let dim = local_dim.pow(x0.n() as u32);
    let qd: QDeriv = &|_x, h1, y| (y * h1) * Complex64::i();
    let (end, u) = integrate_schedule(
        x0,
        DMatrix::identity(dim, dim),
        schedule,
        step,
        local_dim,
        qd,
        |_, _, _| {},
    )?;
    Ok((SpinOperator::from_dense(x0.n(), local_dim, u), end))
}

/// Heisenberg evolution of an observable field:
/// `s_x(t) = U_x(t) s(x(t)) U_x(t)^{-1}`.
pub fn heisenberg_evolve(
    s_field: &dyn Fn(&PhasePoint) -> Result<SpinOperator>,
    x0: &PhasePoint,
    schedule: &[Segment],
    step: f64,
    local_dim: usize,
) -> Result<SpinOperator> {
    let (u, end) = heisenberg_propagator(x0, schedule, step, local_dim)?;
    let um = u.matrix()?;
    let unit_dev = (um.adjoint() * &um - DMatrix::identity(um.nrows(), um.ncols())).norm();
    if unit_dev > 1e-7 {
        return Err(HybridError::NotUnitary(unit_dev));
    }
    let s_end = s_field(&end)?.matrix()?;
    Ok(SpinOperator::from_dense(
        x0.n(),
        local_dim,
        &um * s_end * um.adjoint(),
    ))
}

/// Density attached to a classical point.
#[derive(Clone, Debug)]
pub struct HybridDensity {
    pub at: PhasePoint,
    pub rho: SpinOperator,
    pub weight: f64,
}

impl HybridDensity {
    pub fn pure(at: PhasePoint, v: &SpinVector) -> Self {
        let dim = v.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = v.amp[r] * v.amp[c].conj();
            }
        }
        HybridDensity {
            at,
            rho: SpinOperator::from_dense(v.sites, v.local_dim, m),
            weight: 1.0,
        }
    }

    pub fn trace(&self) -> Result<Complex64> {
        Ok(self.rho.trace()?)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let m = self.rho.matrix()?;
        let ev = nalgebra::SymmetricEigen::new(m).eigenvalues;
        Ok(ev.iter().cloned().fold(f64::INFINITY, f64::min))
    }
}

/// Evolve a density along the orbit: `drho/dt = -i [H^(1)(x(t)), rho]`,
/// carrying the base point with the flow. Trace and positivity are
/// checked on the result.
pub fn density_evolve(
    rho0: &HybridDensity,
    schedule: &[Segment],
    step: f64,
    local_dim: usize,
) -> Result<HybridDensity> {
    let y0 = rho0.rho.matrix()?;
    let tr0 = y0.trace();
    let qd: QDeriv = &|_x, h1, y| -(h1 * y - y * h1) * Complex64::i();
    let (end, y) = integrate_schedule(&rho0.at, y0, schedule, step, local_dim, qd, |_, _, _| {})?;
    let out = HybridDensity {
        at: end,
        rho: SpinOperator::from_dense(rho0.rho.sites, local_dim, y),
        weight: rho0.weight,
    };
    let tr = out.trace()?;
    if (tr - tr0).norm() > 1e-9 * (1.0 + tr0.norm()) {
        return Err(HybridError::TraceDrift((tr - tr0).norm()));
    }
    if out.min_eigenvalue()? < -1e-9 {
        return Err(HybridError::PositivityLoss(out.min_eigenvalue()?));
    }
    Ok(out)
}

/// `E_rho(s) = weight * Tr(rho s)`.
pub fn expectation_value(rho: &HybridDensity, s: &SpinOperator) -> Result<Complex64> {
    let m = rho.rho.matrix()? * s.matrix()?;
    Ok(m.trace() * Complex64::new(rho.weight, 0.0))
}

/// Outcome of the gauge-shift comparison.
#[derive(Clone, Debug, Serialize)]
pub struct GaugeReport {
    pub max_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Transport `v` with `H^(1)` and `w` with `H^(1) + z`, then compare
/// `w(t)` against `e^{-i theta(t)} v(t)` with
/// `theta(t) = int_0^t z(x(tau)) dtau` computed by an independent
/// composite-Simpson quadrature on the step grid.
///
/// The sign convention is pinned by the transport equation
/// `dpsi/dt = -i H^(1) psi`: adding a central `z` multiplies the
/// transported fiber vector by `e^{-i int z}`.
pub fn gauge_shift_check(
    x0: &PhasePoint,
    schedule: &[Segment],
    step: f64,
    local_dim: usize,
    psi0: &SpinVector,
    zfield: &dyn Fn(&PhasePoint) -> f64,
    tol: f64,
) -> Result<GaugeReport> {
    // v with plain H1, recording the state and z(x) on the grid
    let y0 = DMatrix::from_column_slice(psi0.dim(), 1, psi0.amp.as_slice());
    let qd_v: QDeriv = &|_x, h1, y| -(h1 * y) * Complex64::i();
    let mut v_states: Vec<DMatrix<Complex64>> = Vec::new();
    let mut z_vals: Vec<f64> = Vec::new();
    integrate_schedule(x0, y0.clone(), schedule, step, local_dim, qd_v, |_t, x, y| {
        v_states.push(y.clone());
        z_vals.push(zfield(x));
    })?;
    // w with H1 + z
    let qd_w: QDeriv = &|x, h1, y| {
        let z = zfield(x);
        let shifted = h1 + DMatrix::identity(h1.nrows(), h1.ncols()) * Complex64::new(z, 0.0);
        -(shifted * y) * Complex64::i()
    };
    let mut w_states: Vec<DMatrix<Complex64>> = Vec::new();
    integrate_schedule(x0, y0, schedule, step, local_dim, qd_w, |_t, _x, y| {
        w_states.push(y.clone());
    })?;
    // theta by cumulative Simpson over panel pairs; compare on even nodes
    let mut max_dev = 0.0f64;
    let mut theta = 0.0;
    let mut idx = 0;
    while idx + 2 < v_states.len() + 1 {
        if idx > 0 {
            // nothing: theta carried forward
        }
        let dev = {
            let phase = Complex64::new(0.0, -theta).exp();
            (&w_states[idx] - &v_states[idx] * phase).norm()
        };
        max_dev = max_dev.max(dev);
        if idx + 2 >= v_states.len() {
            break;
        }
        theta += step / 3.0 * (z_vals[idx] + 4.0 * z_vals[idx + 1] + z_vals[idx + 2]);
        idx += 2;
    }
    // final node comparison when the grid ends on an even index
    if idx < v_states.len() {
        let phase = Complex64::new(0.0, -theta).exp();
        let dev = (&w_states[idx] - &v_states[idx] * phase).norm();
        max_dev = max_dev.max(dev);
    }
    Ok(GaugeReport {
        max_deviation: max_dev,
        tol,
        pass: max_dev <= tol,
    })
}

/// Centered-difference residual of the zero-curvature condition
/// `d_k H_l - d_l H_k + i [H_k, H_l]` at a point, Frobenius norm.
pub fn zero_curvature_residual(
    x0: &PhasePoint,
    k: u32,
    l: u32,
    eps: f64,
    local_dim: usize,
) -> Result<f64> {
    assert_ne!(k, l);
    let n = x0.n();
    let fk = HamiltonianField::new(k, n, local_dim)?;
    let fl = HamiltonianField::new(l, n, local_dim)?;
    let along = |m: u32, dt: f64| -> Result<PhasePoint> {
        let traj = classical_cms::flow(x0, &[Segment { k: m, duration: dt }], dt.abs(), &[])
            .map_err(HybridError::from)?;
        Ok(traj.last().clone())
    };
    let dk_hl = (fl.eval(&along(k, eps)?)?.matrix()? - fl.eval(&along(k, -eps)?)?.matrix()?)
        / Complex64::new(2.0 * eps, 0.0);
    let dl_hk = (fk.eval(&along(l, eps)?)?.matrix()? - fk.eval(&along(l, -eps)?)?.matrix()?)
        / Complex64::new(2.0 * eps, 0.0);
    let hk = fk.eval(x0)?.matrix()?;
    let hl = fl.eval(x0)?.matrix()?;
    let comm = (&hk * &hl - &hl * &hk) * Complex64::i();
    Ok((dk_hl - dl_hk + comm).norm())
}

/// Monodromy of a closed orbit: `Pexp(i int_0^T H^(1)(x(t)) dt)`,
/// integrated as `dU/dt = i H^(1)(x(t)) U`. Errors when the orbit is
/// not closed or unitarity degrades.
pub fn monodromy(
    x0: &PhasePoint,
    schedule: &[Segment],
    step: f64,
    local_dim: usize,
) -> Result<SpinOperator> {
    let dim = local_dim.pow(x0.n() as u32);
    let qd: QDeriv = &|_x, h1, y| (h1 * y) * Complex64::i();
    let (end, u) = integrate_schedule(
        x0,
        DMatrix::identity(dim, dim),
        schedule,
        step,
        local_dim,
        qd,
        |_, _, _| {},
    )?;
    let closure = end.dist(x0);
    if closure > 1e-8 {
        return Err(HybridError::OrbitNotClosed(closure));
    }
    let unit_dev = (u.adjoint() * &u - DMatrix::identity(dim, dim)).norm();
    if unit_dev > 1e-8 {
        return Err(HybridError::NotUnitary(unit_dev));
    }
    Ok(SpinOperator::from_dense(x0.n(), local_dim, u))
}

/// `exp(i t H)` for Hermitian `H` through its eigendecomposition.
pub fn exp_i_hermitian(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let dim = h.nrows();
    let mut d = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        d[(i, i)] = (Complex64::i() * eig.eigenvalues[i] * t).exp();
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Sorted real spectrum of a Hermitian operator.
pub fn hermitian_spectrum(op: &SpinOperator) -> Result<Vec<f64>> {
    let m = op.matrix()?;
    let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(ev)
}
