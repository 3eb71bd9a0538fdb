//! Assembly of the semiclassical field over a grid and convergence
//! tables against the reference solution.

use crate::branch::{endpoint_scan, shoot, BranchData, ShootOptions};
use crate::symbol::WkbProblem;
use crate::Result;
use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Copy, Debug)]
pub struct AssembleOptions {
    pub shoot: ShootOptions,
    /// Phase added per Jacobi-field sign change, in radians. The
    /// default `-pi/2` is pinned by matching the reference solution
    /// across a focus.
    pub maslov_phase: f64,
    /// Fan the grid targets out over the thread pool (no effect when
    /// the `parallel` feature is disabled).
    pub parallel: bool,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        AssembleOptions {
            shoot: ShootOptions::default(),
            maslov_phase: -std::f64::consts::FRAC_PI_2,
            parallel: true,
        }
    }
}

/// The assembled asymptotic on a grid, one field per `hbar`, with the
/// caustic mask of excluded points.
pub struct AssembledField {
    pub grid: Vec<f64>,
    pub hbars: Vec<f64>,
    /// `fields[h][i]`: spin vector at grid point `i` for `hbars[h]`.
    pub fields: Vec<Vec<DVector<Complex64>>>,
    pub caustic_mask: Vec<bool>,
    /// Branch count per grid point.
    pub branch_counts: Vec<usize>,
}

/// `psi(q, t) = sum_alpha D^alpha exp(i S^alpha/hbar - i pi mu_alpha/2)
/// Psi^alpha`.
///
/// The Maslov phase per Jacobi-field sign change is `-pi/2`, pinned by
/// matching the reference solution across a focus.
pub fn assemble(
    problem: &WkbProblem,
    grid: &[f64],
    t: f64,
    hbars: &[f64],
    opts: &AssembleOptions,
) -> Result<AssembledField> {
    let table = endpoint_scan(problem, t, &opts.shoot)?;
    let dim = problem.spin_dim();
    let per_point = |&q: &f64| -> Result<(Vec<BranchData>, bool)> {
        let branches = shoot(problem, &table, q, t, &opts.shoot)?;
        let caustic = branches.iter().any(|b| b.caustic);
        Ok((branches, caustic))
    };
    #[cfg(feature = "parallel")]
    let shot: Result<Vec<(Vec<BranchData>, bool)>> = {
        use rayon::prelude::*;
        grid.par_iter().map(per_point).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let shot: Result<Vec<(Vec<BranchData>, bool)>> = grid.iter().map(per_point).collect();
    let shot = shot?;

    let mut fields = vec![Vec::with_capacity(grid.len()); hbars.len()];
    let mut caustic_mask = Vec::with_capacity(grid.len());
    let mut branch_counts = Vec::with_capacity(grid.len());
    for (branches, caustic) in &shot {
        caustic_mask.push(*caustic);
        branch_counts.push(branches.len());
        for (hi, &hbar) in hbars.iter().enumerate() {
            let mut v = DVector::<Complex64>::zeros(dim);
            if !caustic {
                for b in branches {
                    let phase = Complex64::new(
                        0.0,
                        b.action / hbar + opts.maslov_phase * b.maslov as f64,
                    )
                    .exp();
                    v += &b.psi * (phase * Complex64::new(b.amplitude(), 0.0));
                }
            }
            fields[hi].push(v);
        }
    }
    Ok(AssembledField {
        grid: grid.to_vec(),
        hbars: hbars.to_vec(),
        fields,
        caustic_mask,
        branch_counts,
    })
}

impl AssembledField {
    /// CSV dump: `q, Re psi_s, Im psi_s, ...` per spin index for one
    /// `hbar` slot.
    pub fn to_csv(&self, hbar_index: usize) -> String {
        let dim = self.fields[hbar_index][0].len();
        let mut s = String::from("q");
        for c in 0..dim {
            s.push_str(&format!(",re_{c},im_{c}"));
        }
        s.push_str(",caustic\n");
        for (i, q) in self.grid.iter().enumerate() {
            s.push_str(&format!("{q:.9e}"));
            for c in 0..dim {
                let a = self.fields[hbar_index][i][c];
                s.push_str(&format!(",{:.12e},{:.12e}", a.re, a.im));
            }
            s.push_str(if self.caustic_mask[i] { ",1\n" } else { ",0\n" });
        }
        s
    }
}

/// One row of the convergence table.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub hbar: f64,
    pub l2_error: f64,
}

/// Least-squares slope of `log err` against `log hbar`: the empirical
/// order of the asymptotic.
pub fn convergence_study(rows: &[ConvergenceRow]) -> f64 {
    let n = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|r| r.hbar.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.l2_error.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}
