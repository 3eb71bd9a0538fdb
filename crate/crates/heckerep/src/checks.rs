//! Exact identity suites over the operator algebra.

use crate::hamiltonian::{restrict_to_symmetric, semiclassical_split, symmetric_hamiltonian};
use crate::operator::{Kind, NormalOrderedOperator, OpAlgebra};
use crate::Result;
use exactfun::{RationalFunction, Var};
use serde::Serialize;
use spinspace::Perm;

/// Outcome of one exact identity check. `witness` holds the first
/// offending coefficient when the identity fails.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub params: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl IdentityReport {
    fn from_zero(identity: &str, params: String, op: Result<NormalOrderedOperator>) -> Self {
        match op {
            Ok(op) if op.is_zero() => IdentityReport {
                identity: identity.into(),
                params,
                pass: true,
                witness: None,
            },
            Ok(op) => {
                let ((idx, w), f) = op.terms().iter().next().expect("nonzero");
                IdentityReport {
                    identity: identity.into(),
                    params,
                    pass: false,
                    witness: Some(format!("d^{:?} K{}: {}", idx, w, f.canonical_text())),
                }
            }
            Err(e) => IdentityReport {
                identity: identity.into(),
                params,
                pass: false,
                witness: Some(format!("error: {e}")),
            },
        }
    }
}

type Job = (
    String,
    String,
    Box<dyn Fn() -> Result<NormalOrderedOperator> + Send + Sync>,
);

fn run_jobs(jobs: Vec<Job>, parallel: bool) -> Vec<IdentityReport> {
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return jobs
            .into_par_iter()
            .map(|(id, params, f)| IdentityReport::from_zero(&id, params, f()))
            .collect();
    }
    let _ = parallel;
    jobs.into_iter()
        .map(|(id, params, f)| IdentityReport::from_zero(&id, params, f()))
        .collect()
}

fn kind_tag(kind: Kind) -> &'static str {
    match kind {
        Kind::Quantum => "quantum",
        Kind::Semiclassical => "semiclassical",
    }
}

/// Degenerate affine Hecke relations plus the coordinate commutators,
/// all as exact zero tests:
///
/// * `[d_i, d_j] = 0`
/// * `K_{i,i+1} d_i - d_{i+1} K_{i,i+1} - 1 = 0`
/// * `[d_i, K_{j,j+1}] = 0` for `i` not in `{j, j+1}`
/// * `[d_i, z_j] + z_{max(i,j)} K_{ij} = 0` for `i != j`
/// * `[d_i, z_i] - mom_i - sum_{j != i} z_{max(i,j)} K_{ij} = 0`, where
///   `mom_i` is `hbar z_i` quantum and `0` semiclassically
pub fn hecke_suite(n: usize, kind: Kind, parallel: bool) -> Vec<IdentityReport> {
    let alg = OpAlgebra::new(n, kind);
    let mut jobs: Vec<Job> = Vec::new();
    let tag = kind_tag(kind);
    for i in 1..=n {
        for j in (i + 1)..=n {
            let alg = alg.clone();
            jobs.push((
                "dunkl_commutativity".into(),
                format!("n={n} kind={tag} i={i} j={j}"),
                Box::new(move || alg.dunkl(i)?.commutator(&alg.dunkl(j)?)),
            ));
        }
    }
    for i in 1..n {
        let alg = alg.clone();
        jobs.push((
            "hecke_cross_relation".into(),
            format!("n={n} kind={tag} i={i}"),
            Box::new(move || {
                let k = alg.k_ij(i, i + 1);
                let lhs = k.mul(&alg.dunkl(i)?)?;
                let rhs = alg.dunkl(i + 1)?.mul(&k)?.add(&alg.one())?;
                lhs.sub(&rhs)
            }),
        ));
    }
    for i in 1..=n {
        for j in 1..n {
            if i == j || i == j + 1 {
                continue;
            }
            let alg = alg.clone();
            jobs.push((
                "dunkl_distant_transposition".into(),
                format!("n={n} kind={tag} i={i} j={j}"),
                Box::new(move || alg.dunkl(i)?.commutator(&alg.k_ij(j, j + 1))),
            ));
        }
    }
    // Coordinate commutators.
    for i in 1..=n {
        for j in 1..=n {
            let alg = alg.clone();
            if i != j {
                jobs.push((
                    "dunkl_coordinate_commutator".into(),
                    format!("n={n} kind={tag} i={i} j={j}"),
                    Box::new(move || {
                        let zj = alg.function(alg.rf_var(Var::Z(j as u32)));
                        let zmax = alg.rf_var(Var::Z(i.max(j) as u32));
                        let kij = alg.k_ij(i.min(j), i.max(j)).scale_fn(&zmax);
                        alg.dunkl(i)?.commutator(&zj)?.add(&kij)
                    }),
                ));
            } else {
                jobs.push((
                    "dunkl_coordinate_commutator_diagonal".into(),
                    format!("n={n} kind={tag} i={i}"),
                    Box::new(move || {
                        let zi = alg.function(alg.rf_var(Var::Z(i as u32)));
                        let mut expected = match alg.kind {
                            Kind::Quantum => {
                                // the Euler term contributes hbar z_i
                                alg.function(
                                    alg.rf_var(Var::Hbar).mul(&alg.rf_var(Var::Z(i as u32))),
                                )
                            }
                            Kind::Semiclassical => alg.zero(),
                        };
                        for j in 1..=alg.n {
                            if j == i {
                                continue;
                            }
                            let zmax = alg.rf_var(Var::Z(i.max(j) as u32));
                            expected = expected
                                .add(&alg.k_ij(i.min(j), i.max(j)).scale_fn(&zmax))?;
                        }
                        alg.dunkl(i)?.commutator(&zi)?.sub(&expected)
                    }),
                ));
            }
        }
    }
    run_jobs(jobs, parallel)
}

/// The cancellation identity behind the generating-function lemma,
/// checked as an exact operator identity of the semiclassical algebra
/// for every admissible `l`:
///
/// ```text
/// K_{l-1,l} ((lambda + D_{l-1}) sum_{j<l} z_l K_{jl}
///            - z_l K_{l-1,l} (lambda + D_l)) K_{l-1,l}
///   = (sum_{j<l-1} z_{l-1} K_{j,l-1}) (lambda + D_l)
/// ```
pub fn kcancel_suite(n: usize, parallel: bool) -> Vec<IdentityReport> {
    let alg = OpAlgebra::new(n, Kind::Semiclassical);
    let mut jobs: Vec<Job> = Vec::new();
    for l in 2..=n {
        let alg = alg.clone();
        jobs.push((
            "kcancel_identity".into(),
            format!("n={n} l={l}"),
            Box::new(move || {
                let lam_plus = |m: usize| -> Result<NormalOrderedOperator> {
                    alg.lambda().add(&alg.dunkl(m)?)
                };
                let zl = alg.rf_var(Var::Z(l as u32));
                let mut sum_jl = alg.zero();
                for j in 1..l {
                    sum_jl = sum_jl.add(&alg.k_ij(j, l).scale_fn(&zl))?;
                }
                let k_edge = alg.k_ij(l - 1, l);
                let inner = lam_plus(l - 1)?
                    .mul(&sum_jl)?
                    .sub(&k_edge.scale_fn(&zl).mul(&lam_plus(l)?)?)?;
                let lhs = k_edge.mul(&inner)?.mul(&k_edge)?;
                let zl1 = alg.rf_var(Var::Z(l as u32 - 1));
                let mut sum_jl1 = alg.zero();
                for j in 1..(l - 1) {
                    sum_jl1 = sum_jl1.add(&alg.k_ij(j, l - 1).scale_fn(&zl1))?;
                }
                let rhs = sum_jl1.mul(&lam_plus(l)?)?;
                lhs.sub(&rhs)
            }),
        ));
    }
    run_jobs(jobs, parallel)
}

/// Result of normal ordering the generating product
/// `t(lambda) = prod_j (lambda + D_j)`.
#[derive(Clone, Debug)]
pub struct GeneratingCheck {
    /// Identity-word coefficient `f_id(lambda; p, z)`.
    pub f_id: RationalFunction,
    pub reports: Vec<IdentityReport>,
}

/// Normal-order the generating product of semiclassical Dunkl operators
/// and check that every non-identity word cancels and that the product
/// commutes with each coordinate.
pub fn generating_suite(n: usize, parallel: bool) -> Result<GeneratingCheck> {
    let alg = OpAlgebra::new(n, Kind::Semiclassical);
    let mut t = alg.one();
    for j in 1..=n {
        t = t.mul(&alg.lambda().add(&alg.dunkl(j)?)?)?;
    }
    let mut reports = Vec::new();
    let id = Perm::identity(n);
    let zero_idx = vec![0u8; n];
    for w in t.words() {
        if w == id {
            continue;
        }
        let f = t.coefficient(&zero_idx, &w);
        reports.push(IdentityReport {
            identity: "generating_offdiagonal_vanishes".into(),
            params: format!("n={n} word={w}"),
            pass: f.is_zero(),
            witness: if f.is_zero() {
                None
            } else {
                Some(f.canonical_text())
            },
        });
    }
    if t.words().len() == 1 {
        reports.push(IdentityReport {
            identity: "generating_offdiagonal_vanishes".into(),
            params: format!("n={n} all-words"),
            pass: true,
            witness: None,
        });
    }
    let t2 = t.clone();
    let mut jobs: Vec<Job> = Vec::new();
    for k in 1..=n {
        let alg = alg.clone();
        let t = t2.clone();
        jobs.push((
            "generating_commutes_with_coordinates".into(),
            format!("n={n} k={k}"),
            Box::new(move || t.commutator(&alg.function(alg.rf_var(Var::Z(k as u32))))),
        ));
    }
    reports.extend(run_jobs(jobs, parallel));
    let f_id = t.coefficient(&zero_idx, &id);
    Ok(GeneratingCheck { f_id, reports })
}

/// Unity check data for degree `k`: the split of the restricted
/// Hamiltonian. The scalar part is returned for comparison against an
/// independent Lax-trace oracle.
pub struct UnityCheck {
    pub h0: RationalFunction,
    pub report: IdentityReport,
}

/// Split the restricted `H_k` and report whether its classical part is
/// free of spin words (the split itself errors otherwise).
pub fn unity_suite(n: usize, k: u32) -> UnityCheck {
    let alg = OpAlgebra::new(n, Kind::Quantum);
    let outcome = symmetric_hamiltonian(&alg, k)
        .and_then(|h| restrict_to_symmetric(&h))
        .and_then(|r| semiclassical_split(&r));
    match outcome {
        Ok(split) => UnityCheck {
            h0: split.h0,
            report: IdentityReport {
                identity: "unity_scalar_classical_part".into(),
                params: format!("n={n} k={k}"),
                pass: true,
                witness: None,
            },
        },
        Err(e) => UnityCheck {
            h0: RationalFunction::zero(exactfun::VarSet::full(n as u32)),
            report: IdentityReport {
                identity: "unity_scalar_classical_part".into(),
                params: format!("n={n} k={k}"),
                pass: false,
                witness: Some(format!("{e}")),
            },
        },
    }
}
