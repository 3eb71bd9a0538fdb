//! Symmetric Hamiltonians, restriction to the spin space and the
//! semiclassical split.

use crate::operator::{DerivIdx, Kind, NormalOrderedOperator, OpAlgebra};
use crate::{HeckeError, Result};
use exactfun::{GaussianRational, RationalFunction, Var, VarSet};
use smallvec::SmallVec;
use spinspace::Perm;
use std::collections::BTreeMap;

/// Cost guard for exact normal ordering.
pub const MAX_N: usize = 4;
pub const MAX_K: u32 = 4;

/// `H_k = (1/k) sum_i d_i^k`, normal ordered.
pub fn symmetric_hamiltonian(alg: &OpAlgebra, k: u32) -> Result<NormalOrderedOperator> {
    if k < 1 || k > MAX_K || alg.n > MAX_N {
        return Err(HeckeError::CostGuard(alg.n, k));
    }
    let mut acc = alg.zero();
    for i in 1..=alg.n {
        acc = acc.add(&alg.dunkl(i)?.pow(k)?)?;
    }
    Ok(acc.scale(&GaussianRational::from_ratio(1, k as i64)))
}

/// Differential operator with spin-operator coefficients, written as
/// `sum f_{sigma,alpha}(z; hbar) d^alpha rho(sigma)` where `rho` is the
/// spin representation of the symmetric group.
#[derive(Clone, Debug)]
pub struct RestrictedOperator {
    pub n: usize,
    pub terms: BTreeMap<(DerivIdx, Perm), RationalFunction>,
}

impl RestrictedOperator {
    pub fn zero(n: usize) -> Self {
        RestrictedOperator {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, idx: DerivIdx, sigma: Perm, f: RationalFunction) {
        if f.is_zero() {
            return;
        }
        match self.terms.entry((idx, sigma)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(f);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&f);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for ((idx, s), f) in &rhs.terms {
            out.insert(idx.clone(), s.clone(), f.clone());
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = self.clone();
        out.terms.retain(|_, f| {
            *f = f.scale(c);
            !f.is_zero()
        });
        out
    }

    /// Exact coefficient-level equality.
    pub fn equal(&self, rhs: &Self) -> bool {
        if self.terms.len() != rhs.terms.len() {
            return false;
        }
        self.terms.iter().all(|(k, f)| match rhs.terms.get(k) {
            Some(g) => f.equal(g),
            None => false,
        })
    }

    /// First key whose coefficients differ (diagnostic for goldens).
    pub fn first_difference(&self, rhs: &Self) -> Option<String> {
        for (k, f) in &self.terms {
            match rhs.terms.get(k) {
                Some(g) if f.equal(g) => {}
                Some(g) => {
                    return Some(format!(
                        "key {:?}/{}: {} vs {}",
                        k.0,
                        k.1,
                        f.canonical_text(),
                        g.canonical_text()
                    ))
                }
                None => return Some(format!("key {:?}/{} missing on rhs", k.0, k.1)),
            }
        }
        for (k, _) in &rhs.terms {
            if !self.terms.contains_key(k) {
                return Some(format!("key {:?}/{} missing on lhs", k.0, k.1));
            }
        }
        None
    }
}

/// Replace each `K_w` by `(-1)^{l(w)}` times the spin operator
/// realizing `w^{-1}`.
///
/// A coordinate transposition acting on the invariant sector turns into
/// the matching spin transposition with a parity sign, and words pick
/// up reversed order, so `K_w` maps to `sgn(w) rho(w^{-1})`. The
/// convention is pinned by reproducing the displayed degree-2 and
/// degree-3 Hamiltonians exactly (the parity sign is what makes the
/// spin coupling of the displayed Hamiltonians come out with the
/// `1 + hbar P` combination).
pub fn restrict_to_symmetric(op: &NormalOrderedOperator) -> Result<RestrictedOperator> {
    if op.kind() != Kind::Quantum {
        return Err(HeckeError::KindMismatch);
    }
    let mut out = RestrictedOperator::zero(op.n());
    for ((idx, w), f) in op.terms() {
        let signed = if w.parity() < 0 { f.neg() } else { f.clone() };
        out.insert(idx.clone(), w.inverse(), signed);
    }
    Ok(out)
}

/// The scalar symbol and the first-order spin Hamiltonian of a
/// restricted operator: `H = H0 + hbar H1 + O(hbar^2)` after replacing
/// `hbar z d/dz` by the commuting momentum symbol.
#[derive(Clone, Debug)]
pub struct SplitHamiltonian {
    pub n: usize,
    /// Scalar part at order zero, a function of `(p, z)`.
    pub h0: RationalFunction,
    /// Order-one part: spin permutation -> coefficient function of `(p, z)`.
    pub h1: BTreeMap<Perm, RationalFunction>,
}

/// Semiclassical split of a restricted operator.
///
/// Each normal-ordered term `f(z; hbar) d^alpha` is rewritten through
/// the falling-factorial identity `z^k d^k = prod_j (theta - j)`,
/// `theta = z d/dz`, so that
/// `f d^alpha = f z^{-alpha} hbar^{-|alpha|} prod_{i,j} (phat_i - j hbar)`.
/// Substituting the symbol `p` for `phat` must leave a polynomial in
/// `hbar`; its degree-zero part must be free of spin content (the
/// scalar CMS Hamiltonian) and the degree-one part is the quantum
/// Hamiltonian.
///
/// Only the two lowest `hbar` orders are assembled: the coefficient
/// slices `f_a` of each term combine with the (tiny) `hbar` slices of
/// the falling-factorial product at `a + b = r + |alpha|` for the
/// operator order `r`, so the big numerators are never multiplied
/// through the full product.
pub fn semiclassical_split(op: &RestrictedOperator) -> Result<SplitHamiltonian> {
    let n = op.n;
    let vars = VarSet::full(n as u32);
    let hbar = RationalFunction::var(vars.clone(), Var::Hbar).expect("hbar");
    // pieces[r][sigma]: contributions to operator order r in {0, 1}
    let mut pieces: [BTreeMap<Perm, Vec<RationalFunction>>; 2] =
        [BTreeMap::new(), BTreeMap::new()];
    for ((idx, sigma), f) in &op.terms {
        let total = idx.iter().map(|&e| e as i64).sum::<i64>();
        // Every derivative enters with an hbar, so the coefficient must
        // vanish below hbar^{|alpha|}; anything lower would make the
        // momentum form non-polynomial in hbar.
        let low = f.low_degree_in(Var::Hbar)?.unwrap_or(0) as i64;
        if low < total {
            return Err(HeckeError::NotPolynomialInHbar(format!(
                "term d^{:?} {sigma}: hbar degree {low} below |alpha| = {total}",
                idx
            )));
        }
        // Falling-factorial product in (p, hbar); small by construction.
        let mut fall = RationalFunction::one(vars.clone());
        let mut z_shift = RationalFunction::one(vars.clone());
        for (i, &e) in idx.iter().enumerate() {
            if e == 0 {
                continue;
            }
            z_shift = z_shift.mul(
                &RationalFunction::var_pow(vars.clone(), Var::Z(i as u32 + 1), -(e as i16))
                    .expect("laurent z"),
            );
            let p = RationalFunction::var(vars.clone(), Var::P(i as u32 + 1)).expect("p");
            for j in 0..e {
                fall = fall.mul(&p.sub(&hbar.scale(&GaussianRational::from_int(j as i64))));
            }
        }
        let f_deg = f.degree_in(Var::Hbar)?.unwrap_or(0) as i64;
        let fall_deg = fall.degree_in(Var::Hbar)?.unwrap_or(0) as i64;
        for r in 0..=1i64 {
            let mut acc: Vec<RationalFunction> = Vec::new();
            for a in low..=f_deg {
                let b = r + total - a;
                if b < 0 || b > fall_deg {
                    continue;
                }
                let fa = f.coefficient_of(Var::Hbar, a as i16)?;
                if fa.is_zero() {
                    continue;
                }
                let fb = fall.coefficient_of(Var::Hbar, b as i16)?;
                if fb.is_zero() {
                    continue;
                }
                acc.push(fa.mul(&fb).mul(&z_shift));
            }
            if !acc.is_empty() {
                pieces[r as usize]
                    .entry(sigma.clone())
                    .or_default()
                    .extend(acc);
            }
        }
    }
    let mut h0 = RationalFunction::zero(vars.clone());
    for (sigma, parts) in std::mem::take(&mut pieces[0]) {
        let s = crate::operator::sum_all(parts).unwrap_or_else(|| RationalFunction::zero(vars.clone()));
        if s.is_zero() {
            continue;
        }
        if sigma.is_identity() {
            h0 = s;
        } else {
            return Err(HeckeError::NonScalarClassicalPart(format!(
                "word {sigma}: {}",
                s.canonical_text()
            )));
        }
    }
    let mut h1 = BTreeMap::new();
    for (sigma, parts) in std::mem::take(&mut pieces[1]) {
        let s = crate::operator::sum_all(parts).unwrap_or_else(|| RationalFunction::zero(vars.clone()));
        if !s.is_zero() {
            h1.insert(sigma, s);
        }
    }
    Ok(SplitHamiltonian { n, h0, h1 })
}

/// Expansion of `(hbar z_i d/dz_i)^k` as a restricted-operator table
/// (identity spin word): `hbar^k sum_j c_j z_i^j d_i^j` with Stirling
/// weights built by iterating `theta (z^j d^j) = j z^j d^j + z^{j+1} d^{j+1}`.
pub fn phat_power(n: usize, i: usize, k: u32) -> RestrictedOperator {
    assert!(i >= 1 && i <= n);
    let vars = VarSet::full(n as u32);
    let mut coeffs: Vec<i64> = vec![0, 1]; // theta^1
    for _ in 1..k {
        let mut next = vec![0i64; coeffs.len() + 1];
        for (j, &c) in coeffs.iter().enumerate() {
            next[j] += c * j as i64;
            next[j + 1] += c;
        }
        coeffs = next;
    }
    let mut out = RestrictedOperator::zero(n);
    for (j, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let zi = RationalFunction::var_pow(vars.clone(), Var::Z(i as u32), j as i16)
            .expect("z power");
        let hb = RationalFunction::var(vars.clone(), Var::Hbar)
            .expect("hbar")
            .pow(k);
        let mut idx: DerivIdx = SmallVec::from_elem(0, n);
        idx[i - 1] = j as u8;
        out.insert(
            idx,
            Perm::identity(n),
            zi.mul(&hb).scale(&GaussianRational::from_int(c)),
        );
    }
    out
}

/// `z_i z_j / (z_i - z_j)^2` on the shared variable set.
pub fn pair_coupling(n: usize, i: usize, j: usize) -> RationalFunction {
    let vars = VarSet::full(n as u32);
    let zi = RationalFunction::var(vars.clone(), Var::Z(i as u32)).expect("z");
    let zj = RationalFunction::var(vars, Var::Z(j as u32)).expect("z");
    zi.mul(&zj).div(&zi.sub(&zj).pow(2)).expect("i != j")
}

/// The displayed degree-2 spin Hamiltonian:
/// `1/2 sum phat_i^2 - 1/2 sum_{i != j} z_i z_j/(z_i-z_j)^2 (1 + hbar P_ij)`.
pub fn displayed_h2(n: usize) -> RestrictedOperator {
    let vars = VarSet::full(n as u32);
    let hbar = RationalFunction::var(vars, Var::Hbar).expect("hbar");
    let half = GaussianRational::from_ratio(1, 2);
    let mut out = RestrictedOperator::zero(n);
    for i in 1..=n {
        out = out.add(&phat_power(n, i, 2).scale(&half));
    }
    let zero: DerivIdx = SmallVec::from_elem(0, n);
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let c = pair_coupling(n, i, j).scale(&GaussianRational::from_ratio(-1, 2));
            out.insert(zero.clone(), Perm::identity(n), c.clone());
            out.insert(zero.clone(), Perm::transposition(n, i.min(j), i.max(j)), c.mul(&hbar));
        }
    }
    out
}

/// The displayed degree-3 spin Hamiltonian, including the three-site
/// term with coefficient
/// `z_i z_j z_k / ((z_i - z_j)(z_j - z_k)(z_k - z_i))` attached to the
/// spin word `P_{jk} P_{ij}`.
pub fn displayed_h3(n: usize) -> RestrictedOperator {
    let vars = VarSet::full(n as u32);
    let hbar = RationalFunction::var(vars.clone(), Var::Hbar).expect("hbar");
    let third = GaussianRational::from_ratio(1, 3);
    let mut out = RestrictedOperator::zero(n);
    for i in 1..=n {
        out = out.add(&phat_power(n, i, 3).scale(&third));
    }
    // - sum_{i != j} z_i z_j (1 + hbar P_ij)/(z_i - z_j)^2 phat_i
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let c = pair_coupling(n, i, j).neg();
            let zi = RationalFunction::var(vars.clone(), Var::Z(i as u32)).expect("z");
            let coeff = c.mul(&hbar).mul(&zi); // times hbar z_i d_i
            let mut idx: DerivIdx = SmallVec::from_elem(0, n);
            idx[i - 1] = 1;
            out.insert(idx.clone(), Perm::identity(n), coeff.clone());
            out.insert(
                idx,
                Perm::transposition(n, i.min(j), i.max(j)),
                coeff.mul(&hbar),
            );
        }
    }
    // - hbar/3 sum_{i != j != k != i} triple couplings on P_{jk} P_{ij}
    let zero: DerivIdx = SmallVec::from_elem(0, n);
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i == j || j == k || i == k {
                    continue;
                }
                let c = triple_coupling(n, i, j, k)
                    .mul(&hbar)
                    .scale(&GaussianRational::from_ratio(-1, 3));
                let sigma = Perm::transposition(n, j.min(k), j.max(k))
                    .compose(&Perm::transposition(n, i.min(j), i.max(j)));
                out.insert(zero.clone(), sigma, c);
            }
        }
    }
    out
}

/// `z_i z_j z_k / ((z_i - z_j)(z_j - z_k)(z_k - z_i))`.
pub fn triple_coupling(n: usize, i: usize, j: usize, k: usize) -> RationalFunction {
    let vars = VarSet::full(n as u32);
    let z = |a: usize| RationalFunction::var(vars.clone(), Var::Z(a as u32)).expect("z");
    let num = z(i).mul(&z(j)).mul(&z(k));
    let den = z(i)
        .sub(&z(j))
        .mul(&z(j).sub(&z(k)))
        .mul(&z(k).sub(&z(i)));
    num.div(&den).expect("distinct sites")
}

/// Displayed first-order Hamiltonian of degree 2:
/// `-1/2 sum_{i != j} z_i z_j/(z_i - z_j)^2 P_ij`.
pub fn displayed_hcm1_2(n: usize) -> BTreeMap<Perm, RationalFunction> {
    let mut out: BTreeMap<Perm, RationalFunction> = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let c = pair_coupling(n, i, j).scale(&GaussianRational::from_ratio(-1, 2));
            let sigma = Perm::transposition(n, i.min(j), i.max(j));
            merge(&mut out, sigma, c);
        }
    }
    out
}

/// Displayed first-order Hamiltonian of degree 3:
/// `-sum z_i z_j p_i/(z_i-z_j)^2 P_ij - 1/3 sum triple P_{jk} P_{ij}`.
pub fn displayed_hcm1_3(n: usize) -> BTreeMap<Perm, RationalFunction> {
    let vars = VarSet::full(n as u32);
    let mut out: BTreeMap<Perm, RationalFunction> = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let p = RationalFunction::var(vars.clone(), Var::P(i as u32)).expect("p");
            let c = pair_coupling(n, i, j).mul(&p).neg();
            merge(&mut out, Perm::transposition(n, i.min(j), i.max(j)), c);
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i == j || j == k || i == k {
                    continue;
                }
                let c = triple_coupling(n, i, j, k).scale(&GaussianRational::from_ratio(-1, 3));
                let sigma = Perm::transposition(n, j.min(k), j.max(k))
                    .compose(&Perm::transposition(n, i.min(j), i.max(j)));
                merge(&mut out, sigma, c);
            }
        }
    }
    out.retain(|_, f| !f.is_zero());
    out
}

fn merge(map: &mut BTreeMap<Perm, RationalFunction>, sigma: Perm, f: RationalFunction) {
    match map.entry(sigma) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(f);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&f);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// Exact spin-Hamiltonian tables compared key by key.
pub fn tables_equal(
    a: &BTreeMap<Perm, RationalFunction>,
    b: &BTreeMap<Perm, RationalFunction>,
) -> bool {
    if a.len() != b.len() {
        return false;
    }
    a.iter().all(|(k, f)| match b.get(k) {
        Some(g) => f.equal(g),
        None => false,
    })
}
