//! Normal-ordered elements of the Dunkl operator algebra.
//!
//! A quantum element is `sum f_{w,alpha}(z; hbar, lambda) d^alpha K_w`
//! with coordinate coefficients leftmost, plain derivatives in the
//! middle and coordinate permutations rightmost. A semiclassical element
//! is `sum f_w(p, z; lambda) K_w` with commuting momentum symbols
//! absorbed into the coefficients. Products are re-normal-ordered with
//! the rewrite rules
//!
//! ```text
//! d_i z_j = z_j d_i + delta_ij
//! K_w z_i = z_{w(i)} K_w,   K_w d_i = d_{w(i)} K_w,   K_w p_i = p_{w(i)} K_w
//! K_w K_v = K_{w v}
//! ```

use crate::{HeckeError, Result};
use exactfun::{GaussianRational, RationalFunction, Var, VarSet, VarSetRef};
use smallvec::SmallVec;
use spinspace::Perm;
use std::collections::BTreeMap;
use std::fmt;

/// Which algebra the element lives in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Quantum,
    Semiclassical,
}

/// Multi-index of plain `d/dz_i` powers (always zero semiclassically).
pub type DerivIdx = SmallVec<[u8; 8]>;

fn zero_idx(n: usize) -> DerivIdx {
    SmallVec::from_elem(0, n)
}

/// Construction context: particle count, kind and the shared variable
/// set `z1..zn, p1..pn, hbar, lambda`.
#[derive(Clone, Debug)]
pub struct OpAlgebra {
    pub n: usize,
    pub kind: Kind,
    pub vars: VarSetRef,
}

impl OpAlgebra {
    pub fn new(n: usize, kind: Kind) -> Self {
        assert!(n >= 1 && n <= 8);
        OpAlgebra {
            n,
            kind,
            vars: VarSet::full(n as u32),
        }
    }

    pub fn rf_zero(&self) -> RationalFunction {
        RationalFunction::zero(self.vars.clone())
    }

    pub fn rf_one(&self) -> RationalFunction {
        RationalFunction::one(self.vars.clone())
    }

    pub fn rf_int(&self, k: i64) -> RationalFunction {
        RationalFunction::int(self.vars.clone(), k)
    }

    pub fn rf_var(&self, v: Var) -> RationalFunction {
        RationalFunction::var(self.vars.clone(), v).expect("variable in set")
    }

    pub fn zero(&self) -> NormalOrderedOperator {
        NormalOrderedOperator {
            n: self.n,
            kind: self.kind,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> NormalOrderedOperator {
        self.function(self.rf_one())
    }

    /// Multiplication operator by a coefficient function.
    pub fn function(&self, f: RationalFunction) -> NormalOrderedOperator {
        let mut op = self.zero();
        op.insert(zero_idx(self.n), Perm::identity(self.n), f);
        op
    }

    /// Coordinate permutation operator `K_w`.
    pub fn k_perm(&self, w: Perm) -> NormalOrderedOperator {
        assert_eq!(w.n(), self.n);
        let mut op = self.zero();
        op.insert(zero_idx(self.n), w, self.rf_one());
        op
    }

    /// `K_{ij}` for 1-based sites.
    pub fn k_ij(&self, i: usize, j: usize) -> NormalOrderedOperator {
        self.k_perm(Perm::transposition(self.n, i, j))
    }

    /// Quantum momentum `hbar z_j d/dz_j`.
    pub fn phat(&self, j: usize) -> NormalOrderedOperator {
        assert!(matches!(self.kind, Kind::Quantum));
        assert!(j >= 1 && j <= self.n);
        let mut idx = zero_idx(self.n);
        idx[j - 1] = 1;
        let coeff = self.rf_var(Var::Hbar).mul(&self.rf_var(Var::Z(j as u32)));
        let mut op = self.zero();
        op.insert(idx, Perm::identity(self.n), coeff);
        op
    }

    /// Semiclassical momentum symbol `p_j`.
    pub fn p_sym(&self, j: usize) -> NormalOrderedOperator {
        assert!(matches!(self.kind, Kind::Semiclassical));
        self.function(self.rf_var(Var::P(j as u32)))
    }

    /// The Cherednik-Dunkl operator `d_j` (quantum) or `D_j`
    /// (semiclassical): momentum term plus signed pair terms
    /// `+ z_i/(z_i - z_j) K_ij` for `i > j` and
    /// `- z_j/(z_j - z_i) K_ij` for `i < j`.
    pub fn dunkl(&self, j: usize) -> Result<NormalOrderedOperator> {
        if j < 1 || j > self.n {
            return Err(HeckeError::SiteOutOfRange(j, self.n));
        }
        let mut op = match self.kind {
            Kind::Quantum => self.phat(j),
            Kind::Semiclassical => self.p_sym(j),
        };
        let zj = self.rf_var(Var::Z(j as u32));
        for i in 1..=self.n {
            if i == j {
                continue;
            }
            let zi = self.rf_var(Var::Z(i as u32));
            let coeff = if i > j {
                zi.div(&zi.sub(&zj)).expect("nonzero denominator")
            } else {
                zj.div(&zj.sub(&zi)).expect("nonzero denominator").neg()
            };
            op.insert(
                zero_idx(self.n),
                Perm::transposition(self.n, i.min(j), i.max(j)),
                coeff,
            );
        }
        Ok(op)
    }

    /// `lambda` as a central coefficient.
    pub fn lambda(&self) -> NormalOrderedOperator {
        self.function(self.rf_var(Var::Lambda))
    }
}

/// Element of the operator algebra in normal-ordered form.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalOrderedOperator {
    n: usize,
    kind: Kind,
    terms: BTreeMap<(DerivIdx, Perm), RationalFunction>,
}

impl NormalOrderedOperator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn terms(&self) -> &BTreeMap<(DerivIdx, Perm), RationalFunction> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, idx: DerivIdx, w: Perm, f: RationalFunction) {
        if f.is_zero() {
            return;
        }
        match self.terms.entry((idx, w)) {
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

    fn check_compatible(&self, rhs: &Self) -> Result<()> {
        if self.kind != rhs.kind || self.n != rhs.n {
            return Err(HeckeError::KindMismatch);
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        let mut out = self.clone();
        for ((idx, w), f) in &rhs.terms {
            out.insert(idx.clone(), w.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for f in out.terms.values_mut() {
            *f = f.neg();
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = self.clone();
        out.terms.retain(|_, f| {
            *f = f.scale(c);
            !f.is_zero()
        });
        out
    }

    pub fn scale_fn(&self, c: &RationalFunction) -> Self {
        let mut out = self.clone();
        out.terms.retain(|_, f| {
            *f = f.mul(c);
            !f.is_zero()
        });
        out
    }

    /// Product, re-normal-ordered. Colliding coefficients are combined
    /// by balanced pairwise summation, which keeps the intermediate
    /// denominators small.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        let mut buf: BTreeMap<(DerivIdx, Perm), Vec<RationalFunction>> = BTreeMap::new();
        for ((alpha, w), f) in &self.terms {
            for ((beta, v), g) in &rhs.terms {
                // K_w g = (g o w) K_w and K_w d^beta = d^{w(beta)} K_w.
                let g_w = permute_fn(g, w)?;
                let beta_w = permute_idx(beta, w);
                let wv = w.compose(v);
                match self.kind {
                    Kind::Semiclassical => {
                        buf.entry((zero_idx(self.n), wv)).or_default().push(f.mul(&g_w));
                    }
                    Kind::Quantum => {
                        // Move d^alpha through the coefficient g_w by the
                        // general Leibniz rule.
                        for (gamma, binom) in sub_indices(alpha) {
                            let mut dg = g_w.clone();
                            for (i, &gi) in gamma.iter().enumerate() {
                                for _ in 0..gi {
                                    dg = dg.derive(Var::Z(i as u32 + 1), false)?;
                                }
                            }
                            if dg.is_zero() {
                                continue;
                            }
                            let mut rest: DerivIdx = zero_idx(self.n);
                            for i in 0..self.n {
                                rest[i] = alpha[i] - gamma[i] + beta_w[i];
                            }
                            let coeff = f.mul(&dg).scale(&GaussianRational::from_int(binom));
                            buf.entry((rest, wv.clone())).or_default().push(coeff);
                        }
                    }
                }
            }
        }
        let mut out = NormalOrderedOperator {
            n: self.n,
            kind: self.kind,
            terms: BTreeMap::new(),
        };
        for ((idx, w), parts) in buf {
            let s = sum_all(parts);
            if let Some(s) = s {
                out.insert(idx, w, s);
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.mul(rhs)?.sub(&rhs.mul(self)?)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let alg = OpAlgebra {
            n: self.n,
            kind: self.kind,
            vars: match self.terms.values().next() {
                Some(f) => f.vars().clone(),
                None => VarSet::full(self.n as u32),
            },
        };
        let mut acc = alg.one();
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Apply to a coefficient function (element of the polynomial
    /// representation).
    pub fn apply_to_function(&self, g: &RationalFunction) -> Result<RationalFunction> {
        let mut acc = RationalFunction::zero(g.vars().clone());
        for ((alpha, w), f) in &self.terms {
            let mut x = permute_fn(g, w)?;
            for (i, &ai) in alpha.iter().enumerate() {
                for _ in 0..ai {
                    x = x.derive(Var::Z(i as u32 + 1), false)?;
                }
            }
            acc = acc.add(&f.mul(&x));
        }
        Ok(acc)
    }

    /// Coefficient at a given derivative index and permutation
    /// (zero function when absent).
    pub fn coefficient(&self, idx: &[u8], w: &Perm) -> RationalFunction {
        let key = (DerivIdx::from_slice(idx), w.clone());
        match self.terms.get(&key) {
            Some(f) => f.clone(),
            None => RationalFunction::zero(VarSet::full(self.n as u32)),
        }
    }

    /// Words with nonzero coefficient (deduplicated).
    pub fn words(&self) -> Vec<Perm> {
        let mut out: Vec<Perm> = self.terms.keys().map(|(_, w)| w.clone()).collect();
        out.dedup();
        out.sort();
        out.dedup();
        out
    }
}

/// Balanced pairwise sum; `None` for an empty list.
pub fn sum_all(mut parts: Vec<RationalFunction>) -> Option<RationalFunction> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len() / 2 + 1);
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a.add(&b)),
                None => next.push(a),
            }
        }
        parts = next;
    }
    parts.into_iter().next()
}

/// Substitute `z_i -> z_{w(i)}`, `p_i -> p_{w(i)}` in a coefficient.
pub fn permute_fn(f: &RationalFunction, w: &Perm) -> Result<RationalFunction> {
    if w.is_identity() {
        return Ok(f.clone());
    }
    Ok(f.rename_vars(|v| match v {
        Var::Z(i) => Var::Z(w.image(i as usize) as u32),
        Var::P(i) => Var::P(w.image(i as usize) as u32),
        other => other,
    })?)
}

fn permute_idx(beta: &DerivIdx, w: &Perm) -> DerivIdx {
    let mut out = zero_idx(beta.len());
    for i in 0..beta.len() {
        out[w.image(i + 1) - 1] = beta[i];
    }
    out
}

/// All componentwise sub-indices `gamma <= alpha` with the product of
/// binomial coefficients `prod C(alpha_i, gamma_i)`.
fn sub_indices(alpha: &DerivIdx) -> Vec<(DerivIdx, i64)> {
    let mut out: Vec<(DerivIdx, i64)> = vec![(zero_idx(alpha.len()), 1)];
    for (i, &ai) in alpha.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * (ai as usize + 1));
        for (idx, c) in &out {
            for gi in 0..=ai {
                let mut idx2 = idx.clone();
                idx2[i] = gi;
                next.push((idx2, c * binom(ai as i64, gi as i64)));
            }
        }
        out = next;
    }
    out
}

fn binom(n: i64, k: i64) -> i64 {
    let mut acc = 1i64;
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

impl fmt::Display for NormalOrderedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((idx, w), coeff)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, "  +  ")?;
            }
            write!(f, "[{coeff}]")?;
            for (i, &e) in idx.iter().enumerate() {
                if e > 0 {
                    write!(f, " d{}^{}", i + 1, e)?;
                }
            }
            if !w.is_identity() {
                write!(f, " K{w}")?;
            }
        }
        Ok(())
    }
}
