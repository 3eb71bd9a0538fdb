//! Multivariate (Laurent) polynomials over Gaussian rationals.

use crate::error::{ExactError, Result};
use crate::scalar::GaussianRational;
use crate::vars::{Var, VarSetRef};
use num_complex::Complex64;
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector, one entry per variable of the owning set.
/// Ordered graded-lexicographically: total degree first, then lex.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub SmallVec<[i16; 12]>);

impl Monomial {
    pub fn unit(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|&e| e as i32).sum()
    }

    fn checked_add(&self, rhs: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (a, b) in out.iter_mut().zip(rhs.0.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        Monomial(out)
    }

    fn checked_sub(&self, rhs: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (a, b) in out.iter_mut().zip(rhs.0.iter()) {
            *a = a.checked_sub(*b).expect("exponent overflow");
        }
        Monomial(out)
    }

    /// Componentwise `self >= rhs` (divisibility of monomials).
    fn divisible_by(&self, rhs: &Monomial) -> bool {
        self.0.iter().zip(rhs.0.iter()).all(|(a, b)| a >= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate Laurent polynomial. Negative exponents are only
/// permitted for Laurent-capable variables of the set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    pub vars: VarSetRef,
    pub terms: BTreeMap<Monomial, GaussianRational>,
}

impl MPoly {
    pub fn zero(vars: VarSetRef) -> Self {
        MPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: VarSetRef, c: GaussianRational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(p.vars.len()), c);
        }
        p
    }

    pub fn one(vars: VarSetRef) -> Self {
        Self::constant(vars, GaussianRational::one())
    }

    pub fn var(vars: VarSetRef, v: Var) -> Result<Self> {
        Self::var_pow(vars, v, 1)
    }

    pub fn var_pow(vars: VarSetRef, v: Var, e: i16) -> Result<Self> {
        let idx = vars.index_of(v)?;
        if e < 0 && !v.is_laurent() {
            return Err(ExactError::NotLaurent(v.to_string()));
        }
        let mut m = Monomial::unit(vars.len());
        m.0[idx] = e;
        let mut p = Self::zero(vars);
        if e == 0 {
            return Ok(Self::one(p.vars));
        }
        p.terms.insert(m, GaussianRational::one());
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().degree() == 0
                && self.terms.keys().next().unwrap().0.iter().all(|&e| e == 0))
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_coeff().is_one()
    }

    /// Coefficient of the unit monomial.
    pub fn constant_coeff(&self) -> GaussianRational {
        self.terms
            .get(&Monomial::unit(self.vars.len()))
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    /// Single monomial with coefficient one? (used to fold into numerators)
    pub fn as_monomial(&self) -> Option<(Monomial, GaussianRational)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((m.clone(), c.clone()))
        } else {
            None
        }
    }

    /// Leading (maximal) term under the graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&GaussianRational> {
        self.leading().map(|(_, c)| c)
    }

    fn assert_compatible(&self, rhs: &Self) {
        assert!(
            self.vars == rhs.vars,
            "incompatible variable sets {} vs {}",
            self.vars,
            rhs.vars
        );
    }

    fn insert_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = &*e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.assert_compatible(rhs);
        let mut out = Self::zero(self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert_term(ma.checked_add(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &GaussianRational) -> Self {
        let mut out = Self::zero(self.vars.clone());
        for (ma, ca) in &self.terms {
            out.insert_term(ma.checked_add(m), ca * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.vars.clone());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to `v`.
    pub fn derive(&self, v: Var) -> Result<Self> {
        let idx = self.vars.index_of(v)?;
        let mut out = Self::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[idx] = e - 1;
            out.insert_term(m2, c * &GaussianRational::from_int(e as i64));
        }
        Ok(out)
    }

    /// Euler derivative `v * d/dv`.
    pub fn derive_euler(&self, v: Var) -> Result<Self> {
        let idx = self.vars.index_of(v)?;
        let mut out = Self::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            out.insert_term(m.clone(), c * &GaussianRational::from_int(e as i64));
        }
        Ok(out)
    }

    /// Componentwise minimum exponent over all terms (zero polynomial
    /// gives the unit monomial).
    pub fn min_exponents(&self) -> Monomial {
        let mut m = Monomial::unit(self.vars.len());
        let mut first = true;
        for t in self.terms.keys() {
            if first {
                m = t.clone();
                first = false;
            } else {
                for (a, b) in m.0.iter_mut().zip(t.0.iter()) {
                    *a = (*a).min(*b);
                }
            }
        }
        m
    }

    /// Componentwise maximum exponent over all terms.
    pub fn max_exponents(&self) -> Monomial {
        let mut m = Monomial::unit(self.vars.len());
        let mut first = true;
        for t in self.terms.keys() {
            if first {
                m = t.clone();
                first = false;
            } else {
                for (a, b) in m.0.iter_mut().zip(t.0.iter()) {
                    *a = (*a).max(*b);
                }
            }
        }
        m
    }

    /// Trailing (minimal) term under the graded-lex order.
    pub fn trailing(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next()
    }

    /// Exact polynomial division. Both operands must be free of
    /// negative exponents. Returns `None` when not divisible.
    ///
    /// Cheap necessary conditions run first so that the common failing
    /// case costs a scan instead of a division loop: divisibility of the
    /// leading and trailing terms and per-variable degree ranges.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        self.assert_compatible(divisor);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero(self.vars.clone()));
        }
        let (dm, dc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        {
            let (lm, _) = self.leading()?;
            let (tm, _) = self.trailing()?;
            let (dtm, _) = divisor.trailing()?;
            if !lm.divisible_by(&dm) || !tm.divisible_by(dtm) {
                return None;
            }
            let smax = self.max_exponents();
            let smin = self.min_exponents();
            let dmax = divisor.max_exponents();
            let dmin = divisor.min_exponents();
            for i in 0..smax.0.len() {
                if smax.0[i] < dmax.0[i] || smin.0[i] < dmin.0[i] {
                    return None;
                }
            }
        }
        let dc_is_one = dc.is_one();
        let dc_inv = dc.inv().expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.vars.clone());
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !rm.divisible_by(&dm) {
                return None;
            }
            let qm = rm.checked_sub(&dm);
            let qc = if dc_is_one { rc } else { &rc * &dc_inv };
            quot.insert_term(qm.clone(), qc.clone());
            rem = rem.sub(&divisor.mul_monomial(&qm, &qc));
        }
        Some(quot)
    }

    /// Exact evaluation at a full assignment indexed like the variable set.
    pub fn eval_exact(&self, point: &[GaussianRational]) -> Result<GaussianRational> {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = &point[i];
                if e > 0 {
                    t = &t * &base.pow(e as u32);
                } else {
                    if base.is_zero() {
                        return Err(ExactError::NegativePowerOfZero(
                            self.vars.vars()[i].to_string(),
                        ));
                    }
                    t = &t * &base.inv()?.pow((-e) as u32);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Double-precision complex evaluation.
    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex64();
            for (i, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    t *= point[i].powi(e as i32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Coefficient of `v^k`, as a polynomial in the remaining variables
    /// (still carried on the same variable set).
    pub fn coefficient_of(&self, v: Var, k: i16) -> Result<Self> {
        let idx = self.vars.index_of(v)?;
        let mut out = Self::zero(self.vars.clone());
        for (m, c) in &self.terms {
            if m.0[idx] == k {
                let mut m2 = m.clone();
                m2.0[idx] = 0;
                out.insert_term(m2, c.clone());
            }
        }
        Ok(out)
    }

    /// Largest exponent of `v` appearing (None for the zero polynomial).
    pub fn degree_in(&self, v: Var) -> Result<Option<i16>> {
        let idx = self.vars.index_of(v)?;
        Ok(self.terms.keys().map(|m| m.0[idx]).max())
    }

    /// Smallest exponent of `v` appearing (None for the zero polynomial).
    pub fn low_degree_in(&self, v: Var) -> Result<Option<i16>> {
        let idx = self.vars.index_of(v)?;
        Ok(self.terms.keys().map(|m| m.0[idx]).min())
    }

    /// True when no term involves `v`.
    pub fn free_of(&self, v: Var) -> bool {
        match self.vars.index_of(v) {
            Ok(idx) => self.terms.keys().all(|m| m.0[idx] == 0),
            Err(_) => true,
        }
    }

    /// Substitute variables by other variables of the same set. The map
    /// must send Laurent-capable variables to Laurent-capable ones.
    pub fn rename_vars(&self, map: impl Fn(Var) -> Var) -> Result<Self> {
        let vars = self.vars.clone();
        let mut images = Vec::with_capacity(vars.len());
        for &v in vars.vars() {
            let w = map(v);
            if v.is_laurent() && !w.is_laurent() {
                return Err(ExactError::NotLaurent(w.to_string()));
            }
            images.push(vars.index_of(w)?);
        }
        let mut out = Self::zero(vars.clone());
        for (m, c) in &self.terms {
            let mut m2 = Monomial::unit(vars.len());
            for (i, &e) in m.0.iter().enumerate() {
                m2.0[images[i]] = m2.0[images[i]].checked_add(e).expect("exponent overflow");
            }
            out.insert_term(m2, c.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Descending monomial order, explicit exponents.
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    write!(f, "*{}^{}", self.vars.vars()[i], e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vars::VarSet;

    fn z(i: u32, vs: &VarSetRef) -> MPoly {
        MPoly::var(vs.clone(), Var::Z(i)).unwrap()
    }

    #[test]
    fn graded_lex_leading_term() {
        let vs = VarSet::zs(2);
        // z1^2 + z1*z2 + z2 : leading is z1^2 (degree 2, lex larger than z1 z2)
        let p = z(1, &vs).pow(2).add(&z(1, &vs).mul(&z(2, &vs))).add(&z(2, &vs));
        let (m, _) = p.leading().unwrap();
        assert_eq!(m.0.as_slice(), &[2, 0]);
    }

    #[test]
    fn exact_division_roundtrip() {
        let vs = VarSet::zs(2);
        let a = z(1, &vs).add(&z(2, &vs));
        let b = z(1, &vs).sub(&z(2, &vs));
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        assert_eq!(prod.exact_div(&b).unwrap(), a);
        let plus_one = prod.add(&MPoly::one(vs));
        assert!(plus_one.exact_div(&a).is_none());
    }

    #[test]
    fn laurent_derivative() {
        let vs = VarSet::zs(1);
        // d/dz z^-1 = -z^-2
        let p = MPoly::var_pow(vs.clone(), Var::Z(1), -1).unwrap();
        let d = p.derive(Var::Z(1)).unwrap();
        let expected = MPoly::var_pow(vs, Var::Z(1), -2)
            .unwrap()
            .scale(&GaussianRational::from_int(-1));
        assert_eq!(d, expected);
    }
}
