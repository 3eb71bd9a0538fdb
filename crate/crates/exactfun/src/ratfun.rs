//! Rational functions in canonical form.
//!
//! A value is `num / prod_i f_i^{e_i}` where the numerator is a Laurent
//! polynomial and each denominator factor is a monic polynomial. The
//! factored denominator keeps cancellation cheap: after every operation
//! the numerator is divided by each factor as long as the division is
//! exact. Laurent monomial content of factors is folded into the
//! numerator, so pure `z`-monomials never appear downstairs.

use crate::error::{ExactError, Result};
use crate::mpoly::{MPoly, Monomial};
use crate::scalar::GaussianRational;
use crate::vars::{Var, VarSetRef};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

impl PartialOrd for MPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.cmp(&other.terms)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    num: MPoly,
    den: BTreeMap<MPoly, u32>,
}

impl RationalFunction {
    pub fn from_poly(num: MPoly) -> Self {
        RationalFunction {
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn constant(vars: VarSetRef, c: GaussianRational) -> Self {
        Self::from_poly(MPoly::constant(vars, c))
    }

    pub fn zero(vars: VarSetRef) -> Self {
        Self::constant(vars, GaussianRational::zero())
    }

    pub fn one(vars: VarSetRef) -> Self {
        Self::constant(vars, GaussianRational::one())
    }

    pub fn int(vars: VarSetRef, n: i64) -> Self {
        Self::constant(vars, GaussianRational::from_int(n))
    }

    pub fn ratio(vars: VarSetRef, p: i64, q: i64) -> Self {
        Self::constant(vars, GaussianRational::from_ratio(p, q))
    }

    pub fn var(vars: VarSetRef, v: Var) -> Result<Self> {
        Ok(Self::from_poly(MPoly::var(vars, v)?))
    }

    pub fn var_pow(vars: VarSetRef, v: Var, e: i16) -> Result<Self> {
        Ok(Self::from_poly(MPoly::var_pow(vars, v, e)?))
    }

    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(ExactError::ZeroFunctionDivisor);
        }
        let mut rf = RationalFunction {
            num,
            den: BTreeMap::new(),
        };
        rf.push_factor(den, 1);
        rf.reduce();
        Ok(rf)
    }

    pub fn vars(&self) -> &VarSetRef {
        &self.num.vars
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True if the value is the constant one.
    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    /// Expanded denominator polynomial (monic by construction).
    pub fn denominator_expanded(&self) -> MPoly {
        let mut d = MPoly::one(self.num.vars.clone());
        for (f, &e) in &self.den {
            d = d.mul(&f.pow(e));
        }
        d
    }

    /// Fold a denominator polynomial into canonical factors, adjusting
    /// the numerator by Laurent monomial content and scalar content.
    fn push_factor(&mut self, f: MPoly, power: u32) {
        if power == 0 {
            return;
        }
        assert!(!f.is_zero(), "zero denominator factor");
        let vars = self.num.vars.clone();
        // Split off monomial content.
        let gamma = f.min_exponents();
        let mut laurent_shift = Monomial::unit(vars.len());
        let mut fixed_monomial = Monomial::unit(vars.len());
        for (i, v) in vars.vars().iter().enumerate() {
            if v.is_laurent() {
                laurent_shift.0[i] = gamma.0[i];
            } else {
                debug_assert!(gamma.0[i] >= 0);
                fixed_monomial.0[i] = gamma.0[i];
            }
        }
        let mut neg_all = gamma.clone();
        for e in neg_all.0.iter_mut() {
            *e = -*e;
        }
        let core = f.mul_monomial(&neg_all, &GaussianRational::one());
        // Laurent content moves upstairs as its inverse.
        if laurent_shift.0.iter().any(|&e| e != 0) {
            let mut inv = laurent_shift.clone();
            for (k, e) in inv.0.iter_mut().enumerate() {
                *e = -*e * power as i16;
                debug_assert!(vars.vars()[k].is_laurent() || *e == 0);
            }
            self.num = self.num.mul_monomial(&inv, &GaussianRational::one());
        }
        // Non-Laurent monomial content stays as its own factor.
        if fixed_monomial.0.iter().any(|&e| e != 0) {
            let m = MPoly::one(vars.clone()).mul_monomial(&fixed_monomial, &GaussianRational::one());
            *self.den.entry(m).or_insert(0) += power;
        }
        // Monic core; the leading-coefficient power moves upstairs.
        let lc = core.leading_coeff().expect("nonzero core").clone();
        if !lc.is_one() {
            let lc_inv = lc.inv().expect("nonzero leading coefficient");
            let core = core.scale(&lc_inv);
            self.num = self.num.scale(&lc_inv.pow(power));
            if !core.is_one() {
                *self.den.entry(core).or_insert(0) += power;
            }
        } else if !core.is_one() {
            *self.den.entry(core).or_insert(0) += power;
        }
    }

    /// Divide the numerator by a polynomial factor if exactly divisible,
    /// tolerating Laurent content in the numerator.
    fn try_cancel(num: &MPoly, f: &MPoly) -> Option<MPoly> {
        let gamma = num.min_exponents();
        let mut shift = Monomial::unit(num.vars.len());
        let mut unshift = Monomial::unit(num.vars.len());
        for i in 0..shift.0.len() {
            let g = gamma.0[i].min(0);
            shift.0[i] = -g;
            unshift.0[i] = g;
        }
        let poly = num.mul_monomial(&shift, &GaussianRational::one());
        let q = poly.exact_div(f)?;
        Some(q.mul_monomial(&unshift, &GaussianRational::one()))
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let factors: Vec<(MPoly, u32)> = std::mem::take(&mut self.den).into_iter().collect();
        for (f, mut e) in factors {
            if let Some((fm, fc)) = f.as_monomial() {
                debug_assert!(fc.is_one());
                // Monomial factor in non-Laurent variables: cancel against
                // the numerator's minimum exponents.
                loop {
                    if e == 0 {
                        break;
                    }
                    let min = self.num.min_exponents();
                    if !min.divisible_by_public(&fm) {
                        break;
                    }
                    let mut neg = fm.clone();
                    for x in neg.0.iter_mut() {
                        *x = -*x;
                    }
                    self.num = self.num.mul_monomial(&neg, &GaussianRational::one());
                    e -= 1;
                }
            } else {
                while e > 0 {
                    match Self::try_cancel(&self.num, &f) {
                        Some(q) => {
                            self.num = q;
                            e -= 1;
                        }
                        None => break,
                    }
                }
            }
            if e > 0 {
                *self.den.entry(f).or_insert(0) += e;
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        // Factor-wise least common denominator.
        let mut lcm: BTreeMap<MPoly, u32> = self.den.clone();
        for (f, &e) in &rhs.den {
            let cur = lcm.entry(f.clone()).or_insert(0);
            *cur = (*cur).max(e);
        }
        let mut left = self.num.clone();
        let mut right = rhs.num.clone();
        for (f, &e) in &lcm {
            let ea = self.den.get(f).copied().unwrap_or(0);
            let eb = rhs.den.get(f).copied().unwrap_or(0);
            if e > ea {
                left = left.mul(&f.pow(e - ea));
            }
            if e > eb {
                right = right.mul(&f.pow(e - eb));
            }
        }
        let mut out = RationalFunction {
            num: left.add(&right),
            den: lcm,
        };
        out.reduce();
        out
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Pure monomial numerator with an empty denominator?
    fn as_monomial(&self) -> Option<(Monomial, GaussianRational)> {
        if self.den.is_empty() {
            self.num.as_monomial()
        } else {
            None
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        // Monomial factors cannot create new cancellations against the
        // monomial-content-free multi-term denominator factors, so a
        // monomial operand skips the division passes entirely.
        if let Some((m, c)) = rhs.as_monomial() {
            let mut out = RationalFunction {
                num: self.num.mul_monomial(&m, &c),
                den: self.den.clone(),
            };
            out.reduce_monomial_factors();
            return out;
        }
        if let Some((m, c)) = self.as_monomial() {
            let mut out = RationalFunction {
                num: rhs.num.mul_monomial(&m, &c),
                den: rhs.den.clone(),
            };
            out.reduce_monomial_factors();
            return out;
        }
        let mut out = RationalFunction {
            num: self.num.mul(&rhs.num),
            den: self.den.clone(),
        };
        for (f, &e) in &rhs.den {
            *out.den.entry(f.clone()).or_insert(0) += e;
        }
        out.reduce();
        out
    }

    /// Cancellation restricted to pure-monomial denominator factors.
    fn reduce_monomial_factors(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        if !self.den.keys().any(|f| f.as_monomial().is_some()) {
            return;
        }
        let factors: Vec<(MPoly, u32)> = std::mem::take(&mut self.den).into_iter().collect();
        for (f, mut e) in factors {
            if let Some((fm, fc)) = f.as_monomial() {
                debug_assert!(fc.is_one());
                loop {
                    if e == 0 {
                        break;
                    }
                    let min = self.num.min_exponents();
                    if !min.divisible_by_public(&fm) {
                        break;
                    }
                    let mut neg = fm.clone();
                    for x in neg.0.iter_mut() {
                        *x = -*x;
                    }
                    self.num = self.num.mul_monomial(&neg, &GaussianRational::one());
                    e -= 1;
                }
            }
            if e > 0 {
                *self.den.entry(f).or_insert(0) += e;
            }
        }
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(ExactError::ZeroFunctionDivisor);
        }
        let mut out = RationalFunction {
            num: self.num.mul(&rhs.denominator_expanded()),
            den: self.den.clone(),
        };
        out.push_factor(rhs.num.clone(), 1);
        out.reduce();
        Ok(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.num.vars.clone());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.num.vars.clone());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Derivative (or Euler derivative `v d/dv`) with respect to `v`.
    pub fn derive(&self, v: Var, euler: bool) -> Result<Self> {
        self.num.vars.index_of(v)?;
        let d = |p: &MPoly| -> Result<MPoly> {
            if euler {
                p.derive_euler(v)
            } else {
                p.derive(v)
            }
        };
        // d(N / prod f^e) = [N' prod f - N sum_i e_i f_i' prod_{j!=i} f_j]
        //                   / prod f^{e+1}
        let mut all = MPoly::one(self.num.vars.clone());
        for f in self.den.keys() {
            all = all.mul(f);
        }
        let mut top = d(&self.num)?.mul(&all);
        for (fi, &ei) in &self.den {
            let mut rest = MPoly::one(self.num.vars.clone());
            for fj in self.den.keys() {
                if fj != fi {
                    rest = rest.mul(fj);
                }
            }
            let term = self
                .num
                .mul(&d(fi)?)
                .mul(&rest)
                .scale(&GaussianRational::from_int(ei as i64));
            top = top.sub(&term);
        }
        let mut out = RationalFunction {
            num: top,
            den: BTreeMap::new(),
        };
        for (f, &e) in &self.den {
            out.push_factor(f.clone(), e + 1);
        }
        out.reduce();
        Ok(out)
    }

    /// Exact evaluation; fails with `Pole` when the denominator vanishes.
    pub fn eval_exact(&self, point: &BTreeMap<Var, GaussianRational>) -> Result<GaussianRational> {
        let slice = self.bind(point)?;
        let mut den_val = GaussianRational::one();
        for (f, &e) in &self.den {
            let v = f.eval_exact(&slice)?;
            if v.is_zero() {
                return Err(ExactError::Pole);
            }
            den_val = &den_val * &v.pow(e);
        }
        let num_val = match self.num.eval_exact(&slice) {
            Ok(v) => v,
            Err(ExactError::NegativePowerOfZero(_)) => return Err(ExactError::Pole),
            Err(e) => return Err(e),
        };
        Ok(&num_val / &den_val)
    }

    /// Double-precision complex evaluation; `Pole` when the denominator
    /// collapses numerically to zero.
    pub fn eval_complex(&self, point: &BTreeMap<Var, Complex64>) -> Result<Complex64> {
        let mut slice = Vec::with_capacity(self.num.vars.len());
        for v in self.num.vars.vars() {
            match point.get(v) {
                Some(x) => slice.push(*x),
                None => return Err(ExactError::UnboundVariable(v.to_string())),
            }
        }
        let mut den_val = Complex64::new(1.0, 0.0);
        for (f, &e) in &self.den {
            let x = f.eval_complex(&slice);
            if x.norm() == 0.0 {
                return Err(ExactError::Pole);
            }
            den_val *= x.powi(e as i32);
        }
        Ok(self.num.eval_complex(&slice) / den_val)
    }

    fn bind(&self, point: &BTreeMap<Var, GaussianRational>) -> Result<Vec<GaussianRational>> {
        let mut slice = Vec::with_capacity(self.num.vars.len());
        for v in self.num.vars.vars() {
            match point.get(v) {
                Some(x) => slice.push(x.clone()),
                None => return Err(ExactError::UnboundVariable(v.to_string())),
            }
        }
        Ok(slice)
    }

    /// Identity test by cross multiplication; exact and representation
    /// independent.
    pub fn equal(&self, rhs: &Self) -> bool {
        if self.num.vars != rhs.num.vars {
            return false;
        }
        let lhs = self.num.mul(&rhs.denominator_expanded());
        let rhs_x = rhs.num.mul(&self.denominator_expanded());
        lhs == rhs_x
    }

    /// Denominator free of `v`? (needed for coefficient extraction)
    pub fn denominator_free_of(&self, v: Var) -> bool {
        self.den.keys().all(|f| f.free_of(v))
    }

    /// Coefficient of `v^k` when the denominator is free of `v`.
    pub fn coefficient_of(&self, v: Var, k: i16) -> Result<Self> {
        if !self.denominator_free_of(v) {
            return Err(ExactError::UnknownVariable(format!(
                "denominator not free of {v}"
            )));
        }
        let mut out = RationalFunction {
            num: self.num.coefficient_of(v, k)?,
            den: self.den.clone(),
        };
        out.reduce();
        Ok(out)
    }

    /// Largest power of `v` in the numerator (denominator must be free
    /// of `v`); None for the zero function.
    pub fn degree_in(&self, v: Var) -> Result<Option<i16>> {
        if !self.denominator_free_of(v) {
            return Err(ExactError::UnknownVariable(format!(
                "denominator not free of {v}"
            )));
        }
        self.num.degree_in(v)
    }

    pub fn low_degree_in(&self, v: Var) -> Result<Option<i16>> {
        if !self.denominator_free_of(v) {
            return Err(ExactError::UnknownVariable(format!(
                "denominator not free of {v}"
            )));
        }
        self.num.low_degree_in(v)
    }

    pub fn free_of(&self, v: Var) -> bool {
        self.num.free_of(v) && self.den.keys().all(|f| f.free_of(v))
    }

    /// Substitute variables by other variables of the same set.
    pub fn rename_vars(&self, map: impl Fn(Var) -> Var) -> Result<Self> {
        let mut out = RationalFunction {
            num: self.num.rename_vars(&map)?,
            den: BTreeMap::new(),
        };
        for (f, &e) in &self.den {
            out.push_factor(f.rename_vars(&map)?, e);
        }
        out.reduce();
        Ok(out)
    }

    /// Canonical text form: sorted monomials, explicit exponents,
    /// expanded monic denominator.
    pub fn canonical_text(&self) -> String {
        if self.den.is_empty() {
            return format!("{}", self.num);
        }
        format!("({}) / ({})", self.num, self.denominator_expanded())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_text())
    }
}

impl Monomial {
    /// Componentwise `self >= rhs`; public proxy used by reduction.
    pub fn divisible_by_public(&self, rhs: &Monomial) -> bool {
        self.0.iter().zip(rhs.0.iter()).all(|(a, b)| a >= b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vars::VarSet;

    fn zvar(i: u32, vs: &VarSetRef) -> RationalFunction {
        RationalFunction::var(vs.clone(), Var::Z(i)).unwrap()
    }

    #[test]
    fn partial_fraction_sum_is_one() {
        // z1/(z1-z2) + z2/(z2-z1) = 1
        let vs = VarSet::zs(2);
        let z1 = zvar(1, &vs);
        let z2 = zvar(2, &vs);
        let d12 = z1.sub(&z2);
        let d21 = z2.sub(&z1);
        let a = z1.div(&d12).unwrap();
        let b = z2.div(&d21).unwrap();
        let s = a.add(&b);
        assert!(s.is_one(), "got {s}");
    }

    #[test]
    fn inverse_cancels() {
        let vs = VarSet::zs(2);
        let d = zvar(1, &vs).sub(&zvar(2, &vs));
        let inv = RationalFunction::one(vs).div(&d).unwrap();
        assert!(d.mul(&inv).is_one());
    }

    #[test]
    fn eval_displayed_fraction() {
        // z1 z2 / (z1-z2)^2 at z=(1,-1) -> -1/4
        let vs = VarSet::zs(2);
        let z1 = zvar(1, &vs);
        let z2 = zvar(2, &vs);
        let f = z1
            .mul(&z2)
            .div(&z1.sub(&z2).pow(2))
            .unwrap();
        let mut pt = BTreeMap::new();
        pt.insert(Var::Z(1), GaussianRational::from_int(1));
        pt.insert(Var::Z(2), GaussianRational::from_int(-1));
        let v = f.eval_exact(&pt).unwrap();
        assert_eq!(v, GaussianRational::from_ratio(-1, 4));
    }

    #[test]
    fn pole_detection() {
        let vs = VarSet::zs(2);
        let z1 = zvar(1, &vs);
        let z2 = zvar(2, &vs);
        let f = RationalFunction::one(vs).div(&z1.sub(&z2)).unwrap();
        let mut pt = BTreeMap::new();
        pt.insert(Var::Z(1), GaussianRational::from_int(2));
        pt.insert(Var::Z(2), GaussianRational::from_int(2));
        assert_eq!(f.eval_exact(&pt), Err(ExactError::Pole));
    }

    #[test]
    fn quotient_rule_derivative() {
        // d/dz1 [1/(z1-z2)] = -1/(z1-z2)^2
        let vs = VarSet::zs(2);
        let d = zvar(1, &vs).sub(&zvar(2, &vs));
        let f = RationalFunction::one(vs.clone()).div(&d).unwrap();
        let g = f.derive(Var::Z(1), false).unwrap();
        let expected = RationalFunction::int(vs, -1).div(&d.pow(2)).unwrap();
        assert!(g.equal(&expected));
    }

    #[test]
    fn euler_derivative_of_monomial() {
        let vs = VarSet::zs(1);
        let z = zvar(1, &vs);
        let f = z.pow(3);
        let g = f.derive(Var::Z(1), true).unwrap();
        assert!(g.equal(&f.scale(&GaussianRational::from_int(3))));
    }

    #[test]
    fn sign_matters() {
        // z1 z2/(z1-z2)^2 != -z1 z2/(z2-z1)^2
        let vs = VarSet::zs(2);
        let z1 = zvar(1, &vs);
        let z2 = zvar(2, &vs);
        let num = z1.mul(&z2);
        let a = num.div(&z1.sub(&z2).pow(2)).unwrap();
        let b = num.neg().div(&z2.sub(&z1).pow(2)).unwrap();
        assert!(!a.equal(&b));
        assert!(a.equal(&b.neg()));
    }

    #[test]
    fn newton_identity_two_vars() {
        // p2 = e1^2 - 2 e2 with p2 = z1^2+z2^2, e1 = z1+z2, e2 = z1 z2
        let vs = VarSet::zs(2);
        let z1 = zvar(1, &vs);
        let z2 = zvar(2, &vs);
        let p2 = z1.pow(2).add(&z2.pow(2));
        let e1 = z1.add(&z2);
        let e2 = z1.mul(&z2);
        let rhs = e1.pow(2).sub(&e2.scale(&GaussianRational::from_int(2)));
        assert!(p2.equal(&rhs));
    }

    #[test]
    fn canonical_text_is_stable() {
        let vs = VarSet::zs(2);
        let z1 = zvar(1, &vs);
        let z2 = zvar(2, &vs);
        // Two routes to z1/(z1-z2)
        let a = z1.div(&z1.sub(&z2)).unwrap();
        let one = RationalFunction::one(vs);
        let b = one.add(&z2.div(&z1.sub(&z2)).unwrap());
        assert_eq!(a.canonical_text(), b.canonical_text());
    }
}
