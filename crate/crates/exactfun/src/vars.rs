//! Variable identifiers and ordered variable sets.

use crate::error::{ExactError, Result};
use std::fmt;
use std::sync::Arc;

/// A symbolic variable. `Z(i)` are coordinates (Laurent-capable),
/// `P(i)` momenta, `Hbar` and `Lambda` formal parameters.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Var {
    Z(u32),
    P(u32),
    Hbar,
    Lambda,
}

impl Var {
    /// Only coordinate variables admit negative exponents.
    pub fn is_laurent(&self) -> bool {
        matches!(self, Var::Z(_))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z(i) => write!(f, "z{i}"),
            Var::P(i) => write!(f, "p{i}"),
            Var::Hbar => write!(f, "hbar"),
            Var::Lambda => write!(f, "lambda"),
        }
    }
}

/// An ordered list of variables fixing the monomial order (graded
/// lexicographic on this list). Shared by reference between values.
#[derive(PartialEq, Eq, Debug)]
pub struct VarSet {
    vars: Vec<Var>,
}

pub type VarSetRef = Arc<VarSet>;

impl VarSet {
    pub fn new(vars: Vec<Var>) -> VarSetRef {
        let mut seen = vars.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), vars.len(), "duplicate variable in set");
        Arc::new(VarSet { vars })
    }

    /// Coordinates only: `z1..zn`.
    pub fn zs(n: u32) -> VarSetRef {
        Self::new((1..=n).map(Var::Z).collect())
    }

    /// Full operator-coefficient set: `z1..zn, p1..pn, hbar, lambda`.
    pub fn full(n: u32) -> VarSetRef {
        let mut v: Vec<Var> = (1..=n).map(Var::Z).collect();
        v.extend((1..=n).map(Var::P));
        v.push(Var::Hbar);
        v.push(Var::Lambda);
        Self::new(v)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn index_of(&self, v: Var) -> Result<usize> {
        self.vars
            .iter()
            .position(|&w| w == v)
            .ok_or_else(|| ExactError::UnknownVariable(v.to_string()))
    }

    pub fn contains(&self, v: Var) -> bool {
        self.vars.contains(&v)
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.vars.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}
