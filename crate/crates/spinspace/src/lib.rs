//! Finite-dimensional spin algebra on `(C^N)^{\otimes n}`.
//!
//! Basis ordering is little-endian in the site index: the content of
//! site 1 varies fastest, so basis index `b = sum_i a_i N^{i-1}` for
//! site contents `a_i in 0..N`.

mod perm;

pub use perm::Perm;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Largest dimension for which dense matrices may be materialized.
pub const MAX_DENSE_DIM: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpinError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("site index out of range or equal sites")]
    BadSiteIndex,
    #[error("dense representation of dimension {0} exceeds the {MAX_DENSE_DIM} guard")]
    TooLargeForDense(usize),
}

pub type Result<T> = std::result::Result<T, SpinError>;

/// Vector on the `n`-fold tensor power of an `N`-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinVector {
    pub sites: usize,
    pub local_dim: usize,
    pub amp: DVector<Complex64>,
}

impl SpinVector {
    pub fn zero(sites: usize, local_dim: usize) -> Self {
        let dim = local_dim.pow(sites as u32);
        SpinVector {
            sites,
            local_dim,
            amp: DVector::zeros(dim),
        }
    }

    /// Product basis vector from site contents.
    pub fn basis(sites: usize, local_dim: usize, contents: &[usize]) -> Self {
        assert_eq!(contents.len(), sites);
        let mut v = Self::zero(sites, local_dim);
        v.amp[pack_index(contents, local_dim)] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn norm(&self) -> f64 {
        self.amp.norm()
    }

    pub fn normalize(&self) -> Self {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        SpinVector {
            sites: self.sites,
            local_dim: self.local_dim,
            amp: self.amp.clone() / Complex64::new(n, 0.0),
        }
    }

    /// Hermitian inner product `<self, rhs>`, conjugate-linear in `self`.
    pub fn dot(&self, rhs: &Self) -> Complex64 {
        self.amp.dotc(&rhs.amp)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        SpinVector {
            sites: self.sites,
            local_dim: self.local_dim,
            amp: self.amp.clone() * c,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        SpinVector {
            sites: self.sites,
            local_dim: self.local_dim,
            amp: &self.amp + &rhs.amp,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        SpinVector {
            sites: self.sites,
            local_dim: self.local_dim,
            amp: &self.amp - &rhs.amp,
        }
    }

    pub fn to_json(&self) -> serde_json::Value
    where
        Self: Sized,
    {
        #[derive(Serialize)]
        struct V {
            sites: usize,
            local_dim: usize,
            amplitudes: Vec<[f64; 2]>,
        }
        serde_json::to_value(V {
            sites: self.sites,
            local_dim: self.local_dim,
            amplitudes: self.amp.iter().map(|c| [c.re, c.im]).collect(),
        })
        .expect("serializable")
    }
}

fn pack_index(contents: &[usize], local_dim: usize) -> usize {
    let mut b = 0;
    for (i, &a) in contents.iter().enumerate() {
        debug_assert!(a < local_dim);
        b += a * local_dim.pow(i as u32);
    }
    b
}

fn unpack_index(mut b: usize, sites: usize, local_dim: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(sites);
    for _ in 0..sites {
        out.push(b % local_dim);
        b /= local_dim;
    }
    out
}

#[derive(Clone, Debug)]
enum Repr {
    Dense(DMatrix<Complex64>),
    /// Formal sum of weighted permutation words, applied lazily.
    Words(Vec<(Complex64, Perm)>),
}

/// Linear operator on `(C^N)^{\otimes n}`.
#[derive(Clone, Debug)]
pub struct SpinOperator {
    pub sites: usize,
    pub local_dim: usize,
    repr: Repr,
}

impl SpinOperator {
    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.sites as u32)
    }

    pub fn identity(sites: usize, local_dim: usize) -> Self {
        SpinOperator {
            sites,
            local_dim,
            repr: Repr::Words(vec![(Complex64::new(1.0, 0.0), Perm::identity(sites))]),
        }
    }

    pub fn zero(sites: usize, local_dim: usize) -> Self {
        SpinOperator {
            sites,
            local_dim,
            repr: Repr::Words(vec![]),
        }
    }

    pub fn from_dense(sites: usize, local_dim: usize, m: DMatrix<Complex64>) -> Self {
        let dim = local_dim.pow(sites as u32);
        assert_eq!(m.nrows(), dim);
        assert_eq!(m.ncols(), dim);
        SpinOperator {
            sites,
            local_dim,
            repr: Repr::Dense(m),
        }
    }

    /// The spin representation of a permutation: site contents move from
    /// slot `k` to slot `sigma(k)`.
    pub fn from_perm(sigma: &Perm, local_dim: usize) -> Self {
        SpinOperator {
            sites: sigma.n(),
            local_dim,
            repr: Repr::Words(vec![(Complex64::new(1.0, 0.0), sigma.clone())]),
        }
    }

    /// Weighted sum of permutation words.
    pub fn from_words(sites: usize, local_dim: usize, words: Vec<(Complex64, Perm)>) -> Self {
        for (_, w) in &words {
            assert_eq!(w.n(), sites);
        }
        SpinOperator {
            sites,
            local_dim,
            repr: Repr::Words(words),
        }
    }

    /// `P_{ij}`: swap of tensor factors `i` and `j` (1-based).
    pub fn permutation(i: usize, j: usize, sites: usize, local_dim: usize) -> Result<Self> {
        if i == j || i < 1 || j < 1 || i > sites || j > sites {
            return Err(SpinError::BadSiteIndex);
        }
        Ok(Self::from_perm(
            &Perm::transposition(sites, i, j),
            local_dim,
        ))
    }

    pub fn is_words(&self) -> bool {
        matches!(self.repr, Repr::Words(_))
    }

    fn check_same_space(&self, other: &SpinOperator) -> Result<()> {
        if self.sites != other.sites || self.local_dim != other.local_dim {
            return Err(SpinError::DimensionMismatch(format!(
                "({},{}) vs ({},{})",
                self.sites, other.sites, self.local_dim, other.local_dim
            )));
        }
        Ok(())
    }

    /// Apply to a vector without materializing a matrix in the word form.
    pub fn apply(&self, v: &SpinVector) -> Result<SpinVector> {
        if self.sites != v.sites || self.local_dim != v.local_dim {
            return Err(SpinError::DimensionMismatch(format!(
                "op ({},{}) vs vec ({},{})",
                self.sites, self.local_dim, v.sites, v.local_dim
            )));
        }
        match &self.repr {
            Repr::Dense(m) => Ok(SpinVector {
                sites: v.sites,
                local_dim: v.local_dim,
                amp: m * &v.amp,
            }),
            Repr::Words(words) => {
                let mut out = SpinVector::zero(v.sites, v.local_dim);
                for (c, w) in words {
                    for b in 0..v.dim() {
                        let contents = unpack_index(b, v.sites, v.local_dim);
                        let mut moved = vec![0usize; v.sites];
                        for k in 1..=v.sites {
                            moved[w.image(k) - 1] = contents[k - 1];
                        }
                        out.amp[pack_index(&moved, v.local_dim)] += c * v.amp[b];
                    }
                }
                Ok(out)
            }
        }
    }

    /// Dense matrix form, guarded by [`MAX_DENSE_DIM`].
    pub fn matrix(&self) -> Result<DMatrix<Complex64>> {
        match &self.repr {
            Repr::Dense(m) => Ok(m.clone()),
            Repr::Words(words) => {
                let dim = self.dim();
                if dim > MAX_DENSE_DIM {
                    return Err(SpinError::TooLargeForDense(dim));
                }
                let mut m = DMatrix::zeros(dim, dim);
                for (c, w) in words {
                    for b in 0..dim {
                        let contents = unpack_index(b, self.sites, self.local_dim);
                        let mut moved = vec![0usize; self.sites];
                        for k in 1..=self.sites {
                            moved[w.image(k) - 1] = contents[k - 1];
                        }
                        m[(pack_index(&moved, self.local_dim), b)] += c;
                    }
                }
                Ok(m)
            }
        }
    }

    pub fn to_dense(&self) -> Result<Self> {
        Ok(Self::from_dense(self.sites, self.local_dim, self.matrix()?))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_space(rhs)?;
        match (&self.repr, &rhs.repr) {
            (Repr::Words(a), Repr::Words(b)) => {
                let mut words = a.clone();
                words.extend(b.iter().cloned());
                Ok(Self::from_words(self.sites, self.local_dim, words))
            }
            _ => Ok(Self::from_dense(
                self.sites,
                self.local_dim,
                self.matrix()? + rhs.matrix()?,
            )),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        match &self.repr {
            Repr::Dense(m) => Self::from_dense(self.sites, self.local_dim, m * c),
            Repr::Words(words) => Self::from_words(
                self.sites,
                self.local_dim,
                words.iter().map(|(a, w)| (a * c, w.clone())).collect(),
            ),
        }
    }

    /// Operator product `self * rhs` (apply `rhs` first).
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_space(rhs)?;
        match (&self.repr, &rhs.repr) {
            (Repr::Words(a), Repr::Words(b)) => {
                // rho(w) rho(v) = rho(w v)
                let mut words = Vec::with_capacity(a.len() * b.len());
                for (ca, wa) in a {
                    for (cb, wb) in b {
                        words.push((ca * cb, wa.compose(wb)));
                    }
                }
                Ok(Self::from_words(self.sites, self.local_dim, words))
            }
            _ => Ok(Self::from_dense(
                self.sites,
                self.local_dim,
                self.matrix()? * rhs.matrix()?,
            )),
        }
    }

    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        let ab = self.mul(rhs)?;
        let ba = rhs.mul(self)?;
        ab.sub(&ba)
    }

    pub fn adjoint(&self) -> Result<Self> {
        match &self.repr {
            Repr::Dense(m) => Ok(Self::from_dense(self.sites, self.local_dim, m.adjoint())),
            Repr::Words(words) => Ok(Self::from_words(
                self.sites,
                self.local_dim,
                words
                    .iter()
                    .map(|(c, w)| (c.conj(), w.inverse()))
                    .collect(),
            )),
        }
    }

    /// Frobenius norm.
    pub fn op_norm(&self) -> Result<f64> {
        Ok(self.matrix()?.norm())
    }

    pub fn trace(&self) -> Result<Complex64> {
        Ok(self.matrix()?.trace())
    }

    /// Max entrywise deviation from the adjoint below `tol`?
    pub fn is_hermitian(&self, tol: f64) -> Result<bool> {
        let m = self.matrix()?;
        let d = &m - m.adjoint();
        Ok(d.iter().map(|c| c.norm()).fold(0.0, f64::max) <= tol)
    }

    pub fn to_json(&self) -> Result<serde_json::Value> {
        let m = self.matrix()?;
        let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
            .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
            .collect();
        Ok(serde_json::json!({
            "sites": self.sites,
            "local_dim": self.local_dim,
            "matrix": rows,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn permutation_swaps_factors() {
        // P12 (e_a (x) e_b (x) e_c) = e_b (x) e_a (x) e_c
        let p12 = SpinOperator::permutation(1, 2, 3, 2).unwrap();
        let v = SpinVector::basis(3, 2, &[1, 0, 1]);
        let w = p12.apply(&v).unwrap();
        assert_eq!(w, SpinVector::basis(3, 2, &[0, 1, 1]));
    }

    #[test]
    fn permutation_is_involution() {
        let p = SpinOperator::permutation(1, 2, 2, 3).unwrap();
        let sq = p.mul(&p).unwrap();
        let id = SpinOperator::identity(2, 3).matrix().unwrap();
        assert!((sq.matrix().unwrap() - id).norm() < 1e-14);
    }

    #[test]
    fn disjoint_permutations_commute() {
        let p12 = SpinOperator::permutation(1, 2, 4, 2).unwrap();
        let p34 = SpinOperator::permutation(3, 4, 4, 2).unwrap();
        let comm = p12.commutator(&p34).unwrap();
        assert!(comm.op_norm().unwrap() < 1e-14);
    }

    #[test]
    fn braid_identity_dense() {
        // P_ij P_jk P_ij = P_ik for all distinct triples, n <= 5, N = 2, 3
        for local in [2usize, 3] {
            for n in 3..=5usize {
                if local.pow(n as u32) > MAX_DENSE_DIM {
                    continue;
                }
                for i in 1..=n {
                    for j in 1..=n {
                        for k in 1..=n {
                            if i == j || j == k || i == k {
                                continue;
                            }
                            let pij = SpinOperator::permutation(i, j, n, local).unwrap();
                            let pjk = SpinOperator::permutation(j, k, n, local).unwrap();
                            let pik = SpinOperator::permutation(i, k, n, local).unwrap();
                            let lhs = pij.mul(&pjk).unwrap().mul(&pij).unwrap();
                            let d = lhs.sub(&pik).unwrap();
                            assert!(d.op_norm().unwrap() < 1e-13);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lazy_product_equals_dense_application() {
        let p12 = SpinOperator::permutation(1, 2, 3, 2).unwrap();
        let p23 = SpinOperator::permutation(2, 3, 3, 2).unwrap();
        let prod = p12.mul(&p23).unwrap();
        assert!(prod.is_words());
        let mut v = SpinVector::zero(3, 2);
        for (i, a) in v.amp.iter_mut().enumerate() {
            *a = Complex64::new(i as f64 + 0.25, -(i as f64) * 0.5);
        }
        // lazy word application vs sequential dense application
        let lazy = prod.apply(&v).unwrap();
        let seq = p12
            .to_dense()
            .unwrap()
            .apply(&p23.to_dense().unwrap().apply(&v).unwrap())
            .unwrap();
        assert!(lazy.sub(&seq).norm() < 1e-13);
    }

    #[test]
    fn identity_norm_is_sqrt_dim() {
        let id = SpinOperator::identity(2, 2);
        assert!((id.op_norm().unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn permutation_is_hermitian() {
        let p = SpinOperator::permutation(1, 2, 2, 2).unwrap();
        assert!(p.is_hermitian(1e-14).unwrap());
    }

    #[test]
    fn word_adjoint_matches_dense_adjoint() {
        let w = SpinOperator::from_words(
            3,
            2,
            vec![
                (Complex64::new(0.3, 0.7), Perm::from_one_line(&[2, 3, 1])),
                (c(1.5), Perm::transposition(3, 1, 3)),
            ],
        );
        let a = w.adjoint().unwrap().matrix().unwrap();
        let b = w.matrix().unwrap().adjoint();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn representation_is_homomorphism() {
        for a in Perm::all(4) {
            for b in [Perm::transposition(4, 1, 3), Perm::cycle(4)] {
                let ra = SpinOperator::from_perm(&a, 2);
                let rb = SpinOperator::from_perm(&b, 2);
                let rab = SpinOperator::from_perm(&a.compose(&b), 2);
                let d = ra.mul(&rb).unwrap().sub(&rab).unwrap();
                assert!(d.op_norm().unwrap() < 1e-14);
            }
        }
    }
}
