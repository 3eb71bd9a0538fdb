//! Permutations of `{1..n}` in one-line notation.

use smallvec::SmallVec;
use std::fmt;

/// A permutation `w` of `{1..n}`. Internally zero-based: `map[i] = w(i+1)-1`.
/// Composition is left action on positions: `(w * v)(k) = w(v(k))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm {
    map: SmallVec<[u8; 8]>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            map: (0..n as u8).collect(),
        }
    }

    /// Transposition `(i j)` with 1-based site labels.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        assert!(i >= 1 && j >= 1 && i <= n && j <= n && i != j, "bad transposition ({i} {j}) for n={n}");
        let mut p = Self::identity(n);
        p.map.swap(i - 1, j - 1);
        p
    }

    /// From one-line notation with 1-based images.
    pub fn from_one_line(images: &[usize]) -> Self {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            assert!(x >= 1 && x <= n && !seen[x - 1], "not a permutation");
            seen[x - 1] = true;
        }
        Perm {
            map: images.iter().map(|&x| (x - 1) as u8).collect(),
        }
    }

    /// Cyclic shift `k -> k+1 (mod n)`.
    pub fn cycle(n: usize) -> Self {
        Perm {
            map: (0..n as u8).map(|i| (i + 1) % n as u8).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| x as usize == i)
    }

    /// Image of the 1-based point `k`.
    pub fn image(&self, k: usize) -> usize {
        self.map[k - 1] as usize + 1
    }

    /// `(self * rhs)(k) = self(rhs(k))`.
    pub fn compose(&self, rhs: &Perm) -> Perm {
        assert_eq!(self.n(), rhs.n());
        Perm {
            map: rhs.map.iter().map(|&x| self.map[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut map = SmallVec::from_elem(0u8, self.n());
        for (i, &x) in self.map.iter().enumerate() {
            map[x as usize] = i as u8;
        }
        Perm { map }
    }

    /// Reduced decomposition into adjacent transpositions `(i, i+1)`,
    /// listed so that their ordered product (leftmost first) equals `self`.
    pub fn reduced_word(&self) -> Vec<usize> {
        // Selection sort into the identity records the word of the inverse;
        // reversing it gives a reduced word for self.
        let mut m = self.map.clone();
        let mut word = Vec::new();
        loop {
            let mut swapped = false;
            for i in 0..m.len().saturating_sub(1) {
                if m[i] > m[i + 1] {
                    m.swap(i, i + 1);
                    word.push(i + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        word.reverse();
        word
    }

    pub fn parity(&self) -> i32 {
        if self.reduced_word().len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All permutations of `{1..n}` in a deterministic order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Perm::from_one_line(&cur));
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", x + 1)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        let s = Perm::transposition(3, 1, 2);
        let t = Perm::transposition(3, 2, 3);
        let st = s.compose(&t);
        // (s t)(1) = s(t(1)) = s(1) = 2
        assert_eq!(st.image(1), 2);
        assert_eq!(st.image(2), 3);
        assert_eq!(st.image(3), 1);
        assert!(st.compose(&st.inverse()).is_identity());
    }

    #[test]
    fn reduced_word_reconstructs() {
        for p in Perm::all(4) {
            let mut acc = Perm::identity(4);
            for s in p.reduced_word() {
                acc = acc.compose(&Perm::transposition(4, s, s + 1));
            }
            assert_eq!(acc, p);
        }
    }

    #[test]
    fn all_permutations_count() {
        assert_eq!(Perm::all(4).len(), 24);
    }
}
