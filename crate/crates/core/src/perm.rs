//! Permutations of the four vertices of a tetrahedron.

use std::fmt;

/// A permutation of `{0, 1, 2, 3}`, stored as its image array.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4([u8; 4]);

/// All 24 permutations in lexicographic order of their image arrays.
pub const ALL_PERMS: [Perm4; 24] = {
    let mut out = [Perm4([0, 1, 2, 3]); 24];
    let mut idx = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                if a != b && a != c && b != c {
                    let d = 6 - a - b - c;
                    out[idx] = Perm4([a, b, c, d]);
                    idx += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// Builds a permutation from its images; `None` unless they form a bijection.
    pub fn from_images(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Perm4(images))
    }

    #[inline]
    pub fn apply(self, v: usize) -> usize {
        self.0[v] as usize
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }

    pub fn inverse(self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (i, &img) in self.0.iter().enumerate() {
            inv[img as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Perm4) -> Perm4 {
        let mut out = [0u8; 4];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.0[other.0[i] as usize];
        }
        Perm4(out)
    }

    /// Position of this permutation in [`ALL_PERMS`].
    pub fn index(self) -> usize {
        let [a, b, c, _] = self.0;
        let a = a as usize;
        let b = b as usize;
        let c = c as usize;
        let rank_b = b - usize::from(b > a);
        let rank_c = c - usize::from(c > a) - usize::from(c > b);
        a * 6 + rank_b * 2 + rank_c
    }

    pub fn from_index(idx: usize) -> Perm4 {
        ALL_PERMS[idx]
    }

    /// `true` for even permutations.
    pub fn is_even(self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 0
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({}{}{}{})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trips() {
        for (i, p) in ALL_PERMS.iter().enumerate() {
            assert_eq!(p.index(), i);
            assert_eq!(Perm4::from_index(i), *p);
        }
        let mut sorted = ALL_PERMS.to_vec();
        sorted.sort();
        assert_eq!(sorted, ALL_PERMS.to_vec());
    }

    #[test]
    fn inverse_and_compose() {
        for &p in &ALL_PERMS {
            assert_eq!(p.compose(p.inverse()), Perm4::IDENTITY);
            assert_eq!(p.inverse().compose(p), Perm4::IDENTITY);
            for &q in &ALL_PERMS {
                let pq = p.compose(q);
                for v in 0..4 {
                    assert_eq!(pq.apply(v), p.apply(q.apply(v)));
                }
                assert_eq!(pq.is_even(), p.is_even() == q.is_even());
            }
        }
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm4::from_images([0, 0, 1, 2]).is_none());
        assert!(Perm4::from_images([0, 1, 2, 4]).is_none());
        assert_eq!(Perm4::from_images([1, 2, 3, 0]).unwrap().apply(3), 0);
    }
}
