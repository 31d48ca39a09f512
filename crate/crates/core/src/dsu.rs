//! Disjoint-set forests used for orbit closures.

/// Union-find with path compression and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Merges the classes of `a` and `b`; returns `false` if they were already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }

    /// Class label for every element: the minimum member of its class.
    pub fn min_labels(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut min_of_root = vec![usize::MAX; n];
        for x in 0..n {
            let r = self.find(x);
            min_of_root[r] = min_of_root[r].min(x);
        }
        (0..n).map(|x| min_of_root[self.find(x)]).collect()
    }
}

/// Union-find where each element carries a parity bit relative to its root.
///
/// Merging `a` and `b` with parity `p` asserts `parity(a) ^ parity(b) == p`.
/// A contradiction is reported instead of merged. Supports rollback to a
/// previous state, so it never compresses paths.
#[derive(Clone, Debug)]
pub struct ParitySets {
    parent: Vec<usize>,
    parity: Vec<bool>,
    rank: Vec<u8>,
    history: Vec<Undo>,
}

#[derive(Clone, Copy, Debug)]
enum Undo {
    Link { child: usize, root: usize, bumped: bool },
}

/// Result of a parity union.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityUnion {
    Merged,
    Consistent,
    Contradiction,
}

impl ParitySets {
    pub fn new(n: usize) -> Self {
        ParitySets {
            parent: (0..n).collect(),
            parity: vec![false; n],
            rank: vec![0; n],
            history: Vec::new(),
        }
    }

    /// Root of `x` and the parity of `x` relative to it.
    pub fn find(&self, mut x: usize) -> (usize, bool) {
        let mut p = false;
        while self.parent[x] != x {
            p ^= self.parity[x];
            x = self.parent[x];
        }
        (x, p)
    }

    pub fn union(&mut self, a: usize, b: usize, relative: bool) -> ParityUnion {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return if pa ^ pb == relative {
                ParityUnion::Consistent
            } else {
                ParityUnion::Contradiction
            };
        }
        let (child, root) = if self.rank[ra] < self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        let bumped = self.rank[child] == self.rank[root];
        self.parent[child] = root;
        self.parity[child] = pa ^ pb ^ relative;
        if bumped {
            self.rank[root] += 1;
        }
        self.history.push(Undo::Link {
            child,
            root,
            bumped,
        });
        ParityUnion::Merged
    }

    /// Opaque marker for [`ParitySets::rollback`].
    pub fn checkpoint(&self) -> usize {
        self.history.len()
    }

    pub fn rollback(&mut self, mark: usize) {
        while self.history.len() > mark {
            let Undo::Link {
                child,
                root,
                bumped,
            } = self.history.pop().expect("history length checked");
            self.parent[child] = child;
            self.parity[child] = false;
            if bumped {
                self.rank[root] -= 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_union_find() {
        let mut d = DisjointSets::new(6);
        assert!(d.union(4, 2));
        assert!(d.union(2, 5));
        assert!(!d.union(5, 4));
        assert_eq!(d.min_labels(), vec![0, 1, 2, 3, 2, 2]);
    }

    #[test]
    fn parity_contradiction_and_rollback() {
        let mut p = ParitySets::new(4);
        assert_eq!(p.union(0, 1, true), ParityUnion::Merged);
        let mark = p.checkpoint();
        assert_eq!(p.union(1, 2, true), ParityUnion::Merged);
        assert_eq!(p.union(0, 2, false), ParityUnion::Consistent);
        assert_eq!(p.union(0, 2, true), ParityUnion::Contradiction);
        p.rollback(mark);
        assert_ne!(p.find(2).0, p.find(0).0);
        assert_eq!(p.union(0, 2, true), ParityUnion::Merged);
        assert_eq!(p.union(1, 2, false), ParityUnion::Consistent);
    }
}
