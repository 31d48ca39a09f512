use std::fmt;

use super::Triangulation;

/// Multigraph with one node per tetrahedron and one arc per glued face pair.
/// Loops record faces of one tetrahedron glued together.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacePairingGraph {
    n: usize,
    /// Arcs as `(lo, hi)` node pairs, sorted.
    arcs: Vec<(usize, usize)>,
}

impl FacePairingGraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut arcs: Vec<(usize, usize)> = arcs
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        arcs.sort_unstable();
        FacePairingGraph { n, arcs }
    }

    pub fn of(t: &Triangulation) -> Self {
        let arcs = t
            .internal_faces()
            .into_iter()
            .map(|(src, g)| (src.tet, g.tet));
        FacePairingGraph::new(t.size(), arcs)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// Number of faces of `node` used by arcs (a loop uses two).
    pub fn degree(&self, node: usize) -> usize {
        self.arcs
            .iter()
            .map(|&(a, b)| usize::from(a == node) + usize::from(b == node))
            .sum()
    }

    pub fn loops(&self, node: usize) -> usize {
        self.arcs.iter().filter(|&&(a, b)| a == node && b == node).count()
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> usize {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.arcs.iter().filter(|&&arc| arc == key).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for &(a, b) in &self.arcs {
                if seen[a] != seen[b] {
                    seen[a] = true;
                    seen[b] = true;
                    changed = true;
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn relabel(&self, map: &[usize]) -> FacePairingGraph {
        FacePairingGraph::new(self.n, self.arcs.iter().map(|&(a, b)| (map[a], map[b])))
    }

    /// Isomorphism-invariant form: the smallest arc list over all node
    /// relabellings that keep the degree sequence non-increasing.
    pub fn canonical(&self) -> FacePairingGraph {
        let n = self.n;
        let degrees: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut best: Option<FacePairingGraph> = None;
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        // Position p receives nodes of the p-th largest degree.
        let mut target_degrees = degrees.clone();
        target_degrees.sort_unstable_by(|a, b| b.cmp(a));
        fn assign(
            g: &FacePairingGraph,
            degrees: &[usize],
            target: &[usize],
            pos: usize,
            map: &mut [usize],
            used: &mut [bool],
            best: &mut Option<FacePairingGraph>,
        ) {
            let n = degrees.len();
            if pos == n {
                let cand = g.relabel(map);
                if best.as_ref().map_or(true, |b| cand < *b) {
                    *best = Some(cand);
                }
                return;
            }
            for v in 0..n {
                if !used[v] && degrees[v] == target[pos] {
                    used[v] = true;
                    map[v] = pos;
                    assign(g, degrees, target, pos + 1, map, used, best);
                    used[v] = false;
                }
            }
        }
        assign(
            self,
            &degrees,
            &target_degrees,
            0,
            &mut map,
            &mut used,
            &mut best,
        );
        best.unwrap_or_else(|| self.clone())
    }

    /// Compact identifier, e.g. `4:0-0,0-1,1-1`.
    pub fn id(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FacePairingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.n)?;
        for (i, (a, b)) in self.arcs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}-{b}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_tetrahedron_has_no_arcs() {
        let g = FacePairingGraph::of(&Triangulation::new(1));
        assert_eq!(g.node_count(), 1);
        assert!(g.arcs().is_empty());
    }

    #[test]
    fn canonical_form_is_relabelling_invariant() {
        let g = FacePairingGraph::new(4, [(0, 0), (0, 1), (1, 2), (2, 3), (3, 3), (1, 2)]);
        let c = g.canonical();
        let perms = [[1, 0, 3, 2], [3, 2, 1, 0], [2, 3, 0, 1], [0, 2, 1, 3]];
        for p in perms {
            assert_eq!(g.relabel(&p).canonical(), c);
        }
        assert_eq!(c.arcs().len(), 6);
    }
}
