use crate::dsu::{DisjointSets, ParitySets, ParityUnion};

use super::{edge_index, face_vertices, FaceRef, Triangulation};

/// Topological type of a vertex link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinkClass {
    Sphere,
    Disc,
    Other,
}

/// One edge of the triangulation: the tetrahedron edges identified with it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeOrbit {
    /// `(tet, edge index, same_direction)`; the direction flag compares the
    /// member's lower-to-higher orientation with the orbit's first member.
    pub members: Vec<(usize, usize, bool)>,
    /// `false` if the edge is identified with itself in reverse.
    pub valid: bool,
    /// `true` if some member lies in a boundary face.
    pub boundary: bool,
}

#[derive(Clone, Debug)]
pub struct SkeletonData {
    /// Tetrahedron corners `(tet, vertex)` of each vertex, ordered by minimum member.
    pub vertex_orbits: Vec<Vec<(usize, usize)>>,
    pub edge_orbits: Vec<EdgeOrbit>,
    pub boundary_faces: Vec<FaceRef>,
    pub link_classes: Vec<LinkClass>,
    vertex_of_corner: Vec<usize>,
    edge_of_tet_edge: Vec<usize>,
}

impl SkeletonData {
    /// Index of the vertex orbit containing corner `vertex` of `tet`.
    pub fn vertex_of(&self, tet: usize, vertex: usize) -> usize {
        self.vertex_of_corner[4 * tet + vertex]
    }

    /// Index of the edge orbit containing tetrahedron edge `edge` of `tet`.
    pub fn edge_of(&self, tet: usize, edge: usize) -> usize {
        self.edge_of_tet_edge[6 * tet + edge]
    }

    /// Number of tetrahedron edges in the orbit of the given edge.
    pub fn edge_degree(&self, tet: usize, edge: usize) -> usize {
        self.edge_orbits[self.edge_of(tet, edge)].members.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub edge_valid: Vec<bool>,
    pub link_classes: Vec<LinkClass>,
    pub connected: bool,
    pub is_closed: bool,
    pub is_bounded: bool,
    /// Connected, no edge reversed, every link a sphere or disc.
    pub is_3manifold: bool,
    pub vertex_count: usize,
    pub edge_count: usize,
}

impl ValidityReport {
    pub fn edges_valid(&self) -> bool {
        self.edge_valid.iter().all(|&v| v)
    }
}

/// Closes the gluing maps to get vertex and edge orbits, edge validity and
/// vertex link types.
pub fn compute_skeleton(t: &Triangulation) -> SkeletonData {
    let n = t.size();
    let mut corners = DisjointSets::new(4 * n);
    let mut edges = ParitySets::new(6 * n);
    let mut reversed_roots = Vec::new();
    for t_idx in 0..n {
        for f in 0..4 {
            let Some(g) = t.gluing(t_idx, f) else { continue };
            let verts = face_vertices(f);
            for &v in &verts {
                corners.union(4 * t_idx + v, 4 * g.tet + g.perm.apply(v));
            }
            for i in 0..3 {
                for j in (i + 1)..3 {
                    let (x, y) = (verts[i], verts[j]);
                    let (px, py) = (g.perm.apply(x), g.perm.apply(y));
                    let a = 6 * t_idx + edge_index(x, y);
                    let b = 6 * g.tet + edge_index(px, py);
                    if edges.union(a, b, px > py) == ParityUnion::Contradiction {
                        reversed_roots.push(a);
                    }
                }
            }
        }
    }

    let corner_labels = corners.min_labels();
    let mut vertex_of_corner = vec![usize::MAX; 4 * n];
    let mut vertex_orbits: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut orbit_of_label = vec![usize::MAX; 4 * n];
    for c in 0..4 * n {
        let label = corner_labels[c];
        if orbit_of_label[label] == usize::MAX {
            orbit_of_label[label] = vertex_orbits.len();
            vertex_orbits.push(Vec::new());
        }
        let o = orbit_of_label[label];
        vertex_of_corner[c] = o;
        vertex_orbits[o].push((c / 4, c % 4));
    }

    let mut edge_of_tet_edge = vec![usize::MAX; 6 * n];
    let mut edge_orbits: Vec<EdgeOrbit> = Vec::new();
    let mut orbit_of_root = vec![usize::MAX; 6 * n];
    let mut root_parity = vec![false; 6 * n];
    for e in 0..6 * n {
        let (root, parity) = edges.find(e);
        if orbit_of_root[root] == usize::MAX {
            orbit_of_root[root] = edge_orbits.len();
            root_parity[root] = parity;
            edge_orbits.push(EdgeOrbit {
                members: Vec::new(),
                valid: true,
                boundary: false,
            });
        }
        let o = orbit_of_root[root];
        edge_of_tet_edge[e] = o;
        edge_orbits[o]
            .members
            .push((e / 6, e % 6, parity == root_parity[root]));
    }
    for e in reversed_roots {
        let o = edge_of_tet_edge[e];
        edge_orbits[o].valid = false;
    }

    let boundary_faces = t.boundary_faces();
    for bf in &boundary_faces {
        let verts = face_vertices(bf.face);
        for i in 0..3 {
            for j in (i + 1)..3 {
                let o = edge_of_tet_edge[6 * bf.tet + edge_index(verts[i], verts[j])];
                edge_orbits[o].boundary = true;
            }
        }
    }

    let link_classes = link_summaries(t, &vertex_of_corner, vertex_orbits.len())
        .into_iter()
        .map(LinkSummary::class)
        .collect();

    SkeletonData {
        vertex_orbits,
        edge_orbits,
        boundary_faces,
        link_classes,
        vertex_of_corner,
        edge_of_tet_edge,
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct LinkSummary {
    euler: i64,
    boundary_sides: usize,
}

impl LinkSummary {
    fn class(self) -> LinkClass {
        match (self.euler, self.boundary_sides > 0) {
            (2, false) => LinkClass::Sphere,
            (1, true) => LinkClass::Disc,
            _ => LinkClass::Other,
        }
    }
}

/// Builds every vertex link from corner triangles and returns (χ, boundary)
/// per vertex orbit.
///
/// Link triangle for corner `(t, v)`: its sides lie in the three faces of `t`
/// through `v`; its corners are the edge-ends `(t, edge vx, at v)`.
fn link_summaries(t: &Triangulation, vertex_of_corner: &[usize], orbits: usize) -> Vec<LinkSummary> {
    let n = t.size();
    // Edge-end id: 12 per tetrahedron, (edge, end) with end 0 = lower vertex.
    let end_id = |tet: usize, v: usize, x: usize| 12 * tet + 2 * edge_index(v, x) + usize::from(v > x);
    let mut ends = DisjointSets::new(12 * n);
    let mut out = vec![LinkSummary::default(); orbits];
    let mut internal_sides = vec![0usize; orbits];
    for tet in 0..n {
        for v in 0..4 {
            let o = vertex_of_corner[4 * tet + v];
            out[o].euler += 1; // the link triangle itself
            for f in 0..4 {
                if f == v {
                    continue;
                }
                match t.gluing(tet, f) {
                    None => out[o].boundary_sides += 1,
                    Some(g) => {
                        internal_sides[o] += 1;
                        for x in 0..4 {
                            if x == v || x == f {
                                continue;
                            }
                            ends.union(
                                end_id(tet, v, x),
                                end_id(g.tet, g.perm.apply(v), g.perm.apply(x)),
                            );
                        }
                    }
                }
            }
        }
    }
    let mut counted = vec![false; 12 * n];
    let mut link_vertices = vec![0i64; orbits];
    for tet in 0..n {
        for v in 0..4 {
            let o = vertex_of_corner[4 * tet + v];
            for x in 0..4 {
                if x == v {
                    continue;
                }
                let r = ends.find(end_id(tet, v, x));
                if !counted[r] {
                    counted[r] = true;
                    link_vertices[o] += 1;
                }
            }
        }
    }
    for o in 0..orbits {
        let edges = (internal_sides[o] / 2 + out[o].boundary_sides) as i64;
        out[o].euler += link_vertices[o] - edges;
    }
    out
}

/// Per-vertex-orbit link types, in vertex orbit order.
pub fn classify_vertex_links(t: &Triangulation) -> Vec<LinkClass> {
    compute_skeleton(t).link_classes
}

/// Reports edge validity, link types and the overall manifold flags.
pub fn validate(t: &Triangulation) -> ValidityReport {
    let skel = compute_skeleton(t);
    let edge_valid: Vec<bool> = skel.edge_orbits.iter().map(|e| e.valid).collect();
    let connected = t.is_connected();
    let is_closed = skel.boundary_faces.is_empty();
    let links_ok = skel
        .link_classes
        .iter()
        .all(|c| matches!(c, LinkClass::Sphere | LinkClass::Disc));
    ValidityReport {
        is_3manifold: connected && edge_valid.iter().all(|&v| v) && links_ok,
        vertex_count: skel.vertex_orbits.len(),
        edge_count: skel.edge_orbits.len(),
        edge_valid,
        link_classes: skel.link_classes,
        connected,
        is_closed,
        is_bounded: !is_closed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{Perm4, ALL_PERMS};

    fn one_tet(gluings: &[(usize, [u8; 4])]) -> Triangulation {
        let mut t = Triangulation::new(1);
        for &(f, p) in gluings {
            t.join(0, f, 0, Perm4::from_images(p).unwrap()).unwrap();
        }
        t
    }

    #[test]
    fn free_tetrahedron_skeleton() {
        let t = Triangulation::new(1);
        let s = compute_skeleton(&t);
        assert_eq!(s.vertex_orbits.len(), 4);
        assert_eq!(s.edge_orbits.len(), 6);
        assert!(s.edge_orbits.iter().all(|e| e.valid && e.boundary));
        assert_eq!(s.link_classes, vec![LinkClass::Disc; 4]);
        let r = validate(&t);
        assert!(r.is_3manifold && r.is_bounded && !r.is_closed);
    }

    #[test]
    fn one_vertex_closed_tetrahedron() {
        // 012 -> 013 and 123 -> 230: the one-tetrahedron binomial triangulation.
        let t = one_tet(&[(3, [0, 1, 3, 2]), (0, [1, 2, 3, 0])]);
        let r = validate(&t);
        assert!(r.is_closed);
        assert_eq!(r.vertex_count, 1);
        assert_eq!(r.link_classes, vec![LinkClass::Sphere]);
        assert!(r.is_3manifold);
    }

    /// Independent edge-reversal detector: walk the face gluings as a graph on
    /// oriented tetrahedron edges and see whether (t, a->b) reaches (t, b->a).
    fn reversal_by_walk(t: &Triangulation) -> bool {
        let n = t.size();
        let id = |tet: usize, a: usize, b: usize| tet * 16 + a * 4 + b;
        let mut nodes = std::collections::HashMap::new();
        let mut node_list = Vec::new();
        for tet in 0..n {
            for a in 0..4 {
                for b in 0..4 {
                    if a != b {
                        nodes.insert(id(tet, a, b), node_list.len());
                        node_list.push((tet, a, b));
                    }
                }
            }
        }
        let mut graph: Vec<Vec<usize>> = vec![Vec::new(); node_list.len()];
        for tet in 0..n {
            for f in 0..4 {
                if let Some(g) = t.gluing(tet, f) {
                    for a in 0..4 {
                        for b in 0..4 {
                            if a != b && a != f && b != f {
                                let from = nodes[&id(tet, a, b)];
                                let to = nodes[&id(g.tet, g.perm.apply(a), g.perm.apply(b))];
                                graph[from].push(to);
                            }
                        }
                    }
                }
            }
        }
        for (start, &(tet, a, b)) in node_list.iter().enumerate() {
            let target = nodes[&id(tet, b, a)];
            let mut seen = vec![false; node_list.len()];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(x) = stack.pop() {
                if x == target {
                    return true;
                }
                for &y in &graph[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        false
    }

    #[test]
    fn brute_force_scan_finds_reversed_edges() {
        let mut reversed = 0;
        let mut fine = 0;
        for f in 0..4 {
            for &p in &ALL_PERMS {
                let g = p.apply(f);
                if g == f {
                    continue;
                }
                let mut t = Triangulation::new(1);
                t.join(0, f, 0, p).unwrap();
                let expect_reversed = reversal_by_walk(&t);
                let report = validate(&t);
                assert_eq!(!report.edges_valid(), expect_reversed, "{t:?}");
                if expect_reversed {
                    reversed += 1;
                } else {
                    fine += 1;
                }
            }
        }
        assert!(reversed > 0 && fine > 0);
    }

    #[test]
    fn edge_orbit_directions_are_consistent() {
        let t = one_tet(&[(0, [1, 2, 3, 0])]);
        let s = compute_skeleton(&t);
        // 12 ~ 23 ~ 30: edges 03 runs against 12.
        let o = s.edge_of(0, edge_index(1, 2));
        let orbit = &s.edge_orbits[o];
        assert_eq!(orbit.members.len(), 3);
        let dir = |e: usize| orbit.members.iter().find(|m| m.1 == e).unwrap().2;
        assert_eq!(dir(edge_index(1, 2)), dir(edge_index(2, 3)));
        assert_ne!(dir(edge_index(1, 2)), dir(edge_index(0, 3)));
    }
}
