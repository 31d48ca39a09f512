//! Normal coordinates in the 7n standard layout and the matching equations.
//!
//! Per tetrahedron the block is `(t0, t1, t2, t3 | q01, q02, q03)`: `tX`
//! counts triangles cutting off vertex `X`, `q0Y` counts quadrilaterals
//! separating edge `0Y` from its opposite edge.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

use crate::triangulation::{face_vertices, FaceRef, SkeletonData, Triangulation};

/// Coordinates per tetrahedron.
pub const BLOCK: usize = 7;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NormalError {
    #[error("expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0} is not a boundary face")]
    NotABoundaryFace(FaceRef),
    #[error("vertex {vertex} does not lie on face {face}")]
    NotOnFace { face: FaceRef, vertex: usize },
    #[error("cannot parse normal vector: {0}")]
    Parse(String),
}

/// Quadrilateral type (0, 1 or 2 for `q01`, `q02`, `q03`) of the quad that
/// separates edge `ab` from its opposite edge.
pub fn quad_type(a: usize, b: usize) -> usize {
    debug_assert!(a != b && a < 4 && b < 4);
    if a == 0 {
        b - 1
    } else if b == 0 {
        a - 1
    } else {
        // The partner of 0 is the vertex outside {0, a, b}.
        6 - a - b - 1
    }
}

/// Column of triangle `t_v` of `tet`.
#[inline]
pub fn tri_col(tet: usize, v: usize) -> usize {
    BLOCK * tet + v
}

/// Column of quadrilateral type `q` of `tet`.
#[inline]
pub fn quad_col(tet: usize, q: usize) -> usize {
    BLOCK * tet + 4 + q
}

/// A non-negative integer vector in standard coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalVector {
    entries: Vec<u64>,
}

impl NormalVector {
    pub fn new(entries: Vec<u64>) -> Result<Self, NormalError> {
        if entries.len() % BLOCK != 0 {
            return Err(NormalError::DimensionMismatch {
                expected: BLOCK * (entries.len() / BLOCK + 1),
                found: entries.len(),
            });
        }
        Ok(NormalVector { entries })
    }

    pub fn zero(n: usize) -> Self {
        NormalVector {
            entries: vec![0; BLOCK * n],
        }
    }

    /// Builds from per-tetrahedron blocks.
    pub fn from_blocks(blocks: &[[u64; BLOCK]]) -> Self {
        NormalVector {
            entries: blocks.iter().flatten().copied().collect(),
        }
    }

    pub fn tet_count(&self) -> usize {
        self.entries.len() / BLOCK
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn block(&self, tet: usize) -> &[u64] {
        &self.entries[BLOCK * tet..BLOCK * (tet + 1)]
    }

    pub fn triangles(&self, tet: usize, v: usize) -> u64 {
        self.entries[tri_col(tet, v)]
    }

    pub fn quads(&self, tet: usize, q: usize) -> u64 {
        self.entries[quad_col(tet, q)]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn max_entry(&self) -> u64 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().sum()
    }

    pub fn gcd(&self) -> u64 {
        self.entries.iter().fold(0, |g, &x| g.gcd(&x))
    }

    /// Indices of zero coordinates.
    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.entries[i] == 0).collect()
    }

    /// Quad type in use in `tet`, if exactly one is non-zero.
    pub fn quad_in(&self, tet: usize) -> Option<usize> {
        (0..3).find(|&q| self.quads(tet, q) != 0)
    }

    /// `true` if every tetrahedron has at most one non-zero quad type.
    pub fn satisfies_quad_constraints(&self) -> bool {
        (0..self.tet_count()).all(|tet| (0..3).filter(|&q| self.quads(tet, q) != 0).count() <= 1)
    }

    /// Coordinate-wise sum; `None` on dimension mismatch or overflow.
    pub fn checked_add(&self, other: &NormalVector) -> Option<NormalVector> {
        if self.len() != other.len() {
            return None;
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()?;
        Some(NormalVector { entries })
    }

    /// Number of normal arcs on face `face` of `tet` cutting off vertex `a`.
    pub fn arc_count(&self, tet: usize, face: usize, a: usize) -> u64 {
        debug_assert!(a != face);
        self.triangles(tet, a) + self.quads(tet, quad_type(a, face))
    }

    /// Number of points where the surface meets edge `ab` of `tet`.
    pub fn edge_weight(&self, tet: usize, a: usize, b: usize) -> u64 {
        // Quads separating ab from its opposite edge miss it; the other two types cross it.
        let missing = quad_type(a, b);
        let quads: u64 = (0..3).filter(|&q| q != missing).map(|q| self.quads(tet, q)).sum();
        self.triangles(tet, a) + self.triangles(tet, b) + quads
    }
}

/// The two vertices not in `{a, b}`, ascending.
pub fn other_pair(a: usize, b: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&v| v != a && v != b);
    (rest.next().unwrap(), rest.next().unwrap())
}

impl fmt::Display for NormalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for tet in 0..self.tet_count() {
            if tet > 0 {
                f.write_str(";")?;
            }
            let b = self.block(tet);
            write!(f, "{},{},{},{}|{},{},{}", b[0], b[1], b[2], b[3], b[4], b[5], b[6])?;
        }
        Ok(())
    }
}

impl fmt::Debug for NormalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NormalVector({self})")
    }
}

impl FromStr for NormalVector {
    type Err = NormalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut entries = Vec::new();
        for block in s.trim().split(';') {
            let (tris, quads) = block
                .split_once('|')
                .ok_or_else(|| NormalError::Parse(format!("missing `|` in `{block}`")))?;
            let parse = |part: &str, want: usize| -> Result<Vec<u64>, NormalError> {
                let vals = part
                    .split(',')
                    .map(|x| x.trim().parse::<u64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| NormalError::Parse(format!("`{block}`: {e}")))?;
                if vals.len() != want {
                    return Err(NormalError::Parse(format!(
                        "`{block}`: expected {want} values before/after `|`"
                    )));
                }
                Ok(vals)
            };
            entries.extend(parse(tris, 4)?);
            entries.extend(parse(quads, 3)?);
        }
        NormalVector::new(entries)
    }
}

/// Matching equations: one sparse integer row per (internal face, arc type).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingSystem {
    cols: usize,
    rows: Vec<Vec<(usize, i64)>>,
    /// The internal face (smaller side) and arc vertex of each row.
    labels: Vec<(FaceRef, usize)>,
}

impl MatchingSystem {
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, i64)>] {
        &self.rows
    }

    pub fn row_label(&self, row: usize) -> (FaceRef, usize) {
        self.labels[row]
    }

    pub fn dense(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![0; self.cols];
                for &(c, x) in row {
                    d[c] += x;
                }
                d
            })
            .collect()
    }

    /// `true` if `M v = 0`.
    pub fn annihilates(&self, v: &NormalVector) -> bool {
        v.len() == self.cols
            && self.rows.iter().all(|row| {
                row.iter()
                    .map(|&(c, x)| x as i128 * v.entries[c] as i128)
                    .sum::<i128>()
                    == 0
            })
    }
}

/// Builds the matching equations. Rows follow the internal faces in order of
/// their smaller `(tet, face)` side, then the arc vertex in increasing order.
/// The smaller side carries `+1`. Rows whose terms cancel (possible when a
/// tetrahedron is glued to itself) are kept as empty rows.
pub fn matching_matrix(t: &Triangulation) -> MatchingSystem {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (src, g) in t.internal_faces() {
        for a in face_vertices(src.face) {
            let b = g.perm.apply(a);
            let mut row: Vec<(usize, i64)> = Vec::with_capacity(4);
            let mut add = |col: usize, x: i64| match row.iter_mut().find(|(c, _)| *c == col) {
                Some(entry) => entry.1 += x,
                None => row.push((col, x)),
            };
            add(tri_col(src.tet, a), 1);
            add(quad_col(src.tet, quad_type(a, src.face)), 1);
            add(tri_col(g.tet, b), -1);
            add(quad_col(g.tet, quad_type(b, g.face)), -1);
            row.retain(|&(_, x)| x != 0);
            row.sort_unstable();
            rows.push(row);
            labels.push((src, a));
        }
    }
    MatchingSystem {
        cols: BLOCK * t.size(),
        rows,
        labels,
    }
}

fn check_dim(t: &Triangulation, v: &NormalVector) -> Result<(), NormalError> {
    let expected = BLOCK * t.size();
    if v.len() != expected {
        return Err(NormalError::DimensionMismatch {
            expected,
            found: v.len(),
        });
    }
    Ok(())
}

/// Arc-matching across every internal face, evaluated directly from the
/// gluings rather than from the matrix.
pub fn arcs_match(t: &Triangulation, v: &NormalVector) -> Result<bool, NormalError> {
    check_dim(t, v)?;
    for (src, g) in t.internal_faces() {
        for a in face_vertices(src.face) {
            if v.arc_count(src.tet, src.face, a) != v.arc_count(g.tet, g.face, g.perm.apply(a)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Non-negative (by type), satisfies the matching equations and the
/// quadrilateral constraints.
pub fn is_admissible(t: &Triangulation, v: &NormalVector) -> Result<bool, NormalError> {
    check_dim(t, v)?;
    Ok(v.satisfies_quad_constraints() && matching_matrix(t).annihilates(v))
}

/// Two admissible vectors are compatible if their sum is admissible, which
/// reduces to the quadrilateral constraints on the union of supports.
pub fn are_compatible(u: &NormalVector, v: &NormalVector) -> bool {
    u.len() == v.len()
        && (0..u.tet_count()).all(|tet| match (u.quad_in(tet), v.quad_in(tet)) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        })
}

/// Arc counts on a boundary face, ordered by the vertex each arc cuts off,
/// smallest vertex label first.
pub fn boundary_pattern(
    t: &Triangulation,
    v: &NormalVector,
    face: FaceRef,
) -> Result<[u64; 3], NormalError> {
    check_dim(t, v)?;
    if face.tet >= t.size() || face.face >= 4 || !t.is_boundary_face(face) {
        return Err(NormalError::NotABoundaryFace(face));
    }
    let verts = face_vertices(face.face);
    Ok(verts.map(|a| v.arc_count(face.tet, face.face, a)))
}

/// Coordinates of the link of vertex orbit `orbit`: one triangle per corner.
pub fn vertex_link_vector(t: &Triangulation, skel: &SkeletonData, orbit: usize) -> NormalVector {
    let mut v = NormalVector::zero(t.size());
    for &(tet, vertex) in &skel.vertex_orbits[orbit] {
        v.entries[tri_col(tet, vertex)] += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm4;
    use crate::triangulation::compute_skeleton;

    #[test]
    fn quad_types_pair_opposite_edges() {
        for a in 0..4 {
            for b in 0..4 {
                if a == b {
                    continue;
                }
                let (c, d) = other_pair(a, b);
                assert_eq!(quad_type(a, b), quad_type(b, a));
                assert_eq!(quad_type(a, b), quad_type(c, d));
            }
        }
        assert_eq!([quad_type(0, 1), quad_type(0, 2), quad_type(0, 3)], [0, 1, 2]);
    }

    /// Drawn by hand: on face 3 (vertices 012) the quad q01 (01|23) meets
    /// edges 02 and 12, so its arc cuts off vertex 2; q02 (02|13) cuts off 1;
    /// q03 (03|12) cuts off 0.
    #[test]
    fn quad_arcs_on_a_face() {
        let mut v = NormalVector::zero(1);
        v.entries[quad_col(0, 0)] = 1;
        assert_eq!([0, 1, 2].map(|a| v.arc_count(0, 3, a)), [0, 0, 1]);
        let mut v = NormalVector::zero(1);
        v.entries[quad_col(0, 1)] = 1;
        assert_eq!([0, 1, 2].map(|a| v.arc_count(0, 3, a)), [0, 1, 0]);
        let mut v = NormalVector::zero(1);
        v.entries[quad_col(0, 2)] = 1;
        assert_eq!([0, 1, 2].map(|a| v.arc_count(0, 3, a)), [1, 0, 0]);
        // t1 meets every face containing vertex 1.
        let mut v = NormalVector::zero(1);
        v.entries[tri_col(0, 1)] = 1;
        assert_eq!(v.arc_count(0, 3, 1), 1);
        assert_eq!(v.arc_count(0, 2, 1), 1);
        assert_eq!(v.arc_count(0, 0, 2), 0);
    }

    #[test]
    fn edge_weights_of_single_pieces() {
        let mut q = NormalVector::zero(1);
        q.entries[quad_col(0, 0)] = 1;
        // 01|23 misses edges 01 and 23.
        assert_eq!(q.edge_weight(0, 0, 1), 0);
        assert_eq!(q.edge_weight(0, 2, 3), 0);
        assert_eq!(q.edge_weight(0, 0, 2), 1);
        let mut tri = NormalVector::zero(1);
        tri.entries[tri_col(0, 2)] = 1;
        assert_eq!(tri.edge_weight(0, 0, 2), 1);
        assert_eq!(tri.edge_weight(0, 0, 1), 0);
    }

    #[test]
    fn text_round_trip() {
        let v: NormalVector = "0,1,1,0|0,0,0;0,1,0,0|0,1,0".parse().unwrap();
        assert_eq!(v.tet_count(), 2);
        assert_eq!(v.to_string(), "0,1,1,0|0,0,0;0,1,0,0|0,1,0");
        assert!("0,1,1|0,0,0".parse::<NormalVector>().is_err());
        assert!("0,1,1,0,0,0,0".parse::<NormalVector>().is_err());
    }

    fn a1() -> Triangulation {
        let mut t = Triangulation::new(1);
        t.join(0, 3, 0, Perm4::from_images([0, 1, 3, 2]).unwrap())
            .unwrap();
        t.join(0, 0, 0, Perm4::from_images([1, 2, 3, 0]).unwrap())
            .unwrap();
        t
    }

    #[test]
    fn row_counts() {
        assert_eq!(matching_matrix(&Triangulation::new(1)).row_count(), 0);
        let m = matching_matrix(&a1());
        assert_eq!(m.row_count(), 6);
        assert_eq!(m.cols(), 7);
    }

    #[test]
    fn matrix_agrees_with_direct_arc_matching() {
        let t = a1();
        let m = matching_matrix(&t);
        // Exhaustive over small vectors.
        let mut count = 0;
        for code in 0..3u64.pow(7) {
            let mut x = code;
            let entries: Vec<u64> = (0..7)
                .map(|_| {
                    let d = x % 3;
                    x /= 3;
                    d
                })
                .collect();
            let v = NormalVector::new(entries).unwrap();
            assert_eq!(m.annihilates(&v), arcs_match(&t, &v).unwrap(), "{v}");
            count += usize::from(m.annihilates(&v));
        }
        assert!(count > 1);
    }

    #[test]
    fn vertex_links_are_admissible() {
        let t = a1();
        let skel = compute_skeleton(&t);
        let link = vertex_link_vector(&t, &skel, 0);
        assert_eq!(link.entries(), &[1, 1, 1, 1, 0, 0, 0]);
        assert!(is_admissible(&t, &link).unwrap());
    }

    #[test]
    fn admissibility() {
        let t = Triangulation::new(1);
        assert!(is_admissible(&t, &NormalVector::zero(1)).unwrap());
        let two_quads = NormalVector::new(vec![0, 0, 0, 0, 1, 1, 0]).unwrap();
        assert!(!is_admissible(&t, &two_quads).unwrap());
        assert!(matches!(
            is_admissible(&t, &NormalVector::zero(2)),
            Err(NormalError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn boundary_pattern_errors() {
        let t = a1();
        let err = boundary_pattern(&t, &NormalVector::zero(1), FaceRef::new(0, 3)).unwrap_err();
        assert_eq!(err, NormalError::NotABoundaryFace(FaceRef::new(0, 3)));
        let free = Triangulation::new(1);
        assert_eq!(
            boundary_pattern(&free, &NormalVector::zero(1), FaceRef::new(0, 1)).unwrap(),
            [0, 0, 0]
        );
    }
}
