//! Rebuilding the surface carried by a normal vector and classifying it.
//!
//! Stacking conventions. Points on a tetrahedron edge `ab` (`a < b`) are
//! indexed from `a`. Copy `k` of triangle `t_v` meets each of its edges at
//! position `k` from `v`. Copy `k` of a quadrilateral is the `k`-th nearest to
//! the side of its pair containing vertex 0; on an edge from `x` (in that
//! pair) it sits at position `t_x + k` from `x`. An arc of a piece is indexed
//! by the position of its endpoints measured from the vertex it cuts off,
//! which is the order in which arcs are matched across a face.

use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::dsu::{DisjointSets, ParitySets, ParityUnion};
use crate::normal::{is_admissible, other_pair, quad_type, vertex_link_vector, NormalError, NormalVector};
use crate::triangulation::{compute_skeleton, edge_index, Triangulation, TET_EDGES};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TopologyError {
    #[error("vector is not an admissible normal surface")]
    NotAdmissible,
    #[error(transparent)]
    Normal(#[from] NormalError),
}

/// A normal piece type within one tetrahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Piece {
    /// Triangle cutting off the given vertex.
    Triangle(usize),
    /// Quadrilateral of type 0, 1 or 2 (`q01`, `q02`, `q03`).
    Quad(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub tet: usize,
    pub piece: Piece,
    pub copy: u64,
}

/// A side of a cell: the arc between corners `index` and `index + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SideRef {
    pub cell: usize,
    pub index: usize,
}

/// The surface as a 2-complex of normal pieces.
#[derive(Clone, Debug)]
pub struct SurfaceComplex {
    pub cells: Vec<Cell>,
    /// Corner class of each cell corner, in the cell's cyclic order.
    pub cell_corners: Vec<Vec<usize>>,
    pub corner_count: usize,
    /// Sides glued across internal faces; the flag is set when the two
    /// cells' cyclic orders run the same way along the shared arc.
    pub matched: Vec<(SideRef, SideRef, bool)>,
    pub boundary_sides: Vec<SideRef>,
}

impl SurfaceComplex {
    pub fn euler(&self) -> i64 {
        self.corner_count as i64 - (self.matched.len() + self.boundary_sides.len()) as i64
            + self.cells.len() as i64
    }

    /// Cell counts per standard coordinate.
    pub fn coordinate_counts(&self, n: usize) -> Vec<u64> {
        let mut out = vec![0u64; 7 * n];
        for c in &self.cells {
            let k = match c.piece {
                Piece::Triangle(v) => v,
                Piece::Quad(q) => 4 + q,
            };
            out[7 * c.tet + k] += 1;
        }
        out
    }
}

/// Position and vertex data for one corner: a point on tetrahedron edge
/// `(near, far)` at `pos` from `near`.
#[derive(Clone, Copy)]
struct CornerSpec {
    near: usize,
    far: usize,
    pos: u64,
}

/// Corner specs of a piece copy in cyclic order.
fn piece_corners(v: &NormalVector, tet: usize, piece: Piece, copy: u64) -> Vec<CornerSpec> {
    match piece {
        Piece::Triangle(apex) => (0..4)
            .filter(|&x| x != apex)
            .map(|x| CornerSpec {
                near: apex,
                far: x,
                pos: copy,
            })
            .collect(),
        Piece::Quad(q) => {
            // The pair containing 0 is {0, q + 1}.
            let (a, b) = (0, q + 1);
            let (c, d) = other_pair(a, b);
            let at = |x: usize, y: usize| CornerSpec {
                near: x,
                far: y,
                pos: v.triangles(tet, x) + copy,
            };
            vec![at(a, c), at(a, d), at(b, d), at(b, c)]
        }
    }
}

/// Identifier of the point on tetrahedron edge `(x, y)` at `pos` from `x`.
struct PointIndex {
    offsets: Vec<usize>,
    weights: Vec<u64>,
}

impl PointIndex {
    fn new(v: &NormalVector, n: usize) -> Self {
        let mut offsets = Vec::with_capacity(6 * n + 1);
        let mut weights = Vec::with_capacity(6 * n);
        let mut total = 0usize;
        for tet in 0..n {
            for &(a, b) in &TET_EDGES {
                let w = v.edge_weight(tet, a, b);
                offsets.push(total);
                weights.push(w);
                total += w as usize;
            }
        }
        offsets.push(total);
        PointIndex { offsets, weights }
    }

    fn total(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    fn id(&self, tet: usize, x: usize, y: usize, pos: u64) -> usize {
        let e = 6 * tet + edge_index(x, y);
        let from_low = if x < y { pos } else { self.weights[e] - 1 - pos };
        debug_assert!(from_low < self.weights[e]);
        self.offsets[e] + from_low as usize
    }
}

/// Rebuilds the surface of an admissible vector.
pub fn reconstruct_surface(t: &Triangulation, v: &NormalVector) -> Result<SurfaceComplex, TopologyError> {
    if !is_admissible(t, v)? {
        return Err(TopologyError::NotAdmissible);
    }
    let n = t.size();
    let points = PointIndex::new(v, n);

    let mut cells = Vec::new();
    let mut specs: Vec<Vec<CornerSpec>> = Vec::new();
    for tet in 0..n {
        let pieces = (0..4)
            .map(Piece::Triangle)
            .chain((0..3).map(Piece::Quad))
            .map(|p| {
                let count = match p {
                    Piece::Triangle(x) => v.triangles(tet, x),
                    Piece::Quad(q) => v.quads(tet, q),
                };
                (p, count)
            });
        for (piece, count) in pieces {
            for copy in 0..count {
                cells.push(Cell { tet, piece, copy });
                specs.push(piece_corners(v, tet, piece, copy));
            }
        }
    }

    // Side lookup: (tet, face, cut-off vertex, position) -> side.
    let side_key = |tet: usize, face: usize, cut: usize, pos: u64| (tet, face, cut, pos);
    let mut side_of = std::collections::HashMap::new();
    let mut point_ends: Vec<Vec<(usize, usize)>> = Vec::with_capacity(cells.len());
    for (ci, (cell, corners)) in cells.iter().zip(&specs).enumerate() {
        let k = corners.len();
        let mut ends = Vec::with_capacity(k);
        for i in 0..k {
            let (p, q) = (corners[i], corners[(i + 1) % k]);
            let p_id = points.id(cell.tet, p.near, p.far, p.pos);
            let q_id = points.id(cell.tet, q.near, q.far, q.pos);
            ends.push((p_id, q_id));
            let (cut, face, pos) = side_geometry(v, cell.tet, p, q);
            side_of.insert(side_key(cell.tet, face, cut, pos), SideRef { cell: ci, index: i });
        }
        point_ends.push(ends);
    }

    let mut corners = DisjointSets::new(points.total());
    let mut matched = Vec::new();
    let mut boundary_sides = Vec::new();
    for (ci, (cell, corner_specs)) in cells.iter().zip(&specs).enumerate() {
        let k = corner_specs.len();
        for i in 0..k {
            let (p, q) = (corner_specs[i], corner_specs[(i + 1) % k]);
            let (cut, face, pos) = side_geometry(v, cell.tet, p, q);
            let here = SideRef { cell: ci, index: i };
            match t.gluing(cell.tet, face) {
                None => boundary_sides.push(here),
                Some(g) => {
                    let m = |x: usize| g.perm.apply(x);
                    let p_image = points.id(g.tet, m(p.near), m(p.far), p.pos);
                    let q_image = points.id(g.tet, m(q.near), m(q.far), q.pos);
                    corners.union(point_ends[ci][i].0, p_image);
                    corners.union(point_ends[ci][i].1, q_image);
                    let there = *side_of
                        .get(&side_key(g.tet, g.face, m(cut), pos))
                        .expect("matching equations pair every arc");
                    if here < there {
                        let (r1, _) = point_ends[there.cell][there.index];
                        matched.push((here, there, p_image == r1));
                    }
                }
            }
        }
    }

    let labels = corners.min_labels();
    let mut class_of = vec![usize::MAX; labels.len()];
    let mut corner_count = 0;
    for &l in &labels {
        if class_of[l] == usize::MAX {
            class_of[l] = corner_count;
            corner_count += 1;
        }
    }
    let cell_corners = point_ends
        .iter()
        .map(|ends| ends.iter().map(|&(p, _)| class_of[labels[p]]).collect())
        .collect();
    Ok(SurfaceComplex {
        cells,
        cell_corners,
        corner_count,
        matched,
        boundary_sides,
    })
}

/// Cut-off vertex, face and stacking position of the arc joining two
/// consecutive corners of a piece in `tet`.
fn side_geometry(v: &NormalVector, tet: usize, p: CornerSpec, q: CornerSpec) -> (usize, usize, u64) {
    let cut = if p.near == q.near || p.near == q.far {
        p.near
    } else {
        p.far
    };
    let x = if p.near == cut { p.far } else { p.near };
    let y = if q.near == cut { q.far } else { q.near };
    let face = 6 - cut - x - y;
    let pos = if p.near == cut {
        p.pos
    } else {
        v.edge_weight(tet, p.near, p.far) - 1 - p.pos
    };
    (cut, face, pos)
}

/// Kind of a connected surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    Disc,
    Sphere,
    ProjectivePlane,
    Cylinder,
    MobiusStrip,
    OrientableGenus(u64),
    NonOrientableGenus(u64),
    Other,
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceKind::Disc => f.write_str("disc"),
            SurfaceKind::Sphere => f.write_str("sphere"),
            SurfaceKind::ProjectivePlane => f.write_str("projective-plane"),
            SurfaceKind::Cylinder => f.write_str("cylinder"),
            SurfaceKind::MobiusStrip => f.write_str("mobius-strip"),
            SurfaceKind::OrientableGenus(g) => write!(f, "orientable-genus-{g}"),
            SurfaceKind::NonOrientableGenus(k) => write!(f, "non-orientable-genus-{k}"),
            SurfaceKind::Other => f.write_str("other"),
        }
    }
}

fn kind_of(euler: i64, orientable: bool, boundary: usize) -> SurfaceKind {
    let b = boundary as i64;
    if orientable {
        let twice_genus = 2 - euler - b;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return SurfaceKind::Other;
        }
        match (twice_genus / 2, b) {
            (0, 0) => SurfaceKind::Sphere,
            (0, 1) => SurfaceKind::Disc,
            (0, 2) => SurfaceKind::Cylinder,
            (g, _) => SurfaceKind::OrientableGenus(g as u64),
        }
    } else {
        let crosscaps = 2 - euler - b;
        match (crosscaps, b) {
            (k, _) if k < 1 => SurfaceKind::Other,
            (1, 0) => SurfaceKind::ProjectivePlane,
            (1, 1) => SurfaceKind::MobiusStrip,
            (k, _) => SurfaceKind::NonOrientableGenus(k as u64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopologyClass {
    pub euler: i64,
    pub components: usize,
    /// Per component.
    pub orientable: Vec<bool>,
    /// Per component.
    pub boundary_curves: Vec<usize>,
    /// Per component.
    pub component_kinds: Vec<SurfaceKind>,
    /// The single component's kind, or `Other` if disconnected or empty.
    pub kind: SurfaceKind,
}

impl TopologyClass {
    pub fn is_disc(&self) -> bool {
        self.kind == SurfaceKind::Disc
    }

    pub fn is_orientable(&self) -> bool {
        self.orientable.iter().all(|&o| o)
    }

    pub fn total_boundary(&self) -> usize {
        self.boundary_curves.iter().sum()
    }

    /// Orientable genus or crosscap number of a connected surface.
    pub fn genus(&self) -> Option<u64> {
        if self.components != 1 {
            return None;
        }
        let b = self.boundary_curves[0] as i64;
        let deficit = 2 - self.euler - b;
        if self.orientable[0] {
            Some((deficit / 2) as u64)
        } else {
            Some(deficit as u64)
        }
    }

    /// Row of the classification export: `chi,components,orientable,boundary,kind`.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.euler,
            self.components,
            self.is_orientable(),
            self.total_boundary(),
            self.kind
        )
    }
}

pub const CLASSIFY_HEADER: &str = "chi,components,orientable,boundary,kind";

pub fn classify_surface(c: &SurfaceComplex) -> TopologyClass {
    let cells = c.cells.len();
    let mut comp = DisjointSets::new(cells);
    let mut orient = ParitySets::new(cells);
    let mut flips_contradict = Vec::new();
    for &(a, b, same_direction) in &c.matched {
        comp.union(a.cell, b.cell);
        if orient.union(a.cell, b.cell, same_direction) == ParityUnion::Contradiction {
            flips_contradict.push(a.cell);
        }
    }
    let labels = comp.min_labels();
    let mut comp_index = vec![usize::MAX; cells];
    let mut count = 0;
    for &l in &labels {
        if comp_index[l] == usize::MAX {
            comp_index[l] = count;
            count += 1;
        }
    }
    let comp_of = |cell: usize| comp_index[labels[cell]];

    let mut euler = vec![0i64; count];
    let mut orientable = vec![true; count];
    for cell in flips_contradict {
        orientable[comp_of(cell)] = false;
    }
    let mut corner_comp = vec![usize::MAX; c.corner_count];
    for (cell, corners) in c.cell_corners.iter().enumerate() {
        euler[comp_of(cell)] += 1;
        for &k in corners {
            corner_comp[k] = comp_of(cell);
        }
    }
    for &k in &corner_comp {
        euler[k] += 1;
    }
    for &(a, _, _) in &c.matched {
        euler[comp_of(a.cell)] -= 1;
    }
    // Boundary curves: components of the graph of boundary arcs on corners.
    let mut curves = DisjointSets::new(c.corner_count);
    for s in &c.boundary_sides {
        euler[comp_of(s.cell)] -= 1;
        let corners = &c.cell_corners[s.cell];
        curves.union(corners[s.index], corners[(s.index + 1) % corners.len()]);
    }
    let mut boundary = vec![0usize; count];
    let mut seen_root = vec![false; c.corner_count];
    for s in &c.boundary_sides {
        let k = c.cell_corners[s.cell][s.index];
        let r = curves.find(k);
        if !seen_root[r] {
            seen_root[r] = true;
            boundary[corner_comp[k]] += 1;
        }
    }
    let component_kinds: Vec<SurfaceKind> = (0..count)
        .map(|i| kind_of(euler[i], orientable[i], boundary[i]))
        .collect();
    TopologyClass {
        euler: euler.iter().sum(),
        components: count,
        kind: if count == 1 {
            component_kinds[0]
        } else {
            SurfaceKind::Other
        },
        orientable,
        boundary_curves: boundary,
        component_kinds,
    }
}

/// Reconstructs and classifies in one step.
pub fn classify_vector(t: &Triangulation, v: &NormalVector) -> Result<TopologyClass, TopologyError> {
    Ok(classify_surface(&reconstruct_surface(t, v)?))
}

/// Euler characteristic as a sum over pieces: each piece counts 1, minus
/// 1/2 per arc on an internal face and 1 per arc on a boundary face, plus
/// 1/d per corner on an edge of degree d. Needs no reconstruction.
pub fn euler_by_pieces(t: &Triangulation, v: &NormalVector) -> Ratio<i64> {
    let skel = compute_skeleton(t);
    let mut chi = Ratio::from_integer(0i64);
    for tet in 0..t.size() {
        let mut piece_value = |count: u64, sides: &[usize], edges: &[(usize, usize)]| {
            if count == 0 {
                return;
            }
            let mut x = Ratio::from_integer(1i64);
            for &f in sides {
                x -= if t.gluing(tet, f).is_some() {
                    Ratio::new(1, 2)
                } else {
                    Ratio::from_integer(1)
                };
            }
            for &(a, b) in edges {
                x += Ratio::new(1, skel.edge_degree(tet, edge_index(a, b)) as i64);
            }
            chi += x * Ratio::from_integer(count as i64);
        };
        for apex in 0..4 {
            let others: Vec<usize> = (0..4).filter(|&x| x != apex).collect();
            let edges: Vec<(usize, usize)> = others.iter().map(|&x| (apex, x)).collect();
            piece_value(v.triangles(tet, apex), &others, &edges);
        }
        for q in 0..3 {
            let (a, b) = (0, q + 1);
            let (c, d) = other_pair(a, b);
            debug_assert_eq!(quad_type(a, b), q);
            piece_value(v.quads(tet, q), &[0, 1, 2, 3], &[(a, c), (a, d), (b, c), (b, d)]);
        }
    }
    chi
}

/// `true` iff `v` is the link of some vertex of `t`.
pub fn is_vertex_linking(t: &Triangulation, v: &NormalVector) -> Result<bool, TopologyError> {
    if !is_admissible(t, v)? {
        return Err(TopologyError::NotAdmissible);
    }
    if (0..v.tet_count()).any(|tet| v.quad_in(tet).is_some()) {
        return Ok(false);
    }
    let skel = compute_skeleton(t);
    Ok((0..skel.vertex_orbits.len()).any(|o| vertex_link_vector(t, &skel, o) == *v))
}
