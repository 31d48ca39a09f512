//! Builders for the extremal families: binomial `A_n`, path `P_n`, Fibonacci
//! layered solid tori `B_n`, the 11-tetrahedron `G`, the 4-tetrahedron plug
//! `E`, the closed family `C_n = B_{n-4} + E`, and the tree-doubling step.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::enumeration::{enumerate_vertex_surfaces, EnumerationError};
use crate::perm::{Perm4, ALL_PERMS};
use crate::topology::{classify_vector, is_vertex_linking, SurfaceKind};
use crate::triangulation::{compute_skeleton, face_vertices, validate, FaceRef, Triangulation, TriangulationError};

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("{family} needs n >= {min}, got {n}")]
    ParameterOutOfRange { family: FamilyKind, n: usize, min: usize },
    #[error("{family} has a fixed size of {size} tetrahedra, got {n}")]
    FixedSize { family: FamilyKind, n: usize, size: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Binomial,
    Path,
    FibLst,
    G,
    E,
    ClosedC,
    TreeStep,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 7] = [
        FamilyKind::Binomial,
        FamilyKind::Path,
        FamilyKind::FibLst,
        FamilyKind::G,
        FamilyKind::E,
        FamilyKind::ClosedC,
        FamilyKind::TreeStep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Binomial => "binomial",
            FamilyKind::Path => "path",
            FamilyKind::FibLst => "lst-fib",
            FamilyKind::G => "g11",
            FamilyKind::E => "plug-e",
            FamilyKind::ClosedC => "closed-c",
            FamilyKind::TreeStep => "tree-step",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| FamilyError::UnknownFamily(s.to_string()))
    }
}

/// A family member. For `G` and `E`, `n` must equal the fixed size; for
/// `TreeStep`, `n` is the number of doubling steps applied to `G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n: usize,
}

pub fn build_family(spec: FamilySpec) -> Result<Triangulation, FamilyError> {
    let FamilySpec { kind, n } = spec;
    let at_least = |min: usize| {
        if n < min {
            Err(FamilyError::ParameterOutOfRange { family: kind, n, min })
        } else {
            Ok(())
        }
    };
    let fixed = |size: usize| {
        if n != size {
            Err(FamilyError::FixedSize { family: kind, n, size })
        } else {
            Ok(())
        }
    };
    match kind {
        FamilyKind::Binomial => at_least(1).map(|_| binomial(n)),
        FamilyKind::Path => at_least(1).map(|_| path(n)),
        FamilyKind::FibLst => at_least(1).map(|_| lst_fib(n)),
        FamilyKind::G => fixed(11).map(|_| g11()),
        FamilyKind::E => fixed(4).map(|_| plug_e()),
        FamilyKind::ClosedC => {
            at_least(5)?;
            Ok(closed_c(n))
        }
        FamilyKind::TreeStep => {
            let mut ctx = g_context();
            for _ in 0..n {
                ctx = tree_extend(&ctx)?;
            }
            Ok(ctx.triangulation)
        }
    }
}

fn perm(images: [u8; 4]) -> Perm4 {
    Perm4::from_images(images).expect("constant permutation")
}

/// `i(012) -> i(013)` and `i(123) -> (i+1)(230)`, indices mod n.
pub fn binomial(n: usize) -> Triangulation {
    let mut t = Triangulation::new(n);
    for i in 0..n {
        t.join(i, 3, i, perm([0, 1, 3, 2])).expect("binomial gluing");
        t.join(i, 0, (i + 1) % n, perm([1, 2, 3, 0])).expect("binomial gluing");
    }
    t
}

/// `i(012) -> (i+1)(013)`.
pub fn path(n: usize) -> Triangulation {
    let mut t = Triangulation::new(n);
    for i in 0..n.saturating_sub(1) {
        t.join(i, 3, i + 1, perm([0, 1, 3, 2])).expect("path gluing");
    }
    t
}

/// Layered solid torus with `n` tetrahedra, starting from the one-tetrahedron
/// LST(1,2,3) given by `0(123) -> 0(230)`. Each new tetrahedron is layered
/// on the two boundary faces `012`, `013` of the previous one by
/// `k(012) -> (k+1)(132)` and `k(013) -> (k+1)(203)`, which leaves the new
/// tetrahedron's `012` and `013` as the boundary.
pub fn lst_fib(n: usize) -> Triangulation {
    let mut t = Triangulation::new(n);
    t.join(0, 0, 0, perm([1, 2, 3, 0])).expect("base fold");
    for k in 0..n.saturating_sub(1) {
        t.join(k, 3, k + 1, perm([1, 3, 2, 0])).expect("layering");
        t.join(k, 2, k + 1, perm([2, 0, 1, 3])).expect("layering");
    }
    t
}

pub const G_TABLE: &str = "\
0: - 1(012) 2(021) -
1: 0(013) 3(012) 4(021) -
2: 0(032) 5(012) 6(021) -
3: 1(013) 7(231) 7(023) -
4: 1(032) 8(231) 8(023) -
5: 2(013) 9(231) 9(023) -
6: 2(032) 10(231) 10(023) -
7: - - 3(023) 3(301)
8: - - 4(023) 4(301)
9: - - 5(023) 5(301)
10: - - 6(023) 6(301)
";

pub const E_TABLE: &str = "\
0: 2(231) 1(230) 2(023) 1(123)
1: 3(012) 2(102) 0(301) 0(123)
2: 1(103) 3(230) 0(023) 0(201)
3: 1(012) - 2(301) -
";

pub fn g11() -> Triangulation {
    Triangulation::parse(G_TABLE).expect("constant table")
}

pub fn plug_e() -> Triangulation {
    Triangulation::parse(E_TABLE).expect("constant table")
}

/// Boundary faces of `E`: `3(013)` and `3(123)`.
pub const E_BOUNDARY: [FaceRef; 2] = [FaceRef { tet: 3, face: 2 }, FaceRef { tet: 3, face: 0 }];

/// Designated face `0(012)` of `G`, arc around vertex 0.
pub const G_FACE: FaceRef = FaceRef { tet: 0, face: 3 };
pub const G_ARC: usize = 0;
pub const G_ALPHA: u64 = 31_643;

/// `F_0 = 0`, `F_1 = F_2 = 1`.
pub fn fibonacci(k: usize) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..k {
        let next = a + b;
        a = b;
        b = next;
    }
    a
}

/// How the boundary of `B_{n-4}` is glued to the boundary of `E`: for the
/// last layered tetrahedron's faces `012` and `013` in turn, the `E`
/// boundary face index (into [`E_BOUNDARY`]) and the vertex map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosingMap {
    pub targets: [(usize, Perm4); 2],
}

/// Faces of the last `B` tetrahedron that stay on the boundary.
const B_BOUNDARY_FACES: [usize; 2] = [3, 2];

/// First result of [`search_closing_maps`], frozen: `012 -> 3(013)` by
/// `0->0, 1->3, 2->1` and `013 -> 3(123)` by `0->1, 1->2, 3->3`.
pub fn closing_map() -> ClosingMap {
    ClosingMap {
        targets: [(0, perm([0, 3, 1, 2])), (1, perm([1, 2, 0, 3]))],
    }
}

/// Every candidate boundary identification, in search order.
pub fn closing_map_candidates() -> Vec<ClosingMap> {
    let mut out = Vec::new();
    for first in 0..2 {
        let second = 1 - first;
        let fits = |b_face: usize, e: usize| {
            ALL_PERMS
                .iter()
                .copied()
                .filter(move |p| p.apply(b_face) == E_BOUNDARY[e].face)
        };
        for p in fits(B_BOUNDARY_FACES[0], first) {
            for q in fits(B_BOUNDARY_FACES[1], second) {
                out.push(ClosingMap {
                    targets: [(first, p), (second, q)],
                });
            }
        }
    }
    out
}

/// `B_{n-4}` followed by `E`, boundaries glued by `map`.
pub fn glue_closed(n: usize, map: ClosingMap) -> Result<Triangulation, TriangulationError> {
    let b = lst_fib(n - 4);
    let mut t = b.clone();
    let offset = t.insert_copy(&plug_e());
    let last = b.size() - 1;
    for (i, &(e, p)) in map.targets.iter().enumerate() {
        t.join(last, B_BOUNDARY_FACES[i], offset + E_BOUNDARY[e].tet, p)?;
    }
    Ok(t)
}

pub fn closed_c(n: usize) -> Triangulation {
    glue_closed(n, closing_map()).expect("frozen closing map")
}

/// The surface promised by the closed-family theorem: a projective plane
/// with maximum coordinate at least `F_{n-3}` when `n = 2 mod 3`, otherwise
/// a sphere that is not a vertex link with maximum coordinate at least
/// `2 F_{n-3}`. Returns its maximum coordinate, if present.
pub fn closed_c_witness(t: &Triangulation, n: usize) -> Result<Option<u64>, EnumerationError> {
    let set = enumerate_vertex_surfaces(t)?;
    let bound = if n % 3 == 2 {
        fibonacci(n - 3)
    } else {
        2 * fibonacci(n - 3)
    };
    let mut best: Option<u64> = None;
    for v in &set {
        if v.max_entry() < bound {
            continue;
        }
        let class = classify_vector(t, v)?;
        let ok = if n % 3 == 2 {
            class.kind == SurfaceKind::ProjectivePlane
        } else {
            class.kind == SurfaceKind::Sphere && !is_vertex_linking(t, v)?
        };
        if ok {
            best = Some(best.map_or(v.max_entry(), |b| b.max(v.max_entry())));
        }
    }
    Ok(best)
}

/// `true` if `map` yields closed, valid, one-vertex triangulations carrying
/// the theorem's surface for every `n` in `ns`.
pub fn closing_map_works(map: ClosingMap, ns: &[usize]) -> Result<bool, EnumerationError> {
    for &n in ns {
        let Ok(t) = glue_closed(n, map) else {
            return Ok(false);
        };
        let report = validate(&t);
        if !(report.is_3manifold && report.is_closed && report.vertex_count == 1) {
            return Ok(false);
        }
        if closed_c_witness(&t, n)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The candidates passing [`closing_map_works`] for `n = 5..=8`.
pub fn search_closing_maps() -> Result<Vec<ClosingMap>, EnumerationError> {
    let mut out = Vec::new();
    for map in closing_map_candidates() {
        if closing_map_works(map, &[5, 6, 7, 8])? {
            out.push(map);
        }
    }
    Ok(out)
}

/// State of the tree-doubling construction.
#[derive(Clone, Debug)]
pub struct TreeContext {
    pub triangulation: Triangulation,
    /// Boundary face of the root tetrahedron that the next step attaches.
    pub face: FaceRef,
    /// Vertex (of `face.tet`) that the designated arcs cut off.
    pub arc: usize,
    /// Lower bound on surfaces meeting `face` only in arcs of type `arc`.
    pub alpha: BigUint,
}

pub fn g_context() -> TreeContext {
    TreeContext {
        triangulation: g11(),
        face: G_FACE,
        arc: G_ARC,
        alpha: BigUint::from(G_ALPHA),
    }
}

fn check_tree_face(t: &Triangulation, face: FaceRef, arc: usize) -> Result<(), FamilyError> {
    if face.tet >= t.size() || face.face >= 4 || !t.is_boundary_face(face) {
        return Err(FamilyError::PreconditionViolated(format!("{face} is not a boundary face")));
    }
    if arc == face.face || arc >= 4 {
        return Err(FamilyError::PreconditionViolated(format!(
            "vertex {arc} does not lie on {face}"
        )));
    }
    let skel = compute_skeleton(t);
    let [a, b, c] = face_vertices(face.face).map(|v| skel.vertex_of(face.tet, v));
    if a == b && b == c {
        return Err(FamilyError::PreconditionViolated(format!(
            "all three vertices of {face} are identified"
        )));
    }
    Ok(())
}

/// One doubling step: two copies of the current triangulation are attached
/// along their designated faces to faces `012` and `013` of a new root
/// tetrahedron, which share the edge `01`; the designated arcs of both copies
/// sit next to root vertex 0. Of the four ways to place the remaining two
/// face vertices, the first (in lexicographic order) that gives a bounded
/// 3-manifold whose new face `023` is not fully identified is used. The new
/// designated face is `023` of the root with its arcs around vertex 0.
pub fn tree_extend(ctx: &TreeContext) -> Result<TreeContext, FamilyError> {
    let t = &ctx.triangulation;
    check_tree_face(t, ctx.face, ctx.arc)?;
    let n = t.size();
    let others: Vec<usize> = face_vertices(ctx.face.face)
        .into_iter()
        .filter(|&v| v != ctx.arc)
        .collect();
    let new_face = FaceRef::new(2 * n, 1);
    for swap1 in [false, true] {
        for swap2 in [false, true] {
            let mut g = t.clone();
            g.insert_copy(t);
            g.insert_copy(&Triangulation::new(1));
            let root = 2 * n;
            for (copy, root_face, far, swap) in [(0, 3, 2u8, swap1), (1, 2, 3u8, swap2)] {
                let (x, y) = if swap {
                    (others[1], others[0])
                } else {
                    (others[0], others[1])
                };
                let mut images = [0u8; 4];
                images[ctx.arc] = 0;
                images[x] = 1;
                images[y] = far;
                images[ctx.face.face] = root_face as u8;
                g.join(copy * n + ctx.face.tet, ctx.face.face, root, perm(images))?;
            }
            let report = validate(&g);
            if !(report.is_3manifold && report.is_bounded) {
                continue;
            }
            if check_tree_face(&g, new_face, 0).is_err() {
                continue;
            }
            return Ok(TreeContext {
                triangulation: g,
                face: new_face,
                arc: 0,
                alpha: &ctx.alpha * &ctx.alpha,
            });
        }
    }
    Err(FamilyError::PreconditionViolated(
        "no attachment gives a bounded 3-manifold".into(),
    ))
}
