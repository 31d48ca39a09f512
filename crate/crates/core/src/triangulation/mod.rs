//! Generalised triangulations: tetrahedra with faces glued in pairs.
//!
//! Tetrahedron faces are indexed by their opposite vertex, so face `f` of a
//! tetrahedron consists of the three vertices other than `f`. A gluing stores
//! the full vertex permutation, which carries the opposite vertex of the
//! source face to the opposite vertex of the target face.

mod pairing;
mod signature;
mod skeleton;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::Perm4;

pub use pairing::FacePairingGraph;
pub use signature::{canonical_signature, parse_signature};
pub use skeleton::{
    classify_vertex_links, compute_skeleton, validate, EdgeOrbit, LinkClass, SkeletonData,
    ValidityReport,
};

/// Faces in the column order of the gluing-table text format:
/// `i(012)`, `i(013)`, `i(023)`, `i(123)`.
pub const FACE_COLUMNS: [usize; 4] = [3, 2, 1, 0];

/// The six edges of a tetrahedron as vertex pairs, lower vertex first.
pub const TET_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index into [`TET_EDGES`] of the edge joining `a` and `b`.
pub fn edge_index(a: usize, b: usize) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    match (lo, hi) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("no tetrahedron edge joins {a} and {b}"),
    }
}

/// The three vertices of face `face` in increasing order.
pub fn face_vertices(face: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut i = 0;
    for v in 0..4 {
        if v != face {
            out[i] = v;
            i += 1;
        }
    }
    out
}

/// A (tetrahedron, face) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceRef {
    pub tet: usize,
    pub face: usize,
}

impl FaceRef {
    pub fn new(tet: usize, face: usize) -> Self {
        FaceRef { tet, face }
    }
}

impl fmt::Display for FaceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = face_vertices(self.face);
        write!(f, "{}({}{}{})", self.tet, a, b, c)
    }
}

/// The partner of a glued face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FaceGluing {
    pub tet: usize,
    pub face: usize,
    /// Carries the vertices of the source tetrahedron to those of `tet`.
    pub perm: Perm4,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("inconsistent gluing at {face}: {message}")]
    InconsistentGluing { face: FaceRef, message: String },
    #[error("face {0} is glued to itself")]
    SelfGluedFace(FaceRef),
    #[error("tetrahedron index {0} out of range")]
    TetOutOfRange(usize),
}

/// A generalised triangulation. Immutable once built; use
/// [`Triangulation::join`] while constructing.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Triangulation {
    gluings: Vec<[Option<FaceGluing>; 4]>,
}

impl Triangulation {
    /// `n` free tetrahedra.
    pub fn new(n: usize) -> Self {
        Triangulation {
            gluings: vec![[None; 4]; n],
        }
    }

    pub fn size(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Option<FaceGluing> {
        self.gluings[tet][face]
    }

    /// Glues face `face` of `tet` to face `perm(face)` of `other`, setting
    /// both directions.
    pub fn join(
        &mut self,
        tet: usize,
        face: usize,
        other: usize,
        perm: Perm4,
    ) -> Result<(), TriangulationError> {
        let n = self.size();
        for t in [tet, other] {
            if t >= n {
                return Err(TriangulationError::TetOutOfRange(t));
            }
        }
        let target = perm.apply(face);
        let src = FaceRef::new(tet, face);
        if tet == other && target == face {
            return Err(TriangulationError::SelfGluedFace(src));
        }
        let want = FaceGluing {
            tet: other,
            face: target,
            perm,
        };
        let back = FaceGluing {
            tet,
            face,
            perm: perm.inverse(),
        };
        match (self.gluings[tet][face], self.gluings[other][target]) {
            (None, None) => {}
            (Some(a), Some(b)) if a == want && b == back => return Ok(()),
            (existing, _) => {
                return Err(TriangulationError::InconsistentGluing {
                    face: src,
                    message: match existing {
                        Some(g) => format!(
                            "already glued to {}",
                            FaceRef::new(g.tet, g.face)
                        ),
                        None => format!(
                            "partner {} is already glued elsewhere",
                            FaceRef::new(other, target)
                        ),
                    },
                })
            }
        }
        self.gluings[tet][face] = Some(want);
        self.gluings[other][target] = Some(back);
        Ok(())
    }

    /// Removes the gluing on a face (and its partner). No-op on boundary faces.
    pub fn unjoin(&mut self, tet: usize, face: usize) {
        if let Some(g) = self.gluings[tet][face].take() {
            self.gluings[g.tet][g.face] = None;
        }
    }

    /// Disjoint union: `other`'s tetrahedra follow this triangulation's.
    pub fn insert_copy(&mut self, other: &Triangulation) -> usize {
        let offset = self.size();
        for row in &other.gluings {
            let mut shifted = *row;
            for g in shifted.iter_mut().flatten() {
                g.tet += offset;
            }
            self.gluings.push(shifted);
        }
        offset
    }

    pub fn boundary_faces(&self) -> Vec<FaceRef> {
        let mut out = Vec::new();
        for (t, row) in self.gluings.iter().enumerate() {
            for f in 0..4 {
                if row[f].is_none() {
                    out.push(FaceRef::new(t, f));
                }
            }
        }
        out
    }

    pub fn is_boundary_face(&self, face: FaceRef) -> bool {
        self.gluings[face.tet][face.face].is_none()
    }

    pub fn is_closed(&self) -> bool {
        self.gluings.iter().all(|row| row.iter().all(Option::is_some))
    }

    /// Number of glued face pairs.
    pub fn internal_face_count(&self) -> usize {
        let glued: usize = self
            .gluings
            .iter()
            .map(|row| row.iter().filter(|g| g.is_some()).count())
            .sum();
        glued / 2
    }

    /// Glued face pairs, each listed once from its smaller (tet, face) side.
    pub fn internal_faces(&self) -> Vec<(FaceRef, FaceGluing)> {
        let mut out = Vec::new();
        for (t, row) in self.gluings.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                if let Some(g) = g {
                    if (t, f) < (g.tet, g.face) {
                        out.push((FaceRef::new(t, f), *g));
                    }
                }
            }
        }
        out
    }

    /// `true` if every tetrahedron is reachable from tetrahedron 0.
    pub fn is_connected(&self) -> bool {
        let n = self.size();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for g in self.gluings[t].iter().flatten() {
                if !seen[g.tet] {
                    seen[g.tet] = true;
                    stack.push(g.tet);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Checks the involution and no-self-gluing invariants.
    pub fn check_involution(&self) -> Result<(), TriangulationError> {
        for (t, row) in self.gluings.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                let Some(g) = g else { continue };
                let src = FaceRef::new(t, f);
                if g.tet >= self.size() {
                    return Err(TriangulationError::TetOutOfRange(g.tet));
                }
                if g.perm.apply(f) != g.face {
                    return Err(TriangulationError::InconsistentGluing {
                        face: src,
                        message: "vertex map does not carry the face onto its partner".into(),
                    });
                }
                if g.tet == t && g.face == f {
                    return Err(TriangulationError::SelfGluedFace(src));
                }
                let back = self.gluings[g.tet][g.face];
                let expected = FaceGluing {
                    tet: t,
                    face: f,
                    perm: g.perm.inverse(),
                };
                if back != Some(expected) {
                    return Err(TriangulationError::InconsistentGluing {
                        face: src,
                        message: "partner does not glue back".into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Relabels tetrahedra (`tet_map[old] = new`) and the vertices of each
    /// tetrahedron (`vertex_maps[old]` carries old labels to new ones).
    pub fn relabel(&self, tet_map: &[usize], vertex_maps: &[Perm4]) -> Triangulation {
        let n = self.size();
        let mut out = Triangulation::new(n);
        for t in 0..n {
            for f in 0..4 {
                if let Some(g) = self.gluings[t][f] {
                    let nt = tet_map[t];
                    let nf = vertex_maps[t].apply(f);
                    let perm = vertex_maps[g.tet]
                        .compose(g.perm)
                        .compose(vertex_maps[t].inverse());
                    out.gluings[nt][nf] = Some(FaceGluing {
                        tet: tet_map[g.tet],
                        face: perm.apply(nf),
                        perm,
                    });
                }
            }
        }
        out
    }

    /// Renders the gluing-table text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (t, row) in self.gluings.iter().enumerate() {
            out.push_str(&format!("{t}:"));
            for &f in &FACE_COLUMNS {
                out.push(' ');
                match row[f] {
                    None => out.push('-'),
                    Some(g) => {
                        let [a, b, c] = face_vertices(f);
                        out.push_str(&format!(
                            "{}({}{}{})",
                            g.tet,
                            g.perm.apply(a),
                            g.perm.apply(b),
                            g.perm.apply(c)
                        ));
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    /// Parses the gluing-table text format. Gluings listed on only one side
    /// are completed; contradictory partners are rejected.
    pub fn parse(text: &str) -> Result<Triangulation, TriangulationError> {
        let mut rows: Vec<(usize, usize, [Option<(usize, [usize; 3])>; 4])> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            let syntax = |message: String| TriangulationError::Syntax {
                line: lineno,
                message,
            };
            let (head, rest) = line
                .split_once(':')
                .ok_or_else(|| syntax("expected `i: A B C D`".into()))?;
            let tet: usize = head
                .trim()
                .parse()
                .map_err(|_| syntax(format!("bad tetrahedron index `{}`", head.trim())))?;
            let cells: Vec<&str> = rest.split_whitespace().collect();
            if cells.len() != 4 {
                return Err(syntax(format!("expected 4 face entries, found {}", cells.len())));
            }
            let mut entries = [None; 4];
            for (col, cell) in cells.iter().enumerate() {
                entries[col] = parse_cell(cell).map_err(syntax)?;
            }
            rows.push((lineno, tet, entries));
        }
        if rows.is_empty() {
            return Err(TriangulationError::Syntax {
                line: 0,
                message: "no tetrahedra".into(),
            });
        }
        let n = rows.len();
        let mut seen = vec![false; n];
        for &(lineno, tet, _) in &rows {
            if tet >= n || seen[tet] {
                return Err(TriangulationError::Syntax {
                    line: lineno,
                    message: format!("tetrahedron {tet} is missing, repeated or out of range"),
                });
            }
            seen[tet] = true;
        }

        let mut tri = Triangulation::new(n);
        let mut listed: Vec<[Option<FaceGluing>; 4]> = vec![[None; 4]; n];
        for &(lineno, tet, entries) in &rows {
            for (col, entry) in entries.iter().enumerate() {
                let Some((other, images)) = *entry else { continue };
                if other >= n {
                    return Err(TriangulationError::Syntax {
                        line: lineno,
                        message: format!("tetrahedron {other} out of range"),
                    });
                }
                let face = FACE_COLUMNS[col];
                let src = face_vertices(face);
                let mut map = [0u8; 4];
                let mut used = [false; 4];
                for i in 0..3 {
                    map[src[i]] = images[i] as u8;
                    used[images[i]] = true;
                }
                let target = (0..4).find(|&v| !used[v]).expect("three distinct images");
                map[face] = target as u8;
                let perm = Perm4::from_images(map).ok_or_else(|| TriangulationError::Syntax {
                    line: lineno,
                    message: "vertex images are not distinct".into(),
                })?;
                if other == tet && target == face {
                    return Err(TriangulationError::SelfGluedFace(FaceRef::new(tet, face)));
                }
                listed[tet][face] = Some(FaceGluing {
                    tet: other,
                    face: target,
                    perm,
                });
            }
        }
        for t in 0..n {
            for f in 0..4 {
                let Some(g) = listed[t][f] else { continue };
                if let Some(back) = listed[g.tet][g.face] {
                    if back.tet != t || back.face != f || back.perm != g.perm.inverse() {
                        return Err(TriangulationError::InconsistentGluing {
                            face: FaceRef::new(t, f),
                            message: format!(
                                "partner {} lists a different gluing",
                                FaceRef::new(g.tet, g.face)
                            ),
                        });
                    }
                }
                tri.join(t, f, g.tet, g.perm)?;
            }
        }
        Ok(tri)
    }
}

fn parse_cell(cell: &str) -> Result<Option<(usize, [usize; 3])>, String> {
    if cell == "-" {
        return Ok(None);
    }
    let open = cell
        .find('(')
        .ok_or_else(|| format!("bad face entry `{cell}`"))?;
    if !cell.ends_with(')') {
        return Err(format!("bad face entry `{cell}`"));
    }
    let tet: usize = cell[..open]
        .parse()
        .map_err(|_| format!("bad tetrahedron in `{cell}`"))?;
    let digits: Vec<usize> = cell[open + 1..cell.len() - 1]
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as usize))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| format!("bad vertices in `{cell}`"))?;
    if digits.len() != 3 || digits.iter().any(|&d| d > 3) {
        return Err(format!("expected three vertex labels in `{cell}`"));
    }
    if digits[0] == digits[1] || digits[0] == digits[2] || digits[1] == digits[2] {
        return Err(format!("repeated vertex in `{cell}`"));
    }
    Ok(Some((tet, [digits[0], digits[1], digits[2]])))
}

impl FromStr for Triangulation {
    type Err = TriangulationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Triangulation::parse(s)
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Triangulation(\n{})", self.to_text())
    }
}
