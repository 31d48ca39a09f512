//! Vertex normal surfaces: minimal integer points on the extremal rays of
//! `{x >= 0, Mx = 0}` that satisfy the quadrilateral constraints.
//!
//! The main engine is the double description method with quad-compatibility
//! filtering. Adjacency is decided by the rank of the processed rows on the
//! union of the two supports, falling back to the combinatorial test if
//! that elimination overflows. Ray coordinates start in
//! `i64` with checked arithmetic; any overflow restarts the run in `BigInt`.
//! [`brute_force_vertex_surfaces`] is an independent oracle that scans
//! supports directly.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::normal::{boundary_pattern, matching_matrix, NormalError, NormalVector, BLOCK};
use crate::par::{map_collect, Exec};
use crate::topology::{classify_vector, TopologyError};
use crate::triangulation::{face_vertices, validate, FaceRef, Triangulation};

/// Largest dimension the brute-force oracle accepts.
pub const BRUTE_FORCE_MAX_DIM: usize = 28;

#[derive(Debug, Error)]
pub enum EnumerationError {
    #[error("not a valid 3-manifold triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("dimension {dim} exceeds the brute-force limit {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("a vertex surface coordinate does not fit in 64 bits")]
    CoordinateOverflow,
    #[error("enumeration invariant violated: {0}")]
    InvariantViolated(String),
    #[error(transparent)]
    Normal(#[from] NormalError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// Vertex normal surfaces of one triangulation, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSurfaceSet {
    pub n: usize,
    pub surfaces: Vec<NormalVector>,
}

impl VertexSurfaceSet {
    pub fn sigma(&self) -> usize {
        self.surfaces.len()
    }

    pub fn kappa(&self) -> u64 {
        self.surfaces.iter().map(NormalVector::max_entry).max().unwrap_or(0)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, NormalVector> {
        self.surfaces.iter()
    }

    /// Surfaces meeting boundary face `face` only in arcs cutting off vertex
    /// `arc`, and in at least one such arc.
    pub fn count_with_face_pattern(
        &self,
        t: &Triangulation,
        face: FaceRef,
        arc: usize,
    ) -> Result<usize, EnumerationError> {
        let slot = face_vertices(face.face)
            .iter()
            .position(|&v| v == arc)
            .ok_or(NormalError::NotOnFace { face, vertex: arc })?;
        let mut count = 0;
        for v in &self.surfaces {
            let p = boundary_pattern(t, v, face)?;
            if (0..3).all(|i| (p[i] > 0) == (i == slot)) {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Byte-stable export: header line then one vector per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={} sigma={} kappa={}\n", self.n, self.sigma(), self.kappa());
        for v in &self.surfaces {
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }
}

impl<'a> IntoIterator for &'a VertexSurfaceSet {
    type Item = &'a NormalVector;
    type IntoIter = std::slice::Iter<'a, NormalVector>;

    fn into_iter(self) -> Self::IntoIter {
        self.surfaces.iter()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ComplexityStats {
    pub sigma: usize,
    pub kappa: u64,
    pub sigma_discs: usize,
    pub kappa_discs: u64,
}

/// Counts every call to [`check_invariants`], so test suites can report
/// how many enumerations were checked.
static INVARIANT_CHECKS: AtomicUsize = AtomicUsize::new(0);

pub fn invariant_checks_performed() -> usize {
    INVARIANT_CHECKS.load(AtomicOrdering::Relaxed)
}

/// Zero-set uniqueness, `sigma <= 64^n`, primitive vectors, no zero vector.
pub fn check_invariants(set: &VertexSurfaceSet) -> Result<(), EnumerationError> {
    INVARIANT_CHECKS.fetch_add(1, AtomicOrdering::Relaxed);
    let bound = 64u64.checked_pow(set.n as u32);
    if let Some(b) = bound {
        if set.sigma() as u64 > b {
            return Err(EnumerationError::InvariantViolated(format!(
                "sigma = {} exceeds 64^{}",
                set.sigma(),
                set.n
            )));
        }
    }
    let mut zero_sets = HashSet::with_capacity(set.sigma());
    for v in &set.surfaces {
        if v.is_zero() {
            return Err(EnumerationError::InvariantViolated("zero vector reported".into()));
        }
        if v.gcd() != 1 {
            return Err(EnumerationError::InvariantViolated(format!("{v} is not primitive")));
        }
        if !zero_sets.insert(v.zero_set()) {
            return Err(EnumerationError::InvariantViolated(format!(
                "zero set of {v} is shared with another vertex surface"
            )));
        }
    }
    Ok(())
}

fn require_valid(t: &Triangulation) -> Result<(), EnumerationError> {
    let report = validate(t);
    if report.is_3manifold {
        return Ok(());
    }
    let reason = if !report.connected {
        "disconnected"
    } else if !report.edges_valid() {
        "an edge is identified with itself in reverse"
    } else {
        "a vertex link is neither a sphere nor a disc"
    };
    Err(EnumerationError::InvalidTriangulation(reason.into()))
}

pub fn enumerate_vertex_surfaces(t: &Triangulation) -> Result<VertexSurfaceSet, EnumerationError> {
    enumerate_vertex_surfaces_with(t, Exec::default())
}

/// As [`enumerate_vertex_surfaces`], choosing how the pair loop of each
/// double description step is evaluated. The result does not depend on `exec`.
pub fn enumerate_vertex_surfaces_with(
    t: &Triangulation,
    exec: Exec,
) -> Result<VertexSurfaceSet, EnumerationError> {
    require_valid(t)?;
    let rows = ordered_rows(t);
    let dim = BLOCK * t.size();
    let mut surfaces = match double_description::<i64>(dim, &rows, exec) {
        Some(rays) => to_vectors(rays)?,
        None => {
            let rays = double_description::<BigInt>(dim, &rows, exec)
                .expect("arbitrary precision cannot overflow");
            to_vectors(rays)?
        }
    };
    surfaces.sort();
    let set = VertexSurfaceSet {
        n: t.size(),
        surfaces,
    };
    check_invariants(&set)?;
    Ok(set)
}

fn to_vectors<C: RayInt>(rays: Vec<Vec<C>>) -> Result<Vec<NormalVector>, EnumerationError> {
    rays.into_iter()
        .map(|r| {
            let entries = r
                .iter()
                .map(|x| x.to_u64().ok_or(EnumerationError::CoordinateOverflow))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(NormalVector::new(entries)?)
        })
        .collect()
}

/// Non-trivial matching rows, ordered so that tetrahedra enter the cone
/// along a breadth-first traversal of the face pairing graph.
fn ordered_rows(t: &Triangulation) -> Vec<Vec<(usize, i64)>> {
    let n = t.size();
    let mut bfs_pos = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if bfs_pos[start] != usize::MAX {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        bfs_pos[start] = next;
        next += 1;
        while let Some(tet) = queue.pop_front() {
            for f in 0..4 {
                if let Some(g) = t.gluing(tet, f) {
                    if bfs_pos[g.tet] == usize::MAX {
                        bfs_pos[g.tet] = next;
                        next += 1;
                        queue.push_back(g.tet);
                    }
                }
            }
        }
    }
    let system = matching_matrix(t);
    let mut keyed: Vec<(usize, Vec<(usize, i64)>)> = (0..system.row_count())
        .filter(|&r| !system.rows()[r].is_empty())
        .map(|r| {
            let (src, _) = system.row_label(r);
            let other = t.gluing(src.tet, src.face).expect("row of an internal face").tet;
            (bfs_pos[src.tet].max(bfs_pos[other]), system.rows()[r].clone())
        })
        .collect();
    keyed.sort_by_key(|(k, _)| *k);
    keyed.into_iter().map(|(_, r)| r).collect()
}

/// Integer type for ray coordinates. Operations return `None` on overflow.
trait RayInt: Clone + Send + Sync + Sized {
    fn one() -> Self;
    fn zero() -> Self;
    fn dot(row: &[(usize, i64)], v: &[Self]) -> Option<Self>;
    fn sign(&self) -> Ordering;
    fn abs(&self) -> Self;
    /// `a x + b y` for positive `a`, `b`, divided by the gcd of its entries.
    fn combine(a: &Self, x: &[Self], b: &Self, y: &[Self]) -> Option<Vec<Self>>;
    fn to_u64(&self) -> Option<u64>;
}

impl RayInt for i64 {
    fn one() -> Self {
        1
    }

    fn zero() -> Self {
        0
    }

    fn dot(row: &[(usize, i64)], v: &[Self]) -> Option<Self> {
        row.iter()
            .try_fold(0i64, |acc, &(c, h)| acc.checked_add(h.checked_mul(v[c])?))
    }

    fn sign(&self) -> Ordering {
        self.cmp(&0)
    }

    fn abs(&self) -> Self {
        i64::abs(*self)
    }

    fn combine(a: &Self, x: &[Self], b: &Self, y: &[Self]) -> Option<Vec<Self>> {
        let mut out = Vec::with_capacity(x.len());
        let mut g = 0i64;
        for (xi, yi) in x.iter().zip(y) {
            let v = a.checked_mul(*xi)?.checked_add(b.checked_mul(*yi)?)?;
            g = g.gcd(&v);
            out.push(v);
        }
        if g > 1 {
            for v in &mut out {
                *v /= g;
            }
        }
        Some(out)
    }

    fn to_u64(&self) -> Option<u64> {
        u64::try_from(*self).ok()
    }
}

impl RayInt for BigInt {
    fn one() -> Self {
        BigInt::from(1)
    }

    fn zero() -> Self {
        BigInt::from(0)
    }

    fn dot(row: &[(usize, i64)], v: &[Self]) -> Option<Self> {
        Some(row.iter().map(|&(c, h)| BigInt::from(h) * &v[c]).sum())
    }

    fn sign(&self) -> Ordering {
        self.cmp(&BigInt::from(0))
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn combine(a: &Self, x: &[Self], b: &Self, y: &[Self]) -> Option<Vec<Self>> {
        let mut out: Vec<BigInt> = x.iter().zip(y).map(|(xi, yi)| a * xi + b * yi).collect();
        let g = out.iter().fold(BigInt::from(0), |g, v| g.gcd(v));
        if g > BigInt::from(1) {
            for v in &mut out {
                *v /= &g;
            }
        }
        Some(out)
    }

    fn to_u64(&self) -> Option<u64> {
        ToPrimitive::to_u64(self)
    }
}

/// Current extremal rays: coordinates, zero-set bitsets and the quad type in
/// use per tetrahedron (0 for none, else 1 + type).
struct RaySet<C> {
    words: usize,
    /// Words per quad mask, see [`quad_bit`].
    qwords: usize,
    coords: Vec<Vec<C>>,
    zeros: Vec<u64>,
    zero_counts: Vec<u32>,
    quads: Vec<u64>,
}

/// Quad masks hold 21 tetrahedra per word, three bits each.
const QUAD_TETS_PER_WORD: usize = 21;

fn quad_bit(tet: usize, q: usize) -> (usize, u32) {
    (tet / QUAD_TETS_PER_WORD, (3 * (tet % QUAD_TETS_PER_WORD) + q) as u32)
}

/// Non-zero iff some tetrahedron has two of its three quad bits set.
fn quad_conflicts(x: u64) -> u64 {
    const LOW: u64 = 0x1249249249249249;
    (x & (x >> 1) & (LOW | LOW << 1)) | (x & (x >> 2) & LOW)
}

struct NewRay<C> {
    coords: Vec<C>,
    zeros: Vec<u64>,
    quads: Vec<u64>,
}

impl<C: RayInt> RaySet<C> {
    fn units(dim: usize) -> Self {
        let words = dim.div_ceil(64).max(1);
        let tets = dim / BLOCK;
        let qwords = tets.div_ceil(QUAD_TETS_PER_WORD).max(1);
        let mut set = RaySet {
            words,
            qwords,
            coords: Vec::with_capacity(dim),
            zeros: Vec::with_capacity(dim * words),
            zero_counts: Vec::with_capacity(dim),
            quads: Vec::with_capacity(dim * qwords),
        };
        for i in 0..dim {
            let mut coords = vec![C::zero(); dim];
            coords[i] = C::one();
            let mut zeros = vec![0u64; words];
            for j in 0..dim {
                if j != i {
                    zeros[j / 64] |= 1 << (j % 64);
                }
            }
            let mut quads = vec![0u64; qwords];
            if i % BLOCK >= 4 {
                let (w, bit) = quad_bit(i / BLOCK, i % BLOCK - 4);
                quads[w] |= 1 << bit;
            }
            set.push(NewRay {
                coords,
                zeros,
                quads,
            });
        }
        set
    }

    fn empty_like(&self) -> Self {
        RaySet {
            words: self.words,
            qwords: self.qwords,
            coords: Vec::new(),
            zeros: Vec::new(),
            zero_counts: Vec::new(),
            quads: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.coords.len()
    }

    fn push(&mut self, ray: NewRay<C>) {
        self.zero_counts
            .push(ray.zeros.iter().map(|w| w.count_ones()).sum());
        self.coords.push(ray.coords);
        self.zeros.extend_from_slice(&ray.zeros);
        self.quads.extend_from_slice(&ray.quads);
    }

    fn take(&self, i: usize) -> NewRay<C> {
        NewRay {
            coords: self.coords[i].clone(),
            zeros: self.zeros_of(i).to_vec(),
            quads: self.quads_of(i).to_vec(),
        }
    }

    fn zeros_of(&self, i: usize) -> &[u64] {
        &self.zeros[i * self.words..(i + 1) * self.words]
    }

    fn quads_of(&self, i: usize) -> &[u64] {
        &self.quads[i * self.qwords..(i + 1) * self.qwords]
    }

    /// At most one quad type per tetrahedron in the union of supports.
    fn compatible(&self, p: usize, n: usize) -> bool {
        self.quads_of(p)
            .iter()
            .zip(self.quads_of(n))
            .all(|(&a, &b)| quad_conflicts(a | b) == 0)
    }

    /// No third ray's zero set contains `common`.
    fn adjacent(&self, p: usize, n: usize, common: &[u64], common_count: u32) -> bool {
        for r in 0..self.len() {
            if r == p || r == n || self.zero_counts[r] < common_count {
                continue;
            }
            let zr = self.zeros_of(r);
            if common.iter().zip(zr).all(|(c, z)| c & !z == 0) {
                return false;
            }
        }
        true
    }
}

/// Exact rank tracker for the rows inserted so far.
struct RowSpace {
    basis: Vec<(usize, Vec<BigInt>)>,
    dim: usize,
}

impl RowSpace {
    /// Adds `row`; returns `false` if it was already in the span.
    fn insert(&mut self, row: &[(usize, i64)]) -> bool {
        let mut v = vec![BigInt::from(0); self.dim];
        for &(c, x) in row {
            v[c] += x;
        }
        for (pivot, b) in &self.basis {
            if v[*pivot].is_zero() {
                continue;
            }
            let (bp, vp) = (b[*pivot].clone(), v[*pivot].clone());
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = &*vi * &bp - &vp * bi;
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                self.basis.push((p, v));
                true
            }
        }
    }
}

/// Returns the final ray coordinates, or `None` if `C` overflowed.
fn double_description<C: RayInt>(dim: usize, rows: &[Vec<(usize, i64)>], exec: Exec) -> Option<Vec<Vec<C>>> {
    double_description_by(dim, rows, exec, Adjacency::Rank)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Adjacency {
    Rank,
    /// Reference test against every other ray; kept for cross-checking.
    #[cfg_attr(not(test), allow(dead_code))]
    Combinatorial,
}

/// Processed rows as column bitmasks plus dense entries, for the rank test.
struct DoneRows {
    words: usize,
    masks: Vec<u64>,
    rows: Vec<Vec<(usize, i64)>>,
}

impl DoneRows {
    fn new(words: usize) -> Self {
        DoneRows {
            words,
            masks: Vec::new(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: &[(usize, i64)]) {
        let mut mask = vec![0u64; self.words];
        for &(c, _) in row {
            mask[c / 64] |= 1 << (c % 64);
        }
        self.masks.extend_from_slice(&mask);
        self.rows.push(row.to_vec());
    }

    fn mask(&self, i: usize) -> &[u64] {
        &self.masks[i * self.words..(i + 1) * self.words]
    }
}

/// Scratch space for [`adjacent_by_rank`], reused across pairs.
#[derive(Default)]
struct RankScratch {
    local: Vec<usize>,
    touching: Vec<usize>,
    m: Vec<i64>,
}

/// `p` and `n` span a 2-face of the cone cut out by `done` iff those rows,
/// restricted to the columns outside `common`, have rank `|S| - 2`.
/// `None` if the fraction-free elimination overflows.
fn adjacent_by_rank(done: &DoneRows, common: &[u64], dim: usize, scratch: &mut RankScratch) -> Option<bool> {
    let full = |w: usize| {
        if (w + 1) * 64 <= dim {
            !0u64
        } else {
            (1u64 << (dim - w * 64)) - 1
        }
    };
    let support: Vec<u64> = common.iter().enumerate().map(|(w, &c)| !c & full(w)).collect();
    let cols: usize = support.iter().map(|w| w.count_ones() as usize).sum();
    if cols < 2 {
        return Some(false);
    }
    let target = cols - 2;
    scratch.touching.clear();
    for i in 0..done.rows.len() {
        if done.mask(i).iter().zip(&support).any(|(a, b)| a & b != 0) {
            scratch.touching.push(i);
        }
    }
    if scratch.touching.len() < target {
        return Some(false);
    }
    scratch.local.resize(dim, usize::MAX);
    let mut k = 0;
    for (j, slot) in scratch.local.iter_mut().enumerate() {
        if support[j / 64] >> (j % 64) & 1 == 1 {
            *slot = k;
            k += 1;
        } else {
            *slot = usize::MAX;
        }
    }
    let rows = scratch.touching.len();
    scratch.m.clear();
    scratch.m.resize(rows * cols, 0);
    for (r, &i) in scratch.touching.iter().enumerate() {
        for &(c, x) in &done.rows[i] {
            let l = scratch.local[c];
            if l != usize::MAX {
                scratch.m[r * cols + l] += x;
            }
        }
    }
    let m = &mut scratch.m;
    let mut rank = 0;
    let mut prev = 1i64;
    for c in 0..cols {
        if rank == target {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if piv != rank {
            for j in 0..cols {
                m.swap(piv * cols + j, rank * cols + j);
            }
        }
        let a = m[rank * cols + c];
        for i in rank + 1..rows {
            let b = m[i * cols + c];
            for j in c + 1..cols {
                let v = m[i * cols + j].checked_mul(a)?.checked_sub(m[rank * cols + j].checked_mul(b)?)?;
                m[i * cols + j] = v / prev;
            }
            m[i * cols + c] = 0;
        }
        prev = a;
        rank += 1;
    }
    Some(rank == target)
}

fn double_description_by<C: RayInt>(
    dim: usize,
    rows: &[Vec<(usize, i64)>],
    exec: Exec,
    adjacency: Adjacency,
) -> Option<Vec<Vec<C>>> {
    let mut rays = RaySet::<C>::units(dim);
    let mut space = RowSpace {
        basis: Vec::new(),
        dim,
    };
    let mut done = DoneRows::new(dim.div_ceil(64).max(1));
    for row in rows {
        let old_rank = space.basis.len();
        if !space.insert(row) {
            continue;
        }
        let mut dots = Vec::with_capacity(rays.len());
        for coords in &rays.coords {
            dots.push(C::dot(row, coords)?);
        }
        let mut next = rays.empty_like();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (i, d) in dots.iter().enumerate() {
            match d.sign() {
                Ordering::Equal => next.push(rays.take(i)),
                Ordering::Greater => pos.push(i),
                Ordering::Less => neg.push(i),
            }
        }
        // Adjacent rays of the old cone share at least this many zeros.
        let min_common = (dim - old_rank).saturating_sub(2) as u32;
        let rays_ref = &rays;
        let dots_ref = &dots;
        let neg_ref = &neg;
        let done_ref = &done;
        let produced: Vec<Option<Vec<NewRay<C>>>> = map_collect(exec, &pos, |&p| {
            let mut out = Vec::new();
            let mut common = vec![0u64; rays_ref.words];
            let mut scratch = RankScratch::default();
            for &n in neg_ref {
                if !rays_ref.compatible(p, n) {
                    continue;
                }
                let mut count = 0;
                for (w, (a, b)) in common
                    .iter_mut()
                    .zip(rays_ref.zeros_of(p).iter().zip(rays_ref.zeros_of(n)))
                {
                    *w = a & b;
                    count += w.count_ones();
                }
                if count < min_common {
                    continue;
                }
                let by_rank = match adjacency {
                    Adjacency::Rank => adjacent_by_rank(done_ref, &common, dim, &mut scratch),
                    Adjacency::Combinatorial => None,
                };
                if !by_rank.unwrap_or_else(|| rays_ref.adjacent(p, n, &common, count)) {
                    continue;
                }
                let coords = C::combine(
                    &dots_ref[p],
                    &rays_ref.coords[n],
                    &dots_ref[n].abs(),
                    &rays_ref.coords[p],
                )?;
                let quads = rays_ref
                    .quads_of(p)
                    .iter()
                    .zip(rays_ref.quads_of(n))
                    .map(|(&a, &b)| a | b)
                    .collect();
                out.push(NewRay {
                    coords,
                    zeros: common.clone(),
                    quads,
                });
            }
            Some(out)
        });
        for batch in produced {
            for ray in batch? {
                next.push(ray);
            }
        }
        rays = next;
        done.push(row);
    }
    Some(rays.coords)
}

/// Independent oracle: every quad-admissible support whose restricted
/// matching system has a one-dimensional kernel spanned by a strictly
/// positive vector gives exactly one vertex surface.
pub fn brute_force_vertex_surfaces(t: &Triangulation) -> Result<VertexSurfaceSet, EnumerationError> {
    let dim = BLOCK * t.size();
    if dim > BRUTE_FORCE_MAX_DIM {
        return Err(EnumerationError::TooLarge {
            dim,
            limit: BRUTE_FORCE_MAX_DIM,
        });
    }
    let matrix = matching_matrix(t).dense();
    let n = t.size();
    let mut surfaces = Vec::new();
    // 16 triangle subsets x (no quad or one of three) per tetrahedron.
    let total = 64usize.pow(n as u32);
    for code in 1..total {
        let mut support = Vec::new();
        let mut c = code;
        for tet in 0..n {
            let choice = c % 64;
            c /= 64;
            let (tris, quad) = (choice % 16, choice / 16);
            for v in 0..4 {
                if tris & (1 << v) != 0 {
                    support.push(BLOCK * tet + v);
                }
            }
            if quad > 0 {
                support.push(BLOCK * tet + 3 + quad);
            }
        }
        if support.is_empty() {
            continue;
        }
        if let Some(kernel) = positive_kernel_ray(&matrix, &support) {
            let mut entries = vec![0u64; dim];
            for (&col, &x) in support.iter().zip(&kernel) {
                entries[col] = x;
            }
            surfaces.push(NormalVector::new(entries)?);
        }
    }
    surfaces.sort();
    let set = VertexSurfaceSet { n, surfaces };
    check_invariants(&set)?;
    Ok(set)
}

/// If the columns `support` of `matrix` have a one-dimensional kernel
/// spanned by a vector with all entries positive, returns its primitive form.
fn positive_kernel_ray(matrix: &[Vec<i64>], support: &[usize]) -> Option<Vec<u64>> {
    let k = support.len();
    let mut rows: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| support.iter().map(|&c| r[c] as i128).collect::<Vec<_>>())
        .filter(|r: &Vec<i128>| r.iter().any(|&x| x != 0))
        .collect();
    // Integer Gauss-Jordan elimination with gcd normalisation.
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(found) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let pivot_row = rows[r].clone();
        let a = pivot_row[col];
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let b = row[col];
            let mut g = 0i128;
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                *x = a * *x - b * p;
                g = g.gcd(x);
            }
            if g > 1 {
                for x in row.iter_mut() {
                    *x /= g;
                }
            }
        }
        pivots.push((r, col));
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if pivots.len() + 1 != k {
        return None;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free = (0..k).find(|c| !pivot_cols.contains(c))?;
    // a_j x_{c_j} + e_j x_free = 0 for each pivot row j.
    let scale = pivots
        .iter()
        .fold(1i128, |l, &(row, col)| l.lcm(&rows[row][col].abs()));
    let mut x = vec![0i128; k];
    x[free] = scale;
    for &(row, col) in &pivots {
        x[col] = -rows[row][free] * scale / rows[row][col];
    }
    let sign = x[free].signum();
    if x.iter().any(|&v| v.signum() != sign) {
        return None;
    }
    let g = x.iter().fold(0i128, |g, v| g.gcd(v));
    Some(x.iter().map(|&v| (v.abs() / g) as u64).collect())
}

/// sigma and kappa, overall and restricted to surfaces classified as discs.
pub fn complexity_stats(t: &Triangulation) -> Result<ComplexityStats, EnumerationError> {
    let set = enumerate_vertex_surfaces(t)?;
    stats_of(t, &set)
}

pub fn stats_of(t: &Triangulation, set: &VertexSurfaceSet) -> Result<ComplexityStats, EnumerationError> {
    let mut stats = ComplexityStats {
        sigma: set.sigma(),
        kappa: set.kappa(),
        ..ComplexityStats::default()
    };
    if t.is_closed() {
        // Closed triangulations carry no discs.
        return Ok(stats);
    }
    for v in set {
        if classify_vector(t, v)?.is_disc() {
            stats.sigma_discs += 1;
            stats.kappa_discs = stats.kappa_discs.max(v.max_entry());
        }
    }
    Ok(stats)
}

/// Enumerates and counts surfaces with the given pattern on a boundary face.
pub fn count_with_face_pattern(
    t: &Triangulation,
    face: FaceRef,
    arc: usize,
) -> Result<usize, EnumerationError> {
    if face.tet >= t.size() || face.face >= 4 || !t.is_boundary_face(face) {
        return Err(NormalError::NotABoundaryFace(face).into());
    }
    enumerate_vertex_surfaces(t)?.count_with_face_pattern(t, face, arc)
}
