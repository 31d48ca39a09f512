//! Exhaustive census of closed and bounded 3-manifold triangulations, and
//! the sigma/kappa aggregates over it.
//!
//! Generation runs per face pairing graph: for each connected multigraph of
//! the right shape, every assignment of gluing permutations to its arcs is
//! searched, partial assignments that identify an edge with itself in
//! reverse are cut, and survivors are deduplicated by canonical signature.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Mutex;

use num_rational::Ratio;
use thiserror::Error;

use crate::dsu::{ParityUnion, ParitySets};
use crate::enumeration::{complexity_stats, ComplexityStats, EnumerationError};
use crate::par::{map_collect, with_jobs, Exec};
use crate::perm::{Perm4, ALL_PERMS};
use crate::triangulation::{
    canonical_signature, edge_index, face_vertices, validate, FacePairingGraph, Triangulation, FACE_COLUMNS,
};

/// Largest `n` accepted without [`CensusOptions::allow_large`].
pub const DEFAULT_MAX_N: usize = 4;

pub const CSV_HEADER: &str = "n,kind,one_vertex,discs_only,count,sigma_max,sigma_avg,kappa_max,kappa_avg";

const JOURNAL_MAGIC: &str = "normsurf-census";

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("n must be at least 1")]
    EmptyCensus,
    #[error("n = {n} exceeds the configured ceiling {limit}; pass the override to run it anyway")]
    TooLarge { n: usize, limit: usize },
    #[error("journal {path}: {message}")]
    Journal { path: PathBuf, message: String },
    #[error("unknown census kind `{0}`")]
    UnknownKind(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CensusKind {
    Closed,
    Bounded,
}

impl CensusKind {
    pub fn name(self) -> &'static str {
        match self {
            CensusKind::Closed => "closed",
            CensusKind::Bounded => "bounded",
        }
    }
}

impl fmt::Display for CensusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CensusKind {
    type Err = CensusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "closed" => Ok(CensusKind::Closed),
            "bounded" => Ok(CensusKind::Bounded),
            _ => Err(CensusError::UnknownKind(s.to_string())),
        }
    }
}

/// `one_vertex` and `discs_only` only affect the statistics, not which
/// triangulations are generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusQuery {
    pub n: usize,
    pub kind: CensusKind,
    pub one_vertex: bool,
    pub discs_only: bool,
}

impl CensusQuery {
    pub fn new(n: usize, kind: CensusKind) -> Self {
        CensusQuery {
            n,
            kind,
            one_vertex: false,
            discs_only: false,
        }
    }

    pub fn one_vertex(mut self) -> Self {
        self.one_vertex = true;
        self
    }

    pub fn discs_only(mut self) -> Self {
        self.discs_only = true;
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct CensusOptions {
    /// Worker threads; 0 uses the global pool, 1 runs sequentially.
    pub jobs: usize,
    pub journal: Option<PathBuf>,
    pub allow_large: bool,
}

impl CensusOptions {
    pub fn sequential() -> Self {
        CensusOptions {
            jobs: 1,
            ..CensusOptions::default()
        }
    }

    fn exec(&self) -> Exec {
        if self.jobs == 1 {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }
}

/// One census triangulation with its surface statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusMember {
    pub signature: String,
    pub graph: String,
    pub vertices: usize,
    pub stats: ComplexityStats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusStats {
    pub query: CensusQuery,
    pub count: usize,
    pub sigma_max: usize,
    pub sigma_avg: Ratio<u64>,
    pub kappa_max: u64,
    pub kappa_avg: Ratio<u64>,
}

impl CensusStats {
    pub fn csv_row(&self) -> String {
        let q = &self.query;
        format!(
            "{},{},{},{},{},{},{},{},{}",
            q.n,
            q.kind,
            q.one_vertex,
            q.discs_only,
            self.count,
            self.sigma_max,
            one_decimal(&self.sigma_avg),
            self.kappa_max,
            one_decimal(&self.kappa_avg)
        )
    }

    pub fn table_row(&self) -> String {
        format!(
            "{:>3} {:<8} {:>5} {:>5} {:>8} {:>8} {:>8} {:>8} {:>8}",
            self.query.n,
            self.query.kind,
            yes_no(self.query.one_vertex),
            yes_no(self.query.discs_only),
            self.count,
            self.sigma_max,
            one_decimal(&self.sigma_avg),
            self.kappa_max,
            one_decimal(&self.kappa_avg)
        )
    }

    pub fn table_header() -> String {
        format!(
            "{:>3} {:<8} {:>5} {:>5} {:>8} {:>8} {:>8} {:>8} {:>8}",
            "n", "kind", "1vtx", "discs", "count", "sig.max", "sig.avg", "kap.max", "kap.avg"
        )
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Rounds half up to one decimal place.
pub fn one_decimal(r: &Ratio<u64>) -> String {
    let tenths = (20 * r.numer() + r.denom()) / (2 * r.denom());
    format!("{}.{}", tenths / 10, tenths % 10)
}

/// Connected face pairing graphs on `n` nodes, up to isomorphism, in
/// canonical order: 4-regular for closed, degree sum below `4n` for bounded.
pub fn face_pairing_graphs(n: usize, kind: CensusKind) -> Vec<FacePairingGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let mut degrees = vec![0usize; n];
    let mut arcs = Vec::new();
    let mut out = BTreeSet::new();
    graphs_from(n, kind, &pairs, 0, &mut degrees, &mut arcs, &mut out);
    out.into_iter().collect()
}

fn graphs_from(
    n: usize,
    kind: CensusKind,
    pairs: &[(usize, usize)],
    k: usize,
    degrees: &mut [usize],
    arcs: &mut Vec<(usize, usize)>,
    out: &mut BTreeSet<FacePairingGraph>,
) {
    if k == pairs.len() {
        let total: usize = degrees.iter().sum();
        let shape_ok = match kind {
            CensusKind::Closed => degrees.iter().all(|&d| d == 4),
            CensusKind::Bounded => total < 4 * n,
        };
        let g = FacePairingGraph::new(n, arcs.iter().copied());
        if shape_ok && g.is_connected() {
            out.insert(g.canonical());
        }
        return;
    }
    let (a, b) = pairs[k];
    let room = if a == b {
        (4 - degrees[a]) / 2
    } else {
        (4 - degrees[a]).min(4 - degrees[b])
    };
    for m in 0..=room {
        arcs.extend(std::iter::repeat((a, b)).take(m));
        degrees[a] += m;
        degrees[b] += m;
        graphs_from(n, kind, pairs, k + 1, degrees, arcs, out);
        degrees[a] -= m;
        degrees[b] -= m;
        arcs.truncate(arcs.len() - m);
    }
}

/// Arcs of `g` with concrete faces: each node hands out faces in the order
/// `012, 013, 023, 123` to its arc ends.
fn face_assignment(g: &FacePairingGraph) -> Vec<(usize, usize, usize, usize)> {
    let mut next = vec![0usize; g.node_count()];
    let mut take = |v: usize| {
        let f = FACE_COLUMNS[next[v]];
        next[v] += 1;
        f
    };
    g.arcs()
        .iter()
        .map(|&(a, b)| {
            let f = take(a);
            let h = take(b);
            (a, f, b, h)
        })
        .collect()
}

struct GluingSearch {
    kind: CensusKind,
    arcs: Vec<(usize, usize, usize, usize)>,
    tri: Triangulation,
    edges: ParitySets,
    found: BTreeMap<String, usize>,
}

impl GluingSearch {
    /// Identifies the three edges of the glued faces; `false` if an edge
    /// meets itself reversed.
    fn glue_edges(&mut self, a: usize, f: usize, b: usize, p: Perm4) -> bool {
        let [x, y, z] = face_vertices(f);
        for (u, v) in [(x, y), (x, z), (y, z)] {
            let (pu, pv) = (p.apply(u), p.apply(v));
            let here = a * 6 + edge_index(u, v);
            let there = b * 6 + edge_index(pu.min(pv), pu.max(pv));
            if self.edges.union(here, there, pu > pv) == ParityUnion::Contradiction {
                return false;
            }
        }
        true
    }

    fn run(&mut self, k: usize) {
        if k == self.arcs.len() {
            self.leaf();
            return;
        }
        let (a, f, b, g) = self.arcs[k];
        for p in ALL_PERMS.iter().copied().filter(|p| p.apply(f) == g) {
            let mark = self.edges.checkpoint();
            if self.glue_edges(a, f, b, p) {
                self.tri.join(a, f, b, p).expect("faces are free by construction");
                self.run(k + 1);
                self.tri.unjoin(a, f);
            }
            self.edges.rollback(mark);
        }
    }

    fn leaf(&mut self) {
        let report = validate(&self.tri);
        let kind_ok = match self.kind {
            CensusKind::Closed => report.is_closed,
            CensusKind::Bounded => report.is_bounded,
        };
        if report.is_3manifold && kind_ok {
            self.found
                .entry(canonical_signature(&self.tri))
                .or_insert(report.vertex_count);
        }
    }
}

/// Every census triangulation with pairing graph `g`, as signature and
/// vertex count, in signature order.
pub fn triangulations_of_graph(g: &FacePairingGraph, kind: CensusKind) -> Vec<(String, usize)> {
    let n = g.node_count();
    let mut search = GluingSearch {
        kind,
        arcs: face_assignment(g),
        tri: Triangulation::new(n),
        edges: ParitySets::new(6 * n),
        found: BTreeMap::new(),
    };
    search.run(0);
    search.found.into_iter().collect()
}

fn check_size(n: usize, opts: &CensusOptions) -> Result<(), CensusError> {
    if n == 0 {
        return Err(CensusError::EmptyCensus);
    }
    if n > DEFAULT_MAX_N && !opts.allow_large {
        return Err(CensusError::TooLarge {
            n,
            limit: DEFAULT_MAX_N,
        });
    }
    Ok(())
}

/// Journal lines: a header naming the census, then per finished graph its
/// `tri` lines followed by `done <graph-id>`.
struct Journal {
    path: PathBuf,
    file: Mutex<File>,
    finished: BTreeMap<String, Vec<CensusMember>>,
}

impl Journal {
    fn open(path: &Path, n: usize, kind: CensusKind) -> Result<Journal, CensusError> {
        let header = format!("{JOURNAL_MAGIC} n={n} kind={kind}");
        let bad = |message: String| CensusError::Journal {
            path: path.to_path_buf(),
            message,
        };
        let mut finished = BTreeMap::new();
        let mut exists = path.exists() && std::fs::metadata(path)?.len() > 0;
        if exists {
            let mut text = std::fs::read_to_string(path)?;
            if !text.ends_with('\n') {
                // An interrupted write left a partial line; drop it.
                let keep = text.rfind('\n').map_or(0, |i| i + 1);
                text.truncate(keep);
                OpenOptions::new().write(true).open(path)?.set_len(keep as u64)?;
                exists = keep > 0;
            }
            let mut pending: BTreeMap<String, Vec<CensusMember>> = BTreeMap::new();
            for (i, line) in text.lines().enumerate() {
                if i == 0 {
                    if line != header {
                        return Err(bad(format!("header `{line}` does not match `{header}`")));
                    }
                    continue;
                }
                let fields: Vec<&str> = line.split_whitespace().collect();
                match fields.as_slice() {
                    [] => {}
                    ["done", graph] => {
                        let members = pending.remove(*graph).unwrap_or_default();
                        finished.insert(graph.to_string(), members);
                    }
                    ["tri", graph, sig, rest @ ..] if rest.len() == 5 => {
                        let nums: Result<Vec<u64>, _> = rest.iter().map(|s| s.parse::<u64>()).collect();
                        let nums = nums.map_err(|e| bad(format!("line {}: {e}", i + 1)))?;
                        pending.entry(graph.to_string()).or_default().push(CensusMember {
                            signature: sig.to_string(),
                            graph: graph.to_string(),
                            vertices: nums[0] as usize,
                            stats: ComplexityStats {
                                sigma: nums[1] as usize,
                                kappa: nums[2],
                                sigma_discs: nums[3] as usize,
                                kappa_discs: nums[4],
                            },
                        });
                    }
                    _ => return Err(bad(format!("line {}: cannot parse `{line}`", i + 1))),
                }
            }
        }
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        if !exists {
            writeln!(file, "{header}")?;
        }
        Ok(Journal {
            path: path.to_path_buf(),
            file: Mutex::new(file),
            finished,
        })
    }

    fn record(&self, graph: &str, members: &[CensusMember]) -> Result<(), CensusError> {
        let mut text = String::new();
        for m in members {
            let s = &m.stats;
            text.push_str(&format!(
                "tri {} {} {} {} {} {} {}\n",
                graph, m.signature, m.vertices, s.sigma, s.kappa, s.sigma_discs, s.kappa_discs
            ));
        }
        text.push_str(&format!("done {graph}\n"));
        let mut file = self.file.lock().map_err(|_| CensusError::Journal {
            path: self.path.clone(),
            message: "journal lock poisoned".into(),
        })?;
        file.write_all(text.as_bytes())?;
        file.flush()?;
        Ok(())
    }
}

fn members_of_graph(g: &FacePairingGraph, kind: CensusKind) -> Result<Vec<CensusMember>, CensusError> {
    let id = g.id();
    let mut out = Vec::new();
    for (signature, vertices) in triangulations_of_graph(g, kind) {
        let t = crate::triangulation::parse_signature(&signature)
            .map_err(|e| EnumerationError::InvalidTriangulation(e.to_string()))?;
        out.push(CensusMember {
            stats: complexity_stats(&t)?,
            signature,
            graph: id.clone(),
            vertices,
        });
    }
    Ok(out)
}

/// Every census triangulation of size `n` and `kind` with its statistics,
/// sorted by signature. Graphs already marked done in the journal are not
/// searched again.
pub fn census_members(n: usize, kind: CensusKind, opts: &CensusOptions) -> Result<Vec<CensusMember>, CensusError> {
    check_size(n, opts)?;
    let journal = match &opts.journal {
        Some(p) => Some(Journal::open(p, n, kind)?),
        None => None,
    };
    let graphs = face_pairing_graphs(n, kind);
    let todo: Vec<FacePairingGraph> = graphs
        .into_iter()
        .filter(|g| journal.as_ref().map_or(true, |j| !j.finished.contains_key(&g.id())))
        .collect();
    let journal_ref = journal.as_ref();
    let results = with_jobs(opts.jobs, || {
        map_collect(opts.exec(), &todo, |g| {
            let members = members_of_graph(g, kind)?;
            if let Some(j) = journal_ref {
                j.record(&g.id(), &members)?;
            }
            Ok::<_, CensusError>(members)
        })
    });
    let mut all = Vec::new();
    for r in results {
        all.extend(r?);
    }
    if let Some(j) = journal {
        all.extend(j.finished.into_values().flatten());
    }
    all.sort_by(|a, b| a.signature.cmp(&b.signature));
    let mut seen = HashSet::new();
    all.retain(|m| seen.insert(m.signature.clone()));
    Ok(all)
}

/// Census triangulations for `q` (one-vertex filter applied), in signature
/// order.
pub fn generate_census(q: &CensusQuery, opts: &CensusOptions) -> Result<Vec<CensusMember>, CensusError> {
    let mut members = census_members(q.n, q.kind, opts)?;
    if q.one_vertex {
        members.retain(|m| m.vertices == 1);
    }
    Ok(members)
}

pub fn aggregate_stats(q: &CensusQuery, opts: &CensusOptions) -> Result<CensusStats, CensusError> {
    let members = census_members(q.n, q.kind, opts)?;
    Ok(stats_from_members(q, &members))
}

/// Aggregates over `members`, applying the query's filters.
pub fn stats_from_members(q: &CensusQuery, members: &[CensusMember]) -> CensusStats {
    let mut count = 0u64;
    let (mut sigma_sum, mut kappa_sum) = (0u64, 0u64);
    let (mut sigma_max, mut kappa_max) = (0usize, 0u64);
    for m in members.iter().filter(|m| !q.one_vertex || m.vertices == 1) {
        let (sigma, kappa) = if q.discs_only {
            (m.stats.sigma_discs, m.stats.kappa_discs)
        } else {
            (m.stats.sigma, m.stats.kappa)
        };
        count += 1;
        sigma_sum += sigma as u64;
        kappa_sum += kappa;
        sigma_max = sigma_max.max(sigma);
        kappa_max = kappa_max.max(kappa);
    }
    let avg = |sum: u64| {
        if count == 0 {
            Ratio::from_integer(0)
        } else {
            Ratio::new(sum, count)
        }
    };
    CensusStats {
        query: *q,
        count: count as usize,
        sigma_max,
        sigma_avg: avg(sigma_sum),
        kappa_max,
        kappa_avg: avg(kappa_sum),
    }
}
