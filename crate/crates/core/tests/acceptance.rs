//! Acceptance gate: criteria 1-14, one PASS/FAIL line each.
//!
//! Expected values are either the published tables or computed here from
//! first principles (Pascal's triangle, Fibonacci numbers, arc and edge
//! counts straight from the coordinates), never from the library's own
//! helpers.

use std::collections::{BTreeMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_rational::Ratio;

use normsurf::census::{census_members, stats_from_members, CensusKind, CensusMember, CensusOptions, CensusQuery};
use normsurf::enumeration::{brute_force_vertex_surfaces, enumerate_vertex_surfaces, invariant_checks_performed, VertexSurfaceSet};
use normsurf::families::{binomial, closed_c, g11, lst_fib, path, plug_e, tree_extend, TreeContext};
use normsurf::normal::NormalVector;
use normsurf::topology::{classify_vector, euler_by_pieces, is_vertex_linking, reconstruct_surface, SurfaceKind};
use normsurf::triangulation::{compute_skeleton, parse_signature, FaceRef, Triangulation, TET_EDGES};

/// Averages must lie within this distance of the one-decimal table values.
const AVG_TOLERANCE: (u64, u64) = (1, 20);

static ENUMERATIONS: AtomicUsize = AtomicUsize::new(0);

/// Enumerates and re-checks the continuous invariants: distinct zero sets
/// and at most 64^n surfaces.
fn enumerate(t: &Triangulation) -> VertexSurfaceSet {
    let set = enumerate_vertex_surfaces(t).expect("enumeration");
    ENUMERATIONS.fetch_add(1, Ordering::Relaxed);
    let zero_sets: HashSet<Vec<bool>> = set.iter().map(|v| v.entries().iter().map(|&x| x == 0).collect()).collect();
    assert_eq!(zero_sets.len(), set.sigma(), "repeated zero set");
    assert!((set.sigma() as f64).log(64.0) <= t.size() as f64, "more than 64^n surfaces");
    set
}

fn quad_separates(q: usize, x: usize, y: usize) -> bool {
    let side = [0, q + 1];
    side.contains(&x) != side.contains(&y)
}

/// Normal arcs of `v` on face `face` of `tet` cutting off vertex `a`:
/// triangles at `a`, plus the quad keeping `a` and `face` together.
fn arcs(v: &NormalVector, tet: usize, face: usize, a: usize) -> u64 {
    let b = v.block(tet);
    b[a] + (0..3).filter(|&q| !quad_separates(q, a, face)).map(|q| b[4 + q]).sum::<u64>()
}

/// Points where `v` meets tetrahedron edge `xy`.
fn edge_points(v: &NormalVector, tet: usize, x: usize, y: usize) -> u64 {
    let b = v.block(tet);
    b[x] + b[y] + (0..3).filter(|&q| quad_separates(q, x, y)).map(|q| b[4 + q]).sum::<u64>()
}

fn matches_across_faces(t: &Triangulation, v: &NormalVector) -> bool {
    for tet in 0..t.size() {
        for face in 0..4 {
            let Some(g) = t.gluing(tet, face) else { continue };
            for a in (0..4).filter(|&a| a != face) {
                if arcs(v, tet, face, a) != arcs(v, g.tet, g.face, g.perm.apply(a)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Surfaces meeting boundary face `f` only in arcs cutting off `a`.
fn face_pattern_count(set: &VertexSurfaceSet, f: FaceRef, a: usize) -> usize {
    set.iter()
        .filter(|v| {
            (0..4)
                .filter(|&x| x != f.face)
                .all(|x| (arcs(v, f.tet, f.face, x) > 0) == (x == a))
        })
        .count()
}

fn fib(k: usize) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..k {
        (a, b) = (b, a + b);
    }
    a
}

fn pascal(n: usize) -> Vec<u64> {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row
}

fn kind(t: &Triangulation, v: &NormalVector) -> SurfaceKind {
    classify_vector(t, v).expect("classification").kind
}

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1() -> Outcome {
    let t = Triangulation::new(1);
    let set = enumerate(&t);
    check(set.sigma() == 7, || format!("sigma = {}", set.sigma()))?;
    check(set.kappa() == 1, || format!("kappa = {}", set.kappa()))?;
    check(set.iter().all(|v| kind(&t, v) == SurfaceKind::Disc), || "non-disc".into())?;
    Ok("sigma = 7, all discs, kappa = 1".into())
}

fn c2() -> Outcome {
    let mut orientable = true;
    for n in 1..=8 {
        let t = binomial(n);
        let set = enumerate(&t);
        check(set.sigma() == 1 << n, || format!("sigma(A_{n}) = {}", set.sigma()))?;
        if n > 6 {
            continue;
        }
        let mut hist = vec![0u64; n + 1];
        for v in &set {
            let c = classify_vector(&t, v).unwrap();
            check(c.components == 1 && c.total_boundary() == 0, || format!("A_{n}: {v}"))?;
            let deficit = 2 - c.euler;
            let genus = if c.is_orientable() { deficit / 2 } else { deficit };
            orientable &= c.is_orientable();
            check(genus >= 0 && (genus as usize) <= n, || format!("A_{n}: genus {genus}"))?;
            hist[genus as usize] += 1;
        }
        check(hist == pascal(n), || format!("A_{n}: histogram {hist:?}"))?;
    }
    Ok(format!(
        "sigma(A_n) = 2^n (n <= 8), genus histogram = C(n,k) (n <= 6), surfaces {}",
        if orientable { "all orientable" } else { "include non-orientable" }
    ))
}

fn c3() -> Outcome {
    for n in 1..=10usize {
        let t = path(n);
        let set = enumerate(&t);
        let want = (1usize << (n + 1)) + (n + 1) * (n + 2) / 2;
        check(set.sigma() == want, || format!("sigma(P_{n}) = {} != {want}", set.sigma()))?;
        check(set.iter().all(|v| kind(&t, v) == SurfaceKind::Disc), || format!("P_{n}: non-disc"))?;
    }
    Ok("sigma(P_n) = 2^(n+1) + (n+1)(n+2)/2 (n <= 10), all discs".into())
}

fn c4() -> Outcome {
    for n in 1..=10 {
        let t = lst_fib(n);
        let set = enumerate(&t);
        let skel = compute_skeleton(&t);
        let boundary_edges: Vec<(usize, usize, usize)> = skel
            .edge_orbits
            .iter()
            .filter(|e| e.boundary)
            .map(|e| {
                let (tet, idx, _) = e.members[0];
                (tet, TET_EDGES[idx].0, TET_EDGES[idx].1)
            })
            .collect();
        check(boundary_edges.len() == 3, || format!("B_{n}: {} boundary edges", boundary_edges.len()))?;
        let want = [fib(n + 1), fib(n + 2), fib(n + 3)];
        let found = set.iter().any(|v| {
            let mut w: Vec<u64> = boundary_edges.iter().map(|&(tet, x, y)| edge_points(v, tet, x, y)).collect();
            w.sort_unstable();
            v.max_entry() == fib(n + 1) && w == want && kind(&t, v) == SurfaceKind::Disc
        });
        check(found, || format!("B_{n}: no disc with max {} meeting the boundary in {want:?}", fib(n + 1)))?;
    }
    Ok("B_n meridian disc: max F(n+1), boundary edges F(n+1), F(n+2), F(n+3) (n <= 10)".into())
}

fn c5() -> Outcome {
    let t = plug_e();
    let set = enumerate(&t);
    check(set.sigma() == 13, || format!("sigma(E) = {}", set.sigma()))?;
    let d1 = FaceRef::new(3, 2);
    let d2 = FaceRef::new(3, 0);
    let pattern = |v: &NormalVector, f: FaceRef| -> Vec<u64> {
        (0..4).filter(|&x| x != f.face).map(|x| arcs(v, f.tet, f.face, x)).collect()
    };
    let mut bounded = 0;
    let mut closed = 0;
    let (mut s, mut tt) = (None, None);
    for v in &set {
        let c = classify_vector(&t, v).unwrap();
        if c.total_boundary() > 0 {
            bounded += 1;
        } else {
            closed += 1;
        }
        let (p1, p2) = (pattern(v, d1), pattern(v, d2));
        if p1 == [0, 2, 2] && p2 == [2, 0, 2] {
            s = Some(c.kind);
        }
        if p1 == [0, 2, 1] && p2 == [1, 0, 2] {
            tt = Some(c.kind);
        }
    }
    check(bounded == 12 && closed == 1, || format!("{bounded} bounded, {closed} closed"))?;
    check(s == Some(SurfaceKind::Cylinder), || format!("(0,2,2)/(2,0,2) surface: {s:?}"))?;
    check(tt == Some(SurfaceKind::MobiusStrip), || format!("(0,2,1)/(1,0,2) surface: {tt:?}"))?;
    Ok("E: 13 surfaces (12 bounded, 1 closed), cylinder and Mobius strip patterns".into())
}

fn c6() -> Outcome {
    let t8 = closed_c(8);
    let pp = enumerate(&t8)
        .iter()
        .filter(|v| v.max_entry() >= fib(5) && kind(&t8, v) == SurfaceKind::ProjectivePlane)
        .map(|v| v.max_entry())
        .max();
    check(pp.is_some(), || "C_8: no projective plane with max >= 5".into())?;
    let t7 = closed_c(7);
    let set7 = enumerate(&t7);
    let sphere = set7
        .iter()
        .filter(|v| v.max_entry() >= 2 * fib(4))
        .filter(|v| kind(&t7, v) == SurfaceKind::Sphere && !is_vertex_linking(&t7, v).unwrap())
        .map(|v| v.max_entry())
        .max();
    check(sphere.is_some(), || "C_7: no non-vertex-linking sphere with max >= 6".into())?;
    Ok(format!(
        "C_8 projective plane with max {} >= 5; C_7 non-vertex-linking sphere with max {} >= 6",
        pp.unwrap(),
        sphere.unwrap()
    ))
}

struct Census {
    closed: BTreeMap<usize, Vec<CensusMember>>,
    bounded: BTreeMap<usize, Vec<CensusMember>>,
}

fn census() -> Census {
    let opts = CensusOptions::default();
    let mut c = Census {
        closed: BTreeMap::new(),
        bounded: BTreeMap::new(),
    };
    for n in 1..=4 {
        c.closed.insert(n, census_members(n, CensusKind::Closed, &opts).unwrap());
        c.bounded.insert(n, census_members(n, CensusKind::Bounded, &opts).unwrap());
    }
    c
}

fn c7(c: &Census) -> Outcome {
    let want = [[4, 3, 3], [17, 12, 17], [81, 63, 156], [577, 433, 2308]];
    for n in 1..=4 {
        let closed = &c.closed[&n];
        let got = [
            closed.len(),
            closed.iter().filter(|m| m.vertices == 1).count(),
            c.bounded[&n].len(),
        ];
        check(got == want[n - 1], || format!("n = {n}: {got:?} != {:?}", want[n - 1]))?;
    }
    Ok("closed 4,17,81,577; closed 1-vertex 3,12,63,433; bounded 3,17,156,2308".into())
}

fn near(avg: &Ratio<u64>, shown: (u64, u64)) -> bool {
    let target = Ratio::new(shown.0 * 10 + shown.1, 10);
    let tol = Ratio::new(AVG_TOLERANCE.0, AVG_TOLERANCE.1);
    let diff = if *avg > target { avg - target } else { target - avg };
    diff <= tol
}

fn c8(c: &Census) -> Outcome {
    let closed_max = [3, 7, 11, 18];
    let closed_avg = [(2, 0), (3, 9), (5, 5), (8, 8)];
    let one_max = [2, 4, 8, 16];
    let bounded_max = [7, 14, 35, 85];
    let bounded_avg = [(5, 0), (8, 2), (14, 0), (31, 3)];
    let discs_max = [7, 14, 27, 69];
    let discs_avg = [(4, 0), (5, 2), (7, 0), (11, 6)];
    let kappa_closed = [1, 2, 3, 4];
    let kappa_bounded = [1, 2, 3, 6];
    for n in 1..=4 {
        let i = n - 1;
        let cq = CensusQuery::new(n, CensusKind::Closed);
        let bq = CensusQuery::new(n, CensusKind::Bounded);
        let cs = stats_from_members(&cq, &c.closed[&n]);
        let c1 = stats_from_members(&cq.one_vertex(), &c.closed[&n]);
        let bs = stats_from_members(&bq, &c.bounded[&n]);
        let bd = stats_from_members(&bq.discs_only(), &c.bounded[&n]);
        let row = format!("n = {n}: {} | {} | {} | {}", cs.csv_row(), c1.csv_row(), bs.csv_row(), bd.csv_row());
        check(cs.sigma_max == closed_max[i] && near(&cs.sigma_avg, closed_avg[i]), || row.clone())?;
        check(c1.sigma_max == one_max[i], || row.clone())?;
        check(bs.sigma_max == bounded_max[i] && near(&bs.sigma_avg, bounded_avg[i]), || row.clone())?;
        check(bd.sigma_max == discs_max[i] && near(&bd.sigma_avg, discs_avg[i]), || row.clone())?;
        check(cs.kappa_max == kappa_closed[i] && bs.kappa_max == kappa_bounded[i], || row.clone())?;
    }
    Ok(format!(
        "sigma/kappa maxima exact, averages within {}/{} (n <= 4)",
        AVG_TOLERANCE.0, AVG_TOLERANCE.1
    ))
}

fn c9() -> Outcome {
    let t = g11();
    let set = enumerate(&t);
    check(set.sigma() == 61_526, || format!("sigma(G) = {}", set.sigma()))?;
    let alpha = face_pattern_count(&set, FaceRef::new(0, 3), 0);
    check(alpha == 31_643, || format!("alpha_0 = {alpha}"))?;
    Ok("sigma(G) = 61526, alpha_0 = 31643 on 0(012) around vertex 0".into())
}

fn c10(c: &Census) -> Outcome {
    let mut tris = vec![binomial(1), path(1), path(2), lst_fib(1)];
    for n in 1..=2 {
        for m in c.closed[&n].iter().chain(&c.bounded[&n]) {
            tris.push(parse_signature(&m.signature).unwrap());
        }
    }
    for t in &tris {
        let dd = enumerate(t);
        let bf = brute_force_vertex_surfaces(t).unwrap();
        check(dd == bf, || format!("DD and oracle differ on\n{}", t.to_text()))?;
    }
    Ok(format!("DD = support enumeration on {} triangulations (A_1, P_1, P_2, B_1, census n <= 2)", tris.len()))
}

fn c11() -> Outcome {
    let ours = ENUMERATIONS.load(Ordering::Relaxed);
    let library = invariant_checks_performed();
    check(ours > 0 && library >= ours, || format!("{library} library checks for {ours} enumerations"))?;
    Ok(format!("{ours} enumerations re-checked here, {library} checked in the library"))
}

fn c12() -> Outcome {
    let samples = vec![binomial(3), path(3), plug_e(), lst_fib(4), closed_c(5)];
    let (mut surfaces, mut pairs) = (0, 0);
    for t in &samples {
        let set = enumerate(t);
        let mut chi = Vec::new();
        for v in &set {
            check(matches_across_faces(t, v), || format!("{v} fails the matching equations"))?;
            let complex = reconstruct_surface(t, v).map_err(|e| e.to_string())?;
            check(complex.coordinate_counts(t.size()) == v.entries(), || format!("{v} does not round trip"))?;
            let e = complex.euler();
            check(euler_by_pieces(t, v) == Ratio::from_integer(e), || format!("chi mismatch on {v}"))?;
            chi.push(e);
            surfaces += 1;
        }
        let all: Vec<&NormalVector> = set.iter().collect();
        for i in 0..all.len() {
            for j in i..all.len() {
                let sum = match all[i].checked_add(all[j]) {
                    Some(s) if s.satisfies_quad_constraints() => s,
                    _ => continue,
                };
                let e = reconstruct_surface(t, &sum).map_err(|e| e.to_string())?.euler();
                check(e == chi[i] + chi[j], || format!("chi not additive: {} + {}", all[i], all[j]))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{surfaces} surfaces in the kernel and reconstructed exactly; chi additive on {pairs} pairs"))
}

fn c13() -> Outcome {
    let seed = Triangulation::new(1);
    let face = FaceRef::new(0, 3);
    let alpha0 = face_pattern_count(&enumerate(&seed), face, 0) as u64;
    let mut ctx = TreeContext {
        triangulation: seed,
        face,
        arc: 0,
        alpha: alpha0.into(),
    };
    let mut sizes = vec![1];
    for _ in 0..3 {
        ctx = tree_extend(&ctx).map_err(|e| e.to_string())?;
        sizes.push(ctx.triangulation.size());
    }
    check(sizes.windows(2).all(|w| w[1] == 2 * w[0] + 1), || format!("sizes {sizes:?}"))?;
    let first = tree_extend(&TreeContext {
        triangulation: Triangulation::new(1),
        face,
        arc: 0,
        alpha: alpha0.into(),
    })
    .map_err(|e| e.to_string())?;
    let set = enumerate(&first.triangulation);
    let alpha1 = face_pattern_count(&set, first.face, first.arc) as u64;
    check(alpha1 >= alpha0 * alpha0, || format!("alpha_1 = {alpha1} < {alpha0}^2"))?;
    Ok(format!("sizes {sizes:?}; alpha_0 = {alpha0}, alpha_1 = {alpha1} >= alpha_0^2"))
}

fn c14() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_normsurf");
    let run = |args: &[&str], input: &str| -> Vec<u8> {
        use std::io::Write;
        let mut child = Command::new(bin)
            .args(args)
            .stdin(std::process::Stdio::piped())
            .stdout(std::process::Stdio::piped())
            .spawn()
            .expect("spawn");
        child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
        let out = child.wait_with_output().unwrap();
        assert!(out.status.success(), "{args:?}");
        out.stdout
    };
    let table = String::from_utf8(run(&["family", "binomial", "5"], "")).unwrap();
    let mut outputs = Vec::new();
    for jobs in ["1", "2", "3", "1"] {
        let mut all = Vec::new();
        for kind in ["closed", "bounded"] {
            for format in ["csv", "signatures"] {
                all.extend(run(&["census", "--n", "3", "--kind", kind, "--jobs", jobs, "--format", format], ""));
            }
        }
        all.extend(run(&["enumerate"], &table));
        outputs.push(all);
    }
    check(outputs.windows(2).all(|w| w[0] == w[1]), || "outputs differ".into())?;
    Ok(format!("{} runs with --jobs 1/2/3 byte-identical", outputs.len()))
}

fn report(id: u8, f: impl FnOnce() -> Outcome) -> (u8, bool, String) {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    match outcome {
        Ok(d) => (id, true, format!("PASS criterion {id}: {d}")),
        Err(d) => (id, false, format!("FAIL criterion {id}: {d}")),
    }
}

fn main() -> std::process::ExitCode {
    let census = census();
    // Criterion 11 runs last so that it sees every other enumeration.
    let mut results = vec![
        report(1, c1),
        report(2, c2),
        report(3, c3),
        report(4, c4),
        report(5, c5),
        report(6, c6),
        report(7, || c7(&census)),
        report(8, || c8(&census)),
        report(9, c9),
        report(10, || c10(&census)),
        report(12, c12),
        report(13, c13),
        report(14, c14),
    ];
    results.push(report(11, c11));
    results.sort_by_key(|r| r.0);
    for (_, _, line) in &results {
        println!("{line}");
    }
    let failed = results.iter().filter(|r| !r.1).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        std::process::ExitCode::SUCCESS
    } else {
        std::process::ExitCode::FAILURE
    }
}
