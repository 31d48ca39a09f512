//! Relabelling-invariant text tokens for triangulations.
//!
//! For each connected component, every choice of root tetrahedron and root
//! vertex labelling determines a breadth-first relabelling of the whole
//! component, and with it an encoded gluing table. The lexicographically
//! smallest encoding is canonical. Components are sorted by encoding.
//!
//! Token grammar: components joined by `+`; within a component, tetrahedra
//! joined by `.`; each tetrahedron lists its four faces (by opposite vertex)
//! joined by `,`; a face is `_` (boundary) or `<tet><perm>` where `<perm>` is
//! a letter `a`..`x` indexing the 24 permutations in lexicographic order.

use crate::perm::Perm4;

use super::{Triangulation, TriangulationError};

const BOUNDARY: u32 = 0;

/// Encodes the component containing `root` under the labelling that sends
/// `root` to tetrahedron 0 with vertex map `root_perm`. Aborts (returns
/// `false`) as soon as the encoding exceeds `best`.
fn encode_from(
    t: &Triangulation,
    root: usize,
    root_perm: Perm4,
    out: &mut Vec<u32>,
    best: Option<&[u32]>,
    new_index: &mut [usize],
    maps: &mut [Perm4],
    order: &mut Vec<usize>,
) -> bool {
    out.clear();
    order.clear();
    for x in new_index.iter_mut() {
        *x = usize::MAX;
    }
    new_index[root] = 0;
    maps[root] = root_perm;
    order.push(root);
    let mut head = 0;
    let mut still_equal = best.is_some();
    while head < order.len() {
        let old = order[head];
        let sigma = maps[old];
        let sigma_inv = sigma.inverse();
        for f in 0..4 {
            let old_face = sigma_inv.apply(f);
            let code = match t.gluing(old, old_face) {
                None => BOUNDARY,
                Some(g) => {
                    if new_index[g.tet] == usize::MAX {
                        new_index[g.tet] = order.len();
                        // Makes the relabelled gluing the identity.
                        maps[g.tet] = sigma.compose(g.perm.inverse());
                        order.push(g.tet);
                    }
                    let pi = maps[g.tet].compose(g.perm).compose(sigma_inv);
                    1 + (new_index[g.tet] as u32) * 24 + pi.index() as u32
                }
            };
            if still_equal {
                let b = best.expect("still_equal implies best");
                let pos = out.len();
                if code > b[pos] {
                    return false;
                }
                if code < b[pos] {
                    still_equal = false;
                }
            }
            out.push(code);
        }
        head += 1;
    }
    true
}

fn component_code(t: &Triangulation, members: &[usize]) -> Vec<u32> {
    let n = t.size();
    let mut best: Vec<u32> = Vec::new();
    let mut have_best = false;
    let mut buf = Vec::with_capacity(4 * members.len());
    let mut new_index = vec![usize::MAX; n];
    let mut maps = vec![Perm4::IDENTITY; n];
    let mut order = Vec::with_capacity(members.len());
    for &root in members {
        for &p in crate::perm::ALL_PERMS.iter() {
            let better = encode_from(
                t,
                root,
                p,
                &mut buf,
                have_best.then_some(best.as_slice()),
                &mut new_index,
                &mut maps,
                &mut order,
            );
            if better && (!have_best || buf < best) {
                std::mem::swap(&mut best, &mut buf);
                have_best = true;
            }
        }
    }
    best
}

fn components(t: &Triangulation) -> Vec<Vec<usize>> {
    let n = t.size();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut i = 0;
        while i < members.len() {
            let tet = members[i];
            for f in 0..4 {
                if let Some(g) = t.gluing(tet, f) {
                    if comp[g.tet] == usize::MAX {
                        comp[g.tet] = id;
                        members.push(g.tet);
                    }
                }
            }
            i += 1;
        }
        out.push(members);
    }
    out
}

fn render(codes: &[Vec<u32>]) -> String {
    let mut s = String::new();
    for (ci, code) in codes.iter().enumerate() {
        if ci > 0 {
            s.push('+');
        }
        for (i, &c) in code.iter().enumerate() {
            if i > 0 {
                s.push(if i % 4 == 0 { '.' } else { ',' });
            }
            if c == BOUNDARY {
                s.push('_');
            } else {
                let v = c - 1;
                s.push_str(&(v / 24).to_string());
                s.push((b'a' + (v % 24) as u8) as char);
            }
        }
    }
    s
}

/// Canonical text token: equal for two triangulations iff they differ only
/// by relabelling tetrahedra and the vertices within tetrahedra.
pub fn canonical_signature(t: &Triangulation) -> String {
    let mut codes: Vec<Vec<u32>> = components(t)
        .iter()
        .map(|members| component_code(t, members))
        .collect();
    codes.sort();
    render(&codes)
}

/// Rebuilds a triangulation (in canonical labelling) from a signature token.
pub fn parse_signature(sig: &str) -> Result<Triangulation, TriangulationError> {
    let syntax = |message: String| TriangulationError::Syntax { line: 1, message };
    let mut parsed: Vec<Vec<[Option<(usize, Perm4)>; 4]>> = Vec::new();
    for comp in sig.trim().split('+') {
        let mut tets = Vec::new();
        for tet in comp.split('.') {
            let faces: Vec<&str> = tet.split(',').collect();
            if faces.len() != 4 {
                return Err(syntax(format!("expected 4 faces in `{tet}`")));
            }
            let mut row = [None; 4];
            for (f, cell) in faces.iter().enumerate() {
                if *cell == "_" {
                    continue;
                }
                let letter = cell
                    .chars()
                    .last()
                    .ok_or_else(|| syntax("empty face entry".into()))?;
                let idx = (letter as u32).wrapping_sub('a' as u32) as usize;
                if idx >= 24 {
                    return Err(syntax(format!("bad permutation letter in `{cell}`")));
                }
                let other: usize = cell[..cell.len() - 1]
                    .parse()
                    .map_err(|_| syntax(format!("bad face entry `{cell}`")))?;
                row[f] = Some((other, Perm4::from_index(idx)));
            }
            tets.push(row);
        }
        parsed.push(tets);
    }
    let n: usize = parsed.iter().map(Vec::len).sum();
    let mut t = Triangulation::new(n);
    let mut offset = 0;
    for comp in &parsed {
        for (i, row) in comp.iter().enumerate() {
            for (f, cell) in row.iter().enumerate() {
                if let Some((other, perm)) = *cell {
                    if other >= comp.len() {
                        return Err(syntax(format!("tetrahedron {other} out of range")));
                    }
                    t.join(offset + i, f, offset + other, perm)?;
                }
            }
        }
        offset += comp.len();
    }
    t.check_involution()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::ALL_PERMS;

    fn two_tet_path() -> Triangulation {
        let mut t = Triangulation::new(2);
        // 0(012) -> 1(013)
        t.join(0, 3, 1, Perm4::from_images([0, 1, 3, 2]).unwrap())
            .unwrap();
        t
    }

    #[test]
    fn swapping_tetrahedra_keeps_signature() {
        let t = two_tet_path();
        let swapped = t.relabel(&[1, 0], &[Perm4::IDENTITY; 2]);
        assert_ne!(t, swapped);
        assert_eq!(canonical_signature(&t), canonical_signature(&swapped));
    }

    #[test]
    fn vertex_relabelling_keeps_signature() {
        let t = two_tet_path();
        let sig = canonical_signature(&t);
        for &p in ALL_PERMS.iter().step_by(5) {
            for &q in ALL_PERMS.iter().step_by(7) {
                assert_eq!(canonical_signature(&t.relabel(&[0, 1], &[p, q])), sig);
            }
        }
    }

    #[test]
    fn signature_round_trip_is_idempotent() {
        let t = two_tet_path();
        let sig = canonical_signature(&t);
        let back = parse_signature(&sig).unwrap();
        assert_eq!(back.size(), 2);
        assert_eq!(canonical_signature(&back), sig);
    }

    #[test]
    fn free_tetrahedra_components() {
        let sig = canonical_signature(&Triangulation::new(2));
        assert_eq!(sig, "_,_,_,_+_,_,_,_");
        assert_eq!(parse_signature(&sig).unwrap().size(), 2);
    }
}
