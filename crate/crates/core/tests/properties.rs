use std::sync::OnceLock;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use normsurf::census::{census_members, CensusKind, CensusOptions};
use normsurf::enumeration::{brute_force_vertex_surfaces, enumerate_vertex_surfaces, VertexSurfaceSet};
use normsurf::normal::{is_admissible, matching_matrix, NormalVector};
use normsurf::perm::{Perm4, ALL_PERMS};
use normsurf::topology::{euler_by_pieces, reconstruct_surface};
use normsurf::triangulation::{canonical_signature, parse_signature, validate, Triangulation};

fn census_up_to(max_n: usize) -> Vec<Triangulation> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for kind in [CensusKind::Closed, CensusKind::Bounded] {
            for m in census_members(n, kind, &CensusOptions::sequential()).unwrap() {
                out.push(parse_signature(&m.signature).unwrap());
            }
        }
    }
    out
}

fn small_census() -> &'static [(Triangulation, VertexSurfaceSet)] {
    static CELL: OnceLock<Vec<(Triangulation, VertexSurfaceSet)>> = OnceLock::new();
    CELL.get_or_init(|| {
        census_up_to(2)
            .into_iter()
            .map(|t| {
                let s = enumerate_vertex_surfaces(&t).unwrap();
                (t, s)
            })
            .collect()
    })
}

fn random_relabel(t: &Triangulation, rng: &mut StdRng) -> Triangulation {
    let mut tets: Vec<usize> = (0..t.size()).collect();
    tets.shuffle(rng);
    let perms: Vec<Perm4> = (0..t.size()).map(|_| ALL_PERMS[rng.gen_range(0..24)]).collect();
    t.relabel(&tets, &perms)
}

#[test]
fn signatures_survive_random_relabelling() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for t in census_up_to(3) {
        let sig = canonical_signature(&t);
        for _ in 0..100 {
            let r = random_relabel(&t, &mut rng);
            assert_eq!(canonical_signature(&r), sig);
        }
    }
}

#[test]
fn census_signatures_are_distinct() {
    let sigs: Vec<String> = census_up_to(3).iter().map(canonical_signature).collect();
    let mut sorted = sigs.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), sigs.len());
}

/// Sum of the chosen vertex surfaces, if admissible.
fn combination(set: &VertexSurfaceSet, picks: &[(usize, u64)]) -> Option<(NormalVector, Vec<(usize, u64)>)> {
    let mut sum = NormalVector::zero(set.n);
    for &(i, k) in picks {
        for _ in 0..k {
            sum = sum.checked_add(&set.surfaces[i])?;
        }
    }
    if sum.is_zero() || !sum.satisfies_quad_constraints() {
        return None;
    }
    Some((sum, picks.to_vec()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sums_reconstruct_and_chi_adds(
        which in 0usize..1000,
        picks in prop::collection::vec((0usize..1000, 1u64..3), 1..4),
    ) {
        let census = small_census();
        let (t, set) = &census[which % census.len()];
        let picks: Vec<(usize, u64)> = picks.iter().map(|&(i, k)| (i % set.sigma(), k)).collect();
        let Some((sum, picks)) = combination(set, &picks) else { return Ok(()) };
        prop_assert!(is_admissible(t, &sum).unwrap());
        prop_assert!(matching_matrix(t).annihilates(&sum));
        let complex = reconstruct_surface(t, &sum).unwrap();
        prop_assert_eq!(complex.coordinate_counts(t.size()), sum.entries().to_vec());
        let expected: i64 = picks
            .iter()
            .map(|&(i, k)| k as i64 * reconstruct_surface(t, &set.surfaces[i]).unwrap().euler())
            .sum();
        prop_assert_eq!(complex.euler(), expected);
        prop_assert_eq!(euler_by_pieces(t, &sum), num_rational::Ratio::from_integer(expected));
    }

    #[test]
    fn random_two_tetrahedron_gluings_match_oracle(
        choices in prop::collection::vec((0usize..8, 0usize..2, 0usize..24), 0..5),
    ) {
        let mut t = Triangulation::new(2);
        for (a, tb, p) in choices {
            let (ta, fa) = (a / 4, a % 4);
            let perm = ALL_PERMS[p];
            let fb = perm.apply(fa);
            if (ta == tb && fa == fb) || t.gluing(ta, fa).is_some() || t.gluing(tb, fb).is_some() {
                continue;
            }
            t.join(ta, fa, tb, perm).unwrap();
        }
        prop_assume!(validate(&t).is_3manifold);
        let dd = enumerate_vertex_surfaces(&t).unwrap();
        let bf = brute_force_vertex_surfaces(&t).unwrap();
        prop_assert_eq!(dd, bf);
    }

    #[test]
    fn relabelling_keeps_sigma(which in 0usize..1000, seed in any::<u64>()) {
        let census = small_census();
        let (t, set) = &census[which % census.len()];
        let mut rng = StdRng::seed_from_u64(seed);
        let r = random_relabel(t, &mut rng);
        let again = enumerate_vertex_surfaces(&r).unwrap();
        prop_assert_eq!(again.sigma(), set.sigma());
        prop_assert_eq!(again.kappa(), set.kappa());
    }
}
