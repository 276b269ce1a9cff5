use bundled::bipartite::{gain_def, GainGraph};
use bundled::generate::{generate, GeneratorSpec};
use bundled::net::{check_pseudosegments, net_of};
use bundled::oracle::partition::ExactCover;
use bundled::rectangulation::{gamma_checks, saturates};
use bundled::*;
use proptest::prelude::*;

fn instance(family: &str, seed: u64) -> Option<DualNet> {
    let spec = GeneratorSpec {
        family: family.parse().ok()?,
        seed,
    };
    let p = build_planarization(&generate(&spec).ok()?).ok()?;
    if !check_pseudosegments(&p).is_empty() {
        return None;
    }
    net_of(&p).ok()
}

fn family() -> impl Strategy<Value = String> {
    prop_oneof![
        (3usize..8).prop_map(|n| format!("circular:{n}")),
        (3usize..8).prop_map(|n| format!("circular-bipartite:{n}")),
        (4usize..9).prop_map(|n| format!("segments:{n}")),
    ]
}

/// Smallest exact cover by trying every subset of candidates.
fn naive_cover(items: usize, cands: &[u64]) -> Option<usize> {
    let full = (1u64 << items) - 1;
    (0u32..1 << cands.len())
        .filter_map(|pick| {
            let mut cover = 0u64;
            for (i, &c) in cands.iter().enumerate() {
                if pick & (1 << i) != 0 {
                    if cover & c != 0 {
                        return None;
                    }
                    cover |= c;
                }
            }
            (cover == full).then_some(pick.count_ones() as usize)
        })
        .min()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn net_euler_and_greedy_invariants(fam in family(), seed in 0u64..10_000) {
        let Some(net) = instance(&fam, seed) else { return Ok(()) };
        let (v, e, f) = (net.num_vertices() as i64, net.num_edges() as i64, net.map.num_faces() as i64);
        prop_assert_eq!(v - e + f, 2);

        let cs = greedy_rectangulate(&net, &CutSet::default(), VertexOrder::ById);
        let mut marked = vec![false; net.num_edges()];
        for s in &cs.segments {
            for e in s.edges() {
                marked[e] = true;
            }
        }
        for v in 0..net.num_vertices() {
            prop_assert!(saturates(&net, &marked, v), "vertex {}", v);
        }
        prop_assert!(cs.len() <= net.total_exponent());

        let rect = extract_rectangulation(&net, &cs).unwrap();
        prop_assert_eq!(rect.s, cs.len());
        prop_assert!(gamma_checks(&net, &rect).passed());
        let bundling = to_bundling(&net, &rect).unwrap();
        prop_assert_eq!(bundling.count(), rect.r);
    }

    #[test]
    fn generators_are_deterministic(fam in family(), seed in 0u64..10_000) {
        let spec = GeneratorSpec { family: fam.parse().unwrap(), seed };
        let a = generate(&spec).map(|a| a.to_json());
        let b = generate(&spec).map(|a| a.to_json());
        prop_assert_eq!(a.ok(), b.ok());
    }

    #[test]
    fn gain_identity_matches_definition(n in 3usize..9, seed in 0u64..10_000, pick in any::<u32>()) {
        let Some(net) = instance(&format!("circular-bipartite:{n}"), seed) else { return Ok(()) };
        for color in [Color::Blue, Color::Red] {
            let gb = GainGraph::build(&net, color);
            let sub: Vec<usize> = (0..gb.b.len().min(16)).filter(|i| pick & (1 << i) != 0).collect();
            let segs = gb.segments_of(&sub);
            prop_assert_eq!(gb.gain_identity(&sub), gain_def(&net, &segs).g);
        }
    }

    #[test]
    fn exact_cover_matches_naive(items in 1usize..9, cands in prop::collection::vec(1u64..256, 0..12)) {
        let mask = (1u64 << items) - 1;
        let mut cands: Vec<u64> = cands.into_iter().map(|c| c & mask).filter(|&c| c != 0).collect();
        cands.sort_unstable();
        cands.dedup();
        prop_assert_eq!(ExactCover::new(items, cands.iter().copied()).minimum(), naive_cover(items, &cands));
    }

    #[test]
    fn mirror_keeps_invariants(fam in family(), seed in 0u64..10_000) {
        let Some(net) = instance(&fam, seed) else { return Ok(()) };
        let spec = GeneratorSpec { family: fam.parse().unwrap(), seed };
        let mirrored = generate(&spec).unwrap().mirrored();
        let m = net_of(&build_planarization(&mirrored).unwrap()).unwrap();
        prop_assert_eq!(m.num_squares(), net.num_squares());
        prop_assert_eq!(m.hole_count(), net.hole_count());
        prop_assert_eq!(m.total_exponent(), net.total_exponent());
        prop_assert_eq!(m.toothed_count(), net.toothed_count());
    }
}

#[test]
fn strategies_mostly_produce_nets() {
    for fam in ["circular:6", "circular-bipartite:6", "segments:6"] {
        let ok = (0..40).filter(|&s| instance(fam, s).is_some()).count();
        assert!(ok >= 20, "{fam}: {ok}/40");
    }
}
