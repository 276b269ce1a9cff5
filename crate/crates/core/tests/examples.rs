//! Worked examples for every module, on hand-made and generated instances.

use bundled::arrangement::{split_components, validate_pseudosegments, Violation};
use bundled::bipartite::*;
use bundled::generate::*;
use bundled::net::{check_pseudosegments, sector_deficit};
use bundled::oracle::verify::{verify_inequalities, RunSummary};
use bundled::oracle::{brute_force_min_rectangulation, candidate_rectangles};
use bundled::rectangulation::{
    delimiting_cutset, gamma_checks, rectangulation_from_partition, saturates, TieBreak,
};
use bundled::*;

const PLUS: &str = r#"{"strings":[{"id":0,"color":"blue","crossings":[0]},{"id":1,"color":"red","crossings":[0]}],
    "crossings":[{"id":0,"strings":[0,1],"sign":1}]}"#;

fn net_from(arr: &Arrangement) -> DualNet {
    net_of(&build_planarization(arr).unwrap()).unwrap()
}

fn family(s: &str, seed: u64) -> Arrangement {
    generate(&GeneratorSpec {
        family: s.parse().unwrap(),
        seed,
    })
    .unwrap()
}

#[test]
fn parsing() {
    let plus = Arrangement::parse(PLUS).unwrap();
    assert_eq!((plus.strings.len(), plus.crossings.len()), (2, 1));
    assert_eq!(family("grid:4x4", 0).num_arcs(), 40);
    let bad = r#"{"strings":[{"id":0,"color":null,"crossings":[0]},{"id":1,"color":null,"crossings":[0]},{"id":2,"color":null,"crossings":[0]}],
        "crossings":[{"id":0,"strings":[0,1,2],"sign":1}]}"#;
    assert!(matches!(
        Arrangement::parse(bad),
        Err(Error::CrossingArity { .. })
    ));
}

#[test]
fn planarization_counts() {
    let plus = build_planarization(&Arrangement::parse(PLUS).unwrap()).unwrap();
    assert_eq!(
        (plus.num_vertices(), plus.num_edges(), plus.num_faces()),
        (5, 4, 1)
    );
    let grid = build_planarization(&family("grid:4x4", 0)).unwrap();
    assert_eq!(
        (grid.num_vertices(), grid.num_edges(), grid.num_faces()),
        (32, 40, 10)
    );
}

#[test]
fn flipped_sign_breaks_euler() {
    let grid = family("grid:3x3", 0);
    for c in 0..grid.crossings.len() {
        let mut file = grid.to_file();
        file.crossings[c].sign *= -1;
        let r = build_planarization(&Arrangement::from_file(&file).unwrap());
        // a corner sits on one bounded face only, so its rotation can still be drawn
        if [0, 2, 6, 8].contains(&c) {
            assert!(r.is_ok(), "corner {c}");
        } else {
            assert!(
                matches!(
                    r,
                    Err(Error::Euler {
                        euler: 0,
                        expected: 2
                    })
                ),
                "crossing {c}"
            );
        }
    }
}

#[test]
fn pseudosegment_validation() {
    assert!(
        validate_pseudosegments(&build_planarization(&family("grid:3x5", 0)).unwrap()).is_empty()
    );
    let lens = validate_pseudosegments(&build_planarization(&family("lens", 0)).unwrap());
    assert!(lens
        .violations
        .iter()
        .any(|v| matches!(v, Violation::DoubleCrossing { .. })));
    let looped = validate_pseudosegments(&build_planarization(&family("loop:2", 0)).unwrap());
    assert!(looped
        .violations
        .iter()
        .any(|v| matches!(v, Violation::SelfCrossing { .. })));
    let ring = check_pseudosegments(&build_planarization(&family("ring:6", 0)).unwrap());
    assert!(ring
        .violations
        .iter()
        .any(|v| matches!(v, Violation::NetPattern(p) if p.contains("square-ring"))));
}

#[test]
fn grounding_curves() {
    let plus = ground(&build_planarization(&Arrangement::parse(PLUS).unwrap()).unwrap()).unwrap();
    assert_eq!(plus.curves.len(), 1);
    assert_eq!(plus.curve_sizes(), vec![4]);
    let grid = ground(&build_planarization(&family("grid:4x4", 0)).unwrap()).unwrap();
    assert_eq!(grid.curve_sizes(), vec![16]);
    // endpoints in three different faces
    let three = ground(&build_planarization(&family("segments:6", 119)).unwrap()).unwrap();
    assert_eq!(three.curves.len(), 3);
}

#[test]
fn components() {
    assert_eq!(
        split_components(&Arrangement::parse(PLUS).unwrap()).len(),
        1
    );
    let mut file = Arrangement::parse(PLUS).unwrap().to_file();
    let mut second = file.clone();
    for s in &mut second.strings {
        s.id += 10;
        s.crossings = vec![5];
    }
    second.crossings[0].id = 5;
    second.crossings[0].strings = vec![10, 11];
    file.strings.extend(second.strings);
    file.crossings.extend(second.crossings);
    let two = Arrangement::from_file(&file).unwrap();
    assert_eq!(split_components(&two).len(), 2);
    assert!(matches!(
        net_of(&build_planarization(&two).unwrap()),
        Err(Error::Disconnected(2))
    ));
    assert_eq!(split_components(&family("grid:4x4", 0)).len(), 1);
}

#[test]
fn nets_and_classes() {
    let plus = net_from(&Arrangement::parse(PLUS).unwrap());
    assert_eq!(
        (
            plus.num_vertices(),
            plus.num_edges(),
            plus.num_squares(),
            plus.hole_count()
        ),
        (4, 4, 1, 1)
    );
    assert!(plus.class.iter().all(|&c| c == VertexClass::Border));
    assert_eq!(
        (
            plus.odd_hole_count(),
            plus.total_exponent(),
            plus.toothed_count()
        ),
        (0, 0, 0)
    );

    let grid = net_from(&family("grid:4x4", 0));
    assert_eq!(
        (
            grid.num_vertices(),
            grid.num_edges(),
            grid.num_squares(),
            grid.hole_count()
        ),
        (25, 40, 16, 1)
    );
    let regular = grid
        .class
        .iter()
        .filter(|&&c| c == VertexClass::Regular)
        .count();
    assert_eq!((regular, 25 - regular), (9, 16));
}

#[test]
fn exponents() {
    let net = net_from(&family("circular-bipartite:8", 1));
    let v = (0..net.num_vertices())
        .find(|&v| net.class[v] == VertexClass::Border && net.degree(v) == 5)
        .unwrap();
    assert_eq!(net.exponent(v), 1);
    assert!(!saturates(&net, &vec![false; net.num_edges()], v));

    let net = net_from(&family("segments:8", 164));
    let h = (0..net.num_vertices())
        .find(|&v| net.class[v] == VertexClass::VertexHole && net.degree(v) == 6)
        .unwrap();
    assert_eq!(net.exponent(h), 3);
    let mut alternate = vec![false; net.num_edges()];
    for (i, &e) in net.map.rotation(h).iter().enumerate() {
        if i % 2 == 0 {
            alternate[bundled::map::edge_of(e)] = true;
        }
    }
    assert!(saturates(&net, &alternate, h));

    // a five-square angle split 2 + 3 still needs one edge
    let marked = [true, false, true, false, false, true];
    let square = [false, true, true, true, true, true];
    assert_eq!(sector_deficit(&marked, &square, false), 1);
    assert_eq!(sector_deficit(&[false; 4], &[true; 4], true), 0);
}

#[test]
fn toothed_detection() {
    for k in 1..=6 {
        let net = net_from(&family(&format!("toothed:{k}"), 0));
        assert_eq!(net.toothed_count(), k);
        assert_eq!(net.hole_count(), k + 1);
    }
    for seed in 0..50 {
        if let Ok(net) = net_of(&build_planarization(&family("circular:6", seed)).unwrap()) {
            assert_eq!(net.toothed_count(), 0, "seed {seed}");
        }
    }
}

#[test]
fn greedy_and_extraction() {
    let plus = net_from(&Arrangement::parse(PLUS).unwrap());
    let cs = greedy_rectangulate(&plus, &CutSet::default(), VertexOrder::ById);
    assert!(cs.is_empty());
    let rect = extract_rectangulation(&plus, &cs).unwrap();
    assert_eq!(rect.r, 1);
    assert_eq!(to_bundling(&plus, &rect).unwrap().bundles, vec![vec![0]]);

    let grid = net_from(&family("c4xc4", 0));
    let rect = extract_rectangulation(
        &grid,
        &greedy_rectangulate(&grid, &CutSet::default(), VertexOrder::ById),
    )
    .unwrap();
    assert_eq!((rect.r, rect.s), (1, 0));
    assert_eq!(to_bundling(&grid, &rect).unwrap().bundles[0].len(), 16);

    for k in 1..=8 {
        let net = net_from(&family(&format!("toothed:{k}"), 0));
        let cs = greedy_rectangulate(&net, &CutSet::default(), VertexOrder::ById);
        assert!(cs.len() <= net.total_exponent());
    }
}

#[test]
fn non_saturating_singleton_is_rejected() {
    let net = net_from(&family("segments:8", 164));
    let full = greedy_rectangulate(&net, &CutSet::default(), VertexOrder::ById);
    let h = (0..net.num_vertices())
        .find(|&v| net.class[v] == VertexClass::VertexHole && net.degree(v) == 6)
        .unwrap();
    let one = full
        .segments
        .iter()
        .find(|s| s.ends().contains(&h))
        .unwrap()
        .clone();
    let single = CutSet::new(vec![one]);
    assert!(!is_saturating(&net, &single));
    assert!(matches!(
        extract_rectangulation(&net, &single),
        Err(Error::NotSaturating { .. })
    ));
}

#[test]
fn delimiting_cutsets() {
    let net = net_from(&family("grid:2x2", 0));
    let rects = candidate_rectangles(&net);
    let halves: Vec<u64> = rects
        .iter()
        .copied()
        .filter(|m| m.count_ones() == 2)
        .collect();
    let (a, b) = halves
        .iter()
        .flat_map(|&a| halves.iter().map(move |&b| (a, b)))
        .find(|(a, b)| a & b == 0 && (a | b) == 0b1111)
        .unwrap();
    let rect_of: Vec<usize> = (0..4)
        .map(|c| usize::from(b & (1 << c) != 0 && a & (1 << c) == 0))
        .collect();
    let r = rectangulation_from_partition(&net, &rect_of).unwrap();
    assert_eq!((r.r, r.s), (2, 1));
    assert!(delimiting_cutset(&net, &[0; 4], TieBreak::LowestId).is_empty());
}

#[test]
fn gamma_counts_on_six_bundle_instance() {
    let net = net_from(&family("circular:8", 56));
    let rect = extract_rectangulation(
        &net,
        &greedy_rectangulate(&net, &CutSet::default(), VertexOrder::ById),
    )
    .unwrap();
    let g = gamma_checks(&net, &rect);
    assert_eq!((g.vertices, g.edges, g.faces), (20, 30, 12));
    assert!(g.passed());

    let plus = net_from(&Arrangement::parse(PLUS).unwrap());
    let r = extract_rectangulation(&plus, &CutSet::default()).unwrap();
    let g = gamma_checks(&plus, &r);
    assert!(g.degenerate && g.passed());
}

#[test]
fn weak_and_strong() {
    let net = net_from(&family("circular-bipartite:8", 1));
    let v = (0..net.num_vertices())
        .find(|&v| net.class[v] == VertexClass::Border && net.degree(v) == 5)
        .unwrap();
    let border: Vec<Color> = net
        .map
        .rotation(v)
        .iter()
        .map(|&h| bundled::map::edge_of(h))
        .filter(|&e| net.is_border_edge(e))
        .map(|e| net.edge_color[e].unwrap())
        .collect();
    let c = border[0];
    assert!(border.iter().all(|&x| x == c));
    // weak for the color its border edges are not, strong for their own
    assert_eq!(
        classify_weak_strong(&net, c.other())[v],
        Some(Strength::Weak)
    );
    assert_eq!(classify_weak_strong(&net, c)[v], Some(Strength::Strong));
}

#[test]
fn blue_segment_sets() {
    let grid = net_from(&family("grid:4x4", 0));
    // one straight path per gap between consecutive rows
    let b = blue_segments(&grid, Color::Blue);
    assert_eq!(b.len(), 3);
    assert!(b
        .iter()
        .all(|s| grid.class[s.start] == VertexClass::Border
            && grid.class[s.end] == VertexClass::Border));
    let plus = net_from(&Arrangement::parse(PLUS).unwrap());
    assert!(blue_segments(&plus, Color::Blue).is_empty());
    assert_eq!(gain_def(&grid, &[]).g, 0);
}

#[test]
fn nullity_of_shapes() {
    let eight = GainGraph::from_parts(
        Color::Blue,
        vec![false; 5],
        vec![(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)],
    );
    assert_eq!(eight.bicircular(&[0, 1, 2, 3, 4, 5]), (5, 1));
    let forest = GainGraph::from_parts(Color::Blue, vec![false; 4], vec![(0, 1), (1, 2), (2, 3)]);
    assert_eq!(forest.bicircular(&[0, 1, 2]).1, 0);
    let cycle = GainGraph::from_parts(Color::Blue, vec![false; 3], vec![(0, 1), (1, 2), (2, 0)]);
    assert_eq!(cycle.bicircular(&[0, 1, 2]), (3, 0));
    // theta with a pendant path: pruning keeps just the theta
    let theta = GainGraph::from_parts(
        Color::Blue,
        vec![false; 7],
        vec![
            (0, 2),
            (2, 1),
            (0, 3),
            (3, 1),
            (0, 4),
            (4, 1),
            (1, 5),
            (5, 6),
        ],
    );
    assert_eq!(theta.max_gain_set(), vec![0, 1, 2, 3, 4, 5]);
}

#[test]
fn pipeline_beats_plain_greedy() {
    let net = net_from(&family("circular-bipartite:10", 6));
    let plain = greedy_rectangulate(&net, &CutSet::default(), VertexOrder::ById);
    let seeded = bipartite_pipeline(&net, VertexOrder::ById).unwrap();
    assert!(seeded.gain > 0);
    assert!(seeded.cutset.len() < plain.len());

    let grid = net_from(&family("grid:4x4", 0));
    let r = bipartite_pipeline(&grid, VertexOrder::ById).unwrap();
    assert_eq!((r.seed_size, r.rectangulation.r), (0, 1));
}

#[test]
fn split_gain_holds() {
    for seed in 0..40 {
        let Ok(net) = net_of(&build_planarization(&family("circular-bipartite:8", seed)).unwrap())
        else {
            continue;
        };
        let greedy = greedy_rectangulate(&net, &CutSet::default(), VertexOrder::ById);
        assert!(split_gain_check(&net, &greedy).holds(), "seed {seed}");
        if net.num_squares() <= 20 {
            let opt = brute_force_min_rectangulation(&net, 20).unwrap();
            assert!(
                split_gain_check(&net, &opt.witness.cutset).holds(),
                "seed {seed}"
            );
        }
    }
    let grid = net_from(&family("grid:3x3", 0));
    let s = split_gain_check(&grid, &CutSet::default());
    assert_eq!((s.g, s.g_blue, s.g_red), (0, 0, 0));
}

#[test]
fn oracle_values() {
    let plus = net_from(&Arrangement::parse(PLUS).unwrap());
    let o = brute_force_min_rectangulation(&plus, 20).unwrap();
    assert_eq!((o.r_opt, o.s_opt), (1, 0));
    let report = verify_inequalities(
        &o,
        0,
        RunSummary { r: 1, s: 0 },
        Some(RunSummary { r: 1, s: 0 }),
    );
    assert!(report.all_hold());

    let net = net_from(&Arrangement::parse(include_str!("fixtures/delta_four.json")).unwrap());
    assert_eq!(brute_force_min_rectangulation(&net, 20).unwrap().delta, 4);
}

#[test]
fn toothed_hole_bound_slack() {
    for k in 1..=6 {
        let net = net_from(&family(&format!("toothed:{k}"), 0));
        let o = brute_force_min_rectangulation(&net, 30).unwrap();
        let rect = extract_rectangulation(
            &net,
            &greedy_rectangulate(&net, &CutSet::default(), VertexOrder::ById),
        )
        .unwrap();
        let rep = verify_inequalities(
            &o,
            net.total_exponent(),
            RunSummary {
                r: rect.r,
                s: rect.s,
            },
            None,
        );
        let c = rep.get("h_le_6r_opt_t_4").unwrap();
        // H = k + 1 against 6 * 2 + k - 4: constant slack 7
        assert_eq!(c.slack(), 7.0);
        assert!(rep.all_hold());
    }
}

#[test]
fn generator_determinism() {
    let a = family("circular:4", 7).to_json();
    assert_eq!(a, family("circular:4", 7).to_json());
    assert_ne!(a, family("circular:4", 8).to_json());
}

#[test]
fn harness_bilaminar_cross_check() {
    use bundled::harness::*;
    let cfg = HarnessConfig {
        suites: vec![
            Suite {
                family: "bilaminar:12".into(),
                count: 30,
                seed: 0,
            },
            Suite {
                family: "ring:3".into(),
                count: 2,
                seed: 0,
            },
            Suite {
                family: "loop:2".into(),
                count: 2,
                seed: 0,
            },
        ],
        oracle_cap: 20,
        bipartite: true,
        random_order: false,
    };
    let rep = run_harness(&cfg).unwrap();
    assert!(rep.failures().is_empty(), "{}", rep.summary());
    assert_eq!(rep.count(|o| matches!(o, Outcome::Rejected(_))), 4);
}
