//! Randomized invariants: graph primitives against independent references,
//! canonical-code invariance, belief-layer consistency, oracle agreement,
//! and determinism of full dynamics runs.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use swapgames::analysis::{is_equilibrium, unhappy_players};
use swapgames::canonical::{canonical, prufer_decode, CodeKind};
use swapgames::instances::{gen_random_connected, gen_random_tree};
use swapgames::io::{read_edge_list, read_trace, write_edge_list, write_trace};
use swapgames::{
    best_response_scored, delta, extract_view, is_unhappy, oracle_delta, oracle_exact_budget, run,
    Attitude, CostKind, DeltaMode, ExecMode, ExtInt, Graph, Outcome, PlayerModel, Scheduler,
};

const ATTITUDES: [Attitude; 3] = [
    Attitude::Pessimistic,
    Attitude::WeaklyPessimistic,
    Attitude::Optimistic,
];
const KINDS: [CostKind; 2] = [CostKind::Sum, CostKind::Max];

/// Independent all-pairs reference: Floyd–Warshall over an adjacency matrix.
fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<u64>>> {
    let n = g.n();
    let mut d: Vec<Vec<Option<u64>>> = vec![vec![None; n]; n];
    for v in 0..n {
        d[v][v] = Some(0);
    }
    for (u, v) in g.edges() {
        d[u][v] = Some(1);
        d[v][u] = Some(1);
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][m], d[m][j]) {
                    if d[i][j].map_or(true, |c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

fn arb_connected() -> impl Strategy<Value = Graph> {
    (2usize..=9, 0usize..=4, any::<u64>()).prop_map(|(n, extra, seed)| {
        let max = n * (n - 1) / 2;
        let m = (n - 1 + extra).min(max);
        gen_random_connected(n, m, seed).expect("parameters in range")
    })
}

fn arb_tree() -> impl Strategy<Value = Graph> {
    (2usize..=9, any::<u64>()).prop_map(|(n, seed)| gen_random_tree(n, seed).expect("n >= 1"))
}

fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (perm[u], perm[v])).collect();
    Graph::new(g.n(), edges).expect("permutation preserves simple edges")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bfs_distances_match_floyd_warshall(g in arb_connected()) {
        let reference = floyd_warshall(&g);
        for u in 0..g.n() {
            let dist = g.distances_from(u);
            for v in 0..g.n() {
                let expected = reference[u][v].map_or(ExtInt::PosInf, |d| ExtInt::Fin(d as i64));
                prop_assert_eq!(dist[v], expected, "dist({}, {})", u, v);
            }
        }
    }

    #[test]
    fn unlabeled_code_is_relabeling_invariant(g in arb_tree(), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let h = relabel(&g, &perm);
        let code_g = canonical(&g, CodeKind::UnlabeledTree).unwrap();
        let code_h = canonical(&h, CodeKind::UnlabeledTree).unwrap();
        prop_assert_eq!(code_g.bytes, code_h.bytes);
    }

    #[test]
    fn generator_sequences_decode_to_trees(n in 3usize..=9, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seq: Vec<usize> = (0..n - 2)
            .map(|_| rand::Rng::gen_range(&mut rng, 0..n))
            .collect();
        let g = prufer_decode(&seq).unwrap();
        prop_assert_eq!(g.n(), n);
        prop_assert!(g.is_tree());
    }

    #[test]
    fn edge_list_roundtrips(g in arb_connected()) {
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let back = read_edge_list(buf.as_slice()).unwrap();
        prop_assert_eq!(g, back);
    }

    #[test]
    fn view_members_are_the_radius_ball(g in arb_connected(), u_raw in 0usize..9, k in 1usize..=4) {
        let u = u_raw % g.n();
        let view = extract_view(&g, u, k);
        let dist = g.distances_from(u);
        for v in 0..g.n() {
            let inside = matches!(dist[v], ExtInt::Fin(d) if d <= k as i64);
            prop_assert_eq!(view.members().contains(&v), inside);
        }
        for f in view.frontier() {
            prop_assert_eq!(dist[f], ExtInt::Fin(k as i64));
        }
        for (a, b) in view.edges() {
            prop_assert!(g.has_edge(a, b), "view edge {{{a}, {b}}} missing in graph");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn worst_case_never_exceeds_best_case(
        g in arb_tree(),
        u_raw in 0usize..9,
        k in 1usize..=4,
    ) {
        let u = u_raw % g.n();
        let view = extract_view(&g, u, k);
        for swap in view.candidate_swaps() {
            for kind in KINDS {
                let worst = delta(&view, &swap, kind, DeltaMode::Worst).unwrap();
                let best = delta(&view, &swap, kind, DeltaMode::Best).unwrap();
                prop_assert!(worst <= best, "swap {:?} kind {}: {} > {}", swap, kind, worst, best);
            }
        }
    }

    #[test]
    fn accepted_moves_preserve_connectivity(
        g in arb_connected(),
        k in 1usize..=3,
    ) {
        for attitude in ATTITUDES {
            for kind in KINDS {
                let model = PlayerModel::new(attitude, kind, k);
                for u in 0..g.n() {
                    if let Some(swap) = is_unhappy(&g, u, &model) {
                        let h = g.apply_swap(swap.mover, swap.remove, swap.add).unwrap();
                        prop_assert!(
                            h.is_connected(),
                            "{model} move {swap:?} disconnected the graph"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn witness_and_best_response_agree(
        g in arb_tree(),
        u_raw in 0usize..9,
        k in 1usize..=3,
    ) {
        let u = u_raw % g.n();
        for attitude in ATTITUDES {
            for kind in KINDS {
                let model = PlayerModel::new(attitude, kind, k);
                let witness = is_unhappy(&g, u, &model);
                let best = best_response_scored(&g, u, &model);
                prop_assert_eq!(witness.is_some(), best.is_some());
                if let Some((_, score)) = best {
                    match attitude {
                        Attitude::Pessimistic => prop_assert!(score > ExtInt::ZERO),
                        Attitude::WeaklyPessimistic => {
                            prop_assert!(score >= ExtInt::ZERO && score.is_finite())
                        }
                        Attitude::Optimistic => prop_assert!(score > ExtInt::ZERO),
                    }
                }
            }
        }
    }

    #[test]
    fn parallel_and_sequential_scans_agree(g in arb_connected(), k in 1usize..=3) {
        let model = PlayerModel::new(Attitude::WeaklyPessimistic, CostKind::Sum, k);
        let a = unhappy_players(&g, &model, ExecMode::Auto);
        let b = unhappy_players(&g, &model, ExecMode::Sequential);
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn closed_form_matches_oracle_at_exactness_budget(
        g in arb_tree(),
        u_raw in 0usize..9,
        k in 2usize..=3,
        pick in any::<u64>(),
    ) {
        let u = u_raw % g.n();
        let view = extract_view(&g, u, k);
        let candidates = view.candidate_swaps();
        prop_assume!(!candidates.is_empty());
        let swap = candidates[(pick % candidates.len() as u64) as usize];
        for kind in KINDS {
            let budget = oracle_exact_budget(&view, &swap).unwrap();
            let bounds = oracle_delta(&view, &swap, kind, budget).unwrap();
            let worst = delta(&view, &swap, kind, DeltaMode::Worst).unwrap();
            let best = delta(&view, &swap, kind, DeltaMode::Best).unwrap();
            prop_assert_eq!(bounds.min, worst, "kind {} swap {:?}", kind, swap);
            prop_assert_eq!(bounds.max, best, "kind {} swap {:?}", kind, swap);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn runs_are_deterministic_and_equilibria_are_stable(
        g in arb_tree(),
        seed in any::<u64>(),
        attitude_pick in 0usize..3,
        kind_pick in 0usize..2,
        k in 2usize..=3,
    ) {
        let model = PlayerModel::new(ATTITUDES[attitude_pick], KINDS[kind_pick], k);
        let budget = swapgames::default_max_steps(g.n());
        let first = run(&g, &model, Scheduler::random(seed), budget).unwrap();
        let second = run(&g, &model, Scheduler::random(seed), budget).unwrap();
        prop_assert_eq!(&first.outcome, &second.outcome);
        prop_assert_eq!(first.final_graph.edges().collect::<Vec<_>>(),
            second.final_graph.edges().collect::<Vec<_>>());
        if let Outcome::Equilibrium { .. } = first.outcome {
            let (stable, unhappy) = is_equilibrium(&first.final_graph, &model);
            prop_assert!(stable, "equilibrium verdict but {unhappy:?} still unhappy");
        }
        // Every intermediate state stays connected and keeps the player count.
        for ev in &first.trace {
            prop_assert_eq!(ev.moves.len(), 1, "single-player scheduler");
        }
    }

    #[test]
    fn pessimistic_tree_runs_never_violate_the_potential(
        g in arb_tree(),
        kind_pick in 0usize..2,
        k in 2usize..=3,
    ) {
        let model = PlayerModel::new(Attitude::Pessimistic, KINDS[kind_pick], k);
        let budget = swapgames::default_max_steps(g.n());
        // The monitor inside `run` turns any potential increase into an error.
        let result = run(&g, &model, Scheduler::round_robin(g.n()), budget).unwrap();
        let terminated_normally = matches!(
            result.outcome,
            Outcome::Equilibrium { .. } | Outcome::Cycle { .. } | Outcome::BudgetExhausted { .. }
        );
        prop_assert!(terminated_normally, "unexpected outcome {:?}", result.outcome);
    }

    #[test]
    fn traces_roundtrip_through_jsonl(g in arb_tree(), seed in any::<u64>()) {
        let model = PlayerModel::new(Attitude::WeaklyPessimistic, CostKind::Sum, 2);
        let budget = swapgames::default_max_steps(g.n());
        let result = run(&g, &model, Scheduler::random(seed), budget).unwrap();
        let mut buf = Vec::new();
        write_trace(&result.trace, &mut buf).unwrap();
        let back = read_trace(buf.as_slice()).unwrap();
        prop_assert_eq!(result.trace, back);
    }
}
