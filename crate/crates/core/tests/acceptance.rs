//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero if any fail.
//!
//! Set `USTLAB_ACCEPT=3,7` to run a subset.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use ustlab::exact::{brute_force_tree_enumeration, cylinder_probability, exact_lerw_law, mu3_exact_law, uniform_tree_law, ExactProb};
use ustlab::experiments::{
    central_edge, connection_probability, derive_seed, fit_power_law, free_wired_gap, green_function_scaling,
    intersection_moments, intersection_probability, intersection_sweep, separator_probability, Boundary, Budgets,
    EstimateResult, GreenMethod, Placement,
};
use ustlab::lattice::{complete_graph, cycle_graph, rect_grid, EdgeId, LatticeBox, MultiGraph, VertexId};
use ustlab::walks::{aldous_broder_tree, reversed_lerw_sample, tree_path_matches_erasure, verify_fiber_multisets, PathSeq, RngStream};

const SEED: u64 = 20_261_017;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn fmt_est(e: &EstimateResult) -> String {
    format!("{:.5}±{:.5}", e.mean, e.stderr)
}

fn censored_ok(es: &[&EstimateResult]) -> bool {
    es.iter().all(|e| e.censored < 0.05)
}

/// Connected simple graphs on 2..=5 vertices, one per isomorphism class.
fn small_connected_graphs() -> Vec<MultiGraph> {
    let mut out = Vec::new();
    for n in 2..=5usize {
        let pairs: Vec<(u32, u32)> = (0..n as u32).flat_map(|a| (a + 1..n as u32).map(move |b| (a, b))).collect();
        let perms = permutations(n);
        let mut seen = BTreeSet::new();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<(u32, u32)> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e).collect();
            let canon = perms
                .iter()
                .map(|p| {
                    let mut e: Vec<(u32, u32)> = edges
                        .iter()
                        .map(|&(a, b)| {
                            let (x, y) = (p[a as usize], p[b as usize]);
                            (x.min(y), x.max(y))
                        })
                        .collect();
                    e.sort();
                    e
                })
                .min()
                .unwrap();
            if !seen.insert(canon) {
                continue;
            }
            let g = MultiGraph::from_edges(n, edges).unwrap();
            if g.is_connected() {
                out.push(g);
            }
        }
    }
    out
}

/// All permutations of `0..n`, by repeated insertion.
fn permutations(n: usize) -> Vec<Vec<u32>> {
    let mut all = vec![vec![]];
    for k in 0..n as u32 {
        let mut next = Vec::new();
        for p in &all {
            for pos in 0..=p.len() {
                let mut q: Vec<u32> = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        all = next;
    }
    all
}

fn criterion_1() -> Outcome {
    let mut corpus = small_connected_graphs();
    let simple = corpus.len();
    corpus.push(MultiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 1)]).unwrap());
    corpus.push(rect_grid(&[2, 3]).unwrap());
    corpus.push(complete_graph(4));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0;
    for g in &corpus {
        let uniform = uniform_tree_law(g).unwrap();
        let forward: Vec<EdgeId> = g.edge_ids().collect();
        let mut orders = vec![forward.clone(), forward.iter().rev().copied().collect()];
        let mut shuffled = forward;
        shuffled.shuffle(&mut rng);
        orders.push(shuffled);
        for order in &orders {
            if mu3_exact_law(g, order).unwrap() != uniform {
                return outcome(false, format!("law mismatch on graph with edges {:?}", g.edges()));
            }
            checked += 1;
        }
    }
    outcome(corpus.len() >= 20, format!("{} graphs ({simple} simple classes), {checked} enumerations, all laws equal", corpus.len()))
}

fn criterion_2() -> Outcome {
    let g = rect_grid(&[2, 3]).unwrap();
    let trees = brute_force_tree_enumeration(&g).unwrap();
    let index: BTreeMap<Vec<EdgeId>, usize> = trees.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let samples = 150_000u64;
    let chi = ChiSquared::new((trees.len() - 1) as f64).unwrap();
    let mut ps = Vec::new();
    for s in 0..3 {
        let mut counts = vec![0u64; trees.len()];
        for i in 0..samples {
            let mut rng = RngStream::new(SEED + s, i);
            let mut t = aldous_broder_tree(&g, VertexId(0), &mut rng).unwrap().edges();
            t.sort();
            counts[index[&t]] += 1;
        }
        let expected = samples as f64 / trees.len() as f64;
        let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        ps.push(1.0 - chi.cdf(stat));
    }
    let passing = ps.iter().filter(|&&p| p > 1e-3).count();
    outcome(trees.len() == 15 && passing >= 2, format!("{} trees, p-values {:?}, {passing}/3 pass", trees.len(), ps.iter().map(|p| format!("{p:.3}")).collect::<Vec<_>>()))
}

fn criterion_3() -> Outcome {
    let graphs = [
        (complete_graph(4), 0, 3),
        (rect_grid(&[2, 3]).unwrap(), 0, 5),
        (cycle_graph(5), 0, 2),
        (MultiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 1)]).unwrap(), 1, 3),
        (LatticeBox::new(2, 1).unwrap().graph().clone(), 0, 8),
    ];
    let mut failures = 0;
    let mut total = 0;
    for (k, (g, v, w)) in graphs.iter().enumerate() {
        for i in 0..2000 {
            let mut rng = RngStream::new(derive_seed(SEED, k as u64), i);
            if !tree_path_matches_erasure(g, VertexId(*v), VertexId(*w), &mut rng).unwrap() {
                failures += 1;
            }
            total += 1;
        }
    }
    outcome(failures == 0, format!("{total} walks on 5 graphs, {failures} failures"))
}

fn criterion_4() -> Outcome {
    let rows = free_wired_gap(2, &[central_edge(2)], 1, &[1, 2, 3, 4]).unwrap();
    let free_mono = rows.windows(2).all(|w| w[1].free <= w[0].free);
    let sandwich = rows.iter().all(|r| r.wired <= r.free);
    let gaps: Vec<ExactProb> = rows[1..].iter().map(|r| r.gap()).collect();
    let gap_mono = gaps.windows(2).all(|w| w[1] < w[0]);
    let show: Vec<String> = rows.iter().map(|r| format!("n={} free={} wired={}", r.n, r.free.fraction(), r.wired.fraction())).collect();
    outcome(free_mono && sandwich && gap_mono, format!("free nonincreasing={free_mono}, wired<=free={sandwich}, gap decreasing={gap_mono}; {}", show.join("; ")))
}

fn random_graph(rng: &mut ChaCha8Rng) -> MultiGraph {
    let n = rng.gen_range(3..=7u32);
    let mut edges: Vec<(u32, u32)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    let extra = rng.gen_range(1..=12 - edges.len());
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.push((a, b));
        }
    }
    MultiGraph::from_edges(n as usize, edges).unwrap()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut graphs = 0;
    let mut violations = 0;
    while graphs < 100 {
        let g = random_graph(&mut rng);
        let m = g.edge_count();
        let non_bridges: Vec<EdgeId> = g.edge_ids().filter(|&e| !g.is_bridge(e).unwrap()).collect();
        if non_bridges.is_empty() {
            continue;
        }
        let e = *non_bridges.choose(&mut rng).unwrap();
        let size = rng.gen_range(1..=3.min(m - 1));
        let a: Vec<EdgeId> = g.edge_ids().filter(|&f| f != e).collect::<Vec<_>>().choose_multiple(&mut rng, size).copied().collect();
        let p = cylinder_probability(&g, &a).unwrap();
        let (del, dm) = g.delete(e).unwrap();
        let p_del = cylinder_probability(&del, &a.iter().map(|&f| dm.edge(f).unwrap()).collect::<Vec<_>>()).unwrap();
        let (con, cm) = g.contract(e).unwrap();
        let mapped: Option<Vec<EdgeId>> = a.iter().map(|&f| cm.edge(f)).collect();
        let p_con = match mapped {
            Some(a2) => cylinder_probability(&con, &a2).unwrap(),
            None => ExactProb::zero(),
        };
        if !(p_del >= p && p >= p_con) {
            violations += 1;
        }
        graphs += 1;
    }
    outcome(violations == 0, format!("{graphs} graphs, {violations} violations"))
}

fn self_avoiding_paths(g: &MultiGraph, max_len: usize) -> Vec<PathSeq<VertexId>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<VertexId>> = g.vertices().map(|v| vec![v]).collect();
    while let Some(p) = stack.pop() {
        if p.len() <= max_len {
            let last = *p.last().unwrap();
            let next: BTreeSet<VertexId> = g.neighbors(last).iter().map(|(u, _)| *u).filter(|u| !p.contains(u)).collect();
            for u in next {
                let mut q = p.clone();
                q.push(u);
                stack.push(q);
            }
        }
        out.push(PathSeq::new(p));
    }
    out
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    for g in [cycle_graph(4), complete_graph(4)] {
        for alpha in self_avoiding_paths(&g, 3) {
            for m in 0..=7 {
                if !verify_fiber_multisets(&g, &alpha, m).unwrap() {
                    return outcome(false, format!("fiber mismatch for {:?} at m={m}", alpha.vertices()));
                }
                checked += 1;
            }
        }
    }
    let g = complete_graph(4);
    let (s, t) = (VertexId(0), VertexId(3));
    let law = exact_lerw_law(&g, s, t).unwrap();
    let samples = 1_000_000u64;
    let mut counts: BTreeMap<Vec<VertexId>, u64> = BTreeMap::new();
    for i in 0..samples {
        let mut rng = RngStream::new(SEED, i);
        *counts.entry(reversed_lerw_sample(&g, s, t, &mut rng).unwrap().into_vertices()).or_default() += 1;
    }
    let keys: BTreeSet<&Vec<VertexId>> = law.support.keys().chain(counts.keys()).collect();
    let tv = 0.5
        * keys
            .into_iter()
            .map(|k| (law.probability(k).to_f64() - *counts.get(k).unwrap_or(&0) as f64 / samples as f64).abs())
            .sum::<f64>();
    outcome(tv < 0.01, format!("{checked} (alpha, m) fiber checks; reversed erasure on K4 TV={tv:.5} over {samples} samples"))
}

fn criterion_7() -> Outcome {
    let rs = [2u32, 4, 8, 16];
    let ests: Vec<EstimateResult> = rs
        .iter()
        .enumerate()
        .map(|(i, &r)| intersection_probability(5, r, 100_000, 10_000, derive_seed(SEED, i as u64)).unwrap())
        .collect();
    let pts: Vec<(f64, f64, f64)> = rs.iter().zip(&ests).map(|(&r, e)| (r as f64, e.mean, e.stderr)).collect();
    let fit = fit_power_law(&pts).unwrap();
    let ok = (-1.35..=-0.65).contains(&fit.slope) && censored_ok(&ests.iter().collect::<Vec<_>>());
    outcome(ok, format!("slope {:.3}±{:.3}; P = {}", fit.slope, fit.slope_stderr, ests.iter().map(fmt_est).collect::<Vec<_>>().join(", ")))
}

fn criterion_8() -> Outcome {
    let reps = 5000;
    let d3 = intersection_sweep(3, 4, &[100, 1000, 10_000], reps, derive_seed(SEED, 3)).unwrap();
    let d5 = intersection_probability(5, 4, 10_000, reps, derive_seed(SEED, 5)).unwrap();
    let sep = d3[2].separation(&d5);
    let mono = d3.windows(2).all(|w| w[1].mean >= w[0].mean);
    outcome(sep >= 3.0 && mono, format!("d=3 {} vs d=5 {} ({sep:.1}σ); d=3 over M: {}", fmt_est(&d3[2]), fmt_est(&d5), d3.iter().map(fmt_est).collect::<Vec<_>>().join(" <= ")))
}

fn criterion_9() -> Outcome {
    let rs = [2u32, 4, 8];
    let mut pz = true;
    let mut exs = Vec::new();
    let mut notes = Vec::new();
    for (i, &r) in rs.iter().enumerate() {
        let mo = intersection_moments(5, r, 10_000, 20_000, derive_seed(SEED, i as u64)).unwrap();
        pz &= mo.paley_zygmund_holds(3.0);
        notes.push(format!("r={r}: P(X>0)={} >= {:.4}±{:.4}, EX={}", fmt_est(&mo.p_positive), mo.pz_bound, mo.pz_stderr, fmt_est(&mo.ex)));
        exs.push(mo.ex.mean);
    }
    let halves = exs.windows(2).all(|w| (w[1] / w[0] - 0.5).abs() <= 0.25);
    outcome(pz && halves, format!("PZ={pz}, EX halving={halves}; {}", notes.join("; ")))
}

fn criterion_10() -> Outcome {
    let budgets = Budgets::default();
    let rs = [2u32, 4, 8];
    let reps = 40_000;
    let ests: Vec<EstimateResult> = rs
        .iter()
        .enumerate()
        .map(|(i, &r)| connection_probability(5, 4 * r, r, u64::MAX, Boundary::Wired, reps, derive_seed(SEED, i as u64), &budgets).unwrap())
        .collect();
    let pts: Vec<(f64, f64, f64)> = rs.iter().zip(&ests).map(|(&r, e)| (r as f64, e.mean, e.stderr)).collect();
    let fit = fit_power_law(&pts).unwrap();
    let m = 10_000;
    let d3 = connection_probability(3, 16, 4, m, Boundary::Wired, 4000, derive_seed(SEED, 30), &budgets).unwrap();
    let d5 = connection_probability(5, 16, 4, m, Boundary::Wired, 4000, derive_seed(SEED, 50), &budgets).unwrap();
    let sep = d3.separation(&d5);
    let ok = (-1.5..=-0.5).contains(&fit.slope) && sep >= 3.0 && censored_ok(&[&ests[0], &ests[1], &ests[2], &d3, &d5]);
    outcome(ok, format!("d=5 slope {:.3}±{:.3} ({}); r=4 M={m}: d=3 {} vs d=5 {} ({sep:.1}σ)", fit.slope, fit.slope_stderr, ests.iter().map(fmt_est).collect::<Vec<_>>().join(", "), fmt_est(&d3), fmt_est(&d5)))
}

fn criterion_11() -> Outcome {
    let budgets = Budgets::default();
    let cap = 84; // (2n+1)^3 ≤ 5e6
    let plan = [(4u32, 4000u64), (8, 8000), (16, 2000)];
    let ests: Vec<(u32, u32, EstimateResult)> = plan
        .iter()
        .enumerate()
        .map(|(i, &(l, reps))| {
            let n = (8 * l).min(cap);
            (l, n, separator_probability(3, n, &Placement::collinear(3, l), u64::MAX, reps, derive_seed(SEED, i as u64), &budgets).unwrap())
        })
        .collect();
    let seps: Vec<f64> = ests.windows(2).map(|w| w[0].2.separation(&w[1].2)).collect();
    let ok = seps.iter().all(|s| *s >= 3.0) && censored_ok(&ests.iter().map(|x| &x.2).collect::<Vec<_>>());
    let show: Vec<String> = ests.iter().map(|(l, n, e)| format!("L={l} n={n}: {}", fmt_est(e))).collect();
    outcome(ok, format!("{}; adjacent separations {:?}", show.join(", "), seps.iter().map(|s| format!("{s:.1}σ")).collect::<Vec<_>>()))
}

fn criterion_12() -> Outcome {
    let g3 = green_function_scaling(3, &[2, 4, 8, 16], 64, 20_000, derive_seed(SEED, 3), GreenMethod::MonteCarlo).unwrap();
    let g5 = green_function_scaling(5, &[4, 8, 16], 64, 400_000, derive_seed(SEED, 5), GreenMethod::MonteCarlo).unwrap();
    let ok = (-1.3..=-0.7).contains(&g3.fit.slope) && (-3.6..=-2.4).contains(&g5.fit.slope);
    outcome(ok, format!("d=3 slope {:.3}±{:.3}; d=5 slope {:.3}±{:.3}", g3.fit.slope, g3.fit.slope_stderr, g5.fit.slope, g5.fit.slope_stderr))
}

fn main() {
    let criteria: [(u8, &str, fn() -> Outcome); 12] = [
        (1, "exact measure equivalence", criterion_1),
        (2, "Aldous-Broder uniformity", criterion_2),
        (3, "tree path equals reversed erasure", criterion_3),
        (4, "free/wired monotonicity and sandwich", criterion_4),
        (5, "Rayleigh minor monotonicity", criterion_5),
        (6, "reversal fibers and reversed erasure law", criterion_6),
        (7, "intersection slope d=5", criterion_7),
        (8, "dimension ordering of intersections", criterion_8),
        (9, "second-moment structure", criterion_9),
        (10, "connection scaling", criterion_10),
        (11, "separator decay", criterion_11),
        (12, "Green's function scaling", criterion_12),
    ];
    let only: Option<Vec<u8>> = std::env::var("USTLAB_ACCEPT").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = 0;
    for (id, name, f) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let t = Instant::now();
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} {id:>2} {name}: {} [{:.1}s]", o.detail, t.elapsed().as_secs_f64());
        failed += !o.pass as u32;
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
