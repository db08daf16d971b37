//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N [PASS|FAIL] ...` line. Run with
//! `cargo test -p rainbow-core --release --test acceptance -- --nocapture --test-threads 1`.

mod common;

use std::time::{Duration, Instant};

use common::*;
use rainbow_core::decomposition::{
    check_lemma6, chernoff_bounds, decompose, decompose_with, f_lower_bound, g_lower_bound, partition_x,
    pseudocolor_classes, threshold_m, x_lower_bound, DecompositionParams,
};
use rainbow_core::generators::{gen_complete, gen_complete_bipartite, Coloring};
use rainbow_core::harness::{emit_csv, emit_json, run_experiment_with, ExperimentSpec, Family, Outputs};
use rainbow_core::partitions::{random_partition_with_parts, set_partitions};
use rainbow_core::rainbow::{has_rainbow_spanning_tree, max_rainbow_forest, schrijver_bruteforce};
use rainbow_core::spectral::{check_cheeger_inequality, spectrum};
use rainbow_core::{EdgeColoredGraph, Exec, VertexPartition};
use rand::Rng;
use rand_distr::{Binomial, Distribution};

fn report(id: usize, title: &str, pass: bool, detail: String) {
    println!(
        "criterion {id:>2} [{}] {title}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} failed: {detail}");
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let elapsed = start.elapsed();
    (
        elapsed < limit,
        format!("{:.2}s of {}s", elapsed.as_secs_f64(), limit.as_secs()),
    )
}

#[test]
fn criterion_01_schrijver_equivalence() {
    let start = Instant::now();
    let mut rng = rng(101);
    let mut agree = 0;
    let mut with_rst = 0;
    let total = 500;
    for _ in 0..total {
        let n = rng.random_range(1..=7);
        let p = rng.random_range(0.15..=1.0);
        let g = random_colored_graph(&mut rng, n, p);
        let fast = has_rainbow_spanning_tree(&g);
        let slow = schrijver_bruteforce(&g).unwrap().has_rst;
        agree += usize::from(fast == slow);
        with_rst += usize::from(slow);
    }
    let (fast_enough, time) = within(Duration::from_secs(120), start);
    report(
        1,
        "matroid intersection vs partition criterion",
        agree == total && fast_enough,
        format!("{agree}/{total} agree ({with_rst} with a rainbow spanning tree), {time}"),
    );
}

#[test]
fn criterion_02_max_forest_oracle() {
    let start = Instant::now();
    let mut rng = rng(202);
    let total = 200;
    let mut agree = 0;
    let mut valid = 0;
    let mut made = 0;
    while made < total {
        let n = rng.random_range(2..=8);
        let density = rng.random_range(0.2..=0.9);
        let g = random_colored_graph(&mut rng, n, density);
        if g.num_edges() > 12 {
            continue;
        }
        made += 1;
        let forest = max_rainbow_forest(&g);
        valid += usize::from(forest.is_valid_in(&g));
        agree += usize::from(forest.size() == exhaustive_max_rainbow_forest(&g));
    }
    let (fast_enough, time) = within(Duration::from_secs(120), start);
    report(
        2,
        "max rainbow forest vs exhaustive search",
        agree == total && valid == total && fast_enough,
        format!("{agree}/{total} sizes agree, {valid}/{total} valid, {time}"),
    );
}

#[test]
fn criterion_03_spectral_exactness() {
    let tol = 1e-9;
    let mut bip_bad = Vec::new();
    let mut bip_checked = 0;
    for a in 1..20 {
        for b in 1..=20 - a {
            // K_{1,1} = K_2 has spectrum {0, 2}
            if a + b < 3 {
                continue;
            }
            bip_checked += 1;
            let l1 = spectrum(&gen_complete_bipartite(a, b)).unwrap().lambda1;
            if (l1 - 1.0).abs() > tol {
                bip_bad.push((a, b, l1));
            }
        }
    }
    let k11 = spectrum(&gen_complete_bipartite(1, 1)).unwrap().lambda1;

    let mut complete_bad = Vec::new();
    for n in 2..=12 {
        let g = gen_complete(n);
        let expected = n as f64 / (n as f64 - 1.0);
        let ours = spectrum(&g).unwrap().lambda1;
        let oracle = nalgebra_spectrum(&g)[1];
        if (ours - expected).abs() > tol || (oracle - expected).abs() > tol {
            complete_bad.push((n, ours, oracle));
        }
    }

    let mut rng = rng(303);
    let mut random_bad = 0;
    for _ in 0..100 {
        let n = rng.random_range(1..=14);
        let density = rng.random_range(0.0..=1.0);
        let g = random_colored_graph(&mut rng, n, density);
        let eig = spectrum(&g).unwrap().eigenvalues;
        let oracle = nalgebra_spectrum(&g);
        let ok = eig[0].abs() <= tol
            && eig.iter().all(|&x| (-tol..=2.0 + tol).contains(&x))
            && eig.iter().zip(&oracle).all(|(a, b)| (a - b).abs() <= 1e-8);
        random_bad += usize::from(!ok);
    }
    report(
        3,
        "spectral exactness",
        bip_bad.is_empty() && complete_bad.is_empty() && random_bad == 0,
        format!(
            "K_(a,b): {} of {bip_checked} off (K_(1,1) excluded, lambda1 = {k11}); K_n, n<=12: {} off; random spectra: {random_bad}/100 off",
            bip_bad.len(),
            complete_bad.len()
        ),
    );
}

#[test]
fn criterion_04_cheeger_inequality() {
    let mut rng = rng(404);
    let mut violations = Vec::new();
    for i in 0..100 {
        let n = rng.random_range(2..=12);
        let density = rng.random_range(0.0..=0.8);
        let g = random_connected_graph(&mut rng, n, density);
        let r = check_cheeger_inequality(&g).unwrap();
        if !r.holds {
            violations.push((i, r));
        }
    }
    report(
        4,
        "Cheeger inequality h^2/2 < lambda1 <= 2h",
        violations.is_empty(),
        format!("{} violations on 100 connected graphs", violations.len()),
    );
}

fn balanced(g: &EdgeColoredGraph, p: &VertexPartition) -> bool {
    p.parts().iter().all(|part| 2 * g.volume(part) <= 2 * g.num_edges())
}

#[test]
fn criterion_05_crossing_edge_lower_bound() {
    let mut rng = rng(505);
    let mut checked = 0;
    let mut violations = 0;
    let mut x_mismatch = 0;
    let mut literal_checked = 0;
    let mut literal_violations = 0;
    let mut literal_unexplained = 0;
    for _ in 0..50 {
        let n = rng.random_range(3..=12);
        let density = rng.random_range(0.0..=0.9);
        let g = random_connected_graph(&mut rng, n, density);
        let l1 = spectrum(&g).unwrap().lambda1;
        let m = threshold_m(g.min_degree() as f64, l1);
        for _ in 0..10 {
            // partitions meeting the per-part Cheeger hypothesis
            let mut p = VertexPartition::singletons(n);
            for _ in 0..1000 {
                let t = rng.random_range(2..=n);
                let candidate = random_partition_with_parts(n, t, &mut rng);
                if balanced(&g, &candidate) {
                    p = candidate;
                    break;
                }
            }
            let r = check_lemma6(&g, l1, &p).unwrap();
            checked += 1;
            violations += usize::from(!r.holds);
            let sizes = p.sorted_sizes();
            if brute_force_x(&sizes, m) != vec![partition_x(&sizes, m).unwrap().x] {
                x_mismatch += 1;
            }

            // any partition with t >= 2, for the record
            let t = rng.random_range(2..=n);
            let q = random_partition_with_parts(n, t, &mut rng);
            let r = check_lemma6(&g, l1, &q).unwrap();
            literal_checked += 1;
            if !r.holds {
                literal_violations += 1;
                literal_unexplained += usize::from(r.balanced);
            }
            let sizes = q.sorted_sizes();
            if brute_force_x(&sizes, m) != vec![partition_x(&sizes, m).unwrap().x] {
                x_mismatch += 1;
            }
        }
    }
    println!(
        "criterion  5 note: over {literal_checked} unrestricted t>=2 partitions, {literal_violations} violate the bound, \
         {literal_unexplained} of them without a part above half the volume"
    );
    report(
        5,
        "crossing edges e(P) >= (lambda1|E| + delta x (1 - lambda1/2))/2",
        checked == 500 && violations == 0 && x_mismatch == 0 && literal_unexplained == 0,
        format!("{violations} violations on {checked} balanced partitions, {x_mismatch}/1000 x mismatches"),
    );
}

#[test]
fn criterion_06_f_g_chain() {
    let mut rng = rng(606);
    let mut subsets = 0;
    let mut g_above_f = 0;
    let mut f_above_cut = 0;
    let mut large_subsets = 0;
    let mut large_f_above_cut = 0;
    let mut large_second_branch_fail = 0;
    for _ in 0..50 {
        let n = rng.random_range(2..=12);
        let density = rng.random_range(0.1..=1.0);
        let g = random_colored_graph(&mut rng, n, density);
        let l1 = spectrum(&g).unwrap().lambda1;
        let delta = g.min_degree() as f64;
        let total = 2 * g.num_edges();
        for s in proper_subsets(n) {
            let cut = g.cut(&s).unwrap();
            let f = f_lower_bound(&g, l1, &s).unwrap();
            let lower = g_lower_bound(delta, l1, s.len());
            g_above_f += usize::from(lower > f + 1e-9);
            if 2 * cut.vol <= total {
                subsets += 1;
                f_above_cut += usize::from(f > cut.cut_edges as f64 + 1e-9);
            } else {
                large_subsets += 1;
                large_f_above_cut += usize::from(f > cut.cut_edges as f64 + 1e-9);
                let k = s.len();
                large_second_branch_fail += usize::from(cut.vol > cut.cut_edges + k * (k - 1));
            }
        }
    }
    println!(
        "criterion  6 note: {large_f_above_cut} of {large_subsets} subsets above half the volume have f(S) > e(S, S^c); \
         the combinatorial branch alone fails on {large_second_branch_fail}"
    );
    report(
        6,
        "g(|S|) <= f(S) <= e(S, S^c)",
        g_above_f == 0 && f_above_cut == 0 && large_second_branch_fail == 0,
        format!("g > f on {g_above_f} subsets; f > e on {f_above_cut} of {subsets} subsets with Vol(S) <= Vol(G)/2"),
    );
}

#[test]
fn criterion_07_x_lower_bound() {
    let mut rng = rng(707);
    let mut thresholds = vec![1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 5.5, 7.0, 9.0];
    for _ in 0..10 {
        let n = rng.random_range(3..=12);
        let density = rng.random_range(0.0..=0.9);
        let g = random_connected_graph(&mut rng, n, density);
        let m = threshold_m(g.min_degree() as f64, spectrum(&g).unwrap().lambda1);
        if m > 1.0 + 1e-9 {
            thresholds.push(m);
        }
    }
    let mut checked = 0u64;
    let mut violations = 0;
    for n in 1..=9 {
        for p in set_partitions(n) {
            let sizes = p.sorted_sizes();
            for &m in &thresholds {
                let x = partition_x(&sizes, m).unwrap().x as i64;
                let bound = x_lower_bound(n, p.t(), m).unwrap();
                checked += 1;
                violations += usize::from(x < bound);
            }
        }
    }
    report(
        7,
        "x >= t - floor(y/(M-1)) - 1",
        violations == 0,
        format!(
            "{violations} violations over {checked} (partition, M) pairs, n <= 9, {} thresholds",
            thresholds.len()
        ),
    );
}

#[test]
fn criterion_08_constructive_decomposition() {
    let start = Instant::now();
    let k16 = Coloring::Factorization.apply(&gen_complete(16), 0).unwrap();
    let mut successes = 0;
    let mut q_ok = true;
    for seed in 0..100 {
        let d = decompose(&k16, &DecompositionParams::new(2.5).with_seed(seed)).unwrap();
        q_ok &= d.q == 2;
        if d.success {
            let [a, b] = [d.trees[0].as_ref().unwrap(), d.trees[1].as_ref().unwrap()];
            let disjoint = a.iter().all(|e| !b.contains(e));
            successes += usize::from(disjoint && a.len() == 15 && b.len() == 15);
        }
    }
    let k12 = gen_complete_bipartite(12, 12);
    let mut bip_successes = 0;
    let mut bip_q_ok = true;
    for seed in 0..100 {
        let d = decompose(&k12, &DecompositionParams::new(3.0).with_seed(seed)).unwrap();
        bip_q_ok &= d.q == 1;
        bip_successes += usize::from(d.success);
    }
    let (fast_enough, time) = within(Duration::from_secs(300), start);
    report(
        8,
        "desk-scale decomposition",
        q_ok && bip_q_ok && successes >= 95 && bip_successes == 100 && fast_enough,
        format!("factorized K_16, q = 2: {successes}/100; rainbow K_(12,12), q = 1: {bip_successes}/100; {time}"),
    );
}

#[test]
fn criterion_09_chernoff_dominates() {
    let samples = 100_000;
    let binomial = Binomial::new(1000, 0.1).unwrap();
    let mut rng = rng(909);
    let draws: Vec<u64> = (0..samples).map(|_| binomial.sample(&mut rng)).collect();
    let mean = 100.0;
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut exceed = 0;
    for lambda in (0..=60).map(f64::from) {
        let bounds = chernoff_bounds(mean, lambda).unwrap();
        let low = draws.iter().filter(|&&x| (x as f64) <= mean - lambda).count() as f64 / samples as f64;
        let high = draws.iter().filter(|&&x| (x as f64) >= mean + lambda).count() as f64 / samples as f64;
        for (empirical, bound) in [(low, bounds.lower_tail), (high, bounds.upper_tail)] {
            let slack = 3.0 * (bound * (1.0 - bound) / samples as f64).sqrt();
            worst = worst.max(empirical - bound);
            exceed += usize::from(empirical > bound + slack);
        }
    }
    report(
        9,
        "Chernoff bounds dominate Binomial(1000, 0.1) tails",
        exceed == 0,
        format!("{exceed} of 122 tail checks exceed bound + 3 sigma; max empirical - bound = {worst:.4}"),
    );
}

#[test]
fn criterion_10_pseudocolor_classes() {
    let mut bad = Vec::new();
    let mut runs = 0;
    for n in [8usize, 12, 16] {
        let base = gen_complete(n);
        let q = n / 4;
        let colorings = [
            Coloring::Rainbow,
            Coloring::Factorization,
            Coloring::Sequential { max_class_size: q },
            Coloring::Bounded {
                max_class_size: 1,
                num_colors: None,
            },
            Coloring::Bounded {
                max_class_size: 2,
                num_colors: None,
            },
            Coloring::Bounded {
                max_class_size: q,
                num_colors: None,
            },
            Coloring::Bounded {
                max_class_size: n / 2,
                num_colors: None,
            },
        ];
        for coloring in colorings {
            for seed in 0..5 {
                runs += 1;
                let g = coloring.apply(&base, seed).unwrap();
                let ok = match pseudocolor_classes(&g) {
                    Ok(pc) => {
                        let mut seen_edges = vec![false; g.num_edges()];
                        let mut seen_colors = vec![false; g.num_colors()];
                        let mut ok = pc.classes.len() == n - 1;
                        for (edges, colors) in pc.classes.iter().zip(&pc.class_colors) {
                            ok &= 4 * edges.len() >= n;
                            for &e in edges {
                                ok &= !std::mem::replace(&mut seen_edges[e], true);
                                ok &= colors.contains(&g.edges()[e].color);
                            }
                            for &c in colors {
                                ok &= !std::mem::replace(&mut seen_colors[c], true);
                            }
                            let whole: usize = colors.iter().map(|&c| g.color_class_sizes()[c]).sum();
                            ok &= whole == edges.len();
                        }
                        ok
                    }
                    Err(_) => false,
                };
                if !ok {
                    bad.push(format!("K_{n} {coloring} seed {seed}"));
                }
            }
        }
    }
    report(
        10,
        "pseudocolor classes on K_n",
        bad.is_empty(),
        format!("{} of {runs} colorings failed {:?}", bad.len(), bad),
    );
}

#[test]
fn criterion_11_determinism() {
    let k16 = Coloring::Factorization.apply(&gen_complete(16), 0).unwrap();
    let mut params = DecompositionParams::new(2.5).with_seed(42);
    params.verify_lemma4 = true;
    let first = serde_json::to_string(&decompose(&k16, &params).unwrap()).unwrap();
    let again = serde_json::to_string(&decompose(&k16, &params).unwrap()).unwrap();
    let sequential = serde_json::to_string(&decompose_with(&k16, &params, Exec::Sequential).unwrap()).unwrap();
    let decompose_same = first == again && first == sequential;

    let spec = ExperimentSpec {
        family: Family::Regular { n: 20, d: 8 },
        coloring: Coloring::Bounded {
            max_class_size: 3,
            num_colors: None,
        },
        c: 1.0,
        trials: 12,
        seed: 7,
        epsilon: 0.1,
        max_retries: 10,
        enforce_color_cap: false,
        verify_lemma4: false,
        outputs: Outputs::default(),
    };
    let run = |exec| {
        let r = run_experiment_with(&spec, exec).unwrap();
        (emit_csv(&r.records, false).unwrap(), emit_json(&r.summary).unwrap())
    };
    let a = run(Exec::Parallel);
    let b = run(Exec::Parallel);
    let c = run(Exec::Sequential);
    let experiment_same = a == b && a == c;
    report(
        11,
        "byte-identical reruns",
        decompose_same && experiment_same,
        format!("decompose JSON identical: {decompose_same}; experiment CSV and summary identical: {experiment_same}"),
    );
}
