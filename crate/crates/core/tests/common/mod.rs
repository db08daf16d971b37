#![allow(dead_code, clippy::needless_range_loop)]

use rainbow_core::decomposition::INEQUALITY_TOL;
use rainbow_core::generators::color_random_bounded;
use rainbow_core::spectral::normalized_laplacian;
use rainbow_core::EdgeColoredGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G(n, p)` with a random bounded coloring whose class cap is uniform in `1..=|E|`.
pub fn random_colored_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> EdgeColoredGraph {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                pairs.push((u, v));
            }
        }
    }
    let g = EdgeColoredGraph::new(n, pairs.iter().enumerate().map(|(i, &(u, v))| (u, v, i))).unwrap();
    recolor_random_cap(rng, &g)
}

pub fn recolor_random_cap(rng: &mut ChaCha8Rng, g: &EdgeColoredGraph) -> EdgeColoredGraph {
    let m = g.num_edges();
    if m == 0 {
        return g.clone();
    }
    let cap = rng.random_range(1..=m);
    color_random_bounded(g, cap, m.div_ceil(cap), rng.random()).unwrap()
}

/// Random spanning tree plus each remaining pair with probability `p`.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> EdgeColoredGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut adjacent = vec![vec![false; n]; n];
    for i in 1..n {
        let a = order[i];
        let b = order[rng.random_range(0..i)];
        adjacent[a][b] = true;
        adjacent[b][a] = true;
    }
    for u in 0..n {
        for v in u + 1..n {
            if !adjacent[u][v] && rng.random_bool(p) {
                adjacent[u][v] = true;
                adjacent[v][u] = true;
            }
        }
    }
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if adjacent[u][v] {
                pairs.push((u, v));
            }
        }
    }
    let g = EdgeColoredGraph::new(n, pairs.iter().enumerate().map(|(i, &(u, v))| (u, v, i))).unwrap();
    recolor_random_cap(rng, &g)
}

/// Largest rainbow acyclic edge set, by trying every edge subset.
pub fn exhaustive_max_rainbow_forest(g: &EdgeColoredGraph) -> usize {
    let m = g.num_edges();
    assert!(m <= 20);
    let mut best = 0;
    for mask in 0u32..(1 << m) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let mut colors = std::collections::HashSet::new();
        let mut parent: Vec<usize> = (0..g.n()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let mut ok = true;
        for id in 0..m {
            if mask >> id & 1 == 0 {
                continue;
            }
            let e = g.edges()[id];
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a == b || !colors.insert(e.color) {
                ok = false;
                break;
            }
            parent[a] = b;
        }
        if ok {
            best = size;
        }
    }
    best
}

/// Every integer `x` with `N' = x + M(t' − x − 1) + z*` and `1 < z* ≤ M`,
/// found by scanning; same slack as the closed form.
pub fn brute_force_x(sizes: &[usize], m: f64) -> Vec<usize> {
    let t_prime = sizes.iter().take_while(|&&s| s as f64 <= m + INEQUALITY_TOL).count();
    if t_prime == 0 {
        return vec![0];
    }
    let n_prime: usize = sizes[..t_prime].iter().sum();
    (0..=t_prime + 1)
        .filter(|&x| {
            let z = n_prime as f64 - x as f64 - m * (t_prime as f64 - x as f64 - 1.0);
            z > 1.0 + INEQUALITY_TOL && z <= m + INEQUALITY_TOL
        })
        .collect()
}

/// Eigenvalues of the normalized Laplacian from nalgebra, ascending.
pub fn nalgebra_spectrum(g: &EdgeColoredGraph) -> Vec<f64> {
    let l = normalized_laplacian(g);
    let n = g.n();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| l[(i, j)]);
    let mut values: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Vertex subsets of `0..n` as sorted lists, for every nonempty proper mask.
pub fn proper_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << n) - 1).map(move |mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect())
}
