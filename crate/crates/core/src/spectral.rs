//! Normalized Laplacian spectra and exact Cheeger constants.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::EdgeColoredGraph;
use crate::par::Exec;

/// Jacobi stops once the off-diagonal Frobenius norm drops to this value.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
/// Sweep cap; each sweep visits every off-diagonal pair once.
pub const MAX_SWEEPS: usize = 100;
/// Slack used when comparing eigenvalues against exact quantities.
pub const SPECTRAL_TOL: f64 = 1e-9;
/// Default largest `n` for which [`cheeger_exact`] enumerates subsets.
pub const DEFAULT_CHEEGER_CAP: usize = 20;

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self[(i, j)] * self[(i, j)];
                }
            }
        }
        s.sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// The normalized Laplacian: `1` on the diagonal of non-isolated vertices,
/// `-1/sqrt(d_u d_v)` for adjacent `u, v`, zero elsewhere.
pub fn normalized_laplacian(g: &EdgeColoredGraph) -> DenseMatrix {
    let n = g.n();
    let mut l = DenseMatrix::zeros(n);
    for v in 0..n {
        if g.degree(v) > 0 {
            l[(v, v)] = 1.0;
        }
    }
    for e in g.edges() {
        let w = -1.0 / ((g.degree(e.u) * g.degree(e.v)) as f64).sqrt();
        l[(e.u, e.v)] = w;
        l[(e.v, e.u)] = w;
    }
    l
}

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: DenseMatrix,
    pub sweeps: usize,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
pub fn jacobi_eigen(matrix: &DenseMatrix) -> Result<SymmetricEigen> {
    let n = matrix.dim();
    let mut a = matrix.clone();
    let mut v = DenseMatrix::identity(n);
    let mut sweeps = 0;
    loop {
        let off = a.off_diagonal_norm();
        if off <= OFF_DIAGONAL_TOL {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = DenseMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, dst)] = v[(k, src)];
        }
    }
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}

/// Full eigendecomposition of the normalized Laplacian of `g`.
pub fn laplacian_eigen(g: &EdgeColoredGraph) -> Result<SymmetricEigen> {
    jacobi_eigen(&normalized_laplacian(g))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralSummary {
    /// λ₀ ≤ … ≤ λ_{n−1}.
    pub eigenvalues: Vec<f64>,
    /// Second-smallest eigenvalue; zero when `n = 1`.
    pub lambda1: f64,
    pub n: usize,
}

pub fn spectrum(g: &EdgeColoredGraph) -> Result<SpectralSummary> {
    if g.n() == 0 {
        return Err(Error::InvalidParameter("spectrum needs n >= 1".into()));
    }
    let eigenvalues = laplacian_eigen(g)?.values;
    Ok(SpectralSummary {
        lambda1: eigenvalues.get(1).copied().unwrap_or(0.0),
        n: g.n(),
        eigenvalues,
    })
}

/// Second-smallest normalized Laplacian eigenvalue.
pub fn lambda1(g: &EdgeColoredGraph) -> Result<f64> {
    spectrum(g).map(|s| s.lambda1)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheegerCertificate {
    pub h: f64,
    /// Lexicographically smallest vertex set attaining `h`; always contains 0.
    pub witness: Vec<usize>,
    pub cut_edges: usize,
    /// `min{Vol(S), Vol(S̄)}` of the witness.
    pub min_volume: usize,
    pub lambda1: f64,
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    cut: u64,
    vol: u64,
    mask: u64,
}

impl Candidate {
    fn cmp_key(&self, other: &Self) -> Ordering {
        // cut/vol < other.cut/other.vol, exactly
        (self.cut * other.vol)
            .cmp(&(other.cut * self.vol))
            .then_with(|| lex_cmp_masks(self.mask, other.mask))
    }
}

/// Compares two vertex sets as ascending vertex lists, lexicographically.
fn lex_cmp_masks(mut a: u64, mut b: u64) -> Ordering {
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {
                let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
                if x != y {
                    return x.cmp(&y);
                }
                a &= a - 1;
                b &= b - 1;
            }
        }
    }
}

fn mask_to_set(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::new();
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// Exact Cheeger constant by enumerating all `2^{n−1} − 1` cuts.
pub fn cheeger_exact(g: &EdgeColoredGraph) -> Result<CheegerCertificate> {
    cheeger_exact_with(g, DEFAULT_CHEEGER_CAP, Exec::default())
}

pub fn cheeger_exact_with(g: &EdgeColoredGraph, cap: usize, exec: Exec) -> Result<CheegerCertificate> {
    let n = g.n();
    if n > cap.min(63) {
        return Err(Error::TooLarge { n, cap: cap.min(63) });
    }
    if n < 2 {
        return Err(Error::InvalidParameter("Cheeger constant needs n >= 2".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let total = 2 * g.num_edges() as u64;
    // Every cut is represented once, by the side containing vertex 0.
    let best = exec.map_reduce(
        0..(1u64 << (n - 1)) - 1,
        None,
        |rest| {
            let mask = (rest << 1) | 1;
            let (cut, vol) = g.cut_mask(mask);
            let vol = vol as u64;
            Some(Candidate {
                cut: cut as u64,
                vol: vol.min(total - vol),
                mask,
            })
        },
        |a: Option<Candidate>, b: Option<Candidate>| match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => Some(if a.cmp_key(&b) == Ordering::Greater { b } else { a }),
        },
    );
    let best = best.expect("n >= 2 has a proper subset");
    Ok(CheegerCertificate {
        h: best.cut as f64 / best.vol as f64,
        witness: mask_to_set(best.mask),
        cut_edges: best.cut as usize,
        min_volume: best.vol as usize,
        lambda1: lambda1(g)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheegerReport {
    pub h: f64,
    pub lambda1: f64,
    /// `h²/2`
    pub lower: f64,
    /// `2h`
    pub upper: f64,
    pub holds: bool,
}

/// Checks `h²/2 < λ₁ ≤ 2h` with [`SPECTRAL_TOL`] slack on both sides.
pub fn check_cheeger_inequality(g: &EdgeColoredGraph) -> Result<CheegerReport> {
    check_cheeger_inequality_with(g, DEFAULT_CHEEGER_CAP, Exec::default())
}

pub fn check_cheeger_inequality_with(g: &EdgeColoredGraph, cap: usize, exec: Exec) -> Result<CheegerReport> {
    let cert = cheeger_exact_with(g, cap, exec)?;
    let (h, l1) = (cert.h, cert.lambda1);
    let lower = h * h / 2.0;
    let upper = 2.0 * h;
    Ok(CheegerReport {
        h,
        lambda1: l1,
        lower,
        upper,
        holds: lower < l1 + SPECTRAL_TOL && l1 <= upper + SPECTRAL_TOL,
    })
}
