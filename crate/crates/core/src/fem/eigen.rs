//! Smallest eigenpairs of `K v = mu M v` by LOBPCG.
//!
//! The preconditioner is an inner Jacobi-preconditioned conjugate gradient
//! solve with the shifted operator `K + sigma M`,
//! `sigma = 1e-3 * trace(K) / n`, to relative tolerance `1e-10`. With a
//! nearly exact inverse as preconditioner the three-term subspace
//! `[X, W, P]` converges in a handful of outer iterations. Each iteration
//! re-orthonormalises the full basis in the `M` inner product (twice-run
//! Gram-Schmidt) before the Rayleigh-Ritz step, and keeps every vector
//! `M`-orthogonal to the deflated space (the constants, for Neumann).

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::sparse::{axpy, dot, norm2};
use super::SparseSym;
use crate::mesh::TriMesh;
use crate::rng::SplitMix64;

pub const MAX_OUTER_ITERATIONS: usize = 500;
pub const INNER_REL_TOL: f64 = 1e-10;
pub const SHIFT_FRACTION: f64 = 1e-3;
pub const DEFAULT_SEED: u64 = 0x4853_5632; // "HSV2"
const GUARD_VECTORS: usize = 2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("eigensolver did not converge in {iterations} iterations; best relative residuals {residuals:?}")]
    ConvergenceFailure {
        iterations: usize,
        residuals: Vec<f64>,
    },
    #[error("mesh has no interior vertices")]
    NoInteriorVertices,
    #[error("zero vector in Rayleigh quotient")]
    ZeroVector,
    #[error("invalid eigen request: {0}")]
    InvalidRequest(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    Neumann,
    Dirichlet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Vertex-valued, `M`-orthonormal.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `|K v - mu M v| / ((1 + mu) |M v|)`.
    pub residuals: Vec<f64>,
    pub boundary_condition: BoundaryCondition,
    pub iterations: usize,
}

/// `v^T K v / v^T M v`.
pub fn rayleigh(k: &SparseSym, m: &SparseSym, v: &[f64]) -> Result<f64, SolverError> {
    let den = m.bilinear(v, v);
    if den <= 0.0 || v.iter().all(|&x| x == 0.0) {
        return Err(SolverError::ZeroVector);
    }
    Ok(k.bilinear(v, v) / den)
}

pub fn relative_residual(k: &SparseSym, m: &SparseSym, mu: f64, v: &[f64]) -> f64 {
    let kv = k.mul(v);
    let mv = m.mul(v);
    let r: Vec<f64> = kv.iter().zip(&mv).map(|(a, b)| a - mu * b).collect();
    norm2(&r) / ((1.0 + mu) * norm2(&mv))
}

/// Jacobi-preconditioned CG for SPD `a`.
pub(crate) fn pcg(a: &SparseSym, b: &[f64], inv_diag: &[f64], rel_tol: f64) -> Vec<f64> {
    let n = b.len();
    let mut x = vec![0.0; n];
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        return x;
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(inv_diag).map(|(ri, d)| ri * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let max_iter = 20 * n + 1000;
    for _ in 0..max_iter {
        a.matvec(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            break;
        }
        let alpha = rz / pap;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &ap, &mut r);
        if norm2(&r) <= rel_tol * bnorm {
            break;
        }
        for ((zi, ri), d) in z.iter_mut().zip(&r).zip(inv_diag) {
            *zi = ri * d;
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for (pi, zi) in p.iter_mut().zip(&z) {
            *pi = zi + beta * *pi;
        }
    }
    x
}

/// A vector together with its images under `K` and `M`.
#[derive(Clone)]
struct Triple {
    v: Vec<f64>,
    kv: Vec<f64>,
    mv: Vec<f64>,
}

struct Problem<'a> {
    k: &'a SparseSym,
    m: &'a SparseSym,
    /// `M`-orthonormal vectors every iterate must avoid, with their `M`-images.
    deflate: Vec<(Vec<f64>, Vec<f64>)>,
    shifted: SparseSym,
    inv_diag: Vec<f64>,
}

impl<'a> Problem<'a> {
    fn new(k: &'a SparseSym, m: &'a SparseSym, deflate: Vec<Vec<f64>>) -> Self {
        let sigma = SHIFT_FRACTION * k.trace() / k.dim() as f64;
        let shifted = k.add_scaled(sigma, m);
        let inv_diag = shifted.diag().iter().map(|d| 1.0 / d).collect();
        let deflate = deflate.into_iter().map(|y| {
            let my = m.mul(&y);
            (y, my)
        });
        Problem {
            k,
            m,
            deflate: deflate.collect(),
            shifted,
            inv_diag,
        }
    }

    fn project_deflated(&self, v: &mut [f64]) {
        for (y, my) in &self.deflate {
            let c = dot(my, v);
            axpy(-c, y, v);
        }
    }

    fn triple(&self, v: Vec<f64>) -> Triple {
        let kv = self.k.mul(&v);
        let mv = self.m.mul(&v);
        Triple { v, kv, mv }
    }

    /// Orthonormalise `cands` against `basis` (and each other) in the `M`
    /// inner product; near-dependent candidates are dropped.
    fn extend_basis(&self, basis: &mut Vec<Triple>, cands: Vec<Vec<f64>>) {
        for mut v in cands {
            self.project_deflated(&mut v);
            let m0 = self.m.bilinear(&v, &v).sqrt();
            if !(m0 > 0.0) {
                continue;
            }
            for _ in 0..2 {
                for b in basis.iter() {
                    let c = dot(&b.mv, &v);
                    axpy(-c, &b.v, &mut v);
                }
                self.project_deflated(&mut v);
            }
            let mv = self.m.mul(&v);
            let nrm = dot(&v, &mv).sqrt();
            if !(nrm > 1e-10 * m0) {
                continue;
            }
            let inv = 1.0 / nrm;
            v.iter_mut().for_each(|x| *x *= inv);
            basis.push(self.triple(v));
        }
    }

    fn precondition(&self, r: &[f64]) -> Vec<f64> {
        let mut w = pcg(&self.shifted, r, &self.inv_diag, INNER_REL_TOL);
        self.project_deflated(&mut w);
        w
    }
}

struct Ritz {
    values: Vec<f64>,
    vectors: Vec<Triple>,
    /// Component of each Ritz vector outside the X block (the new P).
    directions: Vec<Triple>,
}

fn combine(basis: &[Triple], coeffs: &DMatrix<f64>, col: usize, from: usize) -> Triple {
    let n = basis[0].v.len();
    let mut t = Triple {
        v: vec![0.0; n],
        kv: vec![0.0; n],
        mv: vec![0.0; n],
    };
    for (j, b) in basis.iter().enumerate().skip(from) {
        let c = coeffs[(j, col)];
        axpy(c, &b.v, &mut t.v);
        axpy(c, &b.kv, &mut t.kv);
        axpy(c, &b.mv, &mut t.mv);
    }
    t
}

fn rayleigh_ritz(basis: &[Triple], block: usize, x_len: usize) -> Ritz {
    let d = basis.len();
    let mut a = DMatrix::<f64>::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let v = 0.5 * (dot(&basis[i].v, &basis[j].kv) + dot(&basis[j].v, &basis[i].kv));
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    let eig = SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));
    let take = block.min(d);
    let mut values = Vec::with_capacity(take);
    let mut vectors = Vec::with_capacity(take);
    let mut directions = Vec::with_capacity(take);
    for &col in order.iter().take(take) {
        values.push(eig.eigenvalues[col]);
        vectors.push(combine(basis, &eig.eigenvectors, col, 0));
        directions.push(combine(basis, &eig.eigenvectors, col, x_len));
    }
    Ritz {
        values,
        vectors,
        directions,
    }
}

fn residual_of(t: &Triple, mu: f64) -> (Vec<f64>, f64) {
    let r: Vec<f64> = t.kv.iter().zip(&t.mv).map(|(a, b)| a - mu * b).collect();
    let rel = norm2(&r) / ((1.0 + mu.abs()) * norm2(&t.mv));
    (r, rel)
}

/// Returns (values, vectors, residuals, iterations) of the `nev` smallest pairs.
fn lobpcg(
    prob: &Problem,
    nev: usize,
    tol: f64,
    seed: u64,
) -> Result<(Vec<f64>, Vec<Vec<f64>>, Vec<f64>, usize), SolverError> {
    let n = prob.k.dim();
    let avail = n - prob.deflate.len();
    if nev == 0 || nev > avail {
        return Err(SolverError::InvalidRequest(format!(
            "{nev} eigenpairs requested from a space of dimension {avail}"
        )));
    }
    let block = (nev + GUARD_VECTORS).min(avail);
    let mut rng = SplitMix64::new(seed);
    let start: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..n).map(|_| rng.normal()).collect())
        .collect();
    let mut basis = Vec::new();
    prob.extend_basis(&mut basis, start);
    let mut ritz = rayleigh_ritz(&basis, block, basis.len());
    let mut p_dirs: Vec<Triple> = Vec::new();
    let mut best: Vec<f64> = vec![f64::INFINITY; nev];

    for iter in 0..=MAX_OUTER_ITERATIONS {
        let res: Vec<(Vec<f64>, f64)> = ritz
            .vectors
            .iter()
            .zip(&ritz.values)
            .map(|(t, &mu)| residual_of(t, mu))
            .collect();
        for i in 0..nev.min(res.len()) {
            best[i] = best[i].min(res[i].1);
        }
        if res.len() >= nev && res[..nev].iter().all(|r| r.1 <= tol) {
            let vectors = ritz.vectors.iter().take(nev).map(|t| t.v.clone()).collect();
            let residuals = res[..nev].iter().map(|r| r.1).collect();
            return Ok((ritz.values[..nev].to_vec(), vectors, residuals, iter));
        }
        if iter == MAX_OUTER_ITERATIONS {
            break;
        }
        let active: Vec<usize> = (0..nev).filter(|&i| res[i].1 > tol).collect();
        let w: Vec<Vec<f64>> = active.iter().map(|&i| prob.precondition(&res[i].0)).collect();

        let mut basis: Vec<Triple> = ritz.vectors.clone();
        let x_len = basis.len();
        prob.extend_basis(&mut basis, w);
        let p: Vec<Vec<f64>> = p_dirs.iter().map(|t| t.v.clone()).collect();
        prob.extend_basis(&mut basis, p);
        let next = rayleigh_ritz(&basis, block, x_len);
        p_dirs = active
            .iter()
            .filter(|&&i| i < next.directions.len())
            .map(|&i| next.directions[i].clone())
            .collect();
        ritz = next;
    }
    Err(SolverError::ConvergenceFailure {
        iterations: MAX_OUTER_ITERATIONS,
        residuals: best,
    })
}

/// Deterministic sign: the entry of largest magnitude is positive.
fn fix_sign(v: &mut [f64]) {
    let mut best = (0.0f64, 0usize);
    for (i, x) in v.iter().enumerate() {
        if x.abs() > best.0 {
            best = (x.abs(), i);
        }
    }
    if v[best.1] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// The `k` smallest Neumann eigenpairs (including `mu_1 = 0`).
pub fn solve_neumann(k: &SparseSym, m: &SparseSym, count: usize, tol: f64) -> Result<Spectrum, SolverError> {
    solve_neumann_seeded(k, m, count, tol, DEFAULT_SEED)
}

pub fn solve_neumann_seeded(
    k: &SparseSym,
    m: &SparseSym,
    count: usize,
    tol: f64,
    seed: u64,
) -> Result<Spectrum, SolverError> {
    if count < 2 {
        return Err(SolverError::InvalidRequest("Neumann solve needs k >= 2".into()));
    }
    let n = k.dim();
    let ones = vec![1.0; n];
    let scale = 1.0 / m.bilinear(&ones, &ones).sqrt();
    let constant: Vec<f64> = vec![scale; n];
    let prob = Problem::new(k, m, vec![constant.clone()]);
    let (vals, mut vecs, res, iterations) = lobpcg(&prob, count - 1, tol, seed)?;
    vecs.iter_mut().for_each(|v| fix_sign(v));
    let mu1 = rayleigh(k, m, &constant)?;
    let mut eigenvalues = vec![mu1];
    eigenvalues.extend(vals);
    let mut residuals = vec![relative_residual(k, m, mu1, &constant)];
    residuals.extend(res);
    let mut eigenvectors = vec![constant];
    eigenvectors.extend(vecs);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        residuals,
        boundary_condition: BoundaryCondition::Neumann,
        iterations,
    })
}

/// The `k` smallest Dirichlet eigenpairs; eigenvectors vanish on the boundary.
pub fn solve_dirichlet(mesh: &TriMesh, count: usize, tol: f64) -> Result<Spectrum, SolverError> {
    let k = super::assemble_stiffness(mesh);
    let m = super::assemble_mass(mesh, false);
    let interior: Vec<usize> = (0..mesh.vertex_count()).filter(|&i| mesh.interior_mask[i]).collect();
    if interior.is_empty() {
        return Err(SolverError::NoInteriorVertices);
    }
    let ki = k.submatrix(&interior);
    let mi = m.submatrix(&interior);
    let prob = Problem::new(&ki, &mi, Vec::new());
    let (eigenvalues, vecs, residuals, iterations) = lobpcg(&prob, count, tol, DEFAULT_SEED)?;
    let eigenvectors = vecs
        .into_iter()
        .map(|mut v| {
            fix_sign(&mut v);
            let mut full = vec![0.0; mesh.vertex_count()];
            for (&i, x) in interior.iter().zip(v) {
                full[i] = x;
            }
            full
        })
        .collect();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        residuals,
        boundary_condition: BoundaryCondition::Dirichlet,
        iterations,
    })
}
