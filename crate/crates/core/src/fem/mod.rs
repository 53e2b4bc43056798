//! Piecewise-linear finite elements for the Laplacian and the
//! symmetric generalized eigenproblem `K v = mu M v`.

mod assemble;
mod eigen;
mod sparse;

pub use assemble::{assemble_mass, assemble_stiffness, element_mass, element_stiffness};
pub use eigen::{
    rayleigh, relative_residual, solve_dirichlet, solve_neumann, solve_neumann_seeded,
    BoundaryCondition, SolverError, Spectrum, DEFAULT_SEED, INNER_REL_TOL, MAX_OUTER_ITERATIONS,
    SHIFT_FRACTION,
};
pub use sparse::SparseSym;

pub const DEFAULT_TOL: f64 = 1e-8;

/// Stiffness, consistent mass, and the Neumann spectrum of a mesh.
pub fn neumann_spectrum(
    mesh: &crate::mesh::TriMesh,
    count: usize,
    tol: f64,
) -> Result<(SparseSym, SparseSym, Spectrum), SolverError> {
    let k = assemble_stiffness(mesh);
    let m = assemble_mass(mesh, false);
    let s = solve_neumann(&k, &m, count, tol)?;
    Ok((k, m, s))
}
