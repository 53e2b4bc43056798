use serde::{Deserialize, Serialize};

use super::{check_len, AnalysisError, BoundaryFlux, ComparisonField, NodalDecomposition};
use crate::fem::SparseSym;
use crate::mesh::TriMesh;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayleighDefect {
    pub component: usize,
    /// `phi^T K phi`.
    pub dirichlet_energy: f64,
    /// `mu2 phi^T M phi`.
    pub mass_energy: f64,
    /// Sum over boundary edges of `phi(mid) * flux * length`.
    pub boundary_term: f64,
    /// `dirichlet_energy / mass_energy`.
    pub ratio: f64,
    /// Rayleigh quotient of the zero-mean combination of this component
    /// with the next positive one, when there is one.
    pub combination_quotient: Option<f64>,
}

fn restrict(w: &[f64], decomposition: &NodalDecomposition, component: usize) -> Vec<f64> {
    w.iter()
        .zip(&decomposition.domain_label)
        .map(|(&x, &l)| if l == Some(component) { x } else { 0.0 })
        .collect()
}

/// Rayleigh quotient of `a1 phi1 + a2 phi2` with the coefficients chosen so
/// the combination has zero mean; `None` if the combination vanishes.
pub fn zero_mean_quotient(k: &SparseSym, m: &SparseSym, phi1: &[f64], phi2: &[f64]) -> Option<f64> {
    let ones = vec![1.0; phi1.len()];
    let a1 = m.bilinear(&ones, phi2);
    let a2 = -m.bilinear(&ones, phi1);
    let u: Vec<f64> = phi1.iter().zip(phi2).map(|(x, y)| a1 * x + a2 * y).collect();
    let den = m.bilinear(&u, &u);
    (den > 0.0).then(|| k.bilinear(&u, &u) / den)
}

/// Energy balance of `w` restricted to one positive nodal component.
/// `flux` must be in mesh boundary-edge order, as returned by
/// [`super::boundary_flux`].
pub fn rayleigh_defect(
    mesh: &TriMesh,
    k: &SparseSym,
    m: &SparseSym,
    field: &ComparisonField,
    decomposition: &NodalDecomposition,
    component: usize,
    flux: &[BoundaryFlux],
) -> Result<RayleighDefect, AnalysisError> {
    check_len(mesh.vertex_count(), &field.values)?;
    let positive = decomposition
        .components
        .get(component)
        .is_some_and(|c| c.sign > 0);
    let phi = restrict(&field.values, decomposition, component);
    if !positive || phi.iter().all(|&x| x <= 0.0) {
        return Err(AnalysisError::NotPositiveComponent(component));
    }
    let dirichlet_energy = k.bilinear(&phi, &phi);
    let mass_energy = field.mu2 * m.bilinear(&phi, &phi);
    let boundary_term = mesh
        .boundary_edges
        .iter()
        .zip(flux)
        .map(|(e, f)| 0.5 * (phi[e.a] + phi[e.b]) * f.value * f.length)
        .sum();
    let other = (0..decomposition.components.len())
        .find(|&c| c != component && decomposition.components[c].sign > 0);
    let combination_quotient =
        other.and_then(|c| zero_mean_quotient(k, m, &phi, &restrict(&field.values, decomposition, c)));
    Ok(RayleighDefect {
        component,
        dirichlet_energy,
        mass_energy,
        boundary_term,
        ratio: dirichlet_energy / mass_energy,
        combination_quotient,
    })
}
