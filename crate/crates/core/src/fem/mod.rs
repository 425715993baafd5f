//! Neumann eigenvalues of cap-union domains and densities on S^2 with P1
//! finite elements on icosphere meshes.

mod assemble;
mod domain;
mod eigen;
mod mesh;

pub use assemble::{assemble, Assembly, DensityField, FieldKind, SymCsr};
pub use domain::{connected_components, domain_mask, mask_from_triangles, CapSpec, DomainMask, DomainSpec};
pub use eigen::{solve_gevp, GevpSolution, SolverOptions};
pub use mesh::{build_icosphere, SphMesh, MAX_LEVEL};

use serde::Serialize;
use std::io::Write;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct SpectralResult {
    /// mu_0 <= ... <= mu_k.
    pub eigenvalues: Vec<f64>,
    /// M-orthonormal eigenvectors sampled at every mesh vertex (zero off the
    /// domain).
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub level: usize,
    pub mass: f64,
    pub components: usize,
    pub iterations: usize,
}

impl SpectralResult {
    pub fn mu(&self, k: usize) -> f64 {
        self.eigenvalues[k]
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "mu", "residual"])?;
        for (i, (mu, r)) in self.eigenvalues.iter().zip(&self.residuals).enumerate() {
            w.write_record([i.to_string(), format!("{mu:.12}"), format!("{r:.3e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Solves for mu_0 .. mu_k on one mesh.
pub fn solve_on_mesh(
    mesh: &SphMesh,
    mask: Option<&DomainMask>,
    field: Option<&DensityField>,
    k: usize,
    opts: &SolverOptions,
) -> Result<SpectralResult> {
    let asm = assemble(mesh, mask, field)?;
    let sol = solve_gevp(&asm.stiffness, &asm.mass, k + 1, opts)?;
    let components = match mask {
        Some(m) => connected_components(mesh, m),
        None => 1,
    };
    Ok(SpectralResult {
        eigenvectors: sol.vectors.iter().map(|v| asm.to_vertices(v, mesh.num_vertices())).collect(),
        eigenvalues: sol.values,
        residuals: sol.residuals,
        level: mesh.level,
        mass: asm.total_mass,
        components,
        iterations: sol.iterations,
    })
}

/// Results at levels L-1 and L with the extrapolated eigenvalues
/// (4 mu_L - mu_{L-1}) / 3 and the gap |mu_{L-1} - mu_L| as error margin.
#[derive(Debug, Clone, Serialize)]
pub struct FemReport {
    pub coarse: SpectralResult,
    pub fine: SpectralResult,
    pub extrapolated: Vec<f64>,
    pub margin: Vec<f64>,
}

impl FemReport {
    fn new(coarse: SpectralResult, fine: SpectralResult) -> Self {
        let extrapolated = fine.eigenvalues.iter().zip(&coarse.eigenvalues).map(|(f, c)| (4.0 * f - c) / 3.0).collect();
        let margin = fine.eigenvalues.iter().zip(&coarse.eigenvalues).map(|(f, c)| (f - c).abs()).collect();
        Self { coarse, fine, extrapolated, margin }
    }

    pub fn mu(&self, k: usize) -> f64 {
        self.extrapolated[k]
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "mu_coarse", "mu_fine", "mu_extrapolated", "margin", "residual"])?;
        for i in 0..self.extrapolated.len() {
            w.write_record([
                i.to_string(),
                format!("{:.12}", self.coarse.eigenvalues[i]),
                format!("{:.12}", self.fine.eigenvalues[i]),
                format!("{:.12}", self.extrapolated[i]),
                format!("{:.3e}", self.margin[i]),
                format!("{:.3e}", self.fine.residuals[i]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn check_level(level: usize) -> Result<()> {
    if level == 0 || level > MAX_LEVEL {
        return Err(Error::MeshLevel(level));
    }
    Ok(())
}

pub fn solve_domain(spec: &DomainSpec, level: usize, k: usize, opts: &SolverOptions) -> Result<SpectralResult> {
    let mesh = build_icosphere(level)?;
    let mask = domain_mask(&mesh, spec)?;
    solve_on_mesh(&mesh, Some(&mask), None, k, opts)
}

/// Neumann eigenvalues of a cap-union domain with a two-level convergence
/// report.
pub fn neumann_eigs(spec: &DomainSpec, level: usize, k: usize) -> Result<FemReport> {
    neumann_eigs_with(spec, level, k, &SolverOptions::default())
}

pub fn neumann_eigs_with(spec: &DomainSpec, level: usize, k: usize, opts: &SolverOptions) -> Result<FemReport> {
    check_level(level)?;
    let coarse = solve_domain(spec, level - 1, k, opts)?;
    let fine = solve_domain(spec, level, k, opts)?;
    Ok(FemReport::new(coarse, fine))
}

/// Weighted eigenvalues of a density on the whole sphere, sampled at the
/// mesh vertices.
pub fn neumann_eigs_density<F>(rho: F, floor: f64, level: usize, k: usize) -> Result<FemReport>
where
    F: Fn([f64; 3]) -> f64,
{
    check_level(level)?;
    let opts = SolverOptions::default();
    let solve = |l: usize| -> Result<SpectralResult> {
        let mesh = build_icosphere(l)?;
        let field = DensityField::from_fn(&mesh, floor, &rho)?;
        solve_on_mesh(&mesh, None, Some(&field), k, &opts)
    };
    let coarse = solve(level - 1)?;
    let fine = solve(level)?;
    Ok(FemReport::new(coarse, fine))
}
