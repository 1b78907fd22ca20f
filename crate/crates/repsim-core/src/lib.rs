//! Performance models for quantum repeaters built from blockade-coupled
//! atomic ensembles: closed-form entanglement-distribution rates, an error
//! and fidelity budget with Rabi-frequency optimization, cooperative
//! emission patterns over explicit atom geometries, and a Monte Carlo
//! simulator of the nested swapping protocol.
//!
//! The formula kernels are generic over the scalar type (`f32`/`f64`);
//! configuration, simulation and the type aliases below fix `f64`.

pub mod emission;
pub mod fidelity;
pub mod montecarlo;
pub mod params;
pub mod rates;
pub mod scalar;
pub mod stats;

pub use params::{
    BlockadeParams, ConfigError, GeometrySpec, LinkParams, ScenarioConfig, Warning,
};
pub use scalar::Real;

/// `f64` forms of the generic model types.
pub type AtomGeometry64 = emission::AtomGeometry<f64>;
pub type CollectionReport64 = emission::CollectionReport<f64>;
pub type ErrorTerms64 = fidelity::ErrorTerms<f64>;
pub type FidelityBudget64 = fidelity::FidelityBudget<f64>;
pub type RabiOptimum64 = fidelity::RabiOptimum<f64>;
pub type RateResult64 = rates::RateResult<f64>;

/// Builds the explicit atom geometry described by a config entry.
pub fn realize_geometry(
    spec: &GeometrySpec,
    lambda: f64,
    seed: u64,
) -> AtomGeometry64 {
    match *spec {
        GeometrySpec::Lattice { nx, ny, nz, spacing_um } => {
            emission::build_cubic_lattice(nx, ny, nz, params::um_to_m(spacing_um), lambda)
        }
        GeometrySpec::Sphere { n_atoms, diameter_um } => {
            emission::sample_sphere(n_atoms, params::um_to_m(diameter_um), lambda, seed)
        }
    }
}
