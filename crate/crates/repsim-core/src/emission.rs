//! Cooperative-emission directionality over explicit atom positions.
//!
//! The emission pattern for a phase-matched collective excitation is
//! `P(k) = |sum_j exp(-i q . r_j)|^2 / N` with `q = (2 pi / lambda)
//! (axis - k)`, so the forward direction is enhanced by a factor `N` while
//! generic directions stay near 1. The collected fraction integrates this
//! pattern over a cone around the phase-match axis and normalizes by the
//! full-sphere total.

use crate::scalar::{real, Real};
use crate::stats::pairwise_sum_generic;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("geometry needs at least one atom")]
    Empty,
    #[error("atom position {index} is not finite")]
    NonFinitePosition { index: usize },
    #[error("emission axis must be a unit vector (|axis| deviates by {deviation:e})")]
    AxisNotUnit { deviation: f64 },
}

/// Explicit 3-D atom positions with the emission wavelength and the
/// phase-matched direction.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomGeometry<F> {
    /// Atom positions (m).
    pub positions: Vec<[F; 3]>,
    /// Emission wavelength (m).
    pub lambda: F,
    /// Unit vector along the phase-match direction.
    pub axis: [F; 3],
    /// Human-readable description for reports.
    pub descriptor: String,
    /// RNG seed for sampled geometries.
    pub seed: Option<u64>,
}

impl<F: Real> AtomGeometry<F> {
    pub fn atom_count(&self) -> usize {
        self.positions.len()
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if self.positions.is_empty() {
            return Err(GeometryError::Empty);
        }
        for (index, p) in self.positions.iter().enumerate() {
            if !(p[0].is_finite() && p[1].is_finite() && p[2].is_finite()) {
                return Err(GeometryError::NonFinitePosition { index });
            }
        }
        let norm = (self.axis[0] * self.axis[0]
            + self.axis[1] * self.axis[1]
            + self.axis[2] * self.axis[2])
            .sqrt();
        let deviation = (norm - F::one()).abs().to_f64().unwrap_or(f64::NAN);
        if deviation.is_nan() || deviation > 1e-12 {
            return Err(GeometryError::AxisNotUnit { deviation });
        }
        Ok(())
    }
}

/// Regular grid of `nx * ny * nz` atoms centered at the origin, long axis
/// along z (the emission axis).
pub fn build_cubic_lattice<F: Real>(
    nx: u32,
    ny: u32,
    nz: u32,
    spacing: F,
    lambda: F,
) -> AtomGeometry<F> {
    let half = |n: u32| real::<F>((n as f64 - 1.0) / 2.0);
    let (cx, cy, cz) = (half(nx), half(ny), half(nz));
    let mut positions = Vec::with_capacity((nx * ny * nz) as usize);
    for ix in 0..nx {
        for iy in 0..ny {
            for iz in 0..nz {
                positions.push([
                    (real::<F>(ix as f64) - cx) * spacing,
                    (real::<F>(iy as f64) - cy) * spacing,
                    (real::<F>(iz as f64) - cz) * spacing,
                ]);
            }
        }
    }
    AtomGeometry {
        positions,
        lambda,
        axis: [F::zero(), F::zero(), F::one()],
        descriptor: format!("lattice {nx}x{ny}x{nz}"),
        seed: None,
    }
}

/// `n_atoms` positions drawn uniformly from a ball of the given diameter,
/// by rejection from the bounding cube. Deterministic for a given seed.
pub fn sample_sphere<F: Real>(
    n_atoms: u32,
    diameter: F,
    lambda: F,
    seed: u64,
) -> AtomGeometry<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = diameter.to_f64().expect("finite diameter") / 2.0;
    let mut positions = Vec::with_capacity(n_atoms as usize);
    while positions.len() < n_atoms as usize {
        let x = rng.gen_range(-radius..=radius);
        let y = rng.gen_range(-radius..=radius);
        let z = rng.gen_range(-radius..=radius);
        if x * x + y * y + z * z <= radius * radius {
            positions.push([real::<F>(x), real::<F>(y), real::<F>(z)]);
        }
    }
    AtomGeometry {
        positions,
        lambda,
        axis: [F::zero(), F::zero(), F::one()],
        descriptor: format!("sphere n={n_atoms}"),
        seed: Some(seed),
    }
}

/// Relative emission intensity along the unit direction `k_hat`.
///
/// `P(axis) = N` exactly; an isolated atom radiates isotropically with
/// `P = 1` everywhere.
pub fn pattern_value<F: Real>(geom: &AtomGeometry<F>, k_hat: [F; 3]) -> F {
    let k = real::<F>(2.0) * F::PI() / geom.lambda;
    let q = [
        k * (geom.axis[0] - k_hat[0]),
        k * (geom.axis[1] - k_hat[1]),
        k * (geom.axis[2] - k_hat[2]),
    ];
    let mut re = F::zero();
    let mut im = F::zero();
    for p in &geom.positions {
        let phase = q[0] * p[0] + q[1] * p[1] + q[2] * p[2];
        re += phase.cos();
        im -= phase.sin();
    }
    (re * re + im * im) / real::<F>(geom.positions.len() as f64)
}

/// Gauss-Legendre nodes and weights on [-1, 1] via Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and its derivative by upward recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn orthonormal_frame<F: Real>(axis: [F; 3]) -> ([F; 3], [F; 3]) {
    let pick = if axis[0].abs() < real::<F>(0.9) {
        [F::one(), F::zero(), F::zero()]
    } else {
        [F::zero(), F::one(), F::zero()]
    };
    let mut e1 = [
        axis[1] * pick[2] - axis[2] * pick[1],
        axis[2] * pick[0] - axis[0] * pick[2],
        axis[0] * pick[1] - axis[1] * pick[0],
    ];
    let norm = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    for c in &mut e1 {
        *c /= norm;
    }
    let e2 = [
        axis[1] * e1[2] - axis[2] * e1[1],
        axis[2] * e1[0] - axis[0] * e1[2],
        axis[0] * e1[1] - axis[1] * e1[0],
    ];
    (e1, e2)
}

/// Unit direction at polar angle `theta` from `axis` and azimuth `phi`
/// around it.
pub fn direction_from_angles<F: Real>(axis: [F; 3], theta: F, phi: F) -> [F; 3] {
    let (e1, e2) = orthonormal_frame(axis);
    let (st, ct) = (theta.sin(), theta.cos());
    let (sp, cp) = (phi.sin(), phi.cos());
    [
        st * (cp * e1[0] + sp * e2[0]) + ct * axis[0],
        st * (cp * e1[1] + sp * e2[1]) + ct * axis[1],
        st * (cp * e1[2] + sp * e2[2]) + ct * axis[2],
    ]
}

/// Integrates the pattern over `cos(theta) in [cos_hi_angle, cos_lo_angle]`
/// with Gauss-Legendre nodes in `cos(theta)` and a uniform periodic rule in
/// `phi`. Rows are evaluated in parallel but reduced in a fixed order.
fn integrate_band<F: Real>(
    geom: &AtomGeometry<F>,
    theta_min: f64,
    theta_max: f64,
    n_theta: usize,
    n_phi: usize,
) -> F {
    let (axis_e1, axis_e2) = orthonormal_frame(geom.axis);
    let (nodes, weights) = gauss_legendre(n_theta);
    let u_lo = theta_max.cos();
    let u_hi = theta_min.cos();
    let half_span = (u_hi - u_lo) / 2.0;
    let mid = (u_hi + u_lo) / 2.0;
    let d_phi = 2.0 * std::f64::consts::PI / n_phi as f64;

    let rows: Vec<F> = (0..n_theta)
        .into_par_iter()
        .map(|i| {
            let u = mid + half_span * nodes[i];
            let sin_theta = (1.0 - u * u).max(0.0).sqrt();
            let su = real::<F>(sin_theta);
            let cu = real::<F>(u);
            let mut phi_vals = Vec::with_capacity(n_phi);
            for j in 0..n_phi {
                let phi = d_phi * j as f64;
                let (s_phi, c_phi) = phi.sin_cos();
                let (c_phi, s_phi) = (real::<F>(c_phi), real::<F>(s_phi));
                let k_hat = [
                    su * (c_phi * axis_e1[0] + s_phi * axis_e2[0]) + cu * geom.axis[0],
                    su * (c_phi * axis_e1[1] + s_phi * axis_e2[1]) + cu * geom.axis[1],
                    su * (c_phi * axis_e1[2] + s_phi * axis_e2[2]) + cu * geom.axis[2],
                ];
                phi_vals.push(pattern_value(geom, k_hat));
            }
            let row = pairwise_sum_generic(&phi_vals) * real::<F>(d_phi);
            row * real::<F>(weights[i] * half_span)
        })
        .collect();
    pairwise_sum_generic(&rows)
}

/// Controls for the adaptive cone-collection quadrature.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    /// Refinement stops once the fraction changes by less than this.
    pub tolerance: f64,
    pub initial_theta: usize,
    pub initial_phi: usize,
    /// Number of resolution doublings attempted after the initial level.
    pub max_doublings: u32,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            tolerance: 1e-3,
            initial_theta: 32,
            initial_phi: 64,
            max_doublings: 4,
        }
    }
}

/// Result of integrating the emission pattern over a collection cone.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectionReport<F> {
    pub cone_half_angle: F,
    /// Probability that an emitted photon falls inside the cone.
    pub fraction: F,
    /// Pattern integral over the full sphere (per-atom normalization).
    pub total: F,
    /// Gauss-Legendre nodes per angular band at the reported resolution.
    pub n_theta: usize,
    /// Azimuthal nodes at the reported resolution.
    pub n_phi: usize,
    pub converged: bool,
    pub descriptor: String,
    pub seed: Option<u64>,
}

/// Fraction of the emission pattern inside a cone of the given half-angle
/// around the phase-match axis.
///
/// The sphere is split at the cone boundary so the forward peak gets its own
/// Gauss-Legendre band; both bands double in resolution until the fraction
/// moves by less than `tolerance`.
pub fn collection_fraction<F: Real>(
    geom: &AtomGeometry<F>,
    cone_half_angle: F,
    opts: &QuadratureOptions,
) -> CollectionReport<F> {
    let cone = cone_half_angle.to_f64().expect("finite cone angle");
    assert!(cone > 0.0 && cone <= std::f64::consts::PI, "cone half-angle in (0, pi]");

    let mut n_theta = opts.initial_theta;
    let mut n_phi = opts.initial_phi;
    let mut previous: Option<F> = None;
    let mut fraction = F::zero();
    let mut total = F::zero();
    let mut converged = false;

    for _ in 0..=opts.max_doublings {
        let inside = integrate_band(geom, 0.0, cone, n_theta, n_phi);
        let outside = if cone < std::f64::consts::PI {
            integrate_band(geom, cone, std::f64::consts::PI, n_theta, n_phi)
        } else {
            F::zero()
        };
        total = inside + outside;
        fraction = inside / total;
        if let Some(prev) = previous {
            if (fraction - prev).abs().to_f64().unwrap_or(f64::INFINITY) < opts.tolerance {
                converged = true;
                break;
            }
        }
        previous = Some(fraction);
        if n_theta == usize::MAX / 2 {
            break;
        }
        n_theta *= 2;
        n_phi *= 2;
    }

    CollectionReport {
        cone_half_angle,
        fraction,
        total,
        n_theta,
        n_phi,
        converged,
        descriptor: geom.descriptor.clone(),
        seed: geom.seed,
    }
}
