//! The constrained minimization of ½∫|∇Φ|² - I₀∫Φ^{5/2} over ∫Φ² ≤ 1,
//! solved two independent ways: Lane-Emden shooting after a scaling
//! reduction, and projected gradient flow on a 3D grid.
//!
//! The minimizer satisfies -ΔΦ - (5/2)I₀Φ^{3/2} + μΦ = 0 for a Lagrange
//! multiplier μ > 0. Writing Φ(x) = b·ψ(c·x) with c² = μ and
//! b = 4μ²/(25 I₀²) reduces the equation to -Δψ - ψ^{3/2} + ψ = 0, and
//! the mass constraint fixes μ = (625 I₀⁴ / (16∫ψ²))^{2/5}.
//!
//! The constraint is stated as ∫Φ² ≤ 1; it saturates at the minimizer
//! (E(cΦ) is strictly decreasing in c at c = 1), so we solve with
//! equality and assert the dilation argument in tests.

mod flow;
mod shooting;

pub use flow::{
    dyson_constant_flow, energy_radial_quadrature, gaussian_field, gradient_flow_minimize,
    FlowRun, GridField3D,
};
pub use shooting::{classify, find_critical_psi0, solve_normalized_n, RadialSolution, ShootOutcome};

use crate::quad::{self, QuadError};
use crate::scalars;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeanfieldError {
    #[error("no over/under-shoot sign change within the psi(0) search range")]
    BracketNotFound,
    #[error("radial grid too coarse: {0} nodes (need at least 64)")]
    GridTooCoarse(usize),
    #[error("gradient flow diverged: energy increased for 10 consecutive accepted steps")]
    Diverged,
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// Sampled radial profile Φ(r) with its energy decomposition.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub r_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// dΦ/dr at the nodes, from the integrator
    pub derivs: Vec<f64>,
    /// Lagrange multiplier of the Euler-Lagrange equation
    pub mu: f64,
    /// ∫Φ² (4π ∫ r²Φ² dr)
    pub mass: f64,
    /// T = ½∫|∇Φ|²
    pub kinetic: f64,
    /// P = ∫Φ^{5/2}
    pub potential: f64,
    /// T - I₀·P, stored exactly as that difference
    pub energy: f64,
    /// Φ ≈ tail_coeff · e^{-√μ r}/r beyond the grid
    pub tail_coeff: f64,
}

impl RadialProfile {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }
}

/// Composite Simpson on a uniform grid (trapezoid fallback on a trailing
/// interval when the node count is even).
fn simpson(h: f64, f: &[f64]) -> f64 {
    let n = f.len();
    assert!(n >= 3);
    let m = if n % 2 == 1 { n } else { n - 1 };
    let mut s = f[0] + f[m - 1];
    for (i, &v) in f.iter().enumerate().take(m - 1).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    let mut total = s * h / 3.0;
    if n % 2 == 0 {
        total += 0.5 * h * (f[n - 2] + f[n - 1]);
    }
    total
}

/// Max Euler-Lagrange residual |-ΔΦ - (5/2)I₀Φ^{3/2} + μΦ| over interior
/// nodes, with the radial Laplacian Δ = d²/dr² + (2/r)d/dr in second-order
/// finite differences.
pub fn el_residual(p: &RadialProfile) -> Result<f64, MeanfieldError> {
    let n = p.r_grid.len();
    if n < 64 {
        return Err(MeanfieldError::GridTooCoarse(n));
    }
    let h = p.r_grid[1] - p.r_grid[0];
    let i0 = scalars::i0_closed_form();
    let mut worst = 0.0f64;
    for i in 1..n - 1 {
        let r = p.r_grid[i];
        let lap = (p.values[i + 1] - 2.0 * p.values[i] + p.values[i - 1]) / (h * h)
            + (2.0 / r) * (p.values[i + 1] - p.values[i - 1]) / (2.0 * h);
        let resid = -lap - 2.5 * i0 * p.values[i].max(0.0).powf(1.5) + p.mu * p.values[i];
        worst = worst.max(resid.abs());
    }
    Ok(worst)
}

/// Solve the normalized problem on the default grid.
pub fn solve_normalized() -> Result<RadialSolution, MeanfieldError> {
    solve_normalized_n(4096)
}

/// Rescale the normalized solution to the unit-mass minimizer of the
/// original functional: Φ(x) = b·ψ(c·x), c² = μ, b = 4μ²/(25 I₀²),
/// μ = (625 I₀⁴/(16∫ψ²))^{2/5}.
pub fn rescale_to_unit_mass(psi: &RadialSolution) -> RadialProfile {
    let i0 = scalars::i0_closed_form();
    let h_psi = psi.r[1] - psi.r[0];

    // ∫ψ² with the analytic e^{-r}/r tail attached
    let integrand: Vec<f64> = psi.r.iter().zip(&psi.psi).map(|(&r, &v)| r * r * v * v).collect();
    let r_end = *psi.r.last().unwrap();
    let tail_m = psi.tail_coeff * psi.tail_coeff * (-2.0 * r_end).exp() / 2.0;
    let m_psi = 4.0 * std::f64::consts::PI * (simpson(h_psi, &integrand) + tail_m);

    let mu = (625.0 * i0.powi(4) / (16.0 * m_psi)).powf(0.4);
    let c = mu.sqrt();
    let b = 4.0 * mu * mu / (25.0 * i0 * i0);

    let r_grid: Vec<f64> = psi.r.iter().map(|&r| r / c).collect();
    let values: Vec<f64> = psi.psi.iter().map(|&v| b * v).collect();
    let derivs: Vec<f64> = psi.dpsi.iter().map(|&d| b * c * d).collect();
    let h = r_grid[1] - r_grid[0];

    let f_mass: Vec<f64> = r_grid.iter().zip(&values).map(|(&r, &v)| r * r * v * v).collect();
    let f_kin: Vec<f64> = r_grid.iter().zip(&derivs).map(|(&r, &d)| r * r * d * d).collect();
    let f_pot: Vec<f64> =
        r_grid.iter().zip(&values).map(|(&r, &v)| r * r * v.max(0.0).powf(2.5)).collect();

    let rb = *r_grid.last().unwrap();
    let t_phi = b * psi.tail_coeff / c; // Φ ≈ t_phi e^{-c r}/r
    let tail_mass = t_phi * t_phi * (-2.0 * c * rb).exp() / (2.0 * c);
    let tail_kin = (t_phi * c) * (t_phi * c) * (-2.0 * c * rb).exp() / (2.0 * c);
    let tail_pot = t_phi.powf(2.5) * rb.powf(-0.5) * (-2.5 * c * rb).exp() / (2.5 * c);

    let four_pi = 4.0 * std::f64::consts::PI;
    let mass = four_pi * (simpson(h, &f_mass) + tail_mass);
    let kinetic = 0.5 * four_pi * (simpson(h, &f_kin) + tail_kin);
    let potential = four_pi * (simpson(h, &f_pot) + tail_pot);
    let energy = kinetic - i0 * potential;

    RadialProfile { r_grid, values, derivs, mu, mass, kinetic, potential, energy, tail_coeff: t_phi }
}

/// The minimizer via shooting, on the default grid.
pub fn minimize_shooting() -> Result<RadialProfile, MeanfieldError> {
    Ok(rescale_to_unit_mass(&solve_normalized()?))
}

/// Dyson's constant A = -min E.
pub fn dyson_constant() -> Result<f64, MeanfieldError> {
    Ok(-minimize_shooting()?.energy)
}

/// E(N) = -A·N^{7/5}.
pub fn dyson_energy(a: f64, n: u64) -> f64 {
    assert!(n >= 1);
    -a * (n as f64).powf(1.4)
}

/// Cubic Hermite evaluation of (Φ, Φ') between grid nodes.
fn hermite_eval(p: &RadialProfile, r: f64) -> (f64, f64) {
    let h = p.r_grid[1] - p.r_grid[0];
    let n = p.r_grid.len();
    let last = p.r_grid[n - 1];
    if r >= last {
        let c = p.mu.sqrt();
        let v = p.tail_coeff * (-c * r).exp() / r;
        return (v, -v * (c + 1.0 / r));
    }
    let i = ((r / h) as usize).min(n - 2);
    let t = (r - p.r_grid[i]) / h;
    let (y0, y1) = (p.values[i], p.values[i + 1]);
    let (d0, d1) = (p.derivs[i] * h, p.derivs[i + 1] * h);
    let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    let h10 = t * (1.0 - t) * (1.0 - t);
    let h01 = t * t * (3.0 - 2.0 * t);
    let h11 = t * t * (t - 1.0);
    let v = h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1;
    let dh00 = 6.0 * t * (t - 1.0);
    let dh10 = (1.0 - t) * (1.0 - 3.0 * t);
    let dh01 = -dh00;
    let dh11 = t * (3.0 * t - 2.0);
    let dv = (dh00 * y0 + dh10 * d0 + dh01 * y1 + dh11 * d1) / h;
    (v, dv)
}

/// Evaluate ½∫|∇√ρ|² - I₀∫ρ^{5/4} on ρ(x) = N^{8/5}Φ(N^{1/5}x)² by
/// adaptive quadrature over the interpolated profile. N = 1 gives the
/// unit-scale energy by the same route.
pub fn scaled_energy_quadrature(p: &RadialProfile, n: f64) -> Result<f64, QuadError> {
    let i0 = scalars::i0_closed_form();
    let s = n.powf(0.2);
    let amp = n.powf(0.8);
    let r_max = p.r_grid.last().unwrap() / s;
    let tol = 1e-13 * n.powf(1.4).max(1.0);
    let kin = quad::integrate(
        |r| {
            let (_, d) = hermite_eval(p, s * r);
            let dr = amp * s * d; // d/dr of N^{4/5}Φ(N^{1/5}r)
            r * r * dr * dr
        },
        0.0,
        r_max,
        tol,
    )?;
    let pot = quad::integrate(
        |r| {
            let (v, _) = hermite_eval(p, s * r);
            r * r * (amp * v.max(0.0)).powf(2.5)
        },
        0.0,
        r_max,
        tol,
    )?;
    let four_pi = 4.0 * std::f64::consts::PI;
    Ok(0.5 * four_pi * kin - i0 * four_pi * pot)
}

/// Relative mismatch of the scaling identity: the functional on
/// ρ(x) = N^{8/5}Φ(N^{1/5}x)² against N^{7/5} times the unit-scale value.
pub fn scaling_identity_rel_err(p: &RadialProfile, n: u64) -> Result<f64, QuadError> {
    let e1 = scaled_energy_quadrature(p, 1.0)?;
    let en = scaled_energy_quadrature(p, n as f64)?;
    let rhs = (n as f64).powf(1.4) * e1;
    Ok(((en - rhs) / rhs).abs())
}

/// Energy of the numerically dilated profile Φ_λ(x) = λ^{3/2}Φ(λx);
/// stationarity at λ = 1 is the virial identity.
pub fn dilated_energy(p: &RadialProfile, lambda: f64) -> f64 {
    let i0 = scalars::i0_closed_form();
    let h = (p.r_grid[1] - p.r_grid[0]) / lambda;
    let amp = lambda.powf(1.5);
    let f_kin: Vec<f64> = p
        .r_grid
        .iter()
        .zip(&p.derivs)
        .map(|(&r, &d)| {
            let rr = r / lambda;
            let dd = amp * lambda * d;
            rr * rr * dd * dd
        })
        .collect();
    let f_pot: Vec<f64> = p
        .r_grid
        .iter()
        .zip(&p.values)
        .map(|(&r, &v)| {
            let rr = r / lambda;
            rr * rr * (amp * v.max(0.0)).powf(2.5)
        })
        .collect();
    let four_pi = 4.0 * std::f64::consts::PI;
    0.5 * four_pi * simpson(h, &f_kin) - i0 * four_pi * simpson(h, &f_pot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::i0_closed_form;

    fn profile() -> RadialProfile {
        minimize_shooting().unwrap()
    }

    #[test]
    fn el_residual_zero_solution() {
        let p = RadialProfile {
            r_grid: (0..128).map(|i| i as f64 * 0.1).collect(),
            values: vec![0.0; 128],
            derivs: vec![0.0; 128],
            mu: 0.7,
            mass: 0.0,
            kinetic: 0.0,
            potential: 0.0,
            energy: 0.0,
            tail_coeff: 0.0,
        };
        assert_eq!(el_residual(&p).unwrap(), 0.0);
    }

    #[test]
    fn el_residual_grid_too_coarse() {
        let p = RadialProfile {
            r_grid: (0..32).map(|i| i as f64 * 0.1).collect(),
            values: vec![0.0; 32],
            derivs: vec![0.0; 32],
            mu: 0.7,
            mass: 0.0,
            kinetic: 0.0,
            potential: 0.0,
            energy: 0.0,
            tail_coeff: 0.0,
        };
        assert!(matches!(el_residual(&p), Err(MeanfieldError::GridTooCoarse(32))));
    }

    #[test]
    fn solution_satisfies_el_equation() {
        let p = profile();
        let res = el_residual(&p).unwrap();
        assert!(res <= 1e-6 * p.max_abs(), "residual {res} vs max {}", p.max_abs());
    }

    #[test]
    fn normalized_solution_satisfies_its_equation() {
        // ψ solves -Δψ - ψ^{3/2} + ψ = 0 iff Φ = bψ with b = 4/(25 I₀²)
        // solves the full equation at μ = 1; the second-order stencil
        // needs the finer grid to push truncation below the gate
        let psi = solve_normalized_n(16384).unwrap();
        let i0 = i0_closed_form();
        let b = 4.0 / (25.0 * i0 * i0);
        let p = RadialProfile {
            r_grid: psi.r.clone(),
            values: psi.psi.iter().map(|&v| b * v).collect(),
            derivs: psi.dpsi.iter().map(|&d| b * d).collect(),
            mu: 1.0,
            mass: 0.0,
            kinetic: 0.0,
            potential: 0.0,
            energy: 0.0,
            tail_coeff: 0.0,
        };
        let res = el_residual(&p).unwrap();
        let max = p.values.iter().fold(0.0f64, |m, &v| m.max(v));
        assert!(res <= 1e-6 * max, "normalized residual {res} vs max {max}");
    }

    #[test]
    fn mu_perturbation_raises_residual() {
        let mut p = profile();
        p.mu += 0.1;
        let res = el_residual(&p).unwrap();
        assert!(res >= 0.09 * p.max_abs());
    }

    #[test]
    fn unit_mass_and_positive_mu() {
        let p = profile();
        assert!((p.mass - 1.0).abs() < 1e-8, "mass {}", p.mass);
        assert!(p.mu > 0.0);
        assert!(p.values.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn energy_stored_exactly() {
        let p = profile();
        assert_eq!(p.energy, p.kinetic - i0_closed_form() * p.potential);
    }

    #[test]
    fn dyson_constant_matches_oracle() {
        // frozen from the independent high-tolerance shooting oracle
        let a = dyson_constant().unwrap();
        assert!(a > 0.0);
        assert!((a - 0.050341175673713365).abs() < 1e-6 * a, "A = {a}");
    }

    #[test]
    fn virial_identities() {
        let p = profile();
        let t = p.kinetic;
        assert!((2.0 * t - 0.75 * i0_closed_form() * p.potential).abs() <= 1e-4 * t);
        assert!((p.energy + 5.0 / 3.0 * t).abs() <= 1e-4 * t);
    }

    #[test]
    fn dilation_local_minimum() {
        let p = profile();
        let e0 = dilated_energy(&p, 1.0);
        assert!(dilated_energy(&p, 1.0 + 1e-3) > e0);
        assert!(dilated_energy(&p, 1.0 - 1e-3) > e0);
        // and the undilated evaluation agrees with the stored energy
        assert!((e0 - p.energy).abs() < 1e-10);
    }

    #[test]
    fn grid_doubling_stability() {
        let a1 = -rescale_to_unit_mass(&solve_normalized_n(4096).unwrap()).energy;
        let a2 = -rescale_to_unit_mass(&solve_normalized_n(8192).unwrap()).energy;
        assert!((a1 - a2).abs() <= 1e-4 * a1.abs());
    }

    #[test]
    fn dyson_energy_power_law() {
        let a = 0.05;
        assert_eq!(dyson_energy(a, 1), -a);
        let r = dyson_energy(a, 64) / dyson_energy(a, 32);
        assert!((r - 2.0f64.powf(1.4)).abs() < 1e-12);
    }

    #[test]
    fn scaling_identity_on_profile() {
        let p = profile();
        for n in [8u64, 32] {
            let rel = scaling_identity_rel_err(&p, n).unwrap();
            assert!(rel < 1e-6, "N={n}: rel={rel}");
        }
    }
}
