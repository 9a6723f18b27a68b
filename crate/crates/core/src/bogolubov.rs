//! The analytic lower bound for the per-mode quadratic boson Hamiltonian,
//! its exact-diagonalization oracle on truncated two-mode Fock spaces, and
//! the uniform-gas energy density it produces.
//!
//! The mode pair (d₊, d₋) is the normal-mode rotation of the four
//! operators b_{±k,±}: the charge-symmetric c-modes carry only kinetic
//! energy and decouple at zero occupation, so the oracle works on
//!
//!   𝒜(d₊*d₊ + d₋*d₋) + B̄(d₊*d₊ + d₋*d₋ + d₊*d₋* + d₊d₋)
//!     + κ√B̄(d₊* + d₋) + κ̄√B̄(d₊ + d₋*),      B̄ = ℬ₊ + ℬ₋.

use crate::eigen::{self, SparseSym};
use crate::potentials::CutoffPair;
use crate::quad;
use crate::scalars;
use nalgebra::Complex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BogolubovError {
    #[error("invalid mode parameters: {0}")]
    InvalidParams(String),
    #[error("oracle supports exactly 2 modes, got {0}")]
    ModesUnsupported(usize),
    #[error("truncation unconverged: doubling the cutoff shifted the eigenvalue by {shift:e}")]
    TruncationUnconverged { shift: f64 },
}

/// Scalars 𝒜, ℬ₊, ℬ₋, κ of the per-mode quadratic form.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticModeParams {
    pub a: f64,
    pub b_plus: f64,
    pub b_minus: f64,
    pub kappa: Complex<f64>,
}

impl QuadraticModeParams {
    pub fn new(a: f64, b_plus: f64, b_minus: f64, kappa: Complex<f64>) -> Result<Self, BogolubovError> {
        if !(a > 0.0) {
            return Err(BogolubovError::InvalidParams(format!("need A > 0, got {a}")));
        }
        if b_plus < 0.0 || b_minus < 0.0 {
            return Err(BogolubovError::InvalidParams("need B± >= 0".into()));
        }
        Ok(Self { a, b_plus, b_minus, kappa })
    }

    pub fn b_bar(&self) -> f64 {
        self.b_plus + self.b_minus
    }
}

/// Truncated Fock basis: `modes` bosonic modes, occupation 0..=cutoff each.
#[derive(Debug, Clone, Copy)]
pub struct FockTruncation {
    pub modes: usize,
    pub cutoff: usize,
}

impl FockTruncation {
    pub fn two_mode(cutoff: usize) -> Self {
        Self { modes: 2, cutoff }
    }

    pub fn basis_dim(&self) -> usize {
        (self.cutoff + 1).pow(self.modes as u32)
    }
}

/// -(𝒜+ℬ₊+ℬ₋) + √((𝒜+ℬ₊+ℬ₋)² - (ℬ₊+ℬ₋)²) - |κ|².
pub fn bogolubov_bound(p: &QuadraticModeParams) -> f64 {
    let s = p.a + p.b_bar();
    let b = p.b_bar();
    -s + (s * s - b * b).sqrt() - p.kappa.norm_sqr()
}

/// Ground energy of the canonical two-mode Hamiltonian by the exact
/// completion of squares: the κ=0 Bogolubov value minus 2|κ|²B̄/(𝒜+2B̄).
pub fn completed_square_energy(p: &QuadraticModeParams) -> f64 {
    let s = p.a + p.b_bar();
    let b = p.b_bar();
    let kappa0 = -s + (s * s - b * b).sqrt();
    if b == 0.0 {
        return kappa0;
    }
    kappa0 - 2.0 * p.kappa.norm_sqr() * b / (p.a + 2.0 * b)
}

fn assemble(p: &QuadraticModeParams, cutoff: usize) -> SparseSym {
    // complex κ phase is absorbed by the mode rotation d± -> e^{±iφ}d±
    let kappa = p.kappa.norm();
    let bbar = p.b_bar();
    let sqb = bbar.sqrt();
    let n = cutoff + 1;
    let idx = |a: usize, b: usize| a * n + b;
    let mut trip = Vec::with_capacity(4 * n * n);
    for a in 0..n {
        for b in 0..n {
            let i = idx(a, b);
            trip.push((i, i, (p.a + bbar) * (a + b) as f64));
            if a + 1 < n && b + 1 < n {
                let v = bbar * (((a + 1) * (b + 1)) as f64).sqrt();
                let j = idx(a + 1, b + 1);
                trip.push((i, j, v));
                trip.push((j, i, v));
            }
            if kappa > 0.0 {
                if a + 1 < n {
                    let v = kappa * sqb * ((a + 1) as f64).sqrt();
                    let j = idx(a + 1, b);
                    trip.push((i, j, v));
                    trip.push((j, i, v));
                }
                if b + 1 < n {
                    let v = kappa * sqb * ((b + 1) as f64).sqrt();
                    let j = idx(a, b + 1);
                    trip.push((i, j, v));
                    trip.push((j, i, v));
                }
            }
        }
    }
    SparseSym::from_triplets(n * n, trip)
}

fn smallest_eigenvalue(p: &QuadraticModeParams, cutoff: usize) -> f64 {
    let op = assemble(p, cutoff);
    if op.dim <= 400 {
        eigen::dense_smallest(&op.to_dense())
    } else {
        eigen::lanczos_smallest(&op, 400, 1e-13)
    }
}

/// Smallest eigenvalue at a fixed cutoff, without the doubling check.
/// Truncation restricts the variational space, so this is always an upper
/// bound on the true ground energy; the bound-direction ensembles are
/// valid at any cutoff.
pub fn exact_ground_energy_at_cutoff(
    p: &QuadraticModeParams,
    t: &FockTruncation,
) -> Result<f64, BogolubovError> {
    if t.modes != 2 {
        return Err(BogolubovError::ModesUnsupported(t.modes));
    }
    if t.cutoff < 4 {
        return Err(BogolubovError::InvalidParams(format!("cutoff {} < 4", t.cutoff)));
    }
    Ok(smallest_eigenvalue(p, t.cutoff))
}

/// Smallest eigenvalue of the canonical-commutator realization on the
/// truncated basis; errs if doubling the cutoff moves it by more than 1e-8.
pub fn exact_ground_energy_canonical(
    p: &QuadraticModeParams,
    t: &FockTruncation,
) -> Result<f64, BogolubovError> {
    if t.modes != 2 {
        return Err(BogolubovError::ModesUnsupported(t.modes));
    }
    if t.cutoff < 4 {
        return Err(BogolubovError::InvalidParams(format!("cutoff {} < 4", t.cutoff)));
    }
    let e1 = smallest_eigenvalue(p, t.cutoff);
    let e2 = smallest_eigenvalue(p, 2 * t.cutoff);
    let shift = (e2 - e1).abs();
    if shift > 1e-8 {
        return Err(BogolubovError::TruncationUnconverged { shift });
    }
    Ok(e2)
}

/// Foldy energy density of the uniform gas: -I₀ ρ^{5/4} ℓ³.
pub fn foldy_energy_density(rho: f64, ell: f64) -> f64 {
    assert!(rho > 0.0 && ell > 0.0);
    -scalars::i0_closed_form() * rho.powf(1.25) * ell.powi(3)
}

/// Per-k lower-bound density -½(2π)^{-3}[g + f̃ - √((g+f̃)² - g²)] with
/// g(k) = ν·V̂_{r,R}(k) and f̃(k) = (ℓ³γ/2)|k|⁴/(|k|² + (ℓt⁶)^{-2}).
pub fn hq_scalar_bound(
    k: [f64; 3],
    nu: f64,
    ell: f64,
    cut: &CutoffPair,
    gamma: f64,
    tpar: f64,
) -> f64 {
    let kk = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    let g = nu * crate::potentials::v_rr_hat(kk, cut);
    let shift = (ell * tpar.powi(6)).powi(-2);
    let ftilde = 0.5 * ell.powi(3) * gamma * kk.powi(4) / (kk * kk + shift);
    -0.5 * (2.0 * std::f64::consts::PI).powi(-3) * scalars::mode_bracket(g, ftilde)
}

/// Radial integral of the idealized density (V̂ → 4π/k², infrared shift → 0);
/// equals -I₀ ν^{5/4} ℓ^{-3/4} γ^{-1/4} by the k → ν^{1/4}ℓ^{-3/4}γ^{-1/4}k
/// substitution. Verified against that closed form in tests.
pub fn hq_neutral_integral(nu: f64, ell: f64, gamma: f64) -> f64 {
    let integrand = |k: f64| {
        if k == 0.0 {
            return 0.0;
        }
        let g = 4.0 * std::f64::consts::PI * nu / (k * k);
        let f = 0.5 * ell.powi(3) * gamma * k * k;
        k * k * scalars::mode_bracket(g, f)
    };
    let v = quad::integrate_semi_infinite(integrand, 1e-10).expect("idealized density integral");
    // -½(2π)^{-3} · 4π ∫ k² (...) dk
    -v / (4.0 * std::f64::consts::PI * std::f64::consts::PI)
}

/// Relative deviation between the lattice mode sum over (2π/ℓ)Z³ \ {0} and
/// the continuum integral with the central Brillouin cell removed, at a
/// given ρℓ⁴ (scale invariant: only the combination ρℓ⁴ enters).
pub fn foldy_mode_sum_rel_err(rho_l4: f64, nmax: i64) -> f64 {
    let rho = rho_l4; // ℓ = 1 without loss of generality
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut sum = 0.0;
    for nx in -nmax..=nmax {
        for ny in -nmax..=nmax {
            for nz in -nmax..=nmax {
                if nx == 0 && ny == 0 && nz == 0 {
                    continue;
                }
                let k2 = ((nx * nx + ny * ny + nz * nz) as f64) * two_pi * two_pi;
                let g = 4.0 * std::f64::consts::PI * rho / k2;
                let f = 0.5 * k2;
                sum += scalars::mode_bracket(g, f);
            }
        }
    }
    let mode_sum = -0.5 * sum;

    // full radial integral of the density (tolerance scaled to ρ^{5/4})
    let full = {
        let integrand = |k: f64| {
            if k == 0.0 {
                return 0.0;
            }
            let g = 4.0 * std::f64::consts::PI * rho / (k * k);
            let f = 0.5 * k * k;
            k * k * scalars::mode_bracket(g, f)
        };
        let tol = 1e-10 * rho.powf(1.25).max(1.0);
        let v = quad::integrate_semi_infinite(integrand, tol).expect("density integral");
        -v / (4.0 * std::f64::consts::PI * std::f64::consts::PI)
    };
    // central cell [-π, π]³ by tensor Gauss (even integrand: one octant)
    let cell = {
        let (xs, ws) = quad::gauss_legendre_on(48, 0.0, std::f64::consts::PI);
        let mut acc = 0.0;
        for (ix, &kx) in xs.iter().enumerate() {
            for (iy, &ky) in xs.iter().enumerate() {
                for (iz, &kz) in xs.iter().enumerate() {
                    let k2 = kx * kx + ky * ky + kz * kz;
                    let g = 4.0 * std::f64::consts::PI * rho / k2;
                    let f = 0.5 * k2;
                    acc += ws[ix] * ws[iy] * ws[iz] * scalars::mode_bracket(g, f);
                }
            }
        }
        -0.5 * 8.0 * acc / (2.0 * std::f64::consts::PI).powi(3)
    };
    let reference = full - cell;
    ((mode_sum - reference) / reference).abs()
}
