//! Yukawa potentials, the cutoff pair potential V_{r,R}, and the
//! sliding-decoupling constructions built on the §4 bump family.

mod bumps;
mod sliding;

pub use bumps::BumpFamily;
pub use sliding::{charge_sum_lower, omega_search, OmegaSearchResult, RadializedSliding};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PotentialsError {
    #[error("Yukawa potential is singular at x = 0")]
    SingularPoint,
    #[error("bump parameter t must lie in (0, 1/2), got {0}")]
    InvalidT(f64),
    #[error("cutoff pair needs 0 < r <= R, got r = {r}, R = {big_r}")]
    InvalidCutoffs { r: f64, big_r: f64 },
    #[error("no omega on the search grid gives a nonnegative transform (widen the grid)")]
    NotFound,
}

/// Short/long distance cutoff lengths 0 < r ≤ R.
#[derive(Debug, Clone, Copy)]
pub struct CutoffPair {
    pub r: f64,
    pub big_r: f64,
}

impl CutoffPair {
    pub fn new(r: f64, big_r: f64) -> Result<Self, PotentialsError> {
        if r > 0.0 && big_r >= r {
            Ok(Self { r, big_r })
        } else {
            Err(PotentialsError::InvalidCutoffs { r, big_r })
        }
    }

    /// V_{r,R}(0) = r⁻¹ - R⁻¹.
    pub fn value_at_zero(&self) -> f64 {
        1.0 / self.r - 1.0 / self.big_r
    }

    /// ∫V_{r,R} = 4π(R² - r²).
    pub fn integral(&self) -> f64 {
        4.0 * std::f64::consts::PI * (self.big_r * self.big_r - self.r * self.r)
    }
}

/// Yukawa potential Y_m(x) = |x|⁻¹ e^{-m|x|}; m = 0 is Coulomb.
pub fn yukawa(x: [f64; 3], m: f64) -> Result<f64, PotentialsError> {
    assert!(m >= 0.0);
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    if r == 0.0 {
        return Err(PotentialsError::SingularPoint);
    }
    Ok((-m * r).exp() / r)
}

pub fn yukawa_radial(r: f64, m: f64) -> f64 {
    (-m * r).exp() / r
}

/// Analytic Fourier transform Ŷ_m(k) = 4π/(k² + m²).
pub fn yukawa_hat(k: f64, m: f64) -> f64 {
    4.0 * std::f64::consts::PI / (k * k + m * m)
}

/// V̂_{r,R}(k) = 4π[(k² + R⁻²)⁻¹ - (k² + r⁻²)⁻¹] ≥ 0.
pub fn v_rr_hat(k: f64, cut: &CutoffPair) -> f64 {
    let k2 = k * k;
    4.0 * std::f64::consts::PI
        * (1.0 / (k2 + cut.big_r.powi(-2)) - 1.0 / (k2 + cut.r.powi(-2)))
}

/// Radial sine transform F̂(k) = (4π/k)∫₀^∞ r f(r) sin(kr) dr of a radial
/// function sampled as a callable, by composite Simpson on [0, r_max].
pub fn radial_sine_transform(f: impl Fn(f64) -> f64, k: f64, r_max: f64, n: usize) -> f64 {
    let n = if n % 2 == 0 { n + 1 } else { n };
    let h = r_max / (n - 1) as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let r = i as f64 * h;
        let v = if r == 0.0 { 0.0 } else { r * f(r) * (k * r).sin() };
        let w = if i == 0 || i == n - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * v;
    }
    4.0 * std::f64::consts::PI / k * acc * h / 3.0
}
