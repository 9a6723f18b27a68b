//! Bisection shooting for the scaled Lane-Emden problem
//! -Δψ - ψ^{3/2} + ψ = 0 with ψ'(0) = 0 and ψ(r) → 0.
//!
//! Radially the equation reads ψ'' + (2/r)ψ' = ψ - ψ^{3/2}. The r = 0
//! coordinate singularity is handled by the series start
//! ψ(r) ≈ ψ(0) + (ψ(0) - ψ(0)^{3/2}) r²/6.

use super::MeanfieldError;

const R_START: f64 = 1e-8;
const R_MAX: f64 = 60.0;
const PSI_FLOOR: f64 = 3e-7;
const RTOL: f64 = 1e-12;
const ATOL: f64 = 1e-14;

/// The decaying radial solution of the normalized equation, sampled on a
/// uniform grid, with the exponential tail coefficient for r > r_end.
#[derive(Debug, Clone)]
pub struct RadialSolution {
    pub r: Vec<f64>,
    pub psi: Vec<f64>,
    pub dpsi: Vec<f64>,
    /// critical central value ψ(0) found by bisection
    pub psi0: f64,
    /// ψ ≈ tail_coeff · e^{-r}/r beyond the last node
    pub tail_coeff: f64,
}

fn rhs(r: f64, psi: f64, dpsi: f64) -> (f64, f64) {
    let nl = psi - sgn_pow32(psi);
    if r < 1e-12 {
        (dpsi, nl / 3.0)
    } else {
        (dpsi, nl - 2.0 / r * dpsi)
    }
}

fn sgn_pow32(x: f64) -> f64 {
    x.signum() * x.abs().powf(1.5)
}

fn series_start(psi0: f64) -> (f64, f64) {
    let a = psi0 - psi0.powf(1.5);
    (psi0 + a * R_START * R_START / 6.0, a * R_START / 3.0)
}

/// One Dormand-Prince 5(4) step; returns (psi, dpsi, err_psi, err_dpsi).
fn dopri5_step(r: f64, y: (f64, f64), h: f64) -> ((f64, f64), f64) {
    const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    // 5th-order weights are row A[5]; 4th-order embedded weights:
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let mut k = [(0.0f64, 0.0f64); 7];
    k[0] = rhs(r, y.0, y.1);
    for i in 0..6 {
        let mut yp = y;
        for (j, kj) in k.iter().enumerate().take(i + 1) {
            yp.0 += h * A[i][j] * kj.0;
            yp.1 += h * A[i][j] * kj.1;
        }
        k[i + 1] = rhs(r + C[i] * h, yp.0, yp.1);
    }
    // k[6] is the FSAL stage evaluated at the 5th-order solution
    let mut y5 = y;
    for (j, kj) in k.iter().enumerate().take(6) {
        y5.0 += h * A[5][j] * kj.0;
        y5.1 += h * A[5][j] * kj.1;
    }
    let mut y4 = y;
    for (j, kj) in k.iter().enumerate() {
        y4.0 += h * B4[j] * kj.0;
        y4.1 += h * B4[j] * kj.1;
    }
    let e0 = (y5.0 - y4.0).abs() / (ATOL + RTOL * y5.0.abs().max(y.0.abs()));
    let e1 = (y5.1 - y4.1).abs() / (ATOL + RTOL * y5.1.abs().max(y.1.abs()));
    (y5, e0.max(e1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShootOutcome {
    /// ψ crossed zero
    Over,
    /// ψ' turned positive while ψ > 0
    Under,
}

/// Integrate from the series start and classify the trajectory.
pub fn classify(psi0: f64) -> ShootOutcome {
    let (mut psi, mut dpsi) = series_start(psi0);
    let mut r = R_START;
    let mut h = 1e-4;
    while r < R_MAX {
        let ((p, d), err) = dopri5_step(r, (psi, dpsi), h);
        if err <= 1.0 {
            r += h;
            psi = p;
            dpsi = d;
            if psi <= 0.0 {
                return ShootOutcome::Over;
            }
            if dpsi > 0.0 {
                return ShootOutcome::Under;
            }
        }
        let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h = (h * fac).min(R_MAX - r).min(0.5);
        if h < 1e-14 {
            break;
        }
    }
    // no event: still decaying, treat as the under side
    ShootOutcome::Under

}

/// Bisection on ψ(0): over-shoot vs under-shoot bracket the critical value.
pub fn find_critical_psi0() -> Result<(f64, f64), MeanfieldError> {
    let scan = [1.2, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0];
    let mut lo = None;
    let mut hi = None;
    for &p in &scan {
        match classify(p) {
            ShootOutcome::Under => lo = Some(p),
            ShootOutcome::Over => {
                hi = Some(p);
                break;
            }
        }
    }
    let (mut lo, mut hi) = match (lo, hi) {
        (Some(l), Some(h)) => (l, h),
        _ => return Err(MeanfieldError::BracketNotFound),
    };
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match classify(mid) {
            ShootOutcome::Over => hi = mid,
            ShootOutcome::Under => lo = mid,
        }
    }
    Ok((lo, hi))
}

/// Solve the normalized problem and resample ψ on a uniform grid of
/// `n_nodes` points covering [0, r_end].
pub fn solve_normalized_n(n_nodes: usize) -> Result<RadialSolution, MeanfieldError> {
    let (lo, _hi) = find_critical_psi0()?;
    // integrate the under-side endpoint: it decays monotonically until the
    // bisection noise floor, where we truncate and attach the tail
    let psi0 = lo;
    let r_end = integrate_until_floor(psi0);
    let n = n_nodes.max(64);
    let h_grid = r_end / (n - 1) as f64;

    let mut r_grid = vec![0.0; n];
    let mut psi_v = vec![0.0; n];
    let mut dpsi_v = vec![0.0; n];
    r_grid[0] = 0.0;
    psi_v[0] = psi0;
    dpsi_v[0] = 0.0;

    let (mut psi, mut dpsi) = series_start(psi0);
    let mut r = R_START;
    let mut h = 1e-5_f64;
    for i in 1..n {
        let target = i as f64 * h_grid;
        while r < target {
            let step = h.min(target - r);
            let ((p, d), err) = dopri5_step(r, (psi, dpsi), step);
            if err <= 1.0 {
                r += step;
                psi = p;
                dpsi = d;
            }
            let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
            h = (h * fac).min(0.5).max(1e-13);
        }
        r_grid[i] = target;
        psi_v[i] = psi.max(0.0);
        dpsi_v[i] = dpsi;
    }
    let tail_coeff = psi_v[n - 1] * r_end * r_end.exp();
    Ok(RadialSolution { r: r_grid, psi: psi_v, dpsi: dpsi_v, psi0, tail_coeff })
}

fn integrate_until_floor(psi0: f64) -> f64 {
    let (mut psi, mut dpsi) = series_start(psi0);
    let mut r = R_START;
    let mut h = 1e-4;
    while r < R_MAX {
        let ((p, d), err) = dopri5_step(r, (psi, dpsi), h);
        if err <= 1.0 {
            r += h;
            psi = p;
            dpsi = d;
            if psi <= PSI_FLOOR || dpsi > 0.0 || psi <= 0.0 {
                return r;
            }
        }
        let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h = (h * fac).min(0.5).max(1e-13);
    }
    R_MAX
}
