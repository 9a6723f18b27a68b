//! Sliding decoupling: positivity of F = Y_m - h·Y_{m+ω/λ} and the
//! resulting -N·F(0⁺)/2 lower bound on charge sums.
//!
//! h = γθ*θ is cube-symmetric, not radial; it is radialized by spherical
//! averaging and the transform check runs on the radialized function
//! (cross-checked against a direct 3D transform in tests).

use super::bumps::BumpFamily;
use super::PotentialsError;
use crate::quad;

const RADIAL_NODES: usize = 8193;
const K_SCAN_POINTS: usize = 280;
const K_MIN: f64 = 1e-2;
const K_MAX: f64 = 1500.0;
const F_HAT_TOL: f64 = -1e-6;
const OMEGA_GRID_RATIO: f64 = 1.25;

/// Radialized sliding kernel at sharpness t.
pub struct RadializedSliding {
    pub family: BumpFamily,
    h_rad: Vec<f64>,
    step: f64,
    pub r_support: f64,
}

impl RadializedSliding {
    pub fn new(t: f64) -> Result<Self, PotentialsError> {
        let family = BumpFamily::build(t)?;
        let r_support = 3.0f64.sqrt() * (1.0 - t);
        let step = r_support / (RADIAL_NODES - 1) as f64;
        // fixed angular rule, one octant-quarter by cubic symmetry
        let (mu, wmu) = quad::gauss_legendre(24);
        let nphi = 48usize;
        let phis: Vec<(f64, f64)> = (0..nphi)
            .map(|ip| {
                let phi = (ip as f64 + 0.5) * std::f64::consts::FRAC_PI_2 / nphi as f64;
                phi.sin_cos()
            })
            .collect();
        let mut h_rad = vec![0.0; RADIAL_NODES];
        for (i, slot) in h_rad.iter_mut().enumerate() {
            let r = i as f64 * step;
            if r == 0.0 {
                *slot = 1.0;
                continue;
            }
            let mut acc = 0.0;
            for (m, w) in mu.iter().zip(&wmu) {
                let st = (1.0 - m * m).sqrt();
                let z = r * m;
                for &(sp, cp) in &phis {
                    acc += w * family.h([r * st * cp, r * st * sp, z]);
                }
            }
            *slot = acc / (2.0 * nphi as f64);
        }
        Ok(Self { family, h_rad, step, r_support })
    }

    pub fn h_rad_at(&self, r: f64) -> f64 {
        if r < 0.0 || r >= self.r_support {
            return 0.0;
        }
        let u = r / self.step;
        let i = (u as usize).min(self.h_rad.len() - 2);
        let frac = u - i as f64;
        self.h_rad[i] * (1.0 - frac) + self.h_rad[i + 1] * frac
    }

    /// F(x) = Y_m(x) - h(|x|)·Y_{m+s}(x), radialized.
    pub fn f_value(&self, r: f64, m: f64, s: f64) -> f64 {
        ((-m * r).exp() - self.h_rad_at(r) * (-s * r).exp()) / r
    }

    /// Numerical F(0⁺) by quadratic extrapolation from the first radial
    /// nodes (where the tabulated kernel is exact); analytically equals
    /// s - m = ω/λ.
    pub fn f_zero_limit(&self, m: f64, s: f64) -> f64 {
        let h = self.step;
        let f1 = self.f_value(h, m, s);
        let f2 = self.f_value(2.0 * h, m, s);
        let f3 = self.f_value(3.0 * h, m, s);
        3.0 * f1 - 3.0 * f2 + f3
    }

    /// F̂(k) = Ŷ_m(k) - (4π/k)∫ h_rad(r) e^{-s r} sin(kr) dr.
    pub fn f_hat(&self, k: f64, m: f64, s: f64) -> f64 {
        let n = self.h_rad.len();
        let h = self.step;
        // composite Simpson over the tabulated kernel (odd node count)
        let mut acc = 0.0;
        for (i, &hr) in self.h_rad.iter().enumerate() {
            let r = i as f64 * h;
            let v = hr * (-s * r).exp() * (k * r).sin();
            let w = if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * v;
        }
        let transform = 4.0 * std::f64::consts::PI / k * acc * h / 3.0;
        4.0 * std::f64::consts::PI / (k * k + m * m) - transform
    }

    /// Minimum of F̂ over the log-spaced k scan.
    pub fn f_hat_min(&self, m: f64, s: f64) -> (f64, f64) {
        let ratio = (K_MAX / K_MIN).powf(1.0 / (K_SCAN_POINTS - 1) as f64);
        let mut k = K_MIN;
        let mut best = f64::INFINITY;
        let mut arg = k;
        for _ in 0..K_SCAN_POINTS {
            let v = self.f_hat(k, m, s);
            if v < best {
                best = v;
                arg = k;
            }
            k *= ratio;
        }
        (best, arg)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OmegaSearchResult {
    pub omega: f64,
    pub min_f_hat: f64,
    pub argmin_k: f64,
    /// numerical F(0⁺); equals ω/λ up to the small-r h correction
    pub f_zero: f64,
}

/// Smallest ω on the geometric grid (start 1, ratio 1.25) such that the
/// transform of Y_m - h·Y_{m+ω/λ} stays above -1e-6 on the k scan.
pub fn omega_search(t: f64, m: f64, lam: f64) -> Result<OmegaSearchResult, PotentialsError> {
    assert!(lam > 0.0);
    let kernel = RadializedSliding::new(t)?;
    omega_search_with(&kernel, m, lam)
}

/// Same search over a prebuilt kernel (the kernel build dominates cost).
pub fn omega_search_with(
    kernel: &RadializedSliding,
    m: f64,
    lam: f64,
) -> Result<OmegaSearchResult, PotentialsError> {
    let mut omega = 1.0;
    while omega < 1e8 {
        let s = m + omega / lam;
        let (min_f_hat, argmin_k) = kernel.f_hat_min(m, s);
        if min_f_hat >= F_HAT_TOL {
            return Ok(OmegaSearchResult {
                omega,
                min_f_hat,
                argmin_k,
                f_zero: kernel.f_zero_limit(m, s),
            });
        }
        omega *= OMEGA_GRID_RATIO;
    }
    Err(PotentialsError::NotFound)
}

/// Σ_{i<j} e_i e_j F(x_i - x_j) and its lower bound -N·F(0⁺)/2 for a
/// positive-definite F.
pub fn charge_sum_lower(
    points: &[[f64; 3]],
    charges: &[i8],
    f0: f64,
    f: impl Fn(f64) -> f64,
) -> (f64, f64) {
    assert_eq!(points.len(), charges.len());
    let mut lhs = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let dx = [
                points[i][0] - points[j][0],
                points[i][1] - points[j][1],
                points[i][2] - points[j][2],
            ];
            let r = (dx[0] * dx[0] + dx[1] * dx[1] + dx[2] * dx[2]).sqrt();
            lhs += charges[i] as f64 * charges[j] as f64 * f(r);
        }
    }
    (lhs, -(points.len() as f64) * f0 / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn omega_search_t02_positive() {
        let res = omega_search(0.2, 0.0, 1.0).unwrap();
        assert!(res.min_f_hat >= -1e-6);
        // the oracle scan puts the threshold near 7.5 for t = 0.2; the
        // grid value may land one 1.25-step either side of it depending
        // on quadrature noise at the ±1e-7 level
        assert!(res.omega >= 4.0 && res.omega <= 15.0, "omega = {}", res.omega);
    }

    #[test]
    fn f_zero_limit_equals_omega() {
        let kernel = RadializedSliding::new(0.2).unwrap();
        for (m, omega, lam) in [(0.0, 8.0, 1.0), (1.0, 12.0, 2.0)] {
            let fz = kernel.f_zero_limit(m, m + omega / lam);
            assert!(
                (fz - omega / lam).abs() < 1e-3 * (omega / lam),
                "f(0+) = {fz} vs {}",
                omega / lam
            );
        }
    }

    #[test]
    fn charge_sum_bound_trivia() {
        // single particle: empty sum
        let (lhs, bound) = charge_sum_lower(&[[0.0; 3]], &[1], 5.0, |_| 1.0);
        assert_eq!(lhs, 0.0);
        assert!(lhs >= bound);
        // two equal charges at distance d: F(d) ≥ -F0
        let (lhs, bound) =
            charge_sum_lower(&[[0.0; 3], [1.0, 0.0, 0.0]], &[1, 1], 5.0, |r| (-r).exp() / r);
        assert!(lhs >= bound);
    }

    #[test]
    fn charge_sum_bound_random_neutral() {
        let kernel = RadializedSliding::new(0.2).unwrap();
        let res = omega_search_with(&kernel, 0.0, 1.0).unwrap();
        let s = res.omega;
        let f0 = res.f_zero;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let mut pts = Vec::new();
            let mut chg = Vec::new();
            for i in 0..10 {
                pts.push([rng.gen::<f64>() * 2.0, rng.gen::<f64>() * 2.0, rng.gen::<f64>() * 2.0]);
                chg.push(if i % 2 == 0 { 1i8 } else { -1 });
            }
            let (lhs, bound) = charge_sum_lower(&pts, &chg, f0, |r| kernel.f_value(r, 0.0, s));
            assert!(lhs >= bound - 1e-9, "lhs={lhs} bound={bound}");
        }
    }

    #[test]
    fn radial_transform_matches_direct_3d_sum() {
        // one (t, ω) point: truncate F at r_c and compare the radial sine
        // transform against a direct 3D lattice transform of the same
        // truncated kernel
        let kernel = RadializedSliding::new(0.3).unwrap();
        let (m, s) = (1.0, 9.0);
        let rc = 9.0;
        let l = 20.0;
        let n = 72usize;
        let h = l / n as f64;
        let two_pi = 2.0 * std::f64::consts::PI;
        for nk in [1usize, 2, 4] {
            let k = two_pi * nk as f64 / l;
            // radial route on the truncated kernel
            let radial = {
                let nr = 6001;
                let dr = rc / (nr - 1) as f64;
                let mut acc = 0.0;
                for i in 0..nr {
                    let r = i as f64 * dr;
                    let v = if r == 0.0 { 0.0 } else { r * kernel.f_value(r, m, s) * (k * r).sin() };
                    let w = if i == 0 || i == nr - 1 {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    acc += w * v;
                }
                4.0 * std::f64::consts::PI / k * acc * dr / 3.0
            };
            // direct 3D sum at k along the x axis
            let mut direct = 0.0;
            for ix in 0..n {
                let x = -l / 2.0 + (ix as f64 + 0.5) * h;
                let cx = (k * x).cos();
                for iy in 0..n {
                    let y = -l / 2.0 + (iy as f64 + 0.5) * h;
                    for iz in 0..n {
                        let z = -l / 2.0 + (iz as f64 + 0.5) * h;
                        let r = (x * x + y * y + z * z).sqrt();
                        if r > rc || r == 0.0 {
                            continue;
                        }
                        direct += kernel.f_value(r, m, s) * cx;
                    }
                }
            }
            direct *= h * h * h;
            assert!(
                (radial - direct).abs() <= 0.03 * radial.abs().max(0.1),
                "k={k}: radial={radial} direct={direct}"
            );
        }
    }
}
