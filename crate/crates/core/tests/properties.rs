//! Property tests for the algebraic invariants that hold pointwise.

use bosegas::bogolubov::{bogolubov_bound, completed_square_energy, QuadraticModeParams};
use bosegas::lattice::{self, LatticeField};
use bosegas::scalars::{mode_bracket, mode_bracket_direct};
use nalgebra::Complex;
use proptest::prelude::*;

proptest! {
    #[test]
    fn bracket_nonnegative_and_below_g(g in 1e-6f64..1e6, f in 0.0f64..1e6) {
        let b = mode_bracket(g, f);
        prop_assert!(b >= 0.0);
        prop_assert!(b <= g * (1.0 + 1e-12));
    }

    #[test]
    fn bracket_forms_agree_when_conditioned(g in 0.1f64..100.0, f in 0.0f64..100.0) {
        let a = mode_bracket(g, f);
        let b = mode_bracket_direct(g, f);
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn bracket_monotone_in_g(g in 0.1f64..50.0, dg in 0.0f64..50.0, f in 0.01f64..50.0) {
        prop_assert!(mode_bracket(g + dg, f) >= mode_bracket(g, f) - 1e-12);
    }

    #[test]
    fn bogolubov_bound_below_canonical_energy(
        a in 1e-3f64..10.0,
        bp in 0.0f64..10.0,
        bm in 0.0f64..10.0,
        k in 0.0f64..3.0,
    ) {
        // the completed-square value is the exact canonical ground energy
        let p = QuadraticModeParams::new(a, bp, bm, Complex::new(k, 0.0)).unwrap();
        prop_assert!(completed_square_energy(&p) >= bogolubov_bound(&p) - 1e-12);
    }

    #[test]
    fn triangle_inequality_2d(
        s1 in -5.0f64..5.0, s2 in -5.0f64..5.0,
        t1 in -5.0f64..5.0, t2 in -5.0f64..5.0,
    ) {
        let lhs = ((s1 * s1 + t1 * t1).sqrt() - (s2 * s2 + t2 * t2).sqrt()).powi(2);
        prop_assert!(lhs <= (s1 - s2).powi(2) + (t1 - t2).powi(2) + 1e-12);
    }

    #[test]
    fn lattice_energy_homogeneous_degree_two(
        vals in proptest::collection::vec(-3.0f64..3.0, 8),
        c in 0.1f64..4.0,
    ) {
        let f = LatticeField::from_values([0, 0, 0], [2, 2, 2], vals);
        let t = lattice::lattice_energy(&f);
        let tc = lattice::lattice_energy(&f.scaled(c));
        prop_assert!((tc - c * c * t).abs() <= 1e-10 * t.abs().max(1.0));
    }

    #[test]
    fn dirichlet_identity_random_cells(vals in proptest::collection::vec(-2.0f64..2.0, 27)) {
        let f = LatticeField::from_values([0, 0, 0], [3, 3, 3], vals);
        let t = lattice::lattice_energy(&f);
        let e = lattice::interpolate(&f).dirichlet_energy();
        prop_assert!((t - e).abs() <= 1e-10 * t.abs().max(1.0));
    }

    #[test]
    fn jensen_lower_always(
        vals in proptest::collection::vec(0.0f64..20.0, 2..8),
        beta in 1.0f64..6.0,
    ) {
        let w = vec![1.0 / vals.len() as f64; vals.len()];
        let (lhs, mid, _) = lattice::jensen_gap(&vals, &w, beta).unwrap();
        prop_assert!(lhs <= mid + 1e-9 * mid.abs().max(1.0));
    }
}
