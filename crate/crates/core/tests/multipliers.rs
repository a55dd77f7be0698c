//! Symbols, the bump partition and the localized pieces.

use brlab_core::multipliers::{
    br_symbol, bump_partition_eval, delta_p, m_lambda_j, mu, smooth_step, BumpPartition, MultiplierSpec, Piece,
};
use proptest::prelude::*;

const SMOOTH: BumpPartition = BumpPartition::SMOOTH;

fn spec(delta: f64, gamma: f64, lambda: f64) -> MultiplierSpec {
    MultiplierSpec::new(2, delta, gamma, lambda).unwrap()
}

#[test]
fn delta_p_formula() {
    assert_eq!(delta_p(2, 0.8), 1.0);
    assert_eq!(delta_p(1, 1.0), 0.0);
    let s = MultiplierSpec::critical(2, 0.8, 2.0, 1.0).unwrap();
    assert_eq!(s.delta(), 1.0);
    assert_eq!(s.delta_p(), Some(1.0));
    assert_eq!(MultiplierSpec::new(3, 0.5, 2.0, 0.0).unwrap().delta_p(), None);
}

#[test]
fn br_symbol_examples() {
    let s = spec(1.0, 2.0, 0.0);
    assert_eq!(br_symbol(0.0, 3.0, &s).unwrap(), 1.0);
    assert_eq!(br_symbol(3.0, 3.0, &s).unwrap(), 0.0);
    assert!((br_symbol(1.5, 3.0, &s).unwrap() - 0.75).abs() < 1e-15);
    assert!(br_symbol(1.0, 0.0, &s).is_err());
}

#[test]
fn mu_examples() {
    assert_eq!(mu(1.0, &spec(0.7, 2.0, 2.0)).unwrap(), -1.0);
    assert_eq!(mu(0.0, &spec(0.7, 2.0, 1.0)).unwrap(), 0.0);
    let crit = MultiplierSpec::critical(2, 0.8, 2.0, 2.0).unwrap();
    assert_eq!(mu(0.0, &crit).unwrap(), -1.0);
    assert!(mu(0.5, &spec(0.7, 2.0, 2.5)).is_err());
}

#[test]
fn partition_examples() {
    assert_eq!(bump_partition_eval(0.2, &SMOOTH), (1.0, 0.0, 0.0));
    assert_eq!(bump_partition_eval(1.0, &SMOOTH), (0.0, 1.0, 0.0));
    assert_eq!(bump_partition_eval(3.0, &SMOOTH), (0.0, 0.0, 1.0));
}

#[test]
fn partition_supports_and_plateaus() {
    for k in 0..=10_000 {
        let r = 10.0 * k as f64 / 10_000.0;
        let (p0, p1, pinf) = bump_partition_eval(r, &SMOOTH);
        for v in [p0, p1, pinf] {
            assert!((0.0..=1.0).contains(&v), "r={r}");
        }
        assert!((p0 + p1 + pinf - 1.0).abs() <= 1e-12);
        if r <= 0.25 {
            assert_eq!(p0, 1.0);
        }
        if r >= 0.5 {
            assert_eq!(p0, 0.0);
        }
        if (0.5..=1.5).contains(&r) {
            assert_eq!(p1, 1.0);
        }
        if r <= 0.25 || r >= 2.0 {
            assert_eq!(p1, 0.0);
        }
        if r >= 2.0 {
            assert_eq!(pinf, 1.0);
        }
        if r <= 1.5 {
            assert_eq!(pinf, 0.0);
        }
        let psi = SMOOTH.psi_inf(r);
        if r >= 0.5 {
            assert_eq!(psi, 1.0);
        }
    }
}

#[test]
fn partition_has_bounded_differences() {
    // first and second differences stay bounded through the transition zones
    let h = 1e-4;
    for zone in [(0.25, 0.5), (1.5, 2.0)] {
        let mut max1 = 0.0_f64;
        let mut max2 = 0.0_f64;
        let steps = ((zone.1 - zone.0) / h) as usize;
        for k in 0..=steps {
            let r = zone.0 + k as f64 * h;
            let f = |x: f64| SMOOTH.phi1(x);
            max1 = max1.max(((f(r + h) - f(r - h)) / (2.0 * h)).abs());
            max2 = max2.max(((f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h)).abs());
        }
        assert!(max1 < 20.0 && max2 < 500.0, "{zone:?}: {max1} {max2}");
    }
    assert_eq!(smooth_step(0.0), 0.0);
    assert_eq!(smooth_step(1.0), 1.0);
    assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
}

#[test]
fn localized_piece_examples() {
    let s = spec(1.0, 2.0, 1.0);
    for r in [0.3, 0.8, 1.7] {
        let lhs = m_lambda_j(r, Piece::Zero, &s, &SMOOTH).unwrap() + m_lambda_j(r, Piece::One, &s, &SMOOTH).unwrap()
            - m_lambda_j(r, Piece::Infinity, &s, &SMOOTH).unwrap();
        assert!((lhs - mu(r, &s).unwrap()).abs() < 1e-15);
    }
    for r in [1.0, 1.3, 4.0] {
        assert_eq!(m_lambda_j(r, Piece::One, &spec(0.4, 2.0, 1.0), &SMOOTH).unwrap(), 0.0);
    }
    for lambda in [0.0, 0.5, 1.0, 2.0] {
        let got = m_lambda_j(2.0, Piece::Infinity, &spec(1.0, 2.0, lambda), &SMOOTH).unwrap();
        assert_eq!(got, 2f64.powf(-lambda));
    }
    assert_eq!(m_lambda_j(0.0, Piece::Infinity, &s, &SMOOTH).unwrap(), 0.0);
    assert_eq!(m_lambda_j(0.0, Piece::One, &s, &SMOOTH).unwrap(), 0.0);
}

#[test]
fn decomposition_identity_on_parameter_grid() {
    for gamma in [2.0, 3.0] {
        for delta in [-0.5, 0.5, 1.5] {
            for lambda in [0.0, 1.0, gamma] {
                let s = spec(delta, gamma, lambda);
                for bp in [SMOOTH, BumpPartition::INDICATOR] {
                    for k in 1..=2000 {
                        let r = 10.0 * k as f64 / 2000.0;
                        let pieces = m_lambda_j(r, Piece::Zero, &s, &bp).unwrap()
                            + m_lambda_j(r, Piece::One, &s, &bp).unwrap()
                            - m_lambda_j(r, Piece::Infinity, &s, &bp).unwrap();
                        let want = mu(r, &s).unwrap();
                        assert!(
                            (pieces - want).abs() <= 1e-12 * want.abs().max(1.0),
                            "gamma={gamma} delta={delta} lambda={lambda} r={r}: {pieces} vs {want}"
                        );
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn symbol_in_unit_interval_for_nonnegative_delta(
        r in 0.0f64..20.0, radius in 0.1f64..10.0, delta in 0.0f64..4.0, gamma in 0.1f64..6.0,
    ) {
        let v = br_symbol(r, radius, &spec(delta, gamma, 0.0)).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn partition_of_unity(r in 0.0f64..10.0) {
        let (a, b, c) = bump_partition_eval(r, &SMOOTH);
        prop_assert!((a + b + c - 1.0).abs() <= 1e-12);
        prop_assert!(a >= 0.0 && b >= 0.0 && c >= 0.0);
    }

    #[test]
    fn decomposition_identity(
        r in 0.0f64..10.0, delta in -0.99f64..3.0, gamma in 0.2f64..5.0, frac in 0.0f64..=1.0,
    ) {
        let s = spec(delta, gamma, frac * gamma);
        let pieces = m_lambda_j(r, Piece::Zero, &s, &SMOOTH).unwrap()
            + m_lambda_j(r, Piece::One, &s, &SMOOTH).unwrap()
            - m_lambda_j(r, Piece::Infinity, &s, &SMOOTH).unwrap();
        let want = mu(r, &s).unwrap();
        prop_assert!((pieces - want).abs() <= 1e-12 * want.abs().max(1.0));
    }

    #[test]
    fn mu_is_continuous_at_origin(delta in -0.9f64..3.0, gamma in 0.5f64..4.0) {
        let s = spec(delta, gamma, gamma);
        // (1-u)^delta - 1 = -delta u + O(u^2) with u = r^gamma
        let r: f64 = 1e-3;
        let near = mu(r, &s).unwrap();
        let u = r.powf(gamma);
        prop_assert!((near + delta).abs() <= (delta * (delta - 1.0)).abs() * u);
    }
}
