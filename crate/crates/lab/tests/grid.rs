use std::f64::consts::PI;

use brlab::grid::{
    apply_radial_multiplier, forward_transform, inverse_transform, multiply_radial, try_multiply_radial, Grid,
    GridFunction, Space,
};
use brlab::LabError;
use num_complex::Complex64;
use proptest::prelude::*;

fn gauss(grid: Grid) -> GridFunction {
    GridFunction::from_fn(grid, |x| (-PI * x.iter().map(|v| v * v).sum::<f64>()).exp())
}

#[test]
fn grid_rejects_bad_shapes() {
    assert!(Grid::new(0, 16, 1.0).is_err());
    assert!(Grid::new(4, 16, 1.0).is_err());
    assert!(Grid::new(1, 12, 1.0).is_err());
    assert!(Grid::new(1, 2, 1.0).is_err());
    assert!(Grid::new(1, 16, 0.0).is_err());
    assert!(Grid::new(1, 16, f64::NAN).is_err());
}

#[test]
fn coordinates_and_frequencies() {
    let grid = Grid::new(2, 8, 2.0).unwrap();
    assert_eq!(grid.spacing(), 0.5);
    assert_eq!(grid.frequency_spacing(), 0.25);
    assert_eq!(grid.coordinate(0), -2.0);
    assert_eq!(grid.coordinate(4), 0.0);
    assert_eq!(grid.axis_frequency(0), -1.0);
    assert_eq!(grid.nyquist(), 1.0);
    let o = grid.origin_index();
    assert_eq!(grid.point(o)[..2], [0.0, 0.0]);
    assert_eq!(grid.frequency_norm(o), 0.0);
    assert_eq!(grid.nearest_index(&[0.5, -1.0]).map(|i| grid.point(i)), Some([0.5, -1.0, 0.0]));
    assert_eq!(grid.flat_index(&grid.multi_index(37)), 37);
    assert_eq!(grid.box_volume(), 16.0);
}

#[test]
fn gaussian_is_its_own_transform() {
    for (dim, points, l) in [(1, 256, 8.0), (2, 128, 6.0), (3, 64, 4.0)] {
        let grid = Grid::new(dim, points, l).unwrap();
        let spectrum = forward_transform(&gauss(grid)).unwrap();
        assert_eq!(spectrum.space(), Space::Frequency);
        let worst = spectrum
            .values()
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let r = grid.frequency_norm(k);
                (c - Complex64::new((-PI * r * r).exp(), 0.0)).norm()
            })
            .fold(0.0, f64::max);
        assert!(worst <= 1e-10, "n={dim}: {worst}");
    }
}

#[test]
fn round_trip_and_parseval() {
    let grid = Grid::new(2, 32, 4.0).unwrap();
    let f = GridFunction::from_fn(grid, |x| (x[0] - 0.3 * x[1]).sin() * (-x[0] * x[0] - x[1] * x[1]).exp());
    let spectrum = forward_transform(&f).unwrap();
    let back = inverse_transform(&spectrum).unwrap();
    assert!(back.sub(&f).unwrap().sup_norm() <= 1e-12);
    assert!((spectrum.norm_l2() / f.norm_l2() - 1.0).abs() <= 1e-12);
}

#[test]
fn laplacian_multiplier_matches_second_derivative() {
    let grid = Grid::new(1, 512, 8.0).unwrap();
    let lap = apply_radial_multiplier(&gauss(grid), |r| r * r).unwrap();
    // -f''/(4 pi^2) for f = exp(-pi x^2)
    let want = GridFunction::from_fn(grid, |x| (1.0 / (2.0 * PI) - x[0] * x[0]) * (-PI * x[0] * x[0]).exp());
    assert!(lap.sub(&want).unwrap().sup_norm() <= 1e-10);
}

#[test]
fn multipliers_compose() {
    let grid = Grid::new(2, 32, 4.0).unwrap();
    let f = gauss(grid);
    let a = |r: f64| 1.0 / (1.0 + r * r);
    let b = |r: f64| (-r).exp();
    let twice = apply_radial_multiplier(&apply_radial_multiplier(&f, a).unwrap(), b).unwrap();
    let once = apply_radial_multiplier(&f, |r| a(r) * b(r)).unwrap();
    assert!(twice.sub(&once).unwrap().sup_norm() <= 1e-14);
}

#[test]
fn multipliers_commute_with_shifts() {
    let grid = Grid::new(2, 16, 2.0).unwrap();
    let f = GridFunction::from_fn(grid, |x| x[0] * (-x[0] * x[0] - 2.0 * x[1] * x[1]).exp());
    let m = |r: f64| (1.0 - r * r).max(0.0).powf(0.7);
    let shift = [3, -5];
    let a = apply_radial_multiplier(&f.shifted(&shift), m).unwrap();
    let b = apply_radial_multiplier(&f, m).unwrap().shifted(&shift);
    assert!(a.sub(&b).unwrap().sup_norm() <= 1e-14);
}

#[test]
fn space_and_grid_mismatches_are_errors() {
    let grid = Grid::new(1, 16, 1.0).unwrap();
    let f = gauss(grid);
    assert!(matches!(inverse_transform(&f), Err(LabError::WrongSpace { .. })));
    let spectrum = forward_transform(&f).unwrap();
    assert!(forward_transform(&spectrum).is_err());
    assert!(multiply_radial(&f, |_| 1.0).is_err());
    let other = gauss(Grid::new(1, 32, 1.0).unwrap());
    assert!(matches!(f.sub(&other), Err(LabError::GridMismatch)));
    assert!(GridFunction::new(grid, vec![Complex64::new(0.0, 0.0); 3], Space::Physical).is_err());
}

#[test]
fn non_finite_multiplier_values_are_reported() {
    let grid = Grid::new(1, 16, 1.0).unwrap();
    let spectrum = forward_transform(&gauss(grid)).unwrap();
    let err = try_multiply_radial(&spectrum, |r| Ok(if r == 0.0 { f64::INFINITY } else { 1.0 })).unwrap_err();
    assert!(matches!(err, LabError::NonFiniteMultiplier { .. }));
    // a zero coefficient never meets the bad value
    let zeroed = spectrum.map(|c| if c == spectrum.values()[grid.origin_index()] { Complex64::new(0.0, 0.0) } else { c });
    assert!(try_multiply_radial(&zeroed, |r| Ok(if r == 0.0 { f64::INFINITY } else { 1.0 })).is_ok());
}

#[test]
fn integral_of_gaussian_is_one() {
    let grid = Grid::new(3, 32, 5.0).unwrap();
    assert!((gauss(grid).integral().re - 1.0).abs() <= 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_is_linear_and_isometric(
        re in prop::collection::vec(-1.0f64..1.0, 64),
        im in prop::collection::vec(-1.0f64..1.0, 64),
        a in -3.0f64..3.0,
    ) {
        let grid = Grid::new(2, 8, 1.5).unwrap();
        let f = GridFunction::new(grid, re.iter().map(|&v| Complex64::new(v, 0.0)).collect(), Space::Physical).unwrap();
        let g = GridFunction::new(grid, re.iter().zip(&im).map(|(&x, &y)| Complex64::new(y, x)).collect(), Space::Physical).unwrap();
        let lhs = forward_transform(&f.combine(a, &g, 1.0).unwrap()).unwrap();
        let rhs = forward_transform(&f).unwrap().combine(a, &forward_transform(&g).unwrap(), 1.0).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().sup_norm() <= 1e-12);
        let fh = forward_transform(&f).unwrap();
        prop_assert!((fh.norm_l2() - f.norm_l2()).abs() <= 1e-12 * (1.0 + f.norm_l2()));
        prop_assert!(inverse_transform(&fh).unwrap().sub(&f).unwrap().sup_norm() <= 1e-13);
    }
}
