use std::f64::consts::PI;

use brlab::core::kernels::{KernelKind, ProfileMeta, RadialProfile};
use brlab::core::multipliers::MultiplierSpec;
use brlab::grid::{forward_transform, Grid, GridFunction};
use brlab::io::{
    load_grid_function, read_grid_function, save_grid_function, write_curve_csv, write_field_csv, write_grid_function,
    write_json, write_profile_csv,
};
use brlab::operators::hl_maximal;
use brlab::LabError;

fn sample() -> GridFunction {
    let grid = Grid::new(2, 8, 1.5).unwrap();
    GridFunction::from_fn(grid, |x| (PI * x[0]).sin() + x[1])
}

#[test]
fn brgf_round_trip_is_bit_exact() {
    let f = sample();
    for g in [f.clone(), forward_transform(&f).unwrap()] {
        let mut bytes = Vec::new();
        write_grid_function(&mut bytes, &g).unwrap();
        assert_eq!(bytes.len(), 28 + 16 * 64);
        assert_eq!(&bytes[..4], b"BRGF");
        assert_eq!(read_grid_function(bytes.as_slice()).unwrap(), g);
    }
}

#[test]
fn brgf_header_layout() {
    let mut bytes = Vec::new();
    write_grid_function(&mut bytes, &forward_transform(&sample()).unwrap()).unwrap();
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
    assert_eq!((word(4), word(8), word(12), word(16)), (1, 2, 8, 1));
    assert_eq!(f64::from_le_bytes(bytes[20..28].try_into().unwrap()), 1.5);
}

#[test]
fn brgf_rejects_corrupt_input() {
    let mut bytes = Vec::new();
    write_grid_function(&mut bytes, &sample()).unwrap();
    let mut bad_magic = bytes.clone();
    bad_magic[0] = b'X';
    assert!(matches!(read_grid_function(bad_magic.as_slice()), Err(LabError::Format(_))));
    let mut bad_version = bytes.clone();
    bad_version[4] = 9;
    assert!(matches!(read_grid_function(bad_version.as_slice()), Err(LabError::Format(_))));
    let mut bad_space = bytes.clone();
    bad_space[16] = 7;
    assert!(matches!(read_grid_function(bad_space.as_slice()), Err(LabError::Format(_))));
    let mut trailing = bytes.clone();
    trailing.push(0);
    assert!(matches!(read_grid_function(trailing.as_slice()), Err(LabError::Format(_))));
    assert!(matches!(read_grid_function(&bytes[..bytes.len() - 3]), Err(LabError::Io(_))));
    let mut bad_grid = bytes;
    bad_grid[12] = 6;
    assert!(read_grid_function(bad_grid.as_slice()).is_err());
}

#[test]
fn files_and_csv_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let f = sample();
    let path = dir.path().join("f.brgf");
    save_grid_function(&path, &f).unwrap();
    assert_eq!(load_grid_function(&path).unwrap(), f);
    assert!(matches!(load_grid_function(dir.path().join("missing.brgf")), Err(LabError::Io(_))));

    let curve = dir.path().join("curve.csv");
    write_curve_csv(&curve, ["R", "error"], &[(1.0, 0.5), (2.0, 0.125)]).unwrap();
    assert_eq!(std::fs::read_to_string(&curve).unwrap(), "R,error\n1,0.5\n2,0.125\n");

    let field = dir.path().join("field.csv");
    write_field_csv(&field, &hl_maximal(&f).unwrap()).unwrap();
    let text = std::fs::read_to_string(&field).unwrap();
    assert!(text.starts_with("x1,x2,value\n-1.5,-1.5,"));
    assert_eq!(text.lines().count(), 65);

    let spec = MultiplierSpec::new(2, 1.0, 2.0, 1.0).unwrap().with_p(0.8).unwrap();
    let meta = ProfileMeta { kernel: KernelKind::K1, spec, order: 1 };
    let profile = RadialProfile::new(vec![1.0, 2.0], vec![0.25, -0.5], meta).unwrap();
    let csv_path = dir.path().join("profile.csv");
    write_profile_csv(&csv_path, &profile).unwrap();
    let text = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,value,kernel,n,delta,gamma,lambda,p,order"));
    assert_eq!(lines.next(), Some("1,0.25,k1,2,1,2,1,0.8,1"));

    let json = dir.path().join("x.json");
    write_json(&json, &serde_json::json!({"a": 1})).unwrap();
    let value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(value["a"], 1);
}
