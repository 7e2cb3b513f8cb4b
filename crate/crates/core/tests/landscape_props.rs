use oscar::landscape::{
    export_csv, import_csv, load, metrics, nrmse, read_lsc, save, write_lsc, GridDim, GridSpec, Landscape,
    LandscapeMeta, FORMAT_VERSION, MAGIC,
};
use oscar::Error;
use proptest::prelude::*;

fn spec(rows: usize, cols: usize) -> GridSpec {
    GridSpec::new(vec![GridDim::new("beta", -0.5, 0.5, rows), GridDim::new("gamma", -1.0, 2.0, cols)]).unwrap()
}

fn landscape(values: Vec<f64>, rows: usize, cols: usize) -> Landscape {
    Landscape::new(spec(rows, cols), values, LandscapeMeta::default()).unwrap()
}

fn wavy(rows: usize, cols: usize, phase: f64) -> Landscape {
    let s = spec(rows, cols);
    let values = (0..s.len())
        .map(|i| {
            let p = s.point(i);
            (3.0 * p[0] + phase).sin() * (2.0 * p[1]).cos() + 0.1 * p[1]
        })
        .collect();
    Landscape::new(s, values, LandscapeMeta::default()).unwrap()
}

#[test]
fn constant_landscape_has_zero_metrics() {
    let m = metrics(&landscape(vec![2.5; 30], 5, 6)).unwrap();
    assert_eq!((m.d2, m.vog, m.variance), (0.0, 0.0, 0.0));
}

#[test]
fn metrics_match_hand_computation() {
    // Rows 3, cols 3, value = i^2 along the first axis only.
    let values: Vec<f64> = (0..9).map(|k| ((k % 3) * (k % 3)) as f64).collect();
    let m = metrics(&landscape(values, 3, 3)).unwrap();
    // Axis 0 lines are (0, 1, 4): second difference 2 -> 4 / 4 = 1; diffs (1, 3) variance 1.
    // Axis 1 lines are constant. Averaged over two axes.
    assert!((m.d2 - 0.5).abs() < 1e-12);
    assert!((m.vog - 0.5).abs() < 1e-12);
    // Values {0, 1, 4} three times each: mean 5/3, variance 26/9.
    assert!((m.variance - 26.0 / 9.0).abs() < 1e-12);
}

#[test]
fn metrics_need_three_points_per_axis() {
    assert!(metrics(&landscape(vec![0.0; 10], 2, 5)).is_err());
}

#[test]
fn nrmse_of_constant_truth_is_an_error() {
    let t = landscape(vec![1.0; 16], 4, 4);
    assert!(matches!(nrmse(&t, &t), Err(Error::ConstantTruth)));
}

#[test]
fn lsc_round_trip_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l.lsc");
    let mut l = wavy(7, 11, 0.3);
    l.meta.seed = Some(12);
    l.meta.source = Some("test".into());
    save(&l, &path).unwrap();
    let back = load(&path).unwrap();
    assert_eq!(back, l);
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(&bytes[..6], MAGIC);
    assert_eq!(u32::from_le_bytes(bytes[6..10].try_into().unwrap()), FORMAT_VERSION);
}

#[test]
fn unknown_version_rejected() {
    let mut buf = Vec::new();
    write_lsc(&wavy(4, 4, 0.0), &mut buf).unwrap();
    buf[6..10].copy_from_slice(&7u32.to_le_bytes());
    assert!(matches!(read_lsc(&buf[..]), Err(Error::Version { found: 7, expected: 1 })));
}

#[test]
fn corrupt_files_rejected() {
    let mut buf = Vec::new();
    write_lsc(&wavy(4, 4, 0.0), &mut buf).unwrap();
    assert!(matches!(read_lsc(&buf[..buf.len() - 3]), Err(Error::Format(_))));
    let mut bad = buf.clone();
    bad[0] = b'X';
    assert!(matches!(read_lsc(&bad[..]), Err(Error::Format(_))));
    let mut nan = buf.clone();
    let end = nan.len();
    nan[end - 8..].copy_from_slice(&f64::NAN.to_le_bytes());
    assert!(read_lsc(&nan[..]).is_err());
}

#[test]
fn csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l.csv");
    let l = wavy(6, 9, 1.1);
    export_csv(&l, &path).unwrap();
    let back = import_csv(&path, ("beta", -0.5, 0.5), ("gamma", -1.0, 2.0)).unwrap();
    assert_eq!(back.values(), l.values());
    assert_eq!(back.spec(), l.spec());
}

#[test]
fn csv_with_header_and_ragged_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    std::fs::write(&path, "a,b,c\n1,2,3\n4,5,6\n").unwrap();
    let l = import_csv(&path, ("r", 0.0, 1.0), ("c", 0.0, 1.0)).unwrap();
    assert_eq!(l.shape(), vec![2, 3]);
    assert_eq!(l.at(&[1, 0]), 4.0);
    std::fs::write(&path, "1,2,3\n4,5\n").unwrap();
    assert!(import_csv(&path, ("r", 0.0, 1.0), ("c", 0.0, 1.0)).is_err());
}

#[test]
fn four_d_reshape_round_trip() {
    let s = GridSpec::qaoa_p2();
    let values: Vec<f64> = (0..s.len()).map(|i| (i as f64 * 0.01).sin()).collect();
    let l = Landscape::new(s.clone(), values, LandscapeMeta::default()).unwrap();
    let flat = l.reshape_to_2d().unwrap();
    assert_eq!(flat.shape(), vec![144, 225]);
    assert_eq!(flat.values(), l.values());
    // Column-major pairing: (b1, b2, g1, g2) sits at row b1 + 12 b2, column g1 + 15 g2.
    assert_eq!(flat.at(&[3 + 12 * 5, 7 + 15 * 2]), l.at(&[3, 5, 7, 2]));
    assert_eq!(flat.reshape_from_2d().unwrap(), l);
    assert!(wavy(5, 5, 0.0).reshape_to_2d().is_err());
}

#[test]
fn grid_spec_json_validates() {
    let ok = serde_json::json!({"dims": [{"name": "a", "lo": 0.0, "hi": 1.0, "count": 4}]});
    assert!(serde_json::from_value::<GridSpec>(ok).is_ok());
    let bad = serde_json::json!({"dims": [{"name": "a", "lo": 1.0, "hi": 0.0, "count": 4}]});
    assert!(serde_json::from_value::<GridSpec>(bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nrmse_invariant_under_affine_maps(phase in 0.0..3.0f64, a in 0.1..10.0f64, b in -5.0..5.0f64, flip in any::<bool>()) {
        let t = wavy(8, 9, phase);
        let r = wavy(8, 9, phase + 0.05);
        let a = if flip { -a } else { a };
        let ta = t.map(|v| a * v + b).unwrap();
        let ra = r.map(|v| a * v + b).unwrap();
        let e = nrmse(&t, &r).unwrap();
        prop_assert!((nrmse(&ta, &ra).unwrap() - e).abs() < 1e-9 * (1.0 + e));
    }

    #[test]
    fn metrics_shift_invariant_and_scale_quadratically(phase in 0.0..3.0f64, c in -10.0..10.0f64, k in 0.1..5.0f64) {
        let l = wavy(6, 7, phase);
        let m = metrics(&l).unwrap();
        let shifted = metrics(&l.map(|v| v + c).unwrap()).unwrap();
        prop_assert!((shifted.d2 - m.d2).abs() < 1e-9 && (shifted.vog - m.vog).abs() < 1e-9);
        prop_assert!((shifted.variance - m.variance).abs() < 1e-9);
        let scaled = metrics(&l.map(|v| k * v).unwrap()).unwrap();
        prop_assert!((scaled.d2 - k * k * m.d2).abs() < 1e-9 * (1.0 + scaled.d2));
    }

    #[test]
    fn lsc_bytes_round_trip(values in prop::collection::vec(-1e6..1e6f64, 12)) {
        let l = landscape(values, 3, 4);
        let mut buf = Vec::new();
        write_lsc(&l, &mut buf).unwrap();
        prop_assert_eq!(read_lsc(&buf[..]).unwrap(), l);
    }

    #[test]
    fn ravel_inverts_unravel(i in 0usize..5000) {
        let s = GridSpec::qaoa_p1();
        prop_assert_eq!(s.ravel(&s.unravel(i)), i);
    }
}
