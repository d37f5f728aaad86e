use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coranking")).args(args).current_dir(cwd).output().unwrap()
}

fn ok(args: &[&str], cwd: &Path) -> String {
    let out = run(args, cwd);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn csv_grid(text: &str) -> Vec<Vec<f64>> {
    text.lines().map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

fn three_point_fixture(dir: &Path) {
    std::fs::write(dir.join("a.txt"), "# a b c\n1\n2\n4\n").unwrap();
    std::fs::write(dir.join("b.txt"), "4\n2\n1\n").unwrap();
}

#[test]
fn swapped_row_quality_map() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["gen", "swaps", "--n", "20", "--out-high", "h.csv", "--out-low", "l.csv"], dir.path());
    ok(&["qmap", "--high", "h.csv", "--low", "l.csv", "--normalization", "region", "--csv", "m.csv"], dir.path());
    let grid = csv_grid(&std::fs::read_to_string(dir.path().join("m.csv")).unwrap());
    assert_eq!(grid.len(), 19);
    for (ks, row) in grid.iter().enumerate() {
        assert_eq!(row.len(), 19);
        for (kt, &v) in row.iter().enumerate() {
            let (ks, kt) = (ks + 1, kt + 1);
            if kt >= 5 {
                assert_eq!(v, 1.0, "({ks}, {kt})");
            } else if ks >= 5 {
                assert!(v < 1.0, "({ks}, {kt})");
            }
        }
    }
}

#[test]
fn qnx_split_on_three_points() {
    let dir = tempfile::tempdir().unwrap();
    three_point_fixture(dir.path());
    let out = ok(&["qnx", "--high", "a.txt", "--low", "b.txt", "--split"], dir.path());
    assert!(out.starts_with("K,Q_NX,LCMC\n1,0.6666666666666666,"));
    assert!(out.contains("\n2,1,0\n"));
    assert!(out.contains("k_max=1\n"));
    assert!(out.contains("q_local=0.6666666666666666\n"));
    assert!(out.contains("q_global=0.8333333333333333\n"));
}

#[test]
fn coranking_of_identical_inputs_is_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["gen", "random", "--n", "12", "--seed", "3", "--out-high", "h.csv", "--out-low", "l.csv"], dir.path());
    ok(&["coranking", "--high", "h.csv", "--low", "h.csv", "--heatmap", "q.pgm", "--csv", "q.csv"], dir.path());
    let pgm = std::fs::read(dir.path().join("q.pgm")).unwrap();
    let header = b"P5\n11 11\n255\n";
    assert_eq!(&pgm[..header.len()], header);
    let pixels = &pgm[header.len()..];
    assert_eq!(pixels.len(), 121);
    for (idx, &p) in pixels.iter().enumerate() {
        assert_eq!(p, if idx / 11 == idx % 11 { 0 } else { 255 });
    }
    let grid = csv_grid(&std::fs::read_to_string(dir.path().join("q.csv")).unwrap());
    assert_eq!(grid[3][3], 12.0);
}

#[test]
fn three_point_heatmap_and_blocks() {
    let dir = tempfile::tempdir().unwrap();
    three_point_fixture(dir.path());
    let out = ok(&["coranking", "--high", "a.txt", "--low", "b.txt", "--heatmap", "q.pgm", "--blocks", "1"], dir.path());
    assert_eq!(std::fs::read(dir.path().join("q.pgm")).unwrap(), b"P5\n2 2\n255\n\x00\x80\x80\x00");
    assert!(out.contains("preserved=2\n") && out.contains("hard_intrusions=1\n") && out.contains("hard_extrusions=1\n"));
}

#[test]
fn local_quality_outputs() {
    let dir = tempfile::tempdir().unwrap();
    three_point_fixture(dir.path());
    let out = ok(&["local", "--high", "a.txt", "--low", "b.txt", "--ks", "2", "--kt", "1"], dir.path());
    assert_eq!(out, "index,value,r,g,b\n0,0.25,0,255,0\n1,0.16666666666666666,255,0,0\n2,0.25,0,255,0\n");
    let naive = ok(&["local", "--high", "a.txt", "--low", "b.txt", "--ks", "2", "--naive", "--scheme", "grayscale"], dir.path());
    assert_eq!(naive, "index,value,r,g,b\n0,0.3333333333333333,255,255,255\n1,0,0,0,0\n2,0.3333333333333333,255,255,255\n");

    ok(&["gen", "swissroll", "--n", "120", "--seed", "2", "--out-high", "h.csv", "--out-low", "l.csv"], dir.path());
    ok(&["local", "--high", "h.csv", "--low", "l.csv", "--metric-high", "geodesic:8", "--svg", "p.svg", "--csv", "p.csv"], dir.path());
    let svg = std::fs::read_to_string(dir.path().join("p.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 120);
    assert_eq!(std::fs::read_to_string(dir.path().join("p.csv")).unwrap().lines().count(), 121);
}

#[test]
fn precomputed_distances() {
    let dir = tempfile::tempdir().unwrap();
    three_point_fixture(dir.path());
    std::fs::write(dir.path().join("d.txt"), "0,1,3\n1,0,2\n3,2,0\n").unwrap();
    let from_points = ok(&["qmap", "--high", "a.txt", "--low", "b.txt"], dir.path());
    let from_matrix = ok(&["qmap", "--high", "d.txt", "--metric-high", "precomputed", "--low", "b.txt"], dir.path());
    assert_eq!(from_points, from_matrix);

    // A scatter plot needs coordinates.
    let out = run(
        &["local", "--high", "a.txt", "--low", "d.txt", "--metric-low", "precomputed", "--ks", "1", "--svg", "x.svg"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn baseline_and_scalar() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["gen", "swissroll", "--n", "150", "--seed", "5", "--out-high", "h.csv", "--out-low", "l.csv"], dir.path());
    let args = ["qmap", "--high", "h.csv", "--low", "l.csv", "--baseline", "4", "--seed", "11", "--scalar"];
    let a = ok(&args, dir.path());
    assert_eq!(a, ok(&args, dir.path()));
    let scalar: f64 = a.trim().strip_prefix("scalar=").unwrap().parse().unwrap();
    assert!(scalar > 0.0 && scalar <= 1.0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    three_point_fixture(dir.path());
    let code = |args: &[&str]| run(args, dir.path()).status.code();

    assert_eq!(code(&["qnx", "--high", "a.txt", "--low", "b.txt", "--bogus"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["qmap", "--high", "a.txt", "--low", "b.txt", "--scalar"]), Some(2));
    assert_eq!(code(&["qnx", "--high", "a.txt", "--low", "b.txt", "--metric-high", "geodesic:x"]), Some(2));
    assert_eq!(code(&["--help"]), Some(0));

    assert_eq!(code(&["qnx", "--high", "missing.txt", "--low", "b.txt"]), Some(1));
    assert_eq!(code(&["gen", "swaps", "--n", "7"]), Some(1));
    assert_eq!(code(&["local", "--high", "a.txt", "--low", "b.txt", "--ks", "3"]), Some(1));
    std::fs::write(dir.path().join("ragged.txt"), "0,0\n3\n").unwrap();
    let out = run(&["qnx", "--high", "ragged.txt", "--low", "b.txt"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ragged.txt:2:"));
    std::fs::write(dir.path().join("two.txt"), "0\n1\n").unwrap();
    assert_eq!(code(&["qnx", "--high", "two.txt", "--low", "b.txt"]), Some(1));

    // Two clusters cannot be joined by 1-nearest-neighbor edges.
    std::fs::write(dir.path().join("clusters.txt"), "0\n1\n100\n101\n").unwrap();
    let out = run(&["qnx", "--high", "clusters.txt", "--low", "clusters.txt", "--metric-high", "geodesic:1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2 connected components"));
}
