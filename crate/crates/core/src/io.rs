//! Text ingestion and CSV / PGM / SVG output.
//!
//! Input files hold one row per line, fields separated by commas and/or
//! whitespace. Blank lines and lines starting with `#` are skipped.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::coranking::CoRankingMatrix;
use crate::error::{Error, Result};
use crate::geometry::{DistanceMatrix, PointSet};
use crate::local_quality::Rgb;
use crate::measures::QualityMap;

/// Tolerance for asymmetry and nonzero diagonals in distance-matrix files.
pub const DISTANCE_TOLERANCE: f64 = 1e-9;

fn parse_rows(text: &str, path: &Path) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut rows = Vec::new();
    let mut width = None;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .map(|f| {
                f.parse::<f64>().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line: lineno,
                    message: format!("not a number: '{f}'"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(pos) = fields.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: lineno,
                message: format!("non-finite value in field {}", pos + 1),
            });
        }
        match width {
            None => width = Some(fields.len()),
            Some(w) if w != fields.len() => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: lineno,
                    message: format!("expected {w} fields, found {}", fields.len()),
                })
            }
            _ => {}
        }
        rows.push((lineno, fields));
    }
    Ok(rows)
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Parses a point file already loaded into memory; `path` is only used in
/// error messages.
pub fn parse_points(text: &str, path: &Path) -> Result<PointSet> {
    let rows = parse_rows(text, path)?;
    if rows.len() < 2 {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: rows.first().map_or(0, |r| r.0),
            message: format!("need at least 2 points, found {}", rows.len()),
        });
    }
    let rows: Vec<Vec<f64>> = rows.into_iter().map(|(_, r)| r).collect();
    PointSet::from_rows(&rows)
}

pub fn read_points(path: impl AsRef<Path>) -> Result<PointSet> {
    let path = path.as_ref();
    parse_points(&read_text(path)?, path)
}

/// Parses a square distance matrix. Entries must be nonnegative; the diagonal
/// and the asymmetry may deviate from exact by [`DISTANCE_TOLERANCE`], after
/// which the matrix is symmetrized by averaging and the diagonal zeroed.
pub fn parse_distance_matrix(text: &str, path: &Path) -> Result<DistanceMatrix> {
    let rows = parse_rows(text, path)?;
    let n = rows.len();
    let bad = |line: usize, message: String| Error::Parse { path: path.to_path_buf(), line, message };
    if n < 2 {
        return Err(bad(rows.first().map_or(0, |r| r.0), format!("need at least 2 rows, found {n}")));
    }
    if rows[0].1.len() != n {
        return Err(bad(rows[0].0, format!("matrix is not square: {n} rows of {} fields", rows[0].1.len())));
    }
    for (i, (line, row)) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v < 0.0 {
                return Err(bad(*line, format!("negative distance {v} in column {}", j + 1)));
            }
            if i == j && v.abs() > DISTANCE_TOLERANCE {
                return Err(bad(*line, format!("nonzero diagonal entry {v}")));
            }
            let mirror = rows[j].1[i];
            if (v - mirror).abs() > DISTANCE_TOLERANCE {
                return Err(bad(*line, format!("asymmetric entries ({}, {}) = {v} and {mirror}", i + 1, j + 1)));
            }
        }
    }
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (rows[i].1[j] + rows[j].1[i]);
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    DistanceMatrix::new(n, data)
}

pub fn read_distance_matrix(path: impl AsRef<Path>) -> Result<DistanceMatrix> {
    let path = path.as_ref();
    parse_distance_matrix(&read_text(path)?, path)
}

/// Read-only access to a dense matrix for the writers below.
pub trait MatrixView {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn value(&self, row: usize, col: usize) -> f64;
}

impl MatrixView for CoRankingMatrix {
    fn rows(&self) -> usize {
        self.size()
    }
    fn cols(&self) -> usize {
        self.size()
    }
    fn value(&self, row: usize, col: usize) -> f64 {
        self.get(row + 1, col + 1) as f64
    }
}

impl MatrixView for QualityMap {
    fn rows(&self) -> usize {
        self.size()
    }
    fn cols(&self) -> usize {
        self.size()
    }
    fn value(&self, row: usize, col: usize) -> f64 {
        self.get(row + 1, col + 1)
    }
}

impl MatrixView for DistanceMatrix {
    fn rows(&self) -> usize {
        self.len()
    }
    fn cols(&self) -> usize {
        self.len()
    }
    fn value(&self, row: usize, col: usize) -> f64 {
        self.get(row, col)
    }
}

impl MatrixView for PointSet {
    fn rows(&self) -> usize {
        self.len()
    }
    fn cols(&self) -> usize {
        self.dim()
    }
    fn value(&self, row: usize, col: usize) -> f64 {
        self.point(row)[col]
    }
}

/// Plain row-major matrix, e.g. a centered quality map.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl MatrixView for DenseMatrix {
    fn rows(&self) -> usize {
        self.rows
    }
    fn cols(&self) -> usize {
        self.cols
    }
    fn value(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn finish<T>(path: &Path, res: std::io::Result<T>) -> Result<T> {
    res.map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Comma-separated rows. Values print in the shortest form that parses back
/// to the same `f64`.
pub fn write_matrix_csv_to<W: Write>(out: &mut W, m: &dyn MatrixView) -> std::io::Result<()> {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.write_all(b",")?;
            }
            write!(out, "{}", m.value(i, j))?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_matrix_csv(m: &dyn MatrixView, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = create(path)?;
    finish(path, write_matrix_csv_to(&mut out, m).and_then(|_| out.flush()))
}

/// Gray level of `v` on a scale where 0 is white and `max` is black.
pub fn pgm_pixel(v: f64, max: f64) -> u8 {
    if max <= 0.0 {
        return 255;
    }
    (255.0 * (1.0 - v / max)).clamp(0.0, 255.0).round() as u8
}

/// Binary PGM (P5, maxval 255), one pixel per matrix entry; zero is white
/// and the largest entry black.
pub fn write_pgm_to<W: Write>(out: &mut W, m: &dyn MatrixView) -> std::io::Result<()> {
    let max = (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| m.value(i, j))
        .fold(0.0, f64::max);
    write!(out, "P5\n{} {}\n255\n", m.cols(), m.rows())?;
    let mut line = Vec::with_capacity(m.cols());
    for i in 0..m.rows() {
        line.clear();
        line.extend((0..m.cols()).map(|j| pgm_pixel(m.value(i, j), max)));
        out.write_all(&line)?;
    }
    Ok(())
}

pub fn write_pgm(m: &dyn MatrixView, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = create(path)?;
    finish(path, write_pgm_to(&mut out, m).and_then(|_| out.flush()))
}

const SVG_SIZE: f64 = 1000.0;
const SVG_MARGIN: f64 = 10.0;
const SVG_RADIUS: f64 = 3.0;

/// Scatter plot of 2-D points, one filled circle per point. Coordinates are
/// min–max scaled with a common factor for both axes; `y` points up.
pub fn write_svg_scatter_to<W: Write>(out: &mut W, points: &PointSet, colors: &[Rgb]) -> Result<()> {
    if points.dim() != 2 {
        return Err(Error::input(format!("scatter plot needs 2-D points, got {} dimensions", points.dim())));
    }
    if colors.len() != points.len() {
        return Err(Error::Mismatch(format!("{} colors for {} points", colors.len(), points.len())));
    }
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in points.iter() {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let scale = if span > 0.0 { (SVG_SIZE - 2.0 * SVG_MARGIN) / span } else { 0.0 };
    let io = |e: std::io::Error| Error::Io { path: "<svg>".into(), source: e };
    write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SVG_SIZE} {SVG_SIZE}\" width=\"{SVG_SIZE}\" height=\"{SVG_SIZE}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
    .map_err(io)?;
    for (p, Rgb(r, g, b)) in points.iter().zip(colors) {
        let x = SVG_MARGIN + (p[0] - lo[0]) * scale;
        let y = SVG_SIZE - SVG_MARGIN - (p[1] - lo[1]) * scale;
        writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{SVG_RADIUS}\" fill=\"#{r:02x}{g:02x}{b:02x}\"/>")
            .map_err(io)?;
    }
    writeln!(out, "</svg>").map_err(io)
}

pub fn write_svg_scatter(points: &PointSet, colors: &[Rgb], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_svg_scatter_to(&mut buf, points, colors)?;
    finish(path, std::fs::write(path, buf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coranking::coranking_matrix;
    use crate::geometry::{pairwise_distances, Metric};
    use crate::ranking::rank_matrix;
    use proptest::prelude::*;

    fn p() -> &'static Path {
        Path::new("test.txt")
    }

    #[test]
    fn parse_one_dimensional() {
        let pts = parse_points("0\n1\n3\n", p()).unwrap();
        assert_eq!((pts.len(), pts.dim()), (3, 1));
        assert_eq!(pts.as_slice(), &[0.0, 1.0, 3.0]);
    }

    #[test]
    fn parse_two_dimensional_with_comments() {
        let pts = parse_points("# x,y\n0,0\n\n3 4\n", p()).unwrap();
        assert_eq!((pts.len(), pts.dim()), (2, 2));
        assert_eq!(pts.point(1), &[3.0, 4.0]);
        let pts = parse_points("1.5,\t2e3 , -4\n7 8 9\n", p()).unwrap();
        assert_eq!(pts.point(0), &[1.5, 2000.0, -4.0]);
    }

    #[test]
    fn ragged_rows_report_line() {
        match parse_points("0,0\n3\n", p()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_points("# header\n1\nx\n", p()) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("'x'"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_points("1\n", p()).is_err());
        assert!(parse_points("1\nnan\n", p()).is_err());
    }

    #[test]
    fn distance_matrix_parsing() {
        let d = parse_distance_matrix("0 1 3\n1 0 2\n3 2 0\n", p()).unwrap();
        assert_eq!(d.get(0, 2), 3.0);
        assert!(parse_distance_matrix("0 1 3\n1 0 2\n", p()).is_err());
        assert!(parse_distance_matrix("0 -1\n-1 0\n", p()).is_err());
        assert!(parse_distance_matrix("0 1\n2 0\n", p()).is_err());
        assert!(parse_distance_matrix("0.1 1\n1 0\n", p()).is_err());
        let d = parse_distance_matrix("0 1\n1.0000000001 1e-12\n", p()).unwrap();
        assert_eq!(d.get(0, 1), d.get(1, 0));
        assert_eq!(d.get(1, 1), 0.0);
    }

    #[test]
    fn pgm_of_small_coranking() {
        let rho = rank_matrix(&pairwise_distances(&parse_points("1\n2\n4\n", p()).unwrap(), Metric::Euclidean).unwrap());
        let r = rank_matrix(&pairwise_distances(&parse_points("4\n2\n1\n", p()).unwrap(), Metric::Euclidean).unwrap());
        let q = coranking_matrix(&rho, &r).unwrap();
        let mut buf = Vec::new();
        write_pgm_to(&mut buf, &q).unwrap();
        assert_eq!(buf, b"P5\n2 2\n255\n\x00\x80\x80\x00");
    }

    #[test]
    fn pgm_of_zeros_is_white() {
        let m = DenseMatrix { rows: 2, cols: 3, data: vec![0.0; 6] };
        let mut buf = Vec::new();
        write_pgm_to(&mut buf, &m).unwrap();
        assert_eq!(&buf[..11], b"P5\n3 2\n255\n");
        assert!(buf[11..].iter().all(|&b| b == 255));
        assert_eq!(buf.len(), 17);
    }

    #[test]
    fn csv_output() {
        let m = DenseMatrix { rows: 2, cols: 2, data: vec![0.1, 2.0, 1.0 / 3.0, -5e-20] };
        let mut buf = Vec::new();
        write_matrix_csv_to(&mut buf, &m).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0.1,2\n0.3333333333333333,-0.00000000000000000005\n");
    }

    #[test]
    fn svg_scatter() {
        let pts = parse_points("0 0\n2 1\n", p()).unwrap();
        let mut buf = Vec::new();
        write_svg_scatter_to(&mut buf, &pts, &[Rgb(255, 0, 0), Rgb(0, 255, 0)]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("<circle cx=\"10.000\" cy=\"990.000\" r=\"3\" fill=\"#ff0000\"/>"));
        assert!(s.contains("<circle cx=\"990.000\" cy=\"500.000\" r=\"3\" fill=\"#00ff00\"/>"));
        assert!(write_svg_scatter_to(&mut Vec::new(), &pts, &[]).is_err());
        let pts3 = parse_points("0 0 0\n1 1 1\n", p()).unwrap();
        assert!(write_svg_scatter_to(&mut Vec::new(), &pts3, &[Rgb(0, 0, 0); 2]).is_err());
    }

    #[test]
    fn unwritable_path() {
        let m = DenseMatrix { rows: 1, cols: 1, data: vec![1.0] };
        assert!(matches!(write_matrix_csv(&m, "/nonexistent/dir/x.csv"), Err(Error::Io { .. })));
    }

    proptest! {
        #[test]
        fn points_round_trip(rows in proptest::collection::vec(proptest::collection::vec(-1e6f64..1e6, 3), 2..20)) {
            let pts = PointSet::from_rows(&rows).unwrap();
            let mut buf = Vec::new();
            write_matrix_csv_to(&mut buf, &pts).unwrap();
            let back = parse_points(std::str::from_utf8(&buf).unwrap(), p()).unwrap();
            prop_assert_eq!(back, pts);
        }

        #[test]
        fn distances_round_trip(n in 2usize..15, seed in any::<u64>()) {
            let d = pairwise_distances(&crate::datasets::gen_random_points(n, 3, seed).unwrap(), Metric::Euclidean).unwrap();
            let mut buf = Vec::new();
            write_matrix_csv_to(&mut buf, &d).unwrap();
            prop_assert_eq!(parse_distance_matrix(std::str::from_utf8(&buf).unwrap(), p()).unwrap(), d);
        }
    }
}
