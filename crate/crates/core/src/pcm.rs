//! Pairwise comparison matrices: validation, construction and the plain-text
//! CSV format.
//!
//! Entries are stored row-major and addressed with 0-based indices. Every
//! error and report uses 1-based indices.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Relative tolerance for `a_ij * a_ji == 1` and for the unit diagonal.
pub const RECIPROCITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PcmError {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare { row: usize, len: usize, expected: usize },
    #[error("matrix must have at least 2 alternatives, got {0}")]
    TooSmall(usize),
    #[error("entry ({i},{j}) must be positive and finite")]
    NonPositiveEntry { i: usize, j: usize },
    #[error("entries ({i},{j}) and ({j},{i}) are not reciprocal: product is {product}")]
    ReciprocityViolation { i: usize, j: usize, product: f64 },
    #[error("diagonal entry ({i},{i}) must be 1")]
    BadDiagonal { i: usize },
    #[error("missing upper-triangle entry ({i},{j})")]
    MissingEntry { i: usize, j: usize },
    #[error("entry ({i},{j}) is not above the diagonal or out of range for n = {n}")]
    BadIndex { i: usize, j: usize, n: usize },
    #[error("entry ({i},{j}) given more than once")]
    DuplicateEntry { i: usize, j: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: cannot parse {token:?} as a number")]
    BadNumber { line: usize, token: String },
    #[error("line {line}: expected {expected} entries, found {found}")]
    RowLength { line: usize, expected: usize, found: usize },
    #[error("no matrix rows found")]
    Empty,
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error(transparent)]
    Invalid(#[from] PcmError),
}

/// A validated positive reciprocal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Pcm {
    n: usize,
    entries: Vec<f64>,
}

impl Pcm {
    /// Validates a square array of judgments.
    ///
    /// The diagonal is stored as exactly 1 once it passes the tolerance check;
    /// off-diagonal entries are kept as given.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, PcmError> {
        let n = rows.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(PcmError::NonSquare {
                    row: r + 1,
                    len: row.len(),
                    expected: n,
                });
            }
        }
        if n < 2 {
            return Err(PcmError::TooSmall(n));
        }
        let mut entries: Vec<f64> = rows.into_iter().flatten().collect();
        for i in 0..n {
            for j in 0..n {
                let a = entries[i * n + j];
                if !(a.is_finite() && a > 0.0) {
                    return Err(PcmError::NonPositiveEntry { i: i + 1, j: j + 1 });
                }
            }
        }
        for i in 0..n {
            if (entries[i * n + i] - 1.0).abs() > RECIPROCITY_TOL {
                return Err(PcmError::BadDiagonal { i: i + 1 });
            }
            entries[i * n + i] = 1.0;
        }
        for i in 0..n {
            for j in i + 1..n {
                let product = entries[i * n + j] * entries[j * n + i];
                if (product - 1.0).abs() > RECIPROCITY_TOL {
                    return Err(PcmError::ReciprocityViolation {
                        i: i + 1,
                        j: j + 1,
                        product,
                    });
                }
            }
        }
        Ok(Pcm { n, entries })
    }

    /// Builds a matrix from the judgments above the diagonal, given as
    /// 1-based `(i, j, a_ij)` triples with `i < j`. The lower triangle gets
    /// exact reciprocals.
    pub fn from_upper(n: usize, upper: &[(usize, usize, f64)]) -> Result<Self, PcmError> {
        if n < 2 {
            return Err(PcmError::TooSmall(n));
        }
        let mut entries = vec![f64::NAN; n * n];
        for &(i, j, a) in upper {
            if i == 0 || i >= j || j > n {
                return Err(PcmError::BadIndex { i, j, n });
            }
            if !(a.is_finite() && a > 0.0) {
                return Err(PcmError::NonPositiveEntry { i, j });
            }
            let slot = &mut entries[(i - 1) * n + (j - 1)];
            if !slot.is_nan() {
                return Err(PcmError::DuplicateEntry { i, j });
            }
            *slot = a;
            entries[(j - 1) * n + (i - 1)] = 1.0 / a;
        }
        for i in 0..n {
            entries[i * n + i] = 1.0;
            for j in i + 1..n {
                if entries[i * n + j].is_nan() {
                    return Err(PcmError::MissingEntry { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(Pcm { n, entries })
    }

    /// The consistent matrix `a_ij = v_i / v_j` generated by positive weights.
    pub fn from_weights(v: &[f64]) -> Result<Self, PcmError> {
        let n = v.len();
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                upper.push((i + 1, j + 1, v[i] / v[j]));
            }
        }
        Self::from_upper(n, &upper)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `a_ij`, 0-based.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.n)
    }

    /// True iff `|a_ij a_jk - a_ik| <= tol * a_ik` for every triple.
    pub fn is_consistent(&self, tol: f64) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let a_ik = self.get(i, k);
                    (self.get(i, j) * self.get(j, k) - a_ik).abs() <= tol * a_ik
                })
            })
        })
    }

    /// Parses the CSV matrix format: one row per line, comma-separated
    /// entries, `#` comment lines and blank lines ignored. Entries may be
    /// decimals or fractions such as `1/3`.
    pub fn from_csv_str(text: &str) -> Result<Self, ParseError> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut expected: Option<usize> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .map(|tok| {
                    parse_entry(tok.trim()).ok_or_else(|| ParseError::BadNumber {
                        line: line_no,
                        token: tok.trim().to_string(),
                    })
                })
                .collect::<Result<Vec<f64>, _>>()?;
            let width = *expected.get_or_insert(row.len());
            if row.len() != width {
                return Err(ParseError::RowLength {
                    line: line_no,
                    expected: width,
                    found: row.len(),
                });
            }
            rows.push(row);
        }
        let width = expected.ok_or(ParseError::Empty)?;
        if rows.len() != width {
            return Err(ParseError::RowCount {
                expected: width,
                found: rows.len(),
            });
        }
        Ok(Pcm::new(rows)?)
    }

    /// Writes the matrix in the CSV format. Integers and unit fractions are
    /// written as `k` and `1/k`; other values use the shortest decimal that
    /// round-trips.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|&a| format_entry(a)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

impl FromStr for Pcm {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pcm::from_csv_str(s)
    }
}

impl fmt::Display for Pcm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv_string())
    }
}

/// Parses `x` or `p/q` where `p` and `q` are decimals.
fn parse_entry(tok: &str) -> Option<f64> {
    match tok.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().ok()?;
            let den: f64 = den.trim().parse().ok()?;
            Some(num / den)
        }
        None => tok.parse().ok(),
    }
}

fn format_entry(a: f64) -> String {
    if a >= 1.0 && a.fract() == 0.0 && a < 1e15 {
        return format!("{}", a as u64);
    }
    if a < 1.0 {
        let k = (1.0 / a).round();
        if k < 1e15 && 1.0 / k == a {
            return format!("1/{}", k as u64);
        }
    }
    format!("{a}")
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn validates_exact_pair() {
        let a = Pcm::new(vec![vec![1.0, 2.0], vec![0.5, 1.0]]).unwrap();
        assert_eq!(a.n(), 2);
    }

    #[test]
    fn validates_segment_matrix_from_decimals() {
        let rows = vec![
            vec![1.0, 3.0, 2.0 / 7.0, 11.0 / 10.0],
            vec![1.0 / 3.0, 1.0, 1.0 / 7.0, 9.0 / 10.0],
            vec![7.0 / 2.0, 7.0, 1.0, 5.0],
            vec![10.0 / 11.0, 10.0 / 9.0, 1.0 / 5.0, 1.0],
        ];
        let a = Pcm::new(rows).unwrap();
        assert_eq!(a.n(), 4);
    }

    #[test]
    fn rejects_reciprocity_violation() {
        let err = Pcm::new(vec![vec![1.0, 2.0], vec![0.4, 1.0]]).unwrap_err();
        match err {
            PcmError::ReciprocityViolation { i, j, product } => {
                assert_eq!((i, j), (1, 2));
                assert!((product - 0.8).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_shape_and_value_errors() {
        assert!(matches!(
            Pcm::new(vec![vec![1.0, 2.0], vec![0.5]]),
            Err(PcmError::NonSquare { row: 2, .. })
        ));
        assert!(matches!(Pcm::new(vec![vec![1.0]]), Err(PcmError::TooSmall(1))));
        assert!(matches!(
            Pcm::new(vec![vec![1.0, -2.0], vec![-0.5, 1.0]]),
            Err(PcmError::NonPositiveEntry { i: 1, j: 2 })
        ));
        assert!(matches!(
            Pcm::new(vec![vec![1.0, 2.0], vec![0.5, 1.5]]),
            Err(PcmError::BadDiagonal { i: 2 })
        ));
        assert!(matches!(
            Pcm::new(vec![vec![1.0, f64::NAN], vec![0.5, 1.0]]),
            Err(PcmError::NonPositiveEntry { .. })
        ));
    }

    #[test]
    fn completes_upper_triangle() {
        let a = Pcm::from_upper(2, &[(1, 2, 4.0)]).unwrap();
        assert_eq!(a.row(0), &[1.0, 4.0]);
        assert_eq!(a.row(1), &[0.25, 1.0]);

        let a3 = a3();
        assert_eq!(a3.row(0), &[1.0, 2.0, 6.0]);
        assert_eq!(a3.row(1), &[0.5, 1.0, 2.0]);
        assert_eq!(a3.row(2), &[1.0 / 6.0, 0.5, 1.0]);

        assert_eq!(
            Pcm::from_upper(3, &[(1, 2, 2.0), (1, 3, 6.0)]),
            Err(PcmError::MissingEntry { i: 2, j: 3 })
        );
        assert!(matches!(
            Pcm::from_upper(3, &[(1, 2, 0.0), (1, 3, 6.0), (2, 3, 1.0)]),
            Err(PcmError::NonPositiveEntry { i: 1, j: 2 })
        ));
        assert!(matches!(
            Pcm::from_upper(3, &[(2, 1, 2.0)]),
            Err(PcmError::BadIndex { .. })
        ));
    }

    #[test]
    fn consistency_check() {
        let c = Pcm::from_weights(&[1.0, 2.0, 4.0]).unwrap();
        assert!(c.is_consistent(1e-12));
        assert!(!a3().is_consistent(1e-9));
        let two = Pcm::from_upper(2, &[(1, 2, 7.3)]).unwrap();
        assert!(two.is_consistent(1e-12));
    }

    #[test]
    fn csv_parses_fractions_and_comments() {
        let text = "# segment example\n1,3,2/7,11/10\n1/3,1,1/7,9/10\n7/2,7,1,5\n10/11,10/9,1/5,1\n";
        let a: Pcm = text.parse().unwrap();
        let b = segment4();
        for i in 0..4 {
            for j in 0..4 {
                assert!((a.get(i, j) - b.get(i, j)).abs() <= 1e-15 * b.get(i, j));
            }
        }
    }

    #[test]
    fn csv_reports_line_numbers() {
        let err = Pcm::from_csv_str("# hdr\n1,2\n0.5,1,3\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::RowLength {
                line: 3,
                expected: 2,
                found: 3
            }
        );
        let err = Pcm::from_csv_str("1,x\n0.5,1\n").unwrap_err();
        assert!(matches!(err, ParseError::BadNumber { line: 1, .. }));
        assert_eq!(Pcm::from_csv_str("# nothing\n"), Err(ParseError::Empty));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let a = segment4();
        let back = Pcm::from_csv_str(&a.to_csv_string()).unwrap();
        assert_eq!(a, back);
        let text = Pcm::from_upper(3, &[(1, 2, 5.0), (1, 3, 1.0 / 3.0), (2, 3, 1.0)])
            .unwrap()
            .to_csv_string();
        assert_eq!(text, "1,5,1/3\n1/5,1,1\n3,1,1\n");
    }
}
