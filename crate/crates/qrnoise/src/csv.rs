//! Plain-text matrix files and result tables.
//!
//! A matrix file starts with `rows,cols` followed by one comma-separated row
//! per line. Values are written with 17 significant digits, which round-trips
//! every `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use qrnoise_core::linalg::DenseMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}: {message}")]
    Parse { origin: String, line: usize, message: String },
}

fn parse_err(origin: &str, line: usize, message: impl Into<String>) -> CsvError {
    CsvError::Parse { origin: origin.to_string(), line, message: message.into() }
}

/// Parses matrix text; `origin` names the source in error messages.
pub fn parse_matrix(text: &str, origin: &str) -> Result<DenseMatrix, CsvError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(origin, 1, "missing `rows,cols` header"))?;
    let dims: Vec<&str> = header.split(',').map(str::trim).collect();
    let [r, c] = dims[..] else {
        return Err(parse_err(origin, hline, "header must be `rows,cols`"));
    };
    let parse_dim = |s: &str| {
        s.parse::<usize>().map_err(|_| parse_err(origin, hline, format!("bad dimension `{s}`")))
    };
    let (rows, cols) = (parse_dim(r)?, parse_dim(c)?);
    if rows == 0 || cols == 0 {
        return Err(parse_err(origin, hline, "dimensions must be positive"));
    }
    let mut data = vec![0.0; rows * cols];
    let mut seen = 0;
    for (lno, line) in lines {
        if seen == rows {
            return Err(parse_err(origin, lno, format!("more than {rows} data rows")));
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != cols {
            return Err(parse_err(origin, lno, format!("expected {cols} values, found {}", fields.len())));
        }
        for (j, f) in fields.iter().enumerate() {
            let v: f64 = f.parse().map_err(|_| parse_err(origin, lno, format!("bad number `{f}`")))?;
            if !v.is_finite() {
                return Err(parse_err(origin, lno, format!("non-finite value `{f}`")));
            }
            data[j * rows + seen] = v;
        }
        seen += 1;
    }
    if seen != rows {
        return Err(parse_err(origin, hline, format!("expected {rows} data rows, found {seen}")));
    }
    Ok(DenseMatrix::new(rows, cols, data).expect("validated above"))
}

pub fn read_matrix(path: &Path) -> Result<DenseMatrix, CsvError> {
    let text = fs::read_to_string(path).map_err(|source| CsvError::Io { path: path.to_path_buf(), source })?;
    parse_matrix(&text, &path.display().to_string())
}

/// Reads a vector stored as an `m×1` or `1×m` matrix.
pub fn read_vector(path: &Path) -> Result<Vec<f64>, CsvError> {
    let m = read_matrix(path)?;
    if m.cols() == 1 || m.rows() == 1 {
        Ok(m.as_slice().to_vec())
    } else {
        Err(parse_err(&path.display().to_string(), 1, "expected a single row or column"))
    }
}

pub fn format_matrix(a: &DenseMatrix) -> String {
    let mut s = format!("{},{}\n", a.rows(), a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if j > 0 {
                s.push(',');
            }
            let _ = write!(s, "{:.16e}", a.get(i, j));
        }
        s.push('\n');
    }
    s
}

pub fn write_matrix(path: &Path, a: &DenseMatrix) -> Result<(), CsvError> {
    fs::write(path, format_matrix(a)).map_err(|source| CsvError::Io { path: path.to_path_buf(), source })
}

/// A result table with a fixed header. Cells are preformatted with [`cell`].
#[derive(Clone, Debug)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

/// Values that can fill a [`Table`] cell.
pub trait CellValue {
    fn render(&self) -> String;
}

/// Shortest round-trip form; exponent notation outside `[1e-4, 1e7)`.
impl CellValue for f64 {
    fn render(&self) -> String {
        let a = self.abs();
        if *self == 0.0 || !self.is_finite() || (1e-4..1e7).contains(&a) {
            self.to_string()
        } else {
            format!("{self:e}")
        }
    }
}

macro_rules! int_cells {
    ($($t:ty),*) => {$(
        impl CellValue for $t {
            fn render(&self) -> String {
                self.to_string()
            }
        }
    )*};
}
int_cells!(u64, usize);

impl<T: CellValue + ?Sized> CellValue for &T {
    fn render(&self) -> String {
        (**self).render()
    }
}

pub fn cell<T: CellValue>(v: T) -> String {
    v.render()
}
