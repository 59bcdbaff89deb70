//! Matrix Market reader: complex (or real, promoted) general matrices in
//! coordinate or array format, plus the `%%kappa re im` header extension
//! carrying the scalar of the R-linear operator.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use rlinear::mat::{DenseMatrix, DenseVector};

pub struct MmMatrix {
    pub matrix: DenseMatrix<f64>,
    pub kappa: Option<Complex64>,
}

struct Header {
    coordinate: bool,
    complex: bool,
    pattern_ok: bool,
}

fn parse_header(path: &Path, line: &str) -> Result<Header> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() < 5 || !toks[0].eq_ignore_ascii_case("%%MatrixMarket") {
        bail!("{}:1: not a MatrixMarket header", path.display());
    }
    if !toks[1].eq_ignore_ascii_case("matrix") {
        bail!("{}:1: only `matrix` objects are supported", path.display());
    }
    let coordinate = match toks[2].to_ascii_lowercase().as_str() {
        "coordinate" => true,
        "array" => false,
        other => bail!("{}:1: unknown format `{other}`", path.display()),
    };
    let complex = match toks[3].to_ascii_lowercase().as_str() {
        "complex" => true,
        "real" | "integer" => false,
        other => bail!("{}:1: unsupported field `{other}`", path.display()),
    };
    if !toks[4].eq_ignore_ascii_case("general") {
        bail!(
            "{}:1: only `general` symmetry is supported, found `{}`",
            path.display(),
            toks[4]
        );
    }
    Ok(Header {
        coordinate,
        complex,
        pattern_ok: true,
    })
}

fn parse_value(
    path: &Path,
    lineno: usize,
    toks: &[&str],
    offset: usize,
    complex: bool,
) -> Result<Complex64> {
    let re: f64 = toks
        .get(offset)
        .ok_or_else(|| anyhow!("{}:{}: missing value", path.display(), lineno))?
        .parse()
        .map_err(|_| anyhow!("{}:{}: bad number `{}`", path.display(), lineno, toks[offset]))?;
    let im = if complex {
        toks.get(offset + 1)
            .ok_or_else(|| anyhow!("{}:{}: missing imaginary part", path.display(), lineno))?
            .parse()
            .map_err(|_| {
                anyhow!(
                    "{}:{}: bad number `{}`",
                    path.display(),
                    lineno,
                    toks[offset + 1]
                )
            })?
    } else {
        0.0
    };
    Ok(Complex64::new(re, im))
}

/// Read a general dense/sparse matrix; `%%kappa re im` in the comment block
/// sets the scalar of the operator.
pub fn read_matrix(path: &Path) -> Result<MmMatrix> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    let (_, first) = lines
        .next()
        .ok_or_else(|| anyhow!("{}: empty file", path.display()))?;
    let header = parse_header(path, first)?;
    let _ = header.pattern_ok;

    let mut kappa = None;
    let mut size_line = None;
    for (idx, line) in lines.by_ref() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("%%kappa") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 2 {
                bail!(
                    "{}:{}: %%kappa needs two numbers (re im)",
                    path.display(),
                    lineno
                );
            }
            let re: f64 = toks[0].parse().map_err(|_| {
                anyhow!("{}:{}: bad kappa `{}`", path.display(), lineno, toks[0])
            })?;
            let im: f64 = toks[1].parse().map_err(|_| {
                anyhow!("{}:{}: bad kappa `{}`", path.display(), lineno, toks[1])
            })?;
            kappa = Some(Complex64::new(re, im));
            continue;
        }
        if trimmed.starts_with('%') {
            continue;
        }
        size_line = Some((lineno, trimmed.to_string()));
        break;
    }
    let (size_lineno, size_line) =
        size_line.ok_or_else(|| anyhow!("{}: missing size line", path.display()))?;
    let sizes: Vec<&str> = size_line.split_whitespace().collect();
    let expected_sizes = if header.coordinate { 3 } else { 2 };
    if sizes.len() != expected_sizes {
        bail!(
            "{}:{}: size line needs {} integers",
            path.display(),
            size_lineno,
            expected_sizes
        );
    }
    let rows: usize = sizes[0]
        .parse()
        .map_err(|_| anyhow!("{}:{}: bad row count", path.display(), size_lineno))?;
    let cols: usize = sizes[1]
        .parse()
        .map_err(|_| anyhow!("{}:{}: bad column count", path.display(), size_lineno))?;

    let mut matrix = DenseMatrix::<f64>::zeros(rows, cols);
    if header.coordinate {
        let nnz: usize = sizes[2]
            .parse()
            .map_err(|_| anyhow!("{}:{}: bad nnz count", path.display(), size_lineno))?;
        let mut seen = 0usize;
        for (idx, line) in lines {
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('%') {
                continue;
            }
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            let i: usize = toks
                .first()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| anyhow!("{}:{}: bad row index", path.display(), lineno))?;
            let j: usize = toks
                .get(1)
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| anyhow!("{}:{}: bad column index", path.display(), lineno))?;
            if i < 1 || i > rows || j < 1 || j > cols {
                bail!(
                    "{}:{}: entry ({i}, {j}) outside {rows}x{cols}",
                    path.display(),
                    lineno
                );
            }
            let v = parse_value(path, lineno, &toks, 2, header.complex)?;
            matrix[(i - 1, j - 1)] = v;
            seen += 1;
        }
        if seen != nnz {
            bail!(
                "{}: expected {} entries, found {}",
                path.display(),
                nnz,
                seen
            );
        }
    } else {
        // array format: column-major dense listing
        let mut values = Vec::with_capacity(rows * cols);
        for (idx, line) in lines {
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('%') {
                continue;
            }
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            values.push(parse_value(path, lineno, &toks, 0, header.complex)?);
        }
        if values.len() != rows * cols {
            bail!(
                "{}: array matrix needs {} values, found {}",
                path.display(),
                rows * cols,
                values.len()
            );
        }
        for j in 0..cols {
            for i in 0..rows {
                matrix[(i, j)] = values[j * rows + i];
            }
        }
    }
    Ok(MmMatrix { matrix, kappa })
}

/// Read a right-hand side: an `n x 1` MatrixMarket matrix.
pub fn read_vector(path: &Path, expected_len: usize) -> Result<DenseVector<f64>> {
    let mm = read_matrix(path)?;
    if mm.matrix.cols() != 1 {
        bail!(
            "{}: right-hand side must have one column, found {}",
            path.display(),
            mm.matrix.cols()
        );
    }
    if mm.matrix.rows() != expected_len {
        bail!(
            "{}: right-hand side length {} does not match the matrix order {}",
            path.display(),
            mm.matrix.rows(),
            expected_len
        );
    }
    Ok(mm.matrix.col_vector(0))
}

/// Read the problem triple `(kappa, M, b)`; `b` defaults to all ones when no
/// rhs file is given, and `kappa` defaults to zero unless the matrix file
/// carries a `%%kappa` header or the command line overrides it.
pub fn read_problem(
    matrix_path: &Path,
    rhs_path: Option<&Path>,
    kappa_override: Option<Complex64>,
) -> Result<(Complex64, DenseMatrix<f64>, DenseVector<f64>)> {
    let mm = read_matrix(matrix_path)?;
    if mm.matrix.rows() != mm.matrix.cols() {
        bail!(
            "{}: operator matrix must be square, found {}x{}",
            matrix_path.display(),
            mm.matrix.rows(),
            mm.matrix.cols()
        );
    }
    let n = mm.matrix.rows();
    let b = match rhs_path {
        Some(p) => read_vector(p, n)?,
        None => DenseVector::ones(n),
    };
    let kappa = kappa_override
        .or(mm.kappa)
        .unwrap_or_else(|| Complex64::new(0.0, 0.0));
    Ok((kappa, mm.matrix, b))
}
