//! Dense matrix files.
//!
//! Two formats are supported:
//!
//! * Matrix Market `array real general` (text, column-major payload as the
//!   format requires), written with 17 significant digits.
//! * Raw binary: a 16-byte header of two little-endian `u64` (rows, cols)
//!   followed by the row-major payload as little-endian IEEE `f64`.
//!
//! Loading never returns a partial matrix; truncated, malformed, or
//! non-finite input is reported with its line (text) or byte offset
//! (binary).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{CurError, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    MatrixMarket,
    RawBinary,
}

impl FromStr for MatrixFormat {
    type Err = CurError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mm" | "mtx" | "matrix-market" => Ok(MatrixFormat::MatrixMarket),
            "bin" | "raw" | "raw-binary" => Ok(MatrixFormat::RawBinary),
            other => Err(CurError::InvalidArgument(format!(
                "unknown matrix format `{other}` (expected mm or bin)"
            ))),
        }
    }
}

const MM_BANNER: &str = "%%MatrixMarket matrix array real general";
const HEADER_BYTES: usize = 16;

pub fn load_matrix<T: Scalar>(path: impl AsRef<Path>, format: MatrixFormat) -> Result<Matrix<T>> {
    let path = path.as_ref();
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let loaded = match format {
        MatrixFormat::MatrixMarket => read_matrix_market(reader),
        MatrixFormat::RawBinary => read_raw_binary(reader),
    };
    loaded.map_err(|e| match e {
        ParseError::Io(io) => CurError::Io(io),
        ParseError::At { position, message } => CurError::Load {
            path: path.to_path_buf(),
            position,
            message,
        },
    })
}

pub fn store_matrix<T: Scalar>(
    matrix: &Matrix<T>,
    path: impl AsRef<Path>,
    format: MatrixFormat,
) -> Result<()> {
    let mut writer = BufWriter::new(File::create(path)?);
    match format {
        MatrixFormat::MatrixMarket => write_matrix_market(matrix, &mut writer)?,
        MatrixFormat::RawBinary => write_raw_binary(matrix, &mut writer)?,
    }
    writer.flush()?;
    Ok(())
}

#[derive(Debug)]
enum ParseError {
    Io(std::io::Error),
    At { position: String, message: String },
}

impl From<std::io::Error> for ParseError {
    fn from(e: std::io::Error) -> Self {
        ParseError::Io(e)
    }
}

fn at(position: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::At {
        position: position.into(),
        message: message.into(),
    }
}

fn line_pos(line: usize) -> String {
    format!("line {line}")
}

pub fn write_matrix_market<T: Scalar, W: Write>(matrix: &Matrix<T>, w: &mut W) -> Result<()> {
    writeln!(w, "{MM_BANNER}")?;
    writeln!(w, "{} {}", matrix.rows(), matrix.cols())?;
    for j in 0..matrix.cols() {
        for i in 0..matrix.rows() {
            writeln!(w, "{:.16e}", matrix.get(i, j).as_f64())?;
        }
    }
    Ok(())
}

fn read_matrix_market<T: Scalar, R: BufRead>(
    reader: R,
) -> std::result::Result<Matrix<T>, ParseError> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, banner) = lines.next().ok_or_else(|| at("line 1", "empty file"))?;
    let banner = banner?;
    let fields: Vec<String> = banner
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(at(
            "line 1",
            format!("not a Matrix Market banner: `{banner}`"),
        ));
    }
    if fields[2] != "array" {
        return Err(at(
            "line 1",
            format!("unsupported layout `{}` (only dense array)", fields[2]),
        ));
    }
    if !matches!(fields[3].as_str(), "real" | "double" | "integer") {
        return Err(at("line 1", format!("unsupported field `{}`", fields[3])));
    }
    if fields[4] != "general" {
        return Err(at(
            "line 1",
            format!("unsupported symmetry `{}`", fields[4]),
        ));
    }

    let mut size: Option<(usize, usize)> = None;
    let mut values: Vec<f64> = Vec::new();
    let mut expected = 0usize;
    for (lineno, line) in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        match size {
            None => {
                let dims: Vec<&str> = trimmed.split_whitespace().collect();
                if dims.len() != 2 {
                    return Err(at(line_pos(lineno), "size line must hold `rows cols`"));
                }
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| at(line_pos(lineno), format!("bad dimension `{s}`")))
                };
                let (rows, cols) = (parse(dims[0])?, parse(dims[1])?);
                if rows == 0 || cols == 0 {
                    return Err(at(line_pos(lineno), format!("empty shape {rows}x{cols}")));
                }
                expected = rows
                    .checked_mul(cols)
                    .ok_or_else(|| at(line_pos(lineno), "dimensions overflow"))?;
                values.reserve(expected);
                size = Some((rows, cols));
            }
            Some(_) => {
                for tok in trimmed.split_whitespace() {
                    if values.len() == expected {
                        return Err(at(
                            line_pos(lineno),
                            format!("more than the {expected} declared entries"),
                        ));
                    }
                    let v: f64 = tok
                        .parse()
                        .map_err(|_| at(line_pos(lineno), format!("bad number `{tok}`")))?;
                    if !v.is_finite() {
                        return Err(at(line_pos(lineno), format!("non-finite entry `{tok}`")));
                    }
                    values.push(v);
                }
            }
        }
    }
    let (rows, cols) = size.ok_or_else(|| at("end of file", "missing size line"))?;
    if values.len() != expected {
        return Err(at(
            "end of file",
            format!("expected {expected} entries, found {}", values.len()),
        ));
    }
    // column-major on disk
    Matrix::from_fn(rows, cols, |i, j| T::of(values[j * rows + i]))
        .map_err(|e| at("size line", e.to_string()))
}

pub fn write_raw_binary<T: Scalar, W: Write>(matrix: &Matrix<T>, w: &mut W) -> Result<()> {
    w.write_all(&(matrix.rows() as u64).to_le_bytes())?;
    w.write_all(&(matrix.cols() as u64).to_le_bytes())?;
    for &x in matrix.as_slice() {
        w.write_all(&x.as_f64().to_le_bytes())?;
    }
    Ok(())
}

fn read_exact_or_truncated<R: Read>(
    r: &mut R,
    buf: &mut [u8],
    offset: usize,
) -> std::result::Result<(), ParseError> {
    let mut filled = 0;
    while filled < buf.len() {
        match r.read(&mut buf[filled..]) {
            Ok(0) => {
                return Err(at(
                    format!("byte {}", offset + filled),
                    format!("truncated: needed {} more bytes", buf.len() - filled),
                ))
            }
            Ok(n) => filled += n,
            Err(e) if e.kind() == std::io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}

fn read_raw_binary<T: Scalar, R: Read>(
    mut reader: R,
) -> std::result::Result<Matrix<T>, ParseError> {
    let mut header = [0u8; HEADER_BYTES];
    read_exact_or_truncated(&mut reader, &mut header, 0)?;
    let rows = u64::from_le_bytes(header[..8].try_into().expect("8-byte slice"));
    let cols = u64::from_le_bytes(header[8..].try_into().expect("8-byte slice"));
    if rows == 0 || cols == 0 {
        return Err(at("byte 0", format!("empty shape {rows}x{cols}")));
    }
    let count = usize::try_from(rows)
        .ok()
        .zip(usize::try_from(cols).ok())
        .and_then(|(r, c)| r.checked_mul(c))
        .filter(|n| n.checked_mul(8).is_some())
        .ok_or_else(|| at("byte 0", format!("shape {rows}x{cols} too large")))?;

    let mut data = Vec::with_capacity(count);
    let mut chunk = vec![0u8; 8 * 4096];
    let mut offset = HEADER_BYTES;
    let mut remaining = count;
    while remaining > 0 {
        let take = remaining.min(4096);
        let buf = &mut chunk[..take * 8];
        read_exact_or_truncated(&mut reader, buf, offset)?;
        for (k, word) in buf.chunks_exact(8).enumerate() {
            let v = f64::from_le_bytes(word.try_into().expect("8-byte chunk"));
            if !v.is_finite() {
                return Err(at(
                    format!("byte {}", offset + 8 * k),
                    format!("non-finite entry {v}"),
                ));
            }
            data.push(T::of(v));
        }
        offset += take * 8;
        remaining -= take;
    }
    let mut probe = [0u8; 1];
    if reader.read(&mut probe)? != 0 {
        return Err(at(format!("byte {offset}"), "trailing bytes after payload"));
    }
    Matrix::from_vec(rows as usize, cols as usize, data).map_err(|e| at("byte 0", e.to_string()))
}
