//! LIBSVM text format: `<label> <index>:<value> ...` per line, `#` starts a
//! comment, blank lines are skipped. Indices are one-based by default and
//! stored zero-based.

use std::io::{BufRead, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sparse::{CsrMatrix, SparseDataset};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    /// Lower bound on the feature dimension; the largest index seen wins if larger.
    pub declared_dim: Option<usize>,
    pub one_based: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self {
            declared_dim: None,
            one_based: true,
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses one non-comment line into `(label, entries)`; `None` for blank lines.
#[allow(clippy::type_complexity)]
fn parse_line<T: Scalar>(text: &str, line: usize, one_based: bool) -> Result<Option<(i64, Vec<(usize, T)>)>> {
    let body = text.split('#').next().unwrap_or("");
    let mut tokens = body.split_whitespace();
    let Some(label_tok) = tokens.next() else {
        return Ok(None);
    };
    let label: i64 = label_tok
        .parse()
        .map_err(|_| parse_err(line, format!("label `{label_tok}` is not an integer")))?;
    let mut entries: Vec<(usize, T)> = Vec::new();
    for tok in tokens {
        let (idx_s, val_s) = tok
            .split_once(':')
            .ok_or_else(|| parse_err(line, format!("`{tok}` is not an index:value pair")))?;
        let idx: usize = idx_s
            .parse()
            .map_err(|_| parse_err(line, format!("bad index `{idx_s}`")))?;
        let idx = if one_based {
            idx.checked_sub(1)
                .ok_or_else(|| parse_err(line, "index 0 in a one-based file"))?
        } else {
            idx
        };
        let val: f64 = val_s
            .parse()
            .map_err(|_| parse_err(line, format!("bad value `{val_s}`")))?;
        let val = T::from_f64(val)
            .filter(|v| v.is_finite())
            .ok_or_else(|| parse_err(line, format!("value `{val_s}` is not finite")))?;
        if let Some(&(prev, _)) = entries.last() {
            if idx == prev {
                return Err(parse_err(line, format!("duplicate index {idx_s}")));
            }
            if idx < prev {
                return Err(parse_err(line, format!("index {idx_s} is not increasing")));
            }
        }
        entries.push((idx, val));
    }
    Ok(Some((label, entries)))
}

pub fn parse_libsvm<T: Scalar, R: BufRead>(mut source: R, opts: ParseOptions) -> Result<SparseDataset<T>> {
    let mut rows = Vec::new();
    let mut raw_labels = Vec::new();
    let mut max_col = 0usize;
    let mut buf = Vec::new();
    let mut line = 0;
    loop {
        buf.clear();
        let read = source
            .read_until(b'\n', &mut buf)
            .map_err(|e| Error::Io(e.to_string()))?;
        if read == 0 {
            break;
        }
        line += 1;
        let text = std::str::from_utf8(&buf).map_err(|_| parse_err(line, "invalid UTF-8"))?;
        if let Some((label, entries)) = parse_line::<T>(text, line, opts.one_based)? {
            if let Some(&(j, _)) = entries.last() {
                max_col = max_col.max(j.checked_add(1).ok_or_else(|| parse_err(line, "index overflow"))?);
            }
            raw_labels.push(label);
            rows.push(entries);
        }
    }
    let cols = max_col.max(opts.declared_dim.unwrap_or(0));
    let features = CsrMatrix::from_rows(cols, &rows)?;
    SparseDataset::from_raw_labels(features, &raw_labels)
}

pub fn parse_libsvm_str<T: Scalar>(text: &str, opts: ParseOptions) -> Result<SparseDataset<T>> {
    parse_libsvm(text.as_bytes(), opts)
}

pub fn read_libsvm_file<T: Scalar>(path: &std::path::Path, opts: ParseOptions) -> Result<SparseDataset<T>> {
    let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_libsvm(std::io::BufReader::new(file), opts)
}

/// Writes `ds` with its original labels.
pub fn write_libsvm<T: Scalar, W: Write>(ds: &SparseDataset<T>, mut out: W, one_based: bool) -> Result<()> {
    let inverse: Vec<i64> = ds.label_map.keys().copied().collect();
    let shift = usize::from(one_based);
    let io = |e: std::io::Error| Error::Io(e.to_string());
    for i in 0..ds.len() {
        write!(out, "{}", inverse[ds.labels[i] - 1]).map_err(io)?;
        let (idx, val) = ds.features.row(i);
        for (&j, &v) in idx.iter().zip(val) {
            write!(out, " {}:{}", j + shift, v).map_err(io)?;
        }
        writeln!(out).map_err(io)?;
    }
    Ok(())
}

/// Seeded sample of `n_keep` rows without replacement, in original order.
pub fn train_subsample<T: Scalar>(ds: &SparseDataset<T>, n_keep: usize, seed: u64) -> Result<SparseDataset<T>> {
    if n_keep == 0 || n_keep > ds.len() {
        return Err(Error::invalid("n_keep", format!("must be in 1..={}", ds.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = rand::seq::index::sample(&mut rng, ds.len(), n_keep).into_vec();
    keep.sort_unstable();
    Ok(SparseDataset {
        features: ds.features.select_rows(&keep),
        labels: keep.iter().map(|&i| ds.labels[i]).collect(),
        label_map: ds.label_map.clone(),
    })
}
