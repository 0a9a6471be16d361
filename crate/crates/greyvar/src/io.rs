//! File formats: path CSV, the binary run bundle, numeric tables, and
//! atomic file writes.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use greyvar_core::{GreyParams, GridSpec, RngSpec, SamplePath};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Writes `bytes` to a temporary file next to `path`, then renames it over
/// `path`. Readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::Builder::new()
        .prefix(".greyvar-")
        .tempfile_in(dir)
        .map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// A header-plus-rows table rendered as CSV.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV bytes, preceded by `# `-prefixed comment lines.
    pub fn to_csv(&self, comments: &[String]) -> Vec<u8> {
        let mut buf = Vec::new();
        for c in comments {
            buf.extend_from_slice(b"# ");
            buf.extend_from_slice(c.as_bytes());
            buf.push(b'\n');
        }
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }
}

fn grid_comments(grid: GridSpec) -> Vec<String> {
    match grid {
        GridSpec::Dyadic { level } => vec!["grid=dyadic".into(), format!("level={level}")],
        GridSpec::Uniform { n } => vec!["grid=uniform".into(), format!("n={n}")],
    }
}

/// Path CSV with columns `t,value` and a comment header carrying the grid,
/// the parameters and the seed.
pub fn path_to_csv(path: &SamplePath) -> Vec<u8> {
    let mut comments = vec!["greyvar path".to_string()];
    comments.extend(grid_comments(path.grid()));
    if let Some(p) = path.params() {
        comments.push(format!("alpha={}", fmt_f64(p.alpha())));
        comments.push(format!("beta={}", fmt_f64(p.beta())));
    }
    if let Some(s) = path.seed() {
        comments.push(format!("master_seed={}", s.master_seed));
        comments.push(format!("stream_id={}", s.stream_id));
    }
    let mut table = Table::new(["t", "value"]);
    for (j, v) in path.values().iter().enumerate() {
        table.push(vec![fmt_f64(path.grid().time(j)), fmt_f64(*v)]);
    }
    table.to_csv(&comments)
}

fn bad(what: impl Into<String>) -> CliError {
    CliError::usage(what)
}

fn header_value<T: std::str::FromStr>(keys: &[(String, String)], key: &str) -> Result<Option<T>> {
    match keys.iter().find(|(k, _)| k == key) {
        None => Ok(None),
        Some((_, v)) => v
            .parse()
            .map(Some)
            .map_err(|_| bad(format!("path header: cannot parse {key}={v}"))),
    }
}

/// Parses a path CSV written by [`path_to_csv`].
pub fn path_from_csv(bytes: &[u8]) -> Result<SamplePath> {
    let text = std::str::from_utf8(bytes).map_err(|_| bad("path CSV is not UTF-8"))?;
    let keys: Vec<(String, String)> = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .filter_map(|l| l.trim_start_matches('#').trim().split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect();
    let grid = match keys.iter().find(|(k, _)| k == "grid").map(|(_, v)| v.as_str()) {
        Some("dyadic") => {
            GridSpec::dyadic(header_value(&keys, "level")?.ok_or_else(|| bad("path header: missing level"))?)
        }
        Some("uniform") => GridSpec::uniform(header_value(&keys, "n")?.ok_or_else(|| bad("path header: missing n"))?),
        other => return Err(bad(format!("path header: unknown grid {other:?}"))),
    };
    grid.validate()?;

    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(bytes);
    let headers = rdr.headers().map_err(|e| bad(format!("path CSV: {e}")))?;
    if headers != vec!["t", "value"] {
        return Err(bad(format!("path CSV columns must be t,value, got {headers:?}")));
    }
    let mut values = Vec::with_capacity(grid.len());
    for (j, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(format!("path CSV: {e}")))?;
        let num = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(format!("path CSV row {}: bad number", j + 1)))
        };
        let t = num(0)?;
        if j >= grid.len() || (t - grid.time(j)).abs() > 1e-12 {
            return Err(bad(format!("path CSV row {}: t = {t} is off the grid", j + 1)));
        }
        values.push(num(1)?);
    }
    let params = match (header_value(&keys, "alpha")?, header_value(&keys, "beta")?) {
        (Some(a), Some(b)) => Some(GreyParams::new(a, b)?),
        _ => None,
    };
    let seed = match (header_value(&keys, "master_seed")?, header_value(&keys, "stream_id")?) {
        (Some(m), Some(s)) => Some(RngSpec::new(m, s)),
        _ => None,
    };
    Ok(SamplePath::new(grid, values)?.with_provenance(params, seed))
}

const BUNDLE_MAGIC: &[u8; 8] = b"GVBUNDLE";
const BUNDLE_VERSION: u32 = 1;

/// Metadata block of a run bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleHeader {
    pub grid: String,
    /// Dyadic level or uniform interval count.
    pub resolution: u32,
    pub alpha: f64,
    pub beta: f64,
    pub master_seed: u64,
    pub method: String,
}

impl BundleHeader {
    pub fn grid_spec(&self) -> Result<GridSpec> {
        let g = match self.grid.as_str() {
            "dyadic" => GridSpec::dyadic(self.resolution),
            "uniform" => GridSpec::uniform(self.resolution),
            other => return Err(bad(format!("bundle: unknown grid {other:?}"))),
        };
        g.validate()?;
        Ok(g)
    }
}

/// Binary run bundle.
///
/// Layout, little endian: the magic `GVBUNDLE`, a `u32` format version, a
/// `u32` length and that many bytes of JSON [`BundleHeader`], `u64` path
/// count, `u64` points per path, then per path its `u64` stream id followed
/// by the `f64` values.
pub fn bundle_to_bytes(header: &BundleHeader, paths: &[SamplePath]) -> Result<Vec<u8>> {
    let grid = header.grid_spec()?;
    let meta = serde_json::to_vec(header).expect("header serializes");
    let mut out = Vec::with_capacity(32 + meta.len() + paths.len() * (8 + 8 * grid.len()));
    out.extend_from_slice(BUNDLE_MAGIC);
    out.extend_from_slice(&BUNDLE_VERSION.to_le_bytes());
    out.extend_from_slice(&(meta.len() as u32).to_le_bytes());
    out.extend_from_slice(&meta);
    out.extend_from_slice(&(paths.len() as u64).to_le_bytes());
    out.extend_from_slice(&(grid.len() as u64).to_le_bytes());
    for p in paths {
        if p.grid() != grid {
            return Err(bad("bundle: path grid differs from the header grid"));
        }
        let stream = p.seed().map_or(0, |s| s.stream_id);
        out.extend_from_slice(&stream.to_le_bytes());
        for v in p.values() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    buf: &'a [u8],
}

impl Cursor<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        if self.buf.len() < n {
            return Err(bad("bundle: truncated"));
        }
        let (head, rest) = self.buf.split_at(n);
        self.buf = rest;
        Ok(head)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn bundle_from_bytes(bytes: &[u8]) -> Result<(BundleHeader, Vec<SamplePath>)> {
    let mut cur = Cursor { buf: bytes };
    if cur.take(8)? != BUNDLE_MAGIC {
        return Err(bad("bundle: bad magic"));
    }
    let version = cur.u32()?;
    if version != BUNDLE_VERSION {
        return Err(bad(format!("bundle: unsupported version {version}")));
    }
    let len = cur.u32()? as usize;
    let header: BundleHeader =
        serde_json::from_slice(cur.take(len)?).map_err(|e| bad(format!("bundle header: {e}")))?;
    let grid = header.grid_spec()?;
    let params = GreyParams::new(header.alpha, header.beta)?;
    let n_paths = cur.u64()?;
    let n_points = cur.u64()? as usize;
    if n_points != grid.len() {
        return Err(bad("bundle: point count does not match the grid"));
    }
    let mut paths = Vec::new();
    for _ in 0..n_paths {
        let stream = cur.u64()?;
        let values = cur
            .take(8 * n_points)?
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let seed = RngSpec::new(header.master_seed, stream);
        paths.push(SamplePath::new(grid, values)?.with_provenance(Some(params), Some(seed)));
    }
    if !cur.buf.is_empty() {
        return Err(bad("bundle: trailing bytes"));
    }
    Ok((header, paths))
}

pub fn read_file(path: &Path) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut buf))
        .map_err(|e| CliError::io(path, e))?;
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use greyvar_core::sampling::sample_ggbm;
    use proptest::prelude::*;

    fn path(level: u32, stream: u64) -> SamplePath {
        let params = GreyParams::new(1.3, 0.6).unwrap();
        sample_ggbm(params, GridSpec::dyadic(level), RngSpec::new(5, stream)).unwrap()
    }

    proptest! {
        #[test]
        fn shortest_float_roundtrip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
            prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn float_format() {
        assert_eq!(fmt_f64(1.0), "1.0");
        assert_eq!(fmt_f64(0.1), "0.1");
        assert_eq!(fmt_f64(1e-7), "1e-7");
    }

    #[test]
    fn path_csv_roundtrip() {
        let p = path(6, 3);
        let bytes = path_to_csv(&p);
        let text = std::str::from_utf8(&bytes).unwrap();
        assert!(text.starts_with("# greyvar path\n# grid=dyadic\n# level=6\n# alpha=1.3\n# beta=0.6\n"));
        assert!(text.contains("# master_seed=5\n# stream_id=3\nt,value\n0.0,0.0\n0.015625,"));
        let back = path_from_csv(&bytes).unwrap();
        assert_eq!(back, p);

        let u = SamplePath::from_fn(GridSpec::uniform(7), |t| t * t).unwrap();
        assert_eq!(path_from_csv(&path_to_csv(&u)).unwrap(), u);
    }

    #[test]
    fn path_csv_rejects_bad_input() {
        let good = String::from_utf8(path_to_csv(&path(3, 0))).unwrap();
        let cases = [
            good.replace("grid=dyadic", "grid=hex"),
            good.replace("t,value", "time,value"),
            good.replace("0.125,", "0.13,"),
            good.replace("# level=3\n", ""),
            good.lines().take(12).collect::<Vec<_>>().join("\n"),
        ];
        for c in cases {
            assert_eq!(path_from_csv(c.as_bytes()).unwrap_err().exit_code(), 2, "{c}");
        }
    }

    #[test]
    fn bundle_roundtrip() {
        let paths: Vec<_> = (0..3).map(|s| path(5, 10 + s)).collect();
        let header = BundleHeader {
            grid: "dyadic".into(),
            resolution: 5,
            alpha: 1.3,
            beta: 0.6,
            master_seed: 5,
            method: "auto".into(),
        };
        let bytes = bundle_to_bytes(&header, &paths).unwrap();
        assert_eq!(&bytes[..8], b"GVBUNDLE");
        let (h, back) = bundle_from_bytes(&bytes).unwrap();
        assert_eq!(h, header);
        assert_eq!(back, paths);

        assert!(bundle_from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(bundle_from_bytes(&extra).is_err());
        let other = path(4, 0);
        assert!(bundle_to_bytes(&header, &[other]).is_err());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("out.txt");
        write_atomic(&target, b"one").unwrap();
        write_atomic(&target, b"two").unwrap();
        assert_eq!(fs::read(&target).unwrap(), b"two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);

        let missing = dir.path().join("no/such/dir/out.txt");
        assert_eq!(write_atomic(&missing, b"x").unwrap_err().exit_code(), 4);
    }
}
