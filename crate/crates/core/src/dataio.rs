//! Labeled datasets and their loaders (MNIST IDX and plain numeric CSV).

use std::collections::{BTreeSet, HashMap};
use std::hash::{DefaultHasher, Hash, Hasher};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointSet;

const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub points: PointSet,
    pub labels: Vec<String>,
    /// Distinct labels in order of first appearance.
    pub label_universe: Vec<String>,
    pub name: String,
}

impl LabeledDataset {
    /// Checks lengths and rejects points that appear under two labels.
    pub fn new(points: PointSet, labels: Vec<String>, name: impl Into<String>) -> Result<Self> {
        if labels.len() != points.len() {
            return Err(Error::Config(format!(
                "{} labels for {} points",
                labels.len(),
                points.len()
            )));
        }
        check_conflicts(&points, &labels)?;
        let mut seen = BTreeSet::new();
        let label_universe = labels
            .iter()
            .filter(|l| seen.insert(l.as_str()))
            .cloned()
            .collect();
        Ok(Self {
            points,
            labels,
            label_universe,
            name: name.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    pub fn count(&self, label: &str) -> usize {
        self.labels.iter().filter(|l| *l == label).count()
    }

    /// Keeps at most `n` points per label, chosen uniformly with `seed`, in
    /// their original order.
    pub fn subsample_per_class(&self, n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut keep = Vec::new();
        for label in &self.label_universe {
            let mut idx: Vec<usize> = (0..self.len())
                .filter(|&i| &self.labels[i] == label)
                .collect();
            idx.shuffle(&mut rng);
            idx.truncate(n);
            keep.extend(idx);
        }
        keep.sort_unstable();
        Self {
            points: self.points.select(&keep),
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
            label_universe: self.label_universe.clone(),
            name: self.name.clone(),
        }
    }
}

fn check_conflicts(points: &PointSet, labels: &[String]) -> Result<()> {
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        let mut h = DefaultHasher::new();
        for c in p {
            // -0.0 and 0.0 are the same point
            (c + 0.0).to_bits().hash(&mut h);
        }
        let bucket = buckets.entry(h.finish()).or_default();
        if let Some(&j) = bucket
            .iter()
            .find(|&&j| points.point(j) == p && labels[j] != labels[i])
        {
            return Err(Error::ConflictingLabels {
                index: i,
                first: labels[j].clone(),
                second: labels[i].clone(),
            });
        }
        bucket.push(i);
    }
    Ok(())
}

/// The two class point sets `(label_a, label_b)`.
pub fn split_binary(
    d: &LabeledDataset,
    label_a: &str,
    label_b: &str,
) -> Result<(PointSet, PointSet)> {
    let pick = |label: &str| -> Result<PointSet> {
        let idx: Vec<usize> = (0..d.len()).filter(|&i| d.labels[i] == label).collect();
        if idx.is_empty() {
            return Err(Error::MissingLabel(label.to_string()));
        }
        Ok(d.points.select(&idx))
    };
    Ok((pick(label_a)?, pick(label_b)?))
}

fn format_err(path: &Path, reason: impl Into<String>) -> Error {
    Error::Format {
        path: path.display().to_string(),
        reason: reason.into(),
    }
}

fn read_u32(buf: &[u8], offset: usize, path: &Path) -> Result<u32> {
    buf.get(offset..offset + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| format_err(path, format!("truncated header at byte offset {offset}")))
}

fn payload<'a>(buf: &'a [u8], start: usize, len: usize, path: &Path) -> Result<&'a [u8]> {
    buf.get(start..start + len).ok_or_else(|| {
        format_err(
            path,
            format!(
                "truncated data: expected {} bytes, file ends at byte offset {}",
                start + len,
                buf.len()
            ),
        )
    })
}

/// Loads an IDX image/label file pair, keeping only the digits in `keep`
/// (all when `None`). Pixels are divided by 255 unless `raw`.
pub fn load_idx(
    images_path: impl AsRef<Path>,
    labels_path: impl AsRef<Path>,
    keep: Option<&[u8]>,
    raw: bool,
) -> Result<LabeledDataset> {
    let (ip, lp) = (images_path.as_ref(), labels_path.as_ref());
    let images = std::fs::read(ip)?;
    let labels = std::fs::read(lp)?;

    let magic = read_u32(&images, 0, ip)?;
    if magic != IDX_IMAGES_MAGIC {
        return Err(format_err(
            ip,
            format!("bad magic {magic:#010x} at byte offset 0"),
        ));
    }
    let n = read_u32(&images, 4, ip)? as usize;
    let rows = read_u32(&images, 8, ip)? as usize;
    let cols = read_u32(&images, 12, ip)? as usize;
    let dim = rows * cols;
    if dim == 0 {
        return Err(format_err(ip, "zero-sized images"));
    }
    let pixels = payload(&images, 16, n * dim, ip)?;

    let magic = read_u32(&labels, 0, lp)?;
    if magic != IDX_LABELS_MAGIC {
        return Err(format_err(
            lp,
            format!("bad magic {magic:#010x} at byte offset 0"),
        ));
    }
    let m = read_u32(&labels, 4, lp)? as usize;
    if m != n {
        return Err(format_err(lp, format!("{m} labels for {n} images")));
    }
    let digits = payload(&labels, 8, n, lp)?;

    let scale = if raw { 1.0 } else { 1.0 / 255.0 };
    let kept: Vec<usize> = (0..n)
        .filter(|&i| keep.is_none_or(|k| k.contains(&digits[i])))
        .collect();
    let data: Vec<f64> = kept
        .iter()
        .flat_map(|&i| {
            pixels[i * dim..(i + 1) * dim]
                .iter()
                .map(|&p| p as f64 * scale)
        })
        .collect();
    let name = ip.file_name().map_or_else(
        || ip.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    );
    LabeledDataset::new(
        PointSet::from_flat(dim, data)?,
        kept.iter().map(|&i| digits[i].to_string()).collect(),
        name,
    )
}

/// Writes an IDX image file (`u8` pixels, `rows x cols` each).
pub fn write_idx_images(
    path: impl AsRef<Path>,
    rows: usize,
    cols: usize,
    pixels: &[u8],
) -> Result<()> {
    let n = pixels.len() / (rows * cols).max(1);
    let mut out = Vec::with_capacity(16 + pixels.len());
    for v in [IDX_IMAGES_MAGIC, n as u32, rows as u32, cols as u32] {
        out.extend_from_slice(&v.to_be_bytes());
    }
    out.extend_from_slice(pixels);
    Ok(std::fs::write(path, out)?)
}

pub fn write_idx_labels(path: impl AsRef<Path>, labels: &[u8]) -> Result<()> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&IDX_LABELS_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    Ok(std::fs::write(path, out)?)
}

/// Which CSV column holds the label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
}

impl std::str::FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    /// Digits select by position, anything else by header name.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(s.parse()
            .map(LabelColumn::Index)
            .unwrap_or_else(|_| LabelColumn::Name(s.to_string())))
    }
}

/// Loads a numeric CSV. The first row is a header if any of its feature
/// cells is not a number.
pub fn load_csv(path: impl AsRef<Path>, label_column: &LabelColumn) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| format_err(path, e.to_string()))?;
    let mut records = Vec::new();
    for r in reader.records() {
        let r = r.map_err(|e| format_err(path, e.to_string()))?;
        if r.len() == 1 && r[0].is_empty() {
            continue;
        }
        records.push(r);
    }
    let first = records
        .first()
        .ok_or_else(|| format_err(path, "empty file"))?;
    let width = first.len();

    let header_names: Option<Vec<String>> = {
        let numeric = |s: &str| s.parse::<f64>().is_ok();
        let label_idx_guess = match label_column {
            LabelColumn::Index(i) => Some(*i),
            LabelColumn::Name(_) => None,
        };
        let is_header = matches!(label_column, LabelColumn::Name(_))
            || first
                .iter()
                .enumerate()
                .any(|(k, c)| Some(k) != label_idx_guess && !numeric(c));
        is_header.then(|| first.iter().map(str::to_string).collect())
    };
    let label_idx = match label_column {
        LabelColumn::Index(i) if *i < width => *i,
        LabelColumn::Index(i) => {
            return Err(format_err(
                path,
                format!("label column {i} out of range ({width} columns)"),
            ))
        }
        LabelColumn::Name(name) => header_names
            .as_ref()
            .and_then(|h| h.iter().position(|c| c == name))
            .ok_or_else(|| format_err(path, format!("no column named {name:?}")))?,
    };
    let body = &records[usize::from(header_names.is_some())..];
    if body.is_empty() {
        return Err(format_err(path, "no data rows"));
    }
    if width < 2 {
        return Err(format_err(
            path,
            "need a label column and at least one feature",
        ));
    }

    let mut data = Vec::with_capacity(body.len() * (width - 1));
    let mut labels = Vec::with_capacity(body.len());
    for (r, rec) in body.iter().enumerate() {
        let line = r + 1 + usize::from(header_names.is_some());
        if rec.len() != width {
            return Err(format_err(
                path,
                format!("line {line}: {} fields, expected {width}", rec.len()),
            ));
        }
        for (k, cell) in rec.iter().enumerate() {
            if k == label_idx {
                labels.push(cell.to_string());
                continue;
            }
            let v: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| {
                    format_err(path, format!("line {line}: not a finite number: {cell:?}"))
                })?;
            data.push(v);
        }
    }
    let name = path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    );
    LabeledDataset::new(PointSet::from_flat(width - 1, data)?, labels, name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn csv_with_header() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "a.csv", "x,y,label\n0,0,a\n1,1,a\n0,1,b\n");
        let d = load_csv(&p, &"label".parse().unwrap()).unwrap();
        assert_eq!((d.len(), d.dim()), (3, 2));
        assert_eq!(d.label_universe, vec!["a", "b"]);
        assert_eq!(d.points.point(2), &[0.0, 1.0]);
    }

    #[test]
    fn csv_without_header_by_index() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "a.csv", "1,0.5,2\n0,1.5,3\n");
        let d = load_csv(&p, &LabelColumn::Index(0)).unwrap();
        assert_eq!(d.labels, vec!["1", "0"]);
        assert_eq!(d.points.point(1), &[1.5, 3.0]);
    }

    #[test]
    fn csv_errors() {
        let dir = tempfile::tempdir().unwrap();
        let label = LabelColumn::Name("label".into());
        let empty = write(&dir, "e.csv", "");
        assert!(load_csv(&empty, &label).is_err());
        let ragged = write(&dir, "r.csv", "x,label\n1,a\n2,3,b\n");
        assert!(load_csv(&ragged, &label).is_err());
        let text = write(&dir, "t.csv", "x,label\n1,a\nfoo,b\n");
        assert!(load_csv(&text, &label).is_err());
        let conflict = write(&dir, "c.csv", "x,y,label\n1,2,a\n1,2,b\n");
        assert!(matches!(
            load_csv(&conflict, &label),
            Err(Error::ConflictingLabels { index: 1, .. })
        ));
        // the same point twice under one label is fine
        let dup = write(&dir, "d.csv", "x,y,label\n1,2,a\n1,2,a\n3,3,b\n");
        assert_eq!(load_csv(&dup, &label).unwrap().len(), 3);
    }

    #[test]
    fn idx_round_trip_and_filter() {
        let dir = tempfile::tempdir().unwrap();
        let (ip, lp) = (dir.path().join("i"), dir.path().join("l"));
        let pixels: Vec<u8> = (0..3 * 4).map(|v| (v * 20) as u8).collect();
        write_idx_images(&ip, 2, 2, &pixels).unwrap();
        write_idx_labels(&lp, &[0, 7, 1]).unwrap();
        let d = load_idx(&ip, &lp, None, true).unwrap();
        assert_eq!((d.len(), d.dim()), (3, 4));
        assert_eq!(d.points.point(1), &[80.0, 100.0, 120.0, 140.0]);
        let d = load_idx(&ip, &lp, Some(&[0, 1]), false).unwrap();
        assert_eq!(d.labels, vec!["0", "1"]);
        assert!(d.points.as_flat().iter().all(|v| (0.0..=1.0).contains(v)));
        assert_eq!(d.points.point(1)[0], 160.0 / 255.0);
    }

    #[test]
    fn idx_errors_name_offsets() {
        let dir = tempfile::tempdir().unwrap();
        let (ip, lp) = (dir.path().join("i"), dir.path().join("l"));
        write_idx_images(&ip, 2, 2, &[0; 8]).unwrap();
        write_idx_labels(&lp, &[0, 1]).unwrap();
        let mut bytes = std::fs::read(&ip).unwrap();
        bytes.truncate(20);
        std::fs::write(&ip, &bytes).unwrap();
        let msg = load_idx(&ip, &lp, None, false).unwrap_err().to_string();
        assert!(msg.contains("byte offset 20"), "{msg}");
        std::fs::write(&ip, [0u8, 0, 8, 1]).unwrap();
        let msg = load_idx(&ip, &lp, None, false).unwrap_err().to_string();
        assert!(msg.contains("magic"), "{msg}");
        write_idx_images(&ip, 2, 2, &[0; 12]).unwrap();
        assert!(load_idx(&ip, &lp, None, false).is_err());
    }

    #[test]
    fn split_and_subsample() {
        let points = PointSet::from_rows(&[[0.0], [1.0], [2.0], [3.0], [4.0]]).unwrap();
        let labels = ["a", "b", "a", "a", "b"].map(String::from).to_vec();
        let d = LabeledDataset::new(points, labels, "t").unwrap();
        let (a, b) = split_binary(&d, "a", "b").unwrap();
        assert_eq!((a.len(), b.len()), (3, 2));
        assert!(matches!(
            split_binary(&d, "a", "z"),
            Err(Error::MissingLabel(_))
        ));
        let s = d.subsample_per_class(1, 3);
        assert_eq!((s.count("a"), s.count("b")), (1, 1));
        assert_eq!(s, d.subsample_per_class(1, 3));
    }
}
