use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::Args;
use hullsep::dataio::{load_csv, load_idx, split_binary, LabelColumn};
use hullsep::{LabeledDataset, PointSet};
use serde::Serialize;

/// Where the two classes come from.
#[derive(Debug, Clone, Args, Serialize)]
pub struct DatasetArgs {
    /// Numeric CSV with one label column.
    #[arg(long, conflicts_with = "idx", required_unless_present = "idx")]
    pub csv: Option<PathBuf>,

    /// Label column of the CSV, by header name or 0-based position.
    #[arg(long, default_value = "label")]
    pub label_col: String,

    /// IDX image and label files, as `images,labels`.
    #[arg(long, value_delimiter = ',')]
    pub idx: Option<Vec<PathBuf>>,

    /// The two class labels, as `a,b`. The first is class 1.
    #[arg(long, value_delimiter = ',')]
    pub labels: Option<Vec<String>>,

    /// Keep IDX pixels in 0..=255 instead of dividing by 255.
    #[arg(long)]
    pub raw: bool,

    /// Keep at most this many points per class (seeded by --seed).
    #[arg(long)]
    pub subsample: Option<usize>,
}

pub struct Loaded {
    pub dataset: LabeledDataset,
    pub x: PointSet,
    pub y: PointSet,
    pub labels: (String, String),
}

impl DatasetArgs {
    pub fn load(&self, seed: u64) -> anyhow::Result<Loaded> {
        for (flag, v) in [
            ("--idx", self.idx.as_ref().map(Vec::len)),
            ("--labels", self.labels.as_ref().map(Vec::len)),
        ] {
            if v.is_some_and(|n| n != 2) {
                bail!("{flag} takes exactly two comma-separated values");
            }
        }
        let full = match (&self.csv, &self.idx) {
            (Some(path), _) => {
                let col: LabelColumn = self.label_col.parse().expect("infallible");
                load_csv(path, &col)?
            }
            (None, Some(files)) => {
                let keep = match &self.labels {
                    Some(l) => Some(
                        l.iter()
                            .map(|s| {
                                s.parse::<u8>()
                                    .with_context(|| format!("IDX label {s:?} is not a digit"))
                            })
                            .collect::<anyhow::Result<Vec<u8>>>()?,
                    ),
                    None => None,
                };
                load_idx(&files[0], &files[1], keep.as_deref(), self.raw)?
            }
            (None, None) => bail!("one of --csv or --idx is required"),
        };
        let dataset = match self.subsample {
            Some(n) => full.subsample_per_class(n, seed),
            None => full,
        };
        let labels = match &self.labels {
            Some(l) => (l[0].clone(), l[1].clone()),
            None => match dataset.label_universe.as_slice() {
                [a, b] => (a.clone(), b.clone()),
                u => {
                    return Err(anyhow!(
                        "dataset has {} labels; choose two with --labels a,b",
                        u.len()
                    ))
                }
            },
        };
        let (x, y) = split_binary(&dataset, &labels.0, &labels.1)?;
        Ok(Loaded {
            dataset,
            x,
            y,
            labels,
        })
    }
}
