//! Regular 1-D/2-D grids holding extended-real samples.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A regular grid: node `i` along axis `k` sits at `origin[k] + i·spacing[k]`.
/// Nodes are ordered row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    origin: Vec<f64>,
    spacing: Vec<f64>,
    shape: Vec<usize>,
}

impl GridSpec {
    pub fn new(origin: Vec<f64>, spacing: Vec<f64>, shape: Vec<usize>) -> Result<Self> {
        let d = origin.len();
        if !(1..=2).contains(&d) {
            return Err(Error::Unsupported(format!("grids of dimension {d}")));
        }
        if spacing.len() != d {
            return Err(Error::dims("spacing", d, spacing.len()));
        }
        if shape.len() != d {
            return Err(Error::dims("shape", d, shape.len()));
        }
        if origin.iter().any(|v| !v.is_finite()) {
            return Err(Error::invariant("origin", "must be finite"));
        }
        if spacing.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(Error::invariant("spacing", "must be positive"));
        }
        if shape.contains(&0) {
            return Err(Error::invariant("shape", "must be positive"));
        }
        Ok(Self {
            origin,
            spacing,
            shape,
        })
    }

    /// `nodes` equally spaced points covering `[lo, hi]` (a single node at `lo` if `nodes == 1`).
    pub fn uniform(lo: f64, hi: f64, nodes: usize) -> Result<Self> {
        if !(hi > lo) && nodes > 1 {
            return Err(Error::invariant(
                "grid",
                format!("empty range [{lo}, {hi}]"),
            ));
        }
        let h = if nodes > 1 {
            (hi - lo) / (nodes - 1) as f64
        } else {
            1.0
        };
        Self::new(vec![lo], vec![h], vec![nodes])
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Multi-index of flat node `i`.
    pub fn index(&self, mut i: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for k in (0..self.dim()).rev() {
            idx[k] = i % self.shape[k];
            i /= self.shape[k];
        }
        idx
    }

    pub fn node(&self, i: usize) -> Vec<f64> {
        self.index(i)
            .iter()
            .enumerate()
            .map(|(k, &j)| self.origin[k] + j as f64 * self.spacing[k])
            .collect()
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.index(i)
            .iter()
            .zip(&self.shape)
            .any(|(&j, &s)| j == 0 || j + 1 == s)
    }

    /// Node on a face where some coordinate takes its largest grid value.
    pub fn is_upper_boundary(&self, i: usize) -> bool {
        self.index(i)
            .iter()
            .zip(&self.shape)
            .any(|(&j, &s)| j + 1 == s)
    }

    /// Trapezoid weight of node `i` (product of per-axis weights).
    pub fn trapezoid_weight(&self, i: usize) -> f64 {
        self.index(i)
            .iter()
            .enumerate()
            .map(|(k, &j)| {
                if self.shape[k] == 1 {
                    1.0
                } else if j == 0 || j + 1 == self.shape[k] {
                    0.5 * self.spacing[k]
                } else {
                    self.spacing[k]
                }
            })
            .product()
    }

    /// The same extent with each axis refined so the spacing halves.
    pub fn refined(&self) -> Self {
        Self {
            origin: self.origin.clone(),
            spacing: self.spacing.iter().map(|h| h / 2.0).collect(),
            shape: self.shape.iter().map(|s| 2 * s - 1).collect(),
        }
    }
}

/// Grid samples; `values` are usually logarithms, with `−∞` marking a zero of the
/// underlying function.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<f64>,
}

fn join(v: impl Iterator<Item = String>) -> String {
    v.collect::<Vec<_>>().join(" ")
}

fn fmt_value(v: f64) -> String {
    if v == f64::NEG_INFINITY {
        "-inf".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else {
        format!("{v:.16e}")
    }
}

impl GridFunction {
    pub fn new(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::dims("values", spec.len(), values.len()));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::invariant("values", "NaN sample"));
        }
        Ok(Self { spec, values })
    }

    pub fn from_fn<F: FnMut(&[f64]) -> Result<f64>>(spec: GridSpec, mut f: F) -> Result<Self> {
        let values = (0..spec.len())
            .map(|i| f(&spec.node(i)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, values)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Header `# origin=…, spacing=…, shape=…` followed by one value per line.
    pub fn to_csv(&self) -> String {
        let s = &self.spec;
        let mut out = format!(
            "# origin={}, spacing={}, shape={}\n",
            join(s.origin.iter().map(|v| fmt_value(*v))),
            join(s.spacing.iter().map(|v| fmt_value(*v))),
            join(s.shape.iter().map(|v| v.to_string())),
        );
        for v in &self.values {
            let _ = writeln!(out, "{}", fmt_value(*v));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .and_then(|h| h.trim().strip_prefix('#'))
            .ok_or_else(|| Error::MalformedInput("missing grid header".into()))?;
        let (mut origin, mut spacing, mut shape) = (None, None, None);
        for field in header.split(',') {
            let (key, val) = field
                .trim()
                .split_once('=')
                .ok_or_else(|| Error::MalformedInput(format!("bad header field `{field}`")))?;
            let floats = || -> Result<Vec<f64>> {
                val.split_whitespace()
                    .map(|t| {
                        t.parse()
                            .map_err(|_| Error::MalformedInput(format!("bad number `{t}`")))
                    })
                    .collect()
            };
            match key.trim() {
                "origin" => origin = Some(floats()?),
                "spacing" => spacing = Some(floats()?),
                "shape" => {
                    shape = Some(
                        val.split_whitespace()
                            .map(|t| {
                                t.parse()
                                    .map_err(|_| Error::MalformedInput(format!("bad size `{t}`")))
                            })
                            .collect::<Result<Vec<usize>>>()?,
                    )
                }
                other => {
                    return Err(Error::MalformedInput(format!(
                        "unknown header key `{other}`"
                    )))
                }
            }
        }
        let missing = |k: &str| Error::MalformedInput(format!("header lacks `{k}`"));
        let spec = GridSpec::new(
            origin.ok_or_else(|| missing("origin"))?,
            spacing.ok_or_else(|| missing("spacing"))?,
            shape.ok_or_else(|| missing("shape"))?,
        )?;
        let values = lines
            .map(|l| {
                let t = l.trim();
                t.parse::<f64>()
                    .map_err(|_| Error::MalformedInput(format!("bad value `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, values)
    }
}
