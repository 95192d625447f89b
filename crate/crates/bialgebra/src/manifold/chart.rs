use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::metric::{Metric, MAX_DIM};

use super::frame::Frame;

/// A coordinate chart: covariant metric components as expressions on a box domain.
#[derive(Debug, Clone)]
pub struct Chart {
    dim: usize,
    g_lower: Vec<Vec<Expr>>,
    domain: Vec<(f64, f64)>,
}

/// JSON form of a chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartJson {
    pub dim: usize,
    pub g_lower: Vec<Vec<String>>,
    pub domain: Vec<[f64; 2]>,
}

impl Chart {
    pub fn new(g_lower: Vec<Vec<Expr>>, domain: Vec<(f64, f64)>) -> Result<Chart> {
        let dim = g_lower.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::UnsupportedDimension { dim, max: MAX_DIM });
        }
        if let Some(row) = g_lower.iter().find(|r| r.len() != dim) {
            return Err(Error::NotSquare {
                rows: dim,
                cols: row.len(),
            });
        }
        if domain.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: domain.len(),
            });
        }
        if domain.iter().any(|(lo, hi)| !(lo < hi)) {
            return Err(Error::Invalid("each domain interval needs lo < hi".into()));
        }
        if let Some(e) = g_lower.iter().flatten().find(|e| e.arity() > dim) {
            return Err(Error::Invalid(format!(
                "metric entry {e} uses a coordinate beyond x{dim}"
            )));
        }
        Ok(Chart {
            dim,
            g_lower,
            domain,
        })
    }

    /// Parses metric entries given as expression strings.
    pub fn parse(g_lower: &[Vec<&str>], domain: Vec<(f64, f64)>) -> Result<Chart> {
        let dim = g_lower.len();
        let rows = g_lower
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| Expr::parse(s, dim))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Chart::new(rows, domain)
    }

    /// A chart with constant metric `metric` on the cube `[-1, 1]^n` scaled by `half_width`.
    pub fn constant(metric: &Metric, half_width: f64) -> Chart {
        let n = metric.dim();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| Expr::num(metric.lower()[(i, j)])).collect())
            .collect();
        Chart::new(rows, vec![(-half_width, half_width); n]).expect("constant chart is valid")
    }

    /// Polar coordinates on the flat plane: `g = diag(1, x1^2)`.
    pub fn polar_plane() -> Chart {
        Chart::parse(
            &[vec!["1", "0"], vec!["0", "x1^2"]],
            vec![(0.2, 5.0), (-10.0, 10.0)],
        )
        .expect("polar chart is valid")
    }

    /// The unit sphere in colatitude/longitude: `g = diag(1, sin(x1)^2)`.
    pub fn round_sphere() -> Chart {
        Chart::parse(
            &[vec!["1", "0"], vec!["0", "sin(x1)^2"]],
            vec![(0.1, 3.04), (-10.0, 10.0)],
        )
        .expect("sphere chart is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn g_lower(&self) -> &[Vec<Expr>] {
        &self.g_lower
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim
            && p.iter()
                .zip(&self.domain)
                .all(|(x, (lo, hi))| x >= lo && x <= hi)
    }

    pub(crate) fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        if !self.contains(p) {
            return Err(Error::OutsideDomain(p.to_vec()));
        }
        Ok(())
    }

    /// The metric at `p`.
    pub fn metric_at(&self, p: &[f64]) -> Result<Metric> {
        self.check_point(p)?;
        let rows = self
            .g_lower
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| e.eval(p))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Metric::from_lower_rows(&rows)
    }

    /// Local geometry at `p` carried to the given jet order.
    pub fn frame(&self, p: &[f64], order: usize) -> Result<Frame> {
        Frame::new(self, p, order)
    }

    /// Christoffel symbols `Γ^k_{ij}` at `p`, indexed `[k][i][j]`.
    pub fn christoffel(&self, p: &[f64]) -> Result<Vec<Vec<Vec<f64>>>> {
        let frame = self.frame(p, 1)?;
        let n = self.dim;
        Ok((0..n)
            .map(|k| {
                (0..n)
                    .map(|i| (0..n).map(|j| frame.gamma(k, i, j).value().re).collect())
                    .collect()
            })
            .collect())
    }

    pub fn to_json(&self) -> ChartJson {
        ChartJson {
            dim: self.dim,
            g_lower: self
                .g_lower
                .iter()
                .map(|r| r.iter().map(|e| e.to_string()).collect())
                .collect(),
            domain: self.domain.iter().map(|&(lo, hi)| [lo, hi]).collect(),
        }
    }

    pub fn from_json(json: &ChartJson) -> Result<Chart> {
        if json.g_lower.len() != json.dim {
            return Err(Error::DimensionMismatch {
                expected: json.dim,
                found: json.g_lower.len(),
            });
        }
        let rows: Vec<Vec<&str>> = json
            .g_lower
            .iter()
            .map(|r| r.iter().map(String::as_str).collect())
            .collect();
        Chart::parse(&rows, json.domain.iter().map(|d| (d[0], d[1])).collect())
    }
}
