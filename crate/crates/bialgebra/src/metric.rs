//! Metric tensors on a real vector space and the determinant helpers built on them.
//!
//! A [`Metric`] is stored in its contravariant form `g^{ij}`, the form that enters
//! the Clifford product of covectors. The covariant form `g_{ij}` is kept alongside.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension accepted by [`Metric`].
pub const MAX_DIM: usize = 12;

const SYMMETRY_TOL: f64 = 1e-9;
const DEGENERACY_TOL: f64 = 1e-12;
const ISOMETRY_TOL: f64 = 1e-9;

/// A non-degenerate symmetric bilinear form, not necessarily positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    upper: DMatrix<f64>,
    lower: DMatrix<f64>,
    det_lower: f64,
}

impl Metric {
    /// Builds a metric from its contravariant components `g^{ij}`.
    pub fn from_upper(g: DMatrix<f64>) -> Result<Self> {
        let upper = validated(g)?;
        let lower = upper.clone().try_inverse().ok_or(Error::SingularMatrix)?;
        let det_lower = 1.0 / determinant(&upper);
        Ok(Metric {
            upper,
            lower: symmetrize(lower),
            det_lower,
        })
    }

    /// Builds a metric from its covariant components `g_{ij}`.
    pub fn from_lower(g: DMatrix<f64>) -> Result<Self> {
        let lower = validated(g)?;
        let upper = lower.clone().try_inverse().ok_or(Error::SingularMatrix)?;
        let det_lower = determinant(&lower);
        Ok(Metric {
            upper: symmetrize(upper),
            lower,
            det_lower,
        })
    }

    /// Builds a metric from row-major contravariant components.
    pub fn from_upper_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_upper(matrix_from_rows(rows)?)
    }

    /// Builds a metric from row-major covariant components.
    pub fn from_lower_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_lower(matrix_from_rows(rows)?)
    }

    /// Diagonal metric with `g^{ii} = diag[i]`.
    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        Self::from_upper(DMatrix::from_diagonal(
            &nalgebra::DVector::from_column_slice(diag),
        ))
    }

    /// The Euclidean metric of dimension `n`.
    pub fn euclidean(n: usize) -> Result<Self> {
        Self::diagonal(&vec![1.0; n])
    }

    /// The Minkowski metric `diag(-1, -1, -1, 1)` with the time coordinate last.
    pub fn minkowski() -> Self {
        Self::diagonal(&[-1.0, -1.0, -1.0, 1.0]).expect("minkowski metric is valid")
    }

    pub fn dim(&self) -> usize {
        self.upper.nrows()
    }

    /// Contravariant components `g^{ij}`.
    pub fn upper(&self) -> &DMatrix<f64> {
        &self.upper
    }

    /// Covariant components `g_{ij}`.
    pub fn lower(&self) -> &DMatrix<f64> {
        &self.lower
    }

    /// The contravariant entry `g^{ij}` (0-based indices).
    pub fn g(&self, i: usize, j: usize) -> f64 {
        self.upper[(i, j)]
    }

    /// `det g_{ij}`.
    pub fn det_lower(&self) -> f64 {
        self.det_lower
    }

    /// `sgn(g)`, the sign of `det g_{ij}`.
    pub fn sign(&self) -> f64 {
        if self.det_lower < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// `sqrt|det g_{ij}|`.
    pub fn sqrt_abs_det(&self) -> f64 {
        self.det_lower.abs().sqrt()
    }

    /// Number of negative eigenvalues of `g^{ij}`.
    pub fn negative_count(&self) -> usize {
        self.upper
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .filter(|v| **v < 0.0)
            .count()
    }

    /// Minor `det(g^{rows[a] cols[b]})` of the contravariant metric (0-based, strictly increasing).
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<f64> {
        if rows.len() != cols.len() {
            return Err(Error::InvalidIndices(format!(
                "minor needs equally many rows and columns, got {} and {}",
                rows.len(),
                cols.len()
            )));
        }
        let n = self.dim();
        for list in [rows, cols] {
            if list.iter().any(|&i| i >= n) {
                return Err(Error::InvalidIndices(format!(
                    "index out of range 0..{n}: {list:?}"
                )));
            }
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidIndices(format!(
                    "indices must be strictly increasing: {list:?}"
                )));
            }
        }
        let k = rows.len();
        let sub = DMatrix::from_fn(k, k, |a, b| self.upper[(rows[a], cols[b])]);
        Ok(determinant(&sub))
    }

    /// The metric seen through the linear change `dx~^i = p^i_j dx^j`, i.e. `P g^{..} P^T`.
    pub fn transform(&self, p: &DMatrix<f64>) -> Result<Metric> {
        self.check_square(p)?;
        Metric::from_upper(p * &self.upper * p.transpose())
    }

    /// Whether the invertible matrix `p` preserves the metric: `p^i_k p^j_l g^{kl} = g^{ij}`.
    pub fn is_isometry(&self, p: &DMatrix<f64>) -> Result<bool> {
        self.check_square(p)?;
        let n = self.dim();
        let scale = p.amax();
        if scale == 0.0 || (determinant(p) / scale.powi(n as i32)).abs() <= DEGENERACY_TOL {
            return Err(Error::SingularMatrix);
        }
        let moved = p * &self.upper * p.transpose();
        let defect = (&moved - &self.upper).amax();
        Ok(defect <= ISOMETRY_TOL * self.upper.amax().max(1.0))
    }

    fn check_square(&self, p: &DMatrix<f64>) -> Result<()> {
        if p.nrows() != p.ncols() {
            return Err(Error::NotSquare {
                rows: p.nrows(),
                cols: p.ncols(),
            });
        }
        if p.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: p.nrows(),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> MetricJson {
        let n = self.dim();
        MetricJson {
            dim: n,
            g_upper: Some(
                (0..n)
                    .map(|i| (0..n).map(|j| self.upper[(i, j)]).collect())
                    .collect(),
            ),
            g_lower: None,
        }
    }

    pub fn from_json(json: &MetricJson) -> Result<Metric> {
        let m = match (&json.g_upper, &json.g_lower) {
            (Some(rows), None) => Metric::from_upper_rows(rows)?,
            (None, Some(rows)) => Metric::from_lower_rows(rows)?,
            _ => {
                return Err(Error::Invalid(
                    "metric needs exactly one of g_upper and g_lower".into(),
                ))
            }
        };
        if m.dim() != json.dim {
            return Err(Error::DimensionMismatch {
                expected: json.dim,
                found: m.dim(),
            });
        }
        Ok(m)
    }

    pub fn from_json_str(s: &str) -> Result<Metric> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}

/// JSON form of a metric: `{"dim": n, "g_upper": [[..]]}` or with `g_lower`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricJson {
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub g_upper: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub g_lower: Option<Vec<Vec<f64>>>,
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "determinant of a non-square matrix");
    let mut a = m.clone();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[(x, col)].abs().total_cmp(&a[(y, col)].abs()))
            .unwrap();
        if a[(pivot, col)] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap_rows(pivot, col);
            det = -det;
        }
        let p = a[(col, col)];
        det *= p;
        for r in col + 1..n {
            let f = a[(r, col)] / p;
            if f != 0.0 {
                for c in col..n {
                    a[(r, c)] -= f * a[(col, c)];
                }
            }
        }
    }
    det
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: bad.len(),
        });
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn validated(g: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (rows, cols) = g.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if rows == 0 || rows > MAX_DIM {
        return Err(Error::UnsupportedDimension {
            dim: rows,
            max: MAX_DIM,
        });
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::Invalid("metric entries must be finite".into()));
    }
    let scale = g.amax();
    if scale == 0.0 {
        return Err(Error::Degenerate(0.0));
    }
    let asym = (&g - g.transpose()).amax() / scale;
    if asym > SYMMETRY_TOL {
        return Err(Error::Asymmetric(asym));
    }
    let g = symmetrize(g);
    let normalized = determinant(&g) / scale.powi(rows as i32);
    if normalized.abs() <= DEGENERACY_TOL {
        return Err(Error::Degenerate(normalized));
    }
    Ok(g)
}

fn symmetrize(g: DMatrix<f64>) -> DMatrix<f64> {
    (&g + g.transpose()) * 0.5
}
