use bialgebra::blade::{self, Basis, Blade};
use bialgebra::error::Result;
use bialgebra::multivector::{basis_convert, Multivector};
use bialgebra::table::ProductTable;
use num_complex::Complex64;
use serde::Serialize;

/// Coefficients below this magnitude in a converted product are rounding residue.
const CLEAN: f64 = 1e-13;

#[derive(Serialize)]
pub struct Entry {
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub coefficient: f64,
}

#[derive(Serialize)]
pub struct TableJson {
    pub dim: usize,
    pub basis: &'static str,
    pub g_upper: Vec<Vec<f64>>,
    pub entries: Vec<Entry>,
}

fn unit(n: usize, b: Blade) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
    v[b as usize] = 1.0.into();
    v
}

/// All nonzero structure constants `e_α e_β = Σ c^{αβ}_γ e_γ` in the chosen basis.
pub fn structure_constants(table: &ProductTable, basis: Basis) -> Result<TableJson> {
    let metric = table.metric();
    let n = metric.dim();
    let mut entries = Vec::new();
    for alpha in 0..(1 as Blade) << n {
        for beta in 0..(1 as Blade) << n {
            let products: Vec<(Blade, f64)> = match basis {
                Basis::Grassmann => table.product(alpha, beta).to_vec(),
                Basis::Clifford => {
                    let to_grassmann = |b| {
                        Multivector::from_coeffs(
                            n,
                            basis_convert(&unit(n, b), Basis::Clifford, Basis::Grassmann, metric),
                        )
                    };
                    let p = table.try_mul(&to_grassmann(alpha), &to_grassmann(beta))?;
                    let back = basis_convert(p.coeffs(), Basis::Grassmann, Basis::Clifford, metric);
                    back.iter()
                        .enumerate()
                        .filter(|(_, c)| c.norm() > CLEAN)
                        .map(|(g, c)| (g as Blade, c.re))
                        .collect()
                }
            };
            for (gamma, c) in products {
                if c != 0.0 {
                    entries.push(Entry {
                        alpha: blade::label(alpha, basis),
                        beta: blade::label(beta, basis),
                        gamma: blade::label(gamma, basis),
                        coefficient: c,
                    });
                }
            }
        }
    }
    Ok(TableJson {
        dim: n,
        basis: match basis {
            Basis::Grassmann => "grassmann",
            Basis::Clifford => "clifford",
        },
        g_upper: (0..n)
            .map(|i| (0..n).map(|j| metric.g(i, j)).collect())
            .collect(),
        entries,
    })
}

pub fn to_csv(t: &TableJson) -> std::result::Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for e in &t.entries {
        w.serialize(e)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
