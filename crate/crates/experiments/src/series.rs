//! Plotted series and their CSV form.
//!
//! Columns are `abscissa,value[,stderr]`; numbers are written with 17
//! significant digits in exponent form so values round-trip exactly.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{config_err, ExperimentError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Simulated,
    Analytic,
    Bound,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub provenance: Provenance,
    pub description: String,
    pub abscissa: Vec<f64>,
    pub value: Vec<f64>,
    pub stderr: Option<Vec<f64>>,
}

impl Series {
    pub fn new(
        name: impl Into<String>,
        provenance: Provenance,
        description: impl Into<String>,
        abscissa: Vec<f64>,
        value: Vec<f64>,
    ) -> Result<Self> {
        let name = name.into();
        if abscissa.len() != value.len() {
            return config_err(format!("series {name}: column lengths differ"));
        }
        Ok(Self {
            name,
            provenance,
            description: description.into(),
            abscissa,
            value,
            stderr: None,
        })
    }

    pub fn with_stderr(mut self, stderr: Vec<f64>) -> Result<Self> {
        if stderr.len() != self.value.len() {
            return config_err(format!("series {}: stderr length differs", self.name));
        }
        self.stderr = Some(stderr);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_empty()
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let csv_err = |source| ExperimentError::Csv {
            path: path.to_path_buf(),
            source,
        };
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)
            .map_err(csv_err)?;
        let fmt = |x: f64| format!("{x:.16e}");
        match &self.stderr {
            None => {
                w.write_record(["abscissa", "value"]).map_err(csv_err)?;
                for (x, y) in self.abscissa.iter().zip(&self.value) {
                    w.write_record([fmt(*x), fmt(*y)]).map_err(csv_err)?;
                }
            }
            Some(se) => {
                w.write_record(["abscissa", "value", "stderr"])
                    .map_err(csv_err)?;
                for ((x, y), e) in self.abscissa.iter().zip(&self.value).zip(se) {
                    w.write_record([fmt(*x), fmt(*y), fmt(*e)])
                        .map_err(csv_err)?;
                }
            }
        }
        w.flush().map_err(|source| ExperimentError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// `(abscissa, value, stderr)` columns.
pub type Columns = (Vec<f64>, Vec<f64>, Option<Vec<f64>>);

/// Reads back a CSV written by [`Series::write_csv`].
pub fn read_csv(path: &Path) -> Result<Columns> {
    let csv_err = |source| ExperimentError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let has_stderr = r.headers().map_err(csv_err)?.len() == 3;
    let (mut xs, mut ys, mut es) = (Vec::new(), Vec::new(), Vec::new());
    for record in r.records() {
        let record = record.map_err(csv_err)?;
        let parse = |i: usize| -> Result<f64> {
            record
                .get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| ExperimentError::Config(format!("{}: bad number", path.display())))
        };
        xs.push(parse(0)?);
        ys.push(parse(1)?);
        if has_stderr {
            es.push(parse(2)?);
        }
    }
    Ok((xs, ys, has_stderr.then_some(es)))
}
