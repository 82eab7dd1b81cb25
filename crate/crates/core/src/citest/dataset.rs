use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest number of distinct values for a column to be read as discrete
/// when the kind is auto-detected.
pub const MAX_AUTO_LEVELS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataKind {
    Continuous,
    Discrete,
}

#[derive(Debug, Clone, PartialEq)]
enum Columns {
    Continuous(Vec<Vec<f64>>),
    Discrete { values: Vec<Vec<u32>>, levels: Vec<usize> },
}

/// An `n × p` sample, stored by column.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    rows: usize,
    columns: Columns,
}

fn check_names(names: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for name in names {
        if name.is_empty() {
            return Err(Error::Dataset("empty variable name".into()));
        }
        if !seen.insert(name) {
            return Err(Error::Dataset(format!("duplicate variable `{name}`")));
        }
    }
    Ok(())
}

impl Dataset {
    /// Continuous dataset from columns of equal length.
    pub fn continuous(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        check_names(&names)?;
        let rows = Self::check_shape(&names, &columns)?;
        if columns.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Dataset("non-finite value".into()));
        }
        Ok(Dataset {
            names,
            rows,
            columns: Columns::Continuous(columns),
        })
    }

    /// Discrete dataset from category indices `0 .. levels[j]`.
    pub fn discrete(names: Vec<String>, values: Vec<Vec<u32>>, levels: Vec<usize>) -> Result<Self> {
        check_names(&names)?;
        let rows = Self::check_shape(&names, &values)?;
        if levels.len() != names.len() {
            return Err(Error::Dataset("one cardinality per variable is required".into()));
        }
        for (j, (col, &k)) in values.iter().zip(&levels).enumerate() {
            if k < 2 {
                return Err(Error::Dataset(format!(
                    "variable `{}` has fewer than two categories",
                    names[j]
                )));
            }
            if col.iter().any(|&x| x as usize >= k) {
                return Err(Error::Dataset(format!(
                    "variable `{}` has a category index out of range",
                    names[j]
                )));
            }
        }
        Ok(Dataset {
            names,
            rows,
            columns: Columns::Discrete { values, levels },
        })
    }

    fn check_shape<T>(names: &[String], columns: &[Vec<T>]) -> Result<usize> {
        if columns.len() != names.len() {
            return Err(Error::Dataset(format!(
                "{} names for {} columns",
                names.len(),
                columns.len()
            )));
        }
        let rows = columns.first().map_or(0, Vec::len);
        if rows == 0 {
            return Err(Error::Dataset("no rows".into()));
        }
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dataset("columns differ in length".into()));
        }
        Ok(rows)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn kind(&self) -> DataKind {
        match self.columns {
            Columns::Continuous(_) => DataKind::Continuous,
            Columns::Discrete { .. } => DataKind::Discrete,
        }
    }

    /// Continuous columns, if any.
    pub fn continuous_columns(&self) -> Option<&[Vec<f64>]> {
        match &self.columns {
            Columns::Continuous(c) => Some(c),
            Columns::Discrete { .. } => None,
        }
    }

    /// Discrete columns and their cardinalities, if any.
    pub fn discrete_columns(&self) -> Option<(&[Vec<u32>], &[usize])> {
        match &self.columns {
            Columns::Discrete { values, levels } => Some((values, levels)),
            Columns::Continuous(_) => None,
        }
    }

    /// Sample correlation matrix of a continuous dataset. Constant columns
    /// get zero correlation with everything else.
    pub fn correlation(&self) -> Result<DMatrix<f64>> {
        let cols = self
            .continuous_columns()
            .ok_or_else(|| Error::Dataset("correlation needs continuous data".into()))?;
        let p = cols.len();
        let n = self.rows as f64;
        let centered: Vec<Vec<f64>> = cols
            .iter()
            .map(|c| {
                let mean = c.iter().sum::<f64>() / n;
                c.iter().map(|x| x - mean).collect()
            })
            .collect();
        let scale: Vec<f64> = centered
            .iter()
            .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
            .collect();
        let mut corr = DMatrix::identity(p, p);
        for i in 0..p {
            for j in i + 1..p {
                let r = if scale[i] > 0.0 && scale[j] > 0.0 {
                    let dot: f64 = centered[i].iter().zip(&centered[j]).map(|(a, b)| a * b).sum();
                    (dot / (scale[i] * scale[j])).clamp(-1.0, 1.0)
                } else {
                    0.0
                };
                corr[(i, j)] = r;
                corr[(j, i)] = r;
            }
        }
        Ok(corr)
    }

    /// Reads a CSV with a header row of variable names. With `kind = None`
    /// a file whose cells are all small non-negative integers is read as
    /// discrete.
    pub fn from_csv<R: Read>(reader: R, kind: Option<DataKind>) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let names: Vec<String> = csv.headers()?.iter().map(String::from).collect();
        let mut cells: Vec<Vec<String>> = vec![Vec::new(); names.len()];
        for (i, record) in csv.records().enumerate() {
            let record = record?;
            if record.len() != names.len() {
                return Err(Error::Dataset(format!(
                    "row {} has {} cells, expected {}",
                    i + 1,
                    record.len(),
                    names.len()
                )));
            }
            for (j, cell) in record.iter().enumerate() {
                cells[j].push(cell.to_string());
            }
        }
        let kind = match kind {
            Some(k) => k,
            None => Self::detect(&cells),
        };
        match kind {
            DataKind::Continuous => {
                let columns = cells
                    .iter()
                    .map(|col| {
                        col.iter()
                            .map(|c| {
                                c.parse::<f64>()
                                    .map_err(|_| Error::Dataset(format!("not a number: `{c}`")))
                            })
                            .collect::<Result<Vec<f64>>>()
                    })
                    .collect::<Result<_>>()?;
                Dataset::continuous(names, columns)
            }
            DataKind::Discrete => {
                let mut values = Vec::with_capacity(names.len());
                let mut levels = Vec::with_capacity(names.len());
                for col in &cells {
                    let raw = col
                        .iter()
                        .map(|c| {
                            c.parse::<u32>().map_err(|_| {
                                Error::Dataset(format!("not a non-negative integer: `{c}`"))
                            })
                        })
                        .collect::<Result<Vec<u32>>>()?;
                    // Categories are recoded to 0..k in increasing order.
                    let distinct: Vec<u32> = raw.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
                    values.push(
                        raw.iter()
                            .map(|x| distinct.binary_search(x).unwrap() as u32)
                            .collect(),
                    );
                    levels.push(distinct.len());
                }
                Dataset::discrete(names, values, levels)
            }
        }
    }

    fn detect(cells: &[Vec<String>]) -> DataKind {
        let discrete = cells.iter().all(|col| {
            let mut distinct = BTreeSet::new();
            col.iter().all(|c| c.parse::<u32>().is_ok() && {
                distinct.insert(c.as_str());
                distinct.len() <= MAX_AUTO_LEVELS
            })
        });
        if discrete {
            DataKind::Discrete
        } else {
            DataKind::Continuous
        }
    }

    pub fn from_path(path: &Path, kind: Option<DataKind>) -> Result<Self> {
        Self::from_csv(std::fs::File::open(path)?, kind)
    }

    /// Writes the dataset as CSV. Continuous values use the shortest
    /// representation that round-trips.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        csv.write_record(&self.names)?;
        for i in 0..self.rows {
            let row: Vec<String> = match &self.columns {
                Columns::Continuous(c) => c.iter().map(|col| format!("{}", col[i])).collect(),
                Columns::Discrete { values, .. } => values.iter().map(|col| col[i].to_string()).collect(),
            };
            csv.write_record(&row)?;
        }
        csv.flush()?;
        Ok(())
    }
}
