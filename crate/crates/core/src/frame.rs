//! Minimal columnar table with explicit missingness, plus design-matrix
//! construction for model fitting.
//!
//! Missing values are `None`, never sentinel numbers. Categorical columns
//! are expanded to treatment-coded dummies against an explicit reference
//! level; fitting uses complete cases only and reports how many rows were
//! dropped.

use indexmap::IndexMap;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One column of data with explicit missingness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Column {
    Float(Vec<Option<f64>>),
    Bool(Vec<Option<bool>>),
    Cat(Vec<Option<String>>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Float(v) => v.len(),
            Column::Bool(v) => v.len(),
            Column::Cat(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_missing(&self, row: usize) -> bool {
        match self {
            Column::Float(v) => v[row].is_none(),
            Column::Bool(v) => v[row].is_none(),
            Column::Cat(v) => v[row].is_none(),
        }
    }

    /// Distinct category levels in sorted order (categorical columns only).
    pub fn levels(&self) -> Vec<String> {
        match self {
            Column::Cat(v) => {
                let mut levels: Vec<String> = v.iter().flatten().cloned().collect();
                levels.sort();
                levels.dedup();
                levels
            }
            _ => Vec::new(),
        }
    }
}

/// A named collection of equal-length columns.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    columns: IndexMap<String, Column>,
    n_rows: usize,
}

impl Frame {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.keys().map(|s| s.as_str())
    }

    pub fn push_column(&mut self, name: impl Into<String>, col: Column) -> Result<()> {
        let name = name.into();
        if !self.columns.is_empty() && col.len() != self.n_rows {
            return Err(Error::invalid(format!(
                "column '{}' has {} rows, frame has {}",
                name,
                col.len(),
                self.n_rows
            )));
        }
        if self.columns.contains_key(&name) {
            return Err(Error::invalid(format!("duplicate column '{name}'")));
        }
        self.n_rows = col.len();
        self.columns.insert(name, col);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Result<&Column> {
        self.columns
            .get(name)
            .ok_or_else(|| Error::invalid(format!("no column named '{name}'")))
    }

    pub fn float(&self, name: &str) -> Result<&[Option<f64>]> {
        match self.column(name)? {
            Column::Float(v) => Ok(v),
            _ => Err(Error::invalid(format!("column '{name}' is not numeric"))),
        }
    }

    /// Keep only the rows for which `keep` returns true.
    pub fn filter_rows(&self, keep: impl Fn(usize) -> bool) -> Frame {
        let idx: Vec<usize> = (0..self.n_rows).filter(|&i| keep(i)).collect();
        self.take_rows(&idx)
    }

    pub fn take_rows(&self, idx: &[usize]) -> Frame {
        let mut out = Frame::new();
        for (name, col) in &self.columns {
            let taken = match col {
                Column::Float(v) => Column::Float(idx.iter().map(|&i| v[i]).collect()),
                Column::Bool(v) => Column::Bool(idx.iter().map(|&i| v[i]).collect()),
                Column::Cat(v) => Column::Cat(idx.iter().map(|&i| v[i].clone()).collect()),
            };
            out.push_column(name.clone(), taken).expect("fresh frame");
        }
        out.n_rows = idx.len();
        out
    }
}

/// One model term: a main effect or a two-way interaction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Term {
    Main(String),
    Interaction(String, String),
}

impl Term {
    pub fn main(name: impl Into<String>) -> Self {
        Term::Main(name.into())
    }

    pub fn interaction(a: impl Into<String>, b: impl Into<String>) -> Self {
        Term::Interaction(a.into(), b.into())
    }

    fn variables(&self) -> Vec<&str> {
        match self {
            Term::Main(a) => vec![a],
            Term::Interaction(a, b) => vec![a, b],
        }
    }
}

/// Outcome, terms, and categorical reference levels for one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub outcome: String,
    pub terms: Vec<Term>,
    /// Reference level per categorical variable; defaults to the first
    /// level in sorted order when absent.
    pub reference_levels: IndexMap<String, String>,
}

impl ModelSpec {
    pub fn new(outcome: impl Into<String>, terms: Vec<Term>) -> Self {
        ModelSpec { outcome: outcome.into(), terms, reference_levels: IndexMap::new() }
    }

    pub fn with_reference(mut self, var: impl Into<String>, level: impl Into<String>) -> Self {
        self.reference_levels.insert(var.into(), level.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (i, t) in self.terms.iter().enumerate() {
            if self.terms[i + 1..].contains(t) {
                return Err(Error::invalid(format!("duplicate term {t:?}")));
            }
        }
        Ok(())
    }
}

/// Encoded column: name plus per-row values for complete-case rows.
struct Encoded {
    name: String,
    values: Vec<f64>,
}

fn encode_variable(frame: &Frame, rows: &[usize], var: &str, spec: &ModelSpec) -> Result<Vec<Encoded>> {
    match frame.column(var)? {
        Column::Float(v) => Ok(vec![Encoded {
            name: var.to_string(),
            values: rows.iter().map(|&i| v[i].expect("complete case")).collect(),
        }]),
        Column::Bool(v) => Ok(vec![Encoded {
            name: var.to_string(),
            values: rows
                .iter()
                .map(|&i| if v[i].expect("complete case") { 1.0 } else { 0.0 })
                .collect(),
        }]),
        Column::Cat(v) => {
            let col = frame.column(var)?;
            let levels = col.levels();
            if levels.len() < 2 {
                return Err(Error::invalid(format!(
                    "categorical '{var}' has fewer than two levels"
                )));
            }
            let reference = match spec.reference_levels.get(var) {
                Some(r) => {
                    if !levels.contains(r) {
                        return Err(Error::invalid(format!(
                            "reference level '{r}' not present in '{var}'"
                        )));
                    }
                    r.clone()
                }
                None => levels[0].clone(),
            };
            let mut out = Vec::new();
            for level in levels.iter().filter(|l| **l != reference) {
                out.push(Encoded {
                    name: format!("{var}={level}"),
                    values: rows
                        .iter()
                        .map(|&i| {
                            if v[i].as_deref().expect("complete case") == level.as_str() {
                                1.0
                            } else {
                                0.0
                            }
                        })
                        .collect(),
                });
            }
            Ok(out)
        }
    }
}

/// A fully encoded design: response vector, predictor matrix with intercept,
/// and bookkeeping for complete-case filtering.
pub struct Design {
    pub y: DVector<f64>,
    pub x: DMatrix<f64>,
    /// Column names, starting with "(Intercept)".
    pub names: Vec<String>,
    /// Original frame row index per design row.
    pub rows_used: Vec<usize>,
    /// Rows dropped for missing outcome or predictors.
    pub n_dropped: usize,
}

/// Build the design matrix for `spec` over the complete cases of `frame`.
pub fn build_design(frame: &Frame, spec: &ModelSpec) -> Result<Design> {
    spec.validate()?;
    let mut needed: Vec<&str> = vec![spec.outcome.as_str()];
    for t in &spec.terms {
        for v in t.variables() {
            if !needed.contains(&v) {
                needed.push(v);
            }
        }
    }
    for v in &needed {
        frame.column(v)?;
    }

    let rows: Vec<usize> = (0..frame.n_rows())
        .filter(|&i| {
            needed.iter().all(|v| !frame.column(v).expect("checked").is_missing(i))
        })
        .collect();
    let n_dropped = frame.n_rows() - rows.len();
    if rows.is_empty() {
        return Err(Error::invalid("no complete-case rows for model"));
    }

    let y_vals: Vec<f64> = match frame.column(&spec.outcome)? {
        Column::Float(v) => rows.iter().map(|&i| v[i].expect("complete case")).collect(),
        Column::Bool(v) => rows
            .iter()
            .map(|&i| if v[i].expect("complete case") { 1.0 } else { 0.0 })
            .collect(),
        Column::Cat(_) => {
            return Err(Error::invalid("outcome must be numeric or boolean"));
        }
    };

    let mut cols: Vec<Encoded> = vec![Encoded {
        name: "(Intercept)".to_string(),
        values: vec![1.0; rows.len()],
    }];
    for term in &spec.terms {
        match term {
            Term::Main(v) => cols.extend(encode_variable(frame, &rows, v, spec)?),
            Term::Interaction(a, b) => {
                let ea = encode_variable(frame, &rows, a, spec)?;
                let eb = encode_variable(frame, &rows, b, spec)?;
                for ca in &ea {
                    for cb in &eb {
                        cols.push(Encoded {
                            name: format!("{}:{}", ca.name, cb.name),
                            values: ca
                                .values
                                .iter()
                                .zip(&cb.values)
                                .map(|(x, z)| x * z)
                                .collect(),
                        });
                    }
                }
            }
        }
    }

    let n = rows.len();
    let p = cols.len();
    let mut x = DMatrix::zeros(n, p);
    for (j, c) in cols.iter().enumerate() {
        for (i, v) in c.values.iter().enumerate() {
            x[(i, j)] = *v;
        }
    }
    Ok(Design {
        y: DVector::from_vec(y_vals),
        x,
        names: cols.into_iter().map(|c| c.name).collect(),
        rows_used: rows,
        n_dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_frame() -> Frame {
        let mut f = Frame::new();
        f.push_column(
            "y",
            Column::Bool(vec![Some(true), Some(false), Some(true), Some(false)]),
        )
        .unwrap();
        f.push_column(
            "x",
            Column::Float(vec![Some(1.0), Some(2.0), None, Some(4.0)]),
        )
        .unwrap();
        f.push_column(
            "g",
            Column::Cat(vec![
                Some("b".into()),
                Some("a".into()),
                Some("a".into()),
                Some("c".into()),
            ]),
        )
        .unwrap();
        f
    }

    #[test]
    fn complete_cases_dropped_and_counted() {
        let f = toy_frame();
        let spec = ModelSpec::new("y", vec![Term::main("x")]);
        let d = build_design(&f, &spec).unwrap();
        assert_eq!(d.rows_used, vec![0, 1, 3]);
        assert_eq!(d.n_dropped, 1);
        assert_eq!(d.names, vec!["(Intercept)", "x"]);
    }

    #[test]
    fn categorical_dummies_respect_reference() {
        let f = toy_frame();
        let spec = ModelSpec::new("y", vec![Term::main("g")]).with_reference("g", "b");
        let d = build_design(&f, &spec).unwrap();
        assert_eq!(d.names, vec!["(Intercept)", "g=a", "g=c"]);
        // row 0 is level b (reference): all dummies zero
        assert_eq!(d.x[(0, 1)], 0.0);
        assert_eq!(d.x[(0, 2)], 0.0);
        // row 1 is level a
        assert_eq!(d.x[(1, 1)], 1.0);
    }

    #[test]
    fn interaction_columns_are_products() {
        let mut f = Frame::new();
        f.push_column("y", Column::Float(vec![Some(0.0), Some(1.0)])).unwrap();
        f.push_column("a", Column::Float(vec![Some(2.0), Some(3.0)])).unwrap();
        f.push_column("b", Column::Float(vec![Some(5.0), Some(7.0)])).unwrap();
        let spec = ModelSpec::new(
            "y",
            vec![Term::main("a"), Term::main("b"), Term::interaction("a", "b")],
        );
        let d = build_design(&f, &spec).unwrap();
        assert_eq!(d.names[3], "a:b");
        assert_eq!(d.x[(0, 3)], 10.0);
        assert_eq!(d.x[(1, 3)], 21.0);
    }

    #[test]
    fn duplicate_terms_rejected() {
        let spec = ModelSpec::new("y", vec![Term::main("x"), Term::main("x")]);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn unknown_column_rejected() {
        let f = toy_frame();
        let spec = ModelSpec::new("y", vec![Term::main("nope")]);
        assert!(build_design(&f, &spec).is_err());
    }
}
