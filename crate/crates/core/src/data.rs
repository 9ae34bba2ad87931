//! Core data representation: validated datasets, the stacked counterfactual
//! design, subgroup signatures, and CSV ingestion.
//!
//! Missing covariate entries are stored as `NaN` and surfaced through
//! [`Dataset::is_missing`]. Rows missing a split or signature variable are
//! always routed to the non-member (right) side of a condition; that single
//! deterministic rule is applied everywhere trees or signatures touch data.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("parse error at row {row}, column '{column}': {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },
    #[error("invalid dataset: {0}")]
    Validation(String),
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
}

/// Declared type of one covariate column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CovariateKind {
    /// Real-valued.
    Continuous,
    /// Exactly 0/1.
    Binary,
    /// Dense integer level codes `0..levels`.
    Categorical { levels: u32 },
}

impl CovariateKind {
    pub fn is_categorical(&self) -> bool {
        matches!(self, CovariateKind::Categorical { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ResponseKind {
    Continuous,
    Binary,
}

/// A validated analysis dataset: response, 0/1 treatment, and a typed
/// covariate matrix with explicit missingness.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    response: Vec<f64>,
    response_kind: ResponseKind,
    treatment: Vec<u8>,
    /// Column-major covariates; `NaN` marks a missing entry.
    columns: Vec<Vec<f64>>,
    kinds: Vec<CovariateKind>,
    names: Vec<String>,
}

impl Dataset {
    pub fn new(
        response: Vec<f64>,
        response_kind: ResponseKind,
        treatment: Vec<u8>,
        columns: Vec<Vec<f64>>,
        kinds: Vec<CovariateKind>,
        names: Vec<String>,
    ) -> Result<Self, DataError> {
        let d = Dataset {
            response,
            response_kind,
            treatment,
            columns,
            kinds,
            names,
        };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<(), DataError> {
        let n = self.response.len();
        if n < 2 {
            return Err(DataError::Validation(format!("need n >= 2 rows, got {n}")));
        }
        if self.columns.is_empty() {
            return Err(DataError::Validation("need at least one covariate".into()));
        }
        if self.treatment.len() != n {
            return Err(DataError::Validation("treatment length mismatch".into()));
        }
        if self.kinds.len() != self.columns.len() || self.names.len() != self.columns.len() {
            return Err(DataError::Validation("covariate metadata length mismatch".into()));
        }
        if self.treatment.iter().any(|t| *t > 1) {
            return Err(DataError::Validation("treatment not in {0,1}".into()));
        }
        let n1 = self.treatment.iter().filter(|t| **t == 1).count();
        if n1 == 0 || n1 == n {
            return Err(DataError::Validation(
                "treatment must contain both arms".into(),
            ));
        }
        for (i, y) in self.response.iter().enumerate() {
            if !y.is_finite() {
                return Err(DataError::Validation(format!(
                    "response missing or non-finite at row {i}"
                )));
            }
            if self.response_kind == ResponseKind::Binary && *y != 0.0 && *y != 1.0 {
                return Err(DataError::Validation(format!(
                    "binary response not in {{0,1}} at row {i}"
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for name in &self.names {
            if name.is_empty() || !seen.insert(name.clone()) {
                return Err(DataError::Validation(format!(
                    "covariate names must be unique and non-empty ('{name}')"
                )));
            }
        }
        for (j, col) in self.columns.iter().enumerate() {
            if col.len() != n {
                return Err(DataError::Validation(format!(
                    "column '{}' length mismatch",
                    self.names[j]
                )));
            }
            match self.kinds[j] {
                CovariateKind::Continuous => {
                    if col.iter().any(|v| v.is_infinite()) {
                        return Err(DataError::Validation(format!(
                            "column '{}' contains non-finite values",
                            self.names[j]
                        )));
                    }
                }
                CovariateKind::Binary => {
                    if col.iter().any(|v| !v.is_nan() && *v != 0.0 && *v != 1.0) {
                        return Err(DataError::Validation(format!(
                            "binary column '{}' has values outside {{0,1}}",
                            self.names[j]
                        )));
                    }
                }
                CovariateKind::Categorical { levels } => {
                    let mut present = vec![false; levels as usize];
                    for v in col {
                        if v.is_nan() {
                            continue;
                        }
                        if v.fract() != 0.0 || *v < 0.0 || *v >= levels as f64 {
                            return Err(DataError::Validation(format!(
                                "categorical column '{}' has non-dense code {v}",
                                self.names[j]
                            )));
                        }
                        present[*v as usize] = true;
                    }
                    if present.iter().any(|p| !p) {
                        return Err(DataError::Validation(format!(
                            "categorical column '{}' is missing a level in 0..{levels}",
                            self.names[j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.response.len()
    }

    pub fn p(&self) -> usize {
        self.columns.len()
    }

    pub fn response(&self) -> &[f64] {
        &self.response
    }

    pub fn response_kind(&self) -> ResponseKind {
        self.response_kind
    }

    pub fn treatment(&self) -> &[u8] {
        &self.treatment
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn kind(&self, j: usize) -> CovariateKind {
        self.kinds[j]
    }

    pub fn kinds(&self) -> &[CovariateKind] {
        &self.kinds
    }

    pub fn name(&self, j: usize) -> &str {
        &self.names[j]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.columns[col][row]
    }

    pub fn is_missing(&self, row: usize, col: usize) -> bool {
        self.columns[col][row].is_nan()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// New dataset with columns rearranged by `perm` (a permutation of 0..p).
    pub fn reorder_columns(&self, perm: &[usize]) -> Dataset {
        assert_eq!(perm.len(), self.p());
        Dataset {
            response: self.response.clone(),
            response_kind: self.response_kind,
            treatment: self.treatment.clone(),
            columns: perm.iter().map(|&j| self.columns[j].clone()).collect(),
            kinds: perm.iter().map(|&j| self.kinds[j]).collect(),
            names: perm.iter().map(|&j| self.names[j].clone()).collect(),
        }
    }

    /// Canonical column order: sorted by name. Methods normalize to this
    /// order so results do not depend on the order columns arrive in.
    pub fn sorted_by_name(&self) -> Dataset {
        let mut perm: Vec<usize> = (0..self.p()).collect();
        perm.sort_by(|&a, &b| self.names[a].cmp(&self.names[b]));
        self.reorder_columns(&perm)
    }

    /// Row-subset copy (indices may repeat, e.g. for bootstrap resamples).
    ///
    /// Skips re-validation on the categorical level-presence rule only via
    /// full reconstruction; a resample can drop a level, so kinds are rebuilt
    /// with the observed level span retained.
    pub fn subset_rows(&self, idx: &[usize]) -> Result<Dataset, DataError> {
        let d = Dataset {
            response: idx.iter().map(|&i| self.response[i]).collect(),
            response_kind: self.response_kind,
            treatment: idx.iter().map(|&i| self.treatment[i]).collect(),
            columns: self
                .columns
                .iter()
                .map(|c| idx.iter().map(|&i| c[i]).collect())
                .collect(),
            kinds: self.kinds.clone(),
            names: self.names.clone(),
        };
        // A resample may drop arms or levels; only the structural invariants
        // that downstream code relies on are re-checked here.
        let n1 = d.treatment.iter().filter(|t| **t == 1).count();
        if n1 == 0 || n1 == d.n() {
            return Err(DataError::Validation(
                "row subset lost a treatment arm".into(),
            ));
        }
        Ok(d)
    }

    /// Same rows with a replacement treatment column.
    pub fn with_treatment(&self, treatment: Vec<u8>) -> Result<Dataset, DataError> {
        Dataset::new(
            self.response.clone(),
            self.response_kind,
            treatment,
            self.columns.clone(),
            self.kinds.clone(),
            self.names.clone(),
        )
    }

    /// Write as CSV with a `y,t,<covariates...>` header. Missing entries
    /// become empty cells. Numeric formatting round-trips bit-exactly.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), DataError> {
        let mut wtr = csv::Writer::from_writer(w);
        let mut header = vec!["y".to_string(), "t".to_string()];
        header.extend(self.names.iter().cloned());
        wtr.write_record(&header)?;
        for i in 0..self.n() {
            let mut rec = Vec::with_capacity(2 + self.p());
            rec.push(format_value(self.response[i]));
            rec.push(self.treatment[i].to_string());
            for j in 0..self.p() {
                let v = self.columns[j][i];
                rec.push(if v.is_nan() { String::new() } else { format_value(v) });
            }
            wtr.write_record(&rec)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn write_csv_path(&self, path: &Path) -> Result<(), DataError> {
        let f = std::fs::File::create(path)?;
        self.write_csv(f)
    }

    /// Schema describing this dataset, usable to reload its CSV form.
    pub fn schema(&self) -> CsvSchema {
        CsvSchema {
            response: "y".into(),
            response_kind: self.response_kind,
            treatment: "t".into(),
            covariates: self
                .names
                .iter()
                .zip(&self.kinds)
                .map(|(name, kind)| ColumnSpec {
                    name: name.clone(),
                    kind: KindSpec::from(*kind),
                })
                .collect(),
        }
    }
}

fn format_value(v: f64) -> String {
    // `Display` for f64 is the shortest representation that parses back to
    // the same bits, which is what the round-trip contract needs.
    format!("{v}")
}

/// Declared kind in a sidecar schema; `Infer` resolves from the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum KindSpec {
    Continuous,
    Binary,
    Categorical,
    Infer,
}

impl From<CovariateKind> for KindSpec {
    fn from(k: CovariateKind) -> Self {
        match k {
            CovariateKind::Continuous => KindSpec::Continuous,
            CovariateKind::Binary => KindSpec::Binary,
            CovariateKind::Categorical { .. } => KindSpec::Categorical,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: KindSpec,
}

/// Sidecar column-role mapping for CSV ingestion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CsvSchema {
    pub response: String,
    pub response_kind: ResponseKind,
    pub treatment: String,
    pub covariates: Vec<ColumnSpec>,
}

impl CsvSchema {
    pub fn from_json(json: &str) -> Result<Self, DataError> {
        serde_json::from_str(json).map_err(|e| DataError::Schema(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, DataError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schema serializes")
    }
}

/// Load a dataset from CSV under a declared schema.
///
/// Empty covariate cells become missing entries; an empty response or
/// treatment cell is an error.
pub fn load_csv(path: &Path, schema: &CsvSchema) -> Result<Dataset, DataError> {
    let f = std::fs::File::open(path)?;
    load_csv_reader(f, schema)
}

pub fn load_csv_reader<R: Read>(reader: R, schema: &CsvSchema) -> Result<Dataset, DataError> {
    if schema.covariates.is_empty() {
        return Err(DataError::Schema("schema names no covariates".into()));
    }
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col_of = |name: &str| -> Result<usize, DataError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| DataError::Schema(format!("column '{name}' not in CSV header")))
    };
    let y_col = col_of(&schema.response)?;
    let t_col = col_of(&schema.treatment)?;
    let x_cols: Vec<usize> = schema
        .covariates
        .iter()
        .map(|c| col_of(&c.name))
        .collect::<Result<_, _>>()?;

    let mut response = Vec::new();
    let mut treatment = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); x_cols.len()];
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = i + 2; // 1-based, after header
        let y_raw = rec.get(y_col).unwrap_or("");
        if y_raw.is_empty() {
            return Err(DataError::Parse {
                row,
                column: schema.response.clone(),
                message: "missing response".into(),
            });
        }
        response.push(parse_number(y_raw, row, &schema.response)?);
        let t_raw = rec.get(t_col).unwrap_or("");
        let t_val = match t_raw {
            "0" => 0u8,
            "1" => 1u8,
            "" => {
                return Err(DataError::Parse {
                    row,
                    column: schema.treatment.clone(),
                    message: "missing treatment".into(),
                })
            }
            other => {
                // accept numeric 0/1 spellings such as "0.0"
                match other.parse::<f64>() {
                    Ok(v) if v == 0.0 => 0u8,
                    Ok(v) if v == 1.0 => 1u8,
                    _ => {
                        return Err(DataError::Parse {
                            row,
                            column: schema.treatment.clone(),
                            message: format!("treatment not in {{0,1}}: '{other}'"),
                        })
                    }
                }
            }
        };
        treatment.push(t_val);
        for (k, &c) in x_cols.iter().enumerate() {
            let raw = rec.get(c).unwrap_or("");
            if raw.is_empty() || raw.eq_ignore_ascii_case("na") || raw.eq_ignore_ascii_case("nan") {
                columns[k].push(f64::NAN);
            } else {
                columns[k].push(parse_number(raw, row, &schema.covariates[k].name)?);
            }
        }
    }

    let kinds: Vec<CovariateKind> = schema
        .covariates
        .iter()
        .zip(&columns)
        .map(|(spec, col)| resolve_kind(spec, col))
        .collect::<Result<_, _>>()?;
    let names = schema.covariates.iter().map(|c| c.name.clone()).collect();
    Dataset::new(
        response,
        schema.response_kind,
        treatment,
        columns,
        kinds,
        names,
    )
}

fn parse_number(raw: &str, row: usize, column: &str) -> Result<f64, DataError> {
    raw.parse::<f64>().map_err(|_| DataError::Parse {
        row,
        column: column.to_string(),
        message: format!("not a number: '{raw}'"),
    })
}

fn resolve_kind(spec: &ColumnSpec, col: &[f64]) -> Result<CovariateKind, DataError> {
    match spec.kind {
        KindSpec::Continuous => Ok(CovariateKind::Continuous),
        KindSpec::Binary => Ok(CovariateKind::Binary),
        KindSpec::Categorical => {
            let mut max = -1.0f64;
            for v in col {
                if !v.is_nan() {
                    if v.fract() != 0.0 || *v < 0.0 {
                        return Err(DataError::Schema(format!(
                            "categorical column '{}' has non-integer code {v}",
                            spec.name
                        )));
                    }
                    max = max.max(*v);
                }
            }
            if max < 0.0 {
                return Err(DataError::Schema(format!(
                    "categorical column '{}' has no observed levels",
                    spec.name
                )));
            }
            Ok(CovariateKind::Categorical {
                levels: max as u32 + 1,
            })
        }
        KindSpec::Infer => {
            let distinct: BTreeSet<u64> = col
                .iter()
                .filter(|v| !v.is_nan())
                .map(|v| v.to_bits())
                .collect();
            let zero_one: BTreeSet<u64> =
                [0.0f64.to_bits(), 1.0f64.to_bits()].into_iter().collect();
            if !distinct.is_empty() && distinct.is_subset(&zero_one) && distinct.len() == 2 {
                Ok(CovariateKind::Binary)
            } else {
                Ok(CovariateKind::Continuous)
            }
        }
    }
}

/// The 2n-row five-component counterfactual design: original rows stacked
/// over flipped-treatment twins, with explicit treatment-by-covariate
/// interaction blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedDesign {
    /// Observed responses (first block only; the second block's response is
    /// what the counterfactual model predicts).
    pub y_observed: Vec<f64>,
    /// Length 2n; second block is the flipped treatment.
    pub t_star: Vec<f64>,
    /// Column-major 2n x p; original covariates duplicated.
    pub x_star: Vec<Vec<f64>>,
    /// Column-major 2n x p; `t_star * x_star` rowwise.
    pub xt: Vec<Vec<f64>>,
    /// Column-major 2n x p; `(1 - t_star) * x_star` rowwise.
    pub x_one_minus_t: Vec<Vec<f64>>,
    /// 1 on observed rows, 0 on counterfactual rows.
    pub fit_weight: Vec<f64>,
}

impl StackedDesign {
    pub fn rows(&self) -> usize {
        self.t_star.len()
    }

    pub fn p(&self) -> usize {
        self.x_star.len()
    }

    /// Number of learner feature columns: treatment plus the three
    /// covariate-derived blocks.
    pub fn feature_count(&self) -> usize {
        3 * self.p() + 1
    }

    /// Assemble the learner feature matrix, column-major, in the layout
    /// `[t_star, x_star.., xt.., x_one_minus_t..]`.
    pub fn feature_columns(&self) -> Vec<Vec<f64>> {
        let mut cols = Vec::with_capacity(self.feature_count());
        cols.push(self.t_star.clone());
        cols.extend(self.x_star.iter().cloned());
        cols.extend(self.xt.iter().cloned());
        cols.extend(self.x_one_minus_t.iter().cloned());
        cols
    }
}

/// Build the stacked counterfactual design from a dataset.
pub fn stack_counterfactual(d: &Dataset) -> StackedDesign {
    let n = d.n();
    let p = d.p();
    let mut t_star = Vec::with_capacity(2 * n);
    t_star.extend(d.treatment().iter().map(|&t| t as f64));
    t_star.extend(d.treatment().iter().map(|&t| 1.0 - t as f64));
    let mut x_star = Vec::with_capacity(p);
    let mut xt = Vec::with_capacity(p);
    let mut x1mt = Vec::with_capacity(p);
    for j in 0..p {
        let col = d.column(j);
        let mut xs = Vec::with_capacity(2 * n);
        xs.extend_from_slice(col);
        xs.extend_from_slice(col);
        let xt_col: Vec<f64> = t_star.iter().zip(&xs).map(|(t, x)| t * x).collect();
        let x1mt_col: Vec<f64> = t_star.iter().zip(&xs).map(|(t, x)| (1.0 - t) * x).collect();
        x_star.push(xs);
        xt.push(xt_col);
        x1mt.push(x1mt_col);
    }
    let mut fit_weight = vec![1.0; n];
    fit_weight.extend(std::iter::repeat(0.0).take(n));
    StackedDesign {
        y_observed: d.response().to_vec(),
        t_star,
        x_star,
        xt,
        x_one_minus_t: x1mt,
        fit_weight,
    }
}

/// One condition of a signature. `Le`/`In` describe the left (member) branch
/// of a split; `Gt`/`NotIn` its complement. Missing values satisfy only the
/// complement forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "camelCase")]
pub enum ConditionOp {
    Le { threshold: f64 },
    Gt { threshold: f64 },
    In { levels: BTreeSet<u32> },
    NotIn { levels: BTreeSet<u32> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitCondition {
    pub variable: String,
    #[serde(flatten)]
    pub op: ConditionOp,
}

impl fmt::Display for SplitCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.op {
            ConditionOp::Le { threshold } => write!(f, "{} <= {}", self.variable, threshold),
            ConditionOp::Gt { threshold } => write!(f, "{} > {}", self.variable, threshold),
            ConditionOp::In { levels } => {
                let ls: Vec<String> = levels.iter().map(|l| l.to_string()).collect();
                write!(f, "{} in {{{}}}", self.variable, ls.join(","))
            }
            ConditionOp::NotIn { levels } => {
                let ls: Vec<String> = levels.iter().map(|l| l.to_string()).collect();
                write!(f, "{} not in {{{}}}", self.variable, ls.join(","))
            }
        }
    }
}

/// An ordered conjunction of split conditions defining subgroup membership.
/// An empty signature is vacuous: every row is a member.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Signature {
    pub conditions: Vec<SplitCondition>,
}

impl Signature {
    pub fn new(conditions: Vec<SplitCondition>) -> Result<Self, DataError> {
        for c in &conditions {
            match &c.op {
                ConditionOp::Le { threshold } | ConditionOp::Gt { threshold } => {
                    if !threshold.is_finite() {
                        return Err(DataError::Validation(format!(
                            "non-finite threshold in condition on '{}'",
                            c.variable
                        )));
                    }
                }
                ConditionOp::In { levels } | ConditionOp::NotIn { levels } => {
                    if levels.is_empty() {
                        return Err(DataError::Validation(format!(
                            "empty level set in condition on '{}'",
                            c.variable
                        )));
                    }
                }
            }
        }
        Ok(Signature { conditions })
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    /// Does `row` of `d` satisfy every condition? Missing values satisfy
    /// only `Gt`/`NotIn` conditions.
    pub fn matches(&self, d: &Dataset, row: usize) -> Result<bool, DataError> {
        for c in &self.conditions {
            let j = d
                .column_index(&c.variable)
                .ok_or_else(|| DataError::UnknownVariable(c.variable.clone()))?;
            let v = d.value(row, j);
            let ok = match &c.op {
                ConditionOp::Le { threshold } => !v.is_nan() && v <= *threshold,
                ConditionOp::Gt { threshold } => v.is_nan() || v > *threshold,
                ConditionOp::In { levels } => !v.is_nan() && levels.contains(&(v as u32)),
                ConditionOp::NotIn { levels } => v.is_nan() || !levels.contains(&(v as u32)),
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("signature serializes")
    }

    pub fn from_json(json: &str) -> Result<Self, DataError> {
        let s: Signature =
            serde_json::from_str(json).map_err(|e| DataError::Schema(e.to_string()))?;
        Signature::new(s.conditions)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conditions.is_empty() {
            return write!(f, "(all rows)");
        }
        let parts: Vec<String> = self.conditions.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" and "))
    }
}

/// Partition rows into (members, non-members) under a signature.
pub fn apply_signature(
    d: &Dataset,
    s: &Signature,
) -> Result<(Vec<usize>, Vec<usize>), DataError> {
    let mut members = Vec::new();
    let mut rest = Vec::new();
    for i in 0..d.n() {
        if s.matches(d, i)? {
            members.push(i);
        } else {
            rest.push(i);
        }
    }
    Ok((members, rest))
}
