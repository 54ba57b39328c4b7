//! Instance tables with ranking targets: CSV ingestion, equal-width
//! discretization, fold splitting and summary statistics.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::io::{Read, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ranking::{default_label_names, text_groups, Ranking};

/// Category name used for missing categorical cells.
pub const MISSING: &str = "?";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttributeKind {
    Categorical,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeSchema {
    pub name: String,
    pub kind: AttributeKind,
    /// Category names; empty for numeric attributes.
    pub values: Vec<String>,
}

impl AttributeSchema {
    pub fn categorical(name: impl Into<String>, values: Vec<String>) -> Self {
        AttributeSchema {
            name: name.into(),
            kind: AttributeKind::Categorical,
            values,
        }
    }

    pub fn numeric(name: impl Into<String>) -> Self {
        AttributeSchema {
            name: name.into(),
            kind: AttributeKind::Numeric,
            values: Vec::new(),
        }
    }

    pub fn value_index(&self, value: &str) -> Option<u32> {
        self.values.iter().position(|v| v == value).map(|i| i as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    /// Index into the attribute's value list.
    Cat(u32),
    Num(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: Vec<AttributeSchema>,
    rows: Vec<Vec<Value>>,
    targets: Vec<Ranking>,
    label_names: Vec<String>,
    target_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    #[serde(rename = "U_pi")]
    pub u_pi: f64,
    pub label_names: Vec<String>,
}

impl Dataset {
    pub fn new(
        schema: Vec<AttributeSchema>,
        rows: Vec<Vec<Value>>,
        targets: Vec<Ranking>,
        label_names: Vec<String>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for attr in &schema {
            if !seen.insert(attr.name.as_str()) {
                return Err(Error::Schema(format!("duplicate attribute `{}`", attr.name)));
            }
            let distinct: HashSet<&String> = attr.values.iter().collect();
            if distinct.len() != attr.values.len() {
                return Err(Error::Schema(format!(
                    "attribute `{}` lists a value twice",
                    attr.name
                )));
            }
        }
        if rows.len() != targets.len() {
            return Err(Error::Schema(format!(
                "{} rows but {} targets",
                rows.len(),
                targets.len()
            )));
        }
        for (i, (row, target)) in rows.iter().zip(&targets).enumerate() {
            if row.len() != schema.len() {
                return Err(Error::Schema(format!(
                    "row {} has {} values for {} attributes",
                    i + 1,
                    row.len(),
                    schema.len()
                )));
            }
            for (value, attr) in row.iter().zip(&schema) {
                let ok = match (value, attr.kind) {
                    (Value::Cat(v), AttributeKind::Categorical) => (*v as usize) < attr.values.len(),
                    (Value::Num(_), AttributeKind::Numeric) => true,
                    _ => false,
                };
                if !ok {
                    return Err(Error::Schema(format!(
                        "row {} has an invalid value for `{}`",
                        i + 1,
                        attr.name
                    )));
                }
            }
            if target.k() != label_names.len() {
                return Err(Error::Dimension {
                    left: target.k(),
                    right: label_names.len(),
                });
            }
        }
        Ok(Dataset {
            schema,
            rows,
            targets,
            label_names,
            target_name: "ranking".to_string(),
        })
    }

    /// All-categorical dataset from string cells, value lists in order of
    /// first appearance.
    pub fn from_categorical<S: AsRef<str>, T: AsRef<str>>(
        attribute_names: &[S],
        cells: &[Vec<T>],
        targets: Vec<Ranking>,
        label_names: Vec<String>,
    ) -> Result<Self> {
        let mut schema: Vec<AttributeSchema> = attribute_names
            .iter()
            .map(|n| AttributeSchema::categorical(n.as_ref(), Vec::new()))
            .collect();
        let mut rows = Vec::with_capacity(cells.len());
        for (i, row) in cells.iter().enumerate() {
            if row.len() != schema.len() {
                return Err(Error::Parse {
                    row: i + 1,
                    message: format!("{} cells for {} attributes", row.len(), schema.len()),
                });
            }
            rows.push(
                row.iter()
                    .zip(schema.iter_mut())
                    .map(|(cell, attr)| Value::Cat(intern(&mut attr.values, cell.as_ref())))
                    .collect(),
            );
        }
        Dataset::new(schema, rows, targets, label_names)
    }

    pub fn with_target_name(mut self, name: impl Into<String>) -> Self {
        self.target_name = name.into();
        self
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Number of descriptive attributes.
    pub fn m(&self) -> usize {
        self.schema.len()
    }

    pub fn k(&self) -> usize {
        self.label_names.len()
    }

    pub fn schema(&self) -> &[AttributeSchema] {
        &self.schema
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Value] {
        &self.rows[i]
    }

    pub fn targets(&self) -> &[Ranking] {
        &self.targets
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }

    pub fn is_categorical(&self) -> bool {
        self.schema
            .iter()
            .all(|a| a.kind == AttributeKind::Categorical)
    }

    /// Rows at `indices`, in that order, sharing this schema.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            targets: indices.iter().map(|&i| self.targets[i].clone()).collect(),
            label_names: self.label_names.clone(),
            target_name: self.target_name.clone(),
        }
    }

    /// Category name of a categorical cell.
    pub fn value_name(&self, row: usize, attr: usize) -> Option<&str> {
        match self.rows[row][attr] {
            Value::Cat(v) => Some(self.schema[attr].values[v as usize].as_str()),
            Value::Num(_) => None,
        }
    }

    pub fn parse_csv<R: Read>(reader: R, target_column: &str) -> Result<Dataset> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Parse {
                row: 0,
                message: e.to_string(),
            })?
            .iter()
            .map(str::to_string)
            .collect();
        let target_idx = header
            .iter()
            .position(|h| h == target_column)
            .ok_or_else(|| {
                Error::Schema(format!(
                    "target column `{target_column}` not found in header (row 0): {}",
                    header.join(",")
                ))
            })?;

        let mut records: Vec<Vec<String>> = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse {
                row: i + 1,
                message: e.to_string(),
            })?;
            if rec.len() != header.len() {
                return Err(Error::Parse {
                    row: i + 1,
                    message: format!("{} fields, header has {}", rec.len(), header.len()),
                });
            }
            records.push(rec.iter().map(str::to_string).collect());
        }

        let (targets, label_names) = parse_targets(&records, target_idx)?;

        let attr_cols: Vec<usize> = (0..header.len()).filter(|&c| c != target_idx).collect();
        let mut schema = Vec::with_capacity(attr_cols.len());
        let mut columns: Vec<Vec<Value>> = Vec::with_capacity(attr_cols.len());
        for &c in &attr_cols {
            let cells: Vec<&str> = records.iter().map(|r| r[c].as_str()).collect();
            let numeric = cells.iter().any(|s| !is_missing(s))
                && cells
                    .iter()
                    .filter(|s| !is_missing(s))
                    .all(|s| s.parse::<f64>().is_ok_and(f64::is_finite));
            if numeric {
                schema.push(AttributeSchema::numeric(header[c].clone()));
                columns.push(
                    cells
                        .iter()
                        .map(|s| Value::Num(if is_missing(s) { 0.0 } else { s.parse().unwrap() }))
                        .collect(),
                );
            } else {
                let mut values = Vec::new();
                let col = cells
                    .iter()
                    .map(|s| Value::Cat(intern(&mut values, if is_missing(s) { MISSING } else { s })))
                    .collect();
                schema.push(AttributeSchema::categorical(header[c].clone(), values));
                columns.push(col);
            }
        }
        let rows = (0..records.len())
            .map(|i| columns.iter().map(|col| col[i]).collect())
            .collect();
        Ok(Dataset::new(schema, rows, targets, label_names)?.with_target_name(target_column))
    }

    /// Writes the dataset back as CSV, target column last. Targets use the
    /// text form unless re-reading it would renumber the labels, in which
    /// case the rank-vector form is written.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header: Vec<&str> = self.schema.iter().map(|a| a.name.as_str()).collect();
        header.push(&self.target_name);
        wtr.write_record(&header).map_err(csv_err)?;
        let vector_form = !self.text_form_preserves_labels();
        for (row, target) in self.rows.iter().zip(&self.targets) {
            let mut rec: Vec<String> = row
                .iter()
                .zip(&self.schema)
                .map(|(v, a)| match v {
                    Value::Cat(i) => a.values[*i as usize].clone(),
                    Value::Num(x) => format!("{x}"),
                })
                .collect();
            rec.push(if vector_form {
                target.to_string()
            } else {
                target.to_text(&self.label_names)
            });
            wtr.write_record(&rec).map_err(csv_err)?;
        }
        wtr.flush()?;
        Ok(())
    }

    fn text_form_preserves_labels(&self) -> bool {
        let mut ranked = vec![false; self.k()];
        for t in &self.targets {
            for (l, &r) in t.ranks().iter().enumerate() {
                ranked[l] |= r > 0;
            }
        }
        ranked.iter().all(|&r| r)
            && self
                .label_names
                .windows(2)
                .all(|w| natural_cmp(&w[0], &w[1]).is_lt())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }

    /// Equal-width bins fitted on this dataset's numeric columns.
    pub fn fit_equal_width(&self, bins: usize) -> Result<Discretization> {
        if bins < 2 {
            return Err(Error::Argument(format!("need at least 2 bins, got {bins}")));
        }
        let mut attributes = Vec::new();
        for (a, attr) in self.schema.iter().enumerate() {
            if attr.kind != AttributeKind::Numeric {
                continue;
            }
            let (lo, hi) = self.rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                match r[a] {
                    Value::Num(x) => (lo.min(x), hi.max(x)),
                    Value::Cat(_) => (lo, hi),
                }
            });
            let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 0.0) };
            attributes.push(EqualWidthBins::new(&attr.name, lo, hi, bins));
        }
        Ok(Discretization { attributes })
    }

    pub fn equal_width_discretize(&self, bins: usize) -> Result<Dataset> {
        self.fit_equal_width(bins)?.apply(self)
    }

    /// Proportion of distinct target rankings.
    pub fn unique_ranking_proportion(&self) -> Result<f64> {
        if self.n() == 0 {
            return Err(Error::EmptyInput("dataset has no instances".to_string()));
        }
        let distinct: HashSet<&Ranking> = self.targets.iter().collect();
        Ok(distinct.len() as f64 / self.n() as f64)
    }

    pub fn stats(&self) -> Result<DatasetStats> {
        Ok(DatasetStats {
            n: self.n(),
            m: self.m(),
            k: self.k(),
            u_pi: self.unique_ranking_proportion()?,
            label_names: self.label_names.clone(),
        })
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub(crate) fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell == MISSING
}

fn intern(values: &mut Vec<String>, value: &str) -> u32 {
    match values.iter().position(|v| v == value) {
        Some(i) => i as u32,
        None => {
            values.push(value.to_string());
            (values.len() - 1) as u32
        }
    }
}

/// Target cells are either all rank vectors `(1,2,0,3)` (labels `L1..Lk`)
/// or all text form, with labels numbered in natural name order.
fn parse_targets(records: &[Vec<String>], col: usize) -> Result<(Vec<Ranking>, Vec<String>)> {
    let is_vector = |s: &str| s.trim_start().starts_with('(');
    let vector_rows = records.iter().filter(|r| is_vector(&r[col])).count();
    if vector_rows > 0 && vector_rows < records.len() {
        let row = records.iter().position(|r| !is_vector(&r[col])).unwrap() + 1;
        return Err(Error::Parse {
            row,
            message: "target column mixes rank vectors and text rankings".to_string(),
        });
    }
    if vector_rows > 0 {
        let mut targets = Vec::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            let p = Ranking::parse_vector(&r[col]).map_err(|e| Error::Parse {
                row: i + 1,
                message: e.to_string(),
            })?;
            if let Some(first) = targets.first().map(Ranking::k) {
                if first != p.k() {
                    return Err(Error::Parse {
                        row: i + 1,
                        message: format!("ranking has {} labels, expected {first}", p.k()),
                    });
                }
            }
            targets.push(p);
        }
        let k = targets.first().map_or(0, Ranking::k);
        return Ok((targets, default_label_names(k)));
    }

    let mut names: Vec<String> = Vec::new();
    for (i, r) in records.iter().enumerate() {
        let groups = text_groups(&r[col]).map_err(|e| Error::Parse {
            row: i + 1,
            message: e.to_string(),
        })?;
        if groups.is_empty() {
            return Err(Error::Parse {
                row: i + 1,
                message: "empty ranking".to_string(),
            });
        }
        for label in groups.into_iter().flatten() {
            if !names.iter().any(|n| n == label) {
                names.push(label.to_string());
            }
        }
    }
    names.sort_by(|a, b| natural_cmp(a, b));
    let targets = records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            Ranking::parse_text(&r[col], &names).map_err(|e| Error::Parse {
                row: i + 1,
                message: e.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((targets, names))
}

/// Orders names with embedded numbers numerically: `L2 < L10`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for ((da, xa), (db, xb)) in ca.iter().zip(&cb) {
        let ord = if *da && *db {
            let (ta, tb) = (xa.trim_start_matches('0'), xb.trim_start_matches('0'));
            ta.len().cmp(&tb.len()).then(ta.cmp(tb))
        } else {
            xa.cmp(xb)
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then(a.cmp(b))
}

/// Rounds to 6 significant digits for interval names.
fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{}", if x == 0.0 { 0.0 } else { x });
    }
    let rounded: f64 = format!("{x:.5e}").parse().unwrap_or(x);
    format!("{rounded}")
}

/// Equal-width binning of one numeric attribute. Bins are half-open
/// `[lo, hi)` except the last, which is closed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EqualWidthBins {
    pub attribute: String,
    pub min: f64,
    pub max: f64,
    pub bins: usize,
}

impl EqualWidthBins {
    pub fn new(attribute: &str, min: f64, max: f64, bins: usize) -> Self {
        // A constant column collapses to one bin.
        let bins = if max > min { bins } else { 1 };
        EqualWidthBins {
            attribute: attribute.to_string(),
            min,
            max,
            bins,
        }
    }

    pub fn width(&self) -> f64 {
        (self.max - self.min) / self.bins as f64
    }

    /// Inner cut points, ascending.
    pub fn cuts(&self) -> Vec<f64> {
        let w = self.width();
        (1..self.bins).map(|i| self.min + w * i as f64).collect()
    }

    /// Bin of `x`; values outside the fitted range go to the nearest end bin.
    pub fn bin(&self, x: f64) -> usize {
        self.cuts().iter().take_while(|&&c| x >= c).count()
    }

    pub fn names(&self) -> Vec<String> {
        let mut edges = vec![self.min];
        edges.extend(self.cuts());
        edges.push(self.max);
        (0..self.bins)
            .map(|i| {
                let close = if i + 1 == self.bins { ']' } else { ')' };
                format!("[{},{}{close}", sig6(edges[i]), sig6(edges[i + 1]))
            })
            .collect()
    }
}

/// Fitted binning for every numeric attribute of a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discretization {
    pub attributes: Vec<EqualWidthBins>,
}

impl Discretization {
    /// Replaces each numeric attribute named here by its bin names. Other
    /// attributes pass through unchanged.
    pub fn apply(&self, ds: &Dataset) -> Result<Dataset> {
        let mut schema = ds.schema.clone();
        let mut rows = ds.rows.clone();
        for (a, attr) in ds.schema.iter().enumerate() {
            if attr.kind != AttributeKind::Numeric {
                continue;
            }
            let Some(binning) = self.attributes.iter().find(|b| b.attribute == attr.name) else {
                continue;
            };
            schema[a] = AttributeSchema::categorical(attr.name.clone(), binning.names());
            for row in rows.iter_mut() {
                if let Value::Num(x) = row[a] {
                    row[a] = Value::Cat(binning.bin(x) as u32);
                }
            }
        }
        Ok(Dataset {
            schema,
            rows,
            targets: ds.targets.clone(),
            label_names: ds.label_names.clone(),
            target_name: ds.target_name.clone(),
        })
    }
}

/// Seeded `folds`-way split of `0..n` into (train, test) index lists. Test
/// folds partition the indices and differ in size by at most one; both lists
/// are sorted.
pub fn kfold_split(n: usize, folds: usize, seed: u64) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    if folds < 2 {
        return Err(Error::Argument(format!("need at least 2 folds, got {folds}")));
    }
    if folds > n {
        return Err(Error::Argument(format!("{folds} folds for {n} instances")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (base, extra) = (n / folds, n % folds);
    let mut start = 0;
    let mut out = Vec::with_capacity(folds);
    for f in 0..folds {
        let size = base + usize::from(f < extra);
        let mut test = order[start..start + size].to_vec();
        test.sort_unstable();
        let mut in_test = vec![false; n];
        for &i in &test {
            in_test[i] = true;
        }
        let train = (0..n).filter(|&i| !in_test[i]).collect();
        out.push((train, test));
        start += size;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE1: &str = "A1,ranking\nL,L1>L3>L2\nL,L2>L1>L3\nL,L3>L1>L2\n";

    #[test]
    fn parses_table_one_targets() {
        let ds = Dataset::parse_csv(TABLE1.as_bytes(), "ranking").unwrap();
        assert_eq!(ds.n(), 3);
        assert_eq!(ds.k(), 3);
        assert_eq!(ds.label_names(), &["L1", "L2", "L3"]);
        let as_vec: Vec<&[u32]> = ds.targets().iter().map(Ranking::ranks).collect();
        assert_eq!(as_vec, vec![&[1, 3, 2], &[2, 1, 3], &[2, 3, 1]]);
    }

    #[test]
    fn parses_ties_and_rejects_duplicates() {
        let ds = Dataset::parse_csv("x,t\n1,a>b=c\n".as_bytes(), "t").unwrap();
        assert_eq!(ds.targets()[0].ranks(), &[1, 2, 2]);
        let err = Dataset::parse_csv("x,t\n1,a>b\n2,a>a\n".as_bytes(), "t").unwrap_err();
        assert!(matches!(err, Error::Parse { row: 2, .. }), "{err:?}");
    }

    #[test]
    fn vector_targets_and_errors() {
        let ds = Dataset::parse_csv("x,t\n1,\"(1,2,0)\"\n2,\"(2,1,3)\"\n".as_bytes(), "t").unwrap();
        assert_eq!(ds.label_names(), &["L1", "L2", "L3"]);
        assert_eq!(ds.targets()[0].ranks(), &[1, 2, 0]);
        let err = Dataset::parse_csv("x,t\n1,\"(1,3)\"\n".as_bytes(), "t").unwrap_err();
        assert!(matches!(err, Error::Parse { row: 1, .. }));
        let err = Dataset::parse_csv("x,t\n1,\"(1,2)\"\n2,a>b\n".as_bytes(), "t").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = Dataset::parse_csv("x,t\n1,a>b\n".as_bytes(), "rank").unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
    }

    #[test]
    fn infers_kinds_and_missing_values() {
        let ds = Dataset::parse_csv("x,c,t\n1.5,red,a>b\n?,,b>a\n".as_bytes(), "t").unwrap();
        assert_eq!(ds.schema()[0].kind, AttributeKind::Numeric);
        assert_eq!(ds.row(1)[0], Value::Num(0.0));
        assert_eq!(ds.schema()[1].kind, AttributeKind::Categorical);
        assert_eq!(ds.value_name(1, 1), Some("?"));
    }

    fn numeric(values: &[f64]) -> Dataset {
        let n = values.len();
        Dataset::new(
            vec![AttributeSchema::numeric("v")],
            values.iter().map(|&x| vec![Value::Num(x)]).collect(),
            vec![Ranking::identity(2); n],
            default_label_names(2),
        )
        .unwrap()
    }

    #[test]
    fn equal_width_examples() {
        let ds = numeric(&(0..=10).map(f64::from).collect::<Vec<_>>());
        let bins = &ds.fit_equal_width(2).unwrap().attributes[0];
        assert_eq!(bins.cuts(), vec![5.0]);
        assert_eq!((bins.bin(4.0), bins.bin(5.0), bins.bin(10.0)), (0, 1, 1));
        let out = ds.equal_width_discretize(2).unwrap();
        assert_eq!(out.schema()[0].values, vec!["[0,5)", "[5,10]"]);
        assert_eq!(out.value_name(5, 0), Some("[5,10]"));

        let ds = numeric(&[7.0, 7.0, 7.0]);
        let out = ds.equal_width_discretize(3).unwrap();
        assert_eq!(out.schema()[0].values, vec!["[7,7]"]);

        let ds = numeric(&(1..=100).map(f64::from).collect::<Vec<_>>());
        let bins = &ds.fit_equal_width(4).unwrap().attributes[0];
        assert_eq!(bins.cuts(), vec![25.75, 50.5, 75.25]);
        assert!(ds.fit_equal_width(1).is_err());
    }

    #[test]
    fn natural_label_order() {
        let mut names = vec!["L10", "L2", "b", "L1", "a"];
        names.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(names, vec!["L1", "L2", "L10", "a", "b"]);
    }

    #[test]
    fn sig6_names() {
        assert_eq!(sig6(1.0 / 3.0), "0.333333");
        assert_eq!(sig6(1234567.0), "1234570");
        assert_eq!(sig6(-2.5), "-2.5");
    }

    #[test]
    fn unique_proportion() {
        let mut targets = vec![Ranking::identity(3); 145];
        for order in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 1, 0]] {
            targets.push(Ranking::from_order(&order).unwrap());
        }
        targets.push(Ranking::identity(3));
        let rows = vec![vec![Value::Cat(0)]; 150];
        let schema = vec![AttributeSchema::categorical("a", vec!["x".into()])];
        let ds = Dataset::new(schema, rows, targets, default_label_names(3)).unwrap();
        assert!((ds.unique_ranking_proportion().unwrap() - 5.0 / 150.0).abs() < 1e-15);

        let ds = numeric(&[1.0, 2.0]);
        assert_eq!(ds.unique_ranking_proportion().unwrap(), 0.5);
        assert!(ds.subset(&[]).unique_ranking_proportion().is_err());
    }

    #[test]
    fn kfold_examples() {
        let splits = kfold_split(10, 10, 1).unwrap();
        assert!(splits.iter().all(|(_, test)| test.len() == 1));
        let splits = kfold_split(10, 3, 1).unwrap();
        let sizes: Vec<usize> = splits.iter().map(|(_, t)| t.len()).collect();
        assert_eq!(sizes, vec![4, 3, 3]);
        let mut all: Vec<usize> = splits.iter().flat_map(|(_, t)| t.clone()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        assert_eq!(kfold_split(10, 3, 7).unwrap(), kfold_split(10, 3, 7).unwrap());
        assert!(kfold_split(3, 4, 0).is_err());
        assert!(kfold_split(3, 1, 0).is_err());
    }

    #[test]
    fn stats_json() {
        let ds = Dataset::parse_csv(TABLE1.as_bytes(), "ranking").unwrap();
        let json = serde_json::to_value(ds.stats().unwrap()).unwrap();
        assert_eq!(json["n"], 3);
        assert_eq!(json["m"], 1);
        assert_eq!(json["k"], 3);
        assert_eq!(json["U_pi"], 1.0);
    }
}
