//! CSV dataset formats and JSON indicator output.
//!
//! `journals.csv` has the header `id,name,articles_t1,articles_t2`, one row
//! per journal in index order. `matrix.csv` starts with the header cell
//! `citing\cited` followed by journal ids; each row is a citing journal id
//! followed by its citation counts. Numbers are written with the shortest
//! representation that round-trips, so integral counts come out as integers.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::analysis::CorrelationMatrix;
use crate::error::{Error, Result};
use crate::indicators::{IndicatorVector, Params};
use crate::model::{CitationMatrix, Dataset, Journal, JournalSet};
use crate::properties::{Field, FieldPartition};
use crate::spectral::SolverReport;

pub const JOURNALS_HEADER: [&str; 4] = ["id", "name", "articles_t1", "articles_t2"];
pub const MATRIX_CORNER: &str = "citing\\cited";
pub const PARTITION_HEADER: [&str; 2] = ["id", "field"];
pub const CORRELATION_CORNER: &str = "indicator";

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes())
}

/// Reads all records, tagging each with its 1-based line number.
fn records(text: &str) -> Result<Vec<(usize, csv::StringRecord)>> {
    let mut out = Vec::new();
    for record in reader(text).records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        // skip blank lines
        if record.len() == 1 && record[0].trim().is_empty() {
            continue;
        }
        out.push((line, record));
    }
    Ok(out)
}

fn parse_number(field: &str, line: usize, what: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| parse_error(line, format!("{what}: {field:?} is not a number")))
}

fn expect_header(records: &[(usize, csv::StringRecord)], header: &[&str]) -> Result<()> {
    let Some((line, first)) = records.first() else {
        return Err(parse_error(1, "empty file"));
    };
    let found: Vec<&str> = first.iter().map(str::trim).collect();
    if found != header {
        return Err(parse_error(
            *line,
            format!("expected header {:?}, found {found:?}", header.join(",")),
        ));
    }
    Ok(())
}

pub fn parse_journals_csv(text: &str) -> Result<JournalSet> {
    let records = records(text)?;
    expect_header(&records, &JOURNALS_HEADER)?;
    let mut journals = Vec::with_capacity(records.len().saturating_sub(1));
    for (line, record) in &records[1..] {
        if record.len() != JOURNALS_HEADER.len() {
            return Err(parse_error(
                *line,
                format!("expected 4 fields, found {}", record.len()),
            ));
        }
        let name = record[1].to_string();
        journals.push(Journal {
            id: record[0].to_string(),
            name: (!name.is_empty()).then_some(name),
            articles_t1: parse_number(&record[2], *line, "articles_t1")?,
            articles_t2: parse_number(&record[3], *line, "articles_t2")?,
        });
    }
    Ok(JournalSet::new(journals))
}

/// Parses `matrix.csv`, returning the header ids and the counts. Row ids must
/// repeat the header ids in the same order.
pub fn parse_matrix_csv(text: &str) -> Result<(Vec<String>, CitationMatrix)> {
    let records = records(text)?;
    let Some((header_line, header)) = records.first() else {
        return Err(parse_error(1, "empty file"));
    };
    if header.get(0).map(str::trim) != Some(MATRIX_CORNER) {
        return Err(parse_error(
            *header_line,
            format!("first header cell must be {MATRIX_CORNER:?}"),
        ));
    }
    let ids: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let n = ids.len();
    if records.len() - 1 != n {
        return Err(parse_error(
            *header_line,
            format!(
                "{n} cited journals in header but {} citing rows",
                records.len() - 1
            ),
        ));
    }
    let mut counts = Vec::with_capacity(n * n);
    for (k, (line, record)) in records[1..].iter().enumerate() {
        if record.len() != n + 1 {
            return Err(parse_error(
                *line,
                format!("expected {} fields, found {}", n + 1, record.len()),
            ));
        }
        if record[0] != ids[k] {
            return Err(parse_error(
                *line,
                format!(
                    "row id {:?} does not match header id {:?}",
                    &record[0], ids[k]
                ),
            ));
        }
        for cell in record.iter().skip(1) {
            counts.push(parse_number(cell, *line, "citation count")?);
        }
    }
    Ok((ids, CitationMatrix::from_dense(n, counts)))
}

/// Parses both files and validates the pair. Matrix ids must equal the
/// journal ids, in the same order.
pub fn load_dataset(journals_csv: &str, matrix_csv: &str) -> Result<Dataset> {
    let journals = parse_journals_csv(journals_csv)?;
    let (ids, matrix) = parse_matrix_csv(matrix_csv)?;
    let expected: Vec<&str> = journals.ids().collect();
    if ids.len() != expected.len() || ids.iter().zip(&expected).any(|(a, b)| a != b) {
        return Err(parse_error(
            1,
            format!("matrix ids {ids:?} do not match journal ids {expected:?}"),
        ));
    }
    Dataset::new(journals, matrix)
}

fn write_rows<I, R>(rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.write_record(row).expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("flush to memory")).expect("utf-8 input")
}

pub fn write_journals_csv(journals: &JournalSet) -> String {
    let header = JOURNALS_HEADER.map(String::from).to_vec();
    let rows = journals.iter().map(|j| {
        vec![
            j.id.clone(),
            j.name.clone().unwrap_or_default(),
            j.articles_t1.to_string(),
            j.articles_t2.to_string(),
        ]
    });
    write_rows(std::iter::once(header).chain(rows))
}

pub fn write_matrix_csv(data: &Dataset) -> String {
    let ids: Vec<String> = data.journals().ids().map(str::to_string).collect();
    let header = std::iter::once(MATRIX_CORNER.to_string()).chain(ids.iter().cloned());
    let m = data.matrix();
    let rows = ids.iter().enumerate().map(|(i, id)| {
        std::iter::once(id.clone())
            .chain(m.row(i).iter().map(f64::to_string))
            .collect::<Vec<_>>()
    });
    write_rows(std::iter::once(header.collect::<Vec<_>>()).chain(rows))
}

/// Parses `partition.csv` (`id,field` with field 1 or 2). Every journal
/// must appear exactly once; row order is free.
pub fn parse_partition_csv(text: &str, journals: &JournalSet) -> Result<FieldPartition> {
    let records = records(text)?;
    expect_header(&records, &PARTITION_HEADER)?;
    let mut fields: Vec<Option<Field>> = vec![None; journals.len()];
    for (line, record) in &records[1..] {
        if record.len() != 2 {
            return Err(parse_error(
                *line,
                format!("expected 2 fields, found {}", record.len()),
            ));
        }
        let index = journals
            .index_of(&record[0])
            .ok_or_else(|| parse_error(*line, format!("unknown journal id {:?}", &record[0])))?;
        let field = record[1]
            .trim()
            .parse::<u8>()
            .ok()
            .and_then(Field::from_number)
            .ok_or_else(|| {
                parse_error(*line, format!("field must be 1 or 2, got {:?}", &record[1]))
            })?;
        if fields[index].replace(field).is_some() {
            return Err(parse_error(
                *line,
                format!("journal {:?} listed twice", &record[0]),
            ));
        }
    }
    let assigned = fields
        .iter()
        .zip(journals.iter())
        .map(|(f, j)| f.ok_or_else(|| parse_error(0, format!("journal {:?} has no field", j.id))))
        .collect::<Result<Vec<_>>>()?;
    FieldPartition::new(assigned)
}

pub fn write_partition_csv(journals: &JournalSet, partition: &FieldPartition) -> String {
    let header = PARTITION_HEADER.map(String::from).to_vec();
    let rows = journals
        .iter()
        .zip(partition.fields())
        .map(|(j, f)| vec![j.id.clone(), f.number().to_string()]);
    write_rows(std::iter::once(header).chain(rows))
}

/// Correlation table in combined layout (Pearson lower-left, Spearman
/// upper-right), rounded to `precision` decimals when given.
pub fn write_correlation_csv(table: &CorrelationMatrix, precision: Option<usize>) -> String {
    let fmt = |x: f64| match precision {
        Some(p) => format!("{x:.p$}"),
        None => x.to_string(),
    };
    let header = std::iter::once(CORRELATION_CORNER.to_string())
        .chain(table.labels.iter().cloned())
        .collect::<Vec<_>>();
    let rows = table
        .layout()
        .into_iter()
        .zip(&table.labels)
        .map(|(row, label)| {
            std::iter::once(label.clone())
                .chain(row.into_iter().map(fmt))
                .collect::<Vec<_>>()
        });
    write_rows(std::iter::once(header).chain(rows))
}

pub fn parse_correlation_csv(text: &str) -> Result<CorrelationMatrix> {
    let records = records(text)?;
    let Some((header_line, header)) = records.first() else {
        return Err(parse_error(1, "empty file"));
    };
    if header.get(0) != Some(CORRELATION_CORNER) {
        return Err(parse_error(
            *header_line,
            format!("first header cell must be {CORRELATION_CORNER:?}"),
        ));
    }
    let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let k = labels.len();
    if records.len() - 1 != k {
        return Err(parse_error(
            *header_line,
            format!("{k} columns but {} rows", records.len() - 1),
        ));
    }
    let mut layout = Vec::with_capacity(k);
    for (i, (line, record)) in records[1..].iter().enumerate() {
        if record.len() != k + 1 || record[0] != labels[i] {
            return Err(parse_error(
                *line,
                format!("row {} does not match header", i + 1),
            ));
        }
        let row = record
            .iter()
            .skip(1)
            .map(|c| {
                let v = parse_number(c, *line, "correlation")?;
                if (-1.0..=1.0).contains(&v) {
                    Ok(v)
                } else {
                    Err(parse_error(
                        *line,
                        format!("correlation {c:?} outside [-1, 1]"),
                    ))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        layout.push(row);
    }
    CorrelationMatrix::from_layout(labels, &layout)
}

/// JSON document for one indicator: `indicator`, `params`, `values` keyed by
/// journal id in journal order, and `solver`.
#[derive(Debug, Clone, Serialize)]
pub struct IndicatorJson {
    pub indicator: String,
    pub params: Value,
    pub values: Map<String, Value>,
    pub solver: Option<SolverReport>,
}

impl IndicatorJson {
    pub fn new(journals: &JournalSet, vector: &IndicatorVector, precision: Option<usize>) -> Self {
        let values = journals
            .ids()
            .zip(&vector.values)
            .map(|(id, &v)| {
                let v = match precision {
                    Some(p) => round_to(v, p),
                    None => v,
                };
                (id.to_string(), serde_json::json!(v))
            })
            .collect();
        let params = match vector.params {
            Params::None => Value::Object(Map::new()),
            other => serde_json::to_value(other).unwrap_or(Value::Null),
        };
        IndicatorJson {
            indicator: vector.kind.to_string(),
            params,
            values,
            solver: vector.solver,
        }
    }
}

fn round_to(v: f64, precision: usize) -> f64 {
    format!("{v:.precision$}").parse().unwrap_or(v)
}

/// `id,value` rows for one indicator.
pub fn write_indicator_csv(
    journals: &JournalSet,
    vector: &IndicatorVector,
    precision: Option<usize>,
) -> String {
    let header = vec!["id".to_string(), vector.label()];
    let rows = journals.ids().zip(&vector.values).map(|(id, &v)| {
        let value = match precision {
            Some(p) => format!("{v:.p$}"),
            None => v.to_string(),
        };
        vec![id.to_string(), value]
    });
    write_rows(std::iter::once(header).chain(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{counterexample_instance, table1_instance};

    #[test]
    fn table1_round_trip_is_byte_identical() {
        let data = table1_instance();
        let journals = write_journals_csv(data.journals());
        let matrix = write_matrix_csv(&data);
        assert!(journals.starts_with("id,name,articles_t1,articles_t2\n1,,100,100\n"));
        assert!(
            matrix.starts_with("citing\\cited,1,2,3,4,5,6,7,8\n1,1000,1000,10,10,100,100,1,1\n")
        );
        let back = load_dataset(&journals, &matrix).unwrap();
        assert_eq!(back, data);
        assert_eq!(write_journals_csv(back.journals()), journals);
        assert_eq!(write_matrix_csv(&back), matrix);
    }

    #[test]
    fn names_with_commas_are_quoted() {
        let journals = JournalSet::new(vec![
            Journal::new("a", 1.0, 2.5).with_name("Annals, Series B")
        ]);
        let text = write_journals_csv(&journals);
        assert!(text.contains("\"Annals, Series B\""));
        assert_eq!(parse_journals_csv(&text).unwrap(), journals);
    }

    #[test]
    fn header_and_shape_errors() {
        assert!(matches!(parse_journals_csv(""), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_journals_csv("id,name\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_journals_csv("id,name,articles_t1,articles_t2\nx,,abc,1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_matrix_csv("a,b\nb,1\n").is_err());
        assert!(parse_matrix_csv("citing\\cited,a,b\na,1,2\n").is_err());
        assert!(parse_matrix_csv("citing\\cited,a,b\nb,1,2\na,1,2\n").is_err());
        assert!(parse_matrix_csv("citing\\cited,a\na,1,2\n").is_err());
    }

    #[test]
    fn mismatched_ids_are_rejected() {
        let journals = "id,name,articles_t1,articles_t2\na,,1,1\nb,,1,1\n";
        let matrix = "citing\\cited,b,a\nb,1,1\na,1,1\n";
        assert!(matches!(
            load_dataset(journals, matrix),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn negative_counts_surface_as_validation_errors() {
        let journals = "id,name,articles_t1,articles_t2\na,,1,1\n";
        let matrix = "citing\\cited,a\na,-1\n";
        assert!(matches!(
            load_dataset(journals, matrix),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn partition_round_trip() {
        let (data, partition) = counterexample_instance();
        let text = write_partition_csv(data.journals(), &partition);
        assert_eq!(text, "id,field\n1,1\n2,2\n");
        assert_eq!(
            parse_partition_csv(&text, data.journals()).unwrap(),
            partition
        );
        assert!(parse_partition_csv("id,field\n1,1\n", data.journals()).is_err());
        assert!(parse_partition_csv("id,field\n1,1\n2,3\n", data.journals()).is_err());
        assert!(parse_partition_csv("id,field\n1,1\n1,2\n", data.journals()).is_err());
        // order free
        assert_eq!(
            parse_partition_csv("id,field\n2,2\n1,1\n", data.journals()).unwrap(),
            partition
        );
    }

    #[test]
    fn indicator_json_keeps_journal_order() {
        let data = table1_instance();
        let v = crate::indicators::impact_factor(&data).unwrap();
        let json =
            serde_json::to_string(&IndicatorJson::new(data.journals(), &v, Some(3))).unwrap();
        assert!(
            json.starts_with(
                r#"{"indicator":"IF","params":{},"values":{"1":44.0,"2":44.0,"3":0.44"#
            ),
            "{json}"
        );
    }

    #[test]
    fn correlations_must_lie_in_unit_interval() {
        let ok = "indicator,A,B\nA,1,0.5\nB,-0.25,1\n";
        let table = parse_correlation_csv(ok).unwrap();
        assert_eq!(table.pearson[1][0], -0.25);
        assert_eq!(table.spearman[0][1], 0.5);
        for bad in ["NaN", "1.5", "-2", "inf"] {
            let text = format!("indicator,A,B\nA,1,{bad}\nB,0,1\n");
            assert!(
                matches!(
                    parse_correlation_csv(&text),
                    Err(Error::Parse { line: 2, .. })
                ),
                "{bad}"
            );
        }
    }
}
