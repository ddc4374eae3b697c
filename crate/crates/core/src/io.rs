//! Text formats: prediction lists and chain CSV files.

use std::io::{Read, Write};
use std::path::Path;

use crate::chains::ChainSet;
use crate::error::{Error, Result};
use crate::model::{CrossTab, ModelVariant};

/// Optional first line of a prediction file.
pub const PREDICTION_HEADER: &str = "prediction";

/// A parsed prediction list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predictions {
    pub has_header: bool,
    /// `(line number, prediction)` for every non-blank data line.
    pub values: Vec<(usize, bool)>,
}

/// Parse newline-delimited `0`/`1` predictions. Blank lines are ignored and
/// a first non-blank line reading `prediction` is reported as a header.
pub fn parse_predictions(text: &str) -> Result<Predictions> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut has_header = false;
    let mut values = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let token = raw.trim();
        if token.is_empty() {
            continue;
        }
        let first = !seen_content;
        seen_content = true;
        match token {
            "1" => values.push((line, true)),
            "0" => values.push((line, false)),
            PREDICTION_HEADER if first => has_header = true,
            other => {
                let shown: String = other.chars().take(32).collect();
                return Err(Error::Parse {
                    line,
                    message: format!("expected 0 or 1, found {shown:?}"),
                });
            }
        }
    }
    Ok(Predictions { has_header, values })
}

/// Cross-tabulate two prediction lists over the same items.
pub fn crosstab_from_text(text_a: &str, text_b: &str) -> Result<CrossTab> {
    let a = parse_predictions(text_a)?;
    let b = parse_predictions(text_b)?;
    if a.has_header != b.has_header {
        let (which, p) = if a.has_header { ("B", &b) } else { ("A", &a) };
        let line = p.values.first().map_or(1, |v| v.0);
        return Err(Error::Parse {
            line,
            message: format!(
                "the {PREDICTION_HEADER:?} header must appear in both files or neither; file {which} lacks it"
            ),
        });
    }
    if a.values.len() != b.values.len() {
        return Err(Error::LengthMismatch { len_a: a.values.len(), len_b: b.values.len() });
    }
    let mut tab = CrossTab::default();
    for (&(_, pa), &(_, pb)) in a.values.iter().zip(&b.values) {
        match (pa, pb) {
            (true, true) => tab.y1 += 1,
            (true, false) => tab.y2 += 1,
            (false, true) => tab.y3 += 1,
            (false, false) => tab.y4 += 1,
        }
    }
    Ok(tab)
}

pub fn crosstab(file_a: &Path, file_b: &Path) -> Result<CrossTab> {
    let a = std::fs::read_to_string(file_a)?;
    let b = std::fs::read_to_string(file_b)?;
    crosstab_from_text(&a, &b)
}

/// Write kept draws as CSV: `chain,iteration` followed by every quantity.
/// Floats use the shortest representation that round-trips exactly.
pub fn write_chain_csv<W: Write>(chains: &ChainSet, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["chain", "iteration"];
    header.extend(chains.names().iter().map(String::as_str));
    w.write_record(&header)?;

    let cols: Vec<&[f64]> = chains.columns().map(|(_, c)| c).collect();
    let mut record = Vec::with_capacity(header.len());
    for row in 0..chains.len() {
        record.clear();
        record.push(chains.chain_labels()[row].to_string());
        record.push(chains.iterations()[row].to_string());
        record.extend(cols.iter().map(|c| c[row].to_string()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Read a chain CSV written by [`write_chain_csv`]. The model variant is
/// inferred from the presence of a `pi_beta` column.
pub fn read_chain_csv<R: Read>(input: R) -> Result<ChainSet> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header.len() < 2 || header[0] != "chain" || header[1] != "iteration" {
        return Err(Error::Parse {
            line: 1,
            message: "header must start with chain,iteration".into(),
        });
    }
    let names = &header[2..];
    let variant = if names.iter().any(|n| n == "pi_beta") {
        ModelVariant::TwoDatasets
    } else {
        ModelVariant::OneDataset
    };
    for required in variant.param_names() {
        if !names.iter().any(|n| n == required) {
            return Err(Error::Parse { line: 1, message: format!("missing column {required}") });
        }
    }

    let mut chain = Vec::new();
    let mut iteration = Vec::new();
    let mut cols = vec![Vec::new(); names.len()];
    for (i, record) in rdr.records().enumerate() {
        let line = i + 2;
        let record = record?;
        if record.len() != header.len() {
            return Err(Error::Parse {
                line,
                message: format!("{} fields, expected {}", record.len(), header.len()),
            });
        }
        let parse_int = |field: &str, what: &str| -> Result<u64> {
            field.trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("{what} {field:?} is not a non-negative integer"),
            })
        };
        let c = parse_int(&record[0], "chain")?;
        let c = usize::try_from(c).map_err(|_| Error::Parse { line, message: "chain index too large".into() })?;
        if chain.last().is_some_and(|&prev| c < prev) {
            return Err(Error::Parse { line, message: "rows must be grouped by ascending chain".into() });
        }
        chain.push(c);
        iteration.push(parse_int(&record[1], "iteration")?);
        for (j, field) in record.iter().skip(2).enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("{} value {field:?} is not a number", names[j]),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse { line, message: format!("{} value is not finite", names[j]) });
            }
            cols[j].push(v);
        }
    }

    let mut set = ChainSet::new(variant, chain, iteration)?;
    for (name, col) in names.iter().zip(cols) {
        set.push_column(name.clone(), col).map_err(|e| Error::Parse { line: 1, message: e.to_string() })?;
    }
    Ok(set)
}
