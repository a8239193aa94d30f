use std::path::Path;

use clap::ValueEnum;

use puzzlemaker_core::analytics::{read_log, tally, Dimension, FrequencyTable};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Csv,
    Json,
}

pub struct Report {
    pub table: FrequencyTable,
    pub malformed: usize,
}

pub fn build_report(log: &Path, dimension: Dimension) -> Result<Report, CliError> {
    let contents = read_log(log)
        .map_err(|e| CliError::Usage(format!("cannot read log {}: {e}", log.display())))?;
    Ok(Report { table: tally(&contents.records, dimension), malformed: contents.malformed })
}

pub fn render(table: &FrequencyTable, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(table).expect("table serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["label", "count"]).expect("in-memory write");
            for row in &table.rows {
                w.write_record([row.label.as_str(), &row.count.to_string()]).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 labels")
        }
        ReportFormat::Text => {
            let heading = match table.dimension {
                Dimension::Contexts => "Context",
                Dimension::Concepts => "Programming concept",
            };
            let width = table
                .rows
                .iter()
                .map(|r| r.label.chars().count())
                .chain([heading.len()])
                .max()
                .unwrap_or(0);
            let mut out = format!("{heading:<width$}  Number of questions\n");
            for row in &table.rows {
                out.push_str(&format!("{:<width$}  {}\n", row.label, row.count));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use puzzlemaker_core::analytics::FrequencyRow;

    fn table() -> FrequencyTable {
        FrequencyTable {
            dimension: Dimension::Concepts,
            rows: vec![
                FrequencyRow { label: "Loops".into(), count: 3 },
                FrequencyRow { label: "Selection statements (if/else, etc.)".into(), count: 1 },
            ],
        }
    }

    #[test]
    fn csv_quotes_commas() {
        assert_eq!(
            render(&table(), ReportFormat::Csv),
            "label,count\nLoops,3\n\"Selection statements (if/else, etc.)\",1\n"
        );
    }

    #[test]
    fn text_aligns_columns() {
        let text = render(&table(), ReportFormat::Text);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("Loops "));
        assert!(lines[1].ends_with("  3"));
        assert_eq!(lines[1].len(), lines[2].len());
    }

    #[test]
    fn json_round_trips() {
        let back: FrequencyTable = serde_json::from_str(&render(&table(), ReportFormat::Json)).unwrap();
        assert_eq!(back, table());
    }
}
