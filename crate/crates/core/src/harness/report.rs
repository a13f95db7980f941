//! Run output files: records.jsonl, table.json, table.txt, stats.json.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{
    aggregate_tables, improvement_stats, HarnessError, ImprovementStats, ResultTable, RunRecord,
};
use crate::datasets::DatasetKind;
use crate::prompts::PromptStrategy;

pub struct RunOutputs {
    pub records: PathBuf,
    pub table_json: PathBuf,
    pub table_txt: PathBuf,
    pub stats_json: PathBuf,
}

fn write_file(path: &Path, content: &str) -> Result<(), HarnessError> {
    std::fs::write(path, content).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Render one dataset's table as aligned plain text: strategies as rows,
/// languages as columns, the row average last.
pub fn render_table_text(dataset: DatasetKind, table: &ResultTable) -> String {
    let name_width = table
        .rows
        .iter()
        .map(|r| r.display.len())
        .chain(["Strategy".len()])
        .max()
        .unwrap_or(8);
    let col_width = |header: &str| header.len().max(8);

    let mut out = String::new();
    let _ = writeln!(out, "# {dataset}");
    let _ = write!(out, "{:<name_width$}", "Strategy");
    for language in &table.languages {
        let _ = write!(out, "  {:>width$}", language, width = col_width(language));
    }
    let _ = writeln!(out, "  {:>8}", "Average");
    for row in &table.rows {
        let _ = write!(out, "{:<name_width$}", row.display);
        for language in &table.languages {
            let _ = write!(
                out,
                "  {:>width$.2}",
                row.cells[language],
                width = col_width(language)
            );
        }
        let _ = writeln!(out, "  {:>8.2}", row.average);
    }
    out
}

/// Improvement statistics of every non-baseline strategy against standard
/// prompting, per dataset. Datasets without a standard row are skipped.
pub fn improvement_stats_vs_standard(
    tables: &BTreeMap<DatasetKind, ResultTable>,
) -> Result<BTreeMap<DatasetKind, BTreeMap<PromptStrategy, ImprovementStats>>, HarnessError> {
    let mut out = BTreeMap::new();
    for (&dataset, table) in tables {
        let baseline = match table
            .rows
            .iter()
            .find(|r| r.strategy == PromptStrategy::Standard)
        {
            Some(row) => &row.cells,
            None => continue,
        };
        let mut per_strategy = BTreeMap::new();
        for row in &table.rows {
            if row.strategy == PromptStrategy::Standard {
                continue;
            }
            per_strategy.insert(row.strategy, improvement_stats(baseline, &row.cells)?);
        }
        if !per_strategy.is_empty() {
            out.insert(dataset, per_strategy);
        }
    }
    Ok(out)
}

/// Write the four run outputs into `out_dir`, creating it if needed.
pub fn write_run_outputs(
    out_dir: &Path,
    records: &[RunRecord],
) -> Result<RunOutputs, HarnessError> {
    std::fs::create_dir_all(out_dir).map_err(|source| HarnessError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;

    let mut records_jsonl = String::new();
    for record in records {
        records_jsonl.push_str(
            &serde_json::to_string(record).expect("run record serializes"),
        );
        records_jsonl.push('\n');
    }

    let tables = aggregate_tables(records)?;
    let table_json = format!(
        "{}\n",
        serde_json::to_string_pretty(&tables).expect("tables serialize")
    );

    let mut table_txt = String::new();
    for (i, (&dataset, table)) in tables.iter().enumerate() {
        if i > 0 {
            table_txt.push('\n');
        }
        table_txt.push_str(&render_table_text(dataset, table));
    }

    let stats = improvement_stats_vs_standard(&tables)?;
    let stats_json = format!(
        "{}\n",
        serde_json::to_string_pretty(&stats).expect("stats serialize")
    );

    let outputs = RunOutputs {
        records: out_dir.join("records.jsonl"),
        table_json: out_dir.join("table.json"),
        table_txt: out_dir.join("table.txt"),
        stats_json: out_dir.join("stats.json"),
    };
    write_file(&outputs.records, &records_jsonl)?;
    write_file(&outputs.table_json, &table_json)?;
    write_file(&outputs.table_txt, &table_txt)?;
    write_file(&outputs.stats_json, &stats_json)?;
    Ok(outputs)
}
