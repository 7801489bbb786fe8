//! Reports: titled sections of tables whose cells carry provenance.
//! Rendered as aligned text or as JSON; both are deterministic.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Source {
    Exact,
    Numeric { tolerance: f64 },
    /// Labels and free text, not numbers.
    Text,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub value: String,
    pub provenance: Source,
}

impl Cell {
    pub fn exact(v: impl ToString) -> Self {
        Cell { value: v.to_string(), provenance: Source::Exact }
    }

    pub fn numeric(v: f64, tolerance: f64) -> Self {
        Cell { value: format!("{v:.6e}"), provenance: Source::Numeric { tolerance } }
    }

    pub fn text(v: impl ToString) -> Self {
        Cell { value: v.to_string(), provenance: Source::Text }
    }

    pub fn verdict(ok: bool) -> Self {
        Cell::text(if ok { "PASS" } else { "FAIL" })
    }

    pub fn dims(d: &[usize]) -> Self {
        let parts: Vec<String> = d.iter().map(usize::to_string).collect();
        Cell::exact(format!("({})", parts.join(",")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Section {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Section { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub sections: Vec<Section>,
    /// Present when the report includes verification checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), sections: Vec::new(), passed: None }
    }

    /// Folds a check outcome into `passed`.
    pub fn record(&mut self, ok: bool) {
        self.passed = Some(self.passed.unwrap_or(true) && ok);
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        crate::formats::to_json(self)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.title).unwrap();
        writeln!(out, "{}", "=".repeat(self.title.chars().count())).unwrap();
        for s in &self.sections {
            writeln!(out, "\n[{}]", s.name).unwrap();
            let mut widths: Vec<usize> = s.columns.iter().map(|c| c.chars().count()).collect();
            for row in &s.rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(render(cell).chars().count());
                }
            }
            let line = |cells: Vec<String>| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string()
            };
            writeln!(out, "{}", line(s.columns.clone())).unwrap();
            writeln!(out, "{}", line(widths.iter().map(|w| "-".repeat(*w)).collect())).unwrap();
            for row in &s.rows {
                writeln!(out, "{}", line(row.iter().map(render).collect())).unwrap();
            }
        }
        if let Some(p) = self.passed {
            writeln!(out, "\nstatus: {}", if p { "PASS" } else { "FAIL" }).unwrap();
        }
        out
    }
}

fn render(cell: &Cell) -> String {
    match cell.provenance {
        Source::Numeric { tolerance } => format!("{} ±{tolerance:.0e}", cell.value),
        _ => cell.value.clone(),
    }
}
