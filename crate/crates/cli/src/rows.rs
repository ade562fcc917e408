//! Tabular report assembly: one schema per subcommand, emitted as CSV (with
//! a single timestamped comment line) or as a JSON array of row objects.
//! Intervals are always two columns (lo, hi), never a midpoint, so plots can
//! show certification width honestly.

use std::io::Write;

#[derive(Debug, Clone)]
pub enum Cell {
    Int(u64),
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => fmt_num(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => serde_json::json!(v),
            Cell::Num(v) => serde_json::json!(v),
            Cell::Text(s) => serde_json::json!(s),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

/// 12 significant digits, scientific; reparses within emission precision.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.11e}")
}

#[derive(Debug)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV with a `#` comment header line carrying the only timestamp in the
    /// output, then the header row and data rows.
    pub fn write_csv(
        &self,
        out: &mut dyn Write,
        command: &str,
        generated_at: u64,
    ) -> std::io::Result<()> {
        writeln!(
            out,
            "# bohr v{} command={command} generated_at={generated_at}",
            env!("CARGO_PKG_VERSION")
        )?;
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    /// JSON array of row objects (no timestamp: byte-deterministic).
    pub fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let map: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| (c.to_string(), cell.json()))
                    .collect();
                serde_json::Value::Object(map)
            })
            .collect();
        let text = serde_json::to_string_pretty(&rows).expect("rows serialize");
        writeln!(out, "{text}")
    }
}
