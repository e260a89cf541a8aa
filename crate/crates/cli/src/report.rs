use crate::config::{ExperimentConfig, OutputFormat};
use crate::CliError;
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub version: &'static str,
    pub seed: u64,
    pub methods: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: ExperimentConfig,
    /// False when the experiment ran but its check failed.
    pub ok: bool,
    pub results: Value,
    pub tables: Vec<Table>,
    pub provenance: Provenance,
}

impl Report {
    pub fn new(cfg: &ExperimentConfig, results: Value) -> Self {
        let tolerances = BTreeMap::new();
        Report {
            command: cfg.clone(),
            ok: true,
            results,
            tables: Vec::new(),
            provenance: Provenance {
                version: env!("CARGO_PKG_VERSION"),
                seed: cfg.seed,
                methods: Vec::new(),
                tolerances,
                notes: Vec::new(),
                wall_time_ms: None,
            },
        }
    }

    pub fn method(mut self, tag: &str) -> Self {
        self.provenance.methods.push(tag.into());
        self
    }

    pub fn tolerance(mut self, name: &str, value: f64) -> Self {
        self.provenance.tolerances.insert(name.into(), value);
        self
    }

    pub fn note(mut self, text: &str) -> Self {
        self.provenance.notes.push(text.into());
        self
    }

    pub fn table(mut self, t: Table) -> Self {
        self.tables.push(t);
        self
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, CliError> {
        match format {
            OutputFormat::Json => {
                serde_json::to_string_pretty(self).map(|s| s + "\n").map_err(|e| CliError::Core(e.to_string()))
            }
            OutputFormat::Csv => self.render_csv(),
        }
    }

    /// One CSV block per table, each preceded by a `# name` line; a report
    /// without tables yields its flattened results.
    fn render_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        let summary = self.summary_table();
        let tables = std::iter::once(&summary).chain(&self.tables);
        for t in tables {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&t.columns).map_err(|e| CliError::Core(e.to_string()))?;
            for row in &t.rows {
                w.write_record(row.iter().map(cell)).map_err(|e| CliError::Core(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Core(e.to_string()))?;
            out.push_str(&format!("# {}\n", t.name));
            out.push_str(&String::from_utf8(bytes).expect("csv writes utf-8"));
        }
        Ok(out)
    }

    fn summary_table(&self) -> Table {
        let mut t = Table::new("summary", &["key", "value"]);
        t.push(vec!["ok".into(), self.ok.into()]);
        if let Value::Object(map) = &self.results {
            for (k, v) in map {
                if !v.is_array() && !v.is_object() {
                    t.push(vec![k.clone().into(), v.clone()]);
                }
            }
        }
        t
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
