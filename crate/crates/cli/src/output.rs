use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    /// One JSON object per line.
    Json,
}

/// Writes each record either as a text line or as one JSON line tagged
/// with its record kind.
pub struct Out {
    format: Format,
    sink: Box<dyn Write>,
}

impl Out {
    pub fn stdout(format: Format) -> Self {
        Out {
            format,
            sink: Box::new(std::io::stdout().lock()),
        }
    }

    pub fn record(&mut self, kind: &str, fields: Value, text: impl AsRef<str>) {
        let line = match self.format {
            Format::Text => text.as_ref().to_string(),
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("record".into(), Value::String(kind.into()));
                if let Value::Object(rest) = fields {
                    obj.extend(rest);
                }
                Value::Object(obj).to_string()
            }
        };
        // A closed pipe is not worth a panic.
        let _ = writeln!(self.sink, "{line}");
    }
}
