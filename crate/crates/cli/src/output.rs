use serde_json::Value;

use crate::Format;

fn tsv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Print a JSON value; TSV flattens the top level to key/value lines.
pub fn emit(v: &Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).expect("serializable")),
        Format::Tsv | Format::Text => match v {
            Value::Object(map) => {
                for (k, x) in map {
                    println!("{k}\t{}", tsv_cell(x));
                }
            }
            other => println!("{}", tsv_cell(other)),
        },
    }
}
