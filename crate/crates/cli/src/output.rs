use clap::ValueEnum;
use mahlerlab::mahler::WnRecord;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Jsonl,
    Table,
}

pub fn record(r: &WnRecord) -> Value {
    serde_json::to_value(r.to_line()).expect("serializable")
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn table(values: &[Value]) -> String {
    let Some(Value::Object(first)) = values.first() else {
        return String::new();
    };
    let keys: Vec<&String> = first.keys().collect();
    let rows: Vec<Vec<String>> = values
        .iter()
        .map(|v| keys.iter().map(|k| cell(v.get(k.as_str()).unwrap_or(&Value::Null))).collect())
        .collect();
    let widths: Vec<usize> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0).max(k.len()))
        .collect();
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(keys.iter().map(|k| k.to_string()).collect());
    for r in rows {
        out += &line(r);
    }
    out
}

pub fn render(values: &[Value], format: Format, single: bool) -> String {
    match format {
        Format::Json if single && values.len() == 1 => {
            serde_json::to_string_pretty(&values[0]).expect("serializable") + "\n"
        }
        Format::Json => serde_json::to_string_pretty(values).expect("serializable") + "\n",
        Format::Jsonl => values
            .iter()
            .map(|v| serde_json::to_string(v).expect("serializable") + "\n")
            .collect(),
        Format::Table => table(values),
    }
}
