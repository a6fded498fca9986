//! Reports rendered either as `key: value` text or as a JSON object with
//! the same keys and values.

use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Field {
    Text(String),
    Bool(bool),
    List(Vec<String>),
}

/// Whether the command reached a verdict; drives the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Decided,
    Undecided,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Decided => 0,
            Status::Undecided => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub fields: Vec<(String, Field)>,
    pub status: Status,
}

impl Default for Report {
    fn default() -> Self {
        Report {
            fields: Vec::new(),
            status: Status::Decided,
        }
    }
}

impl Report {
    pub fn text(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.fields.push((key.into(), Field::Text(value.to_string())));
        self
    }

    pub fn flag(&mut self, key: &str, value: bool) -> &mut Self {
        self.fields.push((key.into(), Field::Bool(value)));
        self
    }

    pub fn list<T: ToString>(&mut self, key: &str, items: impl IntoIterator<Item = T>) -> &mut Self {
        self.fields.push((key.into(), Field::List(items.into_iter().map(|t| t.to_string()).collect())));
        self
    }

    pub fn undecided(&mut self) -> &mut Self {
        self.status = Status::Undecided;
        self
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, f)| f)
    }

    pub fn plain(&self) -> String {
        let mut out = String::new();
        for (key, field) in &self.fields {
            match field {
                Field::Text(t) => out.push_str(&format!("{key}: {t}\n")),
                Field::Bool(b) => out.push_str(&format!("{key}: {}\n", if *b { "yes" } else { "no" })),
                Field::List(items) if items.is_empty() => out.push_str(&format!("{key}: (none)\n")),
                Field::List(items) => {
                    out.push_str(&format!("{key}:\n"));
                    for item in items {
                        out.push_str(&format!("  - {item}\n"));
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (key, field) in &self.fields {
            let v = match field {
                Field::Text(t) => Value::String(t.clone()),
                Field::Bool(b) => Value::Bool(*b),
                Field::List(items) => Value::Array(items.iter().cloned().map(Value::String).collect()),
            };
            map.insert(key.clone(), v);
        }
        map.insert("decided".into(), Value::Bool(self.status == Status::Decided));
        Value::Object(map)
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("reports serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_both_forms() {
        let mut r = Report::default();
        r.text("type", "VI").flag("injective", true).list("generators", ["(a1, 1)"]).list("empty", Vec::<String>::new());
        assert_eq!(r.plain(), "type: VI\ninjective: yes\ngenerators:\n  - (a1, 1)\nempty: (none)\n");
        let j = r.to_json();
        assert_eq!(j["type"], "VI");
        assert_eq!(j["generators"][0], "(a1, 1)");
        assert_eq!(j["decided"], true);
    }
}
