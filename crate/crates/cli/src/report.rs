use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// A file the command produced: written next to `--out` or inlined.
struct Artifact {
    extension: &'static str,
    contents: String,
}

/// Ordered key/value report. Rendering is a pure function of the fields, so
/// identical runs print identical bytes.
pub struct Report {
    fields: Map<String, Value>,
    artifacts: Vec<Artifact>,
    failed: bool,
}

impl Report {
    pub fn new(command: &str) -> Report {
        let mut fields = Map::new();
        fields.insert("schema".into(), json!(SCHEMA));
        fields.insert("command".into(), json!(command));
        Report {
            fields,
            artifacts: Vec::new(),
            failed: false,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report values serialize");
        self.fields.insert(key.into(), value);
    }

    pub fn artifact(&mut self, extension: &'static str, contents: String) {
        self.artifacts.push(Artifact {
            extension,
            contents,
        });
    }

    pub fn fail(&mut self) {
        self.failed = true;
    }

    pub fn failed(&self) -> bool {
        self.failed
    }

    fn finish(&mut self, out: Option<&Path>) -> Result<()> {
        let status = if self.failed { "failed" } else { "ok" };
        self.fields.insert("status".into(), json!(status));
        let Some(prefix) = out else {
            if !self.artifacts.is_empty() {
                let inline: Map<String, Value> = self
                    .artifacts
                    .iter()
                    .map(|a| (a.extension.to_string(), json!(a.contents)))
                    .collect();
                self.fields.insert("files".into(), Value::Object(inline));
            }
            return Ok(());
        };
        let mut written = Map::new();
        for a in &self.artifacts {
            let path = with_extension(prefix, a.extension);
            fs::write(&path, &a.contents).with_context(|| format!("writing {}", path.display()))?;
            written.insert(a.extension.into(), json!(path.display().to_string()));
        }
        let path = with_extension(prefix, "json");
        written.insert("json".into(), json!(path.display().to_string()));
        self.fields.insert("files".into(), Value::Object(written));
        fs::write(&path, self.to_json()).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.fields).expect("report serializes");
        s.push('\n');
        s
    }

    fn to_text(&self, inline_files: bool) -> String {
        let mut out = String::new();
        for (key, value) in &self.fields {
            if inline_files && key == "files" {
                continue;
            }
            flatten(&mut out, key, value);
        }
        if inline_files {
            for a in &self.artifacts {
                writeln!(out, "--- {} ---", a.extension).unwrap();
                out.push_str(&a.contents);
            }
        }
        out
    }

    /// Writes any artifacts, then returns what goes to stdout.
    pub fn render(mut self, format: Format, out: Option<&Path>) -> Result<String> {
        self.finish(out)?;
        Ok(match format {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(out.is_none()),
        })
    }
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// Objects become dotted keys; everything else prints on one line.
fn flatten(out: &mut String, key: &str, value: &Value) {
    match value {
        Value::Object(map) if !map.is_empty() => {
            for (k, v) in map {
                flatten(out, &format!("{key}.{k}"), v);
            }
        }
        Value::String(s) => writeln!(out, "{key} = {s}").unwrap(),
        other => writeln!(out, "{key} = {other}").unwrap(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_flattens_objects() {
        let mut r = Report::new("bound");
        r.set("params", json!({"n": 8, "k": 4}));
        r.set("sets", vec![vec![1, 2], vec![3]]);
        r.set("label", "optimal");
        let text = r.render(Format::Text, None).unwrap();
        assert_eq!(
            text,
            "schema = 1\ncommand = bound\nparams.n = 8\nparams.k = 4\n\
             sets = [[1,2],[3]]\nlabel = optimal\nstatus = ok\n"
        );
    }

    #[test]
    fn json_inlines_files_without_prefix() {
        let mut r = Report::new("x");
        r.artifact("code", "LRC1 q=2 n=1 k=1\n1\n".into());
        let v: Value = serde_json::from_str(&r.render(Format::Json, None).unwrap()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["files"]["code"], "LRC1 q=2 n=1 k=1\n1\n");
    }
}
