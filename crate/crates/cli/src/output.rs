//! CSV and JSON emission with all-or-nothing file writes.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::fmt_f64;

/// Version tag written in the first line of every CSV file.
pub const CSV_SCHEMA: &str = "nscool-csv v1";

/// Files produced by one command, written together by [`commit`].
#[derive(Default)]
pub struct Bundle {
    files: Vec<(String, Vec<u8>)>,
}

impl Bundle {
    pub fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    pub fn add_json<T: Serialize>(&mut self, name: impl Into<String>, value: &T) {
        let mut s = serde_json::to_string_pretty(value).expect("serializable");
        s.push('\n');
        self.add(name, s.into_bytes());
    }

    /// Stages every file in `dir` and only renames them into place once all
    /// of them have been written.
    pub fn commit(self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut staged = Vec::with_capacity(self.files.len());
        for (name, bytes) in &self.files {
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.as_file().sync_all()?;
            staged.push((tmp, dir.join(name)));
        }
        let mut written = Vec::with_capacity(staged.len());
        for (tmp, path) in staged {
            tmp.persist(&path).map_err(|e| e.error)?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Builds a CSV table. Numbers use the shortest round-trip representation.
pub struct Csv {
    buf: String,
    columns: usize,
}

impl Csv {
    pub fn new(kind: &str, config_hash: &str, header: &[&str]) -> Self {
        let mut buf = format!("# {CSV_SCHEMA} {kind} config={config_hash}\n");
        buf.push_str(&header.join(","));
        buf.push('\n');
        Csv { buf, columns: header.len() }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        debug_assert_eq!(cells.len(), self.columns);
        let text: Vec<String> = cells.iter().map(Cell::render).collect();
        self.buf.push_str(&text.join(","));
        self.buf.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf.into_bytes()
    }
}

pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => fmt_f64(*x),
            Cell::Num(_) => String::new(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut c = Csv::new("demo", "abc", &["a", "b"]);
        c.row(&[1.5.into(), "x,y".into()]);
        c.row(&[f64::NAN.into(), "z".into()]);
        let s = String::from_utf8(c.into_bytes()).unwrap();
        assert_eq!(s, "# nscool-csv v1 demo config=abc\na,b\n1.5,\"x,y\"\n,z\n");
    }

    #[test]
    fn commit_writes_all() {
        let dir = tempfile::tempdir().unwrap();
        let mut b = Bundle::default();
        b.add("one.txt", b"1".to_vec());
        b.add_json("two.json", &[1, 2]);
        let paths = b.commit(dir.path()).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(std::fs::read(dir.path().join("one.txt")).unwrap(), b"1");
        let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names.len(), 2);
    }
}
