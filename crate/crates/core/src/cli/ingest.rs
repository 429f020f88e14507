use std::path::Path;

use crate::error::{Error, Result};
use crate::linkio::{parse_input, LinkDiagram};

pub const KNOTS_CSV: &str = include_str!("../../../../data/knots-upto-9.csv");
pub const LINKS_CSV: &str = include_str!("../../../../data/links-upto-9.csv");
pub const REIDEMEISTER_CSV: &str = include_str!("../../../../data/reidemeister-pairs.csv");

#[derive(Clone, Debug)]
pub struct NamedDiagram {
    pub name: String,
    pub input: String,
    pub diagram: LinkDiagram,
    /// 1-based line in the source table; 0 for inline input.
    pub line: u64,
}

/// Two diagrams of the same link.
#[derive(Clone, Debug)]
pub struct DiagramPair {
    pub name: String,
    pub left: NamedDiagram,
    pub right: NamedDiagram,
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowError {
    pub line: u64,
    pub name: String,
    pub error: Error,
}

impl std::fmt::Display for RowError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}: [{}] {}", self.line, self.name, self.error.code(), self.error)
    }
}

/// Parsed rows; rows that fail to parse are reported, not fatal.
#[derive(Clone, Debug)]
pub struct Ingest<T> {
    pub rows: Vec<T>,
    pub errors: Vec<RowError>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.display().to_string()),
        _ => Error::Io(format!("{}: {e}", path.display())),
    })
}

fn records(text: &str, header: &[&str]) -> Result<Vec<(u64, csv::StringRecord)>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_reader(text.as_bytes());
    let found: Vec<String> = rdr.headers().map_err(|e| Error::BadInput(e.to_string()))?.iter().map(str::to_owned).collect();
    if found != header {
        return Err(Error::BadInput(format!("expected header {}, found {}", header.join(","), found.join(","))));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::BadInput(e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        out.push((line, rec));
    }
    Ok(out)
}

fn diagram(name: &str, input: &str, line: u64) -> std::result::Result<NamedDiagram, RowError> {
    parse_input(input)
        .map(|diagram| NamedDiagram { name: name.to_owned(), input: input.to_owned(), diagram, line })
        .map_err(|error| RowError { line, name: name.to_owned(), error })
}

/// Rows must have exactly the header's width; inputs containing commas
/// must be quoted.
fn check_width(rec: &csv::StringRecord, width: usize, line: u64) -> std::result::Result<(), RowError> {
    if rec.len() == width {
        return Ok(());
    }
    Err(RowError {
        line,
        name: rec.get(0).unwrap_or("").to_owned(),
        error: Error::BadInput(format!("expected {width} columns, found {} (quote inputs containing commas)", rec.len())),
    })
}

/// Rows of a `name,input` table.
pub fn ingest_table_str(text: &str) -> Result<Ingest<NamedDiagram>> {
    let mut ingest = Ingest { rows: Vec::new(), errors: Vec::new() };
    for (line, rec) in records(text, &["name", "input"])? {
        match check_width(&rec, 2, line).and_then(|()| diagram(&rec[0], &rec[1], line)) {
            Ok(d) => ingest.rows.push(d),
            Err(e) => ingest.errors.push(e),
        }
    }
    Ok(ingest)
}

pub fn ingest_table(path: &Path) -> Result<Ingest<NamedDiagram>> {
    ingest_table_str(&read(path)?)
}

/// Rows of a `name,left,right,move` table.
pub fn ingest_pairs_str(text: &str) -> Result<Ingest<DiagramPair>> {
    let mut ingest = Ingest { rows: Vec::new(), errors: Vec::new() };
    for (line, rec) in records(text, &["name", "left", "right", "move"])? {
        let row = check_width(&rec, 4, line).and_then(|()| {
            Ok(DiagramPair {
                name: rec[0].to_owned(),
                left: diagram(&rec[0], &rec[1], line)?,
                right: diagram(&rec[0], &rec[2], line)?,
                kind: rec[3].to_owned(),
            })
        });
        match row {
            Ok(p) => ingest.rows.push(p),
            Err(e) => ingest.errors.push(e),
        }
    }
    Ok(ingest)
}

pub fn ingest_pairs(path: &Path) -> Result<Ingest<DiagramPair>> {
    ingest_pairs_str(&read(path)?)
}

/// Whether a table's header names the pair schema.
pub fn is_pair_table(text: &str) -> bool {
    text.lines().next().is_some_and(|h| h.split(',').map(str::trim).eq(["name", "left", "right", "move"]))
}
