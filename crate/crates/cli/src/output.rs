//! Row emitter shared by every subcommand.
//!
//! Counts are always written as decimal strings in structured formats.

use std::io::{self, Write};
use std::time::Duration;

use clap::ValueEnum;
use num_bigint::BigUint;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Aligned columns.
    Human,
    /// One JSON object per line.
    Jsonl,
    /// Comma-separated values with a header row.
    Csv,
}

#[derive(Clone, Debug)]
pub enum Cell {
    Text(String),
    Int(u64),
    Bool(bool),
    Count(BigUint),
    /// A tuple of positions; rendered `(a,b,c)` for humans.
    Tuple(Vec<usize>),
    /// Named integer parameters.
    Params(Vec<(String, u64)>),
    /// A duration in milliseconds.
    Millis(Duration),
    Empty,
}

impl Cell {
    fn plain(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Count(c) => c.to_string(),
            Cell::Tuple(t) => t.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
            Cell::Params(p) => p
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(","),
            Cell::Millis(d) => format!("{:.3}", d.as_secs_f64() * 1e3),
            Cell::Empty => String::new(),
        }
    }

    fn human(&self) -> String {
        match self {
            Cell::Tuple(_) => format!("({})", self.plain()),
            Cell::Empty => "-".into(),
            _ => self.plain(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Count(c) => Value::String(c.to_string()),
            Cell::Tuple(t) => Value::from(t.clone()),
            Cell::Params(p) => Value::Object(
                p.iter()
                    .map(|(k, v)| (k.clone(), Value::from(*v)))
                    .collect(),
            ),
            Cell::Millis(d) => Value::from(d.as_secs_f64() * 1e3),
            Cell::Empty => Value::Null,
        }
    }
}

enum Sink<W: Write> {
    /// Rows are buffered until widths are known, unless widths were fixed
    /// up front.
    Human {
        out: W,
        widths: Vec<usize>,
        fixed: bool,
        pending: Vec<Vec<String>>,
    },
    Jsonl(W),
    Csv(Box<csv::Writer<W>>),
}

pub struct Emitter<W: Write> {
    columns: Vec<&'static str>,
    sink: Sink<W>,
}

impl<W: Write> Emitter<W> {
    pub fn new(format: OutputFormat, columns: &[&'static str], out: W) -> io::Result<Self> {
        let widths = columns.iter().map(|c| c.len()).collect();
        Self::build(format, columns, out, widths, false)
    }

    /// A streaming emitter; human columns are padded to at least `widths`.
    pub fn streaming(
        format: OutputFormat,
        columns: &[&'static str],
        widths: &[usize],
        out: W,
    ) -> io::Result<Self> {
        let widths = columns
            .iter()
            .zip(widths)
            .map(|(c, &w)| c.len().max(w))
            .collect();
        Self::build(format, columns, out, widths, true)
    }

    fn build(
        format: OutputFormat,
        columns: &[&'static str],
        out: W,
        widths: Vec<usize>,
        fixed: bool,
    ) -> io::Result<Self> {
        let mut sink = match format {
            OutputFormat::Human => Sink::Human {
                out,
                widths,
                fixed,
                pending: Vec::new(),
            },
            OutputFormat::Jsonl => Sink::Jsonl(out),
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(columns)?;
                Sink::Csv(Box::new(w))
            }
        };
        if let Sink::Human {
            out,
            widths,
            fixed: true,
            ..
        } = &mut sink
        {
            let header: Vec<String> = columns.iter().map(|c| c.to_string()).collect();
            write_aligned(out, widths, &header)?;
        }
        Ok(Self {
            columns: columns.to_vec(),
            sink,
        })
    }

    pub fn row(&mut self, cells: &[Cell]) -> io::Result<()> {
        debug_assert_eq!(cells.len(), self.columns.len());
        match &mut self.sink {
            Sink::Human {
                out,
                widths,
                fixed,
                pending,
            } => {
                let rendered: Vec<String> = cells.iter().map(Cell::human).collect();
                if *fixed {
                    write_aligned(out, widths, &rendered)
                } else {
                    for (w, s) in widths.iter_mut().zip(&rendered) {
                        *w = (*w).max(s.chars().count());
                    }
                    pending.push(rendered);
                    Ok(())
                }
            }
            Sink::Jsonl(out) => {
                let object: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(cells)
                    .map(|(c, cell)| (c.to_string(), cell.json()))
                    .collect();
                serde_json::to_writer(&mut *out, &object)?;
                out.write_all(b"\n")
            }
            Sink::Csv(w) => Ok(w.write_record(cells.iter().map(Cell::plain))?),
        }
    }

    /// Flushes buffered rows and returns the underlying writer.
    pub fn finish(self) -> io::Result<W> {
        match self.sink {
            Sink::Human {
                mut out,
                widths,
                fixed,
                pending,
            } => {
                if !fixed {
                    let header: Vec<String> = self.columns.iter().map(|c| c.to_string()).collect();
                    write_aligned(&mut out, &widths, &header)?;
                    for row in &pending {
                        write_aligned(&mut out, &widths, row)?;
                    }
                }
                out.flush()?;
                Ok(out)
            }
            Sink::Jsonl(mut out) => {
                out.flush()?;
                Ok(out)
            }
            Sink::Csv(w) => w.into_inner().map_err(|e| e.into_error()),
        }
    }
}

fn write_aligned<W: Write>(out: &mut W, widths: &[usize], cells: &[String]) -> io::Result<()> {
    let mut line = String::new();
    for (idx, (cell, &w)) in cells.iter().zip(widths).enumerate() {
        if idx > 0 {
            line.push_str("  ");
        }
        if idx + 1 == cells.len() {
            line.push_str(cell);
        } else {
            line.push_str(&format!("{cell:<w$}"));
        }
    }
    writeln!(out, "{}", line.trim_end())
}
