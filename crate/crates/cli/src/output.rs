//! Writing reports: JSON payload, optional CSV table and gnuplot script,
//! and the timestamped sidecar log.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;

/// A series table: header plus rows of already-formatted cells.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Draw the y axis on a log scale in the gnuplot script.
    pub log_y: bool,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            log_y: false,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn gnuplot(&self, csv: &Path, title: &str) -> String {
        let mut s = String::new();
        s.push_str("set datafile separator ','\n");
        s.push_str("set key autotitle columnhead\n");
        s.push_str(&format!("set title \"{}\"\n", title.replace('"', "'")));
        s.push_str(&format!("set xlabel \"{}\"\n", self.header[0]));
        if self.log_y {
            s.push_str("set logscale y\n");
        }
        let file = csv.display().to_string().replace('\'', "");
        let plots: Vec<String> = (2..=self.header.len())
            .map(|col| {
                let src = if col == 2 {
                    format!("'{file}'")
                } else {
                    "''".into()
                };
                format!("{src} using 1:{col} with linespoints")
            })
            .collect();
        s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
        s
    }
}

pub struct Sink {
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub gnuplot: Option<PathBuf>,
}

impl Sink {
    /// Writes the JSON payload to `--out` or stdout.
    pub fn json<T: Serialize>(&self, report: &T) -> Result<()> {
        let text = to_json(report)?;
        match &self.out {
            Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    pub fn table(&self, table: Option<&Table>, title: &str) -> Result<()> {
        let Some(table) = table else {
            if self.csv.is_some() || self.gnuplot.is_some() {
                eprintln!("note: this command produces no series table; --csv/--gnuplot ignored");
            }
            return Ok(());
        };
        if let Some(p) = &self.csv {
            fs::write(p, table.to_csv()).with_context(|| format!("writing {}", p.display()))?;
        }
        if let Some(g) = &self.gnuplot {
            let csv = self
                .csv
                .clone()
                .context("--gnuplot needs --csv for the data file")?;
            fs::write(g, table.gnuplot(&csv, title))
                .with_context(|| format!("writing {}", g.display()))?;
        }
        Ok(())
    }
}

pub fn to_json<T: Serialize>(report: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

fn unix(t: SystemTime) -> f64 {
    t.duration_since(UNIX_EPOCH)
        .unwrap_or(Duration::ZERO)
        .as_secs_f64()
}

/// `<out>.log` next to the JSON file.
pub fn write_sidecar(
    out: &Path,
    argv: &[String],
    threads: usize,
    started: SystemTime,
    exit_code: i32,
) -> Result<()> {
    let finished = SystemTime::now();
    let elapsed = finished.duration_since(started).unwrap_or(Duration::ZERO);
    let mut path = out.as_os_str().to_owned();
    path.push(".log");
    let text = format!(
        "argv: {}\nthreads: {threads}\nstarted_unix: {:.3}\nfinished_unix: {:.3}\nelapsed_s: {:.3}\nexit_code: {exit_code}\n",
        argv.join(" "),
        unix(started),
        unix(finished),
        elapsed.as_secs_f64(),
    );
    fs::write(&path, text).with_context(|| format!("writing {}", PathBuf::from(path).display()))
}
