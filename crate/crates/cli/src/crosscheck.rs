//! Compiled machine versus direct simulation on every string up to a
//! length.

use std::fmt::Write;
use std::path::Path;

use anyhow::Result;
use hodl_core::engines::{decide, EngineConfig};
use hodl_core::stats::expk;
use hodl_core::tm::{strings_up_to, tm_run, TuringMachine, Verdict, DEFAULT_HORIZON};
use hodl_core::Error;
use num_bigint::BigUint;
use rayon::prelude::*;

use crate::{EXIT_BUDGET, EXIT_ERROR, EXIT_OK, EXIT_REJECT};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub input: String,
    pub oracle: String,
    pub engine: String,
    pub agree: bool,
    pub steps: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub machine: String,
    pub order: usize,
    pub d: usize,
    pub rows: Vec<Row>,
    /// Set when the run stopped before evaluating the compiled program.
    pub aborted: Option<String>,
}

fn verdict_word(accept: bool) -> &'static str {
    if accept {
        "accept"
    } else {
        "reject"
    }
}

/// Largest number of transitions the compiled program simulates on an
/// input of length `n`; `None` when it does not fit in memory.
fn simulated_steps(order: usize, d: usize, n: usize) -> Option<BigUint> {
    let cells = BigUint::from(n).pow(d as u32);
    let total = if order == 1 { cells } else { expk(order as u32 - 1, &cells).ok()? };
    Some(total - 1u32)
}

pub fn run(m: &TuringMachine, order: usize, d: usize, max_len: usize, cfg: &EngineConfig) -> Result<Report> {
    let words = strings_up_to(max_len);
    let mut report = Report { machine: m.name.clone(), order, d, rows: Vec::new(), aborted: None };

    let mut oracle = Vec::with_capacity(words.len());
    for w in &words {
        let r = tm_run(m, w, DEFAULT_HORIZON)?;
        let stop = |report: &mut Report, why: String| {
            report.rows.push(Row {
                input: w.clone(),
                oracle: r.verdict.to_string(),
                engine: "-".into(),
                agree: false,
                steps: None,
            });
            report.aborted = Some(why);
        };
        match r.verdict {
            Verdict::LeftEdgeViolation => {
                stop(&mut report, format!("machine moves left of the first cell on {w:?}"));
                return Ok(report);
            }
            Verdict::OutOfSteps => {
                stop(&mut report, format!("machine does not halt on {w:?} within {DEFAULT_HORIZON} steps"));
                return Ok(report);
            }
            Verdict::Accepted if w.len() >= 2 => {
                if let Some(limit) = simulated_steps(order, d, w.len()) {
                    if BigUint::from(r.steps_used) > limit {
                        stop(
                            &mut report,
                            format!(
                                "machine needs {} steps on {w:?} but the program simulates {limit}; raise d or the order",
                                r.steps_used
                            ),
                        );
                        return Ok(report);
                    }
                }
            }
            _ => {}
        }
        oracle.push(r.verdict == Verdict::Accepted);
    }

    let program = crate::compile(m, order, d)?.program;
    let results: Vec<Result<Option<(bool, u64)>>> = words
        .par_iter()
        .map(|w| match decide(&program, w, cfg) {
            Ok(dec) => Ok(Some((dec.accept, dec.steps))),
            Err(Error::BudgetExhausted { .. }) => Ok(None),
            Err(e) => Err(e.into()),
        })
        .collect();
    for ((w, want), got) in words.iter().zip(oracle).zip(results) {
        let got = got?;
        report.rows.push(Row {
            input: w.clone(),
            oracle: verdict_word(want).into(),
            engine: got.map_or("unknown", |(a, _)| verdict_word(a)).into(),
            agree: got.is_some_and(|(a, _)| a == want),
            steps: got.map(|(_, s)| s),
        });
    }
    Ok(report)
}

impl Report {
    pub fn agreeing(&self) -> usize {
        self.rows.iter().filter(|r| r.agree).count()
    }

    pub fn unknown(&self) -> usize {
        self.rows.iter().filter(|r| r.engine == "unknown").count()
    }

    pub fn exit_code(&self) -> u8 {
        if self.aborted.is_some() {
            EXIT_ERROR
        } else if self.agreeing() == self.rows.len() {
            EXIT_OK
        } else if self.agreeing() + self.unknown() == self.rows.len() {
            EXIT_BUDGET
        } else {
            EXIT_REJECT
        }
    }

    pub fn table(&self) -> String {
        let header = ["input", "oracle", "engine", "agree", "steps"];
        let cells: Vec<[String; 5]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    if r.input.is_empty() { "ε".to_string() } else { r.input.clone() },
                    r.oracle.clone(),
                    r.engine.clone(),
                    if r.agree { "yes" } else { "no" }.to_string(),
                    r.steps.map_or("-".to_string(), |s| s.to_string()),
                ]
            })
            .collect();
        let mut widths = header.map(|h| h.chars().count());
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |row: &[String]| -> String {
            let parts: Vec<String> = row
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            parts.join("  ").trim_end().to_string()
        };
        let mut out = String::new();
        let _ = writeln!(out, "machine: {}  order: {}  d: {}", self.machine, self.order, self.d);
        let _ = writeln!(out, "{}", line(&header.map(String::from)));
        for row in &cells {
            let _ = writeln!(out, "{}", line(row));
        }
        match &self.aborted {
            Some(why) => {
                let _ = writeln!(out, "aborted: {why}");
            }
            None => {
                let _ = writeln!(
                    out,
                    "rows: {}  agree: {}  disagree: {}  unknown: {}",
                    self.rows.len(),
                    self.agreeing(),
                    self.rows.len() - self.agreeing() - self.unknown(),
                    self.unknown()
                );
            }
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["input", "oracle", "engine", "agree", "steps"])?;
        for r in &self.rows {
            let steps = r.steps.map_or(String::new(), |s| s.to_string());
            w.write_record([r.input.as_str(), &r.oracle, &r.engine, if r.agree { "true" } else { "false" }, &steps])?;
        }
        w.flush()?;
        Ok(())
    }
}
