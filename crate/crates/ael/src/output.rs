//! Plain-text and `key<TAB>value` record rendering of solver reports.

use std::fmt::Write;
use std::str::FromStr;
use std::time::Duration;

use ael_core::dispatch::Algorithm;
use ael_core::{CloneName, SolveReport, Task};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Records,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "records" => Ok(Format::Records),
            _ => Err(format!("unknown format '{s}' (expected text or records)")),
        }
    }
}

fn elapsed_ms(elapsed: Duration) -> String {
    format!("{:.3}", elapsed.as_secs_f64() * 1000.0)
}

pub fn render_plan(
    format: Format,
    clone: CloneName,
    algorithm: Algorithm,
    elapsed: Duration,
) -> String {
    match format {
        Format::Text => format!("clone {clone}\nalgorithm {algorithm}\n"),
        Format::Records => format!(
            "clone\t{clone}\nalgorithm\t{algorithm}\nelapsed_ms\t{}\n",
            elapsed_ms(elapsed)
        ),
    }
}

/// Records are `clone`, `algorithm`, `answer`, `count` (counting tasks),
/// `vacuous` (only when set), `witness_<i>` and finally `elapsed_ms`, which
/// is the only line that varies between runs.
pub fn render_report(
    format: Format,
    task: &Task,
    report: &SolveReport,
    elapsed: Duration,
) -> String {
    let counting = matches!(task, Task::Count | Task::List);
    let mut out = String::new();
    match format {
        Format::Text => {
            if counting {
                writeln!(out, "count {}", report.answer).unwrap();
            } else if report.vacuous {
                writeln!(
                    out,
                    "answer {} (vacuous: no stable expansion)",
                    report.answer
                )
                .unwrap();
            } else {
                writeln!(out, "answer {}", report.answer).unwrap();
            }
            for w in &report.witnesses {
                writeln!(out, "witness {w}").unwrap();
            }
        }
        Format::Records => {
            writeln!(out, "clone\t{}", report.clone).unwrap();
            writeln!(out, "algorithm\t{}", report.algorithm).unwrap();
            writeln!(out, "answer\t{}", report.answer).unwrap();
            if counting {
                writeln!(out, "count\t{}", report.answer).unwrap();
            }
            if report.vacuous {
                writeln!(out, "vacuous\ttrue").unwrap();
            }
            for (i, w) in report.witnesses.iter().enumerate() {
                writeln!(out, "witness_{i}\t{w}").unwrap();
            }
            writeln!(out, "elapsed_ms\t{}", elapsed_ms(elapsed)).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ael_core::syntax::parse_kb;
    use ael_core::{solve, SolveOptions};

    #[test]
    fn records_layout() {
        let kb = parse_kb("sig: xor,1\np ^ Lp ^ 1\n").unwrap();
        let report = solve(&kb, &Task::List, &SolveOptions::default()).unwrap();
        let text = render_report(
            Format::Records,
            &Task::List,
            &report,
            Duration::from_millis(3),
        );
        assert_eq!(
            text,
            "clone\tL\nalgorithm\taffine\nanswer\t2\ncount\t2\nwitness_0\tLp=-\nwitness_1\tLp=+\nelapsed_ms\t3.000\n"
        );
        let plain = render_report(Format::Text, &Task::Count, &report, Duration::ZERO);
        assert!(plain.starts_with("count 2\n"));
    }
}
