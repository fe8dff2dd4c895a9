use std::fmt::Write;
use std::time::Duration;

use lrbound::{Mode, Stats, Verdict};
use serde::Serialize;

#[derive(Serialize, Debug)]
pub struct Report {
    pub mode: String,
    pub verdicts: Vec<VarReport>,
    pub stats: StatsReport,
    pub time_ms: f64,
}

#[derive(Serialize, Debug)]
pub struct VarReport {
    pub var: u32,
    pub verdict: &'static str,
    pub bounded: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Serialize, Debug)]
pub struct StatsReport {
    pub distinct_contexts: usize,
    pub max_contexts_per_node: usize,
    pub memo_entries: usize,
    pub judgements: usize,
}

impl Report {
    pub fn new(mode: Mode, verdicts: &[Verdict], stats: Stats, elapsed: Duration, witnesses: bool) -> Report {
        Report {
            mode: mode.to_string(),
            verdicts: verdicts
                .iter()
                .map(|v| VarReport {
                    var: v.var.index(),
                    verdict: v.label(),
                    bounded: v.bounded,
                    witness: v.witness.as_ref().filter(|_| witnesses).map(|w| w.render()),
                })
                .collect(),
            stats: StatsReport {
                distinct_contexts: stats.distinct_contexts,
                max_contexts_per_node: stats.max_contexts_per_node,
                memo_entries: stats.memo_entries,
                judgements: stats.judgements,
            },
            time_ms: elapsed.as_secs_f64() * 1e3,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("mode: {}\n", self.mode);
        for v in &self.verdicts {
            writeln!(out, "X{}: {}", v.var, v.verdict).unwrap();
            if let Some(w) = &v.witness {
                for line in w.lines() {
                    writeln!(out, "    {line}").unwrap();
                }
            }
        }
        let s = &self.stats;
        writeln!(
            out,
            "distinct_contexts: {}\nmax_contexts_per_node: {}\nmemo_entries: {}\njudgements: {}\ntime_ms: {:.3}",
            s.distinct_contexts, s.max_contexts_per_node, s.memo_entries, s.judgements, self.time_ms
        )
        .unwrap();
        out
    }
}
