use std::fmt::Write;

use lsbert_core::evaluation::{PipelineReport, SgReport};
use lsbert_core::trace::TraceStep;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct SgRow {
    pub top_k: usize,
    #[serde(flatten)]
    pub report: SgReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct FullRow {
    pub top_k: usize,
    #[serde(flatten)]
    pub report: PipelineReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct TsReport {
    pub instances: usize,
    pub references: usize,
    pub sari_output: f64,
    pub sari_source: f64,
    pub fres_output: f64,
    pub fres_source: f64,
}

pub fn sg_table(rows: &[SgRow]) -> String {
    let mut s = format!(
        "{:>6} {:>9} {:>8} {:>8} {:>8} {:>8}\n",
        "top_k", "instances", "PRE", "RE", "F1", "mean_F1"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:>6} {:>9} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            r.top_k, r.report.instances, r.report.precision, r.report.recall, r.report.f1, r.report.mean_instance_f1
        );
    }
    s
}

pub fn full_table(rows: &[FullRow]) -> String {
    let mut s = format!("{:>6} {:>9} {:>8} {:>8} {:>8}\n", "top_k", "instances", "PRE", "ACC", "changed");
    for r in rows {
        let _ = writeln!(
            s,
            "{:>6} {:>9} {:>8.4} {:>8.4} {:>8.4}",
            r.top_k, r.report.instances, r.report.precision, r.report.accuracy, r.report.changed
        );
    }
    s
}

pub fn ts_table(r: &TsReport) -> String {
    format!(
        "{:<8} {:>10} {:>10}\n{:<8} {:>10.2} {:>10.2}\n{:<8} {:>10.2} {:>10.2}\n({} sentences, {} references each)\n",
        "", "output", "source", "SARI", r.sari_output, r.sari_source, "FRES", r.fres_output, r.fres_source,
        r.instances, r.references
    )
}

pub fn step_table(step: &TraceStep) -> String {
    let mut s = format!("word {:?} at {}\n", step.original, step.position);
    if step.candidates.is_empty() {
        s.push_str("no candidates\n");
        return s;
    }
    let Some(table) = &step.ranking else {
        return s;
    };
    let features: Vec<_> = table.features.keys().copied().collect();
    let _ = write!(s, "{:<16}", "candidate");
    for f in &features {
        let _ = write!(s, " {:>12}", f.name());
    }
    let _ = writeln!(s, " {:>8}", "avg_rank");
    for (i, c) in table.candidates.iter().enumerate() {
        let mark = if i == table.best { "*" } else { " " };
        let _ = write!(s, "{mark}{c:<15}");
        for f in &features {
            let col = &table.features[f];
            let _ = write!(s, " {:>6.3} ({:>3})", col.raw[i], col.ranks[i]);
        }
        let _ = writeln!(s, " {:>8.3}", table.average_rank[i]);
    }
    if step.filter_fallback {
        s.push_str("(every candidate was below the frequency floor; none removed)\n");
    }
    if let Some(c) = &step.check {
        let _ = writeln!(
            s,
            "zipf {:.3} vs {:.3}, loss {:.3} vs {:.3}: {}",
            c.zipf_top,
            c.zipf_original,
            c.loss_top,
            c.loss_original,
            if step.accepted { "accepted" } else { "rejected" }
        );
    }
    s
}
