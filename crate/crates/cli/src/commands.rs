use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use lsbert_core::evaluation::{
    corpus_fres, corpus_sari, generation_instance, load_lines, load_ls_dataset, load_ts_dataset,
    pipeline_instance, PipelineReport, SgReport,
};
use lsbert_core::pipeline::Simplifier;
use lsbert_core::text::TokenizedSentence;
use log::info;
use rayon::prelude::*;
use serde::Serialize;

use crate::report::{self, FullRow, SgRow, TsReport};
use crate::run_config::{sidecar, RunArgs, RunConfig};
use crate::LsMode;

/// Order-preserving parallel map on a pool of `workers` threads.
fn par_map<T, R, F>(workers: usize, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

fn read_input(input: Option<&Path>) -> Result<Vec<String>> {
    let lines = match input {
        Some(p) => BufReader::new(File::open(p).with_context(|| format!("opening {}", p.display()))?)
            .lines()
            .collect::<io::Result<Vec<_>>>()?,
        None => io::stdin().lock().lines().collect::<io::Result<Vec<_>>>()?,
    };
    Ok(lines)
}

pub fn simplify(args: &RunArgs, input: Option<PathBuf>, trace: Option<PathBuf>) -> Result<bool> {
    let cfg = RunConfig::resolve(args)?;
    cfg.single_top_k()?;
    cfg.check_resources()?;
    let lines = read_input(input.as_deref())?;
    let resources = cfg.load_resources()?;
    let backend = cfg.load_backend()?;
    cfg.echo()?;
    let simplifier = Simplifier::new(cfg.pipeline.clone(), &resources, backend.as_ref())?;

    let results = par_map(cfg.workers, &lines, |line| simplifier.simplify_sentence(line))?;

    let mut out: Box<dyn Write> = match &cfg.out {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let trace_path = cfg.out.as_ref().map(|o| sidecar(o, "trace.jsonl")).or(trace);
    let mut trace_out = trace_path.as_deref().map(create).transpose()?;

    let mut ok = true;
    for (n, (line, result)) in lines.iter().zip(results).enumerate() {
        match result {
            Ok(r) => {
                writeln!(out, "{}", r.simplified.text())?;
                if let Some(t) = trace_out.as_mut() {
                    serde_json::to_writer(&mut *t, &r.record())?;
                    writeln!(t)?;
                }
            }
            Err(e) => {
                ok = false;
                eprintln!("line {}: {e}", n + 1);
                writeln!(out, "{line}")?;
            }
        }
    }
    out.flush()?;
    if let Some(mut t) = trace_out {
        t.flush()?;
    }
    Ok(ok)
}

pub fn candidates(args: &RunArgs, sentence: &str, index: usize, json: bool) -> Result<bool> {
    let cfg = RunConfig::resolve(args)?;
    cfg.single_top_k()?;
    cfg.check_resources()?;
    let resources = cfg.load_resources()?;
    let backend = cfg.load_backend()?;
    cfg.echo()?;
    let simplifier = Simplifier::new(cfg.pipeline.clone(), &resources, backend.as_ref())?;
    let tokens = TokenizedSentence::tokenize(sentence);
    let (_, step) = simplifier.simplify_word(&tokens, index)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&step)?);
    } else {
        print!("{}", report::step_table(&step));
    }
    if let Some(out) = &cfg.out {
        write_json(out, &step)?;
    }
    Ok(true)
}

#[derive(Serialize)]
struct InstanceRecord<'a> {
    top_k: usize,
    sentence: &'a str,
    target: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    candidates: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    replacement: Option<String>,
}

pub fn eval_ls(args: &RunArgs, dataset: &Path, mode: LsMode, json: bool) -> Result<bool> {
    let cfg = RunConfig::resolve(args)?;
    if mode == LsMode::Full {
        cfg.check_resources()?;
    }
    let instances = load_ls_dataset(dataset)?;
    if instances.is_empty() {
        bail!("{} contains no instances", dataset.display());
    }
    info!("{} instances from {}", instances.len(), dataset.display());
    let resources = cfg.load_resources()?;
    let backend = cfg.load_backend()?;
    cfg.echo()?;

    let mut records = Vec::new();
    let mut sg_rows = Vec::new();
    let mut full_rows = Vec::new();
    for &k in &cfg.top_k_sweep {
        let mut pipeline = cfg.pipeline.clone();
        pipeline.top_k = k;
        match mode {
            LsMode::Sg => {
                let outcomes = par_map(cfg.workers, &instances, |inst| {
                    generation_instance(inst, &pipeline, backend.as_ref())
                })?
                .into_iter()
                .collect::<lsbert_core::Result<Vec<_>>>()?;
                let scores: Vec<_> = outcomes.iter().map(|(_, s)| *s).collect();
                sg_rows.push(SgRow {
                    top_k: k,
                    report: SgReport::from_instances(&scores),
                });
                for (inst, (cands, _)) in instances.iter().zip(outcomes) {
                    records.push(InstanceRecord {
                        top_k: k,
                        sentence: &inst.sentence,
                        target: &inst.target,
                        candidates: Some(cands),
                        replacement: None,
                    });
                }
            }
            LsMode::Full => {
                let simplifier = Simplifier::new(pipeline, &resources, backend.as_ref())?;
                let outcomes = par_map(cfg.workers, &instances, |inst| pipeline_instance(inst, &simplifier))?
                    .into_iter()
                    .collect::<lsbert_core::Result<Vec<_>>>()?;
                full_rows.push(FullRow {
                    top_k: k,
                    report: PipelineReport::from_outcomes(&instances, &outcomes),
                });
                for (inst, (word, _)) in instances.iter().zip(outcomes) {
                    records.push(InstanceRecord {
                        top_k: k,
                        sentence: &inst.sentence,
                        target: &inst.target,
                        candidates: None,
                        replacement: Some(word),
                    });
                }
            }
        }
    }

    let report_json = match mode {
        LsMode::Sg => serde_json::to_value(&sg_rows)?,
        LsMode::Full => serde_json::to_value(&full_rows)?,
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report_json)?);
    } else {
        match mode {
            LsMode::Sg => print!("{}", report::sg_table(&sg_rows)),
            LsMode::Full => print!("{}", report::full_table(&full_rows)),
        }
    }
    if let Some(out) = &cfg.out {
        write_json(out, &report_json)?;
        let mut w = create(&sidecar(out, "instances.jsonl"))?;
        for r in &records {
            serde_json::to_writer(&mut w, r)?;
            writeln!(w)?;
        }
        w.flush()?;
    }
    Ok(true)
}

pub fn eval_ts(
    args: &RunArgs,
    source: &Path,
    output: Option<&Path>,
    references: &[PathBuf],
    json: bool,
) -> Result<bool> {
    let cfg = RunConfig::resolve(args)?;
    let data = load_ts_dataset(source, references)?;
    if data.is_empty() {
        bail!("{} contains no sentences", source.display());
    }
    let sources: Vec<String> = data.iter().map(|d| d.source.clone()).collect();
    let refs: Vec<Vec<String>> = data.iter().map(|d| d.references.clone()).collect();

    let mut ok = true;
    let outputs = match output {
        Some(p) => {
            let lines = load_lines(p)?;
            if lines.len() != sources.len() {
                bail!("{} has {} lines but the source has {}", p.display(), lines.len(), sources.len());
            }
            cfg.echo()?;
            lines
        }
        None => {
            cfg.single_top_k()?;
            cfg.check_resources()?;
            let resources = cfg.load_resources()?;
            let backend = cfg.load_backend()?;
            cfg.echo()?;
            let simplifier = Simplifier::new(cfg.pipeline.clone(), &resources, backend.as_ref())?;
            let results = par_map(cfg.workers, &sources, |s| simplifier.simplify_sentence(s))?;
            let mut lines = Vec::with_capacity(results.len());
            for (n, (src, r)) in sources.iter().zip(results).enumerate() {
                match r {
                    Ok(r) => lines.push(r.simplified.text().to_string()),
                    Err(e) => {
                        ok = false;
                        eprintln!("line {}: {e}", n + 1);
                        lines.push(src.clone());
                    }
                }
            }
            if let Some(out) = &cfg.out {
                let mut w = create(&sidecar(out, "outputs.txt"))?;
                for l in &lines {
                    writeln!(w, "{l}")?;
                }
                w.flush()?;
            }
            lines
        }
    };

    let report = TsReport {
        instances: sources.len(),
        references: references.len(),
        sari_output: corpus_sari(&sources, &outputs, &refs),
        sari_source: corpus_sari(&sources, &sources, &refs),
        fres_output: corpus_fres(&outputs),
        fres_source: corpus_fres(&sources),
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report::ts_table(&report));
    }
    if let Some(out) = &cfg.out {
        write_json(out, &report)?;
    }
    Ok(ok)
}
