//! `plansim` command line: one subcommand per result artifact plus `report`,
//! which runs the whole collection, analysis and reporting pipeline.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{self, AreaLexicon, SimilarityMatrix, DEFAULT_TOP_N};
use crate::corpus::{self, Document, GoalCatalog, StopwordList};
use crate::report::{self, CorpusSummary, ParamsEcho, ReportBundle, TOOL_VERSION};
use crate::textsim::{self, AggregationKind, AggregationPolicy, JaroWinklerParams, DEFAULT_TOP_K};

#[derive(Debug, Parser)]
#[command(
    name = "plansim",
    version,
    about = "Jaro-Winkler similarity analytics for plan documents"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Term-frequency word cloud and term table per document.
    Wordcloud(RunArgs),
    /// Share of each document's tokens in every thematic area.
    Areas(RunArgs),
    /// Document-by-document similarity matrix.
    Compare(RunArgs),
    /// Document-by-goal alignment matrix.
    Align(RunArgs),
    /// Every artifact plus report.json.
    Report(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AggregationArg {
    MeanOfBest,
    TopKMean,
}

impl From<AggregationArg> for AggregationKind {
    fn from(a: AggregationArg) -> Self {
        match a {
            AggregationArg::MeanOfBest => AggregationKind::MeanOfBest,
            AggregationArg::TopKMean => AggregationKind::TopKMean,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Directory of UTF-8 .txt documents.
    #[arg(long, value_name = "DIR")]
    pub corpus: PathBuf,
    /// Goal catalog, a JSON array of {"id", "name", "statement"}.
    #[arg(long, value_name = "FILE")]
    pub goals: Option<PathBuf>,
    /// Stopword file (one per line, '#' comments); replaces the built-in Spanish list.
    #[arg(long, value_name = "FILE")]
    pub stopwords: Option<PathBuf>,
    /// Area lexicon, a JSON object {"area": ["keyword", ...]}.
    #[arg(long, value_name = "FILE")]
    pub lexicon: Option<PathBuf>,
    #[arg(long, value_name = "DIR", default_value = "plansim-out")]
    pub output: PathBuf,
    /// Terms kept per word cloud.
    #[arg(long = "top", value_name = "N", default_value_t = DEFAULT_TOP_N)]
    pub top_n: usize,
    /// Sentences averaged by top-k-mean aggregation.
    #[arg(long, value_name = "K", default_value_t = DEFAULT_TOP_K)]
    pub k: usize,
    #[arg(long, value_name = "P", default_value_t = 0.1)]
    pub prefix_scale: f64,
    #[arg(long, value_name = "L", default_value_t = 4)]
    pub max_prefix: usize,
    /// Defaults to mean-of-best for compare and top-k-mean for align.
    #[arg(long, value_enum)]
    pub aggregation: Option<AggregationArg>,
    /// Word-cloud layout seed.
    #[arg(long, value_name = "S", default_value_t = 42)]
    pub seed: u64,
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub corpus_dir: PathBuf,
    pub goals_file: Option<PathBuf>,
    pub stopwords_file: Option<PathBuf>,
    pub lexicon_file: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub top_n: usize,
    pub k: usize,
    pub params: JaroWinklerParams,
    pub compare_aggregation: AggregationPolicy,
    pub align_aggregation: AggregationPolicy,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_args(args: &RunArgs) -> Result<Self> {
        if args.top_n == 0 {
            bail!("--top must be at least 1");
        }
        if args.k == 0 {
            bail!("--k must be at least 1");
        }
        if !(0.0..=0.25).contains(&args.prefix_scale) {
            bail!(
                "--prefix-scale must be within [0, 0.25], got {}",
                args.prefix_scale
            );
        }
        let params = JaroWinklerParams::new(args.prefix_scale, args.max_prefix).map_err(|_| {
            anyhow::anyhow!(
                "--prefix-scale ({}) times --max-prefix ({}) must not exceed 1",
                args.prefix_scale,
                args.max_prefix
            )
        })?;
        let policy = |default: AggregationKind| {
            let kind = args.aggregation.map(Into::into).unwrap_or(default);
            AggregationPolicy::new(kind, args.k).expect("k validated above")
        };
        Ok(RunConfig {
            corpus_dir: args.corpus.clone(),
            goals_file: args.goals.clone(),
            stopwords_file: args.stopwords.clone(),
            lexicon_file: args.lexicon.clone(),
            output_dir: args.output.clone(),
            top_n: args.top_n,
            k: args.k,
            params,
            compare_aggregation: policy(AggregationKind::MeanOfBest),
            align_aggregation: policy(AggregationKind::TopKMean),
            seed: args.seed,
        })
    }

    fn stopwords(&self) -> Result<StopwordList> {
        match &self.stopwords_file {
            Some(p) => Ok(StopwordList::load(p)?),
            None => Ok(StopwordList::builtin_spanish()),
        }
    }

    fn lexicon(&self) -> Result<AreaLexicon> {
        match &self.lexicon_file {
            Some(p) => Ok(AreaLexicon::load(p)?),
            None => Ok(AreaLexicon::builtin_spanish()),
        }
    }

    fn load_corpus(&self) -> Result<Vec<Document>> {
        Ok(corpus::load_corpus(&self.corpus_dir, &self.stopwords()?)?)
    }

    fn prepare_output(&self) -> Result<()> {
        fs::create_dir_all(&self.output_dir)
            .with_context(|| format!("cannot create {}", self.output_dir.display()))
    }

    fn out(&self, name: &str) -> PathBuf {
        self.output_dir.join(name)
    }
}

fn write_wordclouds(cfg: &RunConfig, docs: &[Document]) -> Result<Vec<analysis::TermWeights>> {
    let mut all = Vec::with_capacity(docs.len());
    for doc in docs {
        let tw = analysis::term_weights(doc, cfg.top_n)?;
        report::write_terms_csv(&tw, &cfg.out(&format!("terms-{}.csv", doc.id)))?;
        let skipped = report::render_wordcloud_svg(
            &tw,
            &cfg.out(&format!("wordcloud-{}.svg", doc.id)),
            cfg.seed,
        )?;
        if !skipped.is_empty() {
            eprintln!(
                "warning: {}: {} term(s) did not fit in the word cloud: {}",
                doc.id,
                skipped.len(),
                skipped.join(", ")
            );
        }
        all.push(tw);
    }
    Ok(all)
}

fn write_areas(
    cfg: &RunConfig,
    docs: &[Document],
    lexicon: &AreaLexicon,
) -> Result<Vec<analysis::AreaScores>> {
    let scores = docs
        .iter()
        .map(|d| analysis::area_scores(d, lexicon))
        .collect::<crate::Result<Vec<_>>>()?;
    report::write_areas_csv(&scores, &cfg.out("areas.csv"))?;
    Ok(scores)
}

fn write_compare(cfg: &RunConfig, docs: &[Document]) -> Result<SimilarityMatrix> {
    let m = textsim::similarity_matrix(docs, &cfg.params, &cfg.compare_aggregation)?;
    report::write_matrix_csv(&m, &cfg.out("doc-similarity.csv"))?;
    report::render_heatmap_svg(&m, &cfg.out("doc-similarity.svg"))?;
    Ok(m)
}

fn write_align(
    cfg: &RunConfig,
    docs: &[Document],
    goals: &GoalCatalog,
) -> Result<SimilarityMatrix> {
    let m = analysis::goal_alignment(docs, goals, &cfg.params, &cfg.align_aggregation)?;
    report::write_matrix_csv(&m, &cfg.out("goal-alignment.csv"))?;
    report::render_heatmap_svg(&m, &cfg.out("goal-alignment.svg"))?;
    Ok(m)
}

pub fn cmd_wordcloud(cfg: &RunConfig) -> Result<()> {
    let docs = cfg.load_corpus()?;
    cfg.prepare_output()?;
    write_wordclouds(cfg, &docs)?;
    Ok(())
}

pub fn cmd_areas(cfg: &RunConfig) -> Result<()> {
    let docs = cfg.load_corpus()?;
    let lexicon = cfg.lexicon()?;
    cfg.prepare_output()?;
    write_areas(cfg, &docs, &lexicon)?;
    Ok(())
}

pub fn cmd_compare(cfg: &RunConfig) -> Result<()> {
    let docs = cfg.load_corpus()?;
    cfg.prepare_output()?;
    write_compare(cfg, &docs)?;
    Ok(())
}

fn require_goals(cfg: &RunConfig) -> Result<&Path> {
    cfg.goals_file.as_deref().ok_or_else(|| {
        anyhow::anyhow!(
            "align needs a goal catalog\n\nUsage: plansim align --corpus DIR --goals FILE [--output DIR]"
        )
    })
}

pub fn cmd_align(cfg: &RunConfig) -> Result<()> {
    let goals_path = require_goals(cfg)?;
    let docs = cfg.load_corpus()?;
    let goals = corpus::load_goals(goals_path)?;
    cfg.prepare_output()?;
    write_align(cfg, &docs, &goals)?;
    Ok(())
}

pub fn cmd_report(cfg: &RunConfig) -> Result<()> {
    let stopwords = cfg.stopwords()?;
    let docs = corpus::load_corpus(&cfg.corpus_dir, &stopwords)?;
    let lexicon = cfg.lexicon()?;
    let goals = cfg
        .goals_file
        .as_deref()
        .map(corpus::load_goals)
        .transpose()?;
    cfg.prepare_output()?;

    let term_weights = write_wordclouds(cfg, &docs)?;
    let area_scores = write_areas(cfg, &docs, &lexicon)?;
    let doc_matrix = write_compare(cfg, &docs)?;
    let alignment_matrix = goals
        .as_ref()
        .map(|g| write_align(cfg, &docs, g))
        .transpose()?;

    let bundle = ReportBundle {
        corpus_summary: CorpusSummary::from_documents(&docs),
        term_weights,
        area_scores,
        doc_matrix,
        alignment_matrix,
        params_echo: ParamsEcho {
            jaro_winkler: cfg.params,
            doc_aggregation: cfg.compare_aggregation,
            alignment_aggregation: cfg.align_aggregation,
            top_n: cfg.top_n,
            seed: cfg.seed,
            stopwords: stopwords.source().to_string(),
            lexicon: cfg
                .lexicon_file
                .as_ref()
                .map_or("builtin-spanish".to_string(), |p| p.display().to_string()),
            goals: cfg.goals_file.as_ref().map(|p| p.display().to_string()),
            tool_version: TOOL_VERSION.to_string(),
        },
    };
    report::write_json_report(&bundle, &cfg.out("report.json"))?;
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    let (name, args) = match &cli.command {
        Command::Wordcloud(a) => ("wordcloud", a),
        Command::Areas(a) => ("areas", a),
        Command::Compare(a) => ("compare", a),
        Command::Align(a) => ("align", a),
        Command::Report(a) => ("report", a),
    };
    let cfg = RunConfig::from_args(args)?;
    eprintln!(
        "plansim {name}: {}",
        serde_json::to_string(&cfg).expect("config serializes")
    );
    match cli.command {
        Command::Wordcloud(_) => cmd_wordcloud(&cfg),
        Command::Areas(_) => cmd_areas(&cfg),
        Command::Compare(_) => cmd_compare(&cfg),
        Command::Align(_) => cmd_align(&cfg),
        Command::Report(_) => cmd_report(&cfg),
    }
}

/// Parse `args` (including the program name), run, and return the process
/// exit code. Errors are printed to standard error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(extra: &[&str]) -> Result<RunConfig> {
        let mut argv = vec!["plansim", "compare", "--corpus", "c"];
        argv.extend_from_slice(extra);
        let cli = Cli::try_parse_from(argv)?;
        match &cli.command {
            Command::Compare(a) => RunConfig::from_args(a),
            _ => unreachable!(),
        }
    }

    #[test]
    fn defaults_resolve() {
        let cfg = parse(&[]).unwrap();
        assert_eq!(cfg.top_n, 100);
        assert_eq!(cfg.k, 5);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.params, JaroWinklerParams::default());
        assert_eq!(cfg.compare_aggregation.kind(), AggregationKind::MeanOfBest);
        assert_eq!(cfg.align_aggregation.kind(), AggregationKind::TopKMean);
    }

    #[test]
    fn aggregation_flag_overrides_both() {
        let cfg = parse(&["--aggregation", "top-k-mean", "--k", "3"]).unwrap();
        assert_eq!(
            cfg.compare_aggregation,
            AggregationPolicy::top_k_mean(3).unwrap()
        );
        assert_eq!(
            cfg.align_aggregation,
            AggregationPolicy::top_k_mean(3).unwrap()
        );
    }

    #[test]
    fn validation_names_flags() {
        let msg = |extra: &[&str]| parse(extra).unwrap_err().to_string();
        assert!(msg(&["--k", "0"]).contains("--k"));
        assert!(msg(&["--top", "0"]).contains("--top"));
        assert!(msg(&["--prefix-scale", "0.5"]).contains("--prefix-scale"));
        assert!(msg(&["--prefix-scale", "0.25", "--max-prefix", "8"]).contains("--max-prefix"));
    }
}
