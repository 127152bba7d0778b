use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use discourse_core::analysis::{repetition_stats, window_rates};
use discourse_core::config::PipelineConfig;
use discourse_core::io::{
    document_to_string, load_document, read_text, save_document, write_text, ResultsFile,
};
use discourse_core::lexicon::SynonymLexicon;
use discourse_core::pipeline::{
    apply_results, audit_lines, build_store, complete_document, disambiguate_document,
    run_pipeline,
};
use discourse_core::store::DiscourseStore;
use discourse_core::{analysis, conll, Document};

const DEFAULT_WINDOWS: [usize; 5] = [10, 20, 50, 100, 300];

#[derive(Parser, Debug)]
#[command(name = "discourse", version, about = "Discourse-consistency parse completion and disambiguation")]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Args, Debug)]
struct Common {
    /// Synonym rings, one per line, lemmas separated by whitespace
    #[arg(long)]
    synonyms: Option<PathBuf>,

    /// TOML file with pipeline settings
    #[arg(long)]
    config: Option<PathBuf>,

    /// Only use evidence from sentences within this many ids
    #[arg(long)]
    window: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Commands {
    /// Build a discourse store from a document's complete and multiple parses
    Build {
        document: PathBuf,
        /// Store snapshot path (default: <document>.store.json)
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Choose among the candidates of every multiple parse
    Disambiguate {
        document: PathBuf,
        #[arg(long)]
        store: PathBuf,
        /// Resolved document path (default: <document>.disambiguated.jsonl)
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Complete every incomplete parse
    Complete {
        document: PathBuf,
        #[arg(long)]
        store: PathBuf,
        /// Leave fragments that discourse evidence cannot join
        #[arg(long)]
        no_fallback: bool,
        /// Results path (default: <document>.results.jsonl)
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Summarize a results file
    Report {
        results: PathBuf,
        /// Print JSON instead of a table
        #[arg(long)]
        json: bool,
    },
    /// Lemma repetition and discourse window statistics
    Analyze {
        document: PathBuf,
        /// Window sizes in sentences (default: 10,20,50,100,300 up to the document size)
        #[arg(long, value_delimiter = ',')]
        windows: Option<Vec<usize>>,
        /// Sample areas per window size
        #[arg(long)]
        samples: Option<usize>,
        /// Print JSON instead of tables
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Convert a ten-column dependency file into a document
    Convert {
        input: PathBuf,
        /// Document path (default: <input>.jsonl)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build, disambiguate and complete in one pass
    Run {
        document: PathBuf,
        /// Output directory (default: <document>.run)
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Leave fragments that discourse evidence cannot join
        #[arg(long)]
        no_fallback: bool,
        #[command(flatten)]
        common: Common,
    },
}

/// `dir/stem<suffix>` for an input path.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_owned());
    path.with_file_name(format!("{}{}", stem, suffix))
}

impl Common {
    fn config(&self) -> Result<PipelineConfig> {
        let mut config = match &self.config {
            Some(path) => PipelineConfig::load(path)?,
            None => PipelineConfig::default(),
        };
        if self.window.is_some() {
            config.window = self.window;
        }
        Ok(config)
    }

    fn lexicon(&self) -> Result<SynonymLexicon> {
        match &self.synonyms {
            Some(path) => Ok(SynonymLexicon::load(path)?),
            None => Ok(SynonymLexicon::new()),
        }
    }
}

fn load(path: &Path) -> Result<Document> {
    load_document(path).with_context(|| format!("reading {}", path.display()))
}

fn load_store(path: &Path, config: &PipelineConfig) -> Result<DiscourseStore> {
    let text = read_text(path)?;
    let mut store = DiscourseStore::from_snapshot(&text)
        .with_context(|| format!("reading store {}", path.display()))?;
    if config.window.is_some() {
        store.set_window(config.window);
    }
    Ok(store)
}

fn print_lines(lines: &[String]) {
    for line in lines {
        println!("{}", line);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Commands::Build {
            document,
            output,
            common,
        } => {
            let config = common.config()?;
            let doc = load(&document)?;
            let built = build_store(&doc, &common.lexicon()?, &config)?;
            let output = output.unwrap_or_else(|| sibling(&document, ".store.json"));
            write_text(&output, &built.store.to_snapshot())?;
            print_lines(&audit_lines(&built.selections, &[]));
            eprintln!(
                "stored {} sentences, {} collocations in {}",
                built.store.sentences().len(),
                built.store.entry_count(),
                output.display()
            );
        }
        Commands::Disambiguate {
            document,
            store,
            output,
            common,
        } => {
            let config = common.config()?;
            let doc = load(&document)?;
            let store = load_store(&store, &config)?;
            let selections = disambiguate_document(&doc, &store, &common.lexicon()?, &config)?;
            let resolved = apply_results(&doc, &selections, &[]);
            let output = output.unwrap_or_else(|| sibling(&document, ".disambiguated.jsonl"));
            save_document(&output, &resolved)?;
            print_lines(&audit_lines(&selections, &[]));
        }
        Commands::Complete {
            document,
            store,
            no_fallback,
            output,
            common,
        } => {
            let mut config = common.config()?;
            config.fallback &= !no_fallback;
            let doc = load(&document)?;
            let store = load_store(&store, &config)?;
            let results = complete_document(&doc, &store, &common.lexicon()?, &config)?;
            let output = output.unwrap_or_else(|| sibling(&document, ".results.jsonl"));
            print_lines(&audit_lines(&[], &results));
            let file = ResultsFile {
                sentences: doc.records.len() as u64,
                results,
            };
            write_text(&output, &file.to_jsonl())?;
        }
        Commands::Report { results, json } => {
            let file = ResultsFile::load(&results)?;
            let report = analysis::completion_report(
                file.sentences,
                file.results.iter().map(|r| &r.result),
            );
            if json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report);
            }
        }
        Commands::Analyze {
            document,
            windows,
            samples,
            json,
            common,
        } => {
            let config = common.config()?;
            let doc = load(&document)?;
            let n = doc.records.len();
            let windows = windows.unwrap_or_else(|| {
                DEFAULT_WINDOWS.iter().copied().filter(|&w| w <= n).collect()
            });
            let samples = samples.unwrap_or(config.samples_per_window);
            let repetition = repetition_stats(&doc)?;
            let rates = window_rates(&doc, &common.lexicon()?, &windows, samples)?;
            if json {
                let value = serde_json_pair(&repetition, &rates)?;
                println!("{}", value);
            } else {
                print!("{}\n{}", repetition, rates);
            }
        }
        Commands::Convert { input, output } => {
            let text = read_text(&input)?;
            let doc = conll::convert(&text).with_context(|| format!("converting {}", input.display()))?;
            let output = output.unwrap_or_else(|| sibling(&input, ".jsonl"));
            if output == input {
                bail!("refusing to overwrite the input {}", input.display());
            }
            save_document(&output, &doc)?;
            eprintln!("wrote {} sentences to {}", doc.records.len(), output.display());
        }
        Commands::Run {
            document,
            output,
            no_fallback,
            common,
        } => {
            let mut config = common.config()?;
            config.fallback &= !no_fallback;
            let doc = load(&document)?;
            let out = run_pipeline(&doc, &common.lexicon()?, &config)?;
            let dir = output.unwrap_or_else(|| sibling(&document, ".run"));
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            write_text(&dir.join("document.jsonl"), &document_to_string(&out.document))?;
            write_text(&dir.join("results.jsonl"), &out.results.to_jsonl())?;
            write_text(&dir.join("store.json"), &out.store.to_snapshot())?;
            write_text(&dir.join("report.txt"), &out.report.to_string())?;
            write_text(&dir.join("report.json"), &out.report.to_json())?;
            let mut audit = out.audit.join("\n");
            audit.push('\n');
            write_text(&dir.join("audit.log"), &audit)?;
            print!("{}", out.report);
        }
    }
    Ok(())
}

fn serde_json_pair(
    repetition: &analysis::RepetitionReport,
    rates: &analysis::WindowRateReport,
) -> Result<String> {
    #[derive(serde::Serialize)]
    struct Analysis<'a> {
        repetition: &'a analysis::RepetitionReport,
        windows: &'a analysis::WindowRateReport,
    }
    Ok(serde_json::to_string_pretty(&Analysis {
        repetition,
        windows: rates,
    })?)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {:#}", err);
            ExitCode::from(1)
        }
    }
}
