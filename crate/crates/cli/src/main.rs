//! `accent`: encode transcriptions, recognize words, adapt to a speaker and
//! run the before/after experiment over a set of transcripts.
//!
//! Exit codes:
//! - 0: success, every requested output written
//! - 1: input could not be read, parsed or validated
//! - 2: usage error
//! - 3: an output file could not be written

/// `println!` that reports a closed or failing stdout as an output error.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        writeln!(std::io::stdout().lock(), $($t)*).map_err(output)?
    }};
}

macro_rules! out_raw {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        write!(std::io::stdout().lock(), $($t)*).map_err(output)?
    }};
}

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use accent_core::bundled;
use accent_core::harness::{
    self, parse_reference, split_transcript, write_reports, PhoneNames, SpeakerTranscript, TRAIN_WORDS,
};
use accent_core::hmm::{self, accumulate_counts, align_training, update_params, Constants, ModelParams};
use accent_core::lexicon::Lexicon;
use accent_core::phonology::{FeatureSpace, SymbolTable};
use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use config::{FileConfig, RunConfig};

#[derive(Parser)]
#[command(name = "accent", version, about = "Accent adaptation with phoneme HMMs")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML file with default settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Lexicon file (`word<TAB>IPA`). Defaults to the bundled paragraph words plus distractors.
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Symbol table file. Defaults to the bundled chart.
    #[arg(long, global = true)]
    symbols: Option<PathBuf>,
    /// Start from a parameter snapshot instead of naive parameters.
    #[arg(long, global = true)]
    params_in: Option<PathBuf>,
    /// Insertion probability from every state.
    #[arg(long, global = true)]
    p_ins: Option<f64>,
    /// Deletion probability given no insertion.
    #[arg(long, global = true)]
    p_del: Option<f64>,
    /// Width of the bell used for the initial emission probabilities.
    #[arg(long, global = true)]
    sigma: Option<f64>,
    /// Weight C of the initial parameters in the update.
    #[arg(long, global = true)]
    prior_weight: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the feature vectors of a transcription.
    Encode { text: String },
    /// Rank lexicon words for an observed transcription.
    Recognize {
        text: String,
        #[arg(long, default_value_t = 5)]
        top: usize,
    },
    /// Adapt parameters to one speaker's training words and save them.
    Adapt {
        /// Transcript file; its first 35 words are used.
        #[arg(long, conflicts_with = "speaker")]
        transcript: Option<PathBuf>,
        /// A bundled speaker, e.g. French8.
        #[arg(long)]
        speaker: Option<String>,
        #[arg(long)]
        params_out: Option<PathBuf>,
    },
    /// Before/after recognition over transcripts, with reports.
    Evaluate {
        /// Transcript files or directories of `.tsv` files. Defaults to the bundled corpus.
        #[arg(long, num_args = 1..)]
        transcripts: Vec<PathBuf>,
        #[arg(long, env = "ACCENT_OUT_DIR")]
        out_dir: Option<PathBuf>,
        /// Hand-counted transformation table to compare against.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Speaker the reference table describes.
        #[arg(long)]
        reference_speaker: Option<String>,
    },
    /// Write or check parameter snapshots.
    Params {
        #[command(subcommand)]
        action: ParamsAction,
    },
}

#[derive(Subcommand)]
enum ParamsAction {
    /// Write the starting parameters (naive, or --params-in) as JSON.
    Dump {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read and validate a snapshot, optionally writing it back out.
    Load {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Input(anyhow::Error),
    Usage(String),
    Output(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Output(_) => 3,
        }
    }
}

type Outcome = Result<(), Failure>;

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

fn output<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Output(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(e) | Failure::Output(e) => eprintln!("error: {e:#}"),
                Failure::Usage(m) => eprintln!("usage error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn resolve(common: &Common) -> Result<RunConfig, Failure> {
    let file = match &common.config {
        Some(path) => FileConfig::load(path).map_err(input)?,
        None => FileConfig::default(),
    };
    let defaults = Constants::default();
    let constants = Constants {
        p_ins: common.p_ins.or(file.p_ins).unwrap_or(defaults.p_ins),
        p_del: common.p_del.or(file.p_del).unwrap_or(defaults.p_del),
        sigma: common.sigma.or(file.sigma).unwrap_or(defaults.sigma),
        prior_weight: common
            .prior_weight
            .or(file.prior_weight)
            .unwrap_or(defaults.prior_weight),
    };
    constants.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let jobs = common.jobs.or(file.jobs);
    if jobs == Some(0) {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    Ok(RunConfig {
        lexicon: common.lexicon.clone().or(file.lexicon),
        symbols: common.symbols.clone().or(file.symbols),
        transcripts: file.transcripts.unwrap_or_default(),
        params_in: common.params_in.clone().or(file.params_in),
        params_out: file.params_out,
        constants,
        out_dir: file.out_dir,
        jobs,
        reference: file.reference,
        reference_speaker: file.reference_speaker.unwrap_or_else(|| "French8".into()),
    })
}

fn run(cli: Cli) -> Outcome {
    let mut cfg = resolve(&cli.common)?;
    if let Some(n) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| input(anyhow!("cannot start {n} workers: {e}")))?;
    }
    match cli.command {
        Command::Encode { text } => encode(&cfg, &text),
        Command::Recognize { text, top } => recognize(&cfg, &text, top),
        Command::Adapt {
            transcript,
            speaker,
            params_out,
        } => {
            if params_out.is_some() {
                cfg.params_out = params_out;
            }
            adapt(&cfg, transcript, speaker)
        }
        Command::Evaluate {
            transcripts,
            out_dir,
            reference,
            reference_speaker,
        } => {
            if !transcripts.is_empty() {
                cfg.transcripts = transcripts;
            }
            cfg.out_dir = out_dir.or(cfg.out_dir);
            cfg.reference = reference.or(cfg.reference);
            if let Some(s) = reference_speaker {
                cfg.reference_speaker = s;
            }
            evaluate(&cfg)
        }
        Command::Params { action } => match action {
            ParamsAction::Dump { out } => {
                let lexicon = load_lexicon(&cfg, &load_symbols(&cfg)?)?;
                let params = initial_params(&cfg, &lexicon)?;
                emit_json(&params, out.as_deref())
            }
            ParamsAction::Load { path, out } => {
                let params = ModelParams::load(&path).map_err(input)?;
                out!(
                    "{}: {} phonemes, p_ins {}, prior weight {}, sigma {}",
                    path.display(),
                    params.phonemes().count(),
                    params.p_ins(),
                    params.prior_weight(),
                    params.sigma()
                );
                match out {
                    Some(out) => emit_json(&params, Some(&out)),
                    None => Ok(()),
                }
            }
        },
    }
}

fn load_symbols(cfg: &RunConfig) -> Result<SymbolTable, Failure> {
    match &cfg.symbols {
        Some(path) => SymbolTable::load(path).map_err(input),
        None => Ok(bundled::symbol_table()),
    }
}

fn load_lexicon(cfg: &RunConfig, table: &SymbolTable) -> Result<Lexicon, Failure> {
    let lexicon = match &cfg.lexicon {
        Some(path) => Lexicon::load(path, table).map_err(input)?,
        None => {
            let mut lex = Lexicon::parse(bundled::PARAGRAPH_LEXICON, table).map_err(input)?;
            lex.extend(&Lexicon::parse(bundled::DISTRACTORS, table).map_err(input)?)
                .map_err(input)?;
            lex
        }
    };
    if lexicon.is_empty() {
        return Err(input(anyhow!("lexicon is empty")));
    }
    Ok(lexicon)
}

fn initial_params(cfg: &RunConfig, lexicon: &Lexicon) -> Result<ModelParams, Failure> {
    match &cfg.params_in {
        Some(path) => {
            let params = ModelParams::load(path).map_err(input)?;
            if let Some(p) = lexicon.inventory().phonemes.iter().find(|p| params.emit(p).is_none()) {
                return Err(input(anyhow!(
                    "{}: no parameters for lexicon phoneme {p}",
                    path.display()
                )));
            }
            Ok(params)
        }
        None => ModelParams::naive_with(&lexicon.inventory(), &FeatureSpace::standard(), cfg.constants).map_err(input),
    }
}

fn emit_json(params: &ModelParams, out: Option<&Path>) -> Outcome {
    match out {
        Some(path) => {
            params.save(path).map_err(output)?;
            out!("wrote {}", path.display());
        }
        None => out!("{}", params.to_json()),
    }
    Ok(())
}

fn encode(cfg: &RunConfig, text: &str) -> Outcome {
    if text.trim().is_empty() {
        return Err(Failure::Usage("nothing to encode".into()));
    }
    let table = load_symbols(cfg)?;
    let tokens = table.parse_word_tokens(text).map_err(input)?;
    for t in tokens {
        out!("{}\t{}", t.symbol, t.features);
    }
    Ok(())
}

fn recognize(cfg: &RunConfig, text: &str, top: usize) -> Outcome {
    if text.trim().is_empty() {
        return Err(Failure::Usage("nothing to recognize".into()));
    }
    let table = load_symbols(cfg)?;
    let lexicon = load_lexicon(cfg, &table)?;
    let params = initial_params(cfg, &lexicon)?;
    let obs = table.parse_word_transcription(text).map_err(input)?;
    let r = hmm::recognize(&obs, &lexicon, &params).map_err(input)?;
    out!("best: {}", r.tie_set.join(" "));
    for (word, lp) in r.ranking.iter().take(top) {
        out!("{lp:>12.4}  {word}");
    }
    Ok(())
}

fn adapt(cfg: &RunConfig, transcript: Option<PathBuf>, speaker: Option<String>) -> Outcome {
    let table = load_symbols(cfg)?;
    let lexicon = load_lexicon(cfg, &table)?;
    let t = match (transcript, speaker) {
        (Some(path), _) => SpeakerTranscript::load(&path, &table).map_err(input)?,
        (None, Some(name)) => {
            let text = bundled::transcript(&name).ok_or_else(|| input(anyhow!("no bundled speaker {name:?}")))?;
            SpeakerTranscript::parse(&name, text, &table).map_err(input)?
        }
        (None, None) => return Err(Failure::Usage("give --transcript or --speaker".into())),
    };
    let Some(out) = cfg.params_out.clone() else {
        return Err(Failure::Usage("--params-out is required".into()));
    };
    let params = initial_params(cfg, &lexicon)?;
    let (train, _) = split_transcript(&t, &lexicon).map_err(input)?;
    let counts = accumulate_counts(&align_training(&params, &train).map_err(input)?);
    let adapted = update_params(&params, &counts).map_err(input)?;
    out!(
        "{}: {} training words, {} insertions, {} other steps",
        t.speaker,
        TRAIN_WORDS,
        counts.n_ins,
        counts.n_not_ins
    );
    emit_json(&adapted, Some(&out))
}

fn collect_transcripts(paths: &[PathBuf], table: &SymbolTable) -> Result<Vec<SpeakerTranscript>, Failure> {
    if paths.is_empty() {
        return bundled::TRANSCRIPTS
            .iter()
            .map(|(name, text)| SpeakerTranscript::parse(name, text, table).map_err(input))
            .collect();
    }
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(path)
                .with_context(|| format!("cannot list {}", path.display()))
                .map_err(input)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "tsv"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(path.clone());
        }
    }
    let mut out: Vec<SpeakerTranscript> = files
        .iter()
        .map(|p| SpeakerTranscript::load(p, table).map_err(input))
        .collect::<Result<_, _>>()?;
    out.sort_by(|a, b| a.speaker.cmp(&b.speaker));
    if let Some(w) = out.windows(2).find(|w| w[0].speaker == w[1].speaker) {
        return Err(input(anyhow!("speaker {} given twice", w[0].speaker)));
    }
    Ok(out)
}

fn evaluate(cfg: &RunConfig) -> Outcome {
    let table = load_symbols(cfg)?;
    let lexicon = load_lexicon(cfg, &table)?;
    let params = initial_params(cfg, &lexicon)?;
    let transcripts = collect_transcripts(&cfg.transcripts, &table)?;
    if transcripts.is_empty() {
        return Err(input(anyhow!("no transcripts found")));
    }
    let reference_rows = match &cfg.reference {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))
                .map_err(input)?;
            Some(parse_reference(&text, &table).map_err(input)?)
        }
        None if cfg.reference_speaker == "French8" => {
            Some(parse_reference(bundled::FRENCH8_REFERENCE, &table).map_err(input)?)
        }
        None => None,
    };
    let reference = reference_rows
        .as_deref()
        .filter(|_| transcripts.iter().any(|t| t.speaker == cfg.reference_speaker))
        .map(|rows| (cfg.reference_speaker.as_str(), rows));
    if cfg.reference.is_some() && reference.is_none() {
        return Err(input(anyhow!(
            "reference speaker {} is not among the transcripts",
            cfg.reference_speaker
        )));
    }

    let evals = harness::evaluate_all(&transcripts, &lexicon, &params).map_err(input)?;
    let out_dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("accent-report"));
    let names = PhoneNames::new(&lexicon, &table);
    let files = write_reports(&out_dir, &evals, &names, reference).map_err(output)?;

    for e in &evals {
        out!(
            "{:<14} {} before {:>8.4} after {:>8.4}",
            e.speaker,
            e.group.map(|g| g.to_string()).unwrap_or_else(|| "-".into()),
            e.before.rate,
            e.after.rate
        );
    }
    out!();
    out_raw!("{}", harness::summary_text(&evals));
    out!();
    out!("reports in {}", out_dir.display());
    if let Some(path) = &files.transformations {
        out!("transformation table: {}", path.display());
    }
    if let Some(out) = &cfg.params_out {
        let e = evals
            .iter()
            .find(|e| e.speaker == cfg.reference_speaker)
            .or(evals.first())
            .expect("at least one speaker");
        e.adapted.save(out).map_err(output)?;
        out!("adapted parameters for {}: {}", e.speaker, out.display());
    }
    Ok(())
}
