//! Experiment driver: train/test split, before/after evaluation, scoring,
//! transformation tables, group statistics and report files.

mod report;
mod stats;
mod table;

pub use report::{rates_csv, render_speaker_report, summary_text, write_reports, PhoneNames, ReportFiles};
pub use stats::{
    balanced_subset, group_report, summarize, two_way_anova, AnovaEffect, AnovaResult, GroupSummary, RateTable,
};
pub use table::{parse_reference, transformation_table, ReferenceRow, TableRow, TransformationTable};

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::hmm::{
    self, accumulate_counts, align_training, Alignment, Constants, HmmError, ModelParams, TransformCounts,
};
use crate::lexicon::{normalize_word, Lexicon, LexiconError, WordForm, PARAGRAPH};
use crate::phonology::{FeatureSpace, PhoneFeatures, SymbolTable};

/// Paragraph tokens used for training; the rest are test items.
pub const TRAIN_WORDS: usize = 35;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("transcript {speaker}: {message}")]
    MalformedTranscript { speaker: String, message: String },
    #[error("unbalanced design: {0}")]
    UnbalancedDesign(String),
    #[error("reference table line {line}: {message}")]
    BadReference { line: usize, message: String },
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Hmm(#[from] HmmError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// Native speakers (A) and late learners (B).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    A,
    B,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::A => "A",
            Group::B => "B",
        })
    }
}

impl FromStr for Group {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(Group::A),
            "B" | "b" => Ok(Group::B),
            other => Err(format!("unknown group {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    Before,
    After,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Before => "before",
            Condition::After => "after",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub word: String,
    pub transcription: String,
    pub observed: Vec<PhoneFeatures>,
}

/// One speaker's reading of the paragraph, word by word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpeakerTranscript {
    pub speaker: String,
    pub group: Option<Group>,
    pub entries: Vec<TranscriptEntry>,
}

impl SpeakerTranscript {
    /// Parses `word<TAB>IPA` lines. A `# group: A` comment sets the group;
    /// other `#` lines are ignored.
    pub fn parse(speaker: &str, text: &str, table: &SymbolTable) -> Result<Self, HarnessError> {
        let bad = |message: String| HarnessError::MalformedTranscript {
            speaker: speaker.to_string(),
            message,
        };
        let mut group = None;
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim_end();
            let trimmed = line.trim_start();
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some(g) = comment.trim().strip_prefix("group:") {
                    group = Some(g.parse().map_err(|e| bad(format!("line {}: {e}", i + 1)))?);
                }
                continue;
            }
            if trimmed.is_empty() {
                continue;
            }
            let (word, ipa) = line
                .split_once('\t')
                .ok_or_else(|| bad(format!("line {}: expected `word<TAB>transcription`", i + 1)))?;
            let observed = table
                .parse_word_transcription(ipa)
                .map_err(|e| bad(format!("line {}: {word}: {e}", i + 1)))?;
            entries.push(TranscriptEntry {
                word: normalize_word(word),
                transcription: ipa.trim().to_string(),
                observed,
            });
        }
        let t = SpeakerTranscript {
            speaker: speaker.to_string(),
            group,
            entries,
        };
        t.validate()?;
        Ok(t)
    }

    /// Reads a transcript file; the speaker id is the file stem.
    pub fn load(path: &Path, table: &SymbolTable) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let speaker = path.file_stem().and_then(|s| s.to_str()).unwrap_or("speaker");
        Self::parse(speaker, &text, table)
    }

    /// Checks the entries against the paragraph word order.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |message: String| HarnessError::MalformedTranscript {
            speaker: self.speaker.clone(),
            message,
        };
        if self.entries.len() != PARAGRAPH.len() {
            return Err(bad(format!(
                "{} entries, expected {}",
                self.entries.len(),
                PARAGRAPH.len()
            )));
        }
        for (i, (entry, expected)) in self.entries.iter().zip(PARAGRAPH).enumerate() {
            if entry.word != expected {
                return Err(bad(format!(
                    "entry {} is {:?}, expected {:?}",
                    i + 1,
                    entry.word,
                    expected
                )));
            }
            if entry.observed.is_empty() {
                return Err(bad(format!("entry {} has no phones", i + 1)));
            }
        }
        Ok(())
    }
}

/// A (native word, observed phones) pair.
pub type Pair = (WordForm, Vec<PhoneFeatures>);

/// First 35 entries for training, last 34 for testing.
pub fn split_transcript(t: &SpeakerTranscript, lexicon: &Lexicon) -> Result<(Vec<Pair>, Vec<Pair>), HarnessError> {
    t.validate()?;
    let pairs = t
        .entries
        .iter()
        .map(|e| {
            let form = lexicon
                .get(&e.word)
                .ok_or_else(|| LexiconError::MissingWord(e.word.clone()))?;
            Ok((form.clone(), e.observed.clone()))
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let mut train = pairs;
    let test = train.split_off(TRAIN_WORDS);
    Ok((train, test))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoredItem {
    pub target: String,
    pub tie_set: Vec<String>,
    pub correct: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub condition: Condition,
    pub items: Vec<ScoredItem>,
    pub correct: usize,
    pub rate: f64,
}

/// An item is correct when its target word is among the best-scoring words.
pub fn score(condition: Condition, items: &[(String, Vec<String>)]) -> EvalReport {
    let scored: Vec<ScoredItem> = items
        .iter()
        .map(|(target, tie_set)| ScoredItem {
            target: target.clone(),
            tie_set: tie_set.clone(),
            correct: tie_set.iter().any(|w| w == target),
        })
        .collect();
    let correct = scored.iter().filter(|s| s.correct).count();
    let rate = if scored.is_empty() {
        0.0
    } else {
        100.0 * correct as f64 / scored.len() as f64
    };
    EvalReport {
        condition,
        items: scored,
        correct,
        rate,
    }
}

/// Recognizes every test pair against the lexicon and scores the result.
pub fn recognize_test_set(
    condition: Condition,
    test: &[Pair],
    lexicon: &Lexicon,
    params: &ModelParams,
) -> Result<EvalReport, HarnessError> {
    let items = test
        .iter()
        .map(|(form, obs)| Ok((form.word.clone(), hmm::recognize(obs, lexicon, params)?.tie_set)))
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(score(condition, &items))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeakerEvaluation {
    pub speaker: String,
    pub group: Option<Group>,
    pub before: EvalReport,
    pub after: EvalReport,
    pub alignments: Vec<Alignment>,
    pub counts: TransformCounts,
    pub adapted: ModelParams,
}

/// Naive recognition of the test words, one adaptation pass on the
/// training words, then recognition again.
pub fn evaluate_speaker(
    t: &SpeakerTranscript,
    lexicon: &Lexicon,
    constants: Constants,
) -> Result<SpeakerEvaluation, HarnessError> {
    let naive = ModelParams::naive_with(&lexicon.inventory(), &FeatureSpace::standard(), constants)?;
    evaluate_speaker_with(t, lexicon, &naive)
}

/// As [`evaluate_speaker`], starting from given parameters.
pub fn evaluate_speaker_with(
    t: &SpeakerTranscript,
    lexicon: &Lexicon,
    initial: &ModelParams,
) -> Result<SpeakerEvaluation, HarnessError> {
    let (train, test) = split_transcript(t, lexicon)?;
    let before = recognize_test_set(Condition::Before, &test, lexicon, initial)?;
    let alignments = align_training(initial, &train)?;
    let counts = accumulate_counts(&alignments);
    let adapted = hmm::update_params(initial, &counts)?;
    let after = recognize_test_set(Condition::After, &test, lexicon, &adapted)?;
    Ok(SpeakerEvaluation {
        speaker: t.speaker.clone(),
        group: t.group,
        before,
        after,
        alignments,
        counts,
        adapted,
    })
}

/// Evaluates speakers concurrently; results keep the input order.
pub fn evaluate_all(
    transcripts: &[SpeakerTranscript],
    lexicon: &Lexicon,
    initial: &ModelParams,
) -> Result<Vec<SpeakerEvaluation>, HarnessError> {
    transcripts
        .par_iter()
        .map(|t| evaluate_speaker_with(t, lexicon, initial))
        .collect()
}

/// Parses every bundled transcript.
pub fn bundled_transcripts() -> Vec<SpeakerTranscript> {
    let table = crate::bundled::symbol_table();
    crate::bundled::TRANSCRIPTS
        .iter()
        .map(|(name, text)| SpeakerTranscript::parse(name, text, &table).expect("bundled transcript parses"))
        .collect()
}
