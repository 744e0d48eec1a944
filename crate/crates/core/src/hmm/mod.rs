//! Word HMMs with insertion, deletion and substitution, their forward and
//! Viterbi kernels, and the count-based parameter update.

mod counts;
mod lattice;
mod params;

pub use counts::{accumulate_counts, update_params, TransformCounts};
pub use lattice::{Lattice, Op, VITERBI_TIE_EPSILON};
pub use params::{
    bell, naive_emission, Constants, ModelParams, DEFAULT_PRIOR_WEIGHT, DEFAULT_P_DEL, DEFAULT_P_INS, DEFAULT_SIGMA,
    SUM_TOLERANCE,
};

use rayon::prelude::*;
use thiserror::Error;

use crate::lexicon::{Lexicon, WordForm};
use crate::phonology::PhoneFeatures;

/// Two words tie in recognition when their log scores differ by at most this.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HmmError {
    #[error("word {0:?} has no phonemes")]
    EmptyWord(String),
    #[error("lexicon is empty")]
    EmptyLexicon,
    #[error("phoneme {0} has no parameters")]
    UnknownPhoneme(PhoneFeatures),
    #[error("no path through the model for word {0:?}")]
    NoPath(String),
    #[error("counts are internally inconsistent")]
    InconsistentCounts,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parameter snapshot: {0}")]
    Schema(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// The left-to-right model of one word: states S_1..S_{n+2}, with S_i
/// labelled by the i-th phoneme for i <= n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordHmm {
    word: String,
    phonemes: Vec<PhoneFeatures>,
}

impl WordHmm {
    pub fn new(form: &WordForm) -> Result<Self, HmmError> {
        if form.phonemes.is_empty() {
            return Err(HmmError::EmptyWord(form.word.clone()));
        }
        Ok(WordHmm {
            word: form.word.clone(),
            phonemes: form.phonemes.clone(),
        })
    }

    pub fn word(&self) -> &str {
        &self.word
    }

    pub fn phonemes(&self) -> &[PhoneFeatures] {
        &self.phonemes
    }

    pub fn state_count(&self) -> usize {
        self.phonemes.len() + 2
    }

    /// Phoneme label of state `S_i` (1-based), if it has one.
    pub fn phon(&self, i: usize) -> Option<PhoneFeatures> {
        i.checked_sub(1).and_then(|j| self.phonemes.get(j)).copied()
    }
}

/// One step of a decoded path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Produce {
        phoneme: PhoneFeatures,
        observed: PhoneFeatures,
    },
    Delete {
        phoneme: PhoneFeatures,
    },
    Insert {
        observed: PhoneFeatures,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    pub word: String,
    pub steps: Vec<Step>,
    pub log_probability: f64,
}

impl Alignment {
    /// Phonemes consumed by Produce and Delete steps, in order.
    pub fn spelled_phonemes(&self) -> Vec<PhoneFeatures> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Produce { phoneme, .. } | Step::Delete { phoneme } => Some(*phoneme),
                Step::Insert { .. } => None,
            })
            .collect()
    }

    /// Vectors emitted by Produce and Insert steps, in order.
    pub fn emitted(&self) -> Vec<PhoneFeatures> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Produce { observed, .. } | Step::Insert { observed } => Some(*observed),
                Step::Delete { .. } => None,
            })
            .collect()
    }
}

/// log P(obs | word model), summed over every path.
pub fn forward_likelihood(hmm: &WordHmm, obs: &[PhoneFeatures], params: &ModelParams) -> Result<f64, HmmError> {
    Ok(Lattice::new(hmm, obs, params)?.forward())
}

/// The single most probable path through the word model.
pub fn viterbi_align(hmm: &WordHmm, obs: &[PhoneFeatures], params: &ModelParams) -> Result<Alignment, HmmError> {
    let lattice = Lattice::new(hmm, obs, params)?;
    let (ops, log_probability) = lattice.viterbi().ok_or_else(|| HmmError::NoPath(hmm.word.clone()))?;
    let (mut i, mut k) = (0, 0);
    let steps = ops
        .into_iter()
        .map(|op| match op {
            Op::Produce => {
                let s = Step::Produce {
                    phoneme: hmm.phonemes[i],
                    observed: obs[k],
                };
                i += 1;
                k += 1;
                s
            }
            Op::Delete => {
                i += 1;
                Step::Delete {
                    phoneme: hmm.phonemes[i - 1],
                }
            }
            Op::Insert => {
                k += 1;
                Step::Insert { observed: obs[k - 1] }
            }
        })
        .collect();
    Ok(Alignment {
        word: hmm.word.clone(),
        steps,
        log_probability,
    })
}

/// Scores of every lexicon word for one observation sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Recognition {
    /// Words by descending log probability, ties in word order.
    pub ranking: Vec<(String, f64)>,
    /// Words within [`TIE_TOLERANCE`] of the best score, in word order.
    pub tie_set: Vec<String>,
}

impl Recognition {
    pub fn from_scores(mut scores: Vec<(String, f64)>) -> Self {
        let best = scores.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
        let mut tie_set: Vec<String> = if best == f64::NEG_INFINITY {
            Vec::new()
        } else {
            scores
                .iter()
                .filter(|(_, lp)| best - lp <= TIE_TOLERANCE)
                .map(|(w, _)| w.clone())
                .collect()
        };
        tie_set.sort();
        scores.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        Recognition {
            ranking: scores,
            tie_set,
        }
    }
}

/// Scores `obs` against every word of the lexicon under a uniform prior.
pub fn recognize(obs: &[PhoneFeatures], lexicon: &Lexicon, params: &ModelParams) -> Result<Recognition, HmmError> {
    if lexicon.is_empty() {
        return Err(HmmError::EmptyLexicon);
    }
    let forms: Vec<&WordForm> = lexicon.entries().collect();
    let scores = forms
        .par_iter()
        .map(|form| {
            let hmm = WordHmm::new(form)?;
            Ok((form.word.clone(), forward_likelihood(&hmm, obs, params)?))
        })
        .collect::<Result<Vec<_>, HmmError>>()?;
    Ok(Recognition::from_scores(scores))
}

/// Aligns every training pair under `params`.
pub fn align_training(
    params: &ModelParams,
    pairs: &[(WordForm, Vec<PhoneFeatures>)],
) -> Result<Vec<Alignment>, HmmError> {
    pairs
        .iter()
        .map(|(form, obs)| viterbi_align(&WordHmm::new(form)?, obs, params))
        .collect()
}

/// One adaptation pass: align under the current parameters, count, update.
pub fn adapt(params: &ModelParams, pairs: &[(WordForm, Vec<PhoneFeatures>)]) -> Result<ModelParams, HmmError> {
    let alignments = align_training(params, pairs)?;
    update_params(params, &accumulate_counts(&alignments))
}
