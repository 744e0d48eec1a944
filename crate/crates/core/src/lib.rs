//! Phonetic feature encoding, word HMMs with insertion and deletion, and
//! adaptation of a listener's phone perception to an accented speaker.

pub mod bundled;
pub mod harness;
pub mod hmm;
pub mod lexicon;
pub mod phonology;

use thiserror::Error;

/// Any error raised by this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Phonology(#[from] phonology::PhonologyError),
    #[error(transparent)]
    Lexicon(#[from] lexicon::LexiconError),
    #[error(transparent)]
    Hmm(#[from] hmm::HmmError),
    #[error(transparent)]
    Harness(#[from] harness::HarnessError),
}
