//! Data shipped with the crate: symbol chart, paragraph and distractor
//! lexicons, nineteen speaker transcripts and a hand-counted French8 table.

use crate::lexicon::Lexicon;
use crate::phonology::SymbolTable;

pub const SYMBOLS: &str = include_str!("../data/symbols.tsv");
pub const PARAGRAPH_LEXICON: &str = include_str!("../data/lexicon/paragraph.tsv");
pub const DISTRACTORS: &str = include_str!("../data/lexicon/distractors.tsv");
pub const FRENCH8_REFERENCE: &str = include_str!("../data/reference/french8_transformations.tsv");

macro_rules! transcripts {
    ($($name:literal),* $(,)?) => {
        /// `(speaker id, file contents)` in speaker-id order.
        pub const TRANSCRIPTS: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../data/transcripts/", $name, ".tsv")))),*
        ];
    };
}

transcripts!(
    "Arabic16",
    "Arabic17",
    "English10",
    "English134",
    "English18",
    "English23",
    "English33",
    "English39",
    "English40",
    "English57",
    "English58",
    "English85",
    "French23",
    "French8",
    "Korean3",
    "Portuguese22",
    "Spanish36",
    "Spanish50",
    "Spanish54",
);

pub fn symbol_table() -> SymbolTable {
    SymbolTable::parse(SYMBOLS).expect("bundled symbol table parses")
}

/// The 55 distinct paragraph words.
pub fn paragraph_lexicon() -> Lexicon {
    Lexicon::parse(PARAGRAPH_LEXICON, &symbol_table()).expect("bundled paragraph lexicon parses")
}

pub fn distractor_lexicon() -> Lexicon {
    Lexicon::parse(DISTRACTORS, &symbol_table()).expect("bundled distractors parse")
}

/// Paragraph words plus distractors.
pub fn experiment_lexicon() -> Lexicon {
    let mut lex = paragraph_lexicon();
    lex.extend(&distractor_lexicon())
        .expect("distractors agree with paragraph words");
    lex
}

pub fn transcript(speaker: &str) -> Option<&'static str> {
    TRANSCRIPTS
        .iter()
        .find(|(name, _)| *name == speaker)
        .map(|(_, text)| *text)
}
