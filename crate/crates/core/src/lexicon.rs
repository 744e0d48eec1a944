//! Native word inventory: orthographic words and their phoneme strings.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use thiserror::Error;

use crate::phonology::{PhoneFeatures, PhonologyError, SymbolTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexiconError {
    #[error("duplicate word {word:?} with conflicting transcriptions")]
    DuplicateWord { word: String },
    #[error("line {line}: word {word:?}: {source}")]
    BadPhoneme {
        word: String,
        line: usize,
        source: PhonologyError,
    },
    #[error("line {line}: expected `word<TAB>transcription`")]
    BadLine { line: usize },
    #[error("word {0:?} missing from lexicon")]
    MissingWord(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// The reading paragraph, one entry per word token.
pub const PARAGRAPH: [&str; 69] = [
    "please",
    "call",
    "stella",
    "ask",
    "her",
    "to",
    "bring",
    "these",
    "things",
    "with",
    "her",
    "from",
    "the",
    "store",
    "six",
    "spoons",
    "of",
    "fresh",
    "snow",
    "peas",
    "five",
    "thick",
    "slabs",
    "of",
    "blue",
    "cheese",
    "and",
    "maybe",
    "a",
    "snack",
    "for",
    "her",
    "brother",
    "bob",
    "we",
    "also",
    "need",
    "a",
    "small",
    "plastic",
    "snake",
    "and",
    "a",
    "big",
    "toy",
    "frog",
    "for",
    "the",
    "kids",
    "she",
    "can",
    "scoop",
    "these",
    "things",
    "into",
    "three",
    "red",
    "bags",
    "and",
    "we",
    "will",
    "go",
    "meet",
    "her",
    "wednesday",
    "at",
    "the",
    "train",
    "station",
];

/// Hand-chosen transcriptions for paragraph words missing from standard
/// pronouncing dictionaries. Frog is written with ɹ like every other rhotic
/// in the native transcriptions.
pub const HAND_TRANSCRIPTIONS: [(&str, &str); 7] = [
    ("stella", "stɛllə"),
    ("peas", "piːz"),
    ("slabs", "slæbz"),
    ("snack", "snæk"),
    ("snake", "sneik"),
    ("toy", "tɔɪ"),
    ("frog", "fɹɒg"),
];

/// Case-folds and trims surrounding punctuation; inner apostrophes stay so
/// that "we'll" and "well" remain distinct.
pub fn normalize_word(word: &str) -> String {
    word.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase()
}

/// A lexicon entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordForm {
    pub word: String,
    pub transcription: String,
    pub phonemes: Vec<PhoneFeatures>,
    /// Display symbol per phoneme, parallel to `phonemes`.
    pub symbols: Vec<String>,
}

impl WordForm {
    pub fn parse(word: &str, transcription: &str, table: &SymbolTable) -> Result<Self, PhonologyError> {
        let tokens = table.parse_word_tokens(transcription)?;
        Ok(WordForm {
            word: normalize_word(word),
            transcription: transcription.trim().to_string(),
            symbols: tokens.iter().map(|t| t.symbol.clone()).collect(),
            phonemes: tokens.into_iter().map(|t| t.features).collect(),
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, WordForm>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `word<TAB>transcription` lines with `#` comments.
    pub fn parse(text: &str, table: &SymbolTable) -> Result<Self, LexiconError> {
        let mut lex = Lexicon::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (word, ipa) = line.split_once('\t').ok_or(LexiconError::BadLine { line: i + 1 })?;
            let form = WordForm::parse(word, ipa, table).map_err(|source| LexiconError::BadPhoneme {
                word: word.trim().to_string(),
                line: i + 1,
                source,
            })?;
            if form.word.is_empty() {
                return Err(LexiconError::BadLine { line: i + 1 });
            }
            lex.insert(form)?;
        }
        Ok(lex)
    }

    /// Reads a dictionary file. Hand transcriptions replace any entry for the
    /// same words.
    pub fn load(path: &Path, table: &SymbolTable) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path).map_err(|e| LexiconError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let mut lex = Self::parse(&text, table)?;
        for (word, ipa) in HAND_TRANSCRIPTIONS {
            if lex.entries.contains_key(word) {
                lex.replace(hand_form(word, ipa, table)?);
            }
        }
        Ok(lex)
    }

    /// Adds the hand-transcribed paragraph words, replacing existing entries.
    pub fn with_hand_transcriptions(mut self, table: &SymbolTable) -> Result<Self, LexiconError> {
        for (word, ipa) in HAND_TRANSCRIPTIONS {
            self.replace(hand_form(word, ipa, table)?);
        }
        Ok(self)
    }

    /// Inserts an entry. Re-inserting an identical phoneme string is a no-op.
    pub fn insert(&mut self, form: WordForm) -> Result<(), LexiconError> {
        match self.entries.get(&form.word) {
            Some(existing) if existing.phonemes != form.phonemes => {
                Err(LexiconError::DuplicateWord { word: form.word })
            }
            Some(_) => Ok(()),
            None => {
                self.entries.insert(form.word.clone(), form);
                Ok(())
            }
        }
    }

    pub fn replace(&mut self, form: WordForm) {
        self.entries.insert(form.word.clone(), form);
    }

    pub fn extend(&mut self, other: &Lexicon) -> Result<(), LexiconError> {
        for form in other.entries.values() {
            self.insert(form.clone())?;
        }
        Ok(())
    }

    pub fn get(&self, word: &str) -> Option<&WordForm> {
        self.entries.get(&normalize_word(word))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in word order.
    pub fn entries(&self) -> impl Iterator<Item = &WordForm> {
        self.entries.values()
    }

    /// Groups of two or more words with identical phoneme strings.
    pub fn homophone_classes(&self) -> Vec<Vec<String>> {
        let mut by_form: BTreeMap<&[PhoneFeatures], Vec<String>> = BTreeMap::new();
        for form in self.entries.values() {
            by_form.entry(&form.phonemes).or_default().push(form.word.clone());
        }
        by_form.into_values().filter(|words| words.len() > 1).collect()
    }

    /// The set of phonemes used by any entry.
    pub fn inventory(&self) -> PhonemeInventory {
        PhonemeInventory {
            phonemes: self.entries.values().flat_map(|f| f.phonemes.iter().copied()).collect(),
        }
    }

    /// Display names for phonemes, first spelling seen in word order.
    pub fn phoneme_names(&self) -> BTreeMap<PhoneFeatures, String> {
        let mut names = BTreeMap::new();
        for form in self.entries.values() {
            for (p, s) in form.phonemes.iter().zip(&form.symbols) {
                names.entry(*p).or_insert_with(|| s.clone());
            }
        }
        names
    }
}

fn hand_form(word: &str, ipa: &str, table: &SymbolTable) -> Result<WordForm, LexiconError> {
    WordForm::parse(word, ipa, table).map_err(|source| LexiconError::BadPhoneme {
        word: word.to_string(),
        line: 0,
        source,
    })
}

/// Restricts a lexicon to the distinct words of the reading paragraph.
pub fn paragraph_inventory(lexicon: &Lexicon) -> Result<Lexicon, LexiconError> {
    let mut out = Lexicon::new();
    for word in PARAGRAPH {
        let form = lexicon
            .get(word)
            .ok_or_else(|| LexiconError::MissingWord(word.to_string()))?;
        out.replace(form.clone());
    }
    Ok(out)
}

/// The phoneme set of a lexicon.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhonemeInventory {
    pub phonemes: BTreeSet<PhoneFeatures>,
}

impl PhonemeInventory {
    pub fn len(&self) -> usize {
        self.phonemes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phonemes.is_empty()
    }

    pub fn contains(&self, p: &PhoneFeatures) -> bool {
        self.phonemes.contains(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn snake_has_four_phonemes() {
        let table = bundled::symbol_table();
        let lex = Lexicon::parse("snake\t/sneik/\n", &table).unwrap();
        assert_eq!(lex.get("Snake").unwrap().phonemes.len(), 4);
    }

    #[test]
    fn empty_file_gives_empty_lexicon() {
        let table = bundled::symbol_table();
        let lex = Lexicon::parse("# nothing here\n\n", &table).unwrap();
        assert!(lex.is_empty());
    }

    #[test]
    fn homophones_are_grouped() {
        let table = bundled::symbol_table();
        let lex = Lexicon::parse("for\tfɔ\nfour\tfɔ\nfrog\tfɹɒg\n", &table).unwrap();
        assert_eq!(
            lex.homophone_classes(),
            vec![vec!["for".to_string(), "four".to_string()]]
        );
    }

    #[test]
    fn conflicting_duplicate_rejected() {
        let table = bundled::symbol_table();
        let err = Lexicon::parse("red\tɹed\nRed\tɹɛd\n", &table).unwrap_err();
        assert_eq!(err, LexiconError::DuplicateWord { word: "red".into() });
        assert!(Lexicon::parse("red\tɹed\nred\tɹed\n", &table).is_ok());
    }

    #[test]
    fn bad_phoneme_names_word_and_offset() {
        let table = bundled::symbol_table();
        match Lexicon::parse("ok\tɔk\nbad\tb9d\n", &table) {
            Err(LexiconError::BadPhoneme { word, line, source }) => {
                assert_eq!(word, "bad");
                assert_eq!(line, 2);
                assert_eq!(
                    source,
                    PhonologyError::UnknownSymbol {
                        symbol: "9".into(),
                        offset: 1
                    }
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn paragraph_restriction() {
        let full = bundled::experiment_lexicon();
        let para = paragraph_inventory(&full).unwrap();
        assert_eq!(para.len(), 55);

        let mut partial = Lexicon::new();
        for form in para.entries().filter(|f| f.word != "wednesday") {
            partial.insert(form.clone()).unwrap();
        }
        assert_eq!(
            paragraph_inventory(&partial),
            Err(LexiconError::MissingWord("wednesday".into()))
        );
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_word("Wednesday,"), "wednesday");
        assert_eq!(normalize_word("We'll"), "we'll");
    }
}
