//! IPA tokenization and the discrete phone feature space.

mod features;
mod symbols;

pub use features::{FeatureSpace, Kind, PhoneFeatures};
pub use symbols::{PhoneToken, SymbolTable, NASAL_MARK};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PhonologyError {
    #[error("unknown symbol {symbol:?} at byte {offset}")]
    UnknownSymbol { symbol: String, offset: usize },
    #[error("no phones in {0:?}")]
    EmptyWord(String),
    #[error("merge_diphthong needs two vowels")]
    NotAVowel,
    #[error("{kind:?} dimension d{dim} out of range: {value}")]
    OutOfRange { kind: Kind, dim: usize, value: u8 },
    #[error("bad feature vector {0:?}")]
    BadVector(String),
    #[error("symbol table line {line}: {message}")]
    BadTable { line: usize, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// Merges two consecutive vowels into a diphthong when the second is not
/// more open than the first. Returns `None` when no merge applies.
pub fn merge_diphthong(v1: PhoneFeatures, v2: PhoneFeatures) -> Result<Option<PhoneFeatures>, PhonologyError> {
    if !v1.is_vowel() || !v2.is_vowel() {
        return Err(PhonologyError::NotAVowel);
    }
    if v2.d2() > v1.d2() {
        return Ok(None);
    }
    let d5 = if v1.d4() == v2.d4() { 1 } else { 2 };
    Ok(Some(v1.with_d5(d5)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> SymbolTable {
        crate::bundled::symbol_table()
    }

    #[test]
    fn chart_examples() {
        let t = table();
        assert_eq!(
            t.encode_symbol("s", false).unwrap(),
            PhoneFeatures::consonant(8, 4, 2, 0).unwrap()
        );
        assert_eq!(
            t.encode_symbol("i", false).unwrap(),
            PhoneFeatures::vowel(1, 3, 0, 0, 0).unwrap()
        );
        assert_eq!(
            t.encode_symbol("w", false).unwrap(),
            PhoneFeatures::consonant(11, 2, 1, 0).unwrap()
        );
        let sh = t.encode_symbol("ʃ", false).unwrap();
        assert_eq!(t.encode_symbol("tʃ", false).unwrap(), sh.with_d5(1));
        assert_eq!(t.encode_symbol("i", true).unwrap().d6(), 1);
        assert_eq!(t.encode_symbol("n", true).unwrap().d6(), 0);
        assert!(matches!(
            t.encode_symbol("Q", false),
            Err(PhonologyError::UnknownSymbol { .. })
        ));
    }

    #[test]
    fn merge_rules() {
        let t = table();
        let e = t.encode_symbol("e", false).unwrap();
        let ih = t.encode_symbol("ɪ", false).unwrap();
        let a = t.encode_symbol("a", false).unwrap();
        let uh = t.encode_symbol("ʊ", false).unwrap();
        let schwa = t.encode_symbol("ə", false).unwrap();
        assert_eq!(merge_diphthong(e, ih).unwrap(), Some(e.with_d5(1)));
        assert_eq!(merge_diphthong(a, uh).unwrap(), Some(a.with_d5(2)));
        assert_eq!(merge_diphthong(schwa, a).unwrap(), None);
        let s = t.encode_symbol("s", false).unwrap();
        assert_eq!(merge_diphthong(e, s), Err(PhonologyError::NotAVowel));
    }

    #[test]
    fn word_examples() {
        let t = table();
        let snake = t.parse_word_transcription("sneɪk").unwrap();
        assert_eq!(snake.len(), 4);
        assert_eq!(snake[2], t.encode_symbol("e", false).unwrap().with_d5(1));
        assert_eq!(t.parse_word_transcription("sneik").unwrap(), snake);

        let peas = t.parse_word_transcription("pĩz").unwrap();
        assert_eq!(peas.len(), 3);
        assert_eq!(peas[1], t.encode_symbol("i", true).unwrap());

        let cheese = t.parse_word_transcription("tʃiz").unwrap();
        assert_eq!(cheese.len(), 3);
        assert_eq!(cheese[0].d5(), 1);
    }

    #[test]
    fn strips_diacritics_but_keeps_tilde() {
        let t = table();
        assert_eq!(
            t.parse_word_transcription("pʰliːz").unwrap(),
            t.parse_word_transcription("pliz").unwrap()
        );
        assert_eq!(
            t.parse_word_transcription("t̥ʃi:s").unwrap(),
            t.parse_word_transcription("tʃis").unwrap()
        );
        assert_eq!(
            t.parse_word_transcription("[t͡ʃiz]").unwrap(),
            t.parse_word_transcription("tʃiz").unwrap()
        );
        let nasal = t.parse_word_transcription("æ̃nd").unwrap();
        assert_eq!(nasal[0].d6(), 1);
    }

    #[test]
    fn greedy_single_pass() {
        let t = table();
        // e+ɪ merge, then ə and a stay apart since a is more open
        let v = t.parse_word_transcription("eɪəa").unwrap();
        assert_eq!(v.len(), 3);
        // three equal-height vowels: first pair merges, third stays single
        let v = t.parse_word_transcription("iii").unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].d5(), 1);
        assert_eq!(v[1].d5(), 0);
    }

    #[test]
    fn reports_offset_of_unknown_symbol() {
        let t = table();
        match t.parse_word_transcription("ab5") {
            Err(PhonologyError::UnknownSymbol { symbol, offset }) => {
                assert_eq!(symbol, "5");
                assert_eq!(offset, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            t.parse_word_transcription("ːʰ"),
            Err(PhonologyError::EmptyWord(_))
        ));
    }
}
