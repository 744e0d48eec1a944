use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use unicode_normalization::UnicodeNormalization;

use super::features::{kind_from_tag, Kind, PhoneFeatures};
use super::{merge_diphthong, PhonologyError};

/// Combining tilde, the only diacritic with a feature value.
pub const NASAL_MARK: char = '\u{0303}';
const TIE_BARS: [char; 2] = ['\u{0361}', '\u{035C}'];
const EXTRA_IGNORABLE: &[char] = &[':', '\'', '.', '^', '¹', '²', '³', 'ˈ', 'ˌ', '`'];

/// One parsed phone: the matched symbol text and its encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhoneToken {
    pub symbol: String,
    pub features: PhoneFeatures,
}

/// Maps IPA base symbols to feature templates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTable {
    entries: BTreeMap<String, PhoneFeatures>,
    ignorable: BTreeSet<char>,
    longest: usize,
}

struct Unit {
    base: String,
    nasal: bool,
    offset: usize,
}

impl SymbolTable {
    /// Parses the table format: `symbol kind d2 d3 d4 d5` per line, `#`
    /// comments, and optional `!ignore <chars>` lines adding characters to
    /// strip.
    pub fn parse(text: &str) -> Result<Self, PhonologyError> {
        let mut entries = BTreeMap::new();
        let mut ignorable: BTreeSet<char> = EXTRA_IGNORABLE.iter().copied().collect();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| PhonologyError::BadTable {
                line: lineno + 1,
                message: msg.to_string(),
            };
            if let Some(rest) = line.strip_prefix("!ignore") {
                ignorable.extend(rest.chars().filter(|c| !c.is_whitespace()));
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 6 {
                return Err(bad("expected 6 fields"));
            }
            let symbol: String = fields[0].nfd().collect();
            let kind = kind_from_tag(fields[1]).ok_or_else(|| bad("kind must be V or C"))?;
            let mut dims = [0u8; 5];
            for (slot, field) in dims.iter_mut().zip(&fields[2..]) {
                *slot = field.parse().map_err(|_| bad("dimension is not an integer"))?;
            }
            let features = PhoneFeatures::new(kind, dims).map_err(|e| bad(&e.to_string()))?;
            if let Some(prev) = entries.insert(symbol.clone(), features) {
                if prev != features {
                    return Err(bad(&format!("conflicting entries for {symbol}")));
                }
            }
        }
        let longest = entries.keys().map(|s| unit_len(s)).max().unwrap_or(1);
        Ok(SymbolTable {
            entries,
            ignorable,
            longest,
        })
    }

    pub fn load(path: &Path) -> Result<Self, PhonologyError> {
        let text = std::fs::read_to_string(path).map_err(|e| PhonologyError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&str, PhoneFeatures)> {
        self.entries.iter().map(|(s, f)| (s.as_str(), *f))
    }

    pub fn is_ignorable(&self, c: char) -> bool {
        if c == NASAL_MARK || TIE_BARS.contains(&c) {
            return false;
        }
        self.ignorable.contains(&c)
            || ('\u{0300}'..='\u{036F}').contains(&c)
            || ('\u{1DC0}'..='\u{1DFF}').contains(&c)
            || ('\u{02B0}'..='\u{02FF}').contains(&c)
            || ('\u{1D2C}'..='\u{1D6A}').contains(&c)
    }

    /// Looks up a base symbol; `nasal` sets d6 on vowels and is ignored on
    /// consonants.
    pub fn encode_symbol(&self, symbol: &str, nasal: bool) -> Result<PhoneFeatures, PhonologyError> {
        let key: String = symbol.nfd().collect();
        let f = self
            .entries
            .get(&key)
            .copied()
            .ok_or_else(|| PhonologyError::UnknownSymbol {
                symbol: symbol.to_string(),
                offset: 0,
            })?;
        Ok(if nasal && f.kind() == Kind::Vowel {
            f.with_d6(1)
        } else {
            f
        })
    }

    /// Splits one word into phones without merging diphthongs.
    pub fn tokenize(&self, text: &str) -> Result<Vec<PhoneToken>, PhonologyError> {
        let units = self.units(strip_brackets(text));
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < units.len() {
            let max = self.longest.min(units.len() - i);
            let mut matched = None;
            for k in (1..=max).rev() {
                let key: String = units[i..i + k].iter().map(|u| u.base.as_str()).collect();
                if let Some(f) = self.entries.get(&key) {
                    matched = Some((k, key, *f));
                    break;
                }
            }
            let Some((k, key, template)) = matched else {
                return Err(PhonologyError::UnknownSymbol {
                    symbol: units[i].base.nfc().collect(),
                    offset: units[i].offset,
                });
            };
            let nasal = units[i..i + k].iter().any(|u| u.nasal);
            let features = if nasal && template.is_vowel() {
                template.with_d6(1)
            } else {
                template
            };
            let mut symbol: String = key.nfc().collect();
            if features.is_vowel() && features.d6() == 1 {
                symbol = format!("{}{}", key, NASAL_MARK).nfc().collect();
            }
            tokens.push(PhoneToken { symbol, features });
            i += k;
        }
        Ok(tokens)
    }

    /// Tokenizes one word and merges adjacent vowel pairs left to right.
    pub fn parse_word_tokens(&self, text: &str) -> Result<Vec<PhoneToken>, PhonologyError> {
        let tokens = self.tokenize(text)?;
        if tokens.is_empty() {
            return Err(PhonologyError::EmptyWord(text.to_string()));
        }
        let mut out: Vec<PhoneToken> = Vec::with_capacity(tokens.len());
        let mut iter = tokens.into_iter().peekable();
        while let Some(tok) = iter.next() {
            if tok.features.is_vowel() {
                if let Some(next) = iter.peek() {
                    if next.features.is_vowel() {
                        if let Some(merged) = merge_diphthong(tok.features, next.features)? {
                            let next = iter.next().expect("peeked");
                            out.push(PhoneToken {
                                symbol: format!("{}{}", tok.symbol, next.symbol),
                                features: merged,
                            });
                            continue;
                        }
                    }
                }
            }
            out.push(tok);
        }
        Ok(out)
    }

    pub fn parse_word_transcription(&self, text: &str) -> Result<Vec<PhoneFeatures>, PhonologyError> {
        Ok(self.parse_word_tokens(text)?.into_iter().map(|t| t.features).collect())
    }

    fn units(&self, text: &str) -> Vec<Unit> {
        let mut units: Vec<Unit> = Vec::new();
        let mut join_next = false;
        for (offset, ch) in text.char_indices() {
            for c in std::iter::once(ch).nfd() {
                if c == NASAL_MARK {
                    if let Some(u) = units.last_mut() {
                        u.nasal = true;
                    }
                } else if TIE_BARS.contains(&c) {
                    if let Some(u) = units.last_mut() {
                        u.base.push(TIE_BARS[0]);
                        join_next = true;
                    }
                } else if c.is_whitespace() || self.is_ignorable(c) {
                    continue;
                } else if join_next {
                    units.last_mut().expect("tie bar follows a unit").base.push(c);
                    join_next = false;
                } else {
                    units.push(Unit {
                        base: c.to_string(),
                        nasal: false,
                        offset,
                    });
                }
            }
        }
        units
    }
}

fn unit_len(symbol: &str) -> usize {
    let mut n = 0;
    let mut joined = false;
    for c in symbol.chars() {
        if TIE_BARS.contains(&c) {
            joined = true;
        } else if joined {
            joined = false;
        } else {
            n += 1;
        }
    }
    n.max(1)
}

fn strip_brackets(text: &str) -> &str {
    let t = text.trim();
    for (open, close) in [('[', ']'), ('/', '/')] {
        if let Some(inner) = t.strip_prefix(open).and_then(|s| s.strip_suffix(close)) {
            return inner.trim();
        }
    }
    t
}
