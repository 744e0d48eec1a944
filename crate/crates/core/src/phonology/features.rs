use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::PhonologyError;

/// Dimension 1 of a feature vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    Vowel,
    Consonant,
}

impl Kind {
    /// Closed ranges of dimensions 2..=6 for this kind.
    pub fn ranges(self) -> [RangeInclusive<u8>; 5] {
        match self {
            Kind::Vowel => [1..=7, 1..=3, 0..=1, 0..=2, 0..=1],
            Kind::Consonant => [1..=11, 1..=7, 0..=2, 0..=1, 0..=0],
        }
    }
}

/// A point of the discrete phone feature space.
///
/// For vowels `d2..d6` are height, backness, rounding, diphthong and nasality.
/// For consonants they are place, manner, voice and affrication; `d6` is
/// always 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PhoneFeatures {
    kind: Kind,
    dims: [u8; 5],
}

impl TryFrom<String> for PhoneFeatures {
    type Error = PhonologyError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<PhoneFeatures> for String {
    fn from(f: PhoneFeatures) -> Self {
        f.to_string()
    }
}

impl PhoneFeatures {
    pub fn new(kind: Kind, dims: [u8; 5]) -> Result<Self, PhonologyError> {
        for (i, (value, range)) in dims.iter().zip(kind.ranges()).enumerate() {
            if !range.contains(value) {
                return Err(PhonologyError::OutOfRange {
                    kind,
                    dim: i + 2,
                    value: *value,
                });
            }
        }
        Ok(PhoneFeatures { kind, dims })
    }

    pub fn vowel(height: u8, backness: u8, rounded: u8, diphthong: u8, nasal: u8) -> Result<Self, PhonologyError> {
        Self::new(Kind::Vowel, [height, backness, rounded, diphthong, nasal])
    }

    pub fn consonant(place: u8, manner: u8, voice: u8, affricate: u8) -> Result<Self, PhonologyError> {
        Self::new(Kind::Consonant, [place, manner, voice, affricate, 0])
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn is_vowel(&self) -> bool {
        self.kind == Kind::Vowel
    }

    /// Dimensions 2..=6 in order.
    pub fn dims(&self) -> [u8; 5] {
        self.dims
    }

    pub fn d2(&self) -> u8 {
        self.dims[0]
    }
    pub fn d3(&self) -> u8 {
        self.dims[1]
    }
    pub fn d4(&self) -> u8 {
        self.dims[2]
    }
    pub fn d5(&self) -> u8 {
        self.dims[3]
    }
    pub fn d6(&self) -> u8 {
        self.dims[4]
    }

    pub(crate) fn with_d5(mut self, d5: u8) -> Self {
        self.dims[3] = d5;
        self
    }

    pub(crate) fn with_d6(mut self, d6: u8) -> Self {
        self.dims[4] = d6;
        self
    }

    /// Position of this vector in [`FeatureSpace::standard`].
    pub fn index(&self) -> usize {
        let d = self.dims;
        match self.kind {
            Kind::Vowel => {
                ((((d[0] as usize - 1) * 3 + (d[1] as usize - 1)) * 2 + d[2] as usize) * 3 + d[3] as usize) * 2
                    + d[4] as usize
            }
            Kind::Consonant => {
                VOWEL_COUNT + (((d[0] as usize - 1) * 7 + (d[1] as usize - 1)) * 3 + d[2] as usize) * 2 + d[3] as usize
            }
        }
    }
}

impl fmt::Display for PhoneFeatures {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dims;
        match self.kind {
            Kind::Vowel => write!(f, "(V,{},{},{},{},{})", d[0], d[1], d[2], d[3], d[4]),
            Kind::Consonant => write!(f, "(C,{},{},{},{})", d[0], d[1], d[2], d[3]),
        }
    }
}

impl std::str::FromStr for PhoneFeatures {
    type Err = PhonologyError;

    /// Parses the `Display` form, e.g. `(C,8,4,2,0)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PhonologyError::BadVector(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let mut parts = inner.split(',').map(str::trim);
        let kind = match parts.next() {
            Some("V") => Kind::Vowel,
            Some("C") => Kind::Consonant,
            _ => return Err(bad()),
        };
        let values: Vec<u8> = parts.map(|p| p.parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        let mut dims = [0u8; 5];
        let expected = if kind == Kind::Vowel { 5 } else { 4 };
        if values.len() != expected {
            return Err(bad());
        }
        dims[..expected].copy_from_slice(&values);
        Self::new(kind, dims)
    }
}

const VOWEL_COUNT: usize = 7 * 3 * 2 * 3 * 2;
const CONSONANT_COUNT: usize = 11 * 7 * 3 * 2;

/// The ordered set of every valid feature vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSpace {
    vectors: Vec<PhoneFeatures>,
}

impl FeatureSpace {
    /// All 714 vectors, vowels first, in [`PhoneFeatures::index`] order.
    pub fn standard() -> Self {
        let mut vectors = Vec::with_capacity(VOWEL_COUNT + CONSONANT_COUNT);
        for kind in [Kind::Vowel, Kind::Consonant] {
            let [r2, r3, r4, r5, r6] = kind.ranges();
            for a in r2 {
                for b in r3.clone() {
                    for c in r4.clone() {
                        for d in r5.clone() {
                            for e in r6.clone() {
                                vectors.push(PhoneFeatures {
                                    kind,
                                    dims: [a, b, c, d, e],
                                });
                            }
                        }
                    }
                }
            }
        }
        FeatureSpace { vectors }
    }

    pub fn vectors(&self) -> &[PhoneFeatures] {
        &self.vectors
    }

    pub fn cardinality(&self) -> usize {
        self.vectors.len()
    }

    pub fn get(&self, index: usize) -> Option<PhoneFeatures> {
        self.vectors.get(index).copied()
    }
}

impl Default for FeatureSpace {
    fn default() -> Self {
        Self::standard()
    }
}

/// Short tag used in table files: `V` or `C`.
pub(crate) fn kind_from_tag(tag: &str) -> Option<Kind> {
    match tag {
        "V" | "v" | "vowel" => Some(Kind::Vowel),
        "C" | "c" | "consonant" => Some(Kind::Consonant),
        _ => None,
    }
}
