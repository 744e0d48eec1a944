use crate::hmm::TransformCounts;
use crate::phonology::{PhoneFeatures, SymbolTable};

use super::HarnessError;

/// One hand-counted transformation. `None` on the native side is an
/// insertion, on the foreign side a deletion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceRow {
    pub native_symbol: String,
    pub foreign_symbol: String,
    pub native: Option<PhoneFeatures>,
    pub foreign: Option<PhoneFeatures>,
    pub learning: u64,
    pub test: u64,
    pub model: u64,
}

/// Parses `native foreign learning test model` rows; `-` marks an empty side.
pub fn parse_reference(text: &str, table: &SymbolTable) -> Result<Vec<ReferenceRow>, HarnessError> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: String| HarnessError::BadReference { line: i + 1, message };
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        if cols.len() != 5 {
            return Err(bad(format!("expected 5 columns, found {}", cols.len())));
        }
        let side = |s: &str| -> Result<Option<PhoneFeatures>, HarnessError> {
            if s == "-" {
                return Ok(None);
            }
            let phones = table.parse_word_transcription(s).map_err(|e| bad(e.to_string()))?;
            match phones.as_slice() {
                [p] => Ok(Some(*p)),
                _ => Err(bad(format!("{s:?} is not a single phone"))),
            }
        };
        let count = |s: &str| s.parse::<u64>().map_err(|_| bad(format!("bad count {s:?}")));
        let (native, foreign) = (side(cols[0])?, side(cols[1])?);
        if native.is_none() && foreign.is_none() {
            return Err(bad("both sides empty".into()));
        }
        rows.push(ReferenceRow {
            native_symbol: cols[0].to_string(),
            foreign_symbol: cols[1].to_string(),
            native,
            foreign,
            learning: count(cols[2])?,
            test: count(cols[3])?,
            model: count(cols[4])?,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub reference: ReferenceRow,
    pub computed: u64,
    pub matches: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransformationTable {
    pub rows: Vec<TableRow>,
}

impl TransformationTable {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.matches)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &TableRow> {
        self.rows.iter().filter(|r| !r.matches)
    }

    pub fn render(&self) -> String {
        let mut out = String::from("native\tforeign\tlearning\ttest\treference-model\tcomputed\tmatch\n");
        for r in &self.rows {
            let f = &r.reference;
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                f.native_symbol,
                f.foreign_symbol,
                f.learning,
                f.test,
                f.model,
                r.computed,
                if r.matches { "yes" } else { "NO" }
            ));
        }
        out
    }
}

/// Looks up each reference row in the model counts.
pub fn transformation_table(counts: &TransformCounts, reference: &[ReferenceRow]) -> TransformationTable {
    let rows = reference
        .iter()
        .map(|r| {
            let computed = match (r.native, r.foreign) {
                (Some(p), Some(v)) => counts.productions(&p, &v),
                (Some(p), None) => counts.deletions(&p),
                (None, Some(v)) => counts.insertions(&v),
                (None, None) => 0,
            };
            TableRow {
                reference: r.clone(),
                computed,
                matches: computed == r.model,
            }
        })
        .collect();
    TransformationTable { rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn empty_inputs_give_empty_table() {
        let t = transformation_table(&TransformCounts::default(), &[]);
        assert!(t.rows.is_empty());
        assert!(t.all_match());
    }

    #[test]
    fn bundled_reference_parses() {
        let rows = parse_reference(bundled::FRENCH8_REFERENCE, &bundled::symbol_table()).unwrap();
        assert_eq!(rows.len(), 41);
        let zs = rows
            .iter()
            .find(|r| r.native_symbol == "z" && r.foreign_symbol == "s")
            .unwrap();
        assert_eq!(zs.model, 7);
    }

    #[test]
    fn bad_rows_rejected() {
        let table = bundled::symbol_table();
        assert!(parse_reference("z\ts\t1\t2\n", &table).is_err());
        assert!(parse_reference("-\t-\t0\t0\t0\n", &table).is_err());
        assert!(parse_reference("st\ts\t0\t0\t0\n", &table).is_err());
    }
}
