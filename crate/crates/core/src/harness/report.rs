use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::hmm::Step;
use crate::lexicon::Lexicon;
use crate::phonology::{PhoneFeatures, SymbolTable, NASAL_MARK};

use super::stats::{balanced_subset, group_report, two_way_anova, RateTable};
use super::table::{transformation_table, ReferenceRow};
use super::{EvalReport, HarnessError, SpeakerEvaluation};

/// Readable names for feature vectors: lexicon spellings first, then the
/// symbol table, then the raw vector.
pub struct PhoneNames {
    names: BTreeMap<PhoneFeatures, String>,
}

impl PhoneNames {
    pub fn new(lexicon: &Lexicon, table: &SymbolTable) -> Self {
        let mut names = lexicon.phoneme_names();
        for (symbol, f) in table.symbols() {
            names.entry(f).or_insert_with(|| symbol.to_string());
        }
        PhoneNames { names }
    }

    pub fn name(&self, v: &PhoneFeatures) -> String {
        if let Some(n) = self.names.get(v) {
            return n.clone();
        }
        if v.is_vowel() && v.d6() == 1 {
            let oral = PhoneFeatures::vowel(v.d2(), v.d3(), v.d4(), v.d5(), 0).expect("valid");
            if let Some(n) = self.names.get(&oral) {
                return format!("{n}{NASAL_MARK}");
            }
        }
        v.to_string()
    }
}

fn render_eval(out: &mut String, r: &EvalReport) {
    let _ = writeln!(
        out,
        "{} learning: {}/{} correct, rate {:.4}",
        r.condition,
        r.correct,
        r.items.len(),
        r.rate
    );
    for item in &r.items {
        let _ = writeln!(
            out,
            "  {} {:<10} [{}]",
            if item.correct { "+" } else { "-" },
            item.target,
            item.tie_set.join(" ")
        );
    }
}

pub fn render_speaker_report(e: &SpeakerEvaluation, names: &PhoneNames) -> String {
    let mut out = String::new();
    let group = e.group.map(|g| g.to_string()).unwrap_or_else(|| "-".into());
    let _ = writeln!(out, "speaker {} (group {group})", e.speaker);
    let _ = writeln!(out);
    render_eval(&mut out, &e.before);
    let _ = writeln!(out);
    render_eval(&mut out, &e.after);
    let _ = writeln!(out);
    let _ = writeln!(out, "training alignments:");
    for a in &e.alignments {
        let steps: Vec<String> = a
            .steps
            .iter()
            .map(|s| match s {
                Step::Produce { phoneme, observed } if phoneme == observed => names.name(phoneme),
                Step::Produce { phoneme, observed } => format!("{}>{}", names.name(phoneme), names.name(observed)),
                Step::Delete { phoneme } => format!("{}>-", names.name(phoneme)),
                Step::Insert { observed } => format!("->{}", names.name(observed)),
            })
            .collect();
        let _ = writeln!(out, "  {:<10} {}", a.word, steps.join(" "));
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "transformations (count, native > observed):");
    let mut rows: Vec<(String, u64)> = Vec::new();
    for ((p, v), n) in &e.counts.n_v_prod {
        if p != v {
            rows.push((format!("{} > {}", names.name(p), names.name(v)), *n));
        }
    }
    for (p, n) in e.counts.n_del.iter().filter(|(_, n)| **n > 0) {
        rows.push((format!("{} > -", names.name(p)), *n));
    }
    for (v, n) in &e.counts.n_v_ins {
        rows.push((format!("- > {}", names.name(v)), *n));
    }
    for (label, n) in rows {
        let _ = writeln!(out, "  {n:>3}  {label}");
    }
    out
}

/// `speaker,group,condition,rate` rows in speaker order.
pub fn rates_csv(evals: &[SpeakerEvaluation]) -> String {
    let mut sorted: Vec<&SpeakerEvaluation> = evals.iter().collect();
    sorted.sort_by(|a, b| a.speaker.cmp(&b.speaker));
    let mut out = String::from("speaker,group,condition,rate\n");
    for e in sorted {
        let group = e.group.map(|g| g.to_string()).unwrap_or_default();
        for r in [&e.before, &e.after] {
            let _ = writeln!(out, "{},{},{},{:.4}", e.speaker, group, r.condition, r.rate);
        }
    }
    out
}

/// Group means and, when both groups have at least two speakers, the
/// two-way ANOVA on a balanced subset.
pub fn summary_text(evals: &[SpeakerEvaluation]) -> String {
    let mut out = String::from("group\tcondition\tn\tmean\tstandard-error\n");
    for s in group_report(evals) {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{:.4}\t{:.4}",
            s.group, s.condition, s.n, s.mean, s.standard_error
        );
    }
    let subset = balanced_subset(evals);
    let table = RateTable::from_evaluations(subset.iter().copied());
    match two_way_anova(&table) {
        Ok(r) => {
            let used: Vec<&str> = subset.iter().map(|e| e.speaker.as_str()).collect();
            let _ = writeln!(out);
            let _ = writeln!(out, "two-way ANOVA on {} speakers: {}", used.len(), used.join(" "));
            for (name, e) in [
                ("learning", r.learning),
                ("speakers", r.speakers),
                ("interaction", r.interaction),
            ] {
                let _ = writeln!(
                    out,
                    "  {name:<12} SS={:.4} F({},{})={:.4} p={:.6}",
                    e.sum_of_squares, e.df, r.df_error, e.f, e.p
                );
            }
        }
        Err(e) => {
            let _ = writeln!(out);
            let _ = writeln!(out, "two-way ANOVA not computed: {e}");
        }
    }
    out
}

/// Paths of the files written by [`write_reports`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReportFiles {
    pub speaker_reports: Vec<PathBuf>,
    pub rates_csv: PathBuf,
    pub summary: PathBuf,
    pub transformations: Option<PathBuf>,
}

/// Writes one text report per speaker, `rates.csv`, `summary.txt`, and the
/// transformation comparison for `reference` if given.
pub fn write_reports(
    out_dir: &Path,
    evals: &[SpeakerEvaluation],
    names: &PhoneNames,
    reference: Option<(&str, &[ReferenceRow])>,
) -> Result<ReportFiles, HarnessError> {
    let write = |path: &Path, text: &str| {
        std::fs::write(path, text).map_err(|e| HarnessError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    };
    std::fs::create_dir_all(out_dir).map_err(|e| HarnessError::Io {
        path: out_dir.display().to_string(),
        message: e.to_string(),
    })?;
    let mut files = ReportFiles::default();
    for e in evals {
        let path = out_dir.join(format!("{}.txt", e.speaker));
        write(&path, &render_speaker_report(e, names))?;
        files.speaker_reports.push(path);
    }
    files.rates_csv = out_dir.join("rates.csv");
    write(&files.rates_csv, &rates_csv(evals))?;
    files.summary = out_dir.join("summary.txt");
    write(&files.summary, &summary_text(evals))?;
    if let Some((speaker, rows)) = reference {
        let e = evals
            .iter()
            .find(|e| e.speaker == speaker)
            .ok_or_else(|| HarnessError::BadReference {
                line: 0,
                message: format!("no evaluated speaker {speaker:?}"),
            })?;
        let path = out_dir.join(format!("{speaker}_transformations.tsv"));
        write(&path, &transformation_table(&e.counts, rows).render())?;
        files.transformations = Some(path);
    }
    Ok(files)
}
