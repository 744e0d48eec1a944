use std::collections::BTreeMap;

use super::{Alignment, HmmError, ModelParams, Step};
use crate::phonology::PhoneFeatures;

/// Transition and emission tallies over a set of alignments.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransformCounts {
    pub n_ins: u64,
    pub n_not_ins: u64,
    pub n_del: BTreeMap<PhoneFeatures, u64>,
    pub n_prod: BTreeMap<PhoneFeatures, u64>,
    pub n_v_ins: BTreeMap<PhoneFeatures, u64>,
    pub n_v_prod: BTreeMap<(PhoneFeatures, PhoneFeatures), u64>,
}

impl TransformCounts {
    pub fn add(&mut self, alignment: &Alignment) {
        for step in &alignment.steps {
            match *step {
                Step::Produce { phoneme, observed } => {
                    self.n_not_ins += 1;
                    *self.n_prod.entry(phoneme).or_default() += 1;
                    *self.n_v_prod.entry((phoneme, observed)).or_default() += 1;
                }
                Step::Delete { phoneme } => {
                    self.n_not_ins += 1;
                    *self.n_del.entry(phoneme).or_default() += 1;
                }
                Step::Insert { observed } => {
                    self.n_ins += 1;
                    *self.n_v_ins.entry(observed).or_default() += 1;
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.n_ins == 0 && self.n_not_ins == 0
    }

    pub fn deletions(&self, p: &PhoneFeatures) -> u64 {
        self.n_del.get(p).copied().unwrap_or(0)
    }

    pub fn productions(&self, p: &PhoneFeatures, v: &PhoneFeatures) -> u64 {
        self.n_v_prod.get(&(*p, *v)).copied().unwrap_or(0)
    }

    pub fn insertions(&self, v: &PhoneFeatures) -> u64 {
        self.n_v_ins.get(v).copied().unwrap_or(0)
    }

    /// Checks that the marginal totals agree with the detailed tallies.
    pub fn is_consistent(&self) -> bool {
        let ins: u64 = self.n_v_ins.values().sum();
        let mut prod_by_p: BTreeMap<PhoneFeatures, u64> = BTreeMap::new();
        for ((p, _), n) in &self.n_v_prod {
            *prod_by_p.entry(*p).or_default() += n;
        }
        let prod_matches = prod_by_p
            .iter()
            .filter(|(_, n)| **n > 0)
            .eq(self.n_prod.iter().filter(|(_, n)| **n > 0));
        let not_ins: u64 = self.n_del.values().sum::<u64>() + self.n_prod.values().sum::<u64>();
        ins == self.n_ins && prod_matches && not_ins == self.n_not_ins
    }
}

/// Tallies every step of every alignment.
pub fn accumulate_counts<'a>(alignments: impl IntoIterator<Item = &'a Alignment>) -> TransformCounts {
    let mut counts = TransformCounts::default();
    for a in alignments {
        counts.add(a);
    }
    counts
}

/// One batch update: counts blended with the current parameters as a prior
/// of weight C.
pub fn update_params(params: &ModelParams, counts: &TransformCounts) -> Result<ModelParams, HmmError> {
    if !counts.is_consistent() {
        return Err(HmmError::InconsistentCounts);
    }
    for p in counts.n_del.keys().chain(counts.n_prod.keys()) {
        if !params.emit.contains_key(p) {
            return Err(HmmError::UnknownPhoneme(*p));
        }
    }
    let c = params.prior_weight;
    let mut out = params.clone();

    let n_ins = counts.n_ins as f64;
    out.p_ins = (n_ins + c * params.p_ins) / (n_ins + counts.n_not_ins as f64 + c);
    let denom = c + n_ins;
    for (slot, prior) in out.emit_ins.iter_mut().zip(&params.emit_ins) {
        *slot = c * prior;
    }
    for (v, n) in &counts.n_v_ins {
        out.emit_ins[v.index()] += *n as f64;
    }
    for slot in out.emit_ins.iter_mut() {
        *slot /= denom;
    }

    for (p, bar) in out.p_del_bar.iter_mut() {
        let n_del = counts.deletions(p) as f64;
        let n_prod = counts.n_prod.get(p).copied().unwrap_or(0) as f64;
        *bar = (n_del + c * params.p_del_bar[p]) / (n_del + n_prod + c);
    }
    for dist in out.emit.values_mut() {
        for slot in dist.iter_mut() {
            *slot *= c;
        }
    }
    for ((p, v), n) in &counts.n_v_prod {
        out.emit.get_mut(p).expect("checked above")[v.index()] += *n as f64;
    }
    for (p, dist) in out.emit.iter_mut() {
        let denom = c + counts.n_prod.get(p).copied().unwrap_or(0) as f64;
        for slot in dist.iter_mut() {
            *slot /= denom;
        }
    }
    Ok(out)
}
