use super::{HmmError, ModelParams, WordHmm};
use crate::phonology::PhoneFeatures;

/// Candidates closer than this in log space count as equal when Viterbi
/// picks a backpointer.
pub const VITERBI_TIE_EPSILON: f64 = 1e-12;

/// One move through the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    Produce,
    Delete,
    Insert,
}

/// Log weights of every arc for one (word, observation) pair.
///
/// Cell `(k, i)` means "k observations consumed, in state S_{i+1}".
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    n: usize,
    m: usize,
    /// `prod[i * m + k]`: produce phoneme i and emit observation k.
    prod: Vec<f64>,
    del: Vec<f64>,
    ins: Vec<f64>,
    exit: f64,
}

impl Lattice {
    pub fn new(hmm: &WordHmm, obs: &[PhoneFeatures], params: &ModelParams) -> Result<Self, HmmError> {
        let n = hmm.phonemes().len();
        let m = obs.len();
        let mut prod = Vec::with_capacity(n * m);
        let mut del = Vec::with_capacity(n);
        for p in hmm.phonemes() {
            let emit = params.emit(p).ok_or(HmmError::UnknownPhoneme(*p))?;
            let ln_prod = params.p_prod(p).expect("phoneme present").ln();
            del.push(params.p_del(p).expect("phoneme present").ln());
            prod.extend(obs.iter().map(|v| ln_prod + emit[v.index()].ln()));
        }
        let ln_ins = params.p_ins().ln();
        let ins = obs.iter().map(|v| ln_ins + params.emit_ins()[v.index()].ln()).collect();
        Ok(Lattice {
            n,
            m,
            prod,
            del,
            ins,
            exit: (1.0 - params.p_ins()).ln(),
        })
    }

    /// Builds a lattice from linear-domain arc weights, already multiplied
    /// by transition probabilities: `produce[i][k]`, `delete[i]`,
    /// `insert[k]`, and the exit weight.
    pub fn from_weights(produce: &[Vec<f64>], delete: &[f64], insert: &[f64], exit: f64) -> Self {
        let n = delete.len();
        let m = insert.len();
        assert_eq!(produce.len(), n);
        assert!(produce.iter().all(|row| row.len() == m));
        Lattice {
            n,
            m,
            prod: produce.iter().flatten().map(|w| w.ln()).collect(),
            del: delete.iter().map(|w| w.ln()).collect(),
            ins: insert.iter().map(|w| w.ln()).collect(),
            exit: exit.ln(),
        }
    }

    pub fn phonemes(&self) -> usize {
        self.n
    }

    pub fn observations(&self) -> usize {
        self.m
    }

    /// Log weight of a single arc entering cell `(k, i)` with `op`.
    fn arc(&self, op: Op, k: usize, i: usize) -> f64 {
        match op {
            Op::Produce => self.prod[(i - 1) * self.m + (k - 1)],
            Op::Delete => self.del[i - 1],
            Op::Insert => self.ins[k - 1],
        }
    }

    fn predecessor(op: Op, k: usize, i: usize) -> Option<(usize, usize)> {
        match op {
            Op::Produce if k > 0 && i > 0 => Some((k - 1, i - 1)),
            Op::Delete if i > 0 => Some((k, i - 1)),
            Op::Insert if k > 0 => Some((k - 1, i)),
            _ => None,
        }
    }

    /// Log probability of the observations summed over all paths.
    pub fn forward(&self) -> f64 {
        let w = self.n + 1;
        let mut alpha = vec![f64::NEG_INFINITY; (self.m + 1) * w];
        alpha[0] = 0.0;
        for k in 0..=self.m {
            for i in 0..=self.n {
                if k == 0 && i == 0 {
                    continue;
                }
                let mut terms = [f64::NEG_INFINITY; 3];
                for (slot, op) in terms.iter_mut().zip([Op::Produce, Op::Delete, Op::Insert]) {
                    if let Some((pk, pi)) = Self::predecessor(op, k, i) {
                        *slot = alpha[pk * w + pi] + self.arc(op, k, i);
                    }
                }
                alpha[k * w + i] = log_sum_exp(&terms);
            }
        }
        alpha[self.m * w + self.n] + self.exit
    }

    /// Most probable path and its log weight. Ties within
    /// [`VITERBI_TIE_EPSILON`] go to Produce, then Delete, then Insert.
    pub fn viterbi(&self) -> Option<(Vec<Op>, f64)> {
        let w = self.n + 1;
        let mut delta = vec![f64::NEG_INFINITY; (self.m + 1) * w];
        let mut back: Vec<Option<Op>> = vec![None; (self.m + 1) * w];
        delta[0] = 0.0;
        for k in 0..=self.m {
            for i in 0..=self.n {
                if k == 0 && i == 0 {
                    continue;
                }
                let mut cands = [(Op::Produce, f64::NEG_INFINITY); 3];
                for (slot, op) in cands.iter_mut().zip([Op::Produce, Op::Delete, Op::Insert]) {
                    if let Some((pk, pi)) = Self::predecessor(op, k, i) {
                        *slot = (op, delta[pk * w + pi] + self.arc(op, k, i));
                    }
                }
                let best = cands.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
                if best == f64::NEG_INFINITY {
                    continue;
                }
                let (op, _) = *cands
                    .iter()
                    .find(|c| best - c.1 <= VITERBI_TIE_EPSILON)
                    .expect("best is one of the candidates");
                delta[k * w + i] = best;
                back[k * w + i] = Some(op);
            }
        }
        let end = delta[self.m * w + self.n];
        if end == f64::NEG_INFINITY {
            return None;
        }
        let mut ops = Vec::with_capacity(self.m + self.n);
        let (mut k, mut i) = (self.m, self.n);
        while k > 0 || i > 0 {
            let op = back[k * w + i].expect("reachable cell has a backpointer");
            ops.push(op);
            (k, i) = Self::predecessor(op, k, i).expect("valid move");
        }
        ops.reverse();
        Some((ops, end + self.exit))
    }

    /// Log weight of an explicit op sequence, or `None` if it does not
    /// consume exactly the phonemes and observations.
    pub fn path_log_weight(&self, ops: &[Op]) -> Option<f64> {
        let (mut k, mut i) = (0usize, 0usize);
        let mut total = 0.0;
        for op in ops {
            match op {
                Op::Produce => {
                    k += 1;
                    i += 1;
                }
                Op::Delete => i += 1,
                Op::Insert => k += 1,
            }
            if k > self.m || i > self.n {
                return None;
            }
            total += self.arc(*op, k, i);
        }
        (k == self.m && i == self.n).then_some(total + self.exit)
    }
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}
