use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HmmError;
use crate::lexicon::PhonemeInventory;
use crate::phonology::{FeatureSpace, PhoneFeatures};

pub const DEFAULT_P_INS: f64 = 0.01;
pub const DEFAULT_P_DEL: f64 = 0.01;
pub const DEFAULT_SIGMA: f64 = 2.0 / 3.0;
pub const DEFAULT_PRIOR_WEIGHT: f64 = 20.0;

/// Distributions must sum to one within this bound.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// The four scalar constants of the naive model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub p_ins: f64,
    /// Deletion probability given no insertion.
    pub p_del: f64,
    pub sigma: f64,
    pub prior_weight: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            p_ins: DEFAULT_P_INS,
            p_del: DEFAULT_P_DEL,
            sigma: DEFAULT_SIGMA,
            prior_weight: DEFAULT_PRIOR_WEIGHT,
        }
    }
}

impl Constants {
    pub fn validate(&self) -> Result<(), HmmError> {
        let open_unit = |x: f64| x > 0.0 && x < 1.0;
        if !open_unit(self.p_ins) {
            return Err(HmmError::InvalidParams(format!(
                "p_ins must lie in (0, 1), got {}",
                self.p_ins
            )));
        }
        if !open_unit(self.p_del) {
            return Err(HmmError::InvalidParams(format!(
                "p_del must lie in (0, 1), got {}",
                self.p_del
            )));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(HmmError::InvalidParams(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        if !(self.prior_weight > 0.0 && self.prior_weight.is_finite()) {
            return Err(HmmError::InvalidParams(format!(
                "prior weight must be positive, got {}",
                self.prior_weight
            )));
        }
        Ok(())
    }
}

/// Discretized Gaussian over `lo..=hi` centred on `center`, normalized.
pub fn bell(center: u8, lo: u8, hi: u8, sigma: f64) -> Vec<f64> {
    let raw: Vec<f64> = (lo..=hi)
        .map(|d| {
            let x = d as f64 - center as f64;
            (-x * x / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|r| r / total).collect()
}

/// Naive perception of `p`: a product of per-dimension bells, zero across
/// the vowel/consonant divide.
pub fn naive_emission(p: PhoneFeatures, space: &FeatureSpace, sigma: f64) -> Vec<f64> {
    let ranges = p.kind().ranges();
    let factors: Vec<Vec<f64>> = ranges
        .iter()
        .zip(p.dims())
        .map(|(r, c)| bell(c, *r.start(), *r.end(), sigma))
        .collect();
    space
        .vectors()
        .iter()
        .map(|v| {
            if v.kind() != p.kind() {
                return 0.0;
            }
            v.dims()
                .iter()
                .zip(&ranges)
                .zip(&factors)
                .map(|((d, r), f)| f[(d - r.start()) as usize])
                .product()
        })
        .collect()
}

/// All free parameters of the word models.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub(crate) p_ins: f64,
    pub(crate) emit_ins: Vec<f64>,
    pub(crate) p_del_bar: BTreeMap<PhoneFeatures, f64>,
    pub(crate) emit: BTreeMap<PhoneFeatures, Vec<f64>>,
    pub(crate) prior_weight: f64,
    pub(crate) sigma: f64,
}

impl ModelParams {
    /// Naive parameters with the default constants.
    pub fn naive(inventory: &PhonemeInventory, space: &FeatureSpace) -> Self {
        Self::naive_with(inventory, space, Constants::default()).expect("default constants are valid")
    }

    pub fn naive_with(inventory: &PhonemeInventory, space: &FeatureSpace, c: Constants) -> Result<Self, HmmError> {
        c.validate()?;
        if inventory.is_empty() {
            return Err(HmmError::InvalidParams("empty phoneme inventory".into()));
        }
        let uniform = 1.0 / space.cardinality() as f64;
        Ok(ModelParams {
            p_ins: c.p_ins,
            emit_ins: vec![uniform; space.cardinality()],
            p_del_bar: inventory.phonemes.iter().map(|p| (*p, c.p_del)).collect(),
            emit: inventory
                .phonemes
                .iter()
                .map(|p| (*p, naive_emission(*p, space, c.sigma)))
                .collect(),
            prior_weight: c.prior_weight,
            sigma: c.sigma,
        })
    }

    pub fn p_ins(&self) -> f64 {
        self.p_ins
    }

    pub fn prior_weight(&self) -> f64 {
        self.prior_weight
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn emit_ins(&self) -> &[f64] {
        &self.emit_ins
    }

    pub fn phonemes(&self) -> impl Iterator<Item = PhoneFeatures> + '_ {
        self.emit.keys().copied()
    }

    pub fn p_del_bar(&self, p: &PhoneFeatures) -> Option<f64> {
        self.p_del_bar.get(p).copied()
    }

    pub fn emit(&self, p: &PhoneFeatures) -> Option<&[f64]> {
        self.emit.get(p).map(Vec::as_slice)
    }

    /// P(del|p) = (1 - P(ins)) P(del|p, no ins).
    pub fn p_del(&self, p: &PhoneFeatures) -> Option<f64> {
        self.p_del_bar(p).map(|bar| (1.0 - self.p_ins) * bar)
    }

    /// P(prod|p), taken as the complement of insertion and deletion so the
    /// three outgoing probabilities of a state sum to one in floating point.
    pub fn p_prod(&self, p: &PhoneFeatures) -> Option<f64> {
        self.p_del(p).map(|del| 1.0 - (self.p_ins + del))
    }

    /// Checks every stochasticity invariant.
    pub fn check(&self) -> Result<(), HmmError> {
        let bad = |m: String| Err(HmmError::InvalidParams(m));
        if !(self.p_ins > 0.0 && self.p_ins < 1.0) {
            return bad(format!("p_ins {} outside (0, 1)", self.p_ins));
        }
        let space = FeatureSpace::standard();
        if self.emit_ins.len() != space.cardinality() {
            return bad(format!("emit_ins has {} entries", self.emit_ins.len()));
        }
        check_distribution("emit_ins", &self.emit_ins)?;
        if self.p_del_bar.len() != self.emit.len() || !self.p_del_bar.keys().eq(self.emit.keys()) {
            return bad("p_del_bar and emit cover different phonemes".into());
        }
        for (p, dist) in &self.emit {
            let bar = self.p_del_bar[p];
            if !(0.0..=1.0).contains(&bar) {
                return bad(format!("p_del_bar({p}) = {bar} outside [0, 1]"));
            }
            let del = self.p_del(p).expect("present");
            let prod = self.p_prod(p).expect("present");
            if self.p_ins + del + prod != 1.0 {
                return bad(format!("outgoing probabilities of {p} do not sum to 1"));
            }
            check_distribution(&format!("emit({p})"), dist)?;
            if dist.len() != space.cardinality() {
                return bad(format!("emit({p}) has {} entries", dist.len()));
            }
            for (v, prob) in space.vectors().iter().zip(dist) {
                if v.kind() != p.kind() && *prob != 0.0 {
                    return bad(format!("emit({p}) gives mass across the vowel/consonant divide"));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let snap = Snapshot {
            format: FORMAT.to_string(),
            p_ins: self.p_ins,
            prior_weight: self.prior_weight,
            sigma: self.sigma,
            space_size: self.emit_ins.len(),
            emit_ins: self.emit_ins.clone(),
            phonemes: self
                .emit
                .iter()
                .map(|(p, dist)| PhonemeSnapshot {
                    phoneme: *p,
                    p_del_bar: self.p_del_bar[p],
                    emit: dist.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&snap).expect("snapshot serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, HmmError> {
        let snap: Snapshot = serde_json::from_str(text).map_err(|e| HmmError::Schema(e.to_string()))?;
        if snap.format != FORMAT {
            return Err(HmmError::Schema(format!("unsupported format {:?}", snap.format)));
        }
        let size = FeatureSpace::standard().cardinality();
        if snap.space_size != size || snap.emit_ins.len() != size {
            return Err(HmmError::Schema(format!("expected {size} feature vectors")));
        }
        let mut p_del_bar = BTreeMap::new();
        let mut emit = BTreeMap::new();
        for ph in snap.phonemes {
            if ph.emit.len() != size {
                return Err(HmmError::Schema(format!(
                    "emit({}) has {} entries",
                    ph.phoneme,
                    ph.emit.len()
                )));
            }
            if p_del_bar.insert(ph.phoneme, ph.p_del_bar).is_some() {
                return Err(HmmError::Schema(format!("phoneme {} listed twice", ph.phoneme)));
            }
            emit.insert(ph.phoneme, ph.emit);
        }
        let params = ModelParams {
            p_ins: snap.p_ins,
            emit_ins: snap.emit_ins,
            p_del_bar,
            emit,
            prior_weight: snap.prior_weight,
            sigma: snap.sigma,
        };
        params.check().map_err(|e| HmmError::Schema(e.to_string()))?;
        Ok(params)
    }

    pub fn save(&self, path: &Path) -> Result<(), HmmError> {
        std::fs::write(path, self.to_json()).map_err(|e| HmmError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, HmmError> {
        let text = std::fs::read_to_string(path).map_err(|e| HmmError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }
}

fn check_distribution(name: &str, dist: &[f64]) -> Result<(), HmmError> {
    if dist.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(HmmError::InvalidParams(format!("{name} has an entry outside [0, 1]")));
    }
    let total: f64 = dist.iter().sum();
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(HmmError::InvalidParams(format!("{name} sums to {total}")));
    }
    Ok(())
}

const FORMAT: &str = "accent-params/1";

#[derive(Serialize, Deserialize)]
struct Snapshot {
    format: String,
    p_ins: f64,
    prior_weight: f64,
    sigma: f64,
    space_size: usize,
    emit_ins: Vec<f64>,
    phonemes: Vec<PhonemeSnapshot>,
}

#[derive(Serialize, Deserialize)]
struct PhonemeSnapshot {
    phoneme: PhoneFeatures,
    p_del_bar: f64,
    emit: Vec<f64>,
}
