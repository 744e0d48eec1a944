use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use super::{Condition, Group, HarnessError, SpeakerEvaluation};

/// Recognition rates by group and condition. `cells[g][c]` holds one rate
/// per speaker, with g = 0 for group A and c = 0 for the before condition.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RateTable {
    pub cells: [[Vec<f64>; 2]; 2],
}

impl RateTable {
    pub fn from_evaluations<'a>(evals: impl IntoIterator<Item = &'a SpeakerEvaluation>) -> Self {
        let mut t = RateTable::default();
        for e in evals {
            let Some(g) = e.group else { continue };
            let gi = (g == Group::B) as usize;
            t.cells[gi][0].push(e.before.rate);
            t.cells[gi][1].push(e.after.rate);
        }
        t
    }

    /// Speakers per cell if the design is balanced.
    pub fn replication(&self) -> Result<usize, HarnessError> {
        let n = self.cells[0][0].len();
        let sizes: Vec<usize> = self.cells.iter().flatten().map(Vec::len).collect();
        if sizes.iter().any(|s| *s != n) {
            return Err(HarnessError::UnbalancedDesign(format!("cell sizes {sizes:?}")));
        }
        if n < 2 {
            return Err(HarnessError::UnbalancedDesign(format!(
                "{n} observation(s) per cell, need at least 2"
            )));
        }
        Ok(n)
    }
}

/// Keeps the first `min(n_A, n_B)` labelled speakers of each group, in input
/// order, so that the rate table is balanced.
pub fn balanced_subset(evals: &[SpeakerEvaluation]) -> Vec<&SpeakerEvaluation> {
    let count = |g| evals.iter().filter(|e| e.group == Some(g)).count();
    let n = count(Group::A).min(count(Group::B));
    let mut out = Vec::new();
    for g in [Group::A, Group::B] {
        out.extend(evals.iter().filter(|e| e.group == Some(g)).take(n));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnovaEffect {
    pub sum_of_squares: f64,
    pub df: usize,
    pub f: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnovaResult {
    /// Condition (before/after).
    pub learning: AnovaEffect,
    /// Group (A/B).
    pub speakers: AnovaEffect,
    pub interaction: AnovaEffect,
    pub ss_error: f64,
    pub df_error: usize,
}

/// Two-factor fixed-effects ANOVA with n replicates per cell, treating every
/// rate as an independent observation.
pub fn two_way_anova(table: &RateTable) -> Result<AnovaResult, HarnessError> {
    let n = table.replication()?;
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let cell: [[f64; 2]; 2] = [0, 1].map(|g| [0, 1].map(|c| mean(&table.cells[g][c])));
    let grand = (cell[0][0] + cell[0][1] + cell[1][0] + cell[1][1]) / 4.0;
    let group_mean = [0, 1].map(|g| (cell[g][0] + cell[g][1]) / 2.0);
    let cond_mean = [0, 1].map(|c| (cell[0][c] + cell[1][c]) / 2.0);
    let nf = n as f64;

    let ss_group: f64 = group_mean.iter().map(|m| 2.0 * nf * (m - grand).powi(2)).sum();
    let ss_cond: f64 = cond_mean.iter().map(|m| 2.0 * nf * (m - grand).powi(2)).sum();
    let mut ss_inter = 0.0;
    let mut ss_error = 0.0;
    for g in 0..2 {
        for c in 0..2 {
            ss_inter += nf * (cell[g][c] - group_mean[g] - cond_mean[c] + grand).powi(2);
            ss_error += table.cells[g][c].iter().map(|x| (x - cell[g][c]).powi(2)).sum::<f64>();
        }
    }
    let df_error = 4 * (n - 1);
    let mse = ss_error / df_error as f64;
    let effect = |ss: f64| {
        let f = if ss == 0.0 {
            0.0
        } else if mse == 0.0 {
            f64::INFINITY
        } else {
            ss / mse
        };
        let p = if f.is_infinite() {
            0.0
        } else {
            FisherSnedecor::new(1.0, df_error as f64)
                .expect("positive degrees of freedom")
                .sf(f)
        };
        AnovaEffect {
            sum_of_squares: ss,
            df: 1,
            f,
            p,
        }
    };
    Ok(AnovaResult {
        learning: effect(ss_cond),
        speakers: effect(ss_group),
        interaction: effect(ss_inter),
        ss_error,
        df_error,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub group: Group,
    pub condition: Condition,
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation over the square root of n; 0 when n = 1.
    pub standard_error: f64,
}

/// Mean and standard error of the rates per group and condition. Speakers
/// without a group label are left out.
pub fn group_report(evals: &[SpeakerEvaluation]) -> Vec<GroupSummary> {
    summarize(&RateTable::from_evaluations(evals))
}

/// Mean and standard error of every non-empty cell.
pub fn summarize(table: &RateTable) -> Vec<GroupSummary> {
    let mut out = Vec::new();
    for (gi, group) in [Group::A, Group::B].into_iter().enumerate() {
        for (ci, condition) in [Condition::Before, Condition::After].into_iter().enumerate() {
            let xs = &table.cells[gi][ci];
            if xs.is_empty() {
                continue;
            }
            let n = xs.len();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let standard_error = if n < 2 {
                0.0
            } else {
                let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
                var.sqrt() / (n as f64).sqrt()
            };
            out.push(GroupSummary {
                group,
                condition,
                n,
                mean,
                standard_error,
            });
        }
    }
    out
}
