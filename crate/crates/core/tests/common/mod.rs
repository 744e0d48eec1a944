//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use accent_core::hmm::{ModelParams, Op};
use accent_core::phonology::PhoneFeatures;

/// Every path through the word lattice as (ops, linear probability),
/// enumerated by recursion over (phonemes used, observations used).
pub fn enumerate_paths(phon: &[PhoneFeatures], obs: &[PhoneFeatures], params: &ModelParams) -> Vec<(Vec<Op>, f64)> {
    let produce =
        |i: usize, k: usize| params.p_prod(&phon[i]).unwrap() * params.emit(&phon[i]).unwrap()[obs[k].index()];
    let delete = |i: usize| params.p_del(&phon[i]).unwrap();
    let insert = |k: usize| params.p_ins() * params.emit_ins()[obs[k].index()];
    let exit = 1.0 - params.p_ins();
    enumerate_weights(phon.len(), obs.len(), &produce, &delete, &insert, exit)
}

pub fn enumerate_weights(
    n: usize,
    m: usize,
    produce: &dyn Fn(usize, usize) -> f64,
    delete: &dyn Fn(usize) -> f64,
    insert: &dyn Fn(usize) -> f64,
    exit: f64,
) -> Vec<(Vec<Op>, f64)> {
    let mut out = Vec::new();
    let mut ops = Vec::new();
    walk(n, m, 0, 0, 1.0, &mut ops, &mut out, produce, delete, insert, exit);
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    n: usize,
    m: usize,
    i: usize,
    k: usize,
    w: f64,
    ops: &mut Vec<Op>,
    out: &mut Vec<(Vec<Op>, f64)>,
    produce: &dyn Fn(usize, usize) -> f64,
    delete: &dyn Fn(usize) -> f64,
    insert: &dyn Fn(usize) -> f64,
    exit: f64,
) {
    if i == n && k == m {
        out.push((ops.clone(), w * exit));
    }
    if i < n && k < m {
        ops.push(Op::Produce);
        walk(
            n,
            m,
            i + 1,
            k + 1,
            w * produce(i, k),
            ops,
            out,
            produce,
            delete,
            insert,
            exit,
        );
        ops.pop();
    }
    if i < n {
        ops.push(Op::Delete);
        walk(n, m, i + 1, k, w * delete(i), ops, out, produce, delete, insert, exit);
        ops.pop();
    }
    if k < m {
        ops.push(Op::Insert);
        walk(n, m, i, k + 1, w * insert(k), ops, out, produce, delete, insert, exit);
        ops.pop();
    }
}

/// All sequences over `alphabet` of length `0..=max_len`.
pub fn sequences<T: Copy>(alphabet: &[T], min_len: usize, max_len: usize) -> Vec<Vec<T>> {
    let mut all = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let next: Vec<Vec<T>> = frontier
            .iter()
            .flat_map(|s| {
                alphabet.iter().map(move |a| {
                    let mut t = s.clone();
                    t.push(*a);
                    t
                })
            })
            .collect();
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all.retain(|s| s.len() >= min_len);
    all
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
