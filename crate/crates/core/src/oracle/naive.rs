use crate::asymptotics::SourceKind;
use crate::entropy::WINDOW_SLACK;
use crate::error::{Error, Result};
use crate::numeric::{log_sum_exp, CompensatedSum};

use super::table::build_guess_table;

/// Largest `m^k` the word-by-word path accepts by default.
pub const DEFAULT_MAX_WORDS: u128 = 1 << 22;
/// Moments compared by [`naive_enumeration_crosscheck`].
pub const NAIVE_ALPHAS: [f64; 4] = [-0.5, 0.5, 1.0, 2.0];

const RELATIVE_TOLERANCE: f64 = 1e-9;

/// Moments computed from an explicit list of every word.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveMoments {
    pub alphas: Vec<f64>,
    /// `E G^alpha`, one per alpha.
    pub moments: Vec<f64>,
    pub e_log_g: f64,
    pub word_count: usize,
}

/// Enumerates all `m^k` words one by one, ranks them by probability and sums
/// moments over ranks directly.
pub fn naive_moments(
    kind: &SourceKind,
    k: usize,
    alphas: &[f64],
    max_words: u128,
) -> Result<NaiveMoments> {
    if k == 0 {
        return Err(Error::InvalidWordLength(k));
    }
    let p = kind.p();
    let m = p.alphabet_size();
    let count = (m as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if count > max_words {
        return Err(Error::WordSpaceTooLarge {
            count,
            cap: max_words,
        });
    }
    let ln_p: Vec<f64> = p.probs().iter().map(|x| x.ln()).collect();
    let window = kind.epsilon().map(|eps| {
        let h = p.entropy();
        (h - eps - WINDOW_SLACK, h + eps + WINDOW_SLACK)
    });

    let mut log_probs = Vec::new();
    let mut letters = vec![0usize; k];
    for _ in 0..count {
        let lp: f64 = letters.iter().map(|&a| ln_p[a]).sum();
        let keep = match window {
            None => true,
            Some((lo, hi)) => {
                let rate = -lp / k as f64;
                rate.is_finite() && rate >= lo && rate <= hi
            }
        };
        if keep {
            log_probs.push(lp);
        }
        // Next word in base-m counting order.
        for slot in letters.iter_mut() {
            *slot += 1;
            if *slot < m {
                break;
            }
            *slot = 0;
        }
    }
    if log_probs.is_empty() {
        return Err(Error::EmptyTypicalSet { k });
    }
    let n = log_probs.len();
    match kind {
        SourceKind::Unconditioned { .. } => {}
        SourceKind::Conditioned { .. } => {
            let norm = log_sum_exp(log_probs.iter().copied());
            log_probs.iter_mut().for_each(|lp| *lp -= norm);
        }
        SourceKind::UniformTypical { .. } => {
            let lp = -(n as f64).ln();
            log_probs.iter_mut().for_each(|x| *x = lp);
        }
    }
    log_probs.sort_by(|a, b| b.total_cmp(a));
    let probs: Vec<f64> = log_probs.iter().map(|lp| lp.exp()).collect();

    let moments = alphas
        .iter()
        .map(|&alpha| {
            probs
                .iter()
                .enumerate()
                .map(|(i, &q)| q * ((i + 1) as f64).powf(alpha))
                .collect::<CompensatedSum>()
                .value()
        })
        .collect();
    let e_log_g = probs
        .iter()
        .enumerate()
        .map(|(i, &q)| q * ((i + 1) as f64).ln())
        .collect::<CompensatedSum>()
        .value();
    Ok(NaiveMoments {
        alphas: alphas.to_vec(),
        moments,
        e_log_g,
        word_count: n,
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= RELATIVE_TOLERANCE * a.abs().max(b.abs())
}

/// True iff word-by-word and type-based moments agree within `1e-9`
/// relative for alpha in {-0.5, 0.5, 1, 2} and for `E log G`.
pub fn naive_enumeration_crosscheck(kind: &SourceKind, k: usize) -> Result<bool> {
    naive_enumeration_crosscheck_capped(kind, k, DEFAULT_MAX_WORDS)
}

pub fn naive_enumeration_crosscheck_capped(
    kind: &SourceKind,
    k: usize,
    max_words: u128,
) -> Result<bool> {
    let naive = naive_moments(kind, k, &NAIVE_ALPHAS, max_words)?;
    let table = build_guess_table(kind, k)?;
    let moments_agree = NAIVE_ALPHAS
        .iter()
        .zip(&naive.moments)
        .all(|(&alpha, &m)| close(table.moment(alpha), m));
    Ok(moments_agree && close(table.expected_log_guesses(), naive.e_log_g))
}
