use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::asymptotics::SourceKind;
use crate::entropy::{
    enumerate_types_capped, is_typical_type, multinomial, LetterDistribution, TypeVector,
    DEFAULT_MAX_TYPES,
};
use crate::error::{Error, Result};
use crate::numeric::{ln_biguint, log_power_sum, log_sum_exp, log_sum_of_logs, CompensatedSum};

/// One type class in the guessing order: every word in it has probability
/// `exp(log_prob)` and they occupy ranks `start ..= start + len - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GuessBlock {
    pub log_prob: f64,
    pub start: BigUint,
    pub len: BigUint,
    pub ty: TypeVector,
}

impl GuessBlock {
    pub fn prob(&self) -> f64 {
        self.log_prob.exp()
    }

    /// Last rank of the block.
    pub fn end(&self) -> BigUint {
        &self.start + &self.len - 1u32
    }
}

/// A type class with its exact size and per-word log-probability under `p`.
#[derive(Debug, Clone)]
pub(crate) struct TypeClass {
    pub ty: TypeVector,
    pub count: BigUint,
    pub log_prob: f64,
}

/// Letters grouped by identical probability, so that equal-probability types
/// get bit-identical log-probabilities and tie exactly.
struct LetterGroups(Vec<(f64, Vec<usize>)>);

impl LetterGroups {
    fn new(p: &LetterDistribution) -> Self {
        let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
        for (a, &pa) in p.probs().iter().enumerate() {
            match groups.iter_mut().find(|(q, _)| *q == pa) {
                Some((_, letters)) => letters.push(a),
                None => groups.push((pa, vec![a])),
            }
        }
        LetterGroups(groups.into_iter().map(|(q, l)| (q.ln(), l)).collect())
    }

    fn log_prob(&self, counts: &[u64]) -> f64 {
        let mut acc = 0.0;
        for (ln_q, letters) in &self.0 {
            let n: u64 = letters.iter().map(|&a| counts[a]).sum();
            if n > 0 {
                if *ln_q == f64::NEG_INFINITY {
                    return f64::NEG_INFINITY;
                }
                acc += n as f64 * ln_q;
            }
        }
        acc
    }
}

/// All `k`-types (typical ones only when `epsilon` is given) in lexicographic
/// order, with exact class sizes.
pub(crate) fn type_classes(
    p: &LetterDistribution,
    k: usize,
    max_types: u128,
    epsilon: Option<f64>,
) -> Result<Vec<TypeClass>> {
    let groups = LetterGroups::new(p);
    let types = enumerate_types_capped(k, p.alphabet_size(), max_types)?;
    Ok(types
        .into_iter()
        .filter(|ty| epsilon.is_none_or(|eps| is_typical_type(p, eps, ty)))
        .map(|ty| {
            let counts = ty.counts().expect("enumerated types carry counts");
            TypeClass {
                count: multinomial(counts),
                log_prob: groups.log_prob(counts),
                ty,
            }
        })
        .collect())
}

/// Optimal guessing order for words of length `k`, as ranked type-class blocks.
#[derive(Debug, Clone)]
pub struct ExactGuessTable {
    k: usize,
    kind: SourceKind,
    blocks: Vec<GuessBlock>,
    total: BigUint,
    log_normalizer: f64,
}

pub fn build_guess_table(kind: &SourceKind, k: usize) -> Result<ExactGuessTable> {
    build_guess_table_capped(kind, k, DEFAULT_MAX_TYPES)
}

pub fn build_guess_table_capped(
    kind: &SourceKind,
    k: usize,
    max_types: u128,
) -> Result<ExactGuessTable> {
    let classes = type_classes(kind.p(), k, max_types, kind.epsilon())?;
    if classes.is_empty() {
        return Err(Error::EmptyTypicalSet { k });
    }
    let total: BigUint = classes.iter().map(|c| &c.count).sum();
    let log_normalizer = match kind {
        SourceKind::Unconditioned { .. } => 0.0,
        SourceKind::Conditioned { .. } => {
            log_sum_exp(classes.iter().map(|c| ln_biguint(&c.count) + c.log_prob))
        }
        SourceKind::UniformTypical { .. } => ln_biguint(&total),
    };
    let mut ranked: Vec<(f64, TypeClass)> = classes
        .into_iter()
        .map(|c| {
            let lp = match kind {
                SourceKind::Unconditioned { .. } => c.log_prob,
                SourceKind::Conditioned { .. } => c.log_prob - log_normalizer,
                SourceKind::UniformTypical { .. } => -log_normalizer,
            };
            (lp, c)
        })
        .collect();
    // Stable: equal probabilities keep lexicographic type order.
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut start = BigUint::one();
    let blocks = ranked
        .into_iter()
        .map(|(log_prob, c)| {
            let block = GuessBlock {
                log_prob,
                start: start.clone(),
                len: c.count,
                ty: c.ty,
            };
            start += &block.len;
            block
        })
        .collect();
    Ok(ExactGuessTable {
        k,
        kind: kind.clone(),
        blocks,
        total,
        log_normalizer,
    })
}

impl ExactGuessTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> &SourceKind {
        &self.kind
    }

    pub fn blocks(&self) -> &[GuessBlock] {
        &self.blocks
    }

    /// `m^k`, or `|T^eps_k|` for typical-set sources.
    pub fn total_words(&self) -> &BigUint {
        &self.total
    }

    /// `ln P(W_k in T^eps_k)` for the conditioned source, `ln |T^eps_k|` for
    /// the uniform one, 0 otherwise.
    pub fn log_normalizer(&self) -> f64 {
        self.log_normalizer
    }

    pub fn total_probability(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| (ln_biguint(&b.len) + b.log_prob).exp())
            .collect::<CompensatedSum>()
            .value()
    }

    /// `ln E G^alpha`.
    pub fn log_moment(&self, alpha: f64) -> f64 {
        if alpha == 0.0 {
            return 0.0;
        }
        log_sum_exp(
            self.blocks
                .iter()
                .filter(|b| b.log_prob > f64::NEG_INFINITY)
                .map(|b| b.log_prob + log_power_sum(&b.start, &b.end(), alpha)),
        )
    }

    /// `E G^alpha`.
    pub fn moment(&self, alpha: f64) -> f64 {
        self.log_moment(alpha).exp()
    }

    /// `E log G`.
    pub fn expected_log_guesses(&self) -> f64 {
        self.blocks
            .iter()
            .filter(|b| b.log_prob > f64::NEG_INFINITY)
            .map(|b| (b.log_prob + log_sum_of_logs(&b.start, &b.end())).exp())
            .collect::<CompensatedSum>()
            .value()
    }

    /// `ln P(G = 1)`.
    pub fn log_first_prob(&self) -> f64 {
        self.blocks[0].log_prob
    }

    /// Number of words sharing the maximal probability.
    pub fn modal_word_count(&self) -> BigUint {
        let top = self.blocks[0].log_prob;
        self.blocks
            .iter()
            .take_while(|b| b.log_prob == top)
            .fold(BigUint::zero(), |acc, b| acc + &b.len)
    }
}

/// `E G^alpha` of a table.
pub fn exact_moment(table: &ExactGuessTable, alpha: f64) -> f64 {
    table.moment(alpha)
}

/// `E log G` of a table.
pub fn exact_log_moment(table: &ExactGuessTable) -> f64 {
    table.expected_log_guesses()
}
