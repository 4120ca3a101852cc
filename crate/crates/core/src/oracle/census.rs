use num_bigint::BigUint;
use num_traits::Zero;

use super::table::type_classes;
use crate::entropy::{check_epsilon, LetterDistribution, TypeVector, DEFAULT_MAX_TYPES};
use crate::error::Result;
use crate::numeric::{ln_biguint, log_sum_exp};

/// The typical set `T^eps_k` described type by type.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalCensus {
    k: usize,
    epsilon: f64,
    types: Vec<TypeVector>,
    counts: Vec<BigUint>,
    cardinality: BigUint,
    log_prob_mass: f64,
}

impl TypicalCensus {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Typical `k`-types in lexicographic order.
    pub fn types(&self) -> &[TypeVector] {
        &self.types
    }

    /// `N_k(l)` for each listed type.
    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// `|T^eps_k|`.
    pub fn cardinality(&self) -> &BigUint {
        &self.cardinality
    }

    pub fn log_cardinality(&self) -> f64 {
        ln_biguint(&self.cardinality)
    }

    /// `P(W_k in T^eps_k)`.
    pub fn prob_mass(&self) -> f64 {
        self.log_prob_mass.exp()
    }

    pub fn log_prob_mass(&self) -> f64 {
        self.log_prob_mass
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    /// `max_l N_k(l)` over typical types; zero for an empty census.
    pub fn max_count(&self) -> BigUint {
        self.counts.iter().max().cloned().unwrap_or_default()
    }
}

pub fn typical_set_census(p: &LetterDistribution, epsilon: f64, k: usize) -> Result<TypicalCensus> {
    typical_set_census_capped(p, epsilon, k, DEFAULT_MAX_TYPES)
}

pub fn typical_set_census_capped(
    p: &LetterDistribution,
    epsilon: f64,
    k: usize,
    max_types: u128,
) -> Result<TypicalCensus> {
    check_epsilon(epsilon)?;
    let classes = type_classes(p, k, max_types, Some(epsilon))?;
    let cardinality: BigUint = classes.iter().map(|c| &c.count).sum();
    let log_prob_mass = log_sum_exp(classes.iter().map(|c| ln_biguint(&c.count) + c.log_prob));
    let census = TypicalCensus {
        k,
        epsilon,
        types: classes.iter().map(|c| c.ty.clone()).collect(),
        counts: classes.into_iter().map(|c| c.count).collect(),
        cardinality,
        log_prob_mass,
    };
    debug_assert!(union_bound_holds(&census, p.alphabet_size()));
    Ok(census)
}

/// `max_l N_k(l) <= |T^eps_k| <= (k+1)^m max_l N_k(l)`.
fn union_bound_holds(census: &TypicalCensus, m: usize) -> bool {
    if census.is_empty() {
        return census.cardinality.is_zero();
    }
    let max = census.max_count();
    let factor = BigUint::from(census.k + 1).pow(m as u32);
    max <= census.cardinality && census.cardinality <= factor * max
}

/// Smallest `k` in `1..=max_k` with a nonempty typical set.
pub fn smallest_nonempty_k(
    p: &LetterDistribution,
    epsilon: f64,
    max_k: usize,
) -> Result<Option<usize>> {
    for k in 1..=max_k {
        if !typical_set_census(p, epsilon, k)?.is_empty() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
