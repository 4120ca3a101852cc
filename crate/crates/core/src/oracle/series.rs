use std::fmt;

use super::table::{build_guess_table, ExactGuessTable};
use crate::asymptotics::{ScgfModel, SourceKind};
use crate::error::{Error, Result};
use crate::numeric::ln_biguint;

/// Gaps at or below this count as identically zero in trend checks.
pub const ZERO_GAP: f64 = 1e-12;

/// Scaled finite-`k` proxies of `Lambda`, `E log G`, `g`, `gamma` and the
/// typical-set growth rate.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteKExponents {
    pub k: usize,
    pub alphas: Vec<f64>,
    /// `(1/k) log E G^alpha`, one per alpha.
    pub scaled_log_moments: Vec<f64>,
    /// `(1/k) E log G`.
    pub scaled_e_log_g: f64,
    /// `(1/k) log P(G = 1)`.
    pub scaled_log_first_prob: f64,
    /// `(1/k) log |T^eps_k|`, or `log m` for the unconditioned source.
    pub scaled_log_size: f64,
    /// `(1/k) log #(maximal-probability words)`.
    pub scaled_log_modal: f64,
}

impl FiniteKExponents {
    pub fn from_table(table: &ExactGuessTable, alphas: &[f64]) -> Self {
        let k = table.k() as f64;
        FiniteKExponents {
            k: table.k(),
            alphas: alphas.to_vec(),
            scaled_log_moments: alphas.iter().map(|&a| table.log_moment(a) / k).collect(),
            scaled_e_log_g: table.expected_log_guesses() / k,
            scaled_log_first_prob: table.log_first_prob() / k,
            scaled_log_size: ln_biguint(table.total_words()) / k,
            scaled_log_modal: ln_biguint(&table.modal_word_count()) / k,
        }
    }
}

pub fn finite_k_exponents(kind: &SourceKind, k: usize, alphas: &[f64]) -> Result<FiniteKExponents> {
    Ok(FiniteKExponents::from_table(
        &build_guess_table(kind, k)?,
        alphas,
    ))
}

/// A limit that the exact oracle approaches as `k` grows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    /// `(1/k) log E G^alpha -> Lambda(alpha)`.
    Scgf(f64),
    /// `(1/k) E log G -> Lambda'(0)`.
    ELogG,
    /// `(1/k) log P(G = 1) -> g`.
    G,
    /// `(1/k) log #modal -> gamma`.
    Gamma,
    /// `(1/k) log |T^eps_k| -> h(l-)`.
    TypicalSizeRate,
}

impl Quantity {
    /// True when the finite-`k` value depends only on the type census, not on
    /// rank sums.
    pub fn is_census_based(&self) -> bool {
        matches!(
            self,
            Quantity::G | Quantity::Gamma | Quantity::TypicalSizeRate
        )
    }

    pub fn target(&self, model: &ScgfModel) -> f64 {
        match self {
            Quantity::Scgf(alpha) => model.lambda(*alpha),
            Quantity::ELogG => model.slope(0.0),
            Quantity::G => model.g(),
            Quantity::Gamma => model.gamma_closed_form(),
            Quantity::TypicalSizeRate => match model.constrained_tilt() {
                Some(tilt) => tilt.bounds().h_minus(),
                None => (model.p().alphabet_size() as f64).ln(),
            },
        }
    }

    pub fn value(&self, table: &ExactGuessTable) -> f64 {
        let k = table.k() as f64;
        match self {
            Quantity::Scgf(alpha) => table.log_moment(*alpha) / k,
            Quantity::ELogG => table.expected_log_guesses() / k,
            Quantity::G => table.log_first_prob() / k,
            Quantity::Gamma => ln_biguint(&table.modal_word_count()) / k,
            Quantity::TypicalSizeRate => ln_biguint(table.total_words()) / k,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Scgf(alpha) => write!(f, "scgf({alpha})"),
            Quantity::ELogG => f.write_str("e_log_g"),
            Quantity::G => f.write_str("g"),
            Quantity::Gamma => f.write_str("gamma"),
            Quantity::TypicalSizeRate => f.write_str("typical_size_rate"),
        }
    }
}

/// One row of a convergence series; `value` and `gap` are `None` when the
/// typical set is empty at this `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPoint {
    pub k: usize,
    pub value: Option<f64>,
    pub target: f64,
    pub gap: Option<f64>,
}

pub fn convergence_series(
    kind: &SourceKind,
    quantity: Quantity,
    ks: &[usize],
) -> Result<Vec<SeriesPoint>> {
    let model = ScgfModel::new(kind.clone())?;
    let target = quantity.target(&model);
    ks.iter()
        .map(|&k| {
            let value = match build_guess_table(kind, k) {
                Ok(table) => Some(quantity.value(&table)),
                Err(Error::EmptyTypicalSet { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(SeriesPoint {
                k,
                value,
                target,
                gap: value.map(|v| (v - target).abs()),
            })
        })
        .collect()
}

/// Monotone-trend criterion: over the points with a value, each gap is
/// strictly smaller than the one before, unless both are within
/// [`ZERO_GAP`] of zero. Fewer than two usable points fail.
pub fn gaps_strictly_decreasing(points: &[SeriesPoint]) -> bool {
    let gaps: Vec<f64> = points.iter().filter_map(|p| p.gap).collect();
    gaps.len() >= 2
        && gaps
            .windows(2)
            .all(|w| w[1] < w[0] || (w[0] <= ZERO_GAP && w[1] <= ZERO_GAP))
}
