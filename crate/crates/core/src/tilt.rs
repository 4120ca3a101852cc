//! The exponentially tilted family `l(beta)_a ∝ p_a^beta` and the
//! entropy-maximising types on the boundary of the typical window.
//!
//! Guesswork exponents are indexed by `alpha > -1`; the family is indexed by
//! `beta = 1 / (1 + alpha)`. Maximising `h(l)` subject to the linear
//! constraint `-sum_a l_a log p_a = c` gives `l_a ∝ p_a^beta` for some beta,
//! so both boundary types are found by a one-dimensional bisection on `beta`.
//! The constraint value is `h(p)` at `beta = 1`, decreases to
//! `-log max p` as `beta -> inf` and increases to the support-uniform value
//! `-(1/m') sum log p_a` as `beta -> 0`.

use crate::entropy::{
    check_epsilon, cross_entropy, kl_divergence, shannon_entropy, LetterDistribution, TypeVector,
};
use crate::error::{Error, Result};
use crate::numeric::log_sum_exp;

pub const BISECTION_MAX_ITERATIONS: usize = 200;
pub const BISECTION_RESIDUAL_TOLERANCE: f64 = 1e-12;
pub const BISECTION_WIDTH_TOLERANCE: f64 = 1e-15;

// Bracket limit for ln(beta); beyond it the tilt is numerically at its limit.
const LN_BETA_LIMIT: f64 = 700.0;
// Distance from a limiting constraint value treated as attaining the limit.
const LIMIT_TOLERANCE: f64 = 1e-15;

pub fn alpha_to_beta(alpha: f64) -> Result<f64> {
    if alpha.is_nan() || alpha <= -1.0 {
        return Err(Error::AlphaOutOfDomain(alpha));
    }
    Ok(1.0 / (1.0 + alpha))
}

/// `l(beta)_a = p_a^beta / sum_b p_b^beta` for a fixed `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltedFamily {
    p: LetterDistribution,
    log_p: Vec<f64>,
}

impl TiltedFamily {
    pub fn new(p: LetterDistribution) -> Self {
        let log_p = p.log_probs();
        Self { p, log_p }
    }

    pub fn p(&self) -> &LetterDistribution {
        &self.p
    }

    /// The tilted type at exponent `beta` in `[0, inf]`; the endpoints are the
    /// uniform distributions on the support and on the modal letters.
    pub fn at_beta(&self, beta: f64) -> TypeVector {
        assert!(beta >= 0.0, "beta must be non-negative");
        if beta == 0.0 {
            return self.p.support_uniform();
        }
        if beta == 1.0 || (beta.is_finite() && self.p.is_uniform_on_support()) {
            return self.p.as_type();
        }
        if beta == f64::INFINITY {
            let max = self.p.max_prob();
            let n = self.p.modal_letter_count() as f64;
            return TypeVector::from_freqs_unchecked(
                self.p
                    .probs()
                    .iter()
                    .map(|&x| if x == max { 1.0 / n } else { 0.0 })
                    .collect(),
            );
        }
        let scaled: Vec<f64> = self.log_p.iter().map(|&lp| beta * lp).collect();
        let norm = log_sum_exp(scaled.iter().copied());
        TypeVector::from_freqs_unchecked(scaled.iter().map(|&s| (s - norm).exp()).collect())
    }

    /// `l^W(alpha)`.
    pub fn at_alpha(&self, alpha: f64) -> Result<TypeVector> {
        Ok(self.at_beta(alpha_to_beta(alpha)?))
    }

    /// `-sum_a l_a(beta) log p_a`.
    pub fn constraint_value(&self, beta: f64) -> f64 {
        cross_entropy(&self.at_beta(beta), &self.p)
    }

    /// `eta(alpha) = -sum_a l^W_a(alpha) log p_a`.
    pub fn eta(&self, alpha: f64) -> Result<f64> {
        Ok(self.constraint_value(alpha_to_beta(alpha)?))
    }

    /// `ln sum_a p_a^beta` over the support.
    pub fn log_partition(&self, beta: f64) -> f64 {
        log_sum_exp(
            self.log_p
                .iter()
                .filter(|lp| lp.is_finite())
                .map(|&lp| beta * lp),
        )
    }

    /// Limit of the constraint value as `beta -> 0`.
    pub fn eta_upper_limit(&self) -> f64 {
        self.constraint_value(0.0)
    }

    /// Limit of the constraint value as `beta -> inf`, `-log max p`.
    pub fn eta_lower_limit(&self) -> f64 {
        -self.p.max_prob().ln()
    }

    /// Solves `constraint_value(beta) = target` for `beta` in `[lo, hi]`
    /// bracketed in `ln(beta)`. The constraint value is non-increasing in beta.
    fn bisect_ln_beta(&self, target: f64, mut lo: f64, mut hi: f64) -> f64 {
        let mut mid = 0.5 * (lo + hi);
        for _ in 0..BISECTION_MAX_ITERATIONS {
            mid = 0.5 * (lo + hi);
            let value = self.constraint_value(mid.exp());
            if (value - target).abs() < BISECTION_RESIDUAL_TOLERANCE {
                break;
            }
            if value > target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < BISECTION_WIDTH_TOLERANCE {
                mid = 0.5 * (lo + hi);
                break;
            }
        }
        mid.exp()
    }
}

/// `l^W(alpha)` for `alpha > -1`.
pub fn tilted_type(p: &LetterDistribution, alpha: f64) -> Result<TypeVector> {
    TiltedFamily::new(p.clone()).at_alpha(alpha)
}

/// `eta(alpha) = -sum_a l^W_a(alpha) log p_a`.
pub fn eta(p: &LetterDistribution, alpha: f64) -> Result<f64> {
    TiltedFamily::new(p.clone()).eta(alpha)
}

/// The maximum-entropy types `l-` and `l+` on the upper (`h(p) + eps`) and
/// lower (`h(p) - eps`) edges of the typical window.
///
/// When the upper edge lies beyond every tilted type, `l-` is replaced by the
/// uniform distribution on the support (entropy `log m'`) and
/// `clamped_to_log_m` is set. When the lower edge lies below `-log max p`
/// there is no `l+`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTypes {
    l_minus: TypeVector,
    beta_minus: f64,
    clamped_to_log_m: bool,
    l_plus: Option<TypeVector>,
    beta_plus: Option<f64>,
    epsilon: f64,
    epsilon_max_for_plus: f64,
}

impl BoundaryTypes {
    /// `l-`, or the support-uniform substitute when clamped.
    pub fn l_minus(&self) -> &TypeVector {
        &self.l_minus
    }

    pub fn exists_minus(&self) -> bool {
        !self.clamped_to_log_m
    }

    pub fn clamped_to_log_m(&self) -> bool {
        self.clamped_to_log_m
    }

    pub fn exists_plus(&self) -> bool {
        self.l_plus.is_some()
    }

    pub fn l_plus(&self) -> Result<&TypeVector> {
        self.l_plus.as_ref().ok_or(Error::EpsilonTooLargeForLPlus {
            epsilon: self.epsilon,
            max: self.epsilon_max_for_plus,
        })
    }

    pub fn l_plus_opt(&self) -> Option<&TypeVector> {
        self.l_plus.as_ref()
    }

    /// `h(l-)`, which is `log m'` when clamped.
    pub fn h_minus(&self) -> f64 {
        shannon_entropy(&self.l_minus)
    }

    pub fn h_plus(&self) -> Option<f64> {
        self.l_plus.as_ref().map(shannon_entropy)
    }

    pub fn beta_minus(&self) -> f64 {
        self.beta_minus
    }

    pub fn beta_plus(&self) -> Option<f64> {
        self.beta_plus
    }

    /// Start of the upper clamp, `1/beta- - 1` (infinite when clamped).
    pub fn alpha_minus(&self) -> f64 {
        1.0 / self.beta_minus - 1.0
    }

    /// End of the lower clamp, `1/beta+ - 1`; `-1` when there is no `l+`.
    pub fn alpha_plus(&self) -> f64 {
        self.beta_plus.map_or(-1.0, |b| 1.0 / b - 1.0)
    }
}

pub fn boundary_types(p: &LetterDistribution, epsilon: f64) -> Result<BoundaryTypes> {
    check_epsilon(epsilon)?;
    let family = TiltedFamily::new(p.clone());
    let h = p.entropy();

    let upper_target = h + epsilon;
    let upper_limit = family.eta_upper_limit();
    let (l_minus, beta_minus, clamped) = if upper_target > upper_limit {
        (family.at_beta(0.0), 0.0, true)
    } else if upper_target >= upper_limit - LIMIT_TOLERANCE {
        (family.at_beta(0.0), 0.0, false)
    } else {
        let mut lo: f64 = -1.0;
        while family.constraint_value(lo.exp()) < upper_target && lo > -LN_BETA_LIMIT {
            lo *= 2.0;
        }
        let beta = family.bisect_ln_beta(upper_target, lo.max(-LN_BETA_LIMIT), 0.0);
        (family.at_beta(beta), beta, false)
    };

    let lower_target = h - epsilon;
    let lower_limit = family.eta_lower_limit();
    let epsilon_max_for_plus = h - lower_limit;
    let (l_plus, beta_plus) =
        if p.is_uniform_on_support() || lower_target < lower_limit - LIMIT_TOLERANCE {
            (None, None)
        } else if lower_target <= lower_limit + LIMIT_TOLERANCE {
            (Some(family.at_beta(f64::INFINITY)), Some(f64::INFINITY))
        } else {
            let mut hi: f64 = 1.0;
            while family.constraint_value(hi.exp()) > lower_target && hi < LN_BETA_LIMIT {
                hi *= 2.0;
            }
            let beta = family.bisect_ln_beta(lower_target, 0.0, hi.min(LN_BETA_LIMIT));
            (Some(family.at_beta(beta)), Some(beta))
        };

    Ok(BoundaryTypes {
        l_minus,
        beta_minus,
        clamped_to_log_m: clamped,
        l_plus,
        beta_plus,
        epsilon,
        epsilon_max_for_plus,
    })
}

/// Which branch of the clamped optimiser is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `l* = l+`
    LowerClamp,
    /// `l* = l^W(alpha)`
    Interior,
    /// `l* = l-`
    UpperClamp,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::LowerClamp => "lower_clamp",
            Regime::Interior => "interior",
            Regime::UpperClamp => "upper_clamp",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClampedOptimum {
    pub l_star: TypeVector,
    pub regime: Regime,
}

/// Maximiser of `alpha h(l) - D(l || p)` over the typical window: the tilted
/// type clamped to `l+` below `h(p) - eps` and to `l-` above `h(p) + eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedTilt {
    family: TiltedFamily,
    epsilon: f64,
    entropy: f64,
    bounds: BoundaryTypes,
}

impl ConstrainedTilt {
    pub fn new(p: &LetterDistribution, epsilon: f64) -> Result<Self> {
        let bounds = boundary_types(p, epsilon)?;
        Ok(Self {
            family: TiltedFamily::new(p.clone()),
            epsilon,
            entropy: p.entropy(),
            bounds,
        })
    }

    pub fn family(&self) -> &TiltedFamily {
        &self.family
    }

    pub fn bounds(&self) -> &BoundaryTypes {
        &self.bounds
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn regime(&self, alpha: f64) -> Result<Regime> {
        let eta = self.family.eta(alpha)?;
        Ok(if eta <= self.entropy - self.epsilon {
            Regime::LowerClamp
        } else if eta >= self.entropy + self.epsilon {
            Regime::UpperClamp
        } else {
            Regime::Interior
        })
    }

    pub fn l_star(&self, alpha: f64) -> Result<ClampedOptimum> {
        let regime = self.regime(alpha)?;
        let l_star = match regime {
            Regime::LowerClamp => self.bounds.l_plus()?.clone(),
            Regime::UpperClamp => self.bounds.l_minus.clone(),
            Regime::Interior => self.family.at_alpha(alpha)?,
        };
        Ok(ClampedOptimum { l_star, regime })
    }

    /// `alpha h(l*) - D(l* || p)`.
    pub fn objective(&self, alpha: f64) -> Result<f64> {
        let opt = self.l_star(alpha)?;
        Ok(alpha * shannon_entropy(&opt.l_star) - kl_divergence(&opt.l_star, self.family.p())?)
    }
}

pub fn l_star(p: &LetterDistribution, epsilon: f64, alpha: f64) -> Result<ClampedOptimum> {
    ConstrainedTilt::new(p, epsilon)?.l_star(alpha)
}
