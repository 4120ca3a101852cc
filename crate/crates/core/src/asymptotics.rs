//! Scaled cumulant generating functions of `(1/k) log G` for the three word
//! sources, their Legendre-Fenchel transforms and the growth exponents read
//! off them.
//!
//! For `alpha > -1` every model has the form `Lambda(alpha) = alpha h(l) -
//! D(l || p)` for an optimising type `l = l(alpha)`, except the uniform
//! approximation which is linear. The slope is then `h(l(alpha))` and the
//! tangent intercept `alpha Lambda'(alpha) - Lambda(alpha)` is `D(l || p)`,
//! which is what the rate function evaluates at the tangent point.

use crate::entropy::{
    check_epsilon, kl_divergence, shannon_entropy, LetterDistribution, TypeVector,
};
use crate::error::{Error, Result};
use crate::tilt::{ConstrainedTilt, Regime, TiltedFamily};

/// Step of the central difference for `Lambda'(0)`.
pub const DERIVATIVE_STEP: f64 = 1e-6;
/// `gamma` is the slope at `-1 + GAMMA_OFFSET` ...
pub const GAMMA_OFFSET: f64 = 1e-7;
/// ... taken by a central difference of this step.
pub const GAMMA_STEP: f64 = 1e-8;

// Upper end of the slope search; past it x is within rounding of the ceiling.
const ALPHA_SEARCH_MAX: f64 = 1e12;

/// The word source whose Guesswork is being described.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceKind {
    /// i.i.d. words `W_k`.
    Unconditioned { p: LetterDistribution },
    /// `W_k` conditioned on the typical set `T^eps_k`.
    Conditioned { p: LetterDistribution, epsilon: f64 },
    /// Uniform on the typical set.
    UniformTypical { p: LetterDistribution, epsilon: f64 },
}

impl SourceKind {
    pub fn unconditioned(p: LetterDistribution) -> Self {
        SourceKind::Unconditioned { p }
    }

    pub fn conditioned(p: LetterDistribution, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(SourceKind::Conditioned { p, epsilon })
    }

    pub fn uniform_typical(p: LetterDistribution, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(SourceKind::UniformTypical { p, epsilon })
    }

    /// All three kinds for one `(p, eps)`.
    pub fn all(p: &LetterDistribution, epsilon: f64) -> Result<[SourceKind; 3]> {
        Ok([
            Self::unconditioned(p.clone()),
            Self::conditioned(p.clone(), epsilon)?,
            Self::uniform_typical(p.clone(), epsilon)?,
        ])
    }

    pub fn p(&self) -> &LetterDistribution {
        match self {
            SourceKind::Unconditioned { p }
            | SourceKind::Conditioned { p, .. }
            | SourceKind::UniformTypical { p, .. } => p,
        }
    }

    pub fn epsilon(&self) -> Option<f64> {
        match self {
            SourceKind::Unconditioned { .. } => None,
            SourceKind::Conditioned { epsilon, .. }
            | SourceKind::UniformTypical { epsilon, .. } => Some(*epsilon),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SourceKind::Unconditioned { .. } => "unconditioned",
            SourceKind::Conditioned { .. } => "conditioned",
            SourceKind::UniformTypical { .. } => "uniform_typical",
        }
    }

    /// Conditioned and uniform sources live on the typical set.
    pub fn is_typical(&self) -> bool {
        !matches!(self, SourceKind::Unconditioned { .. })
    }
}

/// One source's asymptotic fingerprint: `Lambda`, `g`, `gamma`.
#[derive(Debug, Clone)]
pub struct ScgfModel {
    kind: SourceKind,
    family: TiltedFamily,
    tilt: Option<ConstrainedTilt>,
    g: f64,
    gamma: f64,
    gamma_closed: f64,
    slope_ceiling: f64,
    ceiling_intercept: f64,
}

impl ScgfModel {
    pub fn new(kind: SourceKind) -> Result<Self> {
        let p = kind.p().clone();
        let family = TiltedFamily::new(p.clone());
        let log_modal = (p.modal_letter_count() as f64).ln();
        let support_uniform = p.support_uniform();
        let (tilt, g, gamma_closed, slope_ceiling, ceiling_intercept) = match &kind {
            SourceKind::Unconditioned { .. } => (
                None,
                p.max_prob().ln(),
                log_modal,
                (p.support_size() as f64).ln(),
                kl_divergence(&support_uniform, &p)?,
            ),
            SourceKind::UniformTypical { epsilon, .. } => {
                let tilt = ConstrainedTilt::new(&p, *epsilon)?;
                let h_minus = tilt.bounds().h_minus();
                (Some(tilt), -h_minus, h_minus, h_minus, 0.0)
            }
            SourceKind::Conditioned { epsilon, .. } => {
                let tilt = ConstrainedTilt::new(&p, *epsilon)?;
                let b = tilt.bounds();
                let g = (-p.entropy() + epsilon).min(p.max_prob().ln());
                let gamma = b.h_plus().unwrap_or(log_modal);
                let ceiling = b.h_minus();
                let intercept = kl_divergence(b.l_minus(), &p)?;
                (Some(tilt), g, gamma, ceiling, intercept)
            }
        };
        let mut model = Self {
            kind,
            family,
            tilt,
            g,
            gamma: gamma_closed,
            gamma_closed,
            slope_ceiling,
            ceiling_intercept,
        };
        model.gamma = model.derivative(-1.0 + GAMMA_OFFSET, GAMMA_STEP);
        Ok(model)
    }

    pub fn kind(&self) -> &SourceKind {
        &self.kind
    }

    pub fn p(&self) -> &LetterDistribution {
        self.kind.p()
    }

    /// Boundary types and regime selector, for typical-set sources.
    pub fn constrained_tilt(&self) -> Option<&ConstrainedTilt> {
        self.tilt.as_ref()
    }

    /// `Lambda(alpha) = g` for `alpha <= -1`.
    pub fn g(&self) -> f64 {
        self.g
    }

    /// `gamma = lim_{alpha -> -1+} Lambda'(alpha)`, numerically.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `gamma` in closed form: `log(#modal letters)`, `h(l-)` or `h(l+)`.
    pub fn gamma_closed_form(&self) -> f64 {
        self.gamma_closed
    }

    /// `lim_{alpha -> inf} Lambda'(alpha)`; the rate function is infinite
    /// beyond it.
    pub fn slope_ceiling(&self) -> f64 {
        self.slope_ceiling
    }

    /// True when `h(p) + eps` exceeds every tilted type and `log m'` stands
    /// in for `h(l-)`.
    pub fn clamped_to_log_m(&self) -> bool {
        self.tilt
            .as_ref()
            .is_some_and(|t| t.bounds().clamped_to_log_m())
    }

    /// Optimising type and regime for `alpha > -1`.
    fn optimum(&self, alpha: f64) -> (TypeVector, Regime) {
        match (&self.kind, &self.tilt) {
            (SourceKind::Conditioned { .. }, Some(tilt)) => {
                let opt = tilt
                    .l_star(alpha)
                    .expect("alpha > -1 and a lower clamp implies l+ exists");
                (opt.l_star, opt.regime)
            }
            (SourceKind::UniformTypical { .. }, Some(tilt)) => {
                (tilt.bounds().l_minus().clone(), Regime::UpperClamp)
            }
            _ => (self.family.at_beta(1.0 / (1.0 + alpha)), Regime::Interior),
        }
    }

    /// `Lambda(alpha)` on the whole real line.
    pub fn lambda(&self, alpha: f64) -> f64 {
        if alpha <= -1.0 {
            return self.g;
        }
        if alpha == 0.0 {
            return 0.0;
        }
        if let SourceKind::UniformTypical { .. } = self.kind {
            return alpha * self.slope_ceiling;
        }
        let (l, regime) = self.optimum(alpha);
        match regime {
            // (1 + alpha) log sum_a p_a^(1/(1+alpha))
            Regime::Interior => (1.0 + alpha) * self.family.log_partition(1.0 / (1.0 + alpha)),
            _ => {
                alpha * shannon_entropy(&l)
                    - kl_divergence(&l, self.p()).expect("l* is supported on p")
            }
        }
    }

    /// `Lambda'(alpha) = h(l*(alpha))` for `alpha > -1`; zero below `-1`.
    pub fn slope(&self, alpha: f64) -> f64 {
        if alpha <= -1.0 {
            return 0.0;
        }
        if let SourceKind::UniformTypical { .. } = self.kind {
            return self.slope_ceiling;
        }
        shannon_entropy(&self.optimum(alpha).0)
    }

    /// Tangent intercept `alpha Lambda'(alpha) - Lambda(alpha)`, i.e.
    /// `D(l*(alpha) || p)` (zero for the uniform approximation).
    pub fn tangent_intercept(&self, alpha: f64) -> f64 {
        if alpha <= -1.0 {
            return -self.g;
        }
        if let SourceKind::UniformTypical { .. } = self.kind {
            return 0.0;
        }
        kl_divergence(&self.optimum(alpha).0, self.p()).expect("l* is supported on p")
    }

    /// Regime of `l*(alpha)` for the conditioned source.
    pub fn regime(&self, alpha: f64) -> Option<Regime> {
        match (&self.kind, &self.tilt) {
            (SourceKind::Conditioned { .. }, Some(tilt)) if alpha > -1.0 => tilt.regime(alpha).ok(),
            _ => None,
        }
    }

    /// Central difference `(Lambda(a + h) - Lambda(a - h)) / 2h`.
    pub fn derivative(&self, alpha: f64, step: f64) -> f64 {
        (self.lambda(alpha + step) - self.lambda(alpha - step)) / (2.0 * step)
    }

    pub fn rate_function(&self) -> RateFunction<'_> {
        RateFunction { model: self }
    }

    /// Growth exponents of the source.
    pub fn growth_exponents(&self) -> GrowthExponents {
        let regime_indicator = match (&self.kind, &self.tilt) {
            (SourceKind::Conditioned { epsilon, .. }, Some(tilt)) => Some(
                tilt.family().eta(1.0).expect("alpha = 1 is in domain")
                    - (self.p().entropy() + epsilon),
            ),
            _ => None,
        };
        GrowthExponents {
            e_log_g: self.derivative(0.0, DERIVATIVE_STEP),
            e_g: self.lambda(1.0),
            g: self.g,
            gamma: self.gamma,
            regime_indicator,
        }
    }

    /// `ln` of the large-deviation approximation to `P(G = n)`, with the
    /// guess index given by its logarithm.
    pub fn log_pmf_approx(&self, k: usize, ln_n: f64) -> Result<f64> {
        if k == 0 {
            return Err(Error::InvalidWordLength(k));
        }
        let max_ln = k as f64 * (self.p().alphabet_size() as f64).ln();
        if !(ln_n >= 0.0 && ln_n <= max_ln * (1.0 + 1e-12)) {
            return Err(Error::InvalidGuessIndex(ln_n.exp()));
        }
        let x = ln_n / k as f64;
        if x <= self.gamma_closed {
            // (1/n) exp(-k(-x - g)) = exp(k g) on the plateau.
            return Ok(k as f64 * self.g);
        }
        Ok(-ln_n - k as f64 * self.rate_function().eval(x))
    }

    /// Large-deviation approximation to `P(G = n)`:
    /// `(1/n) exp(-k Lambda*(log(n)/k))`.
    pub fn pmf_approx(&self, k: usize, n: f64) -> Result<f64> {
        if n.is_nan() || n < 1.0 {
            return Err(Error::InvalidGuessIndex(n));
        }
        Ok(self.log_pmf_approx(k, n.ln())?.exp())
    }
}

/// Limits read off an sCGF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthExponents {
    /// `lim (1/k) E log G = Lambda'(0)`.
    pub e_log_g: f64,
    /// `lim (1/k) log E G = Lambda(1)`.
    pub e_g: f64,
    pub g: f64,
    pub gamma: f64,
    /// `A = eta(1) - (h(p) + eps)` for the conditioned source: positive when
    /// `l*(1)` is clamped to `l-`.
    pub regime_indicator: Option<f64>,
}

/// Legendre-Fenchel transform `Lambda*(x) = sup_alpha {x alpha - Lambda(alpha)}`.
#[derive(Debug, Clone, Copy)]
pub struct RateFunction<'a> {
    model: &'a ScgfModel,
}

impl RateFunction<'_> {
    /// `Lambda*(x)`, with `f64::INFINITY` outside the finite domain.
    pub fn eval(&self, x: f64) -> f64 {
        let m = self.model;
        if x.is_nan() {
            return f64::NAN;
        }
        let log_m = (m.p().alphabet_size() as f64).ln();
        if x < 0.0 || x > m.slope_ceiling || x > log_m {
            return f64::INFINITY;
        }
        if x <= m.gamma_closed {
            return -x - m.g;
        }
        if x == m.slope_ceiling {
            return m.ceiling_intercept;
        }
        // Lambda' is continuous and non-decreasing from gamma to the ceiling.
        let mut hi = 0.0;
        while m.slope(hi) < x {
            hi = 2.0 * hi + 1.0;
            if hi > ALPHA_SEARCH_MAX {
                return m.ceiling_intercept;
            }
        }
        let mut lo = -1.0;
        let mut alpha = hi;
        for _ in 0..crate::tilt::BISECTION_MAX_ITERATIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if m.slope(mid) < x {
                lo = mid;
            } else {
                hi = mid;
            }
            alpha = hi;
            if hi - lo <= 1e-15 * hi.abs().max(1.0) {
                break;
            }
        }
        alpha * (x - m.slope(alpha)) + m.tangent_intercept(alpha)
    }
}

pub fn scgf(kind: &SourceKind, alpha: f64) -> Result<f64> {
    Ok(ScgfModel::new(kind.clone())?.lambda(alpha))
}

pub fn growth_exponents(kind: &SourceKind) -> Result<GrowthExponents> {
    Ok(ScgfModel::new(kind.clone())?.growth_exponents())
}

pub fn rate_function(kind: &SourceKind, x: f64) -> Result<f64> {
    Ok(ScgfModel::new(kind.clone())?.rate_function().eval(x))
}

/// `(1/n) exp(-k Lambda*(log(n)/k))` for guess index `n` in `1..=m^k`.
pub fn guesswork_pmf_approx(kind: &SourceKind, k: usize, n: f64) -> Result<f64> {
    ScgfModel::new(kind.clone())?.pmf_approx(k, n)
}

/// Upper end of the admissible `eps` interval `(0, h(p) + log max p)`, on
/// which `l+` exists. `None` when `p` is uniform on its support: every word of
/// positive probability is then typical and every `eps > 0` is accepted.
pub fn admissible_epsilon_upper(p: &LetterDistribution) -> Option<f64> {
    if p.is_uniform_on_support() {
        None
    } else {
        Some(p.entropy() + p.max_prob().ln())
    }
}

pub fn check_epsilon_admissible(p: &LetterDistribution, epsilon: f64) -> Result<()> {
    check_epsilon(epsilon)?;
    match admissible_epsilon_upper(p) {
        Some(upper) if epsilon >= upper => Err(Error::EpsilonInadmissible {
            epsilon,
            lower: 0.0,
            upper,
        }),
        _ => Ok(()),
    }
}

/// Closed forms for a binary source `(p0, 1 - p0)` with `p0 > 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryClosedForms {
    pub p0: f64,
    pub epsilon: f64,
    pub l_minus0: f64,
    pub l_plus0: f64,
    pub entropy: f64,
    pub h_minus: f64,
    pub h_plus: f64,
    pub kl_minus: f64,
    /// `Lambda_W(1) = 2 log(sqrt(p0) + sqrt(1 - p0))`.
    pub lambda_w1: f64,
    pub eta1: f64,
    /// `A = eta(1) - (h(p) + eps)`.
    pub a: f64,
    /// `h(l-) - h(p)`: uniform minus (un)conditioned `E log G` rate.
    pub top: f64,
    /// Log-ratio rate of `E G` between uniform and conditioned sources.
    pub middle: f64,
    /// Log-ratio rate of `E G` between uniform and unconditioned sources.
    pub bottom: f64,
}

/// Upper end of the binary admissible interval,
/// `log(p0/(1-p0)) min(p0 - 1/2, 1 - p0)`.
pub fn binary_epsilon_upper(p0: f64) -> f64 {
    (p0 / (1.0 - p0)).ln() * (p0 - 0.5).min(1.0 - p0)
}

pub fn binary_closed_forms(p0: f64, epsilon: f64) -> Result<BinaryClosedForms> {
    if !(p0 > 0.5 && p0 < 1.0) {
        return Err(Error::InvalidDistribution(format!(
            "binary closed forms need 1/2 < p0 < 1, got {p0}"
        )));
    }
    let upper = binary_epsilon_upper(p0);
    if !(epsilon > 0.0 && epsilon < upper) {
        return Err(Error::EpsilonInadmissible {
            epsilon,
            lower: 0.0,
            upper,
        });
    }
    let p1 = 1.0 - p0;
    let h2 = |x: f64| -x * x.ln() - (1.0 - x) * (1.0 - x).ln();
    let r = (p0 / p1).ln();
    let l_minus0 = p0 - epsilon / r;
    let l_plus0 = p0 + epsilon / r;
    let entropy = h2(p0);
    let h_minus = h2(l_minus0);
    let h_plus = h2(l_plus0);
    let kl_minus =
        l_minus0 * (l_minus0 / p0).ln() + (1.0 - l_minus0) * ((1.0 - l_minus0) / p1).ln();
    let (s0, s1) = (p0.sqrt(), p1.sqrt());
    let lambda_w1 = 2.0 * (s0 + s1).ln();
    let eta1 = -(s0 * p0.ln() + s1 * p1.ln()) / (s0 + s1);
    let a = eta1 - (entropy + epsilon);
    let bottom = h_minus - lambda_w1;
    let middle = if eta1 <= entropy + epsilon {
        bottom
    } else {
        kl_minus
    };
    Ok(BinaryClosedForms {
        p0,
        epsilon,
        l_minus0,
        l_plus0,
        entropy,
        h_minus,
        h_plus,
        kl_minus,
        lambda_w1,
        eta1,
        a,
        top: h_minus - entropy,
        middle,
        bottom,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    // Expected values below come from a 50-digit evaluation of the closed
    // forms (binary l-/l+, tilted family, direct sums), not from this module.
    const H_P: f64 = 0.500_402_423_538_187_9;
    const H_MINUS: f64 = 0.585_370_571_267_631;
    const H_PLUS: f64 = 0.382_308_389_465_923_1;
    const KL_MINUS: f64 = 0.015_031_852_270_556_9;
    const LAMBDA_W1: f64 = 0.587_786_664_902_119;
    const LAMBDA_WE1: f64 = 0.570_338_718_997_074_1;

    fn p82() -> LetterDistribution {
        LetterDistribution::binary(0.8).unwrap()
    }

    fn models(p: &LetterDistribution, eps: f64) -> Vec<ScgfModel> {
        SourceKind::all(p, eps)
            .unwrap()
            .into_iter()
            .map(|k| ScgfModel::new(k).unwrap())
            .collect()
    }

    fn admissible_binary_grid() -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for i in 0..9 {
            let p0 = 0.55 + 0.05 * i as f64;
            let upper = binary_epsilon_upper(p0);
            for eps in [0.02, 0.05, 0.1, 0.2] {
                if eps < upper {
                    out.push((p0, eps));
                }
            }
        }
        out
    }

    #[test]
    fn scgf_examples() {
        let p = p82();
        let w = SourceKind::unconditioned(p.clone());
        let we = SourceKind::conditioned(p.clone(), 0.1).unwrap();
        let ue = SourceKind::uniform_typical(p.clone(), 0.1).unwrap();
        assert_abs_diff_eq!(scgf(&w, 1.0).unwrap(), LAMBDA_W1, epsilon = 1e-12);
        assert_abs_diff_eq!(scgf(&ue, 1.0).unwrap(), H_MINUS, epsilon = 1e-10);
        assert_abs_diff_eq!(scgf(&we, 1.0).unwrap(), LAMBDA_WE1, epsilon = 1e-10);
        for kind in [&w, &we, &ue] {
            assert_eq!(scgf(kind, 0.0).unwrap(), 0.0);
        }
        assert_abs_diff_eq!(scgf(&w, -3.0).unwrap(), 0.8f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(scgf(&ue, -1.0).unwrap(), -H_MINUS, epsilon = 1e-10);
        assert_abs_diff_eq!(scgf(&we, -2.0).unwrap(), -H_P + 0.1, epsilon = 1e-15);
    }

    #[test]
    fn growth_exponent_examples() {
        let ms = models(&p82(), 0.1);
        let w = ms[0].growth_exponents();
        assert_abs_diff_eq!(w.e_log_g, H_P, epsilon = 1e-8);
        assert_abs_diff_eq!(w.e_g, LAMBDA_W1, epsilon = 1e-12);
        assert_abs_diff_eq!(w.g, 0.8f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(w.gamma, 0.0, epsilon = 1e-7);
        assert!(w.regime_indicator.is_none());

        let we = ms[1].growth_exponents();
        assert_abs_diff_eq!(we.e_log_g, H_P, epsilon = 1e-8);
        assert_abs_diff_eq!(we.e_g, LAMBDA_WE1, epsilon = 1e-10);
        assert_abs_diff_eq!(we.g, -0.400_402_423_538_187_9, epsilon = 1e-12);
        assert_abs_diff_eq!(we.gamma, H_PLUS, epsilon = 1e-7);
        assert_abs_diff_eq!(
            we.regime_indicator.unwrap(),
            0.084_839_248_149_318_75,
            epsilon = 1e-12
        );

        let ue = ms[2].growth_exponents();
        for v in [ue.e_log_g, ue.e_g, -ue.g, ue.gamma] {
            assert_abs_diff_eq!(v, H_MINUS, epsilon = 1e-7);
        }
    }

    #[test]
    fn gamma_numeric_matches_closed_form() {
        for (p0, eps) in admissible_binary_grid() {
            for m in models(&LetterDistribution::binary(p0).unwrap(), eps) {
                assert_abs_diff_eq!(m.gamma(), m.gamma_closed_form(), epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn rate_function_examples() {
        let ms = models(&p82(), 0.1);
        let (w, we, ue) = (&ms[0], &ms[1], &ms[2]);
        assert_abs_diff_eq!(w.rate_function().eval(0.0), -0.8f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(ue.slope_ceiling(), H_MINUS, epsilon = 1e-10);
        assert_eq!(ue.rate_function().eval(ue.slope_ceiling()), 0.0);
        assert_abs_diff_eq!(w.rate_function().eval(H_P), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(we.rate_function().eval(H_P), 0.0, epsilon = 1e-9);
        for m in &ms {
            assert_eq!(m.rate_function().eval(-1e-9), f64::INFINITY);
            assert_eq!(m.rate_function().eval(2f64.ln() + 1e-9), f64::INFINITY);
        }
        assert_eq!(ue.rate_function().eval(H_MINUS + 1e-9), f64::INFINITY);
        // Ceiling values: D(uniform || p) and D(l- || p).
        let d_uniform = 0.5 * (0.5f64 / 0.8).ln() + 0.5 * (0.5f64 / 0.2).ln();
        assert_abs_diff_eq!(
            w.rate_function().eval(2f64.ln()),
            d_uniform,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            we.rate_function().eval(we.slope_ceiling()),
            KL_MINUS,
            epsilon = 1e-10
        );
    }

    #[test]
    fn rate_function_plateau() {
        for m in models(&p82(), 0.1) {
            let rf = m.rate_function();
            let gamma = m.gamma_closed_form();
            for i in 0..=20 {
                let x = gamma * i as f64 / 20.0;
                assert_abs_diff_eq!(rf.eval(x), -x - m.g(), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn rate_function_is_convex_and_nonnegative() {
        for m in models(&LetterDistribution::new(vec![0.6, 0.3, 0.1]).unwrap(), 0.1) {
            let rf = m.rate_function();
            let s = m.slope_ceiling();
            let n = 400;
            let vals: Vec<f64> = (0..=n).map(|i| rf.eval(s * i as f64 / n as f64)).collect();
            assert!(vals.iter().all(|&v| v >= -1e-9), "{}", m.kind().name());
            for w in vals.windows(3) {
                assert!(
                    w[0] + w[2] - 2.0 * w[1] >= -1e-8,
                    "{}: {w:?}",
                    m.kind().name()
                );
            }
        }
    }

    #[test]
    fn lambda_is_convex() {
        let ps = [p82(), LetterDistribution::new(vec![0.6, 0.3, 0.1]).unwrap()];
        for p in &ps {
            for m in models(p, 0.1) {
                let vals: Vec<f64> = (0..=599)
                    .map(|i| m.lambda(-0.99 + 0.01 * i as f64))
                    .collect();
                for w in vals.windows(3) {
                    assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-8, "{}", m.kind().name());
                }
            }
        }
    }

    #[test]
    fn jensen_ordering() {
        for (p0, eps) in admissible_binary_grid() {
            for m in models(&LetterDistribution::binary(p0).unwrap(), eps) {
                let e = m.growth_exponents();
                assert!(
                    e.e_g >= e.e_log_g - 1e-9,
                    "{} p0={p0} eps={eps}",
                    m.kind().name()
                );
            }
        }
    }

    #[test]
    fn uniform_strictly_harder_than_conditioned() {
        for (p0, eps) in admissible_binary_grid() {
            let ms = models(&LetterDistribution::binary(p0).unwrap(), eps);
            assert!(ms[2].lambda(1.0) > ms[1].lambda(1.0), "p0={p0} eps={eps}");
            let b = ms[1].constrained_tilt().unwrap().bounds();
            let h = ms[1].p().entropy();
            assert!(b.h_minus() > h && h > b.h_plus().unwrap());
        }
    }

    #[test]
    fn conditioned_g_follows_lemma_min() {
        for (p0, eps) in admissible_binary_grid() {
            let p = LetterDistribution::binary(p0).unwrap();
            let m = ScgfModel::new(SourceKind::conditioned(p.clone(), eps).unwrap()).unwrap();
            let candidate = -p.entropy() + eps;
            assert!(candidate <= p0.ln());
            assert_eq!(m.g(), candidate);
        }
    }

    /// Recover Lambda(alpha) as sup_x {alpha x - Lambda*(x)} by golden-section
    /// search on the concave objective.
    fn conjugate_back(m: &ScgfModel, alpha: f64) -> f64 {
        let rf = m.rate_function();
        let f = |x: f64| alpha * x - rf.eval(x);
        let (mut a, mut b) = (0.0, m.slope_ceiling());
        let mut best = f(a).max(f(b));
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let c = b - phi * (b - a);
            let d = a + phi * (b - a);
            let (fc, fd) = (f(c), f(d));
            best = best.max(fc).max(fd);
            if fc >= fd {
                b = d;
            } else {
                a = c;
            }
        }
        best
    }

    #[test]
    fn legendre_fenchel_round_trip() {
        for m in models(&p82(), 0.1) {
            for alpha in [-0.5, 0.0, 0.5, 1.0, 2.0] {
                let back = conjugate_back(&m, alpha);
                assert_abs_diff_eq!(back, m.lambda(alpha), epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn rate_function_vanishes_at_lln_point() {
        for m in models(&p82(), 0.1) {
            let x = m.derivative(0.0, DERIVATIVE_STEP);
            assert!(
                m.rate_function().eval(x).abs() < 1e-8,
                "{}",
                m.kind().name()
            );
        }
    }

    #[test]
    fn pmf_approx_examples() {
        let p = p82();
        let ue = ScgfModel::new(SourceKind::uniform_typical(p.clone(), 0.1).unwrap()).unwrap();
        let target = (-100.0 * ue.slope_ceiling()).exp();
        for n in [1.0, 10.0, 1e6] {
            assert_eq!(ue.pmf_approx(100, n).unwrap(), target);
        }
        assert_abs_diff_eq!(target, 3.7816e-26, epsilon = 0.0001e-26);
        let w = ScgfModel::new(SourceKind::unconditioned(p.clone())).unwrap();
        assert_abs_diff_eq!(
            w.pmf_approx(20, 1.0).unwrap(),
            0.8f64.powi(20),
            epsilon = 1e-16
        );
        let we = ScgfModel::new(SourceKind::conditioned(p, 0.1).unwrap()).unwrap();
        assert_relative_eq!(
            we.pmf_approx(20, 1.0).unwrap(),
            (-20.0 * 0.400_402_423_538_187_9f64).exp(),
            max_relative = 1e-12
        );
        assert!(w.pmf_approx(20, 0.5).is_err());
        assert!(w.pmf_approx(3, 9.0).is_err());
        assert!(w.pmf_approx(0, 1.0).is_err());
    }

    #[test]
    fn binary_closed_form_examples() {
        let b = binary_closed_forms(0.8, 0.1).unwrap();
        assert_abs_diff_eq!(b.top, H_MINUS - H_P, epsilon = 1e-15);
        assert_abs_diff_eq!(b.top, 0.084_968_147_729_443_1, epsilon = 1e-12);
        assert_abs_diff_eq!(b.middle, KL_MINUS, epsilon = 1e-12);
        assert_abs_diff_eq!(b.bottom, -0.002_416_093_634_488_0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.a, 0.084_839_248_149_318_75, epsilon = 1e-12);
        assert!(matches!(
            binary_closed_forms(0.8, 0.5),
            Err(Error::EpsilonInadmissible { .. })
        ));
        assert!(binary_closed_forms(0.5, 0.01).is_err());
    }

    #[test]
    fn binary_closed_forms_agree_with_general_path() {
        for (p0, eps) in admissible_binary_grid() {
            let b = binary_closed_forms(p0, eps).unwrap();
            let ms = models(&LetterDistribution::binary(p0).unwrap(), eps);
            assert_abs_diff_eq!(b.lambda_w1, ms[0].lambda(1.0), epsilon = 1e-12);
            assert_abs_diff_eq!(b.h_minus, ms[2].lambda(1.0), epsilon = 1e-9);
            assert_abs_diff_eq!(
                b.middle,
                ms[2].lambda(1.0) - ms[1].lambda(1.0),
                epsilon = 1e-9
            );
            assert!(b.top >= b.middle - 1e-12 && b.middle >= b.bottom - 1e-12);
            assert!(b.middle > 0.0);
        }
    }

    #[test]
    fn curves_vanish_in_uniform_limit() {
        let p0 = 0.5 + 1e-4;
        let eps = 0.5 * binary_epsilon_upper(p0);
        let b = binary_closed_forms(p0, eps).unwrap();
        for v in [b.top, b.middle, b.bottom] {
            assert!(v.abs() < 1e-7, "{v}");
        }
    }

    #[test]
    fn admissibility() {
        let p = p82();
        assert_abs_diff_eq!(
            admissible_epsilon_upper(&p).unwrap(),
            0.2772589,
            epsilon = 1e-7
        );
        assert!(check_epsilon_admissible(&p, 0.1).is_ok());
        match check_epsilon_admissible(&p, 0.5) {
            Err(Error::EpsilonInadmissible { upper, .. }) => {
                assert_abs_diff_eq!(upper, 4f64.ln() * 0.2, epsilon = 1e-15)
            }
            other => panic!("{other:?}"),
        }
        let u = LetterDistribution::uniform(2).unwrap();
        assert!(check_epsilon_admissible(&u, 0.05).is_ok());
        assert!(check_epsilon_admissible(&u, -1.0).is_err());
    }

    #[test]
    fn uniform_source_degenerates() {
        let u = LetterDistribution::uniform(2).unwrap();
        let ln2 = 2f64.ln();
        for m in models(&u, 0.05) {
            let e = m.growth_exponents();
            assert_abs_diff_eq!(e.e_g, ln2, epsilon = 1e-12);
            assert_abs_diff_eq!(e.e_log_g, ln2, epsilon = 1e-8);
            assert_abs_diff_eq!(e.g, -ln2, epsilon = 1e-12);
            assert_abs_diff_eq!(e.gamma, ln2, epsilon = 1e-6);
        }
    }

    #[test]
    fn conditioned_without_l_plus_matches_unconditioned_below_zero() {
        // eps beyond the l+ range: no lower clamp, g = log max p.
        let p = p82();
        let we = ScgfModel::new(SourceKind::conditioned(p.clone(), 0.5).unwrap()).unwrap();
        let w = ScgfModel::new(SourceKind::unconditioned(p)).unwrap();
        assert_eq!(we.g(), 0.8f64.ln());
        for alpha in [-0.99, -0.5, 0.0] {
            assert_abs_diff_eq!(we.lambda(alpha), w.lambda(alpha), epsilon = 1e-15);
        }
    }
}
