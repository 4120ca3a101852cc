//! Log-domain arithmetic and rank power sums.
//!
//! Guess ranks at moderate word lengths exceed the range of `f64` long before
//! the probabilities they are weighted by underflow, so everything that
//! touches a rank range is carried as a natural logarithm. Ranges are exact
//! [`BigUint`] values.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Ranks below this index are summed term by term; the remainder of a range
/// is handled by an Euler-Maclaurin expansion whose truncation error at this
/// starting point is far below `f64` resolution.
pub const DIRECT_SUM_LIMIT: u64 = 1 << 20;

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// `ln(sum(exp(x)))`, returning `-inf` for an empty or all `-inf` input.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let values: Vec<f64> = values.into_iter().collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let acc: CompensatedSum = values.iter().map(|&v| (v - max).exp()).collect();
    max + acc.value().ln()
}

pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(1 + e^x)` without overflow.
pub fn softplus(x: f64) -> f64 {
    if x > 35.0 {
        x + (-x).exp()
    } else {
        x.exp().ln_1p()
    }
}

/// `ln|e^c - 1|` for `c != 0`.
pub fn ln_abs_expm1(c: f64) -> f64 {
    if c > 40.0 {
        c + (-(-c).exp()).ln_1p()
    } else if c > 0.0 {
        c.exp_m1().ln()
    } else {
        (-c.exp_m1()).ln()
    }
}

/// Natural log of an arbitrary-size unsigned integer; `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits in 64 bits") as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("fits in 64 bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exact `sum_{i=a}^{b} i^power` for `power` in {1, 2}.
///
/// Returns `None` for any other power.
pub fn exact_power_sum(a: &BigUint, b: &BigUint, power: u32) -> Option<BigUint> {
    if a > b {
        return Some(BigUint::zero());
    }
    let one = BigUint::one();
    match power {
        1 => Some(((a + b) * (b - a + &one)) >> 1),
        2 => {
            let prefix = |n: &BigUint| -> BigUint {
                n * (n + &one) * ((n << 1) + &one) / BigUint::from(6u32)
            };
            let below = if a.is_zero() {
                BigUint::zero()
            } else {
                prefix(&(a - &one))
            };
            Some(prefix(b) - below)
        }
        _ => None,
    }
}

/// `ln(sum_{i=a}^{b} i^alpha)` for `1 <= a <= b`.
///
/// Powers 0, 1 and 2 are exact integer sums; other powers are compensated
/// direct summation below [`DIRECT_SUM_LIMIT`] and Euler-Maclaurin above it.
pub fn log_power_sum(a: &BigUint, b: &BigUint, alpha: f64) -> f64 {
    assert!(
        !a.is_zero() && a <= b,
        "rank range must satisfy 1 <= a <= b"
    );
    if alpha == 0.0 {
        return ln_biguint(&(b - a + 1u32));
    }
    if alpha == 1.0 || alpha == 2.0 {
        let s = exact_power_sum(a, b, alpha as u32).expect("power 1 or 2");
        return ln_biguint(&s);
    }
    let limit = BigUint::from(DIRECT_SUM_LIMIT);
    let mut parts = Vec::with_capacity(2);
    if a < &limit {
        let lo = a.to_u64().expect("below limit");
        let hi = if b < &limit {
            b.to_u64().expect("below limit")
        } else {
            DIRECT_SUM_LIMIT - 1
        };
        let acc: CompensatedSum = (lo..=hi).map(|i| (i as f64).powf(alpha)).collect();
        parts.push(acc.value().ln());
    }
    if b >= &limit {
        let start = if a < &limit { limit } else { a.clone() };
        parts.push(euler_maclaurin_log_power(&start, b, alpha));
    }
    parts.into_iter().fold(f64::NEG_INFINITY, log_add_exp)
}

/// `ln(sum_{i=a}^{b} ln i)` for `1 <= a <= b`; `-inf` when the sum is 0.
pub fn log_sum_of_logs(a: &BigUint, b: &BigUint) -> f64 {
    assert!(
        !a.is_zero() && a <= b,
        "rank range must satisfy 1 <= a <= b"
    );
    let limit = BigUint::from(DIRECT_SUM_LIMIT);
    let mut total = f64::NEG_INFINITY;
    if a < &limit {
        let lo = a.to_u64().expect("below limit");
        let hi = if b < &limit {
            b.to_u64().expect("below limit")
        } else {
            DIRECT_SUM_LIMIT - 1
        };
        let acc: CompensatedSum = (lo..=hi).map(|i| (i as f64).ln()).collect();
        total = acc.value().ln();
    }
    if b >= &limit {
        let start = if a < &limit { limit } else { a.clone() };
        total = log_add_exp(total, euler_maclaurin_log_sum_of_logs(&start, b));
    }
    total
}

// Bernoulli weights B_2/2!, B_4/4!, B_6/6!.
const EM_WEIGHTS: [f64; 3] = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0];

struct RangeLogs {
    ln_a: f64,
    ln_b: f64,
    /// ln((b - a) / a)
    ln_t: f64,
    /// ln(b - a)
    ln_d: f64,
}

impl RangeLogs {
    fn new(a: &BigUint, b: &BigUint) -> Self {
        let ln_a = ln_biguint(a);
        let ln_d = ln_biguint(&(b - a));
        Self {
            ln_a,
            ln_b: ln_biguint(b),
            ln_t: ln_d - ln_a,
            ln_d,
        }
    }
}

fn euler_maclaurin_log_power(a: &BigUint, b: &BigUint, alpha: f64) -> f64 {
    if a == b {
        return alpha * ln_biguint(a);
    }
    let r = RangeLogs::new(a, b);
    // ln(b / a)
    let u = softplus(r.ln_t);
    let s = alpha + 1.0;
    let ln_integral = if s == 0.0 {
        u.ln()
    } else {
        s * r.ln_a + ln_abs_expm1(s * u) - s.abs().ln()
    };
    let rel = |ln_x: f64, power: f64| (power * ln_x - ln_integral).exp();
    let mut correction = 0.5 * (rel(r.ln_a, alpha) + rel(r.ln_b, alpha));
    // Derivative falling factorials alpha (alpha-1) ... for orders 1, 3, 5.
    let mut falling = alpha;
    let mut order = 1.0;
    for (j, w) in EM_WEIGHTS.iter().enumerate() {
        if j > 0 {
            falling *= (alpha - order) * (alpha - order - 1.0);
            order += 2.0;
        }
        let p = alpha - order;
        correction += w * falling * (rel(r.ln_b, p) - rel(r.ln_a, p));
    }
    ln_integral + correction.ln_1p()
}

/// `((1 + t) ln(1 + t) - t) / t` given `ln t`.
fn log_integral_shape(ln_t: f64) -> f64 {
    if ln_t < -3.0 {
        let t = ln_t.exp();
        // sum_{n>=2} (-1)^n t^(n-1) / (n (n-1))
        let mut acc = 0.0;
        let mut tp = 1.0;
        for n in 2..24 {
            tp *= t;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * tp / (n * (n - 1)) as f64;
        }
        acc
    } else {
        (1.0 + (-ln_t).exp()) * softplus(ln_t) - 1.0
    }
}

fn euler_maclaurin_log_sum_of_logs(a: &BigUint, b: &BigUint) -> f64 {
    if a == b {
        return ln_biguint(a).ln();
    }
    let r = RangeLogs::new(a, b);
    let ln_integral = r.ln_d + (r.ln_a + log_integral_shape(r.ln_t)).ln();
    let mut correction = (0.5 * (r.ln_a + r.ln_b)).ln() - ln_integral;
    correction = correction.exp();
    // f^(2j-1)(x) = (2j-2)! / x^(2j-1) for f = ln.
    let factorials = [1.0, 2.0, 24.0];
    for (j, (w, f)) in EM_WEIGHTS.iter().zip(factorials).enumerate() {
        let p = (2 * j + 1) as f64;
        let at = |ln_x: f64| (-p * ln_x - ln_integral).exp();
        correction += w * f * (at(r.ln_b) - at(r.ln_a));
    }
    ln_integral + correction.ln_1p()
}
