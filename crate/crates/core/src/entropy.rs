//! Letter distributions, empirical types and the entropy functionals built on
//! them. All logarithms are natural; entropies are in nats.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Tolerance on `sum(p) == 1` for distributions and types.
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// Default cap on `|L_k| = C(k+m-1, m-1)` for [`enumerate_types`].
pub const DEFAULT_MAX_TYPES: u128 = 10_000_000;

/// Word lengths up to this value get exact integer type counts from
/// [`count_type`]; longer words fall back to log-gamma.
pub const DEFAULT_EXACT_COUNT_MAX_K: usize = 20_000;

/// Slack on the closed typical window that absorbs rounding in
/// `-sum(l_a log p_a)` for lattice points sitting exactly on a boundary.
pub const WINDOW_SLACK: f64 = 1e-12;

fn check_simplex(values: &[f64], what: &str) -> Result<()> {
    if let Some((i, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || **v < 0.0)
    {
        return Err(Error::InvalidDistribution(format!(
            "{what} entry {i} is {v}, must be a finite non-negative number"
        )));
    }
    let total: f64 = values.iter().sum();
    if (total - 1.0).abs() > SIMPLEX_TOLERANCE {
        return Err(Error::InvalidDistribution(format!(
            "{what} sums to {total}, expected 1"
        )));
    }
    Ok(())
}

/// Letter probabilities `p_a = P(W_1 = a)` over the alphabet `{0, ..., m-1}`.
///
/// Zero entries are allowed; every functional restricts itself to the support.
#[derive(Debug, Clone, PartialEq)]
pub struct LetterDistribution {
    probs: Vec<f64>,
}

impl LetterDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::AlphabetTooSmall(probs.len()));
        }
        check_simplex(&probs, "probability")?;
        Ok(Self { probs })
    }

    /// Builds a distribution from values that sum to 1 within `tolerance`,
    /// rescaling them onto the simplex.
    pub fn normalized(values: Vec<f64>, tolerance: f64) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::AlphabetTooSmall(values.len()));
        }
        let total: f64 = values.iter().sum();
        if !total.is_finite() || (total - 1.0).abs() > tolerance {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, which is not within {tolerance} of 1"
            )));
        }
        Self::new(values.into_iter().map(|v| v / total).collect())
    }

    /// The binary distribution `(p0, 1 - p0)`.
    pub fn binary(p0: f64) -> Result<Self> {
        Self::new(vec![p0, 1.0 - p0])
    }

    pub fn uniform(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::AlphabetTooSmall(m));
        }
        Ok(Self {
            probs: vec![1.0 / m as f64; m],
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Alphabet size `m`.
    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    /// Number of letters with positive probability.
    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|&&p| p > 0.0).count()
    }

    pub fn max_prob(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }

    /// Number of letters attaining the maximum probability.
    pub fn modal_letter_count(&self) -> usize {
        let max = self.max_prob();
        self.probs.iter().filter(|&&p| p == max).count()
    }

    /// `log p_a`, with `-inf` for zero-probability letters.
    pub fn log_probs(&self) -> Vec<f64> {
        self.probs.iter().map(|p| p.ln()).collect()
    }

    /// Shannon entropy `h(p)`.
    pub fn entropy(&self) -> f64 {
        entropy_of(&self.probs)
    }

    /// True when `p` is uniform on its support, the degenerate case where
    /// every word of positive probability is typical.
    pub fn is_uniform_on_support(&self) -> bool {
        let max = self.max_prob();
        self.probs.iter().all(|&p| p == 0.0 || p == max)
    }

    /// Uniform distribution on the support of `p`, as a type vector.
    pub fn support_uniform(&self) -> TypeVector {
        let s = self.support_size() as f64;
        TypeVector::from_freqs_unchecked(
            self.probs
                .iter()
                .map(|&p| if p > 0.0 { 1.0 / s } else { 0.0 })
                .collect(),
        )
    }

    /// The distribution viewed as a (grain-free) type vector.
    pub fn as_type(&self) -> TypeVector {
        TypeVector::from_freqs_unchecked(self.probs.clone())
    }
}

impl fmt::Display for LetterDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.probs.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// An empirical letter-frequency vector `l` on the simplex.
///
/// A type built from letter counts carries its grain `k`, so every entry is
/// an exact multiple of `1/k` and the counts are available without rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeVector {
    freqs: Vec<f64>,
    counts: Option<Vec<u64>>,
}

impl TypeVector {
    pub fn new(freqs: Vec<f64>) -> Result<Self> {
        if freqs.is_empty() {
            return Err(Error::InvalidType("empty type vector".into()));
        }
        check_simplex(&freqs, "type").map_err(|e| Error::InvalidType(e.to_string()))?;
        Ok(Self {
            freqs,
            counts: None,
        })
    }

    /// A `k`-type from letter counts; `k` is their sum.
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        let k: u64 = counts.iter().sum();
        if counts.is_empty() || k == 0 {
            return Err(Error::InvalidType(
                "counts must be non-empty with a positive total".into(),
            ));
        }
        let freqs = counts.iter().map(|&c| c as f64 / k as f64).collect();
        Ok(Self {
            freqs,
            counts: Some(counts),
        })
    }

    /// A type with grain `k`: every `k * freqs[a]` must be an integer.
    pub fn with_grain(freqs: Vec<f64>, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::NotAKType("grain must be positive".into()));
        }
        let mut counts = Vec::with_capacity(freqs.len());
        for (a, &f) in freqs.iter().enumerate() {
            let scaled = f * k as f64;
            let rounded = scaled.round();
            if !scaled.is_finite() || rounded < 0.0 || (scaled - rounded).abs() > 1e-9 {
                return Err(Error::NotAKType(format!(
                    "{k} * l[{a}] = {scaled} is not an integer"
                )));
            }
            counts.push(rounded as u64);
        }
        if counts.iter().sum::<u64>() != k {
            return Err(Error::NotAKType(format!("counts do not sum to {k}")));
        }
        Self::from_counts(counts)
    }

    pub(crate) fn from_freqs_unchecked(freqs: Vec<f64>) -> Self {
        Self {
            freqs,
            counts: None,
        }
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn counts(&self) -> Option<&[u64]> {
        self.counts.as_deref()
    }

    pub fn grain(&self) -> Option<u64> {
        self.counts.as_ref().map(|c| c.iter().sum())
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn entropy(&self) -> f64 {
        shannon_entropy(self)
    }
}

/// A word `w = (w_1, ..., w_k)` over `{0, ..., m-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    letters: Vec<usize>,
    alphabet_size: usize,
}

impl Word {
    pub fn new(letters: Vec<usize>, alphabet_size: usize) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidWord("word length must be at least 1".into()));
        }
        if let Some(&bad) = letters.iter().find(|&&a| a >= alphabet_size) {
            return Err(Error::InvalidWord(format!(
                "letter {bad} outside alphabet of size {alphabet_size}"
            )));
        }
        Ok(Self {
            letters,
            alphabet_size,
        })
    }

    /// Parses a word written as a string of decimal digits, e.g. `"00101"`.
    pub fn parse(digits: &str, alphabet_size: usize) -> Result<Self> {
        let letters = digits
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::InvalidWord(format!("'{c}' is not a digit")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters, alphabet_size)
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }
}

/// Parameters `(p, epsilon, k)` of the typical set `T^eps_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalSetSpec {
    p: LetterDistribution,
    epsilon: f64,
    k: usize,
}

impl TypicalSetSpec {
    pub fn new(p: LetterDistribution, epsilon: f64, k: usize) -> Result<Self> {
        check_epsilon(epsilon)?;
        if k == 0 {
            return Err(Error::InvalidWordLength(k));
        }
        Ok(Self { p, epsilon, k })
    }

    pub fn p(&self) -> &LetterDistribution {
        &self.p
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The closed window `[h(p) - eps, h(p) + eps]` for `-(1/k) log P(W_k = w)`.
    pub fn window(&self) -> (f64, f64) {
        typical_window(&self.p, self.epsilon)
    }

    pub fn contains_type(&self, l: &TypeVector) -> bool {
        is_typical_type(&self.p, self.epsilon, l)
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    Ok(())
}

fn entropy_of(freqs: &[f64]) -> f64 {
    -freqs
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum::<f64>()
}

/// `h(l) = -sum_a l_a log l_a`, with `0 log 0 = 0`.
pub fn shannon_entropy(l: &TypeVector) -> f64 {
    entropy_of(&l.freqs)
}

/// Cross entropy `-sum_a l_a log p_a`, i.e. the per-letter value of
/// `-(1/k) log P(W_k = w)` for a word of type `l`. Infinite when `l` charges
/// a letter of probability zero.
pub fn cross_entropy(l: &TypeVector, p: &LetterDistribution) -> f64 {
    assert_eq!(
        l.len(),
        p.alphabet_size(),
        "type and distribution lengths differ"
    );
    let mut acc = 0.0;
    for (&la, &pa) in l.freqs.iter().zip(&p.probs) {
        if la > 0.0 {
            if pa == 0.0 {
                return f64::INFINITY;
            }
            acc -= la * pa.ln();
        }
    }
    acc
}

/// `D(l || p) = sum_a l_a log(l_a / p_a)`.
pub fn kl_divergence(l: &TypeVector, p: &LetterDistribution) -> Result<f64> {
    assert_eq!(
        l.len(),
        p.alphabet_size(),
        "type and distribution lengths differ"
    );
    let mut acc = 0.0;
    for (a, (&la, &pa)) in l.freqs.iter().zip(&p.probs).enumerate() {
        if la > 0.0 {
            if pa == 0.0 {
                return Err(Error::AbsoluteContinuity {
                    letter: a,
                    mass: la,
                });
            }
            acc += la * (la / pa).ln();
        }
    }
    Ok(acc.max(0.0))
}

/// Specific Renyi entropy of an i.i.d. source,
/// `R(beta) = log(sum_a p_a^beta) / (1 - beta)`, with the Shannon entropy at
/// `beta = 1`.
pub fn renyi_rate(p: &LetterDistribution, beta: f64) -> Result<f64> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidRenyiOrder(beta));
    }
    if beta == 1.0 {
        return Ok(p.entropy());
    }
    let log_power_sum =
        crate::numeric::log_sum_exp(p.probs.iter().filter(|&&x| x > 0.0).map(|x| beta * x.ln()));
    Ok(log_power_sum / (1.0 - beta))
}

/// `log P(W_k = w) = sum_i log p_{w_i}`; `-inf` for impossible words.
pub fn word_log_prob(p: &LetterDistribution, w: &Word) -> f64 {
    assert_eq!(
        w.alphabet_size,
        p.alphabet_size(),
        "word alphabet differs from p"
    );
    w.letters.iter().map(|&a| p.probs[a].ln()).sum()
}

/// The type `n_k(w, .)` of a word.
pub fn word_type(w: &Word) -> TypeVector {
    let mut counts = vec![0u64; w.alphabet_size];
    for &a in &w.letters {
        counts[a] += 1;
    }
    TypeVector::from_counts(counts).expect("word is non-empty")
}

fn grained_counts(l: &TypeVector) -> Result<&[u64]> {
    l.counts()
        .ok_or_else(|| Error::NotAKType("type has no grain k".into()))
}

/// `N_k(l) = k! / prod_a (k l_a)!`, exactly.
pub fn type_count(l: &TypeVector) -> Result<BigUint> {
    Ok(multinomial(grained_counts(l)?))
}

/// Exact multinomial coefficient of the given counts.
pub fn multinomial(counts: &[u64]) -> BigUint {
    // Product of binomials C(n_1 + ... + n_j, n_j), each built incrementally.
    let mut result = BigUint::one();
    let mut total = 0u64;
    for &c in counts {
        for i in 1..=c {
            total += 1;
            result *= total;
            result /= i;
        }
    }
    result
}

/// `log N_k(l)` via log-gamma.
pub fn log_type_count(l: &TypeVector) -> Result<f64> {
    let counts = grained_counts(l)?;
    let k: u64 = counts.iter().sum();
    Ok(ln_gamma(k as f64 + 1.0)
        - counts
            .iter()
            .map(|&c| ln_gamma(c as f64 + 1.0))
            .sum::<f64>())
}

/// A type-class size: exact when the word length is within the exact-count
/// limit, otherwise a log-gamma approximation.
#[derive(Debug, Clone, PartialEq)]
pub enum TypeCount {
    Exact(BigUint),
    Approximate { ln: f64 },
}

impl TypeCount {
    pub fn ln(&self) -> f64 {
        match self {
            TypeCount::Exact(n) => crate::numeric::ln_biguint(n),
            TypeCount::Approximate { ln } => *ln,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, TypeCount::Exact(_))
    }
}

pub fn count_type(l: &TypeVector, exact_max_k: usize) -> Result<TypeCount> {
    let counts = grained_counts(l)?;
    let k: u64 = counts.iter().sum();
    if k as usize <= exact_max_k {
        Ok(TypeCount::Exact(multinomial(counts)))
    } else {
        Ok(TypeCount::Approximate {
            ln: log_type_count(l)?,
        })
    }
}

/// `|L_k| = C(k+m-1, m-1)`, saturating at `u128::MAX`.
pub fn type_space_size(k: usize, m: usize) -> u128 {
    let (n, r) = ((k + m - 1) as u128, (m - 1).min(k) as u128);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All `k`-types over `m` letters (`L_k`), in lexicographic order of their
/// count vectors.
pub fn enumerate_types(k: usize, m: usize) -> Result<Vec<TypeVector>> {
    enumerate_types_capped(k, m, DEFAULT_MAX_TYPES)
}

pub fn enumerate_types_capped(k: usize, m: usize, max_types: u128) -> Result<Vec<TypeVector>> {
    if k == 0 {
        return Err(Error::InvalidWordLength(k));
    }
    if m < 2 {
        return Err(Error::AlphabetTooSmall(m));
    }
    let count = type_space_size(k, m);
    if count > max_types {
        return Err(Error::TypeSpaceTooLarge {
            count,
            cap: max_types,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut current = vec![0u64; m];
    compositions(k as u64, 0, &mut current, &mut out);
    Ok(out)
}

fn compositions(remaining: u64, pos: usize, current: &mut Vec<u64>, out: &mut Vec<TypeVector>) {
    let last = current.len() - 1;
    if pos == last {
        current[pos] = remaining;
        out.push(TypeVector::from_counts(current.clone()).expect("positive total"));
        return;
    }
    for c in 0..=remaining {
        current[pos] = c;
        compositions(remaining - c, pos + 1, current, out);
    }
}

/// The closed window `[h(p) - eps, h(p) + eps]`.
pub fn typical_window(p: &LetterDistribution, epsilon: f64) -> (f64, f64) {
    let h = p.entropy();
    (h - epsilon, h + epsilon)
}

/// Membership of `l` in `L_eps`: `-sum_a l_a log p_a` lies in the closed
/// typical window. Types charging a zero-probability letter are never typical.
pub fn is_typical_type(p: &LetterDistribution, epsilon: f64, l: &TypeVector) -> bool {
    let value = cross_entropy(l, p);
    if !value.is_finite() {
        return false;
    }
    let (lo, hi) = typical_window(p, epsilon);
    value >= lo - WINDOW_SLACK && value <= hi + WINDOW_SLACK
}
