//! Ordinal patterns of consecutive observations.
//!
//! A window of `h + 1` values is mapped to the permutation of its time indices
//! listed by descending value. Equal values keep their time order, so the
//! earlier index is written first. Patterns are stored as index tuples; the
//! lexicographic rank is only used for numbering and ordered iteration.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest order whose `(h + 1)!` patterns can be ranked in a `u64`.
pub const MAX_ORDER: usize = 19;

/// Permutation of `{0, .., h}` describing the up/down shape of `h + 1` values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct OrdinalPattern(Box<[u8]>);

impl OrdinalPattern {
    /// Builds a pattern from an index tuple, checking that it is a permutation of `0..=h`.
    pub fn new(indices: impl Into<Vec<u8>>) -> Result<Self> {
        let indices = indices.into();
        let n = indices.len();
        if n < 2 {
            return Err(Error::InvalidPattern(format!(
                "{n} indices given, at least 2 are required"
            )));
        }
        if n > MAX_ORDER + 1 {
            return Err(Error::InvalidPattern(format!(
                "{n} indices exceed the supported maximum of {}",
                MAX_ORDER + 1
            )));
        }
        let mut seen = vec![false; n];
        for &i in &indices {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidPattern(format!(
                    "{indices:?} is not a permutation of 0..={}",
                    n - 1
                )));
            }
            seen[i] = true;
        }
        Ok(Self(indices.into_boxed_slice()))
    }

    /// Identity pattern `(0, 1, .., h)`, the pattern of a constant window.
    pub fn identity(order: usize) -> Self {
        Self((0..=order as u8).collect())
    }

    /// Number of increments spanned by the pattern.
    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    /// The reflected pattern: the index tuple read from right to left.
    pub fn reflect(&self) -> Self {
        let mut v = self.0.to_vec();
        v.reverse();
        Self(v.into_boxed_slice())
    }

    /// Lexicographic rank of the index tuple among all permutations of `0..=h`.
    pub fn lex_rank(&self) -> u64 {
        rank_of(self.0.iter().copied())
    }

    /// Rank of the reflected pattern, without building it.
    pub fn reflected_rank(&self) -> u64 {
        rank_of(self.0.iter().rev().copied())
    }

    /// Inverse of [`lex_rank`](Self::lex_rank).
    pub fn from_rank(rank: u64, order: usize) -> Result<Self> {
        if order == 0 || order > MAX_ORDER {
            return Err(Error::InvalidParameter(format!(
                "order must be in 1..={MAX_ORDER}, got {order}"
            )));
        }
        let limit = pattern_count(order);
        if rank >= limit {
            return Err(Error::RankOutOfRange { rank, order, limit });
        }
        let n = order + 1;
        // factorial digits, most significant first
        let mut digits = vec![0u64; n];
        let mut r = rank;
        for (k, d) in digits.iter_mut().rev().enumerate() {
            let base = k as u64 + 1;
            *d = r % base;
            r /= base;
        }
        let mut remaining: Vec<u8> = (0..n as u8).collect();
        let indices = digits
            .into_iter()
            .map(|d| remaining.remove(d as usize))
            .collect::<Vec<_>>();
        Ok(Self(indices.into_boxed_slice()))
    }
}

impl fmt::Display for OrdinalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for OrdinalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for OrdinalPattern {
    type Err = Error;

    /// Parses `(3,1,2,0)`; the parentheses are optional.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim();
        let inner = inner
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(inner);
        let indices = inner
            .split(',')
            .map(|t| t.trim().parse::<u8>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidPattern(format!("cannot parse {s:?}")))?;
        Self::new(indices)
    }
}

impl TryFrom<String> for OrdinalPattern {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<OrdinalPattern> for String {
    fn from(p: OrdinalPattern) -> String {
        p.to_string()
    }
}

fn rank_of<I>(indices: I) -> u64
where
    I: ExactSizeIterator<Item = u8> + Clone,
{
    let n = indices.len();
    let mut rank = 0u64;
    let mut rest = indices;
    for i in 0..n {
        let head = rest.next().expect("length checked");
        let smaller_after = rest.clone().filter(|&v| v < head).count() as u64;
        rank = rank * (n - i) as u64 + smaller_after;
    }
    rank
}

/// Number of distinct patterns of the given order, `(h + 1)!`.
pub fn pattern_count(order: usize) -> u64 {
    (1..=order as u64 + 1).product()
}

/// All patterns of one order in ascending rank.
pub fn all_patterns(order: usize) -> impl Iterator<Item = OrdinalPattern> {
    (0..pattern_count(order))
        .map(move |r| OrdinalPattern::from_rank(r, order).expect("rank below pattern count"))
}

/// How consecutive windows advance through a series.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowScheme {
    /// Start index advances by one.
    #[default]
    Sliding,
    /// Start index advances by `h`; neighbouring blocks share their boundary point.
    Block,
}

impl WindowScheme {
    pub fn stride(self, order: usize) -> usize {
        match self {
            WindowScheme::Sliding => 1,
            WindowScheme::Block => order,
        }
    }

    /// Number of windows of order `h` in a series of `len` points.
    pub fn window_count(self, len: usize, order: usize) -> usize {
        if order == 0 || len < order + 1 {
            return 0;
        }
        match self {
            WindowScheme::Sliding => len - order,
            WindowScheme::Block => (len - 1) / order,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WindowScheme::Sliding => "sliding",
            WindowScheme::Block => "block",
        }
    }
}

impl fmt::Display for WindowScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WindowScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sliding" => Ok(WindowScheme::Sliding),
            "block" => Ok(WindowScheme::Block),
            other => Err(Error::InvalidParameter(format!(
                "unknown window scheme {other:?} (expected sliding or block)"
            ))),
        }
    }
}

/// Extracts the ordinal pattern of a window using exact ties.
pub fn extract_pattern(window: &[f64]) -> Result<OrdinalPattern> {
    extract_pattern_with_tolerance(window, 0.0)
}

/// Extracts the ordinal pattern of a window, treating values closer than
/// `epsilon` as tied. `epsilon = 0` is the exact rule.
pub fn extract_pattern_with_tolerance(window: &[f64], epsilon: f64) -> Result<OrdinalPattern> {
    check_epsilon(epsilon)?;
    check_window(window)?;
    let mut out = Vec::with_capacity(window.len());
    fill_pattern(window, epsilon, &mut out);
    Ok(OrdinalPattern(out.into_boxed_slice()))
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tie tolerance must be finite and non-negative, got {epsilon}"
        )));
    }
    Ok(())
}

fn check_window(window: &[f64]) -> Result<()> {
    if window.len() < 2 {
        return Err(Error::WindowTooShort { len: window.len() });
    }
    if window.len() > MAX_ORDER + 1 {
        return Err(Error::InvalidParameter(format!(
            "window of {} values exceeds the supported maximum of {}",
            window.len(),
            MAX_ORDER + 1
        )));
    }
    if let Some((index, &value)) = window.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFiniteValue { index, value });
    }
    Ok(())
}

// Stable insertion sort by descending value. An index only moves ahead of an
// earlier one when its value is larger by more than `epsilon`, which keeps the
// result a permutation even though the tolerant comparison is not transitive.
fn fill_pattern(window: &[f64], epsilon: f64, out: &mut Vec<u8>) {
    out.clear();
    for i in 0..window.len() {
        let mut pos = out.len();
        while pos > 0 && window[i] - window[out[pos - 1] as usize] > epsilon {
            pos -= 1;
        }
        out.insert(pos, i as u8);
    }
}

/// Order, advancement scheme and tie tolerance used to turn a series into patterns.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatternConfig {
    pub order: usize,
    pub scheme: WindowScheme,
    pub epsilon: f64,
}

impl PatternConfig {
    pub fn new(order: usize, scheme: WindowScheme) -> Self {
        Self {
            order,
            scheme,
            epsilon: 0.0,
        }
    }

    pub fn sliding(order: usize) -> Self {
        Self::new(order, WindowScheme::Sliding)
    }

    pub fn block(order: usize) -> Self {
        Self::new(order, WindowScheme::Block)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.order == 0 || self.order > MAX_ORDER {
            return Err(Error::InvalidParameter(format!(
                "order must be in 1..={MAX_ORDER}, got {}",
                self.order
            )));
        }
        check_epsilon(self.epsilon)
    }
}

/// Patterns extracted from one series, in window order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSequence {
    order: usize,
    scheme: WindowScheme,
    patterns: Vec<OrdinalPattern>,
}

impl PatternSequence {
    /// Wraps already extracted patterns; all must share `order`.
    pub fn from_patterns(
        order: usize,
        scheme: WindowScheme,
        patterns: Vec<OrdinalPattern>,
    ) -> Result<Self> {
        if let Some(p) = patterns.iter().find(|p| p.order() != order) {
            return Err(Error::OrderMismatch {
                left: order,
                right: p.order(),
            });
        }
        Ok(Self {
            order,
            scheme,
            patterns,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn scheme(&self) -> WindowScheme {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[OrdinalPattern] {
        &self.patterns
    }

    pub fn iter(&self) -> std::slice::Iter<'_, OrdinalPattern> {
        self.patterns.iter()
    }

    /// Index of the first series point covered by window `i`.
    pub fn window_start(&self, i: usize) -> usize {
        i * self.scheme.stride(self.order)
    }
}

impl<'a> IntoIterator for &'a PatternSequence {
    type Item = &'a OrdinalPattern;
    type IntoIter = std::slice::Iter<'a, OrdinalPattern>;

    fn into_iter(self) -> Self::IntoIter {
        self.patterns.iter()
    }
}

/// Extracts the pattern of every window of `values` under `cfg`.
pub fn pattern_sequence(values: &[f64], cfg: &PatternConfig) -> Result<PatternSequence> {
    cfg.validate()?;
    let h = cfg.order;
    if values.len() < h + 1 {
        return Err(Error::SeriesTooShort {
            len: values.len(),
            order: h,
        });
    }
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFiniteValue { index, value });
    }
    let stride = cfg.scheme.stride(h);
    let count = cfg.scheme.window_count(values.len(), h);
    let mut scratch = Vec::with_capacity(h + 1);
    let patterns = (0..count)
        .map(|i| {
            let start = i * stride;
            fill_pattern(&values[start..=start + h], cfg.epsilon, &mut scratch);
            OrdinalPattern(scratch.as_slice().into())
        })
        .collect();
    Ok(PatternSequence {
        order: h,
        scheme: cfg.scheme,
        patterns,
    })
}
