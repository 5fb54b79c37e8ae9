//! Pattern distributions and positive/negative ordinal pattern dependence.
//!
//! For two aligned series the estimators compare the observed share of
//! coincident windows (`p_eq`) and of mutually reflected windows (`p_neq`)
//! with the share expected if the two pattern sequences were independent:
//!
//! ```text
//! alpha_tilde = p_eq  - sum_pi p_pi^X * p_pi^Y
//! beta_tilde  = p_neq - sum_pi p_pi^X * p_reflect(pi)^Y
//! ```
//!
//! Every sum runs over patterns in ascending lexicographic rank, so results
//! do not depend on evaluation order.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{ensure_aligned, TimeSeries};
use crate::patterns::{pattern_sequence, OrdinalPattern, PatternConfig, PatternSequence};

/// Occurrence counts of every pattern of one order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternDistribution {
    order: usize,
    // keyed by lexicographic rank; absent ranks have count 0
    counts: BTreeMap<u64, (OrdinalPattern, u64)>,
    total: u64,
}

impl PatternDistribution {
    /// Builds a distribution from explicit `(pattern, count)` pairs.
    pub fn from_counts<I>(order: usize, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (OrdinalPattern, u64)>,
    {
        let mut map = BTreeMap::new();
        let mut total = 0u64;
        for (p, c) in counts {
            if p.order() != order {
                return Err(Error::OrderMismatch {
                    left: order,
                    right: p.order(),
                });
            }
            if c > 0 {
                map.entry(p.lex_rank()).or_insert((p, 0)).1 += c;
                total += c;
            }
        }
        if total == 0 {
            return Err(Error::EmptySequence);
        }
        Ok(Self {
            order,
            counts: map,
            total,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, p: &OrdinalPattern) -> u64 {
        if p.order() != self.order {
            return 0;
        }
        self.count_rank(p.lex_rank())
    }

    fn count_rank(&self, rank: u64) -> u64 {
        self.counts.get(&rank).map_or(0, |e| e.1)
    }

    /// Relative frequency of `p`.
    pub fn freq(&self, p: &OrdinalPattern) -> f64 {
        self.count(p) as f64 / self.total as f64
    }

    fn freq_rank(&self, rank: u64) -> f64 {
        self.count_rank(rank) as f64 / self.total as f64
    }

    /// Patterns with a nonzero count, ascending rank.
    pub fn iter(&self) -> impl Iterator<Item = (OrdinalPattern, u64)> + '_ {
        self.counts.values().map(|(p, c)| (p.clone(), *c))
    }

    /// Number of distinct patterns observed.
    pub fn support(&self) -> usize {
        self.counts.len()
    }

    /// Distribution of the reflected patterns.
    pub fn reflected(&self) -> Self {
        let counts = self
            .counts
            .values()
            .map(|(p, c)| (p.reflected_rank(), (p.reflect(), *c)))
            .collect();
        Self {
            order: self.order,
            counts,
            total: self.total,
        }
    }
}

/// Counts how often each pattern of `seq` occurs.
pub fn distribution(seq: &PatternSequence) -> Result<PatternDistribution> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut counts = BTreeMap::new();
    for p in seq {
        counts
            .entry(p.lex_rank())
            .or_insert_with(|| (p.clone(), 0u64))
            .1 += 1;
    }
    Ok(PatternDistribution {
        order: seq.order(),
        counts,
        total: seq.len() as u64,
    })
}

fn check_same_order(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::OrderMismatch { left, right });
    }
    Ok(())
}

/// Number of positions where the two sequences carry the same pattern, and
/// where the pattern of `x` is the reflection of the pattern of `y`.
pub fn coincident_reflected_counts(x: &PatternSequence, y: &PatternSequence) -> Result<(u64, u64)> {
    check_same_order(x.order(), y.order())?;
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let mut coincident = 0;
    let mut reflected = 0;
    for (px, py) in x.iter().zip(y) {
        if px == py {
            coincident += 1;
        } else if px.indices().iter().eq(py.indices().iter().rev()) {
            reflected += 1;
        }
    }
    Ok((coincident, reflected))
}

/// Independence baselines `(sum p^X_pi p^Y_pi, sum p^X_pi p^Y_m(pi))`.
pub fn baselines(x: &PatternDistribution, y: &PatternDistribution) -> Result<(f64, f64)> {
    check_same_order(x.order, y.order)?;
    let mut base_eq = 0.0;
    let mut base_neq = 0.0;
    // terms outside the support of x are exactly zero
    for (&rank, (p, _)) in &x.counts {
        let fx = x.freq_rank(rank);
        base_eq += fx * y.freq_rank(rank);
        base_neq += fx * y.freq_rank(p.reflected_rank());
    }
    Ok((base_eq, base_neq))
}

/// Excess of `p_eq` and `p_neq` over their independence baselines.
pub fn alpha_beta(
    x: &PatternDistribution,
    y: &PatternDistribution,
    p_eq: f64,
    p_neq: f64,
) -> Result<(f64, f64)> {
    for (name, p) in [("p_eq", p_eq), ("p_neq", p_neq)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "{name} = {p} is not a probability"
            )));
        }
    }
    let (base_eq, base_neq) = baselines(x, y)?;
    Ok((p_eq - base_eq, p_neq - base_neq))
}

/// Estimates of ordinal pattern dependence for one pair of series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DependenceReport {
    pub h: usize,
    pub n_windows: u64,
    pub n_coincident: u64,
    pub n_reflected: u64,
    pub p_eq: f64,
    pub p_neq: f64,
    pub base_eq: f64,
    pub base_neq: f64,
    pub alpha_tilde: f64,
    pub beta_tilde: f64,
    /// Binomial z-score of `n_coincident` against `base_eq`. A heuristic that
    /// ignores serial dependence of overlapping windows; `None` when the
    /// baseline is 0 or 1.
    pub z_eq: Option<f64>,
    pub z_neq: Option<f64>,
}

fn z_score(count: u64, n: u64, base: f64) -> Option<f64> {
    let n = n as f64;
    let var = n * base * (1.0 - base);
    (var > 0.0).then(|| (count as f64 - n * base) / var.sqrt())
}

/// Builds a report from two already extracted pattern sequences.
pub fn report_from_sequences(x: &PatternSequence, y: &PatternSequence) -> Result<DependenceReport> {
    let (n_coincident, n_reflected) = coincident_reflected_counts(x, y)?;
    let dist_x = distribution(x)?;
    let dist_y = distribution(y)?;
    let n = x.len() as u64;
    let p_eq = n_coincident as f64 / n as f64;
    let p_neq = n_reflected as f64 / n as f64;
    let (base_eq, base_neq) = baselines(&dist_x, &dist_y)?;
    Ok(DependenceReport {
        h: x.order(),
        n_windows: n,
        n_coincident,
        n_reflected,
        p_eq,
        p_neq,
        base_eq,
        base_neq,
        alpha_tilde: p_eq - base_eq,
        beta_tilde: p_neq - base_neq,
        z_eq: z_score(n_coincident, n, base_eq),
        z_neq: z_score(n_reflected, n, base_neq),
    })
}

/// Dependence report for two equally long value slices.
pub fn analyze_values(x: &[f64], y: &[f64], cfg: &PatternConfig) -> Result<DependenceReport> {
    if x.len() != y.len() {
        return Err(Error::NotAligned(format!(
            "{} points vs {} points",
            x.len(),
            y.len()
        )));
    }
    let sx = pattern_sequence(x, cfg)?;
    let sy = pattern_sequence(y, cfg)?;
    report_from_sequences(&sx, &sy)
}

/// Dependence report for two aligned series.
pub fn analyze_pair(
    x: &TimeSeries,
    y: &TimeSeries,
    cfg: &PatternConfig,
) -> Result<DependenceReport> {
    ensure_aligned(x, y)?;
    analyze_values(x.values(), y.values(), cfg)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelayReport {
    pub delay: i64,
    pub report: DependenceReport,
}

/// Portions of `x` and `y` compared at a given delay.
///
/// A positive delay pairs `x[i]` with `y[i + delay]`; a negative delay pairs
/// `x[i - delay]` with `y[i]`.
pub fn shifted_overlap<'a>(x: &'a [f64], y: &'a [f64], delay: i64) -> (&'a [f64], &'a [f64]) {
    let n = x.len().min(y.len());
    let d = (delay.unsigned_abs() as usize).min(n);
    if delay >= 0 {
        (&x[..n - d], &y[d..n])
    } else {
        (&x[d..n], &y[..n - d])
    }
}

/// Reports for every delay in `delays`, each on the common region of the shifted pair.
pub fn delay_scan(
    x: &TimeSeries,
    y: &TimeSeries,
    cfg: &PatternConfig,
    delays: RangeInclusive<i64>,
) -> Result<Vec<DelayReport>> {
    ensure_aligned(x, y)?;
    cfg.validate()?;
    delays
        .map(|delay| {
            let (xs, ys) = shifted_overlap(x.values(), y.values(), delay);
            if xs.len() < cfg.order + 1 {
                return Err(Error::DelayTooLarge {
                    delay,
                    overlap: xs.len(),
                    order: cfg.order,
                });
            }
            Ok(DelayReport {
                delay,
                report: analyze_values(xs, ys, cfg)?,
            })
        })
        .collect()
}

/// Counts of one watched pattern inside a rolling window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WatchCount {
    pub pattern: OrdinalPattern,
    pub x: u64,
    pub y: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RollingWindow {
    /// Index of the first point in the window.
    pub start: usize,
    pub start_key: String,
    pub end_key: String,
    pub report: DependenceReport,
    pub watch: Vec<WatchCount>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RollingReport {
    pub window_len: usize,
    pub step: usize,
    pub windows: Vec<RollingWindow>,
}

/// Patterns tracked by default in rolling analyses of order 3.
pub fn default_watch_list() -> Vec<OrdinalPattern> {
    ["(0,1,2,3)", "(0,3,2,1)", "(1,0,2,3)"]
        .iter()
        .map(|s| s.parse().expect("valid literal"))
        .collect()
}

/// One report per full window of `window_len` points, windows starting every `step` points.
///
/// A trailing partial window is dropped.
pub fn rolling_analysis(
    x: &TimeSeries,
    y: &TimeSeries,
    cfg: &PatternConfig,
    window_len: usize,
    step: usize,
    watch: &[OrdinalPattern],
) -> Result<RollingReport> {
    ensure_aligned(x, y)?;
    cfg.validate()?;
    if step == 0 {
        return Err(Error::InvalidParameter("step must be at least 1".into()));
    }
    if window_len < cfg.order + 1 {
        return Err(Error::InvalidParameter(format!(
            "window of {window_len} points is shorter than one pattern of order {}",
            cfg.order
        )));
    }
    if let Some(p) = watch.iter().find(|p| p.order() != cfg.order) {
        return Err(Error::OrderMismatch {
            left: cfg.order,
            right: p.order(),
        });
    }
    if x.len() < window_len {
        return Err(Error::SeriesTooShort {
            len: x.len(),
            order: window_len - 1,
        });
    }
    let starts = (0..=x.len() - window_len).step_by(step);
    let windows = starts
        .map(|start| {
            let end = start + window_len;
            let sx = pattern_sequence(&x.values()[start..end], cfg)?;
            let sy = pattern_sequence(&y.values()[start..end], cfg)?;
            let report = report_from_sequences(&sx, &sy)?;
            let dx = distribution(&sx)?;
            let dy = distribution(&sy)?;
            let watch = watch
                .iter()
                .map(|p| WatchCount {
                    pattern: p.clone(),
                    x: dx.count(p),
                    y: dy.count(p),
                })
                .collect();
            Ok(RollingWindow {
                start,
                start_key: x.keys()[start].clone(),
                end_key: x.keys()[end - 1].clone(),
                report,
                watch,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RollingReport {
        window_len,
        step,
        windows,
    })
}

/// Pearson correlation of the first differences of two aligned series.
pub fn increment_correlation(x: &TimeSeries, y: &TimeSeries) -> Result<f64> {
    ensure_aligned(x, y)?;
    if x.len() < 3 {
        return Err(Error::SeriesTooShort {
            len: x.len(),
            order: 2,
        });
    }
    let dx: Vec<f64> = x.values().windows(2).map(|w| w[1] - w[0]).collect();
    let dy: Vec<f64> = y.values().windows(2).map(|w| w[1] - w[0]).collect();
    let n = dx.len() as f64;
    let mx = dx.iter().sum::<f64>() / n;
    let my = dy.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (a, b) in dx.iter().zip(&dy) {
        let (a, b) = (a - mx, b - my);
        cov += a * b;
        vx += a * a;
        vy += b * b;
    }
    if vx == 0.0 {
        return Err(Error::ZeroVariance(x.name().to_string()));
    }
    if vy == 0.0 {
        return Err(Error::ZeroVariance(y.name().to_string()));
    }
    Ok((cov / (vx.sqrt() * vy.sqrt())).clamp(-1.0, 1.0))
}
