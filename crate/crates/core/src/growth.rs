//! Classification of improper integrals from truncated partial integrals.
//!
//! A trace is a sequence of adjacent cutoff segments in the variable
//! `L = ln(cutoff)` (or `ln(1/cutoff)` for integrals towards zero), each
//! carrying the integral increment over that segment. The classifier looks
//! at the last few decades of the trace:
//!
//! * the local decay exponent `s` of `dI/dL ~ L^{-s}` separates harmonic
//!   (log-log) growth, `s <= 1`, from summable tails, `s > 1`;
//! * a steady growth of at least `divergent_growth_per_decade` per decade
//!   is divergent outright;
//! * a total tail increase below `convergent_tail_increase` is convergent.
//!
//! Anything else is reported as inconclusive.

use std::f64::consts::LN_10;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Divergent,
    Convergent,
    Inconclusive,
}

impl Verdict {
    pub fn is_decisive(self) -> bool {
        self != Verdict::Inconclusive
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Divergent => "divergent",
            Verdict::Convergent => "convergent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One segment `[l_start, l_end]` of a partial-integral trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub l_start: f64,
    pub l_end: f64,
    pub increment: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthClassifier {
    pub tail_decades: f64,
    pub divergent_growth_per_decade: f64,
    pub convergent_tail_increase: f64,
    pub divergent_exponent: f64,
    pub convergent_exponent: f64,
}

impl Default for GrowthClassifier {
    fn default() -> Self {
        Self {
            tail_decades: 3.0,
            divergent_growth_per_decade: 0.5 * LN_10,
            convergent_tail_increase: 1e-3,
            divergent_exponent: 1.2,
            convergent_exponent: 1.5,
        }
    }
}

/// Detailed outcome, kept for reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    /// Fitted tail exponent, when the fit was possible.
    pub exponent: Option<f64>,
    pub tail_increase: f64,
    pub min_decade_growth: f64,
}

impl GrowthClassifier {
    pub fn classify(&self, segments: &[Segment]) -> Verdict {
        self.classify_detailed(segments).verdict
    }

    pub fn classify_detailed(&self, segments: &[Segment]) -> Classification {
        let mut out = Classification {
            verdict: Verdict::Inconclusive,
            exponent: None,
            tail_increase: f64::NAN,
            min_decade_growth: f64::NAN,
        };
        if segments
            .iter()
            .any(|s| s.increment.is_infinite() && s.increment > 0.0)
        {
            out.verdict = Verdict::Divergent;
            return out;
        }
        if segments.iter().any(|s| !s.increment.is_finite()) {
            return out;
        }
        let Some(last) = segments.last() else {
            return out;
        };
        let l_end = last.l_end;
        let l_tail = l_end - self.tail_decades * LN_10;
        if segments[0].l_start > l_tail + 1e-9 {
            return out;
        }
        let tail: Vec<&Segment> = segments
            .iter()
            .filter(|s| s.l_start >= l_tail - 1e-9)
            .collect();
        if tail.len() < 3 {
            return out;
        }
        out.tail_increase = tail.iter().map(|s| s.increment).sum();

        // Per-decade growth over the tail, by piecewise-linear accumulation.
        let decades = self.tail_decades.floor().max(1.0) as usize;
        let mut min_growth = f64::INFINITY;
        for k in 0..decades {
            let hi = l_end - k as f64 * LN_10;
            let lo = hi - LN_10;
            min_growth = min_growth.min(increase_between(segments, lo, hi));
        }
        out.min_decade_growth = min_growth;

        // A negligible tail is a Cauchy tail whatever its fitted slope; the
        // slope of rounding-level increments is noise.
        if out.tail_increase.abs() < self.convergent_tail_increase {
            out.verdict = Verdict::Convergent;
            return out;
        }
        out.exponent = tail_exponent(&tail);
        if let Some(s) = out.exponent {
            if s <= self.divergent_exponent {
                out.verdict = Verdict::Divergent;
                return out;
            }
            if s >= self.convergent_exponent {
                out.verdict = Verdict::Convergent;
                return out;
            }
        }
        if min_growth >= self.divergent_growth_per_decade {
            out.verdict = Verdict::Divergent;
        }
        out
    }
}

fn increase_between(segments: &[Segment], lo: f64, hi: f64) -> f64 {
    segments
        .iter()
        .map(|s| {
            let a = s.l_start.max(lo);
            let b = s.l_end.min(hi);
            if b > a && s.l_end > s.l_start {
                s.increment * (b - a) / (s.l_end - s.l_start)
            } else {
                0.0
            }
        })
        .sum()
}

/// Least-squares slope of `ln(dI/dL)` against `ln L` over the tail, negated.
fn tail_exponent(tail: &[&Segment]) -> Option<f64> {
    let mut xs = Vec::with_capacity(tail.len());
    let mut ys = Vec::with_capacity(tail.len());
    for s in tail {
        let width = s.l_end - s.l_start;
        let mid = 0.5 * (s.l_start + s.l_end);
        if !(width > 0.0 && mid > 0.0 && s.increment > 0.0) {
            return None;
        }
        let y = (s.increment / width).ln();
        if !y.is_finite() {
            return None;
        }
        xs.push(mid.ln());
        ys.push(y);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(-sxy / sxx)
}

/// Builds a trace by integrating `density(L)` (the integrand in the `L`
/// variable) over a geometric cutoff schedule of `decades` decades with
/// `per_decade` segments each, starting at `l0`.
pub fn trace_from_density<F>(density: F, l0: f64, decades: f64, per_decade: usize) -> Vec<Segment>
where
    F: Fn(f64) -> f64,
{
    let n = (decades * per_decade as f64).round().max(1.0) as usize;
    let step = LN_10 / per_decade as f64;
    let cfg = crate::quad::QuadConfig {
        abs_tol: 1e-300,
        rel_tol: 1e-10,
        max_depth: 30,
    };
    (0..n)
        .map(|k| {
            let a = l0 + k as f64 * step;
            let b = a + step;
            let increment = crate::quad::integrate(&density, a, b, cfg).value;
            Segment {
                l_start: a,
                l_end: b,
                increment,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classify(density: impl Fn(f64) -> f64, l0: f64) -> Verdict {
        GrowthClassifier::default().classify(&trace_from_density(density, l0, 8.0, 4))
    }

    #[test]
    fn constant_density_diverges() {
        for k in [1.0, 10.0, 100.0] {
            assert_eq!(classify(|_| 1.0 / k, 0.5), Verdict::Divergent, "k={k}");
        }
    }

    #[test]
    fn harmonic_density_diverges() {
        assert_eq!(classify(|l| 1.0 / l, 0.7), Verdict::Divergent);
    }

    #[test]
    fn inverse_square_density_converges() {
        assert_eq!(classify(|l| 1.0 / (l * l), 0.7), Verdict::Convergent);
    }

    #[test]
    fn exponential_decay_converges() {
        assert_eq!(classify(|l| (-0.5 * l).exp(), 0.0), Verdict::Convergent);
        assert_eq!(classify(|l| (-(l.exp())).exp(), 0.0), Verdict::Convergent);
    }

    #[test]
    fn infinite_increment_is_divergent() {
        let segs = vec![Segment {
            l_start: 0.0,
            l_end: 1.0,
            increment: f64::INFINITY,
        }];
        assert_eq!(
            GrowthClassifier::default().classify(&segs),
            Verdict::Divergent
        );
    }

    #[test]
    fn short_trace_is_inconclusive() {
        let segs = trace_from_density(|_| 1.0, 1.0, 1.0, 4);
        assert_eq!(
            GrowthClassifier::default().classify(&segs),
            Verdict::Inconclusive
        );
    }

    #[test]
    fn intermediate_exponent_is_inconclusive() {
        // s = 1.35 sits between the two thresholds with a non-negligible tail.
        assert_eq!(
            classify(|l| 10.0 * l.powf(-1.35), 0.7),
            Verdict::Inconclusive
        );
    }

    #[test]
    fn rounding_level_tail_is_convergent_even_when_increasing() {
        let segs: Vec<Segment> = (0..32)
            .map(|k| Segment {
                l_start: k as f64 * 0.6,
                l_end: (k + 1) as f64 * 0.6,
                increment: if k < 4 { 1.0 } else { 1e-300 * (k as f64).powi(8) },
            })
            .collect();
        assert_eq!(GrowthClassifier::default().classify(&segs), Verdict::Convergent);
    }
}
