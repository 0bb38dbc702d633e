//! Instance aggregation and noise-resiliency threshold extraction.
//!
//! A sweep series (one model, problem size, and layer count) traces the
//! mean final cost against the noise level. The threshold `p*` is the
//! largest swept level whose mean stays within `epsilon` of the baseline,
//! where the baseline is the mean at the smallest swept level. The answer
//! is grid-resolution by design; no interpolation is attempted.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::ResultRecord;

/// Threshold extraction failures.
#[derive(Debug, Error)]
pub enum ThresholdError {
    #[error("series {model} n={n} L={layers} has {points} noise levels, need at least 3")]
    TooFewPoints {
        model: String,
        n: usize,
        layers: usize,
        points: usize,
    },
}

/// Identifies one cost-vs-noise series.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SeriesKey {
    pub model: String,
    pub n: usize,
    pub layers: usize,
}

impl fmt::Display for SeriesKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "model={} n={} L={}", self.model, self.n, self.layers)
    }
}

/// Instance-averaged statistics at one noise level.
#[derive(Clone, Copy, Debug)]
pub struct PointStat {
    pub p: f64,
    pub mean: f64,
    /// Standard error of the mean; zero for a single instance.
    pub se: f64,
    pub instances: usize,
}

/// Groups records into series and averages instances per noise level.
///
/// Points within each series come back sorted by ascending noise level.
pub fn aggregate(records: &[ResultRecord]) -> BTreeMap<SeriesKey, Vec<PointStat>> {
    let mut sums: BTreeMap<SeriesKey, BTreeMap<u64, (f64, f64, usize)>> = BTreeMap::new();
    for rec in records {
        let key = SeriesKey {
            model: rec.model.clone(),
            n: rec.n,
            layers: rec.layers,
        };
        let cell = sums
            .entry(key)
            .or_default()
            .entry(rec.p.to_bits())
            .or_insert((0.0, 0.0, 0));
        cell.0 += rec.final_cost;
        cell.1 += rec.final_cost * rec.final_cost;
        cell.2 += 1;
    }
    sums.into_iter()
        .map(|(key, by_p)| {
            let points = by_p
                .into_iter()
                .map(|(bits, (sum, sumsq, count))| {
                    let n = count as f64;
                    let mean = sum / n;
                    let se = if count > 1 {
                        let var = ((sumsq - sum * sum / n) / (n - 1.0)).max(0.0);
                        (var / n).sqrt()
                    } else {
                        0.0
                    };
                    PointStat {
                        p: f64::from_bits(bits),
                        mean,
                        se,
                        instances: count,
                    }
                })
                .collect();
            (key, points)
        })
        .collect()
}

/// Threshold verdict for one series.
#[derive(Clone, Debug)]
pub struct ThresholdReport {
    pub key: SeriesKey,
    pub epsilon: f64,
    /// Mean final cost at the smallest swept noise level.
    pub baseline: f64,
    /// Mean final cost at the largest swept noise level.
    pub saturation: f64,
    /// Largest swept level whose mean stays within `epsilon` of baseline.
    pub p_star: f64,
    /// `p_star` sits at the grid floor; the true threshold may be lower.
    pub below_grid: bool,
    /// `p_star` sits at the grid ceiling; the true threshold may be higher.
    pub above_grid: bool,
    /// The mean cost decreases somewhere by more than 3 combined standard
    /// errors, so the grid answer comes from a non-monotone curve.
    pub ill_conditioned: bool,
}

impl fmt::Display for ThresholdReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut flags: Vec<&str> = Vec::new();
        if self.below_grid {
            flags.push("below-grid");
        }
        if self.above_grid {
            flags.push("above-grid");
        }
        if self.ill_conditioned {
            flags.push("ill-conditioned");
        }
        write!(
            f,
            "{} epsilon={} baseline={:.5} saturation={:.5} p_star={} flags={}",
            self.key,
            self.epsilon,
            self.baseline,
            self.saturation,
            self.p_star,
            if flags.is_empty() {
                "-".to_string()
            } else {
                flags.join(",")
            }
        )
    }
}

/// Extracts the threshold from one series of points sorted by `p`.
pub fn extract_threshold(
    key: &SeriesKey,
    points: &[PointStat],
    epsilon: f64,
) -> Result<ThresholdReport, ThresholdError> {
    if points.len() < 3 {
        return Err(ThresholdError::TooFewPoints {
            model: key.model.clone(),
            n: key.n,
            layers: key.layers,
            points: points.len(),
        });
    }
    debug_assert!(points.windows(2).all(|w| w[0].p < w[1].p));
    let baseline = points[0].mean;
    let cutoff = baseline + epsilon;
    let p_star = points
        .iter()
        .rev()
        .find(|pt| pt.mean <= cutoff)
        .map(|pt| pt.p)
        .unwrap_or(points[0].p);

    let mut ill_conditioned = false;
    for j in 0..points.len() {
        for k in j + 1..points.len() {
            let slack = 3.0 * (points[j].se.hypot(points[k].se)).max(1e-12);
            if points[j].mean - points[k].mean > slack {
                ill_conditioned = true;
            }
        }
    }

    Ok(ThresholdReport {
        key: key.clone(),
        epsilon,
        baseline,
        saturation: points[points.len() - 1].mean,
        p_star,
        below_grid: p_star == points[0].p,
        above_grid: p_star == points[points.len() - 1].p,
        ill_conditioned,
    })
}

/// How two thresholds compare on their shared grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdRelation {
    /// Within one step of the union grid of both series.
    Overlap,
    Greater,
    Less,
}

/// Compares two thresholds at grid resolution.
///
/// Thresholds within one step of the union of both swept grids count as
/// overlapping: the sweeps cannot resolve a finer difference.
pub fn threshold_relation(
    a: &ThresholdReport,
    points_a: &[PointStat],
    b: &ThresholdReport,
    points_b: &[PointStat],
) -> ThresholdRelation {
    let mut union: Vec<f64> = points_a
        .iter()
        .chain(points_b.iter())
        .map(|pt| pt.p)
        .collect();
    union.sort_by(f64::total_cmp);
    union.dedup_by(|x, y| x.to_bits() == y.to_bits());
    let index = |p: f64| -> usize {
        union
            .iter()
            .position(|&u| u.to_bits() == p.to_bits())
            .expect("threshold lies on the union grid")
    };
    let (ia, ib) = (index(a.p_star), index(b.p_star));
    if ia.abs_diff(ib) <= 1 {
        ThresholdRelation::Overlap
    } else if ia > ib {
        ThresholdRelation::Greater
    } else {
        ThresholdRelation::Less
    }
}

/// Renders pairwise comparisons for every series pair sharing (n, L).
pub fn comparison_lines(
    reports: &[ThresholdReport],
    series: &BTreeMap<SeriesKey, Vec<PointStat>>,
) -> Vec<String> {
    let mut lines = Vec::new();
    for (i, a) in reports.iter().enumerate() {
        for b in reports.iter().skip(i + 1) {
            if a.key.n != b.key.n || a.key.layers != b.key.layers || a.key.model == b.key.model {
                continue;
            }
            let (pa, pb) = match (series.get(&a.key), series.get(&b.key)) {
                (Some(pa), Some(pb)) => (pa, pb),
                _ => continue,
            };
            let relation = threshold_relation(a, pa, b, pb);
            let verb = match relation {
                ThresholdRelation::Overlap => "overlaps",
                ThresholdRelation::Greater => "exceeds",
                ThresholdRelation::Less => "falls below",
            };
            lines.push(format!(
                "n={} L={}: {} (p_star={}) {} {} (p_star={})",
                a.key.n, a.key.layers, a.key.model, a.p_star, verb, b.key.model, b.p_star
            ));
        }
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(model: &str, p: f64, cost: f64, instance: usize) -> ResultRecord {
        ResultRecord {
            model: model.to_string(),
            p,
            n: 5,
            layers: 10,
            instance,
            final_cost: cost,
            iterations: 100,
            shots: 1000,
            seed: 7,
            depth: 42,
            gates: Default::default(),
        }
    }

    fn key(model: &str) -> SeriesKey {
        SeriesKey {
            model: model.to_string(),
            n: 5,
            layers: 10,
        }
    }

    fn points(costs: &[(f64, f64)]) -> Vec<PointStat> {
        costs
            .iter()
            .map(|&(p, mean)| PointStat {
                p,
                mean,
                se: 0.001,
                instances: 20,
            })
            .collect()
    }

    #[test]
    fn two_instances_average_with_half_gap_standard_error() {
        let records = vec![
            record("cat", 1e-3, 0.30, 0),
            record("cat", 1e-3, 0.40, 1),
        ];
        let series = aggregate(&records);
        let pts = &series[&key("cat")];
        assert_eq!(pts.len(), 1);
        assert!((pts[0].mean - 0.35).abs() < 1e-12);
        assert!((pts[0].se - 0.05).abs() < 1e-12);
        assert_eq!(pts[0].instances, 2);
    }

    #[test]
    fn aggregation_sorts_points_by_noise_level() {
        let records = vec![
            record("cat", 1e-1, 0.5, 0),
            record("cat", 1e-9, 0.3, 0),
            record("cat", 1e-5, 0.3, 0),
        ];
        let pts = &aggregate(&records)[&key("cat")];
        let ps: Vec<f64> = pts.iter().map(|pt| pt.p).collect();
        assert_eq!(ps, vec![1e-9, 1e-5, 1e-1]);
    }

    #[test]
    fn step_curve_thresholds_at_the_last_quiet_point() {
        let pts = points(&[
            (1e-5, 0.30),
            (1e-4, 0.305),
            (1e-3, 0.31),
            (1e-2, 0.45),
            (1e-1, 0.50),
        ]);
        let report = extract_threshold(&key("cat"), &pts, 0.02).unwrap();
        assert_eq!(report.p_star, 1e-3);
        assert!(!report.below_grid);
        assert!(!report.above_grid);
        assert!(!report.ill_conditioned);
        assert!((report.baseline - 0.30).abs() < 1e-12);
        assert!((report.saturation - 0.50).abs() < 1e-12);
    }

    #[test]
    fn flat_curve_thresholds_at_the_grid_ceiling() {
        let pts = points(&[(1e-5, 0.4), (1e-4, 0.4), (1e-3, 0.4)]);
        let report = extract_threshold(&key("cat"), &pts, 0.02).unwrap();
        assert_eq!(report.p_star, 1e-3);
        assert!(report.above_grid);
        assert!(!report.below_grid);
    }

    #[test]
    fn immediate_rise_flags_the_grid_floor() {
        let pts = points(&[(1e-5, 0.3), (1e-4, 0.45), (1e-3, 0.5)]);
        let report = extract_threshold(&key("cat"), &pts, 0.02).unwrap();
        assert_eq!(report.p_star, 1e-5);
        assert!(report.below_grid);
    }

    #[test]
    fn significant_dips_flag_ill_conditioning() {
        let pts = points(&[(1e-5, 0.3), (1e-4, 0.5), (1e-3, 0.35)]);
        let report = extract_threshold(&key("cat"), &pts, 0.02).unwrap();
        assert!(report.ill_conditioned);

        let mut noisy = points(&[(1e-5, 0.3), (1e-4, 0.302), (1e-3, 0.301)]);
        for pt in noisy.iter_mut() {
            pt.se = 0.01;
        }
        let report = extract_threshold(&key("cat"), &noisy, 0.02).unwrap();
        assert!(!report.ill_conditioned);
    }

    #[test]
    fn too_few_points_is_an_error() {
        let pts = points(&[(1e-5, 0.3), (1e-4, 0.4)]);
        assert!(extract_threshold(&key("cat"), &pts, 0.02).is_err());
    }

    #[test]
    fn adjacent_grid_thresholds_overlap() {
        let pts_a = points(&[(1e-5, 0.3), (1e-4, 0.3), (1e-3, 0.3), (1e-2, 0.5)]);
        let pts_b = points(&[(1e-5, 0.3), (1e-4, 0.3), (1e-3, 0.5), (1e-2, 0.5)]);
        let a = extract_threshold(&key("alpha"), &pts_a, 0.02).unwrap();
        let b = extract_threshold(&key("beta"), &pts_b, 0.02).unwrap();
        assert_eq!(a.p_star, 1e-3);
        assert_eq!(b.p_star, 1e-4);
        assert_eq!(
            threshold_relation(&a, &pts_a, &b, &pts_b),
            ThresholdRelation::Overlap
        );

        let pts_c = points(&[(1e-5, 0.3), (1e-4, 0.5), (1e-3, 0.5), (1e-2, 0.5)]);
        let c = extract_threshold(&key("gamma"), &pts_c, 0.02).unwrap();
        assert_eq!(
            threshold_relation(&a, &pts_a, &c, &pts_c),
            ThresholdRelation::Greater
        );
        assert_eq!(
            threshold_relation(&c, &pts_c, &a, &pts_a),
            ThresholdRelation::Less
        );
    }
}
