//! Sweep grid construction and the `value|lo:hi[:count]` flag syntax.

use thiserror::Error;

/// Grid parsing and construction failures.
#[derive(Debug, Error)]
pub enum GridError {
    #[error("malformed grid spec {spec:?}: expected {expected}")]
    Malformed {
        spec: String,
        expected: &'static str,
    },
    #[error("grid value {value} is not a finite nonnegative number")]
    BadValue { value: f64 },
    #[error("log-spaced grid needs lo > 0, got lo = {lo}")]
    NonPositiveLow { lo: f64 },
    #[error("grid range is reversed: lo = {lo} > hi = {hi}")]
    ReversedRange { lo: f64, hi: f64 },
    #[error("grid over [{lo}, {hi}] needs at least 2 points, got {count}")]
    CountTooSmall { lo: f64, hi: f64, count: usize },
    #[error("grid size {count} exceeds the sanity cap of {cap}")]
    CountTooLarge { count: usize, cap: usize },
}

const COUNT_CAP: usize = 10_000;

/// `count` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>, GridError> {
    if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 {
        return Err(GridError::BadValue {
            value: if lo.is_finite() { hi } else { lo },
        });
    }
    if lo > hi {
        return Err(GridError::ReversedRange { lo, hi });
    }
    if count > COUNT_CAP {
        return Err(GridError::CountTooLarge {
            count,
            cap: COUNT_CAP,
        });
    }
    if lo == hi {
        return Ok(vec![lo]);
    }
    if count < 2 {
        return Err(GridError::CountTooSmall { lo, hi, count });
    }
    if lo == 0.0 {
        return Err(GridError::NonPositiveLow { lo });
    }
    let ratio = hi / lo;
    let steps = (count - 1) as f64;
    let mut grid: Vec<f64> = (0..count)
        .map(|i| lo * ratio.powf(i as f64 / steps))
        .collect();
    grid[0] = lo;
    grid[count - 1] = hi;
    Ok(grid)
}

/// The default noise grid: two points per decade from 1e-9 to 1e-1.
pub fn default_noise_grid() -> Vec<f64> {
    log_grid(1e-9, 1e-1, 17).expect("default grid parameters are valid")
}

/// Parses a noise-level spec, either a single value or `lo:hi:count`.
pub fn parse_noise_levels(spec: &str) -> Result<Vec<f64>, GridError> {
    let parse_value = |s: &str| -> Result<f64, GridError> {
        let v: f64 = s.trim().parse().map_err(|_| GridError::Malformed {
            spec: spec.to_string(),
            expected: "a number or lo:hi:count",
        })?;
        if !v.is_finite() || v < 0.0 {
            return Err(GridError::BadValue { value: v });
        }
        Ok(v)
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(vec![parse_value(single)?]),
        [lo, hi, count] => {
            let count: usize = count.trim().parse().map_err(|_| GridError::Malformed {
                spec: spec.to_string(),
                expected: "an integer point count after the second colon",
            })?;
            log_grid(parse_value(lo)?, parse_value(hi)?, count)
        }
        _ => Err(GridError::Malformed {
            spec: spec.to_string(),
            expected: "a number or lo:hi:count",
        }),
    }
}

/// Parses an integer grid spec, either a single value or an inclusive
/// `lo:hi` range.
pub fn parse_count_range(spec: &str) -> Result<Vec<usize>, GridError> {
    let parse_value = |s: &str| -> Result<usize, GridError> {
        s.trim().parse().map_err(|_| GridError::Malformed {
            spec: spec.to_string(),
            expected: "an integer or lo:hi",
        })
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(vec![parse_value(single)?]),
        [lo, hi] => {
            let (lo, hi) = (parse_value(lo)?, parse_value(hi)?);
            if lo > hi {
                return Err(GridError::ReversedRange {
                    lo: lo as f64,
                    hi: hi as f64,
                });
            }
            if hi - lo + 1 > COUNT_CAP {
                return Err(GridError::CountTooLarge {
                    count: hi - lo + 1,
                    cap: COUNT_CAP,
                });
            }
            Ok((lo..=hi).collect())
        }
        _ => Err(GridError::Malformed {
            spec: spec.to_string(),
            expected: "an integer or lo:hi",
        }),
    }
}

/// Clamps an ascending grid to `p_max`, collapsing the clamped tail to a
/// single point. Returns the clamped grid and whether anything changed.
pub fn clamp_grid(grid: &[f64], p_max: f64) -> (Vec<f64>, bool) {
    let mut out: Vec<f64> = grid.iter().map(|&p| p.min(p_max)).collect();
    let clamped = out
        .iter()
        .zip(grid)
        .any(|(clamped, original)| clamped != original);
    out.dedup();
    (out, clamped)
}
