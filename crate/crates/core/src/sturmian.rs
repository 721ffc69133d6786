//! Cutting sequences of straight lines.
//!
//! A line `y = βx + c` with `β ≥ 0` crosses the vertical lines `x = m` and the
//! horizontal lines `y = k`. Listing the crossings with `0 < x ≤ extent` in
//! order of `x` and writing `0` for a vertical and `1` for a horizontal one
//! gives the cutting sequence. Inside the unit `(m−1, m]` the horizontal
//! crossings come first, so unit `m` contributes
//! `⌊βm + c⌋ − ⌊β(m−1) + c⌋` ones followed by one zero. This is the same
//! shape as the stretched code, which is why a line sampled on a uniform grid
//! with step `h` and shifted by `c·h` reproduces the sequence exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::codec::{quantitative_code, stretch_stats, stretched_code, Code, CodecError, PlFunction};
use crate::grid::{DiscretizationSystem, GridError};
use crate::rational::{format_rational, int, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SturmianError {
    #[error("slope must be non-negative, got {0}")]
    NegativeSlope(Rational),
    #[error("line passes through the lattice point ({x}, {y})")]
    LatticeHit { x: i64, y: BigInt },
    #[error("only {available} crossings within the extent, {requested} requested")]
    ExtentTooShort { available: usize, requested: usize },
    #[error("level {n} is not uniform")]
    NotUniform { n: usize },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineSpec {
    pub slope: Rational,
    pub intercept: Rational,
    /// Number of unit cells crossed horizontally.
    pub extent: u64,
}

impl LineSpec {
    pub fn new(slope: Rational, intercept: Rational, extent: u64) -> Result<Self, SturmianError> {
        if slope.is_negative() {
            return Err(SturmianError::NegativeSlope(slope));
        }
        Ok(Self {
            slope,
            intercept,
            extent,
        })
    }

    /// `⌊βm + c⌋` for every `m` in `0..=extent`, rejecting lattice hits at
    /// `m ≥ 1`.
    fn floors(&self, units: u64) -> Result<Vec<BigInt>, SturmianError> {
        // βm + c = (a·m + b) / d over a common denominator
        let d = self.slope.denom().lcm(self.intercept.denom());
        let a = self.slope.numer() * (&d / self.slope.denom());
        let b = self.intercept.numer() * (&d / self.intercept.denom());
        let mut out = Vec::with_capacity(units as usize + 1);
        let mut num = b;
        for m in 0..=units {
            let (q, r) = num.div_mod_floor(&d);
            if m > 0 && r.is_zero() && !a.is_zero() {
                return Err(SturmianError::LatticeHit { x: m as i64, y: q });
            }
            out.push(q);
            num += &a;
        }
        Ok(out)
    }
}

/// First `len` symbols of the cutting sequence within the extent.
pub fn cutting_sequence(spec: &LineSpec, len: usize) -> Result<Vec<i64>, SturmianError> {
    let floors = spec.floors(spec.extent)?;
    let mut out = Vec::with_capacity(len);
    for pair in floors.windows(2) {
        if out.len() >= len {
            break;
        }
        let ones: usize = (&pair[1] - &pair[0]).try_into().expect("crossings per unit fit in usize");
        out.extend(std::iter::repeat(1).take(ones));
        out.push(0);
    }
    if out.len() < len {
        return Err(SturmianError::ExtentTooShort {
            available: out.len(),
            requested: len,
        });
    }
    out.truncate(len);
    Ok(out)
}

fn uniform_step(system: &DiscretizationSystem, n: usize) -> Result<Rational, SturmianError> {
    let res = system.resolutions(n)?;
    if !res.is_uniform() {
        return Err(SturmianError::NotUniform { n });
    }
    Ok(res.min_gap)
}

/// The line rescaled onto `[0, 1]` at level `n`: one grid step per unit,
/// `f(x) = βx + c·h_n`.
pub fn line_function(spec: &LineSpec, h: &Rational) -> PlFunction {
    PlFunction::linear(spec.slope.clone(), &spec.intercept * h)
}

/// Stretched code of the rescaled line. For `β ≥ 0` only `0` and `1` occur.
pub fn line_stretched_code(spec: &LineSpec, system: &DiscretizationSystem, n: usize) -> Result<Code, SturmianError> {
    let h = uniform_step(system, n)?;
    let f = line_function(spec, &h);
    Ok(stretched_code(&quantitative_code(&f, system, n)?)?)
}

/// Symbols left over after stripping the longest common prefix and suffix;
/// the larger of the two remainders.
pub fn boundary_discrepancy(a: &[i64], b: &[i64]) -> usize {
    let prefix = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    let (ra, rb) = (&a[prefix..], &b[prefix..]);
    let suffix = ra.iter().rev().zip(rb.iter().rev()).take_while(|(x, y)| x == y).count();
    (ra.len() - suffix).max(rb.len() - suffix)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub count: u64,
    pub ups: u64,
    pub downs: u64,
    pub variation: u64,
    /// `fr(1, s)`.
    pub up_frequency: Option<Rational>,
    /// `u_n / V_n`.
    pub up_ratio: Option<Rational>,
    /// Horizontal crossings over all crossings, `u_n / (V_n + N_n − 1)`.
    pub crossing_ratio: Option<Rational>,
}

/// Per-level statistics of the rescaled line's stretched code.
pub fn frequency_convergence(
    spec: &LineSpec,
    system: &DiscretizationSystem,
    levels: &[usize],
) -> Result<Vec<ConvergenceRow>, SturmianError> {
    levels
        .iter()
        .map(|&n| {
            let h = uniform_step(system, n)?;
            let f = line_function(spec, &h);
            let q = quantitative_code(&f, system, n)?;
            let st = stretch_stats(&q, &f, &h)?;
            let crossings = st.variation + st.zeros;
            Ok(ConvergenceRow {
                n,
                count: st.count,
                ups: st.ups,
                downs: st.downs,
                variation: st.variation,
                up_frequency: st.up_frequency(),
                up_ratio: st.up_ratio(),
                crossing_ratio: (crossings > 0).then(|| int(st.ups as i64) / int(crossings as i64)),
            })
        })
        .collect()
}

pub const CONVERGENCE_HEADER: [&str; 8] = ["n", "N_n", "u_n", "d_n", "V_n", "fr_1_s", "u_over_V", "crossing_ratio"];

/// Fields for one CSV row; ratios as decimals, absent ones empty.
pub fn convergence_record(row: &ConvergenceRow) -> Vec<String> {
    let dec = |r: &Option<Rational>| r.as_ref().map(|r| format!("{:.9}", to_f64(r))).unwrap_or_default();
    vec![
        row.n.to_string(),
        row.count.to_string(),
        row.ups.to_string(),
        row.downs.to_string(),
        row.variation.to_string(),
        dec(&row.up_frequency),
        dec(&row.up_ratio),
        dec(&row.crossing_ratio),
    ]
}

impl std::fmt::Display for LineSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "y = {}·x + {} over {} units",
            format_rational(&self.slope),
            format_rational(&self.intercept),
            self.extent
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    /// Crossings listed by explicit x-coordinate and sorted.
    fn crossings_by_sorting(slope: &Rational, intercept: &Rational, extent: i64) -> Vec<i64> {
        let mut events: Vec<(Rational, i64)> = (1..=extent).map(|m| (int(m), 0)).collect();
        if !slope.is_zero() {
            let top = slope * int(extent) + intercept;
            let mut k = crate::rational::floor_i64(intercept) + 1;
            while int(k) <= top {
                let x = (int(k) - intercept) / slope;
                if x > int(0) {
                    events.push((x, 1));
                }
                k += 1;
            }
        }
        // horizontal before vertical at equal x cannot happen off the lattice
        events.sort();
        events.into_iter().map(|(_, s)| s).collect()
    }

    #[test]
    fn half_slope_pattern() {
        let spec = LineSpec::new(ratio(1, 2), ratio(1, 4), 30).unwrap();
        let s = cutting_sequence(&spec, 45).unwrap();
        assert_eq!(&s[..6], &[0, 1, 0, 0, 1, 0]);
        assert_eq!(s.iter().filter(|&&x| x == 1).count(), 15);
        assert_eq!(s, crossings_by_sorting(&spec.slope, &spec.intercept, 30));
    }

    #[test]
    fn tiny_slope_is_all_zeros() {
        let spec = LineSpec::new(ratio(1, 100), ratio(1, 200), 200).unwrap();
        assert_eq!(cutting_sequence(&spec, 99).unwrap(), vec![0; 99]);
        assert_eq!(cutting_sequence(&spec, 100).unwrap()[99], 1);
    }

    #[test]
    fn unit_slope_alternates() {
        let spec = LineSpec::new(int(1), ratio(1, 2), 50).unwrap();
        let s = cutting_sequence(&spec, 100).unwrap();
        assert!(s.windows(2).all(|p| p[0] != p[1]));
    }

    #[test]
    fn lattice_hit_rejected() {
        let spec = LineSpec::new(ratio(1, 2), int(0), 10).unwrap();
        assert_eq!(
            cutting_sequence(&spec, 5),
            Err(SturmianError::LatticeHit { x: 2, y: BigInt::from(1) })
        );
        assert!(LineSpec::new(ratio(-1, 2), int(0), 1).is_err());
    }

    #[test]
    fn extent_bounds_length() {
        let spec = LineSpec::new(ratio(1, 2), ratio(1, 4), 2).unwrap();
        assert!(matches!(cutting_sequence(&spec, 4), Err(SturmianError::ExtentTooShort { available: 3, .. })));
    }

    #[test]
    fn rational_slope_period() {
        for (p, q) in [(1i64, 2i64), (3, 5), (7, 4), (2, 9)] {
            let spec = LineSpec::new(ratio(p, q), ratio(1, 2 * q), 200).unwrap();
            let s = cutting_sequence(&spec, 200).unwrap();
            let period = (p + q) as usize;
            assert!((0..s.len() - period).all(|i| s[i] == s[i + period]), "{p}/{q}");
            assert_eq!(s, crossings_by_sorting(&spec.slope, &spec.intercept, 200)[..200]);
        }
    }

    #[test]
    fn stretched_line_matches_at_matched_scale() {
        let sys = DiscretizationSystem::uniform(2, 3).unwrap();
        let spec = LineSpec::new(ratio(1, 2), ratio(1, 4), 8).unwrap();
        let code = line_stretched_code(&spec, &sys, 3).unwrap();
        let cut = cutting_sequence(&spec, code.len()).unwrap();
        assert_eq!(code.symbols, cut);
        assert!(!code.symbols.contains(&-1));
        assert_eq!(boundary_discrepancy(&code.symbols, &cut), 0);
    }

    #[test]
    fn flat_line() {
        let sys = DiscretizationSystem::uniform(2, 4).unwrap();
        let spec = LineSpec::new(int(0), ratio(1, 3), 16).unwrap();
        let code = line_stretched_code(&spec, &sys, 4).unwrap();
        assert!(code.symbols.iter().all(|&s| s == 0));
        assert_eq!(cutting_sequence(&spec, 16).unwrap(), vec![0; 16]);
        let rows = frequency_convergence(&spec, &sys, &[2, 4]).unwrap();
        assert!(rows.iter().all(|r| r.up_ratio.is_none()));
    }

    #[test]
    fn convergence_to_one_third() {
        let sys = DiscretizationSystem::uniform(2, 10).unwrap();
        let spec = LineSpec::new(ratio(1, 2), ratio(1, 4), 1024).unwrap();
        let rows = frequency_convergence(&spec, &sys, &[4, 10]).unwrap();
        let last = rows.last().unwrap();
        assert_eq!(last.up_ratio, Some(int(1)));
        let err = (last.crossing_ratio.clone().unwrap() - ratio(1, 3)).abs();
        assert!(err < ratio(1, 1000));
        assert_eq!(convergence_record(last).len(), CONVERGENCE_HEADER.len());
    }

    #[test]
    fn discrepancy_counts_boundary_only() {
        assert_eq!(boundary_discrepancy(&[0, 1, 0], &[0, 1, 0]), 0);
        assert_eq!(boundary_discrepancy(&[1, 0, 1, 0], &[0, 1, 0]), 1);
        assert_eq!(boundary_discrepancy(&[1, 1, 0], &[0, 0, 0]), 2);
        assert_eq!(boundary_discrepancy(&[0, 1, 0, 0], &[0, 1, 0]), 1);
    }

    #[test]
    fn not_uniform_rejected() {
        let sys = DiscretizationSystem::explicit(vec![
            vec![int(0), int(1)],
            vec![int(0), ratio(1, 3), int(1)],
        ])
        .unwrap();
        let spec = LineSpec::new(int(1), ratio(1, 2), 3).unwrap();
        assert_eq!(line_stretched_code(&spec, &sys, 2), Err(SturmianError::NotUniform { n: 2 }));
    }
}
