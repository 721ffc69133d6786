//! Discretization systems of `[0, 1]` and the uniform image grid.
//!
//! A system is a nested sequence of finite point sets `X_1 ⊂ X_2 ⊂ …`, each
//! containing both endpoints. Level `n` carries a minimal gap `h_n` (which
//! also fixes the image grid `y_j = j·h_n`) and a maximal gap `H_n`.
//! Levels are numbered from 1.

use std::borrow::Cow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::rational::{self, int, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u32),
    #[error("depth must be at least 1, got {0}")]
    InvalidDepth(usize),
    #[error("system has no levels")]
    Empty,
    #[error("level {level} is not nested in the next level")]
    NotNested { level: usize },
    #[error("level {level} is not strictly increasing")]
    NotSorted { level: usize },
    #[error("level {level} does not start at 0 and end at 1")]
    MissingEndpoint { level: usize },
    #[error("maximal gap of the deepest level is not below that of level 1")]
    NotRefining,
    #[error("unknown level {n} (system has levels 1..={depth})")]
    UnknownLevel { n: usize, depth: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<GridError>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Generator {
    Uniform { base: u32, depth: usize },
    Explicit { levels: Vec<Vec<Rational>> },
}

/// How the levels of a [`DiscretizationSystem`] were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorTag {
    UniformDyadic,
    UniformMAdic(u32),
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscretizationSystem {
    generator: Generator,
}

/// Point count and extreme gaps of one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelResolutions {
    pub n: usize,
    pub count: usize,
    pub min_gap: Rational,
    pub max_gap: Rational,
}

impl LevelResolutions {
    pub fn is_uniform(&self) -> bool {
        self.min_gap == self.max_gap
    }
}

impl DiscretizationSystem {
    /// Level `n` is `{k / base^n : 0 ≤ k ≤ base^n}`. Points are generated on
    /// demand, so memory follows the deepest level actually queried.
    pub fn uniform(base: u32, depth: usize) -> Result<Self, GridError> {
        if base < 2 {
            return Err(GridError::InvalidBase(base));
        }
        if depth < 1 {
            return Err(GridError::InvalidDepth(depth));
        }
        Ok(Self {
            generator: Generator::Uniform { base, depth },
        })
    }

    /// Validates nesting, ordering, endpoints and refinement.
    pub fn explicit(levels: Vec<Vec<Rational>>) -> Result<Self, GridError> {
        if levels.is_empty() {
            return Err(GridError::Empty);
        }
        for (idx, level) in levels.iter().enumerate() {
            let n = idx + 1;
            if level.windows(2).any(|w| w[0] >= w[1]) {
                return Err(GridError::NotSorted { level: n });
            }
            let starts_at_zero = level.first().is_some_and(|x| x.is_zero());
            let ends_at_one = level.last().is_some_and(|x| x.is_one());
            if !starts_at_zero || !ends_at_one || level.len() < 2 {
                return Err(GridError::MissingEndpoint { level: n });
            }
        }
        for (idx, pair) in levels.windows(2).enumerate() {
            // Both levels are sorted, so nesting is a merge walk.
            let (coarse, fine) = (&pair[0], &pair[1]);
            let mut j = 0;
            for x in coarse {
                while j < fine.len() && fine[j] < *x {
                    j += 1;
                }
                if j == fine.len() || fine[j] != *x {
                    return Err(GridError::NotNested { level: idx + 2 });
                }
            }
        }
        let system = Self {
            generator: Generator::Explicit { levels },
        };
        let depth = system.depth();
        if depth > 1 && system.resolutions(depth)?.max_gap >= system.resolutions(1)?.max_gap {
            return Err(GridError::NotRefining);
        }
        Ok(system)
    }

    /// Parses one level per line (space-separated `p/q` or decimals); blank
    /// lines and `#` comments are skipped. Errors carry the source line.
    pub fn parse_explicit(text: &str) -> Result<Self, GridError> {
        let mut levels = Vec::new();
        let mut lines = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let points = content
                .split_whitespace()
                .map(parse_rational)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| GridError::Parse {
                    line: idx + 1,
                    message: e.to_string(),
                })?;
            levels.push(points);
            lines.push(idx + 1);
        }
        Self::explicit(levels).map_err(|e| {
            let level = match &e {
                GridError::NotNested { level }
                | GridError::NotSorted { level }
                | GridError::MissingEndpoint { level } => Some(*level),
                _ => None,
            };
            match level {
                Some(l) => GridError::AtLine {
                    line: lines[l - 1],
                    source: Box::new(e),
                },
                None => e,
            }
        })
    }

    pub fn depth(&self) -> usize {
        match &self.generator {
            Generator::Uniform { depth, .. } => *depth,
            Generator::Explicit { levels } => levels.len(),
        }
    }

    pub fn tag(&self) -> GeneratorTag {
        match &self.generator {
            Generator::Uniform { base: 2, .. } => GeneratorTag::UniformDyadic,
            Generator::Uniform { base, .. } => GeneratorTag::UniformMAdic(*base),
            Generator::Explicit { .. } => GeneratorTag::Explicit,
        }
    }

    fn check_level(&self, n: usize) -> Result<(), GridError> {
        let depth = self.depth();
        if n == 0 || n > depth {
            Err(GridError::UnknownLevel { n, depth })
        } else {
            Ok(())
        }
    }

    /// The sorted points of `X_n`.
    pub fn level(&self, n: usize) -> Result<Cow<'_, [Rational]>, GridError> {
        self.check_level(n)?;
        Ok(match &self.generator {
            Generator::Uniform { base, .. } => {
                let denom = uniform_denominator(*base, n);
                let cells = usize::try_from(&denom).expect("uniform level too deep to materialize");
                Cow::Owned(
                    (0..=cells)
                        .map(|k| Rational::new(BigInt::from(k), denom.clone()))
                        .collect(),
                )
            }
            Generator::Explicit { levels } => Cow::Borrowed(levels[n - 1].as_slice()),
        })
    }

    pub fn resolutions(&self, n: usize) -> Result<LevelResolutions, GridError> {
        self.check_level(n)?;
        match &self.generator {
            Generator::Uniform { base, .. } => {
                let denom = uniform_denominator(*base, n);
                let count = usize::try_from(&denom).map_or(usize::MAX, |c| c.saturating_add(1));
                let gap = Rational::new(BigInt::one(), denom);
                Ok(LevelResolutions {
                    n,
                    count,
                    min_gap: gap.clone(),
                    max_gap: gap,
                })
            }
            Generator::Explicit { levels } => {
                let level = &levels[n - 1];
                let mut gaps = level.windows(2).map(|w| &w[1] - &w[0]);
                let first = gaps.next().expect("validated levels have two points");
                let (min_gap, max_gap) = gaps.fold((first.clone(), first), |(lo, hi), g| {
                    (rational::min(lo, g.clone()), rational::max(hi, g))
                });
                Ok(LevelResolutions {
                    n,
                    count: level.len(),
                    min_gap,
                    max_gap,
                })
            }
        }
    }

    /// `n·h_n` for each provided level, in level order.
    pub fn scaled_min_gaps(&self) -> Vec<Rational> {
        (1..=self.depth())
            .map(|n| {
                let r = self.resolutions(n).expect("level in range");
                int(n as i64) * r.min_gap
            })
            .collect()
    }

    /// Finite-depth stand-in for `liminf n·h_n = 0`: the deepest level
    /// attains the smallest `n·h_n`, strictly below the first level's.
    pub fn has_vanishing_scaled_gap(&self) -> bool {
        let scaled = self.scaled_min_gaps();
        match scaled.as_slice() {
            [] => false,
            [_] => true,
            [first, .., last] => last < first && scaled.iter().all(|s| s >= last),
        }
    }
}

fn uniform_denominator(base: u32, n: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), n)
}

/// The unique `j` with `j·h ≤ value < (j+1)·h`.
pub fn image_cell(value: &Rational, h: &Rational) -> i64 {
    // both denominators are positive, so the sign sits in the numerators
    let num = value.numer() * h.denom();
    let den = value.denom() * h.numer();
    let cell = if den.is_negative() { (-num).div_floor(&-den) } else { num.div_floor(&den) };
    cell.to_i64().expect("cell index exceeds i64 range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn pts(xs: &[(i64, i64)]) -> Vec<Rational> {
        xs.iter().map(|&(p, q)| ratio(p, q)).collect()
    }

    #[test]
    fn uniform_level_two() {
        let s = DiscretizationSystem::uniform(2, 3).unwrap();
        assert_eq!(
            s.level(2).unwrap().into_owned(),
            pts(&[(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)])
        );
        let r = s.resolutions(2).unwrap();
        assert_eq!((r.min_gap.clone(), r.max_gap.clone()), (ratio(1, 4), ratio(1, 4)));
        for n in 1..=3 {
            assert_eq!(s.resolutions(n).unwrap().count, (1 << n) + 1);
            assert_eq!(s.level(n).unwrap().len(), (1 << n) + 1);
        }
        let r = s.resolutions(2).unwrap();
        assert!(r.is_uniform());
        assert_eq!(s.tag(), GeneratorTag::UniformDyadic);
    }

    #[test]
    fn uniform_base_ten() {
        let s = DiscretizationSystem::uniform(10, 2).unwrap();
        let r = s.resolutions(1).unwrap();
        assert_eq!((r.count, r.min_gap, r.max_gap), (11, ratio(1, 10), ratio(1, 10)));
        assert_eq!(s.tag(), GeneratorTag::UniformMAdic(10));
        let r = DiscretizationSystem::uniform(2, 4).unwrap().resolutions(4).unwrap();
        assert_eq!((r.count, r.min_gap), (17, ratio(1, 16)));
    }

    #[test]
    fn uniform_rejects_bad_parameters() {
        assert_eq!(DiscretizationSystem::uniform(1, 3), Err(GridError::InvalidBase(1)));
        assert_eq!(DiscretizationSystem::uniform(2, 0), Err(GridError::InvalidDepth(0)));
    }

    #[test]
    fn explicit_non_uniform() {
        let s = DiscretizationSystem::explicit(vec![
            pts(&[(0, 1), (1, 1)]),
            pts(&[(0, 1), (1, 3), (1, 1)]),
            pts(&[(0, 1), (1, 4), (1, 3), (1, 1)]),
        ])
        .unwrap();
        let r = s.resolutions(3).unwrap();
        assert_eq!((r.count, r.min_gap, r.max_gap), (4, ratio(1, 12), ratio(2, 3)));
        let r = s.resolutions(1).unwrap();
        assert_eq!((r.count, r.min_gap, r.max_gap), (2, ratio(1, 1), ratio(1, 1)));
        assert_eq!(s.tag(), GeneratorTag::Explicit);
    }

    #[test]
    fn explicit_single_level_resolutions() {
        let s = DiscretizationSystem::explicit(vec![pts(&[(0, 1), (1, 4), (1, 2), (1, 1)])]).unwrap();
        let r = s.resolutions(1).unwrap();
        assert_eq!((r.count, r.min_gap, r.max_gap), (4, ratio(1, 4), ratio(1, 2)));
    }

    #[test]
    fn explicit_errors_name_the_level() {
        let not_nested = DiscretizationSystem::explicit(vec![
            pts(&[(0, 1), (1, 1)]),
            pts(&[(0, 1), (3, 5), (1, 1)]),
            pts(&[(0, 1), (1, 2), (1, 1)]),
        ]);
        assert_eq!(not_nested, Err(GridError::NotNested { level: 3 }));
        let unsorted = DiscretizationSystem::explicit(vec![pts(&[(0, 1), (1, 2), (1, 3), (1, 1)])]);
        assert_eq!(unsorted, Err(GridError::NotSorted { level: 1 }));
        let no_end = DiscretizationSystem::explicit(vec![pts(&[(0, 1), (1, 1)]), pts(&[(0, 1), (1, 2)])]);
        assert_eq!(no_end, Err(GridError::MissingEndpoint { level: 2 }));
        let stalled = DiscretizationSystem::explicit(vec![pts(&[(0, 1), (1, 1)]), pts(&[(0, 1), (1, 1)])]);
        assert_eq!(stalled, Err(GridError::NotRefining));
        assert_eq!(DiscretizationSystem::explicit(vec![]), Err(GridError::Empty));
    }

    #[test]
    fn unknown_level() {
        let s = DiscretizationSystem::uniform(2, 3).unwrap();
        assert_eq!(s.resolutions(4), Err(GridError::UnknownLevel { n: 4, depth: 3 }));
        assert!(s.level(0).is_err());
    }

    #[test]
    fn parse_reports_line_numbers() {
        let text = "# levels\n0 1\n\n0 0.6 1\n0 1/2 1\n";
        match DiscretizationSystem::parse_explicit(text) {
            Err(GridError::AtLine { line, source }) => {
                assert_eq!(line, 5);
                assert_eq!(*source, GridError::NotNested { level: 3 });
            }
            other => panic!("unexpected {other:?}"),
        }
        match DiscretizationSystem::parse_explicit("0 1\n0 x 1\n") {
            Err(GridError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let ok = DiscretizationSystem::parse_explicit("0 1\n0 1/3 1\n0 0.25 1/3 1\n").unwrap();
        assert_eq!(ok.depth(), 3);
    }

    #[test]
    fn image_cell_half_open() {
        let h = ratio(1, 10);
        assert_eq!(image_cell(&ratio(37, 100), &h), 3);
        assert_eq!(image_cell(&ratio(3, 10), &h), 3);
        assert_eq!(image_cell(&ratio(-5, 100), &h), -1);
        assert_eq!(image_cell(&ratio(-1, 10), &h), -1);
    }

    #[test]
    fn scaled_gap_decreases_on_uniform_systems() {
        for base in 2..6 {
            let s = DiscretizationSystem::uniform(base, 8).unwrap();
            let scaled = s.scaled_min_gaps();
            // 1/2 = 2/4 ties the first two dyadic levels.
            let from = if base == 2 { 1 } else { 0 };
            assert!(scaled[from..].windows(2).all(|w| w[1] < w[0]), "base {base}");
            assert!(s.has_vanishing_scaled_gap());
        }
    }
}
