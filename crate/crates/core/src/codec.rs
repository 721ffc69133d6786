//! Sampling a function on a level and producing its quantitative,
//! qualitative and stretched codes.
//!
//! A quantitative code has one entry per consecutive pair of sample points:
//! the difference of the image cells the two samples fall into. The
//! qualitative code keeps only signs; the stretched code expands each entry
//! `Q_i` into `|Q_i|` copies of `sign(Q_i)` terminated by a single `0`.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::grid::{image_cell, DiscretizationSystem, GridError};
use crate::rational::{self, floor_i64, format_rational, int, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlError {
    #[error("a piecewise-linear function needs at least two breakpoints")]
    TooFewPoints,
    #[error("breakpoint abscissae must be strictly increasing (at index {index})")]
    NotIncreasing { index: usize },
    #[error("breakpoints must span exactly [0, 1]")]
    Domain,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A continuous piecewise-linear function on `[0, 1]` with exact breakpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlFunction {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
}

impl PlFunction {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self, PlError> {
        if points.len() < 2 {
            return Err(PlError::TooFewPoints);
        }
        if let Some(i) = points.windows(2).position(|w| w[0].0 >= w[1].0) {
            return Err(PlError::NotIncreasing { index: i + 1 });
        }
        if !points[0].0.is_zero() || points[points.len() - 1].0 != int(1) {
            return Err(PlError::Domain);
        }
        let (xs, ys) = points.into_iter().unzip();
        Ok(Self { xs, ys })
    }

    pub fn constant(c: Rational) -> Self {
        Self {
            xs: vec![int(0), int(1)],
            ys: vec![c.clone(), c],
        }
    }

    /// `x ↦ slope·x + intercept`.
    pub fn linear(slope: Rational, intercept: Rational) -> Self {
        let end = &intercept + slope;
        Self {
            xs: vec![int(0), int(1)],
            ys: vec![intercept, end],
        }
    }

    /// Sawtooth with `teeth` peaks of height `amplitude`, zero at both ends.
    pub fn zigzag(teeth: usize, amplitude: Rational) -> Self {
        let pieces = 2 * teeth.max(1);
        let mut xs = Vec::with_capacity(pieces + 1);
        let mut ys = Vec::with_capacity(pieces + 1);
        for i in 0..=pieces {
            xs.push(rational::ratio(i as i64, pieces as i64));
            ys.push(if i % 2 == 1 { amplitude.clone() } else { Rational::zero() });
        }
        Self { xs, ys }
    }

    /// Two-column text: one `x y` pair per line, `#` comments allowed.
    pub fn parse(text: &str) -> Result<Self, PlError> {
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let parse_err = |message: String| PlError::Parse {
                line: idx + 1,
                message,
            };
            let cols: Vec<&str> = content.split_whitespace().collect();
            if cols.len() != 2 {
                return Err(parse_err(format!("expected 2 columns, found {}", cols.len())));
            }
            let x = parse_rational(cols[0]).map_err(|e| parse_err(e.to_string()))?;
            let y = parse_rational(cols[1]).map_err(|e| parse_err(e.to_string()))?;
            points.push((x, y));
        }
        Self::new(points)
    }

    pub fn to_text(&self) -> String {
        self.breakpoints()
            .map(|(x, y)| format!("{} {}\n", format_rational(x), format_rational(y)))
            .collect()
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.xs.iter().zip(self.ys.iter())
    }

    pub fn xs(&self) -> &[Rational] {
        &self.xs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn start_value(&self) -> &Rational {
        &self.ys[0]
    }

    pub fn end_value(&self) -> &Rational {
        &self.ys[self.ys.len() - 1]
    }

    fn segment_value(&self, seg: usize, x: &Rational) -> Rational {
        let (x0, x1) = (&self.xs[seg], &self.xs[seg + 1]);
        let (y0, y1) = (&self.ys[seg], &self.ys[seg + 1]);
        if x == x0 {
            return y0.clone();
        }
        if x == x1 {
            return y1.clone();
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Linear interpolation. Abscissae outside `[0, 1]` extend the first or
    /// last segment.
    pub fn eval(&self, x: &Rational) -> Rational {
        // index of the first breakpoint strictly greater than x
        let upper = self.xs.partition_point(|b| b <= x);
        let seg = upper.saturating_sub(1).min(self.xs.len() - 2);
        self.segment_value(seg, x)
    }

    /// Evaluates a non-decreasing sequence of abscissae in one merge pass.
    pub fn eval_sorted(&self, xs: &[Rational]) -> Vec<Rational> {
        let last = self.xs.len() - 2;
        let lines: Vec<(Rational, Rational)> = (0..=last)
            .map(|seg| {
                let slope = (&self.ys[seg + 1] - &self.ys[seg]) / (&self.xs[seg + 1] - &self.xs[seg]);
                let intercept = &self.ys[seg] - &slope * &self.xs[seg];
                (slope, intercept)
            })
            .collect();
        let mut seg = 0;
        xs.iter()
            .map(|x| {
                while seg < last && self.xs[seg + 1] <= *x {
                    seg += 1;
                }
                let (slope, intercept) = &lines[seg];
                slope * x + intercept
            })
            .collect()
    }

    pub fn slopes(&self) -> impl Iterator<Item = Rational> + '_ {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| (&y[1] - &y[0]) / (&x[1] - &x[0]))
    }

    /// Lipschitz constant of the function; derives its modulus of continuity.
    pub fn max_abs_slope(&self) -> Rational {
        self.slopes()
            .map(|s| s.abs())
            .fold(Rational::zero(), rational::max)
    }

    /// `sup |self − other|` over `[0, 1]`, exact. The difference of two PL
    /// functions is PL on the merged breakpoints, so its extremes sit there.
    pub fn sup_distance(&self, other: &PlFunction) -> Rational {
        let mut merged: Vec<Rational> = self.xs.iter().chain(other.xs.iter()).cloned().collect();
        merged.sort();
        merged.dedup();
        let a = self.eval_sorted(&merged);
        let b = other.eval_sorted(&merged);
        a.iter()
            .zip(b.iter())
            .map(|(p, q)| (p - q).abs())
            .fold(Rational::zero(), rational::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeKind {
    Quantitative,
    Qualitative,
    Stretched,
}

impl CodeKind {
    pub fn name(self) -> &'static str {
        match self {
            CodeKind::Quantitative => "quantitative",
            CodeKind::Qualitative => "qualitative",
            CodeKind::Stretched => "stretched",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "quantitative" => Some(CodeKind::Quantitative),
            "qualitative" => Some(CodeKind::Qualitative),
            "stretched" => Some(CodeKind::Stretched),
            _ => None,
        }
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("expected a {expected} code, got {found}")]
    KindMismatch { expected: CodeKind, found: CodeKind },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("malformed stretched code at position {position}")]
    MalformedStretched { position: usize },
    #[error("malformed code text: {0}")]
    Parse(String),
}

/// A finite code word tagged with its kind and level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    pub kind: CodeKind,
    pub level: usize,
    pub symbols: Vec<i64>,
}

impl Code {
    pub fn new(kind: CodeKind, level: usize, symbols: Vec<i64>) -> Self {
        Self { kind, level, symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    fn expect_kind(&self, expected: CodeKind) -> Result<(), CodecError> {
        if self.kind == expected {
            Ok(())
        } else {
            Err(CodecError::KindMismatch {
                expected,
                found: self.kind,
            })
        }
    }

    /// Header `kind level length`, then the symbols space-separated.
    pub fn to_text(&self) -> String {
        let body: Vec<String> = self.symbols.iter().map(i64::to_string).collect();
        format!("{} {} {}\n{}\n", self.kind, self.level, self.len(), body.join(" "))
    }

    pub fn parse(text: &str) -> Result<Self, CodecError> {
        let perr = |m: &str| CodecError::Parse(m.to_string());
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().ok_or_else(|| perr("empty input"))?.split_whitespace().collect();
        let [kind, level, length] = header.as_slice() else {
            return Err(perr("header must be `kind level length`"));
        };
        let kind = CodeKind::from_name(kind).ok_or_else(|| perr("unknown code kind"))?;
        let level: usize = level.parse().map_err(|_| perr("bad level"))?;
        let length: usize = length.parse().map_err(|_| perr("bad length"))?;
        let symbols = lines
            .flat_map(str::split_whitespace)
            .map(|t| t.parse::<i64>().map_err(|_| perr("bad symbol")))
            .collect::<Result<Vec<_>, _>>()?;
        if symbols.len() != length {
            return Err(perr("length does not match header"));
        }
        Ok(Self { kind, level, symbols })
    }
}

/// Image-cell index of every sample point of level `n`.
pub fn sample_cells(f: &PlFunction, system: &DiscretizationSystem, n: usize) -> Result<Vec<i64>, CodecError> {
    let h = system.resolutions(n)?.min_gap;
    let points = system.level(n)?;
    Ok(f.eval_sorted(&points).iter().map(|y| image_cell(y, &h)).collect())
}

/// Smallest distance from any level-`n` sample of `f` to an image grid line.
/// Any `g` with `‖f − g‖∞` below this value has the same codes at level `n`.
pub fn sample_margin(f: &PlFunction, system: &DiscretizationSystem, n: usize) -> Result<Rational, CodecError> {
    let h = system.resolutions(n)?.min_gap;
    let points = system.level(n)?;
    Ok(min_line_distance(&f.eval_sorted(&points), &h))
}

/// Smallest distance from any of `values` to a multiple of `h`.
pub fn min_line_distance(values: &[Rational], h: &Rational) -> Rational {
    values
        .iter()
        .map(|y| {
            let below = y - h * int(image_cell(y, h));
            let above = h - &below;
            rational::min(below, above)
        })
        .min()
        .expect("levels are non-empty")
}

pub fn quantitative_code(f: &PlFunction, system: &DiscretizationSystem, n: usize) -> Result<Code, CodecError> {
    let cells = sample_cells(f, system, n)?;
    Ok(Code::new(CodeKind::Quantitative, n, cells_to_steps(&cells)))
}

/// Consecutive differences of a cell walk.
pub fn cells_to_steps(cells: &[i64]) -> Vec<i64> {
    cells.windows(2).map(|w| w[1] - w[0]).collect()
}

pub fn qualitative_code(q: &Code) -> Result<Code, CodecError> {
    q.expect_kind(CodeKind::Quantitative)?;
    Ok(Code::new(
        CodeKind::Qualitative,
        q.level,
        q.symbols.iter().map(|s| s.signum()).collect(),
    ))
}

pub fn stretched_code(q: &Code) -> Result<Code, CodecError> {
    q.expect_kind(CodeKind::Quantitative)?;
    let total: usize = q.symbols.iter().map(|s| s.unsigned_abs() as usize + 1).sum();
    let mut out = Vec::with_capacity(total);
    for &s in &q.symbols {
        out.extend(std::iter::repeat_n(s.signum(), s.unsigned_abs() as usize));
        out.push(0);
    }
    Ok(Code::new(CodeKind::Stretched, q.level, out))
}

/// Inverse of [`stretched_code`]: splits at zeros and reads run lengths.
pub fn unstretch(s: &Code) -> Result<Code, CodecError> {
    s.expect_kind(CodeKind::Stretched)?;
    let mut out = Vec::new();
    let mut run: i64 = 0;
    for (position, &sym) in s.symbols.iter().enumerate() {
        match sym {
            0 => {
                out.push(run);
                run = 0;
            }
            1 | -1 if run == 0 || run.signum() == sym => run += sym,
            _ => return Err(CodecError::MalformedStretched { position }),
        }
    }
    if run != 0 {
        return Err(CodecError::MalformedStretched {
            position: s.symbols.len(),
        });
    }
    Ok(Code::new(CodeKind::Quantitative, s.level, out))
}

/// Counts of the stretched code, computed from `Q` without expanding it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StretchStats {
    /// `u_n`: number of `1`s.
    pub ups: u64,
    /// `d_n`: number of `−1`s.
    pub downs: u64,
    /// `V_n = u_n + d_n`, the total variation at this level.
    pub variation: u64,
    /// One zero per quantitative entry: `N_n − 1`.
    pub zeros: u64,
    /// `N_n`, the number of sample points.
    pub count: u64,
    /// `⌊(f(1) − f(0)) / h_n⌋`.
    pub delta_n: i64,
    /// `Σ Q_i = u_n − d_n`.
    pub net: i64,
}

impl StretchStats {
    pub fn stretched_len(&self) -> u64 {
        self.variation + self.zeros
    }

    /// `u_n / V_n`, absent when the code has no variation.
    pub fn up_ratio(&self) -> Option<Rational> {
        (self.variation > 0).then(|| rational::ratio(self.ups as i64, self.variation as i64))
    }

    /// `fr(1, s) = u_n / |s|`.
    pub fn up_frequency(&self) -> Option<Rational> {
        let len = self.stretched_len();
        (len > 0).then(|| rational::ratio(self.ups as i64, len as i64))
    }

    fn identity_with(&self, drift: i64) -> Option<Rational> {
        if self.ups == 0 {
            return None;
        }
        let denom = int(2) - rational::ratio(drift, self.ups as i64);
        (!denom.is_zero()).then(|| denom.recip())
    }

    /// `1 / (2 − (u_n − d_n)/u_n)`; equals [`Self::up_ratio`] exactly.
    pub fn identity_exact(&self) -> Option<Rational> {
        self.identity_with(self.net)
    }

    /// `1 / (2 − Δ_n/u_n)` with the floor-based drift `Δ_n`. Agrees with
    /// the exact form only when `Δ_n = u_n − d_n`.
    pub fn identity_floor_drift(&self) -> Option<Rational> {
        self.identity_with(self.delta_n)
    }
}

pub fn stretch_stats(q: &Code, f: &PlFunction, h: &Rational) -> Result<StretchStats, CodecError> {
    q.expect_kind(CodeKind::Quantitative)?;
    let ups: u64 = q.symbols.iter().filter(|&&s| s > 0).map(|&s| s as u64).sum();
    let downs: u64 = q.symbols.iter().filter(|&&s| s < 0).map(|&s| s.unsigned_abs()).sum();
    let zeros = q.symbols.len() as u64;
    Ok(StretchStats {
        ups,
        downs,
        variation: ups + downs,
        zeros,
        count: zeros + 1,
        delta_n: floor_i64(&((f.end_value() - f.start_value()) / h)),
        net: q.symbols.iter().sum(),
    })
}
