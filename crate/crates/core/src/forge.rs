//! Witness construction.
//!
//! Given a target `g`, a tolerance `ε` and a word `w`, the frequency forge
//! builds a piecewise-linear `f` with `‖f − g‖∞ ≤ ε` whose level-`n` code
//! contains `w` with frequency within `1/t` of a prescribed `α`:
//!
//! 1. pick `δ` below both the modulus of `g` at `ε/2` and `ε/(4·H)`;
//! 2. scan levels for one fine enough for the anchor count and the
//!    assembly bound `(K−1)|w|/|v| < 1/(3t)`;
//! 3. cut the level into ε-boxes, synthesize one segment word per box;
//! 4. walk each segment word as a cell path inside a triangle opening from
//!    the box's left edge, joined to the previous box by a one-step bridge;
//! 5. recode `f` from scratch and certify distance, frequency and segment
//!    fidelity.
//!
//! The zigzag forge instead alternates large jumps inside every box, which
//! makes the qualitative code zero-free and balances ups against downs.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::codec::{self, qualitative_code, quantitative_code, Code, CodeKind, CodecError, PlFunction};
use crate::cover::{self, epsilon_boxes, subdiscretize, CoverError, EpsilonBox, EpsilonCover, Subdiscretization};
use crate::grid::{image_cell, DiscretizationSystem, GridError};
use crate::rational::{self, ceil_i64, format_rational, int, ratio, Rational};
use crate::words::{self, synthesize_closest, synthesize_word, Alphabet, FrequencyTarget, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForgeError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("no provided level is fine enough; at level {level}: {inequality}")]
    SystemTooShallow { level: usize, inequality: String },
    #[error("segment synthesis failed: {0}")]
    SynthesisInfeasible(#[from] WordError),
    #[error("segment {k} does not fit its triangle at level {level}")]
    DoesNotFit { k: usize, level: usize },
    #[error("certificate failed at level {level}: {reason}")]
    CertificateFailed { level: usize, reason: String },
    #[error("jump {jump} too large at level {level}: 2(jump+1)h_n must stay below ε")]
    JumpTooLarge { jump: u64, level: usize },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForgeMode {
    /// Targets the sign code; segment words are over `{−1, 0, 1}`.
    Qualitative,
    /// Targets the cell-difference code; segment words are over `ℤ`.
    Quantitative,
}

#[derive(Debug, Clone)]
pub struct ForgeRequest {
    pub g: PlFunction,
    pub eps: Rational,
    pub w: Vec<i64>,
    pub target: FrequencyTarget,
    pub mode: ForgeMode,
    pub system: DiscretizationSystem,
    pub min_level: usize,
}

impl ForgeRequest {
    pub fn new(
        g: PlFunction,
        eps: Rational,
        w: Vec<i64>,
        alpha: Rational,
        t: u32,
        mode: ForgeMode,
        system: DiscretizationSystem,
        min_level: usize,
    ) -> Result<Self, ForgeError> {
        if eps <= Rational::zero() {
            return Err(ForgeError::InvalidRequest("ε must be positive".into()));
        }
        if min_level == 0 {
            return Err(ForgeError::InvalidRequest("levels are numbered from 1".into()));
        }
        let target = FrequencyTarget::new(&w, alpha, t)?;
        if mode == ForgeMode::Qualitative {
            if let Some(s) = w.iter().find(|s| !Alphabet::Ternary.contains(**s)) {
                return Err(ForgeError::InvalidRequest(format!(
                    "symbol {s} cannot occur in a qualitative code"
                )));
            }
        }
        if mode == ForgeMode::Quantitative && !system.has_vanishing_scaled_gap() {
            return Err(ForgeError::InvalidRequest(
                "quantitative forging needs n·h_n to decrease toward the deepest level".into(),
            ));
        }
        Ok(Self {
            g,
            eps,
            w,
            target,
            mode,
            system,
            min_level,
        })
    }

    /// Vertical scale of the inscription triangles per symbol: `1` for the
    /// sign code, `max(H(w), 1)` for the cell-difference code. The floor of
    /// one covers the blocker symbol when `w` is all zeros.
    pub fn symbol_height(&self) -> i64 {
        match self.mode {
            ForgeMode::Qualitative => 1,
            ForgeMode::Quantitative => words::height(&self.w).max(1),
        }
    }

    /// `δ = ¾·min(δ_g(ε/2), ε/(4·scale))`, strictly inside the admissible range.
    pub fn delta(&self) -> Rational {
        let modulus = cover::modulus(&self.g, &(&self.eps / int(2)));
        let box_bound = &self.eps / int(4 * self.symbol_height());
        rational::min(modulus, box_bound) * ratio(3, 4)
    }

    fn alphabet(&self) -> Alphabet {
        match self.mode {
            ForgeMode::Qualitative => Alphabet::Ternary,
            ForgeMode::Quantitative => Alphabet::Integers,
        }
    }
}

/// Closed triangle with a vertical right edge: apex `a`, upper `b`, lower `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle {
    pub apex: (Rational, Rational),
    pub upper: (Rational, Rational),
    pub lower: (Rational, Rational),
}

impl Triangle {
    /// Apex at `(x_a, y_a)`, right edge at `x_b` spanning `y_a ± half_height`.
    pub fn new(x_a: Rational, y_a: Rational, x_b: Rational, half_height: Rational) -> Self {
        Self {
            upper: (x_b.clone(), &y_a + &half_height),
            lower: (x_b, &y_a - &half_height),
            apex: (x_a, y_a),
        }
    }

    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        let (xa, ya) = &self.apex;
        let xb = &self.upper.0;
        if x < xa || x > xb {
            return false;
        }
        let offset = (y - ya).abs();
        if xa == xb {
            return offset <= &self.upper.1 - ya;
        }
        let half = (&self.upper.1 - ya) * (x - xa) / (xb - xa);
        offset <= half
    }

    pub fn inside_box(&self, b: &EpsilonBox) -> bool {
        [&self.apex, &self.upper, &self.lower]
            .into_iter()
            .all(|(x, y)| b.contains(x, y))
    }
}

/// Centre of image cell `j`.
fn cell_center(j: i64, h: &Rational) -> Rational {
    (int(j) + ratio(1, 2)) * h
}

/// Places samples at the grid abscissae `xs` (`|v| + 1` points) on cell
/// centres, starting in `start_cell` and stepping by the symbols of `v`.
///
/// Every sample must fall inside `triangle`, and the triangle inside `bx`.
pub fn inscribe_segment(
    bx: &EpsilonBox,
    triangle: &Triangle,
    v: &[i64],
    xs: &[Rational],
    h: &Rational,
    start_cell: i64,
) -> Option<Vec<Rational>> {
    assert_eq!(xs.len(), v.len() + 1, "one more abscissa than symbols");
    if !triangle.inside_box(bx) {
        return None;
    }
    let mut cell = start_cell;
    let mut values = Vec::with_capacity(xs.len());
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            cell += v[i - 1];
        }
        let y = cell_center(cell, h);
        if !triangle.contains(x, &y) {
            return None;
        }
        values.push(y);
    }
    Some(values)
}

/// Outcome of every postcondition the forge promises.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub level: usize,
    pub sup_distance: Rational,
    pub sup_distance_ok: bool,
    pub frequency: Rational,
    pub frequency_deviation: Rational,
    pub frequency_ok: bool,
    pub segments_match: bool,
    pub triangles_contained: bool,
    /// Smallest distance from a sample to an image grid line.
    pub margin: Rational,
    pub margin_ok: bool,
    /// `(K−1)|w| / |v|` against `1/(3t)`.
    pub assembly_lhs: Rational,
}

impl Certificate {
    pub fn all_true(&self) -> bool {
        self.sup_distance_ok && self.frequency_ok && self.segments_match && self.triangles_contained && self.margin_ok
    }

    fn failures(&self) -> String {
        let mut out = Vec::new();
        if !self.sup_distance_ok {
            out.push(format!("sup distance {}", format_rational(&self.sup_distance)));
        }
        if !self.frequency_ok {
            out.push(format!("frequency deviation {}", format_rational(&self.frequency_deviation)));
        }
        if !self.segments_match {
            out.push("segment mismatch".to_string());
        }
        if !self.triangles_contained {
            out.push("triangle containment".to_string());
        }
        if !self.margin_ok {
            out.push(format!("margin {}", format_rational(&self.margin)));
        }
        out.join(", ")
    }

    /// `key value` lines; rationals exact.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "level {}", self.level);
        let _ = writeln!(s, "sup_distance {}", format_rational(&self.sup_distance));
        let _ = writeln!(s, "sup_distance_ok {}", self.sup_distance_ok);
        let _ = writeln!(s, "frequency {}", format_rational(&self.frequency));
        let _ = writeln!(s, "frequency_deviation {}", format_rational(&self.frequency_deviation));
        let _ = writeln!(s, "frequency_ok {}", self.frequency_ok);
        let _ = writeln!(s, "segments_match {}", self.segments_match);
        let _ = writeln!(s, "triangles_contained {}", self.triangles_contained);
        let _ = writeln!(s, "margin {}", format_rational(&self.margin));
        let _ = writeln!(s, "margin_ok {}", self.margin_ok);
        let _ = writeln!(s, "assembly_lhs {}", format_rational(&self.assembly_lhs));
        s
    }
}

#[derive(Debug, Clone)]
pub struct ForgeResult {
    pub f: PlFunction,
    pub n: usize,
    pub delta: Rational,
    /// Quantitative or qualitative code of `f` at level `n`, per the mode.
    pub code: Code,
    pub realized_freq: Rational,
    pub sub: Subdiscretization,
    /// Segment words `v_1 … v_{K−1}`.
    pub segments: Vec<Vec<i64>>,
    pub triangles: Vec<Triangle>,
    pub certificate: Certificate,
}

fn target_code(q: Code, mode: ForgeMode) -> Result<Code, CodecError> {
    match mode {
        ForgeMode::Quantitative => Ok(q),
        ForgeMode::Qualitative => qualitative_code(&q),
    }
}

/// Code positions `i_k + 1 … i_{k+1} − 1` hold segment `k`.
fn segments_match(code: &[i64], sub: &Subdiscretization, segments: &[Vec<i64>]) -> bool {
    sub.indices.windows(2).zip(segments).all(|(w, seg)| {
        let (lo, hi) = (w[0] + 1, w[1]);
        hi - lo == seg.len() && code[lo..hi] == seg[..]
    })
}

fn triangles_for(cover: &EpsilonCover, points: &[Rational], segments: &[Vec<i64>], h: &Rational, scale: i64) -> Vec<Triangle> {
    cover
        .boxes
        .iter()
        .zip(cover.sub.indices.windows(2))
        .zip(segments)
        .map(|((b, idx), seg)| {
            let start = image_cell(&b.center_y, h);
            Triangle::new(
                points[idx[0] + 1].clone(),
                cell_center(start, h),
                points[idx[1]].clone(),
                int(seg.len() as i64 * scale) * h,
            )
        })
        .collect()
}

fn certify(
    req: &ForgeRequest,
    f: &PlFunction,
    n: usize,
    sub: &Subdiscretization,
    segments: &[Vec<i64>],
    triangles: &[Triangle],
) -> Result<(Code, Certificate), ForgeError> {
    let h = req.system.resolutions(n)?.min_gap;
    let points = req.system.level(n)?;
    let samples = f.eval_sorted(&points);
    let cells: Vec<i64> = samples.iter().map(|y| image_cell(y, &h)).collect();
    let code = target_code(Code::new(CodeKind::Quantitative, n, codec::cells_to_steps(&cells)), req.mode)?;
    let frequency = words::frequency(&req.w, &code.symbols)?;
    let frequency_deviation = (&frequency - req.target.alpha()).abs();
    let sup_distance = f.sup_distance(&req.g);
    let margin = codec::min_line_distance(&samples, &h);
    let triangles_contained = sub.indices.windows(2).zip(triangles).all(|(idx, tri)| {
        (idx[0] + 1..=idx[1]).all(|i| tri.contains(&points[i], &samples[i]))
    });
    let assembly_lhs = int(((sub.anchor_count() - 1) * req.w.len()) as i64) / int(code.len() as i64);
    let certificate = Certificate {
        level: n,
        sup_distance_ok: sup_distance <= req.eps,
        sup_distance,
        frequency_ok: frequency_deviation <= req.target.tolerance(),
        frequency,
        frequency_deviation,
        segments_match: segments_match(&code.symbols, sub, segments),
        triangles_contained,
        margin_ok: margin >= &h / int(4),
        margin,
        assembly_lhs,
    };
    Ok((code, certificate))
}

fn build_at_level(req: &ForgeRequest, n: usize, sub: Subdiscretization) -> Result<ForgeResult, ForgeError> {
    let delta = sub.delta.clone();
    let h = req.system.resolutions(n)?.min_gap;
    let points = req.system.level(n)?;
    let cover = epsilon_boxes(&req.g, &req.eps, sub);
    let scale = req.symbol_height();

    let mut segments = Vec::with_capacity(cover.boxes.len());
    for &l in &cover.sub.gaps {
        let len = l - 1;
        let seg = match synthesize_word(&req.w, len, &req.target, req.alphabet()) {
            Ok(seg) => seg,
            // Short trailing gaps cannot meet 1/(3t) on their own; they
            // carry little weight and the certificate has the final word.
            Err(WordError::Infeasible { .. }) => synthesize_closest(&req.w, len, req.target.alpha(), req.alphabet())?,
            Err(e) => return Err(e.into()),
        };
        segments.push(seg);
    }
    let triangles = triangles_for(&cover, &points, &segments, &h, scale);

    let mut values: Vec<Rational> = Vec::with_capacity(points.len());
    for (k, ((b, tri), seg)) in cover.boxes.iter().zip(&triangles).zip(&segments).enumerate() {
        let (lo, hi) = (cover.sub.indices[k], cover.sub.indices[k + 1]);
        let start = image_cell(&b.center_y, &h);
        let piece = inscribe_segment(b, tri, seg, &points[lo + 1..=hi], &h, start)
            .ok_or(ForgeError::DoesNotFit { k: k + 1, level: n })?;
        if k == 0 {
            // f(0) sits level with the first apex, so the first bridge is flat
            values.push(piece[0].clone());
        }
        values.extend(piece);
    }
    let f = PlFunction::new(points.iter().cloned().zip(values).collect()).expect("grid abscissae are valid breakpoints");
    let (code, certificate) = certify(req, &f, n, &cover.sub, &segments, &triangles)?;
    if !certificate.all_true() {
        return Err(ForgeError::CertificateFailed {
            level: n,
            reason: certificate.failures(),
        });
    }
    Ok(ForgeResult {
        f,
        n,
        delta,
        realized_freq: certificate.frequency.clone(),
        code,
        sub: cover.sub,
        segments,
        triangles,
        certificate,
    })
}

/// Scans levels `min_level..=depth` and returns the first witness whose
/// certificate is fully true.
pub fn forge_frequency_witness(req: &ForgeRequest) -> Result<ForgeResult, ForgeError> {
    let delta = req.delta();
    let two_delta = &delta * int(2);
    let anchors_needed = int(ceil_i64(&two_delta.recip()));
    let seg_tol = req.target.segment_tolerance();
    let depth = req.system.depth();
    let mut last_shallow = None;
    let mut last_failure = None;
    for n in req.min_level..=depth {
        let res = req.system.resolutions(n)?;
        let lhs = &anchors_needed * &res.max_gap;
        if lhs >= two_delta {
            last_shallow = Some(ForgeError::SystemTooShallow {
                level: n,
                inequality: format!(
                    "ceil(1/(2δ))·H_n = {} is not below 2δ = {}",
                    format_rational(&lhs),
                    format_rational(&two_delta)
                ),
            });
            continue;
        }
        let sub = subdiscretize(&req.system, n, &delta)?;
        let code_len = res.count - 1;
        let assembly = int(((sub.anchor_count() - 1) * req.w.len()) as i64) / int(code_len as i64);
        if assembly >= seg_tol {
            last_shallow = Some(ForgeError::SystemTooShallow {
                level: n,
                inequality: format!(
                    "(K-1)|w|/|v| = {} is not below 1/(3t) = {}",
                    format_rational(&assembly),
                    format_rational(&seg_tol)
                ),
            });
            continue;
        }
        match build_at_level(req, n, sub) {
            Ok(result) => return Ok(result),
            Err(e @ (ForgeError::DoesNotFit { .. } | ForgeError::CertificateFailed { .. })) => {
                last_failure = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_failure.or(last_shallow).unwrap_or(ForgeError::SystemTooShallow {
        level: depth,
        inequality: format!("minimum level {} exceeds depth {}", req.min_level, depth),
    }))
}

/// Re-derives the certificate from the request and the witness alone.
pub fn verify_forge(req: &ForgeRequest, result: &ForgeResult) -> Result<Certificate, ForgeError> {
    let n = result.n;
    let h = req.system.resolutions(n)?.min_gap;
    let points = req.system.level(n)?;
    let sub = subdiscretize(&req.system, n, &req.delta())?;
    let cover = epsilon_boxes(&req.g, &req.eps, sub);
    let triangles = triangles_for(&cover, &points, &result.segments, &h, req.symbol_height());
    let (_, certificate) = certify(req, &result.f, n, &cover.sub, &result.segments, &triangles)?;
    let boxes_hold = cover.boxes.iter().zip(&triangles).all(|(b, t)| t.inside_box(b));
    Ok(Certificate {
        triangles_contained: certificate.triangles_contained && boxes_hold,
        ..certificate
    })
}

/// Zigzag witness and its statistics.
#[derive(Debug, Clone)]
pub struct ZigzagResult {
    pub f: PlFunction,
    pub n: usize,
    pub jump: u64,
    pub code: Code,
    pub sub: Subdiscretization,
    /// Entries with `Q_i > jump`.
    pub above: usize,
    /// Entries with `Q_i < −jump`.
    pub below: usize,
    /// Entries that are not part of a `±(jump+1)` alternation.
    pub exceptions: usize,
    pub sup_distance: Rational,
    pub margin: Rational,
    pub zero_free: bool,
    /// `N_n`.
    pub count: usize,
}

impl ZigzagResult {
    /// `card{Q_i > jump} > N_n/3` and `card{Q_i < −jump} > N_n/3`.
    pub fn counts_exceed_third(&self) -> bool {
        3 * self.above > self.count && 3 * self.below > self.count
    }
}

fn count_exceptions(steps: &[i64], amplitude: i64) -> usize {
    steps
        .iter()
        .enumerate()
        .filter(|&(i, &s)| {
            let regular = s.abs() == amplitude && (i == 0 || steps[i - 1] == -s);
            !regular
        })
        .count()
}

/// Alternating witness at level `n`: inside each box, samples swing between
/// two cells `jump + 1` apart around `g(Δ_k)`. Bridges between boxes and the
/// two endpoints (pinned to the cells of `g(0)` and `g(1)`) are the only
/// irregular steps, and none of them is zero.
pub fn forge_zigzag(
    g: &PlFunction,
    eps: &Rational,
    jump: u64,
    system: &DiscretizationSystem,
    n: usize,
) -> Result<ZigzagResult, ForgeError> {
    let res = system.resolutions(n)?;
    let h = res.min_gap.clone();
    let amplitude = jump as i64 + 1;
    if int(2 * amplitude) * &h >= *eps {
        return Err(ForgeError::JumpTooLarge { jump, level: n });
    }
    let delta = rational::min(cover::modulus(g, &(eps / int(2))), eps / int(4)) * ratio(3, 4);
    let sub = subdiscretize(system, n, &delta)?;
    let cover = epsilon_boxes(g, eps, sub);
    let points = system.level(n)?;
    let last = points.len() - 1;

    let mut cells: Vec<i64> = Vec::with_capacity(points.len());
    cells.push(image_cell(g.start_value(), &h));
    for (k, b) in cover.boxes.iter().enumerate() {
        let (lo_idx, hi_idx) = (cover.sub.indices[k], cover.sub.indices[k + 1]);
        let centre = image_cell(&b.center_y, &h);
        let low = centre - amplitude / 2;
        let high = low + amplitude;
        let prev = *cells.last().expect("f(0) is placed");
        let prev_step = if cells.len() >= 2 { prev - cells[cells.len() - 2] } else { 0 };
        // continue the alternation if possible: after a rise, start low
        let preferred = if prev_step > 0 { [low, high] } else { [high, low] };
        let first = preferred.into_iter().find(|&c| c != prev).expect("low != high");
        let second = if first == low { high } else { low };
        for j in 0..(hi_idx - lo_idx) {
            cells.push(if j % 2 == 0 { first } else { second });
        }
    }
    let end_cell = image_cell(g.end_value(), &h);
    cells[last] = end_cell;
    if last >= 2 && cells[last - 1] == end_cell {
        let before = cells[last - 2];
        cells[last - 1] = [end_cell + 1, end_cell - 1, end_cell + 2]
            .into_iter()
            .find(|&c| c != before)
            .expect("three distinct candidates");
    }

    let f = PlFunction::new(
        points
            .iter()
            .cloned()
            .zip(cells.iter().map(|&c| cell_center(c, &h)))
            .collect(),
    )
    .expect("grid abscissae are valid breakpoints");
    let code = quantitative_code(&f, system, n)?;
    debug_assert_eq!(code.symbols, codec::cells_to_steps(&cells));
    let jump_i = jump as i64;
    let above = code.symbols.iter().filter(|&&s| s > jump_i).count();
    let below = code.symbols.iter().filter(|&&s| s < -jump_i).count();
    let zero_free = code.symbols.iter().all(|&s| s != 0);
    let result = ZigzagResult {
        exceptions: count_exceptions(&code.symbols, amplitude),
        sup_distance: f.sup_distance(g),
        margin: codec::sample_margin(&f, system, n)?,
        f,
        n,
        jump,
        sub: cover.sub,
        above,
        below,
        zero_free,
        count: res.count,
        code,
    };
    let mut failures = Vec::new();
    if !result.counts_exceed_third() {
        failures.push(format!("counts {} / {} not above N/3 = {}/3", result.above, result.below, result.count));
    }
    if result.sup_distance > *eps {
        failures.push(format!("sup distance {}", format_rational(&result.sup_distance)));
    }
    if !result.zero_free {
        failures.push("qualitative code contains 0".to_string());
    }
    if !failures.is_empty() {
        return Err(ForgeError::CertificateFailed {
            level: n,
            reason: failures.join(", "),
        });
    }
    Ok(result)
}

/// Largest jump admitted at resolution `h`: `2(jump + 1)·h < ε`.
pub fn max_jump(eps: &Rational, h: &Rational) -> Option<u64> {
    // amplitude < ε/(2h)
    let bound = eps / (h * int(2));
    let amplitude = ceil_i64(&bound) - 1;
    (amplitude >= 1).then(|| (amplitude - 1) as u64)
}
