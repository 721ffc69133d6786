//! Statistics of finite words over integer alphabets.
//!
//! Occurrences are counted with overlaps (`oc(w, v)`), frequencies are
//! `oc(w, v) / |v|` as exact rationals, and the minimal periodic factor
//! length `p(w)` is the least shift at which `w` can occur again.

use std::ops::Range;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{self, int, Rational};

/// Symbol set a synthesized word may draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alphabet {
    /// `{−1, 0, 1}`: qualitative and stretched codes.
    Ternary,
    /// All of `ℤ`: quantitative codes.
    Integers,
}

impl Alphabet {
    pub fn contains(self, symbol: i64) -> bool {
        match self {
            Alphabet::Ternary => (-1..=1).contains(&symbol),
            Alphabet::Integers => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("pattern word is empty")]
    EmptyPattern,
    #[error("text word is empty")]
    EmptyText,
    #[error("symbol {symbol} is outside the alphabet")]
    AlphabetViolation { symbol: i64 },
    #[error("target frequency {alpha} outside [0, {max}]")]
    AlphaOutOfRange { alpha: Rational, max: Rational },
    #[error("precision t must be positive")]
    ZeroPrecision,
    #[error("no word of length {length} is within tolerance (smallest feasible length: {min_feasible:?})")]
    Infeasible {
        length: usize,
        min_feasible: Option<usize>,
    },
    #[error("{segments} segments but {bridges} bridges")]
    BridgeCount { segments: usize, bridges: usize },
    #[error("segment {index} deviates from the target by {deviation}")]
    SegmentOutOfTolerance { index: usize, deviation: Rational },
    #[error("assembly hypothesis fails: (K-1)|w|/|v| = {lhs} is not below {rhs}")]
    HypothesisFails { lhs: Rational, rhs: Rational },
    #[error("recounted deviation {deviation} exceeds the guarantee {bound}")]
    GuaranteeViolated { deviation: Rational, bound: Rational },
}

/// A frequency `alpha ∈ [0, 1/p(w)]` to be met within `1/t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTarget {
    alpha: Rational,
    t: u32,
}

impl FrequencyTarget {
    pub fn new(w: &[i64], alpha: Rational, t: u32) -> Result<Self, WordError> {
        if w.is_empty() {
            return Err(WordError::EmptyPattern);
        }
        if t == 0 {
            return Err(WordError::ZeroPrecision);
        }
        let max = rational::ratio(1, min_periodic_factor_length(w) as i64);
        if alpha < Rational::zero() || alpha > max {
            return Err(WordError::AlphaOutOfRange { alpha, max });
        }
        Ok(Self { alpha, t })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// `1/t`.
    pub fn tolerance(&self) -> Rational {
        rational::ratio(1, self.t as i64)
    }

    /// `1/(3t)`, the per-segment tolerance.
    pub fn segment_tolerance(&self) -> Rational {
        rational::ratio(1, 3 * self.t as i64)
    }
}

/// Failure function: `table[i]` is the length of the longest proper border
/// of `w[..=i]`.
pub fn border_table(w: &[i64]) -> Vec<usize> {
    let mut table = vec![0; w.len()];
    let mut k = 0;
    for i in 1..w.len() {
        while k > 0 && w[i] != w[k] {
            k = table[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        table[i] = k;
    }
    table
}

/// `p(w) = min{|u| : oc(w, wu) = 2}`, i.e. the smallest period of `w`.
///
/// For the empty word the definition gives 1.
pub fn min_periodic_factor_length(w: &[i64]) -> usize {
    match border_table(w).last() {
        Some(&border) => w.len() - border,
        None => 1,
    }
}

/// Height `H(w) = max |w_i|` (0 for the empty word).
pub fn height(w: &[i64]) -> i64 {
    w.iter().map(|s| s.abs()).max().unwrap_or(0)
}

fn kmp_count(w: &[i64], table: &[usize], text: &[i64]) -> usize {
    let mut count = 0;
    let mut q = 0;
    for &c in text {
        while q > 0 && (q == w.len() || w[q] != c) {
            q = table[q - 1];
        }
        if w[q] == c {
            q += 1;
        }
        if q == w.len() {
            count += 1;
        }
    }
    count
}

/// `oc(w, v)`: overlapping occurrences of `w` in `v`. Zero when `|w| > |v|`.
pub fn occurrences(w: &[i64], v: &[i64]) -> usize {
    if w.is_empty() {
        return v.len() + 1;
    }
    if w.len() > v.len() {
        return 0;
    }
    kmp_count(w, &border_table(w), v)
}

/// Occurrences of `w` in `v` whose start position lies in `starts`.
///
/// Counts over disjoint start ranges add up to [`occurrences`], so a long
/// scan can be split into chunks (each reading `|w| − 1` symbols past its
/// end) and accumulated in any order.
pub fn occurrences_in(w: &[i64], v: &[i64], starts: Range<usize>) -> usize {
    if w.is_empty() {
        return (starts.start.min(v.len() + 1)..starts.end.min(v.len() + 1)).len();
    }
    if w.len() > v.len() {
        return 0;
    }
    let last_start = v.len() - w.len();
    if starts.start > last_start {
        return 0;
    }
    let end = starts.end.min(last_start + 1);
    if starts.start >= end {
        return 0;
    }
    kmp_count(w, &border_table(w), &v[starts.start..end + w.len() - 1])
}

/// `fr(w, v) = oc(w, v) / |v|`.
pub fn frequency(w: &[i64], v: &[i64]) -> Result<Rational, WordError> {
    if v.is_empty() {
        return Err(WordError::EmptyText);
    }
    Ok(rational::ratio(occurrences(w, v) as i64, v.len() as i64))
}

fn check_alphabet(w: &[i64], alphabet: Alphabet) -> Result<(), WordError> {
    match w.iter().find(|&&s| !alphabet.contains(s)) {
        Some(&symbol) => Err(WordError::AlphabetViolation { symbol }),
        None => Ok(()),
    }
}

/// Filler symbols, best first: symbols absent from `w` make
/// boundary-spanning occurrences impossible.
fn blockers(w: &[i64], alphabet: Alphabet) -> Vec<i64> {
    match alphabet {
        Alphabet::Ternary => {
            let (absent, present): (Vec<i64>, Vec<i64>) = [0, -1, 1].into_iter().partition(|s| !w.contains(s));
            absent.into_iter().chain(present).collect()
        }
        Alphabet::Integers => {
            // smallest magnitude first keeps the excursion of the word low
            let b = (0..)
                .flat_map(|k: i64| [k, -k])
                .find(|s| !w.contains(s))
                .expect("w is finite");
            vec![b]
        }
    }
}

/// Periodic run carrying `m` occurrences of `w` at spacing `p(w)`, then
/// `blocker` up to length `len`.
fn packed_word(w: &[i64], period: usize, m: usize, blocker: i64, len: usize) -> Vec<i64> {
    let run = if m == 0 { 0 } else { w.len() + (m - 1) * period };
    debug_assert!(run <= len);
    (0..len)
        .map(|i| if i < run { w[i % period] } else { blocker })
        .collect()
}

fn max_packed(w: &[i64], period: usize, len: usize) -> usize {
    if len < w.len() {
        0
    } else {
        (len - w.len()) / period + 1
    }
}

fn closest_count(alpha: &Rational, len: usize, max: usize) -> usize {
    let target = alpha * int(len as i64);
    let rounded = rational::floor_i64(&(target + rational::ratio(1, 2))).max(0) as usize;
    rounded.min(max)
}

/// Local search over the number of packed occurrences, nearest to
/// `alpha·len` first. With a tolerance, returns the first word within it;
/// without, the closest word examined.
fn search(w: &[i64], len: usize, alpha: &Rational, tolerance: Option<&Rational>, alphabet: Alphabet) -> Option<Vec<i64>> {
    if len == 0 {
        return None;
    }
    let period = min_periodic_factor_length(w);
    let max = max_packed(w, period, len);
    let start = closest_count(alpha, len, max);
    let window = if tolerance.is_some() { max } else { 8.max(w.len()).min(max) };
    let order = std::iter::once(start).chain((1..=window).flat_map(|d| {
        let up = (start + d <= max).then_some(start + d);
        let down = start.checked_sub(d);
        up.into_iter().chain(down)
    }));
    let order: Vec<usize> = order.collect();
    let len_r = int(len as i64);
    let mut best: Option<(Rational, Vec<i64>)> = None;
    for blocker in blockers(w, alphabet) {
        for &m in &order {
            let candidate = packed_word(w, period, m, blocker, len);
            let fr = rational::ratio(occurrences(w, &candidate) as i64, 1) / &len_r;
            let dev = (fr - alpha).abs();
            if let Some(tol) = tolerance {
                if dev <= *tol {
                    return Some(candidate);
                }
            } else if best.as_ref().is_none_or(|(b, _)| dev < *b) {
                best = Some((dev, candidate));
            }
        }
        if tolerance.is_none() && !w.contains(&blocker) {
            break;
        }
    }
    best.map(|(_, word)| word)
}

/// Smallest length above `len` at which packed counts can reach the
/// tolerance band (assuming a blocker outside `w`).
fn feasibility_hint(w: &[i64], len: usize, alpha: &Rational, tolerance: &Rational) -> Option<usize> {
    let period = min_periodic_factor_length(w);
    let cap = len + 8 * (period + w.len()) * (rational::ceil_i64(&tolerance.recip()) as usize + 1);
    (len + 1..=cap).find(|&l| {
        let c = closest_count(alpha, l, max_packed(w, period, l));
        (rational::ratio(c as i64, l as i64) - alpha).abs() <= *tolerance
    })
}

/// A word of length `len` with `|fr(w, v) − alpha| ≤ 1/(3t)`, verified by
/// recount before it is returned.
///
/// Occurrences are packed at the maximal density `1/p(w)` by repeating the
/// first `p(w)` symbols of `w`, and the rest is filled with a blocker
/// symbol. The number of packed occurrences is repaired one period at a
/// time until the recount lands in the tolerance band.
pub fn synthesize_word(w: &[i64], len: usize, target: &FrequencyTarget, alphabet: Alphabet) -> Result<Vec<i64>, WordError> {
    if w.is_empty() {
        return Err(WordError::EmptyPattern);
    }
    check_alphabet(w, alphabet)?;
    let tol = target.segment_tolerance();
    search(w, len, target.alpha(), Some(&tol), alphabet).ok_or_else(|| WordError::Infeasible {
        length: len,
        min_feasible: feasibility_hint(w, len, target.alpha(), &tol),
    })
}

/// Best-effort variant of [`synthesize_word`]: the closest frequency the
/// packing reaches at this length, without a tolerance guarantee. Empty
/// for `len == 0`.
pub fn synthesize_closest(w: &[i64], len: usize, alpha: &Rational, alphabet: Alphabet) -> Result<Vec<i64>, WordError> {
    if w.is_empty() {
        return Err(WordError::EmptyPattern);
    }
    check_alphabet(w, alphabet)?;
    Ok(search(w, len, alpha, None, alphabet).unwrap_or_default())
}

/// `v = v_1 b_1 v_2 b_2 ⋯ v_{K−1} b_{K−1}`.
///
/// Panics if the slices differ in length.
pub fn assemble(segments: &[Vec<i64>], bridges: &[i64]) -> Vec<i64> {
    assert_eq!(segments.len(), bridges.len(), "one bridge per segment");
    let total = segments.iter().map(|s| s.len() + 1).sum();
    let mut v = Vec::with_capacity(total);
    for (segment, &bridge) in segments.iter().zip(bridges) {
        v.extend_from_slice(segment);
        v.push(bridge);
    }
    v
}

/// Every quantity in the chain of inequalities behind the assembly bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssemblyReport {
    /// `K − 1`.
    pub segments: usize,
    /// `|v|`.
    pub total_len: usize,
    /// `S = Σ |v_k|`.
    pub segment_len: usize,
    /// `Σ p_k = Σ oc(w, v_k)`.
    pub segment_occurrences: usize,
    /// `(K−1)|w| / |v|`.
    pub hypothesis_lhs: Rational,
    /// `1/(3t)`.
    pub hypothesis_rhs: Rational,
    /// `Σ p_k / |v|`, lower end of the sandwich on `fr(w, v)`.
    pub lower: Rational,
    /// `Σ p_k / |v| + (K−1)|w| / |v|`, upper end.
    pub upper: Rational,
    /// `Σ p_k / S`, the length-weighted mean of the segment frequencies.
    pub weighted_mean: Option<Rational>,
    /// `Σ p_k (K−1) / (S² + (K−1) S)`; `lower = weighted_mean − dilution`.
    pub dilution: Option<Rational>,
    /// `fr(w, v)` by direct recount.
    pub recounted: Rational,
    pub deviation: Rational,
    /// `1/t`.
    pub bound: Rational,
}

impl AssemblyReport {
    pub fn sandwich_holds(&self) -> bool {
        self.lower <= self.recounted && self.recounted <= self.upper
    }

    /// `Σp/(S + K − 1) = Σp/S − Σp(K−1)/(S² + (K−1)S)`.
    pub fn dilution_identity_holds(&self) -> bool {
        match (&self.weighted_mean, &self.dilution) {
            (Some(mean), Some(dil)) => mean - dil == self.lower,
            _ => self.segment_len == 0,
        }
    }
}

/// Checks `(K−1)|w|/|v| < 1/(3t)` and, when it holds, that the assembled
/// word's recounted frequency is within `1/t` of `alpha`.
///
/// Each non-empty segment must already be within `1/(3t)` of `alpha`.
pub fn assembly_bound_check(
    w: &[i64],
    segments: &[Vec<i64>],
    bridges: &[i64],
    alpha: &Rational,
    t: u32,
) -> Result<AssemblyReport, WordError> {
    if w.is_empty() {
        return Err(WordError::EmptyPattern);
    }
    if t == 0 {
        return Err(WordError::ZeroPrecision);
    }
    if segments.len() != bridges.len() {
        return Err(WordError::BridgeCount {
            segments: segments.len(),
            bridges: bridges.len(),
        });
    }
    let seg_tol = rational::ratio(1, 3 * t as i64);
    let mut segment_occurrences = 0;
    for (index, segment) in segments.iter().enumerate() {
        if segment.is_empty() {
            continue;
        }
        let p = occurrences(w, segment);
        let deviation = (rational::ratio(p as i64, segment.len() as i64) - alpha).abs();
        if deviation > seg_tol {
            return Err(WordError::SegmentOutOfTolerance { index, deviation });
        }
        segment_occurrences += p;
    }
    let v = assemble(segments, bridges);
    if v.is_empty() {
        return Err(WordError::EmptyText);
    }
    let k1 = segments.len() as i64;
    let total = int(v.len() as i64);
    let hypothesis_lhs = int(k1 * w.len() as i64) / &total;
    if hypothesis_lhs >= seg_tol {
        return Err(WordError::HypothesisFails {
            lhs: hypothesis_lhs,
            rhs: seg_tol,
        });
    }
    let segment_len = v.len() - segments.len();
    let sum_p = int(segment_occurrences as i64);
    let lower = &sum_p / &total;
    let upper = &lower + &hypothesis_lhs;
    let (weighted_mean, dilution) = if segment_len > 0 {
        let s = int(segment_len as i64);
        let mean = &sum_p / &s;
        let dil = &sum_p * int(k1) / (&s * &s + int(k1) * &s);
        (Some(mean), Some(dil))
    } else {
        (None, None)
    };
    let recounted = rational::ratio(occurrences(w, &v) as i64, 1) / &total;
    let deviation = (&recounted - alpha).abs();
    let bound = rational::ratio(1, t as i64);
    if deviation > bound {
        return Err(WordError::GuaranteeViolated { deviation, bound });
    }
    Ok(AssemblyReport {
        segments: segments.len(),
        total_len: v.len(),
        segment_len,
        segment_occurrences,
        hypothesis_lhs,
        hypothesis_rhs: seg_tol,
        lower,
        upper,
        weighted_mean,
        dilution,
        recounted,
        deviation,
        bound,
    })
}

/// Space-separated symbols, one word per line.
pub fn words_to_text(words: &[Vec<i64>]) -> String {
    words
        .iter()
        .map(|w| {
            let syms: Vec<String> = w.iter().map(i64::to_string).collect();
            syms.join(" ") + "\n"
        })
        .collect()
}

pub fn parse_words(text: &str) -> Result<Vec<Vec<i64>>, std::num::ParseIntError> {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .map(|l| l.split_whitespace().map(str::parse).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn naive_occurrences(w: &[i64], v: &[i64]) -> usize {
        if w.len() > v.len() {
            return 0;
        }
        (0..=v.len() - w.len()).filter(|&j| &v[j..j + w.len()] == w).count()
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(occurrences(&[0, 1], &[0, 1, 0, 1]), 2);
        assert_eq!(occurrences(&[1, 1], &[1, 1, 1, 1]), 3);
        assert_eq!(naive_occurrences(&[0, 1, 0], &[0, 1, 0, 1, 0]), 2);
        assert_eq!(occurrences(&[0, 1, 0], &[0, 1, 0, 1, 0]), 2);
        assert_eq!(occurrences(&[1, 2, 3], &[1, 2]), 0);
        assert_eq!(occurrences(&[], &[4, 4]), 3);
    }

    #[test]
    fn frequency_examples() {
        assert_eq!(frequency(&[1], &[1, 0, 1, 0]).unwrap(), ratio(1, 2));
        assert_eq!(frequency(&[1, 1], &[1, 1, 1, 1]).unwrap(), ratio(3, 4));
        let w = [3, -1, 4, 1];
        assert_eq!(frequency(&w, &w).unwrap(), ratio(1, 4));
        assert_eq!(frequency(&[1], &[]), Err(WordError::EmptyText));
    }

    #[test]
    fn period_examples() {
        assert_eq!(min_periodic_factor_length(&[0, 1, 0]), 2);
        assert_eq!(min_periodic_factor_length(&[7]), 1);
        assert_eq!(min_periodic_factor_length(&[1, 1, 1]), 1);
        assert_eq!(min_periodic_factor_length(&[1, -1]), 2);
        assert_eq!(min_periodic_factor_length(&[0, 0, 1, 0, 0]), 3);
        assert_eq!(min_periodic_factor_length(&[]), 1);
    }

    #[test]
    fn period_matches_enumerated_extensions() {
        // oc(w, wu) = 2 for the smallest |u|, enumerating every u over a
        // four-letter alphabet (one letter absent from w).
        fn brute(w: &[i64]) -> usize {
            for k in 1.. {
                let mut u = vec![0i64; k];
                loop {
                    let wu: Vec<i64> = w.iter().chain(u.iter()).map(|&s| s - 1).collect();
                    let shifted: Vec<i64> = w.iter().map(|&s| s - 1).collect();
                    if naive_occurrences(&shifted, &wu) == 2 {
                        return k;
                    }
                    let mut i = 0;
                    while i < k && u[i] == 3 {
                        u[i] = 0;
                        i += 1;
                    }
                    if i == k {
                        break;
                    }
                    u[i] += 1;
                }
            }
            unreachable!()
        }
        for len in 1..=5u32 {
            for code in 0..3usize.pow(len) {
                let w: Vec<i64> = (0..len).map(|i| (code / 3usize.pow(i) % 3) as i64).collect();
                assert_eq!(min_periodic_factor_length(&w), brute(&w), "{w:?}");
            }
        }
    }

    #[test]
    fn chunked_counts_add_up() {
        let v: Vec<i64> = (0..200).map(|i| (i * 7 % 5 % 2) as i64).collect();
        let w = [1, 0, 1];
        let total = occurrences(&w, &v);
        for chunk in [1, 3, 17, 64, 500] {
            let sum: usize = (0..v.len()).step_by(chunk).map(|s| occurrences_in(&w, &v, s..s + chunk)).sum();
            assert_eq!(sum, total, "chunk {chunk}");
        }
        assert_eq!(occurrences_in(&w, &v, 300..400), 0);
    }

    #[test]
    fn synthesis_examples() {
        let t = FrequencyTarget::new(&[1], ratio(1, 2), 10).unwrap();
        let v = synthesize_word(&[1], 10, &t, Alphabet::Ternary).unwrap();
        assert_eq!(v.len(), 10);
        assert_eq!(frequency(&[1], &v).unwrap(), ratio(1, 2));

        let zero = FrequencyTarget::new(&[1], int(0), 10).unwrap();
        let v = synthesize_word(&[1], 25, &zero, Alphabet::Ternary).unwrap();
        assert_eq!(occurrences(&[1], &v), 0);

        let w = [0, 1, 0];
        let half = FrequencyTarget::new(&w, ratio(1, 2), 5).unwrap();
        for m in [7usize, 8, 20] {
            let v = synthesize_word(&w, 2 * m + 1, &half, Alphabet::Ternary).unwrap();
            let expect: Vec<i64> = (0..2 * m + 1).map(|i| (i % 2) as i64).collect();
            assert_eq!(v, expect);
            assert_eq!(frequency(&w, &v).unwrap(), ratio(m as i64, 2 * m as i64 + 1));
        }
    }

    #[test]
    fn synthesis_reports_infeasible_lengths() {
        let w = [0, 1, 0];
        let half = FrequencyTarget::new(&w, ratio(1, 2), 10).unwrap();
        match synthesize_word(&w, 4, &half, Alphabet::Ternary) {
            Err(WordError::Infeasible { length: 4, min_feasible: Some(l) }) => {
                assert!(synthesize_word(&w, l, &half, Alphabet::Ternary).is_ok());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            synthesize_word(&[2], 5, &FrequencyTarget::new(&[2], int(1), 3).unwrap(), Alphabet::Ternary),
            Err(WordError::AlphabetViolation { symbol: 2 })
        );
    }

    #[test]
    fn synthesis_when_every_ternary_symbol_is_in_w() {
        let w = [1, -1, 0];
        let alpha = ratio(1, 5);
        let target = FrequencyTarget::new(&w, alpha.clone(), 4).unwrap();
        let v = synthesize_word(&w, 60, &target, Alphabet::Ternary).unwrap();
        let dev = (frequency(&w, &v).unwrap() - alpha).abs();
        assert!(dev <= target.segment_tolerance());
    }

    #[test]
    fn integer_blocker_has_small_magnitude() {
        let w = [3, -3];
        let target = FrequencyTarget::new(&w, int(0), 2).unwrap();
        let v = synthesize_word(&w, 12, &target, Alphabet::Integers).unwrap();
        assert!(v.iter().all(|&s| s == 0));
        assert_eq!(blockers(&[0, 1, -1], Alphabet::Integers), vec![2]);
    }

    #[test]
    fn target_validation() {
        assert!(matches!(
            FrequencyTarget::new(&[0, 1, 0], ratio(3, 5), 1),
            Err(WordError::AlphaOutOfRange { .. })
        ));
        assert!(FrequencyTarget::new(&[0, 1, 0], ratio(1, 2), 1).is_ok());
        assert_eq!(FrequencyTarget::new(&[1], int(0), 0), Err(WordError::ZeroPrecision));
        assert_eq!(FrequencyTarget::new(&[], int(0), 1), Err(WordError::EmptyPattern));
    }

    #[test]
    fn assemble_examples() {
        assert_eq!(assemble(&[vec![1, 1], vec![-1]], &[0, 0]), vec![1, 1, 0, -1, 0]);
        assert_eq!(assemble(&[vec![5]], &[2]), vec![5, 2]);
        assert!(assemble(&[], &[]).is_empty());
    }

    #[test]
    fn assembly_bound_on_constructed_word() {
        // K − 1 = 4 segments, |w| = 3, |v| = 1000, t = 25
        let w = [0, 1, 0];
        let alpha = ratio(1, 4);
        let target = FrequencyTarget::new(&w, alpha.clone(), 25).unwrap();
        let segments: Vec<Vec<i64>> = (0..4)
            .map(|_| synthesize_word(&w, 249, &target, Alphabet::Ternary).unwrap())
            .collect();
        let report = assembly_bound_check(&w, &segments, &[1, 1, 1, 1], &alpha, 25).unwrap();
        assert_eq!(report.total_len, 1000);
        assert_eq!(report.hypothesis_lhs, ratio(12, 1000));
        assert!(report.hypothesis_lhs < report.hypothesis_rhs);
        assert!(report.deviation <= ratio(1, 25));
        assert!(report.sandwich_holds());
        assert!(report.dilution_identity_holds());
    }

    #[test]
    fn assembly_single_segment_and_failure() {
        let w = [1];
        let alpha = ratio(1, 2);
        let seg: Vec<i64> = (0..40).map(|i| (i % 2) as i64).collect();
        let report = assembly_bound_check(&w, std::slice::from_ref(&seg), &[0], &alpha, 10).unwrap();
        assert_eq!(report.hypothesis_lhs, ratio(1, 41));
        let short = vec![1, 0];
        assert!(matches!(
            assembly_bound_check(&w, &[short], &[0], &alpha, 10),
            Err(WordError::HypothesisFails { .. })
        ));
        assert!(matches!(
            assembly_bound_check(&w, &[vec![1, 1, 1]], &[0], &alpha, 10),
            Err(WordError::SegmentOutOfTolerance { index: 0, .. })
        ));
        assert!(matches!(
            assembly_bound_check(&w, &[seg], &[], &alpha, 10),
            Err(WordError::BridgeCount { .. })
        ));
    }

    #[test]
    fn word_text_round_trip() {
        let words = vec![vec![1, -1, 0], vec![], vec![12]];
        assert_eq!(parse_words(&words_to_text(&words)).unwrap(), words);
        assert_eq!(height(&[3, -5, 2]), 5);
    }
}
