use curvecode::codec::{qualitative_code, quantitative_code, stretch_stats, stretched_code, Code};
use curvecode::forge::{forge_frequency_witness, forge_zigzag, verify_forge, ForgeError, ForgeMode, ForgeRequest};
use curvecode::rational::{self, format_rational, int, ratio, to_f64};
use curvecode::sturmian::{
    boundary_discrepancy, convergence_record, cutting_sequence, frequency_convergence, line_stretched_code, LineSpec,
    SturmianError, CONVERGENCE_HEADER,
};
use curvecode::words::{frequency, occurrences, words_to_text, WordError};
use curvecode::{DiscretizationSystem, PlFunction, Rational};
use rayon::prelude::*;

use crate::config::{missing, Settings};
use crate::inputs;
use crate::output::{display, line_plot, OutDir};
use crate::CliError;

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

struct Inputs {
    system: DiscretizationSystem,
    function: PlFunction,
    out: OutDir,
    jobs: usize,
}

fn inputs(s: &Settings, command: &str, params: Vec<String>) -> Result<Inputs, CliError> {
    let system = inputs::system(s.system.as_deref(), s.depth)?;
    let function = inputs::function(s.function.as_deref(), s.seed)?;
    let mut meta = vec![
        format!("command={command}"),
        format!("system={}", s.system.as_deref().unwrap_or("dyadic")),
        format!("depth={}", system.depth()),
        format!("function={}", s.function.as_deref().unwrap_or("x")),
    ];
    if let Some(seed) = s.seed {
        meta.push(format!("seed={seed}"));
    }
    meta.extend(params);
    Ok(Inputs {
        system,
        function,
        out: OutDir::create(s.out_dir(), meta)?,
        jobs: s.jobs()?,
    })
}

fn levels(s: &Settings, system: &DiscretizationSystem) -> Result<Vec<usize>, CliError> {
    let depth = system.depth();
    let levels = match &s.levels {
        Some(l) => l.resolve()?,
        None => (1..=depth).collect(),
    };
    if levels.is_empty() {
        return Err(CliError::Validation("empty level list".into()));
    }
    if let Some(bad) = levels.iter().find(|&&n| n == 0 || n > depth) {
        return Err(CliError::Validation(format!("level {bad} outside 1..={depth}")));
    }
    Ok(levels)
}

/// Runs `work` on every level with at most `jobs` threads; results keep
/// level order.
fn per_level<T: Send>(
    jobs: usize,
    levels: &[usize],
    work: impl Fn(usize) -> Result<T, CliError> + Sync + Send,
) -> Result<Vec<T>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(runtime)?;
    pool.install(|| levels.par_iter().map(|&n| work(n)).collect())
}

fn decimal(r: &Rational) -> String {
    format!("{:.9}", to_f64(r))
}

fn opt_decimal(r: Option<Rational>) -> String {
    r.as_ref().map(decimal).unwrap_or_default()
}

fn mode(s: &Settings) -> Result<ForgeMode, CliError> {
    match s.mode.as_deref().unwrap_or("qualitative") {
        "qualitative" | "q" => Ok(ForgeMode::Qualitative),
        "quantitative" | "Q" => Ok(ForgeMode::Quantitative),
        other => Err(CliError::Validation(format!("unknown mode {other:?}"))),
    }
}

fn word_text(w: &[i64]) -> String {
    w.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

pub fn code(s: &Settings) -> Result<(), CliError> {
    let inp = inputs(s, "code", Vec::new())?;
    let levels = levels(s, &inp.system)?;
    let rows = per_level(inp.jobs, &levels, |n| {
        let h = inp.system.resolutions(n).map_err(runtime)?.min_gap;
        let q = quantitative_code(&inp.function, &inp.system, n).map_err(runtime)?;
        let signs = qualitative_code(&q).map_err(runtime)?;
        let stretched = stretched_code(&q).map_err(runtime)?;
        let st = stretch_stats(&q, &inp.function, &h).map_err(runtime)?;
        for (tag, c) in [("Q", &q), ("q", &signs), ("s", &stretched)] {
            inp.out.raw(&format!("code_n{n}_{tag}.txt"), &c.to_text())?;
        }
        Ok(vec![
            n.to_string(),
            st.count.to_string(),
            format_rational(&h),
            st.ups.to_string(),
            st.downs.to_string(),
            st.variation.to_string(),
            st.zeros.to_string(),
            st.delta_n.to_string(),
            st.net.to_string(),
            opt_decimal(st.up_frequency()),
            opt_decimal(st.up_ratio()),
        ])
    })?;
    let header = ["n", "N_n", "h_n", "u_n", "d_n", "V_n", "zeros", "delta_n", "net", "fr_1_s", "u_over_V"];
    let path = inp.out.csv("code_stats.csv", &header, &rows)?;
    println!("{} levels coded; statistics in {}", rows.len(), display(&path));
    Ok(())
}

fn forge_failure(e: ForgeError) -> CliError {
    match e {
        ForgeError::InvalidRequest(_)
        | ForgeError::JumpTooLarge { .. }
        | ForgeError::SynthesisInfeasible(
            WordError::AlphaOutOfRange { .. }
            | WordError::EmptyPattern
            | WordError::ZeroPrecision
            | WordError::AlphabetViolation { .. },
        ) => CliError::Validation(e.to_string()),
        ForgeError::SystemTooShallow { .. }
        | ForgeError::DoesNotFit { .. }
        | ForgeError::CertificateFailed { .. }
        | ForgeError::SynthesisInfeasible(_) => CliError::Infeasible(e.to_string()),
        ForgeError::Grid(_) | ForgeError::Cover(_) | ForgeError::Codec(_) => CliError::Runtime(e.to_string()),
    }
}

pub fn forge(s: &Settings) -> Result<(), CliError> {
    let w = s.w.clone().ok_or_else(|| missing("w"))?;
    let alpha = s.require_rational("alpha")?;
    let t = s.t.unwrap_or(10);
    let eps = s.rational("eps")?.unwrap_or_else(|| ratio(1, 10));
    let mode = mode(s)?;
    let params = vec![
        format!("w={}", word_text(&w)),
        format!("alpha={}", format_rational(&alpha)),
        format!("t={t}"),
        format!("eps={}", format_rational(&eps)),
        format!("mode={mode:?}"),
    ];
    let inp = inputs(s, "forge", params)?;
    let req = ForgeRequest::new(
        inp.function.clone(),
        eps,
        w,
        alpha,
        t,
        mode,
        inp.system.clone(),
        s.min_level.unwrap_or(1),
    )
    .map_err(forge_failure)?;
    let result = forge_frequency_witness(&req).map_err(forge_failure)?;
    let again = verify_forge(&req, &result).map_err(forge_failure)?;
    if again != result.certificate {
        return Err(CliError::Runtime("independent re-verification disagrees with the forge".into()));
    }
    inp.out.raw("forge_witness.txt", &result.f.to_text())?;
    inp.out.raw("forge_code.txt", &result.code.to_text())?;
    inp.out.raw("forge_segments.txt", &words_to_text(&result.segments))?;
    let cert = inp.out.record("forge_certificate.txt", &result.certificate.to_text())?;
    println!(
        "level {}: fr = {} (|fr − α| = {}), sup distance {}; certificate in {}",
        result.n,
        format_rational(&result.realized_freq),
        format_rational(&result.certificate.frequency_deviation),
        format_rational(&result.certificate.sup_distance),
        display(&cert)
    );
    if result.certificate.all_true() {
        Ok(())
    } else {
        Err(CliError::Infeasible("certificate not fully true".into()))
    }
}

pub fn zigzag(s: &Settings) -> Result<(), CliError> {
    let jump = s.jump.ok_or_else(|| missing("jump"))?;
    let eps = s.rational("eps")?.unwrap_or_else(|| ratio(1, 10));
    let params = vec![format!("jump={jump}"), format!("eps={}", format_rational(&eps))];
    let inp = inputs(s, "zigzag", params)?;
    let n = s.level.unwrap_or(inp.system.depth());
    let z = forge_zigzag(&inp.function, &eps, jump, &inp.system, n).map_err(forge_failure)?;
    let h = inp.system.resolutions(n).map_err(runtime)?.min_gap;
    let st = stretch_stats(&z.code, &z.f, &h).map_err(runtime)?;
    inp.out.raw("zigzag_witness.txt", &z.f.to_text())?;
    inp.out.raw("zigzag_code.txt", &z.code.to_text())?;
    let header = [
        "n", "N_n", "jump", "above", "below", "exceptions", "anchors", "zero_free", "u_n", "d_n", "V_n", "u_over_V",
        "fr_1_s", "sup_distance",
    ];
    let row = vec![
        n.to_string(),
        z.count.to_string(),
        jump.to_string(),
        z.above.to_string(),
        z.below.to_string(),
        z.exceptions.to_string(),
        z.sub.anchor_count().to_string(),
        z.zero_free.to_string(),
        st.ups.to_string(),
        st.downs.to_string(),
        st.variation.to_string(),
        opt_decimal(st.up_ratio()),
        opt_decimal(st.up_frequency()),
        format_rational(&z.sup_distance),
    ];
    let path = inp.out.csv("zigzag_stats.csv", &header, &[row])?;
    println!(
        "level {n}: {} above +{jump}, {} below −{jump} of N = {}; statistics in {}",
        z.above,
        z.below,
        z.count,
        display(&path)
    );
    Ok(())
}

fn sturmian_failure(e: SturmianError) -> CliError {
    match e {
        SturmianError::NegativeSlope(_) | SturmianError::LatticeHit { .. } | SturmianError::NotUniform { .. } => {
            CliError::Validation(e.to_string())
        }
        _ => CliError::Runtime(e.to_string()),
    }
}

/// Slope and intercept; the default intercept `1/(2q)` for `β = p/q` keeps
/// the line off the lattice.
fn line(s: &Settings) -> Result<(Rational, Rational), CliError> {
    let beta = s.require_rational("beta")?;
    if beta < int(0) {
        return Err(CliError::Validation("beta must be non-negative".into()));
    }
    let intercept = match s.rational("intercept")? {
        Some(c) => c,
        None => Rational::new(1.into(), beta.denom() * 2),
    };
    Ok((beta, intercept))
}

pub fn sturmian(s: &Settings) -> Result<(), CliError> {
    let (beta, intercept) = line(s)?;
    let params = vec![
        format!("beta={}", format_rational(&beta)),
        format!("intercept={}", format_rational(&intercept)),
    ];
    let inp = inputs(s, "sturmian", params)?;
    let levels = levels(s, &inp.system)?;
    let rows = per_level(inp.jobs, &levels, |n| {
        let units = inp.system.resolutions(n).map_err(runtime)?.count as u64 - 1;
        let spec = LineSpec::new(beta.clone(), intercept.clone(), units).map_err(sturmian_failure)?;
        let code = line_stretched_code(&spec, &inp.system, n).map_err(sturmian_failure)?;
        let cut = cutting_sequence(&spec, code.len()).map_err(sturmian_failure)?;
        let ones = code.symbols.iter().filter(|&&x| x == 1).count();
        let d = boundary_discrepancy(&code.symbols, &cut);
        Ok((d, vec![n.to_string(), units.to_string(), code.len().to_string(), ones.to_string(), d.to_string()]))
    })?;
    let worst = rows.iter().map(|r| r.0).max().unwrap_or(0);
    let table: Vec<Vec<String>> = rows.into_iter().map(|r| r.1).collect();
    let path = inp.out.csv("sturmian_check.csv", &["n", "units", "length", "ones", "discrepancy"], &table)?;
    println!("largest boundary discrepancy {worst}; table in {}", display(&path));
    if worst > 2 {
        return Err(CliError::Runtime(format!("discrepancy {worst} exceeds 2")));
    }
    Ok(())
}

pub fn sweep(s: &Settings) -> Result<(), CliError> {
    match s.kind.as_deref().unwrap_or("freq") {
        "freq" | "freq-sweep" => freq_sweep(s),
        "sturmian" => sturmian_sweep(s),
        other => Err(CliError::Validation(format!("unknown sweep kind {other:?}"))),
    }
}

fn freq_sweep(s: &Settings) -> Result<(), CliError> {
    let w = s.w.clone().ok_or_else(|| missing("w"))?;
    let alpha = s.rational("alpha")?;
    let mode = mode(s)?;
    let mut params = vec![format!("kind=freq"), format!("w={}", word_text(&w)), format!("mode={mode:?}")];
    if let Some(a) = &alpha {
        params.push(format!("alpha={}", format_rational(a)));
    }
    let inp = inputs(s, "sweep", params)?;
    let levels = levels(s, &inp.system)?;
    let rows = per_level(inp.jobs, &levels, |n| {
        let q = quantitative_code(&inp.function, &inp.system, n).map_err(runtime)?;
        let code: Code = match mode {
            ForgeMode::Quantitative => q,
            ForgeMode::Qualitative => qualitative_code(&q).map_err(runtime)?,
        };
        let oc = occurrences(&w, &code.symbols);
        let fr = frequency(&w, &code.symbols).map_err(|e| CliError::Validation(e.to_string()))?;
        let dev = alpha.as_ref().map(|a| rational::abs(&(&fr - a)));
        Ok((
            (n as f64, to_f64(&fr)),
            vec![
                n.to_string(),
                (code.len() + 1).to_string(),
                oc.to_string(),
                format_rational(&fr),
                decimal(&fr),
                opt_decimal(dev),
            ],
        ))
    })?;
    let (points, table): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let header = ["n", "N_n", "occurrences", "fr_exact", "fr", "abs_dev"];
    let path = inp.out.csv("freq_sweep.csv", &header, &table)?;
    let title = format!("fr({}) per level", word_text(&w));
    inp.out.raw("freq_sweep.svg", &line_plot(&title, "level n", "frequency", &points))?;
    println!("{} levels; table in {}", table.len(), display(&path));
    Ok(())
}

fn sturmian_sweep(s: &Settings) -> Result<(), CliError> {
    let (beta, intercept) = line(s)?;
    let params = vec![
        "kind=sturmian".to_string(),
        format!("beta={}", format_rational(&beta)),
        format!("intercept={}", format_rational(&intercept)),
    ];
    let inp = inputs(s, "sweep", params)?;
    let levels = levels(s, &inp.system)?;
    let rows = per_level(inp.jobs, &levels, |n| {
        let units = inp.system.resolutions(n).map_err(runtime)?.count as u64 - 1;
        let spec = LineSpec::new(beta.clone(), intercept.clone(), units).map_err(sturmian_failure)?;
        let row = frequency_convergence(&spec, &inp.system, &[n]).map_err(sturmian_failure)?.remove(0);
        Ok(row)
    })?;
    let table: Vec<Vec<String>> = rows.iter().map(convergence_record).collect();
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.n as f64, r.crossing_ratio.as_ref().map_or(f64::NAN, to_f64)))
        .collect();
    let path = inp.out.csv("sturmian_sweep.csv", &CONVERGENCE_HEADER, &table)?;
    let limit = &beta / (int(1) + &beta);
    let title = format!("crossing ratio, limit {}", format_rational(&limit));
    inp.out.raw("sturmian_sweep.svg", &line_plot(&title, "level n", "u / (V + N − 1)", &points))?;
    println!("{} levels; table in {}", table.len(), display(&path));
    Ok(())
}
