//! System and function specifications.

use std::path::Path;

use curvecode::rational::{int, parse_rational, ratio};
use curvecode::{DiscretizationSystem, PlFunction, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliError;

pub const DEFAULT_DEPTH: usize = 10;

/// `uniform:<base>`, `dyadic`, or a level file.
pub fn system(spec: Option<&str>, depth: Option<usize>) -> Result<DiscretizationSystem, CliError> {
    let spec = spec.unwrap_or("dyadic");
    let depth = depth.unwrap_or(DEFAULT_DEPTH);
    let uniform = |base: u32| DiscretizationSystem::uniform(base, depth).map_err(|e| CliError::Validation(e.to_string()));
    if spec == "dyadic" {
        return uniform(2);
    }
    if let Some(base) = spec.strip_prefix("uniform:") {
        let base = base
            .parse()
            .map_err(|_| CliError::Validation(format!("bad base in {spec:?}")))?;
        return uniform(base);
    }
    let text = read(Path::new(spec))?;
    DiscretizationSystem::parse_explicit(&text).map_err(|e| CliError::Validation(format!("{spec}: {e}")))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn rationals(args: &str, count: usize, spec: &str) -> Result<Vec<Rational>, CliError> {
    let values: Vec<Rational> = args
        .split(',')
        .map(|a| parse_rational(a.trim()))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Validation(format!("{spec}: {e}")))?;
    if values.len() != count {
        return Err(CliError::Validation(format!("{spec}: expected {count} parameters")));
    }
    Ok(values)
}

/// Builtins `x`, `const:c`, `line:s,c`, `zigzag:k,a`, `random:k`, or a
/// breakpoint file.
pub fn function(spec: Option<&str>, seed: Option<u64>) -> Result<PlFunction, CliError> {
    let spec = spec.unwrap_or("x");
    let invalid = |e: curvecode::codec::PlError| CliError::Validation(format!("{spec}: {e}"));
    if spec == "x" || spec == "identity" {
        return Ok(PlFunction::linear(int(1), int(0)));
    }
    if let Some(args) = spec.strip_prefix("const:") {
        let c = rationals(args, 1, spec)?;
        return Ok(PlFunction::constant(c[0].clone()));
    }
    if let Some(args) = spec.strip_prefix("line:") {
        let v = rationals(args, 2, spec)?;
        return Ok(PlFunction::linear(v[0].clone(), v[1].clone()));
    }
    if let Some(args) = spec.strip_prefix("zigzag:") {
        let (teeth, amp) = args
            .split_once(',')
            .ok_or_else(|| CliError::Validation(format!("{spec}: expected zigzag:teeth,amplitude")))?;
        let teeth: usize = teeth
            .trim()
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| CliError::Validation(format!("{spec}: bad tooth count")))?;
        let amp = rationals(amp, 1, spec)?;
        return Ok(PlFunction::zigzag(teeth, amp[0].clone()));
    }
    if let Some(args) = spec.strip_prefix("random:") {
        let inner: usize = args
            .trim()
            .parse()
            .map_err(|_| CliError::Validation(format!("{spec}: bad breakpoint count")))?;
        return Ok(random_function(inner, seed.unwrap_or(0)));
    }
    PlFunction::parse(&read(Path::new(spec))?).map_err(invalid)
}

/// `inner` interior breakpoints on the `1/100` grid, values in `[−1, 1]`
/// on the `1/100` grid.
fn random_function(inner: usize, seed: u64) -> PlFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs: Vec<i64> = (0..inner).map(|_| rng.gen_range(1..100)).collect();
    xs.sort_unstable();
    xs.dedup();
    let mut value = || ratio(rng.gen_range(-100..=100), 100);
    let mut points = vec![(int(0), value())];
    points.extend(xs.into_iter().map(|x| (ratio(x, 100), value())));
    points.push((int(1), value()));
    PlFunction::new(points).expect("sorted distinct abscissae")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        assert_eq!(function(Some("const:1/3"), None).unwrap(), PlFunction::constant(ratio(1, 3)));
        assert_eq!(function(Some("line:2,-1/2"), None).unwrap(), PlFunction::linear(int(2), ratio(-1, 2)));
        assert_eq!(function(Some("zigzag:2,1/4"), None).unwrap().len(), 5);
        assert!(function(Some("line:2"), None).is_err());
        assert_eq!(function(Some("random:5"), Some(7)).unwrap(), function(Some("random:5"), Some(7)).unwrap());
    }

    #[test]
    fn systems() {
        assert_eq!(system(Some("uniform:3"), Some(2)).unwrap().level(2).unwrap().len(), 10);
        assert_eq!(system(None, None).unwrap().depth(), DEFAULT_DEPTH);
        assert!(matches!(system(Some("/nonexistent/levels.txt"), None), Err(CliError::Validation(_))));
    }
}
