use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvecode"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn code_identity_dyadic() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["code", "--function", "x", "--system", "dyadic", "--depth", "4", "--levels", "1..4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(data_rows(&read(dir.path(), "code_stats.csv")).len(), 4);
    assert!(read(dir.path(), "code_n2_Q.txt").contains("1 1 1 1"));
}

#[test]
fn code_constant_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["code", "--function", "const:1/3", "--depth", "3"]);
    assert_eq!(out.status.code(), Some(0));
    for n in 1..=3 {
        let q = read(dir.path(), &format!("code_n{n}_Q.txt"));
        let symbols = q.lines().nth(1).unwrap();
        assert!(symbols.split(' ').all(|s| s == "0"), "level {n}: {symbols}");
    }
}

#[test]
fn missing_function_file_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["code", "--function", "/nonexistent/breakpoints.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn forge_first_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["forge", "--function", "const:0", "--eps", "1/10", "--w", "1", "--alpha", "1/2", "--t", "10", "--depth", "12"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let cert = read(dir.path(), "forge_certificate.txt");
    assert!(cert.contains("sup_distance_ok true"));
    assert!(cert.contains("frequency_ok true"));
    assert!(cert.lines().next().unwrap().starts_with("# curvecode"));
}

#[test]
fn forge_alpha_above_limit_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["forge", "--function", "const:0", "--w", "0,1,0", "--alpha", "3/4", "--depth", "8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn forge_shallow_system_is_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["forge", "--function", "const:0", "--w", "1", "--alpha", "1/2", "--t", "100", "--depth", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("1/(3t)") || err.contains("2δ"), "{err}");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "function = \"const:0\"\ndepth = 12\nw = [1]\nalpha = \"1/2\"\nt = 10\neps = \"1/10\"\n").unwrap();
    let out = run(dir.path(), &["forge", "--config", cfg.to_str().unwrap(), "--depth", "2", "--t", "100"]);
    assert_eq!(out.status.code(), Some(3));
    std::fs::write(&cfg, "colour = 1\n").unwrap();
    let out = run(dir.path(), &["code", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zigzag_writes_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["zigzag", "--function", "const:0", "--jump", "5", "--eps", "1/10", "--depth", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = data_rows(&read(dir.path(), "zigzag_stats.csv"));
    let n: usize = rows[0][1].parse().unwrap();
    let above: usize = rows[0][3].parse().unwrap();
    let below: usize = rows[0][4].parse().unwrap();
    assert!(3 * above > n && 3 * below > n);
    let out = run(dir.path(), &["zigzag", "--function", "const:0", "--jump", "500", "--depth", "6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sturmian_check_has_no_discrepancy() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["sturmian", "--beta", "3/7", "--levels", "2..8", "--depth", "8"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = data_rows(&read(dir.path(), "sturmian_check.csv"));
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r[4] == "0"));
    let out = run(dir.path(), &["sturmian", "--beta", "1/2", "--intercept", "0", "--depth", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sturmian_sweep_converges() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["sweep", "--kind", "sturmian", "--beta", "3/7", "--levels", "4..12", "--depth", "12", "--jobs", "3"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path(), "sturmian_sweep.csv");
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "n,N_n,u_n,d_n,V_n,fr_1_s,u_over_V,crossing_ratio");
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 9);
    // slope 3/7 crosses 3 horizontals per 7 verticals: limit 3/10
    let err = |r: &Vec<String>| (r[7].parse::<f64>().unwrap() - 0.3).abs();
    assert!(rows.windows(2).all(|p| err(&p[1]) <= err(&p[0])));
    assert!(err(&rows[8]) < err(&rows[0]));
    assert!(err(&rows[8]) < 1e-3);
    assert!(read(dir.path(), "sturmian_sweep.svg").contains("<polyline"));
}

#[test]
fn sweep_output_is_reproducible_across_jobs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["sweep", "--function", "random:6", "--seed", "11", "--w", "1,-1", "--depth", "9"];
    let mut one = args.to_vec();
    one.extend(["--jobs", "1"]);
    let mut four = args.to_vec();
    four.extend(["--jobs", "4"]);
    assert_eq!(run(a.path(), &one).status.code(), Some(0));
    assert_eq!(run(b.path(), &four).status.code(), Some(0));
    assert_eq!(read(a.path(), "freq_sweep.csv"), read(b.path(), "freq_sweep.csv"));
    assert_eq!(read(a.path(), "freq_sweep.svg"), read(b.path(), "freq_sweep.svg"));
}

#[test]
fn freq_sweep_of_forged_witness() {
    let dir = tempfile::tempdir().unwrap();
    let forge = run(
        dir.path(),
        &["forge", "--function", "x", "--w", "1,-1", "--alpha", "1/4", "--t", "10", "--depth", "12"],
    );
    assert_eq!(forge.status.code(), Some(0), "{}", String::from_utf8_lossy(&forge.stderr));
    let forged_level: usize = String::from_utf8_lossy(&forge.stdout)
        .split_whitespace()
        .nth(1)
        .unwrap()
        .trim_end_matches(':')
        .parse()
        .unwrap();
    let witness = dir.path().join("forge_witness.txt");
    let out = run(
        dir.path(),
        &["sweep", "--function", witness.to_str().unwrap(), "--w", "1,-1", "--alpha", "1/4", "--depth", "12", "--levels", "1..12"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = data_rows(&read(dir.path(), "freq_sweep.csv"));
    let dev = |r: &Vec<String>| r[5].parse::<f64>().unwrap();
    let best = rows.iter().map(dev).fold(f64::INFINITY, f64::min);
    let at_forged = rows.iter().find(|r| r[0] == forged_level.to_string()).map(dev).unwrap();
    assert_eq!(at_forged, best);
    assert!(at_forged <= 0.1);
}

#[test]
fn empty_level_list_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["sweep", "--kind", "sturmian", "--beta", "1/2", "--levels", ""]);
    assert_eq!(out.status.code(), Some(2));
}
