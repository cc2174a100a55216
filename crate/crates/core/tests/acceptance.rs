//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use qdist::metrics::{pair_coefficients, subset_coefficients, CERTIFICATE_TOL};
use qdist::oracle::brute_force_metrics;
use qdist::quantum::{haar_random_pure_with, helstrom_pair, hs_random_mixed_with, seeded_rng, PreparationSet};
use qdist::realist::{random_ensemble, realist_metrics};
use qdist::sdp::{build_measurement_sdp, solve_measurement_sdp, verify_certificate, DEFAULT_TOL};
use rand::Rng;
use serde_json::Value;

type Check = Result<String, String>;
type Criterion = (&'static str, fn(&Path) -> Check);

fn qdist(dir: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qdist"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("`qdist {}` failed: {}", args.join(" "), String::from_utf8_lossy(&out.stderr).trim()))
    }
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("output file")).expect("valid JSON")
}

fn read_csv(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .expect("output file")
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().expect("number")).collect())
        .collect()
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or(f64::NAN)
}

fn within(name: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    if (got - want).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{name} = {got:.10}, expected {want:.10} within {tol:e}"))
    }
}

fn time_limit(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    if elapsed.as_secs_f64() < limit_s {
        Ok(())
    } else {
        Err(format!("took {:.1} s, limit {limit_s} s", elapsed.as_secs_f64()))
    }
}

fn trine(dir: &Path) -> Check {
    let start = Instant::now();
    qdist(dir, &["metrics", "--exemplar", "trine", "--out", "trine.json"])?;
    let elapsed = start.elapsed();
    let r = read_json(&dir.join("trine.json"));
    let s3 = 3f64.sqrt();
    within("avg_set", num(&r, "avg_set"), 5.0 / 6.0, 1e-6)?;
    within("avg_pairwise", num(&r, "avg_pairwise"), (2.0 + s3) / 4.0, 1e-6)?;
    within("deviation", num(&r, "deviation"), (3.0 * s3 - 4.0) / 12.0, 1e-6)?;
    time_limit(elapsed, 2.0)?;
    Ok(format!("deviation {:.8}", num(&r, "deviation")))
}

fn tetrahedron(dir: &Path) -> Check {
    let start = Instant::now();
    qdist(dir, &["metrics", "--exemplar", "tetra", "--out", "tetra.json"])?;
    let elapsed = start.elapsed();
    let r = read_json(&dir.join("tetra.json"));
    within("deviation", num(&r, "deviation"), 0.1453, 1e-4)?;
    within("avg_pairwise", num(&r, "avg_pairwise"), (1.0 + (2.0f64 / 3.0).sqrt()) / 2.0, 1e-6)?;
    time_limit(elapsed, 5.0)?;
    Ok(format!("deviation {:.8}", num(&r, "deviation")))
}

fn reverse_deviation(dir: &Path) -> Check {
    let start = Instant::now();
    let args = ["seesaw", "--n", "3", "--dim", "3", "--sign", "neg", "--restarts", "50", "--seed", "0", "--out", "rev.json"];
    qdist(dir, &args)?;
    let elapsed = start.elapsed();
    let best = num(&read_json(&dir.join("rev.json")), "best_value");
    if !(0.0267..=0.0287).contains(&best) {
        return Err(format!("reverse deviation {best:.6} outside [0.0267, 0.0287]"));
    }
    time_limit(elapsed, 600.0)?;
    Ok(format!("avg_set - avg_pairwise = {best:.6}"))
}

fn forward_recovery(dir: &Path) -> Check {
    let start = Instant::now();
    qdist(dir, &["seesaw", "--n", "3", "--dim", "2", "--sign", "pos", "--restarts", "20", "--out", "fwd3.json"])?;
    qdist(dir, &["seesaw", "--n", "4", "--dim", "2", "--sign", "pos", "--restarts", "20", "--out", "fwd4.json"])?;
    let elapsed = start.elapsed();
    let three = num(&read_json(&dir.join("fwd3.json")), "best_value");
    let four = num(&read_json(&dir.join("fwd4.json")), "best_value");
    if three < 0.0987 || four < 0.1443 {
        return Err(format!("n=3: {three:.6} (need 0.0987), n=4: {four:.6} (need 0.1443)"));
    }
    time_limit(elapsed, 600.0)?;
    Ok(format!("n=3: {three:.6}, n=4: {four:.6}"))
}

fn scaling(dir: &Path) -> Check {
    let start = Instant::now();
    qdist(dir, &["scaling", "--n-min", "3", "--n-max", "5", "--dim", "2", "--out", "scaling.csv"])?;
    let elapsed = start.elapsed();
    let rows = read_csv(&dir.join("scaling.csv"));
    let lbs: Vec<f64> = rows.iter().map(|r| r[2]).collect();
    if rows.len() != 3 || !lbs.windows(2).all(|w| w[1] > w[0]) || lbs[2] <= 0.1453 {
        return Err(format!("lower bounds {lbs:?} are not strictly increasing past 0.1453"));
    }
    time_limit(elapsed, 1800.0)?;
    Ok(format!("lower bounds {:.6} < {:.6} < {:.6}", lbs[0], lbs[1], lbs[2]))
}

fn realist_suite(dir: &Path) -> Check {
    let start = Instant::now();
    qdist(dir, &["verify", "--samples", "1000", "--seed", "0", "--out", "verify.json"])?;
    let elapsed = start.elapsed();
    let s = read_json(&dir.join("verify.json"));
    let eq = num(&s, "max_equality_residual");
    let identity = num(&s, "identity_max_relative_residual");
    if eq > 1e-11 || identity > 1e-10 {
        return Err(format!("equality residual {eq:e}, identity residual {identity:e}"));
    }
    time_limit(elapsed, 30.0)?;
    Ok(format!("equality residual {eq:.1e}, identity residual {identity:.1e}"))
}

fn oracles(_: &Path) -> Check {
    let mut rng = seeded_rng(2024);
    let pair = pair_coefficients(2, 0, 1).map_err(|e| e.to_string())?;
    let mut worst_pair: f64 = 0.0;
    let mut certified = 0usize;
    let mut solved = 0usize;
    for t in 0..200 {
        let dim = 2 + t % 2;
        let states = if t % 4 < 2 {
            vec![haar_random_pure_with(dim, &mut rng), haar_random_pure_with(dim, &mut rng)]
        } else {
            vec![hs_random_mixed_with(dim, &mut rng), hs_random_mixed_with(dim, &mut rng)]
        };
        let closed = helstrom_pair(&states[0], &states[1]).map_err(|e| e.to_string())?;
        let set = PreparationSet::new(states).map_err(|e| e.to_string())?;
        let sdp = build_measurement_sdp(&set, &pair).map_err(|e| e.to_string())?;
        let res = solve_measurement_sdp(&sdp, DEFAULT_TOL);
        solved += 1;
        worst_pair = worst_pair.max((res.value - closed).abs());
        if res.is_optimal() {
            if !verify_certificate(&res, &sdp, CERTIFICATE_TOL).certified {
                return Err(format!("pair instance {t} is optimal but not certified"));
            }
            certified += 1;
        }
    }
    if worst_pair > 1e-6 {
        return Err(format!("SDP and Helstrom differ by {worst_pair:e}"));
    }

    for t in 0..100u64 {
        let n = 3 + (t % 3) as usize;
        let dim = 2 + (t % 3) as usize;
        let states = (0..n).map(|_| hs_random_mixed_with(dim, &mut rng)).collect();
        let set = PreparationSet::new(states).map_err(|e| e.to_string())?;
        for m in 1..n {
            let coeffs = subset_coefficients(n, m).map_err(|e| e.to_string())?;
            let sdp = build_measurement_sdp(&set, &coeffs).map_err(|e| e.to_string())?;
            let res = solve_measurement_sdp(&sdp, DEFAULT_TOL);
            solved += 1;
            if !res.is_optimal() {
                eprintln!("  subset instance {t}, m = {m}: {:?}, gap {:e}", res.status, res.gap);
            }
            if res.is_optimal() {
                if !verify_certificate(&res, &sdp, CERTIFICATE_TOL).certified {
                    return Err(format!("subset instance {t}, m = {m} is optimal but not certified"));
                }
                certified += 1;
            }
        }
    }

    let mut worst_enum: f64 = 0.0;
    let mut enumerated = 0usize;
    for _ in 0..300 {
        let n = rng.random_range(2..=4);
        let size = rng.random_range(1..=6);
        let ens = random_ensemble(n, size, &mut rng);
        let report = realist_metrics(&ens).map_err(|e| e.to_string())?;
        let (pairs, subsets) = brute_force_metrics(&ens).map_err(|e| e.to_string())?;
        for (a, b) in report.pairwise.iter().map(|p| p.value).chain(report.subset.iter().copied()).zip(pairs.iter().chain(&subsets)) {
            worst_enum = worst_enum.max((a - b).abs());
        }
        enumerated += 1;
    }
    if worst_enum > 1e-14 {
        return Err(format!("realist values differ from enumeration by {worst_enum:e}"));
    }
    Ok(format!(
        "Helstrom gap {worst_pair:.1e}; {certified}/{solved} solves optimal and certified; {enumerated} ensembles match enumeration (max diff {worst_enum:.1e})"
    ))
}

fn random_scans(dir: &Path) -> Check {
    let start = Instant::now();
    qdist(dir, &["scan", "--n", "3", "--dim", "2", "--samples", "500", "--measure", "pure", "--out", "qubit.csv"])?;
    qdist(dir, &["scan", "--n", "3", "--dim", "3", "--samples", "200", "--measure", "mixed", "--out", "qutrit.csv"])?;
    let elapsed = start.elapsed();
    let qubit = read_csv(&dir.join("qubit.csv"));
    let visible = qubit.iter().filter(|r| r[3].abs() >= 5e-5).count() as f64 / qubit.len() as f64;
    let negative = read_csv(&dir.join("qutrit.csv")).iter().filter(|r| r[3] < 0.0).count();
    if qubit.len() != 500 || visible < 0.95 || negative == 0 {
        return Err(format!("{} qubit rows, {:.1}% visible, {negative} negative qutrit rows", qubit.len(), 100.0 * visible));
    }
    time_limit(elapsed, 1200.0)?;
    Ok(format!("{:.1}% of qubit triplets with |deviation| >= 5e-5; {negative}/200 qutrit triplets negative", 100.0 * visible))
}

fn determinism(dir: &Path) -> Check {
    let runs: [&[&str]; 5] = [
        &["metrics", "--exemplar", "trine", "--out", "OUT.json"],
        &["scan", "--n", "3", "--dim", "2", "--samples", "50", "--seed", "5", "--out", "OUT.csv"],
        &["seesaw", "--n", "3", "--dim", "3", "--sign", "neg", "--restarts", "5", "--seed", "3", "--out", "OUT.json"],
        &["frontier", "--n", "3", "--dim", "2", "--kappas", "0,0.5,2", "--restarts", "2", "--out", "OUT.csv"],
        &["verify", "--samples", "100", "--seed", "8", "--out", "OUT.json"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let name = format!("det{rep}_{}", args[0]);
            let args: Vec<String> = args.iter().map(|a| a.replace("OUT", &name)).collect();
            let refs: Vec<&str> = args.iter().map(String::as_str).collect();
            qdist(dir, &refs)?;
            let out = args.last().expect("output path").clone();
            let mut bytes = std::fs::read(dir.join(&out)).map_err(|e| e.to_string())?;
            if args[0] == "seesaw" {
                bytes.extend(std::fs::read(dir.join(format!("{out}.states.json"))).map_err(|e| e.to_string())?);
            }
            outputs.push(bytes);
        }
        if outputs[0] != outputs[1] {
            return Err(format!("`{}` output differs between identical runs", args[0]));
        }
    }
    Ok("metrics, scan, seesaw, frontier and verify reruns are byte-identical".into())
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let criteria: [Criterion; 9] = [
        ("trine exemplar", trine),
        ("tetrahedron exemplar", tetrahedron),
        ("qutrit reverse deviation", reverse_deviation),
        ("forward optimum recovery", forward_recovery),
        ("deviation scaling", scaling),
        ("realist equality and identity", realist_suite),
        ("oracle equivalences and certificates", oracles),
        ("random-scan deviations", random_scans),
        ("deterministic reruns", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check(dir.path());
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} [{secs:.2} s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {}. {name}: {detail} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
