//! End-to-end runs of the `frailhr` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn frailhr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frailhr")).args(args).output().expect("binary runs")
}

fn out_dir(tmp: &TempDir, name: &str) -> PathBuf {
    tmp.path().join(name)
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&read(path)).unwrap()
}

fn write_config(tmp: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = tmp.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const IDENTICAL: &str = "[truth.control]\nweights = [0.5, 0.5]\nrates = [0.1, 0.5]\n\
                         [truth.research]\nweights = [0.5, 0.5]\nrates = [0.1, 0.5]\n";

#[test]
fn truth_tables() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "truth");
    let run = frailhr(&["truth", "--out", out.to_str().unwrap()]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let hr = read(&out.join("hr.csv"));
    assert_eq!(hr.lines().count(), 602);
    assert_eq!(hr.lines().nth(1).unwrap().split(',').nth(3).unwrap(), "0.5");
    assert!(!hr.contains('\r'));
    let first = read(&out.join("curves.csv"));
    let again = frailhr(&["truth", "--out", out.to_str().unwrap()]);
    assert!(again.status.success());
    assert_eq!(first, read(&out.join("curves.csv")));
}

#[test]
fn identical_arms_give_unit_ratio() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(&tmp, "same.toml", IDENTICAL);
    let out = out_dir(&tmp, "o");
    let run = frailhr(&["truth", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(run.status.success());
    let hr = read(&out.join("hr.csv"));
    assert!(hr.lines().skip(1).all(|l| l.ends_with(",1")));
}

#[test]
fn simulate_schema_and_determinism() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (out_dir(&tmp, "a"), out_dir(&tmp, "b"));
    for dir in [&a, &b] {
        let run = frailhr(&["simulate", "--seed", "77", "--out", dir.to_str().unwrap()]);
        assert!(run.status.success());
    }
    let text = read(&a.join("dataset.csv"));
    assert_eq!(text, read(&b.join("dataset.csv")));
    assert_eq!(text.lines().count(), 1001);
    assert_eq!(text.lines().next().unwrap(), "id,arm,observed_time,event");

    let c = out_dir(&tmp, "c");
    frailhr(&["simulate", "--seed", "78", "--reveal-latent", "--out", c.to_str().unwrap()]);
    let latent = read(&c.join("dataset.csv"));
    assert!(latent.starts_with("id,arm,stratum,potential_time_0,potential_time_1,observed_time,event\n"));
    assert_ne!(latent.lines().nth(1), text.lines().nth(1));
}

#[test]
fn fit_round_trip_and_periods() {
    let tmp = TempDir::new().unwrap();
    let sim = out_dir(&tmp, "sim");
    frailhr(&["simulate", "--reveal-latent", "--out", sim.to_str().unwrap()]);
    let dataset = sim.join("dataset.csv");
    let fit_dir = out_dir(&tmp, "fit");
    let run = frailhr(&[
        "fit",
        dataset.to_str().unwrap(),
        "--covariates",
        "arm,stratum",
        "--cutpoints",
        "1,4,30",
        "--out",
        fit_dir.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let fit = json(&fit_dir.join("fit.json"));
    let hr = fit["hr"].as_f64().unwrap();
    assert!((hr - 0.5).abs() < 0.12, "{hr}");
    assert_eq!(fit["converged"], true);
    assert_eq!(fit["n_events"], 1000);
    let lo = fit["hr_ci_lower"].as_f64().unwrap();
    let hi = fit["hr_ci_upper"].as_f64().unwrap();
    assert!(lo < hr && hr < hi);
    let periods = json(&fit_dir.join("periods.json"));
    assert_eq!(periods["periods"].as_array().unwrap().len(), 3);
    assert!(read(&fit_dir.join("curves_estimated.csv")).starts_with("t,arm,survival,hazard,cum_hazard,estimator\n"));
    assert!(read(&fit_dir.join("baseline.csv")).contains(",breslow\n"));

    // write -> read -> write is idempotent
    let reread = frailhr::io::parse_dataset_csv(&read(&dataset)).unwrap();
    assert_eq!(frailhr::io::dataset_csv(&reread, true).unwrap(), read(&dataset));
}

#[test]
fn fit_rejects_bad_input() {
    let tmp = TempDir::new().unwrap();
    let empty = write_config(&tmp, "empty.csv", "id,arm,observed_time,event\n");
    let run = frailhr(&["fit", empty.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(1));

    let broken = write_config(&tmp, "broken.csv", "id,arm,observed_time,event\n1,0,2.5,1\n2,1,2.0,1\n3,1,oops,0\n");
    let run = frailhr(&["fit", broken.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&run.stderr).contains("row 3"));

    let missing = frailhr(&["fit", "/nonexistent/data.csv"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn unconverged_fit_is_not_a_tool_failure() {
    let tmp = TempDir::new().unwrap();
    let separated = write_config(&tmp, "sep.csv", "id,arm,observed_time,event\n1,1,1,1\n2,1,2,1\n3,0,3,0\n4,0,4,0\n");
    let out = out_dir(&tmp, "o");
    let run = frailhr(&["fit", separated.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    let fit = json(&out.join("fit.json"));
    assert_eq!(fit["converged"], false);
    assert!(!out.join("baseline.csv").exists());
}

#[test]
fn estimands_from_truth() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "e");
    let run = frailhr(&[
        "estimands",
        "--source",
        "truth",
        "--landmark",
        "1",
        "--rmst",
        "10",
        "--sensitivity",
        "admin:2",
        "--replicates",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let reports = json(&out.join("estimands.json"));
    let find = |name: &str| reports.as_array().unwrap().iter().find(|r| r["name"] == name).unwrap().clone();
    assert_eq!(find("rmst_control")["value"].as_f64().unwrap(), 4.15386485);
    assert_eq!(find("landmark_survival_difference")["value"].as_f64().unwrap(), 0.109331065);
    assert_eq!(find("landmark_survival_difference")["source"], "truth");
    let sens = read(&out.join("sensitivity.csv"));
    assert_eq!(sens.lines().count(), 2);
    assert!(sens.lines().nth(1).unwrap().starts_with("admin:2,"));
}

#[test]
fn estimands_from_dataset() {
    let tmp = TempDir::new().unwrap();
    let sim = out_dir(&tmp, "sim");
    frailhr(&["simulate", "--out", sim.to_str().unwrap()]);
    let out = out_dir(&tmp, "e");
    let dataset = sim.join("dataset.csv");
    let run = frailhr(&["estimands", "--source", dataset.to_str().unwrap(), "--out", out.to_str().unwrap(), "--sensitivity", ""]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let reports = json(&out.join("estimands.json"));
    assert_eq!(reports.as_array().unwrap().len(), 7);
    assert!(reports.as_array().unwrap().iter().all(|r| r["source"] == "estimated"));
    assert!(!out.join("sensitivity.csv").exists());

    let beyond = frailhr(&["estimands", "--source", dataset.to_str().unwrap(), "--landmark", "1e6", "--sensitivity", ""]);
    assert_eq!(beyond.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&beyond.stderr).contains("maximum supported"));
}

#[test]
fn config_and_io_errors() {
    let tmp = TempDir::new().unwrap();
    let typo = write_config(&tmp, "typo.toml", &format!("{IDENTICAL}[trial]\nn_per_arms = 3\n"));
    let run = frailhr(&["simulate", "--config", typo.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&run.stderr).contains("n_per_arms"));

    let blocker = write_config(&tmp, "file", "not a directory");
    let run = frailhr(&["truth", "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));

    let run = frailhr(&["frobnicate"]);
    assert_eq!(run.status.code(), Some(1));
}
