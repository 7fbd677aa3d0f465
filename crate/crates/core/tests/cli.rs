use std::path::Path;
use std::process::Command;

use aoi_online::record::parse_csv;

fn aoi(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_aoi")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn single_writes_documented_header() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "c.toml",
        "slots = 6\nepochs = 20\n[generator]\nname = \"drifting\"\n",
    );
    let out = dir.path().join("r.csv");
    let status = aoi(&[
        "single",
        "--config",
        &config,
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "experiment,algorithm,seed,epoch,cost_raw,cost_norm,regret_static,regret_dynamic,comparator"
    );
    let records = parse_csv(&text).unwrap();
    assert_eq!(records.len(), 2 * 20);
    assert!(records.iter().all(|r| r.seed == 7));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "m.toml",
        "sources = 2\nslots = 5\nepochs = 30\nfeedback = \"bandit\"\n[generator]\nname = \"adversarial-switch\"\nperiod = 4\n",
    );
    let mut outputs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let out = dir.path().join(name);
        let s = aoi(&[
            "multi",
            "--config",
            &config,
            "--seed",
            "3",
            "--seed",
            "1",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(s.status.success());
        outputs.push(std::fs::read(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn mobility_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "mob.toml",
        "[mobility]\nnodes = 3\nslots = 20\nepochs = 3\n",
    );
    let s = aoi(&["mobility", "--config", &config, "--format", "json"]);
    assert!(s.status.success());
    let text = String::from_utf8(s.stdout).unwrap();
    assert_eq!(text.lines().count(), 3 * 3);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["tracking_error"].is_number());
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_key = write(dir.path(), "bad.toml", "slots = 5\nfoo = 1\n");
    let s = aoi(&["single", "--config", &bad_key]);
    assert_eq!(s.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&s.stderr).contains("foo"));

    let big = write(dir.path(), "big.toml", "sources = 3\nslots = 17\n");
    assert_eq!(aoi(&["oracle", "--config", &big]).status.code(), Some(3));

    let fits = write(dir.path(), "fits.toml", "sources = 3\nslots = 10\n");
    let s = aoi(&["oracle", "--config", &fits]);
    assert_eq!(s.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&s.stdout).contains(",19683,"));
    assert_eq!(
        aoi(&["oracle", "--config", &fits, "--budget", "100"]).status.code(),
        Some(3)
    );

    let missing = dir.path().join("nope.toml");
    assert_eq!(
        aoi(&["single", "--config", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );

    let unwritable = dir.path().join("no/such/dir/out.csv");
    let ok = write(dir.path(), "ok.toml", "slots = 4\nepochs = 2\n");
    assert_eq!(
        aoi(&["single", "--config", &ok, "--out", unwritable.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bounds_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "b.toml",
        "sources = 2\nslots = 5\nepochs = 100\nseeds = [1, 2, 3]\n[generator]\nname = \"drifting\"\n",
    );
    let s = aoi(&["bounds", "--config", &config]);
    assert!(s.status.success(), "{}", String::from_utf8_lossy(&s.stderr));
    let text = String::from_utf8(s.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "algorithm,regret,bound,observed,worst,seeds,passed,alpha,variation"
    );
    assert!(lines[1].starts_with("fpwl,static,"));
    assert!(lines[2].starts_with("fdwl,dynamic,"));
    assert!(lines[1..].iter().all(|l| l.contains(",true,")));
}
