use std::path::Path;
use std::process::{Command, Output};

use sagan::digits::{read_cache, ConstantSpec};
use sagan::raster::rasterize_center;
use sagan_cli::cache_path;
use sagan_cli::render::SearchRecord;

fn sagan(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sagan"))
        .args(args)
        .env("SAGAN_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn digits_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = sagan(
        dir.path(),
        &["digits", "--constant", "pi", "--base", "11", "--count", "6"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "161507\n");
    let o = sagan(
        dir.path(),
        &["digits", "--constant", "rational:1/3", "--count", "4"],
    );
    assert_eq!(stdout(&o), "3333\n");
    let o = sagan(dir.path(), &["digits", "--constant", "pi", "--count", "12"]);
    assert_eq!(stdout(&o), "141592653589\n");
}

#[test]
fn cache_is_written_reused_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    let pi = ConstantSpec::Pi;
    let o = sagan(
        dir.path(),
        &[
            "digits",
            "--constant",
            "pi",
            "--base",
            "11",
            "--count",
            "50",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let path = cache_path(dir.path(), &pi, 11);
    let cache = read_cache(&path).unwrap();
    assert_eq!(cache.digits.len(), 50);
    assert_eq!(cache.constant_id, "pi");

    // a shorter request is served from the file
    let o = sagan(
        dir.path(),
        &["digits", "--constant", "pi", "--base", "11", "--count", "6"],
    );
    assert_eq!(stdout(&o), "161507\n");

    // a longer one rewrites it
    sagan(
        dir.path(),
        &[
            "digits",
            "--constant",
            "pi",
            "--base",
            "11",
            "--count",
            "80",
        ],
    );
    assert_eq!(read_cache(&path).unwrap().digits.len(), 80);

    let mut bytes = std::fs::read(&path).unwrap();
    bytes[20] ^= 0x40;
    std::fs::write(&path, bytes).unwrap();
    let o = sagan(
        dir.path(),
        &["digits", "--constant", "pi", "--base", "11", "--count", "6"],
    );
    assert_eq!(o.status.code(), Some(3));

    let o = sagan(
        dir.path(),
        &[
            "digits",
            "--constant",
            "pi",
            "--base",
            "11",
            "--count",
            "6",
            "--no-cache",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn circle_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = sagan(
        dir.path(),
        &["circle", "-n", "3", "--scheme", "naive", "--flat"],
    );
    assert_eq!(stdout(&o), "111101111\n");
    let o = sagan(dir.path(), &["circle", "-n", "1"]);
    assert_eq!(stdout(&o), "#\n");
    let o = sagan(dir.path(), &["circle", "-n", "5", "--scheme", "center"]);
    assert_eq!(stdout(&o), rasterize_center(5).unwrap().ascii());
    let o = sagan(dir.path(), &["circle", "-n", "2", "--frame"]);
    assert_eq!(stdout(&o).lines().count(), 4);
    for bad in ["0", "4097"] {
        assert_eq!(
            sagan(dir.path(), &["circle", "-n", bad]).status.code(),
            Some(2)
        );
    }
}

#[test]
fn search_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = sagan(
        dir.path(),
        &["search", "--constant", "pi", "-n", "2", "--limit", "20000"],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("position 12700\n11\n11\n"), "{text}");
    assert!(text.contains("144[1111]26"));

    let o = sagan(
        dir.path(),
        &["search", "--constant", "pi", "-n", "1", "--limit", "10"],
    );
    assert!(stdout(&o).starts_with("position 1\n"));

    let o = sagan(
        dir.path(),
        &["search", "--constant", "pi", "-n", "3", "--limit", "50"],
    );
    assert_eq!(o.status.code(), Some(1));

    let o = sagan(dir.path(), &["search", "--constant", "pi", "-n", "2"]);
    assert_eq!(o.status.code(), Some(2), "limit is mandatory");

    let o = sagan(
        dir.path(),
        &[
            "search",
            "--constant",
            "pi",
            "-n",
            "3",
            "--P",
            "1,7",
            "--Q",
            "0,3",
            "--base",
            "7",
            "--limit",
            "100",
        ],
    );
    assert_eq!(
        o.status.code(),
        Some(2),
        "base too small for the digit classes"
    );
}

#[test]
fn search_json_is_a_fixed_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = sagan(
        dir.path(),
        &[
            "--format",
            "json",
            "search",
            "--constant",
            "pi",
            "--base",
            "11",
            "-n",
            "2",
            "--limit",
            "100000",
            "--verify",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let record: SearchRecord = serde_json::from_str(&text).unwrap();
    assert_eq!(record.position, Some(5627));
    assert_eq!(record.window.as_deref(), Some("1111"));
    assert!(record.context_after.contains("[10]"));
    assert_eq!(record.to_json(), text.trim_end());
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in [
        "constant",
        "base",
        "scheme",
        "n",
        "P",
        "Q",
        "position",
        "window",
        "context_before",
        "context_after",
        "digits_examined",
        "limit",
        "found",
    ] {
        assert!(value.get(key).is_some(), "missing {key}");
    }

    let o = sagan(
        dir.path(),
        &[
            "--format",
            "json",
            "search",
            "--constant",
            "pi",
            "-n",
            "3",
            "--limit",
            "40",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
    let record: SearchRecord = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!record.found);
    assert_eq!(record.digits_examined, 40);
}

#[test]
fn bbp_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = sagan(dir.path(), &["bbp", "--position", "1", "--count", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("243f6a88"));
    assert!(text.contains("guard bits 64"));
    let o = sagan(dir.path(), &["bbp", "--position", "1", "--count", "9"]);
    assert_eq!(o.status.code(), Some(2));
    let o = sagan(dir.path(), &["bbp", "--position", "1", "--base", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let o = sagan(
        dir.path(),
        &[
            "bbp",
            "--constant",
            "log2",
            "--position",
            "1",
            "--count",
            "1",
        ],
    );
    assert_eq!(stdout(&o).lines().next(), Some("1"));
}

#[test]
fn normality_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = sagan(
        dir.path(),
        &[
            "normality",
            "--constant",
            "rational:1/3",
            "--length",
            "10000",
            "--kmax",
            "1",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("<1e-308"));
    assert!(text.contains("finite-sample"));

    let o = sagan(
        dir.path(),
        &[
            "--format",
            "json",
            "normality",
            "--constant",
            "pi",
            "--length",
            "5000",
            "--kmax",
            "2",
        ],
    );
    let report: sagan::normality::NormalityReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report.rows.len(), 2);
    let again = serde_json::to_string_pretty(&report).unwrap();
    assert_eq!(again, stdout(&o).trim_end());

    let o = sagan(
        dir.path(),
        &[
            "normality",
            "--constant",
            "pi",
            "--length",
            "20",
            "--kmax",
            "1",
        ],
    );
    assert_eq!(o.status.code(), Some(2), "too few samples");
}

#[test]
fn estimate_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = sagan(
        dir.path(),
        &["estimate", "--base", "11", "--window", "2048"],
    );
    assert_eq!(stdout(&o), "5.919e2132 digits; ~1.4e2106 universe ages\n");
    let o = sagan(dir.path(), &["estimate", "--base", "11", "-n", "2"]);
    assert!(stdout(&o).starts_with("1.464e4 digits"));
    let o = sagan(
        dir.path(),
        &[
            "estimate",
            "--base",
            "11",
            "--window",
            "2048",
            "--ns-per-digit",
            "1/0",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    let o = sagan(dir.path(), &["estimate", "--base", "11"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_constant_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = sagan(dir.path(), &["digits", "--constant", "tau", "--count", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = sagan(
        dir.path(),
        &[
            "digits",
            "--constant",
            "pi",
            "--base",
            "300",
            "--count",
            "3",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
}
