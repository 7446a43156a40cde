use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use weft_cli::BraidFile;
use weft_core::BraidWord;

const FIG: &str = "strands: 4\n1 -2 -3 2 1\n";

fn weft(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weft"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// A directory holding `lib.json`, built once by `weft inject`.
fn workdir() -> &'static PathBuf {
    static DIR: OnceLock<(tempfile::TempDir, PathBuf)> = OnceLock::new();
    let (_, path) = DIR.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().to_path_buf();
        let o = weft(&["inject", "--max-length", "26", "--out", "lib.json"], &path);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        fs::write(path.join("fig.braid"), FIG).unwrap();
        (dir, path)
    });
    path
}

fn scratch() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(workdir().join("lib.json"), dir.path().join("lib.json")).unwrap();
    fs::write(dir.path().join("fig.braid"), FIG).unwrap();
    dir
}

#[test]
fn compile_figure_braid_end_to_end() {
    let dir = scratch();
    let o = weft(
        &[
            "compile", "--input", "fig.braid", "--epsilon", "0.1", "--library", "lib.json", "--output",
            "fig.weave", "--verify-n-charge", "4:tau",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["budget"]["p"], 5);
    assert_eq!(report["budget"]["n"], 4);
    assert_eq!(report["budget"]["injection_count"], 2);
    assert_eq!(report["verification"]["passed"], true);
    let text = fs::read_to_string(dir.path().join("fig.weave")).unwrap();
    let weave = BraidFile::parse(&text).unwrap();
    assert_eq!(weave.warp, Some(1));
    assert!(weave.word.is_weave(1));
    assert_eq!(weave.to_string(), text);

    let v = weft(
        &["verify", "--braid", "fig.braid", "--weave", "fig.weave", "--epsilon", "0.1", "--json"],
        dir.path(),
    );
    assert_eq!(code(&v), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&v)).unwrap();
    assert!(report["distance"].as_f64().unwrap() <= 0.1);
}

#[test]
fn compile_edge_cases() {
    let dir = scratch();
    fs::write(dir.path().join("empty.braid"), "strands: 5\n# nothing\n").unwrap();
    let o = weft(&["compile", "--input", "empty.braid", "--epsilon", "0.1", "--library", "lib.json"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "strands: 5\nwarp: 1\n");
    assert!(stderr(&o).contains("\"injection_count\": 0"));

    for eps in ["0", "-1"] {
        let o = weft(&["compile", "--input", "fig.braid", "--epsilon", eps, "--library", "lib.json"], dir.path());
        assert_eq!(code(&o), 1, "epsilon {eps}");
    }
    fs::write(dir.path().join("bad.braid"), "strands: 4\n1 2\n3 7\n").unwrap();
    let o = weft(&["compile", "--input", "bad.braid", "--epsilon", "0.1", "--library", "lib.json"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("line 3, column 3"), "{}", stderr(&o));

    let o = weft(&["compile", "--input", "fig.braid", "--epsilon", "1e-12", "--library", "lib.json"], dir.path());
    assert_ne!(code(&o), 0);
    assert!(stderr(&o).contains("5.000e-14"), "{}", stderr(&o));
}

#[test]
fn verify_reports_pass_and_fail() {
    let dir = scratch();
    let o = weft(&["verify", "--braid", "fig.braid", "--weave", "fig.braid", "--epsilon", "0.05"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("distance: 0e0"), "{}", stdout(&o));
    assert!(stdout(&o).contains("result: pass"));

    fs::write(dir.path().join("empty.braid"), "strands: 4\n").unwrap();
    let o = weft(&["verify", "--braid", "fig.braid", "--weave", "empty.braid", "--epsilon", "0.05"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("result: fail"));

    fs::write(dir.path().join("three.braid"), "strands: 3\n1\n").unwrap();
    let o = weft(&["verify", "--braid", "fig.braid", "--weave", "three.braid", "--epsilon", "0.05"], dir.path());
    assert_eq!(code(&o), 1);
}

#[test]
fn render_svg_and_ascii() {
    let dir = scratch();
    let o = weft(&["render", "--input", "fig.braid", "--format", "svg", "--warp", "1", "-o", "fig.svg"], dir.path());
    assert_eq!(code(&o), 0);
    let svg = fs::read_to_string(dir.path().join("fig.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).expect("well-formed XML");
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let trace = doc
        .descendants()
        .find(|n| n.attribute("class") == Some("warp-trace"))
        .unwrap();
    let word = BraidWord::from_signed(4, &[1, -2, -3, 2, 1]).unwrap();
    let expected: Vec<String> = word.warp_trace(1).unwrap().positions.iter().map(|p| p.to_string()).collect();
    assert_eq!(trace.attribute("data-positions"), Some(expected.join(" ").as_str()));

    let again = weft(&["render", "--input", "fig.braid", "--warp", "1"], dir.path());
    assert_eq!(stdout(&again), svg);

    let ascii = weft(&["render", "--input", "fig.braid", "--format", "ascii"], dir.path());
    assert_eq!(code(&ascii), 0);
    assert_eq!(stdout(&ascii).lines().count(), 7);

    let bad = weft(&["render", "--input", "fig.braid", "--warp", "9"], dir.path());
    assert_eq!(code(&bad), 1);
}

#[test]
fn model_check_passes_and_catches_faults() {
    let dir = scratch();
    for chirality in ["plus", "minus"] {
        let o = weft(&["model-check", "--chirality", chirality], dir.path());
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert!(stdout(&o).ends_with("model_check: PASS\n"));
    }
    let o = weft(&["model-check", "--inject-fault"], dir.path());
    assert_ne!(code(&o), 0);
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn inject_exit_codes_and_determinism() {
    let dir = scratch();
    let o = weft(&["inject", "--max-length", "1", "--out", "one.json"], dir.path());
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("converged: false"));

    let o = weft(&["inject", "--max-length", "20", "--metric", "sector-tau", "--target", "1e-2", "--out", "tau.json"], dir.path());
    assert_eq!(code(&o), 3);
    let first = fs::read(dir.path().join("tau.json")).unwrap();
    fs::remove_file(dir.path().join("tau.json")).unwrap();
    weft(&["inject", "--max-length", "20", "--metric", "sector-tau", "--target", "1e-2", "--out", "tau.json"], dir.path());
    assert_eq!(fs::read(dir.path().join("tau.json")).unwrap(), first);

    // refinement past the brute-force reach
    let o = weft(&["inject", "--max-length", "26", "--target", "1e-3", "--out", "sk.json"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("source: Sk"));
    let lib: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("sk.json")).unwrap()).unwrap();
    assert_eq!(lib["generator"], "sk");
    assert_eq!(lib["records"].as_array().unwrap().len(), 2);
}

#[test]
fn bench_single_cell_and_repeatability() {
    let dir = scratch();
    let args = ["bench", "--n", "4", "--p", "5", "--eps-list", "0.1", "--seed", "3", "--library", "lib.json", "--json"];
    let o = weft(&args, dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0]["distance"].as_f64().unwrap() <= 0.1);
    assert_eq!(stdout(&weft(&args, dir.path())), stdout(&o));
}
