use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_padwave"));
    c.env_remove("PADWAVE_SEED");
    c
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn run(args: &[&str]) -> (i32, String) {
    let out: Output = bin().args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8"),
    )
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, text) = run(args);
    let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{:?}: {} in {:?}", args, e, text));
    assert_eq!(v["schema"], "padwave/1", "{:?}", args);
    (code, v)
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn cyc_one() -> Value {
    json!({ "order": 1, "coeffs": ["1"] })
}

#[test]
fn haar_mask_examples() {
    for p in ["2", "3", "5"] {
        let (code, v) = run_json(&["haar-mask", "--p", p]);
        assert_eq!(code, 0);
        let entries = v["results"]["mask"]["entries"].as_object().unwrap();
        assert_eq!(entries.len(), p.parse::<usize>().unwrap());
        assert!(entries.values().all(|c| *c == cyc_one()));
        assert_eq!(v["passed"], true);
    }
    let (code, v) = run_json(&["haar-mask", "--p", "4"]);
    assert_eq!(code, 2);
    assert_eq!(v["kind"], "error");
    assert_eq!(v["error"]["kind"], "usage");
}

#[test]
fn usage_errors_exit_2_with_json() {
    for args in [
        &["haar-mask"][..],
        &["haar-mask", "--p", "x"],
        &["frobnicate"],
        &["family", "riesz", "--p", "2"],
    ] {
        let (code, v) = run_json(args);
        assert_eq!(code, 2, "{:?}", args);
        assert_eq!(v["error"]["kind"], "usage", "{:?}", args);
    }
}

#[test]
fn riesz_example() {
    let (code, v) = run_json(&["family", "riesz", "--p", "2", "--M", "1", "--N", "2"]);
    assert_eq!(code, 0);
    let r = &v["results"];
    assert_eq!(r["admissible"], true);
    assert_eq!(r["rieszEquality"], true);
    assert_eq!(r["patterns"]["phiHat"], json!([0, 4, 6, 7]));
    assert!(v["advisory"]["gram"]["minEigenvalue"].as_f64().unwrap() > 0.0);
    // advisory numbers never appear among the exact results
    assert!(r.get("gram").is_none());
}

#[test]
fn riesz_moment_failure_exits_1() {
    // the moment biconditional breaks for ψ^(2) at (3, 0, 1)
    let (code, v) = run_json(&["family", "riesz", "--p", "3", "--M", "0", "--N", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["checks"]["momentBiconditional"], false);
    assert_eq!(v["checks"]["patterns"], true);
}

#[test]
fn haar_type_example() {
    let (code, v) = run_json(&["family", "haar-type", "--p", "2", "--s", "2"]);
    assert_eq!(code, 0);
    let w = &v["results"]["wavelets"][0];
    assert_eq!(w["j"], 1);
    assert_eq!(w["filterSum"], json!({ "order": 1, "coeffs": ["0"] }));
    assert_eq!(w["filterSumZero"], true);
}

#[test]
fn non_haar_collapse_example() {
    let (code, v) = run_json(&["family", "non-haar", "--p", "3", "--m", "1", "--nu", "1"]);
    assert_eq!(code, 0);
    let ws = v["results"]["wavelets"].as_array().unwrap();
    assert_eq!(ws.len(), 2);
    for w in ws {
        assert_eq!(w["psiEqualsTheta"], true);
        assert_eq!(w["psi"], w["theta"]);
    }
}

#[test]
fn seeded_parameters_are_reproducible() {
    let a = run(&["family", "haar-type", "--p", "3", "--s", "1", "--random", "--seed", "7"]);
    let b = run(&["family", "haar-type", "--p", "3", "--s", "1", "--random", "--seed", "7"]);
    assert_eq!(a, b);
    let env = bin()
        .args(["family", "haar-type", "--p", "3", "--s", "1", "--random"])
        .env("PADWAVE_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(env.stdout).unwrap(), a.1);
    let c = run(&["family", "haar-type", "--p", "3", "--s", "1", "--random", "--seed", "8"]);
    assert_ne!(a.1, c.1);
    let (code, _) = run_json(&["family", "non-haar", "--p", "2", "--m", "2", "--nu", "2", "--random"]);
    assert_eq!(code, 0);
}

#[test]
fn parameter_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let minus = json!({ "order": 2, "coeffs": ["-1"] });
    // σ_{1,0} = −1 makes the p = 2, s = 1 row sum to zero, hence h_1(0) = 0
    let good = write(d, "sigma.json", &json!({ "sigma": { "1,0": minus, "1,1": cyc_one() } }));
    let (code, v) = run_json(&["family", "haar-type", "--p", "2", "--s", "1", "--params", &good]);
    assert_eq!(code, 0);
    assert_eq!(v["inputs"]["sigma"]["1,0"], json!({ "order": 1, "coeffs": ["-1"] }));
    assert_eq!(v["results"]["wavelets"][0]["sequenceOrder"], "inf");

    let cases = [
        json!({ "sigma": { "1,0": "2", "1,1": "1" } }),
        json!({ "sigma": { "1,0": "1" } }),
        json!({ "Z": [["2"]] }),
        json!({ "Z": [["1", "0"]] }),
        json!({ "sigma": [] }),
        json!({ "schema": "other/9" }),
    ];
    for (i, c) in cases.iter().enumerate() {
        let f = write(d, &format!("bad{}.json", i), c);
        let (code, v) = run_json(&["family", "haar-type", "--p", "2", "--s", "1", "--params", &f]);
        assert_eq!(code, 2, "{}", c);
        assert_eq!(v["error"]["kind"], "input", "{}", c);
    }

    let g = write(
        d,
        "gamma.json",
        &json!({ "gamma": { "1/3,0": { "order": 4, "coeffs": ["0", "1"] }, "1/3,1": "1", "1/3,2": "1" } }),
    );
    let (code, v) = run_json(&["family", "non-haar", "--p", "3", "--m", "1", "--params", &g]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["wavelets"][0]["psiEqualsTheta"], false);
    assert_eq!(v["results"]["wavelets"][1]["psiEqualsTheta"], true);
    let g = write(d, "gamma_bad.json", &json!({ "gamma": { "1,0": "1" } }));
    assert_eq!(
        run(&["family", "non-haar", "--p", "3", "--m", "1", "--params", &g]).0,
        2
    );
}

#[test]
fn fourier_golden_files() {
    let input = golden("two_balls.json");
    let once = golden("two_balls.fourier.json");
    let (code, text) = run(&["fourier", "--function", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(text, std::fs::read_to_string(&once).unwrap());

    // F F f = f(−x), so reflecting the second transform gives f back in normal form
    let (code, back) = run(&["fourier", "--function", once.to_str().unwrap(), "--reflect"]);
    assert_eq!(code, 0);
    assert_eq!(
        back,
        std::fs::read_to_string(golden("two_balls.canonical.json")).unwrap()
    );
    let (_, inv) = run(&["fourier", "--function", once.to_str().unwrap(), "--inverse"]);
    assert_eq!(inv, back);
}

#[test]
fn out_file_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.json");
    let input = golden("two_balls.json");
    for args in [
        vec!["fourier", "--function", input.to_str().unwrap()],
        vec!["moments", "--function", input.to_str().unwrap(), "--mode", "integer"],
        vec!["family", "riesz", "--p", "2", "--M", "1", "--N", "1"],
    ] {
        let (_, stdout) = run(&args);
        let mut with_out = args.clone();
        with_out.extend(["--out", out.to_str().unwrap()]);
        let (_, quiet) = run(&with_out);
        assert_eq!(quiet, "");
        assert_eq!(std::fs::read_to_string(&out).unwrap(), stdout);
        assert_eq!(run(&args).1, stdout, "not deterministic: {:?}", args);
    }
}

/// Emits a Haar-type family and feeds its objects back in.
#[test]
fn emitted_objects_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (_, v) = run_json(&["family", "haar-type", "--p", "3"]);
    let doc = |x: &Value| {
        let mut x = x.clone();
        x["schema"] = json!("padwave/1");
        x
    };
    let w = &v["results"]["wavelets"][0];
    let psi = write(d, "psi.json", &doc(&w["psi"]));
    let filt = write(d, "filter.json", &doc(&w["filter"]));
    let mask = write(d, "mask.json", &doc(&v["results"]["mask"]));

    let (code, m) = run_json(&["moments-discrete", "--mask", &filt]);
    assert_eq!(code, 0);
    assert_eq!(m["results"]["order"], "1");

    let (_, f) = run_json(&["fourier", "--function", &psi]);
    let fh = write(d, "psi_hat.json", &f);
    let (_, back) = run_json(&["fourier", "--function", &fh, "--inverse"]);
    assert_eq!(back["pieces"], w["psi"]["pieces"]);

    let (code, s) = run_json(&["verify", "strang-fix", "--k", "1", "--mask", &mask]);
    assert_eq!(code, 0);
    assert_eq!(s["passed"], true);
    // one vanishing moment only: the μ = 1 discrete moment is −p
    let (code, _) = run_json(&["verify", "strang-fix", "--k", "2", "--mask", &mask, "--mode", "integer"]);
    assert_eq!(code, 1);

    let (code, b) = run_json(&[
        "verify",
        "filter-bank",
        "--mask",
        &mask,
        "--wavelet",
        &filt,
        "--wavelet",
        &filt,
    ]);
    assert_eq!(code, 1);
    assert_eq!(b["results"]["orthogonal"], false);
    let w2 = write(d, "filter2.json", &doc(&v["results"]["wavelets"][1]["filter"]));
    let (code, _) = run_json(&[
        "verify",
        "filter-bank",
        "--mask",
        &mask,
        "--wavelet",
        &filt,
        "--wavelet",
        &w2,
    ]);
    assert_eq!(code, 0);
}

#[test]
fn verify_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let unit = write(
        d,
        "unit.json",
        &json!({ "p": 2, "pieces": [{ "ball": { "center": "0", "radiusExp": 0 }, "coeff": "1" }] }),
    );
    let haar = write(
        d,
        "haar.json",
        &json!({ "p": 2, "N": 0, "entries": { "0": "1", "1/2": "1" } }),
    );
    let skew = write(
        d,
        "skew.json",
        &json!({ "p": 2, "N": 0, "entries": { "0": "1", "1/2": "-1" } }),
    );

    let (code, v) = run_json(&["verify", "refinement", "--function", &unit, "--mask", &haar]);
    assert_eq!(
        (code, &v["results"]["direct"], &v["results"]["fourier"]),
        (0, &json!(true), &json!(true))
    );
    let (code, v) = run_json(&["verify", "refinement", "--function", &unit, "--mask", &skew]);
    assert_eq!((code, &v["passed"]), (1, &json!(false)));

    assert_eq!(run(&["verify", "orthonormality", "--mask", &haar]).0, 0);
    assert_eq!(run(&["verify", "orthonormality", "--mask", &skew]).0, 1);
    assert_eq!(run(&["verify", "orthonormality", "--function", &unit]).0, 0);
    assert_eq!(run(&["verify", "orthonormality"]).0, 2);

    let (code, v) = run_json(&["verify", "approx-order", "--function", &unit, "--k", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["witness"], Value::Null);
    let (code, v) = run_json(&["verify", "approx-order", "--function", &unit, "--k", "2"]);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["witness"], json!({ "alpha": "1/2", "order": "1" }));

    let (code, v) = run_json(&["moments", "--function", &unit, "--max-k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["order"], "0");
    assert_eq!(v["results"]["values"]["0"], cyc_one());
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let trunc = d.join("trunc.json");
    std::fs::write(&trunc, "{\"p\": 2").unwrap();
    let trunc = trunc.to_str().unwrap().to_string();
    let missing = d.join("nope.json").to_str().unwrap().to_string();
    let bad_mask = write(d, "m.json", &json!({ "p": 2, "N": 0, "entries": { "1/4": "1" } }));
    let bad_fn = write(d, "f.json", &json!({ "p": 6, "pieces": [] }));
    let zero_den = write(
        d,
        "z.json",
        &json!({ "p": 2, "pieces": [{ "ball": { "center": "1/0", "radiusExp": 0 }, "coeff": "1" }] }),
    );
    for args in [
        vec!["fourier", "--function", &trunc],
        vec!["fourier", "--function", &missing],
        vec!["fourier", "--function", &bad_fn],
        vec!["fourier", "--function", &zero_den],
        vec!["moments", "--function", &trunc],
        vec!["moments-discrete", "--mask", &bad_mask],
        vec!["verify", "strang-fix", "--mask", &bad_mask],
        vec!["verify", "refinement", "--function", &bad_fn, "--mask", &bad_mask],
    ] {
        let (code, v) = run_json(&args);
        assert_eq!(code, 2, "{:?}", args);
        assert_eq!(v["kind"], "error");
    }
}

#[test]
fn selftest_passes_and_is_seeded() {
    let (code, v) = run_json(&["selftest", "--cases", "9", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["parseval"]["runs"], 9);
    assert_eq!(
        run(&["selftest", "--cases", "9", "--seed", "3"]).1,
        run(&["selftest", "--cases", "9", "--seed", "3"]).1
    );
}

#[test]
fn pretty_output_is_a_table() {
    let (code, text) = run(&["haar-mask", "--p", "2", "--pretty"]);
    assert_eq!(code, 0);
    assert!(serde_json::from_str::<Value>(&text).is_err());
    assert!(text.lines().any(|l| l.starts_with("passed") && l.ends_with("true")));
}
