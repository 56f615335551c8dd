//! End-to-end tests of the binary: output values, file formats, exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn kerov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kerov"))
        .args(args)
        .env_remove("KEROV_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn assert_exit(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        stdout(output),
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn coeff_values_match_the_tables() {
    let cases: &[(&[&str], &str)] = &[
        (
            &[
                "coeff",
                "--kind",
                "kerov",
                "--k",
                "7",
                "--monomial",
                "R2^2",
                "--no-cache",
            ],
            "224",
        ),
        (
            &[
                "coeff",
                "--kind",
                "gr",
                "--k",
                "7",
                "--monomial",
                "C2^2",
                "--no-cache",
            ],
            "203/3",
        ),
        (
            &[
                "coeff",
                "--kind",
                "kerov",
                "--k",
                "6",
                "--monomial",
                "R3*R2",
                "--no-cache",
            ],
            "35",
        ),
        (
            &[
                "coeff",
                "--kind",
                "gr",
                "--k",
                "6",
                "--monomial",
                "C5",
                "--no-cache",
            ],
            "35/4",
        ),
    ];
    for (args, expected) in cases {
        let output = kerov(args);
        assert_exit(&output, 0);
        assert_eq!(stdout(&output).trim(), *expected, "args: {args:?}");
    }
}

#[test]
fn coeff_rejects_unsupported_monomials() {
    let output = kerov(&["coeff", "--kind", "kerov", "--k", "5", "--monomial", "R2^3"]);
    assert_exit(&output, 2);
    let output = kerov(&["coeff", "--kind", "kerov", "--k", "5", "--monomial", "nope"]);
    assert_exit(&output, 2);
    let output = kerov(&["coeff", "--kind", "gr", "--k", "5", "--monomial", "R2"]);
    assert_exit(&output, 2);
    // Unknown flags are a usage error.
    let output = kerov(&["coeff", "--whatever"]);
    assert_exit(&output, 2);
}

#[test]
fn cpoly_prints_canonical_text() {
    let cases: &[(&str, &str)] = &[
        ("2", "R2"),
        ("1", "0"),
        ("6", "R2^3 + 6*R2*R4 + 4*R3^2 + 5*R6"),
    ];
    for (k, expected) in cases {
        let output = kerov(&["cpoly", "--k", k]);
        assert_exit(&output, 0);
        assert_eq!(stdout(&output).trim(), *expected);
    }
}

#[test]
fn csv_and_json_outputs_are_deterministic() {
    let args = &[
        "coeff",
        "--kind",
        "kerov",
        "--k",
        "5",
        "--monomial",
        "R4",
        "--format",
        "json",
        "--no-cache",
    ];
    let first = kerov(args);
    let second = kerov(args);
    assert_exit(&first, 0);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(
        stdout(&first).trim(),
        r#"{"k":5,"monomial":"R4","value":"15"}"#
    );

    let output = kerov(&["cpoly", "--k", "4", "--format", "csv"]);
    assert_exit(&output, 0);
    assert_eq!(stdout(&output), "k,monomial,value\n4,R2^2,1\n4,R4,3\n");
}

#[test]
fn enumerate_writes_map_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x5.json");
    let output = kerov(&[
        "enumerate",
        "--family",
        "X",
        "--k",
        "5",
        "--i",
        "2",
        "--j",
        "2",
        "--out",
        path.to_str().unwrap(),
        "--no-cache",
    ]);
    assert_exit(&output, 0);
    assert!(stdout(&output).contains("5 maps"));
    let maps: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(maps.as_array().unwrap().len(), 5);
    let first = &maps.as_array().unwrap()[0];
    assert_eq!(first["k"], 5);
    assert_eq!(first["black_weights"], serde_json::json!([1, 1]));

    let path = dir.path().join("y3.json");
    let output = kerov(&[
        "enumerate",
        "--family",
        "Y",
        "--k",
        "3",
        "--u",
        "4",
        "--out",
        path.to_str().unwrap(),
        "--no-cache",
    ]);
    assert_exit(&output, 0);
    assert!(stdout(&output).contains("1 maps"));

    // Parity: an even edge count gives an empty family.
    let path = dir.path().join("x6.json");
    let output = kerov(&[
        "enumerate",
        "--family",
        "X",
        "--k",
        "6",
        "--i",
        "2",
        "--j",
        "2",
        "--out",
        path.to_str().unwrap(),
        "--no-cache",
    ]);
    assert_exit(&output, 0);
    assert!(stdout(&output).contains("0 maps"));

    let output = kerov(&["enumerate", "--family", "Z", "--k", "5", "--no-cache"]);
    assert_exit(&output, 2);
    let output = kerov(&["enumerate", "--family", "X", "--k", "5", "--no-cache"]);
    assert_exit(&output, 2);
}

fn write_config(path: &Path, contents: &str) {
    std::fs::write(path, contents).unwrap();
}

#[test]
fn slide_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("config.json");
    write_config(
        &input,
        r#"{"k":3,"sigma_white":[[1],[2],[3]],"sigma_black":[[1,2,3]],"root":1,
          "black_weights":[3],"special_edges":[2],
          "directions":[{"edge":2,"white":"cw","black":"none"}]}"#,
    );
    let once = dir.path().join("once.json");
    let twice = dir.path().join("twice.json");
    let output = kerov(&[
        "slide",
        "--in",
        input.to_str().unwrap(),
        "--out",
        once.to_str().unwrap(),
    ]);
    assert_exit(&output, 0);
    let output = kerov(&[
        "slide",
        "--in",
        once.to_str().unwrap(),
        "--out",
        twice.to_str().unwrap(),
    ]);
    assert_exit(&output, 0);

    // Double application restores the input, canonically formatted.
    let first: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&input).unwrap()).unwrap();
    let second: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&twice).unwrap()).unwrap();
    assert_eq!(first, second);

    // And the single slide flipped the direction.
    let middle: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&once).unwrap()).unwrap();
    assert_eq!(middle["directions"][0]["white"], "ccw");
}

#[test]
fn slide_with_no_special_edges_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("config.json");
    write_config(
        &input,
        r#"{"k":3,"sigma_white":[[1],[2],[3]],"sigma_black":[[1,2,3]],"root":1,
           "black_weights":[3],"special_edges":[],"directions":[]}"#,
    );
    let output = kerov(&["slide", "--in", input.to_str().unwrap()]);
    assert_exit(&output, 0);
    let slid: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(slid["sigma_white"], serde_json::json!([[1], [2], [3]]));
    assert_eq!(slid["sigma_black"], serde_json::json!([[1, 2, 3]]));
}

#[test]
fn slide_recolours_colour_changing_configurations() {
    // Special edges at the odd black vertex of a two-black expander, free
    // ends counterclockwise: the slide moves them onto the other black
    // vertex and the output is bipartite only after recolouring.
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("config.json");
    write_config(
        &input,
        r#"{"k":5,"sigma_white":[[1,3],[2,5,4]],"sigma_black":[[1,4,2],[3,5]],"root":1,
           "black_weights":[1,1],"special_edges":[1,2,4],
           "directions":[{"edge":1,"white":"ccw","black":"none"},
                         {"edge":2,"white":"ccw","black":"none"},
                         {"edge":4,"white":"ccw","black":"none"}]}"#,
    );
    let output = kerov(&["slide", "--in", input.to_str().unwrap()]);
    assert_exit(&output, 0);
    let slid: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    // One black vertex of degree five with the forced weight; the former
    // odd black vertex is now a white vertex owning the special edges.
    assert_eq!(slid["sigma_black"], serde_json::json!([[1, 5, 4, 2, 3]]));
    assert_eq!(slid["black_weights"], serde_json::json!([3]));
    assert_eq!(slid["sigma_white"][0], serde_json::json!([1, 4, 2]));
    for entry in slid["directions"].as_array().unwrap() {
        assert_eq!(entry["white"], "none");
        assert_eq!(entry["black"], "cw");
    }
}

#[test]
fn slide_reports_invalid_configurations() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("config.json");
    write_config(
        &input,
        r#"{"k":3,"sigma_white":[[1],[2],[3]],"sigma_black":[[1,2,3]],"root":1,
           "black_weights":[3],"special_edges":[1,2],
           "directions":[{"edge":1,"white":"none","black":"none"},
                         {"edge":2,"white":"none","black":"cw"}]}"#,
    );
    let output = kerov(&["slide", "--in", input.to_str().unwrap()]);
    assert_exit(&output, 2);
    assert!(String::from_utf8_lossy(&output.stderr).contains("CornerOrder"));
}

#[test]
fn slide_fails_cleanly_when_the_result_has_an_odd_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("config.json");
    // Sliding the white end of edge 2 onto the first black vertex creates
    // a triangle, which no recolouring can fix.
    write_config(
        &input,
        r#"{"k":4,"sigma_white":[[1,2,3,4]],"sigma_black":[[1,3],[2,4]],"root":1,
           "black_weights":[1,1],"special_edges":[2],
           "directions":[{"edge":2,"white":"cw","black":"none"}]}"#,
    );
    let output = kerov(&["slide", "--in", input.to_str().unwrap()]);
    assert_exit(&output, 1);
}

#[test]
fn verify_commands_pass_and_exit_zero() {
    let output = kerov(&["verify", "identities"]);
    assert_exit(&output, 0);
    assert!(stdout(&output).contains("7/7 identities PASS"));

    let output = kerov(&["verify", "chain", "--k", "5", "--no-cache"]);
    assert_exit(&output, 0);
    assert!(stdout(&output).contains("slack 3|X| - |Y| = 0 => PASS"));

    let output = kerov(&["verify", "sliding", "--cases", "200", "--seed", "42"]);
    assert_exit(&output, 0);
    assert!(stdout(&output).contains("PASS"));

    let output = kerov(&["verify", "conjecture", "--k", "5", "--no-cache"]);
    assert_exit(&output, 0);

    // Over the default guard: invalid input.
    let output = kerov(&["verify", "chain", "--k", "11", "--no-cache"]);
    assert_exit(&output, 2);
}

#[test]
fn chain_json_report_is_structured() {
    let output = kerov(&[
        "verify",
        "chain",
        "--k",
        "5",
        "--format",
        "json",
        "--no-cache",
    ]);
    assert_exit(&output, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["k"], 5);
    assert_eq!(report["slack"], 0);
    assert_eq!(report["counts"]["x"], 5);
    assert_eq!(report["counts"]["y"], 15);
    assert_eq!(report["counts"]["y_odd"], 5);
    assert_eq!(report["counts"]["t_rest"], 5);
    assert!(report["relations"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["pass"] == true));
}

#[test]
fn cache_directory_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let args = &[
        "coeff",
        "--kind",
        "kerov",
        "--k",
        "5",
        "--monomial",
        "R4",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ];
    let first = kerov(args);
    assert_exit(&first, 0);
    assert!(dir.path().join("linear_k5_l4.json").exists());
    // Served from the cache on the second run, same answer.
    let second = kerov(args);
    assert_exit(&second, 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn cache_env_variable_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_kerov"))
        .args(["coeff", "--kind", "kerov", "--k", "4", "--monomial", "R3"])
        .env("KEROV_CACHE_DIR", dir.path())
        .output()
        .expect("binary runs");
    assert_exit(&output, 0);
    assert_eq!(stdout(&output).trim(), "5");
    assert!(dir.path().join("linear_k4_l3.json").exists());
}
