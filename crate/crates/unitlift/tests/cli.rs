use std::process::{Command, Output};

use serde_json::Value;

fn unitlift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unitlift")).args(args).env_remove("UNITLIFT_CAP").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn invert_round_trips() {
    let cases = [
        (r#"{"type":"zmod","m":27}"#, "10"),
        (r#"{"type":"gaussian","p":3,"k":2}"#, "[2,7]"),
        (r#"{"type":"galois","p":2,"k":3,"q":[1,1,0,1]}"#, "[3,4,6]"),
        (r#"{"type":"matrix","n":3,"base":{"type":"zmod","m":27}}"#, "[[19,12,22],[6,5,24],[0,16,11]]"),
        (r#"{"type":"matrix","n":2,"base":{"type":"zmod","m":36}}"#, "[[5,1],[2,3]]"),
        (r#"{"type":"group_ring","group":{"type":"cyclic","n":5},"base":{"type":"zmod","m":25}}"#, "[2,24,0,0,0]"),
        (r#"{"type":"group_ring","group":{"type":"cyclic","n":3},"base":{"type":"zmod","m":12}}"#, "[11,0,6]"),
        (
            r#"{"type":"group_ring","group":{"type":"symmetric","n":3},"base":{"type":"matrix","n":2,"base":{"type":"zmod","m":9}}}"#,
            "[[[2,0],[0,2]],[[0,0],[0,0]],[[0,0],[0,0]],[[8,0],[0,8]],[[0,0],[0,0]],[[0,0],[0,0]]]",
        ),
    ];
    for (ring, element) in cases {
        let first = unitlift(&["invert", "--ring", ring, "--element", element]);
        assert!(first.status.success(), "{ring}: {}", String::from_utf8_lossy(&first.stderr));
        let inverse = json(&first)["inverse"].to_string();
        let back = unitlift(&["invert", "--ring", ring, "--element", &inverse]);
        assert!(back.status.success());
        let original: Value = serde_json::from_str(element).unwrap();
        assert_eq!(json(&back)["inverse"], original, "{ring}");
    }
}

#[test]
fn json_output_is_byte_stable() {
    let runs = [
        vec!["invert", "--ring", r#"{"type":"zmod","m":27}"#, "--element", "10"],
        vec!["enumerate", "--ring", r#"{"type":"gaussian","p":3,"k":1}"#],
        vec!["count", "--ring", r#"{"type":"matrix","n":2,"base":{"type":"zmod","m":9}}"#],
        vec!["verify", "--ring", r#"{"type":"zmod","m":27}"#],
        vec!["lift-trace", "--ring", r#"{"type":"zmod","m":27}"#, "--element", "10"],
    ];
    for args in runs {
        let (a, b) = (unitlift(&args), unitlift(&args));
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn documented_examples_and_exit_codes() {
    let out = unitlift(&["invert", "--ring", r#"{"type":"zmod","m":27}"#, "--element", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with(r#"{"inverse":19,"#));

    let out = unitlift(&["invert", "--ring", r#"{"type":"zmod","m":12}"#, "--element", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let out = unitlift(&["count", "--ring", r#"{"type":"gaussian","p":3,"k":2}"#]);
    assert_eq!(json(&out)["count"], 72);

    let out = unitlift(&["count", "--ring", r#"{"type":"nonsense"}"#]);
    assert_eq!(out.status.code(), Some(3));
    let out = unitlift(&["invert", "--ring", r#"{"type":"zmod","m":27}"#]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cap_comes_from_the_environment() {
    let args = ["enumerate", "--ring", r#"{"type":"zmod","m":27}"#];
    let out = Command::new(env!("CARGO_BIN_EXE_unitlift")).args(args).env("UNITLIFT_CAP", "10").output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    let out = Command::new(env!("CARGO_BIN_EXE_unitlift")).args(args).env("UNITLIFT_CAP", "27").output().unwrap();
    assert_eq!(json(&out)["count"], 18);
}

#[test]
fn ring_and_chain_from_files() {
    let dir = std::env::temp_dir().join(format!("unitlift-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ring = dir.join("ring.json");
    let chain = dir.join("chain.json");
    std::fs::write(&ring, r#"{"type":"zmod","m":81}"#).unwrap();
    std::fs::write(&chain, r#"{"ideals":[{"generator":9},{"generator":0}],"t":[2],"s":[9]}"#).unwrap();
    let out = unitlift(&[
        "lift-trace",
        "--ring",
        ring.to_str().unwrap(),
        "--chain",
        chain.to_str().unwrap(),
        "--element",
        "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let levels = json(&out);
    assert_eq!(levels.as_array().unwrap().len(), 2);
    assert_eq!(levels[1]["exponent"], 9);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bench_csv_is_deterministic_apart_from_timings() {
    let args = ["bench", "--n", "3", "--p", "3", "--k", "3", "--trials", "20", "--seed", "1"];
    let strip = |o: &Output| -> Vec<String> {
        String::from_utf8(o.stdout.clone())
            .unwrap()
            .lines()
            .map(|l| {
                let mut f: Vec<&str> = l.split(',').collect();
                f[5] = "-";
                f.join(",")
            })
            .collect()
    };
    let (a, b) = (unitlift(&args), unitlift(&args));
    assert!(a.status.success());
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(strip(&a).len(), 61);
    assert!(String::from_utf8_lossy(&a.stderr).contains("agreed on 20 of 20"));
}
