use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;

use prodfree::{Alphabet, FreeWord};
use prodfree_cli::parse::{parse_endo, parse_word, print_endo};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"))
}

/// Runs the binary; fixture names are resolved when they end in a known
/// extension.
fn run(args: &[&str]) -> (i32, String, String) {
    let resolved: Vec<String> = args
        .iter()
        .map(|a| if a.ends_with(".endo") || a.ends_with(".json") || a.ends_with(".oracle") { fixture(a) } else { a.to_string() })
        .collect();
    let out = Command::new(env!("CARGO_BIN_EXE_prodfree")).args(&resolved).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("classify_type1", &["classify", "type1.endo"]),
    ("classify_swap_json", &["classify", "swap.json"]),
    ("fix_counterexample", &["fix", "counterexample.endo"]),
    ("fix_nielsen", &["fix", "nielsen.endo", "--oracle", "nielsen.oracle"]),
    ("per_swap", &["per", "swap.json"]),
    ("whitehead_a1_square", &["whitehead", "--variant", "a", "--source", "a1", "--target", "a1^2"]),
    ("whitehead_product_e", &["whitehead", "--variant", "e", "--source", "a1 | b1", "--target", "a1^2 | b1^3", "--bound", "4"]),
    ("uc_collapse", &["dynamics", "uc", "collapse.endo"]),
    ("iterate_doubling", &["dynamics", "iterate", "doubling.endo", "--point", "a1 a1 a1 | b1 b1 b1", "--depth", "3", "--steps", "3"]),
    ("word_root", &["word", "root", "a1 a2 a1 a2"]),
];

/// Set `BLESS=1` to rewrite the golden files from the current output.
#[test]
fn golden_outputs() {
    let bless = std::env::var_os("BLESS").is_some();
    for (name, args) in GOLDEN {
        let (_, out, err) = run(args);
        assert!(err.is_empty(), "{name}: {err}");
        let path = golden_path(name);
        if bless {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &out).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
        assert_eq!(out, expected, "{name}");
    }
}

#[test]
fn spec_examples() {
    let (code, out, _) = run(&["classify", "type1.endo"]);
    assert_eq!(code, 0);
    for key in ["type: I\n", "u: ", "v: ", "P: ", "Q: ", "R: ", "S: "] {
        assert!(out.contains(key), "{key} missing from\n{out}");
    }
    let (code, out, _) = run(&["fix", "counterexample.endo"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: NOT finitely generated\n"));
    assert!(out.contains("not finitely generated."));
    let (code, out, _) = run(&["whitehead", "--variant", "a", "--source", "a1", "--target", "a1^2"]);
    assert_eq!(code, 0);
    assert!(out.contains("answer: No\n"));
}

/// Reads `key: value` lines and `  - item` lists back into JSON values.
fn plain_to_json(text: &str) -> BTreeMap<String, Value> {
    let mut out = BTreeMap::new();
    let mut list: Option<(String, Vec<Value>)> = None;
    for line in text.lines() {
        if let Some(item) = line.strip_prefix("  - ") {
            list.as_mut().unwrap().1.push(Value::String(item.into()));
            continue;
        }
        if let Some((k, v)) = list.take() {
            out.insert(k, Value::Array(v));
        }
        let (key, value) = line.split_once(':').unwrap();
        let value = value.trim_start();
        let v = match value {
            "" => {
                list = Some((key.into(), Vec::new()));
                continue;
            }
            "(none)" => Value::Array(Vec::new()),
            "yes" => Value::Bool(true),
            "no" => Value::Bool(false),
            _ => Value::String(value.into()),
        };
        out.insert(key.into(), v);
    }
    if let Some((k, v)) = list {
        out.insert(k, Value::Array(v));
    }
    out
}

#[test]
fn json_matches_plain() {
    let mut cases: Vec<Vec<&str>> = GOLDEN.iter().map(|(_, a)| a.to_vec()).collect();
    cases.push(vec!["fix", "nielsen.endo"]);
    cases.push(vec!["per", "doubling.endo"]);
    cases.push(vec!["dynamics", "classify-boundary", "doubling.endo", "--oracle", "doubling.oracle", "--point", "a1^16 | b1^16"]);
    cases.push(vec!["whitehead", "--variant", "m", "--source", "a1", "--target", "a1 a2 a1^-1 a2^-1", "--bound", "2"]);
    for args in cases {
        let (code, plain, _) = run(&args);
        let mut with_json = vec!["--json"];
        with_json.extend(&args);
        let (jcode, json, _) = run(&with_json);
        assert_eq!(code, jcode, "{args:?}");
        let Value::Object(mut obj) = serde_json::from_str::<Value>(&json).unwrap() else { panic!("not an object") };
        assert_eq!(obj.remove("decided"), Some(Value::Bool(code == 0)), "{args:?}");
        let from_json: BTreeMap<String, Value> = obj.into_iter().collect();
        assert_eq!(plain_to_json(&plain), from_json, "{args:?}");
    }
}

#[test]
fn exit_codes_follow_verdicts() {
    let table: &[(&[&str], i32)] = &[
        (&["classify", "type1.endo"], 0),
        (&["classify", "noncommuting.endo"], 1),
        (&["classify", "bad_word.endo"], 1),
        (&["classify", "missing.endo"], 1),
        (&["fix", "type1.endo"], 0),
        (&["fix", "counterexample.endo"], 0),
        (&["fix", "nielsen.endo"], 2),
        (&["fix", "nielsen.endo", "--oracle", "nielsen.oracle"], 0),
        (&["per", "swap.json"], 0),
        (&["per", "doubling.endo"], 2),
        (&["whitehead", "--variant", "a", "--source", "a1", "--target", "a2"], 0),
        (&["whitehead", "--variant", "m", "--source", "a1", "--target", "a1 a2 a1^-1 a2^-1", "--bound", "2"], 2),
        (&["whitehead", "--variant", "q", "--source", "a1", "--target", "a2"], 1),
        (&["dynamics", "uc", "collapse.endo"], 0),
        (&["dynamics", "iterate", "type1.endo", "--point", "a1 | b1"], 1),
        (&["dynamics", "classify-boundary", "doubling.endo", "--oracle", "doubling.oracle", "--point", "a1^16 | b1^16"], 0),
        (&["dynamics", "classify-boundary", "swap.json", "--point", "a1^16 | b1^16"], 2),
        (&["dynamics", "classify-boundary", "swap.json", "--point", "a1^16 | b2^16"], 1),
        (&["word", "reduce", "a1 b1"], 1),
        (&["no-such-command"], 1),
    ];
    for (args, expected) in table {
        let (code, _, err) = run(args);
        assert_eq!(code, *expected, "{args:?}: {err}");
        if code == 1 {
            assert!(!err.is_empty(), "{args:?} failed silently");
        }
    }
}

#[test]
fn errors_report_columns() {
    let (_, _, err) = run(&["classify", "bad_word.endo"]);
    assert!(err.contains("line 3: column 12"), "{err}");
    let (_, _, err) = run(&["word", "reduce", "a1 a2 c3"]);
    assert!(err.contains("column 7"), "{err}");
}

#[test]
fn fixture_documents_round_trip() {
    for name in ["type1.endo", "counterexample.endo", "nielsen.endo", "doubling.endo", "collapse.endo", "noncommuting.endo"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let spec = parse_endo(&text).unwrap();
        let printed = print_endo(&spec);
        assert_eq!(parse_endo(&printed).unwrap(), spec, "{name}");
        assert_eq!(print_endo(&parse_endo(&printed).unwrap()), printed, "{name}");
    }
    let json = parse_endo(&std::fs::read_to_string(fixture("swap.json")).unwrap()).unwrap();
    assert_eq!(print_endo(&json), "n: 2\nm: 2\na1 -> 1 | b1\na2 -> 1 | b2\nb1 -> a1 | 1\nb2 -> a2 | 1\n");
}

#[test]
fn words_round_trip() {
    let al = Alphabet::b(3);
    for w in prodfree::freeword::words_up_to(al, 4) {
        assert_eq!(parse_word(&w.to_string(), al).unwrap(), w);
    }
    let w = parse_word("b1 b2 b2^-1 b3^2", al).unwrap();
    assert_eq!(w.to_string(), "b1 b3 b3");
    assert_eq!(parse_word(&w.to_string(), al).unwrap(), w);
    assert_eq!(FreeWord::identity(al).to_string(), "1");
}
