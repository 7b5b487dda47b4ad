//! Serialized example reports compared against committed fixtures.
//! Run with `UPDATE_GOLDEN=1` to regenerate them.

use std::path::PathBuf;

use ncfib::ExampleReport;

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn render(args: &[&str]) -> String {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["ncfib"];
    full.extend_from_slice(args);
    let code = ncfib::run(full, &mut out, &mut err);
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    String::from_utf8(out).unwrap()
}

fn compare(file: &str, actual: &str) {
    let path = golden_path(file);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{file} differs from the fixture");
}

#[test]
fn s3_json_golden() {
    let out = render(&["example", "s3_over_z2", "--format", "json"]);
    compare("s3_over_z2.json", &out);
    let r: ExampleReport = serde_json::from_str(&out).unwrap();
    assert_eq!(r.converged[..3], [1, 2, 1]);
}

#[test]
fn matrix_json_golden() {
    let out = render(&["example", "m3_over_m2", "--format", "json"]);
    compare("m3_over_m2.json", &out);
}

#[test]
fn text_goldens() {
    compare("s3_over_z2.txt", &render(&["example", "s3"]));
    compare("m3_over_m2.txt", &render(&["example", "matrix"]));
}

#[test]
fn json_round_trips() {
    for name in ["s3", "matrix"] {
        let out = render(&["example", name, "--format", "json"]);
        let r: ExampleReport = serde_json::from_str(&out).unwrap();
        let again = serde_json::to_string_pretty(&r).unwrap() + "\n";
        assert_eq!(again, out);
        assert_eq!(r.schema_version, ncfib::SCHEMA_VERSION);
        // Text output is a function of the report alone.
        assert_eq!(ncfib::render::example_text(&r), render(&["example", name]));
    }
}
