use nilprod::manifest::{Command, Declaration, Entry, Kind, Line, Manifest, Value, WORD_KEYS};
use nilprod::parse_manifest;
use nilprod::run::{run, without_timing};
use nilprod_core::exactlin::Q;
use num_bigint::BigInt;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Q> {
    (-40i64..40, 1i64..6).prop_map(|(n, d)| Q::new(BigInt::from(n), BigInt::from(d)))
}

fn identifier() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,6}"
}

fn key() -> impl Strategy<Value = String> {
    identifier().prop_filter("word keys always hold text", |k| !WORD_KEYS.contains(&k.as_str()))
}

fn value() -> impl Strategy<Value = Value> {
    prop_oneof![
        prop::collection::vec(rational(), 0..5).prop_map(Value::List),
        (1usize..4, 0usize..4)
            .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(rational(), c), r))
            .prop_map(Value::Matrix),
        "[a-z0-9][a-z0-9 +*/^(),-]{0,12}[a-z0-9)]".prop_map(|s| Value::Text(s.split_whitespace().collect::<Vec<_>>().join(" "))),
    ]
}

fn entry() -> impl Strategy<Value = Entry> {
    (key(), prop::collection::vec(identifier(), 0..3), value())
        .prop_map(|(key, args, value)| Entry { key, args, value, line: Line(0) })
}

/// Kinds whose declarations reference nothing.
const FREE_KINDS: [Kind; 7] = [Kind::Fgab, Kind::Gp, Kind::Operad, Kind::Sc, Kind::Lie, Kind::Leib, Kind::Xmod];

fn manifest() -> impl Strategy<Value = Manifest> {
    prop::collection::vec((0..FREE_KINDS.len(), prop::collection::vec(entry(), 0..4)), 1..6).prop_flat_map(|decls| {
        let declarations: Vec<Declaration> = decls
            .into_iter()
            .enumerate()
            .map(|(i, (k, entries))| Declaration { kind: FREE_KINDS[k], name: format!("x{i}"), entries, line: Line(0) })
            .collect();
        let algebras: Vec<String> =
            declarations.iter().filter(|d| d.kind.is_algebra()).map(|d| d.name.clone()).collect();
        let n = algebras.len();
        prop::collection::vec((0..n.max(1), 1usize..4), if n == 0 { 0..1 } else { 0..4 }).prop_map(move |picks| {
            let commands = picks
                .into_iter()
                .map(|(i, k)| Command { words: vec!["nilpotentise".into(), algebras[i].clone(), k.to_string()], line: Line(0) })
                .collect();
            Manifest { declarations: declarations.clone(), commands }
        })
    })
}

proptest! {
    #[test]
    fn printing_and_reparsing_is_the_identity(m in manifest()) {
        let text = m.to_string();
        let back = parse_manifest(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back, m);
    }
}

const SUITES: &str = "\
[lie h] preset = heisenberg
[leib s] preset = leibniz_square

[commands]
check gamma 6
check birkhoff 4
check xmod 4
lcs h
commute s 2
";

#[test]
fn documents_are_deterministic() {
    let m = parse_manifest(SUITES).unwrap();
    let a = run(&m, 42);
    let b = run(&m, 42);
    assert!(a.passed);
    assert_eq!(without_timing(&a), without_timing(&b));
    assert_eq!(serde_json::to_string(&without_timing(&a)).unwrap(), serde_json::to_string(&without_timing(&b)).unwrap());
}

#[test]
fn example_manifests_pass() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../manifests");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "nil") {
            let m = parse_manifest(&std::fs::read_to_string(&path).unwrap()).unwrap();
            let doc = run(&m, 0);
            let failed: Vec<_> = doc.results.iter().filter(|r| r.failed()).collect();
            assert!(failed.is_empty(), "{}: {failed:?}", path.display());
            seen += 1;
        }
    }
    assert!(seen > 0);
}
