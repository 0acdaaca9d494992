use anick_cli::commands::{self, random_instance, Format};
use anick_cli::files::{ComplexFile, DatumFile, PresentationFile};
use anick_cli::{main_with, CliError, EXIT_CAP, EXIT_NOT_MORSE, EXIT_OK, EXIT_PARSE, EXIT_VERIFICATION};
use anick_core::anick::builtins::{builtin, iyudu_shkarin};
use anick_core::anick::{anick_resolution, section7_matching};
use anick_core::bimodule::BimoduleWeight;
use anick_core::morse::{BasedComplex, Cell, PartialMatching};
use anick_core::{Field, GroebnerData, Presentation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;

const Q: Field = Field::Rational;
const CORPUS: [&str; 6] = ["example42", "chinese:2", "chinese:3", "iyudu-shkarin:5", "jw-counterexample", "algebra-b"];

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["anick"];
    argv.extend_from_slice(args);
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_builtin(dir: &Path, name: &str) -> String {
    let (code, text, _) = run(&["builtin", name]);
    assert_eq!(code, EXIT_OK);
    let path = dir.join(format!("{}.toml", name.replace(':', "_")));
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn presentation_files_round_trip() {
    for field in [Q, Field::prime(7).unwrap()] {
        for name in CORPUS {
            let p = builtin(field, name).unwrap().unwrap();
            let file = PresentationFile::from_presentation(&p);
            let text = file.to_toml();
            let reparsed = PresentationFile::parse(&text).unwrap();
            assert_eq!(reparsed, file, "{name}");
            assert_eq!(reparsed.to_toml(), text, "{name}");
            assert_eq!(reparsed.to_presentation(Some(&text)).unwrap(), p, "{name}");
        }
    }
}

#[test]
fn complex_files_round_trip_and_reduce() {
    let p = iyudu_shkarin(Q, 4).unwrap();
    let g = GroebnerData::new(&p).unwrap();
    let res = anick_resolution(&g, 4, Some(6)).unwrap();
    let (x, m) = section7_matching(&res, &p.quiver).unwrap();
    let file = ComplexFile::new(&p, &x, &m);
    let json = file.to_json();
    let reparsed = ComplexFile::parse(&json).unwrap();
    assert_eq!(reparsed, file);
    let (p2, x2, m2) = reparsed.build().unwrap();
    assert_eq!(p2, p);
    assert_eq!(x2, x);
    assert_eq!(m2, m);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s7.json");
    std::fs::write(&path, json).unwrap();
    let (code, out, err) = run(&["morse", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("d∘d = 0: holds"));
    assert!(out.contains("equivalence: gf = 1"));
}

#[test]
fn datum_files_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let (d, delta) = random_instance(&mut rng);
        let file = DatumFile::new(&d, delta.as_ref(), None);
        let reparsed = DatumFile::parse(&file.to_json()).unwrap();
        assert_eq!(reparsed, file);
        let (d2, delta2, k2) = reparsed.build().unwrap();
        assert_eq!(d2, d);
        assert_eq!(delta2, delta);
        assert!(k2.is_none());
        let out = commands::hpl_file(&reparsed).unwrap();
        assert_eq!(out.ok, delta.is_some());
    }
}

#[test]
fn structured_output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let e42 = write_builtin(dir.path(), "example42");
    for args in [
        vec!["--format", "structured", "resolve", &e42, "--length", "3", "--transfer-maps"],
        vec!["--format", "json", "chains", &e42, "--max-weight", "4"],
        vec!["--format", "structured", "hpl", "--random", "3", "--seed", "5"],
    ] {
        let (c1, a, _) = run(&args);
        let (c2, b, _) = run(&args);
        assert_eq!((c1, &a), (c2, &b));
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["version"], 1);
        assert!(v["format"].as_str().unwrap().starts_with("anick-"));
    }
}

#[test]
fn builtin_then_gldim() {
    let dir = tempfile::tempdir().unwrap();
    let c2 = write_builtin(dir.path(), "chinese:2");
    let (code, out, _) = run(&["gldim", &c2]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "gldim = 3\n");
}

#[test]
fn empty_relations_give_a_length_one_resolution() {
    let text = r#"
format = "anick-presentation"
version = 1
field = "Q"
vertices = ["1", "2"]
order = ["a", "b"]

[[arrows]]
name = "a"
source = "1"
target = "2"

[[arrows]]
name = "b"
source = "1"
target = "2"
"#;
    let p: Presentation = PresentationFile::parse(text).unwrap().to_presentation(Some(text)).unwrap();
    let out = commands::resolve(&p, 4, None, false).unwrap();
    assert!(out.ok);
    let v = &out.structured;
    let cells = v["cells"].as_array().unwrap();
    let sizes: Vec<usize> = cells.iter().map(|l| l.as_array().unwrap().len()).collect();
    assert_eq!(sizes, [2, 2, 0, 0, 0]);
    assert_eq!(v["complete"], true);
    let g = commands::gldim_cmd(&p, None, None).unwrap();
    assert_eq!(g.text, "gldim = 1\n");
}

#[test]
fn parse_errors_carry_positions() {
    let text = "format = \"anick-presentation\"\nversion = 1\nfield = \"Q\"\nvertices = [\"1\"]\norder = [\"x\"]\nrelations = [\"x*q\"]\n\n[[arrows]]\nname = \"x\"\nsource = \"1\"\ntarget = \"1\"\n";
    match PresentationFile::parse(text).unwrap().to_presentation(Some(text)) {
        Err(CliError::File { line, .. }) => assert_eq!(line, 6),
        other => panic!("expected a located parse error, got {other:?}"),
    }
    match PresentationFile::parse("format = \"anick-presentation\"\nversion = \n") {
        Err(CliError::File { line, column, .. }) => assert_eq!((line, column), (2, 11)),
        other => panic!("expected a located parse error, got {other:?}"),
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, text).unwrap();
    let (code, _, err) = run(&["resolve", path.to_str().unwrap(), "--length", "1"]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("6:"), "{err}");
    let (code, _, _) = run(&["resolve", "/nonexistent.toml", "--length", "1"]);
    assert_eq!(code, EXIT_PARSE);
}

#[test]
fn cap_violations_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let is = write_builtin(dir.path(), "iyudu-shkarin:4");
    assert_eq!(run(&["resolve", &is, "--length", "3"]).0, EXIT_CAP);
    assert_eq!(run(&["resolve", &is, "--length", "3", "--max-degree", "9"]).0, EXIT_CAP);
    assert_eq!(run(&["chains", &is, "--max-weight", "3"]).0, EXIT_CAP);
    assert_eq!(run(&["gldim", &is]).0, EXIT_CAP);
    assert_eq!(run(&["resolve", &is, "--length", "3", "--max-degree", "6"]).0, EXIT_OK);
}

/// Two edges and two vertices in a square, matched so that the zigzag paths
/// go round in a cycle.
fn cyclic_matching() -> ComplexFile {
    let p = Presentation::free(Q, &["x"]).unwrap();
    let mut x = BasedComplex::new(Q);
    for (n, label) in [(0, "t1"), (0, "t2"), (1, "u1"), (1, "u2")] {
        x.add_cell(n, Cell { label: label.into(), source: 0, target: 0 });
    }
    let e = p.quiver.vertex(0);
    let one = BimoduleWeight::term(e.clone(), e, Q.one());
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        x.add_arrow(1, i, j, &one);
    }
    let mut m = PartialMatching::new();
    m.insert(1, 0, 0);
    m.insert(1, 1, 1);
    ComplexFile::new(&p, &x, &m)
}

#[test]
fn non_morse_matchings_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cyclic.json");
    std::fs::write(&path, cyclic_matching().to_json()).unwrap();
    let (code, _, err) = run(&["morse", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_NOT_MORSE, "{err}");

    let mut missing = cyclic_matching();
    missing.matching = vec![[1, 0, 5]];
    std::fs::write(&path, missing.to_json()).unwrap();
    assert_eq!(run(&["morse", path.to_str().unwrap()]).0, EXIT_NOT_MORSE);
}

#[test]
fn failed_checks_exit_five() {
    let dir = tempfile::tempdir().unwrap();
    let jw = write_builtin(dir.path(), "jw-counterexample");
    let (code, out, _) = run(&["minimality", &jw, "--length", "3"]);
    assert_eq!(code, EXIT_VERIFICATION);
    assert!(out.contains("direct: not minimal, (x1,x2*x3,x4*x5) -> (x6,x7*x4*x5) with scalar -1"));
    let b = write_builtin(dir.path(), "algebra-b");
    assert_eq!(run(&["minimality", &b, "--length", "3"]).0, EXIT_OK);

    // a basis that is not Gröbner-Shirshov: x*x - y and x*y overlap badly
    let text = "format = \"anick-presentation\"\nversion = 1\nfield = \"Q\"\nvertices = [\"1\"]\norder = [\"x\", \"y\"]\nrelations = [\"x*x - y*y\"]\nbasis = [\"x*x - y*y\"]\n\n[[arrows]]\nname = \"x\"\nsource = \"1\"\ntarget = \"1\"\n\n[[arrows]]\nname = \"y\"\nsource = \"1\"\ntarget = \"1\"\n";
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, text).unwrap();
    let (code, _, err) = run(&["check-gsb", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_VERIFICATION, "{err}");
}

#[test]
fn text_rendering_matches_the_report() {
    let p = builtin(Q, "example42").unwrap().unwrap();
    let out = commands::resolve(&p, 2, None, false).unwrap();
    assert_eq!(out.render(Format::Text), out.text);
    assert!(out.text.contains("  (3, 0, [(1, e_1, a'*a), (1, a*a', e_2)])"));
    assert!(out.text.contains("  (3, 3, [(1, a, a)])"));
}
