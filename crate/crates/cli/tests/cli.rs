use std::fs;
use std::path::Path;
use std::process::Command;

use pseudospline::analysis::SupportOctagon;
use pseudospline::format::{parse_fraction, parse_grid_csv, parse_pgm, MaskDocument};
use pseudospline::laurent::{int, ratio, Exponent2, Rational};
use pseudospline::subdivision::{GridFunction, Window};
use pseudospline::symbols::{fourdir_box, pseudospline as make_pseudospline};
use pseudospline_cli::{load_mask_document, run, verify};

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pseudospline").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(path).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn grid_csv(g: &GridFunction) -> String {
    pseudospline::format::write_grid_csv(g)
}

#[test]
fn mask_matrices_match_golden_files() {
    for (args, file) in [
        (&["mask", "pseudo", "-n", "1", "-l", "0", "--format", "matrix"][..], "a1_0.matrix.txt"),
        (&["mask", "pseudo", "-n", "2", "-l", "1", "--format", "matrix"][..], "a2_1.matrix.txt"),
        (&["mask", "box", "-n", "3", "--format", "matrix"][..], "a3_0.matrix.txt"),
        (&["mask", "--family", "interp", "-n", "3", "--format", "matrix"][..], "a3_2.matrix.txt"),
        (&["mask", "pseudo", "-n", "2", "-l", "1"][..], "a2_1.json"),
    ] {
        let o = cli(args);
        assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
        assert_eq!(o.stdout, golden(file), "{args:?}");
    }
}

#[test]
fn matrix_headers_carry_denominators() {
    assert!(cli(&["mask", "pseudo", "-n", "1", "-l", "0", "--format", "matrix"]).stdout.starts_with("1/4 ×\n"));
    assert!(cli(&["mask", "pseudo", "-n", "2", "-l", "1", "--format", "matrix"]).stdout.starts_with("1/32 ×\n"));
    assert!(cli(&["mask", "box", "-n", "3", "--format", "matrix"]).stdout.starts_with("1/256 ×\n"));
}

#[test]
fn family_flag_and_positional_agree() {
    let a = cli(&["mask", "pseudo", "-n", "3", "-l", "1"]);
    let b = cli(&["mask", "--family", "pseudo", "-n", "3", "-l", "1"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(cli(&["mask", "pseudo", "--family", "box", "-n", "3"]).code, 2);
}

#[test]
fn mask_csv_lists_coefficients_as_fractions() {
    let o = cli(&["mask", "pseudo", "-n", "1", "-l", "0", "--format", "csv"]);
    assert_eq!(o.code, 0);
    let g = parse_grid_csv(&o.stdout).unwrap();
    assert_eq!(g.window(), Window::centered(1));
    assert_eq!(g.get((0, 0)), Some(int(1)));
    assert_eq!(g.get((1, 0)), Some(ratio(1, 2)));
    assert_eq!(g.get((-1, 1)), Some(ratio(1, 4)));
    assert!(o.stdout.contains("\n0,0,1/1\n"));
}

#[test]
fn verify_pseudo_3_1() {
    let o = cli(&["verify", "pseudo", "-n", "3", "-l", "1"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert_eq!(o.stdout, golden("verify_pseudo_3_1.txt"));
    let report = verify(&make_pseudospline(3, 1).unwrap()).unwrap();
    assert_eq!(report.degrees.generation_degree, 5);
    assert_eq!(report.degrees.reproduction_degree, 3);
    assert!(!report.degrees.interpolatory);
    assert_eq!(report.support.octagon, SupportOctagon::new(4, 4, 3));
    assert!(report.passed());
}

#[test]
fn verify_interpolatory_and_variant() {
    let top = verify(&make_pseudospline(3, 2).unwrap()).unwrap();
    assert!(top.passed());
    assert!(top.degrees.interpolatory);
    assert_eq!((top.degrees.generation_degree, top.degrees.reproduction_degree), (5, 5));

    let o = cli(&["verify", "variant", "-n", "3", "-l", "2", "--mu", "1,1"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("interpolatory          measured false"));
    assert!(o.stdout.contains("generation             measured 5"));
    assert!(o.stdout.contains("reproduction           measured 5"));
    assert!(o.stdout.contains("support                measured (5, 5, 4)"));
}

#[test]
fn verify_exit_code_contract_for_pseudo_family() {
    for n in 1..=8u32 {
        for l in 0..n {
            let (n_s, l_s) = (n.to_string(), l.to_string());
            let o = cli(&["verify", "pseudo", "-n", &n_s, "-l", &l_s]);
            assert_eq!(o.code, 0, "pseudo {n} {l}:\n{}", o.stdout);
        }
    }
}

#[test]
fn verify_other_families() {
    for args in [
        &["verify", "box", "-n", "4"][..],
        &["verify", "interp", "-n", "4"][..],
        &["verify", "tensor", "-n", "3", "-l", "1"][..],
        &["verify", "amu", "--mu", "-2"][..],
        &["verify", "amu", "--mu", "0"][..],
        &["verify", "amu", "--mu", "1/3"][..],
        &["verify", "variant", "-n", "4", "-l", "1", "--mu", "-5/7"][..],
    ] {
        let o = cli(args);
        assert_eq!(o.code, 0, "{args:?}:\n{}{}", o.stdout, o.stderr);
    }
}

#[test]
fn verify_failure_names_property_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    // box-spline rows labelled as a_3^1: reproduction is 1, not 3
    let mut doc = MaskDocument::from_symbol(&fourdir_box(3).unwrap()).unwrap();
    doc.family = "pseudo".into();
    doc.params.n = Some(3);
    doc.params.l = Some(1);
    let path = write(dir.path(), "mislabelled.json", &doc.to_json());
    let o = cli(&["verify", "--mask", &path]);
    assert_eq!(o.code, 1, "{}", o.stdout);
    assert!(o.stdout.contains("FAIL  reproduction           measured 1          expected 3"));
    assert!(o.stdout.contains("a(1, 1)"), "{}", o.stdout);
    assert!(o.stdout.contains("result: FAIL (reproduction, support)"), "{}", o.stdout);

    // an asymmetric custom mask
    let custom = r#"{"family":"custom","params":{"n":null,"l":null,"mu":[]},"denominator":4,
        "offset":[0,0],"rows":[[2,2]],"support":{"m":0,"n":0,"l":0}}"#;
    let path = write(dir.path(), "custom.json", custom);
    let o = cli(&["verify", "--mask", &path]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("FAIL  symmetry"));
}

#[test]
fn json_round_trip_gives_identical_report() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["pseudo", "-n", "4", "-l", "2"][..],
        &["box", "-n", "2"][..],
        &["interp", "-n", "2"][..],
        &["tensor", "-n", "2", "-l", "1"][..],
        &["variant", "-n", "4", "-l", "3", "--mu", "1/2,-1,1/2"][..],
        &["amu", "--mu", "-7/3"][..],
    ] {
        let out = dir.path().join("m.json");
        let mut mask_args = vec!["mask"];
        mask_args.extend_from_slice(args);
        mask_args.extend_from_slice(&["--out", out.to_str().unwrap()]);
        let o = cli(&mask_args);
        assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
        assert!(o.stdout.is_empty());

        let mut verify_args = vec!["verify"];
        verify_args.extend_from_slice(args);
        let direct = cli(&verify_args);
        let reread = cli(&["verify", "--mask", out.to_str().unwrap()]);
        assert_eq!(direct.code, 0, "{args:?}:\n{}", direct.stdout);
        assert_eq!(direct.stdout, reread.stdout, "{args:?}");

        let symbol = load_mask_document(&out).unwrap();
        let text = fs::read_to_string(&out).unwrap();
        assert_eq!(MaskDocument::parse(&text).unwrap().to_json(), text);
        assert_eq!(verify(&symbol).unwrap().to_string(), direct.stdout);
    }

    let out = dir.path().join("a42.json");
    cli(&["mask", "pseudo", "-n", "4", "-l", "2", "--out", out.to_str().unwrap()]);
    let direct = make_pseudospline(4, 2).unwrap();
    assert_eq!(verify(&load_mask_document(&out).unwrap()).unwrap(), verify(&direct).unwrap());
}

#[test]
fn support_and_sweep() {
    let o = cli(&["support", "pseudo", "-n", "4", "-l", "3"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("measured:  width 15, corner cut 6"));
    assert!(o.stdout.ends_with("match\n"));
    let o = cli(&["support", "pseudo", "-n", "1", "-l", "0"]);
    assert!(o.stdout.contains("measured:  width 3, corner cut 0"));

    let o = cli(&["sweep", "-n", "5"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, golden("sweep_5.txt"));
    assert!(o.stdout.ends_with("15/15 cells match (width/corner cut)\n"));
    assert_eq!(o.stdout.matches(" ok").count(), 15);
    let o = cli(&["sweep", "-n", "7"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.ends_with("28/28 cells match (width/corner cut)\n"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["mask", "pseudo", "-n", "3", "-l", "3"][..],
        &["mask", "-n", "3"][..],
        &["mask", "pseudo", "-n", "3"][..],
        &["mask", "box", "-n", "0"][..],
        &["mask", "box", "-n", "3", "-l", "1"][..],
        &["mask", "variant", "-n", "4", "-l", "2", "--mu", "1,1"][..],
        &["mask", "variant", "-n", "4", "-l", "3", "--mu", "1,2,3"][..],
        &["mask", "variant", "-n", "3", "-l", "2", "--mu", "1"][..],
        &["mask", "amu"][..],
        &["mask", "amu", "--mu", "1/0"][..],
        &["mask", "pseudo", "-n", "2", "-l", "1", "--format", "xml"][..],
        &["mask", "quartic", "-n", "2"][..],
        &["frobnicate"][..],
        &["limit", "pseudo", "-n", "2", "-l", "1", "--steps", "0"][..],
        &["limit", "pseudo", "-n", "2", "-l", "1", "--format", "pgm"][..],
        &["sweep", "-n", "0"][..],
    ] {
        let o = cli(args);
        assert_eq!(o.code, 2, "{args:?}: {}{}", o.stdout, o.stderr);
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn io_and_format_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let o = cli(&["verify", "--mask", missing.to_str().unwrap()]);
    assert_eq!(o.code, 3);
    assert!(o.stderr.contains("missing.json"));

    let bad_json = write(dir.path(), "bad.json", "{\"family\": ");
    assert_eq!(cli(&["verify", "--mask", &bad_json]).code, 3);
    let bad_den = write(
        dir.path(),
        "zero.json",
        r#"{"family":"x","params":{"n":null,"l":null,"mu":[]},"denominator":0,"offset":[0,0],"rows":[[1]],"support":{"m":0,"n":0,"l":0}}"#,
    );
    assert_eq!(cli(&["verify", "--mask", &bad_den]).code, 3);

    let mask = dir.path().join("a.json");
    cli(&["mask", "pseudo", "-n", "2", "-l", "1", "--out", mask.to_str().unwrap()]);
    let bad_csv = write(dir.path(), "bad.csv", "alpha1,alpha2,value\n0,0,1/0\n");
    let o = cli(&["subdivide", "--mask", mask.to_str().unwrap(), "--input", &bad_csv]);
    assert_eq!(o.code, 3);

    // a single point leaves no valid output under a 7x7 mask
    let small = write(dir.path(), "small.csv", &grid_csv(&GridFunction::delta(Window::centered(0))));
    let o = cli(&["subdivide", "--mask", mask.to_str().unwrap(), "--input", &small]);
    assert_eq!(o.code, 3);
    assert!(o.stderr.contains("too small"), "{}", o.stderr);

    let unwritable = dir.path().join("no/such/dir/out.csv");
    let o = cli(&["mask", "box", "-n", "1", "--out", unwritable.to_str().unwrap()]);
    assert_eq!(o.code, 3);
}

#[test]
fn subdivide_constant_stays_constant() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["pseudo", "-n", "3", "-l", "1"][..], &["interp", "-n", "2"][..], &["box", "-n", "2"][..]] {
        let mask = dir.path().join("m.json");
        let mut mask_args = vec!["mask"];
        mask_args.extend_from_slice(args);
        mask_args.extend_from_slice(&["--out", mask.to_str().unwrap()]);
        assert_eq!(cli(&mask_args).code, 0);
        let input = GridFunction::from_fn(0, Window::centered(8), |_| ratio(7, 3));
        let input = write(dir.path(), "c.csv", &grid_csv(&input));
        let o = cli(&["subdivide", "--mask", mask.to_str().unwrap(), "--input", &input, "--steps", "2"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let g = parse_grid_csv(&o.stdout).unwrap();
        assert_eq!(g.level(), 2);
        assert!(!g.window().is_empty());
        assert!(g.window().points().all(|p| g.get(p) == Some(ratio(7, 3))));
    }
}

#[test]
fn subdivide_delta_with_bilinear_mask_gives_tent() {
    let dir = tempfile::tempdir().unwrap();
    let mask = dir.path().join("a10.json");
    cli(&["mask", "pseudo", "-n", "1", "-l", "0", "--out", mask.to_str().unwrap()]);
    let input = write(dir.path(), "d.csv", &grid_csv(&GridFunction::delta(Window::centered(1))));
    let out = dir.path().join("out.csv");
    let o = cli(&[
        "subdivide", "--mask", mask.to_str().unwrap(), "--input", &input, "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let g = parse_grid_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(g.window(), Window::centered(2));
    for p in g.window().points() {
        let expected = if p.0.abs() <= 1 && p.1.abs() <= 1 {
            ratio(1, 1 << (p.0.abs() + p.1.abs()))
        } else {
            int(0)
        };
        assert_eq!(g.get(p).unwrap(), expected, "{p:?}");
    }
}

#[test]
fn subdivide_reproduces_cubic_samples() {
    let dir = tempfile::tempdir().unwrap();
    let mask = dir.path().join("a21.json");
    cli(&["mask", "pseudo", "-n", "2", "-l", "1", "--out", mask.to_str().unwrap()]);
    let f = |x: Rational, y: Rational| &x * &x * y;
    let input = GridFunction::from_fn(0, Window::new(-5, -4, 6, 5), |(a, b)| f(int(a), int(b)));
    let input = write(dir.path(), "x2y.csv", &grid_csv(&input));
    let o = cli(&["subdivide", "--mask", mask.to_str().unwrap(), "--input", &input]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let g = parse_grid_csv(&o.stdout).unwrap();
    assert_eq!(g.window(), Window::new(-8, -6, 10, 8));
    for p in g.window().points() {
        assert_eq!(g.get(p).unwrap(), f(ratio(p.0, 2), ratio(p.1, 2)), "{p:?}");
    }
}

fn limit_csv(args: &[&str]) -> GridFunction {
    let mut full = vec!["limit"];
    full.extend_from_slice(args);
    let o = cli(&full);
    assert_eq!(o.code, 0, "{}", o.stderr);
    parse_grid_csv(&o.stdout).unwrap()
}

#[test]
fn limit_of_bilinear_scheme_is_tent() {
    let g = limit_csv(&["pseudo", "-n", "1", "-l", "0", "--steps", "3"]);
    assert_eq!(g.level(), 3);
    let (_, max) = g.min_max();
    assert_eq!(max, int(1));
    assert_eq!(g.get((0, 0)), Some(int(1)));
    for p in g.window().points() {
        let hat = |t: i64| if t.abs() >= 8 { int(0) } else { ratio(8 - t.abs(), 8) };
        assert_eq!(g.get(p).unwrap(), hat(p.0) * hat(p.1), "{p:?}");
    }
}

#[test]
fn limit_of_interpolatory_scheme_keeps_integer_samples() {
    let g = limit_csv(&["pseudo", "-n", "2", "-l", "1"]);
    assert_eq!(g.level(), 3);
    let mut seen = 0;
    for p in g.window().points().filter(|p| p.0 % 8 == 0 && p.1 % 8 == 0) {
        let expected = if p == (0, 0) { int(1) } else { int(0) };
        assert_eq!(g.get(p).unwrap(), expected, "{p:?}");
        seen += 1;
    }
    assert!(seen >= 9);
}

#[test]
fn limit_pgm_footprint_matches_scaled_octagon() {
    let dir = tempfile::tempdir().unwrap();
    let pgm = dir.path().join("a31.pgm");
    let o = cli(&["limit", "pseudo", "-n", "3", "-l", "1", "--steps", "3", "--format", "pgm", "--out", pgm.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let raster = parse_pgm(&fs::read(&pgm).unwrap()).unwrap();
    let sidecar = fs::read_to_string(dir.path().join("a31.pgm.norm.txt")).unwrap();
    let mut lines = sidecar.lines();
    let min = parse_fraction(lines.next().unwrap().strip_prefix("min: ").unwrap()).unwrap();
    let max = parse_fraction(lines.next().unwrap().strip_prefix("max: ").unwrap()).unwrap();

    // the same samples as exact fractions
    let g = limit_csv(&["pseudo", "-n", "3", "-l", "1", "--steps", "3"]);
    let w = g.window();
    assert_eq!((raster.width as i64, raster.height as i64), (w.width(), w.height()));
    assert_eq!(raster.maxval, u16::MAX);
    assert_eq!(g.min_max(), (min.clone(), max.clone()));

    let zero_level = ((-&min) * int(65535) / (&max - &min)).round().to_integer();
    let limit_support = SupportOctagon::new(4, 4, 3).scaled(8);
    let mut nonzero = Vec::new();
    for (row, y) in (w.y0..=w.y1).rev().enumerate() {
        for (col, x) in (w.x0..=w.x1).enumerate() {
            let pixel = raster.pixel(col, row);
            let v = g.get((x, y)).unwrap();
            let expected = ((&v - &min) * int(65535) / (&max - &min)).round().to_integer();
            assert_eq!(pixel as i64, i64::try_from(expected).unwrap(), "({x},{y})");
            if !limit_support.contains(Exponent2::new(x, y)) {
                assert_eq!(pixel as i64, i64::try_from(zero_level.clone()).unwrap(), "({x},{y})");
            }
            if v != int(0) {
                nonzero.push(Exponent2::new(x, y));
            }
        }
    }
    // nonzero samples fill the octagon scaled by 2^3 - 1, strictly inside the limit support
    let m = nonzero.iter().map(|e| e.e1.abs()).max().unwrap();
    let l1 = nonzero.iter().map(|e| e.e1.abs() + e.e2.abs()).max().unwrap();
    assert_eq!(SupportOctagon::new(m, m, 2 * m - l1), SupportOctagon::new(4, 4, 3).scaled(7));
}

#[test]
fn outputs_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let runs = |tag: &str| {
        let json = dir.path().join(format!("{tag}.json"));
        let pgm = dir.path().join(format!("{tag}.pgm"));
        cli(&["mask", "variant", "-n", "3", "-l", "2", "--mu", "1/3,1/3", "--out", json.to_str().unwrap()]);
        cli(&["limit", "pseudo", "-n", "2", "-l", "0", "--format", "pgm", "--out", pgm.to_str().unwrap()]);
        let csv = cli(&["limit", "interp", "-n", "2", "--steps", "2"]).stdout;
        let matrix = cli(&["mask", "pseudo", "-n", "4", "-l", "1", "--format", "matrix"]).stdout;
        (
            fs::read(&json).unwrap(),
            fs::read(&pgm).unwrap(),
            fs::read(dir.path().join(format!("{tag}.pgm.norm.txt"))).unwrap(),
            csv,
            matrix,
        )
    };
    assert_eq!(runs("a"), runs("b"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_pseudospline");
    let dir = tempfile::tempdir().unwrap();
    let mut doc = MaskDocument::from_symbol(&fourdir_box(2).unwrap()).unwrap();
    doc.family = "interpolatory".into();
    let bad = write(dir.path(), "bad.json", &doc.to_json());
    let cases: [(&[&str], i32); 5] = [
        (&["verify", "pseudo", "-n", "2", "-l", "1"], 0),
        (&["verify", "--mask", &bad], 1),
        (&["verify", "pseudo", "-n", "2", "-l", "2"], 2),
        (&["verify", "--mask", "/nonexistent/mask.json"], 3),
        (&["--help"], 0),
    ];
    for (args, code) in cases {
        let status = Command::new(bin).args(args).output().unwrap().status;
        assert_eq!(status.code(), Some(code), "{args:?}");
    }
    let out = Command::new(bin).args(["mask", "box", "-n", "1", "--format", "matrix"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("a1_0.matrix.txt"));
}
