use std::process::{Command, Output};

fn heartglue(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heartglue")).args(args).env_remove("HEARTGLUE_WINDOW").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn zero_goes_to_the_right_half_plane() {
    let o = heartglue(&["perv", "to-upperset", "--p", "zero"]);
    assert_eq!(code(&o), 0);
    let doc = stdout(&o);
    assert!(doc.contains("\"format\": \"heartglue/upperset\""));
    let plot = heartglue(&["plot", "--u", doc.trim(), "--window", "-2,2,-2,2"]);
    assert_eq!(stdout(&plot), "..###\n".repeat(5));
}

#[test]
fn middle_is_strict() {
    let o = heartglue(&["perv", "is-strict", "--p", "middle"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "true\n"));
    let o = heartglue(&["perv", "is-strict", "--p", "identity"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("false\nwitness: "));
}

#[test]
fn north_of_one_gives_the_identity() {
    let o = heartglue(&["perv", "from-upperset", "--u", "north:1"]);
    assert_eq!(code(&o), 0);
    let expected = heartglue(&["perv", "act", "--p", "identity", "--plus", "0"]);
    assert_eq!(stdout(&o), stdout(&expected));
}

#[test]
fn conversions_round_trip() {
    for p in ["zero", "identity", "middle", "chi:2", "const:-3", "+inf", "-inf"] {
        let canonical = stdout(&heartglue(&["perv", "act", "--p", p, "--plus", "0"]));
        for route in ["northeast", "complement"] {
            let u = stdout(&heartglue(&["perv", "to-upperset", "--p", p, "--route", route]));
            let back = heartglue(&["perv", "from-upperset", "--u", u.trim(), "--route", route]);
            assert_eq!(code(&back), 0, "{p} via {route}: {}", stderr(&back));
            assert_eq!(stdout(&back), canonical, "{p} via {route}");
        }
    }
}

#[test]
fn files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.json");
    let u = stdout(&heartglue(&["perv", "to-upperset", "--p", "middle"]));
    std::fs::write(&path, &u).unwrap();
    let back = heartglue(&["perv", "from-upperset", "--u", path.to_str().unwrap(), "--route", "northeast"]);
    assert_eq!(stdout(&back), stdout(&heartglue(&["perv", "act", "--p", "middle", "--plus", "0"])));
}

#[test]
fn enumerate_counts() {
    let o = heartglue(&["perv", "enumerate", "--window", "0,2", "--values", "0,1"]);
    assert_eq!(stdout(&o), "0 0 0\n0 0 1\n0 1 1\n1 1 1\ncount 4\n");
}

#[test]
fn compare_and_act() {
    assert_eq!(stdout(&heartglue(&["perv", "compare", "--p", "zero", "--q", "chi:0"])), "lt\n");
    assert_eq!(stdout(&heartglue(&["perv", "compare", "--p", "zero", "--q", "identity"])), "incomparable\n");
    assert_eq!(stdout(&heartglue(&["perv", "compare", "--p", "+inf", "--q", "middle"])), "gt\n");
    let o = heartglue(&["perv", "act", "--p", "middle", "--dot", "2", "--text"]);
    assert!(stdout(&o).contains("values on [-4, 4]: -1 -1 0 0 1 1 2 2 3"), "{}", stdout(&o));
}

#[test]
fn check_examples() {
    let o = heartglue(&["check", "gluable", "--oracle", "koszul"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("gluable: pass"));

    let o = heartglue(&["check", "gluable", "--oracle", "beilinson-soule", "--preset", "number-field"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let o = heartglue(&["check", "gluable", "--oracle", "beilinson-soule", "--preset", "generic"]);
    assert_eq!(code(&o), 1);

    let o = heartglue(&["check", "implications", "--oracle", "coherent-support", "--dim", "3"]);
    let text = stdout(&o);
    assert_eq!(code(&o), 0);
    assert!(text.contains("perverse: pass"));
    assert!(text.contains("grading: fail, witness Hom(D_(0,2), D_(0,0)[2]) != 0"), "{text}");

    let o = heartglue(&["check", "grading", "--oracle", "coherent-support", "--dim", "3"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn check_compatible_with_maps() {
    let o = heartglue(&["check", "compatible", "--oracle", "koszul", "--map", "g", "--p", "middle"]);
    assert_eq!(code(&o), 0);
    let o = heartglue(&["check", "compatible", "--oracle", "coherent-support", "--map", "g", "--p", "identity"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("witness"));
    let o = heartglue(&["check", "compatible", "--oracle", "koszul", "--map", "g"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("p:"));
}

#[test]
fn window_sources() {
    let o = Command::new(env!("CARGO_BIN_EXE_heartglue"))
        .args(["check", "gluable", "--oracle", "quiver", "--quiver-n", "3", "--slicing", "slope"])
        .env("HEARTGLUE_WINDOW", "-3,3")
        .output()
        .unwrap();
    // slope weights above 3 fall outside the window
    assert_eq!(code(&o), 0);
    let o = heartglue(&["check", "gluable", "--oracle", "quiver", "--quiver-n", "3", "--slicing", "slope"]);
    assert_eq!(code(&o), 1);
    let o = Command::new(env!("CARGO_BIN_EXE_heartglue"))
        .args(["check", "gluable", "--oracle", "koszul"])
        .env("HEARTGLUE_WINDOW", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("HEARTGLUE_WINDOW"));
}

#[test]
fn heart_examples() {
    let o = heartglue(&["heart", "--oracle", "koszul", "--p", "identity", "--object", "-1,1;0,0;2,-2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = heartglue(&["heart", "--oracle", "koszul", "--p", "zero", "--object", "0,-1;0,0;0,5"]);
    assert_eq!(code(&o), 0);
    let o = heartglue(&["heart", "--oracle", "koszul", "--p", "zero", "--object", "1,0,1"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("out, violating labels (1,0)"));
}

#[test]
fn heart_precondition_comes_first() {
    // coherent support is not grading and identity is not strict
    let o = heartglue(&["heart", "--oracle", "coherent-support", "--p", "identity", "--object", "0,0"]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(!text.contains("object 0"), "{text}");
    let o = heartglue(&["heart", "--oracle", "coherent-support", "--p", "middle", "--object", "0,0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("warning:"));
}

#[test]
fn push_examples() {
    let o = heartglue(&["push", "--oracle", "koszul", "--map", "gamma", "--p", "identity", "--object", "0,3;-1,4;2,1"]);
    assert_eq!((code(&o), stdout(&o).lines().last().unwrap()), (0, "3 x3"));
    let o = heartglue(&["push", "--oracle", "koszul", "--map", "identity", "--object", "0,1;2,0,2"]);
    let lines: Vec<String> = stdout(&o).lines().skip(2).map(String::from).collect();
    assert_eq!(lines, ["(2,0) x2", "(0,1) x1"]);
    let o = heartglue(&["push", "--oracle", "coherent-support", "--map", "exchange", "--object", "0,1;1,0"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("does not vanish"));
}

#[test]
fn plots() {
    let o = heartglue(&["plot", "--u", "empty", "--window", "-2,2,-2,2"]);
    assert_eq!(stdout(&o), ".....\n".repeat(5));
    // (a, c) lies in the image of middle iff floor((a - c) / 2) <= a
    let o = heartglue(&["plot", "--p", "middle", "--window", "-3,3,-3,3"]);
    let mut expected = String::new();
    for c in (-3i64..=3).rev() {
        for a in -3i64..=3 {
            expected.push(if (a - c).div_euclid(2) <= a { '#' } else { '.' });
        }
        expected.push('\n');
    }
    assert_eq!(stdout(&o), expected);
    let o = heartglue(&["plot", "--p", "zero", "--window", "0,200,0,0"]);
    assert_eq!(code(&o), 2);
    let o = heartglue(&["plot", "--p", "zero", "--window", "0,199,0,199"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn svg_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    for path in [&a, &b] {
        let o = heartglue(&["plot", "--p", "middle", "--format", "svg", "--output", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    assert!(text.starts_with("<svg") && text.contains("n in [-4, 4]") && text.contains("dark: (n, n') in U"));
}

#[test]
fn reports_are_bit_stable() {
    let args = ["check", "implications", "--oracle", "coherent-support", "--dim", "4"];
    assert_eq!(heartglue(&args).stdout, heartglue(&args).stdout);
}

#[test]
fn demos_exit_zero() {
    for args in [
        vec!["demo", "koszul"],
        vec!["demo", "motives"],
        vec!["demo", "coherent", "--dim", "3"],
        vec!["demo", "torsion-tilt", "--k", "0"],
        vec!["demo", "bbd-gluing"],
    ] {
        let o = heartglue(&args);
        assert_eq!(code(&o), 0, "{args:?}\n{}", stdout(&o));
        assert!(stdout(&o).ends_with("result: pass\n\n") || stdout(&o).ends_with("result: pass\n"));
    }
}

#[test]
fn malformed_input_names_the_field() {
    let o = heartglue(&["perv", "to-upperset", "--p", "chi:x"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--p: chi"), "{}", stderr(&o));
    let o = heartglue(&["perv", "from-upperset", "--u", r#"{"format":"heartglue/upperset","version":1}"#]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("boundary"), "{}", stderr(&o));
    let o = heartglue(&["perv", "to-upperset", "--p", r#"{"format":"heartglue/upperset","version":1}"#]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("format"), "{}", stderr(&o));
    let o = heartglue(&["heart", "--oracle", "koszul", "--p", "zero", "--object", "1,x"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("object"), "{}", stderr(&o));
    let o = heartglue(&["check", "gluable", "--oracle", "nonsense"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("oracle"));
}

#[test]
fn table_oracle_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    std::fs::write(
        &path,
        r#"{"format":"heartglue/ext-table","version":1,"weights":[0,2],"default":"vanishes",
            "entries":[{"phi":2,"psi":0,"shift":2,"vanishes":false}]}"#,
    )
    .unwrap();
    let o = heartglue(&["check", "implications", "--oracle", "table", "--table", path.to_str().unwrap()]);
    let text = stdout(&o);
    assert_eq!(code(&o), 0, "{text}{}", stderr(&o));
    assert!(text.contains("perverse: pass") && text.contains("grading: fail, witness Hom(D_(0,2), D_(0,0)[2]) != 0"));
}
