use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn spec(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("specs")
        .join(name)
        .display()
        .to_string()
}

fn lqs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lqs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = lqs(&a);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (v, code(&o))
}

/// Real parts of a spectrum's values, repeated by multiplicity.
fn values(spectrum: &Value) -> Vec<f64> {
    spectrum["values"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|e| {
            let k = e["multiplicity"].as_u64().unwrap() as usize;
            std::iter::repeat_n(real_part(e["value"].as_str().unwrap()), k)
        })
        .collect()
}

/// Real part of a machine-format complex number `<re>e<exp>±<im>e<exp>i`.
fn real_part(z: &str) -> f64 {
    let e = z.find('e').unwrap();
    let split = z[e + 2..].find(['+', '-']).unwrap() + e + 2;
    z[..split].parse().unwrap()
}

fn tmp(name: &str, body: &str) -> PathBuf {
    let p = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn check_passes_quantum_and_fails_classical() {
    let (v, c) = json(&["check", &spec("hidden_mode_quadrature.json")]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["pass"], true);
    let (v, c) = json(&["check", &spec("first_order_classical.json")]);
    assert_eq!(c, 1);
    assert_eq!(v["results"]["pass"], false);
    assert_eq!(code(&lqs(&["check", &spec("dpa.json")])), 0);
}

#[test]
fn dpa_transmission_zeros_agree_across_methods() {
    let (v, c) = json(&["zeros", &spec("dpa.json"), "--kind", "transmission", "--method", "all"]);
    assert_eq!(c, 0);
    let m = &v["results"]["methods"];
    for method in ["pencil", "theorem", "smf"] {
        let mut z = values(&m[method]);
        z.sort_by(f64::total_cmp);
        assert!(
            (z[0] - 0.5).abs() < 1e-12 && (z[1] - 1.5).abs() < 1e-12,
            "{method}: {z:?}"
        );
    }
    assert_eq!(v["results"]["cross_check"]["agree"], true);
}

#[test]
fn hidden_mode_zeros_and_refusal() {
    let (v, c) = json(&["zeros", &spec("hidden_mode_quadrature.json"), "--method", "pencil"]);
    assert_eq!(c, 0);
    let mut z = values(&v["results"]["methods"]["pencil"]);
    z.sort_by(f64::total_cmp);
    assert!((z[0] + 1.0).abs() < 1e-12 && (z[1] - 1.0).abs() < 1e-12, "{z:?}");
    let o = lqs(&["zeros", &spec("hidden_mode_quadrature.json"), "--method", "theorem"]);
    assert_eq!(code(&o), 5);
    assert!(stderr(&o).contains("hidden-mode assumption"));
    // inside "all" the refusal is recorded, not fatal
    let (v, c) = json(&["zeros", &spec("hidden_mode_quadrature.json"), "--method", "all"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["methods"]["theorem"]["exit_code"], 5);
}

#[test]
fn smith_mcmillan_of_two_mode_system() {
    let o = lqs(&["smf", &spec("two_mode_classical.json")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("smith_mcmillan: [1/(s-1), s]"), "{}", stdout(&o));
}

#[test]
fn kalman_lists_four_blocks() {
    let (v, c) = json(&["kalman", &spec("hidden_mode_quadrature.json")]);
    assert_eq!(c, 0);
    let b = &v["results"]["blocks"];
    let single = |k: &str| {
        let v = values(&b[k]["eigenvalues"]);
        assert_eq!(v.len(), 1, "{k}");
        v[0]
    };
    assert!((single("controllable_unobservable") + 1.0).abs() < 1e-12);
    assert!((single("uncontrollable_observable") - 1.0).abs() < 1e-12);
    assert_eq!(b["controllable_observable"]["dim"], 0);
    assert_eq!(b["uncontrollable_unobservable"]["dim"], 0);
    assert_eq!(v["results"]["hidden_mode_assumption"]["holds"], false);
}

#[test]
fn invertibility_of_gain_and_cavity() {
    let (v, c) = json(&["invert", &spec("gain.json")]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["as_left_invertible"], true);
    let (v, _) = json(&["invert", &spec("passive_cavity.json")]);
    assert_eq!(v["results"]["as_left_invertible"], false);
    assert_eq!(code(&lqs(&["invert", &spec("hidden_mode_quadrature.json")])), 5);
}

#[test]
fn verify_passes_on_quantum_systems_only() {
    for name in ["dpa.json", "gain.json", "passive_cavity.json"] {
        let (v, c) = json(&["verify", &spec(name)]);
        assert_eq!(c, 0, "{name}");
        assert_eq!(v["results"]["all_pass"], true);
    }
    let (v, c) = json(&["verify", &spec("first_order_classical.json")]);
    assert_eq!(c, 1);
    assert_eq!(v["results"]["pole_zero_mirror"]["pass"], false);
}

#[test]
fn solve_alpha_for_derived_network() {
    let (v, c) = json(&[
        "feedback",
        &spec("plant.json"),
        &spec("controller.json"),
        "--solve-alpha",
        "q",
    ]);
    assert_eq!(c, 0);
    let s = &v["results"]["alpha_solution"];
    assert_eq!(s["alpha"], "1/4");
    assert_eq!(s["physical"], true);
    assert_eq!(v["results"]["squeezing"]["zero_at_origin_q"], true);
}

#[test]
fn unphysical_alpha_is_reported() {
    let p = tmp(
        "quarter.json",
        r#"{"representation":"quadrature_plant","omega_plus":["0","1/4"],"coupling":"1"}"#,
    );
    let p = p.to_str().unwrap();
    let (v, c) = json(&["feedback", p, p, "--solve-alpha", "q"]);
    assert_eq!(c, 8);
    assert_eq!(v["results"]["alpha_solution"]["alpha"], "-9");
    assert_eq!(v["results"]["alpha_solution"]["physical"], false);
}

#[test]
fn synthesis_reproduces_the_controller() {
    let (v, c) = json(&["feedback", &spec("plant.json"), "--synthesize", "+", "--alpha", "1/4"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["synthesized_controller"]["omega_plus"], "-(1/3)i");
    assert_eq!(v["results"]["squeezing"]["residual_q"], "0");
}

#[test]
fn sweep_csv_shows_squeezing_tradeoff() {
    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("sweep.csv");
    let o = lqs(&[
        "feedback",
        &spec("plant.json"),
        &spec("controller.json"),
        "--alpha",
        "0.25",
        "--sweep",
        "1e-4:1e1:60",
        "--csv",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let mut r = csv::Reader::from_path(&out).unwrap();
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["omega", "|T_q|", "|T_p|", "|S_q|", "|S_p|"]
    );
    let rows: Vec<Vec<f64>> = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 60);
    assert_eq!(rows[0][0], 1e-4);
    assert!(rows[0][1] < 1e-3 && rows[0][3] > 1e3);
    assert!(
        rows.windows(2).all(|w| w[1][1] >= w[0][1] - 1e-12),
        "|T_q| rises away from the origin"
    );
}

#[test]
fn open_beamsplitter_warns() {
    let (v, c) = json(&[
        "feedback",
        &spec("dpa_plant.json"),
        &spec("identity_controller.json"),
        "--alpha",
        "1",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["closed_loop"]["T_q"], "1");
    assert!(v["warnings"][0].as_str().unwrap().contains("β = 0"));
}

#[test]
fn batch_keeps_order_and_reports_worst_exit() {
    let (v, c) = json(&["check", "--batch", &spec("all.txt")]);
    assert_eq!(c, 1);
    let paths: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["input"]["path"].as_str().unwrap())
        .collect();
    assert!(paths[0].ends_with("first_order_classical.json"));
    assert!(paths.last().unwrap().ends_with("passive_cavity.json"));
    assert_eq!(paths.len(), 7);
}

#[test]
fn error_exit_codes() {
    let bad = tmp("bad.json", "{");
    assert_eq!(code(&lqs(&["check", bad.to_str().unwrap()])), 3);
    assert_eq!(code(&lqs(&["check", "/nonexistent/spec.json"])), 3);
    let float = tmp(
        "float.json",
        r#"{"representation":"annihilation","A":[[0.1]],"B":[[1]],"C":[[1]],"D":[[1]]}"#,
    );
    let float = float.to_str().unwrap();
    assert_eq!(code(&lqs(&["smf", float])), 4);
    assert_eq!(code(&lqs(&["zeros", float, "--exact"])), 4);
    assert_eq!(code(&lqs(&["zeros", float, "--method", "smf"])), 2);
    assert_eq!(code(&lqs(&["check"])), 2);
    assert_eq!(code(&lqs(&["frobnicate"])), 2);
    assert_eq!(code(&lqs(&["check", &spec("plant.json")])), 2);
    assert_eq!(
        code(&lqs(&[
            "feedback",
            &spec("plant.json"),
            &spec("controller.json"),
            "--alpha",
            "2"
        ])),
        8
    );
    assert_eq!(code(&lqs(&["invert", &spec("first_order_classical.json")])), 6);
    let both = [
        "feedback",
        &spec("plant.json"),
        &spec("controller.json"),
        "--synthesize",
        "+",
        "--alpha",
        "1/4",
    ];
    assert_eq!(code(&lqs(&both)), 2);
    assert_eq!(code(&lqs(&["feedback", &spec("plant.json"), "--alpha", "1/4"])), 2);
}

#[test]
fn help_documents_exit_codes() {
    let o = lqs(&["--help"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for k in 0..=8 {
        assert!(text.contains(&format!("\n  {k}  ")), "exit code {k} missing");
    }
}

#[test]
fn reports_echo_the_input_spec() {
    let (v, _) = json(&["check", &spec("dpa.json")]);
    let raw: Value = serde_json::from_str(&fs::read_to_string(spec("dpa.json")).unwrap()).unwrap();
    assert_eq!(v["input"]["spec"], raw);
}
