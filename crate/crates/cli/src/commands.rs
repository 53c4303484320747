use std::path::Path;

use lqs_core::exact::{roots, GaussianRational as Q, RationalFn, RationalMatrix};
use lqs_core::feedback::{
    frequency_sweep, solve_alpha_for_squeezing, synthesize_matched_controller, Beamsplitter, FeedbackNetwork,
    QuadPlantParams, Quadrature, SweepRow, SynthesisSign,
};
use lqs_core::invertibility::{classify_left_invertibility, inversion_witness};
use lqs_core::kalman::{check_hidden_mode_assumption, invariant_zeros_from_kalman, kalman_decompose};
use lqs_core::numeric::{eigenvalues, match_multisets, Method, SpectrumReport};
use lqs_core::system::{check_physical_realizability, verify_inverse_identity, StateSpace};
use lqs_core::zeros::{
    invariant_zeros_flat, invariant_zeros_pencil, mirror_from_spectra, poles_numeric, rosenbrock_determinant,
    smf_spectra, transmission_zeros_numeric, verify_determinant_identity_exact, verify_determinant_identity_numeric,
};
use lqs_core::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::error::{core_exit_code, exit, CliError, CliResult};
use crate::report::{Fmt, Report};
use crate::spec::{LoadedSystem, Spec};

/// Settings shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct Common {
    pub tol: f64,
    pub seed: u64,
    pub fmt: Fmt,
}

pub type Outcome = CliResult<(Report, i32)>;

fn input_echo(spec: &Spec) -> Value {
    json!({"path": spec.path, "spec": spec.raw})
}

fn new_report(cmd: &str, spec: &Spec, c: &Common) -> Report {
    let mut r = Report::new(cmd, input_echo(spec));
    r.setting("tol", c.fmt.real(c.tol));
    r
}

fn sample_points(seed: u64, k: usize) -> Vec<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k)
        .map(|_| Complex::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
        .collect()
}

fn rational_matrix(m: &RationalMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| json!(m.get(i, j).to_string())).collect()))
            .collect(),
    )
}

fn complex_matrix(f: &Fmt, m: &lqs_core::numeric::CMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| f.complex(m[(i, j)])).collect()))
            .collect(),
    )
}

fn refusal(e: &lqs_core::Error) -> Value {
    json!({"refused": e.to_string(), "exit_code": core_exit_code(e)})
}

// ---------------------------------------------------------------- check

pub fn check(spec: &Spec, c: &Common) -> Outcome {
    let sys = spec.system()?;
    let rep = check_physical_realizability(&sys.float, c.tol)?;
    let mut r = new_report("check", spec, c);
    r.result("representation", json!(sys.float.representation.name()));
    r.result("states", json!(sys.float.n_states()));
    r.result("inputs", json!(sys.float.n_inputs()));
    r.result("pass", json!(rep.pass));
    let mut res = Map::new();
    for (k, v) in &rep.residuals {
        res.insert((*k).into(), c.fmt.real(*v));
    }
    r.result("residuals", Value::Object(res));
    r.result("max_residual", c.fmt.real(rep.max_residual()));
    Ok((r, if rep.pass { exit::OK } else { exit::CHECK_FAILED }))
}

// ---------------------------------------------------------------- zeros

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ZeroKind {
    Invariant,
    Transmission,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ZeroMethod {
    Pencil,
    Flat,
    Smf,
    Theorem,
    All,
}

#[derive(Debug, Clone, Copy)]
pub struct ZerosArgs {
    pub kind: ZeroKind,
    pub method: ZeroMethod,
    pub exact: bool,
    pub imag_tol: f64,
    pub match_tol: f64,
}

fn exact_determinant_zeros(sys: &LoadedSystem, tol: f64) -> CliResult<SpectrumReport> {
    let ex = sys.require_exact()?;
    let det = rosenbrock_determinant(ex)?;
    if det.is_zero() {
        return Err(lqs_core::Error::NormalRankDeficient {
            normal_rank: 0,
            full: sys.float.n_states() + sys.float.n_inputs(),
        }
        .into());
    }
    let r = roots(&det)?;
    let mut s = SpectrumReport::from_values(&r.multiset(), tol, Method::Pencil).with_note("exact determinant");
    if !r.is_exact() {
        s = s.with_note("numeric roots");
    }
    Ok(s)
}

fn run_zero_method(
    sys: &LoadedSystem,
    kind: ZeroKind,
    name: &str,
    a: &ZerosArgs,
    tol: f64,
) -> CliResult<SpectrumReport> {
    let ss = &sys.float;
    Ok(match (kind, name) {
        (ZeroKind::Invariant, "pencil") => invariant_zeros_pencil(ss, tol)?,
        (ZeroKind::Invariant, "flat") => invariant_zeros_flat(ss, tol)?,
        (ZeroKind::Invariant, "theorem") => invariant_zeros_from_kalman(ss, tol, a.imag_tol)?,
        (ZeroKind::Invariant, "exact") => exact_determinant_zeros(sys, tol)?,
        (ZeroKind::Transmission, "pencil") => transmission_zeros_numeric(ss, tol)?,
        (ZeroKind::Transmission, "smf") => smf_spectra(sys.require_exact()?, tol)?.zeros,
        (ZeroKind::Transmission, "theorem") => {
            let rep = check_physical_realizability(ss, 1e-8 * ss.a.frobenius_norm().max(1.0))?;
            if !rep.pass {
                return Err(lqs_core::Error::NotRealizable {
                    residual: rep.max_residual(),
                    tol: 1e-8,
                }
                .into());
            }
            let p = poles_numeric(ss, tol)?;
            let mirrored: Vec<Complex> = p.multiset().iter().map(|z| -z.conj()).collect();
            SpectrumReport::from_values(&mirrored, tol, Method::MinimalRealization).with_note("mirrored poles")
        }
        _ => unreachable!("method list is filtered by kind"),
    })
}

pub fn zeros(spec: &Spec, c: &Common, a: &ZerosArgs) -> Outcome {
    let sys = spec.system()?;
    if a.exact {
        sys.require_exact()?;
    }
    let methods: Vec<&str> = match (a.kind, a.method) {
        (ZeroKind::Invariant, ZeroMethod::Smf) => {
            return Err(CliError::Usage(
                "the smf method yields transmission zeros; use --kind transmission".into(),
            ))
        }
        (ZeroKind::Transmission, ZeroMethod::Flat) => {
            return Err(CliError::Usage(
                "the flat method yields invariant zeros; use --kind invariant".into(),
            ))
        }
        (ZeroKind::Invariant, ZeroMethod::All) => {
            let mut v = vec!["pencil", "flat", "theorem"];
            if a.exact || sys.exact.is_ok() {
                v.push("exact");
            }
            v
        }
        (ZeroKind::Transmission, ZeroMethod::All) => vec!["pencil", "theorem", "smf"],
        (ZeroKind::Invariant, m) => {
            let mut v = vec![method_name(m)];
            if a.exact {
                v.push("exact");
            }
            v
        }
        (ZeroKind::Transmission, m) => {
            let mut v = vec![method_name(m)];
            if a.exact && m != ZeroMethod::Smf {
                v.push("smf");
            }
            v
        }
    };
    let mut r = new_report("zeros", spec, c);
    r.setting(
        "kind",
        json!(match a.kind {
            ZeroKind::Invariant => "invariant",
            ZeroKind::Transmission => "transmission",
        }),
    );
    r.setting("method", json!(method_name(a.method)));
    r.setting("exact", json!(a.exact));
    r.setting("imag_tol", c.fmt.real(a.imag_tol));
    r.setting("match_tol", c.fmt.real(a.match_tol));

    let single = methods.len() == 1;
    let mut spectra: Vec<(&str, SpectrumReport)> = Vec::new();
    let mut out = Map::new();
    for name in &methods {
        match run_zero_method(sys, a.kind, name, a, c.tol) {
            Ok(s) => {
                out.insert((*name).into(), c.fmt.spectrum(&s));
                spectra.push((name, s));
            }
            Err(e) if single => return Err(e),
            Err(CliError::Core(e)) => {
                out.insert((*name).into(), refusal(&e));
            }
            Err(CliError::Exactness(m)) if a.method == ZeroMethod::All && !a.exact => {
                r.warn(format!("{name} skipped: exact input unavailable ({m})"));
                out.insert((*name).into(), json!({"skipped": m, "exit_code": exit::EXACTNESS}));
            }
            Err(e) => return Err(e),
        }
    }
    r.result("methods", Value::Object(out));
    let mut code = exit::OK;
    if spectra.len() > 1 {
        let (ref_name, reference) = &spectra[0];
        let mut worst = 0.0f64;
        let mut agree = true;
        let mut pairs = Map::new();
        for (name, s) in &spectra[1..] {
            let m = match_multisets(&reference.multiset(), &s.multiset(), a.match_tol);
            let d = if m.matched { m.max_distance } else { f64::INFINITY };
            worst = worst.max(d);
            agree &= m.matched;
            pairs.insert(
                (*name).into(),
                json!({"agree": m.matched, "max_distance": c.fmt.real(d)}),
            );
        }
        r.result(
            "cross_check",
            json!({"reference": ref_name, "agree": agree, "max_discrepancy": c.fmt.real(worst), "against": pairs}),
        );
        if !agree {
            code = exit::CHECK_FAILED;
        }
    }
    Ok((r, code))
}

fn method_name(m: ZeroMethod) -> &'static str {
    match m {
        ZeroMethod::Pencil => "pencil",
        ZeroMethod::Flat => "flat",
        ZeroMethod::Smf => "smf",
        ZeroMethod::Theorem => "theorem",
        ZeroMethod::All => "all",
    }
}

// ---------------------------------------------------------------- poles

pub fn poles(spec: &Spec, c: &Common, exact: bool) -> Outcome {
    let sys = spec.system()?;
    let mut r = new_report("poles", spec, c);
    r.setting("exact", json!(exact));
    let p = poles_numeric(&sys.float, c.tol)?;
    let eig = SpectrumReport::from_values(&eigenvalues(&sys.float.a)?, c.tol, Method::Eigenvalues);
    r.result("poles", c.fmt.spectrum(&p));
    r.result("eigenvalues_of_a", c.fmt.spectrum(&eig));
    if exact {
        let s = smf_spectra(sys.require_exact()?, c.tol)?;
        r.result("poles_exact", c.fmt.spectrum(&s.poles));
        let m = match_multisets(&p.multiset(), &s.poles.multiset(), 1e-7);
        r.result("agree", json!(m.matched));
        if !m.matched {
            return Ok((r, exit::CHECK_FAILED));
        }
    }
    Ok((r, exit::OK))
}

// ---------------------------------------------------------------- smf

pub fn smf(spec: &Spec, c: &Common) -> Outcome {
    let sys = spec.system()?;
    let ex = sys.require_exact()?;
    let g = ex.transfer_matrix()?;
    let s = smf_spectra(ex, c.tol)?;
    let mut r = new_report("smf", spec, c);
    r.result("transfer_matrix", rational_matrix(&g));
    r.result("normal_rank", json!(s.smf.rank));
    r.result(
        "smith_mcmillan",
        json!(s.smf.entries().iter().map(RationalFn::to_string).collect::<Vec<_>>()),
    );
    r.result(
        "numerators",
        json!(s.smf.alphas.iter().map(|p| p.to_string()).collect::<Vec<_>>()),
    );
    r.result(
        "denominators",
        json!(s.smf.betas.iter().map(|p| p.to_string()).collect::<Vec<_>>()),
    );
    r.result("divisibility_holds", json!(s.smf.check_divisibility()));
    let reproduced = s.smf.apply_to(&g) == s.smf.diagonal();
    r.result("unimodular_reduction_verified", json!(reproduced));
    r.result("transmission_zeros", c.fmt.spectrum(&s.zeros));
    r.result("poles", c.fmt.spectrum(&s.poles));
    let ok = reproduced && s.smf.check_divisibility();
    Ok((r, if ok { exit::OK } else { exit::CHECK_FAILED }))
}

// ---------------------------------------------------------------- kalman

pub fn kalman(spec: &Spec, c: &Common, imag_tol: f64) -> Outcome {
    let sys = spec.system()?;
    let k = kalman_decompose(&sys.float, c.tol)?;
    let h = check_hidden_mode_assumption(&k, imag_tol);
    let mut r = new_report("kalman", spec, c);
    r.setting("imag_tol", c.fmt.real(imag_tol));
    r.result("states", json!(sys.float.n_states()));
    r.result("controllable_dim", json!(k.controllable_dim));
    r.result("observable_dim", json!(k.observable_dim));
    r.result("minimal_order", json!(k.minimal.n_states()));
    let [d_cobar, d_co, d_cbarobar, d_cbaro] = k.block_dims;
    r.result(
        "blocks",
        json!({
            "controllable_observable": {"dim": d_co, "eigenvalues": c.fmt.spectrum(&k.eig_co)},
            "controllable_unobservable": {"dim": d_cobar, "eigenvalues": c.fmt.spectrum(&k.eig_c_obar)},
            "uncontrollable_observable": {"dim": d_cbaro, "eigenvalues": c.fmt.spectrum(&k.eig_cbar_o)},
            "uncontrollable_unobservable": {"dim": d_cbarobar, "eigenvalues": c.fmt.spectrum(&k.eig_cbar_obar)},
        }),
    );
    r.result(
        "hidden_mode_assumption",
        json!({"holds": h.holds, "offending_eigenvalues": c.fmt.complex_list(&h.offending_eigenvalues)}),
    );
    r.result("transformation", complex_matrix(&c.fmt, &k.transformation));
    Ok((r, exit::OK))
}

// ---------------------------------------------------------------- invert

pub fn invert(spec: &Spec, c: &Common, samples: usize, margin: f64) -> Outcome {
    let sys = spec.system()?;
    let mut r = new_report("invert", spec, c);
    r.setting("margin", c.fmt.real(margin));
    r.setting("samples", json!(samples));
    r.setting("seed", json!(c.seed));
    let mut code = exit::OK;
    match classify_left_invertibility(&sys.float, c.tol, margin) {
        Ok(rep) => {
            let b = |v: Option<bool>| {
                v.map(Value::Bool)
                    .unwrap_or_else(|| json!("indeterminate-at-tolerance"))
            };
            r.result("as_left_invertible", b(rep.as_left_invertible()));
            r.result("as_star_left_invertible", b(rep.as_star_left_invertible()));
            r.result("verdict", json!(rep.verdict.name()));
            r.result("strong_left_invertibility", json!(rep.strong));
            r.result("observable_eigenvalues", c.fmt.spectrum(&rep.observable_eigenvalues));
            r.result(
                "real_parts",
                Value::Array(rep.real_parts.iter().map(|&x| c.fmt.real(x)).collect()),
            );
            r.result("margin", c.fmt.real(rep.margin));
            r.result("hidden_mode_assumption", json!({"holds": rep.hidden_modes.holds}));
        }
        Err(e @ lqs_core::Error::AssumptionViolated { .. }) => {
            r.result("classification", refusal(&e));
            r.warn("classification refused: the observable-spectrum criterion only applies when the hidden-mode assumption holds");
            code = exit::ASSUMPTION;
        }
        Err(e) => return Err(e.into()),
    }
    let pts = sample_points(c.seed, samples);
    let w = inversion_witness(&sys.float, &pts, c.tol)?;
    r.result(
        "inverse_witness",
        json!({
            "pass": w.identity.pass,
            "max_residual": c.fmt.real(w.identity.max_residual),
            "evaluated": w.identity.evaluated.len(),
            "skipped": w.identity.skipped.iter().map(|(s, why)| json!({"s": c.fmt.complex(*s), "reason": why})).collect::<Vec<_>>(),
            "inverse_poles": c.fmt.spectrum(&w.inverse_poles),
            "mirrored_poles": c.fmt.complex_list(&w.mirrored_poles),
        }),
    );
    Ok((r, code))
}

// ---------------------------------------------------------------- verify

pub fn verify(spec: &Spec, c: &Common, samples: usize, match_tol: f64) -> Outcome {
    let sys = spec.system()?;
    let ss: &StateSpace = &sys.float;
    let mut r = new_report("verify", spec, c);
    r.setting("samples", json!(samples));
    r.setting("seed", json!(c.seed));
    r.setting("match_tol", c.fmt.real(match_tol));
    let real = check_physical_realizability(ss, c.tol)?;
    r.result("realizable", json!(real.pass));
    let poles = poles_numeric(ss, c.tol)?;
    let tz = transmission_zeros_numeric(ss, c.tol)?;
    let mirror = mirror_from_spectra(poles, tz, match_tol);
    r.result(
        "pole_zero_mirror",
        json!({
            "pass": mirror.pass,
            "poles": c.fmt.spectrum(&mirror.poles),
            "transmission_zeros": c.fmt.spectrum(&mirror.zeros),
            "mirrored_poles": c.fmt.complex_list(&mirror.mirrored_poles),
        }),
    );
    let det = match &sys.exact {
        Ok(ex) => verify_determinant_identity_exact(ex),
        Err(_) => verify_determinant_identity_numeric(ss, 1e-8),
    };
    let det_ok = match det {
        Ok(d) => {
            let mut m = Map::new();
            m.insert("holds".into(), json!(d.holds));
            m.insert("exact".into(), json!(d.exact));
            if let Some(p) = &d.lhs {
                m.insert("det_rosenbrock_monic".into(), json!(p.to_string()));
            }
            if let Some(p) = &d.rhs {
                m.insert("det_flat_resolvent_monic".into(), json!(p.to_string()));
            }
            match (&d.unit_exact, d.unit) {
                (Some(u), _) => {
                    m.insert("unit".into(), json!(u.to_string()));
                }
                (None, Some(u)) => {
                    m.insert("unit".into(), c.fmt.complex(u));
                }
                _ => {}
            }
            if !d.exact {
                m.insert("max_deviation".into(), c.fmt.real(d.max_deviation));
            }
            r.result("determinant_identity", Value::Object(m));
            d.holds
        }
        Err(e) => {
            r.result("determinant_identity", refusal(&e));
            false
        }
    };
    let inv = verify_inverse_identity(ss, &sample_points(c.seed, samples), c.tol)?;
    r.result(
        "inverse_identity",
        json!({"pass": inv.pass, "max_residual": c.fmt.real(inv.max_residual), "evaluated": inv.evaluated.len(), "skipped": inv.skipped.len()}),
    );
    let all = real.pass && mirror.pass && det_ok && inv.pass;
    r.result("all_pass", json!(all));
    Ok((r, if all { exit::OK } else { exit::CHECK_FAILED }))
}

// ---------------------------------------------------------------- feedback

#[derive(Debug, Clone)]
pub enum FeedbackMode {
    Alpha(Q),
    Solve(Quadrature),
    Synthesize(Q, SynthesisSign),
}

#[derive(Debug, Clone)]
pub struct FeedbackArgs<'a> {
    pub mode: FeedbackMode,
    pub sweep: Option<(f64, f64, usize)>,
    pub csv: Option<&'a Path>,
}

fn plant_value(p: &QuadPlantParams, tag: &str) -> Value {
    let (gq, gp) = p.quadrature_transfer();
    let mut m = Map::new();
    m.insert("omega_plus".into(), json!(p.omega_plus().to_string()));
    m.insert("coupling".into(), json!(p.coupling().to_string()));
    if let Some((cq, cp)) = p.channels() {
        m.insert("c_q".into(), json!(cq.to_string()));
        m.insert("c_p".into(), json!(cp.to_string()));
    }
    m.insert(format!("{tag}_q"), json!(gq.to_string()));
    m.insert(format!("{tag}_p"), json!(gp.to_string()));
    Value::Object(m)
}

fn at_origin(t: &RationalFn) -> Value {
    match t.eval(&Q::zero()) {
        Some(v) => json!(v.to_string()),
        None => json!("pole"),
    }
}

pub fn write_sweep_csv(rows: &[SweepRow], path: &Path) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["omega", "|T_q|", "|T_p|", "|S_q|", "|S_p|"])
        .map_err(io)?;
    for r in rows {
        w.write_record([r.omega, r.t_q, r.t_p, r.s_q, r.s_p].map(|x| format!("{x:.16e}")))
            .map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

pub fn feedback(plant_spec: &Spec, controller_spec: Option<&Spec>, c: &Common, a: &FeedbackArgs) -> Outcome {
    let plant = plant_spec.quad_plant()?.clone();
    let input = json!({
        "plant": input_echo(plant_spec),
        "controller": controller_spec.map(input_echo),
    });
    let mut r = Report::new("feedback", input);
    r.setting("tol", c.fmt.real(c.tol));
    let controller = match (&a.mode, controller_spec) {
        (FeedbackMode::Synthesize(..), Some(_)) => {
            return Err(CliError::Usage(
                "--synthesize designs the controller; do not pass one".into(),
            ))
        }
        (FeedbackMode::Synthesize(alpha, sign), None) => {
            r.setting("mode", json!("synthesize"));
            r.setting("sign", json!(if *sign == SynthesisSign::Plus { "+" } else { "-" }));
            let k = synthesize_matched_controller(&plant, alpha, *sign)?;
            r.result(
                "synthesized_controller",
                json!({"omega_plus": k.omega_plus().to_string(), "coupling": k.coupling().to_string(), "target_quadrature": sign.quadrature().name()}),
            );
            k
        }
        (_, Some(s)) => s.quad_plant()?.clone(),
        (_, None) => return Err(CliError::Usage("a controller spec is required for this mode".into())),
    };
    let alpha = match &a.mode {
        FeedbackMode::Alpha(x) => {
            r.setting("mode", json!("alpha"));
            x.clone()
        }
        FeedbackMode::Synthesize(x, _) => x.clone(),
        FeedbackMode::Solve(quad) => {
            r.setting("mode", json!("solve-alpha"));
            r.setting("quadrature", json!(quad.name()));
            let s = solve_alpha_for_squeezing(&plant, &controller, *quad);
            let opt = |v: &Option<Q>| v.as_ref().map(|x| json!(x.to_string())).unwrap_or(Value::Null);
            r.result(
                "alpha_solution",
                json!({
                    "alpha": opt(&s.raw),
                    "alpha_decimal": s.raw.as_ref().map(|x| c.fmt.real(x.to_complex().re)).unwrap_or(Value::Null),
                    "physical": s.physical(),
                    "from_closed_loop": opt(&s.from_closed_loop),
                    "from_residual": opt(&s.from_residual),
                    "identity_controller_formula": opt(&s.identity_controller_formula),
                    "disagreement": s.disagreement,
                    "residual_unsolvable": s.residual_unsolvable,
                    "disconnected": s.disconnected,
                }),
            );
            if s.disagreement {
                r.warn("formula values disagree with the closed-loop condition α = -G(0)K(0); the closed-loop value is used");
            }
            match s.alpha {
                Some(x) => x,
                None => {
                    let msg = match &s.raw {
                        Some(v) => format!("no physical beamsplitter: α = {v} has |α| > 1"),
                        None => "no α puts a zero at the origin".to_string(),
                    };
                    r.warn(msg);
                    r.result("plant", plant_value(&plant, "G"));
                    r.result("controller", plant_value(&controller, "K"));
                    return Ok((r, exit::NETWORK));
                }
            }
        }
    };
    let bs = Beamsplitter::new(alpha.clone()).map_err(|e| match e {
        lqs_core::Error::Parameter(m) => CliError::Core(lqs_core::Error::DegenerateNetwork(m)),
        other => other.into(),
    })?;
    r.result("plant", plant_value(&plant, "G"));
    r.result("controller", plant_value(&controller, "K"));
    r.result(
        "beamsplitter",
        json!({"alpha": alpha.to_string(), "beta_sq": bs.beta_sq().to_string()}),
    );
    if bs.beta_sq().is_zero() {
        r.warn(format!(
            "beamsplitter has β = 0: the loop is open and T ≡ {alpha} on both quadratures"
        ));
    }
    let net = FeedbackNetwork::new(plant, controller, bs);
    let (tq, tp) = net.closed_loop()?;
    let duality = lqs_core::feedback::check_quadrature_duality(&tq, &tp);
    r.result(
        "closed_loop",
        json!({
            "T_q": tq.to_string(),
            "T_p": tp.to_string(),
            "T_q(0)": at_origin(&tq),
            "T_p(0)": at_origin(&tp),
            "duality_holds": duality,
        }),
    );
    let rq = net.squeezing_residual(Quadrature::Q);
    let rp = net.squeezing_residual(Quadrature::P);
    r.result(
        "squeezing",
        json!({
            "residual_q": rq.to_string(),
            "residual_p": rp.to_string(),
            "zero_at_origin_q": tq.eval(&Q::zero()).is_some_and(|v| v.is_zero()),
            "zero_at_origin_p": tp.eval(&Q::zero()).is_some_and(|v| v.is_zero()),
        }),
    );
    if let Some((from, to, points)) = a.sweep {
        let rows = frequency_sweep(&net, from, to, points)?;
        match a.csv {
            Some(path) => {
                write_sweep_csv(&rows, path)?;
                r.result("sweep", json!({"csv": path.display().to_string(), "rows": rows.len()}));
            }
            None => {
                let f = c.fmt;
                r.result(
                    "sweep",
                    Value::Array(
                        rows.iter()
                            .map(|x| {
                                json!({"omega": f.real(x.omega), "|T_q|": f.real(x.t_q), "|T_p|": f.real(x.t_p), "|S_q|": f.real(x.s_q), "|S_p|": f.real(x.s_p)})
                            })
                            .collect(),
                    ),
                );
            }
        }
    }
    Ok((r, if duality { exit::OK } else { exit::CHECK_FAILED }))
}
