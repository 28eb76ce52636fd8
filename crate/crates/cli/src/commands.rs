//! Command definitions and their routing onto the library.

use std::collections::HashSet;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use lindiff::casebook::{self, CasebookConfig, Example2Target, Report};
use lindiff::field::ray_compare;
use lindiff::formal::{self, ExpPart, DEFAULT_TRUNC};
use lindiff::frank::{self, FrankSystem};
use lindiff::linop::{self, RatOp};
use lindiff::{sample, LinOp, Tower, TowerElem};
use serde_json::{json, Value as Json};

use crate::config::TowerSpec;
use crate::error::CliError;
use crate::eval::Env;
use crate::syntax::{parse_with, Expr};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "lindiff", version, about = "Exact computations with linear differential operators")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for commands that draw random data.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Truncation order of formal series.
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// File with generator declarations (`gen NAME : exp|logderiv|prim|root = ...;`).
    #[arg(long, global = true, value_name = "FILE")]
    pub tower: Option<PathBuf>,
    /// Ray angle in radians for ordering exponential parts.
    #[arg(long, global = true, allow_negative_numbers = true, value_name = "RADIANS")]
    pub theta: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exponential parts of the formal solutions at infinity.
    ExpParts {
        #[arg(allow_hyphen_values = true)]
        op: String,
    },
    /// Log-free formal solutions, one per simple exponential part.
    FormalSolve {
        #[arg(allow_hyphen_values = true)]
        op: String,
        /// Solve only for this exponential part.
        #[arg(long)]
        part: Option<String>,
    },
    /// Wronskian determinant of tower elements.
    Wronskian {
        #[arg(required = true)]
        elems: Vec<String>,
    },
    /// Composition of operators, left to right.
    Compose {
        #[arg(required = true, num_args = 2..)]
        ops: Vec<String>,
    },
    /// Right division N = Q o P + R.
    Rdivide {
        #[arg(allow_hyphen_values = true)]
        n: String,
        #[arg(allow_hyphen_values = true)]
        p: String,
    },
    /// Monic greatest common right divisor.
    Gcrd {
        #[arg(required = true)]
        ops: Vec<String>,
    },
    /// Remove the D^(k-1) term of a monic operator.
    Gauge {
        #[arg(allow_hyphen_values = true)]
        op: String,
    },
    /// The operator for f(z^n), weighted by (n z^(n-1))^k.
    Changevar {
        #[arg(allow_hyphen_values = true)]
        op: String,
        n: usize,
    },
    /// The k relations of the Frank system with coefficients c_mu, C_mu.
    FrankGen {
        k: usize,
        /// c_0, ..., c_(k-2); missing ones are 0.
        #[arg(long = "c", value_name = "EXPR")]
        c: Vec<String>,
        /// C_0, ..., C_(k-2); missing ones are 0.
        #[arg(long = "C", value_name = "EXPR")]
        cap: Vec<String>,
    },
    /// Check a pair (G, Phi) against the Frank relations. Without --g and
    /// --phi a constant-coefficient instance with one nonzero D_nu is built.
    FrankCheck {
        k: usize,
        #[arg(long = "c", value_name = "EXPR")]
        c: Vec<String>,
        #[arg(long = "C", value_name = "EXPR")]
        cap: Vec<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        phi: Option<String>,
        /// Index of the nonzero D_mu for the built instance (default k-2).
        #[arg(long)]
        nu: Option<usize>,
        /// G = e^(a z) for the built instance.
        #[arg(long, default_value = "1")]
        a: String,
        /// Phi = tau G for the built instance (forced when nu < k-2).
        #[arg(long, default_value = "1")]
        tau: String,
    },
    /// Run one casebook scenario with explicit parameters.
    Verify {
        scenario: String,
        /// Polynomial P (example2) or P_1(Y) (example3, in Y or z).
        #[arg(long = "P")]
        p: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<u64>,
        /// Polynomial delta = H''/H'.
        #[arg(long)]
        delta: Option<String>,
        /// Surviving numerator for example2: B2, B1 or B0 (default all).
        #[arg(long)]
        target: Option<String>,
        /// D^(k-1) coefficient for theorem-reps, vanishing at infinity.
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Run the whole casebook and summarise the verdicts.
    Report {
        /// TOML file with `seed`, `scenarios`, `trials`, `timings`.
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
    },
}

/// Result of a command: JSON document, text rendering, and whether a
/// verification verdict failed.
pub struct Output {
    pub json: Json,
    pub text: String,
    pub failed: bool,
}

impl Output {
    fn plain(json: Json, text: String) -> Output {
        Output { json, text, failed: false }
    }
}

/// Parsed arguments sharing one tower.
struct Session {
    tower: Tower,
    lets: std::collections::HashMap<String, Expr>,
    exprs: Vec<Expr>,
}

impl Session {
    fn new(spec: &TowerSpec, texts: &[(&str, &str)]) -> Result<Session, CliError> {
        let known: HashSet<String> = spec.names();
        let exprs = texts
            .iter()
            .map(|(name, t)| parse_with(t, Some(&known)).map_err(|e| CliError::from(e).in_arg(name)))
            .collect::<Result<Vec<_>, _>>()?;
        let (tower, lets) = spec.build(&exprs.iter().collect::<Vec<_>>())?;
        Ok(Session { tower, lets, exprs })
    }

    fn env(&self) -> Env<'_> {
        Env { tower: &self.tower, lets: &self.lets }
    }

    fn op(&self, i: usize, name: &str) -> Result<LinOp, CliError> {
        self.env().operator(&self.exprs[i]).map_err(|e| e.in_arg(name))
    }

    fn rat_op(&self, i: usize, name: &str) -> Result<RatOp, CliError> {
        self.env().rat_op(&self.exprs[i]).map_err(|e| e.in_arg(name))
    }

    fn scalar(&self, i: usize, name: &str) -> Result<TowerElem, CliError> {
        self.env().scalar(&self.exprs[i]).map_err(|e| e.in_arg(name))
    }

    fn render_op(&self, l: &LinOp) -> String {
        l.render(&self.tower)
    }

    fn render_rat_op(&self, l: &RatOp) -> Result<String, CliError> {
        let tw = Tower::rational(l.ram());
        Ok(l.to_linop(&tw)?.render(&tw))
    }
}

fn arg_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("{prefix} {j}")).collect()
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let spec = match &cli.tower {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            TowerSpec::parse(&text)?
        }
        None => TowerSpec::default(),
    };
    match &cli.command {
        Command::ExpParts { op } => exp_parts(&spec, op, cli.theta),
        Command::FormalSolve { op, part } => formal_solve(&spec, op, part.as_deref(), cli.trunc.unwrap_or(DEFAULT_TRUNC)),
        Command::Wronskian { elems } => {
            let names = arg_names("element", elems.len());
            let texts: Vec<_> = names.iter().map(String::as_str).zip(elems.iter().map(String::as_str)).collect();
            let s = Session::new(&spec, &texts)?;
            let fs = (0..elems.len()).map(|i| s.scalar(i, &names[i])).collect::<Result<Vec<_>, _>>()?;
            let w = s.tower.render(&linop::wronskian(&s.tower, &fs)?);
            Ok(Output::plain(json!({ "wronskian": w }), format!("W = {w}\n")))
        }
        Command::Compose { ops } => {
            let (s, ls) = operators(&spec, ops)?;
            let l = ls.iter().skip(1).fold(ls[0].clone(), |acc, b| acc.compose(&s.tower, b));
            let r = s.render_op(&l);
            Ok(Output::plain(json!({ "op": r }), format!("{r}\n")))
        }
        Command::Rdivide { n, p } => {
            let s = Session::new(&spec, &[("N", n), ("P", p)])?;
            let (nn, pp) = (s.op(0, "N")?, s.op(1, "P")?);
            if pp.order() == 0 {
                return Err(CliError::Usage("the divisor must have order at least 1".into()).in_arg("P"));
            }
            let (q, r) = nn.right_divide(&s.tower, &pp)?;
            let (q, r) = (s.render_op(&q), s.render_op(&r));
            Ok(Output::plain(json!({ "q": q, "r": r }), format!("Q = {q}\nR = {r}\n")))
        }
        Command::Gcrd { ops } => {
            let (s, ls) = operators(&spec, ops)?;
            let g = linop::gcrd(&s.tower, &ls)?;
            let r = s.render_op(&g);
            Ok(Output::plain(json!({ "gcrd": r, "order": g.order() }), format!("{r}\n")))
        }
        Command::Gauge { op } => {
            let s = Session::new(&spec, &[("L", op)])?;
            let (lred, w) = linop::gauge_normalize(&s.tower, &s.op(0, "L")?)?;
            let (r, w) = (s.render_op(&lred), s.tower.render(&w));
            Ok(Output::plain(json!({ "op": r, "x_logderiv": w }), format!("Lred = {r}\nX'/X = {w}\n")))
        }
        Command::Changevar { op, n } => {
            let s = Session::new(&spec, &[("L", op)])?;
            let l = linop::change_variables(&s.rat_op(0, "L")?, *n)?;
            let r = s.render_rat_op(&l)?;
            Ok(Output::plain(json!({ "n": n, "op": r }), format!("{r}\n")))
        }
        Command::FrankGen { k, c, cap } => frank_gen(&spec, *k, c, cap),
        Command::FrankCheck { k, c, cap, g, phi, nu, a, tau } => {
            if let (Some(g), Some(phi)) = (g, phi) {
                frank_check_pair(&spec, *k, c, cap, g, phi)
            } else if g.is_some() || phi.is_some() {
                Err(CliError::Usage("--g and --phi must be given together".into()))
            } else {
                frank_check_instance(&spec, *k, nu.unwrap_or(k.saturating_sub(2)), a, tau)
            }
        }
        Command::Verify { scenario, p, k, m, delta, target, alpha } => verify(
            &spec,
            scenario,
            VerifyArgs { p: p.as_deref(), k: *k, m: *m, delta: delta.as_deref(), target: target.as_deref(), alpha: alpha.as_deref() },
            cli.seed.unwrap_or(1),
        ),
        Command::Report { config } => report(config.as_ref(), cli.seed),
    }
}

fn operators(spec: &TowerSpec, ops: &[String]) -> Result<(Session, Vec<LinOp>), CliError> {
    let names = arg_names("operator", ops.len());
    let texts: Vec<_> = names.iter().map(String::as_str).zip(ops.iter().map(String::as_str)).collect();
    let s = Session::new(spec, &texts)?;
    let ls = (0..ops.len()).map(|i| s.op(i, &names[i])).collect::<Result<Vec<_>, _>>()?;
    Ok((s, ls))
}

fn exp_parts(spec: &TowerSpec, op: &str, theta: Option<f64>) -> Result<Output, CliError> {
    let s = Session::new(spec, &[("L", op)])?;
    let l = s.rat_op(0, "L")?;
    let parts = formal::exponential_parts(&l)?;
    let mut json = parts.to_json();
    let mut text = String::new();
    let mut sorted: Vec<_> = parts.parts.iter().collect();
    sorted.sort_by(|a, b| b.0.canonical_cmp(&a.0));
    for (p, m) in sorted {
        text.push_str(&format!("{}  (multiplicity {m})\n", p.render()));
    }
    for a in &parts.approx {
        text.push_str(&format!(
            "~ ({:.6}{:+.6}i)*z^({})  (multiplicity {}, approximate)\n",
            a.coeff.re, a.coeff.im, a.exponent, a.multiplicity
        ));
    }
    text.push_str(&format!("ramification {}\n", parts.ram));
    if let Some(theta) = theta {
        let mut order: Vec<ExpPart> = parts.listed();
        order.dedup_by(|a, b| a.same_as(b));
        // insertion sort, most dominant first; comparisons may fail on near ties
        let mut sorted: Vec<ExpPart> = Vec::new();
        for p in order {
            let mut at = sorted.len();
            for (j, q) in sorted.iter().enumerate() {
                if ray_compare(p.poly(), q.poly(), theta)? == lindiff::RayOrder::Succ {
                    at = j;
                    break;
                }
            }
            sorted.insert(at, p);
        }
        let rels = sorted
            .windows(2)
            .map(|w| ray_compare(w[0].poly(), w[1].poly(), theta).map(|o| format!("{o:?}").to_uppercase()))
            .collect::<Result<Vec<_>, _>>()?;
        let names: Vec<String> = sorted.iter().map(ExpPart::render).collect();
        text.push_str(&format!("on arg z = {theta}: "));
        for (j, n) in names.iter().enumerate() {
            if j > 0 {
                text.push_str(if rels[j - 1] == "SIM" { " ~ " } else { " > " });
            }
            text.push_str(n);
        }
        text.push('\n');
        json["theta"] = json!(theta);
        json["ray_order"] = json!(names);
        json["ray_relations"] = json!(rels);
    }
    Ok(Output::plain(json, text))
}

fn formal_solve(spec: &TowerSpec, op: &str, part: Option<&str>, trunc: usize) -> Result<Output, CliError> {
    let mut texts = vec![("L", op)];
    if let Some(p) = part {
        texts.push(("--part", p));
    }
    let s = Session::new(spec, &texts)?;
    let l = s.rat_op(0, "L")?;
    let mut sols = Vec::new();
    let mut skipped = Vec::new();
    let targets: Vec<(ExpPart, usize)> = match part {
        Some(_) => {
            let poly = s.env().poly(&s.exprs[1]).map_err(|e| e.in_arg("--part"))?;
            vec![(ExpPart::new(poly).map_err(|e| CliError::from(e).in_arg("--part"))?, 1)]
        }
        None => {
            let parts = formal::exponential_parts(&l)?;
            for a in &parts.approx {
                skipped.push(json!({
                    "exp": format!("~({:.6}{:+.6}i)*z^({})", a.coeff.re, a.coeff.im, a.exponent),
                    "reason": "characteristic root outside Q(i)",
                }));
            }
            parts.parts
        }
    };
    let mut text = String::new();
    for (p, mult) in targets {
        if mult > 1 {
            skipped.push(json!({ "exp": p.render(), "reason": format!("multiplicity {mult}: log terms not constructed") }));
            continue;
        }
        let sol = formal::formal_solution(&l, &p, trunc)?;
        let res = formal::solution_residual(&l, &sol)?;
        let mut j = sol.to_json();
        j["residual_ok"] = json!(res.ok());
        text.push_str(&format!(
            "exp({}) z^({}) [{}]  trunc {}, residual {}\n",
            j["exp"].as_str().unwrap_or(""),
            j["gamma"].as_str().unwrap_or(""),
            j["series"].as_array().map(|v| v.iter().filter_map(|x| x.as_str()).collect::<Vec<_>>().join(", ")).unwrap_or_default(),
            sol.trunc,
            if res.ok() { "below the retained terms" } else { "TOO LARGE" },
        ));
        sols.push(j);
    }
    for sk in &skipped {
        text.push_str(&format!("skipped {}: {}\n", sk["exp"].as_str().unwrap_or(""), sk["reason"].as_str().unwrap_or("")));
    }
    Ok(Output::plain(json!({ "solutions": sols, "skipped": skipped }), text))
}

/// Session holding `c_0..c_(k-2)`, `C_0..C_(k-2)` and any further named
/// arguments, plus the system built from them.
fn frank_session(spec: &TowerSpec, k: usize, c: &[String], cap: &[String], extra: &[(&str, &str)]) -> Result<(Session, FrankSystem), CliError> {
    if k < 3 {
        return Err(CliError::Usage(format!("the Frank system needs k >= 3, got {k}")));
    }
    if c.len() > k - 1 || cap.len() > k - 1 {
        return Err(CliError::Usage(format!("at most {} values each for --c and --C", k - 1)));
    }
    let cn: Vec<String> = (0..c.len()).map(|j| format!("c_{j}")).collect();
    let capn: Vec<String> = (0..cap.len()).map(|j| format!("C_{j}")).collect();
    let mut texts: Vec<(&str, &str)> = Vec::new();
    texts.extend(cn.iter().map(String::as_str).zip(c.iter().map(String::as_str)));
    texts.extend(capn.iter().map(String::as_str).zip(cap.iter().map(String::as_str)));
    texts.extend_from_slice(extra);
    let s = Session::new(spec, &texts)?;
    let get = |offset: usize, len: usize, names: &[String]| -> Result<Vec<TowerElem>, CliError> {
        (0..k - 1)
            .map(|j| if j < len { s.scalar(offset + j, &names[j]) } else { Ok(TowerElem::zero()) })
            .collect()
    };
    let cv = get(0, c.len(), &cn)?;
    let capv = get(c.len(), cap.len(), &capn)?;
    let sys = FrankSystem::new(k, cv, capv)?;
    Ok((s, sys))
}

fn frank_gen(spec: &TowerSpec, k: usize, c: &[String], cap: &[String]) -> Result<Output, CliError> {
    let (s, sys) = frank_session(spec, k, c, cap, &[])?;
    let tw = &s.tower;
    let rels = sys.relations(tw)?;
    let mut text = String::new();
    for r in &rels {
        text.push_str(&format!("mu = {}: ({})[Phi] = ({})[G]\n", r.mu, s.render_op(&r.phi_op), s.render_op(&r.g_op)));
    }
    let u = sys.u_op();
    text.push_str(&format!("Phi' = ({})[G]\n", s.render_op(&u)));
    let mut json = json!({
        "k": k,
        "relations": rels.iter().map(|r| r.to_json(tw)).collect::<Vec<_>>(),
        "u": s.render_op(&u),
    });
    {
        let low = sys.low_relations(tw)?;
        let rel = |r: &frank::Relation| json!({ "phi": s.render_op(&r.phi_op), "g": s.render_op(&r.g_op) });
        json["low_relations"] = json!({ "y": rel(&low.eq_y), "z": rel(&low.eq_z), "dstar": rel(&low.eq_dstar) });
        for (name, r) in [("Y", &low.eq_y), ("Z", &low.eq_z), ("D*", &low.eq_dstar)] {
            text.push_str(&format!("{name}: ({})[Phi] = ({})[G]\n", s.render_op(&r.phi_op), s.render_op(&r.g_op)));
        }
    }
    Ok(Output::plain(json, text))
}

fn check_relations(tw: &Tower, sys: &FrankSystem, g: &TowerElem, phi: &TowerElem) -> Result<(Vec<Json>, String, bool), CliError> {
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut all = true;
    for r in sys.relations(tw)? {
        let res = r.residual(tw, g, phi);
        let ok = res.is_zero();
        all &= ok;
        text.push_str(&format!("{} mu = {}: residual {}\n", if ok { "EXACT-PASS" } else { "FAIL      " }, r.mu, tw.render(&res)));
        rows.push(json!({ "mu": r.mu, "ok": ok, "residual": tw.render(&res) }));
    }
    Ok((rows, text, all))
}

fn verdict_output(mut json: Json, mut text: String, ok: bool) -> Output {
    let v = if ok { "PASS" } else { "FAIL" };
    json["verdict"] = json!(v);
    text.push_str(&format!("verdict: {v}\n"));
    Output { json, text, failed: !ok }
}

fn frank_check_pair(spec: &TowerSpec, k: usize, c: &[String], cap: &[String], g: &str, phi: &str) -> Result<Output, CliError> {
    let (s, sys) = frank_session(spec, k, c, cap, &[("--g", g), ("--phi", phi)])?;
    let n = s.exprs.len();
    let (gv, pv) = (s.scalar(n - 2, "--g")?, s.scalar(n - 1, "--phi")?);
    let (rows, text, ok) = check_relations(&s.tower, &sys, &gv, &pv)?;
    Ok(verdict_output(json!({ "k": k, "relations": rows }), text, ok))
}

fn frank_check_instance(spec: &TowerSpec, k: usize, nu: usize, a: &str, tau: &str) -> Result<Output, CliError> {
    let s = Session::new(spec, &[("--a", a), ("--tau", tau)])?;
    let av = s.env().gauss(&s.exprs[0]).map_err(|e| e.in_arg("--a"))?;
    let tv = s.env().gauss(&s.exprs[1]).map_err(|e| e.in_arg("--tau"))?;
    let inst = frank::constant_instance(k, nu, &av, &tv, &lindiff::field::gauss::gr(1))?;
    let tw = &inst.tower;
    let (rows, mut text, ok) = check_relations(tw, &inst.system, &inst.g, &inst.phi)?;
    let sys = &inst.system;
    let coeffs = |f: &dyn Fn(i64) -> TowerElem| (0..k as i64 - 1).map(|m| tw.render(&f(m))).collect::<Vec<_>>();
    let (c, cap) = (coeffs(&|m| sys.c(m)), coeffs(&|m| sys.cap(m)));
    text.insert_str(0, &format!("G = {}, Phi = {}\nc = [{}]\nC = [{}]\n", tw.render(&inst.g), tw.render(&inst.phi), c.join(", "), cap.join(", ")));
    let json = json!({
        "k": k, "nu": inst.nu, "g": tw.render(&inst.g), "phi": tw.render(&inst.phi),
        "c": c, "C": cap, "relations": rows,
    });
    Ok(verdict_output(json, text, ok))
}

struct VerifyArgs<'a> {
    p: Option<&'a str>,
    k: Option<usize>,
    m: Option<u64>,
    delta: Option<&'a str>,
    target: Option<&'a str>,
    alpha: Option<&'a str>,
}

fn required<T>(v: Option<T>, flag: &str, scenario: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("scenario {scenario} needs {flag}")))
}

fn verify(spec: &TowerSpec, scenario: &str, a: VerifyArgs<'_>, seed: u64) -> Result<Output, CliError> {
    // parameters are polynomials or rational functions of z; example3 also accepts Y
    let mut spec = spec.clone();
    if scenario == "example3" && !spec.names().contains("Y") {
        spec.decls.push(crate::config::Decl::Let { name: "Y".into(), body: crate::syntax::parse("z")?, line: 0 });
    }
    let poly_arg = |flag: &str, text: &str| -> Result<lindiff::Poly, CliError> {
        let s = Session::new(&spec, &[(flag, text)])?;
        s.env().poly(&s.exprs[0]).map_err(|e| e.in_arg(flag))
    };
    let rep: Report = match scenario {
        "example1" => {
            let delta = poly_arg("--delta", required(a.delta, "--delta", scenario)?)?;
            casebook::verify_example1(&delta, a.k.unwrap_or(3), a.m.unwrap_or(1), &[])?
        }
        "example2" => {
            let p = poly_arg("--P", required(a.p, "--P", scenario)?)?;
            let targets: Vec<Example2Target> = match a.target {
                None => Example2Target::ALL.to_vec(),
                Some(t) => vec![Example2Target::ALL
                    .into_iter()
                    .find(|x| x.name().eq_ignore_ascii_case(t))
                    .ok_or_else(|| CliError::Usage(format!("--target must be B2, B1 or B0, got `{t}`")))?],
            };
            let mut rep = Report::new("example2");
            for t in targets {
                rep.extend(casebook::verify_example2(&p, t)?.report);
            }
            rep
        }
        "example3" => {
            let p1 = poly_arg("--P", required(a.p, "--P", scenario)?)?;
            let m = a.m.unwrap_or(2);
            let m = u32::try_from(m).map_err(|_| CliError::Usage("--m is too large".into()))?;
            casebook::verify_example3(m, &p1)?
        }
        "theorem-reps" => {
            let delta = poly_arg("--delta", required(a.delta, "--delta", scenario)?)?;
            let alpha_text = a.alpha.unwrap_or("0");
            let s = Session::new(&spec, &[("--alpha", alpha_text)])?;
            let alpha = s.env().ratfun(&s.exprs[0]).map_err(|e| e.in_arg("--alpha"))?;
            casebook::verify_theorem_reps(a.k.unwrap_or(3), &delta, a.m.unwrap_or(1), &alpha)?
        }
        "elimination-chain" => casebook::verify_elimination_chain(a.k.unwrap_or(3), &mut sample::rng(seed))?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown scenario `{other}`; expected one of {}",
                casebook::SCENARIOS.join(", ")
            )))
        }
    };
    let ok = rep.passed();
    Ok(verdict_output(rep.to_json(), rep.render_text(), ok))
}

fn report(config: Option<&PathBuf>, seed: Option<u64>) -> Result<Output, CliError> {
    let mut cfg = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            CasebookConfig::parse(&text)?
        }
        None => CasebookConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let suite = casebook::run_all(&cfg)?;
    let mut text = String::new();
    for r in &suite.reports {
        text.push_str(&r.render_text());
        text.push_str(&format!("-> {} ({} checks)\n\n", if r.passed() { "PASS" } else { "FAIL" }, r.checks.len()));
    }
    let ok = suite.passed();
    text.push_str(&format!("verdict: {}\n", if ok { "PASS" } else { "FAIL" }));
    Ok(Output { json: suite.to_json(), text, failed: !ok })
}
