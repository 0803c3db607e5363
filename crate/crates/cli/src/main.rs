use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use nervebar::barcobar::{bar, cobar};
use nervebar::dgcoalg::chains;
use nervebar::exactlin::{homology_window, HomologyTable};
use nervebar::loopgroup::{hurewicz_check, kan_loop_group, pi1_presentation};
use nervebar::monoids::{abelianization, group_completion, monoid_algebra, validate_monoid, FiniteMonoid, MonoidMap};
use nervebar::rewrite::{complete, localize_cobar, AlgebraWindow, CycleBasis, PresentedDgAlgebra};
use nervebar::simplicial::{
    collapsed_tetrahedron, minimal_sphere, point, rp2, simplex_boundary, standard_simplex, validate_simplicial, Nerve,
    SimplicialSet,
};
use nervebar::suite::{self, SuiteConfig};
use nervebar::weqcheck::weq_verdict;

#[derive(Parser)]
#[command(name = "nervebar", version, about = "Exact bar/cobar, nerve and loop group computations")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Degree window `lo..hi`.
    #[arg(long, global = true, default_value = "0..6")]
    window: String,
    /// Rewrite steps allowed during completion.
    #[arg(long, global = true, default_value_t = 100_000)]
    budget: usize,
    /// Largest basis enumerated per degree.
    #[arg(long, global = true, default_value_t = 10_000)]
    cap: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of a simplicial set, or of the nerve of a monoid.
    Homology { input: String },
    /// Cobar construction on the chains of a reduced simplicial set.
    Cobar { input: String },
    /// Cobar construction with `1 + s⁻¹x` inverted for every edge `x`.
    ExtendedCobar {
        input: String,
        /// Invert `1 - s⁻¹x` instead.
        #[arg(long)]
        negated: bool,
    },
    /// Bar construction of an augmented algebra or a monoid algebra.
    Bar { input: String },
    /// Levels of the Kan loop group.
    Loopgroup {
        input: String,
        #[arg(long)]
        hi: Option<usize>,
    },
    /// Fundamental group presentation, completion and Hurewicz check.
    Pi1 { input: String },
    /// Weak equivalence verdict for a monoid map.
    Weq { input: String },
    /// Reproduce the worked examples and acceptance checks.
    Suite {
        #[arg(long, default_value = "all")]
        case: String,
        /// Samples per property in the property sweep.
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct InputHash {
    name: String,
    sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RunReport {
    command: String,
    tool_version: String,
    inputs: Vec<InputHash>,
    parameters: Value,
    passed: bool,
    outputs: Value,
    timings_ms: Value,
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

fn invalid(kind: &'static str, message: impl ToString) -> Failure {
    Failure {
        code: 2,
        kind,
        message: message.to_string(),
    }
}

enum Object {
    Complex(SimplicialSet),
    Monoid(FiniteMonoid),
    Algebra(PresentedDgAlgebra),
    Map(MonoidMap),
}

#[derive(Deserialize)]
struct MapRepr {
    source: FiniteMonoid,
    target: FiniteMonoid,
    images: Vec<String>,
}

fn builtin_monoid(name: &str) -> Option<FiniteMonoid> {
    match name {
        "trivial" => Some(FiniteMonoid::trivial()),
        "idempotent" => Some(FiniteMonoid::idempotent()),
        _ => {
            let n: usize = name.strip_prefix('z')?.parse().ok()?;
            (n >= 1).then(|| FiniteMonoid::cyclic(n))
        }
    }
}

fn builtin(name: &str) -> Option<Object> {
    let num = |p: &str| name.strip_prefix(p).and_then(|s| s.parse::<usize>().ok()).filter(|&n| n >= 1);
    if let Some(n) = num("sphere") {
        return Some(Object::Complex(minimal_sphere(n)));
    }
    if let Some(n) = num("simplex") {
        return Some(Object::Complex(standard_simplex(n)));
    }
    if let Some(n) = num("boundary") {
        return Some(Object::Complex(simplex_boundary(n)));
    }
    match name {
        "point" => return Some(Object::Complex(point())),
        "rp2" => return Some(Object::Complex(rp2())),
        "collapsed-tetrahedron" => return Some(Object::Complex(collapsed_tetrahedron())),
        "exterior" => {
            let mut a = PresentedDgAlgebra::free(&[("x", 1)]).ok()?;
            a.relate("x*x", "0").ok()?;
            return Some(Object::Algebra(a));
        }
        "free-x" => return Some(Object::Algebra(PresentedDgAlgebra::free(&[("x", 1)]).ok()?)),
        "ground" => return Some(Object::Algebra(PresentedDgAlgebra::ground())),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("to-trivial:") {
        return builtin_monoid(rest).map(|m| Object::Map(MonoidMap::to_trivial(&m)));
    }
    if let Some(rest) = name.strip_prefix("identity:") {
        return builtin_monoid(rest).map(|m| Object::Map(MonoidMap::identity(&m)));
    }
    builtin_monoid(name).map(Object::Monoid)
}

/// Load a JSON file or a built-in object; returns it with its input hash.
fn load(input: &str) -> Result<(Object, InputHash), Failure> {
    let path = Path::new(input);
    if !path.exists() {
        let obj = builtin(input).ok_or_else(|| invalid("UnknownInput", format!("no file or built-in named {input}")))?;
        return Ok((obj, hash(input, input.as_bytes())));
    }
    let bytes = fs::read(path).map_err(|e| invalid("Io", e))?;
    let h = hash(input, &bytes);
    let v: Value = serde_json::from_slice(&bytes).map_err(|e| invalid("Json", e))?;
    let obj = if v.get("simplices").is_some() {
        let k: SimplicialSet = serde_json::from_value(v).map_err(|e| invalid("SimplicialSet", e))?;
        let report = validate_simplicial(&k, k.top_dim() + 1);
        if !report.is_valid() {
            return Err(invalid("SimplicialIdentities", report));
        }
        Object::Complex(k)
    } else if v.get("images").is_some() {
        let r: MapRepr = serde_json::from_value(v).map_err(|e| invalid("MonoidMap", e))?;
        let images = r
            .images
            .iter()
            .map(|l| r.target.index_of(l).ok_or_else(|| invalid("MonoidMap", format!("unknown element {l}"))))
            .collect::<Result<Vec<_>, _>>()?;
        for m in [&r.source, &r.target] {
            let report = validate_monoid(m);
            if !report.is_valid() {
                return Err(invalid("Monoid", report));
            }
        }
        Object::Map(MonoidMap::new(r.source, r.target, images).map_err(|e| invalid("MonoidMap", e))?)
    } else if v.get("table").is_some() {
        let m: FiniteMonoid = serde_json::from_value(v).map_err(|e| invalid("Monoid", e))?;
        let report = validate_monoid(&m);
        if !report.is_valid() {
            return Err(invalid("Monoid", report));
        }
        Object::Monoid(m)
    } else if v.get("gens").is_some() {
        let a: PresentedDgAlgebra = serde_json::from_value(v).map_err(|e| invalid("Algebra", e))?;
        a.validate().map_err(|e| invalid("Algebra", e))?;
        Object::Algebra(a)
    } else {
        return Err(invalid("UnknownInput", "expected a simplicial set, monoid, monoid map or algebra"));
    };
    Ok((obj, h))
}

fn hash(name: &str, bytes: &[u8]) -> InputHash {
    InputHash {
        name: name.to_string(),
        sha256: format!("{:x}", Sha256::digest(bytes)),
    }
}

fn parse_window(s: &str) -> Result<(usize, usize), Failure> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| invalid("Window", format!("expected lo..hi, got {s}")))?;
    let lo: usize = lo.trim().parse().map_err(|_| invalid("Window", s))?;
    let hi: usize = hi.trim().parse().map_err(|_| invalid("Window", s))?;
    if hi <= lo {
        return Err(invalid("Window", format!("empty window {s}")));
    }
    Ok((lo, hi))
}

fn reduced(k: SimplicialSet) -> Result<SimplicialSet, Failure> {
    if k.count(0) != 1 {
        return Err(invalid("NotReduced", format!("{} vertices", k.count(0))));
    }
    Ok(k)
}

/// Reduced complex from a simplicial set or the nerve of a monoid.
fn complex_of(obj: Object, hi: usize) -> Result<SimplicialSet, Failure> {
    match obj {
        Object::Complex(k) => Ok(k),
        Object::Monoid(m) => SimplicialSet::from_simplicial(&Nerve::new(&m), hi).map_err(|e| invalid("Nerve", e)),
        _ => Err(invalid("UnknownInput", "expected a simplicial set or a monoid")),
    }
}

fn restrict(h: &HomologyTable, lo: usize, hi: usize) -> HomologyTable {
    HomologyTable {
        entries: h
            .entries
            .iter()
            .filter(|(&n, g)| n >= lo && n < hi && g.exact)
            .map(|(&n, g)| (n, g.clone()))
            .collect(),
    }
}

struct Outcome {
    passed: bool,
    outputs: Value,
    csv: Option<String>,
}

fn ok(outputs: Value) -> Outcome {
    Outcome {
        passed: true,
        outputs,
        csv: None,
    }
}

fn execute(cli: &Cli, inputs: &mut Vec<InputHash>) -> Result<Outcome, Failure> {
    let (lo, hi) = parse_window(&cli.window)?;
    let mut load_into = |input: &str| -> Result<Object, Failure> {
        let (obj, h) = load(input)?;
        inputs.push(h);
        Ok(obj)
    };
    match &cli.command {
        Command::Homology { input } => {
            let k = complex_of(load_into(input)?, hi)?;
            let c = chains(&k, hi).map_err(|e| invalid("Chains", e))?;
            let h = restrict(&homology_window(&c.complex).map_err(|e| invalid("Homology", e))?, lo, hi);
            Ok(Outcome {
                passed: true,
                csv: Some(h.to_csv()),
                outputs: json!({ "homology": h }),
            })
        }
        Command::Cobar { input } => {
            let k = reduced(complex_of(load_into(input)?, hi)?)?;
            let c = chains(&k, hi).map_err(|e| invalid("Chains", e))?;
            let omega = cobar(&c, hi).map_err(|e| invalid("Cobar", e))?;
            Ok(ok(json!({ "presentation": omega })))
        }
        Command::ExtendedCobar { input, negated } => {
            let k = reduced(complex_of(load_into(input)?, hi)?)?;
            let c = chains(&k, hi).map_err(|e| invalid("Chains", e))?;
            let omega = cobar(&c, hi).map_err(|e| invalid("Cobar", e))?;
            let basis = if *negated { CycleBasis::Negated } else { CycleBasis::Natural };
            let ext = localize_cobar(&omega, basis).map_err(|e| invalid("Localization", e))?;
            let sys = complete(&ext, cli.budget).map_err(|e| invalid("Completion", e))?;
            Ok(ok(json!({
                "presentation": ext,
                "rules": sys.show_rules(),
                "status": sys.status,
            })))
        }
        Command::Bar { input } => {
            let a = match load_into(input)? {
                Object::Algebra(a) => a,
                Object::Monoid(m) => monoid_algebra(&m).map_err(|e| invalid("Monoid", e))?,
                _ => return Err(invalid("UnknownInput", "expected an algebra or a monoid")),
            };
            let w = AlgebraWindow::new(&a, hi, cli.budget, cli.cap).map_err(|e| invalid("Algebra", e))?;
            let b = bar(&w, hi).map_err(|e| invalid("Bar", e))?;
            let h = restrict(&homology_window(&b.complex).map_err(|e| invalid("Homology", e))?, lo, hi);
            Ok(Outcome {
                passed: true,
                csv: Some(h.to_csv()),
                outputs: json!({ "window": b, "homology": h }),
            })
        }
        Command::Loopgroup { input, hi: level } => {
            let level = level.unwrap_or(hi);
            let k = reduced(complex_of(load_into(input)?, level + 2)?)?;
            let g = kan_loop_group(&k, level).map_err(|e| invalid("LoopGroup", e))?;
            Ok(ok(json!({ "levels": g })))
        }
        Command::Pi1 { input } => {
            let k = reduced(complex_of(load_into(input)?, 3)?)?;
            let p = pi1_presentation(&k).map_err(|e| invalid("Pi1", e))?;
            let completion = group_completion(&p, cli.budget);
            let hurewicz = hurewicz_check(&k).map_err(|e| invalid("Pi1", e))?;
            Ok(Outcome {
                passed: hurewicz.agree,
                csv: None,
                outputs: json!({
                    "presentation": p,
                    "completion": completion,
                    "abelianization": abelianization(&p).to_string(),
                    "hurewicz": hurewicz,
                }),
            })
        }
        Command::Weq { input } => {
            let Object::Map(f) = load_into(input)? else {
                return Err(invalid("UnknownInput", "expected a monoid map"));
            };
            Ok(ok(json!({ "verdict": weq_verdict(&f, hi, cli.budget) })))
        }
        Command::Suite { case, cases } => {
            let cfg = SuiteConfig {
                seed: cli.seed,
                cases: *cases,
                budget: cli.budget,
                cap: cli.cap,
            };
            let outcomes = suite::run(case, &cfg).ok_or_else(|| {
                invalid(
                    "UnknownCase",
                    format!("unknown case {case}; expected all or one of {}", suite::case_names().join(", ")),
                )
            })?;
            let passed = outcomes.iter().all(|o| o.passed);
            let mut csv = String::from("criterion,case,passed\n");
            for o in &outcomes {
                csv.push_str(&format!("{},{},{}\n", o.criterion, o.case, o.passed));
            }
            let results: Vec<Value> = outcomes
                .iter()
                .map(|o| json!({ "criterion": o.criterion, "case": o.case, "passed": o.passed, "detail": o.detail }))
                .collect();
            let first_failure = outcomes.iter().find(|o| !o.passed).map(|o| json!({ "case": o.case, "detail": o.detail }));
            Ok(Outcome {
                passed,
                csv: Some(csv),
                outputs: json!({
                    "results": results,
                    "first_failure": first_failure,
                    "timings_ms": outcomes.iter().map(|o| (o.case.clone(), o.elapsed_ms)).collect::<std::collections::BTreeMap<_, _>>(),
                }),
            })
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Homology { .. } => "homology",
        Command::Cobar { .. } => "cobar",
        Command::ExtendedCobar { .. } => "extended-cobar",
        Command::Bar { .. } => "bar",
        Command::Loopgroup { .. } => "loopgroup",
        Command::Pi1 { .. } => "pi1",
        Command::Weq { .. } => "weq",
        Command::Suite { .. } => "suite",
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(p) => fs::write(p, text).map_err(|e| invalid("Io", e)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut inputs = vec![];
    let result = execute(&cli, &mut inputs);
    let elapsed = start.elapsed().as_millis();
    let outcome = match result {
        Ok(o) => o,
        Err(f) => {
            let diag = json!({ "command": command_name(&cli.command), "error": f.kind, "message": f.message });
            eprintln!("{diag}");
            return ExitCode::from(f.code);
        }
    };
    let mut outputs = outcome.outputs;
    let mut timings = json!({ "total": elapsed });
    if let Some(t) = outputs.as_object_mut().and_then(|o| o.remove("timings_ms")) {
        timings["cases"] = t;
    }
    let text = match (cli.format, &outcome.csv) {
        (Format::Csv, Some(csv)) => csv.trim_end().to_string(),
        _ => {
            let report = RunReport {
                command: command_name(&cli.command).to_string(),
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                inputs,
                parameters: json!({
                    "window": cli.window,
                    "budget": cli.budget,
                    "cap": cli.cap,
                    "seed": cli.seed,
                }),
                passed: outcome.passed,
                outputs,
                timings_ms: timings,
            };
            serde_json::to_string_pretty(&report).expect("report serializes")
        }
    };
    if let Err(f) = emit(&cli, &text) {
        eprintln!("{}", json!({ "error": f.kind, "message": f.message }));
        return ExitCode::from(f.code);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
