//! Command-line front end.
//!
//! Subcommands: solve-ruled, scan-c, frame-check, futaki, interval-solve,
//! plot. All inputs are explicit flags or files; there is no environment
//! configuration. Exit codes: 0 success, 1 malformed input, 2 non-positive
//! leading coefficients, 3 singular boundary system, 4 positivity failure.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chernscal::calabi::{
    assemble_and_solve, scan_threshold, CalabiError, PositivityMode, RuledParams,
};
use chernscal::emit::{
    build_solve_report, figure_svg, solve_report_to_csv, to_pretty_json, write_atomic, SolveReport,
};
use chernscal::frame::{builtin_model, builtin_model_names, compute_report, LieAlgebraModel};
use chernscal::rational::{parse_rational, Rat};
use chernscal::toric::{
    builtin_polytope, builtin_polytope_names, futaki, obstruction_probe, AffineWeight, Polytope,
};

const USAGE: &str = "usage: chernscal <command> [flags]

commands:
  solve-ruled    --m M --p P --c C (--lambda L | --a A --b B)
                 [--grid N] [--format json|csv] [--out FILE]
  scan-c         --m M --p P (--lambda L | --a A --b B)
                 --c-min LO --c-max HI [--probes N] [--out FILE]
  frame-check    --model NAME|FILE [--tol T] [--out FILE]
  futaki         --polytope NAME|FILE --weight NAME|FILE [--out FILE]
  interval-solve --a A --b B [--out FILE]
  plot           --in RESULT.json --out FIG.svg

built-in models: torus4, kodaira-thurston, hopf, s3s3-nk
built-in polytopes: interval, square, simplex; built-in weight: flat";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let code = run(&args);
    ExitCode::from(code)
}

fn run(args: &[String]) -> u8 {
    let Some(command) = args.first() else {
        eprintln!("{USAGE}");
        return 1;
    };
    let allowed: &[&str] = match command.as_str() {
        "solve-ruled" => &["m", "p", "c", "lambda", "a", "b", "grid", "format", "out"],
        "scan-c" => &[
            "m", "p", "lambda", "a", "b", "c-min", "c-max", "probes", "out",
        ],
        "frame-check" => &["model", "tol", "out"],
        "futaki" => &["polytope", "weight", "out"],
        "interval-solve" => &["a", "b", "out"],
        "plot" => &["in", "out"],
        _ => {
            eprintln!("unknown command {command:?}\n{USAGE}");
            return 1;
        }
    };
    let flags = match parse_flags(&args[1..], allowed) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let result = match command.as_str() {
        "solve-ruled" => cmd_solve_ruled(&flags),
        "scan-c" => cmd_scan_c(&flags),
        "frame-check" => cmd_frame_check(&flags),
        "futaki" => cmd_futaki(&flags),
        "interval-solve" => cmd_interval_solve(&flags),
        "plot" => cmd_plot(&flags),
        _ => unreachable!("matched above"),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

struct Flags(HashMap<String, String>);

impl Flags {
    fn get(&self, name: &str) -> Option<&str> {
        self.0.get(name).map(|s| s.as_str())
    }

    fn require(&self, name: &str) -> Result<&str, String> {
        self.get(name).ok_or_else(|| format!("missing --{name}"))
    }

    fn rational(&self, name: &str) -> Result<Rat, String> {
        parse_rational(self.require(name)?).map_err(|e| format!("--{name}: {e}"))
    }

    fn f64(&self, name: &str) -> Result<f64, String> {
        let value: f64 = self
            .require(name)?
            .parse()
            .map_err(|_| format!("--{name}: expected a number"))?;
        if !value.is_finite() {
            return Err(format!("--{name}: must be finite"));
        }
        Ok(value)
    }
}

fn parse_flags(args: &[String], allowed: &[&str]) -> Result<Flags, String> {
    let mut map = HashMap::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let Some(name) = arg.strip_prefix("--") else {
            return Err(format!("unexpected argument {arg:?}"));
        };
        if !allowed.contains(&name) {
            return Err(format!("unknown flag --{name} for this command"));
        }
        let value = it
            .next()
            .ok_or_else(|| format!("flag --{name} needs a value"))?;
        if map.insert(name.to_string(), value.clone()).is_some() {
            return Err(format!("flag --{name} given twice"));
        }
    }
    Ok(Flags(map))
}

fn parse_ruled_params(flags: &Flags) -> Result<RuledParams, String> {
    let m: u32 = flags
        .require("m")?
        .parse()
        .map_err(|_| "--m: expected a positive integer".to_string())?;
    let p = flags.rational("p")?;
    let c = flags.rational("c")?;
    let has_lambda = flags.get("lambda").is_some();
    let has_ab = flags.get("a").is_some() || flags.get("b").is_some();
    if has_lambda && has_ab {
        return Err("give either --lambda or --a/--b, not both".into());
    }
    let params = if has_lambda {
        RuledParams::from_lambda(m, p, c, flags.rational("lambda")?)
    } else if has_ab {
        RuledParams::new(m, p, c, flags.rational("a")?, flags.rational("b")?)
    } else {
        return Err("missing --lambda (or --a/--b)".into());
    };
    params.map_err(|e| e.to_string())
}

fn emit(flags: &Flags, content: &str) -> Result<(), String> {
    match flags.get("out") {
        Some(path) => {
            write_atomic(Path::new(path), content).map_err(|e| format!("cannot write {path}: {e}"))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn solve_exit_code(err: &CalabiError) -> u8 {
    match err {
        CalabiError::NonPositiveAB { .. } => 2,
        CalabiError::SingularSystem { .. } => 3,
        CalabiError::NoAcceptableC => 4,
        _ => 1,
    }
}

fn cmd_solve_ruled(flags: &Flags) -> Result<u8, String> {
    let params = parse_ruled_params(flags)?;
    let grid: usize = match flags.get("grid") {
        Some(g) => g.parse().map_err(|_| "--grid: expected an integer")?,
        None => 101,
    };
    if grid < 17 {
        return Err("--grid must be at least 17".into());
    }
    let format = flags.get("format").unwrap_or("json");
    if format != "json" && format != "csv" {
        return Err(format!("unknown --format {format:?}"));
    }
    let sol = match assemble_and_solve(&params) {
        Ok(sol) => sol,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(solve_exit_code(&e));
        }
    };
    let report = build_solve_report(&params, &sol, grid).map_err(|e| e.to_string())?;
    let content = match format {
        "csv" => solve_report_to_csv(&report),
        _ => to_pretty_json(&report),
    };
    emit(flags, &content)?;
    if sol.positivity.mode == PositivityMode::Failed {
        eprintln!("warning: positivity certificate failed");
        return Ok(4);
    }
    Ok(0)
}

fn cmd_scan_c(flags: &Flags) -> Result<u8, String> {
    // template validation needs some positive c; use c-min for it
    let c_min = flags.rational("c-min")?;
    let c_max = flags.rational("c-max")?;
    let probes: usize = match flags.get("probes") {
        Some(p) => p.parse().map_err(|_| "--probes: expected an integer")?,
        None => 33,
    };
    let template = {
        let with_c = |flags: &Flags, c: Rat| -> Result<RuledParams, String> {
            let m: u32 = flags
                .require("m")?
                .parse()
                .map_err(|_| "--m: expected a positive integer".to_string())?;
            let p = flags.rational("p")?;
            let has_lambda = flags.get("lambda").is_some();
            if has_lambda {
                RuledParams::from_lambda(m, p, c, flags.rational("lambda")?)
            } else {
                RuledParams::new(m, p, c, flags.rational("a")?, flags.rational("b")?)
            }
            .map_err(|e| e.to_string())
        };
        with_c(flags, c_min.clone())?
    };
    match scan_threshold(&template, &c_min, &c_max, probes) {
        Ok(report) => {
            emit(flags, &to_pretty_json(&report))?;
            Ok(0)
        }
        Err(e @ CalabiError::NoAcceptableC) => {
            eprintln!("error: {e}");
            Ok(4)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn read_input(arg: &str, builtin: impl Fn(&str) -> Option<&'static str>) -> Result<String, String> {
    if let Some(text) = builtin(arg) {
        return Ok(text.to_string());
    }
    if PathBuf::from(arg).exists() {
        return std::fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}"));
    }
    Err(format!("no built-in or file named {arg:?}"))
}

fn cmd_frame_check(flags: &Flags) -> Result<u8, String> {
    let name = flags.require("model")?;
    let text = read_input(name, builtin_model)
        .map_err(|e| format!("{e}; built-in models: {}", builtin_model_names().join(", ")))?;
    let model = LieAlgebraModel::from_json(&text).map_err(|e| e.to_string())?;
    let report = compute_report(&model).map_err(|e| e.to_string())?;
    let tol: f64 = match flags.get("tol") {
        Some(t) => t.parse().map_err(|_| "--tol: expected a number")?,
        None => 1e-9,
    };
    if tol <= 0.0 {
        return Err("--tol must be positive".into());
    }
    emit(flags, &to_pretty_json(&report))?;
    if report.residuals.max() <= tol && report.chern_scalar_cross_residual <= tol {
        Ok(0)
    } else {
        eprintln!(
            "identity residuals exceed tolerance {tol}: max = {}",
            report.residuals.max()
        );
        Ok(4)
    }
}

fn cmd_futaki(flags: &Flags) -> Result<u8, String> {
    let poly_arg = flags.require("polytope")?;
    let text = read_input(poly_arg, builtin_polytope).map_err(|e| {
        format!(
            "{e}; built-in polytopes: {}",
            builtin_polytope_names().join(", ")
        )
    })?;
    let poly = Polytope::from_json(&text).map_err(|e| e.to_string())?;
    let weight_arg = flags.require("weight")?;
    let weight = if weight_arg == "flat" {
        AffineWeight::flat(poly.n)
    } else {
        AffineWeight::from_json(
            &std::fs::read_to_string(weight_arg)
                .map_err(|e| format!("cannot read {weight_arg}: {e}"))?,
        )
        .map_err(|e| e.to_string())?
    };
    let report = futaki(&poly, &weight).map_err(|e| e.to_string())?;
    emit(flags, &to_pretty_json(&report))?;
    Ok(0)
}

fn cmd_interval_solve(flags: &Flags) -> Result<u8, String> {
    let weight = AffineWeight {
        a: vec![flags.f64("a")?],
        a_const: flags.f64("b")?,
    };
    let poly =
        Polytope::from_json(builtin_polytope("interval").unwrap()).map_err(|e| e.to_string())?;
    let (solution, futaki_report) = obstruction_probe(&poly, &weight).map_err(|e| e.to_string())?;
    #[derive(serde::Serialize)]
    struct IntervalReport {
        kappa: f64,
        compat: f64,
        h_coeffs: [f64; 3],
        residuals: [f64; 4],
        futaki: chernscal::toric::FutakiReport,
    }
    let report = IntervalReport {
        kappa: solution.kappa,
        compat: solution.compat,
        h_coeffs: solution.h_coeffs,
        residuals: solution.residuals,
        futaki: futaki_report,
    };
    emit(flags, &to_pretty_json(&report))?;
    Ok(0)
}

fn cmd_plot(flags: &Flags) -> Result<u8, String> {
    let input = flags.require("in")?;
    let text = std::fs::read_to_string(input).map_err(|e| format!("cannot read {input}: {e}"))?;
    let report: SolveReport =
        serde_json::from_str(&text).map_err(|e| format!("schema mismatch in {input}: {e}"))?;
    let svg = figure_svg(&report.f_samples, report.ideal_coefficient).map_err(|e| e.to_string())?;
    let out = flags.require("out")?;
    write_atomic(Path::new(out), &svg).map_err(|e| format!("cannot write {out}: {e}"))?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_total_over_solver_outcomes() {
        assert_eq!(
            solve_exit_code(&CalabiError::NonPositiveAB { a: -1.0, b: 2.0 }),
            2
        );
        assert_eq!(
            solve_exit_code(&CalabiError::SingularSystem {
                det: 0.0,
                threshold: 1e-10,
                condition_number: f64::INFINITY,
            }),
            3
        );
        assert_eq!(solve_exit_code(&CalabiError::NoAcceptableC), 4);
        assert_eq!(solve_exit_code(&CalabiError::InvalidParams("m".into())), 1);
    }

    #[test]
    fn flag_parser_rejects_malformed_input() {
        let allowed = &["m"][..];
        assert!(parse_flags(&["--m".into()], allowed).is_err());
        assert!(parse_flags(&["m".into(), "4".into()], allowed).is_err());
        assert!(parse_flags(
            &["--m".into(), "4".into(), "--m".into(), "6".into()],
            allowed
        )
        .is_err());
        assert!(parse_flags(&["--grid".into(), "4".into()], allowed).is_err());
        let flags = parse_flags(&["--m".into(), "4".into()], allowed).unwrap();
        assert_eq!(flags.get("m"), Some("4"));
    }
}
