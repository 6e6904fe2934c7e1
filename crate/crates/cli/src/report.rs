use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::ValueEnum;
use dng_core::audit::Discrepancy;
use dng_core::closed_forms::{nim_extreme_formula, signature_tree, tree_formula, FormulaError};
use dng_core::game::{nim_game, sum_brute, sum_nim, GameError, Nim, Outcome};
use dng_core::geometry::BackendKind;
use dng_core::instance::Instance;
use dng_core::structure::nim_quotient;
use dng_core::GameSpec;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Brute,
    Quotient,
    Formula,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Quotient => "quotient",
            Method::Formula => "formula",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MethodResult {
    pub method: &'static str,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nim: Option<Nim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fallback: Option<Nim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<f64>,
}

impl MethodResult {
    fn new(method: Method) -> Self {
        MethodResult {
            method: method.name(),
            status: "ok",
            nim: None,
            case_id: None,
            detail: None,
            fallback: None,
            millis: None,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Agreement {
    pub a: &'static str,
    pub b: &'static str,
    pub agree: bool,
}

#[derive(Debug, Serialize)]
pub struct Erratum {
    pub case_id: String,
    pub predicted: Nim,
    pub oracle: Nim,
    pub class: &'static str,
    pub note: &'static str,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub instance: Box<serde_json::value::RawValue>,
    pub methods: Vec<MethodResult>,
    pub agreement: Vec<Agreement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<&'static str>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errata: Vec<Erratum>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dot: Option<String>,
}

impl RunReport {
    pub fn all_agree(&self) -> bool {
        self.agreement.iter().all(|a| a.agree)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "instance: {}", self.instance.get());
        for m in &self.methods {
            let mut line = format!("{}: ", m.method);
            match (m.status, m.nim) {
                ("ok", Some(v)) => line.push_str(&v.to_string()),
                (status, _) => line.push_str(&status.replace('_', " ")),
            }
            if let Some(c) = &m.case_id {
                let _ = write!(line, " [{c}]");
            }
            if let Some(d) = &m.detail {
                let _ = write!(line, " ({d})");
            }
            if let Some(f) = m.fallback {
                let _ = write!(line, "; quotient fallback {f}");
            }
            if let Some(ms) = m.millis {
                let _ = write!(line, " in {ms:.3} ms");
            }
            let _ = writeln!(out, "{line}");
        }
        for a in &self.agreement {
            let _ = writeln!(out, "{} vs {}: {}", a.a, a.b, if a.agree { "agree" } else { "DISAGREE" });
        }
        if let Some(o) = self.outcome {
            let _ = writeln!(out, "outcome: {o}");
        }
        for e in &self.errata {
            let _ = writeln!(
                out,
                "errata: {} predicts {}, solvers give {} ({}: {})",
                e.case_id, e.predicted, e.oracle, e.class, e.note
            );
        }
        out
    }
}

fn timed<T>(on: bool, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    let start = Instant::now();
    let v = f();
    (v, on.then(|| start.elapsed().as_secs_f64() * 1e3))
}

fn run_formula(spec: &GameSpec, r: &mut MethodResult) {
    let tree = matches!(spec.geometry().kind(), BackendKind::TreeVertex | BackendKind::TreeEdge);
    let verdict = if tree { tree_formula(spec) } else { nim_extreme_formula(spec) };
    match verdict {
        Ok(v) => {
            r.nim = Some(v.predicted);
            r.case_id = Some(v.case_id);
            if tree {
                if let Ok((sig, _)) = signature_tree(spec) {
                    r.detail = Some(format!("signature {sig}"));
                }
            }
        }
        Err(FormulaError::TableGap { case_id, sig }) => {
            r.status = "table_gap";
            r.case_id = Some(case_id);
            r.detail = Some(format!("signature {sig}"));
            r.fallback = Some(nim_quotient(spec));
        }
        Err(FormulaError::NotApplicable(why)) => {
            r.status = "not_applicable";
            r.detail = Some(why);
        }
        Err(e @ FormulaError::Degenerate) => {
            r.status = "not_applicable";
            r.detail = Some(e.to_string());
        }
        Err(e) => {
            r.status = "error";
            r.detail = Some(e.to_string());
        }
    }
}

pub fn solve_report(inst: &Instance, spec: &GameSpec, methods: &[Method], timing: bool) -> RunReport {
    let mut requested: Vec<Method> = Vec::new();
    for &m in methods {
        if !requested.contains(&m) {
            requested.push(m);
        }
    }
    let mut results = Vec::new();
    for m in requested {
        let mut r = MethodResult::new(m);
        let ((), millis) = timed(timing, || match m {
            Method::Brute => match nim_game(spec) {
                Ok(v) => r.nim = Some(v),
                Err(e) => {
                    r.status = "error";
                    r.detail = Some(e.to_string());
                }
            },
            Method::Quotient => r.nim = Some(nim_quotient(spec)),
            Method::Formula => run_formula(spec, &mut r),
        });
        r.millis = millis;
        results.push(r);
    }

    let valued: Vec<(&'static str, Nim)> = results
        .iter()
        .filter(|r| r.status == "ok")
        .filter_map(|r| r.nim.map(|v| (r.method, v)))
        .collect();
    let mut agreement = Vec::new();
    for (i, &(a, va)) in valued.iter().enumerate() {
        for &(b, vb) in &valued[i + 1..] {
            agreement.push(Agreement { a, b, agree: va == vb });
        }
    }

    let oracle = valued.iter().find(|(m, _)| *m != "formula").map(|&(_, v)| v);
    let mut errata = Vec::new();
    if let (Some(oracle), Some(f)) = (oracle, results.iter().find(|r| r.method == "formula" && r.status == "ok")) {
        let predicted = f.nim.expect("ok formula has a value");
        if predicted != oracle {
            let case_id = f.case_id.clone().unwrap_or_default();
            let class = Discrepancy::classify(&case_id, Some(predicted), oracle);
            errata.push(Erratum {
                case_id,
                predicted,
                oracle,
                class: class.name(),
                note: class.describe(),
            });
        }
    }

    RunReport {
        instance: serde_json::value::RawValue::from_string(inst.to_json()).expect("canonical JSON is valid"),
        outcome: oracle.map(|v| match Outcome::from_nim(v) {
            Outcome::N => "N (first player wins)",
            Outcome::P => "P (second player wins)",
        }),
        methods: results,
        agreement,
        errata,
        dot: None,
    }
}

#[derive(Debug, Serialize)]
pub struct SumReport {
    pub games: Vec<(String, Nim)>,
    pub nim: Nim,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct: Option<Nim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check_passed: Option<bool>,
}

impl SumReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, v) in &self.games {
            let _ = writeln!(out, "{name}: {v}");
        }
        let _ = writeln!(out, "sum: {}", self.nim);
        if let (Some(d), Some(ok)) = (self.direct, self.check_passed) {
            let _ = writeln!(out, "direct expansion: {d} ({})", if ok { "check passed" } else { "CHECK FAILED" });
        }
        out
    }
}

pub fn sum_report(
    files: &[PathBuf],
    games: &[(Instance, GameSpec)],
    check: bool,
    budget: u128,
) -> Result<SumReport, GameError> {
    let mut values = Vec::new();
    for (f, (_, spec)) in files.iter().zip(games) {
        values.push((f.display().to_string(), nim_game(spec)?));
    }
    let nim = sum_nim(values.iter().map(|&(_, v)| v));
    let direct = if check {
        let specs: Vec<GameSpec> = games.iter().map(|(_, s)| s.clone()).collect();
        Some(sum_brute(&specs, budget)?)
    } else {
        None
    };
    Ok(SumReport {
        games: values,
        nim,
        direct,
        check_passed: direct.map(|d| d == nim),
    })
}
