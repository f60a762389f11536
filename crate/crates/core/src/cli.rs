//! Problem files and JSON reports for the command-line front end.
//!
//! A problem file is a sequence of lines:
//!
//! ```text
//! # comment
//! vars: x y
//! field v = -y*dx + x*dy
//! map phi = (x^2 + y^2, y/x)
//! function f = x*y
//! curve C = x^2 + y^2 - 1
//! foliation F = {v}
//! ```
//!
//! Basis fields are written `d<name>` or positionally `dx1 … dxn`.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::foliation::{
    invariant_hypersurface, is_invariant_subsheaf, is_involutive, singular_locus,
    tangent_foliation, FoliationGens,
};
use crate::hyperbolic::{
    classify_invariant_lines, classify_invariant_planes, control_coverage, leaf_density,
    verify_anosov_bounds_with, AnosovConfig, SuspensionState,
};
use crate::liecalc::{flow_series_field, flow_series_function, lie_bracket, VectorField};
use crate::par::Exec;
use crate::planar::{infinity_analysis, invariant_curve_constraint, swap_variables, PlanarField};
use crate::poly::parse::{eval_ratfunc, parse_expr, parse_tuple, Expr, ParseError};
use crate::poly::{Chart, Poly, RatFunc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Op {
    Bracket,
    Invariance,
    Foliation,
    Planar,
    FlowSeries,
    Anosov,
}

impl Op {
    pub fn as_str(self) -> &'static str {
        match self {
            Op::Bracket => "bracket",
            Op::Invariance => "invariance",
            Op::Foliation => "foliation",
            Op::Planar => "planar",
            Op::FlowSeries => "flow-series",
            Op::Anosov => "anosov",
        }
    }

    /// Whether the operation reads a problem file.
    pub fn needs_problem(self) -> bool {
        self != Op::Anosov
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Object {
    Field(VectorField),
    Map(Vec<RatFunc>),
    Function(RatFunc),
    Curve(Poly),
    Foliation(Vec<String>),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Field(_) => "field",
            Object::Map(_) => "map",
            Object::Function(_) => "function",
            Object::Curve(_) => "curve",
            Object::Foliation(_) => "foliation",
        }
    }

    /// Payload in the input syntax.
    pub fn canonical(&self) -> String {
        match self {
            Object::Field(v) => v.to_string(),
            Object::Map(c) => {
                let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
                format!("({})", parts.join(", "))
            }
            Object::Function(f) => f.to_string(),
            Object::Curve(c) => c.to_string(),
            Object::Foliation(names) => format!("{{{}}}", names.join(", ")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProblemFile {
    chart: Option<Chart>,
    objects: Vec<(String, Object)>,
}

const KINDS: [&str; 5] = ["field", "map", "function", "curve", "foliation"];

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut problem = ProblemFile::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            problem
                .parse_line(content)
                .map_err(|e| e.at_line(line_no))?;
        }
        Ok(problem)
    }

    fn parse_line(&mut self, line: &str) -> Result<(), ParseError> {
        let indent = line.len() - line.trim_start().len();
        let body = line.trim();
        let col = |byte: usize| line[..byte].chars().count() + 1;

        if let Some(rest) = body.strip_prefix("vars:") {
            if self.chart.is_some() {
                return Err(ParseError::new(col(indent), "variables already declared"));
            }
            let names: Vec<&str> = rest
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect();
            let chart = Chart::new(names.iter().copied())
                .map_err(|e| ParseError::new(col(indent), e.to_string()))?;
            self.chart = Some(chart);
            return Ok(());
        }

        let kind_end = body.find(char::is_whitespace).unwrap_or(body.len());
        let kind = &body[..kind_end];
        if !KINDS.contains(&kind) {
            return Err(ParseError::new(
                col(indent),
                format!(
                    "expected `vars:` or one of {}, found `{kind}`",
                    KINDS.join(", ")
                ),
            ));
        }
        let Some(chart) = self.chart.clone() else {
            return Err(ParseError::new(col(indent), "variables undeclared"));
        };
        let Some(eq) = body.find('=') else {
            return Err(ParseError::new(col(indent + body.len()), "expected `=`"));
        };
        let name = body[kind_end..eq].trim();
        let name_col =
            col(indent + kind_end + (body[kind_end..].len() - body[kind_end..].trim_start().len()));
        let valid = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(ParseError::new(name_col, format!("invalid name `{name}`")));
        }
        if self.get(name).is_some() {
            return Err(ParseError::new(
                name_col,
                format!("duplicate name `{name}`"),
            ));
        }
        let payload = &body[eq + 1..];
        let shift = col(indent + eq + 1) - 1;
        let object = match kind {
            "field" => Object::Field(parse_field(&chart, payload).map_err(|e| e.shifted(shift))?),
            "map" => {
                let exprs = parse_tuple(payload).map_err(|e| e.shifted(shift))?;
                let comps = exprs
                    .iter()
                    .map(|e| eval_ratfunc(e, &chart))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| e.shifted(shift))?;
                Object::Map(comps)
            }
            "function" => {
                let e = parse_expr(payload).map_err(|e| e.shifted(shift))?;
                Object::Function(eval_ratfunc(&e, &chart).map_err(|e| e.shifted(shift))?)
            }
            "curve" => {
                let e = parse_expr(payload).map_err(|e| e.shifted(shift))?;
                let f = eval_ratfunc(&e, &chart).map_err(|e| e.shifted(shift))?;
                match f.as_poly() {
                    Some(p) => Object::Curve(p.clone()),
                    None => {
                        return Err(ParseError::new(shift + 1, "a curve must be a polynomial"));
                    }
                }
            }
            _ => Object::Foliation(self.parse_members(payload, shift)?),
        };
        self.objects.push((name.to_string(), object));
        Ok(())
    }

    fn parse_members(&self, payload: &str, shift: usize) -> Result<Vec<String>, ParseError> {
        let lead = payload.len() - payload.trim_start().len();
        let trimmed = payload.trim();
        let open = shift + payload[..lead].chars().count() + 1;
        let inner = trimmed
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| ParseError::new(open, "expected `{field, ...}`"))?;
        let mut names = Vec::new();
        let mut offset = open;
        for part in inner.split(',') {
            let name = part.trim();
            let at = offset + 1 + (part.len() - part.trim_start().len());
            offset += part.chars().count() + 1;
            if name.is_empty() {
                return Err(ParseError::new(at, "expected a field name"));
            }
            match self.get(name) {
                Some(Object::Field(_)) => names.push(name.to_string()),
                Some(other) => {
                    return Err(ParseError::new(
                        at,
                        format!("`{name}` is a {}, not a field", other.kind()),
                    ))
                }
                None => return Err(ParseError::new(at, format!("undeclared field `{name}`"))),
            }
        }
        Ok(names)
    }

    pub fn chart(&self) -> Option<&Chart> {
        self.chart.as_ref()
    }

    pub fn objects(&self) -> &[(String, Object)] {
        &self.objects
    }

    pub fn get(&self, name: &str) -> Option<&Object> {
        self.objects.iter().find(|(n, _)| n == name).map(|(_, o)| o)
    }

    pub fn fields(&self) -> impl Iterator<Item = (&str, &VectorField)> {
        self.objects.iter().filter_map(|(n, o)| match o {
            Object::Field(v) => Some((n.as_str(), v)),
            _ => None,
        })
    }

    pub fn field(&self, name: &str) -> Option<&VectorField> {
        match self.get(name) {
            Some(Object::Field(v)) => Some(v),
            _ => None,
        }
    }

    /// Generators of a declared foliation.
    pub fn foliation(&self, name: &str) -> Result<FoliationGens> {
        let chart = self.require_chart()?;
        match self.get(name) {
            Some(Object::Foliation(members)) => {
                let gens = members
                    .iter()
                    .map(|m| self.field(m).cloned().expect("members are declared fields"))
                    .collect();
                FoliationGens::new(chart, gens)
            }
            _ => Err(Error::InvalidArgument(format!(
                "no foliation named `{name}`"
            ))),
        }
    }

    fn require_chart(&self) -> Result<&Chart> {
        self.chart
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("variables undeclared".into()))
    }

    /// The file in canonical form; parsing it again yields the same problem.
    pub fn to_canonical(&self) -> String {
        let mut out = String::new();
        if let Some(c) = &self.chart {
            out.push_str(&format!("vars: {}\n", c.vars().join(" ")));
        }
        for (name, o) in &self.objects {
            out.push_str(&format!("{} {} = {}\n", o.kind(), name, o.canonical()));
        }
        out
    }

    fn inputs(&self) -> Value {
        let mut m = Map::new();
        if let Some(c) = &self.chart {
            m.insert("vars".into(), json!(c.vars()));
        }
        for (name, o) in &self.objects {
            m.insert(
                name.clone(),
                json!({ "kind": o.kind(), "value": o.canonical() }),
            );
        }
        Value::Object(m)
    }
}

/// Intermediate value while evaluating a field expression.
enum Term {
    Scalar(RatFunc),
    Vector(Vec<RatFunc>),
}

fn basis_index(chart: &Chart, name: &str) -> Option<usize> {
    let rest = name.strip_prefix('d')?;
    if let Some(i) = chart.index_of(rest) {
        return Some(i);
    }
    let k: usize = rest.strip_prefix('x')?.parse().ok()?;
    (1..=chart.len()).contains(&k).then(|| k - 1)
}

fn eval_field(e: &Expr, chart: &Chart) -> Result<Term, ParseError> {
    let n = chart.len();
    let combine = |a: Term, b: Term, sub: bool, col: usize| -> Result<Term, ParseError> {
        Ok(match (a, b) {
            (Term::Scalar(x), Term::Scalar(y)) => Term::Scalar(if sub { &x - &y } else { &x + &y }),
            (Term::Vector(x), Term::Vector(y)) => Term::Vector(
                x.iter()
                    .zip(&y)
                    .map(|(p, q)| if sub { p - q } else { p + q })
                    .collect(),
            ),
            (Term::Scalar(s), Term::Vector(y)) if s.is_zero() => Term::Vector(if sub {
                y.iter().map(|q| -q).collect()
            } else {
                y
            }),
            (Term::Vector(x), Term::Scalar(s)) if s.is_zero() => Term::Vector(x),
            _ => {
                return Err(ParseError::new(
                    col,
                    "cannot add a function to a vector field",
                ))
            }
        })
    };
    Ok(match e {
        Expr::Ident { name, column } if chart.index_of(name).is_none() => {
            match basis_index(chart, name) {
                Some(i) => {
                    let mut v = vec![RatFunc::zero(chart); n];
                    v[i] = RatFunc::one(chart);
                    Term::Vector(v)
                }
                None if name.starts_with('d') => {
                    return Err(ParseError::new(
                        *column,
                        format!("undeclared basis `{name}`"),
                    ))
                }
                None => {
                    return Err(ParseError::new(
                        *column,
                        format!("undeclared variable `{name}`"),
                    ))
                }
            }
        }
        Expr::Int(_) | Expr::Ident { .. } => Term::Scalar(eval_ratfunc(e, chart)?),
        Expr::Neg(a) => match eval_field(a, chart)? {
            Term::Scalar(s) => Term::Scalar(-s),
            Term::Vector(v) => Term::Vector(v.iter().map(|c| -c).collect()),
        },
        Expr::Add(a, b) => combine(
            eval_field(a, chart)?,
            eval_field(b, chart)?,
            false,
            first_column(b),
        )?,
        Expr::Sub(a, b) => combine(
            eval_field(a, chart)?,
            eval_field(b, chart)?,
            true,
            first_column(b),
        )?,
        Expr::Mul(a, b) => match (eval_field(a, chart)?, eval_field(b, chart)?) {
            (Term::Scalar(x), Term::Scalar(y)) => Term::Scalar(&x * &y),
            (Term::Scalar(s), Term::Vector(v)) | (Term::Vector(v), Term::Scalar(s)) => {
                Term::Vector(v.iter().map(|c| &s * c).collect())
            }
            (Term::Vector(_), Term::Vector(_)) => {
                return Err(ParseError::new(
                    first_column(b),
                    "cannot multiply two vector fields",
                ))
            }
        },
        Expr::Div { num, den, column } => {
            let d = match eval_field(den, chart)? {
                Term::Scalar(d) => d,
                Term::Vector(_) => {
                    return Err(ParseError::new(*column, "cannot divide by a vector field"))
                }
            };
            if d.is_zero() {
                return Err(ParseError::new(*column, "division by zero"));
            }
            match eval_field(num, chart)? {
                Term::Scalar(s) => Term::Scalar(&s / &d),
                Term::Vector(v) => Term::Vector(v.iter().map(|c| c / &d).collect()),
            }
        }
        Expr::Pow(a, k) => match eval_field(a, chart)? {
            Term::Scalar(s) => Term::Scalar(s.pow(*k)),
            Term::Vector(v) if *k == 1 => Term::Vector(v),
            Term::Vector(_) => {
                return Err(ParseError::new(
                    first_column(a),
                    "cannot raise a vector field to a power",
                ))
            }
        },
    })
}

fn first_column(e: &Expr) -> usize {
    match e {
        Expr::Ident { column, .. } => *column,
        Expr::Div { num, .. } => first_column(num),
        Expr::Neg(a) | Expr::Pow(a, _) | Expr::Add(a, _) | Expr::Sub(a, _) | Expr::Mul(a, _) => {
            first_column(a)
        }
        Expr::Int(_) => 1,
    }
}

/// Parses `Σ cᵢ·dxᵢ` into a vector field.
pub fn parse_field(chart: &Chart, src: &str) -> Result<VectorField, ParseError> {
    let e = parse_expr(src)?;
    match eval_field(&e, chart)? {
        Term::Vector(v) => Ok(VectorField::new(chart, v).expect("one coefficient per variable")),
        Term::Scalar(s) if s.is_zero() => Ok(VectorField::zero(chart)),
        Term::Scalar(_) => Err(ParseError::new(
            1,
            "expected a vector field, found a function",
        )),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub seed: u64,
    pub order: usize,
    pub epsilon: f64,
    pub arc_length: f64,
    pub samples: usize,
    pub t_max: f64,
    /// Name of the acting field; defaults to the first declared field.
    pub field: Option<String>,
    /// Analyse the planar field with the coordinates exchanged.
    pub swap: bool,
    pub exec: Exec,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            seed: 0,
            order: 8,
            epsilon: 0.05,
            arc_length: 2000.0,
            samples: 50,
            t_max: 100.0,
            field: None,
            swap: false,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub op: String,
    pub inputs: Value,
    pub result: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Parses `text` (ignored by operations that need no problem) and runs `op`.
pub fn run_text(op: Op, text: &str, opts: &Options) -> Report {
    if !op.needs_problem() {
        return run(op, &ProblemFile::default(), opts);
    }
    match ProblemFile::parse(text) {
        Ok(p) => run(op, &p, opts),
        Err(e) => Report {
            op: op.to_string(),
            inputs: Value::Null,
            result: Value::Null,
            status: Status::Error,
            message: Some(format!("{op}: parse error at {e}")),
        },
    }
}

pub fn run(op: Op, problem: &ProblemFile, opts: &Options) -> Report {
    let inputs = if op.needs_problem() {
        problem.inputs()
    } else {
        json!({
            "seed": opts.seed,
            "samples": opts.samples,
            "t_max": opts.t_max,
            "epsilon": opts.epsilon,
            "arc_length": opts.arc_length,
        })
    };
    let outcome = match op {
        Op::Bracket => run_bracket(problem),
        Op::Invariance => run_invariance(problem, opts),
        Op::Foliation => run_foliation(problem),
        Op::Planar => run_planar(problem, opts),
        Op::FlowSeries => run_flow_series(problem, opts),
        Op::Anosov => run_anosov(opts),
    };
    match outcome {
        Ok(result) => Report {
            op: op.to_string(),
            inputs,
            result,
            status: Status::Ok,
            message: None,
        },
        Err(e) => Report {
            op: op.to_string(),
            inputs,
            result: Value::Null,
            status: Status::Error,
            message: Some(format!("{op}: {e}")),
        },
    }
}

fn acting_field<'a>(
    problem: &'a ProblemFile,
    opts: &Options,
) -> Result<(&'a str, &'a VectorField)> {
    match &opts.field {
        Some(name) => problem
            .fields()
            .find(|(n, _)| n == name)
            .ok_or_else(|| Error::InvalidArgument(format!("no field named `{name}`"))),
        None => problem
            .fields()
            .next()
            .ok_or_else(|| Error::InvalidArgument("the problem declares no field".into())),
    }
}

fn field_json(v: &VectorField) -> Value {
    json!({ "field": v.to_string(), "coefficients": v.coefficient_strings() })
}

fn run_bracket(problem: &ProblemFile) -> Result<Value> {
    let fields: Vec<_> = problem.fields().take(2).collect();
    let [(vn, v), (wn, w)] = fields[..] else {
        return Err(Error::InvalidArgument(
            "bracket needs two declared fields".into(),
        ));
    };
    let b = lie_bracket(v, w)?;
    let mut out = field_json(&b);
    out["v"] = json!(vn);
    out["w"] = json!(wn);
    Ok(out)
}

fn run_invariance(problem: &ProblemFile, opts: &Options) -> Result<Value> {
    let (vn, v) = acting_field(problem, opts)?;
    let mut checks = Vec::new();
    for (name, o) in problem.objects() {
        match o {
            Object::Foliation(_) => {
                let f = problem.foliation(name)?;
                let r = is_invariant_subsheaf(&f, v)?;
                checks.push(json!({
                    "name": name,
                    "kind": "foliation",
                    "invariant": r.invariant,
                    "witness": r.witness.map(|w| w.to_string()),
                }));
            }
            Object::Map(phi) => {
                let f = tangent_foliation(phi, v.chart())?;
                let r = is_invariant_subsheaf(&f, v)?;
                checks.push(json!({
                    "name": name,
                    "kind": "tangent foliation",
                    "invariant": r.invariant,
                    "witness": r.witness.map(|w| w.to_string()),
                }));
            }
            Object::Curve(c) => {
                checks.push(json!({
                    "name": name,
                    "kind": "hypersurface",
                    "invariant": invariant_hypersurface(c, v)?,
                }));
            }
            Object::Function(f) => {
                if let Some(p) = f.as_poly() {
                    checks.push(json!({
                        "name": name,
                        "kind": "hypersurface",
                        "invariant": invariant_hypersurface(p, v)?,
                    }));
                }
            }
            Object::Field(_) => {}
        }
    }
    if checks.is_empty() {
        return Err(Error::InvalidArgument(
            "nothing to check: declare a foliation, map, curve or polynomial function".into(),
        ));
    }
    Ok(json!({ "field": vn, "checks": checks }))
}

fn foliation_json(name: &str, source: &str, f: &FoliationGens) -> Result<Value> {
    let inv = is_involutive(f)?;
    let sing = singular_locus(f)?;
    let gens: Vec<String> = f.generators().iter().map(ToString::to_string).collect();
    Ok(json!({
        "name": name,
        "source": source,
        "generators": gens,
        "rank": f.rank(),
        "involutive": inv.involutive,
        "witness": inv.witness.map(|(i, j, b)| json!({ "i": i, "j": j, "bracket": b.to_string() })),
        "singular_locus": {
            "generators": sing.generator_strings(),
            "removed_divisor": sing.removed_divisor.to_string(),
        },
    }))
}

fn run_foliation(problem: &ProblemFile) -> Result<Value> {
    let chart = problem.require_chart()?;
    let mut out = Vec::new();
    for (name, o) in problem.objects() {
        match o {
            Object::Foliation(_) => out.push(foliation_json(
                name,
                "generators",
                &problem.foliation(name)?,
            )?),
            Object::Map(phi) => out.push(foliation_json(
                name,
                "tangent",
                &tangent_foliation(phi, chart)?,
            )?),
            _ => {}
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument(
            "the problem declares no foliation or map".into(),
        ));
    }
    Ok(json!({ "foliations": out }))
}

fn run_planar(problem: &ProblemFile, opts: &Options) -> Result<Value> {
    let (vn, v) = acting_field(problem, opts)?;
    let mut field = PlanarField::from_field(v)?;
    if opts.swap {
        field = field.swapped();
    }
    let r = infinity_analysis(&field)?;
    let mut curves = Vec::new();
    for (name, o) in problem.objects() {
        if let Object::Curve(c) = o {
            let c = if opts.swap {
                swap_variables(c)
            } else {
                c.clone()
            };
            let verdict = invariant_curve_constraint(&c, &field)?;
            curves.push(json!({ "name": name, "verdict": verdict.as_str() }));
        }
    }
    let points: Vec<String> = r.rational_points.iter().map(ToString::to_string).collect();
    Ok(json!({
        "field": vn,
        "swapped": opts.swap,
        "degree": field.degree(),
        "w_s": r.w_s.to_string(),
        "w_t": r.w_t.to_string(),
        "P": r.p.to_string(),
        "Q": r.q.to_string(),
        "line_invariant": r.line_invariant,
        "s_divides_ws": r.s_divides_ws,
        "sing_infinity": r.sing_infinity.map(|s| s.to_string()),
        "rational_points": points,
        "curves": curves,
    }))
}

fn run_flow_series(problem: &ProblemFile, opts: &Options) -> Result<Value> {
    let (vn, v) = acting_field(problem, opts)?;
    let mut functions = Vec::new();
    let mut fields = Vec::new();
    for (name, o) in problem.objects() {
        match o {
            Object::Function(f) => functions.push((name, f.clone())),
            Object::Curve(c) => functions.push((name, RatFunc::from_poly(c.clone()))),
            Object::Field(w) if name != vn => fields.push((name, w)),
            _ => {}
        }
    }
    if functions.is_empty() {
        let chart = v.chart();
        for (i, x) in chart.vars().iter().enumerate() {
            functions.push((x, RatFunc::var(chart, i)));
        }
    }
    let funcs = functions
        .into_iter()
        .map(|(name, f)| {
            let s = flow_series_function(v, &f, opts.order)?;
            let c: Vec<String> = s.coefficients().iter().map(ToString::to_string).collect();
            Ok(json!({ "name": name, "coefficients": c }))
        })
        .collect::<Result<Vec<_>>>()?;
    let flds = fields
        .into_iter()
        .map(|(name, w)| {
            let s = flow_series_field(v, w, opts.order)?;
            let c: Vec<String> = s.coefficients().iter().map(ToString::to_string).collect();
            Ok(json!({ "name": name, "coefficients": c }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({ "field": vn, "order": opts.order, "functions": funcs, "fields": flds }))
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn vec12(v: &[f64]) -> Vec<f64> {
    v.iter().copied().map(round12).collect()
}

fn run_anosov(opts: &Options) -> Result<Value> {
    let cfg = AnosovConfig::new(opts.samples, opts.t_max, opts.seed);
    let r = verify_anosov_bounds_with(&cfg, opts.exec)?;
    let o = SuspensionState::fixed_point();
    let lines: Vec<Value> = classify_invariant_lines(&o, 1.0)?
        .iter()
        .map(|l| json!({ "label": l.label, "eigenvalue": round12(l.eigenvalue), "direction": vec12(&l.direction) }))
        .collect();
    let planes: Vec<Value> = classify_invariant_planes(&o, 1.0)?
        .iter()
        .map(|p| json!({ "label": p.label, "normal": vec12(&p.normal) }))
        .collect();
    Ok(json!({
        "bounds": {
            "lambda_est": round12(r.lambda_est),
            "lambda_u_est": round12(r.lambda_u_est),
            "flow_exponent": round12(r.flow_exponent),
            "C_est": round12(r.c_est),
            "pass": r.pass,
        },
        "lines": lines,
        "planes": planes,
        "leaf_density": {
            "coverage": round12(leaf_density(opts.epsilon, opts.arc_length)?),
            "control_coverage": round12(control_coverage(opts.epsilon, opts.arc_length)?),
        },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let p = ProblemFile::parse("vars: x y\nfield v = x*dx + y*dy").unwrap();
        assert_eq!(p.field("v").unwrap().coefficient_strings(), ["x", "y"]);

        let e = ProblemFile::parse("vars: x\nfield v = dx + dz").unwrap_err();
        assert_eq!((e.line, e.column), (2, 16));
        assert!(e.message.contains("undeclared basis `dz`"), "{e}");

        let e = ProblemFile::parse("field v = dx").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.message.contains("variables undeclared"));
    }

    #[test]
    fn parse_errors() {
        let dup = ProblemFile::parse("vars: x\nfield v = dx\nfield v = x*dx").unwrap_err();
        assert!(dup.message.contains("duplicate name"));
        let undeclared = ProblemFile::parse("vars: x\nfoliation F = {v}").unwrap_err();
        assert!(undeclared.message.contains("undeclared field `v`"));
        let var = ProblemFile::parse("vars: x\nfunction f = x + q").unwrap_err();
        assert_eq!(var.column, 18);
        let bad = ProblemFile::parse("vars: x\nfield v = dx*dx").unwrap_err();
        assert!(bad.message.contains("two vector fields"));
        let scalar = ProblemFile::parse("vars: x\nfield v = x").unwrap_err();
        assert!(scalar.message.contains("expected a vector field"));
    }

    #[test]
    fn positional_basis() {
        let p = ProblemFile::parse("vars: a b\nfield v = a*dx2 - dx1/b").unwrap();
        assert_eq!(p.field("v").unwrap().to_string(), "((-1)/(b))*da + a*db");
    }

    #[test]
    fn round_trip() {
        let text = "# demo\nvars: x y\nfield v = -y*dx + x*dy\nfield w = 1/x*dy\nmap phi = (x^2 + y^2, y/x)\nfunction f = x*y\ncurve C = x^2 + y^2 - 1\nfoliation F = {v, w}\n";
        let p = ProblemFile::parse(text).unwrap();
        let canon = p.to_canonical();
        let q = ProblemFile::parse(&canon).unwrap();
        assert_eq!(p, q);
        assert_eq!(q.to_canonical(), canon);
    }

    #[test]
    fn bracket_report() {
        let r = run_text(
            Op::Bracket,
            "vars: x y\nfield v = x*dx\nfield w = dx",
            &Options::default(),
        );
        assert!(r.is_ok());
        assert_eq!(r.result["coefficients"], json!(["-1", "0"]));
        assert_eq!(r.result["field"], json!("-dx"));
    }

    #[test]
    fn planar_report() {
        let r = run_text(
            Op::Planar,
            "vars: x y\nfield v = -y*dx + x*dy",
            &Options::default(),
        );
        assert!(r.is_ok(), "{r:?}");
        assert_eq!(r.result["line_invariant"], json!(true));
        assert_eq!(r.result["Q"], json!("x^2 + y^2"));
    }

    #[test]
    fn errors_carry_context() {
        let r = run_text(Op::Bracket, "vars: x\nfield v = dx", &Options::default());
        assert_eq!(r.status, Status::Error);
        assert!(r.message.unwrap().starts_with("bracket: "));
        let r = run_text(Op::Bracket, "vars: x\nfield v = dq", &Options::default());
        assert!(r.message.unwrap().contains("2:11"));
    }

    #[test]
    fn rounding() {
        assert_eq!(round12(0.38196601125010515), 0.38196601125);
        assert_eq!(round12(2.0), 2.0);
    }
}
