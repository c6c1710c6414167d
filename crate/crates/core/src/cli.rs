//! Command-line front end: problem files in, tables or JSON out.
//!
//! Problem file schema:
//!
//! ```json
//! {"field": {"kind": "rational"} | {"kind": "prime", "p": 2},
//!  "variables": ["x", "y", "z"],
//!  "kind": "linear" | "monomial",
//!  "components": [[[1, 0, 0], [0, 1, 0]], ...] | [{"x": 1, "y": 2}, ...]}
//! ```
//!
//! Linear coefficients are integers or `"a/b"` strings. Exit codes: 0 on
//! success, 1 when a computation is refused, 2 on bad input or usage.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::decomp::{
    decomposition, dmodule_report, full_report, interval_betti_table, laurent_expansion, regularity_from_report,
    series_from_report, FullReport, Functor, HilbertSeries,
};
use crate::error::{Error, Result};
use crate::exactlin::{parse_rational, FieldSpec, Matrix};
use crate::ideals::{AmbientRing, Ideal, LinearIdeal, PurePowerIdeal};
use crate::oracle::{compare, OracleVerdict};
use crate::poset::{Poset, PosetJson};
use crate::roos::{limit_check, quotient_system_at, roos_cochain, LimitReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Linear,
    Monomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentSpec {
    /// Rows of coefficients of linear forms.
    Linear(Vec<Vec<BigRational>>),
    /// Variable name to exponent.
    Monomial(BTreeMap<String, u32>),
}

/// A validated problem file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpec {
    pub field: FieldSpec,
    pub variables: Vec<String>,
    pub kind: ComponentKind,
    pub components: Vec<ComponentSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    #[serde(default)]
    field: FieldSpec,
    variables: Vec<String>,
    kind: ComponentKind,
    components: Vec<Value>,
}

fn bad(path: String, msg: impl std::fmt::Display) -> Error {
    Error::Malformed(format!("{path}: {msg}"))
}

fn parse_coefficient(v: &Value, path: String) -> Result<BigRational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| bad(path, "coefficients must be integers or \"a/b\" strings")),
        Value::String(s) => parse_rational(s).ok_or_else(|| bad(path, format!("cannot read {s:?} as a rational"))),
        _ => Err(bad(path, "coefficients must be integers or \"a/b\" strings")),
    }
}

fn parse_component(v: &Value, kind: ComponentKind, variables: &[String], path: &str) -> Result<ComponentSpec> {
    match kind {
        ComponentKind::Linear => {
            let rows = v.as_array().ok_or_else(|| bad(path.into(), "expected a list of coefficient vectors"))?;
            if rows.is_empty() {
                return Err(bad(path.into(), "a linear component needs at least one generator"));
            }
            let mut out = Vec::new();
            for (r, row) in rows.iter().enumerate() {
                let rp = format!("{path}[{r}]");
                let coeffs = row.as_array().ok_or_else(|| bad(rp.clone(), "expected a coefficient vector"))?;
                if coeffs.len() != variables.len() {
                    return Err(bad(rp, format!("expected {} coefficients, found {}", variables.len(), coeffs.len())));
                }
                out.push(
                    coeffs
                        .iter()
                        .enumerate()
                        .map(|(c, x)| parse_coefficient(x, format!("{rp}[{c}]")))
                        .collect::<Result<_>>()?,
                );
            }
            Ok(ComponentSpec::Linear(out))
        }
        ComponentKind::Monomial => {
            let map = v.as_object().ok_or_else(|| bad(path.into(), "expected an object of exponents"))?;
            if map.is_empty() {
                return Err(bad(path.into(), "a monomial component needs at least one variable"));
            }
            let mut out = BTreeMap::new();
            for (name, e) in map {
                let ep = format!("{path}.{name}");
                if !variables.contains(name) {
                    return Err(bad(ep, "unknown variable"));
                }
                let e = e
                    .as_u64()
                    .filter(|&e| e >= 1 && e <= u32::MAX as u64)
                    .ok_or_else(|| bad(ep, "exponents must be positive integers"))?;
                out.insert(name.clone(), e as u32);
            }
            Ok(ComponentSpec::Monomial(out))
        }
    }
}

impl ProblemSpec {
    /// Parses and validates a problem file, rejecting duplicate components.
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawProblem = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        if raw.variables.is_empty() {
            return Err(bad("variables".into(), "at least one variable is required"));
        }
        if raw.components.is_empty() {
            return Err(bad("components".into(), "at least one component is required"));
        }
        let components = raw
            .components
            .iter()
            .enumerate()
            .map(|(k, c)| parse_component(c, raw.kind, &raw.variables, &format!("components[{k}]")))
            .collect::<Result<_>>()?;
        let spec = ProblemSpec { field: raw.field, variables: raw.variables, kind: raw.kind, components };
        let ideals = spec.ideals()?;
        let mut dups: Vec<String> = Vec::new();
        for (k, a) in ideals.iter().enumerate() {
            if ideals[..k].contains(a) && !dups.contains(&a.to_string()) {
                dups.push(a.to_string());
            }
        }
        if !dups.is_empty() {
            return Err(Error::DuplicateComponents(dups));
        }
        Ok(spec)
    }

    pub fn with_field(mut self, field: FieldSpec) -> Self {
        self.field = field;
        self
    }

    pub fn ideals(&self) -> Result<Vec<Ideal>> {
        let ring = AmbientRing::new(self.variables.clone(), self.field)?;
        let d = ring.nvars();
        self.components
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let at = |e: Error| bad(format!("components[{k}]"), e);
                match c {
                    ComponentSpec::Linear(rows) => {
                        let scalars = rows
                            .iter()
                            .flatten()
                            .map(|q| self.field.from_rational(q))
                            .collect::<Result<Vec<_>>>()
                            .map_err(at)?;
                        let m = Matrix::from_scalars(self.field, rows.len(), d, scalars).map_err(at)?;
                        Ok(Ideal::Linear(LinearIdeal::new(ring.clone(), &m).map_err(at)?))
                    }
                    ComponentSpec::Monomial(exps) => {
                        let exps = exps.iter().map(|(v, &e)| (ring.var_index(v).expect("validated"), e)).collect();
                        Ok(Ideal::PurePower(PurePowerIdeal::new(ring.clone(), exps).map_err(at)?))
                    }
                }
            })
            .collect()
    }

    pub fn poset(&self) -> Result<Poset> {
        Poset::build(self.ideals()?)
    }
}

/// Reads `rational`, `QQ`, `GF(p)`, `prime:p` or a bare prime `p`.
pub fn parse_field(s: &str) -> std::result::Result<FieldSpec, String> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("rational") || t == "QQ" || t == "Q" {
        return Ok(FieldSpec::Rational);
    }
    let digits = t
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| t.strip_prefix("prime:"))
        .unwrap_or(t);
    let p: u64 = digits.parse().map_err(|_| format!("unknown field {s:?}"))?;
    FieldSpec::prime(p).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "lcdecomp", version, about = "Poset decompositions of local cohomology of arrangements")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub output: OutputFormat,

    /// Override the field of the problem file (rational, GF(p), prime:p).
    #[arg(long, global = true, value_parser = parse_field)]
    pub field: Option<FieldSpec>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Input {
    /// Problem file.
    pub file: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The poset of sums of the components.
    Poset(Input),
    /// Decomposition multiplicities, series and regularity.
    Decompose {
        #[arg(long, value_enum, default_value_t = FunctorArg::Hochster)]
        functor: FunctorArg,
        /// Also report the D-module length and characteristic cycle of `H^r_I`.
        #[arg(long, value_name = "R")]
        length: Option<i64>,
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
        #[command(flatten)]
        input: Input,
    },
    /// Hilbert series of `H^i_m(A/I)` and its Laurent expansion.
    Hilbert {
        /// Cohomological index; all indices `0..=d` when omitted.
        #[arg(long)]
        index: Option<i64>,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Castelnuovo–Mumford regularity.
    Regularity {
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
        #[command(flatten)]
        input: Input,
    },
    /// Compare `A/I` with the limit of the quotients degree by degree.
    LimitCheck {
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
        #[command(flatten)]
        input: Input,
    },
    /// Spot and cohomology dimensions of the Roos complex per degree.
    Roos {
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
        #[command(flatten)]
        input: Input,
    },
    /// Cross-check against Hochster's formula on the Stanley–Reisner complex.
    OracleCompare {
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FunctorArg {
    Hochster,
    Terai,
}

impl From<FunctorArg> for Functor {
    fn from(f: FunctorArg) -> Self {
        match f {
            FunctorArg::Hochster => Functor::Hochster,
            FunctorArg::Terai => Functor::Terai,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertRow {
    pub i: i64,
    pub series: HilbertSeries,
    /// `(degree, coefficient)` for degrees `0, -1, ..., -depth`.
    pub laurent: Vec<(i64, u128)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertOutput {
    pub field: FieldSpec,
    pub depth: usize,
    pub rows: Vec<HilbertRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityOutput {
    pub regularity: i64,
    /// `"quotient"` when `A/I ≅ lim A/I_p` up to the tested degree, else `"limit"`.
    pub of: String,
    pub max_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoosRow {
    pub j: u32,
    pub spots: Vec<usize>,
    pub cohomology: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoosOutput {
    pub field: FieldSpec,
    pub rows: Vec<RoosRow>,
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

fn load(input: &Input, field: Option<FieldSpec>) -> Result<ProblemSpec> {
    let text = std::fs::read_to_string(&input.file)
        .map_err(|e| Error::Malformed(format!("{}: {e}", input.file.display())))?;
    let spec = ProblemSpec::parse(&text).map_err(|e| match e {
        Error::Malformed(m) => Error::Malformed(format!("{}: {m}", input.file.display())),
        other => other,
    })?;
    Ok(match field {
        Some(f) => spec.with_field(f),
        None => spec,
    })
}

fn emit<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Executes a parsed command and returns its output text.
pub fn execute(cli: &Cli) -> Result<String> {
    let json = cli.output == OutputFormat::Json;
    match &cli.command {
        Command::Poset(input) => {
            let poset = load(input, cli.field)?.poset()?;
            let pj = poset.to_json();
            Ok(if json { emit(&pj) } else { poset_table(&pj) })
        }
        Command::Decompose { functor, length, max_degree, input } => {
            let spec = load(input, cli.field)?;
            let poset = spec.poset()?;
            let mut report = full_report(&poset, spec.field, (*functor).into(), *max_degree)?;
            if let Some(r) = length {
                report.dmodule = Some(dmodule_report(&poset, spec.field, *r)?);
            }
            Ok(if json { emit(&report) } else { decompose_table(&report) })
        }
        Command::Hilbert { index, depth, input } => {
            let spec = load(input, cli.field)?;
            let poset = spec.poset()?;
            let table = interval_betti_table(&poset, spec.field);
            let report = decomposition(&table, Functor::Hochster, poset.ring().nvars());
            let indices: Vec<i64> = match index {
                Some(i) => vec![*i],
                None => (0..=poset.ring().nvars() as i64).collect(),
            };
            let rows = indices
                .into_iter()
                .map(|i| {
                    let series = series_from_report(&report, &table, i);
                    HilbertRow { i, laurent: laurent_expansion(&series, *depth), series }
                })
                .collect();
            let o = HilbertOutput { field: spec.field, depth: *depth, rows };
            Ok(if json { emit(&o) } else { hilbert_table(&o) })
        }
        Command::Regularity { max_degree, input } => {
            let spec = load(input, cli.field)?;
            let poset = spec.poset()?;
            let table = interval_betti_table(&poset, spec.field);
            let report = decomposition(&table, Functor::Hochster, poset.ring().nvars());
            let regularity = regularity_from_report(&report, &table)?;
            let iso = limit_check(&poset, *max_degree)?.isomorphic_to_degree;
            let o = RegularityOutput {
                regularity,
                of: if iso { "quotient" } else { "limit" }.into(),
                max_degree: *max_degree,
            };
            Ok(if json {
                emit(&o)
            } else {
                let what = if iso { "A/I" } else { "lim A/I_p (A/I differs from the limit)" };
                format!("regularity of {what}: {regularity}\n")
            })
        }
        Command::LimitCheck { max_degree, input } => {
            let poset = load(input, cli.field)?.poset()?;
            let r = limit_check(&poset, *max_degree)?;
            Ok(if json { emit(&r) } else { limit_table(&r) })
        }
        Command::Roos { max_degree, input } => {
            let spec = load(input, cli.field)?;
            let poset = spec.poset()?;
            let mut rows = Vec::new();
            for j in 0..=*max_degree {
                let c = roos_cochain(&quotient_system_at(&poset, j)?)?;
                rows.push(RoosRow { j, spots: c.spots.iter().map(|s| s.dim()).collect(), cohomology: c.homology_dims() });
            }
            let o = RoosOutput { field: spec.field, rows };
            Ok(if json { emit(&o) } else { roos_table(&o) })
        }
        Command::OracleCompare { depth, input } => {
            let spec = load(input, cli.field)?;
            let v = compare(&spec.poset()?, spec.field, *depth)?;
            Ok(if json { emit(&v) } else { oracle_table(&v) })
        }
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn poset_table(p: &PosetJson) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "field {}  variables {}  kind {}", p.field, p.variables.join(","), p.kind);
    let _ = writeln!(s, "{} elements, {} covers, rank {}", p.elements.len(), p.covers.len(), p.rank);
    let _ = writeln!(s, "{:>3}  {:>2}  {:>2}  {:<4}  ideal", "#", "d", "h", "comp");
    for e in &p.elements {
        let _ = writeln!(s, "{:>3}  {:>2}  {:>2}  {:<4}  {}", e.index, e.d, e.h, if e.component { "*" } else { "" }, e.ideal);
    }
    let covers: Vec<String> = p.covers.iter().map(|[a, b]| format!("{a}<{b}")).collect();
    let _ = writeln!(s, "covers: {}", covers.join(" "));
    if !p.redundant.is_empty() {
        let _ = writeln!(s, "redundant components: {}", join(&p.redundant));
    }
    s
}

fn decompose_table(r: &FullReport) -> String {
    let (label, idx) = match r.kind {
        Functor::Hochster => ("M", "i"),
        Functor::Terai => ("m", "j"),
    };
    let mut s = String::new();
    let _ = writeln!(s, "{} multiplicities {label}_{{{idx},q}} over {}", format!("{:?}", r.kind).to_lowercase(), r.field);
    let _ = writeln!(s, "{:>3}  {:>4}  {:>5}  ideal", idx, "q", "mult");
    for e in &r.entries {
        let _ = writeln!(s, "{:>3}  {:>4}  {:>5}  {}", e.i, e.element, e.multiplicity, e.ideal);
    }
    for h in &r.hilbert {
        let _ = writeln!(s, "H(H^{}_m; t) = {}", h.i, h.series);
    }
    match r.regularity {
        Some(reg) => {
            let _ = writeln!(s, "regularity {reg}");
        }
        None => {
            let _ = writeln!(s, "regularity undefined");
        }
    }
    let f = &r.validity_flags;
    let _ = writeln!(
        s,
        "limit isomorphic to degree {}: {}  distributive: {}",
        f.max_degree, f.limit_isomorphic, f.distributive
    );
    if let Some(d) = &r.dmodule {
        let _ = writeln!(s, "D-module length of H^{}_I: {}", d.r, d.length);
        for t in &d.cycle {
            let _ = writeln!(s, "  {} x T*_{}", t.multiplicity, t.ideal);
        }
    }
    s
}

fn hilbert_table(o: &HilbertOutput) -> String {
    let mut s = String::new();
    for r in &o.rows {
        let _ = writeln!(s, "H(H^{}_m; t) = {}", r.i, r.series);
        let coeffs: Vec<u128> = r.laurent.iter().map(|x| x.1).collect();
        let _ = writeln!(s, "  t^0..t^-{}: {}", o.depth, join(&coeffs));
    }
    s
}

fn limit_table(r: &LimitReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:>3}  {:>7}  {:>5}  {:>6}  higher", "j", "A/I", "lim", "defect");
    for row in &r.degrees {
        let _ = writeln!(s, "{:>3}  {:>7}  {:>5}  {:>6}  {}", row.j, row.dim_quotient, row.dim_lim, row.defect, join(&row.higher));
    }
    let _ = writeln!(s, "isomorphic up to degree {}: {}", r.max_degree, r.isomorphic_to_degree);
    match &r.distributivity.witness {
        None => {
            let _ = writeln!(s, "distributivity holds up to degree {}", r.distributivity.max_degree);
        }
        Some(w) => {
            let _ = writeln!(
                s,
                "distributivity fails in degree {}: (({}) + ({})) ∩ ({}) has dim {}, the sum of intersections has dim {}",
                w.degree,
                w.ideals[0].trim_matches(|c| c == '(' || c == ')'),
                w.ideals[1].trim_matches(|c| c == '(' || c == ')'),
                w.ideals[2].trim_matches(|c| c == '(' || c == ')'),
                w.lhs_dim,
                w.rhs_dim
            );
        }
    }
    s
}

fn roos_table(o: &RoosOutput) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:>3}  spots / cohomology", "j");
    for r in &o.rows {
        let _ = writeln!(s, "{:>3}  {} / {}", r.j, join(&r.spots), join(&r.cohomology));
    }
    s
}

fn oracle_table(v: &OracleVerdict) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "indices {}..={}, Laurent depth {}", v.indices[0], v.indices[v.indices.len() - 1], v.depth);
    let show = |r: Option<i64>| r.map_or("undefined".to_string(), |r| r.to_string());
    let _ = writeln!(s, "regularity: poset {}, oracle {}", show(v.poset_regularity), show(v.oracle_regularity));
    match &v.first_mismatch {
        None => {
            let _ = writeln!(s, "equal");
        }
        Some(m) => {
            let _ = writeln!(s, "mismatch in {} at {:?}: poset {} vs oracle {}", m.what, m.i, m.poset_side, m.oracle_side);
        }
    }
    s
}
