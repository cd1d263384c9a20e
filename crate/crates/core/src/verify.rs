//! Named verification suites, monoid spec files and report output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{
    factor_in_algebra_seeded, thm32_witness_chain, thm43_descent, thm43_descent_in, thm43_element, AlgebraError,
    DescentOutcome, DescentReport, Exponent, ProductContext, PuiseuxContext, PuiseuxElement, RationalField,
};
use crate::ffpoly::{
    cyclotomic_3power, is_irreducible_bi_bruteforce, is_irreducible_uni, lemma41_poly, multiplicative_order, BiIrreducibility,
    BiPoly, PolyError, PrimeField, UniPoly, DEFAULT_SEED,
};
use crate::lex::{self, LexError, SymbolTable};
use crate::puiseux::{
    certificate_json, prop51_ell, AccpStatus, AtomCheck, Certificate, Family, GenLabel, Membership, MonoidError,
    ProductMonoid, PuiseuxMonoid, DEFAULT_COEFF_BOUND, DEFAULT_DEPTH,
};
use crate::rational::Rational;

pub const SUITES: [&str; 8] = ["grams", "prop51", "thm32", "thm43", "lemma41", "lemma53", "thm54", "all"];

const PROP51_DEPTH: usize = 10;
const THM32_TRUNCATION: usize = 10;
const THM54_DENOM_BOUND: u64 = 8;
const ACCP_STEPS: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown suite `{0}`; expected one of grams, prop51, thm32, thm43, lemma41, lemma53, thm54, all")]
    UnknownSuite(String),
    #[error("unknown format `{0}`; expected json or text")]
    UnknownFormat(String),
    #[error("invalid option: {0}")]
    BadOption(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Lex(#[from] LexError),
}

/// Monoid described by a spec file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecMonoid {
    Single(PuiseuxMonoid),
    Product(ProductMonoid),
}

impl SpecMonoid {
    pub fn factors(&self) -> &[PuiseuxMonoid] {
        match self {
            SpecMonoid::Single(m) => std::slice::from_ref(m),
            SpecMonoid::Product(p) => p.factors(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidSpec {
    pub monoid: SpecMonoid,
    pub coeff_bound: u64,
}

#[derive(Default)]
struct Block {
    start: usize,
    family: Option<(usize, Family)>,
    depth: Option<(usize, usize)>,
    generators: Option<(usize, Vec<Rational>)>,
}

/// Parses the `key = value` spec format. Keys: `family`, `depth`,
/// `generators` (explicit families), `coeff_bound` and `free_rank`. A line
/// `---` starts another factor; several factors or a positive `free_rank`
/// give a product monoid.
pub fn parse_monoid_spec(text: &str) -> Result<MonoidSpec, VerifyError> {
    let err = |line: usize, message: String| VerifyError::Parse { line, message };
    let mut blocks = vec![Block { start: 1, ..Block::default() }];
    let mut coeff_bound: Option<u64> = None;
    let mut free_rank: Option<usize> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content == "---" {
            blocks.push(Block { start: line, ..Block::default() });
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected `key = value`, found `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let block = blocks.last_mut().expect("at least one block");
        let duplicate = || err(line, format!("duplicate key `{key}`"));
        match key {
            "family" => {
                if block.family.is_some() {
                    return Err(duplicate());
                }
                block.family = Some((line, parse_family(value).map_err(|m| err(line, m))?));
            }
            "depth" => {
                if block.depth.is_some() {
                    return Err(duplicate());
                }
                let d = parse_count(value).map_err(|m| err(line, m))?;
                if d == 0 {
                    return Err(err(line, "depth must be positive".into()));
                }
                block.depth = Some((line, d));
            }
            "generators" => {
                if block.generators.is_some() {
                    return Err(duplicate());
                }
                let gens = value
                    .split(',')
                    .map(|g| {
                        let g = g.trim();
                        let q: Rational = g.parse().map_err(|_| err(line, format!("malformed rational `{g}`")))?;
                        if !q.is_positive() {
                            return Err(err(line, format!("generator {q} is not strictly positive")));
                        }
                        Ok(q)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                block.generators = Some((line, gens));
            }
            "coeff_bound" => {
                if coeff_bound.is_some() {
                    return Err(duplicate());
                }
                coeff_bound = Some(parse_count(value).map_err(|m| err(line, m))? as u64);
            }
            "free_rank" => {
                if free_rank.is_some() {
                    return Err(duplicate());
                }
                free_rank = Some(parse_count(value).map_err(|m| err(line, m))?);
            }
            other => return Err(err(line, format!("unknown key `{other}`"))),
        }
    }

    let mut factors = Vec::with_capacity(blocks.len());
    for block in blocks {
        let (family_line, family) = block
            .family
            .ok_or_else(|| err(block.start, "missing `family`".into()))?;
        let family = match (family, block.generators) {
            (Family::Explicit(_), Some((_, gens))) => Family::Explicit(gens),
            (Family::Explicit(_), None) => return Err(err(family_line, "explicit family needs `generators`".into())),
            (_, Some((line, _))) => return Err(err(line, "`generators` is only allowed for explicit families".into())),
            (f, None) => f,
        };
        let depth = match (&family, block.depth) {
            (_, Some((_, d))) => d,
            (Family::Explicit(gens), None) => gens.len(),
            (_, None) => DEFAULT_DEPTH,
        };
        let line = block.depth.map_or(family_line, |(l, _)| l);
        factors.push(PuiseuxMonoid::new(family, depth).map_err(|e| err(line, e.to_string()))?);
    }
    let free_rank = free_rank.unwrap_or(0);
    let monoid = if factors.len() == 1 && free_rank == 0 {
        SpecMonoid::Single(factors.pop().expect("one factor"))
    } else {
        SpecMonoid::Product(ProductMonoid::new(factors).with_free_rank(free_rank))
    };
    Ok(MonoidSpec { monoid, coeff_bound: coeff_bound.unwrap_or(DEFAULT_COEFF_BOUND) })
}

fn parse_family(value: &str) -> Result<Family, String> {
    match value {
        "grams" => Ok(Family::Grams),
        "prop51" => Ok(Family::Prop51),
        "explicit" => Ok(Family::Explicit(Vec::new())),
        v => match v.strip_prefix("mp:") {
            Some(p) => {
                let p: u64 = p.trim().parse().map_err(|_| format!("malformed prime in `{v}`"))?;
                let family = Family::Mp(p);
                family.validate().map_err(|e| e.to_string())?;
                Ok(family)
            }
            None => Err(format!("unknown family `{v}`")),
        },
    }
}

fn parse_count(value: &str) -> Result<usize, String> {
    value.parse().map_err(|_| format!("expected a nonnegative integer, found `{value}`"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub statement: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub config: BTreeMap<String, Value>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        SuiteReport { suite: suite.to_string(), checks: Vec::new(), config: BTreeMap::new() }
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// True when no check failed; inconclusive checks do not count.
    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(VerifyError::UnknownFormat(other.to_string())),
        }
    }
}

pub fn emit_report(report: &SuiteReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(report).expect("reports serialize"),
        Format::Text => {
            let mut out = format!(
                "suite {}: {} pass, {} fail, {} inconclusive\n",
                report.suite,
                report.count(Status::Pass),
                report.count(Status::Fail),
                report.count(Status::Inconclusive),
            );
            for c in &report.checks {
                let _ = write!(out, "{:<12} {}  {}", c.status.as_str().to_uppercase(), c.id, c.statement);
                if c.runtime_ms > 0 {
                    let _ = write!(out, "  ({} ms)", c.runtime_ms);
                }
                out.push('\n');
            }
            out
        }
    }
}

/// Suite parameters; `None` selects the suite default.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub depth: Option<usize>,
    pub coeff_bound: Option<u64>,
    pub denom_bound: Option<u64>,
    pub field: Option<u64>,
    pub seed: Option<u64>,
    /// Record wall-clock times; off by default so reports are reproducible.
    pub timings: bool,
    pub spec: Option<MonoidSpec>,
}

struct Runner<'a> {
    o: &'a Overrides,
    checks: Vec<Check>,
    config: BTreeMap<String, Value>,
}

type Outcome = Result<(Status, Option<Value>), VerifyError>;

impl Runner<'_> {
    fn run(&mut self, id: String, statement: String, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let (status, certificate) = f().unwrap_or_else(|e| (Status::Fail, Some(json!({"error": e.to_string()}))));
        let runtime_ms = if self.o.timings { start.elapsed().as_millis() as u64 } else { 0 };
        self.checks.push(Check { id, statement, status, certificate, runtime_ms });
    }

    fn coeff_bound(&self) -> u64 {
        self.o.coeff_bound.unwrap_or(DEFAULT_COEFF_BOUND)
    }

    fn seed(&self) -> u64 {
        self.o.seed.unwrap_or(DEFAULT_SEED)
    }
}

pub fn run_suite(name: &str, overrides: &Overrides) -> Result<SuiteReport, VerifyError> {
    if !SUITES.contains(&name) {
        return Err(VerifyError::UnknownSuite(name.to_string()));
    }
    if let Some(p) = overrides.field {
        PrimeField::new(p)?;
    }
    let mut r = Runner { o: overrides, checks: Vec::new(), config: BTreeMap::new() };
    r.config.insert("seed".into(), json!(r.seed()));
    let names: Vec<&str> = if name == "all" { SUITES[..7].to_vec() } else { vec![name] };
    for n in names {
        match n {
            "grams" => grams(&mut r)?,
            "prop51" => prop51(&mut r)?,
            "thm32" => thm32(&mut r)?,
            "thm43" => thm43(&mut r)?,
            "lemma41" => lemma41(&mut r),
            "lemma53" => lemma53(&mut r),
            "thm54" => thm54(&mut r)?,
            _ => unreachable!("suite names are checked above"),
        }
    }
    if let Some(spec) = &overrides.spec {
        spec_checks(&mut r, spec);
    }
    let mut report = SuiteReport { suite: name.to_string(), checks: r.checks, config: r.config };
    report.checks.sort_by(|a, b| a.id.cmp(&b.id));
    debug_assert!(report.checks.windows(2).all(|w| w[0].id != w[1].id), "check ids are unique");
    Ok(report)
}

fn atom_outcome(check: AtomCheck, value: &Rational) -> (Status, Option<Value>) {
    match check {
        AtomCheck::AtomUpTo { depth, coeff_bound } => (
            Status::Pass,
            Some(json!({"value": value.to_string(), "searched_depth": depth, "coeff_bound": coeff_bound})),
        ),
        AtomCheck::NonAtom(cert) => (
            Status::Fail,
            Some(json!({"value": value.to_string(), "decomposition": certificate_json(&cert)})),
        ),
    }
}

fn grams(r: &mut Runner) -> Result<(), VerifyError> {
    let depth = r.o.depth.unwrap_or(DEFAULT_DEPTH);
    let cb = r.coeff_bound();
    r.config.insert("grams".into(), json!({"depth": depth, "coeff_bound": cb, "accp_steps": ACCP_STEPS}));
    let m = PuiseuxMonoid::new(Family::Grams, depth)?;
    for g in m.generators() {
        r.run(
            format!("grams.atom.{}", padded(g.label)),
            format!("{} = {} is an atom among the first {depth} generators (coefficients <= {cb})", g.label, g.value),
            || Ok(atom_outcome(m.is_atom(g.label, cb)?, &g.value)),
        );
    }
    let steps = m.accp_chain_check(&Rational::one(), ACCP_STEPS, cb)?;
    for step in steps {
        let n = step.n;
        r.run(
            format!("grams.accp.n{n:02}"),
            format!("1/2^{n} + M is strictly contained in 1/2^{} + M", n + 1),
            || {
                Ok(match step.status {
                    AccpStatus::StrictAscent { upper, difference } => (
                        Status::Pass,
                        Some(json!({
                            "upper": certificate_json(&upper),
                            "difference": certificate_json(&difference),
                        })),
                    ),
                    AccpStatus::NotAscending { element, obstruction } => (
                        Status::Fail,
                        Some(json!({"element": element.to_string(), "obstruction": obstruction.to_string()})),
                    ),
                    AccpStatus::Inconclusive { element } => {
                        (Status::Inconclusive, Some(json!({"undecided": element.to_string()})))
                    }
                })
            },
        );
    }
    Ok(())
}

fn prop51(r: &mut Runner) -> Result<(), VerifyError> {
    let depth = r.o.depth.unwrap_or(PROP51_DEPTH);
    let cb = r.coeff_bound();
    r.config.insert("prop51".into(), json!({"depth": depth, "coeff_bound": cb, "ell": "(n+1)(n+2)/2"}));
    let m = PuiseuxMonoid::new(Family::Prop51, depth)?;
    let top = depth.min(8) as u32;

    r.run(
        "prop51.interleave".into(),
        format!("b1 > a1 > b2 > a2 > ... > b{depth} > a{depth}"),
        || {
            let mut seq = Vec::with_capacity(2 * depth);
            for n in 1..=depth as u32 {
                for label in [GenLabel::B(n), GenLabel::A(n)] {
                    seq.push((label, m.generator(label)?));
                }
            }
            let ok = seq.windows(2).all(|w| w[0].1 > w[1].1);
            let ell: Vec<u32> = (1..=depth as u32).map(prop51_ell).collect();
            Ok((if ok { Status::Pass } else { Status::Fail }, Some(json!({"ell": ell}))))
        },
    );

    for n in 0..=(depth as u32 - 1).min(8) {
        let target = Rational::inverse_power(2, n);
        r.run(
            format!("prop51.half.n{n}"),
            format!("1/2^{n} = a{k} + b{k} lies in the monoid", k = n + 1),
            || {
                let pair: Certificate = [(GenLabel::A(n + 1), 1), (GenLabel::B(n + 1), 1)].into();
                let exact = m.evaluate(&pair)? == target;
                let found = m.membership(&target, cb)?;
                let cert = json!({"identity": certificate_json(&pair), "search": found.certificate().map(certificate_json)});
                Ok(match found {
                    _ if !exact => (Status::Fail, Some(cert)),
                    Membership::Yes(_) => (Status::Pass, Some(cert)),
                    Membership::Unknown { .. } => (Status::Inconclusive, Some(cert)),
                    Membership::No(o) => (Status::Fail, Some(json!({"obstruction": o.to_string()}))),
                })
            },
        );
    }

    for n in 1..=top {
        for label in [GenLabel::A(n), GenLabel::B(n)] {
            let value = m.generator(label)?;
            r.run(
                format!("prop51.atom.{}", padded(label)),
                format!("{label} is an atom among the first {depth} pairs (coefficients <= {cb})"),
                || Ok(atom_outcome(m.is_atom(label, cb)?, &value)),
            );
        }
    }
    Ok(())
}

fn thm32(r: &mut Runner) -> Result<(), VerifyError> {
    let n = r.o.depth.unwrap_or(THM32_TRUNCATION);
    if n < 3 {
        return Err(VerifyError::BadOption(format!("thm32 needs truncation at least 3, got {n}")));
    }
    let k_max = n - 2;
    let p = r.o.field.unwrap_or(2);
    r.config.insert("thm32".into(), json!({"truncation": n, "k_max": k_max, "field": p}));

    let verdicts = lex::minimality_check(n)?;
    let table = SymbolTable::new(n);
    for v in verdicts {
        r.run(
            format!("thm32.minimal.{}", v.atom),
            format!("{} is not generated by the other atoms at truncation {n}", v.atom),
            || {
                let vector = v.atom.vector(table)?;
                let status = if v.not_generated { Status::Pass } else { Status::Fail };
                Ok((status, Some(json!({"vector": vector.to_string()}))))
            },
        );
    }

    let gf = thm32_witness_chain(n, PrimeField::new(p)?, k_max)?;
    let qq = thm32_witness_chain(n, RationalField, k_max)?;
    for (tag, report) in [(format!("gf{p}"), gf), ("qq".to_string(), qq)] {
        for step in report.steps {
            let k = step.k;
            r.run(
                format!("thm32.witness.{tag}.k{k}"),
                format!(
                    "over {}: x^a + x^b = x^({k}c) (x^(a-{k}c) + x^(b-{k}c)), both exponents in M and divisible by 2c",
                    report.field
                ),
                || Ok((if step.passed() { Status::Pass } else { Status::Fail }, Some(step.to_json()))),
            );
        }
    }
    Ok(())
}

fn descent_status<E: Exponent>(report: &DescentReport<E>, shape: bool) -> Status {
    match report.outcome {
        DescentOutcome::NoIrreducibleFactorizationUpToBound if report.verify() && shape => Status::Pass,
        DescentOutcome::Inconclusive { .. } => Status::Inconclusive,
        _ => Status::Fail,
    }
}

/// Largest `k >= 1` with `p^k <= bound`.
fn levels_within(p: u64, bound: u64) -> u32 {
    let mut k = 1;
    while p.checked_pow(k + 1).is_some_and(|v| v <= bound) {
        k += 1;
    }
    k
}

fn thm43(r: &mut Runner) -> Result<(), VerifyError> {
    let cb = r.coeff_bound();
    let runs: Vec<(u64, u32)> = match (r.o.field, r.o.denom_bound) {
        (Some(p), Some(d)) => vec![(p, levels_within(p, d))],
        (Some(p), None) => vec![(p, if p == 2 { 4 } else { 3 })],
        (None, Some(d)) => vec![(2, levels_within(2, d)), (3, levels_within(3, d))],
        (None, None) => vec![(2, 4), (3, 3)],
    };
    r.config.insert(
        "thm43".into(),
        json!({"runs": runs.iter().map(|(p, k)| json!({"p": p, "k_max": k})).collect::<Vec<_>>(), "coeff_bound": cb}),
    );
    for (p, k_max) in runs {
        r.run(
            format!("thm43.descent.p{p}"),
            format!("X + Y + XY over GF({p}) is a {p}^k-th power of X^(1/{p}^k) + Y^(1/{p}^k) + (XY)^(1/{p}^k) for k <= {k_max}"),
            || {
                let report = thm43_descent(p, k_max)?;
                let mut shape = report.chain.len() == k_max as usize + 1;
                for (k, link) in report.chain.iter().enumerate() {
                    shape &= link.element == thm43_element(p, k as u32)?;
                }
                Ok((descent_status(&report, shape), Some(report.to_json())))
            },
        );
        r.run(
            format!("thm43.control.p{p}"),
            format!("over N0 x N0 the descent from X + Y + XY stops at k = 1 (GF({p}))"),
            || {
                let monoid = ProductContext { monoid: ProductMonoid::new(Vec::new()).with_free_rank(2), coeff_bound: cb };
                let report = thm43_descent_in(p, 1, &monoid)?;
                let status = match report.outcome {
                    DescentOutcome::Blocked { k: 1, .. } => Status::Pass,
                    DescentOutcome::Inconclusive { .. } => Status::Inconclusive,
                    _ => Status::Fail,
                };
                Ok((status, Some(report.to_json())))
            },
        );
    }
    Ok(())
}

fn lemma41(r: &mut Runner) {
    const IRREDUCIBLE: [(usize, u64); 6] = [(1, 2), (3, 2), (1, 3), (2, 3), (1, 5), (2, 5)];
    r.config.insert(
        "lemma41".into(),
        json!({"irreducible": IRREDUCIBLE.iter().map(|(n, p)| json!([n, p])).collect::<Vec<_>>(), "reducible": [[2, 2]]}),
    );
    for (n, p) in IRREDUCIBLE {
        r.run(
            format!("lemma41.n{n}.p{p}"),
            format!("x^{n} + y^{n} + x^{n} y^{n} is irreducible over GF({p})"),
            || {
                Ok(match is_irreducible_bi_bruteforce(n, p)? {
                    BiIrreducibility::Irreducible { candidates } => {
                        (Status::Pass, Some(json!({"candidates_excluded": candidates.to_string()})))
                    }
                    BiIrreducibility::Reducible { g, h } => {
                        (Status::Fail, Some(json!({"g": g.to_string(), "h": h.to_string()})))
                    }
                })
            },
        );
    }
    r.run(
        "lemma41.n2.p2".into(),
        "x^2 + y^2 + x^2 y^2 = (x + y + xy)^2 over GF(2)".into(),
        || {
            let f2 = PrimeField::new(2)?;
            let base = BiPoly::from_terms(f2, &[(1, 0, 1), (0, 1, 1), (1, 1, 1)]);
            Ok(match is_irreducible_bi_bruteforce(2, 2)? {
                BiIrreducibility::Reducible { g, h } => {
                    let ok = g == base && h == base && g.mul(&h)? == lemma41_poly(2, f2);
                    let cert = json!({"g": g.to_string(), "h": h.to_string()});
                    (if ok { Status::Pass } else { Status::Fail }, Some(cert))
                }
                BiIrreducibility::Irreducible { candidates } => {
                    (Status::Fail, Some(json!({"candidates_excluded": candidates.to_string()})))
                }
            })
        },
    );
}

fn lemma53(r: &mut Runner) {
    r.config.insert("lemma53".into(), json!({"n": [0, 1, 2, 3]}));
    for n in 0..=3u32 {
        let small = 3usize.pow(n);
        let modulus = 3u64.pow(n + 1);
        r.run(
            format!("lemma53.n{n}"),
            format!(
                "x^{} + x^{small} + 1 is irreducible over GF(2) and 2 has order {} modulo {modulus}",
                2 * small,
                2 * small
            ),
            || {
                let f2 = PrimeField::new(2)?;
                let f = cyclotomic_3power(n);
                let expected = UniPoly::monomial(f2, 1, 2 * small)
                    .add(&UniPoly::monomial(f2, 1, small))?
                    .add(&UniPoly::one(f2))?;
                let irreducible = is_irreducible_uni(&f)?;
                let order = multiplicative_order(2, modulus)?;
                let ok = f == expected && irreducible && order == 2 * small as u64;
                let cert = json!({
                    "polynomial": f.to_string(),
                    "degree": f.degree(),
                    "irreducible": irreducible,
                    "modulus": modulus,
                    "order_of_2": order,
                });
                Ok((if ok { Status::Pass } else { Status::Fail }, Some(cert)))
            },
        );
    }
}

fn thm54(r: &mut Runner) -> Result<(), VerifyError> {
    let d = r.o.denom_bound.unwrap_or(THM54_DENOM_BOUND);
    let p = r.o.field.unwrap_or(2);
    let depth = r.o.depth.unwrap_or(PROP51_DEPTH);
    let cb = r.coeff_bound();
    let seed = r.seed();
    r.config.insert("thm54".into(), json!({"denom_bound": d, "field": p, "depth": depth, "coeff_bound": cb}));
    let field = PrimeField::new(p)?;
    let e = |k: u32| {
        let step = Rational::inverse_power(p, k);
        PuiseuxElement::from_terms(
            field,
            (),
            vec![(step.mul_int(2), 1), (step, 1), (Rational::zero(), 1)],
        )
    };
    let f = e(0)?;
    let expected_steps = (1..).take_while(|&k| p.checked_pow(k).is_some_and(|v| v <= d)).count();

    let prop = PuiseuxContext { monoid: PuiseuxMonoid::new(Family::Prop51, depth)?, coeff_bound: cb };
    r.run(
        "thm54.descent".into(),
        format!("x^2 + x + 1 over GF({p}) in the prop51 algebra: e_k = e_(k+1)^{p}, e_k = x^(2/{p}^k) + x^(1/{p}^k) + 1, for levels up to {d}"),
        || {
            let report = factor_in_algebra_seeded(&f, &prop, d, seed)?;
            let mut shape = report.steps() == expected_steps;
            for (k, link) in report.chain.iter().enumerate() {
                shape &= link.element == e(k as u32)?;
            }
            let mut cert = report.to_json();
            cert["steps"] = json!(report.steps());
            Ok((descent_status(&report, shape), Some(cert)))
        },
    );
    let naturals = PuiseuxContext { monoid: PuiseuxMonoid::naturals(), coeff_bound: cb };
    r.run(
        "thm54.control".into(),
        format!("x^2 + x + 1 over GF({p}) in the N0 algebra has no proper factorisation"),
        || {
            let report = factor_in_algebra_seeded(&f, &naturals, d, seed)?;
            let status = match report.outcome {
                DescentOutcome::TerminatedAtIrreducible(_) => Status::Pass,
                DescentOutcome::Inconclusive { .. } => Status::Inconclusive,
                _ => Status::Fail,
            };
            Ok((status, Some(report.to_json())))
        },
    );
    Ok(())
}

fn spec_checks(r: &mut Runner, spec: &MonoidSpec) {
    let cb = r.o.coeff_bound.unwrap_or(spec.coeff_bound);
    let factors: Vec<String> = spec.monoid.factors().iter().map(|m| format!("{} depth {}", m.family(), m.depth())).collect();
    r.config.insert("spec".into(), json!({"factors": factors, "coeff_bound": cb}));
    for (i, m) in spec.monoid.factors().iter().enumerate() {
        for g in m.generators() {
            r.run(
                format!("spec.f{i}.atom.{}", padded(g.label)),
                format!("{} = {} is an atom of factor {i} (coefficients <= {cb})", g.label, g.value),
                || Ok(atom_outcome(m.is_atom(g.label, cb)?, &g.value)),
            );
        }
    }
}

/// Label with a zero-padded index, so ids sort numerically.
fn padded(label: GenLabel) -> String {
    let (tag, n) = match label {
        GenLabel::G(n) => ('g', n),
        GenLabel::A(n) => ('a', n),
        GenLabel::B(n) => ('b', n),
    };
    format!("{tag}{n:02}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_of(e: VerifyError) -> usize {
        match e {
            VerifyError::Parse { line, .. } => line,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn spec_examples() {
        let s = parse_monoid_spec("family = grams\ndepth = 5").unwrap();
        match &s.monoid {
            SpecMonoid::Single(m) => {
                assert_eq!(m.generators().len(), 5);
                assert_eq!(m.family(), &Family::Grams);
            }
            other => panic!("{other:?}"),
        }
        let s = parse_monoid_spec("family = mp:3\ndepth = 4").unwrap();
        assert_eq!(s.monoid.factors()[0].generators().len(), 4);
        assert_eq!(s.monoid.factors()[0].family(), &Family::Mp(3));
        let e = parse_monoid_spec("family = explicit\ngenerators = 1/2, -1/3").unwrap_err();
        assert_eq!(line_of(e), 2);
    }

    #[test]
    fn spec_errors_carry_lines() {
        assert_eq!(line_of(parse_monoid_spec("depth = 3\nfamily = gram").unwrap_err()), 2);
        assert_eq!(line_of(parse_monoid_spec("family = explicit\n\ngenerators = 1/2, 1/x").unwrap_err()), 3);
        assert_eq!(line_of(parse_monoid_spec("family = mp:4").unwrap_err()), 1);
        assert_eq!(line_of(parse_monoid_spec("family = grams\ndepth = 0").unwrap_err()), 2);
        assert_eq!(line_of(parse_monoid_spec("family = grams\nfamily = grams").unwrap_err()), 2);
        assert_eq!(line_of(parse_monoid_spec("# nothing\ndepth = 2").unwrap_err()), 1);
        assert_eq!(line_of(parse_monoid_spec("family = grams\ngenerators = 1").unwrap_err()), 2);
        assert_eq!(line_of(parse_monoid_spec("family = grams\ncolour = red").unwrap_err()), 2);
    }

    #[test]
    fn spec_products() {
        let s = parse_monoid_spec("family = grams\ndepth = 3\n---\nfamily = explicit\ngenerators = 1/2, 1/3\nfree_rank = 1\ncoeff_bound = 9")
            .unwrap();
        assert_eq!(s.coeff_bound, 9);
        let f = s.monoid.factors();
        assert_eq!(f.len(), 3);
        assert_eq!(f[1].generators().len(), 2);
        assert_eq!(f[2], PuiseuxMonoid::naturals());
    }

    #[test]
    fn emit_examples() {
        assert_eq!(emit_report(&SuiteReport::new("x"), Format::Json), r#"{"suite":"x","checks":[]}"#);
        let mut r = SuiteReport::new("x");
        r.checks.push(Check {
            id: "x.one".into(),
            statement: "one".into(),
            status: Status::Pass,
            certificate: Some(json!({"b": 1, "a": 2})),
            runtime_ms: 0,
        });
        let s = emit_report(&r, Format::Json);
        assert!(s.contains(r#""certificate":{"a":2,"b":1}"#), "{s}");
        let text = emit_report(&r, Format::Text);
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().nth(1).unwrap().starts_with("PASS"));
    }

    #[test]
    fn suite_names() {
        assert!(matches!(run_suite("nope", &Overrides::default()), Err(VerifyError::UnknownSuite(_))));
        assert!("yaml".parse::<Format>().is_err());
    }

    #[test]
    fn lemma53_suite() {
        let r = run_suite("lemma53", &Overrides::default()).unwrap();
        assert_eq!(r.checks.len(), 4);
        assert!(r.checks.iter().all(|c| c.status == Status::Pass && c.certificate.is_some()));
    }

    #[test]
    fn thm54_suite() {
        let o = Overrides { denom_bound: Some(8), ..Overrides::default() };
        let r = run_suite("thm54", &o).unwrap();
        assert!(r.passed(), "{}", emit_report(&r, Format::Text));
        let descent = r.check("thm54.descent").unwrap();
        assert_eq!(descent.certificate.as_ref().unwrap()["steps"], json!(3));
    }

    #[test]
    fn grams_suite_small() {
        let o = Overrides { depth: Some(5), ..Overrides::default() };
        let r = run_suite("grams", &o).unwrap();
        assert_eq!(r.checks.len(), 5 + ACCP_STEPS as usize);
        assert!(r.passed());
        assert!(r.checks.windows(2).all(|w| w[0].id < w[1].id));
    }

    #[test]
    fn levels() {
        assert_eq!(levels_within(2, 8), 3);
        assert_eq!(levels_within(2, 15), 3);
        assert_eq!(levels_within(3, 27), 3);
        assert_eq!(levels_within(3, 2), 1);
    }
}
