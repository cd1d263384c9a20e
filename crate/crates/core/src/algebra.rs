//! Monoid algebras `F[x; M]`: finitely supported sums `Σ c_s x^s` with
//! exponents in a totally ordered monoid.
//!
//! Exponents are rationals (Puiseux monoids), pairs of rationals (products
//! of Puiseux monoids, written with variables `X` and `Y`) or vectors of the
//! lexicographic monoid. Coefficients lie in a prime field or in the
//! rationals.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use thiserror::Error;

use crate::ffpoly::{factor_uni_seeded, BiPoly, PolyError, PrimeField, UniPoly, DEFAULT_SEED};
use crate::lex::{self, LexAtom, LexError, LexMembership, OmegaVector, Symbol, SymbolTable};
use crate::puiseux::{
    certificate_json, AtomCheck, Certificate, Family, GenLabel, Membership, MonoidError, ProductMonoid,
    PuiseuxMonoid,
};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("the zero element has no degree")]
    ZeroElement,
    #[error("elements over different coefficient fields or monoid contexts")]
    ContextMismatch,
    #[error("exponent outside the monoid context")]
    ForeignExponent,
    #[error("negative exponent {0}")]
    NegativeExponent(String),
    #[error("denominators too large to clear")]
    DenominatorOverflow,
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("k_max = {k_max} out of range for truncation {truncation}")]
    OutOfRange { k_max: usize, truncation: usize },
    #[error("malformed element `{0}`")]
    Malformed(String),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Lex(#[from] LexError),
}

/// Coefficient rings of the algebras: prime fields and the rationals.
pub trait CoeffField: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn parse_elem(&self, s: &str) -> Option<Self::Elem>;
    fn name(&self) -> String;
}

impl CoeffField for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::add(self, *a, *b)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::mul(self, *a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        PrimeField::neg(self, *a)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn parse_elem(&self, s: &str) -> Option<u64> {
        s.parse::<i64>().ok().map(|c| self.reduce(c))
    }
    fn name(&self) -> String {
        format!("GF({})", self.p())
    }
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RationalField;

impl CoeffField for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a.clone()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn parse_elem(&self, s: &str) -> Option<Rational> {
        s.parse().ok()
    }
    fn name(&self) -> String {
        "QQ".to_string()
    }
}

/// Exponents of a monoid algebra, with their total order.
pub trait Exponent: Clone + Ord + Hash + fmt::Debug {
    /// Data shared by all exponents of one algebra.
    type Context: Clone + PartialEq + fmt::Debug;

    fn zero(ctx: &Self::Context) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn belongs(&self, ctx: &Self::Context) -> bool;
    /// `self / k` in the ambient group, when it exists.
    fn div_int(&self, k: u64) -> Option<Self>;
    fn write_monomial(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result;
    fn parse_monomial(s: &str, ctx: &Self::Context) -> Option<Self>;
    /// Text form of the exponent alone.
    fn label(&self) -> String;
}

fn strip_power<'a>(s: &'a str, var: &str) -> Option<&'a str> {
    s.strip_prefix(var)?.strip_prefix("^(")?.strip_suffix(')')
}

impl Exponent for Rational {
    type Context = ();

    fn zero(_: &()) -> Self {
        Rational::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn belongs(&self, _: &()) -> bool {
        true
    }
    fn div_int(&self, k: u64) -> Option<Self> {
        Some(Rational::div_int(self, k))
    }
    fn write_monomial(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^({self})")
    }
    fn parse_monomial(s: &str, _: &()) -> Option<Self> {
        strip_power(s, "x")?.parse().ok()
    }
    fn label(&self) -> String {
        self.to_string()
    }
}

/// Exponent of `X^u Y^v`, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPair(pub Rational, pub Rational);

impl RatPair {
    pub fn components(&self) -> [Rational; 2] {
        [self.0.clone(), self.1.clone()]
    }
}

impl Exponent for RatPair {
    type Context = ();

    fn zero(_: &()) -> Self {
        RatPair(Rational::zero(), Rational::zero())
    }
    fn add(&self, other: &Self) -> Self {
        RatPair(&self.0 + &other.0, &self.1 + &other.1)
    }
    fn belongs(&self, _: &()) -> bool {
        true
    }
    fn div_int(&self, k: u64) -> Option<Self> {
        Some(RatPair(self.0.div_int(k), self.1.div_int(k)))
    }
    fn write_monomial(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X^({})*Y^({})", self.0, self.1)
    }
    fn parse_monomial(s: &str, _: &()) -> Option<Self> {
        let (xs, ys) = s.split_once('*')?;
        Some(RatPair(strip_power(xs, "X")?.parse().ok()?, strip_power(ys, "Y")?.parse().ok()?))
    }
    fn label(&self) -> String {
        format!("({}, {})", self.0, self.1)
    }
}

impl Exponent for OmegaVector {
    type Context = SymbolTable;

    fn zero(ctx: &SymbolTable) -> Self {
        OmegaVector::zero(*ctx)
    }
    fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("exponents share one table")
    }
    fn belongs(&self, ctx: &SymbolTable) -> bool {
        self.table() == *ctx
    }
    fn div_int(&self, k: u64) -> Option<Self> {
        let k = k as i64;
        if self.coeffs().iter().any(|c| c % k != 0) {
            return None;
        }
        let mut out = self.clone();
        out.coeffs_mut().iter_mut().for_each(|c| *c /= k);
        Some(out)
    }
    fn write_monomial(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^({self})")
    }
    fn parse_monomial(s: &str, ctx: &SymbolTable) -> Option<Self> {
        OmegaVector::parse(strip_power(s, "x")?, *ctx).ok()
    }
    fn label(&self) -> String {
        self.to_string()
    }
}

/// An element of `F[x; M]` in canonical form: distinct exponents, no zero
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<E: Exponent, F: CoeffField> {
    field: F,
    ctx: E::Context,
    terms: BTreeMap<E, F::Elem>,
}

pub type PuiseuxElement = AlgebraElement<Rational, PrimeField>;
pub type PairElement = AlgebraElement<RatPair, PrimeField>;

impl<E: Exponent, F: CoeffField> AlgebraElement<E, F> {
    pub fn zero(field: F, ctx: E::Context) -> Self {
        AlgebraElement { field, ctx, terms: BTreeMap::new() }
    }

    pub fn one(field: F, ctx: E::Context) -> Self {
        let c = field.one();
        let e = E::zero(&ctx);
        Self::monomial(field, ctx, c, e).expect("zero exponent belongs")
    }

    pub fn monomial(field: F, ctx: E::Context, c: F::Elem, e: E) -> Result<Self, AlgebraError> {
        Self::from_terms(field, ctx, vec![(e, c)])
    }

    /// Sums the given terms, merging equal exponents.
    pub fn from_terms(field: F, ctx: E::Context, terms: Vec<(E, F::Elem)>) -> Result<Self, AlgebraError> {
        let mut out = Self::zero(field, ctx);
        for (e, c) in terms {
            if !e.belongs(&out.ctx) {
                return Err(AlgebraError::ForeignExponent);
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, e: E, c: F::Elem) {
        let sum = match self.terms.get(&e) {
            Some(old) => self.field.add(old, &c),
            None => c,
        };
        if self.field.is_zero(&sum) {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn context(&self) -> &E::Context {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in decreasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&E, &F::Elem)> {
        self.terms.iter().rev()
    }

    pub fn exponents(&self) -> impl Iterator<Item = &E> {
        self.terms.keys().rev()
    }

    pub fn coeff(&self, e: &E) -> F::Elem {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> Result<&E, AlgebraError> {
        self.terms.keys().next_back().ok_or(AlgebraError::ZeroElement)
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.field == other.field && self.ctx == other.ctx {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), self.field.neg(c))).collect();
        AlgebraElement { field: self.field.clone(), ctx: self.ctx.clone(), terms }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = Self::zero(self.field.clone(), self.ctx.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), self.field.mul(c1, c2));
            }
        }
        Ok(out)
    }

    /// `self^k` by repeated squaring; `f^0 = 1`.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = Self::one(self.field.clone(), self.ctx.clone());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same context");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same context");
            }
        }
        acc
    }

    pub fn parse(s: &str, field: F, ctx: E::Context) -> Result<Self, AlgebraError> {
        let malformed = || AlgebraError::Malformed(s.to_string());
        let s = s.trim();
        let mut out = Self::zero(field, ctx);
        if s == "0" {
            return Ok(out);
        }
        for term in s.split('+') {
            let (c, mono) = term.trim().split_once('*').ok_or_else(malformed)?;
            let c = out.field.parse_elem(c).ok_or_else(malformed)?;
            let e = E::parse_monomial(mono, &out.ctx).ok_or_else(malformed)?;
            if out.terms.contains_key(&e) {
                return Err(malformed());
            }
            out.add_term(e, c);
        }
        Ok(out)
    }
}

impl<E: Exponent, F: CoeffField> fmt::Display for AlgebraElement<E, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{c}*")?;
            e.write_monomial(f)?;
        }
        Ok(())
    }
}

/// Membership of an exponent in the monoid of an algebra.
#[derive(Debug, Clone, PartialEq)]
pub enum ExpVerdict {
    Yes(Value),
    No(String),
    Unknown,
}

pub trait MonoidContext<E> {
    fn member(&self, e: &E) -> Result<ExpVerdict, AlgebraError>;
}

/// A Puiseux monoid with the coefficient bound used for its searches.
#[derive(Debug, Clone)]
pub struct PuiseuxContext {
    pub monoid: PuiseuxMonoid,
    pub coeff_bound: u64,
}

impl MonoidContext<Rational> for PuiseuxContext {
    fn member(&self, e: &Rational) -> Result<ExpVerdict, AlgebraError> {
        if e.is_negative() {
            return Ok(ExpVerdict::No("negative".into()));
        }
        Ok(match self.monoid.membership(e, self.coeff_bound)? {
            Membership::Yes(cert) => ExpVerdict::Yes(certificate_json(&cert)),
            Membership::No(obs) => ExpVerdict::No(obs.to_string()),
            Membership::Unknown { .. } => ExpVerdict::Unknown,
        })
    }
}

/// A product of Puiseux monoids acting on pair exponents.
#[derive(Debug, Clone)]
pub struct ProductContext {
    pub monoid: ProductMonoid,
    pub coeff_bound: u64,
}

impl MonoidContext<RatPair> for ProductContext {
    fn member(&self, e: &RatPair) -> Result<ExpVerdict, AlgebraError> {
        let comps = e.components();
        if comps.iter().any(Rational::is_negative) {
            return Ok(ExpVerdict::No("negative".into()));
        }
        let m = self.monoid.membership(&comps, self.coeff_bound)?;
        let mut certs = Vec::new();
        for (i, c) in m.components.iter().enumerate() {
            match c {
                Membership::Yes(cert) => certs.push(certificate_json(cert)),
                Membership::No(obs) => return Ok(ExpVerdict::No(format!("component {i}: {obs}"))),
                Membership::Unknown { .. } => {}
            }
        }
        Ok(if certs.len() == comps.len() { ExpVerdict::Yes(Value::Array(certs)) } else { ExpVerdict::Unknown })
    }
}

/// The truncated lexicographic monoid of a symbol table.
#[derive(Debug, Clone, Copy)]
pub struct LexContext(pub SymbolTable);

pub fn lex_certificate_json(cert: &lex::LexCertificate) -> Value {
    Value::Object(cert.iter().map(|(a, k)| (a.to_string(), json!(k))).collect())
}

impl MonoidContext<OmegaVector> for LexContext {
    fn member(&self, e: &OmegaVector) -> Result<ExpVerdict, AlgebraError> {
        if e.table() != self.0 {
            return Err(AlgebraError::ForeignExponent);
        }
        Ok(match lex::membership_lex(e) {
            LexMembership::Yes(cert) => ExpVerdict::Yes(lex_certificate_json(&cert)),
            LexMembership::No => ExpVerdict::No(format!("not in the truncation-{} monoid", self.0.truncation())),
        })
    }
}

/// Result of a Frobenius root extraction.
#[derive(Debug, Clone, PartialEq)]
pub enum RootOutcome<E: Exponent> {
    /// `root^p` is the input; every exponent of `root` carries a membership
    /// certificate.
    Root { root: AlgebraElement<E, PrimeField>, certificates: BTreeMap<E, Value> },
    /// Some exponent divided by `p` is not in the monoid.
    NoRoot { exponent: Option<E>, reason: String },
    /// Membership of `exponent` is undecided at the search bounds.
    Inconclusive { exponent: E },
}

impl<E: Exponent> AlgebraElement<E, PrimeField> {
    /// The unique `g` in the group algebra with `g^p = self` is
    /// `Σ c_s x^(s/p)`, since `c^p = c` in GF(p). It lies in `F[x; M]`
    /// exactly when every `s/p` does.
    pub fn pth_root(&self, monoid: &impl MonoidContext<E>) -> Result<RootOutcome<E>, AlgebraError> {
        let p = self.field.p();
        let mut terms = Vec::with_capacity(self.len());
        let mut certificates = BTreeMap::new();
        for (e, c) in &self.terms {
            let Some(r) = e.div_int(p) else {
                return Ok(RootOutcome::NoRoot { exponent: None, reason: format!("{} is not divisible by {p}", e.label()) });
            };
            match monoid.member(&r)? {
                ExpVerdict::Yes(cert) => {
                    certificates.insert(r.clone(), cert);
                }
                ExpVerdict::No(reason) => return Ok(RootOutcome::NoRoot { exponent: Some(r), reason }),
                ExpVerdict::Unknown => return Ok(RootOutcome::Inconclusive { exponent: r }),
            }
            terms.push((r, *c));
        }
        let root = Self::from_terms(self.field, self.ctx.clone(), terms)?;
        Ok(RootOutcome::Root { root, certificates })
    }
}

fn den_u64(q: &Rational) -> Result<u64, AlgebraError> {
    q.den().to_u64().ok_or(AlgebraError::DenominatorOverflow)
}

fn scaled_int(q: &Rational, l: u64) -> Result<usize, AlgebraError> {
    if q.is_negative() {
        return Err(AlgebraError::NegativeExponent(q.to_string()));
    }
    q.mul_int(l).to_i64().and_then(|v| usize::try_from(v).ok()).ok_or(AlgebraError::DenominatorOverflow)
}

impl PuiseuxElement {
    /// Least common denominator of the exponents.
    pub fn level(&self) -> Result<u64, AlgebraError> {
        self.terms.keys().try_fold(1u64, |acc, e| Ok(acc.lcm(&den_u64(e)?)))
    }

    /// `(L, P)` with `P(x^(1/L))` equal to `self`.
    pub fn clear_denominators(&self) -> Result<(u64, UniPoly), AlgebraError> {
        let l = self.level()?;
        let mut coeffs = Vec::new();
        for (e, &c) in &self.terms {
            let k = scaled_int(e, l)?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, 0);
            }
            coeffs[k] = c;
        }
        Ok((l, UniPoly::new(self.field, coeffs)))
    }

    /// Substitutes `x -> x^(1/level)` into `poly`.
    pub fn from_uni(poly: &UniPoly, level: u64) -> Self {
        let terms = poly
            .terms()
            .map(|(k, c)| (Rational::new(k as i64, level as i64).expect("positive level"), c))
            .collect();
        Self::from_terms(poly.field(), (), terms).expect("rational exponents")
    }
}

impl PairElement {
    pub fn level(&self) -> Result<u64, AlgebraError> {
        self.terms.keys().try_fold(1u64, |acc, e| Ok(acc.lcm(&den_u64(&e.0)?).lcm(&den_u64(&e.1)?)))
    }

    /// `(L, P)` with `P(X^(1/L), Y^(1/L))` equal to `self`; `X` becomes `x`
    /// and `Y` becomes `y`.
    pub fn clear_denominators(&self) -> Result<(u64, BiPoly), AlgebraError> {
        let l = self.level()?;
        let mut terms = Vec::new();
        for (e, &c) in &self.terms {
            terms.push((scaled_int(&e.0, l)?, scaled_int(&e.1, l)?, c as i64));
        }
        Ok((l, BiPoly::from_terms(self.field, &terms)))
    }

    pub fn from_bi(poly: &BiPoly, level: u64) -> Self {
        let r = |k: usize| Rational::new(k as i64, level as i64).expect("positive level");
        let terms = poly.terms().into_iter().map(|(i, j, c)| (RatPair(r(i), r(j)), c)).collect();
        Self::from_terms(poly.field(), (), terms).expect("pair exponents")
    }
}

impl<F: CoeffField> AlgebraElement<OmegaVector, F> {
    /// Lexicographic exponents have no denominators to clear.
    pub fn clear_denominators(&self) -> Result<(u64, UniPoly), AlgebraError> {
        Err(AlgebraError::NotApplicable("lexicographic exponents"))
    }
}

/// One element of a descent chain with the membership certificates of its
/// exponents.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainLink<E: Exponent> {
    pub element: AlgebraElement<E, PrimeField>,
    pub level: u64,
    pub certificates: BTreeMap<E, Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DescentOutcome<E: Exponent> {
    /// Every chain element is a p-th power inside the algebra; the last
    /// root lies beyond the denominator bound.
    NoIrreducibleFactorizationUpToBound,
    /// The input admits no proper factorisation with denominators within
    /// the bound.
    TerminatedAtIrreducible(AlgebraElement<E, PrimeField>),
    /// Factors irreducible up to the bound, with multiplicities.
    Factored(Vec<(AlgebraElement<E, PrimeField>, u32)>),
    /// Root extraction stopped at chain index `k` because `exponent` is not
    /// in the monoid.
    Blocked { k: usize, exponent: Option<E>, reason: String },
    /// A membership query was undecided at the search bounds.
    Inconclusive { blocking: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentReport<E: Exponent> {
    pub p: u64,
    pub denom_bound: u64,
    /// `chain[k+1]^p == chain[k]`.
    pub chain: Vec<ChainLink<E>>,
    /// Root of the last chain element, when it exists beyond the bound.
    pub beyond_bound: Option<ChainLink<E>>,
    pub outcome: DescentOutcome<E>,
    pub note: Option<String>,
}

impl<E: Exponent> DescentReport<E> {
    /// Number of root steps taken inside the bound.
    pub fn steps(&self) -> usize {
        self.chain.len().saturating_sub(1)
    }

    /// Checks the p-th power relations and that every exponent carries a
    /// certificate.
    pub fn verify(&self) -> bool {
        let mut links: Vec<&ChainLink<E>> = self.chain.iter().collect();
        links.extend(self.beyond_bound.iter());
        let powers = links.windows(2).all(|w| w[1].element.pow(self.p) == w[0].element);
        let certified = links.iter().all(|l| l.element.exponents().all(|e| l.certificates.contains_key(e)));
        powers && certified
    }

    pub fn to_json(&self) -> Value {
        let link = |l: &ChainLink<E>| {
            let certs: serde_json::Map<String, Value> =
                l.certificates.iter().map(|(e, v)| (e.label(), v.clone())).collect();
            json!({"element": l.element.to_string(), "level": l.level, "certificates": certs})
        };
        let outcome = match &self.outcome {
            DescentOutcome::NoIrreducibleFactorizationUpToBound => {
                json!({"kind": "no_irreducible_factorization_up_to_bound"})
            }
            DescentOutcome::TerminatedAtIrreducible(g) => {
                json!({"kind": "terminated_at_irreducible", "element": g.to_string()})
            }
            DescentOutcome::Factored(fs) => json!({
                "kind": "factored",
                "factors": fs.iter().map(|(g, m)| json!({"element": g.to_string(), "multiplicity": m})).collect::<Vec<_>>(),
            }),
            DescentOutcome::Blocked { k, exponent, reason } => json!({
                "kind": "blocked", "k": k, "exponent": exponent.as_ref().map(Exponent::label), "reason": reason,
            }),
            DescentOutcome::Inconclusive { blocking } => json!({"kind": "inconclusive", "blocking": blocking}),
        };
        let mut out = json!({
            "p": self.p,
            "denom_bound": self.denom_bound,
            "chain": self.chain.iter().map(link).collect::<Vec<_>>(),
            "outcome": outcome,
        });
        if let Some(b) = &self.beyond_bound {
            out["beyond_bound"] = link(b);
        }
        if let Some(n) = &self.note {
            out["note"] = json!(n);
        }
        out
    }
}

fn certify_all<E: Exponent>(
    g: &AlgebraElement<E, PrimeField>,
    monoid: &impl MonoidContext<E>,
) -> Result<Result<BTreeMap<E, Value>, String>, AlgebraError> {
    let mut out = BTreeMap::new();
    for e in g.exponents() {
        match monoid.member(e)? {
            ExpVerdict::Yes(c) => {
                out.insert(e.clone(), c);
            }
            ExpVerdict::No(r) => return Ok(Err(format!("{} not in the monoid: {r}", e.label()))),
            ExpVerdict::Unknown => return Ok(Err(format!("membership of {} undecided", e.label()))),
        }
    }
    Ok(Ok(out))
}

/// Every multiset partition of the multiset with the given multiplicities,
/// each as a list of parts (multiplicity vectors). Parts are listed in
/// non-increasing lexicographic order, so each partition appears once.
/// Returns `None` when there are more than `limit` partitions.
pub fn multiset_partitions(counts: &[u32], limit: usize) -> Option<Vec<Vec<Vec<u32>>>> {
    fn rec(rest: &mut Vec<u32>, max: Option<&[u32]>, cur: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>, limit: usize) -> bool {
        if rest.iter().all(|&c| c == 0) {
            out.push(cur.clone());
            return out.len() <= limit;
        }
        let mut part = vec![0u32; rest.len()];
        loop {
            // next vector in 0..=rest, odometer with the first slot most significant
            let mut i = rest.len();
            loop {
                if i == 0 {
                    return true;
                }
                i -= 1;
                if part[i] < rest[i] {
                    part[i] += 1;
                    break;
                }
                part[i] = 0;
            }
            if max.is_some_and(|m| part.as_slice() > m) {
                continue;
            }
            for (r, p) in rest.iter_mut().zip(&part) {
                *r -= p;
            }
            cur.push(part.clone());
            let ok = rec(rest, Some(&part.clone()), cur, out, limit);
            cur.pop();
            for (r, p) in rest.iter_mut().zip(&part) {
                *r += p;
            }
            if !ok {
                return false;
            }
        }
    }
    let mut out = Vec::new();
    let ok = rec(&mut counts.to_vec(), None, &mut Vec::new(), &mut out, limit);
    ok.then_some(out)
}

/// Bound on the grouping enumeration per split attempt.
pub const PARTITION_LIMIT: usize = 200_000;

enum Split {
    Trivial,
    Parts(Vec<PuiseuxElement>),
    Inconclusive(String),
}

enum Stop {
    NoIrreducible { chain: Vec<ChainLink<Rational>>, beyond: ChainLink<Rational> },
    Inconclusive(String),
}

struct Factorer<'a> {
    monoid: &'a PuiseuxContext,
    field: PrimeField,
    denom_bound: u64,
    seed: u64,
    cache: HashMap<Rational, ExpVerdict>,
}

impl Factorer<'_> {
    fn member(&mut self, e: &Rational) -> Result<ExpVerdict, AlgebraError> {
        if let Some(v) = self.cache.get(e) {
            return Ok(v.clone());
        }
        let v = self.monoid.member(e)?;
        self.cache.insert(e.clone(), v.clone());
        Ok(v)
    }

    /// Finest grouping of the irreducible factors of `P(x^m)`, where
    /// `(L, P)` clears `g`, whose groups all have exponents in the monoid at
    /// level `L·m`.
    fn split_at(&mut self, g: &PuiseuxElement, m: u64) -> Result<Split, AlgebraError> {
        let (l, poly) = g.clear_denominators()?;
        let level = l * m;
        let fact = factor_uni_seeded(&poly.inflate(m as usize), self.seed)?;
        let counts: Vec<u32> = fact.factors.iter().map(|(_, e)| *e).collect();
        if counts.iter().sum::<u32>() < 2 {
            return Ok(Split::Trivial);
        }
        let Some(partitions) = multiset_partitions(&counts, PARTITION_LIMIT) else {
            return Ok(Split::Inconclusive(format!("more than {PARTITION_LIMIT} groupings of {g}")));
        };
        let mut lifted: HashMap<Vec<u32>, Option<PuiseuxElement>> = HashMap::new();
        let mut best: Option<Vec<PuiseuxElement>> = None;
        for partition in partitions {
            if partition.len() < 2 || best.as_ref().is_some_and(|b| b.len() >= partition.len()) {
                continue;
            }
            let mut parts = Vec::with_capacity(partition.len());
            for part in &partition {
                if !lifted.contains_key(part) {
                    let prod = fact
                        .factors
                        .iter()
                        .zip(part)
                        .fold(UniPoly::one(poly.field()), |acc, ((q, _), &k)| acc.mul(&q.pow(k as u64)).expect("same field"));
                    let elem = PuiseuxElement::from_uni(&prod, level);
                    let mut ok = true;
                    for e in elem.exponents() {
                        match self.member(e)? {
                            ExpVerdict::Yes(_) => {}
                            ExpVerdict::No(_) => {
                                ok = false;
                                break;
                            }
                            ExpVerdict::Unknown => {
                                return Ok(Split::Inconclusive(format!("membership of {e}")));
                            }
                        }
                    }
                    lifted.insert(part.clone(), ok.then_some(elem));
                }
                match &lifted[part] {
                    Some(elem) => parts.push(elem.clone()),
                    None => break,
                }
            }
            if parts.len() == partition.len() {
                best = Some(parts);
            }
        }
        Ok(match best {
            Some(mut parts) => {
                let unit = PuiseuxElement::monomial(g.field, (), fact.unit, Rational::zero())?;
                parts[0] = parts[0].mul(&unit)?;
                Split::Parts(parts)
            }
            None => Split::Trivial,
        })
    }

    fn link(&mut self, g: &PuiseuxElement) -> Result<Result<ChainLink<Rational>, String>, AlgebraError> {
        let level = g.level()?;
        Ok(certify_all(g, self.monoid)?.map(|certificates| ChainLink { element: g.clone(), level, certificates }))
    }

    /// Irreducible-at-bound factors of a monomial `x^s`, read off a
    /// membership certificate of `s` and refined by atom checks.
    fn monomial_factors(&mut self, s: &Rational) -> Result<Result<Vec<(PuiseuxElement, u32)>, Stop>, AlgebraError> {
        let monoid = &self.monoid.monoid;
        let cert = match monoid.membership(s, self.monoid.coeff_bound)? {
            Membership::Yes(c) => c,
            _ => return Ok(Err(Stop::Inconclusive(format!("membership of {s}")))),
        };
        let mut stack: Vec<(GenLabel, u64)> = cert.into_iter().collect();
        let mut atoms: Certificate = Certificate::new();
        while let Some((label, k)) = stack.pop() {
            match monoid.is_atom(label, self.monoid.coeff_bound)? {
                AtomCheck::AtomUpTo { .. } => *atoms.entry(label).or_default() += k,
                AtomCheck::NonAtom(sub) => stack.extend(sub.into_iter().map(|(l, j)| (l, j * k))),
            }
        }
        let field = self.field;
        Ok(Ok(atoms
            .into_iter()
            .map(|(label, k)| {
                let e = monoid.generator(label).expect("materialised");
                (PuiseuxElement::monomial(field, (), 1, e).expect("rational"), k as u32)
            })
            .collect()))
    }

    /// Factors `g` into elements irreducible up to the denominator bound.
    /// `chain` is the descent path that led to `g`.
    fn process(
        &mut self,
        g: &PuiseuxElement,
        chain: &mut Vec<ChainLink<Rational>>,
    ) -> Result<Result<Vec<(PuiseuxElement, u32)>, Stop>, AlgebraError> {
        if g.len() == 1 {
            let (e, _) = g.terms().next().expect("one term");
            if e.is_zero() {
                return Ok(Ok(Vec::new()));
            }
            return self.monomial_factors(&e.clone());
        }
        match self.split_at(g, 1)? {
            Split::Parts(parts) => return self.process_parts(&parts),
            Split::Inconclusive(q) => return Ok(Err(Stop::Inconclusive(q))),
            Split::Trivial => {}
        }
        let level = g.level()?;
        match g.pth_root(self.monoid)? {
            RootOutcome::Root { root, certificates } => {
                let root_level = root.level()?;
                let link = ChainLink { element: root.clone(), level: root_level, certificates };
                if root_level > self.denom_bound {
                    return Ok(Err(Stop::NoIrreducible { chain: chain.clone(), beyond: link }));
                }
                chain.push(link);
                let p = self.field.p() as u32;
                return Ok(self.process(&root, chain)?.map(|fs| fs.into_iter().map(|(h, m)| (h, m * p)).collect()));
            }
            RootOutcome::Inconclusive { exponent } => {
                return Ok(Err(Stop::Inconclusive(format!("membership of {exponent}"))));
            }
            RootOutcome::NoRoot { .. } => {}
        }
        for m in 2..=self.denom_bound / level {
            match self.split_at(g, m)? {
                Split::Parts(parts) => return self.process_parts(&parts),
                Split::Inconclusive(q) => return Ok(Err(Stop::Inconclusive(q))),
                Split::Trivial => {}
            }
        }
        Ok(Ok(vec![(g.clone(), 1)]))
    }

    fn process_parts(&mut self, parts: &[PuiseuxElement]) -> Result<Result<Vec<(PuiseuxElement, u32)>, Stop>, AlgebraError> {
        let mut all: Vec<(PuiseuxElement, u32)> = Vec::new();
        for part in parts {
            let mut chain = match self.link(part)? {
                Ok(l) => vec![l],
                Err(q) => return Ok(Err(Stop::Inconclusive(q))),
            };
            match self.process(part, &mut chain)? {
                Ok(fs) => {
                    for (h, m) in fs {
                        match all.iter_mut().find(|(x, _)| *x == h) {
                            Some((_, k)) => *k += m,
                            None => all.push((h, m)),
                        }
                    }
                }
                Err(stop) => return Ok(Err(stop)),
            }
        }
        Ok(Ok(all))
    }
}

/// Searches for a factorisation of `f` into elements that are irreducible
/// up to the denominator bound `D`.
///
/// The element is cleared to a polynomial `P` at its level `L`, `P` is
/// factored over GF(p), and the finest grouping of its factors whose
/// products have all exponents (divided by `L`) in the monoid gives a
/// splitting. A piece that does not split is tested for a Frobenius root;
/// a root inside the bound continues the descent chain, a root beyond it
/// ends the search with `NoIrreducibleFactorizationUpToBound`. A piece with
/// no root is re-examined at every level `L·m <= D`; if nothing splits, it
/// is irreducible up to the bound.
pub fn factor_in_algebra(
    f: &PuiseuxElement,
    monoid: &PuiseuxContext,
    denom_bound: u64,
) -> Result<DescentReport<Rational>, AlgebraError> {
    factor_in_algebra_seeded(f, monoid, denom_bound, DEFAULT_SEED)
}

pub fn factor_in_algebra_seeded(
    f: &PuiseuxElement,
    monoid: &PuiseuxContext,
    denom_bound: u64,
    seed: u64,
) -> Result<DescentReport<Rational>, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroElement);
    }
    let p = f.field.p();
    let mut fac = Factorer { monoid, field: f.field, denom_bound, seed, cache: HashMap::new() };
    let report = |chain, beyond_bound, outcome| DescentReport { p, denom_bound, chain, beyond_bound, outcome, note: None };
    let mut chain = match fac.link(f)? {
        Ok(l) => vec![l],
        Err(q) => return Ok(report(Vec::new(), None, DescentOutcome::Inconclusive { blocking: q })),
    };
    Ok(match fac.process(f, &mut chain)? {
        Ok(factors) => {
            let chain = chain.into_iter().take(1).collect();
            if factors.len() == 1 && factors[0].1 == 1 {
                report(chain, None, DescentOutcome::TerminatedAtIrreducible(factors[0].0.clone()))
            } else {
                report(chain, None, DescentOutcome::Factored(factors))
            }
        }
        Err(Stop::NoIrreducible { chain, beyond }) => {
            report(chain, Some(beyond), DescentOutcome::NoIrreducibleFactorizationUpToBound)
        }
        Err(Stop::Inconclusive(q)) => report(chain, None, DescentOutcome::Inconclusive { blocking: q }),
    })
}

/// `X^(1/p^k) + Y^(1/p^k) + X^(1/p^k) Y^(1/p^k)` over GF(p).
pub fn thm43_element(p: u64, k: u32) -> Result<PairElement, AlgebraError> {
    let field = PrimeField::new(p)?;
    let r = Rational::inverse_power(p, k);
    let z = Rational::zero();
    PairElement::from_terms(
        field,
        (),
        vec![(RatPair(r.clone(), z.clone()), 1), (RatPair(z, r.clone()), 1), (RatPair(r.clone(), r), 1)],
    )
}

/// Depth at which `M_p` is materialised for the descent.
pub fn thm43_depth(k_max: u32) -> usize {
    crate::puiseux::DEFAULT_DEPTH.max(k_max as usize + 2)
}

/// Runs the Frobenius descent from `X + Y + XY` over `M_p × M_p`.
pub fn thm43_descent(p: u64, k_max: u32) -> Result<DescentReport<RatPair>, AlgebraError> {
    let mp = PuiseuxMonoid::new(Family::Mp(p), thm43_depth(k_max))?;
    let monoid = ProductContext { monoid: ProductMonoid::new(vec![mp.clone(), mp]), coeff_bound: crate::puiseux::DEFAULT_COEFF_BOUND };
    thm43_descent_in(p, k_max, &monoid)
}

/// The same descent over an arbitrary product context, e.g. `N_0 × N_0`.
pub fn thm43_descent_in(p: u64, k_max: u32, monoid: &ProductContext) -> Result<DescentReport<RatPair>, AlgebraError> {
    if k_max == 0 {
        return Err(AlgebraError::NotApplicable("k_max must be at least 1"));
    }
    let start = thm43_element(p, 0)?;
    let denom_bound = p.pow(k_max);
    let mut report = DescentReport {
        p,
        denom_bound,
        chain: Vec::new(),
        beyond_bound: None,
        outcome: DescentOutcome::NoIrreducibleFactorizationUpToBound,
        note: Some("shape verified on explored set".to_string()),
    };
    match certify_all(&start, monoid)? {
        Ok(certificates) => report.chain.push(ChainLink { element: start.clone(), level: 1, certificates }),
        Err(q) => {
            report.outcome = DescentOutcome::Inconclusive { blocking: q };
            return Ok(report);
        }
    }
    let mut current = start;
    for k in 1..=k_max {
        match current.pth_root(monoid)? {
            RootOutcome::Root { root, certificates } => {
                if root != thm43_element(p, k)? {
                    report.outcome = DescentOutcome::Blocked { k: k as usize, exponent: None, reason: "root differs from the expected shape".into() };
                    return Ok(report);
                }
                let level = root.level()?;
                report.chain.push(ChainLink { element: root.clone(), level, certificates });
                current = root;
            }
            RootOutcome::NoRoot { exponent, reason } => {
                report.outcome = DescentOutcome::Blocked { k: k as usize, exponent, reason };
                return Ok(report);
            }
            RootOutcome::Inconclusive { exponent } => {
                report.outcome = DescentOutcome::Inconclusive { blocking: format!("membership of {}", exponent.label()) };
                return Ok(report);
            }
        }
    }
    if let RootOutcome::Root { root, certificates } = current.pth_root(monoid)? {
        let level = root.level()?;
        report.beyond_bound = Some(ChainLink { element: root, level, certificates });
    }
    Ok(report)
}

/// Whether every exponent of `f * g` arises from exactly one pair of terms.
pub fn cross_terms_distinct<E: Exponent, F: CoeffField>(f: &AlgebraElement<E, F>, g: &AlgebraElement<E, F>) -> bool {
    let mut seen = std::collections::HashSet::new();
    f.exponents().all(|v| g.exponents().all(|w| seen.insert(v.add(w))))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Thm32Step {
    pub k: usize,
    /// `x^a + x^b = x^(kc) (x^(a-kc) + x^(b-kc))`.
    pub identity: bool,
    pub a_cert: Option<lex::LexCertificate>,
    pub b_cert: Option<lex::LexCertificate>,
    /// `c' = (a - (k+2)c - s_(k+2)) + s_(k+2)` with `2c + c' = a - kc`, and
    /// the analogous `d'` for `b`.
    pub c_prime: OmegaVector,
    pub d_prime: OmegaVector,
    pub divisibility: bool,
    /// Cross terms of `x^(kc)·f_k` and `x^(2c)·(x^c' + x^d')` are distinct.
    pub claim1: bool,
}

impl Thm32Step {
    pub fn passed(&self) -> bool {
        self.identity && self.a_cert.is_some() && self.b_cert.is_some() && self.divisibility && self.claim1
    }

    pub fn to_json(&self) -> Value {
        let cert = |c: &Option<lex::LexCertificate>| c.as_ref().map(lex_certificate_json);
        json!({
            "k": self.k,
            "identity": self.identity,
            "a_minus_kc": cert(&self.a_cert),
            "b_minus_kc": cert(&self.b_cert),
            "c_prime": self.c_prime.to_string(),
            "d_prime": self.d_prime.to_string(),
            "two_c_divides": self.divisibility,
            "cross_terms_distinct": self.claim1,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Thm32Report {
    pub truncation: usize,
    pub field: String,
    pub steps: Vec<Thm32Step>,
}

impl Thm32Report {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(Thm32Step::passed)
    }
}

/// Checks the factorisation `x^a + x^b = x^(kc)(x^(a-kc) + x^(b-kc))` and
/// the divisibility of `x^(a-kc)` and `x^(b-kc)` by `x^(2c)` for
/// `1 <= k <= k_max`, at truncation `N`.
pub fn thm32_witness_chain<F: CoeffField>(truncation: usize, field: F, k_max: usize) -> Result<Thm32Report, AlgebraError> {
    if truncation < 2 || k_max < 1 || k_max > truncation - 2 {
        return Err(AlgebraError::OutOfRange { k_max, truncation });
    }
    let table = SymbolTable::new(truncation);
    let unit = |s| OmegaVector::unit(table, s);
    let (a, b, c) = (unit(Symbol::A)?, unit(Symbol::B)?, unit(Symbol::C)?);
    let one = field.one();
    let mono = |e: &OmegaVector| AlgebraElement::monomial(field.clone(), table, one.clone(), e.clone());
    let binom = |u: &OmegaVector, v: &OmegaVector| mono(u)?.add(&mono(v)?);
    let lhs = binom(&a, &b)?;
    let mut steps = Vec::new();
    for k in 1..=k_max {
        let kc = c.scale(k as i64);
        let (a_k, b_k) = (a.checked_sub(&kc)?, b.checked_sub(&kc)?);
        let f_k = binom(&a_k, &b_k)?;
        let identity = mono(&kc)?.mul(&f_k)? == lhs;
        let cert = |x: &OmegaVector| match lex::membership_lex(x) {
            LexMembership::Yes(c) => Some(c),
            LexMembership::No => None,
        };
        let k2 = k + 2;
        let c_prime_cert: lex::LexCertificate = [(LexAtom::ARel(k2), 1), (LexAtom::S(k2), 1)].into();
        let d_prime_cert: lex::LexCertificate = [(LexAtom::BRel(k2), 1), (LexAtom::T(k2), 1)].into();
        let c_prime = lex::evaluate(&c_prime_cert, table)?;
        let d_prime = lex::evaluate(&d_prime_cert, table)?;
        let two_c = c.scale(2);
        let divisibility = two_c.checked_add(&c_prime)? == a_k
            && two_c.checked_add(&d_prime)? == b_k
            && mono(&two_c)?.mul(&binom(&c_prime, &d_prime)?)? == f_k;
        let claim1 = cross_terms_distinct(&mono(&kc)?, &f_k)
            && cross_terms_distinct(&f_k, &mono(&kc)?)
            && cross_terms_distinct(&binom(&c_prime, &d_prime)?, &mono(&two_c)?);
        steps.push(Thm32Step { k, identity, a_cert: cert(&a_k), b_cert: cert(&b_k), c_prime, d_prime, divisibility, claim1 });
    }
    Ok(Thm32Report { truncation, field: field.name(), steps })
}
