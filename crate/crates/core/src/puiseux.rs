//! Puiseux monoids given by closed-form generator families.
//!
//! Membership is decided by a bounded search that returns one of three
//! verdicts. `Yes` carries an exact certificate (generator label to
//! multiplicity), `No` is only ever returned through a valuation obstruction
//! that holds for every generator of the family, and everything else is
//! `Unknown` at the searched depth and coefficient bound.
//!
//! The search walks the materialised generators in increasing order of
//! value. Small generators carry the most negative valuations, so fixing them
//! first lets the valuation floor of the still-unused generators prune the
//! residual early. Failed `(position, residual)` states are memoised.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, nth_odd_prime, nth_prime};
use crate::rational::{int_valuation, Rational, Valuation};

pub const DEFAULT_DEPTH: usize = 12;
pub const DEFAULT_COEFF_BOUND: u64 = 64;

/// Numerator primes only sharpen pruning, so a short trial division is
/// enough for them.
const NUMERATOR_PRIME_LIMIT: u64 = 1 << 12;

/// Largest trial divisor used when looking for primes in a query's
/// denominator.
const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("generator index {0} is outside the family's index domain")]
    IndexOutOfDomain(GenLabel),
    #[error("generator {0} is not strictly positive")]
    NonPositiveGenerator(Rational),
    #[error("membership query for negative value {0}")]
    NegativeQuery(Rational),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("truncation depth must be positive")]
    ZeroDepth,
    #[error("explicit family needs at least one generator")]
    EmptyFamily,
    #[error("generator {0} is not materialised at depth {1}")]
    NotMaterialised(GenLabel, usize),
    #[error("product element has {got} coordinates, monoid has {expected} factors")]
    ArityMismatch { expected: usize, got: usize },
}

/// Label of a generator. Families indexed by one sequence use `G(n)`; the
/// two-sequence family uses `A(n)` and `B(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenLabel {
    G(u32),
    A(u32),
    B(u32),
}

impl GenLabel {
    pub fn index(self) -> u32 {
        match self {
            GenLabel::G(n) | GenLabel::A(n) | GenLabel::B(n) => n,
        }
    }
}

impl fmt::Display for GenLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenLabel::G(n) => write!(f, "g{n}"),
            GenLabel::A(n) => write!(f, "a{n}"),
            GenLabel::B(n) => write!(f, "b{n}"),
        }
    }
}

/// Generator label to multiplicity.
pub type Certificate = BTreeMap<GenLabel, u64>;

/// Certificate keyed by label text, for reports.
pub fn certificate_json(cert: &Certificate) -> serde_json::Value {
    let map: BTreeMap<String, u64> = cert.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    serde_json::to_value(map).expect("string keys")
}

/// Lower bound on the p-adic valuation of every generator of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Floor {
    Bounded(i64),
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `1/(2^n q_n)`, `q_n` the n-th odd prime.
    Grams,
    /// `1/(p^n p_n)` over the indices with `p_n != p`, `p_n` the n-th prime.
    Mp(u64),
    /// `a_n, b_n = (2^n 3^l_n -+ 1) / (2^2n 3^l_n)` with `l_n = (n+1)(n+2)/2`.
    Prop51,
    Explicit(Vec<Rational>),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Grams => f.write_str("grams"),
            Family::Mp(p) => write!(f, "mp:{p}"),
            Family::Prop51 => f.write_str("prop51"),
            Family::Explicit(gens) => {
                f.write_str("explicit[")?;
                for (i, g) in gens.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Exponent `l_n` in the prop51 family.
pub fn prop51_ell(n: u32) -> u32 {
    (n + 1) * (n + 2) / 2
}

fn prop51_term(n: u32, sign: i64) -> Rational {
    let two_n = num_traits::pow(BigInt::from(2), n as usize);
    let three_l = num_traits::pow(BigInt::from(3), prop51_ell(n) as usize);
    let numer = &two_n * &three_l + BigInt::from(sign);
    let denom = &two_n * &two_n * &three_l;
    Rational::new(numer, denom).expect("positive denominator")
}

impl Family {
    pub fn validate(&self) -> Result<(), MonoidError> {
        match self {
            Family::Mp(p) if !arith::is_prime(*p) => Err(MonoidError::NotPrime(*p)),
            Family::Explicit(gens) if gens.is_empty() => Err(MonoidError::EmptyFamily),
            Family::Explicit(gens) => match gens.iter().find(|g| !g.is_positive()) {
                Some(g) => Err(MonoidError::NonPositiveGenerator(g.clone())),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }

    /// Closed-form value of the generator with the given label.
    pub fn generator(&self, label: GenLabel) -> Result<Rational, MonoidError> {
        let out_of_domain = Err(MonoidError::IndexOutOfDomain(label));
        match (self, label) {
            (_, l) if l.index() == 0 => out_of_domain,
            (Family::Grams, GenLabel::G(n)) => {
                let d = BigInt::from(nth_odd_prime(n as usize)) << (n as usize);
                Ok(Rational::new(BigInt::one(), d).expect("nonzero"))
            }
            (Family::Mp(p), GenLabel::G(n)) => {
                let pn = nth_prime(n as usize);
                if pn == *p {
                    return out_of_domain;
                }
                let d = num_traits::pow(BigInt::from(*p), n as usize) * BigInt::from(pn);
                Ok(Rational::new(BigInt::one(), d).expect("nonzero"))
            }
            (Family::Prop51, GenLabel::A(n)) => Ok(prop51_term(n, -1)),
            (Family::Prop51, GenLabel::B(n)) => Ok(prop51_term(n, 1)),
            (Family::Explicit(gens), GenLabel::G(n)) => match gens.get(n as usize - 1) {
                Some(g) => Ok(g.clone()),
                None => out_of_domain,
            },
            _ => out_of_domain,
        }
    }

    /// The first `depth` generator labels of the family (for prop51, the
    /// indices `1..=depth` of both sequences).
    pub fn labels(&self, depth: usize) -> Vec<GenLabel> {
        match self {
            Family::Grams => (1..=depth as u32).map(GenLabel::G).collect(),
            Family::Mp(p) => (1u32..)
                .filter(|&n| nth_prime(n as usize) != *p)
                .take(depth)
                .map(GenLabel::G)
                .collect(),
            Family::Prop51 => (1..=depth as u32)
                .flat_map(|n| [GenLabel::A(n), GenLabel::B(n)])
                .collect(),
            Family::Explicit(gens) => (1..=depth.min(gens.len()) as u32).map(GenLabel::G).collect(),
        }
    }

    /// Lower bound on `v_p(g)` over every generator of the family.
    pub fn valuation_floor(&self, p: u64) -> Floor {
        match self {
            Family::Grams => {
                if p == 2 {
                    Floor::Unbounded
                } else {
                    Floor::Bounded(-1)
                }
            }
            Family::Mp(r) => {
                if p == *r {
                    Floor::Unbounded
                } else {
                    Floor::Bounded(-1)
                }
            }
            Family::Prop51 => {
                if p == 2 || p == 3 {
                    Floor::Unbounded
                } else {
                    Floor::Bounded(0)
                }
            }
            Family::Explicit(gens) => Floor::Bounded(
                gens.iter()
                    .filter_map(|g| g.padic_val(p).finite())
                    .min()
                    .unwrap_or(0),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub label: GenLabel,
    pub value: Rational,
}

/// Why a value cannot lie in the monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// `v_p(q) < floor`, while every generator has `v_p >= floor`.
    Valuation { prime: u64, floor: i64, valuation: i64 },
    /// The value is negative; the monoid is positive.
    Negative,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::Valuation { prime, floor, valuation } => {
                write!(f, "v_{prime} = {valuation} < {floor} = floor over all generators")
            }
            Obstruction::Negative => f.write_str("negative difference"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Yes(Certificate),
    No(Obstruction),
    Unknown { depth: usize, coeff_bound: u64 },
}

impl Membership {
    pub fn is_yes(&self) -> bool {
        matches!(self, Membership::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Membership::No(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Membership::Yes(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomCheck {
    NonAtom(Certificate),
    AtomUpTo { depth: usize, coeff_bound: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AccpStatus {
    /// `base/2^n` and `base/2^(n+1)` are both certified members, so
    /// `base/2^n = base/2^(n+1) + base/2^(n+1)` gives a strict containment.
    StrictAscent { upper: Certificate, difference: Certificate },
    NotAscending { element: Rational, obstruction: Obstruction },
    Inconclusive { element: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccpStep {
    pub n: u32,
    pub status: AccpStatus,
}

/// A Puiseux monoid with its first `depth` generators materialised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuiseuxMonoid {
    family: Family,
    depth: usize,
    generators: Vec<Generator>,
    /// Primes found in the numerators and denominators of the generators.
    primes: Vec<u64>,
}

impl PuiseuxMonoid {
    pub fn new(family: Family, depth: usize) -> Result<Self, MonoidError> {
        if depth == 0 {
            return Err(MonoidError::ZeroDepth);
        }
        family.validate()?;
        let generators = family
            .labels(depth)
            .into_iter()
            .map(|label| {
                let value = family.generator(label).expect("label drawn from the domain");
                Generator { label, value }
            })
            .collect::<Vec<Generator>>();
        let primes = generator_primes(&generators);
        Ok(PuiseuxMonoid { family, depth, generators, primes })
    }

    pub fn explicit(generators: Vec<Rational>) -> Result<Self, MonoidError> {
        let depth = generators.len();
        if depth == 0 {
            return Err(MonoidError::EmptyFamily);
        }
        Self::new(Family::Explicit(generators), depth)
    }

    /// The free monoid of rank one, `<1>`.
    pub fn naturals() -> Self {
        Self::explicit(vec![Rational::one()]).expect("valid")
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, label: GenLabel) -> Result<Rational, MonoidError> {
        self.family.generator(label)
    }

    /// Re-evaluates a certificate from the closed form.
    pub fn evaluate(&self, cert: &Certificate) -> Result<Rational, MonoidError> {
        let mut sum = Rational::zero();
        for (label, &k) in cert {
            sum = sum + self.family.generator(*label)?.mul_int(k);
        }
        Ok(sum)
    }

    /// Depth-independent valuation obstruction for `q`, if one exists.
    pub fn obstruction(&self, q: &Rational) -> Option<Obstruction> {
        if q.is_zero() {
            return None;
        }
        let mut primes = arith::small_prime_divisors(q.den(), TRIAL_DIVISION_LIMIT);
        if let Family::Explicit(_) = self.family {
            primes.extend(self.primes.iter().copied());
        }
        primes.sort_unstable();
        primes.dedup();
        for p in primes {
            if let (Floor::Bounded(floor), Valuation::Finite(v)) =
                (self.family.valuation_floor(p), q.padic_val(p))
            {
                if v < floor {
                    return Some(Obstruction::Valuation { prime: p, floor, valuation: v });
                }
            }
        }
        None
    }

    pub fn membership(&self, q: &Rational, coeff_bound: u64) -> Result<Membership, MonoidError> {
        if q.is_negative() {
            return Err(MonoidError::NegativeQuery(q.clone()));
        }
        if q.is_zero() {
            return Ok(Membership::Yes(Certificate::new()));
        }
        if let Some(obs) = self.obstruction(q) {
            return Ok(Membership::No(obs));
        }
        let search = Search::new(self.generators.clone(), coeff_bound, &self.primes, q);
        Ok(match search.find() {
            Some(cert) => Membership::Yes(cert),
            None => Membership::Unknown { depth: self.depth, coeff_bound },
        })
    }

    /// Whether `x` divides `y`, i.e. `y - x` is a member.
    pub fn divides(&self, x: &Rational, y: &Rational, coeff_bound: u64) -> Result<Membership, MonoidError> {
        let d = y - x;
        if d.is_negative() {
            return Ok(Membership::No(Obstruction::Negative));
        }
        self.membership(&d, coeff_bound)
    }

    /// Tries to write the generator `label` over the other materialised
    /// generators.
    pub fn is_atom(&self, label: GenLabel, coeff_bound: u64) -> Result<AtomCheck, MonoidError> {
        let target = self
            .generators
            .iter()
            .find(|g| g.label == label)
            .ok_or(MonoidError::NotMaterialised(label, self.depth))?
            .value
            .clone();
        let others = self.generators.iter().filter(|g| g.label != label).cloned().collect();
        Ok(match Search::new(others, coeff_bound, &self.primes, &target).find() {
            Some(cert) => AtomCheck::NonAtom(cert),
            None => AtomCheck::AtomUpTo { depth: self.depth, coeff_bound },
        })
    }

    /// For `n < steps`, certifies `base/2^n + M ⊊ base/2^(n+1) + M`.
    pub fn accp_chain_check(&self, base: &Rational, steps: u32, coeff_bound: u64) -> Result<Vec<AccpStep>, MonoidError> {
        let mut out = Vec::with_capacity(steps as usize);
        for n in 0..steps {
            let upper = base.div_int(1 << n);
            let difference = base.div_int(1 << (n + 1));
            let status = match self.membership(&upper, coeff_bound)? {
                Membership::No(obstruction) => AccpStatus::NotAscending { element: upper, obstruction },
                Membership::Unknown { .. } => AccpStatus::Inconclusive { element: upper },
                Membership::Yes(upper_cert) => match self.membership(&difference, coeff_bound)? {
                    Membership::Yes(cert) if !difference.is_zero() => {
                        AccpStatus::StrictAscent { upper: upper_cert, difference: cert }
                    }
                    Membership::Yes(_) => AccpStatus::NotAscending {
                        element: difference,
                        obstruction: Obstruction::Negative,
                    },
                    Membership::No(obstruction) => AccpStatus::NotAscending { element: difference, obstruction },
                    Membership::Unknown { .. } => AccpStatus::Inconclusive { element: difference },
                },
            };
            out.push(AccpStep { n, status });
        }
        Ok(out)
    }

    /// All decompositions of `q` over the materialised generators that are
    /// not shown to be non-atoms, within the coefficient bound. Sorted,
    /// without duplicates.
    pub fn factor_into_atoms(&self, q: &Rational, coeff_bound: u64) -> Result<Vec<Certificate>, MonoidError> {
        if q.is_negative() {
            return Err(MonoidError::NegativeQuery(q.clone()));
        }
        let mut atoms = Vec::new();
        for g in &self.generators {
            if let AtomCheck::AtomUpTo { .. } = self.is_atom(g.label, coeff_bound)? {
                atoms.push(g.clone());
            }
        }
        let mut all = Search::new(atoms, coeff_bound, &self.primes, q).find_all();
        all.sort();
        all.dedup();
        Ok(all)
    }
}

fn generator_primes(gens: &[Generator]) -> Vec<u64> {
    let mut primes: Vec<u64> = gens
        .iter()
        .flat_map(|g| {
            let mut v = arith::small_prime_divisors(g.value.den(), TRIAL_DIVISION_LIMIT);
            v.extend(arith::small_prime_divisors(g.value.numer(), NUMERATOR_PRIME_LIMIT));
            v
        })
        .collect();
    primes.sort_unstable();
    primes.dedup();
    primes
}

/// Bounded search for nonnegative integer combinations of a fixed
/// generator list. Values are scaled by a common denominator so the search
/// runs on integers.
struct Search {
    labels: Vec<GenLabel>,
    /// Scaled generator values, ascending.
    ints: Vec<BigInt>,
    target: BigInt,
    coeff_bound: u64,
    primes: Vec<u64>,
    /// `vals[i][j]`: valuation of `ints[j]` at `primes[i]`.
    vals: Vec<Vec<i64>>,
    /// `units[i][j]`: `ints[j]` with its `primes[i]` part removed.
    units: Vec<Vec<BigInt>>,
    /// `pows[i][k] = primes[i]^k`.
    pows: Vec<Vec<BigInt>>,
}

impl Search {
    fn new(gens: Vec<Generator>, coeff_bound: u64, primes: &[u64], target: &Rational) -> Self {
        let scale = gens.iter().fold(target.den().clone(), |acc, g| acc.lcm(g.value.den()));
        let scaled = |x: &Rational| x.numer() * (&scale / x.den());
        let mut pairs: Vec<(BigInt, GenLabel)> = gens.iter().map(|g| (scaled(&g.value), g.label)).collect();
        pairs.sort();
        let (ints, labels): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        // Primes of the target's denominator that no generator supplies
        // still constrain the residual.
        let mut primes = primes.to_vec();
        for p in arith::small_prime_divisors(target.den(), TRIAL_DIVISION_LIMIT) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
        let mut vals = Vec::with_capacity(primes.len());
        let mut units = Vec::with_capacity(primes.len());
        let mut pows = Vec::with_capacity(primes.len());
        for &p in &primes {
            let pb = BigInt::from(p);
            let v: Vec<i64> = ints.iter().map(|g| int_valuation(g, p)).collect();
            let top = v.iter().copied().max().unwrap_or(0);
            units.push(ints.iter().zip(&v).map(|(g, &e)| g / pb.pow(e as u32)).collect());
            pows.push((0..=top).map(|k| pb.pow(k as u32)).collect());
            vals.push(v);
        }
        Search { labels, ints, target: scaled(target), coeff_bound, primes, vals, units, pows }
    }

    fn find(&self) -> Option<Certificate> {
        let mut state = State::new(false);
        let mut coeffs = vec![0u64; self.ints.len()];
        if self.dfs(&mut state, 0, self.target.clone(), &mut coeffs) {
            state.found.pop()
        } else {
            None
        }
    }

    fn find_all(&self) -> Vec<Certificate> {
        let mut state = State::new(true);
        let mut coeffs = vec![0u64; self.ints.len()];
        self.dfs(&mut state, 0, self.target.clone(), &mut coeffs);
        state.found
    }

    /// Whether `r` can still be reached using generators in `pos..end`.
    fn feasible(&self, pos: usize, end: usize, r: &BigInt) -> bool {
        if end <= pos {
            return false;
        }
        (0..self.primes.len()).all(|i| {
            let floor = self.vals[i][pos..end].iter().copied().min().expect("nonempty range");
            floor == 0 || r.is_multiple_of(&self.pows[i][floor as usize])
        })
    }

    /// The coefficients `c` at `pos` that keep `r - c*g` within reach of the
    /// later generators below `end`, as `(least, step)`; `None` when there
    /// are none.
    fn congruence(&self, pos: usize, end: usize, r: &BigInt) -> Option<(u64, u64)> {
        let g = &self.ints[pos];
        if end == pos + 1 {
            let (c, rem) = r.div_rem(g);
            return if rem.is_zero() { Some((c.to_u64()?, u64::MAX)) } else { None };
        }
        let mut residue = BigInt::zero();
        let mut modulus = BigInt::one();
        for i in 0..self.primes.len() {
            let v = self.vals[i][pos];
            let floor = self.vals[i][pos + 1..end].iter().copied().min().expect("nonempty range");
            if floor <= v {
                continue;
            }
            // c*g = r modulo p^floor, i.e. c = (r/p^v) / unit modulo p^(floor - v).
            let (head, rem) = r.div_rem(&self.pows[i][v as usize]);
            if !rem.is_zero() {
                return None;
            }
            let m = BigInt::from(self.primes[i]).pow((floor - v) as u32);
            let inv = self.units[i][pos].mod_floor(&m).modinv(&m)?;
            let c = (head * inv).mod_floor(&m);
            let shift = ((c - &residue) * modulus.modinv(&m)?).mod_floor(&m);
            residue += &modulus * shift;
            modulus *= m;
        }
        Some((residue.to_u64()?, modulus.to_u64().unwrap_or(u64::MAX)))
    }

    /// Returns true when a solution was recorded and the search should stop.
    fn dfs(&self, state: &mut State, pos: usize, r: BigInt, coeffs: &mut Vec<u64>) -> bool {
        if r.is_zero() {
            let cert = coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, &c)| (self.labels[i], c))
                .collect();
            state.found.push(cert);
            return !state.collect_all;
        }
        if pos == self.ints.len() || state.failed.contains(&(pos, r.clone())) {
            return false;
        }
        let end = self.ints.partition_point(|g| g <= &r);
        if !self.feasible(pos, end, &r) {
            state.failed.insert((pos, r));
            return false;
        }
        let g = &self.ints[pos];
        let max_c = (&r / g).to_u64().unwrap_or(u64::MAX).min(self.coeff_bound);
        let before = state.found.len();
        if let Some((start, step)) = self.congruence(pos, end, &r) {
            let mut c = start;
            while c <= max_c {
                coeffs[pos] = c;
                if self.dfs(state, pos + 1, &r - g * c, coeffs) {
                    coeffs[pos] = 0;
                    return true;
                }
                c = match c.checked_add(step) {
                    Some(next) => next,
                    None => break,
                };
            }
        }
        coeffs[pos] = 0;
        if state.found.len() == before {
            state.failed.insert((pos, r));
        }
        false
    }
}

struct State {
    collect_all: bool,
    found: Vec<Certificate>,
    failed: HashSet<(usize, BigInt)>,
}

impl State {
    fn new(collect_all: bool) -> Self {
        State { collect_all, found: Vec::new(), failed: HashSet::new() }
    }
}

/// Direct product of Puiseux monoids; membership is componentwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductMonoid {
    factors: Vec<PuiseuxMonoid>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductMembership {
    pub components: Vec<Membership>,
}

impl ProductMembership {
    /// Conjunction of the component verdicts: any `No` wins, then any
    /// `Unknown`.
    pub fn verdict(&self) -> Verdict {
        if self.components.iter().any(Membership::is_no) {
            Verdict::No
        } else if self.components.iter().all(Membership::is_yes) {
            Verdict::Yes
        } else {
            Verdict::Unknown
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl From<&Membership> for Verdict {
    fn from(m: &Membership) -> Self {
        match m {
            Membership::Yes(_) => Verdict::Yes,
            Membership::No(_) => Verdict::No,
            Membership::Unknown { .. } => Verdict::Unknown,
        }
    }
}

impl ProductMonoid {
    pub fn new(factors: Vec<PuiseuxMonoid>) -> Self {
        ProductMonoid { factors }
    }

    /// Appends `k` copies of the free monoid `N_0`.
    pub fn with_free_rank(mut self, k: usize) -> Self {
        self.factors.extend(std::iter::repeat_with(PuiseuxMonoid::naturals).take(k));
        self
    }

    pub fn factors(&self) -> &[PuiseuxMonoid] {
        &self.factors
    }

    pub fn membership(&self, x: &[Rational], coeff_bound: u64) -> Result<ProductMembership, MonoidError> {
        if x.len() != self.factors.len() {
            return Err(MonoidError::ArityMismatch { expected: self.factors.len(), got: x.len() });
        }
        let components = self
            .factors
            .iter()
            .zip(x)
            .map(|(m, q)| m.membership(q, coeff_bound))
            .collect::<Result<_, _>>()?;
        Ok(ProductMembership { components })
    }
}
