//! Polynomials over prime fields GF(p): dense univariate arithmetic,
//! irreducibility, factorisation, and a bounded bivariate irreducibility
//! oracle.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::{euler_phi, factor_u64, is_prime, mod_pow};

/// Seed for equal-degree splitting when none is supplied.
pub const DEFAULT_SEED: u64 = 0x5eed_a70c;

/// Largest candidate count the bivariate oracle will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomials over GF({0}) and GF({1})")]
    FieldMismatch(u64, u64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("expected a non-constant polynomial")]
    Constant,
    #[error("gcd({0}, {1}) != 1")]
    NotCoprime(u64, u64),
    #[error("modulus must exceed 1")]
    BadModulus,
    #[error("out of brute-force range: {0} candidates")]
    OutOfRange(u128),
    #[error("malformed polynomial `{0}`")]
    Malformed(String),
}

/// The field of integers modulo a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, PolyError> {
        if is_prime(p) && p < (1 << 32) {
            Ok(PrimeField { p })
        } else {
            Err(PolyError::NotPrime(p))
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        mod_pow(a, e, self.p)
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "zero has no inverse");
        self.pow(a, self.p - 2)
    }
}

/// Dense univariate polynomial, coefficients from degree 0 upward with no
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl UniPoly {
    pub fn new(field: PrimeField, coeffs: Vec<u64>) -> Self {
        let mut f = UniPoly { field, coeffs: coeffs.into_iter().map(|c| c % field.p).collect() };
        f.trim();
        f
    }

    pub fn from_signed(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        UniPoly { field, coeffs: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::monomial(field, 1, 0)
    }

    pub fn x(field: PrimeField) -> Self {
        Self::monomial(field, 1, 1)
    }

    pub fn monomial(field: PrimeField, c: u64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::new(field, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn check(&self, other: &UniPoly) -> Result<(), PolyError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PolyError::FieldMismatch(self.field.p, other.field.p))
        }
    }

    pub fn add(&self, other: &UniPoly) -> Result<UniPoly, PolyError> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &UniPoly) -> Result<UniPoly, PolyError> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn mul(&self, other: &UniPoly) -> Result<UniPoly, PolyError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &UniPoly) -> UniPoly {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(f, (0..n).map(|k| f.add(self.coeff(k), other.coeff(k))).collect())
    }

    fn sub_unchecked(&self, other: &UniPoly) -> UniPoly {
        self.add_unchecked(&other.neg())
    }

    fn mul_unchecked(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let p = self.field.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        Self::new(self.field, out)
    }

    pub fn neg(&self) -> UniPoly {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: u64) -> UniPoly {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&a| f.mul(a, c % f.p)).collect())
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lead()))
    }

    pub fn derivative(&self) -> UniPoly {
        let f = self.field;
        Self::new(
            f,
            self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| f.mul(c, k as u64 % f.p)).collect(),
        )
    }

    pub fn divrem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly), PolyError> {
        self.check(divisor)?;
        let Some(dd) = divisor.degree() else {
            return Err(PolyError::DivisionByZero);
        };
        let f = self.field;
        let inv = f.inv(divisor.lead());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], inv);
            quot[k] = c;
            if c != 0 {
                for (j, &d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = f.sub(rem[k + j], f.mul(c, d));
                }
            }
        }
        rem.truncate(dd);
        Ok((Self::new(f, quot), Self::new(f, rem)))
    }

    pub fn rem(&self, divisor: &UniPoly) -> Result<UniPoly, PolyError> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Quotient when `divisor` divides exactly.
    pub fn exact_div(&self, divisor: &UniPoly) -> Result<Option<UniPoly>, PolyError> {
        let (q, r) = self.divrem(divisor)?;
        Ok(r.is_zero().then_some(q))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> Result<UniPoly, PolyError> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn pow(&self, mut e: u64) -> UniPoly {
        let mut base = self.clone();
        let mut acc = Self::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    fn mulmod(&self, other: &UniPoly, m: &UniPoly) -> UniPoly {
        self.mul_unchecked(other).rem(m).expect("nonzero modulus")
    }

    fn powmod(&self, mut e: u64, m: &UniPoly) -> UniPoly {
        let mut base = self.rem(m).expect("nonzero modulus");
        let mut acc = Self::one(self.field).rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, m);
            }
        }
        acc
    }

    /// `self^p mod m`.
    fn frobenius_mod(&self, m: &UniPoly) -> UniPoly {
        self.powmod(self.field.p, m)
    }

    /// `g` with `g^p = self` when every exponent is divisible by `p`.
    fn pth_root(&self) -> Option<UniPoly> {
        let p = self.field.p as usize;
        if self.coeffs.iter().enumerate().any(|(k, &c)| c != 0 && k % p != 0) {
            return None;
        }
        Some(Self::new(self.field, self.coeffs.iter().step_by(p).copied().collect()))
    }

    /// Substitutes `x -> x^k`.
    pub fn inflate(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; self.degree().unwrap() * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c;
        }
        Self::new(self.field, coeffs)
    }

    /// Nonzero terms as `(degree, coefficient)`, highest first.
    pub fn terms(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.coeffs.iter().enumerate().rev().filter(|(_, &c)| c != 0).map(|(k, &c)| (k, c))
    }

    pub fn parse(s: &str, field: PrimeField) -> Result<Self, PolyError> {
        let malformed = || PolyError::Malformed(s.to_string());
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "0" {
            return Ok(Self::zero(field));
        }
        let mut acc = Self::zero(field);
        for term in s.split('+') {
            let (c, k) = term.split_once("*x^").ok_or_else(malformed)?;
            let c = i64::from_str(c).map_err(|_| malformed())?;
            let k = usize::from_str(k).map_err(|_| malformed())?;
            acc = acc.add_unchecked(&Self::monomial(field, field.reduce(c), k));
        }
        Ok(acc)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self.terms().map(|(k, c)| format!("{c}*x^{k}")).collect();
        f.write_str(&terms.join("+"))
    }
}

/// Least `n >= 1` with `r^n = 1 (mod m)`.
pub fn multiplicative_order(r: u64, m: u64) -> Result<u64, PolyError> {
    if m <= 1 {
        return Err(PolyError::BadModulus);
    }
    if num_integer::gcd(r, m) != 1 {
        return Err(PolyError::NotCoprime(r, m));
    }
    let mut order = euler_phi(m);
    for (q, _) in factor_u64(order) {
        while order % q == 0 && mod_pow(r, order / q, m) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

pub fn is_primitive_root(r: u64, m: u64) -> Result<bool, PolyError> {
    Ok(multiplicative_order(r, m)? == euler_phi(m))
}

/// `(x^(3^(n+1)) - 1) / (x^(3^n) - 1)` over GF(2).
pub fn cyclotomic_3power(n: u32) -> UniPoly {
    let f2 = PrimeField::new(2).expect("2 is prime");
    let one = UniPoly::one(f2);
    let small = 3usize.pow(n);
    let num = UniPoly::monomial(f2, 1, 3 * small).sub_unchecked(&one);
    let den = UniPoly::monomial(f2, 1, small).sub_unchecked(&one);
    let (q, r) = num.divrem(&den).expect("nonzero divisor");
    debug_assert!(r.is_zero());
    q
}

/// Rabin's test: `f` of degree `n` is irreducible iff `x^(p^n) = x mod f`
/// and `gcd(x^(p^(n/q)) - x, f) = 1` for each prime `q | n`.
pub fn is_irreducible_uni(f: &UniPoly) -> Result<bool, PolyError> {
    let n = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(PolyError::Constant),
    };
    let f = f.monic();
    let x = UniPoly::x(f.field);
    let maximal: Vec<usize> = factor_u64(n as u64).into_iter().map(|(q, _)| n / q as usize).collect();
    // frob[k] = x^(p^k) mod f
    let mut h = x.rem(&f)?;
    for k in 1..=n {
        h = h.frobenius_mod(&f);
        if maximal.contains(&k) && !h.sub_unchecked(&x).gcd(&f)?.is_one() {
            return Ok(false);
        }
    }
    Ok(h == x.rem(&f)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Leading coefficient of the input.
    pub unit: u64,
    /// Monic irreducible factors with multiplicities, sorted by degree then
    /// coefficients.
    pub factors: Vec<(UniPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self, field: PrimeField) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::monomial(field, self.unit, 0), |acc, (g, e)| acc.mul_unchecked(&g.pow(*e as u64)))
    }
}

pub fn factor_uni(f: &UniPoly) -> Result<Factorization, PolyError> {
    factor_uni_seeded(f, DEFAULT_SEED)
}

/// Squarefree decomposition, then distinct-degree and equal-degree
/// splitting. The seed drives the random splitting polynomials.
pub fn factor_uni_seeded(f: &UniPoly, seed: u64) -> Result<Factorization, PolyError> {
    if f.degree().unwrap_or(0) == 0 {
        return Err(PolyError::Constant);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = f.lead();
    let mut factors: Vec<(UniPoly, u32)> = Vec::new();
    for (part, mult) in squarefree(&f.monic()) {
        for (g, d) in distinct_degree(&part) {
            for h in equal_degree(&g, d, &mut rng) {
                factors.push((h, mult));
            }
        }
    }
    factors.sort_by(|(a, _), (b, _)| (a.degree(), &a.coeffs).cmp(&(b.degree(), &b.coeffs)));
    let mut merged: Vec<(UniPoly, u32)> = Vec::new();
    for (g, e) in factors {
        match merged.last_mut() {
            Some((h, m)) if *h == g => *m += e,
            _ => merged.push((g, e)),
        }
    }
    Ok(Factorization { unit, factors: merged })
}

/// Monic squarefree parts with multiplicities, for monic `f`.
fn squarefree(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    let fd = f.derivative();
    let mut c = f.gcd(&fd).expect("same field");
    let mut w = f.exact_div(&c).expect("nonzero").expect("gcd divides");
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c).expect("same field");
        let z = w.exact_div(&y).expect("nonzero").expect("gcd divides");
        if !z.is_one() {
            out.push((z, i));
        }
        w = y.clone();
        c = c.exact_div(&y).expect("nonzero").expect("gcd divides");
        i += 1;
    }
    if !c.is_one() {
        let root = c.pth_root().expect("derivative vanishes on the remaining part");
        let p = f.field.p as u32;
        out.extend(squarefree(&root).into_iter().map(|(g, e)| (g, e * p)));
    }
    out
}

/// Splits a monic squarefree `f` into products of equal-degree irreducibles.
fn distinct_degree(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = UniPoly::x(f.field);
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.frobenius_mod(&rest);
        let g = h.sub_unchecked(&x).gcd(&rest).expect("same field");
        if !g.is_one() {
            rest = rest.exact_div(&g).expect("nonzero").expect("gcd divides");
            h = h.rem(&rest).expect("nonzero");
            out.push((g, d));
        }
    }
    if let Some(k) = rest.degree().filter(|&k| k > 0) {
        out.push((rest, k));
    }
    out
}

/// Splits a monic product of distinct irreducibles of degree `d`.
fn equal_degree(f: &UniPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<UniPoly> {
    let n = f.degree().expect("nonzero");
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field;
    loop {
        let a = UniPoly::new(field, (0..n).map(|_| rng.gen_range(0..field.p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let s = splitting_element(&a, d, f);
        let g = s.gcd(f).expect("same field");
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = f.exact_div(&g).expect("nonzero").expect("gcd divides");
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

/// For `p = 2`, the trace `a + a^2 + ... + a^(2^(d-1))`; for odd `p`,
/// `a^((p^d - 1)/2) - 1`, computed as the norm-like product
/// `a^(1 + p + ... + p^(d-1))` raised to `(p - 1)/2`.
fn splitting_element(a: &UniPoly, d: usize, f: &UniPoly) -> UniPoly {
    let field = f.field;
    let mut t = a.rem(f).expect("nonzero");
    if field.p == 2 {
        let mut acc = t.clone();
        for _ in 1..d {
            t = t.frobenius_mod(f);
            acc = acc.add_unchecked(&t);
        }
        acc
    } else {
        let mut acc = t.clone();
        for _ in 1..d {
            t = t.frobenius_mod(f);
            acc = acc.mulmod(&t, f);
        }
        acc.powmod((field.p - 1) / 2, f).sub_unchecked(&UniPoly::one(field))
    }
}

/// Polynomial in `y` with coefficients in GF(p)[x]; `rows[j]` is the
/// coefficient of `y^j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiPoly {
    field: PrimeField,
    rows: Vec<UniPoly>,
}

impl BiPoly {
    pub fn new(field: PrimeField, rows: Vec<UniPoly>) -> Self {
        let mut g = BiPoly { field, rows };
        while g.rows.last().is_some_and(|r| r.is_zero()) {
            g.rows.pop();
        }
        g
    }

    /// From `(x-degree, y-degree, coefficient)` triples.
    pub fn from_terms(field: PrimeField, terms: &[(usize, usize, i64)]) -> Self {
        let ymax = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut rows = vec![UniPoly::zero(field); ymax + 1];
        for &(i, j, c) in terms {
            rows[j] = rows[j].add_unchecked(&UniPoly::monomial(field, field.reduce(c), i));
        }
        Self::new(field, rows)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> &[UniPoly] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn degree_y(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.rows.iter().filter_map(|r| r.degree()).max()
    }

    pub fn coeff(&self, i: usize, j: usize) -> u64 {
        self.rows.get(j).map_or(0, |r| r.coeff(i))
    }

    pub fn mul(&self, other: &BiPoly) -> Result<BiPoly, PolyError> {
        if self.field != other.field {
            return Err(PolyError::FieldMismatch(self.field.p, other.field.p));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::new(self.field, Vec::new()));
        }
        let mut rows = vec![UniPoly::zero(self.field); self.rows.len() + other.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in other.rows.iter().enumerate() {
                rows[i + j] = rows[i + j].add_unchecked(&a.mul_unchecked(b));
            }
        }
        Ok(Self::new(self.field, rows))
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let one = Self::new(self.field, vec![UniPoly::one(self.field)]);
        (0..e).fold(one, |acc, _| acc.mul(self).expect("same field"))
    }

    /// Exact quotient in GF(p)[x][y], or `None` when `divisor` does not
    /// divide.
    pub fn exact_div(&self, divisor: &BiPoly) -> Option<BiPoly> {
        let dy = divisor.degree_y()?;
        let lc = &divisor.rows[dy];
        let mut rem = self.rows.clone();
        let mut quot = vec![UniPoly::zero(self.field); rem.len().saturating_sub(dy).max(1)];
        while let Some(top) = rem.iter().rposition(|r| !r.is_zero()) {
            if top < dy {
                return None;
            }
            let (q, r) = rem[top].divrem(lc).ok()?;
            if !r.is_zero() {
                return None;
            }
            let shift = top - dy;
            for (j, d) in divisor.rows.iter().enumerate() {
                rem[shift + j] = rem[shift + j].sub_unchecked(&q.mul_unchecked(d));
            }
            quot[shift] = q;
        }
        Some(Self::new(self.field, quot))
    }

    /// Nonzero terms `(x-degree, y-degree, c)`, highest y-degree first.
    pub fn terms(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        for (j, r) in self.rows.iter().enumerate().rev() {
            out.extend(r.terms().map(|(i, c)| (i, j, c)));
        }
        out
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self.terms().iter().map(|(i, j, c)| format!("{c}*x^{i}*y^{j}")).collect();
        f.write_str(&terms.join("+"))
    }
}

/// `x^n + y^n + x^n y^n` over `field`.
pub fn lemma41_poly(n: usize, field: PrimeField) -> BiPoly {
    BiPoly::from_terms(field, &[(n, 0, 1), (0, n, 1), (n, n, 1)])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BiIrreducibility {
    Irreducible { candidates: u128 },
    /// `g * h` equals the input.
    Reducible { g: BiPoly, h: BiPoly },
}

/// Number of normalised candidates of y-degree `1..=n/2` and x-degree
/// `<= n`.
pub fn bruteforce_candidates(n: usize, p: u64) -> u128 {
    let mut total: u128 = 0;
    for d in 1..=n / 2 {
        let exp = ((n + 1) * (d + 1) - 1) as u32;
        total = total.saturating_add((p as u128).checked_pow(exp).unwrap_or(u128::MAX));
    }
    total
}

/// Decides irreducibility of `x^n + y^n + x^n y^n` over GF(p) by trial
/// division.
///
/// The polynomial is primitive in GF(p)[x][y] (its y-coefficients `x^n` and
/// `1 + x^n` are coprime), so a proper factorisation has a factor of
/// y-degree `d` with `1 <= d <= n/2`, and its x-degree is at most `n`.
/// Candidates are normalised by making the top x-coefficient of their
/// leading y-coefficient equal to 1.
pub fn is_irreducible_bi_bruteforce(n: usize, p: u64) -> Result<BiIrreducibility, PolyError> {
    let field = PrimeField::new(p)?;
    if n == 0 {
        return Err(PolyError::Constant);
    }
    let candidates = bruteforce_candidates(n, p);
    if candidates > BRUTE_FORCE_LIMIT {
        return Err(PolyError::OutOfRange(candidates));
    }
    let f = lemma41_poly(n, field);
    for d in 1..=n / 2 {
        let width = n + 1;
        let slots = width * (d + 1);
        let mut digits = vec![0u64; slots];
        loop {
            if let Some(g) = normalised_candidate(field, &digits, width, d) {
                if let Some(h) = f.exact_div(&g) {
                    return Ok(BiIrreducibility::Reducible { g, h });
                }
            }
            if !increment(&mut digits, p) {
                break;
            }
        }
    }
    Ok(BiIrreducibility::Irreducible { candidates })
}

fn increment(digits: &mut [u64], base: u64) -> bool {
    for dgt in digits.iter_mut() {
        *dgt += 1;
        if *dgt < base {
            return true;
        }
        *dgt = 0;
    }
    false
}

fn normalised_candidate(field: PrimeField, digits: &[u64], width: usize, d: usize) -> Option<BiPoly> {
    let rows: Vec<UniPoly> = digits.chunks(width).map(|c| UniPoly::new(field, c.to_vec())).collect();
    if rows[d].lead() != 1 {
        return None;
    }
    Some(BiPoly::new(field, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(p: u64, c: &[i64]) -> UniPoly {
        UniPoly::from_signed(gf(p), c)
    }

    #[test]
    fn arithmetic_examples() {
        let x1 = poly(2, &[1, 1]);
        assert_eq!(x1.mul(&x1).unwrap(), poly(2, &[1, 0, 1]));
        let q = poly(2, &[1, 1, 1]);
        let cube = poly(2, &[1, 0, 0, 1]);
        assert_eq!(q.mul(&x1).unwrap(), cube);
        assert_eq!(cube.divrem(&x1).unwrap(), (q, UniPoly::zero(gf(2))));
        assert_eq!(cube.divrem(&UniPoly::zero(gf(2))), Err(PolyError::DivisionByZero));
        assert!(x1.add(&poly(3, &[1])).is_err());
        assert!(PrimeField::new(4).is_err());
    }

    #[test]
    fn order_examples() {
        assert_eq!(multiplicative_order(2, 9).unwrap(), 6);
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
        assert_eq!(multiplicative_order(1, 10).unwrap(), 1);
        assert!(is_primitive_root(2, 9).unwrap());
        assert!(is_primitive_root(2, 27).unwrap());
        assert!(!is_primitive_root(2, 7).unwrap());
        assert_eq!(multiplicative_order(3, 9), Err(PolyError::NotCoprime(3, 9)));
        assert_eq!(multiplicative_order(3, 1), Err(PolyError::BadModulus));
    }

    /// Order by direct multiplication.
    fn naive_order(r: u64, m: u64) -> u64 {
        let mut acc = r % m;
        let mut n = 1;
        while acc != 1 {
            acc = acc * r % m;
            n += 1;
        }
        n
    }

    #[test]
    fn order_matches_naive() {
        for m in 2..200u64 {
            for r in 1..m {
                if num_integer::gcd(r, m) == 1 {
                    assert_eq!(multiplicative_order(r, m).unwrap(), naive_order(r, m), "{r} mod {m}");
                }
            }
        }
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic_3power(0), poly(2, &[1, 1, 1]));
        assert_eq!(cyclotomic_3power(1), poly(2, &[1, 0, 0, 1, 0, 0, 1]));
        for n in 0..=5 {
            let one = UniPoly::one(gf(2));
            let num = UniPoly::monomial(gf(2), 1, 3usize.pow(n + 1)).sub(&one).unwrap();
            let den = UniPoly::monomial(gf(2), 1, 3usize.pow(n)).sub(&one).unwrap();
            assert!(num.divrem(&den).unwrap().1.is_zero());
            let s = 3usize.pow(n);
            let want = UniPoly::monomial(gf(2), 1, 2 * s)
                .add(&UniPoly::monomial(gf(2), 1, s))
                .unwrap()
                .add(&one)
                .unwrap();
            assert_eq!(cyclotomic_3power(n), want);
        }
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible_uni(&poly(2, &[1, 1, 1])).unwrap());
        assert!(!is_irreducible_uni(&poly(2, &[1, 0, 1])).unwrap());
        assert!(is_irreducible_uni(&cyclotomic_3power(1)).unwrap());
        assert_eq!(is_irreducible_uni(&poly(2, &[1])), Err(PolyError::Constant));
    }

    #[test]
    fn cyclotomic_criterion() {
        for n in 0..=3u32 {
            let expected = multiplicative_order(2, 3u64.pow(n + 1)).unwrap() == 2 * 3u64.pow(n);
            assert_eq!(is_irreducible_uni(&cyclotomic_3power(n)).unwrap(), expected);
        }
    }

    /// Irreducibility by trial division over every monic polynomial of
    /// degree at most half.
    fn naive_irreducible(f: &UniPoly) -> bool {
        let n = f.degree().unwrap();
        let p = f.field().p();
        for d in 1..=n / 2 {
            let mut digits = vec![0u64; d];
            loop {
                let mut c = digits.clone();
                c.push(1);
                let g = UniPoly::new(f.field(), c);
                if f.rem(&g).unwrap().is_zero() {
                    return false;
                }
                if !increment(&mut digits, p) {
                    break;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_trial_division() {
        for p in [2u64, 3, 5] {
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            for _ in 0..150 {
                let deg = rng.gen_range(1..=7);
                let mut c: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
                c.push(rng.gen_range(1..p));
                let f = UniPoly::new(gf(p), c);
                assert_eq!(is_irreducible_uni(&f).unwrap(), naive_irreducible(&f), "{f}");
            }
        }
    }

    #[test]
    fn factor_examples() {
        let f = factor_uni(&poly(2, &[1, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(poly(2, &[1, 1]), 2)]);
        let f = factor_uni(&poly(2, &[1, 0, 1, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(poly(2, &[1, 1, 1]), 2)]);
        let c = cyclotomic_3power(1);
        let input = c.pow(2).mul(&poly(2, &[1, 1])).unwrap();
        let f = factor_uni(&input).unwrap();
        assert_eq!(f.factors, vec![(poly(2, &[1, 1]), 1), (c, 2)]);
        assert_eq!(f.expand(gf(2)), input);
        // multiplicities at and above p
        let g = poly(3, &[1, 1]).pow(7).mul(&poly(3, &[1, 0, 1]).pow(3)).unwrap().scale(2);
        let f = factor_uni(&g).unwrap();
        assert_eq!(f.unit, 2);
        assert_eq!(f.factors, vec![(poly(3, &[1, 1]), 7), (poly(3, &[1, 0, 1]), 3)]);
    }

    #[test]
    fn factor_is_seed_independent() {
        let f = poly(5, &[3, 1, 4, 1, 0, 2, 6, 5, 3, 5, 1]);
        let a = factor_uni_seeded(&f, 1).unwrap();
        let b = factor_uni_seeded(&f, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.expand(gf(5)), f);
    }

    #[test]
    fn text_roundtrip_examples() {
        let f = poly(3, &[2, 0, 1]);
        assert_eq!(f.to_string(), "1*x^2+2*x^0");
        assert_eq!(UniPoly::parse(&f.to_string(), gf(3)).unwrap(), f);
        assert_eq!(UniPoly::zero(gf(3)).to_string(), "0");
        assert!(UniPoly::parse("x^2", gf(3)).is_err());
    }

    #[test]
    fn bivariate_examples() {
        assert!(matches!(is_irreducible_bi_bruteforce(1, 2).unwrap(), BiIrreducibility::Irreducible { .. }));
        assert!(matches!(is_irreducible_bi_bruteforce(2, 3).unwrap(), BiIrreducibility::Irreducible { .. }));
        let BiIrreducibility::Reducible { g, h } = is_irreducible_bi_bruteforce(2, 2).unwrap() else {
            panic!("(x+y+xy)^2 in characteristic 2");
        };
        let root = lemma41_poly(1, gf(2));
        assert_eq!(g, root);
        assert_eq!(h, root);
        assert_eq!(g.mul(&h).unwrap(), lemma41_poly(2, gf(2)));
        assert!(matches!(is_irreducible_bi_bruteforce(9, 7), Err(PolyError::OutOfRange(_))));
    }

    #[test]
    fn bivariate_oracle_follows_characteristic() {
        for p in [2u64, 3, 5, 7] {
            for n in 1..=8usize {
                if bruteforce_candidates(n, p) > 1 << 16 {
                    continue;
                }
                match is_irreducible_bi_bruteforce(n, p).unwrap() {
                    BiIrreducibility::Irreducible { .. } => assert!(n as u64 % p != 0, "n={n} p={p}"),
                    BiIrreducibility::Reducible { g, h } => {
                        assert_eq!(n as u64 % p, 0, "n={n} p={p}");
                        assert_eq!(g.mul(&h).unwrap(), lemma41_poly(n, gf(p)));
                        let m = n / p as usize;
                        assert_eq!(lemma41_poly(m, gf(p)).pow(p as u32), lemma41_poly(n, gf(p)));
                    }
                }
            }
        }
    }

    fn arb_poly(p: u64, max_deg: usize) -> impl Strategy<Value = UniPoly> {
        prop::collection::vec(0..p, 2..=max_deg + 1).prop_map(move |c| UniPoly::new(gf(p), c))
    }

    proptest! {
        #[test]
        fn divrem_identity(f in arb_poly(5, 12), g in arb_poly(5, 6)) {
            prop_assume!(!g.is_zero());
            let (q, r) = f.divrem(&g).unwrap();
            prop_assert_eq!(q.mul(&g).unwrap().add(&r).unwrap(), f);
            prop_assert!(r.degree() < g.degree());
        }

        #[test]
        fn factor_roundtrip_and_agreement(f in arb_poly(3, 16)) {
            prop_assume!(f.degree().unwrap_or(0) >= 1);
            let fact = factor_uni(&f).unwrap();
            prop_assert_eq!(fact.expand(f.field()), f.clone());
            for (g, _) in &fact.factors {
                prop_assert!(is_irreducible_uni(g).unwrap());
            }
            let single = fact.factors.len() == 1 && fact.factors[0].1 == 1;
            prop_assert_eq!(is_irreducible_uni(&f).unwrap(), single);
        }

        #[test]
        fn text_roundtrip(f in arb_poly(7, 10)) {
            prop_assert_eq!(UniPoly::parse(&f.to_string(), f.field()).unwrap(), f);
        }
    }
}
