//! Truncated model of the rank-ℵ₀ monoid built on the symbols
//! `a ≻ b ≻ c ≻ s_0 ≻ s_1 ≻ … ≻ s_N ≻ t_0 ≻ … ≻ t_N`.
//!
//! Vectors are stored densely by order position, so the lexicographic order
//! is the order of the coefficient arrays. The truncated monoid is generated
//! by `c, s_n, t_n, a - n c - s_n, b - n c - t_n` for `n <= N`; it is a
//! submonoid of the untruncated one, so every `Yes` transfers and every `No`
//! is a statement about truncation `N` only.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("symbol {0} is outside the table of truncation {1}")]
    SymbolOutsideTable(Symbol, usize),
    #[error("vectors over tables of truncation {0} and {1}")]
    TableMismatch(usize, usize),
    #[error("truncation {0} is too small, need at least {1}")]
    TruncationTooSmall(usize, usize),
    #[error("malformed lex vector `{0}`")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    A,
    B,
    C,
    S(usize),
    T(usize),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::A => f.write_str("a"),
            Symbol::B => f.write_str("b"),
            Symbol::C => f.write_str("c"),
            Symbol::S(n) => write!(f, "s{n}"),
            Symbol::T(n) => write!(f, "t{n}"),
        }
    }
}

/// The ordered symbol set at truncation `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymbolTable {
    truncation: usize,
}

impl SymbolTable {
    pub fn new(truncation: usize) -> Self {
        SymbolTable { truncation }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Number of symbols, `2N + 5`.
    pub fn len(&self) -> usize {
        2 * self.truncation + 5
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn position(&self, sym: Symbol) -> Result<usize, LexError> {
        let n = self.truncation;
        match sym {
            Symbol::A => Ok(0),
            Symbol::B => Ok(1),
            Symbol::C => Ok(2),
            Symbol::S(k) if k <= n => Ok(3 + k),
            Symbol::T(k) if k <= n => Ok(4 + n + k),
            other => Err(LexError::SymbolOutsideTable(other, n)),
        }
    }

    pub fn symbol(&self, pos: usize) -> Symbol {
        let n = self.truncation;
        match pos {
            0 => Symbol::A,
            1 => Symbol::B,
            2 => Symbol::C,
            p if p < 4 + n => Symbol::S(p - 3),
            p => {
                assert!(p < self.len(), "position {p} outside table");
                Symbol::T(p - 4 - n)
            }
        }
    }

    /// Symbols from highest to lowest.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.len()).map(|i| self.symbol(i))
    }
}

/// Finite-support integer vector over the symbol table, `g = Σ v_ω(g) ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmegaVector {
    table: SymbolTable,
    coeffs: Vec<i64>,
}

impl OmegaVector {
    pub fn zero(table: SymbolTable) -> Self {
        OmegaVector { table, coeffs: vec![0; table.len()] }
    }

    pub fn from_terms(table: SymbolTable, terms: &[(Symbol, i64)]) -> Result<Self, LexError> {
        let mut v = Self::zero(table);
        for &(sym, k) in terms {
            v.coeffs[table.position(sym)?] += k;
        }
        Ok(v)
    }

    pub fn unit(table: SymbolTable, sym: Symbol) -> Result<Self, LexError> {
        Self::from_terms(table, &[(sym, 1)])
    }

    pub fn table(&self) -> SymbolTable {
        self.table
    }

    /// Coefficients in order position.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [i64] {
        &mut self.coeffs
    }

    /// `v_ω(self)`.
    pub fn get(&self, sym: Symbol) -> Result<i64, LexError> {
        Ok(self.coeffs[self.table.position(sym)?])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// `self ≻ 0`.
    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
    }

    pub fn checked_add(&self, other: &OmegaVector) -> Result<OmegaVector, LexError> {
        self.same_table(other)?;
        Ok(self.zip_with(other, |x, y| x + y))
    }

    pub fn checked_sub(&self, other: &OmegaVector) -> Result<OmegaVector, LexError> {
        self.same_table(other)?;
        Ok(self.zip_with(other, |x, y| x - y))
    }

    pub fn scale(&self, k: i64) -> OmegaVector {
        OmegaVector { table: self.table, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    fn zip_with(&self, other: &OmegaVector, f: impl Fn(i64, i64) -> i64) -> OmegaVector {
        OmegaVector {
            table: self.table,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&x, &y)| f(x, y)).collect(),
        }
    }

    fn same_table(&self, other: &OmegaVector) -> Result<(), LexError> {
        if self.table == other.table {
            Ok(())
        } else {
            Err(LexError::TableMismatch(self.table.truncation, other.table.truncation))
        }
    }

    /// Parses the text form produced by `Display`.
    pub fn parse(s: &str, table: SymbolTable) -> Result<Self, LexError> {
        let malformed = || LexError::Malformed(s.to_string());
        let s = s.trim();
        let mut v = Self::zero(table);
        if s == "0" {
            return Ok(v);
        }
        for term in s.split_whitespace() {
            let (name, exp) = term.split_once('^').ok_or_else(malformed)?;
            let exp: i64 = exp.parse().map_err(|_| malformed())?;
            let sym = match name {
                "a" => Symbol::A,
                "b" => Symbol::B,
                "c" => Symbol::C,
                _ => {
                    let (head, idx) = name.split_at(1);
                    let idx: usize = idx.parse().map_err(|_| malformed())?;
                    match head {
                        "s" => Symbol::S(idx),
                        "t" => Symbol::T(idx),
                        _ => return Err(malformed()),
                    }
                }
            };
            v.coeffs[table.position(sym)?] += exp;
        }
        Ok(v)
    }
}

impl PartialOrd for OmegaVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OmegaVector {
    /// Lexicographic on the symbol order; vectors over different tables are
    /// ordered by truncation first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.table
            .truncation
            .cmp(&other.table.truncation)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Display for OmegaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{}^{}", self.table.symbol(i), c)?;
                first = false;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Compares at the highest symbol where the coefficients differ.
pub fn lex_compare(u: &OmegaVector, v: &OmegaVector) -> Result<Ordering, LexError> {
    u.same_table(v)?;
    Ok(u.coeffs.cmp(&v.coeffs))
}

/// The generators of the truncated monoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LexAtom {
    C,
    S(usize),
    T(usize),
    /// `a - n c - s_n`
    ARel(usize),
    /// `b - n c - t_n`
    BRel(usize),
}

impl LexAtom {
    pub fn vector(self, table: SymbolTable) -> Result<OmegaVector, LexError> {
        let n_c = |n: usize| -(n as i64);
        match self {
            LexAtom::C => OmegaVector::unit(table, Symbol::C),
            LexAtom::S(n) => OmegaVector::unit(table, Symbol::S(n)),
            LexAtom::T(n) => OmegaVector::unit(table, Symbol::T(n)),
            LexAtom::ARel(n) => {
                OmegaVector::from_terms(table, &[(Symbol::A, 1), (Symbol::C, n_c(n)), (Symbol::S(n), -1)])
            }
            LexAtom::BRel(n) => {
                OmegaVector::from_terms(table, &[(Symbol::B, 1), (Symbol::C, n_c(n)), (Symbol::T(n), -1)])
            }
        }
    }
}

impl fmt::Display for LexAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexAtom::C => f.write_str("c"),
            LexAtom::S(n) => write!(f, "s{n}"),
            LexAtom::T(n) => write!(f, "t{n}"),
            LexAtom::ARel(n) => write!(f, "a-{n}c-s{n}"),
            LexAtom::BRel(n) => write!(f, "b-{n}c-t{n}"),
        }
    }
}

/// Atom multiset witnessing membership.
pub type LexCertificate = BTreeMap<LexAtom, u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexMembership {
    Yes(LexCertificate),
    /// Not in the monoid generated by the atoms of truncation `N`.
    No,
}

impl LexMembership {
    pub fn is_yes(&self) -> bool {
        matches!(self, LexMembership::Yes(_))
    }
}

/// The `4(N+1) + 1` atoms `c, s_n, t_n, a - n c - s_n, b - n c - t_n`.
pub fn thm32_atoms(truncation: usize) -> Result<Vec<(LexAtom, OmegaVector)>, LexError> {
    if truncation < 2 {
        return Err(LexError::TruncationTooSmall(truncation, 2));
    }
    Ok(atom_labels(truncation)
        .into_iter()
        .map(|a| (a, a.vector(SymbolTable::new(truncation)).expect("in table")))
        .collect())
}

fn atom_labels(truncation: usize) -> Vec<LexAtom> {
    let mut out = vec![LexAtom::C];
    for n in 0..=truncation {
        out.extend([LexAtom::S(n), LexAtom::T(n), LexAtom::ARel(n), LexAtom::BRel(n)]);
    }
    out
}

/// Evaluates an atom multiset.
pub fn evaluate(cert: &LexCertificate, table: SymbolTable) -> Result<OmegaVector, LexError> {
    let mut acc = OmegaVector::zero(table);
    for (atom, &k) in cert {
        acc = acc.checked_add(&atom.vector(table)?.scale(k as i64))?;
    }
    Ok(acc)
}

/// Decides membership of `x` in the monoid generated by all atoms of its
/// table.
///
/// Writing `x = γc + Σσ_n s_n + Στ_n t_n + Σα_n(a - nc - s_n) + Σβ_n(b - nc - t_n)`
/// forces `Σα_n = v_a(x)`, `σ_n = v_{s_n}(x) + α_n`, and likewise for `b`;
/// what is left is `γ = v_c(x) + Σ n(α_n + β_n) >= 0`. With every atom
/// available, the largest `Σ nα_n` puts each `α_n` at its floor
/// `max(0, -v_{s_n})` and the surplus on `n = N`, so that single choice
/// decides the finite search. The returned certificate keeps the surplus at
/// `n = 0` and moves only as much of it upward as `γ >= 0` requires.
pub fn membership_lex(x: &OmegaVector) -> LexMembership {
    let n = x.table.truncation;
    let c = &x.coeffs;
    let (va, vb, vc) = (c[0], c[1], c[2]);
    if va < 0 || vb < 0 {
        return LexMembership::No;
    }
    let s = &c[3..4 + n];
    let t = &c[4 + n..];
    let (Some(wa), Some(wb)) = (max_weight(va, s), max_weight(vb, t)) else {
        return LexMembership::No;
    };
    if vc + wa + wb < 0 {
        return LexMembership::No;
    }
    let (mut alpha, ra) = floors(va, s);
    let (mut beta, rb) = floors(vb, t);
    let weight: i64 = (0..=n).map(|k| k as i64 * (alpha[k] + beta[k])).sum();
    let deficit = (-(vc + weight)).max(0);
    let deficit = spread(&mut alpha, ra, deficit);
    let deficit = spread(&mut beta, rb, deficit);
    debug_assert_eq!(deficit, 0);
    LexMembership::Yes(certificate(x, &alpha, &beta, None))
}

/// Floors `max(0, -v_k)` with the surplus placed at index 0.
fn floors(total: i64, v: &[i64]) -> (Vec<i64>, i64) {
    let mut alpha: Vec<i64> = v.iter().map(|&vk| (-vk).max(0)).collect();
    let surplus = total - alpha.iter().sum::<i64>();
    alpha[0] += surplus;
    (alpha, surplus)
}

/// Moves up to `surplus` units out of index 0 to cover `deficit` weight;
/// returns the weight still missing.
fn spread(alpha: &mut [i64], surplus: i64, deficit: i64) -> i64 {
    let top = alpha.len() as i64 - 1;
    if top == 0 || deficit == 0 {
        return deficit;
    }
    let full = surplus.min(deficit / top);
    alpha[0] -= full;
    alpha[top as usize] += full;
    let rest = deficit - full * top;
    if rest > 0 && full < surplus {
        alpha[0] -= 1;
        alpha[rest as usize] += 1;
        return 0;
    }
    rest
}

/// Largest `Σ k·α_k` with `α_k >= max(0, -v_k)` and `Σ α_k = total`.
fn max_weight(total: i64, v: &[i64]) -> Option<i64> {
    let mut need = 0i64;
    let mut weight = 0i64;
    for (k, &vk) in v.iter().enumerate() {
        if vk < 0 {
            need -= vk;
            weight -= k as i64 * vk;
        }
    }
    if need > total {
        return None;
    }
    Some(weight + (total - need) * (v.len() as i64 - 1))
}

fn certificate(x: &OmegaVector, alpha: &[i64], beta: &[i64], gamma: Option<i64>) -> LexCertificate {
    let n = x.table.truncation;
    let c = &x.coeffs;
    let weight: i64 = (0..=n).map(|k| k as i64 * (alpha[k] + beta[k])).sum();
    let gamma = gamma.unwrap_or(c[2] + weight);
    let mut cert = LexCertificate::new();
    let mut put = |atom: LexAtom, k: i64| {
        debug_assert!(k >= 0);
        if k > 0 {
            cert.insert(atom, k as u64);
        }
    };
    put(LexAtom::C, gamma);
    for k in 0..=n {
        put(LexAtom::S(k), c[3 + k] + alpha[k]);
        put(LexAtom::T(k), c[4 + n + k] + beta[k]);
        put(LexAtom::ARel(k), alpha[k]);
        put(LexAtom::BRel(k), beta[k]);
    }
    cert
}

/// Decides membership of `x` in the monoid generated by the atoms of its
/// table other than `excluded`.
///
/// Removing an atom pins one unknown: without `c` the slack `γ` must vanish,
/// without `s_k` the coefficient `α_k` equals `-v_{s_k}`, without
/// `a - kc - s_k` it is zero. The attainable values of `Σ k α_k` are then
/// enumerated exactly, which keeps the decision a finite search.
pub fn membership_excluding(x: &OmegaVector, excluded: LexAtom) -> Result<LexMembership, LexError> {
    let table = x.table;
    excluded.vector(table)?;
    let n = table.truncation;
    let c = &x.coeffs;
    let (va, vb, vc) = (c[0], c[1], c[2]);
    if va < 0 || vb < 0 {
        return Ok(LexMembership::No);
    }
    let boxes = |v: &[i64], total: i64, pinned_free: Option<usize>, pinned_zero: Option<usize>| {
        v.iter()
            .enumerate()
            .map(|(k, &vk)| {
                let lo = (-vk).max(0);
                if Some(k) == pinned_free {
                    if vk <= 0 { (-vk, -vk) } else { (0, -1) }
                } else if Some(k) == pinned_zero {
                    (0, if lo == 0 { 0 } else { -1 })
                } else {
                    (lo, total)
                }
            })
            .collect::<Vec<(i64, i64)>>()
    };
    let (s_free, a_zero, t_free, b_zero) = match excluded {
        LexAtom::S(k) => (Some(k), None, None, None),
        LexAtom::ARel(k) => (None, Some(k), None, None),
        LexAtom::T(k) => (None, None, Some(k), None),
        LexAtom::BRel(k) => (None, None, None, Some(k)),
        LexAtom::C => (None, None, None, None),
    };
    let alpha_sets = weights(&boxes(&c[3..4 + n], va, s_free, a_zero), va);
    let beta_sets = weights(&boxes(&c[4 + n..], vb, t_free, b_zero), vb);
    for (wa, alpha) in &alpha_sets {
        for (wb, beta) in &beta_sets {
            let gamma = vc + wa + wb;
            let ok = if excluded == LexAtom::C { gamma == 0 } else { gamma >= 0 };
            if ok {
                return Ok(LexMembership::Yes(certificate(x, alpha, beta, Some(gamma))));
            }
        }
    }
    Ok(LexMembership::No)
}

/// Every attainable `Σ k·α_k` with `lo_k <= α_k <= hi_k` and `Σ α_k = total`,
/// with one witness each.
fn weights(boxes: &[(i64, i64)], total: i64) -> BTreeMap<i64, Vec<i64>> {
    // reachable[(used, weight)] = witness prefix
    let mut reachable: BTreeMap<(i64, i64), Vec<i64>> = BTreeMap::new();
    reachable.insert((0, 0), Vec::new());
    for (k, &(lo, hi)) in boxes.iter().enumerate() {
        let mut next = BTreeMap::new();
        for ((used, weight), prefix) in &reachable {
            let top = hi.min(total - used);
            for a in lo..=top {
                next.entry((used + a, weight + k as i64 * a)).or_insert_with(|| {
                    let mut p = prefix.clone();
                    p.push(a);
                    p
                });
            }
        }
        reachable = next;
    }
    reachable
        .into_iter()
        .filter(|((used, _), _)| *used == total)
        .map(|((_, w), p)| (w, p))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalityVerdict {
    pub atom: LexAtom,
    /// True when the atom is not generated by the others.
    pub not_generated: bool,
}

/// Checks every atom of truncation `N` against the monoid generated by the
/// remaining atoms.
pub fn minimality_check(truncation: usize) -> Result<Vec<MinimalityVerdict>, LexError> {
    thm32_atoms(truncation)?
        .into_iter()
        .map(|(atom, v)| {
            Ok(MinimalityVerdict { atom, not_generated: membership_excluding(&v, atom)? == LexMembership::No })
        })
        .collect()
}
