//! Acceptance criteria. Each criterion prints one PASS/FAIL line with its
//! runtime against the limit; the process fails if any criterion fails.

use std::error::Error;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use atomiclab_core::algebra::{
    factor_in_algebra, thm32_witness_chain, thm43_descent, thm43_descent_in, thm43_element, AlgebraElement,
    DescentOutcome, Exponent, ProductContext, PuiseuxContext, PuiseuxElement, RatPair, RationalField,
};
use atomiclab_core::ffpoly::{
    cyclotomic_3power, factor_uni, is_irreducible_bi_bruteforce, is_irreducible_uni, lemma41_poly, multiplicative_order,
    BiIrreducibility, BiPoly, PrimeField, UniPoly,
};
use atomiclab_core::lex::{self, LexMembership, OmegaVector, Symbol, SymbolTable};
use atomiclab_core::puiseux::{AccpStatus, AtomCheck, Family, GenLabel, Membership, ProductMonoid, PuiseuxMonoid};
use atomiclab_core::verify::{run_suite, Overrides};
use atomiclab_core::Rational;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), Box<dyn Error>>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+).into());
        }
    };
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 8] = [
        ("grams atoms and ACCP failure", 10, grams),
        ("prop51 interleaving, halves and atoms", 30, prop51),
        ("thm32 minimality and witness chain", 10, thm32),
        ("lemma41 bivariate irreducibility", 60, lemma41),
        ("lemma53 cyclotomic irreducibility and orders", 5, lemma53),
        ("thm43 Frobenius descent", 30, thm43),
        ("thm54 descent in the prop51 algebra", 10, thm54),
        ("kernel properties", 120, kernel),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f));
        let elapsed = start.elapsed();
        let problem = match result {
            Ok(Ok(())) if elapsed < Duration::from_secs(limit) => None,
            Ok(Ok(())) => Some("over the time limit".to_string()),
            Ok(Err(e)) => Some(e.to_string()),
            Err(_) => Some("panicked".to_string()),
        };
        let verdict = if problem.is_none() { "PASS" } else { "FAIL" };
        let mut line = format!("{verdict} criterion {} ({name}): {:.2}s, limit {limit}s", i + 1, elapsed.as_secs_f64());
        if let Some(p) = problem {
            failed += 1;
            line.push_str(&format!(": {p}"));
        }
        let _ = writeln!(std::io::stdout(), "{line}");
    }
    if failed > 0 {
        let _ = writeln!(std::io::stdout(), "{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn odd_primes(count: usize) -> Vec<u64> {
    (3u64..).step_by(2).filter(|&n| (3..n).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0)).take(count).collect()
}

fn suite_passes(name: &str, overrides: &Overrides, checks: usize) -> Outcome {
    let report = run_suite(name, overrides)?;
    ensure!(report.passed(), "suite {name} has failing checks");
    ensure!(report.checks.len() == checks, "suite {name} has {} checks, expected {checks}", report.checks.len());
    Ok(())
}

fn grams() -> Outcome {
    let m = PuiseuxMonoid::new(Family::Grams, 12)?;
    let qs = odd_primes(12);
    for (i, g) in m.generators().iter().enumerate() {
        let n = i as u32 + 1;
        ensure!(g.value == q(1, (qs[i] << n) as i64), "g{n} = {}", g.value);
        // Only g_n carries q_n in its denominator, so no other sum reaches it.
        let others_clear = m
            .generators()
            .iter()
            .filter(|h| h.label != g.label)
            .all(|h| h.value.padic_val(qs[i]).finite().unwrap() >= 0);
        ensure!(others_clear, "q_{n} divides another denominator");
        let check = m.is_atom(g.label, 64)?;
        ensure!(check == AtomCheck::AtomUpTo { depth: 12, coeff_bound: 64 }, "g{n}: {check:?}");
    }
    let steps = m.accp_chain_check(&Rational::one(), 10, 64)?;
    ensure!(steps.len() == 10, "{} ACCP steps", steps.len());
    for s in &steps {
        match &s.status {
            AccpStatus::StrictAscent { upper, difference } => {
                ensure!(m.evaluate(upper)? == Rational::inverse_power(2, s.n), "upper certificate at {}", s.n);
                ensure!(m.evaluate(difference)? == Rational::inverse_power(2, s.n + 1), "difference at {}", s.n);
            }
            other => return Err(format!("step {}: {other:?}", s.n).into()),
        }
    }
    suite_passes("grams", &Overrides::default(), 22)
}

fn prop51_oracle(n: u32, sign: i64) -> BigRational {
    let core = BigInt::from(2).pow(n) * BigInt::from(3).pow((n + 1) * (n + 2) / 2);
    BigRational::new(&core + sign, &core * BigInt::from(2).pow(n))
}

fn as_big(x: &Rational) -> BigRational {
    BigRational::new(x.numer().clone(), x.den().clone())
}

fn prop51() -> Outcome {
    let m = PuiseuxMonoid::new(Family::Prop51, 10)?;
    let mut seq = Vec::new();
    for n in 1..=10 {
        let (a, b) = (prop51_oracle(n, -1), prop51_oracle(n, 1));
        ensure!(as_big(&m.generator(GenLabel::A(n))?) == a, "a{n}");
        ensure!(as_big(&m.generator(GenLabel::B(n))?) == b, "b{n}");
        seq.extend([b, a]);
    }
    ensure!(seq.windows(2).all(|w| w[0] > w[1]), "interleaving fails");

    for n in 0..=8u32 {
        let half = Rational::inverse_power(2, n);
        let sum = prop51_oracle(n + 1, -1) + prop51_oracle(n + 1, 1);
        ensure!(sum == as_big(&half), "a{k} + b{k} != 1/2^{n}", k = n + 1);
        match m.membership(&half, 64)? {
            Membership::Yes(cert) => ensure!(m.evaluate(&cert)? == half, "certificate for 1/2^{n}"),
            other => return Err(format!("1/2^{n}: {other:?}").into()),
        }
    }

    for n in 1..=8 {
        for label in [GenLabel::A(n), GenLabel::B(n)] {
            let check = m.is_atom(label, 64)?;
            ensure!(check == AtomCheck::AtomUpTo { depth: 10, coeff_bound: 64 }, "{label}: {check:?}");
        }
    }
    suite_passes("prop51", &Overrides::default(), 1 + 9 + 16)
}

fn thm32() -> Outcome {
    let verdicts = lex::minimality_check(10)?;
    ensure!(verdicts.len() == 45, "{} atoms", verdicts.len());
    ensure!(verdicts.iter().all(|v| v.not_generated), "an atom is generated by the others");

    let table = SymbolTable::new(10);
    let unit = |s| OmegaVector::unit(table, s);
    let (a, b, c) = (unit(Symbol::A)?, unit(Symbol::B)?, unit(Symbol::C)?);
    let gf = thm32_witness_chain(10, PrimeField::new(2)?, 8)?;
    let qq = thm32_witness_chain(10, RationalField, 8)?;
    for report in [gf, qq] {
        ensure!(report.steps.len() == 8, "{} steps over {}", report.steps.len(), report.field);
        for step in &report.steps {
            ensure!(step.passed(), "k = {} over {}", step.k, report.field);
            let kc = c.scale(step.k as i64);
            let a_cert = step.a_cert.as_ref().ok_or("missing certificate")?;
            let b_cert = step.b_cert.as_ref().ok_or("missing certificate")?;
            ensure!(lex::evaluate(a_cert, table)? == a.checked_sub(&kc)?, "a - {}c", step.k);
            ensure!(lex::evaluate(b_cert, table)? == b.checked_sub(&kc)?, "b - {}c", step.k);
            let two_c = c.scale(2);
            ensure!(two_c.checked_add(&step.c_prime)? == a.checked_sub(&kc)?, "2c + c' at k = {}", step.k);
            ensure!(step.c_prime.is_positive() && step.d_prime.is_positive(), "c', d' positive");
        }
    }
    suite_passes("thm32", &Overrides::default(), 45 + 16)
}

fn lemma41() -> Outcome {
    for (n, p) in [(1, 2), (3, 2), (1, 3), (2, 3), (1, 5), (2, 5)] {
        match is_irreducible_bi_bruteforce(n, p)? {
            BiIrreducibility::Irreducible { .. } => {}
            BiIrreducibility::Reducible { g, h } => return Err(format!("({n},{p}) splits as ({g})({h})").into()),
        }
    }
    let f2 = PrimeField::new(2)?;
    let witness = BiPoly::from_terms(f2, &[(1, 0, 1), (0, 1, 1), (1, 1, 1)]);
    // (x + y + xy)^2 over GF(2) by hand: the cross terms vanish.
    let square = BiPoly::from_terms(f2, &[(2, 0, 1), (0, 2, 1), (2, 2, 1)]);
    ensure!(square == lemma41_poly(2, f2), "x^2 + y^2 + x^2y^2");
    match is_irreducible_bi_bruteforce(2, 2)? {
        BiIrreducibility::Reducible { g, h } => {
            ensure!(g == witness && h == witness, "witness ({g})({h})");
            ensure!(g.mul(&h)? == square, "product");
        }
        other => return Err(format!("(2,2): {other:?}").into()),
    }
    suite_passes("lemma41", &Overrides::default(), 7)
}

fn lemma53() -> Outcome {
    let f2 = PrimeField::new(2)?;
    for (n, degree) in [(0u32, 2usize), (1, 6), (2, 18), (3, 54)] {
        let small = 3usize.pow(n);
        let mut coeffs = vec![0u64; 2 * small + 1];
        coeffs[0] = 1;
        coeffs[small] = 1;
        coeffs[2 * small] = 1;
        let f = cyclotomic_3power(n);
        ensure!(f == UniPoly::new(f2, coeffs), "cyclotomic_3power({n}) = {f}");
        ensure!(f.degree() == Some(degree), "degree {:?}", f.degree());
        ensure!(is_irreducible_uni(&f)?, "n = {n} reducible");
        let m = 3u64.pow(n + 1);
        let naive = (1u64..).find(|&k| (0..k).fold(1u64, |acc, _| acc * 2 % m) == 1).unwrap();
        let order = multiplicative_order(2, m)?;
        ensure!(order == naive && order == 2 * small as u64, "order of 2 mod {m}: {order}");
    }
    let phi9 = (1..9u64).filter(|k| num_integer::gcd(*k, 9) == 1).count() as u64;
    ensure!(multiplicative_order(2, 9)? == 6 && phi9 == 6, "order of 2 modulo 9");
    suite_passes("lemma53", &Overrides::default(), 4)
}

fn thm43() -> Outcome {
    for (p, k_max) in [(2u64, 4u32), (3, 3)] {
        let report = thm43_descent(p, k_max)?;
        ensure!(
            report.outcome == DescentOutcome::NoIrreducibleFactorizationUpToBound,
            "p = {p}: {:?}",
            report.outcome
        );
        ensure!(report.verify(), "p = {p}: chain does not verify");
        ensure!(report.chain.len() == k_max as usize + 1, "p = {p}: {} links", report.chain.len());
        for (k, link) in report.chain.iter().enumerate() {
            ensure!(link.element == thm43_element(p, k as u32)?, "p = {p}, k = {k}: {}", link.element);
            if k > 0 {
                let mut power = link.element.clone();
                for _ in 1..p {
                    power = power.mul(&link.element)?;
                }
                ensure!(power == report.chain[k - 1].element, "p = {p}: power relation at k = {k}");
            }
        }
        let mp = PuiseuxMonoid::new(Family::Mp(p), 12)?;
        for k in 1..=k_max {
            let x = Rational::inverse_power(p, k);
            match mp.membership(&x, 64)? {
                Membership::Yes(cert) => ensure!(mp.evaluate(&cert)? == x, "certificate for 1/{p}^{k}"),
                other => return Err(format!("1/{p}^{k}: {other:?}").into()),
            }
        }
        let free = ProductContext { monoid: ProductMonoid::new(Vec::new()).with_free_rank(2), coeff_bound: 64 };
        let control = thm43_descent_in(p, 1, &free)?;
        ensure!(
            matches!(control.outcome, DescentOutcome::Blocked { k: 1, .. }),
            "control over N0 x N0: {:?}",
            control.outcome
        );
    }
    suite_passes("thm43", &Overrides::default(), 4)
}

fn e_k(field: PrimeField, k: u32) -> PuiseuxElement {
    let d = 1i64 << k;
    PuiseuxElement::from_terms(field, (), vec![(q(2, d), 1), (q(1, d), 1), (Rational::zero(), 1)]).unwrap()
}

fn thm54() -> Outcome {
    let f2 = PrimeField::new(2)?;
    let prop = PuiseuxContext { monoid: PuiseuxMonoid::new(Family::Prop51, 10)?, coeff_bound: 64 };
    let report = factor_in_algebra(&e_k(f2, 0), &prop, 8)?;
    ensure!(report.outcome == DescentOutcome::NoIrreducibleFactorizationUpToBound, "{:?}", report.outcome);
    ensure!(report.verify(), "chain does not verify");
    ensure!(report.chain.len() == 4, "{} links", report.chain.len());
    for (k, link) in report.chain.iter().enumerate() {
        let expected = e_k(f2, k as u32);
        ensure!(link.element == expected, "e_{k} = {}", link.element);
        ensure!(link.level == 1 << k, "level of e_{k}");
        let next = e_k(f2, k as u32 + 1);
        ensure!(next.mul(&next)? == expected, "e_{} squared", k + 1);
        for e in link.element.exponents() {
            ensure!(link.certificates.contains_key(e), "no certificate for {}", e.label());
        }
    }
    let naturals = PuiseuxContext { monoid: PuiseuxMonoid::naturals(), coeff_bound: 64 };
    let control = factor_in_algebra(&e_k(f2, 0), &naturals, 8)?;
    ensure!(
        matches!(control.outcome, DescentOutcome::TerminatedAtIrreducible(_)),
        "control over N0: {:?}",
        control.outcome
    );
    suite_passes("thm54", &Overrides::default(), 2)
}

fn kernel() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_97ed);
    factor_roundtrips(&mut rng)?;
    freshman(&mut rng)?;
    degree_additivity(&mut rng)?;
    for n in 0..=3 {
        lex_sweep(n)?;
    }
    Ok(())
}

/// Irreducibility by trial division with every monic polynomial of degree
/// at most half.
fn irreducible_by_trial(f: &UniPoly) -> bool {
    let field = f.field();
    let p = field.p();
    let n = f.degree().unwrap();
    for d in 1..=n / 2 {
        for code in 0..p.pow(d as u32) {
            let mut coeffs: Vec<u64> = (0..d).map(|i| code / p.pow(i as u32) % p).collect();
            coeffs.push(1);
            if f.rem(&UniPoly::new(field, coeffs)).unwrap().is_zero() {
                return false;
            }
        }
    }
    true
}

fn factor_roundtrips(rng: &mut ChaCha8Rng) -> Outcome {
    for p in [2u64, 3, 5] {
        let field = PrimeField::new(p)?;
        for _ in 0..500 {
            let degree = rng.gen_range(1..=24);
            let mut coeffs: Vec<u64> = (0..degree).map(|_| rng.gen_range(0..p)).collect();
            coeffs.push(rng.gen_range(1..p));
            let f = UniPoly::new(field, coeffs);
            let fac = factor_uni(&f)?;
            ensure!(fac.expand(field) == f, "GF({p}): factors of {f} do not multiply back");
            for (i, (g, _)) in fac.factors.iter().enumerate() {
                ensure!(g.lead() == 1, "GF({p}): factor {g} not monic");
                ensure!(is_irreducible_uni(g)?, "GF({p}): factor {g} reducible");
                if g.degree().unwrap() <= 6 {
                    ensure!(irreducible_by_trial(g), "GF({p}): trial division splits {g}");
                }
                ensure!(fac.factors[..i].iter().all(|(h, _)| h != g), "GF({p}): repeated factor {g}");
            }
        }
    }
    Ok(())
}

/// Draws from `gen` until the element is nonzero; equal exponents can cancel.
fn nonzero<E: Exponent, F: atomiclab_core::algebra::CoeffField>(
    rng: &mut ChaCha8Rng,
    gen: impl Fn(&mut ChaCha8Rng) -> AlgebraElement<E, F>,
) -> AlgebraElement<E, F> {
    loop {
        let f = gen(rng);
        if !f.is_zero() {
            return f;
        }
    }
}

fn random_rat(rng: &mut ChaCha8Rng, field: PrimeField) -> PuiseuxElement {
    nonzero(rng, |rng| {
        let terms = (0..rng.gen_range(1..5))
            .map(|_| (q(rng.gen_range(0..12), rng.gen_range(1..7)), rng.gen_range(1..field.p())))
            .collect();
        PuiseuxElement::from_terms(field, (), terms).unwrap()
    })
}

fn freshman(rng: &mut ChaCha8Rng) -> Outcome {
    for p in [2u64, 3, 5] {
        let field = PrimeField::new(p)?;
        for _ in 0..200 {
            let (f, g) = (random_rat(rng, field), random_rat(rng, field));
            let lhs = f.add(&g)?.pow(p);
            ensure!(lhs == f.pow(p).add(&g.pow(p))?, "GF({p}): (f+g)^p != f^p + g^p for f = {f}, g = {g}");
            // Frobenius by hand: exponents scale by p, coefficients are fixed.
            let frob = |h: &PuiseuxElement| {
                PuiseuxElement::from_terms(field, (), h.terms().map(|(e, c)| (e.mul_int(p), *c)).collect())
            };
            ensure!(lhs == frob(&f)?.add(&frob(&g)?)?, "GF({p}): Frobenius of f + g");
        }
    }
    Ok(())
}

fn additive<E: Exponent, F: atomiclab_core::algebra::CoeffField>(
    f: &AlgebraElement<E, F>,
    g: &AlgebraElement<E, F>,
    max: impl Fn(&AlgebraElement<E, F>) -> E,
    sum: impl Fn(&E, &E) -> E,
) -> Result<bool, Box<dyn Error>> {
    Ok(f.mul(g)?.degree()? == &sum(&max(f), &max(g)))
}

fn degree_additivity(rng: &mut ChaCha8Rng) -> Outcome {
    let f5 = PrimeField::new(5)?;
    let rat_max = |h: &PuiseuxElement| h.exponents().max_by(|x, y| as_big(x).cmp(&as_big(y))).unwrap().clone();
    for _ in 0..200 {
        let (f, g) = (random_rat(rng, f5), random_rat(rng, f5));
        ensure!(additive(&f, &g, rat_max, |x, y| x + y)?, "rational exponents: {f} * {g}");
    }

    type Pair = AlgebraElement<RatPair, RationalField>;
    let random_pair = |rng: &mut ChaCha8Rng| -> Pair {
        let terms = (0..rng.gen_range(1..5))
            .map(|_| {
                let e = RatPair(q(rng.gen_range(0..6), rng.gen_range(1..4)), q(rng.gen_range(0..6), rng.gen_range(1..4)));
                let c = [-3i64, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
                (e, Rational::from_integer(c))
            })
            .collect();
        AlgebraElement::from_terms(RationalField, (), terms).unwrap()
    };
    let pair_max = |h: &Pair| {
        h.exponents()
            .max_by(|x, y| (as_big(&x.0), as_big(&x.1)).cmp(&(as_big(&y.0), as_big(&y.1))))
            .unwrap()
            .clone()
    };
    for _ in 0..200 {
        let (f, g) = (nonzero(rng, random_pair), nonzero(rng, random_pair));
        ensure!(additive(&f, &g, pair_max, |x, y| RatPair(&x.0 + &y.0, &x.1 + &y.1))?, "pair exponents: {f} * {g}");
    }

    let table = SymbolTable::new(2);
    type Lex = AlgebraElement<OmegaVector, PrimeField>;
    let random_lex = |rng: &mut ChaCha8Rng| -> Lex {
        let terms = (0..rng.gen_range(1..4))
            .map(|_| {
                let mut e = OmegaVector::zero(table);
                for c in e.coeffs_mut() {
                    *c = rng.gen_range(-2..=2);
                }
                (e, rng.gen_range(1..5))
            })
            .collect();
        AlgebraElement::from_terms(f5, table, terms).unwrap()
    };
    // Symbols are stored in priority order, so the order is that of the slices.
    let lex_max = |h: &Lex| h.exponents().max_by(|x, y| x.coeffs().cmp(y.coeffs())).unwrap().clone();
    for _ in 0..200 {
        let (f, g) = (nonzero(rng, random_lex), nonzero(rng, random_lex));
        ensure!(additive(&f, &g, lex_max, |x, y| x.checked_add(y).unwrap())?, "lex exponents: {f} * {g}");
    }
    Ok(())
}

const LO: i64 = -3;
const HI: i64 = 3;
const SPAN: usize = (HI - LO + 1) as usize;

/// For a block `(x_a, x_s0..x_sN)`: the largest `sum n*alpha_n` over all
/// compositions `alpha` of `x_a` with `alpha_n + x_sn >= 0`, by enumeration.
fn block_best(total: i64, block: &[i64]) -> Option<i64> {
    fn go(n: usize, left: i64, block: &[i64], acc: i64) -> Option<i64> {
        if n + 1 == block.len() {
            return (left + block[n] >= 0).then_some(acc + n as i64 * left);
        }
        (0..=left).filter(|&k| k + block[n] >= 0).filter_map(|k| go(n + 1, left - k, block, acc + n as i64 * k)).max()
    }
    if total < 0 {
        return None;
    }
    go(0, total, block, 0)
}

fn decode(mut code: usize, out: &mut [i64]) {
    for slot in out.iter_mut() {
        *slot = (code % SPAN) as i64 + LO;
        code /= SPAN;
    }
}

/// Membership by listing every pair of compositions for the `a` and `b`
/// coordinates; the `c`, `s` and `t` multiplicities are then forced.
fn pair_enumeration(x: &[i64], table: SymbolTable) -> bool {
    let n = table.truncation();
    let (s, t) = (&x[3..4 + n], &x[4 + n..5 + 2 * n]);
    let compositions = |total: i64, block: &[i64]| -> Vec<i64> {
        fn go(i: usize, left: i64, block: &[i64], acc: i64, out: &mut Vec<i64>) {
            if i + 1 == block.len() {
                if left + block[i] >= 0 {
                    out.push(acc + i as i64 * left);
                }
                return;
            }
            for k in 0..=left {
                if k + block[i] >= 0 {
                    go(i + 1, left - k, block, acc + i as i64 * k, out);
                }
            }
        }
        let mut out = Vec::new();
        if total >= 0 {
            go(0, total, block, 0, &mut out);
        }
        out
    };
    let (ws, wt) = (compositions(x[0], s), compositions(x[1], t));
    ws.iter().any(|u| wt.iter().any(|v| x[2] + u + v >= 0))
}

fn lex_sweep(n: usize) -> Outcome {
    let table = SymbolTable::new(n);
    for (i, sym) in [Symbol::A, Symbol::B, Symbol::C].into_iter().enumerate() {
        ensure!(table.position(sym)? == i, "layout of {sym:?}");
    }
    for k in 0..=n {
        ensure!(table.position(Symbol::S(k))? == 3 + k, "layout of s{k}");
        ensure!(table.position(Symbol::T(k))? == 4 + n + k, "layout of t{k}");
    }
    let blocks = SPAN.pow(n as u32 + 1);
    let mut block = vec![0i64; n + 1];
    // best[v][code]: `block_best(v, decode(code))`.
    let best: Vec<Vec<Option<i64>>> = (LO..=HI)
        .map(|v| {
            (0..blocks)
                .map(|code| {
                    decode(code, &mut block);
                    block_best(v, &block)
                })
                .collect()
        })
        .collect();

    let mut x = OmegaVector::zero(table);
    let mut yes = 0u64;
    let mut checked = 0u64;
    for va in 0..SPAN {
        x.coeffs_mut()[0] = va as i64 + LO;
        for vb in 0..SPAN {
            x.coeffs_mut()[1] = vb as i64 + LO;
            for sc in 0..blocks {
                let wa = best[va][sc];
                decode(sc, &mut x.coeffs_mut()[3..4 + n]);
                for tc in 0..blocks {
                    let wb = best[vb][tc];
                    decode(tc, &mut x.coeffs_mut()[4 + n..]);
                    for vc in 0..SPAN {
                        x.coeffs_mut()[2] = vc as i64 + LO;
                        let expected = matches!((wa, wb), (Some(wa), Some(wb)) if vc as i64 + LO + wa + wb >= 0);
                        checked += 1;
                        match lex::membership_lex(&x) {
                            LexMembership::Yes(cert) => {
                                ensure!(expected, "{x} accepted, enumeration rejects it");
                                yes += 1;
                                if n <= 2 || yes % 4099 == 0 {
                                    ensure!(lex::evaluate(&cert, table)? == x, "certificate for {x}");
                                    ensure!(cert.values().all(|&m| m > 0), "zero multiplicity for {x}");
                                }
                            }
                            LexMembership::No => ensure!(!expected, "{x} rejected, enumeration accepts it"),
                        }
                        if n <= 1 {
                            ensure!(pair_enumeration(x.coeffs(), table) == expected, "block tables disagree at {x}");
                        }
                    }
                }
            }
        }
    }
    ensure!(yes > 0 && checked > 0, "empty sweep");
    Ok(())
}
