//! Buchberger's algorithm and the ideal-theoretic queries built on reduced
//! Gröbner bases: membership, elimination, dimension, colength and minimal
//! generator counts of homogeneous ideals.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::gf::Elem;
use crate::linalg::EchelonBasis;
use crate::poly::{Monomial, MonomialOrder, Polynomial, Ring};

pub const DEFAULT_PAIR_BUDGET: usize = 200_000;

#[derive(Clone, Copy, Debug)]
pub struct GbConfig {
    /// Maximum number of S-pair reductions per call.
    pub max_pairs: usize,
    /// Ignore S-pairs whose lcm has (weighted) degree above this. For
    /// homogeneous input the result is then a Gröbner basis up to that degree.
    pub degree_limit: Option<u32>,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            max_pairs: DEFAULT_PAIR_BUDGET,
            degree_limit: None,
        }
    }
}

impl GbConfig {
    pub fn truncated(self, degree: u32) -> Self {
        GbConfig {
            degree_limit: Some(degree),
            ..self
        }
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    deg: u32,
}

/// Remainder of `f` on division by `basis`, fully reduced.
pub fn normal_form(ring: &Ring, f: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let field = ring.field();
    let lms: Vec<(&Monomial, Elem)> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| (&g.terms()[0].0, g.terms()[0].1))
        .collect();
    let divisors: Vec<&Polynomial> = basis.iter().filter(|g| !g.is_zero()).collect();
    let mut p = f.clone();
    let mut pos = 0;
    while pos < p.len() {
        let (m, c) = &p.terms()[pos];
        let hit = lms.iter().position(|(lm, _)| lm.divides(m));
        match hit {
            Some(k) => {
                let (lm, lc) = lms[k];
                let q = lm.quotient_of(m).expect("divides");
                let factor = field.mul(*c, field.inv(lc).expect("nonzero"));
                p = ring.sub_mul_term(&p, factor, &q, divisors[k]);
            }
            None => pos += 1,
        }
    }
    p
}

fn s_polynomial(ring: &Ring, f: &Polynomial, g: &Polynomial, lcm: &Monomial) -> Polynomial {
    let field = ring.field();
    let (fm, fc) = &f.terms()[0];
    let (gm, gc) = &g.terms()[0];
    let uf = fm.quotient_of(lcm).expect("lcm");
    let ug = gm.quotient_of(lcm).expect("lcm");
    let a = ring.mul_term(f, &uf, field.inv(*fc).expect("nonzero"));
    ring.sub_mul_term(&a, field.inv(*gc).expect("nonzero"), &ug, g)
}

/// Reduced Gröbner basis, sorted by ascending leading monomial.
///
/// Pairs are taken by smallest lcm degree, ties by first index; the coprime
/// and chain criteria discard pairs.
pub fn buchberger(ring: &Ring, gens: &[Polynomial], cfg: GbConfig) -> Result<Vec<Polynomial>> {
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut processed = 0usize;

    let mut input: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).map(|g| ring.monic(g)).collect();
    input.sort_by(|a, b| ring.cmp(&a.terms()[0].0, &b.terms()[0].0));

    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let add_to_basis = |h: Polynomial,
                            basis: &mut Vec<Polynomial>,
                            pairs: &mut Vec<Pair>,
                            pending: &mut HashSet<(usize, usize)>| {
        let k = basis.len();
        let hm = h.terms()[0].0.clone();
        for (i, g) in basis.iter().enumerate() {
            let lcm = g.terms()[0].0.lcm(&hm);
            let deg = ring.wdeg(&lcm);
            pairs.push(Pair { i, j: k, lcm, deg });
            pending.insert((i, k));
        }
        basis.push(h);
    };

    for g in input {
        let h = normal_form(ring, &g, &basis);
        if !h.is_zero() {
            let h = ring.monic(&h);
            if h.terms()[0].0.is_one() {
                return Ok(vec![ring.one()]);
            }
            add_to_basis(h, &mut basis, &mut pairs, &mut pending);
        }
    }

    while !pairs.is_empty() {
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.deg.cmp(&b.deg).then((a.i, a.j).cmp(&(b.i, b.j))))
            .map(|(k, _)| k)
            .unwrap();
        let pair = pairs.swap_remove(best);
        pending.remove(&(pair.i, pair.j));
        if let Some(limit) = cfg.degree_limit {
            if pair.deg > limit {
                continue;
            }
        }
        let (fi, fj) = (&basis[pair.i], &basis[pair.j]);
        if fi.terms()[0].0.is_coprime(&fj.terms()[0].0) {
            continue;
        }
        // Chain criterion: some k with LM_k | lcm whose pairs with i and j are both gone.
        let chain = (0..basis.len()).any(|k| {
            k != pair.i
                && k != pair.j
                && basis[k].terms()[0].0.divides(&pair.lcm)
                && !pending.contains(&ordered(pair.i, k))
                && !pending.contains(&ordered(pair.j, k))
        });
        if chain {
            continue;
        }
        processed += 1;
        if processed > cfg.max_pairs {
            return Err(Error::budget(
                "buchberger",
                format!("more than {} S-pair reductions", cfg.max_pairs),
            ));
        }
        let s = s_polynomial(ring, fi, fj, &pair.lcm);
        let h = normal_form(ring, &s, &basis);
        if !h.is_zero() {
            let h = ring.monic(&h);
            if h.terms()[0].0.is_one() {
                return Ok(vec![ring.one()]);
            }
            add_to_basis(h, &mut basis, &mut pairs, &mut pending);
        }
    }
    Ok(interreduce(ring, basis))
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Minimal, monic and tail-reduced; sorted by ascending leading monomial.
pub fn interreduce(ring: &Ring, basis: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut basis: Vec<Polynomial> = basis.into_iter().filter(|g| !g.is_zero()).collect();
    basis.sort_by(|a, b| ring.cmp(&a.terms()[0].0, &b.terms()[0].0));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in basis {
        let m = &g.terms()[0].0;
        if minimal.iter().any(|h| h.terms()[0].0.divides(m)) {
            continue;
        }
        minimal.push(g);
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let g = &minimal[k];
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, h)| h.clone())
            .collect();
        let head = ring.term(g.terms()[0].0.clone(), g.terms()[0].1);
        let tail = ring.sub(g, &head);
        let reduced = ring.add(&head, &normal_form(ring, &tail, &others));
        out.push(ring.monic(&reduced));
    }
    out
}

/// A generating set together with its reduced Gröbner basis.
#[derive(Clone, Debug)]
pub struct IdealBasis {
    ring: Ring,
    gens: Vec<Polynomial>,
    gb: Vec<Polynomial>,
}

impl IdealBasis {
    pub fn new(ring: &Ring, gens: Vec<Polynomial>, cfg: GbConfig) -> Result<Self> {
        let gb = buchberger(ring, &gens, cfg)?;
        Ok(IdealBasis {
            ring: ring.clone(),
            gens,
            gb,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn gb(&self) -> &[Polynomial] {
        &self.gb
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        normal_form(&self.ring, f, &self.gb)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.gb.len() == 1 && self.gb[0].terms()[0].0.is_one()
    }

    pub fn same_ideal(&self, other: &IdealBasis) -> bool {
        self.gb == other.gb
    }

    pub fn contains_ideal(&self, other: &IdealBasis) -> bool {
        other.gb.iter().all(|g| self.contains(g))
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.gb.iter().map(|g| g.terms()[0].0.clone()).collect()
    }

    pub fn krull_dimension(&self) -> i64 {
        krull_dimension(&self.ring, &self.gb)
    }

    pub fn height(&self) -> i64 {
        height(&self.ring, &self.gb)
    }

    pub fn colength(&self) -> Colength {
        colength(&self.ring, &self.gb)
    }

    pub fn format_gb(&self) -> Vec<String> {
        self.gb.iter().map(|g| self.ring.format(g)).collect()
    }
}

fn is_unit_gb(gb: &[Polynomial]) -> bool {
    gb.iter().any(|g| g.terms().first().is_some_and(|(m, _)| m.is_one()))
}

fn support_mask(m: &Monomial) -> u64 {
    m.support().fold(0u64, |acc, i| acc | (1 << i))
}

/// Bitmasks of the inclusion-maximal sets of variables independent modulo
/// the initial ideal.
pub fn maximal_independent_sets(ring: &Ring, gb: &[Polynomial]) -> Vec<u64> {
    let n = ring.nvars();
    assert!(n < 64, "too many variables for independent-set search");
    let masks: Vec<u64> = gb.iter().map(|g| support_mask(&g.terms()[0].0)).collect();
    let independent = |u: u64| masks.iter().all(|&m| m & !u != 0);
    let mut out = Vec::new();
    for u in 0..(1u64 << n) {
        if !independent(u) {
            continue;
        }
        let maximal = (0..n).all(|i| u & (1 << i) != 0 || !independent(u | (1 << i)));
        if maximal {
            out.push(u);
        }
    }
    out
}

/// Dimension of `S/I`; `-1` for the unit ideal.
pub fn krull_dimension(ring: &Ring, gb: &[Polynomial]) -> i64 {
    if is_unit_gb(gb) {
        return -1;
    }
    maximal_independent_sets(ring, gb)
        .into_iter()
        .map(|u| u.count_ones() as i64)
        .max()
        .unwrap_or(0)
}

pub fn height(ring: &Ring, gb: &[Polynomial]) -> i64 {
    if is_unit_gb(gb) {
        return ring.nvars() as i64 + 1;
    }
    ring.nvars() as i64 - krull_dimension(ring, gb)
}

/// True when every inclusion-maximal independent set has the same size.
pub fn staircase_equidimensional(ring: &Ring, gb: &[Polynomial]) -> bool {
    if is_unit_gb(gb) {
        return true;
    }
    let sets = maximal_independent_sets(ring, gb);
    sets.windows(2).all(|w| w[0].count_ones() == w[1].count_ones())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Colength {
    Finite(u64),
    Infinite,
}

impl Colength {
    pub fn finite(self) -> Option<u64> {
        match self {
            Colength::Finite(v) => Some(v),
            Colength::Infinite => None,
        }
    }
}

/// Number of standard monomials, when finite.
pub fn colength(ring: &Ring, gb: &[Polynomial]) -> Colength {
    if is_unit_gb(gb) {
        return Colength::Finite(0);
    }
    if krull_dimension(ring, gb) != 0 {
        return Colength::Infinite;
    }
    let lms: Vec<&Monomial> = gb.iter().map(|g| &g.terms()[0].0).collect();
    let n = ring.nvars();
    let mut count = 0u64;
    // Depth-first over exponent vectors, raising only variables >= the last raised.
    let mut stack = vec![(Monomial::one(n), 0usize)];
    while let Some((m, first)) = stack.pop() {
        count += 1;
        for v in first..n {
            let mut exps = m.exps().to_vec();
            exps[v] += 1;
            let next = Monomial::from_exps(&exps);
            if !lms.iter().any(|lm| lm.divides(&next)) {
                stack.push((next, v));
            }
        }
    }
    Colength::Finite(count)
}

/// Monomials of weighted degree `d` not in the initial ideal.
pub fn standard_monomials_of_degree(ring: &Ring, gb: &[Polynomial], d: u32) -> Vec<Monomial> {
    let lms: Vec<&Monomial> = gb.iter().map(|g| &g.terms()[0].0).collect();
    monomials_of_degree(ring, d)
        .into_iter()
        .filter(|m| !lms.iter().any(|lm| lm.divides(m)))
        .collect()
}

/// All monomials of weighted degree `d`, in descending monomial order.
pub fn monomials_of_degree(ring: &Ring, d: u32) -> Vec<Monomial> {
    let n = ring.nvars();
    let w = ring.weights();
    let mut out = Vec::new();
    let mut exps = vec![0u16; n];
    fn rec(i: usize, left: u32, exps: &mut Vec<u16>, w: &[u32], out: &mut Vec<Monomial>) {
        if i == exps.len() {
            if left == 0 {
                out.push(Monomial::from_exps(exps));
            }
            return;
        }
        let max = left / w[i];
        for e in 0..=max {
            exps[i] = e as u16;
            rec(i + 1, left - e * w[i], exps, w, out);
        }
        exps[i] = 0;
    }
    if n == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(0, d, &mut exps, w, &mut out);
    out.sort_by(|a, b| ring.cmp(b, a));
    out
}

/// Gröbner basis elements not involving the eliminated block `0..boundary`.
/// `ring` must carry `LexBlockElim { boundary }`.
pub fn elimination_ideal(ring: &Ring, gens: &[Polynomial], cfg: GbConfig) -> Result<Vec<Polynomial>> {
    let MonomialOrder::LexBlockElim { boundary } = ring.order() else {
        return Err(Error::usage("elimination requires a LexBlockElim order"));
    };
    let gb = buchberger(ring, gens, cfg)?;
    Ok(gb
        .into_iter()
        .filter(|g| (0..boundary).all(|v| !ring.involves(g, v)))
        .collect())
}

/// Re-express a polynomial of `from` that only involves `from` variables
/// `offset..offset + to.nvars()` in the ring `to`.
pub fn project(from: &Ring, to: &Ring, offset: usize, f: &Polynomial) -> Polynomial {
    let n = to.nvars();
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| {
            debug_assert!(m.exps()[..offset].iter().all(|&e| e == 0));
            debug_assert!(m.exps()[offset + n..].iter().all(|&e| e == 0));
            (Monomial::from_exps(&m.exps()[offset..offset + n]), *c)
        })
        .collect();
    let _ = from;
    to.from_terms(terms)
}

/// Embed a polynomial of `from` into `to`, placing its variables at `offset`.
pub fn embed(from: &Ring, to: &Ring, offset: usize, f: &Polynomial) -> Polynomial {
    let n = to.nvars();
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut exps = vec![0u16; n];
            exps[offset..offset + from.nvars()].copy_from_slice(m.exps());
            (Monomial::from_exps(&exps), *c)
        })
        .collect();
    to.from_terms(terms)
}

/// Homogeneous components of the generators, grouped by degree; errors if any
/// generator is not homogeneous.
fn by_degree(ring: &Ring, gens: &[Polynomial]) -> Result<Vec<(u32, Vec<Polynomial>)>> {
    let mut out: Vec<(u32, Vec<Polynomial>)> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        if !ring.is_homogeneous(g) {
            return Err(Error::usage(format!(
                "minimal generators need homogeneous input; got {}",
                ring.format(g)
            )));
        }
        let d = ring.degree(g).unwrap();
        match out.iter_mut().find(|(e, _)| *e == d) {
            Some((_, v)) => v.push(g.clone()),
            None => out.push((d, vec![g.clone()])),
        }
    }
    out.sort_by_key(|(d, _)| *d);
    Ok(out)
}

/// A minimal homogeneous generating set extracted from `gens`: in each degree
/// keep the generators independent modulo the ideal of lower-degree generators.
pub fn minimal_generators(ring: &Ring, gens: &[Polynomial], cfg: GbConfig) -> Result<Vec<Polynomial>> {
    let groups = by_degree(ring, gens)?;
    let mut kept: Vec<Polynomial> = Vec::new();
    let mut lower: Vec<Polynomial> = Vec::new();
    for (d, group) in groups {
        let gb = if lower.is_empty() {
            Vec::new()
        } else {
            buchberger(ring, &lower, cfg.truncated(d))?
        };
        let monos = monomials_of_degree(ring, d);
        let index = |m: &Monomial| monos.iter().position(|x| x == m).expect("degree-d monomial");
        let mut eb = EchelonBasis::new(monos.len());
        for g in &group {
            let r = normal_form(ring, g, &gb);
            let mut v = vec![Elem::ZERO; monos.len()];
            for (m, c) in r.terms() {
                v[index(m)] = *c;
            }
            if eb.insert(&v, ring.field()).is_some() {
                kept.push(g.clone());
            }
        }
        lower.extend(group);
    }
    Ok(kept)
}

/// `μ(J)`: size of a minimal homogeneous generating set.
pub fn minimal_generator_count(ring: &Ring, gens: &[Polynomial], cfg: GbConfig) -> Result<usize> {
    Ok(minimal_generators(ring, gens, cfg)?.len())
}

/// Compare polynomial lists by leading monomials (used for sorting outputs).
pub fn cmp_by_leading(ring: &Ring, a: &Polynomial, b: &Polynomial) -> Ordering {
    match (a.terms().first(), b.terms().first()) {
        (Some((ma, _)), Some((mb, _))) => ring.cmp(ma, mb),
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Less,
        (_, None) => Ordering::Greater,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;

    fn xyz(p: u32) -> Ring {
        Ring::deglex(FieldSpec::prime(p).unwrap(), 3).with_names(vec!["x".into(), "y".into(), "z".into()])
    }

    fn polys(ring: &Ring, s: &[&str]) -> Vec<Polynomial> {
        s.iter().map(|t| ring.parse(t).unwrap()).collect()
    }

    #[test]
    fn buchberger_examples() {
        let r = xyz(3);
        let gb = buchberger(&r, &polys(&r, &["x", "y^3"]), GbConfig::default()).unwrap();
        assert_eq!(gb, polys(&r, &["x", "y^3"]));
        let gb = buchberger(&r, &polys(&r, &["x", "y^3", "z^3 - x^2*z"]), GbConfig::default()).unwrap();
        assert_eq!(gb, polys(&r, &["x", "y^3", "z^3"]));
        let gb = buchberger(&r, &[r.zero()], GbConfig::default()).unwrap();
        assert!(gb.is_empty());
    }

    #[test]
    fn buchberger_nontrivial_and_unique() {
        let r = xyz(5);
        let a = polys(&r, &["x^2 - y*z", "y^2 - x*z", "z^2 - x*y"]);
        let gb1 = buchberger(&r, &a, GbConfig::default()).unwrap();
        // a different generating set of the same ideal
        let b = vec![
            r.add(&a[0], &a[1]),
            a[1].clone(),
            r.add(&a[2], &r.mul(&r.parse("x").unwrap(), &a[0])),
        ];
        let gb2 = buchberger(&r, &b, GbConfig::default()).unwrap();
        assert_eq!(gb1, gb2);
        for g in &a {
            assert!(normal_form(&r, g, &gb1).is_zero());
        }
    }

    #[test]
    fn pair_budget_is_enforced() {
        let r = xyz(5);
        let a = polys(&r, &["x^2 - y*z", "y^2 - x*z", "z^2 - x*y"]);
        let cfg = GbConfig { max_pairs: 0, degree_limit: None };
        assert!(matches!(buchberger(&r, &a, cfg), Err(Error::Budget { .. })));
    }

    #[test]
    fn normal_form_examples() {
        let r = xyz(3);
        let g1 = polys(&r, &["x", "y^3"]);
        assert!(normal_form(&r, &r.parse("x*y").unwrap(), &g1).is_zero());
        assert_eq!(normal_form(&r, &r.parse("y^2").unwrap(), &g1), r.parse("y^2").unwrap());
        let g2 = polys(&r, &["x", "y^3", "z^3"]);
        assert!(normal_form(&r, &r.parse("z^3 - x^2*z").unwrap(), &g2).is_zero());
        let f = r.parse("y^4 + z^2*x + y*z").unwrap();
        let nf = normal_form(&r, &f, &g2);
        assert_eq!(normal_form(&r, &nf, &g2), nf);
    }

    #[test]
    fn elimination_examples() {
        let field = FieldSpec::prime(3).unwrap();
        let r = Ring::new(field.clone(), 2, MonomialOrder::LexBlockElim { boundary: 1 })
            .with_names(vec!["x".into(), "y".into()]);
        let e = elimination_ideal(&r, &polys(&r, &["y - x^2", "x"]), GbConfig::default()).unwrap();
        assert_eq!(e, polys(&r, &["y"]));
        let e = elimination_ideal(&r, &polys(&r, &["x"]), GbConfig::default()).unwrap();
        assert!(e.is_empty());
        // kernel of y1 -> x, y2 -> y^3 : ring k[x, y, y1, y2] eliminating x, y
        let r4 = Ring::new(field, 4, MonomialOrder::LexBlockElim { boundary: 2 })
            .with_names(vec!["x".into(), "y".into(), "u".into(), "v".into()])
            .with_weights(vec![1, 1, 1, 3]);
        let e = elimination_ideal(&r4, &polys(&r4, &["u - x", "v - y^3"]), GbConfig::default()).unwrap();
        assert!(e.is_empty());
        assert!(elimination_ideal(&xyz(3), &[], GbConfig::default()).is_err());
    }

    #[test]
    fn dimension_height_colength() {
        let r = xyz(3);
        let i1 = IdealBasis::new(&r, polys(&r, &["x", "y^3"]), GbConfig::default()).unwrap();
        assert_eq!((i1.krull_dimension(), i1.height()), (1, 2));
        assert_eq!(i1.colength(), Colength::Infinite);
        let i0 = IdealBasis::new(&r, vec![], GbConfig::default()).unwrap();
        assert_eq!(i0.krull_dimension(), 3);
        let i2 = IdealBasis::new(&r, polys(&r, &["x", "y^3", "z^3"]), GbConfig::default()).unwrap();
        assert_eq!((i2.krull_dimension(), i2.height()), (0, 3));
        assert_eq!(i2.colength(), Colength::Finite(9));
        let max = IdealBasis::new(&r, polys(&r, &["x", "y", "z"]), GbConfig::default()).unwrap();
        assert_eq!(max.colength(), Colength::Finite(1));
        let unit = IdealBasis::new(&r, polys(&r, &["x", "x + 1"]), GbConfig::default()).unwrap();
        assert!(unit.is_unit());
        assert_eq!(unit.krull_dimension(), -1);
    }

    #[test]
    fn minimal_generator_examples() {
        let r = xyz(3);
        let cfg = GbConfig::default();
        assert_eq!(minimal_generator_count(&r, &polys(&r, &["x", "y^3", "z^3 - x^2*z"]), cfg).unwrap(), 3);
        assert_eq!(minimal_generator_count(&r, &polys(&r, &["x^2", "x*y", "y^2"]), cfg).unwrap(), 3);
        assert_eq!(minimal_generator_count(&r, &polys(&r, &["x", "x^2"]), cfg).unwrap(), 1);
        assert!(minimal_generator_count(&r, &polys(&r, &["x + y^2"]), cfg).is_err());
    }

    #[test]
    fn equidimensionality_of_staircase() {
        let r = xyz(3);
        let gb = buchberger(&r, &polys(&r, &["x*y", "x*z"]), GbConfig::default()).unwrap();
        // components {x = 0} (dim 2) and {y = z = 0} (dim 1)
        assert!(!staircase_equidimensional(&r, &gb));
        let gb = buchberger(&r, &polys(&r, &["x*y"]), GbConfig::default()).unwrap();
        assert!(staircase_equidimensional(&r, &gb));
    }
}
