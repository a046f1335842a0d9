//! Sparse multivariate polynomials, monomial orders, linear substitutions and
//! the iterative higher derivations `Δ_j^(l)`.
//!
//! A [`Polynomial`] is a bare, sorted term list; the [`Ring`] it lives in
//! (field, variable count, order, grading) is passed to every operation.
//! Variable indices are 0-based in the API and printed 1-based.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};
use crate::linalg::Matrix;

pub type Exponent = u16;

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[Exponent; 8]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize) -> Self {
        Self::var_pow(n, i, 1)
    }

    pub fn var_pow(n: usize, i: usize, e: Exponent) -> Self {
        let mut m = Self::one(n);
        m.0[i] = e;
        m
    }

    pub fn from_exps(exps: &[Exponent]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    #[inline]
    pub fn exps(&self) -> &[Exponent] {
        &self.0
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// `Some((i, e))` if this is `x_i^e` with `e > 0`.
    pub fn as_pure_power(&self) -> Option<(usize, Exponent)> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// (Weighted) degree first, ties broken lexicographically with
    /// `x_1 < x_2 < ... < x_n`, i.e. comparing the exponent of `x_n` first.
    DegLexAsc,
    /// Block order: variables `0..boundary` form the eliminated block and are
    /// compared first (by `DegLexAsc` restricted to the block), then the rest.
    LexBlockElim { boundary: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: Vec<(Monomial, Elem)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending order of the ring's monomial order.
    #[inline]
    pub fn terms(&self) -> &[(Monomial, Elem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Elem {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map_or(Elem::ZERO, |(_, c)| *c)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter().map(|(m, _)| m)
    }
}

#[derive(Clone, Debug)]
pub struct Ring {
    field: Arc<FieldSpec>,
    n: usize,
    order: MonomialOrder,
    weights: Vec<u32>,
    names: Vec<String>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field
            && self.n == other.n
            && self.order == other.order
            && self.weights == other.weights
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// `binomial(n, k) mod p` by Lucas' theorem.
pub fn binomial_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        // small binomial by the multiplicative formula mod p
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..kd {
            num = num * ((nd - i) % p) % p;
            den = den * ((i + 1) % p) % p;
        }
        let mut inv = 1u64;
        let mut b = den;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                inv = inv * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc = acc * num % p * inv % p;
        n /= p;
        k /= p;
    }
    acc
}

impl Ring {
    pub fn new(field: Arc<FieldSpec>, n: usize, order: MonomialOrder) -> Self {
        Ring {
            field,
            n,
            order,
            weights: vec![1; n],
            names: default_names(n),
        }
    }

    pub fn deglex(field: Arc<FieldSpec>, n: usize) -> Self {
        Self::new(field, n, MonomialOrder::DegLexAsc)
    }

    pub fn with_weights(mut self, weights: Vec<u32>) -> Self {
        assert_eq!(weights.len(), self.n);
        self.weights = weights;
        self
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.n);
        self.names = names;
        self
    }

    pub fn with_order(&self, order: MonomialOrder) -> Ring {
        Ring {
            order,
            ..self.clone()
        }
    }

    #[inline]
    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    #[inline]
    pub fn wdeg(&self, m: &Monomial) -> u32 {
        m.exps()
            .iter()
            .zip(&self.weights)
            .map(|(&e, &w)| e as u32 * w)
            .sum()
    }

    fn wdeg_range(&self, m: &Monomial, lo: usize, hi: usize) -> u32 {
        (lo..hi).map(|i| m.exps()[i] as u32 * self.weights[i]).sum()
    }

    fn lex_desc_range(a: &Monomial, b: &Monomial, lo: usize, hi: usize) -> Ordering {
        for i in (lo..hi).rev() {
            match a.exps()[i].cmp(&b.exps()[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.order {
            MonomialOrder::DegLexAsc => self
                .wdeg(a)
                .cmp(&self.wdeg(b))
                .then_with(|| Self::lex_desc_range(a, b, 0, self.n)),
            MonomialOrder::LexBlockElim { boundary } => self
                .wdeg_range(a, 0, boundary)
                .cmp(&self.wdeg_range(b, 0, boundary))
                .then_with(|| Self::lex_desc_range(a, b, 0, boundary))
                .then_with(|| self.wdeg_range(a, boundary, self.n).cmp(&self.wdeg_range(b, boundary, self.n)))
                .then_with(|| Self::lex_desc_range(a, b, boundary, self.n)),
        }
    }

    // ---- construction -------------------------------------------------

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero()
    }

    pub fn one(&self) -> Polynomial {
        self.constant(Elem::ONE)
    }

    pub fn constant(&self, c: Elem) -> Polynomial {
        self.term(Monomial::one(self.n), c)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        self.term(Monomial::var(self.n, i), Elem::ONE)
    }

    pub fn term(&self, m: Monomial, c: Elem) -> Polynomial {
        if c.is_zero() {
            Polynomial::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Sort, combine like terms and drop zeros.
    pub fn from_terms(&self, mut terms: Vec<(Monomial, Elem)>) -> Polynomial {
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Elem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = self.field.add(*lc, c),
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if matches!(out.last(), Some((_, c)) if c.is_zero()) {
            out.pop();
        }
        Polynomial { terms: out }
    }

    /// Linear form `Σ coeffs[i] x_i`.
    pub fn linear_form(&self, coeffs: &[Elem]) -> Polynomial {
        self.from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (Monomial::var(self.n, i), c))
                .collect(),
        )
    }

    /// Coefficients of a linear form (ignores other terms).
    pub fn linear_coeffs(&self, f: &Polynomial) -> Vec<Elem> {
        let mut out = vec![Elem::ZERO; self.n];
        for (m, c) in f.terms() {
            if let Some((i, 1)) = m.as_pure_power() {
                out[i] = *c;
            }
        }
        out
    }

    // ---- arithmetic ---------------------------------------------------

    fn merge(&self, f: &Polynomial, g: &Polynomial, scale_g: Elem, shift: Option<&Monomial>) -> Polynomial {
        let field = &*self.field;
        let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |j: usize| -> Monomial {
            match shift {
                Some(s) => g.terms[j].0.mul(s),
                None => g.terms[j].0.clone(),
            }
        };
        let mut gm = if g.terms.is_empty() { None } else { Some(shifted(0)) };
        while i < f.terms.len() || gm.is_some() {
            let ord = match (&gm, f.terms.get(i)) {
                (None, _) => Ordering::Greater,
                (Some(_), None) => Ordering::Less,
                (Some(m), Some((fm, _))) => self.cmp(fm, m),
            };
            match ord {
                Ordering::Greater => {
                    out.push(f.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = field.mul(g.terms[j].1, scale_g);
                    if !c.is_zero() {
                        out.push((gm.take().unwrap(), c));
                    }
                    j += 1;
                    gm = if j < g.terms.len() { Some(shifted(j)) } else { None };
                }
                Ordering::Equal => {
                    let c = field.add(f.terms[i].1, field.mul(g.terms[j].1, scale_g));
                    if !c.is_zero() {
                        out.push((f.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                    gm = if j < g.terms.len() { Some(shifted(j)) } else { None };
                }
            }
        }
        Polynomial { terms: out }
    }

    pub fn add(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        self.merge(f, g, Elem::ONE, None)
    }

    pub fn sub(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        self.merge(f, g, self.field.neg(Elem::ONE), None)
    }

    /// `f - c * m * g`.
    pub fn sub_mul_term(&self, f: &Polynomial, c: Elem, m: &Monomial, g: &Polynomial) -> Polynomial {
        self.merge(f, g, self.field.neg(c), Some(m))
    }

    /// `f + c * g`.
    pub fn add_scaled(&self, f: &Polynomial, c: Elem, g: &Polynomial) -> Polynomial {
        self.merge(f, g, c, None)
    }

    pub fn neg(&self, f: &Polynomial) -> Polynomial {
        self.scale(f, self.field.neg(Elem::ONE))
    }

    pub fn scale(&self, f: &Polynomial, c: Elem) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: f
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), self.field.mul(*a, c)))
                .collect(),
        }
    }

    pub fn mul_term(&self, f: &Polynomial, m: &Monomial, c: Elem) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: f
                .terms
                .iter()
                .map(|(t, a)| (t.mul(m), self.field.mul(*a, c)))
                .collect(),
        }
    }

    pub fn mul(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        if f.is_zero() || g.is_zero() {
            return Polynomial::zero();
        }
        if f.len() == 1 {
            return self.mul_term(g, &f.terms[0].0, f.terms[0].1);
        }
        if g.len() == 1 {
            return self.mul_term(f, &g.terms[0].0, g.terms[0].1);
        }
        let mut acc: HashMap<Monomial, Elem> = HashMap::with_capacity(f.len() * g.len());
        for (a, ca) in &f.terms {
            for (b, cb) in &g.terms {
                let c = self.field.mul(*ca, *cb);
                let e = acc.entry(a.mul(b)).or_insert(Elem::ZERO);
                *e = self.field.add(*e, c);
            }
        }
        self.from_terms(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    pub fn pow(&self, f: &Polynomial, mut e: u32) -> Polynomial {
        let mut acc = self.one();
        let mut base = f.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn product<'a>(&self, fs: impl IntoIterator<Item = &'a Polynomial>) -> Polynomial {
        fs.into_iter().fold(self.one(), |acc, f| self.mul(&acc, f))
    }

    // ---- leading data -------------------------------------------------

    pub fn leading_monomial<'a>(&self, f: &'a Polynomial) -> Result<&'a Monomial> {
        f.terms.first().map(|(m, _)| m).ok_or(Error::UndefinedLeadingTerm)
    }

    pub fn leading_coeff(&self, f: &Polynomial) -> Elem {
        f.terms.first().map_or(Elem::ZERO, |(_, c)| *c)
    }

    pub fn monic(&self, f: &Polynomial) -> Polynomial {
        match f.terms.first() {
            None => Polynomial::zero(),
            Some((_, c)) if *c == Elem::ONE => f.clone(),
            Some((_, c)) => self.scale(f, self.field.inv(*c).expect("nonzero")),
        }
    }

    /// Largest weighted degree of a term; `None` for zero.
    pub fn degree(&self, f: &Polynomial) -> Option<u32> {
        f.terms.iter().map(|(m, _)| self.wdeg(m)).max()
    }

    pub fn is_homogeneous(&self, f: &Polynomial) -> bool {
        let mut degs = f.terms.iter().map(|(m, _)| self.wdeg(m));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn degree_in(&self, f: &Polynomial, var: usize) -> u32 {
        f.terms.iter().map(|(m, _)| m.exps()[var] as u32).max().unwrap_or(0)
    }

    pub fn involves(&self, f: &Polynomial, var: usize) -> bool {
        f.terms.iter().any(|(m, _)| m.exps()[var] > 0)
    }

    /// Re-sort `f` (from a ring with the same variables) under this ring's order.
    pub fn adopt(&self, f: &Polynomial) -> Polynomial {
        self.from_terms(f.terms.clone())
    }

    // ---- substitutions ------------------------------------------------

    /// Ring map `x_i ↦ images[i]` into `target`.
    pub fn substitute(&self, f: &Polynomial, images: &[Polynomial], target: &Ring) -> Polynomial {
        assert_eq!(images.len(), self.n);
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|g| vec![target.one(), g.clone()]).collect();
        let mut acc: HashMap<Monomial, Elem> = HashMap::new();
        let tf = &*target.field;
        for (m, c) in &f.terms {
            let mut prod = target.constant(*c);
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = target.mul(powers[i].last().unwrap(), &images[i]);
                    powers[i].push(next);
                }
                prod = target.mul(&prod, &powers[i][e as usize]);
                if prod.is_zero() {
                    break;
                }
            }
            for (tm, tc) in prod.terms {
                let e = acc.entry(tm).or_insert(Elem::ZERO);
                *e = tf.add(*e, tc);
            }
        }
        target.from_terms(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    /// Image of `f` under `x_i ↦ Σ_j M[j][i] x_j`.
    pub fn apply_linear_substitution(&self, f: &Polynomial, m: &Matrix) -> Result<Polynomial> {
        if m.rows() != self.n || m.cols() != self.n {
            return Err(Error::usage(format!(
                "substitution matrix is {}x{}, ring has {} variables",
                m.rows(),
                m.cols(),
                self.n
            )));
        }
        if !m.is_invertible(&self.field) {
            return Err(Error::usage("substitution matrix is singular"));
        }
        Ok(self.apply_matrix_unchecked(f, m))
    }

    pub fn apply_matrix_unchecked(&self, f: &Polynomial, m: &Matrix) -> Polynomial {
        let images: Vec<Polynomial> = (0..self.n).map(|i| self.linear_form(&m.column(i))).collect();
        self.substitute(f, &images, self)
    }

    /// Coefficient of `t^l` in `f(x_1, ..., x_j + t, ..., x_n)`.
    pub fn delta(&self, j: usize, l: u32, f: &Polynomial) -> Polynomial {
        if l == 0 {
            return f.clone();
        }
        let p = self.field.p() as u64;
        let mut terms = Vec::new();
        for (m, c) in &f.terms {
            let e = m.exps()[j] as u32;
            if e < l {
                continue;
            }
            let b = binomial_mod_p(e as u64, l as u64, p);
            if b == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[j] = (e - l) as Exponent;
            terms.push((Monomial(exps), self.field.mul(*c, self.field.from_int(b as i64))));
        }
        self.from_terms(terms)
    }

    /// `f` with the listed variables set to zero.
    pub fn evaluate_at_zero(&self, f: &Polynomial, vars: &[usize]) -> Polynomial {
        Polynomial {
            terms: f
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&v| m.exps()[v] == 0))
                .cloned()
                .collect(),
        }
    }

    // ---- text ---------------------------------------------------------

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.names[i].clone()),
                e => parts.push(format!("{}^{}", self.names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Descending terms, e.g. `z^3 + 2*x^2*z`.
    pub fn format(&self, f: &Polynomial) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in f.terms.iter().enumerate() {
            if idx > 0 {
                out.push_str(" + ");
            }
            let cs = self.field.format(*c);
            let compound = cs.contains('+') || cs.contains('*');
            if m.is_one() {
                out.push_str(&cs);
            } else if *c == Elem::ONE {
                out.push_str(&self.format_monomial(m));
            } else if compound {
                let _ = write!(out, "({})*{}", cs, self.format_monomial(m));
            } else {
                let _ = write!(out, "{}*{}", cs, self.format_monomial(m));
            }
        }
        out
    }

    /// Parse `+ - * ^ ( )`, integers, variable names, and `t` for the field
    /// generator (only when `t` is not a variable name).
    pub fn parse(&self, s: &str) -> Result<Polynomial> {
        let mut parser = Parser {
            ring: self,
            chars: s.chars().collect(),
            pos: 0,
        };
        let f = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.chars.len() {
            return Err(parser.err("unexpected trailing input"));
        }
        Ok(f)
    }
}

struct Parser<'a> {
    ring: &'a Ring,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            line: 1,
            column: self.pos + 1,
            message: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let r = self.ring;
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                let t = self.term()?;
                r.neg(&t)
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = r.add(&acc, &t);
                }
                Some('-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = r.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.ring.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("number out of range"))
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.number()?;
            return Ok(self.ring.pow(&base, e as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let r = self.ring;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.number()?;
                Ok(r.constant(r.field.from_int((v % r.field.p() as u64) as i64)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                if let Some(i) = r.names.iter().position(|n| *n == name) {
                    Ok(r.var(i))
                } else if name == "t" || name == "a" {
                    Ok(r.constant(r.field.generator()))
                } else {
                    self.pos = start;
                    Err(self.err(&format!("unknown variable '{name}'")))
                }
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Arc<FieldSpec> {
        FieldSpec::extension(3, vec![1, 0, 1]).unwrap()
    }

    fn xyz(field: Arc<FieldSpec>) -> Ring {
        Ring::deglex(field, 3).with_names(vec!["x".into(), "y".into(), "z".into()])
    }

    /// Reference comparator: rank every monomial of bounded degree by
    /// explicit sorting keys (degree, e_n, e_{n-1}, ..., e_1).
    fn brute_force_rank(monos: &[Monomial]) -> Vec<Monomial> {
        let mut v = monos.to_vec();
        v.sort_by_key(|m| {
            let mut key = vec![m.degree() as i64];
            key.extend(m.exps().iter().rev().map(|&e| e as i64));
            key
        });
        v
    }

    #[test]
    fn deglex_agrees_with_brute_force_enumeration() {
        let ring = xyz(FieldSpec::prime(3).unwrap());
        let mut monos = Vec::new();
        for a in 0..4u16 {
            for b in 0..4u16 {
                for c in 0..4u16 {
                    monos.push(Monomial::from_exps(&[a, b, c]));
                }
            }
        }
        let reference = brute_force_rank(&monos);
        let mut ours = monos.clone();
        ours.sort_by(|a, b| ring.cmp(a, b));
        assert_eq!(ours, reference);
    }

    #[test]
    fn leading_monomial_examples() {
        let ring = xyz(FieldSpec::prime(3).unwrap());
        let f = ring.parse("z^3 - x^2*z").unwrap();
        assert_eq!(ring.format_monomial(ring.leading_monomial(&f).unwrap()), "z^3");
        let x = ring.parse("x").unwrap();
        assert_eq!(ring.format_monomial(ring.leading_monomial(&x).unwrap()), "x");
        assert_eq!(ring.leading_monomial(&ring.zero()), Err(Error::UndefinedLeadingTerm));

        // Over F_9: the brute-force ranking places x^2*z above y^3.
        let r9 = xyz(f9());
        let g = r9.parse("(a-1)*y^3 - a*y*x^2 + z*x^2").unwrap();
        let lm = r9.leading_monomial(&g).unwrap().clone();
        let top = brute_force_rank(&g.monomials().cloned().collect::<Vec<_>>()).pop().unwrap();
        assert_eq!(lm, top);
        assert_eq!(r9.format_monomial(&lm), "x^2*z");
    }

    #[test]
    fn linear_substitution_examples() {
        let field = f9();
        let ring = xyz(field.clone());
        let a = field.generator();
        // sigma: y -> y + x, z -> z + x ; tau: y -> y + a x (columns are images)
        let sigma = Matrix::from_rows(vec![
            vec![Elem::ONE, Elem::ONE, Elem::ONE],
            vec![Elem::ZERO, Elem::ONE, Elem::ZERO],
            vec![Elem::ZERO, Elem::ZERO, Elem::ONE],
        ])
        .unwrap();
        let tau = Matrix::from_rows(vec![
            vec![Elem::ONE, a, Elem::ZERO],
            vec![Elem::ZERO, Elem::ONE, Elem::ZERO],
            vec![Elem::ZERO, Elem::ZERO, Elem::ONE],
        ])
        .unwrap();
        let z = ring.var(2);
        let y = ring.var(1);
        assert_eq!(ring.apply_linear_substitution(&z, &sigma).unwrap(), ring.parse("z + x").unwrap());
        assert_eq!(ring.apply_linear_substitution(&y, &tau).unwrap(), ring.parse("y + a*x").unwrap());
        let f = ring.parse("x*y^2 + z^5").unwrap();
        assert_eq!(ring.apply_linear_substitution(&f, &Matrix::identity(3)).unwrap(), f);
        assert!(ring.apply_linear_substitution(&f, &Matrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn delta_examples() {
        let ring = xyz(FieldSpec::prime(3).unwrap());
        let f = ring.parse("z^3 - x^2*z").unwrap();
        assert_eq!(ring.delta(2, 1, &f), ring.parse("2*x^2").unwrap());
        assert_eq!(ring.delta(2, 0, &f), f);
        let y3 = ring.parse("y^3").unwrap();
        assert_eq!(ring.delta(1, 3, &y3), ring.one());
        assert_eq!(ring.delta(1, 4, &y3), ring.zero());
    }

    #[test]
    fn evaluate_at_zero_examples() {
        let ring = xyz(f9());
        let f = ring.parse("x + y^3 + z*x^2").unwrap();
        assert_eq!(ring.evaluate_at_zero(&f, &[2]), ring.parse("x + y^3").unwrap());
        assert_eq!(ring.evaluate_at_zero(&f, &[]), f);
        let g = ring.parse("(a-1)*y^3 - a*y*x^2 + z*x^2").unwrap();
        assert!(ring.evaluate_at_zero(&g, &[1, 2]).is_zero());
    }

    #[test]
    fn text_form() {
        let ring = xyz(FieldSpec::prime(3).unwrap());
        let f = ring.parse("z^3 - x^2*z").unwrap();
        assert_eq!(ring.format(&f), "z^3 + 2*x^2*z");
        let r9 = xyz(f9());
        let g = r9.parse("(a+1)*x + 2").unwrap();
        assert_eq!(r9.format(&g), "(1+t)*x + 2");
        assert!(matches!(ring.parse("x + w"), Err(Error::Parse { column: 5, .. })));
    }

    #[test]
    fn lucas() {
        assert_eq!(binomial_mod_p(6, 3, 3), 2); // 20 mod 3
        assert_eq!(binomial_mod_p(9, 3, 3), 0);
        assert_eq!(binomial_mod_p(10, 4, 7), 210 % 7);
        for n in 0..30u64 {
            let mut row = vec![1u64];
            for k in 1..=n {
                row.push(row[k as usize - 1] * (n - k + 1) / k);
            }
            for k in 0..=n {
                assert_eq!(binomial_mod_p(n, k, 5), row[k as usize] % 5, "C({n},{k})");
            }
        }
    }

    #[test]
    fn elimination_order_puts_block_first() {
        let field = FieldSpec::prime(2).unwrap();
        let ring = Ring::new(field, 3, MonomialOrder::LexBlockElim { boundary: 1 });
        let x = Monomial::var(3, 0);
        let y5 = Monomial::var_pow(3, 2, 5);
        assert_eq!(ring.cmp(&x, &y5), Ordering::Greater);
    }
}
