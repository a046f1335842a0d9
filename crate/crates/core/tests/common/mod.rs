#![allow(dead_code)]

use std::collections::HashMap;

use modinv::gf::{Elem, FieldSpec};
use modinv::grobner::monomials_of_degree;
use modinv::group::MatrixGroup;
use modinv::linalg::EchelonBasis;
use modinv::poly::{binomial_mod_p, Exponent, Monomial, Polynomial, Ring};
use rand::Rng;

pub fn random_elem<R: Rng>(field: &FieldSpec, rng: &mut R) -> Elem {
    let q = field.size();
    field.elements().nth(rng.gen_range(0..q) as usize).expect("in range")
}

pub fn random_monomial<R: Rng>(n: usize, degree: u32, rng: &mut R) -> Monomial {
    let mut exps = vec![0 as Exponent; n];
    for _ in 0..degree {
        exps[rng.gen_range(0..n)] += 1;
    }
    Monomial::from_exps(&exps)
}

/// Up to `terms` random terms of total degree at most `max_degree`.
pub fn random_poly<R: Rng>(ring: &Ring, max_degree: u32, terms: usize, rng: &mut R) -> Polynomial {
    let n = ring.nvars();
    let t = (0..terms)
        .map(|_| {
            let d = rng.gen_range(0..=max_degree);
            (random_monomial(n, d, rng), random_elem(ring.field(), rng))
        })
        .collect();
    ring.from_terms(t)
}

pub fn random_homogeneous<R: Rng>(ring: &Ring, degree: u32, terms: usize, rng: &mut R) -> Polynomial {
    let n = ring.nvars();
    let t = (0..terms).map(|_| (random_monomial(n, degree, rng), random_elem(ring.field(), rng))).collect();
    ring.from_terms(t)
}

/// `Δ^(s) Δ^(t) f = C(s+t, s) Δ^(s+t) f`.
pub fn iterative(ring: &Ring, j: usize, s: u32, t: u32, f: &Polynomial) -> bool {
    let p = ring.field().p() as u64;
    let lhs = ring.delta(j, s, &ring.delta(j, t, f));
    let b = binomial_mod_p((s + t) as u64, s as u64, p) as i64;
    let rhs = ring.scale(&ring.delta(j, s + t, f), ring.field().from_int(b));
    lhs == rhs
}

/// `Δ^(l)(fg) = Σ Δ^(u) f · Δ^(l-u) g`.
pub fn leibniz(ring: &Ring, j: usize, l: u32, f: &Polynomial, g: &Polynomial) -> bool {
    let lhs = ring.delta(j, l, &ring.mul(f, g));
    let mut rhs = ring.zero();
    for u in 0..=l {
        rhs = ring.add(&rhs, &ring.mul(&ring.delta(j, u, f), &ring.delta(j, l - u, g)));
    }
    lhs == rhs
}

/// `Δ_j^(l)` commutes with every element of `group`.
pub fn equivariant(ring: &Ring, group: &MatrixGroup, j: usize, l: u32, f: &Polynomial) -> bool {
    let df = ring.delta(j, l, f);
    group
        .elements()
        .iter()
        .all(|g| ring.delta(j, l, &ring.apply_matrix_unchecked(f, g)) == ring.apply_matrix_unchecked(&df, g))
}

/// `Σ_t (-1)^{|t|} x_r^{t_r} ⋯ x_n^{t_n} Δ_r^(t_r) ⋯ Δ_n^(t_n) F` equals `F`
/// with `x_r, ..., x_n` set to zero (`r` is 0-based).
pub fn extraction(ring: &Ring, r: usize, f: &Polynomial) -> bool {
    let n = ring.nvars();
    let block: Vec<usize> = (r..n).collect();
    let bounds: Vec<u32> = block.iter().map(|&v| ring.degree_in(f, v)).collect();
    let minus_one = ring.field().from_int(-1);
    let mut sum = ring.zero();
    let mut t = vec![0u32; block.len()];
    loop {
        let mut term = f.clone();
        for (k, &v) in block.iter().enumerate() {
            term = ring.delta(v, t[k], &term);
        }
        let mut exps = vec![0 as Exponent; n];
        for (k, &v) in block.iter().enumerate() {
            exps[v] = t[k] as Exponent;
        }
        let total: u32 = t.iter().sum();
        let sign = if total.is_multiple_of(2) { Elem::ONE } else { minus_one };
        sum = ring.add(&sum, &ring.mul_term(&term, &Monomial::from_exps(&exps), sign));
        // next tuple
        let mut k = 0;
        while k < t.len() {
            if t[k] < bounds[k] {
                t[k] += 1;
                break;
            }
            t[k] = 0;
            k += 1;
        }
        if k == t.len() {
            break;
        }
    }
    sum == ring.evaluate_at_zero(f, &block)
}

/// Membership of a homogeneous `f` in the ideal generated by homogeneous
/// `gens`, decided in the degree slice by linear algebra.
pub fn slice_member(ring: &Ring, gens: &[Polynomial], f: &Polynomial) -> bool {
    if f.is_zero() {
        return true;
    }
    let d = ring.degree(f).expect("nonzero");
    let monos = monomials_of_degree(ring, d);
    let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let vector = |p: &Polynomial| {
        let mut v = vec![Elem::ZERO; monos.len()];
        for (m, c) in p.terms() {
            v[index[m]] = *c;
        }
        v
    };
    let field = ring.field();
    let mut span = EchelonBasis::new(monos.len());
    for g in gens {
        let Some(e) = ring.degree(g) else { continue };
        if e > d {
            continue;
        }
        for m in monomials_of_degree(ring, d - e) {
            span.insert(&vector(&ring.mul_term(g, &m, Elem::ONE)), field);
        }
    }
    span.contains(&vector(f), field)
}
