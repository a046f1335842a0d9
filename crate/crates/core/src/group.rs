//! Finite matrix groups acting on `V* = span(x_1, ..., x_n)`.
//!
//! A matrix `M` acts by `x_i ↦ Σ_j M[j][i] x_j`: column `i` holds the
//! coordinates of `g(x_i)`, and the product `G·H` is the composite `g ∘ h`.
//! "Triangular coordinates" means every element is upper unitriangular, i.e.
//! `g(x_i) - x_i ∈ span(x_1, ..., x_{i-1})`.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};
use crate::linalg::{EchelonBasis, Matrix};
use crate::poly::{Polynomial, Ring};

pub const DEFAULT_GROUP_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub mat: Matrix,
    /// Generator word for provenance, e.g. `g1*g2*g3`.
    pub word: Option<String>,
}

impl GroupElement {
    pub fn new(mat: Matrix) -> Self {
        GroupElement { mat, word: None }
    }

    pub fn with_word(mat: Matrix, word: impl Into<String>) -> Self {
        GroupElement {
            mat,
            word: Some(word.into()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MatrixGroup {
    field: Arc<FieldSpec>,
    n: usize,
    generators: Vec<Matrix>,
    /// Sorted lexicographically.
    elements: Vec<Matrix>,
    index: HashSet<Matrix>,
}

impl PartialEq for MatrixGroup {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && *self.field == *other.field && self.elements == other.elements
    }
}

/// `(M - I)^n == 0`.
pub fn is_unipotent(m: &Matrix, field: &FieldSpec) -> bool {
    let n = m.rows();
    let nil = m.minus_identity(field);
    let mut acc = nil.clone();
    for _ in 1..n {
        acc = acc.mul(&nil, field);
    }
    acc.is_zero()
}

pub fn is_upper_unitriangular(m: &Matrix) -> bool {
    (0..m.rows()).all(|r| {
        (0..=r).all(|c| m.get(r, c) == if r == c { Elem::ONE } else { Elem::ZERO })
    })
}

/// Rank of `g - 1` is one and `(g - 1)^2 = 0`.
pub fn is_transvection(m: &Matrix, field: &FieldSpec) -> bool {
    let nil = m.minus_identity(field);
    !nil.is_zero() && nil.rank(field) == 1 && nil.mul(&nil, field).is_zero()
}

/// Largest (1-based) index `j` such that `x_j` occurs in some `g(x_i) - x_i`;
/// 0 for the identity.
pub fn beta(m: &Matrix, field: &FieldSpec) -> usize {
    let nil = m.minus_identity(field);
    (0..nil.rows())
        .rev()
        .find(|&r| nil.row(r).iter().any(|e| !e.is_zero()))
        .map_or(0, |r| r + 1)
}

/// The monic linear form spanning the image of `g - 1` on `V*`; it cuts out
/// the hyperplane of `V` fixed by `g`.
pub fn reflecting_hyperplane(ring: &Ring, m: &Matrix) -> Result<Polynomial> {
    let field = ring.field();
    if !is_transvection(m, field) {
        return Err(Error::usage("reflecting hyperplane requested for a non-transvection"));
    }
    let nil = m.minus_identity(field);
    let col = (0..nil.cols())
        .map(|c| nil.column(c))
        .find(|c| c.iter().any(|e| !e.is_zero()))
        .expect("rank one");
    Ok(ring.monic(&ring.linear_form(&col)))
}

impl MatrixGroup {
    /// Closure of `gens` by breadth-first products. With `p_group` set, every
    /// generator must be unipotent.
    pub fn generate(
        field: &Arc<FieldSpec>,
        n: usize,
        gens: &[Matrix],
        cap: usize,
        p_group: bool,
    ) -> Result<MatrixGroup> {
        for g in gens {
            if g.rows() != n || g.cols() != n {
                return Err(Error::usage(format!(
                    "generator is {}x{}, expected {n}x{n}",
                    g.rows(),
                    g.cols()
                )));
            }
            if !g.is_invertible(field) {
                return Err(Error::Validation("generator matrix is singular".into()));
            }
            if p_group && !is_unipotent(g, field) {
                return Err(Error::Validation(
                    "generator is not unipotent, so the group is not a p-group".into(),
                ));
            }
        }
        let identity = Matrix::identity(n);
        let mut index: HashSet<Matrix> = HashSet::new();
        index.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(e) = queue.pop_front() {
            for g in gens {
                let next = e.mul(g, field);
                if index.contains(&next) {
                    continue;
                }
                if index.len() >= cap {
                    return Err(Error::budget(
                        "group closure",
                        format!("more than {cap} elements"),
                    ));
                }
                index.insert(next.clone());
                queue.push_back(next);
            }
        }
        let mut elements: Vec<Matrix> = index.iter().cloned().collect();
        elements.sort();
        Ok(MatrixGroup {
            field: field.clone(),
            n,
            generators: gens.to_vec(),
            elements,
            index,
        })
    }

    pub fn trivial(field: &Arc<FieldSpec>, n: usize) -> MatrixGroup {
        Self::generate(field, n, &[], 1, true).expect("trivial group")
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.index.contains(m)
    }

    pub fn is_subgroup_of(&self, other: &MatrixGroup) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    /// Order is a power of `p` and every element is unipotent.
    pub fn is_p_group(&self) -> bool {
        let p = self.field.p() as usize;
        let mut o = self.order();
        while o.is_multiple_of(p) {
            o /= p;
        }
        o == 1 && self.generators.iter().all(|g| is_unipotent(g, &self.field))
    }

    pub fn is_triangular(&self) -> bool {
        self.generators.iter().all(is_upper_unitriangular)
    }

    pub fn subgroup(&self, gens: &[Matrix]) -> MatrixGroup {
        Self::generate(&self.field, self.n, gens, self.order().max(1), false)
            .expect("subgroup of a finite group fits in its order")
    }

    /// All transvections of the group, sorted lexicographically.
    pub fn transvections(&self) -> Vec<Matrix> {
        self.elements
            .iter()
            .filter(|m| is_transvection(m, &self.field))
            .cloned()
            .collect()
    }

    /// Subgroup generated by the transvections.
    pub fn transvection_subgroup(&self) -> MatrixGroup {
        self.subgroup(&self.transvections())
    }

    pub fn is_transvection_generated(&self) -> bool {
        self.transvection_subgroup().order() == self.order()
    }

    pub fn beta(&self, m: &Matrix) -> usize {
        beta(m, &self.field)
    }

    /// Whether the span of the variables other than `x_j` (0-based) is stable.
    pub fn is_terminal(&self, j: usize) -> bool {
        self.generators.iter().all(|g| (0..self.n).all(|i| i == j || g.get(j, i).is_zero()))
    }

    /// Maximum of `beta` over the transvections; 0 if there are none.
    pub fn beta_group(&self) -> usize {
        self.transvections().iter().map(|t| beta(t, &self.field)).max().unwrap_or(0)
    }

    /// Bases of `(V*)^G` (coefficient vectors of invariant linear forms) and
    /// of `V^G` (coordinates in the basis dual to `x_1, ..., x_n`).
    pub fn fixed_spaces(&self) -> (Vec<Vec<Elem>>, Vec<Vec<Elem>>) {
        let f = &*self.field;
        let n = self.n;
        let mut stacked = Vec::new();
        let mut stacked_t = Vec::new();
        for g in &self.generators {
            let nil = g.minus_identity(f);
            stacked.extend(nil.to_rows());
            stacked_t.extend(nil.transpose().to_rows());
        }
        if stacked.is_empty() {
            let id = Matrix::identity(n).to_rows();
            return (id.clone(), id);
        }
        let a = Matrix::from_rows(stacked).expect("square blocks");
        let b = Matrix::from_rows(stacked_t).expect("square blocks");
        (a.kernel(f), b.kernel(f))
    }

    pub fn rank_fixed_space(&self) -> usize {
        self.fixed_spaces().1.len()
    }

    /// The group with every element rewritten in the basis given by the
    /// columns of `p`: `M ↦ P^{-1} M P`.
    pub fn conjugate_by(&self, p: &Matrix) -> Result<MatrixGroup> {
        let f = &*self.field;
        let inv = p.inverse(f)?;
        let gens: Vec<Matrix> = self
            .generators
            .iter()
            .map(|g| inv.mul(g, f).mul(p, f))
            .collect();
        let mut index = HashSet::with_capacity(self.order());
        let mut elements: Vec<Matrix> = self
            .elements
            .iter()
            .map(|g| inv.mul(g, f).mul(p, f))
            .collect();
        elements.sort();
        for e in &elements {
            index.insert(e.clone());
        }
        Ok(MatrixGroup {
            field: self.field.clone(),
            n: self.n,
            generators: gens,
            elements,
            index,
        })
    }

    /// A base change after which every element is upper unitriangular.
    ///
    /// Recursively: the span `U` of all `(g - 1)x` is G-stable, so a
    /// triangular basis of `U` extended by any complement is triangular for
    /// `V*`. On `V` this puts a basis of `V^G` last.
    pub fn triangularize(&self) -> Result<Matrix> {
        if self.is_triangular() {
            return Ok(Matrix::identity(self.n));
        }
        let f = &*self.field;
        let full: Vec<Vec<Elem>> = Matrix::identity(self.n).to_rows();
        let basis = triangular_basis(&self.generators, full, f)?;
        let mut p = Matrix::zeros(self.n, self.n);
        for (c, v) in basis.iter().enumerate() {
            for (r, &x) in v.iter().enumerate() {
                p.set(r, c, x);
            }
        }
        let conj = self.conjugate_by(&p)?;
        if !conj.is_triangular() {
            return Err(Error::Internal("triangularization failed".into()));
        }
        Ok(p)
    }

    /// `{g | (g - 1)x_i ∈ span(x_j : j ∈ vars) for all i}` (0-based `vars`).
    pub fn inertia_subgroup(&self, vars: &[usize]) -> MatrixGroup {
        let f = &*self.field;
        let members: Vec<Matrix> = self
            .elements
            .iter()
            .filter(|g| {
                let nil = g.minus_identity(f);
                (0..self.n).all(|r| vars.contains(&r) || nil.row(r).iter().all(|e| e.is_zero()))
            })
            .cloned()
            .collect();
        self.subgroup(&members)
    }

    /// `P_k = {g | g x_j = x_j for j ≠ k}` for `k = n, ..., 1`, returned when
    /// `|P_n| ⋯ |P_1| = |G|`.
    pub fn nakajima_decomposition(&self) -> Option<Vec<MatrixGroup>> {
        let f = &*self.field;
        let mut factors = Vec::with_capacity(self.n);
        for k in (0..self.n).rev() {
            let members: Vec<Matrix> = self
                .elements
                .iter()
                .filter(|g| {
                    let nil = g.minus_identity(f);
                    (0..self.n).all(|c| c == k || nil.column(c).iter().all(|e| e.is_zero()))
                })
                .cloned()
                .collect();
            factors.push(self.subgroup(&members));
        }
        let product: usize = factors.iter().map(MatrixGroup::order).product();
        (product == self.order()).then_some(factors)
    }

    /// Normal subgroup test on element sets.
    pub fn is_normal_in(&self, big: &MatrixGroup) -> bool {
        let f = &*self.field;
        big.generators.iter().all(|g| {
            let inv = g.inverse(f).expect("invertible");
            self.generators
                .iter()
                .all(|h| self.contains(&g.mul(h, f).mul(&inv, f)))
        })
    }

    pub fn composition_series(&self) -> Result<CompositionSeries> {
        composition_series(self)
    }
}

fn triangular_basis(gens: &[Matrix], subspace: Vec<Vec<Elem>>, f: &FieldSpec) -> Result<Vec<Vec<Elem>>> {
    if subspace.is_empty() {
        return Ok(Vec::new());
    }
    let n = subspace[0].len();
    let mut image = EchelonBasis::new(n);
    let mut image_vectors = Vec::new();
    for g in gens {
        let nil = g.minus_identity(f);
        for u in &subspace {
            let v = nil.mul_vec(u, f);
            if image.insert(&v, f).is_some() {
                image_vectors.push(v);
            }
        }
    }
    if image.dim() >= subspace.len() {
        return Err(Error::Internal(
            "(g - 1) is not nilpotent on a stable subspace; not a p-group".into(),
        ));
    }
    let mut basis = triangular_basis(gens, image_vectors, f)?;
    let mut span = EchelonBasis::new(n);
    for v in &basis {
        span.insert(v, f);
    }
    for u in subspace {
        if span.insert(&u, f).is_some() {
            basis.push(u);
        }
    }
    Ok(basis)
}

/// A basis `l_1, ..., l_n` of `V*` with `(g - 1)l_i ∈ span(l_1, ..., l_{i-1})`
/// whose first vectors span the G-stable subspace `stable`.
pub fn adapted_triangular_basis(
    gens: &[Matrix],
    stable: &[Vec<Elem>],
    n: usize,
    f: &FieldSpec,
) -> Result<Vec<Vec<Elem>>> {
    let mut span = EchelonBasis::new(n);
    let mut independent = Vec::new();
    for v in stable {
        if span.insert(v, f).is_some() {
            independent.push(v.clone());
        }
    }
    let mut basis = triangular_basis(gens, independent, f)?;
    let mut span = EchelonBasis::new(n);
    for v in &basis {
        span.insert(v, f);
    }
    while basis.len() < n {
        // kernel of v ↦ ((g - 1)v mod span) over all generators
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        for g in gens {
            let nil = g.minus_identity(f);
            let cols: Vec<Vec<Elem>> = (0..n)
                .map(|i| {
                    let mut c = nil.column(i);
                    span.reduce(&mut c, f);
                    c
                })
                .collect();
            for r in 0..n {
                rows.push(cols.iter().map(|c| c[r]).collect());
            }
        }
        let candidates = if rows.is_empty() {
            Matrix::identity(n).to_rows()
        } else {
            Matrix::from_rows(rows)?.kernel(f)
        };
        let next = smallest_orbit(gens, &candidates, &span, f)
            .ok_or_else(|| Error::Internal("no fixed vector modulo a stable subspace".into()))?;
        span.insert(&next, f);
        basis.push(next);
    }
    Ok(basis)
}

const CANDIDATE_CAP: u64 = 2048;

/// A vector of the span of `candidates` outside `span` with the fewest
/// images under the group; all combinations are tried when there are few.
fn smallest_orbit(gens: &[Matrix], candidates: &[Vec<Elem>], span: &EchelonBasis, f: &FieldSpec) -> Option<Vec<Elem>> {
    let q = f.size() as u64;
    let dim = candidates.len() as u32;
    let pool: Vec<Vec<Elem>> = if dim > 0 && q.checked_pow(dim).is_some_and(|c| c <= CANDIDATE_CAP) {
        let elems: Vec<Elem> = f.elements().collect();
        let n = candidates[0].len();
        let mut out = Vec::new();
        for code in 1..q.pow(dim) {
            let mut v = vec![Elem::ZERO; n];
            let mut c = code;
            for cand in candidates {
                let a = elems[(c % q) as usize];
                c /= q;
                if !a.is_zero() {
                    for (x, &y) in v.iter_mut().zip(cand) {
                        *x = f.add(*x, f.mul(a, y));
                    }
                }
            }
            out.push(v);
        }
        out
    } else {
        candidates.to_vec()
    };
    pool.into_iter()
        .filter(|v| !span.contains(v, f))
        .map(|v| (orbit_len(gens, &v, f), v))
        .min_by_key(|(len, _)| *len)
        .map(|(_, v)| v)
}

fn orbit_len(gens: &[Matrix], v: &[Elem], f: &FieldSpec) -> usize {
    let mut seen: HashSet<Vec<Elem>> = HashSet::from([v.to_vec()]);
    let mut queue = vec![v.to_vec()];
    while let Some(u) = queue.pop() {
        for g in gens {
            let w = g.mul_vec(&u, f);
            if seen.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    seen.len()
}

/// Size of the orbit of the linear form with coefficient vector `l`.
pub fn linear_orbit_size(g: &MatrixGroup, l: &[Elem]) -> usize {
    let f = &*g.field;
    g.elements
        .iter()
        .map(|m| m.mul_vec(l, f))
        .collect::<HashSet<_>>()
        .len()
}

#[derive(Clone, Debug)]
pub struct CompositionSeries {
    /// `G_0 = 1 ⊂ G_1 ⊂ ... ⊂ G_k = G`.
    pub chain: Vec<MatrixGroup>,
    /// `witnesses[l - 1]` is a transvection whose class generates `G_l / G_{l-1}`.
    pub witnesses: Vec<Matrix>,
}

impl CompositionSeries {
    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Filtration by `G_l = ⟨t transvection | β_t ≤ l⟩`, refined one transvection
/// at a time, always adjoining the lexicographically smallest candidate.
pub fn composition_series(g: &MatrixGroup) -> Result<CompositionSeries> {
    if !g.is_triangular() {
        return Err(Error::usage("composition series needs triangular coordinates"));
    }
    let f = &*g.field;
    let p = f.p() as usize;
    let transvections = g.transvections();
    let mut current = MatrixGroup::trivial(&g.field, g.n);
    let mut chain = vec![current.clone()];
    let mut witnesses = Vec::new();
    for level in 1..=g.n {
        for t in transvections.iter().filter(|t| beta(t, f) == level) {
            if current.contains(t) {
                continue;
            }
            let mut gens = current.generators.clone();
            gens.push(t.clone());
            let next = g.subgroup(&gens);
            if next.order() != current.order() * p {
                return Err(Error::Internal(format!(
                    "refinement step has index {} instead of {p}",
                    next.order() / current.order()
                )));
            }
            witnesses.push(t.clone());
            chain.push(next.clone());
            current = next;
        }
    }
    if current.order() != g.order() {
        let offending: Vec<String> = g
            .generators
            .iter()
            .filter(|m| !current.contains(m))
            .map(|m| format!("{:?}", m.to_rows().iter().map(|r| r.iter().map(|e| e.0).collect::<Vec<_>>()).collect::<Vec<_>>()))
            .collect();
        return Err(Error::NotApplicable(format!(
            "group is not generated by transvections; generators outside the transvection subgroup: {}",
            offending.join(", ")
        )));
    }
    Ok(CompositionSeries { chain, witnesses })
}

/// Coordinate change making `sigma` move only `x_n`, keeping every `β`.
///
/// Returns the base-change matrix `P` (new basis in columns); the caller
/// conjugates with [`MatrixGroup::conjugate_by`].
pub fn sigma_normalize(gprime: &MatrixGroup, sigma: &Matrix) -> Result<Matrix> {
    let f = &*gprime.field;
    let n = gprime.n;
    if !is_transvection(sigma, f) {
        return Err(Error::usage("sigma is not a transvection"));
    }
    if gprime.contains(sigma) {
        return Err(Error::usage("sigma lies in G'"));
    }
    if !gprime.is_triangular() || !is_upper_unitriangular(sigma) {
        return Err(Error::usage("sigma normalization needs triangular coordinates"));
    }
    let nil = sigma.minus_identity(f);
    let moved = |i: usize| nil.column(i).iter().any(|e| !e.is_zero());
    let i_sigma = (0..n).rev().find(|&i| moved(i)).expect("sigma is not the identity");
    let beta_sigma = beta(sigma, f); // 1-based
    let direction = nil.column(i_sigma);
    let pivot = direction.iter().position(|e| !e.is_zero()).expect("nonzero");
    let lambda = |i: usize| -> Elem {
        let col = nil.column(i);
        f.div(col[pivot], direction[pivot]).expect("nonzero pivot")
    };
    let mut p = Matrix::zeros(n, n);
    for i in 0..n {
        if i < beta_sigma {
            p.set(i, i, Elem::ONE);
        } else if i == i_sigma {
            p.set(n - 1, i, Elem::ONE);
        } else if i == n - 1 {
            p.set(i_sigma, i, Elem::ONE);
        } else {
            p.set(i, i, Elem::ONE);
            p.set(i_sigma, i, f.neg(lambda(i)));
        }
    }
    let inv = p.inverse(f)?;
    let new_sigma = inv.mul(sigma, f).mul(&p, f);
    let new_nil = new_sigma.minus_identity(f);
    for i in 0..n - 1 {
        if new_nil.column(i).iter().any(|e| !e.is_zero()) {
            return Err(Error::Internal(format!(
                "after normalization sigma still moves x{}",
                i + 1
            )));
        }
    }
    if beta(&new_sigma, f) != beta_sigma {
        return Err(Error::Internal("beta of sigma changed".into()));
    }
    for t in gprime.transvections() {
        let conj = inv.mul(&t, f).mul(&p, f);
        if beta(&conj, f) != beta(&t, f) {
            return Err(Error::Internal("beta of a transvection in G' changed".into()));
        }
    }
    Ok(p)
}

/// Every transvection `I + a b^T` in the upper unitriangular group of
/// `GL_n(F_q)`, sorted lexicographically.
pub fn unipotent_transvections(field: &FieldSpec, n: usize, max_beta: usize) -> Vec<Matrix> {
    let q = field.size();
    let mut out: HashSet<Matrix> = HashSet::new();
    // A strictly upper triangular rank-one matrix is determined, up to
    // scaling the row vector, by a column vector supported on rows < s and a
    // row vector supported on columns >= s.
    for s in 1..n {
        if s > max_beta {
            break;
        }
        let rows = s;
        let cols = n - s;
        let col_count = (q as u64).pow(rows as u32);
        let row_count = (q as u64).pow(cols as u32);
        for ca in 1..col_count {
            let a = digits(ca, q, rows);
            // normalize: last nonzero entry of a is 1, so each matrix is produced once per split
            if a.iter().rev().find(|e| !e.is_zero()) != Some(&Elem::ONE) {
                continue;
            }
            for cb in 1..row_count {
                let b = digits(cb, q, cols);
                let mut m = Matrix::identity(n);
                for (r, &ar) in a.iter().enumerate() {
                    for (c, &bc) in b.iter().enumerate() {
                        m.set(r, s + c, field.add(m.get(r, s + c), field.mul(ar, bc)));
                    }
                }
                if beta(&m, field) <= max_beta {
                    out.insert(m);
                }
            }
        }
    }
    let mut v: Vec<Matrix> = out.into_iter().collect();
    v.sort();
    v
}

fn digits(mut code: u64, q: u32, len: usize) -> Vec<Elem> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(Elem((code % q as u64) as u32));
        code /= q as u64;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Ring;
    use crate::samples;

    fn mat(f: &FieldSpec, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| f.from_int(v)).collect()).collect()).unwrap()
    }

    /// Example with k = F_9: tau: y -> y + a x, sigma: y -> y + x, z -> z + x.
    fn two_transvections_f9() -> (Arc<FieldSpec>, Matrix, Matrix) {
        let f = FieldSpec::extension(3, vec![1, 0, 1]).unwrap();
        let a = f.generator();
        let tau = Matrix::from_rows(vec![
            vec![Elem::ONE, a, Elem::ZERO],
            vec![Elem::ZERO, Elem::ONE, Elem::ZERO],
            vec![Elem::ZERO, Elem::ZERO, Elem::ONE],
        ])
        .unwrap();
        let sigma = mat(&f, &[&[1, 1, 1], &[0, 1, 0], &[0, 0, 1]]);
        (f, sigma, tau)
    }

    /// g_1, g_2, g_3 over F_3 in dimension 5.
    fn dim5_generators() -> (Arc<FieldSpec>, Vec<Matrix>) {
        let f = FieldSpec::prime(3).unwrap();
        let mut g1 = Matrix::identity(5);
        g1.set(2, 3, Elem(1));
        g1.set(1, 3, Elem(1));
        let mut g2 = Matrix::identity(5);
        g2.set(2, 4, Elem(1));
        g2.set(1, 4, f.from_int(-1));
        g2.set(0, 4, Elem(1));
        let mut g3 = Matrix::identity(5);
        for c in [3, 4] {
            for r in 0..3 {
                g3.set(r, c, f.from_int(-1));
            }
        }
        (f, vec![g1, g2, g3])
    }

    #[test]
    fn generate_examples() {
        let (f, sigma, tau) = two_transvections_f9();
        let g = MatrixGroup::generate(&f, 3, &[sigma, tau], DEFAULT_GROUP_CAP, true).unwrap();
        assert_eq!(g.order(), 9);
        assert!(g.is_p_group());
        let t = MatrixGroup::generate(&f, 3, &[], DEFAULT_GROUP_CAP, true).unwrap();
        assert_eq!(t.order(), 1);
        let (f3, gens) = dim5_generators();
        let g = MatrixGroup::generate(&f3, 5, &gens, DEFAULT_GROUP_CAP, true).unwrap();
        assert_eq!(g.order(), 27);
    }

    #[test]
    fn generate_errors() {
        let (f3, gens) = dim5_generators();
        assert!(matches!(
            MatrixGroup::generate(&f3, 5, &gens, 10, true),
            Err(Error::Budget { .. })
        ));
        let diag = mat(&f3, &[&[2, 0], &[0, 1]]);
        assert!(matches!(
            MatrixGroup::generate(&f3, 2, &[diag], 100, true),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn fixed_space_examples() {
        let (f, sigma, tau) = two_transvections_f9();
        let g = MatrixGroup::generate(&f, 3, &[sigma, tau], DEFAULT_GROUP_CAP, true).unwrap();
        let (dual, fixed) = g.fixed_spaces();
        assert_eq!(dual, vec![vec![Elem::ONE, Elem::ZERO, Elem::ZERO]]);
        assert_eq!(fixed.len(), 2);
        // V^G = ker(x) = span(v2, v3)
        assert!(fixed.iter().all(|v| v[0].is_zero()));
        let t = MatrixGroup::trivial(&f, 3);
        let (d, v) = t.fixed_spaces();
        assert_eq!((d.len(), v.len()), (3, 3));
    }

    #[test]
    fn transvection_examples() {
        let (f, sigma, _) = two_transvections_f9();
        assert!(is_transvection(&sigma, &f));
        assert!(!is_transvection(&Matrix::identity(3), &f));
        let (f3, gens) = dim5_generators();
        let prod = gens[0].mul(&gens[1], &f3).mul(&gens[2], &f3);
        assert!(!is_transvection(&prod, &f3));
    }

    #[test]
    fn reflecting_hyperplane_examples() {
        let (f, sigma, tau) = two_transvections_f9();
        let ring = Ring::deglex(f.clone(), 3).with_names(vec!["x".into(), "y".into(), "z".into()]);
        assert_eq!(ring.format(&reflecting_hyperplane(&ring, &tau).unwrap()), "x");
        assert_eq!(ring.format(&reflecting_hyperplane(&ring, &sigma).unwrap()), "x");
        let f5 = FieldSpec::prime(5).unwrap();
        let r4 = Ring::deglex(f5.clone(), 4);
        let mut s = Matrix::identity(4);
        s.set(0, 3, Elem(1));
        assert_eq!(r4.format(&reflecting_hyperplane(&r4, &s).unwrap()), "x1");
        assert!(reflecting_hyperplane(&r4, &Matrix::identity(4)).is_err());
    }

    #[test]
    fn beta_examples() {
        let (f3, gens) = dim5_generators();
        assert_eq!(beta(&gens[0], &f3), 3);
        assert_eq!(beta(&Matrix::identity(5), &f3), 0);
        let prod = gens[0].mul(&gens[1], &f3).mul(&gens[2], &f3);
        assert_eq!(beta(&prod, &f3), 2);
        // (g)x_4 - x_4 = -x_1 and (g)x_5 - x_5 = x_2
        let nil = prod.minus_identity(&f3);
        assert_eq!(nil.column(3), vec![f3.from_int(-1), Elem(0), Elem(0), Elem(0), Elem(0)]);
        assert_eq!(nil.column(4), vec![Elem(0), Elem(1), Elem(0), Elem(0), Elem(0)]);
    }

    #[test]
    fn composition_series_examples() {
        let f3 = FieldSpec::prime(3).unwrap();
        let s = mat(&f3, &[&[1, 1], &[0, 1]]);
        let cyc = MatrixGroup::generate(&f3, 2, &[s], 100, true).unwrap();
        let cs = cyc.composition_series().unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs.chain.last().unwrap().order(), 3);

        let (f, sigma, tau) = two_transvections_f9();
        let g = MatrixGroup::generate(&f, 3, &[sigma, tau], DEFAULT_GROUP_CAP, true).unwrap();
        let cs = g.composition_series().unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs.chain.iter().map(MatrixGroup::order).collect::<Vec<_>>(), vec![1, 3, 9]);

        let (f3, gens) = dim5_generators();
        let g = MatrixGroup::generate(&f3, 5, &gens, DEFAULT_GROUP_CAP, true).unwrap();
        let cs = g.composition_series().unwrap();
        assert_eq!(cs.len(), 3);
        assert!(cs.witnesses.iter().all(|w| beta(w, &f3) == 3));
    }

    #[test]
    fn composition_series_rejects_non_transvection_groups() {
        let f3 = FieldSpec::prime(3).unwrap();
        let jordan = mat(&f3, &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        let g = MatrixGroup::generate(&f3, 3, &[jordan], 100, true).unwrap();
        assert_eq!(g.order(), 3);
        assert!(matches!(g.composition_series(), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn terminal_variables() {
        let (f, gens) = samples::f9_two_transvections();
        let g = samples::group(&f, &gens);
        assert!(g.is_terminal(2));
        assert!(g.is_terminal(1));
        assert!(!g.is_terminal(0));
        let (f, j) = samples::jordan_block(2, 3);
        let g = samples::group(&f, &[j]);
        assert!(g.is_terminal(2));
        assert!(!g.is_terminal(1));
    }

    #[test]
    fn inertia_examples() {
        let (f3, gens) = dim5_generators();
        let g = MatrixGroup::generate(&f3, 5, &gens, DEFAULT_GROUP_CAP, true).unwrap();
        let i12 = g.inertia_subgroup(&[0, 1]);
        assert_eq!(i12.order(), 3);
        let prod = gens[0].mul(&gens[1], &f3).mul(&gens[2], &f3);
        assert!(i12.contains(&prod));
        assert_eq!(g.inertia_subgroup(&[0, 1, 2, 3, 4]).order(), 27);
        assert_eq!(g.inertia_subgroup(&[]).order(), 1);
        assert_eq!(g.inertia_subgroup(&[0, 1, 2]).order(), 27);
    }

    #[test]
    fn nakajima_examples() {
        let (f, sigma, tau) = two_transvections_f9();
        let g = MatrixGroup::generate(&f, 3, &[sigma, tau], DEFAULT_GROUP_CAP, true).unwrap();
        // P_3 = 1, P_2 = <tau>, P_1 = 1: product 3 != 9
        assert!(g.nakajima_decomposition().is_none());
        let t = MatrixGroup::trivial(&f, 3);
        let parts = t.nakajima_decomposition().unwrap();
        assert!(parts.iter().all(|p| p.order() == 1));
        let f5 = FieldSpec::prime(5).unwrap();
        let mut s = Matrix::identity(4);
        s.set(0, 3, Elem(1));
        let g = MatrixGroup::generate(&f5, 4, &[s], 100, true).unwrap();
        let parts = g.nakajima_decomposition().unwrap();
        assert_eq!(parts[0].order(), 5);
    }

    #[test]
    fn triangularize_examples() {
        let (f3, gens) = dim5_generators();
        let g = MatrixGroup::generate(&f3, 5, &gens, DEFAULT_GROUP_CAP, true).unwrap();
        assert!(g.triangularize().unwrap().is_identity());
        // conjugate by a permutation-with-shear to destroy triangularity
        let m = mat(&f3, &[&[0, 0, 0, 1, 0], &[1, 0, 0, 0, 0], &[0, 1, 1, 0, 0], &[0, 0, 1, 0, 0], &[0, 0, 0, 0, 1]]);
        let h = g.conjugate_by(&m).unwrap();
        assert!(!h.is_triangular());
        let p = h.triangularize().unwrap();
        let back = h.conjugate_by(&p).unwrap();
        assert!(back.is_triangular());
        assert_eq!(back.order(), 27);
    }

    #[test]
    fn sigma_normalize_examples() {
        let f3 = FieldSpec::prime(3).unwrap();
        let trivial = MatrixGroup::trivial(&f3, 5);
        let mut s = Matrix::identity(5);
        s.set(0, 4, Elem(1));
        assert!(sigma_normalize(&trivial, &s).unwrap().is_identity());

        let mut s = Matrix::identity(5);
        s.set(0, 3, Elem(1));
        s.set(0, 4, Elem(2));
        let p = sigma_normalize(&trivial, &s).unwrap();
        let inv = p.inverse(&f3).unwrap();
        let ns = inv.mul(&s, &f3).mul(&p, &f3);
        let nil = ns.minus_identity(&f3);
        for i in 0..4 {
            assert!(nil.column(i).iter().all(|e| e.is_zero()));
        }

        // sigma moving x_4 only: normalization swaps x_4 and x_5
        let mut s = Matrix::identity(5);
        s.set(1, 3, Elem(1));
        let mut tau = Matrix::identity(5);
        tau.set(0, 4, Elem(1));
        tau.set(0, 2, Elem(1));
        let gp = MatrixGroup::generate(&f3, 5, &[tau.clone()], 100, true).unwrap();
        let p = sigma_normalize(&gp, &s).unwrap();
        let inv = p.inverse(&f3).unwrap();
        let nt = inv.mul(&tau, &f3).mul(&p, &f3);
        assert_eq!(beta(&nt, &f3), beta(&tau, &f3));
        assert!(sigma_normalize(&gp, &tau).is_err());
    }

    #[test]
    fn transvection_census() {
        let f2 = FieldSpec::prime(2).unwrap();
        // strictly upper triangular rank-one 3x3 over F_2: row 1 (cols 2,3) or column 3 (rows 1,2)
        assert_eq!(unipotent_transvections(&f2, 3, 3).len(), 3 + 3 - 1);
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(unipotent_transvections(&f3, 3, 3).len(), 8 + 8 - 2);
        assert_eq!(unipotent_transvections(&f3, 2, 2).len(), 2);
        for t in unipotent_transvections(&f3, 4, 4) {
            assert!(is_transvection(&t, &f3));
            assert!(is_upper_unitriangular(&t));
        }
    }
}
