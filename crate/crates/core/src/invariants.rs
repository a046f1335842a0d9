//! Invariant rings `S^G`, Hilbert ideals and relative Hilbert ideals.
//!
//! Homogeneous invariants of degree `d` are computed as the common kernel of
//! `g - 1` on the monomial basis of `S_d`, `g` ranging over the generators.
//! Completeness of generating sets is certified by the degree bound
//! `max(max d_i, Σ (d_i - 1))`, where the `d_i` are the degrees of the orbit
//! products of a triangular basis (a homogeneous system of parameters; the
//! invariant ring is generated over it in degrees at most `Σ (d_i - 1)`), or
//! earlier when the generated Hilbert ideal has colength `|G|`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};
use crate::grobner::{
    self, buchberger, cmp_by_leading, elimination_ideal, embed, minimal_generator_count, monomials_of_degree,
    normal_form, project, Colength, GbConfig, IdealBasis,
};
use crate::group::{adapted_triangular_basis, linear_orbit_size, MatrixGroup};
use crate::linalg::{EchelonBasis, Matrix};
use crate::poly::{Monomial, MonomialOrder, Polynomial, Ring};

pub const DEFAULT_MONOMIAL_CAP: usize = 40_000;

#[derive(Clone, Copy, Debug)]
pub struct InvariantOptions {
    /// Largest degree examined; `None` means the certification bound.
    pub degree_bound: Option<u32>,
    /// Skip degrees whose monomial count exceeds this.
    pub monomial_cap: usize,
    pub gb: GbConfig,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        InvariantOptions {
            degree_bound: None,
            monomial_cap: DEFAULT_MONOMIAL_CAP,
            gb: GbConfig::default(),
        }
    }
}

/// Monomials of one degree with the action of every generator on them.
struct DegreeData {
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// `images[k][i]`: sparse image of `monos[i]` under generator `k`.
    images: Vec<Vec<Vec<(u32, Elem)>>>,
}

/// A group acting on a polynomial ring, with per-degree caches.
pub struct InvariantRing {
    group: MatrixGroup,
    ring: Ring,
    degrees: Mutex<Vec<Arc<DegreeData>>>,
    spaces: Mutex<BTreeMap<u32, Arc<Vec<Polynomial>>>>,
}

impl std::fmt::Debug for InvariantRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InvariantRing")
            .field("n", &self.group.n())
            .field("order", &self.group.order())
            .finish()
    }
}

/// How completeness of a generating set was established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    /// `n` generators whose ideal has colength `|G|`: `S^G` is polynomial.
    Polynomial,
    /// Every degree up to the generation bound was examined.
    DegreeBound(u32),
    /// Stopped at the given degree before the bound.
    Uncertified { reached: u32, bound: u32 },
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        !matches!(self, Certification::Uncertified { .. })
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    /// Homogeneous, monic, strictly increasing leading monomials.
    pub generators: Vec<Polynomial>,
    pub certification: Certification,
    /// 1-based index of the unique generator outside a smaller invariant ring
    /// (set by step analysis).
    pub i0: Option<usize>,
    /// 1-based index of the unique generator whose leading monomial is a
    /// power of `x_n`.
    pub i1: Option<usize>,
}

impl GeneratorSet {
    pub fn degrees(&self, ring: &Ring) -> Vec<u32> {
        self.generators.iter().map(|g| ring.degree(g).unwrap_or(0)).collect()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Per-degree bases of `S^G_d` for `d ≤ bound`.
#[derive(Clone, Debug)]
pub struct GradedInvariantBasis {
    pub bound: u32,
    pub by_degree: Vec<Vec<Polynomial>>,
}

impl GradedInvariantBasis {
    pub fn dims(&self) -> Vec<usize> {
        self.by_degree.iter().map(Vec::len).collect()
    }
}

/// Coefficient vector of a homogeneous polynomial over the given monomials.
fn to_vector(f: &Polynomial, index: &HashMap<Monomial, usize>, len: usize) -> Vec<Elem> {
    let mut v = vec![Elem::ZERO; len];
    for (m, c) in f.terms() {
        v[index[m]] = *c;
    }
    v
}

fn from_vector(ring: &Ring, monos: &[Monomial], v: &[Elem]) -> Polynomial {
    ring.from_terms(
        monos
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.clone(), *c))
            .collect(),
    )
}

fn mono_index(monos: &[Monomial]) -> HashMap<Monomial, usize> {
    monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect()
}

/// Fully reduced echelon form of a set of homogeneous polynomials of one
/// degree: monic, distinct leading monomials, each leading monomial absent
/// from the others. Sorted by increasing leading monomial.
pub fn canonical_basis(ring: &Ring, polys: &[Polynomial]) -> Vec<Polynomial> {
    let polys: Vec<&Polynomial> = polys.iter().filter(|p| !p.is_zero()).collect();
    if polys.is_empty() {
        return Vec::new();
    }
    let mut monos: Vec<Monomial> = polys
        .iter()
        .flat_map(|p| p.monomials().cloned())
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    monos.sort_by(|a, b| ring.cmp(b, a));
    let index = mono_index(&monos);
    let mut eb = EchelonBasis::new(monos.len());
    for p in polys {
        eb.insert(&to_vector(p, &index, monos.len()), ring.field());
    }
    let mut out: Vec<Polynomial> = eb
        .reduced_rows()
        .iter()
        .map(|r| ring.monic(&from_vector(ring, &monos, r)))
        .collect();
    out.sort_by(|a, b| grobner::cmp_by_leading(ring, a, b));
    out
}

/// Canonical form of an algebra generating set: degree by degree, each
/// generator is reduced modulo the span of products of lower-degree ones and
/// the degree slice is put in fully reduced echelon form.
pub fn canonicalize_generators(ring: &Ring, gens: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let mut by_deg: BTreeMap<u32, Vec<Polynomial>> = BTreeMap::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        if !ring.is_homogeneous(g) {
            return Err(Error::usage("generators must be homogeneous"));
        }
        by_deg.entry(ring.degree(g).unwrap()).or_default().push(g.clone());
    }
    let mut products = ProductSpaces::new(ring);
    let mut out = Vec::new();
    for (d, group) in by_deg {
        let new = products.complement(ring, d, &group, &out);
        out.extend(new);
    }
    Ok(out)
}

/// Monomials, their index, an echelon basis and the spanning polynomials.
type ProductSpace = (Vec<Monomial>, HashMap<Monomial, usize>, EchelonBasis, Vec<Polynomial>);

/// Spans `B_d` of products of a growing list of generators.
struct ProductSpaces {
    cache: BTreeMap<u32, ProductSpace>,
}

impl ProductSpaces {
    fn new(_ring: &Ring) -> Self {
        ProductSpaces { cache: BTreeMap::new() }
    }

    /// Basis polynomials of the span of products of `gens` in degree `d`.
    fn span(&mut self, ring: &Ring, d: u32, gens: &[Polynomial]) -> &(Vec<Monomial>, HashMap<Monomial, usize>, EchelonBasis, Vec<Polynomial>) {
        if !self.cache.contains_key(&d) {
            let monos = monomials_of_degree(ring, d);
            let index = mono_index(&monos);
            let mut eb = EchelonBasis::new(monos.len());
            let mut basis = Vec::new();
            if d == 0 {
                eb.insert(&[Elem::ONE], ring.field());
                basis.push(ring.one());
            } else {
                for g in gens {
                    let dg = ring.degree(g).unwrap();
                    if dg > d {
                        continue;
                    }
                    let lower = self.span(ring, d - dg, gens).3.clone();
                    for b in &lower {
                        let prod = ring.mul(g, b);
                        if eb.insert(&to_vector(&prod, &index, monos.len()), ring.field()).is_some() {
                            basis.push(prod);
                        }
                    }
                }
            }
            self.cache.insert(d, (monos, index, eb, basis));
        }
        &self.cache[&d]
    }

    /// New generators of degree `d`: a canonical complement of the products
    /// of `earlier` inside the span of `candidates`.
    fn complement(&mut self, ring: &Ring, d: u32, candidates: &[Polynomial], earlier: &[Polynomial]) -> Vec<Polynomial> {
        // generators of degree d never contribute to lower-degree products,
        // but the cache for degree d must be rebuilt once they are added
        self.cache.retain(|&k, _| k < d);
        let f = ring.field().clone();
        let (monos, index, eb, _) = self.span(ring, d, earlier);
        let mut rest = EchelonBasis::new(monos.len());
        for c in candidates {
            let mut v = to_vector(c, index, monos.len());
            eb.reduce(&mut v, &f);
            rest.insert(&v, &f);
        }
        // zero out B_d pivots in the remainder rows, then reduce among themselves
        let rows: Vec<Vec<Elem>> = rest
            .reduced_rows()
            .into_iter()
            .map(|mut r| {
                eb.reduce(&mut r, &f);
                r
            })
            .collect();
        let polys: Vec<Polynomial> = rows.iter().map(|r| from_vector(ring, monos, r)).collect();
        let out = canonical_basis(ring, &polys);
        self.cache.retain(|&k, _| k < d);
        out
    }
}

impl InvariantRing {
    pub fn new(group: MatrixGroup, ring: Ring) -> Result<Self> {
        if ring.nvars() != group.n() {
            return Err(Error::usage(format!(
                "ring has {} variables, group acts on dimension {}",
                ring.nvars(),
                group.n()
            )));
        }
        if **ring.field() != **group.field() {
            return Err(Error::usage("ring and group are over different fields"));
        }
        Ok(InvariantRing {
            group,
            ring,
            degrees: Mutex::new(Vec::new()),
            spaces: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn group(&self) -> &MatrixGroup {
        &self.group
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    fn field(&self) -> &FieldSpec {
        self.ring.field()
    }

    fn degree_data(&self, d: u32) -> Arc<DegreeData> {
        let mut cache = self.degrees.lock().unwrap();
        while cache.len() <= d as usize {
            let next = match cache.last() {
                None => self.degree_zero(),
                Some(prev) => self.next_degree(prev),
            };
            cache.push(Arc::new(next));
        }
        cache[d as usize].clone()
    }

    fn degree_zero(&self) -> DegreeData {
        let monos = vec![Monomial::one(self.group.n())];
        let index = mono_index(&monos);
        let images = self
            .group
            .generators()
            .iter()
            .map(|_| vec![vec![(0u32, Elem::ONE)]])
            .collect();
        DegreeData { monos, index, images }
    }

    /// `g(m) = g(m / x_j) · g(x_j)` with `x_j` the first variable of `m`.
    fn next_degree(&self, prev: &DegreeData) -> DegreeData {
        let n = self.group.n();
        let f = self.field();
        let d = prev.monos[0].degree() + 1;
        let monos = monomials_of_degree(&self.ring, d);
        let index = mono_index(&monos);
        let times_var: Vec<Vec<u32>> = prev
            .monos
            .iter()
            .map(|m| (0..n).map(|v| index[&m.mul(&Monomial::var(n, v))] as u32).collect())
            .collect();
        let mut scratch = vec![Elem::ZERO; monos.len()];
        let mut touched: Vec<u32> = Vec::new();
        let images = self
            .group
            .generators()
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let columns: Vec<Vec<(usize, Elem)>> = (0..n)
                    .map(|j| {
                        g.column(j)
                            .into_iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .collect()
                    })
                    .collect();
                monos
                    .iter()
                    .map(|m| {
                        let j = m.support().next().expect("positive degree");
                        let q = Monomial::var(n, j).quotient_of(m).expect("divides");
                        for &(t, c) in &prev.images[k][prev.index[&q]] {
                            for &(v, a) in &columns[j] {
                                let target = times_var[t as usize][v];
                                let slot = &mut scratch[target as usize];
                                if slot.is_zero() {
                                    touched.push(target);
                                }
                                *slot = f.add(*slot, f.mul(c, a));
                            }
                        }
                        touched.sort_unstable();
                        let out: Vec<(u32, Elem)> = touched
                            .iter()
                            .filter_map(|&t| {
                                let c = std::mem::replace(&mut scratch[t as usize], Elem::ZERO);
                                (!c.is_zero()).then_some((t, c))
                            })
                            .collect();
                        touched.clear();
                        out
                    })
                    .collect()
            })
            .collect();
        DegreeData { monos, index, images }
    }

    /// Number of monomials of degree `d`.
    pub fn monomial_count(&self, d: u32) -> usize {
        let n = self.group.n() as u64;
        // C(d + n - 1, n - 1)
        let mut c: u64 = 1;
        for i in 0..n.saturating_sub(1) {
            c = c * (d as u64 + i + 1) / (i + 1);
        }
        c as usize
    }

    /// Basis of `S^G_d`: fully reduced echelon form, monic, increasing
    /// leading monomials.
    pub fn invariant_space(&self, d: u32) -> Arc<Vec<Polynomial>> {
        if let Some(v) = self.spaces.lock().unwrap().get(&d) {
            return v.clone();
        }
        let data = self.degree_data(d);
        let basis = Arc::new(self.compute_space(&data));
        self.spaces.lock().unwrap().insert(d, basis.clone());
        basis
    }

    fn compute_space(&self, data: &DegreeData) -> Vec<Polynomial> {
        let f = self.field();
        let len = data.monos.len();
        // current kernel basis as dense vectors; None = all of S_d
        let mut basis: Option<Vec<Vec<Elem>>> = None;
        for images in &data.images {
            let cols: Vec<Vec<Elem>> = match &basis {
                None => (0..len)
                    .map(|i| {
                        let mut v = vec![Elem::ZERO; len];
                        for &(t, c) in &images[i] {
                            v[t as usize] = c;
                        }
                        v[i] = f.sub(v[i], Elem::ONE);
                        v
                    })
                    .collect(),
                Some(b) => b
                    .iter()
                    .map(|u| {
                        let mut v = vec![Elem::ZERO; len];
                        for (i, &ui) in u.iter().enumerate() {
                            if ui.is_zero() {
                                continue;
                            }
                            for &(t, c) in &images[i] {
                                v[t as usize] = f.add(v[t as usize], f.mul(ui, c));
                            }
                            v[i] = f.sub(v[i], ui);
                        }
                        v
                    })
                    .collect(),
            };
            if cols.is_empty() {
                break;
            }
            let kernel = kernel_of_columns(&cols, f);
            basis = Some(match &basis {
                None => kernel,
                Some(b) => kernel
                    .iter()
                    .map(|k| {
                        let mut v = vec![Elem::ZERO; len];
                        for (j, &kj) in k.iter().enumerate() {
                            if kj.is_zero() {
                                continue;
                            }
                            for (vi, &bj) in v.iter_mut().zip(&b[j]) {
                                *vi = f.add(*vi, f.mul(kj, bj));
                            }
                        }
                        v
                    })
                    .collect(),
            });
        }
        let vectors = basis.unwrap_or_else(|| Matrix::identity(len).to_rows());
        let mut eb = EchelonBasis::new(len);
        for v in &vectors {
            eb.insert(v, f);
        }
        let mut out: Vec<Polynomial> = eb
            .reduced_rows()
            .iter()
            .map(|r| self.ring.monic(&from_vector(&self.ring, &data.monos, r)))
            .collect();
        out.sort_by(|a, b| grobner::cmp_by_leading(&self.ring, a, b));
        out
    }

    /// Bases of `S^G_d` for `1 ≤ d ≤ bound` (index 0 holds degree 0),
    /// computed in parallel across degrees.
    pub fn graded_basis(&self, bound: u32) -> GradedInvariantBasis {
        self.degree_data(bound);
        let by_degree: Vec<Vec<Polynomial>> = (0..=bound)
            .into_par_iter()
            .map(|d| self.invariant_space(d).as_ref().clone())
            .collect();
        GradedInvariantBasis { bound, by_degree }
    }

    pub fn is_invariant(&self, f: &Polynomial) -> bool {
        self.group
            .generators()
            .iter()
            .all(|g| self.ring.apply_matrix_unchecked(f, g) == *f)
    }

    /// Product of the distinct elements of the orbit of `f`.
    pub fn orbit_product(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.is_zero() {
            return Err(Error::usage("orbit product of the zero polynomial"));
        }
        let orbit = self.orbit(f);
        Ok(self.ring.product(orbit.iter()))
    }

    pub fn orbit(&self, f: &Polynomial) -> Vec<Polynomial> {
        let mut seen: Vec<Polynomial> = Vec::new();
        for g in self.group.elements() {
            let img = self.ring.apply_matrix_unchecked(f, g);
            if !seen.contains(&img) {
                seen.push(img);
            }
        }
        seen
    }

    /// Orbit sizes of a triangular basis whose first vectors span `stable`,
    /// and the resulting generation bound `max(max d_i, Σ (d_i - 1))`.
    pub fn hsop_bound(&self, stable: &[Vec<Elem>]) -> Result<(Vec<usize>, u32)> {
        let basis = adapted_triangular_basis(self.group.generators(), stable, self.group.n(), self.field())?;
        let sizes: Vec<usize> = basis.iter().map(|l| linear_orbit_size(&self.group, l)).collect();
        let max = sizes.iter().copied().max().unwrap_or(1);
        let sum: usize = sizes.iter().map(|s| s - 1).sum();
        Ok((sizes, max.max(sum).max(1) as u32))
    }

    /// Orbit products of a triangular basis of `V*`: a homogeneous system of
    /// parameters.
    pub fn orbit_product_hsop(&self) -> Result<Vec<Polynomial>> {
        let basis = adapted_triangular_basis(self.group.generators(), &[], self.group.n(), self.field())?;
        basis
            .iter()
            .map(|l| self.orbit_product(&self.ring.linear_form(l)))
            .collect()
    }

    /// The hsop itself when its degrees multiply to `|G|`, which makes it a
    /// set of polynomial generators.
    fn polynomial_hsop(&self) -> Result<Option<Vec<Polynomial>>> {
        let hsop = self.orbit_product_hsop()?;
        let product: u64 = hsop.iter().map(|f| self.ring.degree(f).unwrap_or(0) as u64).product();
        Ok((product == self.group.order() as u64).then_some(hsop))
    }

    /// The certification bound for algebra and Hilbert ideal generation.
    pub fn generation_bound(&self) -> Result<u32> {
        Ok(self.hsop_bound(&[])?.1)
    }

    fn effective_bound(&self, opts: &InvariantOptions, certified: u32) -> u32 {
        match opts.degree_bound {
            Some(b) => b.min(certified),
            None => certified,
        }
    }

    /// Minimal algebra generators, degree by degree, in canonical form.
    pub fn algebra_generators(&self, opts: &InvariantOptions) -> Result<GeneratorSet> {
        if let Some(hsop) = self.polynomial_hsop()? {
            let gens = canonicalize_generators(&self.ring, &hsop)?;
            let i1 = leading_pure_power_index(&self.ring, &gens);
            return Ok(GeneratorSet {
                generators: gens,
                certification: Certification::Polynomial,
                i0: None,
                i1,
            });
        }
        let bound = self.generation_bound()?;
        let stop = self.effective_bound(opts, bound);
        let ring = &self.ring;
        let order = self.group.order() as u64;
        let mut products = ProductSpaces::new(ring);
        let mut gens: Vec<Polynomial> = Vec::new();
        let mut certification = Certification::DegreeBound(bound);
        for d in 1..=stop {
            if self.monomial_count(d) > opts.monomial_cap {
                certification = Certification::Uncertified { reached: d - 1, bound };
                break;
            }
            let space = self.invariant_space(d);
            let new = products.complement(ring, d, &space, &gens);
            if !new.is_empty() {
                gens.extend(new);
                if gens.len() == self.group.n() {
                    let ideal = IdealBasis::new(ring, gens.clone(), opts.gb)?;
                    if ideal.colength() == Colength::Finite(order) {
                        certification = Certification::Polynomial;
                        break;
                    }
                }
            }
            if d == stop && stop < bound {
                certification = Certification::Uncertified { reached: d, bound };
            }
        }
        let i1 = leading_pure_power_index(ring, &gens);
        Ok(GeneratorSet {
            generators: gens,
            certification,
            i0: None,
            i1,
        })
    }
}

/// Basis of the degree-`d` part of `(W^⊥S + J)/J` as normal forms, where
/// `gb` is a Gröbner basis of `J` complete up to degree `d`.
fn perp_image(ring: &Ring, linear: &[Polynomial], gb: &[Polynomial], d: u32) -> Vec<Polynomial> {
    let previous = grobner::standard_monomials_of_degree(ring, gb, d - 1);
    let mut forms: Vec<Polynomial> = Vec::new();
    for l in linear {
        for m in &previous {
            let nf = normal_form(ring, &ring.mul_term(l, m, Elem::ONE), gb);
            if !nf.is_zero() {
                forms.push(nf);
            }
        }
    }
    canonical_basis(ring, &forms)
}

/// 1-based index of the unique generator with leading monomial `x_n^e`.
fn leading_pure_power_index(ring: &Ring, gens: &[Polynomial]) -> Option<usize> {
    let n = ring.nvars();
    let hits: Vec<usize> = gens
        .iter()
        .enumerate()
        .filter(|(_, g)| {
            ring.leading_monomial(g)
                .ok()
                .and_then(|m| m.as_pure_power())
                .is_some_and(|(v, _)| v == n - 1)
        })
        .map(|(i, _)| i + 1)
        .collect();
    (hits.len() == 1).then(|| hits[0])
}

/// Right kernel of the matrix whose columns are `cols`.
fn kernel_of_columns(cols: &[Vec<Elem>], f: &FieldSpec) -> Vec<Vec<Elem>> {
    let rows = cols[0].len();
    let k = cols.len();
    let mut m = Matrix::zeros(rows, k);
    for (j, c) in cols.iter().enumerate() {
        for (i, &x) in c.iter().enumerate() {
            if !x.is_zero() {
                m.set(i, j, x);
            }
        }
    }
    m.kernel(f)
}

/// Ring `k[x_1..x_n, y_1..y_m]` eliminating the `x` block, with `deg y_i =
/// deg f_i`.
pub fn tag_ring(ring: &Ring, gens: &[Polynomial]) -> Ring {
    let n = ring.nvars();
    let mut weights = ring.weights().to_vec();
    weights.extend(gens.iter().map(|g| ring.degree(g).unwrap_or(1).max(1)));
    let mut names = ring.names().to_vec();
    names.extend((1..=gens.len()).map(|i| format!("y{i}")));
    Ring::new(ring.field().clone(), n + gens.len(), MonomialOrder::LexBlockElim { boundary: n })
        .with_weights(weights)
        .with_names(names)
}

/// The tag ideal `(y_i - f_i)` in [`tag_ring`].
pub fn tag_ideal(ring: &Ring, tagged: &Ring, gens: &[Polynomial]) -> Vec<Polynomial> {
    let n = ring.nvars();
    gens.iter()
        .enumerate()
        .map(|(i, g)| tagged.sub(&tagged.var(n + i), &embed(ring, tagged, 0, g)))
        .collect()
}

/// Whether homogeneous `f` lies in `k[gens]`: its normal form modulo the tag
/// ideal must be free of the original variables.
pub fn subalgebra_contains(ring: &Ring, gens: &[Polynomial], f: &Polynomial, cfg: GbConfig) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    if !ring.is_homogeneous(f) || gens.iter().any(|g| !ring.is_homogeneous(g)) {
        return Err(Error::usage("subalgebra membership needs homogeneous input"));
    }
    let tagged = tag_ring(ring, gens);
    let d = ring.degree(f).unwrap();
    let gb = buchberger(&tagged, &tag_ideal(ring, &tagged, gens), cfg.truncated(d))?;
    let nf = normal_form(&tagged, &embed(ring, &tagged, 0, f), &gb);
    Ok((0..ring.nvars()).all(|v| !tagged.involves(&nf, v)))
}

/// No member lies in the subalgebra generated by the others.
pub fn is_minimal_generating_set(ring: &Ring, gens: &[Polynomial], cfg: GbConfig) -> Result<bool> {
    for i in 0..gens.len() {
        let others: Vec<Polynomial> = gens
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        if subalgebra_contains(ring, &others, &gens[i], cfg)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An ideal generated by invariants, with the invariants used.
#[derive(Clone, Debug)]
pub struct InvariantIdeal {
    pub ideal: IdealBasis,
    /// Homogeneous invariants generating the ideal, by increasing degree.
    pub invariants: Vec<Polynomial>,
    pub certified: bool,
    /// Degree up to which generation was checked.
    pub bound: u32,
    /// Basis of `W^⊥` as linear forms (all variables for the Hilbert ideal).
    pub w_perp: Vec<Polynomial>,
}

impl InvariantIdeal {
    pub fn minimal_generator_count(&self, cfg: GbConfig) -> Result<usize> {
        minimal_generator_count(self.ideal.ring(), &self.invariants, cfg)
    }
}

#[derive(Clone, Debug)]
pub struct FixedSpaceDecomposition {
    pub relative: InvariantIdeal,
    pub hilbert: InvariantIdeal,
    /// Invariants restricting to polynomial generators of the image of `S^G`
    /// in `k[W]`.
    pub complement: Vec<Polynomial>,
    pub codim: usize,
    pub mu_relative: usize,
    pub mu_hilbert: usize,
}

impl FixedSpaceDecomposition {
    /// `μ(𝔥) = μ(𝔥_W) + dim W`.
    pub fn mu_additive(&self) -> bool {
        self.mu_hilbert == self.mu_relative + self.complement.len()
    }
}

#[derive(Clone, Debug)]
pub struct Presentation {
    /// `k[y_1, ..., y_m]` graded by the generator degrees.
    pub ring: Ring,
    /// Reduced Gröbner basis of the relation ideal.
    pub relations: Vec<Polynomial>,
}

#[derive(Clone, Debug)]
pub struct StepAnalysis {
    /// Least degree where the invariants of the subgroup exceed those of the group.
    pub d0: Option<u32>,
    /// An invariant of the subgroup in degree `d0` outside `S^G`.
    pub witness: Option<Polynomial>,
    /// `dim A_{d0} - dim R_{d0}`.
    pub rank: usize,
    /// Normalized generators of the subgroup invariants, with `i0` and `i1`.
    pub generators: GeneratorSet,
    /// 1-based indices of generators not invariant under the larger group.
    pub outside: Vec<usize>,
}

impl StepAnalysis {
    pub fn rank_one(&self) -> bool {
        self.rank == 1
    }
}

impl InvariantRing {
    /// `(S/J)^G_d ≠ 0` for `J` with Gröbner basis `gb` (complete up to `d`).
    /// Every invariant of degree `d` outside `J` gives such a fixed point.
    fn quotient_has_fixed_points(&self, d: u32, standard: &[Monomial], gb: &[Polynomial]) -> bool {
        let f = self.field();
        let ring = &self.ring;
        let data = self.degree_data(d);
        let index = mono_index(standard);
        let k = standard.len();
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        for images in &data.images {
            let cols: Vec<Vec<Elem>> = standard
                .iter()
                .enumerate()
                .map(|(j, m)| {
                    let img = from_vector_sparse(ring, &data.monos, &images[data.index[m]]);
                    let r = normal_form(ring, &img, gb);
                    let mut v = to_vector(&r, &index, k);
                    v[j] = f.sub(v[j], Elem::ONE);
                    v
                })
                .collect();
            for r in 0..k {
                rows.push(cols.iter().map(|c| c[r]).collect());
            }
        }
        if rows.is_empty() {
            return true;
        }
        !Matrix::from_rows(rows).expect("rectangular").kernel(f).is_empty()
    }

    /// Some nonzero element of the span of `basis` is fixed by `G` modulo the
    /// G-stable ideal with Gröbner basis `gb`.
    fn has_fixed_points(&self, basis: &[Polynomial], gb: &[Polynomial]) -> bool {
        let ring = &self.ring;
        let f = self.field();
        let mut monos: Vec<Monomial> = Vec::new();
        let mut diffs: Vec<Vec<Polynomial>> = Vec::new();
        for g in self.group.generators() {
            let col: Vec<Polynomial> = basis
                .iter()
                .map(|u| normal_form(ring, &ring.sub(&ring.apply_matrix_unchecked(u, g), u), gb))
                .collect();
            monos.extend(col.iter().flat_map(|p| p.monomials().cloned()));
            diffs.push(col);
        }
        monos.sort_by(|a, b| ring.cmp(b, a));
        monos.dedup();
        if monos.is_empty() {
            return true;
        }
        let index = mono_index(&monos);
        let mut cols: Vec<Vec<Elem>> = vec![Vec::new(); basis.len()];
        for col in &diffs {
            for (j, p) in col.iter().enumerate() {
                cols[j].extend(to_vector(p, &index, monos.len()));
            }
        }
        !kernel_of_columns(&cols, f).is_empty()
    }

    /// The Hilbert ideal `𝔥_{G,S}`, generated by invariants of positive degree.
    ///
    /// Degrees where `S/J` has no nonzero fixed points are skipped without
    /// computing the invariants there; the loop ends early once `S/J` vanishes
    /// in some degree or has colength `|G|`, the least possible.
    pub fn hilbert_ideal(&self, opts: &InvariantOptions) -> Result<InvariantIdeal> {
        let bound = self.generation_bound()?;
        let ring = &self.ring;
        let w_perp: Vec<Polynomial> = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        if let Some(hsop) = self.polynomial_hsop()? {
            let invariants = canonicalize_generators(ring, &hsop)?;
            return Ok(InvariantIdeal {
                ideal: IdealBasis::new(ring, invariants.clone(), opts.gb)?,
                invariants,
                certified: true,
                bound,
                w_perp,
            });
        }
        let stop = self.effective_bound(opts, bound);
        let order = Colength::Finite(self.group.order() as u64);
        let hsop = self.orbit_product_hsop()?;
        let mut invariants: Vec<Polynomial> = Vec::new();
        let mut certified = stop >= bound;
        let mut grew = false;
        for d in 1..=stop {
            let pending: Vec<Polynomial> = hsop.iter().filter(|f| ring.degree(f) >= Some(d)).cloned().collect();
            if grew && !pending.is_empty() {
                let mut all = invariants.clone();
                all.extend(pending);
                if IdealBasis::new(ring, all.clone(), opts.gb)?.colength() == order {
                    invariants = all;
                    certified = true;
                    break;
                }
            }
            let gb = if invariants.is_empty() {
                Vec::new()
            } else {
                buchberger(ring, &invariants, opts.gb.truncated(d))?
            };
            let standard = grobner::standard_monomials_of_degree(ring, &gb, d);
            if standard.is_empty() {
                certified = true;
                break;
            }
            if !self.quotient_has_fixed_points(d, &standard, &gb) {
                grew = false;
                continue;
            }
            if self.monomial_count(d) > opts.monomial_cap {
                certified = false;
                break;
            }
            let space = self.invariant_space(d);
            let new = independent_modulo(ring, &space, &gb, &standard);
            grew = !new.is_empty();
            invariants.extend(new);
        }
        let ideal = IdealBasis::new(ring, invariants.clone(), opts.gb)?;
        Ok(InvariantIdeal {
            ideal,
            invariants,
            certified,
            bound,
            w_perp,
        })
    }

    /// Linear forms vanishing on `w`; errors unless `w ⊆ V^G`.
    pub fn annihilator(&self, w: &[Vec<Elem>]) -> Result<Vec<Vec<Elem>>> {
        let n = self.group.n();
        let f = self.field();
        let (_, fixed) = self.group.fixed_spaces();
        let mut span = EchelonBasis::new(n);
        for v in &fixed {
            span.insert(v, f);
        }
        for v in w {
            if v.len() != n {
                return Err(Error::usage(format!("vector of W has length {}, expected {n}", v.len())));
            }
            if !span.contains(v, f) {
                return Err(Error::usage("W is not contained in V^G"));
            }
        }
        let nonzero: Vec<Vec<Elem>> = w.iter().filter(|v| v.iter().any(|e| !e.is_zero())).cloned().collect();
        if nonzero.is_empty() {
            return Ok(Matrix::identity(n).to_rows());
        }
        Ok(Matrix::from_rows(nonzero)?.kernel(f))
    }

    /// The relative Hilbert ideal `((W^⊥S) ∩ S^G)S` for `W ⊆ V^G`, given by
    /// vectors in the basis of `V` dual to the variables.
    pub fn relative_hilbert_ideal(&self, w: &[Vec<Elem>], opts: &InvariantOptions) -> Result<InvariantIdeal> {
        let ring = &self.ring;
        let f = self.field();
        let perp = self.annihilator(w)?;
        let (_, bound) = self.hsop_bound(&perp)?;
        let stop = self.effective_bound(opts, bound);
        let linear: Vec<Polynomial> = perp.iter().map(|c| ring.linear_form(c)).collect();
        if let Some(hsop) = self.polynomial_hsop()? {
            let gens = canonicalize_generators(ring, &hsop)?;
            let target = presentation_ring(ring, &gens);
            let kernel = restriction_kernel(ring, &gens, w, &target, opts.gb)?;
            let images: Vec<Polynomial> = kernel.iter().map(|h| target.substitute(h, &gens, ring)).collect();
            let invariants = canonical_generators_of_ideal(ring, &images, opts.gb)?;
            return Ok(InvariantIdeal {
                ideal: IdealBasis::new(ring, invariants.clone(), opts.gb)?,
                invariants,
                certified: true,
                bound,
                w_perp: linear,
            });
        }
        let linear_gb = buchberger(ring, &linear, opts.gb)?;
        let mut invariants: Vec<Polynomial> = Vec::new();
        let mut certified = stop >= bound;
        for d in 1..=stop {
            if d >= 2 && !invariants.is_empty() {
                let gb = buchberger(ring, &invariants, opts.gb.truncated(d))?;
                let image = perp_image(ring, &linear, &gb, d);
                if image.is_empty() {
                    // W^⊥S ⊆ J from here on
                    certified = true;
                    break;
                }
                if !self.has_fixed_points(&image, &gb) {
                    continue;
                }
            }
            if self.monomial_count(d) > opts.monomial_cap {
                certified = false;
                break;
            }
            let space = self.invariant_space(d);
            // invariants of degree d vanishing on W
            let restricted: Vec<Polynomial> = space.iter().map(|p| normal_form(ring, p, &linear_gb)).collect();
            let mut monos: Vec<Monomial> = restricted
                .iter()
                .flat_map(|p| p.monomials().cloned())
                .collect::<HashSet<_>>()
                .into_iter()
                .collect();
            monos.sort_by(|a, b| ring.cmp(b, a));
            let in_perp: Vec<Polynomial> = if monos.is_empty() {
                space.as_ref().clone()
            } else {
                let index = mono_index(&monos);
                let cols: Vec<Vec<Elem>> = restricted.iter().map(|p| to_vector(p, &index, monos.len())).collect();
                kernel_of_columns(&cols, f)
                    .iter()
                    .map(|k| {
                        let mut acc = ring.zero();
                        for (c, p) in k.iter().zip(space.iter()) {
                            if !c.is_zero() {
                                acc = ring.add_scaled(&acc, *c, p);
                            }
                        }
                        acc
                    })
                    .collect()
            };
            if in_perp.is_empty() {
                continue;
            }
            let in_perp = canonical_basis(ring, &in_perp);
            let gb = if invariants.is_empty() {
                Vec::new()
            } else {
                buchberger(ring, &invariants, opts.gb.truncated(d))?
            };
            let standard = grobner::standard_monomials_of_degree(ring, &gb, d);
            invariants.extend(independent_modulo(ring, &in_perp, &gb, &standard));
        }
        let ideal = IdealBasis::new(ring, invariants.clone(), opts.gb)?;
        Ok(InvariantIdeal {
            ideal,
            invariants,
            certified,
            bound,
            w_perp: linear,
        })
    }

    /// `𝔥_{G,S} = 𝔥_{G,S,W} + (f_{s+1}, ..., f_n)S`, with both sides computed
    /// independently and compared.
    pub fn fixed_space_decomposition(&self, w: &[Vec<Elem>], opts: &InvariantOptions) -> Result<FixedSpaceDecomposition> {
        let ring = &self.ring;
        let f = self.field();
        let n = self.group.n();
        let relative = self.relative_hilbert_ideal(w, opts)?;
        let hilbert = self.hilbert_ideal(opts)?;
        // independent basis of W and restriction x_i ↦ Σ_j w_j[i] y_j
        let mut span = EchelonBasis::new(n);
        let basis: Vec<Vec<Elem>> = w.iter().filter(|v| span.insert(v, f).is_some()).cloned().collect();
        let t = basis.len();
        let complement = if t == 0 {
            Vec::new()
        } else {
            let target = Ring::deglex(ring.field().clone(), t);
            let images: Vec<Polynomial> = (0..n)
                .map(|i| target.linear_form(&basis.iter().map(|v| v[i]).collect::<Vec<_>>()))
                .collect();
            let mut chosen: Vec<Polynomial> = Vec::new();
            let mut chosen_restricted: Vec<Polynomial> = Vec::new();
            let mut products = ProductSpaces::new(&target);
            // polynomial generators restrict to generators of the image
            let generators = self.polynomial_hsop()?.map(|h| canonicalize_generators(ring, &h)).transpose()?;
            for d in 1..=relative.bound.max(hilbert.bound) {
                if chosen.len() == t {
                    break;
                }
                let space = match &generators {
                    Some(g) => Arc::new(g.iter().filter(|p| ring.degree(p) == Some(d)).cloned().collect()),
                    None => self.invariant_space(d),
                };
                let (monos, index, eb, _) = products.span(&target, d, &chosen_restricted);
                let (monos, index, mut eb) = (monos.clone(), index.clone(), eb.clone());
                let mut added = false;
                for p in space.iter() {
                    let r = ring.substitute(p, &images, &target);
                    if r.is_zero() {
                        continue;
                    }
                    if eb.insert(&to_vector(&r, &index, monos.len()), f).is_some() {
                        chosen.push(p.clone());
                        chosen_restricted.push(r);
                        added = true;
                    }
                }
                if added {
                    products.cache.retain(|&k, _| k < d);
                }
            }
            if chosen.len() != t {
                return Err(Error::Internal(format!(
                    "found {} polynomial generators of the restriction to W, expected {t}",
                    chosen.len()
                )));
            }
            chosen
        };
        let mut combined = relative.invariants.clone();
        combined.extend(complement.iter().cloned());
        let sum = IdealBasis::new(ring, combined, opts.gb)?;
        if !sum.same_ideal(&hilbert.ideal) {
            return Err(Error::Internal(
                "relative Hilbert ideal plus complement differs from the Hilbert ideal".into(),
            ));
        }
        let mu_relative = relative.minimal_generator_count(opts.gb)?;
        let mu_hilbert = hilbert.minimal_generator_count(opts.gb)?;
        Ok(FixedSpaceDecomposition {
            relative,
            hilbert,
            complement,
            codim: n - t,
            mu_relative,
            mu_hilbert,
        })
    }

    /// Relations among a certified generating set, by eliminating the
    /// original variables from `(y_i - f_i)`.
    pub fn presentation(&self, gens: &GeneratorSet, opts: &InvariantOptions) -> Result<Presentation> {
        if !gens.certification.is_certified() {
            return Err(Error::usage("presentation needs a certified generating set"));
        }
        let ring = &self.ring;
        let n = ring.nvars();
        let target = presentation_ring(ring, &gens.generators);
        if gens.certification == Certification::Polynomial {
            return Ok(Presentation { ring: target, relations: Vec::new() });
        }
        let tagged = tag_ring(ring, &gens.generators);
        let elim = elimination_ideal(&tagged, &tag_ideal(ring, &tagged, &gens.generators), opts.gb)?;
        let relations: Vec<Polynomial> = elim.iter().map(|g| project(&tagged, &target, n, g)).collect();
        let relations = if relations.is_empty() {
            relations
        } else {
            buchberger(&target, &relations, opts.gb)?
        };
        Ok(Presentation { ring: target, relations })
    }
}

/// `k[y_1, ..., y_m]` with `deg y_i = deg f_i`.
pub fn presentation_ring(ring: &Ring, gens: &[Polynomial]) -> Ring {
    let m = gens.len();
    Ring::deglex(ring.field().clone(), m)
        .with_weights(gens.iter().map(|g| ring.degree(g).unwrap_or(1).max(1)).collect())
        .with_names((1..=m).map(|i| format!("y{i}")).collect())
}

/// Reduced Gröbner basis in `target` (see [`presentation_ring`]) of
/// `{h : h(f) vanishes on W}`, from the restrictions
/// `f_i(Σ_j t_j w_j)` to the subspace spanned by `w`.
pub fn restriction_kernel(
    ring: &Ring,
    gens: &[Polynomial],
    w: &[Vec<Elem>],
    target: &Ring,
    cfg: GbConfig,
) -> Result<Vec<Polynomial>> {
    let n = ring.nvars();
    let f = ring.field();
    let mut span = EchelonBasis::new(n);
    let basis: Vec<&Vec<Elem>> = w.iter().filter(|v| span.insert(v, f).is_some()).collect();
    let s = basis.len();
    let m = gens.len();
    let mut weights = vec![1; s];
    weights.extend(target.weights().iter().copied());
    let big = Ring::new(f.clone(), s + m, MonomialOrder::LexBlockElim { boundary: s }).with_weights(weights);
    let images: Vec<Polynomial> = (0..n)
        .map(|i| {
            let mut coeffs = vec![Elem::ZERO; s + m];
            for (j, v) in basis.iter().enumerate() {
                coeffs[j] = v[i];
            }
            big.linear_form(&coeffs)
        })
        .collect();
    let ideal: Vec<Polynomial> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| big.sub(&big.var(s + i), &ring.substitute(g, &images, &big)))
        .collect();
    let elim = if s == 0 {
        buchberger(&big, &ideal, cfg)?
    } else {
        elimination_ideal(&big, &ideal, cfg)?
    };
    let kernel: Vec<Polynomial> = elim.iter().map(|g| project(&big, target, s, g)).collect();
    buchberger(target, &kernel, cfg)
}

/// Minimal homogeneous generators of the ideal spanned by `polys`, in
/// canonical form.
fn canonical_generators_of_ideal(ring: &Ring, polys: &[Polynomial], cfg: GbConfig) -> Result<Vec<Polynomial>> {
    let nonzero: Vec<Polynomial> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Ok(nonzero);
    }
    let mut mins = grobner::minimal_generators(ring, &nonzero, cfg)?;
    mins.sort_by(|a, b| cmp_by_leading(ring, a, b));
    Ok(mins)
}

fn from_vector_sparse(ring: &Ring, monos: &[Monomial], v: &[(u32, Elem)]) -> Polynomial {
    ring.from_terms(v.iter().map(|&(t, c)| (monos[t as usize].clone(), c)).collect())
}

/// Members of `candidates` (homogeneous of one degree) whose normal forms
/// modulo `gb` are linearly independent.
fn independent_modulo(ring: &Ring, candidates: &[Polynomial], gb: &[Polynomial], standard: &[Monomial]) -> Vec<Polynomial> {
    let index = mono_index(standard);
    let mut eb = EchelonBasis::new(standard.len());
    let mut out = Vec::new();
    for p in candidates {
        let r = normal_form(ring, p, gb);
        if r.is_zero() {
            continue;
        }
        if eb.insert(&to_vector(&r, &index, standard.len()), ring.field()).is_some() {
            out.push(p.clone());
        }
    }
    out
}

/// Compare the invariants of `small ⊂ big` (index `p`) degree by degree.
pub fn step_analysis(big: &InvariantRing, small: &InvariantRing, opts: &InvariantOptions) -> Result<StepAnalysis> {
    let p = big.field().p() as usize;
    let (g, h) = (big.group(), small.group());
    if !h.is_subgroup_of(g) || g.order() != h.order() * p {
        return Err(Error::usage(format!(
            "expected a subgroup of index {p}; orders are {} and {}",
            h.order(),
            g.order()
        )));
    }
    let ring = &big.ring;
    let mut generators = small.algebra_generators(opts)?;
    let mut d0 = None;
    let mut witness = None;
    let mut rank = 0;
    let top = generators.degrees(ring).into_iter().max().unwrap_or(0);
    for d in 1..=top {
        let a = small.invariant_space(d);
        let r = big.invariant_space(d);
        if a.len() > r.len() {
            d0 = Some(d);
            rank = a.len() - r.len();
            // canonical complement of R_d in A_d
            let monos = monomials_of_degree(ring, d);
            let index = mono_index(&monos);
            let mut eb = EchelonBasis::new(monos.len());
            for q in r.iter() {
                eb.insert(&to_vector(q, &index, monos.len()), ring.field());
            }
            let rest: Vec<Polynomial> = a
                .iter()
                .filter_map(|q| {
                    let mut v = to_vector(q, &index, monos.len());
                    eb.reduce(&mut v, ring.field());
                    v.iter().any(|e| !e.is_zero()).then(|| from_vector(ring, &monos, &v))
                })
                .collect();
            witness = canonical_basis(ring, &rest).into_iter().next();
            break;
        }
    }
    let outside: Vec<usize> = generators
        .generators
        .iter()
        .enumerate()
        .filter(|(_, q)| !big.is_invariant(q))
        .map(|(i, _)| i + 1)
        .collect();
    generators.i0 = (outside.len() == 1).then(|| outside[0]);
    Ok(StepAnalysis {
        d0,
        witness,
        rank,
        generators,
        outside,
    })
}
