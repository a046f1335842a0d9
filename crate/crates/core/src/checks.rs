//! Decision procedures and per-instance verifiers.
//!
//! Three-valued verdicts are used wherever only necessary or only sufficient
//! criteria are available; `Yes` and `No` always name the criterion applied.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Elem;
use crate::grobner::{
    buchberger, height, krull_dimension, minimal_generator_count, normal_form,
    staircase_equidimensional, Colength, GbConfig, IdealBasis,
};
use crate::group::{beta, composition_series, reflecting_hyperplane, sigma_normalize, MatrixGroup};
use crate::invariants::{
    canonicalize_generators, restriction_kernel, step_analysis, GeneratorSet, InvariantOptions, InvariantRing,
    Presentation,
};
use crate::linalg::{EchelonBasis, Matrix};
use crate::poly::{Polynomial, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub criterion: String,
    pub detail: String,
    /// Colength of the cited ideal, when the criterion is a colength count.
    pub colength: Option<u64>,
    pub order: Option<usize>,
    /// Reduced Gröbner basis of the cited ideal.
    pub gb: Vec<String>,
}

impl Certificate {
    fn new(criterion: &str, detail: impl Into<String>) -> Self {
        Certificate {
            criterion: criterion.into(),
            detail: detail.into(),
            colength: None,
            order: None,
            gb: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub certificate: Option<Certificate>,
    pub elapsed_ms: u64,
}

impl Verdict {
    fn new(status: Status, certificate: Option<Certificate>, start: Instant) -> Self {
        Verdict {
            status,
            certificate,
            elapsed_ms: start.elapsed().as_millis() as u64,
        }
    }

    /// Recompute the status from a colength certificate by parsing the cited
    /// Gröbner basis in `ring`.
    pub fn replay(&self, ring: &Ring) -> Result<Option<Status>> {
        let Some(cert) = &self.certificate else { return Ok(None) };
        let (Some(_), Some(order)) = (cert.colength, cert.order) else { return Ok(None) };
        let gens = cert.gb.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
        let ideal = IdealBasis::new(ring, gens, GbConfig::default())?;
        Ok(Some(match ideal.colength() {
            Colength::Finite(c) if c == order as u64 => Status::Yes,
            _ => Status::No,
        }))
    }
}

/// `S^G` is polynomial iff the Hilbert ideal has colength `|G|`.
pub fn is_polynomial_ring(inv: &InvariantRing, opts: &InvariantOptions) -> Result<Verdict> {
    let start = Instant::now();
    let h = inv.hilbert_ideal(opts)?;
    let order = inv.group().order();
    if !h.certified {
        let cert = Certificate::new("uncertified Hilbert ideal", format!("checked up to degree {:?}", opts.degree_bound));
        return Ok(Verdict::new(Status::Unknown, Some(cert), start));
    }
    let colength = h.ideal.colength();
    let mut cert = Certificate::new(
        "colength of the Hilbert ideal equals |G|",
        format!("colength {colength:?}, |G| = {order}"),
    );
    cert.colength = colength.finite();
    cert.order = Some(order);
    cert.gb = h.ideal.format_gb();
    let status = match colength {
        Colength::Finite(c) if c == order as u64 => Status::Yes,
        Colength::Finite(_) => Status::No,
        Colength::Infinite => return Err(Error::Internal("Hilbert ideal of infinite colength".into())),
    };
    Ok(Verdict::new(status, Some(cert), start))
}

/// Minimal number of homogeneous generators equals the height.
pub fn is_complete_intersection(ideal: &IdealBasis, cfg: GbConfig) -> Result<bool> {
    let mu = minimal_generator_count(ideal.ring(), ideal.gens(), cfg)?;
    Ok(mu as i64 == ideal.height())
}

/// `Yes` for polynomial invariants; `No` if the group is not generated by
/// transvections or if homogeneous generators of the Hilbert ideal do not
/// generate `S^G`; `Unknown` otherwise.
pub fn direct_summand_status(inv: &InvariantRing, opts: &InvariantOptions) -> Result<Verdict> {
    let start = Instant::now();
    let poly = is_polynomial_ring(inv, opts)?;
    if poly.status == Status::Yes {
        let mut cert = poly.certificate.clone().expect("Yes carries a certificate");
        cert.criterion = "polynomial invariants make S a free module".into();
        return Ok(Verdict::new(Status::Yes, Some(cert), start));
    }
    if !inv.group().is_transvection_generated() {
        let cert = Certificate::new(
            "direct summands require a transvection-generated group",
            format!(
                "transvection subgroup has order {} < {}",
                inv.group().transvection_subgroup().order(),
                inv.group().order()
            ),
        );
        return Ok(Verdict::new(Status::No, Some(cert), start));
    }
    let gens = inv.algebra_generators(opts)?;
    let h = inv.hilbert_ideal(opts)?;
    if gens.certification.is_certified() && h.certified {
        let ring = inv.ring();
        for g in &gens.generators {
            if !crate::invariants::subalgebra_contains(ring, &h.invariants, g, opts.gb)? {
                let cert = Certificate::new(
                    "generators of the Hilbert ideal must generate the invariant ring",
                    format!("{} is not in the subalgebra they generate", ring.format(g)),
                );
                return Ok(Verdict::new(Status::No, Some(cert), start));
            }
        }
    }
    Ok(Verdict::new(Status::Unknown, None, start))
}

fn determinant(ring: &Ring, m: &[Vec<Polynomial>]) -> Polynomial {
    match m.len() {
        0 => ring.one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = ring.zero();
            for (j, entry) in m[0].iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, e)| e.clone()).collect())
                    .collect();
                let term = ring.mul(entry, &determinant(ring, &minor));
                acc = if j % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

const MINOR_BUDGET: usize = 20_000;

/// Relations, their height and the `c × c` Jacobian minors.
struct SingularIdeal {
    relations: Vec<Polynomial>,
    minors: Vec<Polynomial>,
}

fn singular_ideal(pres: &Presentation, cfg: GbConfig) -> Result<Option<SingularIdeal>> {
    let ring = &pres.ring;
    if pres.relations.is_empty() {
        return Ok(None);
    }
    let gb = buchberger(ring, &pres.relations, cfg)?;
    if !staircase_equidimensional(ring, &gb) {
        return Err(Error::NotApplicable("presentation is not equidimensional".into()));
    }
    let c = height(ring, &gb) as usize;
    let m = ring.nvars();
    let jac: Vec<Vec<Polynomial>> = gb.iter().map(|r| (0..m).map(|j| ring.delta(j, 1, r)).collect()).collect();
    let rows = subsets(gb.len(), c);
    let cols = subsets(m, c);
    if rows.len() * cols.len() > MINOR_BUDGET {
        return Err(Error::budget("Jacobian minors", format!("{} minors", rows.len() * cols.len())));
    }
    let mut minors = Vec::new();
    for r in &rows {
        for cs in &cols {
            let sub: Vec<Vec<Polynomial>> = r.iter().map(|&i| cs.iter().map(|&j| jac[i][j].clone()).collect()).collect();
            let d = determinant(ring, &sub);
            if !d.is_zero() {
                minors.push(d);
            }
        }
    }
    Ok(Some(SingularIdeal { relations: gb, minors }))
}

/// Krull dimension of the singular locus of `k[y]/J`; -1 when empty.
pub fn singular_locus_dimension(pres: &Presentation, cfg: GbConfig) -> Result<i64> {
    let Some(sing) = singular_ideal(pres, cfg)? else { return Ok(-1) };
    let mut gens = sing.relations;
    gens.extend(sing.minors);
    let gb = buchberger(&pres.ring, &gens, cfg)?;
    Ok(krull_dimension(&pres.ring, &gb))
}

/// The prime `𝔭 = W^⊥S ∩ S^G` in the presentation ring.
pub fn fixed_prime(inv: &InvariantRing, gens: &GeneratorSet, pres: &Presentation, w: &[Vec<Elem>], cfg: GbConfig) -> Result<Vec<Polynomial>> {
    inv.annihilator(w)?;
    restriction_kernel(inv.ring(), &gens.generators, w, &pres.ring, cfg)
}

/// `R_𝔭` is regular: some Jacobian minor lies outside `𝔭`.
pub fn regular_at_fixed_prime(
    inv: &InvariantRing,
    gens: &GeneratorSet,
    pres: &Presentation,
    w: &[Vec<Elem>],
    cfg: GbConfig,
) -> Result<bool> {
    let Some(sing) = singular_ideal(pres, cfg)? else { return Ok(true) };
    let prime = fixed_prime(inv, gens, pres, w, cfg)?;
    Ok(sing.minors.iter().any(|m| !normal_form(&pres.ring, m, &prime).is_zero()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SinglocReport {
    pub polynomial: Status,
    pub singular_dimension: i64,
    pub rank_fixed_space: usize,
    pub regular_at_fixed_prime: bool,
    /// `None` when the polynomial test was inconclusive.
    pub consistent: Option<bool>,
}

/// Polynomiality, `dim sing(R) < rank V^G` and regularity at the prime of
/// `V^G`, each by its own route, and whether they agree.
pub fn verify_singloc_equivalence(inv: &InvariantRing, opts: &InvariantOptions) -> Result<SinglocReport> {
    let poly = is_polynomial_ring(inv, opts)?;
    let gens = inv.algebra_generators(opts)?;
    if !gens.certification.is_certified() {
        return Err(Error::NotApplicable("algebra generation is not certified".into()));
    }
    let pres = inv.presentation(&gens, opts)?;
    let sing = singular_locus_dimension(&pres, opts.gb)?;
    let (_, fixed) = inv.group().fixed_spaces();
    let rank = fixed.len();
    let regular = regular_at_fixed_prime(inv, &gens, &pres, &fixed, opts.gb)?;
    let second = sing < rank as i64;
    let consistent = match poly.status {
        Status::Unknown => None,
        s => {
            let first = s == Status::Yes;
            Some(first == second && second == regular)
        }
    };
    Ok(SinglocReport {
        polynomial: poly.status,
        singular_dimension: sing,
        rank_fixed_space: rank,
        regular_at_fixed_prime: regular,
        consistent,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LargeRankReport {
    pub rank_fixed_space: usize,
    pub relative_ci: bool,
    pub hilbert_ci: bool,
    pub mu_relative: usize,
    pub mu_hilbert: usize,
    pub mu_additive: bool,
    /// Every Gröbner basis element of `𝔥_{G,S,V^G}` lies in `Sym (V^G)^⊥`.
    pub extended: bool,
    pub certified: bool,
}

impl LargeRankReport {
    pub fn holds(&self) -> bool {
        self.relative_ci && self.hilbert_ci && self.mu_additive && self.extended
    }
}

/// Whether `f` lies in the subring generated by the linear forms `perp`.
pub fn lies_in_subring(ring: &Ring, perp: &[Polynomial], f: &Polynomial) -> bool {
    // extend a basis u_1..u_s of `perp` to one of V* and rewrite f in the u's
    let n = ring.nvars();
    let field = ring.field();
    let mut eb = EchelonBasis::new(n);
    for p in perp {
        eb.insert(&ring.linear_coeffs(p), field);
    }
    let s = eb.dim();
    let mut basis: Vec<Vec<Elem>> = eb.reduced_rows();
    for i in 0..n {
        let mut e = vec![Elem::ZERO; n];
        e[i] = Elem::ONE;
        if eb.insert(&e, field).is_some() {
            basis.push(e);
        }
    }
    let q = Matrix::from_rows(basis).expect("square");
    let Ok(qinv) = q.inverse(field) else { return false };
    let images: Vec<Polynomial> = (0..n).map(|i| ring.linear_form(qinv.row(i))).collect();
    let g = ring.substitute(f, &images, ring);
    (s..n).all(|v| !ring.involves(&g, v))
}

/// Complete-intersection checks for `rank V^G ≥ n - 2`.
pub fn verify_large_rank(inv: &InvariantRing, opts: &InvariantOptions) -> Result<LargeRankReport> {
    let n = inv.group().n();
    let (_, fixed) = inv.group().fixed_spaces();
    let rank = fixed.len();
    if rank + 2 < n {
        return Err(Error::NotApplicable(format!("rank V^G = {rank} < n - 2 = {}", n as i64 - 2)));
    }
    let b = inv.fixed_space_decomposition(&fixed, opts)?;
    let rel = IdealBasis::new(inv.ring(), b.relative.invariants.clone(), opts.gb)?;
    let hil = IdealBasis::new(inv.ring(), b.hilbert.invariants.clone(), opts.gb)?;
    let extended = rel.gb().iter().all(|g| lies_in_subring(inv.ring(), &b.relative.w_perp, g));
    Ok(LargeRankReport {
        rank_fixed_space: rank,
        relative_ci: b.mu_relative as i64 == rel.height(),
        hilbert_ci: b.mu_hilbert as i64 == hil.height(),
        mu_relative: b.mu_relative,
        mu_hilbert: b.mu_hilbert,
        mu_additive: b.mu_additive(),
        extended,
        certified: b.relative.certified && b.hilbert.certified,
    })
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Dim4Report {
    pub beta_group: usize,
    pub beta_sigma: usize,
    pub beta_subgroup: usize,
    pub d0: Option<u32>,
    pub rank_quotient: usize,
    pub i0: Option<usize>,
    pub i1: Option<usize>,
    pub direct_summand: Option<Status>,
    pub polynomial: Option<Status>,
    pub subgroup_polynomial: Option<Status>,
    /// `β_{G'} ≤ 2`.
    pub beta_subgroup_ok: bool,
    /// The second generator avoids `x_n` (checked when `β_σ > 1`).
    pub second_generator_ok: Option<bool>,
    /// Relative ideals of `G'` and `G` agree with the generators minus `a_{i0}`.
    pub equal_when_i0_is_i1: Option<bool>,
    /// Relative ideals agree with `(x_1, a_2, a_3)S`.
    pub equal_when_a3_invariant: Option<bool>,
    /// Leading monomials of `a_3` and `(σ - 1)a_3`.
    pub leading_monomials_of_a3: Option<bool>,
    /// `R` polynomial and `i0 = i1` imply `A` polynomial.
    pub subgroup_polynomial_ok: Option<bool>,
    /// `R` a direct summand of `A` forces `rank A_{d0}/R_{d0} = 1`.
    pub rank_one_ok: Option<bool>,
    pub implication_ok: bool,
}

impl Dim4Report {
    pub fn counterexample(&self) -> bool {
        !self.beta_subgroup_ok
            || !self.implication_ok
            || [
                self.second_generator_ok,
                self.equal_when_i0_is_i1,
                self.equal_when_a3_invariant,
                self.leading_monomials_of_a3,
                self.subgroup_polynomial_ok,
                self.rank_one_ok,
            ]
            .contains(&Some(false))
    }
}

/// Put the group in triangular coordinates and return the conjugated group.
fn triangular(group: &MatrixGroup) -> Result<MatrixGroup> {
    let p = group.triangularize()?;
    group.conjugate_by(&p)
}

fn relative_gb_equal(a: &InvariantRing, b: &InvariantRing, w: &[Vec<Elem>], expected: &[Polynomial], opts: &InvariantOptions) -> Result<bool> {
    let ra = a.relative_hilbert_ideal(w, opts)?;
    let rb = b.relative_hilbert_ideal(w, opts)?;
    let e = IdealBasis::new(a.ring(), expected.to_vec(), opts.gb)?;
    Ok(ra.ideal.gb() == rb.ideal.gb() && rb.ideal.gb() == e.gb())
}

/// The pipeline for the top step of the composition series of a
/// transvection group over a prime field in dimension 4.
pub fn verify_dim4(group: &MatrixGroup, ring: &Ring, opts: &InvariantOptions) -> Result<Dim4Report> {
    let f = group.field().clone();
    if !f.is_prime_field() || group.n() != 4 {
        return Err(Error::NotApplicable("needs dimension 4 over a prime field".into()));
    }
    let tri = triangular(group)?;
    let series = composition_series(&tri)?;
    if series.is_empty() {
        return Err(Error::NotApplicable("trivial group".into()));
    }
    let k = series.len();
    let sigma = series.witnesses[k - 1].clone();
    let sub = series.chain[k - 1].clone();
    let p = sigma_normalize(&sub, &sigma)?;
    let g = tri.conjugate_by(&p)?;
    let gp = sub.conjugate_by(&p)?;
    let sigma = p.inverse(&f)?.mul(&sigma, &f).mul(&p, &f);

    let big = InvariantRing::new(g.clone(), ring.clone())?;
    let small = InvariantRing::new(gp.clone(), ring.clone())?;
    let mut report = Dim4Report {
        beta_group: g.beta_group(),
        beta_sigma: beta(&sigma, &f),
        beta_subgroup: gp.beta_group(),
        ..Default::default()
    };
    report.beta_subgroup_ok = report.beta_subgroup <= 2;

    let step = step_analysis(&big, &small, opts)?;
    report.d0 = step.d0;
    report.rank_quotient = step.rank;
    report.i0 = step.generators.i0;
    report.i1 = step.generators.i1;
    let a = &step.generators.generators;

    let poly = is_polynomial_ring(&big, opts)?;
    let ds = direct_summand_status(&big, opts)?;
    let sub_poly = is_polynomial_ring(&small, opts)?;
    report.polynomial = Some(poly.status);
    report.direct_summand = Some(ds.status);
    report.subgroup_polynomial = Some(sub_poly.status);
    report.implication_ok = ds.status != Status::Yes || poly.status == Status::Yes;

    let w = vec![vec![Elem::ZERO, Elem::ZERO, Elem::ZERO, Elem::ONE]];
    let summand = ds.status == Status::Yes;
    if report.beta_sigma > 1 && a.len() >= 2 && step.generators.certification.is_certified() {
        report.second_generator_ok = Some(!ring.involves(&a[1], 3));
    }
    if summand {
        report.rank_one_ok = Some(step.rank == 1);
    }
    if summand && step.generators.certification.is_certified() {
        if let (Some(i0), Some(i1)) = (step.generators.i0, step.generators.i1) {
            if i0 == i1 {
                let rest: Vec<Polynomial> = a.iter().enumerate().filter(|&(i, _)| i + 1 != i0).map(|(_, q)| q.clone()).collect();
                report.equal_when_i0_is_i1 = Some(relative_gb_equal(&small, &big, &w, &rest, opts)?);
                if poly.status == Status::Yes {
                    report.subgroup_polynomial_ok = Some(sub_poly.status == Status::Yes);
                }
            }
        }
        let a3_invariant = a.len() >= 3 && !step.outside.contains(&3);
        if report.beta_sigma > 1 && a3_invariant {
            let rel_small = small.relative_hilbert_ideal(&w, opts)?;
            if is_complete_intersection(&IdealBasis::new(ring, rel_small.invariants.clone(), opts.gb)?, opts.gb)? {
                report.equal_when_a3_invariant = Some(relative_gb_equal(&small, &big, &w, &a[..3], opts)?);
            }
        }
        if report.beta_subgroup <= 2 && step.generators.i0 == Some(3) && report.beta_sigma == 3 {
            let a3 = &a[2];
            let d = ring.degree(a3).unwrap_or(0) as crate::poly::Exponent;
            let diff = ring.sub(&ring.apply_matrix_unchecked(a3, &sigma), a3);
            let x3 = crate::poly::Monomial::var_pow(4, 2, d);
            let x4 = crate::poly::Monomial::var_pow(4, 3, d);
            let diff_ok = ring.leading_monomial(&diff).ok() == Some(&x3);
            let noprod = a3.monomials().all(|m| m.exps()[2] == 0 || m.exps()[3] == 0);
            let lead_ok = ring.leading_monomial(a3).ok() == Some(&x4);
            report.leading_monomials_of_a3 = Some(diff_ok && noprod && lead_ok);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SmallGroupReport {
    /// Status of `S^{G_l}` for each group of the composition series.
    pub chain_polynomial: Vec<Status>,
    pub direct_summand: Status,
    pub polynomial: Status,
    /// Order-`p^2` members of the chain all have polynomial invariants.
    pub order_p2_ok: bool,
    pub implication_ok: bool,
}

impl SmallGroupReport {
    pub fn counterexample(&self) -> bool {
        !self.order_p2_ok || !self.implication_ok
    }
}

/// Checks for a group of order `p^3`.
pub fn verify_small_group(group: &MatrixGroup, ring: &Ring, opts: &InvariantOptions) -> Result<SmallGroupReport> {
    let p = group.field().p() as usize;
    if group.order() != p * p * p {
        return Err(Error::NotApplicable(format!("|G| = {} is not p^3", group.order())));
    }
    let tri = triangular(group)?;
    let series = composition_series(&tri)?;
    let mut chain_polynomial = Vec::new();
    let mut order_p2_ok = true;
    for h in &series.chain[1..] {
        let inv = InvariantRing::new(h.clone(), ring.clone())?;
        let status = is_polynomial_ring(&inv, opts)?.status;
        if h.order() == p * p && status != Status::Yes {
            order_p2_ok = false;
        }
        chain_polynomial.push(status);
    }
    let inv = InvariantRing::new(tri, ring.clone())?;
    let ds = direct_summand_status(&inv, opts)?.status;
    let polynomial = *chain_polynomial.last().expect("nontrivial chain");
    Ok(SmallGroupReport {
        chain_polynomial,
        direct_summand: ds,
        polynomial,
        order_p2_ok,
        implication_ok: ds != Status::Yes || polynomial == Status::Yes,
    })
}

/// For a group of order `p^2` generated by two transvections `σ, τ` with
/// distinct reflecting hyperplanes: choose coordinates with `x_1 = l_σ`,
/// `x_2 = l_τ`, `σ` moving only `x_3` and `τ` only `x_4`, and compare the
/// generators with `{x_1, x_2, ∏σ^i x_3, ∏τ^i x_4, x_5, ...}`. When `σ` and
/// `τ` fix the same hyperplane of `V*` the comparison is with that hyperplane
/// and the orbit product of a complementary variable. Returns `None` when the
/// group has a single reflecting hyperplane.
pub fn order_p2_closed_form(group: &MatrixGroup, opts: &InvariantOptions) -> Result<Option<bool>> {
    let f = group.field().clone();
    let p = f.p() as usize;
    let n = group.n();
    if group.order() != p * p {
        return Err(Error::usage("closed form needs a group of order p^2"));
    }
    let ring = Ring::deglex(f.clone(), n);
    let trans = group.transvections();
    let Some(sigma) = trans.first().cloned() else {
        return Err(Error::usage("group has no transvections"));
    };
    let cyclic = group.subgroup(std::slice::from_ref(&sigma));
    let Some(tau) = trans.iter().find(|t| !cyclic.contains(t)).cloned() else {
        return Err(Error::usage("group is not generated by transvections"));
    };
    let ls = ring.linear_coeffs(&reflecting_hyperplane(&ring, &sigma)?);
    let lt = ring.linear_coeffs(&reflecting_hyperplane(&ring, &tau)?);
    let mut pair = EchelonBasis::new(n);
    pair.insert(&ls, &f);
    if pair.insert(&lt, &f).is_none() {
        return Ok(None);
    }
    // kernels of σ - 1 and τ - 1 on V*
    let ks = sigma.minus_identity(&f).kernel(&f);
    let kt = tau.minus_identity(&f).kernel(&f);
    let in_span = |basis: &[Vec<Elem>], v: &[Elem]| {
        let mut eb = EchelonBasis::new(n);
        for b in basis {
            eb.insert(b, &f);
        }
        eb.contains(v, &f)
    };
    let x3 = kt.iter().find(|v| !in_span(&ks, v)).cloned();
    let x4 = ks.iter().find(|v| !in_span(&kt, v)).cloned();
    let (Some(x3), Some(x4)) = (x3, x4) else {
        return common_fixed_hyperplane(group, &ring, &ls, &lt, &ks, opts).map(Some);
    };
    // scale so that (σ - 1)x3 = x1 and (τ - 1)x4 = x2
    let scale = |m: &Matrix, v: &[Elem], target: &[Elem]| -> Vec<Elem> {
        let img = m.minus_identity(&f).mul_vec(v, &f);
        let piv = target.iter().position(|e| !e.is_zero()).expect("nonzero");
        let c = f.div(target[piv], img[piv]).expect("nonzero image");
        v.iter().map(|&e| f.mul(c, e)).collect()
    };
    let x3 = scale(&sigma, &x3, &ls);
    let x4 = scale(&tau, &x4, &lt);
    let mut basis = vec![ls.clone(), lt.clone(), x3, x4];
    // complete with vectors fixed by both
    let both: Vec<Vec<Elem>> = {
        let mut rows = sigma.minus_identity(&f).to_rows();
        rows.extend(tau.minus_identity(&f).to_rows());
        Matrix::from_rows(rows)?.kernel(&f)
    };
    let mut span = EchelonBasis::new(n);
    for b in &basis {
        span.insert(b, &f);
    }
    for v in both {
        if basis.len() == n {
            break;
        }
        if span.insert(&v, &f).is_some() {
            basis.push(v);
        }
    }
    if basis.len() != n || span.dim() != n {
        return Ok(Some(false));
    }
    let mut pm = Matrix::zeros(n, n);
    for (c, v) in basis.iter().enumerate() {
        for (r, &x) in v.iter().enumerate() {
            pm.set(r, c, x);
        }
    }
    let conj = group.conjugate_by(&pm)?;
    let inv = InvariantRing::new(conj, ring.clone())?;
    let gens = inv.algebra_generators(opts)?;
    let pf = f.from_int(-1);
    let mut closed = vec![ring.var(0), ring.var(1)];
    // ∏σ^i x3 = x3^p - x1^{p-1} x3, and likewise for x4
    for (v, l) in [(2usize, 0usize), (3, 1)] {
        let top = ring.pow(&ring.var(v), p as u32);
        let low = ring.mul(&ring.pow(&ring.var(l), p as u32 - 1), &ring.var(v));
        closed.push(ring.add_scaled(&top, pf, &low));
    }
    closed.extend((4..n).map(|i| ring.var(i)));
    let expected = canonicalize_generators(&ring, &closed)?;
    Ok(Some(gens.generators == expected))
}

/// Both transvections fix the same hyperplane `K` of `V*` and move only a
/// complement `x_n`: the invariants are `K` and the orbit product of `x_n`.
fn common_fixed_hyperplane(
    group: &MatrixGroup,
    ring: &Ring,
    ls: &[Elem],
    lt: &[Elem],
    k: &[Vec<Elem>],
    opts: &InvariantOptions,
) -> Result<bool> {
    let f = group.field().clone();
    let n = group.n();
    let mut span = EchelonBasis::new(n);
    let mut basis = Vec::new();
    for v in [ls, lt].into_iter().chain(k.iter().map(Vec::as_slice)) {
        if span.insert(v, &f).is_some() {
            basis.push(v.to_vec());
        }
    }
    for i in 0..n {
        let mut e = vec![Elem::ZERO; n];
        e[i] = Elem::ONE;
        if span.insert(&e, &f).is_some() {
            basis.push(e);
        }
    }
    let mut pm = Matrix::zeros(n, n);
    for (c, v) in basis.iter().enumerate() {
        for (r, &x) in v.iter().enumerate() {
            pm.set(r, c, x);
        }
    }
    let inv = InvariantRing::new(group.conjugate_by(&pm)?, ring.clone())?;
    let mut closed: Vec<Polynomial> = (0..n - 1).map(|i| ring.var(i)).collect();
    closed.push(inv.orbit_product(&ring.var(n - 1))?);
    let expected = canonicalize_generators(ring, &closed)?;
    Ok(inv.algebra_generators(opts)?.generators == expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use crate::samples;

    fn opts() -> InvariantOptions {
        InvariantOptions::default()
    }

    fn reference() -> InvariantRing {
        let (f, gens) = samples::f9_two_transvections();
        InvariantRing::new(samples::group(&f, &gens), samples::f9_xyz_ring()).unwrap()
    }

    fn jordan() -> InvariantRing {
        let (f, m) = samples::jordan_block(3, 3);
        InvariantRing::new(samples::group(&f, &[m]), Ring::deglex(f, 3)).unwrap()
    }

    #[test]
    fn polynomial_ring_verdicts() {
        let v = is_polynomial_ring(&reference(), &opts()).unwrap();
        assert_eq!(v.status, Status::Yes);
        assert_eq!(v.certificate.as_ref().unwrap().colength, Some(9));
        assert_eq!(v.replay(&samples::f9_xyz_ring()).unwrap(), Some(Status::Yes));
        let j = jordan();
        let v = is_polynomial_ring(&j, &opts()).unwrap();
        assert_eq!(v.status, Status::No);
        assert_eq!(v.replay(j.ring()).unwrap(), Some(Status::No));
        let f = FieldSpec::prime(2).unwrap();
        let t = InvariantRing::new(MatrixGroup::trivial(&f, 3), Ring::deglex(f, 3)).unwrap();
        assert_eq!(is_polynomial_ring(&t, &opts()).unwrap().status, Status::Yes);
    }

    #[test]
    fn complete_intersections() {
        let ring = samples::f9_xyz_ring();
        let cfg = GbConfig::default();
        let ci = |s: &[&str], r: &Ring| {
            let gens = s.iter().map(|t| r.parse(t).unwrap()).collect();
            is_complete_intersection(&IdealBasis::new(r, gens, cfg).unwrap(), cfg).unwrap()
        };
        assert!(ci(&["x", "y^3"], &ring));
        let r2 = Ring::deglex(FieldSpec::prime(3).unwrap(), 2);
        assert!(!ci(&["x1^2", "x1*x2", "x2^2"], &r2));
        assert!(ci(&["x1", "x2"], &r2));
    }

    #[test]
    fn direct_summand_verdicts() {
        assert_eq!(direct_summand_status(&reference(), &opts()).unwrap().status, Status::Yes);
        let v = direct_summand_status(&jordan(), &opts()).unwrap();
        assert_eq!(v.status, Status::No);
        assert!(v.certificate.unwrap().criterion.contains("transvection"));
        let limited = InvariantOptions {
            degree_bound: Some(1),
            ..opts()
        };
        let (f, gens) = samples::f3_dim5_generators();
        let inv = InvariantRing::new(samples::group(&f, &gens), Ring::deglex(f, 5)).unwrap();
        assert_eq!(direct_summand_status(&inv, &limited).unwrap().status, Status::Unknown);
    }

    #[test]
    fn singular_loci() {
        let inv = reference();
        let gens = inv.algebra_generators(&opts()).unwrap();
        let pres = inv.presentation(&gens, &opts()).unwrap();
        assert_eq!(singular_locus_dimension(&pres, GbConfig::default()).unwrap(), -1);

        let j = jordan();
        let gens = j.algebra_generators(&opts()).unwrap();
        let pres = j.presentation(&gens, &opts()).unwrap();
        let dim = singular_locus_dimension(&pres, GbConfig::default()).unwrap();
        assert!(dim >= 1 && dim >= j.group().rank_fixed_space() as i64);

        let f = FieldSpec::prime(3).unwrap();
        let r = Ring::deglex(f, 2).with_names(vec!["y1".into(), "y2".into()]);
        let pres = Presentation { relations: vec![r.parse("y1^2").unwrap()], ring: r };
        // the Jacobian 2*y1 vanishes on V(y1^2): singular on its whole support
        assert_eq!(singular_locus_dimension(&pres, GbConfig::default()).unwrap(), 1);
    }

    #[test]
    fn singloc_reports() {
        let r = verify_singloc_equivalence(&reference(), &opts()).unwrap();
        assert_eq!(r.polynomial, Status::Yes);
        assert_eq!(r.singular_dimension, -1);
        assert_eq!(r.rank_fixed_space, 2);
        assert!(r.regular_at_fixed_prime);
        assert_eq!(r.consistent, Some(true));
        let r = verify_singloc_equivalence(&jordan(), &opts()).unwrap();
        assert_eq!(r.polynomial, Status::No);
        assert!(!r.regular_at_fixed_prime);
        assert_eq!(r.consistent, Some(true));
        let f = FieldSpec::prime(5).unwrap();
        let t = InvariantRing::new(MatrixGroup::trivial(&f, 2), Ring::deglex(f, 2)).unwrap();
        let r = verify_singloc_equivalence(&t, &opts()).unwrap();
        assert_eq!((r.singular_dimension, r.consistent), (-1, Some(true)));
    }

    #[test]
    fn regular_at_fixed_prime_examples() {
        let inv = reference();
        let gens = inv.algebra_generators(&opts()).unwrap();
        let pres = inv.presentation(&gens, &opts()).unwrap();
        let v3 = vec![vec![Elem::ZERO, Elem::ZERO, Elem::ONE]];
        assert!(regular_at_fixed_prime(&inv, &gens, &pres, &v3, GbConfig::default()).unwrap());
    }

    #[test]
    fn large_rank_reports() {
        let r = verify_large_rank(&reference(), &opts()).unwrap();
        assert!(r.holds() && r.certified);
        let f = FieldSpec::prime(3).unwrap();
        let g = samples::group(&f, &[samples::rank_two_transvection(Elem::ONE)]);
        let inv = InvariantRing::new(g, Ring::deglex(f, 2)).unwrap();
        assert!(verify_large_rank(&inv, &opts()).unwrap().holds());
    }

    #[test]
    fn small_group_reports() {
        let (f, gens) = samples::f3_dim5_generators();
        let g = samples::group(&f, &gens);
        let r = verify_small_group(&g, &Ring::deglex(f.clone(), 5), &opts()).unwrap();
        assert!(!r.counterexample());
        // (Z/3)^3 of commuting transvections
        let mut gs = Vec::new();
        for c in 1..4 {
            let mut m = Matrix::identity(4);
            m.set(0, c, Elem::ONE);
            gs.push(m);
        }
        let g = samples::group(&f, &gs);
        let r = verify_small_group(&g, &Ring::deglex(f, 4), &opts()).unwrap();
        assert_eq!(r.polynomial, Status::Yes);
    }

    #[test]
    fn order_p2_closed_forms() {
        let f = FieldSpec::prime(3).unwrap();
        let mut s = Matrix::identity(4);
        s.set(0, 2, Elem::ONE);
        let mut t = Matrix::identity(4);
        t.set(1, 3, Elem::ONE);
        let g = samples::group(&f, &[s, t]);
        assert_eq!(order_p2_closed_form(&g, &opts()).unwrap(), Some(true));
        // a single hyperplane
        let mut s = Matrix::identity(3);
        s.set(0, 1, Elem::ONE);
        let mut t = Matrix::identity(3);
        t.set(0, 2, Elem::ONE);
        let g = samples::group(&f, &[s, t]);
        assert_eq!(order_p2_closed_form(&g, &opts()).unwrap(), None);
        // distinct hyperplanes, one common fixed hyperplane of V*
        let mut s = Matrix::identity(3);
        s.set(0, 2, Elem::ONE);
        let mut t = Matrix::identity(3);
        t.set(1, 2, Elem::ONE);
        let g = samples::group(&f, &[s, t]);
        assert_eq!(order_p2_closed_form(&g, &opts()).unwrap(), Some(true));
    }

    #[test]
    fn dim4_report_on_polynomial_instance() {
        let f = FieldSpec::prime(2).unwrap();
        let mut s = Matrix::identity(4);
        s.set(0, 2, Elem::ONE);
        let mut t = Matrix::identity(4);
        t.set(1, 3, Elem::ONE);
        let g = samples::group(&f, &[s, t]);
        let r = verify_dim4(&g, &Ring::deglex(f, 4), &opts()).unwrap();
        assert!(!r.counterexample(), "{r:?}");
        assert_eq!(r.polynomial, Some(Status::Yes));
    }
}
