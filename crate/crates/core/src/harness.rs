//! Instance generation and batch verification with a JSON Lines ledger.

use std::collections::{BTreeMap, HashSet};
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checks::{
    is_complete_intersection, is_polynomial_ring, order_p2_closed_form, verify_dim4, verify_large_rank,
    verify_singloc_equivalence, verify_small_group, Dim4Report, LargeRankReport, SinglocReport, SmallGroupReport,
    Status,
};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::grobner::IdealBasis;
use crate::group::{beta, is_transvection, unipotent_transvections, MatrixGroup, DEFAULT_GROUP_CAP};
use crate::instance::{matrix_entries, Entry, Instance};
use crate::invariants::{InvariantOptions, InvariantRing};
use crate::linalg::Matrix;
use crate::poly::Ring;

#[derive(Clone, Debug)]
pub struct SurveyParams {
    pub p: u32,
    pub n: usize,
    /// Number of random draws; ignored when `exhaustive`.
    pub samples: usize,
    /// Every set of at most `max_generators` transvections.
    pub exhaustive: bool,
    pub max_generators: usize,
    pub seed: u64,
    /// Largest number of distinct groups produced.
    pub budget: usize,
    pub group_cap: usize,
    /// Transvection pairs sampled per instance for the conjugation checks.
    pub pair_cap: usize,
    pub opts: InvariantOptions,
    /// Record wall-clock timings (makes the ledger run-dependent).
    pub timings: bool,
}

impl SurveyParams {
    pub fn new(p: u32, n: usize) -> Self {
        SurveyParams {
            p,
            n,
            samples: 20,
            exhaustive: false,
            max_generators: 3,
            seed: 0,
            budget: 10_000,
            group_cap: DEFAULT_GROUP_CAP,
            pair_cap: 32,
            opts: InvariantOptions::default(),
            timings: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub groups: Vec<MatrixGroup>,
    /// The budget or the group cap cut the stream short.
    pub truncated: bool,
}

fn index_subsets(len: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max {
        let mut next = Vec::new();
        for s in &layer {
            let start = s.last().map_or(0, |&l| l + 1);
            for i in start..len {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Subgroups of the upper unitriangular group generated by one to
/// `max_generators` transvections, exhaustively or by uniform draws, with
/// exact duplicates removed.
pub fn enumerate_transvection_groups(params: &SurveyParams) -> Result<Enumeration> {
    let field = FieldSpec::prime(params.p)?;
    enumerate_over(&field, params)
}

pub fn enumerate_over(field: &Arc<FieldSpec>, params: &SurveyParams) -> Result<Enumeration> {
    let n = params.n;
    let mut out = Enumeration {
        groups: Vec::new(),
        truncated: false,
    };
    if params.budget == 0 || n < 2 {
        return Ok(out);
    }
    let pool = unipotent_transvections(field, n, n - 1);
    let mut seen: HashSet<Vec<Matrix>> = HashSet::new();
    let mut push = |gens: Vec<Matrix>, out: &mut Enumeration| -> bool {
        if out.groups.len() >= params.budget {
            out.truncated = true;
            return false;
        }
        match MatrixGroup::generate(field, n, &gens, params.group_cap, true) {
            Ok(g) => {
                if seen.insert(g.elements().to_vec()) {
                    out.groups.push(g);
                }
            }
            Err(Error::Budget { .. }) => out.truncated = true,
            Err(e) => panic!("transvections generate a p-group: {e}"),
        }
        true
    };
    if params.exhaustive {
        for idx in index_subsets(pool.len(), params.max_generators) {
            if !push(idx.iter().map(|&i| pool[i].clone()).collect(), &mut out) {
                break;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        for _ in 0..params.samples {
            let k = rng.gen_range(1..=params.max_generators.max(1));
            let gens: Vec<Matrix> = (0..k).map(|_| pool.choose(&mut rng).expect("nonempty").clone()).collect();
            if !push(gens, &mut out) {
                break;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugationCheck {
    pub pairs: usize,
    pub failures: usize,
}

/// For sampled transvections `g, h`: `ghg⁻¹` is a transvection with the same
/// β as `h`, and transvections of equal β commute.
pub fn check_conjugation(group: &MatrixGroup, pairs: usize, seed: u64) -> ConjugationCheck {
    let f = group.field();
    let trans = group.transvections();
    let mut out = ConjugationCheck::default();
    if trans.is_empty() || !group.is_triangular() {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..pairs {
        let g = trans.choose(&mut rng).expect("nonempty");
        let h = trans.choose(&mut rng).expect("nonempty");
        let gi = g.inverse(f).expect("invertible");
        let c = g.mul(h, f).mul(&gi, f);
        let mut ok = is_transvection(&c, f) && beta(&c, f) == beta(h, f);
        if beta(g, f) == beta(h, f) {
            ok &= g.mul(h, f) == h.mul(g, f);
        }
        out.pairs += 1;
        if !ok {
            out.failures += 1;
        }
    }
    out
}

/// Outcome of the closed-form comparison for groups of order `p^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    Matches,
    Differs,
    SingleHyperplane,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LedgerRecord {
    pub hash: String,
    pub p: u32,
    pub k: usize,
    pub n: usize,
    pub generators: Vec<Vec<Vec<Entry>>>,
    pub order: usize,
    pub rank_fixed_space: usize,
    pub beta: usize,
    pub polynomial: Option<Status>,
    /// `𝔥_{G,S,V^G}` is a complete intersection.
    pub complete_intersection: Option<bool>,
    pub singloc: Option<SinglocReport>,
    pub large_rank: Option<LargeRankReport>,
    pub dim4: Option<Dim4Report>,
    pub small_group: Option<SmallGroupReport>,
    pub order_p2: Option<ClosedForm>,
    pub conjugation: ConjugationCheck,
    pub errors: Vec<String>,
    pub counterexample: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub instances: usize,
    pub truncated: bool,
    pub polynomial: BTreeMap<String, usize>,
    pub complete_intersection: BTreeMap<String, usize>,
    pub direct_summand: BTreeMap<String, usize>,
    pub counterexamples: usize,
    pub errors: usize,
    pub counterexample_hashes: Vec<String>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.counterexamples == 0
    }

    fn add(&mut self, r: &LedgerRecord) {
        self.instances += 1;
        let key = |s: Option<Status>| match s {
            Some(Status::Yes) => "yes",
            Some(Status::No) => "no",
            _ => "unknown",
        };
        *self.polynomial.entry(key(r.polynomial).into()).or_default() += 1;
        let ci = match r.complete_intersection {
            Some(true) => "yes",
            Some(false) => "no",
            None => "unknown",
        };
        *self.complete_intersection.entry(ci.into()).or_default() += 1;
        let ds = r.dim4.as_ref().and_then(|d| d.direct_summand).or(r.small_group.as_ref().map(|s| s.direct_summand));
        let ds = ds.or(match r.polynomial {
            Some(Status::Yes) => Some(Status::Yes),
            _ => None,
        });
        *self.direct_summand.entry(key(ds).into()).or_default() += 1;
        if r.counterexample {
            self.counterexamples += 1;
            self.counterexample_hashes.push(r.hash.clone());
        }
        if !r.errors.is_empty() {
            self.errors += 1;
        }
    }

    pub fn render(&self) -> String {
        let fmt = |m: &BTreeMap<String, usize>| {
            m.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
        };
        let mut s = format!(
            "instances: {}{}\npolynomial: {}\ncomplete intersection: {}\ndirect summand: {}\nerrors: {}\ncounterexamples: {}\n",
            self.instances,
            if self.truncated { " (truncated)" } else { "" },
            fmt(&self.polynomial),
            fmt(&self.complete_intersection),
            fmt(&self.direct_summand),
            self.errors,
            self.counterexamples,
        );
        for h in &self.counterexample_hashes {
            s.push_str(&format!("  counterexample {h}\n"));
        }
        s
    }
}

fn timed<T>(timings: &mut BTreeMap<String, u64>, stage: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.insert(stage.into(), start.elapsed().as_millis() as u64);
    out
}

/// Every applicable verifier on one group.
pub fn verify_instance(group: &MatrixGroup, params: &SurveyParams) -> LedgerRecord {
    let field = group.field().clone();
    let n = group.n();
    let ring = Ring::deglex(field.clone(), n);
    let inst = Instance::new(field.clone(), group.generators().to_vec());
    let hash = inst.hash();
    let opts = &params.opts;
    let mut errors = Vec::new();
    let mut timings = BTreeMap::new();
    let note = |stage: &str, e: Error, errors: &mut Vec<String>| errors.push(format!("{stage}: {e}"));

    let inv = InvariantRing::new(group.clone(), ring.clone()).expect("dimensions agree");
    let polynomial = match timed(&mut timings, "polynomial", || is_polynomial_ring(&inv, opts)) {
        Ok(v) => Some(v.status),
        Err(e) => {
            note("polynomial", e, &mut errors);
            None
        }
    };
    let singloc = match timed(&mut timings, "singloc", || verify_singloc_equivalence(&inv, opts)) {
        Ok(r) => Some(r),
        Err(e) => {
            note("singloc", e, &mut errors);
            None
        }
    };
    let (_, fixed) = group.fixed_spaces();
    let rank = fixed.len();
    let mut complete_intersection = None;
    let mut large_rank = None;
    if rank + 2 >= n {
        match timed(&mut timings, "large_rank", || verify_large_rank(&inv, opts)) {
            Ok(r) => {
                complete_intersection = Some(r.relative_ci);
                large_rank = Some(r);
            }
            Err(e) => note("large_rank", e, &mut errors),
        }
    } else {
        let ci = timed(&mut timings, "complete_intersection", || -> Result<bool> {
            let rel = inv.relative_hilbert_ideal(&fixed, opts)?;
            is_complete_intersection(&IdealBasis::new(&ring, rel.invariants, opts.gb)?, opts.gb)
        });
        match ci {
            Ok(b) => complete_intersection = Some(b),
            Err(e) => note("complete_intersection", e, &mut errors),
        }
    }
    let dim4 = if field.is_prime_field() && n == 4 && group.order() > 1 {
        match timed(&mut timings, "dim4", || verify_dim4(group, &ring, opts)) {
            Ok(r) => Some(r),
            Err(e) => {
                note("dim4", e, &mut errors);
                None
            }
        }
    } else {
        None
    };
    let p = field.p() as usize;
    let small_group = if group.order() == p * p * p {
        match timed(&mut timings, "small_group", || verify_small_group(group, &ring, opts)) {
            Ok(r) => Some(r),
            Err(e) => {
                note("small_group", e, &mut errors);
                None
            }
        }
    } else {
        None
    };
    let order_p2 = if group.order() == p * p {
        match timed(&mut timings, "order_p2", || order_p2_closed_form(group, opts)) {
            Ok(Some(true)) => Some(ClosedForm::Matches),
            Ok(Some(false)) => Some(ClosedForm::Differs),
            Ok(None) => Some(ClosedForm::SingleHyperplane),
            Err(e) => {
                note("order_p2", e, &mut errors);
                None
            }
        }
    } else {
        None
    };
    let seed = params.seed ^ u64::from_str_radix(&hash[..16], 16).expect("hex");
    let conjugation = check_conjugation(group, params.pair_cap, seed);

    let counterexample = singloc.as_ref().is_some_and(|s| s.consistent == Some(false))
        || large_rank.as_ref().is_some_and(|r| r.certified && !r.holds())
        || (n <= 3 && complete_intersection == Some(false))
        || dim4.as_ref().is_some_and(Dim4Report::counterexample)
        || small_group.as_ref().is_some_and(SmallGroupReport::counterexample)
        || order_p2 == Some(ClosedForm::Differs)
        || (group.order() == p * p && group.is_transvection_generated() && polynomial == Some(Status::No))
        || conjugation.failures > 0;

    LedgerRecord {
        hash,
        p: field.p(),
        k: field.k(),
        n,
        generators: group.generators().iter().map(|m| matrix_entries(&field, m)).collect(),
        order: group.order(),
        rank_fixed_space: rank,
        beta: group.beta_group(),
        polynomial,
        complete_intersection,
        singloc,
        large_rank,
        dim4,
        small_group,
        order_p2,
        conjugation,
        errors,
        counterexample,
        timings_ms: params.timings.then_some(timings),
    }
}

/// Verify every group in parallel, sort the records by instance hash and
/// summarize.
pub fn run_suite(groups: &[MatrixGroup], params: &SurveyParams) -> (Vec<LedgerRecord>, Summary) {
    let mut records: Vec<LedgerRecord> = groups.par_iter().map(|g| verify_instance(g, params)).collect();
    records.sort_by(|a, b| a.hash.cmp(&b.hash));
    let mut summary = Summary::default();
    for r in &records {
        summary.add(r);
    }
    (records, summary)
}

/// Append records as JSON Lines and write the summary next to the ledger.
pub fn write_ledger(path: &Path, records: &[LedgerRecord], summary: &Summary) -> std::io::Result<()> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    for r in records {
        let line = serde_json::to_string(r).expect("serializable");
        writeln!(file, "{line}")?;
    }
    let mut summary_path = path.as_os_str().to_owned();
    summary_path.push(".summary.json");
    std::fs::write(summary_path, serde_json::to_string_pretty(summary).expect("serializable") + "\n")
}

/// Enumerate, verify and summarize.
pub fn survey(params: &SurveyParams) -> Result<(Vec<LedgerRecord>, Summary)> {
    let e = enumerate_transvection_groups(params)?;
    let (records, mut summary) = run_suite(&e.groups, params);
    summary.truncated = e.truncated;
    Ok((records, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_shapes() {
        let mut params = SurveyParams::new(2, 3);
        params.exhaustive = true;
        let e = enumerate_transvection_groups(&params).unwrap();
        assert!(!e.truncated);
        // U_3(F_2) is dihedral of order 8 and generated by transvections
        assert!(e.groups.iter().any(|g| g.order() == 8));
        assert!(e.groups.iter().all(|g| g.is_transvection_generated()));
        let mut params = SurveyParams::new(3, 2);
        params.exhaustive = true;
        let e = enumerate_transvection_groups(&params).unwrap();
        assert!(e.groups.iter().all(|g| g.order() == 3));
        params.budget = 0;
        assert!(enumerate_transvection_groups(&params).unwrap().groups.is_empty());
    }

    #[test]
    fn sampling_is_deterministic() {
        let mut params = SurveyParams::new(3, 2);
        params.samples = 5;
        params.seed = 7;
        let (a, sa) = survey(&params).unwrap();
        let (b, sb) = survey(&params).unwrap();
        assert_eq!(sa, sb);
        let ja: Vec<String> = a.iter().map(|r| serde_json::to_string(r).unwrap()).collect();
        let jb: Vec<String> = b.iter().map(|r| serde_json::to_string(r).unwrap()).collect();
        assert_eq!(ja, jb);
        assert_eq!(sa.polynomial.get("yes"), Some(&sa.instances));
        assert!(sa.passed());
    }

    #[test]
    fn conjugation_on_unitriangular_group() {
        let f = FieldSpec::prime(3).unwrap();
        let gens = unipotent_transvections(&f, 3, 2);
        let g = MatrixGroup::generate(&f, 3, &gens, 100, true).unwrap();
        let c = check_conjugation(&g, 50, 1);
        assert_eq!((c.pairs, c.failures), (50, 0));
    }
}
