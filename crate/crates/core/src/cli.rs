//! Command-line front end.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::checks::{direct_summand_status, is_complete_intersection, Status};
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};
use crate::grobner::IdealBasis;
use crate::group::{beta, composition_series, is_transvection, MatrixGroup, DEFAULT_GROUP_CAP};
use crate::harness::{self, verify_instance, write_ledger, LedgerRecord, SurveyParams};
use crate::instance::Instance;
use crate::invariants::{InvariantOptions, InvariantRing};
use crate::linalg::Matrix;
use crate::poly::Ring;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_COUNTEREXAMPLE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "modinv", version, about = "Invariants of finite p-groups in characteristic p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Record,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analyze the group in an instance file and run every applicable verifier.
    Analyze {
        path: PathBuf,
        /// Largest degree examined for invariants.
        #[arg(long)]
        bound: Option<u32>,
        /// Largest group order enumerated.
        #[arg(long)]
        cap_group: Option<usize>,
        /// Transvection pairs sampled for the conjugation checks.
        #[arg(long, default_value_t = 32)]
        cap_pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Variables spanning the ideal of the inertia subgroup, e.g. `x1,x2`.
        #[arg(long)]
        inertia: Option<String>,
        /// List the composition series.
        #[arg(long)]
        series: bool,
        /// Basis of a subspace W of V^G, e.g. `0,0,1` or `1,0,0;0,0,1`;
        /// extension field entries as coefficient lists `c0:c1`.
        #[arg(long)]
        relative: Option<String>,
    },
    /// Enumerate or sample transvection groups and verify each one.
    Survey {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Ledger path (JSON Lines, appended); the summary goes next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long)]
        cap_group: Option<usize>,
        #[arg(long, default_value_t = 32)]
        cap_pairs: usize,
        /// Largest number of distinct groups.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        /// Largest number of transvections per generating set.
        #[arg(long, default_value_t = 3)]
        max_generators: usize,
        /// Store wall-clock timings in the ledger.
        #[arg(long)]
        timings: bool,
    },
}

fn parse_vars(text: &str, n: usize) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            let i: usize = t
                .strip_prefix('x')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| Error::usage(format!("expected a variable x1..x{n}, got `{t}`")))?;
            if i == 0 || i > n {
                return Err(Error::usage(format!("variable {t} out of range")));
            }
            Ok(i - 1)
        })
        .collect()
}

fn parse_vectors(text: &str, field: &FieldSpec, n: usize) -> Result<Vec<Vec<Elem>>> {
    text.split(';')
        .map(|v| {
            let entries: Vec<Elem> = v
                .split(',')
                .map(|e| {
                    let e = e.trim();
                    if e.contains(':') {
                        let cs = e
                            .split(':')
                            .map(|c| c.parse::<u32>().map_err(|_| Error::usage(format!("bad entry `{e}`"))))
                            .collect::<Result<Vec<_>>>()?;
                        field.from_coeffs(&cs)
                    } else {
                        e.parse::<i64>().map(|i| field.from_int(i)).map_err(|_| Error::usage(format!("bad entry `{e}`")))
                    }
                })
                .collect::<Result<_>>()?;
            if entries.len() != n {
                return Err(Error::usage(format!("vector has {} entries, expected {n}", entries.len())));
            }
            Ok(entries)
        })
        .collect()
}

fn format_vector(field: &FieldSpec, v: &[Elem]) -> String {
    let parts: Vec<String> = v.iter().map(|&e| field.format(e)).collect();
    format!("({})", parts.join(", "))
}

fn format_matrix(field: &FieldSpec, m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows()).map(|r| format_vector(field, m.row(r))).collect();
    format!("[{}]", rows.join(" "))
}

fn field_name(field: &FieldSpec) -> String {
    if field.is_prime_field() {
        format!("F_{}", field.p())
    } else {
        let r = Ring::deglex(FieldSpec::prime(field.p()).expect("prime"), 1).with_names(vec!["t".into()]);
        let terms: Vec<(crate::poly::Monomial, Elem)> = field
            .modulus()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (crate::poly::Monomial::var_pow(1, 0, i as _), Elem(c)))
            .collect();
        format!("F_{} (modulus {})", field.size(), r.format(&r.from_terms(terms)))
    }
}

#[derive(Serialize)]
struct InertiaReport {
    variables: Vec<usize>,
    order: usize,
    /// Non-identity elements that are not transvections.
    witnesses: Vec<String>,
}

#[derive(Serialize)]
struct RelativeReport {
    w: Vec<String>,
    gb: Vec<String>,
    complete_intersection: bool,
    certified: bool,
}

#[derive(Serialize)]
struct AnalyzeRecord {
    #[serde(flatten)]
    record: LedgerRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    inertia: Option<InertiaReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relative: Option<RelativeReport>,
}

fn status_word(s: Option<Status>) -> &'static str {
    match s {
        Some(Status::Yes) => "yes",
        Some(Status::No) => "no",
        _ => "unknown",
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

struct AnalyzeArgs {
    bound: Option<u32>,
    cap_group: Option<usize>,
    cap_pairs: usize,
    seed: u64,
    format: Format,
    inertia: Option<String>,
    series: bool,
    relative: Option<String>,
}

fn analyze(text: &str, args: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = Instance::parse(text)?;
    let group = inst.group(args.cap_group)?;
    let field = inst.field.clone();
    let n = inst.n;
    let ring = Ring::deglex(field.clone(), n);
    let opts = InvariantOptions {
        degree_bound: args.bound.or(inst.options.degree_bound),
        ..InvariantOptions::default()
    };
    let mut params = SurveyParams::new(field.p(), n);
    params.opts = opts;
    params.seed = args.seed;
    params.pair_cap = args.cap_pairs;
    params.group_cap = args.cap_group.unwrap_or(DEFAULT_GROUP_CAP);
    let record = verify_instance(&group, &params);

    let inertia = match &args.inertia {
        Some(text) => {
            let vars = parse_vars(text, n)?;
            let sub = group.inertia_subgroup(&vars);
            let witnesses = sub
                .elements()
                .iter()
                .filter(|m| !m.is_identity() && !is_transvection(m, &field))
                .map(|m| format_matrix(&field, m))
                .collect();
            Some(InertiaReport {
                variables: vars.iter().map(|v| v + 1).collect(),
                order: sub.order(),
                witnesses,
            })
        }
        None => None,
    };
    let inv = InvariantRing::new(group.clone(), ring.clone())?;
    let relative = match &args.relative {
        Some(text) => {
            let w = parse_vectors(text, &field, n)?;
            let rel = inv.relative_hilbert_ideal(&w, &opts)?;
            let ci = is_complete_intersection(&IdealBasis::new(&ring, rel.invariants.clone(), opts.gb)?, opts.gb)?;
            Some(RelativeReport {
                w: w.iter().map(|v| format_vector(&field, v)).collect(),
                gb: rel.ideal.format_gb(),
                complete_intersection: ci,
                certified: rel.certified,
            })
        }
        None => None,
    };
    let code = if record.counterexample { EXIT_COUNTEREXAMPLE } else { EXIT_OK };

    if args.format == Format::Record {
        let rec = AnalyzeRecord { record, inertia, relative };
        writeln!(out, "{}", serde_json::to_string(&rec).expect("serializable")).map_err(io_error)?;
        return Ok(code);
    }

    let mut s = String::new();
    let label = inst.label.clone().unwrap_or_else(|| record.hash[..16].to_string());
    let _ = writeln!(s, "instance: {label}");
    let _ = writeln!(s, "field: {}", field_name(&field));
    let _ = writeln!(s, "dimension: {n}");
    let _ = writeln!(s, "group order: {}", group.order());
    analyze_group(&mut s, &group, args.series)?;

    let gens = inv.algebra_generators(&opts)?;
    let _ = writeln!(s, "invariant generators ({:?}):", gens.certification);
    for g in &gens.generators {
        let _ = writeln!(s, "  [{}] {}", ring.degree(g).unwrap_or(0), ring.format(g));
    }
    let h = inv.hilbert_ideal(&opts)?;
    let _ = writeln!(s, "hilbert ideal gb: {}", h.ideal.format_gb().join(", "));
    let _ = writeln!(s, "hilbert ideal colength: {}", colength_text(&h.ideal));
    let (_, fixed) = group.fixed_spaces();
    if !fixed.is_empty() {
        let rel = inv.relative_hilbert_ideal(&fixed, &opts)?;
        let _ = writeln!(s, "relative ideal (W = V^G) gb: {}", rel.ideal.format_gb().join(", "));
    }
    let _ = writeln!(s, "polynomial: {}", status_word(record.polynomial));
    let ds = direct_summand_status(&inv, &opts)?;
    let _ = write!(s, "direct summand: {}", status_word(Some(ds.status)));
    match &ds.certificate {
        Some(c) => {
            let _ = writeln!(s, " ({})", c.criterion);
        }
        None => {
            let _ = writeln!(s);
        }
    }
    if let Some(ci) = record.complete_intersection {
        let _ = writeln!(s, "relative ideal complete intersection: {}", yes_no(ci));
    }
    if let Some(r) = &record.singloc {
        let _ = writeln!(
            s,
            "singular locus: dimension {}, rank V^G {}, regular at the prime of V^G: {}, consistent: {}",
            r.singular_dimension,
            r.rank_fixed_space,
            yes_no(r.regular_at_fixed_prime),
            r.consistent.map_or("unknown", yes_no)
        );
    }
    if let Some(r) = &record.large_rank {
        let _ = writeln!(
            s,
            "large rank checks: relative CI {}, hilbert CI {}, mu {} + {} additive {}, extended {}",
            yes_no(r.relative_ci),
            yes_no(r.hilbert_ci),
            r.mu_relative,
            r.mu_hilbert as i64 - r.mu_relative as i64,
            yes_no(r.mu_additive),
            yes_no(r.extended)
        );
    }
    if let Some(r) = &record.dim4 {
        let _ = writeln!(
            s,
            "dimension 4 step: beta {} / sigma {} / subgroup {}, d0 {:?}, rank {}, i0 {:?}, i1 {:?}, flagged {}",
            r.beta_group,
            r.beta_sigma,
            r.beta_subgroup,
            r.d0,
            r.rank_quotient,
            r.i0,
            r.i1,
            yes_no(r.counterexample())
        );
    }
    if let Some(r) = &record.small_group {
        let chain: Vec<&str> = r.chain_polynomial.iter().map(|&x| status_word(Some(x))).collect();
        let _ = writeln!(s, "order p^3 chain polynomial: {}", chain.join(" "));
    }
    if let Some(c) = record.order_p2 {
        let _ = writeln!(s, "order p^2 closed form: {}", serde_json::to_string(&c).expect("enum").trim_matches('"'));
    }
    let _ = writeln!(s, "conjugation pairs: {} checked, {} failed", record.conjugation.pairs, record.conjugation.failures);
    for e in &record.errors {
        let _ = writeln!(s, "skipped: {e}");
    }
    if let Some(r) = &inertia {
        let vars: Vec<String> = r.variables.iter().map(|v| format!("x{v}")).collect();
        let _ = writeln!(s, "inertia subgroup of ({}): order {}", vars.join(", "), r.order);
        for w in &r.witnesses {
            let _ = writeln!(s, "  not a pseudoreflection: {w}");
        }
    }
    if let Some(r) = &relative {
        let _ = writeln!(s, "relative ideal (W = {}) gb: {}", r.w.join(", "), r.gb.join(", "));
        let _ = writeln!(s, "relative ideal complete intersection: {}", yes_no(r.complete_intersection));
    }
    let _ = writeln!(s, "verdict: {}", if record.counterexample { "counterexample" } else { "consistent" });
    out.write_all(s.as_bytes()).map_err(io_error)?;
    Ok(code)
}

fn colength_text(ideal: &IdealBasis) -> String {
    match ideal.colength().finite() {
        Some(c) => c.to_string(),
        None => "infinite".into(),
    }
}

fn analyze_group(s: &mut String, group: &MatrixGroup, series: bool) -> Result<()> {
    let f = group.field().clone();
    let trans = group.transvections();
    let _ = writeln!(
        s,
        "transvections: {} of {} non-identity elements; transvection-generated: {}",
        trans.len(),
        group.order().saturating_sub(1),
        yes_no(group.is_transvection_generated())
    );
    let tri = if group.is_triangular() {
        group.clone()
    } else {
        let _ = writeln!(s, "coordinates: triangularized for beta values and the series");
        group.conjugate_by(&group.triangularize()?)?
    };
    for (i, g) in tri.generators().iter().enumerate() {
        let _ = writeln!(
            s,
            "  g{}: beta {}, transvection {}",
            i + 1,
            beta(g, &f),
            yes_no(is_transvection(g, &f))
        );
    }
    let _ = writeln!(s, "beta of the group: {}", tri.beta_group());
    let (_, fixed) = group.fixed_spaces();
    let basis: Vec<String> = fixed.iter().map(|v| format_vector(&f, v)).collect();
    let _ = writeln!(s, "V^G: rank {} basis {}", fixed.len(), basis.join(" "));
    match composition_series(&tri) {
        Ok(cs) => {
            let orders: Vec<String> = cs.chain.iter().map(|g| g.order().to_string()).collect();
            let _ = writeln!(s, "composition series orders: {}", orders.join(" < "));
            if series {
                for (l, w) in cs.witnesses.iter().enumerate() {
                    let _ = writeln!(s, "  step {}: witness {} beta {}", l + 1, format_matrix(&f, w), beta(w, &f));
                }
            }
        }
        Err(Error::NotApplicable(m)) => {
            let _ = writeln!(s, "composition series: not applicable ({m})");
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn io_error(e: std::io::Error) -> Error {
    Error::Internal(format!("write failed: {e}"))
}

/// Run a parsed command line, writing reports to `out` and diagnostics to
/// `err`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Analyze {
            path,
            bound,
            cap_group,
            cap_pairs,
            seed,
            format,
            inertia,
            series,
            relative,
        } => std::fs::read_to_string(&path)
            .map_err(|e| Error::usage(format!("cannot read {}: {e}", path.display())))
            .and_then(|text| {
                let args = AnalyzeArgs {
                    bound,
                    cap_group,
                    cap_pairs,
                    seed,
                    format,
                    inertia,
                    series,
                    relative,
                };
                analyze(&text, &args, out)
            }),
        Command::Survey {
            p,
            n,
            samples,
            exhaustive,
            seed,
            out: ledger,
            bound,
            cap_group,
            cap_pairs,
            budget,
            max_generators,
            timings,
        } => {
            let mut params = SurveyParams::new(p, n);
            params.samples = samples;
            params.exhaustive = exhaustive;
            params.seed = seed;
            params.opts.degree_bound = bound;
            params.group_cap = cap_group.unwrap_or(DEFAULT_GROUP_CAP);
            params.pair_cap = cap_pairs;
            params.budget = budget;
            params.max_generators = max_generators;
            params.timings = timings;
            survey(&params, ledger, out)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let msg = match &e {
                Error::Budget { stage, detail } => format!("resource limit in {stage}: {detail}"),
                other => other.to_string(),
            };
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn survey(params: &SurveyParams, ledger: Option<PathBuf>, out: &mut dyn Write) -> Result<i32> {
    let (records, summary) = harness::survey(params)?;
    if let Some(path) = &ledger {
        write_ledger(path, &records, &summary).map_err(|e| Error::usage(format!("cannot write {}: {e}", path.display())))?;
        writeln!(out, "ledger: {}", path.display()).map_err(io_error)?;
    }
    out.write_all(summary.render().as_bytes()).map_err(io_error)?;
    Ok(if summary.passed() { EXIT_OK } else { EXIT_COUNTEREXAMPLE })
}
