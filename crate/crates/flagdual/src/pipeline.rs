//! Report-producing runs shared by the `flagdual` binary and the acceptance suite.
//!
//! A run is a pure function of its [`RunConfig`] and section matrix. Reports carry no
//! timings, and every map is ordered, so equal inputs serialize to identical bytes.

use std::collections::BTreeMap;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::bwb::lemmas::{random_f_weight, serre_duality_holds, vanishing_oo_grid, vanishing_qo_grid, LemmaGrid};
use crate::bwb::{bott, ext_f, ext_grass, line_weight, named, BlockedWeight, Bundle, CohomologyTable, Kind, Space};
use crate::duality::{
    commutant_space, charpoly_squarefree, is_fixed_by, nonbirational_certificate, normalization_constant,
    pushforward_to_g25, pushforward_to_g35, random_hf_section, witness_section, CertificateOptions,
    QUADRIC_NORMALIZATION,
};
use crate::exactalg::{triple_to_pair, AlgError, Budget, Field, FiniteField, Fp, Gf4, Mat, PAIRS, TRIPLES};
use crate::glsm::{
    bijection_count, certificate_sweep, critical_member, gauge_reduce, instability_certificate, is_critical_point,
    minus_chamber_sweep, normal_form, okonek_check, plus_chamber_sweep, semistable, verify_certificate, Chamber,
    GlsmError, GlsmPoint, OkonekReport, Superpotential,
};
use crate::grassflag::{flag_ideal_space, hf_space, iota_action, DualityMap};
use crate::motivic::{degree_check, derive_l_relation, reduce_section, CountBudget, Generator, PointCounts};
use crate::mutation::{check_collection, replay_proof, ReplayReport};
use crate::properties;
use crate::Q;

pub const SCHEMA: &str = "flagdual-report/1";

/// Primes with a compiled field type.
pub const SUPPORTED_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 101];

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("unsupported field {0:?}: use QQ, GF(4) or a prime among {SUPPORTED_PRIMES:?}")]
    Field(String),
    #[error("{0} needs a finite field")]
    NeedsFiniteField(&'static str),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Glsm(#[from] GlsmError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
    Gf4,
}

impl FieldSpec {
    /// Accepts `QQ`/`Q`, `p`, `GF(p)`, `4` and `GF(4)`.
    pub fn parse(s: &str) -> Result<FieldSpec, PipelineError> {
        let t = s.trim();
        let inner = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')).unwrap_or(t);
        match inner {
            "Q" | "QQ" => return Ok(FieldSpec::Rationals),
            "4" => return Ok(FieldSpec::Gf4),
            _ => {}
        }
        let p: u64 = inner.parse().map_err(|_| PipelineError::Field(s.to_string()))?;
        if SUPPORTED_PRIMES.contains(&p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(PipelineError::Field(s.to_string()))
        }
    }

    /// The field with q elements.
    pub fn of_order(q: u64) -> Result<FieldSpec, PipelineError> {
        FieldSpec::parse(&q.to_string())
    }

    pub fn is_finite(self) -> bool {
        self != FieldSpec::Rationals
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "QQ"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
            FieldSpec::Gf4 => write!(f, "GF(4)"),
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Runs `$body` with `$F` bound to the field type of `$spec`; `$q` handles the rationals.
/// The body must evaluate to `Result<_, PipelineError>`.
macro_rules! with_field {
    ($spec:expr, $F:ident => $body:expr, rationals => $q:expr) => {
        match $spec {
            FieldSpec::Rationals => $q,
            FieldSpec::Gf4 => {
                type $F = Gf4;
                $body
            }
            FieldSpec::Prime(2) => {
                type $F = Fp<2>;
                $body
            }
            FieldSpec::Prime(3) => {
                type $F = Fp<3>;
                $body
            }
            FieldSpec::Prime(5) => {
                type $F = Fp<5>;
                $body
            }
            FieldSpec::Prime(7) => {
                type $F = Fp<7>;
                $body
            }
            FieldSpec::Prime(11) => {
                type $F = Fp<11>;
                $body
            }
            FieldSpec::Prime(13) => {
                type $F = Fp<13>;
                $body
            }
            FieldSpec::Prime(17) => {
                type $F = Fp<17>;
                $body
            }
            FieldSpec::Prime(19) => {
                type $F = Fp<19>;
                $body
            }
            FieldSpec::Prime(23) => {
                type $F = Fp<23>;
                $body
            }
            FieldSpec::Prime(29) => {
                type $F = Fp<29>;
                $body
            }
            FieldSpec::Prime(31) => {
                type $F = Fp<31>;
                $body
            }
            FieldSpec::Prime(101) => {
                type $F = Fp<101>;
                $body
            }
            FieldSpec::Prime(p) => Err(PipelineError::Field(p.to_string())),
        }
    };
    ($spec:expr, $F:ident => $body:expr) => {
        with_field!($spec, $F => $body, rationals => {
            type $F = Q;
            $body
        })
    };
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub field: FieldSpec,
    pub seed: u64,
    /// Sample count of the main sweep of a command; each stage has its own default.
    pub samples: Option<usize>,
    pub budget: Budget,
    /// Largest field order enumerated by the point counts.
    pub max_q: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { field: FieldSpec::Prime(17), seed: 0, samples: None, budget: Budget::default(), max_q: 5 }
    }
}

impl RunConfig {
    /// Independent stream per stage, so that stages draw the same values whether or not
    /// the others run.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }

    fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn count_budget(&self) -> CountBudget {
        CountBudget { max_q: self.max_q }
    }
}

/// Conventions every report repeats, so a report can be checked without the source.
#[derive(Clone, Debug, Serialize)]
pub struct Conventions {
    pub pair_order: Vec<String>,
    pub triple_order: Vec<String>,
    /// Dual coordinate of the complementary pair of triple t is `sign[t]` times the minor on t.
    pub dual_coordinate_sign: Vec<i64>,
    pub section_pairing: &'static str,
    pub quadric_normalization: i64,
    pub gauge_action: &'static str,
    pub line_bundle_weight: &'static str,
    pub monomial_order: &'static str,
    pub indices: &'static str,
}

pub fn conventions() -> Conventions {
    let one_based = |v: &[usize]| v.iter().map(|i| (i + 1).to_string()).collect::<String>();
    Conventions {
        pair_order: PAIRS.iter().map(|&(i, j)| one_based(&[i, j])).collect(),
        triple_order: TRIPLES.iter().map(|&(i, j, k)| one_based(&[i, j, k])).collect(),
        dual_coordinate_sign: (0..10).map(|t| triple_to_pair(t).1).collect(),
        section_pairing: "s(x, y) = ybar^T S xbar, rows of S indexed by dual pairs, columns by pairs",
        quadric_normalization: QUADRIC_NORMALIZATION,
        gauge_action: "g.(B, w) = (B g^-1, det(g)^2 w g^-1)",
        line_bundle_weight: "O(a,b) on F(2,3,5) has weight (a+b, a+b | b | 0, 0)",
        monomial_order: "degrevlex",
        indices: "1-based in reports",
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub name: String,
    pub status: String,
    pub pass: bool,
    pub detail: Value,
}

impl Stage {
    pub fn new(name: &str, pass: bool, detail: Value) -> Stage {
        let status = if pass { "pass" } else { "fail" };
        Stage { name: name.into(), status: status.into(), pass, detail }
    }

    fn with_status(mut self, status: &str) -> Stage {
        self.status = status.into();
        self
    }

    fn error(name: &str, message: String) -> Stage {
        Stage { name: name.into(), status: "error".into(), pass: false, detail: json!({ "error": message }) }
    }
}

/// Runs a stage, turning errors and panics into a failed stage.
fn guard(name: &str, f: impl FnOnce() -> Result<Stage, PipelineError>) -> Stage {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(stage)) => stage,
        Ok(Err(e)) => Stage::error(name, e.to_string()),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            Stage::error(name, format!("panic: {msg}"))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub section: Option<Vec<Vec<String>>>,
    pub conventions: Conventions,
    pub stages: Vec<Stage>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, cfg: &RunConfig, section: Option<&Mat<Q>>, stages: Vec<Stage>) -> Report {
        Report {
            schema: SCHEMA,
            command: command.into(),
            config: cfg.clone(),
            section: section.map(rows_as_strings),
            conventions: conventions(),
            pass: stages.iter().all(|s| s.pass),
            stages,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn failed_stages(&self) -> Vec<&str> {
        self.stages.iter().filter(|s| !s.pass).map(|s| s.name.as_str()).collect()
    }
}

fn rows_as_strings<F: Field>(m: &Mat<F>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect()
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Entrywise reduction of a rational matrix.
fn reduce_matrix<F: Field>(m: &Mat<Q>) -> Result<Mat<F>, AlgError> {
    let mut out = Mat::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out[(i, j)] = F::from_ratio(m[(i, j)].numer(), m[(i, j)].denom())?;
        }
    }
    Ok(out)
}

/// Where the section matrix of a run comes from.
#[derive(Clone, Debug)]
pub enum SectionSource {
    Witness,
    /// A random integral element of the invariant complement, drawn from the run seed.
    Random,
    Given(Mat<Q>),
}

pub fn resolve_section(src: &SectionSource, cfg: &RunConfig) -> Result<Mat<Q>, PipelineError> {
    match src {
        SectionSource::Witness => Ok(witness_section()),
        SectionSource::Random => Ok(random_integral_hf_section(&mut cfg.rng(0))),
        SectionSource::Given(m) => {
            if m.rows() != 10 || m.cols() != 10 {
                return Err(PipelineError::Input(format!("section must be 10x10, got {}x{}", m.rows(), m.cols())));
            }
            Ok(m.clone())
        }
    }
}

/// Integer combination of the rational basis of 𝓗_F, cleared of denominators and of the
/// common content, so that it reduces modulo every prime.
pub fn random_integral_hf_section<R: Rng + ?Sized>(rng: &mut R) -> Mat<Q> {
    let h = hf_space::<Q>();
    let coeffs: Vec<Q> = (0..h.dim()).map(|_| Q::from_integer(BigInt::from(rng.gen_range(-3i64..=3)))).collect();
    let s = h.combine(&coeffs);
    let lcm = s.entries().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = s.entries().iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let gcd = if gcd.is_zero() { BigInt::one() } else { gcd.abs() };
    Mat::from_fn(10, 10, |i, j| Q::from_integer(&ints[10 * i + j] / &gcd))
}

const PLUECKER_NAMES: [&str; 10] = ["x12", "x13", "x14", "x15", "x23", "x24", "x25", "x34", "x35", "x45"];

fn b_names() -> Vec<String> {
    (0..15).map(|v| format!("b{}{}", v / 3 + 1, v % 3 + 1)).collect()
}

// ---------------------------------------------------------------- stages

fn hf_detail<F: Field>(maps: usize, rng: &mut ChaCha8Rng) -> (bool, Value) {
    let flag = flag_ideal_space::<F>();
    let hf = hf_space::<F>();
    let sum = flag.sum(&hf).dim();
    let meet = flag.intersection_dim(&hf);
    let (mut flag_ok, mut hf_ok) = (0, 0);
    for _ in 0..maps {
        let f = DualityMap::<F>::random(rng);
        flag_ok += flag.basis().iter().all(|b| flag.contains(&iota_action(b, &f))) as usize;
        hf_ok += hf.basis().iter().all(|b| hf.contains(&iota_action(b, &f))) as usize;
    }
    let pass = flag.dim() == 25 && hf.dim() == 75 && sum == 100 && meet == 0 && flag_ok == maps && hf_ok == maps;
    let detail = json!({
        "field": F::field_name(),
        "flag_ideal_dim": flag.dim(),
        "hf_dim": hf.dim(),
        "direct_sum_rank": sum,
        "intersection_dim": meet,
        "iota_maps": maps,
        "flag_ideal_invariant_under": flag_ok,
        "hf_invariant_under": hf_ok,
    });
    (pass, detail)
}

/// Flag ideal and its invariant complement over the run field and over ℚ.
pub fn hf_stage(cfg: &RunConfig) -> Stage {
    guard("hf_construction", || {
        let maps = 50;
        let mut rng = cfg.rng(1);
        let mut runs = vec![with_field!(cfg.field, F => Ok(hf_detail::<F>(maps, &mut rng)))?];
        if cfg.field != FieldSpec::Rationals {
            runs.push(hf_detail::<Q>(maps, &mut rng));
        }
        let pass = runs.iter().all(|r| r.0);
        Ok(Stage::new("hf_construction", pass, Value::Array(runs.into_iter().map(|r| r.1).collect())))
    })
}

fn build_detail<F: Field>(s: &Mat<Q>, n: usize, rng: &mut ChaCha8Rng) -> Result<(bool, Value), PipelineError> {
    let sf = reduce_section::<F>(s)?;
    let in_hf = hf_space::<F>().contains(&sf.s);
    let norm = normalization_constant::<F>();
    let quadrics = pushforward_to_g25(&sf);
    let quintics = pushforward_to_g35(&sf);
    let names: Vec<String> = PLUECKER_NAMES.iter().map(|s| s.to_string()).collect();
    let contraction = properties::contraction_identity(&sf, rng, n);
    let covariance = properties::gauge_covariance(&sf, rng, n);
    let pass = norm == F::from_i64(QUADRIC_NORMALIZATION) && contraction.pass && covariance.pass;
    let detail = json!({
        "field": F::field_name(),
        "in_hf": in_hf,
        "normalization_constant": norm.to_string(),
        "quadrics": quadrics.quadrics.iter().map(|q| q.display_with(&names)).collect::<Vec<_>>(),
        "quintic_terms": quintics.components.iter().map(|q| q.terms().len()).collect::<Vec<_>>(),
        "contraction": contraction,
        "gauge_covariance": covariance,
    });
    Ok((pass, detail))
}

/// Quadrics and quintics of the section, checked against the contraction identities.
pub fn duality_build_stage(cfg: &RunConfig, s: &Mat<Q>) -> Stage {
    guard("duality_build", || {
        let mut rng = cfg.rng(2);
        let n = 100;
        let (pass, detail) = with_field!(cfg.field, F => build_detail::<F>(s, n, &mut rng))?;
        Ok(Stage::new("duality_build", pass, detail))
    })
}

/// The quadrics (in x12..x45) and quintics (in b11..b53) of the section, one per line.
pub fn pushforward_texts(cfg: &RunConfig, s: &Mat<Q>) -> Result<(String, String), PipelineError> {
    fn texts<F: Field>(s: &Mat<Q>) -> Result<(String, String), PipelineError> {
        let sf = reduce_section::<F>(s)?;
        let names: Vec<String> = PLUECKER_NAMES.iter().map(|s| s.to_string()).collect();
        let quad: String = pushforward_to_g25(&sf).quadrics.iter().map(|q| q.display_with(&names) + "\n").collect();
        let bn = b_names();
        let quint: String = pushforward_to_g35(&sf).components.iter().map(|q| q.display_with(&bn) + "\n").collect();
        Ok((quad, quint))
    }
    with_field!(cfg.field, F => texts::<F>(s))
}

fn commutant_summary<F: Field>(s: &Mat<F>) -> (usize, bool) {
    let comm = commutant_space(s);
    (comm.dim(), comm.basis().iter().all(|m| *m == m.transpose()))
}

fn selfdual_detail<F: Field>(s: &Mat<Q>, probes: usize, rng: &mut ChaCha8Rng) -> Result<Stage, PipelineError> {
    let sf = reduce_section::<F>(s)?;
    let in_hf = hf_space::<F>().contains(&sf.s);
    let mut candidates = vec![Mat::<F>::identity(5)];
    candidates.extend((0..probes).map(|_| Mat::random(5, 5, rng)));
    let mut tested = 0;
    let mut fixed_by = None;
    for t in candidates {
        if let Ok(f) = DualityMap::new(t) {
            tested += 1;
            if is_fixed_by(&sf.s, &f) {
                fixed_by = Some(rows_as_strings(&f.t));
                break;
            }
        }
    }
    let (dim_commutant, symmetric) = commutant_summary(&sf.s);
    let status = if fixed_by.is_some() { "self-dual" } else { "no-fixed-map-found" };
    let detail = json!({
        "status": status,
        "field": F::field_name(),
        "in_hf": in_hf,
        "maps_tested": tested,
        "fixed_by": fixed_by,
        "dim_commutant": dim_commutant,
        "symmetric": symmetric,
        "saturation_result": "not run",
    });
    Ok(Stage::new("selfdual_scan", fixed_by.is_none(), detail).with_status(status))
}

/// Tries the identity and random maps V → V^∨ as witnesses of self-duality.
pub fn selfdual_stage(cfg: &RunConfig, s: &Mat<Q>) -> Stage {
    guard("selfdual_scan", || {
        let probes = cfg.samples_or(50);
        let mut rng = cfg.rng(3);
        with_field!(cfg.field, F => selfdual_detail::<F>(s, probes, &mut rng))
    })
}

/// Commutant checks on random squarefree elements of 𝓗_F: dimension 10, all symmetric.
fn fallback_detail<F: Field>(sections: usize, rng: &mut ChaCha8Rng) -> Value {
    if F::characteristic() == 2 {
        return json!({ "skipped": "characteristic 2" });
    }
    let mut checked = Vec::new();
    for _ in 0..50 * sections {
        if checked.len() == sections {
            break;
        }
        let s = random_hf_section::<F, _>(rng);
        if !charpoly_squarefree(&s.s) {
            continue;
        }
        let (dim, symmetric) = commutant_summary(&s.s);
        checked.push(json!({ "dim_commutant": dim, "symmetric": symmetric }));
    }
    let pass = checked.len() == sections && checked.iter().all(|c| c["dim_commutant"] == 10 && c["symmetric"] == true);
    json!({ "sections": checked, "pass": pass })
}

fn nonbirational_detail<F: Field>(s: &Mat<Q>, cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Stage, PipelineError> {
    let sf = reduce_section::<F>(s)?;
    let opts = CertificateOptions { budget: cfg.budget, force_full: false, probes: 20 };
    let report = nonbirational_certificate(&sf.s, opts, rng);
    let fallback = fallback_detail::<F>(3, rng);
    let fallback_ok = fallback["pass"] != false;
    let mut detail = to_value(&report);
    detail["fallback"] = fallback;
    let pass = report.status == "certified-empty" && fallback_ok;
    Ok(Stage::new("nonbirational", pass, detail).with_status(&report.status))
}

/// Saturation of the commutation ideal by det T, plus the commutant fallback checks.
pub fn nonbirational_stage(cfg: &RunConfig, s: &Mat<Q>) -> Stage {
    guard("nonbirational", || {
        let mut rng = cfg.rng(4);
        with_field!(cfg.field, F => nonbirational_detail::<F>(s, cfg, &mut rng))
    })
}

fn relation_values(c: &PointCounts) -> BTreeMap<Generator, i128> {
    BTreeMap::from([
        (Generator::X, c.x as i128),
        (Generator::Y, c.y as i128),
        (Generator::G25, c.g25 as i128),
        (Generator::G35, c.g35 as i128),
        (Generator::M, c.m_over_g25 as i128),
    ])
}

fn count_entry(source: &str, c: &PointCounts) -> (bool, Value) {
    let relation = derive_l_relation();
    let values = relation.evaluate(c.q as i128, &relation_values(c));
    let relation_vanishes = values.iter().all(|v| *v == Some(0));
    let pass = c.pass() && relation_vanishes;
    (pass, json!({ "source": source, "counts": c, "relation_values": values, "pass": pass }))
}

fn counts_over<F: FiniteField>(
    s: Option<&Mat<Q>>,
    sections: usize,
    budget: CountBudget,
    rng: &mut ChaCha8Rng,
) -> Result<(bool, Value), PipelineError> {
    let mut entries = Vec::new();
    let mut pass = true;
    if let Some(s) = s {
        match reduce_section::<F>(s) {
            Ok(sf) => {
                let (ok, v) = count_entry("input", &PointCounts::compute(&sf, budget)?);
                pass &= ok;
                entries.push(v);
            }
            Err(e) => entries.push(json!({ "source": "input", "skipped": e.to_string() })),
        }
    }
    for i in 0..sections {
        let sf = random_hf_section::<F, _>(rng);
        let (ok, v) = count_entry(&format!("random {}", i + 1), &PointCounts::compute(&sf, budget)?);
        pass &= ok;
        entries.push(v);
    }
    Ok((pass, json!({ "field": F::field_name(), "entries": entries })))
}

fn counts_for_spec(
    spec: FieldSpec,
    s: Option<&Mat<Q>>,
    sections: usize,
    budget: CountBudget,
    rng: &mut ChaCha8Rng,
) -> Result<(bool, Value), PipelineError> {
    with_field!(spec, F => counts_over::<F>(s, sections, budget, rng), rationals => Err(PipelineError::NeedsFiniteField("point counting")))
}

/// Point counts of X, Y, M and both Grassmannians over F₂, F₃, F₅ (and the run field when
/// it is small enough): the input section plus random sections of 𝓗_F.
pub fn point_counts_stage(cfg: &RunConfig, s: &Mat<Q>) -> Stage {
    guard("point_counts", || {
        let sections = 5;
        let mut rng = cfg.rng(5);
        let mut fields = vec![FieldSpec::Prime(2), FieldSpec::Prime(3), FieldSpec::Prime(5)];
        let mut notes = Vec::new();
        if cfg.field.is_finite() && !fields.contains(&cfg.field) {
            let q = match cfg.field {
                FieldSpec::Prime(p) => p,
                _ => 4,
            };
            if q <= cfg.max_q {
                fields.push(cfg.field);
            } else {
                notes.push(format!("{} skipped: q = {q} exceeds max_q = {}", cfg.field, cfg.max_q));
            }
        }
        let mut pass = true;
        let mut runs = Vec::new();
        for spec in fields {
            let (ok, v) = counts_for_spec(spec, Some(s), sections, cfg.count_budget(), &mut rng)?;
            pass &= ok;
            runs.push(v);
        }
        Ok(Stage::new("point_counts", pass, json!({ "fields": runs, "notes": notes })))
    })
}

/// Counts for one field order, as run by `motivic count`.
pub fn motivic_count_stage(cfg: &RunConfig, s: &Mat<Q>, q: u64) -> Stage {
    guard("point_counts", || {
        let spec = FieldSpec::of_order(q)?;
        let sections = cfg.samples_or(0);
        let (pass, detail) = counts_for_spec(spec, Some(s), sections, cfg.count_budget(), &mut cfg.rng(5))?;
        Ok(Stage::new("point_counts", pass, detail))
    })
}

/// The symbolic relation ([X] - [Y])L² = 0 from the two fibrations of M.
pub fn l_relation_stage() -> Stage {
    guard("l_relation", || {
        let r = derive_l_relation();
        let l2 = crate::motivic::LPoly::l_power(2);
        let expected = crate::motivic::MotivicClass::term(Generator::X, l2.clone())
            .sub(&crate::motivic::MotivicClass::term(Generator::Y, l2));
        let pass = r.relation == expected || r.relation == expected.scale(&crate::motivic::LPoly::constant(-1));
        let steps: Vec<Value> = r.steps.iter().map(|s| json!({ "note": s.note, "class": s.rendered })).collect();
        Ok(Stage::new("l_relation", pass, json!({ "steps": steps, "relation": r.rendered })))
    })
}

pub fn degree_stage() -> Stage {
    guard("degree", || {
        let d = degree_check();
        Ok(Stage::new("degree", d.pass(), to_value(&d)))
    })
}

fn grid_value(g: &LemmaGrid) -> Value {
    json!({ "name": g.name, "cells": g.cells.len(), "pass": g.pass, "grid": g.render().lines().collect::<Vec<_>>() })
}

/// Vanishing grids, Ext(Q₂,Q₂), h⁰(O(1,1)) and Serre duality on random weights.
pub fn bwb_stage(cfg: &RunConfig) -> Stage {
    guard("bwb_lemmas", || {
        let qo = vanishing_qo_grid(7, 15);
        let oo = vanishing_oo_grid(7, 15);
        let q2 = ext_grass(Space::G25, &named::q2(), 0, &named::q2(), 0);
        let q2_on_f = ext_f(&Bundle::new(Kind::Q2, 0, 0), &Bundle::new(Kind::Q2, 0, 0));
        let h0 = bott(&BlockedWeight::new(Space::F, line_weight(1, 1))?)?;
        let serre_weights = 100;
        let mut rng = cfg.rng(6);
        let serre_failures: Vec<String> = (0..serre_weights)
            .map(|_| random_f_weight(&mut rng, 6))
            .filter(|w| !serre_duality_holds(w))
            .map(|w| w.to_string())
            .collect();
        let pass = qo.pass
            && oo.pass
            && q2 == CohomologyTable::single(0, 1)
            && q2_on_f.is_concentrated(0, 1)
            && h0 == CohomologyTable::single(0, 75)
            && serre_failures.is_empty();
        let detail = json!({
            "vanishingQO": grid_value(&qo),
            "vanishingOO": grid_value(&oo),
            "ext_q2_q2": q2.to_string(),
            "ext_q2_q2_on_f": q2_on_f.to_string(),
            "h0_f_o11": h0.to_string(),
            "serre_weights": serre_weights,
            "serre_failures": serre_failures,
        });
        Ok(Stage::new("bwb_lemmas", pass, detail))
    })
}

/// One named lemma over `lo ≤ a ≤ hi`, with b up to hi + 8.
pub fn bwb_lemma_stage(cfg: &RunConfig, name: &str, lo: i64, hi: i64) -> Stage {
    guard("bwb_lemma", || {
        let mut grid = match name {
            "vanishingQO" => vanishing_qo_grid(hi, hi + 8),
            "vanishingOO" => vanishing_oo_grid(hi, hi + 8),
            "serre" => {
                let mut rng = cfg.rng(6);
                let n = cfg.samples_or(100);
                let bound = hi.max(1);
                let failures: Vec<String> = (0..n)
                    .map(|_| random_f_weight(&mut rng, bound))
                    .filter(|w| !serre_duality_holds(w))
                    .map(|w| w.to_string())
                    .collect();
                let detail = json!({ "name": "serre", "weights": n, "bound": bound, "failures": failures });
                return Ok(Stage::new("bwb_lemma", failures.is_empty(), detail));
            }
            other => {
                return Err(PipelineError::Input(format!(
                    "unknown lemma {other:?}: expected vanishingQO, vanishingOO or serre"
                )))
            }
        };
        grid.cells.retain(|c| c.a >= lo);
        let pass = grid.cells.iter().all(|c| c.vanishes == c.expected);
        Ok(Stage::new("bwb_lemma", pass, grid_value(&LemmaGrid { pass, ..grid })))
    })
}

/// Cohomology of one irreducible homogeneous bundle.
pub fn bwb_cohomology_stage(space: &str, weight: &str) -> Stage {
    guard("bwb_cohomology", || {
        let space = Space::parse(space)?;
        let w = BlockedWeight::parse(weight)?;
        if w.space != space {
            return Err(PipelineError::Input(format!("weight {w} has the block shape of {:?}, not {space:?}", w.space)));
        }
        let t = bott(&w)?;
        let detail = json!({ "space": space, "weight": w.to_string(), "rank": w.rank(), "table": t, "rendered": t.to_string() });
        Ok(Stage::new("bwb_cohomology", true, detail))
    })
}

fn replay_pass(r: &ReplayReport) -> bool {
    r.matches_expected
        && r.phi_inverse_is_identity
        && r.inverse_replay_returns_start
        && r.start_exceptional
        && r.final_exceptional
        && r.checkpoints.iter().all(|c| c.matches)
}

/// The shipped mutation script; every move is certified or the replay stops.
pub fn mutation_stage() -> Stage {
    guard("mutation_replay", || match replay_proof() {
        Ok(r) => {
            let detail = json!({
                "moves": r.moves,
                "start": r.start,
                "final_collection": r.final_collection,
                "expected_final": r.expected_final,
                "checkpoints": r.checkpoints,
                "phi": r.phi,
                "matches_expected": r.matches_expected,
                "phi_inverse_is_identity": r.phi_inverse_is_identity,
                "inverse_replay_returns_start": r.inverse_replay_returns_start,
                "start_exceptional": r.start_exceptional,
                "final_exceptional": r.final_exceptional,
            });
            Ok(Stage::new("mutation_replay", replay_pass(&r), detail))
        }
        Err(e) => Ok(Stage::error("mutation_replay", e.to_string())),
    })
}

/// The certified step log of the replay, as written by `mutations replay --log`.
pub fn replay_log_json() -> Result<String, PipelineError> {
    let r = replay_proof().map_err(|e| PipelineError::Input(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&r.log).expect("log serializes");
    s.push('\n');
    Ok(s)
}

pub fn check_collection_stage(name: &str) -> Stage {
    guard("check_collection", || match check_collection(name) {
        Some(c) => Ok(Stage::new("check_collection", c.pass, to_value(&c))),
        None => Err(PipelineError::Input(format!("unknown collection {name:?}: expected kuznetsov25 or kuznetsov35"))),
    })
}

/// Field of the GLSM sweeps: the run field when finite, GF(13) otherwise.
fn glsm_field(cfg: &RunConfig) -> FieldSpec {
    if cfg.field.is_finite() {
        cfg.field
    } else {
        FieldSpec::Prime(13)
    }
}

fn bijections(s: &Mat<Q>, cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<(bool, Vec<Value>), PipelineError> {
    fn one<F: FiniteField>(s: &Mat<Q>, budget: CountBudget, rng: &mut ChaCha8Rng) -> Result<(bool, Value), PipelineError> {
        match reduce_section::<F>(s) {
            Ok(sf) => {
                let r = bijection_count(&Superpotential::new(&sf), budget, 20, rng)?;
                Ok((r.pass, to_value(&r)))
            }
            Err(e) => Ok((true, json!({ "field": F::field_name(), "skipped": e.to_string() }))),
        }
    }
    let mut pass = true;
    let mut out = Vec::new();
    for q in [2u64, 3, 4, 5].into_iter().filter(|&q| q <= cfg.max_q) {
        let (ok, v) = with_field!(FieldSpec::of_order(q)?, F => one::<F>(s, cfg.count_budget(), rng), rationals => unreachable!())?;
        pass &= ok;
        out.push(v);
    }
    Ok((pass, out))
}

/// The Okonek rank check needs Y smooth at the sampled points, which holds for a general
/// section but fails for degenerate ones. It is decided on a random section of 𝓗_F; the
/// ranks on the input section are reported alongside.
fn okonek_pair<F: Field>(w: &Superpotential<F>, rng: &mut ChaCha8Rng) -> (OkonekReport, OkonekReport) {
    let general = Superpotential::new(&random_hf_section::<F, _>(rng));
    (okonek_check(&general, 50, rng), okonek_check(w, 50, rng))
}

fn glsm_detail<F: Field>(s: &Mat<Q>, cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<(bool, Value), PipelineError> {
    let sf = reduce_section::<F>(s)?;
    let w = Superpotential::new(&sf);
    let minus = minus_chamber_sweep(&w, cfg.samples_or(1000), rng);
    let certs = certificate_sweep::<F, _>(500, rng)?;
    let (okonek, okonek_input) = okonek_pair(&w, rng);
    let (bij_ok, bij) = bijections(s, cfg, rng)?;
    let pass = minus.pass && certs.pass && okonek.pass && bij_ok;
    let detail = json!({
        "minus_sweep": minus,
        "certificates": certs,
        "okonek": okonek,
        "okonek_input": okonek_input,
        "bijections": bij,
    });
    Ok((pass, detail))
}

/// Minus-chamber sweep, bijection counts for q ≤ 5, instability certificates and the
/// Okonek rank check.
pub fn glsm_stage(cfg: &RunConfig, s: &Mat<Q>) -> Stage {
    guard("glsm", || {
        let mut rng = cfg.rng(7);
        let (pass, detail) =
            with_field!(glsm_field(cfg), F => glsm_detail::<F>(s, cfg, &mut rng), rationals => unreachable!())?;
        Ok(Stage::new("glsm", pass, detail))
    })
}

fn stability_detail<F: Field>(
    s: &Mat<Q>,
    chamber: Chamber,
    point: Option<&Mat<Q>>,
    cfg: &RunConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(bool, Value), PipelineError> {
    let sf = reduce_section::<F>(s)?;
    let w = Superpotential::new(&sf);
    let samples = cfg.samples_or(1000);
    let mut detail = json!({ "field": F::field_name(), "chamber": chamber });
    let mut pass;
    match chamber {
        Chamber::Minus => {
            let minus = minus_chamber_sweep(&w, samples, rng);
            let (bij_ok, bij) = bijections(s, cfg, rng)?;
            pass = minus.pass && bij_ok;
            detail["minus_sweep"] = to_value(&minus);
            detail["bijections"] = Value::Array(bij);
        }
        Chamber::Plus => {
            let plus = plus_chamber_sweep(&w, samples, rng);
            let (okonek, okonek_input) = okonek_pair(&w, rng);
            pass = plus.pass && okonek.pass;
            detail["plus_sweep"] = to_value(&plus);
            detail["okonek"] = to_value(&okonek);
            detail["okonek_input"] = to_value(&okonek_input);
        }
    }
    let certs = certificate_sweep::<F, _>(samples / 2, rng)?;
    pass &= certs.pass;
    detail["certificates"] = to_value(&certs);
    if let Some(p) = point {
        let (ok, v) = point_detail(&w, &reduce_matrix::<F>(p)?, chamber)?;
        pass &= ok;
        detail["point"] = v;
    }
    Ok((pass, detail))
}

/// A single point given as six rows of three entries: B, then ω.
fn point_detail<F: Field>(w: &Superpotential<F>, m: &Mat<F>, chamber: Chamber) -> Result<(bool, Value), PipelineError> {
    if m.rows() != 6 || m.cols() != 3 {
        return Err(PipelineError::Input(format!("point must be 5 rows of B and a row for ω, 3 columns; got {}x{}", m.rows(), m.cols())));
    }
    let b = Mat::from_fn(5, 3, |i, j| m[(i, j)].clone());
    let omega = m.row(5).to_vec();
    let pt = GlsmPoint::new(b, omega)?;
    let stable = semistable(&pt, chamber);
    let mut v = json!({ "semistable": stable, "rank_b": pt.rank_b(), "critical_equations": is_critical_point(&pt, w) });
    if !stable {
        let cert = instability_certificate(&pt, chamber)?;
        let check = verify_certificate(&pt, &cert)?;
        v["certificate"] = json!({
            "weights": cert.weights,
            "conjugator": cert.conjugator.as_ref().map(rows_as_strings),
            "check": check,
        });
        return Ok((check.valid, v));
    }
    let member = critical_member(&pt, w, chamber)?;
    v["critical_member"] = json!(member);
    if chamber == Chamber::Minus && pt.rank_b() == 2 {
        let (nf, g) = normal_form(&pt)?;
        v["normal_form"] = json!({ "b": rows_as_strings(&nf.b), "omega": nf.omega.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "gauge": rows_as_strings(&g) });
        v["reduced_point"] = json!(rows_as_strings(&gauge_reduce(&pt)?.rep));
    }
    Ok((member == is_critical_point(&pt, w), v))
}

/// `glsm stability`: sweeps in one chamber, optionally with one explicit point.
pub fn glsm_stability_stage(cfg: &RunConfig, s: &Mat<Q>, chamber: Chamber, point: Option<&Mat<Q>>) -> Stage {
    guard("glsm_stability", || {
        let mut rng = cfg.rng(7);
        let (pass, detail) = with_field!(glsm_field(cfg), F => stability_detail::<F>(s, chamber, point, cfg, &mut rng), rationals => unreachable!())?;
        Ok(Stage::new("glsm_stability", pass, detail))
    })
}

/// The six identity families on the run field.
pub fn properties_stage(cfg: &RunConfig) -> Stage {
    guard("property_suites", || {
        let n = 100;
        let mut rng = cfg.rng(8);
        let results = with_field!(cfg.field, F => Ok(properties::run_all::<F, _>(&mut rng, n)))?;
        let pass = results.iter().all(|r| r.pass);
        Ok(Stage::new("property_suites", pass, to_value(&results)))
    })
}

/// Every stage, in order; later stages run whatever happened before.
pub fn verify_paper(cfg: &RunConfig, s: &Mat<Q>) -> Report {
    let stages = vec![
        hf_stage(cfg),
        duality_build_stage(cfg, s),
        selfdual_stage(cfg, s),
        nonbirational_stage(cfg, s),
        point_counts_stage(cfg, s),
        l_relation_stage(),
        degree_stage(),
        bwb_stage(cfg),
        mutation_stage(),
        glsm_stage(cfg, s),
        properties_stage(cfg),
    ];
    Report::new("verify-paper", cfg, Some(s), stages)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_specs_parse() {
        assert_eq!(FieldSpec::parse("17").unwrap(), FieldSpec::Prime(17));
        assert_eq!(FieldSpec::parse("GF(13)").unwrap(), FieldSpec::Prime(13));
        assert_eq!(FieldSpec::parse("QQ").unwrap(), FieldSpec::Rationals);
        assert_eq!(FieldSpec::parse("GF(4)").unwrap(), FieldSpec::Gf4);
        assert!(FieldSpec::parse("15").is_err());
        assert!(FieldSpec::parse("37").is_err());
        assert_eq!(FieldSpec::Prime(11).to_string(), "GF(11)");
    }

    #[test]
    fn random_integral_sections_lie_in_hf() {
        let s = random_integral_hf_section(&mut ChaCha8Rng::seed_from_u64(3));
        assert!(s.entries().iter().all(|x| x.is_integer()));
        assert!(hf_space::<Q>().contains(&s));
        assert!(reduce_section::<Fp<2>>(&s).is_ok());
    }

    #[test]
    fn stage_errors_and_panics_become_failed_stages() {
        let st = guard("x", || Err(PipelineError::Input("bad".into())));
        assert_eq!((st.status.as_str(), st.pass), ("error", false));
        let st = guard("y", || panic!("boom"));
        assert!(st.detail["error"].as_str().unwrap().contains("boom"));
    }

    #[test]
    fn unknown_prime_is_an_error_not_a_panic() {
        let cfg = RunConfig { field: FieldSpec::Prime(37), ..RunConfig::default() };
        let st = properties_stage(&cfg);
        assert_eq!(st.status, "error");
    }

    #[test]
    fn symmetric_section_is_reported_self_dual() {
        let cfg = RunConfig::default();
        let mut rng = cfg.rng(9);
        // symmetrize a random element of 𝓗_F; the complement is stable under transpose
        let s = random_integral_hf_section(&mut rng);
        let sym = Mat::from_fn(10, 10, |i, j| &s[(i, j)] + &s[(j, i)]);
        assert!(hf_space::<Q>().contains(&sym));
        let st = selfdual_stage(&cfg, &sym);
        assert_eq!(st.status, "self-dual");
        let st = nonbirational_stage(&cfg, &sym);
        assert_eq!(st.status, "counterexample");
        assert!(!st.pass);
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = RunConfig { seed: 11, ..RunConfig::default() };
        let s = witness_section::<Q>();
        let a = Report::new("t", &cfg, Some(&s), vec![selfdual_stage(&cfg, &s), bwb_stage(&cfg)]).to_json();
        let b = Report::new("t", &cfg, Some(&s), vec![selfdual_stage(&cfg, &s), bwb_stage(&cfg)]).to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"schema\": \"flagdual-report/1\""));
    }
}
