//! Grid verification harness: every invariant and cross-route equivalence,
//! evaluated for each (graph, n, r) cell of a corpus.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::blowup::{blowup_counts, blowup_iterate, BlowupParams, DEFAULT_MAX_VERTICES};
use crate::error::{Error, Result};
use crate::graph::{Family, Graph, GraphSpec};
use crate::indexes::{
    kemeny_blowup_closed, kemeny_spectral, kf_star_blowup_closed, kf_star_direct, kf_star_exact, kf_star_spectral,
    tau_blowup_closed, tau_exact, tau_spectral, DEFAULT_EXACT_CAP,
};
use crate::spectral::{laplacian_spectrum, multiset_match, spectrum_iterated, SpectrumMultiset, DEFAULT_CLUSTER_TOL, DEFAULT_MATCH_TOL};

/// Relative tolerances for the oracle comparisons.
pub const KF_ORACLE_TOL: f64 = 1e-7;
pub const TAU_ORACLE_TOL: f64 = 1e-6;
pub const KF_KEMENY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-6;
pub const RANGE_SLACK: f64 = 1e-9;
/// Non-bipartite graphs must keep `λ_max` at least this far below 2.
pub const NON_BIPARTITE_GAP: f64 = 1e-6;
/// Graphs up to this order get the resistance/determinant oracles.
pub const DEFAULT_ORACLE_CAP: usize = 200;

pub fn default_corpus() -> Vec<GraphSpec> {
    use Family::*;
    vec![
        GraphSpec::Family(Complete, 2),
        GraphSpec::Family(Path, 3),
        GraphSpec::Family(Path, 4),
        GraphSpec::Family(Cycle, 4),
        GraphSpec::Family(Cycle, 5),
        GraphSpec::Family(Complete, 3),
        GraphSpec::Family(Complete, 4),
        GraphSpec::Family(Star, 5),
        GraphSpec::Petersen,
    ]
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub corpus: Vec<GraphSpec>,
    pub ns: Vec<usize>,
    pub rs: Vec<usize>,
    pub match_tol: f64,
    pub cluster_tol: f64,
    pub max_vertices: usize,
    pub oracle_cap: usize,
    pub exact_cap: usize,
    pub jobs: usize,
    /// Perturbs the closed-form `Kf*` so the harness can be shown to fail.
    pub corrupt_closed_form: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            corpus: default_corpus(),
            ns: vec![3, 4, 5],
            rs: vec![1, 2],
            match_tol: DEFAULT_MATCH_TOL,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            max_vertices: DEFAULT_MAX_VERTICES,
            oracle_cap: DEFAULT_ORACLE_CAP,
            exact_cap: DEFAULT_EXACT_CAP,
            jobs: 1,
            corrupt_closed_form: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub graph: String,
    pub n: usize,
    pub r: usize,
    pub skipped: Option<String>,
    pub checks: Vec<Check>,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub cases: Vec<CaseResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(CaseResult::passed)
    }

    pub fn first_failure(&self) -> Option<(&CaseResult, &Check)> {
        self.cases
            .iter()
            .find_map(|c| c.checks.iter().find(|k| !k.passed).map(|k| (c, k)))
    }

    /// One line per case: `PASS`/`FAIL`/`SKIP` plus the failing check names.
    pub fn matrix(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            let status = if c.skipped.is_some() {
                "SKIP"
            } else if c.passed() {
                "PASS"
            } else {
                "FAIL"
            };
            let _ = write!(out, "{status}  {:<12} n={} r={}  {} checks", c.graph, c.n, c.r, c.checks.len());
            if let Some(why) = &c.skipped {
                let _ = write!(out, "  ({why})");
            }
            let failed: Vec<&str> = c.checks.iter().filter(|k| !k.passed).map(|k| k.name).collect();
            if !failed.is_empty() {
                let _ = write!(out, "  failed: {}", failed.join(", "));
            }
            out.push('\n');
        }
        out
    }
}

fn rel_dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name,
            passed,
            detail: detail.into(),
        });
    }

    fn push_result(&mut self, name: &'static str, r: Result<(bool, String)>) {
        match r {
            Ok((ok, detail)) => self.push(name, ok, detail),
            Err(e) => self.push(name, false, format!("error: {e}")),
        }
    }
}

/// Structural checks on one numerically computed normalized Laplacian spectrum.
pub fn spectral_structure(g: &Graph, sigma: &SpectrumMultiset, match_tol: f64) -> Result<Vec<Check>> {
    let mut checks = Checks(Vec::new());
    let n = g.vertex_count() as f64;
    let trace_dev = rel_dev(sigma.sum(), n);
    checks.push("trace", trace_dev <= TRACE_TOL, format!("sum = {}, N = {n}", sigma.sum()));

    let (lo, hi) = (sigma.min().unwrap_or(0.0), sigma.max().unwrap_or(0.0));
    checks.push(
        "range",
        lo >= -RANGE_SLACK && hi <= 2.0 + RANGE_SLACK,
        format!("min = {lo:e}, max = {hi}"),
    );

    let bip = g.bipartition()?.is_bipartite;
    if bip {
        let m = multiset_match(&sigma.reflected(), sigma, match_tol);
        checks.push("bipartite_symmetry", m.matched, m.describe());
        checks.push("lambda_max", (hi - 2.0).abs() <= match_tol * 2.0, format!("bipartite, max = {hi}"));
    } else {
        checks.push("lambda_max", hi < 2.0 - NON_BIPARTITE_GAP, format!("non-bipartite, max = {hi}"));
    }
    Ok(checks.0)
}

/// Incidence rank must be `N - 1` for bipartite and `N` for non-bipartite graphs.
pub fn incidence_rank_check(g: &Graph) -> Result<Check> {
    let rank = g.incidence_rank()?;
    let expect = g.vertex_count() - usize::from(g.is_bipartite()?);
    Ok(Check {
        name: "incidence_rank",
        passed: rank == expect,
        detail: format!("rank {rank}, expected {expect}"),
    })
}

/// All checks for one `(G, n, r)` cell.
pub fn verify_case(spec: &GraphSpec, p: &BlowupParams, cfg: &VerifyConfig) -> CaseResult {
    let mut case = CaseResult {
        graph: spec.to_string(),
        n: p.n,
        r: p.r,
        skipped: None,
        checks: Vec::new(),
    };
    let mut checks = Checks(Vec::new());
    match run_case(spec, p, cfg, &mut checks) {
        Ok(()) => {}
        Err(Error::SizeCapExceeded { what, requested, cap }) if checks.0.is_empty() => {
            case.skipped = Some(format!("{what} {requested} > {cap}"));
        }
        Err(e) => checks.push("setup", false, format!("error: {e}")),
    }
    case.checks = checks.0;
    case
}

fn run_case(spec: &GraphSpec, p: &BlowupParams, cfg: &VerifyConfig, checks: &mut Checks) -> Result<()> {
    let g = spec.build()?;
    g.require_connected()?;
    let n0 = BigInt::from(g.vertex_count());
    let e0 = BigInt::from(g.edge_count());
    let counts = blowup_counts(&n0, &e0, p)?;
    let h = blowup_iterate(&g, p, cfg.max_vertices)?;

    checks.push(
        "counts",
        BigInt::from(h.vertex_count()) == counts.vertices && BigInt::from(h.edge_count()) == counts.edges,
        format!("built ({}, {}), closed ({}, {})", h.vertex_count(), h.edge_count(), counts.vertices, counts.edges),
    );

    let base = laplacian_spectrum(&g, cfg.cluster_tol)?;
    let numeric = laplacian_spectrum(&h, cfg.cluster_tol)?;
    let bip = g.is_bipartite()?;
    checks.push_result(
        "theorem_vs_numeric",
        spectrum_iterated(&base, g.vertex_count(), g.edge_count(), p, bip, cfg.max_vertices)
            .map(|t| {
                let m = multiset_match(&t, &numeric, cfg.match_tol);
                (m.matched, m.describe())
            }),
    );

    for c in spectral_structure(&g, &base, cfg.match_tol)? {
        checks.0.push(Check { name: prefixed_base(c.name), ..c });
    }
    checks.0.extend(spectral_structure(&h, &numeric, cfg.match_tol)?);
    if g.vertex_count() <= cfg.exact_cap {
        let c = incidence_rank_check(&g)?;
        checks.0.push(Check { name: "base_incidence_rank", ..c });
    }
    if h.vertex_count() <= cfg.exact_cap {
        checks.0.push(incidence_rank_check(&h)?);
    }

    // Spectral formulas against the oracles on the explicit blowup.
    let m = BigInt::from(h.edge_count());
    let kf_spec = kf_star_spectral(&numeric, &m)?;
    let ke_spec = kemeny_spectral(&numeric)?;
    let kf_ke = rel_dev(kf_spec, 2.0 * h.edge_count() as f64 * ke_spec);
    checks.push("kf_eq_2m_kemeny", kf_ke <= KF_KEMENY_TOL, format!("rel dev {kf_ke:e}"));

    let kf_direct = if h.vertex_count() <= cfg.oracle_cap {
        let kd = kf_star_direct(&h)?;
        let d = rel_dev(kf_spec, kd);
        checks.push("kf_spectral_vs_direct", d <= KF_ORACLE_TOL, format!("{kf_spec} vs {kd}, rel dev {d:e}"));
        Some(kd)
    } else {
        None
    };
    let tau_h = if h.vertex_count() <= cfg.exact_cap.min(cfg.oracle_cap) {
        let t = tau_exact(&h, cfg.exact_cap)?;
        let ts = tau_spectral(&h, &numeric)?;
        let d = rel_dev(ts, t.to_f64().unwrap_or(f64::INFINITY));
        checks.push("tau_spectral_vs_exact", d <= TAU_ORACLE_TOL, format!("{ts:e} vs {t}, rel dev {d:e}"));
        Some(t)
    } else {
        None
    };

    // Exact recurrences from exact base indexes. Each call also checks its
    // r-level closed expression.
    if g.vertex_count() <= cfg.exact_cap {
        let kf0 = kf_star_exact(&g, cfg.exact_cap)?;
        let ke0 = &kf0 / BigRational::from_integer(BigInt::from(2) * &e0);
        let tau0 = tau_exact(&g, cfg.exact_cap)?;
        let kf_closed = kf_star_blowup_closed(&kf0, &n0, &e0, p);
        let ke_closed = kemeny_blowup_closed(&ke0, &n0, &e0, p);
        let tau_closed = tau_blowup_closed(&tau0, &n0, &e0, p);
        let identities = [&kf_closed.as_ref().err(), &ke_closed.as_ref().err(), &tau_closed.as_ref().err()];
        let failed: Vec<String> = identities.iter().filter_map(|e| e.map(ToString::to_string)).collect();
        checks.push("r_level_identities", failed.is_empty(), failed.join("; "));

        if let (Ok(kf), Ok(ke)) = (&kf_closed, &ke_closed) {
            let mut kf = kf.clone();
            if cfg.corrupt_closed_form {
                kf += BigRational::from_integer(1.into());
            }
            let twice_e = BigRational::from_integer(BigInt::from(2) * &counts.edges);
            checks.push("kemeny_closed_vs_kf_closed", &kf / twice_e == *ke, format!("Kf* = {kf}, Ke = {ke}"));
            if let Some(kd) = kf_direct {
                let kf_f = kf.to_f64().unwrap_or(f64::NAN);
                let d = rel_dev(kf_f, kd);
                checks.push("kf_closed_vs_direct", d <= KF_ORACLE_TOL, format!("{kf} vs {kd}, rel dev {d:e}"));
            }
        }
        if let (Ok(tc), Some(t)) = (&tau_closed, &tau_h) {
            checks.push("tau_closed_vs_exact", tc == t, format!("{tc} vs {t}"));
        }
    }
    Ok(())
}

fn prefixed_base(name: &'static str) -> &'static str {
    match name {
        "trace" => "base_trace",
        "range" => "base_range",
        "bipartite_symmetry" => "base_bipartite_symmetry",
        "lambda_max" => "base_lambda_max",
        other => other,
    }
}

/// Runs the whole grid. Results are in corpus-major order regardless of `jobs`.
pub fn verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.corpus.is_empty() {
        return Err(Error::invalid("verification corpus is empty"));
    }
    if cfg.ns.is_empty() || cfg.rs.is_empty() {
        return Err(Error::invalid("n-list and r-list must be non-empty"));
    }
    if cfg.match_tol.is_nan() || cfg.match_tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let mut grid = Vec::new();
    for spec in &cfg.corpus {
        for &n in &cfg.ns {
            for &r in &cfg.rs {
                grid.push((*spec, BlowupParams::new(n, r)?));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let cases = pool.install(|| grid.par_iter().map(|(s, p)| verify_case(s, p, cfg)).collect());
    Ok(VerifyReport { cases })
}
