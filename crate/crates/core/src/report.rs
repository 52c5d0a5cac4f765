//! Index reports for `CL_r(G)` along three independent routes.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::blowup::{blowup_counts, blowup_iterate, degree_profile, BlowupParams, DEFAULT_MAX_VERTICES};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::indexes::{
    big_ln, kemeny_blowup_closed, kemeny_spectral, kf_star_blowup_closed, kf_star_direct, kf_star_exact,
    kf_star_spectral, log_tau_cholesky, log_tau_from_degrees, log_tau_spectral, tau_blowup_closed, tau_exact,
    DEFAULT_EXACT_CAP,
};
use crate::json;
use crate::spectral::{laplacian_spectrum, spectrum_iterated, SpectrumMultiset, DEFAULT_CLUSTER_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Spectral,
    ClosedForm,
    Oracle,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::Spectral, Route::ClosedForm, Route::Oracle];

    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Spectral => "spectral",
            Route::ClosedForm => "closed_form",
            Route::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Route::Spectral),
            "closed_form" | "closed-form" | "closed" => Ok(Route::ClosedForm),
            "oracle" => Ok(Route::Oracle),
            other => Err(Error::invalid(format!("unknown route {other:?}"))),
        }
    }
}

/// Where the spectrum of `CL_r(G)` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumSource {
    /// The blowup spectrum map applied to the numerical spectrum of `G`.
    Theorem,
    /// Direct eigendecomposition of the explicit `CL_r(G)`.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexOptions {
    pub cluster_tol: f64,
    pub max_vertices: usize,
    pub exact_cap: usize,
}

impl Default for IndexOptions {
    fn default() -> Self {
        IndexOptions {
            cluster_tol: DEFAULT_CLUSTER_TOL,
            max_vertices: DEFAULT_MAX_VERTICES,
            exact_cap: DEFAULT_EXACT_CAP,
        }
    }
}

/// `Kf*`, Kemeny's constant and the spanning-tree count of one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    #[serde(serialize_with = "json::f64_sig17")]
    pub kf_star: f64,
    #[serde(serialize_with = "json::f64_sig17")]
    pub kemeny: f64,
    #[serde(serialize_with = "finite_or_null")]
    pub tau_float: f64,
    #[serde(serialize_with = "json::f64_sig17")]
    pub log_tau: f64,
    #[serde(serialize_with = "json::opt_bigint_as_string")]
    pub tau_exact: Option<BigInt>,
    #[serde(serialize_with = "json::opt_rational_as_string")]
    pub kf_star_exact: Option<BigRational>,
    #[serde(serialize_with = "json::opt_rational_as_string")]
    pub kemeny_exact: Option<BigRational>,
    pub route: Route,
    #[serde(flatten)]
    pub params: Option<BlowupParams>,
}

fn finite_or_null<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        json::f64_sig17(x, s)
    } else {
        s.serialize_none()
    }
}

impl IndexReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn rational_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Indexes from a spectrum of `CL_r(G)`.
pub fn indexes_spectral(g: &Graph, p: &BlowupParams, source: SpectrumSource, opts: &IndexOptions) -> Result<IndexReport> {
    g.require_connected()?;
    let counts = blowup_counts(&BigInt::from(g.vertex_count()), &BigInt::from(g.edge_count()), p)?;
    let (sigma, log_tau) = match source {
        SpectrumSource::Numeric => {
            let h = blowup_iterate(g, p, opts.max_vertices)?;
            let sigma = laplacian_spectrum(&h, opts.cluster_tol)?;
            let log_tau = log_tau_spectral(&h, &sigma)?;
            (sigma, log_tau)
        }
        SpectrumSource::Theorem => {
            let base = laplacian_spectrum(g, opts.cluster_tol)?;
            let sigma = spectrum_iterated(
                &base,
                g.vertex_count(),
                g.edge_count(),
                p,
                g.is_bipartite()?,
                opts.max_vertices,
            )?;
            let profile = degree_profile(g, p)?;
            let m = counts.edges.to_f64().expect("edge count fits a double");
            let log_tau = log_tau_from_degrees(profile.iter().map(|(&d, &c)| (d as f64, c as f64)), m, &sigma)?;
            (sigma, log_tau)
        }
    };
    Ok(IndexReport {
        kf_star: kf_star_spectral(&sigma, &counts.edges)?,
        kemeny: kemeny_spectral(&sigma)?,
        tau_float: log_tau.exp(),
        log_tau,
        tau_exact: None,
        kf_star_exact: None,
        kemeny_exact: None,
        route: Route::Spectral,
        params: Some(*p),
    })
}

/// Exact indexes of `G` from the exact oracles, pushed through the blowup recurrences.
pub fn indexes_closed_form(g: &Graph, p: &BlowupParams, opts: &IndexOptions) -> Result<IndexReport> {
    g.require_connected()?;
    if g.edge_count() == 0 {
        return Err(Error::invalid("indexes need at least one edge"));
    }
    let n0 = BigInt::from(g.vertex_count());
    let e0 = BigInt::from(g.edge_count());
    let kf0 = kf_star_exact(g, opts.exact_cap)?;
    let ke0 = &kf0 / BigRational::from_integer(BigInt::from(2) * &e0);
    let tau0 = tau_exact(g, opts.exact_cap)?;
    let kf = kf_star_blowup_closed(&kf0, &n0, &e0, p)?;
    let ke = kemeny_blowup_closed(&ke0, &n0, &e0, p)?;
    let tau = tau_blowup_closed(&tau0, &n0, &e0, p)?;
    let log_tau = big_ln(&tau);
    Ok(IndexReport {
        kf_star: rational_f64(&kf),
        kemeny: rational_f64(&ke),
        tau_float: tau.to_f64().unwrap_or(f64::INFINITY),
        log_tau,
        tau_exact: Some(tau),
        kf_star_exact: Some(kf),
        kemeny_exact: Some(ke),
        route: Route::ClosedForm,
        params: Some(*p),
    })
}

/// Indexes of the explicitly built `CL_r(G)` from resistance distances and
/// Laplacian determinants; no spectra involved.
pub fn indexes_oracle(g: &Graph, p: &BlowupParams, opts: &IndexOptions) -> Result<IndexReport> {
    let h = blowup_iterate(g, p, opts.max_vertices)?;
    if h.edge_count() == 0 {
        return Err(Error::invalid("indexes need at least one edge"));
    }
    let kf = kf_star_direct(&h)?;
    let tau_x = if h.vertex_count() <= opts.exact_cap {
        Some(tau_exact(&h, opts.exact_cap)?)
    } else {
        None
    };
    let (tau_float, log_tau) = match &tau_x {
        Some(t) => (t.to_f64().unwrap_or(f64::INFINITY), big_ln(t)),
        None => {
            let l = log_tau_cholesky(&h)?;
            (l.exp(), l)
        }
    };
    Ok(IndexReport {
        kf_star: kf,
        kemeny: kf / (2.0 * h.edge_count() as f64),
        tau_float,
        log_tau,
        tau_exact: tau_x,
        kf_star_exact: None,
        kemeny_exact: None,
        route: Route::Oracle,
        params: Some(*p),
    })
}

pub fn indexes_by_route(g: &Graph, p: &BlowupParams, route: Route, source: SpectrumSource, opts: &IndexOptions) -> Result<IndexReport> {
    match route {
        Route::Spectral => indexes_spectral(g, p, source, opts),
        Route::ClosedForm => indexes_closed_form(g, p, opts),
        Route::Oracle => indexes_oracle(g, p, opts),
    }
}

/// Spectrum of `CL_r(G)` from the requested source.
pub fn blowup_spectrum(g: &Graph, p: &BlowupParams, source: SpectrumSource, opts: &IndexOptions) -> Result<SpectrumMultiset> {
    match source {
        SpectrumSource::Numeric => laplacian_spectrum(&blowup_iterate(g, p, opts.max_vertices)?, opts.cluster_tol),
        SpectrumSource::Theorem => {
            g.require_connected()?;
            let base = laplacian_spectrum(g, opts.cluster_tol)?;
            spectrum_iterated(&base, g.vertex_count(), g.edge_count(), p, g.is_bipartite()?, opts.max_vertices)
        }
    }
}
