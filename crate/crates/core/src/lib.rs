//! Clique-blowup graphs `CL_r(G)`, where every edge of `G` is replaced by a
//! complete graph `K_n`, and the normalized Laplacian spectra and random-walk
//! indexes of these graphs.
//!
//! Each quantity is available along independent routes that check one
//! another:
//!
//! | quantity | closed form | numeric | oracle |
//! |----------|-------------|---------|--------|
//! | spectrum | [`spectrum_iterated`] | [`eig_sym`] on the built graph | |
//! | `Kf*` | [`kf_star_blowup_closed`] | [`kf_star_spectral`] | [`kf_star_direct`] (resistances) |
//! | Kemeny | [`kemeny_blowup_closed`] | [`kemeny_spectral`] | `Kf* / 2m` |
//! | spanning trees | [`tau_blowup_closed`] | [`tau_spectral`] | [`tau_exact`] (Bareiss) |

pub mod blowup;
pub mod error;
pub mod exact;
pub mod graph;
pub mod indexes;
pub mod json;
pub mod report;
pub mod spectral;
pub mod verify;

pub use blowup::{
    blowup_counts, blowup_iterate, clique_blowup, counts_by_level, degree_profile, BlowupCounts, BlowupParams,
    DEFAULT_MAX_VERTICES,
};
pub use error::{Error, Result};
pub use graph::{Bipartition, Family, Graph, GraphSpec, Side};
pub use indexes::{
    kemeny_blowup_closed, kemeny_r_level, kemeny_r_level_uncorrected, kemeny_spectral, kemeny_spectral_exact,
    kf_star_blowup_closed, kf_star_direct, kf_star_exact, kf_star_r_level, kf_star_spectral,
    kf_star_spectral_exact, resistance_matrix, tau_blowup_closed, tau_exact, tau_exponents_alpha,
    tau_exponents_stepped, tau_spectral, DEFAULT_EXACT_CAP,
};
pub use report::{IndexOptions, IndexReport, Route, SpectrumSource};
pub use spectral::{
    eig_sym, exact_spectrum_by_theorem, exact_spectrum_iterated, laplacian_spectrum, multiset_match,
    normalized_laplacian, spectrum_by_theorem, spectrum_iterated, DenseSymMatrix, ExactSpectrum, MatchReport,
    SpectrumMultiset, DEFAULT_CLUSTER_TOL, DEFAULT_MATCH_TOL,
};
pub use verify::{verify, VerifyConfig, VerifyReport};
