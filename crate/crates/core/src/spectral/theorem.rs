//! Spectrum of `CL(G)` from the spectrum of `G`.
//!
//! One blowup step with clique size `n` maps the spectrum as follows:
//! `0` stays with multiplicity one; every `λ ∉ {0, 2}` becomes `λ/(n-1)` with
//! the same multiplicity; `2/(n-1)` appears `E - N` times (`E - N + 1` when
//! `G` is bipartite); `n/(n-1)` appears `(n-3)E + N` times.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::SpectrumMultiset;
use crate::blowup::{counts_by_level, BlowupParams};
use crate::error::{Error, Result};

/// An eigenvalue that is either known exactly or only numerically.
#[derive(Debug, Clone, PartialEq)]
pub enum Eigenvalue {
    Exact(BigRational),
    Approx(f64),
}

impl Eigenvalue {
    fn ratio(num: usize, den: usize) -> Self {
        Eigenvalue::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Eigenvalue::Exact(q) => q.to_f64().expect("rational eigenvalue fits a double"),
            Eigenvalue::Approx(x) => *x,
        }
    }

    fn is_near(&self, target: i64, tol: f64) -> bool {
        match self {
            Eigenvalue::Exact(q) => *q == BigRational::from_integer(BigInt::from(target)),
            Eigenvalue::Approx(x) => (x - target as f64).abs() <= tol,
        }
    }

    fn shrink(&self, factor: usize) -> Self {
        match self {
            Eigenvalue::Exact(q) => Eigenvalue::Exact(q / BigInt::from(factor)),
            Eigenvalue::Approx(x) => Eigenvalue::Approx(x / factor as f64),
        }
    }
}

/// Spectrum as `(value, multiplicity)` pairs with arbitrary-size multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicSpectrum {
    pub entries: Vec<(Eigenvalue, BigInt)>,
}

impl SymbolicSpectrum {
    pub fn from_multiset(s: &SpectrumMultiset) -> Self {
        SymbolicSpectrum {
            entries: s
                .values()
                .iter()
                .map(|&v| (Eigenvalue::Approx(v), BigInt::one()))
                .collect(),
        }
    }

    pub fn total_multiplicity(&self) -> BigInt {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    /// Flattens into a numeric multiset, refusing to expand past `max_order` values.
    pub fn to_multiset(&self, cluster_tol: f64, max_order: usize) -> Result<SpectrumMultiset> {
        let total = self.total_multiplicity();
        if total > BigInt::from(max_order) {
            return Err(Error::SizeCapExceeded {
                what: "spectrum order",
                requested: total.to_string(),
                cap: max_order,
            });
        }
        let mut values = Vec::with_capacity(total.to_usize().unwrap_or(0));
        for (v, m) in &self.entries {
            let m = m.to_usize().expect("bounded by max_order");
            values.extend(std::iter::repeat_n(v.to_f64(), m));
        }
        Ok(SpectrumMultiset::from_values(values, cluster_tol))
    }

    /// The exact spectrum, if every value is known exactly.
    pub fn to_exact(&self) -> Option<ExactSpectrum> {
        let mut pairs = Vec::with_capacity(self.entries.len());
        for (v, m) in &self.entries {
            match v {
                Eigenvalue::Exact(q) => pairs.push((q.clone(), m.clone())),
                Eigenvalue::Approx(_) => return None,
            }
        }
        Some(ExactSpectrum::from_pairs(pairs))
    }
}

/// Spectrum with rational values, sorted ascending and merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSpectrum {
    entries: Vec<(BigRational, BigInt)>,
}

impl ExactSpectrum {
    pub fn from_pairs(mut pairs: Vec<(BigRational, BigInt)>) -> Self {
        pairs.retain(|(_, m)| m.is_positive());
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut entries: Vec<(BigRational, BigInt)> = Vec::with_capacity(pairs.len());
        for (v, m) in pairs {
            match entries.last_mut() {
                Some(last) if last.0 == v => last.1 += m,
                _ => entries.push((v, m)),
            }
        }
        ExactSpectrum { entries }
    }

    /// Normalized Laplacian spectrum of `K_k`: `0` once and `k/(k-1)` with multiplicity `k-1`.
    pub fn complete(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid("complete graph needs k >= 2"));
        }
        Ok(Self::from_pairs(vec![
            (BigRational::zero(), BigInt::one()),
            (BigRational::new(BigInt::from(k), BigInt::from(k - 1)), BigInt::from(k - 1)),
        ]))
    }

    pub fn entries(&self) -> &[(BigRational, BigInt)] {
        &self.entries
    }

    pub fn order(&self) -> BigInt {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn to_symbolic(&self) -> SymbolicSpectrum {
        SymbolicSpectrum {
            entries: self
                .entries
                .iter()
                .map(|(v, m)| (Eigenvalue::Exact(v.clone()), m.clone()))
                .collect(),
        }
    }

    pub fn to_multiset(&self, cluster_tol: f64, max_order: usize) -> Result<SpectrumMultiset> {
        self.to_symbolic().to_multiset(cluster_tol, max_order)
    }
}

/// One level of the spectrum map.
fn theorem_step(
    sigma: &SymbolicSpectrum,
    n0: &BigInt,
    e0: &BigInt,
    n: usize,
    bipartite: bool,
    tol: f64,
) -> Result<SymbolicSpectrum> {
    if n < 3 {
        return Err(Error::invalid(format!("clique size n = {n} must be at least 3")));
    }
    let input_total = sigma.total_multiplicity();
    if &input_total != n0 {
        return Err(Error::inconsistent(format!(
            "spectrum has {input_total} eigenvalues but the graph has {n0} vertices"
        )));
    }

    let zero_mult: BigInt = sigma
        .entries
        .iter()
        .filter(|(v, _)| v.is_near(0, tol))
        .map(|(_, m)| m)
        .sum();
    if !zero_mult.is_one() {
        return Err(Error::inconsistent(format!(
            "eigenvalue 0 has multiplicity {zero_mult}, expected 1 for a connected graph"
        )));
    }

    let two_mult: BigInt = sigma
        .entries
        .iter()
        .filter(|(v, _)| v.is_near(2, tol))
        .map(|(_, m)| m)
        .sum();
    match (bipartite, two_mult.to_u64()) {
        (true, Some(1)) | (false, Some(0)) => {}
        (true, _) => {
            return Err(Error::inconsistent(format!(
                "bipartite graph must have eigenvalue 2 exactly once, found {two_mult} values near 2"
            )))
        }
        (false, _) => {
            return Err(Error::inconsistent(format!(
                "non-bipartite graph cannot have eigenvalue 2, found {two_mult} values near 2"
            )))
        }
    }

    let mut entries: Vec<(Eigenvalue, BigInt)> = Vec::with_capacity(sigma.entries.len() + 3);
    entries.push((Eigenvalue::Exact(BigRational::zero()), BigInt::one()));
    for (v, m) in &sigma.entries {
        if v.is_near(0, tol) || v.is_near(2, tol) {
            continue;
        }
        entries.push((v.shrink(n - 1), m.clone()));
    }

    let mut two_over = e0 - n0;
    if bipartite {
        two_over += 1;
    }
    if two_over.is_negative() {
        return Err(Error::inconsistent(format!(
            "multiplicity of 2/(n-1) would be {two_over}; E < N is impossible for a connected non-bipartite graph"
        )));
    }
    if two_over.is_positive() {
        entries.push((Eigenvalue::ratio(2, n - 1), two_over));
    }
    let n_over = BigInt::from(n - 3) * e0 + n0;
    entries.push((Eigenvalue::ratio(n, n - 1), n_over));

    let out = SymbolicSpectrum { entries };
    let expected = n0 + BigInt::from(n - 2) * e0;
    let total = out.total_multiplicity();
    if total != expected {
        return Err(Error::assertion(format!(
            "spectrum map produced {total} eigenvalues, expected N + (n-2)E = {expected}"
        )));
    }
    Ok(out)
}

/// Spectrum after `r` blowup levels, in symbolic form. Only the first level
/// can be bipartite; every blowup contains triangles.
pub fn symbolic_spectrum_iterated(
    sigma: &SymbolicSpectrum,
    n0: &BigInt,
    e0: &BigInt,
    p: &BlowupParams,
    bipartite: bool,
    tol: f64,
) -> Result<SymbolicSpectrum> {
    let levels = counts_by_level(n0, e0, p)?;
    let mut current = sigma.clone();
    for (k, level) in levels.iter().take(p.r).enumerate() {
        current = theorem_step(&current, &level.vertices, &level.edges, p.n, bipartite && k == 0, tol)?;
    }
    Ok(current)
}

/// Spectrum of `CL(G)` from a numerical spectrum of `G`.
pub fn spectrum_by_theorem(
    sigma: &SpectrumMultiset,
    n0: usize,
    e0: usize,
    n: usize,
    bipartite: bool,
) -> Result<SpectrumMultiset> {
    let out = theorem_step(
        &SymbolicSpectrum::from_multiset(sigma),
        &BigInt::from(n0),
        &BigInt::from(e0),
        n,
        bipartite,
        sigma.cluster_tol(),
    )?;
    out.to_multiset(sigma.cluster_tol(), usize::MAX)
}

/// Spectrum of `CL_r(G)` from a numerical spectrum of `G`. Values introduced by
/// the blowups are carried as exact rationals and rounded once at the end.
pub fn spectrum_iterated(
    sigma: &SpectrumMultiset,
    n0: usize,
    e0: usize,
    p: &BlowupParams,
    bipartite: bool,
    max_order: usize,
) -> Result<SpectrumMultiset> {
    let out = symbolic_spectrum_iterated(
        &SymbolicSpectrum::from_multiset(sigma),
        &BigInt::from(n0),
        &BigInt::from(e0),
        p,
        bipartite,
        sigma.cluster_tol(),
    )?;
    out.to_multiset(sigma.cluster_tol(), max_order)
}

/// Exact counterpart of [`spectrum_by_theorem`].
pub fn exact_spectrum_by_theorem(
    sigma: &ExactSpectrum,
    n0: &BigInt,
    e0: &BigInt,
    n: usize,
    bipartite: bool,
) -> Result<ExactSpectrum> {
    exact_spectrum_iterated(sigma, n0, e0, &BlowupParams::new(n, 1)?, bipartite)
}

/// Exact counterpart of [`spectrum_iterated`]; multiplicities are unbounded.
pub fn exact_spectrum_iterated(
    sigma: &ExactSpectrum,
    n0: &BigInt,
    e0: &BigInt,
    p: &BlowupParams,
    bipartite: bool,
) -> Result<ExactSpectrum> {
    let out = symbolic_spectrum_iterated(&sigma.to_symbolic(), n0, e0, p, bipartite, 0.0)?;
    Ok(out.to_exact().expect("exact input stays exact"))
}
