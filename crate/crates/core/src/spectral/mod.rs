//! Normalized Laplacian spectra: dense assembly, numerical eigensolve,
//! closed-form spectra of clique-blowups and multiset comparison.

mod theorem;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::json::raw_f64;

pub use theorem::{
    exact_spectrum_by_theorem, exact_spectrum_iterated, spectrum_by_theorem, spectrum_iterated,
    symbolic_spectrum_iterated, Eigenvalue, ExactSpectrum, SymbolicSpectrum,
};

/// Eigenvalues closer than this are reported as one value with multiplicity.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;
/// Relative elementwise tolerance used when comparing two spectra.
pub const DEFAULT_MATCH_TOL: f64 = 1e-7;
/// Absolute tolerance for the symmetry check in [`eig_sym`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl DenseSymMatrix {
    pub fn from_row_major(order: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::invalid(format!(
                "{} entries do not form a {order}x{order} matrix",
                entries.len()
            )));
        }
        Ok(DenseSymMatrix { order, entries })
    }

    pub fn identity(order: usize) -> Self {
        let mut entries = vec![0.0; order * order];
        for i in 0..order {
            entries[i * order + i] = 1.0;
        }
        DenseSymMatrix { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    fn check_symmetric(&self) -> Result<()> {
        for i in 0..self.order {
            for j in i + 1..self.order {
                if (self.get(i, j) - self.get(j, i)).abs() > SYMMETRY_TOL {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(())
    }
}

/// `I - D^{-1/2} A D^{-1/2}`.
pub fn normalized_laplacian(g: &Graph) -> Result<DenseSymMatrix> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::invalid("normalized Laplacian of the empty graph"));
    }
    let degrees = g.degrees();
    if let Some(v) = degrees.iter().position(|&d| d == 0) {
        return Err(Error::DegreeZero(v));
    }
    let inv_sqrt: Vec<f64> = degrees.iter().map(|&d| 1.0 / (d as f64).sqrt()).collect();
    let mut m = DenseSymMatrix::identity(n);
    for &(u, v) in g.edges() {
        let w = -inv_sqrt[u] * inv_sqrt[v];
        m.entries[u * n + v] = w;
        m.entries[v * n + u] = w;
    }
    Ok(m)
}

/// All eigenvalues of a symmetric matrix (Householder tridiagonalization
/// followed by implicit symmetric QR, via nalgebra).
pub fn eig_sym(m: &DenseSymMatrix, cluster_tol: f64) -> Result<SpectrumMultiset> {
    m.check_symmetric()?;
    let dense = DMatrix::from_row_slice(m.order, m.order, &m.entries);
    let eig = SymmetricEigen::try_new(dense, f64::EPSILON, 0)
        .ok_or_else(|| Error::NumericalFailure("symmetric eigensolver did not converge".into()))?;
    Ok(SpectrumMultiset::from_values(eig.eigenvalues.iter().copied().collect(), cluster_tol))
}

/// Numerical normalized Laplacian spectrum of `g`.
pub fn laplacian_spectrum(g: &Graph, cluster_tol: f64) -> Result<SpectrumMultiset> {
    eig_sym(&normalized_laplacian(g)?, cluster_tol)
}

/// A multiset of real eigenvalues.
///
/// The flat sorted list is kept alongside the clustering tolerance; the
/// `(value, multiplicity)` view is derived on demand, so comparisons never
/// see clustering artifacts.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMultiset {
    values: Vec<f64>,
    cluster_tol: f64,
}

impl SpectrumMultiset {
    pub fn from_values(mut values: Vec<f64>, cluster_tol: f64) -> Self {
        values.sort_by(f64::total_cmp);
        SpectrumMultiset { values, cluster_tol }
    }

    pub fn from_entries(entries: &[(f64, usize)], cluster_tol: f64) -> Self {
        let values = entries
            .iter()
            .flat_map(|&(v, m)| std::iter::repeat_n(v, m))
            .collect();
        Self::from_values(values, cluster_tol)
    }

    /// Sorted flat list, one item per eigenvalue.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    pub fn with_cluster_tol(mut self, cluster_tol: f64) -> Self {
        self.cluster_tol = cluster_tol;
        self
    }

    pub fn min(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.values.last().copied()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Clustered `(value, multiplicity)` pairs. Consecutive values within
    /// `cluster_tol` join one cluster, represented by its mean.
    pub fn entries(&self) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        let mut start = 0;
        for i in 1..=self.values.len() {
            if i == self.values.len() || self.values[i] - self.values[i - 1] > self.cluster_tol {
                let chunk = &self.values[start..i];
                out.push((chunk.iter().sum::<f64>() / chunk.len() as f64, chunk.len()));
                start = i;
            }
        }
        out
    }

    /// Number of eigenvalues within `cluster_tol` of `x`.
    pub fn multiplicity_near(&self, x: f64) -> usize {
        self.values.iter().filter(|v| (*v - x).abs() <= self.cluster_tol).count()
    }

    /// The multiset `{2 - λ}`.
    pub fn reflected(&self) -> Self {
        Self::from_values(self.values.iter().map(|v| 2.0 - v).collect(), self.cluster_tol)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc {
            order: usize,
            cluster_tol: Box<RawValue>,
            entries: Vec<(Box<RawValue>, usize)>,
        }
        let doc = Doc {
            order: self.order(),
            cluster_tol: raw_f64(self.cluster_tol),
            entries: self.entries().into_iter().map(|(v, m)| (raw_f64(v), m)).collect(),
        };
        serde_json::to_string(&doc).expect("spectrum serializes")
    }

    /// Human-readable `{v×m, ...}` summary.
    pub fn display_entries(&self) -> String {
        let parts: Vec<String> = self
            .entries()
            .iter()
            .map(|(v, m)| format!("{}x{m}", trim_float(*v)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

fn trim_float(v: f64) -> String {
    let v = if v.abs() < 1e-12 { 0.0 } else { v };
    let s = format!("{v:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

/// Outcome of comparing two spectra elementwise after sorting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchReport {
    pub matched: bool,
    pub len_a: usize,
    pub len_b: usize,
    /// First index `i` with `|a_i - b_i| > tol·max(1, |b_i|)`, and both values.
    pub first_mismatch: Option<(usize, f64, f64)>,
    /// Largest `|a_i - b_i| / max(1, |b_i|)` over the compared prefix.
    pub max_scaled_deviation: f64,
}

impl MatchReport {
    pub fn describe(&self) -> String {
        if self.matched {
            format!("match ({} values, max dev {:.3e})", self.len_a, self.max_scaled_deviation)
        } else if self.len_a != self.len_b {
            format!("length mismatch: {} vs {}", self.len_a, self.len_b)
        } else {
            let (i, a, b) = self.first_mismatch.expect("mismatch has an index");
            format!("mismatch at index {i}: {a} vs {b}")
        }
    }
}

pub fn multiset_match(a: &SpectrumMultiset, b: &SpectrumMultiset, tol: f64) -> MatchReport {
    let mut report = MatchReport {
        matched: a.order() == b.order(),
        len_a: a.order(),
        len_b: b.order(),
        first_mismatch: None,
        max_scaled_deviation: 0.0,
    };
    if !report.matched {
        return report;
    }
    for (i, (&x, &y)) in a.values.iter().zip(&b.values).enumerate() {
        let dev = (x - y).abs() / y.abs().max(1.0);
        report.max_scaled_deviation = report.max_scaled_deviation.max(dev);
        if dev > tol && report.first_mismatch.is_none() {
            report.first_mismatch = Some((i, x, y));
            report.matched = false;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn laplacian_entries() {
        let k2 = normalized_laplacian(&Graph::generate(Family::Complete, 2).unwrap()).unwrap();
        assert_eq!(k2.entries(), &[1.0, -1.0, -1.0, 1.0]);
        let k3 = normalized_laplacian(&Graph::generate(Family::Complete, 3).unwrap()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(close(k3.get(i, j), if i == j { 1.0 } else { -0.5 }));
            }
        }
        let p3 = normalized_laplacian(&Graph::generate(Family::Path, 3).unwrap()).unwrap();
        assert!(close(p3.get(0, 1), -1.0 / 2f64.sqrt()));
        assert_eq!(p3.get(0, 2), 0.0);
    }

    #[test]
    fn laplacian_rejects_isolated_vertex() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(normalized_laplacian(&g), Err(Error::DegreeZero(2)));
    }

    #[test]
    fn eig_examples() {
        let s = eig_sym(&DenseSymMatrix::identity(4), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(s.entries().len(), 1);
        assert!(close(s.entries()[0].0, 1.0) && s.entries()[0].1 == 4);

        let k2 = laplacian_spectrum(&Graph::generate(Family::Complete, 2).unwrap(), DEFAULT_CLUSTER_TOL).unwrap();
        let e = k2.entries();
        assert_eq!(e.len(), 2);
        assert!(close(e[0].0, 0.0) && close(e[1].0, 2.0));

        // det(I - A/2 - x I) for K_3 has roots 0 and 3/2 (double).
        let k3 = laplacian_spectrum(&Graph::generate(Family::Complete, 3).unwrap(), DEFAULT_CLUSTER_TOL).unwrap();
        let e = k3.entries();
        assert_eq!(e.len(), 2);
        assert!(close(e[0].0, 0.0) && e[0].1 == 1);
        assert!(close(e[1].0, 1.5) && e[1].1 == 2);
    }

    #[test]
    fn eig_rejects_asymmetric() {
        let m = DenseSymMatrix::from_row_major(2, vec![1.0, 0.5, 0.4, 1.0]).unwrap();
        assert_eq!(eig_sym(&m, 1e-6), Err(Error::NotSymmetric { row: 0, col: 1 }));
        assert!(DenseSymMatrix::from_row_major(2, vec![1.0]).is_err());
    }

    #[test]
    fn clustering() {
        let s = SpectrumMultiset::from_values(vec![1.5, 0.0, 1.5 + 1e-9, 1.5 - 1e-9, 3.0], 1e-6);
        let e = s.entries();
        assert_eq!(e.iter().map(|x| x.1).collect::<Vec<_>>(), vec![1, 3, 1]);
        assert!(close(e[1].0, 1.5));
        assert_eq!(s.multiplicity_near(1.5), 3);
        assert_eq!(s.display_entries(), "{0x1, 1.5x3, 3x1}");
    }

    #[test]
    fn matching() {
        let a = SpectrumMultiset::from_entries(&[(0.0, 1), (1.5, 2)], 1e-6);
        let b = SpectrumMultiset::from_entries(&[(0.0, 1), (1.5, 2)], 1e-6);
        assert!(multiset_match(&a, &b, 1e-7).matched);

        let c = SpectrumMultiset::from_entries(&[(0.0, 1)], 1e-6);
        let d = SpectrumMultiset::from_entries(&[(0.0, 2)], 1e-6);
        let r = multiset_match(&c, &d, 1.0);
        assert!(!r.matched && r.first_mismatch.is_none());
        assert_eq!(r.describe(), "length mismatch: 1 vs 2");

        let e = SpectrumMultiset::from_entries(&[(0.0, 1), (1.5 + 1e-6, 2)], 1e-6);
        let r = multiset_match(&e, &b, 1e-7);
        assert_eq!(r.first_mismatch.map(|m| m.0), Some(1));
    }

    #[test]
    fn json_layout() {
        let s = SpectrumMultiset::from_entries(&[(0.0, 1), (0.375, 2)], 1e-6);
        assert_eq!(
            s.to_json(),
            r#"{"order":3,"cluster_tol":9.9999999999999995e-7,"entries":[[0.0000000000000000e0,1],[3.7500000000000000e-1,2]]}"#
        );
    }
}
