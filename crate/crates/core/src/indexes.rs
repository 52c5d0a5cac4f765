//! Multiplicative degree-Kirchhoff index, Kemeny's constant and spanning-tree
//! counts: spectral formulas, independent oracles, and exact blowup recurrences.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::blowup::{counts_by_level, edge_growth, BlowupParams};
use crate::error::{Error, Result};
use crate::exact::{as_integer, bareiss_determinant, is_nonnegative, rational_inverse};
use crate::graph::Graph;
use crate::spectral::{DenseSymMatrix, ExactSpectrum, SpectrumMultiset};

/// Largest graph handed to the exact (big-integer / rational) oracles.
pub const DEFAULT_EXACT_CAP: usize = 200;

/// Upper bound on the bit length of a closed-form spanning-tree count.
const MAX_TAU_BITS: f64 = (1u64 << 27) as f64;

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

/// `base^exp` for a possibly negative exponent.
fn qpow(base: i64, exp: i64) -> BigRational {
    let b = int(base);
    if exp >= 0 {
        Pow::pow(b, exp as u64)
    } else {
        Pow::pow(b.recip(), exp.unsigned_abs())
    }
}

fn nonzero_values(sigma: &SpectrumMultiset) -> Result<impl Iterator<Item = f64> + '_> {
    let tol = sigma.cluster_tol();
    let zeros = sigma.values().iter().filter(|v| v.abs() <= tol).count();
    if zeros != 1 {
        return Err(Error::inconsistent(format!(
            "eigenvalue 0 has multiplicity {zeros}, expected 1"
        )));
    }
    Ok(sigma.values().iter().copied().filter(move |v| v.abs() > tol))
}

/// `Σ_{λ≠0} 1/λ`.
pub fn kemeny_spectral(sigma: &SpectrumMultiset) -> Result<f64> {
    Ok(nonzero_values(sigma)?.map(|v| 1.0 / v).sum())
}

/// `2m · Σ_{λ≠0} 1/λ`.
pub fn kf_star_spectral(sigma: &SpectrumMultiset, m: &BigInt) -> Result<f64> {
    if !m.is_positive() {
        return Err(Error::invalid("edge count must be positive"));
    }
    let m = m.to_f64().expect("finite edge count");
    Ok(2.0 * m * kemeny_spectral(sigma)?)
}

fn exact_nonzero(sigma: &ExactSpectrum) -> Result<impl Iterator<Item = &(BigRational, BigInt)>> {
    let zero: BigInt = sigma
        .entries()
        .iter()
        .filter(|(v, _)| v.is_zero())
        .map(|(_, m)| m)
        .sum();
    if !zero.is_one() {
        return Err(Error::inconsistent(format!(
            "eigenvalue 0 has multiplicity {zero}, expected 1"
        )));
    }
    Ok(sigma.entries().iter().filter(|(v, _)| !v.is_zero()))
}

pub fn kemeny_spectral_exact(sigma: &ExactSpectrum) -> Result<BigRational> {
    Ok(exact_nonzero(sigma)?
        .map(|(v, m)| v.recip() * int(m.clone()))
        .fold(BigRational::zero(), |acc, x| acc + x))
}

pub fn kf_star_spectral_exact(sigma: &ExactSpectrum, m: &BigInt) -> Result<BigRational> {
    if !m.is_positive() {
        return Err(Error::invalid("edge count must be positive"));
    }
    Ok(int(2) * int(m.clone()) * kemeny_spectral_exact(sigma)?)
}

/// Natural logarithm of a positive big integer.
pub fn big_ln(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "logarithm of a non-positive integer");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().expect("64-bit prefix").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln τ` from a degree histogram, an edge count and the spectrum:
/// `τ = Π d_i · Π_{λ≠0} λ / (2m)`.
pub fn log_tau_from_degrees(
    degrees: impl IntoIterator<Item = (f64, f64)>,
    m: f64,
    sigma: &SpectrumMultiset,
) -> Result<f64> {
    let log_deg: f64 = degrees.into_iter().map(|(d, count)| count * d.ln()).sum();
    let log_eig: f64 = nonzero_values(sigma)?.map(f64::ln).sum();
    Ok(log_deg + log_eig - (2.0 * m).ln())
}

/// Spanning-tree count from the normalized Laplacian spectrum, via logarithms.
pub fn tau_spectral(g: &Graph, sigma: &SpectrumMultiset) -> Result<f64> {
    Ok(log_tau_spectral(g, sigma)?.exp())
}

pub fn log_tau_spectral(g: &Graph, sigma: &SpectrumMultiset) -> Result<f64> {
    g.require_connected()?;
    if g.edge_count() == 0 {
        return Ok(0.0);
    }
    if sigma.order() != g.vertex_count() {
        return Err(Error::inconsistent(format!(
            "spectrum has {} values for a graph of order {}",
            sigma.order(),
            g.vertex_count()
        )));
    }
    log_tau_from_degrees(
        g.degrees().into_iter().map(|d| (d as f64, 1.0)),
        g.edge_count() as f64,
        sigma,
    )
}

fn float_laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.vertex_count();
    let mut l = DMatrix::zeros(n, n);
    for v in 0..n {
        l[(v, v)] = g.degree(v) as f64;
    }
    for &(u, v) in g.edges() {
        l[(u, v)] = -1.0;
        l[(v, u)] = -1.0;
    }
    l
}

/// Effective resistances with unit edge resistances, from the Laplacian
/// pseudoinverse `(L + J/N)^{-1} - J/N`.
pub fn resistance_matrix(g: &Graph) -> Result<DenseSymMatrix> {
    g.require_connected()?;
    let n = g.vertex_count();
    let shift = 1.0 / n as f64;
    let shifted = float_laplacian(g).add_scalar(shift);
    let inv = shifted
        .cholesky()
        .ok_or_else(|| Error::NumericalFailure("shifted Laplacian is not positive definite".into()))?
        .inverse();
    let pinv = inv.add_scalar(-shift);
    let mut r = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = pinv[(i, i)] + pinv[(j, j)] - 2.0 * pinv[(i, j)];
            r[i * n + j] = v;
            r[j * n + i] = v;
        }
    }
    DenseSymMatrix::from_row_major(n, r)
}

/// `Σ_{i<j} d_i d_j r_ij` from resistance distances.
pub fn kf_star_direct(g: &Graph) -> Result<f64> {
    let r = resistance_matrix(g)?;
    let d = g.degrees();
    let n = g.vertex_count();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            total += (d[i] * d[j]) as f64 * r.get(i, j);
        }
    }
    Ok(total)
}

/// `ln τ` as the log-determinant of the grounded Laplacian (Cholesky).
pub fn log_tau_cholesky(g: &Graph) -> Result<f64> {
    g.require_connected()?;
    let n = g.vertex_count();
    if n <= 1 {
        return Ok(0.0);
    }
    let l = float_laplacian(g).remove_row(n - 1).remove_column(n - 1);
    let chol = l
        .cholesky()
        .ok_or_else(|| Error::NumericalFailure("grounded Laplacian is not positive definite".into()))?;
    Ok(chol.l().diagonal().iter().map(|x| 2.0 * x.ln()).sum())
}

fn check_exact_cap(g: &Graph, cap: usize) -> Result<()> {
    if g.vertex_count() > cap {
        return Err(Error::SizeCapExceeded {
            what: "exact oracle order",
            requested: g.vertex_count().to_string(),
            cap,
        });
    }
    Ok(())
}

/// Exact spanning-tree count: the determinant of the Laplacian with the last
/// row and column removed, by fraction-free elimination.
pub fn tau_exact(g: &Graph, cap: usize) -> Result<BigInt> {
    g.require_connected()?;
    check_exact_cap(g, cap)?;
    let n = g.vertex_count();
    let mut l = g.combinatorial_laplacian();
    l.truncate(n - 1);
    for row in &mut l {
        row.truncate(n - 1);
    }
    Ok(bareiss_determinant(l))
}

/// Exact `Kf*` from rational resistances, grounding the last vertex.
pub fn kf_star_exact(g: &Graph, cap: usize) -> Result<BigRational> {
    g.require_connected()?;
    check_exact_cap(g, cap)?;
    let n = g.vertex_count();
    if n == 1 {
        return Ok(BigRational::zero());
    }
    let grounded: Vec<Vec<BigRational>> = g
        .combinatorial_laplacian()
        .into_iter()
        .take(n - 1)
        .map(|row| row.into_iter().take(n - 1).map(BigRational::from_integer).collect())
        .collect();
    let inv = rational_inverse(&grounded)
        .ok_or_else(|| Error::NumericalFailure("grounded Laplacian is singular".into()))?;
    // r_ij = X_ii + X_jj - 2X_ij, with row/column n-1 of X taken as zero.
    let x = |i: usize, j: usize| {
        if i == n - 1 || j == n - 1 {
            BigRational::zero()
        } else {
            inv[i][j].clone()
        }
    };
    let d = g.degrees();
    let mut total = BigRational::zero();
    for i in 0..n {
        for j in i + 1..n {
            let r = x(i, i) + x(j, j) - int(2) * x(i, j);
            total += r * int(d[i] * d[j]);
        }
    }
    Ok(total)
}

fn check_closed_inputs(n0: &BigInt, e0: &BigInt, p: &BlowupParams) -> Result<()> {
    p.validate()?;
    if !n0.is_positive() || e0.is_negative() {
        return Err(Error::invalid("need N0 >= 1 and E0 >= 0"));
    }
    Ok(())
}

/// `Kf*` of `CL_r(G)` from `Kf*(G)` by iterating
/// `Kf' = ½n(n-1)²Kf + (3/2)(n-1)²(n-2)E² - ½(n-1)²(n-2)EN`,
/// checked against [`kf_star_r_level`].
pub fn kf_star_blowup_closed(kf: &BigRational, n0: &BigInt, e0: &BigInt, p: &BlowupParams) -> Result<BigRational> {
    check_closed_inputs(n0, e0, p)?;
    if !is_nonnegative(kf) {
        return Err(Error::invalid("Kf* must be non-negative"));
    }
    let n = p.n as i64;
    let half = BigRational::new(1.into(), 2.into());
    let sq = int((n - 1) * (n - 1));
    let mut acc = kf.clone();
    for level in counts_by_level(n0, e0, p)?.iter().take(p.r) {
        let e = int(level.edges.clone());
        let v = int(level.vertices.clone());
        acc = &half * int(n) * &sq * &acc + int(3) * &half * &sq * int(n - 2) * &e * &e
            - &half * &sq * int(n - 2) * &e * &v;
    }
    let closed = kf_star_r_level(kf, n0, e0, p);
    if closed != acc {
        return Err(Error::assertion(format!(
            "Kf* recurrence gives {acc} but the r-level closed form gives {closed}"
        )));
    }
    Ok(acc)
}

/// The r-level closed expression for `Kf*(CL_r(G))`.
pub fn kf_star_r_level(kf: &BigRational, n0: &BigInt, e0: &BigInt, p: &BlowupParams) -> BigRational {
    let (n, r) = (p.n as i64, p.r as i64);
    let e0 = int(e0.clone());
    let n0 = int(n0.clone());
    let a = qpow(n, r) * qpow(n - 1, 2 * r) / qpow(2, r) * kf;
    let b = qpow(n, r - 1) * qpow(n - 1, 2 * r + 1) / qpow(2, r)
        * (int(1) - qpow(n - 1, -r))
        * &e0
        * &n0;
    let inner = int(3) * (qpow(n, r) / qpow(2, r) - int(1))
        - BigRational::new(1.into(), (n + 1).into())
            * (qpow(n, r) / qpow(2, r - 1) + qpow(n - 1, -(r - 1)) - int(n) - int(1));
    let c = qpow(n - 1, 2 * r) * qpow(n, r - 1) / qpow(2, r - 1) * inner * &e0 * &e0;
    a - b + c
}

/// Kemeny's constant of `CL_r(G)` by iterating
/// `K' = (n-1)K + 3(n-1)(n-2)E/(2n) - (n-1)(n-2)N/(2n)`,
/// checked against [`kemeny_r_level`].
pub fn kemeny_blowup_closed(ke: &BigRational, n0: &BigInt, e0: &BigInt, p: &BlowupParams) -> Result<BigRational> {
    check_closed_inputs(n0, e0, p)?;
    if !is_nonnegative(ke) {
        return Err(Error::invalid("Kemeny's constant must be non-negative"));
    }
    let n = p.n as i64;
    let c = BigRational::new(((n - 1) * (n - 2)).into(), (2 * n).into());
    let mut acc = ke.clone();
    for level in counts_by_level(n0, e0, p)?.iter().take(p.r) {
        acc = int(n - 1) * &acc + int(3) * &c * int(level.edges.clone()) - &c * int(level.vertices.clone());
    }
    let closed = kemeny_r_level(ke, n0, e0, p);
    if closed != acc {
        return Err(Error::assertion(format!(
            "Kemeny recurrence gives {acc} but the r-level closed form gives {closed}"
        )));
    }
    Ok(acc)
}

fn kemeny_n0_term(n0: &BigInt, p: &BlowupParams) -> BigRational {
    let (n, r) = (p.n as i64, p.r as i64);
    qpow(n - 1, r + 1) / int(2 * n) * (qpow(n - 1, -r) - int(1)) * int(n0.clone())
}

/// Closed r-level expression for Kemeny's constant, obtained by summing the
/// one-step recurrence with `E_k = (n(n-1)/2)^k E_0`:
///
/// `(n-1)^r K + (n-1)^{r+1}/(2n)·((n-1)^{-r} - 1)·N_0
///  + [(n-1)^r (3n+1)/(n(n+1))·((n/2)^r - 1) + ((n-1)^{r+1} - (n-1))/(n(n+1))]·E_0`.
pub fn kemeny_r_level(ke: &BigRational, n0: &BigInt, e0: &BigInt, p: &BlowupParams) -> BigRational {
    let (n, r) = (p.n as i64, p.r as i64);
    let nn1 = int(n * (n + 1));
    let e_coef = qpow(n - 1, r) * int(3 * n + 1) / &nn1 * (qpow(n, r) / qpow(2, r) - int(1))
        + (qpow(n - 1, r + 1) - int(n - 1)) / &nn1;
    qpow(n - 1, r) * ke + kemeny_n0_term(n0, p) + e_coef * int(e0.clone())
}

/// The r-level Kemeny expression in its uncorrected form. Its `E_0` coefficient
/// falls short of the recurrence by `(n-2)((n-1)^{r-1} - 1)/(n(n+1))`, so it
/// only agrees with [`kemeny_r_level`] at `r <= 1`.
pub fn kemeny_r_level_uncorrected(ke: &BigRational, n0: &BigInt, e0: &BigInt, p: &BlowupParams) -> BigRational {
    let (n, r) = (p.n as i64, p.r as i64);
    let e_coef = int(3) * qpow(n - 1, r) / int(n) * (qpow(n, r) / qpow(2, r) - int(1))
        + qpow(n - 1, r) / int(n + 1) * (int(1) - qpow(n, r - 1) / qpow(2, r - 1))
        + qpow(n - 1, r - 1) / int(n * (n + 1)) * (int(1) - qpow(n - 1, -(r - 1)));
    qpow(n - 1, r) * ke + kemeny_n0_term(n0, p) + e_coef * int(e0.clone())
}

/// Exponents `(a, b)` with `τ(CL_r(G)) = 2^a · n^b · τ(G)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauExponents {
    pub of_two: BigInt,
    pub of_n: BigInt,
}

/// Exponents from summing the one-step factor `2^{E-N+1} n^{(n-3)E+N-1}` over levels.
pub fn tau_exponents_stepped(n0: &BigInt, e0: &BigInt, p: &BlowupParams) -> Result<TauExponents> {
    check_closed_inputs(n0, e0, p)?;
    let n3 = BigInt::from(p.n as i64 - 3);
    let mut out = TauExponents {
        of_two: BigInt::zero(),
        of_n: BigInt::zero(),
    };
    for level in counts_by_level(n0, e0, p)?.iter().take(p.r) {
        out.of_two += &level.edges - &level.vertices + 1u32;
        out.of_n += &n3 * &level.edges + &level.vertices - 1u32;
    }
    Ok(out)
}

/// Exponents of the α-form, `α = (n^r(n-1)^r/2^r - 1)/(n² - n - 2)`, as rationals.
pub fn tau_exponents_alpha(n0: &BigInt, e0: &BigInt, p: &BlowupParams) -> (BigRational, BigRational) {
    let (n, r) = (p.n as i64, p.r as i64);
    let alpha = (edge_growth(p.n, p.r) - int(1)) / int(n * n - n - 2);
    let e0 = int(e0.clone());
    let n0 = int(n0.clone());
    let mixed = int(2) * &e0 / int(n + 1) * (int(2) * &alpha - int(r));
    let of_two = int(2) * &e0 * &alpha - int(r) * &n0 - &mixed + int(r);
    let of_n = int(2 * (n - 3)) * &e0 * &alpha + int(r) * &n0 + &mixed - int(r);
    (of_two, of_n)
}

/// Exact `τ(CL_r(G))` from `τ(G)`. The stepped product and the α-form must
/// agree, and both α-form exponents must be integers.
pub fn tau_blowup_closed(tau: &BigInt, n0: &BigInt, e0: &BigInt, p: &BlowupParams) -> Result<BigInt> {
    check_closed_inputs(n0, e0, p)?;
    if !tau.is_positive() {
        return Err(Error::invalid("spanning-tree count must be at least 1"));
    }
    let stepped = tau_exponents_stepped(n0, e0, p)?;
    let (a2, an) = tau_exponents_alpha(n0, e0, p);
    let (Some(a2), Some(an)) = (as_integer(&a2), as_integer(&an)) else {
        return Err(Error::assertion(format!("alpha-form exponents are not integral: {a2}, {an}")));
    };
    if a2 != stepped.of_two || an != stepped.of_n {
        return Err(Error::assertion(format!(
            "alpha-form exponents ({a2}, {an}) disagree with the recurrence ({}, {})",
            stepped.of_two, stepped.of_n
        )));
    }
    if a2.is_negative() || an.is_negative() {
        return Err(Error::assertion("negative spanning-tree exponent"));
    }
    let bits = a2.to_f64().unwrap_or(f64::INFINITY) + an.to_f64().unwrap_or(f64::INFINITY) * (p.n as f64).log2();
    if bits > MAX_TAU_BITS {
        return Err(Error::SizeCapExceeded {
            what: "spanning-tree count bits",
            requested: format!("{bits:.0}"),
            cap: MAX_TAU_BITS as usize,
        });
    }
    let a2 = a2.to_u64().expect("bounded above");
    let an = an.to_u64().expect("bounded above");
    let closed = Pow::pow(BigInt::from(2), a2) * Pow::pow(BigInt::from(p.n), an) * tau;

    let mut iterated = tau.clone();
    let n3 = BigInt::from(p.n as i64 - 3);
    for level in counts_by_level(n0, e0, p)?.iter().take(p.r) {
        let x2 = (&level.edges - &level.vertices + 1u32).to_u64().expect("bounded by total");
        let xn = (&n3 * &level.edges + &level.vertices - 1u32).to_u64().expect("bounded by total");
        iterated = iterated * Pow::pow(BigInt::from(2), x2) * Pow::pow(BigInt::from(p.n), xn);
    }
    if iterated != closed {
        return Err(Error::assertion("iterated spanning-tree product disagrees with the closed form"));
    }
    Ok(closed)
}
