//! The clique-blowup `CL(G)`: every edge `uv` gains `n - 2` new vertices that,
//! together with `u` and `v`, induce a complete graph `K_n`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::as_integer;
use crate::graph::Graph;

/// Default cap on the vertex count of any constructed graph.
pub const DEFAULT_MAX_VERTICES: usize = 20_000;

/// Clique size `n` and iteration depth `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BlowupParams {
    pub n: usize,
    pub r: usize,
}

impl BlowupParams {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        let p = BlowupParams { n, r };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::invalid(format!("clique size n = {} must be at least 3", self.n)));
        }
        Ok(())
    }

    /// Same clique size, one level.
    pub fn single(&self) -> Self {
        BlowupParams { n: self.n, r: 1 }
    }
}

/// Vertex and edge counts `(N_r, E_r)` of an iterated blowup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowupCounts {
    #[serde(serialize_with = "crate::json::bigint_as_string")]
    pub vertices: BigInt,
    #[serde(serialize_with = "crate::json::bigint_as_string")]
    pub edges: BigInt,
}

impl BlowupCounts {
    pub fn new(vertices: impl Into<BigInt>, edges: impl Into<BigInt>) -> Self {
        BlowupCounts {
            vertices: vertices.into(),
            edges: edges.into(),
        }
    }

    /// One application of `E' = n(n-1)E/2`, `N' = N + (n-2)E`.
    pub fn step(&self, n: usize) -> Self {
        let n = BigInt::from(n);
        let two = BigInt::from(2);
        BlowupCounts {
            vertices: &self.vertices + (&n - &two) * &self.edges,
            edges: &n * (&n - 1) * &self.edges / two,
        }
    }
}

/// `n^r (n-1)^r / 2^r`, the edge growth factor after `r` levels.
pub(crate) fn edge_growth(n: usize, r: usize) -> BigRational {
    let n = BigInt::from(n);
    let num: BigInt = n.pow(r as u32) * (&n - 1u32).pow(r as u32);
    BigRational::new(num, BigInt::from(2).pow(r as u32))
}

fn check_counts_input(n0: &BigInt, e0: &BigInt, p: &BlowupParams) -> Result<()> {
    p.validate()?;
    if n0 < &BigInt::one() {
        return Err(Error::invalid("vertex count must be at least 1"));
    }
    if e0 < &BigInt::zero() {
        return Err(Error::invalid("edge count must be non-negative"));
    }
    Ok(())
}

/// Counts at every level `0..=r` by the one-step recurrence.
pub fn counts_by_level(n0: &BigInt, e0: &BigInt, p: &BlowupParams) -> Result<Vec<BlowupCounts>> {
    check_counts_input(n0, e0, p)?;
    let mut levels = vec![BlowupCounts::new(n0.clone(), e0.clone())];
    for _ in 0..p.r {
        let next = levels.last().expect("non-empty").step(p.n);
        levels.push(next);
    }
    Ok(levels)
}

/// Exact `(N_r, E_r)`. Evaluates the closed forms and checks them against the
/// step-by-step recurrence.
pub fn blowup_counts(n0: &BigInt, e0: &BigInt, p: &BlowupParams) -> Result<BlowupCounts> {
    let stepped = counts_by_level(n0, e0, p)?.pop().expect("level 0 always present");

    let growth = edge_growth(p.n, p.r);
    let e0q = BigRational::from_integer(e0.clone());
    let edges = &growth * &e0q;
    let vertices = BigRational::from_integer(n0.clone())
        + BigRational::from_integer(BigInt::from(2)) * &e0q * (&growth - BigRational::one())
            / BigRational::from_integer(BigInt::from(p.n + 1));
    let closed = match (as_integer(&vertices), as_integer(&edges)) {
        (Some(v), Some(e)) => BlowupCounts::new(v, e),
        _ => {
            return Err(Error::assertion(format!(
                "closed-form counts are not integral: N = {vertices}, E = {edges}"
            )))
        }
    };
    if closed != stepped {
        return Err(Error::assertion(format!(
            "closed-form counts ({}, {}) disagree with recurrence ({}, {})",
            closed.vertices, closed.edges, stepped.vertices, stepped.edges
        )));
    }
    Ok(closed)
}

/// A single clique-blowup step.
///
/// Original vertices keep their labels. Edge `s` of the canonical edge order
/// receives the new labels `N_0 + s(n-2) .. N_0 + (s+1)(n-2)`.
pub fn clique_blowup(g: &Graph, n: usize) -> Result<Graph> {
    BlowupParams::new(n, 1)?;
    g.require_connected()?;
    let n0 = g.vertex_count();
    let extra = n - 2;
    let total = n0 + extra * g.edge_count();
    let mut edges = Vec::with_capacity(n * (n - 1) / 2 * g.edge_count());
    let mut clique = Vec::with_capacity(n);
    for (s, &(u, v)) in g.edges().iter().enumerate() {
        let base = n0 + s * extra;
        clique.clear();
        clique.push(u);
        clique.push(v);
        clique.extend(base..base + extra);
        // u < v < base, so every pair below is already normalized.
        for (i, &a) in clique.iter().enumerate() {
            for &b in &clique[i + 1..] {
                edges.push((a, b));
            }
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_canonical(total, edges))
}

/// `r`-fold clique-blowup. Fails before building anything if `N_r` would
/// exceed `max_vertices`.
pub fn blowup_iterate(g: &Graph, p: &BlowupParams, max_vertices: usize) -> Result<Graph> {
    p.validate()?;
    g.require_connected()?;
    let predicted = blowup_counts(&BigInt::from(g.vertex_count()), &BigInt::from(g.edge_count()), p)?;
    if predicted.vertices > BigInt::from(max_vertices) {
        return Err(Error::SizeCapExceeded {
            what: "vertex count",
            requested: predicted.vertices.to_string(),
            cap: max_vertices,
        });
    }
    let mut current = g.clone();
    for _ in 0..p.r {
        current = clique_blowup(&current, p.n)?;
    }
    Ok(current)
}

/// Degree histogram of `CL_r(G)` without building it: an original vertex of
/// degree `d` becomes `(n-1)d`, every added vertex has degree `n-1`.
pub fn degree_profile(g: &Graph, p: &BlowupParams) -> Result<BTreeMap<u64, u64>> {
    p.validate()?;
    let overflow = || Error::invalid("degree profile overflows 64-bit counters");
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    for d in g.degrees() {
        *hist.entry(d as u64).or_default() += 1;
    }
    let scale = (p.n - 1) as u64;
    let counts = counts_by_level(&BigInt::from(g.vertex_count()), &BigInt::from(g.edge_count()), p)?;
    for level in counts.iter().take(p.r) {
        let mut next: BTreeMap<u64, u64> = BTreeMap::new();
        for (d, c) in hist {
            *next.entry(d.checked_mul(scale).ok_or_else(overflow)?).or_default() += c;
        }
        let added = (&level.edges * BigInt::from(p.n - 2)).to_u64().ok_or_else(overflow)?;
        let slot: &mut u64 = next.entry(scale).or_default();
        *slot = slot.checked_add(added).ok_or_else(overflow)?;
        hist = next;
    }
    Ok(hist)
}
