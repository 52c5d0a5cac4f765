//! Acceptance suite. Runs each criterion in order and prints one
//! `PASS`/`FAIL` line per criterion, followed by details for failures.
//! Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use clique_blowup::indexes::{kemeny_spectral, kf_star_direct, kf_star_spectral, log_tau_spectral, tau_exponents_alpha};
use clique_blowup::report::{indexes_closed_form, indexes_oracle, indexes_spectral};
use clique_blowup::verify::{default_corpus, incidence_rank_check, spectral_structure};
use clique_blowup::{
    blowup_counts, blowup_iterate, clique_blowup, exact_spectrum_by_theorem, kemeny_blowup_closed,
    kemeny_r_level, kemeny_r_level_uncorrected, kf_star_blowup_closed, kf_star_exact, kf_star_r_level,
    kf_star_spectral_exact, kemeny_spectral_exact, laplacian_spectrum, multiset_match, spectrum_iterated,
    tau_blowup_closed, tau_exact, BlowupParams, ExactSpectrum, Family, Graph, GraphSpec, IndexOptions,
    SpectrumMultiset, SpectrumSource, DEFAULT_CLUSTER_TOL,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

const MAX_VERTICES: usize = 20_000;
const ORACLE_VERTICES: usize = 200;

struct Outcome {
    checks: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { checks: 0, failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn error(&mut self, what: String) {
        self.checks += 1;
        self.failures.push(what);
    }
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn base(spec: &GraphSpec) -> Graph {
    spec.build().expect("corpus graph")
}

fn counts(g: &Graph) -> (BigInt, BigInt) {
    (BigInt::from(g.vertex_count()), BigInt::from(g.edge_count()))
}

/// (graph, n, r) cells of the theorem grid.
fn grid() -> Vec<(GraphSpec, usize, usize)> {
    let mut cells = Vec::new();
    for spec in default_corpus() {
        for n in 3..=6 {
            cells.push((spec, n, 1));
        }
    }
    for spec in ["complete:2", "complete:3", "cycle:4"] {
        for n in [3, 5] {
            cells.push((spec.parse().unwrap(), n, 2));
        }
    }
    cells
}

fn numeric(g: &Graph) -> SpectrumMultiset {
    laplacian_spectrum(g, DEFAULT_CLUSTER_TOL).expect("eigendecomposition")
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    for (spec, n, r) in grid() {
        let g = base(&spec);
        let p = BlowupParams::new(n, r).unwrap();
        let run = || -> clique_blowup::Result<_> {
            let h = blowup_iterate(&g, &p, MAX_VERTICES)?;
            let sigma = numeric(&g);
            let theorem = spectrum_iterated(&sigma, g.vertex_count(), g.edge_count(), &p, g.is_bipartite()?, usize::MAX)?;
            Ok((h.vertex_count(), multiset_match(&theorem, &numeric(&h), 1e-7)))
        };
        match run() {
            Ok((order, m)) => out.check(m.matched, || format!("{spec} n={n} r={r} (N={order}): {}", m.describe())),
            Err(e) => out.error(format!("{spec} n={n} r={r}: {e}")),
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let k3 = Graph::generate(Family::Complete, 3).unwrap();
    let p = BlowupParams::new(5, 1).unwrap();
    let h = clique_blowup(&k3, 5).unwrap();
    out.check(h.vertex_count() == 12 && h.edge_count() == 30, || {
        format!("CL(K3) has {} vertices and {} edges", h.vertex_count(), h.edge_count())
    });

    let want = SpectrumMultiset::from_entries(&[(0.0, 1), (0.375, 2), (1.25, 9)], DEFAULT_CLUSTER_TOL);
    let opts = IndexOptions::default();
    let sigma = numeric(&h);
    let m = multiset_match(&sigma, &want, 1e-9);
    out.check(m.matched, || format!("numeric spectrum: {}", m.describe()));
    let theorem = clique_blowup::report::blowup_spectrum(&k3, &p, SpectrumSource::Theorem, &opts).unwrap();
    let m = multiset_match(&theorem, &want, 1e-9);
    out.check(m.matched, || format!("theorem spectrum: {}", m.describe()));

    let spectral = kf_star_spectral(&sigma, &BigInt::from(30)).unwrap();
    let closed = indexes_closed_form(&k3, &p, &opts).unwrap();
    let oracle = kf_star_direct(&h).unwrap();
    for (route, v) in [("spectral", spectral), ("closed form", closed.kf_star), ("resistance oracle", oracle)] {
        out.check(rel(v, 752.0) <= 1e-8, || format!("Kf* by {route} = {v}"));
    }
    let spec_report = indexes_spectral(&k3, &p, SpectrumSource::Numeric, &opts).unwrap();
    out.check(rel(spec_report.kf_star, 752.0) <= 1e-8, || format!("Kf* spectral report = {}", spec_report.kf_star));

    out.check(closed.kemeny_exact.as_ref() == Some(&q(188, 15)), || {
        format!("closed-form K_e = {:?}", closed.kemeny_exact)
    });
    let ke_exact = kf_star_exact(&h, 200).unwrap() / BigRational::from_integer(60.into());
    out.check(ke_exact == q(188, 15), || format!("K_e from exact resistances = {ke_exact}"));

    let tau = BigInt::from(2_343_750u64);
    out.check(tau == BigInt::from(2) * BigInt::from(5).pow(8) * 3u32, || "2*5^8*3 != 2343750".into());
    let mt = tau_exact(&h, 200).unwrap();
    out.check(mt == tau, || format!("Matrix-Tree determinant = {mt}"));
    let ct = closed.tau_exact.clone();
    out.check(ct.as_ref() == Some(&tau), || format!("closed-form tau = {ct:?}"));
    let oracle_report = indexes_oracle(&k3, &p, &opts).unwrap();
    out.check(oracle_report.tau_exact.as_ref() == Some(&tau), || format!("oracle tau = {:?}", oracle_report.tau_exact));
    out
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let k2 = Graph::generate(Family::Complete, 2).unwrap();
    let (n0, e0) = counts(&k2);
    for n in 3..=6usize {
        let h = clique_blowup(&k2, n).unwrap();
        let kn = Graph::generate(Family::Complete, n).unwrap();
        // labels 0, 1 then the n-2 new vertices: identical to the canonical K_n
        out.check(h == kn, || format!("CL(K2) with n={n} is not K_{n}"));

        let sigma = exact_spectrum_by_theorem(&ExactSpectrum::complete(2).unwrap(), &n0, &e0, n, true).unwrap();
        let want = ExactSpectrum::from_pairs(vec![
            (BigRational::zero(), BigInt::one()),
            (q(n as i64, n as i64 - 1), BigInt::from(n - 1)),
        ]);
        out.check(sigma == want, || format!("n={n}: exact theorem spectrum {:?}", sigma.entries()));
        let m = multiset_match(&numeric(&h), &want.to_multiset(DEFAULT_CLUSTER_TOL, usize::MAX).unwrap(), 1e-9);
        out.check(m.matched, || format!("n={n}: numeric spectrum {}", m.describe()));

        let cayley = BigInt::from(n).pow(n as u32 - 2);
        let mt = tau_exact(&h, 200).unwrap();
        out.check(mt == cayley, || format!("n={n}: Matrix-Tree tau = {mt}, want {cayley}"));
        let ct = tau_blowup_closed(&BigInt::one(), &n0, &e0, &BlowupParams::new(n, 1).unwrap()).unwrap();
        out.check(ct == cayley, || format!("n={n}: closed-form tau = {ct}, want {cayley}"));

        let kf_want = BigRational::from_integer(BigInt::from((n - 1).pow(3)));
        let ke_want = q(((n - 1) * (n - 1)) as i64, n as i64);
        let m_edges = BigInt::from(h.edge_count());
        let kf_spec = kf_star_spectral_exact(&sigma, &m_edges).unwrap();
        let kf_res = kf_star_exact(&h, 200).unwrap();
        let p = BlowupParams::new(n, 1).unwrap();
        let kf_closed = kf_star_blowup_closed(&BigRational::one(), &n0, &e0, &p).unwrap();
        for (route, v) in [("spectral", &kf_spec), ("resistance", &kf_res), ("closed form", &kf_closed)] {
            out.check(*v == kf_want, || format!("n={n}: Kf* by {route} = {v}, want {kf_want}"));
        }
        let ke_spec = kemeny_spectral_exact(&sigma).unwrap();
        let ke_closed = kemeny_blowup_closed(&q(1, 2), &n0, &e0, &p).unwrap();
        for (route, v) in [("spectral", &ke_spec), ("closed form", &ke_closed)] {
            out.check(*v == ke_want, || format!("n={n}: K_e by {route} = {v}, want {ke_want}"));
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let mut kemeny_gaps = Vec::new();
    for (spec, n, r) in grid() {
        let g = base(&spec);
        let (n0, e0) = counts(&g);
        let p = BlowupParams::new(n, r).unwrap();
        let kf0 = kf_star_exact(&g, 200).unwrap();
        let ke0 = &kf0 / BigRational::from_integer(BigInt::from(2 * g.edge_count()));
        let tau0 = tau_exact(&g, 200).unwrap();

        // iterate the one-step recurrences level by level
        let (mut kf, mut ke, mut tau) = (kf0.clone(), ke0.clone(), tau0.clone());
        let (mut nk, mut ek) = (n0.clone(), e0.clone());
        let one = p.single();
        for _ in 0..r {
            kf = kf_star_blowup_closed(&kf, &nk, &ek, &one).unwrap();
            ke = kemeny_blowup_closed(&ke, &nk, &ek, &one).unwrap();
            tau = tau_blowup_closed(&tau, &nk, &ek, &one).unwrap();
            let next = blowup_counts(&nk, &ek, &one).unwrap();
            (nk, ek) = (next.vertices, next.edges);
        }
        let cell = format!("{spec} n={n} r={r}");

        let kf_r = kf_star_r_level(&kf0, &n0, &e0, &p);
        out.check(kf_r == kf, || format!("{cell}: Kf* r-level {kf_r} vs recurrence {kf}"));

        let ke_unc = kemeny_r_level_uncorrected(&ke0, &n0, &e0, &p);
        if ke_unc != ke {
            let corrected = kemeny_r_level(&ke0, &n0, &e0, &p);
            kemeny_gaps.push((cell.clone(), &ke - &ke_unc, corrected == ke, g.clone(), p));
        }
        out.check(ke_unc == ke, || format!("{cell}: K_e r-level {ke_unc} vs recurrence {ke}"));

        let (a2, an) = tau_exponents_alpha(&n0, &e0, &p);
        out.check(a2.is_integer() && an.is_integer(), || format!("{cell}: alpha exponents {a2}, {an}"));
        if a2.is_integer() && an.is_integer() {
            let closed = &tau0
                * BigInt::from(2).pow(a2.to_integer().to_u32().unwrap())
                * BigInt::from(n).pow(an.to_integer().to_u32().unwrap());
            out.check(closed == tau, || format!("{cell}: tau alpha form {closed} vs recurrence {tau}"));
        }
    }

    if !kemeny_gaps.is_empty() {
        out.notes.push(format!(
            "the r-level K_e expression differs from the iterated recurrence in {} cells, all with r >= 2",
            kemeny_gaps.len()
        ));
        for (cell, gap, corrected_ok, g, p) in &kemeny_gaps {
            // independent evidence: K_e of the explicit graph from its eigenvalues
            let h = blowup_iterate(g, p, MAX_VERTICES).unwrap();
            let direct = kemeny_spectral(&numeric(&h)).unwrap();
            let n0 = BigInt::from(g.vertex_count());
            let e0 = BigInt::from(g.edge_count());
            let kf0 = kf_star_exact(g, 200).unwrap();
            let ke0 = kf0 / BigRational::from_integer(BigInt::from(2 * g.edge_count()));
            let uncorrected = kemeny_r_level_uncorrected(&ke0, &n0, &e0, p).to_f64().unwrap();
            let recurrence = kemeny_r_level(&ke0, &n0, &e0, p).to_f64().unwrap();
            let (n, r) = (p.n as i64, p.r as u32);
            let predicted = q((n - 2) * ((n - 1).pow(r - 1) - 1), n * (n + 1)) * BigRational::from_integer(e0);
            out.notes.push(format!(
                "{cell}: recurrence - uncorrected = {gap} (predicted (n-2)((n-1)^(r-1)-1)E0/(n(n+1)) = {predicted}); \
                 eigenvalue K_e = {direct:.10}, recurrence = {recurrence:.10}, uncorrected = {uncorrected:.10}; \
                 corrected r-level form agrees: {corrected_ok}"
            ));
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let mut graphs: Vec<(String, Graph)> = Vec::new();
    for spec in default_corpus() {
        let g = base(&spec);
        for n in 3..=6 {
            graphs.push((format!("CL({spec}) n={n}"), clique_blowup(&g, n).unwrap()));
        }
        graphs.push((spec.to_string(), g));
    }
    for (name, g) in &graphs {
        let sigma = numeric(g);
        for c in spectral_structure(g, &sigma, 1e-7).unwrap() {
            out.check(c.passed, || format!("{name}: {} ({})", c.name, c.detail));
        }
        let c = incidence_rank_check(g).unwrap();
        out.check(c.passed, || format!("{name}: {} ({})", c.name, c.detail));
    }
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let mut graphs: Vec<(String, Graph)> = default_corpus().iter().map(|s| (s.to_string(), base(s))).collect();
    for (spec, n, r) in grid() {
        let g = base(&spec);
        let p = BlowupParams::new(n, r).unwrap();
        let (n0, e0) = counts(&g);
        if blowup_counts(&n0, &e0, &p).unwrap().vertices <= BigInt::from(ORACLE_VERTICES) {
            graphs.push((format!("{spec} n={n} r={r}"), blowup_iterate(&g, &p, ORACLE_VERTICES).unwrap()));
        }
    }
    for (name, g) in &graphs {
        let sigma = numeric(g);
        let m = BigInt::from(g.edge_count());
        let kf = kf_star_spectral(&sigma, &m).unwrap();
        let direct = kf_star_direct(g).unwrap();
        out.check(rel(kf, direct) <= 1e-7, || format!("{name}: Kf* spectral {kf} vs resistance {direct}"));

        let exact = tau_exact(g, ORACLE_VERTICES).unwrap();
        let log_exact = clique_blowup::indexes::big_ln(&exact);
        let log_spec = log_tau_spectral(g, &sigma).unwrap();
        // relative error of τ is exp(Δ ln τ) - 1
        let tau_rel = (log_spec - log_exact).exp_m1().abs();
        out.check(tau_rel <= 1e-6, || format!("{name}: tau spectral e^{log_spec} vs exact {exact} (rel {tau_rel:e})"));

        let ke = kemeny_spectral(&sigma).unwrap();
        let two_m = 2.0 * g.edge_count() as f64;
        out.check(rel(kf, two_m * ke) <= 1e-12, || format!("{name}: Kf* {kf} vs 2m*K_e {}", two_m * ke));
    }
    out.notes.push(format!("{} graphs checked", graphs.len()));
    out
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 6] = [
        ("spectrum theorem vs direct eigendecomposition", criterion_1),
        ("CL(K3), n=5 fixture", criterion_2),
        ("CL(K2) is K_n", criterion_3),
        ("r-level closed forms vs iterated recurrences", criterion_4),
        ("structural spectral properties", criterion_5),
        ("oracle closure up to 200 vertices", criterion_6),
    ];
    let mut all_ok = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let ok = out.failures.is_empty();
        all_ok &= ok;
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {}: {name} ({} of {} checks passed, {secs:.2}s)",
            i + 1,
            out.checks - out.failures.len(),
            out.checks
        );
        for f in &out.failures {
            println!("    failed: {f}");
        }
        for note in &out.notes {
            println!("    note: {note}");
        }
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
