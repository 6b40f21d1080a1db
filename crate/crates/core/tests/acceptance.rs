//! Acceptance checks, one line per criterion. Exits non-zero when any fails.

use std::f64::consts::{FRAC_PI_3, PI};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use isospec_core::graph::{ConditionKind, QuantumGraph};
use isospec_core::group::{FiniteGroup, SubgroupRef};
use isospec_core::linalg::{self, c, CMatrix};
use isospec_core::quotient::{self, QuotientKind, QuotientRecipe, RecipeOptions};
use isospec_core::rep::Representation;
use isospec_core::spectral::{self, SolverSettings, Spectrum};
use isospec_core::{d4, examples};

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn within(elapsed: Duration, limit: f64) -> std::result::Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit, format!("took {:.2}s, limit {limit}s", elapsed.as_secs_f64()))
}

// ---- criterion 1 -----------------------------------------------------------

/// Each expected row must equal, after scaling, some row of `(A | B)`.
fn rows_match(a: &CMatrix, b: &CMatrix, expected: &[Vec<Complex64>], tol: f64) -> std::result::Result<f64, String> {
    let got = linalg::hstack(a, b);
    if got.nrows() != expected.len() {
        return Err(format!("{} rows, expected {}", got.nrows(), expected.len()));
    }
    let normalize = |row: Vec<Complex64>| {
        let pivot = row.iter().copied().fold(c(0.0, 0.0), |best, z| if z.norm() > best.norm() + 1e-14 { z } else { best });
        row.into_iter().map(|z| z / pivot).collect::<Vec<_>>()
    };
    let mut worst = 0.0f64;
    let mut used = vec![false; got.nrows()];
    for want in expected {
        let want = normalize(want.clone());
        let mut best: Option<(usize, f64)> = None;
        for r in (0..got.nrows()).filter(|&r| !used[r]) {
            let row = normalize(got.row(r).iter().copied().collect());
            let dev = row.iter().zip(&want).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            if best.is_none_or(|(_, d)| dev < d) {
                best = Some((r, dev));
            }
        }
        let (r, dev) = best.ok_or("no rows left")?;
        if dev > tol {
            return Err(format!("row {want:?} not found (closest deviation {dev:.2e})"));
        }
        used[r] = true;
        worst = worst.max(dev);
    }
    Ok(worst)
}

fn re(row: &[f64]) -> Vec<Complex64> {
    row.iter().map(|&x| c(x, 0.0)).collect()
}

/// Reduced condition at a vertex with Neumann data on two incident slots
/// related by the given witnesses.
fn neumann_pair(rep: &Representation, witnesses: [usize; 2], same_orbit: bool) -> std::result::Result<(CMatrix, CMatrix, CMatrix, CMatrix), String> {
    let d = rep.dim();
    let nu: Vec<usize> = if same_orbit { vec![0, 0] } else { vec![0, 1] };
    let mu = quotient::distinct_in_order(&nu);
    let theta = quotient::build_theta(&nu, &mu, d, &vec![d; mu.len()]).map_err(fail)?;
    let basis = linalg::identity(d);
    let gothic = quotient::build_gothic(rep, &witnesses, &nu, &basis, &vec![basis.clone(); mu.len()]).map_err(fail)?;
    let a = linalg::real_matrix(&[&[1.0, -1.0], &[0.0, 0.0]]);
    let b = linalg::real_matrix(&[&[0.0, 0.0], &[1.0, 1.0]]);
    let (a0, b0) = quotient::build_vertex_condition(&a, &b, &gothic, &theta, d).map_err(fail)?;
    let (ar, br) = quotient::reduce_rows(&a0, &b0, quotient::DEFAULT_REDUCE_TOL);
    Ok((a0, b0, ar, br))
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let h = 3f64.sqrt() / 2.0;
    let mut worst = 0.0f64;

    // the 2-dim representation at θ = π/3 in the reference basis
    let rep = d4::two_dim(FRAC_PI_3);
    let expect_ts2 = linalg::real_matrix(&[&[-0.5, -h], &[-h, 0.5]]);
    let expect_ts3 = linalg::real_matrix(&[&[h, -0.5], &[-0.5, -h]]);
    let dev = linalg::max_abs_diff(rep.matrix(d4::TS2).map_err(fail)?, &expect_ts2)
        .max(linalg::max_abs_diff(rep.matrix(d4::TS3).map_err(fail)?, &expect_ts3));
    ensure(dev <= 1e-12, format!("2-dim matrices at θ = π/3 deviate by {dev:.2e}"))?;

    // vertex fixed by ts3: both slots in one orbit
    let (_, _, a, b) = neumann_pair(&rep, [d4::E, d4::TS3], true)?;
    worst = worst.max(rows_match(&a, &b, &[re(&[1.0 - h, 0.5, 0.0, 0.0]), re(&[0.0, 0.0, -1.0 - h, 0.5])], 1e-12).map_err(|e| format!("v4: {e}"))?);

    // vertices fixed by ts2
    let (_, _, a, b) = neumann_pair(&rep, [d4::E, d4::TS2], true)?;
    worst = worst.max(rows_match(&a, &b, &[re(&[1.5, h, 0.0, 0.0]), re(&[0.0, 0.0, -0.5, h])], 1e-12).map_err(|e| format!("v1/v2: {e}"))?);

    // factor-of-i vertex of the one-dimensional rep on the rotation subgroup
    let (_, _, a, b) = neumann_pair(&d4::r3(), [d4::E, d4::S], false)?;
    let i = c(0.0, 1.0);
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    worst = worst.max(rows_match(&a, &b, &[vec![one, i, zero, zero], vec![zero, zero, one, -i]], 1e-12).map_err(|e| format!("R3 vertex: {e}"))?);

    // Dirichlet pair: unreduced (2; 0), (0; 0) reduced to one Dirichlet row
    let (a0, b0, a, b) = neumann_pair(&d4::r1(), [d4::E, d4::T], true)?;
    let dev = linalg::max_abs_diff(&a0, &linalg::real_matrix(&[&[2.0], &[0.0]])).max(linalg::max_abs(&b0));
    ensure(dev <= 1e-12, format!("v5 unreduced deviates by {dev:.2e}"))?;
    worst = worst.max(rows_match(&a, &b, &[re(&[2.0, 0.0])], 1e-12).map_err(|e| format!("v5: {e}"))?);

    // in the full R1 pipeline the swapped pairs at a side midpoint give the
    // row (2),(0) on each copy and reduce to Dirichlet conditions
    let bundle = examples::square_d4(1.0, 0.62, 0.41, 0.0).map_err(fail)?;
    let recipe = QuotientRecipe::new(&bundle.action, &d4::r1(), &RecipeOptions::default()).map_err(fail)?;
    let q = quotient::build_quotient(&recipe, quotient::DEFAULT_REDUCE_TOL).map_err(fail)?;
    let dirichlet = q.vertices.iter().zip(q.graph.vertices()).any(|(p, v)| {
        let (a0, b0) = (&p.a_unreduced, &p.b_unreduced);
        let two_rows = (0..a0.nrows())
            .filter(|&r| {
                let big = a0.row(r).iter().filter(|z| (z.norm() - 2.0).abs() < 1e-12).count();
                let small = a0.row(r).iter().filter(|z| z.norm() < 1e-12).count();
                big == 1 && small == a0.ncols() - 1 && b0.row(r).iter().all(|z| z.norm() < 1e-12)
            })
            .count();
        two_rows == v.edge_order.len() && linalg::max_abs(&v.b) < 1e-12 && linalg::rank(&v.a, 1e-10) == v.edge_order.len()
    });
    ensure(dirichlet, "R1 quotient of square-d4 has no vertex reducing (2),(0) rows to Dirichlet")?;
    within(start.elapsed(), 1.0)?;
    Ok(format!("v4, v1/v2, R3 and v5 conditions reproduced (max deviation {worst:.1e})"))
}

// ---- criterion 2 -----------------------------------------------------------

fn criterion_2() -> Check {
    use ConditionKind::*;
    let start = Instant::now();
    let k_max = 30.0;
    let settings = SolverSettings::default();
    let mut worst = 0.0f64;
    for (left, right, offset, zero) in [(Dirichlet, Dirichlet, 0.0, 0), (Neumann, Neumann, 0.0, 1), (Dirichlet, Neumann, 0.5, 0)] {
        let g = QuantumGraph::from_edges(&[left, right], &[(0, 1, 1.0)]).map_err(fail)?;
        let s = spectral::find_spectrum(&g, k_max, &settings).map_err(fail)?;
        let expected: Vec<f64> = (0..).map(|n| (n as f64 + offset) * PI).filter(|&k| k > 0.0).take_while(|&k| k <= k_max).collect();
        ensure(s.zero_mode == zero, format!("{left:?}-{right:?}: zero mode {} expected {zero}", s.zero_mode))?;
        ensure(
            s.entries.len() == expected.len() && s.entries.iter().all(|e| e.multiplicity == 1),
            format!("{left:?}-{right:?}: {} entries, expected {}", s.entries.len(), expected.len()),
        )?;
        for (e, k) in s.entries.iter().zip(&expected) {
            worst = worst.max((e.k - k).abs());
        }
    }
    ensure(worst <= 1e-9, format!("max deviation {worst:.2e}"))?;
    within(start.elapsed(), 5.0)?;
    Ok(format!("D-D, N-N, D-N up to k = 30 (max deviation {worst:.1e}, {:.2}s)", start.elapsed().as_secs_f64()))
}

// ---- criterion 3 -----------------------------------------------------------

fn quotient_spectrum(action: &isospec_core::action::GraphAction, rep: &Representation, opts: &RecipeOptions, k_max: f64) -> std::result::Result<Spectrum, String> {
    let recipe = QuotientRecipe::new(action, rep, opts).map_err(fail)?;
    let q = quotient::build_quotient(&recipe, quotient::DEFAULT_REDUCE_TOL).map_err(fail)?;
    spectral::find_spectrum(&q.graph, k_max, &SolverSettings::default()).map_err(fail)
}

fn named<'a>(bundle: &'a examples::ExampleBundle, name: &str) -> &'a Representation {
    &bundle.reps.iter().find(|(n, _)| n == name).expect("bundled representation").1
}

fn criterion_3() -> Check {
    let z = examples::interval_z2(1.0).map_err(fail)?;
    let k_max = 30.0;
    let full = spectral::find_spectrum(&z.graph, k_max, &SolverSettings::default()).map_err(fail)?;
    let even = quotient_spectrum(&z.action, named(&z, "trivial"), &RecipeOptions::default(), k_max)?;
    let odd = quotient_spectrum(&z.action, named(&z, "sign"), &RecipeOptions::default(), k_max)?;
    let union = Spectrum::union(&[(&even, 1), (&odd, 1)], 1e-9);
    let r = spectral::compare_spectra(&full, &union, 1e-8);
    ensure(r.pass, format!("mismatch: {:?} / {:?}, zero modes {} / {}", r.unmatched_a, r.unmatched_b, r.zero_mode_a, r.zero_mode_b))?;
    Ok(format!("{} eigenvalues of the length-2 interval split {} + {} (max deviation {:.1e})", full.count(), even.count(), odd.count(), r.max_deviation))
}

// ---- criteria 4 and 5 --------------------------------------------------------

const TRIPLE_KMAX: f64 = 18.0;

fn pairwise(spectra: &[(String, Spectrum)], tol: f64, min_count: usize) -> std::result::Result<f64, String> {
    let mut worst = 0.0f64;
    for (name, s) in spectra {
        ensure(s.count() >= min_count, format!("{name}: only {} eigenvalues", s.count()))?;
    }
    for i in 0..spectra.len() {
        for j in i + 1..spectra.len() {
            let r = spectral::compare_spectra(&spectra[i].1, &spectra[j].1, tol);
            ensure(r.pass, format!("{} vs {}: unmatched {:?} / {:?}", spectra[i].0, spectra[j].0, r.unmatched_a, r.unmatched_b))?;
            ensure(r.matched.iter().map(|m| m.multiplicity_a).sum::<usize>() >= min_count, "too few matched eigenvalues")?;
            worst = worst.max(r.max_deviation);
        }
    }
    Ok(worst)
}

fn triple(bundle: &examples::ExampleBundle) -> std::result::Result<Vec<(String, Spectrum)>, String> {
    ["R1", "R2", "R3"]
        .iter()
        .map(|&n| Ok((n.to_string(), quotient_spectrum(&bundle.action, named(bundle, n), &RecipeOptions::default(), TRIPLE_KMAX)?)))
        .collect()
}

fn criterion_4(bundle: &examples::ExampleBundle) -> Check {
    let start = Instant::now();
    let spectra = triple(bundle)?;
    let worst = pairwise(&spectra, 1e-7, 20)?;
    within(start.elapsed(), 60.0)?;
    Ok(format!(
        "R1, R2, R3 quotients agree on {} eigenvalues up to k = {TRIPLE_KMAX} (max deviation {worst:.1e}, {:.2}s)",
        spectra[0].1.count(),
        start.elapsed().as_secs_f64()
    ))
}

fn criterion_5(bundle: &examples::ExampleBundle) -> Check {
    let mut spectra = Vec::new();
    for (label, theta) in [("0", 0.0), ("π/3", FRAC_PI_3), ("3π/4", 0.75 * PI)] {
        let s = quotient_spectrum(&bundle.action, &d4::two_dim(theta), &RecipeOptions::default(), TRIPLE_KMAX)?;
        spectra.push((format!("2-dim θ = {label}"), s));
    }
    let worst = pairwise(&spectra, 1e-7, 20)?;
    let reference = quotient_spectrum(&bundle.action, &d4::r1(), &RecipeOptions::default(), TRIPLE_KMAX)?;
    spectra.push(("R1".to_string(), reference));
    let worst = worst.max(pairwise(&spectra, 1e-7, 20)?);
    Ok(format!("θ ∈ {{0, π/3, 3π/4}} mutually isospectral and equal to the R1 quotient (max deviation {worst:.1e})"))
}

// ---- criterion 6 -----------------------------------------------------------

fn criterion_6(bundle: &examples::ExampleBundle) -> Check {
    let start = Instant::now();
    let k_max = 12.0;
    let full = spectral::find_spectrum(&bundle.graph, k_max, &SolverSettings::default()).map_err(fail)?;
    let mut parts = Vec::new();
    for (name, rep) in d4::irreps().map_err(fail)? {
        parts.push((name, rep.dim(), quotient_spectrum(&bundle.action, &rep, &RecipeOptions::default(), k_max)?));
    }
    let weighted: Vec<(&Spectrum, usize)> = parts.iter().map(|(_, d, s)| (s, *d)).collect();
    let union = Spectrum::union(&weighted, 1e-9);
    let r = spectral::compare_spectra(&full, &union, 1e-7);
    ensure(r.pass, format!("unmatched {:?} / {:?}, zero modes {} / {}", r.unmatched_a, r.unmatched_b, r.zero_mode_a, r.zero_mode_b))?;
    within(start.elapsed(), 120.0)?;
    let counts: Vec<String> = parts.iter().map(|(n, _, s)| format!("{n}:{}", s.count())).collect();
    Ok(format!(
        "{} eigenvalues of Γ up to k = 12 = Σ dim·quotients [{}] (max deviation {:.1e}, {:.2}s)",
        full.count(),
        counts.join(" "),
        r.max_deviation,
        start.elapsed().as_secs_f64()
    ))
}

// ---- criterion 7 -----------------------------------------------------------

fn criterion_7(bundle: &examples::ExampleBundle) -> Check {
    ensure(bundle.graph.is_self_adjoint(1e-10), "square-d4 is not self-adjoint")?;
    let mut reps: Vec<(String, Representation, Option<f64>)> = bundle.reps.iter().map(|(n, r)| (n.clone(), r.clone(), None)).collect();
    for theta in [FRAC_PI_3, 0.75 * PI] {
        reps.push((format!("E rotated by {theta:.4}"), d4::two_dim(0.0), Some(theta)));
    }
    let skew = linalg::real_matrix(&[&[1.0, 0.7], &[0.2, 1.3]]);
    reps.push(("E conjugated".into(), d4::two_dim(0.0).conjugate_by(&skew).map_err(fail)?, None));
    for (name, rep, theta) in &reps {
        let opts = RecipeOptions { global_basis: theta.map(linalg::rotation), ..RecipeOptions::default() };
        let recipe = QuotientRecipe::new(&bundle.action, rep, &opts).map_err(fail)?;
        let q = quotient::build_quotient(&recipe, quotient::DEFAULT_REDUCE_TOL).map_err(fail)?;
        let class = quotient::classify(&q.graph, quotient::DEFAULT_REDUCE_TOL);
        ensure(class.kind == QuotientKind::ProperAndExact, format!("{name}: {:?}", class.kind))?;
    }
    Ok(format!("{} quotients are proper and exact", reps.len()))
}

// ---- criterion 8 -----------------------------------------------------------

fn quaternion_group() -> FiniteGroup {
    // elements ±1, ±i, ±j, ±k as 2·unit + sign
    let unit = |a: usize, b: usize| -> (usize, bool) {
        const T: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        T[a][b]
    };
    let left = |q: usize| -> Vec<usize> {
        (0..8)
            .map(|x| {
                let (u, neg) = unit(q / 2, x / 2);
                2 * u + ((q % 2 == 1) ^ (x % 2 == 1) ^ neg) as usize
            })
            .collect()
    };
    FiniteGroup::from_permutations(&[left(2), left(4)]).expect("quaternion group")
}

fn group_catalog() -> Vec<(String, Arc<FiniteGroup>)> {
    let mut out: Vec<(String, FiniteGroup)> = Vec::new();
    for n in [1, 2, 3, 4, 5, 6, 7, 8, 12, 16] {
        out.push((format!("C{n}"), FiniteGroup::cyclic(n).unwrap()));
    }
    for n in [2, 3, 4, 5, 6, 8] {
        out.push((format!("D{n}"), FiniteGroup::dihedral(n).unwrap()));
    }
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let mut power = c2.clone();
    for k in 2..=4 {
        power = power.direct_product(&c2).unwrap();
        out.push((format!("C2^{k}"), power.clone()));
    }
    out.push(("C2xC4".into(), c2.direct_product(&FiniteGroup::cyclic(4).unwrap()).unwrap()));
    out.push(("C3xC3".into(), FiniteGroup::cyclic(3).unwrap().direct_product(&FiniteGroup::cyclic(3).unwrap()).unwrap()));
    out.push(("C2xD4".into(), c2.direct_product(&FiniteGroup::dihedral(4).unwrap()).unwrap()));
    out.push(("Q8".into(), quaternion_group()));
    out.push(("A4".into(), FiniteGroup::from_permutations(&[vec![1, 2, 0, 3], vec![0, 2, 3, 1]]).unwrap()));
    out.into_iter().map(|(n, g)| (n, Arc::new(g))).collect()
}

fn random_subgroup(group: &Arc<FiniteGroup>, rng: &mut ChaCha8Rng) -> SubgroupRef {
    let gens: Vec<usize> = (0..rng.random_range(0..=2)).map(|_| rng.random_range(0..group.order())).collect();
    SubgroupRef::generate(group.clone(), &gens).unwrap()
}

fn random_invertible(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    loop {
        let a = 0.25 / (d as f64).sqrt();
        let m = linalg::identity(d) + CMatrix::from_fn(d, d, |_, _| c(rng.random_range(-a..a), rng.random_range(-a..a)));
        let s = linalg::singular_values(&m);
        if s[s.len() - 1] > 0.2 * s[0] {
            return m;
        }
    }
}

/// Monomial representation induced from a random character of a random
/// cyclic subgroup, optionally plus a one-dimensional summand, in a random basis.
fn random_rep(domain: &SubgroupRef, rng: &mut ChaCha8Rng) -> Representation {
    let group = domain.parent().clone();
    let x = domain.elements()[rng.random_range(0..domain.order())];
    let cyclic = SubgroupRef::generate(group.clone(), &[x]).unwrap();
    let n = cyclic.order();
    let m = rng.random_range(0..n);
    let mut values = vec![c(0.0, 0.0); n];
    let mut power = group.identity();
    for j in 0..n {
        let angle = 2.0 * PI * (m * j) as f64 / n as f64;
        values[cyclic.position(power).unwrap()] = Complex64::from_polar(1.0, angle);
        power = group.mul(power, x);
    }
    let mut rep = Representation::one_dim(cyclic, &values).unwrap().induce(domain).unwrap();
    if rng.random_bool(0.5) {
        rep = rep.direct_sum(&Representation::trivial(domain.clone(), 1).unwrap()).unwrap();
    }
    let basis = random_invertible(rep.dim(), rng);
    rep.conjugate_by(&basis).unwrap()
}

/// Induced character from the formula `(1/|H|) Σ_{x ∈ G, x⁻¹gx ∈ H} χ(x⁻¹gx)`.
fn induced_character_oracle(rep: &Representation) -> Vec<Complex64> {
    let group = rep.group();
    let chi = rep.character();
    let h = rep.domain().order() as f64;
    (0..group.order())
        .map(|g| {
            let mut sum = c(0.0, 0.0);
            for x in 0..group.order() {
                let y = group.mul(group.mul(group.inv(x), g), x);
                if let Some(v) = chi.at(y) {
                    sum += v;
                }
            }
            sum / h
        })
        .collect()
}

fn criterion_8() -> Check {
    let catalog = group_catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f40b);
    let mut worst = 0.0f64;
    let mut max_dim = 0;
    for trial in 0..100 {
        let (name, group) = &catalog[trial % catalog.len()];
        let sub = random_subgroup(group, &mut rng);
        let r = random_rep(&sub, &mut rng);
        let s = random_rep(&SubgroupRef::full(group.clone()), &mut rng);
        let induced = r.induce_to_parent().map_err(fail)?;
        let restricted = s.restrict(&sub).map_err(fail)?;
        let lhs = induced.character().inner_product(&s.character()).map_err(fail)?;
        let rhs = r.character().inner_product(&restricted.character()).map_err(fail)?;
        let oracle = induced_character_oracle(&r);
        let oracle_dev = induced.character().values().iter().zip(&oracle).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let dev = (lhs - rhs).norm();
        ensure(
            dev <= 1e-10 && oracle_dev <= 1e-10,
            format!("trial {trial} ({name}, |H| = {}): ⟨Ind R, S⟩ = {lhs}, ⟨R, Res S⟩ = {rhs}, induced character off by {oracle_dev:.2e}", sub.order()),
        )?;
        worst = worst.max(dev);
        max_dim = max_dim.max(induced.dim()).max(s.dim());
    }
    Ok(format!("100 random instances over {} groups of order ≤ 16 (max deviation {worst:.1e}, dims up to {max_dim})", catalog.len()))
}

// ---- criterion 9 -----------------------------------------------------------

fn criterion_9() -> Check {
    let k_max = 10.0;
    let settings = SolverSettings::default();
    let y = examples::ygraph(1.0, 1.0, 0.7).map_err(fail)?;
    let s = spectral::find_spectrum(&y.graph, k_max, &settings).map_err(fail)?;
    let expected: Vec<f64> = (1..).map(|n| n as f64 * PI).take_while(|&k| k <= k_max).collect();
    ensure(s.zero_mode == 0, "commensurable case has a zero mode")?;
    ensure(
        s.entries.len() == expected.len() && s.entries.iter().all(|e| e.multiplicity == 1),
        format!("commensurable case: {:?}", s.entries),
    )?;
    let dev = s.entries.iter().zip(&expected).map(|(e, k)| (e.k - k).abs()).fold(0.0, f64::max);
    ensure(dev <= 1e-8, format!("commensurable case deviates by {dev:.2e}"))?;
    let y = examples::ygraph(1.0, 2f64.sqrt(), 0.7).map_err(fail)?;
    let s = spectral::find_spectrum(&y.graph, k_max, &settings).map_err(fail)?;
    ensure(s.entries.is_empty() && s.zero_mode == 0, format!("incommensurable case: {:?}", s.entries))?;
    Ok(format!("lengths (1, 1) give {{π, 2π, 3π}} (deviation {dev:.1e}); (1, √2) give nothing below k = 10"))
}

// ---- criterion 10 ----------------------------------------------------------

fn criterion_10() -> Check {
    let z = examples::interval_z2(1.0).map_err(fail)?;
    let (even, odd) = (named(&z, "trivial"), named(&z, "sign"));
    let s = spectral::find_spectrum(&z.graph, 40.0, &SolverSettings::default()).map_err(fail)?;
    ensure(s.count() >= 10, "fewer than 10 eigenvalues")?;
    for (n, e) in s.entries.iter().take(10).enumerate() {
        // the n-th mode cos(nπ(x + 1)/2) on [-1, 1] has parity (-1)^n
        let n = n + 1;
        let m_even = spectral::rep_multiplicity(&z.action, even, e.k, 1e-8, 1e-6).map_err(fail)?;
        let m_odd = spectral::rep_multiplicity(&z.action, odd, e.k, 1e-8, 1e-6).map_err(fail)?;
        let want = if n % 2 == 0 { (1, 0) } else { (0, 1) };
        ensure(
            (m_even, m_odd) == want && m_even + m_odd == e.multiplicity,
            format!("k = {:.6}: trivial {m_even}, sign {m_odd}, multiplicity {}", e.k, e.multiplicity),
        )?;
    }
    Ok("first 10 eigenvalues split by parity, each entirely in one representation".into())
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn main() {
    let bundle = examples::square_d4(1.0, 0.62, 0.41, 0.0).expect("square-d4 example");
    let criteria: Vec<Criterion> = vec![
        ("boundary-condition fixtures", Box::new(criterion_1)),
        ("analytic interval spectra", Box::new(criterion_2)),
        ("Z2 folding identity", Box::new(criterion_3)),
        ("isospectral triple", Box::new(|| criterion_4(&bundle))),
        ("θ-family invariance", Box::new(|| criterion_5(&bundle))),
        ("regular decomposition", Box::new(|| criterion_6(&bundle))),
        ("rank law", Box::new(|| criterion_7(&bundle))),
        ("Frobenius reciprocity", Box::new(criterion_8)),
        ("commensurability", Box::new(criterion_9)),
        ("representation-resolved multiplicity", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
