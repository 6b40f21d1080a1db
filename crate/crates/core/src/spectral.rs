//! Eigenvalues `λ = k²` of quantum graphs from the secular matrix.
//!
//! On edge `e` an eigenfunction is `α cos kx + β sin kx` with `x` measured
//! from the source. Columns `2e` and `2e + 1` of the secular matrix hold `α_e`
//! and `β_e`; rows are the vertex conditions in stored order.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::GraphAction;
use crate::error::{Error, Result};
use crate::graph::{End, QuantumGraph};
use crate::linalg::{self, c, CMatrix};
use crate::rep::Representation;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub k_floor: f64,
    /// `None` means `π / (4 · total length)`.
    pub scan_step: Option<f64>,
    pub accept_tol: f64,
    pub refine_tol: f64,
    /// Repeat the scan with half the step and keep the finer result when the
    /// two disagree.
    pub halved_rescan: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self { k_floor: 1e-6, scan_step: None, accept_tol: 1e-8, refine_tol: 1e-12, halved_rescan: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub k: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Strictly increasing in `k`, all within `(0, k_max]`.
    pub entries: Vec<SpectrumEntry>,
    /// Multiplicity of `λ = 0`; zero when there is no zero mode.
    pub zero_mode: usize,
    pub k_max: f64,
    pub settings: SolverSettings,
    /// Local minima of the normalized smallest singular value that were not
    /// accepted, as `(k, σ_min / σ_max)`.
    pub near_misses: Vec<(f64, f64)>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Spectrum {
    pub fn has_zero_mode(&self) -> bool {
        self.zero_mode > 0
    }

    /// Multiset of positive `k` values, each repeated by multiplicity.
    pub fn flattened(&self) -> Vec<f64> {
        self.entries.iter().flat_map(|e| std::iter::repeat_n(e.k, e.multiplicity)).collect()
    }

    pub fn count(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// First `n` eigenvalues counted with multiplicity, truncating the last
    /// entry if needed.
    pub fn first(&self, n: usize) -> Vec<SpectrumEntry> {
        let mut out = Vec::new();
        let mut left = n;
        for e in &self.entries {
            if left == 0 {
                break;
            }
            let m = e.multiplicity.min(left);
            out.push(SpectrumEntry { k: e.k, multiplicity: m });
            left -= m;
        }
        out
    }

    /// Weighted multiset union; entries closer than `merge_tol` are merged.
    /// The result is cut at the smallest `k_max` of the parts.
    pub fn union(parts: &[(&Spectrum, usize)], merge_tol: f64) -> Spectrum {
        let k_max = parts.iter().map(|(s, _)| s.k_max).fold(f64::INFINITY, f64::min);
        let mut all: Vec<SpectrumEntry> = parts
            .iter()
            .flat_map(|(s, w)| s.entries.iter().map(move |e| SpectrumEntry { k: e.k, multiplicity: e.multiplicity * w }))
            .filter(|e| e.k <= k_max && e.multiplicity > 0)
            .collect();
        all.sort_by(|a, b| a.k.total_cmp(&b.k));
        Spectrum {
            entries: coalesce(&all, merge_tol),
            zero_mode: parts.iter().map(|(s, w)| s.zero_mode * w).sum(),
            k_max,
            settings: parts.first().map(|(s, _)| s.settings.clone()).unwrap_or_default(),
            near_misses: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn worst_severity(&self) -> Option<Severity> {
        self.diagnostics.iter().map(|d| d.severity).max()
    }
}

/// Value and outgoing-derivative coefficients `((v_α, v_β), (d_α, d_β))` of an
/// edge end.
fn end_coefficients(end: End, k: f64, length: f64) -> ([f64; 2], [f64; 2]) {
    match end {
        End::Source => ([1.0, 0.0], [0.0, k]),
        End::Target => {
            let (s, co) = (k * length).sin_cos();
            ([co, s], [k * s, -k * co])
        }
    }
}

fn zero_mode_coefficients(end: End, length: f64) -> ([f64; 2], [f64; 2]) {
    match end {
        End::Source => ([1.0, 0.0], [0.0, 1.0]),
        End::Target => ([1.0, length], [0.0, -1.0]),
    }
}

fn assemble(graph: &QuantumGraph, coeffs: impl Fn(End, f64) -> ([f64; 2], [f64; 2])) -> CMatrix {
    let conditions: Vec<(CMatrix, CMatrix)> = graph.vertices().iter().map(|v| (v.a.clone(), v.b.clone())).collect();
    assemble_rows(graph, &conditions, coeffs)
}

fn assemble_rows(graph: &QuantumGraph, conditions: &[(CMatrix, CMatrix)], coeffs: impl Fn(End, f64) -> ([f64; 2], [f64; 2])) -> CMatrix {
    let rows: usize = conditions.iter().map(|(a, _)| a.nrows()).sum();
    let mut m = CMatrix::zeros(rows, 2 * graph.edges().len());
    let mut r0 = 0;
    for (v, (ca, cb)) in graph.vertices().iter().zip(conditions) {
        for (j, &e) in v.edge_order.iter().enumerate() {
            let end = graph.end_at(e, v.id).expect("edge_order lists incident edges");
            let (val, der) = coeffs(end, graph.edge(e).length);
            for r in 0..ca.nrows() {
                let (a, b) = (ca[(r, j)], cb[(r, j)]);
                m[(r0 + r, 2 * e)] += a * val[0] + b * der[0];
                m[(r0 + r, 2 * e + 1)] += a * val[1] + b * der[1];
            }
        }
        r0 += ca.nrows();
    }
    m
}

/// Secular matrix of shape `(Σ rows) × 2|E|` at wavenumber `k > 0`.
pub fn secular_matrix(graph: &QuantumGraph, k: f64) -> Result<CMatrix> {
    if k.is_nan() || k <= 0.0 {
        return Err(Error::OutOfRange(format!("secular matrix needs k > 0, got {k}")));
    }
    Ok(assemble(graph, |end, l| end_coefficients(end, k, l)))
}

/// Secular matrix for `λ = 0` with the linear ansatz `α + βx`.
pub fn zero_mode_matrix(graph: &QuantumGraph) -> CMatrix {
    assemble(graph, zero_mode_coefficients)
}

fn nullity(m: &CMatrix, rel_tol: f64) -> usize {
    m.ncols() - linalg::rank(m, rel_tol)
}

/// Dimension of the eigenspace at `k`; 0 when `k` is not an eigenvalue.
pub fn multiplicity_at(graph: &QuantumGraph, k: f64, rel_tol: f64) -> Result<usize> {
    secular_matrix(graph, k)?;
    Ok(nullity(&balanced_matrix(graph, k), rel_tol))
}

/// Secular matrix with the rows of `(A | k·B)` orthonormalized per vertex,
/// acting on values and on derivatives divided by `k`. Row operations leave
/// the null space unchanged, while all singular values stay of order one for
/// large `k`.
fn balanced_matrix(graph: &QuantumGraph, k: f64) -> CMatrix {
    let conditions: Vec<(CMatrix, CMatrix)> = graph
        .vertices()
        .iter()
        .map(|v| {
            let n = v.a.ncols();
            let w = linalg::hstack(&v.a, &v.b.map(|z| z * k));
            let (_, s, right) = linalg::sorted_svd(&w);
            let top = s.first().copied().unwrap_or(0.0);
            let r = s.iter().filter(|&&x| x > 1e-13 * top).count();
            let rows = right.columns(0, r).adjoint();
            (rows.columns(0, n).into_owned(), rows.columns(n, n).into_owned())
        })
        .collect();
    assemble_rows(graph, &conditions, |end, l| {
        let (val, der) = end_coefficients(end, k, l);
        (val, [der[0] / k, der[1] / k])
    })
}

/// `σ_min / σ_max` with the singular values of the balanced matrix.
fn normalized_min(graph: &QuantumGraph, k: f64) -> (f64, Vec<f64>) {
    let s = linalg::singular_values(&balanced_matrix(graph, k));
    let top = s.first().copied().unwrap_or(0.0);
    let bottom = s.last().copied().unwrap_or(0.0);
    (if top > 0.0 { bottom / top } else { 0.0 }, s)
}

/// Singular values of the balanced matrix in descending order together with
/// their central-difference derivatives in `k`.
fn singular_slopes(graph: &QuantumGraph, k: f64) -> (Vec<f64>, Vec<f64>) {
    let h = 1e-6 * k.max(1.0);
    let s = linalg::singular_values(&balanced_matrix(graph, k));
    let up = linalg::singular_values(&balanced_matrix(graph, k + h));
    let down = linalg::singular_values(&balanced_matrix(graph, (k - h).max(0.5 * k)));
    let width = k + h - (k - h).max(0.5 * k);
    let rates = up.iter().zip(&down).map(|(u, d)| (u - d) / width).collect();
    (s, rates)
}

/// `σ_min / σ_max` and its derivative in `k`.
fn normalized_min_slope(graph: &QuantumGraph, k: f64) -> (f64, f64) {
    let (s, r) = singular_slopes(graph, k);
    let n = s.len();
    if n == 0 || s[0] <= 0.0 {
        return (0.0, 0.0);
    }
    let (top, bottom) = (s[0], s[n - 1]);
    (bottom / top, (r[n - 1] * top - bottom * r[0]) / (top * top))
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (a + b);
    [(x1, f1), (x2, f2), (mid, f(mid))].into_iter().min_by(|p, q| p.1.total_cmp(&q.1)).unwrap().0
}

struct Root {
    k: f64,
    multiplicity: usize,
    ratio: f64,
}

/// Scan `[lo, hi]` on a grid of spacing `step`, refine local minima and
/// return accepted roots plus rejected minima.
///
/// A minimum is bracketed either by the slope turning from negative to
/// positive between neighbouring grid points or by a grid value below both
/// neighbours. The slope test also catches narrow dips that fall between grid
/// points while a neighbouring root pulls the sampled values down.
fn scan(graph: &QuantumGraph, lo: f64, hi: f64, step: f64, s: &SolverSettings, depth: usize) -> (Vec<Root>, Vec<(f64, f64)>) {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let grid: Vec<f64> = (0..=n).map(|i| if i == n { hi } else { lo + i as f64 * step }).collect();
    let probes: Vec<(f64, f64)> = grid.par_iter().map(|&k| normalized_min_slope(graph, k)).collect();
    let f = |k: f64| normalized_min(graph, k).0;
    let sloped = |i: usize| probes[i].1 < 0.0 && probes[i + 1].1 > 0.0;
    let mut brackets: Vec<(f64, f64)> = Vec::new();
    for i in 0..n {
        if sloped(i) {
            brackets.push((grid[i], grid[i + 1]));
        }
    }
    if probes[n].1 < 0.0 {
        brackets.push((grid[n - 1], grid[n]));
    }
    for i in 1..n {
        if sloped(i - 1) || sloped(i) {
            continue;
        }
        if probes[i].0 <= probes[i - 1].0 && probes[i].0 <= probes[i + 1].0 {
            brackets.push((grid[i - 1], grid[i + 1]));
        }
    }
    let found: Vec<(f64, f64, Vec<f64>)> = brackets
        .par_iter()
        .map(|&(a, b)| {
            let k = golden_section(&f, a, b, s.refine_tol);
            let (ratio, sv) = normalized_min(graph, k);
            (k, ratio, sv)
        })
        .collect();
    let mut roots = Vec::new();
    let mut misses = Vec::new();
    for (k, ratio, sv) in found {
        // a minimum pinned at the floor belongs to the zero mode
        if k < s.k_floor * 1.5 {
            continue;
        }
        if ratio >= s.accept_tol {
            misses.push((k, ratio));
            continue;
        }
        let top = sv[0];
        let multiplicity = 2 * graph.edges().len() - sv.iter().filter(|&&x| x >= s.accept_tol * top).count();
        roots.push(Root { k, multiplicity, ratio });
        // the next singular value may belong to a root closer than the grid
        // spacing; extrapolate its branch linearly and rescan around the zero
        if depth < 3 && multiplicity < sv.len() {
            let (sv, rates) = singular_slopes(graph, k);
            let j = sv.len().saturating_sub(multiplicity + 1);
            if rates[j] != 0.0 {
                let distance = sv[j] / rates[j].abs();
                if distance < 2.0 * step {
                    let center = k - rates[j].signum() * distance;
                    let (a, b) = ((center - 0.5 * step).max(s.k_floor), (center + 0.5 * step).min(hi));
                    if a < b {
                        let (sub, sub_miss) = scan(graph, a, b, step / 16.0, s, depth + 1);
                        roots.extend(sub);
                        misses.extend(sub_miss);
                    }
                }
            }
        }
    }
    (roots, misses)
}

fn dedupe(mut roots: Vec<Root>, tol: f64) -> Vec<Root> {
    roots.sort_by(|a, b| a.k.total_cmp(&b.k));
    let mut out: Vec<Root> = Vec::new();
    for r in roots {
        match out.last_mut() {
            Some(last) if (r.k - last.k).abs() <= tol => {
                if r.ratio < last.ratio {
                    *last = r;
                }
            }
            _ => out.push(r),
        }
    }
    out
}

/// All eigenvalues with `k_floor ≤ k ≤ k_max`, plus the zero mode.
pub fn find_spectrum(graph: &QuantumGraph, k_max: f64, settings: &SolverSettings) -> Result<Spectrum> {
    if k_max.is_nan() || k_max <= 0.0 {
        return Err(Error::OutOfRange(format!("k_max must be positive, got {k_max}")));
    }
    let mut diagnostics = Vec::new();
    let rows: usize = graph.vertices().iter().map(|v| v.a.nrows()).sum();
    let cols = 2 * graph.edges().len();
    if rows < cols {
        diagnostics.push(Diagnostic {
            severity: Severity::Error,
            message: format!("underdetermined conditions: {rows} rows for {cols} unknowns"),
        });
    }
    let zero = zero_mode_matrix(graph);
    let zero_mode = if cols == 0 || rows < cols { 0 } else { nullity(&zero, settings.accept_tol) };
    if cols == 0 || rows < cols || k_max < settings.k_floor {
        return Ok(Spectrum { entries: Vec::new(), zero_mode, k_max, settings: settings.clone(), near_misses: Vec::new(), diagnostics });
    }
    let step = settings.scan_step.unwrap_or(std::f64::consts::PI / (4.0 * graph.total_length()));
    let run = |step: f64| {
        let (roots, misses) = scan(graph, settings.k_floor, k_max, step, settings, 0);
        (dedupe(roots, 1e-8), misses)
    };
    let (mut roots, mut misses) = run(step);
    if settings.halved_rescan {
        let (fine, fine_misses) = run(step / 2.0);
        let count = |r: &[Root]| r.iter().map(|x| x.multiplicity).sum::<usize>();
        if count(&fine) != count(&roots) {
            diagnostics.push(Diagnostic {
                severity: Severity::Warning,
                message: format!("halved-step rescan found {} eigenvalues instead of {}", count(&fine), count(&roots)),
            });
            roots = fine;
            misses = fine_misses;
        }
    }
    misses.sort_by(|a, b| a.0.total_cmp(&b.0));
    misses.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-8);
    let entries: Vec<SpectrumEntry> = roots.iter().map(|r| SpectrumEntry { k: r.k, multiplicity: r.multiplicity }).collect();
    let mut spectrum = Spectrum { entries, zero_mode, k_max, settings: settings.clone(), near_misses: misses, diagnostics };
    if graph.is_self_adjoint(1e-10) {
        if let Some(d) = weyl_check(&spectrum, graph) {
            spectrum.diagnostics.push(d);
        }
    }
    Ok(spectrum)
}

/// Compares the eigenvalue count with `total_length · k / π` at every
/// eigenvalue and at `k_max`.
pub fn weyl_check(spectrum: &Spectrum, graph: &QuantumGraph) -> Option<Diagnostic> {
    let bound = (graph.vertices().len() + 2) as f64;
    let length = graph.total_length();
    let mut count = spectrum.zero_mode as f64;
    let mut worst: (f64, f64) = (0.0, 0.0);
    let mut probe = |k: f64, n: f64| {
        let dev = (n - length * k / std::f64::consts::PI).abs();
        if dev > worst.0 {
            worst = (dev, k);
        }
    };
    for e in &spectrum.entries {
        probe(e.k, count);
        count += e.multiplicity as f64;
        probe(e.k, count);
    }
    probe(spectrum.k_max, count);
    (worst.0 > bound).then(|| Diagnostic {
        severity: Severity::Warning,
        message: format!(
            "eigenvalue count deviates from the Weyl estimate by {:.2} at k = {:.6} (bound {bound}); consider a finer scan",
            worst.0, worst.1
        ),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub k_a: f64,
    pub k_b: f64,
    pub multiplicity_a: usize,
    pub multiplicity_b: usize,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub matched: Vec<MatchedPair>,
    pub unmatched_a: Vec<SpectrumEntry>,
    pub unmatched_b: Vec<SpectrumEntry>,
    pub max_deviation: f64,
    pub zero_mode_a: usize,
    pub zero_mode_b: usize,
    pub zero_mode_mismatch: bool,
    pub k_limit: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn coalesce(entries: &[SpectrumEntry], tol: f64) -> Vec<SpectrumEntry> {
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for e in entries {
        match out.last_mut() {
            Some(last) if e.k - last.0 <= tol => {
                last.2 += e.k * e.multiplicity as f64;
                last.1 += e.multiplicity;
            }
            _ => out.push((e.k, e.multiplicity, e.k * e.multiplicity as f64)),
        }
    }
    out.into_iter().map(|(_, m, s)| SpectrumEntry { k: s / m as f64, multiplicity: m }).collect()
}

/// Greedy monotone matching of the positive parts below the common `k_max`.
///
/// Entries within `tol` of each other inside one spectrum are merged first.
/// Unmatched entries within `tol` of the common bound are ignored. A zero-mode
/// difference is reported but does not fail the comparison.
pub fn compare_spectra(a: &Spectrum, b: &Spectrum, tol: f64) -> SpectrumReport {
    let k_limit = a.k_max.min(b.k_max);
    let prep = |s: &Spectrum| {
        let kept: Vec<SpectrumEntry> = s.entries.iter().copied().filter(|e| e.k <= k_limit + tol).collect();
        coalesce(&kept, tol)
    };
    let (ea, eb) = (prep(a), prep(b));
    let (mut i, mut j) = (0, 0);
    let mut matched = Vec::new();
    let (mut un_a, mut un_b) = (Vec::new(), Vec::new());
    while i < ea.len() && j < eb.len() {
        let dev = (ea[i].k - eb[j].k).abs();
        if dev <= tol {
            matched.push(MatchedPair {
                k_a: ea[i].k,
                k_b: eb[j].k,
                multiplicity_a: ea[i].multiplicity,
                multiplicity_b: eb[j].multiplicity,
                deviation: dev,
            });
            i += 1;
            j += 1;
        } else if ea[i].k < eb[j].k {
            un_a.push(ea[i]);
            i += 1;
        } else {
            un_b.push(eb[j]);
            j += 1;
        }
    }
    un_a.extend_from_slice(&ea[i..]);
    un_b.extend_from_slice(&eb[j..]);
    let near_bound = |e: &SpectrumEntry| (e.k - k_limit).abs() <= tol || e.k > k_limit;
    un_a.retain(|e| !near_bound(e));
    un_b.retain(|e| !near_bound(e));
    let max_deviation = matched.iter().map(|m| m.deviation).fold(0.0, f64::max);
    let mult_ok = matched.iter().all(|m| m.multiplicity_a == m.multiplicity_b);
    SpectrumReport {
        pass: un_a.is_empty() && un_b.is_empty() && mult_ok && max_deviation <= tol,
        matched,
        unmatched_a: un_a,
        unmatched_b: un_b,
        max_deviation,
        zero_mode_a: a.zero_mode,
        zero_mode_b: b.zero_mode,
        zero_mode_mismatch: a.zero_mode != b.zero_mode,
        k_limit,
        tolerance: tol,
    }
}

/// Transport of ansatz coefficients under `g`: the function on `e` is moved
/// to `g·e`, reversed when `g` flips the edge.
pub fn transport_matrix(action: &GraphAction, g: usize, k: f64) -> CMatrix {
    let graph = action.graph();
    let n = graph.edges().len();
    let mut t = CMatrix::zeros(2 * n, 2 * n);
    for e in graph.edges() {
        let img = action.edge(g, e.id);
        let block = if action.flip(g, e.id) {
            let (s, co) = (k * e.length).sin_cos();
            [[co, s], [s, -co]]
        } else {
            [[1.0, 0.0], [0.0, 1.0]]
        };
        for (r, row) in block.iter().enumerate() {
            for (col, &x) in row.iter().enumerate() {
                t[(2 * img + r, 2 * e.id + col)] = c(x, 0.0);
            }
        }
    }
    t
}

/// Character of the acting group on the eigenspace at `k`, listed per
/// acting element.
pub fn eigenspace_character(action: &GraphAction, k: f64, rel_tol: f64, tol: f64) -> Result<Vec<Complex64>> {
    let graph = action.graph();
    secular_matrix(graph, k)?;
    let basis = linalg::nullspace(&balanced_matrix(graph, k), rel_tol);
    let proj_out = linalg::identity(basis.nrows()) - &basis * basis.adjoint();
    action
        .group()
        .elements()
        .iter()
        .map(|&g| {
            let moved = transport_matrix(action, g, k) * &basis;
            let leak = linalg::norm(&(&proj_out * &moved));
            if leak > tol {
                return Err(Error::Inconsistent(format!(
                    "eigenspace at k = {k} is not invariant under element {g} (defect {leak:.3e})"
                )));
            }
            Ok((basis.adjoint() * moved).trace())
        })
        .collect()
}

/// `⟨χ_R, χ_eigenspace⟩` over the representation's group, rounded.
pub fn rep_multiplicity(action: &GraphAction, rep: &Representation, k: f64, rel_tol: f64, tol: f64) -> Result<usize> {
    if !rep.domain().is_subgroup_of(action.group()) {
        return Err(Error::GroupMismatch("representation group does not act on the graph".into()));
    }
    let chi = eigenspace_character(action, k, rel_tol, tol)?;
    let rep_chi = rep.character();
    let mut sum = c(0.0, 0.0);
    for (i, &h) in rep.domain().elements().iter().enumerate() {
        let pos = action.group().position(h).expect("subgroup element");
        sum += rep_chi.values()[i].conj() * chi[pos];
    }
    let value = sum / rep.domain().order() as f64;
    let rounded = value.re.round();
    if (value - c(rounded, 0.0)).norm() > tol || rounded < 0.0 {
        return Err(Error::Inconsistent(format!("non-integral multiplicity {value} at k = {k}")));
    }
    Ok(rounded as usize)
}
