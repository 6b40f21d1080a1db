//! Quotient graphs `Γ/R` built from orbit representatives, adapted bases and
//! the per-vertex matrices `A_v = (A_ṽ ⊗ I_d)·G·Θ`, `B_v = (B_ṽ ⊗ I_d)·G·Θ`.

use std::collections::BTreeMap;

use crate::action::{GraphAction, OrbitData};
use crate::error::{Error, Result};
use crate::graph::{Edge, QuantumGraph, VertexRecord};
use crate::group::SubgroupRef;
use crate::linalg::{self, c, CMatrix};
use crate::rep::{AdaptedBasis, Representation};

pub const DEFAULT_BASIS_TOL: f64 = 1e-9;
pub const DEFAULT_REDUCE_TOL: f64 = 1e-10;

/// Distinct entries of `nu` in order of first appearance.
pub fn distinct_in_order(nu: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for &x in nu {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// 0/1 matrix of shape `n·d × Σ d_μ`: `Θ' ⊗ I_d` with the dead columns of
/// every block removed, where `Θ'[i][j] = 1` iff `nu[i] = mu[j]`.
pub fn build_theta(nu: &[usize], mu: &[usize], d: usize, d_mu: &[usize]) -> Result<CMatrix> {
    if d_mu.len() != mu.len() {
        return Err(Error::Inconsistent("one fixed dimension per distinct orbit is required".into()));
    }
    if distinct_in_order(mu).len() != mu.len() {
        return Err(Error::Inconsistent("orbit list has repeated entries".into()));
    }
    if let Some(&bad) = d_mu.iter().find(|&&x| x > d) {
        return Err(Error::Inconsistent(format!("fixed dimension {bad} exceeds representation dimension {d}")));
    }
    let mut offsets = Vec::with_capacity(mu.len());
    let mut cols = 0;
    for &dm in d_mu {
        offsets.push(cols);
        cols += dm;
    }
    let mut theta = CMatrix::zeros(nu.len() * d, cols);
    for (i, x) in nu.iter().enumerate() {
        let j = mu
            .iter()
            .position(|m| m == x)
            .ok_or_else(|| Error::Inconsistent(format!("orbit {x} missing from the distinct list")))?;
        for s in 0..d_mu[j] {
            theta[(i * d + s, offsets[j] + s)] = c(1.0, 0.0);
        }
    }
    Ok(theta)
}

/// Block-diagonal matrix whose `i`-th block is the transpose of
/// `C_{B^{ν_i}}⁻¹ · ρ(g_i⁻¹) · C_B`.
///
/// `edge_bases[ν]` is the adapted basis of edge orbit `ν`.
pub fn build_gothic(
    rep: &Representation,
    witnesses: &[usize],
    nu: &[usize],
    global_basis: &CMatrix,
    edge_bases: &[CMatrix],
) -> Result<CMatrix> {
    if witnesses.len() != nu.len() {
        return Err(Error::Inconsistent("one witness per incident edge is required".into()));
    }
    let d = rep.dim();
    let group = rep.group();
    let mut out = CMatrix::zeros(nu.len() * d, nu.len() * d);
    for (i, (&g, &orbit)) in witnesses.iter().zip(nu).enumerate() {
        let basis = edge_bases
            .get(orbit)
            .ok_or_else(|| Error::Inconsistent(format!("no adapted basis for orbit {orbit}")))?;
        let block = rep.matrix_in_bases(group.inv(g), global_basis, basis)?;
        out.view_mut((i * d, i * d), (d, d)).copy_from(&block.transpose());
    }
    Ok(out)
}

/// Pre-reduction condition `((A ⊗ I_d)·G·Θ, (B ⊗ I_d)·G·Θ)`.
pub fn build_vertex_condition(
    a_rep: &CMatrix,
    b_rep: &CMatrix,
    gothic: &CMatrix,
    theta: &CMatrix,
    d: usize,
) -> Result<(CMatrix, CMatrix)> {
    if a_rep.shape() != b_rep.shape() {
        return Err(Error::Shape("A and B of the representative differ in shape".into()));
    }
    let n = a_rep.ncols();
    if gothic.shape() != (n * d, n * d) || theta.nrows() != n * d {
        return Err(Error::Shape(format!(
            "vertex of degree {n} with d = {d} does not fit G {:?} and Θ {:?}",
            gothic.shape(),
            theta.shape()
        )));
    }
    let id = linalg::identity(d);
    let right = gothic * theta;
    Ok((linalg::kron(a_rep, &id) * &right, linalg::kron(b_rep, &id) * right))
}

/// Reduced row echelon form of `(A | B)` with zero rows dropped.
///
/// Pivots are chosen by largest modulus; an entry counts as zero below
/// `tol · σ_max(A | B)`.
pub fn reduce_rows(a: &CMatrix, b: &CMatrix, tol: f64) -> (CMatrix, CMatrix) {
    assert_eq!(a.shape(), b.shape(), "A and B must share a shape");
    let n = a.ncols();
    let mut m = linalg::hstack(a, b);
    let top = linalg::singular_values(&m).first().copied().unwrap_or(0.0);
    let thresh = tol * top;
    let mut r = 0;
    if top > 0.0 {
        for col in 0..2 * n {
            if r == m.nrows() {
                break;
            }
            let (best, val) = (r..m.nrows())
                .map(|i| (i, m[(i, col)].norm()))
                .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if val <= thresh {
                continue;
            }
            m.swap_rows(r, best);
            let pivot = m[(r, col)];
            let row = m.row(r) / pivot;
            m.set_row(r, &row);
            for i in 0..m.nrows() {
                if i != r {
                    let f = m[(i, col)];
                    if f.norm() != 0.0 {
                        let upd = m.row(i) - &row * f;
                        m.set_row(i, &upd);
                    }
                }
            }
            r += 1;
        }
    }
    let mut kept = m.rows(0, r).into_owned();
    for z in kept.iter_mut() {
        if z.norm() <= thresh * 1e-3 {
            *z = c(0.0, 0.0);
        }
    }
    (kept.columns(0, n).into_owned(), kept.columns(n, n).into_owned())
}

/// Options for [`QuotientRecipe::new`].
#[derive(Clone, Debug)]
pub struct RecipeOptions {
    /// Global basis `B` as columns; identity when absent.
    pub global_basis: Option<CMatrix>,
    pub basis_tol: f64,
    pub action_tol: f64,
    /// Orbit index → chosen representative, in ids of the processed graph.
    pub edge_overrides: BTreeMap<usize, usize>,
    pub vertex_overrides: BTreeMap<usize, usize>,
}

impl Default for RecipeOptions {
    fn default() -> Self {
        Self {
            global_basis: None,
            basis_tol: DEFAULT_BASIS_TOL,
            action_tol: 1e-9,
            edge_overrides: BTreeMap::new(),
            vertex_overrides: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuotientRecipe {
    pub action: GraphAction,
    pub rep: Representation,
    pub orbits: OrbitData,
    pub global_basis: CMatrix,
    pub edge_bases: Vec<AdaptedBasis>,
}

impl QuotientRecipe {
    /// Restricts the action to the representation's group when needed,
    /// inserts dummy vertices, picks representatives and adapted bases.
    pub fn new(action: &GraphAction, rep: &Representation, opts: &RecipeOptions) -> Result<Self> {
        let acting = if rep.domain() == action.group() {
            action.clone()
        } else if rep.domain().is_subgroup_of(action.group()) {
            action.restrict(rep.domain())?
        } else {
            return Err(Error::GroupMismatch("the representation's group does not act on the graph".into()));
        };
        let report = acting.validate(opts.action_tol);
        if let Some(issue) = report.issues.first() {
            return Err(Error::InvalidAction(format!("element {}: {}", issue.element, issue.message)));
        }
        let processed = acting.insert_dummies()?;
        let orbits = processed.orbits();
        let orbits = processed.choose_representatives(&orbits, &opts.edge_overrides, &opts.vertex_overrides)?;
        let d = rep.dim();
        let global_basis = opts.global_basis.clone().unwrap_or_else(|| linalg::identity(d));
        if global_basis.shape() != (d, d) {
            return Err(Error::Shape(format!("global basis must be {d}×{d}")));
        }
        if linalg::inverse(&global_basis).is_none() {
            return Err(Error::SingularBasis);
        }
        let edge_bases = orbits
            .edge_orbits
            .iter()
            .map(|o| {
                if o.stabilizer.order() == 1 {
                    Ok(AdaptedBasis { matrix: global_basis.clone(), fixed_dim: d })
                } else {
                    rep.adapted_basis(&o.stabilizer, opts.basis_tol)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self { action: processed, rep: rep.clone(), orbits, global_basis, edge_bases })
    }

    /// Incident-edge orbits and witnesses at a vertex of the processed graph.
    pub fn local_data(&self, v: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        let graph = self.action.graph();
        let mut nu = Vec::new();
        let mut witnesses = Vec::new();
        for &e in &graph.vertex(v).edge_order {
            let i = self.orbits.edge_orbit_of[e];
            let g = self.orbits.edge_orbits[i]
                .witness_for(e)
                .ok_or_else(|| Error::Inconsistent(format!("edge {e} lacks a witness")))?;
            nu.push(i);
            witnesses.push(g);
        }
        Ok((nu, witnesses))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeProvenance {
    pub orbit: usize,
    /// 0-based copy index, below the orbit's fixed dimension.
    pub copy: usize,
    pub representative: usize,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexProvenance {
    pub orbit: usize,
    pub representative: usize,
    pub incident_orbits: Vec<usize>,
    pub witnesses: Vec<usize>,
    pub a_unreduced: CMatrix,
    pub b_unreduced: CMatrix,
    /// More independent rows than incident quotient edges.
    pub generalized: bool,
}

#[derive(Clone, Debug)]
pub struct QuotientResult {
    pub graph: QuantumGraph,
    pub edges: Vec<EdgeProvenance>,
    pub vertices: Vec<VertexProvenance>,
    /// The graph the quotient was taken of, after dummy insertion.
    pub processed: QuantumGraph,
}

/// Assembles the quotient graph; vertex `k` is vertex orbit `k`.
pub fn build_quotient(recipe: &QuotientRecipe, reduce_tol: f64) -> Result<QuotientResult> {
    let graph = recipe.action.graph();
    let d = recipe.rep.dim();
    let fixed: Vec<usize> = recipe.edge_bases.iter().map(|b| b.fixed_dim).collect();
    let bases: Vec<CMatrix> = recipe.edge_bases.iter().map(|b| b.matrix.clone()).collect();

    let mut edges = Vec::new();
    let mut provenance = Vec::new();
    let mut first_copy = Vec::with_capacity(fixed.len());
    for (i, orbit) in recipe.orbits.edge_orbits.iter().enumerate() {
        first_copy.push(edges.len());
        let rep_edge = graph.edge(orbit.representative);
        for j in 0..fixed[i] {
            edges.push(Edge {
                id: edges.len(),
                source: recipe.orbits.vertex_orbit_of[rep_edge.source],
                target: recipe.orbits.vertex_orbit_of[rep_edge.target],
                length: rep_edge.length,
            });
            provenance.push(EdgeProvenance { orbit: i, copy: j, representative: orbit.representative, length: rep_edge.length });
        }
    }

    let mut vertices = Vec::new();
    let mut vprov = Vec::new();
    for (k, orbit) in recipe.orbits.vertex_orbits.iter().enumerate() {
        let v = orbit.representative;
        let (nu, witnesses) = recipe.local_data(v)?;
        let mu = distinct_in_order(&nu);
        let d_mu: Vec<usize> = mu.iter().map(|&i| fixed[i]).collect();
        let theta = build_theta(&nu, &mu, d, &d_mu)?;
        let gothic = build_gothic(&recipe.rep, &witnesses, &nu, &recipe.global_basis, &bases)?;
        let rec = graph.vertex(v);
        let (a_pre, b_pre) = build_vertex_condition(&rec.a, &rec.b, &gothic, &theta, d)?;
        let (a, b) = reduce_rows(&a_pre, &b_pre, reduce_tol);
        let edge_order: Vec<usize> = mu.iter().flat_map(|&i| (0..fixed[i]).map(move |j| (i, j))).map(|(i, j)| first_copy[i] + j).collect();
        let degree = edge_order.len();
        vprov.push(VertexProvenance {
            orbit: k,
            representative: v,
            incident_orbits: nu,
            witnesses,
            a_unreduced: a_pre,
            b_unreduced: b_pre,
            generalized: a.nrows() > degree,
        });
        vertices.push(VertexRecord { id: k, edge_order, a, b });
    }
    let quotient = QuantumGraph::new(vertices, edges)?;
    Ok(QuotientResult { graph: quotient, edges: provenance, vertices: vprov, processed: graph.clone() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientKind {
    Generalized,
    Proper,
    ProperAndExact,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexClass {
    pub rank: usize,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub kind: QuotientKind,
    pub per_vertex: Vec<VertexClass>,
}

/// Proper when every vertex has rank at most its degree, exact when equal.
pub fn classify(graph: &QuantumGraph, tol: f64) -> Classification {
    let per_vertex: Vec<VertexClass> = graph
        .vertices()
        .iter()
        .map(|v| VertexClass { rank: linalg::rank(&linalg::hstack(&v.a, &v.b), tol), degree: v.edge_order.len() })
        .collect();
    let kind = if per_vertex.iter().any(|x| x.rank > x.degree) {
        QuotientKind::Generalized
    } else if per_vertex.iter().all(|x| x.rank == x.degree) {
        QuotientKind::ProperAndExact
    } else {
        QuotientKind::Proper
    };
    Classification { kind, per_vertex }
}

/// `⟨χ_perm, χ_R⟩` over the stabilizer of `v`, where `χ_perm` counts the
/// incident edges fixed by each stabilizer element.
pub fn predicted_degree(action: &GraphAction, rep: &Representation, v: usize, tol: f64) -> Result<usize> {
    let graph = action.graph();
    let stab: Vec<usize> = action.group().elements().iter().copied().filter(|&g| action.vertex(g, v) == v).collect();
    let stab = SubgroupRef::new(action.group().parent().clone(), stab)?;
    let restricted = rep.restrict(&stab)?;
    let incident = &graph.vertex(v).edge_order;
    let mut sum = c(0.0, 0.0);
    for (i, &h) in stab.elements().iter().enumerate() {
        let fixed = incident.iter().filter(|&&e| action.edge(h, e) == e).count() as f64;
        sum += restricted.matrices()[i].trace() * fixed;
    }
    let value = sum / stab.order() as f64;
    let rounded = value.re.round();
    if (value - c(rounded, 0.0)).norm() > tol {
        return Err(Error::Inconsistent(format!("non-integral degree prediction {value}")));
    }
    Ok(rounded as usize)
}

/// Splits vertices whose reduced condition decouples into blocks of
/// incident edges. Components that do not contain the first edge become new
/// vertices appended at the end.
pub fn split_vertices(graph: &QuantumGraph, tol: f64) -> Result<QuantumGraph> {
    let mut edges = graph.edges().to_vec();
    let mut vertices: Vec<VertexRecord> = Vec::new();
    let mut extra: Vec<VertexRecord> = Vec::new();
    let base = graph.vertices().len();
    for v in graph.vertices() {
        let (a, b) = reduce_rows(&v.a, &v.b, tol);
        let n = v.edge_order.len();
        let parts = support_components(&a, &b, tol);
        if parts.len() <= 1 {
            vertices.push(v.clone());
            continue;
        }
        for (p, slots) in parts.iter().enumerate() {
            let rows: Vec<usize> = (0..a.nrows())
                .filter(|&r| slots.iter().any(|&s| a[(r, s)].norm() > 0.0 || b[(r, s)].norm() > 0.0))
                .collect();
            let pick = |m: &CMatrix| CMatrix::from_fn(rows.len(), slots.len(), |i, j| m[(rows[i], slots[j])]);
            let id = if p == 0 { v.id } else { base + extra.len() };
            let edge_order: Vec<usize> = slots.iter().map(|&s| v.edge_order[s]).collect();
            if p > 0 {
                for &e in &edge_order {
                    let edge = &mut edges[e];
                    if edge.source == v.id {
                        edge.source = id;
                    } else {
                        edge.target = id;
                    }
                }
            }
            let rec = VertexRecord { id, edge_order, a: pick(&a), b: pick(&b) };
            if p == 0 {
                vertices.push(rec);
            } else {
                extra.push(rec);
            }
        }
        debug_assert_eq!(parts.iter().map(Vec::len).sum::<usize>(), n);
    }
    vertices.extend(extra);
    QuantumGraph::new(vertices, edges)
}

/// Connected components of edge slots linked by shared nonzero rows.
fn support_components(a: &CMatrix, b: &CMatrix, tol: f64) -> Vec<Vec<usize>> {
    let n = a.ncols();
    let scale = linalg::max_abs(a).max(linalg::max_abs(b));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let root = find(p, p[x]);
            p[x] = root;
        }
        p[x]
    }
    for r in 0..a.nrows() {
        let slots: Vec<usize> =
            (0..n).filter(|&s| a[(r, s)].norm() > tol * scale || b[(r, s)].norm() > tol * scale).collect();
        for w in slots.windows(2) {
            let (x, y) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[x.max(y)] = x.min(y);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for s in 0..n {
        let root = find(&mut parent, s);
        groups.entry(root).or_default().push(s);
    }
    groups.into_values().collect()
}
