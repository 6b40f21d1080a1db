//! Built-in example graphs with their symmetry groups and representations.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::action::{path_reflection, ElementAction, GraphAction};
use crate::d4;
use crate::error::{Error, Result};
use crate::graph::{ConditionKind, QuantumGraph};
use crate::group::{FiniteGroup, SubgroupRef};
use crate::linalg::{self, c};
use crate::rep::Representation;

pub const SQUARE_DEFAULTS: (f64, f64, f64) = (1.0, 0.62, 0.41);
pub const YGRAPH_DEFAULTS: (f64, f64, f64) = (1.0, 1.0, 0.7);

#[derive(Clone, Debug)]
pub struct ExampleBundle {
    pub group: Arc<FiniteGroup>,
    pub graph: QuantumGraph,
    pub action: GraphAction,
    pub reps: Vec<(String, Representation)>,
    pub params: BTreeMap<String, f64>,
}

fn check_lengths(params: &[(&str, f64)]) -> Result<()> {
    for (name, x) in params {
        if !(x.is_finite() && *x > 0.0) {
            return Err(Error::OutOfRange(format!("parameter {name} must be positive, got {x}")));
        }
    }
    Ok(())
}

fn key(p: [f64; 2]) -> (i64, i64) {
    ((p[0] * 1e6).round() as i64, (p[1] * 1e6).round() as i64)
}

/// Square ring of 8 edges of length `a` between corners and side midpoints,
/// two pendant leaves of length `c` at each corner and two of length `b` at
/// each midpoint, all Neumann, with the dihedral group acting freely on edges.
pub fn square_d4_graph(a: f64, b: f64, cc: f64) -> Result<GraphAction> {
    check_lengths(&[("a", a), ("b", b), ("c", cc)])?;
    // leaf tips are placed off the symmetry axes so that the only element
    // fixing a corner or midpoint swaps its two leaves
    let templates = [([1.0, 1.0], [1.0, 0.0], a), ([1.0, 1.0], [1.3, 1.1], cc), ([1.0, 0.0], [1.2, 0.1], b)];
    let mut points: Vec<[f64; 2]> = Vec::new();
    let mut point_id: HashMap<(i64, i64), usize> = HashMap::new();
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut edge_id: HashMap<(usize, usize), usize> = HashMap::new();
    let mut intern = |p: [f64; 2], points: &mut Vec<[f64; 2]>| {
        *point_id.entry(key(p)).or_insert_with(|| {
            points.push(p);
            points.len() - 1
        })
    };
    for (s, t, l) in templates {
        for g in 0..8 {
            let u = intern(d4::apply(g, s), &mut points);
            let v = intern(d4::apply(g, t), &mut points);
            edge_id.entry((u, v)).or_insert_with(|| {
                edges.push((u, v, l));
                edges.len() - 1
            });
        }
    }
    let graph = QuantumGraph::from_edges(&vec![ConditionKind::Neumann; points.len()], &edges)?;
    let lookup: HashMap<(i64, i64), usize> = points.iter().enumerate().map(|(i, &p)| (key(p), i)).collect();
    let maps = (0..8)
        .map(|g| {
            let vertex_map: Vec<usize> = points.iter().map(|&p| lookup[&key(d4::apply(g, p))]).collect();
            let edge_map = edges.iter().map(|&(u, v, _)| edge_id[&(vertex_map[u], vertex_map[v])]).collect();
            ElementAction { vertex_map, edge_map, edge_flip: vec![false; edges.len()] }
        })
        .collect();
    GraphAction::new_validated(SubgroupRef::full(d4::group()), graph, maps, 1e-10)
}

/// Square example together with its representations. `theta` parametrizes
/// the orthogonal 2-dimensional irreducible rep stored as `R2dim`.
pub fn square_d4(a: f64, b: f64, cc: f64, theta: f64) -> Result<ExampleBundle> {
    if !theta.is_finite() {
        return Err(Error::OutOfRange("theta must be finite".into()));
    }
    let action = square_d4_graph(a, b, cc)?;
    let group = action.group().parent().clone();
    let mut reps = vec![
        ("R1".to_string(), d4::r1()),
        ("R2".to_string(), d4::r2()),
        ("R3".to_string(), d4::r3()),
        ("R2dim".to_string(), d4::two_dim(theta)),
        ("R2dim-unitary".to_string(), d4::two_dim_unitary()),
    ];
    reps.extend(d4::irreps()?.into_iter().map(|(n, r)| (n.to_string(), r)));
    reps.push(("regular".to_string(), Representation::regular(SubgroupRef::full(group.clone()))));
    let params = BTreeMap::from([("a".into(), a), ("b".into(), b), ("c".into(), cc), ("theta".into(), theta)]);
    Ok(ExampleBundle { group, graph: action.graph().clone(), action, reps, params })
}

/// Path of two edges of length `l` from a Neumann center to Neumann leaves,
/// with the reflection swapping them.
pub fn interval_z2(l: f64) -> Result<ExampleBundle> {
    check_lengths(&[("l", l)])?;
    let action = path_reflection(l, ConditionKind::Neumann)?;
    let full = action.group().clone();
    let reps = vec![
        ("trivial".to_string(), Representation::trivial(full.clone(), 1)?),
        ("sign".to_string(), Representation::one_dim(full.clone(), &[c(1.0, 0.0), c(-1.0, 0.0)])?),
        ("regular".to_string(), Representation::regular(full.clone())),
    ];
    Ok(ExampleBundle {
        group: full.parent().clone(),
        graph: action.graph().clone(),
        action,
        reps,
        params: BTreeMap::from([("l".into(), l)]),
    })
}

/// Star with a Neumann center, Dirichlet leaves of lengths `a` and `b`, and a
/// third leaf of length `c` carrying both `f = 0` and `f' = 0`.
pub fn ygraph(a: f64, b: f64, cc: f64) -> Result<ExampleBundle> {
    check_lengths(&[("a", a), ("b", b), ("c", cc)])?;
    use ConditionKind::*;
    let graph = QuantumGraph::from_edges(&[Neumann, Dirichlet, Dirichlet, Neumann], &[(0, 1, a), (0, 2, b), (0, 3, cc)])?;
    let graph = graph.with_condition(3, linalg::real_matrix(&[&[1.0], &[0.0]]), linalg::real_matrix(&[&[0.0], &[1.0]]))?;
    let group = Arc::new(FiniteGroup::cyclic(1)?);
    let full = SubgroupRef::full(group.clone());
    let action = GraphAction::new(full.clone(), graph.clone(), vec![ElementAction::identity(4, 3)])?;
    let reps = vec![("trivial".to_string(), Representation::trivial(full, 1)?)];
    let params = BTreeMap::from([("a".into(), a), ("b".into(), b), ("c".into(), cc)]);
    Ok(ExampleBundle { group, graph, action, reps, params })
}
