//! Left actions of finite groups on quantum graphs.
//!
//! `edge_flip[e]` is true when `g` carries the source of `e` to the target of
//! `g·e`. Composition follows `act(gh) = act(g) ∘ act(h)`, so
//! `flip(gh, e) = flip(h, e) xor flip(g, h·e)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{ConditionKind, QuantumGraph};
use crate::group::SubgroupRef;
use crate::linalg::{self, CMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementAction {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub edge_flip: Vec<bool>,
}

impl ElementAction {
    pub fn identity(n_vertices: usize, n_edges: usize) -> Self {
        Self {
            vertex_map: (0..n_vertices).collect(),
            edge_map: (0..n_edges).collect(),
            edge_flip: vec![false; n_edges],
        }
    }
}

#[derive(Clone, Debug)]
pub struct GraphAction {
    group: SubgroupRef,
    graph: QuantumGraph,
    maps: Vec<ElementAction>,
}

/// One failed invariant, attributed to a group element.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionIssue {
    pub element: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActionReport {
    pub valid: bool,
    pub issues: Vec<ActionIssue>,
}

#[derive(Clone, Debug)]
pub struct Orbit {
    pub representative: usize,
    /// Members in ascending id order.
    pub members: Vec<usize>,
    /// `witnesses[i]` maps the representative onto `members[i]`.
    pub witnesses: Vec<usize>,
    /// Setwise stabilizer of the representative.
    pub stabilizer: SubgroupRef,
    /// Stabilizer elements that reverse the representative edge (always empty
    /// for vertex orbits).
    pub reversing: Vec<usize>,
}

impl Orbit {
    pub fn witness_for(&self, member: usize) -> Option<usize> {
        self.members.binary_search(&member).ok().map(|i| self.witnesses[i])
    }
}

/// Orbits listed in order of their smallest member.
#[derive(Clone, Debug)]
pub struct OrbitData {
    pub edge_orbits: Vec<Orbit>,
    pub vertex_orbits: Vec<Orbit>,
    pub edge_orbit_of: Vec<usize>,
    pub vertex_orbit_of: Vec<usize>,
}

impl GraphAction {
    /// Checks that one map of the right size is given per acting element;
    /// the action invariants are checked by [`Self::validate`].
    pub fn new(group: SubgroupRef, graph: QuantumGraph, maps: Vec<ElementAction>) -> Result<Self> {
        if maps.len() != group.order() {
            return Err(Error::InvalidAction(format!("{} maps for {} elements", maps.len(), group.order())));
        }
        let (nv, ne) = (graph.vertices().len(), graph.edges().len());
        for (i, m) in maps.iter().enumerate() {
            if m.vertex_map.len() != nv || m.edge_map.len() != ne || m.edge_flip.len() != ne {
                return Err(Error::InvalidAction(format!(
                    "map for element {} has the wrong size",
                    group.elements()[i]
                )));
            }
        }
        Ok(Self { group, graph, maps })
    }

    /// Like [`Self::new`] followed by a validation that must pass.
    pub fn new_validated(group: SubgroupRef, graph: QuantumGraph, maps: Vec<ElementAction>, tol: f64) -> Result<Self> {
        let action = Self::new(group, graph, maps)?;
        let report = action.validate(tol);
        if let Some(issue) = report.issues.first() {
            return Err(Error::InvalidAction(format!(
                "element {}: {} ({} issues)",
                issue.element,
                issue.message,
                report.issues.len()
            )));
        }
        Ok(action)
    }

    pub fn group(&self) -> &SubgroupRef {
        &self.group
    }

    pub fn graph(&self) -> &QuantumGraph {
        &self.graph
    }

    /// Map of parent element `g`.
    pub fn map(&self, g: usize) -> &ElementAction {
        let i = self.group.position(g).expect("element of the acting group");
        &self.maps[i]
    }

    pub fn maps(&self) -> &[ElementAction] {
        &self.maps
    }

    pub fn vertex(&self, g: usize, v: usize) -> usize {
        self.map(g).vertex_map[v]
    }

    pub fn edge(&self, g: usize, e: usize) -> usize {
        self.map(g).edge_map[e]
    }

    pub fn flip(&self, g: usize, e: usize) -> bool {
        self.map(g).edge_flip[e]
    }

    pub fn validate(&self, tol: f64) -> ActionReport {
        let mut issues = Vec::new();
        let graph = &self.graph;
        let parent = self.group.parent();

        for (&g, m) in self.group.elements().iter().zip(&self.maps) {
            if !is_permutation(&m.vertex_map) || !is_permutation(&m.edge_map) {
                issues.push(issue(g, "vertex or edge map is not a permutation".into()));
                continue;
            }
            if g == parent.identity() && *m != ElementAction::identity(graph.vertices().len(), graph.edges().len()) {
                issues.push(issue(g, "identity does not act trivially".into()));
            }
            for e in graph.edges() {
                let img = graph.edge(m.edge_map[e.id]);
                let (s, t) = (m.vertex_map[e.source], m.vertex_map[e.target]);
                let ok = if m.edge_flip[e.id] { img.source == t && img.target == s } else { img.source == s && img.target == t };
                if !ok {
                    issues.push(issue(g, format!("edge {} is not carried consistently with its endpoints", e.id)));
                }
                if (img.length - e.length).abs() > tol * e.length.max(1.0) {
                    issues.push(issue(g, format!("edge {} changes length {} -> {}", e.id, e.length, img.length)));
                }
            }
        }
        if !issues.is_empty() {
            return ActionReport { valid: false, issues };
        }

        for &a in self.group.elements() {
            for &b in self.group.elements() {
                let (ma, mb, mab) = (self.map(a), self.map(b), self.map(parent.mul(a, b)));
                let vert_ok = (0..graph.vertices().len()).all(|v| mab.vertex_map[v] == ma.vertex_map[mb.vertex_map[v]]);
                let edge_ok = (0..graph.edges().len()).all(|e| {
                    let be = mb.edge_map[e];
                    mab.edge_map[e] == ma.edge_map[be] && mab.edge_flip[e] == (mb.edge_flip[e] ^ ma.edge_flip[be])
                });
                if !(vert_ok && edge_ok) {
                    issues.push(issue(parent.mul(a, b), format!("map of {a}·{b} is not the composite")));
                }
            }
        }

        for &g in self.group.elements() {
            for v in 0..graph.vertices().len() {
                if let Err(msg) = self.check_condition(g, v, tol) {
                    issues.push(issue(g, format!("vertex {v}: {msg}")));
                }
            }
        }
        ActionReport { valid: issues.is_empty(), issues }
    }

    /// Condition at `g·v` must equal the transported condition at `v`.
    fn check_condition(&self, g: usize, v: usize, tol: f64) -> std::result::Result<(), String> {
        let graph = &self.graph;
        let w = self.vertex(g, v);
        let (rv, rw) = (graph.vertex(v), graph.vertex(w));
        let d = rv.edge_order.len();
        if rw.edge_order.len() != d {
            return Err(format!("degree changes at image {w}"));
        }
        let mut perm = CMatrix::zeros(d, d);
        for (j, &e) in rv.edge_order.iter().enumerate() {
            let ge = self.edge(g, e);
            let Some(k) = rw.edge_order.iter().position(|&x| x == ge) else {
                return Err(format!("image of edge {e} is not incident to {w}"));
            };
            perm[(k, j)] = linalg::c(1.0, 0.0);
        }
        let cond_v = linalg::hstack(&rv.a, &rv.b);
        let cond_w = linalg::hstack(&rw.a, &rw.b);
        let kernel_v = linalg::nullspace(&cond_v, tol);
        let kernel_w = linalg::nullspace(&cond_w, tol);
        if kernel_v.ncols() != kernel_w.ncols() {
            return Err(format!("condition rank differs at image {w}"));
        }
        let mut both = CMatrix::zeros(2 * d, 2 * d);
        both.view_mut((0, 0), (d, d)).copy_from(&perm);
        both.view_mut((d, d), (d, d)).copy_from(&perm);
        let moved = &cond_w * both * kernel_v;
        let scale = 1.0 + linalg::max_abs(&cond_w);
        if linalg::max_abs(&moved) > tol.max(1e-9) * scale {
            return Err(format!("condition not preserved at image {w}"));
        }
        Ok(())
    }

    /// Action of a subgroup of the acting group.
    pub fn restrict(&self, sub: &SubgroupRef) -> Result<Self> {
        if !sub.is_subgroup_of(&self.group) {
            return Err(Error::InvalidSubgroup("not a subgroup of the acting group".into()));
        }
        let maps = sub.elements().iter().map(|&g| self.map(g).clone()).collect();
        Ok(Self { group: sub.clone(), graph: self.graph.clone(), maps })
    }

    /// Orbits with smallest-id representatives.
    pub fn orbits(&self) -> OrbitData {
        let n_e = self.graph.edges().len();
        let n_v = self.graph.vertices().len();
        let (edge_orbits, edge_orbit_of) = self.collect_orbits(n_e, |g, x| self.edge(g, x));
        let (vertex_orbits, vertex_orbit_of) = self.collect_orbits(n_v, |g, x| self.vertex(g, x));
        let mut data = OrbitData { edge_orbits, vertex_orbits, edge_orbit_of, vertex_orbit_of };
        for orbit in &mut data.edge_orbits {
            orbit.reversing = orbit.stabilizer.elements().iter().copied().filter(|&g| self.flip(g, orbit.representative)).collect();
        }
        data
    }

    fn collect_orbits(&self, n: usize, act: impl Fn(usize, usize) -> usize) -> (Vec<Orbit>, Vec<usize>) {
        let mut orbit_of = vec![usize::MAX; n];
        let mut orbits = Vec::new();
        for x in 0..n {
            if orbit_of[x] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = self.group.elements().iter().map(|&g| act(g, x)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                orbit_of[m] = orbits.len();
            }
            orbits.push(self.root_orbit(x, members, &act));
        }
        (orbits, orbit_of)
    }

    fn root_orbit(&self, rep: usize, members: Vec<usize>, act: &impl Fn(usize, usize) -> usize) -> Orbit {
        let witnesses = members
            .iter()
            .map(|&m| *self.group.elements().iter().find(|&&g| act(g, rep) == m).expect("member of the orbit"))
            .collect();
        let stab: Vec<usize> = self.group.elements().iter().copied().filter(|&g| act(g, rep) == rep).collect();
        let stabilizer = SubgroupRef::new(self.group.parent().clone(), stab).expect("a stabilizer is a subgroup");
        Orbit { representative: rep, members, witnesses, stabilizer, reversing: Vec::new() }
    }

    /// Re-roots orbits at chosen members. Keys are orbit indices.
    pub fn choose_representatives(
        &self,
        data: &OrbitData,
        edge_overrides: &BTreeMap<usize, usize>,
        vertex_overrides: &BTreeMap<usize, usize>,
    ) -> Result<OrbitData> {
        let mut out = data.clone();
        for (&i, &rep) in edge_overrides {
            let orbit = data.edge_orbits.get(i).ok_or_else(|| Error::InvalidOverride(format!("no edge orbit {i}")))?;
            if orbit.members.binary_search(&rep).is_err() {
                return Err(Error::InvalidOverride(format!("edge {rep} is not in edge orbit {i}")));
            }
            let mut o = self.root_orbit(rep, orbit.members.clone(), &|g, x| self.edge(g, x));
            o.reversing = o.stabilizer.elements().iter().copied().filter(|&g| self.flip(g, rep)).collect();
            out.edge_orbits[i] = o;
        }
        for (&i, &rep) in vertex_overrides {
            let orbit = data.vertex_orbits.get(i).ok_or_else(|| Error::InvalidOverride(format!("no vertex orbit {i}")))?;
            if orbit.members.binary_search(&rep).is_err() {
                return Err(Error::InvalidOverride(format!("vertex {rep} is not in vertex orbit {i}")));
            }
            out.vertex_orbits[i] = self.root_orbit(rep, orbit.members.clone(), &|g, x| self.vertex(g, x));
        }
        Ok(out)
    }

    /// Edge orbits that must be subdivided: some element moves an endpoint
    /// onto the other endpoint, reverses the edge in place, or the edge is
    /// parallel to another.
    fn offending_edge_orbits(&self, data: &OrbitData) -> Vec<usize> {
        let graph = &self.graph;
        let mut marked = vec![false; data.edge_orbits.len()];
        for e in graph.edges() {
            let reversed = self.group.elements().iter().any(|&g| self.edge(g, e.id) == e.id && self.flip(g, e.id));
            let parallel = graph.edges().iter().any(|f| {
                f.id != e.id
                    && ((f.source == e.source && f.target == e.target) || (f.source == e.target && f.target == e.source))
            });
            if reversed || parallel {
                marked[data.edge_orbit_of[e.id]] = true;
            }
        }
        // an element carrying a vertex onto a neighbour across some other edge
        for &g in self.group.elements() {
            for v in 0..graph.vertices().len() {
                let w = self.vertex(g, v);
                if w != v {
                    for e in graph.edges() {
                        if (e.source == v && e.target == w) || (e.source == w && e.target == v) {
                            marked[data.edge_orbit_of[e.id]] = true;
                        }
                    }
                }
            }
        }
        (0..marked.len()).filter(|&i| marked[i]).collect()
    }

    /// Equivariant midpoint subdivision until no element moves a vertex to a
    /// neighbour, no edge is reversed onto itself and no edges are parallel.
    pub fn insert_dummies(&self) -> Result<GraphAction> {
        let mut current = self.clone();
        loop {
            let data = current.orbits();
            let marked = current.offending_edge_orbits(&data);
            if marked.is_empty() {
                return Ok(current);
            }
            let edges: Vec<usize> = marked.iter().flat_map(|&i| data.edge_orbits[i].members.clone()).collect();
            current = current.subdivide_midpoints(&edges)?;
        }
    }

    /// Subdivides every listed edge at its midpoint and extends the action.
    /// The list must be a union of edge orbits.
    fn subdivide_midpoints(&self, edges: &[usize]) -> Result<GraphAction> {
        let mut graph = self.graph.clone();
        // split[e] = (second half id, midpoint id)
        let mut split: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for &e in edges {
            let n_e = graph.edges().len();
            let n_v = graph.vertices().len();
            graph = graph.subdivide_edge(e, graph.edge(e).length / 2.0)?;
            split.insert(e, (n_e, n_v));
        }
        let (nv, ne) = (graph.vertices().len(), graph.edges().len());
        let mut maps = Vec::with_capacity(self.maps.len());
        for m in &self.maps {
            let mut vm: Vec<usize> = m.vertex_map.clone();
            vm.resize(nv, usize::MAX);
            let mut em: Vec<usize> = m.edge_map.clone();
            em.resize(ne, usize::MAX);
            let mut fl = m.edge_flip.clone();
            fl.resize(ne, false);
            for (&e, &(second, mid)) in &split {
                let img = m.edge_map[e];
                let &(img_second, img_mid) = split
                    .get(&img)
                    .ok_or_else(|| Error::Inconsistent("subdivided edges are not closed under the action".into()))?;
                vm[mid] = img_mid;
                if m.edge_flip[e] {
                    em[e] = img_second;
                    em[second] = img;
                    fl[e] = true;
                    fl[second] = true;
                } else {
                    em[e] = img;
                    em[second] = img_second;
                    fl[e] = false;
                    fl[second] = false;
                }
            }
            maps.push(ElementAction { vertex_map: vm, edge_map: em, edge_flip: fl });
        }
        GraphAction::new(self.group.clone(), graph, maps)
    }
}

/// Action of a two-element group swapping the leaves of the path
/// `left - center - right` built from `e0: center→left`, `e1: center→right`.
pub fn path_reflection(length: f64, leaf: ConditionKind) -> Result<GraphAction> {
    use std::sync::Arc;
    let graph = QuantumGraph::from_edges(
        &[leaf, ConditionKind::Neumann, leaf],
        &[(1, 0, length), (1, 2, length)],
    )?;
    let z2 = Arc::new(crate::group::FiniteGroup::cyclic(2)?);
    let maps = vec![
        ElementAction::identity(3, 2),
        ElementAction { vertex_map: vec![2, 1, 0], edge_map: vec![1, 0], edge_flip: vec![false, false] },
    ];
    GraphAction::new(SubgroupRef::full(z2), graph, maps)
}

fn issue(element: usize, message: String) -> ActionIssue {
    ActionIssue { element, message }
}

fn is_permutation(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    map.iter().all(|&x| x < map.len() && !std::mem::replace(&mut seen[x], true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use std::sync::Arc;

    fn z2() -> SubgroupRef {
        SubgroupRef::full(Arc::new(FiniteGroup::cyclic(2).unwrap()))
    }

    #[test]
    fn path_reflection_is_valid_with_expected_orbits() {
        let act = path_reflection(1.0, ConditionKind::Neumann).unwrap();
        assert!(act.validate(1e-10).valid);
        let orb = act.orbits();
        assert_eq!(orb.edge_orbits.len(), 1);
        assert_eq!(orb.edge_orbits[0].members, vec![0, 1]);
        assert_eq!(orb.edge_orbits[0].stabilizer.order(), 1);
        assert_eq!(orb.vertex_orbits.len(), 2);
        let center = &orb.vertex_orbits[orb.vertex_orbit_of[1]];
        assert_eq!(center.stabilizer.order(), 2);
    }

    #[test]
    fn changed_leaf_breaks_condition_preservation() {
        let act = path_reflection(1.0, ConditionKind::Neumann).unwrap();
        let (a, b) = crate::graph::standard_condition(ConditionKind::Dirichlet, 1);
        let graph = act.graph().with_condition(0, a, b).unwrap();
        let broken = GraphAction::new(act.group().clone(), graph, act.maps().to_vec()).unwrap();
        let rep = broken.validate(1e-10);
        assert!(!rep.valid);
        assert!(rep.issues.iter().all(|i| i.element == 1));
    }

    #[test]
    fn wrong_composition_is_reported() {
        let graph = QuantumGraph::from_edges(&[ConditionKind::Neumann; 2], &[(0, 1, 1.0)]).unwrap();
        // swaps the endpoints without marking the edge as flipped
        let maps = vec![
            ElementAction::identity(2, 1),
            ElementAction { vertex_map: vec![1, 0], edge_map: vec![0], edge_flip: vec![false] },
        ];
        let act = GraphAction::new(z2(), graph, maps).unwrap();
        assert!(!act.validate(1e-10).valid);
    }

    #[test]
    fn end_swap_gets_a_midpoint() {
        let graph = QuantumGraph::from_edges(&[ConditionKind::Neumann; 2], &[(0, 1, 2.0)]).unwrap();
        let maps = vec![
            ElementAction::identity(2, 1),
            ElementAction { vertex_map: vec![1, 0], edge_map: vec![0], edge_flip: vec![true] },
        ];
        let act = GraphAction::new(z2(), graph, maps).unwrap();
        assert!(act.validate(1e-10).valid);
        let fixed = act.insert_dummies().unwrap();
        assert!(fixed.validate(1e-10).valid);
        assert_eq!(fixed.graph().vertices().len(), 3);
        assert_eq!(fixed.vertex(1, 2), 2);
        let orb = fixed.orbits();
        assert_eq!(orb.edge_orbits.len(), 1);
        assert!(orb.edge_orbits[0].reversing.is_empty());
    }

    #[test]
    fn valid_action_is_left_unchanged() {
        let act = path_reflection(1.0, ConditionKind::Neumann).unwrap();
        let same = act.insert_dummies().unwrap();
        assert_eq!(same.graph(), act.graph());
    }

    #[test]
    fn trivial_group_orbits_are_singletons() {
        let act = path_reflection(1.0, ConditionKind::Neumann).unwrap();
        let triv = act.restrict(&SubgroupRef::trivial(act.group().parent().clone())).unwrap();
        let orb = triv.orbits();
        assert_eq!(orb.edge_orbits.len(), 2);
        assert_eq!(orb.vertex_orbits.len(), 3);
    }

    #[test]
    fn overrides_reroot_or_fail() {
        let act = path_reflection(1.0, ConditionKind::Neumann).unwrap();
        let orb = act.orbits();
        let re = act.choose_representatives(&orb, &BTreeMap::from([(0, 1)]), &BTreeMap::new()).unwrap();
        assert_eq!(re.edge_orbits[0].representative, 1);
        assert_eq!(re.edge_orbits[0].witness_for(0), Some(1));
        assert_eq!(re.edge_orbits[0].members.len(), 2);
        let leaf_orbit = orb.vertex_orbit_of[0];
        let center_orbit = orb.vertex_orbit_of[1];
        assert!(act.choose_representatives(&orb, &BTreeMap::new(), &BTreeMap::from([(leaf_orbit, 1)])).is_err());
        assert!(act.choose_representatives(&orb, &BTreeMap::new(), &BTreeMap::from([(center_orbit, 1)])).is_ok());
    }
}
