//! Finite groups given extensionally by their multiplication table.
//!
//! Element indices are 0-based everywhere. Subgroups are sorted index sets
//! into a shared parent group, so elements of a subgroup keep the names and
//! indices of the parent.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    names: Vec<String>,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the table exhaustively (Latin square, identity, inverses,
    /// associativity) and builds the group.
    pub fn new(table: Vec<Vec<usize>>, identity: usize, names: Vec<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("order must be positive".into()));
        }
        if names.len() != n {
            return Err(Error::InvalidGroup(format!("{} names for order {n}", names.len())));
        }
        if identity >= n {
            return Err(Error::InvalidElement { index: identity, order: n });
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {g} has length {}", row.len())));
            }
            if !is_permutation(row) {
                return Err(Error::InvalidGroup(format!("row {g} is not a permutation")));
            }
        }
        for h in 0..n {
            let col: Vec<usize> = table.iter().map(|r| r[h]).collect();
            if !is_permutation(&col) {
                return Err(Error::InvalidGroup(format!("column {h} is not a permutation")));
            }
        }
        for (g, row) in table.iter().enumerate() {
            if table[identity][g] != g || row[identity] != g {
                return Err(Error::InvalidGroup(format!("{identity} is not a two-sided identity at {g}")));
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for g in 0..n {
            let Some(h) = (0..n).find(|&h| table[g][h] == identity) else {
                return Err(Error::InvalidGroup(format!("element {g} has no right inverse")));
            };
            if table[h][g] != identity {
                return Err(Error::InvalidGroup(format!("element {g} has no two-sided inverse")));
            }
            inverses[g] = h;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for cc in 0..n {
                    if table[ab][cc] != table[a][table[b][cc]] {
                        return Err(Error::InvalidGroup(format!("associativity fails at ({a}, {b}, {cc})")));
                    }
                }
            }
        }
        Ok(Self { table, identity, names, inverses })
    }

    /// Group generated by permutations of `0..degree` under composition
    /// `(p·q)(x) = p(q(x))`. The identity gets index 0; the remaining elements
    /// are numbered in breadth-first discovery order.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Self> {
        let degree = gens.first().map_or(0, |g| g.len());
        for g in gens {
            if g.len() != degree || !is_permutation(g) {
                return Err(Error::InvalidGroup("generators must be permutations of equal degree".into()));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let p = compose(g, &elems[i]);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let table = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&compose(a, b)]).collect())
            .collect();
        let names = (0..elems.len()).map(|i| format!("g{i}")).collect();
        Self::new(table, 0, names)
    }

    /// Cyclic group of order `n`; element `i` is `r^i`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("order must be positive".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let names = (0..n).map(|i| if i == 0 { "e".to_string() } else { format!("r{i}") }).collect();
        Self::new(table, 0, names)
    }

    /// Dihedral group of order `2n` with rotation `s` and reflection `t`.
    ///
    /// Elements `0..n` are `s^i`, elements `n..2n` are `t·s^i`, and the
    /// relation `s^i·t = t·s^{-i}` fixes the table. For `n = 4` this is the
    /// ordering `e, s, s2, s3, t, ts, ts2, ts3`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("dihedral group needs n >= 1".into()));
        }
        let idx = |refl: usize, rot: usize| refl * n + rot % n;
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for (ga, row) in table.iter_mut().enumerate() {
            let (a, i) = (ga / n, ga % n);
            for (gb, cell) in row.iter_mut().enumerate() {
                let (b, j) = (gb / n, gb % n);
                let rot = if b == 0 { i + j } else { n - i + j };
                *cell = idx((a + b) % 2, rot);
            }
        }
        let power = |i: usize| match i {
            0 => String::new(),
            1 => "s".to_string(),
            _ => format!("s{i}"),
        };
        let names = (0..2 * n)
            .map(|g| match (g / n, g % n) {
                (0, 0) => "e".to_string(),
                (0, i) => power(i),
                (_, i) => format!("t{}", power(i)),
            })
            .collect();
        Self::new(table, 0, names)
    }

    /// Direct product; element `(a, b)` has index `a * other.order() + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<Self> {
        let (n, m) = (self.order(), other.order());
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        let names = (0..n * m).map(|x| format!("({},{})", self.names[x / m], other.names[x % m])).collect();
        Self::new(table, self.identity * m + other.identity, names)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn check_element(&self, g: usize) -> Result<()> {
        if g < self.order() {
            Ok(())
        } else {
            Err(Error::InvalidElement { index: g, order: self.order() })
        }
    }

    /// Product of a word of elements, left to right.
    pub fn product(&self, word: &[usize]) -> usize {
        word.iter().fold(self.identity, |acc, &g| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Conjugacy classes, each sorted, listed by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let class: BTreeSet<usize> = (0..n).map(|x| self.mul(self.mul(x, g), self.inv(x))).collect();
            for &h in &class {
                seen[h] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }
}

/// A subgroup of a shared parent group, stored as a sorted set of parent
/// element indices.
#[derive(Clone, Debug)]
pub struct SubgroupRef {
    parent: Arc<FiniteGroup>,
    elements: Vec<usize>,
}

impl PartialEq for SubgroupRef {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && (Arc::ptr_eq(&self.parent, &other.parent) || self.parent == other.parent)
    }
}

impl SubgroupRef {
    /// Validates that `elements` is a subgroup of `parent`.
    pub fn new(parent: Arc<FiniteGroup>, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = elements.into_iter().collect();
        for &g in &set {
            parent.check_element(g)?;
        }
        if !set.contains(&parent.identity()) {
            return Err(Error::InvalidSubgroup("identity missing".into()));
        }
        for &a in &set {
            if !set.contains(&parent.inv(a)) {
                return Err(Error::InvalidSubgroup(format!("not closed under inversion at {a}")));
            }
            for &b in &set {
                if !set.contains(&parent.mul(a, b)) {
                    return Err(Error::InvalidSubgroup(format!("not closed: {a}·{b}")));
                }
            }
        }
        if !parent.order().is_multiple_of(set.len()) {
            return Err(Error::InvalidSubgroup("order does not divide the parent order".into()));
        }
        Ok(Self { parent, elements: set.into_iter().collect() })
    }

    pub fn full(parent: Arc<FiniteGroup>) -> Self {
        let elements = (0..parent.order()).collect();
        Self { parent, elements }
    }

    pub fn trivial(parent: Arc<FiniteGroup>) -> Self {
        let elements = vec![parent.identity()];
        Self { parent, elements }
    }

    /// Smallest subgroup containing `gens`.
    pub fn generate(parent: Arc<FiniteGroup>, gens: &[usize]) -> Result<Self> {
        for &g in gens {
            parent.check_element(g)?;
        }
        let mut set = BTreeSet::from([parent.identity()]);
        let mut queue = VecDeque::from([parent.identity()]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = parent.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        // closure under right multiplication by generators is a subgroup in a finite group
        Ok(Self { parent, elements: set.into_iter().collect() })
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    /// Position of parent element `g` in [`Self::elements`].
    pub fn position(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }

    pub fn is_full(&self) -> bool {
        self.order() == self.parent.order()
    }

    pub fn same_parent(&self, other: &SubgroupRef) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) || self.parent == other.parent
    }

    pub fn is_subgroup_of(&self, other: &SubgroupRef) -> bool {
        self.same_parent(other) && self.elements.iter().all(|&g| other.contains(g))
    }

    /// Index of `self` inside `ambient`.
    pub fn index_in(&self, ambient: &SubgroupRef) -> Result<usize> {
        if !self.is_subgroup_of(ambient) {
            return Err(Error::InvalidSubgroup("not contained in the ambient group".into()));
        }
        Ok(ambient.order() / self.order())
    }

    /// Left coset representatives `t_1 = e, t_2, …` of `self` in the parent.
    pub fn left_transversal(&self) -> Vec<usize> {
        self.left_transversal_in(&SubgroupRef::full(self.parent.clone()))
            .expect("a subgroup always sits inside its parent")
    }

    /// Left coset representatives of `self` inside `ambient`: identity first,
    /// then the smallest index not yet covered, so that the cosets `t_i·H`
    /// partition `ambient`.
    pub fn left_transversal_in(&self, ambient: &SubgroupRef) -> Result<Vec<usize>> {
        if !self.is_subgroup_of(ambient) {
            return Err(Error::InvalidSubgroup("not contained in the ambient group".into()));
        }
        let g = &self.parent;
        let mut covered = vec![false; g.order()];
        let mut reps = Vec::new();
        let candidates = std::iter::once(g.identity()).chain(ambient.elements.iter().copied());
        for t in candidates {
            if covered[t] {
                continue;
            }
            for &h in &self.elements {
                covered[g.mul(t, h)] = true;
            }
            reps.push(t);
        }
        Ok(reps)
    }

    /// Display names of the elements.
    pub fn names(&self) -> Vec<String> {
        self.elements.iter().map(|&g| self.parent.name(g).to_string()).collect()
    }
}

fn is_permutation(row: &[usize]) -> bool {
    let mut seen = vec![false; row.len()];
    for &x in row {
        if x >= row.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}
