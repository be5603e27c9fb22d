//! Exact finite group theory on multiplication tables.
//!
//! Groups are given by their full multiplication table over element indices
//! `0..order`. The table convention is function composition: `table[a][b]`
//! is the element "apply `b`, then `a`". All derived structure (subgroups,
//! cores, quotients, isomorphisms) is computed by bounded exhaustive search.

pub mod catalog;
pub mod perm;
pub mod presentation;
pub mod system;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::caps::Caps;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrpError {
    #[error("not a Latin square: {0}")]
    NotLatinSquare(String),
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("subgroup is not normal: conjugating {element} by {by} leaves the subgroup")]
    NotNormal { element: usize, by: usize },
    #[error("cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: String,
        needed: usize,
        cap: usize,
    },
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("unknown generator `{0}` in relator word")]
    UnknownGenerator(String),
    #[error("incompatible system: {0}")]
    IncompatibleSystem(String),
}

/// A finite group presented by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

/// Validate a raw square table as a group; errors name the violated axiom.
pub fn validate_group(table: &[Vec<usize>]) -> Result<FiniteGroup, GrpError> {
    FiniteGroup::from_table(table)
}

impl FiniteGroup {
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self, GrpError> {
        let n = table.len();
        if n == 0 {
            return Err(GrpError::NotLatinSquare("table is empty".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GrpError::NotLatinSquare(format!(
                    "row {i} has length {} in a table of {n} rows",
                    row.len()
                )));
            }
            let mut seen = vec![false; n];
            for &v in row {
                if v >= n {
                    return Err(GrpError::NotLatinSquare(format!(
                        "entry {v} in row {i} is out of range"
                    )));
                }
                if seen[v] {
                    return Err(GrpError::NotLatinSquare(format!(
                        "row {i} repeats entry {v}"
                    )));
                }
                seen[v] = true;
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for row in table {
                let v = row[j];
                if seen[v] {
                    return Err(GrpError::NotLatinSquare(format!(
                        "column {j} repeats entry {v}"
                    )));
                }
                seen[v] = true;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GrpError::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GrpError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or(GrpError::NoInverse(a))?;
            inverse[a] = inv;
        }
        Ok(FiniteGroup {
            table: table.to_vec(),
            identity,
            inverse,
        })
    }

    /// The group generated by permutations of `{0..degree-1}`, as the closure
    /// under composition; element 0 is the identity, the rest follow in
    /// breadth-first discovery order.
    pub fn from_permutations(
        degree: usize,
        generators: &[Vec<usize>],
        caps: &Caps,
    ) -> Result<(Self, Vec<usize>), GrpError> {
        let closure = PermutationClosure::new(degree, generators, caps)?;
        Ok((closure.group, closure.generator_indices))
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &Vec<Vec<usize>> {
        &self.table
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted multiset of element orders; a cheap isomorphism invariant.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut profile: Vec<usize> = (0..self.order()).map(|a| self.element_order(a)).collect();
        profile.sort_unstable();
        profile
    }

    /// Closure of a seed set under multiplication, as a sorted element list.
    pub fn closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order()];
        in_set[self.identity] = true;
        let mut frontier: Vec<usize> = vec![self.identity];
        for &s in seed {
            if !in_set[s] {
                in_set[s] = true;
                frontier.push(s);
            }
        }
        let mut members = frontier.clone();
        while let Some(x) = frontier.pop() {
            for &s in seed {
                for y in [self.mul(x, s), self.mul(s, x)] {
                    if !in_set[y] {
                        in_set[y] = true;
                        members.push(y);
                        frontier.push(y);
                    }
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// All subgroups, each verified closed, sorted by size then element list.
    pub fn subgroups(&self, caps: &Caps) -> Result<Vec<Subgroup>, GrpError> {
        if self.order() > caps.subgroups {
            return Err(GrpError::CapExceeded {
                what: "subgroup enumeration".into(),
                needed: self.order(),
                cap: caps.subgroups,
            });
        }
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        found.insert(vec![self.identity]);
        let mut frontier: Vec<Vec<usize>> = found.iter().cloned().collect();
        while let Some(h) = frontier.pop() {
            for g in 0..self.order() {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut seed = h.clone();
                seed.push(g);
                let bigger = self.closure(&seed);
                if found.insert(bigger.clone()) {
                    frontier.push(bigger);
                }
            }
        }
        let mut sets: Vec<Vec<usize>> = found.into_iter().collect();
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        sets.into_iter().map(|s| Subgroup::new(self, s)).collect()
    }

    fn conjugate_set(&self, elements: &[usize], by: usize) -> Vec<usize> {
        let mut out: Vec<usize> = elements
            .iter()
            .map(|&x| self.mul(self.mul(by, x), self.inv(by)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_normal(&self, k: &Subgroup) -> bool {
        (0..self.order()).all(|g| self.conjugate_set(&k.elements, g) == k.elements)
    }

    /// Largest normal subgroup contained in `k`: the intersection of all
    /// conjugates of `k`.
    pub fn normal_core(&self, k: &Subgroup) -> Result<Subgroup, GrpError> {
        k.check(self)?;
        let mut core: BTreeSet<usize> = k.elements.iter().copied().collect();
        for g in 0..self.order() {
            let conj: BTreeSet<usize> = self.conjugate_set(&k.elements, g).into_iter().collect();
            core = core.intersection(&conj).copied().collect();
        }
        Subgroup::new(self, core.into_iter().collect())
    }

    /// Quotient by a normal subgroup, on coset representatives (each coset is
    /// represented by its least element), plus the canonical surjection.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, GroupHom), GrpError> {
        n.check(self)?;
        if let Some((element, by)) = self.normality_failure(n) {
            return Err(GrpError::NotNormal { element, by });
        }
        let order = self.order();
        // coset_of[x] = least element of xN
        let mut coset_of = vec![usize::MAX; order];
        for x in 0..order {
            let least = n
                .elements
                .iter()
                .map(|&h| self.mul(x, h))
                .min()
                .expect("subgroup is nonempty");
            coset_of[x] = least;
        }
        let mut reps: Vec<usize> = coset_of.clone();
        reps.sort_unstable();
        reps.dedup();
        let rep_index = |x: usize| reps.binary_search(&coset_of[x]).unwrap();
        let q = reps.len();
        let mut table = vec![vec![0; q]; q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i][j] = rep_index(self.mul(a, b));
            }
        }
        let quotient = FiniteGroup::from_table(&table)?;
        let map: Vec<usize> = (0..order).map(rep_index).collect();
        let hom = GroupHom::new(self, &quotient, map)?;
        debug_assert!(hom.is_surjective());
        Ok((quotient, hom))
    }

    fn normality_failure(&self, n: &Subgroup) -> Option<(usize, usize)> {
        for g in 0..self.order() {
            for &x in &n.elements {
                let conj = self.mul(self.mul(g, x), self.inv(g));
                if n.elements.binary_search(&conj).is_err() {
                    return Some((x, g));
                }
            }
        }
        None
    }

    /// A small generating sequence found greedily, deterministic in element
    /// order.
    pub fn generating_sequence(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut generated = vec![self.identity];
        while generated.len() < self.order() {
            let next = (0..self.order())
                .find(|x| generated.binary_search(x).is_err())
                .expect("group not yet generated");
            gens.push(next);
            generated = self.closure(&gens);
        }
        gens
    }

    /// Search for an isomorphism onto `other` by backtracking on images of a
    /// generating sequence. Deterministic: candidates are tried in element
    /// order, and the first witness found is returned.
    pub fn is_isomorphic(
        &self,
        other: &FiniteGroup,
        caps: &Caps,
    ) -> Result<Option<GroupHom>, GrpError> {
        let n = self.order();
        if n > caps.order || other.order() > caps.order {
            return Err(GrpError::CapExceeded {
                what: "isomorphism search".into(),
                needed: n.max(other.order()),
                cap: caps.order,
            });
        }
        if n != other.order() || self.order_profile() != other.order_profile() {
            return Ok(None);
        }
        let gens = self.generating_sequence();
        // Express every element as a word in the generating sequence so a
        // generator assignment extends to at most one full map.
        let words = self.words_over(&gens);
        let mut images = vec![usize::MAX; gens.len()];
        let found = self.extend_isomorphism(other, &gens, &words, &mut images, 0);
        Ok(found)
    }

    /// For each element, a word (sequence of generator positions) evaluating
    /// to it, found by breadth-first search; `words[identity]` is empty.
    fn words_over(&self, gens: &[usize]) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut words: Vec<Option<Vec<usize>>> = vec![None; n];
        words[self.identity] = Some(Vec::new());
        let mut queue = std::collections::VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (gi, &g) in gens.iter().enumerate() {
                let y = self.mul(g, x);
                if words[y].is_none() {
                    let mut w = words[x].clone().unwrap();
                    w.push(gi);
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        words
            .into_iter()
            .map(|w| w.expect("generating sequence generates"))
            .collect()
    }

    fn extend_isomorphism(
        &self,
        other: &FiniteGroup,
        gens: &[usize],
        words: &[Vec<usize>],
        images: &mut Vec<usize>,
        pos: usize,
    ) -> Option<GroupHom> {
        if pos == gens.len() {
            let map: Vec<usize> = (0..self.order())
                .map(|x| {
                    words[x]
                        .iter()
                        .fold(other.identity(), |acc, &gi| other.mul(images[gi], acc))
                })
                .collect();
            let mut seen = vec![false; other.order()];
            for &v in &map {
                if seen[v] {
                    return None;
                }
                seen[v] = true;
            }
            return GroupHom::new(self, other, map).ok();
        }
        let want = self.element_order(gens[pos]);
        for cand in 0..other.order() {
            if other.element_order(cand) != want {
                continue;
            }
            images[pos] = cand;
            if let Some(hom) = self.extend_isomorphism(other, gens, words, images, pos + 1) {
                return Some(hom);
            }
        }
        images[pos] = usize::MAX;
        None
    }
}

/// A permutation group presented by generators: its multiplication table,
/// the closure's element permutations, and the generator positions.
#[derive(Debug, Clone)]
pub struct PermutationClosure {
    pub group: FiniteGroup,
    pub elements: Vec<Vec<usize>>,
    pub generator_indices: Vec<usize>,
}

impl PermutationClosure {
    pub fn new(degree: usize, generators: &[Vec<usize>], caps: &Caps) -> Result<Self, GrpError> {
        for (i, g) in generators.iter().enumerate() {
            if g.len() != degree || !perm::is_permutation(g) {
                return Err(GrpError::NotLatinSquare(format!(
                    "generator {i} is not a permutation of 0..{degree}"
                )));
            }
        }
        let elements =
            close_permutations(generators, caps.order).ok_or_else(|| GrpError::CapExceeded {
                what: "permutation closure".into(),
                needed: caps.order + 1,
                cap: caps.order,
            })?;
        let index_of = |p: &[usize]| elements.iter().position(|q| q == p).unwrap();
        let n = elements.len();
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                table[a][b] = index_of(&perm::compose(&elements[a], &elements[b]));
            }
        }
        let group = FiniteGroup::from_table(&table)?;
        let generator_indices = generators.iter().map(|g| index_of(g)).collect();
        Ok(PermutationClosure {
            group,
            elements,
            generator_indices,
        })
    }
}

/// Close a set of permutations under composition; `None` if the closure
/// exceeds `cap` elements. Element 0 is the identity.
pub(crate) fn close_permutations(generators: &[Vec<usize>], cap: usize) -> Option<Vec<Vec<usize>>> {
    let degree = generators.first().map_or(0, |g| g.len());
    let id = perm::identity(degree);
    let mut elements = vec![id.clone()];
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([id]);
    let mut head = 0;
    while head < elements.len() {
        let current = elements[head].clone();
        head += 1;
        for g in generators {
            let next = perm::compose(g, &current);
            if seen.insert(next.clone()) {
                if elements.len() + 1 > cap {
                    return None;
                }
                elements.push(next);
            }
        }
    }
    Some(elements)
}

/// A subgroup given by its sorted element list; validated against the parent
/// group at construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn new(parent: &FiniteGroup, mut elements: Vec<usize>) -> Result<Self, GrpError> {
        elements.sort_unstable();
        elements.dedup();
        let sub = Subgroup { elements };
        sub.check(parent)?;
        Ok(sub)
    }

    pub fn trivial(parent: &FiniteGroup) -> Self {
        Subgroup {
            elements: vec![parent.identity()],
        }
    }

    pub fn full(parent: &FiniteGroup) -> Self {
        Subgroup {
            elements: (0..parent.order()).collect(),
        }
    }

    fn check(&self, parent: &FiniteGroup) -> Result<(), GrpError> {
        if self
            .elements
            .binary_search(&parent.identity())
            .is_err()
        {
            return Err(GrpError::NotASubgroup("missing the identity".into()));
        }
        for &x in &self.elements {
            if x >= parent.order() {
                return Err(GrpError::NotASubgroup(format!("element {x} out of range")));
            }
            if self.elements.binary_search(&parent.inv(x)).is_err() {
                return Err(GrpError::NotASubgroup(format!(
                    "not closed under inverse at element {x}"
                )));
            }
            for &y in &self.elements {
                if self.elements.binary_search(&parent.mul(x, y)).is_err() {
                    return Err(GrpError::NotASubgroup(format!(
                        "not closed under multiplication at ({x}, {y})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

/// A verified group homomorphism, stored with copies of its endpoints so it
/// can be checked and composed in isolation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    src: FiniteGroup,
    tgt: FiniteGroup,
    map: Vec<usize>,
}

impl GroupHom {
    pub fn new(src: &FiniteGroup, tgt: &FiniteGroup, map: Vec<usize>) -> Result<Self, GrpError> {
        if map.len() != src.order() {
            return Err(GrpError::NotAHomomorphism(format!(
                "map has {} entries for a group of order {}",
                map.len(),
                src.order()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= tgt.order()) {
            return Err(GrpError::NotAHomomorphism(format!(
                "image {bad} out of range"
            )));
        }
        if map[src.identity()] != tgt.identity() {
            return Err(GrpError::NotAHomomorphism(
                "identity is not mapped to the identity".into(),
            ));
        }
        for a in 0..src.order() {
            for b in 0..src.order() {
                if map[src.mul(a, b)] != tgt.mul(map[a], map[b]) {
                    return Err(GrpError::NotAHomomorphism(format!(
                        "multiplicativity fails at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(GroupHom {
            src: src.clone(),
            tgt: tgt.clone(),
            map,
        })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        GroupHom {
            src: g.clone(),
            tgt: g.clone(),
            map: (0..g.order()).collect(),
        }
    }

    pub fn src(&self) -> &FiniteGroup {
        &self.src
    }

    pub fn tgt(&self) -> &FiniteGroup {
        &self.tgt
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.tgt.order()];
        for &v in &self.map {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.tgt.order()];
        for &v in &self.map {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    pub fn is_bijective(&self) -> bool {
        self.src.order() == self.tgt.order() && self.is_injective()
    }

    pub fn kernel(&self) -> Subgroup {
        let elements: Vec<usize> = (0..self.src.order())
            .filter(|&x| self.map[x] == self.tgt.identity())
            .collect();
        Subgroup { elements }
    }

    /// `self` followed by `next`; the endpoints must agree.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom, GrpError> {
        if self.tgt != next.src {
            return Err(GrpError::NotAHomomorphism(
                "composition endpoint mismatch".into(),
            ));
        }
        let map = self.map.iter().map(|&v| next.map[v]).collect();
        GroupHom::new(&self.src, &next.tgt, map)
    }

    pub fn inverse_bijection(&self) -> Result<GroupHom, GrpError> {
        if !self.is_bijective() {
            return Err(GrpError::NotAHomomorphism(
                "cannot invert a non-bijective homomorphism".into(),
            ));
        }
        let mut map = vec![0; self.tgt.order()];
        for (x, &v) in self.map.iter().enumerate() {
            map[v] = x;
        }
        GroupHom::new(&self.tgt, &self.src, map)
    }
}
