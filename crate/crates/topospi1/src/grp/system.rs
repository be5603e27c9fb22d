//! Finite inverse systems of finite groups and their limits.
//!
//! A `GroupSystem` is a finite poset of nodes, a group per node, and a
//! surjective transition homomorphism from the group at `b` to the group at
//! `a` for every stored relation `a <= b`. Transitions must compose
//! compatibly wherever chains are stored. The limit is the group of families
//! that are compatible under every transition.

use std::collections::BTreeMap;

use super::{FiniteGroup, GroupHom, GrpError};
use crate::caps::Caps;

#[derive(Debug, Clone)]
pub struct GroupSystem {
    node_ids: Vec<String>,
    groups: Vec<FiniteGroup>,
    /// `(lo, hi) -> hom from groups[hi] onto groups[lo]` for each relation
    /// `lo <= hi`.
    edges: BTreeMap<(usize, usize), GroupHom>,
}

impl GroupSystem {
    pub fn new(
        node_ids: Vec<String>,
        groups: Vec<FiniteGroup>,
        edges: BTreeMap<(usize, usize), GroupHom>,
    ) -> Result<Self, GrpError> {
        if node_ids.len() != groups.len() {
            return Err(GrpError::IncompatibleSystem(
                "node and group counts differ".into(),
            ));
        }
        for (&(lo, hi), hom) in &edges {
            if lo >= groups.len() || hi >= groups.len() || lo == hi {
                return Err(GrpError::IncompatibleSystem(format!(
                    "edge ({lo}, {hi}) does not join two distinct nodes"
                )));
            }
            if hom.src() != &groups[hi] || hom.tgt() != &groups[lo] {
                return Err(GrpError::IncompatibleSystem(format!(
                    "edge ({lo}, {hi}) does not map the group at {hi} to the group at {lo}"
                )));
            }
            if !hom.is_surjective() {
                return Err(GrpError::IncompatibleSystem(format!(
                    "edge ({lo}, {hi}) is not surjective"
                )));
            }
        }
        let system = GroupSystem {
            node_ids,
            groups,
            edges,
        };
        system.check_functoriality()?;
        Ok(system)
    }

    /// Single-node system.
    pub fn singleton(id: String, group: FiniteGroup) -> Self {
        GroupSystem {
            node_ids: vec![id],
            groups: vec![group],
            edges: BTreeMap::new(),
        }
    }

    fn check_functoriality(&self) -> Result<(), GrpError> {
        for (&(a, b), low) in &self.edges {
            for (&(b2, c), high) in &self.edges {
                if b2 != b {
                    continue;
                }
                // a <= b <= c: the composite must be the stored a <= c edge
                let Some(direct) = self.edges.get(&(a, c)) else {
                    return Err(GrpError::IncompatibleSystem(format!(
                        "relations ({a}, {b}) and ({b}, {c}) are stored but ({a}, {c}) is missing"
                    )));
                };
                let composite = high.then(low)?;
                if composite.map() != direct.map() {
                    return Err(GrpError::IncompatibleSystem(format!(
                        "transition along {c} -> {b} -> {a} differs from the direct {c} -> {a}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn node_ids(&self) -> &[String] {
        &self.node_ids
    }

    pub fn group_at(&self, node: usize) -> &FiniteGroup {
        &self.groups[node]
    }

    pub fn edge(&self, lo: usize, hi: usize) -> Option<&GroupHom> {
        self.edges.get(&(lo, hi))
    }

    pub fn edges(&self) -> impl Iterator<Item = (&(usize, usize), &GroupHom)> {
        self.edges.iter()
    }

    /// Whether any two nodes have a common upper bound inside the system.
    /// Truncated systems legitimately fail this; the limit is still the
    /// group of compatible families.
    pub fn is_codirected(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).any(|t| {
                    (t == a || self.edges.contains_key(&(a, t)))
                        && (t == b || self.edges.contains_key(&(b, t)))
                })
            })
        })
    }

    /// A node admitting a transition onto every other node, if one exists.
    pub fn top_node(&self) -> Option<usize> {
        let n = self.len();
        (0..n).find(|&t| (0..n).all(|a| a == t || self.edges.contains_key(&(a, t))))
    }

    /// The limit: families compatible under every transition, as a
    /// `FiniteGroup` together with the projection onto every node.
    ///
    /// When the system has a top node the limit is that node's group (each
    /// family is determined by its top component, and every top component
    /// extends by functoriality), so no enumeration is needed. Otherwise
    /// families are enumerated directly, guarded by the product cap.
    pub fn limit(&self, caps: &Caps) -> Result<SystemLimit, GrpError> {
        if self.is_empty() {
            return Err(GrpError::IncompatibleSystem("empty system".into()));
        }
        if let Some(top) = self.top_node() {
            let group = self.groups[top].clone();
            let projections = (0..self.len())
                .map(|a| {
                    if a == top {
                        GroupHom::identity(&group)
                    } else {
                        self.edges[&(a, top)].clone()
                    }
                })
                .collect();
            return Ok(SystemLimit { group, projections });
        }

        let mut product: usize = 1;
        for g in &self.groups {
            product = product.saturating_mul(g.order());
            if product > caps.system {
                return Err(GrpError::CapExceeded {
                    what: "inverse limit product".into(),
                    needed: product,
                    cap: caps.system,
                });
            }
        }
        // assign nodes in descending group order: larger groups constrain more
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.groups[i].order()));
        let mut families = Vec::new();
        let mut partial = vec![usize::MAX; self.len()];
        self.enumerate_families(&order, 0, &mut partial, &mut families);
        if families.len() > caps.order {
            return Err(GrpError::CapExceeded {
                what: "inverse limit order".into(),
                needed: families.len(),
                cap: caps.order,
            });
        }
        families.sort_unstable();
        let index_of = |f: &Vec<usize>| families.binary_search(f).unwrap();
        let n = families.len();
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let prod: Vec<usize> = (0..self.len())
                    .map(|i| self.groups[i].mul(families[a][i], families[b][i]))
                    .collect();
                table[a][b] = index_of(&prod);
            }
        }
        let group = FiniteGroup::from_table(&table)?;
        let projections = (0..self.len())
            .map(|i| {
                let map = families.iter().map(|f| f[i]).collect();
                GroupHom::new(&group, &self.groups[i], map)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SystemLimit { group, projections })
    }

    fn enumerate_families(
        &self,
        order: &[usize],
        pos: usize,
        partial: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos == order.len() {
            out.push(partial.clone());
            return;
        }
        let node = order[pos];
        'candidate: for x in 0..self.groups[node].order() {
            // check every constraint against already assigned nodes
            for &(lo, hi) in self.edges.keys() {
                if lo == node && partial[hi] != usize::MAX {
                    if self.edges[&(lo, hi)].apply(partial[hi]) != x {
                        continue 'candidate;
                    }
                }
                if hi == node && partial[lo] != usize::MAX {
                    if self.edges[&(lo, hi)].apply(x) != partial[lo] {
                        continue 'candidate;
                    }
                }
            }
            partial[node] = x;
            self.enumerate_families(order, pos + 1, partial, out);
            partial[node] = usize::MAX;
        }
    }
}

#[derive(Debug, Clone)]
pub struct SystemLimit {
    pub group: FiniteGroup,
    /// One projection per node, in node order.
    pub projections: Vec<GroupHom>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::testutil::cyclic_group;
    use crate::grp::Subgroup;

    fn mod_hom(src: &FiniteGroup, tgt: &FiniteGroup) -> GroupHom {
        // canonical surjection Z/a -> Z/b for b | a with elements as residues
        let map = (0..src.order()).map(|x| x % tgt.order()).collect();
        GroupHom::new(src, tgt, map).unwrap()
    }

    #[test]
    fn single_node_limit_is_the_group() {
        let g = cyclic_group(5);
        let sys = GroupSystem::singleton("g".into(), g.clone());
        let lim = sys.limit(&Caps::default()).unwrap();
        assert_eq!(lim.group, g);
        assert!(lim.projections[0].is_bijective());
    }

    #[test]
    fn chain_limit_is_the_top() {
        let z2 = cyclic_group(2);
        let z4 = cyclic_group(4);
        let z8 = cyclic_group(8);
        let mut edges = BTreeMap::new();
        edges.insert((0, 1), mod_hom(&z4, &z2));
        edges.insert((0, 2), mod_hom(&z8, &z2));
        edges.insert((1, 2), mod_hom(&z8, &z4));
        let sys = GroupSystem::new(
            vec!["z2".into(), "z4".into(), "z8".into()],
            vec![z2, z4, z8.clone()],
            edges,
        )
        .unwrap();
        assert!(sys.is_codirected());
        assert_eq!(sys.top_node(), Some(2));
        let lim = sys.limit(&Caps::default()).unwrap();
        assert_eq!(lim.group, z8);
        for p in &lim.projections {
            assert!(p.is_surjective());
        }
    }

    #[test]
    fn z2_z3_with_upper_bound_z6() {
        let z2 = cyclic_group(2);
        let z3 = cyclic_group(3);
        let z6 = cyclic_group(6);
        let mut edges = BTreeMap::new();
        edges.insert((0, 2), mod_hom(&z6, &z2));
        edges.insert((1, 2), mod_hom(&z6, &z3));
        let sys = GroupSystem::new(
            vec!["z2".into(), "z3".into(), "z6".into()],
            vec![z2.clone(), z3.clone(), z6.clone()],
            edges,
        )
        .unwrap();
        let lim = sys.limit(&Caps::default()).unwrap();
        assert_eq!(lim.group.order(), 6);
        // Oracle: brute-force compatible triples.
        let mut count = 0;
        for a in 0..2 {
            for b in 0..3 {
                for c in 0..6 {
                    if c % 2 == a && c % 3 == b {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 6);
    }

    #[test]
    fn divisibility_system_without_top() {
        // nodes Z/1..Z/4 with mod maps where divisibility holds, no common
        // upper bound for 3 and 4: the limit is Z/12
        let groups: Vec<FiniteGroup> = (1..=4).map(cyclic_group).collect();
        let mut edges = BTreeMap::new();
        for lo in 0..4usize {
            for hi in 0..4usize {
                if lo != hi && (hi + 1) % (lo + 1) == 0 {
                    edges.insert((lo, hi), mod_hom(&groups[hi], &groups[lo]));
                }
            }
        }
        let sys = GroupSystem::new(
            (1..=4).map(|n| format!("z{n}")).collect(),
            groups,
            edges,
        )
        .unwrap();
        assert!(!sys.is_codirected());
        assert_eq!(sys.top_node(), None);
        let lim = sys.limit(&Caps::default()).unwrap();
        assert_eq!(lim.group.order(), 12);
        // cyclic: some element has order 12
        assert!((0..12).any(|x| lim.group.element_order(x) == 12));
    }

    #[test]
    fn functoriality_violation_is_detected() {
        let z4 = cyclic_group(4);
        let z2 = cyclic_group(2);
        // twist the direct edge 0 <= 2 so it disagrees with the composite
        let twisted = GroupHom::new(
            &z4,
            &z2,
            (0..4).map(|x| (x + 1) % 2).collect::<Vec<_>>(),
        );
        // (x+1) % 2 does not fix the identity, so it is already rejected as
        // a homomorphism; use the valid-but-wrong x/2 parity map instead
        assert!(twisted.is_err());
        let wrong = GroupHom::new(&z4, &z2, vec![0, 0, 1, 1]);
        assert!(wrong.is_err(), "x -> x div 2 is not a homomorphism on Z/4");

        // A genuinely incompatible system: missing transitive edge.
        let z8 = cyclic_group(8);
        let mut edges = BTreeMap::new();
        edges.insert((0, 1), mod_hom(&z4, &z2));
        edges.insert((1, 2), mod_hom(&z8, &z4));
        let sys = GroupSystem::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![z2, z4, z8],
            edges,
        );
        assert!(matches!(sys, Err(GrpError::IncompatibleSystem(_))));
    }

    #[test]
    fn non_surjective_edge_is_rejected() {
        let z2 = cyclic_group(2);
        let z4 = cyclic_group(4);
        let embed = GroupHom::new(&z2, &z4, vec![0, 2]).unwrap();
        let mut edges = BTreeMap::new();
        edges.insert((0, 1), embed);
        let sys = GroupSystem::new(
            vec!["z4".into(), "z2".into()],
            vec![z4, z2],
            edges,
        );
        assert!(matches!(sys, Err(GrpError::IncompatibleSystem(_))));
    }

    #[test]
    fn limit_projections_are_homs_with_expected_kernels() {
        let z4 = cyclic_group(4);
        let z2 = cyclic_group(2);
        let mut edges = BTreeMap::new();
        edges.insert((0, 1), mod_hom(&z4, &z2));
        let sys = GroupSystem::new(
            vec!["z2".into(), "z4".into()],
            vec![z2.clone(), z4.clone()],
            edges,
        )
        .unwrap();
        let lim = sys.limit(&Caps::default()).unwrap();
        assert_eq!(lim.group.order(), 4);
        let kernel = lim.projections[0].kernel();
        Subgroup::new(&lim.group, kernel.elements().to_vec()).unwrap();
        assert_eq!(kernel.len(), 2);
    }
}
