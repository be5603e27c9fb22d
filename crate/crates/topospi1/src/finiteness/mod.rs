//! The finiteness calculus on presheaves: connected components, complemented
//! subobjects, decidability, local constancy and local finiteness,
//! Kuratowski-finiteness, and splitting objects.
//!
//! Implemented characterizations (proofs in `docs/characterizations.md`):
//! a subobject is complemented iff its levelwise complement is
//! restriction-closed; an object is decidable iff all its restriction maps
//! are injective; it is locally constant iff they are all bijective, with
//! the representables as a trivializing cover. The definitional forms are
//! kept alongside and cross-checked in tests.

pub mod kuratowski;
pub mod locally;
pub mod report;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::site::limits::{product, ProductData};
use crate::site::{Presheaf, SiteError, SubPresheaf};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinitenessError {
    #[error("site is not connected")]
    SiteNotConnected,
    #[error("object is not decidable")]
    NotDecidable,
    #[error("object is not locally finite")]
    NotLocallyFinite,
    #[error("cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: String,
        needed: usize,
        cap: usize,
    },
    #[error(transparent)]
    Site(#[from] SiteError),
}

/// A decomposition of a presheaf into its connected components.
#[derive(Debug, Clone)]
pub struct ComponentDecomposition {
    /// pairwise disjoint, restriction-closed, connected parts covering the
    /// presheaf, ordered by their least global element label
    pub parts: Vec<SubPresheaf>,
    /// per (object, element): index of the containing part
    pub assignment: Vec<Vec<usize>>,
}

impl ComponentDecomposition {
    pub fn component_count(&self) -> usize {
        self.parts.len()
    }

    /// Nonzero with exactly one component.
    pub fn is_connected(&self) -> bool {
        self.parts.len() == 1
    }

    /// The union of a subset of parts, always a complemented subobject.
    pub fn union_of(&self, indices: &[usize]) -> SubPresheaf {
        let parent = if let Some(first) = self.parts.first() {
            first.parent().clone()
        } else {
            panic!("union_of on an empty decomposition");
        };
        let mut chosen = vec![BTreeSet::new(); parent.site().object_count()];
        for &i in indices {
            for (o, set) in self.parts[i].chosen().iter().enumerate() {
                chosen[o].extend(set.iter().copied());
            }
        }
        SubPresheaf::new(parent, chosen).expect("union of parts is restriction-closed")
    }
}

/// Connected components via union-find over the category of elements:
/// elements are related when one restricts to the other.
pub fn connected_components(x: &Presheaf) -> ComponentDecomposition {
    let site = x.site();
    // global element ids
    let mut offset = vec![0usize; site.object_count()];
    let mut total = 0;
    for o in 0..site.object_count() {
        offset[o] = total;
        total += x.level_size(o);
    }
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut Vec<usize>, v: usize) -> usize {
        if parent[v] != v {
            let root = find(parent, parent[v]);
            parent[v] = root;
            root
        } else {
            v
        }
    }
    for (i, a) in site.arrows().iter().enumerate() {
        for e in 0..x.level_size(a.tgt) {
            let up = offset[a.tgt] + e;
            let down = offset[a.src] + x.restriction(i)[e];
            let (ru, rd) = (find(&mut parent, up), find(&mut parent, down));
            if ru != rd {
                parent[ru.max(rd)] = ru.min(rd);
            }
        }
    }
    // group by root, order parts by least global label
    let mut roots: Vec<usize> = (0..total).map(|v| find(&mut parent, v)).collect();
    let mut root_list: Vec<usize> = roots.clone();
    root_list.sort_unstable();
    root_list.dedup();
    let label_of = |v: usize| {
        let o = (0..site.object_count())
            .rev()
            .find(|&o| offset[o] <= v)
            .unwrap();
        x.global_label(o, v - offset[o])
    };
    let mut keyed: Vec<(String, usize)> = root_list
        .iter()
        .map(|&r| {
            let least = (0..total)
                .filter(|&v| roots[v] == r)
                .map(label_of)
                .min()
                .unwrap();
            (least, r)
        })
        .collect();
    keyed.sort();
    let part_of_root = |r: usize| keyed.iter().position(|&(_, root)| root == r).unwrap();
    let mut chosen_per_part: Vec<Vec<BTreeSet<usize>>> =
        vec![vec![BTreeSet::new(); site.object_count()]; keyed.len()];
    let mut assignment: Vec<Vec<usize>> = (0..site.object_count())
        .map(|o| vec![usize::MAX; x.level_size(o)])
        .collect();
    for o in 0..site.object_count() {
        for e in 0..x.level_size(o) {
            let part = part_of_root(roots[offset[o] + e]);
            chosen_per_part[part][o].insert(e);
            assignment[o][e] = part;
        }
    }
    roots.clear();
    let parts = chosen_per_part
        .into_iter()
        .map(|chosen| {
            SubPresheaf::new(x.clone(), chosen).expect("components are restriction-closed")
        })
        .collect();
    ComponentDecomposition { parts, assignment }
}

/// The complement of a subobject, if the levelwise set complement is itself
/// restriction-closed; exactly complementedness for presheaves.
pub fn is_complemented(sub: &SubPresheaf) -> Option<SubPresheaf> {
    SubPresheaf::new(sub.parent().clone(), sub.complement_sets()).ok()
}

/// The diagonal of `X` inside `X x X`, with its ambient product.
pub fn diagonal(x: &Presheaf) -> Result<(ProductData, SubPresheaf), SiteError> {
    let square = product(x, x)?;
    let chosen = (0..x.site().object_count())
        .map(|o| {
            (0..square.object.level_size(o))
                .filter(|&e| {
                    let (a, b) = square.pair_at(o, e);
                    a == b
                })
                .collect()
        })
        .collect();
    let sub = SubPresheaf::new(square.object.clone(), chosen)?;
    Ok((square, sub))
}

/// Decidability: the diagonal is complemented in `X x X`. Returns the
/// complement of the diagonal as witness.
pub fn is_decidable(x: &Presheaf) -> Option<SubPresheaf> {
    let (_, diag) = diagonal(x).ok()?;
    is_complemented(&diag)
}

/// The implemented characterization of decidability; equivalent to
/// [`is_decidable`] and cross-checked by property tests.
pub fn has_injective_restrictions(x: &Presheaf) -> bool {
    x.site().arrows().iter().enumerate().all(|(i, _)| {
        let r = x.restriction(i);
        let mut seen = vec![false; x.level_size(x.site().arrow(i).src)];
        r.iter().all(|&v| {
            if seen[v] {
                false
            } else {
                seen[v] = true;
                true
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::ops::{constant, representable};
    use crate::site::stock::*;
    use crate::site::Presheaf;

    #[test]
    fn representables_are_connected() {
        let site = commuting_square_site();
        for c in 0..site.object_count() {
            let y = representable(&site, c);
            let d = connected_components(&y);
            assert_eq!(d.component_count(), 1, "object {c}");
        }
    }

    #[test]
    fn constants_split_into_singletons() {
        let site = circle_site();
        for n in 0..4 {
            let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
            let x = constant(&site, &names);
            assert_eq!(connected_components(&x).component_count(), n);
        }
    }

    #[test]
    fn circle_orbits_give_components() {
        // fibre {0,1,2,3}, monodromy (01)(23) against identity: 2 components
        let site = circle_site();
        let names: Vec<String> = (0..4).map(|i| i.to_string()).collect();
        let x = Presheaf::new(
            site,
            vec![names.clone(), names.clone()],
            vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2]],
        )
        .unwrap();
        let d = connected_components(&x);
        assert_eq!(d.component_count(), 2);
        assert_eq!(d.parts[0].total_size(), 4);
        // unions of parts are complemented with the remaining parts as
        // complement
        let u = d.union_of(&[0]);
        let c = is_complemented(&u).unwrap();
        assert_eq!(c.total_size(), 4);
    }

    #[test]
    fn whole_object_complement_is_initial() {
        let site = arrow_site();
        let x = Presheaf::new(
            site,
            vec![vec!["a".into(), "b".into()], vec!["c".into()]],
            vec![vec![0]],
        )
        .unwrap();
        let full = SubPresheaf::full(&x);
        let complement = is_complemented(&full).unwrap();
        assert!(complement.is_empty_sub());
    }

    #[test]
    fn non_closed_complement_is_rejected() {
        // X(x) = {a, b}, X(y) = {c}, c restricts to a; the subobject {a}
        // has complement {b, c} whose restriction image a escapes
        let site = arrow_site();
        let x = Presheaf::new(
            site,
            vec![vec!["a".into(), "b".into()], vec!["c".into()]],
            vec![vec![0]],
        )
        .unwrap();
        let sub = SubPresheaf::new(
            x.clone(),
            vec![BTreeSet::from([0]), BTreeSet::new()],
        )
        .unwrap();
        assert!(is_complemented(&sub).is_none());
    }

    #[test]
    fn constants_are_decidable() {
        let site = commuting_square_site();
        let x = constant(&site, &["0".into(), "1".into()]);
        assert!(is_decidable(&x).is_some());
        assert!(has_injective_restrictions(&x));
    }

    #[test]
    fn non_injective_restriction_is_not_decidable() {
        let site = arrow_site();
        let x = Presheaf::new(
            site,
            vec![vec!["a".into()], vec!["c0".into(), "c1".into()]],
            vec![vec![0, 0]],
        )
        .unwrap();
        assert!(is_decidable(&x).is_none());
        assert!(!has_injective_restrictions(&x));
    }

    #[test]
    fn decidable_routes_agree_on_small_corpus() {
        // diagonal-complement route == injective-restrictions route
        let site = arrow_site();
        for a in 0..=2usize {
            for b in 0..=2usize {
                for mask in 0..a.max(1).pow(b as u32) {
                    let mut rest = Vec::new();
                    let mut m = mask;
                    let mut ok = a > 0 || b == 0;
                    for _ in 0..b {
                        if a == 0 {
                            ok = false;
                            break;
                        }
                        rest.push(m % a);
                        m /= a;
                    }
                    if !ok {
                        continue;
                    }
                    let x = Presheaf::new(
                        site.clone(),
                        vec![
                            (0..a).map(|i| format!("a{i}")).collect(),
                            (0..b).map(|i| format!("b{i}")).collect(),
                        ],
                        vec![rest],
                    )
                    .unwrap();
                    assert_eq!(
                        is_decidable(&x).is_some(),
                        has_injective_restrictions(&x),
                        "a={a} b={b} mask={mask}"
                    );
                }
            }
        }
    }
}
