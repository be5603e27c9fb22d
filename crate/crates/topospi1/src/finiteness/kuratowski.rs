//! Kuratowski-finiteness through complemented-subobject lattices.
//!
//! At each object `c` the complemented subobjects of `X x y(c)` form a
//! finite lattice. `X` is Kuratowski-finite (given decidability) exactly
//! when, at every `c`, closing the tracked singleton graphs under binary
//! union reaches the whole lattice: the join-closure of singletons is the
//! image of the canonical word-monoid map.

use std::collections::BTreeSet;

use crate::caps::Caps;
use crate::site::limits::{product, ProductData};
use crate::site::ops::representable_with_morphisms;
use crate::site::{Presheaf, SubPresheaf};

use super::{has_injective_restrictions, is_complemented, FinitenessError};

/// The complemented-subobject lattice of `X x y(c)` with its ambient
/// product, enumerated exhaustively under the lattice cap.
#[derive(Debug, Clone)]
pub struct LatticeData {
    pub product: ProductData,
    pub subobjects: Vec<SubPresheaf>,
}

pub fn complemented_subobject_lattice(
    x: &Presheaf,
    c: usize,
    caps: &Caps,
) -> Result<LatticeData, FinitenessError> {
    let site = x.site();
    let (y, _) = representable_with_morphisms(site, c);
    let prod = product(x, &y)?;
    let total = prod.object.total_size();
    if total > caps.lattice {
        return Err(FinitenessError::CapExceeded {
            what: format!("subobject lattice of X x y({})", site.object_name(c)),
            needed: total,
            cap: caps.lattice,
        });
    }
    // canonical order of the product's elements
    let slots: Vec<(usize, usize)> = prod.object.elements().collect();
    let mut subobjects = Vec::new();
    for mask in 0u64..(1u64 << total) {
        let mut chosen = vec![BTreeSet::new(); site.object_count()];
        for (bit, &(o, e)) in slots.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                chosen[o].insert(e);
            }
        }
        let Ok(sub) = SubPresheaf::new(prod.object.clone(), chosen) else {
            continue;
        };
        if is_complemented(&sub).is_some() {
            subobjects.push(sub);
        }
    }
    subobjects.sort_by_key(|s| {
        (
            s.total_size(),
            s.chosen()
                .iter()
                .map(|set| set.iter().copied().collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        )
    });
    Ok(LatticeData {
        product: prod,
        subobjects,
    })
}

/// The tracked graph of an element `a` of `X(c)` inside `X x y(c)`: at each
/// object `d` the pairs `(X(u)(a), u)` over all `u: d -> c`.
pub fn singleton_graph(
    x: &Presheaf,
    c: usize,
    a: usize,
    lattice: &LatticeData,
) -> SubPresheaf {
    let site = x.site();
    let (_, homs) = representable_with_morphisms(site, c);
    let mut chosen = vec![BTreeSet::new(); site.object_count()];
    for (d, level) in homs.iter().enumerate() {
        for (u_idx, &m) in level.iter().enumerate() {
            let tracked = x.restrict(m, a);
            chosen[d].insert(lattice.product.pair_index(d, tracked, u_idx));
        }
    }
    SubPresheaf::new(lattice.product.object.clone(), chosen)
        .expect("singleton graphs are restriction-closed")
}

fn key(sub: &SubPresheaf) -> Vec<Vec<usize>> {
    sub.chosen()
        .iter()
        .map(|s| s.iter().copied().collect())
        .collect()
}

/// Decidable Kuratowski-finiteness: at every object the join-closure of the
/// tracked singletons (with the bottom) equals the full complemented
/// lattice.
pub fn kuratowski_check(x: &Presheaf, caps: &Caps) -> Result<bool, FinitenessError> {
    if !has_injective_restrictions(x) {
        return Err(FinitenessError::NotDecidable);
    }
    for c in 0..x.site().object_count() {
        let lattice = complemented_subobject_lattice(x, c, caps)?;
        let mut closure: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
        let mut worklist: Vec<SubPresheaf> = Vec::new();
        let bottom = SubPresheaf::empty(&lattice.product.object);
        closure.insert(key(&bottom));
        worklist.push(bottom);
        for a in 0..x.level_size(c) {
            let s = singleton_graph(x, c, a, &lattice);
            if closure.insert(key(&s)) {
                worklist.push(s);
            }
        }
        // join-closure under binary union
        let mut members = worklist.clone();
        while let Some(next) = worklist.pop() {
            let mut discovered = Vec::new();
            for other in &members {
                let joined = next.union(other).expect("same parent");
                if closure.insert(key(&joined)) {
                    discovered.push(joined);
                }
            }
            for d in discovered {
                members.push(d.clone());
                worklist.push(d);
            }
        }
        let lattice_keys: BTreeSet<Vec<Vec<usize>>> =
            lattice.subobjects.iter().map(key).collect();
        debug_assert!(
            closure.is_subset(&lattice_keys),
            "joins of complemented singletons stay complemented"
        );
        if closure != lattice_keys {
            return Ok(false);
        }
    }
    Ok(true)
}
