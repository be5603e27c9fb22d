//! Monodromy of locally constant presheaves and the inverse construction.
//!
//! The spanning tree is grown breadth-first from the basepoint over the
//! underlying graph of all non-identity arrows, in stored arrow order;
//! traversing an arrow `f: c -> c'` forward acts as the inverse of the
//! restriction bijection `X(f)`.

use crate::finiteness::locally::is_locally_constant;
use crate::grp::perm;
use crate::site::{Presheaf, PresheafMap, Site, SiteError};

use super::GaloisError;

/// A monodromy action: the basepoint fibre with one permutation per arrow;
/// tree arrows act as the identity and recorded composites are respected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromyAction {
    pub site: Site,
    pub basepoint: usize,
    /// arrow indices of the spanning tree
    pub tree: Vec<usize>,
    /// sorted element names of the basepoint fibre
    pub fibre: Vec<String>,
    /// per arrow: permutation of the fibre (by fibre index)
    pub action: Vec<Vec<usize>>,
}

impl MonodromyAction {
    pub fn new(
        site: Site,
        basepoint: usize,
        tree: Vec<usize>,
        fibre: Vec<String>,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, GaloisError> {
        let m = MonodromyAction {
            site,
            basepoint,
            tree,
            fibre,
            action,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), GaloisError> {
        if self.action.len() != self.site.arrow_count() {
            return Err(GaloisError::InvalidAction(
                "one permutation per arrow is required".into(),
            ));
        }
        for (i, p) in self.action.iter().enumerate() {
            if p.len() != self.fibre.len() || !perm::is_permutation(p) {
                return Err(GaloisError::InvalidAction(format!(
                    "action of `{}` is not a permutation of the fibre",
                    self.site.arrow(i).name
                )));
            }
        }
        for &t in &self.tree {
            if self.action[t] != perm::identity(self.fibre.len()) {
                return Err(GaloisError::InvalidAction(format!(
                    "tree arrow `{}` does not act as the identity",
                    self.site.arrow(t).name
                )));
            }
        }
        for (&(f, g), &h) in self.site.compose_entries() {
            let fg = perm::compose(&self.action[g], &self.action[f]);
            let expected = match h {
                crate::site::MorRef::Id(_) => perm::identity(self.fibre.len()),
                crate::site::MorRef::Arrow(i) => self.action[i].clone(),
            };
            if fg != expected {
                return Err(GaloisError::InvalidAction(format!(
                    "action along `{}` then `{}` disagrees with their composite",
                    self.site.arrow(f).name,
                    self.site.arrow(g).name
                )));
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.fibre.len()
    }
}

/// A monodromy action together with the tree transports that produced it:
/// per object, the bijection from fibre indices to level element indices.
#[derive(Debug, Clone)]
pub struct Monodromy {
    pub action: MonodromyAction,
    pub transports: Vec<Vec<usize>>,
}

/// The spanning tree of a connected site: per object, how it was reached
/// (arrow index and direction), plus the tree arrows.
struct SpanningTree {
    tree_arrows: Vec<usize>,
    /// visit order of objects
    order: Vec<usize>,
    /// per object: Some((arrow, forward)) for non-basepoint objects
    reached_by: Vec<Option<(usize, bool)>>,
}

fn spanning_tree(site: &Site, basepoint: usize) -> Result<SpanningTree, GaloisError> {
    let n = site.object_count();
    let mut reached_by: Vec<Option<(usize, bool)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[basepoint] = true;
    let mut order = vec![basepoint];
    let mut tree_arrows = Vec::new();
    let mut queue = std::collections::VecDeque::from([basepoint]);
    while let Some(o) = queue.pop_front() {
        for (i, a) in site.arrows().iter().enumerate() {
            if a.src == o && !seen[a.tgt] {
                seen[a.tgt] = true;
                reached_by[a.tgt] = Some((i, true));
                tree_arrows.push(i);
                order.push(a.tgt);
                queue.push_back(a.tgt);
            }
            if a.tgt == o && !seen[a.src] {
                seen[a.src] = true;
                reached_by[a.src] = Some((i, false));
                tree_arrows.push(i);
                order.push(a.src);
                queue.push_back(a.src);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(GaloisError::SiteNotConnected);
    }
    Ok(SpanningTree {
        tree_arrows,
        order,
        reached_by,
    })
}

/// The monodromy action of a locally constant presheaf on its basepoint
/// fibre; the basepoint is the lexicographically least object.
pub fn monodromy(x: &Presheaf) -> Result<Monodromy, GaloisError> {
    monodromy_at(x, x.site().basepoint())
}

pub fn monodromy_at(x: &Presheaf, basepoint: usize) -> Result<Monodromy, GaloisError> {
    if !is_locally_constant(x) {
        return Err(GaloisError::NotLocallyConstant);
    }
    let site = x.site().clone();
    let tree = spanning_tree(&site, basepoint)?;
    let degree = x.level_size(basepoint);
    // transports: fibre index -> element index per object
    let mut transports: Vec<Vec<usize>> = vec![Vec::new(); site.object_count()];
    transports[basepoint] = (0..degree).collect();
    for &o in &tree.order {
        let Some((arrow, forward)) = tree.reached_by[o] else {
            continue;
        };
        let a = site.arrow(arrow);
        if forward {
            // reached src -> tgt: forward traversal inverts the restriction
            let inv = perm::inverse(x.restriction(arrow));
            transports[a.tgt] = transports[a.src].iter().map(|&e| inv[e]).collect();
        } else {
            // reached tgt -> src: apply the restriction
            transports[a.src] = transports[a.tgt]
                .iter()
                .map(|&e| x.restriction(arrow)[e])
                .collect();
        }
    }
    let mut action = Vec::with_capacity(site.arrow_count());
    for (i, a) in site.arrows().iter().enumerate() {
        let inv_rest = perm::inverse(x.restriction(i));
        let back = perm::inverse(&transports[a.tgt]);
        let m: Vec<usize> = (0..degree)
            .map(|p| back[inv_rest[transports[a.src][p]]])
            .collect();
        action.push(m);
    }
    let action = MonodromyAction::new(
        site,
        basepoint,
        tree.tree_arrows,
        x.level(basepoint).to_vec(),
        action,
    )?;
    Ok(Monodromy {
        action,
        transports,
    })
}

/// Realise a monodromy action as a presheaf: every level is the fibre and
/// the restriction along an arrow is the inverse of its action.
pub fn presheaf_from_monodromy(m: &MonodromyAction) -> Result<Presheaf, GaloisError> {
    for pair in m.fibre.windows(2) {
        if pair[0] >= pair[1] {
            return Err(GaloisError::InvalidAction(
                "fibre names must be sorted and unique".into(),
            ));
        }
    }
    let sets = vec![m.fibre.clone(); m.site.object_count()];
    let rest = m.action.iter().map(|p| perm::inverse(p)).collect();
    Ok(Presheaf::new(m.site.clone(), sets, rest)?)
}

/// The trivial monodromy realization context of a synthetic presheaf: all
/// transports are the identity.
pub fn synthetic_monodromy(m: MonodromyAction) -> Monodromy {
    let transports = vec![(0..m.fibre.len()).collect(); m.site.object_count()];
    Monodromy {
        action: m,
        transports,
    }
}

/// Lift an equivariant map of basepoint fibres to a map of presheaves, using
/// the tree transports on both sides. Both monodromies must be taken over
/// the same site, basepoint, and (deterministic) spanning tree.
pub fn equivariant_to_map(
    src: &Monodromy,
    src_presheaf: &Presheaf,
    tgt: &Monodromy,
    tgt_presheaf: &Presheaf,
    fibre_map: &[usize],
) -> Result<PresheafMap, GaloisError> {
    if src.action.basepoint != tgt.action.basepoint {
        return Err(GaloisError::InvalidAction(
            "fibre map endpoints have different basepoints".into(),
        ));
    }
    let site = src_presheaf.site();
    let components = (0..site.object_count())
        .map(|o| {
            let back = perm::inverse(&src.transports[o]);
            (0..src_presheaf.level_size(o))
                .map(|e| tgt.transports[o][fibre_map[back[e]]])
                .collect()
        })
        .collect();
    Ok(PresheafMap::new(
        src_presheaf.clone(),
        tgt_presheaf.clone(),
        components,
    )?)
}

/// All equivariant fibre maps between two monodromy actions over the same
/// site, each determined on an orbit by the image of one point.
pub fn equivariant_fibre_maps(src: &MonodromyAction, tgt: &MonodromyAction) -> Vec<Vec<usize>> {
    let n = src.fibre.len();
    let mut out = Vec::new();
    let mut partial = vec![usize::MAX; n];
    fn extend(
        src: &MonodromyAction,
        tgt: &MonodromyAction,
        partial: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some(seed) = partial.iter().position(|&v| v == usize::MAX) else {
            out.push(partial.clone());
            return;
        };
        'candidate: for v in 0..tgt.fibre.len() {
            let mut trail = Vec::new();
            let mut queue = std::collections::VecDeque::from([(seed, v)]);
            let mut ok = true;
            while let Some((p, w)) = queue.pop_front() {
                if partial[p] != usize::MAX {
                    if partial[p] != w {
                        ok = false;
                        break;
                    }
                    continue;
                }
                partial[p] = w;
                trail.push(p);
                for (pa, ta) in src.action.iter().zip(&tgt.action) {
                    queue.push_back((pa[p], ta[w]));
                }
            }
            if ok {
                extend(src, tgt, partial, out);
            }
            for p in trail {
                partial[p] = usize::MAX;
            }
            if !ok {
                continue 'candidate;
            }
        }
    }
    extend(src, tgt, &mut partial, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::galois::are_isomorphic;
    use crate::site::ops::constant;
    use crate::site::stock::*;

    #[test]
    fn constant_presheaf_has_trivial_monodromy() {
        let site = commuting_square_site();
        let x = constant(&site, &["u".into(), "v".into()]);
        let m = monodromy(&x).unwrap();
        for p in &m.action.action {
            assert_eq!(*p, perm::identity(2));
        }
    }

    #[test]
    fn circle_monodromy_composes_the_two_bijections() {
        let site = circle_site();
        let names: Vec<String> = (0..3).map(|i| i.to_string()).collect();
        // a acts as identity (it will be the tree edge), b as a 3-cycle
        let x = Presheaf::new(
            site,
            vec![names.clone(), names],
            vec![vec![0, 1, 2], vec![2, 0, 1]],
        )
        .unwrap();
        let m = monodromy(&x).unwrap();
        assert_eq!(m.action.tree, vec![0]);
        assert_eq!(m.action.action[0], perm::identity(3));
        // monodromy of b = X(a) ∘ X(b)^{-1} on the basepoint fibre
        let expected = perm::compose(&vec![2, 0, 1], &perm::inverse(&vec![2, 0, 1]));
        let _ = expected;
        assert_eq!(m.action.action[1], vec![1, 2, 0]);
    }

    #[test]
    fn roundtrip_is_isomorphic() {
        let site = circle_site();
        let names: Vec<String> = (0..4).map(|i| i.to_string()).collect();
        let x = Presheaf::new(
            site,
            vec![names.clone(), names],
            vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]],
        )
        .unwrap();
        let m = monodromy(&x).unwrap();
        let rebuilt = presheaf_from_monodromy(&m.action).unwrap();
        let iso = are_isomorphic(&x, &rebuilt, &Caps::default())
            .unwrap()
            .expect("roundtrip is isomorphic");
        assert!(iso.is_iso());
        // and the rebuilt presheaf reproduces its own action exactly
        let m2 = monodromy(&rebuilt).unwrap();
        assert_eq!(m2.action.action, m.action.action);
    }

    #[test]
    fn involution_site_monodromy() {
        let site = involution_site();
        let x = Presheaf::new(
            site,
            vec![vec!["p".into(), "q".into()]],
            vec![vec![1, 0]],
        )
        .unwrap();
        let m = monodromy(&x).unwrap();
        // no tree arrows on a one-object site; g acts as the swap
        assert!(m.action.tree.is_empty());
        assert_eq!(m.action.action[0], vec![1, 0]);
    }

    #[test]
    fn equivariant_maps_between_cycles() {
        let site = circle_site();
        let act = |k: usize, shift: usize| {
            MonodromyAction::new(
                site.clone(),
                0,
                vec![0],
                (0..k).map(|i| format!("p{i}")).collect(),
                vec![
                    perm::identity(k),
                    (0..k).map(|i| (i + shift) % k).collect(),
                ],
            )
            .unwrap()
        };
        let four = act(4, 1);
        let two = act(2, 1);
        // four points onto two: exactly two equivariant maps
        assert_eq!(equivariant_fibre_maps(&four, &two).len(), 2);
        // no equivariant map from the 2-cycle to the 4-cycle orbit
        assert_eq!(equivariant_fibre_maps(&two, &four).len(), 0);
    }
}
