//! Finite limits of presheaves, computed levelwise, with mediating-map
//! builders witnessing the universal properties.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use super::{Presheaf, PresheafMap, Site, SiteError, SubPresheaf};

/// The terminal presheaf: a single element `*` at every object.
pub fn terminal(site: &Site) -> Presheaf {
    let sets = vec![vec!["*".to_string()]; site.object_count()];
    let rest = site.arrows().iter().map(|_| vec![0]).collect();
    Presheaf::new(site.clone(), sets, rest).expect("terminal data is a presheaf")
}

/// The unique map to the terminal presheaf.
pub fn bang(x: &Presheaf) -> PresheafMap {
    let tgt = terminal(x.site());
    let components = x.levels().iter().map(|l| vec![0; l.len()]).collect();
    PresheafMap::new(x.clone(), tgt, components).expect("the terminal map is natural")
}

fn ensure_same_site(x: &Presheaf, y: &Presheaf) -> Result<(), SiteError> {
    if x.same_site(y) {
        Ok(())
    } else {
        Err(SiteError::CategoryMismatch(
            "operands live on different sites".into(),
        ))
    }
}

/// A binary product with its projections.
#[derive(Debug, Clone)]
pub struct ProductData {
    pub object: Presheaf,
    pub left: PresheafMap,
    pub right: PresheafMap,
    /// per object: the (left, right) index pair of each product element
    pairs: Vec<Vec<(usize, usize)>>,
    index: Vec<BTreeMap<(usize, usize), usize>>,
}

pub fn product(x: &Presheaf, y: &Presheaf) -> Result<ProductData, SiteError> {
    ensure_same_site(x, y)?;
    let site = x.site().clone();
    let mut sets = Vec::new();
    let mut pairs = Vec::new();
    let mut index = Vec::new();
    for o in 0..site.object_count() {
        let mut named: Vec<(String, (usize, usize))> = Vec::new();
        for xi in 0..x.level_size(o) {
            for yi in 0..y.level_size(o) {
                named.push((
                    format!("({}|{})", x.elem_name(o, xi), y.elem_name(o, yi)),
                    (xi, yi),
                ));
            }
        }
        named.sort();
        let mut level_index = BTreeMap::new();
        for (i, (_, p)) in named.iter().enumerate() {
            level_index.insert(*p, i);
        }
        sets.push(named.iter().map(|(n, _)| n.clone()).collect());
        pairs.push(named.into_iter().map(|(_, p)| p).collect::<Vec<_>>());
        index.push(level_index);
    }
    let rest = site
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            pairs[a.tgt]
                .iter()
                .map(|&(xi, yi)| index[a.src][&(x.restriction(i)[xi], y.restriction(i)[yi])])
                .collect()
        })
        .collect();
    let object = Presheaf::new(site, sets, rest)?;
    let left = PresheafMap::new(
        object.clone(),
        x.clone(),
        pairs.iter().map(|l| l.iter().map(|p| p.0).collect()).collect(),
    )?;
    let right = PresheafMap::new(
        object.clone(),
        y.clone(),
        pairs.iter().map(|l| l.iter().map(|p| p.1).collect()).collect(),
    )?;
    Ok(ProductData {
        object,
        left,
        right,
        pairs,
        index,
    })
}

impl ProductData {
    pub fn pair_index(&self, o: usize, left: usize, right: usize) -> usize {
        self.index[o][&(left, right)]
    }

    pub fn pair_at(&self, o: usize, e: usize) -> (usize, usize) {
        self.pairs[o][e]
    }

    /// The unique map `Z -> X x Y` with the given projections.
    pub fn mediate(&self, f: &PresheafMap, g: &PresheafMap) -> Result<PresheafMap, SiteError> {
        if f.src() != g.src() {
            return Err(SiteError::CategoryMismatch(
                "cone legs have different apexes".into(),
            ));
        }
        if f.tgt() != self.left.tgt() || g.tgt() != self.right.tgt() {
            return Err(SiteError::CategoryMismatch(
                "cone legs do not match the product factors".into(),
            ));
        }
        let components = (0..f.src().site().object_count())
            .map(|o| {
                (0..f.src().level_size(o))
                    .map(|z| self.pair_index(o, f.apply(o, z), g.apply(o, z)))
                    .collect()
            })
            .collect();
        PresheafMap::new(f.src().clone(), self.object.clone(), components)
    }
}

/// An equalizer, kept as a subpresheaf of the common source together with
/// its realisation and inclusion.
#[derive(Debug, Clone)]
pub struct EqualizerData {
    pub sub: SubPresheaf,
    pub object: Presheaf,
    pub include: PresheafMap,
    members: Vec<Vec<usize>>,
}

pub fn equalizer(f: &PresheafMap, g: &PresheafMap) -> Result<EqualizerData, SiteError> {
    if f.src() != g.src() || f.tgt() != g.tgt() {
        return Err(SiteError::CategoryMismatch(
            "equalizer needs a parallel pair".into(),
        ));
    }
    let x = f.src();
    let chosen: Vec<BTreeSet<usize>> = (0..x.site().object_count())
        .map(|o| {
            (0..x.level_size(o))
                .filter(|&e| f.apply(o, e) == g.apply(o, e))
                .collect()
        })
        .collect();
    let sub = SubPresheaf::new(x.clone(), chosen)?;
    let (object, include) = sub.to_presheaf();
    let members = sub.chosen().iter().map(|s| s.iter().copied().collect()).collect();
    Ok(EqualizerData {
        sub,
        object,
        include,
        members,
    })
}

impl EqualizerData {
    /// Factor a fork `h: Z -> X` (with `h;f = h;g`) through the equalizer.
    pub fn factor(&self, h: &PresheafMap) -> Result<PresheafMap, SiteError> {
        if h.tgt() != self.include.tgt() {
            return Err(SiteError::CategoryMismatch(
                "fork does not land in the equalized object".into(),
            ));
        }
        let components = (0..h.src().site().object_count())
            .map(|o| {
                (0..h.src().level_size(o))
                    .map(|z| {
                        self.members[o]
                            .binary_search(&h.apply(o, z))
                            .map_err(|_| {
                                SiteError::NotAPresheaf(
                                    "fork does not equalize the pair".into(),
                                )
                            })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        PresheafMap::new(h.src().clone(), self.object.clone(), components)
    }
}

/// A pullback of a cospan, with both projections.
#[derive(Debug, Clone)]
pub struct PullbackData {
    pub object: Presheaf,
    pub to_left: PresheafMap,
    pub to_right: PresheafMap,
    members: Vec<Vec<usize>>,
    product: ProductData,
}

pub fn pullback(f: &PresheafMap, g: &PresheafMap) -> Result<PullbackData, SiteError> {
    if f.tgt() != g.tgt() {
        return Err(SiteError::CategoryMismatch(
            "pullback needs a cospan".into(),
        ));
    }
    let prod = product(f.src(), g.src())?;
    let chosen: Vec<BTreeSet<usize>> = (0..prod.object.site().object_count())
        .map(|o| {
            (0..prod.object.level_size(o))
                .filter(|&e| {
                    let (xi, yi) = prod.pair_at(o, e);
                    f.apply(o, xi) == g.apply(o, yi)
                })
                .collect()
        })
        .collect();
    let sub = SubPresheaf::new(prod.object.clone(), chosen)?;
    let (object, include) = sub.to_presheaf();
    let members: Vec<Vec<usize>> = sub
        .chosen()
        .iter()
        .map(|s| s.iter().copied().collect())
        .collect();
    let to_left = include.then(&prod.left)?;
    let to_right = include.then(&prod.right)?;
    Ok(PullbackData {
        object,
        to_left,
        to_right,
        members,
        product: prod,
    })
}

impl PullbackData {
    pub fn mediate(&self, p: &PresheafMap, q: &PresheafMap) -> Result<PresheafMap, SiteError> {
        if p.src() != q.src() {
            return Err(SiteError::CategoryMismatch(
                "cone legs have different apexes".into(),
            ));
        }
        let components = (0..p.src().site().object_count())
            .map(|o| {
                (0..p.src().level_size(o))
                    .map(|z| {
                        let pair = self.product.pair_index(o, p.apply(o, z), q.apply(o, z));
                        self.members[o].binary_search(&pair).map_err(|_| {
                            SiteError::NotAPresheaf("cone does not commute with the cospan".into())
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        PresheafMap::new(p.src().clone(), self.object.clone(), components)
    }
}

#[cfg(test)]
mod tests {
    use super::super::ops::constant;
    use super::super::stock::*;
    use super::*;

    fn two_by_swap() -> Presheaf {
        let site = circle_site();
        Presheaf::new(
            site,
            vec![vec!["0".into(), "1".into()], vec!["0".into(), "1".into()]],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap()
    }

    fn two_constant_on_circle() -> Presheaf {
        constant(&circle_site(), &["0".into(), "1".into()])
    }

    #[test]
    fn product_with_terminal_is_isomorphic_to_x() {
        let x = two_by_swap();
        let t = terminal(x.site());
        let p = product(&x, &t).unwrap();
        assert!(p.left.is_iso());
        let mediated = p.mediate(&PresheafMap::identity(&x), &bang(&x)).unwrap();
        assert!(mediated.is_iso());
    }

    #[test]
    fn product_of_swap_and_identity_monodromy() {
        let x = two_by_swap();
        let y = two_constant_on_circle();
        let p = product(&x, &y).unwrap();
        assert_eq!(p.object.level_size(0), 4);
        assert_eq!(p.object.level_size(1), 4);
        // the swap factor acts on the first coordinate only
        let b = x.site().arrow_index("b").unwrap();
        let swapped: Vec<usize> = p.object.restriction(b).to_vec();
        assert_ne!(swapped, (0..4).collect::<Vec<_>>());
    }

    #[test]
    fn equalizer_of_equal_maps_is_everything() {
        let x = two_by_swap();
        let id = PresheafMap::identity(&x);
        let eq = equalizer(&id, &id).unwrap();
        assert!(eq.include.is_iso());
        let back = eq.factor(&id).unwrap();
        assert!(back.is_iso());
    }

    #[test]
    fn pullback_of_cospan_counts_matching_pairs() {
        // pull back the two inclusions of the terminal into a 2-element
        // constant: a single matching pair per choice
        let site = trivial_site();
        let two = constant(&site, &["0".into(), "1".into()]);
        let t = terminal(&site);
        let f = PresheafMap::new(t.clone(), two.clone(), vec![vec![0]]).unwrap();
        let g = PresheafMap::new(t.clone(), two.clone(), vec![vec![1]]).unwrap();
        let same = pullback(&f, &f).unwrap();
        assert_eq!(same.object.total_size(), 1);
        let disjoint = pullback(&f, &g).unwrap();
        assert_eq!(disjoint.object.total_size(), 0);
    }

    #[test]
    fn mediating_maps_are_unique_on_a_small_instance() {
        // universal property check by exhaustive search: every cone through
        // the product factors uniquely
        let x = two_by_swap();
        let y = two_constant_on_circle();
        let p = product(&x, &y).unwrap();
        let z = terminal(x.site());
        for fx in 0..2 {
            // maps z -> x: pick an element of x at each level, natural ones only
            let f = PresheafMap::new(z.clone(), x.clone(), vec![vec![fx], vec![fx]]);
            let Ok(f) = f else { continue };
            for gy in 0..2 {
                let g = PresheafMap::new(z.clone(), y.clone(), vec![vec![gy], vec![gy]]).unwrap();
                let m = p.mediate(&f, &g).unwrap();
                assert_eq!(m.then(&p.left).unwrap(), f);
                assert_eq!(m.then(&p.right).unwrap(), g);
                // uniqueness: any other map with these projections equals m
                for cand0 in 0..4 {
                    for cand1 in 0..4 {
                        let candidate = PresheafMap::new(
                            z.clone(),
                            p.object.clone(),
                            vec![vec![cand0], vec![cand1]],
                        );
                        let Ok(candidate) = candidate else { continue };
                        if candidate.then(&p.left).unwrap() == f
                            && candidate.then(&p.right).unwrap() == g
                        {
                            assert_eq!(candidate, m);
                        }
                    }
                }
            }
        }
    }
}
