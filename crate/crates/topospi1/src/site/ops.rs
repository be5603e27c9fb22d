//! Constant and representable presheaves, global sections, support, and the
//! slice construction via categories of elements.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::sync::Arc;

use super::limits::terminal;
use super::{Arrow, FiniteCategory, MorRef, Presheaf, PresheafMap, Site, SiteError, SubPresheaf};

/// The constant presheaf on a finite set of names; all restrictions are the
/// identity.
pub fn constant(site: &Site, names: &[String]) -> Presheaf {
    let mut sorted: Vec<String> = names.to_vec();
    sorted.sort();
    sorted.dedup();
    let sets = vec![sorted.clone(); site.object_count()];
    let rest = site
        .arrows()
        .iter()
        .map(|_| (0..sorted.len()).collect())
        .collect();
    Presheaf::new(site.clone(), sets, rest).expect("constant data is a presheaf")
}

/// The representable presheaf of an object: `y(c)(d) = Hom(d, c)`, with
/// restriction along `f: d -> d'` given by precomposition.
pub fn representable(site: &Site, c: usize) -> Presheaf {
    representable_with_morphisms(site, c).0
}

/// The representable presheaf together with, per object, the morphism each
/// sorted element name stands for.
pub fn representable_with_morphisms(site: &Site, c: usize) -> (Presheaf, Vec<Vec<MorRef>>) {
    let mut sets: Vec<Vec<String>> = Vec::new();
    let mut homs: Vec<Vec<MorRef>> = Vec::new();
    for d in 0..site.object_count() {
        let mut named: Vec<(String, MorRef)> = site
            .homs(d, c)
            .into_iter()
            .map(|m| (site.mor_name(m), m))
            .collect();
        named.sort_by(|a, b| a.0.cmp(&b.0));
        sets.push(named.iter().map(|(n, _)| n.clone()).collect());
        homs.push(named.into_iter().map(|(_, m)| m).collect());
    }
    let rest = site
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            homs[a.tgt]
                .iter()
                .map(|&u| {
                    let composite = site.compose_refs(MorRef::Arrow(i), u);
                    homs[a.src]
                        .iter()
                        .position(|&m| m == composite)
                        .expect("composite is a morphism into c")
                })
                .collect()
        })
        .collect();
    let presheaf =
        Presheaf::new(site.clone(), sets, rest).expect("representable data is a presheaf");
    (presheaf, homs)
}

/// One global section: a compatible family of elements, one per object.
pub type GlobalSection = Vec<usize>;

/// All families `(x_o)` with `X(f)(x_{c'}) = x_c` for every arrow
/// `f: c -> c'`; equivalently, maps from the terminal presheaf.
pub fn global_sections(x: &Presheaf) -> Vec<GlobalSection> {
    let site = x.site();
    let n = site.object_count();
    let mut out = Vec::new();
    let mut partial: Vec<usize> = vec![usize::MAX; n];
    fn descend(
        x: &Presheaf,
        partial: &mut Vec<usize>,
        next: usize,
        out: &mut Vec<GlobalSection>,
    ) {
        let n = x.site().object_count();
        if next == n {
            out.push(partial.clone());
            return;
        }
        'cand: for e in 0..x.level_size(next) {
            partial[next] = e;
            for (i, a) in x.site().arrows().iter().enumerate() {
                if a.src <= next && a.tgt <= next && partial[a.src] != usize::MAX && partial[a.tgt] != usize::MAX {
                    if x.restriction(i)[partial[a.tgt]] != partial[a.src] {
                        partial[next] = usize::MAX;
                        continue 'cand;
                    }
                }
            }
            descend(x, partial, next + 1, out);
            partial[next] = usize::MAX;
        }
    }
    descend(x, &mut partial, 0, &mut out);
    out
}

/// Realise a global section as a map from the terminal presheaf.
pub fn section_as_map(x: &Presheaf, section: &GlobalSection) -> Result<PresheafMap, SiteError> {
    let t = terminal(x.site());
    let components = section.iter().map(|&e| vec![e]).collect();
    PresheafMap::new(t, x.clone(), components)
}

/// The support of a presheaf: the subterminal present exactly where the
/// presheaf is nonempty. Always restriction-closed, since nonemptiness
/// propagates contravariantly.
pub fn support(x: &Presheaf) -> SubPresheaf {
    let t = terminal(x.site());
    let chosen = (0..x.site().object_count())
        .map(|o| {
            if x.level_size(o) > 0 {
                BTreeSet::from([0usize])
            } else {
                BTreeSet::new()
            }
        })
        .collect();
    SubPresheaf::new(t, chosen).expect("support is restriction-closed")
}

/// Whether the presheaf is nonempty at every object, i.e. its support is the
/// whole terminal.
pub fn has_global_support(x: &Presheaf) -> bool {
    (0..x.site().object_count()).all(|o| x.level_size(o) > 0)
}

/// The category of elements of a presheaf `U`, presenting the slice topos
/// over `U`, together with the transport of presheaves into it.
#[derive(Debug, Clone)]
pub struct SliceSite {
    pub category: Site,
    /// slice object index -> (base object, element of U there)
    pub points: Vec<(usize, usize)>,
    /// slice arrow index -> base arrow index
    pub arrow_base: Vec<usize>,
}

/// Build the category of elements of `u`: objects are pairs `(c, x in U(c))`
/// named `c@x`; for each base arrow `f: c -> c'` and each `x' in U(c')`
/// there is one arrow `(c, U(f)(x')) -> (c', x')` named `f@x'`.
pub fn slice_site(u: &Presheaf) -> SliceSite {
    let base = u.site();
    let mut points = Vec::new();
    let mut point_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut names = Vec::new();
    for o in 0..base.object_count() {
        for e in 0..u.level_size(o) {
            point_index.insert((o, e), points.len());
            points.push((o, e));
            names.push(format!("{}@{}", base.object_name(o), u.elem_name(o, e)));
        }
    }
    let mut arrows = Vec::new();
    let mut arrow_base = Vec::new();
    let mut arrow_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, a) in base.arrows().iter().enumerate() {
        for e in 0..u.level_size(a.tgt) {
            let down = u.restriction(i)[e];
            arrow_index.insert((i, e), arrows.len());
            arrows.push(Arrow {
                name: format!("{}@{}", a.name, u.elem_name(a.tgt, e)),
                src: point_index[&(a.src, down)],
                tgt: point_index[&(a.tgt, e)],
            });
            arrow_base.push(i);
        }
    }
    let mut compose = BTreeMap::new();
    for (&(i, e_mid_src), &fi) in &arrow_index {
        // slice arrow fi covers base arrow i and ends at (tgt(i), e_mid_src)
        for (&(j, e_top), &gj) in &arrow_index {
            let a = u.site().arrow(i);
            let b = u.site().arrow(j);
            if a.tgt != b.src {
                continue;
            }
            // composable in the slice iff the middle elements agree
            if u.restriction(j)[e_top] != e_mid_src {
                continue;
            }
            let composite_base = base.compose_refs(MorRef::Arrow(i), MorRef::Arrow(j));
            let composite = match composite_base {
                MorRef::Id(_) => MorRef::Id(arrows[gj].tgt),
                MorRef::Arrow(h) => MorRef::Arrow(arrow_index[&(h, e_top)]),
            };
            compose.insert((fi, gj), composite);
        }
    }
    let category = Arc::new(
        FiniteCategory::new(names, arrows, compose)
            .expect("the category of elements is a category"),
    );
    SliceSite {
        category,
        points,
        arrow_base,
    }
}

impl SliceSite {
    /// Transport a presheaf over the base site to the slice: the level at
    /// `(c, x)` is the base level at `c`.
    pub fn transport(&self, x: &Presheaf) -> Presheaf {
        let sets = self
            .points
            .iter()
            .map(|&(o, _)| x.level(o).to_vec())
            .collect();
        let rest = self
            .arrow_base
            .iter()
            .map(|&i| x.restriction(i).to_vec())
            .collect();
        Presheaf::new(self.category.clone(), sets, rest)
            .expect("transport of a presheaf is a presheaf")
    }

    /// Transport a map over the base site to the slice.
    pub fn transport_map(&self, f: &PresheafMap) -> PresheafMap {
        let src = self.transport(f.src());
        let tgt = self.transport(f.tgt());
        let components = self
            .points
            .iter()
            .map(|&(o, _)| f.component(o).to_vec())
            .collect();
        PresheafMap::new(src, tgt, components).expect("transport preserves naturality")
    }
}

#[cfg(test)]
mod tests {
    use super::super::stock::*;
    use super::*;

    #[test]
    fn constant_empty_is_initial() {
        let site = circle_site();
        let x = constant(&site, &[]);
        assert!(x.is_initial());
    }

    #[test]
    fn global_sections_of_terminal() {
        let site = commuting_square_site();
        let t = terminal(&site);
        assert_eq!(global_sections(&t).len(), 1);
    }

    #[test]
    fn global_sections_of_swap_monodromy_are_empty() {
        let site = circle_site();
        let x = Presheaf::new(
            site,
            vec![vec!["0".into(), "1".into()], vec!["0".into(), "1".into()]],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        assert!(global_sections(&x).is_empty());
        // while the constant has two
        let c = constant(x.site(), &["0".into(), "1".into()]);
        let sections = global_sections(&c);
        assert_eq!(sections.len(), 2);
        for s in &sections {
            section_as_map(&c, s).unwrap();
        }
    }

    #[test]
    fn support_cases() {
        let site = circle_site();
        assert!(support(&super::super::colimits::initial(&site)).is_empty_sub());
        assert!(support(&terminal(&site)).is_full());
    }

    #[test]
    fn representables_have_a_terminal_element_category() {
        // the category of elements of y(c) has a terminal object: (c, id)
        let site = commuting_square_site();
        for c in 0..site.object_count() {
            let y = representable(&site, c);
            let slice = slice_site(&y);
            let terminal_points: Vec<usize> = (0..slice.points.len())
                .filter(|&p| {
                    (0..slice.points.len()).all(|q| {
                        let n = slice
                            .category
                            .homs(q, p)
                            .len();
                        n == 1
                    })
                })
                .collect();
            assert_eq!(terminal_points.len(), 1, "object {c}");
        }
    }

    #[test]
    fn slice_over_terminal_is_the_base() {
        let site = circle_site();
        let t = terminal(&site);
        let slice = slice_site(&t);
        assert_eq!(slice.category.object_count(), site.object_count());
        assert_eq!(slice.category.arrow_count(), site.arrow_count());
    }

    #[test]
    fn slice_over_two_element_constant_is_two_copies() {
        let site = circle_site();
        let u = constant(&site, &["0".into(), "1".into()]);
        let slice = slice_site(&u);
        assert_eq!(slice.category.object_count(), 4);
        assert_eq!(slice.category.arrow_count(), 4);
        let comps = slice.category.object_components();
        assert_eq!(comps.len(), 2);
    }

    #[test]
    fn transport_preserves_levels() {
        let site = circle_site();
        let u = constant(&site, &["0".into(), "1".into()]);
        let x = Presheaf::new(
            site.clone(),
            vec![vec!["p".into(), "q".into()], vec!["p".into(), "q".into()]],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let slice = slice_site(&u);
        let tx = slice.transport(&x);
        assert_eq!(tx.total_size(), 8);
        let id = PresheafMap::identity(&x);
        assert!(slice.transport_map(&id).is_iso());
    }
}
