//! Finite categories and finite-valued presheaves on them.
//!
//! A `FiniteCategory` stores its objects, its non-identity arrows and a total
//! composition table over composable non-identity pairs; identities are
//! implicit. A `Presheaf` assigns a finite set of named elements to each
//! object and a restriction map to each arrow, contravariantly: for an arrow
//! `f: c -> c'` the restriction `X(f)` maps `X(c')` to `X(c)`. Every value is
//! validated on construction and immutable afterwards.

pub mod colimits;
pub mod limits;
pub mod ops;
pub mod stock;

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SiteError {
    #[error("bad composition: {0}")]
    BadComposition(String),
    #[error("bad naturality: {0}")]
    BadNaturality(String),
    #[error("dangling name: {0}")]
    DanglingName(String),
    #[error("bad name: {0}")]
    BadName(String),
    #[error("category mismatch: {0}")]
    CategoryMismatch(String),
    #[error("not an equivalence relation: {0}")]
    NotEquivalence(String),
    #[error("not a presheaf: {0}")]
    NotAPresheaf(String),
}

/// A non-identity arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A morphism reference: an implicit identity or a stored arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MorRef {
    Id(usize),
    Arrow(usize),
}

/// A finite category: objects, non-identity arrows, and the composites of
/// all composable non-identity pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    /// `(first, second) -> second ∘ first` on arrow indices.
    compose: BTreeMap<(usize, usize), MorRef>,
}

/// Shared handle to a validated category.
pub type Site = Arc<FiniteCategory>;

impl FiniteCategory {
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        compose: BTreeMap<(usize, usize), MorRef>,
    ) -> Result<Self, SiteError> {
        let mut seen = BTreeSet::new();
        for o in &objects {
            if !seen.insert(o.clone()) {
                return Err(SiteError::BadName(format!("duplicate object `{o}`")));
            }
        }
        let mut seen = BTreeSet::new();
        for a in &arrows {
            if !seen.insert(a.name.clone()) {
                return Err(SiteError::BadName(format!("duplicate arrow `{}`", a.name)));
            }
            if a.src >= objects.len() || a.tgt >= objects.len() {
                return Err(SiteError::DanglingName(format!(
                    "arrow `{}` references a missing object",
                    a.name
                )));
            }
        }
        let cat = FiniteCategory {
            objects,
            arrows,
            compose,
        };
        cat.validate()?;
        Ok(cat)
    }

    fn validate(&self) -> Result<(), SiteError> {
        for (&(f, g), &h) in &self.compose {
            if f >= self.arrows.len() || g >= self.arrows.len() {
                return Err(SiteError::DanglingName(
                    "composition entry references a missing arrow".into(),
                ));
            }
            let (af, ag) = (&self.arrows[f], &self.arrows[g]);
            if af.tgt != ag.src {
                return Err(SiteError::BadComposition(format!(
                    "`{}` then `{}` is not composable",
                    af.name, ag.name
                )));
            }
            let (hs, ht) = (self.mor_src(h), self.mor_tgt(h));
            if hs != af.src || ht != ag.tgt {
                return Err(SiteError::BadComposition(format!(
                    "composite of `{}` then `{}` has wrong endpoints",
                    af.name, ag.name
                )));
            }
            if let MorRef::Arrow(i) = h {
                if i >= self.arrows.len() {
                    return Err(SiteError::DanglingName(
                        "composite references a missing arrow".into(),
                    ));
                }
            }
        }
        // closure: every composable pair has a recorded composite
        for f in 0..self.arrows.len() {
            for g in 0..self.arrows.len() {
                if self.arrows[f].tgt == self.arrows[g].src
                    && !self.compose.contains_key(&(f, g))
                {
                    return Err(SiteError::BadComposition(format!(
                        "missing composite of `{}` then `{}`",
                        self.arrows[f].name, self.arrows[g].name
                    )));
                }
            }
        }
        // associativity over all composable triples
        for f in 0..self.arrows.len() {
            for g in 0..self.arrows.len() {
                if self.arrows[f].tgt != self.arrows[g].src {
                    continue;
                }
                for h in 0..self.arrows.len() {
                    if self.arrows[g].tgt != self.arrows[h].src {
                        continue;
                    }
                    let left = self.compose_refs(self.compose[&(f, g)], MorRef::Arrow(h));
                    let right = self.compose_refs(MorRef::Arrow(f), self.compose[&(g, h)]);
                    if left != right {
                        return Err(SiteError::BadComposition(format!(
                            "associativity fails on `{}`, `{}`, `{}`",
                            self.arrows[f].name, self.arrows[g].name, self.arrows[h].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn mor_src(&self, m: MorRef) -> usize {
        match m {
            MorRef::Id(o) => o,
            MorRef::Arrow(i) => self.arrows[i].src,
        }
    }

    pub fn mor_tgt(&self, m: MorRef) -> usize {
        match m {
            MorRef::Id(o) => o,
            MorRef::Arrow(i) => self.arrows[i].tgt,
        }
    }

    pub fn mor_name(&self, m: MorRef) -> String {
        match m {
            MorRef::Id(o) => format!("id@{}", self.objects[o]),
            MorRef::Arrow(i) => self.arrows[i].name.clone(),
        }
    }

    /// The recorded composites of non-identity pairs.
    pub fn compose_entries(&self) -> impl Iterator<Item = (&(usize, usize), &MorRef)> {
        self.compose.iter()
    }

    /// `first` then `second`; assumes a validated category and composable
    /// arguments.
    pub fn compose_refs(&self, first: MorRef, second: MorRef) -> MorRef {
        debug_assert_eq!(self.mor_tgt(first), self.mor_src(second));
        match (first, second) {
            (MorRef::Id(_), m) => m,
            (m, MorRef::Id(_)) => m,
            (MorRef::Arrow(f), MorRef::Arrow(g)) => *self
                .compose
                .get(&(f, g))
                .expect("validated category is closed under composition"),
        }
    }

    /// All morphisms `d -> c` including the identity when `d == c`.
    pub fn homs(&self, d: usize, c: usize) -> Vec<MorRef> {
        let mut out = Vec::new();
        if d == c {
            out.push(MorRef::Id(d));
        }
        for (i, a) in self.arrows.iter().enumerate() {
            if a.src == d && a.tgt == c {
                out.push(MorRef::Arrow(i));
            }
        }
        out
    }

    /// Connectivity of the underlying undirected graph on objects.
    pub fn is_connected(&self) -> bool {
        self.object_components().len() <= 1
    }

    /// Connected components of the underlying graph, each a sorted list of
    /// object indices, ordered by least member.
    pub fn object_components(&self) -> Vec<Vec<usize>> {
        let n = self.objects.len();
        let mut part: Vec<usize> = (0..n).collect();
        fn find(part: &mut Vec<usize>, x: usize) -> usize {
            if part[x] != x {
                let root = find(part, part[x]);
                part[x] = root;
                root
            } else {
                x
            }
        }
        for a in &self.arrows {
            let (x, y) = (find(&mut part, a.src), find(&mut part, a.tgt));
            if x != y {
                part[x.max(y)] = x.min(y);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for o in 0..n {
            let root = find(&mut part, o);
            groups.entry(root).or_default().push(o);
        }
        groups.into_values().collect()
    }

    /// The object with the lexicographically least name; the canonical
    /// basepoint of a connected site.
    pub fn basepoint(&self) -> usize {
        (0..self.objects.len())
            .min_by_key(|&o| &self.objects[o])
            .expect("categories are nonempty")
    }
}

/// A finite-valued presheaf over a shared site. Level element names are kept
/// sorted, so element indices are canonical for fixed names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    site: Site,
    sets: Vec<Vec<String>>,
    rest: Vec<Vec<usize>>,
}

impl Presheaf {
    pub fn new(site: Site, sets: Vec<Vec<String>>, rest: Vec<Vec<usize>>) -> Result<Self, SiteError> {
        if sets.len() != site.object_count() {
            return Err(SiteError::NotAPresheaf(format!(
                "{} levels for {} objects",
                sets.len(),
                site.object_count()
            )));
        }
        for (o, level) in sets.iter().enumerate() {
            for pair in level.windows(2) {
                if pair[0] >= pair[1] {
                    return Err(SiteError::BadName(format!(
                        "level `{}` is not sorted with unique names",
                        site.object_name(o)
                    )));
                }
            }
        }
        if rest.len() != site.arrow_count() {
            return Err(SiteError::NotAPresheaf(format!(
                "{} restriction maps for {} arrows",
                rest.len(),
                site.arrow_count()
            )));
        }
        for (i, a) in site.arrows().iter().enumerate() {
            if rest[i].len() != sets[a.tgt].len() {
                return Err(SiteError::NotAPresheaf(format!(
                    "restriction along `{}` is not total on the level at `{}`",
                    a.name,
                    site.object_name(a.tgt)
                )));
            }
            if let Some(&bad) = rest[i].iter().find(|&&v| v >= sets[a.src].len()) {
                return Err(SiteError::NotAPresheaf(format!(
                    "restriction along `{}` hits index {bad} outside the level at `{}`",
                    a.name,
                    site.object_name(a.src)
                )));
            }
        }
        let presheaf = Presheaf { site, sets, rest };
        presheaf.check_functoriality()?;
        Ok(presheaf)
    }

    fn check_functoriality(&self) -> Result<(), SiteError> {
        for (&(f, g), &h) in &self.site.compose {
            let upper = self.site.arrow(g).tgt;
            for e in 0..self.sets[upper].len() {
                let via_pair = self.rest[f][self.rest[g][e]];
                let direct = self.restrict(h, e);
                if via_pair != direct {
                    return Err(SiteError::BadNaturality(format!(
                        "restriction along `{}` then `{}` disagrees with their composite at \
                         element `{}`",
                        self.site.arrow(g).name,
                        self.site.arrow(f).name,
                        self.sets[upper][e]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn site(&self) -> &Site {
        &self.site
    }

    pub fn same_site(&self, other: &Presheaf) -> bool {
        Arc::ptr_eq(&self.site, &other.site) || self.site == other.site
    }

    pub fn level(&self, o: usize) -> &[String] {
        &self.sets[o]
    }

    pub fn level_size(&self, o: usize) -> usize {
        self.sets[o].len()
    }

    pub fn levels(&self) -> &[Vec<String>] {
        &self.sets
    }

    pub fn elem_index(&self, o: usize, name: &str) -> Option<usize> {
        self.sets[o].binary_search_by(|e| e.as_str().cmp(name)).ok()
    }

    pub fn elem_name(&self, o: usize, e: usize) -> &str {
        &self.sets[o][e]
    }

    /// Canonical global label of an element: `object:element`.
    pub fn global_label(&self, o: usize, e: usize) -> String {
        format!("{}:{}", self.site.object_name(o), self.sets[o][e])
    }

    pub fn total_size(&self) -> usize {
        self.sets.iter().map(|l| l.len()).sum()
    }

    /// Apply the restriction along a morphism to an element index of the
    /// morphism's target level.
    pub fn restrict(&self, m: MorRef, e: usize) -> usize {
        match m {
            MorRef::Id(_) => e,
            MorRef::Arrow(i) => self.rest[i][e],
        }
    }

    pub fn restriction(&self, arrow: usize) -> &[usize] {
        &self.rest[arrow]
    }

    pub fn is_initial(&self) -> bool {
        self.sets.iter().all(|l| l.is_empty())
    }

    /// All (object, element) pairs in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.sets
            .iter()
            .enumerate()
            .flat_map(|(o, l)| (0..l.len()).map(move |e| (o, e)))
    }
}

/// A natural transformation between presheaves on the same site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafMap {
    src: Presheaf,
    tgt: Presheaf,
    components: Vec<Vec<usize>>,
}

impl PresheafMap {
    pub fn new(src: Presheaf, tgt: Presheaf, components: Vec<Vec<usize>>) -> Result<Self, SiteError> {
        if !src.same_site(&tgt) {
            return Err(SiteError::CategoryMismatch(
                "map endpoints live on different sites".into(),
            ));
        }
        if components.len() != src.site.object_count() {
            return Err(SiteError::NotAPresheaf(
                "one component per object is required".into(),
            ));
        }
        for o in 0..components.len() {
            if components[o].len() != src.level_size(o) {
                return Err(SiteError::NotAPresheaf(format!(
                    "component at `{}` is not total",
                    src.site.object_name(o)
                )));
            }
            if let Some(&bad) = components[o].iter().find(|&&v| v >= tgt.level_size(o)) {
                return Err(SiteError::NotAPresheaf(format!(
                    "component at `{}` hits index {bad} outside the target level",
                    src.site.object_name(o)
                )));
            }
        }
        let map = PresheafMap {
            src,
            tgt,
            components,
        };
        map.check_naturality()?;
        Ok(map)
    }

    fn check_naturality(&self) -> Result<(), SiteError> {
        for (i, a) in self.src.site.arrows().iter().enumerate() {
            for e in 0..self.src.level_size(a.tgt) {
                let down_then_map = self.components[a.src][self.src.rest[i][e]];
                let map_then_down = self.tgt.rest[i][self.components[a.tgt][e]];
                if down_then_map != map_then_down {
                    return Err(SiteError::BadNaturality(format!(
                        "naturality square for `{}` fails at element `{}`",
                        a.name,
                        self.src.elem_name(a.tgt, e)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn identity(x: &Presheaf) -> Self {
        PresheafMap {
            src: x.clone(),
            tgt: x.clone(),
            components: x.sets.iter().map(|l| (0..l.len()).collect()).collect(),
        }
    }

    pub fn src(&self) -> &Presheaf {
        &self.src
    }

    pub fn tgt(&self) -> &Presheaf {
        &self.tgt
    }

    pub fn component(&self, o: usize) -> &[usize] {
        &self.components[o]
    }

    pub fn apply(&self, o: usize, e: usize) -> usize {
        self.components[o][e]
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &PresheafMap) -> Result<PresheafMap, SiteError> {
        if self.tgt != next.src {
            return Err(SiteError::CategoryMismatch(
                "composition endpoint mismatch".into(),
            ));
        }
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(o, comp)| comp.iter().map(|&v| next.components[o][v]).collect())
            .collect();
        PresheafMap::new(self.src.clone(), next.tgt.clone(), components)
    }

    pub fn is_mono(&self) -> bool {
        self.components.iter().enumerate().all(|(o, comp)| {
            let mut seen = vec![false; self.tgt.level_size(o)];
            comp.iter().all(|&v| {
                if seen[v] {
                    false
                } else {
                    seen[v] = true;
                    true
                }
            })
        })
    }

    pub fn is_epi(&self) -> bool {
        self.components.iter().enumerate().all(|(o, comp)| {
            let mut seen = vec![false; self.tgt.level_size(o)];
            for &v in comp {
                seen[v] = true;
            }
            seen.into_iter().all(|b| b)
        })
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    pub fn inverse(&self) -> Result<PresheafMap, SiteError> {
        if !self.is_iso() {
            return Err(SiteError::NotAPresheaf(
                "cannot invert a non-isomorphism".into(),
            ));
        }
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(o, comp)| {
                let mut inv = vec![0; comp.len()];
                for (e, &v) in comp.iter().enumerate() {
                    inv[v] = e;
                }
                let _ = o;
                inv
            })
            .collect();
        PresheafMap::new(self.tgt.clone(), self.src.clone(), components)
    }
}

/// A subpresheaf: a restriction-closed choice of subsets of a parent's
/// levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubPresheaf {
    parent: Presheaf,
    chosen: Vec<BTreeSet<usize>>,
}

impl SubPresheaf {
    pub fn new(parent: Presheaf, chosen: Vec<BTreeSet<usize>>) -> Result<Self, SiteError> {
        if chosen.len() != parent.site.object_count() {
            return Err(SiteError::NotAPresheaf(
                "one chosen subset per object is required".into(),
            ));
        }
        for (o, set) in chosen.iter().enumerate() {
            if let Some(&bad) = set.iter().find(|&&e| e >= parent.level_size(o)) {
                return Err(SiteError::NotAPresheaf(format!(
                    "chosen element {bad} is outside the level at `{}`",
                    parent.site.object_name(o)
                )));
            }
        }
        for (i, a) in parent.site.arrows().iter().enumerate() {
            for &e in &chosen[a.tgt] {
                if !chosen[a.src].contains(&parent.rest[i][e]) {
                    return Err(SiteError::NotAPresheaf(format!(
                        "chosen subset is not closed under restriction along `{}` at element `{}`",
                        a.name,
                        parent.elem_name(a.tgt, e)
                    )));
                }
            }
        }
        Ok(SubPresheaf { parent, chosen })
    }

    pub fn full(parent: &Presheaf) -> Self {
        SubPresheaf {
            parent: parent.clone(),
            chosen: parent.sets.iter().map(|l| (0..l.len()).collect()).collect(),
        }
    }

    pub fn empty(parent: &Presheaf) -> Self {
        SubPresheaf {
            parent: parent.clone(),
            chosen: vec![BTreeSet::new(); parent.site.object_count()],
        }
    }

    pub fn parent(&self) -> &Presheaf {
        &self.parent
    }

    pub fn chosen(&self) -> &[BTreeSet<usize>] {
        &self.chosen
    }

    pub fn contains(&self, o: usize, e: usize) -> bool {
        self.chosen[o].contains(&e)
    }

    pub fn total_size(&self) -> usize {
        self.chosen.iter().map(|s| s.len()).sum()
    }

    pub fn is_empty_sub(&self) -> bool {
        self.chosen.iter().all(|s| s.is_empty())
    }

    pub fn is_full(&self) -> bool {
        self.total_size() == self.parent.total_size()
    }

    /// The levelwise complement as raw subsets (not necessarily
    /// restriction-closed).
    pub fn complement_sets(&self) -> Vec<BTreeSet<usize>> {
        self.chosen
            .iter()
            .enumerate()
            .map(|(o, set)| {
                (0..self.parent.level_size(o))
                    .filter(|e| !set.contains(e))
                    .collect()
            })
            .collect()
    }

    pub fn union(&self, other: &SubPresheaf) -> Result<SubPresheaf, SiteError> {
        if self.parent != other.parent {
            return Err(SiteError::CategoryMismatch(
                "union of subpresheaves of different parents".into(),
            ));
        }
        let chosen = self
            .chosen
            .iter()
            .zip(&other.chosen)
            .map(|(a, b)| a.union(b).copied().collect())
            .collect();
        SubPresheaf::new(self.parent.clone(), chosen)
    }

    pub fn intersection(&self, other: &SubPresheaf) -> Result<SubPresheaf, SiteError> {
        if self.parent != other.parent {
            return Err(SiteError::CategoryMismatch(
                "intersection of subpresheaves of different parents".into(),
            ));
        }
        let chosen = self
            .chosen
            .iter()
            .zip(&other.chosen)
            .map(|(a, b)| a.intersection(b).copied().collect())
            .collect();
        SubPresheaf::new(self.parent.clone(), chosen)
    }

    /// Realise the subpresheaf as a presheaf in its own right, together with
    /// the inclusion map.
    pub fn to_presheaf(&self) -> (Presheaf, PresheafMap) {
        let site = self.parent.site.clone();
        let mut index_maps: Vec<Vec<usize>> = Vec::new();
        let mut sets = Vec::new();
        for (o, set) in self.chosen.iter().enumerate() {
            let members: Vec<usize> = set.iter().copied().collect();
            sets.push(
                members
                    .iter()
                    .map(|&e| self.parent.elem_name(o, e).to_string())
                    .collect(),
            );
            index_maps.push(members);
        }
        let rest = site
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                index_maps[a.tgt]
                    .iter()
                    .map(|&e| {
                        let image = self.parent.rest[i][e];
                        index_maps[a.src]
                            .binary_search(&image)
                            .expect("subpresheaf is restriction-closed")
                    })
                    .collect()
            })
            .collect();
        let object = Presheaf::new(site, sets, rest).expect("subpresheaf data is a presheaf");
        let components = index_maps;
        let include = PresheafMap::new(object.clone(), self.parent.clone(), components)
            .expect("inclusion is natural");
        (object, include)
    }
}

#[cfg(test)]
mod tests {
    use super::stock::*;
    use super::*;

    #[test]
    fn one_object_site_validates() {
        let site = trivial_site();
        assert_eq!(site.object_count(), 1);
        assert_eq!(site.arrow_count(), 0);
        assert!(site.is_connected());
    }

    #[test]
    fn circle_site_has_no_composable_pairs() {
        let site = circle_site();
        assert_eq!(site.object_count(), 2);
        assert_eq!(site.arrow_count(), 2);
        assert!(site.is_connected());
        assert_eq!(site.basepoint(), site.object_index("x").unwrap());
    }

    #[test]
    fn missing_composite_is_rejected() {
        let objects = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let arrows = vec![
            Arrow {
                name: "f".into(),
                src: 0,
                tgt: 1,
            },
            Arrow {
                name: "g".into(),
                src: 1,
                tgt: 2,
            },
        ];
        let err = FiniteCategory::new(objects, arrows, BTreeMap::new());
        assert!(matches!(err, Err(SiteError::BadComposition(_))));
    }

    #[test]
    fn involution_site_and_functoriality() {
        // one object, one arrow g with g∘g = id
        let site = involution_site();
        // valid presheaf: a 2-element level with the swap
        let x = Presheaf::new(
            site.clone(),
            vec![vec!["p".into(), "q".into()]],
            vec![vec![1, 0]],
        )
        .unwrap();
        assert_eq!(x.restrict(MorRef::Arrow(0), 0), 1);
        // non-invertible restriction along an involution violates
        // functoriality
        let bad = Presheaf::new(
            site.clone(),
            vec![vec!["p".into(), "q".into()]],
            vec![vec![0, 0]],
        );
        assert!(matches!(bad, Err(SiteError::BadNaturality(_))));
    }

    #[test]
    fn nonemptiness_must_propagate_contravariantly() {
        // a presheaf on the arrow site empty at the arrow's source object but
        // not at its target cannot have a total restriction
        let site = arrow_site();
        let bad = Presheaf::new(site, vec![vec![], vec!["a".into()]], vec![vec![]]);
        assert!(matches!(bad, Err(SiteError::NotAPresheaf(_))));
    }

    #[test]
    fn subpresheaf_closure_is_enforced() {
        let site = arrow_site();
        // X(x) = {a, b}, X(y) = {c}, restriction c -> a
        let x = Presheaf::new(
            site,
            vec![vec!["a".into(), "b".into()], vec!["c".into()]],
            vec![vec![0]],
        )
        .unwrap();
        // choosing {c} upstairs without a downstairs is not closed
        let bad = SubPresheaf::new(
            x.clone(),
            vec![BTreeSet::new(), BTreeSet::from([0])],
        );
        assert!(matches!(bad, Err(SiteError::NotAPresheaf(_))));
        let ok = SubPresheaf::new(
            x.clone(),
            vec![BTreeSet::from([0]), BTreeSet::from([0])],
        )
        .unwrap();
        let (object, include) = ok.to_presheaf();
        assert_eq!(object.total_size(), 2);
        assert!(include.is_mono());
    }

    #[test]
    fn naturality_is_checked() {
        let site = circle_site();
        let two = vec!["0".into(), "1".into()];
        let x = Presheaf::new(site.clone(), vec![two.clone(), two.clone()], vec![vec![0, 1], vec![1, 0]])
            .unwrap();
        let y = Presheaf::new(site.clone(), vec![two.clone(), two.clone()], vec![vec![0, 1], vec![0, 1]])
            .unwrap();
        // the identity components are not natural from x to y (swap vs id)
        let bad = PresheafMap::new(x.clone(), y.clone(), vec![vec![0, 1], vec![0, 1]]);
        assert!(matches!(bad, Err(SiteError::BadNaturality(_))));
        let id = PresheafMap::identity(&x);
        assert!(id.is_iso());
    }
}
