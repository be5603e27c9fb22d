//! Finite colimits of presheaves, computed levelwise: sums, coequalizers,
//! images and quotients by complemented equivalence relations.

use std::collections::BTreeSet;

use super::limits::ProductData;
use super::{Presheaf, PresheafMap, SiteError, SubPresheaf};

/// The initial presheaf: empty at every object.
pub fn initial(site: &super::Site) -> Presheaf {
    let sets = vec![Vec::new(); site.object_count()];
    let rest = site.arrows().iter().map(|_| Vec::new()).collect();
    Presheaf::new(site.clone(), sets, rest).expect("initial data is a presheaf")
}

/// The unique map out of the initial presheaf.
pub fn from_initial(x: &Presheaf) -> PresheafMap {
    let src = initial(x.site());
    let components = vec![Vec::new(); x.site().object_count()];
    PresheafMap::new(src, x.clone(), components).expect("the initial map is natural")
}

/// A binary sum with its injections; elements are tagged `inl(..)`/`inr(..)`.
#[derive(Debug, Clone)]
pub struct SumData {
    pub object: Presheaf,
    pub inl: PresheafMap,
    pub inr: PresheafMap,
    /// per object: for each sum element, which side and which source index
    tags: Vec<Vec<(bool, usize)>>,
}

pub fn sum(x: &Presheaf, y: &Presheaf) -> Result<SumData, SiteError> {
    if !x.same_site(y) {
        return Err(SiteError::CategoryMismatch(
            "operands live on different sites".into(),
        ));
    }
    let site = x.site().clone();
    let mut sets = Vec::new();
    let mut tags = Vec::new();
    let mut left_index: Vec<Vec<usize>> = Vec::new();
    let mut right_index: Vec<Vec<usize>> = Vec::new();
    for o in 0..site.object_count() {
        let mut named: Vec<(String, (bool, usize))> = Vec::new();
        for xi in 0..x.level_size(o) {
            named.push((format!("inl({})", x.elem_name(o, xi)), (false, xi)));
        }
        for yi in 0..y.level_size(o) {
            named.push((format!("inr({})", y.elem_name(o, yi)), (true, yi)));
        }
        named.sort();
        let mut li = vec![0; x.level_size(o)];
        let mut ri = vec![0; y.level_size(o)];
        for (i, (_, (is_right, idx))) in named.iter().enumerate() {
            if *is_right {
                ri[*idx] = i;
            } else {
                li[*idx] = i;
            }
        }
        sets.push(named.iter().map(|(n, _)| n.clone()).collect());
        tags.push(named.into_iter().map(|(_, t)| t).collect::<Vec<_>>());
        left_index.push(li);
        right_index.push(ri);
    }
    let rest = site
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            tags[a.tgt]
                .iter()
                .map(|&(is_right, idx)| {
                    if is_right {
                        right_index[a.src][y.restriction(i)[idx]]
                    } else {
                        left_index[a.src][x.restriction(i)[idx]]
                    }
                })
                .collect()
        })
        .collect();
    let object = Presheaf::new(site, sets, rest)?;
    let inl = PresheafMap::new(x.clone(), object.clone(), left_index)?;
    let inr = PresheafMap::new(y.clone(), object.clone(), right_index)?;
    Ok(SumData {
        object,
        inl,
        inr,
        tags,
    })
}

impl SumData {
    pub fn tag_at(&self, o: usize, e: usize) -> (bool, usize) {
        self.tags[o][e]
    }

    /// The unique map `X + Y -> Z` restricting to `f` and `g`.
    pub fn mediate(&self, f: &PresheafMap, g: &PresheafMap) -> Result<PresheafMap, SiteError> {
        if f.tgt() != g.tgt() {
            return Err(SiteError::CategoryMismatch(
                "cocone legs have different targets".into(),
            ));
        }
        if f.src() != self.inl.src() || g.src() != self.inr.src() {
            return Err(SiteError::CategoryMismatch(
                "cocone legs do not match the summands".into(),
            ));
        }
        let components = self
            .tags
            .iter()
            .enumerate()
            .map(|(o, level)| {
                level
                    .iter()
                    .map(|&(is_right, idx)| {
                        if is_right {
                            g.apply(o, idx)
                        } else {
                            f.apply(o, idx)
                        }
                    })
                    .collect()
            })
            .collect();
        PresheafMap::new(self.object.clone(), f.tgt().clone(), components)
    }
}

/// A coequalizer with its canonical projection; classes are named by their
/// least member, `[name]`.
#[derive(Debug, Clone)]
pub struct CoequalizerData {
    pub object: Presheaf,
    pub project: PresheafMap,
}

pub fn coequalizer(f: &PresheafMap, g: &PresheafMap) -> Result<CoequalizerData, SiteError> {
    if f.src() != g.src() || f.tgt() != g.tgt() {
        return Err(SiteError::CategoryMismatch(
            "coequalizer needs a parallel pair".into(),
        ));
    }
    let y = f.tgt();
    let pairs: Vec<Vec<(usize, usize)>> = (0..y.site().object_count())
        .map(|o| {
            (0..f.src().level_size(o))
                .map(|x| (f.apply(o, x), g.apply(o, x)))
                .collect()
        })
        .collect();
    quotient_levelwise(y, &pairs)
}

/// Quotient a presheaf levelwise by the equivalence generated by the given
/// pairs; naturality of the generators makes the induced restrictions
/// well-defined.
fn quotient_levelwise(
    y: &Presheaf,
    pairs: &[Vec<(usize, usize)>],
) -> Result<CoequalizerData, SiteError> {
    let site = y.site().clone();
    let mut class_of: Vec<Vec<usize>> = Vec::new();
    let mut sets: Vec<Vec<String>> = Vec::new();
    let mut reps: Vec<Vec<usize>> = Vec::new();
    for o in 0..site.object_count() {
        let n = y.level_size(o);
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
                root
            } else {
                x
            }
        }
        for &(a, b) in &pairs[o] {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        // class representative: least member (element names are sorted, so
        // the least index carries the lexicographically least name)
        let roots: Vec<usize> = (0..n).map(|e| find(&mut parent, e)).collect();
        let mut rep_list: Vec<usize> = roots.clone();
        rep_list.sort_unstable();
        rep_list.dedup();
        let class_index: Vec<usize> = roots
            .iter()
            .map(|r| rep_list.binary_search(r).unwrap())
            .collect();
        sets.push(
            rep_list
                .iter()
                .map(|&r| format!("[{}]", y.elem_name(o, r)))
                .collect(),
        );
        class_of.push(class_index);
        reps.push(rep_list);
    }
    let rest = site
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            reps[a.tgt]
                .iter()
                .map(|&r| class_of[a.src][y.restriction(i)[r]])
                .collect()
        })
        .collect();
    let object = Presheaf::new(site, sets, rest)?;
    let project = PresheafMap::new(y.clone(), object.clone(), class_of)?;
    debug_assert!(project.is_epi());
    Ok(CoequalizerData { object, project })
}

impl CoequalizerData {
    /// Factor a cofork `h: Y -> Z` (coequalizing the pair) through the
    /// quotient.
    pub fn factor(&self, h: &PresheafMap) -> Result<PresheafMap, SiteError> {
        if h.src() != self.project.src() {
            return Err(SiteError::CategoryMismatch(
                "cofork does not start at the coequalized object".into(),
            ));
        }
        let mut components: Vec<Vec<usize>> = (0..self.object.site().object_count())
            .map(|o| vec![usize::MAX; self.object.level_size(o)])
            .collect();
        for o in 0..self.object.site().object_count() {
            for e in 0..h.src().level_size(o) {
                let class = self.project.apply(o, e);
                let value = h.apply(o, e);
                if components[o][class] == usize::MAX {
                    components[o][class] = value;
                } else if components[o][class] != value {
                    return Err(SiteError::NotAPresheaf(
                        "cofork does not coequalize the pair".into(),
                    ));
                }
            }
        }
        PresheafMap::new(self.project.tgt().clone(), h.tgt().clone(), components)
    }
}

/// The image of a map: a subpresheaf of the target with the epi-mono
/// factorisation through it.
#[derive(Debug, Clone)]
pub struct ImageData {
    pub sub: SubPresheaf,
    pub object: Presheaf,
    pub epi: PresheafMap,
    pub mono: PresheafMap,
}

pub fn image(f: &PresheafMap) -> Result<ImageData, SiteError> {
    let chosen: Vec<BTreeSet<usize>> = (0..f.tgt().site().object_count())
        .map(|o| (0..f.src().level_size(o)).map(|e| f.apply(o, e)).collect())
        .collect();
    let sub = SubPresheaf::new(f.tgt().clone(), chosen)?;
    let (object, mono) = sub.to_presheaf();
    let members: Vec<Vec<usize>> = sub
        .chosen()
        .iter()
        .map(|s| s.iter().copied().collect())
        .collect();
    let components = (0..f.src().site().object_count())
        .map(|o| {
            (0..f.src().level_size(o))
                .map(|e| members[o].binary_search(&f.apply(o, e)).unwrap())
                .collect()
        })
        .collect();
    let epi = PresheafMap::new(f.src().clone(), object.clone(), components)?;
    debug_assert!(epi.is_epi());
    debug_assert!(mono.is_mono());
    debug_assert_eq!(epi.then(&mono).unwrap(), *f);
    Ok(ImageData {
        sub,
        object,
        epi,
        mono,
    })
}

/// Quotient `X` by an equivalence relation given as a subpresheaf of
/// `X x X` (the product data provides the pair decoding). The relation must
/// be a levelwise equivalence relation; closure under restrictions is
/// guaranteed by subpresheaf validity.
pub fn quotient_by_relation(
    square: &ProductData,
    relation: &SubPresheaf,
) -> Result<(Presheaf, PresheafMap), SiteError> {
    if relation.parent() != &square.object {
        return Err(SiteError::CategoryMismatch(
            "relation is not a subpresheaf of the given square".into(),
        ));
    }
    if square.left.tgt() != square.right.tgt() {
        return Err(SiteError::NotEquivalence(
            "the square is not of the form X x X".into(),
        ));
    }
    let x = square.left.tgt();
    // collect the related pairs per level and check the equivalence axioms
    let mut pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); x.site().object_count()];
    for (o, set) in relation.chosen().iter().enumerate() {
        let related: BTreeSet<(usize, usize)> =
            set.iter().map(|&e| square.pair_at(o, e)).collect();
        for a in 0..x.level_size(o) {
            if !related.contains(&(a, a)) {
                return Err(SiteError::NotEquivalence(format!(
                    "not reflexive at `{}`",
                    x.elem_name(o, a)
                )));
            }
        }
        for &(a, b) in &related {
            if !related.contains(&(b, a)) {
                return Err(SiteError::NotEquivalence(format!(
                    "not symmetric at (`{}`, `{}`)",
                    x.elem_name(o, a),
                    x.elem_name(o, b)
                )));
            }
            for &(b2, c) in &related {
                if b2 == b && !related.contains(&(a, c)) {
                    return Err(SiteError::NotEquivalence(format!(
                        "not transitive at (`{}`, `{}`, `{}`)",
                        x.elem_name(o, a),
                        x.elem_name(o, b),
                        x.elem_name(o, c)
                    )));
                }
            }
        }
        pairs[o] = related.into_iter().collect();
    }
    let data = quotient_levelwise(x, &pairs)?;
    Ok((data.object, data.project))
}
