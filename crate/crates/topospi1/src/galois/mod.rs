//! Hom-set enumeration, automorphism groups, monodromy, Galois objects and
//! coverings, the fibre functor, and reconstruction.

pub mod covering;
pub mod monodromy;

use std::collections::BTreeMap;
use std::collections::VecDeque;

use thiserror::Error;

use crate::caps::Caps;
use crate::finiteness::FinitenessError;
use crate::grp::{FiniteGroup, GrpError};
use crate::site::{Presheaf, PresheafMap, SiteError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: String,
        needed: usize,
        cap: usize,
    },
    #[error("object is not finite (not locally constant with finite fibres)")]
    NotFinite,
    #[error("object is not Galois")]
    NotGalois,
    #[error("object is not locally constant")]
    NotLocallyConstant,
    #[error("site is not connected")]
    SiteNotConnected,
    #[error("invalid action data: {0}")]
    InvalidAction(String),
    #[error(transparent)]
    Site(#[from] SiteError),
    #[error(transparent)]
    Grp(#[from] GrpError),
}

impl From<FinitenessError> for GaloisError {
    fn from(e: FinitenessError) -> Self {
        match e {
            FinitenessError::SiteNotConnected => GaloisError::SiteNotConnected,
            FinitenessError::NotDecidable | FinitenessError::NotLocallyFinite => {
                GaloisError::NotFinite
            }
            FinitenessError::CapExceeded { what, needed, cap } => {
                GaloisError::CapExceeded { what, needed, cap }
            }
            FinitenessError::Site(s) => GaloisError::Site(s),
        }
    }
}

/// All natural transformations `X -> Y`, in lexicographic order of their
/// component tuples. Backtracking over elements in canonical order with
/// eager propagation along restriction maps.
pub fn hom_set(x: &Presheaf, y: &Presheaf, caps: &Caps) -> Result<Vec<PresheafMap>, GaloisError> {
    if !x.same_site(y) {
        return Err(GaloisError::Site(SiteError::CategoryMismatch(
            "hom-set endpoints live on different sites".into(),
        )));
    }
    let slots: Vec<(usize, usize)> = x.elements().collect();
    let mut assignment: Vec<Vec<usize>> = (0..x.site().object_count())
        .map(|o| vec![usize::MAX; x.level_size(o)])
        .collect();
    let mut out = Vec::new();
    search_homs(
        x,
        y,
        &slots,
        &mut assignment,
        0,
        &mut |components| {
            if out.len() >= caps.hom {
                return Err(GaloisError::CapExceeded {
                    what: "hom-set size".into(),
                    needed: caps.hom + 1,
                    cap: caps.hom,
                });
            }
            let map = PresheafMap::new(x.clone(), y.clone(), components.to_vec())
                .expect("propagated assignments are natural");
            out.push(map);
            Ok(())
        },
        false,
    )?;
    Ok(out)
}

/// First isomorphism `X -> Y` found by the same search restricted to
/// levelwise bijections, or `None`.
pub fn are_isomorphic(
    x: &Presheaf,
    y: &Presheaf,
    caps: &Caps,
) -> Result<Option<PresheafMap>, GaloisError> {
    if !x.same_site(y) {
        return Err(GaloisError::Site(SiteError::CategoryMismatch(
            "isomorphism endpoints live on different sites".into(),
        )));
    }
    for o in 0..x.site().object_count() {
        if x.level_size(o) != y.level_size(o) {
            return Ok(None);
        }
    }
    let slots: Vec<(usize, usize)> = x.elements().collect();
    let mut assignment: Vec<Vec<usize>> = (0..x.site().object_count())
        .map(|o| vec![usize::MAX; x.level_size(o)])
        .collect();
    let mut found: Option<PresheafMap> = None;
    search_homs(
        x,
        y,
        &slots,
        &mut assignment,
        0,
        &mut |components| {
            let map = PresheafMap::new(x.clone(), y.clone(), components.to_vec())
                .expect("propagated assignments are natural");
            if map.is_iso() {
                found = Some(map);
                return Err(GaloisError::NotGalois); // sentinel: stop the search
            }
            Ok(())
        },
        true,
    )
    .or_else(|e| {
        if found.is_some() {
            Ok(())
        } else {
            Err(e)
        }
    })?;
    Ok(found)
}

/// Core backtracking: assign images slot by slot; assigning an element at an
/// arrow's target forces the image of its restriction at the source.
/// `injective` additionally prunes non-injective level assignments.
fn search_homs(
    x: &Presheaf,
    y: &Presheaf,
    slots: &[(usize, usize)],
    assignment: &mut Vec<Vec<usize>>,
    from: usize,
    emit: &mut impl FnMut(&[Vec<usize>]) -> Result<(), GaloisError>,
    injective: bool,
) -> Result<(), GaloisError> {
    let Some(&(o, e)) = slots.get(from) else {
        return emit(assignment);
    };
    if assignment[o][e] != usize::MAX {
        return search_homs(x, y, slots, assignment, from + 1, emit, injective);
    }
    'candidate: for v in 0..y.level_size(o) {
        if injective && assignment[o].contains(&v) {
            continue;
        }
        // propagate: a queue of forced assignments, recorded for undo
        let mut trail: Vec<(usize, usize)> = Vec::new();
        let mut queue: VecDeque<(usize, usize, usize)> = VecDeque::from([(o, e, v)]);
        let mut consistent = true;
        while let Some((po, pe, pv)) = queue.pop_front() {
            let current = assignment[po][pe];
            if current != usize::MAX {
                if current != pv {
                    consistent = false;
                    break;
                }
                continue;
            }
            if injective && assignment[po].contains(&pv) {
                consistent = false;
                break;
            }
            assignment[po][pe] = pv;
            trail.push((po, pe));
            for (i, a) in x.site().arrows().iter().enumerate() {
                // (po, pe) at the arrow's target forces the source image
                if a.tgt == po {
                    let se = x.restriction(i)[pe];
                    let sv = y.restriction(i)[pv];
                    queue.push_back((a.src, se, sv));
                }
                // (po, pe) at the source constrains already-assigned
                // elements at the target
                if a.src == po {
                    for te in 0..x.level_size(a.tgt) {
                        if x.restriction(i)[te] == pe {
                            let tv = assignment[a.tgt][te];
                            if tv != usize::MAX && y.restriction(i)[tv] != pv {
                                consistent = false;
                            }
                        }
                    }
                    if !consistent {
                        break;
                    }
                }
            }
            if !consistent {
                break;
            }
        }
        if consistent {
            let result = search_homs(x, y, slots, assignment, from + 1, emit, injective);
            for &(po, pe) in &trail {
                assignment[po][pe] = usize::MAX;
            }
            result?;
            continue 'candidate;
        }
        for &(po, pe) in &trail {
            assignment[po][pe] = usize::MAX;
        }
    }
    Ok(())
}

/// The automorphism group of a presheaf: the invertible self-maps under
/// composition (`table[a][b]` is "apply `b`, then `a`"), with each group
/// element realized as a `PresheafMap`.
#[derive(Debug, Clone)]
pub struct AutData {
    pub group: FiniteGroup,
    pub elements: Vec<PresheafMap>,
}

pub fn aut_group(x: &Presheaf, caps: &Caps) -> Result<AutData, GaloisError> {
    let autos: Vec<PresheafMap> = hom_set(x, x, caps)?
        .into_iter()
        .filter(|m| m.is_iso())
        .collect();
    if autos.len() > caps.order {
        return Err(GaloisError::CapExceeded {
            what: "automorphism group order".into(),
            needed: autos.len(),
            cap: caps.order,
        });
    }
    let key = |m: &PresheafMap| -> Vec<Vec<usize>> {
        (0..m.src().site().object_count())
            .map(|o| m.component(o).to_vec())
            .collect()
    };
    let index: BTreeMap<Vec<Vec<usize>>, usize> = autos
        .iter()
        .enumerate()
        .map(|(i, m)| (key(m), i))
        .collect();
    let n = autos.len();
    let mut table = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            // a∘b: apply b first
            let composite = autos[b].then(&autos[a])?;
            table[a][b] = *index
                .get(&key(&composite))
                .expect("automorphisms are closed under composition");
        }
    }
    let group = FiniteGroup::from_table(&table)?;
    Ok(AutData {
        group,
        elements: autos,
    })
}
