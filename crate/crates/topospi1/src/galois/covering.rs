//! Galois certificates, Galois coverings via monodromy images, the fibre
//! functor data, and reconstruction from automorphism actions.

use std::collections::BTreeMap;

use crate::caps::Caps;
use crate::finiteness::locally::is_locally_constant;
use crate::finiteness::{connected_components, ComponentDecomposition};
use crate::grp::{perm, PermutationClosure, Subgroup};
use crate::site::ops::has_global_support;
use crate::site::{Presheaf, PresheafMap};

use super::monodromy::{
    equivariant_to_map, monodromy, presheaf_from_monodromy, synthetic_monodromy, Monodromy,
    MonodromyAction,
};
use super::{aut_group, hom_set, AutData, GaloisError};

/// The verdict of the Galois test: connected, globally supported, and every
/// evaluation `Aut(A) -> A(c)`, `alpha -> alpha_c(a)`, bijective.
#[derive(Debug, Clone)]
pub struct GaloisCertificate {
    pub connected: bool,
    pub globally_supported: bool,
    pub aut: AutData,
    pub verdict: bool,
    /// first (object, element) where the evaluation fails to be bijective
    pub failure: Option<(usize, usize)>,
}

pub fn is_galois(x: &Presheaf, caps: &Caps) -> Result<GaloisCertificate, GaloisError> {
    let connected = connected_components(x).component_count() == 1;
    let globally_supported = has_global_support(x);
    let aut = aut_group(x, caps)?;
    let mut failure = None;
    'levels: for o in 0..x.site().object_count() {
        for e in 0..x.level_size(o) {
            let mut seen = vec![false; x.level_size(o)];
            let mut ok = aut.elements.len() == x.level_size(o);
            for alpha in &aut.elements {
                let v = alpha.apply(o, e);
                if seen[v] {
                    ok = false;
                    break;
                }
                seen[v] = true;
            }
            if !(ok && seen.into_iter().all(|b| b)) {
                failure = Some((o, e));
                break 'levels;
            }
        }
    }
    let verdict = connected && globally_supported && failure.is_none();
    Ok(GaloisCertificate {
        connected,
        globally_supported,
        aut,
        verdict,
        failure,
    })
}

fn padded_names(prefix: &str, n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len().max(1);
    (0..n).map(|i| format!("{prefix}{i:0width$}")).collect()
}

/// A Galois covering of a finite object, with all the data the fibre
/// functor needs.
#[derive(Debug, Clone)]
pub struct CoveringData {
    /// the analysed object
    pub object: Presheaf,
    /// its connected components
    pub components: ComponentDecomposition,
    /// each component realised as a presheaf
    pub component_presheaves: Vec<Presheaf>,
    /// the Galois covering: the regular presheaf of the monodromy image
    pub covering: Presheaf,
    pub covering_monodromy: Monodromy,
    pub aut: AutData,
    /// one epimorphism from the covering onto each component
    pub epis: Vec<PresheafMap>,
    pub certificate: GaloisCertificate,
    /// per component, the normal core of the image stabilizer is trivial
    pub core_trivial: bool,
}

/// Construct the Galois covering of a finite object: the regular presheaf of
/// the monodromy image on the total basepoint fibre. Verifies that the
/// result is Galois, admits an epi onto every component, and that each
/// component's image stabilizer has trivial normal core.
pub fn galois_covering(x: &Presheaf, caps: &Caps) -> Result<CoveringData, GaloisError> {
    if !x.site().is_connected() {
        return Err(GaloisError::SiteNotConnected);
    }
    if !is_locally_constant(x) {
        return Err(GaloisError::NotFinite);
    }
    let components = connected_components(x);
    let mono = monodromy(x)?;
    let site = x.site().clone();
    let basepoint = mono.action.basepoint;

    // the monodromy image Q on the total fibre
    let closure = PermutationClosure::new(mono.action.degree(), &mono.action.action, caps)?;
    let q_count = closure.elements.len();
    let q_index: BTreeMap<Vec<usize>, usize> = closure
        .elements
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();

    // regular action: an arrow acts by left multiplication with its image
    let regular: Vec<Vec<usize>> = mono
        .action
        .action
        .iter()
        .map(|m| {
            (0..q_count)
                .map(|q| q_index[&perm::compose(m, &closure.elements[q])])
                .collect()
        })
        .collect();
    let covering_action = MonodromyAction::new(
        site.clone(),
        basepoint,
        mono.action.tree.clone(),
        padded_names("q", q_count),
        regular,
    )?;
    let covering = presheaf_from_monodromy(&covering_action)?;
    let covering_monodromy = synthetic_monodromy(covering_action);

    let certificate = is_galois(&covering, caps)?;
    if !certificate.verdict {
        return Err(GaloisError::NotGalois);
    }
    let aut = certificate.aut.clone();

    // per component: realization, monodromy, epi, core-triviality
    let mut component_presheaves = Vec::new();
    let mut epis = Vec::new();
    let mut core_trivial = true;
    for (i, part) in components.parts.iter().enumerate() {
        let (part_presheaf, _) = part.to_presheaf();
        let part_mono = monodromy(&part_presheaf)?;
        // members of this component's fibre, in X's basepoint indexing
        let members: Vec<usize> = part.chosen()[basepoint].iter().copied().collect();
        let x_base = *members.first().expect("components are nonempty everywhere");
        // covering fibre point q goes to the orbit point q(x_base)
        let fibre_map: Vec<usize> = (0..q_count)
            .map(|q| {
                let image = closure.elements[q][x_base];
                members
                    .binary_search(&image)
                    .expect("orbits stay inside their component")
            })
            .collect();
        let epi = equivariant_to_map(
            &covering_monodromy,
            &covering,
            &part_mono,
            &part_presheaf,
            &fibre_map,
        )?;
        if !epi.is_epi() {
            return Err(GaloisError::NotGalois);
        }
        // image of Q on this component's fibre, and the stabilizer core
        let restricted: Vec<Vec<usize>> = mono
            .action
            .action
            .iter()
            .map(|m| {
                members
                    .iter()
                    .map(|&e| members.binary_search(&m[e]).unwrap())
                    .collect()
            })
            .collect();
        let image = PermutationClosure::new(members.len(), &restricted, caps)?;
        let base_pos = members.binary_search(&x_base).unwrap();
        let stab: Vec<usize> = (0..image.elements.len())
            .filter(|&g| image.elements[g][base_pos] == base_pos)
            .collect();
        let stabilizer = Subgroup::new(&image.group, stab)?;
        let core = image.group.normal_core(&stabilizer)?;
        if !core.is_trivial() {
            core_trivial = false;
        }
        component_presheaves.push(part_presheaf);
        epis.push(epi);
        let _ = i;
    }
    if !core_trivial {
        return Err(GaloisError::NotGalois);
    }
    Ok(CoveringData {
        object: x.clone(),
        components,
        component_presheaves,
        covering,
        covering_monodromy,
        aut,
        epis,
        certificate,
        core_trivial,
    })
}

/// The fibre functor's value on an object: the morphism set from a Galois
/// covering, with the right `Aut` action by precomposition and the
/// partition by target component.
#[derive(Debug, Clone)]
pub struct FibreResult {
    pub covering: CoveringData,
    pub maps: Vec<PresheafMap>,
    /// `right_action[phi][alpha]` is the index of `phi ∘ alpha`
    pub right_action: Vec<Vec<usize>>,
    /// fibre indices grouped by the component their map lands in
    pub partition: Vec<Vec<usize>>,
}

pub fn fibre(x: &Presheaf, caps: &Caps) -> Result<FibreResult, GaloisError> {
    let covering = galois_covering(x, caps)?;
    fibre_of_covering(covering, caps)
}

pub fn fibre_of_covering(covering: CoveringData, caps: &Caps) -> Result<FibreResult, GaloisError> {
    let maps = hom_set(&covering.covering, &covering.object, caps)?;
    let right_action = precomposition_action(&covering.aut, &maps)?;
    let basepoint = covering.covering_monodromy.action.basepoint;
    let mut partition = vec![Vec::new(); covering.components.component_count()];
    for (i, phi) in maps.iter().enumerate() {
        let image = phi.apply(basepoint, 0);
        let part = covering.components.assignment[basepoint][image];
        debug_assert!(
            phi.src()
                .elements()
                .all(|(o, e)| covering.components.assignment[o][phi.apply(o, e)] == part),
            "a map from a connected covering lands in one component"
        );
        partition[part].push(i);
    }
    Ok(FibreResult {
        covering,
        maps,
        right_action,
        partition,
    })
}

/// The right action of an automorphism group on a set of maps out of its
/// object, `phi ↦ phi ∘ alpha`.
pub fn precomposition_action(
    aut: &AutData,
    maps: &[PresheafMap],
) -> Result<Vec<Vec<usize>>, GaloisError> {
    let key = |m: &PresheafMap| -> Vec<Vec<usize>> {
        (0..m.src().site().object_count())
            .map(|o| m.component(o).to_vec())
            .collect()
    };
    let index: BTreeMap<Vec<Vec<usize>>, usize> = maps
        .iter()
        .enumerate()
        .map(|(i, m)| (key(m), i))
        .collect();
    let mut table = Vec::with_capacity(maps.len());
    for phi in maps {
        let mut row = Vec::with_capacity(aut.elements.len());
        for alpha in &aut.elements {
            let composed = alpha.then(phi)?;
            row.push(
                *index
                    .get(&key(&composed))
                    .expect("precomposition permutes the morphism set"),
            );
        }
        table.push(row);
    }
    // action law: phi·(alpha∘beta) = (phi·alpha)·beta
    debug_assert!(table.iter().all(|row| {
        (0..aut.elements.len()).all(|a| {
            (0..aut.elements.len()).all(|b| {
                let ab = aut.group.mul(a, b);
                row[ab] == table[row[a]][b]
            })
        })
    }));
    Ok(table)
}

/// An abstract finite right `Aut`-set: named points and the action table
/// `act[m][alpha]`.
#[derive(Debug, Clone)]
pub struct AutSet {
    pub names: Vec<String>,
    pub act: Vec<Vec<usize>>,
}

impl AutSet {
    pub fn from_fibre(f: &FibreResult) -> Self {
        AutSet {
            names: padded_names("m", f.maps.len()),
            act: f.right_action.clone(),
        }
    }
}

/// The balanced product `A x_{Aut(A)} M`: quotient of `A x const(M)` by
/// `(alpha(a), m) ~ (a, m·alpha)`, computed as levelwise orbits.
pub fn reconstruct(
    a: &Presheaf,
    aut: &AutData,
    certificate: &GaloisCertificate,
    m: &AutSet,
) -> Result<Presheaf, GaloisError> {
    if !certificate.verdict {
        return Err(GaloisError::NotGalois);
    }
    let order = aut.group.order();
    if m.act.len() != m.names.len() {
        return Err(GaloisError::InvalidAction(
            "one action row per point is required".into(),
        ));
    }
    for row in &m.act {
        if row.len() != order {
            return Err(GaloisError::InvalidAction(
                "one action column per automorphism is required".into(),
            ));
        }
        if let Some(&bad) = row.iter().find(|&&v| v >= m.names.len()) {
            return Err(GaloisError::InvalidAction(format!(
                "action value {bad} is out of range"
            )));
        }
    }
    for (p, row) in m.act.iter().enumerate() {
        if row[aut.group.identity()] != p {
            return Err(GaloisError::InvalidAction(
                "identity must act trivially".into(),
            ));
        }
        for x in 0..order {
            for y in 0..order {
                if m.act[row[x]][y] != row[aut.group.mul(x, y)] {
                    return Err(GaloisError::InvalidAction(
                        "action does not respect multiplication".into(),
                    ));
                }
            }
        }
    }
    let site = a.site().clone();
    // levelwise orbits of pairs (a-element, point)
    let mut sets = Vec::new();
    let mut class_of: Vec<Vec<usize>> = Vec::new();
    let pair_count =
        |o: usize| -> usize { a.level_size(o) * m.names.len() };
    let pair_id = |o: usize, e: usize, p: usize| -> usize {
        let _ = o;
        e * m.names.len() + p
    };
    for o in 0..site.object_count() {
        let n = pair_count(o);
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, v: usize) -> usize {
            if parent[v] != v {
                let root = find(parent, parent[v]);
                parent[v] = root;
                root
            } else {
                v
            }
        }
        for (g, alpha) in aut.elements.iter().enumerate() {
            for e in 0..a.level_size(o) {
                for p in 0..m.names.len() {
                    let lhs = pair_id(o, alpha.apply(o, e), p);
                    let rhs = pair_id(o, e, m.act[p][g]);
                    let (x, y) = (find(&mut parent, lhs), find(&mut parent, rhs));
                    if x != y {
                        parent[x.max(y)] = x.min(y);
                    }
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        let mut class_names: BTreeMap<usize, String> = BTreeMap::new();
        for v in 0..n {
            let (e, p) = (v / m.names.len(), v % m.names.len());
            let name = format!("({}|{})", a.elem_name(o, e), m.names[p]);
            class_names
                .entry(roots[v])
                .and_modify(|current| {
                    if name < *current {
                        *current = name.clone();
                    }
                })
                .or_insert(name);
        }
        let mut named: Vec<(String, usize)> =
            class_names.iter().map(|(&r, n)| (format!("[{n}]"), r)).collect();
        named.sort();
        let class_index: Vec<usize> = roots
            .iter()
            .map(|r| named.iter().position(|(_, root)| root == r).unwrap())
            .collect();
        sets.push(named.into_iter().map(|(n, _)| n).collect::<Vec<_>>());
        class_of.push(class_index);
    }
    let rest = site
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, arr)| {
            // pick any pair representative per class at the target level
            let mut map = vec![usize::MAX; sets[arr.tgt].len()];
            for e in 0..a.level_size(arr.tgt) {
                for p in 0..m.names.len() {
                    let class = class_of[arr.tgt][pair_id(arr.tgt, e, p)];
                    let down = class_of[arr.src][pair_id(arr.src, a.restriction(i)[e], p)];
                    if map[class] == usize::MAX {
                        map[class] = down;
                    } else {
                        debug_assert_eq!(map[class], down, "orbit quotient is well-defined");
                    }
                }
            }
            map
        })
        .collect();
    Ok(Presheaf::new(site, sets, rest)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::are_isomorphic;
    use crate::site::limits::terminal;
    use crate::site::ops::constant;
    use crate::site::stock::*;

    fn regular_z3() -> Presheaf {
        let site = circle_site();
        let names: Vec<String> = (0..3).map(|i| i.to_string()).collect();
        Presheaf::new(
            site,
            vec![names.clone(), names],
            vec![vec![0, 1, 2], vec![2, 0, 1]],
        )
        .unwrap()
    }

    #[test]
    fn terminal_is_galois_with_trivial_aut() {
        let site = circle_site();
        let t = terminal(&site);
        let cert = is_galois(&t, &Caps::default()).unwrap();
        assert!(cert.verdict);
        assert_eq!(cert.aut.group.order(), 1);
    }

    #[test]
    fn regular_z3_is_galois() {
        let x = regular_z3();
        let cert = is_galois(&x, &Caps::default()).unwrap();
        assert!(cert.verdict);
        assert_eq!(cert.aut.group.order(), 3);
    }

    #[test]
    fn two_element_constant_is_not_galois() {
        // disconnected, so not Galois despite Aut acting simply
        let site = circle_site();
        let x = constant(&site, &["0".into(), "1".into()]);
        let cert = is_galois(&x, &Caps::default()).unwrap();
        assert!(!cert.verdict);
        assert!(!cert.connected);
    }

    #[test]
    fn covering_of_a_galois_object_is_itself() {
        let x = regular_z3();
        let cov = galois_covering(&x, &Caps::default()).unwrap();
        assert_eq!(cov.covering.total_size(), x.total_size());
        let iso = are_isomorphic(&cov.covering, &x, &Caps::default())
            .unwrap()
            .expect("a Galois object is its own covering");
        assert!(iso.is_iso());
    }

    #[test]
    fn covering_of_two_singletons_is_terminal() {
        let site = circle_site();
        let x = constant(&site, &["0".into(), "1".into()]);
        let cov = galois_covering(&x, &Caps::default()).unwrap();
        assert_eq!(cov.covering.total_size(), 2); // one point per level
        assert_eq!(cov.epis.len(), 2);
        let t = terminal(&site);
        assert!(are_isomorphic(&cov.covering, &t, &Caps::default())
            .unwrap()
            .is_some());
    }

    #[test]
    fn covering_of_disjoint_z2_and_z3_orbits_is_z6() {
        let site = circle_site();
        let names: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        // monodromy of b: (0 1)(2 3 4)
        let x = Presheaf::new(
            site,
            vec![names.clone(), names],
            vec![vec![0, 1, 2, 3, 4], vec![1, 0, 4, 2, 3]],
        )
        .unwrap();
        let cov = galois_covering(&x, &Caps::default()).unwrap();
        assert_eq!(cov.covering.level_size(0), 6);
        assert_eq!(cov.aut.group.order(), 6);
        assert!(cov.core_trivial);
        for epi in &cov.epis {
            assert!(epi.is_epi());
        }
    }

    #[test]
    fn fibre_of_terminal_is_a_singleton() {
        let site = circle_site();
        let t = terminal(&site);
        let f = fibre(&t, &Caps::default()).unwrap();
        assert_eq!(f.maps.len(), 1);
    }

    #[test]
    fn fibre_size_equals_total_basepoint_fibre() {
        let site = circle_site();
        let names: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        let x = Presheaf::new(
            site,
            vec![names.clone(), names],
            vec![vec![0, 1, 2, 3, 4], vec![1, 0, 4, 2, 3]],
        )
        .unwrap();
        let f = fibre(&x, &Caps::default()).unwrap();
        assert_eq!(f.maps.len(), 5);
        let sizes: Vec<usize> = f.partition.iter().map(|p| p.len()).collect();
        assert_eq!(sizes, vec![2, 3]);
    }

    #[test]
    fn reconstruct_regular_action_gives_the_covering_back() {
        let x = regular_z3();
        let f = fibre(&x, &Caps::default()).unwrap();
        // M = Aut acting on itself by right multiplication
        let order = f.covering.aut.group.order();
        let regular = AutSet {
            names: (0..order).map(|i| format!("m{i}")).collect(),
            act: (0..order)
                .map(|p| (0..order).map(|g| f.covering.aut.group.mul(p, g)).collect())
                .collect(),
        };
        let rebuilt = reconstruct(
            &f.covering.covering,
            &f.covering.aut,
            &f.covering.certificate,
            &regular,
        )
        .unwrap();
        assert!(are_isomorphic(&rebuilt, &f.covering.covering, &Caps::default())
            .unwrap()
            .is_some());
    }

    #[test]
    fn reconstruct_one_point_gives_terminal() {
        let x = regular_z3();
        let f = fibre(&x, &Caps::default()).unwrap();
        let order = f.covering.aut.group.order();
        let point = AutSet {
            names: vec!["m".into()],
            act: vec![vec![0; order]],
        };
        let rebuilt = reconstruct(
            &f.covering.covering,
            &f.covering.aut,
            &f.covering.certificate,
            &point,
        )
        .unwrap();
        let t = terminal(x.site());
        assert!(are_isomorphic(&rebuilt, &t, &Caps::default())
            .unwrap()
            .is_some());
    }

    #[test]
    fn reconstruct_fibre_recovers_the_object() {
        let site = circle_site();
        let names: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        let x = Presheaf::new(
            site,
            vec![names.clone(), names],
            vec![vec![0, 1, 2, 3, 4], vec![1, 0, 4, 2, 3]],
        )
        .unwrap();
        let f = fibre(&x, &Caps::default()).unwrap();
        let m = AutSet::from_fibre(&f);
        let rebuilt = reconstruct(
            &f.covering.covering,
            &f.covering.aut,
            &f.covering.certificate,
            &m,
        )
        .unwrap();
        let iso = are_isomorphic(&rebuilt, &x, &Caps::default()).unwrap();
        assert!(iso.is_some(), "X is reconstructed from its fibre");
    }
}
