//! Locally constant and locally finite objects, trivializations over the
//! representable cover, and the splitting-object construction.

use crate::caps::Caps;
use crate::site::limits::{product, ProductData};
use crate::site::ops::{constant, has_global_support, representable_with_morphisms, slice_site, SliceSite};
use crate::site::{Presheaf, PresheafMap};

use super::FinitenessError;

/// Locally constant: every restriction map is a bijection. The representable
/// presheaves then form a trivializing cover, see [`trivialization`].
pub fn is_locally_constant(x: &Presheaf) -> bool {
    x.site().arrows().iter().enumerate().all(|(i, a)| {
        x.level_size(a.src) == x.level_size(a.tgt) && {
            let mut seen = vec![false; x.level_size(a.src)];
            x.restriction(i).iter().all(|&v| {
                if seen[v] {
                    false
                } else {
                    seen[v] = true;
                    true
                }
            })
        }
    })
}

/// The explicit trivializing isomorphism over the representable of `c`: the
/// transport of the constant presheaf on `X(c)` to the category of elements
/// of `y(c)`, mapped isomorphically onto the transport of `X`.
pub fn trivialization(
    x: &Presheaf,
    c: usize,
) -> Result<(SliceSite, PresheafMap), FinitenessError> {
    if !is_locally_constant(x) {
        return Err(FinitenessError::NotLocallyFinite);
    }
    let site = x.site();
    let (y, homs) = representable_with_morphisms(site, c);
    let slice = slice_site(&y);
    let transported = slice.transport(x);
    let fibre = constant(&slice.category, x.level(c));
    let components = slice
        .points
        .iter()
        .map(|&(d, u_idx)| {
            let m = homs[d][u_idx];
            (0..x.level_size(c)).map(|e| x.restrict(m, e)).collect()
        })
        .collect();
    let iso = PresheafMap::new(fibre, transported, components)?;
    debug_assert!(iso.is_iso());
    Ok((slice, iso))
}

/// A local finiteness certificate on a connected site: the common fibre
/// size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocallyFinite {
    pub fibre: usize,
}

/// Locally finite on a connected site: locally constant with (automatically
/// finite) common fibre size.
pub fn is_locally_finite(x: &Presheaf) -> Result<Option<LocallyFinite>, FinitenessError> {
    if !x.site().is_connected() {
        return Err(FinitenessError::SiteNotConnected);
    }
    if !is_locally_constant(x) {
        return Ok(None);
    }
    Ok(Some(LocallyFinite {
        fibre: x.level_size(x.site().basepoint()),
    }))
}

/// Fibre sizes per site component for locally constant objects on possibly
/// disconnected sites; `None` when not locally constant.
pub fn fibre_profile(x: &Presheaf) -> Option<Vec<usize>> {
    if !is_locally_constant(x) {
        return None;
    }
    Some(
        x.site()
            .object_components()
            .iter()
            .map(|objs| x.level_size(objs[0]))
            .collect(),
    )
}

/// The splitting object of a locally finite `X` with fibre `n` and the
/// evaluation isomorphism `X x U -> const{1..n} x U` over `U`. `U(c)` is the
/// set of injective `n`-tuples over `X(c)`.
#[derive(Debug, Clone)]
pub struct SplittingData {
    pub u: Presheaf,
    pub fibre: usize,
    pub product_xu: ProductData,
    pub product_cu: ProductData,
    pub iso: PresheafMap,
}

pub fn splitting_object(x: &Presheaf, caps: &Caps) -> Result<SplittingData, FinitenessError> {
    let lf = is_locally_finite(x)?.ok_or(FinitenessError::NotLocallyFinite)?;
    let n = lf.fibre;
    if n > caps.degree {
        return Err(FinitenessError::CapExceeded {
            what: "splitting-object fibre".into(),
            needed: n,
            cap: caps.degree,
        });
    }
    let site = x.site().clone();
    // injective n-tuples per level, named by their member tuple
    let mut tuples_per_level: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut sets: Vec<Vec<String>> = Vec::new();
    for o in 0..site.object_count() {
        let mut tuples = Vec::new();
        let mut current = Vec::new();
        injective_tuples(x.level_size(o), n, &mut current, &mut tuples);
        let mut named: Vec<(String, Vec<usize>)> = tuples
            .into_iter()
            .map(|t| {
                let name = format!(
                    "({})",
                    t.iter()
                        .map(|&e| x.elem_name(o, e).to_string())
                        .collect::<Vec<_>>()
                        .join("|")
                );
                (name, t)
            })
            .collect();
        named.sort();
        sets.push(named.iter().map(|(s, _)| s.clone()).collect());
        tuples_per_level.push(named.into_iter().map(|(_, t)| t).collect());
    }
    let rest = site
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            tuples_per_level[a.tgt]
                .iter()
                .map(|t| {
                    let image: Vec<usize> = t.iter().map(|&e| x.restriction(i)[e]).collect();
                    tuples_per_level[a.src]
                        .iter()
                        .position(|s| s == &image)
                        .expect("restrictions of injective tuples are injective")
                })
                .collect()
        })
        .collect();
    let u = Presheaf::new(site.clone(), sets, rest)?;
    debug_assert!(has_global_support(&u));
    let numerals: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let c = constant(&site, &numerals);
    let product_xu = product(x, &u)?;
    let product_cu = product(&c, &u)?;
    // evaluation: (x, t) -> (position of x in t, t)
    let components = (0..site.object_count())
        .map(|o| {
            (0..product_xu.object.level_size(o))
                .map(|e| {
                    let (xi, ti) = product_xu.pair_at(o, e);
                    let pos = tuples_per_level[o][ti]
                        .iter()
                        .position(|&m| m == xi)
                        .expect("each element occurs in each injective tuple");
                    let numeral = c
                        .elem_index(o, &(pos + 1).to_string())
                        .expect("numeral name exists");
                    product_cu.pair_index(o, numeral, ti)
                })
                .collect()
        })
        .collect();
    let iso = PresheafMap::new(product_xu.object.clone(), product_cu.object.clone(), components)?;
    debug_assert!(iso.is_iso());
    debug_assert_eq!(
        iso.then(&product_cu.right).unwrap(),
        product_xu.right,
        "the evaluation isomorphism lives over U"
    );
    Ok(SplittingData {
        u,
        fibre: n,
        product_xu,
        product_cu,
        iso,
    })
}

fn injective_tuples(m: usize, n: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == n {
        out.push(current.clone());
        return;
    }
    for e in 0..m {
        if !current.contains(&e) {
            current.push(e);
            injective_tuples(m, n, current, out);
            current.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::limits::terminal;
    use crate::site::stock::*;

    #[test]
    fn constants_are_locally_constant_with_fibre_size() {
        let site = circle_site();
        let x = constant(&site, &["a".into(), "b".into(), "c".into()]);
        assert!(is_locally_constant(&x));
        assert_eq!(is_locally_finite(&x).unwrap().unwrap().fibre, 3);
        let (_, iso) = trivialization(&x, 0).unwrap();
        assert!(iso.is_iso());
    }

    #[test]
    fn permutation_monodromy_is_locally_constant() {
        let site = circle_site();
        let names: Vec<String> = (0..3).map(|i| i.to_string()).collect();
        let x = Presheaf::new(
            site,
            vec![names.clone(), names.clone()],
            vec![vec![0, 1, 2], vec![1, 2, 0]],
        )
        .unwrap();
        assert!(is_locally_constant(&x));
        for c in 0..2 {
            let (_, iso) = trivialization(&x, c).unwrap();
            assert!(iso.is_iso());
        }
    }

    #[test]
    fn injective_non_surjective_restriction_is_decidable_but_not_constant() {
        let site = arrow_site();
        let x = Presheaf::new(
            site,
            vec![vec!["a".into(), "b".into()], vec!["c".into()]],
            vec![vec![0]],
        )
        .unwrap();
        assert!(super::super::is_decidable(&x).is_some());
        assert!(!is_locally_constant(&x));
        assert!(is_locally_finite(&x).unwrap().is_none());
    }

    #[test]
    fn splitting_of_terminal_is_terminal() {
        let site = circle_site();
        let t = terminal(&site);
        let s = splitting_object(&t, &Caps::default()).unwrap();
        assert_eq!(s.fibre, 1);
        assert_eq!(s.u.total_size(), 2);
    }

    #[test]
    fn splitting_of_two_element_constant_has_two_orderings() {
        let site = trivial_site();
        let x = constant(&site, &["p".into(), "q".into()]);
        let s = splitting_object(&x, &Caps::default()).unwrap();
        assert_eq!(s.u.level_size(0), 2);
        assert!(s.iso.is_iso());
    }

    #[test]
    fn splitting_of_three_cycle_monodromy() {
        let site = circle_site();
        let names: Vec<String> = (0..3).map(|i| i.to_string()).collect();
        let x = Presheaf::new(
            site,
            vec![names.clone(), names.clone()],
            vec![vec![0, 1, 2], vec![1, 2, 0]],
        )
        .unwrap();
        let s = splitting_object(&x, &Caps::default()).unwrap();
        assert_eq!(s.u.level_size(0), 6);
        assert_eq!(s.u.level_size(1), 6);
        // monodromy acts freely: the induced restriction along b has no
        // fixed tuple
        let b = x.site().arrow_index("b").unwrap();
        let fixed = s
            .u
            .restriction(b)
            .iter()
            .enumerate()
            .filter(|&(i, &v)| i == v)
            .count();
        assert_eq!(fixed, 0);
    }
}
