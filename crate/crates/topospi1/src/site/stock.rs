//! Stock sites used throughout tests, examples and the verification corpora.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{Arrow, FiniteCategory, MorRef, Site};
use crate::grp::FiniteGroup;

/// One object, no non-identity arrows: presheaves are plain sets.
pub fn trivial_site() -> Site {
    Arc::new(FiniteCategory::new(vec!["*".into()], Vec::new(), BTreeMap::new()).unwrap())
}

/// Two objects `x`, `y` and a single arrow `f: x -> y`.
pub fn arrow_site() -> Site {
    Arc::new(
        FiniteCategory::new(
            vec!["x".into(), "y".into()],
            vec![Arrow {
                name: "f".into(),
                src: 0,
                tgt: 1,
            }],
            BTreeMap::new(),
        )
        .unwrap(),
    )
}

/// Two objects with parallel arrows `a, b: x -> y`; no composable pairs.
/// Locally constant presheaves on it behave like local systems on a circle.
pub fn circle_site() -> Site {
    Arc::new(
        FiniteCategory::new(
            vec!["x".into(), "y".into()],
            vec![
                Arrow {
                    name: "a".into(),
                    src: 0,
                    tgt: 1,
                },
                Arrow {
                    name: "b".into(),
                    src: 0,
                    tgt: 1,
                },
            ],
            BTreeMap::new(),
        )
        .unwrap(),
    )
}

/// One object with a single non-identity arrow `g` satisfying `g∘g = id`.
pub fn involution_site() -> Site {
    let mut compose = BTreeMap::new();
    compose.insert((0, 0), MorRef::Id(0));
    Arc::new(
        FiniteCategory::new(
            vec!["*".into()],
            vec![Arrow {
                name: "g".into(),
                src: 0,
                tgt: 0,
            }],
            compose,
        )
        .unwrap(),
    )
}

/// A commuting square `p -> q -> s`, `p -> r -> s` with the common diagonal
/// recorded explicitly.
pub fn commuting_square_site() -> Site {
    let objects = vec!["p".into(), "q".into(), "r".into(), "s".into()];
    let arrows = vec![
        Arrow {
            name: "f".into(),
            src: 0,
            tgt: 1,
        },
        Arrow {
            name: "g".into(),
            src: 0,
            tgt: 2,
        },
        Arrow {
            name: "h".into(),
            src: 1,
            tgt: 3,
        },
        Arrow {
            name: "k".into(),
            src: 2,
            tgt: 3,
        },
        Arrow {
            name: "d".into(),
            src: 0,
            tgt: 3,
        },
    ];
    let mut compose = BTreeMap::new();
    compose.insert((0, 2), MorRef::Arrow(4)); // f then h = d
    compose.insert((1, 3), MorRef::Arrow(4)); // g then k = d
    Arc::new(FiniteCategory::new(objects, arrows, compose).unwrap())
}

/// The one-object groupoid of a finite group: arrows are the non-identity
/// elements, named `g1, g2, ...` by element index, and composition is the
/// group's multiplication.
pub fn one_object_groupoid(group: &FiniteGroup) -> Site {
    let e = group.identity();
    let arrow_of: Vec<Option<usize>> = {
        let mut next = 0;
        (0..group.order())
            .map(|x| {
                if x == e {
                    None
                } else {
                    next += 1;
                    Some(next - 1)
                }
            })
            .collect()
    };
    let arrows: Vec<Arrow> = (0..group.order())
        .filter(|&x| x != e)
        .map(|x| Arrow {
            name: format!("g{x}"),
            src: 0,
            tgt: 0,
        })
        .collect();
    let mut compose = BTreeMap::new();
    for x in 0..group.order() {
        for y in 0..group.order() {
            let (Some(fx), Some(fy)) = (arrow_of[x], arrow_of[y]) else {
                continue;
            };
            // "x then y" composes to y∘x, which is mul(y, x)
            let z = group.mul(y, x);
            let composite = match arrow_of[z] {
                Some(fz) => MorRef::Arrow(fz),
                None => MorRef::Id(0),
            };
            compose.insert((fx, fy), composite);
        }
    }
    Arc::new(
        FiniteCategory::new(vec!["*".into()], arrows, compose)
            .expect("group multiplication yields a category"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::catalog::small_group_catalog;

    #[test]
    fn groupoids_of_small_groups_validate() {
        for (name, g) in small_group_catalog(8).unwrap() {
            let site = one_object_groupoid(&g);
            assert_eq!(site.arrow_count(), g.order() - 1, "{name}");
            assert!(site.is_connected());
        }
    }

    #[test]
    fn square_site_diagonal_is_consistent() {
        let site = commuting_square_site();
        let f = MorRef::Arrow(site.arrow_index("f").unwrap());
        let h = MorRef::Arrow(site.arrow_index("h").unwrap());
        let d = MorRef::Arrow(site.arrow_index("d").unwrap());
        assert_eq!(site.compose_refs(f, h), d);
    }
}
