//! Internal catalog of all groups of small order, enumerated from scratch.
//!
//! Groups of order `n` are exactly the closures of regular permutation
//! realizations, i.e. completed `n x n` Latin squares with identity 0 whose
//! rows compose associatively. The enumeration backtracks over undefined
//! table cells with eager associativity propagation, then removes isomorphic
//! duplicates. Nothing is shipped as data; the catalog is rebuilt (and
//! memoized) per process.

use std::sync::OnceLock;

use super::{FiniteGroup, GrpError};
use crate::caps::Caps;

pub const CATALOG_MAX_ORDER: usize = 8;

/// All groups of the given order, up to isomorphism, deterministically
/// ordered by structure name.
pub fn groups_of_order(n: usize) -> Vec<(String, FiniteGroup)> {
    let mut reps: Vec<FiniteGroup> = Vec::new();
    let mut search = TableSearch { n, complete: 0 };
    let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
    for j in 0..n {
        table[0][j] = Some(j);
        table[j][0] = Some(j);
    }
    let caps = Caps {
        order: n.max(1),
        ..Caps::default()
    };
    search.descend(&mut table, &mut |candidate| {
        let is_new = reps
            .iter()
            .all(|r| r.is_isomorphic(candidate, &caps).unwrap().is_none());
        if is_new {
            reps.push(candidate.clone());
        }
    });
    let mut named: Vec<(String, FiniteGroup)> =
        reps.into_iter().map(|g| (structure_name(&g), g)).collect();
    named.sort_by(|a, b| a.0.cmp(&b.0));
    named
}

/// All groups of order up to `max_order` (at most [`CATALOG_MAX_ORDER`]),
/// ordered by (order, name). The full catalog is computed once per process.
pub fn small_group_catalog(max_order: usize) -> Result<Vec<(String, FiniteGroup)>, GrpError> {
    if max_order > CATALOG_MAX_ORDER {
        return Err(GrpError::CapExceeded {
            what: "small-group catalog order".into(),
            needed: max_order,
            cap: CATALOG_MAX_ORDER,
        });
    }
    static FULL: OnceLock<Vec<(String, FiniteGroup)>> = OnceLock::new();
    let full = FULL.get_or_init(|| {
        let mut all = Vec::new();
        for n in 1..=CATALOG_MAX_ORDER {
            all.extend(groups_of_order(n));
        }
        all
    });
    Ok(full
        .iter()
        .filter(|(_, g)| g.order() <= max_order)
        .cloned()
        .collect())
}

/// A human name for groups of catalog size: cyclic and abelian groups by
/// their invariant factors, plus the two nonabelian cases of order 8 and the
/// symmetric group on three letters.
pub fn structure_name(g: &FiniteGroup) -> String {
    let n = g.order();
    let max_order = (0..n).map(|x| g.element_order(x)).max().unwrap_or(1);
    if max_order == n {
        return format!("Z{n}");
    }
    if g.is_abelian() {
        // invariant factors for the abelian catalog cases
        let factors: Vec<usize> = match (n, max_order) {
            (4, 2) => vec![2, 2],
            (8, 4) => vec![4, 2],
            (8, 2) => vec![2, 2, 2],
            _ => vec![n],
        };
        return factors
            .iter()
            .map(|f| format!("Z{f}"))
            .collect::<Vec<_>>()
            .join("x");
    }
    match n {
        6 => "S3".to_string(),
        8 => {
            let involutions = (0..n).filter(|&x| g.element_order(x) == 2).count();
            if involutions == 1 {
                "Q8".to_string()
            } else {
                "D4".to_string()
            }
        }
        _ => format!("G{n}"),
    }
}

struct TableSearch {
    n: usize,
    complete: usize,
}

type Partial = Vec<Vec<Option<usize>>>;

impl TableSearch {
    fn descend(&mut self, table: &mut Partial, record: &mut impl FnMut(&FiniteGroup)) {
        // pick the undefined cell with the fewest Latin-feasible candidates
        let mut best: Option<(usize, usize, Vec<usize>)> = None;
        for i in 1..self.n {
            for j in 1..self.n {
                if table[i][j].is_some() {
                    continue;
                }
                let cands = self.candidates(table, i, j);
                if cands.is_empty() {
                    return;
                }
                let better = best.as_ref().map_or(true, |(_, _, b)| cands.len() < b.len());
                if better {
                    best = Some((i, j, cands));
                }
            }
        }
        let Some((i, j, cands)) = best else {
            // complete table; validation re-checks all axioms
            if let Ok(group) = FiniteGroup::from_table(
                &table
                    .iter()
                    .map(|row| row.iter().map(|c| c.unwrap()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            ) {
                self.complete += 1;
                record(&group);
            }
            return;
        };
        for v in cands {
            let mut next = table.clone();
            next[i][j] = Some(v);
            if self.propagate(&mut next) {
                self.descend(&mut next, record);
            }
        }
    }

    fn candidates(&self, table: &Partial, i: usize, j: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&v| {
                (0..self.n).all(|k| table[i][k] != Some(v)) && (0..self.n).all(|k| table[k][j] != Some(v))
            })
            .collect()
    }

    /// Close the partial table under the associativity consequences
    /// `(ab)c = a(bc)`; false on contradiction (including Latin violations).
    fn propagate(&self, table: &mut Partial) -> bool {
        loop {
            let mut changed = false;
            for a in 0..self.n {
                for b in 0..self.n {
                    let Some(ab) = table[a][b] else { continue };
                    for c in 0..self.n {
                        let Some(bc) = table[b][c] else { continue };
                        match (table[ab][c], table[a][bc]) {
                            (Some(x), Some(y)) => {
                                if x != y {
                                    return false;
                                }
                            }
                            (Some(x), None) => {
                                if !self.set(table, a, bc, x) {
                                    return false;
                                }
                                changed = true;
                            }
                            (None, Some(y)) => {
                                if !self.set(table, ab, c, y) {
                                    return false;
                                }
                                changed = true;
                            }
                            (None, None) => {}
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn set(&self, table: &mut Partial, i: usize, j: usize, v: usize) -> bool {
        let row_ok = (0..self.n).all(|k| k == j || table[i][k] != Some(v));
        let col_ok = (0..self.n).all(|k| k == i || table[k][j] != Some(v));
        if !row_ok || !col_ok {
            return false;
        }
        table[i][j] = Some(v);
        true
    }
}
