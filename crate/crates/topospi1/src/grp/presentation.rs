//! Finitely presented groups: relator words, transitive permutation actions
//! of bounded degree, and bounded truncations of the profinite completion.
//!
//! Words are written over generator names; a name prefixed with `~` denotes
//! the formal inverse. Letters of a word act on points in reading order, so
//! the relator `"f g ~h"` asserts that applying `f` then `g` equals applying
//! `h`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{close_permutations, perm, FiniteGroup, GroupHom, GrpError};
use crate::caps::Caps;

/// One letter of a relator word: a generator or its formal inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize) -> Self {
        Letter {
            gen,
            inverse: false,
        }
    }

    pub fn inverted(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn invert(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }
}

pub type Word = Vec<Letter>;

/// The inverse of a word: letters reversed and individually inverted.
pub fn invert_word(word: &[Letter]) -> Word {
    word.iter().rev().map(|l| l.invert()).collect()
}

/// A generators-and-relators presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl FinitePresentation {
    pub fn new(generators: Vec<String>, relator_words: &[String]) -> Result<Self, GrpError> {
        let mut pres = FinitePresentation {
            generators,
            relators: Vec::new(),
        };
        for word in relator_words {
            let parsed = pres.parse_word(word)?;
            pres.relators.push(parsed);
        }
        Ok(pres)
    }

    pub fn parse_word(&self, word: &str) -> Result<Word, GrpError> {
        let mut out = Vec::new();
        for token in word.split_whitespace() {
            let (name, inverse) = match token.strip_prefix('~') {
                Some(rest) => (rest, true),
                None => (token, false),
            };
            let gen = self
                .generators
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| GrpError::UnknownGenerator(name.to_string()))?;
            out.push(Letter { gen, inverse });
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// All transitive permutation actions of the presented group on
    /// `{1..k}`, `k <= degree`, up to simultaneous conjugation. Each action
    /// lists one permutation (image array on `0..k-1`) per generator; point 0
    /// is the basepoint. Output is ordered by degree, then by the canonical
    /// form of the permutation tuple.
    pub fn low_index_reps(
        &self,
        degree: usize,
        caps: &Caps,
    ) -> Result<Vec<TransitiveAction>, GrpError> {
        if degree > caps.degree {
            return Err(GrpError::CapExceeded {
                what: "low-index degree".into(),
                needed: degree,
                cap: caps.degree,
            });
        }
        if degree == 0 {
            return Ok(Vec::new());
        }
        // Letters as column indices: generator i forward = 2i, inverse = 2i+1.
        let relators: Vec<Vec<usize>> = self
            .relators
            .iter()
            .map(|w| w.iter().map(|l| 2 * l.gen + usize::from(l.inverse)).collect())
            .collect();
        let mut search = LowIndexSearch {
            rank: self.rank(),
            max_points: degree,
            relators,
            complete: Vec::new(),
        };
        let table = vec![vec![None; 2 * self.rank()]; 1];
        search.descend(table);

        let mut canonical: BTreeSet<(usize, Vec<Vec<usize>>)> = BTreeSet::new();
        for perms in search.complete {
            let k = perms.first().map_or(1, |p| p.len());
            canonical.insert((k, canonical_action_form(&perms, k)));
        }
        Ok(canonical
            .into_iter()
            .map(|(degree, perms)| TransitiveAction { degree, perms })
            .collect())
    }

    /// The finite quotient by the intersection of the kernels of all
    /// transitive actions of degree at most `degree`, realised as the closure
    /// of the combined permutation action on the disjoint union of all the
    /// coset spaces.
    pub fn truncated_completion(
        &self,
        degree: usize,
        caps: &Caps,
    ) -> Result<TruncatedCompletion, GrpError> {
        let actions = self.low_index_reps(degree, caps)?;
        let total: usize = actions.iter().map(|a| a.degree).sum();
        // Combined permutation per generator, block by block.
        let mut combined: Vec<Vec<usize>> = vec![Vec::with_capacity(total); self.rank()];
        for action in &actions {
            for (gen, p) in action.perms.iter().enumerate() {
                let offset = combined[gen].len();
                combined[gen].extend(p.iter().map(|&x| x + offset));
            }
        }
        if self.rank() == 0 || total == 0 {
            let group = FiniteGroup::from_table(&[vec![0]]).expect("trivial table");
            return Ok(TruncatedCompletion {
                bound: degree,
                generator_images: vec![0; self.rank()],
                element_words: vec![Vec::new()],
                group,
                degrees: actions.iter().map(|a| a.degree).collect(),
            });
        }
        let elements = close_permutations(&combined, caps.order).ok_or(GrpError::CapExceeded {
            what: "truncated completion order".into(),
            needed: caps.order + 1,
            cap: caps.order,
        })?;
        // Rebuild words by breadth-first search so each element carries a
        // defining word over the presentation generators.
        let index_of = |p: &Vec<usize>| elements.iter().position(|q| q == p).unwrap();
        let n = elements.len();
        let mut words: Vec<Option<Word>> = vec![None; n];
        words[0] = Some(Vec::new());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (gen, gp) in combined.iter().enumerate() {
                // applying the word of i, then the generator
                let next = perm::compose(gp, &elements[i]);
                let j = index_of(&next);
                if words[j].is_none() {
                    let mut w = words[i].clone().unwrap();
                    w.push(Letter::new(gen));
                    words[j] = Some(w);
                    queue.push_back(j);
                }
            }
        }
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                table[a][b] = index_of(&perm::compose(&elements[a], &elements[b]));
            }
        }
        let group = FiniteGroup::from_table(&table)?;
        let generator_images = combined.iter().map(index_of).collect();
        Ok(TruncatedCompletion {
            bound: degree,
            generator_images,
            element_words: words.into_iter().map(|w| w.expect("closure is connected")).collect(),
            group,
            degrees: actions.iter().map(|a| a.degree).collect(),
        })
    }
}

/// A transitive action on `{0..degree-1}`: one permutation per generator, in
/// canonical (minimal under simultaneous conjugation) form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitiveAction {
    pub degree: usize,
    pub perms: Vec<Vec<usize>>,
}

/// Lexicographically minimal simultaneous conjugate of a permutation tuple.
pub fn canonical_action_form(perms: &[Vec<usize>], degree: usize) -> Vec<Vec<usize>> {
    let mut best: Option<Vec<Vec<usize>>> = None;
    for s in perm::all_permutations(degree) {
        let candidate: Vec<Vec<usize>> = perms.iter().map(|p| perm::conjugate(p, &s)).collect();
        if best.as_ref().map_or(true, |b| candidate < *b) {
            best = Some(candidate);
        }
    }
    best.unwrap_or_default()
}

/// The quotient of a presented group by the kernel intersection of all
/// degree-bounded transitive actions, with the generator images and a word
/// for every element.
#[derive(Debug, Clone)]
pub struct TruncatedCompletion {
    pub bound: usize,
    pub group: FiniteGroup,
    pub generator_images: Vec<usize>,
    pub element_words: Vec<Word>,
    pub degrees: Vec<usize>,
}

impl TruncatedCompletion {
    /// Evaluate a word over the presentation generators in the completion.
    pub fn eval_word(&self, word: &[Letter]) -> usize {
        let mut acc = self.group.identity();
        for letter in word {
            let mut image = self.generator_images[letter.gen];
            if letter.inverse {
                image = self.group.inv(image);
            }
            // apply the accumulated word first, then the letter
            acc = self.group.mul(image, acc);
        }
        acc
    }

    /// The canonical surjection onto a completion at a smaller (or equal)
    /// bound of the same presentation: each element is sent through one of
    /// its defining words.
    pub fn quotient_to(&self, coarser: &TruncatedCompletion) -> Result<GroupHom, GrpError> {
        let map: Vec<usize> = self
            .element_words
            .iter()
            .map(|w| coarser.eval_word(w))
            .collect();
        let hom = GroupHom::new(&self.group, &coarser.group, map)?;
        if !hom.is_surjective() {
            return Err(GrpError::NotAHomomorphism(
                "completion comparison map is not surjective".into(),
            ));
        }
        Ok(hom)
    }
}

/// Backtracking enumeration of complete coset tables on at most `max_points`
/// points. Deductions from relator scans are propagated eagerly, so every
/// completed table satisfies all relators at all points.
struct LowIndexSearch {
    rank: usize,
    max_points: usize,
    relators: Vec<Vec<usize>>,
    complete: Vec<Vec<Vec<usize>>>,
}

type Table = Vec<Vec<Option<usize>>>;

fn inv_col(col: usize) -> usize {
    col ^ 1
}

impl LowIndexSearch {
    fn descend(&mut self, table: Table) {
        // find the first undefined entry in row-major order
        let mut hole = None;
        'scan: for (p, row) in table.iter().enumerate() {
            for (c, entry) in row.iter().enumerate() {
                if entry.is_none() {
                    hole = Some((p, c));
                    break 'scan;
                }
            }
        }
        let Some((p, c)) = hole else {
            self.record(&table);
            return;
        };
        // candidates: existing points whose inverse column is free, then a
        // fresh point
        let points = table.len();
        for q in 0..points {
            if table[q][inv_col(c)].is_none() {
                let mut next = table.clone();
                next[p][c] = Some(q);
                next[q][inv_col(c)] = Some(p);
                if self.propagate(&mut next) {
                    self.descend(next);
                }
            }
        }
        if points < self.max_points {
            let mut next = table.clone();
            next.push(vec![None; 2 * self.rank]);
            next[p][c] = Some(points);
            next[points][inv_col(c)] = Some(p);
            if self.propagate(&mut next) {
                self.descend(next);
            }
        }
    }

    fn record(&mut self, table: &Table) {
        let k = table.len();
        let mut perms = Vec::with_capacity(self.rank);
        for gen in 0..self.rank {
            let p: Vec<usize> = (0..k).map(|x| table[x][2 * gen].unwrap()).collect();
            debug_assert!(perm::is_permutation(&p));
            perms.push(p);
        }
        self.complete.push(perms);
    }

    /// Scan every relator at every point until no scan deduces anything new;
    /// `false` on contradiction.
    fn propagate(&self, table: &mut Table) -> bool {
        loop {
            let mut deduced = false;
            for r in 0..self.relators.len() {
                for p in 0..table.len() {
                    match scan_relator(table, &self.relators[r], p) {
                        Scan::Contradiction => return false,
                        Scan::Deduced => deduced = true,
                        Scan::Done | Scan::Incomplete => {}
                    }
                }
            }
            if !deduced {
                return true;
            }
        }
    }
}

enum Scan {
    Done,
    Deduced,
    Incomplete,
    Contradiction,
}

/// Trace `word` starting at `p`, filling the single missing step if exactly
/// one remains. A fully traced relator must return to its start.
fn scan_relator(table: &mut Table, word: &[usize], p: usize) -> Scan {
    if word.is_empty() {
        return Scan::Done;
    }
    let mut f = p;
    let mut i = 0usize;
    while i < word.len() {
        match table[f][word[i]] {
            Some(next) => {
                f = next;
                i += 1;
            }
            None => break,
        }
    }
    if i == word.len() {
        return if f == p { Scan::Done } else { Scan::Contradiction };
    }
    let mut b = p;
    let mut j = word.len();
    while j > i + 1 {
        match table[b][inv_col(word[j - 1])] {
            Some(prev) => {
                b = prev;
                j -= 1;
            }
            None => break,
        }
    }
    if j == i + 1 {
        // exactly one gap: word[i] must take f to b
        match (table[f][word[i]], table[b][inv_col(word[i])]) {
            (Some(x), _) if x != b => Scan::Contradiction,
            (_, Some(y)) if y != f => Scan::Contradiction,
            (Some(_), Some(_)) => Scan::Done,
            _ => {
                table[f][word[i]] = Some(b);
                table[b][inv_col(word[i])] = Some(f);
                Scan::Deduced
            }
        }
    } else {
        Scan::Incomplete
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(names: &[&str]) -> FinitePresentation {
        FinitePresentation::new(names.iter().map(|s| s.to_string()).collect(), &[]).unwrap()
    }

    #[test]
    fn word_parsing_and_unknown_generators() {
        let p = FinitePresentation::new(
            vec!["a".into(), "b".into()],
            &["a b ~a ~b".into()],
        )
        .unwrap();
        assert_eq!(p.relators[0].len(), 4);
        assert!(p.relators[0][2].inverse);
        assert!(matches!(
            FinitePresentation::new(vec!["a".into()], &["a c".into()]),
            Err(GrpError::UnknownGenerator(name)) if name == "c"
        ));
    }

    #[test]
    fn infinite_cyclic_low_index_three() {
        // Oracle: a single permutation generates a transitive action on k
        // points iff it is a k-cycle, and all k-cycles are conjugate; so there
        // is exactly one class per degree.
        let p = free(&["t"]);
        let reps = p.low_index_reps(3, &Caps::default()).unwrap();
        assert_eq!(reps.len(), 3);
        assert_eq!(
            reps.iter().map(|r| r.degree).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
        for r in &reps {
            // single cycle: the orbit of 0 has full length
            let mut x = 0;
            let mut seen = vec![false; r.degree];
            for _ in 0..r.degree {
                assert!(!seen[x]);
                seen[x] = true;
                x = r.perms[0][x];
            }
            assert_eq!(x, 0);
        }
    }

    #[test]
    fn relator_kills_generator() {
        let p = FinitePresentation::new(vec!["t".into()], &["t".into()]).unwrap();
        for d in 1..=4 {
            let reps = p.low_index_reps(d, &Caps::default()).unwrap();
            assert_eq!(reps.len(), 1);
            assert_eq!(reps[0].degree, 1);
        }
    }

    #[test]
    fn free_group_rank_two_low_index_two() {
        // Oracle: enumerate all four pairs in Sym(2) and test transitivity;
        // Sym(2) is abelian so conjugation identifies nothing.
        let p = free(&["a", "b"]);
        let reps = p.low_index_reps(2, &Caps::default()).unwrap();
        assert_eq!(reps.len(), 4);
        let degree_two = reps.iter().filter(|r| r.degree == 2).count();
        assert_eq!(degree_two, 3);
    }

    #[test]
    fn s3_presentation_low_index() {
        // <a, b | a^2, b^3, (ab)^2> is S3; subgroup classes have indices
        // 1, 2, 3, 6.
        let p = FinitePresentation::new(
            vec!["a".into(), "b".into()],
            &["a a".into(), "b b b".into(), "a b a b".into()],
        )
        .unwrap();
        let reps = p.low_index_reps(6, &Caps::default()).unwrap();
        assert_eq!(
            reps.iter().map(|r| r.degree).collect::<Vec<_>>(),
            vec![1, 2, 3, 6]
        );
    }

    #[test]
    fn low_index_duplicate_free_up_to_conjugacy() {
        // brute force: no two returned tuples are simultaneously conjugate
        for pres in [free(&["t"]), free(&["a", "b"])] {
            let reps = pres.low_index_reps(4, &Caps::default()).unwrap();
            for (i, r) in reps.iter().enumerate() {
                for s in reps.iter().skip(i + 1) {
                    if r.degree != s.degree {
                        continue;
                    }
                    let conjugate_somehow = perm::all_permutations(r.degree).into_iter().any(|c| {
                        r.perms
                            .iter()
                            .zip(&s.perms)
                            .all(|(p, q)| perm::conjugate(p, &c) == *q)
                    });
                    assert!(!conjugate_somehow);
                }
            }
        }
    }

    #[test]
    fn completion_of_z_at_bound_four_is_z12() {
        // Combined action of cycles of lengths 1..4 has order lcm(1..4) = 12.
        let p = free(&["t"]);
        let c = p.truncated_completion(4, &Caps::default()).unwrap();
        assert_eq!(c.group.order(), 12);
        assert_eq!(c.group.element_order(c.generator_images[0]), 12);
    }

    #[test]
    fn completion_of_z_at_bound_six_is_z60() {
        let p = free(&["t"]);
        let c = p.truncated_completion(6, &Caps::default()).unwrap();
        assert_eq!(c.group.order(), 60);
        assert_eq!(c.group.element_order(c.generator_images[0]), 60);
    }

    #[test]
    fn completion_of_z2_presentation() {
        let p = FinitePresentation::new(vec!["t".into()], &["t t".into()]).unwrap();
        for d in 1..=4 {
            let c = p.truncated_completion(d, &Caps::default()).unwrap();
            if d >= 2 {
                assert_eq!(c.group.order(), 2);
            } else {
                assert!(c.group.order() <= 2);
            }
        }
    }

    #[test]
    fn completion_tower_is_monotone() {
        // the bound-d completion is a quotient of the bound-(d+1) completion
        let p = free(&["t"]);
        let caps = Caps::default();
        for d in 1..=5 {
            let fine = p.truncated_completion(d + 1, &caps).unwrap();
            let coarse = p.truncated_completion(d, &caps).unwrap();
            let hom = fine.quotient_to(&coarse).unwrap();
            assert!(hom.is_surjective());
        }
    }

    #[test]
    fn eval_word_matches_generator_images() {
        let p = free(&["t"]);
        let c = p.truncated_completion(3, &Caps::default()).unwrap();
        let t = c.generator_images[0];
        let w = vec![Letter::new(0), Letter::new(0), Letter::inverted(0)];
        assert_eq!(c.eval_word(&w), t);
    }
}
