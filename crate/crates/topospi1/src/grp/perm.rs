//! Plain permutation helpers: permutations of `{0..k-1}` as image arrays.

/// Identity permutation on `k` points.
pub fn identity(k: usize) -> Vec<usize> {
    (0..k).collect()
}

/// Function composition: `(compose(p, q))(x) = p[q[x]]`, i.e. apply `q` first.
pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

pub fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// All permutations of `{0..k-1}` in lexicographic order of their image arrays.
pub fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = identity(k);
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..k).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

/// Conjugate `p` by `s`: the permutation acting on relabelled points,
/// `x -> s[p[s^{-1}[x]]]`.
pub fn conjugate(p: &[usize], s: &[usize]) -> Vec<usize> {
    let s_inv = inverse(s);
    (0..p.len()).map(|x| s[p[s_inv[x]]]).collect()
}
