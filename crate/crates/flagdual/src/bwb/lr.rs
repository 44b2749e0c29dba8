use std::collections::BTreeMap;

/// Littlewood–Richardson expansion of V_λ ⊗ V_μ for GL(n), where λ and μ are
/// non-increasing integer vectors of length n. Returns highest weight → multiplicity.
pub fn lr_product(lambda: &[i64], mu: &[i64]) -> BTreeMap<Vec<i64>, u64> {
    let n = lambda.len();
    assert_eq!(n, mu.len());
    if n == 0 {
        return BTreeMap::from([(Vec::new(), 1)]);
    }
    let (ls, ms) = (lambda[n - 1], mu[n - 1]);
    let lp: Vec<i64> = lambda.iter().map(|x| x - ls).collect();
    let mp: Vec<i64> = mu.iter().map(|x| x - ms).collect();
    let mut out = BTreeMap::new();
    let mut shape = lp.clone();
    let mut cnt = vec![vec![0i64; n]; n];
    place_label(0, &mp, &mut shape, &mut cnt, &mut out);
    out.into_iter().map(|(nu, c)| (nu.iter().map(|x| x + ls + ms).collect(), c)).collect()
}

/// Adds the boxes labelled `k` as a horizontal strip, then recurses on the next label.
fn place_label(k: usize, mu: &[i64], shape: &mut Vec<i64>, cnt: &mut Vec<Vec<i64>>, out: &mut BTreeMap<Vec<i64>, u64>) {
    if k == mu.len() {
        *out.entry(shape.clone()).or_insert(0) += 1;
        return;
    }
    let old = shape.clone();
    strip(k, 0, mu[k], mu, &old, shape, cnt, out);
}

#[allow(clippy::too_many_arguments)]
fn strip(
    k: usize,
    row: usize,
    remaining: i64,
    mu: &[i64],
    old: &[i64],
    shape: &mut Vec<i64>,
    cnt: &mut Vec<Vec<i64>>,
    out: &mut BTreeMap<Vec<i64>, u64>,
) {
    let n = shape.len();
    if row == n {
        if remaining == 0 {
            place_label(k + 1, mu, shape, cnt, out);
        }
        return;
    }
    let cap = if row == 0 { remaining } else { remaining.min(old[row - 1] - old[row]) };
    for a in 0..=cap {
        if k > 0 {
            // reverse reading word stays a lattice word
            let upto: i64 = (0..row).map(|i| cnt[i][k]).sum::<i64>() + a;
            let prev: i64 = (0..row).map(|i| cnt[i][k - 1]).sum();
            if upto > prev {
                break;
            }
        }
        shape[row] += a;
        cnt[row][k] += a;
        strip(k, row + 1, remaining - a, mu, old, shape, cnt, out);
        shape[row] -= a;
        cnt[row][k] -= a;
    }
}

#[cfg(test)]
pub(crate) mod gt {
    //! Characters by Gelfand–Tsetlin patterns, used as an independent oracle.
    use std::collections::{BTreeMap, HashMap};

    /// Weight multiset of the GL(n) irreducible with highest weight `top`.
    pub fn character(top: &[i64]) -> BTreeMap<Vec<i64>, u64> {
        let mut out = BTreeMap::new();
        let n = top.len();
        let mut rows = vec![top.to_vec()];
        rec(&mut rows, n, &mut out);
        out
    }

    fn rec(rows: &mut Vec<Vec<i64>>, n: usize, out: &mut BTreeMap<Vec<i64>, u64>) {
        let last = rows.last().unwrap().clone();
        if last.len() == 1 || last.is_empty() {
            // weight entry i is |row_{n-i}| - |row_{n-i-1}|
            let sums: Vec<i64> = rows.iter().map(|r| r.iter().sum()).collect();
            let mut wt = vec![0; n];
            for i in 0..n {
                let a = sums[n - 1 - i];
                let b = if n - i < sums.len() { sums[n - i] } else { 0 };
                wt[i] = a - b;
            }
            *out.entry(wt).or_insert(0) += 1;
            return;
        }
        for next in interlacing(&last) {
            rows.push(next);
            rec(rows, n, out);
            rows.pop();
        }
    }

    pub fn interlacing(row: &[i64]) -> Vec<Vec<i64>> {
        let mut acc = vec![vec![]];
        for i in 0..row.len() - 1 {
            let mut nxt = Vec::new();
            for p in &acc {
                for v in row[i + 1]..=row[i] {
                    let mut q: Vec<i64> = p.clone();
                    q.push(v);
                    nxt.push(q);
                }
            }
            acc = nxt;
        }
        acc
    }

    /// Number of GT patterns with top row `top`.
    pub fn count(top: &[i64], memo: &mut HashMap<Vec<i64>, u128>) -> u128 {
        if top.len() <= 1 {
            return 1;
        }
        if let Some(&c) = memo.get(top) {
            return c;
        }
        let c = interlacing(top).iter().map(|r| count(r, memo)).sum();
        memo.insert(top.to_vec(), c);
        c
    }

    /// Decomposes a character by repeatedly removing the highest remaining weight.
    pub fn decompose(mut ch: BTreeMap<Vec<i64>, u64>) -> BTreeMap<Vec<i64>, u64> {
        let mut out = BTreeMap::new();
        while let Some(top) = ch.keys().next_back().cloned() {
            // the lexicographically largest weight is dominant and highest
            let m = ch[&top];
            for (w, c) in character(&top) {
                let e = ch.get_mut(&w).expect("subcharacter");
                *e -= c * m;
                if *e == 0 {
                    ch.remove(&w);
                }
            }
            out.insert(top, m);
        }
        out
    }

    pub fn product(a: &BTreeMap<Vec<i64>, u64>, b: &BTreeMap<Vec<i64>, u64>) -> BTreeMap<Vec<i64>, u64> {
        let mut out = BTreeMap::new();
        for (x, m) in a {
            for (y, n) in b {
                let s: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                *out.entry(s).or_insert(0) += m * n;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::gt;
    use super::*;
    use crate::bwb::weight::weyl_dim;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn dominant(n: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-3i64..=3, n).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        })
    }

    #[test]
    fn small_products() {
        // U⊗U for a rank-2 bundle with weight (1,0)
        let p = lr_product(&[1, 0], &[1, 0]);
        assert_eq!(p, BTreeMap::from([(vec![1, 1], 1), (vec![2, 0], 1)]));
        // adjoint plus trivial for rank 3
        let p = lr_product(&[0, 0, -1], &[1, 0, 0]);
        assert_eq!(p, BTreeMap::from([(vec![0, 0, 0], 1), (vec![1, 0, -1], 1)]));
        // the classical c^{(3,2,1)}_{(2,1),(2,1)} = 2
        assert_eq!(lr_product(&[2, 1, 0], &[2, 1, 0])[&vec![3, 2, 1]], 2);
    }

    #[test]
    fn weyl_matches_gt_count_on_gl5() {
        let mut memo = HashMap::new();
        let mut checked = 0;
        for a in -3..=3i64 {
            for b in -3..=a {
                for c in -3..=b {
                    for d in -3..=c {
                        for e in -3..=d {
                            let w = [a, b, c, d, e];
                            assert_eq!(weyl_dim(&w), gt::count(&w, &mut memo), "{w:?}");
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(checked, 462);
    }

    proptest! {
        #[test]
        fn lr_matches_character_product_gl3(l in dominant(3), m in dominant(3)) {
            let want = gt::decompose(gt::product(&gt::character(&l), &gt::character(&m)));
            prop_assert_eq!(lr_product(&l, &m), want);
        }

        #[test]
        fn lr_matches_character_product_gl2(l in dominant(2), m in dominant(2)) {
            let want = gt::decompose(gt::product(&gt::character(&l), &gt::character(&m)));
            prop_assert_eq!(lr_product(&l, &m), want);
        }

        #[test]
        fn lr_preserves_dimension(l in dominant(3), m in dominant(3)) {
            let total: u128 = lr_product(&l, &m).iter().map(|(nu, c)| weyl_dim(nu) * *c as u128).sum();
            prop_assert_eq!(total, weyl_dim(&l) * weyl_dim(&m));
        }
    }
}
