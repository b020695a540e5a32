//! Brute-force oracles for the test suites.
//!
//! Everything here is deliberately independent of the engine crates: raw
//! `Vec<Vec<u64>>` matrices, naive algorithms, no shared helper code. A test
//! that compares an engine result against one of these oracles fails unless
//! both computations agree, and the two computations share nothing but the
//! standard library.

/// Reduce `x` into `[0, p)`.
fn norm(x: i128, p: u64) -> u64 {
    let p = p as i128;
    (((x % p) + p) % p) as u64
}

/// Multiplicative inverse mod a prime `p` by Fermat's little theorem.
fn inv_mod(a: u64, p: u64) -> u64 {
    let mut out: u128 = 1;
    let mut base: u128 = (a % p) as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            out = out * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    out as u64
}

/// Rank of a matrix over F_p by straightforward row reduction.
///
/// Rows are `Vec<u64>`; an empty matrix (or one with empty rows) has rank 0.
pub fn naive_rank(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        let mut piv = None;
        for r in row..nrows {
            if m[r][col] != 0 {
                piv = Some(r);
                break;
            }
        }
        let Some(piv) = piv else { continue };
        m.swap(row, piv);
        let scale = inv_mod(m[row][col], p);
        for c in col..ncols {
            m[row][c] = (m[row][c] as u128 * scale as u128 % p as u128) as u64;
        }
        for r in 0..nrows {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in col..ncols {
                    let sub = (f as u128 * m[row][c] as u128 % p as u128) as u64;
                    m[r][c] = norm(m[r][c] as i128 - sub as i128, p);
                }
            }
        }
        rank += 1;
        row += 1;
        if row == nrows {
            break;
        }
    }
    rank
}

/// All strict chains `x_0 < x_1 < ... < x_k` of a finite preorder, grouped by
/// length. `leq[i][j]` means `i <= j`. Chains are returned in lexicographic
/// order of their vertex tuples; `chains[k]` holds the k-simplices.
pub fn strict_chains(leq: &[Vec<bool>]) -> Vec<Vec<Vec<usize>>> {
    let n = leq.len();
    let mut per_dim: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while !frontier.is_empty() {
        per_dim.push(frontier.clone());
        let mut next = Vec::new();
        for chain in &frontier {
            let last = *chain.last().unwrap();
            for j in 0..n {
                if j != last && leq[last][j] && !leq[j][last] {
                    let mut c = chain.clone();
                    c.push(j);
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    per_dim
}

/// Cohomology dimensions of the order complex of a finite poset, over F_p.
///
/// Returns `h[k]` = dim H^k for k = 0..=top dimension. For a finite poset this
/// agrees with the (sheaf) cohomology of the corresponding finite topological
/// space with constant coefficients.
pub fn order_complex_cohomology(leq: &[Vec<bool>], p: u64) -> Vec<usize> {
    let chains = strict_chains(leq);
    if chains.is_empty() {
        return Vec::new();
    }
    // Coboundary d^k : C^k -> C^{k+1}, (d phi)(sigma) = sum_i (-1)^i phi(d_i sigma).
    let mut ranks = Vec::new();
    for k in 0..chains.len() {
        if k + 1 >= chains.len() {
            ranks.push(0);
            break;
        }
        let lower = &chains[k];
        let upper = &chains[k + 1];
        let index_of = |c: &Vec<usize>| lower.binary_search(c).expect("face must be a chain");
        let mut rows = vec![vec![0u64; lower.len()]; upper.len()];
        for (si, sigma) in upper.iter().enumerate() {
            for drop in 0..sigma.len() {
                let mut face: Vec<usize> = sigma.clone();
                face.remove(drop);
                let j = index_of(&face);
                let sign = if drop % 2 == 0 { 1i128 } else { -1i128 };
                rows[si][j] = norm(rows[si][j] as i128 + sign, p);
            }
        }
        ranks.push(naive_rank(&rows, p));
    }
    let mut h = Vec::new();
    for k in 0..chains.len() {
        let dim_ck = chains[k].len();
        let out_rank = ranks.get(k).copied().unwrap_or(0);
        let in_rank = if k == 0 { 0 } else { ranks[k - 1] };
        h.push(dim_ck - out_rank - in_rank);
    }
    h
}

/// Connected components of an undirected graph given by edges over `0..n`.
pub fn component_count(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    (0..n).filter(|&x| find(&mut parent, x) == x).count()
}

/// Partition `0..n` into connected components; each component is a sorted
/// vertex list, components ordered by smallest vertex.
pub fn components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut buckets: Vec<(usize, Vec<usize>)> = Vec::new();
    for x in 0..n {
        let r = find(&mut parent, x);
        match buckets.iter_mut().find(|(root, _)| *root == r) {
            Some((_, v)) => v.push(x),
            None => buckets.push((r, vec![x])),
        }
    }
    buckets.sort_by_key(|(_, v)| v[0]);
    buckets.into_iter().map(|(_, v)| v).collect()
}

/// Group cohomology H^i(Z/n, M) for M = F_p^d with the generator acting by the
/// matrix `g` (columns are images of basis vectors), computed from the
/// two-periodic recursion: H^0 = ker(g-1), H^odd = ker(N)/im(g-1),
/// H^even>0 = ker(g-1)/im(N), where N = 1 + g + ... + g^{n-1}.
///
/// Returns `[h0, h1, h2]`; by periodicity H^{i+2} = H^i for i >= 1.
pub fn cyclic_cohomology(g: &[Vec<u64>], n: u64, p: u64) -> [usize; 3] {
    let d = g.len();
    let mul = |a: &[Vec<u64>], b: &[Vec<u64>]| -> Vec<Vec<u64>> {
        let mut out = vec![vec![0u64; d]; d];
        for i in 0..d {
            for j in 0..d {
                let mut acc: u128 = 0;
                for k in 0..d {
                    acc += a[i][k] as u128 * b[k][j] as u128;
                }
                out[i][j] = (acc % p as u128) as u64;
            }
        }
        out
    };
    let ident: Vec<Vec<u64>> = (0..d)
        .map(|i| (0..d).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut norm_mat = vec![vec![0u64; d]; d];
    let mut pow = ident.clone();
    for _ in 0..n {
        for i in 0..d {
            for j in 0..d {
                norm_mat[i][j] = (norm_mat[i][j] + pow[i][j]) % p;
            }
        }
        pow = mul(&pow, g);
    }
    let g_minus_1: Vec<Vec<u64>> = (0..d)
        .map(|i| (0..d).map(|j| norm(g[i][j] as i128 - i128::from(i == j), p)).collect())
        .collect();
    let rk_gm1 = naive_rank(&g_minus_1, p);
    let rk_norm = naive_rank(&norm_mat, p);
    // ker(g-1) = d - rk(g-1); im(g-1) has rank rk(g-1); im(N) subset of ker(g-1) etc.
    let h0 = d - rk_gm1;
    let h1 = (d - rk_norm) - rk_gm1;
    let h2 = (d - rk_gm1) - rk_norm;
    [h0, h1, h2]
}

/// Delannoy-style enumeration of all subsets of the grid interval between two
/// corners that are chains (in the order (a,b) <= (c,d) iff a <= c and b >= d)
/// containing both endpoints. Returns each chain sorted along the order.
/// Coordinates are (first, second) pairs.
pub fn grid_chains_with_endpoints(
    from: (usize, usize),
    to: (usize, usize),
) -> Vec<Vec<(usize, usize)>> {
    assert!(from.0 <= to.0 && from.1 >= to.1, "corners must be comparable");
    let mut cells = Vec::new();
    for a in from.0..=to.0 {
        for b in to.1..=from.1 {
            cells.push((a, b));
        }
    }
    // order cells so that any chain, read in this order, is sorted
    cells.sort_by_key(|&(a, b)| (a + (from.1 - b), a));
    let le = |x: (usize, usize), y: (usize, usize)| x.0 <= y.0 && x.1 >= y.1;
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<(usize, usize)>)> = vec![(0, vec![from])];
    while let Some((start, chain)) = stack.pop() {
        let last = *chain.last().unwrap();
        if last == to {
            out.push(chain);
            continue;
        }
        for i in start..cells.len() {
            let c = cells[i];
            if c != last && le(last, c) && le(c, to) {
                let mut next = chain.clone();
                next.push(c);
                stack.push((i + 1, next));
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(naive_rank(&[vec![1, 2], vec![2, 4]], 5), 1);
        assert_eq!(naive_rank(&[vec![1, 0], vec![0, 1]], 2), 2);
        assert_eq!(naive_rank(&[vec![0, 0], vec![0, 0]], 3), 0);
        // 2x2 with determinant divisible by 7 only
        assert_eq!(naive_rank(&[vec![3, 5], vec![2, 1]], 7), 1);
        assert_eq!(naive_rank(&[vec![3, 5], vec![2, 1]], 5), 2);
    }

    /// 4-point circle: two closed points below two open points.
    fn circle4() -> Vec<Vec<bool>> {
        let mut leq = vec![vec![false; 4]; 4];
        for i in 0..4 {
            leq[i][i] = true;
        }
        // 0,1 closed; 2,3 open; every closed point under every open point
        for c in 0..2 {
            for o in 2..4 {
                leq[c][o] = true;
            }
        }
        leq
    }

    #[test]
    fn circle_cohomology() {
        for p in [2, 3, 5] {
            let h = order_complex_cohomology(&circle4(), p);
            assert_eq!(h, vec![1, 1]);
        }
    }

    #[test]
    fn cone_on_circle_is_contractible() {
        // add a minimum under the 4-point circle
        let mut leq = vec![vec![false; 5]; 5];
        for i in 0..5 {
            leq[i][i] = true;
        }
        for c in 1..3 {
            for o in 3..5 {
                leq[c][o] = true;
            }
        }
        for x in 1..5 {
            leq[0][x] = true;
        }
        for p in [2, 3, 5] {
            let h = order_complex_cohomology(&leq, p);
            assert_eq!(h[0], 1);
            assert!(h[1..].iter().all(|&d| d == 0));
        }
    }

    #[test]
    fn component_counting() {
        assert_eq!(component_count(4, &[(0, 1), (2, 3)]), 2);
        assert_eq!(component_count(3, &[]), 3);
        assert_eq!(components(4, &[(0, 1), (2, 3)]), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn cyclic_cohomology_trivial_action() {
        // trivial action on F_p, group Z/n
        let g = vec![vec![1u64]];
        assert_eq!(cyclic_cohomology(&g, 4, 2), [1, 1, 1]);
        assert_eq!(cyclic_cohomology(&g, 3, 2), [1, 0, 0]);
        assert_eq!(cyclic_cohomology(&g, 9, 3), [1, 1, 1]);
    }

    #[test]
    fn cyclic_cohomology_regular_representation() {
        // Z/3 acting on F_2^3 by cyclic permutation: free module, cohomology
        // concentrated in degree 0 with dim 1.
        let g = vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]];
        assert_eq!(cyclic_cohomology(&g, 3, 2), [1, 0, 0]);
    }

    /// Independent count of chains-with-endpoints: N(u) = 1 if u = t, else
    /// the sum of N(v) over u < v <= t.
    fn chain_count(from: (usize, usize), to: (usize, usize)) -> u64 {
        if from == to {
            return 1;
        }
        let mut total = 0;
        for a in from.0..=to.0 {
            for b in to.1..=from.1 {
                if (a, b) != from && (a, b) != to {
                    if a >= from.0 && b <= from.1 {
                        total += chain_count((a, b), to);
                    }
                }
            }
        }
        total + 1 // the chain jumping straight to `to`
    }

    #[test]
    fn grid_chain_enumeration_matches_recursion() {
        // 1x1 interval: {s,t}, {s,(0,0),t}, {s,(1,1),t}; the two off-corner
        // cells are incomparable so no chain holds both.
        assert_eq!(grid_chains_with_endpoints((0, 1), (1, 0)).len(), 3);
        // 2x2: hand recursion gives 26
        assert_eq!(grid_chains_with_endpoints((0, 2), (2, 0)).len(), 26);
        for (w, h) in [(1, 2), (3, 3), (4, 4), (2, 4)] {
            let listed = grid_chains_with_endpoints((0, h), (w, 0)).len() as u64;
            assert_eq!(listed, chain_count((0, h), (w, 0)), "interval {w}x{h}");
        }
    }

    #[test]
    fn chains_are_sorted_along_order() {
        for chain in grid_chains_with_endpoints((0, 2), (2, 0)) {
            for w in chain.windows(2) {
                assert!(w[0].0 <= w[1].0 && w[0].1 >= w[1].1);
                assert!(w[0] != w[1]);
            }
        }
    }
}
