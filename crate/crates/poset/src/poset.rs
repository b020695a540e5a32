//! Finite posets as finite topological spaces.
//!
//! Opens are the up-closed subsets, so the minimal open neighborhood of `x`
//! is its up-set and closed subspaces are down-sets. Monotone maps are
//! exactly the continuous ones.

use crate::SpaceError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poset {
    names: Vec<String>,
    n: usize,
    leq: Vec<bool>,
}

impl Poset {
    /// Build from a generating relation on named elements; takes the
    /// reflexive-transitive closure and rejects cycles.
    pub fn from_relation(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, SpaceError> {
        let n = names.len();
        {
            let mut seen = names.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != n {
                return Err(SpaceError::BadPoset("duplicate element names".into()));
            }
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(SpaceError::BadPoset("relation index out of range".into()));
            }
            leq[a * n + b] = true;
        }
        // transitive closure
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i * n + j] && leq[j * n + i] {
                    return Err(SpaceError::BadPoset(format!(
                        "antisymmetry fails between {} and {}",
                        names[i], names[j]
                    )));
                }
            }
        }
        Ok(Poset { names, n, leq })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|m| m == name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// The minimal open neighborhood `{y : y >= x}`.
    pub fn up_set(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| self.leq(x, y)).collect()
    }

    pub fn down_set(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| self.leq(y, x)).collect()
    }

    pub fn down_mask(&self, x: usize) -> Vec<bool> {
        (0..self.n).map(|y| self.leq(y, x)).collect()
    }

    /// Minimal strict successors.
    pub fn covers(&self, x: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&y| self.lt(x, y) && !(0..self.n).any(|z| self.lt(x, z) && self.lt(z, y)))
            .collect()
    }

    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if self.lt(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_up_closed(&self, mask: &[bool]) -> bool {
        (0..self.n).all(|x| !mask[x] || self.up_set(x).into_iter().all(|y| mask[y]))
    }

    pub fn is_down_closed(&self, mask: &[bool]) -> bool {
        (0..self.n).all(|x| !mask[x] || self.down_set(x).into_iter().all(|y| mask[y]))
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.covers(x).is_empty()).collect()
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.n).find(|&x| (0..self.n).all(|y| self.leq(x, y)))
    }

    /// Number of points in the longest chain.
    pub fn longest_chain(&self) -> usize {
        let mut depth = vec![0usize; self.n];
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| self.down_set(x).len());
        for &x in &order {
            depth[x] = 1 + (0..self.n).filter(|&y| self.lt(y, x)).map(|y| depth[y]).max().unwrap_or(0);
        }
        depth.into_iter().max().unwrap_or(0)
    }

    /// Connected-component labels of the subspace selected by `mask`
    /// (comparability in the ambient order), as `component index per point`;
    /// unselected points get `usize::MAX`.
    pub fn component_labels(&self, mask: &[bool]) -> (usize, Vec<usize>) {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        for start in 0..self.n {
            if !mask[start] || label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = next;
            while let Some(x) = stack.pop() {
                for y in 0..self.n {
                    if mask[y]
                        && label[y] == usize::MAX
                        && (self.leq(x, y) || self.leq(y, x))
                    {
                        label[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        (next, label)
    }

    pub fn induced(&self, mask: &[bool]) -> (Poset, Vec<usize>) {
        let keep: Vec<usize> = (0..self.n).filter(|&x| mask[x]).collect();
        let names = keep.iter().map(|&x| self.names[x].clone()).collect();
        let mut pairs = Vec::new();
        for (a, &xa) in keep.iter().enumerate() {
            for (b, &xb) in keep.iter().enumerate() {
                if self.lt(xa, xb) {
                    pairs.push((a, b));
                }
            }
        }
        (Poset::from_relation(names, &pairs).expect("induced"), keep)
    }

    pub fn point() -> Poset {
        Poset::from_relation(vec!["pt".into()], &[]).expect("point")
    }

    pub fn chain(len: usize) -> Poset {
        let names = (0..len).map(|i| format!("t{i}")).collect();
        let pairs: Vec<_> = (0..len.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Poset::from_relation(names, &pairs).expect("chain")
    }

    pub fn product(&self, other: &Poset) -> (Poset, PosetMap, PosetMap) {
        let mut names = Vec::new();
        let mut pr1 = Vec::new();
        let mut pr2 = Vec::new();
        for a in 0..self.n {
            for b in 0..other.n {
                names.push(format!("({},{})", self.names[a], other.names[b]));
                pr1.push(a);
                pr2.push(b);
            }
        }
        let mut pairs = Vec::new();
        for i in 0..names.len() {
            for j in 0..names.len() {
                if self.leq(pr1[i], pr1[j]) && other.leq(pr2[i], pr2[j]) && i != j {
                    pairs.push((i, j));
                }
            }
        }
        let p = Poset::from_relation(names, &pairs).expect("product");
        let m1 = PosetMap::new(p.clone(), self.clone(), pr1).expect("pr1");
        let m2 = PosetMap::new(p, other.clone(), pr2).expect("pr2");
        (m1.src().clone(), m1, m2)
    }

    pub fn disjoint_union(&self, other: &Poset) -> Poset {
        let mut names: Vec<String> = self.names.iter().map(|s| format!("0:{s}")).collect();
        names.extend(other.names.iter().map(|s| format!("1:{s}")));
        let mut pairs = Vec::new();
        for (a, b) in self.strict_pairs() {
            pairs.push((a, b));
        }
        for (a, b) in other.strict_pairs() {
            pairs.push((self.n + a, self.n + b));
        }
        Poset::from_relation(names, &pairs).expect("disjoint union")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PosetMap {
    src: Poset,
    dst: Poset,
    vals: Vec<usize>,
}

impl PosetMap {
    pub fn new(src: Poset, dst: Poset, vals: Vec<usize>) -> Result<Self, SpaceError> {
        if vals.len() != src.n() {
            return Err(SpaceError::BadMap("wrong number of values".into()));
        }
        if vals.iter().any(|&v| v >= dst.n()) {
            return Err(SpaceError::BadMap("value out of range".into()));
        }
        for a in 0..src.n() {
            for b in 0..src.n() {
                if src.leq(a, b) && !dst.leq(vals[a], vals[b]) {
                    return Err(SpaceError::BadMap(format!(
                        "not monotone: {} <= {} but images are not ordered",
                        src.name(a),
                        src.name(b)
                    )));
                }
            }
        }
        Ok(PosetMap { src, dst, vals })
    }

    pub fn identity(p: &Poset) -> Self {
        PosetMap { src: p.clone(), dst: p.clone(), vals: (0..p.n()).collect() }
    }

    pub fn constant(src: &Poset, dst: &Poset, value: usize) -> Result<Self, SpaceError> {
        PosetMap::new(src.clone(), dst.clone(), vec![value; src.n()])
    }

    pub fn to_point(src: &Poset) -> Self {
        PosetMap::constant(src, &Poset::point(), 0).expect("to point")
    }

    pub fn src(&self) -> &Poset {
        &self.src
    }

    pub fn dst(&self) -> &Poset {
        &self.dst
    }

    pub fn apply(&self, x: usize) -> usize {
        self.vals[x]
    }

    /// `self . other`: apply `other` first.
    pub fn compose(&self, other: &PosetMap) -> PosetMap {
        assert_eq!(&self.src, other.dst(), "poset map composition mismatch");
        let vals = other.vals.iter().map(|&x| self.vals[x]).collect();
        PosetMap { src: other.src.clone(), dst: self.dst.clone(), vals }
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst && self.vals.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.dst.n()];
        for &v in &self.vals {
            seen[v] = true;
        }
        self.src.n() == self.dst.n() && seen.into_iter().all(|b| b)
    }

    /// Preimage of the minimal open neighborhood of `q`, as a mask.
    pub fn preimage_of_up(&self, q: usize) -> Vec<bool> {
        (0..self.src.n()).map(|x| self.dst.leq(q, self.vals[x])).collect()
    }

    pub fn preimage_mask(&self, dst_mask: &[bool]) -> Vec<bool> {
        (0..self.src.n()).map(|x| dst_mask[self.vals[x]]).collect()
    }
}

/// The pseudocircle with `2k` points: closed points `c0..c(k-1)` and open
/// points `o0..o(k-1)` with `c_i < o_i` and `c_(i+1 mod k) < o_i`. Its
/// order complex is a circle.
pub fn pseudocircle(k: usize) -> Result<Poset, SpaceError> {
    if k < 2 {
        return Err(SpaceError::BadPoset(format!("pseudocircle needs k >= 2, got {k}")));
    }
    let mut names: Vec<String> = (0..k).map(|i| format!("c{i}")).collect();
    names.extend((0..k).map(|i| format!("o{i}")));
    let mut pairs = Vec::new();
    for i in 0..k {
        pairs.push((i, k + i));
        pairs.push(((i + 1) % k, k + i));
    }
    Poset::from_relation(names, &pairs)
}

/// The pseudodisk: a pseudocircle together with a minimum `0` (the origin).
/// Contractible, with the pseudocircle as its open complement.
pub fn pseudodisk(k: usize) -> Result<Poset, SpaceError> {
    let s = pseudocircle(k)?;
    let mut names = vec!["0".to_string()];
    names.extend(s.names().iter().cloned());
    let mut pairs: Vec<(usize, usize)> =
        s.strict_pairs().into_iter().map(|(a, b)| (a + 1, b + 1)).collect();
    for x in 1..=2 * k {
        pairs.push((0, x));
    }
    Poset::from_relation(names, &pairs)
}

/// The `n`-fold cover `S_(kn) -> S_k`, wrapping indices modulo `k`.
pub fn covering_map(k: usize, n: usize) -> Result<PosetMap, SpaceError> {
    if n < 1 {
        return Err(SpaceError::BadMap("covering degree must be >= 1".into()));
    }
    let src = pseudocircle(k * n)?;
    let dst = pseudocircle(k)?;
    let mut vals = Vec::with_capacity(2 * k * n);
    for i in 0..k * n {
        vals.push(i % k);
    }
    for i in 0..k * n {
        vals.push(k + i % k);
    }
    PosetMap::new(src, dst, vals)
}

/// The deck transformation of `covering_map(k, n)` rotating one fundamental
/// domain: `c_i -> c_(i+k)`, `o_i -> o_(i+k)` modulo `kn`. Generates a free
/// action of Z/n commuting with the covering.
pub fn deck_generator(k: usize, n: usize) -> Result<PosetMap, SpaceError> {
    let s = pseudocircle(k * n)?;
    let m = k * n;
    let mut vals = Vec::with_capacity(2 * m);
    for i in 0..m {
        vals.push((i + k) % m);
    }
    for i in 0..m {
        vals.push(m + (i + k) % m);
    }
    PosetMap::new(s.clone(), s, vals)
}

/// Fiber product of posets along two maps with a common target; returns the
/// pullback with its two projections.
pub fn poset_pullback(f: &PosetMap, g: &PosetMap) -> Result<(Poset, PosetMap, PosetMap), SpaceError> {
    if f.dst() != g.dst() {
        return Err(SpaceError::BadMap("pullback legs have different targets".into()));
    }
    let (a, b) = (f.src(), g.src());
    let mut names = Vec::new();
    let mut pr1 = Vec::new();
    let mut pr2 = Vec::new();
    for x in 0..a.n() {
        for y in 0..b.n() {
            if f.apply(x) == g.apply(y) {
                names.push(format!("({},{})", a.name(x), b.name(y)));
                pr1.push(x);
                pr2.push(y);
            }
        }
    }
    let mut pairs = Vec::new();
    for i in 0..names.len() {
        for j in 0..names.len() {
            if i != j && a.leq(pr1[i], pr1[j]) && b.leq(pr2[i], pr2[j]) {
                pairs.push((i, j));
            }
        }
    }
    let p = Poset::from_relation(names, &pairs)?;
    let m1 = PosetMap::new(p.clone(), a.clone(), pr1)?;
    let m2 = PosetMap::new(p, b.clone(), pr2)?;
    Ok((m1.src().clone(), m1, m2))
}

/// An ambient poset split into a closed down-set `Z` and its open
/// complement `U`. Carries the codimension label used by the twist
/// conventions of the exceptional pullback.
#[derive(Clone, Debug)]
pub struct OpenClosedDecomposition {
    ambient: Poset,
    z_mask: Vec<bool>,
    codim: i64,
}

impl OpenClosedDecomposition {
    pub fn new(ambient: Poset, z_mask: Vec<bool>) -> Result<Self, SpaceError> {
        if z_mask.len() != ambient.n() {
            return Err(SpaceError::BadPoset("mask length mismatch".into()));
        }
        if !ambient.is_down_closed(&z_mask) {
            return Err(SpaceError::BadPoset("closed part is not down-closed".into()));
        }
        Ok(OpenClosedDecomposition { ambient, z_mask, codim: 0 })
    }

    pub fn with_codim(mut self, codim: i64) -> Self {
        self.codim = codim;
        self
    }

    /// The pseudodisk split at its origin, which behaves like a point on a
    /// surface: codimension label 1.
    pub fn pseudodisk_origin(k: usize) -> Result<Self, SpaceError> {
        let d = pseudodisk(k)?;
        let mut z = vec![false; d.n()];
        z[0] = true;
        Ok(OpenClosedDecomposition::new(d, z)?.with_codim(1))
    }

    pub fn ambient(&self) -> &Poset {
        &self.ambient
    }

    pub fn z_mask(&self) -> &[bool] {
        &self.z_mask
    }

    pub fn u_mask(&self) -> Vec<bool> {
        self.z_mask.iter().map(|&b| !b).collect()
    }

    pub fn codim(&self) -> i64 {
        self.codim
    }

    /// `(Z, i)` with `i: Z -> X` the closed inclusion.
    pub fn closed_part(&self) -> (Poset, PosetMap) {
        let (z, keep) = self.ambient.induced(&self.z_mask);
        let i = PosetMap::new(z.clone(), self.ambient.clone(), keep).expect("closed inclusion");
        (z, i)
    }

    /// `(U, j)` with `j: U -> X` the open inclusion.
    pub fn open_part(&self) -> (Poset, PosetMap) {
        let (u, keep) = self.ambient.induced(&self.u_mask());
        let j = PosetMap::new(u.clone(), self.ambient.clone(), keep).expect("open inclusion");
        (u, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pseudocircle_shape() {
        let s = pseudocircle(3).unwrap();
        assert_eq!(s.n(), 6);
        assert_eq!(s.longest_chain(), 2);
        // each open point has exactly two closed points below
        for i in 0..3 {
            let o = s.index_of(&format!("o{i}")).unwrap();
            assert_eq!(s.down_set(o).len(), 3); // itself plus two
        }
        assert!(pseudocircle(1).is_err());
    }

    #[test]
    fn pseudodisk_has_minimum() {
        let d = pseudodisk(2).unwrap();
        assert_eq!(d.minimum(), Some(0));
        assert_eq!(d.longest_chain(), 3);
        let dec = OpenClosedDecomposition::pseudodisk_origin(2).unwrap();
        assert_eq!(dec.codim(), 1);
        let (u, _) = dec.open_part();
        assert_eq!(u, pseudocircle(2).unwrap());
    }

    #[test]
    fn covering_and_deck_identities() {
        // covering_map(k, 1) = id
        assert!(covering_map(2, 1).unwrap().is_identity());
        for (k, n) in [(2usize, 2usize), (2, 3), (3, 2)] {
            let q = covering_map(k, n).unwrap();
            let g = deck_generator(k, n).unwrap();
            // g^n = id and no earlier power is
            let mut acc = g.clone();
            for _ in 1..n {
                assert!(!acc.is_identity());
                acc = g.compose(&acc);
            }
            assert!(acc.is_identity());
            // q . g = q
            assert_eq!(q.compose(&g), q);
            assert!(g.is_bijective());
        }
    }

    #[test]
    fn pullback_of_covers_splits_into_components() {
        // S_(kn) x_(S_k) S_(km) = gcd(n,m) copies of S_(k lcm(n,m))
        for (n, m) in [(2usize, 2usize), (2, 3), (2, 4)] {
            let k = 2;
            let f = covering_map(k, n).unwrap();
            let g = covering_map(k, m).unwrap();
            let (p, pr1, pr2) = poset_pullback(&f, &g).unwrap();
            let gcd = {
                let (mut a, mut b) = (n, m);
                while b != 0 {
                    (a, b) = (b, a % b);
                }
                a
            };
            let lcm = n * m / gcd;
            assert_eq!(p.n(), gcd * 2 * k * lcm);
            let mask = vec![true; p.n()];
            let (comps, _) = p.component_labels(&mask);
            assert_eq!(comps, gcd);
            // projections commute with the legs
            assert_eq!(f.compose(&pr1), g.compose(&pr2));
        }
    }

    #[test]
    fn pullback_along_identity_is_isomorphic() {
        let s = pseudocircle(2).unwrap();
        let id = PosetMap::identity(&s);
        let q = covering_map(2, 3).unwrap();
        let (p, pr1, _) = poset_pullback(&q, &id).unwrap();
        assert_eq!(p.n(), q.src().n());
        assert!(pr1.is_bijective());
    }

    #[test]
    fn products_and_components() {
        let s = pseudocircle(2).unwrap();
        let (prod, pr1, pr2) = s.product(&s);
        assert_eq!(prod.n(), 16);
        assert_eq!(pr1.apply(0), 0);
        assert_eq!(pr2.apply(1), 1);
        let two = s.disjoint_union(&s);
        let (c, _) = two.component_labels(&vec![true; two.n()]);
        assert_eq!(c, 2);
    }
}
