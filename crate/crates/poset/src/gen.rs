//! Seeded generators for property tests: random posets, random sheaves
//! with coherent restrictions, random sheaf complexes, and random maps.

use rand::Rng;

use tame_complex::gen::{random_invertible, random_matrix};
use tame_complex::{Field, Matrix};

use crate::complex::{ShComplex, ShMap};
use crate::poset::Poset;
use crate::sheaf::{nat_element, nat_space, Sheaf, SheafMap};

pub fn random_poset(rng: &mut impl Rng, max_n: usize) -> Poset {
    let n = rng.gen_range(2..=max_n.max(2));
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_range(0..3) == 0 {
                pairs.push((i, j));
            }
        }
    }
    Poset::from_relation(names, &pairs).expect("index-increasing edges are acyclic")
}

/// A random down-closed subset: a union of down-sets of random points.
pub fn random_downset(rng: &mut impl Rng, base: &Poset) -> Vec<bool> {
    let mut mask = vec![false; base.n()];
    for x in 0..base.n() {
        if rng.gen_range(0..2) == 0 {
            for (y, m) in base.down_mask(x).into_iter().enumerate() {
                mask[y] = mask[y] || m;
            }
        }
    }
    mask
}

/// A random sheaf with coherent restrictions: a direct sum of point
/// supports conjugated by random stalkwise isomorphisms, keeping every
/// stalk within `max_dim`.
pub fn random_sheaf(rng: &mut impl Rng, base: &Poset, field: Field, max_dim: usize) -> Sheaf {
    let n = base.n();
    let mut ranks = vec![0usize; n];
    for x in 0..n {
        let r = rng.gen_range(0..=2);
        ranks[x] = r;
        let worst =
            (0..n).map(|y| (0..n).filter(|&z| base.leq(y, z)).map(|z| ranks[z]).sum::<usize>()).max();
        if worst.unwrap_or(0) > max_dim {
            ranks[x] = 0;
        }
    }
    let mut plain = Sheaf::zero(base, field);
    for x in 0..n {
        if ranks[x] > 0 {
            plain = plain.direct_sum(&Sheaf::point_injective(base, field, x, ranks[x]));
        }
    }
    conjugate_sheaf(rng, &plain)
}

fn conjugate_sheaf(rng: &mut impl Rng, s: &Sheaf) -> Sheaf {
    let base = s.base();
    let field = s.field();
    let ps: Vec<Matrix> = (0..base.n()).map(|x| random_invertible(rng, field, s.dim(x))).collect();
    let inv: Vec<Matrix> = ps.iter().map(|p| p.inverse().expect("invertible")).collect();
    let dims: Vec<usize> = (0..base.n()).map(|x| s.dim(x)).collect();
    let res = base
        .strict_pairs()
        .into_iter()
        .map(|(x, y)| ((x, y), ps[y].mul(&s.res(x, y)).mul(&inv[x])))
        .collect();
    Sheaf::new(base.clone(), field, dims, res).expect("conjugated sheaf")
}

/// A uniformly random natural map between two sheaves.
pub fn random_sheaf_map(rng: &mut impl Rng, a: &Sheaf, b: &Sheaf) -> SheafMap {
    let space = nat_space(a, b);
    let coeffs = random_matrix(rng, a.field(), space.cols(), 1);
    nat_element(a, b, &space.mul(&coeffs))
}

/// A random bounded complex of sheaves: random sheaves per degree and
/// differentials drawn from the natural maps, from the top degree down,
/// each drawn from the kernel of composition with the one above.
pub fn random_shcomplex(
    rng: &mut impl Rng,
    base: &Poset,
    field: Field,
    lo: i64,
    max_len: usize,
    max_dim: usize,
) -> ShComplex {
    let len = rng.gen_range(1..=max_len.max(1));
    let sheaves: Vec<Sheaf> = (0..len).map(|_| random_sheaf(rng, base, field, max_dim)).collect();
    let mut diffs: Vec<SheafMap> = Vec::new();
    // build from the top down so each differential lands in the kernel of
    // the one above
    let mut above: Option<SheafMap> = None;
    for i in (0..len.saturating_sub(1)).rev() {
        let (a, b) = (&sheaves[i], &sheaves[i + 1]);
        let space = nat_space(a, b);
        let constrained = match &above {
            None => space.clone(),
            Some(d1) => {
                // rows: stalkwise composition with d1 must vanish
                let mut sys = Matrix::zero(field, 0, space.cols());
                let mut row_offset = 0;
                for x in 0..base.n() {
                    let block_len = b.dim(x) * a.dim(x);
                    if block_len == 0 {
                        continue;
                    }
                    // entries of d1.at(x) * phi.at(x) are linear in the
                    // nat coordinates of phi
                    let mut rows = Matrix::zero(field, d1.dst().dim(x) * a.dim(x), space.cols());
                    for col in 0..space.cols() {
                        let phi_x = unflatten(field, &space, col, row_offset, b.dim(x), a.dim(x));
                        let prod = d1.at(x).mul(&phi_x);
                        for r in 0..prod.rows() {
                            for c in 0..prod.cols() {
                                rows.set(r * a.dim(x) + c, col, prod.get(r, c));
                            }
                        }
                    }
                    sys = sys.vstack(&rows);
                    row_offset += block_len;
                }
                let ker = sys.kernel();
                space.mul(&ker)
            }
        };
        let coeffs = random_matrix(rng, field, constrained.cols(), 1);
        let d = nat_element(a, b, &constrained.mul(&coeffs));
        above = Some(d.clone());
        diffs.push(d);
    }
    diffs.reverse();
    ShComplex::from_parts(base.clone(), field, lo, sheaves, diffs, 0).expect("random complex")
}

fn unflatten(
    field: Field,
    space: &Matrix,
    col: usize,
    offset: usize,
    rows: usize,
    cols: usize,
) -> Matrix {
    let mut m = Matrix::zero(field, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, space.get(offset + r * cols + c, col));
        }
    }
    m
}

/// A uniformly random chain map of sheaf complexes: solves the commutation
/// constraints inside the product of the degreewise natural spaces.
pub fn random_shmap(rng: &mut impl Rng, a: &ShComplex, b: &ShComplex) -> ShMap {
    let field = a.field();
    let base = a.base();
    let lo = a.lo().min(b.lo());
    let hi = a.hi().max(b.hi());
    let degs: Vec<i64> = (lo..=hi).collect();
    let spaces: Vec<Matrix> =
        degs.iter().map(|&k| nat_space(&a.sheaf_at(k), &b.sheaf_at(k))).collect();
    let offsets: Vec<usize> = spaces
        .iter()
        .scan(0, |acc, s| {
            let at = *acc;
            *acc += s.cols();
            Some(at)
        })
        .collect();
    let total: usize = spaces.iter().map(|s| s.cols()).sum();
    // commutation rows: for each degree and stalk, d_b phi^k - phi^{k+1} d_a = 0
    let mut sys = Matrix::zero(field, 0, total);
    for (i, &k) in degs.iter().enumerate() {
        if k + 1 > hi {
            continue;
        }
        let da = a.d(k);
        let db = b.d(k);
        for x in 0..base.n() {
            let rows_n = b.dim(k + 1, x) * a.dim(k, x);
            if rows_n == 0 {
                continue;
            }
            let mut rows = Matrix::zero(field, rows_n, total);
            // d_b . phi^k part
            let amb_rows = stalk_offset(&a.sheaf_at(k), &b.sheaf_at(k), x);
            for col in 0..spaces[i].cols() {
                let phi_x = unflatten(field, &spaces[i], col, amb_rows, b.dim(k, x), a.dim(k, x));
                let prod = db.at(x).mul(&phi_x);
                for r in 0..prod.rows() {
                    for c in 0..prod.cols() {
                        rows.set(r * a.dim(k, x) + c, offsets[i] + col, prod.get(r, c));
                    }
                }
            }
            // - phi^{k+1} . d_a part
            let amb2 = stalk_offset(&a.sheaf_at(k + 1), &b.sheaf_at(k + 1), x);
            for col in 0..spaces[i + 1].cols() {
                let phi_x =
                    unflatten(field, &spaces[i + 1], col, amb2, b.dim(k + 1, x), a.dim(k + 1, x));
                let prod = phi_x.mul(&da.at(x));
                for r in 0..prod.rows() {
                    for c in 0..prod.cols() {
                        let prev = rows.get(r * a.dim(k, x) + c, offsets[i + 1] + col);
                        rows.set(r * a.dim(k, x) + c, offsets[i + 1] + col, field.sub(prev, prod.get(r, c)));
                    }
                }
            }
            sys = sys.vstack(&rows);
        }
    }
    let ker = sys.kernel();
    let coeffs = random_matrix(rng, field, ker.cols(), 1);
    let sol = ker.mul(&coeffs);
    let mut mats = Vec::new();
    for (i, &k) in degs.iter().enumerate() {
        let mut v = Matrix::zero(field, spaces[i].cols(), 1);
        for r in 0..spaces[i].cols() {
            v.set(r, 0, sol.get(offsets[i] + r, 0));
        }
        let flat = spaces[i].mul(&v);
        mats.push((k, nat_element(&a.sheaf_at(k), &b.sheaf_at(k), &flat)));
    }
    ShMap::new(a.clone(), b.clone(), mats).expect("random chain map")
}

fn stalk_offset(a: &Sheaf, b: &Sheaf, x: usize) -> usize {
    (0..x).map(|y| b.dim(y) * a.dim(y)).sum()
}
