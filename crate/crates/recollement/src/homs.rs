//! Mapping complexes between complexes of sheaves, in reduced coordinates.
//!
//! The degree-`n` part collects the families `{phi_i : F^i -> G^(i+n)}`
//! of sheaf maps; each family is a point of the kernel of the naturality
//! constraints on its stalk matrices, and the whole mapping complex is
//! carried in those kernel coordinates.  The differential is
//! `d o phi - (-1)^n phi o d`, matching the chain-level mapping complex,
//! so composing with a fixed map of complexes on either side is a map of
//! complexes here.

use std::collections::BTreeMap;

use tame_complex::{ChainMap, Complex, Matrix};
use tame_poset::{resolve, ShComplex, ShMap};

/// One stalk block of the flattened family at a hom degree: the component
/// `F^i(x) -> G^(i+n)(x)` occupies `rows * cols` coordinates starting at
/// `offset`, stored row-major.
#[derive(Clone)]
struct Block {
    i: i64,
    x: usize,
    offset: usize,
    rows: usize,
    cols: usize,
}

fn layout(src: &ShComplex, dst: &ShComplex, n: i64) -> (Vec<Block>, usize) {
    let mut blocks = Vec::new();
    let mut off = 0;
    for i in src.lo()..=src.hi() {
        for x in 0..src.base().n() {
            let rows = dst.dim(i + n, x);
            let cols = src.dim(i, x);
            blocks.push(Block { i, x, offset: off, rows, cols });
            off += rows * cols;
        }
    }
    (blocks, off)
}

fn block_at<'a>(blocks: &'a [Block], np: usize, i: i64, x: usize) -> Option<&'a Block> {
    let lo_i = blocks.first()?.i;
    let idx = usize::try_from(i - lo_i).ok()? * np + x;
    blocks.get(idx)
}

/// Add `coef * (flattening of m -> flattening of L m R)` into `out` at
/// the given block position, both flattenings row-major.
pub(crate) fn add_sandwich(out: &mut Matrix, row0: usize, col0: usize, l: &Matrix, r: &Matrix, coef: i64) {
    let field = out.field();
    let c = field.norm(coef as i128);
    if c == 0 {
        return;
    }
    let cols_out = r.cols();
    let cols_in = r.rows();
    for a in 0..l.rows() {
        for b in 0..l.cols() {
            let lv = l.get(a, b);
            if lv == 0 {
                continue;
            }
            for s in 0..cols_in {
                for t in 0..cols_out {
                    let rv = r.get(s, t);
                    if rv == 0 {
                        continue;
                    }
                    let row = row0 + a * cols_out + t;
                    let col = col0 + b * cols_in + s;
                    let v = field.add(out.get(row, col), field.mul(c, field.mul(lv, rv)));
                    out.set(row, col, v);
                }
            }
        }
    }
}

/// The mapping complex `Hom(F, G)` of two complexes of sheaves on one
/// base, presented by kernel coordinates for the naturality constraints
/// degree by degree.
pub struct ShHomSpace {
    src: ShComplex,
    dst: ShComplex,
    bases: BTreeMap<i64, Matrix>,
    blocks: BTreeMap<i64, Vec<Block>>,
    complex: Complex,
}

impl ShHomSpace {
    pub fn new(src: &ShComplex, dst: &ShComplex) -> Self {
        assert_eq!(src.base(), dst.base(), "mapping complex needs one base");
        assert_eq!(src.field(), dst.field(), "mapping complex needs one field");
        let field = src.field();
        let np = src.base().n();
        let n_lo = dst.lo() - src.hi();
        let n_hi = dst.hi() - src.lo();

        let mut bases = BTreeMap::new();
        let mut blocks_by = BTreeMap::new();
        let mut dims = Vec::new();
        for n in n_lo..=n_hi {
            let (blocks, total) = layout(src, dst, n);
            // naturality on cover pairs cuts out the sheaf-map families
            let pairs: Vec<(usize, usize)> = src
                .base()
                .strict_pairs()
                .into_iter()
                .filter(|&(x, y)| src.base().covers(x).contains(&y))
                .collect();
            let mut rows = 0;
            for i in src.lo()..=src.hi() {
                for &(x, y) in &pairs {
                    rows += dst.dim(i + n, y) * src.dim(i, x);
                }
            }
            let mut cons = Matrix::zero(field, rows, total);
            let mut r0 = 0;
            for i in src.lo()..=src.hi() {
                let gs = dst.sheaf_at(i + n);
                let fs = src.sheaf_at(i);
                for &(x, y) in &pairs {
                    let h = dst.dim(i + n, y) * src.dim(i, x);
                    if h == 0 {
                        continue;
                    }
                    let bx = block_at(&blocks, np, i, x).unwrap();
                    let by = block_at(&blocks, np, i, y).unwrap();
                    // G.res(x,y) . m_x  -  m_y . F.res(x,y)  =  0
                    add_sandwich(
                        &mut cons,
                        r0,
                        bx.offset,
                        &gs.res(x, y),
                        &Matrix::identity(field, fs.dim(x)),
                        1,
                    );
                    add_sandwich(
                        &mut cons,
                        r0,
                        by.offset,
                        &Matrix::identity(field, gs.dim(y)),
                        &fs.res(x, y),
                        -1,
                    );
                    r0 += h;
                }
            }
            let basis = cons.kernel();
            dims.push(basis.cols());
            bases.insert(n, basis);
            blocks_by.insert(n, blocks);
        }

        let mut diffs = Vec::new();
        for n in n_lo..n_hi {
            let (_, total_n) = layout(src, dst, n);
            let (_, total_n1) = layout(src, dst, n + 1);
            let np_blocks = &blocks_by[&n];
            let np1_blocks = &blocks_by[&(n + 1)];
            let mut amb = Matrix::zero(field, total_n1, total_n);
            let sign = if n.rem_euclid(2) == 0 { -1 } else { 1 };
            for b in np1_blocks {
                if b.rows * b.cols == 0 {
                    continue;
                }
                // d_G o phi_i from the (i, x) block
                if let Some(sb) = block_at(np_blocks, np, b.i, b.x) {
                    if sb.rows * sb.cols > 0 {
                        add_sandwich(
                            &mut amb,
                            b.offset,
                            sb.offset,
                            &dst.d(b.i + n).at(b.x).clone(),
                            &Matrix::identity(field, sb.cols),
                            1,
                        );
                    }
                }
                // -(-1)^n phi_(i+1) o d_F from the (i+1, x) block
                if let Some(sb) = block_at(np_blocks, np, b.i + 1, b.x) {
                    if sb.rows * sb.cols > 0 {
                        add_sandwich(
                            &mut amb,
                            b.offset,
                            sb.offset,
                            &Matrix::identity(field, b.rows),
                            &src.d(b.i).at(b.x).clone(),
                            sign,
                        );
                    }
                }
            }
            let red = bases[&(n + 1)]
                .solve(&amb.mul(&bases[&n]))
                .expect("hom differential preserves naturality");
            diffs.push(red);
        }

        let complex = Complex::from_parts(field, n_lo, dims, diffs, dst.twist() - src.twist())
            .expect("mapping complex");
        ShHomSpace { src: src.clone(), dst: dst.clone(), bases, blocks: blocks_by, complex }
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn src(&self) -> &ShComplex {
        &self.src
    }

    pub fn dst(&self) -> &ShComplex {
        &self.dst
    }

    fn ambient_dim(&self, n: i64) -> usize {
        self.blocks.get(&n).map_or(0, |b| b.last().map_or(0, |x| x.offset + x.rows * x.cols))
    }

    /// Reduced coordinates of an ambient flattened family.
    pub fn coords(&self, n: i64, flat: &Matrix) -> Matrix {
        match self.bases.get(&n) {
            Some(b) => b.solve(flat).expect("family satisfies naturality"),
            None => Matrix::zero(self.complex.field(), 0, flat.cols()),
        }
    }

    /// Ambient flattened family of a reduced coordinate column.
    pub fn ambient(&self, n: i64, col: &Matrix) -> Matrix {
        match self.bases.get(&n) {
            Some(b) => b.mul(col),
            None => Matrix::zero(self.complex.field(), 0, col.cols()),
        }
    }

    /// The component matrices of an ambient flattened family.
    pub fn unflatten(&self, n: i64, flat: &Matrix, col: usize) -> BTreeMap<(i64, usize), Matrix> {
        let mut out = BTreeMap::new();
        if let Some(blocks) = self.blocks.get(&n) {
            for b in blocks {
                let mut m = Matrix::zero(self.complex.field(), b.rows, b.cols);
                for r in 0..b.rows {
                    for c in 0..b.cols {
                        m.set(r, c, flat.get(b.offset + r * b.cols + c, col));
                    }
                }
                out.insert((b.i, b.x), m);
            }
        }
        out
    }

    /// Flatten explicit component matrices into an ambient column.
    pub fn flatten(&self, n: i64, supply: &dyn Fn(i64, usize) -> Matrix) -> Matrix {
        let total = self.ambient_dim(n);
        let mut out = Matrix::zero(self.complex.field(), total, 1);
        if let Some(blocks) = self.blocks.get(&n) {
            for b in blocks {
                let m = supply(b.i, b.x);
                assert_eq!((m.rows(), m.cols()), (b.rows, b.cols), "component shape mismatch");
                for r in 0..b.rows {
                    for c in 0..b.cols {
                        out.set(b.offset + r * b.cols + c, 0, m.get(r, c));
                    }
                }
            }
        }
        out
    }

    /// Composition with `psi : dst -> dst'` on the target side, as a map
    /// of mapping complexes into `target = Hom(src, dst')`.
    pub fn postcompose(&self, target: &ShHomSpace, psi: &ShMap) -> ChainMap {
        assert_eq!(psi.src(), &self.dst, "postcomposition source mismatch");
        assert_eq!(psi.dst(), &target.dst, "postcomposition target mismatch");
        self.transport(target, &|n, fam| {
            let mut out: BTreeMap<(i64, usize), Matrix> = BTreeMap::new();
            for (&(i, x), m) in fam {
                out.insert((i, x), psi.at(i + n).at(x).mul(m));
            }
            out
        })
    }

    /// Composition with `psi : src' -> src` on the source side, as a map
    /// of mapping complexes into `target = Hom(src', dst)`.
    pub fn precompose(&self, target: &ShHomSpace, psi: &ShMap) -> ChainMap {
        assert_eq!(psi.dst(), &self.src, "precomposition source mismatch");
        assert_eq!(psi.src(), &target.src, "precomposition target mismatch");
        self.transport(target, &|_n, fam| {
            let mut out: BTreeMap<(i64, usize), Matrix> = BTreeMap::new();
            for (&(i, x), m) in fam {
                out.insert((i, x), m.mul(psi.at(i).at(x)));
            }
            out
        })
    }

    /// Push every basis family through a componentwise rule and express
    /// the results in the target's coordinates.
    pub fn transport(
        &self,
        target: &ShHomSpace,
        rule: &dyn Fn(i64, &BTreeMap<(i64, usize), Matrix>) -> BTreeMap<(i64, usize), Matrix>,
    ) -> ChainMap {
        let field = self.complex.field();
        let mut mats = Vec::new();
        for n in self.complex.lo()..=self.complex.hi() {
            let d = self.complex.dim(n);
            let mut cols = Matrix::zero(field, target.ambient_dim(n), d);
            for c in 0..d {
                let mut e = Matrix::zero(field, d, 1);
                e.set(c, 0, 1);
                let flat = self.ambient(n, &e);
                let fam = self.unflatten(n, &flat, 0);
                let out = rule(n, &fam);
                let col = target.flatten(n, &|i, x| {
                    out.get(&(i, x)).cloned().unwrap_or_else(|| {
                        Matrix::zero(field, target.dst.dim(i + n, x), target.src.dim(i, x))
                    })
                });
                for r in 0..col.rows() {
                    cols.set(r, c, col.get(r, 0));
                }
            }
            mats.push((n, target.coords(n, &cols)));
        }
        ChainMap::new(self.complex.clone(), target.complex.clone(), mats)
            .expect("componentwise rule commutes with the mapping differential")
    }
}

/// The mapping complex into an injective replacement of the target, which
/// computes maps in the homotopy category degreewise.
pub fn derived_sh_hom(src: &ShComplex, dst: &ShComplex) -> ShHomSpace {
    let res = resolve(dst);
    ShHomSpace::new(src, res.complex())
}

/// `[f | g] : A (+) B -> C` for two maps with a common target, in the
/// summand layout of `direct_sum`.
pub fn sum_map(sum: &Complex, f: &ChainMap, g: &ChainMap) -> ChainMap {
    assert_eq!(f.dst(), g.dst(), "sum map needs a common target");
    let lo = sum.lo().min(f.dst().lo());
    let hi = sum.hi().max(f.dst().hi());
    let mats = (lo..=hi).map(|k| (k, f.mat(k).hstack(&g.mat(k)))).collect();
    ChainMap::new(sum.clone(), f.dst().clone(), mats).expect("sum map")
}

/// `(f, g) : A -> B (+) C` for two maps with a common source, in the
/// summand layout of `direct_sum`.
pub fn pair_map(sum: &Complex, f: &ChainMap, g: &ChainMap) -> ChainMap {
    assert_eq!(f.src(), g.src(), "pair map needs a common source");
    let lo = sum.lo().min(f.src().lo());
    let hi = sum.hi().max(f.src().hi());
    let mats = (lo..=hi).map(|k| (k, f.mat(k).vstack(&g.mat(k)))).collect();
    ChainMap::new(f.src().clone(), sum.clone(), mats).expect("pair map")
}

/// Projection from a two-summand direct sum onto one summand.
pub fn proj_summand(sum: &Complex, first: &Complex, second: &Complex, which: usize) -> ChainMap {
    let field = sum.field();
    let mats = (sum.lo()..=sum.hi())
        .map(|k| {
            let (a, b) = (first.dim(k), second.dim(k));
            let mut m = if which == 0 {
                Matrix::zero(field, a, a + b)
            } else {
                Matrix::zero(field, b, a + b)
            };
            let (n, off) = if which == 0 { (a, 0) } else { (b, a) };
            for r in 0..n {
                m.set(r, off + r, 1);
            }
            (k, m)
        })
        .collect();
    let dst = if which == 0 { first.clone() } else { second.clone() };
    ChainMap::new(sum.clone(), dst, mats).expect("summand projection")
}

/// The fiber of a map together with its projection to the source.
pub fn fiber_of(f: &ChainMap) -> (Complex, ChainMap) {
    (f.fiber(), f.fiber_projection())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use tame_complex::Field;
    use tame_poset::Poset;

    #[test]
    fn on_a_point_the_mapping_complex_matches_the_chain_level_one() {
        let field = Field::new(5).unwrap();
        let p = Poset::point();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..6 {
            let f = tame_poset::gen::random_shcomplex(&mut rng, &p, field, 0, 3, 2);
            let g = tame_poset::gen::random_shcomplex(&mut rng, &p, field, 0, 3, 2);
            let hs = ShHomSpace::new(&f, &g);
            let hc = tame_complex::hom_complex(&f.stalk(0), &g.stalk(0));
            assert_eq!(hs.complex().h_dims(), hc.h_dims());
        }
    }
}
