//! Injective resolutions and everything computed from them.
//!
//! The resolution of a sheaf iterates `F -> C0(F) -> C0(coker) -> ...`
//! where `C0(F) = prod_x I_(x, F(x))` is the product of point-injectives
//! over all stalks and the augmentation at `y` stacks the restrictions out
//! of `y`. It is stalkwise exact, functorial, of length at most the longest
//! chain, and every component is a named finite product of point-injectives
//! — that bookkeeping (the `shapes`) is what makes sections over arbitrary
//! opens, pushforwards, and comparison maps cheap, with no kernel
//! computations on the large ambient products.

use std::collections::BTreeMap;

use tame_complex::{ChainMap, Complex, Field, Matrix};

use crate::complex::{ShComplex, ShMap};
use crate::poset::{Poset, PosetMap};
use crate::sheaf::{Sheaf, SheafMap};

/// One summand of a structured injective degree: a constant block of rank
/// `dim` supported on a down-closed set with identity internal restrictions.
/// Freshly built resolutions only use down-sets of single points; pullbacks
/// produce general down-sets.
#[derive(Clone, PartialEq, Debug)]
pub struct StructFactor {
    pub down: Vec<bool>,
    pub dim: usize,
}

struct Stage {
    /// kernel of this stage: the sheaf being resolved
    s: Sheaf,
    /// its envelope `C0(s)`
    c: Sheaf,
    /// factors of the envelope: `(point, rank)`
    factors: Vec<(usize, usize)>,
    /// `s -> c`
    aug: SheafMap,
    /// `c -> coker(aug)`
    proj: SheafMap,
    /// the cokernel, resolved by the next stage
    next: Sheaf,
}

struct Column {
    stages: Vec<Stage>,
}

/// A resolution with its stage bookkeeping.
pub struct Resolved {
    src: ShComplex,
    complex: ShComplex,
    aug: ShMap,
    shapes: Vec<Vec<StructFactor>>,
    columns: Vec<Column>,
}

fn c0(s: &Sheaf) -> (Sheaf, Vec<(usize, usize)>, SheafMap) {
    let base = s.base().clone();
    let field = s.field();
    let factors: Vec<(usize, usize)> =
        (0..base.n()).filter(|&x| s.dim(x) > 0).map(|x| (x, s.dim(x))).collect();
    let stalk_factors = |y: usize| -> Vec<usize> {
        factors.iter().enumerate().filter(|&(_, &(x, _))| base.leq(y, x)).map(|(i, _)| i).collect()
    };
    let dims: Vec<usize> =
        (0..base.n()).map(|y| stalk_factors(y).iter().map(|&i| factors[i].1).sum()).collect();
    let mut res = BTreeMap::new();
    for (y, y2) in base.strict_pairs() {
        let (from, to) = (stalk_factors(y), stalk_factors(y2));
        let mut m = Matrix::zero(field, dims[y2], dims[y]);
        let mut row0 = 0;
        for &i in &to {
            let col0: usize = from.iter().take_while(|&&j| j != i).map(|&j| factors[j].1).sum();
            for r in 0..factors[i].1 {
                m.set(row0 + r, col0 + r, 1);
            }
            row0 += factors[i].1;
        }
        res.insert((y, y2), m);
    }
    let c = Sheaf::new(base.clone(), field, dims, res).expect("envelope");
    let aug_mats: Vec<Matrix> = (0..base.n())
        .map(|y| {
            let mut m = Matrix::zero(field, c.dim(y), s.dim(y));
            let mut row0 = 0;
            for &i in &stalk_factors(y) {
                let r = s.res(y, factors[i].0);
                for rr in 0..r.rows() {
                    for cc in 0..r.cols() {
                        m.set(row0 + rr, cc, r.get(rr, cc));
                    }
                }
                row0 += factors[i].1;
            }
            m
        })
        .collect();
    let aug = SheafMap::new(s.clone(), c.clone(), aug_mats).expect("augmentation");
    (c, factors, aug)
}

fn stages_of(s: &Sheaf) -> Vec<Stage> {
    let mut stages = Vec::new();
    let bound = s.base().longest_chain() + 1;
    let mut current = s.clone();
    while !current.is_zero() {
        assert!(stages.len() <= bound, "resolution failed to terminate");
        let (c, factors, aug) = c0(&current);
        let (next, proj) = aug.cokernel();
        stages.push(Stage { s: current, c, factors, aug, proj, next: next.clone() });
        current = next;
    }
    stages
}

/// `C0` applied to a map between stage kernels: the factor-to-factor map.
fn c0_map(from: &Stage, to: &Stage, phi: &SheafMap) -> SheafMap {
    let base = from.s.base();
    let field = from.s.field();
    let mats: Vec<Matrix> = (0..base.n())
        .map(|y| {
            let mut m = Matrix::zero(field, to.c.dim(y), from.c.dim(y));
            let mut row0 = 0;
            for &(x2, d2) in to.factors.iter().filter(|&&(x, _)| base.leq(y, x)) {
                let mut col0 = 0;
                for &(x1, d1) in from.factors.iter().filter(|&&(x, _)| base.leq(y, x)) {
                    if x1 == x2 {
                        let blk = phi.at(x1);
                        for r in 0..d2 {
                            for c in 0..d1 {
                                m.set(row0 + r, col0 + c, blk.get(r, c));
                            }
                        }
                    }
                    col0 += d1;
                }
                row0 += d2;
            }
            m
        })
        .collect();
    SheafMap::new(from.c.clone(), to.c.clone(), mats).expect("functorial envelope map")
}

/// Transport a map of stage kernels through one stage: the induced map of
/// cokernels.
fn descend(from: &Stage, to: &Stage, phi: &SheafMap) -> SheafMap {
    let k = c0_map(from, to, phi);
    let base = from.s.base();
    let mats: Vec<Matrix> = (0..base.n())
        .map(|y| {
            let b = to.proj.at(y).mul(k.at(y));
            from.proj.at(y).solve_left(&b).expect("cokernel map descends")
        })
        .collect();
    SheafMap::new(from.next.clone(), to.next.clone(), mats).expect("descended map")
}

pub fn resolve(f: &ShComplex) -> Resolved {
    let base = f.base().clone();
    let field = f.field();
    let lo = f.lo();
    let columns: Vec<Column> =
        (lo..=f.hi()).map(|p| Column { stages: stages_of(&f.sheaf_at(p)) }).collect();
    let height = columns.iter().map(|c| c.stages.len()).max().unwrap_or(0);
    if height == 0 {
        let complex = ShComplex::zero(&base, field).twisted(f.twist());
        let aug = ShMap::zero_map(f, &complex);
        return Resolved { src: f.clone(), complex, aug, shapes: Vec::new(), columns };
    }
    let hi = f.hi() + height as i64 - 1;

    // horizontal stage maps between consecutive columns, per stage depth
    let mut horiz: Vec<Vec<SheafMap>> = Vec::new();
    for p in lo..f.hi() {
        let (a, b) = (&columns[(p - lo) as usize], &columns[(p + 1 - lo) as usize]);
        let mut maps = Vec::new();
        let mut phi = f.d(p);
        for q in 0..a.stages.len().min(b.stages.len()) {
            maps.push(c0_map(&a.stages[q], &b.stages[q], &phi));
            if q + 1 < a.stages.len().min(b.stages.len()) {
                phi = descend(&a.stages[q], &b.stages[q], &phi);
            }
        }
        horiz.push(maps);
    }

    let block = |k: i64| -> Vec<(i64, usize)> {
        // (column degree p, stage q = k - p) appearing in total degree k
        (lo..=f.hi())
            .filter(|&p| {
                let q = k - p;
                q >= 0 && (q as usize) < columns[(p - lo) as usize].stages.len()
            })
            .map(|p| (p, (k - p) as usize))
            .collect()
    };
    let sheaf_of = |k: i64| -> Sheaf {
        let mut acc = Sheaf::zero(&base, field);
        for (p, q) in block(k) {
            acc = acc.direct_sum(&columns[(p - lo) as usize].stages[q].c);
        }
        acc
    };
    let sheaves: Vec<Sheaf> = (lo..=hi).map(sheaf_of).collect();
    let shapes: Vec<Vec<StructFactor>> = (lo..=hi)
        .map(|k| {
            block(k)
                .into_iter()
                .flat_map(|(p, q)| {
                    columns[(p - lo) as usize].stages[q]
                        .factors
                        .iter()
                        .map(|&(x, d)| StructFactor { down: base.down_mask(x), dim: d })
                        .collect::<Vec<_>>()
                })
                .collect()
        })
        .collect();

    let mut diffs = Vec::new();
    for k in lo..hi {
        let (src_blocks, dst_blocks) = (block(k), block(k + 1));
        let (src_s, dst_s) = (&sheaves[(k - lo) as usize], &sheaves[(k + 1 - lo) as usize]);
        let mats: Vec<Matrix> = (0..base.n())
            .map(|y| {
                let col_of = |blocks: &[(i64, usize)], p: i64| -> Option<usize> {
                    let mut off = 0;
                    for &(pp, qq) in blocks {
                        let w = columns[(pp - lo) as usize].stages[qq].c.dim(y);
                        if pp == p {
                            return Some(off);
                        }
                        off += w;
                    }
                    None
                };
                let mut m = Matrix::zero(field, dst_s.dim(y), src_s.dim(y));
                let mut col0 = 0;
                for &(p, q) in &src_blocks {
                    let stage = &columns[(p - lo) as usize].stages[q];
                    // horizontal: C^q(d) to column p+1 at the same depth
                    if dst_blocks.contains(&(p + 1, q)) {
                        let h = &horiz[(p - lo) as usize][q];
                        put(&mut m, col_of(&dst_blocks, p + 1).unwrap(), col0, h.at(y));
                    }
                    // vertical with sign (-1)^p: aug of the next stage after proj
                    if dst_blocks.contains(&(p, q + 1)) {
                        let nxt = &columns[(p - lo) as usize].stages[q + 1];
                        let v = nxt.aug.at(y).mul(stage.proj.at(y));
                        let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
                        put(&mut m, col_of(&dst_blocks, p).unwrap(), col0, &v.scale(sign));
                    }
                    col0 += stage.c.dim(y);
                }
                m
            })
            .collect();
        diffs.push(SheafMap::new(src_s.clone(), dst_s.clone(), mats).expect("total differential"));
    }
    let complex =
        ShComplex::from_parts(base.clone(), field, lo, sheaves, diffs, f.twist()).expect("resolution");

    let aug_mats: Vec<(i64, SheafMap)> = (lo..=f.hi())
        .map(|p| {
            let ms: Vec<Matrix> = (0..base.n())
                .map(|y| {
                    let target = complex.sheaf_at(p);
                    let mut m = Matrix::zero(field, target.dim(y), f.dim(p, y));
                    // the (p, 0) block receives the augmentation
                    let mut row0 = 0;
                    for (pp, qq) in block(p) {
                        let stage = &columns[(pp - lo) as usize].stages[qq];
                        if pp == p && qq == 0 {
                            put(&mut m, row0, 0, stage.aug.at(y));
                        }
                        row0 += stage.c.dim(y);
                    }
                    m
                })
                .collect();
            (p, SheafMap::new(f.sheaf_at(p), complex.sheaf_at(p), ms).expect("augmentation degree"))
        })
        .collect();
    let aug = ShMap::new(f.clone(), complex.clone(), aug_mats).expect("augmentation");
    Resolved { src: f.clone(), complex, aug, shapes, columns }
}

fn put(m: &mut Matrix, row0: usize, col0: usize, blk: &Matrix) {
    for r in 0..blk.rows() {
        for c in 0..blk.cols() {
            m.set(row0 + r, col0 + c, blk.get(r, c));
        }
    }
}

impl Resolved {
    pub fn src(&self) -> &ShComplex {
        &self.src
    }

    pub fn complex(&self) -> &ShComplex {
        &self.complex
    }

    pub fn aug(&self) -> &ShMap {
        &self.aug
    }

    pub fn shapes(&self) -> &[Vec<StructFactor>] {
        &self.shapes
    }

    /// Shape list aligned to absolute degree.
    pub fn shape_at(&self, k: i64) -> &[StructFactor] {
        static EMPTY: &[StructFactor] = &[];
        let lo = self.src.lo();
        if k < lo || k - lo >= self.shapes.len() as i64 {
            EMPTY
        } else {
            &self.shapes[(k - lo) as usize]
        }
    }

    pub fn sections(&self, v_mask: &[bool]) -> SectionModel {
        SectionModel::new(&self.complex, self.src.lo(), &self.shapes, v_mask)
    }
}

/// Sections of any structured complex (a resolution, or a pullback of one)
/// over an up-closed set.
pub fn sections_of(
    j: &ShComplex,
    shapes_lo: i64,
    shapes: &[Vec<StructFactor>],
    v_mask: &[bool],
) -> SectionModel {
    SectionModel::new(j, shapes_lo, shapes, v_mask)
}

/// Shapes of a pulled-back structured complex: supports pull back to
/// preimages (still down-closed), ranks are unchanged.
pub fn pulled_shapes(u: &PosetMap, shapes: &[Vec<StructFactor>]) -> Vec<Vec<StructFactor>> {
    shapes
        .iter()
        .map(|degree| {
            degree
                .iter()
                .map(|f| StructFactor {
                    down: (0..u.src().n()).map(|y| f.down[u.apply(y)]).collect(),
                    dim: f.dim,
                })
                .collect()
        })
        .collect()
}

/// Pull sections back along a map of bases: a model over `V` of a
/// structured `J` maps to a model over any up-closed subset of `g^{-1}(V)`
/// of `pullback(g, J)` by reading values through `g`.
pub fn sections_pull(
    g: &PosetMap,
    src_model: &SectionModel,
    dst_model: &SectionModel,
) -> ChainMap {
    for &y in &dst_model.v {
        assert!(src_model.v.contains(&g.apply(y)), "pulled set must land in the source open");
    }
    let field = src_model.complex.field();
    let lo = src_model.lo.min(dst_model.lo);
    let hi = (src_model.lo + src_model.coords.len() as i64)
        .max(dst_model.lo + dst_model.coords.len() as i64);
    let mut mats = Vec::new();
    for k in lo..hi {
        let mut member_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (ci, c) in src_model.coords_at(k).iter().enumerate() {
            for &m in &c.members {
                member_of.insert(m, ci);
            }
        }
        let mut m = Matrix::zero(field, dst_model.dim(k), src_model.dim(k));
        for (ti, t) in dst_model.coords_at(k).iter().enumerate() {
            let (y, slot) = t.members[0];
            if let Some(&ci) = member_of.get(&(g.apply(y), slot)) {
                m.set(ti, ci, 1);
            }
        }
        mats.push((k, m));
    }
    ChainMap::new(src_model.complex.clone(), dst_model.complex.clone(), mats).expect("pulled sections")
}

/// Sections of a structured complex over an open set, with the bookkeeping
/// identifying every coordinate of the section complex: a coordinate is a
/// connected component of (open set) ∩ (factor support), together with a
/// slot in the factor's rank.
pub struct SectionModel {
    complex: Complex,
    lo: i64,
    v: Vec<usize>,
    /// per degree (from `lo`), per coordinate: the members `(point, stalk
    /// slot)` of the component, the first being the representative
    coords: Vec<Vec<CoordData>>,
}

#[derive(Clone, Debug)]
struct CoordData {
    members: Vec<(usize, usize)>,
}

impl SectionModel {
    fn new(j: &ShComplex, shapes_lo: i64, shapes: &[Vec<StructFactor>], v_mask: &[bool]) -> Self {
        let base = j.base();
        let field = j.field();
        let v: Vec<usize> = (0..base.n()).filter(|&x| v_mask[x]).collect();
        assert!(base.is_up_closed(v_mask), "sections need an up-closed set");
        let mut coords: Vec<Vec<CoordData>> = Vec::new();
        for (di, factors) in shapes.iter().enumerate() {
            let k = shapes_lo + di as i64;
            let mut degree_coords = Vec::new();
            // stalk slot offsets at each point of V for this degree
            let mut slot_at: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); factors.len()];
            for &x in &v {
                let mut off = 0;
                for (fi, f) in factors.iter().enumerate() {
                    if f.down[x] {
                        slot_at[fi].insert(x, off);
                        off += f.dim;
                    }
                }
                debug_assert_eq!(off, j.dim(k, x));
            }
            for (fi, f) in factors.iter().enumerate() {
                let support: Vec<usize> = v.iter().copied().filter(|&x| f.down[x]).collect();
                // connected components of the support inside V
                let mut comp = BTreeMap::new();
                for &x in &support {
                    comp.insert(x, x);
                }
                let find = |comp: &BTreeMap<usize, usize>, mut x: usize| -> usize {
                    while comp[&x] != x {
                        x = comp[&x];
                    }
                    x
                };
                for &x in &support {
                    for &y in &support {
                        if x < y && (base.leq(x, y) || base.leq(y, x)) {
                            let (rx, ry) = (find(&comp, x), find(&comp, y));
                            if rx != ry {
                                let m = rx.min(ry);
                                comp.insert(rx.max(ry), m);
                            }
                        }
                    }
                }
                let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for &x in &support {
                    groups.entry(find(&comp, x)).or_default().push(x);
                }
                for (_, members) in groups {
                    for slot in 0..f.dim {
                        degree_coords.push(CoordData {
                            members: members.iter().map(|&x| (x, slot_at[fi][&x] + slot)).collect(),
                        });
                    }
                }
            }
            coords.push(degree_coords);
        }
        // differentials in coordinate form: spread, apply stalkwise, read
        let lo = shapes_lo;
        let dims: Vec<usize> = coords.iter().map(|c| c.len()).collect();
        let mut diffs = Vec::new();
        for di in 0..coords.len().saturating_sub(1) {
            let k = lo + di as i64;
            let dk = j.d(k);
            let mut m = Matrix::zero(field, dims[di + 1], dims[di]);
            for (ci, c) in coords[di].iter().enumerate() {
                // image of this coordinate's indicator section under d
                for (ti, t) in coords[di + 1].iter().enumerate() {
                    let (x, slot) = t.members[0];
                    let d = dk.at(x);
                    let mut acc = 0;
                    for &(xx, ss) in &c.members {
                        if xx == x {
                            acc = field.add(acc, d.get(slot, ss));
                        }
                    }
                    m.set(ti, ci, acc);
                }
            }
            diffs.push(m);
        }
        let complex = Complex::from_parts(field, lo, dims, diffs, j.twist()).expect("section complex");
        SectionModel { complex, lo, v, coords }
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    /// The elements of the open set the model was taken over.
    pub fn open_set(&self) -> &[usize] {
        &self.v
    }

    pub fn dim(&self, k: i64) -> usize {
        if k < self.lo || (k - self.lo) as usize >= self.coords.len() {
            0
        } else {
            self.coords[(k - self.lo) as usize].len()
        }
    }

    fn coords_at(&self, k: i64) -> &[CoordData] {
        static EMPTY: &[CoordData] = &[];
        if k < self.lo || (k - self.lo) as usize >= self.coords.len() {
            EMPTY
        } else {
            &self.coords[(k - self.lo) as usize]
        }
    }

    /// The value of each coordinate's section at the stalk of `x`:
    /// a `stalk dim x section dim` matrix per degree.
    pub fn stalk_evaluation(&self, j: &ShComplex, x: usize, k: i64) -> Matrix {
        let mut m = Matrix::zero(self.complex.field(), j.dim(k, x), self.dim(k));
        for (ci, c) in self.coords_at(k).iter().enumerate() {
            for &(xx, ss) in &c.members {
                if xx == x {
                    m.set(ss, ci, 1);
                }
            }
        }
        m
    }
}

/// `Gamma(V', phi)` for a map `phi` of structured complexes over one base:
/// the induced chain map `Gamma(V, src) -> Gamma(V', dst)` for `V' <= V`.
pub fn sections_map(phi: &ShMap, src_model: &SectionModel, dst_model: &SectionModel) -> ChainMap {
    let field = src_model.complex.field();
    let lo = src_model.lo.min(dst_model.lo);
    let hi = (src_model.lo + src_model.coords.len() as i64)
        .max(dst_model.lo + dst_model.coords.len() as i64);
    let mut mats = Vec::new();
    for k in lo..hi {
        let phik = phi.at(k);
        let mut m = Matrix::zero(field, dst_model.dim(k), src_model.dim(k));
        for (ti, t) in dst_model.coords_at(k).iter().enumerate() {
            let (x, slot) = t.members[0];
            let p = phik.at(x);
            for (ci, c) in src_model.coords_at(k).iter().enumerate() {
                let mut acc = 0;
                for &(xx, ss) in &c.members {
                    if xx == x {
                        acc = field.add(acc, p.get(slot, ss));
                    }
                }
                m.set(ti, ci, acc);
            }
        }
        mats.push((k, m));
    }
    ChainMap::new(src_model.complex.clone(), dst_model.complex.clone(), mats).expect("sections map")
}

/// Restriction of sections to a smaller open set (identity coefficients).
pub fn sections_restriction(
    j: &ShComplex,
    src_model: &SectionModel,
    dst_model: &SectionModel,
) -> ChainMap {
    sections_map(&ShMap::identity(j), src_model, dst_model)
}

/// The compatible-family map out of a stalk: for `V <= U_q`, sends a stalk
/// class at `q` to the section of the resolution given by restriction
/// followed by augmentation.
pub fn section_from_stalk(res: &Resolved, model: &SectionModel, q: usize) -> ChainMap {
    let f = res.src();
    let field = f.field();
    let mut mats = Vec::new();
    for k in f.lo()..=f.hi() {
        let mut m = Matrix::zero(field, model.dim(k), f.dim(k, q));
        for (ti, t) in model.coords_at(k).iter().enumerate() {
            let (x, slot) = t.members[0];
            assert!(f.base().leq(q, x), "section_from_stalk needs V inside U_q");
            let comp = res.aug().at(k).at(x).mul(&f.sheaf_at(k).res(q, x));
            for c in 0..f.dim(k, q) {
                m.set(ti, c, comp.get(slot, c));
            }
        }
        mats.push((k, m));
    }
    ChainMap::new(f.stalk(q), model.complex.clone(), mats).expect("stalk-to-sections map")
}

/// A derived pushforward along `f`, with the section models over all
/// preimages of minimal opens kept for building canonical maps in and out.
pub struct Pushforward {
    map: PosetMap,
    res: Resolved,
    models: Vec<SectionModel>,
    complex: ShComplex,
}

impl Pushforward {
    pub fn new(f: &PosetMap, c: &ShComplex) -> Self {
        assert_eq!(f.src(), c.base(), "pushforward source mismatch");
        Self::of_resolution(f, resolve(c))
    }

    pub fn of_resolution(f: &PosetMap, res: Resolved) -> Self {
        let y_poset = f.dst().clone();
        let field = res.complex().field();
        let models: Vec<SectionModel> =
            (0..y_poset.n()).map(|q| res.sections(&f.preimage_of_up(q))).collect();
        let complex = sheafify_models(&y_poset, field, &res, &models);
        Pushforward { map: f.clone(), res, models, complex }
    }

    pub fn map(&self) -> &PosetMap {
        &self.map
    }

    pub fn resolution(&self) -> &Resolved {
        &self.res
    }

    pub fn model(&self, q: usize) -> &SectionModel {
        &self.models[q]
    }

    pub fn complex(&self) -> &ShComplex {
        &self.complex
    }
}

/// Derived pushforward: sections of the resolution over preimages of
/// minimal opens.
pub fn derived_pushforward(f: &PosetMap, c: &ShComplex) -> ShComplex {
    Pushforward::new(f, c).complex().clone()
}

/// The canonical map `G -> Rf_*(f^* G)`: a stalk class over `q` goes to the
/// compatible family of its restrictions, pushed into the resolution.
pub fn pushforward_unit(g: &ShComplex, push: &Pushforward) -> ShMap {
    let f = push.map();
    assert_eq!(g.base(), f.dst(), "unit target mismatch");
    assert_eq!(push.resolution().src(), &ShComplex::pullback(f, g), "unit needs the pulled-back source");
    let field = g.field();
    let src = push.resolution().src().clone();
    let out = push.complex();
    let mut mats = Vec::new();
    for k in g.lo().min(out.lo())..=g.hi().max(out.hi()) {
        let ms: Vec<Matrix> = (0..g.base().n())
            .map(|q| {
                let model = push.model(q);
                let mut m = Matrix::zero(field, model.dim(k), g.dim(k, q));
                if k < src.lo() || k > src.hi() {
                    return m;
                }
                let augk = push.resolution().aug().at(k);
                for (ti, t) in model.coords_at(k).iter().enumerate() {
                    let (x, slot) = t.members[0];
                    let comp = augk.at(x).mul(&g.sheaf_at(k).res(q, f.apply(x)));
                    for c in 0..g.dim(k, q) {
                        m.set(ti, c, comp.get(slot, c));
                    }
                }
                m
            })
            .collect();
        mats.push((k, SheafMap::new(g.sheaf_at(k), out.sheaf_at(k), ms).expect("unit degree")));
    }
    ShMap::new(g.clone(), out.clone(), mats).expect("pushforward unit")
}

/// The pushforward applied to a map: lift to resolutions, then take
/// sections over every preimage.
pub fn pushforward_map(phi: &ShMap, push_a: &Pushforward, push_b: &Pushforward) -> ShMap {
    assert_eq!(push_a.map(), push_b.map(), "pushforwards along different maps");
    assert_eq!(phi.src(), push_a.resolution().src(), "map source mismatch");
    assert_eq!(phi.dst(), push_b.resolution().src(), "map target mismatch");
    let jmap = resolve_map(phi, push_a.resolution(), push_b.resolution());
    let y_poset = push_a.map().dst().clone();
    let (src, dst) = (push_a.complex(), push_b.complex());
    let stalk_maps: Vec<ChainMap> =
        (0..y_poset.n()).map(|q| sections_map(&jmap, push_a.model(q), push_b.model(q))).collect();
    let mut mats = Vec::new();
    for k in src.lo().min(dst.lo())..=src.hi().max(dst.hi()) {
        let ms: Vec<Matrix> = (0..y_poset.n()).map(|q| stalk_maps[q].mat(k)).collect();
        mats.push((k, SheafMap::new(src.sheaf_at(k), dst.sheaf_at(k), ms).expect("pushed degree")));
    }
    ShMap::new(src.clone(), dst.clone(), mats).expect("pushed map")
}

/// The canonical base-change comparison for a commuting square: given
/// `f: X -> Y` with pushforward data, `g: Y' -> Y`, the square's top map
/// `g_up: X' -> X`, and pushforward data for the pulled-back complex along
/// `f': X' -> Y'`, produce `g^* Rf_* -> Rf'_* g_up^*`.
pub fn base_change_map(
    g: &PosetMap,
    g_up: &PosetMap,
    push: &Pushforward,
    push2: &Pushforward,
) -> ShMap {
    let f = push.map();
    let f2 = push2.map();
    assert_eq!(g.dst(), f.dst(), "square mismatch");
    assert_eq!(g.src(), f2.dst(), "square mismatch");
    assert_eq!(g_up.dst(), f.src(), "square mismatch");
    assert_eq!(g_up.src(), f2.src(), "square mismatch");
    for x in 0..g_up.src().n() {
        assert_eq!(g.apply(f2.apply(x)), f.apply(g_up.apply(x)), "square does not commute");
    }
    let kappa = resolution_comparison(g_up, push.resolution(), push2.resolution());
    let jx = push.resolution().complex();
    let pulled_j = ShComplex::pullback(g_up, jx);
    let pshapes = pulled_shapes(g_up, push.resolution().shapes());
    let shapes_lo = push.resolution().src().lo();

    let src = ShComplex::pullback(g, push.complex());
    let dst = push2.complex();
    let y2 = g.src().clone();
    let stalk_maps: Vec<ChainMap> = (0..y2.n())
        .map(|q2| {
            let mask = f2.preimage_of_up(q2);
            let mid = sections_of(&pulled_j, shapes_lo, &pshapes, &mask);
            let a = sections_pull(g_up, push.model(g.apply(q2)), &mid);
            sections_map(&kappa, &mid, push2.model(q2)).compose(&a)
        })
        .collect();
    let mut mats = Vec::new();
    for k in src.lo().min(dst.lo())..=src.hi().max(dst.hi()) {
        let ms: Vec<Matrix> = (0..y2.n()).map(|q2| stalk_maps[q2].mat(k)).collect();
        mats.push((k, SheafMap::new(src.sheaf_at(k), dst.sheaf_at(k), ms).expect("base change degree")));
    }
    ShMap::new(src, dst.clone(), mats).expect("base change map")
}

/// The action on a pushforward induced by an automorphism `g` of the source
/// that commutes with the projection and fixes the pushed complex strictly.
pub fn pushforward_equivariance(push: &Pushforward, g_up: &PosetMap) -> ShMap {
    let f = push.map();
    assert!(g_up.is_bijective(), "equivariance needs an automorphism");
    for x in 0..f.src().n() {
        assert_eq!(f.apply(g_up.apply(x)), f.apply(x), "automorphism must commute with projection");
    }
    let kappa = resolution_comparison(g_up, push.resolution(), push.resolution());
    let pulled_j = ShComplex::pullback(g_up, push.resolution().complex());
    let pshapes = pulled_shapes(g_up, push.resolution().shapes());
    let shapes_lo = push.resolution().src().lo();
    let y_poset = f.dst().clone();
    let out = push.complex();
    let stalk_maps: Vec<ChainMap> = (0..y_poset.n())
        .map(|q| {
            let mask = f.preimage_of_up(q);
            let mid = sections_of(&pulled_j, shapes_lo, &pshapes, &mask);
            let a = sections_pull(g_up, push.model(q), &mid);
            sections_map(&kappa, &mid, push.model(q)).compose(&a)
        })
        .collect();
    let mut mats = Vec::new();
    for k in out.lo()..=out.hi() {
        let ms: Vec<Matrix> = (0..y_poset.n()).map(|q| stalk_maps[q].mat(k)).collect();
        mats.push((k, SheafMap::new(out.sheaf_at(k), out.sheaf_at(k), ms).expect("action degree")));
    }
    ShMap::new(out.clone(), out.clone(), mats).expect("pushforward action")
}

/// Assemble per-point section models into a sheaf complex on the target.
fn sheafify_models(
    y_poset: &Poset,
    field: Field,
    res: &Resolved,
    models: &[SectionModel],
) -> ShComplex {
    let j = res.complex();
    if j.is_zero_complex() {
        return ShComplex::zero(y_poset, field).twisted(j.twist());
    }
    let (lo, hi) = (j.lo(), j.hi());
    let restrictions: BTreeMap<(usize, usize), ChainMap> = y_poset
        .strict_pairs()
        .into_iter()
        .map(|(q, q2)| ((q, q2), sections_restriction(j, &models[q], &models[q2])))
        .collect();
    let mut sheaves = Vec::new();
    for k in lo..=hi {
        let dims: Vec<usize> = (0..y_poset.n()).map(|q| models[q].dim(k)).collect();
        let mut resmaps = BTreeMap::new();
        for (&(q, q2), r) in &restrictions {
            resmaps.insert((q, q2), r.mat(k));
        }
        sheaves.push(Sheaf::new(y_poset.clone(), field, dims, resmaps).expect("pushforward sheaf"));
    }
    let mut diffs = Vec::new();
    for k in lo..hi {
        let i = (k - lo) as usize;
        let mats: Vec<Matrix> = (0..y_poset.n()).map(|q| models[q].complex().d(k)).collect();
        diffs.push(SheafMap::new(sheaves[i].clone(), sheaves[i + 1].clone(), mats).expect("pushforward differential"));
    }
    ShComplex::from_parts(y_poset.clone(), field, lo, sheaves, diffs, j.twist()).expect("pushforward")
}

/// Derived global sections.
pub fn derived_global_sections(c: &ShComplex) -> Complex {
    let res = resolve(c);
    let all = vec![true; c.base().n()];
    res.sections(&all).complex().clone()
}

/// Lift a map of complexes to their resolutions, stage by stage.
pub fn resolve_map(phi: &ShMap, res_a: &Resolved, res_b: &Resolved) -> ShMap {
    let (a, b) = (res_a.src(), res_b.src());
    let base = a.base().clone();
    let field = a.field();
    let lo = a.lo().min(b.lo());
    // per original degree p: stage maps sigma^q, starting from phi^p
    let mut pieces: BTreeMap<(i64, usize), SheafMap> = BTreeMap::new();
    for p in lo..=a.hi().max(b.hi()) {
        let ca = col_of(res_a, p);
        let cb = col_of(res_b, p);
        let (Some(ca), Some(cb)) = (ca, cb) else { continue };
        let mut sigma = phi.at(p);
        for q in 0..ca.stages.len().min(cb.stages.len()) {
            pieces.insert((p, q), c0_map(&ca.stages[q], &cb.stages[q], &sigma));
            if q + 1 < ca.stages.len().min(cb.stages.len()) {
                sigma = descend(&ca.stages[q], &cb.stages[q], &sigma);
            }
        }
    }
    assemble_blockwise(res_a, res_b, |p, q| pieces.get(&(p, q)), &base, field)
}

fn col_of(res: &Resolved, p: i64) -> Option<&Column> {
    let lo = res.src.lo();
    if p < lo || (p - lo) as usize >= res.columns.len() {
        None
    } else {
        Some(&res.columns[(p - lo) as usize])
    }
}

fn assemble_blockwise<'a, F>(
    res_a: &Resolved,
    res_b: &Resolved,
    piece: F,
    base: &Poset,
    field: Field,
) -> ShMap
where
    F: Fn(i64, usize) -> Option<&'a SheafMap>,
{
    let (ja, jb) = (res_a.complex(), res_b.complex());
    let mut mats = Vec::new();
    for k in ja.lo().min(jb.lo())..=ja.hi().max(jb.hi()) {
        let src_blocks = blocks_at(res_a, k);
        let dst_blocks = blocks_at(res_b, k);
        let ms: Vec<Matrix> = (0..base.n())
            .map(|y| {
                let mut m = Matrix::zero(field, jb.dim(k, y), ja.dim(k, y));
                let mut col0 = 0;
                for &(p, q) in &src_blocks {
                    let w = col_of(res_a, p).unwrap().stages[q].c.dim(y);
                    let mut row0 = 0;
                    for &(p2, q2) in &dst_blocks {
                        let h = col_of(res_b, p2).unwrap().stages[q2].c.dim(y);
                        if p2 == p && q2 == q {
                            if let Some(sm) = piece(p, q) {
                                put(&mut m, row0, col0, sm.at(y));
                            }
                        }
                        row0 += h;
                    }
                    col0 += w;
                }
                m
            })
            .collect();
        mats.push((k, SheafMap::new(ja.sheaf_at(k), jb.sheaf_at(k), ms).expect("lift degree")));
    }
    ShMap::new(ja.clone(), jb.clone(), mats).expect("lifted map")
}

fn blocks_at(res: &Resolved, k: i64) -> Vec<(i64, usize)> {
    let lo = res.src.lo();
    (0..res.columns.len() as i64)
        .map(|i| lo + i)
        .filter(|&p| {
            let q = k - p;
            q >= 0 && (q as usize) < res.columns[(p - lo) as usize].stages.len()
        })
        .map(|p| (p, (k - p) as usize))
        .collect()
}

/// The natural comparison `u^* J_X -> J_Y` between a pulled-back resolution
/// and a resolution of the pullback; requires `res_y` to resolve the
/// pullback of `res_x`'s source on the nose.
pub fn resolution_comparison(u: &PosetMap, res_x: &Resolved, res_y: &Resolved) -> ShMap {
    let fx = res_x.src();
    let fy = res_y.src();
    assert_eq!(fy, &ShComplex::pullback(u, fx), "comparison needs the pulled-back source");
    let y_poset = u.src().clone();
    let field = fx.field();
    let pulled = ShComplex::pullback(u, res_x.complex());

    // per column p: kappa^q: u^* C^q_X -> C^q_Y and sigma^q on stage kernels
    let mut pieces: BTreeMap<(i64, usize), Vec<Matrix>> = BTreeMap::new();
    for p in fx.lo()..=fx.hi() {
        let (Some(cx), Some(cy)) = (col_of(res_x, p), col_of(res_y, p)) else { continue };
        // sigma: u^* S^q_X -> S^q_Y, stalk matrices; starts as the identity
        let mut sigma: Vec<Matrix> =
            (0..y_poset.n()).map(|y| Matrix::identity(field, fx.dim(p, u.apply(y)))).collect();
        for q in 0..cy.stages.len() {
            if q >= cx.stages.len() {
                break;
            }
            let sx = &cx.stages[q];
            let sy = &cy.stages[q];
            // kappa at stalk y: block to factor (w, d) of C_Y: sigma_w after
            // projecting u^*C_X to its factor at z = u(w)
            let kappa: Vec<Matrix> = (0..y_poset.n())
                .map(|y| {
                    let uy = u.apply(y);
                    let src_factors: Vec<&(usize, usize)> =
                        sx.factors.iter().filter(|&&(z, _)| fx.base().leq(uy, z)).collect();
                    let dst_factors: Vec<&(usize, usize)> =
                        sy.factors.iter().filter(|&&(w, _)| y_poset.leq(y, w)).collect();
                    let mut m = Matrix::zero(
                        field,
                        dst_factors.iter().map(|f| f.1).sum(),
                        src_factors.iter().map(|f| f.1).sum(),
                    );
                    let mut row0 = 0;
                    for &&(w, d) in &dst_factors {
                        let z = u.apply(w);
                        let mut col0 = 0;
                        for &&(zz, dz) in &src_factors {
                            if zz == z {
                                // sigma at stalk w, then the z-factor projection
                                let s = &sigma[w];
                                for r in 0..d {
                                    for c in 0..dz {
                                        m.set(row0 + r, col0 + c, s.get(r, c));
                                    }
                                }
                            }
                            col0 += dz;
                        }
                        row0 += d;
                    }
                    m
                })
                .collect();
            pieces.insert((p, q), kappa.clone());
            // descend sigma through the cokernels
            if q + 1 < cy.stages.len() && q + 1 < cx.stages.len() {
                sigma = (0..y_poset.n())
                    .map(|y| {
                        let a = sx.proj.at(u.apply(y)).clone();
                        let b = sy.proj.at(y).mul(&kappa[y]);
                        a.solve_left(&b).expect("comparison descends")
                    })
                    .collect();
            }
        }
    }

    let jb = res_y.complex();
    let mut mats = Vec::new();
    for k in pulled.lo().min(jb.lo())..=pulled.hi().max(jb.hi()) {
        let src_blocks = blocks_at(res_x, k);
        let dst_blocks = blocks_at(res_y, k);
        let ms: Vec<Matrix> = (0..y_poset.n())
            .map(|y| {
                let mut m = Matrix::zero(field, jb.dim(k, y), pulled.dim(k, y));
                let mut col0 = 0;
                for &(p, q) in &src_blocks {
                    let w = col_of(res_x, p).unwrap().stages[q].c.dim(u.apply(y));
                    let mut row0 = 0;
                    for &(p2, q2) in &dst_blocks {
                        let h = col_of(res_y, p2).unwrap().stages[q2].c.dim(y);
                        if p2 == p && q2 == q {
                            if let Some(kappa) = pieces.get(&(p, q)) {
                                put(&mut m, row0, col0, &kappa[y]);
                            }
                        }
                        row0 += h;
                    }
                    col0 += w;
                }
                m
            })
            .collect();
        mats.push((k, SheafMap::new(pulled.sheaf_at(k), jb.sheaf_at(k), ms).expect("comparison degree")));
    }
    ShMap::new(pulled, jb.clone(), mats).expect("comparison map")
}

/// Sections of an arbitrary (unresolved) complex over an up-closed set: the
/// degreewise limit, as a kernel inside the product of stalks, with its
/// inclusion maps.
pub fn sections_kernel(c: &ShComplex, v_mask: &[bool]) -> (Complex, Vec<(i64, Matrix)>) {
    let base = c.base();
    let field = c.field();
    assert!(base.is_up_closed(v_mask), "sections need an up-closed set");
    let v: Vec<usize> = (0..base.n()).filter(|&x| v_mask[x]).collect();
    let pairs: Vec<(usize, usize)> = base
        .strict_pairs()
        .into_iter()
        .filter(|&(x, y)| v_mask[x] && v_mask[y])
        .collect();
    let mut bases = Vec::new();
    for k in c.lo()..=c.hi() {
        let offs: Vec<usize> = v
            .iter()
            .scan(0, |acc, &x| {
                let at = *acc;
                *acc += c.dim(k, x);
                Some(at)
            })
            .collect();
        let total: usize = v.iter().map(|&x| c.dim(k, x)).sum();
        let mut rows = Matrix::zero(field, 0, total);
        for &(x, y) in &pairs {
            let (ix, iy) = (v.iter().position(|&t| t == x).unwrap(), v.iter().position(|&t| t == y).unwrap());
            let r = c.sheaf_at(k).res(x, y);
            let mut row = Matrix::zero(field, c.dim(k, y), total);
            for rr in 0..c.dim(k, y) {
                row.set(rr, offs[iy] + rr, 1);
                for cc in 0..c.dim(k, x) {
                    row.set(rr, offs[ix] + cc, field.neg(r.get(rr, cc)));
                }
            }
            rows = rows.vstack(&row);
        }
        bases.push(rows.kernel());
    }
    let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
    let mut diffs = Vec::new();
    for i in 0..bases.len().saturating_sub(1) {
        let k = c.lo() + i as i64;
        // ambient differential: block diagonal of stalk differentials
        let blocks: Vec<Matrix> = v.iter().map(|&x| c.d(k).at(x).clone()).collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let amb = Matrix::block_diag(field, &refs);
        let rhs = amb.mul(&bases[i]);
        diffs.push(bases[i + 1].solve(&rhs).expect("limit preserved by d"));
    }
    let k = Complex::from_parts(field, c.lo(), dims, diffs, c.twist()).expect("section kernel");
    let incl = (c.lo()..=c.hi()).map(|deg| (deg, bases[(deg - c.lo()) as usize].clone())).collect();
    (k, incl)
}

/// Decompose a sheaf as a direct product of point-injectives, if it is one;
/// returns the factor list and the isomorphism onto the rebuilt product.
pub fn recognize_injective(s: &Sheaf) -> Option<(Vec<(usize, usize)>, SheafMap)> {
    let base = s.base();
    let field = s.field();
    // candidate rank at x: kernel of the map to sections over U_x minus x
    let mut ranks = Vec::new();
    let mut projs = Vec::new();
    for x in 0..base.n() {
        let up = base.up_set(x);
        let strict: Vec<usize> = up.into_iter().filter(|&y| y != x).collect();
        // sections over the punctured minimal open: compatible families
        let offs: Vec<usize> = strict
            .iter()
            .scan(0, |acc, &y| {
                let at = *acc;
                *acc += s.dim(y);
                Some(at)
            })
            .collect();
        let total: usize = strict.iter().map(|&y| s.dim(y)).sum();
        let mut to_punctured = Matrix::zero(field, total, s.dim(x));
        for (i, &y) in strict.iter().enumerate() {
            put(&mut to_punctured, offs[i], 0, &s.res(x, y));
        }
        // quotient out the compatibility relations: only the kernel matters
        let mut rows = Matrix::zero(field, 0, total);
        for (i, &y) in strict.iter().enumerate() {
            for (i2, &y2) in strict.iter().enumerate() {
                if base.lt(y, y2) {
                    let r = s.res(y, y2);
                    let mut row = Matrix::zero(field, s.dim(y2), total);
                    for rr in 0..s.dim(y2) {
                        row.set(rr, offs[i2] + rr, 1);
                        for cc in 0..s.dim(y) {
                            row.set(rr, offs[i] + cc, field.neg(r.get(rr, cc)));
                        }
                    }
                    rows = rows.vstack(&row);
                }
            }
        }
        let lim_basis = rows.kernel();
        // express the image inside the limit, then take the kernel
        let phi = lim_basis.solve(&to_punctured).unwrap_or_else(|| to_punctured.clone());
        let ker = phi.kernel();
        ranks.push(ker.cols());
        // projection onto the kernel along a complement
        let full = Matrix::identity(field, s.dim(x));
        let extra = tame_complex::extend_basis(&ker, &full);
        let basis = ker.hstack(&full.select_columns(&extra));
        let inv = basis.inverse()?;
        let mut proj = Matrix::zero(field, ker.cols(), s.dim(x));
        for r in 0..ker.cols() {
            for c in 0..s.dim(x) {
                proj.set(r, c, inv.get(r, c));
            }
        }
        projs.push(proj);
    }
    // dimension bookkeeping must match a product of point-injectives
    for y in 0..base.n() {
        let want: usize = (0..base.n()).filter(|&x| base.leq(y, x)).map(|x| ranks[x]).sum();
        if want != s.dim(y) {
            return None;
        }
    }
    let factors: Vec<(usize, usize)> =
        (0..base.n()).filter(|&x| ranks[x] > 0).map(|x| (x, ranks[x])).collect();
    // build the product and the candidate isomorphism
    let mut target = Sheaf::zero(base, field);
    for &(x, d) in &factors {
        target = target.direct_sum(&Sheaf::point_injective(base, field, x, d));
    }
    let mats: Vec<Matrix> = (0..base.n())
        .map(|y| {
            let mut m = Matrix::zero(field, target.dim(y), s.dim(y));
            let mut row0 = 0;
            for &(x, d) in &factors {
                if base.leq(y, x) {
                    let comp = projs[x].mul(&s.res(y, x));
                    put(&mut m, row0, 0, &comp);
                    row0 += d;
                }
            }
            m
        })
        .collect();
    let psi = SheafMap::new(s.clone(), target, mats).ok()?;
    let iso = (0..base.n()).all(|y| psi.at(y).is_invertible());
    iso.then_some((factors, psi))
}

/// Public resolution: recognizes complexes that are already degreewise
/// injective (returning them unchanged up to the recognition isomorphism,
/// with shapes), otherwise falls back to the iterated envelope.
pub fn injective_resolution(f: &ShComplex) -> (ShComplex, ShMap, Vec<Vec<StructFactor>>) {
    let base = f.base().clone();
    let mut shapes = Vec::new();
    let mut isos = Vec::new();
    let mut targets = Vec::new();
    let mut all = true;
    for k in f.lo()..=f.hi() {
        match recognize_injective(&f.sheaf_at(k)) {
            Some((factors, psi)) => {
                shapes.push(
                    factors
                        .iter()
                        .map(|&(x, d)| StructFactor { down: base.down_mask(x), dim: d })
                        .collect::<Vec<_>>(),
                );
                targets.push(psi.dst().clone());
                isos.push(psi);
            }
            None => {
                all = false;
                break;
            }
        }
    }
    if all {
        let lo = f.lo();
        let diffs: Vec<SheafMap> = (lo..f.hi())
            .map(|k| {
                let i = (k - lo) as usize;
                // transport the differential through the isomorphisms
                let inv_mats: Vec<Matrix> =
                    (0..base.n()).map(|x| isos[i].at(x).inverse().expect("iso")).collect();
                let mats: Vec<Matrix> = (0..base.n())
                    .map(|x| isos[i + 1].at(x).mul(&f.d(k).at(x).mul(&inv_mats[x])))
                    .collect();
                SheafMap::new(targets[i].clone(), targets[i + 1].clone(), mats).expect("transported differential")
            })
            .collect();
        let c = ShComplex::from_parts(base, f.field(), lo, targets, diffs, f.twist())
            .expect("recognized resolution");
        let aug = ShMap::new(
            f.clone(),
            c.clone(),
            (lo..=f.hi()).map(|k| (k, isos[(k - lo) as usize].clone())).collect(),
        )
        .expect("recognition isomorphism");
        return (c, aug, shapes);
    }
    let res = resolve(f);
    (res.complex().clone(), res.aug().clone(), res.shapes().to_vec())
}
