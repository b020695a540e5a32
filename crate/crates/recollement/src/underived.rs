//! Strict section-level pushforwards and the strict split presentation.
//!
//! [`SectionFunctor`] is the underived pushforward along a poset map,
//! computed degreewise as literal sections over preimages of minimal
//! opens.  It is strictly functorial and sits in a strict adjunction with
//! the pullback: units and counits typecheck on the nose and the triangle
//! identities hold exactly, which makes this the presentation of choice
//! for gluing adjunctions over a split.  [`StrictSheafRecollement`] is the
//! resulting split context; its round trips are degreewise isomorphisms,
//! not just quasi-isomorphisms.

use std::collections::BTreeMap;

use crate::context::{AdjunctionPart, GluedAdjunction, Recollement};
use crate::sheaf_ctx::ShCat;
use crate::triple;
use crate::RecError;
use tame_complex::{Field, Matrix};
use tame_poset::{
    closed_restrict, extend_zero_closed, extend_zero_open, open_restrict, sections_kernel,
    OpenClosedDecomposition, PosetMap, ShComplex, ShMap, Sheaf, SheafMap,
};

/// `(point, row offset, stalk dimension)` for the product of stalks of
/// degree `k` over the masked points, ascending.
fn stalk_blocks(c: &ShComplex, mask: &[bool], k: i64) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for x in 0..c.base().n() {
        if mask[x] {
            let d = c.dim(k, x);
            out.push((x, off, d));
            off += d;
        }
    }
    out
}

fn total_dim(c: &ShComplex, mask: &[bool], k: i64) -> usize {
    (0..c.base().n()).filter(|&x| mask[x]).map(|x| c.dim(k, x)).sum()
}

/// Rows `offset..offset + dim` out of `total`.
fn row_select(field: Field, total: usize, offset: usize, dim: usize) -> Matrix {
    let mut m = Matrix::zero(field, dim, total);
    for r in 0..dim {
        m.set(r, offset + r, 1);
    }
    m
}

/// The underived pushforward of one complex along a poset map: sections
/// over preimages of minimal opens, with the inclusion bases into the
/// stalk products kept for later coordinate work.
pub struct SectionFunctor {
    map: PosetMap,
    src: ShComplex,
    complex: ShComplex,
    masks: Vec<Vec<bool>>,
    bases: Vec<BTreeMap<i64, Matrix>>,
}

impl SectionFunctor {
    pub fn new(f: &PosetMap, c: &ShComplex) -> Self {
        assert_eq!(f.src(), c.base(), "complex must live on the source of the map");
        let dst = f.dst().clone();
        let field = c.field();
        let mut masks = Vec::new();
        let mut bases: Vec<BTreeMap<i64, Matrix>> = Vec::new();
        let mut kernels = Vec::new();
        for q in 0..dst.n() {
            let mask = f.preimage_of_up(q);
            let (cq, incl) = sections_kernel(c, &mask);
            masks.push(mask);
            bases.push(incl.into_iter().collect());
            kernels.push(cq);
        }

        let lo = c.lo();
        let hi = c.hi();
        let mut sheaves = Vec::new();
        for k in lo..=hi {
            let dims: Vec<usize> = kernels.iter().map(|cq| cq.dim(k)).collect();
            let mut res = BTreeMap::new();
            for (q, q2) in dst.strict_pairs() {
                // restricting a family over the preimage of U_q to the
                // preimage of the smaller open U_q2 keeps it compatible
                let blocks = stalk_blocks(c, &masks[q], k);
                let total2 = total_dim(c, &masks[q2], k);
                let mut sel = Matrix::zero(field, 0, total_dim(c, &masks[q], k));
                for &(x, off, d) in &blocks {
                    if masks[q2][x] {
                        sel = sel.vstack(&row_select(field, blocks_total(&blocks), off, d));
                    }
                }
                debug_assert_eq!(sel.rows(), total2);
                let m = basis_of(&bases[q2], field, total2, k)
                    .solve(&sel.mul(&basis_of(&bases[q], field, sel.cols(), k)))
                    .expect("restricted family stays compatible");
                res.insert((q, q2), m);
            }
            sheaves.push(Sheaf::new(dst.clone(), field, dims, res).expect("section sheaf"));
        }
        let mut diffs = Vec::new();
        for k in lo..hi {
            let ms: Vec<Matrix> = kernels.iter().map(|cq| cq.d(k)).collect();
            diffs.push(
                SheafMap::new(
                    sheaves[(k - lo) as usize].clone(),
                    sheaves[(k - lo + 1) as usize].clone(),
                    ms,
                )
                .expect("section differential"),
            );
        }
        let complex = ShComplex::from_parts(dst.clone(), field, lo, sheaves, diffs, c.twist())
            .expect("section complex");
        SectionFunctor { map: f.clone(), src: c.clone(), complex, masks, bases }
    }

    pub fn map(&self) -> &PosetMap {
        &self.map
    }

    pub fn src(&self) -> &ShComplex {
        &self.src
    }

    pub fn complex(&self) -> &ShComplex {
        &self.complex
    }

    pub fn mask(&self, q: usize) -> &[bool] {
        &self.masks[q]
    }

    /// Inclusion of the degree-`k` sections over the preimage of `U_q`
    /// into the product of stalks there.
    pub fn basis(&self, q: usize, k: i64) -> Matrix {
        basis_of(&self.bases[q], self.src.field(), total_dim(&self.src, &self.masks[q], k), k)
    }

    /// The strictly functorial action on a map over the same poset map.
    pub fn on_map(&self, other: &SectionFunctor, phi: &ShMap) -> ShMap {
        assert_eq!(self.map, other.map, "pushforwards along different maps");
        assert_eq!(phi.src(), &self.src, "map source mismatch");
        assert_eq!(phi.dst(), &other.src, "map target mismatch");
        let field = self.src.field();
        let dst = self.map.dst();
        let lo = self.complex.lo().min(other.complex.lo());
        let hi = self.complex.hi().max(other.complex.hi());
        let mats: Vec<(i64, SheafMap)> = (lo..=hi)
            .map(|k| {
                let pk = phi.at(k);
                let ms: Vec<Matrix> = (0..dst.n())
                    .map(|q| {
                        let blocks: Vec<Matrix> = self.masks[q]
                            .iter()
                            .enumerate()
                            .filter(|&(_, &m)| m)
                            .map(|(x, _)| pk.at(x).clone())
                            .collect();
                        let refs: Vec<&Matrix> = blocks.iter().collect();
                        let amb = Matrix::block_diag(field, &refs);
                        other
                            .basis(q, k)
                            .solve(&amb.mul(&self.basis(q, k)))
                            .expect("pushed family stays compatible")
                    })
                    .collect();
                (
                    k,
                    SheafMap::new(self.complex.sheaf_at(k), other.complex.sheaf_at(k), ms)
                        .expect("pushed degree"),
                )
            })
            .collect();
        ShMap::new(self.complex.clone(), other.complex.clone(), mats)
            .expect("section-level pushforward of a map")
    }
}

fn blocks_total(blocks: &[(usize, usize, usize)]) -> usize {
    blocks.last().map(|&(_, off, d)| off + d).unwrap_or(0)
}

fn basis_of(bases: &BTreeMap<i64, Matrix>, field: Field, total: usize, k: i64) -> Matrix {
    bases.get(&k).cloned().unwrap_or_else(|| Matrix::zero(field, total, 0))
}

/// The unit `g -> f_* f^* g` of the strict adjunction: a stalk vector at
/// `q` goes to the family of its restrictions over the preimage of `U_q`.
pub fn strict_unit(g: &ShComplex, push: &SectionFunctor) -> ShMap {
    let f = &push.map;
    assert_eq!(g.base(), f.dst(), "unit target lives on the wrong space");
    assert_eq!(push.src, ShComplex::pullback(f, g), "pushforward is not of the pullback");
    let field = g.field();
    let lo = g.lo().min(push.complex.lo());
    let hi = g.hi().max(push.complex.hi());
    let mats: Vec<(i64, SheafMap)> = (lo..=hi)
        .map(|k| {
            let sh = g.sheaf_at(k);
            let ms: Vec<Matrix> = (0..g.base().n())
                .map(|q| {
                    let mut fam = Matrix::zero(field, 0, g.dim(k, q));
                    for (x, _, _) in stalk_blocks(&push.src, &push.masks[q], k) {
                        fam = fam.vstack(&sh.res(q, f.apply(x)));
                    }
                    push.basis(q, k).solve(&fam).expect("restriction family is compatible")
                })
                .collect();
            (k, SheafMap::new(sh.clone(), push.complex.sheaf_at(k), ms).expect("unit degree"))
        })
        .collect();
    ShMap::new(g.clone(), push.complex.clone(), mats).expect("strict unit")
}

/// The counit `f^* f_* c -> c` of the strict adjunction: evaluate a family
/// at the point.
pub fn strict_counit(push: &SectionFunctor) -> ShMap {
    let f = &push.map;
    let c = &push.src;
    let field = c.field();
    let src_c = ShComplex::pullback(f, &push.complex);
    let lo = src_c.lo().min(c.lo());
    let hi = src_c.hi().max(c.hi());
    let mats: Vec<(i64, SheafMap)> = (lo..=hi)
        .map(|k| {
            let ms: Vec<Matrix> = (0..f.src().n())
                .map(|x| {
                    let q = f.apply(x);
                    let blocks = stalk_blocks(c, &push.masks[q], k);
                    let &(_, off, d) = blocks
                        .iter()
                        .find(|&&(p, _, _)| p == x)
                        .expect("point lies in the preimage of its image's minimal open");
                    row_select(field, blocks_total(&blocks), off, d).mul(&push.basis(q, k))
                })
                .collect();
            (
                k,
                SheafMap::new(src_c.sheaf_at(k), c.sheaf_at(k), ms).expect("counit degree"),
            )
        })
        .collect();
    ShMap::new(src_c, c.clone(), mats).expect("strict counit")
}

/// A poset map that respects a split on both sides, with its restrictions
/// to the closed and open parts.
pub struct DecomposedMap {
    map: PosetMap,
    dec_src: OpenClosedDecomposition,
    dec_dst: OpenClosedDecomposition,
    f_z: PosetMap,
    f_u: PosetMap,
}

impl DecomposedMap {
    pub fn new(
        map: PosetMap,
        dec_src: OpenClosedDecomposition,
        dec_dst: OpenClosedDecomposition,
    ) -> Result<Self, RecError> {
        if map.src() != dec_src.ambient() || map.dst() != dec_dst.ambient() {
            return Err(RecError::NotCompatible("map does not connect the split spaces".into()));
        }
        for x in 0..map.src().n() {
            if dec_src.z_mask()[x] != dec_dst.z_mask()[map.apply(x)] {
                return Err(RecError::NotCompatible(
                    "map does not respect the closed/open split".into(),
                ));
            }
        }
        let f_z = restrict_map(&map, &dec_src, &dec_dst, true)?;
        let f_u = restrict_map(&map, &dec_src, &dec_dst, false)?;
        Ok(DecomposedMap { map, dec_src, dec_dst, f_z, f_u })
    }

    pub fn map(&self) -> &PosetMap {
        &self.map
    }

    pub fn dec_src(&self) -> &OpenClosedDecomposition {
        &self.dec_src
    }

    pub fn dec_dst(&self) -> &OpenClosedDecomposition {
        &self.dec_dst
    }

    pub fn closed_restriction(&self) -> &PosetMap {
        &self.f_z
    }

    pub fn open_restriction(&self) -> &PosetMap {
        &self.f_u
    }
}

fn restrict_map(
    map: &PosetMap,
    dec_src: &OpenClosedDecomposition,
    dec_dst: &OpenClosedDecomposition,
    closed: bool,
) -> Result<PosetMap, RecError> {
    let (ps, inc_s) = if closed { dec_src.closed_part() } else { dec_src.open_part() };
    let (pd, inc_d) = if closed { dec_dst.closed_part() } else { dec_dst.open_part() };
    let mut back = vec![usize::MAX; dec_dst.ambient().n()];
    for i in 0..pd.n() {
        back[inc_d.apply(i)] = i;
    }
    let vals: Vec<usize> = (0..ps.n()).map(|i| back[map.apply(inc_s.apply(i))]).collect();
    if vals.iter().any(|&v| v == usize::MAX) {
        return Err(RecError::NotCompatible("restriction leaves the part".into()));
    }
    PosetMap::new(ps, pd, vals)
        .map_err(|e| RecError::NotCompatible(format!("restricted map is not monotone: {e}")))
}

/// The strict split context: same localizations and closed inclusion as
/// the derived one, but the open pushforward is the section functor, so
/// units are strict and round trips are degreewise isomorphisms.
pub struct StrictSheafRecollement {
    dec: OpenClosedDecomposition,
    i: PosetMap,
    j: PosetMap,
    p0: ShCat,
    p1: ShCat,
    pa: ShCat,
}

impl StrictSheafRecollement {
    pub fn new(dec: OpenClosedDecomposition, field: Field) -> Self {
        let (z, i) = dec.closed_part();
        let (u, j) = dec.open_part();
        let ambient = dec.ambient().clone();
        StrictSheafRecollement {
            dec,
            i,
            j,
            p0: ShCat::new(z, field),
            p1: ShCat::new(u, field),
            pa: ShCat::new(ambient, field),
        }
    }

    pub fn dec(&self) -> &OpenClosedDecomposition {
        &self.dec
    }

    fn open_push(&self, b: &ShComplex) -> SectionFunctor {
        SectionFunctor::new(&self.j, b)
    }
}

impl Recollement for StrictSheafRecollement {
    type P0 = ShCat;
    type P1 = ShCat;
    type PA = ShCat;

    fn part0(&self) -> &ShCat {
        &self.p0
    }

    fn part1(&self) -> &ShCat {
        &self.p1
    }

    fn ambient_part(&self) -> &ShCat {
        &self.pa
    }

    fn l0(&self, f: &ShComplex) -> ShComplex {
        closed_restrict(&self.dec, f)
    }

    fn l0_map(&self, f: &ShMap) -> ShMap {
        ShMap::pullback(&self.i, f)
    }

    fn l1(&self, f: &ShComplex) -> ShComplex {
        open_restrict(&self.dec, f)
    }

    fn l1_map(&self, f: &ShMap) -> ShMap {
        ShMap::pullback(&self.j, f)
    }

    fn i0(&self, a: &ShComplex) -> ShComplex {
        extend_zero_closed(&self.dec, a)
    }

    fn i1(&self, b: &ShComplex) -> ShComplex {
        self.open_push(b).complex.clone()
    }

    fn nu(&self, b: &ShComplex) -> ShComplex {
        closed_restrict(&self.dec, &self.i1(b))
    }

    fn nu_map(&self, g: &ShMap) -> ShMap {
        let px = self.open_push(g.src());
        let py = self.open_push(g.dst());
        self.l0_map(&px.on_map(&py, g))
    }

    fn theta(&self, f: &ShComplex) -> ShMap {
        let push = self.open_push(&open_restrict(&self.dec, f));
        ShMap::pullback(&self.i, &strict_unit(f, &push))
    }

    fn open_identity_witness(&self, b: &ShComplex) -> ShMap {
        let ext = extend_zero_open(&self.dec, b);
        let push = self.open_push(b);
        ShMap::pullback(&self.j, &strict_unit(&ext, &push))
    }

    fn reconstruct(
        &self,
        a: &ShComplex,
        b: &ShComplex,
        theta: &ShMap,
    ) -> Result<ShComplex, RecError> {
        if a.twist() != b.twist() {
            return Err(RecError::NotCompatible("the two parts carry different twists".into()));
        }
        let push = self.open_push(b);
        let target = closed_restrict(&self.dec, &push.complex);
        if theta.src() != a || theta.dst() != &target {
            return Err(RecError::NotCompatible("comparison map has the wrong endpoints".into()));
        }
        Ok(triple::kernel_glue(&self.dec, &push.complex, a, theta).complex)
    }

    fn certified_roundtrip(&self, f: &ShComplex) -> Result<ShMap, RecError> {
        let b = open_restrict(&self.dec, f);
        let push = self.open_push(&b);
        let unit = strict_unit(f, &push);
        let a = closed_restrict(&self.dec, f);
        let theta = ShMap::pullback(&self.i, &unit);
        let r = triple::kernel_glue(&self.dec, &push.complex, &a, &theta);
        triple::certify_roundtrip(&self.dec, f, &r, &unit)
    }

    fn glue_triple_map(
        &self,
        src: (&ShComplex, &ShComplex, &ShMap),
        dst: (&ShComplex, &ShComplex, &ShMap),
        alpha: &ShMap,
        beta: &ShMap,
    ) -> Result<ShMap, RecError> {
        if alpha.src() != src.0 || alpha.dst() != dst.0 {
            return Err(RecError::NotCompatible("closed-part map has the wrong endpoints".into()));
        }
        if beta.src() != src.1 || beta.dst() != dst.1 {
            return Err(RecError::NotCompatible("open-part map has the wrong endpoints".into()));
        }
        let px = self.open_push(src.1);
        let py = self.open_push(dst.1);
        let rj_beta = px.on_map(&py, beta);
        let lhs = dst.2.compose(alpha);
        let rhs = self.l0_map(&rj_beta).compose(src.2);
        if !lhs.sub(&rhs).is_zero() {
            return Err(RecError::NotCompatible(
                "comparison square does not commute strictly".into(),
            ));
        }
        let rx = triple::kernel_glue(&self.dec, &px.complex, src.0, src.2);
        let ry = triple::kernel_glue(&self.dec, &py.complex, dst.0, dst.2);
        triple::glued_kernel_map(&self.dec, &rx, &ry, &rj_beta, alpha)
    }
}

/// The strict pullback/pushforward adjunction along one poset map, as one
/// componentwise part of a glued adjunction.
pub fn pullback_part<'a>(f: &'a PosetMap) -> AdjunctionPart<'a, ShCat, ShCat> {
    AdjunctionPart {
        left: Box::new(move |x: &ShComplex| ShComplex::pullback(f, x)),
        left_map: Box::new(move |m: &ShMap| ShMap::pullback(f, m)),
        right: Box::new(move |y: &ShComplex| SectionFunctor::new(f, y).complex().clone()),
        right_map: Box::new(move |m: &ShMap| {
            let px = SectionFunctor::new(f, m.src());
            let py = SectionFunctor::new(f, m.dst());
            px.on_map(&py, m)
        }),
        unit: Box::new(move |x: &ShComplex| {
            let push = SectionFunctor::new(f, &ShComplex::pullback(f, x));
            strict_unit(x, &push)
        }),
        counit: Box::new(move |y: &ShComplex| strict_counit(&SectionFunctor::new(f, y))),
    }
}

/// Glued adjunction `(pullback, sections)` along a split-respecting map:
/// `downstairs` is the context on the target, `upstairs` on the source.
pub fn decomposed_map_adjunction<'a>(
    dm: &'a DecomposedMap,
    downstairs: &'a StrictSheafRecollement,
    upstairs: &'a StrictSheafRecollement,
) -> GluedAdjunction<'a, StrictSheafRecollement, StrictSheafRecollement> {
    GluedAdjunction {
        src: downstairs,
        dst: upstairs,
        part0: pullback_part(dm.closed_restriction()),
        part1: pullback_part(dm.open_restriction()),
        chi_left: Box::new(move |b: &ShComplex| chi_left_map(dm, downstairs, upstairs, b)),
        chi_right: Box::new(move |b2: &ShComplex| chi_right_map(dm, downstairs, upstairs, b2)),
    }
}

/// `pullback_Z(nu b) -> nu'(pullback_U b)`: pull a section of `b` over
/// `U cap U_q` back along the open restriction.
fn chi_left_map(
    dm: &DecomposedMap,
    downstairs: &StrictSheafRecollement,
    upstairs: &StrictSheafRecollement,
    b: &ShComplex,
) -> ShMap {
    let field = b.field();
    let f_z = dm.closed_restriction();
    let f_u = dm.open_restriction();
    let (z2, i2) = dm.dec_src().closed_part();
    let (_z1, i1) = dm.dec_dst().closed_part();
    let src = ShComplex::pullback(f_z, &downstairs.nu(b));
    let pulled = ShComplex::pullback(f_u, b);
    let dst = upstairs.nu(&pulled);
    let push_c = SectionFunctor::new(&downstairs.j, b);
    let push_d = SectionFunctor::new(&upstairs.j, &pulled);

    let lo = src.lo().min(dst.lo());
    let hi = src.hi().max(dst.hi());
    let mats: Vec<(i64, SheafMap)> = (lo..=hi)
        .map(|k| {
            let ms: Vec<Matrix> = (0..z2.n())
                .map(|zi2| {
                    let q = i1.apply(f_z.apply(zi2));
                    let q2 = i2.apply(zi2);
                    let blocks = stalk_blocks(b, push_c.mask(q), k);
                    let expanded = push_c.basis(q, k);
                    let mut fam = Matrix::zero(field, 0, expanded.cols());
                    for (x2, _, _) in stalk_blocks(&pulled, push_d.mask(q2), k) {
                        let x = f_u.apply(x2);
                        let &(_, off, d) = blocks
                            .iter()
                            .find(|&&(p, _, _)| p == x)
                            .expect("image point lies in the downstairs preimage");
                        fam = fam
                            .vstack(&row_select(field, blocks_total(&blocks), off, d).mul(&expanded));
                    }
                    push_d
                        .basis(q2, k)
                        .solve(&fam)
                        .expect("pulled-back family stays compatible")
                })
                .collect();
            (k, SheafMap::new(src.sheaf_at(k), dst.sheaf_at(k), ms).expect("interchange degree"))
        })
        .collect();
    ShMap::new(src, dst, mats).expect("left interchange map")
}

/// `nu(sections_U b') -> sections_Z(nu' b')`: reglue a family of pushed
/// sections into sections of the pushed family.
fn chi_right_map(
    dm: &DecomposedMap,
    downstairs: &StrictSheafRecollement,
    upstairs: &StrictSheafRecollement,
    b2: &ShComplex,
) -> ShMap {
    let field = b2.field();
    let f_z = dm.closed_restriction();
    let f_u = dm.open_restriction();
    let (z1, i1) = dm.dec_dst().closed_part();
    let (_z2, i2) = dm.dec_src().closed_part();

    let g1 = SectionFunctor::new(f_u, b2);
    let src = downstairs.nu(g1.complex());
    let nu_d = upstairs.nu(b2);
    let fz_push = SectionFunctor::new(f_z, &nu_d);
    let dst = fz_push.complex().clone();
    let push_nu_c = SectionFunctor::new(&downstairs.j, g1.complex());
    let push_nu_d = SectionFunctor::new(&upstairs.j, b2);

    let lo = src.lo().min(dst.lo());
    let hi = src.hi().max(dst.hi());
    let mats: Vec<(i64, SheafMap)> = (lo..=hi)
        .map(|k| {
            let ms: Vec<Matrix> = (0..z1.n())
                .map(|zi| {
                    let q = i1.apply(zi);
                    // coordinates of a family over the downstairs open piece
                    let ex = push_nu_c.basis(q, k);
                    let v_blocks = stalk_blocks(g1.complex(), push_nu_c.mask(q), k);
                    // reglue to coordinates over each upstairs closed point
                    let mut stacked = Matrix::zero(field, 0, ex.cols());
                    for (zi2, _, _) in stalk_blocks(&nu_d, fz_push.mask(zi), k) {
                        let q2 = i2.apply(zi2);
                        let mut fam = Matrix::zero(field, 0, blocks_total(&v_blocks));
                        for (x2, _, _) in stalk_blocks(b2, push_nu_d.mask(q2), k) {
                            let x = f_u.apply(x2);
                            let &(_, xoff, _xd) = v_blocks
                                .iter()
                                .find(|&&(p, _, _)| p == x)
                                .expect("image point lies in the downstairs preimage");
                            // inside the x-block, pick the value at x2
                            let xb = g1.basis(x, k);
                            let inner = stalk_blocks(b2, g1.mask(x), k);
                            let &(_, ioff, id) = inner
                                .iter()
                                .find(|&&(p, _, _)| p == x2)
                                .expect("point lies in its own fiber neighborhood");
                            let pick =
                                row_select(field, blocks_total(&inner), ioff, id).mul(&xb);
                            let mut wide =
                                Matrix::zero(field, pick.rows(), blocks_total(&v_blocks));
                            for r in 0..pick.rows() {
                                for c in 0..pick.cols() {
                                    wide.set(r, xoff + c, pick.get(r, c));
                                }
                            }
                            fam = fam.vstack(&wide);
                        }
                        let m = push_nu_d
                            .basis(q2, k)
                            .solve(&fam)
                            .expect("reglued family stays compatible");
                        stacked = stacked.vstack(&m.mul(&ex));
                    }
                    fz_push
                        .basis(zi, k)
                        .solve(&stacked)
                        .expect("reglued family is compatible over the closed part")
                })
                .collect();
            (k, SheafMap::new(src.sheaf_at(k), dst.sheaf_at(k), ms).expect("interchange degree"))
        })
        .collect();
    ShMap::new(src, dst, mats).expect("right interchange map")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use tame_poset::covering_map;
    use tame_poset::gen::{random_shcomplex, random_shmap};

    #[test]
    fn the_section_adjunction_is_strict() {
        let f = covering_map(2, 2).unwrap();
        let field = Field::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..4 {
            let g = random_shcomplex(&mut rng, f.dst(), field, -1, 3, 2);
            let c = random_shcomplex(&mut rng, f.src(), field, 0, 2, 2);
            let part = pullback_part(&f);
            let unit = (part.unit)(&g);
            let counit = (part.counit)(&c);
            // left triangle: (counit at pullback g) . pullback(unit) = id
            let left = strict_counit(&SectionFunctor::new(&f, &ShComplex::pullback(&f, &g)))
                .compose(&ShMap::pullback(&f, &unit));
            assert!(left.sub(&ShMap::identity(&ShComplex::pullback(&f, &g))).is_zero());
            // right triangle: sections(counit) . unit at sections = id
            let push = SectionFunctor::new(&f, &c);
            let pull_push = ShComplex::pullback(&f, push.complex());
            let pp = SectionFunctor::new(&f, &pull_push);
            let right = pp
                .on_map(&push, &counit)
                .compose(&strict_unit(push.complex(), &pp));
            assert!(right.sub(&ShMap::identity(push.complex())).is_zero());
        }
    }

    #[test]
    fn strict_round_trips_are_degreewise_isomorphisms() {
        let dec = OpenClosedDecomposition::pseudodisk_origin(3).unwrap();
        let field = Field::new(2).unwrap();
        let ctx = StrictSheafRecollement::new(dec.clone(), field);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..4 {
            let f = random_shcomplex(&mut rng, dec.ambient(), field, -1, 3, 2);
            let kappa = ctx.certified_roundtrip(&f).unwrap();
            for x in 0..dec.ambient().n() {
                assert!(kappa.stalk(x).is_degreewise_iso());
            }
        }
    }

    #[test]
    fn functorial_pushforwards_compose(){
        let f = covering_map(2, 3).unwrap();
        let field = Field::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = random_shcomplex(&mut rng, f.src(), field, 0, 3, 2);
        let b = random_shcomplex(&mut rng, f.src(), field, 0, 3, 2);
        let c = random_shcomplex(&mut rng, f.src(), field, 0, 3, 2);
        let m1 = random_shmap(&mut rng, &a, &b);
        let m2 = random_shmap(&mut rng, &b, &c);
        let pa = SectionFunctor::new(&f, &a);
        let pb = SectionFunctor::new(&f, &b);
        let pc = SectionFunctor::new(&f, &c);
        let lhs = pa.on_map(&pc, &m2.compose(&m1));
        let rhs = pb.on_map(&pc, &m2).compose(&pa.on_map(&pb, &m1));
        assert!(lhs.sub(&rhs).is_zero());
    }
}
