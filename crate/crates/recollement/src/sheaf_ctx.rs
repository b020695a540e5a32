//! Complexes on a split finite space as a gluing context.
//!
//! [`ShCat`] makes complexes on one fixed space into a [`CatPart`], and
//! [`SheafRecollement`] wires the ambient space, the closed part, and the
//! open part together with derived open pushforwards: the comparison
//! functor is the closed restriction of the section-level model, and
//! reconstruction is the certified kernel gluing.

use crate::context::{CatPart, Recollement};
use crate::triple::{self, Triple};
use crate::RecError;
use tame_complex::{Field, Matrix};
use tame_poset::{
    closed_restrict, extend_zero_closed, extend_zero_open, open_restrict, open_unit,
    pushforward_map, OpenClosedDecomposition, Poset, Pushforward, ShComplex, ShMap,
};

/// Complexes on one fixed finite space, as one side of a split.
#[derive(Clone)]
pub struct ShCat {
    base: Poset,
    field: Field,
}

impl ShCat {
    pub fn new(base: Poset, field: Field) -> Self {
        ShCat { base, field }
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

impl CatPart for ShCat {
    type Obj = ShComplex;
    type Map = ShMap;

    fn identity(&self, x: &ShComplex) -> ShMap {
        ShMap::identity(x)
    }

    fn compose(&self, f: &ShMap, g: &ShMap) -> ShMap {
        f.compose(g)
    }

    fn equal(&self, f: &ShMap, g: &ShMap) -> bool {
        f.src() == g.src() && f.dst() == g.dst() && f.sub(g).is_zero()
    }

    fn is_qiso(&self, f: &ShMap) -> bool {
        f.is_stalkwise_qiso()
    }

    fn invert(&self, f: &ShMap) -> Option<ShMap> {
        let src = f.src();
        let dst = f.dst();
        let lo = src.lo().min(dst.lo());
        let hi = src.hi().max(dst.hi());
        let mut mats = Vec::new();
        for k in lo..=hi {
            let fk = f.at(k);
            let ms: Option<Vec<Matrix>> =
                (0..self.base.n()).map(|x| fk.at(x).inverse()).collect();
            let ms = ms?;
            let sm = tame_poset::SheafMap::new(dst.sheaf_at(k), src.sheaf_at(k), ms).ok()?;
            mats.push((k, sm));
        }
        ShMap::new(dst.clone(), src.clone(), mats).ok()
    }

    fn induces_identity(&self, f: &ShMap) -> bool {
        if f.src() != f.dst() {
            return false;
        }
        (0..self.base.n()).all(|x| {
            let cm = f.stalk(x);
            let c = cm.src();
            (c.lo()..=c.hi()).all(|k| {
                let h = cm.h_matrix(k);
                h.rows() == h.cols() && h == Matrix::identity(self.field, h.rows())
            })
        })
    }

    fn zero(&self) -> ShComplex {
        ShComplex::zero(&self.base, self.field)
    }

    fn is_trivial(&self, x: &ShComplex) -> bool {
        (0..self.base.n()).all(|p| x.stalk(p).is_acyclic())
    }
}

/// The derived split context on a decomposed finite space.
pub struct SheafRecollement {
    dec: OpenClosedDecomposition,
    p0: ShCat,
    p1: ShCat,
    pa: ShCat,
}

impl SheafRecollement {
    pub fn new(dec: OpenClosedDecomposition, field: Field) -> Self {
        let (z, _) = dec.closed_part();
        let (u, _) = dec.open_part();
        let ambient = dec.ambient().clone();
        SheafRecollement {
            dec,
            p0: ShCat::new(z, field),
            p1: ShCat::new(u, field),
            pa: ShCat::new(ambient, field),
        }
    }

    pub fn dec(&self) -> &OpenClosedDecomposition {
        &self.dec
    }

    fn triple(&self, a: &ShComplex, b: &ShComplex, theta: &ShMap) -> Result<Triple, RecError> {
        Triple::new(self.dec.clone(), a.clone(), b.clone(), theta.clone())
    }
}

impl Recollement for SheafRecollement {
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
        let (_z, i) = self.dec.closed_part();
        ShMap::pullback(&i, f)
    }

    fn l1(&self, f: &ShComplex) -> ShComplex {
        open_restrict(&self.dec, f)
    }

    fn l1_map(&self, f: &ShMap) -> ShMap {
        let (_u, j) = self.dec.open_part();
        ShMap::pullback(&j, f)
    }

    fn i0(&self, a: &ShComplex) -> ShComplex {
        extend_zero_closed(&self.dec, a)
    }

    fn i1(&self, b: &ShComplex) -> ShComplex {
        let (_u, j) = self.dec.open_part();
        Pushforward::new(&j, b).complex().clone()
    }

    fn nu(&self, b: &ShComplex) -> ShComplex {
        closed_restrict(&self.dec, &self.i1(b))
    }

    fn nu_map(&self, g: &ShMap) -> ShMap {
        let (_u, j) = self.dec.open_part();
        let px = Pushforward::new(&j, g.src());
        let py = Pushforward::new(&j, g.dst());
        self.l0_map(&pushforward_map(g, &px, &py))
    }

    fn theta(&self, f: &ShComplex) -> ShMap {
        let (_z, i) = self.dec.closed_part();
        ShMap::pullback(&i, &open_unit(&self.dec, f).unit)
    }

    fn open_identity_witness(&self, b: &ShComplex) -> ShMap {
        let (_u, j) = self.dec.open_part();
        let ext = extend_zero_open(&self.dec, b);
        ShMap::pullback(&j, &open_unit(&self.dec, &ext).unit)
    }

    fn reconstruct(
        &self,
        a: &ShComplex,
        b: &ShComplex,
        theta: &ShMap,
    ) -> Result<ShComplex, RecError> {
        let t = self.triple(a, b, theta)?;
        Ok(triple::reconstruct(&t).complex)
    }

    fn certified_roundtrip(&self, f: &ShComplex) -> Result<ShMap, RecError> {
        triple::roundtrip(&self.dec, f).map(|rt| rt.kappa)
    }

    fn glue_triple_map(
        &self,
        src: (&ShComplex, &ShComplex, &ShMap),
        dst: (&ShComplex, &ShComplex, &ShMap),
        alpha: &ShMap,
        beta: &ShMap,
    ) -> Result<ShMap, RecError> {
        let tx = self.triple(src.0, src.1, src.2)?;
        let ty = self.triple(dst.0, dst.1, dst.2)?;
        let rx = triple::reconstruct(&tx);
        let ry = triple::reconstruct(&ty);
        triple::glue_map(&tx, &ty, &rx, &ry, alpha, beta)
    }
}
