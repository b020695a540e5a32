//! The shared gluing interface.
//!
//! Gluing code runs against two abstractions: a [`CatPart`] is one side
//! of a split (a category of complexes with computable identities,
//! composition, and quasi-isomorphism tests), and a [`Recollement`] wires
//! an ambient part to a closed part and an open part through
//! localizations, inclusions, the comparison functor `nu`, and certified
//! reconstruction.  The same functor- and adjunction-gluing code then
//! drives both the sheaf instance and the level-system instance.

use crate::RecError;

/// One side of a split: objects and maps of a category of complexes,
/// with enough computable structure for gluing code.
pub trait CatPart {
    type Obj: Clone + PartialEq;
    type Map: Clone;

    fn identity(&self, x: &Self::Obj) -> Self::Map;
    /// `f` after `g`.
    fn compose(&self, f: &Self::Map, g: &Self::Map) -> Self::Map;
    fn equal(&self, f: &Self::Map, g: &Self::Map) -> bool;
    fn is_qiso(&self, f: &Self::Map) -> bool;
    /// Strict degreewise inverse, where one exists.
    fn invert(&self, f: &Self::Map) -> Option<Self::Map>;
    /// Does an endomorphism act as the identity on cohomology?
    fn induces_identity(&self, f: &Self::Map) -> bool;
    fn zero(&self) -> Self::Obj;
    /// Equivalent to the zero object.
    fn is_trivial(&self, x: &Self::Obj) -> bool;
}

pub type Obj<P> = <P as CatPart>::Obj;
pub type MapOf<P> = <P as CatPart>::Map;

/// An ambient category split into a closed part and an open part: the
/// localizations, the inclusions, the composite `nu = l0 . i1` with its
/// functorial action, the canonical comparison map of every ambient
/// object, and certified reconstruction from triples.
pub trait Recollement {
    type P0: CatPart;
    type P1: CatPart;
    type PA: CatPart;

    fn part0(&self) -> &Self::P0;
    fn part1(&self) -> &Self::P1;
    fn ambient_part(&self) -> &Self::PA;

    fn l0(&self, f: &Obj<Self::PA>) -> Obj<Self::P0>;
    fn l0_map(&self, f: &MapOf<Self::PA>) -> MapOf<Self::P0>;
    fn l1(&self, f: &Obj<Self::PA>) -> Obj<Self::P1>;
    fn l1_map(&self, f: &MapOf<Self::PA>) -> MapOf<Self::P1>;
    fn i0(&self, a: &Obj<Self::P0>) -> Obj<Self::PA>;
    fn i1(&self, b: &Obj<Self::P1>) -> Obj<Self::PA>;
    fn nu(&self, b: &Obj<Self::P1>) -> Obj<Self::P0>;
    fn nu_map(&self, g: &MapOf<Self::P1>) -> MapOf<Self::P0>;
    /// The canonical comparison `l0(f) -> nu(l1(f))`.
    fn theta(&self, f: &Obj<Self::PA>) -> MapOf<Self::P0>;
    /// The canonical quasi-isomorphism `b -> l1(i1(b))`.
    fn open_identity_witness(&self, b: &Obj<Self::P1>) -> MapOf<Self::P1>;

    fn reconstruct(
        &self,
        a: &Obj<Self::P0>,
        b: &Obj<Self::P1>,
        theta: &MapOf<Self::P0>,
    ) -> Result<Obj<Self::PA>, RecError>;
    /// A certified quasi-isomorphism `f -> reconstruct(l0 f, l1 f, theta f)`.
    fn certified_roundtrip(&self, f: &Obj<Self::PA>) -> Result<MapOf<Self::PA>, RecError>;
    /// Glue a strictly compatible pair into a map of reconstructions;
    /// refuses data whose comparison square fails.
    fn glue_triple_map(
        &self,
        src: (&Obj<Self::P0>, &Obj<Self::P1>, &MapOf<Self::P0>),
        dst: (&Obj<Self::P0>, &Obj<Self::P1>, &MapOf<Self::P0>),
        alpha: &MapOf<Self::P0>,
        beta: &MapOf<Self::P1>,
    ) -> Result<MapOf<Self::PA>, RecError>;
}

/// The structural identities of a split context, checked on samples:
/// `l0 . i0` is the identity, `l1 . i0` is trivial, `l1 . i1` is the
/// identity up to the canonical witness, and every sampled ambient object
/// round-trips through its triple.
pub fn context_invariants<C: Recollement>(
    ctx: &C,
    ambient: &[Obj<C::PA>],
    closed: &[Obj<C::P0>],
    open: &[Obj<C::P1>],
) -> Result<(), RecError> {
    for a in closed {
        if ctx.l0(&ctx.i0(a)) != *a {
            return Err(RecError::Mismatch("closed inclusion does not restrict back".into()));
        }
        if !ctx.part1().is_trivial(&ctx.l1(&ctx.i0(a))) {
            return Err(RecError::Mismatch(
                "open restriction of a closed extension is not trivial".into(),
            ));
        }
    }
    for b in open {
        if !ctx.part1().is_qiso(&ctx.open_identity_witness(b)) {
            return Err(RecError::NotQuasiIso("open part does not restrict back".into()));
        }
    }
    for f in ambient {
        ctx.certified_roundtrip(f)?;
    }
    Ok(())
}

/// Functor data into a split context: a functor into each part and a
/// transformation `eta` from the closed component into `nu` of the open
/// component.  Gluing evaluates to reconstructions; a map is glued only
/// when `eta` is natural at it, strictly.
pub struct GluedFunctor<'a, S, SM, C: Recollement> {
    pub ctx: &'a C,
    pub f0: Box<dyn Fn(&S) -> Obj<C::P0> + 'a>,
    pub f0_map: Box<dyn Fn(&SM) -> MapOf<C::P0> + 'a>,
    pub f1: Box<dyn Fn(&S) -> Obj<C::P1> + 'a>,
    pub f1_map: Box<dyn Fn(&SM) -> MapOf<C::P1> + 'a>,
    pub eta: Box<dyn Fn(&S) -> MapOf<C::P0> + 'a>,
}

impl<'a, S, SM, C: Recollement> GluedFunctor<'a, S, SM, C> {
    pub fn object(&self, x: &S) -> Result<Obj<C::PA>, RecError> {
        self.ctx.reconstruct(&(self.f0)(x), &(self.f1)(x), &(self.eta)(x))
    }

    pub fn map(&self, x: &S, y: &S, m: &SM) -> Result<MapOf<C::PA>, RecError> {
        let sx = ((self.f0)(x), (self.f1)(x), (self.eta)(x));
        let sy = ((self.f0)(y), (self.f1)(y), (self.eta)(y));
        self.ctx.glue_triple_map(
            (&sx.0, &sx.1, &sx.2),
            (&sy.0, &sy.1, &sy.2),
            &(self.f0_map)(m),
            &(self.f1_map)(m),
        )
    }
}

/// One componentwise adjunction between matching parts of two contexts.
pub struct AdjunctionPart<'a, P: CatPart, Q: CatPart> {
    pub left: Box<dyn Fn(&P::Obj) -> Q::Obj + 'a>,
    pub left_map: Box<dyn Fn(&P::Map) -> Q::Map + 'a>,
    pub right: Box<dyn Fn(&Q::Obj) -> P::Obj + 'a>,
    pub right_map: Box<dyn Fn(&Q::Map) -> P::Map + 'a>,
    /// `x -> right(left(x))`.
    pub unit: Box<dyn Fn(&P::Obj) -> P::Map + 'a>,
    /// `left(right(y)) -> y`.
    pub counit: Box<dyn Fn(&Q::Obj) -> Q::Map + 'a>,
}

impl<'a, P: CatPart, Q: CatPart> AdjunctionPart<'a, P, Q> {
    /// Both triangle identities at a pair of samples, on cohomology.
    pub fn triangles_hold(&self, p: &P, q: &Q, x: &P::Obj, y: &Q::Obj) -> bool {
        let left_tri =
            q.compose(&(self.counit)(&(self.left)(x)), &(self.left_map)(&(self.unit)(x)));
        let right_tri =
            p.compose(&(self.right_map)(&(self.counit)(y)), &(self.unit)(&(self.right)(y)));
        q.induces_identity(&left_tri) && p.induces_identity(&right_tri)
    }
}

/// Adjunction data glued over two split contexts: componentwise
/// adjunctions on the closed and open parts, an interchange map for the
/// left adjoints, and an invertible interchange for the right adjoints.
pub struct GluedAdjunction<'a, C: Recollement, D: Recollement> {
    pub src: &'a C,
    pub dst: &'a D,
    pub part0: AdjunctionPart<'a, C::P0, D::P0>,
    pub part1: AdjunctionPart<'a, C::P1, D::P1>,
    /// `left0(nu_src(b)) -> nu_dst(left1(b))`.
    pub chi_left: Box<dyn Fn(&Obj<C::P1>) -> MapOf<D::P0> + 'a>,
    /// `nu_src(right1(b')) -> right0(nu_dst(b'))`; must be invertible.
    pub chi_right: Box<dyn Fn(&Obj<D::P1>) -> MapOf<C::P0> + 'a>,
}

pub type TripleOf<C> = (Obj<<C as Recollement>::P0>, Obj<<C as Recollement>::P1>, MapOf<<C as Recollement>::P0>);

impl<'a, C: Recollement, D: Recollement> GluedAdjunction<'a, C, D> {
    /// The interchange hypothesis at samples: the right-adjoint square
    /// must be invertible; failures are reported, not repaired.
    pub fn check_squares(&self, open_dst: &[Obj<D::P1>]) -> Result<(), RecError> {
        for b in open_dst {
            if self.src.part0().invert(&(self.chi_right)(b)).is_none() {
                return Err(RecError::NotIso("right-adjoint interchange square".into()));
            }
        }
        Ok(())
    }

    /// The left adjoint on triples.
    pub fn left_triple(&self, t: (&Obj<C::P0>, &Obj<C::P1>, &MapOf<C::P0>)) -> TripleOf<D> {
        let a = (self.part0.left)(t.0);
        let b = (self.part1.left)(t.1);
        let th = self.dst.part0().compose(&(self.chi_left)(t.1), &(self.part0.left_map)(t.2));
        (a, b, th)
    }

    /// The right adjoint on triples; fails if the interchange square is
    /// not invertible at this sample.
    pub fn right_triple(
        &self,
        t: (&Obj<D::P0>, &Obj<D::P1>, &MapOf<D::P0>),
    ) -> Result<TripleOf<C>, RecError> {
        let a = (self.part0.right)(t.0);
        let b = (self.part1.right)(t.1);
        let chi = (self.chi_right)(t.1);
        let inv = self
            .src
            .part0()
            .invert(&chi)
            .ok_or_else(|| RecError::NotIso("right-adjoint interchange square".into()))?;
        let th = self.src.part0().compose(&inv, &(self.part0.right_map)(t.2));
        Ok((a, b, th))
    }

    /// The left adjoint on maps of triples, glued in the target context.
    pub fn left_map(
        &self,
        tx: (&Obj<C::P0>, &Obj<C::P1>, &MapOf<C::P0>),
        ty: (&Obj<C::P0>, &Obj<C::P1>, &MapOf<C::P0>),
        alpha: &MapOf<C::P0>,
        beta: &MapOf<C::P1>,
    ) -> Result<MapOf<D::PA>, RecError> {
        let fx = self.left_triple(tx);
        let fy = self.left_triple(ty);
        self.dst.glue_triple_map(
            (&fx.0, &fx.1, &fx.2),
            (&fy.0, &fy.1, &fy.2),
            &(self.part0.left_map)(alpha),
            &(self.part1.left_map)(beta),
        )
    }

    /// The glued unit at a triple, as an ambient map to the round trip
    /// through both adjoints; refuses samples where the unit components
    /// fail the comparison square.
    pub fn glued_unit(
        &self,
        t: (&Obj<C::P0>, &Obj<C::P1>, &MapOf<C::P0>),
    ) -> Result<MapOf<C::PA>, RecError> {
        let ft = self.left_triple(t);
        let gft = self.right_triple((&ft.0, &ft.1, &ft.2))?;
        let u0 = (self.part0.unit)(t.0);
        let u1 = (self.part1.unit)(t.1);
        self.src.glue_triple_map(t, (&gft.0, &gft.1, &gft.2), &u0, &u1)
    }

    /// The glued counit at a target triple.
    pub fn glued_counit(
        &self,
        t: (&Obj<D::P0>, &Obj<D::P1>, &MapOf<D::P0>),
    ) -> Result<MapOf<D::PA>, RecError> {
        let gt = self.right_triple(t)?;
        let fgt = self.left_triple((&gt.0, &gt.1, &gt.2));
        let e0 = (self.part0.counit)(t.0);
        let e1 = (self.part1.counit)(t.1);
        self.dst.glue_triple_map((&fgt.0, &fgt.1, &fgt.2), t, &e0, &e1)
    }

    /// Both glued triangle identities, on cohomology: at a source triple
    /// `t` the composite `counit(F t) . F(unit t)` must act as the
    /// identity, and at a target triple `t2` the composite
    /// `G(counit t2) . unit(G t2)` must act as the identity.
    pub fn triangle_identities(
        &self,
        t: (&Obj<C::P0>, &Obj<C::P1>, &MapOf<C::P0>),
        t2: (&Obj<D::P0>, &Obj<D::P1>, &MapOf<D::P0>),
    ) -> Result<(), RecError> {
        let ft = self.left_triple(t);
        let gft = self.right_triple((&ft.0, &ft.1, &ft.2))?;
        let fu = self.left_map(
            t,
            (&gft.0, &gft.1, &gft.2),
            &(self.part0.unit)(t.0),
            &(self.part1.unit)(t.1),
        )?;
        let eps_ft = self.glued_counit((&ft.0, &ft.1, &ft.2))?;
        let left_tri = self.dst.ambient_part().compose(&eps_ft, &fu);
        if !self.dst.ambient_part().induces_identity(&left_tri) {
            return Err(RecError::Mismatch("left triangle identity fails on cohomology".into()));
        }

        let gt = self.right_triple(t2)?;
        let fgt = self.left_triple((&gt.0, &gt.1, &gt.2));
        let gfgt = self.right_triple((&fgt.0, &fgt.1, &fgt.2))?;
        let e0 = (self.part0.counit)(t2.0);
        let e1 = (self.part1.counit)(t2.1);
        let g_eps = self.src.glue_triple_map(
            (&gfgt.0, &gfgt.1, &gfgt.2),
            (&gt.0, &gt.1, &gt.2),
            &(self.part0.right_map)(&e0),
            &(self.part1.right_map)(&e1),
        )?;
        let u_gt = self.glued_unit((&gt.0, &gt.1, &gt.2))?;
        let right_tri = self.src.ambient_part().compose(&g_eps, &u_gt);
        if !self.src.ambient_part().induces_identity(&right_tri) {
            return Err(RecError::Mismatch("right triangle identity fails on cohomology".into()));
        }
        Ok(())
    }
}

/// The canonical arrow from the closed datum into the open datum through
/// a supplied left adjoint of `nu`: the adjunct of the comparison map of
/// `f`.  The cofiber of this arrow is instance-specific and lives with
/// the instance.
pub fn specialization<C: Recollement>(
    ctx: &C,
    u: &dyn Fn(&Obj<C::P0>) -> Obj<C::P1>,
    adjunct: &dyn Fn(&Obj<C::P0>, &Obj<C::P1>, &MapOf<C::P0>) -> MapOf<C::P1>,
    f: &Obj<C::PA>,
) -> (Obj<C::P1>, Obj<C::P1>, MapOf<C::P1>) {
    let a = ctx.l0(f);
    let b = ctx.l1(f);
    let th = ctx.theta(f);
    let ua = u(&a);
    let sp = adjunct(&a, &b, &th);
    (ua, b, sp)
}
