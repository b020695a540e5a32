//! A complex over a split space as a triple of local data.
//!
//! Splitting a finite space into a down-closed part `Z` and its open
//! complement `U` turns a complex `F` into three pieces: the closed
//! restriction `A`, the open restriction `B`, and a comparison map
//! `theta` from `A` into the closed restriction of the open pushforward
//! of `B`.  Reconstruction forms the degreewise kernel of the difference
//! of the two canonical maps into that closed restriction, extended back
//! over the whole space; because one leg is degreewise surjective, the
//! strict kernel computes the homotopy pullback, and the round trip is
//! certified sample by sample by exhibiting a stalkwise quasi-isomorphism.

use crate::RecError;
use tame_complex::Matrix;
use tame_poset::{
    closed_restrict, closed_unit, open_restrict, open_unit, pushforward_map, OpenClosedDecomposition,
    Pushforward, ShComplex, ShMap, SheafMap,
};

/// Local gluing data over a fixed open/closed split: a complex on the
/// closed part, a complex on the open part, and a comparison map from the
/// former into the closed restriction of the open pushforward of the
/// latter.  The pushforward is carried along as a section-level model so
/// maps of triples can be pushed with it.
pub struct Triple {
    dec: OpenClosedDecomposition,
    a: ShComplex,
    b: ShComplex,
    push: Pushforward,
    theta: ShMap,
}

impl Triple {
    pub fn new(
        dec: OpenClosedDecomposition,
        a: ShComplex,
        b: ShComplex,
        theta: ShMap,
    ) -> Result<Self, RecError> {
        let (z, _i) = dec.closed_part();
        let (u, j) = dec.open_part();
        if a.base() != &z {
            return Err(RecError::NotCompatible("closed part lives on the wrong space".into()));
        }
        if b.base() != &u {
            return Err(RecError::NotCompatible("open part lives on the wrong space".into()));
        }
        if a.twist() != b.twist() {
            return Err(RecError::NotCompatible("the two parts carry different twists".into()));
        }
        let push = Pushforward::new(&j, &b);
        let target = closed_restrict(&dec, push.complex());
        if theta.src() != &a || theta.dst() != &target {
            return Err(RecError::NotCompatible("comparison map has the wrong endpoints".into()));
        }
        Ok(Triple { dec, a, b, push, theta })
    }

    fn from_parts(
        dec: OpenClosedDecomposition,
        a: ShComplex,
        b: ShComplex,
        push: Pushforward,
        theta: ShMap,
    ) -> Self {
        Triple { dec, a, b, push, theta }
    }

    pub fn dec(&self) -> &OpenClosedDecomposition {
        &self.dec
    }

    pub fn closed_piece(&self) -> &ShComplex {
        &self.a
    }

    pub fn open_piece(&self) -> &ShComplex {
        &self.b
    }

    pub fn pushforward(&self) -> &Pushforward {
        &self.push
    }

    pub fn comparison(&self) -> &ShMap {
        &self.theta
    }
}

/// A decomposed complex: the triple together with the unit map from the
/// original complex into the open pushforward of its open restriction,
/// which the round trip needs.
pub struct Decomposition {
    pub triple: Triple,
    pub unit: ShMap,
}

/// Split `f` into its triple of local data.
pub fn decompose(dec: &OpenClosedDecomposition, f: &ShComplex) -> Decomposition {
    let a = closed_restrict(dec, f);
    let b = open_restrict(dec, f);
    let ou = open_unit(dec, f);
    let (_z, i) = dec.closed_part();
    let theta = ShMap::pullback(&i, &ou.unit);
    Decomposition { triple: Triple::from_parts(dec.clone(), a, b, ou.push, theta), unit: ou.unit }
}

/// The triple whose open part vanishes; it reconstructs to the extension
/// of `a` by zero off the closed part.
pub fn triple_from_closed(dec: &OpenClosedDecomposition, a: &ShComplex) -> Triple {
    let (u, j) = dec.open_part();
    let b = {
        let mut z = ShComplex::zero(&u, a.field());
        z = z.twisted(a.twist());
        z
    };
    let push = Pushforward::new(&j, &b);
    let target = closed_restrict(dec, push.complex());
    let theta = ShMap::zero_map(a, &target);
    Triple::from_parts(dec.clone(), a.clone(), b, push, theta)
}

/// The triple whose closed part vanishes; it reconstructs to the extension
/// of `b` by zero off the open part.
pub fn triple_from_open(dec: &OpenClosedDecomposition, b: &ShComplex) -> Triple {
    let (z, _i) = dec.closed_part();
    let (_u, j) = dec.open_part();
    let a = {
        let mut za = ShComplex::zero(&z, b.field());
        za = za.twisted(b.twist());
        za
    };
    let push = Pushforward::new(&j, b);
    let target = closed_restrict(dec, push.complex());
    let theta = ShMap::zero_map(&a, &target);
    Triple::from_parts(dec.clone(), a, b.clone(), push, theta)
}

/// Ambient index -> index inside the closed subspace, where defined.
fn closed_index(dec: &OpenClosedDecomposition) -> Vec<Option<usize>> {
    let (z, i) = dec.closed_part();
    let mut out = vec![None; dec.ambient().n()];
    for zi in 0..z.n() {
        out[i.apply(zi)] = Some(zi);
    }
    out
}

/// Extend a map of complexes on the closed part by zero, between already
/// extended endpoints.
fn extend_closed_map(
    dec: &OpenClosedDecomposition,
    phi: &ShMap,
    src_ext: &ShComplex,
    dst_ext: &ShComplex,
) -> ShMap {
    let field = src_ext.field();
    let zidx = closed_index(dec);
    let lo = src_ext.lo().min(dst_ext.lo());
    let hi = src_ext.hi().max(dst_ext.hi());
    let mats = (lo..=hi)
        .map(|k| {
            let pk = phi.at(k);
            let ms: Vec<Matrix> = (0..dec.ambient().n())
                .map(|x| match zidx[x] {
                    Some(zi) => pk.at(zi).clone(),
                    None => Matrix::zero(field, dst_ext.dim(k, x), src_ext.dim(k, x)),
                })
                .collect();
            (k, SheafMap::new(src_ext.sheaf_at(k), dst_ext.sheaf_at(k), ms).expect("extended map"))
        })
        .collect();
    ShMap::new(src_ext.clone(), dst_ext.clone(), mats).expect("extension by zero of a map")
}

/// The reconstructed complex, with the kernel presentation it came from.
pub struct Reconstruction {
    pub complex: ShComplex,
    /// Inclusion of the reconstruction into `sum`.
    pub incl: ShMap,
    /// Open pushforward of the open part, direct sum the extended closed
    /// part, in that order.
    pub sum: ShComplex,
    /// Difference of the two canonical maps into the extended closed
    /// restriction of the open pushforward; the reconstruction is its
    /// degreewise kernel.
    pub delta: ShMap,
}

/// Glue a triple back into a complex on the ambient space: the degreewise
/// kernel of `(restriction-of-pushforward leg) - (comparison leg)` on the
/// pushforward plus the extended closed part.  The first leg is degreewise
/// surjective, so this strict kernel also computes the homotopy pullback.
pub fn reconstruct(t: &Triple) -> Reconstruction {
    kernel_glue(&t.dec, t.push.complex(), &t.a, &t.theta)
}

/// The kernel assembly behind [`reconstruct`], usable with any ambient
/// model `rj` of the open pushforward, as long as `theta` lands in its
/// closed restriction.
pub(crate) fn kernel_glue(
    dec: &OpenClosedDecomposition,
    rj: &ShComplex,
    a: &ShComplex,
    theta: &ShMap,
) -> Reconstruction {
    let rj = rj.clone();
    let ia = tame_poset::extend_zero_closed(dec, a);
    let restricted = closed_restrict(dec, &rj);
    let target = tame_poset::extend_zero_closed(dec, &restricted);
    let leg1 = closed_unit(dec, &rj);
    let leg2 = extend_closed_map(dec, theta, &ia, &target);
    let sum = rj.direct_sum(&ia);

    let lo = sum.lo().min(target.lo());
    let hi = sum.hi().max(target.hi());
    let mats = (lo..=hi)
        .map(|k| {
            let l1 = leg1.at(k);
            let l2 = leg2.at(k);
            let ms: Vec<Matrix> =
                (0..dec.ambient().n()).map(|x| l1.at(x).hstack(&l2.at(x).neg())).collect();
            (k, SheafMap::new(sum.sheaf_at(k), target.sheaf_at(k), ms).expect("difference of legs"))
        })
        .collect();
    let delta = ShMap::new(sum.clone(), target, mats).expect("gluing difference map");
    let (complex, incl) = delta.kernel_complex();
    Reconstruction { complex, incl, sum, delta }
}

/// A certified round trip: the decomposition, its reconstruction, and a
/// stalkwise quasi-isomorphism from the original complex to the
/// reconstruction.
pub struct RoundTrip {
    pub dec: Decomposition,
    pub rec: Reconstruction,
    pub kappa: ShMap,
}

/// Decompose, reconstruct, and certify: build the canonical comparison
/// from `f` into the reconstruction and check it is a stalkwise
/// quasi-isomorphism.  The comparison pairs the unit into the open
/// pushforward with the unit into the extended closed restriction; its
/// two images in the gluing target agree strictly, so it factors through
/// the kernel.
pub fn roundtrip(dec: &OpenClosedDecomposition, f: &ShComplex) -> Result<RoundTrip, RecError> {
    let d = decompose(dec, f);
    let r = reconstruct(&d.triple);
    let kappa = certify_roundtrip(dec, f, &r, &d.unit)?;
    Ok(RoundTrip { dec: d, rec: r, kappa })
}

/// Pair a unit into the open-pushforward model with the closed unit, check
/// the two legs agree in the gluing target, factor through the kernel, and
/// certify the factored map is a stalkwise quasi-isomorphism.
pub(crate) fn certify_roundtrip(
    dec: &OpenClosedDecomposition,
    f: &ShComplex,
    r: &Reconstruction,
    unit: &ShMap,
) -> Result<ShMap, RecError> {
    let cu = closed_unit(dec, f);

    let sum = &r.sum;
    let lo = f.lo().min(sum.lo());
    let hi = f.hi().max(sum.hi());
    let pair_mats: Vec<(i64, SheafMap)> = (lo..=hi)
        .map(|k| {
            let um = unit.at(k);
            let cm = cu.at(k);
            let ms: Vec<Matrix> =
                (0..dec.ambient().n()).map(|x| um.at(x).vstack(cm.at(x))).collect();
            (k, SheafMap::new(f.sheaf_at(k), sum.sheaf_at(k), ms).expect("paired units"))
        })
        .collect();
    let pair = ShMap::new(f.clone(), sum.clone(), pair_mats).expect("paired unit map");

    if !r.delta.compose(&pair).is_zero() {
        return Err(RecError::Mismatch("the two unit legs disagree in the gluing target".into()));
    }

    let kappa_mats: Vec<(i64, SheafMap)> = (lo..=hi)
        .map(|k| {
            let ik = r.incl.at(k);
            let pk = pair.at(k);
            let ms: Vec<Matrix> = (0..dec.ambient().n())
                .map(|x| {
                    ik.at(x)
                        .solve(pk.at(x))
                        .expect("paired units factor through the kernel")
                })
                .collect();
            (k, SheafMap::new(f.sheaf_at(k), r.complex.sheaf_at(k), ms).expect("factored map"))
        })
        .collect();
    let kappa =
        ShMap::new(f.clone(), r.complex.clone(), kappa_mats).expect("round trip comparison");

    if !kappa.is_stalkwise_qiso() {
        return Err(RecError::NotQuasiIso("round trip comparison".into()));
    }
    Ok(kappa)
}

/// Glue a strictly compatible pair of maps between triples into a map of
/// reconstructions.  Compatibility means the comparison squares commute on
/// the nose; incompatible data is refused.
pub fn glue_map(
    tx: &Triple,
    ty: &Triple,
    rx: &Reconstruction,
    ry: &Reconstruction,
    alpha: &ShMap,
    beta: &ShMap,
) -> Result<ShMap, RecError> {
    let dec = &tx.dec;
    if alpha.src() != &tx.a || alpha.dst() != &ty.a {
        return Err(RecError::NotCompatible("closed-part map has the wrong endpoints".into()));
    }
    if beta.src() != &tx.b || beta.dst() != &ty.b {
        return Err(RecError::NotCompatible("open-part map has the wrong endpoints".into()));
    }
    let rj_beta = pushforward_map(beta, &tx.push, &ty.push);
    let (_z, i) = dec.closed_part();
    let lhs = ty.theta.compose(alpha);
    let rhs = ShMap::pullback(&i, &rj_beta).compose(&tx.theta);
    if !lhs.sub(&rhs).is_zero() {
        return Err(RecError::NotCompatible("comparison square does not commute strictly".into()));
    }
    glued_kernel_map(dec, rx, ry, &rj_beta, alpha)
}

/// Carry a compatible pair `(alpha on the closed part, rj_beta on the
/// ambient open-pushforward models)` through to the kernels; the caller is
/// responsible for having checked the comparison square.
pub(crate) fn glued_kernel_map(
    dec: &OpenClosedDecomposition,
    rx: &Reconstruction,
    ry: &Reconstruction,
    rj_beta: &ShMap,
    alpha: &ShMap,
) -> Result<ShMap, RecError> {
    let ia_x = tame_poset::extend_zero_closed(dec, alpha.src());
    let ia_y = tame_poset::extend_zero_closed(dec, alpha.dst());
    let ia_alpha = extend_closed_map(dec, alpha, &ia_x, &ia_y);

    let field = rx.sum.field();
    let lo = rx.complex.lo().min(ry.complex.lo());
    let hi = rx.complex.hi().max(ry.complex.hi());
    let mats: Vec<(i64, SheafMap)> = (lo..=hi)
        .map(|k| {
            let bm = rj_beta.at(k);
            let am = ia_alpha.at(k);
            let ix = rx.incl.at(k);
            let iy = ry.incl.at(k);
            let ms: Vec<Matrix> = (0..dec.ambient().n())
                .map(|x| {
                    let sigma = Matrix::block_diag(field, &[bm.at(x), am.at(x)]);
                    iy.at(x)
                        .solve(&sigma.mul(ix.at(x)))
                        .expect("glued map preserves the kernel")
                })
                .collect();
            (
                k,
                SheafMap::new(rx.complex.sheaf_at(k), ry.complex.sheaf_at(k), ms)
                    .expect("glued degree"),
            )
        })
        .collect();
    ShMap::new(rx.complex.clone(), ry.complex.clone(), mats)
        .map_err(|e| RecError::Mismatch(format!("glued map is not a map of complexes: {e}")))
}

/// Whether the split detects quasi-isomorphisms for this sample: the two
/// restrictions of `phi` are stalkwise quasi-isomorphisms exactly when
/// `phi` itself is.
pub fn jointly_conservative(dec: &OpenClosedDecomposition, phi: &ShMap) -> bool {
    let (_z, i) = dec.closed_part();
    let (_u, j) = dec.open_part();
    let parts = ShMap::pullback(&i, phi).is_stalkwise_qiso()
        && ShMap::pullback(&j, phi).is_stalkwise_qiso();
    parts == phi.is_stalkwise_qiso()
}

#[cfg(test)]
mod tests {
    use super::*;
    use tame_complex::Field;
    use tame_poset::pseudodisk;

    #[test]
    fn closed_only_triples_reconstruct_to_the_closed_extension() {
        let dec = OpenClosedDecomposition::pseudodisk_origin(2).unwrap();
        let (z, _i) = dec.closed_part();
        let a = ShComplex::constant(&z, Field::new(3).unwrap(), 2);
        let t = triple_from_closed(&dec, &a);
        let r = reconstruct(&t);
        assert_eq!(r.complex, tame_poset::extend_zero_closed(&dec, &a));
    }

    #[test]
    fn decompositions_validate_their_endpoints() {
        let dec = OpenClosedDecomposition::pseudodisk_origin(2).unwrap();
        let (z, _) = dec.closed_part();
        let (u, _) = dec.open_part();
        let field = Field::new(3).unwrap();
        let a = ShComplex::constant(&z, field, 1);
        let b = ShComplex::constant(&u, field, 1);
        let bad = ShMap::zero_map(&a, &a);
        assert!(Triple::new(dec.clone(), a.clone(), b, bad).is_err());
        let whole = ShComplex::constant(&pseudodisk(2).unwrap(), field, 1);
        let d = decompose(&dec, &whole);
        assert_eq!(d.triple.closed_piece().base(), &z);
    }
}
