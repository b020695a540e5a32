//! Operations attached to an open/closed decomposition: the two
//! restrictions, the two zero-extensions, the derived pushforward from the
//! open part, the exceptional pullback, and the localization triangles.

use tame_complex::Matrix;

use crate::complex::{ShComplex, ShMap};
use crate::poset::{OpenClosedDecomposition, Poset};
use crate::resolve::{pushforward_unit, Pushforward};
use crate::sheaf::SheafMap;

/// `j^*`: restriction to the open part.
pub fn open_restrict(dec: &OpenClosedDecomposition, f: &ShComplex) -> ShComplex {
    let (_, j) = dec.open_part();
    ShComplex::pullback(&j, f)
}

/// `i^*`: restriction to the closed part.
pub fn closed_restrict(dec: &OpenClosedDecomposition, f: &ShComplex) -> ShComplex {
    let (_, i) = dec.closed_part();
    ShComplex::pullback(&i, f)
}

/// Extension by zero from the open part.
pub fn extend_zero_open(dec: &OpenClosedDecomposition, f: &ShComplex) -> ShComplex {
    f.extend_by_zero(dec.ambient(), &mask_indices(&dec.u_mask()))
}

/// Extension by zero from the closed part.
pub fn extend_zero_closed(dec: &OpenClosedDecomposition, f: &ShComplex) -> ShComplex {
    f.extend_by_zero(dec.ambient(), &mask_indices(dec.z_mask()))
}

fn mask_indices(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter(|&(_, &b)| b).map(|(i, _)| i).collect()
}

/// The derived pushforward from the open part, with its section models.
pub fn derived_open_pushforward(dec: &OpenClosedDecomposition, f: &ShComplex) -> Pushforward {
    let (_, j) = dec.open_part();
    Pushforward::new(&j, f)
}

/// Counit of the zero-extension/restriction pair: the canonical map from
/// the extension of the restriction back into the complex. Identity over
/// the open part, zero over the closed part.
pub fn open_counit(dec: &OpenClosedDecomposition, f: &ShComplex) -> ShMap {
    let src = extend_zero_open(dec, &open_restrict(dec, f));
    stalkwise_indicator(&src, f, &dec.u_mask())
}

/// Unit of the restriction/extension pair to the closed part: identity over
/// the closed part, zero over the open part.
pub fn closed_unit(dec: &OpenClosedDecomposition, f: &ShComplex) -> ShMap {
    let dst = extend_zero_closed(dec, &closed_restrict(dec, f));
    stalkwise_indicator(f, &dst, dec.z_mask())
}

fn stalkwise_indicator(src: &ShComplex, dst: &ShComplex, mask: &[bool]) -> ShMap {
    let base = src.base().clone();
    let field = src.field();
    let mut mats = Vec::new();
    for k in src.lo().min(dst.lo())..=src.hi().max(dst.hi()) {
        let ms: Vec<Matrix> = (0..base.n())
            .map(|x| {
                if mask[x] {
                    debug_assert_eq!(src.dim(k, x), dst.dim(k, x));
                    Matrix::identity(field, src.dim(k, x))
                } else {
                    Matrix::zero(field, dst.dim(k, x), src.dim(k, x))
                }
            })
            .collect();
        mats.push((k, SheafMap::new(src.sheaf_at(k), dst.sheaf_at(k), ms).expect("indicator degree")));
    }
    ShMap::new(src.clone(), dst.clone(), mats).expect("indicator map")
}

/// The first localization triangle `j_! j^* F -> F -> i_* i^* F`, which is
/// a strict short exact sequence of sheaf complexes, degreewise and
/// stalkwise.
pub fn first_triangle(dec: &OpenClosedDecomposition, f: &ShComplex) -> (ShMap, ShMap) {
    (open_counit(dec, f), closed_unit(dec, f))
}

/// The second localization triangle's data: the derived pushforward of the
/// restriction to the open part, and the canonical map `F -> Rj_* j^* F`.
/// The fiber of its restriction to the closed part is the exceptional
/// pullback; the triangle is exact on cohomology stalkwise.
pub struct OpenUnit {
    pub push: Pushforward,
    pub unit: ShMap,
}

pub fn open_unit(dec: &OpenClosedDecomposition, f: &ShComplex) -> OpenUnit {
    let push = derived_open_pushforward(dec, &open_restrict(dec, f));
    let unit = pushforward_unit(f, &push);
    OpenUnit { push, unit }
}

/// The exceptional pullback to the closed part: the fiber of the restricted
/// canonical map `i^* F -> i^* Rj_* j^* F`. The returned `complex` carries
/// the twist drop prescribed by the decomposition's codimension label;
/// `proj` maps the unlabeled fiber onto `i^* F` and is used stalkwise.
pub struct ExceptionalPullback {
    pub complex: ShComplex,
    pub proj: ShMap,
}

pub fn exceptional_pullback(dec: &OpenClosedDecomposition, f: &ShComplex) -> ExceptionalPullback {
    let OpenUnit { unit, .. } = open_unit(dec, f);
    let (_, i) = dec.closed_part();
    let restricted = ShMap::pullback(&i, &unit);
    let complex = restricted.fiber().twisted(-dec.codim());
    let proj = restricted.fiber_projection();
    ExceptionalPullback { complex, proj }
}

/// External product: pull both complexes to the product space and tensor.
pub fn external_tensor(f: &ShComplex, g: &ShComplex) -> ShComplex {
    let (_prod, pr1, pr2) = Poset::product(f.base(), g.base());
    ShComplex::pullback(&pr1, f).tensor(&ShComplex::pullback(&pr2, g))
}
