//! Twisted cone towers over a divisibility chain of levels and their
//! stabilized colimit.

use tame_complex::{ChainMap, Complex, Matrix};

use crate::{gcd, CyclicError};

/// A map whose target carries one more twist than its source; the level-n
/// object of the tower is the cone of n times the map.
pub struct ChernDatum {
    map: ChainMap,
}

impl ChernDatum {
    pub fn new(map: ChainMap) -> Result<Self, CyclicError> {
        if map.dst().twist() != map.src().twist() + 1 {
            return Err(CyclicError::BadLevels(format!(
                "twist of the target must exceed the source by 1, got {} -> {}",
                map.src().twist(),
                map.dst().twist()
            )));
        }
        Ok(ChernDatum { map })
    }

    pub fn map(&self) -> &ChainMap {
        &self.map
    }

    pub fn src(&self) -> &Complex {
        self.map.src()
    }

    pub fn dst(&self) -> &Complex {
        self.map.dst()
    }
}

/// The stabilized colimit of the cone tower, extracted at the first level
/// killed by the characteristic, together with the witnesses: the cocone
/// projection at that level and the tail transition that kills the shifted
/// source summand.
pub struct ChernColimit {
    pub complex: Complex,
    pub level: u64,
    pub projection: ChainMap,
    pub tail: ChainMap,
}

/// Builds the tower of cones of n·c over a divisibility chain of levels,
/// verifies the strictly commuting transitions (source scaled by the
/// inverse ratio on coprime steps, source killed once the level is
/// divisible by the characteristic), and returns the target complex as the
/// stabilized value.
///
/// Levelwise the tower reads: cone(n·c) for each listed n; once ell | n the
/// scalar dies, the cone splits as shifted-source plus target, and the next
/// transition of the tower is zero on the shifted source and the identity
/// on the target, so only the target survives the tail.
pub fn chern_colimit(datum: &ChernDatum, levels: &[u64]) -> Result<ChernColimit, CyclicError> {
    let ell = datum.map().src().ell();
    let mut sorted: Vec<u64> = levels.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() || sorted[0] == 0 {
        return Err(CyclicError::BadLevels("levels must be positive".into()));
    }
    for w in sorted.windows(2) {
        if w[1] % w[0] != 0 {
            return Err(CyclicError::BadLevels(format!(
                "levels must form a divisibility chain; {} does not divide {}",
                w[0], w[1]
            )));
        }
    }
    let Some(&stable) = sorted.iter().find(|&&n| n % ell == 0) else {
        return Err(CyclicError::NotStabilized(format!(
            "no level divisible by {ell} among {sorted:?}"
        )));
    };

    let cone_at = |n: u64| {
        let scalar = (n % ell) as i64;
        datum.map().scale(scalar).cone()
    };

    // Transitions between consecutive levels, wherever a strict square
    // exists: on each cone piece A[1] (+) B they act by a scalar on the
    // A-part and the identity on the B-part.
    for w in sorted.windows(2) {
        let (n, n2) = (w[0], w[1]);
        let m = n2 / n;
        let alpha: Option<i64> = if n % ell == 0 {
            Some(0)
        } else if gcd(m, ell) == 1 {
            let f = datum.map().src().field();
            Some(f.inv(f.norm(m as i128)) as i64)
        } else {
            // The step enters the divisible range from outside it; the
            // square only commutes up to homotopy, and the tower does not
            // need it: stabilization is read off past this point.
            None
        };
        if let Some(alpha) = alpha {
            let src = cone_at(n);
            let dst = cone_at(n2);
            let a = datum.src();
            let b = datum.dst();
            let mats: Vec<(i64, Matrix)> = (src.lo()..=src.hi())
                .map(|k| {
                    let field = src.field();
                    let mut m = Matrix::zero(field, dst.dim(k), src.dim(k));
                    let asz = a.dim(k + 1);
                    for i in 0..asz {
                        m.set(i, i, field.norm(alpha as i128));
                    }
                    for i in 0..b.dim(k) {
                        m.set(asz + i, asz + i, 1);
                    }
                    (k, m)
                })
                .collect();
            ChainMap::new(src, dst, mats).map_err(|e| CyclicError::BadTransition {
                from: n,
                to: n2,
                what: e.to_string(),
            })?;
        }
    }

    // At the stable level the scalar is zero, so the cone is literally
    // A[1] (+) B and projecting away the A-part is a chain map.
    let stable_cone = cone_at(stable);
    let b = datum.dst().clone();
    let a = datum.src();
    let field = b.field();
    let proj_mats: Vec<(i64, Matrix)> = (stable_cone.lo()..=stable_cone.hi())
        .map(|k| {
            let mut m = Matrix::zero(field, b.dim(k), stable_cone.dim(k));
            for i in 0..b.dim(k) {
                m.set(i, a.dim(k + 1) + i, 1);
            }
            (k, m)
        })
        .collect();
    let projection =
        ChainMap::new(stable_cone.clone(), b.clone(), proj_mats).expect("cocone projection");

    // The tail step multiplies the level by ell: zero on the A-part, the
    // identity on the B-part, witnessing that the shifted source dies.
    let tail_mats: Vec<(i64, Matrix)> = (stable_cone.lo()..=stable_cone.hi())
        .map(|k| {
            let mut m = Matrix::zero(field, stable_cone.dim(k), stable_cone.dim(k));
            for i in 0..b.dim(k) {
                m.set(a.dim(k + 1) + i, a.dim(k + 1) + i, 1);
            }
            (k, m)
        })
        .collect();
    let tail =
        ChainMap::new(stable_cone.clone(), stable_cone, tail_mats).expect("tail transition");

    Ok(ChernColimit { complex: b, level: stable, projection, tail })
}
