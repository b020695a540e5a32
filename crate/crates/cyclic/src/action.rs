//! Strict Z/n-actions on complexes, averaging fixed points, and the
//! two-periodic homotopy fixed point complex with its guaranteed window.

use tame_complex::{ChainMap, Complex, Matrix};

use crate::{gcd, CyclicError};

/// An action of Z/n on a bounded complex, given by a generator whose n-th
/// power is the identity on the nose (which forces degreewise invertibility).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclicAction {
    order: u64,
    gen: ChainMap,
}

impl CyclicAction {
    pub fn new(order: u64, gen: ChainMap) -> Result<Self, CyclicError> {
        if order == 0 {
            return Err(CyclicError::NotPeriodic { order });
        }
        if gen.src() != gen.dst() {
            return Err(CyclicError::NotEndomorphism);
        }
        let mut p = ChainMap::identity(gen.src());
        for _ in 0..order {
            p = gen.compose(&p);
        }
        if p != ChainMap::identity(gen.src()) {
            return Err(CyclicError::NotPeriodic { order });
        }
        Ok(CyclicAction { order, gen })
    }

    pub fn trivial(c: &Complex, order: u64) -> Self {
        CyclicAction { order: order.max(1), gen: ChainMap::identity(c) }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn complex(&self) -> &Complex {
        self.gen.src()
    }

    pub fn generator(&self) -> &ChainMap {
        &self.gen
    }

    pub fn power(&self, k: u64) -> ChainMap {
        let mut p = ChainMap::identity(self.complex());
        for _ in 0..(k % self.order) {
            p = self.gen.compose(&p);
        }
        p
    }

    /// The same complex with the same generator, seen as a Z/(nm)-action by
    /// pulling back along the quotient Z/(nm) -> Z/n.
    pub fn inflate(&self, m: u64) -> CyclicAction {
        CyclicAction { order: self.order * m.max(1), gen: self.gen.clone() }
    }

    /// Whether `f` intertwines the generators of two actions.
    pub fn intertwines(a: &CyclicAction, b: &CyclicAction, f: &ChainMap) -> bool {
        f.compose(&a.gen) == b.gen.compose(f)
    }
}

/// Fixed points of the order-m subgroup of an action, with the residual
/// Z/(n/m)-action, cut out by the averaging idempotent.
pub struct FixedPoints {
    pub action: CyclicAction,
    pub include: ChainMap,
    pub project: ChainMap,
}

pub fn fixed_points(act: &CyclicAction, m: u64) -> Result<FixedPoints, CyclicError> {
    let n = act.order();
    if m == 0 || n % m != 0 {
        return Err(CyclicError::NotASubgroup { m, order: n });
    }
    let c = act.complex().clone();
    let field = c.field();
    let ell = field.order();
    if gcd(m, ell) != 1 {
        return Err(CyclicError::OrderNotInvertible { m, ell });
    }
    let h = act.power(n / m);
    // Averaging idempotent over the subgroup generated by g^(n/m).
    let inv_m = field.inv(field.norm(m as i128)) as i64;
    let mut avg: Vec<(i64, Matrix)> = Vec::new();
    for k in c.lo()..=c.hi() {
        let mut acc = Matrix::zero(field, c.dim(k), c.dim(k));
        let mut p = Matrix::identity(field, c.dim(k));
        for _ in 0..m {
            acc = acc.add(&p);
            p = h.mat(k).mul(&p);
        }
        avg.push((k, acc.scale(inv_m)));
    }

    let mut dims = Vec::new();
    let mut bases: Vec<Matrix> = Vec::new();
    for (_, e) in &avg {
        let b = e.image();
        dims.push(b.cols());
        bases.push(b);
    }
    let mut diffs = Vec::new();
    for i in 0..bases.len().saturating_sub(1) {
        let k = c.lo() + i as i64;
        let d = bases[i + 1].solve(&c.d(k).mul(&bases[i])).expect("invariants form a subcomplex");
        diffs.push(d);
    }
    let fixed = Complex::from_parts(field, c.lo(), dims, diffs, c.twist()).expect("fixed complex");

    let include = ChainMap::new(
        fixed.clone(),
        c.clone(),
        bases.iter().enumerate().map(|(i, b)| (c.lo() + i as i64, b.clone())).collect(),
    )
    .expect("inclusion of invariants");
    let project = ChainMap::new(
        c.clone(),
        fixed.clone(),
        avg.iter()
            .zip(&bases)
            .map(|((k, e), b)| (*k, b.solve(e).expect("idempotent lands in its image")))
            .collect(),
    )
    .expect("projection onto invariants");

    let res_gen = ChainMap::new(
        fixed.clone(),
        fixed,
        bases
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let k = c.lo() + i as i64;
                (k, b.solve(&act.generator().mat(k).mul(b)).expect("residual action"))
            })
            .collect(),
    )
    .expect("residual generator");
    let action = CyclicAction::new(n / m, res_gen)?;
    Ok(FixedPoints { action, include, project })
}

/// The map induced on averaged fixed points by an equivariant map.
pub fn fixed_map(src: &FixedPoints, dst: &FixedPoints, f: &ChainMap) -> ChainMap {
    dst.project.compose(&f.compose(&src.include))
}

/// A finite stretch of the totalization of the two-periodic resolution
/// mapped into the complex. Cohomology agrees with the full homotopy fixed
/// points exactly in `window`.
pub struct HomotopyFixedPoints {
    pub complex: Complex,
    pub window: (i64, i64),
}

pub fn homotopy_fixed_points(act: &CyclicAction, a: i64, b: i64) -> HomotopyFixedPoints {
    let c = act.complex();
    let field = c.field();
    if c.is_zero_complex() || a > b {
        return HomotopyFixedPoints { complex: Complex::zero_complex(field), window: (a, b) };
    }
    let width = c.hi() - c.lo();
    let window = (a, b - width - 1);
    let n = act.order();

    // Column i of the bicomplex caries C itself; horizontal maps alternate
    // between g - 1 and the norm, starting with g - 1 out of column 0.
    let mut norm: Vec<(i64, Matrix)> = Vec::new();
    for k in c.lo()..=c.hi() {
        let mut acc = Matrix::zero(field, c.dim(k), c.dim(k));
        let mut p = Matrix::identity(field, c.dim(k));
        for _ in 0..n {
            acc = acc.add(&p);
            p = act.generator().mat(k).mul(&p);
        }
        norm.push((k, acc));
    }
    let norm_at = |j: i64| norm[(j - c.lo()) as usize].1.clone();
    let gm1_at = |j: i64| act.generator().mat(j).sub(&Matrix::identity(field, c.dim(j)));

    let t_lo = c.lo().max(a - 1);
    let pieces = |t: i64| -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for i in 0.max(t - c.hi())..=(t - c.lo()) {
            out.push((i, t - i));
        }
        out
    };
    let dims: Vec<usize> =
        (t_lo..=b).map(|t| pieces(t).iter().map(|&(_, j)| c.dim(j)).sum()).collect();
    let mut diffs = Vec::new();
    for t in t_lo..b {
        let src = pieces(t);
        let dst = pieces(t + 1);
        let rows: usize = dst.iter().map(|&(_, j)| c.dim(j)).sum();
        let cols: usize = src.iter().map(|&(_, j)| c.dim(j)).sum();
        let mut d = Matrix::zero(field, rows, cols);
        let mut col_off = 0;
        for &(i, j) in &src {
            let mut row_off = 0;
            for &(i2, j2) in &dst {
                let blk = if i2 == i && j2 == j + 1 {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    Some(c.d(j).scale(sign))
                } else if i2 == i + 1 && j2 == j {
                    Some(if i % 2 == 0 { gm1_at(j) } else { norm_at(j) })
                } else {
                    None
                };
                if let Some(blk) = blk {
                    for r in 0..blk.rows() {
                        for cc in 0..blk.cols() {
                            d.set(row_off + r, col_off + cc, blk.get(r, cc));
                        }
                    }
                }
                row_off += c.dim(j2);
            }
            col_off += c.dim(j);
        }
        diffs.push(d);
    }
    let complex =
        Complex::from_parts(field, t_lo, dims, diffs, c.twist()).expect("totalization is a complex");
    HomotopyFixedPoints { complex, window }
}

/// The block-diagonal map of truncated totalizations induced by an
/// equivariant map between two actions of the same order.
pub fn homotopy_fixed_points_map(
    src: &CyclicAction,
    dst: &CyclicAction,
    f: &ChainMap,
    a: i64,
    b: i64,
) -> (ChainMap, (i64, i64)) {
    assert_eq!(src.order(), dst.order(), "actions of one group");
    assert!(CyclicAction::intertwines(src, dst, f), "map must be equivariant");
    let hs = homotopy_fixed_points(src, a, b);
    let hd = homotopy_fixed_points(dst, a, b);
    let window = (hs.window.0.max(hd.window.0), hs.window.1.min(hd.window.1));
    let (cs, cd) = (src.complex(), dst.complex());
    let mut mats = Vec::new();
    for t in hs.complex.lo()..=hs.complex.hi() {
        let rows = hd.complex.dim(t);
        let cols = hs.complex.dim(t);
        let mut m = Matrix::zero(f.mat(0).field(), rows, cols);
        let mut col_off = 0;
        for i in 0.max(t - cs.hi())..=(t - cs.lo()) {
            let j = t - i;
            // Locate the same column in the target totalization.
            let mut row_off = 0;
            for i2 in 0.max(t - cd.hi())..=(t - cd.lo()) {
                if i2 == i {
                    break;
                }
                row_off += cd.dim(t - i2);
            }
            if i >= 0.max(t - cd.hi()) && i <= t - cd.lo() {
                let blk = f.mat(j);
                for r in 0..blk.rows() {
                    for cc in 0..blk.cols() {
                        m.set(row_off + r, col_off + cc, blk.get(r, cc));
                    }
                }
            }
            col_off += cs.dim(j);
        }
        mats.push((t, m));
    }
    let map = ChainMap::new(hs.complex, hd.complex, mats).expect("totalized map");
    (map, window)
}
