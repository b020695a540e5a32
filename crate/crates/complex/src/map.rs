//! Chain maps, cones, and fibers.

use std::collections::BTreeMap;

use crate::complex::{put_block, tensor_layout, Complex};
use crate::matrix::Matrix;
use crate::ComplexError;

/// A degree-zero map of complexes commuting with the differentials.
/// Source and target keep their own twist labels; constructions that care
/// about twists compare them at the call site.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainMap {
    src: Complex,
    dst: Complex,
    mats: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    pub fn new(src: Complex, dst: Complex, mats: Vec<(i64, Matrix)>) -> Result<Self, ComplexError> {
        if src.field() != dst.field() {
            return Err(ComplexError::FieldMismatch);
        }
        let mut stored = BTreeMap::new();
        for (k, m) in mats {
            if m.rows() != dst.dim(k) || m.cols() != src.dim(k) {
                return Err(ComplexError::Shape {
                    what: "chain map".into(),
                    detail: format!("degree {k}: expected {}x{}, got {}x{}", dst.dim(k), src.dim(k), m.rows(), m.cols()),
                });
            }
            if !m.is_zero() {
                stored.insert(k, m);
            }
        }
        let f = ChainMap { src, dst, mats: stored };
        let lo = f.src.lo().min(f.dst.lo()) - 1;
        let hi = f.src.hi().max(f.dst.hi());
        for k in lo..=hi {
            if f.dst.d(k).mul(&f.mat(k)) != f.mat(k + 1).mul(&f.src.d(k)) {
                return Err(ComplexError::NotChainMap { degree: k });
            }
        }
        Ok(f)
    }

    pub fn identity(c: &Complex) -> Self {
        let mats = (c.lo()..=c.hi()).map(|k| (k, Matrix::identity(c.field(), c.dim(k)))).collect();
        ChainMap::new(c.clone(), c.clone(), mats).expect("identity")
    }

    pub fn zero_map(src: &Complex, dst: &Complex) -> Self {
        ChainMap::new(src.clone(), dst.clone(), Vec::new()).expect("zero map")
    }

    pub fn src(&self) -> &Complex {
        &self.src
    }

    pub fn dst(&self) -> &Complex {
        &self.dst
    }

    /// The component in degree `k`, shaped `dst.dim(k) x src.dim(k)`.
    pub fn mat(&self, k: i64) -> Matrix {
        self.mats
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.src.field(), self.dst.dim(k), self.src.dim(k)))
    }

    pub fn is_zero(&self) -> bool {
        self.mats.is_empty()
    }

    /// `self . other`: apply `other` first.
    pub fn compose(&self, other: &ChainMap) -> ChainMap {
        assert_eq!(&self.src, other.dst(), "composition mismatch");
        let mats = (other.src().lo()..=other.src().hi())
            .map(|k| (k, self.mat(k).mul(&other.mat(k))))
            .collect();
        ChainMap::new(other.src().clone(), self.dst.clone(), mats).expect("compose")
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        assert_eq!((&self.src, &self.dst), (&other.src, &other.dst), "sum mismatch");
        let mats = (self.src.lo()..=self.src.hi())
            .map(|k| (k, self.mat(k).add(&other.mat(k))))
            .collect();
        ChainMap::new(self.src.clone(), self.dst.clone(), mats).expect("add")
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ChainMap {
        self.scale(-1)
    }

    pub fn scale(&self, c: i64) -> ChainMap {
        let mats = self.mats.iter().map(|(&k, m)| (k, m.scale(c))).collect();
        ChainMap::new(self.src.clone(), self.dst.clone(), mats).expect("scale")
    }

    /// `f[s]: src[s] -> dst[s]`, same components reindexed.
    pub fn shift(&self, s: i64) -> ChainMap {
        let mats = self.mats.iter().map(|(&k, m)| (k - s, m.clone())).collect();
        ChainMap::new(self.src.shift(s), self.dst.shift(s), mats).expect("shift")
    }

    /// `f ox g` on the tensor complexes, block by block.
    pub fn tensor(&self, g: &ChainMap) -> ChainMap {
        let src = self.src.tensor(g.src());
        let dst = self.dst.tensor(g.dst());
        let mut mats = Vec::new();
        for k in src.lo()..=src.hi() {
            let mut m = Matrix::zero(src.field(), dst.dim(k), src.dim(k));
            let target = tensor_layout(&self.dst, g.dst(), k);
            for (i, col0) in tensor_layout(&self.src, g.src(), k) {
                if let Some(&(_, row0)) = target.iter().find(|&&(b, _)| b == i) {
                    put_block(&mut m, row0, col0, &self.mat(i).kron(&g.mat(k - i)));
                }
            }
            mats.push((k, m));
        }
        ChainMap::new(src, dst, mats).expect("tensor map")
    }

    /// The cone: `cone^k = src^(k+1) (+) dst^k`, differential
    /// `(c, d) |-> (-dc, dd + fc)`, twist taken from the target.
    pub fn cone(&self) -> Complex {
        let f = self.src.field();
        let lo = (self.src.lo() - 1).min(self.dst.lo());
        let hi = self.src.hi().max(self.dst.hi() + 1) - 1;
        if self.src.is_zero_complex() && self.dst.is_zero_complex() {
            return Complex::zero_complex(f).twisted(self.dst.twist());
        }
        let dims: Vec<usize> = (lo..=hi).map(|k| self.src.dim(k + 1) + self.dst.dim(k)).collect();
        let diffs: Vec<Matrix> = (lo..hi)
            .map(|k| {
                let top = self.src.d(k + 1).neg().hstack(&Matrix::zero(f, self.src.dim(k + 2), self.dst.dim(k)));
                let bot = self.mat(k + 1).hstack(&self.dst.d(k));
                top.vstack(&bot)
            })
            .collect();
        Complex::from_parts(f, lo, dims, diffs, self.dst.twist()).expect("cone")
    }

    /// `dst -> cone`, `d |-> (0, d)`.
    pub fn cone_inclusion(&self) -> ChainMap {
        let cone = self.cone();
        let f = self.src.field();
        let mats = (self.dst.lo()..=self.dst.hi())
            .map(|k| {
                let z = Matrix::zero(f, self.src.dim(k + 1), self.dst.dim(k));
                (k, z.vstack(&Matrix::identity(f, self.dst.dim(k))))
            })
            .collect();
        ChainMap::new(self.dst.clone(), cone, mats).expect("cone inclusion")
    }

    /// `cone -> src[1]`, `(c, d) |-> c`.
    pub fn cone_projection(&self) -> ChainMap {
        let cone = self.cone();
        let f = self.src.field();
        let mats = (cone.lo()..=cone.hi())
            .map(|k| {
                let id = Matrix::identity(f, self.src.dim(k + 1));
                (k, id.hstack(&Matrix::zero(f, self.src.dim(k + 1), self.dst.dim(k))))
            })
            .collect();
        ChainMap::new(cone, self.src.shift(1), mats).expect("cone projection")
    }

    /// The fiber `cone(f)[-1]`: `fib^k = src^k (+) dst^(k-1)`, differential
    /// `(c, d) |-> (dc, -dd - fc)`.
    pub fn fiber(&self) -> Complex {
        self.cone().shift(-1)
    }

    /// `fiber -> src`, `(c, d) |-> c`.
    pub fn fiber_projection(&self) -> ChainMap {
        let fib = self.fiber();
        let f = self.src.field();
        let mats = (fib.lo()..=fib.hi())
            .map(|k| {
                let id = Matrix::identity(f, self.src.dim(k));
                (k, id.hstack(&Matrix::zero(f, self.src.dim(k), self.dst.dim(k - 1))))
            })
            .collect();
        ChainMap::new(fib, self.src.clone(), mats).expect("fiber projection")
    }

    /// `dst[-1] -> fiber`, `d |-> (0, d)`.
    pub fn fiber_inclusion(&self) -> ChainMap {
        let fib = self.fiber();
        let f = self.src.field();
        let shifted = self.dst.shift(-1);
        let mats = (shifted.lo()..=shifted.hi())
            .map(|k| {
                let z = Matrix::zero(f, self.src.dim(k), self.dst.dim(k - 1));
                (k, z.vstack(&Matrix::identity(f, self.dst.dim(k - 1))))
            })
            .collect();
        ChainMap::new(shifted, fib, mats).expect("fiber inclusion")
    }

    /// Induced matrices on cohomology, one per degree where either side has
    /// classes, relative to the canonical representative bases.
    pub fn h_table(&self) -> Vec<(i64, Matrix)> {
        let src_h = self.src.cohomology();
        let dst_h = self.dst.cohomology();
        let lo = self.src.lo().min(self.dst.lo());
        let hi = self.src.hi().max(self.dst.hi());
        let mut out = Vec::new();
        for k in lo..=hi {
            let (ns, nd) = (src_h.h_dim(k), dst_h.h_dim(k));
            if ns == 0 && nd == 0 {
                continue;
            }
            let mut m = Matrix::zero(self.src.field(), nd, ns);
            if ns > 0 {
                let reps = src_h.reps(k).expect("source reps");
                let images = self.mat(k).mul(reps);
                m = dst_h.coords(k, &images).expect("image of a cocycle is a cocycle");
            }
            out.push((k, m));
        }
        out
    }

    pub fn h_matrix(&self, k: i64) -> Matrix {
        self.h_table()
            .into_iter()
            .find(|&(d, _)| d == k)
            .map(|(_, m)| m)
            .unwrap_or_else(|| Matrix::zero(self.src.field(), 0, 0))
    }

    pub fn is_quasi_iso(&self) -> bool {
        self.cone().is_acyclic()
    }

    pub fn is_degreewise_iso(&self) -> bool {
        let lo = self.src.lo().min(self.dst.lo());
        let hi = self.src.hi().max(self.dst.hi());
        (lo..=hi).all(|k| self.src.dim(k) == self.dst.dim(k) && self.mat(k).is_invertible())
    }
}

/// The map of cones induced by a strictly commuting square
/// `psi . f = g . phi`, blockwise `(phi^(k+1), psi^k)`.
pub fn cone_map(
    f: &ChainMap,
    g: &ChainMap,
    phi: &ChainMap,
    psi: &ChainMap,
) -> Result<ChainMap, ComplexError> {
    if phi.src() != f.src() || phi.dst() != g.src() || psi.src() != f.dst() || psi.dst() != g.dst()
    {
        return Err(ComplexError::Incompatible("square endpoints do not match".into()));
    }
    if psi.compose(f) != g.compose(phi) {
        return Err(ComplexError::Incompatible("square does not commute strictly".into()));
    }
    let cf = f.cone();
    let cg = g.cone();
    let field = cf.field();
    let mats = (cf.lo().min(cg.lo())..=cf.hi().max(cg.hi()))
        .map(|k| {
            (k, Matrix::block_diag(field, &[&phi.mat(k + 1), &psi.mat(k)]))
        })
        .collect();
    ChainMap::new(cf, cg, mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn two_step(p: u64, a: i64) -> Complex {
        // F -a-> F in degrees 0, 1
        let f = Field::new(p).unwrap();
        Complex::from_parts(
            f,
            0,
            vec![1, 1],
            vec![Matrix::from_rows(f, 1, 1, &[vec![a]]).unwrap()],
            0,
        )
        .unwrap()
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        for p in [2, 3, 5] {
            let c = two_step(p, 1);
            let id = ChainMap::identity(&c);
            assert!(id.cone().is_acyclic());
            assert!(id.is_quasi_iso());
        }
    }

    #[test]
    fn cone_triangle_maps_are_chain_maps() {
        let c = two_step(5, 2);
        let d = two_step(5, 0);
        let f = ChainMap::new(
            c.clone(),
            d.clone(),
            vec![(0, Matrix::from_rows(c.field(), 1, 1, &[vec![3]]).unwrap())],
        )
        .unwrap();
        // constructors validate the chain map condition
        f.cone_inclusion();
        f.cone_projection();
        f.fiber_projection();
        f.fiber_inclusion();
        assert_eq!(f.fiber(), f.cone().shift(-1));
    }

    #[test]
    fn shift_changes_sign_of_differential() {
        let c = two_step(5, 2);
        let s = c.shift(1);
        assert_eq!(s.dim(-1), 1);
        assert_eq!(s.d(-1).get(0, 0), 3); // -2 mod 5
        assert_eq!(c.shift(2).d(-2), c.d(0));
    }
}
