//! Complexes of sheaves on a finite poset, with the stalkwise operations:
//! pullback, extension by zero, cones and fibers, degreewise kernels.

use std::collections::BTreeMap;

use tame_complex::{ChainMap, Complex, Field, Matrix};

use crate::poset::{Poset, PosetMap};
use crate::sheaf::{Sheaf, SheafMap};
use crate::SpaceError;

#[derive(Clone, PartialEq, Debug)]
pub struct ShComplex {
    base: Poset,
    field: Field,
    lo: i64,
    twist: i64,
    sheaves: Vec<Sheaf>,
    diffs: Vec<SheafMap>,
}

impl ShComplex {
    pub fn from_parts(
        base: Poset,
        field: Field,
        lo: i64,
        sheaves: Vec<Sheaf>,
        diffs: Vec<SheafMap>,
        twist: i64,
    ) -> Result<Self, SpaceError> {
        if diffs.len() != sheaves.len().saturating_sub(1) {
            return Err(SpaceError::BadSheaf("wrong number of differentials".into()));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.src() != &sheaves[i] || d.dst() != &sheaves[i + 1] {
                return Err(SpaceError::BadSheaf(format!("differential {i} endpoints mismatch")));
            }
        }
        for i in 0..diffs.len().saturating_sub(1) {
            if !diffs[i + 1].compose(&diffs[i]).is_zero() {
                return Err(SpaceError::BadSheaf(format!("d . d nonzero out of degree {}", lo + i as i64)));
            }
        }
        let mut c = ShComplex { base, field, lo, twist, sheaves, diffs };
        c.normalize();
        Ok(c)
    }

    fn normalize(&mut self) {
        while self.sheaves.first().map_or(false, |s| s.is_zero()) {
            self.sheaves.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.lo += 1;
        }
        while self.sheaves.last().map_or(false, |s| s.is_zero()) {
            self.sheaves.pop();
            self.diffs.pop();
        }
        if self.sheaves.is_empty() {
            self.lo = 0;
        }
    }

    pub fn zero(base: &Poset, field: Field) -> Self {
        ShComplex { base: base.clone(), field, lo: 0, twist: 0, sheaves: Vec::new(), diffs: Vec::new() }
    }

    pub fn constant(base: &Poset, field: Field, dim: usize) -> Self {
        ShComplex::from_sheaf(Sheaf::constant(base, field, dim), 0)
    }

    pub fn from_sheaf(s: Sheaf, degree: i64) -> Self {
        let mut c = ShComplex {
            base: s.base().clone(),
            field: s.field(),
            lo: degree,
            twist: 0,
            sheaves: vec![s],
            diffs: Vec::new(),
        };
        c.normalize();
        c
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.sheaves.len() as i64 - 1
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn is_zero_complex(&self) -> bool {
        self.sheaves.is_empty()
    }

    pub fn sheaf_at(&self, k: i64) -> Sheaf {
        if k < self.lo || k > self.hi() {
            Sheaf::zero(&self.base, self.field)
        } else {
            self.sheaves[(k - self.lo) as usize].clone()
        }
    }

    pub fn dim(&self, k: i64, x: usize) -> usize {
        if k < self.lo || k > self.hi() {
            0
        } else {
            self.sheaves[(k - self.lo) as usize].dim(x)
        }
    }

    pub fn d(&self, k: i64) -> SheafMap {
        if k >= self.lo && k < self.hi() {
            self.diffs[(k - self.lo) as usize].clone()
        } else {
            SheafMap::zero(&self.sheaf_at(k), &self.sheaf_at(k + 1))
        }
    }

    /// The stalk complex at `x`, carrying the twist label.
    pub fn stalk(&self, x: usize) -> Complex {
        let dims: Vec<usize> = self.sheaves.iter().map(|s| s.dim(x)).collect();
        let diffs: Vec<Matrix> = self.diffs.iter().map(|d| d.at(x).clone()).collect();
        Complex::from_parts(self.field, self.lo, dims, diffs, self.twist).expect("stalk complex")
    }

    /// Restriction `stalk(x) -> stalk(y)` as a chain map, for `x <= y`.
    pub fn res_chain(&self, x: usize, y: usize) -> ChainMap {
        let mats = (self.lo..=self.hi())
            .map(|k| (k, self.sheaf_at(k).res(x, y)))
            .collect();
        ChainMap::new(self.stalk(x), self.stalk(y), mats).expect("restriction chain map")
    }

    pub fn shift(&self, s: i64) -> ShComplex {
        let sign = if s.rem_euclid(2) == 0 { 1 } else { -1 };
        ShComplex {
            base: self.base.clone(),
            field: self.field,
            lo: self.lo - s,
            twist: self.twist,
            sheaves: self.sheaves.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(sign)).collect(),
        }
    }

    pub fn twisted(&self, t: i64) -> ShComplex {
        let mut c = self.clone();
        c.twist += t;
        c
    }

    pub fn direct_sum(&self, other: &ShComplex) -> ShComplex {
        assert_eq!(self.base, other.base, "direct sum over distinct bases");
        assert_eq!(self.twist, other.twist, "direct sum of distinct twists");
        if self.is_zero_complex() {
            return other.clone();
        }
        if other.is_zero_complex() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let sheaves: Vec<Sheaf> = (lo..=hi).map(|k| self.sheaf_at(k).direct_sum(&other.sheaf_at(k))).collect();
        let diffs: Vec<SheafMap> = (lo..hi).map(|k| self.d(k).direct_sum(&other.d(k))).collect();
        ShComplex { base: self.base.clone(), field: self.field, lo, twist: self.twist, sheaves, diffs }
    }

    /// Stalkwise tensor product over the same base; summands of a degree in
    /// increasing left-degree order, matching the chain-level convention.
    pub fn tensor(&self, other: &ShComplex) -> ShComplex {
        assert_eq!(self.base, other.base, "tensor over distinct bases");
        if self.is_zero_complex() || other.is_zero_complex() {
            let mut z = ShComplex::zero(&self.base, self.field);
            z.twist = self.twist + other.twist;
            return z;
        }
        let lo = self.lo + other.lo;
        let hi = self.hi() + other.hi();
        let summands = |k: i64| -> Vec<i64> {
            (self.lo..=self.hi())
                .filter(|&i| !self.sheaf_at(i).is_zero() && !other.sheaf_at(k - i).is_zero())
                .collect()
        };
        let sheaf_of = |k: i64| -> Sheaf {
            let mut acc = Sheaf::zero(&self.base, self.field);
            for i in summands(k) {
                acc = acc.direct_sum(&self.sheaf_at(i).tensor(&other.sheaf_at(k - i)));
            }
            acc
        };
        let sheaves: Vec<Sheaf> = (lo..=hi).map(sheaf_of).collect();
        let mut diffs = Vec::new();
        for k in lo..hi {
            let (src_s, dst_s) = (&sheaves[(k - lo) as usize], &sheaves[(k + 1 - lo) as usize]);
            let mats: Vec<Matrix> = (0..self.base.n())
                .map(|x| {
                    let mut m = Matrix::zero(self.field, dst_s.dim(x), src_s.dim(x));
                    let dst_list = summands(k + 1);
                    let dst_off = |i: i64| -> usize {
                        dst_list
                            .iter()
                            .take_while(|&&b| b != i)
                            .map(|&b| self.dim(b, x) * other.dim(k + 1 - b, x))
                            .sum()
                    };
                    let mut col0 = 0;
                    for i in summands(k) {
                        let j = k - i;
                        let (di, dj) = (self.dim(i, x), other.dim(j, x));
                        if dst_list.contains(&(i + 1)) {
                            let blk = self.d(i).at(x).kron(&Matrix::identity(self.field, dj));
                            put(&mut m, dst_off(i + 1), col0, &blk);
                        }
                        if dst_list.contains(&i) {
                            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
                            let blk = Matrix::identity(self.field, di).kron(other.d(j).at(x)).scale(sign);
                            put(&mut m, dst_off(i), col0, &blk);
                        }
                        col0 += di * dj;
                    }
                    m
                })
                .collect();
            diffs.push(SheafMap::new(src_s.clone(), dst_s.clone(), mats).expect("tensor differential"));
        }
        ShComplex {
            base: self.base.clone(),
            field: self.field,
            lo,
            twist: self.twist + other.twist,
            sheaves,
            diffs,
        }
    }

    /// `(u^* G)` degreewise.
    pub fn pullback(u: &PosetMap, g: &ShComplex) -> ShComplex {
        ShComplex {
            base: u.src().clone(),
            field: g.field,
            lo: g.lo,
            twist: g.twist,
            sheaves: g.sheaves.iter().map(|s| Sheaf::pullback(u, s)).collect(),
            diffs: g.diffs.iter().map(|d| SheafMap::pullback(u, d)).collect(),
        }
    }

    /// Extend by zero along the inclusion of an induced subposet given by
    /// `keep` (the ambient indices of the subposet's elements, in order).
    /// Restrictions into and out of the complement are zero; valid for an
    /// up-closed or down-closed image.
    pub fn extend_by_zero(&self, ambient: &Poset, keep: &[usize]) -> ShComplex {
        let mut back = vec![usize::MAX; ambient.n()];
        for (i, &x) in keep.iter().enumerate() {
            back[x] = i;
        }
        let lift_sheaf = |s: &Sheaf| -> Sheaf {
            let dims: Vec<usize> =
                (0..ambient.n()).map(|x| if back[x] != usize::MAX { s.dim(back[x]) } else { 0 }).collect();
            let mut res = BTreeMap::new();
            for (x, y) in ambient.strict_pairs() {
                let m = if back[x] != usize::MAX && back[y] != usize::MAX {
                    s.res(back[x], back[y])
                } else {
                    Matrix::zero(self.field, dims[y], dims[x])
                };
                res.insert((x, y), m);
            }
            Sheaf::new(ambient.clone(), self.field, dims, res).expect("extension by zero")
        };
        let sheaves: Vec<Sheaf> = self.sheaves.iter().map(&lift_sheaf).collect();
        let diffs: Vec<SheafMap> = self
            .diffs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mats = (0..ambient.n())
                    .map(|x| {
                        if back[x] != usize::MAX {
                            d.at(back[x]).clone()
                        } else {
                            Matrix::zero(self.field, 0, 0)
                        }
                    })
                    .collect();
                SheafMap::new(sheaves[i].clone(), sheaves[i + 1].clone(), mats).expect("extended differential")
            })
            .collect();
        ShComplex { base: ambient.clone(), field: self.field, lo: self.lo, twist: self.twist, sheaves, diffs }
    }
}

fn put(m: &mut Matrix, row0: usize, col0: usize, blk: &Matrix) {
    for r in 0..blk.rows() {
        for c in 0..blk.cols() {
            m.set(row0 + r, col0 + c, blk.get(r, c));
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct ShMap {
    src: ShComplex,
    dst: ShComplex,
    mats: BTreeMap<i64, SheafMap>,
}

impl ShMap {
    pub fn new(src: ShComplex, dst: ShComplex, mats: Vec<(i64, SheafMap)>) -> Result<Self, SpaceError> {
        let mut stored = BTreeMap::new();
        for (k, m) in mats {
            if m.src() != &src.sheaf_at(k) || m.dst() != &dst.sheaf_at(k) {
                return Err(SpaceError::BadSheafMap(format!("degree {k} endpoints mismatch")));
            }
            if !m.is_zero() {
                stored.insert(k, m);
            }
        }
        let f = ShMap { src, dst, mats: stored };
        let lo = f.src.lo().min(f.dst.lo()) - 1;
        let hi = f.src.hi().max(f.dst.hi());
        for k in lo..=hi {
            let lhs = f.dst.d(k).compose(&f.at(k));
            let rhs = f.at(k + 1).compose(&f.src.d(k));
            if lhs != rhs {
                return Err(SpaceError::BadSheafMap(format!("fails to commute with d at degree {k}")));
            }
        }
        Ok(f)
    }

    pub fn identity(c: &ShComplex) -> Self {
        let mats = (c.lo()..=c.hi()).map(|k| (k, SheafMap::identity(&c.sheaf_at(k)))).collect();
        ShMap::new(c.clone(), c.clone(), mats).expect("identity")
    }

    pub fn zero_map(src: &ShComplex, dst: &ShComplex) -> Self {
        ShMap { src: src.clone(), dst: dst.clone(), mats: BTreeMap::new() }
    }

    pub fn src(&self) -> &ShComplex {
        &self.src
    }

    pub fn dst(&self) -> &ShComplex {
        &self.dst
    }

    pub fn at(&self, k: i64) -> SheafMap {
        self.mats
            .get(&k)
            .cloned()
            .unwrap_or_else(|| SheafMap::zero(&self.src.sheaf_at(k), &self.dst.sheaf_at(k)))
    }

    pub fn stalk(&self, x: usize) -> ChainMap {
        let mats = (self.src.lo().min(self.dst.lo())..=self.src.hi().max(self.dst.hi()))
            .map(|k| (k, self.at(k).at(x).clone()))
            .collect();
        ChainMap::new(self.src.stalk(x), self.dst.stalk(x), mats).expect("stalk chain map")
    }

    pub fn compose(&self, other: &ShMap) -> ShMap {
        assert_eq!(&self.src, other.dst(), "composition mismatch");
        let mats = (other.src().lo()..=other.src().hi())
            .map(|k| (k, self.at(k).compose(&other.at(k))))
            .collect();
        ShMap::new(other.src().clone(), self.dst.clone(), mats).expect("compose")
    }

    pub fn add(&self, other: &ShMap) -> ShMap {
        let mats = (self.src.lo()..=self.src.hi())
            .map(|k| (k, self.at(k).add(&other.at(k))))
            .collect();
        ShMap::new(self.src.clone(), self.dst.clone(), mats).expect("add")
    }

    pub fn sub(&self, other: &ShMap) -> ShMap {
        let mats = (self.src.lo()..=self.src.hi())
            .map(|k| (k, self.at(k).sub(&other.at(k))))
            .collect();
        ShMap::new(self.src.clone(), self.dst.clone(), mats).expect("sub")
    }

    pub fn is_zero(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn pullback(u: &PosetMap, f: &ShMap) -> ShMap {
        let src = ShComplex::pullback(u, &f.src);
        let dst = ShComplex::pullback(u, &f.dst);
        let mats = f.mats.iter().map(|(&k, m)| (k, SheafMap::pullback(u, m))).collect();
        ShMap { src, dst, mats }
    }

    pub fn is_stalkwise_qiso(&self) -> bool {
        (0..self.src.base().n()).all(|x| self.stalk(x).is_quasi_iso())
    }

    /// The cone, built stalkwise: `cone^k = src^(k+1) (+) dst^k` with
    /// differential `(c, d) |-> (-dc, dd + fc)`; twist from the target.
    pub fn cone(&self) -> ShComplex {
        let field = self.src.field();
        let base = self.src.base().clone();
        if self.src.is_zero_complex() && self.dst.is_zero_complex() {
            return ShComplex::zero(&base, field).twisted(self.dst.twist());
        }
        let lo = (self.src.lo() - 1).min(self.dst.lo());
        let hi = self.src.hi().max(self.dst.hi() + 1) - 1;
        let sheaves: Vec<Sheaf> =
            (lo..=hi).map(|k| self.src.sheaf_at(k + 1).direct_sum(&self.dst.sheaf_at(k))).collect();
        let mut diffs = Vec::new();
        for k in lo..hi {
            let (s, t) = (&sheaves[(k - lo) as usize], &sheaves[(k + 1 - lo) as usize]);
            let mats: Vec<Matrix> = (0..base.n())
                .map(|x| {
                    let ds = self.src.d(k + 1).at(x).scale(-1);
                    let dd = self.dst.d(k).at(x).clone();
                    let fx = self.at(k + 1).at(x).clone();
                    let top = ds.hstack(&Matrix::zero(field, self.src.dim(k + 2, x), self.dst.dim(k, x)));
                    let bot = fx.hstack(&dd);
                    top.vstack(&bot)
                })
                .collect();
            diffs.push(SheafMap::new(s.clone(), t.clone(), mats).expect("cone differential"));
        }
        ShComplex { base, field, lo, twist: self.dst.twist(), sheaves, diffs }
    }

    pub fn cone_inclusion(&self) -> ShMap {
        let cone = self.cone();
        let field = self.src.field();
        let mats = (self.dst.lo()..=self.dst.hi())
            .map(|k| {
                let ms = (0..self.src.base().n())
                    .map(|x| {
                        let z = Matrix::zero(field, self.src.dim(k + 1, x), self.dst.dim(k, x));
                        z.vstack(&Matrix::identity(field, self.dst.dim(k, x)))
                    })
                    .collect();
                (k, SheafMap::new(self.dst.sheaf_at(k), cone.sheaf_at(k), ms).expect("cone inclusion"))
            })
            .collect();
        ShMap::new(self.dst.clone(), cone, mats).expect("cone inclusion map")
    }

    pub fn cone_projection(&self) -> ShMap {
        let cone = self.cone();
        let shifted = self.src.shift(1);
        let field = self.src.field();
        let mats = (cone.lo()..=cone.hi())
            .map(|k| {
                let ms = (0..self.src.base().n())
                    .map(|x| {
                        let id = Matrix::identity(field, self.src.dim(k + 1, x));
                        id.hstack(&Matrix::zero(field, self.src.dim(k + 1, x), self.dst.dim(k, x)))
                    })
                    .collect();
                (k, SheafMap::new(cone.sheaf_at(k), shifted.sheaf_at(k), ms).expect("cone projection"))
            })
            .collect();
        ShMap::new(cone, shifted, mats).expect("cone projection map")
    }

    pub fn fiber(&self) -> ShComplex {
        self.cone().shift(-1)
    }

    pub fn fiber_projection(&self) -> ShMap {
        let fib = self.fiber();
        let field = self.src.field();
        let mats = (fib.lo()..=fib.hi())
            .map(|k| {
                let ms = (0..self.src.base().n())
                    .map(|x| {
                        let id = Matrix::identity(field, self.src.dim(k, x));
                        id.hstack(&Matrix::zero(field, self.src.dim(k, x), self.dst.dim(k - 1, x)))
                    })
                    .collect();
                (k, SheafMap::new(fib.sheaf_at(k), self.src.sheaf_at(k), ms).expect("fiber projection"))
            })
            .collect();
        ShMap::new(fib, self.src.clone(), mats).expect("fiber projection map")
    }

    /// Degreewise stalkwise kernel with the induced differentials, and its
    /// inclusion.
    pub fn kernel_complex(&self) -> (ShComplex, ShMap) {
        let lo = self.src.lo();
        let hi = self.src.hi();
        let mut kernels = Vec::new();
        let mut incls = Vec::new();
        for k in lo..=hi {
            let (ker, incl) = self.at(k).kernel();
            kernels.push(ker);
            incls.push(incl);
        }
        let mut diffs = Vec::new();
        for k in lo..hi {
            let i = (k - lo) as usize;
            // solve incl_(k+1) . X = d . incl_k stalkwise
            let mats: Vec<Matrix> = (0..self.src.base().n())
                .map(|x| {
                    let rhs = self.src.d(k).at(x).mul(incls[i].at(x));
                    incls[i + 1].at(x).solve(&rhs).expect("kernel preserved by d")
                })
                .collect();
            diffs.push(SheafMap::new(kernels[i].clone(), kernels[i + 1].clone(), mats).expect("kernel differential"));
        }
        let ker = ShComplex {
            base: self.src.base().clone(),
            field: self.src.field(),
            lo,
            twist: self.src.twist(),
            sheaves: kernels,
            diffs,
        };
        let incl_map = ShMap::new(
            ker.clone(),
            self.src.clone(),
            (lo..=hi).map(|k| {
                let i = (k - lo) as usize;
                (k, SheafMap::new(ker.sheaf_at(k), self.src.sheaf_at(k), (0..self.src.base().n()).map(|x| incls[i].at(x).clone()).collect()).expect("kernel inclusion"))
            }).collect(),
        )
        .expect("kernel inclusion map");
        (ker, incl_map)
    }
}
