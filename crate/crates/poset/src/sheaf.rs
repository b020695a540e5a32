//! Single sheaves of finite-dimensional vector spaces on a finite poset.
//!
//! A sheaf is a covariant functor on the poset: a stalk per element — the
//! sections over its minimal open — and a restriction map per comparable
//! pair, compatible with composition. Kernels, cokernels, and images are
//! computed stalkwise with induced restrictions.

use std::collections::BTreeMap;

use tame_complex::{extend_basis, Field, Matrix};

use crate::poset::{Poset, PosetMap};
use crate::SpaceError;

#[derive(Clone, PartialEq, Debug)]
pub struct Sheaf {
    base: Poset,
    field: Field,
    dims: Vec<usize>,
    res: BTreeMap<(usize, usize), Matrix>,
}

impl Sheaf {
    /// Build from restriction maps on all strict pairs; checks functoriality
    /// on every strict triple.
    pub fn new(
        base: Poset,
        field: Field,
        dims: Vec<usize>,
        res: BTreeMap<(usize, usize), Matrix>,
    ) -> Result<Self, SpaceError> {
        if dims.len() != base.n() {
            return Err(SpaceError::BadSheaf("one dimension per element required".into()));
        }
        for (&(x, y), m) in &res {
            if !base.lt(x, y) {
                return Err(SpaceError::BadSheaf(format!(
                    "restriction given for non-comparable pair ({}, {})",
                    base.name(x),
                    base.name(y)
                )));
            }
            if m.rows() != dims[y] || m.cols() != dims[x] || m.field() != field {
                return Err(SpaceError::BadSheaf(format!(
                    "restriction shape at ({}, {})",
                    base.name(x),
                    base.name(y)
                )));
            }
        }
        let sheaf = Sheaf { base, field, dims, res };
        for (x, y) in sheaf.base.strict_pairs() {
            if sheaf.res.get(&(x, y)).is_none() {
                return Err(SpaceError::BadSheaf(format!(
                    "missing restriction for ({}, {})",
                    sheaf.base.name(x),
                    sheaf.base.name(y)
                )));
            }
        }
        for (x, y) in sheaf.base.strict_pairs() {
            for z in 0..sheaf.base.n() {
                if sheaf.base.lt(y, z)
                    && sheaf.res(y, z).mul(&sheaf.res(x, y)) != sheaf.res(x, z)
                {
                    return Err(SpaceError::BadSheaf(format!(
                        "restrictions fail to compose along {} <= {} <= {}",
                        sheaf.base.name(x),
                        sheaf.base.name(y),
                        sheaf.base.name(z)
                    )));
                }
            }
        }
        Ok(sheaf)
    }

    /// Build from restriction maps on covering pairs only, composing along
    /// chains (and validating that the choice is consistent).
    pub fn from_covers(
        base: Poset,
        field: Field,
        dims: Vec<usize>,
        cover_res: &BTreeMap<(usize, usize), Matrix>,
    ) -> Result<Self, SpaceError> {
        let mut res: BTreeMap<(usize, usize), Matrix> = BTreeMap::new();
        // process pairs by interval height so composites are available
        let mut pairs = base.strict_pairs();
        pairs.sort_by_key(|&(x, y)| base.up_set(x).iter().filter(|&&z| base.leq(z, y)).count());
        for (x, y) in pairs {
            if let Some(m) = cover_res.get(&(x, y)) {
                res.insert((x, y), m.clone());
            } else {
                let mid = (0..base.n())
                    .find(|&z| base.lt(x, z) && base.lt(z, y))
                    .ok_or_else(|| {
                        SpaceError::BadSheaf(format!(
                            "missing restriction for covering pair ({}, {})",
                            base.name(x),
                            base.name(y)
                        ))
                    })?;
                let m = res[&(mid, y)].mul(&res[&(x, mid)]);
                res.insert((x, y), m);
            }
        }
        Sheaf::new(base, field, dims, res)
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Restriction map for `x <= y` (identity when `x = y`).
    pub fn res(&self, x: usize, y: usize) -> Matrix {
        if x == y {
            Matrix::identity(self.field, self.dims[x])
        } else {
            self.res.get(&(x, y)).cloned().expect("comparable pair")
        }
    }

    pub fn zero(base: &Poset, field: Field) -> Sheaf {
        Sheaf::constant(base, field, 0)
    }

    pub fn constant(base: &Poset, field: Field, dim: usize) -> Sheaf {
        let down: Vec<bool> = vec![true; base.n()];
        Sheaf::down_set_sheaf(base, field, &down, dim)
    }

    /// Value `dim` on a down-closed set with identity restrictions inside,
    /// zero outside. For `S = down(x)` this is the point-injective at `x`.
    pub fn down_set_sheaf(base: &Poset, field: Field, down: &[bool], dim: usize) -> Sheaf {
        assert!(base.is_down_closed(down), "support must be down-closed");
        let dims: Vec<usize> = (0..base.n()).map(|x| if down[x] { dim } else { 0 }).collect();
        let mut res = BTreeMap::new();
        for (x, y) in base.strict_pairs() {
            let m = if down[x] && down[y] {
                Matrix::identity(field, dim)
            } else {
                Matrix::zero(field, dims[y], dims[x])
            };
            res.insert((x, y), m);
        }
        Sheaf { base: base.clone(), field, dims, res }
    }

    pub fn point_injective(base: &Poset, field: Field, x: usize, dim: usize) -> Sheaf {
        Sheaf::down_set_sheaf(base, field, &base.down_mask(x), dim)
    }

    /// Value exactly at one element, zero restrictions.
    pub fn point_sheaf(base: &Poset, field: Field, x: usize, dim: usize) -> Sheaf {
        let dims: Vec<usize> = (0..base.n()).map(|y| if y == x { dim } else { 0 }).collect();
        let mut res = BTreeMap::new();
        for (a, b) in base.strict_pairs() {
            res.insert((a, b), Matrix::zero(field, dims[b], dims[a]));
        }
        Sheaf { base: base.clone(), field, dims, res }
    }

    pub fn direct_sum(&self, other: &Sheaf) -> Sheaf {
        assert_eq!(self.base, other.base, "direct sum over distinct bases");
        let dims: Vec<usize> = (0..self.base.n()).map(|x| self.dims[x] + other.dims[x]).collect();
        let mut res = BTreeMap::new();
        for (x, y) in self.base.strict_pairs() {
            res.insert((x, y), Matrix::block_diag(self.field, &[&self.res(x, y), &other.res(x, y)]));
        }
        Sheaf { base: self.base.clone(), field: self.field, dims, res }
    }

    /// Stalkwise tensor product over the same base.
    pub fn tensor(&self, other: &Sheaf) -> Sheaf {
        assert_eq!(self.base, other.base, "tensor over distinct bases");
        let dims: Vec<usize> = (0..self.base.n()).map(|x| self.dims[x] * other.dims[x]).collect();
        let mut res = BTreeMap::new();
        for (x, y) in self.base.strict_pairs() {
            res.insert((x, y), self.res(x, y).kron(&other.res(x, y)));
        }
        Sheaf { base: self.base.clone(), field: self.field, dims, res }
    }

    /// `(u^* G)(x) = G(u(x))` with transported restrictions.
    pub fn pullback(u: &PosetMap, g: &Sheaf) -> Sheaf {
        assert_eq!(u.dst(), g.base(), "pullback along a map into a different base");
        let base = u.src().clone();
        let dims: Vec<usize> = (0..base.n()).map(|x| g.dims[u.apply(x)]).collect();
        let mut res = BTreeMap::new();
        for (x, y) in base.strict_pairs() {
            res.insert((x, y), g.res(u.apply(x), u.apply(y)));
        }
        Sheaf { base, field: g.field, dims, res }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct SheafMap {
    src: Sheaf,
    dst: Sheaf,
    mats: Vec<Matrix>,
}

impl SheafMap {
    pub fn new(src: Sheaf, dst: Sheaf, mats: Vec<Matrix>) -> Result<Self, SpaceError> {
        if src.base() != dst.base() {
            return Err(SpaceError::BadSheafMap("distinct bases".into()));
        }
        if mats.len() != src.base().n() {
            return Err(SpaceError::BadSheafMap("one matrix per element required".into()));
        }
        for (x, m) in mats.iter().enumerate() {
            if m.rows() != dst.dim(x) || m.cols() != src.dim(x) {
                return Err(SpaceError::BadSheafMap(format!(
                    "shape at {}: expected {}x{}, got {}x{}",
                    src.base().name(x),
                    dst.dim(x),
                    src.dim(x),
                    m.rows(),
                    m.cols()
                )));
            }
        }
        for x in 0..src.base().n() {
            for &y in &src.base().covers(x) {
                let lhs = mats[y].mul(&src.res(x, y));
                let rhs = dst.res(x, y).mul(&mats[x]);
                if lhs != rhs {
                    return Err(SpaceError::BadSheafMap(format!(
                        "not natural along {} <= {}",
                        src.base().name(x),
                        src.base().name(y)
                    )));
                }
            }
        }
        Ok(SheafMap { src, dst, mats })
    }

    pub fn identity(s: &Sheaf) -> SheafMap {
        let mats = (0..s.base().n()).map(|x| Matrix::identity(s.field(), s.dim(x))).collect();
        SheafMap { src: s.clone(), dst: s.clone(), mats }
    }

    pub fn zero(src: &Sheaf, dst: &Sheaf) -> SheafMap {
        assert_eq!(src.base(), dst.base());
        let mats =
            (0..src.base().n()).map(|x| Matrix::zero(src.field(), dst.dim(x), src.dim(x))).collect();
        SheafMap { src: src.clone(), dst: dst.clone(), mats }
    }

    pub fn src(&self) -> &Sheaf {
        &self.src
    }

    pub fn dst(&self) -> &Sheaf {
        &self.dst
    }

    pub fn at(&self, x: usize) -> &Matrix {
        &self.mats[x]
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(|m| m.is_zero())
    }

    /// `self . other`: apply `other` first.
    pub fn compose(&self, other: &SheafMap) -> SheafMap {
        assert_eq!(&self.src, other.dst(), "sheaf map composition mismatch");
        let mats = (0..self.src.base().n()).map(|x| self.mats[x].mul(other.at(x))).collect();
        SheafMap { src: other.src.clone(), dst: self.dst.clone(), mats }
    }

    pub fn add(&self, other: &SheafMap) -> SheafMap {
        assert_eq!((&self.src, &self.dst), (&other.src, &other.dst));
        let mats = (0..self.src.base().n()).map(|x| self.mats[x].add(other.at(x))).collect();
        SheafMap { src: self.src.clone(), dst: self.dst.clone(), mats }
    }

    pub fn scale(&self, c: i64) -> SheafMap {
        let mats = self.mats.iter().map(|m| m.scale(c)).collect();
        SheafMap { src: self.src.clone(), dst: self.dst.clone(), mats }
    }

    pub fn sub(&self, other: &SheafMap) -> SheafMap {
        self.add(&other.scale(-1))
    }

    pub fn direct_sum(&self, other: &SheafMap) -> SheafMap {
        let mats = (0..self.src.base().n())
            .map(|x| Matrix::block_diag(self.src.field(), &[self.at(x), other.at(x)]))
            .collect();
        SheafMap {
            src: self.src.direct_sum(&other.src),
            dst: self.dst.direct_sum(&other.dst),
            mats,
        }
    }

    pub fn tensor(&self, other: &SheafMap) -> SheafMap {
        let mats =
            (0..self.src.base().n()).map(|x| self.at(x).kron(other.at(x))).collect();
        SheafMap { src: self.src.tensor(&other.src), dst: self.dst.tensor(&other.dst), mats }
    }

    pub fn pullback(u: &PosetMap, f: &SheafMap) -> SheafMap {
        let src = Sheaf::pullback(u, &f.src);
        let dst = Sheaf::pullback(u, &f.dst);
        let mats = (0..u.src().n()).map(|x| f.mats[u.apply(x)].clone()).collect();
        SheafMap { src, dst, mats }
    }

    /// Stalkwise kernel with induced restrictions, and its inclusion.
    pub fn kernel(&self) -> (Sheaf, SheafMap) {
        let base = self.src.base().clone();
        let field = self.src.field();
        let bases: Vec<Matrix> = (0..base.n()).map(|x| self.mats[x].kernel()).collect();
        let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
        let mut res = BTreeMap::new();
        for (x, y) in base.strict_pairs() {
            let rhs = self.src.res(x, y).mul(&bases[x]);
            let m = bases[y].solve(&rhs).expect("kernel is functorial");
            res.insert((x, y), m);
        }
        let k = Sheaf { base, field, dims, res };
        let incl = SheafMap { src: k.clone(), dst: self.src.clone(), mats: bases };
        (k, incl)
    }

    /// Stalkwise cokernel with induced restrictions, and its projection.
    pub fn cokernel(&self) -> (Sheaf, SheafMap) {
        let base = self.src.base().clone();
        let field = self.src.field();
        let mut projs = Vec::new();
        let mut dims = Vec::new();
        for x in 0..base.n() {
            let img = self.mats[x].image();
            let full = Matrix::identity(field, self.dst.dim(x));
            let chosen = extend_basis(&img, &full);
            // basis of the stalk: image columns then chosen complements;
            // projection = complement coordinates in that basis
            let basis = img.hstack(&full.select_columns(&chosen));
            let inv = basis.inverse().expect("basis");
            let mut proj = Matrix::zero(field, chosen.len(), self.dst.dim(x));
            for r in 0..chosen.len() {
                for c in 0..self.dst.dim(x) {
                    proj.set(r, c, inv.get(img.cols() + r, c));
                }
            }
            dims.push(chosen.len());
            projs.push(proj);
        }
        let mut res = BTreeMap::new();
        for (x, y) in base.strict_pairs() {
            // solve rho^Q . proj_x = proj_y . rho along a section of proj_x
            let m = projs[x]
                .solve_left(&projs[y].mul(&self.dst.res(x, y)))
                .expect("cokernel is functorial");
            res.insert((x, y), m);
        }
        let q = Sheaf { base, field, dims, res };
        let proj = SheafMap { src: self.dst.clone(), dst: q.clone(), mats: projs };
        (q, proj)
    }
}

/// Basis of the space of sheaf maps `A -> B`, as columns over the ambient
/// coordinates `(+)_x Hom(A(x), B(x))` (row-major per stalk, in element
/// order).
pub fn nat_space(a: &Sheaf, b: &Sheaf) -> Matrix {
    assert_eq!(a.base(), b.base());
    let field = a.field();
    let base = a.base();
    let sizes: Vec<usize> = (0..base.n()).map(|x| a.dim(x) * b.dim(x)).collect();
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &s| {
            let at = *acc;
            *acc += s;
            Some(at)
        })
        .collect();
    let total: usize = sizes.iter().sum();
    let mut rows = Vec::new();
    for x in 0..base.n() {
        for y in base.covers(x) {
            // phi_y . res^A - res^B . phi_x = 0
            let lhs = Matrix::identity(field, b.dim(y)).kron(&a.res(x, y).transpose());
            let rhs = b.res(x, y).kron(&Matrix::identity(field, a.dim(x)));
            let mut row = Matrix::zero(field, b.dim(y) * a.dim(x), total);
            for r in 0..row.rows() {
                for c in 0..lhs.cols() {
                    row.set(r, offsets[y] + c, lhs.get(r, c));
                }
                for c in 0..rhs.cols() {
                    let v = row.get(r, offsets[x] + c);
                    row.set(r, offsets[x] + c, field.sub(v, rhs.get(r, c)));
                }
            }
            rows.push(row);
        }
    }
    let mut system = Matrix::zero(field, 0, total);
    for r in rows {
        system = system.vstack(&r);
    }
    system.kernel()
}

/// Realize a column of `nat_space` coordinates as a sheaf map.
pub fn nat_element(a: &Sheaf, b: &Sheaf, v: &Matrix) -> SheafMap {
    let base = a.base();
    let mut mats = Vec::new();
    let mut off = 0;
    for x in 0..base.n() {
        let (rows, cols) = (b.dim(x), a.dim(x));
        let mut m = Matrix::zero(a.field(), rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, v.get(off + r * cols + c, 0));
            }
        }
        off += rows * cols;
        mats.push(m);
    }
    SheafMap::new(a.clone(), b.clone(), mats).expect("nat element")
}
