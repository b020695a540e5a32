//! Bounded cochain complexes.
//!
//! Conventions, used consistently by every construction in the workspace:
//! differentials raise degree and act on column vectors; `C[s]^k = C^{k+s}`
//! with differential `(-1)^s d`; the tensor differential is
//! `d(c ox d) = dc ox d + (-1)^deg(c) c ox dd`; the hom differential is
//! `(delta f) = d . f - (-1)^deg(f) f . d`. Each complex carries an integer
//! twist label; tensor adds twists, hom subtracts them.

use crate::field::Field;
use crate::matrix::{extend_basis, Matrix};
use crate::ComplexError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Complex {
    field: Field,
    lo: i64,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
    twist: i64,
}

impl Complex {
    pub fn from_parts(
        field: Field,
        lo: i64,
        dims: Vec<usize>,
        diffs: Vec<Matrix>,
        twist: i64,
    ) -> Result<Self, ComplexError> {
        if diffs.len() != dims.len().saturating_sub(1) {
            return Err(ComplexError::Shape {
                what: "complex".into(),
                detail: format!("{} degrees need {} differentials, got {}", dims.len(), dims.len().saturating_sub(1), diffs.len()),
            });
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.field() != field {
                return Err(ComplexError::FieldMismatch);
            }
            if d.rows() != dims[i + 1] || d.cols() != dims[i] {
                return Err(ComplexError::Shape {
                    what: "differential".into(),
                    detail: format!("degree {}: expected {}x{}, got {}x{}", lo + i as i64, dims[i + 1], dims[i], d.rows(), d.cols()),
                });
            }
        }
        for i in 0..diffs.len().saturating_sub(1) {
            if !diffs[i + 1].mul(&diffs[i]).is_zero() {
                return Err(ComplexError::NotAComplex { degree: lo + i as i64 });
            }
        }
        let mut c = Complex { field, lo, dims, diffs, twist };
        c.normalize();
        Ok(c)
    }

    pub fn zero_complex(field: Field) -> Self {
        Complex { field, lo: 0, dims: Vec::new(), diffs: Vec::new(), twist: 0 }
    }

    /// One space in a single degree, with zero differential.
    pub fn concentrated(field: Field, degree: i64, dim: usize, twist: i64) -> Self {
        let mut c = Complex { field, lo: degree, dims: vec![dim], diffs: Vec::new(), twist };
        c.normalize();
        c
    }

    fn normalize(&mut self) {
        while self.dims.first() == Some(&0) {
            self.dims.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.lo += 1;
        }
        while self.dims.last() == Some(&0) {
            self.dims.pop();
            self.diffs.pop();
        }
        if self.dims.is_empty() {
            self.lo = 0;
            self.diffs.clear();
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ell(&self) -> u64 {
        self.field.order()
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn is_zero_complex(&self) -> bool {
        self.dims.is_empty()
    }

    /// Lowest degree with a nonzero space; `0` for the zero complex, whose
    /// `lo()..=hi()` range is empty.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, k: i64) -> usize {
        if k < self.lo || k > self.hi() {
            0
        } else {
            self.dims[(k - self.lo) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// The differential out of degree `k`, shaped `dim(k+1) x dim(k)`.
    pub fn d(&self, k: i64) -> Matrix {
        if k >= self.lo && k < self.hi() {
            self.diffs[(k - self.lo) as usize].clone()
        } else {
            Matrix::zero(self.field, self.dim(k + 1), self.dim(k))
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        (self.lo..=self.hi()).map(|k| (1 - 2 * (k.rem_euclid(2))) * self.dim(k) as i64).sum()
    }

    pub fn shift(&self, s: i64) -> Complex {
        let sign = if s.rem_euclid(2) == 0 { 1 } else { -1 };
        let mut c = Complex {
            field: self.field,
            lo: self.lo - s,
            dims: self.dims.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(sign)).collect(),
            twist: self.twist,
        };
        c.normalize();
        c
    }

    pub fn twisted(&self, t: i64) -> Complex {
        let mut c = self.clone();
        c.twist += t;
        c
    }

    pub fn direct_sum(&self, other: &Complex) -> Complex {
        assert_eq!(self.field, other.field, "direct sum over distinct fields");
        assert_eq!(self.twist, other.twist, "direct sum of distinct twists");
        if self.is_zero_complex() {
            return other.clone();
        }
        if other.is_zero_complex() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let dims: Vec<usize> = (lo..=hi).map(|k| self.dim(k) + other.dim(k)).collect();
        let diffs: Vec<Matrix> = (lo..hi)
            .map(|k| Matrix::block_diag(self.field, &[&self.d(k), &other.d(k)]))
            .collect();
        Complex::from_parts(self.field, lo, dims, diffs, self.twist).expect("direct sum")
    }

    /// Per degree, the summands `C^i ox D^j` are laid out in increasing `i`,
    /// each in Kronecker (left-factor-major) coordinates; see
    /// [`tensor_layout`].
    pub fn tensor(&self, other: &Complex) -> Complex {
        if self.is_zero_complex() || other.is_zero_complex() {
            let mut z = Complex::zero_complex(self.field);
            z.twist = self.twist + other.twist;
            return z;
        }
        let lo = self.lo + other.lo;
        let hi = self.hi() + other.hi();
        let width = |k: i64| -> usize {
            tensor_layout(self, other, k)
                .last()
                .map_or(0, |&(i, off)| off + self.dim(i) * other.dim(k - i))
        };
        let dims: Vec<usize> = (lo..=hi).map(width).collect();
        let mut diffs = Vec::new();
        for k in lo..hi {
            let dst = tensor_layout(self, other, k + 1);
            let mut d = Matrix::zero(self.field, dims[(k + 1 - lo) as usize], dims[(k - lo) as usize]);
            for (i, col0) in tensor_layout(self, other, k) {
                let j = k - i;
                // left differential: block (i, j) -> (i + 1, j)
                if let Some(&(_, row0)) = dst.iter().find(|&&(b, _)| b == i + 1) {
                    let m = self.d(i).kron(&Matrix::identity(self.field, other.dim(j)));
                    put_block(&mut d, row0, col0, &m);
                }
                // right differential with Koszul sign: block (i, j) -> (i, j + 1)
                if let Some(&(_, row0)) = dst.iter().find(|&&(b, _)| b == i) {
                    let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
                    let m = Matrix::identity(self.field, self.dim(i)).kron(&other.d(j)).scale(sign);
                    put_block(&mut d, row0, col0, &m);
                }
            }
            diffs.push(d);
        }
        Complex::from_parts(self.field, lo, dims, diffs, self.twist + other.twist).expect("tensor")
    }

    pub fn cohomology(&self) -> CohomologyTable {
        let mut degrees = Vec::new();
        for k in self.lo..=self.hi() {
            let cycles = self.d(k).kernel();
            let boundaries = self.d(k - 1).image();
            let chosen = extend_basis(&boundaries, &cycles);
            let reps = cycles.select_columns(&chosen);
            degrees.push(HDegree { boundaries, reps });
        }
        CohomologyTable { field: self.field, lo: self.lo, degrees }
    }

    /// `(degree, dim H)` for the degrees with nonzero cohomology.
    pub fn h_dims(&self) -> Vec<(i64, usize)> {
        self.cohomology().table()
    }

    pub fn is_acyclic(&self) -> bool {
        self.h_dims().is_empty()
    }
}

/// Layout of degree `k` of `a.tensor(b)`: the nonzero summands
/// `a^i ox b^(k-i)` as `(i, column offset)`, in increasing `i`.
pub fn tensor_layout(a: &Complex, b: &Complex, k: i64) -> Vec<(i64, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for i in a.lo()..=a.hi() {
        if a.dim(i) > 0 && b.dim(k - i) > 0 {
            out.push((i, off));
            off += a.dim(i) * b.dim(k - i);
        }
    }
    out
}

pub(crate) fn put_block(d: &mut Matrix, row0: usize, col0: usize, m: &Matrix) {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            d.set(row0 + r, col0 + c, m.get(r, c));
        }
    }
}

struct HDegree {
    boundaries: Matrix,
    reps: Matrix,
}

/// Chosen cocycle representatives for every cohomology degree of a fixed
/// complex, with deterministic coordinates for arbitrary cocycles.
pub struct CohomologyTable {
    field: Field,
    lo: i64,
    degrees: Vec<HDegree>,
}

impl CohomologyTable {
    pub fn h_dim(&self, k: i64) -> usize {
        self.degree(k).map_or(0, |d| d.reps.cols())
    }

    fn degree(&self, k: i64) -> Option<&HDegree> {
        if k < self.lo {
            None
        } else {
            self.degrees.get((k - self.lo) as usize)
        }
    }

    pub fn table(&self) -> Vec<(i64, usize)> {
        (0..self.degrees.len())
            .map(|i| (self.lo + i as i64, self.degrees[i].reps.cols()))
            .filter(|&(_, d)| d > 0)
            .collect()
    }

    /// Representative cocycles for `H^k`, as columns.
    pub fn reps(&self, k: i64) -> Option<&Matrix> {
        self.degree(k).map(|d| &d.reps)
    }

    /// Class of the cocycle `v` in the chosen basis of `H^k`.
    /// `None` when `v` is not a combination of boundaries and representatives,
    /// i.e. not a cocycle of this complex.
    pub fn coords(&self, k: i64, v: &Matrix) -> Option<Matrix> {
        let Some(deg) = self.degree(k) else {
            return v.is_zero().then(|| Matrix::zero(self.field, 0, v.cols()));
        };
        let span = deg.boundaries.hstack(&deg.reps);
        let sol = span.solve(v)?;
        let idx: Vec<usize> = (deg.boundaries.cols()..span.cols()).collect();
        let mut out = Matrix::zero(self.field, deg.reps.cols(), v.cols());
        for (r, &i) in idx.iter().enumerate() {
            for c in 0..v.cols() {
                out.set(r, c, sol.get(i, c));
            }
        }
        Some(out)
    }
}
