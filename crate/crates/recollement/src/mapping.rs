//! Mapping-space decompositions over a split.
//!
//! Maps between two glued objects can be computed three ways: in the
//! ambient category directly, as the fiber of the difference map on the
//! two local mapping complexes, or through the square-then-fiber formula
//! that isolates the comparison data.  All three have the same cohomology;
//! the reports here compute each presentation independently so tests and
//! verification suites can compare them dimension by dimension.

use std::collections::BTreeMap;

use tame_complex::{
    hom_complex, hom_layout, ChainMap, Complex, Matrix,
};
use tame_cyclic::LevelSystem;
use tame_poset::{closed_restrict, resolve, resolve_map, Pushforward, Resolved, ShMap};

use crate::equivariant::EqTriple;
use crate::homs::{add_sandwich, derived_sh_hom, fiber_of, proj_summand, sum_map, ShHomSpace};
use crate::triple::{reconstruct, Triple};
use crate::RecError;

/// Cohomology dimensions of the three presentations of one mapping space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingReport {
    /// Maps computed between the two glued complexes on the whole space.
    pub ambient: Vec<(i64, usize)>,
    /// Fiber of the difference map on the two local mapping complexes.
    pub direct: Vec<(i64, usize)>,
    /// The square-then-fiber presentation through the comparison maps.
    pub formula: Vec<(i64, usize)>,
}

impl MappingReport {
    pub fn agrees(&self) -> bool {
        self.ambient == self.direct && self.direct == self.formula
    }
}

/// The operator that pushes a stalkwise family on the open part through
/// the section-level pushforward, landing in the closed-part mapping
/// complex into the resolved target.  Composition with `pre` (when given)
/// happens on the source side.
fn section_transport(
    hom_open: &ShHomSpace,
    target: &ShHomSpace,
    push_x: &Pushforward,
    push_y: &Pushforward,
    closed_incl: &tame_poset::PosetMap,
    res_target: &Resolved,
    pre: Option<&ShMap>,
) -> ChainMap {
    let jx = push_x.resolution().complex().clone();
    let jy = push_y.resolution().complex().clone();
    let field = jx.field();
    let aug = res_target.aug().clone();
    let zp = closed_incl.src().clone();
    let src_c = target.src().clone();
    let pre = pre.cloned();
    hom_open.transport(target, &move |n, fam| {
        let mut out: BTreeMap<(i64, usize), Matrix> = BTreeMap::new();
        for z in 0..zp.n() {
            let q = closed_incl.apply(z);
            let (mx, my) = (push_x.model(q), push_y.model(q));
            debug_assert_eq!(mx.open_set(), my.open_set());
            for i in src_c.lo()..=src_c.hi() {
                if src_c.dim(i, z) == 0 {
                    continue;
                }
                let (dx, dy) = (mx.dim(i), my.dim(i + n));
                let x_mat = if dy == 0 {
                    Matrix::zero(field, 0, dx)
                } else if dx == 0 {
                    Matrix::zero(field, dy, 0)
                } else {
                    // evaluate sections stalkwise, apply the family, and
                    // solve back through the target's section coordinates
                    let mut ex = Matrix::zero(field, 0, dx);
                    let mut ey = Matrix::zero(field, 0, dy);
                    let mut phi_blocks = Vec::new();
                    for &u in mx.open_set() {
                        ex = ex.vstack(&mx.stalk_evaluation(&jx, u, i));
                        ey = ey.vstack(&my.stalk_evaluation(&jy, u, i + n));
                        phi_blocks.push(fam.get(&(i, u)).cloned().unwrap_or_else(|| {
                            Matrix::zero(field, jy.dim(i + n, u), jx.dim(i, u))
                        }));
                    }
                    let refs: Vec<&Matrix> = phi_blocks.iter().collect();
                    let phi = Matrix::block_diag(field, &refs);
                    ey.solve(&phi.mul(&ex)).expect("families of stalk maps preserve sections")
                };
                let mut m = aug.at(i + n).at(z).mul(&x_mat);
                if let Some(p) = &pre {
                    m = m.mul(p.at(i).at(z));
                }
                out.insert((i, z), m);
            }
        }
        out
    })
}

/// Compare the three presentations of the maps between two glued
/// complexes given by local data over one split.
pub fn mapping_decomposition(tx: &Triple, ty: &Triple) -> Result<MappingReport, RecError> {
    let dec = tx.dec();
    if dec.ambient() != ty.dec().ambient() || dec.z_mask() != ty.dec().z_mask() {
        return Err(RecError::NotCompatible("the two triples live over different splits".into()));
    }
    let (_z, i_map) = dec.closed_part();

    // ambient: maps between the reconstructions on the whole space
    let fx = reconstruct(tx).complex;
    let fy = reconstruct(ty).complex;
    let ambient = derived_sh_hom(&fx, &fy).complex().h_dims();

    // local mapping complexes
    let ax = tx.closed_piece().clone();
    let (push_x, push_y) = (tx.pushforward(), ty.pushforward());
    let lbx = closed_restrict(dec, push_x.complex());
    let lby = closed_restrict(dec, push_y.complex());
    let res_ay = resolve(ty.closed_piece());
    let res_lby = resolve(&lby);
    let jmap = resolve_map(ty.comparison(), &res_ay, &res_lby);

    let hom_a = ShHomSpace::new(&ax, res_ay.complex());
    let hom_open = ShHomSpace::new(push_x.resolution().complex(), push_y.resolution().complex());
    let hom_alb = ShHomSpace::new(&ax, res_lby.complex());
    let hom_lb = ShHomSpace::new(&lbx, res_lby.complex());

    // direct: fiber of (a, b) -> J a - L(b) over the comparison target
    let post_j = hom_a.postcompose(&hom_alb, &jmap);
    let l_full = section_transport(
        &hom_open,
        &hom_alb,
        push_x,
        push_y,
        &i_map,
        &res_lby,
        Some(tx.comparison()),
    );
    let sum_ab = hom_a.complex().direct_sum(hom_open.complex());
    let (fib, _) = fiber_of(&sum_map(&sum_ab, &post_j, &l_full.neg()));
    let direct = fib.h_dims();

    // formula: first the square of the two comparison composites, then
    // the fiber against the open mapping complex
    let pre_theta = hom_lb.precompose(&hom_alb, tx.comparison());
    let sum_al = hom_a.complex().direct_sum(hom_lb.complex());
    let (sq, sq_proj) = fiber_of(&sum_map(&sum_al, &post_j, &pre_theta.neg()));
    let pr_c = proj_summand(&sum_al, hom_a.complex(), hom_lb.complex(), 1).compose(&sq_proj);
    let l_plain =
        section_transport(&hom_open, &hom_lb, push_x, push_y, &i_map, &res_lby, None);
    let sum_sq = sq.direct_sum(hom_open.complex());
    let (fib2, _) = fiber_of(&sum_map(&sum_sq, &pr_c, &l_plain.neg()));
    let formula = fib2.h_dims();

    Ok(MappingReport { ambient, direct, formula })
}

/// The chain complex of maps between two level systems: inside the sum of
/// the levelwise mapping complexes, the subcomplex of families commuting
/// with the actions and the inflations.
pub struct SystemHomSpace {
    src: LevelSystem,
    dst: LevelSystem,
    lo: i64,
    bases: Vec<Matrix>,
    complex: Complex,
}

impl SystemHomSpace {
    pub fn new(src: &LevelSystem, dst: &LevelSystem) -> Result<Self, RecError> {
        if src.levels() != dst.levels() {
            return Err(RecError::NotCompatible("level sets differ".into()));
        }
        let levels = src.levels();
        let field = src.complex(1).field();
        let homs: Vec<Complex> =
            levels.iter().map(|&n| hom_complex(src.complex(n), dst.complex(n))).collect();
        let lo = homs.iter().map(|h| h.lo()).min().unwrap_or(0);
        let hi = homs.iter().map(|h| h.hi()).max().unwrap_or(-1);
        let mut bases = Vec::new();
        let mut dims = Vec::new();
        for k in lo..=hi {
            let total: usize = homs.iter().map(|h| h.dim(k)).sum();
            let mut rows = Matrix::zero(field, 0, total);
            // actions: the generator must intertwine each level
            for (li, &n) in levels.iter().enumerate() {
                let col0: usize = homs[..li].iter().map(|h| h.dim(k)).sum();
                let (gx, gy) = (src.action(n).generator(), dst.action(n).generator());
                let layout = hom_layout(src.complex(n), dst.complex(n), k);
                let mut c = Matrix::zero(field, homs[li].dim(k), total);
                for &(i, off) in &layout {
                    let id_s = Matrix::identity(field, src.complex(n).dim(i));
                    let id_t = Matrix::identity(field, dst.complex(n).dim(i + k));
                    add_sandwich(&mut c, off, col0 + off, &gy.mat(i + k), &id_s, 1);
                    add_sandwich(&mut c, off, col0 + off, &id_t, &gx.mat(i), -1);
                }
                rows = rows.vstack(&c);
            }
            // inflations: the square over each divisible pair must commute
            for (ai, &a) in levels.iter().enumerate() {
                for (bi, &b) in levels.iter().enumerate() {
                    if !(a < b && b % a == 0) {
                        continue;
                    }
                    let col_a: usize = homs[..ai].iter().map(|h| h.dim(k)).sum();
                    let col_b: usize = homs[..bi].iter().map(|h| h.dim(k)).sum();
                    let (ix, iy) = (src.inflation(a, b), dst.inflation(a, b));
                    let mixed = hom_layout(src.complex(a), dst.complex(b), k);
                    let total_mixed: usize = mixed
                        .last()
                        .map_or(0, |&(i, off)| {
                            off + src.complex(a).dim(i) * dst.complex(b).dim(i + k)
                        });
                    let mut c = Matrix::zero(field, total_mixed, total);
                    let la = hom_layout(src.complex(a), dst.complex(a), k);
                    let lb = hom_layout(src.complex(b), dst.complex(b), k);
                    for &(i, off_t) in &mixed {
                        if let Some(&(_, off_s)) = la.iter().find(|&&(s, _)| s == i) {
                            let id_s = Matrix::identity(field, src.complex(a).dim(i));
                            add_sandwich(&mut c, off_t, col_a + off_s, &iy.mat(i + k), &id_s, 1);
                        }
                        if let Some(&(_, off_s)) = lb.iter().find(|&&(s, _)| s == i) {
                            let id_t = Matrix::identity(field, dst.complex(b).dim(i + k));
                            add_sandwich(&mut c, off_t, col_b + off_s, &id_t, &ix.mat(i), -1);
                        }
                    }
                    rows = rows.vstack(&c);
                }
            }
            bases.push(rows.kernel());
            dims.push(bases.last().unwrap().cols());
        }
        let mut diffs = Vec::new();
        for k in lo..hi {
            let blocks: Vec<Matrix> = homs.iter().map(|h| h.d(k)).collect();
            let refs: Vec<&Matrix> = blocks.iter().collect();
            let amb = Matrix::block_diag(field, &refs);
            let idx = (k - lo) as usize;
            let d = bases[idx + 1]
                .solve(&amb.mul(&bases[idx]))
                .expect("constraints are preserved by the mapping differential");
            diffs.push(d);
        }
        let twist = dst.complex(1).twist() - src.complex(1).twist();
        let complex =
            Complex::from_parts(field, lo, dims, diffs, twist).map_err(|e| {
                RecError::NotCompatible(format!("system mapping complex: {e}"))
            })?;
        Ok(SystemHomSpace { src: src.clone(), dst: dst.clone(), lo, bases, complex })
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn src(&self) -> &LevelSystem {
        &self.src
    }

    pub fn dst(&self) -> &LevelSystem {
        &self.dst
    }

    /// Projection onto the level-1 component of each family.
    pub fn level_one_map(&self) -> ChainMap {
        let field = self.complex.field();
        let (bx, by) = (self.src.complex(1), self.dst.complex(1));
        let target = hom_complex(bx, by);
        let levels = self.src.levels();
        let pos = levels.iter().position(|&n| n == 1).expect("level 1 present");
        let mut mats = Vec::new();
        for k in self.complex.lo()..=self.complex.hi() {
            let off: usize = levels[..pos]
                .iter()
                .map(|&n| hom_complex(self.src.complex(n), self.dst.complex(n)).dim(k))
                .sum();
            let basis = &self.bases[(k - self.lo) as usize];
            let mut sel = Matrix::zero(field, target.dim(k), basis.rows());
            for r in 0..target.dim(k) {
                sel.set(r, off + r, 1);
            }
            mats.push((k, sel.mul(basis)));
        }
        ChainMap::new(self.complex.clone(), target, mats).expect("level projection is a chain map")
    }
}

/// Cohomology dimensions of the two presentations of the maps between two
/// formal glued objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqMappingReport {
    /// Fiber of the difference map on the two component mapping complexes.
    pub ambient: Vec<(i64, usize)>,
    /// The square-then-fiber presentation through the comparison maps.
    pub formula: Vec<(i64, usize)>,
}

impl EqMappingReport {
    pub fn agrees(&self) -> bool {
        self.ambient == self.formula
    }
}

/// Postcomposition with a chain map, on hom complexes.
fn hom_postcompose(a: &Complex, b: &Complex, b2: &Complex, t: &ChainMap) -> ChainMap {
    let field = a.field();
    let (src, dst) = (hom_complex(a, b), hom_complex(a, b2));
    let mut mats = Vec::new();
    for k in src.lo()..=src.hi() {
        let mut m = Matrix::zero(field, dst.dim(k), src.dim(k));
        let lt = hom_layout(a, b2, k);
        for &(i, off_s) in &hom_layout(a, b, k) {
            if let Some(&(_, off_t)) = lt.iter().find(|&&(s, _)| s == i) {
                let id = Matrix::identity(field, a.dim(i));
                add_sandwich(&mut m, off_t, off_s, &t.mat(i + k), &id, 1);
            }
        }
        mats.push((k, m));
    }
    ChainMap::new(src, dst, mats).expect("postcomposition is a chain map")
}

/// Precomposition with a chain map, on hom complexes.
fn hom_precompose(a2: &Complex, a: &Complex, b: &Complex, s: &ChainMap) -> ChainMap {
    let field = a.field();
    let (src, dst) = (hom_complex(a, b), hom_complex(a2, b));
    let mut mats = Vec::new();
    for k in src.lo()..=src.hi() {
        let mut m = Matrix::zero(field, dst.dim(k), src.dim(k));
        let lt = hom_layout(a2, b, k);
        for &(i, off_s) in &hom_layout(a, b, k) {
            if let Some(&(_, off_t)) = lt.iter().find(|&&(x, _)| x == i) {
                let id = Matrix::identity(field, b.dim(i + k));
                add_sandwich(&mut m, off_t, off_s, &id, &s.mat(i), 1);
            }
        }
        mats.push((k, m));
    }
    ChainMap::new(src, dst, mats).expect("precomposition is a chain map")
}

/// Compare the two presentations of maps between formal glued objects.
pub fn eq_mapping_decomposition(tx: &EqTriple, ty: &EqTriple) -> Result<EqMappingReport, RecError> {
    if tx.sys.levels() != ty.sys.levels() {
        return Err(RecError::NotCompatible("level sets differ".into()));
    }
    let (ax, ay) = (&tx.a, &ty.a);
    let (bx1, by1) = (tx.sys.complex(1), ty.sys.complex(1));
    let ham = hom_complex(ax, ay);
    let sysh = SystemHomSpace::new(&tx.sys, &ty.sys)?;

    // ambient: fiber of (a, b) -> theta_y a - b_1 theta_x
    let p1 = hom_postcompose(ax, ay, by1, &ty.theta);
    let p2 = hom_precompose(ax, bx1, by1, &tx.theta).compose(&sysh.level_one_map());
    let sum_ab = ham.direct_sum(sysh.complex());
    let (fib, _) = fiber_of(&sum_map(&sum_ab, &p1, &p2.neg()));
    let ambient = fib.h_dims();

    // formula: square over the level-1 mapping complex, then the fiber
    let hbb = hom_complex(bx1, by1);
    let q1 = hom_postcompose(ax, ay, by1, &ty.theta);
    let q2 = hom_precompose(ax, bx1, by1, &tx.theta);
    let sum_ah = ham.direct_sum(&hbb);
    let (sq, sq_proj) = fiber_of(&sum_map(&sum_ah, &q1, &q2.neg()));
    let pr_c = proj_summand(&sum_ah, &ham, &hbb, 1).compose(&sq_proj);
    let sum_sq = sq.direct_sum(sysh.complex());
    let (fib2, _) = fiber_of(&sum_map(&sum_sq, &pr_c, &sysh.level_one_map().neg()));
    let formula = fib2.h_dims();

    Ok(EqMappingReport { ambient, formula })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivariant::constant_system;
    use rand::SeedableRng;
    use tame_complex::Field;
    use tame_cyclic::CyclicAction;
    use tame_poset::OpenClosedDecomposition;

    fn random_triple(
        rng: &mut rand_chacha::ChaCha8Rng,
        dec: &OpenClosedDecomposition,
        field: Field,
    ) -> Triple {
        let f = tame_poset::gen::random_shcomplex(rng, dec.ambient(), field, -1, 3, 2);
        crate::triple::decompose(dec, &f).triple
    }

    #[test]
    fn all_three_presentations_of_the_mapping_space_agree() {
        let dec = OpenClosedDecomposition::pseudodisk_origin(2).unwrap();
        let field = Field::new(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..3 {
            let tx = random_triple(&mut rng, &dec, field);
            let ty = random_triple(&mut rng, &dec, field);
            let report = mapping_decomposition(&tx, &ty).unwrap();
            assert!(report.agrees(), "{report:?}");
        }
    }

    #[test]
    fn system_mapping_complex_cuts_out_the_equivariant_families() {
        let field = Field::new(5).unwrap();
        // level 1: one trivial dimension; level 2: the swap representation
        let c = Complex::concentrated(field, 0, 1, 0);
        let c2 = Complex::concentrated(field, 0, 2, 0);
        let swap = ChainMap::new(
            c2.clone(),
            c2.clone(),
            vec![(0, Matrix::from_rows(field, 2, 2, &[vec![0, 1], vec![1, 0]]).unwrap())],
        )
        .unwrap();
        let mut actions = BTreeMap::new();
        actions.insert(1, CyclicAction::trivial(&c, 1));
        actions.insert(2, CyclicAction::new(2, swap).unwrap());
        let mut inflations = BTreeMap::new();
        inflations.insert(
            (1, 2),
            ChainMap::new(
                c.clone(),
                c2.clone(),
                vec![(0, Matrix::from_rows(field, 2, 1, &[vec![1], vec![1]]).unwrap())],
            )
            .unwrap(),
        );
        let sys = LevelSystem::new(actions, inflations).unwrap();
        // maps sys -> sys: level 2 commutes with the swap (two parameters)
        // and the inflation square then pins the level-1 scalar
        let hs = SystemHomSpace::new(&sys, &sys).unwrap();
        assert_eq!(hs.complex().h_dims(), vec![(0, 2)]);
        // into the constant system: equivariance symmetrizes the level-2
        // row, and the square ties the level-1 scalar to it
        let con = constant_system(&[1, 2], &c);
        let hs2 = SystemHomSpace::new(&sys, &con).unwrap();
        assert_eq!(hs2.complex().h_dims(), vec![(0, 1)]);
    }

    #[test]
    fn formal_mapping_reports_reduce_to_the_pieces_and_agree_mixed(
    ) {
        let field = Field::new(3).unwrap();
        let levels = [1u64, 2, 4];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let rand_c = |rng: &mut rand_chacha::ChaCha8Rng| {
            tame_complex::gen::random_complex(rng, field, -1, 3, 2)
        };
        let zero = Complex::zero_complex(field);
        for _ in 0..4 {
            let (a, a2) = (rand_c(&mut rng), rand_c(&mut rng));
            let (b, b2) = (rand_c(&mut rng), rand_c(&mut rng));
            let closed = |c: &Complex| EqTriple {
                a: c.clone(),
                sys: constant_system(&levels, &zero),
                theta: ChainMap::zero_map(c, &zero),
            };
            let open = |c: &Complex| EqTriple {
                a: zero.clone(),
                sys: constant_system(&levels, c),
                theta: ChainMap::zero_map(&zero, c),
            };
            // both supported on the closed side: plain mapping complex
            let r = eq_mapping_decomposition(&closed(&a), &closed(&a2)).unwrap();
            assert!(r.agrees());
            assert_eq!(r.ambient, hom_complex(&a, &a2).h_dims());
            // both from the open side: the system mapping complex
            let r = eq_mapping_decomposition(&open(&b), &open(&b2)).unwrap();
            assert!(r.agrees());
            let sh = SystemHomSpace::new(
                &constant_system(&levels, &b),
                &constant_system(&levels, &b2),
            )
            .unwrap();
            assert_eq!(r.ambient, sh.complex().h_dims());
            // mixed pairs still agree across the presentations
            let mixed = EqTriple {
                a: a.clone(),
                sys: constant_system(&levels, &b),
                theta: ChainMap::zero_map(&a, &b),
            };
            let mixed2 = EqTriple {
                a: a2.clone(),
                sys: constant_system(&levels, &b2),
                theta: ChainMap::zero_map(&a2, &b2),
            };
            let r = eq_mapping_decomposition(&mixed, &mixed2).unwrap();
            assert!(r.agrees());
        }
    }
}
