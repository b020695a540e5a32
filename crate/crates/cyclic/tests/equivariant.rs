//! Behavior checks for strict cyclic symmetries: averaging against kernel
//! computations, homotopy fixed points against the two-periodic group
//! cohomology recursion, level systems with fault injection, and the
//! stabilized cone towers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use tame_complex::gen::{random_chain_map, random_complex, random_invertible};
use tame_complex::{ChainMap, Complex, Field, Matrix};
use tame_cyclic::{
    categorical_lemma_check, chern_colimit, fixed_map, fixed_points, homotopy_fixed_points,
    homotopy_fixed_points_map, ChernDatum, CyclicAction, CyclicError, DivisibilityDiagram,
    LevelSystem,
};
use tame_testlab::cyclic_cohomology;

fn h_dim(c: &Complex, k: i64) -> usize {
    c.h_dims().iter().find(|&&(d, _)| d == k).map_or(0, |&(_, n)| n)
}

/// m copies of `d` cyclically permuted by the generator.
fn induced_action(d: &Complex, m: u64) -> CyclicAction {
    let field = d.field();
    let mut c = d.clone();
    for _ in 1..m {
        c = c.direct_sum(d);
    }
    let mut mats = Vec::new();
    for k in d.lo()..=d.hi() {
        let s = d.dim(k);
        let mut g = Matrix::zero(field, s * m as usize, s * m as usize);
        for t in 0..m as usize {
            let t2 = (t + 1) % m as usize;
            for r in 0..s {
                g.set(t2 * s + r, t * s + r, 1);
            }
        }
        mats.push((k, g));
    }
    let gen = ChainMap::new(c.clone(), c, mats).expect("permuting copies is a chain map");
    CyclicAction::new(m, gen).expect("permutation closes up")
}

/// The diagonal embedding of `d` into the m-fold induced complex.
fn diagonal_map(d: &Complex, induced: &Complex, m: u64) -> ChainMap {
    let field = d.field();
    let mats = (d.lo()..=d.hi())
        .map(|k| {
            let id = Matrix::identity(field, d.dim(k));
            let mut stacked = id.clone();
            for _ in 1..m {
                stacked = stacked.vstack(&id);
            }
            (k, stacked)
        })
        .collect();
    ChainMap::new(d.clone(), induced.clone(), mats).expect("diagonal is a chain map")
}

/// A random strict order-n action on a module in degree zero: block cycles
/// of lengths dividing n, conjugated by a random invertible matrix. Also
/// returns the generator's rows for the independent recursion oracle.
fn random_module_action(
    rng: &mut ChaCha8Rng,
    field: Field,
    n: u64,
) -> (CyclicAction, Vec<Vec<u64>>) {
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut blocks = Vec::new();
    let mut total = 0usize;
    while total == 0 || (total < 5 && rng.gen_bool(0.6)) {
        let d = divisors[rng.gen_range(0..divisors.len())] as usize;
        blocks.push(d);
        total += d;
    }
    let mut b = Matrix::zero(field, total, total);
    let mut off = 0;
    for d in blocks {
        for r in 0..d {
            b.set(off + (r + 1) % d, off + r, 1);
        }
        off += d;
    }
    let p = random_invertible(rng, field, total);
    let g = p.mul(&b).mul(&p.inverse().expect("invertible"));
    let c = Complex::concentrated(field, 0, total, 0);
    let gen = ChainMap::new(c.clone(), c, vec![(0, g.clone())]).expect("module generator");
    let act = CyclicAction::new(n, gen).expect("conjugated cycles close up");
    let rows = (0..total)
        .map(|r| (0..total).map(|cc| g.get(r, cc) as u64).collect())
        .collect();
    (act, rows)
}

/// The cyclic shift on the rank-m module in degree zero.
fn shift_action(field: Field, m: u64) -> CyclicAction {
    let c = Complex::concentrated(field, 0, m as usize, 0);
    let mut g = Matrix::zero(field, m as usize, m as usize);
    for r in 0..m as usize {
        g.set((r + 1) % m as usize, r, 1);
    }
    let gen = ChainMap::new(c.clone(), c, vec![(0, g)]).expect("shift generator");
    CyclicAction::new(m, gen).expect("shift closes up")
}

#[test]
fn generators_must_close_up_strictly() {
    let field = Field::new(5).unwrap();
    let act = shift_action(field, 3);
    let gen = act.generator().clone();
    assert!(CyclicAction::new(6, gen.clone()).is_ok(), "order may be any multiple");
    assert!(matches!(
        CyclicAction::new(2, gen),
        Err(CyclicError::NotPeriodic { order: 2 })
    ));
    let c3 = Complex::concentrated(field, 0, 3, 0);
    let c4 = Complex::concentrated(field, 0, 4, 0);
    let not_endo = ChainMap::zero_map(&c3, &c4);
    assert!(matches!(
        CyclicAction::new(2, not_endo),
        Err(CyclicError::NotEndomorphism)
    ));
}

#[test]
fn averaging_agrees_with_the_kernel_of_the_subgroup_generator() {
    for (ell, n, m) in [(2u64, 3u64, 3u64), (3, 4, 2), (5, 6, 3), (7, 4, 4)] {
        let field = Field::new(ell).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(ell * 100 + n * 10 + m);
        for _ in 0..6 {
            let d = random_complex(&mut rng, field, -1, 3, 2);
            let act = induced_action(&d, n);
            let fp = fixed_points(&act, m).unwrap();
            assert_eq!(fp.action.order(), n / m);

            // Independent route: the strict kernel of h - 1 for the
            // subgroup generator h, made into a complex directly.
            let c = act.complex();
            let h = act.power(n / m);
            let mut dims = Vec::new();
            let mut bases = Vec::new();
            for k in c.lo()..=c.hi() {
                let ker = h.mat(k).sub(&Matrix::identity(field, c.dim(k))).kernel();
                dims.push(ker.cols());
                bases.push(ker);
            }
            let mut diffs = Vec::new();
            for i in 0..bases.len().saturating_sub(1) {
                let k = c.lo() + i as i64;
                diffs.push(bases[i + 1].solve(&c.d(k).mul(&bases[i])).unwrap());
            }
            let kernel_complex =
                Complex::from_parts(field, c.lo(), dims, diffs, c.twist()).unwrap();
            assert_eq!(fp.action.complex().h_dims(), kernel_complex.h_dims());

            // Projector identities.
            let round = fp.project.compose(&fp.include);
            assert_eq!(round, ChainMap::identity(fp.action.complex()));

            // Exactness: invariants of the induced action on cohomology.
            let tab = c.cohomology();
            for k in c.lo()..=c.hi() {
                let Some(reps) = tab.reps(k) else { continue };
                if reps.cols() == 0 {
                    assert_eq!(h_dim(fp.action.complex(), k), 0);
                    continue;
                }
                let induced = tab.coords(k, &h.mat(k).mul(reps)).unwrap();
                let inv = induced
                    .sub(&Matrix::identity(field, induced.rows()))
                    .kernel()
                    .cols();
                assert_eq!(h_dim(fp.action.complex(), k), inv);
            }
        }
    }
}

#[test]
fn the_regular_representation_has_one_dimensional_invariants() {
    for (ell, m) in [(3u64, 4u64), (5, 3), (2, 5)] {
        let field = Field::new(ell).unwrap();
        let act = shift_action(field, m);
        let fp = fixed_points(&act, m).unwrap();
        assert_eq!(fp.action.complex().h_dims(), vec![(0, 1)]);
    }
    // Averaging refuses subgroup orders divisible by the characteristic.
    let field = Field::new(3).unwrap();
    let act = shift_action(field, 3);
    assert!(matches!(
        fixed_points(&act, 3),
        Err(CyclicError::OrderNotInvertible { m: 3, ell: 3 })
    ));
}

#[test]
fn inflation_and_invariants_form_a_strict_adjunction() {
    let field = Field::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..5 {
        // Unit at a: invariants of the inflated action present a strictly.
        let d = random_complex(&mut rng, field, 0, 3, 2);
        let a = induced_action(&d, 2);
        let infl = a.inflate(3);
        assert_eq!(infl.order(), 6);
        let fp = fixed_points(&infl, 3).unwrap();
        assert_eq!(fp.include, ChainMap::identity(a.complex()));
        assert_eq!(fp.project, ChainMap::identity(a.complex()));
        assert_eq!(fp.action.generator(), a.generator());
        assert_eq!(fp.action.order(), a.order());

        // Counit at b: the inclusion of invariants is equivariant, and its
        // own invariants compose with the unit to the identity.
        let e = random_complex(&mut rng, field, -1, 3, 2);
        let b = induced_action(&e, 6);
        let fp = fixed_points(&b, 3).unwrap();
        let infl_fix = fp.action.inflate(3);
        assert!(CyclicAction::intertwines(&infl_fix, &b, &fp.include));
        let fp2 = fixed_points(&infl_fix, 3).unwrap();
        let triangle = fixed_map(&fp2, &fp, &fp.include);
        assert_eq!(triangle, ChainMap::identity(fp.action.complex()));
    }
}

#[test]
fn homotopy_fixed_points_match_the_group_cohomology_recursion() {
    for (ell, n) in [(2u64, 2u64), (2, 4), (3, 3), (3, 6), (5, 5), (5, 2)] {
        let field = Field::new(ell).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(ell * 1000 + n);
        for _ in 0..8 {
            let (act, rows) = random_module_action(&mut rng, field, n);
            let expected = cyclic_cohomology(&rows, n, ell);
            let h = homotopy_fixed_points(&act, 0, 4);
            assert_eq!(h.window, (0, 3));
            assert_eq!(h_dim(&h.complex, 0), expected[0]);
            assert_eq!(h_dim(&h.complex, 1), expected[1]);
            assert_eq!(h_dim(&h.complex, 2), expected[2]);
            // Two-periodicity above degree zero.
            assert_eq!(h_dim(&h.complex, 3), expected[1]);
        }
    }
}

#[test]
fn trivial_actions_of_divisible_order_have_constant_cohomology() {
    for (ell, n) in [(2u64, 2u64), (2, 6), (3, 3), (5, 10)] {
        let field = Field::new(ell).unwrap();
        let c = Complex::concentrated(field, 0, 1, 0);
        let act = CyclicAction::trivial(&c, n);
        let h = homotopy_fixed_points(&act, 0, 6);
        assert_eq!(h.window, (0, 5));
        for t in 0..=h.window.1 {
            assert_eq!(h_dim(&h.complex, t), 1);
        }
    }
}

#[test]
fn coprime_orders_see_only_the_invariants() {
    for (ell, n) in [(2u64, 3u64), (3, 4), (5, 3), (7, 2)] {
        let field = Field::new(ell).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(n * 31 + ell);
        for _ in 0..4 {
            let d = random_complex(&mut rng, field, -1, 3, 2);
            let act = induced_action(&d, n);
            let fp = fixed_points(&act, n).unwrap();
            let h = homotopy_fixed_points(&act, -2, 5);
            for t in h.window.0..=h.window.1 {
                assert_eq!(h_dim(&h.complex, t), h_dim(fp.action.complex(), t));
            }
        }
    }
}

#[test]
fn totalizations_are_exact_on_mapping_cones_inside_the_window() {
    let mut checked = 0u32;
    for (ell, n) in [(2u64, 2u64), (3, 3), (5, 2)] {
        let field = Field::new(ell).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(ell + 7 * n);
        for _ in 0..4 {
            let d = random_complex(&mut rng, field, 0, 2, 2);
            let src = CyclicAction::trivial(&d, n);
            let dst = induced_action(&d, n);
            let diag = diagonal_map(&d, dst.complex(), n);
            assert!(CyclicAction::intertwines(&src, &dst, &diag));

            let (fmap, fwin) = homotopy_fixed_points_map(&src, &dst, &diag, -1, 7);

            // The cone inherits the blockwise action.
            let cone = diag.cone();
            let mats: Vec<(i64, Matrix)> = (cone.lo()..=cone.hi())
                .map(|k| {
                    let g = Matrix::block_diag(
                        field,
                        &[&src.generator().mat(k + 1), &dst.generator().mat(k)],
                    );
                    (k, g)
                })
                .collect();
            let cone_gen =
                ChainMap::new(cone.clone(), cone.clone(), mats).expect("cone action");
            let cone_act = CyclicAction::new(n, cone_gen).unwrap();
            let hc = homotopy_fixed_points(&cone_act, -1, 7);

            // Rank bookkeeping of the long exact sequence:
            // dim H^t(cone part) = dim coker H^t(f) + dim ker H^(t+1)(f).
            let ts = fmap.src().cohomology();
            let td = fmap.dst().cohomology();
            let rank_h = |t: i64| -> usize {
                match ts.reps(t) {
                    Some(reps) if reps.cols() > 0 => {
                        td.coords(t, &fmap.mat(t).mul(reps)).unwrap().rank()
                    }
                    _ => 0,
                }
            };
            let lo = fwin.0.max(hc.window.0);
            let hi = fwin.1.min(hc.window.1) - 1;
            for t in lo..=hi {
                let coker = h_dim(fmap.dst(), t) - rank_h(t);
                let ker = h_dim(fmap.src(), t + 1) - rank_h(t + 1);
                assert_eq!(h_dim(&hc.complex, t), coker + ker);
                checked += 1;
            }
        }
    }
    assert!(checked >= 30, "window degrees actually checked: {checked}");
}

#[test]
fn colimits_report_the_top_value_and_whether_the_tower_settled() {
    let field = Field::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let c = random_complex(&mut rng, field, 0, 3, 2);
    let diag = DivisibilityDiagram::constant(&[1, 2, 4, 8], &c).unwrap();
    let (value, stabilized) = diag.colimit();
    assert_eq!(value, c);
    assert!(stabilized);

    // A tower still moving at its top is flagged as unsettled.
    let lam = Complex::concentrated(field, 0, 1, 0);
    let mut complexes = BTreeMap::new();
    complexes.insert(1, lam.clone());
    complexes.insert(3, lam.clone());
    let mut transitions = BTreeMap::new();
    transitions.insert((1, 3), ChainMap::identity(&lam).scale(3));
    let moving = DivisibilityDiagram::new(complexes, transitions).unwrap();
    let (value, stabilized) = moving.colimit();
    assert_eq!(value, lam);
    assert!(!stabilized);

    // Level sets must be closed under least common multiples.
    let bad = DivisibilityDiagram::constant(&[1, 2, 3], &lam);
    assert!(bad.is_err());
}

/// Rank-n sheet modules with the cyclic shift, and the sheet-pullback
/// inflations j |-> j mod a between them.
fn sheet_system(
    field: Field,
    levels: &[u64],
) -> (BTreeMap<u64, CyclicAction>, BTreeMap<(u64, u64), ChainMap>) {
    let mut actions = BTreeMap::new();
    for &n in levels {
        actions.insert(n, shift_action(field, n));
    }
    let mut inflations = BTreeMap::new();
    for &a in levels {
        for &b in levels {
            if a < b && b % a == 0 {
                let mut m = Matrix::zero(field, b as usize, a as usize);
                for j in 0..b as usize {
                    m.set(j, j % a as usize, 1);
                }
                let map = ChainMap::new(
                    actions[&a].complex().clone(),
                    actions[&b].complex().clone(),
                    vec![(0, m)],
                )
                .unwrap();
                inflations.insert((a, b), map);
            }
        }
    }
    (actions, inflations)
}

#[test]
fn level_systems_validate_and_injected_faults_are_caught() {
    let field = Field::new(5).unwrap();
    let (actions, inflations) = sheet_system(field, &[1, 2, 4]);
    let sys = LevelSystem::new(actions.clone(), inflations.clone()).unwrap();
    assert_eq!(sys.levels(), vec![1, 2, 4]);
    assert_eq!(sys.top(), 4);
    categorical_lemma_check(&sys).unwrap();

    // A leg that stops intertwining the generators is rejected.
    let mut bad = inflations.clone();
    let mut m = Matrix::zero(field, 4, 1);
    m.set(0, 0, 1);
    bad.insert(
        (1, 4),
        ChainMap::new(
            actions[&1].complex().clone(),
            actions[&4].complex().clone(),
            vec![(0, m)],
        )
        .unwrap(),
    );
    let faulty = LevelSystem::from_parts_unchecked(actions.clone(), bad);
    assert!(categorical_lemma_check(&faulty).is_err());

    // A leg that is equivariant but no longer the composite is rejected too.
    let mut bad = inflations.clone();
    let tweaked = bad[&(1, 4)].scale(2);
    bad.insert((1, 4), tweaked);
    let faulty = LevelSystem::from_parts_unchecked(actions.clone(), bad);
    assert!(matches!(
        categorical_lemma_check(&faulty),
        Err(CyclicError::NotFunctorial { from: 1, mid: 2, to: 4 })
    ));

    // A missing transition is rejected at construction.
    let mut missing = inflations;
    missing.remove(&(1, 4));
    assert!(LevelSystem::new(actions, missing).is_err());
}

#[test]
fn cone_towers_stabilize_to_the_target_complex() {
    for ell in [2u64, 3, 5] {
        let field = Field::new(ell).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(ell);
        let coprime: Vec<u64> = match ell {
            2 => vec![1, 3, 9],
            3 => vec![1, 2, 4],
            _ => vec![1, 2, 4],
        };
        for _ in 0..10 {
            let a = random_complex(&mut rng, field, -1, 3, 2);
            let b = random_complex(&mut rng, field, 0, 3, 2).twisted(1);
            let f = random_chain_map(&mut rng, &a, &b);
            let datum = ChernDatum::new(f).unwrap();

            // Without a level killed by the characteristic there is no
            // stabilized value to extract.
            assert!(matches!(
                chern_colimit(&datum, &coprime),
                Err(CyclicError::NotStabilized(_))
            ));

            let col = chern_colimit(&datum, &[1, ell, ell * ell]).unwrap();
            assert_eq!(col.complex, *datum.dst());
            assert_eq!(col.level, ell);

            // The answer does not depend on the chain used to reach the
            // divisible range.
            let col2 = chern_colimit(&datum, &[1, 2 * ell, 4 * ell]).unwrap();
            assert_eq!(col2.complex, col.complex);
            assert_eq!(col2.level, 2 * ell);

            // Witnesses: the projection retracts the target inclusion, and
            // the tail transition kills exactly the shifted source summand.
            let cone = col.projection.src().clone();
            let incl_mats: Vec<(i64, Matrix)> = (cone.lo()..=cone.hi())
                .map(|k| {
                    let mut m = Matrix::zero(field, cone.dim(k), datum.dst().dim(k));
                    for i in 0..datum.dst().dim(k) {
                        m.set(datum.src().dim(k + 1) + i, i, 1);
                    }
                    (k, m)
                })
                .collect();
            let incl = ChainMap::new(datum.dst().clone(), cone, incl_mats)
                .expect("target includes into the split cone");
            assert_eq!(col.projection.compose(&incl), ChainMap::identity(datum.dst()));
            assert_eq!(col.tail.compose(&col.tail), col.tail, "tail is idempotent");
            assert_eq!(col.projection.compose(&col.tail), col.projection);
            assert_eq!(incl.compose(&col.projection), col.tail);
        }
    }
}

#[test]
fn cone_tower_data_must_raise_the_twist_by_one() {
    let field = Field::new(3).unwrap();
    let lam = Complex::concentrated(field, 0, 1, 0);
    assert!(ChernDatum::new(ChainMap::identity(&lam)).is_err());

    let unit = ChainMap::new(
        lam.clone(),
        lam.twisted(1),
        vec![(0, Matrix::identity(field, 1))],
    )
    .unwrap();
    let datum = ChernDatum::new(unit).unwrap();
    let col = chern_colimit(&datum, &[1, 3]).unwrap();
    assert_eq!(col.complex.h_dims(), vec![(0, 1)]);
    assert_eq!(col.complex.twist(), 1);

    // The zero map stabilizes to the target as well.
    let zero = ChainMap::zero_map(&lam, &lam.twisted(1));
    let datum = ChernDatum::new(zero).unwrap();
    let col = chern_colimit(&datum, &[1, 3, 9]).unwrap();
    assert_eq!(col.complex.h_dims(), vec![(0, 1)]);
}
