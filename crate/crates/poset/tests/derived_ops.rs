//! Derived sections, pushforwards, and the exceptional pullback on the
//! named circle and disk spaces, checked against an independent
//! order-complex oracle.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tame_complex::Field;
use tame_poset::gen::{random_poset, random_sheaf, random_shcomplex};
use tame_poset::{
    derived_global_sections, exceptional_pullback, external_tensor, injective_resolution,
    pseudocircle, pseudodisk, recognize_injective, resolve, sections_kernel,
    OpenClosedDecomposition, Poset, ShComplex, Sheaf,
};
use tame_testlab as oracle;

/// Cohomology of the realization of a poset, computed combinatorially from
/// its chains — entirely independent of the sheaf machinery.
fn realization_cohomology(p: &Poset, ell: u64) -> Vec<(i64, usize)> {
    let leq: Vec<Vec<bool>> =
        (0..p.n()).map(|x| (0..p.n()).map(|y| p.leq(x, y)).collect()).collect();
    oracle::order_complex_cohomology(&leq, ell)
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| d > 0)
        .map(|(k, d)| (k as i64, d))
        .collect()
}

#[test]
fn circle_cohomology_matches_realization_oracle() {
    for k in [2usize, 3, 4] {
        let s = pseudocircle(k).unwrap();
        for ell in [2u64, 3, 5] {
            let field = Field::new(ell).unwrap();
            let f = ShComplex::constant(&s, field, 1);
            let got = derived_global_sections(&f).h_dims();
            assert_eq!(got, vec![(0, 1), (1, 1)], "circle k={k} ell={ell}");
            assert_eq!(got, realization_cohomology(&s, ell));
        }
    }
}

#[test]
fn disk_is_contractible() {
    for k in [2usize, 3] {
        let d = pseudodisk(k).unwrap();
        let field = Field::new(3).unwrap();
        let f = ShComplex::constant(&d, field, 1);
        let got = derived_global_sections(&f).h_dims();
        assert_eq!(got, vec![(0, 1)], "disk k={k}");
        assert_eq!(got, realization_cohomology(&d, 3));
    }
}

#[test]
fn pushforward_from_the_punctured_disk_sees_the_circle_at_the_origin() {
    // the origin stalk of the pushforward from the open part is the
    // cohomology of the boundary circle: rank 1 in degrees 0 and 1
    let dec = OpenClosedDecomposition::pseudodisk_origin(2).unwrap();
    let field = Field::new(2).unwrap();
    let f = ShComplex::constant(dec.ambient(), field, 1);
    let pushed = tame_poset::open_unit(&dec, &f);
    let at_origin = pushed.push.complex().stalk(0).h_dims();
    assert_eq!(at_origin, vec![(0, 1), (1, 1)]);
    let (u, _) = dec.open_part();
    assert_eq!(at_origin, realization_cohomology(&u, 2));
}

#[test]
fn exceptional_pullback_purity_on_disks() {
    for k in [2usize, 3, 4] {
        let dec = OpenClosedDecomposition::pseudodisk_origin(k).unwrap();
        assert_eq!(dec.codim(), 1);
        for ell in [2u64, 3] {
            let field = Field::new(ell).unwrap();
            let f = ShComplex::constant(dec.ambient(), field, 1);
            let shriek = exceptional_pullback(&dec, &f);
            assert_eq!(shriek.complex.twist(), -1, "k={k} ell={ell}");
            let h = shriek.complex.stalk(0).h_dims();
            assert_eq!(h, vec![(2, 1)], "k={k} ell={ell}");
        }
    }
}

#[test]
fn already_injective_complexes_resolve_to_themselves() {
    let d = pseudodisk(3).unwrap();
    let field = Field::new(5).unwrap();
    // a product of point supports over a maximal element and the origin
    let top = d.maximal_elements()[0];
    let s = Sheaf::point_injective(&d, field, top, 2)
        .direct_sum(&Sheaf::point_injective(&d, field, 0, 1));
    let f = ShComplex::from_sheaf(s, 0);
    let (j, aug, shapes) = injective_resolution(&f);
    assert_eq!(j.lo(), 0);
    assert_eq!(j.hi(), 0, "length zero for an injective object");
    assert!(aug.is_stalkwise_qiso());
    assert_eq!(shapes.len(), 1);
    assert_eq!(shapes[0].iter().map(|f| f.dim).sum::<usize>(), 3);

    // a skyscraper over a maximal element alone, same outcome
    let sky = ShComplex::from_sheaf(Sheaf::point_injective(&d, field, top, 1), 0);
    let (j2, _, _) = injective_resolution(&sky);
    assert_eq!((j2.lo(), j2.hi()), (0, 0));

    // a non-injective sheaf falls back to a longer resolution
    let c = ShComplex::constant(&d, field, 1);
    assert!(recognize_injective(&c.sheaf_at(0)).is_none());
    let (j3, aug3, _) = injective_resolution(&c);
    assert!(j3.hi() > 0);
    assert!(aug3.is_stalkwise_qiso());
}

#[test]
fn resolutions_are_stalkwise_trivial_and_short() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for case in 0..40 {
        let p = random_poset(&mut rng, 8);
        let ell = [2u64, 3, 5][case % 3];
        let field = Field::new(ell).unwrap();
        let f = random_shcomplex(&mut rng, &p, field, -1, 3, 3);
        let res = resolve(&f);
        assert!(res.aug().is_stalkwise_qiso(), "case {case}");
        let extra = res.complex().hi() - f.hi();
        assert!(
            extra < p.longest_chain() as i64,
            "resolution adds {extra} degrees on a poset of chain length {}",
            p.longest_chain()
        );
        // every component is the product named by its shape
        for k in res.complex().lo()..=res.complex().hi() {
            for x in 0..p.n() {
                let want: usize =
                    res.shape_at(k).iter().filter(|f| f.down[x]).map(|f| f.dim).sum();
                assert_eq!(res.complex().dim(k, x), want);
            }
        }
    }
}

#[test]
fn kernel_sections_agree_with_derived_sections_for_a_single_sheaf() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for case in 0..30 {
        let p = random_poset(&mut rng, 7);
        let field = Field::new([2u64, 3, 5][case % 3]).unwrap();
        let s = random_sheaf(&mut rng, &p, field, 3);
        let f = ShComplex::from_sheaf(s.clone(), 0);
        let all = vec![true; p.n()];
        let (plain, _) = sections_kernel(&f, &all);
        let derived = derived_global_sections(&f);
        assert_eq!(
            plain.dim(0),
            derived.cohomology().h_dim(0),
            "left exactness in degree zero, case {case}"
        );
    }
}

#[test]
fn external_product_of_circles_is_a_torus() {
    let s = pseudocircle(2).unwrap();
    for ell in [2u64, 3] {
        let field = Field::new(ell).unwrap();
        let f = ShComplex::constant(&s, field, 1);
        let prod = external_tensor(&f, &f);
        let got = derived_global_sections(&prod).h_dims();
        assert_eq!(got, vec![(0, 1), (1, 2), (2, 1)], "ell={ell}");
        assert_eq!(got, realization_cohomology(prod.base(), ell));
    }
}
