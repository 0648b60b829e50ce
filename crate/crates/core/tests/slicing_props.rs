use std::collections::BTreeMap;
use std::sync::Arc;

use heartglue::slicing::{
    alpha_beta_cross_check, f_compatibility_witness, gluable_via_exchange, gluable_witness, gp_compatibility_witness,
    grading_witness, perverse_witness, pushforward_support, functoriality_check, tilt_predicate,
    HeartOracle, HeartRule, HeartTable, HeartWindow, TStructureDescriptor,
};
use heartglue::{Element, ExtPerversity, HomOracle, Perversity, SupportObject, ZSetMap, ZToset};
use proptest::prelude::*;

fn table_oracle() -> impl Strategy<Value = HeartOracle> {
    (
        prop::collection::btree_map((0i64..3, 0i64..3, -1i64..4), any::<bool>(), 0..20),
        any::<bool>(),
    )
        .prop_map(|(entries, default_vanishes)| {
            HeartOracle::new(HeartRule::Table(HeartTable { entries, default_vanishes }))
        })
}

fn heart_window() -> HeartWindow {
    HeartWindow::new(0..=2, (-4, 4))
}

fn labels() -> Vec<Element> {
    heart_window().labels(-2, 2)
}

fn small_perversity() -> impl Strategy<Value = Perversity> {
    prop::sample::select(Perversity::enumerate((0, 2), (-2, 2)))
}

proptest! {
    #[test]
    fn monotone_maps_are_compatible(o in table_oracle()) {
        let proj = ZSetMap::projection_first(&o.index()).unwrap();
        prop_assert!(f_compatibility_witness(&o, &proj, &labels()).unwrap().is_none());
        prop_assert!(f_compatibility_witness(&o, &ZSetMap::identity(o.index()), &labels()).unwrap().is_none());
    }

    #[test]
    fn compatibility_survives_order_isomorphisms(o in table_oracle(), p in small_perversity()) {
        let beta = ZSetMap::beta();
        for f in [ZSetMap::alpha(), ZSetMap::g(&p.clone().into()).unwrap()] {
            let conj = ZSetMap::compose(f.clone(), beta.clone()).unwrap();
            prop_assert_eq!(
                f_compatibility_witness(&o, &f, &labels()).unwrap().is_none(),
                f_compatibility_witness(&o, &conj, &labels()).unwrap().is_none()
            );
        }
    }

    #[test]
    fn ladder_of_implications(o in table_oracle(), p in small_perversity()) {
        let w = heart_window();
        let glue = gluable_witness(&o, &w).unwrap();
        let grad = grading_witness(&o, &w).unwrap();
        let perv = perverse_witness(&o, &w).unwrap();
        prop_assert_eq!(glue.is_none(), gluable_via_exchange(&o, &w).unwrap().is_none());
        if glue.is_none() { prop_assert!(grad.is_none()); }
        if grad.is_none() { prop_assert!(perv.is_none()); }
        let gp = gp_compatibility_witness(&o, &p, &labels()).unwrap();
        if grad.is_none() || (perv.is_none() && p.is_strict()) {
            prop_assert!(gp.is_none(), "{:?}", gp);
        }
    }

    #[test]
    fn alpha_matches_beta_transport(o in table_oracle()) {
        let (a, b) = alpha_beta_cross_check(Arc::new(o), &labels()).unwrap();
        prop_assert_eq!(a.is_none(), b.is_none());
        if let (Some(a), Some(b)) = (a, b) {
            let beta = ZSetMap::beta();
            prop_assert_eq!((beta.apply(&a.phi).unwrap(), beta.apply(&a.psi).unwrap(), a.shift), (b.phi, b.psi, b.shift));
        }
    }

    #[test]
    fn oracles_commute_with_the_shift(o in table_oracle(), a in -2i64..2, b in -2i64..2, x in 0i64..3, y in 0i64..3, n in -3i64..3) {
        let idx = o.index();
        let (phi, psi) = (Element::Pair(a, x), Element::Pair(b, y));
        prop_assert_eq!(
            o.vanishes(&phi, &psi, n).unwrap(),
            o.vanishes(&idx.shift(&phi, 1).unwrap(), &idx.shift(&psi, 1).unwrap(), n).unwrap()
        );
        if phi > psi { prop_assert!(o.vanishes(&phi, &psi, 0).unwrap()); }
    }

    #[test]
    fn fibres_are_intersections(p in small_perversity(), j in -3i64..3) {
        let gamma = ZSetMap::gamma(&p.into()).unwrap();
        for x in labels() {
            let v = gamma.apply(&x).unwrap();
            let le = v <= Element::Int(j);
            let ge = v >= Element::Int(j);
            prop_assert_eq!(v == Element::Int(j), le && ge);
        }
    }

    #[test]
    fn gp_then_projection_is_gamma(p in small_perversity(), picks in prop::collection::vec((-2i64..=2, -1i64..=3, 1u32..3), 1..5)) {
        let o: Arc<dyn HomOracle> = Arc::new(HeartOracle::new(HeartRule::Koszul));
        let x = SupportObject::new(picks.iter().map(|&(n, w, m)| (Element::Pair(n, w), m))).unwrap();
        let g = ZSetMap::g(&p.clone().into()).unwrap();
        let proj = ZSetMap::projection_first(&ZToset::z_lex_zhat()).unwrap();
        let window = HeartWindow::new(-1..=3, (0, 0)).labels(-3, 3);
        prop_assert!(functoriality_check(o.clone(), &g, &proj, std::slice::from_ref(&x), &window).unwrap());
        let gamma = ZSetMap::gamma(&p.into()).unwrap();
        let direct = pushforward_support(o.as_ref(), &gamma, &x).unwrap();
        let staged = pushforward_support(o.as_ref(), &ZSetMap::compose(g, proj).unwrap(), &x).unwrap();
        prop_assert_eq!(direct, staged);
    }

    #[test]
    fn psi_is_monotone_and_equivariant(p in small_perversity(), q in small_perversity(), n in -4i64..4, phi in 0i64..3) {
        let dp = TStructureDescriptor { perversity: p.clone().into() };
        let dq = TStructureDescriptor { perversity: q.clone().into() };
        if p.le(&q) && dp.in_upper(n, phi) { prop_assert!(dq.in_upper(n, phi)); }
        let down = TStructureDescriptor { perversity: ExtPerversity::from(p.act_plus(-1)) };
        prop_assert_eq!(down.in_upper(n, phi), dp.in_upper(n - 1, phi));
    }

    #[test]
    fn two_valued_hearts_are_tilts(k in -3i64..3, n in -3i64..3, phi in -5i64..5) {
        let d = TStructureDescriptor { perversity: Perversity::chi(k).into() };
        prop_assert_eq!(d.in_heart(n, phi), tilt_predicate(k, n, phi));
    }
}

#[test]
fn coherent_table_instance_is_perverse_not_grading() {
    // A single Ext^2 between codimensions 2 and 0, everything else as in degree 0.
    let mut entries = BTreeMap::new();
    entries.insert((2, 0, 2), false);
    let o = HeartOracle::new(HeartRule::Table(HeartTable { entries, default_vanishes: true }));
    let w = heart_window();
    assert!(perverse_witness(&o, &w).unwrap().is_none());
    let wit = grading_witness(&o, &w).unwrap().unwrap();
    assert_eq!((wit.phi, wit.psi, wit.shift), (Element::Pair(0, 2), Element::Pair(0, 0), 2));
}

#[test]
fn incompatible_pushforward_carries_the_witness() {
    let mut entries = BTreeMap::new();
    entries.insert((1, 0, 1), false);
    let o = HeartOracle::new(HeartRule::Table(HeartTable { entries, default_vanishes: true }));
    let e = ZSetMap::exchange(&o.index()).unwrap();
    let x = SupportObject::new([(Element::Pair(0, 1), 1), (Element::Pair(1, 0), 1)]).unwrap();
    let err = pushforward_support(&o, &e, &x).unwrap_err();
    assert_eq!(err, heartglue::Error::Incompatible { phi: Element::Pair(0, 1), psi: Element::Pair(1, 0), shift: 0 });
}
