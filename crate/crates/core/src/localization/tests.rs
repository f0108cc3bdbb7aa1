use proptest::prelude::*;

use super::*;
use crate::algebras::{monogenic, split};
use crate::category::CatInstance;
use crate::linalg::Field;

const Q: Field = Field::Rational;

fn el(e: &EndRing, v: &[i64]) -> EndElement {
    e.element(v.iter().map(|&x| e.field().from_i64(x)).collect()).unwrap()
}

fn mul_by(e: &EndRing, t: &EndElement) -> ModuleMorphism {
    let reg = ModuleObject::regular(e.monoid());
    ModuleMorphism::new(reg.clone(), reg.clone(), e.act_on(t, &reg).unwrap()).unwrap()
}

fn quotient_by(e: &EndRing, t: &[i64]) -> ModuleObject {
    cokernel_module(&mul_by(e, &el(e, t))).0
}

fn dims(l: &LocalizationResult) -> usize {
    l.localized().carrier().total_dim()
}

#[test]
fn localizing_at_one_is_the_identity() {
    let a = monogenic(Q, &[0, 0]);
    let e = EndRing::new(&a).unwrap();
    let l = localize_element(&e, &e.one()).unwrap();
    assert!(l.structure.is_iso());
    assert_eq!(l.index, 0);
    assert_eq!(l.ring_map, Matrix::identity(Q, 2));
}

#[test]
fn nilpotent_element_kills_everything() {
    let e = EndRing::new(&monogenic(Q, &[0, 0])).unwrap();
    let l = localize_element(&e, &el(&e, &[0, 1])).unwrap();
    assert!(l.localized().is_zero());
    assert_eq!(l.index, 2);
    assert!(l.target_ring.ring().is_zero_ring());
}

#[test]
fn idempotent_picks_a_factor() {
    let e = EndRing::new(&split(Q, 2)).unwrap();
    let l = localize_element(&e, &el(&e, &[1, 0])).unwrap();
    assert_eq!(dims(&l), 1);
    assert_eq!(l.index, 1);
    assert_eq!(
        l.structure.map().component(0),
        &Matrix::from_ints(Q, &[&[1, 0]])
    );
}

#[test]
fn multiplicative_sets() {
    let e = EndRing::new(&split(Q, 3)).unwrap();
    let s = MultSet::new(vec![el(&e, &[1, 1, 0]), el(&e, &[1, 0, 1])]);
    let sat = s.saturate(&e);
    assert!(sat.elements.contains(&e.one()));
    assert!(sat.elements.contains(&el(&e, &[1, 0, 0])));
    let l = localize_multset(&e, &s).unwrap();
    assert_eq!(dims(&l), 1);
    assert_eq!(l.element, el(&e, &[1, 0, 0]));

    assert!(localize_multset(&e, &MultSet::new(vec![])).unwrap().structure.is_iso());

    // Three generators: each later step must see the generator through the
    // composite of the earlier ones.
    let e4 = EndRing::new(&split(Q, 4)).unwrap();
    let s = MultSet::new(vec![el(&e4, &[1, 1, 1, 0]), el(&e4, &[1, 1, 0, 1]), el(&e4, &[1, 0, 1, 1])]);
    let l = localize_multset(&e4, &s).unwrap();
    assert_eq!(l.element, el(&e4, &[1, 0, 0, 0]));

    let d = EndRing::new(&monogenic(Q, &[0, 0])).unwrap();
    let s = MultSet::new(vec![el(&d, &[1, 1]), el(&d, &[0, 1])]);
    assert!(localize_multset(&d, &s).unwrap().localized().is_zero());
}

#[test]
fn module_localization() {
    let e = EndRing::new(&split(Q, 2)).unwrap();
    let reg = ModuleObject::regular(e.monoid());
    let one = localize_element(&e, &e.one()).unwrap();
    assert_eq!(localize_module(&reg, &one).unwrap().module.carrier().dims(), &[2]);

    let l = localize_element(&e, &el(&e, &[1, 0])).unwrap();
    assert_eq!(localize_module(&reg, &l).unwrap().module.carrier().dims(), &[1]);
    // Second factor: (1, 0) acts by zero.
    let second = quotient_by(&e, &[1, 0]);
    assert_eq!(second.carrier().dims(), &[1]);
    assert!(localize_module(&second, &l).unwrap().module.is_zero());
    let first = quotient_by(&e, &[0, 1]);
    assert_eq!(localize_module(&first, &l).unwrap().module.carrier().dims(), &[1]);
}

#[test]
fn flatness_on_the_dual_numbers() {
    let e = EndRing::new(&monogenic(Q, &[0, 0])).unwrap();
    let probes = standard_probes(&e).unwrap();
    assert!(probes.len() >= 3);
    let at_unit = verify_flat(&localize_element(&e, &el(&e, &[1, 1])).unwrap(), &probes).unwrap();
    for p in &at_unit.probes {
        assert_eq!(p.before, p.after);
    }
    let at_eps = verify_flat(&localize_element(&e, &el(&e, &[0, 1])).unwrap(), &probes).unwrap();
    assert!(at_eps.probes.iter().all(|p| p.after == [0, 0, 0]));
}

#[test]
fn epimorphisms() {
    let q = MonoidObject::unit_monoid(&CatInstance::finvect(Q));
    let qq = split(Q, 2);
    assert!(verify_epi(&MonoidMorphism::identity(&qq)).unwrap().pass);

    let diag = MonoidMorphism::new(
        q.clone(),
        qq.clone(),
        CMorphism::finvect(q.carrier(), qq.carrier(), Matrix::from_ints(Q, &[&[1], &[1]])).unwrap(),
    )
    .unwrap();
    let report = verify_epi(&diag).unwrap();
    assert!(!report.pass);
    assert_eq!(report.tensor_dim, 4);
    let cert = certify_open_immersion(&diag).unwrap();
    assert!(!cert.positive);

    let e = EndRing::new(&qq).unwrap();
    let l = localize_element(&e, &el(&e, &[0, 1])).unwrap();
    let cert = certify_localization(&l).unwrap();
    assert!(cert.positive);
    assert_eq!(cert.flatness, FlatnessBasis::Structural);
    assert!(certify_open_immersion(&l.structure).unwrap().positive);

    let cert = certify_open_immersion(&MonoidMorphism::to_zero(&qq)).unwrap();
    assert!(cert.positive);
}

#[test]
fn conservativity() {
    let qq = split(Q, 2);
    let e = EndRing::new(&qq).unwrap();
    let ts = [el(&e, &[1, 0]), el(&e, &[0, 1])];
    let reg = ModuleObject::regular(&qq);

    // The swap is A-linear from A to A with the action twisted by the swap.
    let swap_map = CMorphism::finvect(qq.carrier(), qq.carrier(), Matrix::from_ints(Q, &[&[0, 1], &[1, 0]])).unwrap();
    let sigma = MonoidMorphism::new(qq.clone(), qq.clone(), swap_map.clone()).unwrap();
    let twisted = ModuleObject::restrict_along(&sigma, &reg).unwrap();
    let swap = ModuleMorphism::new(reg.clone(), twisted, swap_map).unwrap();
    let r = conservativity_check(&e, &ts, &swap).unwrap();
    assert!(r.global.iso && r.local.iter().all(|l| l.iso));

    let half = mul_by(&e, &ts[0]);
    let r = conservativity_check(&e, &ts, &half).unwrap();
    assert!(!r.global.iso);
    assert!(r.local[0].iso);
    assert_eq!(r.local[1].cokernel_dim, 1);

    let r = conservativity_check(&e, &[e.one()], &ModuleMorphism::identity(&reg)).unwrap();
    assert!(r.agrees && r.global.iso);

    let r = conservativity_check(&e, &ts[..1], &half).unwrap();
    assert!(!r.partition && !r.agrees);
}

#[test]
fn zero_detection_on_a_cover() {
    let e = EndRing::new(&split(Q, 2)).unwrap();
    let ts = [el(&e, &[1, 0]), el(&e, &[0, 1])];
    let m = quotient_by(&e, &[1, 0]);
    let z = zero_detection(&e, &ts, &m).unwrap();
    assert_eq!(z.local_dims, vec![0, 1]);
    let zero = ModuleObject::zero(e.monoid());
    assert_eq!(zero_detection(&e, &ts, &zero).unwrap().local_dims, vec![0, 0]);
    assert!(zero_detection(&e, &ts[..1], &m).is_err());
}

fn arb_algebra() -> impl Strategy<Value = MonoidObject> {
    (prop_oneof![Just(2u64), Just(3u64)], proptest::collection::vec(0i64..3, 1..4))
        .prop_map(|(p, c)| monogenic(Field::prime(p).unwrap(), &c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn localizing_twice_is_localizing_at_the_product(a in arb_algebra(), i in 0usize..3, j in 0usize..3) {
        let e = EndRing::new(&a).unwrap();
        let (s, t) = (e.basis_element(i % e.dim()), e.basis_element(j % e.dim()));
        let s = e.add(&s, &e.one());
        let ls = localize_element(&e, &s).unwrap();
        prop_assert!(ls.index <= e.dim());
        let lst = localize_element(&ls.target_ring, &ls.image(&t)).unwrap();
        let direct = localize_element(&e, &e.mul(&s, &t)).unwrap();
        let two_step = lst.structure.map().compose(ls.structure.map());
        prop_assert!(same_quotient(direct.structure.map(), &two_step));
        prop_assert!(verify_epi(&direct.structure).unwrap().pass);
    }

    #[test]
    fn quotient_projections_are_epimorphisms(a in arb_algebra(), i in 0usize..3) {
        let e = EndRing::new(&a).unwrap();
        let t = e.basis_element(i % e.dim());
        let (_, proj) = cokernel_module(&mul_by(&e, &t));
        let p = a.descend(proj.map()).unwrap();
        prop_assert!(verify_epi(&p).unwrap().pass);
    }
}
