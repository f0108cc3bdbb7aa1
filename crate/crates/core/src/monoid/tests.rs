use proptest::prelude::*;

use super::*;
use crate::algebras::{monogenic, product, split, to_ring};
use crate::category::{hom_space, CMorphism, CObject, CatInstance, FiniteSpace};
use crate::linalg::{Field, Matrix};

const Q: Field = Field::Rational;

fn f2() -> Field {
    Field::prime(2).unwrap()
}

fn dual(field: Field) -> MonoidObject {
    monogenic(field, &[0, 0])
}

/// `A/tA` as an `A`-module, `t` given by coordinates.
fn quotient_by(a: &MonoidObject, t: &[i64]) -> ModuleObject {
    let e = EndRing::new(a).unwrap();
    let t = EndElement(t.iter().map(|&x| a.field().from_i64(x)).collect());
    let reg = ModuleObject::regular(a);
    let tm = ModuleMorphism::new(reg.clone(), reg, e.act_on(&t, &ModuleObject::regular(a)).unwrap()).unwrap();
    cokernel_module(&tm).0
}

#[test]
fn monoid_axioms_on_examples() {
    let inst = CatInstance::finvect(Q);
    assert!(MonoidObject::unit_monoid(&inst).check().pass);
    assert!(dual(Q).check().pass);
    let broken =
        MonoidObject::finvect(Q, dual(Q).mult().component(0).clone(), vec![Q.zero(), Q.one()]).unwrap();
    let report = broken.check();
    assert!(!report.pass);
    assert_eq!(report.failures.len(), 1);
    assert_eq!(report.failures[0].axiom, Axiom::UnitLaw);
    assert_eq!(report.failures[0].basis, vec![0]);
}

#[test]
fn detects_noncommutative_and_nonassociative_tables() {
    // b0 b1 = b1 but b1 b0 = 0.
    let mut m = dual(Q).mult().component(0).clone();
    m.set(1, 2, Q.zero());
    let a = MonoidObject::finvect(Q, m, vec![Q.one(), Q.zero()]).unwrap();
    let axioms: Vec<_> = a.check().failures.iter().map(|f| f.axiom).collect();
    assert!(axioms.contains(&Axiom::Commutativity));
    assert!(!axioms.contains(&Axiom::UnitLaw));
}

#[test]
fn hom_a_dimensions() {
    let q = MonoidObject::unit_monoid(&CatInstance::finvect(Q));
    let r = ModuleObject::regular(&q);
    assert_eq!(hom_a(&r, &r).unwrap().len(), 1);
    let qq = split(Q, 2);
    let r = ModuleObject::regular(&qq);
    assert_eq!(hom_a(&r, &r).unwrap().len(), 2);
    // Hom_A(A, M) ≅ Hom(1, M) for several modules.
    let d = dual(Q);
    let one = CObject::unit(d.instance());
    let mods = [
        ModuleObject::regular(&d),
        quotient_by(&d, &[0, 1]),
        direct_sum_module(&ModuleObject::regular(&d), &quotient_by(&d, &[0, 1]))
            .unwrap()
            .0,
    ];
    for m in &mods {
        let reg = ModuleObject::regular(&d);
        assert_eq!(
            hom_a(&reg, m).unwrap().len(),
            hom_space(&one, m.carrier()).unwrap().len()
        );
    }
}

#[test]
fn end_ring_of_f4_is_the_field() {
    let f4 = monogenic(f2(), &[1, 1]);
    let e = EndRing::new(&f4).unwrap();
    assert_eq!(e.dim(), 2);
    // Independent table: multiply in A directly.
    let direct = to_ring(&f4).unwrap();
    assert_eq!(e.ring(), &direct);
    assert!(e.ring().decide_domain().is_domain());
    for x in e.ring().elements().unwrap() {
        if !x.iter().all(|c| c.is_zero()) {
            assert!(e.ring().is_unit(&x));
        }
    }
}

#[test]
fn end_ring_of_dual_numbers_and_unit() {
    let d = dual(Q);
    let e = EndRing::new(&d).unwrap();
    assert_eq!(e.ring(), &to_ring(&d).unwrap());
    let eps = e.basis_element(1);
    assert!(e.mul(&eps, &eps).is_zero());
    let u = EndRing::new(&MonoidObject::unit_monoid(&CatInstance::finvect(Q))).unwrap();
    assert_eq!(u.dim(), 1);
    assert_eq!(u.one().coords(), &[Q.one()]);
}

#[test]
fn end_ring_of_presheaf_is_global_sections() {
    let inst = CatInstance::presheaf(Q, FiniteSpace::sierpinski());
    let a = crate::algebras::constant_presheaf(&inst, &split(Q, 2)).unwrap();
    let e = EndRing::new(&a).unwrap();
    assert_eq!(e.dim(), 2);
    let v = vec![Q.from_i64(3), Q.from_i64(-1)];
    let t = e.from_section(&v).unwrap();
    assert_eq!(e.section(&t), v);
    let t_a = e.endomorphism(&t);
    assert_eq!(e.from_endomorphism(&t_a), Some(t));
}

#[test]
fn e_of_morphism_examples() {
    let qq = split(Q, 2);
    let q = MonoidObject::unit_monoid(&CatInstance::finvect(Q));
    let eqq = EndRing::new(&qq).unwrap();
    let eq = EndRing::new(&q).unwrap();
    let id = MonoidMorphism::identity(&qq);
    assert_eq!(e_of_morphism(&id, &eqq, &eqq).unwrap(), Matrix::identity(Q, 2));

    let pr = MonoidMorphism::new(
        qq.clone(),
        q.clone(),
        CMorphism::finvect(qq.carrier(), q.carrier(), Matrix::from_ints(Q, &[&[1, 0]])).unwrap(),
    )
    .unwrap();
    assert_eq!(
        e_of_morphism(&pr, &eqq, &eq).unwrap(),
        Matrix::from_ints(Q, &[&[1, 0]])
    );

    let d = dual(Q);
    let ed = EndRing::new(&d).unwrap();
    let inc = MonoidMorphism::new(
        q.clone(),
        d.clone(),
        CMorphism::finvect(q.carrier(), d.carrier(), Matrix::from_ints(Q, &[&[1], &[0]])).unwrap(),
    )
    .unwrap();
    assert_eq!(
        e_of_morphism(&inc, &eq, &ed).unwrap(),
        Matrix::from_ints(Q, &[&[1], &[0]])
    );

    // ℰ respects composition: Q -> dual -> Q.
    let aug = MonoidMorphism::new(
        d.clone(),
        q.clone(),
        CMorphism::finvect(d.carrier(), q.carrier(), Matrix::from_ints(Q, &[&[1, 0]])).unwrap(),
    )
    .unwrap();
    let comp = aug.compose(&inc).unwrap();
    let lhs = e_of_morphism(&comp, &eq, &eq).unwrap();
    let rhs = e_of_morphism(&aug, &ed, &eq)
        .unwrap()
        .mul(&e_of_morphism(&inc, &eq, &ed).unwrap());
    assert_eq!(lhs, rhs);
}

#[test]
fn rejects_non_monoid_morphisms() {
    let q = MonoidObject::unit_monoid(&CatInstance::finvect(Q));
    let d = dual(Q);
    let bad = CMorphism::finvect(q.carrier(), d.carrier(), Matrix::from_ints(Q, &[&[1], &[1]])).unwrap();
    assert!(MonoidMorphism::new(q.clone(), d.clone(), bad).is_err());
    // F4 -> F2 cannot preserve the unit and multiplication at once.
    let f4 = monogenic(f2(), &[1, 1]);
    let f2m = MonoidObject::unit_monoid(&CatInstance::finvect(f2()));
    for a in 0..2 {
        for b in 0..2 {
            let m = Matrix::from_ints(f2(), &[&[a, b]]);
            let g = CMorphism::finvect(f4.carrier(), f2m.carrier(), m).unwrap();
            assert!(MonoidMorphism::new(f4.clone(), f2m.clone(), g).is_err());
        }
    }
}

#[test]
fn relative_tensor_examples() {
    let d = dual(Q);
    let reg = ModuleObject::regular(&d);
    let k = quotient_by(&d, &[0, 1]);
    assert_eq!(tensor_over_a(&reg, &k).unwrap().module.carrier().dims(), &[1]);
    assert_eq!(tensor_over_a(&k, &k).unwrap().module.carrier().dims(), &[1]);
    assert_eq!(tensor_over_a(&reg, &reg).unwrap().module.carrier().dims(), &[2]);

    let qq = split(Q, 2);
    let e1a = quotient_by(&qq, &[0, 1]);
    let e2a = quotient_by(&qq, &[1, 0]);
    assert!(tensor_over_a(&e1a, &e2a).unwrap().module.is_zero());
    assert_eq!(tensor_over_a(&e1a, &e1a).unwrap().module.carrier().dims(), &[1]);
}

#[test]
fn relative_tensor_is_symmetric_and_associative_in_dimension() {
    let a = product(&dual(Q), &split(Q, 1)).unwrap();
    let mods = [
        quotient_by(&a, &[0, 1, 0]),
        quotient_by(&a, &[0, 0, 1]),
        ModuleObject::regular(&a),
    ];
    for x in &mods {
        for y in &mods {
            let xy = tensor_over_a(x, y).unwrap().module;
            let yx = tensor_over_a(y, x).unwrap().module;
            assert_eq!(xy.carrier().dims(), yx.carrier().dims());
            for z in &mods {
                let l = tensor_over_a(&xy, z).unwrap().module;
                let r = tensor_over_a(x, &tensor_over_a(y, z).unwrap().module)
                    .unwrap()
                    .module;
                assert_eq!(l.carrier().dims(), r.carrier().dims());
            }
        }
    }
}

#[test]
fn induced_modules_satisfy_axioms() {
    let a = product(&dual(Q), &split(Q, 1)).unwrap();
    let m = quotient_by(&a, &[0, 1, 0]);
    let t = tensor_over_a(&m, &ModuleObject::regular(&a)).unwrap().module;
    assert!(ModuleObject::new(a.clone(), t.carrier().clone(), t.action().clone()).is_ok());
    let (s, _, _) = direct_sum_module(&m, &t).unwrap();
    assert!(ModuleObject::new(a, s.carrier().clone(), s.action().clone()).is_ok());
}

proptest! {
    #[test]
    fn end_ring_matches_structure_constants(p in prop_oneof![Just(2u64), Just(3u64)], c in proptest::collection::vec(0i64..3, 1..4)) {
        let field = Field::prime(p).unwrap();
        let a = monogenic(field, &c);
        let e = EndRing::new(&a).unwrap();
        prop_assert_eq!(e.dim(), c.len());
        prop_assert_eq!(e.ring(), &to_ring(&a).unwrap());
    }
}
