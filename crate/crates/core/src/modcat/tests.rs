use super::catalog::{band_invariant, build_band1, build_jordan_band, build_simple};
use super::*;
use crate::cyclo::CycField;

fn cat3() -> &'static Catalog {
    Catalog::get(3).unwrap()
}

#[test]
fn simple_models() {
    let f = CycField::get(3);
    let v10 = build_simple(f, 1, 0).unwrap();
    assert!(v10.act_a().is_zero() && v10.act_d().is_zero());
    let v21 = build_simple(f, 2, 1).unwrap();
    assert_eq!(v21.weights(), &[(1, 1), (2, 2)]);
    let v30 = build_simple(f, 3, 0).unwrap();
    assert!(v30.validate());
    assert_eq!(v30.act_d()[(0, 1)], f.one() - f.q_pow(-2));
    assert_eq!(hom_space(&v21, &v21).dim(), 1);
    assert_eq!(hom_space(&v10, &build_simple(f, 1, 1).unwrap()).dim(), 0);
}

#[test]
fn band_models() {
    let f = CycField::get(3);
    let m = build_band1(f, 1, 0, &EtaParam::int(f, 0)).unwrap();
    assert!(m.act_d()[(2, 0)].is_zero());
    let e = EtaParam::int(f, 5);
    let m = build_band1(f, 1, 0, &e).unwrap();
    assert_eq!(band_invariant(&m, 1, 0), Some(e));
    let inf = build_band1(f, 2, 0, &EtaParam::Inf).unwrap();
    assert_eq!(band_invariant(&inf, 2, 0), Some(EtaParam::Inf));
    for eta in [EtaParam::int(f, 1), EtaParam::Inf] {
        let m2 = build_jordan_band(f, 2, 1, 0, &eta).unwrap();
        assert_eq!(m2.dim(), 6);
        assert!(hom::is_local(&m2));
    }
    let a = build_band1(f, 1, 0, &EtaParam::int(f, 1)).unwrap();
    let b = build_band1(f, 1, 0, &EtaParam::int(f, 2)).unwrap();
    assert!(matches!(is_isomorphic(&a, &b), IsoResult::NotIso(_)));
    assert!(is_isomorphic(&a, &a).is_iso());
}

#[test]
fn projectives_at_three() {
    let c = cat3();
    for l in 1..3 {
        for r in 0..3 {
            let p = c.projective(l, r).unwrap();
            assert_eq!(p.dim(), 6);
            assert!(p.validate());
            let (top, soc) = c.top_and_socle(&p);
            let v = IndecLabel::simple(3, l, r).unwrap();
            assert_eq!(top, vec![(v.clone(), 1)]);
            assert_eq!(soc, vec![(v, 1)]);
            assert_eq!(c.loewy_length(&p).unwrap(), 3);
        }
    }
    let p10 = c.projective(1, 0).unwrap();
    assert_eq!(hom_space(&p10, &p10).dim(), 2);
    let rad = c.radical(&p10).unwrap().0;
    let mid = c.top(&rad);
    assert_eq!(mid, vec![(IndecLabel::simple(3, 2, 1).unwrap(), 2)]);
}

#[test]
fn spec_splittings() {
    let c = cat3();
    let f = c.field();
    let x = build_simple(f, 3, 1).unwrap().tensor(&build_simple(f, 3, 0).unwrap());
    let d = c.decompose(&x, &[]).unwrap();
    let want = vec![
        (IndecLabel::simple(3, 3, 2).unwrap(), 1),
        (IndecLabel::proj(3, 1, 0).unwrap(), 1),
    ];
    assert_eq!(d.summands, want);
    assert!(d.witness.is_invertible());

    let x = build_simple(f, 2, 0).unwrap().tensor(&build_simple(f, 2, 0).unwrap());
    let d = c.decompose(&x, &[]).unwrap();
    assert_eq!(
        d.summands,
        vec![
            (IndecLabel::simple(3, 1, 1).unwrap(), 1),
            (IndecLabel::simple(3, 3, 0).unwrap(), 1)
        ]
    );
    let v11 = build_simple(f, 1, 1).unwrap();
    let d = c.decompose(&v11.tensor(&v11), &[]).unwrap();
    assert_eq!(d.summands, vec![(IndecLabel::simple(3, 1, 2).unwrap(), 1)]);
}

#[test]
fn syzygies() {
    let c = cat3();
    let om = c.syz(Sign::Plus, 1, 1, 0).unwrap();
    assert_eq!(om.dim(), 5);
    let back = c.cosyzygy(&om).unwrap();
    assert!(is_isomorphic(&back, &c.simple(1, 0).unwrap()).is_iso());
    let (p, _) = c.projective_cover(&c.simple(3, 1).unwrap()).unwrap();
    assert_eq!(p.dim(), 3);
    for m in 1..=4 {
        for l in 1..3 {
            let x = c.syz(Sign::Plus, m, l, 0).unwrap();
            let y = c.syz(Sign::Minus, m, l, 0).unwrap();
            let lab = IndecLabel::syz(3, Sign::Plus, m, l, 0).unwrap();
            assert_eq!(x.dim(), lab.dim(3));
            assert_eq!(y.dim(), lab.dim(3));
            assert!(hom::is_local(&x) && hom::is_local(&y));
            assert_eq!(c.identify(&x, &[]).unwrap(), lab);
        }
    }
}

#[test]
fn band_syzygy_and_identify() {
    let c = cat3();
    let f = c.field();
    let m = c.band(1, 1, 0, &EtaParam::int(f, 1)).unwrap();
    let om = c.syzygy(&m).unwrap();
    let lab = c.identify(&om, &[EtaParam::int(f, 1)]).unwrap();
    assert_eq!(lab, IndecLabel::band(3, 1, 2, 1, EtaParam::Val(-f.q())).unwrap());
    assert!(c.identify(&om, &[EtaParam::int(f, 7)]).is_err());
}

#[test]
fn band_tower_gates() {
    let c = cat3();
    let f = c.field();
    for eta in [EtaParam::int(f, 1), EtaParam::Inf, EtaParam::int(f, 0)] {
        let m = c.band(2, 1, 0, &eta).unwrap();
        assert_eq!(m.dim(), 6);
    }
    let m1 = c.band(1, 1, 0, &EtaParam::int(f, 1)).unwrap();
    let bad = ModuleRep::direct_sum(&[&m1, &m1]);
    let err = c.validate_band_tower(&bad, 2, 1, 0, &EtaParam::int(f, 1)).unwrap_err();
    assert!(err.starts_with("(i)"));
}

#[test]
fn band_times_projective_simple() {
    let c = cat3();
    let f = c.field();
    let eta = EtaParam::int(f, 1);
    let got = c
        .decompose_tensor(&IndecLabel::band(3, 1, 1, 0, eta).unwrap(), &IndecLabel::simple(3, 3, 0).unwrap())
        .unwrap();
    assert_eq!(
        got,
        vec![
            (IndecLabel::simple(3, 3, 0).unwrap(), 1),
            (IndecLabel::proj(3, 2, 2).unwrap(), 1)
        ]
    );
    let got = c
        .decompose_tensor(&IndecLabel::band(3, 2, 1, 0, EtaParam::Inf).unwrap(), &IndecLabel::simple(3, 3, 0).unwrap())
        .unwrap();
    assert_eq!(
        got,
        vec![
            (IndecLabel::simple(3, 3, 0).unwrap(), 2),
            (IndecLabel::proj(3, 2, 2).unwrap(), 2)
        ]
    );
}

#[test]
fn omega_times_cosyzygy() {
    let c = cat3();
    let a = IndecLabel::syz(3, Sign::Plus, 1, 1, 0).unwrap();
    let b = IndecLabel::syz(3, Sign::Minus, 1, 1, 0).unwrap();
    let got = c.decompose_tensor(&a, &b).unwrap();
    let total: usize = got.iter().map(|(l, k)| l.dim(3) * k).sum();
    assert_eq!(total, 25);
    assert_eq!(
        got,
        vec![
            (IndecLabel::simple(3, 1, 0).unwrap(), 1),
            (IndecLabel::simple(3, 3, 2).unwrap(), 4),
            (IndecLabel::proj(3, 2, 1).unwrap(), 2)
        ]
    );
}
