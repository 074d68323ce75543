use num_bigint::BigInt;
use proptest::prelude::*;

use greenring::cyclo::{CycField, Rat};
use greenring::greenring::{lemma32_check, parse_element, Monomial, Presentation, RingElement, WFactor};
use greenring::modcat::EtaParam;

fn eta(n: u32, k: u8) -> EtaParam {
    let f = CycField::get(n);
    match k {
        0 => EtaParam::Inf,
        1 => EtaParam::Val(-f.q()),
        k => EtaParam::int(f, k as i64 - 2),
    }
}

prop_compose! {
    fn monomial(n: u32)(x in 0..2 * n, y in 0..2 * n + 1, zp in 0u32..3, zm in 0u32..3,
                        w in proptest::option::of((1u32..3, 0u8..4))) -> Monomial {
        let mut m = Monomial::xy(x, y);
        m.zp = zp;
        m.zm = zm;
        if let Some((s, k)) = w {
            m = m.mul(&Monomial { w: vec![WFactor { m: s, eta: eta(n, k), e: 1 }], ..Default::default() });
        }
        m
    }
}

fn element(n: u32) -> impl Strategy<Value = RingElement> {
    proptest::collection::vec((monomial(n), -4i64..=4), 1..5).prop_map(|ts| {
        let mut e = RingElement::zero();
        for (m, c) in ts {
            e.add_term(m, BigInt::from(c));
        }
        e
    })
}

fn no_labels(_: &greenring::modcat::IndecLabel) -> Result<RingElement, greenring::greenring::RingError> {
    Err(greenring::greenring::RingError::Parse("labels not allowed here".into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_idempotent_and_keeps_dimension(e in element(3)) {
        let pr = Presentation::get(3);
        let nf = pr.normal_form(&e);
        prop_assert!(pr.is_normal_element(&nf));
        prop_assert_eq!(pr.normal_form(&nf), nf.clone());
        prop_assert_eq!(nf.dimev(3), e.dimev(3));
    }

    #[test]
    fn product_is_commutative_and_associative(a in element(3), b in element(3), c in element(3)) {
        let pr = Presentation::get(3);
        prop_assert_eq!(pr.multiply(&a, &b), pr.multiply(&b, &a));
        prop_assert_eq!(pr.multiply(&pr.multiply(&a, &b), &c), pr.multiply(&a, &pr.multiply(&b, &c)));
    }

    #[test]
    fn reduction_is_a_ring_map_at_n4(a in element(4), b in element(4)) {
        let pr = Presentation::get(4);
        let lhs = pr.normal_form(&a.mul(&b));
        prop_assert_eq!(lhs, pr.multiply(&pr.normal_form(&a), &pr.normal_form(&b)));
    }

    #[test]
    fn display_parses_back(e in element(3)) {
        let nf = Presentation::get(3).normal_form(&e);
        let back = parse_element(CycField::get(3), &nf.to_string(), no_labels).unwrap();
        prop_assert_eq!(back, nf);
    }

    #[test]
    fn json_round_trip(e in element(4)) {
        let back = RingElement::from_json(CycField::get(4), &e.to_json()).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn eta_display_parses_back(n in 3u32..6, cs in proptest::collection::vec((-9i64..10, 1i64..5), 1..5)) {
        let f = CycField::get(n);
        let mut v = f.zero();
        for (k, (p, q)) in cs.iter().enumerate() {
            v += &f.q().pow(k as u64).scale(&Rat::new(*p, *q));
        }
        let e = EtaParam::Val(v);
        prop_assert_eq!(EtaParam::parse(f, &e.to_string()).unwrap(), e);
    }

    #[test]
    fn binomial_identity_beyond_the_sweep(m in 61i64..160, l in 1i64..80, s in 0i64..160) {
        let l = 1 + l % ((m - 1) / 2);
        let s = s % (2 * l + 1);
        prop_assert!(lemma32_check(m, l, s));
    }
}
