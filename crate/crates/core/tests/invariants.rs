use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use diophlab::dagroups::{combine, dual, member_from_convergents, membership, ApproxSequence, NumeratorConstraint};
use diophlab::numfield::{FieldElement, NumberField};
use diophlab::{Config, RealOracle};

fn element(d: usize) -> impl Strategy<Value = FieldElement> {
    prop::collection::vec((-9i64..=9, 1i64..=4), d)
        .prop_map(|cs| FieldElement::new(cs.into_iter().map(|(n, q)| BigRational::new(n.into(), q.into())).collect()))
}

fn field_and_elements() -> impl Strategy<Value = (String, FieldElement, FieldElement, FieldElement)> {
    prop::sample::select(vec!["Q(sqrt 2)", "Q(sqrt 5)", "Q(sqrt 13)", "maxreal7"]).prop_flat_map(|name| {
        let d = NumberField::builtin(name).unwrap().degree();
        (Just(name.to_string()), element(d), element(d), element(d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rational_theta_ideal_law(a in -30i64..=30, b in 1i64..=30, n in -500i64..=500) {
        prop_assume!(num_integer::gcd(a, b) == 1);
        let cfg = Config::default();
        let theta = RealOracle::rational(BigRational::new(a.into(), b.into()));
        let seq = ApproxSequence::bind(&theta, vec![n.into(); 4], &cfg).unwrap();
        let v = membership(&theta, &seq, NumeratorConstraint::Integers, &cfg).unwrap();
        prop_assert_eq!(v.is_certified(), n % b == 0);
    }

    #[test]
    fn dual_is_an_involution(d in 2i64..60, len in 2usize..12) {
        let root = (d as f64).sqrt().round() as i64;
        prop_assume!(root * root != d);
        let cfg = Config::default();
        let theta = RealOracle::sqrt(d);
        let seq = member_from_convergents(&theta, len, &cfg).unwrap();
        let (inv, once) = dual(&theta, &seq, &cfg).unwrap();
        prop_assert_eq!(&once.entries, &seq.duals);
        let (_, twice) = dual(&inv, &once, &cfg).unwrap();
        prop_assert_eq!(twice.entries, seq.entries);
        prop_assert_eq!(twice.duals, seq.duals);
    }

    #[test]
    fn members_form_a_group(d in 2i64..40, c1 in -5i64..=5, c2 in -5i64..=5) {
        let root = (d as f64).sqrt().round() as i64;
        prop_assume!(root * root != d);
        let cfg = Config::default();
        let theta = RealOracle::sqrt(d);
        let long = member_from_convergents(&theta, 9, &cfg).unwrap();
        let head = ApproxSequence { entries: long.entries[..8].to_vec(), duals: long.duals[..8].to_vec(), ..long.clone() };
        let tail = ApproxSequence { entries: long.entries[1..].to_vec(), duals: long.duals[1..].to_vec(), ..long.clone() };
        let sum = combine(&head, &tail, &BigInt::from(c1), &BigInt::from(c2)).unwrap();
        let v = membership(&theta, &sum, NumeratorConstraint::Integers, &cfg).unwrap();
        prop_assert!(v.is_member(), "{c1} a + {c2} b rejected: {:?}", v.status);
    }

    #[test]
    fn field_arithmetic_laws((name, a, b, c) in field_and_elements()) {
        let k = NumberField::builtin(&name).unwrap();
        prop_assert_eq!(k.mul(&a, &b), k.mul(&b, &a));
        prop_assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
        prop_assert_eq!(k.mul(&a, &b.add(&c)), k.mul(&a, &b).add(&k.mul(&a, &c)));
        prop_assert_eq!(k.norm(&k.mul(&a, &b)), k.norm(&a) * k.norm(&b));
        prop_assert_eq!(k.trace(&a.add(&b)), k.trace(&a) + k.trace(&b));
        prop_assert_eq!(k.mul(&a, &k.one()), a);
    }

    #[test]
    fn embeddings_are_ring_maps((name, a, b, _c) in field_and_elements()) {
        let k = NumberField::builtin(&name).unwrap();
        let ab = k.embed(&k.mul(&a, &b), 96).unwrap();
        let (ea, eb) = (k.embed(&a, 96).unwrap(), k.embed(&b, 96).unwrap());
        for nu in 0..k.degree() {
            prop_assert!(ab[nu].intersect(&ea[nu].mul(&eb[nu])).is_some());
        }
    }
}
