use kummerlab::kummer::{build_kummer, build_q, Complement, KummerType};
use kummerlab::lattice::glue::{glue, saturation, GlueData};
use kummerlab::lattice::{ade_type, diagonal, root_lattice_a, root_lattice_d, root_lattice_e};
use kummerlab::scalar::rat_mod;
use kummerlab::{Int, Lattice, Lattice64, Rational};
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn two() -> Int {
    Int::from(2)
}

fn zoo() -> Vec<(String, Lattice)> {
    let mut v: Vec<(String, Lattice)> = Vec::new();
    for n in 1..=7 {
        v.push((format!("A{n}"), root_lattice_a(n)));
    }
    for n in 4..=8 {
        v.push((format!("D{n}"), root_lattice_d(n)));
    }
    for n in 6..=8 {
        v.push((format!("E{n}"), root_lattice_e(n)));
    }
    v.push(("A1^16".into(), diagonal(&[-2; 16])));
    v.push(("Q4".into(), build_q(Complement::Q4)));
    v.push(("Q2".into(), build_q(Complement::Q2)));
    for k in KummerType::ALL {
        v.push((format!("K({k})"), build_kummer(k).unwrap().lattice));
    }
    v
}

#[test]
fn determinant_examples() {
    assert_eq!(diagonal::<Int>(&[-2]).determinant(), Int::from(-2));
    assert_eq!(root_lattice_e::<Int>(8).determinant(), Int::one());
    assert_eq!(diagonal::<Int>(&[-2; 16]).determinant(), Int::from(1 << 16));
    assert_eq!(root_lattice_a::<i64>(4).determinant(), 5);
}

#[test]
fn signature_examples() {
    let s = diagonal::<Int>(&[-2]).signature();
    assert_eq!((s.pos, s.neg), (0, 1));
    let s = build_q(Complement::Q4).signature();
    assert_eq!((s.pos, s.neg, s.null), (1, 5, 0));
}

#[test]
fn discriminant_group_order_is_determinant() {
    for (name, l) in zoo() {
        let d = l.discriminant_group().unwrap();
        assert_eq!(d.size(), l.determinant().abs(), "{name}");
        // q(n g) = n^2 q(g) in Q/2Z
        for (g, ord) in d.generators.iter().zip(&d.orders) {
            let ord = ord.to_i64().unwrap();
            for n in 1..=ord {
                let ng: Vec<Rational> = g.iter().map(|c| c * Rational::from_integer(n.into())).collect();
                let lhs = rat_mod(&l.pairing(&ng, &ng), &two());
                let rhs = rat_mod(&(l.pairing(g, g) * Rational::from_integer((n * n).into())), &two());
                assert_eq!(lhs, rhs, "{name} n={n}");
            }
        }
    }
}

#[test]
fn a1_discriminant_form() {
    let d = diagonal::<Int>(&[-2]).discriminant_group().unwrap();
    assert_eq!(d.orders, vec![two()]);
    assert_eq!(d.q_values, vec![Rational::new(3.into(), 2.into())]);
    assert_eq!(diagonal::<Int>(&[-2]).is_two_elementary_type2().unwrap(), (true, false));
}

#[test]
fn type2_flag_matches_brute_force() {
    for (name, l) in zoo() {
        let d = l.discriminant_group().unwrap();
        if d.size() > Int::from(1 << 10) {
            continue;
        }
        let elementary = d.orders.iter().all(|o| *o == two());
        let integral = d.elements().iter().all(|x| l.pairing(x, x).is_integer());
        let (el, t2) = l.is_two_elementary_type2().unwrap();
        assert_eq!(el, elementary, "{name}");
        if el {
            assert_eq!(t2, integral, "{name}");
        }
    }
}

#[test]
fn root_examples() {
    assert_eq!(diagonal::<Int>(&[-2]).roots().unwrap().len(), 1);
    assert_eq!(root_lattice_d::<Int>(4).roots().unwrap().len(), 12);
    let k = build_kummer(KummerType::D4x4).unwrap().lattice;
    assert_eq!(k.roots().unwrap().len(), 48);
    for (kind, want) in [(KummerType::A1x16, "16A1"), (KummerType::D8x2, "2D8"), (KummerType::E8x2, "2E8")] {
        let l = build_kummer(kind).unwrap().lattice;
        let r = l.roots().unwrap();
        assert_eq!(ade_type(&l, &r).unwrap().to_string(), want);
    }
}

#[test]
fn saturation_examples() {
    let a1 = diagonal::<Int>(&[-2]);
    let s = saturation(&a1, &vec![vec![two()]]).unwrap();
    assert_eq!(s.index, two());
    let k = build_kummer(KummerType::A1x16).unwrap();
    let roots = k.lattice.roots().unwrap();
    assert_eq!(saturation(&k.lattice, &roots).unwrap().index, Int::from(32));
    let k = build_kummer(KummerType::D16).unwrap();
    let roots = k.lattice.roots().unwrap();
    assert_eq!(saturation(&k.lattice, &roots).unwrap().index, two());
}

#[test]
fn trivial_glue_is_direct_sum() {
    let a = root_lattice_a::<Int>(2);
    let d = root_lattice_d::<Int>(4);
    let g = glue(&a, &d, &GlueData { m1: vec![], m2: vec![] }).unwrap();
    assert_eq!(g.index, Int::one());
    assert_eq!(g.lattice.determinant(), a.direct_sum(&d).determinant());
}

#[test]
fn reflection_examples() {
    let d = root_lattice_d::<Int>(4);
    let v: Vec<Int> = vec![1.into(), 0.into(), 0.into(), 0.into()];
    let minus: Vec<Int> = v.iter().map(|x| -x).collect();
    assert_eq!(d.reflect(&v, &v), minus);
    let x: Vec<Int> = vec![0.into(), 0.into(), 0.into(), 1.into()];
    assert!(d.ipairing(&x, &v).is_zero());
    assert_eq!(d.reflect(&x, &v), x);
}

fn small_root_lattice() -> impl Strategy<Value = Lattice64> {
    prop_oneof![
        (1usize..8).prop_map(root_lattice_a::<i64>),
        (4usize..8).prop_map(root_lattice_d::<i64>),
        (6usize..=8).prop_map(root_lattice_e::<i64>),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reflections_are_isometric_involutions(
        l in small_root_lattice(),
        pick in any::<prop::sample::Index>(),
        x in prop::collection::vec(-5i64..=5, 8),
        y in prop::collection::vec(-5i64..=5, 8),
    ) {
        let roots = l.roots().unwrap();
        let v = &roots[pick.index(roots.len())];
        let n = l.rank();
        let (x, y) = (&x[..n], &y[..n]);
        let rx = l.reflect(x, v);
        let ry = l.reflect(y, v);
        prop_assert_eq!(l.ipairing(&rx, &ry), l.ipairing(x, y));
        prop_assert_eq!(l.reflect(&rx, v), x.to_vec());
    }
}

proptest! {
    #[test]
    fn negative_definite_sums_have_signature_zero_rank(parts in prop::collection::vec(0usize..3, 1..4)) {
        let mut l: Lattice = diagonal(&[-2]);
        for p in parts {
            let next: Lattice = match p {
                0 => root_lattice_a(3),
                1 => root_lattice_d(5),
                _ => root_lattice_e(6),
            };
            l = l.direct_sum(&next);
        }
        let s = l.signature();
        prop_assert_eq!((s.pos, s.neg, s.null), (0, l.rank(), 0));
        prop_assert!(l.is_negative_definite());
    }
}
