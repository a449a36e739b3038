use std::collections::BTreeSet;

use kummerlab::kummer::embed::{embed_any, glue_rank};
use kummerlab::kummer::*;
use kummerlab::scalar::rat;
use kummerlab::Rational;
use num_traits::One;

#[test]
fn table_columns() {
    let over = ["1", "2", "4", "8", "8"];
    let extra = [0, 64, 192, 448, 448];
    let a = [6, 4, 2, 0, 0];
    for (i, kind) in KummerType::ALL.into_iter().enumerate() {
        let k = build_kummer(kind).unwrap();
        let r = kummer_report(&k).unwrap();
        assert_eq!(r.index_over_16a1, over[i], "{kind}");
        assert_eq!(r.extra_root_count, extra[i], "{kind}");
        assert_eq!(r.disc_two_rank, Some(a[i]), "{kind}");
        assert_eq!(r.rank, 16);
    }
}

#[test]
fn two_e8_is_unimodular() {
    let k = build_kummer(KummerType::E8x2).unwrap();
    assert!(k.lattice.determinant().is_one());
    assert!(k.lattice.discriminant_group().unwrap().orders.is_empty());
}

#[test]
fn names_parse_back() {
    for kind in KummerType::ALL {
        assert_eq!(kind.name().parse::<KummerType>().unwrap(), kind);
    }
    assert!("3D5".parse::<KummerType>().is_err());
}

#[test]
fn glue_values_of_t_and_u() {
    let k = build_kummer(KummerType::A1x16).unwrap();
    let ts: Vec<Vec<Rational>> = t_planes().iter().map(|t| k.half_class(t)).collect();
    let want: Vec<BTreeSet<Rational>> = [0, 0, 1, 1, 0].iter().map(|&x| BTreeSet::from([rat(x, 1)])).collect();
    assert_eq!(q_glue_values(&k.lattice, &ts).unwrap(), want);
    let q4 = build_q(Complement::Q4);
    assert_eq!(q_glue_values(&q4, &u_classes_q4()).unwrap()[..5], want[..]);
    assert!(glue_compatible(&k.lattice, &ts, &q4, &u_classes_q4()));
}

#[test]
fn every_embedding_has_the_expected_invariants() {
    for kind in KummerType::ALL {
        for sigma in 1..=kind.sigma_max() {
            let e = embed_any(kind, sigma).unwrap();
            assert_eq!(e.signature, (1, 21), "{kind} {sigma}");
            assert!(e.even && e.two_elementary && e.type2, "{kind} {sigma}");
            assert_eq!(e.disc_two_rank, Some(2 * sigma as usize));
            assert!(e.k_saturated && e.roots_split, "{kind} {sigma}");
            // the orthogonal complement of K is 2-elementary of type 2
            assert!(e.complement_two_elementary && e.complement_type2, "{kind} {sigma}");
            assert!(e.all_verified());
        }
        assert_eq!(embed_any(kind, kind.sigma_max() + 1).unwrap_err(), KummerError::NoEmbedding);
    }
}

#[test]
fn glue_rank_and_sigma_agree() {
    // 2 sigma = a + 4 - 2n for n glue generators with Q_4
    for kind in KummerType::ALL {
        let a = [6, 4, 2, 0, 0][KummerType::ALL.iter().position(|&k| k == kind).unwrap()];
        for sigma in 1..=kind.sigma_max() {
            if let Ok(n) = glue_rank(kind, sigma, Complement::Q4, a) {
                let e = embed_kummer(kind, sigma, Complement::Q4, false).unwrap();
                assert_eq!(e.glue_rank, n, "{kind} {sigma}");
            }
        }
    }
}

#[test]
fn q2_extended_construction() {
    // a = 6 and b = 2: sigma = 1 would need three glue generators
    assert!(embed_kummer(KummerType::A1x16, 1, Complement::Q2, true).is_err());
    let e = embed_kummer(KummerType::A1x16, 2, Complement::Q2, true).unwrap();
    assert!(e.all_verified());
    assert_eq!(e.complement, Complement::Q2);
}
