use kummerlab::algebra::cartier::{z_dimensions, Ambient};
use kummerlab::algebra::Field;
use kummerlab::rdp::*;
use kummerlab::surface::{sample_spec, Branch, Family};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn legal_types(max_n: u32) -> Vec<RdpType> {
    let mut v = Vec::new();
    for n in 1..=max_n {
        v.push(RdpType::a(n));
        if n >= 4 {
            for r2 in 0..=n {
                if let Ok(t) = RdpType::new(Kind::D, n, r2, 2) {
                    v.push(t);
                }
            }
        }
        if (6..=8).contains(&n) {
            for p in [2, 3, 5] {
                for r2 in (0..=8).step_by(2) {
                    if let Ok(t) = RdpType::new(Kind::E, n, r2, p) {
                        v.push(t);
                    }
                }
            }
        }
    }
    v
}

#[test]
fn index_16_bound_is_exactly_the_five_kummer_configurations() {
    let r = verify_leq5(16).unwrap();
    assert_eq!(r.max_value, 5);
    let want: Vec<RdpCollection> =
        ["16A_1", "4D_4^0", "2D_8^0", "1D_16^0", "2E_8^0"].iter().map(|s| s.parse().unwrap()).collect();
    let mut want = want;
    want.sort();
    assert_eq!(r.equality_cases, want);
    assert_eq!(r.collections, enumerate_collections(16).len());
}

#[test]
fn smaller_budgets_stay_below() {
    for max in [0, 4, 8, 12] {
        let r = verify_leq5(max).unwrap();
        assert!(r.max_value <= 5, "{max}: {}", r.max_value);
    }
    assert_eq!(verify_leq5(0).unwrap().max_value, 0);
}

#[test]
fn enumeration_count_matches_generating_function() {
    // colored partitions: coefficient of q^k in prod_n (1 - q^n)^{-c_n}
    let c = |n: usize| 1 + usize::from(n >= 4) + usize::from((6..=8).contains(&n));
    let mut ways = vec![0u64; 17];
    ways[0] = 1;
    for n in 1..=16 {
        for _ in 0..c(n) {
            for k in n..=16 {
                ways[k] += ways[k - n];
            }
        }
    }
    let total: u64 = ways.iter().sum();
    assert_eq!(enumerate_collections(16).len() as u64, total);
}

#[test]
fn b_bar_is_monotone_and_stabilizes_at_b_index() {
    for t in legal_types(20) {
        let nb = t.b_index().unwrap();
        let seq: Vec<u32> = (0..=nb + 4).map(|n| t.dim_b_bar(n).unwrap()).collect();
        assert!(seq.windows(2).all(|w| w[0] <= w[1]), "{t}");
        assert!(seq[nb as usize..].iter().all(|&x| x == seq[nb as usize]), "{t}");
        if nb > 0 {
            assert_ne!(seq[nb as usize - 1], seq[nb as usize], "{t} stabilizes earlier");
            // the last step adds exactly one dimension
            assert_eq!(seq[nb as usize] - seq[nb as usize - 1], 1, "{t}");
        }
        assert_eq!(nb == 0, seq.iter().all(|&x| x == 0), "{t}");
    }
}

#[test]
fn d_rows_match_basis_count() {
    // basis f_j^(l), l <= n, 2^(l-1)(2j-1) <= N/2 - r - 1: count i <= k with ord_2(i) < n
    for t in legal_types(24).into_iter().filter(|t| t.kind == Kind::D) {
        let k = (t.n - t.r2 - 2) / 2;
        for n in 0..8 {
            let count = (1..=k).filter(|i| i.trailing_zeros() < n).count() as u32;
            assert_eq!(t.dim_b_bar(n).unwrap(), count, "{t} n={n}");
        }
    }
}

#[test]
fn index_splits_for_d_types() {
    for l in 2..=10 {
        let (i, m, b) = RdpType::d(2 * l, 0).mzbz().unwrap();
        assert_eq!(i, m + b);
        let (i, m, b) = RdpType::d(2 * l + 1, 1).mzbz().unwrap();
        assert_eq!(i, 2 * l + 1);
        assert_eq!((m, b), (2, l - 1));
    }
}

#[test]
fn odd_characteristic_rows() {
    let e8 = RdpType::new(Kind::E, 8, 0, 3).unwrap();
    assert_eq!((e8.b_index().unwrap(), e8.dim_b_bar(1).unwrap(), e8.dim_b_bar(2).unwrap()), (2, 1, 2));
    let e8 = RdpType::new(Kind::E, 8, 0, 5).unwrap();
    assert_eq!((e8.b_index().unwrap(), e8.dim_b_bar(1).unwrap()), (1, 1));
    assert_eq!(RdpType::new(Kind::E, 8, 2, 5).unwrap().b_index().unwrap(), 0);
    assert!(RdpType::new(Kind::E, 8, 4, 5).is_err());
}

#[test]
fn global_b_n() {
    let c: RdpCollection = "2E_8^0".parse().unwrap();
    assert_eq!((0..=3).map(|n| h0_bn_dim(&c, n).unwrap()).collect::<Vec<_>>(), vec![0, 3, 4, 5]);
    assert_eq!(h0_bn_dim(&c, 9).unwrap(), 5);
    let c: RdpCollection = "1D_16^0".parse().unwrap();
    assert_eq!((0..=3).map(|n| h0_bn_dim(&c, n).unwrap()).collect::<Vec<_>>(), vec![0, 3, 4, 4]);
    // E_8^1: local dims 1, 2, 3 cancel n exactly
    let c: RdpCollection = "E_8^1".parse().unwrap();
    assert_eq!(h0_bn_dim(&c, 3).unwrap(), 0);
    let c: RdpCollection = "D_5^1/2".parse().unwrap();
    assert_eq!(h0_bn_dim(&c, 1).unwrap(), 0);
}

#[test]
fn global_b_n_never_negative_for_index_16() {
    for c in enumerate_collections(16) {
        for n in 0..5 {
            assert!(h0_bn_dim(&c, n).is_ok(), "{c} n={n}");
        }
    }
}

#[test]
fn z_infty_examples() {
    let b = z_infty_upper_bound(&"16A_1".parse().unwrap()).unwrap();
    assert_eq!((b.bound, b.possibly_not_sharp), (5, false));
    let b = z_infty_upper_bound(&"13A_1 + D_4^0".parse().unwrap()).unwrap();
    assert_eq!((b.bound, b.f_m, b.b_minus_nb, b.possibly_not_sharp), (5, 5, 0, true));
    let b = z_infty_upper_bound(&"2E_8^0".parse().unwrap()).unwrap();
    assert_eq!((b.bound, b.f_m, b.b_minus_nb), (5, 0, 5));
    assert_eq!(z_infty_upper_bound(&RdpCollection::new()).unwrap().bound, 0);
}

#[test]
fn bound_matches_the_stable_filtration() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let f = Field::binary(4);
    for b in Branch::ALL.into_iter().filter(|b| b.is_rdp()) {
        let c = RdpCollection::from_branch(b).unwrap();
        let bound = z_infty_upper_bound(&c).unwrap();
        assert!(!bound.possibly_not_sharp);
        for (fam, amb) in [(Family::Class4, Ambient::class4()), (Family::Class2, Ambient::class2())] {
            let s = sample_spec(fam, b, &f, &mut rng).unwrap();
            let d = z_dimensions(&s.poly(), &amb, 6);
            assert_eq!(*d.last().unwrap() as i64, bound.bound, "{fam} {b}");
        }
    }
}

proptest! {
    #[test]
    fn collection_aggregates_add_up(a1 in 0u32..8, d4 in 0u32..3, e8 in 0u32..2) {
        let c = RdpCollection::from_types(&[(RdpType::a(1), a1), (RdpType::d(4, 0), d4), (RdpType::e(8, 0), e8)]);
        let g = c.aggregates().unwrap();
        prop_assert_eq!(g.i, a1 + 4 * d4 + 8 * e8);
        prop_assert_eq!(g.m, a1 + 3 * d4);
        prop_assert_eq!(g.b, d4 + 4 * e8);
        prop_assert_eq!(g.n_b, if e8 > 0 { 3 } else if d4 > 0 { 1 } else { 0 });
        let back: RdpCollection = c.to_string().parse().unwrap();
        prop_assert_eq!(back, c);
    }
}
