use kummerlab::codes::*;
use proptest::prelude::*;
use std::collections::BTreeMap;

fn permute(c: &BinaryCode, perm: &[usize]) -> BinaryCode {
    let rows: Vec<u32> = c
        .basis()
        .iter()
        .map(|&w| (0..c.m()).filter(|&i| w >> i & 1 == 1).fold(0u32, |a, i| a | 1 << perm[i]))
        .collect();
    BinaryCode::new(c.m(), &rows).unwrap()
}

#[test]
fn f_values() {
    assert_eq!(f_bound(0).unwrap(), 0);
    assert_eq!(f_bound(16).unwrap(), 5);
    assert_eq!(f_bound(24).unwrap(), 12);
    for m in 17..=24 {
        assert_eq!(f_bound(m).unwrap(), m - 12);
    }
}

#[test]
fn v16_shape() {
    let v = build_v16();
    assert_eq!(v.dim(), 5);
    let want: BTreeMap<u32, u64> = [(0, 1), (8, 30), (16, 1)].into_iter().collect();
    assert_eq!(v.weight_distribution(), want);
    assert!(v.is_kummer_admissible());
}

#[test]
fn subcode_examples() {
    let c = build_subcode(0).unwrap();
    assert_eq!((c.m(), c.dim()), (0, 0));
    let c = build_subcode(4).unwrap();
    assert_eq!((c.m(), c.dim()), (15, 4));
    let c = build_subcode(2).unwrap();
    assert_eq!((c.m(), c.dim()), (12, 2));
    assert!(c.codewords().iter().all(|&w| w == 0 || w.count_ones() == 8));
}

#[test]
fn golay_examples() {
    let g = golay_witness().unwrap();
    assert_eq!(g.dim(), 12);
    let ws: Vec<u32> = g.weight_distribution().into_keys().collect();
    assert_eq!(ws, vec![0, 8, 12, 16, 24]);
    assert!(g.is_kummer_admissible());
}

#[test]
fn search_examples() {
    assert_eq!(max_admissible_dim(12, u64::MAX).unwrap().g, 2);
    let o = max_admissible_dim(16, u64::MAX).unwrap();
    assert_eq!((o.g, o.maximal.len()), (5, 1));
    assert!(are_equivalent(&o.maximal[0], &build_v16()));
    assert_eq!(max_admissible_dim(17, u64::MAX).unwrap().g, 5);
}

#[test]
fn g_is_a_monotone_chain() {
    let rows = g_table(17, u64::MAX).unwrap();
    assert!(rows.iter().all(|r| r.exhaustive && r.g == r.f));
    for w in rows.windows(2) {
        assert!(w[0].g <= w[1].g && w[1].g <= w[0].g + 1, "m = {}", w[1].m);
    }
}

#[test]
fn overlattice_examples() {
    let zero = BinaryCode::zero(16);
    let o = code_to_overlattice(&zero).unwrap();
    assert_eq!(o.lattice.roots().unwrap().len(), 16);
    let o = code_to_overlattice(&build_v16()).unwrap();
    assert_eq!(o.index, 32.into());
    let four = BinaryCode::new(4, &[0b1111]).unwrap();
    assert!(matches!(code_to_overlattice(&four), Err(CodeError::WeightFour)));
}

#[test]
fn equivalence_examples() {
    let v = build_v16();
    let perm: Vec<usize> = (0..16).map(|i| (5 * i + 3) % 16).collect();
    let p = permute(&v, &perm);
    assert_ne!(p, v);
    assert!(are_equivalent(&v, &p));
    // same dimension, different weights
    let other = BinaryCode::new(16, &[0x000F, 0x00F0, 0x0F00, 0xF000, 0x3333]).unwrap();
    assert_eq!(other.dim(), 5);
    assert_ne!(other.weight_distribution(), v.weight_distribution());
    let classes = equivalence_classes(&[v, p, other]);
    assert_eq!(classes, vec![vec![0, 1], vec![2]]);
}

#[test]
fn v16_cells_are_balanced() {
    let v = build_v16();
    let words = v.codewords();
    // every independent family B_1..B_l of hyperplanes cuts 16 / 2^l points per cell
    let hyper: Vec<u32> = words.iter().copied().filter(|w| w.count_ones() == 8).collect();
    for l in 1..=4usize {
        for start in 0..hyper.len() {
            let mut chosen: Vec<u32> = Vec::new();
            for &h in hyper.iter().cycle().skip(start).take(hyper.len()) {
                if chosen.len() == l {
                    break;
                }
                let c = BinaryCode::new(16, &[chosen.clone(), vec![h, 0xFFFF]].concat()).unwrap();
                if c.dim() == chosen.len() + 2 {
                    chosen.push(h);
                }
            }
            if chosen.len() < l {
                continue;
            }
            let cells = intersection_cells(16, &chosen);
            assert!(cells.iter().all(|&n| n == 16 >> l), "{chosen:?} {cells:?}");
        }
    }
}

fn admissible_code() -> impl Strategy<Value = BinaryCode> {
    (8usize..=16, prop::collection::vec(any::<u16>(), 0..6)).prop_map(|(m, picks)| {
        let g = shortened_golay(m).unwrap();
        let words = g.codewords();
        let rows: Vec<u32> = picks.iter().map(|&p| words[p as usize % words.len()]).collect();
        BinaryCode::new(m, &rows).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn admissible_overlattices_have_only_the_obvious_roots(c in admissible_code()) {
        prop_assert!(c.is_kummer_admissible());
        let o = code_to_overlattice(&c).unwrap();
        prop_assert!(o.lattice.is_even());
        prop_assert_eq!(2 * o.lattice.roots().unwrap().len(), 2 * c.m());
    }

    #[test]
    fn codeword_pairs_meet_evenly(c in admissible_code()) {
        let words = c.codewords();
        for &a in &words {
            for &b in &words {
                prop_assert_eq!((a & b).count_ones() % 2, 0);
            }
        }
    }

    #[test]
    fn json_round_trips(c in admissible_code()) {
        prop_assert_eq!(BinaryCode::from_json(&c.to_json()).unwrap(), c);
    }
}
