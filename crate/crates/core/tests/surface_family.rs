use std::collections::HashSet;

use kummerlab::algebra::cartier::{cartier_p2, FormElement};
use kummerlab::algebra::{Field, FqPoly};
use kummerlab::surface::derivation::hamiltonian_derivation;
use kummerlab::surface::singular::{profile, translate_general};
use kummerlab::surface::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const FAMILIES: [Family; 2] = [Family::Class4, Family::Class2];

#[test]
fn coefficient_branch_matches_point_profile() {
    let jobs: Vec<(Family, Branch, u32)> = FAMILIES
        .iter()
        .flat_map(|&fam| Branch::ALL.iter().flat_map(move |&b| (4..=8).map(move |e| (fam, b, e))))
        .collect();
    let counts: Vec<usize> = jobs
        .par_iter()
        .map(|&(fam, b, e)| {
            let f = Field::binary(e);
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + e as u64 * 17 + b as u64 * 3 + fam as u64);
            for _ in 0..40 {
                let s = sample_spec(fam, b, &f, &mut rng).unwrap();
                assert_eq!(classify_by_coefficients(&s).unwrap(), b);
                let p = profile(&s).unwrap();
                assert!(p.matches(b), "{s:?} gave {p:?}");
                assert_eq!(p.total(), 16);
            }
            40
        })
        .collect();
    // 40 per field, five fields: 200 per branch and family
    assert_eq!(counts.iter().sum::<usize>(), 200 * 6 * 2);
}

#[test]
fn explicit_points_translate_and_form_a_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for fam in FAMILIES {
        for b in Branch::ALL {
            for e in [2, 3, 4] {
                let f = Field::binary(e);
                let Ok(s) = sample_spec(fam, b, &f, &mut rng) else {
                    assert!(e <= 2 && fam == Family::Class4 && matches!(b, Branch::D16 | Branch::E8x2));
                    continue;
                };
                let pts = singular_points(&s).unwrap();
                let (n, c) = b.profile();
                assert_eq!(pts.len(), n, "{s:?}");
                assert!(pts.iter().all(|p| p.colength == c));
                let k = pts[0].field.clone();
                let set: HashSet<(u128, u128)> = pts.iter().map(|p| (p.x, p.y)).collect();
                for p in &pts {
                    for q in &pts {
                        assert!(set.contains(&(k.add(p.x, q.x), k.add(p.y, q.y))), "not closed under addition");
                    }
                    let tr = translate_to_origin(&s, p).unwrap();
                    let moved = tr.spec.poly().shift(&[p.x, p.y]);
                    let back = tr.spec.poly().add(&tr.f.mul(&tr.f)).add(&moved.constant_like(tr.constant));
                    assert_eq!(moved, back);
                }
            }
        }
    }
}

#[test]
fn smooth_point_is_rejected() {
    let f = Field::binary(3);
    let s = SurfaceSpec::new(Family::Class4, &f, &[((1, 1), 1)]).unwrap();
    // the singular points are F_4 x F_4; z in F_8 is not in F_4
    let p = SingularPoint { field: f.clone(), x: 2, y: 0, colength: 0, residue_degree: 3 };
    assert!(matches!(translate_to_origin(&s, &p), Err(SurfaceError::NotSingular(..))));
}

#[test]
fn report_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let f = Field::binary(5);
    let s = sample_spec(Family::Class4, Branch::A1x16, &f, &mut rng).unwrap();
    let r = classify_full(&s, false).unwrap();
    assert_eq!((r.branch, r.affine_colength_total), (Branch::A1x16, 16));
    let s = SurfaceSpec::new(Family::Class2, &f, &[((1, 2), 3), ((0, 5), 7)]).unwrap();
    let r = classify_full(&s, true).unwrap();
    assert_eq!((r.branch, r.point_count, r.colengths.clone()), (Branch::D8x2, 2, vec![8, 8]));
    let s = sample_spec(Family::Class4, Branch::E8x2, &f, &mut rng).unwrap();
    let r = classify_full(&s, true).unwrap();
    assert_eq!((r.point_count, r.colengths.clone()), (2, vec![8, 8]));
    let s = sample_spec(Family::Class4, Branch::NonRdp, &f, &mut rng).unwrap();
    let r = classify_full(&s, true).unwrap();
    assert_eq!((r.point_count, r.tyurina_total, r.tyurina.clone()), (1, 32, vec![32]));
}

#[test]
fn cartier_eigenvalue_on_eta0() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for e in [3, 4, 6] {
        let f = Field::binary(e);
        for fam in FAMILIES {
            for b in Branch::ALL {
                let s = sample_spec(fam, b, &f, &mut rng).unwrap();
                let h = s.poly();
                let c = cartier_p2(&h.constant_like(1), &h);
                let root = f.sqrt(s.h(1, 1));
                assert_eq!(c, FormElement::polynomial(h.constant_like(root), &h));
                assert_eq!(c.is_zero(), b != Branch::A1x16);
            }
        }
    }
}

#[test]
fn z1z2_parametrization() {
    for e in [4, 6, 8] {
        assert!(z1z2_parametrization_check(&Field::binary(e)).unwrap());
    }
}

fn extended(fam: Family, b: Branch, f: &Field, h07: bool, rng: &mut ChaCha8Rng) -> SurfaceSpec {
    let mut s = sample_spec(fam, b, f, rng).unwrap();
    for &k in fam.extra_keys() {
        s.set(k, f.random(rng)).unwrap();
    }
    if h07 {
        s.set((0, 7), f.random_nonzero(rng)).unwrap();
    }
    s
}

#[test]
fn normalization_preserves_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let f = Field::binary(4);
    for fam in FAMILIES {
        for b in Branch::ALL {
            for _ in 0..5 {
                let s = extended(fam, b, &f, false, &mut rng);
                let n = normalize(&s).unwrap();
                assert!(n.is_normalized());
                let p = profile(&s).unwrap();
                assert_eq!(p, profile(&n).unwrap());
                let r = classify_full(&n, false).unwrap();
                assert!(p.matches(r.branch));
            }
        }
    }
}

#[test]
fn dropping_linear_terms_is_a_translation() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let f = Field::binary(3);
    for fam in FAMILIES {
        for b in [Branch::A1x16, Branch::D4x4, Branch::D8x2] {
            let mut s = sample_spec(fam, b, &f, &mut rng).unwrap();
            s.set((1, 0), f.random_nonzero(&mut rng)).unwrap();
            s.set((0, 1), f.random_nonzero(&mut rng)).unwrap();
            let n = normalize(&s).unwrap();
            for p in singular_points(&s).unwrap() {
                let moved = translate_general(&s, &p).unwrap();
                let emb = kummerlab::algebra::embed_field(&f, &p.field).unwrap();
                assert_eq!(moved, n.embed(&emb));
            }
        }
    }
}

#[test]
fn normalization_with_h07_moves_the_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let f = Field::binary(2);
    for b in Branch::ALL {
        let s = extended(Family::Class2, b, &f, true, &mut rng);
        let n = normalize(&s).unwrap();
        assert!(n.is_normalized());
        assert_eq!(n.h(0, 7), kummerlab::algebra::embed_field(&f, n.field()).unwrap().apply(s.h(0, 7)));
        assert_eq!(profile(&s).unwrap(), profile(&n).unwrap());
    }
}

#[test]
fn covering_derivation_types() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let f = Field::binary(5);
    for fam in FAMILIES {
        for b in Branch::ALL {
            let s = sample_spec(fam, b, &f, &mut rng).unwrap();
            let d = covering_derivation(&s).unwrap();
            assert!(d.closure_holds());
            assert_eq!(d.c, u128::from(b == Branch::A1x16));
            let l = fixed_locus_subgroup_check(&d).unwrap();
            assert!(l.additive && l.order == 16);
            let v = classify_derivations(&d).unwrap();
            assert!(v.all_pass(), "{v:?}");
            let back = SurfaceSpec::from_json(v.hamiltonian.as_ref().unwrap()).unwrap();
            // the cover carries the Frobenius twist of the coefficients
            let twisted: Vec<_> = s.coeffs().iter().map(|(&k, &c)| (k, f.sqrt(c))).collect();
            assert_eq!(back, SurfaceSpec::new(fam, &f, &twisted).unwrap());
        }
    }
}

#[test]
fn h07_breaks_the_subgroup_condition() {
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    let f = Field::binary(4);
    for b in Branch::ALL {
        let mut s = sample_spec(Family::Class2, b, &f, &mut rng).unwrap();
        let d = classify_derivations(&hamiltonian_derivation(&s)).unwrap();
        assert!(d.all_pass());
        s.set((0, 7), f.random_nonzero(&mut rng)).unwrap();
        let d = hamiltonian_derivation(&s);
        let v = classify_derivations(&d).unwrap();
        assert!(v.closure && v.divisor && v.coprime, "{v:?}");
        assert_eq!(v.subgroup, Some(false));
        let l = fixed_locus_subgroup_check(&d).unwrap();
        assert!(!l.additive);
        assert!(l.witness_support().unwrap().contains(&12));
    }
}

#[test]
fn f22_fails_the_divisor_condition() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let f = Field::binary(4);
    let s = sample_spec(Family::Class4, Branch::A1x16, &f, &mut rng).unwrap();
    let mut d = covering_derivation(&s).unwrap();
    d.f.add_term(vec![2, 2], f.random_nonzero(&mut rng));
    let v = classify_derivations(&d).unwrap();
    assert!(!v.divisor);
    assert!(v.hamiltonian.is_none());
}

#[test]
fn non_hamiltonian_candidates() {
    let f = Field::binary(2);
    let v = ["x", "y"];
    // D(x) = x^2 violates f_x = c
    let d = DerivationSpec {
        family: Family::Class4,
        f: FqPoly::from_terms(&f, &v, [(vec![2, 1], 1)]),
        g: FqPoly::from_terms(&f, &v, [(vec![0, 4], 1)]),
        c: 0,
    };
    let r = classify_derivations(&d).unwrap();
    assert!(!r.closure && !r.all_pass());
    // common factor y
    let d = DerivationSpec {
        family: Family::Class4,
        f: FqPoly::from_terms(&f, &v, [(vec![0, 2], 1)]),
        g: FqPoly::from_terms(&f, &v, [(vec![0, 4], 1), (vec![0, 2], 1)]),
        c: 0,
    };
    assert!(!classify_derivations(&d).unwrap().coprime);
    let zero = FqPoly::zero(&f, &v);
    let d = DerivationSpec { family: Family::Class4, f: zero.clone(), g: zero, c: 0 };
    assert!(matches!(classify_derivations(&d), Err(SurfaceError::MalformedCandidate(_))));
}

#[test]
fn random_fields_and_seeds_agree() {
    // explicit enumeration against the profile on larger fields
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for _ in 0..12 {
        let e = rng.gen_range(5..=8);
        let fam = FAMILIES[rng.gen_range(0..2)];
        let b = Branch::ALL[rng.gen_range(0..6)];
        let s = sample_spec(fam, b, &Field::binary(e), &mut rng).unwrap();
        let r = classify_full(&s, true).unwrap();
        assert_eq!(r.points.unwrap().len(), b.profile().0);
    }
}

