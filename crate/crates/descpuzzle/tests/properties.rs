use proptest::prelude::*;

use descpuzzle::almostsep::{self, AsTheory};
use descpuzzle::permcore::{almostsep_choices, almostsep_encode, sepdesc_choices, sepdesc_encode};
use descpuzzle::puzzlegrid::Exec;
use descpuzzle::schubring::{basis_product, expand_schubert, PolyKind};
use descpuzzle::sepdesc::{self, SepTheory};
use descpuzzle::{LaurentPoly, Permutation, Theory};

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|w| Permutation::new(w).unwrap())
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i64..=3, 1usize..=3, 0u32..=2, 1usize..=2, 0u32..=1), 0..5).prop_map(|ts| {
        ts.into_iter().fold(LaurentPoly::zero(), |acc, (c, i, e, j, f)| {
            let t = &(&LaurentPoly::constant(c) * &LaurentPoly::x(i).pow(e)) * &LaurentPoly::y(j).pow(f);
            &acc + &t
        })
    })
}

fn pairs(n: usize, keep: impl Fn(&Permutation, &Permutation) -> bool) -> Vec<(Permutation, Permutation)> {
    let all = Permutation::all(n);
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            if keep(a, b) {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn perm_text_round_trip(p in perm(6)) {
        let back: Permutation = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn inverse_and_length(p in perm(6)) {
        prop_assert!(p.compose(&p.inverse()).is_identity());
        prop_assert_eq!(p.length(), p.inverse().length());
        prop_assert_eq!(p.code().iter().sum::<usize>(), p.length());
        prop_assert_eq!(Permutation::from_code(&p.code()), p);
    }

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn schubert_expansion_recombines(a in perm(4), b in perm(4)) {
        let f = basis_product(&a, &b, Theory::H);
        let e = expand_schubert(&f, false).unwrap();
        prop_assert_eq!(e.recombine(PolyKind::of(Theory::H)), f);
    }

    #[test]
    fn sepdesc_cut_does_not_matter(
        (a, b) in prop::sample::select(pairs(5, |a, b| sepdesc_choices(a, b, 5).len() > 1)),
        t in prop::sample::select(Theory::ALL.to_vec()),
    ) {
        let cuts = sepdesc_choices(&a, &b, 5);
        let first = sepdesc::sepdesc_puzzles(&a, &b, t, 5, Some(cuts[0]), Exec::Sequential).unwrap().expansion;
        for &c in &cuts[1..] {
            let other = sepdesc::sepdesc_puzzles(&a, &b, t, 5, Some(c), Exec::Sequential).unwrap().expansion;
            prop_assert_eq!(&other.coeffs, &first.coeffs);
        }
    }

    #[test]
    fn almostsep_cuts_do_not_matter((a, b) in prop::sample::select(pairs(5, |a, b| almostsep_choices(a, b, 5).len() > 1))) {
        let cuts = almostsep_choices(&a, &b, 5);
        let first = almostsep::almostsep_puzzles(&a, &b, AsTheory::K, 5, Some(cuts[0]), Exec::Sequential).unwrap().expansion;
        for &c in &cuts[1..] {
            let other = almostsep::almostsep_puzzles(&a, &b, AsTheory::K, 5, Some(c), Exec::Sequential).unwrap().expansion;
            prop_assert_eq!(&other.coeffs, &first.coeffs);
        }
    }

    #[test]
    fn parallel_matches_sequential((a, b) in prop::sample::select(pairs(6, |a, b| !sepdesc_choices(a, b, 6).is_empty()))) {
        let pair = sepdesc_encode(&a, &b, 6, None).unwrap();
        let seq = sepdesc::constants_for_pair(&pair, SepTheory::KT, Exec::Sequential).unwrap();
        let par = sepdesc::constants_for_pair(&pair, SepTheory::KT, Exec::Parallel).unwrap();
        prop_assert_eq!(seq.expansion, par.expansion);
        prop_assert_eq!(seq.counts, par.counts);
    }

    #[test]
    fn k_dual_matches_k((a, b) in prop::sample::select(pairs(5, |a, b| !almostsep_choices(a, b, 5).is_empty()))) {
        let pair = almostsep_encode(&a, &b, 5, None).unwrap();
        let k = almostsep::constants_for_pair(&pair, AsTheory::K, Exec::Sequential).unwrap();
        let dual = almostsep::constants_for_pair(&pair, AsTheory::KDual, Exec::Sequential).unwrap();
        prop_assert_eq!(k.expansion, dual.expansion);
    }
}

#[test]
fn h_constants_are_positive_integers() {
    for a in Permutation::all(4) {
        for b in Permutation::all(4) {
            if sepdesc_choices(&a, &b, 4).is_empty() {
                continue;
            }
            let e = sepdesc::sepdesc_constants(&a, &b, Theory::H, 4).unwrap();
            for c in e.coeffs.values() {
                assert_positive(c);
            }
        }
    }
}

fn assert_positive(c: &LaurentPoly) {
    assert_eq!(c.len(), 1);
    assert!(c.constant_term() > 0.into(), "{c}");
}
