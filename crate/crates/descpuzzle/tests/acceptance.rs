//! Acceptance checks, one line per criterion. Runs without the libtest harness
//! so the summary lines always show up in the test log.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use descpuzzle::almostsep::{self, AsLabels, AsTheory, Horiz};
use descpuzzle::motivic::{euler_characteristic, verify_puzzle_identity, Rule};
use descpuzzle::permcore::{almostsep_choices, almostsep_encode, sepdesc_choices, sepdesc_encode, Alphabet};
use descpuzzle::puzzlegrid::{Catalog, Exec};
use descpuzzle::schubring::{basis_product, direct_sum, oracle_constants, psi, schubert, PolyKind};
use descpuzzle::sepdesc::{self, SepLabels, SepTheory};
use descpuzzle::{EncodedPair, LabelString, LaurentPoly, Permutation, SchubertExpansion, Symbol, Theory, Var};

fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn expansion(pairs: &[(&str, LaurentPoly)]) -> BTreeMap<Permutation, LaurentPoly> {
    pairs.iter().map(|(s, c)| (p(s), c.clone())).collect()
}

fn y_ratio() -> LaurentPoly {
    &LaurentPoly::y(2) * &LaurentPoly::monomial(Var::Y(1), -1)
}

fn sep_pairs(n: usize) -> Vec<(Permutation, Permutation)> {
    let all = Permutation::all(n);
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            if !sepdesc_choices(a, b, n).is_empty() {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

fn almost_pairs(n: usize) -> Vec<(Permutation, Permutation)> {
    let all = Permutation::all(n);
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            if !almostsep_choices(a, b, n).is_empty() {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

fn weakly_increasing(n: usize, d: u8) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &out {
            for c in *w.last().unwrap_or(&0)..=d {
                let mut v = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn all_strings(n: usize, alphabet: &Alphabet) -> Vec<Vec<Symbol>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet.symbols().iter().map(move |&s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

fn c1() -> Result<(), String> {
    let c = sepdesc::sepdesc_puzzles(&p("1362547"), &p("7321456"), Theory::H, 7, None, Exec::Auto).map_err(|e| e.to_string())?;
    let one = LaurentPoly::one();
    let want = expansion(&[("7461325", one.clone()), ("7561234", one.clone()), ("7631425", one.clone()), ("7641235", one)]);
    if c.expansion.coeffs != want || c.total != 4 {
        return Err(format!("n=7: {:?}, {} puzzles", c.expansion.coeffs, c.total));
    }
    let pair = EncodedPair {
        lambda: LabelString::parse("_3_43_4444", Alphabet::blank_then(3, 4)).unwrap(),
        mu: LabelString::parse("2_1___0___", Alphabet::then_blank(2)).unwrap(),
        k: 2,
        d: 4,
        m: 0,
        n: 10,
    };
    let big = sepdesc::constants_for_pair(&pair, SepTheory::H, Exec::Auto).map_err(|e| e.to_string())?;
    if big.total != 24 {
        return Err(format!("n=10: {} puzzles", big.total));
    }
    Ok(())
}

fn c2() -> Result<(), String> {
    let (pi, rho) = (p("2431"), p("2134"));
    let r = y_ratio();
    let want = expansion(&[("2431", &LaurentPoly::one() - &r), ("3421", r.clone()), ("4231", r.clone()), ("4321", r.scale(&(-1).into()))]);
    let mut ks = Vec::new();
    for cut in sepdesc_choices(&pi, &rho, 4) {
        let e = sepdesc_encode(&pi, &rho, 4, Some(cut)).unwrap();
        let c = sepdesc::sepdesc_puzzles(&pi, &rho, Theory::KT, 4, Some(cut), Exec::Auto).map_err(|e| e.to_string())?;
        if c.expansion.coeffs != want {
            return Err(format!("k={}: {:?}", e.k, c.expansion.coeffs));
        }
        ks.push(e.k);
    }
    if ks != [0, 1] {
        return Err(format!("encodings found for k in {ks:?}"));
    }
    let e = SchubertExpansion { coeffs: want, ..Default::default() };
    if e.recombine(PolyKind::of(Theory::KT)) != basis_product(&pi, &rho, Theory::KT) {
        return Err("double Grothendieck product does not match".into());
    }
    Ok(())
}

fn c3() -> Result<(), String> {
    let c = almostsep::almostsep_puzzles(&p("2543167"), &p("4132567"), AsTheory::H, 7, None, Exec::Auto).map_err(|e| e.to_string())?;
    let want = ["6352147", "5632147", "5462137", "6432157", "6523147", "7342156", "7253146"];
    let want = expansion(&want.map(|w| (w, LaurentPoly::one())));
    if c.expansion.coeffs != want || c.total != 7 {
        return Err(format!("{:?}, {} puzzles", c.expansion.coeffs, c.total));
    }
    Ok(())
}

fn c4() -> Result<(), String> {
    let sep = euler_characteristic(
        &LabelString::parse("_2_2", Alphabet::blank_then(2, 2)).unwrap(),
        &LabelString::parse("10__", Alphabet::then_blank(1)).unwrap(),
        "2120",
        Rule::SepDesc,
    )
    .map_err(|e| e.to_string())?;
    if (sep.chi, sep.puzzles) != (3, 3) {
        return Err(format!("sep-desc: chi {} with {} puzzles", sep.chi, sep.puzzles));
    }
    let almost = euler_characteristic(
        &LabelString::parse("10_2_", Alphabet::then_blank(2)).unwrap(),
        &LabelString::parse("_423_", Alphabet::blank_then(2, 4)).unwrap(),
        "^3 ^4 v1 odd v0",
        Rule::AlmostSep,
    )
    .map_err(|e| e.to_string())?;
    if (almost.chi, almost.puzzles) != (-3, 3) {
        return Err(format!("almost-sep: chi {} with {} puzzles", almost.chi, almost.puzzles));
    }
    Ok(())
}

fn check_sep(a: &Permutation, b: &Permutation, n: usize, theory: Theory) -> Result<(), String> {
    let mine = sepdesc::sepdesc_constants(a, b, theory, n).map_err(|e| e.to_string())?;
    if mine.coeffs != oracle_constants(a, b, theory, n).coeffs {
        return Err(format!("sep-desc {theory}: {a} * {b} in S_{n}"));
    }
    Ok(())
}

fn check_almost(a: &Permutation, b: &Permutation, n: usize, theory: Theory) -> Result<(), String> {
    let mine = almostsep::almostsep_constants(a, b, theory, n).map_err(|e| e.to_string())?;
    if mine.coeffs != oracle_constants(a, b, theory, n).coeffs {
        return Err(format!("almost-sep {theory}: {a} * {b} in S_{n}"));
    }
    Ok(())
}

fn c5() -> Result<(), String> {
    for n in [4, 5] {
        for (a, b) in sep_pairs(n) {
            for t in Theory::ALL {
                check_sep(&a, &b, n, t)?;
            }
        }
        for (a, b) in almost_pairs(n) {
            for t in [Theory::H, Theory::K] {
                check_almost(&a, &b, n, t)?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let all = Permutation::all(6);
    let mut drawn = 0;
    while drawn < 200 {
        let a = all.choose(&mut rng).unwrap();
        let b = all.choose(&mut rng).unwrap();
        let sep = !sepdesc_choices(a, b, 6).is_empty();
        let almost = !almostsep_choices(a, b, 6).is_empty();
        if !sep && !almost {
            continue;
        }
        drawn += 1;
        if sep {
            for t in Theory::ALL {
                check_sep(a, b, 6, t)?;
            }
        }
        if almost {
            for t in [Theory::H, Theory::K] {
                check_almost(a, b, 6, t)?;
            }
        }
    }
    Ok(())
}

fn c6() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let six = Permutation::all(6);
    let mut corpus: Vec<(Permutation, Permutation, usize)> = Vec::new();
    for n in [4, 5] {
        corpus.extend(sep_pairs(n).into_iter().chain(almost_pairs(n)).map(|(a, b)| (a, b, n)));
    }
    while corpus.iter().filter(|c| c.2 == 6).count() < 200 {
        let (a, b) = (six.choose(&mut rng).unwrap().clone(), six.choose(&mut rng).unwrap().clone());
        if !sepdesc_choices(&a, &b, 6).is_empty() || !almostsep_choices(&a, &b, 6).is_empty() {
            corpus.push((a, b, 6));
        }
    }
    for (a, b, n) in &corpus {
        let base = a.length() + b.length();
        if !sepdesc_choices(a, b, *n).is_empty() {
            let pair = sepdesc_encode(a, b, *n, None).unwrap();
            {
                let t = SepTheory::K;
                let (_, ps) = sepdesc::puzzles_for_pair(&pair, t, None).map_err(|e| e.to_string())?;
                for q in &ps {
                    let s = sepdesc::bottom_perm(&q.s);
                    if q.k_pieces() + base != s.length() {
                        return Err(format!("{t:?} {a} * {b}: {} K-triangles for {s}", q.k_pieces()));
                    }
                }
            }
        }
        if !almostsep_choices(a, b, *n).is_empty() {
            let pair = almostsep_encode(a, b, *n, None).unwrap();
            let lab = AsLabels::new(pair.k, pair.d);
            let (_, ps) = almostsep::puzzles_for_pair(&pair, AsTheory::K, None).map_err(|e| e.to_string())?;
            for q in &ps {
                let s = almostsep::bottom_perm(lab, &q.s);
                if q.charge as usize + base != s.length() {
                    return Err(format!("{a} * {b}: charge {} for {s}", q.charge));
                }
            }
        }
    }
    Ok(())
}

fn c7() -> Result<(), String> {
    for n in 1..=6 {
        for d in 1..=3u8 {
            for w in weakly_increasing(n, d) {
                for k in 0..d {
                    let keep = |f: &dyn Fn(u8) -> bool| w.iter().map(|&c| if f(c) { Symbol::Digit(c) } else { Symbol::Blank }).collect::<Vec<_>>();
                    let pair = EncodedPair {
                        lambda: LabelString::new(Alphabet::blank_then(k + 1, d), keep(&|c| c > k)).unwrap(),
                        mu: LabelString::new(Alphabet::then_blank(k), keep(&|c| c <= k)).unwrap(),
                        k,
                        d,
                        m: 0,
                        n,
                    };
                    let lab = SepLabels::new(k, d);
                    for t in [SepTheory::H, SepTheory::K] {
                        let (_, ps) = sepdesc::puzzles_for_pair(&pair, t, None).map_err(|e| e.to_string())?;
                        let bottom: Vec<u8> = ps.first().map(|q| digits(&sepdesc::bottom_string(lab, &q.s))).unwrap_or_default();
                        if ps.len() != 1 || !ps[0].fugacity.is_one() || bottom != w {
                            return Err(format!("sep-desc {t:?} k={k} omega={w:?}: {} puzzles", ps.len()));
                        }
                    }
                }
                for k in 0..=d {
                    let keep = |f: &dyn Fn(u8) -> bool| w.iter().map(|&c| if f(c) { Symbol::Digit(c) } else { Symbol::Blank }).collect::<Vec<_>>();
                    let lambda = LabelString::new(Alphabet::then_blank(k), keep(&|c| c <= k)).unwrap();
                    let m = lambda.count(Symbol::Digit(k));
                    let pair = EncodedPair { lambda, mu: LabelString::new(Alphabet::blank_then(k, d), keep(&|c| c >= k)).unwrap(), k, d, m, n };
                    let lab = AsLabels::new(k, d);
                    let want: Vec<Horiz> = w
                        .iter()
                        .map(|&c| match c.cmp(&k) {
                            std::cmp::Ordering::Less => Horiz::Down(c),
                            std::cmp::Ordering::Equal => Horiz::Odd,
                            std::cmp::Ordering::Greater => Horiz::Up(c),
                        })
                        .collect();
                    for t in [AsTheory::H, AsTheory::K] {
                        let (_, ps) = almostsep::puzzles_for_pair(&pair, t, None).map_err(|e| e.to_string())?;
                        let ok = ps.len() == 1 && ps[0].fugacity.is_one() && ps[0].s.iter().map(|&x| lab.horiz_of(x)).collect::<Vec<_>>() == want;
                        if !ok {
                            return Err(format!("almost-sep {t:?} k={k} omega={w:?}: {} puzzles", ps.len()));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn digits(s: &LabelString) -> Vec<u8> {
    s.letters
        .iter()
        .map(|x| match x {
            Symbol::Digit(i) => *i,
            Symbol::Blank => u8::MAX,
        })
        .collect()
}

fn c8() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0;
    for n in 1..=3 {
        let perms = Permutation::all(n);
        for d in 1..=2u8 {
            for k in 0..d {
                let (la, ma) = (Alphabet::blank_then(k + 1, d), Alphabet::then_blank(k));
                for l in all_strings(n, &la) {
                    for m in all_strings(n, &ma) {
                        let blanks = l.iter().chain(&m).filter(|s| **s == Symbol::Blank).count();
                        if blanks != n {
                            continue;
                        }
                        let lambda = LabelString::new(la.clone(), l.clone()).unwrap();
                        let mu = LabelString::new(ma.clone(), m).unwrap();
                        for s in &perms {
                            let r = verify_puzzle_identity(&lambda, &mu, s, 3, &mut rng).map_err(|e| e.to_string())?;
                            if !r.holds {
                                return Err(format!("{lambda}, {mu}, {s}"));
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    if checked == 0 {
        return Err("nothing checked".into());
    }
    Ok(())
}

/// Weights at q = 0, keyed by (NW, NE, SW/S, SE).
fn at_q0(cat: &Catalog<LaurentPoly>) -> BTreeMap<(u16, u16, u16, u16, bool), LaurentPoly> {
    let q0 = |w: &LaurentPoly| w.set_vars(|v| (v == Var::Q).then_some(0));
    let mut out = BTreeMap::new();
    for (nw, ne, f) in cat.rhombus_entries() {
        let w = q0(&f.weight.at(2, 1));
        if !w.is_zero() {
            out.insert((nw, ne, f.sw, f.se, false), w);
        }
    }
    for (nw, ne, f) in cat.bottom_entries() {
        let w = q0(&f.weight.at(2, 1));
        if !w.is_zero() {
            out.insert((nw, ne, f.h, 0, true), w);
        }
    }
    out
}

fn c9() -> Result<(), String> {
    for d in 1..=4u8 {
        for k in 0..d {
            let g = at_q0(&sepdesc::sepdesc_catalog(SepTheory::GenericNoneq, k, d));
            if g != at_q0(&sepdesc::sepdesc_catalog(SepTheory::K, k, d)) {
                return Err(format!("sep-desc catalog k={k} d={d}"));
            }
        }
        for k in 0..=d {
            let g = at_q0(&almostsep::almostsep_catalog(AsTheory::GenericNoneq, k, d));
            if g != at_q0(&almostsep::almostsep_catalog(AsTheory::K, k, d)) {
                return Err(format!("almost-sep catalog k={k} d={d}"));
            }
        }
    }
    let n = 4;
    for (a, b) in sep_pairs(n) {
        // the factor with the low descents goes first in the direct sum
        let k = *sepdesc_choices(&a, &b, n).first().unwrap();
        let mut f = (*schubert(&direct_sum(&b, &a, n), false)).clone();
        for _ in 0..n {
            f = psi(&f, k + 1);
        }
        if f != basis_product(&a, &b, Theory::H) {
            return Err(format!("Psi identity for {a}, {b}"));
        }
    }
    Ok(())
}

fn c10() -> Result<(), String> {
    let n = 4;
    let mut grass = 0;
    let mut two = 0;
    for (a, b) in sep_pairs(n) {
        for cut in sepdesc_choices(&a, &b, n) {
            let pair = sepdesc_encode(&a, &b, n, Some(cut)).unwrap();
            if (pair.k, pair.d) != (0, 1) {
                continue;
            }
            for t in [Theory::H, Theory::K, Theory::HT] {
                let native = sepdesc::constants_for_pair(&pair, t.into(), Exec::Sequential).map_err(|e| e.to_string())?;
                let dict = sepdesc::grassmannian::constants(&pair, t).map_err(|e| e.to_string())?;
                if native.expansion.coeffs != dict.coeffs {
                    return Err(format!("Grassmannian {t}: {a} * {b}"));
                }
            }
            grass += 1;
        }
    }
    for (a, b) in almost_pairs(n) {
        for cuts in almostsep_choices(&a, &b, n) {
            let pair = almostsep_encode(&a, &b, n, Some(cuts)).unwrap();
            if (pair.k, pair.d) != (1, 2) {
                continue;
            }
            let native = almostsep::constants_for_pair(&pair, AsTheory::H, Exec::Sequential).map_err(|e| e.to_string())?;
            let dict = almostsep::twostep::constants(&pair).map_err(|e| e.to_string())?;
            if native.expansion.coeffs != dict.coeffs {
                return Err(format!("2-step: {a} * {b}"));
            }
            two += 1;
        }
    }
    if grass == 0 || two == 0 {
        return Err(format!("only {grass} Grassmannian and {two} 2-step encodings"));
    }
    Ok(())
}

type Check = fn() -> Result<(), String>;

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("sep-desc example, 4 puzzles at n=7 and 24 at n=10", c1),
        ("KT example for both encodings", c2),
        ("almost-sep example with 7 puzzles", c3),
        ("Euler characteristics", c4),
        ("puzzles agree with the oracle on S_4, S_5 and random S_6 pairs", c5),
        ("K-triangle counts and inversion charges", c6),
        ("unique puzzle for weakly increasing bottoms", c7),
        ("generic puzzle identity at n <= 3", c8),
        ("q = 0 specialization and the Psi identity", c9),
        ("Grassmannian and 2-step dictionaries", c10),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let t = Instant::now();
        match f() {
            Ok(()) => println!("criterion {:>2}: pass  {name} ({:.1}s)", i + 1, t.elapsed().as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
