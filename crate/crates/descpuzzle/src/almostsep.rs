//! Puzzles for pairs with almost-separated descents.
//!
//! Diagonal labels are subsets of {0..d}, stored as bit masks. The blank is
//! implied by parity: on "/" edges (NW, SE) a displayed set A stands for
//! A ∪ {_} when #A is odd, on "\" edges (NE, SW) a displayed set B stands for
//! B ∪ {_} when #B is even. A triangle (A, h, B) is (NW, h, NE) when it points
//! up and (SE, h, SW) when it points down.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::permcore::{almostsep_encode, standardize_ranks, EncodedPair, Permutation, Symbol};
use crate::puzzlegrid::{enumerate_puzzles, Catalog, Exec, Lbl, Puzzle, Tri};
use crate::schubring::{LaurentPoly, Monomial, SchubertExpansion, Var};
use crate::{Error, Theory};

pub type Set = u16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Horiz {
    Down(u8),
    Up(u8),
    Even,
    Odd,
}

impl fmt::Display for Horiz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Horiz::Down(i) => write!(f, "v{i}"),
            Horiz::Up(j) => write!(f, "^{j}"),
            Horiz::Even => write!(f, "even"),
            Horiz::Odd => write!(f, "odd"),
        }
    }
}

impl std::str::FromStr for Horiz {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::BadString(format!("not a horizontal label: {s}"));
        match s {
            "even" => Ok(Horiz::Even),
            "odd" => Ok(Horiz::Odd),
            _ => {
                let (head, tail) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
                let v: u8 = tail.parse().map_err(|_| bad())?;
                match head {
                    "v" | "↘" => Ok(Horiz::Down(v)),
                    "^" | "↗" => Ok(Horiz::Up(v)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl Horiz {
    /// The label after reflecting left-right with i ↦ d − i.
    pub fn mirror(self, d: u8) -> Horiz {
        match self {
            Horiz::Down(i) => Horiz::Up(d - i),
            Horiz::Up(j) => Horiz::Down(d - j),
            h => h,
        }
    }
}

fn members(x: Set) -> impl Iterator<Item = u8> {
    (0..16u8).filter(move |&i| x >> i & 1 == 1)
}

fn size(x: Set) -> u32 {
    x.count_ones()
}

pub fn set_name(x: Set) -> String {
    if x == 0 {
        return "∅".into();
    }
    let v: Vec<String> = members(x).map(|i| i.to_string()).collect();
    let wide = members(x).any(|i| i > 9);
    v.join(if wide { "," } else { "" })
}

pub fn parse_set(s: &str) -> Result<Set, Error> {
    if s == "∅" || s.is_empty() {
        return Ok(0);
    }
    let digits: Vec<&str> = if s.contains(',') { s.split(',').collect() } else { s.split("").filter(|t| !t.is_empty()).collect() };
    let mut x = 0;
    for t in digits {
        let i: u8 = t.parse().map_err(|_| Error::BadString(s.into()))?;
        x |= 1 << i;
    }
    Ok(x)
}

/// Label bookkeeping for a given (k, d).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AsLabels {
    pub k: u8,
    pub d: u8,
}

impl AsLabels {
    pub fn new(k: u8, d: u8) -> Self {
        assert!(k <= d && d < 15, "need k ≤ d < 15");
        AsLabels { k, d }
    }

    pub fn n_diag(&self) -> usize {
        1 << (self.d + 1)
    }

    pub fn horiz_id(&self, h: Horiz) -> Lbl {
        let d = self.d as Lbl;
        match h {
            Horiz::Down(i) => i as Lbl,
            Horiz::Up(j) => d + 1 + j as Lbl,
            Horiz::Even => 2 * d + 2,
            Horiz::Odd => 2 * d + 3,
        }
    }

    pub fn horiz_of(&self, l: Lbl) -> Horiz {
        let d = self.d as Lbl;
        if l <= d {
            Horiz::Down(l as u8)
        } else if l <= 2 * d + 1 {
            Horiz::Up((l - d - 1) as u8)
        } else if l == 2 * d + 2 {
            Horiz::Even
        } else {
            Horiz::Odd
        }
    }

    pub fn horiz_names(&self) -> Vec<String> {
        (0..2 * self.d as Lbl + 4).map(|l| self.horiz_of(l).to_string()).collect()
    }

    pub fn diag_names(&self) -> Vec<String> {
        (0..self.n_diag() as Set).map(set_name).collect()
    }

    /// Labels allowed on the bottom edge, in their order.
    pub fn bottom_ok(&self, h: Horiz) -> bool {
        match h {
            Horiz::Down(i) => i < self.k,
            Horiz::Up(j) => j > self.k,
            Horiz::Odd => true,
            Horiz::Even => false,
        }
    }

    pub fn bottom_rank(&self, h: Horiz) -> usize {
        match h {
            Horiz::Down(i) => i as usize,
            Horiz::Up(j) => j as usize,
            Horiz::Odd | Horiz::Even => self.k as usize,
        }
    }

    /// NW boundary letter to its displayed set.
    pub fn nw_set(&self, s: Symbol) -> Set {
        match s {
            Symbol::Digit(i) => 1 << i,
            Symbol::Blank => 0,
        }
    }

    pub fn ne_set(&self, s: Symbol) -> Set {
        self.nw_set(s)
    }

    fn mirror_set(&self, x: Set) -> Set {
        members(x).fold(0, |acc, i| acc | 1 << (self.d - i))
    }
}

/// The horizontal label forced by the diagonal sides and the common set X.
pub fn piece(a: Set, b: Set) -> Option<(Horiz, Set)> {
    // true sets, with bit 15 for the blank
    const BLANK: u32 = 1 << 15;
    let r = a as u32 | if size(a) % 2 == 1 { BLANK } else { 0 };
    let s = b as u32 | if size(b).is_multiple_of(2) { BLANK } else { 0 };
    if r & s == r && (s & !r).count_ones() == 1 {
        let j = s & !r;
        return Some(if j == BLANK { (Horiz::Even, a) } else { (Horiz::Up(j.trailing_zeros() as u8), a) });
    }
    if r & s == s && (r & !s).count_ones() == 1 {
        let j = r & !s;
        return Some(if j == BLANK { (Horiz::Odd, a) } else { (Horiz::Down(j.trailing_zeros() as u8), b) });
    }
    None
}

/// Inversion charge of a triangle with horizontal label h and common set X.
pub fn inversion_charge(h: Horiz, x: Set) -> u32 {
    match h {
        Horiz::Down(i) => members(x).filter(|&a| a < i).count() as u32,
        Horiz::Up(j) => members(x).filter(|&a| a > j).count() as u32,
        Horiz::Even | Horiz::Odd => size(x) / 2,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AsTheory {
    H,
    K,
    /// mirror images of the K pieces for k' = d − k
    KDual,
    GenericNoneq,
    GenericNoneqUntwisted,
}

impl AsTheory {
    pub fn of(t: Theory) -> Result<Self, Error> {
        match t {
            Theory::H => Ok(AsTheory::H),
            Theory::K => Ok(AsTheory::K),
            _ => Err(Error::UnsupportedTheory(format!("{t} for almost-separated descents"))),
        }
    }
}

fn h_ok(h: Horiz, x: Set) -> bool {
    match h {
        Horiz::Down(i) => members(x).all(|a| i < a),
        Horiz::Up(j) => members(x).all(|a| a < j),
        Horiz::Even => x == 0,
        Horiz::Odd => size(x) == 1,
    }
}

fn k_ok(h: Horiz, x: Set, k: u8, up: bool) -> bool {
    match (h, up) {
        (Horiz::Down(i), true) => members(x).filter(|&a| a >= k).all(|a| i < a),
        (Horiz::Down(i), false) => members(x).filter(|&a| a < k).all(|a| i < a),
        (Horiz::Up(j), true) => j >= k || members(x).all(|a| a < j),
        (Horiz::Up(j), false) => j < k || members(x).all(|a| a < j),
        (Horiz::Even | Horiz::Odd, true) => true,
        (Horiz::Even, false) => x == 0,
        (Horiz::Odd, false) => size(x) == 1,
    }
}

fn neg_q_pow(e: i32) -> LaurentPoly {
    let c = if e.rem_euclid(2) == 0 { 1 } else { -1 };
    LaurentPoly::term(BigInt::from(c), Monomial::var(Var::Q, e))
}

fn sign(c: u32) -> LaurentPoly {
    LaurentPoly::constant(if c.is_multiple_of(2) { 1 } else { -1 })
}

fn twisted(h: Horiz, x: Set, k: u8, up: bool) -> LaurentPoly {
    let inv = inversion_charge(h, x);
    let cnt = |f: &dyn Fn(u8) -> bool| members(x).filter(|&a| f(a)).count() as i32;
    let e = match (h, up) {
        (Horiz::Down(i), true) => 2 * cnt(&|a| k <= a && a < i),
        (Horiz::Up(j), true) => if j < k { 2 * cnt(&|a| a > j) } else { 0 },
        (Horiz::Even | Horiz::Odd, true) => 0,
        (Horiz::Down(i), false) => 2 * cnt(&|a| a < i.min(k)),
        (Horiz::Up(j), false) => if j >= k { 2 * cnt(&|a| a > j) } else { 0 },
        (Horiz::Even, false) => size(x) as i32,
        (Horiz::Odd, false) => size(x) as i32 - 1,
    };
    &sign(inv) * &neg_q_pow(e)
}

fn untwisted(h: Horiz, x: Set, k: u8, d: u8, up: bool) -> LaurentPoly {
    let w = |a: u8| if a < k { a as i32 + 1 } else { k as i32 + 1 + (d - a) as i32 };
    let r: i32 = members(x).map(|a| d as i32 + 1 - w(a)).sum();
    let above = |i: u8| members(x).filter(|&a| w(a) > w(i)).count() as i32;
    let e = match h {
        Horiz::Down(i) | Horiz::Up(i) => r + above(i),
        Horiz::Even | Horiz::Odd => r,
    };
    neg_q_pow(if up { e } else { -e })
}

/// Triangle pieces (up, down).
pub fn triangle_pieces(theory: AsTheory, lab: AsLabels) -> (Vec<Tri<LaurentPoly>>, Vec<Tri<LaurentPoly>>) {
    if theory == AsTheory::KDual {
        let dual = AsLabels::new(lab.d - lab.k, lab.d);
        let (ups, downs) = triangle_pieces(AsTheory::K, dual);
        let mirror = |t: &Tri<LaurentPoly>| Tri {
            a: lab.mirror_set(t.b),
            h: lab.horiz_id(dual.horiz_of(t.h).mirror(lab.d)),
            b: lab.mirror_set(t.a),
            weight: t.weight.clone(),
            charge: t.charge,
            k: t.k,
        };
        return (ups.iter().map(mirror).collect(), downs.iter().map(mirror).collect());
    }
    let n = lab.n_diag() as Set;
    let mut ups = Vec::new();
    let mut downs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let Some((h, x)) = piece(a, b) else { continue };
            let inv = inversion_charge(h, x);
            let hid = lab.horiz_id(h);
            for up in [true, false] {
                let t = match theory {
                    AsTheory::H => h_ok(h, x).then(|| (LaurentPoly::one(), 0, false)),
                    AsTheory::K => k_ok(h, x, lab.k, up).then(|| (sign(inv), inv, !h_ok(h, x))),
                    AsTheory::GenericNoneq => Some((twisted(h, x, lab.k, up), inv, !k_ok(h, x, lab.k, up))),
                    AsTheory::GenericNoneqUntwisted => Some((untwisted(h, x, lab.k, lab.d, up), inv, false)),
                    AsTheory::KDual => unreachable!(),
                };
                if let Some((weight, charge, k)) = t {
                    let tri = Tri { a, h: hid, b, weight, charge, k };
                    if up {
                        ups.push(tri);
                    } else {
                        downs.push(tri);
                    }
                }
            }
        }
    }
    (ups, downs)
}

pub fn almostsep_catalog(theory: AsTheory, k: u8, d: u8) -> Catalog<LaurentPoly> {
    let lab = AsLabels::new(k, d);
    let mut cat = Catalog::new("almostsep", &format!("{theory:?}"), lab.diag_names(), lab.horiz_names());
    let (ups, downs) = triangle_pieces(theory, lab);
    cat.add_bisected(&ups, &downs);
    cat.add_bottoms(&ups, |h| lab.bottom_ok(lab.horiz_of(h)));
    cat
}

/// Content of the bottom side: λ's letters below k, μ's letters above k,
/// and odds for the rest.
pub fn nu_content(pair: &EncodedPair) -> Vec<Horiz> {
    let k = pair.k;
    let mut v: Vec<Horiz> = pair
        .lambda
        .letters
        .iter()
        .filter_map(|s| match s {
            Symbol::Digit(i) if *i < k => Some(Horiz::Down(*i)),
            _ => None,
        })
        .collect();
    v.extend(pair.mu.letters.iter().filter_map(|s| match s {
        Symbol::Digit(j) if *j > k => Some(Horiz::Up(*j)),
        _ => None,
    }));
    let n = pair.lambda.len();
    while v.len() < n {
        v.push(Horiz::Odd);
    }
    let lab = AsLabels::new(pair.k, pair.d);
    v.sort_by_key(|&h| (lab.bottom_rank(h), h));
    v
}

pub fn boundary(pair: &EncodedPair) -> (AsLabels, Vec<Lbl>, Vec<Lbl>) {
    let lab = AsLabels::new(pair.k, pair.d);
    let l = pair.lambda.letters.iter().map(|&s| lab.nw_set(s)).collect();
    let m = pair.mu.letters.iter().map(|&s| lab.ne_set(s)).collect();
    (lab, l, m)
}

pub fn bottom_perm(lab: AsLabels, nu: &[Lbl]) -> Permutation {
    standardize_ranks(&nu.iter().map(|&l| lab.bottom_rank(lab.horiz_of(l))).collect::<Vec<_>>()).inverse()
}

pub fn bottom_string(lab: AsLabels, nu: &[Lbl]) -> String {
    nu.iter().map(|&l| lab.horiz_of(l).to_string()).collect::<Vec<_>>().join(" ")
}

/// Structure constants with per-σ puzzle counts.
#[derive(Clone, Debug, PartialEq)]
pub struct PuzzleConstants {
    pub expansion: SchubertExpansion,
    pub counts: BTreeMap<Permutation, usize>,
    pub bottoms: BTreeMap<Permutation, String>,
    pub pair: EncodedPair,
    pub total: usize,
}

pub fn constants_for_pair(pair: &EncodedPair, theory: AsTheory, exec: Exec) -> Result<PuzzleConstants, Error> {
    let (lab, l, m) = boundary(pair);
    let cat = almostsep_catalog(theory, lab.k, lab.d);
    let ps = enumerate_puzzles(&cat, &l, &m, None, exec)?;
    Ok(group(&ps, lab, pair.clone()))
}

fn group(ps: &[Puzzle<LaurentPoly>], lab: AsLabels, pair: EncodedPair) -> PuzzleConstants {
    let mut e = SchubertExpansion::default();
    let mut counts = BTreeMap::new();
    let mut bottoms = BTreeMap::new();
    for p in ps {
        let s = bottom_perm(lab, &p.s);
        e.insert_add(s.clone(), p.fugacity.clone());
        *counts.entry(s.clone()).or_insert(0) += 1;
        bottoms.entry(s).or_insert_with(|| bottom_string(lab, &p.s));
    }
    PuzzleConstants { expansion: e, counts, bottoms, pair, total: ps.len() }
}

pub fn almostsep_constants(pi: &Permutation, rho: &Permutation, theory: Theory, n: usize) -> Result<SchubertExpansion, Error> {
    Ok(almostsep_puzzles(pi, rho, AsTheory::of(theory)?, n, None, Exec::Auto)?.expansion)
}

pub fn almostsep_puzzles(
    pi: &Permutation,
    rho: &Permutation,
    theory: AsTheory,
    n: usize,
    cuts: Option<(usize, usize)>,
    exec: Exec,
) -> Result<PuzzleConstants, Error> {
    let pair = almostsep_encode(pi, rho, n, cuts)?;
    constants_for_pair(&pair, theory, exec)
}

pub fn puzzles_for_pair(pair: &EncodedPair, theory: AsTheory, nu: Option<&[Lbl]>) -> Result<(Catalog<LaurentPoly>, Vec<Puzzle<LaurentPoly>>), Error> {
    let (lab, l, m) = boundary(pair);
    let cat = almostsep_catalog(theory, lab.k, lab.d);
    let ps = enumerate_puzzles(&cat, &l, &m, nu, Exec::Auto)?;
    Ok((cat, ps))
}

/// 2-step puzzle labels (k = 1, d = 2).
pub mod twostep {
    use super::*;
    use crate::puzzlegrid::Tri;

    pub const LABELS: [&str; 8] = ["0", "1", "2", "10", "20", "21", "2(10)", "(21)0"];

    const SLASH: [Set; 8] = [0b001, 0b010, 0, 0b011, 0b101, 0b100, 0b110, 0b111];
    const BACKSLASH: [Set; 8] = [0, 0b010, 0b100, 0b001, 0b101, 0b110, 0b111, 0b011];
    const HORIZ: [Horiz; 8] = [
        Horiz::Down(0),
        Horiz::Odd,
        Horiz::Up(2),
        Horiz::Down(1),
        Horiz::Even,
        Horiz::Up(1),
        Horiz::Up(0),
        Horiz::Down(2),
    ];

    #[derive(Clone, Copy, PartialEq, Eq, Debug)]
    pub enum Dir {
        Slash,
        Backslash,
        Horizontal,
    }

    /// The translation of a 2-step label on an edge of the given direction.
    pub fn from_twostep_labels(dir: Dir, label: &str) -> Result<String, Error> {
        let i = LABELS
            .iter()
            .position(|&l| l == label)
            .ok_or_else(|| Error::BadString(format!("not a 2-step label: {label}")))?;
        Ok(match dir {
            Dir::Slash => set_name(SLASH[i]),
            Dir::Backslash => set_name(BACKSLASH[i]),
            Dir::Horizontal => HORIZ[i].to_string(),
        })
    }

    fn index(dir: Dir, almost: &str) -> Option<usize> {
        LABELS.iter().position(|l| from_twostep_labels(dir, l).ok().as_deref() == Some(almost))
    }

    /// Up triangles as (NW, NE, S): rotations of (a, a, a) and of (X, Y, XY).
    pub fn up_triples() -> Vec<[usize; 3]> {
        let pos = |s: &str| LABELS.iter().position(|&l| l == s).unwrap();
        let mut v = Vec::new();
        for a in ["0", "1", "2"] {
            v.push([pos(a); 3]);
        }
        for (x, y, xy) in [("1", "0", "10"), ("2", "0", "20"), ("2", "1", "21"), ("2", "10", "2(10)"), ("21", "0", "(21)0")] {
            let t = [pos(x), pos(y), pos(xy)];
            v.push(t);
            v.push([t[1], t[2], t[0]]);
            v.push([t[2], t[0], t[1]]);
        }
        v
    }

    /// Native 2-step H pieces; down triangles are 180° rotations with the same labels.
    pub fn catalog() -> Catalog<LaurentPoly> {
        let names: Vec<String> = LABELS.iter().map(|s| s.to_string()).collect();
        let mut cat = Catalog::new("twostep", "H", names.clone(), names);
        let ups: Vec<Tri<LaurentPoly>> = up_triples()
            .into_iter()
            .map(|[a, b, h]| Tri { a: a as Lbl, h: h as Lbl, b: b as Lbl, weight: LaurentPoly::one(), charge: 0, k: false })
            .collect();
        cat.add_bisected(&ups, &ups);
        let bottom = ["0", "1", "2"];
        cat.add_bottoms(&ups, |h| bottom.contains(&LABELS[h as usize]));
        cat
    }

    /// H constants of a k = 1, d = 2 pair with 2-step pieces.
    pub fn constants(pair: &EncodedPair) -> Result<SchubertExpansion, Error> {
        if pair.k != 1 || pair.d != 2 {
            return Err(Error::BadAlphabet(format!("k={}, d={}", pair.k, pair.d)));
        }
        let lab = AsLabels::new(1, 2);
        let cat = catalog();
        let conv = |dir, s: Set| -> Result<Lbl, Error> {
            index(dir, &set_name(s)).map(|i| i as Lbl).ok_or_else(|| Error::BadString(set_name(s)))
        };
        let l: Vec<Lbl> = pair.lambda.letters.iter().map(|&s| conv(Dir::Slash, lab.nw_set(s))).collect::<Result<_, _>>()?;
        let m: Vec<Lbl> = pair.mu.letters.iter().map(|&s| conv(Dir::Backslash, lab.ne_set(s))).collect::<Result<_, _>>()?;
        let ps = enumerate_puzzles(&cat, &l, &m, None, Exec::Sequential)?;
        let mut e = SchubertExpansion::default();
        for p in ps {
            let nu: Vec<Lbl> = p.s.iter().map(|&h| lab.horiz_id(HORIZ[h as usize])).collect();
            e.insert_add(bottom_perm(lab, &nu), p.fugacity.clone());
        }
        Ok(e)
    }

    /// The native pieces, translated, as (A, h, B) triples.
    pub fn translated_pieces() -> Vec<(Set, Horiz, Set)> {
        up_triples().into_iter().map(|[a, b, h]| (SLASH[a], HORIZ[h], BACKSLASH[b])).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn pieces_and_charges() {
        assert_eq!(piece(0b11, 0b10), Some((Horiz::Down(0), 0b10)));
        assert_eq!(piece(0, 0), Some((Horiz::Even, 0)));
        assert_eq!(piece(0b1, 0b1), Some((Horiz::Odd, 0b1)));
        assert_eq!(inversion_charge(Horiz::Odd, 0b111), 1);
        assert_eq!(inversion_charge(Horiz::Down(1), 0b1), 1);
        assert_eq!(inversion_charge(Horiz::Even, 0), 0);
    }

    #[test]
    fn small_sweep_matches_oracle() {
        use crate::permcore::almostsep_choices;
        use crate::schubring::oracle_constants;
        for n in 3..=4 {
            for pi in Permutation::all(n) {
                for rho in Permutation::all(n) {
                    if almostsep_choices(&pi, &rho, n).is_empty() {
                        continue;
                    }
                    for (th, t) in [(Theory::H, AsTheory::H), (Theory::K, AsTheory::K), (Theory::K, AsTheory::KDual)] {
                        let want = oracle_constants(&pi, &rho, th, n);
                        let got = almostsep_puzzles(&pi, &rho, t, n, None, Exec::Sequential).unwrap();
                        assert_eq!(got.expansion.restrict(n).coeffs, want.coeffs, "{pi} {rho} {t:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn h_pieces_are_self_dual() {
        for (k, d) in [(1, 2), (2, 3), (1, 4)] {
            let lab = AsLabels::new(k, d);
            let (ups, downs) = triangle_pieces(AsTheory::H, lab);
            let key = |v: &[Tri<LaurentPoly>]| -> std::collections::BTreeSet<(Lbl, Lbl, Lbl)> {
                v.iter().map(|t| (t.a, t.h, t.b)).collect()
            };
            let mirrored: Vec<_> = ups
                .iter()
                .map(|t| (lab.mirror_set(t.b), lab.horiz_id(lab.horiz_of(t.h).mirror(d)), lab.mirror_set(t.a)))
                .collect();
            assert_eq!(mirrored.into_iter().collect::<std::collections::BTreeSet<_>>(), key(&ups));
            assert_eq!(key(&ups), key(&downs));
        }
    }

    #[test]
    fn k_pieces_for_two_step() {
        let lab = AsLabels::new(1, 2);
        let (hu, hd) = triangle_pieces(AsTheory::H, lab);
        let (ku, kd) = triangle_pieces(AsTheory::K, lab);
        assert_eq!(ku.len() + kd.len() - hu.len() - hd.len(), 13);
        let t = ku.iter().find(|t| t.a == 0b110 && t.b == 0b110).unwrap();
        assert_eq!(lab.horiz_of(t.h), Horiz::Even);
        assert_eq!(t.charge, 1);
    }

    #[test]
    fn example_with_seven_puzzles() {
        let c = almostsep_puzzles(&p("2543167"), &p("4132567"), AsTheory::H, 7, None, Exec::Auto).unwrap();
        let want = ["6352147", "5632147", "5462137", "6432157", "6523147", "7342156", "7253146"];
        assert_eq!(c.expansion.coeffs.len(), 7);
        for w in want {
            assert_eq!(c.expansion.coeff(&p(w)), LaurentPoly::one(), "{w}");
        }
        assert_eq!(c.total, 7);
    }

    #[test]
    fn two_step_pieces_translate_to_h_pieces() {
        let lab = AsLabels::new(1, 2);
        let (ups, _) = triangle_pieces(AsTheory::H, lab);
        let h: std::collections::BTreeSet<(Set, Horiz, Set)> =
            ups.iter().map(|t| (t.a, lab.horiz_of(t.h), t.b)).collect();
        let tr = twostep::translated_pieces();
        assert_eq!(tr.len(), 18);
        for t in &tr {
            assert!(h.contains(t), "{t:?}");
        }
    }

    #[test]
    fn two_step_constants_agree() {
        let mut seen = 0;
        for n in 3..=5 {
            for pi in Permutation::all(n) {
                for rho in Permutation::all(n) {
                    for cuts in crate::permcore::almostsep_choices(&pi, &rho, n) {
                        let pair = almostsep_encode(&pi, &rho, n, Some(cuts)).unwrap();
                        if pair.k != 1 || pair.d != 2 {
                            continue;
                        }
                        let a = constants_for_pair(&pair, AsTheory::H, Exec::Sequential).unwrap().expansion;
                        assert_eq!(twostep::constants(&pair).unwrap(), a, "{pi} {rho}");
                        seen += 1;
                    }
                }
            }
        }
        assert!(seen > 0);
    }
}
