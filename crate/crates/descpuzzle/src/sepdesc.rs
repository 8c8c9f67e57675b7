//! Puzzles for pairs with separated descents.
//!
//! Diagonal labels are the letters 0..d and the blank, ordered
//! 0 < ... < k < _ < k+1 < ... < d. A horizontal label is a two-element set
//! {a, b}; on the bottom edge only {i, _} occurs and is written `i`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::permcore::{sepdesc_encode, standardize_ranks, EncodedPair, LabelString, Permutation, Symbol};
use crate::puzzlegrid::{
    enumerate_puzzles, BotFill, CellState, Catalog, Exec, Lbl, Puzzle, RhFill, Tri, Wt,
};
use crate::schubring::{LaurentPoly, SchubertExpansion, Var};
use crate::{Error, Theory};

/// The equivariant rhombus at (a, b) carries y_a − y_b, and the K-theoretic
/// spectral parameter is z = y_a / y_b. Fixed by the 2431·2134 example.
pub fn equivariant_weight(a: usize, b: usize) -> LaurentPoly {
    LaurentPoly::y(a) - LaurentPoly::y(b)
}

pub fn spectral_ratio(a: usize, b: usize) -> LaurentPoly {
    &LaurentPoly::y(a) * &LaurentPoly::monomial(Var::Y(b as u16), -1)
}

/// Which piece list to build.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SepTheory {
    H,
    K,
    HT,
    KT,
    /// twisted generic fugacities at symbolic q
    GenericNoneq,
    /// untwisted generic fugacities at symbolic q
    GenericNoneqUntwisted,
}

impl From<Theory> for SepTheory {
    fn from(t: Theory) -> Self {
        match t {
            Theory::H => SepTheory::H,
            Theory::K => SepTheory::K,
            Theory::HT => SepTheory::HT,
            Theory::KT => SepTheory::KT,
        }
    }
}

/// Label bookkeeping for a given (k, d).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SepLabels {
    pub k: u8,
    pub d: u8,
}

impl SepLabels {
    pub fn new(k: u8, d: u8) -> Self {
        assert!(k <= d, "need k ≤ d");
        SepLabels { k, d }
    }

    pub fn blank(&self) -> Lbl {
        self.d as Lbl + 1
    }

    pub fn n_diag(&self) -> usize {
        self.d as usize + 2
    }

    pub fn diag(&self, s: Symbol) -> Lbl {
        match s {
            Symbol::Digit(i) => i as Lbl,
            Symbol::Blank => self.blank(),
        }
    }

    pub fn symbol(&self, l: Lbl) -> Symbol {
        if l == self.blank() {
            Symbol::Blank
        } else {
            Symbol::Digit(l as u8)
        }
    }

    /// Position in 0 < ... < k < _ < k+1 < ... < d.
    pub fn ord(&self, l: Lbl) -> usize {
        if l == self.blank() {
            self.k as usize + 1
        } else if l <= self.k as Lbl {
            l as usize
        } else {
            l as usize + 1
        }
    }

    pub fn is_blank(&self, l: Lbl) -> bool {
        l == self.blank()
    }

    fn low(&self, l: Lbl) -> bool {
        !self.is_blank(l) && l <= self.k as Lbl
    }

    fn high(&self, l: Lbl) -> bool {
        !self.is_blank(l) && l > self.k as Lbl
    }

    fn same_side(&self, a: Lbl, b: Lbl) -> bool {
        (self.low(a) && self.low(b)) || (self.high(a) && self.high(b))
    }

    /// Horizontal label of {x, y}, x ≠ y. Ids 0..=d are {i, _}.
    pub fn horiz(&self, x: Lbl, y: Lbl) -> Lbl {
        assert_ne!(x, y);
        let b = self.blank();
        if x == b {
            return y;
        }
        if y == b {
            return x;
        }
        let (i, j) = (x.min(y) as usize, x.max(y) as usize);
        let m = self.d as usize + 1;
        // pairs i < j in lex order after the blank pairs
        let before: usize = (0..i).map(|t| m - 1 - t).sum();
        (m + before + (j - i - 1)) as Lbl
    }

    pub fn diag_names(&self) -> Vec<String> {
        (0..self.n_diag() as Lbl).map(|l| self.symbol(l).to_string()).collect()
    }

    pub fn horiz_names(&self) -> Vec<String> {
        let m = self.d as usize + 1;
        let sep = if self.d > 9 { "," } else { "" };
        let mut v: Vec<String> = (0..m).map(|i| i.to_string()).collect();
        for i in 0..m {
            for j in i + 1..m {
                v.push(format!("{i}{sep}{j}"));
            }
        }
        v
    }

    fn bottom_ok(&self, h: Lbl) -> bool {
        h <= self.d as Lbl
    }
}

fn lp(c: i64) -> LaurentPoly {
    LaurentPoly::constant(c)
}

fn q_pow(c: i64, e: i32) -> LaurentPoly {
    LaurentPoly::term(BigInt::from(c), crate::schubring::Monomial::var(Var::Q, e))
}

/// Triangle pieces (up, down) of a triangle-level theory.
pub fn triangle_pieces(theory: SepTheory, lab: SepLabels) -> (Vec<Tri<LaurentPoly>>, Vec<Tri<LaurentPoly>>) {
    let nd = lab.n_diag() as Lbl;
    let mut ups = Vec::new();
    let mut downs = Vec::new();
    let tri = |a, b, w: LaurentPoly, charge, k| Tri { a, h: lab.horiz(a, b), b, weight: w, charge, k };
    for x in 0..nd {
        for y in 0..nd {
            if x == y {
                continue;
            }
            let bx = lab.is_blank(x) || lab.is_blank(y);
            let (ox, oy) = (lab.ord(x), lab.ord(y));
            match theory {
                SepTheory::H | SepTheory::HT | SepTheory::K | SepTheory::KT => {
                    let k_ok = !matches!(theory, SepTheory::H | SepTheory::HT);
                    // up: NW = x, NE = y
                    if bx || (x > y) {
                        ups.push(tri(x, y, lp(1), 0, false));
                    } else if k_ok && lab.low(x) && lab.high(y) {
                        ups.push(tri(x, y, lp(-1), 1, true));
                    }
                    // down: SE = x, SW = y
                    if bx || (x > y) {
                        downs.push(tri(x, y, lp(1), 0, false));
                    } else if k_ok && lab.same_side(x, y) {
                        downs.push(tri(x, y, lp(-1), 1, true));
                    }
                }
                SepTheory::GenericNoneq => {
                    // Ũ′(NW = x, NE = y)
                    let u = if ox > oy || bx {
                        Some(lp(1))
                    } else if lab.low(x) && lab.high(y) {
                        Some(lp(-1))
                    } else {
                        Some(q_pow(-1, 2))
                    };
                    let kx = !(ox > oy || bx);
                    ups.push(tri(x, y, u.unwrap(), kx as u32, kx));
                    // D̃′(SW = y, SE = x)
                    let (sw, se) = (y, x);
                    let dn = if lab.ord(sw) < lab.ord(se) || bx {
                        lp(1)
                    } else if lab.same_side(sw, se) {
                        lp(-1)
                    } else {
                        q_pow(-1, 2)
                    };
                    let kd = !(lab.ord(sw) < lab.ord(se) || bx);
                    downs.push(tri(x, y, dn, kd as u32, kd));
                }
                SepTheory::GenericNoneqUntwisted => {
                    let u = if ox > oy { lp(1) } else { q_pow(-1, 1) };
                    ups.push(tri(x, y, u, 0, false));
                    let dn = if oy < ox { lp(1) } else { q_pow(-1, -1) };
                    downs.push(tri(x, y, dn, 0, false));
                }
            }
        }
    }
    (ups, downs)
}

// q = 0 rhombus entries as (c0, c1) meaning c0 + c1·z
fn kt_entry(lab: SepLabels, nw: Lbl, ne: Lbl, sw: Lbl, se: Lbl) -> Option<(i64, i64)> {
    let b = lab.blank();
    if nw == b && ne == b && sw == b && se == b {
        return Some((1, -1));
    }
    if sw == ne && se == nw && nw != ne {
        let (i, j) = (ne, nw);
        let ok = lab.is_blank(i) || lab.is_blank(j) || lab.ord(i) < lab.ord(j);
        return ok.then_some((1, 0));
    }
    if sw == nw && se == ne && nw != ne {
        let (i, j) = (nw, ne);
        if lab.low(i) && lab.high(j) {
            return Some((0, -1));
        }
        if lab.same_side(i, j) && j < i {
            return Some((-1, 0));
        }
        if lab.is_blank(i) && lab.high(j) {
            return Some((0, 1));
        }
        if lab.low(i) && lab.is_blank(j) {
            return Some((0, 1));
        }
        if lab.high(i) && lab.is_blank(j) {
            return Some((1, 0));
        }
        if lab.is_blank(i) && lab.low(j) {
            return Some((1, 0));
        }
    }
    None
}

/// The piece catalog for one of the integral theories.
pub fn sepdesc_catalog(theory: SepTheory, k: u8, d: u8) -> Catalog<LaurentPoly> {
    let lab = SepLabels::new(k, d);
    let name = format!("{theory:?}");
    let mut cat = Catalog::new("sepdesc", &name, lab.diag_names(), lab.horiz_names());
    let nd = lab.n_diag() as Lbl;
    match theory {
        SepTheory::KT => {
            for nw in 0..nd {
                for ne in 0..nd {
                    for sw in 0..nd {
                        for se in 0..nd {
                            let Some((c0, c1)) = kt_entry(lab, nw, ne, sw, se) else { continue };
                            let state = if nw != ne && ((nw == sw && ne == se) || (nw == se && ne == sw)) {
                                CellState::Bisected(lab.horiz(nw, ne))
                            } else {
                                CellState::Equivariant
                            };
                            let weight = if c1 == 0 {
                                Wt::Const(lp(c0))
                            } else {
                                Wt::Pos(Arc::new(move |a, b| lp(c0) + spectral_ratio(a, b).scale(&BigInt::from(c1))))
                            };
                            let charge = match (c0, c1) {
                                (1, -1) | (1, 0) => 0,
                                _ => 1,
                            };
                            let k_up = lab.low(nw) && lab.high(ne) && sw == nw;
                            let k_down = sw == nw && se == ne && lab.same_side(nw, ne) && ne < nw;
                            cat.add_rhombus(nw, ne, RhFill { sw, se, state, weight, charge, k_up, k_down });
                        }
                    }
                }
            }
            let (ups, _) = triangle_pieces(SepTheory::H, lab);
            cat.add_bottoms(&ups, |h| lab.bottom_ok(h));
        }
        _ => {
            let (ups, downs) = triangle_pieces(theory, lab);
            cat.add_bisected(&ups, &downs);
            cat.add_bottoms(&ups, |h| lab.bottom_ok(h));
            if theory == SepTheory::HT {
                let b = lab.blank();
                cat.add_rhombus(
                    b,
                    b,
                    RhFill {
                        sw: b,
                        se: b,
                        state: CellState::Equivariant,
                        weight: Wt::Pos(Arc::new(equivariant_weight)),
                        charge: 0,
                        k_up: false,
                        k_down: false,
                    },
                );
            }
        }
    }
    cat
}

/// A point at which generic equivariant fugacities are evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct GenericPoint {
    pub q: BigRational,
    pub z: Vec<BigRational>,
}

/// Untwisted generic rhombus entry with i = SW, j = SE, l = NE, m = NW at
/// spectral parameter z.
pub fn generic_rhombus_entry(lab: SepLabels, nw: Lbl, ne: Lbl, sw: Lbl, se: Lbl, q: &BigRational, z: &BigRational) -> BigRational {
    let one = BigRational::one();
    let qq = q * q;
    let den = &one - &qq * z;
    if nw == ne && ne == sw && sw == se {
        return q * (&one - z) / den;
    }
    if sw == ne && se == nw {
        return one;
    }
    if sw == nw && se == ne {
        if lab.ord(sw) < lab.ord(se) {
            return -(q * (&one - &qq) * z) / den;
        }
        return -((&one - &qq) / q) / den;
    }
    BigRational::from_integer(0.into())
}

/// Generic equivariant pieces evaluated at a point.
pub fn generic_eq_catalog(k: u8, d: u8, pt: &GenericPoint) -> Catalog<BigRational> {
    let lab = SepLabels::new(k, d);
    let mut cat = Catalog::new("sepdesc", "GenericEq", lab.diag_names(), lab.horiz_names());
    let nd = lab.n_diag() as Lbl;
    let pt = Arc::new(pt.clone());
    for nw in 0..nd {
        for ne in 0..nd {
            let mut outs = vec![(nw, ne)];
            if nw != ne {
                outs.push((ne, nw));
            }
            for (sw, se) in outs {
                let state = if nw == ne { CellState::Equivariant } else { CellState::Bisected(lab.horiz(nw, ne)) };
                let p = pt.clone();
                let weight = Wt::Pos(Arc::new(move |a: usize, b: usize| {
                    let z = &p.z[a - 1] / &p.z[b - 1];
                    generic_rhombus_entry(lab, nw, ne, sw, se, &p.q, &z)
                }));
                cat.add_rhombus(nw, ne, RhFill { sw, se, state, weight, charge: 0, k_up: false, k_down: false });
            }
            if nw != ne && lab.bottom_ok(lab.horiz(nw, ne)) {
                let w = if lab.ord(nw) > lab.ord(ne) { BigRational::one() } else { -pt.q.clone() };
                cat.add_bottom(nw, ne, BotFill { h: lab.horiz(nw, ne), weight: Wt::Const(w), charge: 0, k: false });
            }
        }
    }
    cat
}

/// NW and NE boundary labels of an encoded pair.
pub fn boundary(pair: &EncodedPair) -> (SepLabels, Vec<Lbl>, Vec<Lbl>) {
    let lab = SepLabels::new(pair.k, pair.d);
    let l = pair.lambda.letters.iter().map(|&s| lab.diag(s)).collect();
    let m = pair.mu.letters.iter().map(|&s| lab.diag(s)).collect();
    (lab, l, m)
}

/// σ = f(ν) for a bottom boundary ν.
pub fn bottom_perm(nu: &[Lbl]) -> Permutation {
    standardize_ranks(&nu.iter().map(|&l| l as usize).collect::<Vec<_>>()).inverse()
}

pub fn bottom_string(lab: SepLabels, nu: &[Lbl]) -> LabelString {
    LabelString {
        alphabet: crate::permcore::Alphabet::digits(0, lab.d),
        letters: nu.iter().map(|&l| Symbol::Digit(l as u8)).collect(),
    }
}

/// Structure constants and per-σ puzzle counts.
#[derive(Clone, Debug, PartialEq)]
pub struct PuzzleConstants {
    pub expansion: SchubertExpansion,
    pub counts: BTreeMap<Permutation, usize>,
    pub bottoms: BTreeMap<Permutation, String>,
    pub pair: EncodedPair,
    pub total: usize,
}

/// Enumerate and group for an already encoded pair.
pub fn constants_for_pair(pair: &EncodedPair, theory: SepTheory, exec: Exec) -> Result<PuzzleConstants, Error> {
    let (lab, l, m) = boundary(pair);
    let cat = sepdesc_catalog(theory, lab.k, lab.d);
    let ps = enumerate_puzzles(&cat, &l, &m, None, exec)?;
    Ok(group(&ps, lab, pair.clone()))
}

fn group(ps: &[Puzzle<LaurentPoly>], lab: SepLabels, pair: EncodedPair) -> PuzzleConstants {
    let mut e = SchubertExpansion::default();
    let mut counts = BTreeMap::new();
    let mut bottoms = BTreeMap::new();
    for p in ps {
        let s = bottom_perm(&p.s);
        e.insert_add(s.clone(), p.fugacity.clone());
        *counts.entry(s.clone()).or_insert(0) += 1;
        bottoms.entry(s).or_insert_with(|| bottom_string(lab, &p.s).to_string());
    }
    PuzzleConstants { expansion: e, counts, bottoms, pair, total: ps.len() }
}

/// c^{πρ}_σ for σ ∈ S_n by puzzles, with the default cut.
pub fn sepdesc_constants(pi: &Permutation, rho: &Permutation, theory: Theory, n: usize) -> Result<SchubertExpansion, Error> {
    Ok(sepdesc_puzzles(pi, rho, theory, n, None, Exec::Auto)?.expansion)
}

/// As [`sepdesc_constants`], choosing the cut and keeping the counts.
pub fn sepdesc_puzzles(
    pi: &Permutation,
    rho: &Permutation,
    theory: Theory,
    n: usize,
    cut: Option<usize>,
    exec: Exec,
) -> Result<PuzzleConstants, Error> {
    let pair = sepdesc_encode(pi, rho, n, cut)?;
    constants_for_pair(&pair, theory.into(), exec)
}

/// All puzzles for an encoded pair.
pub fn puzzles_for_pair(pair: &EncodedPair, theory: SepTheory, nu: Option<&[Lbl]>) -> Result<(Catalog<LaurentPoly>, Vec<Puzzle<LaurentPoly>>), Error> {
    let (lab, l, m) = boundary(pair);
    let cat = sepdesc_catalog(theory, lab.k, lab.d);
    let ps = enumerate_puzzles(&cat, &l, &m, nu, Exec::Auto)?;
    Ok((cat, ps))
}

/// Grassmannian puzzle labels (k = 0, d = 1).
pub mod grassmannian {
    use super::*;

    pub const LABELS: [&str; 3] = ["0", "1", "10"];

    /// Edge direction: "/" edges (NW, SE), "\" edges (NE, SW), horizontal.
    #[derive(Clone, Copy, PartialEq, Eq, Debug)]
    pub enum Dir {
        Slash,
        Backslash,
        Horizontal,
    }

    /// The label translation to separated-descent labels with k = 0, d = 1.
    pub fn from_grassmannian_labels(dir: Dir, label: &str) -> Result<&'static str, Error> {
        let out = match (dir, label) {
            (Dir::Slash, "0") => "_",
            (Dir::Slash, "1") => "1",
            (Dir::Slash, "10") => "0",
            (Dir::Backslash, "0") => "0",
            (Dir::Backslash, "1") => "_",
            (Dir::Backslash, "10") => "1",
            (Dir::Horizontal, "0") => "0",
            (Dir::Horizontal, "1") => "1",
            (Dir::Horizontal, "10") => "01",
            _ => return Err(Error::BadString(format!("not a Grassmannian label: {label}"))),
        };
        Ok(out)
    }

    pub fn to_grassmannian_label(dir: Dir, label: &str) -> Result<&'static str, Error> {
        LABELS
            .iter()
            .find(|g| from_grassmannian_labels(dir, g).ok() == Some(label))
            .copied()
            .ok_or_else(|| Error::BadString(format!("no Grassmannian label for {label}")))
    }

    /// Puzzle pieces in Grassmannian labels: 000, 111 and the rotations of
    /// (1, 0, 10) as (NW, NE, S); down pieces are their 180° rotations.
    pub fn catalog(theory: Theory) -> Result<Catalog<LaurentPoly>, Error> {
        if theory == Theory::KT {
            return Err(Error::UnsupportedTheory("KT".into()));
        }
        let names: Vec<String> = LABELS.iter().map(|s| s.to_string()).collect();
        let mut cat = Catalog::new("grassmannian", &theory.to_string(), names.clone(), names);
        let (z, o, t) = (0, 1, 2);
        let tri = |a, b, h, w: i64, k: bool| Tri { a, h, b, weight: LaurentPoly::constant(w), charge: k as u32, k };
        let mut ups = vec![tri(z, z, z, 1, false), tri(o, o, o, 1, false)];
        for (a, b, h) in [(o, z, t), (z, t, o), (t, o, z)] {
            ups.push(tri(a, b, h, 1, false));
        }
        let downs = ups.clone();
        if theory.is_k() {
            ups.push(tri(t, t, t, -1, true));
        }
        cat.add_bisected(&ups, &downs);
        cat.add_bottoms(&ups, |h| h != t);
        if theory == Theory::HT {
            cat.add_rhombus(
                z,
                o,
                RhFill {
                    sw: o,
                    se: z,
                    state: CellState::Equivariant,
                    weight: Wt::Pos(Arc::new(equivariant_weight)),
                    charge: 0,
                    k_up: false,
                    k_down: false,
                },
            );
        }
        Ok(cat)
    }

    /// Constants of a k = 0, d = 1 separated-descent pair computed with
    /// Grassmannian pieces, reading the boundary through the dictionary.
    pub fn constants(pair: &EncodedPair, theory: Theory) -> Result<SchubertExpansion, Error> {
        if pair.k != 0 || pair.d != 1 {
            return Err(Error::BadAlphabet(format!("k={}, d={}", pair.k, pair.d)));
        }
        let cat = catalog(theory)?;
        let conv = |dir, s: &Symbol| -> Result<Lbl, Error> {
            let g = to_grassmannian_label(dir, &s.to_string())?;
            Ok(cat.diag_label(g).unwrap())
        };
        let l: Vec<Lbl> = pair.lambda.letters.iter().map(|s| conv(Dir::Slash, s)).collect::<Result<_, _>>()?;
        let m: Vec<Lbl> = pair.mu.letters.iter().map(|s| conv(Dir::Backslash, s)).collect::<Result<_, _>>()?;
        let ps = enumerate_puzzles(&cat, &l, &m, None, Exec::Sequential)?;
        let mut e = SchubertExpansion::default();
        for p in ps {
            let nu: Vec<Lbl> = p
                .s
                .iter()
                .map(|&h| from_grassmannian_labels(Dir::Horizontal, LABELS[h as usize]).map(|s| s.parse::<Lbl>().unwrap()))
                .collect::<Result<_, _>>()?;
            e.insert_add(bottom_perm(&nu), p.fugacity.clone());
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn show(e: &SchubertExpansion) -> Vec<String> {
        e.coeffs.iter().map(|(k, v)| format!("{k}:{v}")).collect()
    }

    #[test]
    fn horizontal_ids_are_a_bijection() {
        let lab = SepLabels::new(1, 3);
        let names = lab.horiz_names();
        let mut seen = std::collections::BTreeSet::new();
        for x in 0..lab.n_diag() as Lbl {
            for y in 0..lab.n_diag() as Lbl {
                if x != y {
                    let h = lab.horiz(x, y);
                    assert_eq!(h, lab.horiz(y, x));
                    seen.insert(h);
                }
            }
        }
        assert_eq!(seen.len(), names.len());
    }

    #[test]
    fn h_example() {
        let c = sepdesc_puzzles(&p("1362547"), &p("7321456"), Theory::H, 7, None, Exec::Auto).unwrap();
        assert_eq!(show(&c.expansion), ["7461325:1", "7561234:1", "7631425:1", "7641235:1"]);
        assert_eq!(c.total, 4);
    }

    #[test]
    fn kt_example() {
        for cut in sepdesc_choices_all("2431", "2134") {
            let c = sepdesc_puzzles(&p("2431"), &p("2134"), Theory::KT, 4, Some(cut), Exec::Auto).unwrap();
            assert_eq!(show(&c.expansion), ["2431:1 - y2/y1", "3421:y2/y1", "4231:y2/y1", "4321:-y2/y1"], "cut {cut}");
        }
    }

    #[test]
    fn small_sweep_matches_oracle() {
        use crate::schubring::oracle_constants;
        for n in 3..=4 {
            for a in Permutation::all(n) {
                for b in Permutation::all(n) {
                    if crate::permcore::overlap(&a, &b).1 > 1 {
                        continue;
                    }
                    for t in Theory::ALL {
                        let got = sepdesc_constants(&a, &b, t, n).unwrap();
                        let want = oracle_constants(&a, &b, t, n);
                        assert_eq!(show(&got), show(&want), "{a} {b} {t}");
                    }
                }
            }
        }
    }

    fn sepdesc_choices_all(a: &str, b: &str) -> Vec<usize> {
        crate::permcore::sepdesc_choices(&p(a), &p(b), 4)
    }
}
