//! Generic-q checks: motivic Segre classes restricted to fixed points via
//! products of type A Ř-matrices, the puzzle identity they satisfy, and Euler
//! characteristics of triple intersections.
//!
//! The puzzle identity reads
//!
//! Σ_ν P(λ, μ, ν) S^ν_3|_σ = S^λ_1|_σ · S^μ_2|_σ
//!
//! and is checked numerically at random rational points.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::almostsep::{self, AsLabels, AsTheory, Horiz};
use crate::permcore::{Alphabet, LabelString, Permutation, Symbol};
use crate::puzzlegrid::{enumerate_puzzles, group_by_bottom, Exec, Lbl};
use crate::schubring::Var;
use crate::sepdesc::{self, GenericPoint, SepLabels, SepTheory};
use crate::Error;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Entry ⟨e_m ⊗ e_l, Ř(z′, z″) e_i ⊗ e_j⟩ of the type A Ř-matrix, normalized so
/// that e_i ⊗ e_i is fixed.
pub fn typea_rmatrix_entry<L: Ord>(
    i: L,
    j: L,
    m: L,
    l: L,
    zp: &BigRational,
    zpp: &BigRational,
    q: &BigRational,
) -> Result<BigRational, Error> {
    if zp.is_zero() {
        return Err(Error::PoleHit);
    }
    let x = zpp / zp;
    let qq = q * q;
    let den = BigRational::one() - &qq * &x;
    if den.is_zero() {
        return Err(Error::PoleHit);
    }
    let num = if i == j && j == m && m == l {
        return Ok(BigRational::one());
    } else if i == l && j == m {
        (BigRational::one() - &x) * q
    } else if i == m && j == l && i < j {
        BigRational::one() - &qq
    } else if i == m && j == l {
        (BigRational::one() - &qq) * &x
    } else {
        return Ok(BigRational::zero());
    };
    Ok(num / den)
}

/// Ř_σ applied to e_λ along the word (i_1, ..., i_l), rightmost factor first.
fn apply_word(ranks: &[usize], word: &[usize], q: &BigRational, z: &[BigRational]) -> Result<HashMap<Vec<usize>, BigRational>, Error> {
    let mut par: Vec<usize> = (0..ranks.len()).collect();
    let mut v: HashMap<Vec<usize>, BigRational> = HashMap::from([(ranks.to_vec(), BigRational::one())]);
    for &p in word.iter().rev() {
        let (a, b) = (p - 1, p);
        let (zp, zpp) = (&z[par[a]], &z[par[b]]);
        let mut next: HashMap<Vec<usize>, BigRational> = HashMap::new();
        for (s, c) in v {
            let (i, j) = (s[a], s[b]);
            let outs: &[(usize, usize)] = if i == j { &[(i, j)] } else { &[(j, i), (i, j)] };
            for &(m, l) in outs {
                let e = typea_rmatrix_entry(i, j, m, l, zp, zpp, q)?;
                if e.is_zero() {
                    continue;
                }
                let mut t = s.clone();
                t[a] = m;
                t[b] = l;
                let slot = next.entry(t).or_insert_with(BigRational::zero);
                *slot += &c * e;
            }
        }
        next.retain(|_, c| !c.is_zero());
        v = next;
        par.swap(a, b);
    }
    Ok(v)
}

fn ranks(s: &LabelString) -> Result<Vec<usize>, Error> {
    s.letters
        .iter()
        .map(|&x| s.alphabet.rank(x).ok_or_else(|| Error::BoundaryMismatch(format!("letter {x} not in alphabet"))))
        .collect()
}

/// S^λ|_σ along an explicit word for σ.
pub fn segre_restriction_word(lambda: &LabelString, word: &[usize], q: &BigRational, z: &[BigRational]) -> Result<BigRational, Error> {
    let r = ranks(lambda)?;
    if z.len() < r.len() || word.iter().any(|&p| p == 0 || p >= r.len()) {
        return Err(Error::BoundaryMismatch("word or point does not fit the string".into()));
    }
    let mut omega = r.clone();
    omega.sort_unstable();
    let v = apply_word(&r, word, q, z)?;
    Ok(v.get(&omega).cloned().unwrap_or_else(BigRational::zero))
}

/// S^λ|_σ = ⟨e*_ω, Ř_σ e_λ⟩ with ω = sort(λ).
pub fn segre_restriction(lambda: &LabelString, sigma: &Permutation, q: &BigRational, z: &[BigRational]) -> Result<BigRational, Error> {
    if sigma.size() > lambda.len().max(1) {
        return Err(Error::BoundaryMismatch(format!("{sigma} does not act on {} letters", lambda.len())));
    }
    segre_restriction_word(lambda, &sigma.reduced_word(), q, z)
}

/// k and d of a separated-descent boundary.
pub fn sep_shape(lambda: &LabelString, mu: &LabelString) -> Result<(u8, u8), Error> {
    let k = mu.alphabet.len().checked_sub(2).ok_or_else(|| Error::BadAlphabet("NE alphabet too small".into()))? as u8;
    let d = k as usize + lambda.alphabet.len() - 1;
    let d = u8::try_from(d).map_err(|_| Error::BadAlphabet("too many letters".into()))?;
    if mu.alphabet != Alphabet::then_blank(k) || lambda.alphabet != Alphabet::blank_then(k + 1, d) {
        return Err(Error::BadAlphabet(format!("NW over {{_ < k+1..d}}, NE over {{0..k < _}} expected for k={k}, d={d}")));
    }
    if lambda.len() != mu.len() {
        return Err(Error::BoundaryMismatch("sides of different lengths".into()));
    }
    Ok((k, d))
}

/// A random point with q² z_i / z_j ≠ 1 for all i, j.
pub fn random_point<R: Rng>(n: usize, rng: &mut R) -> GenericPoint {
    let mut draw = |signed: bool| {
        let a: i64 = rng.gen_range(1..=97);
        let b: i64 = rng.gen_range(1..=97);
        let s = if signed && rng.gen_bool(0.5) { -1 } else { 1 };
        BigRational::new(BigInt::from(s * a), BigInt::from(b))
    };
    loop {
        let q = draw(true);
        let z: Vec<BigRational> = (0..n).map(|_| draw(false)).collect();
        let qq = &q * &q;
        let bad = qq.is_one()
            || (0..n).any(|i| (0..n).any(|j| i != j && (&qq * &z[i] / &z[j]).is_one()))
            || (0..n).any(|i| (0..i).any(|j| z[i] == z[j]));
        if !bad {
            return GenericPoint { q, z };
        }
    }
}

/// Σ_ν P(λ, μ, ν) S^ν_3|_σ and S^λ_1|_σ · S^μ_2|_σ at one point.
pub fn identity_sides(lambda: &LabelString, mu: &LabelString, sigma: &Permutation, pt: &GenericPoint) -> Result<(BigRational, BigRational), Error> {
    let (k, d) = sep_shape(lambda, mu)?;
    let lab = SepLabels::new(k, d);
    let cat = sepdesc::generic_eq_catalog(k, d, pt);
    let l: Vec<Lbl> = lambda.letters.iter().map(|&s| lab.diag(s)).collect();
    let m: Vec<Lbl> = mu.letters.iter().map(|&s| lab.diag(s)).collect();
    let ps = enumerate_puzzles(&cat, &l, &m, None, Exec::Sequential)?;
    let mut lhs = BigRational::zero();
    for (nu, t) in group_by_bottom(&ps) {
        let nu = LabelString { alphabet: Alphabet::digits(0, d), letters: nu.iter().map(|&h| Symbol::Digit(h as u8)).collect() };
        lhs += t.sum * segre_restriction(&nu, sigma, &pt.q, &pt.z)?;
    }
    let rhs = segre_restriction(lambda, sigma, &pt.q, &pt.z)? * segre_restriction(mu, sigma, &pt.q, &pt.z)?;
    Ok((lhs, rhs))
}

/// Outcome of a randomized identity check, with the points used.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub points: Vec<GenericPoint>,
}

/// Checks the puzzle identity at `trials` random points. The sides must carry
/// n blanks between them, otherwise their weights do not add up to a weight
/// of the bottom face.
pub fn verify_puzzle_identity<R: Rng>(
    lambda: &LabelString,
    mu: &LabelString,
    sigma: &Permutation,
    trials: usize,
    rng: &mut R,
) -> Result<IdentityCheck, Error> {
    sep_shape(lambda, mu)?;
    if lambda.count(Symbol::Blank) + mu.count(Symbol::Blank) != lambda.len() {
        return Err(Error::BoundaryMismatch(format!("{lambda} and {mu} need {} blanks in all", lambda.len())));
    }
    let mut points = Vec::with_capacity(trials);
    let mut holds = true;
    while points.len() < trials {
        let pt = random_point(lambda.len(), rng);
        match identity_sides(lambda, mu, sigma, &pt) {
            Ok((a, b)) => holds &= a == b,
            Err(Error::PoleHit) => continue,
            Err(e) => return Err(e),
        }
        points.push(pt);
    }
    Ok(IdentityCheck { holds, points })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Rule {
    SepDesc,
    AlmostSep,
}

impl FromStr for Rule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "sepdesc" => Ok(Rule::SepDesc),
            "almostsep" => Ok(Rule::AlmostSep),
            _ => Err(Error::BadString(format!("unknown rule {s}"))),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::SepDesc => "sepdesc",
            Rule::AlmostSep => "almostsep",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerResult {
    pub puzzles: usize,
    pub dim_y: i64,
    pub chi: i64,
}

fn inversions(r: &[usize]) -> i64 {
    let mut c = 0;
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            c += (r[i] > r[j]) as i64;
        }
    }
    c
}

fn flag_dim(r: &[usize]) -> i64 {
    let mut p: HashMap<usize, i64> = HashMap::new();
    for &x in r {
        *p.entry(x).or_default() += 1;
    }
    let n = r.len() as i64;
    (n * n - p.values().map(|v| v * v).sum::<i64>()) / 2
}

/// Parse an almost-separated bottom such as "^3 ^4 v1 odd v0".
pub fn parse_horiz_string(s: &str) -> Result<Vec<Horiz>, Error> {
    s.split(|c: char| c.is_whitespace() || c == ',' || c == '·').filter(|t| !t.is_empty()).map(str::parse).collect()
}

/// χ of the triple intersection for the puzzle with sides λ, μ and bottom
/// `nu_bottom`, read left to right (the reverse of the third Schubert cell's string).
pub fn euler_characteristic(lambda: &LabelString, mu: &LabelString, nu_bottom: &str, rule: Rule) -> Result<EulerResult, Error> {
    let (fugs, bottom_ranks) = match rule {
        Rule::SepDesc => {
            let (k, d) = sep_shape(lambda, mu)?;
            let nu = LabelString::parse(nu_bottom, Alphabet::digits(0, d))?;
            let lab = SepLabels::new(k, d);
            let cat = sepdesc::sepdesc_catalog(SepTheory::GenericNoneqUntwisted, k, d);
            let l: Vec<Lbl> = lambda.letters.iter().map(|&s| lab.diag(s)).collect();
            let m: Vec<Lbl> = mu.letters.iter().map(|&s| lab.diag(s)).collect();
            let s: Vec<Lbl> = nu.letters.iter().map(|s| match s {
                Symbol::Digit(i) => *i as Lbl,
                Symbol::Blank => unreachable!(),
            }).collect();
            check_len(&l, &s)?;
            let ps = enumerate_puzzles(&cat, &l, &m, Some(&s), Exec::Auto)?;
            (ps.into_iter().map(|p| p.fugacity).collect::<Vec<_>>(), s.iter().map(|&x| x as usize).collect::<Vec<_>>())
        }
        Rule::AlmostSep => {
            let k = lambda.alphabet.len().checked_sub(2).ok_or_else(|| Error::BadAlphabet("NW alphabet too small".into()))? as u8;
            let d = k + mu.alphabet.len() as u8 - 2;
            if lambda.alphabet != Alphabet::then_blank(k) || mu.alphabet != Alphabet::blank_then(k, d) {
                return Err(Error::BadAlphabet(format!("NW over {{0..k < _}}, NE over {{_ < k..d}} expected for k={k}, d={d}")));
            }
            let lab = AsLabels::new(k, d);
            let hs = parse_horiz_string(nu_bottom)?;
            if let Some(h) = hs.iter().find(|&&h| !lab.bottom_ok(h) || matches!(h, Horiz::Down(i) | Horiz::Up(i) if i > d)) {
                return Err(Error::BoundaryMismatch(format!("{h} cannot sit on the bottom")));
            }
            let cat = almostsep::almostsep_catalog(AsTheory::GenericNoneqUntwisted, k, d);
            let l: Vec<Lbl> = lambda.letters.iter().map(|&s| lab.nw_set(s)).collect();
            let m: Vec<Lbl> = mu.letters.iter().map(|&s| lab.ne_set(s)).collect();
            let s: Vec<Lbl> = hs.iter().map(|&h| lab.horiz_id(h)).collect();
            check_len(&l, &s)?;
            let ps = enumerate_puzzles(&cat, &l, &m, Some(&s), Exec::Auto)?;
            (ps.into_iter().map(|p| p.fugacity).collect(), hs.iter().map(|&h| lab.bottom_rank(h)).collect())
        }
    };
    let mut total = BigRational::zero();
    for f in &fugs {
        let v = f.eval(|v| if v == Var::Q { rat(-1) } else { rat(1) });
        assert!(v.is_one(), "H-fugacity {f} is not 1 at q = -1");
        total += v;
    }
    let mut nu = bottom_ranks;
    nu.reverse();
    let dim_y = flag_dim(&nu) - inversions(&ranks(lambda)?) - inversions(&ranks(mu)?) - inversions(&nu);
    let count = total.to_integer();
    let count = i64::try_from(count).expect("small count");
    let chi = if dim_y.rem_euclid(2) == 0 { count } else { -count };
    Ok(EulerResult { puzzles: fugs.len(), dim_y, chi })
}

fn check_len(l: &[Lbl], s: &[Lbl]) -> Result<(), Error> {
    if l.len() != s.len() {
        return Err(Error::BoundaryMismatch("sides of different lengths".into()));
    }
    Ok(())
}
