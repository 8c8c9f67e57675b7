//! Permutations of S_∞, descent combinatorics and string encodings.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

/// An element of S_∞ stored in one-line notation with trailing fixed points removed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Permutation {
    word: Vec<usize>,
}

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self, Error> {
        let m = word.len();
        let mut seen = vec![false; m + 1];
        for &v in &word {
            if v == 0 || v > m || seen[v] {
                return Err(Error::BadPermutation(format!("{word:?}")));
            }
            seen[v] = true;
        }
        Ok(Self::from_word_unchecked(word))
    }

    fn from_word_unchecked(mut word: Vec<usize>) -> Self {
        while word.last() == Some(&word.len()) {
            word.pop();
        }
        Permutation { word }
    }

    pub fn identity() -> Self {
        Permutation { word: Vec::new() }
    }

    /// The longest element of S_n.
    pub fn longest(n: usize) -> Self {
        Self::from_word_unchecked((1..=n).rev().collect())
    }

    pub fn simple(i: usize) -> Self {
        let mut w: Vec<usize> = (1..=i + 1).collect();
        w.swap(i - 1, i);
        Self::from_word_unchecked(w)
    }

    /// Smallest m with self ∈ S_m.
    pub fn size(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// σ(i) for 1-based i; fixed beyond the stored word.
    pub fn at(&self, i: usize) -> usize {
        if i <= self.word.len() {
            self.word[i - 1]
        } else {
            i
        }
    }

    /// One-line notation padded to length n.
    pub fn word(&self, n: usize) -> Vec<usize> {
        (1..=n.max(self.size())).map(|i| self.at(i)).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.word.len()];
        for (i, &v) in self.word.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self::from_word_unchecked(inv)
    }

    /// (self ∘ other)(i) = self(other(i)).
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.size().max(other.size());
        Self::from_word_unchecked((1..=n).map(|i| self.at(other.at(i))).collect())
    }

    /// Right multiplication by s_i: swaps positions i and i+1.
    pub fn swap_positions(&self, i: usize) -> Self {
        let mut w = self.word(i + 1);
        w.swap(i - 1, i);
        Self::from_word_unchecked(w)
    }

    /// Left multiplication by s_i: swaps values i and i+1.
    pub fn swap_values(&self, i: usize) -> Self {
        let w = self
            .word(i + 1)
            .into_iter()
            .map(|v| {
                if v == i {
                    i + 1
                } else if v == i + 1 {
                    i
                } else {
                    v
                }
            })
            .collect();
        Self::from_word_unchecked(w)
    }

    pub fn descents(&self) -> BTreeSet<usize> {
        descent_set(self)
    }

    pub fn length(&self) -> usize {
        inversion_number(self)
    }

    pub fn code(&self) -> Vec<usize> {
        code(self)
    }

    /// Rebuild the permutation whose Lehmer code is `c`.
    pub fn from_code(c: &[usize]) -> Self {
        let n = c.iter().enumerate().map(|(i, &ci)| i + ci + 1).max().unwrap_or(0);
        let mut avail: Vec<usize> = (1..=n).collect();
        let mut w = Vec::with_capacity(n);
        for i in 0..n {
            let ci = c.get(i).copied().unwrap_or(0);
            w.push(avail.remove(ci));
        }
        Self::from_word_unchecked(w)
    }

    /// A reduced word (i_1, ..., i_l) with self = s_{i_1} ... s_{i_l}.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.word.clone();
        let mut out = Vec::new();
        // bubble sort from the right records s_i factors in reverse
        while let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
            w.swap(i, i + 1);
            out.push(i + 1);
        }
        out.reverse();
        out
    }

    /// Bruhat order by the tableau criterion.
    pub fn bruhat_le(&self, other: &Self) -> bool {
        let n = self.size().max(other.size());
        let a = self.word(n);
        let b = other.word(n);
        for p in 1..n {
            let mut x: Vec<usize> = a[..p].to_vec();
            let mut y: Vec<usize> = b[..p].to_vec();
            x.sort_unstable();
            y.sort_unstable();
            if x.iter().zip(&y).any(|(u, v)| u > v) {
                return false;
            }
        }
        true
    }

    /// All elements of S_n in lexicographic order of their one-line words.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut w: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Self::from_word_unchecked(w.clone()));
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| w[i] < w[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| w[j] > w[i]).unwrap();
            w.swap(i, j);
            w[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        let wide = self.word.len() > 9;
        let parts: Vec<String> = self.word.iter().map(|v| v.to_string()).collect();
        if wide {
            write!(f, "{}", parts.join(","))
        } else {
            write!(f, "{}", parts.concat())
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let word: Option<Vec<usize>> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        let word = word.ok_or_else(|| Error::BadPermutation(s.to_string()))?;
        Permutation::new(word)
    }
}

impl From<Permutation> for String {
    fn from(p: Permutation) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Permutation {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

pub fn descent_set(p: &Permutation) -> BTreeSet<usize> {
    (1..p.size()).filter(|&i| p.at(i) > p.at(i + 1)).collect()
}

pub fn inversion_number(p: &Permutation) -> usize {
    let w = &p.word;
    let mut count = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                count += 1;
            }
        }
    }
    count
}

pub fn code(p: &Permutation) -> Vec<usize> {
    let w = &p.word;
    let mut c: Vec<usize> = (0..w.len())
        .map(|i| w[i + 1..].iter().filter(|&&v| v < w[i]).count())
        .collect();
    while c.last() == Some(&0) {
        c.pop();
    }
    c
}

pub fn direct_sum(pi: &Permutation, rho: &Permutation, n: usize) -> Permutation {
    let mut w = pi.word(n);
    let m = w.len();
    w.extend(rho.word(0).into_iter().map(|v| v + m));
    Permutation::from_word_unchecked(w)
}

/// A letter of a puzzle boundary: a digit or the blank.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Symbol {
    Digit(u8),
    Blank,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Digit(d) => write!(f, "{d}"),
            Symbol::Blank => write!(f, "_"),
        }
    }
}

/// An ordered list of symbols. Comparison of letters uses this order, not the
/// natural order of `Symbol`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self, Error> {
        let set: BTreeSet<_> = symbols.iter().collect();
        if set.len() != symbols.len() {
            return Err(Error::BadAlphabet(format!("{symbols:?}")));
        }
        Ok(Alphabet { symbols })
    }

    pub fn digits(lo: u8, hi: u8) -> Self {
        Alphabet { symbols: (lo..=hi).map(Symbol::Digit).collect() }
    }

    /// {_ < k+1 < ... < d}
    pub fn blank_then(lo: u8, hi: u8) -> Self {
        let mut symbols = vec![Symbol::Blank];
        symbols.extend((lo..=hi).map(Symbol::Digit));
        Alphabet { symbols }
    }

    /// {0 < ... < k < _}
    pub fn then_blank(hi: u8) -> Self {
        let mut symbols: Vec<Symbol> = (0..=hi).map(Symbol::Digit).collect();
        symbols.push(Symbol::Blank);
        Alphabet { symbols }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn rank(&self, s: Symbol) -> Option<usize> {
        self.symbols.iter().position(|&t| t == s)
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.rank(s).is_some()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct LabelString {
    pub alphabet: Alphabet,
    pub letters: Vec<Symbol>,
}

impl LabelString {
    pub fn new(alphabet: Alphabet, letters: Vec<Symbol>) -> Result<Self, Error> {
        if let Some(bad) = letters.iter().find(|&&s| !alphabet.contains(s)) {
            return Err(Error::BoundaryMismatch(format!("letter {bad} not in alphabet")));
        }
        Ok(LabelString { alphabet, letters })
    }

    /// Parse "_3_43_4" or "0,1,_,10" against an alphabet.
    pub fn parse(s: &str, alphabet: Alphabet) -> Result<Self, Error> {
        LabelString::new(alphabet, parse_symbols(s)?)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn ranks(&self) -> Vec<usize> {
        self.letters.iter().map(|&s| self.alphabet.rank(s).unwrap()).collect()
    }

    pub fn count(&self, s: Symbol) -> usize {
        self.letters.iter().filter(|&&t| t == s).count()
    }
}

impl fmt::Display for LabelString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.letters.iter().any(|s| matches!(s, Symbol::Digit(d) if *d > 9));
        let parts: Vec<String> = self.letters.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(if wide { "," } else { "" }))
    }
}

pub fn parse_symbols(s: &str) -> Result<Vec<Symbol>, Error> {
    let one = |t: &str| -> Result<Symbol, Error> {
        match t {
            "_" => Ok(Symbol::Blank),
            _ => t
                .parse::<u8>()
                .map(Symbol::Digit)
                .map_err(|_| Error::BadString(s.to_string())),
        }
    };
    let s = s.trim();
    if s.contains(',') {
        s.split(',').map(|t| one(t.trim())).collect()
    } else {
        s.chars().map(|c| one(&c.to_string())).collect()
    }
}

/// λ̃ with λ_i ≤ λ_j ⇔ λ̃_i < λ̃_j for i < j.
pub fn standardize(s: &LabelString) -> Permutation {
    standardize_ranks(&s.ranks())
}

/// Standardization of a sequence of letter ranks.
pub fn standardize_ranks(r: &[usize]) -> Permutation {
    let w = (0..r.len())
        .map(|i| {
            1 + r.iter().filter(|&&x| x < r[i]).count() + r[..i].iter().filter(|&&x| x == r[i]).count()
        })
        .collect();
    Permutation::from_word_unchecked(w)
}

pub fn string_to_perm(s: &LabelString) -> Permutation {
    standardize(s).inverse()
}

pub fn sort_content(s: &LabelString) -> LabelString {
    let mut letters = s.letters.clone();
    letters.sort_by_key(|&x| s.alphabet.rank(x).unwrap());
    LabelString { alphabet: s.alphabet.clone(), letters }
}

/// λ with λ_{p(i)} = ω_i, where ω has one block per alphabet letter cut at `cuts`.
/// `cuts` must be weakly increasing; repeated cuts give letters of multiplicity zero.
pub fn perm_to_string(
    p: &Permutation,
    n: usize,
    cuts: &[usize],
    alphabet: &Alphabet,
) -> Result<LabelString, Error> {
    if alphabet.len() != cuts.len() + 1 {
        return Err(Error::BadAlphabet(format!(
            "{} letters for {} cuts",
            alphabet.len(),
            cuts.len()
        )));
    }
    if p.size() > n || cuts.windows(2).any(|w| w[0] > w[1]) || cuts.iter().any(|&c| c > n) {
        return Err(Error::BadCuts(format!("{cuts:?} for n={n}")));
    }
    if let Some(d) = p.descents().into_iter().find(|d| !cuts.contains(d)) {
        return Err(Error::BadCuts(format!("descent {d} of {p} missing from {cuts:?}")));
    }
    let mut omega = Vec::with_capacity(n);
    let mut block = 0;
    for i in 1..=n {
        while block < cuts.len() && cuts[block] < i {
            block += 1;
        }
        omega.push(alphabet.symbols()[block]);
    }
    let mut letters = vec![Symbol::Blank; n];
    for i in 1..=n {
        letters[p.at(i) - 1] = omega[i - 1];
    }
    Ok(LabelString { alphabet: alphabet.clone(), letters })
}

/// Overlap set (D(π) ∪ D(ρ)) ∩ [min D(π), max D(ρ)] and its size.
pub fn overlap(pi: &Permutation, rho: &Permutation) -> (BTreeSet<usize>, usize) {
    let dp = pi.descents();
    let dr = rho.descents();
    let (Some(&lo), Some(&hi)) = (dp.first(), dr.last()) else {
        return (BTreeSet::new(), 0);
    };
    let o: BTreeSet<usize> = dp.union(&dr).copied().filter(|&x| lo <= x && x <= hi).collect();
    let c = o.len();
    (o, c)
}

pub fn desc(pi: &Permutation, rho: &Permutation) -> usize {
    pi.descents().union(&rho.descents()).count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodedPair {
    pub lambda: LabelString,
    pub mu: LabelString,
    pub k: u8,
    pub d: u8,
    pub m: usize,
    pub n: usize,
}

/// Cut positions r allowed for a separated-descent encoding.
pub fn sepdesc_choices(pi: &Permutation, rho: &Permutation, n: usize) -> Vec<usize> {
    let lo = rho.descents().last().copied().unwrap_or(0);
    let hi = pi.descents().first().copied().unwrap_or(n).min(n);
    (lo..=hi).collect()
}

/// λ encodes π over {_ < k+1 < ... < d}, μ encodes ρ over {0 < ... < k < _}; the
/// shared cut `r` defaults to max D(ρ).
pub fn sepdesc_encode(
    pi: &Permutation,
    rho: &Permutation,
    n: usize,
    r: Option<usize>,
) -> Result<EncodedPair, Error> {
    let n = n.max(pi.size()).max(rho.size());
    let choices = sepdesc_choices(pi, rho, n);
    let r = match r {
        Some(r) if choices.contains(&r) => r,
        Some(r) => return Err(Error::NotSeparated(format!("cut {r} not admissible for {pi}, {rho}"))),
        None => *choices
            .first()
            .ok_or_else(|| Error::NotSeparated(format!("{pi}, {rho}")))?,
    };
    let mut np: BTreeSet<usize> = pi.descents();
    np.insert(r);
    let mut nr: BTreeSet<usize> = rho.descents();
    nr.insert(r);
    let k = (nr.len() - 1) as u8;
    let d = k + np.len() as u8;
    let cuts_p: Vec<usize> = np.into_iter().collect();
    let cuts_r: Vec<usize> = nr.into_iter().collect();
    let lambda = perm_to_string(pi, n, &cuts_p, &Alphabet::blank_then(k + 1, d))?;
    let mu = perm_to_string(rho, n, &cuts_r, &Alphabet::then_blank(k))?;
    Ok(EncodedPair { lambda, mu, k, d, m: 0, n })
}

/// Admissible (r, s) for the almost-separated encoding: letter k fills positions (r, s].
pub fn almostsep_choices(pi: &Permutation, rho: &Permutation, n: usize) -> Vec<(usize, usize)> {
    let dp = pi.descents();
    let dr = rho.descents();
    let mut out = Vec::new();
    for r in 0..=n {
        for s in r..=n {
            let ok_rho = dr.iter().all(|&x| x <= r || x == s);
            let ok_pi = dp.iter().all(|&x| x >= s || x == r);
            if ok_rho && ok_pi {
                out.push((r, s));
            }
        }
    }
    out
}

/// λ encodes ρ over {0 < ... < k < _}, μ encodes π over {_ < k < ... < d}.
/// Defaults: (min D(π), max D(ρ)) when the overlap is 2, otherwise r = s = max D(ρ).
pub fn almostsep_encode(
    pi: &Permutation,
    rho: &Permutation,
    n: usize,
    rs: Option<(usize, usize)>,
) -> Result<EncodedPair, Error> {
    let n = n.max(pi.size()).max(rho.size());
    let choices = almostsep_choices(pi, rho, n);
    let not = || Error::NotAlmostSeparated(format!("{pi}, {rho}"));
    let (r, s) = match rs {
        Some(c) if choices.contains(&c) => c,
        Some(_) => return Err(not()),
        None => {
            let (o, c) = overlap(pi, rho);
            let want = if c == 2 {
                Some((*o.first().unwrap(), *o.last().unwrap()))
            } else {
                let s = rho.descents().last().copied().unwrap_or(0);
                Some((s, s))
            };
            match want {
                Some(w) if choices.contains(&w) => w,
                _ => *choices.first().ok_or_else(not)?,
            }
        }
    };
    let dr = rho.descents();
    let dp = pi.descents();
    let mut cuts_r: Vec<usize> = dr.iter().copied().filter(|&x| x < r).collect();
    cuts_r.push(r);
    cuts_r.push(s);
    let k = (cuts_r.len() - 1) as u8;
    let mut cuts_p = vec![r, s];
    cuts_p.extend(dp.iter().copied().filter(|&x| x > s));
    let d = k + (cuts_p.len() - 1) as u8;
    let lambda = perm_to_string(rho, n, &cuts_r, &Alphabet::then_blank(k))?;
    let mu = perm_to_string(pi, n, &cuts_p, &Alphabet::blank_then(k, d))?;
    Ok(EncodedPair { lambda, mu, k, d, m: s - r, n })
}

/// Reverse and complement i ↦ d − i; blanks stay blank and the alphabet order is reversed.
pub fn dual_string(s: &LabelString, d: u8) -> LabelString {
    let flip = |x: Symbol| match x {
        Symbol::Digit(i) => Symbol::Digit(d - i),
        Symbol::Blank => Symbol::Blank,
    };
    let mut syms: Vec<Symbol> = s.alphabet.symbols().iter().map(|&x| flip(x)).collect();
    syms.reverse();
    LabelString {
        alphabet: Alphabet { symbols: syms },
        letters: s.letters.iter().rev().map(|&x| flip(x)).collect(),
    }
}
