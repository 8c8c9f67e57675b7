use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

/// Variables of the coefficient ring. `T` is an auxiliary parameter used for
/// one-dimensional specializations of the y variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
// declaration order is the lex significance order (last = most significant)
pub enum Var {
    Q,
    T,
    Y(u16),
    X(u16),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Q => write!(f, "q"),
            Var::T => write!(f, "t"),
            Var::X(i) => write!(f, "x{i}"),
            Var::Y(i) => write!(f, "y{i}"),
        }
    }
}

/// Sparse exponent vector, sorted by variable, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(SmallVec<[(Var, i32); 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, e: i32) -> Self {
        let mut m = Monomial::one();
        if e != 0 {
            m.0.push((v, e));
        }
        m
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, i32)>) -> Self {
        let mut m = Monomial::one();
        for (v, e) in pairs {
            m = m.mul(&Monomial::var(v, e));
        }
        m
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |&(_, e)| e)
    }

    pub fn pairs(&self) -> &[(Var, i32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }

    pub fn x_degree(&self) -> i32 {
        self.0.iter().filter(|(v, _)| matches!(v, Var::X(_))).map(|&(_, e)| e).sum()
    }

    /// Lex comparison, most significant variable first (x_N ≻ … ≻ x_1 ≻ y ≻ t ≻ q).
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (a.len(), b.len());
        while i > 0 || j > 0 {
            let (va, ea) = if i > 0 { (Some(a[i - 1].0), a[i - 1].1) } else { (None, 0) };
            let (vb, eb) = if j > 0 { (Some(b[j - 1].0), b[j - 1].1) } else { (None, 0) };
            let o = match (va, vb) {
                (Some(x), Some(y)) if x == y => {
                    i -= 1;
                    j -= 1;
                    ea.cmp(&eb)
                }
                (Some(x), Some(y)) if x > y => {
                    i -= 1;
                    ea.cmp(&0)
                }
                (Some(_), None) => {
                    i -= 1;
                    ea.cmp(&0)
                }
                _ => {
                    j -= 1;
                    0.cmp(&eb)
                }
            };
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }

    fn display_order_key(&self) -> (i32, Vec<(Var, i32)>) {
        let total = self.0.iter().map(|&(_, e)| e.abs()).sum();
        (total, self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |pos: bool| -> Vec<String> {
            self.0
                .iter()
                .filter(|&&(_, e)| (e > 0) == pos)
                .map(|&(v, e)| if e.abs() == 1 { v.to_string() } else { format!("{v}^{}", e.abs()) })
                .collect()
        };
        let num = part(true);
        let den = part(false);
        let num_s = if num.is_empty() { "1".to_string() } else { num.join("*") };
        match den.len() {
            0 => write!(f, "{num_s}"),
            1 => write!(f, "{num_s}/{}", den[0]),
            _ => write!(f, "{num_s}/({})", den.join("*")),
        }
    }
}

/// Sparse Laurent polynomial with arbitrary-precision integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(c.into(), Monomial::one())
    }

    pub fn term(c: BigInt, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::term(BigInt::one(), Monomial::var(v, 1))
    }

    pub fn monomial(v: Var, e: i32) -> Self {
        Self::term(BigInt::one(), Monomial::var(v, e))
    }

    pub fn x(i: usize) -> Self {
        Self::var(Var::X(i as u16))
    }

    pub fn y(i: usize) -> Self {
        Self::var(Var::Y(i as u16))
    }

    pub fn q() -> Self {
        Self::var(Var::Q)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_default()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.map_vars(&f), c.clone());
        }
        out
    }

    /// Swap x_i and x_{i+1}.
    pub fn swap_x(&self, i: usize) -> Self {
        let (a, b) = (Var::X(i as u16), Var::X(i as u16 + 1));
        self.map_vars(|v| if v == a { b } else if v == b { a } else { v })
    }

    /// Substitute every variable through `f`; variables mapped to `None` are kept.
    pub fn substitute(&self, f: impl Fn(Var) -> Option<LaurentPoly>) -> Self {
        let mut out = Self::zero();
        let mut cache: BTreeMap<(Var, i32), LaurentPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut acc = Self::constant(c.clone());
            for &(v, e) in m.pairs() {
                let factor = cache
                    .entry((v, e))
                    .or_insert_with(|| match f(v) {
                        Some(p) if e >= 0 => p.pow(e as u32),
                        Some(p) => p.invert_monomial().expect("negative power of a non-monomial").pow((-e) as u32),
                        None => Self::monomial(v, e),
                    })
                    .clone();
                acc = &acc * &factor;
            }
            out = out + acc;
        }
        out
    }

    /// Inverse if the polynomial is ±monomial.
    pub fn invert_monomial(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        if c.abs().is_one() {
            Some(Self::term(c.clone(), m.inv()))
        } else {
            None
        }
    }

    pub fn lex_lead(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn lex_trail(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next()
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dl, dc) = d.lex_lead().map(|(m, c)| (m.clone(), c.clone()))?;
        if d.terms.len() == 1 {
            let mut out = Self::zero();
            for (m, c) in &self.terms {
                let (qt, rem) = c.div_rem(&dc);
                if !rem.is_zero() {
                    return None;
                }
                out.add_term(m.div(&dl), qt);
            }
            return Some(out);
        }
        let floor = self.lex_trail()?.0.div(d.lex_trail()?.0);
        let (pmin, pmax) = self.exponent_box();
        let (dmin, dmax) = d.exponent_box();
        let in_box = |m: &Monomial| {
            m.pairs().iter().all(|&(v, e)| {
                let lo = pmin.get(&v).copied().unwrap_or(0) - dmax.get(&v).copied().unwrap_or(0);
                let hi = pmax.get(&v).copied().unwrap_or(0) - dmin.get(&v).copied().unwrap_or(0);
                lo <= e && e <= hi
            })
        };
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((rm, rc)) = rem.lex_lead().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = rm.div(&dl);
            if qm.lex_cmp(&floor) == Ordering::Less || !in_box(&qm) {
                return None;
            }
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            for (m, c) in &d.terms {
                rem.add_term(m.mul(&qm), -(c * &qc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    // per-variable (min, max) exponents, zero included for absent variables
    fn exponent_box(&self) -> (BTreeMap<Var, i32>, BTreeMap<Var, i32>) {
        let mut lo: BTreeMap<Var, i32> = BTreeMap::new();
        let mut hi: BTreeMap<Var, i32> = BTreeMap::new();
        for m in self.terms.keys() {
            for &(v, _) in m.pairs() {
                lo.entry(v).or_insert(0);
                hi.entry(v).or_insert(0);
            }
        }
        for m in self.terms.keys() {
            for (v, l) in lo.iter_mut() {
                *l = (*l).min(m.exp(*v));
            }
            for (v, h) in hi.iter_mut() {
                *h = (*h).max(m.exp(*v));
            }
        }
        (lo, hi)
    }

    /// Evaluate at rational values for every variable.
    pub fn eval(&self, f: impl Fn(Var) -> BigRational) -> BigRational {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for &(v, e) in m.pairs() {
                let x = f(v);
                t *= if e >= 0 { pow_rat(&x, e as u32) } else { pow_rat(&x.recip(), (-e) as u32) };
            }
            total += t;
        }
        total
    }

    /// Specialize the variables v ∈ `vars` to the integer `val` (other variables kept).
    pub fn set_vars(&self, vars: impl Fn(Var) -> Option<i64>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut kept = Monomial::one();
            let mut ok = true;
            for &(v, e) in m.pairs() {
                match vars(v) {
                    Some(val) => {
                        if e < 0 && val.abs() != 1 {
                            ok = false;
                            break;
                        }
                        if val == 0 {
                            coeff = BigInt::zero();
                        } else {
                            coeff *= BigInt::from(val).pow(e.unsigned_abs());
                        }
                    }
                    None => kept = kept.mul(&Monomial::var(v, e)),
                }
            }
            assert!(ok, "set_vars: negative power of a non-unit value");
            out.add_term(kept, coeff);
        }
        out
    }

    pub fn max_x_degree(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.x_degree()).max()
    }

    pub fn min_x_degree(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.x_degree()).min()
    }

    /// Terms of a given total x-degree.
    pub fn x_homogeneous_part(&self, deg: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().filter(|(m, _)| m.x_degree() == deg).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Split into x-monomial → coefficient polynomial in the remaining variables.
    pub fn by_x_monomial(&self) -> BTreeMap<Monomial, LaurentPoly> {
        let mut out: BTreeMap<Monomial, LaurentPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let xs = Monomial(m.0.iter().copied().filter(|(v, _)| matches!(v, Var::X(_))).collect());
            let rest = Monomial(m.0.iter().copied().filter(|(v, _)| !matches!(v, Var::X(_))).collect());
            out.entry(xs).or_default().add_term(rest, c.clone());
        }
        out
    }

    pub fn uses_var(&self, pred: impl Fn(Var) -> bool) -> bool {
        self.terms.keys().any(|m| m.pairs().iter().any(|&(v, _)| pred(v)))
    }

    pub fn has_negative_x(&self) -> bool {
        self.terms.keys().any(|m| m.pairs().iter().any(|&(v, e)| matches!(v, Var::X(_)) && e < 0))
    }

    /// Sum of all coefficients after setting the variable `v` to 1.
    pub fn at_one(&self, v: Var) -> Self {
        self.set_vars(|w| (w == v).then_some(1))
    }
}

fn pow_rat(x: &BigRational, e: u32) -> BigRational {
    let mut r = BigRational::one();
    for _ in 0..e {
        r *= x;
    }
    r
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ts: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        ts.sort_by_key(|a| a.0.display_order_key());
        for (idx, (m, c)) in ts.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -self.clone()
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let x1 = LaurentPoly::x(1);
        let y1 = LaurentPoly::y(1);
        let g = LaurentPoly::one() - &x1 * &y1.invert_monomial().unwrap();
        assert_eq!(g.to_string(), "1 - x1/y1");
        let y2 = LaurentPoly::y(2);
        let r = &y2 * &y1.invert_monomial().unwrap();
        assert_eq!((LaurentPoly::one() - r).to_string(), "1 - y2/y1");
        assert!((&x1 - &x1).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = LaurentPoly::y(1) - LaurentPoly::y(2);
        let b = LaurentPoly::y(3) * LaurentPoly::y(1) + LaurentPoly::monomial(Var::Y(2), -1);
        let p = &a * &b;
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert!(b.div_exact(&a).is_none());
        let two = LaurentPoly::constant(2);
        assert!(LaurentPoly::x(1).div_exact(&two).is_none());
    }
}
