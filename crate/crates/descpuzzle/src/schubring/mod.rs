//! Exact polynomial arithmetic, Schubert and Grothendieck polynomials, and
//! basis expansions. This is the reference against which every puzzle rule is
//! checked.

mod localize;
mod poly;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use serde::Serialize;

pub use localize::{restriction_row, Family, YSpec};
pub use poly::{LaurentPoly, Monomial, Var};

use crate::permcore::{direct_sum as perm_direct_sum, Permutation};
use crate::{Error, Theory};

/// ∂_i f = (f − s_i f)/(x_i − x_{i+1}), computed termwise.
pub fn divided_difference(f: &LaurentPoly, i: usize) -> LaurentPoly {
    let (vi, vj) = (Var::X(i as u16), Var::X(i as u16 + 1));
    let mut out = LaurentPoly::zero();
    for (m, c) in f.terms() {
        let a = m.exp(vi);
        let b = m.exp(vj);
        if a == b {
            continue;
        }
        let rest = Monomial::from_pairs(m.pairs().iter().copied().filter(|&(v, _)| v != vi && v != vj));
        let (lo, hi, sign) = if a > b { (b, a, 1) } else { (a, b, -1) };
        for t in 0..hi - lo {
            let mono = if a > b {
                rest.mul(&Monomial::from_pairs([(vi, hi - 1 - t), (vj, lo + t)]))
            } else {
                rest.mul(&Monomial::from_pairs([(vi, lo + t), (vj, hi - 1 - t)]))
            };
            out.add_term(mono, c * BigInt::from(sign));
        }
    }
    out
}

/// ∂̄_i f = (x_{i+1} f − x_i s_i f)/(x_{i+1} − x_i) = −∂_i(x_{i+1} f).
pub fn demazure(f: &LaurentPoly, i: usize) -> LaurentPoly {
    -divided_difference(&(f * &LaurentPoly::x(i + 1)), i)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PolyKind {
    Schubert,
    DoubleSchubert,
    Grothendieck,
    DoubleGrothendieck,
}

impl PolyKind {
    pub fn of(theory: Theory) -> Self {
        match theory {
            Theory::H => PolyKind::Schubert,
            Theory::HT => PolyKind::DoubleSchubert,
            Theory::K => PolyKind::Grothendieck,
            Theory::KT => PolyKind::DoubleGrothendieck,
        }
    }

    fn is_k(self) -> bool {
        matches!(self, PolyKind::Grothendieck | PolyKind::DoubleGrothendieck)
    }

    fn seed(self, n: usize) -> LaurentPoly {
        let mut p = LaurentPoly::one();
        for i in 1..n {
            for j in 1..=n - i {
                let f = match self {
                    PolyKind::Schubert => LaurentPoly::x(i),
                    PolyKind::DoubleSchubert => LaurentPoly::x(i) - LaurentPoly::y(j),
                    PolyKind::Grothendieck => LaurentPoly::one() - LaurentPoly::x(i),
                    PolyKind::DoubleGrothendieck => {
                        LaurentPoly::one() - &LaurentPoly::x(i) * &LaurentPoly::monomial(Var::Y(j as u16), -1)
                    }
                };
                p = &p * &f;
            }
        }
        p
    }
}

type Memo = Mutex<HashMap<(PolyKind, Permutation), Arc<LaurentPoly>>>;

fn memo() -> &'static Memo {
    static M: OnceLock<Memo> = OnceLock::new();
    M.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Schubert or Grothendieck polynomial (single or double) of `p`, from the
/// longest element of the smallest S_m containing p.
pub fn basis_poly(kind: PolyKind, p: &Permutation) -> Arc<LaurentPoly> {
    if let Some(v) = memo().lock().unwrap().get(&(kind, p.clone())) {
        return v.clone();
    }
    let m = p.size();
    let value = if *p == Permutation::longest(m) {
        kind.seed(m)
    } else {
        let i = (1..m).find(|&i| p.at(i) < p.at(i + 1)).expect("non-longest element has an ascent");
        let parent = basis_poly(kind, &p.swap_positions(i));
        if kind.is_k() {
            demazure(&parent, i)
        } else {
            divided_difference(&parent, i)
        }
    };
    let value = Arc::new(value);
    memo().lock().unwrap().insert((kind, p.clone()), value.clone());
    value
}

pub fn schubert(p: &Permutation, double: bool) -> Arc<LaurentPoly> {
    basis_poly(if double { PolyKind::DoubleSchubert } else { PolyKind::Schubert }, p)
}

pub fn grothendieck(p: &Permutation, double: bool) -> Arc<LaurentPoly> {
    basis_poly(if double { PolyKind::DoubleGrothendieck } else { PolyKind::Grothendieck }, p)
}

/// Apply a sequence of operators along a word, right to left, to a seed.
pub fn apply_word(f: &LaurentPoly, word: &[usize], k_theory: bool) -> LaurentPoly {
    let mut g = f.clone();
    for &i in word.iter().rev() {
        g = if k_theory { demazure(&g, i) } else { divided_difference(&g, i) };
    }
    g
}

/// Coefficients c_σ of a basis expansion.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct SchubertExpansion {
    #[serde(serialize_with = "ser_coeffs")]
    pub coeffs: BTreeMap<Permutation, LaurentPoly>,
    /// true when the expansion has terms outside the permutations considered
    pub residual: bool,
}

fn ser_coeffs<S: serde::Serializer>(
    c: &BTreeMap<Permutation, LaurentPoly>,
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(c.len()))?;
    for (k, v) in c {
        m.serialize_entry(&k.to_string(), &v.to_string())?;
    }
    m.end()
}

impl SchubertExpansion {
    pub fn coeff(&self, p: &Permutation) -> LaurentPoly {
        self.coeffs.get(p).cloned().unwrap_or_default()
    }

    pub fn insert_add(&mut self, p: Permutation, c: LaurentPoly) {
        let e = self.coeffs.entry(p.clone()).or_default();
        *e = &*e + &c;
        if e.is_zero() {
            self.coeffs.remove(&p);
        }
    }

    /// Keep only σ ∈ S_n, flagging the rest as residual.
    pub fn restrict(mut self, n: usize) -> Self {
        let before = self.coeffs.len();
        self.coeffs.retain(|p, _| p.size() <= n);
        self.residual |= self.coeffs.len() != before;
        self
    }

    pub fn map_coeffs(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(p, c)| (p.clone(), f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        SchubertExpansion { coeffs, residual: self.residual }
    }

    /// Σ c_σ · basis(σ).
    pub fn recombine(&self, kind: PolyKind) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (p, c) in &self.coeffs {
            out = out + c * &*basis_poly(kind, p);
        }
        out
    }
}

fn code_of(m: &Monomial) -> Result<Vec<usize>, Error> {
    let mut c = Vec::new();
    for &(v, e) in m.pairs() {
        let Var::X(i) = v else { continue };
        if e < 0 {
            return Err(Error::MalformedBasis(format!("negative exponent in {m}")));
        }
        let i = i as usize;
        if c.len() < i {
            c.resize(i, 0);
        }
        c[i - 1] = e as usize;
    }
    Ok(c)
}

// lex-largest x-monomial among the terms of x-degree `deg`, with its y-coefficient
fn lead_in_degree(f: &LaurentPoly, deg: i32) -> Option<(Monomial, LaurentPoly)> {
    let part = f.x_homogeneous_part(deg);
    let grouped = part.by_x_monomial();
    grouped.into_iter().next_back()
}

/// Greedy expansion in Schubert polynomials (single or double). The lead of
/// S^σ in the top x-degree is x^{code(σ)}, checked at every step.
pub fn expand_schubert(f: &LaurentPoly, double: bool) -> Result<SchubertExpansion, Error> {
    let kind = if double { PolyKind::DoubleSchubert } else { PolyKind::Schubert };
    let mut rem = f.clone();
    let mut out = SchubertExpansion::default();
    let mut steps = 0usize;
    let guard = 10 * (f.len() + 1) * (f.len() + 1);
    while let Some(deg) = rem.max_x_degree() {
        steps += 1;
        if steps > guard {
            return Err(Error::MalformedBasis("greedy expansion did not terminate".into()));
        }
        let (xm, c) = lead_in_degree(&rem, deg).unwrap();
        let sigma = Permutation::from_code(&code_of(&xm)?);
        let b = basis_poly(kind, &sigma);
        let blead = lead_in_degree(&b, b.max_x_degree().unwrap_or(0));
        match blead {
            Some((bm, bc)) if bm == xm && bc.is_one() => {}
            _ => return Err(Error::MalformedBasis(format!("lead of S^{sigma} is not x^code"))),
        }
        rem = rem - &c * &*b;
        out.insert_add(sigma, c);
    }
    Ok(out)
}

/// x_i ↦ 1 − x_i. An involution; under it the lowest-degree part of G^σ is S^σ.
pub fn flip_x(f: &LaurentPoly) -> LaurentPoly {
    f.substitute(|v| match v {
        Var::X(i) => Some(LaurentPoly::one() - LaurentPoly::x(i as usize)),
        _ => None,
    })
}

/// Greedy expansion in single Grothendieck polynomials, run after the change
/// of variables x_i ↦ 1 − x_i so that each G^σ has lowest part x^{code(σ)} + …
pub fn expand_grothendieck_single(f: &LaurentPoly) -> Result<SchubertExpansion, Error> {
    let mut rem = flip_x(f);
    let mut out = SchubertExpansion::default();
    let mut steps = 0usize;
    let guard = 10 * (f.len() + 1) * (f.len() + 1);
    while let Some(deg) = rem.min_x_degree() {
        steps += 1;
        if steps > guard {
            return Err(Error::MalformedBasis("greedy expansion did not terminate".into()));
        }
        let (xm, c) = lead_in_degree(&rem, deg).unwrap();
        let sigma = Permutation::from_code(&code_of(&xm)?);
        let b = flip_x(&basis_poly(PolyKind::Grothendieck, &sigma));
        let blead = lead_in_degree(&b, b.min_x_degree().unwrap_or(0));
        match &blead {
            Some((bm, bc)) if *bm == xm && bc.is_one() => {}
            _ => return Err(Error::MalformedBasis(format!("lowest lead of G^{sigma} is not x^code"))),
        }
        rem = rem - &c * &b;
        out.insert_add(sigma, c);
    }
    Ok(out)
}

/// Expansion in Grothendieck polynomials. The double case goes through
/// fixed-point restrictions on S_n with n large enough for the x variables.
pub fn expand_grothendieck(f: &LaurentPoly, double: bool) -> Result<SchubertExpansion, Error> {
    if !double {
        return expand_grothendieck_single(f);
    }
    let mut n = 1 + f
        .terms()
        .flat_map(|(m, _)| m.pairs().to_vec())
        .filter_map(|(v, _)| if let Var::X(i) = v { Some(i as usize) } else { None })
        .max()
        .unwrap_or(0);
    loop {
        let e = expand_double(f, PolyKind::DoubleGrothendieck, n)?;
        if !e.residual {
            return Ok(e);
        }
        if n >= 7 {
            return Err(Error::ResidualNonzero(format!("no expansion within S_{n}")));
        }
        n += 1;
    }
}

/// f|_w := f(x_i ← y_{w(i)}).
pub fn restrict_at(f: &LaurentPoly, w: &Permutation) -> LaurentPoly {
    f.substitute(|v| match v {
        Var::X(i) => Some(LaurentPoly::y(w.at(i as usize))),
        _ => None,
    })
}

/// Expansion of a polynomial in double Schubert or double Grothendieck
/// polynomials indexed by S_n, by a triangular solve over fixed-point
/// restrictions. The residual flag reports whether Σ c_σ basis(σ) ≠ f.
pub fn expand_double(f: &LaurentPoly, kind: PolyKind, n: usize) -> Result<SchubertExpansion, Error> {
    let family = match kind {
        PolyKind::DoubleSchubert => Family::Schubert,
        PolyKind::DoubleGrothendieck => Family::Grothendieck,
        _ => return Err(Error::UnsupportedTheory(format!("{kind:?}"))),
    };
    let mut ws = Permutation::all(n);
    ws.sort_by_key(|w| w.length());
    let mut out = SchubertExpansion::default();
    let mut rows: Vec<(Permutation, Arc<localize::Row>)> = Vec::new();
    for w in &ws {
        let mut num = restrict_at(f, w);
        for (s, row) in &rows {
            if let Some(v) = row.at(w) {
                num = num - &out.coeff(s) * v;
            }
        }
        if num.is_zero() {
            continue;
        }
        let row = restriction_row(n, family, YSpec::Full, w);
        let diag = row.at(w).expect("diagonal restriction is nonzero");
        let c = num
            .div_exact(diag)
            .ok_or_else(|| Error::MalformedBasis(format!("restriction at {w} not divisible")))?;
        out.insert_add(w.clone(), c);
        rows.push((w.clone(), row));
    }
    out.residual = !(f - &out.recombine(kind)).is_zero();
    Ok(out)
}

/// Structure constants c^{πρ}_σ for σ ∈ S_n of the given theory, computed by
/// localization. Nonequivariant constants are read off from one-parameter
/// specializations of the y variables.
pub fn localized_constants(pi: &Permutation, rho: &Permutation, theory: Theory, n: usize) -> SchubertExpansion {
    let (family, spec) = match theory {
        Theory::H => (Family::Schubert, YSpec::Line),
        Theory::HT => (Family::Schubert, YSpec::Full),
        Theory::K => (Family::Grothendieck, YSpec::Power),
        Theory::KT => (Family::Grothendieck, YSpec::Full),
    };
    let raw = localize::product_expansion(pi, rho, n, family, spec);
    let coeffs = raw
        .into_iter()
        .map(|(s, c)| {
            let c = match spec {
                YSpec::Full => c,
                YSpec::Line => c.set_vars(|v| (v == Var::T).then_some(0)),
                YSpec::Power => c.set_vars(|v| (v == Var::T).then_some(1)),
            };
            (s, c)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect();
    SchubertExpansion { coeffs, residual: false }
}

/// Oracle structure constants, restricted to σ ∈ S_n. The residual flag is
/// exact for H and K; for HT and KT it is the flag of the nonequivariant
/// specialization.
pub fn oracle_constants(pi: &Permutation, rho: &Permutation, theory: Theory, n: usize) -> SchubertExpansion {
    let n = n.max(pi.size()).max(rho.size());
    let mut out = localized_constants(pi, rho, theory, n);
    let base = match theory {
        Theory::H | Theory::HT => Theory::H,
        Theory::K | Theory::KT => Theory::K,
    };
    let plain = if base == theory { out.clone() } else { localized_constants(pi, rho, base, n) };
    let kind = PolyKind::of(base);
    let product = &*basis_poly(kind, pi) * &*basis_poly(kind, rho);
    out.residual = !(product - plain.recombine(kind)).is_zero();
    out
}

/// Ψ_i: x_i ↦ 0 and x_j ↦ x_{j−1} for j > i.
pub fn psi(f: &LaurentPoly, i: usize) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (m, c) in f.terms() {
        if m.exp(Var::X(i as u16)) != 0 {
            continue;
        }
        let shifted = m.map_vars(|v| match v {
            Var::X(j) if j as usize > i => Var::X(j - 1),
            other => other,
        });
        out.add_term(shifted, c.clone());
    }
    out
}

pub fn direct_sum(pi: &Permutation, rho: &Permutation, n: usize) -> Permutation {
    perm_direct_sum(pi, rho, n)
}

/// Product of two basis elements as a polynomial.
pub fn basis_product(pi: &Permutation, rho: &Permutation, theory: Theory) -> LaurentPoly {
    let kind = PolyKind::of(theory);
    &*basis_poly(kind, pi) * &*basis_poly(kind, rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn small_polys() {
        assert_eq!(schubert(&p("321"), false).to_string(), "x1^2*x2");
        assert!(schubert(&Permutation::identity(), false).is_one());
        assert_eq!(divided_difference(&(LaurentPoly::x(1).pow(2) * LaurentPoly::x(2)), 1).to_string(), "x1*x2");
        assert_eq!(grothendieck(&p("2134"), true).to_string(), "1 - x1/y1");
        assert!(demazure(&LaurentPoly::one(), 2).is_one());
    }

    #[test]
    fn g2431_factorization() {
        let y = |i| LaurentPoly::monomial(Var::Y(i), -1);
        let one = LaurentPoly::one();
        let expect = (&one - &(&LaurentPoly::x(1) * &y(1)))
            * (&one - &(&LaurentPoly::x(2) * &y(1)))
            * (&one - &(&LaurentPoly::x(3) * &y(1)))
            * (&one - &(&(&LaurentPoly::x(1) * &LaurentPoly::x(2)) * &(&y(2) * &y(3))));
        assert_eq!(*grothendieck(&p("2431"), true), expect);
    }

    #[test]
    fn expansion_round_trip() {
        for w in Permutation::all(4) {
            let e = expand_schubert(&schubert(&w, false), false).unwrap();
            assert_eq!(e.coeffs.len(), 1);
            assert!(e.coeff(&w).is_one());
            let g = expand_grothendieck_single(&grothendieck(&w, false)).unwrap();
            assert!(g.coeff(&w).is_one() && g.coeffs.len() == 1);
        }
    }

    #[test]
    fn lowest_part_of_flipped_grothendieck() {
        for w in Permutation::all(4) {
            let g = flip_x(&grothendieck(&w, false));
            let low = g.x_homogeneous_part(g.min_x_degree().unwrap());
            assert_eq!(low, *schubert(&w, false), "{w}");
        }
    }

    #[test]
    fn double_expansion_of_product() {
        let e = expand_grothendieck(&basis_product(&p("2431"), &p("2134"), Theory::KT), true).unwrap();
        let got: Vec<String> = e.coeffs.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        assert_eq!(got, ["2431:1 - y2/y1", "3421:y2/y1", "4231:y2/y1", "4321:-y2/y1"]);
    }

    #[test]
    fn localized_constants_match() {
        let e = oracle_constants(&p("2431"), &p("2134"), Theory::KT, 4);
        let got: Vec<String> = e.coeffs.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        assert_eq!(got, ["2431:1 - y2/y1", "3421:y2/y1", "4231:y2/y1", "4321:-y2/y1"]);
        assert!(!e.residual);
        let h = oracle_constants(&p("1362547"), &p("7321456"), Theory::H, 7);
        let got: Vec<String> = h.coeffs.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        assert_eq!(got, ["7461325:1", "7561234:1", "7631425:1", "7641235:1"]);
        assert!(h.residual);
    }

    #[test]
    fn psi_basics() {
        assert!(psi(&LaurentPoly::x(1), 1).is_zero());
        assert_eq!(psi(&LaurentPoly::x(3), 1), LaurentPoly::x(2));
        let (pi, rho): (Permutation, Permutation) = ("2143".parse().unwrap(), "1243".parse().unwrap());
        let mut f = (*schubert(&direct_sum(&pi, &rho, 4), false)).clone();
        for _ in 0..4 {
            f = psi(&f, 4);
        }
        assert_eq!(f, basis_product(&pi, &rho, Theory::H));
    }
}
