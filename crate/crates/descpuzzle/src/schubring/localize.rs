//! Fixed-point restrictions of Schubert and Grothendieck classes on the flag
//! variety of C^n, computed by running divided differences on the values
//! themselves rather than on polynomials.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use super::poly::{LaurentPoly, Monomial, Var};
use crate::permcore::Permutation;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Family {
    Schubert,
    Grothendieck,
}

/// What the equivariant parameter y_j is replaced by.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum YSpec {
    /// y_j itself
    Full,
    /// j·t
    Line,
    /// t^j
    Power,
}

impl YSpec {
    fn value(self, j: usize) -> LaurentPoly {
        match self {
            YSpec::Full => LaurentPoly::y(j),
            YSpec::Line => LaurentPoly::term(BigInt::from(j), Monomial::var(Var::T, 1)),
            YSpec::Power => LaurentPoly::monomial(Var::T, j as i32),
        }
    }
}

struct Index {
    n: usize,
    perms: Vec<Permutation>,
    pos: HashMap<Permutation, usize>,
    // right[s][i - 1] = index of perms[s]·s_i
    right: Vec<Vec<usize>>,
    ys: Vec<LaurentPoly>,
}

impl Index {
    fn new(n: usize, spec: YSpec) -> Self {
        let perms = Permutation::all(n);
        let pos: HashMap<_, _> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let right = perms
            .iter()
            .map(|p| (1..n).map(|i| pos[&p.swap_positions(i)]).collect())
            .collect();
        let ys = (0..=n).map(|j| if j == 0 { LaurentPoly::zero() } else { spec.value(j) }).collect();
        Index { n, perms, pos, right, ys }
    }
}

/// The restrictions P^σ|_w for every w in S_n.
pub struct Row {
    index: Arc<Index>,
    vals: Vec<Option<LaurentPoly>>,
}

impl Row {
    pub fn at(&self, w: &Permutation) -> Option<&LaurentPoly> {
        let i = *self.index.pos.get(w)?;
        self.vals[i].as_ref()
    }

    pub fn support(&self) -> impl Iterator<Item = (&Permutation, &LaurentPoly)> {
        self.vals
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.as_ref().map(|v| (&self.index.perms[i], v)))
    }
}

struct Table {
    index: Arc<Index>,
    family: Family,
    rows: Mutex<HashMap<usize, Arc<Row>>>,
}

type Tables = Mutex<HashMap<(usize, Family, YSpec), Arc<Table>>>;

fn table(n: usize, family: Family, spec: YSpec) -> Arc<Table> {
    static T: OnceLock<Tables> = OnceLock::new();
    let mut g = T.get_or_init(|| Mutex::new(HashMap::new())).lock().unwrap();
    g.entry((n, family, spec))
        .or_insert_with(|| {
            Arc::new(Table { index: Arc::new(Index::new(n, spec)), family, rows: Mutex::new(HashMap::new()) })
        })
        .clone()
}

impl Table {
    fn seed(&self) -> Row {
        let ix = &self.index;
        let n = ix.n;
        let w0 = Permutation::longest(n);
        let mut vals = vec![None; ix.perms.len()];
        let mut v = LaurentPoly::one();
        for i in 1..n {
            for j in 1..=n - i {
                let a = &ix.ys[w0.at(i)];
                let b = &ix.ys[j];
                let f = match self.family {
                    Family::Schubert => a - b,
                    Family::Grothendieck => {
                        LaurentPoly::one() - a * &b.invert_monomial().expect("monomial parameter")
                    }
                };
                v = &v * &f;
            }
        }
        vals[ix.pos[&w0]] = Some(v);
        Row { index: ix.clone(), vals }
    }

    fn row(&self, s: usize) -> Arc<Row> {
        if let Some(r) = self.rows.lock().unwrap().get(&s) {
            return r.clone();
        }
        let ix = &self.index;
        let p = &ix.perms[s];
        let row = match (1..ix.n).find(|&i| p.at(i) < p.at(i + 1)) {
            None => self.seed(),
            Some(i) => {
                let parent = self.row(ix.right[s][i - 1]);
                self.step(&parent, i)
            }
        };
        let row = Arc::new(row);
        self.rows.lock().unwrap().insert(s, row.clone());
        row
    }

    #[allow(clippy::needless_range_loop)]
    fn step(&self, parent: &Row, i: usize) -> Row {
        let ix = &self.index;
        let mut vals = vec![None; ix.perms.len()];
        for w in 0..ix.perms.len() {
            let ws = ix.right[w][i - 1];
            let (a, b) = (&parent.vals[w], &parent.vals[ws]);
            if a.is_none() && b.is_none() {
                continue;
            }
            let zero = LaurentPoly::zero();
            let fa = a.as_ref().unwrap_or(&zero);
            let fb = b.as_ref().unwrap_or(&zero);
            let p = &ix.perms[w];
            let yi = &ix.ys[p.at(i)];
            let yj = &ix.ys[p.at(i + 1)];
            let (num, den) = match self.family {
                Family::Schubert => (fa - fb, yi - yj),
                Family::Grothendieck => (yj * fa - yi * fb, yj - yi),
            };
            if num.is_zero() {
                continue;
            }
            let q = num.div_exact(&den).expect("restriction values divide exactly");
            vals[w] = Some(q);
        }
        Row { index: ix.clone(), vals }
    }
}

pub fn restriction_row(n: usize, family: Family, spec: YSpec, sigma: &Permutation) -> Arc<Row> {
    let t = table(n, family, spec);
    let s = t.index.pos[sigma];
    t.row(s)
}

/// Coefficients of P^π·P^ρ in the basis P^σ, σ ∈ S_n, solved triangularly
/// over the fixed points above both π and ρ.
pub fn product_expansion(
    pi: &Permutation,
    rho: &Permutation,
    n: usize,
    family: Family,
    spec: YSpec,
) -> Vec<(Permutation, LaurentPoly)> {
    let t = table(n, family, spec);
    let ix = t.index.clone();
    let rp = t.row(ix.pos[pi]);
    let rr = t.row(ix.pos[rho]);
    let mut cand: Vec<usize> = (0..ix.perms.len())
        .filter(|&w| rp.vals[w].is_some() && rr.vals[w].is_some())
        .collect();
    cand.sort_by_key(|&w| ix.perms[w].length());
    let mut found: Vec<(usize, LaurentPoly, Arc<Row>)> = Vec::new();
    for w in cand {
        let mut num = rp.vals[w].as_ref().unwrap() * rr.vals[w].as_ref().unwrap();
        for (_, c, row) in &found {
            if let Some(v) = &row.vals[w] {
                num = num - c * v;
            }
        }
        if num.is_zero() {
            continue;
        }
        let row = t.row(w);
        let diag = row.vals[w].as_ref().expect("diagonal restriction is nonzero");
        let c = num.div_exact(diag).expect("structure constants are Laurent polynomials");
        found.push((w, c, row));
    }
    found.into_iter().map(|(w, c, _)| (ix.perms[w].clone(), c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schubring::{restrict_at, schubert, grothendieck};

    #[test]
    fn rows_match_polynomials() {
        for w in Permutation::all(4) {
            let rs = restriction_row(4, Family::Schubert, YSpec::Full, &w);
            let rg = restriction_row(4, Family::Grothendieck, YSpec::Full, &w);
            let s = schubert(&w, true);
            let g = grothendieck(&w, true);
            for v in Permutation::all(4) {
                let a = restrict_at(&s, &v);
                assert_eq!(rs.at(&v).cloned().unwrap_or_default(), a, "S^{w} at {v}");
                let b = restrict_at(&g, &v);
                assert_eq!(rg.at(&v).cloned().unwrap_or_default(), b, "G^{w} at {v}");
            }
        }
    }
}
