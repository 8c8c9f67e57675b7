//! The triangular grid, catalog-driven puzzle enumeration, and rendering.
//!
//! Coordinates. The NW side is read bottom to top, the NE side top to bottom,
//! the S side left to right. The line entering through NW edge `a` runs
//! south-east and ends in bottom triangle `a`; the line entering through NE
//! edge `b` runs south-west and ends in bottom triangle `b`. For `b < a` they
//! cross in rhombus `(a, b)`. Rhombi are split by their horizontal diagonal
//! into an up triangle (NW, h, NE) over a down triangle (SE, h, SW).
//!
//! Enumeration visits lines `a = n, n-1, ..., 1`; along line `a` it fills
//! rhombi `(a, 1), ..., (a, a-1)` and then bottom triangle `a`. The first line
//! is the unit of parallel work.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::schubring::LaurentPoly;
use crate::Error;

/// Index of a label in a catalog's label table.
pub type Lbl = u16;

/// Coefficient ring of fugacities.
pub trait Weight: Clone + Send + Sync + PartialEq + fmt::Debug + 'static {
    fn unit() -> Self;
    fn nil() -> Self;
    fn is_nil(&self) -> bool;
    fn times(&self, other: &Self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn text(&self) -> String;
}

impl Weight for LaurentPoly {
    fn unit() -> Self {
        LaurentPoly::one()
    }
    fn nil() -> Self {
        LaurentPoly::zero()
    }
    fn is_nil(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn text(&self) -> String {
        self.to_string()
    }
}

impl Weight for BigRational {
    fn unit() -> Self {
        One::one()
    }
    fn nil() -> Self {
        Zero::zero()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn text(&self) -> String {
        self.to_string()
    }
}

/// A weight that may depend on the cell position `(a, b)`.
#[derive(Clone)]
pub enum Wt<W> {
    Const(W),
    Pos(Arc<dyn Fn(usize, usize) -> W + Send + Sync>),
}

impl<W: Weight> Wt<W> {
    pub fn at(&self, a: usize, b: usize) -> W {
        match self {
            Wt::Const(w) => w.clone(),
            Wt::Pos(f) => f(a, b),
        }
    }
}

impl<W: fmt::Debug> fmt::Debug for Wt<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wt::Const(w) => write!(f, "{w:?}"),
            Wt::Pos(_) => write!(f, "<positional>"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum CellState {
    Bisected(Lbl),
    Equivariant,
}

/// A triangle piece. For an up triangle `a` is its NW edge and `b` its NE
/// edge; for a down triangle `a` is SE and `b` is SW.
#[derive(Clone, Debug)]
pub struct Tri<W> {
    pub a: Lbl,
    pub h: Lbl,
    pub b: Lbl,
    pub weight: W,
    pub charge: u32,
    /// drawn as a K-piece
    pub k: bool,
}

#[derive(Clone, Debug)]
pub struct RhFill<W> {
    pub sw: Lbl,
    pub se: Lbl,
    pub state: CellState,
    pub weight: Wt<W>,
    pub charge: u32,
    pub k_up: bool,
    pub k_down: bool,
}

#[derive(Clone, Debug)]
pub struct BotFill<W> {
    pub h: Lbl,
    pub weight: Wt<W>,
    pub charge: u32,
    pub k: bool,
}

/// Position-aware lookup from a cell's two upper edges to its completions.
#[derive(Clone, Debug)]
pub struct Catalog<W> {
    pub rule: String,
    pub theory: String,
    pub diag_names: Vec<String>,
    pub horiz_names: Vec<String>,
    nd: usize,
    rh: Vec<Vec<RhFill<W>>>,
    bot: Vec<Vec<BotFill<W>>>,
}

impl<W: Weight> Catalog<W> {
    pub fn new(rule: &str, theory: &str, diag_names: Vec<String>, horiz_names: Vec<String>) -> Self {
        let nd = diag_names.len();
        Catalog {
            rule: rule.into(),
            theory: theory.into(),
            diag_names,
            horiz_names,
            nd,
            rh: vec![Vec::new(); nd * nd],
            bot: vec![Vec::new(); nd * nd],
        }
    }

    pub fn add_rhombus(&mut self, nw: Lbl, ne: Lbl, fill: RhFill<W>) {
        if let Wt::Const(w) = &fill.weight {
            if w.is_nil() {
                return;
            }
        }
        let slot = &mut self.rh[nw as usize * self.nd + ne as usize];
        assert!(
            !slot.iter().any(|f| f.sw == fill.sw && f.se == fill.se && f.state == fill.state),
            "duplicate rhombus completion"
        );
        slot.push(fill);
    }

    pub fn add_bottom(&mut self, nw: Lbl, ne: Lbl, fill: BotFill<W>) {
        if let Wt::Const(w) = &fill.weight {
            if w.is_nil() {
                return;
            }
        }
        let slot = &mut self.bot[nw as usize * self.nd + ne as usize];
        assert!(!slot.iter().any(|f| f.h == fill.h), "duplicate bottom completion");
        slot.push(fill);
    }

    /// Glue every up triangle to every down triangle sharing its horizontal label.
    pub fn add_bisected(&mut self, ups: &[Tri<W>], downs: &[Tri<W>]) {
        for u in ups {
            for d in downs.iter().filter(|d| d.h == u.h) {
                self.add_rhombus(
                    u.a,
                    u.b,
                    RhFill {
                        sw: d.b,
                        se: d.a,
                        state: CellState::Bisected(u.h),
                        weight: Wt::Const(u.weight.times(&d.weight)),
                        charge: u.charge + d.charge,
                        k_up: u.k,
                        k_down: d.k,
                    },
                );
            }
        }
    }

    /// Up triangles whose horizontal label may sit on the S boundary.
    pub fn add_bottoms(&mut self, ups: &[Tri<W>], allowed: impl Fn(Lbl) -> bool) {
        for u in ups.iter().filter(|u| allowed(u.h)) {
            self.add_bottom(u.a, u.b, BotFill { h: u.h, weight: Wt::Const(u.weight.clone()), charge: u.charge, k: u.k });
        }
    }

    pub fn rhombus_completions(&self, nw: Lbl, ne: Lbl) -> &[RhFill<W>] {
        &self.rh[nw as usize * self.nd + ne as usize]
    }

    pub fn bottom_completions(&self, nw: Lbl, ne: Lbl) -> &[BotFill<W>] {
        &self.bot[nw as usize * self.nd + ne as usize]
    }

    pub fn diag_label(&self, name: &str) -> Option<Lbl> {
        self.diag_names.iter().position(|s| s == name).map(|i| i as Lbl)
    }

    pub fn horiz_label(&self, name: &str) -> Option<Lbl> {
        self.horiz_names.iter().position(|s| s == name).map(|i| i as Lbl)
    }

    /// All rhombus entries as (nw, ne, fill).
    pub fn rhombus_entries(&self) -> impl Iterator<Item = (Lbl, Lbl, &RhFill<W>)> {
        self.rh.iter().enumerate().flat_map(move |(i, v)| {
            v.iter().map(move |f| ((i / self.nd) as Lbl, (i % self.nd) as Lbl, f))
        })
    }

    pub fn bottom_entries(&self) -> impl Iterator<Item = (Lbl, Lbl, &BotFill<W>)> {
        self.bot.iter().enumerate().flat_map(move |(i, v)| {
            v.iter().map(move |f| ((i / self.nd) as Lbl, (i % self.nd) as Lbl, f))
        })
    }

    fn check_diag(&self, s: &[Lbl]) -> Result<(), Error> {
        match s.iter().find(|&&l| l as usize >= self.nd) {
            Some(l) => Err(Error::BoundaryMismatch(format!("diagonal label {l} out of range"))),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Cell {
    Rhombus { a: usize, b: usize, nw: Lbl, ne: Lbl, sw: Lbl, se: Lbl, state: CellStateOut, k_up: bool, k_down: bool },
    Bottom { a: usize, nw: Lbl, ne: Lbl, h: Lbl, k: bool },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStateOut {
    Bisected(Lbl),
    Equivariant,
}

impl From<CellState> for CellStateOut {
    fn from(s: CellState) -> Self {
        match s {
            CellState::Bisected(h) => CellStateOut::Bisected(h),
            CellState::Equivariant => CellStateOut::Equivariant,
        }
    }
}

/// A complete filling with its fugacity.
#[derive(Clone, Debug, PartialEq)]
pub struct Puzzle<W> {
    pub n: usize,
    pub nw: Vec<Lbl>,
    pub ne: Vec<Lbl>,
    pub s: Vec<Lbl>,
    pub cells: Vec<Cell>,
    pub charge: u32,
    pub fugacity: W,
}

impl<W> Puzzle<W> {
    pub fn k_pieces(&self) -> usize {
        self.cells
            .iter()
            .map(|c| match c {
                Cell::Rhombus { k_up, k_down, .. } => *k_up as usize + *k_down as usize,
                Cell::Bottom { k, .. } => *k as usize,
            })
            .sum()
    }

    pub fn equivariant_cells(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| matches!(c, Cell::Rhombus { state: CellStateOut::Equivariant, .. }))
            .count()
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Rh(usize, usize),
    Bot(usize),
}

fn schedule(n: usize) -> Vec<Slot> {
    let mut v = Vec::with_capacity(n * (n + 1) / 2);
    for a in (1..=n).rev() {
        for b in 1..a {
            v.push(Slot::Rh(a, b));
        }
        v.push(Slot::Bot(a));
    }
    v
}

#[derive(Clone)]
struct State {
    cur1: Lbl,
    cur2: Vec<Lbl>,
    // (nw, ne, index of the chosen completion) per filled slot
    picks: Vec<(Lbl, Lbl, u16)>,
}

struct Search<'c, W> {
    cat: &'c Catalog<W>,
    n: usize,
    lambda: &'c [Lbl],
    nu: Option<&'c [Lbl]>,
    slots: Vec<Slot>,
}

impl<W: Weight> Search<'_, W> {
    // Depth-first fill from slot `i` up to (not including) slot `stop`.
    fn dfs(&self, st: &mut State, i: usize, stop: usize, out: &mut impl FnMut(&State)) {
        if i == stop {
            out(st);
            return;
        }
        match self.slots[i] {
            Slot::Rh(a, b) => {
                let nw = if b == 1 { self.lambda[a - 1] } else { st.cur1 };
                let ne = st.cur2[b - 1];
                for (k, f) in self.cat.rhombus_completions(nw, ne).iter().enumerate() {
                    let (old1, old2) = (st.cur1, st.cur2[b - 1]);
                    st.cur1 = f.se;
                    st.cur2[b - 1] = f.sw;
                    st.picks.push((nw, ne, k as u16));
                    self.dfs(st, i + 1, stop, out);
                    st.picks.pop();
                    st.cur1 = old1;
                    st.cur2[b - 1] = old2;
                }
            }
            Slot::Bot(a) => {
                let nw = if a == 1 { self.lambda[0] } else { st.cur1 };
                let ne = st.cur2[a - 1];
                for (k, f) in self.cat.bottom_completions(nw, ne).iter().enumerate() {
                    if let Some(nu) = self.nu {
                        if nu[a - 1] != f.h {
                            continue;
                        }
                    }
                    st.picks.push((nw, ne, k as u16));
                    self.dfs(st, i + 1, stop, out);
                    st.picks.pop();
                }
            }
        }
    }

    fn build(&self, st: &State, mu: &[Lbl]) -> Option<Puzzle<W>> {
        let mut fug = W::unit();
        let mut charge = 0;
        let mut cells = Vec::with_capacity(st.picks.len());
        let mut s = vec![0; self.n];
        for (slot, &(nw, ne, k)) in self.slots.iter().zip(&st.picks) {
            match *slot {
                Slot::Rh(a, b) => {
                    let f = &self.cat.rhombus_completions(nw, ne)[k as usize];
                    fug = fug.times(&f.weight.at(a, b));
                    charge += f.charge;
                    cells.push(Cell::Rhombus {
                        a,
                        b,
                        nw,
                        ne,
                        sw: f.sw,
                        se: f.se,
                        state: f.state.into(),
                        k_up: f.k_up,
                        k_down: f.k_down,
                    });
                }
                Slot::Bot(a) => {
                    let f = &self.cat.bottom_completions(nw, ne)[k as usize];
                    fug = fug.times(&f.weight.at(a, a));
                    charge += f.charge;
                    s[a - 1] = f.h;
                    cells.push(Cell::Bottom { a, nw, ne, h: f.h, k: f.k });
                }
            }
        }
        if fug.is_nil() {
            return None;
        }
        Some(Puzzle { n: self.n, nw: self.lambda.to_vec(), ne: mu.to_vec(), s, cells, charge, fugacity: fug })
    }
}

/// Which enumeration path to take.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Exec {
    #[default]
    Auto,
    Sequential,
    Parallel,
}

/// Every puzzle with NW side `lambda`, NE side `mu` and, if given, S side
/// `nu`, in a fixed order that does not depend on `exec`.
pub fn enumerate_puzzles<W: Weight>(
    cat: &Catalog<W>,
    lambda: &[Lbl],
    mu: &[Lbl],
    nu: Option<&[Lbl]>,
    exec: Exec,
) -> Result<Vec<Puzzle<W>>, Error> {
    let n = lambda.len();
    if mu.len() != n || nu.is_some_and(|v| v.len() != n) {
        return Err(Error::BoundaryMismatch("sides of different lengths".into()));
    }
    cat.check_diag(lambda)?;
    cat.check_diag(mu)?;
    if n == 0 {
        return Ok(vec![Puzzle { n, nw: vec![], ne: vec![], s: vec![], cells: vec![], charge: 0, fugacity: W::unit() }]);
    }
    let search = Search { cat, n, lambda, nu, slots: schedule(n) };
    let mut root = State { cur1: 0, cur2: mu.to_vec(), picks: Vec::new() };
    let total = search.slots.len();
    let parallel = match exec {
        Exec::Sequential => false,
        Exec::Parallel => true,
        Exec::Auto => n >= 6,
    };
    if !parallel || !cfg!(feature = "parallel") {
        let mut out = Vec::new();
        search.dfs(&mut root, 0, total, &mut |st| out.extend(search.build(st, mu)));
        return Ok(out);
    }
    // the first line: rhombi (n, 1..n-1) and bottom triangle n
    let mut prefixes = Vec::new();
    search.dfs(&mut root, 0, n, &mut |st| prefixes.push(st.clone()));
    Ok(run_prefixes(&search, prefixes, n, total, mu))
}

#[cfg(feature = "parallel")]
fn run_prefixes<W: Weight>(
    search: &Search<'_, W>,
    prefixes: Vec<State>,
    from: usize,
    total: usize,
    mu: &[Lbl],
) -> Vec<Puzzle<W>> {
    use rayon::prelude::*;
    prefixes
        .into_par_iter()
        .map(|mut st| {
            let mut out = Vec::new();
            search.dfs(&mut st, from, total, &mut |s| out.extend(search.build(s, mu)));
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn run_prefixes<W: Weight>(
    search: &Search<'_, W>,
    prefixes: Vec<State>,
    from: usize,
    total: usize,
    mu: &[Lbl],
) -> Vec<Puzzle<W>> {
    let mut out = Vec::new();
    for mut st in prefixes {
        search.dfs(&mut st, from, total, &mut |s| out.extend(search.build(s, mu)));
    }
    out
}

pub fn puzzle_fugacity<W: Weight>(p: &Puzzle<W>, cat: &Catalog<W>) -> W {
    let mut fug = W::unit();
    for c in &p.cells {
        let w = match *c {
            Cell::Rhombus { a, b, nw, ne, sw, se, state, .. } => cat
                .rhombus_completions(nw, ne)
                .iter()
                .find(|f| f.sw == sw && f.se == se && CellStateOut::from(f.state) == state)
                .map(|f| f.weight.at(a, b)),
            Cell::Bottom { a, nw, ne, h, .. } => {
                cat.bottom_completions(nw, ne).iter().find(|f| f.h == h).map(|f| f.weight.at(a, a))
            }
        };
        fug = fug.times(&w.unwrap_or_else(W::nil));
    }
    fug
}

/// Summed fugacity and puzzle count for one S boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct Tally<W> {
    pub sum: W,
    pub count: usize,
}

pub fn structure_constants_from_puzzles<W: Weight>(
    cat: &Catalog<W>,
    lambda: &[Lbl],
    mu: &[Lbl],
    exec: Exec,
) -> Result<BTreeMap<Vec<Lbl>, Tally<W>>, Error> {
    Ok(group_by_bottom(&enumerate_puzzles(cat, lambda, mu, None, exec)?))
}

pub fn group_by_bottom<W: Weight>(ps: &[Puzzle<W>]) -> BTreeMap<Vec<Lbl>, Tally<W>> {
    let mut m: BTreeMap<Vec<Lbl>, Tally<W>> = BTreeMap::new();
    for p in ps {
        let t = m.entry(p.s.clone()).or_insert(Tally { sum: W::nil(), count: 0 });
        t.sum = t.sum.plus(&p.fugacity);
        t.count += 1;
    }
    m
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Svg,
    Tikz,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "svg" => Ok(Format::Svg),
            "tikz" => Ok(Format::Tikz),
            "json" => Ok(Format::Json),
            _ => Err(Error::BadString(format!("unknown format {s}"))),
        }
    }
}

#[derive(Serialize)]
struct JsonCell {
    p: usize,
    q: usize,
    state: String,
    nw: String,
    ne: String,
    sw: Option<String>,
    se: Option<String>,
    h: Option<String>,
    k: bool,
}

#[derive(Serialize)]
struct JsonPuzzle {
    n: usize,
    rule: String,
    theory: String,
    nw: Vec<String>,
    ne: Vec<String>,
    s: Vec<String>,
    cells: Vec<JsonCell>,
    fugacity: String,
}

fn json_value<W: Weight>(p: &Puzzle<W>, cat: &Catalog<W>) -> JsonPuzzle {
    let d = |l: Lbl| cat.diag_names[l as usize].clone();
    let h = |l: Lbl| cat.horiz_names[l as usize].clone();
    let cells = p
        .cells
        .iter()
        .map(|c| match *c {
            Cell::Rhombus { a, b, nw, ne, sw, se, state, k_up, k_down } => JsonCell {
                p: a,
                q: b,
                state: match state {
                    CellStateOut::Bisected(_) => "bisected".into(),
                    CellStateOut::Equivariant => "equivariant".into(),
                },
                nw: d(nw),
                ne: d(ne),
                sw: Some(d(sw)),
                se: Some(d(se)),
                h: match state {
                    CellStateOut::Bisected(x) => Some(h(x)),
                    CellStateOut::Equivariant => None,
                },
                k: k_up || k_down,
            },
            Cell::Bottom { a, nw, ne, h: x, k } => JsonCell {
                p: a,
                q: a,
                state: "bottom".into(),
                nw: d(nw),
                ne: d(ne),
                sw: None,
                se: None,
                h: Some(h(x)),
                k,
            },
        })
        .collect();
    JsonPuzzle {
        n: p.n,
        rule: cat.rule.clone(),
        theory: cat.theory.clone(),
        nw: p.nw.iter().map(|&l| d(l)).collect(),
        ne: p.ne.iter().map(|&l| d(l)).collect(),
        s: p.s.iter().map(|&l| h(l)).collect(),
        cells,
        fugacity: p.fugacity.text(),
    }
}

pub fn puzzle_json<W: Weight>(p: &Puzzle<W>, cat: &Catalog<W>) -> serde_json::Value {
    serde_json::to_value(json_value(p, cat)).expect("puzzle serializes")
}

// lattice point i·e1 + j·e2 with e1 = (1, 0), e2 = (1/2, √3/2), y pointing up
fn pt(i: usize, j: usize) -> (f64, f64) {
    (i as f64 + j as f64 * 0.5, j as f64 * 3f64.sqrt() / 2.0)
}

struct Shape {
    poly: Vec<(f64, f64)>,
    fill: &'static str,
}

struct Edge {
    from: (f64, f64),
    to: (f64, f64),
    label: String,
    hue: f64,
}

fn geometry<W: Weight>(p: &Puzzle<W>, cat: &Catalog<W>) -> (Vec<Shape>, Vec<Edge>) {
    let nd = cat.diag_names.len().max(1) as f64;
    let nh = cat.horiz_names.len().max(1) as f64;
    let mut shapes = Vec::new();
    let mut edges = Vec::new();
    let diag = |from, to, l: Lbl| Edge { from, to, label: cat.diag_names[l as usize].clone(), hue: l as f64 / nd };
    let horiz = |from, to, l: Lbl| Edge { from, to, label: cat.horiz_names[l as usize].clone(), hue: l as f64 / nh };
    for c in &p.cells {
        match *c {
            Cell::Rhombus { a, b, nw, ne, sw, se, state, k_up, k_down } => {
                let t = b - 1;
                let top = pt(t, a - t);
                let left = pt(t, a - t - 1);
                let right = pt(t + 1, a - t - 1);
                let bottom = pt(t + 1, a - t - 2);
                match state {
                    CellStateOut::Equivariant => {
                        shapes.push(Shape { poly: vec![top, right, bottom, left], fill: "#c8c8c8" });
                    }
                    CellStateOut::Bisected(h) => {
                        if k_up {
                            shapes.push(Shape { poly: vec![top, right, left], fill: "#f7c6d9" });
                        }
                        if k_down {
                            shapes.push(Shape { poly: vec![left, right, bottom], fill: "#f7c6d9" });
                        }
                        edges.push(horiz(left, right, h));
                    }
                }
                edges.push(diag(left, top, nw));
                edges.push(diag(top, right, ne));
                edges.push(diag(left, bottom, sw));
                edges.push(diag(bottom, right, se));
            }
            Cell::Bottom { a, nw, ne, h, k } => {
                let (l, r, t) = (pt(a - 1, 0), pt(a, 0), pt(a - 1, 1));
                if k {
                    shapes.push(Shape { poly: vec![l, r, t], fill: "#f7c6d9" });
                }
                edges.push(diag(l, t, nw));
                edges.push(diag(t, r, ne));
                edges.push(horiz(l, r, h));
            }
        }
    }
    (shapes, edges)
}

fn hue_rgb(h: f64) -> String {
    let x = (h.fract() * 6.0).clamp(0.0, 5.999);
    let f = x.fract();
    let (r, g, b) = match x as u32 {
        0 => (1.0, f, 0.0),
        1 => (1.0 - f, 1.0, 0.0),
        2 => (0.0, 1.0, f),
        3 => (0.0, 1.0 - f, 1.0),
        4 => (f, 0.0, 1.0),
        _ => (1.0, 0.0, 1.0 - f),
    };
    format!("#{:02x}{:02x}{:02x}", (r * 200.0) as u8, (g * 200.0) as u8, (b * 200.0) as u8)
}

pub fn render<W: Weight>(p: &Puzzle<W>, cat: &Catalog<W>, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&json_value(p, cat)).expect("puzzle serializes"),
        Format::Svg => render_svg(p, cat),
        Format::Tikz => render_tikz(p, cat),
    }
}

fn render_svg<W: Weight>(p: &Puzzle<W>, cat: &Catalog<W>) -> String {
    let scale = 60.0;
    let pad = 20.0;
    let h = p.n as f64 * 3f64.sqrt() / 2.0;
    let tx = |(x, y): (f64, f64)| (pad + x * scale, pad + (h - y) * scale);
    let (shapes, edges) = geometry(p, cat);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" font-family="sans-serif" font-size="12">"#,
        2.0 * pad + p.n as f64 * scale,
        2.0 * pad + h * scale
    );
    for sh in &shapes {
        let pts: Vec<String> = sh.poly.iter().map(|&q| tx(q)).map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
        let _ = writeln!(s, r#"<polygon points="{}" fill="{}"/>"#, pts.join(" "), sh.fill);
    }
    for e in &edges {
        let (x1, y1) = tx(e.from);
        let (x2, y2) = tx(e.to);
        let c = hue_rgb(e.hue);
        let _ = writeln!(s, r#"<line x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}" stroke="black" stroke-width="1"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" fill="{c}" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
            (x1 + x2) / 2.0,
            (y1 + y2) / 2.0,
            xml_escape(&e.label)
        );
    }
    let _ = writeln!(s, "</svg>");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn render_tikz<W: Weight>(p: &Puzzle<W>, cat: &Catalog<W>) -> String {
    let (shapes, edges) = geometry(p, cat);
    let mut s = String::from("\\begin{tikzpicture}[scale=1]\n");
    for sh in &shapes {
        let color = if sh.fill == "#c8c8c8" { "gray!40" } else { "pink!60" };
        let pts: Vec<String> = sh.poly.iter().map(|(x, y)| format!("({x:.3},{y:.3})")).collect();
        let _ = writeln!(s, "\\fill[{color}] {} -- cycle;", pts.join(" -- "));
    }
    for e in &edges {
        let _ = writeln!(
            s,
            "\\draw ({:.3},{:.3}) -- node[font=\\scriptsize] {{${}$}} ({:.3},{:.3});",
            e.from.0,
            e.from.1,
            e.label.replace('_', "\\_"),
            e.to.0,
            e.to.1
        );
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}
