use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use descpuzzle::almostsep::{self, AsLabels, AsTheory};
use descpuzzle::motivic::{self, Rule};
use descpuzzle::permcore::{almostsep_choices, almostsep_encode, overlap, sepdesc_choices, sepdesc_encode, Alphabet};
use descpuzzle::puzzlegrid::{self, Catalog, Exec, Format, Lbl, Puzzle};
use descpuzzle::schubring::oracle_constants;
use descpuzzle::sepdesc::{self, SepLabels, SepTheory};
use descpuzzle::{EncodedPair, Error, LabelString, LaurentPoly, Permutation, SchubertExpansion, Symbol, Theory};

#[derive(Parser, Serialize)]
#[command(name = "descpuzzle", version, about = "Schubert and Grothendieck structure constants by puzzles")]
struct Cli {
    /// print JSON instead of a table
    #[arg(long, global = true)]
    json: bool,
    /// worker threads for enumeration (1 = sequential)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Serialize)]
enum Cmd {
    /// expand a product of two basis classes
    Multiply(MultiplyArgs),
    /// enumerate puzzles for a boundary
    Puzzles(PuzzlesArgs),
    /// show the string encodings of a pair
    Encode(EncodeArgs),
    /// Euler characteristic of a triple intersection
    Euler(EulerArgs),
    /// compare puzzles with the divided-difference oracle on sampled pairs
    Verify(VerifyArgs),
}

#[derive(Args, Serialize)]
struct MultiplyArgs {
    #[arg(long)]
    pi: String,
    #[arg(long)]
    rho: String,
    #[arg(long, default_value = "H")]
    theory: Theory,
    #[arg(long, default_value = "auto")]
    rule: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "puzzle")]
    method: String,
    /// also run at this larger n and report terms that appear only there
    #[arg(long)]
    pad: Option<usize>,
}

#[derive(Args, Serialize)]
struct PuzzlesArgs {
    #[arg(long)]
    lambda: String,
    #[arg(long)]
    mu: String,
    #[arg(long)]
    nu: Option<String>,
    #[arg(long)]
    rule: Rule,
    #[arg(long, default_value = "H")]
    theory: Theory,
    #[arg(long)]
    k: Option<u8>,
    #[arg(long)]
    d: Option<u8>,
    /// write each puzzle to this path, numbered when there are several
    #[arg(long)]
    render: Option<PathBuf>,
    #[arg(long, default_value = "svg")]
    format: String,
}

#[derive(Args, Serialize)]
struct EncodeArgs {
    #[arg(long)]
    pi: String,
    #[arg(long)]
    rho: String,
    #[arg(long, default_value = "auto")]
    rule: String,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Serialize)]
struct EulerArgs {
    #[arg(long)]
    lambda: String,
    #[arg(long)]
    mu: String,
    /// bottom side, left to right
    #[arg(long)]
    nu: String,
    #[arg(long)]
    rule: Rule,
    #[arg(long)]
    k: Option<u8>,
    #[arg(long)]
    d: Option<u8>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    n: usize,
    /// a number, or "all"
    #[arg(long, default_value = "50")]
    samples: String,
    #[arg(long)]
    rule: Rule,
    #[arg(long, default_value = "H")]
    theory: Theory,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Fail {
    Input(String),
    Internal(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::MalformedBasis(_) | Error::ResidualNonzero(_) | Error::PoleHit => Fail::Internal(e.to_string()),
            _ => Fail::Input(e.to_string()),
        }
    }
}

type Res<T> = Result<T, Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        std::env::set_var("RAYON_NUM_THREADS", j.max(1).to_string());
    }
    let exec = match cli.jobs {
        Some(1) => Exec::Sequential,
        _ => Exec::Auto,
    };
    let request = serde_json::to_value(&cli).expect("request serializes");
    let out = match &cli.cmd {
        Cmd::Multiply(a) => multiply(a, exec),
        Cmd::Puzzles(a) => puzzles(a),
        Cmd::Encode(a) => encode(a),
        Cmd::Euler(a) => euler(a),
        Cmd::Verify(a) => verify(a, exec),
    };
    match out {
        Ok(Report { mut body, table, failed }) => {
            if cli.json {
                body["request"] = request;
                body["version"] = json!(env!("CARGO_PKG_VERSION"));
                println!("{}", serde_json::to_string_pretty(&body).unwrap());
            } else {
                print!("{table}");
            }
            if let Some(msg) = failed {
                eprintln!("{msg}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Fail::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Internal(m)) => {
            eprintln!("internal disagreement: {m}");
            ExitCode::from(3)
        }
    }
}

struct Report {
    body: Value,
    table: String,
    failed: Option<String>,
}

fn perm(s: &str) -> Res<Permutation> {
    s.parse().map_err(Fail::from)
}

/// Number of entries as written, so trailing fixed points still count toward n.
fn written_len(s: &str) -> usize {
    if s.contains(',') {
        s.split(',').count()
    } else {
        s.trim().chars().count()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Which {
    Sep,
    Almost,
}

/// Picks the rule and the orientation of the pair; the product is commutative.
fn choose(pi: &Permutation, rho: &Permutation, n: usize, rule: &str, theory: Theory) -> Res<(Which, Permutation, Permutation)> {
    let sep = |a: &Permutation, b: &Permutation| !sepdesc_choices(a, b, n).is_empty();
    let almost = |a: &Permutation, b: &Permutation| !almostsep_choices(a, b, n).is_empty();
    let orient = |ok: &dyn Fn(&Permutation, &Permutation) -> bool| {
        if ok(pi, rho) {
            Some((pi.clone(), rho.clone()))
        } else if ok(rho, pi) {
            Some((rho.clone(), pi.clone()))
        } else {
            None
        }
    };
    let which = match rule {
        "sepdesc" => Which::Sep,
        "almostsep" => Which::Almost,
        "auto" => {
            let over = overlap(pi, rho).1.min(overlap(rho, pi).1);
            if over <= 1 && orient(&sep).is_some() {
                Which::Sep
            } else {
                Which::Almost
            }
        }
        r => return Err(Fail::Input(format!("unknown rule {r}"))),
    };
    let pair = match which {
        Which::Sep => orient(&sep).ok_or_else(|| Fail::from(Error::NotSeparated(format!("{pi}, {rho}"))))?,
        Which::Almost => {
            if theory.is_equivariant() {
                return Err(Error::UnsupportedTheory(format!("{theory} for almost-separated descents")).into());
            }
            orient(&almost).ok_or_else(|| Fail::from(Error::NotAlmostSeparated(format!("{pi}, {rho}"))))?
        }
    };
    Ok((which, pair.0, pair.1))
}

struct Row {
    sigma: Permutation,
    nu: Option<String>,
    coefficient: LaurentPoly,
    count: Option<usize>,
}

fn puzzle_rows(which: Which, pi: &Permutation, rho: &Permutation, theory: Theory, n: usize, exec: Exec) -> Res<Vec<Row>> {
    let (e, counts, bottoms) = match which {
        Which::Sep => {
            let c = sepdesc::sepdesc_puzzles(pi, rho, theory, n, None, exec)?;
            (c.expansion, c.counts, c.bottoms)
        }
        Which::Almost => {
            let c = almostsep::almostsep_puzzles(pi, rho, AsTheory::of(theory)?, n, None, exec)?;
            (c.expansion, c.counts, c.bottoms)
        }
    };
    // σ with puzzles whose fugacities cancel still get a row
    let mut rows: BTreeMap<Permutation, Row> = BTreeMap::new();
    for (s, c) in counts {
        rows.insert(s.clone(), Row { sigma: s.clone(), nu: bottoms.get(&s).cloned(), coefficient: e.coeff(&s), count: Some(c) });
    }
    Ok(rows.into_values().filter(|r| !r.coefficient.is_zero()).collect())
}

/// One-line notation padded to n entries.
fn show(p: &Permutation, n: usize) -> String {
    let w: Vec<String> = p.word(n.max(p.size())).iter().map(|v| v.to_string()).collect();
    if w.len() > 9 {
        w.join(",")
    } else {
        w.concat()
    }
}

fn rows_json(rows: &[Row], n: usize) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| json!({"sigma": show(&r.sigma, n), "nu": r.nu, "coefficient": r.coefficient.to_string(), "puzzle_count": r.count}))
            .collect(),
    )
}

fn rows_table(rows: &[Row], n: usize) -> String {
    let mut t = format!("{:<12} {:<28} {}\n", "sigma", "coefficient", "puzzles");
    for r in rows {
        let c = r.count.map_or("-".to_string(), |c| c.to_string());
        let _ = writeln!(t, "{:<12} {:<28} {}", show(&r.sigma, n), r.coefficient.to_string(), c);
    }
    t
}

fn multiply(a: &MultiplyArgs, exec: Exec) -> Res<Report> {
    let (pi0, rho0) = (perm(&a.pi)?, perm(&a.rho)?);
    let n = a.n.unwrap_or(0).max(written_len(&a.pi)).max(written_len(&a.rho)).max(1);
    let (which, pi, rho) = choose(&pi0, &rho0, n, &a.rule, a.theory)?;
    let rule = if which == Which::Sep { "sepdesc" } else { "almostsep" };
    let mut body = json!({"rule": rule, "n": n});
    let (rows, residual) = match a.method.as_str() {
        "puzzle" => (puzzle_rows(which, &pi, &rho, a.theory, n, exec)?, None),
        "oracle" => {
            let o = oracle_constants(&pi, &rho, a.theory, n);
            let rows = o.coeffs.iter().map(|(s, c)| Row { sigma: s.clone(), nu: None, coefficient: c.clone(), count: None }).collect();
            (rows, Some(o.residual))
        }
        "both" => {
            let rows = puzzle_rows(which, &pi, &rho, a.theory, n, exec)?;
            let o = oracle_constants(&pi, &rho, a.theory, n);
            let mine: BTreeMap<_, _> = rows.iter().map(|r| (r.sigma.clone(), r.coefficient.clone())).collect();
            if mine != o.coeffs {
                return Err(Fail::Internal(format!("puzzles and oracle differ for {pi} · {rho} in {}", a.theory)));
            }
            body["agreement"] = json!(true);
            (rows, Some(o.residual))
        }
        m => return Err(Fail::Input(format!("unknown method {m}"))),
    };
    body["constants"] = rows_json(&rows, n);
    body["residual"] = json!(residual);
    let mut table = rows_table(&rows, n);
    if let Some(r) = residual {
        let _ = writeln!(table, "residual: {r}");
    }
    if a.method == "both" {
        table.push_str("puzzles and oracle agree\n");
    }
    if let Some(m) = a.pad {
        let big = puzzle_rows(which, &pi, &rho, a.theory, m.max(n), exec)?;
        let fresh: Vec<String> = big.iter().filter(|r| r.sigma.size() > n).map(|r| show(&r.sigma, m)).collect();
        let stable = big.iter().filter(|r| r.sigma.size() <= n).map(|r| (r.sigma.clone(), r.coefficient.clone())).collect::<BTreeMap<_, _>>()
            == rows.iter().map(|r| (r.sigma.clone(), r.coefficient.clone())).collect();
        body["padded"] = json!({"n": m.max(n), "constants": rows_json(&big, m.max(n)), "new_terms": fresh, "stable": stable});
        let _ = writeln!(table, "at n = {}: {} terms, {} new, S_{n} part unchanged: {stable}", m.max(n), big.len(), fresh.len());
    }
    Ok(Report { body, table, failed: None })
}

fn digits(s: &[Symbol]) -> Vec<u8> {
    s.iter().filter_map(|x| match x {
        Symbol::Digit(i) => Some(*i),
        Symbol::Blank => None,
    }).collect()
}

/// Builds the encoded pair for a boundary, inferring k and d when not given.
fn boundary_pair(rule: Rule, lambda: &str, mu: &str, k: Option<u8>, d: Option<u8>) -> Res<EncodedPair> {
    let l = descpuzzle::permcore::parse_symbols(lambda)?;
    let m = descpuzzle::permcore::parse_symbols(mu)?;
    if l.len() != m.len() {
        return Err(Error::BoundaryMismatch("sides of different lengths".into()).into());
    }
    let (ld, md) = (digits(&l), digits(&m));
    let n = l.len();
    match rule {
        Rule::SepDesc => {
            let k = k.or(md.iter().max().copied()).or(ld.iter().min().map(|x| x.saturating_sub(1))).unwrap_or(0);
            let d = d.or(ld.iter().max().copied()).unwrap_or(k).max(k);
            let lambda = LabelString::new(Alphabet::blank_then(k + 1, d), l)?;
            let mu = LabelString::new(Alphabet::then_blank(k), m)?;
            Ok(EncodedPair { lambda, mu, k, d, m: 0, n })
        }
        Rule::AlmostSep => {
            let k = k.or(ld.iter().max().copied()).or(md.iter().min().copied()).unwrap_or(0);
            let d = d.or(md.iter().max().copied()).unwrap_or(k).max(k);
            let lambda = LabelString::new(Alphabet::then_blank(k), l)?;
            let mu = LabelString::new(Alphabet::blank_then(k, d), m)?;
            let mm = lambda.count(Symbol::Digit(k));
            Ok(EncodedPair { lambda, mu, k, d, m: mm, n })
        }
    }
}

/// Reads σ and the printed bottom string off a puzzle's bottom labels.
type BottomKey = Box<dyn Fn(&[Lbl]) -> (Permutation, String)>;

fn puzzles(a: &PuzzlesArgs) -> Res<Report> {
    let pair = boundary_pair(a.rule, &a.lambda, &a.mu, a.k, a.d)?;
    let format: Format = a.format.parse()?;
    let (cat, ps, key): (Catalog<LaurentPoly>, Vec<Puzzle<LaurentPoly>>, BottomKey) = match a.rule {
        Rule::SepDesc => {
            let lab = SepLabels::new(pair.k, pair.d);
            let nu = a.nu.as_deref().map(|s| LabelString::parse(s, Alphabet::digits(0, pair.d))).transpose()?;
            let nu: Option<Vec<Lbl>> = nu.map(|s| digits(&s.letters).into_iter().map(Lbl::from).collect());
            let (cat, ps) = sepdesc::puzzles_for_pair(&pair, SepTheory::from(a.theory), nu.as_deref())?;
            (cat, ps, Box::new(move |s: &[Lbl]| (sepdesc::bottom_perm(s), sepdesc::bottom_string(lab, s).to_string())))
        }
        Rule::AlmostSep => {
            let lab = AsLabels::new(pair.k, pair.d);
            let nu = a.nu.as_deref().map(motivic::parse_horiz_string).transpose()?;
            let nu: Option<Vec<Lbl>> = nu.map(|v| v.into_iter().map(|h| lab.horiz_id(h)).collect());
            let (cat, ps) = almostsep::puzzles_for_pair(&pair, AsTheory::of(a.theory)?, nu.as_deref())?;
            (cat, ps, Box::new(move |s: &[Lbl]| (almostsep::bottom_perm(lab, s), almostsep::bottom_string(lab, s))))
        }
    };
    let mut groups: BTreeMap<Vec<Lbl>, (usize, LaurentPoly)> = BTreeMap::new();
    for p in &ps {
        let g = groups.entry(p.s.clone()).or_insert((0, LaurentPoly::zero()));
        g.0 += 1;
        g.1 = &g.1 + &p.fugacity;
    }
    let rows: Vec<Row> = groups
        .iter()
        .map(|(s, (c, f))| {
            let (sigma, nu) = key(s);
            Row { sigma, nu: Some(nu), coefficient: f.clone(), count: Some(*c) }
        })
        .collect();
    let mut table = format!("{} puzzles\n", ps.len());
    let mut t = format!("{:<20} {:<12} {:<20} {}\n", "nu", "sigma", "fugacity", "puzzles");
    for r in &rows {
        let _ = writeln!(t, "{:<20} {:<12} {:<20} {}", r.nu.as_deref().unwrap_or(""), show(&r.sigma, pair.n), r.coefficient.to_string(), r.count.unwrap_or(0));
    }
    table.push_str(&t);
    let mut body = json!({"total": ps.len(), "constants": rows_json(&rows, pair.n), "residual": Value::Null, "encoding": pair});
    if let Some(path) = &a.render {
        let files = write_renders(path, &ps, &cat, format)?;
        let _ = writeln!(table, "wrote {} file(s)", files.len());
        body["rendered"] = json!(files);
    }
    body["puzzles"] = Value::Array(ps.iter().map(|p| puzzlegrid::puzzle_json(p, &cat)).collect());
    Ok(Report { body, table, failed: None })
}

fn write_renders(path: &std::path::Path, ps: &[Puzzle<LaurentPoly>], cat: &Catalog<LaurentPoly>, format: Format) -> Res<Vec<String>> {
    let mut out = Vec::new();
    for (i, p) in ps.iter().enumerate() {
        let file = if ps.len() == 1 {
            path.to_path_buf()
        } else {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("puzzle");
            let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("svg");
            path.with_file_name(format!("{stem}-{}.{ext}", i + 1))
        };
        std::fs::write(&file, puzzlegrid::render(p, cat, format)).map_err(|e| Fail::Input(format!("{}: {e}", file.display())))?;
        out.push(file.display().to_string());
    }
    Ok(out)
}

fn encode(a: &EncodeArgs) -> Res<Report> {
    let (pi, rho) = (perm(&a.pi)?, perm(&a.rho)?);
    let n = a.n.unwrap_or(0).max(written_len(&a.pi)).max(written_len(&a.rho)).max(1);
    let mut encodings = Vec::new();
    let mut table = String::new();
    let want = |r: &str| a.rule == "auto" || a.rule == r;
    if !["auto", "sepdesc", "almostsep"].contains(&a.rule.as_str()) {
        return Err(Fail::Input(format!("unknown rule {}", a.rule)));
    }
    for (x, y) in [(&pi, &rho), (&rho, &pi)] {
        if want("sepdesc") {
            for r in sepdesc_choices(x, y, n) {
                let e = sepdesc_encode(x, y, n, Some(r))?;
                let _ = writeln!(table, "sepdesc   pi={x} rho={y} cut={r}: {}", describe(&e));
                encodings.push(json!({"rule": "sepdesc", "pi": x.to_string(), "rho": y.to_string(), "cut": r, "pair": e}));
            }
        }
        if want("almostsep") {
            for (r, s) in almostsep_choices(x, y, n) {
                let e = almostsep_encode(x, y, n, Some((r, s)))?;
                let _ = writeln!(table, "almostsep pi={x} rho={y} cuts=({r},{s}): {}", describe(&e));
                encodings.push(json!({"rule": "almostsep", "pi": x.to_string(), "rho": y.to_string(), "cuts": [r, s], "pair": e}));
            }
        }
        if pi == rho {
            break;
        }
    }
    if encodings.is_empty() {
        return Err(Error::NotAlmostSeparated(format!("{pi}, {rho}: neither rule applies")).into());
    }
    Ok(Report { body: json!({"encodings": encodings}), table, failed: None })
}

fn describe(e: &EncodedPair) -> String {
    let alpha = |s: &LabelString| s.alphabet.symbols().iter().map(|x| x.to_string()).collect::<Vec<_>>().join("<");
    format!("lambda={} over {{{}}}, mu={} over {{{}}}, k={}, d={}, m={}", e.lambda, alpha(&e.lambda), e.mu, alpha(&e.mu), e.k, e.d, e.m)
}

fn euler(a: &EulerArgs) -> Res<Report> {
    let pair = boundary_pair(a.rule, &a.lambda, &a.mu, a.k, a.d)?;
    let r = motivic::euler_characteristic(&pair.lambda, &pair.mu, &a.nu, a.rule)?;
    let table = format!("{} puzzles\ndim Y = {}\nchi = {}\n", r.puzzles, r.dim_y, r.chi);
    Ok(Report { body: json!({"puzzles": r.puzzles, "dim_y": r.dim_y, "chi": r.chi}), table, failed: None })
}

fn verify(a: &VerifyArgs, exec: Exec) -> Res<Report> {
    if a.rule == Rule::AlmostSep && a.theory.is_equivariant() {
        return Err(Error::UnsupportedTheory(format!("{} for almost-separated descents", a.theory)).into());
    }
    let n = a.n;
    let admissible = |x: &Permutation, y: &Permutation| match a.rule {
        Rule::SepDesc => !sepdesc_choices(x, y, n).is_empty(),
        Rule::AlmostSep => !almostsep_choices(x, y, n).is_empty(),
    };
    let all = Permutation::all(n);
    let mut pairs: Vec<(Permutation, Permutation)> = Vec::new();
    for x in &all {
        for y in &all {
            if admissible(x, y) {
                pairs.push((x.clone(), y.clone()));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    if a.samples != "all" {
        let k: usize = a.samples.parse().map_err(|_| Fail::Input(format!("bad sample count {}", a.samples)))?;
        pairs = pairs.choose_multiple(&mut rng, k.min(pairs.len())).cloned().collect();
    }
    let mut failures: Vec<(Permutation, Permutation)> = Vec::new();
    for (x, y) in &pairs {
        let mine: SchubertExpansion = match a.rule {
            Rule::SepDesc => sepdesc::sepdesc_puzzles(x, y, a.theory, n, None, exec)?.expansion,
            Rule::AlmostSep => almostsep::almostsep_puzzles(x, y, AsTheory::of(a.theory)?, n, None, exec)?.expansion,
        };
        if mine.coeffs != oracle_constants(x, y, a.theory, n).coeffs {
            failures.push((x.clone(), y.clone()));
        }
    }
    let passed = pairs.len() - failures.len();
    let mut table = format!("{} pairs checked, {} passed, {} failed\n", pairs.len(), passed, failures.len());
    let worst = failures.iter().min_by_key(|(x, y)| (x.length() + y.length(), x.clone(), y.clone()));
    let failed = worst.map(|(x, y)| {
        format!("reproduce with: descpuzzle multiply --pi {} --rho {} --theory {} --rule {} --n {n} --method both", x, y, a.theory, a.rule)
    });
    if let Some(f) = &failed {
        let _ = writeln!(table, "{f}");
    }
    let body = json!({
        "seed": a.seed,
        "checked": pairs.len(),
        "passed": passed,
        "failed": failures.len(),
        "failures": failures.iter().map(|(x, y)| json!({"pi": x.to_string(), "rho": y.to_string()})).collect::<Vec<_>>(),
        "pairs": pairs.iter().map(|(x, y)| [x.to_string(), y.to_string()]).collect::<Vec<_>>(),
    });
    Ok(Report { body, table, failed })
}
