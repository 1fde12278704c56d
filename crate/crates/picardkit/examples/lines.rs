//! Writes the cycle files under `data/`: lines on quadric and cubic
//! surfaces over F_2 and F_3, paired by proper intersection numbers
//! computed over the field where the lines are defined.
//!
//! `cargo run -p picardkit --example lines -- <name>` with name one of
//! `quadric-split-f2`, `quadric-split-f3`, `quadric-norm-f2`,
//! `quadric-norm-f3`, `cubic`, `cubic-f4`.

use picardkit::formats::{ActionGenerator, ActionSpec, CycleFile};
use picardkit_core::ffield::make_field;
use picardkit_core::lattice::{self, from_i64};
use picardkit_core::polysys::{proper_intersection_number, HomIdeal, PolyRing, TermOrder};
use serde_json::Value;

struct Line {
    name: String,
    eqs: [String; 2],
}

fn line(name: &str, a: &str, b: &str) -> Line {
    Line { name: name.to_string(), eqs: [a.to_string(), b.to_string()] }
}

/// Intersection numbers of every row line against every column line.
fn pairings(p: u64, e: u32, surface: &str, rows: &[&Line], cols: &[&Line]) -> Vec<Vec<i64>> {
    let ring = PolyRing::new(make_field(p, e).unwrap(), 4, TermOrder::DegRevLex);
    let x = HomIdeal::parse(ring.clone(), &[surface]).unwrap();
    let ideal = |l: &Line| HomIdeal::parse(ring.clone(), &[&l.eqs[0], &l.eqs[1]]).unwrap();
    rows.iter()
        .map(|r| cols.iter().map(|c| proper_intersection_number(&x, &ideal(r), &ideal(c)).unwrap() as i64).collect())
        .collect()
}

fn cycle_file(rows: &[&Line], cols: &[&Line], m: Vec<Vec<i64>>, frobenius: Option<Vec<usize>>) -> CycleFile {
    let action = match frobenius {
        Some(perm) if perm.iter().enumerate().any(|(i, &j)| i != j) => ActionSpec {
            generators: vec![ActionGenerator::Permutation(perm)],
            relations: vec![String::from("g0^2")],
        },
        _ => ActionSpec::default(),
    };
    CycleFile {
        basis_cycles: cols.iter().map(|l| l.name.clone()).collect(),
        pairings: m.iter().map(|r| r.iter().map(|&v| Value::from(v)).collect()).collect(),
        cycle_names: Some(rows.iter().map(|l| l.name.clone()).collect()),
        action,
        candidates: Vec::new(),
    }
}

/// `x0 x3 = m1 m2` with the four lines `{x0 = 0, m_i = 0}`, `{x3 = 0, m_i = 0}`.
fn quadric(p: u64, e: u32, surface: &str, m1: &str, m2: &str, conjugate: bool) -> CycleFile {
    let a0 = line("A0", "x0", m2);
    let b0 = line("B0", "x0", m1);
    let a1 = line("A1", m1, "x3");
    let b1 = line("B1", m2, "x3");
    let rows = [&a1, &b1];
    let cols = [&a0, &b0];
    let m = pairings(p, e, surface, &rows, &cols);
    cycle_file(&rows, &cols, m, conjugate.then(|| vec![1, 0]))
}

/// The 27 lines `{x_i + c x_j = 0, x_k + d x_l = 0}` of the Fermat cubic
/// over F_4, `c, d` cube roots of unity. Over F_2 Frobenius squares `c`
/// and `d`; over F_4 every line is rational.
fn cubic(split: bool) -> CycleFile {
    let units = ["1", "[0,1]", "[1,1]"];
    let square = [0usize, 2, 1];
    let splits = [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)];
    let mut lines = Vec::new();
    let mut keys = Vec::new();
    for (s, &(i, j, k, l)) in splits.iter().enumerate() {
        for c in 0..3 {
            for d in 0..3 {
                let name = format!("L{i}{j}{k}{l}_{c}{d}");
                lines.push(line(&name, &format!("x{i} + {}*x{j}", units[c]), &format!("x{k} + {}*x{l}", units[d])));
                keys.push((s, c, d));
            }
        }
    }
    let frob: Vec<usize> =
        keys.iter().map(|&(s, c, d)| keys.iter().position(|&k| k == (s, square[c], square[d])).unwrap()).collect();
    let all: Vec<&Line> = lines.iter().collect();
    let surface = "x0^3 + x1^3 + x2^3 + x3^3";
    // the diagonal (self-intersection) is not a proper intersection and is never used
    let mut full = vec![vec![0i64; 27]; 27];
    for i in 0..27 {
        for j in i + 1..27 {
            let v = pairings(2, 2, surface, &[all[i]], &[all[j]])[0][0];
            full[i][j] = v;
            full[j][i] = v;
        }
    }
    // rows: a Frobenius-stable set of 7 lines whose pairing against the
    // other 20 has rank 7; fixed lines first, then conjugate pairs
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for i in 0..27 {
        if frob[i] >= i {
            orbits.push(if frob[i] == i { vec![i] } else { vec![i, frob[i]] });
        }
    }
    let mut chosen: Option<Vec<usize>> = None;
    let n = orbits.len();
    'search: for mask in 0u32..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).flat_map(|b| orbits[b].clone()).collect();
        if set.len() != 7 {
            continue;
        }
        let cols: Vec<usize> = (0..27).filter(|i| !set.contains(i)).collect();
        let m: Vec<Vec<i64>> = set.iter().map(|&r| cols.iter().map(|&c| full[r][c]).collect()).collect();
        if lattice::rank(&from_i64(&m)) == 7 {
            chosen = Some(set);
            break 'search;
        }
    }
    let rows_idx = chosen.expect("some stable set of seven lines is independent");
    let cols_idx: Vec<usize> = (0..27).filter(|i| !rows_idx.contains(i)).collect();
    let rows: Vec<&Line> = rows_idx.iter().map(|&i| &lines[i]).collect();
    let cols: Vec<&Line> = cols_idx.iter().map(|&i| &lines[i]).collect();
    let m: Vec<Vec<i64>> = rows_idx.iter().map(|&r| cols_idx.iter().map(|&c| full[r][c]).collect()).collect();
    let perm: Vec<usize> = cols_idx.iter().map(|&c| cols_idx.iter().position(|&d| d == frob[c]).unwrap()).collect();
    cycle_file(&rows, &cols, m, (!split).then_some(perm))
}

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();
    let f = match which.as_str() {
        "quadric-split-f2" => quadric(2, 1, "x0*x3 - x1*x2", "x1", "x2", false),
        "quadric-split-f3" => quadric(3, 1, "x0*x3 - x1*x2", "x1", "x2", false),
        // x1^2 + x1 x2 + x2^2 = (x1 + a x2)(x1 + a^2 x2) over F_4
        "quadric-norm-f2" => quadric(2, 2, "x0*x3 + x1^2 + x1*x2 + x2^2", "x1 + [0,1]*x2", "x1 + [1,1]*x2", true),
        // x1^2 + x2^2 = (x1 + i x2)(x1 - i x2) over F_9 = F_3[i]
        "quadric-norm-f3" => quadric(3, 2, "x0*x3 - x1^2 - x2^2", "x1 + [0,1]*x2", "x1 + [0,2]*x2", true),
        "cubic" => cubic(false),
        "cubic-f4" => cubic(true),
        other => {
            eprintln!("unknown cycle file {other:?}");
            std::process::exit(2);
        }
    };
    println!("{}", serde_json::to_string_pretty(&f).unwrap());
}
