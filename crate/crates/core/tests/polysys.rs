use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use picardkit_core::ffield::make_field;
use picardkit_core::field::Rationals;
use picardkit_core::polysys::{
    dimension_degree, groebner, hilbert_polynomial, hilbert_series_numerator, is_groebner_basis,
    proper_intersection_number, reduce, HomIdeal, PolyRing, TermOrder,
};
use proptest::prelude::*;

fn qring(n: usize) -> PolyRing<Rationals> {
    PolyRing::new(Rationals, n, TermOrder::DegRevLex)
}

fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

fn rank(rows: Vec<Vec<BigRational>>) -> usize {
    let mut rows = rows;
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let piv = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &piv;
                for j in 0..ncols {
                    let v = &rows[r][j] * &f;
                    rows[i][j] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// dim (S/I)_t by the rank of the degree-t part of I, spanned by monomial
/// multiples of the generators.
fn graded_dimension(ring: &PolyRing<Rationals>, gens: &[&str], t: u32) -> usize {
    let cols = monomials(ring.nvars, t);
    let index: BTreeMap<Vec<u32>, usize> = cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for g in gens {
        let g = ring.parse(g).unwrap();
        let dg = g.total_degree().unwrap();
        if dg > t {
            continue;
        }
        for m in monomials(ring.nvars, t - dg) {
            let p = ring.mul_term(&g, &m, &BigRational::one());
            let mut row = vec![BigRational::zero(); cols.len()];
            for (mono, c) in p.terms() {
                row[index[mono]] = c.clone();
            }
            rows.push(row);
        }
    }
    cols.len() - rank(rows)
}

#[test]
fn twisted_cubic_graded_pieces_match_linear_algebra() {
    let gens = ["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"];
    let r = qring(4);
    let i = HomIdeal::parse(r.clone(), &gens).unwrap();
    let hs = hilbert_series_numerator(&i);
    let hp = hs.hilbert_polynomial();
    for t in 1..=6u32 {
        let direct = graded_dimension(&r, &gens, t);
        assert_eq!(direct, 3 * t as usize + 1);
        assert_eq!(hs.hilbert_function(t as i64), BigInt::from(direct));
        assert_eq!(hp.eval_int(t as i64), BigRational::from_integer(BigInt::from(direct)));
    }
}

const CORPUS: &[(usize, &[&str])] = &[
    (3, &[]),
    (3, &["x0^2 + x1^2 + x2^2"]),
    (3, &["x0*x1", "x1*x2"]),
    (3, &["x0^2 - x1*x2", "x1^3 - x2^3"]),
    (4, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]),
    (4, &["x0*x3 - x1*x2"]),
    (4, &["x0^3 + x1^3 + x2^3 + x3^3"]),
    (4, &["x0", "x1"]),
    (4, &["x0*x1", "x2*x3"]),
    (4, &["x0^2 - x1*x3", "x0*x1 - x2*x3", "x1^2 - x0*x2"]),
    (5, &["x0*x1 - x2*x3", "x0^2 + x4^2"]),
    (5, &["x0*x4 - x1*x3", "x2^2 - x0*x1"]),
];

#[test]
fn hilbert_polynomial_is_order_invariant() {
    for (n, gens) in CORPUS {
        let i = HomIdeal::parse(qring(*n), gens).unwrap();
        let lex = i.with_order(TermOrder::Lex);
        let a = hilbert_polynomial(&i);
        let b = hilbert_polynomial(&lex);
        assert_eq!(a, b, "{gens:?}");
        assert!(a.is_integer_valued_from(0));
        // Hilbert function agrees with the polynomial from the regularity index on
        let hs = hilbert_series_numerator(&i);
        let reg = hs.regularity_index();
        for t in reg..reg + 5 {
            assert_eq!(BigRational::from_integer(hs.hilbert_function(t)), a.eval_int(t), "{gens:?} at {t}");
        }
    }
}

#[test]
fn groebner_is_idempotent_and_generates_the_ideal() {
    for (n, gens) in CORPUS {
        let r = qring(*n);
        let i = HomIdeal::parse(r.clone(), gens).unwrap();
        let gb = i.groebner_basis();
        assert!(is_groebner_basis(&r, &gb));
        assert_eq!(groebner(&r, &gb), gb);
        for g in i.generators() {
            assert!(reduce(&r, g, &gb).is_zero());
        }
    }
}

#[test]
fn projective_spaces_over_finite_fields() {
    let f = make_field(5, 1).unwrap();
    for n in 1..=4usize {
        let i = HomIdeal::new(PolyRing::new(f.clone(), n + 1, TermOrder::Lex), vec![]).unwrap();
        let dd = dimension_degree(&i);
        assert_eq!((dd.dim, dd.degree), (n as i64, Some(1)));
    }
}

fn random_form(ring: &PolyRing<Rationals>, d: u32, coeffs: &[i64]) -> picardkit_core::polysys::MultiPoly<BigRational> {
    let terms = monomials(ring.nvars, d)
        .into_iter()
        .zip(coeffs.iter().cycle())
        .map(|(m, &c)| (m, BigRational::from_integer(BigInt::from(c))))
        .collect();
    ring.from_terms(terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bezout_in_the_plane(
        d1 in 1u32..=3,
        d2 in 1u32..=3,
        c1 in proptest::collection::vec(-5i64..=5, 10),
        c2 in proptest::collection::vec(-5i64..=5, 10),
    ) {
        let r = qring(3);
        let f = random_form(&r, d1, &c1);
        let g = random_form(&r, d2, &c2);
        prop_assume!(!f.is_zero() && !g.is_zero());
        let plane = HomIdeal::new(r.clone(), vec![]).unwrap();
        let zf = HomIdeal::new(r.clone(), vec![f]).unwrap();
        let zg = HomIdeal::new(r.clone(), vec![g]).unwrap();
        // coprime forms meet in a zero-dimensional scheme
        let meet = dimension_degree(&zf.sum(&zg));
        prop_assume!(meet.dim == 0);
        prop_assert_eq!(proper_intersection_number(&plane, &zf, &zg), Ok((d1 * d2) as u64));
    }

    #[test]
    fn hilbert_polynomial_is_integer_valued(
        d in 1u32..=3,
        c in proptest::collection::vec(-3i64..=3, 10),
    ) {
        let r = qring(4);
        let f = random_form(&r, d, &c);
        prop_assume!(!f.is_zero());
        let i = HomIdeal::new(r, vec![f]).unwrap();
        let hp = hilbert_polynomial(&i);
        prop_assert!(hp.is_integer_valued_from(-3));
        prop_assert_eq!(hp.degree(), Some(2));
        prop_assert_eq!(hp.scheme_degree(), Some(BigInt::from(d)));
    }
}
