//! Dimension, degree, Jacobian smoothness and proper intersection numbers.
//!
//! Limitation: these are statements about the whole scheme cut out by an
//! ideal. Nothing here computes associated primes, so a dimension check
//! cannot tell a pure codimension-one subscheme from one with embedded or
//! lower-dimensional components.

use alloc::vec::Vec;

use num_traits::ToPrimitive;

use super::{hilbert_series_numerator, HomIdeal, MultiPoly, PolyError, PolyRing};
use crate::field::Field;

/// Projective dimension (`-1` for the empty scheme) and degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimDeg {
    pub dim: i64,
    pub degree: Option<u64>,
}

pub fn dimension_degree<F: Field>(ideal: &HomIdeal<F>) -> DimDeg {
    let hp = hilbert_series_numerator(ideal).hilbert_polynomial();
    match hp.degree() {
        None => DimDeg { dim: -1, degree: None },
        Some(d) => DimDeg {
            dim: d as i64,
            degree: hp.scheme_degree().and_then(|v| v.to_u64()),
        },
    }
}

/// Degree of the zero-dimensional scheme `Z ∩ Y` on `X`.
///
/// `Z` and `Y` must have complementary dimensions on `X`; the result is `0`
/// when they are disjoint. A positive-dimensional intersection is reported
/// as [`PolyError::ImproperIntersection`]. The scheme-theoretic degree is
/// the intersection number when `Z` and `Y` are Cohen–Macaulay, which holds
/// for the curves on surfaces used here.
pub fn proper_intersection_number<F: Field>(
    x: &HomIdeal<F>,
    z: &HomIdeal<F>,
    y: &HomIdeal<F>,
) -> Result<u64, PolyError> {
    let dx = dimension_degree(x).dim;
    let dz = dimension_degree(&x.sum(z)).dim;
    let dy = dimension_degree(&x.sum(y)).dim;
    if dz + dy != dx {
        return Err(PolyError::DimensionMismatch { dim_x: dx, dim_z: dz, dim_y: dy });
    }
    let w = x.sum(z).sum(y);
    let dd = dimension_degree(&w);
    match dd.dim {
        -1 => Ok(0),
        0 => Ok(dd.degree.unwrap_or(0)),
        d => Err(PolyError::ImproperIntersection(d)),
    }
}

fn determinant<F: Field>(ring: &PolyRing<F>, m: &[Vec<MultiPoly<F::Elem>>]) -> MultiPoly<F::Elem> {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPoly::zero();
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<_>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, e)| e.clone()).collect())
            .collect();
        let term = ring.mul(&m[0][col], &determinant(ring, &minor));
        acc = if col % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// All nonzero `c × c` minors of the Jacobian matrix of the generators.
pub fn jacobian_minors<F: Field>(ideal: &HomIdeal<F>, c: usize) -> Vec<MultiPoly<F::Elem>> {
    let ring = ideal.ring();
    let gens = ideal.generators();
    let jac: Vec<Vec<_>> = gens
        .iter()
        .map(|g| (0..ring.nvars).map(|i| ring.derivative(g, i)).collect())
        .collect();
    let mut out = Vec::new();
    if c > gens.len() || c > ring.nvars {
        return out;
    }
    for rows in subsets(gens.len(), c) {
        for cols in subsets(ring.nvars, c) {
            let sub: Vec<Vec<_>> = rows.iter().map(|&r| cols.iter().map(|&j| jac[r][j].clone()).collect()).collect();
            let d = determinant(ring, &sub);
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    out
}

/// Jacobian criterion: the singular locus (the ideal plus the maximal
/// minors at the codimension of the scheme) is empty.
///
/// The empty scheme counts as smooth. The caller is responsible for
/// equidimensionality.
pub fn smoothness_check<F: Field>(ideal: &HomIdeal<F>) -> bool {
    let dim = dimension_degree(ideal).dim;
    if dim < 0 {
        return true;
    }
    let c = (ideal.ambient_dim() as i64 - dim) as usize;
    let minors = jacobian_minors(ideal, c);
    let mut gens = ideal.generators().to_vec();
    gens.extend(minors);
    let sing = HomIdeal::new(ideal.ring().clone(), gens).expect("minors of homogeneous forms are homogeneous");
    dimension_degree(&sing).dim < 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;
    use crate::field::Rationals;
    use crate::polysys::TermOrder;

    fn qideal(n: usize, gens: &[&str]) -> HomIdeal<Rationals> {
        HomIdeal::parse(PolyRing::new(Rationals, n, TermOrder::DegRevLex), gens).unwrap()
    }

    #[test]
    fn dimension_degree_examples() {
        assert_eq!(dimension_degree(&qideal(3, &["1"])), DimDeg { dim: -1, degree: None });
        assert_eq!(dimension_degree(&qideal(3, &["x0^2 + x1^2 + x2^2"])), DimDeg { dim: 1, degree: Some(2) });
        let two_conics = qideal(3, &["x0^2 - x1^2 - x2^2", "x0^2 + 2*x1^2 - 3*x2^2"]);
        assert_eq!(dimension_degree(&two_conics), DimDeg { dim: 0, degree: Some(4) });
        for n in 0..=4 {
            assert_eq!(dimension_degree(&qideal(n + 1, &[])), DimDeg { dim: n as i64, degree: Some(1) });
        }
    }

    #[test]
    fn intersection_numbers() {
        let plane = qideal(3, &[]);
        let l1 = qideal(3, &["x0"]);
        let l2 = qideal(3, &["x1"]);
        assert_eq!(proper_intersection_number(&plane, &l1, &l2), Ok(1));
        let conic = qideal(3, &["x0^2 + x1^2 - x2^2"]);
        assert_eq!(proper_intersection_number(&plane, &conic, &l1), Ok(2));
        assert_eq!(
            proper_intersection_number(&plane, &l1, &l1),
            Err(PolyError::ImproperIntersection(1))
        );
        assert!(matches!(
            proper_intersection_number(&plane, &plane, &l1),
            Err(PolyError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn lines_and_plane_sections_on_a_quadric() {
        // x0*x3 = x1*x2; a ruling line and a plane section (conic)
        let quad = qideal(4, &["x0*x3 - x1*x2"]);
        let line = qideal(4, &["x0", "x1"]);
        let other_ruling = qideal(4, &["x0", "x2"]);
        let same_ruling = qideal(4, &["x2", "x3"]);
        let conic = qideal(4, &["x0 + x1 + x2 + 2*x3"]);
        assert_eq!(proper_intersection_number(&quad, &line, &other_ruling), Ok(1));
        assert_eq!(proper_intersection_number(&quad, &line, &same_ruling), Ok(0));
        assert_eq!(proper_intersection_number(&quad, &line, &conic), Ok(1));
        let conic2 = qideal(4, &["x0 - x1 + 3*x2 - x3"]);
        assert_eq!(proper_intersection_number(&quad, &conic, &conic2), Ok(2));
    }

    #[test]
    fn smoothness() {
        assert!(smoothness_check(&qideal(3, &["x0^2 + x1^2 + x2^2"])));
        assert!(!smoothness_check(&qideal(3, &["x0*x1"])));
        let f3 = make_field(3, 1).unwrap();
        let r3 = PolyRing::new(f3, 4, TermOrder::DegRevLex);
        let fermat = HomIdeal::parse(r3, &["x0^4 + x1^4 + x2^4 + x3^4"]).unwrap();
        assert!(smoothness_check(&fermat));
        let f2 = make_field(2, 1).unwrap();
        let r2 = PolyRing::new(f2, 4, TermOrder::DegRevLex);
        let fermat2 = HomIdeal::parse(r2, &["x0^4 + x1^4 + x2^4 + x3^4"]).unwrap();
        assert!(!smoothness_check(&fermat2));
        let twisted = qideal(4, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]);
        assert!(smoothness_check(&twisted));
        let cone = qideal(4, &["x0^2 + x1^2 - x2^2"]);
        assert!(!smoothness_check(&cone));
    }
}
