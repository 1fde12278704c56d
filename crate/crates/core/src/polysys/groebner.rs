//! Buchberger's algorithm with the normal selection strategy and both
//! Buchberger criteria.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{divides, lcm, MultiPoly, PolyRing};
use crate::field::Field;

/// Fully reduce `f` modulo `basis` (every term, not only the leading one).
pub fn reduce<F: Field>(ring: &PolyRing<F>, f: &MultiPoly<F::Elem>, basis: &[MultiPoly<F::Elem>]) -> MultiPoly<F::Elem> {
    let field = &ring.field;
    let mut p = f.clone();
    let mut rem_terms = Vec::new();
    while let Some((m, c)) = p.leading().cloned() {
        let divisor = basis
            .iter()
            .find(|g| g.leading_monomial().is_some_and(|lm| divides(lm, &m)));
        match divisor {
            Some(g) => {
                let (lm, lc) = g.leading().unwrap();
                let shift: Vec<u32> = m.iter().zip(lm).map(|(a, b)| a - b).collect();
                let factor = field.div(&c, lc).unwrap();
                p = ring.sub(&p, &ring.mul_term(g, &shift, &factor));
            }
            None => {
                rem_terms.push((m, c));
                p.terms.remove(0);
            }
        }
    }
    MultiPoly { terms: rem_terms }
}

fn s_polynomial<F: Field>(ring: &PolyRing<F>, a: &MultiPoly<F::Elem>, b: &MultiPoly<F::Elem>) -> MultiPoly<F::Elem> {
    let (ma, ca) = a.leading().unwrap();
    let (mb, cb) = b.leading().unwrap();
    let l = lcm(ma, mb);
    let sa: Vec<u32> = l.iter().zip(ma).map(|(x, y)| x - y).collect();
    let sb: Vec<u32> = l.iter().zip(mb).map(|(x, y)| x - y).collect();
    let f = &ring.field;
    let ta = ring.mul_term(a, &sa, &f.inv(ca).unwrap());
    let tb = ring.mul_term(b, &sb, &f.inv(cb).unwrap());
    ring.sub(&ta, &tb)
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Reduced Gröbner basis of the ideal generated by `gens`, monic and sorted
/// by increasing leading monomial.
pub fn groebner<F: Field>(ring: &PolyRing<F>, gens: &[MultiPoly<F::Elem>]) -> Vec<MultiPoly<F::Elem>> {
    let mut g: Vec<MultiPoly<F::Elem>> = Vec::new();
    for f in gens {
        let r = reduce(ring, &ring.convert(f), &g);
        if !r.is_zero() {
            g.push(ring.monic(&r));
        }
    }
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..g.len() {
        for i in 0..j {
            pairs.insert((i, j));
        }
    }
    while !pairs.is_empty() {
        if g.iter().any(|p| p.leading_monomial().is_some_and(|m| m.iter().all(|&e| e == 0))) {
            return alloc::vec![ring.one()];
        }
        // normal strategy: smallest lcm first, ties by pair index
        let &(i, j) = pairs
            .iter()
            .min_by(|a, b| {
                let la = lcm(g[a.0].leading_monomial().unwrap(), g[a.1].leading_monomial().unwrap());
                let lb = lcm(g[b.0].leading_monomial().unwrap(), g[b.1].leading_monomial().unwrap());
                ring.order.cmp(&la, &lb).then_with(|| a.cmp(b))
            })
            .unwrap();
        pairs.remove(&(i, j));
        let li = g[i].leading_monomial().unwrap().clone();
        let lj = g[j].leading_monomial().unwrap().clone();
        if coprime(&li, &lj) {
            continue;
        }
        let l = lcm(&li, &lj);
        let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && divides(g[k].leading_monomial().unwrap(), &l)
                && !pairs.contains(&key(i, k))
                && !pairs.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(ring, &g[i], &g[j]);
        let r = reduce(ring, &s, &g);
        if !r.is_zero() {
            let idx = g.len();
            g.push(ring.monic(&r));
            for k in 0..idx {
                pairs.insert((k, idx));
            }
        }
    }
    if g.iter().any(|p| p.leading_monomial().is_some_and(|m| m.iter().all(|&e| e == 0))) {
        return alloc::vec![ring.one()];
    }
    interreduce(ring, g)
}

fn interreduce<F: Field>(ring: &PolyRing<F>, g: Vec<MultiPoly<F::Elem>>) -> Vec<MultiPoly<F::Elem>> {
    // minimal basis: drop elements whose leading monomial is divisible by another's
    let mut g = g;
    g.sort_by(|a, b| ring.order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    let mut minimal: Vec<MultiPoly<F::Elem>> = Vec::new();
    for p in g {
        let lm = p.leading_monomial().unwrap();
        if !minimal.iter().any(|q| divides(q.leading_monomial().unwrap(), lm)) {
            minimal.push(p);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<_> = minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, q)| q.clone()).collect();
        let r = reduce(ring, &minimal[k], &others);
        reduced.push(ring.monic(&r));
    }
    reduced.sort_by(|a, b| ring.order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    reduced
}

/// Buchberger's criterion: every S-polynomial reduces to zero.
pub fn is_groebner_basis<F: Field>(ring: &PolyRing<F>, g: &[MultiPoly<F::Elem>]) -> bool {
    for j in 0..g.len() {
        for i in 0..j {
            let s = s_polynomial(ring, &g[i], &g[j]);
            if !reduce(ring, &s, g).is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;
    use crate::field::Rationals;
    use crate::polysys::{HomIdeal, TermOrder};

    fn ring(n: usize) -> PolyRing<Rationals> {
        PolyRing::new(Rationals, n, TermOrder::DegRevLex)
    }

    #[test]
    fn principal_ideal() {
        let r = ring(2);
        let gb = groebner(&r, &[r.parse("x0").unwrap()]);
        assert_eq!(gb, alloc::vec![r.parse("x0").unwrap()]);
    }

    #[test]
    fn unit_ideal() {
        let r = ring(3);
        let gb = groebner(&r, &[r.parse("x0^2").unwrap(), r.parse("1").unwrap()]);
        assert_eq!(gb, alloc::vec![r.one()]);
    }

    #[test]
    fn twisted_cubic_style_ideal_satisfies_buchberger_criterion() {
        let r = ring(3);
        let gens = [r.parse("x0^2 - x1*x2").unwrap(), r.parse("x0*x1 - x2^2").unwrap()];
        let gb = groebner(&r, &gens);
        assert!(is_groebner_basis(&r, &gb));
        for f in &gens {
            assert!(reduce(&r, f, &gb).is_zero());
        }
        // each basis element lies in the ideal: reduce against the input's basis
        assert!(gb.len() >= 3);
        // idempotence
        assert_eq!(groebner(&r, &gb), gb);
    }

    #[test]
    fn lex_and_degrevlex_generate_same_ideal() {
        let r = ring(4);
        let gens: alloc::vec::Vec<_> =
            ["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"].iter().map(|s| r.parse(s).unwrap()).collect();
        let gb = groebner(&r, &gens);
        let rl = r.with_order(TermOrder::Lex);
        let gbl = groebner(&rl, &gens);
        assert!(is_groebner_basis(&rl, &gbl));
        for f in &gb {
            assert!(reduce(&rl, &rl.convert(f), &gbl).is_zero());
        }
        for f in &gbl {
            assert!(reduce(&r, &r.convert(f), &gb).is_zero());
        }
    }

    #[test]
    fn finite_field_basis() {
        let f3 = make_field(3, 1).unwrap();
        let r = PolyRing::new(f3, 3, TermOrder::DegRevLex);
        let mut i = HomIdeal::parse(r.clone(), &["x0^2 + x1^2 + x2^2", "x0*x1"]).unwrap();
        let gb = i.basis().to_vec();
        assert!(is_groebner_basis(&r, &gb));
    }
}
