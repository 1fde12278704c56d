use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use picardkit_core::lattice::{
    build_n, determinant, from_i64, identity, independence_certificate, invariants_rank, mul, permutation_matrix,
    saturate, saturation_index, snf, unimodular_inverse, AlgorithmB, CertificateKind, GLattice, IntMatrix,
    LatticeError, PipelineStatus, RankCertificate, Witness,
};
use picardkit_core::qmat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, bound: i64) -> IntMatrix {
    (0..r).map(|_| (0..c).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect()).collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for last in (k - 1)..n {
        for mut c in combinations(last, k - 1) {
            c.push(last);
            out.push(c);
        }
    }
    out
}

/// gcd of all k x k minors.
fn determinantal_divisor(m: &IntMatrix, k: usize) -> BigInt {
    let r = m.len();
    let c = m[0].len();
    let mut g = BigInt::zero();
    for rows in combinations(r, k) {
        for cols in combinations(c, k) {
            let minor: IntMatrix = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect();
            g = g.gcd(&determinant(&minor));
        }
    }
    g
}

#[test]
fn snf_against_determinantal_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..500 {
        let (r, c) = if case % 2 == 0 {
            (rng.gen_range(1..=4), rng.gen_range(1..=4))
        } else {
            (rng.gen_range(1..=8), rng.gen_range(1..=8))
        };
        let a = random_matrix(&mut rng, r, c, if case % 3 == 0 { 3 } else { 20 });
        let s = snf(&a);
        assert_eq!(mul(&mul(&s.u, &a), &s.v), s.d);
        assert!(determinant(&s.u).abs().is_one());
        assert!(determinant(&s.v).abs().is_one());
        assert_eq!(mul(&s.v, &s.v_inv), identity(c));
        for i in 0..r {
            for j in 0..c {
                if i != j {
                    assert!(s.d[i][j].is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        assert!(f.iter().all(|x| x.is_positive()));
        if !f.is_empty() {
            let g = a.iter().flatten().fold(BigInt::zero(), |g, x| g.gcd(x));
            assert_eq!(f[0], g);
        }
        if r == c {
            let prod = f.iter().fold(BigInt::one(), |a, b| a * b);
            let det = determinant(&a).abs();
            assert_eq!(if f.len() == r { prod } else { BigInt::zero() }, det);
        }
        if r <= 4 && c <= 4 {
            let mut prev = BigInt::one();
            for (k, d) in f.iter().enumerate() {
                let dk = determinantal_divisor(&a, k + 1);
                assert_eq!(&dk, &(&prev * d));
                prev = dk;
            }
        }
    }
}

/// Coordinates of `v` in the row basis `b`, if it lies in the Q-span.
fn coords(v: &[BigInt], b: &IntMatrix) -> Option<Vec<BigRational>> {
    let a: Vec<Vec<BigRational>> = (0..v.len())
        .map(|j| b.iter().map(|row| BigRational::from_integer(row[j].clone())).collect())
        .collect();
    let rhs: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    qmat::solve(&a, &rhs)
}

fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    a.len() == b.len()
        && a.iter().all(|v| coords(v, b).is_some_and(|c| c.iter().all(|x| x.is_integer())))
        && b.iter().all(|v| coords(v, a).is_some_and(|c| c.iter().all(|x| x.is_integer())))
}

#[test]
fn saturation_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for case in 0..500 {
        let n = 5;
        let k = if case % 5 == 0 { rng.gen_range(1..=5) } else { 3 };
        let span = random_matrix(&mut rng, k, n, 6);
        let sat = saturate(&span, n).unwrap();
        assert_eq!(sat.len(), picardkit_core::lattice::rank(&span));
        // span inside the saturation, integrally
        let mut c_rows = Vec::new();
        for v in &span {
            let c = coords(v, &sat).unwrap();
            assert!(c.iter().all(|x| x.is_integer()));
            c_rows.push(c.iter().map(|x| x.to_integer()).collect::<Vec<_>>());
        }
        // the saturated basis is primitive: its maximal minors are coprime
        if !sat.is_empty() {
            assert!(determinantal_divisor(&sat, sat.len()).is_one());
        }
        // idempotent
        assert!(same_lattice(&saturate(&sat, n).unwrap(), &sat));
        // full row rank: index = |det| of the span in saturated coordinates
        if sat.len() == k {
            assert_eq!(determinant(&c_rows).abs(), saturation_index(&span));
        }
    }
}

fn signed_perm(rng: &mut ChaCha8Rng, k: usize) -> IntMatrix {
    let mut perm: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let mut m = permutation_matrix(&perm);
    for row in m.iter_mut() {
        if rng.gen_bool(0.3) {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    m
}

fn order(m: &IntMatrix) -> usize {
    let mut p = m.clone();
    let mut k = 1;
    while p != identity(m.len()) {
        p = mul(&p, m);
        k += 1;
    }
    k
}

#[test]
fn invariant_rank_matches_averaged_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let k = rng.gen_range(1..=5usize);
        // conjugate a signed-permutation group by a unimodular matrix
        let mut s = identity(k);
        for _ in 0..3 {
            if k < 2 {
                break;
            }
            let i = rng.gen_range(0..k);
            let j = (i + rng.gen_range(1..k)) % k;
            let mut e = identity(k);
            e[i][j] = BigInt::from(rng.gen_range(-2..=2));
            s = mul(&s, &e);
        }
        let s_inv = unimodular_inverse(&s).unwrap();
        let gens: Vec<IntMatrix> =
            (0..rng.gen_range(1..=2)).map(|_| mul(&mul(&s, &signed_perm(&mut rng, k)), &s_inv)).collect();
        let rels: Vec<String> = gens.iter().enumerate().map(|(i, g)| format!("g{i}^{}", order(g))).collect();
        let l = GLattice::new(k, gens, rels).unwrap();
        let elems = l.group_elements(100_000).unwrap();
        let trace_sum: BigInt = elems.iter().map(|g| (0..k).map(|i| g[i][i].clone()).sum::<BigInt>()).sum();
        let avg = BigRational::new(trace_sum, BigInt::from(elems.len()));
        assert_eq!(avg, BigRational::from_integer(BigInt::from(invariants_rank(&l))));
    }
}

#[test]
fn signed_permutation_of_order_four() {
    // e1 -> e2 -> -e1, e3 -> e4 -> e3
    let g = from_i64(&[vec![0, -1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]]);
    let l = GLattice::new(4, vec![g], vec!["g0^4".into()]).unwrap();
    assert_eq!(invariants_rank(&l), 1);
}

#[test]
fn build_n_examples() {
    let trivial = GLattice::trivial(3);
    let n = build_n(&identity(3), &trivial, Some(3)).unwrap();
    assert_eq!(n.basis, identity(3));
    assert_eq!(invariants_rank(&n.lattice), 3);
    // rulings swapped by Frobenius, pairing [[0,1],[1,0]]
    let y = GLattice::new(2, vec![permutation_matrix(&[1, 0])], vec!["g0^2".into()]).unwrap();
    let pair = from_i64(&[vec![0, 1], vec![1, 0]]);
    let n = build_n(&pair, &y, Some(2)).unwrap();
    assert_eq!(n.lattice.rank, 2);
    assert_eq!(invariants_rank(&n.lattice), 1);
    // duplicate row changes nothing
    let dup = from_i64(&[vec![0, 1], vec![1, 0], vec![0, 1]]);
    let n2 = build_n(&dup, &y, Some(2)).unwrap();
    assert_eq!(n2.basis, n.basis);
    assert!(matches!(build_n(&pair, &y, Some(1)), Err(LatticeError::RankMismatch { expected: 1, got: 2 })));
}

#[test]
fn class_map_is_injective_on_the_span() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let pair = random_matrix(&mut rng, 3, 5, 4);
        if picardkit_core::lattice::rank(&pair) < 3 {
            continue;
        }
        let n = build_n(&pair, &GLattice::trivial(5), Some(3)).unwrap();
        let images: Vec<Vec<BigInt>> = pair.iter().map(|v| n.class_map(v).unwrap()).collect();
        // independent rows map to independent coordinate vectors
        assert_eq!(picardkit_core::lattice::rank(&images), 3);
        // and the map is linear
        let sum: Vec<BigInt> = pair[0].iter().zip(&pair[1]).map(|(a, b)| a + b).collect();
        let lhs = n.class_map(&sum).unwrap();
        let rhs: Vec<BigInt> = images[0].iter().zip(&images[1]).map(|(a, b)| a + b).collect();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn algorithm_b_examples() {
    let labels = |k: usize| (0..k).map(|i| format!("c{i}")).collect::<Vec<_>>();
    let mut b = AlgorithmB::new(1, 1, String::new());
    let c = RankCertificate::lower_from(&from_i64(&[vec![1]]), &labels(1), &labels(1));
    assert_eq!(b.offer(c).unwrap(), PipelineStatus::Halted { rank: 1 });

    let mut b = AlgorithmB::new(1, 2, String::new());
    let one = RankCertificate::lower_from(&from_i64(&[vec![0, 1]]), &labels(1), &labels(2));
    assert_eq!(b.offer(one).unwrap(), PipelineStatus::Running { lower: 1, upper: 2 });
    let two = RankCertificate::lower_from(&from_i64(&[vec![0, 1], vec![1, 0]]), &labels(2), &labels(2));
    assert_eq!(b.offer(two).unwrap(), PipelineStatus::Halted { rank: 2 });

    let bogus = RankCertificate {
        kind: CertificateKind::Lower,
        value: 2,
        witness: Witness::Minor { labels: labels(2), partners: labels(2), matrix: from_i64(&[vec![1, 1], vec![1, 1]]) },
    };
    assert!(matches!(AlgorithmB::new(1, 5, String::new()).offer(bogus), Err(LatticeError::CertificateInvalid(_))));
}

#[test]
fn algorithm_b_is_monotone_and_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let v_mu = rng.gen_range(1..=5u64);
        let mut b = AlgorithmB::new(1, v_mu, String::new());
        for _ in 0..20 {
            let k = rng.gen_range(1..=6usize);
            let m = random_matrix(&mut rng, k, k, 2);
            let names: Vec<String> = (0..k).map(|i| format!("z{i}")).collect();
            let cert = RankCertificate::lower_from(&m, &names, &names);
            if cert.value == 0 {
                continue;
            }
            let before = b.lower();
            match b.offer(cert.clone()) {
                Ok(_) => assert!(b.lower() >= before && b.lower() <= v_mu),
                Err(LatticeError::CertificateInvalid(_)) => assert!(cert.value > v_mu),
                Err(e) => panic!("{e}"),
            }
        }
        assert!(b.history.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn independence_certificate_minor_is_nonsingular() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let m = random_matrix(&mut rng, r, c, 2);
        let c = independence_certificate(&m);
        assert_eq!(c.rank, picardkit_core::lattice::rank(&m));
        if c.rank > 0 {
            assert!(!determinant(&c.minor(&m)).is_zero());
        }
    }
}
