use std::collections::BTreeMap;

use num_bigint::BigInt;
use picardkit_core::galmod::{
    kummer_size_check, lprime, minkowski_trivial, rank_upper_bounds, torsion_from_sizes, FiniteLModule, GalmodError,
    SizeTable,
};
use picardkit_core::qmat;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn id(k: usize) -> Vec<Vec<i64>> {
    (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect()
}

/// Fixed points and their ℓ^m-torsion by walking every element.
fn brute_fixed(md: &FiniteLModule) -> Vec<u64> {
    let l = md.ell as i64;
    let mods: Vec<i64> = md.invariant_factors.iter().map(|&e| l.pow(e)).collect();
    let k = mods.len();
    let mut counts = vec![0u64; md.n as usize + 1];
    let mut x = vec![0i64; k];
    loop {
        let fixed = md.actions.iter().all(|m| {
            (0..k).all(|i| {
                let y: i64 = (0..k).map(|j| m[i][j] * x[j]).sum();
                (y - x[i]).rem_euclid(mods[i]) == 0
            })
        });
        if fixed {
            for (lev, c) in counts.iter_mut().enumerate() {
                if (0..k).all(|j| (x[j] * l.pow(lev as u32)).rem_euclid(mods[j]) == 0) {
                    *c += 1;
                }
            }
        }
        let mut j = 0;
        loop {
            if j == k {
                return counts;
            }
            x[j] += 1;
            if x[j] < mods[j] {
                break;
            }
            x[j] = 0;
            j += 1;
        }
    }
}

fn log_l(mut x: u64, l: u64) -> u64 {
    let mut k = 0;
    while x > 1 {
        assert_eq!(x % l, 0);
        x /= l;
        k += 1;
    }
    k
}

fn random_module(rng: &mut ChaCha8Rng) -> FiniteLModule {
    loop {
        let ell = [2u64, 3][rng.gen_range(0..2)];
        let n = rng.gen_range(1..=3u32);
        let k = rng.gen_range(1..=3usize);
        let mut e: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=n)).collect();
        e.sort_by(|a, b| b.cmp(a));
        let size: u64 = e.iter().map(|&x| ell.pow(x)).product();
        if size > 10_000 {
            continue;
        }
        let gens = rng.gen_range(1..=2);
        let actions: Vec<Vec<Vec<i64>>> = (0..gens)
            .map(|_| {
                (0..k)
                    .map(|i| {
                        (0..k)
                            .map(|j| {
                                let need = e[i].saturating_sub(e[j]);
                                (ell as i64).pow(need) * rng.gen_range(0..9)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        if let Ok(md) = FiniteLModule::new(ell, n, e, actions) {
            return md;
        }
    }
}

#[test]
fn invariants_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let md = random_module(&mut rng);
        let inv = md.invariants().unwrap();
        let brute = brute_fixed(&md);
        assert_eq!(inv.log_order, log_l(brute[md.n as usize], md.ell), "{md:?}");
        for lev in 1..=md.n {
            let from_structure: u64 = inv.exponents.iter().map(|&e| e.min(lev) as u64).sum();
            assert_eq!(from_structure, log_l(brute[lev as usize], md.ell), "{md:?} level {lev}");
        }
    }
}

#[test]
fn random_action_over_z9() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    while done < 20 {
        let m: Vec<Vec<i64>> = (0..3).map(|_| (0..3).map(|_| rng.gen_range(0..9)).collect()).collect();
        let Ok(md) = FiniteLModule::free(3, 2, 3, vec![m]) else { continue };
        let brute = brute_fixed(&md);
        assert_eq!(md.invariants().unwrap().log_order, log_l(brute[2], 3));
        done += 1;
    }
}

/// `T_{ℓ^n} = (Z/ℓ^n)^k ⊕ Z/ℓ^{min(n,t)}` with `F` on the free part and the
/// identity on the torsion.
fn planted_family(ell: u64, f: &[Vec<i64>], t: u32, n_max: u32) -> Vec<FiniteLModule> {
    let k = f.len();
    (1..=n_max)
        .map(|n| {
            let tors = t.min(n);
            let mut e = vec![n; k];
            let mut act = f.to_vec();
            if tors > 0 {
                e.push(tors);
                for row in act.iter_mut() {
                    row.push(0);
                }
                let mut last = vec![0; k + 1];
                last[k] = 1;
                act.push(last);
            }
            FiniteLModule::new(ell, n, e, vec![act]).unwrap()
        })
        .collect()
}

fn q_rank_of_fixed(f: &[Vec<i64>]) -> u64 {
    let k = f.len();
    let rows: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| BigInt::from(f[i][j] - i64::from(i == j))).collect())
        .collect();
    (k - qmat::rank(&qmat::from_int_rows(&rows))) as u64
}

#[test]
fn planted_rank_is_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..60 {
        let ell = [2u64, 3, 5][rng.gen_range(0..3)];
        let lp = lprime(ell) as i64;
        let k = rng.gen_range(1..=3usize);
        let f: Vec<Vec<i64>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let e: i64 = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(-2..=2) };
                        i64::from(i == j) + lp * e
                    })
                    .collect()
            })
            .collect();
        let t = rng.gen_range(0..=2u32);
        let n_max = if ell == 5 { 24 } else { 30 };
        let fam = planted_family(ell, &f, t, n_max);
        let r = q_rank_of_fixed(&f);
        let level = fam.iter().find(|m| m.n == picardkit_core::galmod::lprime_level(ell)).cloned();
        let b = rank_upper_bounds(&fam, t, level.as_ref()).unwrap();
        assert!(b.levels.iter().all(|x| x.2 >= r), "{f:?} t={t}");
        assert_eq!(b.min, Some(r), "{f:?} t={t} levels {:?}", b.levels);
    }
}

#[test]
fn swap_family_violates_the_level_hypothesis() {
    let swap = vec![vec![0, 1], vec![1, 0]];
    let fam: Vec<FiniteLModule> = (1..=4).map(|n| FiniteLModule::free(3, n, 2, vec![swap.clone()]).unwrap()).collect();
    assert!(matches!(rank_upper_bounds(&fam, 0, None), Err(GalmodError::HypothesisViolated(_))));
    // the fixed part is still the diagonal
    assert_eq!(fam[3].invariants().unwrap().log_order, 4);
}

#[test]
fn trivial_action_and_torsion_only() {
    let fam: Vec<FiniteLModule> = (1..=5).map(|n| FiniteLModule::free(2, n, 3, vec![id(3)]).unwrap()).collect();
    let b = rank_upper_bounds(&fam, 0, None).unwrap();
    assert!(b.levels.iter().all(|x| x.2 == 3));
    // no free part: every level is Z/ℓ^{min(n,t)} with t = n_max
    let fam: Vec<FiniteLModule> = (1..=4).map(|n| FiniteLModule::new(3, n, vec![n], vec![id(1)]).unwrap()).collect();
    let b = rank_upper_bounds(&fam[..], 4, Some(&fam[0])).unwrap();
    assert_eq!(b.min, None);
    let b = rank_upper_bounds(&fam[..], 3, None).unwrap();
    assert_eq!(b.min, Some(4));
}

/// `log_ℓ #G[ℓ^n]` for `G = ⊕ Z/ℓ^e` by counting elements.
fn brute_torsion_log(ell: u64, exps: &[u32], n: u32) -> u64 {
    let mods: Vec<u64> = exps.iter().map(|&e| ell.pow(e)).collect();
    let mut total = 1u64;
    for &m in &mods {
        let killed = (0..m).filter(|x| (x * ell.pow(n)) % m == 0).count() as u64;
        total *= killed;
    }
    log_l(total, ell)
}

fn forward_table(ell: u64, betti: &[u64], tors: &[Vec<u32>], levels: u32) -> SizeTable {
    let mut sizes = BTreeMap::new();
    for j in 0..betti.len() {
        for n in 1..=levels {
            let here = brute_torsion_log(ell, &tors[j], n);
            let above = tors.get(j + 1).map_or(0, |t| brute_torsion_log(ell, t, n));
            sizes.insert((j as u32, n), n as u64 * betti[j] + here + above);
        }
    }
    SizeTable { ell, betti: betti.to_vec(), sizes }
}

#[test]
fn planted_torsion_examples() {
    let betti = [1u64, 0, 2, 0, 1];
    let mut tors = vec![Vec::new(); 5];
    tors[2] = vec![2, 1];
    let t = forward_table(3, &betti, &tors, 4);
    let r = torsion_from_sizes(&t, 2).unwrap();
    assert!(r.complete);
    assert_eq!(r.group.exponents, vec![2, 1]);
    tors[2] = vec![1, 1, 1];
    let t = forward_table(2, &betti, &tors, 3);
    assert_eq!(torsion_from_sizes(&t, 2).unwrap().group.exponents, vec![1, 1, 1]);
    assert!(kummer_size_check(&t, &betti, &tors));
    let mut bad = t.clone();
    *bad.sizes.get_mut(&(1, 2)).unwrap() += 1;
    assert!(!kummer_size_check(&bad, &betti, &tors));
}

#[test]
fn short_table_gives_a_lower_bound() {
    let betti = [1u64, 0, 1];
    let tors = vec![vec![], vec![3], vec![]];
    let t = forward_table(2, &betti, &tors, 2);
    let r = torsion_from_sizes(&t, 1).unwrap();
    assert!(!r.complete);
    assert_eq!(r.unresolved, Some((1, 2)));
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let k = a.len();
    (0..k).map(|i| (0..k).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

/// Block-diagonal finite-order matrix conjugated by a random unimodular one.
fn random_finite_order(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let blocks: [Vec<Vec<i64>>; 6] = [
        vec![vec![1]],
        vec![vec![-1]],
        vec![vec![0, -1], vec![1, -1]],
        vec![vec![0, -1], vec![1, 0]],
        vec![vec![0, -1], vec![1, 1]],
        vec![vec![0, 1], vec![1, 0]],
    ];
    let mut p: Vec<Vec<i64>> = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let b = &blocks[rng.gen_range(0..blocks.len())];
        let off = p.len();
        let size = off + b.len();
        for row in p.iter_mut() {
            row.resize(size, 0);
        }
        for r in b {
            let mut row = vec![0; off];
            row.extend(r);
            p.push(row);
        }
    }
    let k = p.len();
    let mut s = id(k);
    let mut s_inv = id(k);
    for _ in 0..3 {
        if k < 2 {
            break;
        }
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k);
        if i == j {
            j = (j + 1) % k;
        }
        let c = rng.gen_range(-2..=2);
        let mut e = id(k);
        e[i][j] = c;
        let mut e_inv = id(k);
        e_inv[i][j] = -c;
        s = matmul(&s, &e);
        s_inv = matmul(&e_inv, &s_inv);
    }
    matmul(&matmul(&s, &p), &s_inv)
}

#[test]
fn minkowski_on_finite_order_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let m = random_finite_order(&mut rng);
        for ell in [2u64, 3, 5] {
            if minkowski_trivial(&m, ell) {
                assert_eq!(m, id(m.len()));
            }
        }
    }
    // I + 3E with E nilpotent has infinite order
    let m = vec![vec![1, 3, 0], vec![0, 1, 3], vec![0, 0, 1]];
    assert!(minkowski_trivial(&m, 3));
    let mut pw = m.clone();
    for _ in 0..100 {
        assert_ne!(pw, id(3));
        pw = matmul(&pw, &m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn torsion_round_trip(
        ell in prop_oneof![Just(2u64), Just(3)],
        d in 1usize..=2,
        raw in proptest::collection::vec(proptest::collection::vec(1u32..=3, 0..=2), 5),
        b in proptest::collection::vec(0u64..=3, 5),
    ) {
        let top = 2 * d;
        let mut betti: Vec<u64> = b[..=top].to_vec();
        betti[0] = 1;
        betti[top] = 1;
        let mut tors: Vec<Vec<u32>> = raw[..=top].to_vec();
        tors[0].clear();
        for t in tors.iter_mut() {
            t.sort_by(|a, b| b.cmp(a));
        }
        let table = forward_table(ell, &betti, &tors, 5);
        prop_assert!(kummer_size_check(&table, &betti, &tors));
        for (i, t) in tors.iter().enumerate() {
            let r = torsion_from_sizes(&table, i as u32).unwrap();
            prop_assert!(r.complete);
            prop_assert_eq!(&r.group.exponents, t);
        }
    }
}
