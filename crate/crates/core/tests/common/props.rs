//! Property checks shared by the property suite and the acceptance run.
//! Each function panics on the first violation.

use proptest::prelude::*;
use proptest::test_runner::TestRunner;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use secant::combin::SubsetTable;
use secant::field::{Field, PrimeField};
use secant::matrix::Matrix;
use secant::plucker::{plucker_embed, substituted_minor_row, substituted_minor_row_naive, PointMatrix, TangentPlan};
use secant::rank::{certified_rank, rank_exact, BackendMatrix, RankBackendConfig, ALTERNATE_PRIMES, DEFAULT_PRIME};
use secant::scan::{saturation_s, GrassmannClassifier};
use secant::terracini::{assemble, sample_points, tangent_block, RandomPointSource};

const P: u32 = 2_147_483_647;

fn random_point(rng: &mut ChaCha8Rng, field: &PrimeField, k: usize, n: usize) -> PointMatrix<u32> {
    let data = (0..(k + 1) * (n + 1)).map(|_| rng.gen_range(0..field.modulus())).collect();
    PointMatrix::new(k, n, Matrix::from_vec(k + 1, n + 1, data).unwrap()).unwrap()
}

// Leibniz expansion, independent of any elimination code.
fn leibniz(field: &PrimeField, m: &[Vec<u32>]) -> u32 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = field.zero();
    loop {
        let inversions =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let mut term = field.one();
        for (r, &c) in perm.iter().enumerate() {
            term = field.mul(term, m[r][c]);
        }
        total = if inversions % 2 == 0 { field.add(total, term) } else { field.sub(total, term) };
        // next permutation in lexicographic order
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    total
}

pub fn cofactor_fast_path_matches_naive_minors() {
    let field = PrimeField::new(P).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for instance in 0..1000 {
        let n = rng.gen_range(1..=9usize);
        let k = rng.gen_range(0..n);
        let a = random_point(&mut rng, &field, k, n);
        let table = SubsetTable::new(n, k).unwrap();
        let i = rng.gen_range(0..=k);
        let j = rng.gen_range(0..=n);
        let fast = substituted_minor_row(&field, &a, i, j, &table).unwrap();
        let naive = substituted_minor_row_naive(&field, &a, i, j, &table).unwrap();
        assert_eq!(fast, naive, "instance {instance}: G({k},{n}) i={i} j={j}");
        // spot-check one coordinate against the permutation expansion
        if k <= 4 {
            let o = rng.gen_range(0..table.len());
            let cols = table.subset(o);
            let m: Vec<Vec<u32>> = (0..=k)
                .map(|r| {
                    cols.iter()
                        .map(|&c| {
                            let c = c as usize;
                            if r == i {
                                u32::from(c == j)
                            } else {
                                a.row(r)[c]
                            }
                        })
                        .collect()
                })
                .collect();
            assert_eq!(fast[o], leibniz(&field, &m), "instance {instance}: coordinate {o}");
        }
    }
}

pub fn tangent_block_rank_is_cone_dimension() {
    let field = PrimeField::new(P).unwrap();
    for k in 1..=3usize {
        for n in k + 1..=9 {
            let plan = TangentPlan::new(n, k).unwrap();
            let mut src = RandomPointSource::new(field, (k * 100 + n) as u64);
            for trial in 0..20 {
                let a = src.next_point(&plan).unwrap();
                let r = rank_exact(&field, &tangent_block(&field, &a, &plan).unwrap());
                assert_eq!(r, (k + 1) * (n - k) + 1, "G({k},{n}) trial {trial}");
            }
        }
    }
}

fn embed(field: &PrimeField, rows: &[Vec<u32>], table: &SubsetTable) -> Vec<u32> {
    plucker_embed(field, &PointMatrix::from_rows(rows).unwrap(), table).unwrap().coords
}

/// Swapping rows negates, a repeated row gives zero, and each row enters
/// linearly.
pub fn plucker_is_alternating_and_multilinear(cases: u32) {
    let strategy = (any::<u64>(), (2usize..8).prop_flat_map(|n| (Just(n), 1usize..n)), 1u32..P);
    let mut runner = TestRunner::new(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(cases) });
    let result = runner.run(&strategy, |(seed, (n, k), c)| {
        let field = PrimeField::new(P).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = SubsetTable::new(n, k).unwrap();
        let rows: Vec<Vec<u32>> = (0..=k).map(|_| (0..=n).map(|_| rng.gen_range(0..P)).collect()).collect();
        let base = embed(&field, &rows, &table);
        let (i, j) = (rng.gen_range(0..=k), rng.gen_range(0..=k));

        if i != j {
            let mut swapped = rows.clone();
            swapped.swap(i, j);
            let neg: Vec<u32> = base.iter().map(|&x| field.neg(x)).collect();
            prop_assert_eq!(embed(&field, &swapped, &table), neg);
            let mut repeated = rows.clone();
            repeated[i] = rows[j].clone();
            prop_assert!(embed(&field, &repeated, &table).iter().all(|&x| x == 0));
        }

        let mut scaled = rows.clone();
        scaled[i].iter_mut().for_each(|x| *x = field.mul(*x, c));
        let expect: Vec<u32> = base.iter().map(|&x| field.mul(x, c)).collect();
        prop_assert_eq!(embed(&field, &scaled, &table), expect);

        let extra: Vec<u32> = (0..=n).map(|_| rng.gen_range(0..P)).collect();
        let mut other = rows.clone();
        other[i] = extra.clone();
        let mut summed = rows.clone();
        summed[i] = rows[i].iter().zip(&extra).map(|(&x, &y)| field.add(x, y)).collect();
        let lhs = embed(&field, &summed, &table);
        let rhs: Vec<u32> = base.iter().zip(embed(&field, &other, &table)).map(|(&x, y)| field.add(x, y)).collect();
        prop_assert_eq!(lhs, rhs);
        Ok(())
    });
    if let Err(e) = result {
        panic!("{e}");
    }
}

fn dims(k: usize, n: usize, s_max: usize, cfg: &RankBackendConfig) -> Vec<usize> {
    let c = GrassmannClassifier::new(k, n, cfg).unwrap();
    let mut ranker = c.ranker().unwrap();
    (1..=s_max).map(|s| ranker.rank(s).unwrap().rank - 1).collect()
}

pub fn duality_preserves_dimensions() {
    let cfg = RankBackendConfig::exact(31);
    for n in 3..=9usize {
        for k in 1..=(n - 1) / 2 {
            let dual = n - k - 1;
            if dual == k {
                continue;
            }
            let s_max = saturation_s(k, n) + 1;
            assert_eq!(saturation_s(dual, n), saturation_s(k, n));
            assert_eq!(dims(k, n, s_max, &cfg), dims(dual, n, s_max, &cfg), "G({k},{n}) vs G({dual},{n})");
        }
    }
}

pub fn float_and_exact_backends_agree() {
    for seed in [1u64, 2, 3] {
        let exact = RankBackendConfig::exact(seed);
        let float = RankBackendConfig::float(seed);
        for n in 3..=8usize {
            for k in 1..=2usize.min((n - 1) / 2) {
                let s_max = saturation_s(k, n) + 1;
                assert_eq!(dims(k, n, s_max, &exact), dims(k, n, s_max, &float), "G({k},{n}) seed {seed}");
            }
        }
    }
}

pub fn primes_do_not_change_dimensions() {
    let primes = [DEFAULT_PRIME, ALTERNATE_PRIMES[0], ALTERNATE_PRIMES[2]];
    for n in 3..=9usize {
        for k in 1..=(n - 1) / 2 {
            let s_max = saturation_s(k, n) + 1;
            let all: Vec<Vec<usize>> =
                primes.iter().map(|&p| dims(k, n, s_max, &RankBackendConfig::exact(5).with_prime(p))).collect();
            assert!(all.windows(2).all(|w| w[0] == w[1]), "G({k},{n}): {all:?}");
        }
    }
}

pub fn dimensions_grow_with_s_until_filled() {
    let cfg = RankBackendConfig::exact(8);
    for n in 3..=10usize {
        for k in 1..=(n - 1) / 2 {
            let d = dims(k, n, saturation_s(k, n) + 2, &cfg);
            let ambient = secant::scan::ambient_dim(k, n);
            for w in d.windows(2) {
                assert!(w[0] <= w[1]);
                assert!(w[0] < w[1] || w[0] == ambient, "G({k},{n}) stalls below N: {d:?}");
            }
            assert_eq!(d[0], secant::scan::grassmannian_dim(k, n));
        }
    }
}

pub fn incremental_ranker_matches_from_scratch_assembly() {
    let cfg = RankBackendConfig::exact(77).with_trials(2);
    for (k, n, s) in [(1, 5, 2), (2, 6, 3), (3, 7, 4), (2, 8, 4), (2, 7, 3)] {
        let plan = TangentPlan::new(n, k).unwrap();
        let scratch = certified_rank(
            |t| {
                let field = PrimeField::new(t.prime)?;
                let mut src = RandomPointSource::new(field, t.seed);
                let pts = sample_points(&mut src, k, n, s)?;
                Ok(BackendMatrix::Exact { field, matrix: assemble(&field, &pts, &plan, t.seed, "exact")?.data })
            },
            &cfg,
            None,
        )
        .unwrap();
        let c = GrassmannClassifier::new(k, n, &cfg).unwrap();
        let mut ranker = c.ranker().unwrap();
        for t in 0..cfg.trials {
            assert_eq!(ranker.trial_rank(t, s).unwrap(), scratch.per_trial_ranks[t], "({k},{n},{s}) trial {t}");
        }
    }
}
