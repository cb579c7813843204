use lrc::code::{
    d_opt, distance_by_rank, exact_distance, min_distance, repair, sphere_volume, verify_locality,
    Budget,
};
use lrc::construct::{construct_almost_optimal, Constructed, LrcParams};
use lrc::format;
use lrc::linalg::{circuits, Matrix};
use lrc::transforms::puncture;
use lrc::{Error, Field, LinearCode};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ORDERS: [u32; 10] = [2, 3, 4, 5, 7, 8, 9, 16, 27, 256];

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(ORDERS.to_vec()).prop_map(|q| Field::with_order(q, None).unwrap())
}

fn element_triple() -> impl Strategy<Value = (Field, u32, u32, u32)> {
    field().prop_flat_map(|f| {
        let q = f.order();
        (Just(f), 0..q, 0..q, 0..q)
    })
}

/// A random full-rank generator with `q^k <= 2^12`.
fn small_code() -> impl Strategy<Value = LinearCode> {
    (field(), 1usize..=5, 1usize..=5, any::<u64>()).prop_filter_map(
        "rank deficient or too large",
        |(f, k, extra, seed)| {
            if (f.order() as u64).pow(k as u32) > 1 << 12 {
                return None;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            LinearCode::new(Matrix::random(&f, k, k + extra, &mut rng)).ok()
        },
    )
}

fn naive_distance(code: &LinearCode) -> usize {
    let q = code.field().order() as usize;
    let k = code.k();
    (1..q.pow(k as u32))
        .map(|mut index| {
            let msg: Vec<u32> = (0..k)
                .map(|_| {
                    let m = (index % q) as u32;
                    index /= q;
                    m
                })
                .collect();
            code.encode(&msg)
                .unwrap()
                .iter()
                .filter(|&&x| x != 0)
                .count()
        })
        .min()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms((f, a, b, c) in element_triple()) {
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.mul(a, b), f.mul_poly(a, b));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
            prop_assert_eq!(f.inv_fermat(a), Some(f.inv(a)));
            prop_assert_eq!(f.mul(f.div(b, a), a), b);
        }
    }

    #[test]
    fn distance_routes_agree(code in small_code()) {
        let naive = naive_distance(&code);
        prop_assert_eq!(distance_by_rank(code.generator()), naive);
        prop_assert_eq!(min_distance(&code, Budget::default()).unwrap(), naive);
    }

    #[test]
    fn subset_rank_fallback_is_exact(code in small_code()) {
        let m = exact_distance(&code, Budget { enumeration: 1 }).unwrap();
        prop_assert_eq!(m.value, naive_distance(&code));
    }

    #[test]
    fn code_files_round_trip(code in small_code()) {
        let text = format::write_code(&code);
        let back = format::parse_code(&text).unwrap();
        prop_assert_eq!(back.generator(), code.generator());
        prop_assert_eq!(format::write_code(&back), text);
    }

    #[test]
    fn circuits_are_minimal_dependencies(code in small_code()) {
        for c in circuits(code.generator(), 4) {
            prop_assert!(c.verify(code.generator()));
        }
    }

    #[test]
    fn sphere_volume_counts_words(q in 2u32..5, n in 1usize..6, s in 0usize..6) {
        let total = (q as usize).pow(n as u32);
        let brute = (0..total)
            .filter(|&w| {
                let mut w = w;
                let mut weight = 0;
                for _ in 0..n {
                    weight += usize::from(w % q as usize != 0);
                    w /= q as usize;
                }
                weight <= s
            })
            .count();
        prop_assert_eq!(sphere_volume(q, n, s), BigUint::from(brute));
    }

    /// For x >= c_j >= 0: Π (x - c_j) >= x^m - (Σ c_j) x^(m-1).
    #[test]
    fn product_lower_bound(x in 0i128..2000, fracs in prop::collection::vec(0.0f64..=1.0, 1..8)) {
        let cs: Vec<i128> = fracs.iter().map(|f| (f * x as f64).floor() as i128).collect();
        let m = cs.len() as u32;
        let product: i128 = cs.iter().map(|c| x - c).product();
        let sum: i128 = cs.iter().sum();
        prop_assert!(product >= x.pow(m) - sum * x.pow(m - 1));
    }
}

/// `None` when a small field runs out of retries; such seeds are skipped.
fn constructed(
    n: usize,
    k: usize,
    r: usize,
    delta: usize,
    q: u32,
    seed: u64,
) -> Option<Constructed> {
    let p = LrcParams::new(n, k, r, delta).unwrap();
    let f = Field::with_order(q, None).unwrap();
    construct_almost_optimal(&p, &f, None, seed, 32, Budget::default()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn repair_restores_admissible_erasures(seed in 0u64..1000, msg in prop::collection::vec(0u32..64, 4), picks in prop::collection::vec(any::<bool>(), 8)) {
        let c = constructed(8, 4, 2, 3, 64, seed);
        prop_assume!(c.is_some());
        let c = c.unwrap();
        let word = c.code.encode(&msg).unwrap();
        // at most two erasures per block of four
        let mut received: Vec<Option<u32>> = word.iter().map(|&x| Some(x)).collect();
        for block in c.assignment.blocks() {
            for &j in block.iter().filter(|&&j| picks[j - 1]).take(2) {
                received[j - 1] = None;
            }
        }
        let out = repair(&c.code, &c.assignment, &received, 3).unwrap();
        prop_assert_eq!(&out.word, &word);
        prop_assert!(out.max_reads() <= 2);
    }

    #[test]
    fn overloaded_block_is_refused(seed in 0u64..1000, block in 0usize..2) {
        let c = constructed(8, 4, 2, 3, 64, seed);
        prop_assume!(c.is_some());
        let c = c.unwrap();
        let word = c.code.encode(&[1, 2, 3, 4]).unwrap();
        let mut received: Vec<Option<u32>> = word.iter().map(|&x| Some(x)).collect();
        for &j in c.assignment.blocks()[block].iter().take(3) {
            received[j - 1] = None;
        }
        let refused = matches!(
            repair(&c.code, &c.assignment, &received, 3),
            Err(Error::RepairImpossible { .. })
        );
        prop_assert!(refused);
    }

    #[test]
    fn puncture_keeps_distance_and_locality(seed in 0u64..1000, coord in 1usize..=8) {
        let c = constructed(8, 4, 2, 3, 16, seed);
        prop_assume!(c.is_some());
        let c = c.unwrap();
        let d = min_distance(&c.code, Budget::default()).unwrap();
        let (out, sets) = puncture(&c.code, &c.assignment, Some(coord)).unwrap();
        prop_assert_eq!((out.n(), out.k()), (7, 3));
        prop_assert!(min_distance(&out, Budget::default()).unwrap() >= d);
        prop_assert!(verify_locality(&out, &sets, 2, 3).all_pass());
    }

    #[test]
    fn constructed_codes_respect_the_bound(seed in 0u64..1000, shape in 0usize..3) {
        let (n, k, r, delta, q) = [(8, 4, 2, 3, 16), (10, 4, 2, 3, 16), (9, 5, 3, 2, 8)][shape];
        let c = constructed(n, k, r, delta, q, seed);
        prop_assume!(c.is_some());
        let c = c.unwrap();
        let d = distance_by_rank(c.code.generator());
        prop_assert!(d >= c.report.floor);
        prop_assert!(d as i64 <= d_opt(n, k, r, delta).unwrap());
    }
}
