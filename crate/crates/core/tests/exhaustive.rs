use bucketprobe_core::exact::*;
use bucketprobe_core::table::*;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

const CAP: u64 = 1 << 12;

fn cases() -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for b in 1..=3 {
        for m in 1..=5usize {
            let mut n = 0usize;
            while (m as u64).pow(n as u32) <= CAP && n <= 12 {
                out.push((b, m, n));
                n += 1;
            }
        }
    }
    out
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[test]
fn overflow_matches_enumeration() {
    for (b, m, n) in cases() {
        let law = brute_force_enumerate(m, b, n, EnumStatistic::ParkingOverflow).unwrap();
        let exact = expected_overflow_exact(m as u64, n as u64, b as u64).unwrap();
        assert_eq!(law.mean(), exact, "b={b} m={m} n={n}");
    }
}

#[test]
fn displacement_matches_enumeration_for_every_heuristic() {
    for (b, m, n) in cases() {
        if n == 0 || n > b * m {
            continue;
        }
        let exact = expected_displacement_exact(m as u64, n as u64, b as u64).unwrap();
        for heuristic in Heuristic::ALL {
            let law = brute_force_enumerate(
                m,
                b,
                n,
                EnumStatistic::Displacement {
                    heuristic,
                    topology: Topology::Cyclic,
                },
            )
            .unwrap();
            assert_eq!(law.mean(), exact, "{heuristic:?} b={b} m={m} n={n}");
        }
    }
}

#[test]
fn block_law_matches_enumeration() {
    for (b, m, n) in cases() {
        if n >= b * m {
            continue;
        }
        let law = brute_force_enumerate(m, b, n, EnumStatistic::LastBlockLength).unwrap();
        let exact = block_law_exact(m, n, b).unwrap();
        for (k, p) in exact.iter().enumerate() {
            assert_eq!(&law.probability(k), p, "b={b} m={m} n={n} k={k}");
        }
        assert!(law.counts.len() <= exact.len());
        assert_eq!(law.mean(), expected_block_exact(m, n, b).unwrap());
        let pmf = block_pmf_exact(m, n, b).unwrap();
        let enumerated = law.pmf().unwrap();
        assert!(pmf.total_variation(&enumerated) < 1e-12);
    }
}

#[test]
fn last_bucket_counts_match_enumeration() {
    for (b, m, n) in cases() {
        let counter = ExactCounter::new(b, m, n).unwrap();
        for d in 0..b {
            let law = brute_force_enumerate(m, b, n, EnumStatistic::MoreThanDEmpty { d }).unwrap();
            let hits = law.counts.get(1).copied().unwrap_or(0);
            assert_eq!(
                counter.more_than_d_empty(m, n, d).unwrap(),
                &BigUint::from(hits),
                "b={b} m={m} n={n} d={d}"
            );
            if d == 0 {
                let full = law.counts[0];
                assert_eq!(hits + full, (m as u64).pow(n as u32));
            }
        }
    }
}

#[test]
fn fcfs_law_b1_matches_enumeration() {
    for m in 1..=5usize {
        for n in 1..=m {
            let law = brute_force_enumerate(
                m,
                1,
                n,
                EnumStatistic::Displacement {
                    heuristic: Heuristic::Fcfs,
                    topology: Topology::Cyclic,
                },
            )
            .unwrap();
            let exact = fcfs_exact_law_b1(m as u64, n as u64).unwrap();
            for k in 0..exact.len().max(law.counts.len()) {
                let e = exact.get(k).cloned().unwrap_or_else(BigRational::zero);
                assert_eq!(law.probability(k), e, "m={m} n={n} k={k}");
            }
            let pmf = fcfs_exact_pmf_b1(m as u64, n as u64).unwrap();
            let mean = expected_displacement_exact(m as u64, n as u64, 1).unwrap();
            assert!((pmf.mean() - mean.to_f64().unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn documented_small_values() {
    let law = brute_force_enumerate(2, 1, 2, EnumStatistic::ParkingOverflow).unwrap();
    assert_eq!(law.probability(0), rat(3, 4));
    assert_eq!(law.probability(1), rat(1, 4));
    assert_eq!(expected_overflow_exact(2, 2, 1).unwrap(), rat(1, 4));
    assert_eq!(expected_displacement_exact(2, 2, 1).unwrap(), rat(1, 4));
    let rh = brute_force_enumerate(
        3,
        2,
        4,
        EnumStatistic::Displacement {
            heuristic: Heuristic::RobinHood,
            topology: Topology::Cyclic,
        },
    )
    .unwrap();
    assert_eq!(rh.mean(), expected_displacement_exact(3, 4, 2).unwrap());
    assert_eq!(expected_block_exact(2, 1, 1).unwrap(), rat(2, 1));
    assert_eq!(expected_block_exact(1, 0, 1).unwrap(), rat(1, 1));
}

#[test]
fn unsuccessful_search_keys_extend_bucket_count() {
    for (b, m, n) in cases() {
        if n >= b * m {
            continue;
        }
        let u = brute_force_enumerate(m, b, n, EnumStatistic::UnsuccessfulSearch { bucket: 0 }).unwrap();
        let uk = brute_force_enumerate(m, b, n, EnumStatistic::UnsuccessfulSearchKeys { bucket: 0 }).unwrap();
        assert_eq!(u.total, uk.total);
        // U full buckets contribute exactly bU keys
        for (k, &c) in u.counts.iter().enumerate() {
            let band: u64 = uk.counts.iter().skip(b * k).take(b).sum();
            assert_eq!(band, c, "b={b} m={m} n={n} k={k}");
        }
    }
}
