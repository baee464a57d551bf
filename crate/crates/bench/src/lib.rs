//! Fixed inputs for the benchmarks in `benches/`.

use hurwitz_toda::combinat::partitions_of;
use hurwitz_toda::hurwitz::RamificationProfile;
use hurwitz_toda::Partition;

/// Every triple of cycle types of `S_d`.
pub fn profile_triples(d: u32) -> Vec<RamificationProfile> {
    let ps = partitions_of(d);
    let mut out = Vec::new();
    for a in &ps {
        for b in &ps {
            for c in &ps {
                out.push(
                    RamificationProfile::new(d, vec![a.clone(), b.clone(), c.clone()])
                        .expect("sizes agree"),
                );
            }
        }
    }
    out
}

/// A staircase `(k, k−1, …, 1)`.
pub fn staircase(k: u32) -> Partition {
    Partition::new((1..=k).rev().collect())
}
