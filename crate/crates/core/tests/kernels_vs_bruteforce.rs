//! Cross-module integration checks that are too heavy for unit tests:
//! the exact kernels against naive subset enumeration over every graph on
//! 8 vertices, and serialization round-trips driven through the catalog.

use rtlab::canon;
use rtlab::certify::{self, Budget};
use rtlab::graph::Graph;

/// Subset-enumeration clique number, independent of the branch-and-bound.
fn naive_omega(g: &Graph) -> usize {
    let n = g.n();
    let rows: Vec<u32> = (0..n).map(|v| g.neighbors(v).fold(0u32, |m, u| m | 1 << u)).collect();
    let mut best = 0;
    'subsets: for mask in 0u32..(1u32 << n) {
        if (mask.count_ones() as usize) <= best {
            continue;
        }
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if mask & !(1 << v) & !rows[v] != 0 {
                continue 'subsets;
            }
        }
        best = mask.count_ones() as usize;
    }
    best
}

#[test]
fn clique_and_alpha_match_bruteforce_on_all_graphs_up_to_eight() {
    let mut canon_budget = u64::MAX;
    let classes = canon::enumerate_classes(8, &|_| true, &mut canon_budget).unwrap();
    assert_eq!(classes.len(), 12346, "unlabeled graph count on 8 vertices");
    let mut budget = Budget::new(u64::MAX);
    for g in &classes {
        let (omega, cert) = certify::max_clique(g, &mut budget).unwrap();
        assert_eq!(omega, naive_omega(g));
        assert!(certify::validate_certificate(g, &cert));
        let (alpha, cert) = certify::independence_number(g, &mut budget).unwrap();
        assert_eq!(alpha, naive_omega(&g.complement()));
        assert!(certify::validate_certificate(g, &cert));
    }
}
