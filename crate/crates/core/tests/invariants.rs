//! Cross-module invariants: consistency between the presentation builders,
//! the certificates, and the verdict engine over parameter grids.

use stiefel_core::arith::odd_primes_in;
use stiefel_core::spaces::{retruncate, space_table, SpaceDescriptor};
use stiefel_core::table::{compare_tables, kunneth, poincare_polynomial};
use stiefel_core::verdict::{Conclusion, TheoremId};
use stiefel_core::{
    complete_symmetric_sum, full_verdict, stable_split_certificate, theorem_a_bound,
};

/// At p > n with the leading symmetric sum a unit, the weighted quotient has
/// the same table as the diagonal one.
#[test]
fn weighted_table_reduces_to_diagonal_at_unit_leading_sum() {
    let tuples: Vec<Vec<i64>> = vec![vec![1, 2], vec![3, 4], vec![1, -2], vec![2, 5]];
    for l in &tuples {
        for n in 2..=5u32 {
            let k = 2u32;
            for p in odd_primes_in(n as u64 + 1, 13) {
                let h = complete_symmetric_sum(l, (n - k + 1) as usize).unwrap();
                if (&h % num_bigint::BigInt::from(p)) == num_bigint::BigInt::from(0) {
                    continue;
                }
                let top = (2 * n * k - k * k - 1) + 2;
                let plw = space_table(&SpaceDescriptor::PLW { n, k, l: l.clone() }, p, top).unwrap();
                let pw = space_table(&SpaceDescriptor::PW { n, k }, p, top).unwrap();
                assert!(
                    compare_tables(&plw, &pw).unwrap().matches(),
                    "weighted table differs at n={n}, k={k}, p={p}, l={l:?}"
                );
            }
        }
    }
}

/// Large-prime theorem pass implies the square-root theorem hypotheses pass
/// whenever p > n + 1.
#[test]
fn bound_hierarchy_consistency() {
    for n in 1..=12u32 {
        for k in 1..=n {
            for p in odd_primes_in(3, 37) {
                let a_pass = num_rational::BigRational::from_integer(p.into())
                    > theorem_a_bound(n, k).unwrap();
                if !(a_pass && p > n as u64 + 1) {
                    continue;
                }
                let v = full_verdict(&SpaceDescriptor::PW { n, k }, p).unwrap();
                let c = v
                    .theorems
                    .iter()
                    .find(|t| t.id == TheoremId::CUnstable)
                    .expect("square-root theorem evaluated");
                assert!(
                    c.applies,
                    "large-prime theorem passes but square-root hypotheses fail at n={n}, k={k}, p={p}"
                );
            }
        }
    }
}

/// Any unstable product verdict implies the stable certificate at the same
/// parameters when p > n.
#[test]
fn unstable_verdict_implies_stable_certificate() {
    for n in 1..=9u32 {
        for k in 1..=n {
            for p in odd_primes_in(n as u64 + 1, 31) {
                let space = SpaceDescriptor::PW { n, k };
                let v = full_verdict(&space, p).unwrap();
                let unstable = matches!(
                    v.strongest,
                    Some(TheoremId::ALargePrime) | Some(TheoremId::CUnstable)
                );
                if unstable {
                    let cert = stable_split_certificate(&space, p).unwrap();
                    assert!(cert.verdict, "unstable verdict without stable certificate at n={n}, k={k}, p={p}");
                }
            }
        }
    }
}

/// A product conclusion carries the same free Betti numbers as the space it
/// describes.
#[test]
fn conclusion_poincare_polynomials_agree() {
    for n in 2..=6u32 {
        for k in 1..=n {
            for p in odd_primes_in(3, 13) {
                for space in [
                    SpaceDescriptor::PW { n, k },
                    SpaceDescriptor::W { n, k },
                    SpaceDescriptor::WM { n, k, m: p },
                ] {
                    let Ok(v) = full_verdict(&space, p) else { continue };
                    let Some(Conclusion::Product { space: model, .. }) = &v.conclusion else {
                        continue;
                    };
                    let top = space.dimension() + 2;
                    let Ok(space_tab) = space_table(&space, p, top) else { continue };
                    let model_tab = space_table(model, p, top).unwrap();
                    assert_eq!(
                        poincare_polynomial(&space_tab),
                        poincare_polynomial(&model_tab),
                        "Poincare polynomials differ for {} vs {} at p={p}",
                        space.label(),
                        model.label()
                    );
                }
            }
        }
    }
}

/// Once the certificate verdict holds at some p0 > n it holds for every
/// larger prime in the grid.
#[test]
fn certificate_monotone_in_prime() {
    for n in 1..=10u32 {
        for k in 1..=n {
            let mut seen_true = false;
            for p in odd_primes_in(n as u64 + 1, 2 * n as u64 + 20) {
                let cert = stable_split_certificate(&SpaceDescriptor::PW { n, k }, p).unwrap();
                if seen_true {
                    assert!(cert.verdict, "certificate lost at n={n}, k={k}, p={p}");
                }
                seen_true |= cert.verdict;
            }
            assert!(seen_true, "certificate never true for n={n}, k={k}");
        }
    }
}

/// The diagonal-quotient table at p > n equals the Kunneth table of its
/// model space computed through the Product descriptor as well.
#[test]
fn product_descriptor_kunneth_matches_y_table() {
    for n in 2..=5u32 {
        for k in 2..=n {
            let p = odd_primes_in(n as u64 + 1, 31)[0];
            let top = 2 * n * k - k * k - 1 + 2;
            let y = space_table(&SpaceDescriptor::Y { n, k }, p, top).unwrap();
            let cp = SpaceDescriptor::CP { n: n - k };
            let spheres = SpaceDescriptor::SphereProduct {
                degrees: (n - k + 2..=n).map(|j| 2 * j - 1).collect(),
            };
            let prod = SpaceDescriptor::Product { factors: vec![cp.clone(), spheres.clone()] };
            let via_product = space_table(&prod, p, top).unwrap();
            assert!(compare_tables(&y, &via_product).unwrap().matches());
            // and via an explicit fold
            let direct = kunneth(
                &space_table(&cp, p, cp.default_top_degree()).unwrap(),
                &space_table(&spheres, p, spheres.default_top_degree()).unwrap(),
            );
            assert!(compare_tables(&y, &retruncate(&direct, top)).unwrap().matches());
        }
    }
}

/// Top nonzero degree of the diagonal-quotient table equals the manifold
/// dimension for p > n.
#[test]
fn top_degree_is_manifold_dimension() {
    for n in 2..=6u32 {
        for k in 1..=n {
            for p in odd_primes_in(n as u64 + 1, 13) {
                let space = SpaceDescriptor::PW { n, k };
                let t = space_table(&space, p, space.default_top_degree()).unwrap();
                assert_eq!(t.top_nonzero_degree(), Some(2 * n * k - k * k - 1));
            }
        }
    }
}
