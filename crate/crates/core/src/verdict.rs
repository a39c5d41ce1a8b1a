//! Hypothesis-by-hypothesis verdicts for the p-local splitting theorems.
//!
//! Every bound is decided in exact integer or rational arithmetic; the
//! square-root bound k <= p + n - sqrt(D) is decided by squaring:
//! (p + n - k)^2 >= D together with k <= n. When no theorem applies the
//! verdict says exactly that; the theorems are sufficient conditions, so
//! "does not split" is never claimed.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::chern::stable_split_certificate;
use crate::error::{Error, Result};
use crate::spaces::{comparison_space, space_table, SpaceDescriptor};

/// Theorem identifiers, stable across the JSON schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TheoremId {
    #[serde(rename = "A-largepdec")]
    ALargePrime,
    #[serde(rename = "A-ell")]
    AWeighted,
    #[serde(rename = "B-projstsplit")]
    BStable,
    #[serde(rename = "B-ell")]
    BWeighted,
    #[serde(rename = "C-unsplit")]
    CUnstable,
    #[serde(rename = "splitquot-ell")]
    CWeighted,
    #[serde(rename = "eqstief")]
    Equivariant,
    #[serde(rename = "eqsplitlarg")]
    EquivariantLargePrime,
    #[serde(rename = "splitquot-WM")]
    CyclicQuotient,
    #[serde(rename = "wnklarg")]
    CyclicQuotientLargePrime,
}

impl TheoremId {
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::ALargePrime => "A-largepdec",
            TheoremId::AWeighted => "A-ell",
            TheoremId::BStable => "B-projstsplit",
            TheoremId::BWeighted => "B-ell",
            TheoremId::CUnstable => "C-unsplit",
            TheoremId::CWeighted => "splitquot-ell",
            TheoremId::Equivariant => "eqstief",
            TheoremId::EquivariantLargePrime => "eqsplitlarg",
            TheoremId::CyclicQuotient => "splitquot-WM",
            TheoremId::CyclicQuotientLargePrime => "wnklarg",
        }
    }
}

/// Exact value backing a hypothesis check.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundValue {
    /// p > numerator/denominator, compared as 2p > numerator for den = 2.
    RationalLowerBound { numerator: i64, denominator: u64 },
    /// k <= base - sqrt(discriminant) with base = p + n, decided by
    /// lhs_squared = (base - k)^2 >= discriminant (and k <= n separately).
    SqrtUpperBound { base: u64, discriminant: u64, k: u32, lhs_squared: u64 },
    /// lhs <= rhs in plain integers.
    IntegerInequality { lhs: i64, rhs: i64 },
    /// p > bound in plain integers.
    IntegerLowerBound { bound: i64 },
    /// p divides / does not divide value.
    Divisibility { value: String, divisible: bool },
    /// Delegated to the stable-splitting certificate.
    Certificate { verdict: bool },
}

/// One checked hypothesis with its exact witness numbers.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub formula: String,
    pub value: BoundValue,
    pub pass: bool,
}

/// The very-large-prime bound of the elementary decomposition:
/// (2nk - k^2 - 1)/2 + k - n, exact.
pub fn theorem_a_bound(n: u32, k: u32) -> Result<BigRational> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let (n, k) = (n as i64, k as i64);
    Ok(BigRational::new(
        BigInt::from(2 * n * k - k * k - 1 + 2 * (k - n)),
        BigInt::from(2),
    ))
}

fn theorem_a_report(n: u32, k: u32, p: u64) -> Result<BoundReport> {
    let bound = theorem_a_bound(n, k)?;
    let numerator = 2 * (n as i64) * (k as i64) - (k as i64).pow(2) - 1 + 2 * (k as i64 - n as i64);
    let pass = BigRational::from_integer(BigInt::from(p)) > bound;
    Ok(BoundReport {
        name: "large-prime bound".into(),
        formula: "p > (2nk - k^2 - 1)/2 + k - n".into(),
        value: BoundValue::RationalLowerBound { numerator, denominator: 2 },
        pass,
    })
}

/// Which square-root bound to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MBoundVariant {
    /// D = p^2 + n^2 - 4p + 2 (the product-decomposition bound M(n,p)).
    Unsplit,
    /// D = p^2 + n^2 - 2p + 1 (the retraction bound).
    Retraction,
}

/// Exact check of k <= min(n, p + n - sqrt(D)).
pub fn m_bound_check(n: u32, k: u32, p: u64, variant: MBoundVariant) -> Result<BoundReport> {
    if !crate::arith::is_odd_prime(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    let (pi, ni, ki) = (p as i64, n as i64, k as i64);
    let d = match variant {
        MBoundVariant::Unsplit => pi * pi + ni * ni - 4 * pi + 2,
        MBoundVariant::Retraction => pi * pi + ni * ni - 2 * pi + 1,
    };
    // p >= 3, n >= 1: p^2 - 4p + 2 >= -1 and n^2 >= 1
    assert!(d >= 0, "discriminant unexpectedly negative");
    let (formula, name) = match variant {
        MBoundVariant::Unsplit => (
            "k <= min(n, p + n - sqrt(p^2 + n^2 - 4p + 2))",
            "frame-count bound M(n,p)",
        ),
        MBoundVariant::Retraction => (
            "k <= min(n, p + n - sqrt(p^2 + n^2 - 2p + 1))",
            "retraction bound",
        ),
    };
    let base = pi + ni;
    let lhs = base - ki; // k <= n < p + n keeps this positive
    let pass = k <= n && lhs >= 0 && lhs * lhs >= d;
    Ok(BoundReport {
        name: name.into(),
        formula: formula.into(),
        value: BoundValue::SqrtUpperBound {
            base: base as u64,
            discriminant: d as u64,
            k,
            lhs_squared: (lhs * lhs).max(0) as u64,
        },
        pass,
    })
}

/// Stable-range inequalities used by the unstable lifting arguments:
/// dim - 1 <= 2(n-k)p + 2p - 3, and for each 1 <= r <= k-1,
/// dim <= 2p(n-k+r) + 2p - 4.
#[derive(Debug, Clone, Serialize)]
pub struct StableRangeReport {
    pub rows: Vec<BoundReport>,
    pub pass: bool,
}

pub fn stable_range_check(n: u32, k: u32, p: u64) -> Result<StableRangeReport> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let dim = (2 * n * k - k * k - 1) as i64;
    let (pi, ni, ki) = (p as i64, n as i64, k as i64);
    let mut rows = Vec::new();
    let rhs0 = 2 * (ni - ki) * pi + 2 * pi - 3;
    rows.push(BoundReport {
        name: "retraction stable range".into(),
        formula: "dim - 1 <= 2(n-k)p + 2p - 3".into(),
        value: BoundValue::IntegerInequality { lhs: dim - 1, rhs: rhs0 },
        pass: dim - 1 <= rhs0,
    });
    for r in 1..ki {
        let rhs = 2 * pi * (ni - ki + r) + 2 * pi - 4;
        rows.push(BoundReport {
            name: format!("sphere-factor connectivity, r = {r}"),
            formula: "dim <= 2p(n-k+r) + 2p - 4".into(),
            value: BoundValue::IntegerInequality { lhs: dim, rhs },
            pass: dim <= rhs,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(StableRangeReport { rows, pass })
}

fn integer_lower_bound_report(name: &str, formula: &str, p: u64, bound: i64) -> BoundReport {
    BoundReport {
        name: name.into(),
        formula: formula.into(),
        value: BoundValue::IntegerLowerBound { bound },
        pass: (p as i64) > bound,
    }
}

fn divisibility_report(name: &str, formula: &str, p: u64, value: &BigInt, want_divisible: bool) -> BoundReport {
    let divisible = (value % BigInt::from(p)) == BigInt::from(0);
    BoundReport {
        name: name.into(),
        formula: formula.into(),
        value: BoundValue::Divisibility { value: value.to_string(), divisible },
        pass: divisible == want_divisible,
    }
}

/// Conclusion attached to a passing theorem.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Conclusion {
    /// Unstable p-local equivalence with the model space.
    Product { space: SpaceDescriptor, label: String },
    /// Stable p-local wedge of spheres of the listed dimensions.
    StableWedge { sphere_dimensions: Vec<u32> },
}

/// One theorem evaluated against the parameters.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremEvaluation {
    pub id: TheoremId,
    pub hypotheses: Vec<BoundReport>,
    pub applies: bool,
    /// Present exactly when the theorem applies.
    pub conclusion: Option<Conclusion>,
}

/// The assembled verdict: every applicable theorem checked, strongest first
/// in the declared order of strength.
#[derive(Debug, Clone, Serialize)]
pub struct SplitVerdict {
    pub space: SpaceDescriptor,
    pub prime: u64,
    pub dim: u32,
    pub theorems: Vec<TheoremEvaluation>,
    pub strongest: Option<TheoremId>,
    pub conclusion: Option<Conclusion>,
    /// True when only a stable (wedge) conclusion is available.
    pub stable_only: bool,
}

impl SplitVerdict {
    pub fn some_theorem_applies(&self) -> bool {
        self.strongest.is_some()
    }
}

fn product_conclusion(model: SpaceDescriptor) -> Conclusion {
    let label = model.label();
    Conclusion::Product { space: model, label }
}

/// Stable wedge dimensions: the free-module degrees of the (torsion-free)
/// table in positive degrees, one sphere per reduced basis element.
fn wedge_conclusion(space: &SpaceDescriptor, p: u64) -> Result<Conclusion> {
    let table = space_table(space, p, space.default_top_degree())?;
    let sphere_dimensions = table.free_degrees().into_iter().filter(|&d| d > 0).collect();
    Ok(Conclusion::StableWedge { sphere_dimensions })
}

/// Evaluate every splitting theorem relevant to the descriptor, strongest
/// first: unstable product theorems (elementary large-prime bound, then the
/// square-root bound), then the stable wedge.
pub fn full_verdict(space: &SpaceDescriptor, p: u64) -> Result<SplitVerdict> {
    if !crate::arith::is_odd_prime(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    space.validate()?;
    let mut theorems = Vec::new();
    match space {
        SpaceDescriptor::PW { n, k } => {
            let model = comparison_space(space)?;
            theorems.push(TheoremEvaluation::make(
                TheoremId::ALargePrime,
                vec![theorem_a_report(*n, *k, p)?],
                || Ok(product_conclusion(model.clone())),
            )?);
            theorems.push(TheoremEvaluation::make(
                TheoremId::CUnstable,
                vec![
                    integer_lower_bound_report("prime above n + 1", "p > n + 1", p, *n as i64 + 1),
                    m_bound_check(*n, *k, p, MBoundVariant::Unsplit)?,
                ],
                || Ok(product_conclusion(model.clone())),
            )?);
            theorems.push(stable_theorem(TheoremId::BStable, space, *n, p)?);
        }
        SpaceDescriptor::PLW { n, k, l } => {
            let model = comparison_space(space)?;
            let h = crate::arith::complete_symmetric_sum(l, (*n - *k + 1) as usize)?;
            let h_report = || {
                divisibility_report(
                    "leading symmetric sum prime to p",
                    "p does not divide h_{n-k+1}(l)",
                    p,
                    &h,
                    false,
                )
            };
            theorems.push(TheoremEvaluation::make(
                TheoremId::AWeighted,
                vec![theorem_a_report(*n, *k, p)?, h_report()],
                || Ok(product_conclusion(model.clone())),
            )?);
            theorems.push(TheoremEvaluation::make(
                TheoremId::CWeighted,
                vec![
                    integer_lower_bound_report("prime above n + 1", "p > n + 1", p, *n as i64 + 1),
                    m_bound_check(*n, *k, p, MBoundVariant::Unsplit)?,
                    h_report(),
                ],
                || Ok(product_conclusion(model.clone())),
            )?);
            theorems.push(stable_theorem(TheoremId::BWeighted, space, *n, p)?);
        }
        SpaceDescriptor::W { n, k } => {
            let model = comparison_space(space)?;
            theorems.push(TheoremEvaluation::make(
                TheoremId::EquivariantLargePrime,
                vec![theorem_a_report(*n, *k, p)?],
                || Ok(product_conclusion(model.clone())),
            )?);
            theorems.push(TheoremEvaluation::make(
                TheoremId::Equivariant,
                vec![
                    integer_lower_bound_report("prime above n + 1", "p > n + 1", p, *n as i64 + 1),
                    m_bound_check(*n, *k, p, MBoundVariant::Unsplit)?,
                ],
                || Ok(product_conclusion(model.clone())),
            )?);
        }
        SpaceDescriptor::WM { n, k, m } => {
            let model = comparison_space(space)?;
            theorems.push(TheoremEvaluation::make(
                TheoremId::CyclicQuotientLargePrime,
                vec![theorem_a_report(*n, *k, p)?],
                || Ok(product_conclusion(model.clone())),
            )?);
            theorems.push(TheoremEvaluation::make(
                TheoremId::CyclicQuotient,
                vec![
                    integer_lower_bound_report("prime above n + 1", "p > n + 1", p, *n as i64 + 1),
                    m_bound_check(*n, *k, p, MBoundVariant::Unsplit)?,
                    divisibility_report(
                        "p divides the cyclic order",
                        "p | m",
                        p,
                        &BigInt::from(*m),
                        true,
                    ),
                ],
                || Ok(product_conclusion(model.clone())),
            )?);
        }
        other => {
            return Err(Error::UnsupportedRegime(format!(
                "verdicts are defined for the quotient families W, PW, PLW, WM; \
                 {} is a model space",
                other.label()
            )))
        }
    }
    let strongest_eval = theorems.iter().find(|t| t.applies);
    let strongest = strongest_eval.map(|t| t.id);
    let conclusion = strongest_eval.and_then(|t| t.conclusion.clone());
    let stable_only = matches!(strongest, Some(TheoremId::BStable) | Some(TheoremId::BWeighted));
    Ok(SplitVerdict {
        space: space.clone(),
        prime: p,
        dim: space.dimension(),
        theorems,
        strongest,
        conclusion,
        stable_only,
    })
}

impl TheoremEvaluation {
    fn make(
        id: TheoremId,
        hypotheses: Vec<BoundReport>,
        conclusion: impl FnOnce() -> Result<Conclusion>,
    ) -> Result<Self> {
        let applies = hypotheses.iter().all(|h| h.pass);
        let conclusion = if applies { Some(conclusion()?) } else { None };
        Ok(TheoremEvaluation { id, hypotheses, applies, conclusion })
    }
}

/// The stable-wedge theorem row: the certificate decides, with the p > n
/// hypothesis of the headline statement recorded alongside.
fn stable_theorem(
    id: TheoremId,
    space: &SpaceDescriptor,
    n: u32,
    p: u64,
) -> Result<TheoremEvaluation> {
    let cert = stable_split_certificate(space, p)?;
    let hypotheses = vec![
        BoundReport {
            name: "dimension below the image-of-J window".into(),
            formula: "dim < 2p^2 - 2p".into(),
            value: BoundValue::IntegerInequality {
                lhs: cert.condition1.dim as i64,
                rhs: cert.condition1.bound as i64,
            },
            pass: cert.condition1.pass,
        },
        BoundReport {
            name: "torsion-free Z_(p) cohomology".into(),
            formula: "v_p(leading transgression coefficient) = 0".into(),
            value: BoundValue::Certificate { verdict: cert.condition2.pass },
            pass: cert.condition2.pass,
        },
        BoundReport {
            name: "Chern character integral".into(),
            formula: "v_p(i!) = 0 for i <= n-k and floor(r/(p-1)) = 0 for r < n-1".into(),
            value: BoundValue::Certificate { verdict: cert.condition3.pass },
            pass: cert.condition3.pass,
        },
        integer_lower_bound_report(
            "headline hypothesis (informational: the certificate is the \
             operative criterion)",
            "p > n",
            p,
            n as i64,
        ),
    ];
    // the first three rows (the certificate) decide; the headline bound is
    // recorded but not required
    let applies = cert.verdict;
    let conclusion = if applies { Some(wedge_conclusion(space, p)?) } else { None };
    Ok(TheoremEvaluation { id, hypotheses, applies, conclusion })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn theorem_a_bound_examples() {
        assert_eq!(theorem_a_bound(4, 2).unwrap(), ratio(7, 2));
        assert_eq!(theorem_a_bound(5, 2).unwrap(), ratio(9, 2));
        // k = 1 gives 0: every odd prime passes
        assert_eq!(theorem_a_bound(7, 1).unwrap(), ratio(0, 1));
        let r = theorem_a_report(7, 1, 3).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn m_bound_examples() {
        // n=5, p=7, k=5: (12-5)^2 = 49 >= 48
        let r = m_bound_check(5, 5, 7, MBoundVariant::Unsplit).unwrap();
        assert!(r.pass);
        match r.value {
            BoundValue::SqrtUpperBound { discriminant, lhs_squared, .. } => {
                assert_eq!(discriminant, 48);
                assert_eq!(lhs_squared, 49);
            }
            _ => panic!("wrong value kind"),
        }
        // k > n fails the min clause
        assert!(!m_bound_check(5, 6, 7, MBoundVariant::Unsplit).unwrap().pass);
        // retraction discriminant is (p-1)^2 + n^2
        let rr = m_bound_check(5, 2, 7, MBoundVariant::Retraction).unwrap();
        match rr.value {
            BoundValue::SqrtUpperBound { discriminant, .. } => assert_eq!(discriminant, 61),
            _ => panic!("wrong value kind"),
        }
    }

    #[test]
    fn stable_range_examples() {
        // n=5, k=2, p=7: dim-1 = 14 <= 53
        let r = stable_range_check(5, 2, 7).unwrap();
        assert!(r.pass);
        match r.rows[0].value {
            BoundValue::IntegerInequality { lhs, rhs } => {
                assert_eq!(lhs, 14);
                assert_eq!(rhs, 53);
            }
            _ => panic!("wrong value kind"),
        }
        // r = 1 is the worst case: rows monotone in r
        let big = stable_range_check(9, 8, 11).unwrap();
        let rhs: Vec<i64> = big.rows[1..]
            .iter()
            .map(|row| match row.value {
                BoundValue::IntegerInequality { rhs, .. } => rhs,
                _ => unreachable!(),
            })
            .collect();
        assert!(rhs.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn verdict_pw52() {
        // p = 5: the large-prime theorem passes (5 > 9/2)
        let v = full_verdict(&SpaceDescriptor::PW { n: 5, k: 2 }, 5).unwrap();
        assert_eq!(v.strongest, Some(TheoremId::ALargePrime));
        assert!(!v.stable_only);
        match v.conclusion.unwrap() {
            Conclusion::Product { space, .. } => {
                assert_eq!(space, SpaceDescriptor::Y { n: 5, k: 2 })
            }
            _ => panic!("expected a product conclusion"),
        }
        // p = 3: nothing applies
        let none = full_verdict(&SpaceDescriptor::PW { n: 5, k: 2 }, 3).unwrap();
        assert_eq!(none.strongest, None);
        assert!(none.conclusion.is_none());
    }

    #[test]
    fn verdict_pw93_at_11_via_sqrt_bound() {
        // the large-prime bound needs p > 16 and fails; the square-root
        // bound (20-3)^2 = 289 >= 160 carries the product conclusion
        let v = full_verdict(&SpaceDescriptor::PW { n: 9, k: 3 }, 11).unwrap();
        assert_eq!(v.strongest, Some(TheoremId::CUnstable));
        match v.conclusion.unwrap() {
            Conclusion::Product { space, label } => {
                assert_eq!(space, SpaceDescriptor::Y { n: 9, k: 3 });
                assert_eq!(label, "Y(9,3)");
            }
            _ => panic!("expected a product conclusion"),
        }
        let c_eval = &v.theorems[1];
        match c_eval.hypotheses[1].value {
            BoundValue::SqrtUpperBound { discriminant, lhs_squared, .. } => {
                assert_eq!(discriminant, 160);
                assert_eq!(lhs_squared, 289);
            }
            _ => panic!("wrong value kind"),
        }
    }

    #[test]
    fn verdict_pw98_stable_only() {
        // (20-8)^2 = 144 < 160: only the stable wedge applies
        let v = full_verdict(&SpaceDescriptor::PW { n: 9, k: 8 }, 11).unwrap();
        assert_eq!(v.strongest, Some(TheoremId::BStable));
        assert!(v.stable_only);
        match v.conclusion.unwrap() {
            Conclusion::StableWedge { sphere_dimensions } => {
                assert_eq!(sphere_dimensions[0], 2);
                assert_eq!(*sphere_dimensions.last().unwrap(), v.dim);
            }
            _ => panic!("expected a wedge conclusion"),
        }
    }

    #[test]
    fn verdict_stiefel_equivariant() {
        let v = full_verdict(&SpaceDescriptor::W { n: 5, k: 2 }, 7).unwrap();
        assert_eq!(v.strongest, Some(TheoremId::EquivariantLargePrime));
        match v.conclusion.unwrap() {
            Conclusion::Product { space, .. } => {
                assert_eq!(space, SpaceDescriptor::SphereProduct { degrees: vec![7, 9] })
            }
            _ => panic!("expected a product conclusion"),
        }
    }

    #[test]
    fn verdict_cyclic_quotient() {
        let v = full_verdict(&SpaceDescriptor::WM { n: 4, k: 2, m: 10 }, 5).unwrap();
        // large-prime bound: (16-4-1)/2 + 2 - 4 = 7/2; 5 > 7/2 passes
        assert_eq!(v.strongest, Some(TheoremId::CyclicQuotientLargePrime));
        match v.conclusion.unwrap() {
            Conclusion::Product { space, .. } => {
                assert_eq!(
                    space,
                    SpaceDescriptor::Product {
                        factors: vec![
                            SpaceDescriptor::Lens { m: 10, dim: 5 },
                            SpaceDescriptor::SphereProduct { degrees: vec![7] },
                        ]
                    }
                );
            }
            _ => panic!("expected a product conclusion"),
        }
        // p = 7 does not divide m = 10: splitquot fails its divisibility
        // hypothesis but the large-prime route still applies
        let v7 = full_verdict(&SpaceDescriptor::WM { n: 4, k: 2, m: 10 }, 7).unwrap();
        assert_eq!(v7.strongest, Some(TheoremId::CyclicQuotientLargePrime));
        let splitquot = &v7.theorems[1];
        assert!(!splitquot.applies);
        assert!(!splitquot.hypotheses[2].pass);
    }

    #[test]
    fn verdict_weighted_divisibility_clause() {
        // l = (1,2): h_2 = 7; at p = 7 the divisibility clause fails and
        // with it every theorem (condition 2 of the certificate too)
        let space = SpaceDescriptor::PLW { n: 3, k: 2, l: vec![1, 2] };
        let v = full_verdict(&space, 7).unwrap();
        assert_eq!(v.strongest, None);
        // at p = 5 the large-prime bound (5 > 7/2) and the unit h_2 yield
        // the product
        let v5 = full_verdict(&space, 5).unwrap();
        assert_eq!(v5.strongest, Some(TheoremId::AWeighted));
    }

    #[test]
    fn verdict_rejects_model_spaces() {
        assert!(matches!(
            full_verdict(&SpaceDescriptor::Y { n: 4, k: 2 }, 5),
            Err(Error::UnsupportedRegime(_))
        ));
    }

    #[test]
    fn sqrt_comparison_agrees_with_float_away_from_boundary() {
        for n in 1..=20u32 {
            for k in 1..=n {
                for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
                    let r = m_bound_check(n, k, p, MBoundVariant::Unsplit).unwrap();
                    let d = (p * p) as f64 + (n * n) as f64 - 4.0 * p as f64 + 2.0;
                    let m = p as f64 + n as f64 - d.sqrt();
                    // skip near-boundary cases; the integer check is the
                    // authority there
                    if ((k as f64) - m).abs() < 1e-6 {
                        continue;
                    }
                    let float_pass = k <= n && (k as f64) < m;
                    assert_eq!(r.pass, float_pass, "disagreement at n={n}, k={k}, p={p}");
                }
            }
        }
    }
}
