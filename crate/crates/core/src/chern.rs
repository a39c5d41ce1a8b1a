//! Stable-splitting certificates via Chern-character integrality.
//!
//! A simply connected p-local finite complex splits stably into a wedge of
//! p-local spheres once three conditions hold: its dimension is below
//! 2p^2 - 2p (the image-of-J window), its Z_(p)-cohomology is torsion free,
//! and the Chern character lands in Z_(p)-cohomology. For the projective
//! Stiefel quotients the last condition reduces to two exactly computable
//! pieces: the truncated expansion of ch on the degree-2 class, whose
//! coefficients are 1/i!, and the Adams denominator window for the odd
//! K-theory generators, whose p-valuation is floor(r/(p-1)).

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{
    adams_m_valuation, factorial_valuation, int_valuation, is_odd_prime, LocalScalar, Valuation,
};
use crate::error::{Error, Result};
use crate::spaces::{presentation, SpaceDescriptor};

/// One coefficient of ch(x) = e^x - 1 truncated by x^{n-k+1} = 0.
#[derive(Debug, Clone, Serialize)]
pub struct ChernCoefficient {
    pub i: u32,
    /// Exactly 1/i!.
    #[serde(serialize_with = "crate::jsonutil::rational_as_string")]
    pub value: num_rational::BigRational,
    /// v_p(1/i!) = -v_p(i!).
    pub valuation: i64,
}

/// The truncated Chern-character expansion of the degree-2 class.
#[derive(Debug, Clone, Serialize)]
pub struct ChernExpansion {
    pub prime: u64,
    pub coefficients: Vec<ChernCoefficient>,
    /// All coefficients lie in Z_(p); equivalent to p > n - k.
    pub integral: bool,
}

/// Exact coefficients 1/i! for i = 1 ..= n-k with their p-valuations.
pub fn chern_x_expansion(n: u32, k: u32, p: u64) -> Result<ChernExpansion> {
    if !is_odd_prime(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    if k > n {
        return Err(Error::Domain(format!("k = {k} exceeds n = {n}")));
    }
    let mut coefficients = Vec::new();
    let mut factorial = BigInt::from(1);
    for i in 1..=(n - k) {
        factorial *= BigInt::from(i);
        let value = LocalScalar::from_ratio(1, factorial.clone(), p)?;
        let valuation = match value.valuation() {
            Valuation::Finite(v) => v,
            Valuation::Infinite => unreachable!("1/i! is nonzero"),
        };
        debug_assert_eq!(-valuation as u64, factorial_valuation(i as u64, p));
        coefficients.push(ChernCoefficient { i, value: value.value().clone(), valuation });
    }
    let integral = coefficients.iter().all(|c| c.valuation >= 0);
    Ok(ChernExpansion { prime: p, coefficients, integral })
}

/// One row of the Adams denominator window.
#[derive(Debug, Clone, Serialize)]
pub struct AdamsRow {
    pub r: u32,
    /// floor(r / (p-1)).
    pub valuation: u64,
}

/// Divisibility window for the Chern character on the odd K-theory
/// generators: their components vanish above the top term gamma_n x^{n-k}
/// (degree 2n - 1 + 2(n-k)), so only r < n - 1 contributes, and each such
/// component is controlled by the Adams denominator m(r).
#[derive(Debug, Clone, Serialize)]
pub struct AdamsWindowReport {
    pub prime: u64,
    pub rows: Vec<AdamsRow>,
    /// All window valuations vanish; equivalent to p >= n.
    pub pass: bool,
    /// Degree of the largest possible component, 2n - 1 + 2(n-k).
    pub top_term_degree: u32,
    /// Components in degree 2(n-k)+1+2r vanish for r >= this bound (= n-1).
    pub vanishing_from_r: u32,
    /// Set at p = n: the first failing r would be p - 1, one step outside
    /// the window.
    pub boundary_note: Option<String>,
}

pub fn gamma_integrality_window(n: u32, k: u32, p: u64) -> Result<AdamsWindowReport> {
    if !is_odd_prime(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    if k > n {
        return Err(Error::Domain(format!("k = {k} exceeds n = {n}")));
    }
    let mut rows = Vec::new();
    for r in 0..n.saturating_sub(1) {
        rows.push(AdamsRow { r, valuation: adams_m_valuation(r as u64, p)? });
    }
    let pass = rows.iter().all(|row| row.valuation == 0);
    let boundary_note = (p == n as u64).then(|| {
        format!(
            "p = n = {n}: the first r with positive valuation is r = {}, \
             immediately outside the window r < {}",
            p - 1,
            n - 1
        )
    });
    Ok(AdamsWindowReport {
        prime: p,
        rows,
        pass,
        top_term_degree: 2 * n - 1 + 2 * (n - k),
        vanishing_from_r: n.saturating_sub(1),
        boundary_note,
    })
}

/// Witness for condition 1: dim X < 2p^2 - 2p.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionCondition {
    pub dim: u32,
    pub bound: u64,
    pub pass: bool,
}

/// Witness for condition 2: one transgression coefficient with its valuation.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientValuation {
    pub j: u32,
    #[serde(serialize_with = "crate::jsonutil::bigint_as_string")]
    pub coefficient: BigInt,
    pub valuation: u64,
}

/// Witness for condition 2: the quotient table is torsion free exactly when
/// the leading coefficient (at exponent n-k+1) is a unit; later non-unit
/// coefficients are harmless because the unit truncation below them already
/// kills the tail. For the weighted quotient this is the same statement as
/// p not dividing h_{n-k+1}(l).
#[derive(Debug, Clone, Serialize)]
pub struct TorsionFreeCondition {
    pub coefficient_valuations: Vec<CoefficientValuation>,
    pub leading_exponent: u32,
    pub pass: bool,
    /// The exponent whose non-unit coefficient introduces torsion, if any.
    pub failing_j: Option<u32>,
}

/// Witness for condition 3.
#[derive(Debug, Clone, Serialize)]
pub struct IntegralityCondition {
    pub chern: ChernExpansion,
    pub adams_window: AdamsWindowReport,
    pub pass: bool,
}

/// The full three-condition certificate.
#[derive(Debug, Clone, Serialize)]
pub struct StableSplitCertificate {
    pub space: SpaceDescriptor,
    pub prime: u64,
    pub condition1: DimensionCondition,
    pub condition2: TorsionFreeCondition,
    pub condition3: IntegralityCondition,
    pub verdict: bool,
    /// The splitting theorem is stated for p > n; below that the conditions
    /// are still evaluated mechanically but the stamp is false.
    pub within_theorem_hypotheses: bool,
}

impl StableSplitCertificate {
    /// The canonical JSON shape: conditions as an id/pass/witness array.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema_version": 1,
            "space": self.space,
            "prime": self.prime,
            "conditions": [
                { "id": 1, "pass": self.condition1.pass, "witness": self.condition1 },
                { "id": 2, "pass": self.condition2.pass, "witness": self.condition2 },
                { "id": 3, "pass": self.condition3.pass, "witness": self.condition3 },
            ],
            "verdict": self.verdict,
            "within_theorem_hypotheses": self.within_theorem_hypotheses,
        })
    }
}

/// Evaluate the stable-splitting certificate for PW(n,k) or PLW(n,k,l).
pub fn stable_split_certificate(space: &SpaceDescriptor, p: u64) -> Result<StableSplitCertificate> {
    let (n, k) = match space {
        SpaceDescriptor::PW { n, k } | SpaceDescriptor::PLW { n, k, .. } => (*n, *k),
        other => {
            return Err(Error::Domain(format!(
                "stable certificate applies to the projective quotients, not {}",
                other.label()
            )))
        }
    };
    let built = presentation(space, p)?;
    let fib = built.fibration.as_ref().expect("projective spaces carry fibration data");

    let dim = space.dimension();
    let bound = 2 * p * p - 2 * p;
    let condition1 = DimensionCondition { dim, bound, pass: (dim as u64) < bound };

    let leading_exponent = n - k + 1;
    let mut coefficient_valuations = Vec::new();
    for (j, c) in &fib.transgressions {
        let valuation = match int_valuation(c, p) {
            Valuation::Finite(v) => v as u64,
            Valuation::Infinite => unreachable!("zero coefficients are rejected upstream"),
        };
        coefficient_valuations.push(CoefficientValuation { j: *j, coefficient: c.clone(), valuation });
    }
    let leading_unit = coefficient_valuations
        .iter()
        .find(|cv| cv.j == leading_exponent)
        .map(|cv| cv.valuation == 0)
        .unwrap_or(false);
    let condition2 = TorsionFreeCondition {
        failing_j: (!leading_unit).then_some(leading_exponent),
        coefficient_valuations,
        leading_exponent,
        pass: leading_unit,
    };

    let chern = chern_x_expansion(n, k, p)?;
    let adams_window = gamma_integrality_window(n, k, p)?;
    let condition3 = IntegralityCondition {
        pass: chern.integral && adams_window.pass,
        chern,
        adams_window,
    };

    let verdict = condition1.pass && condition2.pass && condition3.pass;
    Ok(StableSplitCertificate {
        space: space.clone(),
        prime: p,
        condition1,
        condition2,
        condition3,
        verdict,
        within_theorem_hypotheses: p > n as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn chern_expansion_small() {
        // n-k = 3 at p = 5: 1, 1/2, 1/6, all unit valuations
        let e = chern_x_expansion(5, 2, 5).unwrap();
        let values: Vec<BigRational> = e.coefficients.iter().map(|c| c.value.clone()).collect();
        assert_eq!(values, vec![ratio(1, 1), ratio(1, 2), ratio(1, 6)]);
        assert!(e.coefficients.iter().all(|c| c.valuation == 0));
        assert!(e.integral);
    }

    #[test]
    fn chern_expansion_boundary_cases() {
        // n = k: x = 0, empty expansion, trivially integral
        let empty = chern_x_expansion(4, 4, 5).unwrap();
        assert!(empty.coefficients.is_empty());
        assert!(empty.integral);
        // n-k = 5 at p = 5: 1/120 has valuation -1
        let failing = chern_x_expansion(7, 2, 5).unwrap();
        assert_eq!(failing.coefficients.last().unwrap().valuation, -1);
        assert!(!failing.integral);
    }

    #[test]
    fn chern_integrality_iff_p_exceeds_n_minus_k() {
        for n in 1..=10u32 {
            for k in 1..=n {
                for p in [3u64, 5, 7, 11, 13] {
                    let e = chern_x_expansion(n, k, p).unwrap();
                    assert_eq!(e.integral, p > (n - k) as u64, "n={n}, k={k}, p={p}");
                }
            }
        }
    }

    #[test]
    fn adams_window_examples() {
        // n=5, p=7: r in 0..3 all vanish
        let w = gamma_integrality_window(5, 2, 7).unwrap();
        assert_eq!(w.rows.len(), 4);
        assert!(w.pass);
        assert!(w.boundary_note.is_none());
        assert_eq!(w.top_term_degree, 15);
        // n=5, p=5: passes at the boundary, with the note
        let b = gamma_integrality_window(5, 2, 5).unwrap();
        assert!(b.pass);
        assert!(b.boundary_note.is_some());
        // n=8, p=7: r=6 has floor(6/6) = 1
        let f = gamma_integrality_window(8, 2, 7).unwrap();
        assert!(!f.pass);
        assert_eq!(f.rows.iter().find(|r| r.r == 6).unwrap().valuation, 1);
    }

    #[test]
    fn certificate_pw52() {
        // p = 7: all three conditions pass, dim 15 < 84
        let c = stable_split_certificate(&SpaceDescriptor::PW { n: 5, k: 2 }, 7).unwrap();
        assert!(c.verdict);
        assert_eq!(c.condition1.dim, 15);
        assert_eq!(c.condition1.bound, 84);
        assert!(c.within_theorem_hypotheses);

        // p = 3: outside hypotheses; conditions 1 and 3 fail, while the
        // valuation scan shows C(5,4) = 5 and C(5,5) = 1 are units at 3,
        // so condition 2 passes
        let c3 = stable_split_certificate(&SpaceDescriptor::PW { n: 5, k: 2 }, 3).unwrap();
        assert!(!c3.verdict);
        assert!(!c3.within_theorem_hypotheses);
        assert!(!c3.condition1.pass);
        assert!(c3.condition2.pass);
        assert!(!c3.condition3.pass);
        let vals: Vec<u64> =
            c3.condition2.coefficient_valuations.iter().map(|cv| cv.valuation).collect();
        assert_eq!(vals, vec![0, 0]);
    }

    #[test]
    fn certificate_plw_divisible_symmetric_sum() {
        // l = (1,2), n = 3, k = 2 at p = 7: h_2 = 7 is divisible by 7,
        // condition 2 fails with witness j = 2
        let c = stable_split_certificate(
            &SpaceDescriptor::PLW { n: 3, k: 2, l: vec![1, 2] },
            7,
        )
        .unwrap();
        assert!(!c.condition2.pass);
        assert_eq!(c.condition2.failing_j, Some(2));
        assert_eq!(
            c.condition2.coefficient_valuations[0].coefficient,
            BigInt::from(7)
        );
        assert!(!c.verdict);
    }

    #[test]
    fn certificate_condition2_matches_actual_table_torsion() {
        use crate::spaces::space_table;
        for n in 2..=6u32 {
            for k in 1..=n {
                for p in [3u64, 5, 7, 11, 13] {
                    let space = SpaceDescriptor::PW { n, k };
                    let cert = stable_split_certificate(&space, p).unwrap();
                    let table = space_table(&space, p, space.default_top_degree()).unwrap();
                    assert_eq!(
                        cert.condition2.pass,
                        table.is_torsion_free(),
                        "condition 2 disagrees with the table at n={n}, k={k}, p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn certificate_rejects_model_spaces() {
        assert!(stable_split_certificate(&SpaceDescriptor::CP { n: 3 }, 5).is_err());
        assert!(stable_split_certificate(&SpaceDescriptor::W { n: 3, k: 2 }, 5).is_err());
    }

    #[test]
    fn certificate_json_shape() {
        let c = stable_split_certificate(&SpaceDescriptor::PW { n: 5, k: 2 }, 7).unwrap();
        let json = c.to_json();
        assert_eq!(json["verdict"], serde_json::json!(true));
        assert_eq!(json["conditions"][0]["id"], serde_json::json!(1));
        assert_eq!(json["conditions"][2]["pass"], serde_json::json!(true));
    }
}
