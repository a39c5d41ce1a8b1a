//! Closed-form presentation builders for the spaces in scope, plus the
//! comparison (model) spaces and the rational minimal model.
//!
//! Notation: W(n,k) is the complex Stiefel manifold of orthonormal k-frames
//! in C^n; PW(n,k) its quotient by the diagonal circle action; PLW(n,k,l)
//! the quotient by the weighted action with weights l; WM(n,k,m) the
//! quotient by the cyclic subgroup of order m; Y(n,k) the model product
//! CP^{n-k} x S^{2n-2k+3} x ... x S^{2n-1}.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Generator, IdealTerm, Monomial, RingPresentation};
use crate::arith::{binomial, complete_symmetric_sum, int_valuation, is_odd_prime, LocalScalar, Valuation};
use crate::dga::{KoszulComplex, OddGenerator};
use crate::error::{Error, Result};
use crate::table::{graded_table, kunneth, GradedModuleTable};

/// Parameter record for every space in the catalog. The JSON form is the
/// canonical CLI schema: `{"space": "PW", "n": 5, "k": 2}` and so on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "space")]
pub enum SpaceDescriptor {
    W { n: u32, k: u32 },
    PW { n: u32, k: u32 },
    PLW { n: u32, k: u32, l: Vec<i64> },
    WM { n: u32, k: u32, m: u64 },
    Y { n: u32, k: u32 },
    Lens { m: u64, dim: u32 },
    SphereProduct { degrees: Vec<u32> },
    CP { n: u32 },
    Product { factors: Vec<SpaceDescriptor> },
}

impl SpaceDescriptor {
    pub fn validate(&self) -> Result<()> {
        let check_nk = |n: u32, k: u32| -> Result<()> {
            if k == 0 || k > n {
                Err(Error::Domain(format!("need 1 <= k <= n, got n={n}, k={k}")))
            } else {
                Ok(())
            }
        };
        match self {
            SpaceDescriptor::W { n, k }
            | SpaceDescriptor::PW { n, k }
            | SpaceDescriptor::Y { n, k } => check_nk(*n, *k),
            SpaceDescriptor::PLW { n, k, l } => {
                check_nk(*n, *k)?;
                if l.len() != *k as usize {
                    return Err(Error::Domain(format!(
                        "weight tuple has {} entries, expected k = {k}",
                        l.len()
                    )));
                }
                let gcd = l.iter().fold(0i64, |acc, &x| acc.gcd(&x));
                if gcd != 1 {
                    return Err(Error::Domain(format!("weights {l:?} have gcd {gcd}, need 1")));
                }
                Ok(())
            }
            SpaceDescriptor::WM { n, k, m } => {
                check_nk(*n, *k)?;
                if *m < 2 {
                    return Err(Error::Domain(format!("cyclic order m = {m} must be >= 2")));
                }
                Ok(())
            }
            SpaceDescriptor::Lens { m, dim } => {
                if *m < 2 {
                    return Err(Error::Domain(format!("cyclic order m = {m} must be >= 2")));
                }
                if dim % 2 == 0 {
                    return Err(Error::Domain("lens space dimension must be odd".into()));
                }
                Ok(())
            }
            SpaceDescriptor::SphereProduct { degrees } => {
                if degrees.iter().any(|d| d % 2 == 0 || *d == 0) {
                    return Err(Error::Domain("sphere factors must have odd positive dimension".into()));
                }
                Ok(())
            }
            SpaceDescriptor::CP { .. } => Ok(()),
            SpaceDescriptor::Product { factors } => {
                factors.iter().try_for_each(SpaceDescriptor::validate)
            }
        }
    }

    /// Real dimension of the manifold: dim W = 2nk - k^2,
    /// dim PW = dim PLW = 2nk - k^2 - 1, dim WM = 2nk - k^2.
    pub fn dimension(&self) -> u32 {
        match self {
            SpaceDescriptor::W { n, k } | SpaceDescriptor::WM { n, k, .. } => 2 * n * k - k * k,
            SpaceDescriptor::PW { n, k }
            | SpaceDescriptor::PLW { n, k, .. }
            | SpaceDescriptor::Y { n, k } => 2 * n * k - k * k - 1,
            SpaceDescriptor::Lens { dim, .. } => *dim,
            SpaceDescriptor::SphereProduct { degrees } => degrees.iter().sum(),
            SpaceDescriptor::CP { n } => 2 * n,
            SpaceDescriptor::Product { factors } => factors.iter().map(|f| f.dimension()).sum(),
        }
    }

    /// Default table truncation: dimension + 2, confirming vanishing above
    /// the top degree.
    pub fn default_top_degree(&self) -> u32 {
        self.dimension() + 2
    }

    pub fn label(&self) -> String {
        match self {
            SpaceDescriptor::W { n, k } => format!("W({n},{k})"),
            SpaceDescriptor::PW { n, k } => format!("PW({n},{k})"),
            SpaceDescriptor::PLW { n, k, l } => {
                let ws: Vec<String> = l.iter().map(|x| x.to_string()).collect();
                format!("P_({})W({n},{k})", ws.join(","))
            }
            SpaceDescriptor::WM { n, k, m } => format!("W({n},{k};{m})"),
            SpaceDescriptor::Y { n, k } => format!("Y({n},{k})"),
            SpaceDescriptor::Lens { m, dim } => format!("L_{m}({dim})"),
            SpaceDescriptor::SphereProduct { degrees } => {
                if degrees.is_empty() {
                    "point".to_string()
                } else {
                    degrees
                        .iter()
                        .map(|d| format!("S^{d}"))
                        .collect::<Vec<_>>()
                        .join(" x ")
                }
            }
            SpaceDescriptor::CP { n } => format!("CP^{n}"),
            SpaceDescriptor::Product { factors } => factors
                .iter()
                .map(|f| f.label())
                .collect::<Vec<_>>()
                .join(" x "),
        }
    }
}

/// Transgression data of the circle-bundle fibration behind PW and PLW:
/// the fiber class of degree 2j - 1 maps to coefficient * x^j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationData {
    /// (j, coefficient), for j = n-k+1 ..= n, all coefficients nonzero.
    pub transgressions: Vec<(u32, BigInt)>,
}

impl FibrationData {
    /// Valuation of the leading (least-exponent) coefficient; the quotient
    /// table is torsion-free exactly when this is zero.
    pub fn leading_valuation(&self, p: u64) -> Valuation {
        self.transgressions
            .first()
            .map(|(_, c)| int_valuation(c, p))
            .unwrap_or(Valuation::Infinite)
    }
}

/// A built presentation together with regime notices and fibration data.
#[derive(Debug, Clone)]
pub struct SpacePresentation {
    pub descriptor: SpaceDescriptor,
    pub prime: u64,
    pub presentation: RingPresentation,
    /// Set when the builder substituted a reduced space (e.g. the cyclic
    /// quotient at p not dividing m reduces to the Stiefel manifold).
    pub notice: Option<String>,
    /// Present for PW and PLW, where the displayed generators-and-relations
    /// shorthand is backed by a fibration whose transgressions determine the
    /// honest module structure at torsion primes.
    pub fibration: Option<FibrationData>,
}

fn scalar(c: impl Into<BigInt>, p: u64) -> LocalScalar {
    LocalScalar::from_integer(c.into(), p).expect("odd prime checked by caller")
}

fn pure_power(gen: usize, e: u32) -> Monomial {
    Monomial { exterior: vec![], powers: vec![(gen, e)] }
}

fn check_prime(p: u64) -> Result<()> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{p} is not an odd prime")))
    }
}

/// Exact presentation of H^*( - ; Z_(p)) for the given space.
pub fn presentation(space: &SpaceDescriptor, p: u64) -> Result<SpacePresentation> {
    check_prime(p)?;
    space.validate()?;
    match space {
        SpaceDescriptor::W { n, k } => {
            let generators = (*n - *k + 1..=*n)
                .map(|j| Generator::odd(format!("z_{j}"), 2 * j - 1))
                .collect();
            Ok(SpacePresentation {
                descriptor: space.clone(),
                prime: p,
                presentation: RingPresentation::new(p, generators, vec![])?,
                notice: None,
                fibration: None,
            })
        }
        SpaceDescriptor::PW { n, k } => {
            let coeffs: Vec<(u32, BigInt)> = (*n - *k + 1..=*n)
                .map(|j| Ok((j, binomial(*n as u64, j as u64)?)))
                .collect::<Result<_>>()?;
            build_projective(space.clone(), p, *n, *k, coeffs)
        }
        SpaceDescriptor::PLW { n, k, l } => {
            let mut coeffs = Vec::new();
            for j in *n - *k + 1..=*n {
                let h = complete_symmetric_sum(l, j as usize)?;
                if h.is_zero() {
                    return Err(Error::UnsupportedRegime(format!(
                        "symmetric sum h_{j}({l:?}) vanishes; the displayed \
                         presentation shape does not apply to this weight tuple"
                    )));
                }
                // only valuations matter downstream: store |h_j|, the sign
                // (-1)^j is a unit
                coeffs.push((j, h.abs()));
            }
            build_projective(space.clone(), p, *n, *k, coeffs)
        }
        SpaceDescriptor::WM { n, k, m } => {
            if m % (p as u64) != 0 {
                // p does not divide m: p-locally the quotient is W itself
                let mut reduced = presentation(&SpaceDescriptor::W { n: *n, k: *k }, p)?;
                reduced.descriptor = space.clone();
                reduced.notice = Some(format!(
                    "p = {p} does not divide m = {m}; p-locally the quotient \
                     agrees with the Stiefel manifold, returning its presentation"
                ));
                return Ok(reduced);
            }
            if p <= *n as u64 {
                return Err(Error::UnsupportedRegime(format!(
                    "cyclic quotient with p | m is only presented for p > n \
                     (p = {p}, n = {n})"
                )));
            }
            let mut generators: Vec<Generator> = (*n - *k + 1..=*n)
                .map(|j| Generator::odd(format!("gamma_{j}"), 2 * j - 1))
                .collect();
            let x = generators.len();
            generators.push(Generator::even("x", 2));
            let ideal = vec![
                IdealTerm { coefficient: scalar(*m, p), monomial: pure_power(x, 1) },
                IdealTerm { coefficient: scalar(1, p), monomial: pure_power(x, *n - *k + 1) },
                IdealTerm {
                    coefficient: scalar(1, p),
                    monomial: Monomial { exterior: vec![0], powers: vec![(x, 1)] },
                },
            ];
            Ok(SpacePresentation {
                descriptor: space.clone(),
                prime: p,
                presentation: RingPresentation::new(p, generators, ideal)?,
                notice: None,
                fibration: None,
            })
        }
        SpaceDescriptor::Y { n, k } => {
            let mut generators: Vec<Generator> = (*n - *k + 2..=*n)
                .map(|j| Generator::odd(format!("epsilon_{}", 2 * j - 1), 2 * j - 1))
                .collect();
            let x = generators.len();
            generators.push(Generator::even("x", 2));
            let ideal = vec![IdealTerm {
                coefficient: scalar(1, p),
                monomial: pure_power(x, *n - *k + 1),
            }];
            Ok(SpacePresentation {
                descriptor: space.clone(),
                prime: p,
                presentation: RingPresentation::new(p, generators, ideal)?,
                notice: None,
                fibration: None,
            })
        }
        SpaceDescriptor::Lens { m, dim } => {
            if m % (p as u64) != 0 {
                let sphere = SpaceDescriptor::SphereProduct { degrees: vec![*dim] };
                let mut reduced = presentation(&sphere, p)?;
                reduced.descriptor = space.clone();
                reduced.notice = Some(format!(
                    "p = {p} does not divide m = {m}; the lens space is \
                     p-locally a sphere, returning its presentation"
                ));
                return Ok(reduced);
            }
            // L_m(2k+1) is the cyclic quotient of a sphere frame bundle; the
            // presentation is the k = 1 case of the WM shape
            let half = (*dim + 1) / 2; // dim = 2k+1, half = k+1
            let generators = vec![Generator::odd(format!("gamma_{half}"), *dim), Generator::even("x", 2)];
            let ideal = vec![
                IdealTerm { coefficient: scalar(*m, p), monomial: pure_power(1, 1) },
                IdealTerm { coefficient: scalar(1, p), monomial: pure_power(1, half) },
                IdealTerm {
                    coefficient: scalar(1, p),
                    monomial: Monomial { exterior: vec![0], powers: vec![(1, 1)] },
                },
            ];
            Ok(SpacePresentation {
                descriptor: space.clone(),
                prime: p,
                presentation: RingPresentation::new(p, generators, ideal)?,
                notice: None,
                fibration: None,
            })
        }
        SpaceDescriptor::SphereProduct { degrees } => {
            let mut generators = Vec::new();
            for (i, d) in degrees.iter().enumerate() {
                let dup = degrees[..i].iter().filter(|x| *x == d).count();
                let name = if dup == 0 {
                    format!("epsilon_{d}")
                } else {
                    format!("epsilon_{d}_{dup}")
                };
                generators.push(Generator::odd(name, *d));
            }
            Ok(SpacePresentation {
                descriptor: space.clone(),
                prime: p,
                presentation: RingPresentation::new(p, generators, vec![])?,
                notice: None,
                fibration: None,
            })
        }
        SpaceDescriptor::CP { n } => {
            let (generators, ideal) = if *n == 0 {
                (vec![], vec![])
            } else {
                (
                    vec![Generator::even("x", 2)],
                    vec![IdealTerm { coefficient: scalar(1, p), monomial: pure_power(0, *n + 1) }],
                )
            };
            Ok(SpacePresentation {
                descriptor: space.clone(),
                prime: p,
                presentation: RingPresentation::new(p, generators, ideal)?,
                notice: None,
                fibration: None,
            })
        }
        SpaceDescriptor::Product { .. } => Err(Error::Domain(
            "a product has no single presentation; its table is the Kunneth product".into(),
        )),
    }
}

/// Common builder for PW and PLW: exterior generators gamma_j for
/// j = n-k+2 ..= n and the ideal {c_j x^j | n-k+1 <= j <= n}.
fn build_projective(
    descriptor: SpaceDescriptor,
    p: u64,
    n: u32,
    k: u32,
    coeffs: Vec<(u32, BigInt)>,
) -> Result<SpacePresentation> {
    let mut generators: Vec<Generator> = (n - k + 2..=n)
        .map(|j| Generator::odd(format!("gamma_{j}"), 2 * j - 1))
        .collect();
    let x = generators.len();
    generators.push(Generator::even("x", 2));
    let ideal = coeffs
        .iter()
        .map(|(j, c)| IdealTerm {
            coefficient: scalar(c.clone(), p),
            monomial: pure_power(x, *j),
        })
        .collect();
    Ok(SpacePresentation {
        descriptor,
        prime: p,
        presentation: RingPresentation::new(p, generators, ideal)?,
        notice: None,
        fibration: Some(FibrationData { transgressions: coeffs }),
    })
}

/// Per-degree module table of the space.
///
/// For PW and PLW at primes where the leading transgression coefficient is a
/// non-unit, the naive quotient of the displayed presentation overcounts
/// (torsion monomials would survive above the manifold dimension); the table
/// is computed from the fibration cochain model instead, which carries the
/// honest structure. Everywhere else the two computations agree and the
/// direct quotient is used.
pub fn space_table(space: &SpaceDescriptor, p: u64, top_degree: u32) -> Result<GradedModuleTable> {
    check_prime(p)?;
    space.validate()?;
    if let SpaceDescriptor::Product { factors } = space {
        let mut acc = GradedModuleTable::empty(0);
        acc.add_free(0, 1);
        for f in factors {
            let ft = space_table(f, p, f.default_top_degree())?;
            acc = kunneth(&acc, &ft);
        }
        return Ok(retruncate(&acc, top_degree));
    }
    let built = presentation(space, p)?;
    if let Some(fib) = &built.fibration {
        if fib.leading_valuation(p) != Valuation::Finite(0) {
            return Ok(fibration_table(fib, built.prime, top_degree));
        }
    }
    graded_table(&built.presentation, top_degree)
}

/// Cohomology of the transgression cochain model, degree by degree.
pub fn fibration_table(fib: &FibrationData, p: u64, top_degree: u32) -> GradedModuleTable {
    let gens: Vec<OddGenerator> = fib
        .transgressions
        .iter()
        .map(|(j, c)| OddGenerator {
            name: format!("z_{j}"),
            degree: 2 * j - 1,
            base: false,
            differential: Some((c.clone(), *j)),
        })
        .collect();
    let x_bound = (top_degree + 1) / 2 + 1;
    let complex = KoszulComplex::new(p, gens, x_bound).expect("valid transgression data");
    complex.cohomology_table(top_degree)
}

/// Copy of `t` truncated (or formally extended) to `top_degree`.
pub fn retruncate(t: &GradedModuleTable, top_degree: u32) -> GradedModuleTable {
    let mut out = GradedModuleTable::empty(top_degree);
    for (&d, e) in &t.entries {
        out.add_free(d, e.free_rank);
        for &v in &e.torsion {
            out.add_torsion(d, v);
        }
    }
    out
}

/// The model space the splitting theorems compare against.
pub fn comparison_space(space: &SpaceDescriptor) -> Result<SpaceDescriptor> {
    space.validate()?;
    match space {
        SpaceDescriptor::PW { n, k } | SpaceDescriptor::PLW { n, k, .. } => {
            Ok(SpaceDescriptor::Y { n: *n, k: *k })
        }
        SpaceDescriptor::W { n, k } => Ok(SpaceDescriptor::SphereProduct {
            degrees: (n - k + 1..=*n).map(|j| 2 * j - 1).collect(),
        }),
        SpaceDescriptor::WM { n, k, m } => {
            let lens = SpaceDescriptor::Lens { m: *m, dim: 2 * (n - k) + 1 };
            if *k == 1 {
                return Ok(lens);
            }
            let spheres = SpaceDescriptor::SphereProduct {
                degrees: (n - k + 2..=*n).map(|j| 2 * j - 1).collect(),
            };
            Ok(SpaceDescriptor::Product { factors: vec![lens, spheres] })
        }
        other => Err(Error::Domain(format!(
            "{} is already a model space; no comparison space is defined",
            other.label()
        ))),
    }
}

/// One generator of the rational minimal model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelGenerator {
    pub name: String,
    pub degree: u32,
}

/// The Sullivan minimal model of PW(n,k): a polynomial generator x~ of
/// degree 2 and exterior generators y~_j of degree 2j-1 for
/// j = n-k+1 ..= n, with d(y~_{n-k+1}) = x~^{n-k+1} the only nonzero
/// differential.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalModel {
    pub polynomial_generator: ModelGenerator,
    pub exterior_generators: Vec<ModelGenerator>,
    /// (generator name, x~ power of its differential); generators not
    /// listed have zero differential.
    pub differentials: Vec<(String, u32)>,
}

impl MinimalModel {
    /// d raises degree by one and d(d(g)) = 0 for every generator: the
    /// differential hits only powers of the closed generator x~.
    pub fn differential_is_consistent(&self) -> bool {
        self.differentials.iter().all(|(name, power)| {
            let gen = self.exterior_generators.iter().find(|g| &g.name == name);
            match gen {
                Some(g) => g.degree + 1 == self.polynomial_generator.degree * power,
                None => false,
            }
        })
    }
}

pub fn minimal_model(n: u32, k: u32) -> Result<MinimalModel> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let exterior_generators: Vec<ModelGenerator> = (n - k + 1..=n)
        .map(|j| ModelGenerator { name: format!("y_{j}"), degree: 2 * j - 1 })
        .collect();
    Ok(MinimalModel {
        polynomial_generator: ModelGenerator { name: "x".into(), degree: 2 },
        exterior_generators,
        differentials: vec![(format!("y_{}", n - k + 1), n - k + 1)],
    })
}

/// One row of the generator ledger for PW(n,k): the degree 2j-1 generator
/// is characterized by rho_j = u_j - x^{j-(n-k+1)} (mu_j / mu_{n-k+1}) u_{n-k+1}
/// with mu_j = C(n,j).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoLedgerEntry {
    pub j: u32,
    #[serde(serialize_with = "crate::jsonutil::bigint_as_string")]
    pub mu_j: BigInt,
    /// mu_j / mu_{n-k+1}, exact.
    #[serde(serialize_with = "crate::jsonutil::rational_as_string")]
    pub coefficient: BigRational,
    /// Whether the coefficient lies in Z_(p); flagged false when
    /// v_p(mu_{n-k+1}) exceeds v_p(mu_j).
    pub coefficient_p_local: bool,
    pub x_power: u32,
}

/// Generator ledger for PW(n,k) at p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorLedger {
    /// The defining formula requires mu_{n-k+1} to be a unit in Z_(p).
    pub defined: bool,
    #[serde(serialize_with = "crate::jsonutil::bigint_as_string")]
    pub mu_leading: BigInt,
    pub entries: Vec<RhoLedgerEntry>,
}

pub fn generator_ledger(n: u32, k: u32, p: u64) -> Result<GeneratorLedger> {
    check_prime(p)?;
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let lead = binomial(n as u64, (n - k + 1) as u64)?;
    let defined = int_valuation(&lead, p) == Valuation::Finite(0);
    let mut entries = Vec::new();
    for j in n - k + 2..=n {
        let mu_j = binomial(n as u64, j as u64)?;
        let coefficient = BigRational::new(mu_j.clone(), lead.clone());
        let coefficient_p_local =
            crate::arith::rational_valuation(&coefficient, p) >= Valuation::Finite(0);
        entries.push(RhoLedgerEntry {
            j,
            mu_j,
            coefficient,
            coefficient_p_local,
            x_power: j - (n - k + 1),
        });
    }
    Ok(GeneratorLedger { defined, mu_leading: lead, entries })
}
