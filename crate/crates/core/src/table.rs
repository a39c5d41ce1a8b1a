//! Per-degree module structure of graded rings over Z_(p): free ranks plus
//! cyclic torsion orders p^v, the additive currency every comparison in this
//! crate is made in. E_infinity comparisons are associated-graded, so no ring
//! structure is recorded.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{Monomial, Parity, RingPresentation};
use crate::arith::Valuation;
use crate::error::{Error, Result};

/// Module structure in one cohomological degree: Z_(p)^rank + sum of Z/p^v.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct DegreeEntry {
    pub free_rank: u32,
    /// Torsion exponents v (each a summand Z/p^v, v >= 1), sorted ascending.
    pub torsion: Vec<u32>,
}

impl DegreeEntry {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// Graded module table, zero above `top_degree` by construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedModuleTable {
    pub top_degree: u32,
    /// Nonzero degrees only.
    pub entries: BTreeMap<u32, DegreeEntry>,
}

impl GradedModuleTable {
    pub fn empty(top_degree: u32) -> Self {
        GradedModuleTable { top_degree, entries: BTreeMap::new() }
    }

    pub fn add_free(&mut self, degree: u32, rank: u32) {
        if rank == 0 || degree > self.top_degree {
            return;
        }
        self.entries.entry(degree).or_default().free_rank += rank;
    }

    pub fn add_torsion(&mut self, degree: u32, exponent: u32) {
        if exponent == 0 || degree > self.top_degree {
            return;
        }
        let entry = self.entries.entry(degree).or_default();
        let pos = entry.torsion.partition_point(|&e| e <= exponent);
        entry.torsion.insert(pos, exponent);
    }

    pub fn entry(&self, degree: u32) -> DegreeEntry {
        self.entries.get(&degree).cloned().unwrap_or_default()
    }

    pub fn free_rank(&self, degree: u32) -> u32 {
        self.entries.get(&degree).map(|e| e.free_rank).unwrap_or(0)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.entries.values().all(|e| e.torsion.is_empty())
    }

    /// Largest degree carrying a nonzero entry, `None` for the zero table.
    pub fn top_nonzero_degree(&self) -> Option<u32> {
        self.entries.iter().rev().find(|(_, e)| !e.is_zero()).map(|(d, _)| *d)
    }

    pub fn total_free_rank(&self) -> u32 {
        self.entries.values().map(|e| e.free_rank).sum()
    }

    /// Degrees of a free basis, with multiplicity, ascending. These are the
    /// p-local sphere dimensions of a stable wedge with this table.
    pub fn free_degrees(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (&d, e) in &self.entries {
            for _ in 0..e.free_rank {
                out.push(d);
            }
        }
        out
    }
}

impl fmt::Display for GradedModuleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (d, e) in &self.entries {
            let mut parts = Vec::new();
            if e.free_rank > 0 {
                parts.push(format!("free^{}", e.free_rank));
            }
            for &v in &e.torsion {
                parts.push(format!("Z/p^{v}"));
            }
            writeln!(f, "H^{d} = {}", parts.join(" + "))?;
        }
        Ok(())
    }
}

/// Per-degree structure of the quotient by a `scalar * monomial` ideal.
///
/// Because every ideal element is a scalar times a monomial, the degree-d
/// part of the ideal splits as a direct sum over basis monomials, and each
/// monomial is annihilated by exactly p^v with v the minimal coefficient
/// valuation over the ideal terms dividing it. Monomials with a unit divisor
/// are excluded from the basis.
pub fn graded_table(pres: &RingPresentation, top_degree: u32) -> Result<GradedModuleTable> {
    for term in pres.ideal() {
        let even_gens = term.monomial.powers.len();
        if even_gens > 1 {
            return Err(Error::UnsupportedIdeal(format!(
                "ideal term {} involves more than one even generator",
                pres.display_monomial(&term.monomial)
            )));
        }
        if even_gens == 0 {
            return Err(Error::UnsupportedIdeal(format!(
                "ideal term {} has no even-generator power",
                pres.display_monomial(&term.monomial)
            )));
        }
    }
    let mut table = GradedModuleTable::empty(top_degree);
    for m in enumerate_monomials(pres, top_degree) {
        let degree = pres.monomial_degree(&m);
        match pres.annihilator_valuation(&m) {
            Valuation::Infinite => table.add_free(degree, 1),
            Valuation::Finite(0) => {}
            Valuation::Finite(v) => table.add_torsion(degree, v as u32),
        }
    }
    Ok(table)
}

/// All monomials of degree <= `top_degree`: exterior subsets times bounded
/// even powers. Even exponents are bounded by the degree cap; unit pure-power
/// truncations make the result finite regardless (enforced at construction).
pub fn enumerate_monomials(pres: &RingPresentation, top_degree: u32) -> Vec<Monomial> {
    let odd: Vec<usize> = (0..pres.generators().len())
        .filter(|&i| pres.generators()[i].parity == Parity::Odd)
        .collect();
    let even: Vec<usize> = (0..pres.generators().len())
        .filter(|&i| pres.generators()[i].parity == Parity::Even)
        .collect();

    let mut out = Vec::new();
    let mut subset = Vec::new();
    collect_subsets(pres, &odd, &even, 0, top_degree, &mut subset, &mut out);
    out
}

fn collect_subsets(
    pres: &RingPresentation,
    odd: &[usize],
    even: &[usize],
    from: usize,
    budget: u32,
    subset: &mut Vec<usize>,
    out: &mut Vec<Monomial>,
) {
    let mut powers = Vec::new();
    collect_powers(pres, even, 0, budget, subset, &mut powers, out);
    for idx in from..odd.len() {
        let g = odd[idx];
        let d = pres.generators()[g].degree;
        if d > budget {
            continue;
        }
        subset.push(g);
        collect_subsets(pres, odd, even, idx + 1, budget - d, subset, out);
        subset.pop();
    }
}

fn collect_powers(
    pres: &RingPresentation,
    even: &[usize],
    from: usize,
    budget: u32,
    subset: &[usize],
    powers: &mut Vec<(usize, u32)>,
    out: &mut Vec<Monomial>,
) {
    if from == even.len() {
        out.push(Monomial { exterior: subset.to_vec(), powers: powers.clone() });
        return;
    }
    let g = even[from];
    let d = pres.generators()[g].degree;
    let mut e = 0u32;
    loop {
        let cost = d * e;
        if cost > budget {
            break;
        }
        if e > 0 {
            powers.push((g, e));
        }
        collect_powers(pres, even, from + 1, budget - cost, subset, powers, out);
        if e > 0 {
            powers.pop();
        }
        e += 1;
    }
}

/// Integer-coefficient polynomial in t, used for Poincare series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntPolynomial {
    /// coeffs[d] = coefficient of t^d
    pub coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn evaluate(&self, t: i64) -> i64 {
        self.coeffs.iter().rev().fold(0i64, |acc, &c| acc * t + c)
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.iter().rposition(|&c| c != 0).map(|d| d as u32)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(d, &c)| match (d, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}*t"),
                (d, 1) => format!("t^{d}"),
                (d, c) => format!("{c}*t^{d}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Free Betti numbers as a polynomial: sum of (free rank in degree d) t^d.
/// Torsion is excluded.
pub fn poincare_polynomial(table: &GradedModuleTable) -> IntPolynomial {
    let top = table.top_nonzero_degree().unwrap_or(0) as usize;
    let mut coeffs = vec![0i64; top + 1];
    for (&d, e) in &table.entries {
        if e.free_rank > 0 {
            coeffs[d as usize] = e.free_rank as i64;
        }
    }
    IntPolynomial { coeffs }
}

/// Kunneth formula over the PID Z_(p):
/// H^d(X x Y) = sum_{i+j=d} H^i (x) H^j  +  sum_{i+j=d+1} Tor(H^i, H^j),
/// with Z/p^a (x) Z/p^b = Tor(Z/p^a, Z/p^b) = Z/p^min(a,b).
pub fn kunneth(a: &GradedModuleTable, b: &GradedModuleTable) -> GradedModuleTable {
    let top = a.top_degree + b.top_degree;
    let mut out = GradedModuleTable::empty(top);
    for (&i, ea) in &a.entries {
        for (&j, eb) in &b.entries {
            let d = i + j;
            out.add_free(d, ea.free_rank * eb.free_rank);
            for &ta in &ea.torsion {
                for _ in 0..eb.free_rank {
                    out.add_torsion(d, ta);
                }
            }
            for &tb in &eb.torsion {
                for _ in 0..ea.free_rank {
                    out.add_torsion(d, tb);
                }
            }
            for &ta in &ea.torsion {
                for &tb in &eb.torsion {
                    out.add_torsion(d, ta.min(tb));
                    // Tor term, one degree below the product degree
                    if d > 0 {
                        out.add_torsion(d - 1, ta.min(tb));
                    }
                }
            }
        }
    }
    out
}

/// One disagreeing degree in a table comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeMismatch {
    pub degree: u32,
    pub left: DegreeEntry,
    pub right: DegreeEntry,
}

/// Degreewise comparison of free ranks and torsion multisets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub top_degree: u32,
    pub mismatches: Vec<DegreeMismatch>,
}

impl ComparisonReport {
    pub fn matches(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn first_mismatch(&self) -> Option<&DegreeMismatch> {
        self.mismatches.first()
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.matches() {
            write!(f, "tables agree up to degree {}", self.top_degree)
        } else {
            let m = &self.mismatches[0];
            write!(
                f,
                "{} mismatching degree(s); first at degree {}: \
                 left free {} torsion {:?}, right free {} torsion {:?}",
                self.mismatches.len(),
                m.degree,
                m.left.free_rank,
                m.left.torsion,
                m.right.free_rank,
                m.right.torsion
            )
        }
    }
}

/// Compare two tables with the same truncation, degree by degree.
pub fn compare_tables(a: &GradedModuleTable, b: &GradedModuleTable) -> Result<ComparisonReport> {
    if a.top_degree != b.top_degree {
        return Err(Error::Domain(format!(
            "comparing tables with different truncations ({} vs {})",
            a.top_degree, b.top_degree
        )));
    }
    let mut mismatches = Vec::new();
    for d in 0..=a.top_degree {
        let left = a.entry(d);
        let right = b.entry(d);
        if left != right {
            mismatches.push(DegreeMismatch { degree: d, left, right });
        }
    }
    Ok(ComparisonReport { top_degree: a.top_degree, mismatches })
}
