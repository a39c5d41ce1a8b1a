//! Graded-commutative algebra over Z_(p).
//!
//! A presentation is an exterior algebra on odd generators tensored with a
//! polynomial algebra on even generators, modulo an ideal whose elements are
//! all of the shape `scalar * monomial`. Every ring in scope has this form,
//! which is why no general ideal machinery (Groebner bases, normal forms for
//! mixed relations) exists here.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{LocalScalar, Valuation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// A ring generator. Odd parity means exterior (square-zero, odd degree),
/// even parity means polynomial (even degree).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    pub parity: Parity,
}

impl Generator {
    pub fn odd(name: impl Into<String>, degree: u32) -> Self {
        Generator { name: name.into(), degree, parity: Parity::Odd }
    }

    pub fn even(name: impl Into<String>, degree: u32) -> Self {
        Generator { name: name.into(), degree, parity: Parity::Even }
    }
}

/// Index of a generator within its presentation.
pub type GenId = usize;

/// A monomial: a strictly increasing list of odd generators (each appears at
/// most once) and exponents on even generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    /// Odd generator ids, strictly increasing.
    pub exterior: Vec<GenId>,
    /// (even generator id, exponent > 0), sorted by id.
    pub powers: Vec<(GenId, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.exterior.is_empty() && self.powers.is_empty()
    }

    pub fn exponent_of(&self, g: GenId) -> u32 {
        self.powers
            .iter()
            .find(|(id, _)| *id == g)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    /// True iff `self` divides `other` (exterior support contained, even
    /// exponents componentwise smaller).
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exterior.iter().all(|g| other.exterior.contains(g))
            && self
                .powers
                .iter()
                .all(|(g, e)| other.exponent_of(*g) >= *e)
    }
}

/// One ideal element: a nonzero Z_(p) scalar times a monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealTerm {
    pub coefficient: LocalScalar,
    pub monomial: Monomial,
}

#[derive(Debug, PartialEq, Eq)]
struct PresentationInner {
    prime: u64,
    generators: Vec<Generator>,
    ideal: Vec<IdealTerm>,
}

/// An immutable graded-commutative presentation over Z_(p). Cheap to clone
/// and safe to share across threads.
#[derive(Debug, Clone)]
pub struct RingPresentation {
    inner: Arc<PresentationInner>,
}

impl PartialEq for RingPresentation {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}

impl Eq for RingPresentation {}

impl RingPresentation {
    /// Validates parity/degree consistency, name uniqueness, nonzero p-local
    /// ideal coefficients, and degreewise finiteness: every even generator
    /// must be truncated by a unit pure-power relation, otherwise the table
    /// would not vanish above any degree.
    pub fn new(prime: u64, generators: Vec<Generator>, ideal: Vec<IdealTerm>) -> Result<Self> {
        crate::arith::is_odd_prime(prime)
            .then_some(())
            .ok_or_else(|| Error::Domain(format!("{prime} is not an odd prime")))?;
        for (i, g) in generators.iter().enumerate() {
            let ok = match g.parity {
                Parity::Odd => g.degree % 2 == 1,
                Parity::Even => g.degree % 2 == 0 && g.degree > 0,
            };
            if !ok {
                return Err(Error::Domain(format!(
                    "generator {} has degree {} inconsistent with its parity",
                    g.name, g.degree
                )));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::Domain(format!("duplicate generator name {}", g.name)));
            }
        }
        for term in &ideal {
            if term.coefficient.is_zero() {
                return Err(Error::Domain("zero ideal coefficient".into()));
            }
            if term.coefficient.prime() != prime {
                return Err(Error::Domain("ideal coefficient over a different prime".into()));
            }
            if !term.coefficient.is_p_local() {
                return Err(Error::Domain(format!(
                    "ideal coefficient {} is not in Z_({prime})",
                    term.coefficient
                )));
            }
            if term.monomial.is_one() {
                return Err(Error::Domain("ideal contains a unit monomial".into()));
            }
            Self::check_monomial_against(&generators, &term.monomial)?;
        }
        // Degreewise finiteness: each even generator needs a unit pure power.
        for (id, g) in generators.iter().enumerate() {
            if g.parity != Parity::Even {
                continue;
            }
            let truncated = ideal.iter().any(|t| {
                t.monomial.exterior.is_empty()
                    && t.monomial.powers.len() == 1
                    && t.monomial.powers[0].0 == id
                    && t.coefficient.is_unit()
            });
            if !truncated {
                return Err(Error::UnsupportedIdeal(format!(
                    "even generator {} has no unit pure-power relation; \
                     the module would not vanish above any degree",
                    g.name
                )));
            }
        }
        Ok(RingPresentation {
            inner: Arc::new(PresentationInner { prime, generators, ideal }),
        })
    }

    fn check_monomial_against(generators: &[Generator], m: &Monomial) -> Result<()> {
        let mut prev: Option<GenId> = None;
        for &g in &m.exterior {
            let gen = generators
                .get(g)
                .ok_or_else(|| Error::Domain(format!("monomial references unknown generator {g}")))?;
            if gen.parity != Parity::Odd {
                return Err(Error::Domain(format!("{} used as exterior factor", gen.name)));
            }
            if prev.is_some_and(|p| p >= g) {
                return Err(Error::Domain("exterior part not strictly increasing".into()));
            }
            prev = Some(g);
        }
        let mut prevp: Option<GenId> = None;
        for &(g, e) in &m.powers {
            let gen = generators
                .get(g)
                .ok_or_else(|| Error::Domain(format!("monomial references unknown generator {g}")))?;
            if gen.parity != Parity::Even {
                return Err(Error::Domain(format!("{} used as polynomial factor", gen.name)));
            }
            if e == 0 {
                return Err(Error::Domain("zero exponent stored in monomial".into()));
            }
            if prevp.is_some_and(|p| p >= g) {
                return Err(Error::Domain("power list not sorted".into()));
            }
            prevp = Some(g);
        }
        Ok(())
    }

    pub fn prime(&self) -> u64 {
        self.inner.prime
    }

    pub fn generators(&self) -> &[Generator] {
        &self.inner.generators
    }

    pub fn ideal(&self) -> &[IdealTerm] {
        &self.inner.ideal
    }

    pub fn generator_id(&self, name: &str) -> Option<GenId> {
        self.inner.generators.iter().position(|g| g.name == name)
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        let ext: u32 = m.exterior.iter().map(|&g| self.inner.generators[g].degree).sum();
        let pol: u32 = m
            .powers
            .iter()
            .map(|&(g, e)| self.inner.generators[g].degree * e)
            .sum();
        ext + pol
    }

    pub fn validate_monomial(&self, m: &Monomial) -> Result<()> {
        Self::check_monomial_against(&self.inner.generators, m)
    }

    /// Minimal valuation of ideal coefficients over all terms dividing `m`;
    /// `Infinite` when no term divides (the monomial is a free basis element),
    /// `Finite(0)` when a unit relation kills it.
    pub fn annihilator_valuation(&self, m: &Monomial) -> Valuation {
        self.inner
            .ideal
            .iter()
            .filter(|t| t.monomial.divides(m))
            .map(|t| t.coefficient.valuation())
            .fold(Valuation::Infinite, Valuation::min)
    }

    /// True iff a unit-coefficient ideal monomial divides `m`, i.e. the
    /// monomial is zero in the quotient.
    pub fn monomial_is_zero(&self, m: &Monomial) -> bool {
        self.annihilator_valuation(m) == Valuation::Finite(0)
    }

    pub fn zero(&self) -> Element {
        Element { presentation: self.clone(), terms: Vec::new() }
    }

    pub fn element(&self, terms: Vec<(LocalScalar, Monomial)>) -> Result<Element> {
        let mut el = self.zero();
        for (c, m) in terms {
            if c.prime() != self.prime() {
                return Err(Error::Domain("scalar over a different prime".into()));
            }
            self.validate_monomial(&m)?;
            el.add_term(&c, m);
        }
        Ok(el)
    }

    pub fn monomial_element(&self, m: Monomial) -> Result<Element> {
        self.element(vec![(LocalScalar::one(self.prime()), m)])
    }

    pub fn generator_element(&self, name: &str) -> Result<Element> {
        let id = self
            .generator_id(name)
            .ok_or_else(|| Error::Domain(format!("no generator named {name}")))?;
        let m = match self.inner.generators[id].parity {
            Parity::Odd => Monomial { exterior: vec![id], powers: vec![] },
            Parity::Even => Monomial { exterior: vec![], powers: vec![(id, 1)] },
        };
        self.monomial_element(m)
    }

    /// Graded-commutative product with the Koszul sign on odd-generator
    /// transpositions, reduced modulo exterior squares and unit-coefficient
    /// ideal monomials.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        if a.presentation != *self || b.presentation != *self {
            return Err(Error::Domain("elements from mismatched presentations".into()));
        }
        let mut out = self.zero();
        for (ca, ma) in &a.terms {
            for (cb, mb) in &b.terms {
                if let Some((sign, m)) = self.multiply_monomials(ma, mb) {
                    let mut c = ca * cb;
                    if sign < 0 {
                        c = -c;
                    }
                    out.add_term(&c, m);
                }
            }
        }
        Ok(out)
    }

    /// Monomial product: `None` when an exterior square or a unit relation
    /// kills it. Sign is the parity of the merge inversions of the two
    /// exterior lists.
    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(i32, Monomial)> {
        let mut ext = Vec::with_capacity(a.exterior.len() + b.exterior.len());
        let mut inversions = 0usize;
        let (mut i, mut j) = (0usize, 0usize);
        while i < a.exterior.len() && j < b.exterior.len() {
            if a.exterior[i] == b.exterior[j] {
                return None; // exterior square
            }
            if a.exterior[i] < b.exterior[j] {
                ext.push(a.exterior[i]);
                i += 1;
            } else {
                // b's generator moves past the remaining a-generators
                inversions += a.exterior.len() - i;
                ext.push(b.exterior[j]);
                j += 1;
            }
        }
        ext.extend_from_slice(&a.exterior[i..]);
        ext.extend_from_slice(&b.exterior[j..]);

        let mut powers = a.powers.clone();
        for &(g, e) in &b.powers {
            match powers.iter_mut().find(|(h, _)| *h == g) {
                Some((_, old)) => *old += e,
                None => powers.push((g, e)),
            }
        }
        powers.sort_by_key(|&(g, _)| g);

        let m = Monomial { exterior: ext, powers };
        if self.monomial_is_zero(&m) {
            return None;
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((sign, m))
    }

    pub fn display_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let mut parts: Vec<String> = m
            .exterior
            .iter()
            .map(|&g| self.inner.generators[g].name.clone())
            .collect();
        for &(g, e) in &m.powers {
            let name = &self.inner.generators[g].name;
            if e == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{e}"));
            }
        }
        parts.join("*")
    }
}

/// A finite Z_(p)-linear combination of monomials in a fixed presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    presentation: RingPresentation,
    /// (coefficient, monomial), sorted by monomial, no zero coefficients.
    terms: Vec<(LocalScalar, Monomial)>,
}

impl Element {
    pub fn terms(&self) -> &[(LocalScalar, Monomial)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn presentation(&self) -> &RingPresentation {
        &self.presentation
    }

    fn add_term(&mut self, c: &LocalScalar, m: Monomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.binary_search_by(|(_, tm)| tm.cmp(&m)) {
            Ok(pos) => {
                let merged = &self.terms[pos].0 + c;
                if merged.is_zero() {
                    self.terms.remove(pos);
                } else {
                    self.terms[pos].0 = merged;
                }
            }
            Err(pos) => self.terms.insert(pos, (c.clone(), m)),
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        if self.presentation != other.presentation {
            return Err(Error::Domain("elements from mismatched presentations".into()));
        }
        let mut out = self.clone();
        for (c, m) in &other.terms {
            out.add_term(c, m.clone());
        }
        Ok(out)
    }

    pub fn negate(&self) -> Element {
        Element {
            presentation: self.presentation.clone(),
            terms: self.terms.iter().map(|(c, m)| (-c, m.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &LocalScalar) -> Element {
        let mut out = self.presentation.zero();
        for (tc, m) in &self.terms {
            out.add_term(&(tc * c), m.clone());
        }
        out
    }

    /// Homogeneous degree if all monomials agree, `None` for 0 or mixed.
    pub fn degree(&self) -> Option<u32> {
        let mut degs = self
            .terms
            .iter()
            .map(|(_, m)| self.presentation.monomial_degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(c, m)| {
                if m.is_one() {
                    format!("{c}")
                } else if c == &LocalScalar::one(c.prime()) {
                    self.presentation.display_monomial(m)
                } else {
                    format!("{c}*{}", self.presentation.display_monomial(m))
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Lambda(g0, g1, g2) tensor Z_(p)[x] / (x^5), degrees 3, 5, 7, 2.
    fn sample_presentation(p: u64) -> RingPresentation {
        RingPresentation::new(
            p,
            vec![
                Generator::odd("g0", 3),
                Generator::odd("g1", 5),
                Generator::odd("g2", 7),
                Generator::even("x", 2),
            ],
            vec![IdealTerm {
                coefficient: LocalScalar::one(p),
                monomial: Monomial { exterior: vec![], powers: vec![(3, 5)] },
            }],
        )
        .unwrap()
    }

    #[test]
    fn koszul_sign_on_transposition() {
        let pres = sample_presentation(5);
        let a = pres.generator_element("g0").unwrap();
        let b = pres.generator_element("g1").unwrap();
        let ab = pres.multiply(&a, &b).unwrap();
        let ba = pres.multiply(&b, &a).unwrap();
        assert_eq!(ab, ba.negate());
        assert!(!ab.is_zero());
    }

    #[test]
    fn exterior_square_vanishes() {
        let pres = sample_presentation(5);
        let a = pres.generator_element("g1").unwrap();
        assert!(pres.multiply(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn polynomial_truncation() {
        let pres = sample_presentation(5);
        let x = pres.generator_element("x").unwrap();
        let x2 = pres.multiply(&x, &x).unwrap();
        let x4 = pres.multiply(&x2, &x2).unwrap();
        assert!(!x4.is_zero());
        assert!(pres.multiply(&x4, &x).unwrap().is_zero());
        assert!(pres.multiply(&x4, &x2).unwrap().is_zero());
    }

    #[test]
    fn mismatched_presentations_rejected() {
        let p5 = sample_presentation(5);
        let p7 = sample_presentation(7);
        let a = p5.generator_element("g0").unwrap();
        let b = p7.generator_element("g1").unwrap();
        assert!(p5.multiply(&a, &b).is_err());
    }

    #[test]
    fn degreewise_finiteness_enforced() {
        // x with no unit truncation: rejected
        let bad = RingPresentation::new(
            5,
            vec![Generator::even("x", 2)],
            vec![IdealTerm {
                coefficient: LocalScalar::from_integer(5, 5).unwrap(),
                monomial: Monomial { exterior: vec![], powers: vec![(0, 3)] },
            }],
        );
        assert!(matches!(bad, Err(Error::UnsupportedIdeal(_))));
    }

    #[test]
    fn parity_validation() {
        assert!(RingPresentation::new(5, vec![Generator::odd("z", 4)], vec![]).is_err());
        assert!(RingPresentation::new(5, vec![Generator::even("x", 3)], vec![]).is_err());
        assert!(RingPresentation::new(
            5,
            vec![Generator::odd("z", 3), Generator::odd("z", 5)],
            vec![]
        )
        .is_err());
    }

    /// All monomials of the sample presentation, the sample space for the
    /// property tests below.
    fn all_sample_monomials() -> Vec<Monomial> {
        let mut v = Vec::new();
        for mask in 0u32..8 {
            for a in 0u32..5 {
                let exterior: Vec<GenId> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
                let powers = if a > 0 { vec![(3usize, a)] } else { vec![] };
                v.push(Monomial { exterior, powers });
            }
        }
        v
    }

    fn element_from_picks(pres: &RingPresentation, picks: &[(usize, i64)]) -> Element {
        let monos = all_sample_monomials();
        let terms = picks
            .iter()
            .map(|&(i, c)| {
                (
                    LocalScalar::from_integer(c, pres.prime()).unwrap(),
                    monos[i % monos.len()].clone(),
                )
            })
            .collect();
        pres.element(terms).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]

        #[test]
        fn multiplication_associative(
            pa in proptest::collection::vec((0usize..40, -4i64..5), 1..4),
            pb in proptest::collection::vec((0usize..40, -4i64..5), 1..4),
            pc in proptest::collection::vec((0usize..40, -4i64..5), 1..4),
        ) {
            let pres = sample_presentation(5);
            let a = element_from_picks(&pres, &pa);
            let b = element_from_picks(&pres, &pb);
            let c = element_from_picks(&pres, &pc);
            let lhs = pres.multiply(&pres.multiply(&a, &b).unwrap(), &c).unwrap();
            let rhs = pres.multiply(&a, &pres.multiply(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]

        #[test]
        fn multiplication_graded_commutative(
            mask_a in 0u32..8, pow_a in 0u32..3,
            mask_b in 0u32..8, pow_b in 0u32..3,
        ) {
            let pres = sample_presentation(7);
            let mk = |mask: u32, a: u32| {
                let exterior: Vec<GenId> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
                let powers = if a > 0 { vec![(3usize, a)] } else { vec![] };
                Monomial { exterior, powers }
            };
            let ma = mk(mask_a, pow_a);
            let mb = mk(mask_b, pow_b);
            let da = pres.monomial_degree(&ma);
            let db = pres.monomial_degree(&mb);
            let a = pres.monomial_element(ma).unwrap();
            let b = pres.monomial_element(mb).unwrap();
            let ab = pres.multiply(&a, &b).unwrap();
            let ba = pres.multiply(&b, &a).unwrap();
            let expected = if (da % 2 == 1) && (db % 2 == 1) { ba.negate() } else { ba };
            prop_assert_eq!(ab, expected);
        }
    }
}
