//! Monomial cochain model for the fibrations in scope.
//!
//! The total complex is Lambda(g_1, ..., g_m) (x) Z_(p)[x] / (x^{bound+1})
//! with a differential sending each odd generator to `c * x^shift` and
//! extended as a derivation with Koszul signs. Monomials are (bitmask, x
//! exponent) pairs, small enough that dense enumeration is the right tool.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{kernel_lattice, quotient_module, Mat};
use crate::table::GradedModuleTable;

/// One odd generator of the cochain model.
#[derive(Debug, Clone)]
pub struct OddGenerator {
    pub name: String,
    pub degree: u32,
    /// True when the generator carries base degree (filtration weight) in
    /// the spectral-sequence reading of the complex.
    pub base: bool,
    /// D(g) = coefficient * x^shift; `None` for a cocycle generator.
    pub differential: Option<(BigInt, u32)>,
}

/// Monomial: subset of odd generators (bitmask) times x^exp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KMono {
    pub mask: u32,
    pub xexp: u32,
}

#[derive(Debug, Clone)]
pub struct KoszulComplex {
    prime: u64,
    gens: Vec<OddGenerator>,
    x_bound: u32,
    monomials: Vec<KMono>,
    index: HashMap<KMono, usize>,
    by_degree: BTreeMap<u32, Vec<usize>>,
}

impl KoszulComplex {
    pub fn new(prime: u64, gens: Vec<OddGenerator>, x_bound: u32) -> Result<Self> {
        if gens.len() > 30 {
            return Err(Error::Domain("too many odd generators".into()));
        }
        for g in &gens {
            if g.degree % 2 == 0 {
                return Err(Error::Domain(format!("odd generator {} has even degree", g.name)));
            }
            if let Some((_, shift)) = &g.differential {
                if *shift == 0 {
                    return Err(Error::Domain("differential with zero x-shift".into()));
                }
                if g.degree + 1 != 2 * shift {
                    return Err(Error::Domain(format!(
                        "differential of {} does not raise degree by one",
                        g.name
                    )));
                }
            }
        }
        let mut complex = KoszulComplex {
            prime,
            gens,
            x_bound,
            monomials: Vec::new(),
            index: HashMap::new(),
            by_degree: BTreeMap::new(),
        };
        let count = 1u32 << complex.gens.len();
        for mask in 0..count {
            for xexp in 0..=x_bound {
                complex.push_monomial(KMono { mask, xexp });
            }
        }
        Ok(complex)
    }

    fn push_monomial(&mut self, m: KMono) {
        let id = self.monomials.len();
        self.monomials.push(m);
        self.index.insert(m, id);
        let d = self.degree(&m);
        self.by_degree.entry(d).or_default().push(id);
    }

    /// Test hook: rebuild with a rotated enumeration order. Output tables
    /// must not depend on this.
    #[doc(hidden)]
    pub fn with_rotated_order(&self, rotate: usize) -> Self {
        let mut complex = KoszulComplex {
            prime: self.prime,
            gens: self.gens.clone(),
            x_bound: self.x_bound,
            monomials: Vec::new(),
            index: HashMap::new(),
            by_degree: BTreeMap::new(),
        };
        let n = self.monomials.len();
        let r = rotate % n.max(1);
        for i in 0..n {
            complex.push_monomial(self.monomials[(i + r) % n]);
        }
        complex
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn generators(&self) -> &[OddGenerator] {
        &self.gens
    }

    pub fn x_bound(&self) -> u32 {
        self.x_bound
    }

    pub fn degree(&self, m: &KMono) -> u32 {
        let mut d = 2 * m.xexp;
        for (i, g) in self.gens.iter().enumerate() {
            if m.mask & (1 << i) != 0 {
                d += g.degree;
            }
        }
        d
    }

    /// Base degree of the monomial: x-part plus any base odd generators.
    pub fn filtration(&self, m: &KMono) -> u32 {
        let mut s = 2 * m.xexp;
        for (i, g) in self.gens.iter().enumerate() {
            if g.base && m.mask & (1 << i) != 0 {
                s += g.degree;
            }
        }
        s
    }

    pub fn monomial_ids_of_degree(&self, d: u32) -> &[usize] {
        self.by_degree.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn monomial(&self, id: usize) -> KMono {
        self.monomials[id]
    }

    pub fn max_degree(&self) -> u32 {
        *self.by_degree.keys().last().unwrap_or(&0)
    }

    /// D of a monomial as (coefficient, monomial id) pairs. Terms whose x
    /// exponent overflows the bound are dropped; the cancelling pairs in
    /// D(D(m)) are dropped together, so D stays a differential.
    pub fn differential(&self, m: &KMono) -> Vec<(BigRational, usize)> {
        let mut out = Vec::new();
        let mut sign_flips = 0u32;
        for (i, g) in self.gens.iter().enumerate() {
            if m.mask & (1 << i) == 0 {
                continue;
            }
            if let Some((c, shift)) = &g.differential {
                let target = KMono { mask: m.mask & !(1 << i), xexp: m.xexp + shift };
                if target.xexp <= self.x_bound {
                    let mut coeff = BigRational::from_integer(c.clone());
                    if sign_flips % 2 == 1 {
                        coeff = -coeff;
                    }
                    if !coeff.is_zero() {
                        out.push((coeff, self.index[&target]));
                    }
                }
            }
            sign_flips += 1;
        }
        out
    }

    /// Matrix of D restricted to degree d, rows indexed by the degree d+1
    /// monomials in enumeration order.
    pub fn differential_matrix(&self, d: u32) -> Mat {
        let sources = self.monomial_ids_of_degree(d);
        let targets = self.monomial_ids_of_degree(d + 1);
        let tpos: HashMap<usize, usize> =
            targets.iter().enumerate().map(|(row, &id)| (id, row)).collect();
        let mut mat = Mat::zeros(targets.len(), sources.len());
        for (col, &id) in sources.iter().enumerate() {
            for (coeff, target) in self.differential(&self.monomials[id]) {
                mat.set(tpos[&target], col, coeff);
            }
        }
        mat
    }

    /// Cohomology of the total complex, degree by degree, as a graded table.
    ///
    /// For degrees <= top_degree the x-bound never truncates a differential
    /// target provided `x_bound >= (top_degree + 1) / 2 + max_shift`, which
    /// the callers arrange; the kernel and image at degree d only involve
    /// monomials of degrees d-1, d, d+1.
    pub fn cohomology_table(&self, top_degree: u32) -> GradedModuleTable {
        let mut table = GradedModuleTable::empty(top_degree);
        for d in 0..=top_degree {
            if self.monomial_ids_of_degree(d).is_empty() {
                continue;
            }
            let d_out = self.differential_matrix(d);
            let kernel = kernel_lattice(&d_out, self.prime);
            let image = if d == 0 {
                Mat::zeros(kernel.rows, 0)
            } else {
                self.differential_matrix(d - 1)
            };
            let q = quotient_module(&kernel, &image, self.prime);
            table.add_free(d, q.free_rank());
            for e in q.torsion_exponents() {
                table.add_torsion(d, e);
            }
        }
        table
    }

    /// Check D(D(m)) = 0 for every monomial.
    pub fn differential_squares_to_zero(&self) -> bool {
        for m in &self.monomials {
            let mut acc: HashMap<usize, BigRational> = HashMap::new();
            for (c, mid) in self.differential(m) {
                for (c2, target) in self.differential(&self.monomials[mid]) {
                    *acc.entry(target).or_insert_with(BigRational::zero) += &c * &c2;
                }
            }
            if acc.values().any(|v| !v.is_zero()) {
                return false;
            }
        }
        true
    }

    /// Koszul product of two monomials: `None` on an exterior collision or
    /// when the x exponent overflows the bound.
    pub fn multiply(&self, a: &KMono, b: &KMono) -> Option<(i32, KMono)> {
        if a.mask & b.mask != 0 {
            return None;
        }
        let xexp = a.xexp + b.xexp;
        if xexp > self.x_bound {
            return None;
        }
        // sign: count pairs (i in a, j in b) with j < i
        let mut inversions = 0u32;
        for j in 0..self.gens.len() {
            if b.mask & (1 << j) != 0 {
                let higher_in_a = a.mask >> (j + 1);
                inversions += higher_in_a.count_ones();
            }
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((sign, KMono { mask: a.mask | b.mask, xexp }))
    }

    /// Leibniz rule D(ab) = D(a) b + (-1)^{|a|} a D(b), checked at the
    /// cochain level on one pair of monomials.
    pub fn leibniz_holds(&self, a: &KMono, b: &KMono) -> bool {
        let mut lhs: HashMap<usize, BigRational> = HashMap::new();
        if let Some((sign, ab)) = self.multiply(a, b) {
            for (c, t) in self.differential(&ab) {
                *lhs.entry(t).or_insert_with(BigRational::zero) +=
                    c * BigRational::from_integer(BigInt::from(sign));
            }
        }
        let mut rhs: HashMap<usize, BigRational> = HashMap::new();
        for (c, mid) in self.differential(a) {
            if let Some((sign, m)) = self.multiply(&self.monomials[mid], b) {
                *rhs.entry(self.index[&m]).or_insert_with(BigRational::zero) +=
                    c * BigRational::from_integer(BigInt::from(sign));
            }
        }
        let a_parity = self.degree(a) % 2;
        for (c, mid) in self.differential(b) {
            if let Some((sign, m)) = self.multiply(a, &self.monomials[mid]) {
                let mut coeff = c * BigRational::from_integer(BigInt::from(sign));
                if a_parity == 1 {
                    coeff = -coeff;
                }
                *rhs.entry(self.index[&m]).or_insert_with(BigRational::zero) += coeff;
            }
        }
        let keys: std::collections::BTreeSet<usize> =
            lhs.keys().chain(rhs.keys()).copied().collect();
        keys.iter().all(|k| {
            let l = lhs.get(k).cloned().unwrap_or_else(BigRational::zero);
            let r = rhs.get(k).cloned().unwrap_or_else(BigRational::zero);
            l == r
        })
    }
}
