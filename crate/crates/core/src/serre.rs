//! First-quadrant multiplicative Serre spectral-sequence engine over Z_(p),
//! the independent oracle against the closed-form presentation tables.
//!
//! The engine runs on the filtered cochain model of `dga`: for a decreasing
//! filtration F^s by base degree, the page entries are the standard
//! subquotients
//!
//!   E_r^{s,t} = Z_r^{s,t} / (Z_{r-1}^{s+1,t-1} + D Z_{r-1}^{s-r+1,t+r-2}),
//!   Z_r^{s,t} = { v in F^s C^{s+t} : D v in F^{s+r} },
//!
//! computed exactly as Z_(p)-lattices with Smith reduction at the quotient
//! step. Differentials d_r are induced by D on representatives. Only even
//! pages can carry differentials here (the filtration jump of every term of
//! D is even), and everything stabilizes after the last transgression page;
//! E_infinity is evaluated directly from the limit formulas rather than by
//! iterating pages, so the short-circuit is not load-bearing.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{binomial, complete_symmetric_sum, is_odd_prime, rational_valuation, Valuation};
use crate::dga::{KMono, KoszulComplex, OddGenerator};
use crate::error::{Error, Result};
use crate::linalg::{kernel_lattice, quotient_module, Mat, QuotientModule};
use crate::table::GradedModuleTable;

/// The two fibration families the oracle runs on, plus the weighted variant
/// which reuses the same machinery with symmetric-sum coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SsConfiguration {
    /// W(n,k) -> total -> CP^infinity with d_{2j}(z_j) = C(n,j) x^j.
    PwBundle { n: u32, k: u32 },
    /// Same shape with d_{2j}(z_j) = (+-) h_j(l) x^j.
    PlwBundle { n: u32, k: u32, l: Vec<i64> },
    /// S^1 -> total -> PW(n,k) with d_2(e) = m x; requires p | m and p > n
    /// so that the base table is torsion free.
    WmBundle { n: u32, k: u32, m: u64 },
}

impl SsConfiguration {
    fn total_dimension(&self) -> u32 {
        match self {
            SsConfiguration::PwBundle { n, k } | SsConfiguration::PlwBundle { n, k, .. } => {
                2 * n * k - k * k - 1
            }
            SsConfiguration::WmBundle { n, k, .. } => 2 * n * k - k * k,
        }
    }

    /// Build the filtered cochain model at p with the given x-power bound.
    fn build_complex(&self, p: u64, x_bound: u32) -> Result<KoszulComplex> {
        match self {
            SsConfiguration::PwBundle { n, k } => {
                let gens = (*n - *k + 1..=*n)
                    .map(|j| {
                        Ok(OddGenerator {
                            name: format!("z_{j}"),
                            degree: 2 * j - 1,
                            base: false,
                            differential: Some((binomial(*n as u64, j as u64)?, j)),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                KoszulComplex::new(p, gens, x_bound)
            }
            SsConfiguration::PlwBundle { n, k, l } => {
                let gens = (*n - *k + 1..=*n)
                    .map(|j| {
                        let h = complete_symmetric_sum(l, j as usize)?;
                        Ok(OddGenerator {
                            name: format!("z_{j}"),
                            degree: 2 * j - 1,
                            base: false,
                            differential: if h.is_zero() { None } else { Some((h, j)) },
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                KoszulComplex::new(p, gens, x_bound)
            }
            SsConfiguration::WmBundle { n, k, m } => {
                let mut gens: Vec<OddGenerator> = (*n - *k + 2..=*n)
                    .map(|j| OddGenerator {
                        name: format!("gamma_{j}"),
                        degree: 2 * j - 1,
                        base: true,
                        differential: None,
                    })
                    .collect();
                gens.push(OddGenerator {
                    name: "e".into(),
                    degree: 1,
                    base: false,
                    differential: Some((BigInt::from(*m), 1)),
                });
                KoszulComplex::new(p, gens, x_bound)
            }
        }
    }
}

/// Module shape of one bigraded entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellShape {
    pub free_rank: u32,
    pub torsion: Vec<u32>,
}

impl CellShape {
    fn of(q: &QuotientModule) -> Self {
        CellShape { free_rank: q.free_rank(), torsion: q.torsion_exponents() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// Differential matrix between two cells, entries as exact rationals in
/// module coordinates (rows = target generators, columns = source).
#[derive(Debug, Clone, Serialize)]
pub struct DifferentialSummary {
    pub from: (u32, u32),
    pub to: (u32, u32),
    pub matrix: Vec<Vec<String>>,
}

/// One computed page: nonzero bigraded entries and the nonzero d_r blocks.
#[derive(Debug, Clone, Serialize)]
pub struct PageSummary {
    pub r: u32,
    pub cells: BTreeMap<String, CellShape>,
    pub differentials: Vec<DifferentialSummary>,
}

/// Annihilator exponents of one page entry in generator order: `None` free,
/// `Some(e)` a Z/p^e summand. Retained for the page-homology identity test.
#[derive(Debug, Clone)]
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) struct RawCell {
    pub ann: Vec<Option<u32>>,
}

impl RawCell {
    #[cfg_attr(not(test), allow(dead_code))]
    pub(crate) fn shape(&self) -> CellShape {
        let mut torsion: Vec<u32> = self.ann.iter().filter_map(|a| *a).collect();
        torsion.sort_unstable();
        CellShape {
            free_rank: self.ann.iter().filter(|a| a.is_none()).count() as u32,
            torsion,
        }
    }
}

/// One page with numeric differential matrices in module coordinates.
#[derive(Debug, Clone)]
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) struct RawPage {
    pub r: u32,
    pub cells: BTreeMap<(u32, u32), RawCell>,
    /// d_r blocks keyed by source bidegree; rows/columns run over the live
    /// generators of target/source in order. Missing entries are zero maps.
    pub matrices: BTreeMap<(u32, u32), Mat>,
}

/// Outcome of one spectral-sequence run.
#[derive(Debug, Clone)]
pub struct SsRun {
    pub configuration_label: String,
    pub prime: u64,
    pub truncation: u32,
    pub total_dimension: u32,
    /// Total-degree collapse of E_infinity.
    pub table: GradedModuleTable,
    /// Page summaries for r = 2, 4, ..., last transgression page.
    pub pages: Vec<PageSummary>,
    /// Number of composable d_r pairs checked to vanish after reduction.
    pub dsquared_pairs_checked: usize,
    /// All d_r compositions vanished.
    pub dsquared_ok: bool,
    /// E_infinity vanishes in total degrees above the manifold dimension
    /// (within the truncation window).
    pub vanishes_above_dimension: bool,
    /// For the circle-bundle run: the degree 2(n-k)+1 survivor e x^{n-k},
    /// the witness for the extra exterior generator of the quotient.
    pub witness: Option<SurvivorWitness>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub(crate) raw_pages: Vec<RawPage>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub(crate) raw_infinity: BTreeMap<(u32, u32), RawCell>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurvivorWitness {
    pub bidegree: (u32, u32),
    pub total_degree: u32,
    pub found: bool,
}

struct Engine<'a> {
    complex: &'a KoszulComplex,
    p: u64,
    /// Threshold larger than any filtration: "D v = 0" as a condition.
    infinity: i64,
    z_cache: RefCell<HashMap<(i64, u32, i64), Rc<Mat>>>,
    dmat_cache: RefCell<HashMap<u32, Rc<Mat>>>,
}

/// One page entry with enough data to evaluate differentials on it.
struct CellData {
    s: u32,
    t: u32,
    /// Saturated basis of Z_r^{s,t} in ambient degree-(s+t) coordinates.
    n_basis: Mat,
    module: QuotientModule,
}

impl<'a> Engine<'a> {
    fn new(complex: &'a KoszulComplex, p: u64) -> Self {
        let infinity = 2 * complex.max_degree() as i64 + 4;
        Engine {
            complex,
            p,
            infinity,
            z_cache: RefCell::new(HashMap::new()),
            dmat_cache: RefCell::new(HashMap::new()),
        }
    }

    fn differential_matrix(&self, degree: u32) -> Rc<Mat> {
        if let Some(m) = self.dmat_cache.borrow().get(&degree) {
            return Rc::clone(m);
        }
        let m = Rc::new(self.complex.differential_matrix(degree));
        self.dmat_cache.borrow_mut().insert(degree, Rc::clone(&m));
        m
    }

    /// Basis of { v in F^{max(floor,0)} C^degree : D v in F^threshold }, in
    /// ambient degree coordinates.
    fn z_lattice(&self, floor: i64, degree: u32, threshold: i64) -> Rc<Mat> {
        let key = (floor.max(0), degree, threshold.min(self.infinity));
        if let Some(m) = self.z_cache.borrow().get(&key) {
            return Rc::clone(m);
        }
        let ids = self.complex.monomial_ids_of_degree(degree);
        let selected: Vec<usize> = (0..ids.len())
            .filter(|&i| self.complex.filtration(&self.complex.monomial(ids[i])) as i64 >= key.0)
            .collect();
        let out_ids = self.complex.monomial_ids_of_degree(degree + 1);
        let out_rows: Vec<usize> = (0..out_ids.len())
            .filter(|&i| (self.complex.filtration(&self.complex.monomial(out_ids[i])) as i64) < key.2)
            .collect();
        let dmat = self.differential_matrix(degree);
        // restriction of D to the selected columns and shallow rows
        let mut m = Mat::zeros(out_rows.len(), selected.len());
        for (cj, &col) in selected.iter().enumerate() {
            for (ri, &row) in out_rows.iter().enumerate() {
                let v = dmat.get(row, col);
                if !v.is_zero() {
                    m.set(ri, cj, v.clone());
                }
            }
        }
        let kernel = kernel_lattice(&m, self.p);
        // embed back into ambient coordinates
        let mut ambient = Mat::zeros(ids.len(), kernel.cols);
        for (cj, _) in (0..kernel.cols).enumerate() {
            for (si, &pos) in selected.iter().enumerate() {
                let v = kernel.get(si, cj);
                if !v.is_zero() {
                    ambient.set(pos, cj, v.clone());
                }
            }
        }
        let rc = Rc::new(ambient);
        self.z_cache.borrow_mut().insert(key, Rc::clone(&rc));
        rc
    }

    /// Apply D to ambient degree-n columns, producing degree-(n+1) columns.
    fn apply_differential(&self, degree: u32, columns: &Mat) -> Mat {
        self.differential_matrix(degree).mul(columns)
    }

    /// E_r^{s,t} (or E_infinity for threshold_r = None) as a presented
    /// subquotient.
    fn cell(&self, s: u32, t: u32, threshold_r: Option<u32>) -> CellData {
        let n = s + t;
        let (num_threshold, den_src_floor, den_src_threshold) = match threshold_r {
            Some(r) => (s as i64 + r as i64, s as i64 - r as i64 + 1, s as i64),
            None => (self.infinity, 0, s as i64),
        };
        let n_basis = self.z_lattice(s as i64, n, num_threshold);
        let a = self.z_lattice(s as i64 + 1, n, num_threshold);
        let dn = if n == 0 {
            a.as_ref().clone()
        } else {
            let b_src = self.z_lattice(den_src_floor, n - 1, den_src_threshold);
            let b = self.apply_differential(n - 1, &b_src);
            a.hcat(&b)
        };
        let module = quotient_module(&n_basis, &dn, self.p);
        CellData { s, t, n_basis: n_basis.as_ref().clone(), module }
    }

    /// Module coordinates of an ambient vector known to lie in the cell's
    /// numerator lattice.
    fn coords_in_cell(&self, cell: &CellData, ambient: &Mat) -> Mat {
        let y = crate::linalg::solve_in_lattice(&cell.n_basis, ambient, self.p)
            .expect("differential image escapes the target page lattice");
        cell.module.coord_transform.mul(&y)
    }
}

/// All distinct (filtration, complementary) bidegrees with monomials, up to
/// the given total degree.
fn bidegrees(complex: &KoszulComplex, max_total: u32) -> BTreeSet<(u32, u32)> {
    let mut out = BTreeSet::new();
    for d in 0..=max_total.min(complex.max_degree()) {
        for &id in complex.monomial_ids_of_degree(d) {
            let s = complex.filtration(&complex.monomial(id));
            out.insert((s, d - s));
        }
    }
    out
}

/// Check that a composed pair of d_r matrices vanishes modulo the target
/// annihilators: free rows must be exactly zero, a torsion row with
/// annihilator p^a must have valuation >= a.
fn composition_vanishes(product: &Mat, target: &QuotientModule, p: u64) -> bool {
    for (row, &gen_idx) in target.live.iter().enumerate() {
        for j in 0..product.cols {
            let v = product.get(row, j);
            match target.annihilators[gen_idx] {
                None => {
                    if !v.is_zero() {
                        return false;
                    }
                }
                Some(a) => {
                    if rational_valuation(v, p) < Valuation::Finite(a as i64) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Options controlling how much page data a run retains.
#[derive(Debug, Clone, Copy)]
pub struct SsOptions {
    /// Record differential matrices in the page summaries (trace output).
    pub record_matrices: bool,
}

impl Default for SsOptions {
    fn default() -> Self {
        SsOptions { record_matrices: false }
    }
}

/// Run a configuration at prime p, truncating total degrees at `truncation`.
pub fn run_configuration(
    config: &SsConfiguration,
    p: u64,
    truncation: u32,
    options: SsOptions,
) -> Result<SsRun> {
    if !is_odd_prime(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    let dim = config.total_dimension();
    if truncation < dim + 1 {
        return Err(Error::Truncation(format!(
            "truncation {truncation} below dimension + 1 = {}; convergence \
             cannot be confirmed",
            dim + 1
        )));
    }
    let (label, x_bound) = match config {
        SsConfiguration::PwBundle { n, k } => {
            validate_nk(*n, *k)?;
            (format!("W({n},{k}) -> PW({n},{k}) -> CP^inf"), truncation.div_ceil(2) + 1)
        }
        SsConfiguration::PlwBundle { n, k, l } => {
            validate_nk(*n, *k)?;
            (format!("W({n},{k}) -> P_l W({n},{k}), l={l:?} -> CP^inf"), truncation.div_ceil(2) + 1)
        }
        SsConfiguration::WmBundle { n, k, m } => {
            validate_nk(*n, *k)?;
            if *m % p != 0 {
                return Err(Error::Domain(format!(
                    "circle-bundle run requires p | m (p = {p}, m = {m})"
                )));
            }
            if p <= *n as u64 {
                return Err(Error::UnsupportedRegime(format!(
                    "circle-bundle run requires p > n for a torsion-free base \
                     (p = {p}, n = {n})"
                )));
            }
            (format!("S^1 -> W({n},{k};{m}) -> PW({n},{k})"), *n - *k)
        }
    };
    let complex = config.build_complex(p, x_bound)?;
    let engine = Engine::new(&complex, p);

    // Every term of D jumps the filtration by exactly twice its generator's
    // x-shift, so d_r can only be nonzero on those pages; everything past
    // the last one is E_infinity (checked by the page-homology identity).
    let mut active_pages: BTreeSet<u32> = complex
        .generators()
        .iter()
        .filter_map(|g| g.differential.as_ref().map(|(_, s)| 2 * s))
        .collect();
    active_pages.insert(2);
    let cells = bidegrees(&complex, truncation + 1);

    let mut pages = Vec::new();
    let mut raw_pages = Vec::new();
    let mut dsq_pairs = 0usize;
    let mut dsq_ok = true;

    for &r in &active_pages {
        let mut page_cells: BTreeMap<(u32, u32), CellData> = BTreeMap::new();
        for &(s, t) in &cells {
            let cell = engine.cell(s, t, Some(r));
            if !cell.module.is_trivial() {
                page_cells.insert((s, t), cell);
            }
        }
        // d_r on every nonzero cell with a nonzero target
        let mut matrices: BTreeMap<(u32, u32), Mat> = BTreeMap::new();
        let mut summaries = Vec::new();
        for (&(s, t), cell) in &page_cells {
            if t + 1 < r {
                continue;
            }
            let target_key = (s + r, t + 1 - r);
            let Some(target) = page_cells.get(&target_key) else { continue };
            let live_cols: Vec<usize> = cell.module.live.clone();
            if live_cols.is_empty() || target.module.live.is_empty() {
                continue;
            }
            let mut gen_mat = Mat::zeros(cell.n_basis.rows, live_cols.len());
            for (j, &g) in live_cols.iter().enumerate() {
                for i in 0..cell.module.gens.rows {
                    let v = cell.module.gens.get(i, g);
                    if !v.is_zero() {
                        gen_mat.set(i, j, v.clone());
                    }
                }
            }
            let images = engine.apply_differential(s + t, &gen_mat);
            if images.is_zero() {
                continue;
            }
            let coords = engine.coords_in_cell(target, &images);
            // restrict coordinate rows to the target's live generators
            let mut restricted = Mat::zeros(target.module.live.len(), coords.cols);
            let mut nonzero = false;
            for (row, &g) in target.module.live.iter().enumerate() {
                for j in 0..coords.cols {
                    let mut v = coords.get(g, j).clone();
                    if let Some(a) = target.module.annihilators[g] {
                        if rational_valuation(&v, p) >= Valuation::Finite(a as i64) {
                            v = BigRational::zero();
                        }
                    }
                    if !v.is_zero() {
                        nonzero = true;
                        restricted.set(row, j, v);
                    }
                }
            }
            if nonzero {
                if options.record_matrices {
                    summaries.push(DifferentialSummary {
                        from: (s, t),
                        to: target_key,
                        matrix: (0..restricted.rows)
                            .map(|i| {
                                (0..restricted.cols)
                                    .map(|j| restricted.get(i, j).to_string())
                                    .collect()
                            })
                            .collect(),
                    });
                }
                matrices.insert((s, t), restricted);
            }
        }
        // d_r ∘ d_r = 0 after reduction
        for (&(s, t), first) in &matrices {
            let mid_key = (s + r, t + 1 - r);
            if let Some(second) = matrices.get(&mid_key) {
                let final_key = (mid_key.0 + r, mid_key.1 + 1 - r);
                let target = &page_cells[&final_key].module;
                dsq_pairs += 1;
                if !composition_vanishes(&second.mul(first), target, p) {
                    dsq_ok = false;
                }
            }
        }
        pages.push(PageSummary {
            r,
            cells: page_cells
                .iter()
                .map(|(&(s, t), c)| (format!("({s},{t})"), CellShape::of(&c.module)))
                .collect(),
            differentials: summaries,
        });
        raw_pages.push(RawPage {
            r,
            cells: page_cells
                .iter()
                .map(|(&key, c)| {
                    let ann =
                        c.module.live.iter().map(|&g| c.module.annihilators[g]).collect();
                    (key, RawCell { ann })
                })
                .collect(),
            matrices,
        });
    }

    // E_infinity straight from the limit formulas
    let mut table = GradedModuleTable::empty(truncation);
    let mut witness = None;
    let mut einf_cells: BTreeMap<(u32, u32), CellData> = BTreeMap::new();
    let mut raw_infinity = BTreeMap::new();
    for &(s, t) in &cells {
        if s + t > truncation {
            continue;
        }
        let cell = engine.cell(s, t, None);
        if !cell.module.is_trivial() {
            table.add_free(s + t, cell.module.free_rank());
            for e in cell.module.torsion_exponents() {
                table.add_torsion(s + t, e);
            }
            let ann = cell.module.live.iter().map(|&g| cell.module.annihilators[g]).collect();
            raw_infinity.insert((s, t), RawCell { ann });
        }
        einf_cells.insert((s, t), cell);
    }

    if let SsConfiguration::WmBundle { n, k, .. } = config {
        let s = 2 * (n - k);
        let bidegree = (s, 1);
        let found = einf_cells
            .get(&bidegree)
            .map(|cell| wm_witness_survives(&engine, cell))
            .unwrap_or(false);
        witness = Some(SurvivorWitness { bidegree, total_degree: s + 1, found });
    }

    let vanishes = ((dim + 1)..=truncation).all(|d| table.entry(d).is_zero());

    Ok(SsRun {
        configuration_label: label,
        prime: p,
        truncation,
        total_dimension: dim,
        table,
        pages,
        dsquared_pairs_checked: dsq_pairs,
        dsquared_ok: dsq_ok,
        vanishes_above_dimension: vanishes,
        witness,
        raw_pages,
        raw_infinity,
    })
}

fn validate_nk(n: u32, k: u32) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    Ok(())
}

/// The monomial e x^{n-k} must represent a class with a nonzero free
/// component in its E_infinity cell.
fn wm_witness_survives(engine: &Engine<'_>, cell: &CellData) -> bool {
    let complex = engine.complex;
    let e_index = complex.generators().len() - 1;
    let target = KMono { mask: 1 << e_index, xexp: complex.x_bound() };
    let ids = complex.monomial_ids_of_degree(cell.s + cell.t);
    let Some(pos) = ids.iter().position(|&id| complex.monomial(id) == target) else {
        return false;
    };
    let mut ambient = Mat::zeros(ids.len(), 1);
    ambient.set(pos, 0, BigRational::from_integer(BigInt::from(1)));
    let Some(y) = crate::linalg::solve_in_lattice(&cell.n_basis, &ambient, engine.p) else {
        return false;
    };
    let coords = cell.module.coord_transform.mul(&y);
    cell.module
        .live
        .iter()
        .any(|&g| cell.module.annihilators[g].is_none() && !coords.get(g, 0).is_zero())
}

/// Fibration oracle for the diagonal circle quotient: collapses E_infinity
/// of the Serre spectral sequence for W(n,k) -> PW(n,k) -> CP^infinity.
pub fn run_pw_fibration(n: u32, k: u32, p: u64, truncation: u32) -> Result<SsRun> {
    run_configuration(&SsConfiguration::PwBundle { n, k }, p, truncation, SsOptions::default())
}

/// Fibration oracle for the cyclic quotient: S^1 -> W(n,k;m) -> PW(n,k),
/// two-row spectral sequence with d_2(e) = m x.
pub fn run_wm_fibration(n: u32, k: u32, m: u64, p: u64, truncation: u32) -> Result<SsRun> {
    run_configuration(&SsConfiguration::WmBundle { n, k, m }, p, truncation, SsOptions::default())
}

/// Leibniz spot check on the cochain model at E_2: d(ab) = d(a) b +
/// (-1)^{|a|} a d(b) on `samples` deterministic pseudo-random monomial pairs.
pub fn leibniz_spot_check(config: &SsConfiguration, p: u64, samples: usize, seed: u64) -> Result<bool> {
    let complex = config.build_complex(p, 8)?;
    let gens = complex.generators().len() as u64;
    let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..samples {
        let a = KMono { mask: (next() % (1 << gens)) as u32, xexp: (next() % 5) as u32 };
        let b = KMono { mask: (next() % (1 << gens)) as u32, xexp: (next() % 5) as u32 };
        if !complex.leibniz_holds(&a, &b) {
            return Ok(false);
        }
    }
    Ok(true)
}
