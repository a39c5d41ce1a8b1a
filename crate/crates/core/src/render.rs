//! Output assembly: canonical JSON (the machine-stable schema, versioned),
//! with markdown and CSV as derived renderings of the same data. Keeping the
//! builders here lets the schema be snapshot-tested independently of the
//! command-line layer.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{Parity, RingPresentation};
use crate::arith::odd_primes_in;
use crate::error::{Error, Result};
use crate::serre::{run_pw_fibration, run_wm_fibration, SsRun};
use crate::spaces::{
    generator_ledger, presentation, space_table, SpaceDescriptor, SpacePresentation,
};
use crate::table::{compare_tables, poincare_polynomial, GradedModuleTable};
use crate::verdict::{full_verdict, Conclusion, SplitVerdict};

pub const SCHEMA_VERSION: u32 = 1;

/// Render a presentation as a compact algebra expression, e.g.
/// `Lambda(gamma_5) (x) Z_(7)[x] / (5*x^4, x^5)`.
pub fn presentation_pretty(pres: &RingPresentation) -> String {
    let odd: Vec<String> = pres
        .generators()
        .iter()
        .filter(|g| g.parity == Parity::Odd)
        .map(|g| g.name.clone())
        .collect();
    let even: Vec<String> = pres
        .generators()
        .iter()
        .filter(|g| g.parity == Parity::Even)
        .map(|g| g.name.clone())
        .collect();
    let mut parts = Vec::new();
    if !odd.is_empty() {
        parts.push(format!("Lambda({})", odd.join(", ")));
    }
    if !even.is_empty() {
        parts.push(format!("Z_({})[{}]", pres.prime(), even.join(", ")));
    }
    if parts.is_empty() {
        parts.push(format!("Z_({})", pres.prime()));
    }
    let mut out = parts.join(" (x) ");
    if !pres.ideal().is_empty() {
        let terms: Vec<String> = pres
            .ideal()
            .iter()
            .map(|t| {
                let m = pres.display_monomial(&t.monomial);
                if t.coefficient == crate::arith::LocalScalar::one(pres.prime()) {
                    m
                } else {
                    format!("{}*{}", t.coefficient, m)
                }
            })
            .collect();
        out.push_str(&format!(" / ({})", terms.join(", ")));
    }
    out
}

fn presentation_json(pres: &RingPresentation) -> Value {
    let generators: Vec<Value> = pres
        .generators()
        .iter()
        .map(|g| json!({ "name": g.name, "degree": g.degree, "parity": g.parity }))
        .collect();
    let ideal: Vec<Value> = pres
        .ideal()
        .iter()
        .map(|t| {
            let powers: BTreeMap<String, u32> = t
                .monomial
                .powers
                .iter()
                .map(|&(g, e)| (pres.generators()[g].name.clone(), e))
                .collect();
            let exterior: Vec<String> = t
                .monomial
                .exterior
                .iter()
                .map(|&g| pres.generators()[g].name.clone())
                .collect();
            json!({
                "coefficient": t.coefficient.to_string(),
                "exterior": exterior,
                "powers": powers,
            })
        })
        .collect();
    json!({
        "generators": generators,
        "ideal": ideal,
        "pretty": presentation_pretty(pres),
    })
}

fn table_json(table: &GradedModuleTable) -> Value {
    let degrees: Vec<Value> = (0..=table.top_degree)
        .filter_map(|d| {
            let e = table.entry(d);
            (!e.is_zero()).then(|| {
                json!({ "degree": d, "free_rank": e.free_rank, "torsion": e.torsion })
            })
        })
        .collect();
    json!({ "top_degree": table.top_degree, "degrees": degrees })
}

/// Everything the cohomology command prints for one space.
#[derive(Debug, Clone)]
pub struct CohomologyReport {
    pub built: SpacePresentation,
    pub table: GradedModuleTable,
    pub top_degree: u32,
}

pub fn cohomology_report(
    space: &SpaceDescriptor,
    p: u64,
    top_degree: Option<u32>,
) -> Result<CohomologyReport> {
    let top = top_degree.unwrap_or_else(|| space.default_top_degree());
    let built = presentation(space, p)?;
    let table = space_table(space, p, top)?;
    Ok(CohomologyReport { built, table, top_degree: top })
}

impl CohomologyReport {
    pub fn to_json(&self) -> Value {
        let space = &self.built.descriptor;
        let ledger = match space {
            SpaceDescriptor::PW { n, k } => generator_ledger(*n, *k, self.built.prime)
                .ok()
                .map(|l| serde_json::to_value(l).expect("ledger serializes")),
            _ => None,
        };
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": "cohomology",
            "space": space,
            "prime": self.built.prime,
            "dim": space.dimension(),
            "top_degree": self.top_degree,
            "notice": self.built.notice,
            "presentation": presentation_json(&self.built.presentation),
            "generator_ledger": ledger,
            "table": table_json(&self.table),
            "poincare_polynomial": poincare_polynomial(&self.table).to_string(),
            "euler_characteristic": poincare_polynomial(&self.table).evaluate(-1),
        })
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let space = &self.built.descriptor;
        out.push_str(&format!(
            "# H*({}; Z_({}))\n\n",
            space.label(),
            self.built.prime
        ));
        if let Some(n) = &self.built.notice {
            out.push_str(&format!("> {n}\n\n"));
        }
        out.push_str(&format!(
            "presentation: {}\n\ndimension: {}\n\n",
            presentation_pretty(&self.built.presentation),
            space.dimension()
        ));
        out.push_str("| degree | free rank | torsion |\n|---|---|---|\n");
        for d in 0..=self.table.top_degree {
            let e = self.table.entry(d);
            if e.is_zero() {
                continue;
            }
            let torsion = if e.torsion.is_empty() {
                "-".to_string()
            } else {
                e.torsion
                    .iter()
                    .map(|v| format!("Z/{}^{}", self.built.prime, v))
                    .collect::<Vec<_>>()
                    .join(" + ")
            };
            out.push_str(&format!("| {d} | {} | {torsion} |\n", e.free_rank));
        }
        out.push_str(&format!(
            "\nPoincare polynomial (free part): {}\n",
            poincare_polynomial(&self.table)
        ));
        out
    }
}

pub fn verdict_json(v: &SplitVerdict) -> Value {
    let mut value = serde_json::to_value(v).expect("verdict serializes");
    let obj = value.as_object_mut().expect("object");
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("command".into(), json!("verdict"));
    Value::Object(std::mem::take(obj))
}

fn passmark(pass: bool, color: bool) -> String {
    match (pass, color) {
        (true, false) => "pass".into(),
        (false, false) => "FAIL".into(),
        (true, true) => "\u{1b}[32mpass\u{1b}[0m".into(),
        (false, true) => "\u{1b}[31mFAIL\u{1b}[0m".into(),
    }
}

pub fn verdict_markdown(v: &SplitVerdict, color: bool) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# Splitting verdict: {} at p = {}\n\ndimension: {}\n\n",
        v.space.label(),
        v.prime,
        v.dim
    ));
    for t in &v.theorems {
        out.push_str(&format!(
            "## {} - {}\n\n",
            t.id.as_str(),
            if t.applies { "applies" } else { "does not apply" }
        ));
        out.push_str("| hypothesis | check | result |\n|---|---|---|\n");
        for h in &t.hypotheses {
            out.push_str(&format!(
                "| {} | `{}` | {} |\n",
                h.name,
                h.formula,
                passmark(h.pass, color)
            ));
        }
        if let Some(c) = &t.conclusion {
            match c {
                Conclusion::Product { label, .. } => {
                    out.push_str(&format!("\nconclusion: p-local product {label}\n"));
                }
                Conclusion::StableWedge { sphere_dimensions } => {
                    let spheres: Vec<String> =
                        sphere_dimensions.iter().map(|d| format!("S^{d}")).collect();
                    out.push_str(&format!(
                        "\nconclusion: stable p-local wedge {}\n",
                        spheres.join(" v ")
                    ));
                }
            }
        }
        out.push('\n');
    }
    match &v.strongest {
        Some(id) => out.push_str(&format!("strongest applicable theorem: {}\n", id.as_str())),
        None => out.push_str("no theorem in scope applies at these parameters\n"),
    }
    out
}

/// One grid point of the oracle comparison.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyPoint {
    pub space: String,
    pub n: u32,
    pub k: u32,
    pub p: u64,
    pub matches: bool,
    pub first_mismatch_degree: Option<u32>,
    pub dsquared_ok: bool,
    pub vanishes_above_dimension: bool,
    pub dsquared_pairs_checked: usize,
    pub witness_found: Option<bool>,
}

/// Compare the spectral-sequence oracle against the presentation table at a
/// single point. `perturb` injects a deliberate defect into the presentation
/// table (an extra torsion summand in degree 2) as a self-test that the
/// comparison actually bites.
pub fn verify_point(space: &SpaceDescriptor, p: u64, perturb: bool) -> Result<(VerifyPoint, SsRun)> {
    let top = space.default_top_degree();
    let (run, n, k) = match space {
        SpaceDescriptor::PW { n, k } => (run_pw_fibration(*n, *k, p, top)?, *n, *k),
        SpaceDescriptor::WM { n, k, m } => (run_wm_fibration(*n, *k, *m, p, top)?, *n, *k),
        SpaceDescriptor::PLW { n, k, l } => {
            let built = presentation(space, p)?;
            let fib = built.fibration.as_ref().expect("weighted quotient has fibration data");
            if fib.leading_valuation(p) != crate::arith::Valuation::Finite(0) {
                return Err(Error::UnsupportedRegime(format!(
                    "p = {p} divides the leading symmetric sum h_{}({l:?}); the \
                     weighted torsion case is presentation-only, the oracle does \
                     not certify it",
                    n - k + 1
                )));
            }
            let config = crate::serre::SsConfiguration::PlwBundle { n: *n, k: *k, l: l.clone() };
            (
                crate::serre::run_configuration(&config, p, top, crate::serre::SsOptions::default())?,
                *n,
                *k,
            )
        }
        other => {
            return Err(Error::Domain(format!(
                "the oracle runs on PW, PLW and WM fibrations, not {}",
                other.label()
            )))
        }
    };
    let mut expected = space_table(space, p, top)?;
    if perturb {
        expected.add_torsion(2, 1);
    }
    let report = compare_tables(&run.table, &expected)?;
    let point = VerifyPoint {
        space: space.label(),
        n,
        k,
        p,
        matches: report.matches(),
        first_mismatch_degree: report.first_mismatch().map(|m| m.degree),
        dsquared_ok: run.dsquared_ok,
        vanishes_above_dimension: run.vanishes_above_dimension,
        dsquared_pairs_checked: run.dsquared_pairs_checked,
        witness_found: run.witness.as_ref().map(|w| w.found),
    };
    Ok((point, run))
}

/// Grid driver: every (n, k) with 2 <= n <= n_max, 1 <= k <= n, and every
/// odd prime p <= p_max, on the diagonal circle quotient.
pub fn verify_grid(n_max: u32, p_max: u64, workers: usize) -> Result<Vec<VerifyPoint>> {
    let mut points = Vec::new();
    for n in 2..=n_max {
        for k in 1..=n {
            for p in odd_primes_in(3, p_max) {
                points.push(SpaceDescriptor::PW { n, k }.clone_with_prime(p));
            }
        }
    }
    run_striped(points, workers, |(space, p)| {
        verify_point(&space, p, false).map(|(point, _)| point)
    })
}

impl SpaceDescriptor {
    fn clone_with_prime(&self, p: u64) -> (SpaceDescriptor, u64) {
        (self.clone(), p)
    }
}

/// Deterministic fan-out: tasks are assigned to workers by stripe and the
/// results reassembled in input order, so the output is identical for any
/// worker count.
fn run_striped<T, R, F>(tasks: Vec<T>, workers: usize, f: F) -> Result<Vec<R>>
where
    T: Send,
    R: Send,
    F: Fn(T) -> Result<R> + Sync,
{
    let workers = workers.max(1);
    let n = tasks.len();
    let mut slots: Vec<Option<Result<R>>> = (0..n).map(|_| None).collect();
    let mut bins: Vec<Vec<(usize, T)>> = (0..workers).map(|_| Vec::new()).collect();
    for (pos, task) in tasks.into_iter().enumerate() {
        bins[pos % workers].push((pos, task));
    }
    std::thread::scope(|scope| {
        let f = &f;
        let handles: Vec<std::thread::ScopedJoinHandle<'_, Vec<(usize, Result<R>)>>> = bins
            .into_iter()
            .map(|bin| {
                scope.spawn(move || bin.into_iter().map(|(pos, task)| (pos, f(task))).collect())
            })
            .collect();
        for handle in handles {
            for (pos, res) in handle.join().expect("worker panicked") {
                slots[pos] = Some(res);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("every slot filled")).collect()
}

pub fn verify_points_json(points: &[VerifyPoint]) -> Value {
    let mismatches = points.iter().filter(|p| !p.matches).count();
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "points": points,
        "total": points.len(),
        "mismatches": mismatches,
        "all_dsquared_ok": points.iter().all(|p| p.dsquared_ok),
        "all_converged": points.iter().all(|p| p.vanishes_above_dimension),
    })
}

pub fn verify_points_csv(points: &[VerifyPoint]) -> String {
    let mut out = String::from(
        "space,n,k,p,matches,first_mismatch_degree,dsquared_ok,vanishes_above_dimension,witness_found\n",
    );
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            csv_escape(&p.space),
            p.n,
            p.k,
            p.p,
            p.matches,
            p.first_mismatch_degree.map(|d| d.to_string()).unwrap_or_default(),
            p.dsquared_ok,
            p.vanishes_above_dimension,
            p.witness_found.map(|w| w.to_string()).unwrap_or_default(),
        ));
    }
    out
}

/// Spectral-sequence trace: per-page bigraded shapes and differentials.
pub fn ss_trace_json(run: &SsRun) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "configuration": run.configuration_label,
        "prime": run.prime,
        "truncation": run.truncation,
        "pages": run.pages,
        "e_infinity_collapse": table_json(&run.table),
        "dsquared_pairs_checked": run.dsquared_pairs_checked,
        "dsquared_ok": run.dsquared_ok,
    })
}

/// One row of the verdict matrix.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictRow {
    pub space: String,
    pub n: u32,
    pub k: u32,
    pub p: u64,
    pub dim: u32,
    pub strongest: String,
    pub stable_only: bool,
    pub conclusion: String,
    pub a_bound: String,
    pub a_pass: bool,
    pub c_pass: bool,
    pub b_pass: Option<bool>,
}

/// Family selector for the verdict matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableFamily {
    Pw,
    W,
    Wm { m: u64 },
}

impl TableFamily {
    fn descriptor(&self, n: u32, k: u32) -> SpaceDescriptor {
        match self {
            TableFamily::Pw => SpaceDescriptor::PW { n, k },
            TableFamily::W => SpaceDescriptor::W { n, k },
            TableFamily::Wm { m } => SpaceDescriptor::WM { n, k, m: *m },
        }
    }
}

/// Verdict matrix over (n, k, p) in lexicographic row order; deterministic
/// for any worker count.
pub fn verdict_table(
    family: &TableFamily,
    n_range: (u32, u32),
    k_range: (u32, u32),
    p_set: &[u64],
    workers: usize,
) -> Result<Vec<VerdictRow>> {
    if n_range.0 > n_range.1 || k_range.0 > k_range.1 || p_set.is_empty() {
        return Err(Error::Domain("empty parameter range".into()));
    }
    let mut primes = p_set.to_vec();
    primes.sort_unstable();
    primes.dedup();
    let mut tasks = Vec::new();
    for n in n_range.0..=n_range.1 {
        for k in k_range.0.max(1)..=k_range.1.min(n) {
            for &p in &primes {
                tasks.push((family.descriptor(n, k), n, k, p));
            }
        }
    }
    run_striped(tasks, workers, |(space, n, k, p)| {
        let v = full_verdict(&space, p)?;
        let a_bound = crate::verdict::theorem_a_bound(n, k)?;
        let find = |ids: &[crate::verdict::TheoremId]| {
            v.theorems.iter().find(|t| ids.contains(&t.id)).map(|t| t.applies)
        };
        use crate::verdict::TheoremId as T;
        Ok(VerdictRow {
            space: space.label(),
            n,
            k,
            p,
            dim: v.dim,
            strongest: v.strongest.map(|s| s.as_str().to_string()).unwrap_or_else(|| "none".into()),
            stable_only: v.stable_only,
            conclusion: match &v.conclusion {
                Some(Conclusion::Product { label, .. }) => label.clone(),
                Some(Conclusion::StableWedge { sphere_dimensions }) => {
                    format!("stable wedge of {} spheres", sphere_dimensions.len())
                }
                None => "none".into(),
            },
            a_bound: a_bound.to_string(),
            a_pass: find(&[T::ALargePrime, T::AWeighted, T::EquivariantLargePrime, T::CyclicQuotientLargePrime])
                .unwrap_or(false),
            c_pass: find(&[T::CUnstable, T::CWeighted, T::Equivariant, T::CyclicQuotient])
                .unwrap_or(false),
            b_pass: find(&[T::BStable, T::BWeighted]),
        })
    })
}

pub fn verdict_rows_json(rows: &[VerdictRow]) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": "table",
        "rows": rows,
    })
}

pub fn verdict_rows_csv(rows: &[VerdictRow]) -> String {
    let mut out = String::from(
        "space,n,k,p,dim,strongest,stable_only,conclusion,a_bound,a_pass,c_pass,b_pass\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            csv_escape(&r.space),
            r.n,
            r.k,
            r.p,
            r.dim,
            r.strongest,
            r.stable_only,
            csv_escape(&r.conclusion),
            csv_escape(&r.a_bound),
            r.a_pass,
            r.c_pass,
            r.b_pass.map(|b| b.to_string()).unwrap_or_default(),
        ));
    }
    out
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
