use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{elliptic_extension, is_radical_complement, run_trials, IntrinsicGapReport, SubspaceChain, Trial};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms::GapReport;
use crate::geometry::{
    enumerate_singular_points, Enumeration, GeoSubspace, HyperbolicMethod, PolarSpace, SubspaceClass,
};
use crate::seeded::SeededOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

/// One line of the structured report.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct CheckRecord {
    pub check_id: &'static str,
    /// Short description of the property under test.
    pub reference: &'static str,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Value>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    /// Cap on singular subspaces visited by the Condition (A) search.
    pub budget: usize,
    /// Record wall-clock time per check. Off by default so that reports
    /// are byte-identical across runs.
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: 20,
            seed: 0,
            budget: crate::geometry::DEFAULT_POINT_BUDGET,
            timings: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub form: String,
    pub field: String,
    pub algebraic: GapReport,
    pub intrinsic: Option<IntrinsicGapReport>,
    pub records: Vec<CheckRecord>,
    /// Some check stopped at the search budget.
    pub budget_exceeded: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status == CheckStatus::Fail)
    }

    /// One JSON object per line: a header, every check, then a summary.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        let header = json!({
            "record": "header",
            "form": self.form,
            "field": self.field,
            "algebraic": self.algebraic,
        });
        out.push_str(&header.to_string());
        out.push('\n');
        for r in &self.records {
            let mut v = serde_json::to_value(r).expect("records serialize");
            v.as_object_mut().unwrap().insert("record".into(), json!("check"));
            out.push_str(&v.to_string());
            out.push('\n');
        }
        let summary = json!({
            "record": "summary",
            "passed": self.passed(),
            "algebraic": [self.algebraic.r, self.algebraic.e, self.algebraic.p],
            "intrinsic": self.intrinsic.as_ref().map(|i| [i.r, i.e, i.p]),
            "budget-exceeded": self.budget_exceeded,
        });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }

    pub fn render_human(&self) -> String {
        let mut out = format!("form {} over {}\nalgebraic: {}\n", self.form, self.field, self.algebraic);
        match &self.intrinsic {
            Some(i) => out.push_str(&format!(
                "intrinsic: r={}, e={}, p={} over {} trials\n",
                i.r, i.e, i.p, i.trials
            )),
            None => out.push_str("intrinsic: unavailable\n"),
        }
        for r in &self.records {
            let status = match r.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skip => "skip",
            };
            out.push_str(&format!("  [{status}] {:<32} {}", r.check_id, r.reference));
            if let Some(w) = &r.witness {
                out.push_str(&format!("\n         {w}"));
            }
            out.push('\n');
        }
        out.push_str(if self.passed() { "all checks passed\n" } else { "some checks FAILED\n" });
        out
    }
}

/// Result of one check body.
struct Outcome {
    status: CheckStatus,
    witness: Option<String>,
    values: Option<Value>,
}

impl Outcome {
    fn pass(values: Value) -> Self {
        Outcome {
            status: CheckStatus::Pass,
            witness: None,
            values: Some(values),
        }
    }

    fn fail(witness: impl Into<String>) -> Self {
        Outcome {
            status: CheckStatus::Fail,
            witness: Some(witness.into()),
            values: None,
        }
    }

    fn skip(reason: &str) -> Self {
        Outcome {
            status: CheckStatus::Skip,
            witness: None,
            values: Some(json!({ "reason": reason })),
        }
    }

    fn from_bool(ok: bool, values: Value, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Outcome::pass(values)
        } else {
            let mut o = Outcome::fail(witness());
            o.values = Some(values);
            o
        }
    }
}

struct Recorder {
    options: VerifyOptions,
    records: Vec<CheckRecord>,
    budget_exceeded: bool,
}

impl Recorder {
    fn run(&mut self, check_id: &'static str, reference: &'static str, body: impl FnOnce() -> Result<Outcome>) {
        let start = Instant::now();
        let outcome = body().unwrap_or_else(|e| {
            self.budget_exceeded |= matches!(e, Error::BudgetExceeded { .. });
            Outcome::fail(format!("error: {e}"))
        });
        self.records.push(CheckRecord {
            check_id,
            reference,
            status: outcome.status,
            witness: outcome.witness,
            values: outcome.values,
            seed: self.options.seed,
            elapsed_ms: self.options.timings.then(|| start.elapsed().as_millis() as u64),
        });
    }
}

fn first_failure<T>(items: impl IntoIterator<Item = Result<Option<T>>>) -> Result<Option<T>> {
    for item in items {
        if let Some(w) = item? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Runs every geometric and chain-level check against `space`.
///
/// Failures are report content, not errors.
pub fn verify_theorems(space: &PolarSpace, options: VerifyOptions) -> VerifyReport {
    let mut rec = Recorder {
        options,
        records: Vec::new(),
        budget_exceeded: false,
    };
    let g = *space.gaps();
    let field = space.field();
    let char2 = field.characteristic() == 2;
    let rank_two = space.rank() >= 2;
    let trials = run_trials(space, options.trials.max(1), options.seed);

    rec.run("forms.decomposition", "Witt-style splitting is orthogonal and direct", || {
        space.decomposition().verify(space.form())?;
        Ok(Outcome::pass(json!({ "n": g.n, "e": g.e, "p": g.p })))
    });

    rec.run("forms.char2-radical", "dim Rad(f) is 0 or 1 over a perfect field of characteristic 2", || {
        if !char2 {
            return Ok(Outcome::skip("odd characteristic"));
        }
        let dim = space.radical().dim();
        Ok(Outcome::from_bool(dim <= 1, json!({ "radical-dim": dim }), || {
            format!("dim Rad(f) = {dim}")
        }))
    });

    rec.run("forms.square-class-bound", "p and e/2 + p are at most [K:K^2]", || {
        if !char2 {
            return Ok(Outcome::skip("odd characteristic"));
        }
        let k = field.square_class_degree()?;
        let ok = g.p <= k && g.e + 2 * g.p <= 2 * k;
        Ok(Outcome::from_bool(ok, json!({ "degree": k, "e": g.e, "p": g.p }), || {
            format!("e={}, p={} exceed [K:K^2]={k}", g.e, g.p)
        }))
    });

    rec.run("geometry.point-count", "streaming and filtering enumerations agree", || {
        let budget = space.num_points().max(1);
        let stream = enumerate_singular_points(space.form(), Enumeration::Streaming, budget)?;
        let filter = enumerate_singular_points(space.form(), Enumeration::Filter, budget)?;
        Ok(Outcome::from_bool(
            stream == filter && stream.len() == space.num_points(),
            json!({ "points": space.num_points(), "lines": space.lines().len() }),
            || format!("streaming {} points, filtering {}", stream.len(), filter.len()),
        ))
    });

    rec.run("geometry.lines", "lines are totally singular with q+1 points", || {
        let q = field.size();
        let bad = space.lines().iter().position(|l| {
            l.len() != q + 1 || l.iter().any(|&a| l.iter().any(|&b| a != b && !space.collinear(a, b)))
        });
        Ok(match bad {
            None => Outcome::pass(json!({ "lines": space.lines().len() })),
            Some(i) => Outcome::fail(format!("line {i}: {:?}", space.lines()[i])),
        })
    });

    rec.run("geometry.non-degenerate", "no point is collinear with every point", || {
        let rad = space.perp(&space.all_points());
        Ok(Outcome::from_bool(rad.is_clear(), json!({}), || {
            format!("radical points {:?}", rad.ones().collect::<Vec<_>>())
        }))
    });

    rec.run(
        "geometry.hyperbolic-line-duality",
        "double perp equals singular points of <a, b, Rad(f)>, spanning dim Rad(f) + 2",
        || {
            if !rank_two {
                return Ok(Outcome::skip("rank one: the double perp of a pair is every point"));
            }
            let sizes = hyperbolic_line_sizes(space, true)?;
            Ok(match sizes {
                Ok(h) => Outcome::pass(json!({ "sizes": h })),
                Err(w) => Outcome::fail(w),
            })
        },
    );

    rec.run("geometry.hyperbolic-line-size", "all hyperbolic lines have 2 points iff p = 0", || {
        if !rank_two {
            return Ok(Outcome::skip("rank one"));
        }
        let sizes = match hyperbolic_line_sizes(space, false)? {
            Ok(h) => h,
            Err(w) => return Ok(Outcome::fail(w)),
        };
        let all_two = sizes.keys().all(|&s| s == 2);
        Ok(Outcome::from_bool(all_two == (g.p == 0), json!({ "sizes": sizes, "p": g.p }), || {
            format!("sizes {sizes:?} with p = {}", g.p)
        }))
    });

    rec.run("geometry.frames", "frames have the pairing pattern and lie in no point perp", || {
        let mut frames = vec![space.find_frame()?];
        for i in 0..options.trials.max(1) {
            let seed = super::trial_seed(options.seed, i);
            frames.push(space.seeded_frame(&SeededOrder::new(seed, space.num_points())));
        }
        for f in &frames {
            if let Err(w) = f.check(space) {
                return Ok(Outcome::fail(format!("frame {:?}: {w}", f.pairs)));
            }
            let inside = space.perp(&space.set_of(f.points()));
            if !inside.is_clear() {
                return Ok(Outcome::fail(format!(
                    "frame {:?} lies in the perp of point {}",
                    f.pairs,
                    inside.ones().next().unwrap()
                )));
            }
        }
        Ok(Outcome::pass(json!({ "frames": frames.len() })))
    });

    let trials = match trials {
        Ok(t) => t,
        Err(e) => {
            rec.run("chains.construction", "seeded chain constructions complete", || {
                Ok(Outcome::fail(format!("error: {e}")))
            });
            return finish(space, rec, None);
        }
    };

    rec.run("geometry.closure-embedding", "generated subspaces are the singular points of their spans", || {
        let frame = space.find_frame()?;
        let mut subspaces = vec![space.generate(&space.set_of(frame.points()))?];
        for t in &trials {
            for chain in chains_of(t) {
                subspaces.extend(chain.members.iter().cloned());
            }
        }
        let bad = first_failure(subspaces.par_iter().map(|s| -> Result<Option<usize>> {
            Ok((!space.is_embedded(s)?).then(|| s.len()))
        }).collect::<Vec<_>>())?;
        Ok(match bad {
            None => Outcome::pass(json!({ "subspaces": subspaces.len() })),
            Some(len) => Outcome::fail(format!("a generated subspace with {len} points is not embedded")),
        })
    });

    rec.run("geometry.condition-a", "Condition (A) holds iff e = 0", || {
        if !rank_two {
            return Ok(Outcome::skip("rank one: no lines, the condition is vacuous"));
        }
        let res = space.check_condition_a(options.budget)?;
        let holds = res.holds();
        let values = serde_json::to_value(&res).expect("serializes");
        Ok(Outcome::from_bool(holds == (g.e == 0), values, || {
            format!("condition (A) {} with e = {}", if holds { "holds" } else { "fails" }, g.e)
        }))
    });

    rec.run("chains.nice-members", "chain members are nice and strictly increasing", || {
        for t in &trials {
            for chain in chains_of(t) {
                if !chain.is_strictly_increasing() {
                    return Ok(Outcome::fail(format!("seed {}: chain not strictly increasing", t.seed)));
                }
                for m in &chain.members {
                    if !space.is_nice(m)? {
                        return Ok(Outcome::fail(format!("seed {}: member with {} points not nice", t.seed, m.len())));
                    }
                }
            }
            if !t.anisotropic.is_step_one() || !t.parabolic.is_step_one() {
                return Ok(Outcome::fail(format!("seed {}: nice chain is not step-one", t.seed)));
            }
        }
        Ok(Outcome::pass(json!({ "trials": trials.len() })))
    });

    rec.run("chains.anisotropic-length", "maximal nice chains have length r = dim V0", || {
        let lengths: Vec<usize> = trials.iter().map(|t| t.anisotropic.length()).collect();
        Ok(Outcome::from_bool(
            lengths.iter().all(|&l| l == g.r),
            json!({ "length": lengths[0], "r": g.r }),
            || format!("lengths {lengths:?}, r = {}", g.r),
        ))
    });

    rec.run(
        "chains.elliptic-chain",
        "frame-generated start, elliptic members, codimension-2 steps, maximal",
        || {
            let bad = first_failure(trials.par_iter().map(|t| check_elliptic_chain(space, t)).collect::<Vec<_>>())?;
            Ok(match bad {
                None => Outcome::pass(json!({ "d": trials[0].elliptic.steps() })),
                Some(w) => Outcome::fail(w),
            })
        },
    );

    rec.run("chains.enrichment", "enrichment radicals alternate 0,1,...,0 over length 2d", || {
        if !char2 {
            return Ok(Outcome::skip("odd characteristic: elliptic chains admit no proper enrichment"));
        }
        for t in &trials {
            let Some(enr) = &t.elliptic.enrichment else {
                return Ok(Outcome::fail(format!("seed {}: missing enrichment", t.seed)));
            };
            let dims: Vec<usize> = enr
                .members
                .iter()
                .map(|m| space.bilinear().radical_within(m.span()).map(|r| r.dim()))
                .collect::<Result<_>>()?;
            let alternating = dims.iter().enumerate().all(|(i, &d)| d == i % 2);
            let ok = alternating && enr.length() == 2 * t.elliptic.steps() && enr.is_step_one();
            if !ok {
                return Ok(Outcome::fail(format!(
                    "seed {}: radical dims {dims:?}, length {}, d = {}",
                    t.seed,
                    enr.length(),
                    t.elliptic.steps()
                )));
            }
        }
        Ok(Outcome::pass(json!({ "length": trials[0].elliptic.enriched_length() })))
    });

    rec.run("chains.union", "the top of an elliptic chain is elliptic or frame-generated", || {
        for t in &trials {
            let c = space.classify_subspace(t.elliptic.top())?;
            if c.class == SubspaceClass::Other {
                return Ok(Outcome::fail(format!("seed {}: top classifies as other", t.seed)));
            }
        }
        Ok(Outcome::pass(json!({})))
    });

    rec.run(
        "chains.union-double-perp",
        "double perps in the union restrict into member-wise double perps",
        || {
            let bad = first_failure(
                trials
                    .par_iter()
                    .flat_map(|t| {
                        let mut chains = vec![&t.anisotropic];
                        if let Some(e) = &t.elliptic.enrichment {
                            chains.push(e);
                        }
                        chains.into_par_iter().map(move |c| Ok(union_double_perp(space, c).map(|w| (t.seed, w))))
                    })
                    .collect::<Vec<_>>(),
            )?;
            Ok(match bad {
                None => Outcome::pass(json!({})),
                Some((seed, w)) => Outcome::fail(format!("seed {seed}: {w}")),
            })
        },
    );

    rec.run("chains.radical-complement", "span of a maximal elliptic subspace is a complement of Rad(f)", || {
        for t in &trials {
            if !is_radical_complement(space, t.elliptic.top())? {
                return Ok(Outcome::fail(format!(
                    "seed {}: span dim {} with dim Rad(f) = {}",
                    t.seed,
                    t.elliptic.top().span().dim(),
                    space.radical().dim()
                )));
            }
        }
        Ok(Outcome::pass(json!({ "span-dim": trials[0].elliptic.top().span().dim() })))
    });

    let intrinsic = IntrinsicGapReport::from_trials(&trials);
    rec.run("chains.trial-agreement", "all seeded trials give the same lengths", || {
        Ok(match &intrinsic {
            Ok(i) => Outcome::pass(json!({ "trials": i.trials })),
            Err(e) => Outcome::fail(e.to_string()),
        })
    });

    let intrinsic = intrinsic.ok();
    finish(space, rec, intrinsic)
}

fn finish(space: &PolarSpace, mut rec: Recorder, intrinsic: Option<IntrinsicGapReport>) -> VerifyReport {
    let g = *space.gaps();
    rec.run("gaps.reconciliation", "intrinsic (r, e, p) equals algebraic (r, e, p)", || {
        Ok(match &intrinsic {
            None => Outcome::fail("no intrinsic values"),
            Some(i) => Outcome::from_bool(
                i.triple() == g.triple(),
                json!({ "algebraic": [g.r, g.e, g.p], "intrinsic": [i.r, i.e, i.p] }),
                || format!("algebraic {:?}, intrinsic {:?}", g.triple(), i.triple()),
            ),
        })
    });
    VerifyReport {
        form: space.form().to_string(),
        field: space.field().to_string(),
        algebraic: g,
        intrinsic,
        records: rec.records,
        budget_exceeded: rec.budget_exceeded,
    }
}

fn chains_of(t: &Trial) -> Vec<&SubspaceChain> {
    let mut v = vec![&t.anisotropic, &t.parabolic];
    if let Some(e) = &t.elliptic.enrichment {
        v.push(e);
    }
    v
}

/// Histogram of hyperbolic line sizes over all non-collinear pairs. With
/// `cross_check`, also compares against the algebraic method and the span
/// dimension. The inner `Err` carries a failure witness.
pub fn hyperbolic_line_sizes(
    space: &PolarSpace,
    cross_check: bool,
) -> Result<std::result::Result<BTreeMap<usize, usize>, String>> {
    let n = space.num_points();
    let expected_dim = space.radical().dim() + 2;
    let per_point: Vec<Result<std::result::Result<BTreeMap<usize, usize>, String>>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut hist = BTreeMap::new();
            let mut partners = space.all_points();
            partners.difference_with(space.perp_of_point(a));
            for b in partners.ones().filter(|&b| b > a) {
                let syn = space.hyperbolic_line(a, b, HyperbolicMethod::Synthetic)?;
                if cross_check {
                    let alg = space.hyperbolic_line(a, b, HyperbolicMethod::Algebraic)?;
                    if syn != alg {
                        return Ok(Err(format!(
                            "pair ({a}, {b}): synthetic {:?}, algebraic {:?}",
                            syn.ones().collect::<Vec<_>>(),
                            alg.ones().collect::<Vec<_>>()
                        )));
                    }
                    let members: Vec<usize> = syn.ones().collect();
                    if !syn.contains(a) || !syn.contains(b) {
                        return Ok(Err(format!("pair ({a}, {b}) missing from its line")));
                    }
                    if members.iter().any(|&x| members.iter().any(|&y| space.collinear(x, y))) {
                        return Ok(Err(format!("pair ({a}, {b}): line has collinear points")));
                    }
                    let dim = space.span_of(&syn)?.dim();
                    if dim != expected_dim {
                        return Ok(Err(format!("pair ({a}, {b}): line spans dim {dim}, expected {expected_dim}")));
                    }
                }
                *hist.entry(syn.count_ones(..)).or_insert(0) += 1;
            }
            Ok(Ok(hist))
        })
        .collect();
    let mut total = BTreeMap::new();
    for r in per_point {
        match r? {
            Ok(h) => {
                for (k, v) in h {
                    *total.entry(k).or_insert(0) += v;
                }
            }
            Err(w) => return Ok(Err(w)),
        }
    }
    Ok(Ok(total))
}

fn check_elliptic_chain(space: &PolarSpace, t: &Trial) -> Result<Option<String>> {
    let chain = &t.elliptic;
    let seed = t.seed;
    for (i, m) in chain.members.iter().enumerate() {
        let c = space.classify_subspace(m)?;
        let want = if i == 0 { SubspaceClass::Hyperbolic } else { SubspaceClass::Elliptic };
        if c.class != want || !c.agrees {
            return Ok(Some(format!("seed {seed}: member {i} classifies as {:?}", c.class)));
        }
    }
    if space.field().characteristic() == 2 {
        let steps: Vec<usize> = chain
            .members
            .windows(2)
            .map(|w| w[1].span().dim() - w[0].span().dim())
            .collect();
        if steps.iter().any(|&s| s != 2) {
            return Ok(Some(format!("seed {seed}: span steps {steps:?}")));
        }
        let probe = SeededOrder::new(seed.wrapping_add(1), space.num_points());
        if let Some((x, p)) = elliptic_extension(space, chain.top(), &probe)? {
            return Ok(Some(format!("seed {seed}: top extends by points {x} and {p}")));
        }
    }
    Ok(None)
}

/// For a finite chain with union `U` (its top): for every non-collinear
/// pair `a, b` of `U` and every member `S` containing both, the double perp
/// in `U` meets `S` inside the double perp in `S`.
fn union_double_perp(space: &PolarSpace, chain: &SubspaceChain) -> Option<String> {
    if chain.members.len() < 2 {
        return None;
    }
    let top: &GeoSubspace = chain.top();
    for a in top.points().ones() {
        let mut partners = top.points().clone();
        partners.difference_with(space.perp_of_point(a));
        for b in partners.ones().filter(|&b| b > a) {
            let in_union = space.hyperbolic_line_within(top.points(), a, b);
            // The top member is the union itself, where the inclusion is an equality.
            for (i, s) in chain.members[..chain.members.len() - 1].iter().enumerate() {
                if !s.contains(a) || !s.contains(b) {
                    continue;
                }
                let mut restricted = in_union.clone();
                restricted.intersect_with(s.points());
                if !restricted.is_subset(&space.hyperbolic_line_within(s.points(), a, b)) {
                    return Some(format!("pair ({a}, {b}) in member {i}"));
                }
            }
        }
    }
    None
}
