//! JSON schemas for verdicts, witness models, forms, oracle reports, and
//! general assignment models.
//!
//! All serializations are deterministic: maps are ordered, ids are stable
//! within a run, and timing information is emitted only on request so that
//! equal inputs produce byte-identical output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use drs_core::decide::{SearchStats, UnsatTrace, Verdict};
use drs_core::forms::{FormContext, FormId};
use drs_core::oracle::{AxiomReport, CheckMode, GamModel};
use drs_core::unit::{Evaluation, Unit};
use drs_core::witness::{PointClass, WitnessModel};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatsJson {
    #[serde(rename = "labelsExplored")]
    pub labels_explored: u64,
    pub points: usize,
    #[serde(rename = "baseSize")]
    pub base_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u128>,
}

impl StatsJson {
    pub fn new(stats: &SearchStats, millis: Option<u128>) -> StatsJson {
        StatsJson {
            labels_explored: stats.labels_explored,
            points: stats.points,
            base_size: stats.base_size,
            millis,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictJson {
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<serde_json::Value>,
    pub stats: StatsJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormJson {
    pub degree: u32,
    pub dim: u32,
    pub color: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subs: Option<Vec<Vec<FormId>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointJson {
    pub id: u32,
    pub coords: Vec<String>,
    pub level: u32,
    pub class: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<u32>,
    #[serde(rename = "tagFormId")]
    pub tag_form_id: FormId,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessJson {
    pub n: u32,
    pub base: Vec<String>,
    pub tail: &'static str,
    pub points: Vec<PointJson>,
    pub forms: BTreeMap<String, FormJson>,
    pub ev: BTreeMap<String, Vec<u32>>,
    pub root: u32,
}

pub fn form_json(ctx: &FormContext, f: FormId) -> FormJson {
    FormJson {
        degree: ctx.degree(f),
        dim: ctx.dim(),
        color: ctx.color_names(f).into_iter().map(str::to_string).collect(),
        subs: ctx.subs(f).map(|s| s.to_vec()),
    }
}

/// The flat id-to-node table covering everything reachable from the roots.
pub fn forms_table(ctx: &FormContext, roots: &[FormId]) -> BTreeMap<String, FormJson> {
    let mut table = BTreeMap::new();
    for &root in roots {
        for f in ctx.reachable_forms(root) {
            table.entry(f.to_string()).or_insert_with(|| form_json(ctx, f));
        }
    }
    table
}

pub fn witness_json(ctx: &FormContext, model: &WitnessModel) -> WitnessJson {
    let unit = model.unit();
    let points = unit
        .points()
        .map(|(p, coords)| {
            let (class, direction) = match model.class(p) {
                PointClass::Root => ("root", None),
                PointClass::Created(d) => ("created", Some(d)),
                PointClass::Bridge => ("bridge", None),
            };
            PointJson {
                id: p,
                coords: coords.iter().map(|&c| unit.base()[c as usize].clone()).collect(),
                level: model.level(p),
                class,
                direction,
                tag_form_id: model.tag(p),
            }
        })
        .collect();
    let tags: Vec<FormId> = unit.points().map(|(p, _)| model.tag(p)).collect();
    WitnessJson {
        n: unit.n(),
        base: unit.base().to_vec(),
        tail: "t",
        points,
        forms: forms_table(ctx, &tags),
        ev: ev_json(model.ev()),
        root: model.root(),
    }
}

pub fn ev_json(ev: &Evaluation) -> BTreeMap<String, Vec<u32>> {
    ev.iter().map(|(var, set)| (var.clone(), set.iter().collect())).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitJson {
    pub n: u32,
    pub base: Vec<String>,
    pub points: Vec<Vec<String>>,
}

pub fn unit_json(unit: &Unit) -> UnitJson {
    UnitJson {
        n: unit.n(),
        base: unit.base().to_vec(),
        points: unit
            .points()
            .map(|(_, coords)| {
                coords.iter().map(|&c| unit.base()[c as usize].clone()).collect()
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceJson {
    pub entries: Vec<TraceEntryJson>,
    pub truncated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceEntryJson {
    #[serde(rename = "bannedDirection", skip_serializing_if = "Option::is_none")]
    pub banned_direction: Option<u32>,
    pub depth: u32,
    pub literals: Vec<(String, bool)>,
}

pub fn trace_json(trace: &UnsatTrace) -> TraceJson {
    TraceJson {
        entries: trace
            .entries
            .iter()
            .map(|e| TraceEntryJson {
                banned_direction: e.banned_direction,
                depth: e.depth,
                literals: e.literals.clone(),
            })
            .collect(),
        truncated: trace.truncated,
    }
}

/// Verdict to JSON.  The certificate is embedded for `Sat`/`Invalid`; an
/// `Unsat` certificate (the trace) is embedded only when requested.
pub fn verdict_json(
    ctx: &FormContext,
    verdict: &Verdict,
    include_trace: bool,
    millis: Option<u128>,
) -> VerdictJson {
    match verdict {
        Verdict::Sat { model, root, stats } => VerdictJson {
            verdict: "SAT",
            certificate: Some(serde_json::json!({
                "witness": witness_json(ctx, model),
                "root": root,
            })),
            stats: StatsJson::new(stats, millis),
        },
        Verdict::Unsat { trace, stats } => VerdictJson {
            verdict: "UNSAT",
            certificate: include_trace.then(|| {
                serde_json::json!({ "trace": trace_json(trace) })
            }),
            stats: StatsJson::new(stats, millis),
        },
        Verdict::Valid { stats } => VerdictJson {
            verdict: "VALID",
            certificate: None,
            stats: StatsJson::new(stats, millis),
        },
        Verdict::Invalid { model, point, side, stats } => VerdictJson {
            verdict: "INVALID",
            certificate: Some(serde_json::json!({
                "witness": witness_json(ctx, model),
                "point": point,
                "separates": match side {
                    drs_core::decide::InvalidSide::LeftNotBelowRight => "left-not-below-right",
                    drs_core::decide::InvalidSide::RightNotBelowLeft => "right-not-below-left",
                },
            })),
            stats: StatsJson::new(stats, millis),
        },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheckJson {
    pub unit: usize,
    pub axiom: String,
    pub direction: u32,
    pub mode: &'static str,
    pub samples: u64,
    pub failures: Vec<Vec<Vec<u32>>>,
}

pub fn axiom_report_json(unit_index: usize, report: &AxiomReport) -> Vec<AxiomCheckJson> {
    report
        .checks
        .iter()
        .map(|c| AxiomCheckJson {
            unit: unit_index,
            axiom: c.axiom.to_string(),
            direction: c.direction,
            mode: match c.mode {
                CheckMode::Exhaustive => "exhaustive",
                CheckMode::Sampled => "sampled",
            },
            samples: c.samples,
            failures: c.failures.iter().map(|f| f.sets.clone()).collect(),
        })
        .collect()
}

/// On-disk format for general assignment models.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GamModelJson {
    pub width: u32,
    pub domain: Vec<String>,
    pub interp: BTreeMap<String, Vec<Vec<u32>>>,
    pub assignments: Vec<Vec<u32>>,
}

pub fn gam_from_json(j: &GamModelJson) -> Result<GamModel, drs_core::oracle::GamError> {
    let interp = j
        .interp
        .iter()
        .map(|(r, tuples)| (r.clone(), tuples.iter().cloned().collect()))
        .collect();
    GamModel::new(j.width, j.domain.clone(), interp, j.assignments.clone())
}

pub fn gam_to_json(m: &GamModel) -> GamModelJson {
    GamModelJson {
        width: m.width(),
        domain: m.domain().to_vec(),
        interp: m
            .interp()
            .iter()
            .map(|(r, tuples)| (r.clone(), tuples.iter().cloned().collect()))
            .collect(),
        assignments: m.assignments().to_vec(),
    }
}
