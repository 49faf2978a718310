//! JSON shapes for everything the tool emits. Field order is fixed by the
//! struct definitions, so identical runs serialize to identical bytes.

use nilsampler_core::equidist::{CorrelationTable, EquidistReport};
use nilsampler_core::normal_form::{NormalForm, PropertyReport};
use nilsampler_core::orbit::Diagnostic;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WeylJson {
    pub k: Vec<i32>,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictsJson {
    pub torus: bool,
    pub full: bool,
    pub consistent: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdsJson {
    pub weyl: f64,
    pub discrepancy: f64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EquidistJson {
    pub config_hash: String,
    pub scheme: String,
    pub n_points: u64,
    pub weight_total: f64,
    pub progression: (u64, u64),
    pub weyl: Vec<WeylJson>,
    pub max_weyl_abs: f64,
    pub torus_discrepancy: f64,
    pub torus_method: String,
    pub full_discrepancy: f64,
    pub full_method: String,
    pub verdicts: VerdictsJson,
    pub thresholds: ThresholdsJson,
    pub diagnostics: Vec<DiagnosticJson>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticJson {
    pub code: String,
    pub ok: bool,
    pub detail: String,
}

pub fn equidist_json(
    report: &EquidistReport,
    config_hash: &str,
    progression: (u64, u64),
    diagnostics: &[Diagnostic],
) -> EquidistJson {
    EquidistJson {
        config_hash: config_hash.to_string(),
        scheme: report.scheme.name(),
        n_points: report.n_points,
        weight_total: report.weight_total,
        progression,
        weyl: report
            .weyl
            .iter()
            .map(|e| WeylJson {
                k: e.k.clone(),
                re: e.value.re,
                im: e.value.im,
                abs: e.value.norm(),
            })
            .collect(),
        max_weyl_abs: report.max_weyl_abs,
        torus_discrepancy: report.torus_discrepancy,
        torus_method: report.torus_method.name(),
        full_discrepancy: report.full_discrepancy,
        full_method: report.full_method.name(),
        verdicts: VerdictsJson {
            torus: report.torus_equidistributed,
            full: report.full_equidistributed,
            consistent: report.criterion_consistent,
        },
        thresholds: ThresholdsJson {
            weyl: report.thresholds.weyl,
            discrepancy: report.thresholds.discrepancy,
        },
        diagnostics: diagnostics
            .iter()
            .map(|d| DiagnosticJson {
                code: d.code.to_string(),
                ok: d.ok,
                detail: d.detail.clone(),
            })
            .collect(),
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct NormalFormJson {
    pub g: Vec<String>,
    pub lambda: Vec<Vec<f64>>,
    pub p: Vec<String>,
    pub ell: Vec<u32>,
    pub property_p: bool,
    pub chosen_w: String,
}

pub fn normal_form_json(nf: &NormalForm, property_p: bool, chosen_w: &str) -> NormalFormJson {
    NormalFormJson {
        g: nf.g.iter().map(|g| g.to_string()).collect(),
        lambda: nf.lambda_f64(),
        p: nf.p.iter().map(|p| p.to_string()).collect(),
        ell: nf.ell.clone(),
        property_p,
        chosen_w: chosen_w.to_string(),
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PropertyJson {
    pub holds: bool,
    pub threshold: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    pub coefficients: Vec<f64>,
    pub orders: Vec<u32>,
    pub combination: String,
    pub classification: String,
}

pub fn property_json(rep: &PropertyReport, threshold: &str) -> PropertyJson {
    PropertyJson {
        holds: rep.holds,
        threshold: threshold.to_string(),
        witness: rep.witness.as_ref().map(|w| WitnessJson {
            coefficients: w.coefficients.clone(),
            orders: w.orders.clone(),
            combination: w.combination.to_string(),
            classification: w.classification.clone(),
        }),
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationJson {
    pub config_hash: String,
    pub scheme: String,
    pub frequency: Vec<i32>,
    pub h_max: usize,
    pub a: Vec<WeylJson>,
    pub a0: f64,
    pub weighted_avg_abs: f64,
    pub p_total: f64,
    pub p_last: f64,
    pub tail_ratios: Vec<f64>,
    pub bound_lhs: f64,
    pub bound_rhs: f64,
    pub bound_slack: f64,
    pub bound_ok: bool,
}

pub fn correlation_json(
    t: &CorrelationTable,
    config_hash: &str,
    scheme: &str,
    frequency: &[i32],
) -> CorrelationJson {
    CorrelationJson {
        config_hash: config_hash.to_string(),
        scheme: scheme.to_string(),
        frequency: frequency.to_vec(),
        h_max: t.h_max,
        a: t
            .a
            .iter()
            .enumerate()
            .map(|(h, v)| WeylJson {
                k: vec![(h + 1) as i32],
                re: v.re,
                im: v.im,
                abs: v.norm(),
            })
            .collect(),
        a0: t.a0,
        weighted_avg_abs: t.weighted_avg.norm(),
        p_total: t.p_total,
        p_last: t.p_last,
        tail_ratios: t.tail_ratios.clone(),
        bound_lhs: t.bound_lhs,
        bound_rhs: t.bound_rhs,
        bound_slack: t.bound_slack,
        bound_ok: t.bound_ok,
    }
}
