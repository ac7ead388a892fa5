//! Serializable mining and comparison reports.
//!
//! Everything outside `meta` is a pure function of the dataset and the
//! mining configuration, so two runs on the same inputs produce identical
//! bodies.

use std::fmt::Write as _;

use serde::Serialize;

use crate::baselines::ComparisonReport;
use crate::error::Result;
use crate::multilevel::{LevelResult, MultiLevelResult, StepStats};
use crate::pincer::PassRecord;
use crate::rules::{generate_rules, ratio_to_f64, FrequentSet, Rule};
use crate::taxonomy::ItemCode;

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub taxonomy: String,
    pub transactions: String,
    pub fingerprint: String,
    pub config: serde_json::Value,
}

impl Meta {
    pub fn new(
        command: &str,
        taxonomy: &str,
        transactions: &str,
        fingerprint: &str,
        config: serde_json::Value,
    ) -> Meta {
        Meta {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            taxonomy: taxonomy.to_string(),
            transactions: transactions.to_string(),
            fingerprint: fingerprint.to_string(),
            config,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetEntry {
    pub items: Vec<ItemCode>,
    pub support: u64,
    pub support_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleEntry {
    pub antecedent: Vec<ItemCode>,
    pub consequent: Vec<ItemCode>,
    pub support: u64,
    pub confidence: f64,
    /// Exact confidence as `numerator/denominator` of the support counts.
    pub confidence_ratio: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub mining_passes: u64,
    pub expansion_passes: u64,
    pub steps: Vec<StepStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub border: Option<Vec<PassRecord>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelEntry {
    pub level: usize,
    pub minsup: u64,
    pub vocabulary: Vec<ItemCode>,
    pub maximal: Vec<SetEntry>,
    pub frequent: Vec<SetEntry>,
    pub rules: Vec<RuleEntry>,
    pub trace: TraceEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Totals {
    pub mining_passes: u64,
    pub expansion_passes: u64,
    pub candidates: usize,
    pub frequent: usize,
    pub rules: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MiningBody {
    pub levels: Vec<LevelEntry>,
    pub totals: Totals,
}

#[derive(Debug, Clone, Serialize)]
pub struct MiningReport {
    pub meta: Meta,
    #[serde(flatten)]
    pub body: MiningBody,
}

fn set_entry(level: &LevelResult, f: &FrequentSet) -> SetEntry {
    SetEntry {
        items: level.codes(&f.itemset),
        support: f.support_count,
        support_fraction: ratio_to_f64(f.support_fraction()),
    }
}

fn rule_entry(level: &LevelResult, r: &Rule) -> RuleEntry {
    RuleEntry {
        antecedent: level.codes(&r.antecedent),
        consequent: level.codes(&r.consequent),
        support: r.support_count,
        confidence: ratio_to_f64(r.confidence),
        confidence_ratio: format!("{}/{}", r.confidence.numer(), r.confidence.denom()),
    }
}

/// Builds the report body, generating rules per level at `min_conf`.
pub fn mining_body(result: &MultiLevelResult, min_conf: f64) -> Result<MiningBody> {
    let mut levels = Vec::new();
    for level in &result.levels {
        let rules = generate_rules(&level.frequent, min_conf, level.level)?;
        levels.push(LevelEntry {
            level: level.level,
            minsup: level.minsup,
            vocabulary: level.vocabulary.clone(),
            maximal: level.maximal.iter().map(|f| set_entry(level, f)).collect(),
            frequent: level.frequent.iter().map(|f| set_entry(level, f)).collect(),
            rules: rules.iter().map(|r| rule_entry(level, r)).collect(),
            trace: TraceEntry {
                mining_passes: level.mining_passes,
                expansion_passes: level.expansion_passes,
                steps: level.steps.clone(),
                border: level.border_trace.as_ref().map(|t| t.records.clone()),
            },
        });
    }
    let totals = Totals {
        mining_passes: result.mining_passes(),
        expansion_passes: result.expansion_passes(),
        candidates: result.candidates(),
        frequent: levels.iter().map(|l| l.frequent.len()).sum(),
        rules: levels.iter().map(|l| l.rules.len()).sum(),
    };
    Ok(MiningBody { levels, totals })
}

fn join_codes(codes: &[ItemCode]) -> String {
    let parts: Vec<String> = codes.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn render_mining_text(report: &MiningReport) -> String {
    let mut out = String::new();
    let body = &report.body;
    for level in &body.levels {
        let _ = writeln!(out, "Level {} (minsup {})", level.level, level.minsup);
        let _ = writeln!(out, "  vocabulary: {}", join_codes(&level.vocabulary));
        let _ = writeln!(out, "  maximal frequent itemsets:");
        for m in &level.maximal {
            let _ = writeln!(out, "    {} = {}", join_codes(&m.items), m.support);
        }
        let _ = writeln!(out, "  frequent itemsets: {}", level.frequent.len());
        for f in &level.frequent {
            let _ = writeln!(out, "    {} = {}", join_codes(&f.items), f.support);
        }
        let _ = writeln!(out, "  rules: {}", level.rules.len());
        for r in &level.rules {
            let _ = writeln!(
                out,
                "    {} -> {}  support {}  confidence {} ({:.3})",
                join_codes(&r.antecedent),
                join_codes(&r.consequent),
                r.support,
                r.confidence_ratio,
                r.confidence
            );
        }
        let _ = writeln!(
            out,
            "  passes: {} mining + {} expansion",
            level.trace.mining_passes, level.trace.expansion_passes
        );
    }
    let t = &body.totals;
    let _ = writeln!(
        out,
        "Totals: {} mining passes, {} expansion passes, {} candidates, {} frequent itemsets, {} rules",
        t.mining_passes, t.expansion_passes, t.candidates, t.frequent, t.rules
    );
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub meta: Meta,
    #[serde(flatten)]
    pub body: ComparisonReport,
}

pub fn render_compare_text(report: &CompareReport) -> String {
    let body = &report.body;
    let [a, b] = body.algorithms;
    let mut out = String::new();
    for level in &body.levels {
        let _ = writeln!(out, "Candidate itemsets at level {}", level.level);
        let _ = writeln!(
            out,
            "  {:>3}  {:>12} {:>12}  {:>12} {:>12}",
            "k",
            format!("cand:{a}"),
            format!("cand:{b}"),
            format!("freq:{a}"),
            format!("freq:{b}")
        );
        for s in &level.steps {
            let _ = writeln!(
                out,
                "  {:>3}  {:>12} {:>12}  {:>12} {:>12}",
                s.k, s.candidates[0], s.candidates[1], s.frequent[0], s.frequent[1]
            );
        }
        let _ = writeln!(
            out,
            "  passes: {a} {}, {b} {}",
            level.passes[0], level.passes[1]
        );
    }
    let _ = writeln!(
        out,
        "Total passes: {a} {}, {b} {} (delta {}); candidates: {a} {}, {b} {}",
        body.total_passes[0],
        body.total_passes[1],
        body.pass_delta,
        body.total_candidates[0],
        body.total_candidates[1]
    );
    out
}
