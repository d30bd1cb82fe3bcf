//! Resource accounting and communication-complexity classification.
//!
//! Aggregates channel events into a [`ResourceTally`], classifies the run
//! under one of the three counting models (quantum channel only; prior
//! entanglement plus classical channel; prior entanglement plus both
//! channels), fits symbolic affine expressions in the key size `n` and
//! message size `m`, and compares protocols within model groups.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{ChannelEvent, EbitPhase, EventKind};

pub type Coeff = Ratio<i64>;

/// Aggregated communication counts for one protocol run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceTally {
    pub qubits_sent: u64,
    pub classical_bits_sent: u64,
    pub ebits_prior: u64,
    pub ebits_in_protocol: u64,
}

/// The three counting models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelClass {
    /// Quantum channel only; cost counts qubits, written `Q(f)`.
    Yao,
    /// Prior entanglement + classical channel; counts classical bits,
    /// written `C*(f)`.
    CleveBuhrman,
    /// Prior entanglement + both channels; counts all further
    /// communications, written `Q*(f)`.
    Hybrid,
}

/// Whether a protocol authenticates a message or an identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AuthTask {
    DataOrigin,
    Identity,
}

impl AuthTask {
    pub fn function_symbol(self) -> &'static str {
        match self {
            AuthTask::DataOrigin => "f_D",
            AuthTask::Identity => "f_I",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    Exact,
    /// Rendered with a big-Omega wrapper.
    LowerBound,
}

/// Affine communication-cost expression `coeff_n * n + coeff_m * m + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComplexityExpr {
    pub coeff_n: Coeff,
    pub coeff_m: Coeff,
    pub constant: Coeff,
    pub bound: BoundKind,
}

impl ComplexityExpr {
    pub fn exact(coeff_n: i64, coeff_m: i64, constant: i64) -> Self {
        ComplexityExpr {
            coeff_n: Ratio::from_integer(coeff_n),
            coeff_m: Ratio::from_integer(coeff_m),
            constant: Ratio::from_integer(constant),
            bound: BoundKind::Exact,
        }
    }

    pub fn lower_bound(coeff_n: i64, coeff_m: i64, constant: i64) -> Self {
        ComplexityExpr {
            bound: BoundKind::LowerBound,
            ..ComplexityExpr::exact(coeff_n, coeff_m, constant)
        }
    }

    pub fn evaluate(&self, n: u64, m: u64) -> Ratio<i64> {
        self.coeff_n * Ratio::from_integer(n as i64)
            + self.coeff_m * Ratio::from_integer(m as i64)
            + self.constant
    }

    /// Coefficient equality, ignoring the bound kind.
    pub fn same_coefficients(&self, other: &ComplexityExpr) -> bool {
        self.coeff_n == other.coeff_n
            && self.coeff_m == other.coeff_m
            && self.constant == other.constant
    }

    /// Render the affine body, e.g. `3n`, `2n + 4`, `n + m`.
    pub fn render_body(&self) -> String {
        fn coeff_str(c: Coeff, var: &str) -> String {
            if c == Ratio::from_integer(1) {
                var.to_string()
            } else if c.is_integer() {
                format!("{}{var}", c.numer())
            } else {
                format!("({c}){var}")
            }
        }
        let mut terms = Vec::new();
        let zero = Ratio::from_integer(0);
        if self.coeff_n != zero {
            terms.push(coeff_str(self.coeff_n, "n"));
        }
        if self.coeff_m != zero {
            terms.push(coeff_str(self.coeff_m, "m"));
        }
        if self.constant != zero || terms.is_empty() {
            terms.push(self.constant.to_string());
        }
        terms.join(" + ")
    }
}

impl std::fmt::Display for ComplexityExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.bound {
            BoundKind::Exact => write!(f, "{}", self.render_body()),
            BoundKind::LowerBound => write!(f, "Ω({})", self.render_body()),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum LedgerError {
    #[error("an all-zero tally cannot be classified")]
    Unclassifiable,
    #[error("counts are not affine in (n, m): {0}")]
    NonAffine(String),
    #[error("fit requires at least {needed} grid points, got {got}")]
    GridTooSmall { needed: usize, got: usize },
    #[error("no comparison is possible across model groups ({0:?} vs {1:?})")]
    CrossModelComparison(ModelClass, ModelClass),
    #[error("comparison requires at least one entry")]
    EmptyComparison,
}

/// Sum channel events into a resource tally.
pub fn tally(events: &[ChannelEvent]) -> ResourceTally {
    let mut t = ResourceTally::default();
    for e in events {
        match e.kind {
            EventKind::QuantumSend { qubits } => t.qubits_sent += qubits,
            EventKind::ClassicalSend { bits } => t.classical_bits_sent += bits,
            EventKind::EbitDistribution {
                pairs,
                phase,
                transmitted_halves,
            } => match phase {
                EbitPhase::Prior => t.ebits_prior += pairs,
                EbitPhase::InProtocol => {
                    t.ebits_in_protocol += pairs;
                    t.qubits_sent += transmitted_halves;
                }
            },
        }
    }
    t
}

/// Total classification of a non-zero tally.
///
/// Qubit sends with no ebits and no classical traffic are the quantum-only
/// model. Classical traffic over prior entanglement with zero qubit sends
/// is the entanglement-plus-classical model. Everything else, including
/// the unnamed qubits+classical-without-ebits combination, is Hybrid.
pub fn classify(t: &ResourceTally) -> Result<ModelClass, LedgerError> {
    let any = t.qubits_sent | t.classical_bits_sent | t.ebits_prior | t.ebits_in_protocol;
    if any == 0 {
        return Err(LedgerError::Unclassifiable);
    }
    let ebits = t.ebits_prior + t.ebits_in_protocol;
    if t.qubits_sent > 0 && t.classical_bits_sent == 0 && ebits == 0 {
        Ok(ModelClass::Yao)
    } else if t.qubits_sent == 0 && t.classical_bits_sent > 0 && ebits > 0 {
        Ok(ModelClass::CleveBuhrman)
    } else {
        Ok(ModelClass::Hybrid)
    }
}

/// The communications counted for a tally under its model.
pub fn counted_communications(t: &ResourceTally, model: ModelClass) -> u64 {
    match model {
        ModelClass::Yao => t.qubits_sent,
        ModelClass::CleveBuhrman => t.classical_bits_sent,
        ModelClass::Hybrid => t.qubits_sent + t.classical_bits_sent,
    }
}

/// Fit `count = a*n + b*m + c` through measured grid points, exactly.
///
/// Each point is `((n, m), count)`. A parameter that never varies across
/// the grid gets coefficient zero (its effect, if any, folds into the
/// constant). If the counts are not affine, the fit is refused rather
/// than approximated.
pub fn fit_complexity(points: &[((u64, u64), u64)]) -> Result<ComplexityExpr, LedgerError> {
    if points.len() < 3 {
        return Err(LedgerError::GridTooSmall {
            needed: 3,
            got: points.len(),
        });
    }
    let n_varies = points.windows(2).any(|w| w[0].0 .0 != w[1].0 .0);
    let m_varies = points.windows(2).any(|w| w[0].0 .1 != w[1].0 .1);
    let int = |x: u64| Ratio::from_integer(x as i64);

    // Slope of `count` along one parameter, consistency-checked over every
    // pair of points that agree on the other parameter.
    let slope = |select_var: fn(&(u64, u64)) -> u64,
                 select_fixed: fn(&(u64, u64)) -> u64|
     -> Result<Option<Coeff>, LedgerError> {
        let mut found: Option<Coeff> = None;
        for (i, (pi, ci)) in points.iter().enumerate() {
            for (pj, cj) in &points[i + 1..] {
                if select_fixed(pi) != select_fixed(pj) || select_var(pi) == select_var(pj) {
                    continue;
                }
                let s = (int(*cj) - int(*ci)) / (int(select_var(pj)) - int(select_var(pi)));
                match found {
                    None => found = Some(s),
                    Some(prev) if prev != s => {
                        return Err(LedgerError::NonAffine(format!(
                            "inconsistent slopes {prev} and {s}"
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(found)
    };

    let a = if n_varies {
        slope(|p| p.0, |p| p.1)?.ok_or_else(|| {
            LedgerError::NonAffine("n varies only jointly with m; grid cannot separate them".into())
        })?
    } else {
        Ratio::from_integer(0)
    };
    let b = if m_varies {
        slope(|p| p.1, |p| p.0)?.ok_or_else(|| {
            LedgerError::NonAffine("m varies only jointly with n; grid cannot separate them".into())
        })?
    } else {
        Ratio::from_integer(0)
    };
    let ((n0, m0), c0) = points[0];
    let c = int(c0) - a * int(n0) - b * int(m0);

    let expr = ComplexityExpr {
        coeff_n: a,
        coeff_m: b,
        constant: c,
        bound: BoundKind::Exact,
    };
    for ((n, m), count) in points {
        if expr.evaluate(*n, *m) != int(*count) {
            return Err(LedgerError::NonAffine(format!(
                "fit {} misses measured count {count} at (n={n}, m={m})",
                expr.render_body()
            )));
        }
    }
    Ok(expr)
}

/// Render the standard notation, e.g. `Q(f_I) = 3n` or `C*_E(f_I) = Ω(2n)`.
pub fn notation(
    model: ModelClass,
    expr: &ComplexityExpr,
    task: AuthTask,
    adversarial: bool,
) -> String {
    let symbol = match model {
        ModelClass::Yao => "Q",
        ModelClass::CleveBuhrman => "C*",
        ModelClass::Hybrid => "Q*",
    };
    let sub = if adversarial { "_E" } else { "" };
    format!("{symbol}{sub}({}) = {expr}", task.function_symbol())
}

/// One protocol entry offered for comparison.
#[derive(Debug, Clone)]
pub struct CompareEntry {
    pub id: String,
    pub model: ModelClass,
    pub expr: ComplexityExpr,
}

/// How two expressions in the same group relate.
#[derive(Debug, Clone, PartialEq)]
pub enum PairOrder {
    /// Equal for all sizes.
    Equivalent,
    /// First is cheaper for all sizes.
    FirstCheaper,
    /// Second is cheaper for all sizes.
    SecondCheaper,
    /// Order depends on the sizes; the condition favors the first entry.
    Conditional { first_cheaper_when: String },
    /// Mixed exact-vs-lower-bound entries are not ordered.
    NotComparable,
}

/// Reference size used for within-group ranking.
pub const REFERENCE_SIZE: u64 = 64;

#[derive(Debug, Clone)]
pub struct RankedEntry {
    pub id: String,
    pub expr: ComplexityExpr,
    /// Value at `n = m = REFERENCE_SIZE`, used for ordering.
    pub reference_value: Ratio<i64>,
    /// 1-based rank within the group's bound-kind subgroup; ties share rank.
    pub rank: usize,
}

#[derive(Debug, Clone)]
pub struct ComparisonGroup {
    pub model: ModelClass,
    pub entries: Vec<RankedEntry>,
    /// Pairwise relations worth reporting: ties, crossovers, mixed bounds.
    pub notes: Vec<(String, String, PairOrder)>,
}

/// Relate two entries; cross-model requests are refused.
pub fn rank_pair(a: &CompareEntry, b: &CompareEntry) -> Result<PairOrder, LedgerError> {
    if a.model != b.model {
        return Err(LedgerError::CrossModelComparison(a.model, b.model));
    }
    if a.expr.bound != b.expr.bound {
        return Ok(PairOrder::NotComparable);
    }
    let zero = Ratio::from_integer(0);
    let dn = a.expr.coeff_n - b.expr.coeff_n;
    let dm = a.expr.coeff_m - b.expr.coeff_m;
    let dc = a.expr.constant - b.expr.constant;
    if dn == zero && dm == zero && dc == zero {
        return Ok(PairOrder::Equivalent);
    }
    let non_positive = dn <= zero && dm <= zero && dc <= zero;
    let non_negative = dn >= zero && dm >= zero && dc >= zero;
    if non_positive {
        return Ok(PairOrder::FirstCheaper);
    }
    if non_negative {
        return Ok(PairOrder::SecondCheaper);
    }
    // Mixed signs: the order flips depending on the sizes. Render the
    // region where the first entry is cheaper: dn*n + dm*m + dc < 0.
    let condition = if dc == zero && dn == -dm && dn > zero {
        "n < m".to_string()
    } else if dc == zero && dn == -dm && dn < zero {
        "m < n".to_string()
    } else {
        let lhs = ComplexityExpr {
            coeff_n: dn,
            coeff_m: dm,
            constant: dc,
            bound: BoundKind::Exact,
        };
        format!("{} < 0", lhs.render_body())
    };
    Ok(PairOrder::Conditional {
        first_cheaper_when: condition,
    })
}

/// Group entries by model and rank within each group at the reference size.
///
/// No ordering is ever emitted across groups.
pub fn compare(entries: &[CompareEntry]) -> Result<Vec<ComparisonGroup>, LedgerError> {
    if entries.is_empty() {
        return Err(LedgerError::EmptyComparison);
    }
    let mut groups: Vec<ComparisonGroup> = Vec::new();
    for model in [ModelClass::Yao, ModelClass::CleveBuhrman, ModelClass::Hybrid] {
        let members: Vec<&CompareEntry> = entries.iter().filter(|e| e.model == model).collect();
        if members.is_empty() {
            continue;
        }
        let mut ranked: Vec<RankedEntry> = members
            .iter()
            .map(|e| RankedEntry {
                id: e.id.clone(),
                expr: e.expr,
                reference_value: e.expr.evaluate(REFERENCE_SIZE, REFERENCE_SIZE),
                rank: 0,
            })
            .collect();
        ranked.sort_by(|x, y| {
            (x.expr.bound == BoundKind::LowerBound)
                .cmp(&(y.expr.bound == BoundKind::LowerBound))
                .then(x.reference_value.cmp(&y.reference_value))
                .then(x.id.cmp(&y.id))
        });
        let mut rank = 0;
        let mut last: Option<(BoundKind, Ratio<i64>)> = None;
        for (i, entry) in ranked.iter_mut().enumerate() {
            let key = (entry.expr.bound, entry.reference_value);
            if last != Some(key) {
                rank = i + 1;
                last = Some(key);
            }
            entry.rank = rank;
        }
        let mut notes = Vec::new();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                let order = rank_pair(a, b)?;
                match order {
                    PairOrder::FirstCheaper | PairOrder::SecondCheaper => {}
                    other => notes.push((a.id.clone(), b.id.clone(), other)),
                }
            }
        }
        groups.push(ComparisonGroup {
            model,
            entries: ranked,
            notes,
        });
    }
    Ok(groups)
}
