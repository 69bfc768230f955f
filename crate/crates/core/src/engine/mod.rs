//! Fact store and forward-chaining rules for unknotting bounds.
//!
//! Facts are atoms about knots: torsion-order intervals, Gordian-distance
//! bounds, relations produced by null-homologous twists, and derived
//! properties. Rules run to a fixpoint with interval-narrowing semantics:
//! a new interval for a knot is intersected with the current one, bound
//! facts keep their best value, and every derived fact records its rule and
//! premise atoms so that the full derivation replays.
//!
//! Rules:
//!
//! * R1 - a gap between torsion intervals lower-bounds Gordian distance.
//! * R2 - a Gordian distance bound transports torsion intervals.
//! * R3 - a null-homologous twist factors through a single crossing change,
//!   up to S-equivalence of the far end (introduces the fresh knot `J'`).
//! * R4 - S-equivalence preserves the Alexander polynomial.
//! * R5 - the sum of a knot with its reverse mirror keeps its torsion
//!   interval.
//! * R6 - the sum of a knot with its concordance inverse is smoothly doubly
//!   slice and amphicheiral, and inherits Alexander polynomial one.
//! * R7 - torsion intervals transfer to unknotting bounds (distance to the
//!   unknot) and unknotting upper bounds cap torsion.

pub mod session;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Opaque knot identifier, unique within a session.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KnotId(pub String);

impl KnotId {
    pub fn new(name: impl Into<String>) -> Self {
        KnotId(name.into())
    }

    /// The distinguished unknot id, pre-seeded in every store.
    pub fn unknot() -> Self {
        KnotId("unknot".into())
    }
}

impl fmt::Display for KnotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for KnotId {
    fn from(s: &str) -> Self {
        KnotId(s.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KnotProperty {
    DoublySlice,
    Amphicheiral,
    SmoothlySlice,
}

impl fmt::Display for KnotProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            KnotProperty::DoublySlice => "doubly-slice",
            KnotProperty::Amphicheiral => "amphicheiral",
            KnotProperty::SmoothlySlice => "smoothly-slice",
        };
        write!(f, "{s}")
    }
}

/// A knowledge-base atom. Symmetric relations are stored with their knots
/// sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Fact {
    TorsionInterval {
        knot: KnotId,
        lower: u32,
        #[serde(skip_serializing_if = "Option::is_none")]
        upper: Option<u32>,
    },
    GordianLe { a: KnotId, b: KnotId, distance: u32 },
    GordianGe { a: KnotId, b: KnotId, distance: u32 },
    NullHomologousTwist { from: KnotId, to: KnotId },
    CrossingChange { a: KnotId, b: KnotId },
    SEquivalent { a: KnotId, b: KnotId },
    AlexanderOne { knot: KnotId },
    UnknottingLe { knot: KnotId, bound: u32 },
    UnknottingGe { knot: KnotId, bound: u32 },
    ConnectedSumWithInverse { sum: KnotId, summand: KnotId },
    Property { knot: KnotId, property: KnotProperty },
}

impl Fact {
    /// Wraps a table-derived torsion bracket as an assertable fact.
    pub fn from_torsion_interval(knot: KnotId, interval: &crate::torsion::TorsionInterval) -> Fact {
        Fact::TorsionInterval { knot, lower: interval.lower, upper: interval.upper }
    }

    /// Sorts the ends of symmetric relations.
    fn normalized(self) -> Fact {
        let sort = |a: KnotId, b: KnotId| if a <= b { (a, b) } else { (b, a) };
        match self {
            Fact::GordianLe { a, b, distance } => {
                let (a, b) = sort(a, b);
                Fact::GordianLe { a, b, distance }
            }
            Fact::GordianGe { a, b, distance } => {
                let (a, b) = sort(a, b);
                Fact::GordianGe { a, b, distance }
            }
            Fact::CrossingChange { a, b } => {
                let (a, b) = sort(a, b);
                Fact::CrossingChange { a, b }
            }
            Fact::SEquivalent { a, b } => {
                let (a, b) = sort(a, b);
                Fact::SEquivalent { a, b }
            }
            other => other,
        }
    }

    pub fn knots(&self) -> Vec<&KnotId> {
        match self {
            Fact::TorsionInterval { knot, .. }
            | Fact::AlexanderOne { knot }
            | Fact::UnknottingLe { knot, .. }
            | Fact::UnknottingGe { knot, .. }
            | Fact::Property { knot, .. } => vec![knot],
            Fact::GordianLe { a, b, .. }
            | Fact::GordianGe { a, b, .. }
            | Fact::CrossingChange { a, b }
            | Fact::SEquivalent { a, b } => vec![a, b],
            Fact::NullHomologousTwist { from, to } => vec![from, to],
            Fact::ConnectedSumWithInverse { sum, summand } => vec![sum, summand],
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::TorsionInterval { knot, lower, upper } => match upper {
                Some(u) => write!(f, "TorsionInterval({knot}, [{lower}, {u}])"),
                None => write!(f, "TorsionInterval({knot}, [{lower}, inf))"),
            },
            Fact::GordianLe { a, b, distance } => write!(f, "GordianLe({a}, {b}, {distance})"),
            Fact::GordianGe { a, b, distance } => write!(f, "GordianGe({a}, {b}, {distance})"),
            Fact::NullHomologousTwist { from, to } => {
                write!(f, "NullHomologousTwist({from} -> {to})")
            }
            Fact::CrossingChange { a, b } => write!(f, "CrossingChange({a}, {b})"),
            Fact::SEquivalent { a, b } => write!(f, "SEquivalent({a}, {b})"),
            Fact::AlexanderOne { knot } => write!(f, "AlexanderOne({knot})"),
            Fact::UnknottingLe { knot, bound } => write!(f, "UnknottingLe({knot}, {bound})"),
            Fact::UnknottingGe { knot, bound } => write!(f, "UnknottingGe({knot}, {bound})"),
            Fact::ConnectedSumWithInverse { sum, summand } => {
                write!(f, "ConnectedSumWithInverse({sum} = {summand} # -{summand})")
            }
            Fact::Property { knot, property } => write!(f, "Property({knot}, {property})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
}

impl RuleId {
    pub fn label(self) -> &'static str {
        match self {
            RuleId::R1 => "torsion-order gap lower-bounds Gordian distance",
            RuleId::R2 => "Gordian distance transports torsion intervals",
            RuleId::R3 => "null-homologous twist factors through a crossing change",
            RuleId::R4 => "S-equivalence preserves the Alexander polynomial",
            RuleId::R5 => "sum with the reverse mirror keeps the torsion interval",
            RuleId::R6 => "sum with the concordance inverse is doubly slice and amphicheiral",
            RuleId::R7 => "torsion bounds transfer to the unknotting number",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Seed,
    Asserted,
    Derived { rule: RuleId, premises: Vec<usize> },
}

#[derive(Clone, Debug, Serialize)]
pub struct StoredFact {
    pub id: usize,
    pub fact: Fact,
    pub provenance: Provenance,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("fact is ill-formed: {0}")]
    IllFormed(String),
    #[error("contradiction: {summary}\nfirst trace:\n{trace_a}\nsecond trace:\n{trace_b}")]
    Contradiction { summary: String, trace_a: String, trace_b: String },
    #[error("unknown knot `{0}`")]
    UnknownKnot(KnotId),
    #[error("audit failed for fact #{id}: {fact}")]
    AuditFailed { id: usize, fact: String },
}

#[derive(Clone, Debug, Default)]
struct IntervalState {
    lo: u32,
    hi: Option<u32>,
    lo_src: usize,
    hi_src: usize,
}

/// The fact store. `unknot` is pre-seeded with torsion interval `[0, 0]`.
#[derive(Clone, Debug)]
pub struct FactStore {
    facts: Vec<StoredFact>,
    intervals: BTreeMap<KnotId, IntervalState>,
    gordian_le: BTreeMap<(KnotId, KnotId), (u32, usize)>,
    gordian_ge: BTreeMap<(KnotId, KnotId), (u32, usize)>,
    unknotting_le: BTreeMap<KnotId, (u32, usize)>,
    unknotting_ge: BTreeMap<KnotId, (u32, usize)>,
    alexander_one: BTreeMap<KnotId, usize>,
    properties: BTreeMap<(KnotId, KnotProperty), usize>,
    twist_neighbors: BTreeMap<(KnotId, KnotId), KnotId>,
    knots: BTreeSet<KnotId>,
}

impl Default for FactStore {
    fn default() -> Self {
        Self::new()
    }
}

impl FactStore {
    pub fn new() -> Self {
        let mut store = FactStore {
            facts: Vec::new(),
            intervals: BTreeMap::new(),
            gordian_le: BTreeMap::new(),
            gordian_ge: BTreeMap::new(),
            unknotting_le: BTreeMap::new(),
            unknotting_ge: BTreeMap::new(),
            alexander_one: BTreeMap::new(),
            properties: BTreeMap::new(),
            twist_neighbors: BTreeMap::new(),
            knots: BTreeSet::new(),
        };
        store
            .add(
                Fact::TorsionInterval { knot: KnotId::unknot(), lower: 0, upper: Some(0) },
                Provenance::Seed,
            )
            .expect("seed is consistent");
        store
    }

    pub fn facts(&self) -> &[StoredFact] {
        &self.facts
    }

    pub fn knots(&self) -> impl Iterator<Item = &KnotId> {
        self.knots.iter()
    }

    pub fn twist_neighbors(&self) -> &BTreeMap<(KnotId, KnotId), KnotId> {
        &self.twist_neighbors
    }

    /// Asserts an externally supplied fact.
    pub fn assert_fact(&mut self, fact: Fact) -> Result<Option<usize>, EngineError> {
        if let Fact::TorsionInterval { lower, upper: Some(upper), .. } = &fact {
            if lower > upper {
                return Err(EngineError::IllFormed(format!(
                    "torsion interval [{lower}, {upper}] is empty"
                )));
            }
        }
        self.add(fact, Provenance::Asserted)
    }

    /// Adds a fact, returning its id when it strengthened the store.
    fn add(&mut self, fact: Fact, provenance: Provenance) -> Result<Option<usize>, EngineError> {
        let fact = fact.normalized();
        for k in fact.knots() {
            self.knots.insert(k.clone());
        }
        let id = self.facts.len();
        let keep = match &fact {
            Fact::TorsionInterval { knot, lower, upper } => {
                self.merge_interval(knot.clone(), *lower, *upper, id, &fact, &provenance)?
            }
            Fact::GordianLe { a, b, distance } => {
                let key = (a.clone(), b.clone());
                match self.gordian_le.get(&key) {
                    Some((d, _)) if d <= distance => false,
                    _ => {
                        self.gordian_le.insert(key, (*distance, id));
                        true
                    }
                }
            }
            Fact::GordianGe { a, b, distance } => {
                let key = (a.clone(), b.clone());
                match self.gordian_ge.get(&key) {
                    Some((d, _)) if d >= distance => false,
                    _ => {
                        self.gordian_ge.insert(key, (*distance, id));
                        true
                    }
                }
            }
            Fact::UnknottingLe { knot, bound } => match self.unknotting_le.get(knot) {
                Some((u, _)) if u <= bound => false,
                _ => {
                    self.unknotting_le.insert(knot.clone(), (*bound, id));
                    true
                }
            },
            Fact::UnknottingGe { knot, bound } => match self.unknotting_ge.get(knot) {
                Some((u, _)) if u >= bound => false,
                _ => {
                    self.unknotting_ge.insert(knot.clone(), (*bound, id));
                    true
                }
            },
            Fact::AlexanderOne { knot } => match self.alexander_one.get(knot) {
                Some(_) => false,
                None => {
                    self.alexander_one.insert(knot.clone(), id);
                    true
                }
            },
            Fact::Property { knot, property } => {
                let key = (knot.clone(), *property);
                match self.properties.get(&key) {
                    Some(_) => false,
                    None => {
                        self.properties.insert(key, id);
                        true
                    }
                }
            }
            Fact::NullHomologousTwist { .. }
            | Fact::CrossingChange { .. }
            | Fact::SEquivalent { .. }
            | Fact::ConnectedSumWithInverse { .. } => {
                !self.facts.iter().any(|sf| sf.fact == fact)
            }
        };
        if keep {
            self.facts.push(StoredFact { id, fact, provenance });
            Ok(Some(id))
        } else {
            Ok(None)
        }
    }

    fn merge_interval(
        &mut self,
        knot: KnotId,
        lower: u32,
        upper: Option<u32>,
        id: usize,
        fact: &Fact,
        provenance: &Provenance,
    ) -> Result<bool, EngineError> {
        let fresh = !self.intervals.contains_key(&knot);
        let state = self
            .intervals
            .entry(knot.clone())
            .or_insert(IntervalState { lo: 0, hi: None, lo_src: id, hi_src: id });

        // Contradiction: intersecting the incoming interval empties it.
        let new_lo = state.lo.max(lower);
        let new_hi = match (state.hi, upper) {
            (None, u) => u,
            (h, None) => h,
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        if new_hi.is_some_and(|h| new_lo > h) {
            let incoming = {
                let mut text = format!("incoming fact {fact}");
                if let Provenance::Derived { rule, premises } = provenance {
                    text.push_str(&format!(" [{rule}: {}]", rule.label()));
                    for &p in premises {
                        text.push('\n');
                        text.push_str(&render_trace_lines(&self.facts, p).join("\n"));
                    }
                }
                text
            };
            let existing_src = if lower > state.lo { state.hi_src } else { state.lo_src };
            let summary = format!(
                "torsion interval of {knot} became empty: [{new_lo}, {}]",
                new_hi.expect("nonempty by check")
            );
            return Err(EngineError::Contradiction {
                summary,
                trace_a: render_trace_lines(&self.facts, existing_src).join("\n"),
                trace_b: incoming,
            });
        }

        let mut changed = fresh;
        if lower > state.lo {
            state.lo = lower;
            state.lo_src = id;
            changed = true;
        }
        match (state.hi, upper) {
            (None, Some(u)) => {
                state.hi = Some(u);
                state.hi_src = id;
                changed = true;
            }
            (Some(a), Some(u)) if u < a => {
                state.hi = Some(u);
                state.hi_src = id;
                changed = true;
            }
            _ => {}
        }
        Ok(changed)
    }

    /// Current best torsion interval of a knot.
    pub fn interval(&self, knot: &KnotId) -> Option<(u32, Option<u32>)> {
        self.intervals.get(knot).map(|s| (s.lo, s.hi))
    }

    /// Runs all rules to fixpoint, returning the ids of newly derived facts.
    pub fn derive(&mut self) -> Result<Vec<usize>, EngineError> {
        let mut new_ids = Vec::new();
        loop {
            let before = self.facts.len();
            self.rule_r1()?;
            self.rule_r2()?;
            self.rule_r3()?;
            self.rule_r4()?;
            self.rule_r5()?;
            self.rule_r6()?;
            self.rule_r7()?;
            if self.facts.len() == before {
                break;
            }
            new_ids.extend(before..self.facts.len());
        }
        Ok(new_ids)
    }

    fn rule_r1(&mut self) -> Result<(), EngineError> {
        let knots: Vec<KnotId> = self.intervals.keys().cloned().collect();
        for i in 0..knots.len() {
            for j in i + 1..knots.len() {
                let (ka, kb) = (&knots[i], &knots[j]);
                let sa = self.intervals[ka].clone();
                let sb = self.intervals[kb].clone();
                let mut best: Option<(u32, Vec<usize>)> = None;
                if let Some(hb) = sb.hi {
                    if sa.lo > hb {
                        best = Some((sa.lo - hb, vec![sa.lo_src, sb.hi_src]));
                    }
                }
                if let Some(ha) = sa.hi {
                    if sb.lo > ha {
                        let g = sb.lo - ha;
                        if best.as_ref().is_none_or(|(b, _)| g > *b) {
                            best = Some((g, vec![sb.lo_src, sa.hi_src]));
                        }
                    }
                }
                if let Some((g, mut premises)) = best {
                    premises.sort_unstable();
                    premises.dedup();
                    self.add(
                        Fact::GordianGe { a: ka.clone(), b: kb.clone(), distance: g },
                        Provenance::Derived { rule: RuleId::R1, premises },
                    )?;
                }
            }
        }
        Ok(())
    }

    fn rule_r2(&mut self) -> Result<(), EngineError> {
        let entries: Vec<((KnotId, KnotId), (u32, usize))> =
            self.gordian_le.iter().map(|(k, v)| (k.clone(), *v)).collect();
        for ((a, b), (d, src)) in entries {
            for (from, to) in [(&a, &b), (&b, &a)] {
                let Some(state) = self.intervals.get(from).cloned() else { continue };
                if state.lo == 0 && state.hi.is_none() {
                    continue;
                }
                let lower = state.lo.saturating_sub(d);
                let upper = state.hi.map(|h| h + d);
                let mut premises = vec![src, state.lo_src, state.hi_src];
                premises.sort_unstable();
                premises.dedup();
                self.add(
                    Fact::TorsionInterval { knot: to.clone(), lower, upper },
                    Provenance::Derived { rule: RuleId::R2, premises },
                )?;
            }
        }
        Ok(())
    }

    fn rule_r3(&mut self) -> Result<(), EngineError> {
        let twists: Vec<(usize, KnotId, KnotId)> = self
            .facts
            .iter()
            .filter_map(|sf| match &sf.fact {
                Fact::NullHomologousTwist { from, to } => {
                    Some((sf.id, from.clone(), to.clone()))
                }
                _ => None,
            })
            .collect();
        for (src, from, to) in twists {
            let key = (from.clone(), to.clone());
            if self.twist_neighbors.contains_key(&key) {
                continue;
            }
            // Deterministic fresh name; an existing knot of this name is
            // deliberately bound (sessions may pre-reference the neighbor).
            let neighbor = KnotId(format!("{to}'"));
            self.twist_neighbors.insert(key, neighbor.clone());
            let prov = || Provenance::Derived { rule: RuleId::R3, premises: vec![src] };
            self.add(Fact::CrossingChange { a: from.clone(), b: neighbor.clone() }, prov())?;
            self.add(
                Fact::GordianLe { a: from.clone(), b: neighbor.clone(), distance: 1 },
                prov(),
            )?;
            self.add(Fact::SEquivalent { a: to.clone(), b: neighbor.clone() }, prov())?;
        }
        Ok(())
    }

    fn rule_r4(&mut self) -> Result<(), EngineError> {
        let pairs: Vec<(usize, KnotId, KnotId)> = self
            .facts
            .iter()
            .filter_map(|sf| match &sf.fact {
                Fact::SEquivalent { a, b } => Some((sf.id, a.clone(), b.clone())),
                _ => None,
            })
            .collect();
        for (src, a, b) in pairs {
            for (x, y) in [(&a, &b), (&b, &a)] {
                if let Some(&alex) = self.alexander_one.get(x) {
                    if !self.alexander_one.contains_key(y) {
                        let mut premises = vec![src, alex];
                        premises.sort_unstable();
                        self.add(
                            Fact::AlexanderOne { knot: y.clone() },
                            Provenance::Derived { rule: RuleId::R4, premises },
                        )?;
                    }
                }
            }
        }
        Ok(())
    }

    fn rule_r5(&mut self) -> Result<(), EngineError> {
        let sums: Vec<(usize, KnotId, KnotId)> = self
            .facts
            .iter()
            .filter_map(|sf| match &sf.fact {
                Fact::ConnectedSumWithInverse { sum, summand } => {
                    Some((sf.id, sum.clone(), summand.clone()))
                }
                _ => None,
            })
            .collect();
        for (src, sum, summand) in sums {
            let Some(state) = self.intervals.get(&summand).cloned() else { continue };
            if state.lo == 0 && state.hi.is_none() {
                continue;
            }
            let mut premises = vec![src, state.lo_src, state.hi_src];
            premises.sort_unstable();
            premises.dedup();
            self.add(
                Fact::TorsionInterval { knot: sum.clone(), lower: state.lo, upper: state.hi },
                Provenance::Derived { rule: RuleId::R5, premises },
            )?;
        }
        Ok(())
    }

    fn rule_r6(&mut self) -> Result<(), EngineError> {
        let sums: Vec<(usize, KnotId, KnotId)> = self
            .facts
            .iter()
            .filter_map(|sf| match &sf.fact {
                Fact::ConnectedSumWithInverse { sum, summand } => {
                    Some((sf.id, sum.clone(), summand.clone()))
                }
                _ => None,
            })
            .collect();
        for (src, sum, summand) in sums {
            for property in [KnotProperty::DoublySlice, KnotProperty::Amphicheiral] {
                self.add(
                    Fact::Property { knot: sum.clone(), property },
                    Provenance::Derived { rule: RuleId::R6, premises: vec![src] },
                )?;
            }
            if let Some(&alex) = self.alexander_one.get(&summand) {
                let mut premises = vec![src, alex];
                premises.sort_unstable();
                self.add(
                    Fact::AlexanderOne { knot: sum.clone() },
                    Provenance::Derived { rule: RuleId::R6, premises },
                )?;
            }
        }
        Ok(())
    }

    fn rule_r7(&mut self) -> Result<(), EngineError> {
        let entries: Vec<(KnotId, IntervalState)> =
            self.intervals.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        for (knot, state) in entries {
            if state.lo > 0 {
                self.add(
                    Fact::UnknottingGe { knot: knot.clone(), bound: state.lo },
                    Provenance::Derived { rule: RuleId::R7, premises: vec![state.lo_src] },
                )?;
            }
        }
        let les: Vec<(KnotId, (u32, usize))> =
            self.unknotting_le.iter().map(|(k, v)| (k.clone(), *v)).collect();
        for (knot, (u, src)) in les {
            self.add(
                Fact::TorsionInterval { knot, lower: 0, upper: Some(u) },
                Provenance::Derived { rule: RuleId::R7, premises: vec![src] },
            )?;
        }
        Ok(())
    }

    /// Replays every derived fact against its premises.
    pub fn audit(&self) -> Result<(), EngineError> {
        for sf in &self.facts {
            let Provenance::Derived { rule, premises } = &sf.provenance else { continue };
            let premise_facts: Vec<&Fact> = premises.iter().map(|&p| &self.facts[p].fact).collect();
            if premises.iter().any(|&p| p >= sf.id) || !replays(*rule, &premise_facts, &sf.fact) {
                return Err(EngineError::AuditFailed { id: sf.id, fact: sf.fact.to_string() });
            }
        }
        Ok(())
    }

    /// Best known bound of the requested kind, with a rendered trace.
    pub fn query(&self, knot: &KnotId, kind: BoundKind) -> Result<QueryAnswer, EngineError> {
        if !self.knots.contains(knot) {
            return Err(EngineError::UnknownKnot(knot.clone()));
        }
        let answer = match kind {
            BoundKind::TorsionInterval => match self.intervals.get(knot) {
                Some(state) => {
                    let value = match state.hi {
                        Some(h) => format!("[{}, {}]", state.lo, h),
                        None => format!("[{}, inf)", state.lo),
                    };
                    let mut ids = vec![state.lo_src, state.hi_src];
                    ids.sort_unstable();
                    ids.dedup();
                    QueryAnswer::bounded(value, self.render_traces(&ids))
                }
                None => QueryAnswer::unbounded("[0, inf)"),
            },
            BoundKind::UnknottingGe => match self.unknotting_ge.get(knot) {
                Some(&(bound, src)) => {
                    QueryAnswer::bounded(bound.to_string(), self.render_traces(&[src]))
                }
                None => match self.intervals.get(knot) {
                    // Zero is trivially true; cite the interval seed if any.
                    Some(state) => QueryAnswer::bounded(
                        "0".into(),
                        self.render_traces(&[state.lo_src]),
                    ),
                    None => QueryAnswer::unbounded("0"),
                },
            },
            BoundKind::UnknottingLe => match self.unknotting_le.get(knot) {
                Some(&(bound, src)) => {
                    QueryAnswer::bounded(bound.to_string(), self.render_traces(&[src]))
                }
                None => QueryAnswer::unbounded("none derived"),
            },
            BoundKind::AlexanderOne => match self.alexander_one.get(knot) {
                Some(&src) => QueryAnswer::bounded("yes".into(), self.render_traces(&[src])),
                None => QueryAnswer::unbounded("unknown"),
            },
            BoundKind::Properties => {
                let ids: Vec<usize> = self
                    .properties
                    .iter()
                    .filter(|((k, _), _)| k == knot)
                    .map(|(_, &id)| id)
                    .collect();
                if ids.is_empty() {
                    QueryAnswer::unbounded("none derived")
                } else {
                    let names: Vec<String> = self
                        .properties
                        .keys()
                        .filter(|(k, _)| k == knot)
                        .map(|(_, p)| p.to_string())
                        .collect();
                    QueryAnswer::bounded(names.join(", "), self.render_traces(&ids))
                }
            }
        };
        Ok(answer)
    }

    fn render_traces(&self, ids: &[usize]) -> Vec<String> {
        let mut out = Vec::new();
        for &id in ids {
            out.extend(render_trace_lines(&self.facts, id));
        }
        out
    }

    /// Indented trace of one fact.
    pub fn render_trace(&self, id: usize) -> String {
        render_trace_lines(&self.facts, id).join("\n")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    TorsionInterval,
    UnknottingGe,
    UnknottingLe,
    AlexanderOne,
    Properties,
}

#[derive(Clone, Debug, Serialize)]
pub struct QueryAnswer {
    pub value: String,
    pub derived: bool,
    pub trace: Vec<String>,
}

impl QueryAnswer {
    fn bounded(value: String, trace: Vec<String>) -> Self {
        QueryAnswer { value, derived: true, trace }
    }

    fn unbounded(value: &str) -> Self {
        QueryAnswer { value: value.into(), derived: false, trace: Vec::new() }
    }
}

fn render_trace_lines(facts: &[StoredFact], id: usize) -> Vec<String> {
    let mut lines = Vec::new();
    let mut seen = BTreeSet::new();
    render_rec(facts, id, 0, &mut seen, &mut lines);
    lines
}

fn render_rec(
    facts: &[StoredFact],
    id: usize,
    depth: usize,
    seen: &mut BTreeSet<usize>,
    lines: &mut Vec<String>,
) {
    let indent = "  ".repeat(depth);
    let sf = &facts[id];
    let label = match &sf.provenance {
        Provenance::Seed => "seed".to_string(),
        Provenance::Asserted => "asserted".to_string(),
        Provenance::Derived { rule, .. } => format!("{rule}: {}", rule.label()),
    };
    if !seen.insert(id) {
        lines.push(format!("{indent}#{id} {} [see above]", sf.fact));
        return;
    }
    lines.push(format!("{indent}#{id} {} [{label}]", sf.fact));
    if let Provenance::Derived { premises, .. } = &sf.provenance {
        for &p in premises {
            render_rec(facts, p, depth + 1, seen, lines);
        }
    }
}

/// Recomputes a derived fact from its premise facts.
fn replays(rule: RuleId, premises: &[&Fact], conclusion: &Fact) -> bool {
    let interval_of = |k: &KnotId| -> Option<(u32, Option<u32>)> {
        let mut lo = 0u32;
        let mut hi: Option<u32> = None;
        let mut found = false;
        for f in premises {
            if let Fact::TorsionInterval { knot, lower, upper } = f {
                if knot == k {
                    found = true;
                    lo = lo.max(*lower);
                    hi = match (hi, upper) {
                        (None, u) => *u,
                        (h, None) => h,
                        (Some(a), Some(b)) => Some(a.min(*b)),
                    };
                }
            }
        }
        found.then_some((lo, hi))
    };
    match (rule, conclusion) {
        (RuleId::R1, Fact::GordianGe { a, b, distance }) => {
            let (Some((la, ha)), Some((lb, hb))) = (interval_of(a), interval_of(b)) else {
                return false;
            };
            let mut g = 0u32;
            if let Some(hb) = hb {
                g = g.max(la.saturating_sub(hb));
            }
            if let Some(ha) = ha {
                g = g.max(lb.saturating_sub(ha));
            }
            g == *distance && g > 0
        }
        (RuleId::R2, Fact::TorsionInterval { knot, lower, upper }) => {
            let le = premises.iter().find_map(|f| match f {
                Fact::GordianLe { a, b, distance } => {
                    if a == knot {
                        Some((b.clone(), *distance))
                    } else if b == knot {
                        Some((a.clone(), *distance))
                    } else {
                        None
                    }
                }
                _ => None,
            });
            let Some((other, d)) = le else { return false };
            let Some((lo, hi)) = interval_of(&other) else { return false };
            *lower == lo.saturating_sub(d) && *upper == hi.map(|h| h + d)
        }
        (RuleId::R3, Fact::CrossingChange { a, b })
        | (RuleId::R3, Fact::GordianLe { a, b, distance: 1 }) => premises.iter().any(
            |f| matches!(f, Fact::NullHomologousTwist { from, .. } if from == a || from == b),
        ),
        (RuleId::R3, Fact::SEquivalent { a, b }) => premises.iter().any(
            |f| matches!(f, Fact::NullHomologousTwist { to, .. } if to == a || to == b),
        ),
        (RuleId::R4, Fact::AlexanderOne { knot }) => {
            let has_seq = premises.iter().any(|f| {
                matches!(f, Fact::SEquivalent { a, b } if a == knot || b == knot)
            });
            let other_alex = premises.iter().any(|f| {
                matches!(f, Fact::AlexanderOne { knot: k } if k != knot)
            });
            has_seq && other_alex
        }
        (RuleId::R5, Fact::TorsionInterval { knot, lower, upper }) => {
            let summand = premises.iter().find_map(|f| match f {
                Fact::ConnectedSumWithInverse { sum, summand } if sum == knot => Some(summand),
                _ => None,
            });
            let Some(summand) = summand else { return false };
            interval_of(summand) == Some((*lower, *upper))
        }
        (RuleId::R6, Fact::Property { knot, property }) => {
            matches!(property, KnotProperty::DoublySlice | KnotProperty::Amphicheiral)
                && premises.iter().any(|f| {
                    matches!(f, Fact::ConnectedSumWithInverse { sum, .. } if sum == knot)
                })
        }
        (RuleId::R6, Fact::AlexanderOne { knot }) => premises.iter().any(|f| {
            matches!(f, Fact::ConnectedSumWithInverse { sum, summand }
                if sum == knot && premises.iter().any(|g| {
                    matches!(g, Fact::AlexanderOne { knot: k } if k == summand)
                }))
        }),
        (RuleId::R7, Fact::UnknottingGe { knot, bound }) => {
            interval_of(knot).is_some_and(|(lo, _)| lo == *bound && lo > 0)
        }
        (RuleId::R7, Fact::TorsionInterval { knot, lower: 0, upper: Some(u) }) => {
            premises.iter().any(|f| {
                matches!(f, Fact::UnknottingLe { knot: k, bound } if k == knot && bound == u)
            })
        }
        _ => false,
    }
}
