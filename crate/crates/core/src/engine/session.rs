//! JSON sessions: asserted facts in, derived store plus query answers out.
//!
//! A session file is reproducible: loading the same input yields the same
//! fact ids, provenances, and query answers byte for byte.

use serde::{Deserialize, Serialize};

use super::{BoundKind, EngineError, Fact, FactStore, KnotId, StoredFact};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SessionInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub facts: Vec<Fact>,
    #[serde(default)]
    pub queries: Vec<Query>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Query {
    pub knot: KnotId,
    pub kind: BoundKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct QueryResult {
    pub knot: KnotId,
    pub kind: BoundKind,
    pub value: String,
    pub derived: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistNeighbor {
    pub knot: KnotId,
    pub twisted: KnotId,
    pub neighbor: KnotId,
}

#[derive(Clone, Debug, Serialize)]
pub struct SessionOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub asserted: usize,
    pub derived: usize,
    pub facts: Vec<StoredFact>,
    pub twist_neighbors: Vec<TwistNeighbor>,
    pub queries: Vec<QueryResult>,
}

pub fn parse_session(text: &str) -> Result<SessionInput, EngineError> {
    serde_json::from_str(text).map_err(|e| EngineError::IllFormed(format!("bad session: {e}")))
}

/// Asserts the input facts, derives to fixpoint, audits every trace, and
/// answers the queries.
pub fn run_session(input: &SessionInput) -> Result<(FactStore, SessionOutput), EngineError> {
    let mut store = FactStore::new();
    for fact in &input.facts {
        store.assert_fact(fact.clone())?;
    }
    let asserted = store.facts().len();
    let derived = store.derive()?.len();
    store.audit()?;

    let mut queries = Vec::new();
    for q in &input.queries {
        let answer = store.query(&q.knot, q.kind)?;
        let note = match q.kind {
            BoundKind::UnknottingGe if answer.derived => {
                let has_upper = store.query(&q.knot, BoundKind::UnknottingLe)?.derived;
                (!has_upper).then(|| {
                    "lower bound only; no matching upper bound is derived by the rule set"
                        .to_string()
                })
            }
            _ => None,
        };
        queries.push(QueryResult {
            knot: q.knot.clone(),
            kind: q.kind,
            value: answer.value,
            derived: answer.derived,
            note,
            trace: answer.trace,
        });
    }

    let twist_neighbors = store
        .twist_neighbors()
        .iter()
        .map(|((from, to), neighbor)| TwistNeighbor {
            knot: from.clone(),
            twisted: to.clone(),
            neighbor: neighbor.clone(),
        })
        .collect();

    let output = SessionOutput {
        description: input.description.clone(),
        asserted,
        derived,
        facts: store.facts().to_vec(),
        twist_neighbors,
        queries,
    };
    Ok((store, output))
}

pub fn render_session_json(output: &SessionOutput) -> String {
    serde_json::to_string_pretty(output).expect("serializable") + "\n"
}
