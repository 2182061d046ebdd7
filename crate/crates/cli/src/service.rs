//! JSON-over-HTTP sessions.
//!
//! | method | path | body | reply |
//! |---|---|---|---|
//! | `POST` | `/sessions` | `{"regime": "fiat", "config": {..}?}` | 201 `{"id"}` |
//! | `GET` | `/sessions` | | `{"ids": [..]}` |
//! | `GET` | `/sessions/{id}/state` | | snapshot |
//! | `PUT` | `/sessions/{id}/state` | snapshot | `{"ok": true, "measures"}` |
//! | `GET` | `/sessions/{id}/measures` | | `{"DOM": MeasureReport, ..}` |
//! | `GET` | `/sessions/{id}/dot` | | DOT text |
//! | `GET` | `/sessions/{id}/log` | | `[OpRecord, ..]` |
//! | `POST` | `/sessions/{id}/ops` | `{"name", "params": {..}}` | `{"ok": true, "seq", "effect", "measures"}` |
//! | `POST` | `/sessions/{id}/undo` | | `{"ok": true, "measures"}` |
//! | `POST` | `/sessions/{id}/redo` | | `{"ok": true, "measures"}` |
//! | `POST` | `/sessions/{id}/fork` | | 201 `{"id"}` |
//! | `DELETE` | `/sessions/{id}` | | 204 |
//! | `GET` | `/ops` | | operation names |
//!
//! Engine errors are 422 `{"code", "message"}`, unknown sessions 404,
//! malformed JSON 400, and undo or redo with nothing to do 409.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};

use moneygraph::dispatch::{self, Effect, OpRecord, Params};
use moneygraph::ledger::{BalanceGraph, Config, Regime};
use moneygraph::measures;
use moneygraph::Error;

pub const UNDO_LIMIT: usize = 256;

/// Earlier or later graph state, with the operation that separates it from
/// the current one (none for uploads).
struct Step {
    graph: BalanceGraph,
    record: Option<OpRecord>,
}

pub struct Session {
    pub graph: BalanceGraph,
    undo: VecDeque<Step>,
    redo: Vec<Step>,
    log: Vec<OpRecord>,
    seq: u64,
}

impl Session {
    pub fn new(graph: BalanceGraph) -> Self {
        Session {
            graph,
            undo: VecDeque::new(),
            redo: Vec::new(),
            log: Vec::new(),
            seq: 0,
        }
    }

    fn remember(&mut self, before: BalanceGraph, record: Option<OpRecord>) {
        if self.undo.len() == UNDO_LIMIT {
            self.undo.pop_front();
        }
        self.undo.push_back(Step {
            graph: before,
            record,
        });
        self.redo.clear();
    }

    pub fn apply(&mut self, name: &str, params: &Params) -> Result<OpRecord, Error> {
        let before = self.graph.clone();
        let effect = dispatch::apply(&mut self.graph, name, params)?;
        let record = OpRecord {
            seq: self.seq,
            name: name.to_string(),
            params: params.clone(),
            effect,
        };
        self.seq += 1;
        self.log.push(record.clone());
        self.remember(before, Some(record.clone()));
        Ok(record)
    }

    pub fn load(&mut self, snapshot: &str) -> Result<(), Error> {
        let next = BalanceGraph::load(snapshot)?;
        let before = std::mem::replace(&mut self.graph, next);
        self.remember(before, None);
        Ok(())
    }

    pub fn undo(&mut self) -> bool {
        let Some(step) = self.undo.pop_back() else {
            return false;
        };
        let current = std::mem::replace(&mut self.graph, step.graph);
        if step.record.is_some() {
            self.log.pop();
        }
        self.redo.push(Step {
            graph: current,
            record: step.record,
        });
        true
    }

    pub fn redo(&mut self) -> bool {
        let Some(step) = self.redo.pop() else {
            return false;
        };
        let current = std::mem::replace(&mut self.graph, step.graph);
        if let Some(r) = &step.record {
            self.log.push(r.clone());
        }
        self.undo.push_back(Step {
            graph: current,
            record: step.record,
        });
        true
    }

    pub fn undo_depth(&self) -> usize {
        self.undo.len()
    }
}

#[derive(Clone, Default)]
pub struct Registry {
    sessions: Arc<Mutex<HashMap<String, Arc<Mutex<Session>>>>>,
    next: Arc<AtomicU64>,
}

impl Registry {
    fn insert(&self, s: Session) -> String {
        let id = format!("s{}", self.next.fetch_add(1, Ordering::Relaxed) + 1);
        self.sessions
            .lock()
            .unwrap()
            .insert(id.clone(), Arc::new(Mutex::new(s)));
        id
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::NotFound(id.to_string()))
    }
}

pub enum ApiError {
    Engine(Error),
    NotFound(String),
    BadJson(String),
    Nothing(&'static str),
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError::Engine(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, code, message) = match self {
            ApiError::Engine(e) => (StatusCode::UNPROCESSABLE_ENTITY, e.code(), e.to_string()),
            ApiError::NotFound(id) => (
                StatusCode::NOT_FOUND,
                "ErrUnknownSession",
                format!("no session {id}"),
            ),
            ApiError::BadJson(m) => (StatusCode::BAD_REQUEST, "ErrMalformedJson", m),
            ApiError::Nothing(what) => (
                StatusCode::CONFLICT,
                "ErrNothingToDo",
                format!("nothing to {what}"),
            ),
        };
        (status, Json(json!({ "code": code, "message": message }))).into_response()
    }
}

type ApiResult<T = Response> = Result<T, ApiError>;

fn body<T: for<'de> Deserialize<'de>>(bytes: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(bytes).map_err(|e| ApiError::BadJson(e.to_string()))
}

fn measure_map(g: &BalanceGraph) -> Value {
    let map: BTreeMap<String, measures::MeasureReport> = measures::reports(g)
        .into_iter()
        .map(|r| (r.currency.to_string(), r))
        .collect();
    serde_json::to_value(map).expect("measures serialize")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NewSession {
    regime: String,
    #[serde(default)]
    config: Option<Config>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OpRequest {
    name: String,
    #[serde(default)]
    params: BTreeMap<String, Value>,
}

/// Parameter values may be sent as JSON strings, numbers or booleans.
fn params(raw: BTreeMap<String, Value>) -> ApiResult<Params> {
    raw.into_iter()
        .map(|(k, v)| {
            let v = match v {
                Value::String(s) => s,
                Value::Number(n) => n.to_string(),
                Value::Bool(b) => b.to_string(),
                other => {
                    return Err(ApiError::BadJson(format!(
                        "parameter {k} must be a string, number or boolean, got {other}"
                    )))
                }
            };
            Ok((k, v))
        })
        .collect()
}

async fn create(State(reg): State<Registry>, bytes: Bytes) -> ApiResult {
    let req: NewSession = body(&bytes)?;
    let regime: Regime = req.regime.parse()?;
    let graph = BalanceGraph::with_config(regime, req.config.unwrap_or_default());
    let id = reg.insert(Session::new(graph));
    Ok((StatusCode::CREATED, Json(json!({ "id": id }))).into_response())
}

async fn list(State(reg): State<Registry>) -> Json<Value> {
    let mut ids: Vec<String> = reg.sessions.lock().unwrap().keys().cloned().collect();
    ids.sort();
    Json(json!({ "ids": ids }))
}

async fn state(State(reg): State<Registry>, Path(id): Path<String>) -> ApiResult {
    let s = reg.get(&id)?;
    let snapshot = s.lock().unwrap().graph.snapshot();
    Ok(([(header::CONTENT_TYPE, "application/json")], snapshot).into_response())
}

async fn upload(State(reg): State<Registry>, Path(id): Path<String>, bytes: Bytes) -> ApiResult {
    let s = reg.get(&id)?;
    let _: Value = body(&bytes)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| ApiError::BadJson(e.to_string()))?;
    let mut s = s.lock().unwrap();
    s.load(text)?;
    Ok(Json(json!({ "ok": true, "measures": measure_map(&s.graph) })).into_response())
}

async fn measures_of(State(reg): State<Registry>, Path(id): Path<String>) -> ApiResult {
    let s = reg.get(&id)?;
    let m = measure_map(&s.lock().unwrap().graph);
    Ok(Json(m).into_response())
}

async fn dot(State(reg): State<Registry>, Path(id): Path<String>) -> ApiResult {
    let s = reg.get(&id)?;
    let text = measures::export_dot(&s.lock().unwrap().graph);
    Ok(([(header::CONTENT_TYPE, "text/vnd.graphviz")], text).into_response())
}

async fn log(State(reg): State<Registry>, Path(id): Path<String>) -> ApiResult {
    let s = reg.get(&id)?;
    let log = s.lock().unwrap().log.clone();
    Ok(Json(log).into_response())
}

async fn op(State(reg): State<Registry>, Path(id): Path<String>, bytes: Bytes) -> ApiResult {
    let s = reg.get(&id)?;
    let req: OpRequest = body(&bytes)?;
    let params = params(req.params)?;
    let mut s = s.lock().unwrap();
    let record = s.apply(&req.name, &params)?;
    let effect = match &record.effect {
        Effect::Post { deltas } => json!({ "effect": "post", "deltas": deltas }),
        Effect::Rewrite => json!({ "effect": "rewrite" }),
        Effect::Declare => json!({ "effect": "declare" }),
    };
    Ok(Json(json!({
        "ok": true,
        "seq": record.seq,
        "effect": effect,
        "measures": measure_map(&s.graph),
    }))
    .into_response())
}

async fn undo(State(reg): State<Registry>, Path(id): Path<String>) -> ApiResult {
    let s = reg.get(&id)?;
    let mut s = s.lock().unwrap();
    if !s.undo() {
        return Err(ApiError::Nothing("undo"));
    }
    Ok(Json(json!({ "ok": true, "measures": measure_map(&s.graph) })).into_response())
}

async fn redo(State(reg): State<Registry>, Path(id): Path<String>) -> ApiResult {
    let s = reg.get(&id)?;
    let mut s = s.lock().unwrap();
    if !s.redo() {
        return Err(ApiError::Nothing("redo"));
    }
    Ok(Json(json!({ "ok": true, "measures": measure_map(&s.graph) })).into_response())
}

async fn fork(State(reg): State<Registry>, Path(id): Path<String>) -> ApiResult {
    let s = reg.get(&id)?;
    let graph = s.lock().unwrap().graph.clone();
    let id = reg.insert(Session::new(graph));
    Ok((StatusCode::CREATED, Json(json!({ "id": id }))).into_response())
}

async fn delete(State(reg): State<Registry>, Path(id): Path<String>) -> ApiResult {
    match reg.sessions.lock().unwrap().remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT.into_response()),
        None => Err(ApiError::NotFound(id)),
    }
}

async fn op_names() -> Json<&'static [&'static str]> {
    Json(dispatch::OPS)
}

pub fn router() -> Router {
    Router::new()
        .route("/ops", get(op_names))
        .route("/sessions", post(create).get(list))
        .route("/sessions/{id}", axum::routing::delete(delete))
        .route("/sessions/{id}/state", get(state).put(upload))
        .route("/sessions/{id}/measures", get(measures_of))
        .route("/sessions/{id}/dot", get(dot))
        .route("/sessions/{id}/log", get(log))
        .route("/sessions/{id}/ops", post(op))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/redo", post(redo))
        .route("/sessions/{id}/fork", post(fork))
        .with_state(Registry::default())
}

pub async fn serve(port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router()).await
}
