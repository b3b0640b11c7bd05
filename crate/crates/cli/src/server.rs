//! HTTP service. One tick-loop task owns the simulation; handlers send it
//! commands and read the snapshot it publishes after every tick.

use std::convert::Infallible;
use std::sync::{Arc, RwLock};
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::sse::{Event as SseEvent, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use futures::stream::{self, Stream};
use imperative::executor::{Event, Simulation};
use imperative::grammar::{Instruction, Lexicon};
use imperative::resolver::Resolution;
use imperative::world::WorldState;
use serde::Deserialize;
use tokio::sync::{broadcast, mpsc, oneshot};
use tokio::task::JoinHandle;

use crate::views::{Accepted, ErrorBody, RegionsView, WorldView};

struct Published {
    tick: u64,
    world: WorldState,
    events: Vec<Event>,
}

struct Submit {
    agent: String,
    instruction: Instruction,
    reply: oneshot::Sender<(u64, Resolution)>,
}

#[derive(Clone)]
pub struct AppState {
    published: Arc<RwLock<Published>>,
    lexicon: Arc<Lexicon>,
    inbox: mpsc::Sender<Submit>,
    stream: broadcast::Sender<Vec<Event>>,
}

/// Starts the tick loop and returns the router serving it. The loop ends
/// once the router and every clone of its state are dropped.
pub fn start(sim: Simulation, tick: Duration) -> (Router, JoinHandle<()>) {
    let (inbox, rx) = mpsc::channel(64);
    let (stream, _) = broadcast::channel(256);
    let state = AppState {
        published: Arc::new(RwLock::new(Published {
            tick: sim.tick(),
            world: sim.world().clone(),
            events: sim.events().to_vec(),
        })),
        lexicon: Arc::new(sim.lexicon().clone()),
        inbox,
        stream: stream.clone(),
    };
    let handle = tokio::spawn(tick_loop(sim, rx, state.published.clone(), stream, tick));
    (router(state), handle)
}

fn router(state: AppState) -> Router {
    Router::new()
        .route("/world", get(world))
        .route("/regions/{loc}", get(regions))
        .route("/agents/{id}/instruction", post(instruction))
        .route("/trace", get(trace))
        .route("/events", get(events))
        .with_state(state)
}

async fn tick_loop(
    mut sim: Simulation,
    mut inbox: mpsc::Receiver<Submit>,
    published: Arc<RwLock<Published>>,
    stream: broadcast::Sender<Vec<Event>>,
    tick: Duration,
) {
    let mut interval = tokio::time::interval(tick);
    interval.set_missed_tick_behavior(tokio::time::MissedTickBehavior::Delay);
    loop {
        tokio::select! {
            cmd = inbox.recv() => {
                let Some(Submit { agent, instruction, reply }) = cmd else { break };
                let resolution = sim.resolve(&agent, &instruction);
                if resolution.is_error() {
                    let _ = reply.send((0, resolution));
                    continue;
                }
                match sim.submit_resolved(&agent, instruction, resolution.clone()) {
                    Ok(plan) => {
                        tracing::info!(agent, plan, "instruction queued");
                        let _ = reply.send((plan, resolution));
                    }
                    Err(e) => tracing::warn!("{e}"),
                }
            }
            _ = interval.tick() => {
                if sim.is_idle() {
                    continue;
                }
                let batch = sim.step().to_vec();
                tracing::debug!(tick = sim.tick() - 1, events = batch.len(), "tick");
                {
                    let mut p = published.write().expect("snapshot lock");
                    p.tick = sim.tick();
                    p.world = sim.world().clone();
                    p.events.extend(batch.iter().cloned());
                }
                let _ = stream.send(batch);
            }
        }
    }
}

fn error(status: StatusCode, body: ErrorBody) -> Response {
    (status, Json(body)).into_response()
}

async fn world(State(s): State<AppState>) -> Json<WorldView> {
    let p = s.published.read().expect("snapshot lock");
    Json(WorldView::new(&p.world, p.tick))
}

async fn regions(State(s): State<AppState>, Path(loc): Path<String>) -> Response {
    let p = s.published.read().expect("snapshot lock");
    match p.world.region_map(&loc) {
        Some(map) => Json(RegionsView::new(map)).into_response(),
        None => error(StatusCode::NOT_FOUND, ErrorBody::new("unknownLocation", format!("unknown location `{loc}`"))),
    }
}

async fn instruction(State(s): State<AppState>, Path(agent): Path<String>, body: Bytes) -> Response {
    let known = s.published.read().expect("snapshot lock").world.agent(&agent).is_some();
    if !known {
        return error(StatusCode::NOT_FOUND, ErrorBody::new("unknownAgent", format!("unknown agent `{agent}`")));
    }
    let text = String::from_utf8_lossy(&body).trim().to_owned();
    let instruction = match imperative::grammar::parse_instruction(&s.lexicon, &text) {
        Ok(i) => i,
        Err(e) => return error(StatusCode::UNPROCESSABLE_ENTITY, ErrorBody::parse(&s.lexicon, &text, &e)),
    };
    let (reply, rx) = oneshot::channel();
    let submit = Submit {
        agent: agent.clone(),
        instruction,
        reply,
    };
    let unavailable = || error(StatusCode::SERVICE_UNAVAILABLE, ErrorBody::new("unavailable", "the simulation has stopped"));
    if s.inbox.send(submit).await.is_err() {
        return unavailable();
    }
    match rx.await {
        Ok((_, resolution)) if resolution.is_error() => {
            let message = resolution
                .warnings
                .iter()
                .find(|w| w.severity == imperative::resolver::Severity::Error)
                .map(|w| w.message.clone())
                .unwrap_or_default();
            let body = ErrorBody {
                resolution: Some(resolution),
                ..ErrorBody::new("resolution", message)
            };
            error(StatusCode::UNPROCESSABLE_ENTITY, body)
        }
        Ok((plan, resolution)) => (StatusCode::ACCEPTED, Json(Accepted { plan, agent, resolution })).into_response(),
        Err(_) => unavailable(),
    }
}

#[derive(Debug, Deserialize)]
struct TraceQuery {
    since: Option<u64>,
    format: Option<String>,
}

/// Events after tick `since` (all events without it), as JSON or as trace
/// lines with `format=text`.
async fn trace(State(s): State<AppState>, Query(q): Query<TraceQuery>) -> Response {
    let p = s.published.read().expect("snapshot lock");
    let events: Vec<Event> = p.events.iter().filter(|e| q.since.is_none_or(|t| e.tick > t)).cloned().collect();
    if q.format.as_deref() == Some("text") {
        imperative::executor::format_trace(&events).into_response()
    } else {
        Json(events).into_response()
    }
}

/// Server-sent events: one message per simulation event, named by its kind
/// and carrying the event as JSON.
async fn events(State(s): State<AppState>) -> Sse<impl Stream<Item = Result<SseEvent, Infallible>>> {
    let rx = s.stream.subscribe();
    let batches = stream::unfold(rx, |mut rx| async move {
        loop {
            match rx.recv().await {
                Ok(batch) => return Some((batch, rx)),
                Err(broadcast::error::RecvError::Lagged(n)) => tracing::warn!(skipped = n, "event stream lagged"),
                Err(broadcast::error::RecvError::Closed) => return None,
            }
        }
    });
    let messages = futures::StreamExt::flat_map(batches, |batch| {
        stream::iter(batch.into_iter().map(|e| {
            let data = serde_json::to_string(&e).unwrap_or_default();
            Ok(SseEvent::default().event(e.kind.name()).data(data))
        }))
    });
    Sse::new(messages).keep_alive(KeepAlive::default())
}
