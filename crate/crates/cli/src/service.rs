//! Slice-on-demand HTTP endpoint: `GET /info`, `GET /slice`, `GET /ui/*`.

use std::path::{Component, Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use offslice::{jsonl_records, slice_single, ChordTolerance, EngineConfig, IndexedMesh, OffsetSpec};
use serde_json::json;
use tiny_http::{Header, Request, Server};

use crate::{mesh_stats, Failure, EXIT_CONFIG};

/// Requests handled at once.
pub const HANDLERS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Response {
    pub status: u16,
    pub content_type: &'static str,
    pub body: Vec<u8>,
}

impl Response {
    fn json(status: u16, body: String) -> Self {
        Self { status, content_type: "application/json", body: body.into_bytes() }
    }

    fn error(status: u16, message: &str) -> Self {
        Self::json(status, json!({ "error": message }).to_string())
    }
}

/// Immutable state shared by all request handlers.
pub struct Service {
    mesh: IndexedMesh,
    defaults: EngineConfig,
    ui_dir: Option<PathBuf>,
}

fn query_param<'a>(query: &'a str, key: &str) -> Option<&'a str> {
    query.split('&').filter_map(|kv| kv.split_once('=')).find(|(k, _)| *k == key).map(|(_, v)| v)
}

fn parse_real(query: &str, key: &str) -> Result<Option<f64>, String> {
    match query_param(query, key) {
        None => Ok(None),
        Some(v) => match v.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Some(x)),
            _ => Err(format!("parameter {key} must be a finite number, got {v:?}")),
        },
    }
}

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()) {
        Some("html") => "text/html; charset=utf-8",
        Some("js") => "text/javascript",
        Some("css") => "text/css",
        Some("json") => "application/json",
        Some("svg") => "image/svg+xml",
        Some("png") => "image/png",
        _ => "application/octet-stream",
    }
}

impl Service {
    pub fn new(mesh: IndexedMesh, defaults: EngineConfig, ui_dir: Option<PathBuf>) -> Self {
        Self { mesh, defaults, ui_dir }
    }

    /// Routes one GET request; `url` is the request target with its query.
    pub fn handle(&self, method: &str, url: &str) -> Response {
        if method != "GET" {
            return Response::error(405, "only GET is supported");
        }
        let (path, query) = url.split_once('?').unwrap_or((url, ""));
        match path {
            "/info" => self.info(),
            "/slice" => self.slice(query),
            "/ui" => self.static_file("index.html"),
            _ => match path.strip_prefix("/ui/") {
                Some(rest) => self.static_file(if rest.is_empty() { "index.html" } else { rest }),
                None => Response::error(404, "not found"),
            },
        }
    }

    fn info(&self) -> Response {
        let body = json!({
            "mesh": mesh_stats(&self.mesh),
            "defaults": {
                "chord": self.defaults.chord.get(),
                "offset": 0.0,
                "threads": self.defaults.workers,
            },
        });
        Response::json(200, body.to_string())
    }

    fn slice(&self, query: &str) -> Response {
        let z = match parse_real(query, "z") {
            Ok(Some(z)) => z,
            Ok(None) => return Response::error(400, "missing parameter z"),
            Err(e) => return Response::error(400, &e),
        };
        let offset = match parse_real(query, "offset") {
            Ok(v) => v.unwrap_or(0.0),
            Err(e) => return Response::error(400, &e),
        };
        let mut cfg = self.defaults;
        match parse_real(query, "chord") {
            Ok(None) => {}
            Ok(Some(c)) => match ChordTolerance::new(c) {
                Ok(t) => cfg.chord = t,
                Err(e) => return Response::error(400, &e.to_string()),
            },
            Err(e) => return Response::error(400, &e),
        }
        let start = Instant::now();
        let result = match slice_single(&self.mesh, &OffsetSpec::signed(offset), z, &cfg) {
            Ok(r) => r,
            Err(e) => return Response::error(500, &e.to_string()),
        };
        if let Some(e) = &result.error {
            return Response::error(500, &format!("slice at z={z}: {e}"));
        }
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        // records are embedded verbatim so the payload matches batch JSONL bytes
        let body = format!(
            "{{\"z\":{},\"offset\":{},\"chord\":{},\"elapsed_ms\":{},\"contours\":[{}]}}",
            json!(z),
            json!(offset),
            json!(cfg.chord.get()),
            json!(elapsed),
            jsonl_records(&result).join(",")
        );
        Response::json(200, body)
    }

    fn static_file(&self, rel: &str) -> Response {
        let Some(root) = &self.ui_dir else {
            return Response::error(404, "no ui directory configured");
        };
        let rel = Path::new(rel);
        if !rel.components().all(|c| matches!(c, Component::Normal(_))) {
            return Response::error(404, "not found");
        }
        let path = root.join(rel);
        match std::fs::read(&path) {
            Ok(body) => Response { status: 200, content_type: content_type(&path), body },
            Err(_) => Response::error(404, "not found"),
        }
    }

    fn respond(&self, request: Request) {
        let response = self.handle(request.method().as_str(), request.url());
        let header = Header::from_bytes("Content-Type", response.content_type).expect("static header is valid");
        let reply = tiny_http::Response::from_data(response.body).with_status_code(response.status).with_header(header);
        // a client that hung up is not the server's problem
        let _ = request.respond(reply);
    }
}

/// Serves requests on `server` until it is unblocked, with several
/// handler threads sharing the immutable mesh.
pub fn run_server(server: Arc<Server>, service: Arc<Service>) {
    std::thread::scope(|s| {
        for _ in 0..HANDLERS {
            let (server, service) = (Arc::clone(&server), Arc::clone(&service));
            s.spawn(move || {
                while let Ok(request) = server.recv() {
                    service.respond(request);
                }
            });
        }
    });
}

/// Binds `0.0.0.0:port` and serves forever.
pub fn serve(mesh: IndexedMesh, mut cfg: EngineConfig, port: u16, ui_dir: Option<PathBuf>) -> Result<(), Failure> {
    // bound per-request parallelism so concurrent requests share the machine
    cfg.workers = cfg.workers.clamp(1, 4);
    let server = Server::http(("0.0.0.0", port))
        .map_err(|e| Failure { code: EXIT_CONFIG, message: format!("cannot listen on port {port}: {e}") })?;
    eprintln!("offslice: serving {} triangles on http://0.0.0.0:{port}", mesh.triangles().len());
    run_server(Arc::new(server), Arc::new(Service::new(mesh, cfg, ui_dir)));
    Ok(())
}
