"""HTTP service: networks, long-running solver jobs, and scenario analyses.

Networks are immutable once uploaded; what-if probes and solutions never
mutate them (edited graphs only exist inside computations and payloads).
Jobs run on a bounded worker pool, report progress as the committed-budget
fraction, and are cancellable at candidate-evaluation granularity. Job
status moves strictly along QUEUED -> RUNNING -> {DONE, FAILED, CANCELLED};
a DONE solve payload is revalidated against every Solution invariant before
it is stored.
"""

from __future__ import annotations

import json
import threading
import uuid
from contextlib import asynccontextmanager
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .betweenness import betweenness_all
from .errors import NetboostError
from .graph import DistanceTransform, Network, parse_pajek
from .scenario import paths_report, run_budget_sweep, what_if_edge
from .solver import TerminationReason, solve_co_mbi, validate_config, validate_solution
from .wire import (
    graph_payload,
    parse_solver_config,
    pathset_payload,
    resolve_node,
    solution_from_payload,
    solution_payload,
    sweep_payload,
    whatif_payload,
)

_NOT_FOUND = {"UNKNOWN_NETWORK", "UNKNOWN_JOB"}

QUEUED = "QUEUED"
RUNNING = "RUNNING"
DONE = "DONE"
FAILED = "FAILED"
CANCELLED = "CANCELLED"
_TERMINAL = {DONE, FAILED, CANCELLED}
_LEGAL = {
    QUEUED: {RUNNING, CANCELLED, FAILED},
    RUNNING: {DONE, FAILED, CANCELLED},
}


@dataclass
class Job:
    id: str
    network_id: str
    kind: str  # "solve" | "sweep"
    request: dict
    status: str = QUEUED
    progress: float = 0.0
    current_iteration: int = 0
    result: dict | None = None
    error: dict | None = None
    cancel: threading.Event = field(default_factory=threading.Event)

    def snapshot(self) -> dict:
        out: dict[str, Any] = {
            "id": self.id,
            "network_id": self.network_id,
            "kind": self.kind,
            "request": self.request,
            "status": self.status,
            "progress": self.progress,
            "current_iteration": self.current_iteration,
        }
        if self.result is not None:
            out["result"] = self.result
        if self.error is not None:
            out["error"] = self.error
        return out


class JobManager:
    """Owns job state and the worker pool; all transitions go through
    _transition so the state machine cannot be violated."""

    def __init__(self, store: "NetworkStore", workers: int = 2, solver_threads: int = 1):
        self._store = store
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()
        self._pool = ThreadPoolExecutor(max_workers=max(1, workers))
        self._solver_threads = max(1, solver_threads)

    def submit(self, network_id: str, body: dict) -> Job:
        net = self._store.get(network_id)
        kind = "sweep" if "budgets" in body else "solve"
        if kind == "sweep":
            budgets = _parse_budgets(body["budgets"])
            probe = dict(body)
            probe["budget"] = budgets[0]
            cfg = parse_solver_config(net, probe)
        else:
            cfg = parse_solver_config(net, body)
        validate_config(net, cfg)  # reject bad configs before queueing
        job = Job(id=uuid.uuid4().hex[:12], network_id=network_id, kind=kind, request=body)
        with self._lock:
            self._jobs[job.id] = job
        self._pool.submit(self._run, job)
        return job

    def get(self, job_id: str) -> Job:
        with self._lock:
            job = self._jobs.get(job_id)
        if job is None:
            raise NetboostError("UNKNOWN_JOB", f"no job {job_id!r}")
        return job

    def snapshot(self, job_id: str) -> dict:
        job = self.get(job_id)
        with self._lock:
            return job.snapshot()

    def cancel(self, job_id: str) -> dict:
        job = self.get(job_id)
        job.cancel.set()
        with self._lock:
            if job.status == QUEUED:
                self._transition(job, CANCELLED)
            return {"id": job.id, "status": job.status, "cancel_requested": True}

    def shutdown(self, cancel_running: bool = True) -> None:
        if cancel_running:
            with self._lock:
                jobs = list(self._jobs.values())
            for job in jobs:
                job.cancel.set()
        self._pool.shutdown(wait=True, cancel_futures=True)

    # -- internals ---------------------------------------------------------

    def _transition(self, job: Job, new_status: str) -> bool:
        # caller may or may not hold the lock; use RLock-free discipline:
        # this method must only be called while holding self._lock
        if job.status in _TERMINAL:
            return False
        if new_status not in _LEGAL[job.status]:
            return False
        job.status = new_status
        return True

    def _set(self, job: Job, new_status: str, **fields) -> bool:
        with self._lock:
            ok = self._transition(job, new_status)
            if ok:
                for k, v in fields.items():
                    setattr(job, k, v)
            return ok

    def _progress(self, job: Job, fraction: float, iteration: int) -> None:
        with self._lock:
            if job.status == RUNNING:
                job.progress = max(job.progress, min(1.0, fraction))
                job.current_iteration = max(job.current_iteration, iteration)

    def _run(self, job: Job) -> None:
        if job.cancel.is_set():
            with self._lock:
                self._transition(job, CANCELLED)
            return
        if not self._set(job, RUNNING):
            return
        try:
            net = self._store.get(job.network_id)
            if job.kind == "sweep":
                result = self._run_sweep(job, net)
            else:
                result = self._run_solve(job, net)
        except NetboostError as exc:
            self._set(job, FAILED, error={"code": exc.code, "message": exc.message})
            return
        except Exception as exc:  # noqa: BLE001 - job boundary
            self._set(job, FAILED, error={"code": "INTERNAL", "message": str(exc)})
            return
        if result is None or job.cancel.is_set():
            self._set(job, CANCELLED, progress=job.progress)
            return
        self._set(job, DONE, progress=1.0, result=result)
        self._store.save_job_payload(job.id, result)

    def _run_solve(self, job: Job, net: Network) -> dict | None:
        cfg = parse_solver_config(net, job.request)

        def on_progress(ev) -> None:
            self._progress(job, ev.fraction, ev.iteration)

        solution = solve_co_mbi(net, cfg, progress_sink=on_progress, cancel_flag=job.cancel, threads=self._solver_threads)
        if solution.terminated_reason is TerminationReason.CANCELLED:
            return None
        validate_solution(net, cfg, solution)  # revalidate before storing
        return {"type": "solution", **solution_payload(net, solution)}

    def _run_sweep(self, job: Job, net: Network) -> dict | None:
        body = dict(job.request)
        budgets = _parse_budgets(body.pop("budgets"))
        body["budget"] = budgets[0]
        cfg = parse_solver_config(net, body)

        def on_progress(fraction: float) -> None:
            self._progress(job, fraction, int(fraction * len(budgets)))

        report = run_budget_sweep(
            net, cfg, budgets, progress_sink=on_progress, cancel_flag=job.cancel, threads=self._solver_threads
        )
        if job.cancel.is_set():
            return None
        return {"type": "sweep", **sweep_payload(net, report)}


def _parse_budgets(raw) -> list[int]:
    if not isinstance(raw, (list, tuple)) or not raw:
        raise NetboostError("INVALID_CONFIG", "budgets must be a non-empty list")
    try:
        budgets = [int(b) for b in raw]
    except (TypeError, ValueError):
        raise NetboostError("INVALID_CONFIG", f"bad budgets {raw!r}") from None
    if any(b < 1 for b in budgets):
        raise NetboostError("INVALID_CONFIG", "budgets must be >= 1")
    return budgets


class NetworkStore:
    """In-memory network registry with optional directory-backed snapshots
    of uploaded NET documents and DONE job payloads."""

    def __init__(self, data_dir: str | None = None):
        self._nets: dict[str, Network] = {}
        self._lock = threading.Lock()
        self._dir = Path(data_dir) if data_dir else None
        if self._dir:
            (self._dir / "networks").mkdir(parents=True, exist_ok=True)
            (self._dir / "jobs").mkdir(parents=True, exist_ok=True)
            for path in sorted((self._dir / "networks").glob("*.net")):
                try:
                    self._nets[path.stem] = parse_pajek(path.read_text())
                except NetboostError:
                    continue

    def add(self, text: str) -> tuple[str, Network]:
        net = parse_pajek(text)
        network_id = uuid.uuid4().hex[:12]
        with self._lock:
            self._nets[network_id] = net
        if self._dir:
            (self._dir / "networks" / f"{network_id}.net").write_text(text)
        return network_id, net

    def get(self, network_id: str) -> Network:
        with self._lock:
            net = self._nets.get(network_id)
        if net is None:
            raise NetboostError("UNKNOWN_NETWORK", f"no network {network_id!r}")
        return net

    def save_job_payload(self, job_id: str, payload: dict) -> None:
        if self._dir:
            (self._dir / "jobs" / f"{job_id}.json").write_text(json.dumps(payload))


def create_app(workers: int = 2, data_dir: str | None = None, solver_threads: int = 1) -> FastAPI:
    store = NetworkStore(data_dir)
    jobs = JobManager(store, workers=workers, solver_threads=solver_threads)

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        yield
        jobs.shutdown(cancel_running=True)

    app = FastAPI(title="netboost", version="0.1.0", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store
    app.state.jobs = jobs

    @app.exception_handler(NetboostError)
    async def on_domain_error(_req: Request, exc: NetboostError):
        status = 404 if exc.code in _NOT_FOUND else 400
        return JSONResponse(status_code=status, content={"code": exc.code, "message": exc.message})

    @app.post("/networks")
    async def upload_network(request: Request):
        text = (await request.body()).decode("utf-8")
        network_id, net = store.add(text)
        return {"network_id": network_id, "n_nodes": net.n_nodes, "n_edges": net.n_edges}

    @app.get("/networks/{network_id}/graph")
    async def get_graph(network_id: str, with_betweenness: bool = False, transform: str = "reciprocal"):
        net = store.get(network_id)
        scores = None
        if with_betweenness:
            tr = {t.value: t for t in DistanceTransform}.get(transform)
            if tr is None:
                raise NetboostError("INVALID_CONFIG", f"unknown transform {transform!r}")
            scores = betweenness_all(net, tr)
        return graph_payload(net, scores)

    @app.post("/networks/{network_id}/jobs", status_code=202)
    async def submit_job(network_id: str, request: Request):
        body = await _json_body(request)
        job = jobs.submit(network_id, body)
        return {"job_id": job.id}

    @app.get("/jobs/{job_id}")
    async def get_job(job_id: str):
        return jobs.snapshot(job_id)

    @app.post("/jobs/{job_id}/cancel")
    async def cancel_job(job_id: str):
        return jobs.cancel(job_id)

    @app.post("/networks/{network_id}/shortest-paths")
    async def shortest_paths(network_id: str, request: Request):
        body = await _json_body(request)
        net = store.get(network_id)
        s = resolve_node(net, body.get("s"))
        t = resolve_node(net, body.get("t"))
        max_paths = int(body.get("max_paths", 100))
        solution = None
        if body.get("job_id"):
            record = jobs.snapshot(str(body["job_id"]))
            if record.get("status") != DONE or record.get("result", {}).get("type") != "solution":
                raise NetboostError("INVALID_CONFIG", "job_id must reference a DONE solve job")
            solution = solution_from_payload(record["result"])
        before, after = paths_report(net, solution, s, t, max_paths=max_paths)
        out = {"before": pathset_payload(net, before)}
        if after is not None:
            out["after"] = pathset_payload(net, after)
        return out

    @app.post("/networks/{network_id}/what-if")
    async def what_if(network_id: str, request: Request):
        body = await _json_body(request)
        net = store.get(network_id)
        a = resolve_node(net, body.get("a"))
        b = resolve_node(net, body.get("b"))
        try:
            new_weight = int(body.get("new_weight"))
        except (TypeError, ValueError):
            raise NetboostError("INVALID_CONFIG", f"bad new_weight {body.get('new_weight')!r}") from None
        rep = what_if_edge(net, a, b, new_weight)
        return whatif_payload(net, rep)

    return app


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise NetboostError("INVALID_CONFIG", "request body must be a JSON object") from None
    if not isinstance(body, dict):
        raise NetboostError("INVALID_CONFIG", "request body must be a JSON object")
    return body
