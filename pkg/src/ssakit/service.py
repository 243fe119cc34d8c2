"""Session-oriented HTTP JSON API for the grouping workbench.

A session holds one uploaded series and its decomposition; the client reads
eigentriple data, submits named groupings and requests reconstructions and
forecasts.  Sessions live in memory with least-recently-used eviction, and
grouping updates are copy-on-write: a concurrent reader sees either the old
or the new grouping, never a mixture.

Run with ``uvicorn ssakit.service:app``.
"""

import threading
import uuid
from collections import OrderedDict
from typing import Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .decomposition import SSA
from .exceptions import GroupingOverlapError, NonForecastableError
from .forecast import bootstrap_forecast, forecast_recurrent, forecast_vector
from .grouping import eigenvector_periodogram, normalize_grouping

__all__ = ["create_app", "app"]


class SessionRequest(BaseModel):
    values: list[float]
    window_length: Optional[int] = None
    n_components: Optional[int] = None
    method: str = "basic"
    centering: str = "none"


class IntervalSpec(BaseModel):
    level: float = 0.95
    n_surrogates: int = 200
    seed: Optional[int] = None


class ForecastRequest(BaseModel):
    group: str
    horizon: int = Field(gt=0)
    method: str = "recurrent"
    intervals: Optional[IntervalSpec] = None


class _Session:
    def __init__(self, sid, ssa):
        self.id = sid
        self.ssa = ssa
        self.lock = threading.Lock()
        # grouping state swaps atomically as a (grouping, response) pair
        self.state = ({}, None)


class _SessionStore:
    def __init__(self, cap):
        self.cap = cap
        self.lock = threading.Lock()
        self.sessions = OrderedDict()

    def add(self, session):
        with self.lock:
            self.sessions[session.id] = session
            self.sessions.move_to_end(session.id)
            while len(self.sessions) > self.cap:
                self.sessions.popitem(last=False)

    def get(self, sid):
        with self.lock:
            session = self.sessions.get(sid)
            if session is None:
                raise HTTPException(status_code=404, detail=f"unknown session {sid!r}")
            self.sessions.move_to_end(sid)
            return session


def _descriptor(session):
    ssa = session.ssa
    return {
        "id": session.id,
        "N": ssa.n_samples_,
        "L": ssa.window_length_,
        "K": ssa.n_windows_,
        "d": ssa.rank_,
        "contributions": ssa.contributions_.tolist(),
    }


def _group_wcor(series_map, weights):
    names = list(series_map)
    k = len(names)
    w = np.zeros((k, k))
    arrays = [np.asarray(series_map[n]) for n in names]
    norms = [float(np.sqrt(np.sum(weights * a * a))) for a in arrays]
    for i in range(k):
        for j in range(i, k):
            if norms[i] > 0 and norms[j] > 0:
                w[i, j] = w[j, i] = float(
                    np.sum(weights * arrays[i] * arrays[j]) / (norms[i] * norms[j])
                )
        if norms[i] > 0:
            w[i, i] = 1.0
    return names, np.clip(w, -1.0, 1.0)


def create_app(size_cap=1_000_000, session_cap=64, cors_origins=("*",)):
    app = FastAPI(title="ssakit grouping service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = _SessionStore(session_cap)

    @app.post("/sessions", status_code=201)
    def create_session(body: SessionRequest):
        if len(body.values) > size_cap:
            raise HTTPException(status_code=413,
                                detail=f"series exceeds the {size_cap}-sample cap")
        try:
            ssa = SSA(window_length=body.window_length, n_components=body.n_components,
                      method=body.method, centering=body.centering).fit(body.values)
        except (ValueError, RuntimeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        session = _Session(uuid.uuid4().hex, ssa)
        store.add(session)
        return _descriptor(session)

    @app.get("/sessions/{sid}")
    def describe_session(sid: str):
        session = store.get(sid)
        grouping, _ = session.state
        doc = _descriptor(session)
        doc["grouping"] = {name: list(idx) for name, idx in grouping.items()}
        return doc

    @app.get("/sessions/{sid}/components/{m}")
    def component_data(sid: str, m: int):
        session = store.get(sid)
        ssa = session.ssa
        if not 1 <= m <= ssa.n_components_:
            raise HTTPException(status_code=400,
                                detail=f"component index must lie in [1, {ssa.n_components_}]")
        u = ssa.left_vectors_[:, m - 1]
        v = ssa.right_vectors_[:, m - 1]
        elementary = ssa.reconstruct([m])
        _, power = eigenvector_periodogram(u)
        return {
            "index": m,
            "sigma": float(ssa.sigma_[m - 1]),
            "contribution": float(ssa.contributions_[m - 1]),
            "eigenvector": u.tolist(),
            "factor_vector": v.tolist(),
            "elementary": elementary.tolist(),
            "periodogram": power.tolist(),
        }

    @app.put("/sessions/{sid}/grouping")
    def apply_grouping(sid: str, body: dict[str, list[int]]):
        session = store.get(sid)
        ssa = session.ssa
        with session.lock:
            current, cached = session.state
            if body == {name: list(idx) for name, idx in current.items()} and cached is not None:
                return cached
            try:
                grouping = normalize_grouping(body, ssa.n_components_)
            except GroupingOverlapError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            except (TypeError, ValueError) as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            series = ssa.reconstruct(dict(grouping))
            residual = series.pop("residual")
            weights = ssa.weights_
            names, wmatrix = _group_wcor({**series, "residual": residual}, weights)
            response = {
                "groups": {name: vals.tolist() for name, vals in series.items()},
                "residual": residual.tolist(),
                "wcor": {"order": names, "values": wmatrix.tolist()},
            }
            session.state = (grouping, response)
            return response

    @app.get("/sessions/{sid}/wcor")
    def elementary_wcor(sid: str):
        session = store.get(sid)
        w = session.ssa.wcor()
        return {"order": session.ssa.n_components_, "values": w.tolist()}

    @app.post("/sessions/{sid}/forecast")
    def forecast(sid: str, body: ForecastRequest):
        session = store.get(sid)
        ssa = session.ssa
        grouping, _ = session.state
        if body.group not in grouping:
            raise HTTPException(status_code=400, detail=f"unknown group {body.group!r}")
        if body.method not in ("recurrent", "vector"):
            raise HTTPException(status_code=400, detail=f"unknown method {body.method!r}")
        indices = list(grouping[body.group])
        try:
            if body.intervals is not None:
                result = bootstrap_forecast(
                    ssa.series_, ssa.window_length_, horizon=body.horizon,
                    n_surrogates=body.intervals.n_surrogates, level=body.intervals.level,
                    seed=body.intervals.seed, method=body.method, group=indices,
                )
            else:
                fn = forecast_vector if body.method == "vector" else forecast_recurrent
                result = fn(ssa, indices, body.horizon)
        except NonForecastableError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except (ValueError, RuntimeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"group": body.group} | result.to_dict()

    return app


app = create_app()
