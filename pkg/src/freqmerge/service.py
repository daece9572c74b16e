"""HTTP service for interactive merge tuning.

Sessions hold uploaded images plus merge parameters in memory. Every GET
recomputes from current state (no caching), so responses always reflect
the latest acknowledged parameter update, and the merged image matches
the CLI spectral merge byte for byte for the same inputs and params.

Routes (JSON unless noted):

    POST   /sessions                      -> {"id": token}
    POST   /sessions/{id}/images          (binary PGM) -> {index, rows, cols}
    PUT    /sessions/{id}/params          -> echoed validated params
    GET    /sessions/{id}/merged.pgm      -> binary PGM
    GET    /sessions/{id}/spectrum.pgm    -> binary PGM (pre-threshold heatmap)
    GET    /sessions/{id}/report          -> reduction report JSON
    DELETE /sessions/{id}                 -> 204
"""

from __future__ import annotations

import math
import threading
import uuid
from dataclasses import dataclass, field

from fastapi import Body, FastAPI, HTTPException, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .codec import (
    AlignMode,
    AlignmentPolicy,
    PgmParseError,
    read_pgm,
    spectrum_heatmap,
    write_pgm,
)
from .merge import MergeConfig, Renorm, integrate_spectra, merge_spectral
from .spectral import ImagePlane

__all__ = ["create_app"]

_PGM_MEDIA = "application/octet-stream"


@dataclass
class _Session:
    planes: list[ImagePlane] = field(default_factory=list)
    coeffs: list[float] = field(default_factory=list)
    threshold_frac: float = 0.0
    renorm: Renorm = Renorm.divide_by_max
    align: AlignMode = AlignMode.center_pad
    lock: threading.Lock = field(default_factory=threading.Lock)

    def snapshot(self) -> tuple[list[ImagePlane], MergeConfig]:
        with self.lock:
            planes = list(self.planes)
            config = MergeConfig(
                coefficients=tuple(self.coeffs),
                threshold_fraction=self.threshold_frac,
                spatial_renorm=self.renorm,
                alignment=AlignmentPolicy(mode=self.align),
            )
        return planes, config

    def params_payload(self) -> dict:
        return {
            "coeffs": list(self.coeffs),
            "threshold_frac": self.threshold_frac,
            "renorm": self.renorm.value,
            "align": self.align.value,
        }


class _SessionStore:
    def __init__(self):
        self._lock = threading.Lock()
        self._sessions: dict[str, _Session] = {}

    def create(self) -> str:
        token = uuid.uuid4().hex
        with self._lock:
            self._sessions[token] = _Session()
        return token

    def get(self, token: str) -> _Session:
        with self._lock:
            session = self._sessions.get(token)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    def drop(self, token: str) -> None:
        with self._lock:
            if token not in self._sessions:
                raise HTTPException(status_code=404, detail="unknown session")
            del self._sessions[token]


def _bad_request(message: str):
    raise HTTPException(status_code=400, detail=message)


def _validated_params(payload: dict, n_planes: int) -> dict:
    known = {"coeffs", "threshold_frac", "renorm", "align"}
    for key in payload:
        if key not in known:
            _bad_request(f"params: unknown field {key!r}")

    coeffs = payload.get("coeffs")
    if coeffs is None:
        coeffs = [1.0] * n_planes
    if not isinstance(coeffs, list) or not all(
        isinstance(c, (int, float)) and not isinstance(c, bool) for c in coeffs
    ):
        _bad_request("coeffs: must be a list of numbers")
    coeffs = [float(c) for c in coeffs]
    if not all(math.isfinite(c) for c in coeffs):
        _bad_request("coeffs: values must be finite")
    if len(coeffs) != n_planes:
        _bad_request(f"coeffs: expected {n_planes} values, got {len(coeffs)}")

    threshold = payload.get("threshold_frac", 0.0)
    if isinstance(threshold, bool) or not isinstance(threshold, (int, float)):
        _bad_request("threshold_frac: must be a number")
    threshold = float(threshold)
    if not (0.0 <= threshold < 1.0):
        _bad_request("threshold_frac: must lie in [0, 1)")

    renorm = payload.get("renorm", Renorm.divide_by_max.value)
    try:
        renorm = Renorm(renorm)
    except ValueError:
        _bad_request(
            "renorm: must be one of " + ", ".join(r.value for r in Renorm)
        )

    align = payload.get("align", AlignMode.center_pad.value)
    try:
        align = AlignMode(align)
    except ValueError:
        _bad_request(
            "align: must be one of " + ", ".join(m.value for m in AlignMode)
        )

    return {
        "coeffs": coeffs,
        "threshold_frac": threshold,
        "renorm": renorm,
        "align": align,
    }


def _require_images(planes: list[ImagePlane]) -> None:
    if not planes:
        _bad_request("no images uploaded")


def create_app() -> FastAPI:
    """Build the tuning service app with an empty in-memory session store."""
    app = FastAPI(title="freqmerge tuner", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = _SessionStore()

    @app.exception_handler(RequestValidationError)
    async def _on_bad_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": "malformed request body"})

    @app.post("/sessions")
    def create_session():
        return {"id": store.create()}

    @app.post("/sessions/{session_id}/images")
    async def upload_image(session_id: str, request: Request):
        session = store.get(session_id)
        body = await request.body()
        try:
            plane = read_pgm(body)
        except PgmParseError as err:
            _bad_request(f"invalid PGM upload: {err}")
        with session.lock:
            session.planes.append(plane)
            session.coeffs.append(1.0)
            index = len(session.planes) - 1
        return {"index": index, "rows": plane.rows, "cols": plane.cols}

    @app.put("/sessions/{session_id}/params")
    def put_params(session_id: str, payload: dict = Body(...)):
        session = store.get(session_id)
        with session.lock:
            params = _validated_params(payload, len(session.planes))
            session.coeffs = params["coeffs"]
            session.threshold_frac = params["threshold_frac"]
            session.renorm = params["renorm"]
            session.align = params["align"]
            return session.params_payload()

    @app.get("/sessions/{session_id}/merged.pgm")
    def merged_pgm(session_id: str):
        planes, config = store.get(session_id).snapshot()
        _require_images(planes)
        merged, _, _ = merge_spectral(planes, config)
        return Response(content=write_pgm(merged), media_type=_PGM_MEDIA)

    @app.get("/sessions/{session_id}/spectrum.pgm")
    def spectrum_pgm(session_id: str):
        planes, config = store.get(session_id).snapshot()
        _require_images(planes)
        integrated = integrate_spectra(
            planes, config.coefficients, config.alignment
        )
        return Response(
            content=write_pgm(spectrum_heatmap(integrated)), media_type=_PGM_MEDIA
        )

    @app.get("/sessions/{session_id}/report")
    def report(session_id: str):
        planes, config = store.get(session_id).snapshot()
        _require_images(planes)
        _, _, rep = merge_spectral(planes, config)
        return Response(content=rep.to_json(), media_type="application/json")

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        store.drop(session_id)
        return Response(status_code=204)

    return app
