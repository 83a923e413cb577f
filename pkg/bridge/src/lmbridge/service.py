"""HTTP service exposing a causal LM behind the generation wire protocol.

Two endpoints. POST /generate takes {prompt, max_new_tokens, top_p,
temperature, stop_token} and answers {text, finish_reason}; GET /health
answers {status, model} once weights are in memory. While the model is still
loading both endpoints answer 503, and a body that fails validation answers
400. Inference is serialized behind one lock, so concurrent callers see
queueing latency but never interleaved output.
"""

import logging
import threading
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, field_validator

from .config import BridgeConfig
from .decoding import generate_text, load_model_and_tokenizer

log = logging.getLogger(__name__)


class GenerateBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    prompt: str
    max_new_tokens: int = 48
    top_p: float = 0.9
    temperature: float = 1.0
    stop_token: str = "<|endoftext|>"

    @field_validator("prompt", "stop_token")
    @classmethod
    def _nonempty(cls, value: str) -> str:
        if not value:
            raise ValueError("must be nonempty")
        return value

    @field_validator("max_new_tokens")
    @classmethod
    def _positive_cap(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @field_validator("top_p")
    @classmethod
    def _valid_top_p(cls, value: float) -> float:
        if not 0 < value <= 1:
            raise ValueError("must be in (0, 1]")
        return value

    @field_validator("temperature")
    @classmethod
    def _valid_temperature(cls, value: float) -> float:
        if value < 0:
            raise ValueError("must not be negative")
        return value


class _ModelState:
    """Holds the loaded model; None until the loader thread finishes."""

    def __init__(self, source: str):
        self.source = source
        self.model = None
        self.tokenizer = None
        self.load_error: str | None = None
        self.lock = threading.Lock()

    def load(self) -> None:
        try:
            self.model, self.tokenizer = load_model_and_tokenizer(self.source)
        except Exception as exc:
            self.load_error = str(exc)
            log.error("failed to load %r: %s", self.source, exc)


def create_app(config: BridgeConfig | None = None, model_source: str | None = None) -> FastAPI:
    """Build the service around a hub model name or checkpoint directory.

    ``model_source`` overrides ``config.model_name`` as the thing to load;
    loading starts when the app starts and runs in a background thread so the
    service can answer 503 in the meantime.
    """
    config = config or BridgeConfig()
    state = _ModelState(model_source or config.model_name)

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        threading.Thread(target=state.load, daemon=True).start()
        yield

    app = FastAPI(lifespan=lifespan)
    app.state.bridge = state

    @app.exception_handler(RequestValidationError)
    async def _as_bad_request(_: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": f"malformed request: {exc.errors()}"})

    def _unavailable() -> JSONResponse | None:
        if state.load_error is not None:
            return JSONResponse(status_code=503, content={"detail": f"model failed to load: {state.load_error}"})
        if state.model is None:
            return JSONResponse(status_code=503, content={"detail": "model is loading"})
        return None

    @app.get("/health")
    def health():
        unavailable = _unavailable()
        if unavailable is not None:
            return unavailable
        return {"status": "ok", "model": state.source}

    @app.post("/generate")
    def generate(body: GenerateBody):
        unavailable = _unavailable()
        if unavailable is not None:
            return unavailable
        try:
            with state.lock:
                text, finish_reason = generate_text(
                    state.model,
                    state.tokenizer,
                    body.prompt,
                    max_new_tokens=body.max_new_tokens,
                    top_p=body.top_p,
                    temperature=body.temperature,
                    stop_token=body.stop_token,
                )
        except Exception:
            # inference failures are reported in-band; a 5xx would only make
            # the client spend its retries on a deterministic error
            log.exception("generation failed")
            return {"text": "", "finish_reason": "error"}
        return {"text": text, "finish_reason": finish_reason}

    return app


def serve(config: BridgeConfig | None = None, port: int = 8500, host: str = "127.0.0.1",
          model_source: str | None = None) -> None:
    """Run the service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(config, model_source), host=host, port=port, log_level="info")
