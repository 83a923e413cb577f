"""Single gate for the bridge contract; run with ``pytest -v -s`` to see the line.

The contract bundles five clauses: /health answers ok once the model is in
memory, greedy decoding is identical across 5 repeated calls, a token cap of
1 finishes with reason "length", responses satisfy the generation wire
protocol (checked with the consumer package's own client when installed),
and a 10-sample toy fine-tune ends with a lower logged loss than it started.
"""

import json
import time
from contextlib import contextmanager

import pytest
from fastapi.testclient import TestClient

from lmbridge import BridgeConfig, create_app, finetune

from conftest import wait_healthy
from test_finetune import write_toy_corpus


@contextmanager
def criterion(name, budget_s=None):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE: {name}: FAIL")
        raise
    elapsed = time.monotonic() - start
    if budget_s is not None:
        assert elapsed < budget_s, f"{name} took {elapsed:.2f}s, budget {budget_s}s"
    print(f"\nACCEPTANCE: {name}: PASS ({elapsed:.2f}s)")


def test_bridge_contract(tmp_path, checkpoint):
    with criterion("bridge-contract"):
        app = create_app(model_source=checkpoint)
        with TestClient(app) as client:
            health = wait_healthy(client)
            assert health.json() == {"status": "ok", "model": checkpoint}

            body = {"prompt": "more sunlight helps", "max_new_tokens": 6, "temperature": 0.0}
            answers = [client.post("/generate", json=body).json() for _ in range(5)]
            assert len({a["text"] for a in answers}) == 1
            assert len({a["finish_reason"] for a in answers}) == 1

            capped = client.post(
                "/generate",
                json={**body, "max_new_tokens": 1, "stop_token": "NEVER-EMITTED"},
            ).json()
            assert capped["finish_reason"] == "length"

            for answer in answers + [capped]:
                assert set(answer) == {"text", "finish_reason"}
                assert isinstance(answer["text"], str)
                assert answer["finish_reason"] in ("stop", "length", "error")
            try:
                import eigenkit
            except ImportError:
                pass
            else:
                remote = eigenkit.RemoteGenerator("http://testserver", client=client)
                result = remote.generate(
                    eigenkit.GenerationRequest(prompt="less rain hurts", max_new_tokens=4, temperature=0.0)
                )
                assert result.finish_reason in ("stop", "length")

        samples_path, passages_path = write_toy_corpus(tmp_path)
        log = finetune(
            samples_path,
            tmp_path / "ckpt",
            BridgeConfig(learning_rate=1e-03, epochs=1, seed=5),
            passages_path=passages_path,
            model_source=checkpoint,
        )
        assert len(log["steps"]) == 10
        assert log["steps"][0]["loss"] > log["steps"][-1]["loss"]
