#!/usr/bin/env python3
"""Record protocol state payloads for the frontend's golden picker tests.

Plays seeded sessions against the in-process service and snapshots the
state payload at classify and locate phases. Output is committed at
frontend/test/golden/state_payloads.json; rerun after protocol changes:

    python3 tools/record_state_payloads.py
"""
from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from phishpond.pack import Label, generate_pack
from phishpond.server import create_app

OUT = Path(__file__).resolve().parents[1] / "frontend" / "test" / "golden" / "state_payloads.json"
TARGET = 20


def main() -> None:
    pack = generate_pack(seed=3)
    items = {item.url: item for item in pack.items}
    client = TestClient(create_app(pack))
    payloads: list[dict] = []

    seed = 0
    while len(payloads) < TARGET:
        seed += 1
        response = client.post("/v1/session", json={"seed": seed})
        session_id = response.json()["session_id"]
        state = response.json()["state"]
        payloads.append(state)
        if len(payloads) >= TARGET:
            break
        # reject until a phishing worm opens the locate phase, then snapshot it
        for _ in range(12):
            worm = items[state["worm"]["url"]]
            if worm.label is Label.PHISHING:
                state = client.post(
                    f"/v1/session/{session_id}/action", json={"type": "reject"}
                ).json()["state"]
                payloads.append(state)
                break
            state = client.post(
                f"/v1/session/{session_id}/action", json={"type": "eat"}
            ).json()["state"]

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(payloads[:TARGET], indent=2, ensure_ascii=False) + "\n")
    phases = [p["phase"] for p in payloads[:TARGET]]
    print(f"wrote {TARGET} payloads to {OUT}")
    print(f"phases: {phases.count('await_classify')} classify,"
          f" {phases.count('await_locate')} locate")


if __name__ == "__main__":
    main()
