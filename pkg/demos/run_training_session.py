"""Walk one full training session offline against the deterministic mock.

Stage 1 evaluates conflict styles from a (mocked) screenshot upload,
Stage 2 trains annotation on a gold-labeled dialogue, and Stage 3
practices repair against the simulated partner.

Run: python3 demos/run_training_session.py
"""

from __future__ import annotations

import io
import tempfile

from PIL import Image

from conflictcoach import Gateway, MockProvider, SessionStore
from conflictcoach.api import client_view, create_app

from fastapi.testclient import TestClient

FIXTURES = {
    "extract_transcript_v1": {
        "messages": [
            {"speaker": "self", "text": "you said you'd do the dishes yesterday"},
            {"speaker": "partner", "text": "I was slammed at work, you know that"},
            {"speaker": "self", "text": "You always have an excuse"},
            {"speaker": "partner", "text": "and you always keep score"},
        ],
        "topic_hint": "household habits",
    },
    "estimate_rpcs_v1": [
        {"items": [2, 3, 2, 2, 1, 4, 5, 2, 2, 4, 4, 1, 2]},  # self
        {"items": [3, 3, 3, 4, 4, 3, 3, 4, 4, 2, 2, 3, 3]},  # partner
    ],
    "gen_dialogue_v1": {
        "scenario": {
            "topic": "household habits",
            "description": "the dishes keep piling up and both partners feel unseen",
        },
        "turns": [
            {"speaker": "partner", "text": "Can we talk about the kitchen?", "gold_label": None, "gold_rationale": None},
            {"speaker": "self", "text": "You always leave it to me.", "gold_label": "blaming_you_statement", "gold_rationale": "Frames the problem as entirely the partner's fault with accusatory you-language."},
            {"speaker": "partner", "text": "Whatever. I'm done with this conversation.", "gold_label": "stonewalling", "gold_rationale": "Withdraws and refuses to engage."},
            {"speaker": "self", "text": "See, you shut down every single time.", "gold_label": None, "gold_rationale": None},
            {"speaker": "partner", "text": "Because you're impossible to please.", "gold_label": "criticism", "gold_rationale": "Attacks character rather than the specific behavior."},
            {"speaker": "self", "text": "I just want help with the dishes.", "gold_label": None, "gold_rationale": None},
            {"speaker": "partner", "text": "Oh sure, saint of the sink.", "gold_label": "sarcasm", "gold_rationale": "Hostile humor belittling the concern."},
            {"speaker": "self", "text": "That's not fair.", "gold_label": None, "gold_rationale": None},
            {"speaker": "partner", "text": "You're overreacting, it's just dishes.", "gold_label": "invalidation", "gold_rationale": "Dismisses the partner's feelings as exaggerated."},
            {"speaker": "self", "text": "And last month you skipped laundry, and the trash, and...", "gold_label": "kitchen_sinking", "gold_rationale": "Piles unrelated grievances into the argument."},
            {"speaker": "partner", "text": "Here we go again.", "gold_label": None, "gold_rationale": None},
            {"speaker": "self", "text": "You did it on purpose to annoy me.", "gold_label": "mind_reading", "gold_rationale": "Asserts the partner's motives as fact."},
            {"speaker": "partner", "text": "Keep this up and I'm staying at my sister's.", "gold_label": "threat_ultimatum", "gold_rationale": "Coerces with threatened withdrawal."},
            {"speaker": "self", "text": "Fine. Maybe we need a new plan.", "gold_label": None, "gold_rationale": None},
            {"speaker": "partner", "text": "Maybe. A fair one this time.", "gold_label": None, "gold_rationale": None},
        ],
    },
    "partner_turn_v1": [
        {"text": "Okay. I hear that the kitchen matters to you."},
        {"text": "I can take dishes on weekdays if you cover weekends."},
        {"text": "Deal. And thanks for not keeping score this time."},
    ],
    "rewrite_nvc_v1": {"rewrite": "I feel stretched thin when the dishes wait for me."},
    "annotation_summary_v1": {
        "strengths": "You reliably caught stonewalling and sarcasm, the two patterns this pairing produces most.",
        "recommendations": "Mind-reading slipped past you twice; reread its definition and watch for motive claims stated as facts.",
    },
}


def png() -> bytes:
    buf = io.BytesIO()
    Image.new("RGB", (48, 48), (250, 250, 250)).save(buf, format="PNG")
    return buf.getvalue()


def show(title: str, lines: list[str]) -> None:
    print(f"\n=== {title}")
    for line in lines:
        print(f"  {line}")


def main() -> None:
    data_dir = tempfile.mkdtemp(prefix="conflictcoach-demo-")
    store = SessionStore(data_dir)
    client = TestClient(create_app(store, Gateway(MockProvider(FIXTURES))))

    sid = client.post("/api/sessions").json()["session_id"]
    show("Stage 1: upload and evaluate", [f"session {sid}"])

    upload = client.post(
        f"/api/sessions/{sid}/screenshots",
        files=[("images", ("chat.png", png(), "image/png"))],
    ).json()
    show("extracted transcript (redacted at the door)", [
        f'{m["speaker"]:>7}: {m["text"]}' for m in upload["transcript"]["messages"]
    ])

    client.post(f"/api/sessions/{sid}/estimates")
    client.put(f"/api/sessions/{sid}/questionnaire/self", json={"edits": [{"index": 5, "score": 5}]})
    profiles = client.post(f"/api/sessions/{sid}/finalize-styles").json()["profiles"]
    show("classified styles", [
        f'{side}: {p["style"]} (highlights: {", ".join(p["negative_pattern_highlights"]) or "none"})'
        for side, p in profiles.items()
    ])

    dialogue = client.post(f"/api/sessions/{sid}/dialogue", json={}).json()
    show(f'Stage 2: annotate "{dialogue["scenario"]["topic"]}"', [
        f'{t["index"]:>2} {t["speaker"]:>7}: {t["text"]}' for t in dialogue["turns"][:5]
    ] + ["... (10 more turns)"])

    guesses = {1: "criticism", 2: "stonewalling", 4: "criticism", 6: "sarcasm"}
    verdicts = []
    for i in range(15):
        record = client.post(
            f"/api/sessions/{sid}/annotations",
            json={"turn_index": i, "label": guesses.get(i)},
        ).json()["record"]
        if guesses.get(i) or record["gold_label"]:
            mark = "correct" if record["correct"] else f'gold was {record["gold_label"]}'
            verdicts.append(f'turn {i}: guessed {guesses.get(i) or "none"} -> {mark}')
    show("instant feedback", verdicts)

    summary = client.get(f"/api/sessions/{sid}/annotation-summary").json()["summary"]
    show("summary", [
        f'accuracy: {summary["accuracy"]:.0%}',
        f'strengths: {summary["strengths_text"]}',
        f'recommendations: {summary["recommendations_text"]}',
    ])

    points = client.get(f"/api/sessions/{sid}/reset-points").json()
    client.post(f"/api/sessions/{sid}/practice/reset", json={"turn_index": points["primary"]})
    show("Stage 3: practice", [f'reset points {points["points"]}, starting from {points["primary"]}'])

    for text in ("You always leave it to me.", "I feel stretched thin when the dishes wait for me."):
        turn = client.post(f"/api/sessions/{sid}/practice/turns", json={"text": text}).json()
        lines = [f"you: {text}"]
        for finding in turn["lint_findings"]:
            lines.append(f'  lint {finding["rule_id"]}: {finding["advice"]}')
        if turn["rewrite"]:
            lines.append(f'  suggested rewrite: {turn["rewrite"]}')
        lines.append(f'partner: {turn["partner_turn"]["text"]}')
        show("practice exchange", lines)

    final = client.get(f"/api/sessions/{sid}").json()
    show("final state", [final["state"], f"event log at {data_dir}/{sid}/events.jsonl"])


if __name__ == "__main__":
    main()
