"""Show the draft lint rules on a range of messages.

Run: python3 demos/lint_playground.py [your draft ...]
"""

from __future__ import annotations

import sys

from conflictcoach import nvc_lint

SAMPLES = [
    "You always ignore me",
    "You never listen",
    "Stop yelling at me",
    "You're such an idiot",
    "It's your fault we're late again",
    "I feel hurt when the dishes pile up",
    "I appreciate you, but I can't keep doing this",
    "Thanks for cooking, but you always forget the dishes",
]


def show(draft: str) -> None:
    findings = nvc_lint(draft)
    print(f'\n"{draft}"')
    if not findings:
        print("  clean: no findings")
        return
    for f in findings:
        start, end = f.span
        flagged = draft[start:end]
        summary = flagged if len(flagged) < 30 else flagged[:27] + "..."
        print(f"  {f.rule_id.value:<20} [{start:>2},{end:>2}] {summary!r}")
        print(f"    {f.advice}")


def main() -> None:
    drafts = [" ".join(sys.argv[1:])] if len(sys.argv) > 1 else SAMPLES
    for draft in drafts:
        show(draft)


if __name__ == "__main__":
    main()
