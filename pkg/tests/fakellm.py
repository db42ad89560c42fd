"""Scripted chat service for recording replay fixtures in tests.

Produces valid, deterministic replies for the three request kinds by
inspecting the prompt, so recorded runs exercise the real llm code paths.
"""

from __future__ import annotations

import json
import re

from deixis.minutes import dedupe_markers


class FakeLlm:
    def send(self, body: dict) -> str:
        user = body["messages"][-1]["content"]
        if "Sentence:" in user and "Gestures:" in user:
            return self._extraction(user)
        if "topical segments" in user:
            return self._segmentation(user)
        return self._minutes(user)

    def _extraction(self, user: str) -> str:
        sentence_line = user.rsplit("Sentence: ", 1)[1].splitlines()[0]
        words = [w.split(":", 1)[1] for w in sentence_line.split()]
        gesture_line = user.rsplit("Gestures: ", 1)[1].splitlines()[0]
        n = gesture_line.count("gesture ")
        mapping = {str(i): words[min(i, len(words) - 1)] for i in range(n)}
        return f"Each gesture points at one word in order.\n```json\n{json.dumps(mapping)}\n```"

    def _segmentation(self, user: str) -> str:
        n = len(re.findall(r"^\d+: ", user, flags=re.MULTILINE))
        if n < 4:
            return "```json\n[]\n```"
        return f"One change of topic midway.\n```json\n[{n // 2}]\n```"

    def _minutes(self, user: str) -> str:
        markers = re.findall("⟦[^⟧]+⟧", user)
        summary = "The group reviewed the shared charts and agreed on the main movements."
        if markers:
            summary += " Key references: " + " ".join(dict.fromkeys(markers)) + "."
        return dedupe_markers(summary)
