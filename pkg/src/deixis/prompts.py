"""Prompt construction for reference extraction, topic segmentation, and
minutes generation.

All prompts are deterministic string builds (temperature 0, canonical
serialization) so recorded replies replay byte-for-byte.
"""

from __future__ import annotations

EXTRACTION_SYSTEM = (
    "You link pointer gestures made during a meeting to the exact words they refer to. "
    "Answer precisely and only quote phrases that appear verbatim in the sentence."
)

# Three worked exemplars with explicit reasoning; the final answer is always
# a fenced JSON object mapping gesture index to an exact phrase.
EXTRACTION_EXEMPLARS = """\
Example 1
Sentence: 0:Look 1:at 2:this 3:cluster 4:here.
Gestures: gesture 0: closed_loop, 860 ms
Reasoning: The speaker circles something while saying a demonstrative phrase. \
"this cluster here" is the object of attention and the loop selects it.
Answer:
```json
{"0": "this cluster here"}
```

Example 2
Sentence: 0:Revenue 1:climbed 2:for 3:quite 4:a 5:while 6:and 7:then 8:it 9:collapsed 10:right 11:after 12:the 13:announcement.
Gestures: gesture 0: line, 540 ms; gesture 1: closed_loop, 700 ms
Reasoning: Two gestures in order. The first traces the rising stretch, matching \
"climbed for quite a while". The second circles the fall, matching "collapsed right after the announcement".
Answer:
```json
{"0": "climbed for quite a while", "1": "collapsed right after the announcement"}
```

Example 3
Sentence: 0:The 1:outliers 2:sit 3:far 4:from 5:everything 6:else.
Gestures: gesture 0: zigzag_scan, 1200 ms
Reasoning: One scanning gesture sweeps a region while the speaker names "the outliers"; \
the remainder of the sentence describes position, not the referent.
Answer:
```json
{"0": "The outliers"}
```"""

EXTRACTION_TASK = """\
Now the task.
Sentence: {numbered}
Gestures: {gestures}
Think step by step about what each gesture refers to, then end your reply with a \
fenced JSON object mapping each gesture index to an exact contiguous phrase from the sentence."""


def extraction_messages(numbered: str, gesture_lines: str) -> list[dict]:
    user = f"{EXTRACTION_EXEMPLARS}\n\n{EXTRACTION_TASK.format(numbered=numbered, gestures=gesture_lines)}"
    return [
        {"role": "system", "content": EXTRACTION_SYSTEM},
        {"role": "user", "content": user},
    ]


SEGMENT_SYSTEM = (
    "You split meeting transcripts into topical segments. Answer with JSON only."
)

SEGMENT_TASK = """\
Below is a numbered list of utterances from a meeting. Split the meeting into topical \
segments by giving the indices of the utterances that START a new topic (excluding 0). \
Use between 1 and {max_boundaries} boundaries, strictly increasing.

{utterances}

End your reply with a fenced JSON array of boundary indices, for example:
```json
[4, 9]
```"""


def segmentation_messages(numbered_utterances: str, max_boundaries: int) -> list[dict]:
    return [
        {"role": "system", "content": SEGMENT_SYSTEM},
        {"role": "user", "content": SEGMENT_TASK.format(utterances=numbered_utterances, max_boundaries=max_boundaries)},
    ]


MINUTES_SYSTEM = (
    "You write meeting minutes. Preserve the inline gesture markers exactly as written; "
    "they link the text to replayable pointer gestures."
)

MINUTES_TASK = """\
Write meeting minutes (2 to 5 sentences) for the transcript segment below.

Rules for the special markers that look like ⟦g1⟧:
- Keep a marker only where your minutes summarize the content it was attached to.
- Copy kept markers verbatim; never invent new ones.
- You may merge adjacent markers that describe the same thing: ⟦g1+g2⟧.
- Use each gesture id at most once.

Transcript segment ({time_range}):
{transcript}

Reply with the minutes text only."""


def minutes_messages(transcript: str, time_range: str) -> list[dict]:
    return [
        {"role": "system", "content": MINUTES_SYSTEM},
        {"role": "user", "content": MINUTES_TASK.format(transcript=transcript, time_range=time_range)},
    ]
