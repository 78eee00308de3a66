"""Box JSON files.

Schema::

    {"parties": n, "inputs": [..], "outputs": [..], "probs": ["num/den", ...]}

with probs flat in the canonical order (input tuples slowest, output
tuples fastest) and rationals spelled as decimal-integer strings joined
by "/".  Readers reject negative or non-normalized tables.
"""

from __future__ import annotations

import json
from pathlib import Path

from .box import Box, BoxError, make_box
from .rational import RationalFormatError, format_rational, parse_rational


class BoxFormatError(BoxError):
    """A box file is structurally malformed; carries a field diagnostic."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def box_to_dict(box: Box) -> dict:
    return {
        "parties": box.party_count,
        "inputs": list(box.input_arity),
        "outputs": list(box.output_arity),
        "probs": [format_rational(p) for p in box.probs],
    }


def box_from_dict(data) -> Box:
    if not isinstance(data, dict):
        raise BoxFormatError("$", "box file must hold a JSON object")
    for key in ("parties", "inputs", "outputs", "probs"):
        if key not in data:
            raise BoxFormatError(key, "missing field")
    parties = data["parties"]
    inputs = data["inputs"]
    outputs = data["outputs"]
    raw = data["probs"]
    if not isinstance(parties, int):
        raise BoxFormatError("parties", "must be an integer")
    for name, lst in (("inputs", inputs), ("outputs", outputs)):
        if not isinstance(lst, list) or not all(isinstance(v, int) for v in lst):
            raise BoxFormatError(name, "must be a list of integers")
    if not isinstance(raw, list):
        raise BoxFormatError("probs", "must be a list of rational strings")
    probs = []
    for i, text in enumerate(raw):
        try:
            probs.append(parse_rational(text))
        except RationalFormatError as exc:
            raise BoxFormatError(f"probs[{i}]", str(exc)) from exc
    return make_box(parties, inputs, outputs, probs)


def save_box(box: Box, path) -> None:
    Path(path).write_text(json.dumps(box_to_dict(box), indent=2, sort_keys=True) + "\n")


def load_box(path) -> Box:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BoxFormatError("$", f"invalid JSON: {exc}") from exc
    return box_from_dict(data)
