"""Model/channel ingestion and the bundled reference models."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channel import ChannelFunction, InvalidAlphabetError, InvertibilityError, make_mod_add_channel, validate_and_derive
from .entropy import DEFAULT_L, MAX_L
from .nfold import MAX_ENTRIES
from .processes import ModelError, NoiseModel, markov_model, model_from_dict

# Three-state (0, 1, e) chains used for the binary feedback comparisons.
PI1 = [[0.4, 0.4, 0.2], [0.7, 0.1, 0.2], [0.2, 0.7, 0.1]]
PI2 = [[0.4, 0.4, 0.2], [0.7, 0.2, 0.1], [0.2, 0.7, 0.1]]
PI3 = [[0.45, 0.35, 0.2], [0.7, 0.2, 0.1], [0.2, 0.7, 0.1]]

REFERENCE = {"pi1": PI1, "pi2": PI2, "pi3": PI3}


def reference_model(name: str) -> NoiseModel:
    return markov_model(REFERENCE[name.lower()])


class ConfigError(ValueError):
    """Anything wrong with user-supplied configuration (CLI exit code 2)."""


def _read_json(path) -> object:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"file not found: {p}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON ({exc})") from None


def load_model(path) -> tuple[NoiseModel, object]:
    """Read a model config; returns the model and its optional ``"channel"`` entry.

    ``path`` may also be ``builtin:pi1`` (``pi2``, ``pi3``).
    """
    if isinstance(path, str) and path.startswith("builtin:"):
        name = path.split(":", 1)[1]
        if name.lower() not in REFERENCE:
            raise ConfigError(f"unknown builtin model {name!r}; choose from {sorted(REFERENCE)}")
        return reference_model(name), None
    data = _read_json(path)
    try:
        model = model_from_dict(data)
    except ModelError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return model, data.get("channel")


def channel_from_spec(spec, q: int) -> ChannelFunction:
    """``"mod_add"``, ``"table:PATH"`` (JSON q x q matrix) or an explicit matrix."""
    try:
        if spec is None or spec == "mod_add":
            return make_mod_add_channel(q)
        if isinstance(spec, str) and spec.startswith("table:"):
            data = _read_json(spec.split(":", 1)[1])
            table = data.get("h") if isinstance(data, dict) else data
            return channel_from_spec(table, q)
        if isinstance(spec, str):
            raise ConfigError(f"channel must be 'mod_add' or 'table:PATH', got {spec!r}")
        table = np.asarray(spec)
        if table.shape != (q, q):
            raise ConfigError(f"channel table must be {q}x{q}, got shape {table.shape}")
        return validate_and_derive(table)
    except (InvalidAlphabetError, InvertibilityError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad channel table: {exc}") from None


def parse_grid(text: str) -> np.ndarray:
    """``START:STOP:COUNT`` into an inclusive ``linspace``."""
    try:
        start, stop, count = text.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise ConfigError(f"beta grid must be START:STOP:COUNT, got {text!r}") from None
    if count < 1 or stop < start or start < 0:
        raise ConfigError(f"invalid beta grid {text!r}")
    return np.linspace(start, stop, count)


@dataclass
class RunConfig:
    model_path: str
    channel: object = None
    n: int = 6
    l: int = DEFAULT_L
    s_tilde: int = 0
    grid: np.ndarray = field(default_factory=lambda: np.linspace(0.0, 0.5, 50))
    seed: int = 0
    out: str | None = None
    fmt: str | None = None
    unit: str = "bits"
    samples: int = 1_000_000
    max_entries: int = MAX_ENTRIES
    l_cap: int = MAX_L

    def resolve(self) -> tuple[NoiseModel, ChannelFunction]:
        if self.n < 1:
            raise ConfigError("--n must be >= 1")
        if not 1 <= self.l <= self.l_cap:
            raise ConfigError(f"--l must be in 1..{self.l_cap}")
        if self.samples < 2:
            raise ConfigError("--samples must be >= 2")
        model, embedded = load_model(self.model_path)
        cf = channel_from_spec(self.channel if self.channel is not None else embedded, model.q)
        if not 0 <= self.s_tilde < model.q:
            raise ConfigError(f"--s-tilde must be in 0..{model.q - 1}")
        return model, cf
