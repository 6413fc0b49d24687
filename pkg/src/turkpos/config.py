"""Service configuration: one JSON file plus environment overrides.

The same file carries the training settings under a "train" key, so the
CLI's train subcommand and the service share one config format.

Environment overrides use the TURKPOS_ prefix: TURKPOS_HOST, TURKPOS_PORT,
TURKPOS_MODEL_DIR, TURKPOS_CORPUS, TURKPOS_STORE_DIR, TURKPOS_MAX_TEXT_BYTES,
TURKPOS_STATIC_DIR, and TURKPOS_TRAIN_<FIELD> for any TrainConfig field.
"""

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from .trainer import TrainConfig


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    model_dir: str = "models"
    corpus_path: str | None = None
    store_dir: str = "store"
    max_text_bytes: int = 1_000_000
    static_dir: str | None = None  # optional built web client to serve at /
    train: TrainConfig = field(default_factory=TrainConfig)


_ENV_FIELDS = {
    "TURKPOS_HOST": ("host", str),
    "TURKPOS_PORT": ("port", int),
    "TURKPOS_MODEL_DIR": ("model_dir", str),
    "TURKPOS_CORPUS": ("corpus_path", str),
    "TURKPOS_STORE_DIR": ("store_dir", str),
    "TURKPOS_MAX_TEXT_BYTES": ("max_text_bytes", int),
    "TURKPOS_STATIC_DIR": ("static_dir", str),
}


def load_config(path: str | Path | None = None, env: dict | None = None) -> ServiceConfig:
    env = os.environ if env is None else env
    data: dict = {}
    if path is not None:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    train_data = dict(data.pop("train", {}))
    known = {f.name for f in fields(ServiceConfig) if f.name != "train"}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")

    for var, (name, cast) in _ENV_FIELDS.items():
        if var in env:
            data[name] = cast(env[var])
    for f in fields(TrainConfig):
        var = f"TURKPOS_TRAIN_{f.name.upper()}"
        if var in env:
            cast = type(getattr(TrainConfig(), f.name))
            train_data[f.name] = cast(env[var])

    return ServiceConfig(train=TrainConfig.from_dict(train_data), **data)
