"""Pipeline configuration: one flat record covering every stage.

Values resolve in precedence order: built-in defaults, then a JSON config
file, then the CAPQA_SEED environment variable (seed only), then explicit
command-line flags.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field, fields

from .errors import MalformedInput

GENERATORS = ("yesno", "object", "number", "color", "location", "srl")
PRETRAIN_TASKS = ("mlm", "mqa", "itm")

_DEFAULT_PREFIXES = ("is there", "is this", "is the", "are there")

SEED_ENV_VAR = "CAPQA_SEED"


@dataclass
class PipelineConfig:
    seed: int = 0
    captions: str = ""
    vectors: str = ""
    srl_frames: str = ""
    lexicons: str = ""
    rewriter: str = ""
    generators: tuple = GENERATORS
    yesno_prefixes: tuple = _DEFAULT_PREFIXES
    adversarial_threshold: float = 0.4
    max_questions_per_caption: int = 20
    negative_mode: str = "auto"
    levels: tuple = (1, 3, 5, 7)
    neg_ratio: float = 1.0
    min_count: int = 1
    questions_per_image_per_epoch: int = 5
    workers: int = 1
    vocab_limit: int = 5000
    augment_mode: str = "paraphrase"
    pivot_language: str = ""
    max_variants: int = 2
    keep_probability: float = 1.0
    fallback: bool = False
    timeout_s: float = 30.0
    batch_size: int = 64
    tasks: tuple = PRETRAIN_TASKS
    default_dims: str = ""

    def __post_init__(self):
        self.generators = tuple(self.generators)
        self.yesno_prefixes = tuple(self.yesno_prefixes)
        self.levels = tuple(self.levels)
        self.tasks = tuple(self.tasks)
        for gen in self.generators:
            if gen not in GENERATORS:
                raise MalformedInput(f"unknown generator {gen!r}; choose from {GENERATORS}")
        for task in self.tasks:
            if task not in PRETRAIN_TASKS:
                raise MalformedInput(f"unknown task {task!r}; choose from {PRETRAIN_TASKS}")
        if self.workers < 1:
            raise MalformedInput("workers must be at least 1")
        if self.neg_ratio < 0:
            raise MalformedInput("neg_ratio must be non-negative")
        if self.questions_per_image_per_epoch < 1:
            raise MalformedInput("questions_per_image_per_epoch must be at least 1")

    def to_json_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for key in ("generators", "yesno_prefixes", "levels", "tasks"):
            d[key] = list(d[key])
        return d


_FIELD_NAMES = {f.name for f in fields(PipelineConfig)}


def load_config(path) -> PipelineConfig:
    """Read a UTF-8 JSON object into a PipelineConfig; unknown keys fail."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedInput(f"config file {path} must hold a JSON object")
    unknown = sorted(set(doc) - _FIELD_NAMES)
    if unknown:
        raise MalformedInput(f"config file {path} has unknown keys: {', '.join(unknown)}")
    try:
        return PipelineConfig(**doc)
    except TypeError as exc:
        raise MalformedInput(f"config file {path}: {exc}") from exc


def resolve(file_config: PipelineConfig = None, overrides: dict = None) -> PipelineConfig:
    """Layer CAPQA_SEED and explicit flag overrides onto a base config."""
    base = file_config if file_config is not None else PipelineConfig()
    values = dataclasses.asdict(base)
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        try:
            values["seed"] = int(env_seed)
        except ValueError:
            raise MalformedInput(
                f"{SEED_ENV_VAR} must be an integer, got {env_seed!r}"
            ) from None
    for key, value in (overrides or {}).items():
        if key not in _FIELD_NAMES:
            raise MalformedInput(f"unknown config field {key!r}")
        if value is not None:
            values[key] = value
    return PipelineConfig(**values)


def require_file(path: str, what: str) -> str:
    if not path:
        raise MalformedInput(f"{what} is required but not configured")
    if not os.path.isfile(path):
        raise MalformedInput(f"{what} file does not exist: {path}")
    return path
