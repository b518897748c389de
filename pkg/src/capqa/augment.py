"""Question rewriting for linguistic variety.

Rewrites come from a pluggable rewriter: an HTTP endpoint (POST /rewrite),
a spawned subprocess speaking line-delimited JSON over stdin/stdout, an
in-process callable, or the built-in rule table. Whatever the backend, every
accepted rewrite must leave the answer's presence in the question unchanged,
so augmentation can never silently detach a question from its answer.
"""

from __future__ import annotations

import json
import re
import shlex
import subprocess
from dataclasses import dataclass
from typing import Optional

import requests

from .errors import MalformedInput, RewriterUnavailable
from .lingo import singularize
from .qa import QAPair, derived_qa_id
from .rng import stream

_MODES = ("paraphrase", "backtranslate")
_PIVOTS = ("fr", "de", "es")

_WORD_RE = re.compile(r"\w+(?:['’-]\w+)*")


@dataclass(frozen=True)
class RewriteRequest:
    request_id: str
    text: str
    mode: str
    pivot_language: Optional[str] = None

    def __post_init__(self):
        if not self.text:
            raise ValueError("rewrite request text must be non-empty")
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}")
        if self.mode == "backtranslate":
            if self.pivot_language not in _PIVOTS:
                raise ValueError(f"backtranslate requires pivot_language in {_PIVOTS}")
        elif self.pivot_language is not None:
            raise ValueError("pivot_language only applies to backtranslate")


@dataclass(frozen=True)
class RewriteResponse:
    request_id: str
    rewrites: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rewrites", tuple(self.rewrites))


@dataclass(frozen=True)
class AugmentConfig:
    mode: str = "paraphrase"
    pivot_language: Optional[str] = None
    max_variants: int = 2
    keep_probability: float = 1.0
    seed: int = 0
    fallback: bool = False
    timeout_s: float = 30.0
    batch_size: int = 64

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}")
        if self.mode == "backtranslate" and self.pivot_language not in _PIVOTS:
            raise ValueError(f"backtranslate requires pivot_language in {_PIVOTS}")
        if self.mode == "paraphrase" and self.pivot_language is not None:
            raise ValueError("pivot_language only applies to backtranslate")
        if self.max_variants < 0:
            raise ValueError("max_variants must be non-negative")
        if not 0.0 <= self.keep_probability <= 1.0:
            raise ValueError("keep_probability must lie in [0, 1]")
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")


# --- built-in rule table --------------------------------------------------------

_PARAPHRASE_RULES = (
    (re.compile(r"^How many (.+) are visible\?$"),
     ("How many {0} can be seen?", "How many {0} are we looking at?")),
    (re.compile(r"^How many (.+) can be seen\?$"),
     ("How many {0} are visible?", "How many {0} are we looking at?")),
    (re.compile(r"^Is there (.+)\?$"), ("Can you see {0}?",)),
    (re.compile(r"^Are there (.+)\?$"), ("Can you see {0}?",)),
    (re.compile(r"^Can you see (.+)\?$"), ("Is there {0}?",)),
    (re.compile(r"^What is (.+)\?$"), ("What's {0}?",)),
    (re.compile(r"^What's (.+)\?$"), ("What is {0}?",)),
)

# round-trip translation artifacts: dropped relative pronouns, verb swaps
_BACKTRANSLATE_RULES = (
    (re.compile(r"^Is (.+) wearing (.+)\?$"), ("Does {0} carry {1}?",)),
    (re.compile(r"^Is there (.+)\?$"), ("Does the image show {0}?",)),
    (re.compile(r"^Are there (.+)\?$"), ("Does the image show {0}?",)),
    (re.compile(r"^Where (is|are) (.+)\?$"), ("In which place {0} {1}?",)),
)

_REL_CLAUSE = re.compile(r"\b(\w+) who (?:is|are) ")


def _normalize(text: str) -> str:
    return re.sub(r"\s+", " ", text.strip().lower())


def builtin_rewrite(question: str, cfg: AugmentConfig) -> list:
    """Rule-table rewrites of one question, at most cfg.max_variants of them."""
    variants = []
    base = question
    if cfg.mode == "backtranslate":
        base = _REL_CLAUSE.sub(r"\1 ", question)
        if base != question:
            variants.append(base)
        rules = _BACKTRANSLATE_RULES
    else:
        rules = _PARAPHRASE_RULES
    for pattern, templates in rules:
        m = pattern.match(base)
        if m is None:
            continue
        for template in templates:
            variants.append(template.format(*m.groups()))
    seen = {_normalize(question)}
    unique = []
    for v in variants:
        norm = _normalize(v)
        if norm in seen:
            continue
        seen.add(norm)
        unique.append(v)
    if len(unique) > cfg.max_variants:
        rng = stream(cfg.seed, question, cfg.mode, "builtin")
        keep = sorted(rng.sample(range(len(unique)), cfg.max_variants))
        unique = [unique[i] for i in keep]
    return unique


# --- rewriter backends ------------------------------------------------------------


def _payload(req: RewriteRequest) -> dict:
    d = {"request_id": req.request_id, "text": req.text, "mode": req.mode}
    if req.pivot_language is not None:
        d["pivot_language"] = req.pivot_language
    return d


def _parse_response(d) -> RewriteResponse:
    try:
        return RewriteResponse(
            request_id=str(d["request_id"]),
            rewrites=[str(x) for x in d.get("rewrites", [])],
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise RewriterUnavailable(f"malformed rewriter response: {exc}") from exc


def _subprocess_backend(argv, batch, cfg):
    payload = "".join(json.dumps(_payload(r)) + "\n" for r in batch)
    try:
        proc = subprocess.run(
            argv, input=payload, capture_output=True, text=True, timeout=cfg.timeout_s
        )
    except (OSError, subprocess.TimeoutExpired) as exc:
        raise RewriterUnavailable(f"rewriter subprocess failed: {exc}") from exc
    if proc.returncode != 0:
        raise RewriterUnavailable(
            f"rewriter exited with status {proc.returncode}: {proc.stderr.strip()[:200]}"
        )
    responses = []
    for line in proc.stdout.splitlines():
        if not line.strip():
            continue
        try:
            d = json.loads(line)
        except json.JSONDecodeError as exc:
            raise RewriterUnavailable(f"rewriter wrote invalid JSON: {exc}") from exc
        responses.append(_parse_response(d))
    return responses


def _http_backend(url, batch, cfg):
    responses = []
    for req in batch:
        try:
            resp = requests.post(url, json=_payload(req), timeout=cfg.timeout_s)
            resp.raise_for_status()
            d = resp.json()
        except (requests.RequestException, ValueError) as exc:
            raise RewriterUnavailable(f"rewriter endpoint {url} failed: {exc}") from exc
        responses.append(_parse_response(d))
    return responses


def _resolve_backend(rewriter, cfg):
    if rewriter is None or rewriter == "builtin":
        return lambda batch: [
            RewriteResponse(r.request_id, builtin_rewrite(r.text, cfg)) for r in batch
        ]
    if callable(rewriter):
        return rewriter
    if isinstance(rewriter, str) and rewriter.startswith(("http://", "https://")):
        return lambda batch: _http_backend(rewriter, batch, cfg)
    if isinstance(rewriter, str):
        return lambda batch: _subprocess_backend(shlex.split(rewriter), batch, cfg)
    if isinstance(rewriter, (list, tuple)):
        return lambda batch: _subprocess_backend(list(rewriter), batch, cfg)
    raise MalformedInput(f"unusable rewriter specification: {rewriter!r}")


# --- augmentation -----------------------------------------------------------------


def _mentions(text: str, answer: str) -> bool:
    """True when the answer occurs in the text as a contiguous token run or
    via its head lemma."""
    t = _WORD_RE.findall(text.lower())
    a = _WORD_RE.findall(answer.lower())
    if not a:
        return False
    n = len(a)
    for i in range(len(t) - n + 1):
        if t[i:i + n] == a:
            return True
    return singularize(a[-1]) in {singularize(w) for w in t}


def augment_batch(pairs, rewriter, cfg: AugmentConfig) -> list:
    """Originals plus answer-consistent rewrites, in input order.

    Each accepted rewrite becomes a new pair carrying the same answer and a
    parent_id pointing at its source pair.
    """
    pairs = list(pairs)
    if not pairs:
        raise MalformedInput("augment_batch needs at least one pair")
    backend = _resolve_backend(rewriter, cfg)
    pivot = cfg.pivot_language if cfg.mode == "backtranslate" else None
    reqs = [
        RewriteRequest(
            request_id=p.qa_id, text=p.question, mode=cfg.mode, pivot_language=pivot
        )
        for p in pairs
    ]
    responses = {}
    for start in range(0, len(reqs), cfg.batch_size):
        batch = reqs[start:start + cfg.batch_size]
        try:
            got = backend(batch)
        except RewriterUnavailable:
            if not cfg.fallback:
                raise
            got = [
                RewriteResponse(r.request_id, builtin_rewrite(r.text, cfg)) for r in batch
            ]
        for resp in got:
            responses[resp.request_id] = resp

    out = []
    for pair in pairs:
        out.append(pair)
        resp = responses.get(pair.qa_id)
        if resp is None:
            continue
        rng = stream(cfg.seed, pair.qa_id, "augment-keep")
        base_mention = _mentions(pair.question, pair.answer)
        seen = {_normalize(pair.question)}
        ordinal = 0
        for rewrite in resp.rewrites:
            if ordinal >= cfg.max_variants:
                break
            norm = _normalize(rewrite)
            if not norm or norm in seen:
                continue
            seen.add(norm)
            if _mentions(rewrite, pair.answer) != base_mention:
                continue
            if rng.random() >= cfg.keep_probability:
                continue
            out.append(
                QAPair(
                    qa_id=derived_qa_id(pair.image_id, pair.qa_id, cfg.mode, ordinal),
                    image_id=pair.image_id,
                    question=rewrite,
                    answer=pair.answer,
                    answer_type=pair.answer_type,
                    source=cfg.mode,
                    source_caption=pair.source_caption,
                    parent_id=pair.qa_id,
                )
            )
            ordinal += 1
    return out
