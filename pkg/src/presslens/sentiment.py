"""Targeted sentiment classification: prompts, label parsing, and model backends.

The HTTP backend speaks a chat-completions-style JSON POST (wire schema v1,
see README): {"model", "messages": [{"role", "content"}], "temperature",
"max_tokens"} with the assistant text at choices[0].message.content. The mock
backend is a deterministic cue-lemma oracle used for tests and offline runs.
"""

from __future__ import annotations

import json
import logging
import os
import re
import threading
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Sequence

import requests

from .mentions import TARGET_CLOSE, TARGET_OPEN

log = logging.getLogger(__name__)

FEW_SHOT_PLACEHOLDER = "{{few_shot}}"
CONTEXT_PLACEHOLDER = "{{context}}"

RETRY_BASE_SECONDS = 1.0
RETRY_FACTOR = 2.0


class TemplateError(ValueError):
    pass


class BackendError(RuntimeError):
    pass


class SentimentLabel(Enum):
    POSITIVE = "+"
    NEGATIVE = "-"
    NEUTRAL = "0"

    @classmethod
    def parse(cls, symbol: str) -> "SentimentLabel":
        return cls(symbol)


@dataclass(frozen=True)
class TaskInstance:
    """One classification task: a mention with its tagged context window."""

    mention_id: str
    rendered: str
    identity: str
    category: str

    def __post_init__(self) -> None:
        if self.rendered.count(TARGET_OPEN) != 1 or self.rendered.count(TARGET_CLOSE) != 1:
            raise ValueError(
                f"instance {self.mention_id}: rendered context must contain exactly one tagged target"
            )


@dataclass(frozen=True)
class PromptTemplate:
    """Instruction text with {{few_shot}} and {{context}} placeholders.

    Few-shot examples render as "context\\nlabel" blocks separated by blank
    lines, in list order, substituted for {{few_shot}}.
    """

    template: str
    few_shot: tuple[tuple[str, SentimentLabel], ...] = ()

    def __post_init__(self) -> None:
        for placeholder in (FEW_SHOT_PLACEHOLDER, CONTEXT_PLACEHOLDER):
            count = self.template.count(placeholder)
            if count != 1:
                raise TemplateError(f"template must contain {placeholder} exactly once, found {count}")


def load_template(path) -> PromptTemplate:
    """Load a template JSON file: {"template": str, "few_shot": [[context, symbol], ...]}."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    few_shot = tuple(
        (context, SentimentLabel.parse(symbol)) for context, symbol in data.get("few_shot", [])
    )
    return PromptTemplate(data["template"], few_shot)


def render_prompt(instance: TaskInstance, template: PromptTemplate) -> str:
    few_shot_text = "\n\n".join(f"{context}\n{label.value}" for context, label in template.few_shot)
    return template.template.replace(FEW_SHOT_PLACEHOLDER, few_shot_text).replace(
        CONTEXT_PLACEHOLDER, instance.rendered
    )


# First match in the string wins; at equal positions the alternation order
# (standalone symbol, Slovene word, English word) decides.
_LABEL_RE = re.compile(
    r"(?<![\w+-])(?P<sym>[+\-0])(?![\w+-])"
    r"|\b(?P<slo>pozitivno|negativno|nevtralno)\b"
    r"|\b(?P<eng>positive|negative|neutral)\b",
    re.IGNORECASE,
)

_WORD_LABELS = {
    "pozitivno": SentimentLabel.POSITIVE,
    "negativno": SentimentLabel.NEGATIVE,
    "nevtralno": SentimentLabel.NEUTRAL,
    "positive": SentimentLabel.POSITIVE,
    "negative": SentimentLabel.NEGATIVE,
    "neutral": SentimentLabel.NEUTRAL,
}


def parse_label(raw: str) -> SentimentLabel | None:
    """Extract the first sentiment label from model output; None when absent."""
    match = _LABEL_RE.search(raw)
    if match is None:
        return None
    if match.group("sym") is not None:
        return SentimentLabel(match.group("sym"))
    word = (match.group("slo") or match.group("eng")).lower()
    return _WORD_LABELS[word]


@dataclass(frozen=True)
class SentimentPrediction:
    mention_id: str
    label: SentimentLabel | None
    raw_output: str
    backend: str
    parse_ok: bool

    def __post_init__(self) -> None:
        if self.parse_ok != (self.label is not None):
            raise ValueError("parse_ok must mirror label presence")


@dataclass(frozen=True)
class BackendConfig:
    """Connection and decoding settings for a classification backend."""

    kind: str
    base_url: str | None = None
    model: str | None = None
    temperature: float = 0.0
    max_output_tokens: int = 16
    timeout: float = 30.0
    max_retries: int = 5
    max_concurrency: int = 4
    api_key_env: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("http", "mock"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.kind == "http" and not (self.base_url and self.model):
            raise ValueError("http backend requires base_url and model")

    @property
    def name(self) -> str:
        return self.model if self.model else self.kind


@dataclass(frozen=True)
class CueRules:
    """Disjoint positive/negative cue word sets for the mock backend."""

    positive: frozenset[str]
    negative: frozenset[str]

    def __post_init__(self) -> None:
        overlap = self.positive & self.negative
        if overlap:
            raise ValueError(f"cue sets overlap: {sorted(overlap)}")

    @classmethod
    def from_file(cls, path) -> "CueRules":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls(
            positive=frozenset(w.lower() for w in data.get("positive", [])),
            negative=frozenset(w.lower() for w in data.get("negative", [])),
        )


def _window_words(rendered: str) -> list[str]:
    plain = rendered.replace(TARGET_OPEN, "").replace(TARGET_CLOSE, "")
    return plain.lower().split()


def mock_classify(instance: TaskInstance, rules: CueRules) -> SentimentLabel:
    """Negative beats positive beats neutral, by cue word presence in the window."""
    words = _window_words(instance.rendered)
    if any(w in rules.negative for w in words):
        return SentimentLabel.NEGATIVE
    if any(w in rules.positive for w in words):
        return SentimentLabel.POSITIVE
    return SentimentLabel.NEUTRAL


class MockBackend:
    """Deterministic rule backend; returns the bare label symbol."""

    def __init__(self, rules: CueRules):
        self.rules = rules
        self.calls = 0

    def run(self, instance: TaskInstance, prompt: str) -> str:
        self.calls += 1
        return mock_classify(instance, self.rules).value


class HttpBackend:
    """Chat-completions client with exponential backoff retries."""

    def __init__(
        self,
        config: BackendConfig,
        session: requests.Session | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.config = config
        self.session = session or requests.Session()
        self._sleep = sleep
        self._headers = {"Content-Type": "application/json"}
        if config.api_key_env:
            key = os.environ.get(config.api_key_env)
            if not key:
                raise BackendError(f"environment variable {config.api_key_env} is not set")
            self._headers["Authorization"] = f"Bearer {key}"

    def run(self, instance: TaskInstance, prompt: str) -> str:
        payload = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_output_tokens,
        }
        delay = RETRY_BASE_SECONDS
        last_error: Exception | None = None
        for attempt in range(self.config.max_retries + 1):
            if attempt:
                self._sleep(delay)
                delay *= RETRY_FACTOR
            try:
                response = self.session.post(
                    self.config.base_url,
                    json=payload,
                    headers=self._headers,
                    timeout=self.config.timeout,
                )
            except requests.RequestException as exc:
                last_error = exc
                continue
            if response.status_code >= 500 or response.status_code == 429:
                last_error = BackendError(f"HTTP {response.status_code}")
                continue
            if response.status_code != 200:
                raise BackendError(f"HTTP {response.status_code}: {response.text[:200]}")
            try:
                return response.json()["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise BackendError(f"malformed response body: {exc}") from None
        raise BackendError(f"request failed after {self.config.max_retries + 1} attempts: {last_error}")


def make_backend(config: BackendConfig, cue_rules: CueRules | None = None):
    if config.kind == "mock":
        if cue_rules is None:
            raise ValueError("mock backend requires cue rules")
        return MockBackend(cue_rules)
    return HttpBackend(config)


class CheckpointStore:
    """Resumable prediction store: append-only JSONL plus a sorted id list.

    Each completed prediction is appended to predictions.jsonl and the
    completed-ids file is atomically rewritten, so an interrupted run can
    resume without re-querying finished mentions.
    """

    IDS_FILE = "completed.txt"
    PREDICTIONS_FILE = "predictions.jsonl"

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._done: dict[str, SentimentPrediction] = {}
        pred_path = self.directory / self.PREDICTIONS_FILE
        if pred_path.exists():
            with open(pred_path, encoding="utf-8") as fh:
                for prediction in read_predictions(fh):
                    self._done[prediction.mention_id] = prediction

    def completed(self) -> dict[str, SentimentPrediction]:
        return dict(self._done)

    def record(self, prediction: SentimentPrediction) -> None:
        with self._lock:
            if prediction.mention_id in self._done:
                return
            self._done[prediction.mention_id] = prediction
            with open(self.directory / self.PREDICTIONS_FILE, "a", encoding="utf-8") as fh:
                fh.write(prediction_to_json(prediction))
                fh.write("\n")
            tmp = self.directory / (self.IDS_FILE + ".tmp")
            with open(tmp, "w", encoding="utf-8") as fh:
                for mention_id in sorted(self._done):
                    fh.write(mention_id)
                    fh.write("\n")
            tmp.replace(self.directory / self.IDS_FILE)


def classify_batch(
    instances: Sequence[TaskInstance],
    config: BackendConfig,
    template: PromptTemplate,
    cue_rules: CueRules | None = None,
    checkpoint: CheckpointStore | None = None,
    backend=None,
) -> list[SentimentPrediction]:
    """Classify every instance, one prediction each, in input order.

    Failed requests (after the backend's retries) become parse_ok=False
    predictions carrying the error text; they never abort the batch. With a
    checkpoint store, instances already completed are not re-queried.
    """
    if backend is None:
        backend = make_backend(config, cue_rules)
    done = checkpoint.completed() if checkpoint is not None else {}
    pending = [inst for inst in instances if inst.mention_id not in done]

    def classify_one(instance: TaskInstance) -> SentimentPrediction:
        prompt = render_prompt(instance, template)
        try:
            raw = backend.run(instance, prompt)
        except BackendError as exc:
            return SentimentPrediction(instance.mention_id, None, f"error: {exc}", config.name, False)
        label = parse_label(raw)
        return SentimentPrediction(instance.mention_id, label, raw, config.name, label is not None)

    results: dict[str, SentimentPrediction] = dict(done)
    if config.kind == "http" and config.max_concurrency > 1 and len(pending) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=config.max_concurrency) as pool:
            for prediction in pool.map(classify_one, pending):
                results[prediction.mention_id] = prediction
                if checkpoint is not None:
                    checkpoint.record(prediction)
    else:
        for instance in pending:
            prediction = classify_one(instance)
            results[prediction.mention_id] = prediction
            if checkpoint is not None:
                checkpoint.record(prediction)
    return [results[inst.mention_id] for inst in instances]


def prediction_to_json(prediction: SentimentPrediction) -> str:
    return json.dumps(
        {
            "mention_id": prediction.mention_id,
            "label": prediction.label.value if prediction.label else None,
            "raw_output": prediction.raw_output,
            "backend": prediction.backend,
            "parse_ok": prediction.parse_ok,
        },
        ensure_ascii=False,
    )


def write_predictions(predictions: Iterable[SentimentPrediction], fh) -> None:
    for prediction in predictions:
        fh.write(prediction_to_json(prediction))
        fh.write("\n")


def read_predictions(lines: Iterable[str]) -> Iterable[SentimentPrediction]:
    for line in lines:
        if not line.strip():
            continue
        record = json.loads(line)
        label = SentimentLabel(record["label"]) if record["label"] is not None else None
        yield SentimentPrediction(
            mention_id=record["mention_id"],
            label=label,
            raw_output=record["raw_output"],
            backend=record["backend"],
            parse_ok=record["parse_ok"],
        )


def read_predictions_file(path) -> list[SentimentPrediction]:
    with open(path, encoding="utf-8") as fh:
        return list(read_predictions(fh))
