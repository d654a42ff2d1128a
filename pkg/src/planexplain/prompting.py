"""Prompt template filling and pluggable text-generation backends."""

from __future__ import annotations

import hashlib
import os
import re
import time
from dataclasses import dataclass, field
from typing import Mapping, Protocol

from .domain import Profile, PromptCatalog, SCHEMA_VERSION


DEFAULT_TEMPLATE = """\
You are an assistant that explains task plans produced by an automated planner.

The reader is: <user_profile>

Explain the selected plan <level_of_detail>.
Use a <tone>.
Present the explanation <format>.

Problem context:
<problem_context>

Planner input:
<planner_input>

Selected plan:
<plan>
"""

HOLE_RE = re.compile(r"<([a-z_]+)>")


class TemplateError(ValueError):
    """A hole is missing from the template or has no content to fill it."""


class BackendError(RuntimeError):
    """Text generation failed; retriable by the caller."""


@dataclass(frozen=True)
class PromptContext:
    problem: str
    planner_input: str
    plan: str


def template_holes(template: str) -> list[str]:
    return HOLE_RE.findall(template)


def check_template(template: str, catalog: PromptCatalog) -> None:
    """Every hole appears exactly once and every catalog slot has a hole."""
    holes = template_holes(template)
    dupes = {h for h in holes if holes.count(h) > 1}
    if dupes:
        raise TemplateError(f"holes appear more than once: {sorted(dupes)}")
    for slot in catalog.slots:
        if slot.name not in holes:
            raise TemplateError(f"template missing hole <{slot.name}>")
    for fixed in ("user_profile", "problem_context", "planner_input", "plan"):
        if fixed not in holes:
            raise TemplateError(f"template missing hole <{fixed}>")


def fill(
    template: str,
    profile: Profile,
    catalog: PromptCatalog,
    choices: Mapping[int, int] | tuple[tuple[int, int], ...],
    context: PromptContext,
) -> str:
    """Replace every hole with its verbatim catalog or context text."""
    chosen = dict(choices if isinstance(choices, Mapping) else {p: q for p, q in choices})
    if sorted(chosen) != [s.index for s in catalog.slots]:
        raise TemplateError(f"choices must cover all slots, got {sorted(chosen)}")
    values = {
        "user_profile": profile.description,
        "problem_context": context.problem,
        "planner_input": context.planner_input,
        "plan": context.plan,
    }
    for slot in catalog.slots:
        values[slot.name] = catalog.option(slot.index, chosen[slot.index]).prompt_text
    for hole, text in values.items():
        if not text:
            raise TemplateError(f"no content for hole <{hole}>")
    filled = HOLE_RE.sub(lambda m: values.get(m.group(1), m.group(0)), template)
    leftover = [h for h in template_holes(filled) if h in values]
    if leftover:
        raise TemplateError(f"unreplaced holes: {leftover}")
    return filled


class GenerationBackend(Protocol):
    id: str

    def generate(self, prompt: str) -> str: ...


def mock_digest(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class MockBackend:
    """Deterministic backend: echoes the prompt under a stable digest header."""

    id: str = "mock"

    def generate(self, prompt: str) -> str:
        return f"[mock-explanation {mock_digest(prompt)}]\n{prompt}"


@dataclass(frozen=True)
class CannedBackend:
    """Returns a fixed text regardless of the prompt; for tests and dry runs."""

    text: str
    id: str = "canned"

    def generate(self, prompt: str) -> str:
        return self.text


@dataclass(frozen=True)
class HttpBackend:
    """Single-turn completion over HTTP; credentials come from the environment.

    Retries at most twice with exponential backoff, then surfaces the error.
    """

    endpoint: str
    model: str
    id: str = "http"
    api_key_env: str = "PLANEXPLAIN_API_KEY"
    timeout: float = 60.0
    max_retries: int = 2
    backoff: float = 1.0

    def generate(self, prompt: str) -> str:
        import httpx

        headers = {}
        key = os.environ.get(self.api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        payload = {"model": self.model, "prompt": prompt}
        last = None
        for attempt in range(self.max_retries + 1):
            try:
                resp = httpx.post(self.endpoint, json=payload, headers=headers, timeout=self.timeout)
                resp.raise_for_status()
                body = resp.json()
                return body["text"]
            except Exception as exc:  # noqa: BLE001 - diagnostics surface to caller
                last = exc
                if attempt < self.max_retries:
                    time.sleep(self.backoff * 2**attempt)
        raise BackendError(f"backend {self.id} failed after {self.max_retries + 1} attempts: {last}")


@dataclass(frozen=True)
class ExplanationRecord:
    id: str
    profile: int
    observation: tuple[int, ...]
    choices: tuple[tuple[int, int], ...]
    prompt: str
    backend: str
    explanation: str
    plan_id: str
    created_at: str
    ledger_sequence: int
    feedback: str | None = field(default=None)

    def to_dict(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "id": self.id,
            "profile": self.profile,
            "observation": list(self.observation),
            "choices": [list(pq) for pq in self.choices],
            "prompt": self.prompt,
            "backend": self.backend,
            "explanation": self.explanation,
            "plan_id": self.plan_id,
            "created_at": self.created_at,
            "ledger_sequence": self.ledger_sequence,
            "feedback": self.feedback,
        }
