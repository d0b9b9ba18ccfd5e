"""From finite simplicial sets to minimal models and a rational homotopy verdict."""

from __future__ import annotations

from dataclasses import dataclass, field

from .dga import FreeDga
from .iso import verdict_json
from .minmodel import (
    AuditReport,
    InternalConsistencyError,
    ModelState,
    apl_presentation,
    audit_stage,
    base_stage,
    extend_stage,
    kernel_killers,
    new_cocycle_generators,
)
from .simplicial import FiniteSimplicialSet, validate

__all__ = [
    "InputError",
    "Verdict",
    "ModelRun",
    "comparison_degree",
    "minimal_model_of_space",
    "model_run",
    "decide_rhe",
]

SIMPLY_CONNECTED_NOTE = (
    "simple connectivity cannot be decided from the data (pi_1 may be perfect); "
    "pass --assert-simply-connected (assert_simply_connected=True) to state it as a hypothesis"
)


class InputError(ValueError):
    """The input is rejected before any model is built."""


@dataclass
class ModelRun:
    state: ModelState
    audits: list[AuditReport] = field(default_factory=list)


@dataclass
class Verdict:
    answer: str  # "Equivalent" | "NotEquivalent" | "Unknown"
    evidence: dict
    models: dict
    d: int

    def to_json(self) -> dict:
        return {"answer": self.answer, "d": self.d, "evidence": self.evidence, "models": self.models}


def comparison_degree(*spaces: FiniteSimplicialSet) -> int:
    """``max(dim)`` over the inputs, at least 2 (the first generator degree)."""
    return max([2] + [X.dim for X in spaces])


def _accept(X: FiniteSimplicialSet, assert_simply_connected: bool):
    if not assert_simply_connected:
        raise InputError(SIMPLY_CONNECTED_NOTE)
    problems = validate(X)
    if problems:
        raise InputError("invalid simplicial set: " + "; ".join(problems[:5]))
    P = apl_presentation(X)
    try:
        P.check_simply_connected()
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return P


def model_run(X: FiniteSimplicialSet, d: int, assert_simply_connected: bool = False) -> ModelRun:
    """Stage-``d`` minimal model with the cohomology audit of every stage."""
    if d < 2:
        raise InputError("the model degree must be at least 2")
    P = _accept(X, assert_simply_connected)
    state = base_stage(P)
    audits = [audit_stage(state, P)]
    while state.stage < d:
        state = extend_stage(state, new_cocycle_generators(state, P), kernel_killers(state, P))
        audits.append(audit_stage(state, P))
    bad = [a for a in audits if not a.passed]
    if bad:
        raise InternalConsistencyError(str(bad[0]))
    return ModelRun(state, audits)


def minimal_model_of_space(X: FiniteSimplicialSet, d: int, assert_simply_connected: bool = False) -> ModelState:
    return model_run(X, d, assert_simply_connected).state


def decide_rhe(X: FiniteSimplicialSet, Y: FiniteSimplicialSet, budget: int = 10000,
               d: int | None = None, assert_simply_connected: bool = False) -> Verdict:
    """Compare the stage-``d`` minimal models of ``X`` and ``Y``.

    ``d`` defaults to :func:`comparison_degree`; a larger value is allowed.
    """
    d0 = comparison_degree(X, Y)
    if d is None:
        d = d0
    elif d < d0:
        raise InputError(f"degree {d} is below max(dim X, dim Y) = {d0}")
    MX = minimal_model_of_space(X, d, assert_simply_connected).model
    MY = minimal_model_of_space(Y, d, assert_simply_connected).model
    models = {"X": _model_json(MX, d), "Y": _model_json(MY, d)}
    v = verdict_json(MX, MY, budget)
    answer = {"iso": "Equivalent", "no": "NotEquivalent", "unknown": "Unknown"}[v["verdict"]]
    return Verdict(answer, v, models, d)


def _model_json(M: FreeDga, d: int) -> dict:
    data = M.to_json()
    data["stage"] = d
    return data
