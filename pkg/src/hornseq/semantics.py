"""Model-theoretic and fixpoint semantics of Horn programs.

The van Emden-Kowalski operator ``T_P`` maps an interpretation to the heads
of the rules whose bodies it satisfies.  Models are its prefixed points,
supported models its fixed points, and the least model is the limit of
iterating it from the empty interpretation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Union

from .errors import AlphabetError, BoundExceededError, InternalError
from .syntax import Alphabet, Atom, Program, Rule

#: Exhaustive interpretation sweeps cost 2^|A|; refuse above this by default.
DEFAULT_SWEEP_CAP = 20


def entails(i, target: Union[Atom, Rule, Program, frozenset]) -> bool:
    """The inductive entailment relation ``I |= target``.

    Atoms must be members, atom sets must be subsets, a rule holds when its
    satisfied body forces its head, and a program holds rule by rule.
    """
    iset = frozenset(i)
    if isinstance(target, Atom):
        return target in iset
    if isinstance(target, Rule):
        return not target.body <= iset or target.head in iset
    if isinstance(target, Program):
        return all(entails(iset, r) for r in target.rules)
    return frozenset(target) <= iset


def tp(p: Program, i) -> frozenset:
    """One step of the van Emden-Kowalski operator."""
    iset = frozenset(i)
    return frozenset(r.head for r in p.rules if r.body <= iset)


def is_model(p: Program, i) -> bool:
    """``I`` is a model of ``P`` iff it is a prefixed point of ``T_P``."""
    return tp(p, i) <= frozenset(i)


@dataclass(frozen=True)
class FixpointTrace:
    """Stages of the bottom-up fixpoint computation, starting from {}.

    ``stages[converged_at + 1] == stages[converged_at]``.
    """

    stages: tuple
    converged_at: int


def least_model(p: Program, a: Alphabet) -> tuple:
    """The least model of ``p`` with its fixpoint trace.

    ``T_P`` is monotone on Horn programs, so the chain from the empty
    interpretation grows at most ``|A|`` times before stabilizing; failing
    to converge within that bound is an internal error.
    """
    if not a.covers(p.atoms):
        raise AlphabetError(f"program atoms escape alphabet {a!r}")
    stages = [frozenset()]
    for _ in range(len(a) + 1):
        nxt = tp(p, stages[-1])
        stages.append(nxt)
        if nxt == stages[-2]:
            return nxt, FixpointTrace(tuple(stages), len(stages) - 2)
    raise InternalError("fixpoint iteration did not converge")


def _subsets(atoms: tuple):
    for k in range(len(atoms) + 1):
        for c in combinations(atoms, k):
            yield frozenset(c)


def enumerate_models(
    p: Program, a: Alphabet, kind: str = "all", cap: int = DEFAULT_SWEEP_CAP
) -> frozenset:
    """All models (prefixed points) or supported models (fixed points) over ``a``."""
    if kind not in ("all", "supported"):
        raise ValueError(f"kind must be 'all' or 'supported', got {kind!r}")
    if len(a) > cap:
        raise BoundExceededError(
            f"alphabet size {len(a)} exceeds sweep cap {cap}"
        )
    if not a.covers(p.atoms):
        raise AlphabetError(f"program atoms escape alphabet {a!r}")
    supported = kind == "supported"
    out = []
    for i in _subsets(a.atoms):
        t = tp(p, i)
        if (t == i) if supported else (t <= i):
            out.append(i)
    return frozenset(out)


def subsumption_equivalent(
    p: Program, r: Program, a: Alphabet, cap: int = DEFAULT_SWEEP_CAP
) -> bool:
    """Whether ``T_P`` and ``T_R`` agree on every interpretation over ``a``."""
    if len(a) > cap:
        raise BoundExceededError(
            f"alphabet size {len(a)} exceeds sweep cap {cap}"
        )
    if not a.covers(p.atoms | r.atoms):
        raise AlphabetError(f"program atoms escape alphabet {a!r}")
    return all(tp(p, i) == tp(r, i) for i in _subsets(a.atoms))
