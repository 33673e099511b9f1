"""Sequential composition of Horn programs and the operators built on it.

Composition resolves every body atom of a left-hand rule against the heads
of right-hand rules and unions the selected bodies:

    P o R = { h(q) <- b1 | ... | bk  :  q in P,
              one rule with head ai and body bi chosen from R
              for every body atom ai of q }

Facts pass through composition unchanged.  The unit program ``1_A = {a <- a}``
is a two-sided identity and the empty program is a left zero.  Composition is
right-distributive over union but not left-distributive and not associative.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import AlphabetError, InternalError
from .syntax import Alphabet, Program, Rule, as_interpretation


def _require_covers(a: Alphabet, *operands) -> None:
    for x in operands:
        atoms = x.atoms if isinstance(x, Program) else x
        if not a.covers(atoms):
            missing = sorted(set(atoms) - a.as_set())
            raise AlphabetError(
                f"atoms outside alphabet {a!r}: {', '.join(m.name for m in missing)}"
            )


def compose(p: Program, r: Program) -> Program:
    """The sequential composition ``p o r``.

    Selecting one rule of ``r`` per body atom realizes exactly the subsets
    S of ``r`` with |S| <= size(q) whose heads cover the body of ``q``: the
    head sets of smaller S cannot cover the body, so S is forced to pick one
    rule per body atom.
    """
    by_head = r.bodies_by_head()
    out = []
    for q in p.sorted_rules:
        if not q.body:
            out.append(q)  # facts admit only the empty selection
            continue
        options = []
        for b in sorted(q.body):
            bodies = by_head.get(b)
            if not bodies:
                break
            options.append(bodies)
        else:
            for combo in product(*options):
                out.append(Rule(q.head, frozenset().union(*combo)))
    return Program(out)


def unit(a: Alphabet) -> Program:
    """The unit program ``{x <- x | x in A}``, the identity for composition."""
    return Program(Rule(x, frozenset((x,))) for x in a)


def partial_unit(i) -> Program:
    """``{x <- x | x in I}`` for an interpretation ``I``."""
    return Program(Rule(x, frozenset((x,))) for x in i)


def dual(p: Program) -> Program:
    """Facts kept; every proper rule's arrows reversed body-atom-wise."""
    out = list(p.facts)
    for q in p.proper:
        out.extend(Rule(b, frozenset((q.head,))) for b in q.body)
    return Program(out)


def split(p: Program) -> tuple:
    """Partition into (facts, proper rules); facts also equal ``p o {}``."""
    return p.facts, p.proper


def heads_bodies(p: Program, a: Alphabet) -> tuple:
    """The head atoms and body atoms of ``p`` as interpretations."""
    _require_covers(a, p)
    return p.heads, p.bodies


def power(p: Program, n: int, a: Alphabet) -> Program:
    """Left-associated n-fold composition; ``power(p, 0, a)`` is the unit."""
    if n < 0:
        raise ValueError(f"negative power: {n}")
    _require_covers(a, p)
    if n == 0:
        return unit(a)
    acc = p
    for _ in range(n - 1):
        acc = compose(acc, p)
    return acc


@dataclass(frozen=True)
class PowerTrace:
    """The power sequence P, P^2, ... up to its first repetition.

    ``powers[cycle_start + cycle_length] == powers[cycle_start]`` and all
    earlier entries are pairwise distinct.
    """

    powers: tuple
    cycle_start: int
    cycle_length: int


def power_trace(p: Program, a: Alphabet) -> PowerTrace:
    """Iterate ``P^(k+1) = P^k o P`` until a power repeats.

    The sequence lives in the finite space of programs over ``a``, so it is
    eventually periodic; the pigeonhole cap is a defensive internal check.
    """
    _require_covers(a, p)
    cap = 2 ** (len(a) * 2 ** len(a)) + 1
    index: dict = {}
    powers = []
    cur = p
    while cur not in index:
        if len(powers) > cap:
            raise InternalError("power sequence failed to cycle within bound")
        index[cur] = len(powers)
        powers.append(cur)
        cur = compose(cur, p)
    powers.append(cur)
    cycle_start = index[cur]
    return PowerTrace(tuple(powers), cycle_start, len(powers) - 1 - cycle_start)


def star(p: Program, a: Alphabet) -> Program:
    """Kleene star: the union of all powers, including ``P^0 = 1_A``."""
    acc = unit(a)
    for q in power_trace(p, a).powers:
        acc = acc | q
    return acc


def plus(p: Program, a: Alphabet) -> Program:
    """Kleene plus ``P^* o P``."""
    return compose(star(p, a), p)


def omega(p: Program, a: Alphabet) -> frozenset:
    """The facts of ``P^+`` as an interpretation; coincides with the least model."""
    return as_interpretation(plus(p, a).facts)


def build_ominus(i, a: Alphabet) -> Program:
    """Right-composition gadget deleting the atoms of ``i`` from rule bodies.

    ``p o build_ominus(i, a) == {h(q) <- b(q) - i | q in p}``.
    """
    _require_covers(a, i)
    iset = frozenset(i)
    out = [Rule(x, frozenset((x,))) for x in a if x not in iset]
    out.extend(Rule(x) for x in iset)
    return Program(out)


def build_oplus(i, a: Alphabet) -> Program:
    """Right-composition gadget inserting the atoms of ``i`` into proper-rule bodies.

    ``p o build_oplus(i, a) == facts(p) | {h(q) <- b(q) | i | q in proper(p)}``.
    """
    _require_covers(a, i)
    iset = frozenset(i)
    return Program(Rule(x, iset | {x}) for x in a)


def left_reduct(i, p: Program) -> Program:
    """Rules of ``p`` whose head lies in ``i``; equals ``1^I o p``."""
    iset = frozenset(i)
    return Program(r for r in p.rules if r.head in iset)


def right_reduct(p: Program, i) -> Program:
    """Rules of ``p`` whose body is contained in ``i``; equals ``p o 1^I``."""
    iset = frozenset(i)
    return Program(r for r in p.rules if r.body <= iset)
