"""Decision procedures, with witnesses, for the Green-style relations
induced by sequential composition:

    P <=L R  iff  P = Q o R            (prefix Q)
    P <=R R  iff  P = R o S            (suffix S)
    P <=J R  iff  P = (Q o R) o S      (left-bracketed; composition is not
                                        associative, brackets matter)

``<=L`` is decided by a closed-form canonical prefix.  ``<=R`` and ``<=J``
run constructive per-rule searches over restricted witness shapes with a
global re-verification of the assembled witness; a brute-force oracle over
tiny alphabets supplies ground truth, a fallback for failed searches, and a
discrepancy report whenever a decision procedure and the oracle disagree.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Optional

import numpy as np

from .algebra import compose, unit
from .dense import DenseSpace
from .errors import AlphabetError, BoundExceededError
from .semantics import DEFAULT_SWEEP_CAP, least_model, subsumption_equivalent
from .syntax import (
    Alphabet,
    Program,
    Rule,
    all_programs,
    infer_alphabet,
    render_rule,
)

#: Brute-force enumeration of 2^(n * 2^n) candidate programs; 2 atoms = 256.
ORACLE_MAX_ATOMS = 2

#: Abort constructive searches after this many DFS nodes.
SEARCH_NODE_CAP = 200_000

_RELATIONS = {"l": "L", "r": "R", "j": "J"}


def _norm_rel(relation: str) -> str:
    rel = _RELATIONS.get(str(relation).lower())
    if rel is None:
        raise ValueError(f"unknown relation {relation!r} (expected l, r or j)")
    return rel


@dataclass(frozen=True)
class GreenWitness:
    """Outcome of a relation query, with certifying programs when it holds.

    ``decided=False`` marks a bounded-incomplete outcome: the search space
    was cut off above the oracle bound and neither verdict is claimed.
    """

    relation: str  # 'L' | 'R' | 'J'
    holds: bool
    prefix: Optional[Program] = None
    suffix: Optional[Program] = None
    method: str = "canonical"  # 'canonical' | 'search' | 'oracle'
    decided: bool = True

    def verify(self, p: Program, r: Program) -> bool:
        """Re-check the certified equation by direct composition."""
        if not (self.holds and self.decided):
            return False
        if self.relation == "L":
            return self.prefix is not None and compose(self.prefix, r) == p
        if self.relation == "R":
            return self.suffix is not None and compose(r, self.suffix) == p
        if self.prefix is None or self.suffix is None:
            return False
        return compose(compose(self.prefix, r), self.suffix) == p


@dataclass(frozen=True)
class Discrepancy:
    """A decision procedure and the brute-force oracle disagreed."""

    relation: str
    p: Program
    r: Program
    procedure_verdict: bool
    oracle_verdict: bool

    def describe(self) -> str:
        return (
            f"theorem-discrepancy[{self.relation}] "
            f"procedure={self.procedure_verdict} oracle={self.oracle_verdict} "
            f"p=<{' '.join(render_rule(x) for x in self.p) or '%'}> "
            f"r=<{' '.join(render_rule(x) for x in self.r) or '%'}>"
        )


class TheoremDiscrepancyWarning(UserWarning):
    """Raised as a warning when a search misses a witness the oracle finds."""


def _warn_discrepancy(disc: Discrepancy) -> None:
    warnings.warn(disc.describe(), TheoremDiscrepancyWarning, stacklevel=3)


# ---------------------------------------------------------------------------
# canonical prefix and the L-relation


@lru_cache(maxsize=200_000)
def _single_rule_compose(rule: Rule, r: Program) -> Program:
    return compose(Program((rule,)), r)


@lru_cache(maxsize=100_000)
def _prefix_head_options(r: Program, body: frozenset) -> tuple:
    """Head sets h(S) over subsets S of r with |S| <= |body| and b(S) = body."""
    candidates = [q for q in r if q.body <= body]
    out, seen = [], set()
    for size in range(len(body) + 1):
        for combo in combinations(candidates, size):
            covered = frozenset().union(*(q.body for q in combo)) if combo else frozenset()
            if covered != body:
                continue
            heads = frozenset(q.head for q in combo)
            if heads not in seen:
                seen.add(heads)
                out.append(heads)
    return tuple(out)


def canonical_prefix(p: Program, r: Program) -> Program:
    """The canonical prefix Q deciding ``p <=L r``: p <=L r iff Q o r == p.

    Q collects every rule ``h(q) <- h(S)`` where S ranges over subsets of r
    (at most |b(q)| rules) whose bodies union to b(q), filtered to rules
    whose own composition with r stays inside p.
    """
    out = []
    for q in p:
        for heads in _prefix_head_options(r, q.body):
            cand = Rule(q.head, heads)
            if _single_rule_compose(cand, r).issubset(p):
                out.append(cand)
    return Program(out)


def le_l(p: Program, r: Program) -> GreenWitness:
    """Decide ``p <=L r`` via the canonical prefix; no search involved."""
    q = canonical_prefix(p, r)
    if compose(q, r) == p:
        return GreenWitness("L", True, prefix=q, method="canonical")
    return GreenWitness("L", False, method="canonical")


# ---------------------------------------------------------------------------
# restricted suffix search and the R-relation


@lru_cache(maxsize=10_000)
def _sorted_subsets(atoms: frozenset) -> tuple:
    """All subsets in canonical order (sorted name tuples)."""
    items = sorted(atoms)
    subs = []
    for k in range(len(items) + 1):
        subs.extend(frozenset(c) for c in combinations(items, k))
    subs.sort(key=lambda s: tuple(sorted(a.name for a in s)))
    return tuple(subs)


def _cover_assignments(slots: tuple, target: frozenset):
    """Assign each slot atom a subset of target so the union equals target."""
    subsets = _sorted_subsets(target)
    chosen: list = []

    def rec(i: int, covered: frozenset):
        if i == len(slots):
            if covered == target:
                yield tuple(chosen)
            return
        last = i == len(slots) - 1
        for sub in subsets:
            if last and covered | sub != target:
                continue
            chosen.append((slots[i], sub))
            yield from rec(i + 1, covered | sub)
            chosen.pop()

    yield from rec(0, frozenset())


def _suffix_candidates(p: Program, r: Program, q: Rule) -> tuple:
    """Per-rule suffix programs S_q with {s} o S_q == {q} and r o S_q <= p.

    S_q carries exactly one rule per body atom of the matched rule s of r,
    which is the shape a successful decomposition can always be thinned to.
    """
    out, seen = [], set()
    for s in r:
        if s.head != q.head:
            continue
        if s.is_fact:
            if s == q:
                empty = Program()
                if empty not in seen:
                    seen.add(empty)
                    out.append(empty)
            continue
        for assignment in _cover_assignments(tuple(sorted(s.body)), q.body):
            cand = Program(Rule(x, b) for x, b in assignment)
            if cand in seen:
                continue
            seen.add(cand)
            if compose(r, cand).issubset(p):
                out.append(cand)
    return tuple(out)


class _NodeCapExceeded(Exception):
    pass


def suffix_search(
    p: Program, r: Program, node_cap: int = SEARCH_NODE_CAP
) -> tuple:
    """Search for S with ``r o S == p`` from per-rule candidates.

    Returns ``(suffix | None, exhausted)``; ``exhausted`` is False when the
    node cap interrupted the combination search.
    """
    if not p.heads <= r.heads:
        return None, True  # heads can only shrink under right composition
    cand_lists = []
    for q in p:
        cands = _suffix_candidates(p, r, q)
        if not cands:
            return None, True
        cand_lists.append(cands)
    cand_lists.sort(key=len)  # fail fast on the most constrained rules

    nodes = 0
    subset_cache: dict = {}
    failed: set = set()

    def contained(acc: Program) -> bool:
        res = subset_cache.get(acc)
        if res is None:
            res = compose(r, acc).issubset(p)
            subset_cache[acc] = res
        return res

    def dfs(i: int, acc: Program):
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise _NodeCapExceeded
        if not contained(acc):
            return None
        if i == len(cand_lists):
            return acc if compose(r, acc) == p else None
        for cand in cand_lists[i]:
            nxt = acc | cand
            key = (i + 1, nxt)
            if key in failed:
                continue
            res = dfs(i + 1, nxt)
            if res is not None:
                return res
            failed.add(key)
        return None

    try:
        return dfs(0, Program()), True
    except _NodeCapExceeded:
        return None, False


def le_r(p: Program, r: Program, alphabet: Optional[Alphabet] = None) -> GreenWitness:
    """Decide ``p <=R r`` by restricted search, falling back to the oracle."""
    suffix, exhausted = suffix_search(p, r)
    if suffix is not None:
        return GreenWitness("R", True, suffix=suffix, method="search")
    a = alphabet if alphabet is not None else infer_alphabet([p, r])
    if len(a) <= ORACLE_MAX_ATOMS:
        found = oracle_suffix(p, r, a)
        if found is None:
            return GreenWitness("R", False, method="search" if exhausted else "oracle")
        _warn_discrepancy(Discrepancy("R", p, r, False, True))
        return GreenWitness("R", True, suffix=found, method="oracle")
    if not p.heads <= r.heads:
        return GreenWitness("R", False, method="search")
    if r.is_interpretation:
        # r o S == r for every S, so only r itself sits below r
        return GreenWitness("R", False, method="search")
    return GreenWitness("R", False, method="search", decided=False)


# ---------------------------------------------------------------------------
# per-rule constructive search for the J-relation


def _j_candidates(p: Program, r: Program, q: Rule) -> tuple:
    """Per-rule pairs (s_q, S_q) with ({s_q} o W) o S_q == {q} for a
    one-rule-per-atom selection W from r, and ({s_q} o r) o S_q <= p."""
    out, seen = [], set()
    by_head = r.bodies_by_head()
    for bq in _sorted_subsets(frozenset(r.heads)):
        s_q = Rule(q.head, bq)
        if not bq:
            if q == s_q:
                key = (s_q, Program())
                if key not in seen:
                    seen.add(key)
                    out.append(key)
            continue
        sr = _single_rule_compose(s_q, r)
        atoms = sorted(bq)
        for combo in product(*(by_head[x] for x in atoms)):
            t_body = frozenset().union(*combo)
            if not t_body:
                # the selection image is already a fact
                if q.is_fact:
                    key = (s_q, Program())
                    if key not in seen:
                        seen.add(key)
                        if compose(sr, Program()).issubset(p):
                            out.append(key)
                continue
            for assignment in _cover_assignments(tuple(sorted(t_body)), q.body):
                cand = Program(Rule(x, b) for x, b in assignment)
                key = (s_q, cand)
                if key in seen:
                    continue
                seen.add(key)
                if compose(sr, cand).issubset(p):
                    out.append(key)
    return tuple(out)


def _j_search(p: Program, r: Program, node_cap: int = SEARCH_NODE_CAP) -> tuple:
    """Search for (Q, S) with ``(Q o r) o S == p``; same contract as
    :func:`suffix_search`."""
    cand_lists = []
    for q in p:
        cands = _j_candidates(p, r, q)
        if not cands:
            return None, True
        cand_lists.append(cands)
    cand_lists.sort(key=len)  # fail fast on the most constrained rules

    nodes = 0
    subset_cache: dict = {}
    failed: set = set()

    def contained(qa: Program, sa: Program) -> bool:
        key = (qa, sa)
        res = subset_cache.get(key)
        if res is None:
            res = compose(compose(qa, r), sa).issubset(p)
            subset_cache[key] = res
        return res

    def dfs(i: int, qa: Program, sa: Program):
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise _NodeCapExceeded
        if not contained(qa, sa):
            return None
        if i == len(cand_lists):
            return (qa, sa) if compose(compose(qa, r), sa) == p else None
        for s_q, cand in cand_lists[i]:
            nq = qa | Program((s_q,))
            ns = sa | cand
            key = (i + 1, nq, ns)
            if key in failed:
                continue
            res = dfs(i + 1, nq, ns)
            if res is not None:
                return res
            failed.add(key)
        return None

    try:
        return dfs(0, Program(), Program()), True
    except _NodeCapExceeded:
        return None, False


def le_j(p: Program, r: Program, alphabet: Optional[Alphabet] = None) -> GreenWitness:
    """Decide ``p <=J r``: L/R shortcuts, then constructive search, then oracle."""
    a = alphabet if alphabet is not None else infer_alphabet([p, r])
    if not a.covers(p.atoms | r.atoms):
        raise AlphabetError(f"program atoms escape alphabet {a!r}")
    wl = le_l(p, r)
    if wl.holds:
        return GreenWitness("J", True, prefix=wl.prefix, suffix=unit(a), method=wl.method)
    wr = le_r(p, r, a)
    if wr.holds:
        return GreenWitness("J", True, prefix=unit(a), suffix=wr.suffix, method=wr.method)
    if r.is_interpretation:
        # (Q o r) is then an interpretation and o S keeps it one; p is not
        return GreenWitness("J", False, method="search")
    found, exhausted = _j_search(p, r)
    if found is not None:
        return GreenWitness("J", True, prefix=found[0], suffix=found[1], method="search")
    if len(a) <= ORACLE_MAX_ATOMS:
        pair = oracle_j_witness(p, r, a)
        if pair is None:
            return GreenWitness("J", False, method="search" if exhausted else "oracle")
        _warn_discrepancy(Discrepancy("J", p, r, False, True))
        return GreenWitness("J", True, prefix=pair[0], suffix=pair[1], method="oracle")
    return GreenWitness("J", False, method="search", decided=False)


def le(relation: str, p: Program, r: Program, alphabet: Optional[Alphabet] = None) -> GreenWitness:
    """Dispatch to the decider for relation 'l', 'r' or 'j'."""
    rel = _norm_rel(relation)
    if rel == "L":
        return le_l(p, r)
    if rel == "R":
        return le_r(p, r, alphabet)
    return le_j(p, r, alphabet)


# ---------------------------------------------------------------------------
# equivalences


def equiv(
    relation: str,
    p: Program,
    r: Program,
    alphabet: Optional[Alphabet] = None,
    cap: int = DEFAULT_SWEEP_CAP,
) -> bool:
    """Mutual relation for l/r/j, operator equality for ss, least-model
    equality for lm."""
    rel = str(relation).lower()
    a = alphabet if alphabet is not None else infer_alphabet([p, r])
    if rel in ("l", "r", "j"):
        w1 = le(rel, p, r, a)
        w2 = le(rel, r, p, a)
        for w in (w1, w2):
            if not w.decided:
                raise BoundExceededError(
                    f"{rel}-relation undecided within search bounds"
                )
        return w1.holds and w2.holds
    if rel == "ss":
        return subsumption_equivalent(p, r, a, cap)
    if rel == "lm":
        return least_model(p, a)[0] == least_model(r, a)[0]
    raise ValueError(f"unknown equivalence {relation!r} (expected l, r, j, ss or lm)")


# ---------------------------------------------------------------------------
# brute-force oracle (tiny alphabets)


def _oracle_space(p: Program, r: Program, a: Alphabet) -> DenseSpace:
    if len(a) > ORACLE_MAX_ATOMS:
        raise BoundExceededError(
            f"oracle enumerates 2^(n*2^n) programs; needs |A| <= {ORACLE_MAX_ATOMS}, "
            f"got {len(a)}"
        )
    if not a.covers(p.atoms | r.atoms):
        raise AlphabetError(f"program atoms escape alphabet {a!r}")
    return DenseSpace(a)


def oracle_le(relation: str, p: Program, r: Program, a: Alphabet) -> bool:
    """Exhaustively test the defining equation over every candidate program."""
    rel = _norm_rel(relation)
    space = _oracle_space(p, r, a)
    table = space.table()
    pm, rm = space.encode(p), space.encode(r)
    if rel == "L":
        return bool((table[:, rm] == pm).any())
    if rel == "R":
        return bool((table[rm, :] == pm).any())
    mids = np.unique(table[:, rm])
    return bool((table[mids, :] == pm).any())


def oracle_prefix(p: Program, r: Program, a: Alphabet) -> Optional[Program]:
    """Least prefix Q (canonical program order) with Q o r == p, if any."""
    space = _oracle_space(p, r, a)
    table = space.table()
    order = space.canonical_masks()
    hits = table[order, space.encode(r)] == space.encode(p)
    idx = int(np.argmax(hits))
    return space.decode(int(order[idx])) if hits[idx] else None


def oracle_suffix(p: Program, r: Program, a: Alphabet) -> Optional[Program]:
    """Least suffix S (canonical program order) with r o S == p, if any."""
    space = _oracle_space(p, r, a)
    table = space.table()
    order = space.canonical_masks()
    hits = table[space.encode(r), order] == space.encode(p)
    idx = int(np.argmax(hits))
    return space.decode(int(order[idx])) if hits[idx] else None


def oracle_j_witness(p: Program, r: Program, a: Alphabet) -> Optional[tuple]:
    """Least (Q, S) pair with (Q o r) o S == p, ordered lexicographically."""
    space = _oracle_space(p, r, a)
    table = space.table()
    order = space.canonical_masks()
    pm, rm = space.encode(p), space.encode(r)
    for qm in order:
        mid = table[qm, rm]
        hits = table[mid, order] == pm
        idx = int(np.argmax(hits))
        if hits[idx]:
            return space.decode(int(qm)), space.decode(int(order[idx]))
    return None


# ---------------------------------------------------------------------------
# validation sweeps (decision procedures vs oracle)


def check_le_l_against_oracle(a: Alphabet, pairs: Optional[Iterable] = None) -> list:
    """Compare the canonical-prefix decision with the oracle; empty = agreement."""
    return _check_against_oracle(a, "L", pairs)


def check_le_r_against_oracle(a: Alphabet, pairs: Optional[Iterable] = None) -> list:
    """Compare the restricted suffix search (no fallback) with the oracle."""
    return _check_against_oracle(a, "R", pairs)


def check_le_j_against_oracle(a: Alphabet, pairs: Optional[Iterable] = None) -> list:
    """Compare the J search path (no oracle fallback) with the oracle."""
    return _check_against_oracle(a, "J", pairs)


def _search_verdict(rel: str, p: Program, r: Program, a: Alphabet) -> bool:
    if rel == "L":
        return le_l(p, r).holds
    if rel == "R":
        return suffix_search(p, r)[0] is not None
    if le_l(p, r).holds or suffix_search(p, r)[0] is not None:
        return True
    if r.is_interpretation:
        return False
    return _j_search(p, r)[0] is not None


def _check_against_oracle(a: Alphabet, rel: str, pairs: Optional[Iterable]) -> list:
    if len(a) > ORACLE_MAX_ATOMS:
        raise BoundExceededError(f"oracle sweep needs |A| <= {ORACLE_MAX_ATOMS}")
    space = DenseSpace(a)
    table = space.table()
    if pairs is None:
        progs = list(all_programs(a))
        pairs = ((p, r) for r in progs for p in progs)
    out = []
    reach_cache: dict = {}
    for p, r in pairs:
        pm, rm = space.encode(p), space.encode(r)
        reach = reach_cache.get((rel, rm))
        if reach is None:
            if rel == "L":
                reach = frozenset(int(x) for x in table[:, rm])
            elif rel == "R":
                reach = frozenset(int(x) for x in table[rm, :])
            else:
                mids = np.unique(table[:, rm])
                reach = frozenset(int(x) for x in np.unique(table[mids, :]))
            reach_cache[(rel, rm)] = reach
        oracle_verdict = pm in reach
        verdict = _search_verdict(rel, p, r, a)
        if verdict != oracle_verdict:
            out.append(Discrepancy(rel, p, r, verdict, oracle_verdict))
    return out


# ---------------------------------------------------------------------------
# class structure


@dataclass(frozen=True)
class ClassReport:
    """Partition of a program set into mutual-relation classes plus the
    strict order between classes.

    Composition is not associative, so the raw relations need not be
    transitive; classes are mutual-reachability components of the
    transitive closure and ``order_edges`` is that closure's strict order
    (transitive and irreflexive by construction).  Edge (i, j) reads
    "class i strictly below class j".
    """

    relation: str
    classes: tuple
    order_edges: frozenset

    def hasse_edges(self) -> tuple:
        """Transitive reduction of the class order, for rendering."""
        edges = []
        for i, j in sorted(self.order_edges):
            if not any(
                (i, k) in self.order_edges and (k, j) in self.order_edges
                for k in range(len(self.classes))
            ):
                edges.append((i, j))
        return tuple(edges)

    def to_text(self) -> str:
        lines = [
            "horn-classes v1",
            f"relation: {self.relation.lower()}",
            f"programs: {sum(len(c) for c in self.classes)}",
            f"classes: {len(self.classes)}",
        ]
        for k, members in enumerate(self.classes, start=1):
            lines.append(f"class {k}:")
            for m in members:
                lines.append(f"  {_inline(m)}")
        hasse = self.hasse_edges()
        if hasse:
            lines.append("order:")
            for i, j in hasse:
                lines.append(f"  class {i + 1} < class {j + 1}")
        else:
            lines.append("order: none")
        return "\n".join(lines)

    def to_dot(self) -> str:
        lines = ["digraph green_classes {", "  rankdir=BT;"]
        for k, members in enumerate(self.classes, start=1):
            label = "\\n".join(_inline(m) for m in members).replace('"', '\\"')
            lines.append(f'  c{k} [label="{label}"];')
        for i, j in self.hasse_edges():
            lines.append(f"  c{i + 1} -> c{j + 1};")
        lines.append("}")
        return "\n".join(lines)


def _inline(p: Program) -> str:
    return " ".join(render_rule(r) for r in p) or "%"


def green_partition(programs: Iterable, relation: str, a: Alphabet) -> ClassReport:
    """Classify a finite program set by mutual relation and order the classes."""
    rel = _norm_rel(relation)
    progs = sorted(set(programs), key=lambda p: p.sort_key())
    m = len(progs)
    reaches = [[False] * m for _ in range(m)]
    for i, pi in enumerate(progs):
        for j, pj in enumerate(progs):
            w = le(rel, pi, pj, a)
            if not w.decided:
                raise BoundExceededError(
                    f"{rel}-relation undecided for a pair; cannot classify"
                )
            reaches[i][j] = w.holds
    # transitive closure; the raw relation need not be transitive
    for k in range(m):
        for i in range(m):
            if reaches[i][k]:
                row_k = reaches[k]
                row_i = reaches[i]
                for j in range(m):
                    if row_k[j]:
                        row_i[j] = True
    assigned = [-1] * m
    classes = []
    for i in range(m):
        if assigned[i] >= 0:
            continue
        members = [
            j for j in range(m) if reaches[i][j] and reaches[j][i] and assigned[j] < 0
        ]
        idx = len(classes)
        for j in members:
            assigned[j] = idx
        classes.append(tuple(progs[j] for j in members))
    edges = set()
    reps = [next(j for j in range(m) if assigned[j] == k) for k in range(len(classes))]
    for ci, i in enumerate(reps):
        for cj, j in enumerate(reps):
            if ci != cj and reaches[i][j] and not reaches[j][i]:
                edges.add((ci, cj))
    return ClassReport(rel, tuple(classes), frozenset(edges))


# ---------------------------------------------------------------------------
# non-associativity witness


def find_nonassociative_triple(a: Alphabet) -> Optional[tuple]:
    """First triple (canonical order) with (P o Q) o R != P o (Q o R).

    Any witness over two atoms remains one over a larger alphabet, so the
    scan runs on the two smallest atoms.
    """
    if len(a) < 2:
        raise ValueError("non-associativity needs at least 2 atoms")
    from .dense import nonassoc_scan

    sub = Alphabet(tuple(a)[:2])
    space = DenseSpace(sub)
    table = space.table()
    order = space.canonical_masks()
    rank = np.empty(space.n_programs, dtype=np.int64)
    rank[order] = np.arange(space.n_programs)
    canon_table = rank[table[order][:, order]].astype(np.uint8)
    hit = nonassoc_scan(canon_table)
    if hit is None:
        return None
    x, y, z = (space.decode(int(order[i])) for i in hit)
    if compose(compose(x, y), z) == compose(x, compose(y, z)):
        raise AssertionError("scan returned a non-witness")
    return x, y, z
