"""Domain types for propositional Horn programs plus parsing and rendering.

A rule is ``head <- body`` with a finite set of body atoms; a fact is a rule
with an empty body.  A program is a finite, duplicate-free set of rules.  An
interpretation is a set of atoms and is freely identified with the program
consisting of exactly those facts.

Concrete syntax (the contract for every CLI command):

    a.              fact
    a :- b, c.      proper rule
    % ...           line comment

Rules may be separated by newlines or appear on one line; whitespace is
insignificant.  Interpretations are written ``{a, b}`` (braces optional).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Union

from .errors import ProgramSyntaxError

_ATOM_RE = re.compile(r"[a-z][A-Za-z0-9_]*")


class Atom:
    """An interned propositional symbol, ordered lexicographically by name."""

    __slots__ = ("name",)
    _interned: dict = {}

    def __new__(cls, name: str) -> "Atom":
        atom = cls._interned.get(name)
        if atom is None:
            if not isinstance(name, str) or _ATOM_RE.fullmatch(name) is None:
                raise ValueError(f"invalid atom name: {name!r}")
            atom = super().__new__(cls)
            object.__setattr__(atom, "name", name)
            cls._interned[name] = atom
        return atom

    def __setattr__(self, key, value):
        raise AttributeError("Atom is immutable")

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"

    def __str__(self) -> str:
        return self.name

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, Atom) and self.name == other.name)

    def __hash__(self) -> int:
        return hash(self.name)

    def __lt__(self, other: "Atom") -> bool:
        return self.name < other.name

    def __le__(self, other: "Atom") -> bool:
        return self.name <= other.name

    def __gt__(self, other: "Atom") -> bool:
        return self.name > other.name

    def __ge__(self, other: "Atom") -> bool:
        return self.name >= other.name

    def __reduce__(self):
        return (Atom, (self.name,))


#: An interpretation is just a set of atoms.
Interpretation = frozenset


@dataclass(frozen=True)
class Rule:
    """``head <- body`` over propositional atoms; the body is a set."""

    head: Atom
    body: frozenset = frozenset()

    def __post_init__(self):
        if not isinstance(self.head, Atom):
            raise TypeError(f"rule head must be an Atom, got {self.head!r}")
        if not isinstance(self.body, frozenset):
            object.__setattr__(self, "body", frozenset(self.body))
        for a in self.body:
            if not isinstance(a, Atom):
                raise TypeError(f"rule body must contain Atoms, got {a!r}")

    @property
    def size(self) -> int:
        return len(self.body)

    @property
    def is_fact(self) -> bool:
        return not self.body

    @property
    def is_krom(self) -> bool:
        return len(self.body) <= 1

    def __str__(self) -> str:
        return render_rule(self)

    def __repr__(self) -> str:
        return f"Rule<{render_rule(self)}>"


def rule_key(r: Rule) -> tuple:
    """Canonical sort key: head first, then the sorted body."""
    return (r.head.name, tuple(sorted(a.name for a in r.body)))


class Program:
    """An immutable, duplicate-free set of rules with a canonical order.

    Set operators (``|``, ``&``, ``-``) act on the rule sets.  Iteration is
    always in canonical order, so rendering and searches are deterministic.
    """

    __slots__ = ("_rules", "_hash", "_sorted", "_key", "_by_head", "_facts", "_proper")

    def __init__(self, rules: Iterable[Rule] = ()):
        object.__setattr__(self, "_rules", frozenset(rules))
        for slot in ("_hash", "_sorted", "_key", "_by_head", "_facts", "_proper"):
            object.__setattr__(self, slot, None)

    def __setattr__(self, key, value):
        raise AttributeError("Program is immutable")

    # -- set behaviour -------------------------------------------------

    @property
    def rules(self) -> frozenset:
        return self._rules

    @property
    def sorted_rules(self) -> tuple:
        if self._sorted is None:
            object.__setattr__(
                self, "_sorted", tuple(sorted(self._rules, key=rule_key))
            )
        return self._sorted

    def sort_key(self) -> tuple:
        """Key inducing the canonical total order on programs."""
        if self._key is None:
            object.__setattr__(
                self, "_key", tuple(rule_key(r) for r in self.sorted_rules)
            )
        return self._key

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.sorted_rules)

    def __len__(self) -> int:
        return len(self._rules)

    def __contains__(self, r: Rule) -> bool:
        return r in self._rules

    def __bool__(self) -> bool:
        return bool(self._rules)

    def __eq__(self, other) -> bool:
        return isinstance(other, Program) and self._rules == other._rules

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self._rules))
        return self._hash

    def __or__(self, other: "Program") -> "Program":
        return Program(self._rules | other._rules)

    def __and__(self, other: "Program") -> "Program":
        return Program(self._rules & other._rules)

    def __sub__(self, other: "Program") -> "Program":
        return Program(self._rules - other._rules)

    def issubset(self, other: "Program") -> bool:
        return self._rules <= other._rules

    # -- derived views -------------------------------------------------

    @property
    def heads(self) -> frozenset:
        return frozenset(r.head for r in self._rules)

    @property
    def bodies(self) -> frozenset:
        out = set()
        for r in self._rules:
            out.update(r.body)
        return frozenset(out)

    @property
    def atoms(self) -> frozenset:
        return self.heads | self.bodies

    @property
    def facts(self) -> "Program":
        """The facts in the program, as a program."""
        if self._facts is None:
            object.__setattr__(
                self, "_facts", Program(r for r in self._rules if r.is_fact)
            )
        return self._facts

    @property
    def proper(self) -> "Program":
        """The proper (non-fact) rules, as a program."""
        if self._proper is None:
            object.__setattr__(
                self, "_proper", Program(r for r in self._rules if not r.is_fact)
            )
        return self._proper

    @property
    def is_interpretation(self) -> bool:
        return all(r.is_fact for r in self._rules)

    @property
    def is_krom(self) -> bool:
        return all(r.is_krom for r in self._rules)

    def bodies_by_head(self) -> dict:
        """Deduplicated rule bodies grouped by head atom, in canonical order."""
        if self._by_head is None:
            buckets: dict = {}
            for r in self.sorted_rules:
                buckets.setdefault(r.head, [])
                if r.body not in buckets[r.head]:
                    buckets[r.head].append(r.body)
            object.__setattr__(
                self, "_by_head", {h: tuple(bs) for h, bs in buckets.items()}
            )
        return self._by_head

    def __str__(self) -> str:
        return render_program(self)

    def __repr__(self) -> str:
        inline = " ".join(render_rule(r) for r in self) or "(empty)"
        return f"Program<{inline}>"


class Alphabet:
    """A finite, ordered set of atoms serving as the ambient context.

    Complements, the full unit program and exhaustive sweeps all depend on
    which alphabet is meant, so it is always passed explicitly.
    """

    __slots__ = ("_atoms", "_set", "_pos")

    def __init__(self, atoms: Iterable = ()):
        normalized = tuple(sorted(set(_coerce_atom(a) for a in atoms)))
        object.__setattr__(self, "_atoms", normalized)
        object.__setattr__(self, "_set", frozenset(normalized))
        object.__setattr__(self, "_pos", {a: i for i, a in enumerate(normalized)})

    def __setattr__(self, key, value):
        raise AttributeError("Alphabet is immutable")

    @property
    def atoms(self) -> tuple:
        return self._atoms

    def __iter__(self) -> Iterator[Atom]:
        return iter(self._atoms)

    def __len__(self) -> int:
        return len(self._atoms)

    def __contains__(self, a: Atom) -> bool:
        return a in self._set

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self._atoms == other._atoms

    def __hash__(self) -> int:
        return hash(self._atoms)

    def index(self, a: Atom) -> int:
        return self._pos[a]

    def covers(self, atoms: Iterable) -> bool:
        return all(a in self._set for a in atoms)

    def as_set(self) -> frozenset:
        return self._set

    def __or__(self, other: "Alphabet") -> "Alphabet":
        return Alphabet(self._atoms + other._atoms)

    def __repr__(self) -> str:
        return f"Alphabet({', '.join(a.name for a in self._atoms)})"


def _coerce_atom(a: Union[Atom, str]) -> Atom:
    return a if isinstance(a, Atom) else Atom(a)


# -- conversions -------------------------------------------------------


def facts_program(atoms: Iterable) -> Program:
    """The program consisting of one fact per atom."""
    return Program(Rule(_coerce_atom(a)) for a in atoms)


def as_interpretation(p: Program) -> frozenset:
    """Read a program of facts back as the set of its atoms."""
    if not p.is_interpretation:
        raise ValueError(f"program has proper rules, not an interpretation: {p!r}")
    return p.heads


def infer_alphabet(items: Iterable) -> Alphabet:
    """Union of all atoms occurring in the given programs or atom sets."""
    atoms: set = set()
    for item in items:
        atoms.update(item.atoms if isinstance(item, Program) else item)
    return Alphabet(atoms)


# -- parsing -----------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<atom>[a-z][A-Za-z0-9_]*)
  | (?P<arrow>:-)
  | (?P<punct>[.,{}])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    """Yield (kind, value, line, column) tuples; raise on junk."""
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ProgramSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            yield kind, value, line, col
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    yield "eof", "", line, col


class _TokenStream:
    def __init__(self, text: str):
        self._tokens = list(_tokenize(text))
        self._i = 0

    def peek(self):
        return self._tokens[self._i]

    def next(self):
        tok = self._tokens[self._i]
        if tok[0] != "eof":
            self._i += 1
        return tok

    def expect(self, kind: str, what: str):
        tok = self.next()
        if tok[0] != kind and tok[1] != kind:
            raise ProgramSyntaxError(
                f"expected {what}, found {tok[1]!r}" if tok[1] else f"expected {what}",
                tok[2],
                tok[3],
            )
        return tok


def parse_program(text: str) -> Program:
    """Parse program text into a canonical program.

    Duplicate rules and duplicate body atoms are merged silently; malformed
    input raises :class:`ProgramSyntaxError` with line and column.
    """
    stream = _TokenStream(text)
    rules = []
    while True:
        kind, value, line, col = stream.peek()
        if kind == "eof":
            break
        if kind != "atom":
            raise ProgramSyntaxError(
                f"expected rule head, found {value!r}", line, col
            )
        stream.next()
        head = Atom(value)
        body = []
        kind, value, line, col = stream.next()
        if value == ":-":
            body.append(Atom(stream.expect("atom", "body atom")[1]))
            while True:
                kind, value, line, col = stream.next()
                if value == ",":
                    body.append(Atom(stream.expect("atom", "body atom")[1]))
                elif value == ".":
                    break
                else:
                    raise ProgramSyntaxError(
                        f"expected ',' or '.', found {value!r}" if value
                        else "expected ',' or '.'",
                        line,
                        col,
                    )
        elif value != ".":
            raise ProgramSyntaxError(
                f"expected ':-' or '.', found {value!r}" if value
                else "expected ':-' or '.'",
                line,
                col,
            )
        rules.append(Rule(head, frozenset(body)))
    return Program(rules)


def parse_interpretation(text: str) -> frozenset:
    """Parse ``{a, b}`` or a bare comma-separated atom list."""
    stream = _TokenStream(text)
    atoms = []
    kind, value, line, col = stream.peek()
    braced = value == "{"
    if braced:
        stream.next()
    kind, value, line, col = stream.peek()
    if kind == "atom":
        atoms.append(Atom(stream.next()[1]))
        while stream.peek()[1] == ",":
            stream.next()
            atoms.append(Atom(stream.expect("atom", "atom")[1]))
    if braced:
        stream.expect("}", "'}'")
    kind, value, line, col = stream.peek()
    if kind != "eof":
        raise ProgramSyntaxError(f"unexpected trailing {value!r}", line, col)
    return frozenset(atoms)


# -- rendering ---------------------------------------------------------


def render_rule(r: Rule) -> str:
    if r.is_fact:
        return f"{r.head.name}."
    body = ", ".join(a.name for a in sorted(r.body))
    return f"{r.head.name} :- {body}."


def render_program(p: Program) -> str:
    """Canonical text; ``parse_program(render_program(p)) == p``."""
    return "\n".join(render_rule(r) for r in p)


def render_interpretation(i: Iterable) -> str:
    return "{" + ", ".join(a.name for a in sorted(i)) + "}"


# -- enumeration -------------------------------------------------------


def all_rules(a: Alphabet) -> tuple:
    """Every rule over the alphabet, in canonical order (n * 2^n rules)."""
    subsets = []
    atoms = list(a)
    for k in range(len(atoms) + 1):
        subsets.extend(frozenset(c) for c in combinations(atoms, k))
    subsets.sort(key=lambda s: tuple(sorted(x.name for x in s)))
    return tuple(Rule(h, b) for h in atoms for b in subsets)


def all_programs(a: Alphabet) -> Iterator[Program]:
    """Every program over the alphabet, in canonical program order.

    There are 2^(n * 2^n) of them; callers are responsible for keeping the
    alphabet small.
    """
    rules = all_rules(a)

    def gen(start: int, acc: tuple) -> Iterator[Program]:
        yield Program(acc)
        for i in range(start, len(rules)):
            yield from gen(i + 1, acc + (rules[i],))

    return gen(0, ())
