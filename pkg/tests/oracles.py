"""Independent brute-force oracles the implementation is checked against.

These deliberately follow the defining set comprehensions verbatim, however
slow, and share no code with the implementation under test.
"""

from itertools import combinations

from hornseq.syntax import Program, Rule


def naive_compose(p: Program, r: Program) -> Program:
    """Literal reading of composition: subsets S of r with |S| <= size(q)
    whose heads equal the body of q, emitting h(q) <- union of S-bodies."""
    out = set()
    r_rules = sorted(r.rules, key=lambda x: (x.head.name, sorted(a.name for a in x.body)))
    for q in p.rules:
        for size in range(len(q.body) + 1):
            for sel in combinations(r_rules, size):
                heads = frozenset(s.head for s in sel)
                if heads != q.body:
                    continue
                body = frozenset().union(*(s.body for s in sel)) if sel else frozenset()
                out.add(Rule(q.head, body))
    return Program(out)


def naive_models(p: Program, atoms) -> list:
    """All models by definition-level entailment over every subset."""
    atoms = sorted(atoms)
    out = []
    for size in range(len(atoms) + 1):
        for sel in combinations(atoms, size):
            i = frozenset(sel)
            if all((not r.body <= i) or r.head in i for r in p.rules):
                out.append(i)
    return out


def naive_least_model(p: Program, atoms) -> frozenset:
    """Subset-minimum of all models; exists for Horn programs."""
    models = naive_models(p, atoms)
    best = None
    for m in models:
        if best is None or m <= best:
            best = m
    # the minimum must itself be comparable to everything it beat
    assert best is not None and all(best <= m for m in models)
    return best
