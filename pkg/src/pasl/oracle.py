"""Finite-model semantics: evaluation, frame enumeration, countermodels.

A frame is a finite set of worlds {0..n-1} with 0 as the empty world and
a ternary composition relation; (a,b,c) in rel means a and b combine to
c.  This module is independent of the proof rules so the two can be
checked against each other.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, Optional, Tuple

from .config import LogicConfig
from .formula import Formula, prop_names
from .sequent import EPS, Sequent

Triple = Tuple[int, int, int]


@dataclass
class FrameModel:
    size: int
    rel: FrozenSet[Triple]
    valuation: Dict[str, FrozenSet[int]]

    @property
    def eps(self) -> int:
        return 0


def satisfies(model: FrameModel, world: int, f: Formula) -> bool:
    k = f.kind
    if k == "var":
        return world in model.valuation.get(f.args[0], ())
    if k == "top":
        return True
    if k == "bot":
        return False
    if k == "emp":
        return world == model.eps
    if k == "not":
        return not satisfies(model, world, f.args[0])
    if k == "and":
        return satisfies(model, world, f.args[0]) and satisfies(model, world, f.args[1])
    if k == "or":
        return satisfies(model, world, f.args[0]) or satisfies(model, world, f.args[1])
    if k == "imp":
        return (not satisfies(model, world, f.args[0])) or satisfies(model, world, f.args[1])
    if k == "star":
        a, b = f.args
        return any(c == world and satisfies(model, x, a) and satisfies(model, y, b)
                   for (x, y, c) in model.rel)
    if k == "wand":
        a, b = f.args
        return all(satisfies(model, y, b)
                   for (w, x, y) in model.rel
                   if w == world and satisfies(model, x, a))
    raise ValueError("cannot evaluate %r in a frame model" % k)


def check_conditions(rel: FrozenSet[Triple], n: int, cfg: LogicConfig) -> bool:
    for a in range(n):
        if (a, 0, a) not in rel:
            return False
    for (a, b, c) in rel:
        if b == 0 and a != c:
            return False
        if (b, a, c) not in rel:
            return False
    # associativity: two-step combinations can be rebracketed
    by_out: Dict[int, list] = {}
    for t in rel:
        by_out.setdefault(t[2], []).append(t)
    for (h1, h5, h4) in rel:
        for (h2, h3, _) in by_out.get(h5, ()):
            if not any((h1, h2, h6) in rel and (h6, h3, h4) in rel
                       for h6 in range(n)):
                return False
    if cfg.partial_determinism:
        seen: Dict[Tuple[int, int], int] = {}
        for (a, b, c) in rel:
            if seen.setdefault((a, b), c) != c:
                return False
    if cfg.cancellativity:
        seen = {}
        for (a, b, c) in rel:
            if seen.setdefault((a, c), b) != b:
                return False
    if cfg.indivisible_unit or cfg.disjointness:
        if any(c == 0 and a != 0 for (a, b, c) in rel):
            return False
    if cfg.disjointness:
        if any(a == b and a != 0 for (a, b, c) in rel):
            return False
    if cfg.splittability:
        for c in range(1, n):
            if not any(t[2] == c and t[0] != 0 and t[1] != 0 for t in rel):
                return False
    if cfg.cross_split:
        for (a, b, z) in rel:
            for (u, v, z2) in rel:
                if z != z2:
                    continue
                if not any((p, q, a) in rel and (p, s, u) in rel
                           and (s, t, b) in rel and (q, t, v) in rel
                           for p in range(n) for q in range(n)
                           for s in range(n) for t in range(n)):
                    return False
    return True


def _identity_base(n: int) -> set:
    base = set()
    for a in range(n):
        base.add((a, 0, a))
        base.add((0, a, a))
    return base


@lru_cache(maxsize=None)
def enumerate_frames(n: int, cfg: LogicConfig) -> Tuple[FrozenSet[Triple], ...]:
    """All composition relations on n worlds meeting cfg's frame conditions."""
    if n < 1:
        raise ValueError("need at least one world")
    if n > 4 or (n == 4 and not cfg.partial_determinism):
        raise ValueError("frame enumeration too large for n=%d" % n)
    base = _identity_base(n)
    pairs = [(a, b) for a in range(1, n) for b in range(a, n)]
    out = []
    if n == 4:
        # partial function tables: each pair maps to a target or nothing
        choices = itertools.product(range(n + 1), repeat=len(pairs))
        for choice in choices:
            rel = set(base)
            for (a, b), c in zip(pairs, choice):
                if c < n:
                    rel.add((a, b, c))
                    rel.add((b, a, c))
            fr = frozenset(rel)
            if check_conditions(fr, n, cfg):
                out.append(fr)
    else:
        targets = list(range(n))
        subsets = [frozenset(s) for r in range(n + 1)
                   for s in itertools.combinations(targets, r)]
        for choice in itertools.product(subsets, repeat=len(pairs)):
            rel = set(base)
            for (a, b), cs in zip(pairs, choice):
                for c in cs:
                    rel.add((a, b, c))
                    rel.add((b, a, c))
            fr = frozenset(rel)
            if check_conditions(fr, n, cfg):
                out.append(fr)
    return tuple(out)


def _valuations(props: Tuple[str, ...], n: int) -> Iterator[Dict[str, FrozenSet[int]]]:
    world_subsets = [frozenset(s) for r in range(n + 1)
                     for s in itertools.combinations(range(n), r)]
    for choice in itertools.product(world_subsets, repeat=len(props)):
        yield dict(zip(props, choice))


def find_countermodel(f: Formula, cfg: LogicConfig,
                      max_worlds: int = 3) -> Optional[Tuple[FrameModel, int]]:
    """Search small frames for a world falsifying f; None if none found."""
    props = tuple(sorted(prop_names(f)))
    for n in range(1, max_worlds + 1):
        try:
            frames = enumerate_frames(n, cfg)
        except ValueError:
            break
        for rel in frames:
            for val in _valuations(props, n):
                model = FrameModel(n, rel, val)
                for h in range(n):
                    if not satisfies(model, h, f):
                        return model, h
    return None


def assignments(labels, model: FrameModel) -> Iterator[Dict[int, int]]:
    """All label-to-world maps sending the identity label to the empty world."""
    rest = sorted(w for w in labels if w != EPS)
    for choice in itertools.product(range(model.size), repeat=len(rest)):
        rho = dict(zip(rest, choice))
        rho[EPS] = model.eps
        yield rho


def sequent_falsifiable(seq: Sequent, model: FrameModel,
                        rho: Dict[int, int]) -> bool:
    """Does rho make all of seq's structure and antecedents true and all
    succedents false in model?"""
    for (x, y, z) in seq.rel:
        if (rho[x], rho[y], rho[z]) not in model.rel:
            return False
    for (x, y) in seq.ineq:
        if rho[x] == rho[y]:
            return False
    for (w, f) in seq.gamma:
        if not satisfies(model, rho[w], f):
            return False
    for (w, f) in seq.delta:
        if satisfies(model, rho[w], f):
            return False
    return True


def format_model(model: FrameModel, world: Optional[int] = None) -> str:
    lines = ["worlds %d" % model.size, "eps %d" % model.eps]
    for t in sorted(model.rel):
        lines.append("rel %d %d %d" % t)
    for p in sorted(model.valuation):
        ws = " ".join(str(w) for w in sorted(model.valuation[p]))
        lines.append("val %s %s" % (p, ws))
    if world is not None:
        lines.append("falsified_at %d" % world)
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> Tuple[FrameModel, Optional[int]]:
    size = 0
    rel = set()
    val: Dict[str, FrozenSet[int]] = {}
    world = None
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "worlds":
            size = int(parts[1])
        elif parts[0] == "eps":
            if int(parts[1]) != 0:
                raise ValueError("empty world must be 0")
        elif parts[0] == "rel":
            rel.add((int(parts[1]), int(parts[2]), int(parts[3])))
        elif parts[0] == "val":
            val[parts[1]] = frozenset(int(w) for w in parts[2:])
        elif parts[0] == "falsified_at":
            world = int(parts[1])
        else:
            raise ValueError("bad model line %r" % line)
    return FrameModel(size, frozenset(rel), val), world
