"""Inference rules and proof checking.

Every rule application is described by a RuleInstance naming the rule,
its principal parts, fresh labels and substitutions.  expand() is the
single implementation of what each rule does: the proof search calls it
to compute premises, and check() calls it again to validate finished
derivations, so the two can never disagree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from .config import LogicConfig
from .formula import BOT, EMP, TOP, Formula, subst_expr
from .sequent import (EPS, Ineq, Label, LabelledFormula, RelAtom, Sequent,
                      label_name)
from .unify import AppliedRule, entails_eq


class Rule(Enum):
    # zero-premise rules
    ID = "id"
    BOT_L = "botL"
    TOP_R = "topR"
    EMP_R = "empR"
    NEQ_L = "neqL"
    MAPSTO_L1 = "|->L1"
    EQ_R = "=R"
    # single-premise logical rules
    AND_L = "andL"
    OR_R = "orR"
    IMP_R = "->R"
    NOT_L = "~L"
    NOT_R = "~R"
    EMP_L = "empL"
    STAR_L = "*L"
    WAND_R = "-*R"
    EXISTS_L = "existsL"
    EXISTS_R = "existsR"
    # branching rules
    AND_R = "andR"
    OR_L = "orL"
    IMP_L = "->L"
    STAR_R = "*R"
    WAND_L = "-*L"
    MAPSTO_L2 = "|->L2"
    EM = "EM"
    # label substitution rules
    EQ1 = "Eq1"
    EQ2 = "Eq2"
    P = "P"
    C = "C"
    IU = "IU"
    D = "D"
    MAPSTO_L3 = "|->L3"
    MAPSTO_L4 = "|->L4"
    EQ_L = "=L"
    # structural rules
    E = "E"
    A = "A"
    A_C = "AC"
    U = "U"
    S = "S"
    CS = "CS"
    CS_C = "CSC"


_SUBST_RULES = {Rule.EQ1: "Eq1", Rule.EQ2: "Eq2", Rule.P: "P",
                Rule.C: "C", Rule.IU: "IU", Rule.D: "D"}
_SUBST_BY_NAME = {v: k for k, v in _SUBST_RULES.items()}


def rule_enabled(rule: Rule, cfg: LogicConfig) -> bool:
    if rule in (Rule.P,):
        return cfg.partial_determinism
    if rule in (Rule.C,):
        return cfg.cancellativity
    if rule is Rule.IU:
        return cfg.indivisible_unit or cfg.disjointness
    if rule is Rule.D:
        return cfg.disjointness
    if rule in (Rule.S, Rule.NEQ_L, Rule.EM):
        return cfg.splittability
    if rule in (Rule.CS, Rule.CS_C):
        return cfg.cross_split
    if rule in (Rule.MAPSTO_L1, Rule.MAPSTO_L2, Rule.MAPSTO_L3,
                Rule.MAPSTO_L4, Rule.EQ_L, Rule.EQ_R,
                Rule.EXISTS_L, Rule.EXISTS_R):
        return cfg.heap_extension
    return True


@dataclass(frozen=True)
class RuleInstance:
    rule: Rule
    principal_gamma: Tuple[LabelledFormula, ...] = ()
    principal_delta: Tuple[LabelledFormula, ...] = ()
    principal_rels: Tuple[RelAtom, ...] = ()
    principal_ineqs: Tuple[Ineq, ...] = ()
    fresh: Tuple[Label, ...] = ()
    subst: Tuple[Tuple[Label, Label], ...] = ()
    labels: Tuple[Label, ...] = ()
    exprs: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Derivation:
    # The conclusion may be omitted on inner nodes: premises are computed
    # from the parent during checking anyway, and storing every
    # intermediate sequent would make large proofs enormous.  The root
    # must carry one.
    conclusion: Optional[Sequent]
    instance: Optional[RuleInstance] = None
    premises: Tuple["Derivation", ...] = ()

    def rule_count(self) -> int:
        n = 0
        stack = [self]
        while stack:
            d = stack.pop()
            if d.instance is not None:
                n += 1
            stack.extend(d.premises)
        return n


class RuleError(ValueError):
    pass


def from_applied(a: AppliedRule) -> RuleInstance:
    return RuleInstance(_SUBST_BY_NAME[a.rule],
                        principal_rels=a.atoms, subst=(a.subst,))


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise RuleError(msg)


def _atomic(f: Formula) -> bool:
    return f.kind in ("var", "mapsto", "eq")


def _merge(seq: Sequent, a: Label, b: Label) -> Sequent:
    """Identify two labels, always keeping the smaller one."""
    if a == b:
        return seq
    frm, to = (a, b) if a > b else (b, a)
    return seq.subst_label(frm, to)


def expand(seq: Sequent, inst: RuleInstance, cfg: LogicConfig) -> Tuple[Sequent, ...]:
    """Premises of applying inst to seq; raises RuleError if not applicable."""
    r = inst.rule
    _need(rule_enabled(r, cfg), "rule %s disabled in %s" % (r.value, cfg.name()))
    for lf in inst.principal_gamma:
        _need(lf in seq.gamma_set, "missing antecedent %s: %s" % (label_name(lf[0]), lf[1]))
    for lf in inst.principal_delta:
        _need(lf in seq.delta_set, "missing succedent %s: %s" % (label_name(lf[0]), lf[1]))
    for a in inst.principal_rels:
        _need(a in seq.rel_set, "missing relational atom %r" % (a,))
    for q in inst.principal_ineqs:
        _need(q in seq.ineq_set, "missing inequality %r" % (q,))
    for w in inst.fresh:
        _need(w not in seq.labels, "label %s not fresh" % label_name(w))

    # zero-premise rules
    if r is Rule.ID:
        ((w, a),) = inst.principal_gamma
        ((w2, a2),) = inst.principal_delta
        _need(a is a2 and _atomic(a), "id needs the same atomic formula")
        _need(entails_eq(seq, w, w2), "id labels not equal")
        return ()
    if r is Rule.BOT_L:
        ((_, f),) = inst.principal_gamma
        _need(f is BOT, "botL needs false on the left")
        return ()
    if r is Rule.TOP_R:
        ((_, f),) = inst.principal_delta
        _need(f is TOP, "topR needs true on the right")
        return ()
    if r is Rule.EMP_R:
        ((w, f),) = inst.principal_delta
        _need(f is EMP and entails_eq(seq, w, EPS), "empR needs emp at the identity")
        return ()
    if r is Rule.NEQ_L:
        ((x, y),) = inst.principal_ineqs
        _need(entails_eq(seq, x, y), "neqL labels not equal")
        return ()
    if r is Rule.MAPSTO_L1:
        ((w, f),) = inst.principal_gamma
        _need(f.kind == "mapsto" and entails_eq(seq, w, EPS),
              "|->L1 needs a cell at the identity")
        return ()
    if r is Rule.EQ_R:
        ((_, f),) = inst.principal_delta
        _need(f.kind == "eq" and f.args[0] == f.args[1], "=R needs a trivial equality")
        return ()

    # single-premise logical rules
    if r is Rule.AND_L:
        ((w, f),) = inst.principal_gamma
        _need(f.kind == "and", "andL needs a conjunction")
        a, b = f.args
        return (seq.extend(gamma=[(w, a), (w, b)], drop_gamma=[(w, f)]),)
    if r is Rule.OR_R:
        ((w, f),) = inst.principal_delta
        _need(f.kind == "or", "orR needs a disjunction")
        a, b = f.args
        return (seq.extend(delta=[(w, a), (w, b)], drop_delta=[(w, f)]),)
    if r is Rule.IMP_R:
        ((w, f),) = inst.principal_delta
        _need(f.kind == "imp", "->R needs an implication")
        a, b = f.args
        return (seq.extend(gamma=[(w, a)], delta=[(w, b)], drop_delta=[(w, f)]),)
    if r is Rule.NOT_L:
        ((w, f),) = inst.principal_gamma
        _need(f.kind == "not", "~L needs a negation")
        return (seq.extend(delta=[(w, f.args[0])], drop_gamma=[(w, f)]),)
    if r is Rule.NOT_R:
        ((w, f),) = inst.principal_delta
        _need(f.kind == "not", "~R needs a negation")
        return (seq.extend(gamma=[(w, f.args[0])], drop_delta=[(w, f)]),)
    if r is Rule.EMP_L:
        ((w, f),) = inst.principal_gamma
        _need(f is EMP, "empL needs emp")
        return (seq.extend(rel=[(EPS, w, EPS)], drop_gamma=[(w, f)]),)
    if r is Rule.STAR_L:
        ((z, f),) = inst.principal_gamma
        _need(f.kind == "star", "*L needs a star")
        x, y = inst.fresh
        a, b = f.args
        return (seq.extend(rel=[(x, y, z)], gamma=[(x, a), (y, b)],
                           drop_gamma=[(z, f)]),)
    if r is Rule.WAND_R:
        ((z, f),) = inst.principal_delta
        _need(f.kind == "wand", "-*R needs a wand")
        x, y = inst.fresh
        a, b = f.args
        return (seq.extend(rel=[(x, z, y)], gamma=[(x, a)], delta=[(y, b)],
                           drop_delta=[(z, f)]),)
    if r is Rule.EXISTS_L:
        ((w, f),) = inst.principal_gamma
        _need(f.kind == "exists", "existsL needs a quantifier")
        (v,) = inst.exprs
        occurring = set()
        for (_, g) in seq.gamma + seq.delta:
            from .formula import free_exprs
            occurring |= free_exprs(g)
        _need(v not in occurring, "witness %s not fresh" % v)
        body = subst_expr(f.args[1], f.args[0], v)
        return (seq.extend(gamma=[(w, body)], drop_gamma=[(w, f)]),)
    if r is Rule.EXISTS_R:
        ((w, f),) = inst.principal_delta
        _need(f.kind == "exists", "existsR needs a quantifier")
        (t,) = inst.exprs
        body = subst_expr(f.args[1], f.args[0], t)
        return (seq.requeue("delta", (w, f)).extend(delta=[(w, body)]),)

    # branching rules
    if r is Rule.AND_R:
        ((w, f),) = inst.principal_delta
        _need(f.kind == "and", "andR needs a conjunction")
        a, b = f.args
        return (seq.extend(delta=[(w, a)], drop_delta=[(w, f)]),
                seq.extend(delta=[(w, b)], drop_delta=[(w, f)]))
    if r is Rule.OR_L:
        ((w, f),) = inst.principal_gamma
        _need(f.kind == "or", "orL needs a disjunction")
        a, b = f.args
        return (seq.extend(gamma=[(w, a)], drop_gamma=[(w, f)]),
                seq.extend(gamma=[(w, b)], drop_gamma=[(w, f)]))
    if r is Rule.IMP_L:
        ((w, f),) = inst.principal_gamma
        _need(f.kind == "imp", "->L needs an implication")
        a, b = f.args
        return (seq.extend(delta=[(w, a)], drop_gamma=[(w, f)]),
                seq.extend(gamma=[(w, b)], drop_gamma=[(w, f)]))
    if r is Rule.STAR_R:
        ((z2, f),) = inst.principal_delta
        ((x, y, z),) = inst.principal_rels
        _need(f.kind == "star", "*R needs a star")
        _need(entails_eq(seq, z, z2), "*R atom target mismatch")
        a, b = f.args
        base = seq.requeue("delta", (z2, f))
        return (base.extend(delta=[(x, a)]), base.extend(delta=[(y, b)]))
    if r is Rule.WAND_L:
        ((w2, f),) = inst.principal_gamma
        ((x, w, z),) = inst.principal_rels
        _need(f.kind == "wand", "-*L needs a wand")
        _need(entails_eq(seq, w, w2), "-*L atom component mismatch")
        a, b = f.args
        base = seq.requeue("gamma", (w2, f))
        return (base.extend(delta=[(x, a)]), base.extend(gamma=[(z, b)]))
    if r is Rule.MAPSTO_L2:
        ((w, f),) = inst.principal_gamma
        ((h1, h2, h0),) = inst.principal_rels
        _need(f.kind == "mapsto", "|->L2 needs a cell")
        _need(entails_eq(seq, w, h0), "|->L2 atom target mismatch")

        def sub_branch(empty: Label, keep: Label) -> Sequent:
            # the empty component collapses to the identity, the other is h0
            p = _merge(seq, empty, EPS)
            m = lambda l: EPS if l == empty else l
            return _merge(p, m(keep), m(h0))

        return (sub_branch(h1, h2), sub_branch(h2, h1))
    if r is Rule.EM:
        (w,) = inst.labels
        _need(w in seq.labels, "EM label must occur")
        return (seq.extend(ineq=[(w, EPS)]),
                seq.extend(rel=[(EPS, w, EPS)]))

    # label substitution rules
    if r in _SUBST_RULES:
        ((frm, to),) = inst.subst
        _need(frm != EPS, "cannot eliminate the identity label")
        if r in (Rule.EQ1, Rule.EQ2):
            ((x, y, z),) = inst.principal_rels
            _need(x == EPS and {frm, to} == {y, z}, "bad equality atom")
        elif r is Rule.P:
            a1, a2 = inst.principal_rels
            _need(a1[:2] == a2[:2] and {frm, to} == {a1[2], a2[2]},
                  "P needs two atoms with equal inputs")
        elif r is Rule.C:
            a1, a2 = inst.principal_rels
            _need((a1[0], a1[2]) == (a2[0], a2[2]) and {frm, to} == {a1[1], a2[1]},
                  "C needs two atoms with equal first input and output")
        elif r is Rule.IU:
            ((x, y, z),) = inst.principal_rels
            _need(z == EPS and frm == x and to == EPS, "IU needs an atom into the identity")
        else:  # D
            ((x, y, z),) = inst.principal_rels
            _need(x == y and frm == x and to == EPS, "D needs a self-combination atom")
        return (seq.subst_label(frm, to),)
    if r is Rule.MAPSTO_L3:
        (h, f), (h2, f2) = inst.principal_gamma
        _need(f.kind == "mapsto" and f2.kind == "mapsto", "|->L3 needs two cells")
        _need(f.args[0] == f2.args[0] and h != h2, "|->L3 needs one address, two labels")
        frm, to = max(h, h2), min(h, h2)
        return (seq.subst_label(frm, to),)
    if r is Rule.MAPSTO_L4:
        (h, f), (h2, f2) = inst.principal_gamma
        _need(f.kind == "mapsto" and f2.kind == "mapsto", "|->L4 needs two cells")
        _need(h == h2 and f is not f2, "|->L4 needs one label, two distinct cells")
        e1, e2 = f.args
        e3, e4 = f2.args
        return (seq.subst_expr(e3, e1).subst_expr(e4, e2),)
    if r is Rule.EQ_L:
        ((h, f),) = inst.principal_gamma
        _need(f.kind == "eq", "=L needs an equality")
        e1, e2 = f.args
        return (seq.extend(drop_gamma=[(h, f)]).subst_expr(e1, e2),)

    # structural rules
    if r is Rule.E:
        ((x, y, z),) = inst.principal_rels
        return (seq.extend(rel=[(y, x, z)]),)
    if r is Rule.A:
        (x, y, z), (u, v, x2) = inst.principal_rels
        _need(x == x2, "A needs chained atoms")
        (w,) = inst.fresh
        return (seq.extend(rel=[(u, w, z), (y, v, w)]),)
    if r is Rule.A_C:
        ((x, y, z),) = inst.principal_rels
        _need(x == z, "AC needs an idempotent-shaped atom")
        (w,) = inst.fresh
        return (seq.extend(rel=[(x, w, x), (y, y, w)]),)
    if r is Rule.U:
        (w,) = inst.labels
        _need(w in seq.labels, "U label must occur")
        return (seq.extend(rel=[(w, EPS, w)]),)
    if r is Rule.S:
        ((z, z2),) = inst.principal_ineqs
        _need(z2 == EPS, "S needs an inequality with the identity")
        x, y = inst.fresh
        return (seq.extend(rel=[(x, y, z)], ineq=[(x, EPS), (y, EPS)]),)
    if r is Rule.CS:
        (x, y, z), (u, v, z2) = inst.principal_rels
        _need(entails_eq(seq, z, z2), "CS needs two splittings of one world")
        p, q, s, t = inst.fresh
        return (seq.extend(rel=[(p, q, x), (p, s, u), (s, t, y), (q, t, v)]),)
    if r is Rule.CS_C:
        ((x, y, z),) = inst.principal_rels
        p, q, s, t = inst.fresh
        return (seq.extend(rel=[(p, q, x), (p, s, x), (s, t, y), (q, t, y)]),)

    raise RuleError("unhandled rule %s" % r.value)


def check(deriv: Derivation, cfg: LogicConfig) -> bool:
    """Validate a closed derivation bottom-up.  Raises RuleError on any defect."""
    _need(deriv.conclusion is not None, "derivation has no conclusion")
    stack: List[Tuple[Sequent, Derivation]] = [(deriv.conclusion, deriv)]
    while stack:
        concl, d = stack.pop()
        _need(d.instance is not None, "open leaf in derivation")
        premises = expand(concl, d.instance, cfg)
        _need(len(premises) == len(d.premises),
              "rule %s expects %d premises, got %d"
              % (d.instance.rule.value, len(premises), len(d.premises)))
        for want, got in zip(premises, d.premises):
            if got.conclusion is not None:
                _need(want.rel_set == got.conclusion.rel_set
                      and want.ineq_set == got.conclusion.ineq_set
                      and want.gamma_set == got.conclusion.gamma_set
                      and want.delta_set == got.conclusion.delta_set,
                      "premise mismatch under rule %s" % d.instance.rule.value)
                want = got.conclusion
            stack.append((want, got))
    return True


def closures(seq: Sequent, cfg: LogicConfig) -> Optional[RuleInstance]:
    """Find a zero-premise rule instance closing seq, if any."""
    from .unify import eq_find
    find = eq_find(seq)
    left = {}
    for lf in seq.gamma:
        w, f = lf
        if f is BOT:
            return RuleInstance(Rule.BOT_L, principal_gamma=(lf,))
        if _atomic(f):
            left.setdefault(f, []).append(lf)
        if cfg.heap_extension and f.kind == "mapsto" and find(w) == find(EPS):
            return RuleInstance(Rule.MAPSTO_L1, principal_gamma=(lf,))
    for lf in seq.delta:
        w, f = lf
        if f is TOP:
            return RuleInstance(Rule.TOP_R, principal_delta=(lf,))
        if f is EMP and find(w) == find(EPS):
            return RuleInstance(Rule.EMP_R, principal_delta=(lf,))
        if cfg.heap_extension and f.kind == "eq" and f.args[0] == f.args[1]:
            return RuleInstance(Rule.EQ_R, principal_delta=(lf,))
        if _atomic(f):
            for lg in left.get(f, ()):
                if find(lg[0]) == find(w):
                    return RuleInstance(Rule.ID, principal_gamma=(lg,),
                                        principal_delta=(lf,))
    if cfg.splittability:
        for q in seq.ineq:
            if find(q[0]) == find(q[1]):
                return RuleInstance(Rule.NEQ_L, principal_ineqs=(q,))
    return None
