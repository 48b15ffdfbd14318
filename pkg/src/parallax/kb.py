"""Bounded forward inference over single-antecedent rules.

Rules match predications on predicate and argument positions only; the
self-eventuality is never part of a pattern, and every derived predication
gets a fresh self that records what it was derived from.  Derivability is
approximated by a configurable depth bound, which is enough for the
inferences the resolution engine needs (category chains like man -> person).
"""

from __future__ import annotations

from dataclasses import dataclass

from .lf import DiscourseLF, Predication

__all__ = [
    "Rule",
    "RuleSet",
    "DerivedForm",
    "closure",
    "derive",
    "derivable",
    "inferentially_independent",
    "relevant_properties",
]

DEFAULT_MAX_DEPTH = 3


@dataclass(frozen=True)
class Rule:
    """ant_pred(ant_args) => cons_pred(cons_args); capitalized args are variables."""

    name: str
    ant_pred: str
    ant_args: tuple[str, ...]
    cons_pred: str
    cons_args: tuple[str, ...]

    def render(self) -> str:
        return "%s: %s(%s) => %s(%s)" % (
            self.name,
            self.ant_pred,
            ", ".join(self.ant_args),
            self.cons_pred,
            ", ".join(self.cons_args),
        )


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...] = ()
    max_depth: int = DEFAULT_MAX_DEPTH

    def render(self) -> str:
        return "\n".join(r.render() for r in self.rules) + ("\n" if self.rules else "")


EMPTY_RULESET = RuleSet()


def _is_variable(token: str) -> bool:
    return token[:1].isupper() and "'" not in token


def _match(rule: Rule, p: Predication) -> dict[str, str] | None:
    if rule.ant_pred != p.pred or len(rule.ant_args) != len(p.args):
        return None
    binding: dict[str, str] = {}
    for pat, arg in zip(rule.ant_args, p.args):
        if _is_variable(pat):
            if binding.setdefault(pat, arg) != arg:
                return None
        elif pat != arg:
            return None
    return binding


@dataclass(frozen=True)
class DerivedForm:
    """A predication reachable from a seed, with the rule applications used."""

    predication: Predication
    applications: tuple[tuple[Rule, Predication], ...]

    @property
    def depth(self) -> int:
        return len(self.applications)


def closure(p: Predication, kb: RuleSet) -> tuple[DerivedForm, ...]:
    """Everything reachable from p within the depth bound, p itself first."""
    out: list[DerivedForm] = [DerivedForm(p, ())]
    seen: set[tuple[str, tuple[str, ...]]] = {(p.pred, p.args)}
    frontier = [out[0]]
    fresh = 0
    for _ in range(max(kb.max_depth, 0)):
        nxt: list[DerivedForm] = []
        for form in frontier:
            for rule in kb.rules:
                binding = _match(rule, form.predication)
                if binding is None:
                    continue
                args = tuple(
                    binding[a] if _is_variable(a) else a for a in rule.cons_args
                )
                key = (rule.cons_pred, args)
                if key in seen:
                    continue
                seen.add(key)
                fresh += 1
                derived = Predication(rule.cons_pred, "%s~%d" % (p.ev, fresh), args)
                nxt.append(
                    DerivedForm(derived, form.applications + ((rule, form.predication),))
                )
        out.extend(nxt)
        frontier = nxt
        if not frontier:
            break
    return tuple(out)


def derive(p: Predication, kb: RuleSet) -> tuple[Predication, ...]:
    """Predications reachable from p by at most max_depth rule applications."""
    return tuple(form.predication for form in closure(p, kb))


def derivable(q: Predication, p: Predication, kb: RuleSet) -> bool:
    """True iff q is in derive(p, kb), ignoring self-eventuality names."""
    want = (q.pred, q.args)
    return any((d.pred, d.args) == want for d in derive(p, kb))


def inferentially_independent(p: Predication, q: Predication, kb: RuleSet) -> bool:
    return not derivable(p, q, kb) and not derivable(q, p, kb)


def relevant_properties(
    x: str,
    lf: DiscourseLF,
    kb: RuleSet = EMPTY_RULESET,
    used: tuple[Predication, ...] = (),
) -> tuple[Predication, ...]:
    """Properties of x usable for similarity: explicit first, derived appended.

    Members inferentially dependent on anything in ``used`` are dropped;
    that is what makes the property recursion bottom out.
    """
    if x not in lf.declared_ids:
        from .lf import LfError

        raise LfError("unresolved reference: %s" % x)
    # Clause heads are the assertions being related, not descriptions of
    # their participants; they never count as similarity-relevant properties.
    heads = {c.head for c in lf.clauses}
    explicit = tuple(p for p in lf.properties_of(x) if p.ev not in heads)
    derived: list[Predication] = []
    seen = {(p.pred, p.args) for p in explicit}
    for p in explicit:
        for d in derive(p, kb)[1:]:
            if x not in d.args:
                continue
            key = (d.pred, d.args)
            if key not in seen:
                seen.add(key)
                derived.append(d)

    def independent(p: Predication) -> bool:
        return all(inferentially_independent(p, u, kb) for u in used)

    return tuple(p for p in tuple(explicit) + tuple(derived) if independent(p))
