"""Immutable logical-form structures and elementary graph operations.

A discourse is a set of predications over entity and eventuality symbols,
plus coreference links, ellipsis sites, discourse-level relations between
eventualities, and clause grouping.  Everything here is plain data; the
resolution machinery lives in the engine modules.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


class LfError(Exception):
    """Raised for malformed references or inconsistent coreference."""


#: provenance values for coreference links
INPUT = "input"
ASSUMED_STRICT = "assumed-strict"
ASSUMED_SIMILAR = "assumed-similar"
ASSUMED_BAILOUT = "assumed-bailout"

PROVENANCES = (INPUT, ASSUMED_STRICT, ASSUMED_SIMILAR, ASSUMED_BAILOUT)


@dataclass(frozen=True)
class Predication:
    """One property ascription: pred'(ev, arg1, ..., argn).

    ``ev`` is the self-eventuality reifying the ascription.  ``pron`` marks
    descriptions introduced by a pronoun token; those entities are the
    choice points of ellipsis resolution.
    """

    pred: str
    ev: str
    args: tuple[str, ...]
    pron: bool = False

    @property
    def is_proper(self) -> bool:
        # Proper-name descriptions are written with a capitalized predicate.
        return self.pred[:1].isupper()

    def ids(self) -> tuple[str, ...]:
        return (self.ev,) + self.args

    def render(self, with_self: bool = True) -> str:
        inner = self.ids() if with_self else self.args
        text = "%s(%s)" % (self.pred, ", ".join(inner))
        return ("pron " + text) if self.pron else text


@dataclass(frozen=True)
class CorefLink:
    """Coref(y, desc_y, x, desc_x): y under desc_y corefers with x under desc_x.

    Identifies the entities but never the description eventualities.
    """

    y: str
    desc_y: str
    x: str
    desc_x: str
    provenance: str = INPUT

    def render(self) -> str:
        return "coref(%s, %s, %s, %s)" % (self.y, self.desc_y, self.x, self.desc_x)


@dataclass(frozen=True)
class EllipsisSite:
    """An eventuality of unknown type with its overtly expressed arguments."""

    ev: str
    overt: tuple[str, ...]

    def render(self) -> str:
        return "ellipsis(%s)" % ", ".join((self.ev,) + self.overt)


@dataclass(frozen=True)
class Clause:
    """A textual clause: label plus its member eventualities in order."""

    label: str
    members: tuple[str, ...]

    @property
    def head(self) -> str:
        return self.members[0]


@dataclass(frozen=True)
class DiscourseLF:
    """A discourse's full logical form.

    ``relations`` holds discourse-level predications whose arguments are
    eventualities (before', after', ...); their selves are parser-generated
    ``_``-prefixed names.  ``contrasts`` pairs relation selves that stand in
    a contrast; ``parallels`` pairs eventualities whose clauses must be
    proved parallel.
    """

    clauses: tuple[Clause, ...] = ()
    predications: tuple[Predication, ...] = ()
    corefs: tuple[CorefLink, ...] = ()
    ellipses: tuple[EllipsisSite, ...] = ()
    relations: tuple[Predication, ...] = ()
    contrasts: tuple[tuple[str, str], ...] = ()
    parallels: tuple[tuple[str, str], ...] = ()

    # -- lookup helpers -------------------------------------------------

    def predication_of(self, ev: str) -> Predication | None:
        for p in self.predications:
            if p.ev == ev:
                return p
        return None

    def relation_of(self, ev: str) -> Predication | None:
        for r in self.relations:
            if r.ev == ev:
                return r
        return None

    def site_of(self, ev: str) -> EllipsisSite | None:
        for s in self.ellipses:
            if s.ev == ev:
                return s
        return None

    def clause_of(self, ev: str) -> Clause | None:
        for c in self.clauses:
            if ev in c.members:
                return c
        return None

    @property
    def eventuality_ids(self) -> tuple[str, ...]:
        out = [p.ev for p in self.predications]
        out.extend(s.ev for s in self.ellipses)
        out.extend(r.ev for r in self.relations)
        return tuple(out)

    @property
    def declared_ids(self) -> tuple[str, ...]:
        """All ids in declaration (textual) order, selves before arguments."""
        seen: dict[str, None] = {}
        for p in self.predications:
            for i in p.ids():
                seen.setdefault(i)
        for s in self.ellipses:
            seen.setdefault(s.ev)
            for i in s.overt:
                seen.setdefault(i)
        for r in self.relations:
            seen.setdefault(r.ev)
        return tuple(seen)

    @property
    def entity_ids(self) -> tuple[str, ...]:
        evs = set(self.eventuality_ids)
        return tuple(i for i in self.declared_ids if i not in evs)

    def declaration_index(self, i: str) -> int:
        try:
            return self.declared_ids.index(i)
        except ValueError:
            raise LfError("unresolved reference: %s" % i) from None

    def properties_of(self, x: str) -> tuple[Predication, ...]:
        """Explicit predications mentioning x as an argument, textual order."""
        return tuple(p for p in self.predications if x in p.args)

    def description_of(self, x: str) -> Predication | None:
        """The predication introducing x; unary descriptions take precedence."""
        props = self.properties_of(x)
        for p in props:
            if p.args == (x,):
                return p
        for p in props:
            if p.pron and p.args and p.args[0] == x:
                return p
        return props[0] if props else None

    def pron_description_of(self, x: str) -> Predication | None:
        for p in self.properties_of(x):
            if p.pron and p.args and p.args[0] == x:
                return p
        return None

    def desc_event_for(self, x: str) -> str:
        """A description eventuality usable as a Coref desc slot for x."""
        d = self.pron_description_of(x) or self.description_of(x)
        if d is not None:
            return d.ev
        raise LfError("no description available for %s" % x)

    def extended(self, **parts) -> "DiscourseLF":
        """A copy with tuple fields extended by the given extra elements."""
        updates = {}
        for name, extra in parts.items():
            updates[name] = getattr(self, name) + tuple(extra)
        return replace(self, **updates)


class FreshNamer:
    """Issues fresh ids of the form old#n, unique within one session."""

    def __init__(self, taken: set[str] | None = None):
        self._taken = set(taken or ())
        self._counters: dict[str, int] = {}

    def fresh(self, old: str) -> str:
        base = old.split("#", 1)[0]
        n = self._counters.get(base, 0)
        while True:
            n += 1
            cand = "%s#%d" % (base, n)
            if cand not in self._taken:
                self._counters[base] = n
                self._taken.add(cand)
                return cand


def fresh_copy(
    lf: DiscourseLF,
    source_events: set[str] | frozenset[str],
    namer: FreshNamer | None = None,
) -> tuple[tuple[Predication, ...], dict[str, str]]:
    """Copy the predications reifying ``source_events`` with fresh ids.

    The source set must be closed under argument reachability: any
    eventuality argument of a copied predication must itself be in the set.
    Entity arguments and description predications of those entities are
    copied along.  Input coreference links among the copied elements are
    deliberately not carried over.
    """
    namer = namer or FreshNamer(set(lf.declared_ids))
    events = set(lf.eventuality_ids)
    for ev in source_events:
        if ev not in events:
            raise LfError("unresolved reference: %s" % ev)

    # Collect predications to copy: the sources, plus descriptions of every
    # entity they mention, transitively.
    to_copy: list[Predication] = []
    seen_evs: set[str] = set()
    entity_queue: list[str] = []

    def take(p: Predication) -> None:
        if p.ev in seen_evs:
            return
        seen_evs.add(p.ev)
        to_copy.append(p)
        for a in p.args:
            if a in events:
                if a not in source_events and a not in seen_evs:
                    raise LfError(
                        "source set not closed under reachability: %s" % a
                    )
            elif a not in entity_queue:
                entity_queue.append(a)

    for ev in sorted(source_events, key=lambda e: _order_key(lf, e)):
        p = lf.predication_of(ev) or lf.relation_of(ev)
        if p is None:
            raise LfError("unresolved reference: %s" % ev)
        take(p)
    while entity_queue:
        x = entity_queue.pop(0)
        for p in lf.properties_of(x):
            if p.ev in source_events or _describes_only_copied(p, source_events, lf):
                take(p)

    renaming: dict[str, str] = {}

    def rename(i: str) -> str:
        if i not in renaming:
            renaming[i] = namer.fresh(i)
        return renaming[i]

    copied = []
    for p in sorted(to_copy, key=lambda q: _order_key(lf, q.ev)):
        copied.append(
            Predication(p.pred, rename(p.ev), tuple(rename(a) for a in p.args), p.pron)
        )
    return tuple(copied), renaming


def _order_key(lf: DiscourseLF, ev: str) -> int:
    for i, p in enumerate(lf.predications):
        if p.ev == ev:
            return i
    for i, r in enumerate(lf.relations):
        if r.ev == ev:
            return len(lf.predications) + i
    return len(lf.predications) + len(lf.relations)


def _describes_only_copied(
    p: Predication, source_events: set[str] | frozenset[str], lf: DiscourseLF
) -> bool:
    """True if p is an entity description not anchored in uncopied events."""
    events = set(lf.eventuality_ids)
    return all(a not in events for a in p.args)


class CorefClasses:
    """Union-find over entity/eventuality coreference links."""

    def __init__(self, lf: DiscourseLF, links: tuple[CorefLink, ...] | None = None):
        self._lf = lf
        self._parent: dict[str, str] = {}
        for link in lf.corefs if links is None else links:
            self._union(link.y, link.x)

    def _find(self, i: str) -> str:
        p = self._parent.get(i, i)
        if p == i:
            return i
        root = self._find(p)
        self._parent[i] = root
        return root

    def _union(self, a: str, b: str) -> None:
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            self._parent[ra] = rb

    def same(self, a: str, b: str) -> bool:
        return self._find(a) == self._find(b)

    def members(self, x: str) -> list[str]:
        root = self._find(x)
        ids = set(self._parent) | set(self._parent.values()) | {x}
        return [i for i in ids if self._find(i) == root]

    def canonical(self, x: str) -> str:
        """Class representative: proper-name member, else earliest declared."""
        members = self.members(x)
        proper: list[tuple[str, str]] = []
        for m in members:
            d = self._lf.description_of(m)
            if d is not None and d.is_proper and d.args and d.args[0] == m:
                proper.append((d.pred, m))
        if proper:
            names = {pred for pred, _ in proper}
            if len(names) > 1:
                raise LfError(
                    "inconsistent coreference: distinct proper names %s in one class"
                    % ", ".join(sorted(names))
                )
            return min((m for _, m in proper), key=key_declared(self._lf))
        return min(members, key=key_declared(self._lf))


def key_declared(lf: DiscourseLF):
    declared = {i: n for n, i in enumerate(lf.declared_ids)}
    fallback = len(declared)

    def key(i: str) -> tuple[int, str]:
        return (declared.get(i, fallback), i)

    return key


def coref_chain_resolve(x: str, lf: DiscourseLF) -> str:
    """Canonical representative of x's input-coreference class."""
    if x not in lf.declared_ids:
        raise LfError("unresolved reference: %s" % x)
    return CorefClasses(lf).canonical(x)


def validate(lf: DiscourseLF) -> list[str]:
    """Check every structural invariant; one diagnostic per violation."""
    out: list[str] = []
    seen_selves: set[str] = set()
    for p in tuple(lf.predications) + tuple(lf.relations):
        if p.ev in seen_selves:
            out.append("duplicate eventuality %s" % p.ev)
        seen_selves.add(p.ev)
    for s in lf.ellipses:
        if s.ev in seen_selves:
            out.append("duplicate eventuality %s" % s.ev)
        seen_selves.add(s.ev)

    events = set(lf.eventuality_ids)
    declared = set(lf.declared_ids)

    arity: dict[str, int] = {}
    for p in lf.predications:
        n = arity.setdefault(p.pred, len(p.args))
        if n != len(p.args):
            out.append("inconsistent arity for %s at %s" % (p.pred, p.ev))

    for r in lf.relations:
        for a in r.args:
            if a not in events:
                out.append("relation %s argument %s is not an eventuality" % (r.pred, a))

    for link in lf.corefs:
        for end in (link.y, link.x):
            if end not in declared:
                out.append("coref endpoint %s undeclared" % end)
        for end, desc in ((link.y, link.desc_y), (link.x, link.desc_x)):
            dp = lf.predication_of(desc)
            if dp is None:
                out.append("coref description %s undeclared" % desc)
            elif end not in dp.args:
                out.append("coref description %s is not a property of %s" % (desc, end))
        if link.provenance not in PROVENANCES:
            out.append("unknown coref provenance %r" % link.provenance)

    for s in lf.ellipses:
        if lf.predication_of(s.ev) is not None:
            out.append("ellipsis site %s already has a predication" % s.ev)
        for a in s.overt:
            if a not in declared:
                out.append("ellipsis argument %s undeclared" % a)

    member_owner: dict[str, str] = {}
    for c in lf.clauses:
        for m in c.members:
            if m not in events:
                out.append("clause %s member %s undeclared" % (c.label, m))
            if m in member_owner:
                out.append("eventuality %s in two clauses" % m)
            member_owner[m] = c.label

    rel_selves = {r.ev for r in lf.relations}
    for a, b in lf.contrasts:
        for end in (a, b):
            if end not in rel_selves:
                out.append("contrast endpoint %s is not a relation" % end)
    for a, b in lf.parallels:
        for end in (a, b):
            if end not in events:
                out.append("parallel endpoint %s undeclared" % end)
    return out
