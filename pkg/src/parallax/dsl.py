"""Parser and serializer for the discourse (.plf) and rule (.pkb) notations.

Discourse files are line oriented.  A document has an optional preamble of
discourse-level lines, then clause blocks:

    before'(e12, e22)                 # relation between eventualities
    contrast(before'(e12, e22), after'(e12, e32))
    parallel(e12, e22)                # explicit parallelism requirement
    clause c1:
        revise'(e12, j, p1)           # predication: first id is the self
        John'(e11, j)                 # capitalized predicate = proper name
        pron he'(e13, x1)             # pronoun-introduced description
        coref(x1, e13, j, e11)
    clause c2:
        ellipsis(e22, t)
        teacher'(e21, t)

``#`` at the start of a line or after whitespace begins a comment.  The
ASCII apostrophe is part of the predicate symbol.  Relation selves are
parser-generated ``_``-prefixed names; serialized documents carry them
explicitly and hand-written files normally omit them.

Rule files hold one implication per line; capitalized identifiers in
argument positions are rule-scoped variables:

    feet-are-ends: foot(F, L) => end(F, L)
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .lf import (
    Clause,
    CorefLink,
    DiscourseLF,
    EllipsisSite,
    Predication,
)
from .kb import Rule, RuleSet

__all__ = [
    "SourceDocument",
    "ParseDiagnostic",
    "ParseError",
    "parse_discourse",
    "parse_kb",
    "serialize",
]


@dataclass(frozen=True)
class SourceDocument:
    text: str
    origin: str = "<inline>"


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str

    def render(self, origin: str = "<inline>") -> str:
        return "%s:%d:%d: %s" % (origin, self.line, self.column, self.message)


class ParseError(Exception):
    """Carries every diagnostic for the document; no partial results."""

    def __init__(self, diagnostics: list[ParseDiagnostic], origin: str = "<inline>"):
        self.diagnostics = diagnostics
        self.origin = origin
        super().__init__(
            "; ".join(d.render(origin) for d in diagnostics) or "parse error"
        )


_TOKEN = re.compile(r"[A-Za-z0-9][A-Za-z0-9_'#-]*|_[A-Za-z0-9_'#-]+|[(),:]|\S")
_COMMENT = re.compile(r"(?:^|(?<=\s))#.*$")


@dataclass
class _Term:
    name: str
    args: list  # str | _Term
    line: int
    column: int
    marker: str | None = None


class _LineParser:
    def __init__(self, text: str, lineno: int, diags: list[ParseDiagnostic]):
        self.text = text
        self.lineno = lineno
        self.diags = diags
        self.tokens: list[tuple[str, int]] = [
            (m.group(0), m.start() + 1) for m in _TOKEN.finditer(text)
        ]
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def col(self) -> int:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return len(self.text) + 1

    def take(self) -> str | None:
        tok = self.peek()
        if tok is not None:
            self.pos += 1
        return tok

    def error(self, message: str, column: int | None = None) -> None:
        self.diags.append(
            ParseDiagnostic(self.lineno, self.col() if column is None else column, message)
        )

    def expect(self, tok: str) -> bool:
        if self.peek() == tok:
            self.take()
            return True
        self.error("expected %r" % tok)
        return False

    def term(self) -> _Term | None:
        col = self.col()
        name = self.take()
        if name is None or name in "(),:":
            self.error("expected a predicate or keyword", col)
            return None
        marker = None
        if name == "pron":
            marker = name
            col = self.col()
            name = self.take()
            if name is None or name in "(),:":
                self.error("expected a predicate after %r" % marker, col)
                return None
        if not self.expect("("):
            return None
        args: list = []
        if self.peek() == ")":
            self.take()
            return _Term(name, args, self.lineno, col, marker)
        while True:
            acol = self.col()
            tok = self.take()
            if tok is None or tok in "),:(":
                self.error("expected an identifier", acol)
                return None
            if self.peek() == "(":  # nested term (contrast arguments)
                self.take()
                inner = _Term(tok, [], self.lineno, acol)
                if self.peek() != ")":
                    while True:
                        icol = self.col()
                        itok = self.take()
                        if itok is None or itok in "),:(":
                            self.error("expected an identifier", icol)
                            return None
                        inner.args.append(itok)
                        if self.peek() == ",":
                            self.take()
                            continue
                        break
                if not self.expect(")"):
                    return None
                args.append(inner)
            else:
                args.append(tok)
            if self.peek() == ",":
                self.take()
                continue
            break
        if not self.expect(")"):
            return None
        if self.peek() is not None:
            self.error("unexpected trailing %r" % self.peek())
            return None
        return _Term(name, args, self.lineno, col, marker)


def _logical_lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        line = _COMMENT.sub("", raw).strip()
        if line:
            yield n, line


_ID_OK = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_'#-]*$")


def parse_discourse(doc: str | SourceDocument) -> DiscourseLF:
    """Parse a discourse document; raises ParseError with all diagnostics."""
    if isinstance(doc, str):
        doc = SourceDocument(doc)
    diags: list[ParseDiagnostic] = []
    clauses: list[tuple[str, list[str]]] = []
    predications: list[Predication] = []
    corefs: list[CorefLink] = []
    ellipses: list[EllipsisSite] = []
    relations: list[Predication] = []
    contrast_terms: list[tuple[_Term, _Term, int, int]] = []
    parallels: list[tuple[str, str]] = []
    in_clause = False
    rel_counts: dict[str, int] = {}

    def relation_self(pred: str) -> str:
        base = "_" + pred.replace("'", "")
        n = rel_counts.get(base, 0)
        while True:
            n += 1
            cand = "%s%d" % (base, n)
            if all(r.ev != cand for r in relations):
                rel_counts[base] = n
                return cand

    def check_ids(term: _Term, ids: list[str]) -> bool:
        ok = True
        for i in ids:
            if not _ID_OK.match(i):
                diags.append(
                    ParseDiagnostic(term.line, term.column, "malformed identifier %r" % i)
                )
                ok = False
        return ok

    for lineno, line in _logical_lines(doc.text):
        lp = _LineParser(line, lineno, diags)
        head = lp.peek()
        if head == "clause":
            lp.take()
            label = lp.take()
            if label is None or label in "(),:":
                lp.error("expected a clause label")
                continue
            if not lp.expect(":"):
                continue
            clauses.append((label, []))
            in_clause = True
            continue
        term = lp.term()
        if term is None:
            continue
        flat = [a for a in term.args if isinstance(a, str)]
        nested = [a for a in term.args if isinstance(a, _Term)]
        if term.name == "coref":
            if nested or len(flat) not in (4, 5) or not check_ids(term, flat[:4]):
                lp.error("coref takes four identifiers", term.column)
                continue
            provenance = flat[4] if len(flat) == 5 else "input"
            corefs.append(CorefLink(flat[0], flat[1], flat[2], flat[3], provenance))
        elif term.name == "ellipsis":
            if not in_clause:
                lp.error("ellipsis outside any clause", term.column)
                continue
            if nested or not flat or not check_ids(term, flat):
                lp.error("ellipsis takes a site id and its overt arguments", term.column)
                continue
            ellipses.append(EllipsisSite(flat[0], tuple(flat[1:])))
            clauses[-1][1].append(flat[0])
        elif term.name == "parallel":
            if in_clause:
                lp.error("parallel lines belong in the preamble", term.column)
                continue
            if nested or len(flat) != 2 or not check_ids(term, flat):
                lp.error("parallel takes two eventualities", term.column)
                continue
            parallels.append((flat[0], flat[1]))
        elif term.name == "contrast":
            if in_clause:
                lp.error("contrast lines belong in the preamble", term.column)
                continue
            if len(nested) != 2 or flat:
                lp.error("contrast takes two relation forms", term.column)
                continue
            contrast_terms.append((nested[0], nested[1], term.line, term.column))
        elif not in_clause:
            # Discourse relation; an explicit _-prefixed self may lead.
            if nested or not flat:
                lp.error("relation takes eventuality arguments", term.column)
                continue
            if flat[0].startswith("_"):
                ev, args = flat[0], flat[1:]
            else:
                ev, args = relation_self(term.name), flat
            if not check_ids(term, args):
                continue
            relations.append(Predication(term.name, ev, tuple(args)))
        else:
            if nested or not flat or not check_ids(term, flat):
                lp.error("predication takes a self id and arguments", term.column)
                continue
            if flat[0].startswith("_"):
                lp.error("ids starting with _ are reserved", term.column)
                continue
            predications.append(
                Predication(term.name, flat[0], tuple(flat[1:]), term.marker == "pron")
            )
            clauses[-1][1].append(flat[0])

    # Resolve contrast forms against the declared relations.
    contrasts: list[tuple[str, str]] = []
    for left, right, line, col in contrast_terms:
        pair = []
        for form in (left, right):
            args = tuple(a for a in form.args if isinstance(a, str))
            match = [
                r
                for r in relations
                if r.pred == form.name and (r.args == args or (r.ev,) + r.args == args)
            ]
            if not match:
                diags.append(
                    ParseDiagnostic(line, col, "contrast names unknown relation %s" % form.name)
                )
                break
            pair.append(match[0].ev)
        if len(pair) == 2:
            contrasts.append((pair[0], pair[1]))

    lf = DiscourseLF(
        clauses=tuple(Clause(label, tuple(members)) for label, members in clauses),
        predications=tuple(predications),
        corefs=tuple(corefs),
        ellipses=tuple(ellipses),
        relations=tuple(relations),
        contrasts=tuple(contrasts),
        parallels=tuple(parallels),
    )

    if not diags:
        from .lf import validate

        for problem in validate(lf):
            diags.append(ParseDiagnostic(1, 1, problem))
    if diags:
        raise ParseError(diags, doc.origin)
    return lf


_VARIABLE = re.compile(r"^[A-Z][A-Za-z0-9_]*$")


def parse_kb(doc: str | SourceDocument) -> RuleSet:
    """Parse a rule document; raises ParseError with all diagnostics."""
    if isinstance(doc, str):
        doc = SourceDocument(doc)
    diags: list[ParseDiagnostic] = []
    rules: list[Rule] = []
    names: set[str] = set()
    auto = 0
    for lineno, line in _logical_lines(doc.text):
        name = None
        body = line
        m = re.match(r"^([A-Za-z0-9][A-Za-z0-9_'-]*)\s*:\s*(.*)$", line)
        if m and "=>" in m.group(2):
            name, body = m.group(1), m.group(2)
        if "=>" not in body:
            diags.append(ParseDiagnostic(lineno, 1, "rule needs '=>'"))
            continue
        ant_text, _, cons_text = body.partition("=>")
        lp_a = _LineParser(ant_text.strip(), lineno, diags)
        ant = lp_a.term()
        lp_c = _LineParser(cons_text.strip(), lineno, diags)
        cons = lp_c.term()
        if ant is None or cons is None:
            continue
        ant_args = tuple(a for a in ant.args if isinstance(a, str))
        cons_args = tuple(a for a in cons.args if isinstance(a, str))
        ant_vars = {a for a in ant_args if _VARIABLE.match(a)}
        unbound = [a for a in cons_args if _VARIABLE.match(a) and a not in ant_vars]
        if unbound:
            diags.append(
                ParseDiagnostic(lineno, cons.column, "unbound rule variable %s" % unbound[0])
            )
            continue
        if name is None:
            auto += 1
            name = "r%d" % auto
        if name in names:
            diags.append(ParseDiagnostic(lineno, 1, "duplicate rule name %s" % name))
            continue
        names.add(name)
        rules.append(Rule(name, ant.name, ant_args, cons.name, cons_args))
    if diags:
        raise ParseError(diags, doc.origin)
    return RuleSet(tuple(rules))


def serialize(lf: DiscourseLF) -> str:
    """Render a discourse so that parsing the output reproduces it."""
    from .lf import validate

    problems = validate(lf)
    if problems:
        raise ParseError(
            [ParseDiagnostic(1, 1, "invalid discourse: %s" % p) for p in problems]
        )
    out: list[str] = []
    for r in lf.relations:
        out.append("%s(%s)" % (r.pred, ", ".join((r.ev,) + r.args)))
    rel_by_ev = {r.ev: r for r in lf.relations}
    for a, b in lf.contrasts:
        ra, rb = rel_by_ev[a], rel_by_ev[b]
        out.append(
            "contrast(%s(%s), %s(%s))"
            % (ra.pred, ", ".join((ra.ev,) + ra.args), rb.pred, ", ".join((rb.ev,) + rb.args))
        )
    for a, b in lf.parallels:
        out.append("parallel(%s, %s)" % (a, b))
    for link in lf.corefs:
        if link.provenance == "input":
            out.append(link.render())
        else:
            out.append(
                "coref(%s, %s, %s, %s, %s)"
                % (link.y, link.desc_y, link.x, link.desc_x, link.provenance)
            )
    pred_by_ev = {p.ev: p for p in lf.predications}
    site_by_ev = {s.ev: s for s in lf.ellipses}
    for c in lf.clauses:
        out.append("clause %s:" % c.label)
        for m in c.members:
            if m in pred_by_ev:
                out.append("    " + pred_by_ev[m].render())
            elif m in site_by_ev:
                out.append("    " + site_by_ev[m].render())
    return "\n".join(out) + ("\n" if out else "")
