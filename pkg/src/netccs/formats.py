"""Parsers and printers for every external representation.

Formats owned here, all byte-stable on canonical values:

* ``.pn`` net text — line oriented: ``place <id> [tokens <n>]``,
  ``transition <id> [label <action>|tau]``, ``arc <from> <to>`` (direction
  inferred from the endpoint kinds), ``#`` comments. Identifiers match
  ``[A-Za-z][A-Za-z0-9_]*``; a leading underscore is reserved for fresh names
  introduced by rewrites and rejected on input.
* PNML subset — single page, unweighted arcs, optional ``initialMarking``;
  a transition's display name is its action label (its id when absent), and
  the literal name ``tau`` denotes the internal action.
* CCS text — ``Name = body`` per defining equation plus exactly one bare
  process line for the top-level process. ``new a, b in (...)`` restricts,
  ``'a`` is the co-action, ``tau`` the internal action; prefix binds tighter
  than ``+``, which binds tighter than ``|``.
* ``.aut`` — Aldebaran: ``des (<initial>, <edge-count>, <state-count>)``
  followed by one ``(<src>, "<label>", <dst>)`` line per edge.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET

from .ccs import (
    Action,
    DefiningEquations,
    NIL,
    NameRef,
    Prefix,
    Process,
    Restriction,
    TAU_ACTION,
    is_sequential,
    par_of,
    render_process,
    sum_of,
)
from .encode import EncodingResult
from .errors import (
    FiniteNetViolationError,
    ParseError,
    SourceSpan,
    UnsupportedFeatureError,
)
from .lts import TAU, Lts
from .nets import Marking, PetriNet

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*$")


def _line_span(text: str, line_no: int, line: str, word: str) -> SourceSpan:
    offset = 0
    for _ in range(line_no - 1):
        offset = text.index("\n", offset) + 1
    column = line.find(word)
    column = 0 if column < 0 else column
    start = offset + column
    return SourceSpan(start=start, end=start + len(word), line=line_no, column=column + 1)


def parse_net_text(text: str) -> tuple[PetriNet, Marking]:
    """Parse the ``.pn`` net format into a net and its initial marking."""
    places: dict[str, int] = {}
    transitions: dict[str, str] = {}
    arcs: list[tuple[str, str]] = []
    arc_spans: list[SourceSpan] = []

    def err(line_no, line, word, message):
        raise ParseError(message, _line_span(text, line_no, line, word))

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        words = line.split()
        kind = words[0]
        if kind == "place":
            if len(words) not in (2, 4) or (len(words) == 4 and words[2] != "tokens"):
                err(line_no, raw, kind, "expected: place <id> [tokens <n>]")
            ident = words[1]
            _check_pn_ident(text, line_no, raw, ident)
            if ident in places or ident in transitions:
                err(line_no, raw, ident, f"duplicate identifier {ident}")
            count = 0
            if len(words) == 4:
                if not words[3].isdigit():
                    err(line_no, raw, words[3], "token count must be a non-negative integer")
                count = int(words[3])
            places[ident] = count
        elif kind == "transition":
            if len(words) not in (2, 4) or (len(words) == 4 and words[2] != "label"):
                err(line_no, raw, kind, "expected: transition <id> [label <action>]")
            ident = words[1]
            _check_pn_ident(text, line_no, raw, ident)
            if ident in places or ident in transitions:
                err(line_no, raw, ident, f"duplicate identifier {ident}")
            label = ident
            if len(words) == 4:
                label = words[3]
                if label != TAU:
                    _check_pn_ident(text, line_no, raw, label)
            transitions[ident] = label
        elif kind == "arc":
            if len(words) != 3:
                err(line_no, raw, kind, "expected: arc <from> <to>")
            src, dst = words[1], words[2]
            for endpoint in (src, dst):
                if endpoint not in places and endpoint not in transitions:
                    err(line_no, raw, endpoint, f"arc endpoint {endpoint} is not a declared place or transition")
            same_kind = (src in places) == (dst in places)
            if same_kind:
                err(line_no, raw, src, "an arc must join a place and a transition")
            if (src, dst) in arcs:
                err(line_no, raw, src, f"duplicate arc {src} -> {dst}")
            arcs.append((src, dst))
            arc_spans.append(_line_span(text, line_no, raw, src))
        else:
            err(line_no, raw, kind, f"unknown directive {kind!r}")

    net = PetriNet(
        places=tuple(places),
        transitions=tuple(transitions),
        edges=frozenset(arcs),
        labelling=transitions,
    )
    return net, Marking(places)


def _check_pn_ident(text: str, line_no: int, raw: str, ident: str) -> None:
    if ident.startswith("_"):
        raise ParseError(
            f"identifier {ident} starts with an underscore, which is reserved for generated names",
            _line_span(text, line_no, raw, ident),
        )
    if not IDENT_RE.match(ident):
        raise ParseError(f"bad identifier {ident!r}", _line_span(text, line_no, raw, ident))


def print_net_text(net: PetriNet, m0: Marking) -> str:
    """Render a net back to ``.pn`` text; parsing the result reproduces the input."""
    lines = []
    for p in net.places:
        count = m0.count(p)
        lines.append(f"place {p} tokens {count}" if count else f"place {p}")
    for t in net.transitions:
        label = net.label(t)
        lines.append(f"transition {t}" if label == t else f"transition {t} label {label}")
    for src, dst in sorted(net.edges):
        lines.append(f"arc {src} {dst}")
    return "\n".join(lines) + ("\n" if lines else "")


def _strip_ns(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def parse_pnml(text: str) -> tuple[PetriNet, Marking]:
    """Parse the supported PNML subset (single page, unit arc weights)."""
    zero = SourceSpan(0, 0, 1, 1)
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, column = exc.position
        raise ParseError(f"malformed XML: {exc.msg}", SourceSpan(0, 0, line, column)) from None

    nets = [el for el in root.iter() if _strip_ns(el.tag) == "net"]
    if len(nets) != 1:
        raise UnsupportedFeatureError(f"expected exactly one <net>, found {len(nets)}")
    net_el = nets[0]
    pages = [el for el in net_el if _strip_ns(el.tag) == "page"]
    if len(pages) > 1:
        raise UnsupportedFeatureError("multi-page documents are not supported")
    container = pages[0] if pages else net_el

    def text_of(parent, *path):
        node = parent
        for tag in path:
            node = next((c for c in node if _strip_ns(c.tag) == tag), None)
            if node is None:
                return None
        return (node.text or "").strip()

    places: dict[str, int] = {}
    transitions: dict[str, str] = {}
    arcs: set[tuple[str, str]] = set()
    for el in container:
        tag = _strip_ns(el.tag)
        if tag == "place":
            ident = el.get("id")
            if not ident:
                raise ParseError("place without id", zero)
            if ident in places or ident in transitions:
                raise ParseError(f"duplicate identifier {ident}", zero)
            marking_text = text_of(el, "initialMarking", "text")
            try:
                places[ident] = int(marking_text) if marking_text else 0
            except ValueError:
                raise ParseError(f"bad initial marking {marking_text!r} for place {ident}", zero) from None
        elif tag == "transition":
            ident = el.get("id")
            if not ident:
                raise ParseError("transition without id", zero)
            if ident in places or ident in transitions:
                raise ParseError(f"duplicate identifier {ident}", zero)
            name = text_of(el, "name", "text")
            transitions[ident] = name if name else ident
        elif tag == "arc":
            src, dst = el.get("source"), el.get("target")
            if not src or not dst:
                raise ParseError("arc without source/target", zero)
            weight = text_of(el, "inscription", "text")
            if weight:
                try:
                    parsed_weight = int(weight)
                except ValueError:
                    raise ParseError(f"bad arc inscription {weight!r}", zero) from None
                if parsed_weight != 1:
                    raise UnsupportedFeatureError(f"arc weight {weight} is not supported; edges are unweighted")
            arcs.add((src, dst))
        # name, toolspecific, graphics and friends are deliberately ignored

    for src, dst in arcs:
        for endpoint in (src, dst):
            if endpoint not in places and endpoint not in transitions:
                raise ParseError(f"arc endpoint {endpoint} is not a declared place or transition", zero)

    net = PetriNet(
        places=tuple(places),
        transitions=tuple(transitions),
        edges=frozenset(arcs),
        labelling=transitions,
    )
    return net, Marking(places)


# --- CCS text ---------------------------------------------------------------

_CCS_TOKEN = re.compile(r"[ \t\r]+|#[^\n]*|\n|'[A-Za-z][A-Za-z0-9_]*|[A-Za-z][A-Za-z0-9_]*|[0().+|=,]|.")
_KEYWORDS = {"new", "in", TAU}


class _Token:
    __slots__ = ("kind", "value", "span")

    def __init__(self, kind, value, span):
        self.kind = kind  # "ident" | "coident" | "punct" | "newline" | "eof"
        self.value = value
        self.span = span


def _tokenize_ccs(text: str) -> list[_Token]:
    tokens = []
    line, line_start = 1, 0
    for match in _CCS_TOKEN.finditer(text):
        value = match.group(0)
        span = SourceSpan(match.start(), match.end(), line, match.start() - line_start + 1)
        if value == "\n":
            tokens.append(_Token("newline", value, span))
            line += 1
            line_start = match.end()
        elif value.isspace() or value.startswith("#"):
            continue
        elif value.startswith("'"):
            tokens.append(_Token("coident", value[1:], span))
        elif IDENT_RE.match(value):
            tokens.append(_Token("ident", value, span))
        elif value in "0().+|=,":
            tokens.append(_Token("punct", value, span))
        else:
            raise ParseError(f"unexpected character {value!r}", span)
    end = SourceSpan(len(text), len(text), line, len(text) - line_start + 1)
    tokens.append(_Token("eof", "", end))
    return tokens


class _CcsParser:
    """Recursive-descent parser for one process expression."""

    def __init__(self, tokens: list[_Token], pos: int, in_definition: bool):
        self.tokens = tokens
        self.pos = pos
        self.in_definition = in_definition
        self.refs: list[tuple[str, SourceSpan]] = []

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str) -> _Token:
        tok = self.take()
        if tok.value != value:
            raise ParseError(f"expected {value!r}, found {tok.value!r}", tok.span)
        return tok

    def parse_process(self) -> Process:
        if self.peek().kind == "ident" and self.peek().value == "new":
            return self.parse_restriction()
        return self.parse_parallel()

    def parse_restriction(self) -> Process:
        tok = self.take()  # new
        if self.in_definition:
            raise FiniteNetViolationError(
                "restriction inside a defining equation violates the restriction-free discipline",
                tok.span,
            )
        names = [self.ident()]
        while self.peek().value == ",":
            self.take()
            names.append(self.ident())
        self.expect("in")
        body = self.parse_process()
        result: Process = body
        for name in reversed(names):
            result = Restriction(name, result)
        return result

    def ident(self) -> str:
        tok = self.take()
        if tok.kind != "ident" or tok.value in _KEYWORDS:
            raise ParseError(f"expected an identifier, found {tok.value!r}", tok.span)
        return tok.value

    def parse_parallel(self) -> Process:
        factors = [self.parse_sum()]
        while self.peek().value == "|":
            self.take()
            factors.append(self.parse_sum())
        if len(factors) == 1:
            return factors[0]
        return par_of(factors)

    def parse_sum(self) -> Process:
        start = self.peek().span
        branches = [self.parse_term()]
        while self.peek().value == "+":
            self.take()
            branches.append(self.parse_term())
        if len(branches) == 1:
            return branches[0]
        for b in branches:
            if not is_sequential(b):
                raise ParseError("sum branches must be sequential processes (nil, prefix, or sums of those)", start)
        return sum_of(branches)

    def parse_term(self) -> Process:
        tok = self.peek()
        if tok.value == "(":
            self.take()
            inner = self.parse_process()
            self.expect(")")
            return inner
        if tok.value == "0":
            self.take()
            return NIL
        if tok.kind == "coident" or (tok.kind == "ident" and tok.value not in ("new", "in")):
            # A name is a prefix action iff a dot follows; otherwise a process name.
            nxt = self.tokens[self.pos + 1]
            if tok.kind == "coident" or tok.value == TAU or nxt.value == ".":
                return self.parse_prefix()
            self.take()
            self.refs.append((tok.value, tok.span))
            return NameRef(tok.value)
        raise ParseError(f"unexpected token {tok.value!r}", tok.span)

    def parse_prefix(self) -> Process:
        tok = self.take()
        if tok.kind == "coident":
            action = Action.out(tok.value)
        elif tok.value == TAU:
            action = TAU_ACTION
        else:
            action = Action.inp(tok.value)
        self.expect(".")
        return Prefix(action, self.parse_continuation())

    def parse_continuation(self) -> Process:
        tok = self.peek()
        if tok.value == "(":
            self.take()
            inner = self.parse_process()
            self.expect(")")
            return inner
        if tok.value == "0":
            self.take()
            return NIL
        if tok.kind == "coident" or (tok.kind == "ident" and tok.value not in ("new", "in")):
            nxt = self.tokens[self.pos + 1]
            if tok.kind == "coident" or tok.value == TAU or nxt.value == ".":
                return self.parse_prefix()
            self.take()
            self.refs.append((tok.value, tok.span))
            return NameRef(tok.value)
        raise ParseError(f"unexpected token {tok.value!r} after prefix", tok.span)


def parse_ccs(text: str) -> tuple[Process, DefiningEquations]:
    """Parse CCS text: defining equations plus exactly one top-level process line."""
    tokens = _tokenize_ccs(text)
    equations: dict[str, Process] = {}
    main: Process | None = None
    all_refs: list[tuple[str, SourceSpan]] = []
    pos = 0
    while tokens[pos].kind != "eof":
        if tokens[pos].kind == "newline":
            pos += 1
            continue
        is_definition = (
            tokens[pos].kind == "ident"
            and tokens[pos].value not in _KEYWORDS
            and tokens[pos + 1].value == "="
        )
        if is_definition:
            name_tok = tokens[pos]
            if name_tok.value in equations:
                raise ParseError(f"duplicate definition of {name_tok.value}", name_tok.span)
            parser = _CcsParser(tokens, pos + 2, in_definition=True)
            body = parser.parse_process()
            equations[name_tok.value] = body
        else:
            if main is not None:
                raise ParseError("more than one top-level process line", tokens[pos].span)
            parser = _CcsParser(tokens, pos, in_definition=False)
            main = parser.parse_process()
        all_refs.extend(parser.refs)
        pos = parser.pos
        tok = tokens[pos]
        if tok.kind not in ("newline", "eof"):
            raise ParseError(f"unexpected token {tok.value!r}", tok.span)

    if main is None:
        raise ParseError("missing top-level process line", tokens[-1].span)
    for name, span in all_refs:
        if name not in equations:
            raise ParseError(f"undefined process name {name}", span)
    return main, DefiningEquations(equations)


def print_ccs(result: EncodingResult) -> str:
    """Render an encoding as CCS text: the top-level process, then sorted equations."""
    lines = [render_process(result.process)]
    for name, body in result.defs.items():
        lines.append(f"{name} = {render_process(body)}")
    return "\n".join(lines) + "\n"


# --- Aldebaran --------------------------------------------------------------

_AUT_HEADER = re.compile(r"des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_AUT_EDGE = re.compile(r"\(\s*(\d+)\s*,\s*\"([^\"]*)\"\s*,\s*(\d+)\s*\)\s*$")


def write_aut(lts: Lts) -> str:
    """Render an LTS in Aldebaran format with edges sorted for byte stability."""
    lines = [f"des ({lts.initial}, {len(lts.edges)}, {lts.n_states})"]
    for src, label, dst in sorted(lts.edges):
        lines.append(f'({src}, "{label}", {dst})')
    return "\n".join(lines) + "\n"


def read_aut(text: str) -> Lts:
    """Parse Aldebaran format; display labels are not part of the format."""
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty document, expected a des(...) header", SourceSpan(0, 0, 1, 1))
    header = _AUT_HEADER.match(lines[0].strip())
    if not header:
        raise ParseError("malformed header, expected des (<initial>, <edges>, <states>)", _line_span(text, 1, lines[0], lines[0].strip() or " "))
    initial, n_edges, n_states = (int(g) for g in header.groups())
    edges = set()
    for line_no, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        match = _AUT_EDGE.match(raw.strip())
        if not match:
            raise ParseError("malformed edge line, expected (<src>, \"<label>\", <dst>)", _line_span(text, line_no, raw, raw.strip()))
        src, label, dst = int(match.group(1)), match.group(2), int(match.group(3))
        if src >= n_states or dst >= n_states:
            raise ParseError(f"edge endpoint out of range for {n_states} states", _line_span(text, line_no, raw, raw.strip()))
        edges.add((src, label, dst))
    if len(edges) != n_edges:
        raise ParseError(f"header announces {n_edges} edges, found {len(edges)}", SourceSpan(0, 0, 1, 1))
    return Lts(
        n_states=n_states,
        initial=initial,
        edges=frozenset(edges),
        actions=frozenset(label for _, label, _ in edges),
    )
