"""
Session DSL

A session declares the field, the grading, the ring, the ideals and an
optional module, plus the verification window:

    field 32003;
    grading Z^1;
    ring x:1 y:1 z:1;
    phi 1;
    ideal I = x^2+y^2+z^2, x^5+y^5+z^5, x^8+y^8+z^8;
    module M = S/(x) ++ S(-3)/(y^2, z);
    use M;
    window t=1..5 wcap=40;

Statements end with ';' and '#' starts a comment. Several ideal statements
give several ideals, in declaration order.
"""
from __future__ import annotations

import bisect
import hashlib
import itertools
import json
import logging
import re
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .conf import get_config
from .exceptions import BasymError, InhomogeneousElement, PositivityError, SessionSyntaxError
from .grading import Degree, DegreeGroup, PositivityFunctional
from .homalg import Presentation
from .polyalg import MonomialOrder, Polynomial, Ring, homogeneous_degree
from .rees import ReesSetup

logger = logging.getLogger(__name__)


class IdealDefinition:
    """A named list of homogeneous generators"""

    def __init__(self, name: str, generators: Sequence[Polynomial]):
        self.name = name
        self.generators: Tuple[Polynomial, ...] = tuple(generators)

    @property
    def degrees(self) -> List[Degree]:
        return [homogeneous_degree(f) for f in self.generators]

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "generators": [str(f) for f in self.generators],
            "degrees": [d.to_list() for d in self.degrees],
        }


class ModuleDefinition:
    """A direct sum of shifted cyclic quotients S(-shift)/(relations)"""

    def __init__(self, name: str, summands: Sequence[Tuple[Degree, Sequence[Polynomial]]]):
        self.name = name
        self.summands: Tuple[Tuple[Degree, Tuple[Polynomial, ...]], ...] = tuple(
            (shift, tuple(rels)) for shift, rels in summands
        )

    def presentation(self, ring: Ring) -> Presentation:
        return Presentation.direct_sum(
            [Presentation.cyclic(ring, rels, shift) for shift, rels in self.summands]
        )

    def to_text(self) -> str:
        parts = []
        for shift, rels in self.summands:
            text = "S"
            if not shift.is_zero():
                text += f"(-{_degree_text(shift)})"
            if rels:
                text += "/(" + ", ".join(str(f) for f in rels) + ")"
            parts.append(text)
        return " ++ ".join(parts)

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "summands": [
                {"shift": shift.to_list(), "relations": [str(f) for f in rels]}
                for shift, rels in self.summands
            ],
        }


def _degree_text(d: Degree) -> str:
    coords = d.coordinates()
    if len(coords) == 1:
        return str(coords[0])
    return "(" + ",".join(str(c) for c in coords) + ")"


class Session:
    """
    Session registry

    Holds the ring, the named ideals and modules and the window policy.
    """

    def __init__(
        self,
        ring: Ring,
        t_range: Optional[Tuple[int, int]] = None,
        wcap: Optional[int] = None,
    ):
        config = get_config()
        self.ring = ring
        self.t_range: Tuple[int, int] = tuple(t_range) if t_range else (1, int(config["t_max"]))
        self.wcap = int(wcap if wcap is not None else config["wcap"])
        self._ideals: Dict[str, IdealDefinition] = {}
        self._modules: Dict[str, ModuleDefinition] = {}
        self.use: Optional[str] = None

    # Registration

    def register_ideal(self, name: str, generators: Sequence[Polynomial]) -> IdealDefinition:
        if name in self._ideals:
            raise ValueError(f"Ideal '{name}' is already registered")
        if not generators:
            raise BasymError(f"Ideal '{name}' has no generators")
        for f in generators:
            if f.ring != self.ring:
                raise BasymError(f"Generator {f} of ideal '{name}' is not in the session ring")
            homogeneous_degree(f)
        definition = IdealDefinition(name, generators)
        self._ideals[name] = definition
        return definition

    def register_module(
        self, name: str, summands: Sequence[Tuple[Degree, Sequence[Polynomial]]]
    ) -> ModuleDefinition:
        if name in self._modules:
            raise ValueError(f"Module '{name}' is already registered")
        if not summands:
            raise BasymError(f"Module '{name}' has no summands")
        definition = ModuleDefinition(name, summands)
        definition.presentation(self.ring)
        self._modules[name] = definition
        return definition

    def select_module(self, name: Optional[str]) -> None:
        if name is not None and name not in self._modules:
            raise BasymError(f"Unknown module '{name}'")
        self.use = name

    # Lookup

    def get_ideal(self, name: str) -> IdealDefinition:
        if name not in self._ideals:
            raise BasymError(f"Unknown ideal '{name}'")
        return self._ideals[name]

    def get_module(self, name: str) -> ModuleDefinition:
        if name not in self._modules:
            raise BasymError(f"Unknown module '{name}'")
        return self._modules[name]

    @property
    def ideal_names(self) -> List[str]:
        return list(self._ideals)

    @property
    def module_names(self) -> List[str]:
        return list(self._modules)

    @property
    def ideals(self) -> List[List[Polynomial]]:
        return [list(d.generators) for d in self._ideals.values()]

    @property
    def s(self) -> int:
        return len(self._ideals)

    @property
    def module(self) -> Optional[Presentation]:
        """The presentation selected by ``use``; None stands for S itself"""
        if self.use is None:
            return None
        return self._modules[self.use].presentation(self.ring)

    def rees_setup(self, shifted: bool = False) -> ReesSetup:
        if not self._ideals:
            raise BasymError("The session declares no ideal")
        return ReesSetup(self.ring, self.ideals, shifted=shifted)

    def t_grid(self, t_range: Optional[Tuple[int, int]] = None) -> List[Tuple[int, ...]]:
        a, b = t_range or self.t_range
        return [tuple(t) for t in itertools.product(range(a, b + 1), repeat=self.s)]

    # Consistency

    def validate(self) -> List[str]:
        errors = []
        if not self._ideals:
            errors.append("no ideal declared")
        a, b = self.t_range
        if a < 0 or b < a:
            errors.append(f"invalid t window {a}..{b}")
        if self.wcap <= 0:
            errors.append(f"wcap must be positive, got {self.wcap}")
        if self.use is not None and self.use not in self._modules:
            errors.append(f"use refers to unknown module '{self.use}'")
        return errors

    def to_text(self) -> str:
        ring = self.ring
        group = ring.group
        lines = [f"field {ring.characteristic};"]
        grading = f"Z^{group.free_rank}" + "".join(f" + Z/{m}" for m in group.torsion)
        lines.append(f"grading {grading};")
        lines.append(
            "ring " + " ".join(f"{n}:{_degree_text(d)}" for n, d in zip(ring.names, ring.degrees)) + ";"
        )
        lines.append("phi " + ", ".join(str(w) for w in ring.phi.weights) + ";")
        lines.append(f"order {ring.order.kind};")
        for d in self._ideals.values():
            lines.append(f"ideal {d.name} = " + ", ".join(str(f) for f in d.generators) + ";")
        for m in self._modules.values():
            lines.append(f"module {m.name} = {m.to_text()};")
        if self.use is not None:
            lines.append(f"use {self.use};")
        lines.append(f"window t={self.t_range[0]}..{self.t_range[1]} wcap={self.wcap};")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> Dict:
        return {
            "ring": self.ring.to_dict(),
            "ideals": [d.to_dict() for d in self._ideals.values()],
            "modules": [m.to_dict() for m in self._modules.values()],
            "use": self.use,
            "window": {"t": list(self.t_range), "wcap": self.wcap},
        }

    def digest(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def __eq__(self, other) -> bool:
        return isinstance(other, Session) and self.to_dict() == other.to_dict()

    __hash__ = None


# Parsing


_GRADING = re.compile(r"^(Z(?:\^(\d+))?)((?:\s*\+\s*Z/\d+)*)$")
_TORSION = re.compile(r"Z/(\d+)")
_VARIABLE = re.compile(r"\s*([A-Za-z_]\w*)\s*:\s*(\([^)]*\)|-?\d+)")
_WINDOW = re.compile(r"^t\s*=\s*(\d+)\s*\.\.\s*(\d+)(?:\s+wcap\s*=\s*(\d+))?$")
_ASSIGN = re.compile(r"^([A-Za-z_]\w*)\s*=\s*(.*)$", re.S)
_SUMMAND = re.compile(r"^S(?:\(\s*-\s*(\([^)]*\)|\d+)\s*\))?(?:\s*/\s*\((.*)\))?$", re.S)


def _split_top(text: str, sep: str) -> List[Tuple[int, str]]:
    """Split on ``sep`` outside parentheses; returns (offset, piece) pairs"""
    out, depth, start, i = [], 0, 0, 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and text.startswith(sep, i):
            out.append((start, text[start:i]))
            i += len(sep)
            start = i
            continue
        i += 1
    out.append((start, text[start:]))
    return out


def _strip_with_offset(offset: int, piece: str) -> Tuple[int, str]:
    lead = len(piece) - len(piece.lstrip())
    return offset + lead, piece.strip()


class _Parser:
    def __init__(self, text: str):
        # Comments become spaces so offsets keep their line and column.
        self.text = re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), text)
        self.line_starts = [0] + [m.end() for m in re.finditer(r"\n", self.text)]
        config = get_config()
        self.characteristic = int(config["characteristic"])
        self.group: Optional[DegreeGroup] = None
        self.variables: Optional[List[Tuple[str, str, int]]] = None
        self.phi: Optional[PositivityFunctional] = None
        self.order = MonomialOrder()
        self.ring: Optional[Ring] = None
        self.session: Optional[Session] = None
        self.t_range: Optional[Tuple[int, int]] = None
        self.wcap: Optional[int] = None
        self.use: Optional[Tuple[str, int]] = None

    def position(self, offset: int) -> Tuple[int, int]:
        line = bisect.bisect_right(self.line_starts, offset) - 1
        return line + 1, offset - self.line_starts[line] + 1

    def error(self, message: str, offset: int) -> SessionSyntaxError:
        return SessionSyntaxError(message, *self.position(offset))

    def statements(self):
        start = 0
        for m in re.finditer(";", self.text):
            offset, body = _strip_with_offset(start, self.text[start:m.start()])
            if body:
                yield offset, body
            start = m.end()
        offset, rest = _strip_with_offset(start, self.text[start:])
        if rest:
            raise self.error("missing ';' at end of statement", offset)

    def parse(self) -> Session:
        handlers = {
            "field": self.on_field,
            "grading": self.on_grading,
            "ring": self.on_ring,
            "phi": self.on_phi,
            "order": self.on_order,
            "ideal": self.on_ideal,
            "module": self.on_module,
            "use": self.on_use,
            "window": self.on_window,
        }
        for offset, body in self.statements():
            keyword = re.split(r"\s+", body, maxsplit=1)[0]
            if keyword not in handlers:
                raise self.error(f"unknown statement '{keyword}'", offset)
            rest_offset, rest = _strip_with_offset(offset + len(keyword), body[len(keyword):])
            handlers[keyword](rest, rest_offset)

        session = self.require_session(0)
        if self.t_range is not None:
            session.t_range = self.t_range
        if self.wcap is not None:
            session.wcap = self.wcap
        if self.use is not None:
            name, offset = self.use
            if name not in session.module_names:
                raise self.error(f"use refers to unknown module '{name}'", offset)
            session.select_module(name)
        errors = session.validate()
        if errors:
            raise self.error("; ".join(errors), len(self.text))
        logger.debug("parsed session %s", session.digest()[:12])
        return session

    # Header statements

    def require_header(self, what: str, offset: int) -> None:
        if self.session is not None:
            raise self.error(f"'{what}' must come before any ideal or module", offset)

    def on_field(self, rest: str, offset: int) -> None:
        self.require_header("field", offset)
        if not rest.isdigit():
            raise self.error(f"field expects a prime, got '{rest}'", offset)
        self.characteristic = int(rest)

    def on_grading(self, rest: str, offset: int) -> None:
        self.require_header("grading", offset)
        m = _GRADING.match(rest)
        if not m:
            raise self.error(f"cannot read grading '{rest}', expected like Z^2 + Z/3", offset)
        rank = int(m.group(2)) if m.group(2) else 1
        torsion = tuple(int(v) for v in _TORSION.findall(m.group(3)))
        try:
            self.group = DegreeGroup(rank, torsion)
        except BasymError as exc:
            raise self.error(str(exc), offset)

    def on_ring(self, rest: str, offset: int) -> None:
        self.require_header("ring", offset)
        variables, pos = [], 0
        while pos < len(rest):
            m = _VARIABLE.match(rest, pos)
            if not m:
                raise self.error(f"cannot read variable declaration '{rest[pos:].strip()}'", offset + pos)
            variables.append((m.group(1), m.group(2), offset + m.start(1)))
            pos = m.end()
            while pos < len(rest) and rest[pos].isspace():
                pos += 1
        if not variables:
            raise self.error("ring declares no variables", offset)
        self.variables = variables

    def on_phi(self, rest: str, offset: int) -> None:
        self.require_header("phi", offset)
        body = rest.strip("()")
        try:
            weights = tuple(Fraction(w.strip()) for w in body.split(","))
        except ValueError:
            raise self.error(f"cannot read weights '{rest}'", offset)
        self.phi = PositivityFunctional(weights)

    def on_order(self, rest: str, offset: int) -> None:
        self.require_header("order", offset)
        if rest not in ("grevlex", "lex"):
            raise self.error(f"unknown order '{rest}', expected grevlex or lex", offset)
        self.order = MonomialOrder(rest)

    def parse_degree(self, text: str, offset: int) -> Tuple[int, ...]:
        try:
            return tuple(int(v) for v in text.strip("()").split(","))
        except ValueError:
            raise self.error(f"cannot read degree '{text}'", offset)

    def require_session(self, offset: int) -> Session:
        if self.session is not None:
            return self.session
        if self.variables is None:
            raise self.error("no ring declared", offset)
        degrees = [self.parse_degree(text, pos) for _, text, pos in self.variables]
        group = self.group or DegreeGroup(len(degrees[0]))
        try:
            self.ring = Ring(
                [name for name, _, _ in self.variables],
                [group.degree(d) for d in degrees],
                group,
                self.phi,
                self.characteristic,
                self.order,
            )
        except PositivityError as exc:
            line, column = self.position(self.variables[0][2])
            raise PositivityError(f"line {line}, column {column}: {exc}")
        except BasymError as exc:
            raise self.error(str(exc), self.variables[0][2])
        self.session = Session(self.ring)
        return self.session

    # Body statements

    def parse_polynomials(self, text: str, offset: int) -> List[Tuple[Polynomial, int, str]]:
        out = []
        for piece_offset, piece in _split_top(text, ","):
            at, piece = _strip_with_offset(offset + piece_offset, piece)
            if not piece:
                raise self.error("empty polynomial", at)
            out.append((self.ring.parse(piece, *self.position(at)), at, piece))
        return out

    def check_homogeneous(self, f: Polynomial, at: int, text: str, where: str) -> Degree:
        try:
            return homogeneous_degree(f)
        except InhomogeneousElement as exc:
            line, column = self.position(at)
            raise InhomogeneousElement(
                f"line {line}, column {column}: {where} '{text}' is not homogeneous: {exc}",
                exc.witnesses,
            )

    def on_ideal(self, rest: str, offset: int) -> None:
        session = self.require_session(offset)
        m = _ASSIGN.match(rest)
        if not m:
            raise self.error("expected 'ideal NAME = f1, f2, ...'", offset)
        name = m.group(1)
        body_offset = offset + m.start(2)
        polys = self.parse_polynomials(m.group(2), body_offset)
        for f, at, text in polys:
            if f.is_zero():
                raise self.error(f"generator '{text}' of ideal {name} is zero", at)
            self.check_homogeneous(f, at, text, f"generator of ideal {name}")
        try:
            session.register_ideal(name, [f for f, _, _ in polys])
        except ValueError as exc:
            raise self.error(str(exc), offset)

    def on_module(self, rest: str, offset: int) -> None:
        session = self.require_session(offset)
        m = _ASSIGN.match(rest)
        if not m:
            raise self.error("expected 'module NAME = S(-d)/(f, ...) ++ ...'", offset)
        name = m.group(1)
        summands = []
        for piece_offset, piece in _split_top(m.group(2), "++"):
            at, piece = _strip_with_offset(offset + m.start(2) + piece_offset, piece)
            sm = _SUMMAND.match(piece)
            if not sm:
                raise self.error(f"cannot read module summand '{piece}'", at)
            group = self.ring.group
            shift = group.zero()
            if sm.group(1):
                shift = group.degree(self.parse_degree(sm.group(1), at))
            relations = []
            if sm.group(2) is not None and sm.group(2).strip():
                rel_offset = at + sm.start(2)
                for f, rat, text in self.parse_polynomials(sm.group(2), rel_offset):
                    if not f.is_zero():
                        self.check_homogeneous(f, rat, text, f"relation of module {name}")
                        relations.append(f)
            summands.append((shift, relations))
        try:
            session.register_module(name, summands)
        except ValueError as exc:
            raise self.error(str(exc), offset)

    def on_use(self, rest: str, offset: int) -> None:
        self.require_session(offset)
        if not re.match(r"^[A-Za-z_]\w*$", rest):
            raise self.error(f"use expects a module name, got '{rest}'", offset)
        self.use = (rest, offset)

    def on_window(self, rest: str, offset: int) -> None:
        m = _WINDOW.match(rest)
        if not m:
            raise self.error(f"cannot read window '{rest}', expected t=a..b wcap=W", offset)
        self.t_range = (int(m.group(1)), int(m.group(2)))
        if m.group(3):
            self.wcap = int(m.group(3))


def parse_session(text: str) -> Session:
    """Parse session text; errors carry the line and column of the offending statement"""
    return _Parser(text).parse()


def load_session(path: str) -> Session:
    with open(path, encoding="utf-8") as handle:
        return parse_session(handle.read())
