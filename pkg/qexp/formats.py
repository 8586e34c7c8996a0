"""Line-oriented file formats for equations, solutions, pictures and section catalogs.

Every format is plain text. ``#`` starts a comment and blank lines are
ignored. Equation, picture and catalog files are split into bracketed
sections (``[factors]``, ``[beta]``, ``[section L1]``, ...). Solution files are
a flat list of ``alpha l1 = 6`` and ``phi x3 = <word>`` lines.

Each ``emit_*`` function writes the canonical form and the matching
``parse_*`` function reads it back to an equal object. The full grammar is
documented in docs/formats.md.

Syntax errors raise ``FormatError`` with the line and column. Errors the
library detects on well-formed input (unknown factors, non-quadratic words,
coefficient images leaving their support) are raised unchanged.

Usage:
    from qexp.formats import parse_equation_file, emit_equation

    env, W = parse_equation_file(Path("examples_data/exx_eqn.qeq"))
    print(emit_equation(W))
"""

import logging
import re
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from qexp.equations import Environment, ExpEquation, Solution
from qexp.exponential import ExpLetter, ExpWord
from qexp.groups import CyclicGroup, FactorGroup, FreeGroup, TableGroup
from qexp.params import LinPoly, ParamSystem, Retraction
from qexp.pictures import (
    Arc,
    ArcEnd,
    Boundary,
    CornerRef,
    Picture,
    Piece,
    Point,
    Region,
    SurfaceType,
    Token,
    Vertex,
)
from qexp.quadwords import Letter, NotQuadraticError, QuadSystem, QuadWord, is_quadratic, occurrence_counts
from qexp.validators import (
    parameter_id,
    validate_generator_name,
    validate_identifier,
    validate_letter_name,
)
from qexp.words import FreeProduct, Relator, UnknownFactorError, Word
from qexp.zmachine import CorridorSection, Square

logger = logging.getLogger(__name__)


class FormatError(ValueError):
    """Syntax error in an input file."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}" if line else message)


# Line and section reading ---------------------------------------------------


class _Line(NamedTuple):
    number: int
    raw: str
    text: str

    def col(self, token: str) -> int:
        found = self.raw.find(token) if token else -1
        return found + 1 if found >= 0 else 1

    def error(self, message: str, token: str = "") -> FormatError:
        return FormatError(message, self.number, self.col(token))


@dataclass
class _Section:
    name: str
    arg: Optional[str]
    header: _Line
    lines: List[_Line] = field(default_factory=list)


_SECTION_RE = re.compile(r"^\[\s*([A-Za-z]+)(?:\s+([^\]\s]+))?\s*\]$")


def _content_lines(text: str) -> Iterator[_Line]:
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            yield _Line(number, raw, content)


def _sections(text: str, repeatable: Sequence[str] = ()) -> Dict[str, List[_Section]]:
    found: Dict[str, List[_Section]] = {}
    current: Optional[_Section] = None
    for line in _content_lines(text):
        match = _SECTION_RE.match(line.text)
        if match:
            name = match.group(1).lower()
            if name in found and name not in repeatable:
                raise line.error(f"Duplicate section [{match.group(1)}]", "[")
            current = _Section(name, match.group(2), line)
            found.setdefault(name, []).append(current)
        elif current is None:
            raise line.error("Content outside of a section", line.text)
        else:
            current.lines.append(line)
    return found


def _single(sections: Dict[str, List[_Section]], name: str, required: bool = True) -> List[_Line]:
    if name not in sections:
        if required:
            raise FormatError(f"Missing section [{name}]")
        return []
    return sections[name][0].lines


@contextmanager
def _located(line: _Line, token: str = ""):
    """Attach the line position to plain ``ValueError`` raised while reading ``line``."""
    try:
        yield
    except (FormatError, UnknownFactorError, NotQuadraticError):
        raise
    except ValueError as e:
        raise line.error(str(e), token) from e


def _ints(line: _Line, text: str, count: int, what: str) -> List[int]:
    parts = text.split()
    if len(parts) != count:
        raise line.error(f"{what} needs {count} integers, got {len(parts)}", text)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise line.error(f"{what} must be integers", text) from None


def _identifier(line: _Line, name: str, what: str) -> str:
    if not validate_identifier(name):
        raise line.error(f"Invalid {what} '{name}'", name)
    return name


# Polynomials, exponential words and parameter systems ------------------------


_TERM_RE = re.compile(r"^([+-]?)(?:(\d+)\*)?([lt][1-9]\d*)$|^([+-]?)(\d+)$")
_EXP_LETTER_RE = re.compile(r"\(([^()]*)\)(?:\^\[([^\]]*)\])?(\^-1)?")


def parse_poly(text: str) -> LinPoly:
    """Parse ``2*l1 - l3 + 4``; ``t<n>`` names auxiliary parameter ``-n``.

    Raises:
        ValueError: If the text is not a linear polynomial
    """
    compact = re.sub(r"\s+", "", text)
    terms = re.findall(r"[+-]?[^+-]+", compact)
    if not compact or "".join(terms) != compact:
        raise ValueError(f"Invalid polynomial '{text.strip()}'")
    coeffs: Dict[int, int] = {}
    constant = 0
    for term in terms:
        match = _TERM_RE.match(term)
        if not match:
            raise ValueError(f"Invalid term '{term}' in polynomial '{text.strip()}'")
        if match.group(3):
            sign = -1 if match.group(1) == "-" else 1
            pid = parameter_id(match.group(3))
            coeffs[pid] = coeffs.get(pid, 0) + sign * int(match.group(2) or 1)
        else:
            constant += (-1 if match.group(4) == "-" else 1) * int(match.group(5))
    return LinPoly.build(coeffs, constant)


def _exp_letter(product: FreeProduct, base: str, exponent: Optional[str]) -> ExpLetter:
    word = product.parse_word(base)
    if exponent is None:
        return ExpLetter.degenerate(word)
    return ExpLetter.make(word, parse_poly(exponent))


def parse_exp_word(text: str, product: FreeProduct, allow_inverse: bool = True) -> ExpWord:
    """Parse ``(H1:a.H2:b)^[l1] (H2:c)^-1``; ``1`` is the empty word."""
    text = text.strip()
    if text in ("", "1"):
        return ExpWord()
    items = []
    pos = 0
    for match in _EXP_LETTER_RE.finditer(text):
        gap = text[pos:match.start()]
        if gap.strip():
            raise ValueError(f"Unexpected text '{gap.strip()}' in exponential word")
        pos = match.end()
        if match.group(3) and not allow_inverse:
            raise ValueError(f"Inverse letter '{match.group(0)}' is not allowed here")
        letter = _exp_letter(product, match.group(1), match.group(2))
        items.append((letter, -1 if match.group(3) else 1))
    if text[pos:].strip():
        raise ValueError(f"Unexpected text '{text[pos:].strip()}' in exponential word")
    return ExpWord(items)


_EQ_RE = re.compile(r"^eq:\s*(.+?)\s*=\s*0$")
_CONG_RE = re.compile(r"^cong:\s*(.+?)\s*=\s*0\s+mod\s+(\d+)$")
_INEQ_RE = re.compile(r"^ineq:\s*(.+?)\s*(>=|>)\s*0$")
_NORMALIZED_RE = re.compile(r"^normalized:\s*(true|false)$")


def parse_param_lines(lines: Sequence[_Line]) -> ParamSystem:
    L = ParamSystem()
    normalized = False
    for line in lines:
        with _located(line, line.text):
            if _EQ_RE.match(line.text):
                L = L.with_equation(parse_poly(_EQ_RE.match(line.text).group(1)))
            elif _CONG_RE.match(line.text):
                match = _CONG_RE.match(line.text)
                L = L.with_congruence(parse_poly(match.group(1)), int(match.group(2)))
            elif _INEQ_RE.match(line.text):
                match = _INEQ_RE.match(line.text)
                h = parse_poly(match.group(1))
                L = L.with_inequality(h) if match.group(2) == ">=" else L.with_strict(h)
            elif _NORMALIZED_RE.match(line.text):
                normalized = _NORMALIZED_RE.match(line.text).group(1) == "true"
            else:
                raise line.error("Expected 'eq:', 'cong:', 'ineq:' or 'normalized:'", line.text)
    return replace(L, normalized=normalized)


def parse_param_system(text: str) -> ParamSystem:
    """Parse a bare block of ``eq:`` / ``cong:`` / ``ineq:`` lines."""
    return parse_param_lines(list(_content_lines(text)))


def emit_param_lines(L: ParamSystem) -> List[str]:
    out = L.lines()
    if L.normalized:
        out.append("normalized: true")
    return out


# Factors and relators -------------------------------------------------------


def _parse_factor(line: _Line) -> FactorGroup:
    if "=" not in line.text:
        raise line.error("Expected '<id> = cyclic|free|table ...'", line.text)
    fid, spec = (part.strip() for part in line.text.split("=", 1))
    _identifier(line, fid, "factor id")
    kind, _, rest = spec.partition(" ")
    rest = rest.strip()
    with _located(line, spec):
        if kind == "cyclic":
            parts = rest.split()
            if len(parts) not in (1, 2):
                raise line.error("Expected 'cyclic <order> [<generator>]'", spec)
            generator = parts[1] if len(parts) == 2 else "a"
            if not validate_generator_name(generator):
                raise line.error(f"Invalid generator name '{generator}'", generator)
            return CyclicGroup(fid, int(parts[0]), generator)
        if kind == "free":
            generators: Dict[str, int] = {}
            for token in rest.split():
                name, _, order = token.partition(":")
                if not validate_generator_name(name):
                    raise line.error(f"Invalid generator name '{name}'", token)
                generators[name] = int(order) if order else 0
            return FreeGroup(fid, generators)
        if kind == "table":
            names_part, _, rows_part = rest.partition(";")
            names = names_part.split()
            rows = [[int(v) for v in row.split()] for row in rows_part.split("/")]
            return TableGroup(fid, names, rows)
    raise line.error(f"Unknown factor kind '{kind}'", kind)


def emit_factor(group: FactorGroup) -> str:
    if isinstance(group, CyclicGroup):
        return f"{group.factor_id} = cyclic {group.order} {group.generator}"
    if isinstance(group, FreeGroup):
        gens = " ".join(f"{name}:{order}" for name, order in group.generators.items())
        return f"{group.factor_id} = free {gens}"
    if isinstance(group, TableGroup):
        rows = " / ".join(" ".join(str(v) for v in row) for row in group.table)
        return f"{group.factor_id} = table {' '.join(group.names)} ; {rows}"
    raise TypeError(f"No file syntax for factor backend {type(group).__name__}")


def _parse_product(lines: Sequence[_Line]) -> FreeProduct:
    factors = [_parse_factor(line) for line in lines]
    if not factors:
        raise FormatError("Section [factors] declares no factors")
    try:
        return FreeProduct(factors)
    except ValueError as e:
        raise FormatError(str(e)) from e


def _parse_relator(line: _Line, text: str, product: FreeProduct) -> Relator:
    base, sep, power = text.partition("**")
    with _located(line, text):
        r = product.parse_word(base)
        if sep:
            return Relator(r, int(power.strip()))
        return Relator.from_word(r)


def emit_relator(rel: Relator) -> str:
    return f"{rel.r} ** {rel.m}"


# Equation files -------------------------------------------------------------


_WORD_RE = re.compile(r"^w(\d+)\s*\[\s*([^\]\s]+)\s*\]\s*:\s*(.*)$")
_BETA_RE = re.compile(r"^(d\d+)\s*=\s*(.*)$")


def _check_quadratic(line: _Line, i: int, w: QuadWord) -> None:
    if is_quadratic(w):
        return
    wrong = sorted(
        f"{a} ({count}x)"
        for a, count in occurrence_counts(w).items()
        if count != (2 if a.kind == "x" else 1)
    )
    raise NotQuadraticError(f"line {line.number}: w{i} is not quadratic: {', '.join(wrong)}")


def parse_equation(text: str) -> ExpEquation:
    """Parse an equation file's text into a validated ``ExpEquation``.

    Raises:
        FormatError: On syntax errors
        NotQuadraticError: If a component is not quadratic
        ValueError: If ``β`` does not match the coefficients or leaves its support
    """
    sections = _sections(text)
    product = _parse_product(_single(sections, "factors"))

    supports: Dict[str, frozenset] = {}
    for line in _single(sections, "environment"):
        k, _, rest = line.text.partition("=")
        k = _identifier(line, k.strip(), "environment index")
        if k in supports:
            raise line.error(f"Environment index '{k}' declared twice", k)
        with _located(line, rest.strip()):
            for fid in rest.split():
                product.factor(fid)
            supports[k] = frozenset(rest.split())

    relators: Dict[str, List[Relator]] = {}
    for line in _single(sections, "relators", required=False):
        k, _, rest = line.text.partition("=")
        k = k.strip()
        if k not in supports:
            raise line.error(f"Relator for undeclared environment index '{k}'", k)
        relators.setdefault(k, []).append(_parse_relator(line, rest.strip(), product))

    words: List[QuadWord] = []
    basis: List[str] = []
    for line in _single(sections, "equation"):
        match = _WORD_RE.match(line.text)
        if not match:
            raise line.error("Expected 'w<i> [<index>]: <quadratic word>'", line.text)
        i = int(match.group(1))
        if i != len(words) + 1:
            raise line.error(f"Expected w{len(words) + 1}, got w{i}", match.group(0)[:4])
        with _located(line, match.group(3)):
            w = QuadWord.parse(match.group(3))
        _check_quadratic(line, i, w)
        words.append(w)
        basis.append(match.group(2))
    if not words:
        raise FormatError("Section [equation] has no words")

    beta: Dict[Letter, ExpWord] = {}
    for line in _single(sections, "beta", required=False):
        match = _BETA_RE.match(line.text)
        if not match or not validate_letter_name(match.group(1), "d"):
            raise line.error("Expected 'd<i> = <exponential word>'", line.text)
        letter = Letter("d", int(match.group(1)[1:]))
        if letter in beta:
            raise line.error(f"beta({letter}) given twice", match.group(1))
        with _located(line, match.group(2)):
            beta[letter] = parse_exp_word(match.group(2), product)

    L = parse_param_lines(_single(sections, "l", required=False))
    header = sections["equation"][0].header
    with _located(header):
        system = QuadSystem(words)
        env = Environment(product, supports, relators)
    W = ExpEquation(env, system, beta, L, tuple(basis))
    W.validate()
    logger.debug("parsed equation with %d words, %d coefficients", len(words), len(beta))
    return W


def emit_equation(W: ExpEquation, title: str = "qexp equation") -> str:
    out = [f"# {title}", "[factors]"]
    out += [emit_factor(g) for g in W.product.factors.values()]
    out.append("[environment]")
    out += [f"{k} = {' '.join(sorted(support))}" for k, support in W.env.supports.items()]
    rel_lines = [f"{k} = {emit_relator(rel)}" for k, rels in W.env.relators.items() for rel in rels]
    if rel_lines:
        out += ["[relators]"] + rel_lines
    out.append("[equation]")
    out += [f"w{i + 1} [{k}]: {w}" for i, (w, k) in enumerate(zip(W.system, W.basis))]
    if W.beta:
        out.append("[beta]")
        out += [f"{a} = {W.beta[a]}" for a in W.coefficients]
    param_lines = emit_param_lines(W.L)
    if param_lines:
        out += ["[L]"] + param_lines
    return "\n".join(out) + "\n"


def parse_equation_file(path: Path) -> Tuple[Environment, ExpEquation]:
    W = parse_equation(Path(path).read_text(encoding="utf-8"))
    return W.env, W


def write_equation_file(W: ExpEquation, path: Path, title: str = "qexp equation") -> Path:
    path = Path(path)
    path.write_text(emit_equation(W, title), encoding="utf-8")
    return path


# Solutions ------------------------------------------------------------------


_ALPHA_RE = re.compile(r"^alpha\s+(\S+)\s*=\s*(-?\d+)$")
_PHI_RE = re.compile(r"^phi\s+(\S+)\s*=\s*(.*)$")


def _parse_alpha_line(line: _Line, assignment: Dict[int, int]) -> None:
    match = _ALPHA_RE.match(line.text)
    if not match:
        raise line.error("Expected 'alpha l<n> = <integer>'", line.text)
    pid = parameter_id(match.group(1))
    if pid is None:
        raise line.error(f"Invalid parameter name '{match.group(1)}'", match.group(1))
    if pid in assignment:
        raise line.error(f"Parameter {match.group(1)} assigned twice", match.group(1))
    assignment[pid] = int(match.group(2))


def parse_alpha(text: str) -> Retraction:
    """Read the ``alpha`` lines of a solution file; ``phi`` lines are skipped."""
    assignment: Dict[int, int] = {}
    for line in _content_lines(text):
        if _PHI_RE.match(line.text):
            continue
        _parse_alpha_line(line, assignment)
    return Retraction(assignment)


def parse_solution(text: str, product: FreeProduct) -> Solution:
    assignment: Dict[int, int] = {}
    phi: Dict[Letter, Word] = {}
    for line in _content_lines(text):
        match = _PHI_RE.match(line.text)
        if not match:
            _parse_alpha_line(line, assignment)
            continue
        name = match.group(1)
        if not validate_letter_name(name):
            raise line.error(f"Invalid letter name '{name}'", name)
        letter = Letter(name[0], int(name[1:]))
        if letter in phi:
            raise line.error(f"phi({name}) given twice", name)
        with _located(line, match.group(2)):
            phi[letter] = product.parse_word(match.group(2))
    return Solution(phi, Retraction(assignment))


def _param_name(pid: int) -> str:
    return f"l{pid}" if pid > 0 else f"t{-pid}"


def emit_alpha(alpha: Retraction) -> List[str]:
    items = sorted(alpha.assignment.items(), key=lambda kv: (kv[0] < 0, abs(kv[0])))
    return [f"alpha {_param_name(pid)} = {value}" for pid, value in items]


def emit_solution(solution: Solution, letters: Optional[Sequence[Letter]] = None) -> str:
    """Canonical solution text; ``letters`` limits the ``phi`` lines."""
    keep = sorted(solution.phi if letters is None else set(letters) & set(solution.phi))
    out = emit_alpha(solution.alpha)
    out += [f"phi {a} = {solution.phi[a]}" for a in keep]
    return "\n".join(out) + "\n"


# Pictures -------------------------------------------------------------------


_VERTEX_RE = re.compile(r"^(\S+)\s+(-?1)\s+(\d+)\s*:\s*(.*)$")
_BOUNDARY_RE = re.compile(r"^(\S+)\s+(\d+)\s*:\s*(.*)$")
_LETTERS_RE = re.compile(r"^(\S+)\s*:\s*(.*)$")


def _parse_vertex(line: _Line, product: FreeProduct) -> Vertex:
    match = _VERTEX_RE.match(line.text)
    if not match:
        raise line.error("Expected '<id> <sign> <component> : <arc> <label>, ...'", line.text)
    vid = _identifier(line, match.group(1), "vertex id")
    ends, labels = [], []
    for pair in filter(None, (p.strip() for p in match.group(4).split(","))):
        parts = pair.split()
        if len(parts) != 2:
            raise line.error(f"Expected '<arc> <label>', got '{pair}'", pair)
        ends.append(_identifier(line, parts[0], "arc id"))
        with _located(line, parts[1]):
            labels.append(product.parse_word(parts[1]))
    return Vertex(vid, tuple(ends), tuple(labels), int(match.group(2)), int(match.group(3)))


def _parse_arc(line: _Line) -> Arc:
    parts = line.text.split()
    if len(parts) != 4:
        raise line.error("Expected '<id> <delta> <closed 0|1> <component>'", line.text)
    aid = _identifier(line, parts[0], "arc id")
    delta, closed, component = _ints(line, " ".join(parts[1:]), 3, "Arc")
    if delta not in (1, -1) or closed not in (0, 1):
        raise line.error("Arc delta must be 1 or -1 and closed 0 or 1", parts[1])
    return Arc(aid, delta, bool(closed), component)


def _parse_tokens(line: _Line, text: str, product: FreeProduct) -> Tuple[Token, ...]:
    tokens: List[Token] = []
    for token in text.split():
        if token == "|":
            tokens.append(Point())
        elif token.startswith(">"):
            tokens.append(ArcEnd(_identifier(line, token[1:], "arc id")))
        else:
            with _located(line, token):
                tokens.append(Piece(product.parse_word(token)))
    return tuple(tokens)


def _emit_token(token: Token) -> str:
    if isinstance(token, Point):
        return "|"
    if isinstance(token, ArcEnd):
        return f">{token.arc}"
    return str(token.label)


def _parse_corner(line: _Line, text: str) -> Tuple[CornerRef, int]:
    parts = text.split(":")
    if len(parts) != 4 or parts[0] not in ("v", "b"):
        raise line.error(f"Expected corner 'v|b:<owner>:<index>:<sign>', got '{text}'", text)
    try:
        index, sign = int(parts[2]), int(parts[3])
    except ValueError:
        raise line.error(f"Corner index and sign must be integers in '{text}'", text) from None
    return CornerRef(parts[0], _identifier(line, parts[1], "corner owner"), index), sign


def _parse_region(line: _Line) -> Region:
    parts = line.text.split()
    rid = _identifier(line, parts[0], "region id")
    fields: Dict[str, str] = {}
    for token in parts[1:]:
        key, sep, value = token.partition("=")
        if not sep:
            raise line.error(f"Expected key=value, got '{token}'", token)
        fields[key] = value
    for key in ("chi", "factor"):
        if key not in fields:
            raise line.error(f"Region {rid} needs '{key}='", rid)
    try:
        chi = int(fields["chi"])
        component = int(fields.get("comp", "0"))
        orientable = int(fields.get("orient", "1")) == 1
    except ValueError:
        raise line.error(f"Region {rid}: chi, comp and orient must be integers", rid) from None
    cycles = tuple(
        tuple(_parse_corner(line, c) for c in cycle.split(",") if c)
        for cycle in fields.get("cycles", "").split("/")
        if cycle
    )
    sides = tuple(_identifier(line, a, "arc id") for a in fields.get("sides", "").split(",") if a)
    return Region(rid, chi, fields["factor"], cycles, sides, component, orientable)


def _emit_region(region: Region) -> str:
    cycles = "/".join(
        ",".join(f"{ref.kind}:{ref.owner}:{ref.index}:{sign}" for ref, sign in cycle)
        for cycle in region.cycles
    )
    return (
        f"{region.id} chi={region.chi} factor={region.factor} comp={region.component} "
        f"orient={int(region.orientable)} cycles={cycles} sides={','.join(region.sides)}"
    )


def parse_picture(text: str) -> Picture:
    """Parse a picture file.

    Raises:
        FormatError: On syntax errors or references to undeclared boundaries
    """
    sections = _sections(text)
    product = _parse_product(_single(sections, "factors"))
    relator = None
    relator_lines = _single(sections, "relator", required=False)
    if len(relator_lines) > 1:
        raise relator_lines[1].error("Section [relator] takes a single line", relator_lines[1].text)
    if relator_lines:
        relator = _parse_relator(relator_lines[0], relator_lines[0].text, product)

    surfaces: List[SurfaceType] = []
    for line in _single(sections, "surfaces"):
        index, _, rest = line.text.partition("=")
        if index.strip() != str(len(surfaces)):
            raise line.error(f"Expected surface component {len(surfaces)}", index.strip())
        n, t, p = _ints(line, rest, 3, "Surface")
        surfaces.append(SurfaceType(n, t, p))

    vertices: Dict[str, Vertex] = {}
    for line in _single(sections, "vertices", required=False):
        v = _parse_vertex(line, product)
        vertices[v.id] = v

    arcs: Dict[str, Arc] = {}
    for line in _single(sections, "arcs", required=False):
        a = _parse_arc(line)
        arcs[a.id] = a

    raw_boundaries: Dict[str, Tuple[Tuple[Token, ...], int]] = {}
    for line in _single(sections, "boundary", required=False):
        match = _BOUNDARY_RE.match(line.text)
        if not match:
            raise line.error("Expected '<id> <component> : <tokens>'", line.text)
        bid = _identifier(line, match.group(1), "boundary id")
        raw_boundaries[bid] = (_parse_tokens(line, match.group(3), product), int(match.group(2)))

    letters: Dict[str, Tuple[ExpLetter, ...]] = {}
    for line in _single(sections, "letters", required=False):
        match = _LETTERS_RE.match(line.text)
        if not match or match.group(1) not in raw_boundaries:
            raise line.error("Expected '<declared boundary id> : <letters>'", line.text)
        with _located(line, match.group(2)):
            word = parse_exp_word(match.group(2), product, allow_inverse=False)
        letters[match.group(1)] = tuple(word.letters)

    boundaries = {
        bid: Boundary(bid, tokens, letters.get(bid, ()), component)
        for bid, (tokens, component) in raw_boundaries.items()
    }
    regions: Dict[str, Region] = {}
    for line in _single(sections, "regions", required=False):
        region = _parse_region(line)
        regions[region.id] = region

    L = parse_param_lines(_single(sections, "l", required=False))
    return Picture(product, tuple(surfaces), vertices, arcs, boundaries, regions, relator, L)


def emit_picture(picture: Picture, title: str = "qexp picture") -> str:
    out = [f"# {title}", "[factors]"]
    out += [emit_factor(g) for g in picture.product.factors.values()]
    if picture.relator is not None:
        out += ["[relator]", emit_relator(picture.relator)]
    out.append("[surfaces]")
    out += [f"{i} = {s.n} {s.t} {s.p}" for i, s in enumerate(picture.surfaces)]
    if picture.vertices:
        out.append("[vertices]")
        for v in picture.vertices.values():
            pairs = ", ".join(f"{a} {label}" for a, label in zip(v.ends, v.labels))
            out.append(f"{v.id} {v.sign} {v.component} : {pairs}")
    if picture.arcs:
        out.append("[arcs]")
        out += [f"{a.id} {a.delta} {int(a.closed)} {a.component}" for a in picture.arcs.values()]
    if picture.boundaries:
        out.append("[boundary]")
        for b in picture.boundaries.values():
            out.append(f"{b.id} {b.component} : {' '.join(_emit_token(t) for t in b.tokens)}".rstrip())
        lettered = [b for b in picture.boundaries.values() if b.letters]
        if lettered:
            out.append("[letters]")
            out += [f"{b.id} : {' '.join(str(h) for h in b.letters)}" for b in lettered]
    if picture.regions:
        out.append("[regions]")
        out += [_emit_region(r) for r in picture.regions.values()]
    param_lines = emit_param_lines(picture.L)
    if param_lines:
        out += ["[L]"] + param_lines
    return "\n".join(out) + "\n"


def parse_picture_file(path: Path) -> Picture:
    return parse_picture(Path(path).read_text(encoding="utf-8"))


# Section catalogs -----------------------------------------------------------


def _parse_square(line: _Line, text: str) -> Square:
    parts = [p.strip() for p in text.split("|")]
    if len(parts) != 5:
        raise line.error("Expected '<type> | <base 4> | <boundary 6> | <interior 8> | <arcs>'", text)
    (kind,) = _ints(line, parts[0], 1, "Square type")
    base = tuple(_ints(line, parts[1], 4, "Square base"))
    boundary = tuple(_ints(line, parts[2], 6, "Boundary marking"))
    interior = tuple(_ints(line, parts[3], 8, "Interior marking"))
    (arcs,) = _ints(line, parts[4], 1, "Arc count")
    return Square(kind, base, boundary, interior, arcs)


def _emit_square(sq: Square) -> str:
    groups = ((sq.type,), sq.base, sq.boundary, sq.interior, (sq.arcs,))
    return " | ".join(" ".join(str(v) for v in group) for group in groups)


def parse_catalog(text: str) -> List[CorridorSection]:
    """Sections in file order; the Z-graph labels them ``1, 2, ...`` in that order."""
    sections = _sections(text, repeatable=("section",))
    unknown = [name for name in sections if name != "section"]
    if unknown:
        raise sections[unknown[0]][0].header.error(f"Unexpected section [{unknown[0]}]", "[")
    catalog: List[CorridorSection] = []
    seen = set()
    for section in sections.get("section", []):
        header = section.header
        if not section.arg:
            raise header.error("Expected '[section <id>]'", "[")
        sid = _identifier(header, section.arg, "section id")
        if sid in seen:
            raise header.error(f"Section '{sid}' declared twice", sid)
        seen.add(sid)
        kind, extent, squares = None, None, []
        for line in section.lines:
            key, sep, value = line.text.partition("=")
            key = key.strip()
            if not sep:
                raise line.error("Expected '<key> = <value>'", line.text)
            if key == "type":
                (kind,) = _ints(line, value, 1, "Section type")
            elif key == "extent":
                extent = tuple(_ints(line, value, 2, "Extent"))
            elif key == "square":
                squares.append(_parse_square(line, value))
            else:
                raise line.error(f"Unknown key '{key}'", key)
        if kind is None or extent is None:
            raise header.error(f"Section '{sid}' needs 'type =' and 'extent ='", sid)
        with _located(header, sid):
            catalog.append(CorridorSection(sid, kind, tuple(squares), extent))
    return catalog


def emit_catalog(catalog: Sequence[CorridorSection], title: str = "qexp section catalog") -> str:
    out = [f"# {title}"]
    for section in catalog:
        out += [f"[section {section.id}]", f"type = {section.type}", f"extent = {section.extent[0]} {section.extent[1]}"]
        out += [f"square = {_emit_square(sq)}" for sq in section.squares]
    return "\n".join(out) + "\n"


def parse_catalog_file(path: Path) -> List[CorridorSection]:
    return parse_catalog(Path(path).read_text(encoding="utf-8"))


if __name__ == "__main__":
    sample = """
    [factors]
    A = cyclic 0 a
    [environment]
    1 = A
    [equation]
    w1 [1]: x1^-1 d1 x1 x2^2
    [beta]
    d1 = (A:a)^[l1]
    [L]
    eq: l1 + 2 = 0
    """
    W = parse_equation(sample)
    print(emit_equation(W))
