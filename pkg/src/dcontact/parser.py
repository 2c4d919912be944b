"""Manifest and expression parsing (grammar frozen in docs/FORMAT.md)."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .cdga import Cdga, CdgaSpec, DarbouxLayout, Point, build_tower, differential_from_hamiltonian, localize, with_differential
from .darboux import DarbouxScheme
from .derham import Form
from .errors import DContactError, DegreeError
from .graded import GradedVar, Poly, dR

SECTIONS = ("algebra", "scheme", "differential", "hamiltonian", "forms", "points")
ALGEBRA_KEYS = ("name", "k", "generators", "invertible", "localize", "pairs", "zvars", "contact_z", "spectators")
SCHEME_KEYS = ("name", "k", "case", "counts", "zcount", "contact", "z_mode", "spectators", "z", "localize")

# diagnostic codes
E_STRUCTURE = "E100"
E_EXPR = "E101"
E_VALUE = "E102"
E_DUPLICATE = "E200"
E_DEGREE = "E300"
E_UNDECLARED = "E400"
E_INVALID = "E500"
E_MISSING = "E600"


class ManifestError(DContactError):
    def __init__(self, code: str, message: str, line: int = 0, col: int = 0, expected=()):
        self.code, self.line, self.col = code, line, col
        self.expected = tuple(expected)
        self.message = message
        text = f"{line}:{col}: {code} {message}"
        if self.expected:
            text += " (expected " + ", ".join(self.expected) + ")"
        super().__init__(text)


# -- expressions ---------------------------------------------------------------

_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S)")


@dataclass(frozen=True)
class Tok:
    kind: str  # NUM, IDENT, OP, END
    text: str
    col: int


def tokenize(text: str, line: int = 0, col0: int = 1) -> list[Tok]:
    out = []
    for m in _TOKEN.finditer(text):
        col = col0 + m.start()
        if m.group(1):
            out.append(Tok("NUM", m.group(1), col))
        elif m.group(2):
            out.append(Tok("IDENT", m.group(2), col))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ManifestError(E_EXPR, f"unexpected character {ch!r}", line, col,
                                    ("number", "identifier", "D(", "(", "-"))
            out.append(Tok("OP", ch, col))
    end_col = col0 + len(text.rstrip())
    out.append(Tok("END", "", end_col))
    return out


class _ExprParser:
    def __init__(self, text: str, resolve: Callable[[str, int], GradedVar], line: int, col0: int):
        self.toks = tokenize(text, line, col0)
        self.i = 0
        self.resolve = resolve
        self.line = line

    def peek(self) -> Tok:
        return self.toks[self.i]

    def take(self) -> Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, expected, tok: Tok | None = None):
        tok = tok or self.peek()
        raise ManifestError(E_EXPR, msg, self.line, tok.col, expected)

    def parse(self) -> Poly:
        if self.peek().kind == "END":
            self.fail("empty expression", ("number", "identifier", "D(", "(", "-"))
        p = self.expr()
        if self.peek().kind != "END":
            t = self.peek()
            self.fail(f"unexpected {t.text!r}", ("+", "-", "*", "^", "end of expression"))
        return p

    def expr(self) -> Poly:
        out = self.term()
        while self.peek().kind == "OP" and self.peek().text in "+-":
            op = self.take().text
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> Poly:
        out = self.unary()
        while self.peek().kind == "OP" and self.peek().text == "*":
            self.take()
            out = out * self.unary()
        return out

    def unary(self) -> Poly:
        if self.peek().kind == "OP" and self.peek().text == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self) -> Poly:
        start = self.peek()
        base, var = self.atom()
        if self.peek().kind == "OP" and self.peek().text == "^":
            self.take()
            neg = False
            if self.peek().kind == "OP" and self.peek().text == "-":
                self.take()
                neg = True
            t = self.take()
            if t.kind != "NUM":
                self.fail("exponent must be an integer", ("integer",), t)
            n = int(t.text) * (-1 if neg else 1)
            if n < 0:
                if var is None or not var.invertible:
                    raise ManifestError(E_DEGREE, "negative exponent on a non-invertible factor",
                                        self.line, start.col)
                return Poly.var(var, n)
            if var is not None:
                return Poly.var(var, n)
            return base ** n
        return base

    def atom(self):
        t = self.take()
        if t.kind == "NUM":
            num = int(t.text)
            if self.peek().kind == "OP" and self.peek().text == "/":
                self.take()
                d = self.take()
                if d.kind != "NUM":
                    self.fail("denominator must be an integer", ("integer",), d)
                if int(d.text) == 0:
                    self.fail("zero denominator", ("nonzero integer",), d)
                return Poly.const(Fraction(num, int(d.text))), None
            return Poly.const(num), None
        if t.kind == "IDENT":
            if t.text == "D" and self.peek().kind == "OP" and self.peek().text == "(":
                self.take()
                g = self.take()
                if g.kind != "IDENT":
                    self.fail("D() takes a generator name", ("identifier",), g)
                close = self.take()
                if close.kind != "OP" or close.text != ")":
                    self.fail("missing ')'", (")",), close)
                v = self.resolve(g.text, g.col)
                return Poly.var(dR(v)), None
            v = self.resolve(t.text, t.col)
            return Poly.var(v), v
        if t.kind == "OP" and t.text == "(":
            inner = self.expr()
            close = self.take()
            if close.kind != "OP" or close.text != ")":
                self.fail("missing ')'", (")",), close)
            return inner, None
        self.fail(f"unexpected {t.text or 'end of expression'!r}",
                  ("number", "identifier", "D(", "(", "-"), t)


def parse_expression(text: str, variables: dict[str, GradedVar], line: int = 0, col0: int = 1) -> Poly:
    def resolve(name: str, col: int) -> GradedVar:
        if name not in variables:
            raise ManifestError(E_UNDECLARED, f"undeclared name {name!r}", line, col)
        return variables[name]

    return _ExprParser(text, resolve, line, col0).parse()


def parse_form(text: str, variables: dict[str, GradedVar], line: int = 0, col0: int = 1) -> Form:
    p = parse_expression(text, variables, line, col0)
    try:
        return Form(p)
    except DegreeError as e:
        raise ManifestError(E_DEGREE, str(e), line, col0) from None


# -- manifest ------------------------------------------------------------------

@dataclass
class Entry:
    key: str
    value: str
    line: int
    col: int  # column of the value's first character


@dataclass
class Manifest:
    name: str = "A"
    k: int | None = None
    algebra: Cdga | None = None
    scheme: DarbouxScheme | None = None
    variables: dict = field(default_factory=dict)
    hamiltonian: Poly | None = None
    z_element: Poly | None = None
    localize: list = field(default_factory=list)
    forms: dict = field(default_factory=dict)
    points: dict = field(default_factory=dict)
    explicit_differential: dict = field(default_factory=dict)


def _sections(text: str) -> dict[str, dict[str, Entry]]:
    out: dict[str, dict[str, Entry]] = {}
    current = None
    for ln, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped or stripped.startswith(";"):
            continue
        indent = len(line) - len(line.lstrip())
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ManifestError(E_STRUCTURE, "unterminated section header", ln, len(line) + 1, ("]",))
            name = stripped[1:-1].strip()
            if name not in SECTIONS:
                raise ManifestError(E_STRUCTURE, f"unknown section [{name}]", ln, indent + 2, SECTIONS)
            if name in out:
                raise ManifestError(E_DUPLICATE, f"duplicate section [{name}]", ln, indent + 1)
            out[name] = {}
            current = name
            continue
        if "=" not in stripped:
            raise ManifestError(E_STRUCTURE, "expected 'key = value'", ln, indent + 1, ("=",))
        if current is None:
            raise ManifestError(E_STRUCTURE, "entry outside any section", ln, indent + 1, ("[section]",))
        key, _, value = line.partition("=")
        key = key.strip()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", key):
            raise ManifestError(E_STRUCTURE, f"invalid key {key!r}", ln, indent + 1, ("identifier",))
        if key in out[current]:
            raise ManifestError(E_DUPLICATE, f"duplicate key {key!r} in [{current}]", ln, indent + 1)
        vcol = len(line) - len(value) + 1
        lead = len(value) - len(value.lstrip())
        out[current][key] = Entry(key, value.strip(), ln, vcol + lead)
    return out


def _split_list(e: Entry) -> list[tuple[str, int]]:
    v = e.value
    if not (v.startswith("[") and v.endswith("]")):
        raise ManifestError(E_VALUE, "expected a bracketed list", e.line, e.col, ("[",))
    body = v[1:-1]
    items = []
    depth, start = 0, 0
    for i, ch in enumerate(body + ","):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            raw = body[start:i]
            if raw.strip():
                lead = len(raw) - len(raw.lstrip())
                items.append((raw.strip(), e.col + 1 + start + lead))
            elif i < len(body) or items:
                raise ManifestError(E_VALUE, "empty list item", e.line, e.col + 1 + start)
            start = i + 1
    return items


def _int(e: Entry, text: str | None = None, col: int | None = None) -> int:
    t = e.value if text is None else text
    if not re.fullmatch(r"[+-]?\d+", t.strip()):
        raise ManifestError(E_VALUE, f"expected an integer, got {t!r}", e.line, col or e.col, ("integer",))
    return int(t)


def _rational(e: Entry, text: str, col: int) -> Fraction:
    t = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", t):
        raise ManifestError(E_VALUE, f"expected a rational p/q, got {t!r}", e.line, col, ("rational",))
    try:
        return Fraction(t)
    except ZeroDivisionError:
        raise ManifestError(E_VALUE, "zero denominator", e.line, col) from None


def _bool(e: Entry) -> bool:
    if e.value not in ("true", "false"):
        raise ManifestError(E_VALUE, f"expected true or false, got {e.value!r}", e.line, e.col, ("true", "false"))
    return e.value == "true"


def _ident(e: Entry, text: str | None = None, col: int | None = None) -> str:
    t = (e.value if text is None else text).strip()
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", t):
        raise ManifestError(E_VALUE, f"expected an identifier, got {t!r}", e.line, col or e.col, ("identifier",))
    return t


def _pairs(e: Entry) -> list[tuple[str, str, int]]:
    out = []
    for item, col in _split_list(e):
        a, sep, b = item.partition(":")
        if not sep:
            raise ManifestError(E_VALUE, f"expected 'name:value', got {item!r}", e.line, col, (":",))
        out.append((a.strip(), b.strip(), col))
    return out


def _check_keys(sec: dict[str, Entry], allowed, section: str):
    for key, e in sec.items():
        if key not in allowed:
            raise ManifestError(E_INVALID, f"unknown key {key!r} in [{section}]", e.line, 1, allowed)


def _parse_algebra(sec: dict[str, Entry], diff: dict[str, Entry], m: Manifest) -> None:
    _check_keys(sec, ALGEBRA_KEYS, "algebra")
    gens: dict[str, GradedVar] = {}
    order = []
    invertible = set()
    if "invertible" in sec:
        for item, col in _split_list(sec["invertible"]):
            invertible.add(_ident(sec["invertible"], item, col))
    if "generators" in sec:
        e = sec["generators"]
        for name, deg, col in _pairs(e):
            name = _ident(e, name, col)
            if name == "D":
                raise ManifestError(E_INVALID, "'D' is reserved", e.line, col)
            d = _int(e, deg, col)
            if d > 0:
                raise ManifestError(E_DEGREE, f"generator {name} has positive degree {d}", e.line, col)
            if name in gens:
                raise ManifestError(E_DUPLICATE, f"duplicate generator {name!r}", e.line, col)
            inv = name in invertible
            if inv and d != 0:
                raise ManifestError(E_DEGREE, f"invertible generator {name} must have degree 0", e.line, col)
            gens[name] = GradedVar(name, d, invertible=inv)
            order.append(name)
    for name in invertible:
        if name not in gens:
            e = sec["invertible"]
            raise ManifestError(E_UNDECLARED, f"undeclared name {name!r}", e.line, e.col)
    if "k" in sec:
        m.k = _int(sec["k"])
    layout = None
    if any(key in sec for key in ("pairs", "zvars", "contact_z", "spectators")):
        if m.k is None:
            e = next(sec[key] for key in ("pairs", "zvars", "contact_z", "spectators") if key in sec)
            raise ManifestError(E_MISSING, "a Darboux layout needs k", e.line, 1, ("k",))
        pairs = []
        if "pairs" in sec:
            e = sec["pairs"]
            for a, b, col in _pairs(e):
                for n in (a, b):
                    if n not in gens:
                        raise ManifestError(E_UNDECLARED, f"undeclared name {n!r}", e.line, col)
                x, y = gens[a], gens[b]
                pairs.append((x, y, -x.degree))
        zs = []
        if "zvars" in sec:
            e = sec["zvars"]
            for item, col in _split_list(e):
                if item not in gens:
                    raise ManifestError(E_UNDECLARED, f"undeclared name {item!r}", e.line, col)
                zs.append(gens[item])
        cz = None
        if "contact_z" in sec:
            e = sec["contact_z"]
            if e.value not in gens:
                raise ManifestError(E_UNDECLARED, f"undeclared name {e.value!r}", e.line, e.col)
            cz = gens[e.value]
        spect = []
        if "spectators" in sec:
            e = sec["spectators"]
            for item, col in _split_list(e):
                if item not in gens:
                    raise ManifestError(E_UNDECLARED, f"undeclared name {item!r}", e.line, col)
                spect.append(gens[item])
        try:
            layout = DarbouxLayout(m.k, None, tuple(pairs), tuple(zs), cz, tuple(spect))
        except DContactError as err:
            e = sec.get("pairs") or sec.get("zvars") or sec["k"]
            raise ManifestError(E_INVALID, str(err), e.line, e.col) from None
    images = {}
    for key, e in diff.items():
        if key not in gens:
            raise ManifestError(E_UNDECLARED, f"undeclared generator {key!r}", e.line, 1)
        img = parse_expression(e.value, gens, e.line, e.col)
        v = gens[key]
        if img and img.degree != v.degree + 1:
            raise ManifestError(E_DEGREE, f"d({key}) must have degree {v.degree + 1}, got {img.degree}",
                                e.line, e.col)
        if img.weight:
            raise ManifestError(E_DEGREE, f"d({key}) must not contain D()", e.line, e.col)
        images[v] = img
        m.explicit_differential[key] = img
    base = [gens[n] for n in order if gens[n].degree == 0]
    neg = [gens[n] for n in order if gens[n].degree < 0]
    try:
        A = build_tower(CdgaSpec(base, neg, images, layout, m.name))
    except DContactError as err:
        e = next(iter(diff.values()), None) or sec.get("generators")
        code = E_DEGREE if isinstance(err, DegreeError) else E_INVALID
        raise ManifestError(code, str(err), e.line if e else 0, e.col if e else 0) from None
    m.algebra = A
    m.variables = dict(gens)


def _parse_scheme(sec: dict[str, Entry], m: Manifest) -> None:
    _check_keys(sec, SCHEME_KEYS, "scheme")
    if "k" not in sec:
        raise ManifestError(E_MISSING, "[scheme] needs k", 0, 0, ("k",))
    k = _int(sec["k"])
    m.k = k
    counts = tuple(_int(sec["counts"], t, c) for t, c in _split_list(sec["counts"])) if "counts" in sec else ()
    zcount = _int(sec["zcount"]) if "zcount" in sec else 0
    contact = _bool(sec["contact"]) if "contact" in sec else False
    z_mode = _ident(sec["z_mode"]) if "z_mode" in sec else "generator"
    spect = _int(sec["spectators"]) if "spectators" in sec else 0
    case = sec["case"].value if "case" in sec else None
    try:
        s = DarbouxScheme(k, counts, zcount, contact, z_mode, spect, case)
    except DContactError as err:
        e = sec["k"]
        raise ManifestError(E_INVALID, str(err), e.line, e.col) from None
    m.scheme = s
    m.variables = s.variables()
    if "z" in sec:
        e = sec["z"]
        if not contact or z_mode != "element":
            raise ManifestError(E_INVALID, "z is only given in contact element mode", e.line, e.col)
        z = parse_expression(e.value, m.variables, e.line, e.col)
        if z and z.degree != k:
            raise ManifestError(E_DEGREE, f"z must have degree {k}", e.line, e.col)
        m.z_element = z
    elif contact and z_mode == "element":
        raise ManifestError(E_MISSING, "element mode needs z", sec["z_mode"].line, 1, ("z",))


def parse_manifest(text: str) -> Manifest:
    """Parse and resolve a manifest; every problem raises :class:`ManifestError`."""
    secs = _sections(text)
    m = Manifest()
    head = secs.get("algebra") or secs.get("scheme") or {}
    if "name" in head:
        m.name = _ident(head["name"])
    if "algebra" in secs and "scheme" in secs:
        e = next(iter(secs["scheme"].values()), Entry("", "", 0, 0))
        raise ManifestError(E_INVALID, "[algebra] and [scheme] are mutually exclusive", e.line, 1)
    if "scheme" in secs:
        if "differential" in secs and secs["differential"]:
            e = next(iter(secs["differential"].values()))
            raise ManifestError(E_INVALID, "a scheme derives its differential from H", e.line, 1)
        _parse_scheme(secs["scheme"], m)
    else:
        _parse_algebra(secs.get("algebra", {}), secs.get("differential", {}), m)
    # localization symbols
    loc_sec = secs.get("scheme") or secs.get("algebra") or {}
    if "localize" in loc_sec:
        e = loc_sec["localize"]
        n = 1
        for item, col in _split_list(e):
            g = parse_expression(item, m.variables, e.line, col)
            if g.is_zero() or g.degree != 0 or g.weight:
                raise ManifestError(E_DEGREE, "can only invert nonzero degree-0 functions", e.line, col)
            m.localize.append(g)
            single = len(g.terms) == 1 and len(next(iter(g.terms))) == 1
            if single:
                (mono, c), = g.terms.items()
                if c == 1 and mono[0][1] == 1:
                    old = mono[0][0]
                    m.variables[old.name] = GradedVar(old.name, 0, invertible=True)
                    continue
            while f"inv{n}" in m.variables:
                n += 1
            m.variables[f"inv{n}"] = GradedVar(f"inv{n}", 0, invertible=True)
    if m.algebra is not None:
        A = m.algebra
        for g in m.localize:
            A = localize(A, _retarget(g, A))
        m.algebra = A
        m.variables = {v.name: v for v in A.generators}
    ham = secs.get("hamiltonian", {})
    for key, e in ham.items():
        if key != "H":
            raise ManifestError(E_INVALID, f"unknown key {key!r} in [hamiltonian]", e.line, 1, ("H",))
        H = parse_expression(e.value, m.variables, e.line, e.col)
        if m.k is None:
            raise ManifestError(E_MISSING, "a Hamiltonian needs k", e.line, 1, ("k",))
        if H and (H.degree != m.k + 1 or H.weight):
            raise ManifestError(E_DEGREE, f"H must have degree {m.k + 1}", e.line, e.col)
        if m.algebra is not None and m.algebra.layout is None:
            raise ManifestError(E_MISSING, "a Hamiltonian needs a Darboux layout (pairs)", e.line, 1, ("pairs",))
        if m.algebra is not None:
            lay_names = {v.name for v in m.algebra.layout.variables()}
            clash = sorted(lay_names & set(m.explicit_differential))
            if clash:
                raise ManifestError(E_INVALID, f"d({clash[0]}) is fixed by H", e.line, 1)
        m.hamiltonian = H
    for key, e in secs.get("forms", {}).items():
        if key == "D":
            raise ManifestError(E_INVALID, "'D' is reserved", e.line, 1)
        m.forms[key] = parse_form(e.value, m.variables, e.line, e.col)
    for key, e in secs.get("points", {}).items():
        vals = {}
        for name, val, col in _pairs(e) if e.value.strip() != "[]" else []:
            if name not in m.variables or m.variables[name].degree != 0:
                raise ManifestError(E_UNDECLARED, f"{name!r} is not a degree-0 generator", e.line, col)
            if name in vals:
                raise ManifestError(E_DUPLICATE, f"duplicate coordinate {name!r}", e.line, col)
            q = _rational(e, val, col)
            if m.variables[name].invertible and not q:
                raise ManifestError(E_INVALID, f"invertible {name!r} assigned 0", e.line, col)
            vals[name] = q
        m.points[key] = Point(vals, key)
    return m


def _retarget(g: Poly, A: Cdga) -> Poly:
    """Rebind symbols of g to A's current generators (invertibility may have changed)."""
    out = {}
    for mono, c in g.terms.items():
        out[tuple((A.gen(v.name), e) for v, e in mono)] = c
    return Poly(out)


def build_manifest_algebra(m: Manifest) -> Cdga:
    """For [algebra] manifests: the algebra, with d on the layout variables taken from H."""
    A = m.algebra
    if m.hamiltonian is not None and A.layout is not None:
        A = with_differential(A, differential_from_hamiltonian(A, _retarget(m.hamiltonian, A)).images)
    return A
