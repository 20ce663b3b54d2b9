"""Curve spec text, fixtures and report serialization.

Curve spec grammar::

    p=<int> r=<int> [name=<word>]
    F = <expression>

The expression is a sum of terms built from ``+``, ``-``, ``*``, ``^``
(non-negative integer exponents) and parentheses over the variables x, y,
z, integer literals in [0, p) and the generator ``g``.  Lines starting
with ``#`` are ignored.
"""

from __future__ import annotations

import csv
import io as _io
import json
import re
from importlib import resources

from .curves import PlaneCurve
from .errors import BadFieldLiteral, NonHomogeneous, ParseError
from .forms import TernaryForm
from .gf import field_create

SCHEMA_VERSION = 1
_VARS = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}
_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\d+)|([A-Za-z_]\w*)|(\S))")


# expression parsing --------------------------------------------------------------

class _Poly:
    """Sparse polynomial in x, y, z during parsing (not necessarily homogeneous)."""

    def __init__(self, ctx, terms=None):
        self.ctx = ctx
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = self.ctx.add(out.get(m, 0), c)
        return _Poly(self.ctx, out)

    def __neg__(self):
        return _Poly(self.ctx, {m: self.ctx.neg(c) for m, c in self.terms.items()})

    def __mul__(self, other):
        out = {}
        add, mul = self.ctx.add, self.ctx.mul
        for (a, b, c), u in self.terms.items():
            for (i, j, k), v in other.terms.items():
                key = (a + i, b + j, c + k)
                out[key] = add(out.get(key, 0), mul(u, v))
        return _Poly(self.ctx, out)

    def power(self, n):
        out = _Poly(self.ctx, {(0, 0, 0): 1})
        for _ in range(n):
            out = out * self
        return out


class _Parser:
    def __init__(self, ctx, text, offset=0):
        self.ctx = ctx
        self.text = text
        self.offset = offset
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                break
            if m.group(0).strip():
                kind = "num" if m.group(1) else ("name" if m.group(2) else "op")
                start = m.start(m.lastindex)
                self.tokens.append((kind, m.group(m.lastindex), start))
            pos = m.end()
        self.i = 0

    def _pos(self):
        if self.i < len(self.tokens):
            return self.offset + self.tokens[self.i][2]
        return self.offset + len(self.text)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val, _ = self.peek()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", self._pos())
        self.i += 1

    def parse(self):
        if not self.tokens:
            raise ParseError("empty expression", self._pos())
        out = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"unexpected {self.peek()[1]!r}", self._pos())
        return out

    def expr(self):
        kind, val, _ = self.peek()
        neg = False
        if kind == "op" and val in "+-":
            self.take()
            neg = val == "-"
        out = self.term()
        if neg:
            out = -out
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                out = out + (-t if val == "-" else t)
            else:
                return out

    def term(self):
        out = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                out = out * self.factor()
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                raise ParseError("missing '*' between factors", self._pos())
            else:
                return out

    def factor(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, _ = self.peek()
            if kind != "num" or not val.isdigit():
                raise ParseError("exponent must be a non-negative integer", self._pos())
            self.take()
            base = base.power(int(val))
        return base

    def atom(self):
        pos = self._pos()
        kind, val, _ = self.take()
        ctx = self.ctx
        if kind == "num":
            if not val.isdigit():
                raise BadFieldLiteral(f"{val!r} is not a field literal", pos)
            n = int(val)
            if n >= ctx.p:
                raise BadFieldLiteral(f"integer literal {n} is not in [0, {ctx.p})", pos)
            return _Poly(ctx, {(0, 0, 0): n})
        if kind == "name":
            if val in _VARS:
                return _Poly(ctx, {_VARS[val]: 1})
            if val == "g":
                return _Poly(ctx, {(0, 0, 0): ctx.generator})
            raise BadFieldLiteral(f"unknown symbol {val!r}", pos)
        if kind == "op" and val == "(":
            out = self.expr()
            self.expect(")")
            return out
        if kind is None:
            raise ParseError("unexpected end of expression", pos)
        raise ParseError(f"unexpected {val!r}", pos)


def parse_form(text, ctx, offset=0):
    """Parse a homogeneous form over ``ctx``."""
    poly = _Parser(ctx, text, offset).parse()
    if not poly.terms:
        return TernaryForm(ctx, 0)
    degs = {sum(m) for m in poly.terms}
    if len(degs) != 1:
        raise NonHomogeneous(f"terms of degrees {sorted(degs)}", offset)
    return TernaryForm(ctx, degs.pop(), poly.terms)


_HEADER = re.compile(r"^\s*p\s*=\s*(\d+)\s+r\s*=\s*(\d+)(?:\s+name\s*=\s*([\w.-]+))?\s*$")
_BODY = re.compile(r"^\s*F\s*=")


def parse_curve_spec(text):
    """Parse curve spec text into a :class:`PlaneCurve`."""
    lines = text.splitlines(keepends=True)
    offsets = []
    pos = 0
    for ln in lines:
        offsets.append(pos)
        pos += len(ln)
    content = [(o, ln.rstrip("\r\n")) for o, ln in zip(offsets, lines)
               if ln.strip() and not ln.lstrip().startswith("#")]
    if len(content) < 2:
        raise ParseError("expected a header line and an 'F = ...' line", len(text))
    (h_off, header), (b_off, body) = content[0], content[1]
    if len(content) > 2:
        raise ParseError("unexpected text after the form", content[2][0])
    m = _HEADER.match(header)
    if not m:
        raise ParseError("header must read 'p=<int> r=<int>'", h_off)
    p, r, name = int(m.group(1)), int(m.group(2)), m.group(3)
    ctx = field_create(p, r)
    mb = _BODY.match(body)
    if not mb:
        raise ParseError("body must start with 'F ='", b_off)
    F = parse_form(body[mb.end():], ctx, b_off + mb.end())
    if F.is_zero:
        raise ParseError("the form is zero", b_off + mb.end())
    return PlaneCurve(F, name=name)


def format_curve_spec(C):
    """Canonical spec text; parses back to an equal curve."""
    head = f"p={C.ctx.p} r={C.ctx.m}"
    if C.name:
        head += f" name={C.name}"
    return f"{head}\nF = {C.F.to_text()}\n"


def read_curve(path):
    with open(path, encoding="utf-8") as fh:
        return parse_curve_spec(fh.read())


# fixtures ----------------------------------------------------------------------

def _fixture_dir():
    return resources.files("ffcurves") / "fixtures"


def fixture_manifest():
    return json.loads((_fixture_dir() / "manifest.json").read_text(encoding="utf-8"))


def fixture_names():
    return [entry["name"] for entry in fixture_manifest()["curves"]]


def load_fixture(name):
    for entry in fixture_manifest()["curves"]:
        if entry["name"] == name:
            C = parse_curve_spec((_fixture_dir() / entry["file"]).read_text(encoding="utf-8"))
            C.name = name
            return C
    raise KeyError(f"no fixture named {name!r}")


def load_all_fixtures():
    return [load_fixture(n) for n in fixture_names()]


def report_schema():
    text = (resources.files("ffcurves") / "schemas" / "report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


# reports -------------------------------------------------------------------------

def field_model(ctx):
    return {
        "p": ctx.p,
        "r": ctx.m,
        "q": ctx.q,
        "modulus": ctx.modulus_text(),
        "generator": ctx.generator_text(),
    }


def make_report(command, args, ctx, result, version):
    return {
        "schema_version": SCHEMA_VERSION,
        "artifact_version": version,
        "command": command,
        "args": args,
        "field": field_model(ctx) if ctx is not None else None,
        "result": result,
    }


def to_json(report):
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def to_csv(report):
    """Census reports give one row per line; others one row per verdict."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    result = report.get("result") or {}
    if "lines" in result:
        w.writerow(["line", "class", "profile", "rational_points"])
        for rec in result["lines"]:
            prof = ";".join(f"({e},{m},{c})" for e, m, c in rec["profile"])
            pts = ";".join("[" + ":".join(r["point"]) + "]" for r in rec["rational_points"])
            w.writerow(["[" + ":".join(rec["line"]) + "]", rec["class"], prof, pts])
    elif "verdicts" in result:
        w.writerow(["index", "status", "p", "r", "F"])
        for v in result["verdicts"]:
            c = v.get("curve") or {}
            w.writerow([v["index"], v["status"], c.get("p", ""), c.get("r", ""), c.get("F", "")])
    else:
        w.writerow(["key", "value"])
        for k, v in _flatten(result):
            w.writerow([k, v])
    return buf.getvalue()


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list) and all(not isinstance(x, (dict, list)) for x in obj):
        yield prefix[:-1], " ".join(str(x) for x in obj)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix[:-1], obj


def _md_table(rows, header):
    out = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    out += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return "\n".join(out)


def to_markdown(report):
    res = report.get("result") or {}
    fld = report.get("field") or {}
    lines = [f"# {report['command']}", ""]
    if fld:
        lines += [f"Field GF({fld['q']}), modulus {fld['modulus']}, generator g = {fld['generator']}", ""]
    if "curve" in res:
        lines += [f"Curve: `{res['curve']['F']}`", ""]
    scalars = [[k, v] for k, v in res.items()
               if k not in ("curve", "n_reading") and isinstance(v, (int, str, bool, type(None)))]
    if scalars:
        lines += [_md_table(scalars, ["quantity", "value"]), ""]
    if "divisor" in res:
        div = res["divisor"]
        rows = [[e, m, c] for e, m, c in div["entries"]]
        lines += [f"Divisor of degree {div['total_degree']} (expected {div['expected_degree']})", "",
                  _md_table(rows, ["residue degree", "multiplicity", "closed points"]), ""]
    if "census" in res:
        c = res["census"]
        lines += [_md_table([[c["T"], c["R"], c["S"], c["lines_total"]]], ["T", "R", "S", "lines"]), ""]
    if "points" in res:
        lines += [f"#C(F_q) = {res['points']}", ""]
    svbs = []
    if "svb" in res:
        svbs.append(res["svb"])
    for v in res.get("verdicts", []):
        if "svb" in v:
            svbs.append(v["svb"])
    if svbs:
        rows = [[s["rational_points"], s["N"], f"{s['lhs']} ≤ {s['rhs']}", s["slack"], s["holds"]] for s in svbs]
        lines += ["2#C + N ≤ d(q+d−1)", "", _md_table(rows, ["#C(F_q)", "N", "2#C + N ≤ d(q+d−1)", "slack", "holds"]), ""]
    if "aggregate" in res:
        agg = res["aggregate"]
        lines += [_md_table([[k, v] for k, v in agg.items()], ["status", "count"]), ""]
    if "summary" in res:
        lines += [_md_table([[k, json.dumps(v)] for k, v in res["summary"].items()], ["key", "value"]), ""]
    return "\n".join(lines).rstrip() + "\n"


def render(report, fmt):
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    if fmt == "md":
        return to_markdown(report)
    raise ValueError(f"unknown format {fmt!r}")


def emit_report(report, fmt="json", path=None):
    """Serialize ``report``; write to ``path`` or return the text when None."""
    text = render(report, fmt)
    if path is None:
        return text
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text
