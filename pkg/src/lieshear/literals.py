"""Text formats for forms, vectors, rationals and matrices used by the CLI.

Form literals are sums of terms `[rational "*"] "e" digits`, e.g.
"e1425 + e1436 - e4567" or "-1/2*e13"; indices above 9 use brackets,
"e[1,10,12]".  Vector literals use "E4" or combinations "E1 - 1/2*E3".
"0" denotes the zero form/vector.
"""
from __future__ import annotations

from fractions import Fraction

from .exterior import KForm, Vector


class LiteralError(ValueError):
    """Malformed form/vector/matrix literal."""


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip().replace(" ", ""))
    except (ValueError, ZeroDivisionError) as exc:
        raise LiteralError(f"bad rational {text!r}: {exc}") from None


def _split_signed_terms(text: str) -> list[tuple[int, str]]:
    out: list[tuple[int, str]] = []
    sign, chunk = 1, []
    started = False
    for ch in text:
        if ch in "+-" and started and chunk:
            out.append((sign, "".join(chunk).strip()))
            sign, chunk = (1 if ch == "+" else -1), []
        elif ch in "+-" and not chunk:
            sign *= 1 if ch == "+" else -1
            started = True
        else:
            if ch.isspace() and not chunk:
                continue
            chunk.append(ch)
            started = True
    if chunk:
        out.append((sign, "".join(chunk).strip()))
    if not out or any(not c for _, c in out):
        raise LiteralError(f"malformed expression {text!r}")
    return out


def _parse_indices(body: str, dim: int) -> list[int]:
    if body.startswith("["):
        if not body.endswith("]"):
            raise LiteralError(f"unclosed index bracket in {body!r}")
        try:
            idx = [int(p) for p in body[1:-1].split(",")]
        except ValueError:
            raise LiteralError(f"bad index list {body!r}") from None
    else:
        if not body or not body.isdigit():
            raise LiteralError(f"expected digit indices, got {body!r}")
        idx = [int(ch) for ch in body]
    for i in idx:
        if not 1 <= i <= dim:
            raise LiteralError(f"index {i} out of range 1..{dim}")
    return idx


def parse_form(text: str, dim: int, degree: int | None = None) -> KForm:
    """Parse a form literal; degree is required to interpret a bare "0"."""
    s = text.strip()
    if s == "0":
        if degree is None:
            raise LiteralError("zero form needs an expected degree")
        return KForm.zero(dim, degree)
    total: KForm | None = None
    for sign, term in _split_signed_terms(s):
        coeff = Fraction(sign)
        body = term
        if "*" in term:
            coeff_text, body = term.split("*", 1)
            coeff *= parse_rational(coeff_text)
            body = body.strip()
        if body.startswith("e"):
            idx = _parse_indices(body[1:].strip(), dim)
            try:
                part = KForm.monomial(dim, idx, coeff)
            except ValueError as exc:
                raise LiteralError(str(exc)) from None
        elif degree == 0 or (degree is None and not body.startswith("e")):
            # bare rational as a zero-degree form
            part = KForm.scalar(dim, coeff * parse_rational(body))
        else:
            raise LiteralError(f"expected a monomial like e13, got {body!r}")
        total = part if total is None else total + part
    assert total is not None
    if degree is not None and not total.is_zero() and total.degree != degree:
        raise LiteralError(f"expected a degree-{degree} form, got degree {total.degree}")
    return total


def parse_vector(text: str, dim: int) -> Vector:
    s = text.strip()
    if s == "0":
        return Vector.zero(dim)
    comps = [Fraction(0)] * dim
    for sign, term in _split_signed_terms(s):
        coeff = Fraction(sign)
        body = term
        if "*" in term:
            coeff_text, body = term.split("*", 1)
            coeff *= parse_rational(coeff_text)
            body = body.strip()
        if not body.startswith("E"):
            raise LiteralError(f"expected a frame vector like E4, got {body!r}")
        idx_text = body[1:].strip()
        if not idx_text.isdigit():
            raise LiteralError(f"bad frame index in {body!r}")
        i = int(idx_text)
        if not 1 <= i <= dim:
            raise LiteralError(f"index {i} out of range 1..{dim}")
        comps[i - 1] += coeff
    return Vector(comps)


def format_vector(v: Vector) -> str:
    parts = []
    for i, c in enumerate(v.components, start=1):
        if not c:
            continue
        if c == 1:
            parts.append(f"E{i}")
        elif c == -1:
            parts.append(f"-E{i}")
        else:
            parts.append(f"{c}*E{i}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def parse_matrix(text: str, dim: int) -> list[list[Fraction]]:
    """Rows separated by ';', entries by ','."""
    rows = []
    for row_text in text.strip().split(";"):
        entries = [parse_rational(e) for e in row_text.split(",")]
        if len(entries) != dim:
            raise LiteralError(f"expected {dim} entries per row, got {len(entries)}")
        rows.append(entries)
    if len(rows) != dim:
        raise LiteralError(f"expected {dim} rows, got {len(rows)}")
    return rows
