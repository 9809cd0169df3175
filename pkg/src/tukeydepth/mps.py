"""Fixed-format MPS export of the depth and guess integer programs.

Column order is deterministic (x_1..x_d, then the binaries s_1..s_n, then
the epsilon variable in guess form), binaries sit between INTORG/INTEND
markers and also carry BV bounds, and values are written with shortest
round-tripping precision so a parse of our own output reproduces the model
bit-exactly.  Names stay within eight characters for fixed-format readers.
"""

from __future__ import annotations

from .engine import MipForm, MipModel

__all__ = ["write_mps", "render_mps"]

# Field start columns follow the classic fixed layout (2/5/15/25/40); the
# value fields are wider than the historical 12 characters because doubles
# need up to 17 significant digits to survive a round trip.
_F1 = 1
_F2 = 4
_F3 = 14
_F4 = 24
_F5 = 44


def _num(value: float) -> str:
    out = repr(float(value))
    if out.endswith(".0"):
        out = out[:-2]
    return out


def _line(*fields: tuple[int, str]) -> str:
    chars: list[str] = []
    for start, text in fields:
        if len(chars) < start:
            chars.extend(" " * (start - len(chars)))
        elif chars:
            chars.append(" ")
        chars.extend(text)
    return "".join(chars)


def _col_entries(name: str, entries: list[tuple[str, float]]) -> list[str]:
    lines = []
    for i in range(0, len(entries), 2):
        pair = entries[i:i + 2]
        fields = [(_F2, name), (_F3, pair[0][0]), (_F4, _num(pair[0][1]))]
        if len(pair) == 2:
            fields += [(_F5, pair[1][0]), (_F5 + 20, _num(pair[1][1]))]
        lines.append(_line(*fields))
    return lines


def render_mps(mip: MipModel, name: str = "TUKDEPTH") -> str:
    """Render the integer program as MPS text."""

    sys_ = mip.sys
    d, n = mip.dim, mip.n_binaries
    M = mip.bounds.bigM
    guess_form = mip.form is MipForm.GUESS

    x_names = [f"X{i + 1}" for i in range(d)]
    s_names = [f"S{j + 1}" for j in range(n)]
    row_names = [f"R{j + 1}" for j in range(n)]

    lines = [_line((0, "NAME"), (_F3, name)), "ROWS",
             _line((_F1, "N"), (_F2, "COST"))]
    for rn in row_names:
        lines.append(_line((_F1, "G"), (_F2, rn)))
    if guess_form:
        lines.append(_line((_F1, "L"), (_F2, "CARD")))

    lines.append("COLUMNS")
    for i, xn in enumerate(x_names):
        entries = [(row_names[j], sys_.rows[j, i]) for j in range(n)
                   if sys_.rows[j, i] != 0.0]
        lines += _col_entries(xn, entries)

    lines.append(_line((_F2, "MARKER"), (_F3, "'MARKER'"),
                       (_F4, "'INTORG'")))
    for j, sn in enumerate(s_names):
        entries = [(row_names[j], M)]
        if guess_form:
            entries.append(("CARD", float(sys_.weights[j])))
        else:
            entries.insert(0, ("COST", float(sys_.weights[j])))
        lines += _col_entries(sn, entries)
    lines.append(_line((_F2, "MARKER"), (_F3, "'MARKER'"),
                       (_F4, "'INTEND'")))

    if guess_form:
        entries = [("COST", -1.0)] + [(rn, -1.0) for rn in row_names]
        lines += _col_entries("EPS", entries)

    lines.append("RHS")
    if guess_form:
        rhs_entries = [("CARD", float(mip.guess))]
    else:
        rhs_entries = [(rn, mip.bounds.epsilon) for rn in row_names]
    lines += _col_entries("RHS", rhs_entries)

    lines.append("BOUNDS")
    c = mip.bounds.c
    for xn in x_names:
        lines.append(_line((_F1, "LO"), (_F2, "BND"), (_F3, xn),
                           (_F4, _num(-c))))
        lines.append(_line((_F1, "UP"), (_F2, "BND"), (_F3, xn),
                           (_F4, _num(c))))
    for sn in s_names:
        lines.append(_line((_F1, "BV"), (_F2, "BND"), (_F3, sn)))
    if guess_form:
        lines.append(_line((_F1, "UP"), (_F2, "BND"), (_F3, "EPS"),
                           (_F4, _num(M))))

    lines.append("ENDATA")
    return "\n".join(lines) + "\n"


def write_mps(mip: MipModel, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(render_mps(mip))
