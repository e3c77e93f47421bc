"""Line-oriented fan files.

    rank 2
    ray a 1 0
    ray b 0 1
    ray c -1 -1
    cone a b
    cone b c
    cone c a
    divisor H 1 0 0      # name optional; one coefficient per ray, in ray order

Only maximal cones need to be listed. ``#`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .cech import ToricDivisor
from .errors import ParseError
from .lattice import Fan, validate_fan

_INT = re.compile(r"[+-]?\d+$")


@dataclass
class FanSpec:
    fan: Fan
    ray_ids: list
    divisors: dict = field(default_factory=dict)

    @property
    def divisor(self) -> ToricDivisor | None:
        return next(iter(self.divisors.values()), None)

    def resolve_divisor(self, text: str) -> ToricDivisor:
        """A divisor by name from the file, or an inline comma/space separated coefficient list."""
        if text in self.divisors:
            return self.divisors[text]
        parts = [t for t in re.split(r"[,\s]+", text.strip()) if t]
        if not parts or not all(_INT.match(t) for t in parts):
            raise ParseError(f"unknown divisor {text!r}; named divisors: {sorted(self.divisors)}")
        if len(parts) != len(self.fan.rays):
            raise ParseError(f"divisor has {len(parts)} coefficients but the fan has {len(self.fan.rays)} rays")
        return ToricDivisor(int(t) for t in parts)


def _tokens(line: str):
    """(token, 1-based column) pairs, comments stripped."""
    body = line.split("#", 1)[0]
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", body)]


def _int(tok, lineno):
    text, col = tok
    if not _INT.match(text):
        raise ParseError(f"expected an integer, got {text!r}", lineno, col)
    return int(text)


def parse_fan_text(text: str) -> FanSpec:
    rank = None
    rays, ids, cones, divisors = [], [], [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        toks = _tokens(line)
        if not toks:
            continue
        (kw, col), args = toks[0], toks[1:]
        if kw == "rank":
            if len(args) != 1:
                raise ParseError("rank takes one integer", lineno, col)
            if rank is not None:
                raise ParseError("rank given twice", lineno, col)
            rank = _int(args[0], lineno)
            if rank < 1:
                raise ParseError("rank must be positive", lineno, args[0][1])
        elif kw == "ray":
            if rank is None:
                raise ParseError("ray before rank", lineno, col)
            if len(args) != rank + 1:
                raise ParseError(f"ray needs an id and {rank} coordinates", lineno, col)
            rid = args[0][0]
            if rid in ids:
                raise ParseError(f"duplicate ray id {rid!r}", lineno, args[0][1])
            ids.append(rid)
            rays.append(tuple(_int(t, lineno) for t in args[1:]))
        elif kw == "cone":
            if not args:
                raise ParseError("cone needs at least one ray id", lineno, col)
            idx = []
            for text_, c in args:
                if text_ not in ids:
                    raise ParseError(f"unknown ray id {text_!r}", lineno, c)
                idx.append(ids.index(text_))
            cones.append(idx)
        elif kw == "divisor":
            name = None
            if args and not _INT.match(args[0][0]):
                name, args = args[0][0], args[1:]
            divisors.append((name, [_int(t, lineno) for t in args], lineno, col))
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno, col)
    if rank is None:
        raise ParseError("missing rank line")
    if not rays:
        raise ParseError("no rays")
    fan = validate_fan(rays, cones, rank)
    named = {}
    for i, (name, coeffs, lineno, col) in enumerate(divisors):
        if len(coeffs) != len(rays):
            raise ParseError(f"divisor needs {len(rays)} coefficients, got {len(coeffs)}", lineno, col)
        key = name or ("D" if i == 0 else f"D{i + 1}")
        if key in named:
            raise ParseError(f"duplicate divisor name {key!r}", lineno, col)
        named[key] = ToricDivisor(coeffs)
    return FanSpec(fan, ids, named)


def parse_fan_file(path) -> FanSpec:
    return parse_fan_text(Path(path).read_text())


def format_fan(fan: Fan, divisors: dict | None = None) -> str:
    lines = [f"rank {fan.rank}"]
    for i, r in enumerate(fan.rays):
        lines.append(f"ray r{i} " + " ".join(map(str, r)))
    for c in fan.maximal_cones:
        lines.append("cone " + " ".join(f"r{i}" for i in c))
    for name, D in (divisors or {}).items():
        lines.append(f"divisor {name} " + " ".join(map(str, D.coeffs)))
    return "\n".join(lines) + "\n"
