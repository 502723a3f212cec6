"""Ordered wildcard-pattern presentations of local rules.

A program lists window patterns over {0, 1, *} with an output bit each; the
first pattern matching a window decides its output, so later rules only see
the leftovers of earlier ones.  Programs must cover every window.

Text format, one rule per line::

    # comment
    radius 2
    **00* -> 1
    **01* -> 0
    ***01 -> 1
    ***** -> 0
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .rules import LocalRule, index_word


class PatternSyntaxError(ValueError):
    """Raised on malformed program text; carries the offending line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class PatternRule:
    """A window pattern (centered, * = wildcard) with its output bit."""

    pattern: str
    output: int

    def __post_init__(self):
        if any(c not in "01*" for c in self.pattern):
            raise ValueError(f"bad pattern {self.pattern!r}")
        if len(self.pattern) % 2 == 0 or not self.pattern:
            raise ValueError(f"pattern length must be odd: {self.pattern!r}")
        if self.output not in (0, 1):
            raise ValueError("output must be a bit")

    def matches(self, window_index: int) -> bool:
        width = len(self.pattern)
        for position, c in enumerate(self.pattern):
            if c == "*":
                continue
            if (window_index >> (width - 1 - position)) & 1 != (c == "1"):
                return False
        return True


@dataclass(frozen=True)
class PatternProgram:
    """An ordered, totally covering list of pattern rules."""

    radius: int
    rules: tuple[PatternRule, ...]

    def __post_init__(self):
        width = 2 * self.radius + 1
        for rule in self.rules:
            if len(rule.pattern) != width:
                raise ValueError(
                    f"pattern {rule.pattern!r} does not fit radius {self.radius}"
                )
        uncovered = next(
            (
                k
                for k in range(1 << width)
                if not any(rule.matches(k) for rule in self.rules)
            ),
            None,
        )
        if uncovered is not None:
            raise ValueError(
                f"program does not cover window {index_word(uncovered, width)}"
            )


def parse(text: str) -> PatternProgram:
    """Parse program text; raises PatternSyntaxError with a line number on
    malformed input and ValueError on non-total coverage."""
    radius = None
    rules: list[PatternRule] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("radius"):
            if radius is not None:
                raise PatternSyntaxError(lineno, "duplicate radius directive")
            if rules:
                raise PatternSyntaxError(lineno, "radius must precede the rules")
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise PatternSyntaxError(lineno, f"malformed radius directive {line!r}")
            radius = int(parts[1])
            continue
        if radius is None:
            raise PatternSyntaxError(lineno, "missing radius directive")
        parts = line.split("->")
        if len(parts) != 2:
            raise PatternSyntaxError(lineno, f"expected '<pattern> -> <bit>': {line!r}")
        pattern = parts[0].strip()
        output = parts[1].strip()
        if output not in ("0", "1"):
            raise PatternSyntaxError(lineno, f"output must be a bit, got {output!r}")
        if any(c not in "01*" for c in pattern):
            raise PatternSyntaxError(lineno, f"bad pattern characters in {pattern!r}")
        if len(pattern) != 2 * radius + 1:
            raise PatternSyntaxError(
                lineno,
                f"pattern {pattern!r} has length {len(pattern)}, need {2 * radius + 1}",
            )
        rules.append(PatternRule(pattern, int(output)))
    if radius is None:
        raise PatternSyntaxError(0, "empty program")
    return PatternProgram(radius, tuple(rules))


def compile_program(program: PatternProgram) -> LocalRule:
    """The local rule whose table applies the first matching pattern."""
    width = 2 * program.radius + 1
    table = bytearray(1 << width)
    for k in range(1 << width):
        for rule in program.rules:
            if rule.matches(k):
                table[k] = rule.output
                break
    return LocalRule(program.radius, bytes(table))


def emit(program: PatternProgram) -> str:
    """Canonical text form; parse(emit(p)) compiles to the same table."""
    lines = [f"radius {program.radius}"]
    lines.extend(f"{rule.pattern} -> {rule.output}" for rule in program.rules)
    return "\n".join(lines) + "\n"


_SHIPPED = (
    "eca6-inverse",
    "eca7-inverse",
    "eca23-inverse",
    "eca33-inverse",
    "eca57-inverse",
    "eca77-inverse",
)


def load_program(name: str) -> PatternProgram:
    """Load one of the pattern programs shipped with the package."""
    if name not in _SHIPPED:
        raise KeyError(f"no shipped program named {name!r}")
    text = resources.files("caregular.data").joinpath(f"{name}.rules").read_text()
    return parse(text)


def shipped_programs() -> dict[str, PatternProgram]:
    """All shipped weak-inverse presentations, keyed by name."""
    return {name: load_program(name) for name in _SHIPPED}
