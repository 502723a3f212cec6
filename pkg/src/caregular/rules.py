"""Binary one-dimensional cellular automata as finite rule tables.

A radius-r rule is a table of 2**(2r+1) bits indexed by the neighborhood
window read as a base-2 integer, leftmost cell most significant.  At radius 1
the table integer is the Wolfram rule number; at larger radii rules are
written in hexadecimal, most significant digit first, zero padded to
2**(2r+1)/4 digits.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_CHUNK = 1 << 20


def check_word(word: str) -> str:
    """Validate a finite binary word (possibly empty)."""
    if not isinstance(word, str) or any(c not in "01" for c in word):
        raise ValueError(f"not a binary word: {word!r}")
    return word


def word_index(word: str) -> int:
    """Read a binary word as an integer, leftmost bit most significant."""
    return int(word, 2) if word else 0


def index_word(index: int, length: int) -> str:
    return format(index, f"0{length}b") if length else ""


@dataclass(frozen=True)
class LocalRule:
    """A radius-r binary local rule; ``table[k]`` is the output bit on the
    window whose cells spell k in base 2 (leftmost cell most significant)."""

    radius: int
    table: bytes

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")
        if len(self.table) != 1 << (2 * self.radius + 1):
            raise ValueError(
                f"table length {len(self.table)} does not match radius {self.radius}"
            )
        if any(b not in (0, 1) for b in self.table):
            raise ValueError("table entries must be bits")

    @property
    def window(self) -> int:
        """Window width 2r+1."""
        return 2 * self.radius + 1

    def output(self, window_index: int) -> int:
        return self.table[window_index]

    def table_int(self) -> int:
        return sum(bit << k for k, bit in enumerate(self.table))

    def table_array(self) -> np.ndarray:
        return np.frombuffer(self.table, dtype=np.uint8)

    def __repr__(self):
        return f"LocalRule({format_rule_spec(self)})"


def from_eca_number(number: int) -> LocalRule:
    """Radius-1 rule from its Wolfram number."""
    if not 0 <= number <= 255:
        raise ValueError(f"ECA number out of range: {number}")
    return LocalRule(1, bytes((number >> k) & 1 for k in range(8)))


def eca_number(rule: LocalRule) -> int:
    if rule.radius != 1:
        raise ValueError("only radius-1 rules carry an ECA number")
    return rule.table_int()


def from_hex(radius: int, digits: str) -> LocalRule:
    """Rule from its hexadecimal number, most significant digit first."""
    if radius < 1:
        raise ValueError("hex form needs radius >= 1")
    expected = (1 << (2 * radius + 1)) // 4
    if len(digits) != expected:
        raise ValueError(
            f"radius {radius} needs exactly {expected} hex digits, got {len(digits)}"
        )
    try:
        value = int(digits, 16)
    except ValueError:
        raise ValueError(f"not a hexadecimal number: {digits!r}") from None
    return LocalRule(radius, bytes((value >> k) & 1 for k in range(1 << (2 * radius + 1))))


def to_hex(rule: LocalRule) -> str:
    if rule.radius < 1:
        raise ValueError("hex form needs radius >= 1")
    width = (1 << (2 * rule.radius + 1)) // 4
    return format(rule.table_int(), f"0{width}X")


def identity_rule(radius: int = 0) -> LocalRule:
    """The identity map (output = center cell) at the given radius."""
    return pad_radius(LocalRule(0, bytes((0, 1))), radius)


def parse_rule_spec(spec: str) -> LocalRule:
    """Parse ``eca:<n>``, ``hex:r<r>:<digits>``, or a bare decimal ECA number."""
    if spec.startswith("eca:"):
        return from_eca_number(int(spec[4:]))
    if spec.startswith("hex:"):
        parts = spec.split(":")
        if len(parts) != 3 or not parts[1].startswith("r"):
            raise ValueError(f"malformed rule spec: {spec!r}")
        return from_hex(int(parts[1][1:]), parts[2].upper())
    if spec.isdigit():
        return from_eca_number(int(spec))
    raise ValueError(f"malformed rule spec: {spec!r}")


def format_rule_spec(rule: LocalRule) -> str:
    if rule.radius == 0:
        rule = pad_radius(rule, 1)
    if rule.radius == 1:
        return f"eca:{rule.table_int()}"
    return f"hex:r{rule.radius}:{to_hex(rule)}"


def apply_word(rule: LocalRule, word: str) -> str:
    """Slide the rule over a finite word; the output is 2r shorter."""
    check_word(word)
    w = rule.window
    if len(word) < w:
        raise ValueError(f"word of length {len(word)} is shorter than the window {w}")
    mask = (1 << w) - 1
    out = []
    k = word_index(word[: w - 1])
    for c in word[w - 1 :]:
        k = ((k << 1) | (c == "1")) & mask
        out.append("01"[rule.table[k]])
    return "".join(out)


def apply_periodic(rule: LocalRule, word: str) -> str:
    """Image of the periodic configuration ``...www...`` as the aligned period
    word: output[i] depends on word[i-r .. i+r] taken cyclically."""
    check_word(word)
    if not word:
        raise ValueError("period word must be nonempty")
    n = len(word)
    r = rule.radius
    out = []
    for i in range(n):
        k = 0
        for d in range(-r, r + 1):
            k = (k << 1) | (word[(i + d) % n] == "1")
        out.append("01"[rule.table[k]])
    return "".join(out)


def cyclic_window(word: str, center: int, radius: int) -> str:
    """The (2r+1)-window of ``...www...`` centered at position ``center``."""
    n = len(word)
    return "".join(word[(center + d) % n] for d in range(-radius, radius + 1))


def compose(f: LocalRule, g: LocalRule, shift: int = 0) -> LocalRule:
    """The rule computing f(g(sigma^shift(x))); sigma is the left shift
    sigma(x)_i = x_{i+1}.  Result radius is r_f + r_g + |shift|."""
    radius = f.radius + g.radius + abs(shift)
    win = 2 * radius + 1
    length = 1 << win
    gw = g.window
    gmask = (1 << gw) - 1
    base = abs(shift) + shift  # leftmost cell read by the first inner window
    ftab = f.table_array()
    gtab = g.table_array()
    out = np.empty(length, dtype=np.uint8)
    for lo in range(0, length, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, length), dtype=np.int64)
        mid = np.zeros(len(idx), dtype=np.int64)
        for q in range(f.window):
            sub = (idx >> (win - (base + q) - gw)) & gmask
            mid = (mid << 1) | gtab[sub]
        out[lo : lo + len(idx)] = ftab[mid]
    return LocalRule(radius, out.tobytes())


def pad_radius(rule: LocalRule, radius: int) -> LocalRule:
    """The same map presented at a larger radius (added cells are ignored)."""
    if radius < rule.radius:
        raise ValueError(f"cannot pad radius {rule.radius} down to {radius}")
    if radius == rule.radius:
        return rule
    win = 2 * radius + 1
    length = 1 << win
    shift = radius - rule.radius
    mask = (1 << rule.window) - 1
    tab = rule.table_array()
    out = np.empty(length, dtype=np.uint8)
    for lo in range(0, length, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, length), dtype=np.int64)
        out[lo : lo + len(idx)] = tab[(idx >> shift) & mask]
    return LocalRule(radius, out.tobytes())


def equals(f: LocalRule, g: LocalRule) -> bool:
    """Equality as maps on the full shift: equal tables after padding to a
    common radius.  Rules are never reduced, so don't-care bits count."""
    radius = max(f.radius, g.radius)
    return pad_radius(f, radius).table == pad_radius(g, radius).table


def rotations(word: str):
    return (word[k:] + word[:k] for k in range(len(word)))


def canonical_rotation(word: str) -> str:
    return min(rotations(word))


def primitive_root(word: str) -> str:
    """The shortest word whose repetition gives ``word``."""
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


def is_primitive(word: str) -> bool:
    return primitive_root(word) == word


@dataclass(frozen=True)
class PeriodicPoint:
    """The configuration ``...uuu...`` given by a nonempty period word."""

    period_word: str

    def __post_init__(self):
        check_word(self.period_word)
        if not self.period_word:
            raise ValueError("period word must be nonempty")

    @property
    def canonical_form(self) -> str:
        """Lexicographically least rotation of the period word."""
        return canonical_rotation(self.period_word)

    @property
    def orbit_word(self) -> str:
        """Canonical rotation of the primitive root: orbit identifier."""
        return canonical_rotation(primitive_root(self.period_word))

    def same_orbit(self, other: "PeriodicPoint") -> bool:
        return self.orbit_word == other.orbit_word


@dataclass(frozen=True)
class EventuallyPeriodicPoint:
    """The configuration ``...uuu.w vvv...`` with w occupying [0, |w|)."""

    left: str
    middle: str
    right: str

    def __post_init__(self):
        for part in (self.left, self.middle, self.right):
            check_word(part)
        if not self.left or not self.right:
            raise ValueError("tail period words must be nonempty")

    def bit(self, i: int) -> str:
        if i < 0:
            return self.left[i % len(self.left)]
        if i < len(self.middle):
            return self.middle[i]
        return self.right[(i - len(self.middle)) % len(self.right)]

    def expand(self, lo: int, hi: int) -> str:
        """The bits at positions [lo, hi)."""
        return "".join(self.bit(i) for i in range(lo, hi))
