"""Deciding Von Neumann regularity of binary CA: weak-inverse checks,
periodic-point conditions, forcing, and bounded-radius inverse search.

A rule f is regular iff it has a weak inverse g with f∘g∘f = f, iff the
restriction f : full shift -> image(f) has a right inverse.  Non-regularity
is semidecided through periodic points of the image; regularity through an
explicit inverse search.  All searches here are bounded and deterministic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

import networkx as nx

from . import sofic
from .rules import (
    EventuallyPeriodicPoint,
    LocalRule,
    apply_periodic,
    apply_word,
    check_word,
    compose,
    cyclic_window,
    equals,
    format_rule_spec,
    word_index,
    index_word,
)

_BIJECTIVE_RADIUS_CAP = 8


# ---------------------------------------------------------------------------
# certificates and verdicts


@dataclass(frozen=True)
class ImageNotSft:
    """The image subshift is proper sofic, so no weak inverse exists."""

    rule: LocalRule

    def to_jsonable(self) -> dict:
        return {"kind": "image_not_sft", "rule": format_rule_spec(self.rule)}


@dataclass(frozen=True)
class WeakPpcFailure:
    """A periodic point of the image with no preimage of the same period."""

    rule: LocalRule
    word: str

    def to_jsonable(self) -> dict:
        return {
            "kind": "weak_ppc_failure",
            "rule": format_rule_spec(self.rule),
            "word": self.word,
        }


@dataclass(frozen=True)
class GAssignment:
    """A choice of same-period preimage for each canonical periodic point of
    the image (exact alignment: applying the rule to a chosen word yields the
    point word itself, not a rotation)."""

    choices: tuple[tuple[str, str], ...]

    def get(self, word: str) -> str:
        for point, preimage in self.choices:
            if point == word:
                return preimage
        raise KeyError(word)

    def to_jsonable(self) -> dict:
        return {point: preimage for point, preimage in self.choices}


@dataclass(frozen=True)
class SppFailure:
    """Every candidate periodic-preimage assignment is refuted by some
    eventually periodic point without a tail-compatible preimage."""

    rule: LocalRule
    period: int
    lmax: int
    eliminated: tuple[tuple[GAssignment, tuple[str, str, str]], ...]
    missing_preimage: Optional[str] = None

    def to_jsonable(self) -> dict:
        return {
            "kind": "spp_failure",
            "rule": format_rule_spec(self.rule),
            "period": self.period,
            "lmax": self.lmax,
            "missing_preimage": self.missing_preimage,
            "eliminated": [
                {
                    "assignment": assignment.to_jsonable(),
                    "triple": {"left": u, "middle": w, "right": v},
                }
                for assignment, (u, w, v) in self.eliminated
            ],
        }


@dataclass(frozen=True)
class SppResult:
    rule: LocalRule
    period: int
    lmax: int
    points: tuple[str, ...]
    survivors: tuple[GAssignment, ...]
    eliminated: tuple[tuple[GAssignment, tuple[str, str, str]], ...]
    missing_preimage: Optional[str] = None

    @property
    def certificate(self) -> Optional[SppFailure]:
        if self.survivors:
            return None
        return SppFailure(
            self.rule,
            self.period,
            self.lmax,
            self.eliminated,
            self.missing_preimage,
        )

    def to_jsonable(self) -> dict:
        return {
            "rule": format_rule_spec(self.rule),
            "period": self.period,
            "lmax": self.lmax,
            "points": list(self.points),
            "survivors": [g.to_jsonable() for g in self.survivors],
            "eliminated": [
                {
                    "assignment": g.to_jsonable(),
                    "triple": {"left": u, "middle": w, "right": v},
                }
                for g, (u, w, v) in self.eliminated
            ],
            "missing_preimage": self.missing_preimage,
        }


@dataclass(frozen=True)
class ForcedBit:
    """A bit pinned by a periodic point: every same-period preimage of the
    point ...word... carries ``bit`` at ``position``."""

    word: str
    position: int
    bit: int

    def to_jsonable(self) -> dict:
        return {"word": self.word, "position": self.position, "bit": self.bit}


@dataclass(frozen=True)
class ForcingContradiction:
    """Two periodic points force different outputs on the same window, so no
    weak inverse of this radius exists."""

    rule: LocalRule
    radius: int
    window: str
    first: ForcedBit
    second: ForcedBit

    def to_jsonable(self) -> dict:
        return {
            "kind": "forcing_contradiction",
            "rule": format_rule_spec(self.rule),
            "radius": self.radius,
            "window": self.window,
            "first": self.first.to_jsonable(),
            "second": self.second.to_jsonable(),
        }


@dataclass(frozen=True)
class SurjectiveNotInjective:
    """A surjective rule with two distinct configurations sharing an image
    cannot be regular."""

    rule: LocalRule
    first: EventuallyPeriodicPoint
    second: EventuallyPeriodicPoint

    def to_jsonable(self) -> dict:
        return {
            "kind": "surjective_not_injective",
            "rule": format_rule_spec(self.rule),
            "first": _epp_jsonable(self.first),
            "second": _epp_jsonable(self.second),
        }


def _epp_jsonable(point: EventuallyPeriodicPoint) -> dict:
    return {"left": point.left, "middle": point.middle, "right": point.right}


Certificate = Union[
    ImageNotSft, WeakPpcFailure, SppFailure, ForcingContradiction, SurjectiveNotInjective
]


@dataclass(frozen=True)
class PartialLocalRule:
    """A rule table over {0, 1, unknown}; ``bits[k]`` is None while window k
    is unforced."""

    radius: int
    bits: tuple[Optional[int], ...]

    def __post_init__(self):
        if len(self.bits) != 1 << (2 * self.radius + 1):
            raise ValueError("table length does not match radius")

    @property
    def known_count(self) -> int:
        return sum(b is not None for b in self.bits)

    def to_jsonable(self) -> dict:
        width = 2 * self.radius + 1
        return {
            "radius": self.radius,
            "known": {
                index_word(k, width): b for k, b in enumerate(self.bits) if b is not None
            },
        }


@dataclass(frozen=True)
class Regular:
    witness: LocalRule

    def to_jsonable(self) -> dict:
        return {"verdict": "regular", "witness": format_rule_spec(self.witness)}


@dataclass(frozen=True)
class NonRegular:
    certificate: Certificate

    def to_jsonable(self) -> dict:
        return {"verdict": "non_regular", "certificate": self.certificate.to_jsonable()}


@dataclass(frozen=True)
class Unknown:
    pmax: int
    lmax: int
    rmax: int

    def to_jsonable(self) -> dict:
        return {
            "verdict": "unknown",
            "bounds": {"pmax": self.pmax, "lmax": self.lmax, "rmax": self.rmax},
        }


Verdict = Union[Regular, NonRegular, Unknown]


# ---------------------------------------------------------------------------
# weak inverses (fgf = f)


def verify_weak_inverse(f: LocalRule, g: LocalRule) -> bool:
    """Table route: f∘g∘f equals f as a map on the full shift."""
    return equals(compose(f, compose(g, f)), f)


def verify_weak_inverse_on_image(f: LocalRule, g: LocalRule) -> bool:
    """Image route: on every image word of length 2(r_f+r_g)+1, applying g
    then f reproduces the center bit.  Agrees with the table route because
    image words of that length are exactly the windows f∘g reads on image
    configurations."""
    shift = sofic.image(f)
    length = 2 * (f.radius + g.radius) + 1
    center = f.radius + g.radius
    for word in shift.words_of_length(length):
        if apply_word(f, apply_word(g, word)) != word[center]:
            return False
    return True


def make_generalized_inverse(f: LocalRule, g: LocalRule) -> LocalRule:
    """From a weak inverse g (fgf = f), the rule c = g∘f∘g satisfies both
    f∘c∘f = f and c∘f∘c = c."""
    if not verify_weak_inverse(f, g):
        raise ValueError("g is not a weak inverse of f")
    return compose(g, compose(f, g))


# ---------------------------------------------------------------------------
# preimage de Bruijn machinery


class _PreimageStepper:
    """Walks of candidate preimages under a rule: states are 2r-cell windows,
    a step appends one cell and must realize a required output bit."""

    def __init__(self, rule: LocalRule):
        self.rule = rule
        self.radius = rule.radius
        self.n = 1 << (2 * rule.radius)
        self.mask = self.n - 1
        succ = ([0] * self.n, [0] * self.n)
        for s in range(self.n):
            for b in (0, 1):
                window = (s << 1) | b
                succ[rule.table[window]][s] |= 1 << (window & self.mask)
        self.succ = succ
        if self.n <= 8:
            self.lut = tuple(
                tuple(self._step_scan(m, c) for m in range(1 << self.n)) for c in (0, 1)
            )
        else:
            self.lut = None

    def _step_scan(self, states: int, out_bit: int) -> int:
        result = 0
        succ = self.succ[out_bit]
        k = states
        while k:
            low = k & -k
            result |= succ[low.bit_length() - 1]
            k ^= low
        return result

    def step(self, states: int, out_bit: int) -> int:
        if self.lut is not None:
            return self.lut[out_bit][states]
        return self._step_scan(states, out_bit)

    def edges(self, state: int, out_bit: int):
        """(cell, successor) pairs realizing the output bit."""
        for b in (0, 1):
            window = (state << 1) | b
            if self.rule.table[window] == out_bit:
                yield b, window & self.mask

    def cyclic_state(self, word: str, start: int) -> int:
        """The 2r-cell window of ...word... beginning at position start."""
        s = 0
        n = len(word)
        for d in range(2 * self.radius):
            s = (s << 1) | (word[(start + d) % n] == "1")
        return s


@lru_cache(maxsize=128)
def _stepper(rule: LocalRule) -> _PreimageStepper:
    return _PreimageStepper(rule)


def _relation_compose(first: tuple[int, ...], second: tuple[int, ...]) -> tuple[int, ...]:
    """(first then second)[s] = union of second[t] over t in first[s]."""
    out = []
    for row in first:
        acc = 0
        k = row
        while k:
            low = k & -k
            acc |= second[low.bit_length() - 1]
            k ^= low
        out.append(acc)
    return tuple(out)


def _cyclic_analysis(stepper: _PreimageStepper, word: str):
    """Same-period preimages of the periodic point ...word... as closed walks.

    Returns (exists, forced) where forced[j] is the bit shared by every
    same-period preimage at position j, or None when they disagree; forced
    is None when no preimage exists.
    """
    p = len(word)
    n = stepper.n
    identity = tuple(1 << s for s in range(n))
    constraint = [word[i] == "1" for i in range(p)]
    steps = [
        tuple(stepper.succ[constraint[i]][s] for s in range(n)) for i in range(p)
    ]
    prefix = [identity]
    for i in range(p):
        prefix.append(_relation_compose(prefix[-1], steps[i]))
    suffix = [identity] * (p + 1)
    for i in range(p - 1, -1, -1):
        suffix[i] = _relation_compose(steps[i], suffix[i + 1])
    if not any((prefix[p][s] >> s) & 1 for s in range(n)):
        return False, None
    forced: list[Optional[int]] = [None] * p
    for i in range(p):
        rows = prefix[i]
        col = [0] * n
        for z in range(n):
            k = rows[z]
            while k:
                low = k & -k
                col[low.bit_length() - 1] |= 1 << z
                k ^= low
        seen_bits = 0
        for s in range(n):
            if not col[s]:
                continue
            for b, t in stepper.edges(s, constraint[i]):
                if suffix[i + 1][t] & col[s]:
                    seen_bits |= 1 << b
                    if seen_bits == 3:
                        break
            if seen_bits == 3:
                break
        if seen_bits == 0:
            raise RuntimeError("closed walk exists but a step has no usable edge")
        position = (i + stepper.radius) % p
        if seen_bits == 1:
            forced[position] = 0
        elif seen_bits == 2:
            forced[position] = 1
    return True, forced


def same_period_preimages(f: LocalRule, word: str) -> list[str]:
    """All words y with |y| = |word| and apply_periodic(f, y) = word, i.e.
    the same-period preimages of ...word... in exact alignment, sorted."""
    check_word(word)
    if not word:
        raise ValueError("period word must be nonempty")
    stepper = _stepper(f)
    p = len(word)
    n = stepper.n
    identity = tuple(1 << s for s in range(n))
    constraint = [word[i] == "1" for i in range(p)]
    steps = [
        tuple(stepper.succ[constraint[i]][s] for s in range(n)) for i in range(p)
    ]
    suffix = [identity] * (p + 1)
    for i in range(p - 1, -1, -1):
        suffix[i] = _relation_compose(steps[i], suffix[i + 1])
    results = []
    radius = stepper.radius

    def walk(state: int, i: int, bits: list[int], start: int):
        if i == p:
            if state == start:
                y = [0] * p
                for k, b in enumerate(bits):
                    y[(k + radius) % p] = b
                results.append("".join("01"[b] for b in y))
            return
        for b, t in stepper.edges(state, constraint[i]):
            if (suffix[i + 1][t] >> start) & 1:
                walk(t, i + 1, bits + [b], start)

    for start in range(n):
        if (suffix[0][start] >> start) & 1:
            walk(start, 0, [], start)
    return sorted(results)


def weak_ppc(f: LocalRule, pmax: int) -> Optional[WeakPpcFailure]:
    """Check that every periodic point of the image with period at most pmax
    has a same-period preimage; None means the condition holds."""
    if pmax < 1:
        raise ValueError("pmax must be positive")
    shift = sofic.image(f)
    stepper = _stepper(f)
    for point in sofic.periodic_points(shift, pmax):
        exists, _ = _cyclic_analysis(stepper, point.period_word)
        if not exists:
            return WeakPpcFailure(f, point.period_word)
    return None


# ---------------------------------------------------------------------------
# asymptotic preimages of eventually periodic points


def _asymptotic_search(
    stepper: _PreimageStepper, u: str, w: str, v: str, U: str, V: str
) -> bool:
    """Phase-annotated reachability in the preimage graph: seed with the
    U-cycle states in u's phase, consume the outputs of w, then of repeated
    v, and accept on hitting the V-cycle at a phase-0 block boundary.  The
    product of state set and phase is finite, so no length bound is needed.
    """
    pu, pv, r = len(u), len(v), stepper.radius
    # closure of states reachable at each phase of the left u-region
    phase_sets = [0] * pu
    for j in range(pu):
        phase_sets[j] |= 1 << stepper.cyclic_state(U, j - r)
    changed = True
    while changed:
        changed = False
        for j in range(pu):
            nxt = stepper.step(phase_sets[j], u[j] == "1")
            target = (j + 1) % pu
            if nxt & ~phase_sets[target]:
                phase_sets[target] |= nxt
                changed = True
    states = phase_sets[0]
    for c in w:
        if not states:
            return False
        states = stepper.step(states, c == "1")
    absorb = 1 << stepper.cyclic_state(V, 0)
    seen = set()
    offset = 0  # position minus |w|
    while states:
        if offset >= r and (offset - r) % pv == 0:
            if states & absorb:
                return True
            key = ((offset - r) % pv, states)
            if key in seen:
                return False
            seen.add(key)
        states = stepper.step(states, v[offset % pv] == "1")
        offset += 1
    return False


def asymptotic_preimage_exists(
    f: LocalRule, point: EventuallyPeriodicPoint, U: str, V: str
) -> bool:
    """Whether ...uuu.w vvv... has an f-preimage left-asymptotic to ...UUU
    and right-asymptotic to VVV... with block boundaries aligned to the
    point's own periods (the tail block lengths are multiples of |u|, |v|)."""
    u, w, v = point.left, point.middle, point.right
    for name, tail, pre in (("U", U, u), ("V", V, v)):
        check_word(tail)
        if len(tail) != len(pre):
            raise ValueError(f"{name} must have the same length as the point period")
    if apply_periodic(f, U) != u:
        raise ValueError("U is not an aligned same-period preimage of the left tail")
    if apply_periodic(f, V) != v:
        raise ValueError("V is not an aligned same-period preimage of the right tail")
    if not sofic.image(f).contains_eventually_periodic(u, w, v):
        raise ValueError("the point does not belong to the image subshift")
    return _asymptotic_search(_stepper(f), u, w, v, U, V)


def _spp_triples(shift: sofic.SoficShift, points: list[str], lmax: int):
    """All (u, w, v) with the eventually periodic point in the subshift and
    |w| <= lmax, ordered by (|w|, w, u, v)."""
    triples = []
    for length in range(lmax + 1):
        for k in range(1 << length):
            w = index_word(k, length)
            for u in points:
                for v in points:
                    if shift.contains_eventually_periodic(u, w, v):
                        triples.append((u, w, v))
    return triples


def spp_check(f: LocalRule, period: int, lmax: int) -> SppResult:
    """Strong periodic point condition at the given period, with transition
    words bounded by lmax.

    Enumerates every consistent choice of same-period preimages on the
    canonical periodic points of the image and eliminates a choice as soon
    as some eventually periodic point has no preimage asymptotic to the
    chosen tails.  An empty survivor set certifies non-regularity; a
    nonempty one is inconclusive (the bound lmax may hide a failure).
    """
    if period < 1:
        raise ValueError("period must be positive")
    if lmax < 0:
        raise ValueError("lmax must be nonnegative")
    shift = sofic.image(f)
    stepper = _stepper(f)
    points = [pt.period_word for pt in sofic.periodic_points(shift, period)]
    candidates = {u: same_period_preimages(f, u) for u in points}
    for u in points:
        if not candidates[u]:
            return SppResult(f, period, lmax, tuple(points), (), (), missing_preimage=u)
    triples = _spp_triples(shift, points, lmax)
    cache: dict[tuple, bool] = {}

    def tail_ok(u: str, w: str, v: str, U: str, V: str) -> bool:
        key = (u, w, v, U, V)
        if key not in cache:
            cache[key] = _asymptotic_search(stepper, u, w, v, U, V)
        return cache[key]

    survivors = []
    eliminated = []
    for combo in itertools.product(*(candidates[u] for u in points)):
        assignment = GAssignment(tuple(zip(points, combo)))
        chosen = dict(assignment.choices)
        failure = None
        for u, w, v in triples:
            if not tail_ok(u, w, v, chosen[u], chosen[v]):
                failure = (u, w, v)
                break
        if failure is None:
            survivors.append(assignment)
        else:
            eliminated.append((assignment, failure))
    return SppResult(f, period, lmax, tuple(points), tuple(survivors), tuple(eliminated))


# ---------------------------------------------------------------------------
# forcing and inverse search


def force_partial_rule(
    f: LocalRule, radius: int, pmax: int
) -> Union[PartialLocalRule, ForcingContradiction, WeakPpcFailure]:
    """Pin down bits of any radius-``radius`` right inverse of f.

    For every periodic word of the image with length up to pmax, positions
    where all same-period preimages agree force the inverse's output on the
    corresponding window of the point.  Conflicting forcings on one window
    refute every weak inverse of this radius.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if pmax < 1:
        raise ValueError("pmax must be positive")
    shift = sofic.image(f)
    stepper = _stepper(f)
    table: list[Optional[int]] = [None] * (1 << (2 * radius + 1))
    provenance: dict[int, ForcedBit] = {}
    for length in range(1, pmax + 1):
        for word in sofic.periodic_words(shift, length):
            exists, forced = _cyclic_analysis(stepper, word)
            if not exists:
                return WeakPpcFailure(f, word)
            for position in range(length):
                bit = forced[position]
                if bit is None:
                    continue
                window = cyclic_window(word, position, radius)
                index = word_index(window)
                if table[index] is None:
                    table[index] = bit
                    provenance[index] = ForcedBit(word, position, bit)
                elif table[index] != bit:
                    return ForcingContradiction(
                        f,
                        radius,
                        window,
                        provenance[index],
                        ForcedBit(word, position, bit),
                    )
    return PartialLocalRule(radius, tuple(table))


def search_inverse(
    f: LocalRule,
    radius: int,
    pmax: int,
    all_solutions: bool = False,
):
    """Backtracking completion of the forced partial rule to a weak inverse
    of the given radius.

    Don't-care windows (never occurring in the image language) default to 0.
    Assignments are pruned as soon as a fully determined image word of
    length 2(radius + r_f) + 1 fails to reproduce its center bit, which on
    completion is exactly the right-inverse condition.  Returns the first
    (lexicographically least) inverse, or every inverse when
    ``all_solutions`` is set; a ForcingContradiction or WeakPpcFailure from
    the seeding phase is returned as such, and None means the search space
    is exhausted.
    """
    seed = force_partial_rule(f, radius, pmax)
    if not isinstance(seed, PartialLocalRule):
        return seed
    shift = sofic.image(f)
    width = 2 * radius + 1
    table: list[Optional[int]] = list(seed.bits)
    occurring = [word_index(w) for w in shift.words_of_length(width)]
    occurring_set = set(occurring)
    for k in range(len(table)):
        if k not in occurring_set and table[k] is None:
            table[k] = 0
    check_length = 2 * (radius + f.radius) + 1
    constraints = []
    for word in shift.words_of_length(check_length):
        windows = [word_index(word[q : q + width]) for q in range(f.window)]
        target = word[radius + f.radius] == "1"
        constraints.append((windows, target))
    touching: dict[int, list[int]] = {}
    for ci, (windows, _) in enumerate(constraints):
        for k in windows:
            touching.setdefault(k, []).append(ci)

    def constraint_state(ci: int) -> Optional[bool]:
        """True/False once all windows are assigned, None otherwise."""
        windows, target = constraints[ci]
        mid = 0
        for k in windows:
            b = table[k]
            if b is None:
                return None
            mid = (mid << 1) | b
        return bool(f.table[mid]) == target

    for ci in range(len(constraints)):
        if constraint_state(ci) is False:
            return () if all_solutions else None
    unassigned = sorted(k for k in occurring_set if table[k] is None)
    solutions: list[LocalRule] = []

    def snapshot() -> LocalRule:
        return LocalRule(radius, bytes(0 if b is None else b for b in table))

    def backtrack(i: int) -> bool:
        if i == len(unassigned):
            solutions.append(snapshot())
            return not all_solutions
        k = unassigned[i]
        for bit in (0, 1):
            table[k] = bit
            if all(constraint_state(ci) is not False for ci in touching.get(k, ())):
                if backtrack(i + 1):
                    return True
            table[k] = None
        return False

    backtrack(0)
    if all_solutions:
        return tuple(solutions)
    if not solutions:
        return None
    rule = solutions[0]
    if not verify_weak_inverse(f, rule):
        raise RuntimeError("search produced a rule that is not a weak inverse")
    return rule


# ---------------------------------------------------------------------------
# injectivity and surjectivity


def is_surjective(f: LocalRule) -> bool:
    return sofic.is_full_shift(sofic.image(f))


def _pair_graph(f: LocalRule):
    """Synchronized de Bruijn pair graph: nodes are pairs of 2r-cell windows,
    edges append one cell to each side with equal output bits."""
    n = 1 << (2 * f.radius)
    mask = n - 1
    graph = nx.DiGraph()
    graph.add_nodes_from(range(n * n))
    labels: dict[tuple[int, int], tuple[int, int]] = {}
    for s in range(n):
        for t in range(n):
            node = s * n + t
            for a in (0, 1):
                for b in (0, 1):
                    if f.table[(s << 1) | a] != f.table[(t << 1) | b]:
                        continue
                    succ = ((((s << 1) | a) & mask) * n) + (((t << 1) | b) & mask)
                    if (node, succ) not in labels:
                        labels[node, succ] = (a, b)
                        graph.add_edge(node, succ)
    return graph, labels, n


def _cycle_through(graph, node) -> list[tuple[int, int]]:
    """Edges of some cycle starting and ending at ``node`` (which must lie
    in a nontrivial strongly connected component or carry a self-loop)."""
    if graph.has_edge(node, node):
        return [(node, node)]
    component = next(c for c in nx.strongly_connected_components(graph) if node in c)
    sub = graph.subgraph(component)
    successor = min(sub.successors(node))
    path = [node] + nx.shortest_path(sub, successor, node)
    return list(zip(path, path[1:]))


def _edge_words(labels, edges) -> tuple[str, str]:
    first = "".join("01"[labels[e][0]] for e in edges)
    second = "".join("01"[labels[e][1]] for e in edges)
    return first, second


def injectivity_witness(
    f: LocalRule,
) -> Optional[tuple[EventuallyPeriodicPoint, EventuallyPeriodicPoint]]:
    """None when f is injective; otherwise two distinct eventually periodic
    configurations with equal images, re-checked on finite expansions.

    A pair of distinct configurations with equal images exists iff some
    off-diagonal node of the pair graph lies on a bi-infinite path, i.e. is
    reachable from a cycle and reaches a cycle.
    """
    graph, labels, n = _pair_graph(f)
    cyclic = {
        q
        for comp in nx.strongly_connected_components(graph)
        for q in comp
        if len(comp) > 1 or graph.has_edge(q, q)
    }
    forward = set(cyclic)
    for q in cyclic:
        forward.update(nx.descendants(graph, q))
    reverse = graph.reverse(copy=False)
    backward = set(cyclic)
    for q in cyclic:
        backward.update(nx.descendants(reverse, q))
    offenders = sorted(q for q in forward & backward if q // n != q % n)
    if not offenders:
        return None
    node = offenders[0]
    entry = min((nx.ancestors(graph, node) | {node}) & cyclic)
    exit_ = min((nx.descendants(graph, node) | {node}) & cyclic)
    path_in = nx.shortest_path(graph, entry, node)
    path_out = nx.shortest_path(graph, node, exit_)
    middle_edges = list(zip(path_in, path_in[1:])) + list(zip(path_out, path_out[1:]))
    left_a, left_b = _edge_words(labels, _cycle_through(graph, entry))
    right_a, right_b = _edge_words(labels, _cycle_through(graph, exit_))
    middle_a, middle_b = _edge_words(labels, middle_edges)
    first = EventuallyPeriodicPoint(left_a, middle_a, right_a)
    second = EventuallyPeriodicPoint(left_b, middle_b, right_b)
    _check_equal_images(f, first, second)
    return first, second


def _check_equal_images(
    f: LocalRule, first: EventuallyPeriodicPoint, second: EventuallyPeriodicPoint
):
    """Both points are eventually periodic with the same tail periods, so
    agreement of the images over one extra period on each side of the
    transient zone pins them everywhere."""
    m = max(len(first.middle), len(second.middle))
    lo = -(2 * len(first.left) + m + 2 * f.radius + 2)
    hi = m + 2 * len(first.right) + m + 2 * f.radius + 2
    expansion_a = first.expand(lo, hi)
    expansion_b = second.expand(lo, hi)
    if expansion_a == expansion_b:
        raise RuntimeError("witness construction produced equal configurations")
    if apply_word(f, expansion_a) != apply_word(f, expansion_b):
        raise RuntimeError("witness construction produced unequal images")


def is_injective(f: LocalRule) -> bool:
    return injectivity_witness(f) is None


# ---------------------------------------------------------------------------
# the classification ladder


def classify(f: LocalRule, pmax: int = 6, lmax: int = 8, rmax: int = 2) -> Verdict:
    """First conclusive step wins: (1) surjective rules are regular iff
    injective; (2) a non-SFT image refutes regularity; (3) weak periodic
    point condition; (4) strong periodic point condition for p <= pmax;
    (5) inverse search for radius <= rmax; otherwise Unknown."""
    if pmax < 1 or lmax < 1 or rmax < 0:
        raise ValueError("bounds must be positive")
    if is_surjective(f):
        witness = injectivity_witness(f)
        if witness is not None:
            return NonRegular(SurjectiveNotInjective(f, witness[0], witness[1]))
        # Bijective, hence reversible, hence regular; the exact inverse is
        # found by deepening the search radius (guaranteed to exist).
        for radius in range(_BIJECTIVE_RADIUS_CAP + 1):
            found = search_inverse(f, radius, pmax)
            if isinstance(found, LocalRule):
                return Regular(found)
        return Unknown(pmax, lmax, rmax)
    shift = sofic.image(f)
    if not sofic.is_sft(shift):
        return NonRegular(ImageNotSft(f))
    failure = weak_ppc(f, pmax)
    if failure is not None:
        return NonRegular(failure)
    for period in range(1, pmax + 1):
        result = spp_check(f, period, lmax)
        certificate = result.certificate
        if certificate is not None:
            return NonRegular(certificate)
    for radius in range(rmax + 1):
        found = search_inverse(f, radius, pmax)
        if isinstance(found, LocalRule):
            return Regular(found)
        if isinstance(found, WeakPpcFailure):
            return NonRegular(found)
    return Unknown(pmax, lmax, rmax)
