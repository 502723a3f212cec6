"""Total deterministic finite automata over the binary alphabet.

Minimal DFAs are produced in a canonical breadth-first state numbering, so
two automata recognize the same language iff they compare equal.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable


@dataclass(frozen=True)
class Dfa:
    """States are 0..n-1; ``transitions[q]`` is (target on 0, target on 1)."""

    transitions: tuple[tuple[int, int], ...]
    initial: int
    accepting: frozenset[int]

    def __post_init__(self):
        n = len(self.transitions)
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        if any(not 0 <= t < n for pair in self.transitions for t in pair):
            raise ValueError("transition target out of range")
        if any(not 0 <= q < n for q in self.accepting):
            raise ValueError("accepting state out of range")

    @property
    def n_states(self) -> int:
        return len(self.transitions)

    def step(self, state: int, bit: str) -> int:
        return self.transitions[state][bit == "1"]

    def run(self, state: int, word: str) -> int:
        for c in word:
            state = self.transitions[state][c == "1"]
        return state

    def accepts(self, word: str) -> bool:
        return self.run(self.initial, word) in self.accepting

    def to_dict(self) -> dict:
        return {
            "states": self.n_states,
            "initial": self.initial,
            "accepting": sorted(self.accepting),
            "transitions": [list(pair) for pair in self.transitions],
        }

    def to_text(self) -> str:
        lines = [f"states {self.n_states}", f"initial {self.initial}"]
        lines.append("accepting " + " ".join(str(q) for q in sorted(self.accepting)))
        for q, (t0, t1) in enumerate(self.transitions):
            lines.append(f"trans {q} 0 {t0}")
            lines.append(f"trans {q} 1 {t1}")
        return "\n".join(lines) + "\n"


def dfa_from_text(text: str) -> Dfa:
    n = None
    initial = None
    accepting: set[int] = set()
    trans: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "states":
                n = int(parts[1])
            elif parts[0] == "initial":
                initial = int(parts[1])
            elif parts[0] == "accepting":
                accepting = {int(p) for p in parts[1:]}
            elif parts[0] == "trans":
                trans[int(parts[1]), int(parts[2])] = int(parts[3])
            else:
                raise ValueError(f"unknown directive {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"bad automaton line {lineno}: {raw!r} ({exc})") from None
    if n is None or initial is None:
        raise ValueError("automaton text must declare states and initial")
    transitions = tuple((trans[q, 0], trans[q, 1]) for q in range(n))
    return Dfa(transitions, initial, frozenset(accepting))


def build_dfa(
    start: Hashable,
    step: Callable[[Hashable, int], Hashable],
    accept: Callable[[Hashable], bool],
) -> Dfa:
    """Materialize the deterministic automaton reachable from ``start``.

    Works for subset constructions and products alike: states may be any
    hashable keys.  Discovery order is breadth first, bit 0 before bit 1.
    """
    index = {start: 0}
    order = [start]
    transitions = []
    queue = deque([start])
    while queue:
        key = queue.popleft()
        row = []
        for bit in (0, 1):
            nxt = step(key, bit)
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            row.append(index[nxt])
        transitions.append(tuple(row))
    accepting = frozenset(i for i, key in enumerate(order) if accept(key))
    return Dfa(tuple(transitions), 0, accepting)


def _reachable(dfa: Dfa) -> list[int]:
    seen = [False] * dfa.n_states
    seen[dfa.initial] = True
    queue = deque([dfa.initial])
    order = [dfa.initial]
    while queue:
        q = queue.popleft()
        for t in dfa.transitions[q]:
            if not seen[t]:
                seen[t] = True
                order.append(t)
                queue.append(t)
    return order


def minimize(dfa: Dfa) -> Dfa:
    """Minimal DFA of the same language, states numbered in BFS order from
    the initial state (bit 0 explored first), so the result is canonical."""
    reach = _reachable(dfa)
    # Moore partition refinement over the reachable part.
    block = {q: int(q in dfa.accepting) for q in reach}
    n_blocks = 2 if len({block[q] for q in reach}) == 2 else 1
    while True:
        signature = {
            q: (block[q], block[dfa.transitions[q][0]], block[dfa.transitions[q][1]])
            for q in reach
        }
        renumber: dict[tuple, int] = {}
        new_block = {}
        for q in reach:
            sig = signature[q]
            if sig not in renumber:
                renumber[sig] = len(renumber)
            new_block[q] = renumber[sig]
        if len(renumber) == n_blocks:
            break
        n_blocks = len(renumber)
        block = new_block
    # Canonical BFS renumbering of the quotient.
    rep: dict[int, int] = {}
    for q in reach:
        rep.setdefault(block[q], q)
    order = [block[dfa.initial]]
    index = {block[dfa.initial]: 0}
    queue = deque(order)
    transitions: list[tuple[int, int]] = []
    while queue:
        b = queue.popleft()
        q = rep[b]
        row = []
        for bit in (0, 1):
            tb = block[dfa.transitions[q][bit]]
            if tb not in index:
                index[tb] = len(index)
                queue.append(tb)
            row.append(index[tb])
        transitions.append(tuple(row))
    # transitions were appended in pop order == BFS discovery order
    accepting = frozenset(
        index[b] for b, q in rep.items() if q in dfa.accepting and b in index
    )
    return Dfa(tuple(transitions), 0, accepting)


def co_accessible(dfa: Dfa) -> frozenset[int]:
    """States from which some accepting state is reachable."""
    back: list[set[int]] = [set() for _ in range(dfa.n_states)]
    for q, (t0, t1) in enumerate(dfa.transitions):
        back[t0].add(q)
        back[t1].add(q)
    seen = set(dfa.accepting)
    queue = deque(seen)
    while queue:
        q = queue.popleft()
        for p in back[q]:
            if p not in seen:
                seen.add(p)
                queue.append(p)
    return frozenset(seen)
