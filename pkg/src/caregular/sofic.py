"""Subshifts presented by the minimal DFA of their language.

The language of a subshift is factorial (factor closed) and extensible
(every word extends on both sides).  In the minimal DFA of such a language
every co-accessible state is accepting, so the automaton is the accepting
"live" part plus at most one dead sink kept for totality.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import networkx as nx

from .automata import Dfa, build_dfa, co_accessible, minimize
from .rules import (
    LocalRule,
    PeriodicPoint,
    check_word,
    is_primitive,
)


@dataclass(frozen=True)
class SoficShift:
    """A subshift given by the minimal DFA of its factorial language."""

    dfa: Dfa

    def contains(self, word: str) -> bool:
        return self.dfa.accepts(check_word(word))

    def words_of_length(self, length: int) -> list[str]:
        """All length-n words of the language, lexicographically."""
        if length < 0:
            raise ValueError("length must be nonnegative")
        out: list[str] = []

        def walk(state: int, prefix: str):
            if len(prefix) == length:
                if state in self.dfa.accepting:
                    out.append(prefix)
                return
            # the language is factorial: only accepting states can extend
            if state not in self.dfa.accepting:
                return
            for bit in "01":
                walk(self.dfa.step(state, bit), prefix + bit)

        walk(self.dfa.initial, "")
        return out

    def contains_periodic(self, word: str) -> bool:
        """Whether ``...www...`` belongs to the subshift.

        The residual languages of w, ww, www, ... shrink monotonically
        because the language is factorial, so iterating q -> run(q, w) from
        the initial state reaches a fixed state whose acceptance decides
        membership of every power of w.
        """
        check_word(word)
        if not word:
            raise ValueError("period word must be nonempty")
        state = self.dfa.initial
        seen = set()
        while state not in seen:
            seen.add(state)
            state = self.dfa.run(state, word)
        return state in self.dfa.accepting

    def contains_eventually_periodic(self, left: str, middle: str, right: str) -> bool:
        """Whether ``...uuu.w vvv...`` belongs to the subshift (same fixed
        point argument as :meth:`contains_periodic`, applied to both tails)."""
        check_word(middle)
        for word in (left, right):
            check_word(word)
            if not word:
                raise ValueError("tail period words must be nonempty")
        state = self.dfa.initial
        seen = set()
        while state not in seen:
            seen.add(state)
            state = self.dfa.run(state, left)
        state = self.dfa.run(state, middle)
        seen = set()
        while state not in seen:
            seen.add(state)
            state = self.dfa.run(state, right)
        return state in self.dfa.accepting


def _determinize(initial_states, nfa_edges, n_nfa_states) -> Dfa:
    """Subset construction for an NFA whose states are all accepting;
    a subset accepts iff nonempty.  States are bitmask keys."""
    start = 0
    for s in initial_states:
        start |= 1 << s
    masks = []
    for bit in (0, 1):
        row = []
        for s in range(n_nfa_states):
            m = 0
            for t in nfa_edges[s][bit]:
                m |= 1 << t
            row.append(m)
        masks.append(row)

    def step(key: int, bit: int) -> int:
        out = 0
        k = key
        while k:
            low = k & -k
            out |= masks[bit][low.bit_length() - 1]
            k ^= low
        return out

    return minimize(build_dfa(start, step, lambda key: key != 0))


def full_shift() -> SoficShift:
    return SoficShift(Dfa(((0, 0),), 0, frozenset({0})))


@lru_cache(maxsize=128)
def image(rule: LocalRule) -> SoficShift:
    """The image subshift f({0,1}^Z) of a rule.

    The de Bruijn graph on 2r-words, with the edge u -> u[1:]b labeled by
    the rule output on ub, spells exactly the factors of image
    configurations; every node lies on bi-infinite paths, so the subset
    construction over all nodes yields the image language.
    """
    r = rule.radius
    n = 1 << (2 * r)
    mask = n - 1
    edges = [[[], []] for _ in range(n)]
    for s in range(n):
        for b in (0, 1):
            window = (s << 1) | b
            edges[s][rule.table[window]].append(window & mask)
    return SoficShift(_determinize(range(n), edges, n))


def from_forbidden_words(words) -> SoficShift:
    """The subshift of sequences avoiding every given word as a factor."""
    words = sorted({check_word(w) for w in words})
    if any(not w for w in words):
        raise ValueError("forbidden words must be nonempty")
    # Aho-Corasick style suffix tracker; state None is the dead sink.
    prefixes = {""}
    for w in words:
        prefixes.update(w[:k] for k in range(len(w)))

    def tracker_step(state, bit):
        if state is None:
            return None
        cand = state + "01"[bit]
        if any(cand.endswith(w) for w in words):
            return None
        while cand not in prefixes:
            cand = cand[1:]
        return cand

    tracker = build_dfa("", tracker_step, lambda s: s is not None)
    dead = {q for q in range(tracker.n_states) if q not in tracker.accepting}
    graph = nx.DiGraph()
    graph.add_nodes_from(q for q in range(tracker.n_states) if q not in dead)
    for q in graph.nodes:
        for t in tracker.transitions[q]:
            if t not in dead:
                graph.add_edge(q, t)
    # States on bi-infinite avoiding paths: reachable from a cycle and able
    # to reach one.
    cyclic = {q for comp in nx.strongly_connected_components(graph)
              for q in comp
              if len(comp) > 1 or graph.has_edge(q, q)}
    forward = set(cyclic)
    for q in cyclic:
        forward.update(nx.descendants(graph, q))
    backward = set(cyclic)
    rev = graph.reverse(copy=False)
    for q in cyclic:
        backward.update(nx.descendants(rev, q))
    # Any walk between two live states stays live, so the subshift language
    # is spelled exactly by the induced subgraph on live states.
    live = forward & backward
    if not live:
        raise ValueError("forbidden words leave an empty subshift")
    edges = [[[], []] for _ in range(tracker.n_states)]
    for q in live:
        for bit in (0, 1):
            t = tracker.transitions[q][bit]
            if t in live:
                edges[q][bit].append(t)
    return SoficShift(_determinize(sorted(live), edges, tracker.n_states))


def is_full_shift(shift: SoficShift) -> bool:
    return shift.dfa == full_shift().dfa


def periodic_words(shift: SoficShift, length: int) -> list[str]:
    """All words u of the given length with ``...uuu...`` in the subshift,
    one lexicographically least representative per rotation class, sorted.

    Enumerated as closed walks in the live part of the DFA; in the minimal
    DFA of a factorial language the u-power residuals stabilize, so every
    such point sits on a closed walk reading u exactly once.
    """
    if length < 1:
        raise ValueError("length must be positive")
    dfa = shift.dfa
    acc = sorted(shift.dfa.accepting)
    if not acc:
        return []
    # reach[k][s] = bitmask of states reachable from s in exactly k steps
    reach = [[1 << s for s in range(dfa.n_states)]]
    for _ in range(length):
        prev = reach[-1]
        reach.append(
            [prev[t0] | prev[t1] for (t0, t1) in dfa.transitions]
        )
    targets = [1 << q for q in acc]
    found: list[str] = []

    def walk(cur: tuple[int, ...], prefix: str):
        remaining = length - len(prefix)
        if remaining == 0:
            if any(c == q for c, q in zip(cur, acc)):
                if min(prefix[k:] + prefix[:k] for k in range(length)) == prefix:
                    found.append(prefix)
            return
        for bit in (0, 1):
            nxt = tuple(dfa.transitions[c][bit] for c in cur)
            if any(reach[remaining - 1][c] & t for c, t in zip(nxt, targets)):
                walk(nxt, prefix + "01"[bit])

    walk(tuple(acc), "")
    return found


def periodic_points(shift: SoficShift, max_period: int) -> list[PeriodicPoint]:
    """Canonical primitive representatives of all periodic points with a
    period word of length at most ``max_period``, sorted by (length, word)."""
    if max_period < 1:
        raise ValueError("max period must be positive")
    points = []
    for length in range(1, max_period + 1):
        for word in periodic_words(shift, length):
            if is_primitive(word):
                points.append(PeriodicPoint(word))
    return points


def minimal_forbidden_words(shift: SoficShift):
    """The minimal forbidden words of the subshift: words not in the
    language whose maximal proper factors both are.

    Returns the words sorted by (length, word) when there are finitely
    many, else None.  Computed as a product automaton tracking the word
    minus its first letter, the word itself, and the word minus its last
    letter, then checking the live part for acyclicity.
    """
    dfa = shift.dfa
    pre = -1  # sentinel: no letter consumed yet on the skip-first track

    def step(key, bit):
        skip_first, whole, prev_ok = key
        nxt_skip = dfa.initial if skip_first == pre else dfa.transitions[skip_first][bit]
        return (nxt_skip, dfa.transitions[whole][bit], whole in dfa.accepting)

    def accept(key) -> bool:
        skip_first, whole, prev_ok = key
        return (
            skip_first != pre
            and skip_first in dfa.accepting
            and whole not in dfa.accepting
            and prev_ok
        )

    product = minimize(build_dfa((pre, dfa.initial, False), step, accept))
    useful = co_accessible(product)
    graph = nx.DiGraph()
    graph.add_nodes_from(q for q in range(product.n_states) if q in useful)
    for q in graph.nodes:
        for t in product.transitions[q]:
            if t in useful:
                graph.add_edge(q, t)
    if not nx.is_directed_acyclic_graph(graph):
        return None
    words: list[str] = []

    def walk(state: int, prefix: str):
        if state in product.accepting:
            words.append(prefix)
        for bit in "01":
            t = product.step(state, bit)
            if t in useful:
                walk(t, prefix + bit)

    if product.initial in useful:
        walk(product.initial, "")
    return sorted(words, key=lambda w: (len(w), w))


def is_sft(shift: SoficShift) -> bool:
    """Whether the subshift is of finite type (finitely many minimal
    forbidden words)."""
    return minimal_forbidden_words(shift) is not None
