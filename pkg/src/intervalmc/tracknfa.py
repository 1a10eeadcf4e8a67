"""Bounded track-set automata for the positive diamond fragment.

Compiles a formula built from Boolean-positive connectives and the
diamonds over meets, met-by, started-by, finished-by, and right-extension
into a small nondeterministic automaton reading a track one state at a
time. Acceptance may depend on the number of symbols read (the
right-extension diamond consumes budget from the shared bound), so the
drivers thread the position through every call.

This computes exactly the bounded semantics of `oracle.eval_bounded` on
its fragment, but existence queries run as a product-graph search instead
of track enumeration, which keeps bounds in the hundreds tractable. The
test suite cross-validates the two implementations at small bounds.
"""

from __future__ import annotations

from typing import Optional

from .errors import BoundTooSmall, NotInFragment
from .logic import And, Diamond, Modality, Or, eval_prop, is_propositional, prop_letters
from .model import KripkeStructure, Track


class _PropAuto:
    time_sensitive = False

    def __init__(self, K, beta):
        self.K = K
        self.beta = beta
        self.pl = prop_letters(beta)

    def start(self, v):
        return ((v, self.K.labels[v] & self.pl, False),)

    def step(self, node, v, t):
        return ((v, node[1] & self.K.labels[v], True),)

    def accepts(self, node, t):
        return node[2] and eval_prop(self.beta, node[1])

    def cur(self, node):
        return node[0]


class _UnionAuto:
    def __init__(self, left, right):
        self.children = (left, right)
        self.time_sensitive = left.time_sensitive or right.time_sensitive

    def start(self, v):
        return tuple((i, n) for i, c in enumerate(self.children) for n in c.start(v))

    def step(self, node, v, t):
        i, n = node
        return tuple((i, m) for m in self.children[i].step(n, v, t))

    def accepts(self, node, t):
        return self.children[node[0]].accepts(node[1], t)

    def cur(self, node):
        return self.children[node[0]].cur(node[1])


class _ProductAuto:
    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.time_sensitive = left.time_sensitive or right.time_sensitive

    def start(self, v):
        return tuple((a, b) for a in self.left.start(v) for b in self.right.start(v))

    def step(self, node, v, t):
        a, b = node
        lefts = self.left.step(a, v, t)
        rights = self.right.step(b, v, t)
        return tuple((a2, b2) for a2 in lefts for b2 in rights)

    def accepts(self, node, t):
        return self.left.accepts(node[0], t) and self.right.accepts(node[1], t)

    def cur(self, node):
        return self.left.cur(node[0])


class _StartedByAuto:
    """Tracks with a proper prefix accepted by the child automaton."""

    def __init__(self, sub):
        self.sub = sub
        self.time_sensitive = sub.time_sensitive

    def start(self, v):
        return tuple(("in", n) for n in self.sub.start(v))

    def step(self, node, v, t):
        if node[0] == "chase":
            return (("chase", v),)
        n = node[1]
        out = [("in", m) for m in self.sub.step(n, v, t)]
        if self.sub.accepts(n, t - 1):
            out.append(("chase", v))
        return tuple(out)

    def accepts(self, node, t):
        return node[0] == "chase"

    def cur(self, node):
        return node[1] if node[0] == "chase" else self.sub.cur(node[1])


class _FinishedByAuto:
    """Tracks with a proper suffix accepted by the child automaton.

    Sub-run nodes carry the suffix length read so far; when the child is
    time-insensitive the counter is capped at 2 to keep the node space
    small.
    """

    def __init__(self, sub):
        self.sub = sub
        self.time_sensitive = sub.time_sensitive

    def start(self, v):
        # The initial skim node is kept distinct from stepped skim nodes:
        # search drivers key their visited sets on nodes, and a start node
        # reachable again via a loop stands for a longer track whose
        # interior bookkeeping differs.
        return (("skim0", v),)

    def step(self, node, v, t):
        if node[0] in ("skim", "skim0"):
            out = [("skim", v)]
            out.extend(("sub", n, 1) for n in self.sub.start(v))
            return tuple(out)
        _, n, s = node
        s2 = s + 1 if self.time_sensitive else min(s + 1, 2)
        return tuple(("sub", m, s2) for m in self.sub.step(n, v, s + 1))

    def accepts(self, node, t):
        return node[0] == "sub" and self.sub.accepts(node[1], node[2])

    def cur(self, node):
        return node[1] if node[0] != "sub" else self.sub.cur(node[1])


class _MeetsAuto:
    """Tracks whose last state starts some accepted track of the child."""

    time_sensitive = False

    def __init__(self, K, sub, bound):
        self.aset = frozenset(
            v for v in K.states if _exists_from(K, sub, v, bound)
        )

    def start(self, v):
        return ((v, False),)

    def step(self, node, v, t):
        return ((v, True),)

    def accepts(self, node, t):
        return node[1] and node[0] in self.aset

    def cur(self, node):
        return node[0]


class _MetByAuto:
    """Tracks whose first state ends some accepted track of the child."""

    time_sensitive = False

    def __init__(self, K, sub, bound):
        self.bset = _ending_states(K, sub, bound)

    def start(self, v):
        return ((v in self.bset, v, False),)

    def step(self, node, v, t):
        return ((node[0], v, True),)

    def accepts(self, node, t):
        return node[0] and node[2]

    def cur(self, node):
        return node[1]


class _RightExtAuto:
    """Tracks extendable on the right, within the bound, into an accepted
    track of the child. Consumes budget: acceptance after t symbols asks
    for an accepting continuation of 1..bound-t more symbols.
    """

    time_sensitive = True

    def __init__(self, K, sub, bound):
        self.K = K
        self.sub = sub
        self.bound = bound
        self._memo: dict = {}
        self._dist: dict = {}

    def start(self, v):
        return self.sub.start(v)

    def step(self, node, v, t):
        return self.sub.step(node, v, t)

    def cur(self, node):
        return self.sub.cur(node)

    def accepts(self, node, t):
        if t < 2 or self.bound - t < 1:
            return False
        if self.sub.time_sensitive:
            # Child acceptance shifts with the position, so the search is
            # memoized per (node, position).
            key = (node, t)
            hit = self._memo.get(key)
            if hit is None:
                hit = self._search(node, t)
                self._memo[key] = hit
            return hit
        # Otherwise the minimal extension length is position-independent
        # and only the remaining budget varies per query.
        if node not in self._dist:
            self._dist[node] = self._min_extension(node)
        dist = self._dist[node]
        return dist is not None and dist <= self.bound - t

    def _search(self, node, t):
        # Acceptance is checked before the dedup: a loop may revisit a node
        # (the start node in particular) at an extension length where it
        # accepts even though its first arrival did not qualify.
        seen = {node}
        frontier = [node]
        for k in range(1, self.bound - t + 1):
            nxt = []
            for n in frontier:
                for w in self.K.successors(self.sub.cur(n)):
                    for m in self.sub.step(n, w, t + k):
                        if self.sub.accepts(m, t + k):
                            return True
                        if m in seen:
                            continue
                        seen.add(m)
                        nxt.append(m)
            if not nxt:
                return False
            frontier = nxt
        return False

    def _min_extension(self, node):
        """Minimum number of appended states reaching child acceptance, or
        None; valid only for time-insensitive children. Extensions longer
        than bound-2 can never fit any budget.
        """
        seen = {node}
        frontier = [node]
        for k in range(1, self.bound - 1):
            nxt = []
            for n in frontier:
                for w in self.K.successors(self.sub.cur(n)):
                    for m in self.sub.step(n, w, 3):
                        if self.sub.accepts(m, 3):
                            return k
                        if m in seen:
                            continue
                        seen.add(m)
                        nxt.append(m)
            if not nxt:
                return None
            frontier = nxt
        return None


def compile_positive(K: KripkeStructure, phi, bound: int):
    """Compile a positive diamond formula; NotInFragment otherwise."""
    if is_propositional(phi):
        return _PropAuto(K, phi)
    if isinstance(phi, Or):
        return _UnionAuto(
            compile_positive(K, phi.left, bound), compile_positive(K, phi.right, bound)
        )
    if isinstance(phi, And):
        return _ProductAuto(
            compile_positive(K, phi.left, bound), compile_positive(K, phi.right, bound)
        )
    if isinstance(phi, Diamond):
        sub = compile_positive(K, phi.sub, bound)
        if phi.mod is Modality.A:
            return _MeetsAuto(K, sub, bound)
        if phi.mod is Modality.ABAR:
            return _MetByAuto(K, sub, bound)
        if phi.mod is Modality.B:
            return _StartedByAuto(sub)
        if phi.mod is Modality.E:
            return _FinishedByAuto(sub)
        if phi.mod is Modality.BBAR:
            return _RightExtAuto(K, sub, bound)
    raise NotInFragment(f"not in the positive diamond fragment: {phi!r}")


def accepts_track(auto, rho: Track, bound: int) -> bool:
    """Run the automaton over one track (subset simulation)."""
    rho = tuple(rho)
    if len(rho) > bound:
        raise BoundTooSmall(f"track of length {len(rho)} exceeds bound {bound}")
    frontier = set(auto.start(rho[0]))
    t = 1
    for v in rho[1:]:
        t += 1
        frontier = {m for n in frontier for m in auto.step(n, v, t)}
        if not frontier:
            return False
    return any(auto.accepts(n, t) for n in frontier)


def _exists_from(K, auto, v, bound) -> bool:
    seen = set(auto.start(v))
    frontier = list(seen)
    t = 1
    while frontier and t < bound:
        t += 1
        nxt = []
        for n in frontier:
            for w in K.successors(auto.cur(n)):
                for m in auto.step(n, w, t):
                    if m in seen:
                        continue
                    seen.add(m)
                    if auto.accepts(m, t):
                        return True
                    nxt.append(m)
        frontier = nxt
    return False


def _ending_states(K, auto, bound) -> frozenset:
    out = set()
    seen = set()
    frontier = []
    for v in sorted(K.states):
        for n in auto.start(v):
            if n not in seen:
                seen.add(n)
                frontier.append(n)
    t = 1
    while frontier and t < bound:
        t += 1
        nxt = []
        for n in frontier:
            for w in K.successors(auto.cur(n)):
                for m in auto.step(n, w, t):
                    if m in seen:
                        continue
                    seen.add(m)
                    if auto.accepts(m, t):
                        out.add(auto.cur(m))
                    nxt.append(m)
        frontier = nxt
    return frozenset(out)


def find_satisfying_track(
    K: KripkeStructure,
    phi,
    bound: int,
    first: Optional[str] = None,
    last: Optional[str] = None,
    interior=None,
) -> Optional[Track]:
    """Shortest track (within the bound) satisfying a positive diamond
    formula under the bounded semantics, optionally constrained to a fixed
    first state, last state, and exact interior state set. None when no
    such track exists.
    """
    auto = compile_positive(K, phi, bound)
    track_interior = interior is not None
    target = frozenset(interior) if track_interior else None
    empty = frozenset() if track_interior else None
    starts = (first,) if first is not None else tuple(sorted(K.states))

    parents: dict = {}
    frontier = []
    for v in starts:
        for n in auto.start(v):
            key = (n, empty)
            if key not in parents:
                parents[key] = (None, v)
                frontier.append(key)
    t = 1
    while frontier and t < bound:
        t += 1
        nxt = []
        for key in frontier:
            n, iset = key
            u = auto.cur(n)
            if track_interior:
                grown = iset if t == 2 else iset | {u}
                if not grown <= target:
                    continue
            else:
                grown = None
            for w in K.successors(u):
                for m in auto.step(n, w, t):
                    child = (m, grown)
                    if child in parents:
                        continue
                    parents[child] = (key, w)
                    if (
                        (last is None or auto.cur(m) == last)
                        and (not track_interior or grown == target)
                        and auto.accepts(m, t)
                    ):
                        states = [w]
                        back = key
                        while back is not None:
                            prev, sym = parents[back]
                            states.append(sym)
                            back = prev
                        return tuple(reversed(states))
                    nxt.append(child)
        frontier = nxt
    return None
