"""Checking over the finite quotient of tracks by (restricted label set,
last state).

Truth of a formula whose modalities reach only adjacent tracks and right
extensions depends on a track only through the letters of the formula
that hold on it and its last state, so each equivalence class can be
evaluated once. Classes are generated lazily from the length-2 seed
tracks and closed under single-state extension.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotInFragment
from .logic import (
    And,
    Box,
    Const,
    Diamond,
    Implies,
    Modality,
    Not,
    Or,
    Prop,
    classify,
    prop_letters,
)
from .descriptor_checker import Verdict
from .model import KripkeStructure, Track, track_label


@dataclass(frozen=True)
class TrackClass:
    letters: frozenset
    last: str

    def __repr__(self):
        inner = ",".join(sorted(self.letters))
        return f"({{{inner}}}, {self.last})"


def class_of(K: KripkeStructure, psi, rho: Track) -> TrackClass:
    """Quotient image of a track: its label restricted to the letters of
    the formula, paired with its last state.
    """
    return TrackClass(track_label(K, rho) & prop_letters(psi), rho[-1])


class ClassEngine:
    """Realized classes of a structure and per-class truth of every
    subformula of one formula over the meets/right-extension fragment.
    """

    def __init__(self, K: KripkeStructure, psi):
        frag = classify(psi)
        if not frag.ab_bar:
            raise NotInFragment("class engine expects a formula over <A> and <~B> only")
        self.K = K
        self.psi = psi
        self.pl = prop_letters(psi)
        self._build_classes()
        self._truth: dict = {}
        self._evaluate(psi)

    def _seed(self, v, w) -> TrackClass:
        return TrackClass(self.K.labels[v] & self.K.labels[w] & self.pl, w)

    def _step(self, c: TrackClass, w) -> TrackClass:
        return TrackClass(c.letters & self.K.labels[w] & self.pl, w)

    def _build_classes(self):
        K = self.K
        seeds_by_state = {
            v: tuple(self._seed(v, w) for w in K.successors(v)) for v in K.states
        }
        classes: set = set()
        frontier: list = []
        for v in sorted(K.states):
            for c in seeds_by_state[v]:
                if c not in classes:
                    classes.add(c)
                    frontier.append(c)
        succ: dict = {}
        while frontier:
            nxt = []
            for c in frontier:
                succ[c] = tuple(self._step(c, w) for w in K.successors(c.last))
                for c2 in succ[c]:
                    if c2 not in classes:
                        classes.add(c2)
                        nxt.append(c2)
            frontier = nxt
        for c in classes:
            if c not in succ:
                succ[c] = tuple(self._step(c, w) for w in K.successors(c.last))
        self.classes = frozenset(classes)
        self._succ = succ
        self._from: dict = {}
        for v in K.states:
            reach = set(seeds_by_state[v])
            todo = list(reach)
            while todo:
                c = todo.pop()
                for c2 in self._succ[c]:
                    if c2 not in reach:
                        reach.add(c2)
                        todo.append(c2)
            self._from[v] = frozenset(reach)

    def classes_from(self, v) -> frozenset:
        """Classes of the tracks starting at `v`."""
        return self._from[v]

    def truth(self, phi, c: TrackClass) -> bool:
        """Truth of a subformula on every track of the class."""
        return c in self._truth[phi]

    def _evaluate(self, phi) -> frozenset:
        done = self._truth.get(phi)
        if done is not None:
            return done
        if isinstance(phi, Prop):
            sat = frozenset(c for c in self.classes if phi.name in c.letters)
        elif isinstance(phi, Const):
            sat = self.classes if phi.value else frozenset()
        elif isinstance(phi, Not):
            sat = self.classes - self._evaluate(phi.sub)
        elif isinstance(phi, And):
            sat = self._evaluate(phi.left) & self._evaluate(phi.right)
        elif isinstance(phi, Or):
            sat = self._evaluate(phi.left) | self._evaluate(phi.right)
        elif isinstance(phi, Implies):
            sat = (self.classes - self._evaluate(phi.left)) | self._evaluate(phi.right)
        elif isinstance(phi, (Diamond, Box)) and phi.mod is Modality.A:
            sub = self._evaluate(phi.sub)
            if isinstance(phi, Diamond):
                good = {v for v in self.K.states if self._from[v] & sub}
            else:
                good = {v for v in self.K.states if self._from[v] <= sub}
            sat = frozenset(c for c in self.classes if c.last in good)
        elif isinstance(phi, (Diamond, Box)) and phi.mod is Modality.BBAR:
            sub = self._evaluate(phi.sub)
            if isinstance(phi, Diamond):
                sat = self._can_reach(sub)
            else:
                sat = self.classes - self._can_reach(self.classes - sub)
        else:
            raise NotInFragment(f"node outside the fragment: {phi!r}")
        self._truth[phi] = sat
        return sat

    def _can_reach(self, targets) -> frozenset:
        """Classes with a successor path of length >= 1 into `targets`."""
        pred: dict = {c: [] for c in self.classes}
        for c in self.classes:
            for c2 in self._succ[c]:
                pred[c2].append(c)
        reached = set()
        frontier = [c for c in targets]
        while frontier:
            nxt = []
            for c in frontier:
                for p in pred[c]:
                    if p not in reached:
                        reached.add(p)
                        nxt.append(p)
            frontier = nxt
        return frozenset(reached)

    def find_initial_track(self, violating) -> Track:
        """Shortest initial track whose class is in `violating`, by
        breadth-first search with visited-class pruning.
        """
        K = self.K
        seen = set()
        frontier = []
        for w in K.successors(K.init):
            c = self._seed(K.init, w)
            if c in seen:
                continue
            seen.add(c)
            if c in violating:
                return (K.init, w)
            frontier.append((c, (K.init, w)))
        while frontier:
            nxt = []
            for c, track in frontier:
                for w in K.successors(c.last):
                    c2 = self._step(c, w)
                    if c2 in seen:
                        continue
                    seen.add(c2)
                    if c2 in violating:
                        return track + (w,)
                    nxt.append((c2, track + (w,)))
            frontier = nxt
        raise RuntimeError("violating class is not realized from the initial state")


def check_ab(K: KripkeStructure, psi) -> Verdict:
    """Model check a formula over <A> and <~B>: Holds iff the formula is
    true on every class of an initial track, else Fails with a shortest
    initial counterexample track.
    """
    engine = ClassEngine(K, psi)
    sat = engine._truth[psi]
    violating = engine.classes_from(K.init) - sat
    stats = {"classes_realized": len(engine.classes)}
    if not violating:
        return Verdict("holds", None, "class", stats)
    track = engine.find_initial_track(violating)
    return Verdict("fails", track, "class", stats)
