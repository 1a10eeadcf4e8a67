"""Bounded-domain track semantics by direct enumeration.

Every quantifier ranges over tracks of length at most the bound, the bound
applying uniformly to nested quantifiers as well. For existential-fragment
formulas a bounded `true` is exact; for universal-fragment formulas a
bounded `false` is exact. The implementation favours being obviously
correct over speed: it enumerates quantified tracks outright and is only
meant for small bounds. `tracknfa` provides the scalable counterpart for
the positive diamond fragment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import logic
from .errors import BoundTooSmall
from .logic import Box, Diamond, Modality
from .model import KripkeStructure, Track, enumerate_tracks, track_label


@dataclass(frozen=True)
class BoundedVerdict:
    value: bool
    bound: int
    failing_track: Optional[Track] = None


def default_bound(K: KripkeStructure, phi) -> int:
    """(modal node count + 1) * (2 + |W|^2): long enough that bounded truth
    saturates for the existential fragment (one witness stretch per modal
    node, plus the track itself).
    """
    return (logic.modal_count(phi) + 1) * (2 + len(K.states) ** 2)


class BoundedEvaluator:
    """Memoized recursive evaluation of desugared formulas over tracks."""

    def __init__(self, K: KripkeStructure, bound: int):
        if bound < 2:
            raise ValueError("bound must be at least 2")
        self.K = K
        self.bound = bound
        self._memo: dict = {}
        self._quant: dict = {}

    def eval(self, rho: Track, phi) -> bool:
        rho = tuple(rho)
        if len(rho) > self.bound:
            raise BoundTooSmall(f"track of length {len(rho)} exceeds bound {self.bound}")
        key = (phi, rho)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out = self._eval(rho, phi)
        self._memo[key] = out
        return out

    def _eval(self, rho, phi) -> bool:
        K = self.K
        if isinstance(phi, logic.Prop):
            return phi.name in track_label(K, rho)
        if isinstance(phi, logic.Const):
            return phi.value
        if isinstance(phi, logic.Not):
            return not self.eval(rho, phi.sub)
        if isinstance(phi, logic.And):
            return self.eval(rho, phi.left) and self.eval(rho, phi.right)
        if isinstance(phi, logic.Or):
            return self.eval(rho, phi.left) or self.eval(rho, phi.right)
        if isinstance(phi, logic.Implies):
            return not self.eval(rho, phi.left) or self.eval(rho, phi.right)
        if not isinstance(phi, (Diamond, Box)):
            raise TypeError(f"not a formula node: {phi!r}")
        if not phi.mod.primitive:
            raise ValueError("bounded evaluation expects a desugared formula")
        want = isinstance(phi, Diamond)
        sub = phi.sub
        if phi.mod is Modality.A:
            return self._quantify_forward(rho[-1], sub, want)
        if phi.mod is Modality.ABAR:
            return self._quantify_backward(rho[0], sub, want)
        if phi.mod is Modality.B:
            prefixes = (rho[:i] for i in range(2, len(rho)))
            return self._quantify_over(prefixes, sub, want)
        if phi.mod is Modality.E:
            suffixes = (rho[i:] for i in range(1, len(rho) - 1))
            return self._quantify_over(suffixes, sub, want)
        if phi.mod is Modality.BBAR:
            return self._quantify_over(self._right_extensions(rho), sub, want)
        return self._quantify_over(self._left_extensions(rho), sub, want)

    def _quantify_over(self, tracks, sub, want_exists) -> bool:
        for t in tracks:
            if self.eval(t, sub) == want_exists:
                return want_exists
        return not want_exists

    def _quantify_forward(self, v, sub, want_exists) -> bool:
        key = (sub, v, "fwd", want_exists)
        hit = self._quant.get(key)
        if hit is None:
            hit = self._quantify_over(self._tracks_from(v), sub, want_exists)
            self._quant[key] = hit
        return hit

    def _quantify_backward(self, v, sub, want_exists) -> bool:
        key = (sub, v, "bwd", want_exists)
        hit = self._quant.get(key)
        if hit is None:
            hit = self._quantify_over(self._tracks_to(v), sub, want_exists)
            self._quant[key] = hit
        return hit

    def _tracks_from(self, v):
        def extend(prefix):
            for w in self.K.successors(prefix[-1]):
                t = prefix + (w,)
                yield t
                if len(t) < self.bound:
                    yield from extend(t)

        yield from extend((v,))

    def _tracks_to(self, v):
        def extend(suffix):
            for w in self.K.predecessors(suffix[0]):
                t = (w,) + suffix
                yield t
                if len(t) < self.bound:
                    yield from extend(t)

        yield from extend((v,))

    def _right_extensions(self, rho):
        def extend(t):
            for w in self.K.successors(t[-1]):
                u = t + (w,)
                yield u
                if len(u) < self.bound:
                    yield from extend(u)

        if len(rho) < self.bound:
            yield from extend(tuple(rho))

    def _left_extensions(self, rho):
        def extend(t):
            for w in self.K.predecessors(t[0]):
                u = (w,) + t
                yield u
                if len(u) < self.bound:
                    yield from extend(u)

        if len(rho) < self.bound:
            yield from extend(tuple(rho))


def eval_bounded(K: KripkeStructure, rho: Track, phi, bound: int) -> bool:
    """Truth of a desugared formula on one track under the bounded semantics."""
    return BoundedEvaluator(K, bound).eval(rho, phi)


def model_check_bounded(K: KripkeStructure, phi, bound: int) -> BoundedVerdict:
    """Conjunction of the bounded evaluation over all initial tracks of
    length at most the bound.
    """
    ev = BoundedEvaluator(K, bound)
    for rho in enumerate_tracks(K, bound, start=K.init):
        if not ev.eval(rho, phi):
            return BoundedVerdict(False, bound, rho)
    return BoundedVerdict(True, bound)
