"""Existential satisfiability search over descriptor elements, and the
universal model-checking driver built on it.

The search is the deterministic counterpart of a nondeterministic
recursion: every nondeterministic choice becomes exhaustive iteration in
the canonical descriptor order, so verdicts and counterexamples are
reproducible. Results are memoized per (subformula, descriptor element).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import NotInFragment, NotWitnessed
from .logic import Diamond, Modality, Or, classify, is_propositional, negate_to_exists, val
from .model import (
    DescriptorElement,
    KripkeStructure,
    Track,
    concat_desc,
    shortest_witness,
    witnessed_descriptors,
)


@dataclass
class Verdict:
    """Outcome of a model-level check. A counterexample, present exactly
    when the result is "fails", is an initial track falsifying the checked
    formula.
    """

    result: str
    counterexample: Optional[Track]
    engine: str
    stats: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.result == "holds"


class _ExistsEngine:
    def __init__(self, K: KripkeStructure, use_memo: bool = True):
        self.K = K
        self.use_memo = use_memo
        self._forward: dict = {}
        self._backward: dict = {}
        self._memo: dict = {}
        self._witness_cache: dict = {}
        self.stats = {"check_calls": 0, "memo_hits": 0, "descriptors_explored": 0, "adjacent_witnesses": 0}

    def forward(self, v):
        out = self._forward.get(v)
        if out is None:
            out = witnessed_descriptors(self.K, v, "forward")
            self._forward[v] = out
            self.stats["descriptors_explored"] += len(out)
        return out

    def backward(self, v):
        out = self._backward.get(v)
        if out is None:
            out = witnessed_descriptors(self.K, v, "backward")
            self._backward[v] = out
            self.stats["descriptors_explored"] += len(out)
        return out

    def realize(self, d) -> Track:
        out = self._witness_cache.get(d)
        if out is None:
            out = shortest_witness(self.K, d)
            self._witness_cache[d] = out
        return out

    def check(self, phi, d: DescriptorElement):
        """(satisfiable?, witness track associated with d or None)."""
        key = (phi, d)
        if self.use_memo and key in self._memo:
            self.stats["memo_hits"] += 1
            return self._memo[key]
        self.stats["check_calls"] += 1
        out = self._check(phi, d)
        if self.use_memo:
            self._memo[key] = out
        return out

    def _check(self, phi, d):
        K = self.K
        if is_propositional(phi):
            if val(phi, d, K):
                return True, self.realize(d)
            return False, None
        if isinstance(phi, Or):
            ok, wit = self.check(phi.left, d)
            if ok:
                return ok, wit
            return self.check(phi.right, d)
        if not isinstance(phi, Diamond):
            raise NotInFragment(f"node outside the existential fragment: {phi!r}")

        if phi.mod is Modality.A:
            for adj in self.forward(d.v_fin):
                ok, _ = self.check(phi.sub, adj)
                if ok:
                    self.stats["adjacent_witnesses"] += 1
                    return True, self.realize(d)
            return False, None

        if phi.mod is Modality.ABAR:
            for adj in self.backward(d.v_in):
                ok, _ = self.check(phi.sub, adj)
                if ok:
                    self.stats["adjacent_witnesses"] += 1
                    return True, self.realize(d)
            return False, None

        if phi.mod is Modality.B:
            # Dropping the last state: either it directly follows the
            # prefix's descriptor, or the track splits into two witnessed
            # descriptors whose join reproduces d.
            for d1 in self.forward(d.v_in):
                if (d1.v_fin, d.v_fin) in self.K.edges and d1.interior | {d1.v_fin} == d.interior:
                    ok, wit = self.check(phi.sub, d1)
                    if ok:
                        return True, wit + (d.v_fin,)
            for d1 in self.forward(d.v_in):
                if not d1.interior <= d.interior:
                    continue
                for v2 in self.K.successors(d1.v_fin):
                    for d2 in self.forward(v2):
                        if d2.v_fin != d.v_fin:
                            continue
                        if concat_desc(d1, d2) == d:
                            ok, wit = self.check(phi.sub, d1)
                            if ok:
                                return True, wit + self.realize(d2)
            return False, None

        if phi.mod is Modality.E:
            # Mirror image: drop the first state, or split with the suffix
            # part carrying the recursion.
            for v1 in self.K.successors(d.v_in):
                for d1 in self.forward(v1):
                    if d1.v_fin != d.v_fin:
                        continue
                    if d1.interior | {d1.v_in} == d.interior:
                        ok, wit = self.check(phi.sub, d1)
                        if ok:
                            return True, (d.v_in,) + wit
            for d2 in self.forward(d.v_in):
                if not d2.interior <= d.interior:
                    continue
                for v1 in self.K.successors(d2.v_fin):
                    for d1 in self.forward(v1):
                        if d1.v_fin != d.v_fin:
                            continue
                        if concat_desc(d2, d1) == d:
                            ok, wit = self.check(phi.sub, d1)
                            if ok:
                                return True, self.realize(d2) + wit
            return False, None

        raise NotInFragment(f"modality {phi.mod.text} outside the existential fragment")


def check_exists(
    K: KripkeStructure, psi, d: DescriptorElement, use_memo: bool = True
):
    """True (plus a witness track associated with d) iff some track the
    element abstracts satisfies the existential-fragment formula.
    """
    if not classify(psi).exists_aabe:
        raise NotInFragment("check_exists expects an ExistsAABE formula")
    engine = _ExistsEngine(K, use_memo=use_memo)
    if d not in engine.forward(d.v_in):
        raise NotWitnessed(f"descriptor element {d!r} is not witnessed")
    return engine.check(psi, d)


def model_check_univ(K: KripkeStructure, psi, use_memo: bool = True) -> Verdict:
    """Model check a universal-fragment formula: Holds iff no witnessed
    initial descriptor element admits a track satisfying the dualized
    negation; otherwise Fails with the first counterexample track in
    canonical order.
    """
    if not classify(psi).forall_aabe:
        raise NotInFragment("model_check_univ expects a ForallAABE formula")
    negated = negate_to_exists(psi)
    engine = _ExistsEngine(K, use_memo=use_memo)
    for d in engine.forward(K.init):
        ok, wit = engine.check(negated, d)
        if ok:
            return Verdict("fails", wit, "descriptor", dict(engine.stats))
    return Verdict("holds", None, "descriptor", dict(engine.stats))
