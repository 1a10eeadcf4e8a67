import pytest

from intervalmc import KripkeStructure, enumerate_tracks, is_track, track_label
from intervalmc.class_checker import ClassEngine, TrackClass, check_ab, class_of
from intervalmc.errors import NotInFragment
from intervalmc.logic import classify, desugar, modal_count, parse_formula, prop_letters, subformulas
from intervalmc.reductions import CnfFormula, QbfFormula, build_qbf_instance
from intervalmc.tracknfa import accepts_track, compile_positive

from _instances import random_ab_formula, random_kripke, random_positive_formula, rng_for


def test_class_of_examples(kequiv):
    psi = parse_formula("p | !p")
    assert class_of(kequiv, psi, ("v0", "v0")) == TrackClass(frozenset({"p"}), "v0")
    assert class_of(kequiv, psi, ("v0", "v1")) == TrackClass(frozenset(), "v1")
    empty = parse_formula("true")
    for rho in enumerate_tracks(kequiv, 3):
        assert class_of(kequiv, empty, rho) == TrackClass(frozenset(), rho[-1])


def test_check_ab_examples(kequiv):
    assert check_ab(kequiv, parse_formula("!<~B> q")).holds
    Kq, xi = build_qbf_instance(QbfFormula((("e", 1),), CnfFormula(1, ((1,),))))
    assert check_ab(Kq, xi).holds
    Kq2, xi2 = build_qbf_instance(QbfFormula((("a", 1),), CnfFormula(1, ((1,),))))
    verdict = check_ab(Kq2, xi2)
    assert verdict.result == "fails"
    assert verdict.counterexample == ("w0", "w1")


def test_check_ab_counterexample_is_shortest_violating(kequiv):
    verdict = check_ab(kequiv, parse_formula("p"))
    assert verdict.result == "fails"
    assert verdict.counterexample == ("v0", "v1")
    assert is_track(kequiv, verdict.counterexample)


def test_check_ab_requires_fragment(kequiv):
    with pytest.raises(NotInFragment):
        check_ab(kequiv, parse_formula("<B> p"))


def test_realized_class_count_bound():
    rng = rng_for("classcount")
    for _ in range(30):
        K = random_kripke(rng, max_states=4, letters=("p", "q"))
        psi = desugar(random_ab_formula(rng, ("p", "q")))
        engine = ClassEngine(K, psi)
        limit = (2 ** len(prop_letters(psi))) * len(K.states)
        assert len(engine.classes) <= limit


def test_every_enumerated_track_lands_in_a_realized_class():
    rng = rng_for("classcover")
    for _ in range(20):
        K = random_kripke(rng, max_states=4)
        psi = desugar(random_ab_formula(rng, ("p", "q")))
        engine = ClassEngine(K, psi)
        for rho in enumerate_tracks(K, 5):
            c = class_of(K, psi, rho)
            assert c in engine.classes
            assert c in engine.classes_from(rho[0])


def test_equal_class_tracks_get_identical_table_verdicts():
    rng = rng_for("quotient-small")
    for _ in range(15):
        K = random_kripke(rng, max_states=3)
        psi = desugar(random_ab_formula(rng, ("p", "q")))
        engine = ClassEngine(K, psi)
        by_class = {}
        for rho in enumerate_tracks(K, 6):
            by_class.setdefault(class_of(K, psi, rho), set()).add(rho)
        for c, tracks in by_class.items():
            verdicts = {engine.truth(psi, class_of(K, psi, rho)) for rho in tracks}
            assert len(verdicts) == 1


def _renamed_copy(K):
    names = {s: f"r_{s}" for s in K.states}
    return (
        KripkeStructure(
            ap=K.ap,
            states=[names[s] for s in reversed(K.states)],
            edges={(names[a], names[b]) for a, b in K.edges},
            labels={names[s]: K.labels[s] for s in K.states},
            init=names[K.init],
        ),
        names,
    )


def test_quotient_agrees_across_isomorphic_copy():
    rng = rng_for("quotient-iso")
    for _ in range(15):
        K = random_kripke(rng, max_states=3)
        psi = desugar(random_ab_formula(rng, ("p", "q")))
        K2, names = _renamed_copy(K)
        e1 = ClassEngine(K, psi)
        e2 = ClassEngine(K2, psi)
        assert check_ab(K, psi).result == check_ab(K2, psi).result
        for rho in enumerate_tracks(K, 5):
            rho2 = tuple(names[s] for s in rho)
            assert track_label(K, rho) == track_label(K2, rho2)
            for sub in set(subformulas(psi)):
                assert e1.truth(sub, class_of(K, psi, rho)) == e2.truth(
                    sub, class_of(K2, psi, rho2)
                )


def test_full_fragment_agrees_with_naive_bounded_oracle():
    # Stronger than the positive-fragment check: with witness slack beyond
    # the track length, bounded truth stabilizes for the whole
    # Boolean-closed <A>/<~B> fragment, negations included, and must equal
    # the per-class table.
    from intervalmc.oracle import BoundedEvaluator

    rng = rng_for("class-vs-naive-full")
    checked = 0
    for _ in range(60):
        K = random_kripke(rng, min_states=2, max_states=3)
        psi = desugar(random_ab_formula(rng, ("p", "q"), max_nodes=7))
        track_cap = 4
        slack = (2 ** len(prop_letters(psi))) * len(K.states) * (modal_count(psi) + 1)
        bound = track_cap + slack
        if bound > 10:
            continue
        checked += 1
        ev = BoundedEvaluator(K, bound)
        engine = ClassEngine(K, psi)
        for rho in enumerate_tracks(K, track_cap, start=K.init):
            assert engine.truth(psi, class_of(K, psi, rho)) == ev.eval(rho, psi)
    assert checked >= 25


def test_positive_fragment_agrees_with_bounded_automaton():
    # With the bound exceeding the evaluated track's length by the
    # class-count margin (which bounds every witness stretch), bounded
    # truth of a positive formula is exact, so it must match the quotient
    # verdict on every enumerated initial track.
    rng = rng_for("class-vs-nfa")
    track_cap = 5
    for _ in range(20):
        K = random_kripke(rng, max_states=3)
        psi = desugar(random_positive_formula(rng, ("p",), modal_budget=2))
        if not classify(psi).ab_bar:
            continue
        slack = (2 ** len(prop_letters(psi))) * len(K.states) * (modal_count(psi) + 1)
        bound = track_cap + slack
        verdict = check_ab(K, psi)
        engine = ClassEngine(K, psi)
        auto = compile_positive(K, psi, bound)
        for rho in enumerate_tracks(K, track_cap, start=K.init):
            bounded = accepts_track(auto, rho, bound)
            table = engine.truth(psi, class_of(K, psi, rho))
            assert bounded == table
        if verdict.result == "fails":
            ce = verdict.counterexample
            bound_ce = len(ce) + slack
            assert not accepts_track(compile_positive(K, psi, bound_ce), ce, bound_ce)
