"""Checks against the bundled scheduler model. The model is a best-effort
reconstruction of an informally described system, so these tests document
expected behaviour of the bundled file rather than gate the engines.
"""

from intervalmc.class_checker import check_ab
from intervalmc.descriptor_checker import model_check_univ
from intervalmc.logic import classify, desugar, parse_formula
from intervalmc.model import is_track, track_label

ALL_BUSY = "!r0 & !r1 & !e0 & !e1"


def test_mutual_exclusion_violated(scheduler):
    verdict = model_check_univ(scheduler, desugar(parse_formula("[E] !(e0 & e1)")))
    assert verdict.result == "fails"
    ce = verdict.counterexample
    assert is_track(scheduler, ce) and ce[0] == "w0"


def test_requests_stay_satisfiable(scheduler):
    phi = desugar(parse_formula("[A](r0 -> <A> e0 | <A><A> e0)"))
    assert classify(phi).names() == ("ABbar",)
    assert check_ab(scheduler, phi).holds


def test_joint_requests_are_served_immediately(scheduler):
    # The implication sits over a modal operand, which puts the formula in
    # the Boolean-closed <A> fragment rather than the universal one.
    phi = parse_formula(f"[A](r0 & r1 -> [A](e0 | e1 | ({ALL_BUSY})))")
    assert classify(phi).names() == ("ABbar",)
    assert check_ab(scheduler, phi).holds


def test_single_request_can_be_delayed(scheduler):
    phi = parse_formula(f"[A](r0 -> [A](e0 | ({ALL_BUSY})))")
    assert check_ab(scheduler, phi).result == "fails"


def test_process_one_can_starve(scheduler):
    phi = parse_formula("x0 -> <~B> x0")
    verdict = check_ab(scheduler, phi)
    assert verdict.holds


def test_starvation_witness_states(scheduler):
    # Initial tracks carrying the marker letter stay within the four
    # scheduler/process-0 states.
    from intervalmc.model import enumerate_tracks

    for rho in enumerate_tracks(scheduler, 5, start="w0"):
        if "x0" in track_label(scheduler, rho):
            assert set(rho) <= {"w0", "w1", "w6", "w7"}
