import random
from fractions import Fraction

import pytest

from oracles import (
    boson_graded_dims,
    boson_state_word,
    boson_vec_as_dict,
    normal_order_boson,
    oracle_f,
    oracle_h,
)
from wakimoto import (
    WEYL_VACUUM,
    ChiSeries,
    ClosureConfig,
    WeylAction,
    WeylState,
    WeylVec,
    affine_relation_check,
    apply_a,
    apply_astar,
    apply_e,
    apply_f,
    apply_h,
    enumerate_weyl_basis,
    evidence_agrees,
    wakimoto_ops,
    wakimoto_probe,
    weyl_charge,
    weyl_state_key,
    weyl_vacuum_vec,
    weyl_weight,
)

CHI = ChiSeries({1: Fraction(2), 0: Fraction(-3, 2), -2: Fraction(5)})


def test_state_validation_and_str():
    st = WeylState((1, 1, 2), (0, 0, 3))
    assert str(st) == "a(-2) a(-1)^2 a*(-3) a*(0)^2 |0>"
    assert str(WEYL_VACUUM) == "|0>"
    with pytest.raises(ValueError):
        WeylState((0,), ())  # a-mode must be >= 1
    with pytest.raises(ValueError):
        WeylState((), (-1,))
    with pytest.raises(ValueError):
        WeylState((2, 1), ())  # must be ascending


def test_grading():
    st = WeylState((1, 3), (0, 2))
    assert weyl_weight(st) == 6
    assert weyl_charge(st) == 0
    assert weyl_charge(WeylState((1,), ())) == -1
    assert weyl_state_key(WEYL_VACUUM) < weyl_state_key(st)


def test_annihilators_on_vacuum():
    vac = weyl_vacuum_vec()
    assert apply_a(0, vac).is_zero()
    assert apply_a(3, vac).is_zero()
    assert apply_astar(1, vac).is_zero()
    # a*(0) creates: the zero mode is two-sided
    assert apply_astar(0, vac) == WeylVec.basis(WeylState((), (0,)))


def test_multiplicity_contraction():
    two = WeylVec.basis(WeylState((), (1, 1)))  # a*(-1)^2 |0>
    assert apply_a(1, two) == 2 * WeylVec.basis(WeylState((), (1,)))
    double = WeylVec.basis(WeylState((2, 2), ()))
    assert apply_astar(2, double) == -2 * WeylVec.basis(WeylState((2,), ()))


def test_creation_inserts():
    v = apply_a(-2, apply_a(-1, weyl_vacuum_vec()))
    assert v == WeylVec.basis(WeylState((1, 2), ()))
    v2 = apply_astar(-1, apply_astar(-1, weyl_vacuum_vec()))
    assert v2 == WeylVec.basis(WeylState((), (1, 1)))


def test_random_words_match_rewriting_oracle():
    rng = random.Random(424242)
    kinds = ("a", "a*")
    for _ in range(150):
        word = []
        for _ in range(rng.randint(0, 6)):
            kind = rng.choice(kinds)
            n = rng.randint(-2, 2)
            word.append((kind, n))
        v = weyl_vacuum_vec()
        for kind, n in reversed(word):
            v = apply_a(n, v) if kind == "a" else apply_astar(n, v)
        assert boson_vec_as_dict(v) == normal_order_boson(word), word


def test_state_word_round_trip():
    st = WeylState((1, 2), (0, 3))
    got = normal_order_boson(boson_state_word(st))
    assert got == {(st.a_modes, st.astar_modes): Fraction(1)}


def test_h_on_vacuum_is_minus_chi0():
    assert apply_h(0, weyl_vacuum_vec(), CHI) == Fraction(3, 2) * weyl_vacuum_vec()
    chi2 = ChiSeries({0: 2})
    assert apply_h(0, weyl_vacuum_vec(), chi2) == -2 * weyl_vacuum_vec()


def test_e_is_current_a():
    v = WeylVec.basis(WeylState((1,), (0,)))
    assert apply_e(2, v, CHI) == apply_a(2, v)
    assert apply_e(-1, v) == apply_a(-1, v)


@pytest.mark.parametrize("c", [Fraction(-1), Fraction(0), Fraction(1, 2)])
def test_f_zero_mode_reads_the_tail(c):
    # chi = 2/z + c: f(0) a(-1)|0> = c |0>
    chi = ChiSeries({0: 2, -1: c})
    v = WeylVec.basis(WeylState((1,), ()))
    assert apply_f(0, v, chi) == c * weyl_vacuum_vec()


def test_ef_bracket_on_vacuum():
    chi2 = ChiSeries({0: 2})
    vac = weyl_vacuum_vec()
    lhs = apply_e(1, apply_f(-1, vac, chi2)) - apply_f(-1, apply_e(1, vac), chi2)
    assert lhs == -4 * vac  # h(0) - 2*1*delta = -2 - 2
    hh = apply_h(1, apply_h(-1, vac, chi2), chi2) - apply_h(-1, apply_h(1, vac, chi2), chi2)
    assert hh == -4 * vac


def test_h_f_match_brute_force_oracle():
    states = [
        WEYL_VACUUM,
        WeylState((1,), ()),
        WeylState((), (0, 2)),
        WeylState((1, 3), (0,)),
    ]
    for st in states:
        v = WeylVec.basis(st)
        for n in range(-2, 3):
            assert boson_vec_as_dict(apply_h(n, v, CHI)) == oracle_h(n, st, CHI), ("h", n, st)
            assert boson_vec_as_dict(apply_f(n, v, CHI)) == oracle_f(n, st, CHI), ("f", n, st)


def test_affine_relations_on_mixed_vector():
    v = WeylVec.basis(WeylState((1,), (0,))) - 2 * WeylVec.basis(WeylState((), (2,)))
    action = WeylAction(CHI)
    for m in range(-2, 3):
        for n in range(-2, 3):
            for name, okay in affine_relation_check(m, n, v, CHI, action):
                assert okay, (name, m, n)


def test_action_memoization_is_transparent():
    action = WeylAction(CHI)
    v = WeylVec.basis(WeylState((1, 2), (0,)))
    first = action.f(1, v)
    assert first == apply_f(1, v, CHI)
    assert action.f(1, v) == first  # cached second call
    assert action.h(-1, v) == apply_h(-1, v, CHI)
    assert action.e(2, v) == apply_e(2, v, CHI)


class TestEnumeration:
    def test_counts(self):
        assert len(enumerate_weyl_basis(Fraction(3), (-2, 2))) == 53
        assert len(enumerate_weyl_basis(Fraction(4), (-3, 3))) == 151

    def test_matches_generating_function(self):
        got = {}
        for st in enumerate_weyl_basis(Fraction(3), (-2, 2)):
            key = (int(weyl_weight(st)), weyl_charge(st))
            got[key] = got.get(key, 0) + 1
        assert got == boson_graded_dims(3, (-2, 2))

    def test_sorted_and_in_window(self):
        states = enumerate_weyl_basis(Fraction(2), (-1, 3))
        keys = [weyl_state_key(s) for s in states]
        assert keys == sorted(keys)
        assert all(weyl_weight(s) <= 2 and -1 <= weyl_charge(s) <= 3 for s in states)


def test_wakimoto_ops_labels():
    cfg = ClosureConfig(weight_cutoff=Fraction(1), charge_window=(-1, 1), excursion=Fraction(0))
    labels = [lbl for lbl, _ in wakimoto_ops(ChiSeries({0: 2, -1: 1}), cfg)]
    assert labels == [
        f"{k}({n})" for n in range(-2, 3) for k in ("e", "h", "f")
    ]


class TestProbe:
    def test_irreducible_side(self):
        cfg = ClosureConfig(weight_cutoff=Fraction(2), charge_window=(-1, 1), excursion=Fraction(2))
        ev = wakimoto_probe(ChiSeries({1: 1}), cfg)
        assert ev.all_cyclic
        assert ev.non_cyclic == ()
        assert ev.probed == 15
        assert ev.candidates == ()
        assert evidence_agrees("irreducible", ev)
        assert not evidence_agrees("reducible", ev)

    def test_reducible_side(self):
        cfg = ClosureConfig(weight_cutoff=Fraction(2), charge_window=(-2, 2), excursion=Fraction(2))
        ev = wakimoto_probe(ChiSeries({0: 2}), cfg)
        assert not ev.all_cyclic
        assert ev.non_cyclic == ("a(-1) |0>", "a(-1)^2 |0>")
        assert ev.probed == 24
        assert [(d["weight"], d["charge"], d["dimension"]) for d in ev.candidates] == [(1, -1, 1)]
        assert ev.candidates[0]["vectors"] == [[{"state": "a(-1) |0>", "value": "1"}]]
        assert evidence_agrees("reducible", ev)
        assert not evidence_agrees("irreducible", ev)

    def test_evidence_json_shape(self):
        cfg = ClosureConfig(weight_cutoff=Fraction(1), charge_window=(-1, 1), excursion=Fraction(1))
        ev = wakimoto_probe(ChiSeries({1: 1}), cfg)
        obj = ev.to_json_obj()
        assert set(obj) == {"all_cyclic", "non_cyclic", "candidates", "probed", "cfg"}
        assert obj["cfg"] == cfg.to_json_obj()
