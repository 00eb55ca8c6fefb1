import json
import random
from fractions import Fraction

import pytest

from oracles import fermion_graded_dims, fermion_vec_as_dict, normal_order_fermion
from wakimoto import (
    MINUS,
    PLUS,
    VACUUM,
    ChiParseError,
    FermionState,
    FermionVec,
    apply_psi,
    apply_psi_dmode,
    as_dmode,
    charge,
    check_tilde,
    enumerate_basis,
    fmt_halfodd,
    graded_dimension,
    parse_halfodd,
    parse_state,
    state_key,
    vacuum_vec,
    vec_from_json_obj,
    weight,
)


def test_halfodd_helpers():
    assert as_dmode(Fraction(3, 2)) == 3
    assert as_dmode(Fraction(-1, 2)) == -1
    assert as_dmode("5/2") == 5
    assert fmt_halfodd(-7) == "-7/2"
    assert parse_halfodd(" 3/2 ") == 3
    for bad in (Fraction(1), Fraction(3, 4), 2):
        with pytest.raises(ValueError):
            as_dmode(bad)


def test_state_validation():
    FermionState((5, 1), (3,))  # fine
    with pytest.raises(ValueError):
        FermionState((1, 3), ())  # must decrease
    with pytest.raises(ValueError):
        FermionState((3, 3), ())  # strictly
    with pytest.raises(ValueError):
        FermionState((2,), ())  # even doubled mode
    with pytest.raises(ValueError):
        FermionState((-1,), ())


def test_from_modes_sorts():
    st = FermionState.from_modes(lam=[Fraction(1, 2), Fraction(5, 2)], mu=["3/2"])
    assert st == FermionState((5, 1), (3,))


def test_weight_charge_and_order():
    st = FermionState((3, 1), (5,))
    assert weight(st) == Fraction(9, 2)
    assert charge(st) == -1
    assert weight(VACUUM) == 0 and charge(VACUUM) == 0
    assert state_key(VACUUM) < state_key(st)


def test_str_and_parse_state_round_trip():
    st = FermionState((5, 1), (3,))
    assert str(st) == "Psi-(-5/2) Psi-(-1/2) Psi+(-3/2) |0>"
    assert parse_state(str(st)) == st
    assert parse_state("|0>") == VACUUM
    for states in (enumerate_basis(Fraction(4)), enumerate_basis(Fraction(3), ambient=True)):
        for s in states:
            assert parse_state(str(s)) == s


@pytest.mark.parametrize("bad", ["", "Psi+(-3/2)", "Psi*(-3/2) |0>", "Psi+(3/2) |0>", "Psi+(-2/2) |0> extra"])
def test_parse_state_rejects_noncanonical(bad):
    with pytest.raises(ValueError):
        parse_state(bad)


def test_vec_arithmetic_and_zero_dropping():
    a = FermionVec.basis(FermionState((1,), ()))
    b = FermionVec.basis(FermionState((3,), ()))
    v = 2 * a + b / 3
    assert v.coeff(FermionState((1,), ())) == 2
    assert v.coeff(FermionState((3,), ())) == Fraction(1, 3)
    assert (v - v).is_zero()
    assert (-v + v).is_zero()
    assert (0 * v).is_zero()
    assert v.max_weight() == Fraction(3, 2)
    assert v.charges() == {-1}


def test_vec_equality_ignores_ambient_flag():
    st = FermionState((1,), ())
    assert FermionVec.basis(st, ambient=True) == FermionVec.basis(st, ambient=False)
    assert FermionVec.zero(True) == FermionVec.zero(False)


def test_ambient_flag_enforced_and_propagated():
    needs_f = FermionState((), (1,))
    with pytest.raises(ValueError):
        FermionVec({needs_f: Fraction(1)}, ambient=False)
    v = FermionVec.basis(needs_f)  # infers ambient
    assert v.ambient
    assert (v + vacuum_vec()).ambient
    assert (vacuum_vec() - v).ambient
    assert not (vacuum_vec() + vacuum_vec()).ambient
    # creating Psi+(-1/2) forces the ambient flag even from a charged vector
    forced = apply_psi(PLUS, Fraction(-1, 2), vacuum_vec())
    assert forced.ambient and forced.coeff(needs_f) == 1


def test_vec_json_round_trip():
    v = FermionVec.from_items(
        [
            (FermionState((3, 1), ()), Fraction(-2, 3)),
            (FermionState((), (3,)), Fraction(5)),
        ]
    )
    obj = v.to_json_obj()
    assert obj == [
        {"state": "Psi+(-3/2) |0>", "value": "5"},
        {"state": "Psi-(-3/2) Psi-(-1/2) |0>", "value": "-2/3"},
    ]
    assert vec_from_json_obj(json.loads(json.dumps(obj))) == v


def test_vec_from_json_names_bad_field():
    with pytest.raises(ChiParseError, match=r"terms\[1\].value"):
        vec_from_json_obj([{"state": "|0>", "value": "1"}, {"state": "|0>", "value": "x"}])


# -- single-generator action ------------------------------------------------


def test_annihilator_kills_vacuum():
    assert apply_psi(PLUS, Fraction(1, 2), vacuum_vec()).is_zero()
    assert apply_psi(MINUS, Fraction(7, 2), vacuum_vec()).is_zero()


def test_contraction_on_single_creator():
    v = apply_psi(MINUS, Fraction(-3, 2), vacuum_vec())
    assert apply_psi(PLUS, Fraction(3, 2), v) == vacuum_vec()


def test_insertion_sign():
    v = FermionVec.basis(FermionState((3,), ()))
    got = apply_psi(MINUS, Fraction(-1, 2), v)
    assert got == -FermionVec.basis(FermionState((3, 1), ()))


def test_pauli_exclusion():
    v = FermionVec.basis(FermionState((3,), ()))
    assert apply_psi(MINUS, Fraction(-3, 2), v).is_zero()


def test_sweep_sign_through_word():
    # Psi+(1/2) must pass Psi-(-3/2) before contracting with Psi-(-1/2).
    v = FermionVec.basis(FermionState((3, 1), ()), ambient=True)
    got = apply_psi(PLUS, Fraction(1, 2), v)
    assert got == -FermionVec.basis(FermionState((3,), ()))


def test_apply_psi_rejects_bad_input():
    with pytest.raises(ValueError):
        apply_psi("x", Fraction(1, 2), vacuum_vec())
    with pytest.raises(ValueError):
        apply_psi_dmode(PLUS, 2, vacuum_vec())


def test_random_words_match_rewriting_oracle():
    rng = random.Random(20260825)
    dmodes = [-5, -3, -1, 1, 3, 5]
    for _ in range(200):
        word = [
            (rng.choice((MINUS, PLUS)), rng.choice(dmodes))
            for _ in range(rng.randint(0, 6))
        ]
        v = vacuum_vec(ambient=True)
        for sp, d in reversed(word):
            v = apply_psi_dmode(sp, d, v)
        want = normal_order_fermion([(sp, d) for sp, d in word])
        assert fermion_vec_as_dict(v) == want, word


# -- enumeration ------------------------------------------------------------


def test_basis_counts_at_small_weights():
    assert len(enumerate_basis(Fraction(5, 2))) == 8
    assert len(enumerate_basis(Fraction(4))) == 20
    assert len(enumerate_basis(Fraction(5))) == 33
    assert len(enumerate_basis(Fraction(5), ambient=True)) == 59


def test_enumerate_is_sorted_and_within_bound():
    states = enumerate_basis(Fraction(4), ambient=True)
    keys = [state_key(s) for s in states]
    assert keys == sorted(keys)
    assert all(weight(s) <= 4 for s in states)
    assert len(states) == len(set(states))


def test_graded_dimension_matches_generating_function():
    for ambient in (False, True):
        got = {
            (int(w * 2), c): n
            for (w, c), n in graded_dimension(Fraction(6), ambient).items()
        }
        assert got == fermion_graded_dims(12, ambient=ambient)


def test_check_tilde():
    assert check_tilde(vacuum_vec())
    for st in enumerate_basis(Fraction(4)):
        assert check_tilde(FermionVec.basis(st))
    bad = FermionVec.basis(FermionState((), (1,)))
    assert not check_tilde(bad)
    assert not check_tilde(bad + FermionVec.basis(FermionState((3,), ())))
