import random
from fractions import Fraction

import pytest

from wakimoto import (
    MINUS,
    PLUS,
    ChiSeries,
    ClosureConfig,
    FermionState,
    FermionVec,
    OperatorWord,
    a_module_ops,
    anticommutator_check,
    apply_Gminus,
    apply_Gplus,
    apply_psi,
    apply_word,
    enumerate_basis,
    extract_omega,
    gminus_string_on_omega,
    lowering_ladder_word,
    omega,
    omega_vec,
    raising_ladder_word,
    same_species_anticommutator,
    scalar_S,
    scalar_T,
    schur_at_minus_chi,
    singular_w,
    vacuum_filling_word,
    vacuum_vec,
)

POLE_TAIL = ChiSeries(
    {2: Fraction(1, 3), 1: 2, 0: Fraction(-5, 7), -1: 4, -3: -2}
)


def test_gplus_is_scaled_psi_plus():
    v = FermionVec.basis(FermionState((3, 1), ()), ambient=True)
    for i in (-2, -1, 1, 3):
        mode = Fraction(2 * i - 1, 2)
        assert apply_Gplus(i, v) == Fraction(-i) * apply_psi(PLUS, mode, v)
    assert apply_Gplus(0, v).is_zero()


def test_gminus_twist_terms():
    chi = ChiSeries({0: Fraction(5), 1: Fraction(7)})
    got = apply_Gminus(0, vacuum_vec(), chi)
    want = 5 * FermionVec.basis(FermionState((1,), ())) + 7 * FermionVec.basis(
        FermionState((3,), ())
    )
    assert got == want
    # untwisted: single mode with coefficient chi_0 - i
    got1 = apply_Gminus(2, FermionVec.basis(omega(2)), ChiSeries({0: 3}))
    assert got1 == apply_psi(MINUS, Fraction(3, 2), FermionVec.basis(omega(2)))


def test_even_scalars():
    chi = ChiSeries({0: Fraction(3), -1: Fraction(1, 2)})
    assert scalar_T(0, chi) == Fraction(-3, 2)
    assert scalar_T(-1, chi) == Fraction(-1, 4)
    assert scalar_S(0, chi) == Fraction(-3, 4)
    assert scalar_S(-1, chi) == 0  # factor (n+1) kills n = -1
    assert scalar_S(2, chi) == 0 and scalar_T(5, chi) == 0


@pytest.mark.parametrize("chi", [ChiSeries({0: 3, -1: 1}), POLE_TAIL])
def test_mixed_anticommutators_close_on_scalars(chi):
    vecs = [
        vacuum_vec(),
        FermionVec.basis(FermionState((3, 1), (3,))),
        omega_vec(2) - 3 * FermionVec.basis(FermionState((1,), ())),
    ]
    halves = [Fraction(d, 2) for d in range(-5, 6, 2)]
    for v in vecs:
        for r in halves:
            for s in halves:
                assert anticommutator_check(r, s, v, chi), (r, s)


@pytest.mark.parametrize("chi", [ChiSeries({0: 3, -1: 1}), POLE_TAIL])
@pytest.mark.parametrize("species", [PLUS, MINUS])
def test_same_species_anticommutators_vanish(species, chi):
    v = FermionVec.basis(FermionState((3,), (5, 3)))
    halves = [Fraction(d, 2) for d in range(-5, 6, 2)]
    for r in halves:
        for s in halves:
            assert same_species_anticommutator(species, r, s, v, chi).is_zero()


def test_omega_staircase():
    assert omega(1) == FermionState((), (3,))
    assert omega(3) == FermionState((), (7, 5, 3))
    assert omega_vec(2).coeff(FermionState((), (5, 3))) == 1
    with pytest.raises(ValueError):
        omega(0)


class TestOperatorWord:
    def test_validation(self):
        OperatorWord((("G+", 1), ("Psi-", -3)))
        with pytest.raises(ValueError):
            OperatorWord((("X", 1),))
        with pytest.raises(ValueError):
            OperatorWord((("G+", 2),))

    def test_str_and_json_round_trip(self):
        w = OperatorWord((("G-", 3), ("Psi+", -1)))
        assert str(w) == "G-(3/2) Psi+(-1/2)"
        assert str(OperatorWord()) == "1"
        assert OperatorWord.from_json_obj(w.to_json_obj()) == w
        assert w.to_json_obj() == [
            {"op": "G-", "mode": "3/2"},
            {"op": "Psi+", "mode": "-1/2"},
        ]

    def test_from_json_rejects_unknown_op(self):
        with pytest.raises(ValueError, match=r"ops\[0\].op"):
            OperatorWord.from_json_obj([{"op": "Q", "mode": "1/2"}])

    def test_apply_is_right_to_left(self):
        w = OperatorWord((("Psi+", 3), ("Psi-", -3)))
        # rightmost first: creates Psi-(-3/2) then annihilates against it
        assert apply_word(w, vacuum_vec()) == vacuum_vec()
        flipped = OperatorWord((("Psi-", -3), ("Psi+", 3)))
        assert apply_word(flipped, vacuum_vec()).is_zero()

    def test_gminus_requires_twist(self):
        with pytest.raises(ValueError, match="twist"):
            apply_word(OperatorWord((("G-", 1),)), vacuum_vec())


class TestExtraction:
    def test_staircase_extracts_itself(self):
        got = extract_omega(omega_vec(3))
        assert got.word == OperatorWord()
        assert got.omega_index == 3
        assert got.scalar == 1

    def test_bare_minus_word_lands_on_vacuum(self):
        got = extract_omega(FermionVec.basis(FermionState((1,), ())))
        assert got.word == OperatorWord((("G+", 1),))
        assert got.omega_index is None
        assert got.scalar == -1

    def test_longest_lam_wins(self):
        v = FermionVec.basis(FermionState((1,), (3,))) + 2 * omega_vec(1)
        got = extract_omega(v)
        assert got.word == OperatorWord((("G+", 1),))
        assert got.omega_index == 1
        assert got.scalar == -1

    def test_top_up_to_staircase(self):
        # mu = (5,) inside charge sector s = 2 needs a G+(-3/2) creation
        v = FermionVec.basis(FermionState((1,), (5,)))
        got = extract_omega(v)
        assert got.omega_index == 2
        assert ("G+", -3) in got.word.ops and ("G+", 1) in got.word.ops
        assert apply_word(got.word, v) == got.scalar * omega_vec(2)

    def test_survivor_set_mixing_vacuum_and_staircase(self):
        # surviving mu-set {(), (3,)}: the empty term must not confuse the
        # charge-sector choice, and the full staircase top-up kills the rest
        v = FermionVec.basis(FermionState((1,), ())) + FermionVec.basis(
            FermionState((1,), (3,))
        )
        got = extract_omega(v)
        assert got.word == OperatorWord((("G+", -3), ("G+", 1)))
        assert got.omega_index == 1
        assert got.scalar == -1
        assert apply_word(got.word, v) == -omega_vec(1)

    def test_rejects_zero_and_ambient(self):
        with pytest.raises(ValueError):
            extract_omega(FermionVec.zero())
        with pytest.raises(ValueError):
            extract_omega(FermionVec.basis(FermionState((), (1,))))

    def test_random_vectors_land_exactly(self):
        rng = random.Random(99)
        pool = enumerate_basis(Fraction(4))
        for _ in range(40):
            picks = rng.sample(pool, rng.randint(1, 4))
            v = FermionVec.from_items(
                (st, Fraction(rng.randint(1, 5), rng.randint(1, 3))) for st in picks
            )
            if v.is_zero():
                continue
            got = extract_omega(v)
            assert all(label == "G+" for label, _ in got.word.ops)
            image = apply_word(got.word, v)
            target = vacuum_vec() if got.omega_index is None else omega_vec(got.omega_index)
            assert image == got.scalar * target
            assert got.scalar != 0


class TestLoweringString:
    def test_matches_schur_value(self):
        rng = random.Random(3)
        for ell in (1, 2, 3, 4):
            for _ in range(6):
                coeffs = {0: Fraction(ell + 1)}
                for k in range(1, ell + 2):  # one index below -ell: must be inert
                    if rng.random() < 0.8:
                        coeffs[-k] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                chi = ChiSeries(coeffs)
                want = Fraction((-1) ** ell) * Fraction(
                    __import__("math").factorial(ell)
                ) * schur_at_minus_chi(ell, chi)
                assert gminus_string_on_omega(ell, chi) == want

    def test_requires_matching_level(self):
        with pytest.raises(ValueError):
            gminus_string_on_omega(2, ChiSeries({0: 2}))
        with pytest.raises(ValueError):
            gminus_string_on_omega(2, ChiSeries({0: 3, 1: 1}))
        with pytest.raises(ValueError):
            gminus_string_on_omega(0, ChiSeries({0: 1}))


class TestSingularVector:
    def test_ell_one_is_the_staircase(self):
        assert singular_w(1, ChiSeries({0: 2})) == omega_vec(1)

    def test_ell_two_hand_value(self):
        chi = ChiSeries({0: 3, -1: 1, -2: 1})
        assert schur_at_minus_chi(2, chi) == 0
        w = singular_w(2, chi)
        want = FermionVec.basis(FermionState((), (3,))) - FermionVec.basis(
            FermionState((), (5,))
        )
        assert w == want

    @pytest.mark.parametrize(
        "ell, chi",
        [
            (1, ChiSeries({0: 2})),
            (2, ChiSeries({0: 3, -1: 1, -2: 1})),
        ],
    )
    def test_annihilated_when_schur_vanishes(self, ell, chi):
        w = singular_w(ell, chi)
        for n in range(1, ell + 3):
            assert apply_Gplus(n, w).is_zero()
            assert apply_Gminus(n, w, chi).is_zero()

    def test_requires_matching_level(self):
        with pytest.raises(ValueError):
            singular_w(1, ChiSeries({0: 3}))
        with pytest.raises(ValueError):
            singular_w(0, ChiSeries({0: 1}))


class TestLadders:
    def test_words(self):
        assert str(lowering_ladder_word(3, 1)) == "G-(5/2) G-(7/2)"
        assert str(raising_ladder_word(1, 3)) == "G+(-7/2) G+(-5/2)"
        assert str(vacuum_filling_word(1)) == "G-(-3/2) G-(-1/2)"
        with pytest.raises(ValueError):
            lowering_ladder_word(2, 2)
        with pytest.raises(ValueError):
            raising_ladder_word(3, 1)
        with pytest.raises(ValueError):
            vacuum_filling_word(-1)

    def test_descent_constant(self):
        chi = ChiSeries({0: 5})  # ell = 4
        img = apply_word(lowering_ladder_word(3, 1), omega_vec(3), chi)
        assert img == 2 * omega_vec(1)  # (4-2)(4-3)

    def test_descent_to_vacuum(self):
        chi = ChiSeries({0: 5})
        img = apply_word(lowering_ladder_word(2, 0), omega_vec(2), chi)
        assert img == 6 * vacuum_vec()  # (4-1)(4-2)

    def test_ascent_constant(self):
        img = apply_word(raising_ladder_word(1, 3), omega_vec(1))
        assert img == 6 * omega_vec(3)  # 3!/1!

    def test_ascent_from_vacuum(self):
        img = apply_word(raising_ladder_word(0, 2), vacuum_vec())
        assert img == 2 * omega_vec(2)

    def test_vacuum_filling_constant(self):
        chi = ChiSeries({0: 5})  # ell = 4
        img = apply_word(vacuum_filling_word(2), vacuum_vec(), chi)
        dense = FermionVec.basis(FermionState((5, 3, 1), ()))
        assert img == 210 * dense  # 5 * 6 * 7


def test_a_module_ops_window():
    cfg = ClosureConfig(weight_cutoff=Fraction(1), charge_window=(-2, 2), excursion=Fraction(0))
    labels = [lbl for lbl, _ in a_module_ops(ChiSeries({0: 2}), cfg)]
    assert labels == ["G+(1/2)", "G-(-1/2)", "G-(1/2)"]
    # a pole shifts the G- range upward
    labels_pole = [lbl for lbl, _ in a_module_ops(ChiSeries({1: 1}), cfg)]
    assert labels_pole == ["G+(1/2)", "G-(-1/2)", "G-(1/2)", "G-(3/2)"]
    # scalar modes never appear
    assert all(lbl.startswith("G") for lbl in labels_pole)


def test_a_module_ops_apply_within_window():
    cfg = ClosureConfig(weight_cutoff=Fraction(2), charge_window=(-2, 2), excursion=Fraction(1))
    chi = ChiSeries({0: 2, -1: 1})
    for lbl, op in a_module_ops(chi, cfg):
        out = op(omega_vec(1))
        assert isinstance(out, FermionVec)
