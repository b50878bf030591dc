"""Rotation group: enumeration, relators, and the permutation isomorphism."""

from trichrome.groups import (
    QUARTER_TURN_PRESENTATION,
    ROTATION_WORDS,
    SWAP_PRESENTATION,
    TRANSPOSITION_WORDS,
    TRANSPOSITIONS,
    PhaseClassMatrix,
    check_iso_pair,
    check_relators,
    enumerate_group,
    group_report,
    order_profile,
    permutation_order_profile,
    qubit_rotations,
)


def test_rotations_generate_order_24():
    table = enumerate_group(qubit_rotations())
    assert table.order == 24


def test_order_profile_matches_four_point_symmetric_group():
    profile = order_profile(enumerate_group(qubit_rotations()))
    assert profile == {1: 1, 2: 9, 3: 8, 4: 6}
    assert profile == permutation_order_profile(4)


def test_each_rotation_has_order_four():
    for m in qubit_rotations().values():
        cls = PhaseClassMatrix.from_matrix(m)
        assert cls.order() == 4
        assert cls.matmul(cls.inverse()).is_identity()


def test_quarter_turn_relators_hold_for_rotations():
    table = enumerate_group(qubit_rotations())
    assert check_relators(QUARTER_TURN_PRESENTATION, table.assignment())


def test_swap_relators_hold_for_transpositions():
    assert check_relators(SWAP_PRESENTATION, TRANSPOSITIONS)


def test_relator_check_rejects_wrong_assignment():
    broken = dict(TRANSPOSITIONS)
    broken["t1"] = (1, 2, 0, 3)  # a 3-cycle does not square to the identity
    assert not check_relators(SWAP_PRESENTATION, broken)


def test_iso_pair_maps_are_mutually_inverse():
    assert check_iso_pair()


def test_iso_pair_rejects_corrupted_dictionary():
    bad = dict(TRANSPOSITION_WORDS)
    bad["t1"] = ("r",)  # a quarter turn is not an involution
    assert not check_iso_pair(f_map=bad)
    bad_g = dict(ROTATION_WORDS)
    bad_g["r"] = ("t1",)
    assert not check_iso_pair(g_map=bad_g)


def test_group_report_shape():
    report = group_report()
    assert report["order"] == 24
    assert report["order_profile"] == report["symmetric_profile"]
    assert report["quarter_turn_relators"] is True
    assert report["iso_pair"] is True
