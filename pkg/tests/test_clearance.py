"""Mandatory and discretionary clearance values, leakage probability."""

import pytest

from policyfuse.clearance import (
    AccessMatrix,
    AccessRequest,
    ClearanceScale,
    discretionary_clearance,
    leakage_probability,
    mandatory_clearance,
)
from policyfuse.errors import OutOfRangeError, UnknownLabelError
from policyfuse.lattice import SecurityLattice

from helpers import BRANCH8_ELEMENTS, BRANCH8_ORDER, CHAIN4_ELEMENTS, CHAIN4_ORDER, make_chain


@pytest.fixture(scope="module")
def chain4():
    return SecurityLattice(CHAIN4_ELEMENTS, CHAIN4_ORDER)


@pytest.fixture(scope="module")
def branch8():
    return SecurityLattice(BRANCH8_ELEMENTS, BRANCH8_ORDER)


def request(types, subject="s", obj="o"):
    return AccessRequest(subject=subject, object=obj, access=frozenset(types))


class TestScale:
    def test_valid(self):
        assert ClearanceScale(m=4).m == 4

    @pytest.mark.parametrize("bad", [0, -1, 2.5, "4"])
    def test_invalid(self, bad):
        with pytest.raises(ValueError):
            ClearanceScale(m=bad)


class TestMandatory:
    def test_chain_subject_below_object(self, chain4):
        # subject at level 1 reading an object at level 2, m = 4, l = 4
        assert mandatory_clearance(chain4, "1", "2", ClearanceScale(4)) == -1.0

    def test_equal_labels_zero(self, chain4, branch8):
        for lat in (chain4, branch8):
            for label in lat.elements:
                assert mandatory_clearance(lat, label, label, ClearanceScale(4)) == 0.0

    def test_incomparable_labels(self, branch8):
        # distances to the join are 1 and 2; m chosen so m/level_count = 1
        assert mandatory_clearance(branch8, "2ab", "1c", ClearanceScale(8)) == -1.0

    def test_incomparable_equal_distances_yield_zero(self, branch8):
        # both one step below their join: spread 0, clearance 0 (still denies)
        assert mandatory_clearance(branch8, "1a", "1b", ClearanceScale(8)) == 0.0

    def test_scale_factor_applies(self, branch8):
        assert mandatory_clearance(branch8, "2ab", "1c", ClearanceScale(4)) == -0.5

    def test_antisymmetric_under_swap_when_comparable(self, chain4, branch8):
        scale = ClearanceScale(8)
        for lat in (chain4, branch8):
            for a in lat.elements:
                for b in lat.elements:
                    if lat.leq(a, b) or lat.leq(b, a):
                        assert mandatory_clearance(
                            lat, a, b, scale
                        ) == -mandatory_clearance(lat, b, a, scale)

    def test_incomparable_never_positive(self, branch8):
        scale = ClearanceScale(8)
        for a in branch8.elements:
            for b in branch8.elements:
                if not branch8.leq(a, b) and not branch8.leq(b, a):
                    assert mandatory_clearance(branch8, a, b, scale) <= 0.0

    def test_chain_closed_form(self):
        # signed chain distance must equal (rank difference) * m/l on chains
        scale = ClearanceScale(5)
        for length in range(2, 17):
            chain = make_chain(length)
            for a in chain.elements:
                for b in chain.elements:
                    expected = (chain.chain_rank(a) - chain.chain_rank(b)) * scale.m / length
                    assert mandatory_clearance(chain, a, b, scale) == pytest.approx(
                        expected, abs=1e-15
                    )

    def test_unknown_label(self, chain4):
        with pytest.raises(UnknownLabelError):
            mandatory_clearance(chain4, "9", "2", ClearanceScale(4))


class TestDiscretionary:
    MATRIX = AccessMatrix({("s", "o"): frozenset({"r", "w", "a"})})

    def test_surplus_branch(self):
        # one requested and granted, two granted but unrequested
        value = discretionary_clearance(request({"r"}), self.MATRIX, 4, ClearanceScale(4))
        assert value == 2.0

    def test_denied_branch(self):
        # frozen from the denied-count formula: k=1 of {r,f} missing, -1*4/4
        value = discretionary_clearance(request({"r", "f"}), self.MATRIX, 4, ClearanceScale(4))
        assert value == -1.0

    def test_exact_match_is_zero(self):
        matrix = AccessMatrix({("s", "o"): frozenset({"r"})})
        assert discretionary_clearance(request({"r"}), matrix, 4, ClearanceScale(4)) == 0.0

    def test_missing_cell_denies_everything(self):
        value = discretionary_clearance(request({"r", "w"}), AccessMatrix(), 4, ClearanceScale(4))
        assert value == -2.0

    def test_negative_iff_any_denied(self):
        scale = ClearanceScale(4)
        universe = ["r", "w", "a", "f"]
        for granted_mask in range(16):
            granted = frozenset(t for i, t in enumerate(universe) if granted_mask >> i & 1)
            matrix = AccessMatrix({("s", "o"): granted})
            for requested_mask in range(1, 16):
                requested = frozenset(t for i, t in enumerate(universe) if requested_mask >> i & 1)
                value = discretionary_clearance(request(requested), matrix, 4, scale)
                if requested - granted:
                    assert value < 0
                else:
                    assert value >= 0
                assert abs(value) <= scale.m

    def test_empty_request_rejected(self):
        with pytest.raises(ValueError):
            request(set())


class TestLeakage:
    def test_endpoints(self):
        scale = ClearanceScale(4)
        assert leakage_probability(0.0, scale) == 0.5
        assert leakage_probability(4.0, scale) == 0.0
        assert leakage_probability(-4.0, scale) == 1.0

    def test_strictly_decreasing(self):
        scale = ClearanceScale(5)
        points = [-5 + i for i in range(11)]
        values = [leakage_probability(float(p), scale) for p in points]
        assert all(earlier > later for earlier, later in zip(values, values[1:]))

    def test_out_of_range(self):
        with pytest.raises(OutOfRangeError):
            leakage_probability(4.5, ClearanceScale(4))
        with pytest.raises(OutOfRangeError):
            leakage_probability(-4.5, ClearanceScale(4))


class TestAccessMatrix:
    def test_missing_cell_is_empty(self):
        assert AccessMatrix().granted("x", "y") == frozenset()

    def test_cell_lookup(self):
        matrix = AccessMatrix({("s", "o"): frozenset({"r"})})
        assert matrix.granted("s", "o") == {"r"}
        assert matrix.granted("s", "other") == frozenset()
