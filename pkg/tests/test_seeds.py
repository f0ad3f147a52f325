"""Tests for seed splitting."""

from __future__ import annotations

import pytest

from swbeam.errors import InvalidParameterError
from swbeam.seeds import Stream, derive_rng, unit_seed


class TestDeriveRng:
    def test_same_key_same_numbers(self) -> None:
        a = derive_rng(7, Stream.BEAMS, 1, 2).random(5)
        b = derive_rng(7, Stream.BEAMS, 1, 2).random(5)
        assert a.tolist() == b.tolist()

    @pytest.mark.parametrize(
        ("left", "right"),
        [
            ((7, Stream.BEAMS, 1), (7, Stream.TRAFFIC, 1)),
            ((7, Stream.BEAMS, 1), (7, Stream.BEAMS, 2)),
            ((7, Stream.BEAMS, 1), (8, Stream.BEAMS, 1)),
            ((7, Stream.BEAMS, 1, 0), (7, Stream.BEAMS, 1)),
        ],
    )
    def test_keys_are_independent(
        self, left: tuple[int, ...], right: tuple[int, ...]
    ) -> None:
        seed_a, stream_a, *rest_a = left
        seed_b, stream_b, *rest_b = right
        a = derive_rng(seed_a, Stream(stream_a), *rest_a).random(4)
        b = derive_rng(seed_b, Stream(stream_b), *rest_b).random(4)
        assert a.tolist() != b.tolist()

    def test_rejects_negative_seed(self) -> None:
        with pytest.raises(InvalidParameterError, match="non-negative"):
            derive_rng(-1, Stream.TOPOLOGY)

    def test_rejects_negative_index(self) -> None:
        with pytest.raises(InvalidParameterError, match="indices"):
            derive_rng(1, Stream.TOPOLOGY, -2)


def test_unit_seed_is_stable_and_bounded() -> None:
    seeds = {unit_seed(3, Stream.TOPOLOGY, 0, replicate) for replicate in range(50)}
    assert len(seeds) == 50
    assert all(0 <= seed < 2**31 - 1 for seed in seeds)
    assert unit_seed(3, Stream.TOPOLOGY, 0, 4) == unit_seed(3, Stream.TOPOLOGY, 0, 4)
