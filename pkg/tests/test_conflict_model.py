"""Scoring and classification against independent oracles."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conflictcoach.conflict_model import (
    ConflictStyle,
    QuestionnaireResponse,
    Side,
    Source,
    SubscaleScores,
    classify_style,
    finalize_profile,
    merge_adjustments,
    negative_pattern_highlights,
    score_questionnaire,
)
from conflictcoach.errors import IndexOutOfBounds, InvalidItemCount, ItemOutOfRange

# Independent item->subscale map, spelled out per item rather than as spans.
ORACLE_ITEM_MAP = {
    "compromise": [0, 1, 2],
    "avoidance": [3, 4],
    "interactional_reactivity": [5, 6],
    "separation": [7, 8],
    "domination": [9, 10],
    "submission": [11, 12],
}


def oracle_means(items: tuple[int, ...]) -> dict[str, Fraction]:
    out = {}
    for name, indices in ORACLE_ITEM_MAP.items():
        total = 0
        for i in indices:
            total += items[i]
        out[name] = Fraction(total, len(indices))
    return out


def oracle_style(scores: dict[str, float]) -> ConflictStyle:
    """Decision table recoded independently over plain floats."""
    engagement = 6.0 - (scores["avoidance"] + scores["separation"]) / 2.0
    negativity = (scores["domination"] + scores["interactional_reactivity"]) / 2.0
    if engagement < 3.0:
        return ConflictStyle.AVOIDANT
    if negativity >= 3.5 and scores["compromise"] < 3.0:
        return ConflictStyle.HOSTILE
    if negativity >= 3.5:
        return ConflictStyle.VOLATILE
    return ConflictStyle.VALIDATING


def resp(items, source=Source.LLM_ESTIMATED, partner=Side.SELF) -> QuestionnaireResponse:
    return QuestionnaireResponse(items=tuple(items), source=source, partner=partner)


class TestScoreQuestionnaire:
    def test_constant_input(self):
        scores = score_questionnaire(resp([3] * 13))
        assert all(v == 3 for v in scores.as_dict().values())

    def test_block_constant_input(self):
        scores = score_questionnaire(resp([5, 5, 5, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]))
        assert scores.compromise == 5
        assert scores.avoidance == 1
        assert scores.interactional_reactivity == 1
        assert scores.separation == 1
        assert scores.domination == 1
        assert scores.submission == 1

    def test_means_are_exact_fractions(self):
        scores = score_questionnaire(resp([1, 2, 4, 2, 3, 1, 2, 5, 4, 3, 2, 1, 4]))
        assert scores.compromise == Fraction(7, 3)
        assert scores.avoidance == Fraction(5, 2)

    def test_random_vectors_match_arithmetic_oracle(self, rng):
        for _ in range(200):
            items = tuple(rng.randint(1, 5) for _ in range(13))
            scores = score_questionnaire(resp(items))
            assert scores.as_dict() == oracle_means(items)

    def test_wrong_length_rejected(self):
        with pytest.raises(InvalidItemCount):
            resp([3] * 12)
        with pytest.raises(InvalidItemCount):
            resp([3] * 14)

    def test_out_of_range_rejected(self):
        with pytest.raises(ItemOutOfRange):
            resp([3] * 12 + [6])
        with pytest.raises(ItemOutOfRange):
            resp([0] + [3] * 12)


class TestClassifyStyle:
    def scores(self, compromise=3, avoidance=3, ir=3, separation=3, domination=3, submission=3):
        return SubscaleScores(
            compromise=Fraction(compromise),
            avoidance=Fraction(avoidance),
            interactional_reactivity=Fraction(ir),
            separation=Fraction(separation),
            domination=Fraction(domination),
            submission=Fraction(submission),
        )

    def test_spec_examples(self):
        assert classify_style(self.scores(avoidance=5, separation=5, compromise=1, ir=1, domination=1, submission=1)) is ConflictStyle.AVOIDANT
        assert classify_style(self.scores(compromise=5, avoidance=1, ir=1, separation=1, domination=1, submission=1)) is ConflictStyle.VALIDATING
        volatile = self.scores(domination=5, ir=5, compromise=4, avoidance=1, separation=1, submission=1)
        assert classify_style(volatile) is ConflictStyle.VOLATILE
        hostile = self.scores(domination=5, ir=5, compromise=1, avoidance=1, separation=1, submission=1)
        assert classify_style(hostile) is ConflictStyle.HOSTILE

    def test_boundaries(self):
        # engagement exactly 3.0 is engaged (rule 1 is strict).
        assert classify_style(self.scores(avoidance=3, separation=3, domination=1, ir=1)) is ConflictStyle.VALIDATING
        # negativity exactly 3.5 triggers rules 2/3 (inclusive).
        assert classify_style(self.scores(domination=4, ir=3, compromise=3, avoidance=1, separation=1)) is ConflictStyle.VOLATILE
        assert classify_style(self.scores(domination=4, ir=3, compromise=Fraction(5, 2), avoidance=1, separation=1)) is ConflictStyle.HOSTILE

    def test_random_grid_matches_oracle(self, rng):
        for _ in range(2000):
            values = {name: rng.randrange(2, 11) / 2 for name in ORACLE_ITEM_MAP}
            s = SubscaleScores(
                compromise=Fraction(values["compromise"]),
                avoidance=Fraction(values["avoidance"]),
                interactional_reactivity=Fraction(values["interactional_reactivity"]),
                separation=Fraction(values["separation"]),
                domination=Fraction(values["domination"]),
                submission=Fraction(values["submission"]),
            )
            assert classify_style(s) is oracle_style(values)

    def test_fraction_and_float_inputs_agree(self, rng):
        for _ in range(500):
            values = [rng.randrange(4, 21) / 4 for _ in range(6)]  # 0.25 grid
            as_floats = SubscaleScores(*values)
            as_fractions = SubscaleScores(*[Fraction(v) for v in values])
            assert classify_style(as_floats) is classify_style(as_fractions)

    @given(
        avoidance=st.integers(2, 10),
        separation=st.integers(2, 10),
        delta=st.integers(-4, 4),
        compromise=st.integers(2, 10),
        ir=st.integers(2, 10),
        domination=st.integers(2, 10),
    )
    @settings(max_examples=300)
    def test_shifting_avoidance_and_separation_together(
        self, avoidance, separation, delta, compromise, ir, domination
    ):
        """Engagement is the only consumer of avoidance/separation: a joint
        shift either lands in Avoidant or leaves the outcome unchanged."""
        lo, hi = 2, 10  # half-steps for 1.0..5.0
        if not (lo <= avoidance + delta <= hi and lo <= separation + delta <= hi):
            return
        base = SubscaleScores(
            compromise=Fraction(compromise, 2),
            avoidance=Fraction(avoidance, 2),
            interactional_reactivity=Fraction(ir, 2),
            separation=Fraction(separation, 2),
            domination=Fraction(domination, 2),
            submission=Fraction(3),
        )
        shifted = SubscaleScores(
            compromise=base.compromise,
            avoidance=Fraction(avoidance + delta, 2),
            interactional_reactivity=base.interactional_reactivity,
            separation=Fraction(separation + delta, 2),
            domination=base.domination,
            submission=base.submission,
        )
        a, b = classify_style(base), classify_style(shifted)
        if ConflictStyle.AVOIDANT not in (a, b):
            assert a is b


class TestMergeAdjustments:
    def test_empty_edits_flip_source_only(self):
        estimated = resp([3] * 13)
        merged = merge_adjustments(estimated, [])
        assert merged.items == estimated.items
        assert merged.source is Source.USER_ADJUSTED
        assert merged.partner is estimated.partner

    def test_single_edit(self):
        merged = merge_adjustments(resp([3] * 13), [(0, 5)])
        assert merged.items == (5,) + (3,) * 12

    def test_random_batches_match_replay_oracle(self, rng):
        for _ in range(100):
            items = tuple(rng.randint(1, 5) for _ in range(13))
            edits = [(rng.randrange(13), rng.randint(1, 5)) for _ in range(rng.randrange(0, 30))]
            merged = merge_adjustments(resp(items), edits)
            expected = dict(enumerate(items))
            for index, score in edits:  # last write wins
                expected[index] = score
            assert merged.items == tuple(expected[i] for i in range(13))

    def test_scoring_unaffected_by_empty_merge(self, rng):
        items = tuple(rng.randint(1, 5) for _ in range(13))
        original = resp(items)
        assert score_questionnaire(merge_adjustments(original, [])) == score_questionnaire(original)

    def test_bad_index_rejected(self):
        with pytest.raises(IndexOutOfBounds):
            merge_adjustments(resp([3] * 13), [(13, 4)])
        with pytest.raises(IndexOutOfBounds):
            merge_adjustments(resp([3] * 13), [(-1, 4)])

    def test_bad_score_rejected(self):
        with pytest.raises(ItemOutOfRange):
            merge_adjustments(resp([3] * 13), [(0, 6)])


class TestProfile:
    def test_profile_coherence(self, rng):
        for _ in range(50):
            items = tuple(rng.randint(1, 5) for _ in range(13))
            profile = finalize_profile(resp(items))
            assert profile.finalized
            assert profile.style is classify_style(profile.subscales)

    def test_highlights_track_style_and_subscales(self):
        profile = finalize_profile(resp([1, 1, 1, 1, 1, 5, 5, 1, 1, 5, 5, 2, 2]))
        assert profile.style is ConflictStyle.HOSTILE
        assert "criticism" in profile.negative_pattern_highlights
        assert "threat_ultimatum" in profile.negative_pattern_highlights

    def test_highlights_reference_taxonomy_labels(self):
        from conflictcoach.catalogs import behavior_ids

        valid = set(behavior_ids())
        for style in ConflictStyle:
            for items in ([3] * 13, [5] * 13, [1] * 13):
                scores = score_questionnaire(resp(items))
                for label in negative_pattern_highlights(scores, style):
                    assert label in valid

    def test_round_trip_serialization(self):
        profile = finalize_profile(resp([1, 2, 4, 2, 3, 1, 2, 5, 4, 3, 2, 1, 4]))
        from conflictcoach.conflict_model import ConflictProfile

        assert ConflictProfile.from_dict(profile.to_dict()) == profile
