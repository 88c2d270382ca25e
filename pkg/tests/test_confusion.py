import math

import pytest

from framekey import (
    AnnotatorBatch,
    BatchSample,
    CooccurrenceMode,
    cooccurrence_counts,
    frame_overlap,
    npmi,
    top_confusions,
)

from corpusgen import anchor_batch, build_corpus, random_batch
from oracles import count_pairs


def one_sample_batch(selections, options=("A", "B", "C", "D")):
    sample = BatchSample(
        id="s1", sentence="text", span=(0, 4), options=options, selections=selections
    )
    annotators = tuple(selections)
    return AnnotatorBatch(batch_id="b", annotators=annotators, samples=(sample,))


def test_within_mode_pairs_inside_one_selection():
    batch = one_sample_batch({"a1": ("A", "B"), "a2": ("C",)})
    counts, marginals = cooccurrence_counts([batch], CooccurrenceMode.WITHIN)
    assert counts == {("A", "B"): 1}
    assert marginals.n_events == 2
    assert marginals.label_counts == {"A": 1, "B": 1, "C": 1}


def test_across_mode_pairs_between_annotators():
    batch = one_sample_batch({"a1": ("A",), "a2": ("B",)})
    counts, marginals = cooccurrence_counts([batch], CooccurrenceMode.ACROSS)
    assert counts == {("A", "B"): 1}
    assert marginals.n_events == 1
    within, _ = cooccurrence_counts([batch], CooccurrenceMode.WITHIN)
    assert within == {}


def test_across_mode_counts_once_per_sample():
    batch = one_sample_batch({"a1": ("A", "B"), "a2": ("A", "B"), "a3": ("B",)})
    counts, _ = cooccurrence_counts([batch], CooccurrenceMode.ACROSS)
    assert counts == {("A", "B"): 1}


def test_sentinels_never_pair():
    batch = one_sample_batch(
        {"a1": ("A", "OTHER_DOMAIN"), "a2": ("NO_METAPHOR",), "a3": ("OTHER_DOMAIN", "B")}
    )
    for mode in CooccurrenceMode:
        counts, marginals = cooccurrence_counts([batch], mode)
        labels = {label for pair in counts for label in pair} | set(marginals.label_counts)
        assert "NO_METAPHOR" not in labels
        assert "OTHER_DOMAIN" not in labels


def test_pair_counts_match_brute_force_both_modes():
    batches = [random_batch(seed, batch_id=f"b{seed}") for seed in range(6)]
    for mode in CooccurrenceMode:
        counts, _ = cooccurrence_counts(batches, mode)
        assert counts == count_pairs(batches, mode.value)


def test_npmi_bounds_on_random_batches():
    batches = [random_batch(seed, batch_id=f"b{seed}", n_samples=40) for seed in range(8)]
    for mode in CooccurrenceMode:
        report = top_confusions(batches, mode=mode)
        assert report.records, "fixture produced no pairs"
        for record in report.records:
            assert -1.0 <= record.npmi <= 1.0
            assert record.p_ab <= min(record.p_a, record.p_b) + 1e-12


def test_npmi_weighting_identity_random_batches():
    batches = [random_batch(seed, batch_id=f"b{seed}", n_samples=40) for seed in range(8)]
    for mode in CooccurrenceMode:
        for record in top_confusions(batches, mode=mode).records:
            assert record.npmi_weighted == pytest.approx(
                record.npmi * math.log(record.count), abs=1e-12
            )


def test_npmi_degenerate_always_cooccurring_pair():
    batch = one_sample_batch({"a1": ("A", "B")})
    report = top_confusions([batch], mode=CooccurrenceMode.WITHIN)
    (record,) = report.records
    assert record.p_ab == 1.0
    assert record.npmi == 1.0
    assert record.degenerate
    assert record.npmi_weighted == 0.0  # ln(1) = 0


def test_npmi_function_validates_inputs():
    with pytest.raises(ValueError, match="out of range"):
        npmi(0.5, 0.5, 0.0)
    with pytest.raises(ValueError, match="exceeds"):
        npmi(0.2, 0.5, 0.4)
    value, degenerate = npmi(1.0, 1.0, 1.0)
    assert value == 1.0 and degenerate


def test_npmi_independent_pair_is_near_zero():
    # p_ab = p_a * p_b: the log ratio vanishes
    value, degenerate = npmi(0.5, 0.5, 0.25)
    assert value == pytest.approx(0.0, abs=1e-12)
    assert not degenerate


def test_anchor_pair_count_and_identity():
    report = top_confusions([anchor_batch()], mode=CooccurrenceMode.WITHIN)
    top = report.records[0]
    assert (top.label_a, top.label_b) == ("BATTLE", "WAR")
    assert top.count == 33
    assert top.npmi_weighted == pytest.approx(top.npmi * math.log(33), abs=1e-9)
    assert 0.0 < top.npmi < 1.0
    assert report.n_events == 160
    assert top.p_a == pytest.approx(36 / 160)
    assert top.p_ab == pytest.approx(33 / 160)


def test_anchor_ordering_battle_war_above_competition_struggle():
    report = top_confusions([anchor_batch()], mode=CooccurrenceMode.WITHIN)
    pairs = [(r.label_a, r.label_b) for r in report.records]
    assert pairs.index(("BATTLE", "WAR")) < pairs.index(("COMPETITION", "STRUGGLE"))


def test_ordering_prefers_weighted_npmi_then_count():
    batch = one_sample_batch(
        {"a1": ("A", "B"), "a2": ("C", "D"), "a3": ("A", "B")},
        options=("A", "B", "C", "D"),
    )
    report = top_confusions([batch], mode=CooccurrenceMode.WITHIN)
    assert [(r.label_a, r.label_b) for r in report.records] == [("A", "B"), ("C", "D")]
    assert report.records[0].count == 2


def test_ordering_full_tie_breaks_on_pair_lexicographic():
    # both pairs: count 2 of 4 events, identical marginals, identical npmi
    batch = one_sample_batch(
        {"a1": ("A", "B"), "a2": ("C", "D"), "a3": ("A", "B"), "a4": ("C", "D")},
        options=("A", "B", "C", "D"),
    )
    report = top_confusions([batch], mode=CooccurrenceMode.WITHIN)
    assert [(r.label_a, r.label_b) for r in report.records] == [("A", "B"), ("C", "D")]
    assert report.records[0].npmi_weighted == report.records[1].npmi_weighted


def test_min_count_filters_rare_pairs():
    batch = one_sample_batch({"a1": ("A", "B"), "a2": ("C", "D"), "a3": ("A", "B")})
    report = top_confusions([batch], mode=CooccurrenceMode.WITHIN, min_count=2)
    assert [(r.label_a, r.label_b) for r in report.records] == [("A", "B")]
    assert report.n_pairs == 3  # totals describe the unfiltered pair mass


def test_frame_overlap_subset(frames, domains):
    big = [(f"w{i}", frame, "WAR", 1) for i, frame in enumerate(frames.labels[:65])]
    small = [(f"v{i}", frame, "BATTLE", 1) for i, frame in enumerate(frames.labels[:4])]
    corpus = build_corpus(big + small, frames, domains)
    report = frame_overlap(corpus, "BATTLE", "WAR")
    assert report.overlap_ab == 1.0
    assert report.overlap_ba == pytest.approx(4 / 65, abs=1e-9)
    assert report.subsumed == "a_in_b"
    assert report.is_subsumed
    assert len(report.frames_a) == 4 and len(report.frames_b) == 65
    flipped = frame_overlap(corpus, "WAR", "BATTLE")
    assert flipped.subsumed == "b_in_a"
    assert flipped.overlap_ab == pytest.approx(4 / 65, abs=1e-9)


def test_frame_overlap_partial(frames, domains):
    spec = [
        ("w1", "Invading", "WAR", 2),
        ("w2", "Attack", "WAR", 2),
        ("b1", "Attack", "BATTLE", 2),
        ("b2", "Hunting", "BATTLE", 2),
    ]
    corpus = build_corpus(spec, frames, domains)
    report = frame_overlap(corpus, "WAR", "BATTLE")
    assert report.overlap_ab == pytest.approx(0.5)
    assert report.overlap_ba == pytest.approx(0.5)
    assert report.subsumed is None
    assert report.shared == ("Attack",)


def test_frame_overlap_equal_sets_not_subsumed(frames, domains):
    spec = [
        ("w1", "Invading", "WAR", 1),
        ("b1", "Invading", "BATTLE", 1),
    ]
    corpus = build_corpus(spec, frames, domains)
    report = frame_overlap(corpus, "WAR", "BATTLE")
    assert report.overlap_ab == 1.0 and report.overlap_ba == 1.0
    assert report.subsumed is None  # equal sets, neither is the narrower taxon


def test_frame_overlap_min_frame_count(frames, domains):
    spec = [
        ("w1", "Invading", "WAR", 3),
        ("w2", "Attack", "WAR", 1),
        ("b1", "Invading", "BATTLE", 3),
    ]
    corpus = build_corpus(spec, frames, domains)
    report = frame_overlap(corpus, "BATTLE", "WAR", min_frame_count=2)
    assert report.frames_b == ("Invading",)
    assert report.subsumed is None
    assert report.overlap_ab == 1.0


def test_frame_overlap_empty_side_raises(frames, domains):
    corpus = build_corpus([("w1", "Invading", "WAR", 1)], frames, domains)
    with pytest.raises(ValueError, match="no frames"):
        frame_overlap(corpus, "WAR", "BATTLE")
