import math
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ES_BACK, FR_BACK, SOURCE
from oracles import VOCAB, bleu_oracle, chrf_oracle, fuzz_oracle, indel_dp, lev_bfs, lev_dp
from wxtrans.errors import InvalidArgument, ScorerFailure, ScorerUnavailable
from wxtrans.metrics import (
    CasePolicy,
    ExternalScorer,
    MetricConfig,
    MetricScores,
    Rating,
    Smoothing,
    bleu,
    chrf_pp,
    classify,
    corpus_bleu,
    corpus_chrf_pp,
    corpus_ter,
    external_score,
    extract_ngrams,
    fuzz_ratio,
    levenshtein,
    score_pair,
    ter,
    ter_stats,
    tokenize,
)

words = st.lists(st.sampled_from(VOCAB), min_size=1, max_size=20).map(" ".join)
short_seq = st.lists(st.sampled_from("abc"), max_size=6)


# --- tokenize / n-grams ------------------------------------------------------


def test_tokenize_plain_sentence():
    assert tokenize("The weather is dangerous").tokens == ("The", "weather", "is", "dangerous")


def test_tokenize_empty():
    assert tokenize("").tokens == ()


def test_tokenize_ellipsis_is_a_separator():
    seq = tokenize("Formation chance...low...20 percent")
    assert seq.tokens == ("Formation", "chance", "low", "20", "percent")
    lower = tokenize("Formation chance...low...20 percent", CasePolicy.LOWERCASE)
    assert lower.tokens == ("formation", "chance", "low", "20", "percent")


def test_tokenize_terminal_punctuation():
    assert tokenize("Lows in the upper 40s. Winds 5 mph!").tokens == (
        "Lows", "in", "the", "upper", "40s", ".", "Winds", "5", "mph", "!",
    )
    assert tokenize("2.5 inches").tokens == ("2.5", "inches")


@given(st.text())
def test_tokenize_is_idempotent_on_its_own_output(text):
    seq = tokenize(text)
    assert tokenize(seq.joined()).tokens == seq.tokens


def test_ngrams_from_the_dangerous_weather_sentence():
    seq = tokenize("The weather is dangerous")
    assert set(extract_ngrams(seq, 2)) == {("The", "weather"), ("weather", "is"), ("is", "dangerous")}
    assert set(extract_ngrams(seq, 3)) == {("The", "weather", "is"), ("weather", "is", "dangerous")}
    assert extract_ngrams(["a"], 2) == {}
    with pytest.raises(InvalidArgument):
        extract_ngrams(seq, 0)


# --- Levenshtein ---------------------------------------------------------------


@pytest.mark.parametrize("a,b,d", [("abc", "abc", 0), ("", "abc", 3), ("kitten", "sitting", 3)])
def test_levenshtein_examples(a, b, d):
    assert levenshtein(a, b) == d
    assert lev_dp(a, b) == d


@settings(max_examples=300)
@given(short_seq, short_seq)
def test_levenshtein_matches_exhaustive_search(a, b):
    assert levenshtein(a, b) == lev_bfs(a, b, "abc")


@settings(max_examples=300)
@given(st.text(max_size=80), st.text(max_size=80))
def test_levenshtein_matches_dp(a, b):
    assert levenshtein(a, b) == lev_dp(a, b)
    assert levenshtein(a, b) == levenshtein(b, a)


@given(st.text(max_size=20), st.text(max_size=20), st.text(max_size=20))
def test_levenshtein_triangle(a, b, c):
    assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)
    assert levenshtein(a, a) == 0


def test_levenshtein_on_tokens():
    assert levenshtein(["a", "storm", "surge"], ["storm", "surge", "warning"]) == 2


# --- Fuzz ----------------------------------------------------------------------


def test_fuzz_reference_pairs():
    assert fuzz_ratio(SOURCE, ES_BACK) == 42
    assert fuzz_ratio(SOURCE, FR_BACK) == 69
    assert fuzz_ratio("", "") == 100
    assert fuzz_ratio("abc", "abc") == 100


@settings(max_examples=300)
@given(st.text(max_size=60), st.text(max_size=60))
def test_fuzz_matches_indel_oracle(a, b):
    assert fuzz_ratio(a, b) == fuzz_oracle(a, b) == fuzz_ratio(b, a)
    assert (fuzz_ratio(a, b) == 100) == (a == b)


def test_fuzz_near_identical_long_strings_stay_below_100():
    a = "x" * 400
    assert indel_dp(a, a + "y") == 1
    assert fuzz_ratio(a, a + "y") == 99


# --- TER -----------------------------------------------------------------------


def test_ter_reference_pairs():
    assert ter(ES_BACK, [SOURCE]) == pytest.approx(200.0, abs=0.01)
    assert ter(FR_BACK, [SOURCE]) == pytest.approx(33.33, abs=0.01)
    assert ter(SOURCE, [SOURCE]) == 0.0


def test_ter_case_sensitive_variant_doubles_the_french_score():
    cfg = MetricConfig(case_policy={"ter": "preserve"})
    assert ter(FR_BACK, [SOURCE], cfg) == pytest.approx(66.67, abs=0.01)


def test_ter_requires_a_reference():
    with pytest.raises(InvalidArgument):
        ter("a", [])


def test_ter_counts_a_block_shift_as_one_edit():
    ref = "heavy rain expected tonight along the coast"
    hyp = "along the coast heavy rain expected tonight"
    no_shift = MetricConfig(ter_shifts_enabled=False)
    st_ = ter_stats(hyp, [ref])
    assert st_.shifts == 1 and st_.edits == 1
    assert ter(hyp, [ref]) < ter(hyp, [ref], no_shift)


def test_ter_multi_reference_uses_closest_and_average_length():
    st_ = ter_stats("a b c", ["a b c", "x y z w v"])
    assert st_.edits == 0
    assert st_.ref_length == 4.0


@settings(max_examples=200)
@given(words, words)
def test_ter_without_shifts_is_token_levenshtein_ratio(h, r):
    cfg = MetricConfig(ter_shifts_enabled=False)
    ht, rt = tokenize(h, "lowercase").tokens, tokenize(r, "lowercase").tokens
    assert ter(h, [r], cfg) == pytest.approx(100 * lev_dp(ht, rt) / len(rt))
    assert ter(h, [r]) <= ter(h, [r], cfg) + 1e-9


def test_corpus_ter_pools_edits():
    assert corpus_ter([FR_BACK, SOURCE], [[SOURCE], [SOURCE]]) == pytest.approx(100 * 1 / 6)


# --- BLEU ----------------------------------------------------------------------


def test_bleu_reference_pairs():
    assert bleu(ES_BACK, [SOURCE]) == pytest.approx(6.567, abs=0.0005)
    assert bleu(FR_BACK, [SOURCE]) == 0.0
    assert MetricConfig.pinned() == MetricConfig()


def test_bleu_reference_pairs_match_formula_oracle():
    es = bleu_oracle(tokenize(ES_BACK).tokens, [tokenize(SOURCE).tokens])
    assert bleu(ES_BACK, [SOURCE]) == pytest.approx(es)
    # (1/7 * 1/12 * 1/20 * 1/32) ** (1/4)
    assert es == pytest.approx(100 * (1 / 53760) ** 0.25)


def test_bleu_short_segments():
    # below max order an exact reproduction still scores 100
    assert bleu("storm surge", ["storm surge"]) == 100.0
    # ...but any difference leaves the missing 4-gram order at zero
    assert bleu("storm surge", ["storm Surge"]) == 0.0
    cfg = MetricConfig(bleu_effective_order=True)
    assert bleu("storm surge", ["storm Surge"], cfg) == pytest.approx(100 * (1 / 2 * 1 / 2) ** 0.5)


def test_bleu_requires_a_reference():
    with pytest.raises(InvalidArgument):
        bleu("a", [])


@settings(max_examples=200)
@given(words, st.lists(words, min_size=1, max_size=3), st.sampled_from(list(Smoothing)))
def test_bleu_matches_oracle(h, refs, smoothing):
    cfg = MetricConfig(bleu_smoothing=smoothing)
    expected = bleu_oracle(tokenize(h).tokens, [tokenize(r).tokens for r in refs], smoothing=smoothing.value)
    got = bleu(h, refs, cfg)
    assert got == pytest.approx(expected, rel=1e-9, abs=1e-9)
    assert 0 <= got <= 100 + 1e-9


@given(st.text(min_size=1))
def test_bleu_identity(h):
    assert bleu(h, [h]) == pytest.approx(100.0)
    assert corpus_bleu([h, h], [[h], [h]]) == pytest.approx(100.0)


def test_bleu_without_smoothing_is_zero_when_a_precision_is_zero():
    cfg = MetricConfig(bleu_smoothing="none")
    assert bleu("storm surge warning in effect", ["storm warning surge in effect"], cfg) == 0.0


def test_corpus_bleu_pools_counts():
    h = ["the storm is strong", "heavy rain tonight here"]
    assert corpus_bleu(h, [[x] for x in h]) == pytest.approx(100.0)
    assert corpus_bleu([], []) == 0.0
    assert corpus_bleu(["Rain.", "Wind"], [["Rain."], ["wind"]]) == 0.0


# --- chrF++ --------------------------------------------------------------------


def test_chrf_reference_pairs():
    assert chrf_pp(ES_BACK, SOURCE) == pytest.approx(29.626, abs=0.001)
    assert chrf_pp(FR_BACK, SOURCE) == pytest.approx(38.677, abs=0.001)
    assert chrf_pp(SOURCE, SOURCE) == 100.0


@settings(max_examples=200)
@given(st.text(max_size=60), st.text(max_size=60))
def test_chrf_matches_oracle(h, r):
    expected = chrf_oracle(h, r, tokenize(h).tokens, tokenize(r).tokens)
    got = chrf_pp(h, r)
    assert got == pytest.approx(expected, abs=1e-9)
    assert 0 <= got <= 100 + 1e-9


@given(words)
def test_chrf_identity(h):
    assert chrf_pp(h, h) == pytest.approx(100.0)


def test_corpus_chrf():
    assert corpus_chrf_pp([SOURCE], [SOURCE]) == pytest.approx(100.0)
    assert corpus_chrf_pp([ES_BACK], [SOURCE]) == pytest.approx(chrf_pp(ES_BACK, SOURCE))


# --- classification -------------------------------------------------------------


def test_classify_reference_scores():
    es = MetricScores(bleu=6.567, fuzz=42, chrf_pp=29.626, ter=200.0, comet=0.723)
    fr = MetricScores(bleu=0.0, fuzz=69, chrf_pp=38.677, ter=33.33, comet=0.942)
    assert classify(es) == {
        "bleu": Rating.BAD, "fuzz": Rating.BAD, "chrf_pp": Rating.BAD,
        "comet": Rating.GOOD, "ter": Rating.BAD,
    }
    assert classify(fr)["fuzz"] is Rating.NEEDS_REVIEW
    assert classify(fr)["comet"] is Rating.GOOD


def test_classify_boundaries_need_review():
    s = MetricScores(bleu=90, fuzz=50, chrf_pp=90, ter=15, comet=0.3)
    assert set(classify(s).values()) == {Rating.NEEDS_REVIEW}
    s = MetricScores(bleu=50, fuzz=90, chrf_pp=50, ter=30, comet=0.7)
    assert set(classify(s).values()) == {Rating.NEEDS_REVIEW}
    assert classify(MetricScores(0, 0, 0, 0, comet=0.5))["comet"] is Rating.NEEDS_REVIEW


def test_scores_validate_bounds():
    with pytest.raises(InvalidArgument):
        MetricScores(bleu=101, fuzz=0, chrf_pp=0, ter=0)
    with pytest.raises(InvalidArgument):
        MetricScores(bleu=0, fuzz=0, chrf_pp=0, ter=-1)


def test_score_pair_roundtrips_through_dict():
    s = score_pair(ES_BACK, SOURCE)
    assert MetricScores.from_dict(s.to_dict()) == s
    assert s.comet is None and "comet" not in s.ratings


def test_metric_config_rejects_bad_values():
    with pytest.raises(InvalidArgument):
        MetricConfig(bleu_max_order=0)
    with pytest.raises(InvalidArgument):
        MetricConfig(chrf_beta=0)
    with pytest.raises(InvalidArgument):
        MetricConfig.from_dict({"nope": 1})


# --- external scorer -------------------------------------------------------------

ECHO = [sys.executable, "-c", "import sys, json\nfor line in sys.stdin: print(json.dumps({'score': 0.5}))"]


def test_external_scorer_unconfigured():
    with pytest.raises(ScorerUnavailable):
        external_score("s", "h", "r", None)
    with pytest.raises(ScorerUnavailable):
        external_score("s", "h", "r", ExternalScorer(None))


def test_external_scorer_echo_stub():
    scorer = ExternalScorer.from_spec(ECHO)
    result = external_score(SOURCE, ES_BACK, SOURCE, scorer)
    assert result.score == 0.5
    assert "python" in result.scorer
    s = score_pair(ES_BACK, SOURCE, src=SOURCE, scorer=scorer)
    assert s.comet == 0.5 and s.ratings["comet"] is Rating.NEEDS_REVIEW


@pytest.mark.parametrize(
    "script",
    [
        "import sys; sys.exit(3)",
        "import sys\nfor line in sys.stdin: print('not json')",
        "import sys, json\nfor line in sys.stdin: print(json.dumps({'value': 1}))",
    ],
)
def test_external_scorer_failures_carry_diagnostics(script):
    scorer = ExternalScorer.from_spec([sys.executable, "-c", script])
    with pytest.raises(ScorerFailure) as info:
        external_score("s", "h", "r", scorer)
    assert isinstance(info.value.diagnostics, str)


def test_external_scorer_timeout():
    scorer = ExternalScorer.from_spec([sys.executable, "-c", "import time; time.sleep(5)"], timeout=0.5)
    with pytest.raises(ScorerFailure):
        external_score("s", "h", "r", scorer)


def test_metrics_are_pure_under_threads():
    from concurrent.futures import ThreadPoolExecutor

    expected = score_pair(ES_BACK, SOURCE)
    with ThreadPoolExecutor(8) as pool:
        results = list(pool.map(lambda _: score_pair(ES_BACK, SOURCE), range(64)))
    assert all(r == expected for r in results)
    assert not math.isnan(expected.bleu)
