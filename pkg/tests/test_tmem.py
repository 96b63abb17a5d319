import io
import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ES_MACHINE, SOURCE
from oracles import fuzz_oracle
from wxtrans.errors import ConflictError, InvalidArgument, NotFoundError
from wxtrans.tmem import (
    AlreadyReviewedWarning,
    Segment,
    Status,
    TermEntry,
    TranslationMemory,
    dump_termbase,
    harvest_terms,
    load_termbase,
    termbase_check,
)


def reviewed(source, target, pair="en-es"):
    return Segment(source, target, pair, status="reviewed", origin="human")


@pytest.fixture
def tm():
    ticks = itertools.count()
    return TranslationMemory(clock=lambda: f"2024-07-04T00:00:{next(ticks):09.6f}")


# --- translation memory ----------------------------------------------------------


def test_insert_reviewed_issues_id(tm):
    seg_id = tm.insert(reviewed(SOURCE, ES_MACHINE))
    assert seg_id and tm.get(seg_id).status is Status.REVIEWED


def test_insert_is_idempotent_by_content(tm):
    a = tm.insert(reviewed(SOURCE, ES_MACHINE))
    b = tm.insert(reviewed(SOURCE, ES_MACHINE))
    assert a == b and len(tm) == 1


def test_conflicting_reviewed_target(tm):
    tm.insert(reviewed(SOURCE, ES_MACHINE))
    with pytest.raises(ConflictError):
        tm.insert(reviewed(SOURCE, "Pronóstico del Tiempo Tropical"))


def test_revise_supersedes(tm):
    old = tm.insert(reviewed(SOURCE, ES_MACHINE))
    new = tm.revise(old, "Perspectiva del Tiempo Tropical", reviewer="sju")
    assert new.supersedes == old
    assert tm.get(old).superseded_by == new.id
    assert tm.lookup(SOURCE, "en-es").exact.id == new.id


def test_lookup_exact_and_empty(tm):
    assert tm.lookup(SOURCE, "en-es").exact is None
    assert tm.lookup(SOURCE, "en-es").fuzzy == []
    seg_id = tm.insert(reviewed(SOURCE, ES_MACHINE))
    hit = tm.lookup("  Tropical   Weather Outlook ", "en-es")
    assert hit.exact.id == seg_id
    assert tm.lookup(SOURCE, "en-fr").exact is None
    # case is meaningful
    assert tm.lookup(SOURCE.upper(), "en-es").exact is None


def test_lookup_fuzzy_typo(tm):
    tm.insert(reviewed(SOURCE, ES_MACHINE))
    assert fuzz_oracle("Tropical Weather Outlok", SOURCE) >= 85
    result = tm.lookup("Tropical Weather Outlok", "en-es", fuzzy_threshold=85)
    assert result.exact is None
    assert [s.source for s, _ in result.fuzzy] == [SOURCE]


def test_lookup_fuzzy_ranking_and_recency(tm):
    tm.insert(reviewed("Heavy rain tonight.", "Lluvia fuerte esta noche."))
    tm.insert(reviewed("Heavy rain tonight?", "¿Lluvia fuerte esta noche?"))
    tm.insert(reviewed("Heavy rain tonite", "Lluvia fuerte esta noche (b)"))
    res = tm.lookup("Heavy rain tonight!", "en-es", fuzzy_threshold=0)
    assert fuzz_oracle("Heavy rain tonight!", "Heavy rain tonight.") == 95
    assert fuzz_oracle("Heavy rain tonight!", "Heavy rain tonite") == 89
    # the two punctuation variants tie; the later insert ranks first
    assert [(s.source, r) for s, r in res.fuzzy] == [
        ("Heavy rain tonight?", 95),
        ("Heavy rain tonight.", 95),
        ("Heavy rain tonite", 89),
    ]
    with pytest.raises(InvalidArgument):
        tm.lookup("x", "en-es", fuzzy_threshold=101)


def test_only_reviewed_segments_are_reused(tm):
    seg_id = tm.insert(Segment(SOURCE, ES_MACHINE, "en-es", status="edited"))
    assert tm.lookup(SOURCE, "en-es").exact is None
    seg = tm.mark_reviewed(seg_id, "forecaster")
    assert seg.status is Status.REVIEWED and seg.reviewer == "forecaster"
    assert tm.lookup(SOURCE, "en-es").exact.id == seg_id


def test_mark_reviewed_errors(tm):
    with pytest.raises(NotFoundError):
        tm.mark_reviewed("nope", "x")
    seg_id = tm.insert(reviewed(SOURCE, ES_MACHINE))
    before = tm.get(seg_id)
    with pytest.warns(AlreadyReviewedWarning):
        after = tm.mark_reviewed(seg_id, "someone")
    assert after == before


def test_segment_invariants():
    with pytest.raises(InvalidArgument):
        Segment("", "x", "en-es")
    with pytest.raises(InvalidArgument):
        Segment("x", "y", "en-en")


def test_jsonl_roundtrip(tm, tmp_path):
    tm.insert(reviewed(SOURCE, ES_MACHINE))
    tm.insert(Segment("Heavy rain", "Lluvia", "en-es"))
    path = tmp_path / "tm.jsonl"
    tm.export_jsonl(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 2 and '"lang_pair": ["en", "es"]' in lines[0]
    again = TranslationMemory.import_jsonl(path)
    assert sorted(s.to_dict()["id"] for s in again) == sorted(s.id for s in tm)
    assert again.lookup(SOURCE, "en-es").exact.target == ES_MACHINE


@given(st.text(min_size=1).filter(str.strip))
def test_exact_match_implies_fuzz_100(source):
    tm = TranslationMemory()
    tm.insert(reviewed(source, "x"))
    res = tm.lookup(source, "en-es", fuzzy_threshold=100)
    assert res.exact is not None
    assert res.fuzzy and res.fuzzy[0][1] == 100


def test_concurrent_reads_during_writes():
    from concurrent.futures import ThreadPoolExecutor

    tm = TranslationMemory()
    sources = [f"Sentence number {i}." for i in range(200)]

    def write():
        for s in sources:
            tm.insert(reviewed(s, s.upper()))

    def read():
        hits = 0
        for s in sources:
            r = tm.lookup(s, "en-es", fuzzy_threshold=100)
            if r.exact is not None:
                assert r.exact.target == s.upper()
                hits += 1
        return hits

    with ThreadPoolExecutor(4) as pool:
        w = pool.submit(write)
        readers = [pool.submit(read) for _ in range(3)]
        w.result()
        [r.result() for r in readers]
    assert read() == 200


# --- termbase ----------------------------------------------------------------------

SURGE = TermEntry("storm surge", "marejada ciclónica", "en-es", (("marea de tormenta", "ES"),))


def test_termbase_accepts_approved_form():
    assert termbase_check("Hay marejada ciclónica peligrosa.", [SURGE], "Dangerous storm surge.") == []


def test_termbase_flags_missing_term():
    (v,) = termbase_check("Hay mareo ciclónico peligroso.", [SURGE], "Dangerous Storm Surge expected.")
    assert v.entry is SURGE
    assert v.positions == ((10, 21),)


def test_termbase_variant_and_scope():
    assert termbase_check("marea de tormenta", [SURGE], "storm surge") == []
    assert termbase_check("nada", [SURGE], "stormsurge") == []
    assert termbase_check("nada", [], "storm surge") == []
    assert termbase_check("nada", [SURGE], "storm surge", lang_pair="en-fr") == []


def test_termentry_invariants():
    with pytest.raises(InvalidArgument):
        TermEntry("thunderstorm", " ", "en-es")
    e = TermEntry("thunderstorm", "tormenta eléctrica", "en-es", (("tormenta eléctrica", "MX"), ("tronada", "PR")))
    assert e.variants == (("tronada", "PR"),)


@given(st.text(min_size=1).filter(str.strip), st.text(), st.text())
def test_termbase_never_flags_verbatim_approved(approved, before, after):
    entry = TermEntry("storm surge", approved, "en-es")
    assert termbase_check(before + approved + after, [entry], "storm surge") == []


def test_termbase_csv_roundtrip():
    text = (
        "source_term,approved,variants,notes,lang_pair\n"
        "thunderstorm,tormenta eléctrica,tormenta@MX;tronada@PR,dialect-neutral,en-es\n"
    )
    (entry,) = load_termbase(io.StringIO(text))
    assert entry.variants == (("tormenta", "MX"), ("tronada", "PR"))
    out = io.StringIO()
    dump_termbase([entry], out)
    assert out.getvalue() == text
    with pytest.raises(InvalidArgument):
        load_termbase(io.StringIO("a,b\n"))


# --- harvesting ----------------------------------------------------------------------

CORPUS = [
    "Se espera una tormenta fuerte esta noche.",
    "La tormenta eléctrica continuará. Otra tormenta llegará mañana.",
    "Vientos fuertes en la costa.",
    "Marejada ciclónica peligrosa en la costa.",
    "Lluvias fuertes esta noche.",
]
STOP = {"se", "una", "la", "en", "esta", "otra"}


def test_harvest_counts_fixture():
    cands = {c.phrase: c for c in harvest_terms(CORPUS, STOP, min_freq=2)}
    assert (cands["tormenta"].frequency, cands["tormenta"].documents) == (3, 2)
    assert cands["costa"].frequency == 2
    assert "en la costa" not in cands  # starts with a stopword


def test_harvest_edge_cases():
    assert harvest_terms(CORPUS, STOP, min_freq=99) == []
    every = {t for doc in CORPUS for t in doc.lower().replace(".", " ").split()}
    assert harvest_terms(CORPUS, every, min_freq=1) == []
    with pytest.raises(InvalidArgument):
        harvest_terms(CORPUS, min_freq=0)


def test_harvest_ranking_and_order_invariance():
    out = harvest_terms(CORPUS, STOP, min_freq=1)
    keys = [(-c.frequency, -c.documents, c.phrase) for c in out]
    assert keys == sorted(keys)
    assert all(c.frequency >= c.documents >= 1 for c in out)
    shuffled = CORPUS[:]
    random.Random(3).shuffle(shuffled)
    assert harvest_terms(shuffled, STOP, min_freq=1) == out
