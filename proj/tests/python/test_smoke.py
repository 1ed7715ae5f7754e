import json
import math
import os

import pytest

import snapinfo

FIXTURES = os.environ.get(
    "SNAPINFO_FIXTURE_DIR", os.path.join(os.path.dirname(__file__), "..", "fixtures")
)


def fixture(name):
    return os.path.join(FIXTURES, name)


def test_tokenize_and_sentences():
    tokens = snapinfo.tokenize("SNAP cuts!!")
    assert [t.norm for t in tokens] == ["snap", "cuts"]
    assert tokens[0].all_caps
    assert tokens[1].trailing_exclaims == 2
    doc = snapinfo.Document("A win. B loss? C tie!")
    assert len(snapinfo.split_sentences(doc)) == 3
    assert abs(snapinfo.reading_grade(snapinfo.Document("Cat.")) + 3.40) <= 0.01


def test_scorers():
    lex = snapinfo.ValenceLexicon({"good": 3, "bad": -3})
    assert len(lex) == 2
    assert snapinfo.word_sum_score(snapinfo.tokenize("good good bad"), lex) == 3
    assert snapinfo.word_sum_score(snapinfo.tokenize("not good"), lex, negation_mode=True) == pytest.approx(-2.22)
    assert snapinfo.normalize_compound(3.0) == pytest.approx(0.6124, abs=1e-4)
    c = snapinfo.compound_score(snapinfo.tokenize("very good"), lex)
    assert c == pytest.approx(3.293 / math.sqrt(3.293**2 + 15))
    assert snapinfo.document_weight(3, 6.0) == 2.0


def test_errors_are_translated():
    with pytest.raises(snapinfo.Error, match="OutOfRangeScore"):
        snapinfo.ValenceLexicon({"awesome": 7})
    with pytest.raises(snapinfo.Error, match="InvalidTier"):
        snapinfo.document_weight(9, 10.0)


def test_scores_and_timeseries():
    lex = snapinfo.load_lexicon(fixture("lexicon.tsv"))
    docs = snapinfo.filter_relevant(snapinfo.load_documents(fixture("docs.jsonl")))
    assert len(docs) == 10
    scores = [snapinfo.score_document(d, lex) for d in docs]
    series = snapinfo.corpus_timeseries(scores, "2017-03-01", "2017-03-31")
    assert [p.day for p in series][0] == "2017-03-01"
    assert sum(p.n_docs for p in series) == 10
    r, sign = snapinfo.tool_agreement(scores)
    assert -1.0 <= r <= 1.0 and 0.0 <= sign <= 1.0


def test_classifier():
    docs = [
        snapinfo.Document("good day", id="a"),
        snapinfo.Document("bad day", id="b"),
    ]
    with pytest.raises(snapinfo.Error, match="InsufficientClasses"):
        snapinfo.train(docs)

    def tweet(i, text, label):
        return snapinfo.Document(text, id=f"t{i}", kind="tweet", source="twitter", label=label)

    labeled = [tweet(i, "great help thanks", "positive") for i in range(5)]
    labeled += [tweet(5 + i, "cruel cuts waste", "negative") for i in range(5)]
    model = snapinfo.train(labeled)
    label, posterior = snapinfo.predict(model, snapinfo.Document("thanks for the help"))
    assert label == "positive"
    assert sum(posterior.values()) == pytest.approx(1.0, abs=1e-9)
    assert snapinfo.cross_validate(labeled, 5) == 1.0
    with pytest.raises(ValueError):
        snapinfo.Document("x", label="angry")


def test_terms_and_topics():
    docs = [
        snapinfo.Document("food stamps help families", id="a"),
        snapinfo.Document("families need food stamps", id="b"),
        snapinfo.Document("food stamps matter", id="c"),
    ]
    scores = snapinfo.tfidf(docs)
    assert scores[("a", "help")] == pytest.approx(math.log(3))
    bigrams = snapinfo.bigram_collocations(docs, min_count=3)
    assert bigrams[0][0] == "food stamps"
    topics = snapinfo.lda_top_words(docs, topics=2, iterations=20, n=3)
    assert len(topics) == 2 and len(topics[0]) == 3


def test_hotspots_geojson():
    points = [(40.0, -90.0, 0.5), (40.0, -88.0, -0.5), (42.0, -89.0, 0.1)]
    fc = json.loads(snapinfo.hotspots(points, 1.0, (-92.0, 38.0, -86.0, 44.0)))
    assert fc["type"] == "FeatureCollection"
    assert sum(f["properties"]["count"] for f in fc["features"]) == 3
    assert snapinfo.hex_at(0.0, 0.0, 1.0) == (0, 0)


def test_bills_and_snapshot():
    with open(fixture("bills_pruning.json")) as fh:
        kept = json.loads(snapinfo.filter_bills(fh.read()))["bills"]
    assert [b["id"] for b in kept] == ["HB 101"]
    snap = json.loads(
        snapinfo.build_snapshot_json(
            fixture("docs.jsonl"), fixture("lexicon.tsv"), fixture("bills.json"), build_epoch=1500000000
        )
    )
    assert snap["meta"]["n_docs"] == 10
    assert len(snap["bills"]) == 3
