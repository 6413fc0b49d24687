import json

import numpy as np
import pytest

import turkpos.tagger as tagger_mod
from turkpos.corpus import parse_corpus
from turkpos.errors import EmptyAfterCleaning, UnsupportedFormat
from turkpos.tagger import (
    TaggedDocument,
    TaggedSentence,
    compute_frequencies,
    document_from_dict,
    document_to_dict,
    export_analysis,
    tag_text,
)


@pytest.fixture(scope="module")
def model(trained):
    return trained[0]


class TestTagText:
    def test_empty_after_cleaning(self, model):
        with pytest.raises(EmptyAfterCleaning):
            tag_text("!!! 123", model)

    def test_lengths_match(self, model):
        doc = tag_text("Küçük kedi dün uyudu. Köpek havladı!", model)
        for s in doc.sentences:
            assert len(s.tokens) == len(s.tags) == len(s.confidences) == len(s.oov)

    def test_pad_never_predicted(self, model):
        doc = tag_text("kedi süt içti. yarın okula gitti.", model)
        for s in doc.sentences:
            assert "-PAD-" not in s.tags

    def test_uniform_stub_picks_lowest_tag_id(self, model, monkeypatch):
        monkeypatch.setattr(
            tagger_mod,
            "blstm_tag_probs",
            lambda ids, m: np.full((len(ids), m.n_tags), 1.0 / m.n_tags),
        )
        doc = tag_text("kedi uyudu", model)
        lowest = model.vocab.id_to_tag[1]
        assert doc.sentences[0].tags == [lowest, lowest]

    def test_oov_flagged(self, model):
        doc = tag_text("kedi zzyzzx uyudu", model)
        assert doc.sentences[0].oov == [False, True, False]

    def test_learned_tags_on_training_sentence(self, model):
        doc = tag_text("küçük kedi dün bahçede uyudu.", model)
        assert doc.sentences[0].tags == ["ADJ", "NOUN", "ADV", "NOUN", "VERB"]

    def test_source_and_filename(self, model):
        doc = tag_text("kedi uyudu", model, source="document", filename="a.txt")
        assert doc.source == "document" and doc.filename == "a.txt"


class TestComputeFrequencies:
    def test_counts(self):
        doc = TaggedDocument(
            sentences=[
                TaggedSentence(
                    tokens=["kedi", "uyudu", "kedi"],
                    tags=["N", "V", "N"],
                    confidences=[1.0, 1.0, 1.0],
                    oov=[False] * 3,
                )
            ],
            frequencies={},
        )
        assert compute_frequencies(doc) == {"N": [("kedi", 2)], "V": [("uyudu", 1)]}

    def test_empty_document(self):
        assert compute_frequencies(TaggedDocument(sentences=[], frequencies={})) == {}

    def test_conservation(self, model):
        doc = tag_text("kedi süt içti. köpek koştu. kedi uyudu.", model)
        total = sum(len(s.tokens) for s in doc.sentences)
        counted = sum(c for pairs in doc.frequencies.values() for _, c in pairs)
        assert counted == total

    def test_sorted_by_count_then_word(self):
        doc = TaggedDocument(
            sentences=[
                TaggedSentence(
                    tokens=["b", "a", "c", "a"],
                    tags=["N", "N", "N", "N"],
                    confidences=[1.0] * 4,
                    oov=[False] * 4,
                )
            ],
            frequencies={},
        )
        assert compute_frequencies(doc) == {"N": [("a", 2), ("b", 1), ("c", 1)]}


class TestExportAnalysis:
    def test_tsv_round_trips(self, model):
        doc = tag_text("Kedi süt içti. Köpek havladı!", model)
        payload = export_analysis(doc, "tsv").decode("utf-8")
        reloaded = parse_corpus(payload)
        assert reloaded == [list(zip(s.tokens, s.tags)) for s in doc.sentences]

    def test_empty_document_empty_payload(self):
        doc = TaggedDocument(sentences=[], frequencies={})
        assert export_analysis(doc, "tsv") == b""

    def test_structured_schema(self, model):
        doc = tag_text("kedi uyudu", model)
        payload = json.loads(export_analysis(doc, "structured"))
        assert payload == document_to_dict(doc)
        assert payload["sentences"][0]["tokens"] == ["kedi", "uyudu"]

    def test_unknown_format(self, model):
        doc = tag_text("kedi uyudu", model)
        with pytest.raises(UnsupportedFormat):
            export_analysis(doc, "xml")


def test_document_dict_round_trip(model):
    doc = tag_text("kedi süt içti. köpek zzz havladı!", model)
    clone = document_from_dict(document_to_dict(doc))
    assert document_to_dict(clone) == document_to_dict(doc)
