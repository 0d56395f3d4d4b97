import json
import random
from importlib import resources
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lingroth.fixtures import corpus_data, fix1_data
from lingroth.grothendieck import GrCategory, check_sum_id, replay_sum_id_witness
from lingroth.specfile import SpecDocument, SpecErrors, build_document, decode_spec, parse_spec, serialize

MALFORMED = Path(__file__).parent / "data" / "malformed"
EXPECTED = json.loads((MALFORMED / "expected.json").read_text())


def _packaged(name):
    return resources.files("lingroth").joinpath("data", name).read_text(encoding="utf-8")


def test_fix1_golden():
    doc = parse_spec(_packaged("fix1.json"))
    counts = doc.counts()
    assert (counts["categories"], counts["rings"], counts["bipresheaves"]) == (1, 2, 1)
    assert doc == build_document(fix1_data())


def test_empty_document():
    doc = parse_spec("")
    assert doc == SpecDocument()
    assert sum(doc.counts().values()) == 0
    assert serialize(doc) == "{}\n"
    assert parse_spec(serialize(doc)) == doc
    assert parse_spec("{}") == doc


@pytest.mark.parametrize("name", ["corpus.json", "fix1.json"])
def test_packaged_files_are_canonical(name):
    text = _packaged(name)
    assert serialize(parse_spec(text)) == text


def test_corpus_file_matches_source():
    assert parse_spec(_packaged("corpus.json")) == build_document(corpus_data())


def _shuffle(value, rng):
    if isinstance(value, dict):
        items = list(value.items())
        rng.shuffle(items)
        return {k: _shuffle(v, rng) for k, v in items}
    if isinstance(value, list):
        return [_shuffle(v, rng) for v in value]
    return value


@given(st.integers(0, 2**32 - 1), st.sampled_from([None, 1, 4]))
@settings(max_examples=15, deadline=None)
def test_one_normalization_pass_reaches_the_fixed_point(seed, indent):
    # key order and layout are irrelevant; identity maps may be spelled out or omitted
    text = json.dumps(_shuffle(corpus_data(), random.Random(seed)), indent=indent)
    once = serialize(parse_spec(text))
    assert serialize(parse_spec(once)) == once
    assert parse_spec(once) == parse_spec(text)


def test_every_entry_round_trips_on_its_own():
    data = corpus_data()
    doc = build_document(data)
    for section, entries in doc.raw.items():
        for name in entries:
            assert doc.lookup(name)[0] == section


def test_sum_id_report_serializes_a_replayable_witness(corpus):
    G = GrCategory(corpus["FIX3"])
    text = serialize(check_sum_id(G))
    back = json.loads(text)
    assert back["per_pair"]["x->y"]["witness"]["components"] == [{"f": "f", "r1": "1", "r2": "0"}]
    assert replay_sum_id_witness(G, back["witness"])
    assert text == serialize(check_sum_id(G))


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_malformed_inputs_are_located(name):
    raw = (MALFORMED / name).read_bytes()
    with pytest.raises(SpecErrors) as e:
        parse_spec(decode_spec(raw))
    got = [(err.line, err.col, err.message) for err in e.value.errors]
    want = EXPECTED[name]
    assert len(got) == len(want)
    for (line, col, msg), (wl, wc, wm) in zip(got, want):
        assert (line, col) == (wl, wc)
        assert wm in msg


def test_malformed_suite_is_complete():
    assert sorted(p.name for p in MALFORMED.glob("*.json") if p.name != "expected.json") == sorted(EXPECTED)


def test_names_are_unique_across_sections():
    with pytest.raises(SpecErrors, match="duplicate name"):
        build_document({"rings": {"A": {"modular": 2}}, "groups": {"A": {"cyclic": 2}}})
