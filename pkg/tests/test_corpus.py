import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btselect.corpus import (
    PoolManifest,
    Sentence,
    load_corpus,
    load_pool,
    write_corpus,
)
from btselect.errors import AlignmentError, ConfigError, DataError


def test_load_corpus_basic(write):
    p = write("c.txt", "a b c\nd e\n")
    assert load_corpus(p) == [Sentence(("a", "b", "c"), 0), Sentence(("d", "e"), 1)]


def test_load_corpus_empty_file(write):
    assert load_corpus(write("c.txt", "")) == []


def test_skip_preserves_line_numbers(write):
    sents = load_corpus(write("c.txt", "x\n\ny\n"), policy="skip")
    assert [(s.tokens, s.line_no) for s in sents] == [(("x",), 0), (("y",), 2)]


def test_empty_line_policies(write):
    p = write("c.txt", "x\n   \ny\n")
    with pytest.raises(DataError, match="empty line 1"):
        load_corpus(p, policy="error")
    kept = load_corpus(p, policy="keep")
    assert [len(s) for s in kept] == [1, 0, 1]


def test_invalid_utf8(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_bytes(b"ok\n\xff\xfe bad\n")
    with pytest.raises(DataError, match="UTF-8"):
        load_corpus(p)


def test_tab_inside_token_rejected(write):
    with pytest.raises(DataError):
        load_corpus(write("c.txt", "a\tb c\n"))


def test_missing_file():
    with pytest.raises(OSError):
        load_corpus("/nonexistent/file.txt")


def test_lowercase_switch(write):
    p = write("c.txt", "Hello World\n")
    assert load_corpus(p)[0].tokens == ("Hello", "World")
    assert load_corpus(p, lowercase=True)[0].tokens == ("hello", "world")


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.text(alphabet="abcxyzäß€", min_size=1, max_size=5), min_size=1, max_size=6),
                max_size=20))
def test_round_trip(tmp_path_factory, lines):
    path = tmp_path_factory.mktemp("rt") / "c.txt"
    sents = [Sentence(tuple(toks), i) for i, toks in enumerate(lines)]
    write_corpus(path, sents)
    assert load_corpus(path) == sents


def _pool_files(write, target_lines, systems):
    manifest = {"target": write("tgt.txt", "".join(l + "\n" for l in target_lines)), "systems": []}
    for name, lines in systems:
        manifest["systems"].append(
            {"name": name, "source": write(f"src_{len(manifest['systems'])}.txt", "".join(l + "\n" for l in lines))}
        )
    return manifest


def test_load_pool_alignment(write):
    m = _pool_files(write, ["t0", "t1", "t2"], [("a", ["x", "y", "z"]), ("b", ["p", "", "r"])])
    pool = load_pool(m)
    assert len(pool) == 3
    assert pool.systems == ["a", "b"]
    cands = list(pool.candidates())
    assert len(cands) == 6
    for c in cands:
        assert c.source is pool.sources[c.system][c.target_idx]
        assert c.target is pool.targets[c.target_idx]
    # empty synthetic line kept in place as a zero-token sentence
    assert pool.sources["b"][1].tokens == () and pool.sources["b"][2].tokens == ("r",)


def test_load_pool_mismatch_names_system(write):
    m = _pool_files(write, ["t0", "t1", "t2"], [("a", ["x", "y", "z"]), ("short", ["p", "q"])])
    with pytest.raises(AlignmentError, match=r"'short'.*2 lines.*3"):
        load_pool(m)


def test_load_pool_duplicate_system(write):
    m = _pool_files(write, ["t0"], [("a", ["x"]), ("a", ["y"])])
    with pytest.raises(ConfigError, match="duplicate"):
        load_pool(m)


def test_manifest_relative_paths(tmp_path):
    (tmp_path / "t.txt").write_text("t0\nt1\n")
    (tmp_path / "s.txt").write_text("s0\ns1\n")
    mpath = tmp_path / "pool.json"
    mpath.write_text(json.dumps({"target": "t.txt", "systems": [{"name": "s", "source": "s.txt"}]}))
    pool = load_pool(str(mpath), threads=2)
    assert pool.sources["s"][1].tokens == ("s1",)
    assert PoolManifest.read(mpath).target == str(tmp_path / "t.txt")


def test_empty_target_line_is_data_error(write):
    m = _pool_files(write, ["t0", "", "t2"], [("a", ["x", "y", "z"])])
    with pytest.raises(DataError):
        load_pool(m)
