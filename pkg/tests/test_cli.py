import json
import subprocess
import sys

import pytest

from stonedual.algebra import SemigroupMorphism
from stonedual.cli import run
from stonedual.duality import counit_epsilon, iso_categories
from stonedual.io import (CofunctorFile, MorphismFile, dumps_canonical,
                          instance_to_dict, load_instance, save_instance)
from stonedual.zoo import gen_i, gen_pair_groupoid, gen_pt


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, obj in (("pt2", gen_pt(2)), ("i2", gen_i(2)),
                      ("k2", gen_pair_groupoid(2)),
                      ("k3", gen_pair_groupoid(3))):
        path = tmp_path / f"{name}.json"
        save_instance(obj, path)
        out[name] = str(path)
    eps = counit_epsilon(gen_pair_groupoid(2))
    src = tmp_path / "eps_src.json"
    save_instance(eps.source, src)
    cof = tmp_path / "eps.json"
    save_instance(CofunctorFile(eps, "eps_src.json", "k2.json"), cof)
    out["cof"] = str(cof)
    I, P = gen_i(2), gen_pt(2)
    incl = tuple(P.names.index(nm) for nm in I.names)
    morph = tmp_path / "incl.json"
    save_instance(MorphismFile(SemigroupMorphism(I, P, incl),
                               "i2.json", "pt2.json"), morph)
    out["morph"] = str(morph)
    out["dir"] = tmp_path
    return out


# -- io ------------------------------------------------------------------------

def test_serialization_is_byte_exact(files):
    for key in ("pt2", "i2", "k2", "cof", "morph"):
        path = files[key]
        text = open(path).read()
        assert dumps_canonical(instance_to_dict(load_instance(path))) == text


def test_morphism_file_resolves_relative_paths(files):
    mf = load_instance(files["morph"])
    assert isinstance(mf, MorphismFile)
    assert mf.morphism.source.names == gen_i(2).names
    assert mf.morphism.target.names == gen_pt(2).names


def test_loader_rejects_schema_problems(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "semigroup"}')
    assert run(["check", str(bad)]) == 2
    bad.write_text("not json")
    assert run(["check", str(bad)]) == 2
    bad.write_text('{"kind": "nope"}')
    assert run(["check", str(bad)]) == 2
    assert run(["check", str(tmp_path / "absent.json")]) == 2


def test_loader_flags_math_failures_as_exit_1(tmp_path):
    # shape-valid but non-associative
    payload = {"kind": "semigroup", "elements": ["a", "b"],
               "mult": [[0, 1], [0, 0]], "star": [0, 1]}
    path = tmp_path / "nonassoc.json"
    path.write_text(json.dumps(payload))
    assert run(["check", str(path)]) == 1


def test_out_of_range_index_is_schema_error(tmp_path):
    payload = {"kind": "semigroup", "elements": ["a"],
               "mult": [[3]], "star": [0]}
    path = tmp_path / "range.json"
    path.write_text(json.dumps(payload))
    assert run(["check", str(path)]) == 2


# -- commands --------------------------------------------------------------------

def test_check_and_classify(files, capsys):
    assert run(["check", files["pt2"]]) == 0
    assert run(["classify", files["pt2"]]) == 0
    out = capsys.readouterr().out
    assert "range=true" in out
    assert "corestriction=false" in out


def test_classify_needs_a_semigroup(files):
    assert run(["classify", files["k2"]]) == 2


def test_germs_command(files, tmp_path, capsys):
    out = tmp_path / "germ.json"
    assert run(["germs", files["pt2"], "-o", str(out)]) == 0
    G = load_instance(str(out))
    assert iso_categories(G, gen_pair_groupoid(2)) is not None


def test_germs_rejects_non_preboolean(tmp_path):
    payload = {"kind": "semigroup", "elements": ["c0", "c1", "c2"],
               "mult": [[0, 0, 0], [0, 1, 1], [0, 1, 2]],
               "star": [0, 1, 2]}
    path = tmp_path / "chain.json"
    path.write_text(json.dumps(payload))
    assert run(["germs", str(path), "-o", str(tmp_path / "g.json")]) == 1


def test_slices_command(files, tmp_path, capsys):
    out = tmp_path / "s.json"
    assert run(["slices", files["k2"], "-o", str(out)]) == 0
    assert load_instance(str(out)).n == 9
    assert run(["slices", files["k2"], "--bislices", "-o", str(out)]) == 0
    assert load_instance(str(out)).n == 7


def test_slices_size_guard(files, tmp_path, monkeypatch):
    out = str(tmp_path / "s.json")
    assert run(["slices", files["k3"], "--max-size", "10", "-o", out]) == 2
    monkeypatch.setenv("SDL_MAX_SIZE", "10")
    assert run(["slices", files["k3"], "-o", out]) == 2
    monkeypatch.delenv("SDL_MAX_SIZE")
    assert run(["slices", files["k3"], "-o", out]) == 0


def test_roundtrip_semigroup(files, capsys):
    assert run(["roundtrip", files["i2"]]) == 0
    out = capsys.readouterr().out
    assert "PASS unit-injective" in out
    assert "INFO unit-iso=False" in out
    assert "PASS bd/corestricted-unit-preserves-all-tables" in out


def test_roundtrip_category(files, capsys):
    assert run(["roundtrip", files["k2"]]) == 0
    out = capsys.readouterr().out
    assert "PASS counit-bijective-on-arrows" in out
    assert "PASS germ-of-slices-iso-to-original" in out


def test_adjunction_single_and_corpus(files, tmp_path, capsys):
    assert run(["adjunction", files["pt2"]]) == 0
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    for key in ("pt2", "i2", "k2"):
        (corpus / f"{key}.json").write_text(open(files[key]).read())
    assert run(["adjunction", "--corpus", str(corpus)]) == 0
    out = capsys.readouterr().out
    assert "PASS i2.json" in out and "PASS pt2.json" in out
    (corpus / "zz.json").write_text("{broken")
    assert run(["adjunction", "--corpus", str(corpus)]) == 2


def test_adjunction_requires_input(files):
    with pytest.raises(SystemExit):
        run(["adjunction"])


def test_morphism_check_command(files, capsys):
    incl = ",".join(str(gen_pt(2).names.index(nm)) for nm in gen_i(2).names)
    for t in ("1", "2", "3", "4"):
        assert run(["morphism", "check", files["i2"], files["pt2"],
                    incl, "--type", t]) == 0
    assert run(["morphism", "check", files["pt2"], files["pt2"],
                ",".join("0" * 9), "--type", "1"]) == 1
    out = capsys.readouterr().out
    assert "FAIL type-1-morphism witness=" in out
    assert run(["morphism", "check", files["i2"], files["pt2"],
                "0,1,2", "--type", "1"]) == 2
    assert run(["morphism", "check", files["i2"], files["pt2"],
                "zero,one", "--type", "1"]) == 2


def test_translate_command(files, capsys):
    assert run(["translate", files["cof"]]) == 0
    out = capsys.readouterr().out
    assert "f0=" in out and "f1=" in out
    assert "PASS covering-round-trip-exact" in out


def test_zoo_command(tmp_path, capsys):
    out = tmp_path / "x.json"
    assert run(["zoo", "pt", "2", "-o", str(out)]) == 0
    assert load_instance(str(out)).n == 9
    assert run(["zoo", "free-arrow", "-o", str(out)]) == 0
    assert load_instance(str(out)).n_arr == 3
    assert run(["zoo", "pt", "-o", str(out)]) == 2
    assert run(["zoo", "nonesuch", "1", "-o", str(out)]) == 2
    assert run(["zoo", "pt", "9", "-o", str(out)]) == 2


def test_every_zoo_output_passes_check(tmp_path):
    cases = [["pt", "1"], ["pt", "2"], ["i", "2"], ["triangular", "2"],
             ["triangular", "3"], ["pair-groupoid", "1"],
             ["pair-groupoid", "2"], ["pair-groupoid", "3"], ["free-arrow"]]
    for i, args in enumerate(cases):
        out = tmp_path / f"z{i}.json"
        assert run(["zoo", *args, "-o", str(out)]) == 0
        assert run(["check", str(out)]) == 0


def test_search_command(capsys):
    assert run(["search-no-cosupport", "--max-order", "4",
                "--budget", "0.0"]) == 0
    assert "found=False" in capsys.readouterr().out


def test_console_script(files):
    proc = subprocess.run([sys.executable, "-m", "stonedual.cli",
                           "check", files["pt2"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "PASS semigroup-axioms" in proc.stdout
