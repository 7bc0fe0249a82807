import pytest

from corpus import CORPUS, CorpusRunner, find_entries, run_entry


def test_entry_names_are_unique():
    names = [entry.name for entry in CORPUS]
    assert len(names) == len(set(names))


def test_find_entries_skips_slow_unless_requested():
    fast = find_entries()
    assert all(not entry.slow for entry in fast)
    assert "chmutov" not in {entry.name for entry in fast}
    assert [entry.name for entry in find_entries("chmutov")] == ["chmutov"]
    assert len(find_entries(include_slow=True)) == len(CORPUS)


def test_expression_files_load():
    kummer = next(entry for entry in CORPUS if entry.name == "kummer")
    assert "x^4" in kummer.text()


@pytest.mark.parametrize("name", ["cayley", "ex1", "cusp_curve", "triangle_curve", "suspension_cusp"])
def test_fast_entries_pass(name):
    result = run_entry(name)
    assert result.passed, result.mismatches or result.error


def test_modular_override_is_flagged():
    result = run_entry("cayley", "fp:32003")
    assert result.modular
    assert result.passed


def test_runner_in_process(capsys):
    results = CorpusRunner(max_workers=1).run("curve")
    assert {r.name for r in results} == {"cusp_curve", "triangle_curve"}
    assert all(r.passed for r in results)
    assert "2/2 passed" in capsys.readouterr().out


@pytest.mark.slow
def test_full_corpus():
    results = CorpusRunner(include_slow=True).run()
    assert all(r.passed for r in results)
