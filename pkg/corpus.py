"""
Regression corpus of worked surfaces, curves and pencils with their known invariants
Each entry runs end to end and is diffed against the expected values.
"""
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

import config
from hilbert_engine import NonReducedInputError
from pencil_builder import analyze_pencil
from poly_core import CoefficientField, VariableSet
from poly_parser import parse_polynomial
from surface_analyzer import AnalysisOptions, analyze_curve, analyze_surface


class CorpusEntry(BaseModel):
    name: str
    kind: str = "surface"  # surface | curve | pencil
    expression: Optional[str] = None
    expression_file: Optional[str] = None  # relative to config.CORPUS_DIR
    g: Optional[str] = None
    h: Optional[str] = None
    m: Optional[int] = None
    expected: Dict[str, object] = {}
    recommended_field: str = "q"
    slow: bool = False
    assume_nodal: bool = False
    description: str = ""

    def text(self) -> str:
        if self.expression_file:
            return (Path(config.CORPUS_DIR) / self.expression_file).read_text(encoding="utf-8")
        return self.expression


class CorpusResult(BaseModel):
    name: str
    passed: bool
    field: str
    mismatches: List[str] = []
    measured: Dict[str, object] = {}
    error: Optional[str] = None
    elapsed_seconds: float = 0.0
    modular: bool = Field(False, description="computed over GF(p); Betti numbers are upper bounds")


def _pencil_entry(name: str, m: int, slow: bool) -> CorpusEntry:
    return CorpusEntry(
        name=name, kind="pencil", g="x^3 - yzt", h="t^3 - xyz", m=m, slow=slow,
        expected={"rank": 4, "predicted_type": 10 - 3 * m, "type": 10 - 3 * m},
        description=f"(x^3 - yzt)^{m} + (t^3 - xyz)^{m}",
    )


CORPUS: List[CorpusEntry] = [
    CorpusEntry(
        name="cayley", expression="xyz + xyt + xzt + yzt",
        expected={"d": [2] * 9, "c": [3] * 8, "b": [4] * 2, "tau": 4, "sigma_dimension": "zero",
                  "resolution_text": "0 -> S(-6)^2 -> S(-5)^8 -> S(-4)^9 -> S(-2)^4 -> S"},
        description="Cayley cubic, 4 nodes",
    ),
    CorpusEntry(
        name="kummer", expression_file="kummer.txt",
        expected={"d": [3] * 12, "c": [4] * 12, "b": [5] * 3, "tau": 16},
        description="Kummer quartic, 16 nodes",
    ),
    CorpusEntry(
        name="chmutov", expression_file="chmutov.txt", recommended_field=f"fp:{config.DEFAULT_PRIME}",
        assume_nodal=True, slow=True,
        expected={"d": [7] * 6 + [9] * 9, "c": [10] * 4 + [11] * 13, "b": [13] * 4 + [15],
                  "tau": 144, "mdr": 9},
        description="Chmutov octic, 144 nodes",
    ),
    CorpusEntry(
        name="ex1", expression="xyz - t^3",
        expected={"d": [1, 1, 2, 2, 2], "c": [3, 3], "b": [], "tau": 6},
    ),
    CorpusEntry(
        name="ex2", expression="txz + y^2z + x^3 - z^3",
        expected={"d": [1] + [2] * 6, "c": [3] * 5, "b": [4], "tau": 5},
    ),
    CorpusEntry(
        name="ex3", expression="x^5z + y^6 + x^4yt + xy^5",
        expected={"d": [1, 2, 3, 3], "c": [4], "b": [], "A_half": 16, "B": 27, "sigma_dimension": "one"},
    ),
    CorpusEntry(
        name="ex4", expression="(x^3 - yzt)^3 + (t^3 - xyz)^3", slow=True,
        expected={"d": [1, 4, 4, 7, 7, 8, 8, 8], "c": [5, 8, 9, 9, 9, 10, 10], "b": [10, 11],
                  "A_half": 38, "B": 119, "type": 1, "alpha": [-2, 1, 1, 1, 1], "beta": [0, 1]},
    ),
    CorpusEntry(
        name="ex4_1", expression="(x^3 - yzt)^4 + (t^3 - xyz)^4", slow=True,
        expected={"d": [1, 4, 4] + [11] * 5, "c": [5, 12, 12] + [13] * 4, "b": [14, 14],
                  "A_half": 81, "B": 491, "type": -2, "alpha": [-6, 1, 1, 2, 2], "beta": [1, 1]},
    ),
    CorpusEntry(
        name="ex5", expression="(x^4 - yzt^2)^4 + (t^4 - xyz^2)^4", slow=True,
        recommended_field=f"fp:{config.DEFAULT_PRIME}",
        expected={"d": [5, 5, 6, 6, 6, 12, 12, 12, 12, 13, 13, 15],
                  "c": [7, 7, 8, 13, 13, 13, 13, 14, 14, 14, 16, 16], "b": [14, 15, 17],
                  "A_half": 147, "B": 1382, "type": 1},
    ),
    _pencil_entry("ex6_1_m2", 2, slow=False),
    _pencil_entry("ex6_1_m3", 3, slow=True),
    _pencil_entry("ex6_1_m4", 4, slow=True),
    CorpusEntry(
        name="fermat3", expression="x^3 + y^3 + z^3 + t^3",
        expected={"d": [2] * 6, "c": [4] * 4, "b": [6], "tau": 0, "sigma_dimension": "empty"},
    ),
    CorpusEntry(
        name="fermat4", expression="x^4 + y^4 + z^4 + t^4",
        expected={"d": [3] * 6, "c": [6] * 4, "b": [9], "tau": 0, "sigma_dimension": "empty"},
    ),
    CorpusEntry(
        name="suspension_cusp", expression="y^2z - x^3 + t^3",
        expected={"tau": 4, "dupw_lower": 4},
        description="Suspension of the cuspidal cubic attains the lower Tjurina bound",
    ),
    CorpusEntry(
        name="cusp_curve", kind="curve", expression="y^2z - x^3",
        expected={"d": [1, 2, 2], "c": [3], "tau": 2, "type": 1},
    ),
    CorpusEntry(
        name="triangle_curve", kind="curve", expression="xyz",
        expected={"d": [1, 1], "c": [], "tau": 3, "type": 0, "classification": "free"},
    ),
]


def find_entries(filter_name: str = None, include_slow: bool = False) -> List[CorpusEntry]:
    """Entries whose name contains filter_name; slow ones only on request or exact match"""
    selected = []
    for entry in CORPUS:
        if filter_name and filter_name not in entry.name:
            continue
        if entry.slow and not include_slow and entry.name != filter_name:
            continue
        selected.append(entry)
    return selected


def _surface_measurements(report) -> Dict[str, object]:
    measured = {
        "d": report.betti.d, "c": report.betti.c, "b": report.betti.b,
        "tau": report.tau, "sigma_dimension": report.sigma_dimension,
        "resolution_text": report.resolution_text, "mdr": report.mdr,
        "type": report.type_record.t, "alpha": report.type_record.alpha, "beta": report.type_record.beta,
    }
    if report.hilbert_polynomial is not None:
        measured["A_half"] = report.hilbert_polynomial.A_half
        measured["B"] = report.hilbert_polynomial.B
    if report.bounds.dupw is not None:
        measured["dupw_lower"] = report.bounds.dupw.lower
    return measured


def run_entry(name: str, field_tag: str = None) -> CorpusResult:
    """Run one corpus entry in the current process"""
    entry = next(e for e in CORPUS if e.name == name)
    field_tag = field_tag or entry.recommended_field
    field = CoefficientField.from_tag(field_tag)
    start = time.time()
    measured: Dict[str, object] = {}
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if entry.kind == "curve":
                f = parse_polynomial(entry.text(), VariableSet.curve(), field)
                report = analyze_curve(f)
                measured = {"d": report.betti.d, "c": report.betti.c, "tau": report.tau,
                            "type": report.type_c, "classification": report.classification}
            elif entry.kind == "pencil":
                g = parse_polynomial(entry.g, field=field)
                h = parse_polynomial(entry.h, field=field)
                pencil = analyze_pencil(g, h, entry.m)
                measured = {"rank": pencil.rank, "predicted_type": pencil.predicted_t}
                if "type" in entry.expected:
                    options = AnalysisOptions(compute_mdr=False, verify=False)
                    measured["type"] = analyze_surface(pencil.f, options).type_record.t
            else:
                f = parse_polynomial(entry.text(), field=field)
                options = AnalysisOptions(assume_nodal=entry.assume_nodal, compute_mdr="mdr" in entry.expected)
                measured = _surface_measurements(analyze_surface(f, options))
    except NonReducedInputError as e:
        return CorpusResult(name=name, passed=False, field=field_tag, error=f"not reduced: {e}",
                            elapsed_seconds=round(time.time() - start, 3), modular=field.is_modular)
    except Exception as e:
        return CorpusResult(name=name, passed=False, field=field_tag, error=f"{type(e).__name__}: {e}",
                            elapsed_seconds=round(time.time() - start, 3), modular=field.is_modular)

    mismatches = []
    for key, expected in entry.expected.items():
        if measured.get(key) != expected:
            mismatches.append(f"{key}: expected {expected}, measured {measured.get(key)}")
    return CorpusResult(
        name=name,
        passed=not mismatches,
        field=field_tag,
        mismatches=mismatches,
        measured={k: v for k, v in measured.items() if k in entry.expected},
        elapsed_seconds=round(time.time() - start, 3),
        modular=field.is_modular,
    )


class CorpusRunner:
    def __init__(self, max_workers: int = None, include_slow: bool = False, field_tag: str = None,
                 verbose: bool = True):
        """
        Run corpus entries in parallel worker processes

        Args:
            max_workers: process pool size (default: config.CORPUS_MAX_WORKERS)
            include_slow: include entries tagged slow
            field_tag: override every entry's recommended field
            verbose: print the pass/fail table
        """
        self.max_workers = max_workers or config.CORPUS_MAX_WORKERS
        self.include_slow = include_slow
        self.field_tag = field_tag
        self.verbose = verbose

    def run(self, filter_name: str = None) -> List[CorpusResult]:
        entries = find_entries(filter_name, self.include_slow)
        if not entries:
            print(f"⚠️  No corpus entries match '{filter_name}'")
            return []
        if self.verbose:
            print(f"\n[CORPUS] Running {len(entries)} entries with {self.max_workers} workers")

        names = [entry.name for entry in entries]
        if self.max_workers == 1 or len(names) == 1:
            results = [run_entry(name, self.field_tag) for name in names]
        else:
            with ProcessPoolExecutor(max_workers=self.max_workers) as pool:
                results = list(pool.map(run_entry, names, [self.field_tag] * len(names)))

        if self.verbose:
            self._print_table(results)
        return results

    def _print_table(self, results: List[CorpusResult]):
        for result in results:
            marker = "✓" if result.passed else "⚠️ "
            caveat = " (modular)" if result.modular else ""
            print(f"  {marker} {result.name:<16} {result.field:<10} {result.elapsed_seconds:>8.2f}s{caveat}")
            if result.error:
                print(f"       {result.error}")
            for mismatch in result.mismatches:
                print(f"       {mismatch}")
        passed = sum(1 for r in results if r.passed)
        print(f"\n  {passed}/{len(results)} passed")


if __name__ == "__main__":
    import sys

    results = CorpusRunner().run(sys.argv[1] if len(sys.argv) > 1 else None)
    sys.exit(0 if all(r.passed for r in results) else 1)
