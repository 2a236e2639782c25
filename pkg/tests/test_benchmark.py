import importlib.util
from pathlib import Path

import pytest

BENCH = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_rank_modp.py"


@pytest.fixture(scope="module")
def bench():
    spec = importlib.util.spec_from_file_location("bench_rank_modp", BENCH)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def test_kernel_table_runs(bench):
    rows = bench.kernel_table([20, 30], repeats=1)
    assert [(n, r) for n, r, _, _ in rows] == [(20, 18), (30, 27)]


def test_backends_agree_end_to_end(bench):
    res = bench.end_to_end()
    assert res["numpy"][0] == "False"
    assert res["numba"][2] == res["numpy"][2] == "[10, 20, 15]"
