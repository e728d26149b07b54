import dataclasses

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oddsieve import bench, cli
from oddsieve.bench import AlgorithmId, BenchRecord, Model
from oddsieve.result import PrimeList


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate_oracle(capsys):
    code, out, err = run_cli(capsys, "enumerate", "--algo", "oracle", "--limit", "30")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 10 and lines[-1] == "29"
    assert err.strip().endswith("10")


def test_enumerate_index_wheel_to_file(tmp_path, capsys):
    path = tmp_path / "p.txt"
    code, _, _ = run_cli(capsys, "enumerate", "--algo", "index-wheel", "--limit", "11", "--out", str(path))
    assert code == 0
    assert path.read_text().splitlines() == ["2", "3", "5", "7", "11"]


def test_enumerate_below_domain(capsys):
    code, _, err = run_cli(capsys, "enumerate", "--algo", "atkin", "--limit", "3")
    assert code != 0
    assert "atkin" in err


def test_enumerate_unknown_algorithm(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["enumerate", "--algo", "bogus", "--limit", "30"])
    assert exc.value.code != 0


def test_enumerate_unwritable_path(capsys, tmp_path):
    code, _, _ = run_cli(
        capsys, "enumerate", "--algo", "oracle", "--limit", "30", "--out", str(tmp_path / "no" / "x.txt")
    )
    assert code != 0


def test_enumerate_even_limit_warns(capsys):
    code, out, err = run_cli(capsys, "enumerate", "--algo", "trial", "--limit", "30")
    assert code == 0
    assert out.splitlines()[-1] == "29"
    assert "adjusted" in err


@pytest.mark.parametrize("algo", [a.value for a in AlgorithmId])
def test_enumerate_is_deterministic(algo, tmp_path, capsys):
    paths = [tmp_path / "a.txt", tmp_path / "b.txt"]
    for p in paths:
        assert run_cli(capsys, "enumerate", "--algo", algo, "--limit", "5001", "--out", str(p))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


@pytest.mark.parametrize("limit", ["10000", "11", "12"])
def test_verify_passes(limit, capsys):
    code, out, _ = run_cli(capsys, "verify", "--limit", limit)
    assert code == 0
    assert out.count(": ok") == len(AlgorithmId)


def test_verify_rejects_small_limit(capsys):
    assert run_cli(capsys, "verify", "--limit", "10")[0] != 0


def test_verify_reports_corrupted_algorithm(monkeypatch, capsys):
    good = bench.ALGORITHMS[AlgorithmId.INDEX_ATKIN]

    def broken(n):
        res = good.run(n)
        primes = res.primes.copy()
        primes[5] += 2
        return PrimeList(primes, res.count)

    monkeypatch.setitem(bench.ALGORITHMS, AlgorithmId.INDEX_ATKIN, dataclasses.replace(good, run=broken))
    code, out, _ = run_cli(capsys, "verify", "--limit", "100")
    assert code != 0
    bad = [line for line in out.splitlines() if "MISMATCH" in line]
    assert len(bad) == 1
    assert bad[0].startswith("index-atkin") and "position 5" in bad[0] and "expected 13" in bad[0]


def test_first_divergence():
    a = np.array([2, 3, 5, 7])
    assert bench.first_divergence(a, a) is None
    assert bench.first_divergence(a, np.array([2, 3, 5, 9])) == (3, 7, 9)
    assert bench.first_divergence(a[:3], a) == (3, None, 7)
    assert bench.first_divergence(a, a[:3]) == (3, 7, None)


def test_bench_trial_pair(tmp_path, capsys):
    path = tmp_path / "b.csv"
    code, _, _ = run_cli(capsys, "bench", "--algos", "trial,index-trial", "--limits", "100000", "--csv", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "algorithm,n_max,elapsed_ns,modulo_ops,prime_count"
    recs = bench.read_csv(path)
    assert [r.algorithm for r in recs] == [AlgorithmId.TRIAL, AlgorithmId.INDEX_TRIAL]
    assert recs[0].modulo_ops == recs[1].modulo_ops > 0
    assert all(r.prime_count == 9592 and r.elapsed_ns > 0 for r in recs)


def test_bench_oracle_row(tmp_path, capsys):
    path = tmp_path / "b.csv"
    assert run_cli(capsys, "bench", "--algos", "oracle", "--limits", "1000", "--reps", "3", "--csv", str(path))[0] == 0
    (rec,) = bench.read_csv(path)
    assert (rec.algorithm, rec.n_max, rec.prime_count, rec.modulo_ops) == (AlgorithmId.ORACLE, 1000, 168, None)
    assert path.read_text().splitlines()[1].split(",")[3] == ""


def test_bench_verify_flag(tmp_path, capsys):
    path = tmp_path / "b.csv"
    argv = ["bench", "--algos", "atkin,wheel,index-wheel", "--limits", "1000,2000", "--verify", "--csv", str(path)]
    assert run_cli(capsys, *argv)[0] == 0
    assert len(bench.read_csv(path)) == 6


@pytest.mark.parametrize("limits", ["", ","])
def test_bench_empty_limits(limits, tmp_path, capsys):
    assert run_cli(capsys, "bench", "--algos", "oracle", "--limits", limits, "--csv", str(tmp_path / "x.csv"))[0] != 0


def test_bench_rejects_zero_reps(tmp_path, capsys):
    argv = ["bench", "--algos", "oracle", "--limits", "100", "--reps", "0", "--csv", str(tmp_path / "x.csv")]
    assert run_cli(capsys, *argv)[0] != 0


record_strategy = st.builds(
    BenchRecord,
    algorithm=st.sampled_from(list(AlgorithmId)),
    n_max=st.integers(2, 10**12),
    elapsed_ns=st.integers(1, 10**15),
    modulo_ops=st.one_of(st.none(), st.integers(0, 10**15)),
    prime_count=st.integers(1, 10**11),
)


@given(st.lists(record_strategy, max_size=20))
def test_csv_round_trip(tmp_path_factory, records):
    path = tmp_path_factory.mktemp("csv") / "r.csv"
    bench.write_csv(records, path)
    assert bench.read_csv(path) == records


def test_read_csv_rejects_wrong_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        bench.read_csv(path)


def test_fit_recovers_power_law():
    n = np.array([1e3, 1e4, 1e5, 1e6])
    f = bench.fit(n, 2 * n**1.5, Model.POWB)
    assert abs(f.coefficients[1] - 1.5) < 1e-6
    assert abs(f.coefficients[0] - 2) < 1e-6
    assert f.correlation == pytest.approx(1.0)


def test_fit_recovers_power_law_over_log():
    n = np.array([1e3, 1e4, 1e5, 1e6, 1e7])
    f = bench.fit(n, 3e-9 * n**1.41 / np.log(n), Model.POWB_LN)
    assert abs(f.coefficients[1] - 1.41) < 1e-6
    assert np.allclose(f.predict(n), 3e-9 * n**1.41 / np.log(n))


def test_fit_quadratic():
    n = np.array([1e3, 5e3, 1e4, 5e4])
    f = bench.fit(n, 4e-9 * n**2 + 3e-6 * n, Model.QUAD)
    assert f.coefficients == pytest.approx((4e-9, 3e-6))
    assert f.correlation == pytest.approx(1.0)


def test_fit_constant_data():
    f = bench.fit([1e3, 1e4, 1e5], [0.5, 0.5, 0.5], Model.POWB)
    assert f.correlation == 0.0
    assert abs(f.coefficients[1]) < 1e-9


def test_fit_needs_three_points():
    with pytest.raises(ValueError):
        bench.fit([10, 100], [1, 2], Model.POWB)


@given(
    st.floats(0.1, 2.5),
    st.floats(1e-9, 1e3),
    st.lists(st.integers(2, 10**8), min_size=3, max_size=8, unique=True),
)
def test_fit_exact_recovery_property(b, a, ns):
    n = np.array(sorted(ns), dtype=float)
    f = bench.fit(n, a * n**b, Model.POWB)
    assert abs(f.coefficients[1] - b) < 1e-6
    assert -1.0 <= f.correlation <= 1.0


def _write_synthetic(path, algos=("trial", "atkin"), count=4):
    recs = []
    for algo in algos:
        for j in range(count):
            n = 100 ** (1 + j)
            recs.append(BenchRecord(AlgorithmId(algo), n, 2 * 10 ** (3 + 3 * j), None, 1))
    bench.write_csv(recs, path)


def test_fit_command_reports_each_algorithm(tmp_path, capsys):
    path = tmp_path / "s.csv"
    _write_synthetic(path)
    code, out, _ = run_cli(capsys, "fit", "--csv", str(path), "--model", "powb")
    assert code == 0
    lines = out.splitlines()
    assert [ln.split()[0] for ln in lines] == ["trial", "atkin"]
    assert all("b=1.500000" in ln and "r=1.000000" in ln for ln in lines)


def test_fit_command_too_few_rows(tmp_path, capsys):
    path = tmp_path / "s.csv"
    _write_synthetic(path, count=2)
    assert run_cli(capsys, "fit", "--csv", str(path), "--model", "powb")[0] != 0


def test_fit_command_single_algorithm(tmp_path, capsys):
    path = tmp_path / "s.csv"
    _write_synthetic(path)
    code, out, _ = run_cli(capsys, "fit", "--csv", str(path), "--model", "quad", "--algo", "atkin")
    assert code == 0
    assert out.startswith("atkin model=quad")


def test_native_limit_rules():
    assert bench.native_limit(AlgorithmId.TRIAL, 100) == 99
    assert bench.native_limit(AlgorithmId.INDEX_ATKIN, 100) == 101
    assert bench.native_limit(AlgorithmId.ATKIN, 100) == 100
    assert bench.native_limit(AlgorithmId.INDEX_WHEEL, 12) == 11
    for algo, n in [(AlgorithmId.TRIAL, 6), (AlgorithmId.WHEEL, 9), (AlgorithmId.INDEX_WHEEL, 10), (AlgorithmId.ATKIN, 3)]:
        with pytest.raises(ValueError):
            bench.native_limit(algo, n)


@pytest.mark.parametrize("algo", list(AlgorithmId))
def test_adjusted_limits_keep_the_prime_set(algo):
    inclusive = bench.ALGORITHMS[algo].inclusive
    full = bench.oracle.eratosthenes(200).primes
    for n in (30, 31, 100, 101, 102):
        want = full[full <= n] if inclusive else full[full < n]
        assert np.array_equal(bench.run(algo, n).primes, want)
