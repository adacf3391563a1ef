"""Command-line interface: suites, exit codes, report determinism,
cache integration."""

import contextlib
import io
import os

import pytest

from usylow.cli import (
    EXIT_BUDGET,
    EXIT_CHECK_FAILURE,
    EXIT_IO,
    EXIT_PASS,
    EXIT_USAGE,
    main,
)


def run_cli(*argv):
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = main(list(argv))
    return code, out.getvalue()


# ----------------------------------------------------------------------
# suites exit 0 and report pass lines
# ----------------------------------------------------------------------

def test_verify_prop31():
    code, out = run_cli(
        "verify", "--suite", "prop31", "--p", "5", "--k", "1", "--m", "2",
        "--samples", "50",
    )
    assert code == EXIT_PASS
    assert "status: pass" in out
    assert "FAIL" not in out


def test_verify_sylow_small():
    code, out = run_cli(
        "verify", "--suite", "sylow", "--p", "5", "--k", "1", "--n", "3",
    )
    assert code == EXIT_PASS
    assert "count = 125" in out


def test_verify_formulas_small():
    code, out = run_cli(
        "verify", "--suite", "formulas", "--p", "5", "--k", "1", "--n", "3",
        "--samples", "40",
    )
    assert code == EXIT_PASS


def test_verify_centralizer_small():
    code, out = run_cli(
        "verify", "--suite", "centralizer", "--p", "5", "--k", "1", "--n", "3",
    )
    assert code == EXIT_PASS


def test_verify_thm26():
    code, out = run_cli(
        "verify", "--suite", "thm26", "--p", "5", "--height", "0",
    )
    assert code == EXIT_PASS
    assert "skipped" in out


def test_compute_small():
    code, out = run_cli("compute", "--p", "5", "--k", "1", "--n", "3")
    assert code == EXIT_PASS
    assert "J_order" in out


def test_conjecture_small():
    code, out = run_cli("conjecture", "--p", "5", "--k", "1", "--n", "3")
    assert code == EXIT_PASS


def test_q_flag_equivalent_to_k():
    code1, out1 = run_cli("compute", "--p", "5", "--q", "25", "--n", "2")
    code2, out2 = run_cli("compute", "--p", "5", "--k", "2", "--n", "2")
    assert code1 == code2 == EXIT_PASS
    # same counts in both reports
    assert [l for l in out1.splitlines() if "order" in l] == \
        [l for l in out2.splitlines() if "order" in l]


# ----------------------------------------------------------------------
# exit codes
# ----------------------------------------------------------------------

def test_usage_error_bad_prime():
    code, _ = run_cli("compute", "--p", "3", "--k", "1", "--n", "3")
    assert code == EXIT_USAGE


def test_usage_error_q_not_power():
    code, _ = run_cli("compute", "--p", "5", "--q", "24", "--n", "3")
    assert code == EXIT_USAGE


def test_usage_error_missing_k_and_q():
    code, _ = run_cli("compute", "--p", "5", "--n", "3")
    assert code == EXIT_USAGE


def test_budget_error():
    code, _ = run_cli(
        "compute", "--p", "5", "--k", "1", "--n", "4", "--budget", "100",
    )
    assert code == EXIT_BUDGET


def test_io_error_mismatched_cache(tmp_path):
    # construct a cache for n=2, then request n=3 through the same file
    path = tmp_path / "g.grp"
    code, _ = run_cli(
        "construct", "--p", "5", "--k", "1", "--n", "2", "--out", str(path),
    )
    assert code == EXIT_PASS
    code, _ = run_cli(
        "construct", "--p", "5", "--k", "1", "--n", "3", "--out", str(path),
    )
    assert code == EXIT_IO


def test_io_error_unwritable_report():
    code, _ = run_cli(
        "compute", "--p", "5", "--k", "1", "--n", "2",
        "--out", "/nonexistent-dir/report.txt",
    )
    assert code == EXIT_IO


def test_argparse_usage_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nonsense", "--p", "5"])
    assert exc.value.code == EXIT_USAGE


# ----------------------------------------------------------------------
# determinism and caching
# ----------------------------------------------------------------------

def test_report_byte_determinism():
    args = ("verify", "--suite", "formulas", "--p", "5", "--k", "1",
            "--n", "3", "--samples", "30", "--seed", "7")
    _, out1 = run_cli(*args)
    _, out2 = run_cli(*args)
    assert out1 == out2


def test_seed_changes_are_still_passing():
    for seed in ("0", "1", "12345"):
        code, _ = run_cli(
            "verify", "--suite", "formulas", "--p", "5", "--k", "1",
            "--n", "3", "--samples", "30", "--seed", seed,
        )
        assert code == EXIT_PASS


def test_cache_round_trip_through_cli(tmp_path):
    args = ("verify", "--suite", "sylow", "--p", "5", "--k", "1", "--n", "3",
            "--cache-dir", str(tmp_path))
    code, out1 = run_cli(*args)
    assert code == EXIT_PASS
    assert os.path.exists(tmp_path / "S_p5_q5_n3.grp")
    code, out2 = run_cli(*args)
    assert code == EXIT_PASS
    assert out1 == out2  # cache hit produces the identical report


def test_report_written_to_file(tmp_path):
    path = tmp_path / "report.txt"
    code, out = run_cli(
        "compute", "--p", "5", "--k", "1", "--n", "2", "--out", str(path),
    )
    assert code == EXIT_PASS
    assert path.read_text() == out


def test_shuffle_gives_same_subgroups():
    base = None
    for seed in ("0", "1", "2"):
        code, out = run_cli(
            "compute", "--p", "5", "--k", "1", "--n", "3",
            "--shuffle", "--seed", seed,
        )
        assert code == EXIT_PASS
        orders = [l for l in out.splitlines()
                  if "X_order" in l or "J_order" in l]
        if base is None:
            base = orders
        assert orders == base
