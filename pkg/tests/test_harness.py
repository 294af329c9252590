"""
Tests for sweep configuration, the identity and convergence suites,
reports and the command-line entry point.
"""

import copy
import json
import logging
import os

import pytest

from toeplitz_framework.core.exceptions import ConfigurationError
from toeplitz_framework.harness import cli, reports
from toeplitz_framework.harness.config import load_config, parse_config
from toeplitz_framework.harness.suites import (
    FAIL,
    PASS,
    SKIPPED,
    ConvergenceRow,
    evaluate_determinant,
    fit_decay,
    run_bench,
    run_convergence,
    run_identity_suite,
)
from toeplitz_framework.observability.metrics import get_metrics_collector
from toeplitz_framework.structmat import bordered_det

from conftest import BORDER_ONE, BORDER_TWO

CONFIG_DIR = os.path.join(os.path.dirname(__file__), "..", "config")

BASE = {
    "symbol": {"family": "exp", "params": {"t": 0.3}},
    "kind": "two-bordered",
    "n_grid": {"start": 3, "stop": 5},
    "borders": [
        {"family": "rational-combo", "params": BORDER_ONE},
        {"family": "rational-combo", "params": BORDER_TWO},
    ],
    "seed": 11,
    "logging": {"console_logging": False, "log_level": "CRITICAL"},
}

TRIDIAGONAL = {"family": "rational", "params": {"constant": 1.25, "linear": -0.5, "inverse": -0.5}}


def make_document(**changes):
    document = copy.deepcopy(BASE)
    document.update(changes)
    return document


def write_config(tmp_path, document, name="sweep.json"):
    path = tmp_path / name
    path.write_text(json.dumps(document))
    return str(path)


@pytest.fixture
def restore_logging():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers = handlers
    root.setLevel(level)


def test_parse_config_defaults():
    config = parse_config(make_document())
    assert config.tolerances.dci == 1e-10
    assert config.quadrature.start_nodes == 512
    assert config.n_grid.values == [3, 4, 5]
    setup = config.build()
    assert len(setup.borders) == 3
    assert len(setup.frames) == 8 and len(setup.corners) == 8


def test_parse_config_overrides():
    config = parse_config(make_document(), {"seed": 99, "format": None})
    assert config.seed == 99
    assert config.format == "csv"


@pytest.mark.parametrize("changes", [
    {"kind": "four-bordered"},
    {"n_grid": {"start": 5, "stop": 3}},
    {"n_grid": {"start": 1, "stop": 3}},
    {"unexpected": True},
    {"corners": [1.0]},
    {"tolerances": {"identity": 0.0}},
])
def test_invalid_configs(changes):
    with pytest.raises(ConfigurationError):
        parse_config(make_document(**changes))


def test_construction_errors_become_configuration_errors():
    document = make_document(borders=[
        {"family": "rational-combo", "params": {"poles": [1.0], "b": [1.0], "b_hat": [0.0]}},
        {"family": "rational-combo", "params": BORDER_TWO},
    ])
    with pytest.raises(ConfigurationError) as info:
        parse_config(document).build()
    assert info.value.context["cause"]["error"] == "PoleOnCircleError"


def test_border_spec_kinds_need_rational_combo():
    document = make_document(kind="zphi-bordered", borders=[{"family": "constant", "params": {"value": 1.0}}])
    with pytest.raises(ConfigurationError):
        parse_config(document).build()


def test_missing_and_yaml_configs(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(str(tmp_path / "absent.json"))
    setup = load_config(os.path.join(CONFIG_DIR, "converge_two_bordered.yaml"))
    assert setup.config.kind == "two-bordered"
    assert setup.n_values[0] == 10 and setup.n_values[-1] == 40
    assert load_config(os.path.join(CONFIG_DIR, "default_sweep.json")).config.workers == 4


def test_identity_suite_passes():
    names = [
        "dci-two-bordered",
        "dci-three-bordered",
        "dci-framed-N",
        "dci-fuzz",
        "biorthogonality",
        "recurrences",
        "kernel-determinant",
        "lu-factorization",
        "bordered-rhp",
    ]
    setup = parse_config(make_document(identities=names, workers=2)).build()
    summary = run_identity_suite(setup)
    assert summary.passed
    assert summary.counts == {PASS: len(names) * 3, FAIL: 0, SKIPPED: 0}
    assert [r.n for r in summary.results] == [n for n in (3, 4, 5) for _ in names]
    assert get_metrics_collector().get_counter("identity.passed", {"identity": "dci-fuzz"}) == 3


def test_rh_identities_for_tridiagonal_symbol():
    names = ["z-routes", "compatibility", "zphi-bordered-rhp", "x-jump"]
    document = make_document(symbol=TRIDIAGONAL, kind="pure", borders=[], identities=names, n_grid={"start": 2, "stop": 6})
    summary = run_identity_suite(parse_config(document).build())
    assert summary.passed
    assert summary.counts[SKIPPED] == 0


def test_trivial_symbol_skips_z_routes():
    document = make_document(
        symbol={"family": "constant", "params": {"value": 1.0}},
        kind="pure",
        borders=[],
        identities=["z-routes", "biorthogonality"],
        n_grid={"start": 2, "stop": 4},
    )
    summary = run_identity_suite(parse_config(document).build())
    statuses = {(r.identity, r.status) for r in summary.results}
    assert statuses == {("z-routes", SKIPPED), ("biorthogonality", PASS)}
    assert summary.passed
    skipped = [r for r in summary.results if r.status == SKIPPED]
    assert all(r.residual is None and "degeneracy floor" in r.detail for r in skipped)


def test_exp_symbol_z_routes_run_or_skip_without_failing():
    names = ["z-routes", "compatibility", "zphi-bordered-rhp"]
    document = make_document(kind="pure", borders=[], identities=names, n_grid={"start": 2, "stop": 12})
    summary = run_identity_suite(parse_config(document).build())
    assert summary.counts[FAIL] == 0
    statuses = {(r.identity, r.n): r.status for r in summary.results}
    assert all(statuses[(name, n)] == PASS for name in names for n in (2, 4, 6))
    # a floor above |q_6(0)| skips the same points
    document = make_document(kind="pure", borders=[], identities=["z-routes"], n_grid={"start": 6, "stop": 6}, degeneracy_floor=1e-4)
    strict = parse_config(document).build()
    assert [r.status for r in run_identity_suite(strict).results] == [SKIPPED]


def test_unknown_identity():
    setup = parse_config(make_document(identities=["dci-twelve-bordered"])).build()
    with pytest.raises(ConfigurationError):
        run_identity_suite(setup)


def test_convergence_report():
    setup = parse_config(make_document(n_grid={"start": 10, "stop": 30, "step": 4}, workers=3)).build()
    report = run_convergence(setup)
    assert [r.n for r in report.rows] == [10, 14, 18, 22, 26, 30]
    assert report.passed
    assert report.rows[-1].rel_err < report.rows[0].rel_err
    assert report.decay_note == "O(rho^-n) for 1 < rho < 2"
    text = reports.render(report, "csv")
    assert text.splitlines()[0] == "n,value_re,value_im,pred_re,pred_im,rel_err"
    assert len(text.splitlines()) == 7


def test_decay_note_uses_only_configured_borders():
    pure = parse_config(make_document(kind="pure", borders=[], n_grid={"start": 10, "stop": 14, "step": 2})).build()
    assert run_convergence(pure).decay_note == "O(rho^-n) for every rho > 1"
    document = make_document(kind="bordered", borders=[{"family": "rational-combo", "params": BORDER_TWO}])
    document["n_grid"] = {"start": 10, "stop": 14, "step": 2}
    assert run_convergence(parse_config(document).build()).decay_note == "O(rho^-n) for 1 < rho < 3"


def test_convergence_rejects_kinds_without_limit():
    setup = parse_config(make_document(kind="framed-M", borders=[], n_grid={"start": 0, "stop": 2})).build()
    with pytest.raises(ConfigurationError):
        run_convergence(setup)


def test_bordered_zl_convergence():
    document = make_document(kind="bordered-zl", ell=2, borders=[], n_grid={"start": 8, "stop": 16, "step": 4})
    report = run_convergence(parse_config(document).build())
    assert report.passed
    assert report.rows[-1].predicted == pytest.approx(0.045)


def test_reports_are_deterministic():
    renders = []
    for _ in range(2):
        setup = parse_config(make_document(identities=["dci-fuzz", "recurrences"], workers=2)).build()
        renders.append(reports.render(run_identity_suite(setup), "json"))
    assert renders[0] == renders[1]
    document = json.loads(renders[0])
    assert document["seed"] == 11 and document["passed"] is True


def test_fit_decay():
    rows = [ConvergenceRow(n, 1.0, 1.0, 2.0 ** (-n)) for n in range(4, 12)]
    assert fit_decay(rows) == pytest.approx(-0.6931471805599453, rel=1e-9)
    assert fit_decay(rows[:3]) is None
    flat = [ConvergenceRow(n, 1.0, 1.0, 0.0) for n in range(8)]
    assert fit_decay(flat) is None


def test_evaluate_determinant_kinds():
    setup = parse_config(make_document()).build()
    expected = bordered_det(setup.phi, setup.borders[:2], 6)
    assert evaluate_determinant(setup, 6) == expected
    for kind, start in (("semi-framed", 1), ("framed-N", 0), ("two-framed-K", 0), ("zphi-bordered", 1)):
        document = make_document(kind=kind, borders=[], n_grid={"start": start, "stop": 4})
        if kind == "zphi-bordered":
            document["borders"] = [{"family": "rational-combo", "params": BORDER_ONE}]
        value = evaluate_determinant(parse_config(document).build(), 4)
        assert not value.is_zero


def test_bench():
    setup = parse_config(make_document(bench_sizes=[4, 8])).build()
    table = run_bench(setup)
    assert [row.n for row in table.rows] == [4, 8]
    assert all(row.dci_agreement < 1e-10 for row in table.rows)
    assert table.asymptotic_time_ratio is not None
    assert reports.render(table, "csv").startswith(",".join(reports.BENCH_HEADER))
    with pytest.raises(ConfigurationError):
        run_bench(parse_config(make_document(bench_sizes=[2])).build())


def test_det_csv_guards_overflow():
    from toeplitz_framework.core.logcomplex import LogComplex

    line = reports.det_csv(3, LogComplex(800.0, 0.5)).splitlines()[1]
    assert line.split(",")[3] == "nan"


def test_cli_det(tmp_path, restore_logging):
    path = write_config(tmp_path, make_document())
    out = tmp_path / "det.json"
    assert cli.main(["det", "-c", path, "--n", "6", "-f", "json", "-o", str(out)]) == cli.EXIT_OK
    document = json.loads(out.read_text())
    setup = parse_config(make_document()).build()
    assert document["n"] == 6
    assert document["value"]["log_modulus"] == pytest.approx(evaluate_determinant(setup, 6).log_modulus)


def test_cli_identities_and_tolerance_failure(tmp_path, capsys, restore_logging):
    path = write_config(tmp_path, make_document(identities=["dci-fuzz"]))
    assert cli.main(["identities", "-c", path]) == cli.EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == ",".join(reports.IDENTITY_HEADER)
    assert cli.main(["identities", "-c", path, "--tol", "1e-300"]) == cli.EXIT_TOLERANCE


def test_cli_converge_writes_report(tmp_path, restore_logging):
    path = write_config(tmp_path, make_document(n_grid={"start": 20, "stop": 24, "step": 2}))
    out = tmp_path / "reports" / "converge.csv"
    assert cli.main(["converge", "-c", path, "-o", str(out)]) == cli.EXIT_OK
    assert out.read_text().startswith("n,value_re")


def test_cli_configuration_errors(tmp_path, capsys, restore_logging):
    document = make_document(borders=[
        {"family": "rational-combo", "params": {"poles": [1.0], "b": [1.0], "b_hat": [0.0]}},
        {"family": "rational-combo", "params": BORDER_TWO},
    ])
    path = write_config(tmp_path, document)
    assert cli.main(["identities", "-c", path]) == cli.EXIT_CONFIG
    error = json.loads(capsys.readouterr().err)
    assert error["error"] == "ConfigurationError"
    assert cli.main(["det", "-c", str(tmp_path / "absent.json")]) == cli.EXIT_CONFIG
    assert cli.main(["identities", "-c", path, "--tol", "-1"]) == cli.EXIT_CONFIG
    assert cli.main([]) == cli.EXIT_CONFIG


def test_cli_unwritable_output_is_configuration_error(tmp_path, capsys, restore_logging):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    path = write_config(tmp_path, make_document())
    out = blocker / "sub" / "det.csv"
    assert cli.main(["det", "-c", path, "--n", "4", "-o", str(out)]) == cli.EXIT_CONFIG
    error = json.loads(capsys.readouterr().err)
    assert error["error"] == "ConfigurationError"
    assert error["context"]["output"] == str(out)
