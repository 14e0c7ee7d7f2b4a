import re

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from published_tables import H2_ACC0, H2_ROWS, records
from vqelab.errors import ConfigError, MetricError, ParseError, ValidationError
from vqelab.harness import (
    CSV_HEADER,
    ExperimentConfig,
    RunRecord,
    build_records,
    emit_plots,
    error_grid,
    excitation_ansatz,
    excitation_start,
    initial_parameters,
    load_molecule,
    make_ansatz,
    point_seed,
    read_records,
    read_summary,
    run_vqe,
    summarize,
    sweep,
    write_records,
)
from vqelab.harness.experiment import ansatz_state
from vqelab.harness.records import parse_records_csv, records_csv
from vqelab.measure import EstimatorMode, RotationError
from vqelab.optimize import OptimizerConfig
from vqelab.pauli import QubitHamiltonian, dense_matrix, exact_ground_energy
from vqelab.pulse import AnsatzSpec

Z1 = QubitHamiltonian.from_dict({"Z": 1.0})
ONE_QUBIT = (("blocks", 1), ("samples_per_block", 64), ("dt", 0.5))


def small(**kw):
    base = dict(n_start=-1, n_end=1, n_step=1, mode="analytic", workers=1,
                optimizer=OptimizerConfig(30, 0.1, 0.03))
    base.update(kw)
    return ExperimentConfig(**base)


# ---------------------------------------------------------------- config and grid


def test_config_validation():
    for bad in (dict(n_step=0), dict(n_start=2, n_end=1), dict(shots=0), dict(mode="exact"),
                dict(ansatz="ring"), dict(init_policy="zeros"), dict(repeats=0), dict(workers=0), dict(seed=-1)):
        with pytest.raises(ConfigError):
            ExperimentConfig(**bad)


def test_default_grid_has_61_points():
    g = error_grid(ExperimentConfig())
    assert g.size == 61 and g[0] == -15 and g[-1] == 15 and g[30] == 0.0
    np.testing.assert_allclose(np.diff(g), 0.5)


def test_grid_without_zero_rejected():
    with pytest.raises(ConfigError):
        error_grid(ExperimentConfig(n_start=1, n_end=5, n_step=1))
    with pytest.raises(ConfigError):
        error_grid(ExperimentConfig(n_start=-1, n_end=1, n_step=0.75))


def test_point_seeds_distinct_and_stable():
    seeds = {point_seed(7, i, r) for i in range(61) for r in range(3)}
    assert len(seeds) == 183
    assert point_seed(7, 3) == point_seed(7, 3, 0)
    assert point_seed(7, 3) != point_seed(8, 3)


def test_load_molecule():
    assert load_molecule("h2").n_qubits == 4
    assert load_molecule("heh+").n_qubits == 4
    with pytest.raises(ConfigError):
        load_molecule("lih")


def test_load_molecule_from_file(tmp_path):
    p = tmp_path / "z.pauli"
    p.write_text("format: pauli\nn: 1\nZ 1.0\n")
    assert exact_ground_energy(load_molecule(p)) == pytest.approx(-1.0)


# ---------------------------------------------------------------- ansatz and start


def test_excitation_start_prepares_hartree_fock():
    spec = excitation_ansatz(4)
    assert spec.n_params == 28
    psi = ansatz_state(spec, excitation_start(spec)).amplitudes
    assert abs(psi[0b0011]) == pytest.approx(1.0, abs=1e-9)


def test_excitation_start_energy_is_hartree_fock():
    h = load_molecule("h2")
    spec = excitation_ansatz(4)
    psi = ansatz_state(spec, excitation_start(spec)).amplitudes
    e = float(np.vdot(psi, dense_matrix(h) @ psi).real)
    assert e >= exact_ground_energy(h) - 1e-9
    assert e == pytest.approx(-1.836968, abs=1e-6)


def test_excitation_start_rejects_short_blocks():
    with pytest.raises(ConfigError):
        excitation_start(excitation_ansatz(4, samples_per_block=8))


def test_initial_parameter_policies():
    spec = make_ansatz("chain", 3, {})
    c = initial_parameters(spec, "constant")
    np.testing.assert_array_equal(c.reshape(-1, 2), np.tile([0.05, 0.0], (spec.n_params // 2, 1)))
    a, b = initial_parameters(spec, "uniform", 3), initial_parameters(spec, "uniform", 3)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, initial_parameters(spec, "uniform", 4))
    with pytest.raises(ConfigError):
        initial_parameters(spec, "zeros")


# ---------------------------------------------------------------- single run


def test_run_vqe_single_qubit_z():
    spec = AnsatzSpec(1, **dict(ONE_QUBIT))
    out = run_vqe(Z1, spec, RotationError(0), OptimizerConfig(100, 0.1, 1e-4), 0, EstimatorMode.analytic())
    assert out.energy == pytest.approx(-1.0, abs=1e-3)
    assert out.iterations <= 100
    assert out.exact_energy == pytest.approx(out.energy, abs=1e-12)


def test_run_vqe_dimension_mismatch():
    with pytest.raises(ConfigError):
        run_vqe(Z1, AnsatzSpec(2), RotationError(0))


def test_run_vqe_is_deterministic():
    h = load_molecule("h2")
    spec = excitation_ansatz(4)
    cfg = OptimizerConfig(15, 0.1, 0.03)
    a = run_vqe(h, spec, RotationError(5), cfg, 11, EstimatorMode.sampled(256), excitation_start(spec))
    b = run_vqe(h, spec, RotationError(5), cfg, 11, EstimatorMode.sampled(256), excitation_start(spec))
    assert a.energy == b.energy and a.iterations == b.iterations
    np.testing.assert_array_equal(a.best_params, b.best_params)


# ---------------------------------------------------------------- sweeps


def test_three_point_analytic_sweep():
    res = sweep(small(ansatz="chain", ansatz_overrides=ONE_QUBIT), Z1)
    assert [r.epsilon_degrees for r in res.records] == [-1.0, 0.0, 1.0]
    base = res.records[1]
    assert base.accuracy_deviation == 0.0 and base.iteration_deviation == 0.0
    # Z-only Hamiltonian: the readout error is invisible
    assert all(r.accuracy_deviation == 0.0 for r in res.records)


def test_z_only_molecule_part_is_error_immune():
    h = QubitHamiltonian.from_dict({"ZI": 0.4, "IZ": -0.7, "ZZ": 0.2, "II": -1.0})
    res = sweep(small(n_start=-10, n_end=10, n_step=5, ansatz="chain", init_policy="uniform",
                      ansatz_overrides=(("samples_per_block", 16),)), h)
    assert all(r.accuracy_deviation == 0.0 for r in res.records)


@pytest.fixture(scope="module")
def h2_analytic():
    cfg = small(n_start=-10, n_end=10, n_step=10, optimizer=OptimizerConfig(20, 0.1, 0.03))
    return sweep(cfg)


def test_analytic_variational_bound(h2_analytic):
    for e in h2_analytic.exact_energies:
        assert e >= h2_analytic.e_fci - 1e-9


def test_sampled_variational_band():
    h = load_molecule("h2")
    cfg = small(n_start=-5, n_end=5, n_step=5, mode="sampled", shots=256,
                optimizer=OptimizerConfig(20, 0.1, 0.03))
    res = sweep(cfg, h)
    band = 6 * h.one_norm() / np.sqrt(cfg.shots)
    for r, e in zip(res.records, res.exact_energies):
        assert r.energy >= res.e_fci - band
        assert e >= res.e_fci - 1e-9


def test_summary_recomputable(h2_analytic):
    assert summarize(h2_analytic.records) == h2_analytic.summary


def test_workers_do_not_change_output():
    cfg = small(n_start=-5, n_end=5, n_step=5, mode="sampled", shots=128,
                optimizer=OptimizerConfig(12, 0.1, 0.03))
    one = sweep(cfg)
    two = sweep(cfg.with_(workers=2))
    assert records_csv(one.records) == records_csv(two.records)


def test_repeats_average():
    cfg = small(n_start=0, n_end=0, mode="sampled", shots=64, optimizer=OptimizerConfig(8, 0.1, 0.03), repeats=2)
    rec = sweep(cfg).records[0]
    h = load_molecule("h2")
    spec = excitation_ansatz(4)
    outs = [
        run_vqe(h, spec, RotationError(0), cfg.optimizer, point_seed(0, 0, r), cfg.estimator, excitation_start(spec))
        for r in range(2)
    ]
    assert rec.energy == pytest.approx(np.mean([o.energy for o in outs]), abs=1e-15)
    assert rec.iterations == np.mean([o.iterations for o in outs])
    assert rec.seed == point_seed(0, 0, 0)


def test_build_records_requires_baseline():
    with pytest.raises(MetricError):
        build_records([(1.0, -1.0, 10, 0)], -1.1)


# ---------------------------------------------------------------- persistence


def test_empty_records_give_header_only(tmp_path):
    csv_path, summary_path = write_records([], None, tmp_path)
    assert csv_path.read_text() == ",".join(CSV_HEADER) + "\n"
    assert summary_path is None
    assert read_records(csv_path) == []


def test_one_record_round_trip(tmp_path):
    rec = build_records([(0.0, -1.2, 40, 99)], -1.25)
    csv_path, _ = write_records(rec, None, tmp_path)
    assert len(csv_path.read_text().splitlines()) == 2
    back = read_records(csv_path)[0]
    assert back.energy == rec[0].energy and back.iterations == 40 and back.seed == 99


def test_fixture_round_trip_is_bit_exact(tmp_path):
    recs = records(H2_ROWS, H2_ACC0)
    csv_path, summary_path = write_records(recs, summarize(recs), tmp_path, {"molecule": "h2"})
    back = read_records(csv_path)
    assert [r.accuracy_deviation for r in back] == [r.accuracy_deviation for r in recs]
    assert [r.iteration_deviation for r in back] == [r.iteration_deviation for r in recs]
    s = read_summary(summary_path)
    assert s["molecule"] == "h2"
    assert s["max_accuracy_deviation"] == summarize(recs).max_accuracy_deviation


def test_accuracy_column_has_five_decimals():
    text = records_csv(build_records([(0.0, -1.2, 40, 1)], -1.25))
    assert text.splitlines()[1].split(",")[4] == "96.00000"


def test_recomputed_deviations_match_csv(h2_analytic, tmp_path):
    csv_path, _ = write_records(h2_analytic.records, h2_analytic.summary, tmp_path)
    back = read_records(csv_path)
    again = build_records([(r.epsilon_degrees, r.energy, r.iterations, r.seed) for r in back], h2_analytic.e_fci)
    for a, b in zip(back, again):
        assert abs(a.accuracy_deviation - b.accuracy_deviation) <= 1e-9
        assert abs(a.iteration_deviation - b.iteration_deviation) <= 1e-9


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError):
        parse_records_csv("wrong,header\n")
    text = ",".join(CSV_HEADER) + "\n0.0,-1.0,10,0.0,99.0,0.0,1\n0.0,abc,10,0.0,99.0,0.0,1\n"
    with pytest.raises(ParseError, match="3"):
        parse_records_csv(text)


def test_write_failure_names_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="file"):
        write_records([], None, blocker / "sub")


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.floats(-2.0, -0.5), st.integers(1, 200), st.integers(0, 2**63)), min_size=1, max_size=8))
def test_csv_round_trip_property(rows):
    pts = [(float(i), e, it, s) for i, (e, it, s) in enumerate(rows)]
    pts[0] = (0.0, *pts[0][1:])
    recs = build_records(pts, -2.5)
    back = parse_records_csv(records_csv(recs))
    assert [(r.energy, r.iterations, r.seed, r.accuracy_deviation, r.iteration_deviation) for r in back] == [
        (r.energy, r.iterations, r.seed, r.accuracy_deviation, r.iteration_deviation) for r in recs
    ]


# ---------------------------------------------------------------- plots


def series_points(svg_text):
    group = re.search(r'<g id="series">(.*?)</g>\s*</g>', svg_text, re.S).group(1)
    return [(float(x), float(y)) for x, y in re.findall(r'<use [^>]*x="([-\d.]+)" y="([-\d.]+)"', group)]


def test_plots_have_one_marker_per_point(tmp_path):
    recs = [RunRecord(float(n), -1.0, 10, 99.0, 0.001 * n, 0.01 * n, 0) for n in np.arange(-15, 15.5, 0.5)]
    acc, it = emit_plots(recs, tmp_path)
    assert acc.suffix == it.suffix == ".svg"
    for p in (acc, it):
        text = p.read_text()
        assert len(series_points(text)) == 61
        assert "degrees" in text


def test_plot_x_axis_is_sorted(tmp_path):
    recs = records(H2_ROWS, H2_ACC0)[::-1]
    acc, _ = emit_plots(recs, tmp_path)
    xs = [x for x, _ in series_points(acc.read_text())]
    assert xs == sorted(xs) and len(xs) == 21


def test_single_point_plot(tmp_path):
    acc, it = emit_plots([RunRecord(0.0, -1.0, 10, 99.0, 0.0, 0.0, 0)], tmp_path)
    assert len(series_points(acc.read_text())) == 1


def test_plots_reject_empty(tmp_path):
    with pytest.raises(ValidationError):
        emit_plots([], tmp_path)


def test_plots_are_byte_stable(tmp_path):
    recs = records(H2_ROWS, H2_ACC0)
    a, _ = emit_plots(recs, tmp_path / "a")
    b, _ = emit_plots(recs, tmp_path / "b")
    assert a.read_bytes() == b.read_bytes()
