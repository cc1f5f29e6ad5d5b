"""Tests for the declarative scenario, sweep, and pump configuration layer."""

import json

import numpy as np
import pytest

from eitconvert import (
    ConfigValidationError,
    ScenarioConfig,
    SweepSpec,
    PumpSpec,
    UnitSystem,
    load_scenario,
    write_channel,
)
from eitconvert.config import populations_from_trajectory, set_by_path


def minimal_doc(**overrides):
    """A valid single-lambda scenario document; overrides patch dotted paths."""
    doc = {
        "scheme": {"kind": "single-lambda", "D_p": 500.0, "ccp2": 10.0},
        "units": {"gamma_2pi_MHz": 4.56, "T_p_us": 0.2},
        "protocol": {"eta": 4.0, "kappa": 1.35},
    }
    for path, value in overrides.items():
        set_by_path(doc, path, value)
    return doc


def cesium_doc(populations, **overrides):
    doc = {
        "scheme": {
            "kind": "cesium-d1",
            "direction": "sigma-->sigma+",
            "populations": list(populations),
            "alpha_p": 270.0,
            "alpha_c": 270.0,
        },
        "units": {"gamma_2pi_MHz": 4.56, "T_p_us": 0.2},
        "protocol": {"eta": 4.0, "kappa": 1.35},
    }
    for path, value in overrides.items():
        set_by_path(doc, path, value)
    return doc


def error_paths(excinfo):
    return list(excinfo.value.paths)


class TestScenarioValidation:
    def test_minimal_doc_parses_with_defaults(self):
        config = ScenarioConfig.from_dict(minimal_doc())
        assert config.engines == ("analytic",)
        assert config.out_dir == "runs"
        assert config.protocol.kappa == 1.35
        assert config.protocol.t_s_us == 0.0
        assert config.grid.ramp_fraction == 0.2
        assert config.grid.grid_check is False

    def test_missing_units_block_lists_both_fields(self):
        doc = minimal_doc()
        doc["units"] = {}
        with pytest.raises(ConfigValidationError) as excinfo:
            ScenarioConfig.from_dict(doc)
        paths = error_paths(excinfo)
        assert "units.gamma_2pi_MHz" in paths
        assert "units.T_p_us" in paths

    def test_unknown_field_is_rejected_with_its_path(self):
        with pytest.raises(ConfigValidationError) as excinfo:
            ScenarioConfig.from_dict(minimal_doc(**{"units.bogus": 1.0}))
        assert "units.bogus" in error_paths(excinfo)

    def test_eta_and_omega_w_are_mutually_exclusive(self):
        with pytest.raises(ConfigValidationError) as excinfo:
            ScenarioConfig.from_dict(minimal_doc(**{"protocol.Omega_w": 0.5}))
        assert any("protocol" in p for p in error_paths(excinfo))

    def test_protocol_needs_one_control_strength(self):
        doc = minimal_doc()
        doc["protocol"] = {"kappa": 1.35}
        with pytest.raises(ConfigValidationError):
            ScenarioConfig.from_dict(doc)

    def test_omega_r_and_control_ratio_are_mutually_exclusive(self):
        with pytest.raises(ConfigValidationError):
            ScenarioConfig.from_dict(minimal_doc(**{
                "protocol.Omega_r": 0.5,
                "protocol.control_ratio": 1.0,
            }))

    def test_single_lambda_needs_exactly_one_of_dc_ccp2(self):
        with pytest.raises(ConfigValidationError):
            ScenarioConfig.from_dict(minimal_doc(**{"scheme.D_c": 100.0}))
        doc = minimal_doc()
        del doc["scheme"]["ccp2"]
        with pytest.raises(ConfigValidationError):
            ScenarioConfig.from_dict(doc)

    def test_single_lambda_requires_d_p(self):
        doc = minimal_doc()
        del doc["scheme"]["D_p"]
        with pytest.raises(ConfigValidationError) as excinfo:
            ScenarioConfig.from_dict(doc)
        assert "scheme.D_p" in error_paths(excinfo)

    def test_cesium_populations_need_seven_entries(self):
        with pytest.raises(ConfigValidationError) as excinfo:
            ScenarioConfig.from_dict(cesium_doc([0.5, 0.5]))
        assert "scheme.populations" in error_paths(excinfo)

    def test_cesium_needs_populations_or_trajectory_not_both(self):
        doc = cesium_doc(np.full(7, 1 / 7))
        del doc["scheme"]["populations"]
        with pytest.raises(ConfigValidationError):
            ScenarioConfig.from_dict(doc)
        with pytest.raises(ConfigValidationError):
            ScenarioConfig.from_dict(cesium_doc(
                np.full(7, 1 / 7), **{"scheme.pump_trajectory": "traj.csv"}))

    def test_bad_direction_is_rejected(self):
        with pytest.raises(ConfigValidationError) as excinfo:
            ScenarioConfig.from_dict(cesium_doc(
                np.full(7, 1 / 7), **{"scheme.direction": "sideways"}))
        assert "scheme.direction" in error_paths(excinfo)

    def test_unknown_scheme_kind_is_rejected(self):
        with pytest.raises(ConfigValidationError) as excinfo:
            ScenarioConfig.from_dict(minimal_doc(**{"scheme.kind": "rubidium"}))
        assert "scheme.kind" in error_paths(excinfo)

    def test_nonpositive_numbers_are_rejected(self):
        for path in ("units.T_p_us", "units.gamma_2pi_MHz", "protocol.eta",
                     "protocol.kappa", "scheme.D_p"):
            with pytest.raises(ConfigValidationError):
                ScenarioConfig.from_dict(minimal_doc(**{path: -1.0}))

    def test_unknown_engine_is_rejected(self):
        with pytest.raises(ConfigValidationError) as excinfo:
            ScenarioConfig.from_dict(minimal_doc(engines=["fem"]))
        assert any("engines" in p for p in error_paths(excinfo))

    def test_grid_bounds(self):
        with pytest.raises(ConfigValidationError):
            ScenarioConfig.from_dict(minimal_doc(**{"grid.n_z": 4}))
        with pytest.raises(ConfigValidationError):
            ScenarioConfig.from_dict(minimal_doc(**{"grid.ramp_fraction": -0.1}))

    def test_errors_are_collected_not_first_only(self):
        doc = minimal_doc(**{"scheme.D_p": -5.0, "protocol.kappa": -1.0})
        doc["units"] = {}
        with pytest.raises(ConfigValidationError) as excinfo:
            ScenarioConfig.from_dict(doc)
        paths = error_paths(excinfo)
        assert "scheme.D_p" in paths
        assert "protocol.kappa" in paths
        assert "units.T_p_us" in paths

    def test_load_scenario_missing_file(self, tmp_path):
        with pytest.raises(ConfigValidationError):
            load_scenario(tmp_path / "absent.json")

    def test_load_scenario_bad_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigValidationError):
            load_scenario(path)


class TestResolvedControls:
    def test_eta_route_reproduces_requested_eta(self):
        config = ScenarioConfig.from_dict(minimal_doc())
        scheme = config.build_scheme()
        controls = config.controls(scheme)
        params = write_channel(scheme, controls.Omega_w, controls.T_p, 1.35)
        assert abs(params.eta - 4.0) < 1e-9

    def test_explicit_omega_w_is_in_gamma_units(self):
        doc = minimal_doc()
        doc["protocol"] = {"Omega_w": 5.0, "kappa": 1.35}
        config = ScenarioConfig.from_dict(doc)
        scheme = config.build_scheme()
        controls = config.controls(scheme)
        assert abs(controls.Omega_w - 5.0 * scheme.Gamma_w) < 1e-12

    def test_ccp2_scheme_defaults_to_delay_matched_read_control(self):
        config = ScenarioConfig.from_dict(minimal_doc())
        scheme = config.build_scheme()
        controls = config.controls(scheme)
        assert abs(controls.Omega_r / controls.Omega_w
                   - np.sqrt(10.0)) < 1e-12

    def test_control_ratio_overrides_default(self):
        config = ScenarioConfig.from_dict(
            minimal_doc(**{"protocol.control_ratio": 2.0}))
        scheme = config.build_scheme()
        controls = config.controls(scheme)
        assert abs(controls.Omega_r - 2.0 * controls.Omega_w) < 1e-12

    def test_cesium_default_ratio_is_one(self):
        config = ScenarioConfig.from_dict(cesium_doc(np.full(7, 1 / 7)))
        scheme = config.build_scheme()
        controls = config.controls(scheme)
        assert abs(controls.Omega_r - controls.Omega_w) < 1e-12

    def test_t_p_converts_through_units(self):
        config = ScenarioConfig.from_dict(minimal_doc())
        units = UnitSystem(gamma_2pi_MHz=4.56)
        assert abs(config.units.T_p - units.time_in(0.2)) < 1e-12


class TestTrajectoryPopulations:
    def write_trajectory(self, path, t_name, t_values, rows):
        header = [t_name] + [f"p_m{m:+d}" for m in range(-3, 4)]
        header.append("excited_fraction")
        lines = [",".join(header)]
        for t, row in zip(t_values, rows):
            lines.append(",".join(f"{v!r}" for v in [t] + list(row)))
        path.write_text("\n".join(lines) + "\n")

    def test_nearest_row_and_renormalization(self, tmp_path):
        path = tmp_path / "traj.csv"
        early = [0.9] + [0.0] * 6 + [0.1]
        late = [0.0] * 6 + [0.8] + [0.2]
        self.write_trajectory(path, "t_us", [0.0, 1.0], [early, late])
        units = UnitSystem(gamma_2pi_MHz=4.56)
        p = populations_from_trajectory(path, 0.9, units)
        assert abs(p[6] - 1.0) < 1e-12
        assert abs(p.sum() - 1.0) < 1e-12
        p0 = populations_from_trajectory(path, 0.1, units)
        assert abs(p0[0] - 1.0) < 1e-12

    def test_internal_time_column(self, tmp_path):
        path = tmp_path / "traj.csv"
        units = UnitSystem(gamma_2pi_MHz=4.56)
        iso = [1 / 7] * 7 + [0.0]
        t_internal = [0.0, units.time_in(1.0)]
        self.write_trajectory(path, "t", t_internal, [iso, iso])
        p = populations_from_trajectory(path, 1.0, units)
        assert np.max(np.abs(p - 1 / 7)) < 1e-12

    def test_missing_file_reports_field_path(self, tmp_path):
        units = UnitSystem(gamma_2pi_MHz=4.56)
        with pytest.raises(ConfigValidationError) as excinfo:
            populations_from_trajectory(tmp_path / "none.csv", 0.5, units)
        assert "scheme.pump_trajectory" in excinfo.value.paths

    def test_scenario_consumes_trajectory(self, tmp_path):
        path = tmp_path / "traj.csv"
        stretched = [0.0] * 6 + [1.0] + [0.0]
        self.write_trajectory(path, "t_us", [0.0], [stretched])
        doc = cesium_doc([0.0] * 7, **{
            "scheme.pump_trajectory": str(path),
            "scheme.pump_time_us": 0.0,
        })
        del doc["scheme"]["populations"]
        config = ScenarioConfig.from_dict(doc, base_dir=tmp_path)
        scheme = config.build_scheme()
        assert abs(scheme.p[-1] - 1.0) < 1e-12


class TestSweepSpec:
    def sweep_doc(self, axes):
        return {"template": minimal_doc(), "axes": axes}

    def test_values_axis(self):
        spec = SweepSpec.from_dict(self.sweep_doc(
            [{"path": "protocol.eta", "values": [2.5, 4.0, 8.0]}]))
        assert spec.shape == (3,)
        assert spec.size == 3
        assert spec.assignments(1) == {"protocol.eta": 4.0}

    def test_log_axis_hits_endpoints(self):
        spec = SweepSpec.from_dict(self.sweep_doc([{
            "path": "scheme.ccp2", "start": 0.1, "stop": 10.0,
            "count": 9, "scale": "log",
        }]))
        values = [spec.assignments(i)["scheme.ccp2"] for i in range(9)]
        assert abs(values[0] - 0.1) < 1e-15
        assert abs(values[-1] - 10.0) < 1e-12
        assert abs(values[4] - 1.0) < 1e-12

    def test_axis_major_ordering(self):
        spec = SweepSpec.from_dict(self.sweep_doc([
            {"path": "protocol.eta", "values": [2.0, 3.0]},
            {"path": "scheme.ccp2", "values": [0.5, 1.0, 2.0]},
        ]))
        assert spec.shape == (2, 3)
        assert spec.size == 6
        assert spec.assignments(0) == {"protocol.eta": 2.0,
                                       "scheme.ccp2": 0.5}
        assert spec.assignments(2) == {"protocol.eta": 2.0,
                                       "scheme.ccp2": 2.0}
        assert spec.assignments(3) == {"protocol.eta": 3.0,
                                       "scheme.ccp2": 0.5}

    def test_point_deep_copies_template(self):
        spec = SweepSpec.from_dict(self.sweep_doc(
            [{"path": "protocol.eta", "values": [2.0, 3.0]}]))
        doc = spec.point(0)
        doc["protocol"]["eta"] = 99.0
        assert spec.point(0)["protocol"]["eta"] == 2.0
        assert spec.point(1)["protocol"]["eta"] == 3.0

    def test_invalid_template_fails_at_load(self):
        doc = self.sweep_doc([{"path": "protocol.eta", "values": [2.0]}])
        doc["template"]["units"] = {}
        with pytest.raises(ConfigValidationError):
            SweepSpec.from_dict(doc)

    def test_axis_validation(self):
        with pytest.raises(ConfigValidationError):
            SweepSpec.from_dict(self.sweep_doc(
                [{"path": "protocol.eta", "values": []}]))
        with pytest.raises(ConfigValidationError):
            SweepSpec.from_dict(self.sweep_doc([{
                "path": "protocol.eta", "start": 1.0, "stop": 2.0,
                "count": 3, "scale": "cubic",
            }]))
        with pytest.raises(ConfigValidationError):
            SweepSpec.from_dict(self.sweep_doc([{"values": [1.0]}]))

    def test_set_by_path_creates_nested_blocks(self):
        doc = {}
        set_by_path(doc, "grid.n_z", 64)
        assert doc == {"grid": {"n_z": 64}}


class TestPumpSpec:
    def test_defaults(self):
        spec = PumpSpec.from_dict({
            "polarization": "sigma+",
            "Omega_over_Gamma": 1.2,
            "duration_us": 1.6,
        })
        assert spec.gamma_2pi_MHz == 4.56
        assert spec.n_samples == 201
        assert spec.steady is True
        assert np.max(np.abs(np.asarray(spec.initial) - 1 / 7)) < 1e-12

    def test_pump_config_converts_duration(self):
        spec = PumpSpec.from_dict({
            "polarization": "pi",
            "Omega_over_Gamma": 1.0,
            "duration_us": 2.0,
        })
        config = spec.pump_config()
        units = UnitSystem(gamma_2pi_MHz=4.56)
        assert abs(config.duration - units.time_in(2.0)) < 1e-12

    def test_validation(self):
        with pytest.raises(ConfigValidationError):
            PumpSpec.from_dict({"polarization": "sigma*",
                                "Omega_over_Gamma": 1.0,
                                "duration_us": 1.0})
        with pytest.raises(ConfigValidationError):
            PumpSpec.from_dict({"polarization": "pi",
                                "Omega_over_Gamma": 1.0,
                                "duration_us": -1.0})
        with pytest.raises(ConfigValidationError):
            PumpSpec.from_dict({"polarization": "pi",
                                "Omega_over_Gamma": 1.0,
                                "duration_us": 1.0,
                                "initial": [1.0, 0.0]})

    def test_initial_is_renormalized(self):
        spec = PumpSpec.from_dict({
            "polarization": "pi",
            "Omega_over_Gamma": 1.0,
            "duration_us": 1.0,
            "initial": [2.0, 0, 0, 0, 0, 0, 0],
        })
        assert abs(spec.initial[0] - 1.0) < 1e-12
        assert sum(spec.initial) == 1.0


class TestRoundTrip:
    def test_scenario_json_round_trip(self, tmp_path):
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps(minimal_doc()))
        config = load_scenario(path)
        assert config.scheme.D_p == 500.0
        assert config.scheme.ccp2 == 10.0
        assert str(config.base_dir) == str(tmp_path)
