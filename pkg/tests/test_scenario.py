"""Scenario file loading: YAML parsing, schema diagnostics, normalization."""

import pytest

from risleo.engine import STUDY_OUTAGE, STUDY_SNR, ScenarioConfig
from risleo.scenario import (
    ScenarioValidationError,
    load_scenario,
    shipped_scenario_path,
    validate_document,
)

BASE_DOC = {
    "name": "unit",
    "study": STUDY_OUTAGE,
    "carrier_hz": 2.0e9,
    "bandwidth_hz": 1.0e6,
    "altitude_km": 600.0,
    "elevation_deg": [10.0],
    "n_elements": [4],
    "trials": 10,
    "master_seed": 1,
}


def make_doc(**overrides):
    doc = dict(BASE_DOC)
    doc.update(overrides)
    return doc


def write_yaml(tmp_path, text, name="scenario.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestShippedScenarios:
    def test_snr_case_study_loads_with_frozen_values(self):
        cfg = load_scenario(shipped_scenario_path("fig3_s_band"))
        assert isinstance(cfg, ScenarioConfig)
        assert cfg.study == STUDY_SNR
        assert cfg.carrier_hz == 2.0e9
        assert cfg.bandwidth_hz == 1.0e6
        assert cfg.altitude_km == 600.0
        assert cfg.elevation_deg == (10.0,)
        assert cfg.n_elements == (100, 200, 400, 800)
        assert cfg.tx_antennas == 16
        assert cfg.tx_power_dbw == 10.0
        assert cfg.noise_temperature_k == 290.0
        assert cfg.direct_link_enabled is True
        assert cfg.nlos_clutter_loss_db == 34.3
        assert cfg.cascade_element_gain_db == -191.0
        assert cfg.trials == 1000
        assert cfg.master_seed == 7355608

    def test_outage_study_loads_with_frozen_values(self):
        cfg = load_scenario(shipped_scenario_path("fig4_ka_band"))
        assert cfg.study == STUDY_OUTAGE
        assert cfg.carrier_hz == 20.0e9
        assert cfg.bandwidth_hz == 245.76e6
        assert cfg.n_subcarriers == 4096
        assert cfg.bandwidth_hz / cfg.n_subcarriers == 60000.0
        assert cfg.elevation_deg == (10.0, 30.0)
        assert cfg.n_elements == tuple(range(100, 201, 4))
        assert cfg.fading_preset == "frequent_heavy"
        assert cfg.compensation_kind == "direct"
        assert cfg.direct_residual_factor == 0.01
        assert cfg.rate_thresholds_bpcu == (1.0,)
        assert cfg.subcarrier_samples == 8
        assert cfg.trials == 20000
        assert cfg.master_seed == 424242

    def test_shipped_files_carry_no_unknown_keys(self):
        # both files already exercised above; this guards the schema drift case
        for name in ("fig3_s_band", "fig4_ka_band"):
            load_scenario(shipped_scenario_path(name))


class TestDocumentValidation:
    def test_valid_document_returns_config_and_no_diagnostics(self, tmp_path):
        cfg, diags = validate_document(make_doc(), tmp_path)
        assert diags == []
        assert cfg.name == "unit"
        assert cfg.trials == 10

    def test_non_mapping_document_is_rejected(self, tmp_path):
        cfg, diags = validate_document(["a", "b"], tmp_path)
        assert cfg is None
        assert diags == ["scenario file must contain a single key-value mapping"]

    def test_unknown_key_is_named(self, tmp_path):
        cfg, diags = validate_document(make_doc(carier_hz=1.0), tmp_path)
        assert cfg is None
        assert "carier_hz: unknown key" in diags

    def test_every_missing_required_key_is_reported(self, tmp_path):
        doc = make_doc()
        del doc["carrier_hz"]
        del doc["master_seed"]
        cfg, diags = validate_document(doc, tmp_path)
        assert cfg is None
        assert "carrier_hz: missing required key" in diags
        assert "master_seed: missing required key" in diags

    @pytest.mark.parametrize(
        "field,value,fragment",
        [
            ("name", 7, "must be a string"),
            ("study", ["snr"], "must be a string"),
            ("trials", 10.5, "must be an integer"),
            ("trials", True, "must be an integer"),
            ("carrier_hz", "fast", "must be a number"),
            ("direct_link_enabled", 1, "must be a boolean"),
            ("n_elements", 4, "non-empty list of integers"),
            ("n_elements", [], "non-empty list of integers"),
            ("n_elements", [1.5], "non-empty list of integers"),
            ("elevation_deg", "ten", "must be a number or a non-empty list"),
            ("elevation_deg", [], "must be a number or a non-empty list"),
            ("los_table", 3, "must be a path string"),
        ],
    )
    def test_type_diagnostics_name_the_field(self, tmp_path, field, value, fragment):
        cfg, diags = validate_document(make_doc(**{field: value}), tmp_path)
        assert cfg is None
        assert any(d.startswith(field) and fragment in d for d in diags), diags

    def test_scalar_elevation_and_threshold_are_promoted_to_tuples(self, tmp_path):
        doc = make_doc(elevation_deg=25.0, rate_thresholds_bpcu=2.0)
        cfg, diags = validate_document(doc, tmp_path)
        assert diags == []
        assert cfg.elevation_deg == (25.0,)
        assert cfg.rate_thresholds_bpcu == (2.0,)

    def test_range_violations_surface_as_diagnostics(self, tmp_path):
        cfg, diags = validate_document(make_doc(altitude_km=-5.0), tmp_path)
        assert cfg is None
        assert len(diags) == 1
        assert "altitude_km" in diags[0]

    def test_outage_study_rejects_multiple_tx_antennas(self, tmp_path):
        cfg, diags = validate_document(make_doc(tx_antennas=4), tmp_path)
        assert cfg is None
        assert any("single transmit antenna" in d for d in diags)

    def test_unknown_fading_preset_lists_the_valid_names(self, tmp_path):
        cfg, diags = validate_document(make_doc(fading_preset="bogus"), tmp_path)
        assert cfg is None
        assert "fading_preset" in diags[0]
        assert "average" in diags[0]


class TestSubcarrierSpacingDeclaration:
    def test_consistent_declaration_is_accepted(self, tmp_path):
        doc = make_doc(
            bandwidth_hz=245.76e6, n_subcarriers=4096, subcarrier_spacing_hz=60000.0
        )
        cfg, diags = validate_document(doc, tmp_path)
        assert diags == []
        assert cfg.bandwidth_hz / cfg.n_subcarriers == 60000.0

    def test_inconsistent_declaration_is_rejected(self, tmp_path):
        doc = make_doc(
            bandwidth_hz=245.76e6, n_subcarriers=4096, subcarrier_spacing_hz=61000.0
        )
        cfg, diags = validate_document(doc, tmp_path)
        assert cfg is None
        assert "subcarrier_spacing_hz" in diags[0]
        assert "60000.0" in diags[0]


class TestLosTableResolution:
    def test_relative_path_resolves_against_scenario_directory(self, tmp_path):
        table = tmp_path / "table.csv"
        table.write_text(
            "environment,elevation_deg,p_los\n"
            "dense_urban,10,0.5\n"
            "dense_urban,90,0.9\n"
        )
        cfg, diags = validate_document(make_doc(los_table="table.csv"), tmp_path)
        assert diags == []
        assert cfg.los_table_path == str(table.resolve())

    def test_missing_table_file_is_a_named_diagnostic(self, tmp_path):
        cfg, diags = validate_document(make_doc(los_table="nope.csv"), tmp_path)
        assert cfg is None
        assert diags[0].startswith("los_table_path:")
        assert "nope.csv" in diags[0]

    def test_table_with_wrong_columns_is_a_named_diagnostic(self, tmp_path):
        (tmp_path / "bad.csv").write_text("environment,angle,p\nx,1,0.5\n")
        cfg, diags = validate_document(make_doc(los_table="bad.csv"), tmp_path)
        assert cfg is None
        assert diags[0].startswith("los_table_path:")
        assert "elevation_deg" in diags[0] and "p_los" in diags[0]


class TestLoadScenario:
    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            load_scenario(tmp_path / "absent.yaml")

    def test_invalid_yaml_raises_validation_error(self, tmp_path):
        path = write_yaml(tmp_path, "name: [unclosed\n")
        with pytest.raises(ScenarioValidationError, match="not valid YAML"):
            load_scenario(path)

    def test_schema_problem_raises_with_diagnostics_attached(self, tmp_path):
        path = write_yaml(tmp_path, "name: only\n")
        with pytest.raises(ScenarioValidationError) as err:
            load_scenario(path)
        assert any("study: missing required key" in d for d in err.value.diagnostics)

    def test_round_trip_of_a_minimal_file(self, tmp_path):
        path = write_yaml(
            tmp_path,
            "\n".join(
                [
                    "name: mini",
                    "study: outage_vs_elements",
                    "carrier_hz: 2.0e+9",
                    "bandwidth_hz: 1.0e+6",
                    "altitude_km: 600.0",
                    "elevation_deg: 10.0",
                    "n_elements: [2, 4]",
                    "trials: 5",
                    "master_seed: 99",
                    "",
                ]
            ),
        )
        cfg = load_scenario(path)
        assert cfg.name == "mini"
        assert cfg.elevation_deg == (10.0,)
        assert cfg.n_elements == (2, 4)
