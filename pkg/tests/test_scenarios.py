import json
import pathlib

import jsonschema
import pytest

from gaugelab import scenarios
from gaugelab.errors import ConfigError, GaugeLabError
from gaugelab.fieldio import read_field
from gaugelab.spectra import read_spectrum_csv

SCHEMA = json.loads((pathlib.Path(scenarios.__file__).with_name("data") / "report.schema.json").read_text())


@pytest.fixture(scope="module")
def landau_run():
    return scenarios.run("landau_gauge_pair")


class TestRegistry:
    def test_every_scenario_declares_claims(self):
        assert len(scenarios.SCENARIOS) >= 6
        for sc in scenarios.SCENARIOS.values():
            assert sc.claims and all(rel for _, rel in sc.claims)

    def test_required_scenarios_present(self):
        for name in ("soft_coulomb_bound_states", "yang_failure", "hamiltonian_noninvariance",
                     "evolution_covariance", "chen_invariance", "landau_gauge_pair"):
            assert name in scenarios.SCENARIOS

    def test_unknown_scenario(self):
        with pytest.raises(GaugeLabError):
            scenarios.run("nope")

    def test_params_validated_before_running(self):
        with pytest.raises(ConfigError):
            scenarios.run("soft_coulomb_bound_states", {"n": "many"})


class TestReports:
    def test_schema_and_pass(self, landau_run):
        data = landau_run.report.to_dict()
        jsonschema.validate(data, SCHEMA)
        assert data["passed"]
        assert {c["id"] for c in data["claims"]} == {cid for cid, _ in scenarios.SCENARIOS["landau_gauge_pair"].claims}

    def test_deterministic_bytes(self, landau_run):
        again = scenarios.run("landau_gauge_pair")
        assert again.report.to_json() == landau_run.report.to_json()

    def test_fixture_claim_omitted_off_fixture_grid(self):
        result = scenarios.run("soft_coulomb_bound_states", {"n": 300})
        ids = {c.id for c in result.report.claims}
        assert "oracle_fixture" not in ids and "bound_states" in ids

    def test_soft_coulomb_preamble(self):
        result = scenarios.run("soft_coulomb_bound_states", {"n": 256})
        assert "soft-Coulomb" in result.report.preamble

    def test_failing_claim_reported(self):
        # kappa = 0 has no bound states, so the bound-state claim must fail
        result = scenarios.run("soft_coulomb_bound_states", {"n": 256, "kappa": 0.0})
        assert not result.report.passed
        assert not result.report.claim("bound_states").passed

    def test_seed_recorded_and_used(self):
        a = scenarios.run("kinetic_momentum", {"n": 32}, seed=1).report
        b = scenarios.run("kinetic_momentum", {"n": 32}, seed=2).report
        assert a.seed == 1 and b.seed == 2
        assert a.claim("kinetic_expectation_order").detail != b.claim("kinetic_expectation_order").detail


class TestOutputs:
    def test_write_outputs(self, tmp_path):
        result = scenarios.run("chen_invariance", {"n": 32, "k": 3, "times": [0.3]})
        scenarios.write_outputs(result, tmp_path, dump_fields=True)
        report = json.loads((tmp_path / "report.json").read_text())
        jsonschema.validate(report, SCHEMA)
        for name in report["artifacts"]:
            assert (tmp_path / name).is_file()
        assert "wall_time_s" in json.loads((tmp_path / "timing.json").read_text())
        assert "wall_time" not in (tmp_path / "report.json").read_text()
        a_phys = read_field(tmp_path / "field_a_phys.txt")
        assert a_phys.grid.points == (32, 32)
        spec = read_spectrum_csv(tmp_path / "spectrum_chen_reference.csv")
        assert len(spec) == 3
