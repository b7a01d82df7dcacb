"""
Tests for run configuration: YAML files, environment variables and overrides
"""

from fractions import Fraction

import pytest

from rts_backtrack.config import RunConfig
from rts_backtrack.exceptions import ConfigurationError
from rts_backtrack.models.agent import AccountingMode
from rts_backtrack.models.costs import INF


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig().validate()
        assert config.algo == "lrta"
        assert config.quota == INF
        assert config.effective_gamma_bar == 1

    def test_yaml_file(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("algo: slat\nquota: 2\ntheta: 1.5\ngamma-bar: 1\naudit: off\n")
        config = RunConfig.from_yaml(path)
        assert config.algo == "slat"
        assert config.quota == 2
        assert config.theta == Fraction(3, 2)
        assert config.gamma_bar == 1
        assert config.audit is False

    def test_yaml_must_be_a_mapping(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("- lrta\n")
        with pytest.raises(ConfigurationError):
            RunConfig.from_yaml(path)

    def test_environment_overrides_file(self, tmp_path, monkeypatch):
        path = tmp_path / "run.yaml"
        path.write_text("algo: slat\nquota: 2\n")
        monkeypatch.setenv("RTS_QUOTA", "1/3")
        monkeypatch.setenv("RTS_ACYCLIC", "yes")
        config = RunConfig.from_environment(base=RunConfig.from_yaml(path))
        assert config.algo == "slat"
        assert config.quota == Fraction(1, 3)
        assert config.acyclic is True

    def test_dotenv_file(self, tmp_path):
        (tmp_path / ".env").write_text("RTS_ALGO=sla\nRTS_BUDGET=50\n")
        config = RunConfig.from_environment()
        assert config.algo == "sla"
        assert config.budget == 50

    def test_flags_override_everything(self, mocker):
        mocker.patch.dict("os.environ", {"RTS_D_MAX": "3"})
        config = RunConfig.from_environment().merged({"d_max": 5, "k": None})
        assert config.d_max == 5
        assert config.k is None

    @pytest.mark.parametrize(
        "values",
        [
            {"colour": "red"},
            {"audit": "maybe"},
            {"budget": "lots"},
            {"theta": "abc"},
        ],
    )
    def test_bad_values(self, values):
        with pytest.raises(ConfigurationError):
            RunConfig().merged(values)

    @pytest.mark.parametrize(
        "values",
        [
            {"algo": "astar"},
            {"theta": "0.5", "gamma_bar": "1"},
            {"gamma_bar": "0"},
            {"quota": "-1"},
            {"d_max": 0},
            {"algo": "piecewise"},
            {"k": 0},
            {"accounting": "partial"},
            {"budget": 0},
            {"workers": 0},
            {"trace_format": "xml"},
        ],
    )
    def test_validate_rejects(self, values):
        with pytest.raises(ConfigurationError):
            RunConfig().merged(values).validate()

    def test_gamma_bar_follows_small_theta(self):
        params = RunConfig(theta=Fraction(1, 2)).validate().to_params(Fraction(1))
        assert params.gamma == params.gamma_bar == Fraction(1, 2)

    def test_to_params(self):
        config = RunConfig().merged({"quota": "0.5", "accounting": "axiom", "tie_seed": 4})
        params = config.to_params(Fraction(1, 10))
        assert params.quota == 5
        assert params.accounting is AccountingMode.AXIOM
        assert params.tie_seed == 4

    def test_make_policy(self):
        policy = RunConfig().merged({"algo": "sla", "acyclic": "true"}).make_policy()
        assert policy.name == "sla+acyclic"
