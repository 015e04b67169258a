import json

import numpy as np
import pytest

from strip_helmholtz.config import WallModel, WallSpec, WaveguideConfig, load_config, validate_config
from strip_helmholtz.errors import InvalidParameter
from tests.helpers.configs import membrane, plate


def _physical(**kwargs):
    content = dict(omega="1+0.1j", c_sound=1.0, rho=1.2, a=1.0,
                   walls=[dict(mass=2.0, stiffness=3.0), dict(mass=1.0, stiffness=2.0), dict(mass=1.5, stiffness=1.0)],
                   source=dict(x=1.0, y=0.3))
    content.update(kwargs)
    return WaveguideConfig.from_dict(content)


class TestValidateConfig:

    def test_physical_membrane(self):
        """
            由质量与张力得到 alpha_j, mu_j，且 Im(alpha_j) > 0
        """
        config = validate_config(_physical())
        omega = 1 + 0.1j
        assert config.k == pytest.approx(omega)
        assert config.alpha[0] == pytest.approx(omega * np.sqrt(2.0 / 3.0))
        assert config.mu[2] == pytest.approx(1.2 * omega ** 2 / 1.0)
        assert np.all(config.alpha.imag > 0)

    def test_physical_plate(self):
        config = validate_config(_physical(model="plate"))
        omega = 1 + 0.1j
        assert config.alpha_power[1] == pytest.approx(1.0 * omega ** 2 / 2.0)
        assert config.mu[1] == pytest.approx(1.2 * omega ** 2 / 2.0)

    def test_real_frequency_rejected(self):
        with pytest.raises(InvalidParameter) as e:
            validate_config(_physical(omega=1.0))
        assert "omega" in str(e.value)

    @pytest.mark.parametrize("y", [0.0, 1.0, 1.5])
    def test_source_on_boundary_rejected(self, y):
        with pytest.raises(InvalidParameter):
            validate_config(_physical(source=dict(x=1.0, y=y)))

    def test_unknown_key(self):
        with pytest.raises(InvalidParameter):
            WaveguideConfig.from_dict({"omega": "1+0.1j", "bogus": 1})

    def test_three_walls(self):
        with pytest.raises(InvalidParameter):
            validate_config(_physical(walls=[dict(mass=1.0, stiffness=1.0)]))


class TestDimensionless:

    @pytest.mark.parametrize("gamma0,gamma1,k", [(5, 1, 1 + 0.1j), (1, 0.1, 1 + 1j), (0.5, 0.05, 1 + 0.1j)])
    def test_membrane_round_trip(self, gamma0, gamma1, k):
        gamma = membrane(gamma0, gamma1, k).gamma
        assert gamma[0] == pytest.approx(gamma0, rel=1e-14)
        assert gamma[1] == pytest.approx(gamma1, rel=1e-14)

    def test_plate_round_trip(self):
        config = plate(0.1, 1.0)
        assert config.model is WallModel.PLATE
        assert config.gamma[0] == pytest.approx(0.1, rel=1e-13)
        assert config.alpha_power[2] == pytest.approx(0.1 * (1 + 0.1j) ** 2)

    def test_gamma0_positive(self):
        with pytest.raises(InvalidParameter):
            membrane(gamma0=-1.0)


class TestLoadConfig:

    def test_json(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"k": "1+1j", "gamma0": 1, "gamma1": 0.1, "source": {"x": 1.0, "y": 0.5}}))
        config = load_config(str(path))
        assert config.k == 1 + 1j
        assert config.source.y == 0.5

    def test_yaml(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text("omega: [1.0, 0.1]\nwalls:\n"
                        + "".join("  - {mass: 1.0, stiffness: 2.0}\n" for _ in range(3)))
        config = load_config(str(path))
        assert config.omega == pytest.approx(1 + 0.1j)
        assert isinstance(config.walls[0], WallSpec)

    def test_extension(self, tmp_path):
        path = tmp_path / "config.txt"
        path.write_text("{}")
        with pytest.raises(InvalidParameter):
            load_config(str(path))
