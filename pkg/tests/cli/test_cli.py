import json
import os

import pandas as pd
import pytest

from strip_helmholtz_cli import RunRequest, run
from strip_helmholtz_cli.strip_helmholtz_cli import main
from strip_helmholtz.errors import InvalidParameter

CASE_I = {"k": "1+0.1j", "gamma0": 5, "gamma1": 1, "source": {"x": 1.0, "y": 0.5}}


def _write(tmp_path, content, name="config.json"):
    path = os.path.join(str(tmp_path), name)
    with open(path, "w") as f:
        f.write(content if isinstance(content, str) else json.dumps(content))
    return path


class TestRunRequest:

    def test_default_output(self):
        assert RunRequest("roots", "c.json").output == "strip_roots.json"
        assert RunRequest("trace", "c.json").output == "strip_trace.csv"
        assert RunRequest("field", "c.json").grid == "48,16"

    @pytest.mark.parametrize("kwargs", [dict(mode="plot"), dict(mode="roots", tol=-1.0),
                                        dict(mode="roots", case_override="IV")])
    def test_rejected(self, kwargs):
        with pytest.raises(InvalidParameter):
            RunRequest(config="c.json", **kwargs)


class TestRun:

    def test_roots(self, tmp_path):
        """
        roots 模式写出情形标签与卷绕数。
        """
        out = os.path.join(str(tmp_path), "roots.json")
        assert run(RunRequest("roots", _write(tmp_path, CASE_I), out)) == 0
        with open(out) as f:
            content = json.load(f)
        assert content["case"] == "I"
        assert content["winding_index"] == -1
        assert len(content["roots"]) == 3

    def test_malformed_config(self, tmp_path):
        """
        配置不合法时返回 2，且不写出结果文件。
        """
        out = os.path.join(str(tmp_path), "roots.json")
        path = _write(tmp_path, "{not json")
        assert run(RunRequest("roots", path, out)) == 2
        assert not os.path.exists(out)

    def test_invalid_parameter(self, tmp_path):
        out = os.path.join(str(tmp_path), "solve.json")
        path = _write(tmp_path, dict(CASE_I, source={"x": 1.0, "y": 1.0}))
        assert run(RunRequest("solve", path, out)) == 2
        assert not os.path.exists(out)

    def test_case_override_mismatch(self, tmp_path):
        out = os.path.join(str(tmp_path), "roots.json")
        assert run(RunRequest("roots", _write(tmp_path, CASE_I), out, case_override="II")) == 2
        assert not os.path.exists(out)

    def test_solve(self, tmp_path):
        out = os.path.join(str(tmp_path), "solve.json")
        assert run(RunRequest("solve", _write(tmp_path, CASE_I), out)) == 0
        with open(out) as f:
            content = json.load(f)
        assert content["case"] == "I"
        assert len(content["c"]) == 4
        assert content["wall_residual"] < 1e-7

    def test_trace_with_plot_data(self, tmp_path):
        out = os.path.join(str(tmp_path), "trace.csv")
        request = RunRequest("trace", _write(tmp_path, CASE_I), out, grid="8,4", emit_plot_data=True)
        assert run(request) == 0
        frame = pd.read_csv(out)
        assert set(frame.trace) == {"vertical", "wall0", "wall1"}
        assert len(frame) == 5 + 2 * 9
        assert os.path.exists(os.path.join(str(tmp_path), "trace.dat"))

    def test_yaml(self, tmp_path):
        path = _write(tmp_path, "k: 1+0.1j\ngamma0: 5\ngamma1: 1\n", "config.yaml")
        out = os.path.join(str(tmp_path), "roots.json")
        assert run(RunRequest("roots", path, out)) == 0


class TestMain:

    def test_bad_mode(self, tmp_path):
        with pytest.raises(SystemExit) as e:
            main(["--mode", "plot", "--config", _write(tmp_path, CASE_I)])
        assert e.value.code == 2

    def test_bad_tol(self, tmp_path):
        with pytest.raises(SystemExit) as e:
            main(["--mode", "roots", "--config", _write(tmp_path, CASE_I), "--tol", "0"])
        assert e.value.code == 2

    def test_exit_zero(self, tmp_path):
        out = os.path.join(str(tmp_path), "roots.json")
        with pytest.raises(SystemExit) as e:
            main(["--mode", "roots", "--config", _write(tmp_path, CASE_I), "--out", out])
        assert e.value.code == 0
        assert os.path.exists(out)
