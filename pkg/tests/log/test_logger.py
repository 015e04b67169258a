import pytest

from strip_helmholtz.log import logger


@pytest.fixture
def raw_stdout():
    logger.set_stdout("raw", level="INFO")
    yield
    logger.set_stdout("rich", level="INFO")


class TestLogger:

    def test_raw_stdout(self, raw_stdout, capsys):
        logger.info("cond=1.00e+02")
        assert "cond=1.00e+02" in capsys.readouterr().out

    def test_warning_once(self, raw_stdout, capsys):
        """
        相同的 warning 只输出一次。
        """
        for _ in range(3):
            logger.warning_once("series tail above tolerance")
        assert capsys.readouterr().out.count("series tail above tolerance") == 1

    def test_add_file(self, tmp_path):
        path = tmp_path / "run.log"
        handler = logger.add_file(str(path), level="INFO")
        try:
            logger.info("written to file")
            handler.flush()
            assert "written to file" in path.read_text()
        finally:
            logger.removeHandler(handler)
            handler.close()

    def test_unknown_stdout(self):
        with pytest.raises(ValueError):
            logger.set_stdout("html")
