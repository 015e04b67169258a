"""
命令行的运行流程：读取配置，按 ``mode`` 计算并写出结果文件。

返回码：0 表示成功，2 表示配置或参数不合法，3 表示数值计算失败。任何失败都不会写出结果文件。
"""
import argparse
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd
import yaml

from strip_helmholtz.config import WaveguideConfig, load_config
from strip_helmholtz.constants import solve_waveguide
from strip_helmholtz.driver import FileIODriver, IODriver
from strip_helmholtz.errors import InvalidParameter, NumericalError, StripHelmholtzError, UnsupportedCase
from strip_helmholtz.field import SOURCE_EXCLUSION, interior_field, trace_horizontal, trace_vertical
from strip_helmholtz.log import logger
from strip_helmholtz.oracle import GridSpec, cross_validate
from strip_helmholtz.kernel import KernelContext
from strip_helmholtz.spectra import classify, winding_index
from strip_helmholtz.utils import to_jsonable

MODES = ("roots", "solve", "trace", "field", "verify")
DEFAULT_GRIDS = {"trace": "64,32", "field": "48,16", "verify": "512,128"}
EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3


@dataclass
class RunRequest:
    """
    :param mode: ``roots``、``solve``、``trace``、``field`` 或 ``verify``。
    :param config: 配置文件路径（json 或 yaml）。
    :param out: 结果文件路径，缺省为 ``strip_<mode>.json`` 或 ``strip_<mode>.csv``。
    :param grid: ``'NX,NY'``。
    :param tol: 覆盖配置中的 ``solver.tol``。
    :param case_override: 期望的情形标签，与检测结果不符时报错，仅用于测试。
    :param emit_plot_data: 额外写出 gnuplot 可读的矩阵文件。
    """

    mode: str = field(metadata={"help": "One of roots, solve, trace, field, verify."})
    config: str = field(metadata={"help": "Path of the configuration file."})
    out: Optional[str] = field(default=None, metadata={"help": "Output path."})
    grid: Optional[str] = field(default=None, metadata={"help": "Grid 'NX,NY'."})
    tol: Optional[float] = field(default=None, metadata={"help": "Relative tolerance override."})
    case_override: Optional[str] = field(default=None, metadata={"help": "Expected case label (testing)."})
    emit_plot_data: bool = field(default=False, metadata={"help": "Write gnuplot matrices."})

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidParameter("mode", self.mode, f"must be one of {', '.join(MODES)}")
        if self.tol is not None and not self.tol > 0:
            raise InvalidParameter("tol", self.tol, "must be positive")
        if self.case_override is not None and self.case_override.upper() not in ("I", "II", "III"):
            raise InvalidParameter("case_override", self.case_override, "must be I, II or III")
        if self.grid is None:
            self.grid = DEFAULT_GRIDS.get(self.mode)

    @property
    def output(self) -> str:
        if self.out is not None:
            return self.out
        suffix = "csv" if self.mode in ("trace", "field") else "json"
        return f"strip_{self.mode}.{suffix}"


def _load(request: RunRequest) -> WaveguideConfig:
    try:
        config = load_config(request.config)
    except (OSError, TypeError, ValueError, yaml.YAMLError) as e:
        raise InvalidParameter("config", request.config, f"cannot be read ({e})") from e
    if request.tol is not None:
        config.solver.tol = float(request.tol)
    return config


def _check_case(request: RunRequest, case: str):
    if request.case_override is not None and request.case_override.upper() != case:
        raise UnsupportedCase(f"Detected case {case}, but --case-override requested {request.case_override}.")


def _roots(request: RunRequest, config: WaveguideConfig, driver: IODriver) -> dict:
    ctx = KernelContext(config)
    classification = classify(ctx)
    _check_case(request, classification.case_label.value)
    content = classification.to_dict()
    content["winding_index"] = winding_index(ctx, classification)
    content["config_hash"] = config.config_hash()
    return content


def _solve(request: RunRequest, config: WaveguideConfig, driver: IODriver) -> dict:
    constants = solve_waveguide(config)
    _check_case(request, constants.case_label.value)
    content = constants.to_dict()
    content["config_hash"] = config.config_hash()
    return content


def _grid(request: RunRequest) -> GridSpec:
    return GridSpec.parse(request.grid)


def _write_series(path: str, frame: pd.DataFrame, driver: IODriver):
    # gnuplot data blocks, one per trace, separated by two blank lines
    blocks = []
    for kind, part in frame.groupby("trace", sort=False):
        lines = [f"# {kind}: x y re_u im_u"]
        lines += [f"{x!r} {y!r} {re!r} {im!r}" for x, y, re, im in
                  zip(part.x.tolist(), part.y.tolist(), part.re_u.tolist(), part.im_u.tolist())]
        blocks.append("\n".join(lines))
    driver.save("\n\n\n".join(blocks) + "\n", path)


def _write_matrix(path: str, values: np.ndarray, driver: IODriver):
    rows = [" ".join(repr(float(v)) for v in row) for row in values]
    driver.save("\n".join(rows) + "\n", path)


def _trace(request: RunRequest, config: WaveguideConfig, driver: IODriver) -> pd.DataFrame:
    grid = _grid(request)
    constants = solve_waveguide(config)
    _check_case(request, constants.case_label.value)
    y = np.linspace(0, config.a, grid.ny + 1)
    x = np.linspace(0, config.source.x + 2 * config.a, grid.nx + 1)
    vertical = trace_vertical(constants, y).to_frame()
    vertical.insert(0, "trace", "vertical")
    horizontal = trace_horizontal(constants, x).to_frame()
    horizontal.insert(0, "trace", np.where(horizontal.y == 0, "wall0", "wall1"))
    frame = pd.concat([vertical, horizontal], ignore_index=True)
    if request.emit_plot_data:
        _write_series(os.path.splitext(request.output)[0] + ".dat", frame, driver)
    return frame


def _field(request: RunRequest, config: WaveguideConfig, driver: IODriver) -> pd.DataFrame:
    grid = _grid(request)
    constants = solve_waveguide(config)
    _check_case(request, constants.case_label.value)
    x = np.linspace(0, config.source.x + 2 * config.a, grid.nx + 1)
    y = np.linspace(0, config.a, grid.ny + 1)
    xx, yy = np.meshgrid(x, y, indexing="ij")
    keep = np.hypot(xx - config.source.x, yy - config.source.y) >= SOURCE_EXCLUSION * config.a
    if not keep.all():
        logger.warning(f"Skipping {int((~keep).sum())} grid points next to the source.")
    result = interior_field(constants, xx[keep], yy[keep])
    if request.emit_plot_data:
        values = np.full(xx.shape, np.nan, dtype=complex)
        values[keep] = result.values
        stem = os.path.splitext(request.output)[0]
        # gnuplot `matrix` layout: one row per y, one column per x
        _write_matrix(stem + ".re.dat", values.real.T, driver)
        _write_matrix(stem + ".im.dat", values.imag.T, driver)
    return result.to_frame()


def _verify(request: RunRequest, config: WaveguideConfig, driver: IODriver) -> dict:
    report = cross_validate(config, _grid(request))
    if report.case is not None:
        _check_case(request, report.case)
    return report.to_dict()


HANDLERS = {"roots": _roots, "solve": _solve, "trace": _trace, "field": _field, "verify": _verify}


def run(request: RunRequest, driver: IODriver = FileIODriver) -> int:
    """
    执行一次请求并写出结果。

    :return: 进程返回码。
    """
    try:
        config = _load(request)
        logger.info(f"Running mode `{request.mode}` for config {config.config_hash()}.")
        result = HANDLERS[request.mode](request, config, driver)
        if isinstance(result, pd.DataFrame):
            driver.save_frame(result, request.output)
        else:
            driver.save_json(to_jsonable(result), request.output)
            if request.mode == "verify" and not result["passed"]:
                logger.error(f"Verification failed: discrepancy {result['discrepancy']} "
                             f"(threshold {result['threshold']}), error: {result['error']}.")
                return EXIT_NUMERICAL
    except StripHelmholtzError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code if isinstance(e, NumericalError) else EXIT_VALIDATION
    logger.info(f"Results written to {request.output}.")
    return EXIT_OK


def run_command_parser(parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
    parser.add_argument("--mode", required=True, choices=MODES,
                        help=RunRequest.__dataclass_fields__["mode"].metadata["help"])
    parser.add_argument("--config", required=True, type=str, help="Path of a .json or .yaml configuration file.")
    parser.add_argument("--out", type=str, default=None,
                        help="Output file. Defaults to strip_<mode>.json or strip_<mode>.csv.")
    parser.add_argument("--grid", type=str, default=None,
                        help="Grid as 'NX,NY'. Used by trace, field and verify.")
    parser.add_argument("--tol", type=float, default=None, help="Relative tolerance of quadratures and residuals.")
    parser.add_argument("--case-override", dest="case_override", type=str, default=None,
                        help="Testing only: fail unless the detected case equals this label.")
    parser.add_argument("--emit-plot-data", dest="emit_plot_data", action="store_true",
                        help="Also write gnuplot-compatible data files next to the output.")
    parser.set_defaults(entrypoint=run_command_entry)
    return parser


def run_command_entry(args) -> int:
    try:
        request = RunRequest(args.mode, args.config, args.out, args.grid, args.tol, args.case_override,
                             args.emit_plot_data)
    except StripHelmholtzError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_VALIDATION
    return run(request)
