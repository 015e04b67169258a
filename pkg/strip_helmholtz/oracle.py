r"""
独立的数值校验：

* :func:`fd_solve`：截断条形区域上的二阶有限差分解，壁面的三阶边界条件用
  虚拟节点离散；
* :func:`ode_solve_1d`：变换后的两点边值问题的 Chebyshev 配置解；
* :func:`dispersion_tilde_mp`：:math:`\tilde\Delta(\zeta)` 的多精度求值；
* :func:`cross_validate`：半解析结果与有限差分结果的比较报告。

有限差分部分只使用 :mod:`strip_helmholtz.config` 中的类型，不依赖半解析求解的代码。
"""

import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy import sparse
from scipy.interpolate import BarycentricInterpolator
from scipy.sparse.linalg import MatrixRankWarning, spsolve

from strip_helmholtz.config import WallModel, WaveguideConfig
from strip_helmholtz.constants import solve_waveguide
from strip_helmholtz.errors import (DispersionZero, InvalidParameter, SingularDiscretization, StripHelmholtzError,
                                    UnsupportedCase)
from strip_helmholtz.field import corner_mismatch, interior_field
from strip_helmholtz.log import logger
from strip_helmholtz.utils import complex_pair

__all__ = [
    "GridSpec",
    "FDForcing",
    "FDGrid",
    "fd_solve",
    "ode_solve_1d",
    "dispersion_tilde_mp",
    "CrossValidationReport",
    "cross_validate",
]

DECAY_TARGET = 1e-6
VERIFY_GRID = (512, 128)
VERIFY_LENGTH = 8.0
SAMPLE_SHAPE = (16, 16)


@dataclass
class GridSpec:
    """
    有限差分网格。

    :param nx: :math:`x` 方向的间隔数，:math:`x=L` 处为零 Dirichlet 条件。
    :param ny: :math:`y` 方向的间隔数。
    :param length: 截断长度 :math:`L`；缺省时取
        :math:`x^\\circ+\\ln(10^6)/\\mathrm{Im}\\,k`，并不小于 :math:`x^\\circ+2a`。
    """

    nx: int = field(default=128, metadata={"help": "Intervals along x."})
    ny: int = field(default=32, metadata={"help": "Intervals across the strip."})
    length: Optional[float] = field(default=None, metadata={"help": "Truncation length L."})

    def __post_init__(self):
        if self.nx < 4 or self.ny < 4:
            raise InvalidParameter("grid", (self.nx, self.ny), "at least 4 intervals per direction")
        if self.length is not None and self.length <= 0:
            raise InvalidParameter("length", self.length, "must be positive")

    @classmethod
    def parse(cls, text: str, length: Optional[float] = None) -> "GridSpec":
        """解析 ``'NX,NY'``。"""
        try:
            nx, ny = (int(v) for v in text.split(","))
        except ValueError:
            raise InvalidParameter("grid", text, "expected 'NX,NY'") from None
        return cls(nx, ny, length)

    def truncation(self, config: WaveguideConfig) -> float:
        if self.length is not None:
            return float(self.length)
        if config.k.imag <= 0:
            raise InvalidParameter("k", config.k, "Im(k) > 0 is required for truncation")
        return max(config.source.x + np.log(1 / DECAY_TARGET) / config.k.imag, config.source.x + 2 * config.a)


@dataclass
class FDForcing:
    r"""
    一般的外力项，用于制造解检验。缺省（全部为 ``None``）对应点源
    :math:`g=-\delta(x-x^\circ)\delta(y-y^\circ)`、零壁面外力以及固定的边缘。

    :param interior: :math:`g(x,y)`。
    :param walls: :math:`g_0(x), g_1(x)`。
    :param vertical: :math:`g_2(y)`。
    :param edges: :math:`u_y(0,0), u_y(0,a), u_x(0,0), u_x(0,a)`。
    :param far: :math:`x=L` 处的 Dirichlet 数据 :math:`u(L,y)`。
    """

    interior: Optional[Callable] = None
    walls: Tuple[Optional[Callable], Optional[Callable]] = (None, None)
    vertical: Optional[Callable] = None
    edges: Tuple[complex, complex, complex, complex] = (0j, 0j, 0j, 0j)
    far: Optional[Callable] = None


@dataclass
class FDGrid:
    """
    :param solution: 形状 ``(nx+1, ny+1)``，包含 :math:`x=L` 处的边界值。
    """

    nx: int
    ny: int
    length: float
    hx: float
    hy: float
    solution: np.ndarray

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0, self.length, self.nx + 1)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(0, self.hy * self.ny, self.ny + 1)

    def at(self, x, y) -> np.ndarray:
        """最近节点上的值。"""
        i = np.clip(np.rint(np.asarray(x) / self.hx).astype(int), 0, self.nx)
        m = np.clip(np.rint(np.asarray(y) / self.hy).astype(int), 0, self.ny)
        return self.solution[i, m]

    def corner_mismatch(self) -> np.ndarray:
        """
        水平壁迹线在 x→0 的二阶外推减去竖直壁迹线在 y→y_j 的二阶外推，:math:`j=0,1`。
        """
        u = self.solution
        horizontal = 2 * u[1, [0, self.ny]] - u[2, [0, self.ny]]
        vertical = 2 * u[0, [1, self.ny - 1]] - u[0, [2, self.ny - 2]]
        return horizontal - vertical


class _Assembler:
    """
    按行收集系数。未知量为 :math:`i=-1,\\dots,n_x-1`、:math:`m=-1,\\dots,n_y+1` 上的节点
    （含虚拟节点）；:math:`i=n_x` 列为已知的 Dirichlet 数据。
    """

    def __init__(self, nx: int, ny: int, far: np.ndarray):
        self.nx, self.ny = nx, ny
        self.far = far
        self.size = (nx + 1) * (ny + 3)
        self.rows, self.cols, self.vals = [], [], []
        self.rhs = np.zeros(self.size, dtype=complex)
        self.count = 0

    def index(self, i, m):
        return (np.asarray(i) + 1) * (self.ny + 3) + (np.asarray(m) + 1)

    def new_rows(self, n: int) -> np.ndarray:
        rows = np.arange(self.count, self.count + n)
        self.count += n
        return rows

    def term(self, rows, i: int, m, coef):
        m = np.broadcast_to(np.asarray(m), np.shape(rows))
        coef = np.broadcast_to(np.asarray(coef, dtype=complex), np.shape(rows))
        if i == self.nx:
            np.subtract.at(self.rhs, rows, coef * self.far[m + 1])
            return
        self.rows.append(np.asarray(rows))
        self.cols.append(self.index(i, m))
        self.vals.append(coef)

    def source(self, rows, values):
        np.add.at(self.rhs, rows, values)

    def matrix(self) -> sparse.csc_matrix:
        if self.count != self.size:
            raise RuntimeError(f"Assembled {self.count} equations for {self.size} unknowns.")
        data = np.concatenate(self.vals)
        return sparse.coo_matrix((data, (np.concatenate(self.rows), np.concatenate(self.cols))),
                                 shape=(self.size, self.size)).tocsc()


def _callable_or_zero(func):
    return (lambda t: np.zeros(np.shape(t), dtype=complex)) if func is None else func


def fd_solve(config: WaveguideConfig, grid: Optional[GridSpec] = None,
             forcing: Optional[FDForcing] = None) -> FDGrid:
    r"""
    在 :math:`[0,L]\times[0,a]` 上求解

    .. math::

        (\Delta+k^2)u=g,\quad u_{xxy}+\alpha_j^2u_y-(-1)^j\mu_ju=g_j\ (y=y_j),\quad
        u_{xyy}+\alpha_2^2u_x-\mu_2u=g_2\ (x=0),

    边缘条件 :math:`u_y(0,y_j)`、:math:`u_x(0,y_j)` 取给定值（缺省为零），:math:`x=L`
    处为 Dirichlet 条件。点源离散为最近节点上幅值 :math:`1/(h_xh_y)` 的尖峰。

    :raises UnsupportedCase: 板模型。
    :raises SingularDiscretization: 离散系统奇异，可稍微改变网格后重试。
    """
    if config.model is not WallModel.MEMBRANE:
        raise UnsupportedCase("The finite-difference oracle supports membrane walls only.")
    grid = GridSpec() if grid is None else grid
    forcing = FDForcing() if forcing is None else forcing
    nx, ny = grid.nx, grid.ny
    length, a = grid.truncation(config), float(config.a)
    hx, hy = length / nx, a / ny
    k2 = config.k * config.k
    alpha2, mu = config.alpha ** 2, config.mu
    y_all = np.arange(-1, ny + 2) * hy
    far = _callable_or_zero(forcing.far)(y_all).astype(complex)
    asm = _Assembler(nx, ny, far)
    m_all = np.arange(ny + 1)

    # Helmholtz equation at every node of [0, L) x [0, a]
    interior = forcing.interior
    for i in range(nx):
        rows = asm.new_rows(ny + 1)
        asm.term(rows, i, m_all, -2 / hx ** 2 - 2 / hy ** 2 + k2)
        asm.term(rows, i - 1, m_all, 1 / hx ** 2)
        asm.term(rows, i + 1, m_all, 1 / hx ** 2)
        asm.term(rows, i, m_all - 1, 1 / hy ** 2)
        asm.term(rows, i, m_all + 1, 1 / hy ** 2)
        if forcing.interior is not None:
            asm.source(rows, interior(np.full(ny + 1, i * hx), m_all * hy))
    if forcing.interior is None:
        i0, m0 = int(round(config.source.x / hx)), int(round(config.source.y / hy))
        if i0 >= nx:
            raise InvalidParameter("length", length, "the source must lie inside the truncated strip")
        asm.source(np.array([i0 * (ny + 1) + m0]), -1 / (hx * hy))

    # horizontal walls: v_i = (u_{i,m+1} - u_{i,m-1}) / 2hy at the wall row
    for j, (wall_m, sign) in enumerate(((0, 1), (ny, -1))):
        g = _callable_or_zero(forcing.walls[j])
        rows = asm.new_rows(nx)
        asm.term(rows[:1], 0, wall_m + 1, 1 / (2 * hy))
        asm.term(rows[:1], 0, wall_m - 1, -1 / (2 * hy))
        asm.source(rows[:1], forcing.edges[j])
        for i in range(1, nx):
            row = rows[i:i + 1]
            for di, weight in ((-1, 1 / hx ** 2), (0, -2 / hx ** 2 + alpha2[j]), (1, 1 / hx ** 2)):
                asm.term(row, i + di, wall_m + 1, weight / (2 * hy))
                asm.term(row, i + di, wall_m - 1, -weight / (2 * hy))
            asm.term(row, i, wall_m, -sign * mu[j])
            asm.source(row, g(np.array([i * hx])))

    # vertical wall: w_m = (u_{1,m} - u_{-1,m}) / 2hx
    g2 = _callable_or_zero(forcing.vertical)
    rows = asm.new_rows(ny + 1)
    for m, edge in ((0, forcing.edges[2]), (ny, forcing.edges[3])):
        asm.term(rows[m:m + 1], 1, m, 1 / (2 * hx))
        asm.term(rows[m:m + 1], -1, m, -1 / (2 * hx))
        asm.source(rows[m:m + 1], edge)
    inner = rows[1:ny]
    m_in = np.arange(1, ny)
    for dm, weight in ((-1, 1 / hy ** 2), (0, -2 / hy ** 2 + alpha2[2]), (1, 1 / hy ** 2)):
        asm.term(inner, 1, m_in + dm, weight / (2 * hx))
        asm.term(inner, -1, m_in + dm, -weight / (2 * hx))
    asm.term(inner, 0, m_in, -mu[2])
    asm.source(inner, g2(m_in * hy))

    # unused corner ghosts
    rows = asm.new_rows(2)
    asm.term(rows[:1], -1, -1, 1.0)
    asm.term(rows[1:], -1, ny + 1, 1.0)

    logger.info(f"FD system: {asm.size} unknowns, hx={hx:.4g}, hy={hy:.4g}, L={length:.4g}.")
    values = _sparse_solve(asm.matrix(), asm.rhs)
    padded = values.reshape(nx + 1, ny + 3)
    solution = np.vstack([padded[1:, 1:ny + 2], far[None, 1:ny + 2]])
    return FDGrid(nx, ny, length, hx, hy, solution)


def _sparse_solve(matrix, rhs) -> np.ndarray:
    with warnings.catch_warnings():
        warnings.simplefilter("error", MatrixRankWarning)
        try:
            values = spsolve(matrix, rhs)
        except (MatrixRankWarning, RuntimeError) as e:
            raise SingularDiscretization(f"FD matrix is singular ({e}); perturb the grid spacing.") from e
    if not np.all(np.isfinite(values)):
        raise SingularDiscretization("FD solve produced non-finite values; perturb the grid spacing.")
    return values


def _chebyshev(n: int) -> Tuple[np.ndarray, np.ndarray]:
    x = np.cos(np.pi * np.arange(n + 1) / n)
    c = np.ones(n + 1)
    c[0] = c[-1] = 2
    c *= (-1.0) ** np.arange(n + 1)
    dx = x[:, None] - x[None, :]
    d = np.outer(c, 1 / c) / (dx + np.eye(n + 1))
    d -= np.diag(d.sum(axis=1))
    return x, d


def _wall_loading(eta: complex, config: WaveguideConfig) -> np.ndarray:
    power = config.model.power
    return config.mu[:2] / (config.alpha_power[:2] - eta ** power)


def ode_solve_1d(eta: complex, config: WaveguideConfig, forcing: Optional[Callable] = None,
                 g0: complex = 0j, g1: complex = 0j, nodes: int = 48) -> BarycentricInterpolator:
    r"""
    用 Chebyshev 配置法直接求解

    .. math::

        \tilde u''-\zeta^2\tilde u=f(y),\quad -\tilde u'(0)+\tilde\mu_0\tilde u(0)=\tilde g^0,\quad
        \tilde u'(a)+\tilde\mu_1\tilde u(a)=\tilde g^1,

    :math:`\zeta^2=\eta^2-k^2`。

    :param forcing: :math:`f(y)`，缺省为零。
    :param nodes: Chebyshev 节点数减一。
    :return: :math:`[0,a]` 上的插值函数。
    :raises DispersionZero: 离散系统接近奇异，即 :math:`\tilde\Delta(\zeta)\approx0`。
    """
    eta = complex(eta)
    a = float(config.a)
    zeta2 = eta * eta - config.k * config.k
    x, d = _chebyshev(nodes)
    y = a * (1 - x) / 2
    d1 = -2 / a * d
    d2 = d1 @ d1
    m0, m1 = _wall_loading(eta, config)
    matrix = d2 - zeta2 * np.eye(nodes + 1, dtype=complex)
    rhs = np.zeros(nodes + 1, dtype=complex)
    if forcing is not None:
        rhs[:] = forcing(y)
    # y = 0 is node 0 and y = a is node n
    matrix[0] = -d1[0]
    matrix[0, 0] += m0
    rhs[0] = g0
    matrix[-1] = d1[-1]
    matrix[-1, -1] += m1
    rhs[-1] = g1
    if np.linalg.cond(matrix) > 1e12:
        raise DispersionZero(f"Collocation system is singular at eta={eta!r}; Delta~(zeta) vanishes.")
    values = np.linalg.solve(matrix, rhs)
    return BarycentricInterpolator(y, values)


def dispersion_tilde_mp(zeta, config: WaveguideConfig, dps: int = 40):
    r"""
    多精度求值 :math:`\tilde\Delta(\zeta)=(\tilde\mu_0+\tilde\mu_1)\zeta\cosh a\zeta
    +(\tilde\mu_0\tilde\mu_1+\zeta^2)\sinh a\zeta`，:math:`\eta^2=\zeta^2+k^2`。
    """
    with mpmath.workdps(dps):
        zeta = mpmath.mpc(complex(zeta))
        k = mpmath.mpc(complex(config.k))
        a = mpmath.mpf(float(config.a))
        eta2 = zeta ** 2 + k ** 2
        eta_power = eta2 if config.model is WallModel.MEMBRANE else eta2 ** 2
        m0, m1 = (mpmath.mpc(complex(mu)) / (mpmath.mpc(complex(ap)) - eta_power)
                  for mu, ap in zip(config.mu[:2], config.alpha_power[:2]))
        return (m0 + m1) * zeta * mpmath.cosh(a * zeta) + (m0 * m1 + zeta ** 2) * mpmath.sinh(a * zeta)


@dataclass
class CrossValidationReport:
    """
    :param discrepancy: 相对 :math:`L^2` 差异 :math:`\\|u_{sa}-u_{fd}\\|/\\|u_{sa}\\|`。
    :param max_error: 逐点差异的最大值。
    :param corner_mismatch: 半解析解在两个角点处的 :math:`u(0^+,y_j)-u(0,y_j)`。
    :param fd_corner_mismatch: 有限差分解的同一量，见 :meth:`FDGrid.corner_mismatch`。
    :param error: 任一流程失败时的诊断信息，此时差异为 ``nan``。
    """

    config_hash: str
    case: Optional[str]
    grid: Tuple[int, int]
    length: float
    points: int
    discrepancy: float
    max_error: float
    corner_mismatch: Sequence[complex] = ()
    fd_corner_mismatch: Sequence[complex] = ()
    error: Optional[str] = None
    threshold: float = 0.05

    @property
    def passed(self) -> bool:
        return self.error is None and bool(self.discrepancy < self.threshold)

    def to_dict(self) -> Dict:
        return {
            "config_hash": self.config_hash,
            "case": self.case,
            "grid": list(self.grid),
            "length": self.length,
            "points": self.points,
            "discrepancy": self.discrepancy,
            "max_error": self.max_error,
            "corner_mismatch": [complex_pair(v) for v in self.corner_mismatch],
            "fd_corner_mismatch": [complex_pair(v) for v in self.fd_corner_mismatch],
            "threshold": self.threshold,
            "passed": self.passed,
            "error": self.error,
        }


def _sample_nodes(fd: FDGrid, config: WaveguideConfig, nx: int = SAMPLE_SHAPE[0], ny: int = SAMPLE_SHAPE[1]):
    reach = min(fd.length, config.source.x + 2 * config.a)
    i_max = int(reach / fd.hx)
    i = np.unique(np.rint(np.linspace(0, i_max, nx)).astype(int))
    m = np.unique(np.rint(np.linspace(0, fd.ny, ny)).astype(int))
    ii, mm = np.meshgrid(i, m, indexing="ij")
    x, y = ii.ravel() * fd.hx, mm.ravel() * fd.hy
    keep = np.hypot(x - config.source.x, y - config.source.y) > 0.25 * config.a
    return ii.ravel()[keep], mm.ravel()[keep]


def cross_validate(config: WaveguideConfig, grid: Optional[GridSpec] = None,
                   modes: Optional[int] = None, threshold: float = 0.05) -> CrossValidationReport:
    """
    在有限差分网格的一组节点上比较 :func:`~strip_helmholtz.field.interior_field` 与
    :func:`fd_solve`。节点取 :math:`[0,x^\\circ+2a]\\times[0,a]` 上 16×16 的格点，
    离点源 ``0.25*a`` 以内的节点不参与比较。任一流程失败时仍返回报告。

    :param grid: 缺省为 512×128 个间隔；未给出截断长度时取 ``8*a``。
    """
    grid = GridSpec(*VERIFY_GRID) if grid is None else grid
    if grid.length is None:
        grid = replace(grid, length=VERIFY_LENGTH * config.a)
    case, mismatch, fd_mismatch = None, (), ()
    try:
        fd = fd_solve(config, grid)
        fd_mismatch = tuple(complex(v) for v in fd.corner_mismatch())
        ii, mm = _sample_nodes(fd, config)
        constants = solve_waveguide(config)
        case = constants.case_label.value
        field_grid = interior_field(constants, ii * fd.hx, mm * fd.hy, modes=modes)
        mismatch = tuple(complex(v) for v in corner_mismatch(constants))
    except StripHelmholtzError as e:
        logger.error(f"Cross validation failed: {type(e).__name__}: {e}")
        return CrossValidationReport(config.config_hash(), case, (grid.nx, grid.ny), float("nan"), 0,
                                     float("nan"), float("nan"), mismatch, fd_mismatch,
                                     f"{type(e).__name__}: {e}", threshold)
    reference = fd.solution[ii, mm]
    diff = field_grid.values - reference
    discrepancy = float(np.linalg.norm(diff) / np.linalg.norm(field_grid.values))
    report = CrossValidationReport(config.config_hash(), case, (fd.nx, fd.ny), fd.length, len(ii), discrepancy,
                                   float(np.abs(diff).max()), mismatch, fd_mismatch, threshold=threshold)
    logger.info(f"Cross validation on {report.points} nodes: relative L2 discrepancy {discrepancy:.3e}.")
    return report
