r"""
由边缘常数与 :math:`\Phi_j^\pm` 重建边界迹线与内部场：

* :func:`u_hat_vertical`：竖直壁上的 Laplace 变换 :math:`\hat u(0,i\zeta)`；
* :func:`trace_vertical`、:func:`trace_horizontal`：竖直壁与水平壁上的迹线；
* :func:`corner_mismatch`：两条迹线在角点处的差；
* :func:`interior_field`：内部场、压力以及壁面位移。

所有求值都以 :class:`FieldGrid` 返回，附带误差估计。
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import integrate

from strip_helmholtz.config import WallModel
from strip_helmholtz.constants import (ConstantsSolution, coefficient_bundle, cosine_modes,
                                       vertical_transform_form)
from strip_helmholtz.errors import InvalidParameter, QuadratureNotConverged, SourceSingularity
from strip_helmholtz.kernel import _right_half, fundamental_pair, green_function
from strip_helmholtz.log import logger
from strip_helmholtz.rh import _forcing_columns, wall_forcing_columns
from strip_helmholtz.utils import thread_map

__all__ = [
    "FieldGrid",
    "ContinuationAtlas",
    "continuation_atlas",
    "u_hat_vertical",
    "u_x_hat_vertical",
    "trace_vertical",
    "trace_horizontal",
    "corner_mismatch",
    "interior_field",
    "pressure",
    "wall_deflection",
    "vertical_deflection",
]

SOURCE_EXCLUSION = 1e-2


@dataclass
class FieldGrid:
    """
    一组点上的场值。

    :param kind: ``'vertical'``、``'horizontal'`` 或 ``'interior'``。
    :param error: 每个值的误差估计。
    :param pressure: 压力 :math:`p=i\\omega\\rho u`，仅内部场给出。
    :param metadata: 配置的哈希、所用方法等。
    """

    kind: str
    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    error: np.ndarray
    metadata: Dict = field(default_factory=dict)
    pressure: Optional[np.ndarray] = None

    def __post_init__(self):
        n = len(self.values)
        self.x = np.broadcast_to(np.asarray(self.x, dtype=float), (n,)).copy()
        self.y = np.broadcast_to(np.asarray(self.y, dtype=float), (n,)).copy()
        self.error = np.broadcast_to(np.asarray(self.error, dtype=float), (n,)).copy()
        if self.pressure is not None and len(self.pressure) != n:
            raise ValueError(f"pressure has {len(self.pressure)} entries for {n} points.")

    def __len__(self):
        return len(self.values)

    def to_frame(self) -> pd.DataFrame:
        columns = {
            "x": self.x,
            "y": self.y,
            "re_u": self.values.real,
            "im_u": self.values.imag,
            "err_est": self.error,
        }
        if self.pressure is not None:
            columns["re_p"] = self.pressure.real
            columns["im_p"] = self.pressure.imag
        return pd.DataFrame(columns)


# sector -> half-plane of eta
SECTOR_HALF_PLANE = {"D1+": 1, "D2+": -1, "D3+": 1, "D1-": 1, "D2-": -1, "D3-": 1}


@dataclass
class ContinuationAtlas:
    r"""
    :math:`\xi=i\zeta` 平面上 :math:`\eta=i\sqrt{\xi^2-k^2}` 的分支与扇形划分。

    分支由 :math:`\xi\mp k=\rho_\pm e^{i\theta_\pm}`，
    :math:`\alpha-2\pi<\theta_+<\alpha`，:math:`\alpha-\pi<\theta_-<\alpha+\pi`
    确定，其中 :math:`\alpha=\arg k`。六个扇形以 :math:`\arg\xi` 划分：
    D1+ 为 :math:`(0,\alpha)`，D2+ 为 :math:`(\alpha,\pi/2)`，D3+ 为 :math:`(\pi/2,\pi)`，
    D1- 为 :math:`(\pi,\alpha+\pi)`，D2- 为 :math:`(\alpha+\pi,3\pi/2)`，
    D3- 为 :math:`(3\pi/2,2\pi)`。对 :math:`|\xi|\gg|k|`，D1±、D3± 映到
    :math:`\mathbb C^+_\eta`，D2± 映到 :math:`\mathbb C^-_\eta`。

    :param poles: :math:`\hat u(0,i\zeta)/w_2` 在 :math:`\xi` 平面上的极点。
    """

    k: complex
    poles: Dict[str, complex] = field(default_factory=dict)

    @property
    def angle(self) -> float:
        return float(np.angle(self.k))

    def eta(self, xi):
        xi = np.asarray(xi, dtype=complex)
        alpha = self.angle
        theta_p = np.angle(xi - self.k)
        theta_p = np.where(theta_p >= alpha, theta_p - 2 * np.pi, theta_p)
        theta_m = np.angle(xi + self.k)
        theta_m = np.where(theta_m <= alpha - np.pi, theta_m + 2 * np.pi, theta_m)
        value = 1j * np.sqrt(np.abs(xi - self.k) * np.abs(xi + self.k)) * np.exp(0.5j * (theta_p + theta_m))
        return value if value.ndim else complex(value)

    def sector(self, xi) -> str:
        phase = float(np.angle(complex(xi))) % (2 * np.pi)
        alpha = self.angle
        bounds = [(alpha, "D1+"), (np.pi / 2, "D2+"), (np.pi, "D3+"), (np.pi + alpha, "D1-"),
                  (1.5 * np.pi, "D2-"), (2 * np.pi, "D3-")]
        for upper, label in bounds:
            if phase < upper:
                return label
        return "D3-"

    def half_plane(self, xi) -> int:
        """:math:`\\eta(\\xi)` 所在的半平面，+1 为上半平面。"""
        return 1 if complex(self.eta(xi)).imag > 0 else -1


def continuation_atlas(constants: ConstantsSolution) -> ContinuationAtlas:
    r"""
    收集 :math:`\xi` 平面上的极点：U 中每个根对应的 :math:`\pm\xi_m`，
    :math:`w_2` 的零点，以及膜模型中的 :math:`\hat\xi_0,\hat\xi_1`。
    """
    sol = constants.solution
    ctx = sol.rhs.ctx
    poles = {}
    if ctx.model is WallModel.MEMBRANE:
        bundle = coefficient_bundle(sol, compatibility=False)
        for m, xi in zip(range(2 - len(bundle.xi), 2), bundle.xi):
            poles[f"+xi{m}"], poles[f"-xi{m}"] = complex(xi), complex(-xi)
        poles["xi_hat0"], poles["xi_hat1"] = complex(bundle.xi_hat[0]), complex(bundle.xi_hat[1])
        poles["+alpha2"], poles["-alpha2"] = complex(ctx.alpha[2]), complex(-ctx.alpha[2])
    else:
        for m, eta in enumerate(sol.rhs.factorization.upper):
            xi = 1j * np.sqrt(eta * eta - ctx.k * ctx.k)
            xi = xi if xi.imag > 0 else -xi
            poles[f"+xi{m}"], poles[f"-xi{m}"] = complex(xi), complex(-xi)
        for label, zeta in (("alpha2", ctx.alpha[2]), ("i*alpha2", 1j * ctx.alpha[2])):
            poles[f"+{label}"], poles[f"-{label}"] = complex(1j * zeta), complex(-1j * zeta)
    return ContinuationAtlas(ctx.k, poles)


def _bound(constants: ConstantsSolution, forms: np.ndarray) -> np.ndarray:
    return forms @ constants.unknowns


def _metadata(constants: ConstantsSolution, **extra) -> dict:
    config = constants.solution.rhs.ctx.config
    return {"config_hash": config.config_hash(), "case": constants.case_label.value, **extra}


def u_hat_vertical(constants: ConstantsSolution, zeta, branch: int = 1) -> np.ndarray:
    r"""
    :math:`\hat u(0,i\zeta)=\int_0^au(0,y)e^{-\zeta y}dy`，见
    :func:`~strip_helmholtz.constants.vertical_transform_form`。结果与 ``branch`` 无关。
    """
    return _bound(constants, vertical_transform_form(constants.solution, zeta, branch))


def u_x_hat_vertical(constants: ConstantsSolution, zeta) -> np.ndarray:
    r""":math:`\hat u_x(0,i\zeta)=[\mu_2\hat u(0,i\zeta)-\hat g^2(i\zeta)w_2(\zeta)]/w_2(\zeta)`。"""
    ctx = constants.solution.rhs.ctx
    zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
    eta = np.sqrt(zeta * zeta + ctx.k * ctx.k)
    _, n2 = _forcing_columns(eta, zeta, np.exp(-ctx.a * zeta), ctx, constants.solution.rhs.source)
    numerator = ctx.mu[2] * u_hat_vertical(constants, zeta) - _bound(constants, constants.solution.expand(n2[:, 0]))
    return numerator / ctx.vertical_weight(zeta)


def trace_vertical(constants: ConstantsSolution, y, method: Optional[str] = None,
                   modes: Optional[int] = None) -> FieldGrid:
    r"""
    竖直壁迹线 :math:`u(0,y)`。

    * ``'residue'`` （膜的缺省）：对 U 中每个根的留数求和，见
      :meth:`~strip_helmholtz.constants.CoefficientBundle.trace_forms`；
    * ``'cosine'`` （板的缺省）：余弦级数，误差由 N 与 N/2 项的差估计。

    :raises BranchSelectionFailure: :math:`\xi_m` 无法取在上半平面。
    """
    sol = constants.solution
    ctx = sol.rhs.ctx
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any((y < 0) | (y > ctx.a)):
        raise InvalidParameter("y", y, f"must lie in [0, {ctx.a}]")
    if method is None:
        method = "residue" if ctx.model is WallModel.MEMBRANE else "cosine"
    if method == "residue":
        bundle = coefficient_bundle(sol, compatibility=False)
        values = _bound(constants, bundle.trace_forms(y))
        error = ctx.config.solver.tol * (1 + np.abs(values))
    elif method == "cosine":
        table = cosine_modes(sol, modes)
        basis, coef = table.basis(y), _bound(constants, table.C)
        values = basis @ coef
        half = len(table) // 2
        error = np.abs(values - basis[:, :half] @ coef[:half]) / 7
    else:
        raise InvalidParameter("method", method, "must be 'residue' or 'cosine'")
    return FieldGrid("vertical", 0.0, y, values, error, _metadata(constants, method=method))


def _split_poles(constants: ConstantsSolution):
    fac = constants.solution.rhs.factorization
    poles, residues = fac.lower_poles()
    real = np.abs(poles.imag) <= 1e-9 * (1 + np.abs(poles))
    return poles[~real], residues[~real], poles[real], residues[real]


def _tail_start(constants: ConstantsSolution, points: Sequence[float]) -> float:
    ctx = constants.solution.rhs.ctx
    return 2 * max([abs(ctx.k) + 4 * np.pi / ctx.a] + list(points))


def _horizontal_points(constants: ConstantsSolution, anchor: Optional[complex]) -> list:
    ctx = constants.solution.rhs.ctx
    fac = constants.solution.rhs.factorization
    points = _breakpoints(constants) + [abs(float(np.real(ctx.k)))]
    points += [abs(float(z.real)) for z in np.concatenate([fac.lower, fac.upper])]
    if anchor is not None:
        points.append(abs(anchor.real))
    return sorted({p for p in points if p > 0})


def _tail_quad(func, start: float, options, x: float = 0.0, weight: Optional[str] = None) -> Tuple[float, float]:
    kwargs = dict(weight=weight, wvar=x, limlst=200) if weight else dict(limit=options.quad_limit)
    out = integrate.quad(func, start, np.inf, epsabs=options.tol * 1e-2, epsrel=options.tol, full_output=1,
                         **kwargs)
    if not np.isfinite(out[0]):
        raise QuadratureNotConverged(f"Fourier tail from {start:g} diverged (x={x:g}).")
    if len(out) > 3:
        logger.warning_once(f"Fourier tail from {start:g} reached its subdivision limit; "
                            f"error estimate {out[1]:.2e}.")
    return out[0], out[1]


def _fourier_tail(pair, start: float, x: np.ndarray, columns: int, options) -> Tuple[np.ndarray, float]:
    r"""
    :math:`\int_T^\infty[v(\tau)e^{-i\tau x}+v(-\tau)e^{i\tau x}]d\tau`，按余弦、正弦权重分别求积。
    ``pair(t)`` 返回形状 ``(2, columns)`` 的 :math:`[v(t), v(-t)]`。
    """
    out = np.zeros((len(x), columns), dtype=complex)
    error = 0.0
    for j in range(columns):
        even = lambda t: pair(t)[0, j] + pair(t)[1, j]
        odd = lambda t: pair(t)[0, j] - pair(t)[1, j]
        for i, xi in enumerate(x):
            if xi == 0:
                parts = [_tail_quad(lambda t: part(even(t)), start, options) for part in (np.real, np.imag)]
                out[i, j] = parts[0][0] + 1j * parts[1][0]
                error += parts[0][1] + parts[1][1]
                continue
            cos = [_tail_quad(lambda t: part(even(t)), start, options, xi, "cos") for part in (np.real, np.imag)]
            sin = [_tail_quad(lambda t: part(odd(t)), start, options, xi, "sin") for part in (np.real, np.imag)]
            out[i, j] = cos[0][0] + 1j * cos[1][0] - 1j * (sin[0][0] + 1j * sin[1][0])
            error += sum(e for _, e in cos + sin)
    return out, error


def trace_horizontal(constants: ConstantsSolution, x, walls: Sequence[int] = (0, 1),
                     shift: float = 1.0) -> FieldGrid:
    r"""
    水平壁迹线

    .. math::

        u(x,y_j)=\frac{1}{2\pi}\int_{-\infty}^{\infty}f_j(\tau)e^{-i\tau x}d\tau
        -i\sum_kr_k[\Psi_j^-(p_k)+b_j]e^{-ip_kx},\quad x\ge0,

    其中 :math:`p_k` 为 :math:`H^+` 在下半平面的极点。情形 (ii) 中实轴上的极点
    :math:`p_0=-\eta_0` 处 :math:`f_j` 有单极点 :math:`\rho_j/(\tau-p_0)`，
    :math:`\rho_j=r_0F_j(p_0)`；积分中减去 :math:`\rho_j[1/(\tau-p_0)-1/(\tau-p_0+i\beta)]`
    并补上 :math:`i\rho_je^{-i(p_0-i\beta)x}`。:math:`x=0` 时给出 :math:`x\to0^+` 的极限。

    积分在 :math:`[0,T]` 上按根、极点与分支点的实部分段自适应求积，:math:`[T,\infty)`
    上对每个 ``x`` 用带余弦、正弦权重的 Fourier 积分。

    :param walls: 需要的壁面。
    :param shift: 上述 :math:`\beta`。
    :raises QuadratureNotConverged: 自适应求积未收敛。
    """
    sol = constants.solution
    options = sol.rhs.ctx.config.solver
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0):
        raise InvalidParameter("x", x, "must be non-negative")
    poles, residues, real_poles, real_residues = _split_poles(constants)
    rho, anchor = np.zeros(2, dtype=complex), None
    if len(real_poles):
        anchor = complex(real_poles[0].real)
        rho = real_residues[0] * (sol.expand(sol.rhs.density(anchor)[0]) @ sol.unknowns)
    cache: Dict[float, np.ndarray] = {}

    def pair(t):
        if t not in cache:
            tau = np.array([t, -t], dtype=complex)
            f = sol.jump_value(tau)
            if anchor is not None:
                f = f - ((1 / (tau - anchor) - 1 / (tau - anchor + 1j * shift))[:, None] * rho[None, :])
            cache[t] = f
        return cache[t]

    def integrand(t):
        f = pair(t)
        value = (f[0][None, :] * np.exp(-1j * t * x)[:, None] + f[1][None, :] * np.exp(1j * t * x)[:, None])
        return np.stack([value.real, value.imag])

    points = _horizontal_points(constants, anchor)
    cut = _tail_start(constants, points)
    res, err, info = integrate.quad_vec(integrand, 0, cut, epsabs=options.tol * 1e-2, epsrel=options.tol,
                                        limit=options.quad_limit, points=points or None, full_output=True)
    if not info.success:
        raise QuadratureNotConverged(f"Horizontal trace quadrature failed on [0, {cut:g}] ({info.message}).")
    tail, tail_err = _fourier_tail(pair, cut, x, 2, options)
    values = (res[0] + 1j * res[1] + tail) / (2 * np.pi)
    b = sol.b_value()
    for p, r in zip(poles, residues):
        psi = sol.expand(sol.psi(np.array([p]))[0]) @ sol.unknowns
        values = values - 1j * r * (psi + b)[None, :] * np.exp(-1j * p * x)[:, None]
    if anchor is not None:
        values = values + 1j * rho[None, :] * np.exp(-1j * (anchor - 1j * shift) * x)[:, None]

    walls = list(walls)
    a = sol.rhs.ctx.a
    xs = np.repeat(x, len(walls))
    ys = np.tile([0.0 if j == 0 else a for j in walls], len(x))
    flat = values[:, walls].ravel()
    return FieldGrid("horizontal", xs, ys, flat, (err + tail_err) / (2 * np.pi),
                     _metadata(constants, method="quadrature"))


def corner_mismatch(constants: ConstantsSolution) -> np.ndarray:
    r"""
    角点处两条迹线之差 :math:`u(0^+,y_j)-u(0,y_j)`，:math:`j=0,1`。情形 (iii)
    中相容性条件使其为零；情形 (i)、(ii) 中一般不为零。
    """
    a = constants.solution.rhs.ctx.a
    horizontal = trace_horizontal(constants, [0.0]).values
    vertical = trace_vertical(constants, [0.0, a]).values
    mismatch = horizontal - vertical
    logger.info(f"Corner mismatch: |y=0| {abs(mismatch[0]):.3e}, |y=a| {abs(mismatch[1]):.3e}")
    return mismatch


@dataclass
class _ModeField:
    lam: np.ndarray
    weights: np.ndarray
    C: np.ndarray
    D: np.ndarray

    @classmethod
    def of(cls, constants: ConstantsSolution, modes: Optional[int] = None) -> "_ModeField":
        table = cosine_modes(constants.solution, modes)
        return cls(table.lam, table.weights, _bound(constants, table.C), _bound(constants, table.D))

    @property
    def parity(self) -> np.ndarray:
        return (-1.0) ** np.arange(len(self.lam))


def _wall_values(constants: ConstantsSolution, eta: complex) -> Tuple[complex, complex]:
    sol = constants.solution
    g0, g1 = wall_forcing_columns(np.array([eta]), sol.rhs.ctx)
    return complex(sol.expand(g0[0]) @ sol.unknowns), complex(sol.expand(g1[0]) @ sol.unknowns)


def _u_tilde(constants: ConstantsSolution, table: _ModeField, eta: complex, y: np.ndarray) -> np.ndarray:
    r"""
    .. math::

        \tilde u(\eta,y)=\sum_nw_n(D_n-i\eta C_n)S_n(\eta,y)-e^{i\eta x^\circ}G(y,y^\circ;\eta)
        +\tilde g^0\varphi_0(y)+\tilde g^1\varphi_1(y),

    :math:`S_n=[-\cos\lambda_ny+\tilde\mu_0\varphi_0+(-1)^n\tilde\mu_1\varphi_1]/(\lambda_n^2+\zeta^2)`。
    """
    ctx = constants.solution.rhs.ctx
    source = constants.solution.rhs.source
    zeta = complex(_right_half(ctx.zeta(eta)))
    phi0, phi1 = fundamental_pair(y, eta, ctx)
    m0, m1 = ctx.mu_tilde(0, eta), ctx.mu_tilde(1, eta)
    coef = table.weights * (table.D - 1j * eta * table.C) / (table.lam ** 2 + zeta * zeta)
    modal = (-np.cos(np.outer(y, table.lam)) @ coef + m0 * phi0 * coef.sum()
             + m1 * phi1 * (table.parity @ coef))
    g0, g1 = _wall_values(constants, eta)
    point = np.exp(1j * eta * source.x) * green_function(y, source.y, eta, ctx)
    return modal - point + g0 * phi0 + g1 * phi1


def _breakpoints(constants: ConstantsSolution) -> list:
    ctx = constants.solution.rhs.ctx
    points = [abs(float(np.real(al))) for al in ctx.alpha[:2]]
    points += [abs(float(p.real)) for p in _split_poles(constants)[2]]
    return sorted({p for p in points if p > 0})


def _invert(constants: ConstantsSolution, transform, x: np.ndarray):
    r"""
    :math:`\frac{1}{2\pi}\int_0^\infty[\tilde v(\tau)e^{-i\tau x}+\tilde v(-\tau)e^{i\tau x}]d\tau`，
    ``transform(eta)`` 返回与 ``x`` 同长的数组。
    """
    options = constants.solution.rhs.ctx.config.solver

    def integrand(t):
        value = transform(t) * np.exp(-1j * t * x) + transform(-t) * np.exp(1j * t * x)
        return np.stack([value.real, value.imag])

    res, err, info = integrate.quad_vec(integrand, 0, np.inf, epsabs=1e-12, epsrel=options.tol,
                                        limit=options.quad_limit, points=_breakpoints(constants) or None,
                                        full_output=True)
    if not info.success:
        raise QuadratureNotConverged(f"Inverse Fourier transform failed ({info.message}).")
    return (res[0] + 1j * res[1]) / (2 * np.pi), err / (2 * np.pi)


def _check_points(constants: ConstantsSolution, x: np.ndarray, y: np.ndarray):
    ctx = constants.solution.rhs.ctx
    source = constants.solution.rhs.source
    if np.any(x < 0):
        raise InvalidParameter("x", x, "must be non-negative")
    if np.any((y < 0) | (y > ctx.a)):
        raise InvalidParameter("y", y, f"must lie in [0, {ctx.a}]")
    distance = np.hypot(x - source.x, y - source.y)
    if np.any(distance < SOURCE_EXCLUSION * ctx.a):
        i = int(np.argmin(distance))
        raise SourceSingularity(f"Point ({x[i]}, {y[i]}) lies within {SOURCE_EXCLUSION * ctx.a:g} "
                                f"of the source.")


def pressure(constants: ConstantsSolution, values) -> np.ndarray:
    r"""压力 :math:`p=i\omega\rho u`；未给出 ``omega`` 时取 :math:`kc`。"""
    return 1j * _omega(constants) * constants.solution.rhs.ctx.config.rho * np.asarray(values)


def interior_field(constants: ConstantsSolution, x, y, modes: Optional[int] = None,
                   chunk: int = 64, threads: Optional[int] = None) -> FieldGrid:
    r"""
    内部场 :math:`u(x,y)`，对 :math:`\tilde u(\eta,y)` 沿实轴作 Fourier 逆变换。
    ``x``、``y`` 按广播规则配对，按 ``chunk`` 个点一组并行求积。

    :raises SourceSingularity: 点与点源距离小于 ``1e-2*a``。
    """
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    x, y = x.ravel(), y.ravel()
    _check_points(constants, x, y)
    table = _ModeField.of(constants, modes)
    threads = constants.solution.rhs.ctx.config.solver.threads if threads is None else threads

    def run(index):
        part = slice(index, index + chunk)
        return _invert(constants, lambda eta: _u_tilde(constants, table, eta, y[part]), x[part])

    starts = list(range(0, len(x), chunk))
    results = thread_map(run, starts, threads=threads, desc="field" if len(starts) > 1 else None)
    values = np.concatenate([r[0] for r in results]) if results else np.zeros(0, dtype=complex)
    error = np.concatenate([np.full(len(r[0]), r[1]) for r in results]) if results else np.zeros(0)
    logger.info(f"Interior field evaluated at {len(x)} points, max error estimate {error.max(initial=0):.2e}.")
    if error.max(initial=0) > constants.solution.rhs.ctx.config.solver.tol * (1 + np.abs(values).max(initial=0)):
        logger.warning_once("Interior field error estimate exceeds solver.tol; consider raising solver.quad_limit.")
    return FieldGrid("interior", x, y, values, error, _metadata(constants, method="fourier", modes=len(table.lam)),
                     pressure=pressure(constants, values))


def _omega(constants: ConstantsSolution) -> complex:
    config = constants.solution.rhs.ctx.config
    return config.omega if config.omega is not None else config.k * config.c_sound


def wall_deflection(constants: ConstantsSolution, x, j: int, modes: Optional[int] = None) -> FieldGrid:
    r"""
    水平壁位移 :math:`u_j(x)=\frac{i}{\omega}u_y(x,y_j)`，其中
    :math:`\tilde u_y(\eta,0)=\tilde\mu_0\tilde u(\eta,0)-\tilde g^0`，
    :math:`\tilde u_y(\eta,a)=\tilde g^1-\tilde\mu_1\tilde u(\eta,a)`。
    """
    if j not in (0, 1):
        raise InvalidParameter("j", j, "must be 0 or 1")
    ctx = constants.solution.rhs.ctx
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y_wall = 0.0 if j == 0 else ctx.a
    _check_points(constants, x, np.full_like(x, y_wall))
    table = _ModeField.of(constants, modes)
    wall = np.full_like(x, y_wall)

    def transform(eta):
        g0, g1 = _wall_values(constants, eta)
        u = _u_tilde(constants, table, eta, wall)
        if j == 0:
            return ctx.mu_tilde(0, eta) * u - g0
        return g1 - ctx.mu_tilde(1, eta) * u

    values, err = _invert(constants, transform, x)
    scale = 1j / _omega(constants)
    return FieldGrid(f"wall{j}", x, y_wall, scale * values, abs(scale) * err,
                     _metadata(constants, method="fourier"))


def vertical_deflection(constants: ConstantsSolution, y, modes: Optional[int] = None) -> FieldGrid:
    r"""竖直壁位移 :math:`u_2(y)=\frac{i}{\omega}u_x(0,y)=\frac{i}{\omega}\sum_nw_nD_n\cos\lambda_ny`。"""
    sol = constants.solution
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any((y < 0) | (y > sol.rhs.ctx.a)):
        raise InvalidParameter("y", y, f"must lie in [0, {sol.rhs.ctx.a}]")
    table = cosine_modes(sol, modes)
    basis, coef = table.basis(y), _bound(constants, table.D)
    half = len(table) // 2
    scale = 1j / _omega(constants)
    values = scale * (basis @ coef)
    error = abs(scale) * np.abs(basis @ coef - basis[:, :half] @ coef[:half])
    return FieldGrid("vertical_deflection", 0.0, y, values, error, _metadata(constants, method="cosine"))
