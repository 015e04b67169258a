r"""
变换域中的基本函数：分支 :math:`\zeta(\eta)=\sqrt{\eta^2-k^2}`、壁面阻抗
:math:`\tilde\mu_j` 与 :math:`\hat\mu_2`、色散函数 :math:`\tilde\Delta`
与 :math:`\Delta`、一维 Green 函数、基本解组以及 :math:`\Lambda` 系数。

所有函数均支持标量与 ``numpy`` 数组输入。凡是含 :math:`e^{\pm a\zeta}`
的表达式都以 :math:`e^{-a\zeta}` 缩放后计算，避免 :math:`|a\zeta|` 较大时溢出。
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Tuple

import numpy as np

from strip_helmholtz.config import WallModel, WaveguideConfig
from strip_helmholtz.errors import DispersionZero, EtaZero, OnBranchCut, Overflow

__all__ = [
    "SpectralPoint",
    "KernelContext",
    "TransformedForcing",
    "LambdaTable",
    "zeta_branch",
    "dispersion_tilde",
    "dispersion_full",
    "dispersion_even",
    "dispersion_even_derivative",
    "green_function",
    "fundamental_pair",
    "lambda_coefficients",
    "h_terms",
]

_CUT_TOL = 1e-12
_EXP_LIMIT = 700.0


def zeta_branch(eta, k: complex, check: bool = True):
    r"""
    计算 :math:`\zeta=\sqrt{\eta^2-k^2}`，割线取连接 :math:`\pm k` 的直线向外延伸
    的两条射线，并满足 :math:`\zeta(0)=-ik`。

    实现为 :math:`\zeta=-ik\sqrt{1-(\eta/k)^2}`，其中平方根取主值。割线对应
    :math:`\eta/k` 为实数且 :math:`|\eta/k|\ge 1`。

    :param eta: 复数或复数数组。
    :param k: 波数。
    :param check: 是否检查 ``eta`` 落在割线上。
    :raises OnBranchCut: ``eta`` 与割线的距离小于容差。
    """
    eta = np.asarray(eta, dtype=complex)
    t = eta / k
    if check:
        on_cut = (np.abs(t.imag) < _CUT_TOL * (1 + np.abs(t))) & (np.abs(t.real) >= 1)
        if np.any(on_cut):
            raise OnBranchCut(f"eta={eta[on_cut].ravel()[0]!r} lies on the cut of zeta for k={k!r}.")
    zeta = -1j * k * np.sqrt(1 - t * t)
    return zeta if zeta.ndim else complex(zeta)


@dataclass(frozen=True)
class SpectralPoint:
    eta: complex
    zeta: complex

    @classmethod
    def of(cls, eta: complex, k: complex) -> "SpectralPoint":
        return cls(complex(eta), zeta_branch(eta, k))


@dataclass(frozen=True)
class KernelContext:
    """
    变换域计算所需的上下文，持有已校验的配置以及 :math:`\\tilde\\mu_j`、
    :math:`\\hat\\mu_2` 的计算方法。

    膜：:math:`\\tilde\\mu_j=\\mu_j/(\\alpha_j^2-\\eta^2)`，
    :math:`\\hat\\mu_2=\\mu_2/(\\zeta^2+\\alpha_2^2)`；
    板：:math:`\\tilde\\mu_j=\\mu_j/(\\alpha_j^4-\\eta^4)`，
    :math:`\\hat\\mu_2=\\mu_2/(\\alpha_2^4-\\zeta^4)`。
    """

    config: WaveguideConfig
    k: complex = field(init=False)
    a: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "k", complex(self.config.k))
        object.__setattr__(self, "a", float(self.config.a))

    @property
    def model(self) -> WallModel:
        return self.config.model

    @cached_property
    def alpha(self) -> np.ndarray:
        return self.config.alpha

    @cached_property
    def mu(self) -> np.ndarray:
        return self.config.mu

    @cached_property
    def alpha_power(self) -> np.ndarray:
        return self.config.alpha_power

    @property
    def sigma(self) -> int:
        r"""满足 :math:`\eta-i\hat\mu_2=\sigma P(-\eta)/w_2(\zeta)` 的符号。"""
        return -1 if self.model is WallModel.MEMBRANE else 1

    @cached_property
    def poly_coeffs(self) -> np.ndarray:
        r"""
        q(η) 或 Q(η) 的系数（降幂），满足 :math:`H(\eta)=P(\eta)/P(-\eta)`。
        """
        k2 = self.k * self.k
        if self.model is WallModel.MEMBRANE:
            return np.array([1, 0, self.alpha_power[2] - k2, 1j * self.mu[2]], dtype=complex)
        return np.array([1, 0, -2 * k2, 0, k2 * k2 - self.alpha_power[2], -1j * self.mu[2]],
                        dtype=complex)

    def zeta(self, eta, check: bool = True):
        return zeta_branch(eta, self.k, check=check)

    def poly(self, eta):
        return np.polyval(self.poly_coeffs, eta)

    def wall_denominator(self, j: int, eta):
        r""":math:`d_j(\eta)=\alpha_j^2-\eta^2` （膜）或 :math:`\alpha_j^4-\eta^4` （板）。"""
        return self.alpha_power[j] - np.asarray(eta, dtype=complex) ** self.model.power

    def mu_tilde(self, j: int, eta):
        return self.mu[j] / self.wall_denominator(j, eta)

    def vertical_weight(self, zeta):
        r""":math:`w_2(\zeta)=\zeta^2+\alpha_2^2` （膜）或 :math:`\alpha_2^4-\zeta^4` （板）。"""
        zeta = np.asarray(zeta, dtype=complex)
        if self.model is WallModel.MEMBRANE:
            return zeta * zeta + self.alpha_power[2]
        return self.alpha_power[2] - zeta ** 4

    def mu_hat2(self, zeta):
        return self.mu[2] / self.vertical_weight(zeta)

    def eta_power_from_zeta(self, zeta):
        r"""由 :math:`\zeta` 计算 :math:`\eta^2` 或 :math:`\eta^4`。"""
        eta2 = np.asarray(zeta, dtype=complex) ** 2 + self.k * self.k
        return eta2 if self.model is WallModel.MEMBRANE else eta2 * eta2

    def mu_tilde_from_zeta(self, zeta):
        ep = self.eta_power_from_zeta(zeta)
        return self.mu[0] / (self.alpha_power[0] - ep), self.mu[1] / (self.alpha_power[1] - ep)


@dataclass
class TransformedForcing:
    r"""
    变换后的外力项：:math:`\hat{\tilde g}(\eta,\pm i\zeta)` 与
    :math:`\tilde g^0(\eta)`、:math:`\tilde g^1(\eta)`。
    """

    g_hat_plus: complex = 0j
    g_hat_minus: complex = 0j
    g0: complex = 0j
    g1: complex = 0j

    @classmethod
    def point_source(cls, eta, zeta, x0: float, y0: float) -> "TransformedForcing":
        r"""点源 :math:`g=-\delta(x-x^\circ)\delta(y-y^\circ)` 的变换。"""
        phase = np.exp(1j * eta * x0)
        return cls(g_hat_plus=-phase * np.exp(-zeta * y0), g_hat_minus=-phase * np.exp(zeta * y0))


@dataclass
class LambdaTable:
    """
    :math:`\\Lambda` 系数。``matrix`` 的后两行已乘以 :math:`e^{-a\\zeta}`，
    原矩阵等于 ``matrix`` 的后两行再乘以 ``exp(log_row_scale)``。
    ``zeta`` 为计算所用的 :math:`\\zeta`，取 :math:`\\mathrm{Re}\\,\\zeta\\ge 0` 的一支；
    与之配合的 :math:`\\hat{\\tilde g}(\\eta,\\pm i\\zeta)` 须用同一个 ``zeta`` 计算。
    """

    l00: complex
    l01: complex
    l10: complex
    l11: complex
    matrix: np.ndarray
    log_row_scale: complex
    zeta: complex = 0j


def _check_exponent(exponent, what: str):
    if np.any(np.abs(np.real(exponent)) > _EXP_LIMIT):
        raise Overflow(f"{what} overflows double precision (Re exponent="
                       f"{np.max(np.abs(np.real(exponent))):.1f}).")


def _sinhc(z):
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-4
    safe = np.where(small, 1.0, z)
    z2 = z * z
    return np.where(small, 1 + z2 / 6 + z2 * z2 / 120, np.sinh(safe) / safe)


def _right_half(zeta):
    zeta = np.asarray(zeta, dtype=complex)
    return np.where(zeta.real < 0, -zeta, zeta)


def _scaled_tilde(zeta, ctx: KernelContext):
    r""":math:`\tilde\Delta(\zeta)e^{-a\zeta}`。"""
    m0, m1 = ctx.mu_tilde_from_zeta(zeta)
    e2 = np.exp(-2 * ctx.a * zeta)
    return 0.5 * (m0 + m1) * zeta * (1 + e2) + 0.5 * (m0 * m1 + zeta * zeta) * (1 - e2)


def dispersion_tilde(zeta, ctx: KernelContext, scaled: bool = False):
    r"""
    :math:`\tilde\Delta(\zeta)=(\tilde\mu_0+\tilde\mu_1)\zeta\cosh a\zeta+
    (\tilde\mu_0\tilde\mu_1+\zeta^2)\sinh a\zeta`。

    :param scaled: 为 ``True`` 时返回 ``(mantissa, exponent)``，满足
        :math:`\tilde\Delta=\mathrm{mantissa}\cdot e^{\mathrm{exponent}}` 且
        ``Re(exponent) >= 0``。
    :raises Overflow: 未缩放的结果超出双精度范围。
    """
    zeta = np.asarray(zeta, dtype=complex)
    flip = zeta.real < 0
    right = np.where(flip, -zeta, zeta)
    mantissa = np.where(flip, -1, 1) * _scaled_tilde(right, ctx)
    exponent = ctx.a * right
    if scaled:
        return mantissa, exponent
    _check_exponent(exponent, "dispersion_tilde")
    value = mantissa * np.exp(exponent)
    return value if value.ndim else complex(value)


def _full_parts(eta, zeta, ctx: KernelContext):
    d0, d1 = ctx.wall_denominator(0, eta), ctx.wall_denominator(1, eta)
    mu0, mu1 = ctx.mu[0], ctx.mu[1]
    return mu0 * d1 + mu1 * d0, mu0 * mu1 + d0 * d1 * zeta * zeta


def dispersion_full(eta, ctx: KernelContext, scaled: bool = False):
    r"""
    :math:`\Delta(\eta)=[\mu_0 d_1+\mu_1 d_0]\zeta\cosh a\zeta+
    [\mu_0\mu_1+d_0d_1\zeta^2]\sinh a\zeta`，其中 :math:`d_j` 见
    :meth:`KernelContext.wall_denominator`。等于 :math:`d_0d_1\tilde\Delta(\zeta)`。
    """
    eta = np.asarray(eta, dtype=complex)
    zeta = ctx.zeta(eta)
    flip = np.real(zeta) < 0
    right = np.where(flip, -zeta, zeta)
    p, s = _full_parts(eta, right, ctx)
    e2 = np.exp(-2 * ctx.a * right)
    mantissa = np.where(flip, -1, 1) * (0.5 * p * right * (1 + e2) + 0.5 * s * (1 - e2))
    exponent = ctx.a * right
    if scaled:
        return mantissa, exponent
    _check_exponent(exponent, "dispersion_full")
    value = mantissa * np.exp(exponent)
    return value if value.ndim else complex(value)


def dispersion_even(eta, ctx: KernelContext, scaled: bool = False):
    r"""
    :math:`\Delta(\eta)/\zeta`，:math:`\eta` 的偶整函数，与 :math:`\zeta` 的分支无关。
    """
    eta = np.asarray(eta, dtype=complex)
    zeta = _right_half(zeta_branch(eta, ctx.k, check=False))
    p, s = _full_parts(eta, zeta, ctx)
    az = ctx.a * zeta
    e2 = np.exp(-2 * az)
    # cosh(az)e^{-az} and sinh(az)e^{-az}/zeta
    ch = 0.5 * (1 + e2)
    big = np.abs(az) > 1e-4
    sh = np.where(big, 0.5 * (1 - e2) / np.where(big, zeta, 1), ctx.a * _sinhc(az) * np.exp(-az))
    mantissa = p * ch + s * sh
    if scaled:
        return mantissa, az
    _check_exponent(az, "dispersion_even")
    value = mantissa * np.exp(az)
    return value if value.ndim else complex(value)


def dispersion_even_derivative(eta, ctx: KernelContext, step: float = 1e-3):
    r"""
    :math:`\frac{d}{d\eta}[\Delta(\eta)/\zeta]`，四阶中心差分。
    """
    eta = np.asarray(eta, dtype=complex)
    h = step * (1 + np.abs(eta))
    f = lambda z: dispersion_even(z, ctx)
    value = (8 * (f(eta + h) - f(eta - h)) - (f(eta + 2 * h) - f(eta - 2 * h))) / (12 * h)
    return value if np.ndim(value) else complex(value)


def _dispersion_guard(scaled_tilde, zeta, ctx: KernelContext):
    scale = 1 + np.abs(zeta)
    if np.any(np.abs(scaled_tilde) < 1e-12 * scale):
        raise DispersionZero(f"Delta~(zeta) vanishes at zeta={np.ravel(zeta)[0]!r}; "
                             f"eta is a waveguide eigenvalue.")


def fundamental_pair(y, eta, ctx: KernelContext):
    r"""
    基本解组 :math:`(\varphi_0(y),\varphi_1(y))`，满足
    :math:`U_m[\varphi_j]=\delta_{mj}`。
    """
    y = np.asarray(y, dtype=float)
    zeta = _right_half(ctx.zeta(eta))
    m0, m1 = ctx.mu_tilde_from_zeta(zeta)
    dhat = _scaled_tilde(zeta, ctx)
    _dispersion_guard(dhat, zeta, ctx)
    a = ctx.a
    # hyperbolic functions multiplied by e^{-a zeta}
    ea, eb = np.exp(-zeta * y), np.exp(-zeta * (2 * a - y))
    phi0 = (zeta * 0.5 * (ea + eb) + m1 * 0.5 * (ea - eb)) / dhat
    ec, ed = np.exp(-zeta * (a - y)), np.exp(-zeta * (a + y))
    phi1 = (zeta * 0.5 * (ec + ed) + m0 * 0.5 * (ec - ed)) / dhat
    return phi0, phi1


def green_function(y, s, eta, ctx: KernelContext):
    r"""
    一维 Green 函数

    .. math::

        G(y,s)=-\frac{e^{-\zeta|y-s|}}{2\zeta}+\frac{1}{2\zeta}
        \left[(\tilde\mu_0-\zeta)\varphi_0(y)e^{-\zeta s}
        +(\tilde\mu_1-\zeta)\varphi_1(y)e^{-\zeta(a-s)}\right].

    :raises DispersionZero: :math:`\tilde\Delta(\zeta)` 在容差内为零。
    """
    y, s = np.asarray(y, dtype=float), np.asarray(s, dtype=float)
    zeta = _right_half(ctx.zeta(eta))
    m0, m1 = ctx.mu_tilde_from_zeta(zeta)
    phi0, phi1 = fundamental_pair(y, eta, ctx)
    free = -np.exp(-zeta * np.abs(y - s)) / (2 * zeta)
    reflected = ((m0 - zeta) * phi0 * np.exp(-zeta * s)
                 + (m1 - zeta) * phi1 * np.exp(-zeta * (ctx.a - s))) / (2 * zeta)
    value = free + reflected
    return value if value.ndim else complex(value)


def lambda_coefficients(eta, ctx: KernelContext) -> LambdaTable:
    r"""
    计算 :math:`\Lambda_{00},\Lambda_{01},\Lambda_{10},\Lambda_{11}` 以及将
    :math:`\tilde u(\pm\eta,y_j)` 映射为 :math:`\hat u_x(0,\pm i\zeta)`、
    :math:`\hat u(0,\pm i\zeta)` 的 4×4 矩阵。

    化简后 :math:`\Lambda_{00}=(\zeta+\tilde\mu_1)e^{a\zeta}/(2\tilde\Delta)`，
    :math:`\Lambda_{11}=(\zeta+\tilde\mu_0)/(2\tilde\Delta)`。

    :raises EtaZero: ``eta`` 为零。
    :raises DispersionZero: :math:`\tilde\Delta(\zeta)` 为零。
    """
    eta = complex(eta)
    if eta == 0:
        raise EtaZero("Lambda(zeta) is singular at eta=0.")
    zeta = complex(_right_half(ctx.zeta(eta)))
    m0, m1 = ctx.mu_tilde_from_zeta(zeta)
    dhat = complex(_scaled_tilde(zeta, ctx))
    _dispersion_guard(dhat, zeta, ctx)
    ea = np.exp(-ctx.a * zeta)
    l00 = (zeta + m1) / (2 * dhat)
    l01 = (zeta - m1) * ea * ea / (2 * dhat)
    l10 = (zeta - m0) * ea / (2 * dhat)
    l11 = (zeta + m0) * ea / (2 * dhat)

    p0, n0 = m0 + zeta, m0 - zeta
    p1, n1 = m1 + zeta, m1 - zeta
    matrix = -np.array([
        [eta * p0, eta * p0, eta * n1 * ea, eta * n1 * ea],
        [1j * p0, -1j * p0, 1j * n1 * ea, -1j * n1 * ea],
        [eta * n0 * ea, eta * n0 * ea, eta * p1, eta * p1],
        [1j * n0 * ea, -1j * n0 * ea, 1j * p1, -1j * p1],
    ], dtype=complex) / (2 * eta)
    return LambdaTable(complex(l00), complex(l01), complex(l10), complex(l11), matrix, ctx.a * zeta, zeta)


def h_terms(eta, forcing: TransformedForcing, ctx: KernelContext) -> Tuple[complex, complex]:
    r"""
    外力项

    .. math::

        h_0=\Lambda_{00}\hat{\tilde g}(\eta,i\zeta)+\Lambda_{01}\hat{\tilde g}(\eta,-i\zeta)
        -\tilde g^0\varphi_0(0)-\tilde g^1\varphi_1(0),

        h_1=\Lambda_{10}\hat{\tilde g}(\eta,i\zeta)+\Lambda_{11}\hat{\tilde g}(\eta,-i\zeta)
        -\tilde g^0\varphi_0(a)-\tilde g^1\varphi_1(a).
    """
    table = lambda_coefficients(eta, ctx)
    phi0, phi1 = fundamental_pair(np.array([0.0, ctx.a]), eta, ctx)
    h0 = (table.l00 * forcing.g_hat_plus + table.l01 * forcing.g_hat_minus
          - forcing.g0 * phi0[0] - forcing.g1 * phi1[0])
    h1 = (table.l10 * forcing.g_hat_plus + table.l11 * forcing.g_hat_minus
          - forcing.g0 * phi0[1] - forcing.g1 * phi1[1])
    return complex(h0), complex(h1)
