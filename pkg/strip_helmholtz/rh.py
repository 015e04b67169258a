r"""
对称标量 Riemann-Hilbert 问题

.. math::

    \Phi_j^+(\eta)=H(\eta)\Phi_j^-(\eta)+f_j(\eta),\quad
    \Phi_j^+(\eta)=\Phi_j^-(-\eta),\quad j=0,1

的求解：系数 :math:`H=P(\eta)/P(-\eta)` 的分解、右端项 :math:`f_j` 的分量、Cauchy
积分 :math:`\Psi_j` 与解 :math:`\Phi_j^\pm=H^\pm(\Psi_j^\pm+b_j)`。

右端项对未知常数是线性的。本模块中所有与常数有关的量都按 *列* 存放：前
``n_constants`` 列对应壁面常数（膜为 c₀..c₃，板为 c₀₀..c₃₁），最后一列对应点源。
:class:`RHSolution` 进一步给出 :math:`\Phi_j^\pm` 关于全部未知量（常数以及情形 (iii)
中的 b₀、b₁）的线性形式，最后一个分量为常数项。
"""

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from strip_helmholtz.config import SourcePoint, WallModel
from strip_helmholtz.errors import (DispersionZero, PoleOnEvaluation, QuadratureNotConverged,
                                    RemovabilityFailure, UnsupportedCase)
from strip_helmholtz.kernel import KernelContext, _right_half, dispersion_even, dispersion_tilde
from strip_helmholtz.log import logger
from strip_helmholtz.spectra import CaseLabel, RootClassification

__all__ = [
    "KernelFactorization",
    "ComponentTable",
    "RHSide",
    "RHSolution",
    "coefficient_H",
    "wall_forcing_columns",
    "factorize",
    "rhs_components",
    "cauchy_psi",
    "removability_constant",
    "solve_phi",
]


def coefficient_H(eta, ctx: KernelContext):
    r"""
    :math:`H(\eta)=P(\eta)/P(-\eta)`，与 :math:`-(\eta+i\hat\mu_2)/(\eta-i\hat\mu_2)` 相同。

    :raises PoleOnEvaluation: ``eta`` 为 :math:`P(-\eta)` 的零点。
    """
    eta = np.asarray(eta, dtype=complex)
    den = ctx.poly(-eta)
    scale = (1 + np.abs(eta)) ** ctx.model.degree
    if np.any(np.abs(den) < 1e-14 * scale):
        raise PoleOnEvaluation(f"H(eta) has a pole at eta={np.ravel(eta)[np.argmin(np.abs(den))]!r}.")
    value = ctx.poly(eta) / den
    return value if value.ndim else complex(value)


def _product(tau, roots, sign: int = -1):
    tau = np.asarray(tau, dtype=complex)
    value = np.prod(tau[..., None] + sign * np.asarray(roots, dtype=complex), axis=-1)
    return value if value.ndim else complex(value)


@dataclass
class KernelFactorization:
    r"""
    :math:`H(\eta)=H^+(\eta)/H^-(\eta)`，其中

    .. math::

        H^+(\eta)=\frac{\prod_{z\in L}(\eta-z)}{\prod_{z\in U}(\eta+z)},\quad
        H^-(\eta)=H^+(-\eta).

    L 为下半平面中的根，U 为上半平面中的根（情形 (ii) 的实根归入 U）。
    :math:`H^+` 在上半平面解析且无零点，在无穷远处为 :math:`O(\eta^{-\kappa})`。
    """

    classification: RootClassification
    lower: np.ndarray
    upper: np.ndarray

    @property
    def case_label(self) -> CaseLabel:
        return self.classification.case_label

    @property
    def kappa(self) -> int:
        return len(self.upper) - len(self.lower)

    @property
    def degree(self) -> int:
        return len(self.lower) + len(self.upper)

    @property
    def sign(self) -> int:
        r""":math:`(-1)^n`，满足 :math:`P(-\tau)H^+(\tau)=(-1)^n\prod_L(\tau^2-z^2)`。"""
        return -1 if self.degree % 2 else 1

    def hplus(self, tau):
        return _product(tau, self.lower, -1) / _product(tau, self.upper, 1)

    def hminus(self, tau):
        return self.hplus(-np.asarray(tau, dtype=complex))

    def inv_hplus(self, tau):
        return _product(tau, self.upper, 1) / _product(tau, self.lower, -1)

    def inv_hminus(self, tau):
        return self.inv_hplus(-np.asarray(tau, dtype=complex))

    def lower_sq_product(self, tau):
        r""":math:`\prod_{z\in L}(\tau^2-z^2)`。"""
        tau = np.asarray(tau, dtype=complex)
        return _product(tau * tau, self.lower ** 2, -1)

    def lower_poles(self):
        r"""
        :math:`H^+` 的极点 :math:`p=-u\ (u\in U)` 及其留数。
        """
        poles = -self.upper
        residues = []
        for i, p in enumerate(poles):
            others = np.delete(self.upper, i)
            residues.append(_product(p, self.lower, -1) / _product(p, others, 1))
        return poles, np.array(residues, dtype=complex)


def factorize(classification: RootClassification) -> KernelFactorization:
    """
    按根的分类构造 :class:`KernelFactorization`。

    :raises UnsupportedCase: 分类中的根集合不完整。
    """
    roots = classification.roots
    lower, upper = list(classification.lower), list(classification.upper)
    if sorted(lower + upper) != list(range(len(roots))) or not lower:
        raise UnsupportedCase(f"Classification with lower={lower}, upper={upper} cannot be factorized.")
    factorization = KernelFactorization(classification, roots[lower].copy(), roots[upper].copy())
    logger.debug(f"Factorized H: L={factorization.lower}, U={factorization.upper}, "
                 f"kappa={factorization.kappa}")
    return factorization


def _apply(adj, vec):
    a11, a12, a21, a22 = (v[:, None] for v in adj)
    return np.stack([a11 * vec[:, 0] + a12 * vec[:, 1], a21 * vec[:, 0] + a22 * vec[:, 1]], axis=1)


def _adjugate(zeta, ea, ctx: KernelContext):
    r"""
    缩放后的系统矩阵 :math:`M_s` 的伴随矩阵与行列式 :math:`2\tilde\Delta e^{-a\zeta}`。
    """
    m0, m1 = ctx.mu_tilde_from_zeta(zeta)
    adj = (-(zeta + m1), -ea * (zeta - m1), ea * (m0 - zeta), -(zeta + m0))
    det = 2 * dispersion_tilde(zeta, ctx, scaled=True)[0]
    return adj, det


def wall_forcing_columns(eta, ctx: KernelContext):
    r"""
    水平壁上的 :math:`\tilde g^0(\eta)`、:math:`\tilde g^1(\eta)` 按列给出，形状均为
    ``(T, n_constants+1)``。膜为 :math:`-c_0/d_0`、:math:`c_1/d_1`；板为
    :math:`(c_{00}-i\eta c_{01})/d_0`、:math:`-(c_{10}-i\eta c_{11})/d_1`。
    """
    eta = np.atleast_1d(np.asarray(eta, dtype=complex))
    shape = (len(eta), ctx.model.n_constants + 1)
    g0, g1 = np.zeros(shape, dtype=complex), np.zeros(shape, dtype=complex)
    d0, d1 = ctx.wall_denominator(0, eta), ctx.wall_denominator(1, eta)
    if ctx.model is WallModel.MEMBRANE:
        g0[:, 0] = -1 / d0
        g1[:, 1] = 1 / d1
    else:
        g0[:, 0], g0[:, 1] = 1 / d0, -1j * eta / d0
        g1[:, 2], g1[:, 3] = -1 / d1, 1j * eta / d1
    return g0, g1


def _forcing_columns(eta, zeta, ea, ctx: KernelContext, source: SourcePoint):
    r"""
    按列给出 :math:`G(\eta)=(G_1, e^{-a\zeta}G_2)` 与 :math:`\hat g^2(\pm i\zeta)w_2(\zeta)`
    （第二个分量乘以 :math:`e^{-a\zeta}`）。
    """
    n_c = ctx.model.n_constants
    shape = (len(eta), n_c + 1)
    g0, g1 = wall_forcing_columns(eta, ctx)
    n2p, n2m = np.zeros(shape, dtype=complex), np.zeros(shape, dtype=complex)
    if ctx.model is WallModel.MEMBRANE:
        n2p[:, 2], n2m[:, 2] = -1, -ea
        n2p[:, 3], n2m[:, 3] = ea, 1
    else:
        n2p[:, 4], n2m[:, 4] = 1, ea
        n2p[:, 5], n2m[:, 5] = zeta, -zeta * ea
        n2p[:, 6], n2m[:, 6] = -ea, -1
        n2p[:, 7], n2m[:, 7] = -zeta * ea, zeta
    phase = np.exp(1j * eta * source.x)
    g_first = g0 + ea[:, None] * g1
    g_second = ea[:, None] * g0 + g1
    g_first[:, n_c] += phase * np.exp(-zeta * source.y)
    g_second[:, n_c] += phase * np.exp(-zeta * (ctx.a - source.y))
    return np.stack([g_first, g_second], axis=1), np.stack([n2p, n2m], axis=1)


def _spectral(tau, ctx: KernelContext):
    tau = np.atleast_1d(np.asarray(tau, dtype=complex))
    zeta = _right_half(ctx.zeta(tau, check=False))
    return tau, zeta, np.exp(-ctx.a * zeta)


@dataclass
class ComponentTable:
    r"""
    右端项分量

    .. math::

        f_j(\eta)=-\frac{1}{P(-\eta)\Delta(\eta)}\Big[\sum_m c_m f_j^m(\eta)+f_j^{src}(\eta)\Big].

    ``numerator`` 与 ``delta`` 均已乘以 :math:`e^{-a\zeta}`，形状分别为
    ``(T, 2, n_constants+1)`` 与 ``(T,)``。
    """

    eta: np.ndarray
    numerator: np.ndarray
    delta: np.ndarray
    poly_minus: np.ndarray

    def normalized(self) -> np.ndarray:
        r"""逐列的 :math:`-f_j^m/(P(-\eta)\Delta)`。"""
        return -self.numerator / (self.poly_minus * self.delta)[:, None, None]


def rhs_components(eta, ctx: KernelContext, source: Optional[SourcePoint] = None) -> ComponentTable:
    r"""
    计算右端项分量 :math:`f_j^m(\eta)`，它们是 :math:`\eta` 的整函数：

    .. math::

        f^m=-\tfrac12 d_0d_1\,\mathrm{adj}(M)\big[P(\eta)G^m(-\eta)-P(-\eta)G^m(\eta)
        -2\sigma\eta\,(\hat g^2w_2)^m\big].

    :param source: 点源位置，缺省时取配置中的点源。
    """
    source = ctx.config.source if source is None else source
    eta, zeta, ea = _spectral(eta, ctx)
    adj, _ = _adjugate(zeta, ea, ctx)
    g_plus, n2 = _forcing_columns(eta, zeta, ea, ctx, source)
    g_minus, _ = _forcing_columns(-eta, zeta, ea, ctx, source)
    p_plus, p_minus = ctx.poly(eta), ctx.poly(-eta)
    vec = (p_plus[:, None, None] * g_minus - p_minus[:, None, None] * g_plus
           - (2 * eta / ctx.sigma)[:, None, None] * n2)
    d0d1 = ctx.wall_denominator(0, eta) * ctx.wall_denominator(1, eta)
    numerator = -0.5 * d0d1[:, None, None] * _apply(adj, vec)
    delta = zeta * dispersion_even(eta, ctx, scaled=True)[0]
    return ComponentTable(eta, numerator, delta, p_minus)


@dataclass
class RHSide:
    r"""
    Riemann-Hilbert 问题的右端项，提供 Cauchy 积分的密度
    :math:`F_j(\tau)=f_j(\tau)/H^+(\tau)` 与跳跃 :math:`f_j(\tau)`。

    密度按下式计算，避免在实轴附近除以 :math:`P(-\tau)`：

    .. math::

        F=M^{-1}\Big[\frac{G(-\tau)}{H^-(\tau)}-\frac{G(\tau)}{H^+(\tau)}
        -\frac{2(-1)^n\tau\,\hat g^2w_2}{\sigma\prod_L(\tau^2-z^2)}\Big].
    """

    ctx: KernelContext
    factorization: KernelFactorization
    source: SourcePoint = None

    def __post_init__(self):
        if self.source is None:
            self.source = self.ctx.config.source

    @property
    def n_constants(self) -> int:
        return self.ctx.model.n_constants

    @property
    def n_columns(self) -> int:
        return self.n_constants + 1

    def density(self, tau) -> np.ndarray:
        """
        在分支点 :math:`\\tau=\\pm k` （:math:`\\zeta=0`）处 :math:`F` 为 0/0 型可去奇点，
        改用两侧对称取值的 Richardson 外推。

        :raises DispersionZero: ``tau`` 为波导的特征值。
        """
        tau = np.atleast_1d(np.asarray(tau, dtype=complex))
        zeta = self.ctx.zeta(tau, check=False)
        branch = np.abs(zeta) < 1e-5 * (1 + abs(self.ctx.k))
        if not np.any(branch):
            return self._density(tau)
        out = np.empty((len(tau), 2, self.n_columns), dtype=complex)
        if np.any(~branch):
            out[~branch] = self._density(tau[~branch])
        for i in np.nonzero(branch)[0]:
            step = 1e-3 * (1 + abs(tau[i]))
            average = lambda h: self._density(tau[i] + np.array([h, -h])).mean(axis=0)
            out[i] = (4 * average(step / 2) - average(step)) / 3
        return out

    def _density(self, tau) -> np.ndarray:
        tau, zeta, ea = _spectral(tau, self.ctx)
        adj, det = _adjugate(zeta, ea, self.ctx)
        if np.any(np.abs(det) < 1e-13 * (1 + np.abs(zeta)) ** 2):
            raise DispersionZero(f"Delta vanishes near tau={tau[np.argmin(np.abs(det))]!r}.")
        fac = self.factorization
        g_plus, n2 = _forcing_columns(tau, zeta, ea, self.ctx, self.source)
        g_minus, _ = _forcing_columns(-tau, zeta, ea, self.ctx, self.source)
        weight = -2 * fac.sign * tau / (self.ctx.sigma * fac.lower_sq_product(tau))
        vec = (g_minus * fac.inv_hminus(tau)[:, None, None] - g_plus * fac.inv_hplus(tau)[:, None, None]
               + weight[:, None, None] * n2)
        return _apply(adj, vec) / det[:, None, None]

    def jump(self, tau) -> np.ndarray:
        r""":math:`f_j(\tau)`，形状 ``(T, 2, n_columns)``。"""
        tau = np.atleast_1d(np.asarray(tau, dtype=complex))
        return self.factorization.hplus(tau)[:, None, None] * self.density(tau)

    def components(self, tau) -> ComponentTable:
        return rhs_components(tau, self.ctx, self.source)


def _quad_half_line(func, options, points=None):
    res, err, info = integrate.quad_vec(func, 0, np.inf, epsabs=1e-13, epsrel=options.tol,
                                        limit=options.quad_limit, points=points or None,
                                        full_output=True)
    if not info.success:
        raise QuadratureNotConverged(f"Half-line quadrature failed ({info.message}); "
                                     f"error estimate {err:.3e}.")
    return res[0] + 1j * res[1]


def cauchy_psi(rhs: RHSide, eta, side: int = 1) -> np.ndarray:
    r"""
    Cauchy 积分

    .. math::

        \Psi_j(\eta)=\frac{1}{2\pi i}\int_{-\infty}^{\infty}\frac{F_j(\tau)d\tau}{\tau-\eta}
        =\frac{1}{\pi i}\int_0^\infty\frac{\tau F_j(\tau)d\tau}{\tau^2-\eta^2},

    第二个等号用到 :math:`F_j` 是奇函数。非实数 ``eta`` 直接求积（上半平面给出
    :math:`\Psi^+`，下半平面给出 :math:`\Psi^-`）；实数 ``eta`` 给出边界值

    .. math::

        \Psi^\pm(\eta)=\pm\tfrac12F(\eta)+\frac{1}{\pi i}\int_0^\infty
        \frac{\tau F(\tau)-|\eta|F(|\eta|)}{\tau^2-\eta^2}d\tau.

    :param side: 实数点取上侧 (+1) 或下侧 (-1) 的边界值。
    :return: 形状 ``(T, 2, n_columns)`` 的数组。
    :raises QuadratureNotConverged: 自适应求积未收敛。
    """
    eta = np.atleast_1d(np.asarray(eta, dtype=complex))
    options = rhs.ctx.config.solver
    out = np.zeros((len(eta), 2, rhs.n_columns), dtype=complex)
    real = np.abs(eta.imag) <= 1e-12 * (1 + np.abs(eta))
    if np.any(~real):
        targets = eta[~real]
        near = sorted({float(abs(t.real)) for t in targets if abs(t.imag) < 0.1 * (1 + abs(t))})

        def integrand(t):
            value = (t / (t * t - targets * targets))[:, None, None] * rhs.density(t)[0][None]
            return np.stack([value.real, value.imag])

        out[~real] = _quad_half_line(integrand, options, near) / (np.pi * 1j)
    for idx in np.nonzero(real)[0]:
        e = abs(eta[idx].real)
        if e < 1e-12:
            def integrand(t):
                value = rhs.density(t)[0] / t
                return np.stack([value.real, value.imag])
            out[idx] = _quad_half_line(integrand, options) / (np.pi * 1j)
            continue
        anchor = e * rhs.density(e)[0]

        def integrand(t, e=e, anchor=anchor):
            den = t * t - e * e
            den = den if abs(den) > 1e-14 * (1 + e * e) else 1e-14 * (1 + e * e)
            value = (t * rhs.density(t)[0] - anchor) / den
            return np.stack([value.real, value.imag])

        principal = _quad_half_line(integrand, options, [e]) / (np.pi * 1j)
        out[idx] = side * 0.5 * rhs.density(eta[idx].real)[0] + principal
    return out


def _real_root(factorization: KernelFactorization) -> float:
    root = factorization.classification.real_root
    if root is None:
        raise UnsupportedCase("Removability constants exist only in case (ii).")
    return float(root.real)


def removability_constant(rhs: RHSide, form: str = "point") -> np.ndarray:
    r"""
    情形 (ii) 中消去 :math:`H^+` 在 :math:`-\eta_0` 处实轴极点所需的常数
    :math:`b_j=-\Psi_j^+(-\eta_0)`，按列给出，形状 ``(2, n_columns)``。

    :param form: ``'point'`` 由折叠的边界值公式计算；``'integral'`` 对整条实轴
        直接计算主值积分 :math:`b_j=-\tfrac12F_j(-\eta_0)-\frac{1}{2\pi i}
        \mathrm{PV}\int F_j(\tau)d\tau/(\tau+\eta_0)`。
    """
    eta0 = _real_root(rhs.factorization)
    if form == "point":
        return -cauchy_psi(rhs, np.array([-eta0]), side=1)[0]
    if form != "integral":
        raise ValueError(f"Unknown removability form {form!r}.")
    options = rhs.ctx.config.solver
    cache = {}

    def dens(t):
        if t not in cache:
            cache[t] = rhs.density(t)[0]
        return cache[t]

    span = 4 * (1 + abs(eta0))
    total = np.zeros((2, rhs.n_columns), dtype=complex)
    for j in range(2):
        for m in range(rhs.n_columns):
            for unit, part in ((1, np.real), (1j, np.imag)):
                pick = lambda t: float(part(dens(t)[j, m]))
                pv = integrate.quad(pick, -span, span, weight="cauchy", wvar=-eta0, limit=options.quad_limit)[0]
                tail = sum(integrate.quad(lambda t: pick(t) / (t + eta0), lo, hi, limit=options.quad_limit)[0]
                           for lo, hi in ((span, np.inf), (-np.inf, -span)))
                total[j, m] += unit * (pv + tail)
    return -(0.5 * rhs.density(-eta0)[0] + total / (2j * np.pi))


@dataclass
class RHSolution:
    r"""
    :math:`\Phi_j^+(w)=H^+(w)[\Psi_j^+(w)+b_j]` 关于未知量的线性形式。

    未知量依次为壁面常数、情形 (iii) 中的 b₀、b₁，最后一个分量恒为 1（常数项）。
    情形 (ii) 中 :math:`b_j` 已按列代入。:meth:`bind` 代入解出的未知量后，
    ``*_value`` 方法直接给出函数值。

    :param psi: 计算 :math:`\Psi` 的函数，缺省为 :func:`cauchy_psi`。
    """

    rhs: RHSide
    b_form: np.ndarray
    psi: Optional[Callable] = field(default=None, repr=False)
    unknowns: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.psi is None:
            self.psi = lambda eta: cauchy_psi(self.rhs, eta, side=1)

    @property
    def case_label(self) -> CaseLabel:
        return self.rhs.factorization.case_label

    @property
    def n_free_b(self) -> int:
        return 2 if self.case_label is CaseLabel.III else 0

    @property
    def n_unknowns(self) -> int:
        return self.rhs.n_constants + self.n_free_b

    def expand(self, columns: np.ndarray) -> np.ndarray:
        """把按列存放的量（常数列 + 点源列）扩展到未知量的线性形式。"""
        n_c = self.rhs.n_constants
        out = np.zeros(columns.shape[:-1] + (self.n_unknowns + 1,), dtype=complex)
        out[..., :n_c] = columns[..., :n_c]
        out[..., -1] = columns[..., n_c]
        return out

    def psi_plus(self, w) -> np.ndarray:
        r""":math:`\Psi^+` 及其向下半平面的延拓 :math:`\Psi^-+F`，按列给出。"""
        w = np.atleast_1d(np.asarray(w, dtype=complex))
        values = self.psi(w)
        below = w.imag < -1e-12 * (1 + np.abs(w))
        if np.any(below):
            values[below] = values[below] + self.rhs.density(w[below])
        return values

    def phi_plus(self, w) -> np.ndarray:
        """
        :return: 形状 ``(T, 2, n_unknowns+1)`` 的线性形式。
        :raises PoleOnEvaluation: ``w`` 为 :math:`H^+` 的极点。
        """
        w = np.atleast_1d(np.asarray(w, dtype=complex))
        fac = self.rhs.factorization
        gaps = np.abs(w[:, None] + fac.upper[None, :])
        if np.any(gaps < 1e-10 * (1 + np.abs(w[:, None]))):
            raise PoleOnEvaluation(f"Phi+ evaluated at a pole of H+ ({w[np.argmin(gaps.min(axis=1))]!r}).")
        forms = self.expand(self.psi_plus(w)) + self.b_form[None]
        return fac.hplus(w)[:, None, None] * forms

    def phi_minus(self, w) -> np.ndarray:
        return self.phi_plus(-np.asarray(w, dtype=complex))

    def bind(self, unknowns) -> "RHSolution":
        """
        :param unknowns: 长度为 ``n_unknowns`` 的未知量，或已附加常数项 1 的向量。
        """
        unknowns = np.asarray(unknowns, dtype=complex)
        if len(unknowns) == self.n_unknowns:
            unknowns = np.append(unknowns, 1.0)
        return replace(self, unknowns=unknowns)

    def _require_bound(self):
        if self.unknowns is None:
            raise RuntimeError("RHSolution has no constants; call `bind` first.")

    def phi_plus_value(self, w) -> np.ndarray:
        self._require_bound()
        return self.phi_plus(w) @ self.unknowns

    def phi_minus_value(self, w) -> np.ndarray:
        self._require_bound()
        return self.phi_minus(w) @ self.unknowns

    def jump_value(self, tau) -> np.ndarray:
        r""":math:`f_j(\tau)` 在代入常数后的值，形状 ``(T, 2)``。"""
        self._require_bound()
        return self.expand(self.rhs.jump(tau)) @ self.unknowns

    def b_value(self) -> np.ndarray:
        self._require_bound()
        return self.b_form @ self.unknowns


def solve_phi(rhs: RHSide, psi: Optional[Callable] = None, verify_removability: bool = True) -> RHSolution:
    r"""
    构造 Riemann-Hilbert 问题的解 :math:`\Phi_j^\pm=H^\pm(\Psi_j^\pm+b_j)`。

    * 情形 (i)：:math:`b_j=0`；
    * 情形 (ii)：:math:`b_j=-\Psi_j^+(-\eta_0)`，使 :math:`H^+` 在实轴上的极点可去；
    * 情形 (iii)：:math:`b_j` 为自由常数，作为额外的未知量。

    :param psi: 计算 :math:`\Psi` 的函数，缺省为 :func:`cauchy_psi`。
    :param verify_removability: 情形 (ii) 中是否用整条实轴上的主值积分复核 :math:`b_j`。
    :raises RemovabilityFailure: 两种方式得到的 :math:`b_j` 不一致。
    """
    label = rhs.factorization.case_label
    solution = RHSolution(rhs, np.zeros((2, 1)), psi)
    b_form = np.zeros((2, solution.n_unknowns + 1), dtype=complex)
    if label is CaseLabel.II:
        point = removability_constant(rhs, "point")
        if verify_removability:
            integral = removability_constant(rhs, "integral")
            scale = max(1.0, float(np.max(np.abs(point))))
            gap = float(np.max(np.abs(point - integral)))
            if gap > max(1e-7, 10 * rhs.ctx.config.solver.tol) * scale:
                raise RemovabilityFailure(f"Removability constants disagree by {gap:.3e} "
                                          f"(point form vs principal-value integral).")
        b_form = solution.expand(point)
    elif label is CaseLabel.III:
        n_c = rhs.n_constants
        b_form[0, n_c] = 1
        b_form[1, n_c + 1] = 1
    solution.b_form = b_form
    logger.debug(f"Solved RH problem in case {label.value} with {solution.n_unknowns} unknowns.")
    return solution
