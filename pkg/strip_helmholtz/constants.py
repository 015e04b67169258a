r"""
边缘常数的确定。

:math:`\Phi_j^\pm` 关于未知常数是线性的（见 :class:`~strip_helmholtz.rh.RHSolution`），
本模块把各类条件写成关于未知量的线性方程并求解：

* 水平壁在 :math:`\eta=\alpha_j` 处的解析性条件（壁面方程）；
* 竖直壁角点处的边缘条件，取 :math:`H^+` 极点可去的形式或留数求和形式；
* 情形 (iii) 中角点处的相容性条件；
* 板模型对应的 8（或 10）个方程。

另外提供 :math:`\Psi` 的两种计算方式（自适应求积与留数级数）以及留数形式中
出现的系数表 :class:`CoefficientBundle`。
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy import linalg

from strip_helmholtz.config import WallModel, WaveguideConfig
from strip_helmholtz.errors import (BranchSelectionFailure, SeriesTruncationTooShort, SingularSystem,
                                    UnsupportedCase)
from strip_helmholtz.kernel import KernelContext, _right_half, dispersion_even_derivative
from strip_helmholtz.log import logger
from strip_helmholtz.rh import (RHSide, RHSolution, _forcing_columns, _quad_half_line, cauchy_psi, factorize,
                                solve_phi)
from strip_helmholtz.spectra import (CaseLabel, DispersionZeros, RootClassification, classify,
                                     dispersion_zero_search, extend_dispersion_zeros, winding_index)

__all__ = [
    "PsiTable",
    "LinearRows",
    "CoefficientBundle",
    "ConstantsSolution",
    "psi_quadrature",
    "psi_series",
    "coefficient_bundle",
    "vertical_transform_form",
    "CosineModes",
    "cosine_modes",
    "cosine_trace_form",
    "jump_integral",
    "horizontal_edge_form",
    "assemble_wall_equations",
    "regularity_poles",
    "transform_edge_form",
    "assemble_edge_equations",
    "assemble_compatibility_equations",
    "assemble_plate_system",
    "assemble_system",
    "solve_constants",
    "prepare_solution",
    "solve_waveguide",
]


@dataclass
class PsiTable:
    r"""
    :math:`\psi_j^m(\eta)` 在一组点上的取值。

    ``values`` 的形状为 ``(P, 2, n_columns)``，下标依次为点、壁面 j 与列 m。
    留数级数只对常数列有定义，点源列填 ``nan``。

    :param method: ``'quadrature'`` 或 ``'series'``。
    :param terms: 留数级数实际使用的 :math:`\tau_s` 个数。
    :param tail: 级数尾项的估计值。
    """

    eta: np.ndarray
    values: np.ndarray
    method: str
    terms: Optional[int] = None
    tail: Optional[float] = None

    def __call__(self, j: int, m: int) -> np.ndarray:
        return self.values[:, j, m]

    def __len__(self):
        return len(self.eta)


def psi_quadrature(rhs: RHSide, eta, side: int = 1) -> PsiTable:
    """
    用自适应求积计算 :math:`\\psi_j^m`，见 :func:`~strip_helmholtz.rh.cauchy_psi`。
    """
    eta = np.atleast_1d(np.asarray(eta, dtype=complex))
    return PsiTable(eta, cauchy_psi(rhs, eta, side=side), "quadrature")


def _tail_estimate(mags: np.ndarray) -> float:
    n = len(mags)
    window = max(4, n // 4)
    idx = np.arange(n - window + 1, n + 1, dtype=float)
    tail = mags[-window:]
    keep = tail > 0
    if keep.sum() < 2:
        return 0.0
    slope, intercept = np.polyfit(np.log(idx[keep]), np.log(tail[keep]), 1)
    power = -slope
    if power <= 1.05:
        return np.inf
    return float(np.exp(intercept) * n ** (1 - power) / (power - 1))


def _truncate(mags: np.ndarray, scale: float, tol: float, min_terms: int = 8):
    tail = np.inf
    for count in range(min(min_terms, len(mags)), len(mags) + 1, 2):
        tail = _tail_estimate(mags[:count])
        if tail < tol * scale:
            return count, tail
    raise SeriesTruncationTooShort(f"Residue series tail still {tail:.3e} after {len(mags)} terms "
                                   f"(tolerance {tol * scale:.3e}).")


def psi_series(rhs: RHSide, eta, zeros: Optional[DispersionZeros] = None,
               cap: Optional[int] = None, tol: Optional[float] = None) -> PsiTable:
    r"""
    用留数级数计算常数列的 :math:`\psi_j^m`。把积分路径向下半平面闭合，

    .. math::

        \psi_j^m(\eta)=\sum_{z\in L}\frac{N_j^m(z)}{(-1)^n\,2z\prod_{z'\ne z}(z^2-z'^2)
        \Delta(z)(z-\eta)}+\sum_s\frac{N_j^m(-\tau_s)}{(-1)^n\prod_L(\tau_s^2-z^2)
        \Delta'(-\tau_s)(-\tau_s-\eta)},

    其中 :math:`\tau_s` 为 :math:`\Delta(\tau)/\zeta` 在上半平面中的零点。点源列含
    :math:`e^{i\tau x^\circ}`，在下半平面增长，不能这样闭合。

    项数按幂律尾项估计自适应选取。下半平面中的点按 :math:`\psi` 的偶性换到上半平面。

    :param zeros: 已知的零点，缺省时重新搜索并按渐近公式补足到 ``cap`` 个。
    :raises SeriesTruncationTooShort: 用满 ``cap`` 项后尾项估计仍超过容差。
    """
    ctx = rhs.ctx
    options = ctx.config.solver
    cap = options.series_cap if cap is None else cap
    tol = options.series_tol if tol is None else tol
    eta = np.atleast_1d(np.asarray(eta, dtype=complex))
    target = np.where(eta.imag < 0, -eta, eta)
    if zeros is None:
        zeros = dispersion_zero_search(ctx)
    if len(zeros) < cap:
        zeros = extend_dispersion_zeros(ctx, zeros, cap)

    fac = rhs.factorization
    s, n_c = fac.sign, rhs.n_constants
    values = np.full((len(eta), 2, rhs.n_columns), np.nan, dtype=complex)
    values[..., :n_c] = 0
    lower = fac.lower
    at_lower = rhs.components(lower)
    for i, z in enumerate(lower):
        others = np.prod(z * z - np.delete(lower, i) ** 2)
        coef = at_lower.numerator[i, :, :n_c] / (s * 2 * z * others * at_lower.delta[i])
        values[..., :n_c] += coef[None] / (z - target)[:, None, None]

    tau = zeros.tau[:cap]
    at_zeros = rhs.components(-tau)
    zeta = _right_half(ctx.zeta(-tau, check=False))
    slope = zeta * dispersion_even_derivative(-tau, ctx) * np.exp(-ctx.a * zeta)
    coef = at_zeros.numerator[:, :, :n_c] / (s * fac.lower_sq_product(tau) * slope)[:, None, None]
    terms = coef[None] / (-tau[None, :] - target[:, None])[..., None, None]

    mags = np.max(np.abs(terms), axis=(0, 2, 3))
    scale = 1 + float(np.max(np.abs(values[..., :n_c] + terms.sum(axis=1))))
    count, tail = _truncate(mags, scale, tol)
    values[..., :n_c] += terms[:, :count].sum(axis=1)
    logger.debug(f"Residue series for psi used {count} zeros, tail estimate {tail:.2e}.")
    return PsiTable(eta, values, "series", terms=count, tail=tail)


@dataclass
class LinearRows:
    """
    关于未知量的线性方程组 ``matrix @ x = rhs``。

    :param labels: 每个方程的来源，用于诊断与事后检查。
    """

    matrix: np.ndarray
    rhs: np.ndarray
    labels: List[str] = field(default_factory=list)

    @classmethod
    def from_forms(cls, forms, labels: List[str]) -> "LinearRows":
        """由线性形式（最后一个分量为常数项）构造方程 ``form @ (x, 1) = 0``。"""
        forms = np.atleast_2d(np.asarray(forms, dtype=complex))
        return cls(forms[:, :-1].copy(), -forms[:, -1].copy(), list(labels))

    def __add__(self, other: "LinearRows") -> "LinearRows":
        return LinearRows(np.vstack([self.matrix, other.matrix]), np.concatenate([self.rhs, other.rhs]),
                          self.labels + other.labels)

    def __len__(self):
        return len(self.rhs)

    def residual(self, unknowns) -> np.ndarray:
        return self.matrix @ np.asarray(unknowns)[: self.matrix.shape[1]] - self.rhs

    def select(self, prefix: str) -> "LinearRows":
        keep = [i for i, label in enumerate(self.labels) if label.startswith(prefix)]
        return LinearRows(self.matrix[keep], self.rhs[keep], [self.labels[i] for i in keep])


def _vertical_raw(solution: RHSolution, zeta: np.ndarray, branch: int = 1) -> np.ndarray:
    ctx = solution.rhs.ctx
    eta = np.sqrt(zeta * zeta + ctx.k * ctx.k)
    eta = np.where(branch * eta.imag < 0, -eta, eta)
    ea = np.exp(-ctx.a * zeta)
    m0, m1 = ctx.mu_tilde_from_zeta(zeta)
    diff = solution.phi_minus(eta) - solution.phi_plus(eta)
    g_plus, _ = _forcing_columns(eta, zeta, ea, ctx, solution.rhs.source)
    g_minus, _ = _forcing_columns(-eta, zeta, ea, ctx, solution.rhs.source)
    forcing = solution.expand(g_minus[:, 0] - g_plus[:, 0])
    numerator = ((ea * (zeta - m1))[:, None] * diff[:, 1] - (zeta + m0)[:, None] * diff[:, 0] + forcing)
    return numerator / (2j * eta)[:, None]


def vertical_transform_form(solution: RHSolution, zeta, branch: int = 1) -> np.ndarray:
    r"""
    竖直壁上的 Laplace 变换 :math:`A(\zeta)=\hat u(0,i\zeta)=\int_0^a u(0,y)e^{-\zeta y}dy`
    关于未知量的线性形式：

    .. math::

        2i\eta A=e^{-a\zeta}(\zeta-\tilde\mu_1)(\Phi_1^--\Phi_1^+)
        -(\zeta+\tilde\mu_0)(\Phi_0^--\Phi_0^+)+G_1(-\eta)-G_1(\eta),

    :math:`\eta=\sqrt{\zeta^2+k^2}`。右端关于 :math:`\eta` 为奇函数，因而 :math:`A` 与
    平方根的分支无关。:math:`\eta=0` 处为可去奇点，用两侧对称取值的 Richardson 外推。

    :param branch: 取 :math:`\mathrm{Im}\,\eta\ge0` (1) 或 :math:`\le0` (-1) 的一支。

    :return: 形状 ``(Z, n_unknowns+1)``。
    """
    ctx = solution.rhs.ctx
    zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
    eta = np.sqrt(zeta * zeta + ctx.k * ctx.k)
    small = np.abs(eta) < 1e-6 * (1 + abs(ctx.k))
    out = np.zeros((len(zeta), solution.n_unknowns + 1), dtype=complex)
    if np.any(~small):
        out[~small] = _vertical_raw(solution, zeta[~small], branch)
    for i in np.nonzero(small)[0]:
        step = 1e-3 * (1 + abs(zeta[i]))
        average = lambda h: _vertical_raw(solution, zeta[i] + np.array([h, -h]), branch).mean(axis=0)
        out[i] = (4 * average(step / 2) - average(step)) / 3
    return out


@dataclass
class CosineModes:
    r"""
    竖直壁上 :math:`u(0,y)` 与 :math:`u_x(0,y)` 的余弦展开系数（关于未知量的线性形式）：

    .. math::

        u(0,y)=\sum_nw_nC_n\cos\lambda_ny,\quad u_x(0,y)=\sum_nw_nD_n\cos\lambda_ny,

    :math:`\lambda_n=n\pi/a`，:math:`w_0=1/a`，:math:`w_n=2/a`，
    :math:`C_n=\tfrac12[A(i\lambda_n)+A(-i\lambda_n)]`，:math:`D_n` 由
    :math:`\hat u_x(0,i\zeta)=[\mu_2A(\zeta)-\hat g^2w_2]/w_2(\zeta)` 以同样方式得到。
    """

    lam: np.ndarray
    weights: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __len__(self):
        return len(self.lam)

    def basis(self, y) -> np.ndarray:
        y = np.atleast_1d(np.asarray(y, dtype=float))
        return self.weights[None, :] * np.cos(self.lam[None, :] * y[:, None])


def cosine_modes(solution: RHSolution, modes: Optional[int] = None) -> CosineModes:
    ctx = solution.rhs.ctx
    modes = ctx.config.solver.cosine_modes if modes is None else modes
    lam = np.arange(modes) * np.pi / ctx.a
    zeta = np.concatenate([1j * lam, -1j * lam])
    forms = vertical_transform_form(solution, zeta)
    eta = np.sqrt(zeta * zeta + ctx.k * ctx.k)
    _, n2 = _forcing_columns(eta, zeta, np.exp(-ctx.a * zeta), ctx, solution.rhs.source)
    derivative = (ctx.mu[2] * forms - solution.expand(n2[:, 0])) / ctx.vertical_weight(zeta)[:, None]
    weights = np.full(modes, 2 / ctx.a)
    weights[0] = 1 / ctx.a
    return CosineModes(lam, weights, 0.5 * (forms[:modes] + forms[modes:]),
                       0.5 * (derivative[:modes] + derivative[modes:]))


def cosine_trace_form(solution: RHSolution, y, modes: Optional[int] = None) -> np.ndarray:
    r"""
    竖直壁迹线 :math:`u(0,y)` 的余弦级数，见 :class:`CosineModes`。给定
    :math:`u_y(0,y_j)=0`，截断误差为 :math:`O(N^{-3})`。

    :return: 形状 ``(Y, n_unknowns+1)``。
    """
    table = cosine_modes(solution, modes)
    return table.basis(y) @ table.C


def jump_integral(solution: RHSolution) -> np.ndarray:
    r"""
    :math:`\frac{1}{2\pi}\int_{-\infty}^{\infty}f_j(\tau)d\tau`，按列给出，形状 ``(2, n_columns)``。
    """
    rhs = solution.rhs

    def integrand(t):
        value = rhs.jump(np.array([t, -t])).sum(axis=0)
        return np.stack([value.real, value.imag])

    return _quad_half_line(integrand, rhs.ctx.config.solver) / (2 * np.pi)


def horizontal_edge_form(solution: RHSolution) -> np.ndarray:
    r"""
    水平壁迹线在角点处的极限 :math:`u(0^+,y_j)`：

    .. math::

        u(0^+,y_j)=\frac{1}{2\pi}\int f_j\,d\tau-i\sum_k r_k[\Psi_j^-(p_k)+b_j],

    其中 :math:`p_k` 为 :math:`H^+` 的极点，:math:`r_k` 为其留数。要求极点不在实轴上。

    :return: 形状 ``(2, n_unknowns+1)``。
    """
    fac = solution.rhs.factorization
    if fac.case_label is CaseLabel.II:
        raise UnsupportedCase("The corner limit of the horizontal trace in case (ii) needs the "
                              "principal-value form; use the field module.")
    poles, residues = fac.lower_poles()
    forms = solution.expand(jump_integral(solution))
    psi = solution.expand(solution.psi(poles))
    forms = forms - 1j * np.einsum("k,kjn->jn", residues, psi + solution.b_form[None])
    return forms


def _xi(eta, k: complex) -> np.ndarray:
    r""":math:`\xi=i\sqrt{\eta^2-k^2}`，取上半平面中的一支。"""
    xi = 1j * np.sqrt(np.asarray(eta, dtype=complex) ** 2 - k * k)
    xi = np.where(xi.imag < 0, -xi, xi)
    if np.any(np.abs(xi.imag) <= 1e-12 * (1 + np.abs(xi))):
        raise BranchSelectionFailure(f"xi={xi!r} has no branch in the upper half-plane.")
    return xi


@dataclass
class CoefficientBundle:
    r"""
    膜模型竖直壁留数形式中的系数。下标 m 取遍 U 中的根 :math:`\eta_m`
    （情形 (i) 只有 :math:`\eta_1`，情形 (ii)、(iii) 为 :math:`\eta_0,\eta_1`）。

    .. math::

        \xi_m=i\sqrt{\eta_m^2-k^2}\in\mathbb C^+,\quad
        t_m=\frac{\xi_m(\alpha_2^2-k^2+3\eta_m^2)}{\eta_m},\quad
        \rho_{jm}=\frac{\mu_j+i\xi_m(\alpha_j^2-\eta_m^2)}{\eta_m^2-\alpha_j^2},

    :math:`\hat\xi_0=-i\sqrt{\alpha_0^2-k^2}\in\mathbb C^-`，
    :math:`\hat\xi_1=i\sqrt{\alpha_1^2-k^2}\in\mathbb C^+`，
    :math:`r_j=-i\alpha_j(\alpha_2^2-\hat\xi_j^2)+\mu_2`。

    ``edge_matrix``/``edge_rhs`` 为边缘条件 :math:`\sum_nD_{jn}c_n=E_j`；情形 (iii)
    另外给出相容性条件

    .. math::

        \beta_{j0}b_0+\beta_{j1}b_1+\beta b_j+\sum_n(\sigma_{jn}+\lambda_{jn})c_n=\nu_j

    的各个系数以及 :math:`M_j^n(0)`。
    """

    solution: RHSolution = field(repr=False)
    eta: np.ndarray
    xi: np.ndarray
    t: np.ndarray
    rho: np.ndarray
    xi_hat: np.ndarray
    r: np.ndarray
    phi: np.ndarray = field(repr=False)
    edge_matrix: Optional[np.ndarray] = None
    edge_rhs: Optional[np.ndarray] = None
    M0: Optional[np.ndarray] = None
    beta: Optional[complex] = None
    beta_wall: Optional[np.ndarray] = None
    lam: Optional[np.ndarray] = None
    sig: Optional[np.ndarray] = None
    nu: Optional[np.ndarray] = None

    @property
    def trace_weight(self) -> np.ndarray:
        r""":math:`(\alpha_2^2-\xi_m^2)/t_m`。"""
        ctx = self.solution.rhs.ctx
        return (ctx.alpha_power[2] - self.xi ** 2) / self.t

    def bracket(self, y, split: bool = False):
        r"""
        每个 :math:`\eta_m` 对应的方括号，关于未知量的线性形式，形状 ``(Y, M, n_unknowns+1)``：

        .. math::

            \Big(\rho_{0m}\Phi_0^+-\frac{c_0}{\alpha_0^2-\eta_m^2}-\frac{c_2}{\alpha_2^2-\xi_m^2}\Big)
            e^{i\xi_my}+\Big(\rho_{1m}\Phi_1^++\frac{c_1}{\alpha_1^2-\eta_m^2}
            +\frac{c_3}{\alpha_2^2-\xi_m^2}\Big)e^{i\xi_m(a-y)}
            +e^{i\xi_m|y-y^\circ|+i\eta_mx^\circ}.

        :param split: 为真时分别返回含 :math:`\Phi` 的部分与其余部分。
        """
        ctx = self.solution.rhs.ctx
        source = self.solution.rhs.source
        y = np.atleast_1d(np.asarray(y, dtype=float))
        up = np.exp(1j * self.xi[None, :] * y[:, None])
        down = np.exp(1j * self.xi[None, :] * (ctx.a - y[:, None]))
        phi_part = (up[..., None] * (self.rho[0][:, None] * self.phi[:, 0])[None]
                    + down[..., None] * (self.rho[1][:, None] * self.phi[:, 1])[None])
        explicit = np.zeros_like(phi_part)
        eta2, wall2 = self.eta ** 2, ctx.alpha_power[2] - self.xi ** 2
        explicit[..., 0] = -up / (ctx.alpha_power[0] - eta2)
        explicit[..., 2] = -up / wall2
        explicit[..., 1] = down / (ctx.alpha_power[1] - eta2)
        explicit[..., 3] = down / wall2
        explicit[..., -1] = np.exp(1j * self.xi[None, :] * np.abs(y[:, None] - source.y)
                                   + 1j * self.eta[None, :] * source.x)
        if split:
            return phi_part, explicit
        return phi_part + explicit

    def edge_forms(self) -> np.ndarray:
        r"""边缘条件 :math:`\sum_m t_m^{-1}[\dots]_{y=y_j}=0`，形状 ``(2, n_unknowns+1)``。"""
        a = self.solution.rhs.ctx.a
        return (self.bracket([0.0, a]) / self.t[None, :, None]).sum(axis=1)

    def trace_forms(self, y, split: bool = False):
        r"""竖直壁迹线 :math:`u(0,y)=\sum_m(\alpha_2^2-\xi_m^2)t_m^{-1}[\dots]`。"""
        weight = self.trace_weight[None, :, None]
        if split:
            return tuple((part * weight).sum(axis=1) for part in self.bracket(y, split=True))
        return (self.bracket(y) * weight).sum(axis=1)

    def compatibility_forms(self) -> np.ndarray:
        """情形 (iii) 相容性条件 :math:`u(0^+,y_j)-u(0,y_j)=0`，形状 ``(2, n_unknowns+1)``。"""
        if self.beta is None:
            raise UnsupportedCase("Compatibility coefficients exist only in case (iii).")
        sol = self.solution
        n_c = sol.rhs.n_constants
        forms = np.zeros((2, sol.n_unknowns + 1), dtype=complex)
        forms[:, :n_c] = self.sig + self.lam
        forms[:, n_c:n_c + 2] = self.beta_wall + self.beta * np.eye(2)
        forms[:, -1] = -self.nu
        return forms


def coefficient_bundle(solution: RHSolution, compatibility: Optional[bool] = None) -> CoefficientBundle:
    """
    计算膜模型留数形式的系数。

    :param compatibility: 是否计算相容性条件的系数，缺省时仅在情形 (iii) 计算。
    :raises UnsupportedCase: 板模型，或在非情形 (iii) 中要求相容性系数。
    :raises BranchSelectionFailure: :math:`\\xi_m` 无法取在上半平面。
    """
    ctx = solution.rhs.ctx
    if ctx.model is not WallModel.MEMBRANE:
        raise UnsupportedCase("The residue form of the vertical-wall conditions is written for membranes.")
    fac = solution.rhs.factorization
    eta = fac.upper.copy()
    k2, alpha2 = ctx.k * ctx.k, ctx.alpha_power
    xi = _xi(eta, ctx.k)
    t = xi * (alpha2[2] - k2 + 3 * eta ** 2) / eta
    rho = np.array([(ctx.mu[j] + 1j * xi * (alpha2[j] - eta ** 2)) / (eta ** 2 - alpha2[j]) for j in (0, 1)])
    hat0, hat1 = 1j * np.sqrt(alpha2[0] - k2), 1j * np.sqrt(alpha2[1] - k2)
    xi_hat = np.array([hat0 if hat0.imag < 0 else -hat0, hat1 if hat1.imag > 0 else -hat1])
    r = -1j * ctx.alpha[:2] * (alpha2[2] - xi_hat ** 2) + ctx.mu[2]
    bundle = CoefficientBundle(solution, eta, xi, t, rho, xi_hat, r, solution.phi_plus(eta))

    edge = bundle.edge_forms()
    bundle.edge_matrix, bundle.edge_rhs = edge[:, :-1], -edge[:, -1]

    if compatibility is None:
        compatibility = fac.case_label is CaseLabel.III
    if not compatibility:
        return bundle
    if fac.case_label is not CaseLabel.III:
        raise UnsupportedCase("Compatibility coefficients exist only in case (iii).")
    n_c = solution.rhs.n_constants
    poles, residues = fac.lower_poles()
    bundle.M0 = jump_integral(solution)
    horizontal = solution.expand(bundle.M0) - 1j * np.einsum(
        "k,kjn->jn", residues, solution.expand(solution.psi(poles)))
    phi_part, explicit = bundle.trace_forms([0.0, ctx.a], split=True)
    bundle.beta = complex(-1j * residues.sum())
    bundle.beta_wall = -phi_part[:, n_c:n_c + 2]
    bundle.lam = -explicit[:, :n_c]
    bundle.sig = horizontal[:, :n_c] - phi_part[:, :n_c]
    bundle.nu = -(horizontal[:, -1] - phi_part[:, -1] - explicit[:, -1])
    return bundle


def assemble_wall_equations(solution: RHSolution) -> LinearRows:
    r"""
    水平壁条件 :math:`u_y(0^+,y_j)=0` 等价于 :math:`\Phi_j^+` 在 :math:`d_j(\eta)` 的上半平面
    零点处解析：

    * 膜：:math:`(-1)^jc_j+\mu_j\Phi_j^+(\alpha_j)=0`；
    * 板：:math:`\mu_0\Phi_0^+(r)-c_{00}+irc_{01}=0`，
      :math:`\mu_1\Phi_1^+(r)+c_{10}-irc_{11}=0`，:math:`r\in\{\alpha_j,i\alpha_j\}`。
    """
    ctx = solution.rhs.ctx
    forms, labels = [], []
    if ctx.model is WallModel.MEMBRANE:
        for j in (0, 1):
            form = ctx.mu[j] * solution.phi_plus(ctx.alpha[j])[0, j]
            form[j] += (-1) ** j
            forms.append(form)
            labels.append(f"wall{j}")
        return LinearRows.from_forms(forms, labels)
    for j in (0, 1):
        sign = -1 if j == 0 else 1
        points = np.array([ctx.alpha[j], 1j * ctx.alpha[j]])
        values = solution.phi_plus(points)[:, j]
        for r, form in zip(points, values):
            form = ctx.mu[j] * form
            form[2 * j] += sign
            form[2 * j + 1] -= sign * 1j * r
            forms.append(form)
            labels.append(f"wall{j}")
    return LinearRows.from_forms(forms, labels)


def regularity_poles(solution: RHSolution) -> np.ndarray:
    r"""
    :math:`H^+` 在下半平面中需要消去的极点 :math:`-\eta_m`，:math:`\eta_m` 取遍 U 中除
    z₀ 以外的根。z₀ 对应的极点在情形 (ii) 中由 :math:`b_j` 消去，情形 (iii) 中由相容性条件处理。
    """
    fac = solution.rhs.factorization
    z0 = fac.classification.roots[0]
    return np.array([-u for u in fac.upper if abs(u - z0) > 1e-12 * (1 + abs(z0))], dtype=complex)


def transform_edge_form(solution: RHSolution) -> np.ndarray:
    r"""
    变换 :math:`\tilde u(\eta,y_j)=\Phi_j^+(\eta)` 向下半平面延拓后只以
    :math:`-\tau_s` 为极点，因此 :math:`H^+` 的极点 :math:`p=-\eta_m` 必须可去：

    .. math::

        \Psi_j^+(p)+b_j=0,

    其中 :math:`\Psi_j^+(p)=\Psi_j(p)+F_j(p)` 为跨过实轴的延拓。

    :return: 形状 ``(2P, n_unknowns+1)``，按极点、壁面 j 的顺序排列。
    """
    poles = regularity_poles(solution)
    forms = solution.expand(solution.psi_plus(poles)) + solution.b_form[None]
    return forms.reshape(-1, forms.shape[-1])


def assemble_edge_equations(solution: RHSolution, form: Optional[str] = None) -> LinearRows:
    r"""
    竖直壁角点条件 :math:`u_x(0,y_j)=0` （板另有 :math:`u_{xy}` 条件）。

    ``form='transform'`` 时写成 :func:`transform_edge_form` 的极点可去条件，膜给出 2 个方程，
    板给出 4 个。竖直壁的阻抗关系已经用于消去 :math:`B(\zeta)`，:math:`w_2(\zeta)` 零点处
    :math:`\mu_2A(\zeta)+c_2-c_3e^{-a\zeta}` 对任意常数恒为零，不能作为方程。

    ``form='residue'`` 时使用 :class:`CoefficientBundle` 的留数求和形式（仅膜）。
    """
    ctx = solution.rhs.ctx
    form = ctx.config.solver.edge_form if form is None else form
    if form == "residue":
        if ctx.model is not WallModel.MEMBRANE:
            raise UnsupportedCase("The residue form of the edge conditions is written for membranes.")
        return LinearRows.from_forms(coefficient_bundle(solution, False).edge_forms(),
                                     ["edge0", "edge1"])
    labels = [f"edge{j}@{p:.4g}" for p in regularity_poles(solution) for j in (0, 1)]
    return LinearRows.from_forms(transform_edge_form(solution), labels)


def assemble_compatibility_equations(solution: RHSolution) -> LinearRows:
    r"""
    情形 (iii) 的相容性条件 :math:`u(0^+,y_j)=u(0,y_j)`，保证 :math:`u` 在角点处连续。
    膜使用留数形式的竖直壁迹线，板使用余弦级数。

    :raises UnsupportedCase: 不是情形 (iii)。
    """
    if solution.case_label is not CaseLabel.III:
        raise UnsupportedCase("Compatibility conditions are imposed only in case (iii).")
    ctx = solution.rhs.ctx
    if ctx.model is WallModel.MEMBRANE:
        forms = coefficient_bundle(solution, True).compatibility_forms()
    else:
        forms = horizontal_edge_form(solution) - cosine_trace_form(solution, [0.0, ctx.a])
    return LinearRows.from_forms(forms, ["corner0", "corner1"])


def _frozen_b(solution: RHSolution) -> LinearRows:
    n_c = solution.rhs.n_constants
    forms = np.zeros((2, solution.n_unknowns + 1), dtype=complex)
    forms[0, n_c], forms[1, n_c + 1] = 1, 1
    return LinearRows.from_forms(forms, ["b0=0", "b1=0"])


def assemble_plate_system(solution: RHSolution, compatibility: bool = True) -> LinearRows:
    """
    板模型的方程组：4 个水平壁方程、4 个竖直壁方程，情形 (iii) 另加 2 个相容性方程。
    """
    if solution.rhs.ctx.model is not WallModel.PLATE:
        raise UnsupportedCase("assemble_plate_system expects the plate model.")
    rows = assemble_wall_equations(solution) + assemble_edge_equations(solution, "transform")
    if solution.case_label is CaseLabel.III:
        rows = rows + (assemble_compatibility_equations(solution) if compatibility else _frozen_b(solution))
    return rows


def assemble_system(solution: RHSolution, edge_form: Optional[str] = None,
                    compatibility: bool = True) -> LinearRows:
    """
    组装确定全部未知量的方程组。

    :param compatibility: 情形 (iii) 中为假时以 ``b_j=0`` 代替相容性条件，用于对照。
    """
    if solution.rhs.ctx.model is WallModel.PLATE:
        return assemble_plate_system(solution, compatibility)
    rows = assemble_wall_equations(solution) + assemble_edge_equations(solution, edge_form)
    if solution.case_label is CaseLabel.III:
        rows = rows + (assemble_compatibility_equations(solution) if compatibility else _frozen_b(solution))
    return rows


def _pairs(values) -> list:
    return [[float(v.real), float(v.imag)] for v in np.ravel(values)]


@dataclass
class ConstantsSolution:
    """
    解出的边缘常数。

    :param c: 膜为 c₀..c₃，板为 c₀₀, c₀₁, c₁₀, c₁₁, c₂₀, c₂₁, c₃₀, c₃₁。
    :param b: :math:`b_0, b_1`；情形 (i) 为零，情形 (ii) 由可去性条件确定。
    :param condition: 行归一化后的系数矩阵条件数。
    :param residual: 行归一化后的相对残差。
    :param wall_residual: 水平壁条件的事后残差。
    :param solution: 代入常数后的 :class:`~strip_helmholtz.rh.RHSolution`。
    """

    c: np.ndarray
    b: np.ndarray
    case_label: CaseLabel
    condition: float
    residual: float
    wall_residual: float
    rows: LinearRows = field(repr=False)
    solution: RHSolution = field(repr=False)

    @property
    def unknowns(self) -> np.ndarray:
        return self.solution.unknowns

    def to_dict(self) -> dict:
        return {
            "case": self.case_label.value,
            "c": _pairs(self.c),
            "b": _pairs(self.b),
            "condition": self.condition,
            "residual": self.residual,
            "wall_residual": self.wall_residual,
            "equations": self.rows.labels,
        }


def solve_constants(rows: LinearRows, solution: RHSolution) -> ConstantsSolution:
    """
    求解组装好的方程组。每行先按其最大元素归一化，因此整体缩放各行不改变结果。

    :raises SingularSystem: 条件数超过 ``1e12``，或归一化后的相对残差超过 ``1e-9``。
    """
    matrix, rhs = rows.matrix, rows.rhs
    if matrix.shape[0] != matrix.shape[1] or matrix.shape[1] != solution.n_unknowns:
        raise UnsupportedCase(f"Expected a square system in {solution.n_unknowns} unknowns, "
                              f"got {matrix.shape}.")
    scale = np.max(np.abs(matrix), axis=1)
    scale[scale == 0] = 1
    matrix, rhs = matrix / scale[:, None], rhs / scale
    condition = float(np.linalg.cond(matrix))
    if not np.isfinite(condition) or condition > 1e12:
        raise SingularSystem(f"Edge-constant system is singular (condition {condition:.3e}).")
    x = linalg.solve(matrix, rhs)
    residual = float(np.linalg.norm(matrix @ x - rhs) / max(np.linalg.norm(rhs), np.finfo(float).tiny))
    if not np.isfinite(residual) or residual > 1e-9:
        raise SingularSystem(f"Edge-constant system residual {residual:.3e} exceeds 1e-9 "
                             f"(condition {condition:.3e}).")

    bound = solution.bind(x)
    n_c = solution.rhs.n_constants
    walls = rows.select("wall")
    wall_scale = max(1.0, float(np.max(np.abs(x[:n_c]))))
    wall_residual = float(np.max(np.abs(walls.residual(x)))) / wall_scale
    if wall_residual > 1e-7:
        logger.warning(f"Horizontal-wall relation violated a posteriori by {wall_residual:.3e}.")
    result = ConstantsSolution(x[:n_c].copy(), bound.b_value(), solution.case_label, condition, residual,
                               wall_residual, rows, bound)
    logger.info(f"Solved {len(rows)} edge-constant equations in case {solution.case_label.value}: "
                f"cond={condition:.2e}, residual={residual:.2e}")
    return result


def prepare_solution(config: WaveguideConfig, check_winding: bool = True):
    """
    从配置出发完成根的分类、系数分解与 Riemann-Hilbert 问题的求解。

    :return: ``(ctx, classification, solution)``，其中 ``solution`` 尚未代入常数。
    """
    ctx = KernelContext(config)
    classification: RootClassification = classify(ctx)
    if check_winding:
        winding_index(ctx, classification)
    rhs = RHSide(ctx, factorize(classification))
    return ctx, classification, solve_phi(rhs)


def solve_waveguide(config: WaveguideConfig, edge_form: Optional[str] = None,
                    compatibility: bool = True) -> ConstantsSolution:
    """求解给定配置的全部边缘常数。"""
    _, _, solution = prepare_solution(config)
    rows = assemble_system(solution, edge_form, compatibility)
    return solve_constants(rows, solution)
