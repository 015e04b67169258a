r"""
多项式 q(η)、Q(η) 的求根与分类、系数 H(η) 的卷绕数，以及色散函数
:math:`\Delta(\eta)/\zeta` 在上半平面的零点 :math:`\tau_s`。
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from strip_helmholtz.config import WallModel
from strip_helmholtz.errors import ContourPole, CountMismatch, DegenerateRoots, NumericalError
from strip_helmholtz.kernel import KernelContext, dispersion_even, dispersion_even_derivative
from strip_helmholtz.log import logger

__all__ = [
    "CaseLabel",
    "RootClassification",
    "DispersionZeros",
    "polynomial_roots",
    "classify_membrane",
    "classify_plate",
    "classify",
    "winding_index",
    "dispersion_zero_search",
    "extend_dispersion_zeros",
]


class CaseLabel(str, Enum):
    I = "I"
    II = "II"
    III = "III"


@dataclass
class RootClassification:
    r"""
    多项式根的分类结果。

    ``roots`` 按 z₀, z₁, ... 的顺序排列；``lower`` 与 ``upper`` 给出分解
    :math:`H^+(\eta)=\prod_{z\in L}(\eta-z)/\prod_{z\in U}(\eta+z)` 所用的两组根。
    情形 (ii) 中实根 z₀ 归入 ``upper``。

    :param roots: 全部根。
    :param case_label: 情形 (i)、(ii)、(iii)。
    :param eta: 规范化的 :math:`\eta_j`，与 z_j 相差符号，使其位于上半平面一侧。
    :param kappa: 由根的位置得到的指标 ``len(upper) - len(lower)``。
    """

    model: WallModel
    roots: np.ndarray
    case_label: CaseLabel
    eta: np.ndarray
    lower: List[int]
    upper: List[int]
    kappa: int

    @property
    def lower_roots(self) -> np.ndarray:
        return self.roots[self.lower]

    @property
    def upper_roots(self) -> np.ndarray:
        return self.roots[self.upper]

    @property
    def real_root(self) -> Optional[complex]:
        return complex(self.roots[0]) if self.case_label is CaseLabel.II else None

    def to_dict(self) -> dict:
        return {
            "model": self.model.value,
            "case": self.case_label.value,
            "kappa": self.kappa,
            "roots": [[float(z.real), float(z.imag)] for z in self.roots],
            "eta": [[float(z.real), float(z.imag)] for z in self.eta],
        }


@dataclass
class DispersionZeros:
    r"""
    :math:`\Delta(\eta)/\zeta` 在上半平面的零点，按模长排序。

    ``count_verified`` 为辐角原理在 ``box`` 内给出的零点数；``tau`` 中超过
    这一数目的部分由渐近初值加牛顿迭代得到。
    """

    tau: np.ndarray
    count_verified: int
    box: Tuple[float, float, float, float]
    derivative: np.ndarray = field(default=None, repr=False)

    def __len__(self):
        return len(self.tau)


def polynomial_roots(coeffs: Sequence[complex], max_iter: int = 500, tol: float = 1e-15) -> np.ndarray:
    """
    Durand-Kerner 同时迭代求多项式全部根，再用牛顿法修正。

    初值均匀分布在半径 ``1+max|c_i/c_0|`` 的圆上。

    :param coeffs: 降幂排列的系数。
    """
    p = np.asarray(coeffs, dtype=complex)
    p = p / p[0]
    n = len(p) - 1
    radius = 1 + np.max(np.abs(p[1:]))
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    for _ in range(max_iter):
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1)
        step = np.polyval(p, z) / np.prod(diff, axis=1)
        z = z - step
        if np.max(np.abs(step)) < tol * (1 + np.max(np.abs(z))):
            break
    dp = np.polyder(p)
    for _ in range(3):
        derivative = np.polyval(dp, z)
        z = z - np.where(derivative != 0, np.polyval(p, z) / np.where(derivative != 0, derivative, 1), 0)
    return z


def _checked_roots(ctx: KernelContext) -> np.ndarray:
    options = ctx.config.solver
    coeffs = ctx.poly_coeffs
    z = polynomial_roots(coeffs)
    n = len(z)
    residual = np.abs(np.polyval(coeffs, z))
    bound = 1e-10 * np.maximum(1, np.abs(z)) ** n
    if np.any(residual > bound):
        raise DegenerateRoots(f"Root residuals {residual} exceed {bound}.")
    gaps = np.abs(z[:, None] - z[None, :]) + np.eye(n) * np.inf
    if np.min(gaps) <= options.root_separation:
        raise DegenerateRoots(f"Roots {z} are not simple (separation {np.min(gaps):.3e}).")
    return z


def _by_axis_distance(values: np.ndarray, idx: List[int]) -> List[int]:
    return sorted(idx, key=lambda i: (round(abs(values[i].imag), 10), values[i].real))


def _by_real_part(values: np.ndarray, idx: List[int]) -> List[int]:
    return sorted(idx, key=lambda i: (round(values[i].real, 10), values[i].imag))


def _split(z: np.ndarray, band: float):
    real = [i for i in range(len(z)) if abs(z[i].imag) < band * (1 + abs(z[i]))]
    up = [i for i in range(len(z)) if i not in real and z[i].imag > 0]
    down = [i for i in range(len(z)) if i not in real and z[i].imag < 0]
    return real, up, down


def _assemble(ctx: KernelContext, z: np.ndarray, z0: int, ups: List[int], downs: List[int],
              label: CaseLabel) -> RootClassification:
    order = [z0] + ups + downs
    roots = z[order]
    n_up = len(ups)
    upper = list(range(1, 1 + n_up))
    lower = list(range(1 + n_up, len(order)))
    if label is CaseLabel.I:
        lower = [0] + lower
    else:
        upper = [0] + upper
    eta = roots.copy()
    eta[lower] = -eta[lower]
    if label is CaseLabel.II:
        roots[0] = complex(roots[0].real, 0.0)
        eta[0] = roots[0]
    kappa = len(upper) - len(lower)
    result = RootClassification(ctx.model, roots, label, eta, lower, upper, kappa)
    logger.debug(f"Classified {ctx.model.value} roots as case {label.value}: {roots}")
    return result


def classify_membrane(ctx: KernelContext) -> RootClassification:
    r"""
    求 :math:`q(\eta)=\eta(\eta^2-k^2+\alpha_2^2)+i\mu_2` 的三个根并判定情形：

    * (i)：一个根在上半平面，两个在下半平面；z₀ 为离实轴较近的下半平面根；
    * (ii)：一个实根 z₀；
    * (iii)：两个根在上半平面，一个在下半平面；z₀ 为离实轴较近的上半平面根。

    :raises DegenerateRoots: 根不是单根，或不属于以上三种情形。
    """
    if ctx.model is not WallModel.MEMBRANE:
        raise DegenerateRoots("classify_membrane requires a membrane configuration.")
    z = _checked_roots(ctx)
    real, up, down = _split(z, ctx.config.solver.real_root_band)
    if len(real) == 1 and len(up) == 1 and len(down) == 1:
        return _assemble(ctx, z, real[0], up, down, CaseLabel.II)
    if not real and len(up) == 1 and len(down) == 2:
        z0, *rest = _by_axis_distance(z, down)
        return _assemble(ctx, z, z0, up, rest, CaseLabel.I)
    if not real and len(up) == 2 and len(down) == 1:
        z0, *rest = _by_axis_distance(z, up)
        return _assemble(ctx, z, z0, rest, down, CaseLabel.III)
    raise DegenerateRoots(f"Roots {z} fit none of the cases (i)-(iii).")


def classify_plate(ctx: KernelContext) -> RootClassification:
    r"""
    求 :math:`Q(\eta)=\eta[(\eta^2-k^2)^2-\alpha_2^4]-i\mu_2` 的五个根。
    z₁、z₂ 在上半平面，z₃、z₄ 在下半平面（各自按实部升序），第五个根 z₀
    决定情形。

    :raises DegenerateRoots: 根的分布不满足上述模式。
    """
    if ctx.model is not WallModel.PLATE:
        raise DegenerateRoots("classify_plate requires a plate configuration.")
    z = _checked_roots(ctx)
    real, up, down = _split(z, ctx.config.solver.real_root_band)
    if len(real) == 1 and len(up) == 2 and len(down) == 2:
        return _assemble(ctx, z, real[0], _by_real_part(z, up), _by_real_part(z, down), CaseLabel.II)
    if not real and len(up) == 2 and len(down) == 3:
        z0, *rest = _by_axis_distance(z, down)
        return _assemble(ctx, z, z0, _by_real_part(z, up), _by_real_part(z, rest), CaseLabel.I)
    if not real and len(up) == 3 and len(down) == 2:
        z0, *rest = _by_axis_distance(z, up)
        return _assemble(ctx, z, z0, _by_real_part(z, rest), _by_real_part(z, down), CaseLabel.III)
    raise DegenerateRoots(f"Roots {z} fit none of the plate cases.")


def classify(ctx: KernelContext) -> RootClassification:
    if ctx.model is WallModel.MEMBRANE:
        return classify_membrane(ctx)
    return classify_plate(ctx)


def _phase_sweep(func, t: np.ndarray, max_rounds: int = 12, max_step: float = np.pi / 8) -> float:
    """
    沿参数 ``t`` 累加 ``func`` 的辐角增量，在相邻点辐角跳变过大的位置加密。
    """
    values = func(t)
    for _ in range(max_rounds):
        jumps = np.abs(np.angle(values[1:] / values[:-1]))
        bad = np.nonzero(jumps > max_step)[0]
        if len(bad) == 0:
            break
        mids = 0.5 * (t[bad] + t[bad + 1])
        t = np.insert(t, bad + 1, mids)
        values = np.insert(values, bad + 1, func(mids))
    return float(np.sum(np.angle(values[1:] / values[:-1])))


def winding_index(ctx: KernelContext, classification: RootClassification,
                  indent: Optional[bool] = None, samples: int = 4001) -> int:
    r"""
    数值计算 :math:`H(\eta)=P(\eta)/P(-\eta)` 沿实轴的卷绕数。

    参数化 :math:`\eta=\tan\theta`，两端 :math:`H\to-1`，因此闭合后为整数。
    情形 (ii) 中 :math:`H` 在 :math:`z_0` 有零点、在 :math:`-z_0` 有极点，路径在
    :math:`-z_0` 附近从上方、在 :math:`z_0` 附近从下方绕过。这相当于把实根视为上半平面
    的根，与 :func:`classify_membrane` 将实根归入 ``upper`` 的约定一致。

    :raises ContourPole: 情形 (ii) 且不允许绕行。
    :raises CountMismatch: 数值卷绕数与根的位置给出的指标不一致。
    """
    if indent is None:
        indent = ctx.config.solver.indent_case_ii
    bump = lambda t: np.zeros_like(t)
    if classification.case_label is CaseLabel.II:
        if not indent:
            raise ContourPole(f"H has a zero and a pole on the real axis at +-{classification.roots[0]!r}.")
        complex_roots = [abs(z.imag) for z in classification.roots[1:]]
        # stays inside the band free of the other roots and their mirror images
        shift = 0.5 * min(min(complex_roots), 1e-2)
        x0 = float(classification.roots[0].real)
        width = 0.5 * abs(x0)
        bump = lambda t: shift * (np.exp(-((t + x0) / width) ** 2) - np.exp(-((t - x0) / width) ** 2))

    def h_on_contour(theta):
        t = np.tan(theta)
        eta = t + 1j * bump(t)
        return ctx.poly(eta) / ctx.poly(-eta)

    eps = 1e-9
    theta = np.linspace(-np.pi / 2 + eps, np.pi / 2 - eps, samples)
    total = _phase_sweep(h_on_contour, theta)
    winding = total / (2 * np.pi)
    kappa = int(round(winding))
    if abs(winding - kappa) > 0.1 or kappa != classification.kappa:
        raise CountMismatch(f"Winding of H is {winding:.4f}, root placement gives {classification.kappa}.")
    return kappa


def _scaled_even(eta, ctx: KernelContext):
    mantissa, exponent = dispersion_even(eta, ctx, scaled=True)
    return mantissa, exponent


def _box_count(ctx: KernelContext, box, per_edge: int = 64) -> int:
    re0, re1, im0, im1 = box
    corners = [complex(re0, im0), complex(re1, im0), complex(re1, im1), complex(re0, im1), complex(re0, im0)]
    total = 0.0
    for start, stop in zip(corners[:-1], corners[1:]):
        def on_edge(t, start=start, stop=stop):
            mantissa, exponent = _scaled_even(start + (stop - start) * t, ctx)
            return mantissa * np.exp(1j * exponent.imag)
        total += _phase_sweep(on_edge, np.linspace(0.0, 1.0, per_edge), max_rounds=16)
    count = total / (2 * np.pi)
    if abs(count - round(count)) > 0.1:
        raise CountMismatch(f"Argument principle gives non-integer count {count:.4f} on box {box}.")
    return int(round(count))


def _relative_residual(ctx: KernelContext, tau: complex) -> float:
    mantissa, _ = _scaled_even(tau, ctx)
    nearby, _ = _scaled_even(tau * (1 + 1e-3) + 1e-3j, ctx)
    return float(abs(mantissa) / max(abs(nearby), 1e-300))


def _newton(ctx: KernelContext, guess: complex) -> complex:
    """
    以 ``guess`` 为初值的牛顿迭代，步长判据取相对容差。

    :raises NumericalError: 迭代不收敛且残差不够小。
    """
    func = lambda z: dispersion_even(z, ctx)
    deriv = lambda z: dispersion_even_derivative(z, ctx)
    root, info = optimize.newton(func, guess, fprime=deriv, tol=1e-14, rtol=1e-13, maxiter=100,
                                 full_output=True, disp=False)
    root = complex(root)
    if not np.isfinite(root) or (not info.converged and _relative_residual(ctx, root) > 1e-9):
        raise NumericalError(f"Newton iteration from {guess!r} did not converge (last iterate {root!r}).")
    return root


def _inside(box, z: complex, margin: float = 0.0) -> bool:
    re0, re1, im0, im1 = box
    return re0 - margin <= z.real <= re1 + margin and im0 - margin <= z.imag <= im1 + margin


def _halves(box, fraction: float):
    re0, re1, im0, im1 = box
    if re1 - re0 >= im1 - im0:
        cut = re0 + fraction * (re1 - re0)
        return (re0, cut, im0, im1), (cut, re1, im0, im1)
    cut = im0 + fraction * (im1 - im0)
    return (re0, re1, im0, cut), (re0, re1, cut, im1)


# off-centre so that zeros symmetric about the box centre never sit on the cut
_CUT_FRACTIONS = (0.5123, 0.4387, 0.5871, 0.3719)


def _search(ctx: KernelContext, box, count: int, depth: int, found: List[complex]):
    if count == 0:
        return
    re0, re1, im0, im1 = box
    centre = complex(0.5 * (re0 + re1), 0.5 * (im0 + im1))
    size = max(re1 - re0, im1 - im0)
    tiny = size < 1e-6 * (1 + abs(centre))
    if count == 1 and (depth > 0 or tiny):
        try:
            tau = _newton(ctx, centre)
        except (RuntimeError, ArithmeticError):
            tau = None
        # a box shrunk to the size of the root accuracy takes the root found from its centre
        if tau is not None and _inside(box, tau, margin=size if tiny else 0.0):
            found.append(tau)
            return
    if depth > 60 or tiny:
        raise CountMismatch(f"Zero search did not isolate {count} zero(s) in box {box}.")
    for fraction in _CUT_FRACTIONS:
        halves = _halves(box, fraction)
        try:
            first = _box_count(ctx, halves[0])
        except CountMismatch:
            # a zero sits on the cut line
            continue
        if 0 <= first <= count:
            break
    else:
        raise CountMismatch(f"No cut of box {box} gives a consistent zero count.")
    _search(ctx, halves[0], first, depth + 1, found)
    _search(ctx, halves[1], count - first, depth + 1, found)


def default_zero_box(ctx: KernelContext) -> Tuple[float, float, float, float]:
    options = ctx.config.solver
    if options.zero_box is not None:
        return tuple(float(v) for v in options.zero_box)
    scale = 1 + abs(ctx.k) + float(np.max(np.abs(ctx.alpha)))
    top = np.sqrt(((options.zero_count + 0.5) * np.pi / ctx.a) ** 2 + abs(ctx.k) ** 2)
    return -2 * scale, 2 * scale, 1e-6, float(top)


def dispersion_zero_search(ctx: KernelContext, box: Optional[Sequence[float]] = None,
                           max_count: Optional[int] = None) -> DispersionZeros:
    r"""
    求 ``box`` 内 :math:`\Delta(\eta)/\zeta` 的全部零点。

    先用辐角原理给出矩形内的零点数，再递归二分矩形直到每块只含一个零点，
    以块中心为初值做牛顿迭代。

    :param box: ``(re_min, re_max, im_min, im_max)``，须位于上半平面。
    :param max_count: 零点数上限，超过时抛出 :class:`CountMismatch`。
    :raises CountMismatch: 找到的零点数与辐角原理计数不一致。
    """
    box = default_zero_box(ctx) if box is None else tuple(float(v) for v in box)
    if box[2] <= 0:
        raise CountMismatch(f"Search box {box} must lie in the upper half-plane.")
    count = _box_count(ctx, box)
    if max_count is not None and count > max_count:
        raise CountMismatch(f"Box {box} holds {count} zeros, more than max_count={max_count}.")
    found: List[complex] = []
    _search(ctx, box, count, 0, found)
    tau = np.array(sorted(found, key=abs), dtype=complex)
    if len(tau) != count:
        raise CountMismatch(f"Found {len(tau)} zeros but the contour count is {count}.")
    for t in tau:
        if _relative_residual(ctx, t) > 1e-9:
            raise CountMismatch(f"Zero {t!r} did not converge.")
    logger.debug(f"Found {count} dispersion zeros in box {box}.")
    return DispersionZeros(tau, count, box, dispersion_even_derivative(tau, ctx) if count else np.array([]))


def _zero_near(ctx: KernelContext, guess: complex, top: float) -> List[complex]:
    """在以 ``guess`` 为中心、边长 π/a 的方框中（截去 ``top`` 以下部分）用辐角原理找零点。"""
    half = np.pi / (2 * ctx.a)
    box = (guess.real - half, guess.real + half, max(top, guess.imag - half), guess.imag + half)
    if box[3] <= box[2]:
        return []
    found: List[complex] = []
    _search(ctx, box, _box_count(ctx, box), 1, found)
    return found


def extend_dispersion_zeros(ctx: KernelContext, zeros: DispersionZeros, total: int) -> DispersionZeros:
    r"""
    用渐近初值 :math:`\tau_s^{(0)}=\sqrt{k^2-(\pi s/a)^2}` （取上半平面分支）
    加牛顿迭代，把零点表扩充到 ``total`` 个，用于留数级数的尾部。

    牛顿迭代的结果与初值的距离须小于 :math:`\pi/(2a)`，否则它属于相邻的 s，
    改在初值周围边长 :math:`\pi/a` 的方框内用辐角原理搜索。

    :raises CountMismatch: 初值周围的方框中没有零点。
    """
    tau = list(zeros.tau)
    top = zeros.box[3]
    half = np.pi / (2 * ctx.a)
    s = 1
    while len(tau) < total and s < 50 * total + 100:
        guess = complex(np.sqrt(ctx.k ** 2 - (np.pi * s / ctx.a) ** 2 + 0j))
        guess = guess if guess.imag > 0 else -guess
        s += 1
        if guess.imag < top - half:
            continue
        try:
            candidates = [_newton(ctx, guess)]
        except (RuntimeError, ArithmeticError):
            candidates = []
        if not candidates or abs(candidates[0] - guess) >= half:
            logger.debug(f"Newton from {guess!r} left its cell; searching the box around it.")
            candidates = _zero_near(ctx, guess, top)
            if not candidates and guess.imag - half > top:
                raise CountMismatch(f"No dispersion zero near the asymptotic guess {guess!r} (s={s - 1}).")
        for t in candidates:
            if t.imag > top and not any(abs(t - u) < 1e-8 * abs(t) for u in tau):
                tau.append(t)
    tau = np.array(sorted(tau, key=abs), dtype=complex)
    return DispersionZeros(tau, zeros.count_verified, zeros.box, dispersion_even_derivative(tau, ctx))
