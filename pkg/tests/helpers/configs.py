"""测试用的波导配置，参数取自根的参考表。"""
from strip_helmholtz.config import SolverOptions, SourcePoint, WaveguideConfig

# (gamma0, gamma1, k, roots z0..z2, case)
MEMBRANE_TABLE = [
    (5, 1, 1 + 0.1j, [-0.0008424 - 0.2540j, -0.2009 + 2.115j, 0.2017 - 1.861j], "I"),
    (0.5, 0.1, 1 + 0.1j, [0.7264 - 0.02424j, -0.002135 + 0.1872j, -0.7243 - 0.1629j], "I"),
    (1, 0.1, 1 + 1j, [0.5848, -0.2924 + 0.5065j, -0.2924 - 0.5065j], "II"),
    (0.5, 0.05, 1 + 0.1j, [0.7123 + 0.02117j, -0.0003512 + 0.09816j, -0.7120 - 0.1193j], "III"),
    (1, 0.1, 1j, [-0.4020 + 0.2321j, 0.4020 + 0.2321j, -0.4642j], "III"),
]

# (gamma0, gamma1, roots z0..z4), k = 1 + 0.1i
# 参考表第一列标注为 γ₁=1，但其中的根满足的是 γ₁=2 时的 Q(η)
PLATE_TABLE = [
    (5, 2, [-1.806 - 0.04917j, -0.02056 + 1.256j, 1.809 + 0.1846j, -0.09151 - 0.7698j, 0.1083 - 0.6219j]),
    (1, 0.1, [-1.414 - 0.09353j, 0.08369 + 0.3690j, 1.416 + 0.1184j, -0.3550 - 0.2809j, 0.2701 - 0.1131j]),
    (1, 1, [-1.441 + 0.008144j, 0.02245 + 0.7374j, 1.448 + 0.2135j, -0.6625 - 0.5350j, 0.6330 - 0.4240j]),
    (0.1, 1, [-1.319 + 0.1075j, 0.02935 + 0.5892j, 1.320 + 0.2936j, -0.8586 - 0.5673j, 0.8280 - 0.4229j]),
]


def membrane(gamma0=1.0, gamma1=0.1, k=1 + 1j, source=(1.0, 0.5), alphas=None, mus=None, **solver):
    return WaveguideConfig.from_dimensionless(k, gamma0, gamma1, model="membrane", a=1.0,
                                              source=SourcePoint(*source), alphas=alphas, mus=mus,
                                              solver=SolverOptions(**solver))


def plate(gamma0=1.0, gamma1=1.0, k=1 + 0.1j, source=(1.0, 0.5), **solver):
    return WaveguideConfig.from_dimensionless(k, gamma0, gamma1, model="plate", a=1.0,
                                              source=SourcePoint(*source), solver=SolverOptions(**solver))


def case_i_membrane(**kw):
    return membrane(5, 1, 1 + 0.1j, **kw)


def case_ii_membrane(**kw):
    return membrane(1, 0.1, 1 + 1j, **kw)


def case_iii_membrane(**kw):
    return membrane(1, 0.1, 1j, **kw)


def case_ii_plate(root=-2.0, k=1 + 0.1j, **kw):
    """板的情形 (ii)：选取 γ₀、γ₁ 使 Q(root)=0。"""
    k2 = complex(k) ** 2
    ratio = (root * root - k2) ** 2 / k2
    return plate(ratio.real, root * ratio.imag, k, **kw)


def match_roots(computed, expected, rtol=1e-3, atol=2e-4):
    """每个参考根都能在计算结果中找到对应的根。"""
    computed = list(computed)
    for z in expected:
        distances = [abs(c - z) for c in computed]
        i = min(range(len(computed)), key=distances.__getitem__)
        if distances[i] > atol + rtol * abs(z):
            return False
        computed.pop(i)
    return True
