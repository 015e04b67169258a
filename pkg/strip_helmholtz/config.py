import hashlib
import json
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Any, List, Optional, Sequence, Union

import numpy as np
import yaml

from strip_helmholtz.errors import InvalidParameter

__all__ = [
    "WallModel",
    "WallSpec",
    "SourcePoint",
    "SolverOptions",
    "WaveguideConfig",
    "validate_config",
    "load_config",
    "to_complex",
]

ComplexLike = Union[complex, float, int, str, Sequence[float]]


class WallModel(str, Enum):
    """
    壁面模型。``membrane`` 对应三阶边界条件，``plate`` 对应五阶边界条件。
    """

    MEMBRANE = "membrane"
    PLATE = "plate"

    @property
    def power(self) -> int:
        """:math:`\\alpha_j` 在色散关系中出现的幂次：膜为 2，板为 4。"""
        return 2 if self is WallModel.MEMBRANE else 4

    @property
    def degree(self) -> int:
        """多项式 q(η) 或 Q(η) 的次数。"""
        return 3 if self is WallModel.MEMBRANE else 5

    @property
    def n_constants(self) -> int:
        return 4 if self is WallModel.MEMBRANE else 8


def to_complex(value: ComplexLike, name: str = "value") -> complex:
    """
    将配置文件中的复数转换为 :class:`complex`。

    支持 ``"1+0.1j"``、``"1+0.1i"`` 形式的字符串以及 ``[re, im]`` 数组。
    """
    if isinstance(value, str):
        text = value.replace(" ", "").replace("i", "j")
        try:
            return complex(text)
        except ValueError:
            raise InvalidParameter(name, value, "not a complex number") from None
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InvalidParameter(name, value, "complex pairs must be [re, im]")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float, complex, np.number)):
        return complex(value)
    raise InvalidParameter(name, value, "not a complex number")


def _optional_complex(value, name):
    return None if value is None else to_complex(value, name)


@dataclass
class WallSpec:
    """
    单个壁面的参数。

    既可以给出物理量 ``mass`` 与 ``stiffness`` （膜的张力 T_j 或板的弯曲刚度 B_j），
    也可以直接给出 ``alpha`` 与 ``mu``。前者在 :func:`validate_config` 中换算为
    后者。

    :param mass: 单位面积质量 m_j。
    :param stiffness: 膜的张力或板的弯曲刚度。
    :param alpha: :math:`\\alpha_j`。
    :param mu: :math:`\\mu_j`。
    """

    mass: Optional[float] = field(default=None, metadata={"help": "Mass per unit area m_j."})
    stiffness: Optional[float] = field(
        default=None, metadata={"help": "Tension T_j (membrane) or bending stiffness B_j (plate)."}
    )
    alpha: Optional[complex] = field(default=None, metadata={"help": "Wall wave number alpha_j."})
    mu: Optional[complex] = field(default=None, metadata={"help": "Fluid loading mu_j."})

    def __post_init__(self):
        self.alpha = _optional_complex(self.alpha, "alpha")
        self.mu = _optional_complex(self.mu, "mu")

    @property
    def is_physical(self) -> bool:
        return self.mass is not None and self.stiffness is not None


@dataclass
class SourcePoint:
    x: float = field(default=1.0, metadata={"help": "Source abscissa x° > 0."})
    y: float = field(default=0.5, metadata={"help": "Source ordinate 0 < y° < a."})


@dataclass
class SolverOptions:
    """
    数值求解的参数。

    :param tol: 求积与代数残差的相对容差。
    :param quad_limit: 自适应求积的最大子区间数。
    :param series_cap: 留数级数的最大项数。
    :param series_tol: 留数级数尾项估计的容差。
    :param real_root_band: 判定多项式根为实根的带宽 ``band*(1+|z|)``。
    :param root_separation: 多项式根之间的最小距离。
    :param zero_box: 搜索 Δ(η)/ζ 零点的矩形 ``[re_min, re_max, im_min, im_max]``；
        为 ``None`` 时根据 k、a 自动选取。
    :param zero_count: 自动选取矩形时希望包含的零点数。
    :param cosine_modes: 竖直壁迹线余弦展开的项数。
    :param edge_form: 竖直壁角点条件的形式，``'transform'`` 为 H⁺ 极点处的可去性条件，
        ``'residue'`` 为留数求和形式（仅膜）。
    :param indent_case_ii: 情形 (ii) 计算卷绕数时是否让积分路径绕过实轴上的根。
    :param threads: 并行线程数上限，``None`` 时读取环境变量
        ``STRIP_HELMHOLTZ_THREADS``。
    """

    tol: float = field(default=1e-8, metadata={"help": "Relative tolerance."})
    quad_limit: int = field(default=400, metadata={"help": "Maximum quadrature subintervals."})
    series_cap: int = field(default=500, metadata={"help": "Maximum number of residue terms."})
    series_tol: float = field(default=1e-8, metadata={"help": "Residue-series tail tolerance."})
    real_root_band: float = field(default=1e-9, metadata={"help": "Band for real roots."})
    root_separation: float = field(default=1e-8, metadata={"help": "Minimum root separation."})
    zero_box: Optional[List[float]] = field(
        default=None, metadata={"help": "Search box [re_min, re_max, im_min, im_max]."}
    )
    zero_count: int = field(default=24, metadata={"help": "Dispersion zeros in the default box."})
    cosine_modes: int = field(default=256, metadata={"help": "Cosine modes of vertical traces."})
    edge_form: str = field(default="transform", metadata={"help": "'transform' or 'residue'."})
    indent_case_ii: bool = field(default=True, metadata={"help": "Indent contour in case (ii)."})
    threads: Optional[int] = field(default=None, metadata={"help": "Worker thread cap."})

    def __post_init__(self):
        if self.edge_form not in ("transform", "residue"):
            raise InvalidParameter("edge_form", self.edge_form, "must be 'transform' or 'residue'")


@dataclass
class WaveguideConfig:
    """
    半无限条形波导的配置类。

    两种给定方式：

    * 物理量 ``omega``、``c_sound``、``rho`` 以及各壁面的 ``mass``、``stiffness``；
    * 无量纲形式：直接给出 ``k`` 与各壁面的 ``alpha``、``mu``，见
      :meth:`from_dimensionless`。

    壁面编号：``walls[0]`` 为 y=0，``walls[1]`` 为 y=a，``walls[2]`` 为 x=0。

    :param omega: 复频率，要求实部与虚部均为正。
    :param c_sound: 声速。
    :param rho: 流体平均密度。
    :param a: 条形区域宽度。
    :param walls: 三个壁面的参数。
    :param model: 壁面模型，``'membrane'`` 或 ``'plate'``。
    :param source: 点源位置。
    :param k: 波数，物理量给定时由 ``omega/c_sound`` 得到。
    :param solver: 数值求解参数。
    """

    omega: Optional[complex] = field(default=None, metadata={"help": "Complex frequency."})
    c_sound: float = field(default=1.0, metadata={"help": "Sound speed c."})
    rho: float = field(default=1.0, metadata={"help": "Mean fluid density."})
    a: float = field(default=1.0, metadata={"help": "Strip width."})
    walls: List[WallSpec] = field(
        default_factory=lambda: [WallSpec(), WallSpec(), WallSpec()],
        metadata={"help": "Walls y=0, y=a and x=0."},
    )
    model: WallModel = field(default=WallModel.MEMBRANE, metadata={"help": "'membrane' or 'plate'."})
    source: SourcePoint = field(default_factory=SourcePoint, metadata={"help": "Point source."})
    k: Optional[complex] = field(default=None, metadata={"help": "Wave number."})
    solver: SolverOptions = field(default_factory=SolverOptions, metadata={"help": "Solver options."})

    def __post_init__(self):
        self.omega = _optional_complex(self.omega, "omega")
        self.k = _optional_complex(self.k, "k")
        if isinstance(self.model, str):
            try:
                self.model = WallModel(self.model.lower())
            except ValueError:
                raise InvalidParameter("model", self.model, "must be 'membrane' or 'plate'") from None
        self.walls = [WallSpec(**w) if isinstance(w, dict) else w for w in self.walls]
        if isinstance(self.source, dict):
            self.source = SourcePoint(**self.source)
        elif isinstance(self.source, (list, tuple)):
            self.source = SourcePoint(*self.source)
        if isinstance(self.solver, dict):
            self.solver = SolverOptions(**self.solver)

    @classmethod
    def from_dict(cls, content: dict) -> "WaveguideConfig":
        """
        从字典构造配置。字典中含有 ``gamma0`` 时按无量纲形式处理。
        """
        content = dict(content)
        if "gamma0" in content:
            return cls.from_dimensionless(**content)
        unknown = set(content) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidParameter("config", sorted(unknown), "unknown keys")
        return cls(**content)

    @classmethod
    def from_dimensionless(cls, k: ComplexLike, gamma0: float, gamma1: float,
                           model: Union[str, WallModel] = "membrane", a: float = 1.0,
                           source: Any = None, alphas: Optional[Sequence[ComplexLike]] = None,
                           mus: Optional[Sequence[ComplexLike]] = None,
                           solver: Any = None) -> "WaveguideConfig":
        """
        按无量纲参数构造配置。

        膜：:math:`\\alpha_2^2=\\gamma_0 k^2`，:math:`\\mu_2=\\gamma_1 k^2`；
        板：:math:`\\alpha_2^4=\\gamma_0 k^2`，:math:`\\mu_2=\\gamma_1 k^2`。

        :param alphas: 壁面 0、1 的 :math:`\\alpha_j`，缺省时与壁面 2 相同。
        :param mus: 壁面 0、1 的 :math:`\\mu_j`，缺省时与壁面 2 相同。
        """
        k = to_complex(k, "k")
        model = WallModel(model.lower()) if isinstance(model, str) else model
        if gamma0 <= 0:
            raise InvalidParameter("gamma0", gamma0, "must be positive")
        if model is WallModel.MEMBRANE:
            alpha2 = k * np.sqrt(gamma0)
        else:
            alpha2 = _principal_fourth_root(gamma0 * k * k)
        mu2 = gamma1 * k * k
        alphas = [alpha2, alpha2] if alphas is None else [to_complex(v, "alphas") for v in alphas]
        mus = [mu2, mu2] if mus is None else [to_complex(v, "mus") for v in mus]
        if len(alphas) != 2 or len(mus) != 2:
            raise InvalidParameter("alphas/mus", (alphas, mus), "two horizontal walls expected")
        walls = [WallSpec(alpha=alphas[0], mu=mus[0]), WallSpec(alpha=alphas[1], mu=mus[1]),
                 WallSpec(alpha=complex(alpha2), mu=complex(mu2))]
        kwargs = dict(k=k, a=a, walls=walls, model=model)
        if source is not None:
            kwargs["source"] = source
        if solver is not None:
            kwargs["solver"] = solver
        return validate_config(cls(**kwargs))

    @property
    def alpha(self) -> np.ndarray:
        return np.array([w.alpha for w in self.walls], dtype=complex)

    @property
    def mu(self) -> np.ndarray:
        return np.array([w.mu for w in self.walls], dtype=complex)

    @property
    def alpha_power(self) -> np.ndarray:
        """膜返回 :math:`\\alpha_j^2`，板返回 :math:`\\alpha_j^4`。"""
        return self.alpha ** self.model.power

    @property
    def y_walls(self):
        return 0.0, float(self.a)

    @property
    def gamma(self):
        """无量纲参数 :math:`(\\gamma_0, \\gamma_1)`。"""
        k2 = self.k * self.k
        return self.alpha_power[2] / k2, self.mu[2] / k2

    def to_dict(self) -> dict:
        content = asdict(self)
        content["model"] = self.model.value
        return content

    def config_hash(self) -> str:
        text = json.dumps(self.to_dict(), default=str, sort_keys=True)
        return hashlib.sha1(text.encode()).hexdigest()[:12]

    def __str__(self) -> str:
        title = self.__class__.__name__
        r = f"{title}:\n"
        r += _repr_dict(self.to_dict(), 0)
        return r


def _principal_fourth_root(value: complex) -> complex:
    return complex(np.sqrt(np.sqrt(complex(value))))


def validate_config(raw: WaveguideConfig) -> WaveguideConfig:
    """
    检查配置并计算派生量 k、:math:`\\alpha_j`、:math:`\\mu_j`。

    返回新的 :class:`WaveguideConfig`，原对象不被修改。

    :raises InvalidParameter: 任一约束不满足时抛出，信息中包含具体取值。
    """
    if raw.a <= 0:
        raise InvalidParameter("a", raw.a, "strip width must be positive")
    if raw.c_sound <= 0:
        raise InvalidParameter("c_sound", raw.c_sound, "sound speed must be positive")
    if raw.rho <= 0:
        raise InvalidParameter("rho", raw.rho, "density must be positive")
    if len(raw.walls) != 3:
        raise InvalidParameter("walls", len(raw.walls), "exactly three walls are required")

    omega, k = raw.omega, raw.k
    physical = all(w.is_physical for w in raw.walls)
    if physical or k is None:
        if omega is None:
            raise InvalidParameter("omega", omega, "either omega or k must be given")
        if not (omega.real > 0 and omega.imag > 0):
            raise InvalidParameter("omega", omega, "Re(omega) and Im(omega) must be positive")
        k = omega / raw.c_sound
    elif omega is None:
        omega = k * raw.c_sound
    if abs(k) == 0 or k.imag < 0:
        raise InvalidParameter("k", k, "wave number must satisfy |k|>0 and Im(k)>=0")

    walls = []
    for j, wall in enumerate(raw.walls):
        if wall.is_physical:
            if wall.mass <= 0 or wall.stiffness <= 0:
                raise InvalidParameter(f"walls[{j}]", (wall.mass, wall.stiffness),
                                       "mass and stiffness must be positive")
            if raw.model is WallModel.MEMBRANE:
                alpha = omega * np.sqrt(wall.mass / wall.stiffness)
            else:
                alpha = _principal_fourth_root(wall.mass * omega * omega / wall.stiffness)
            mu = raw.rho * omega * omega / wall.stiffness
            wall = replace(wall, alpha=complex(alpha), mu=complex(mu))
        if wall.alpha is None or wall.mu is None:
            raise InvalidParameter(f"walls[{j}]", wall, "give mass/stiffness or alpha/mu")
        if wall.mu == 0:
            raise InvalidParameter(f"walls[{j}].mu", wall.mu, "must be nonzero")
        if raw.model is WallModel.MEMBRANE and wall.alpha.imag <= 0:
            raise InvalidParameter(f"walls[{j}].alpha", wall.alpha, "Im(alpha) must be positive")
        walls.append(wall)

    source = raw.source
    if not source.x > 0:
        raise InvalidParameter("source.x", source.x, "source must lie at x > 0")
    if not 0 < source.y < raw.a:
        raise InvalidParameter("source.y", source.y, f"source must lie in (0, {raw.a})")

    return replace(raw, omega=complex(omega), k=complex(k), walls=walls)


def load_config(path: str) -> WaveguideConfig:
    """
    读取 yaml 或 json 配置文件并校验。
    """
    content = {}
    if path.lower().endswith(("yaml", "yml")):
        with open(path, "r") as f:
            content = yaml.load(f, Loader=yaml.SafeLoader)
    elif path.lower().endswith("json"):
        with open(path, "r") as f:
            content = json.load(f)
    else:
        raise InvalidParameter("config", path, "expected a .json or .yaml file")
    if not isinstance(content, dict):
        raise InvalidParameter("config", path, "top level must be a mapping")
    return validate_config(WaveguideConfig.from_dict(content))


def _repr_dict(d, depth):
    if not isinstance(d, dict):
        if isinstance(d, list) and d and isinstance(d[0], dict):
            return "".join(f"\n{'    ' * depth}- {i}:" + _repr_dict(v, depth + 1)
                           for i, v in enumerate(d))
        return f" {d}"
    space = "    "
    r = ""
    for k, v in d.items():
        r += f"\n{space * depth}{k}:" + _repr_dict(v, depth + 1)
    return r
