"""
**strip_helmholtz** 的异常类型。

所有异常都继承自 :class:`StripHelmholtzError`，并分为两类：

* :class:`ValidationError` - 输入参数或配置不合法，命令行返回码为 2；
* :class:`NumericalError` - 数值计算失败，命令行返回码为 3。
"""

__all__ = [
    "StripHelmholtzError",
    "ValidationError",
    "NumericalError",
    "InvalidParameter",
    "UnsupportedCase",
    "OnBranchCut",
    "DispersionZero",
    "EtaZero",
    "DegenerateRoots",
    "ContourPole",
    "CountMismatch",
    "PoleOnEvaluation",
    "QuadratureNotConverged",
    "RemovabilityFailure",
    "SeriesTruncationTooShort",
    "BranchSelectionFailure",
    "SingularSystem",
    "SingularDiscretization",
    "Overflow",
    "SourceSingularity",
]


class StripHelmholtzError(RuntimeError):
    exit_code = 1


class ValidationError(StripHelmholtzError):
    exit_code = 2


class NumericalError(StripHelmholtzError):
    exit_code = 3


class InvalidParameter(ValidationError):
    """
    参数不满足约束。

    :param name: 参数名
    :param value: 参数取值
    :param reason: 违反的约束
    """

    def __init__(self, name: str, value, reason: str):
        self.name = name
        self.value = value
        self.reason = reason
        super().__init__(f"Invalid parameter `{name}`={value!r}: {reason}.")


class UnsupportedCase(ValidationError):
    pass


class OnBranchCut(NumericalError):
    pass


class DispersionZero(NumericalError):
    pass


class EtaZero(NumericalError):
    pass


class DegenerateRoots(NumericalError):
    pass


class ContourPole(NumericalError):
    pass


class CountMismatch(NumericalError):
    pass


class PoleOnEvaluation(NumericalError):
    pass


class QuadratureNotConverged(NumericalError):
    pass


class RemovabilityFailure(NumericalError):
    pass


class SeriesTruncationTooShort(NumericalError):
    pass


class BranchSelectionFailure(NumericalError):
    pass


class SingularSystem(NumericalError):
    pass


class SingularDiscretization(NumericalError):
    pass


class Overflow(NumericalError):
    pass


class SourceSingularity(NumericalError):
    pass
