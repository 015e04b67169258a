''' **strip_helmholtz** 用 Riemann-Hilbert 方法半解析地求解带膜或弹性板壁面的半无限条形波导中的
Helmholtz 方程，并提供独立的有限差分校验。
'''
from .config import WallModel, WallSpec, SourcePoint, SolverOptions, WaveguideConfig, \
    validate_config, load_config
from .errors import StripHelmholtzError, ValidationError, NumericalError
from .kernel import KernelContext, zeta_branch, dispersion_tilde, dispersion_full, \
    dispersion_even, green_function, fundamental_pair, lambda_coefficients, h_terms
from .spectra import CaseLabel, RootClassification, DispersionZeros, classify, \
    winding_index, dispersion_zero_search
from .rh import KernelFactorization, RHSide, RHSolution, factorize, cauchy_psi, solve_phi
from .constants import psi_quadrature, psi_series, assemble_system, solve_constants, \
    ConstantsSolution, solve_waveguide, prepare_solution
from .field import FieldGrid, ContinuationAtlas, continuation_atlas, trace_vertical, \
    trace_horizontal, corner_mismatch, interior_field, pressure, wall_deflection, \
    vertical_deflection
from .oracle import GridSpec, FDGrid, fd_solve, ode_solve_1d, cross_validate, \
    CrossValidationReport
from .log import logger
