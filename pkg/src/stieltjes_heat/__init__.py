"""Constructive solutions of the heat equation driven by Stieltjes
derivatives: derivators, Lebesgue-Stieltjes integration, g-calculus special
functions, Stieltjes ODEs, and the one- and two-variable heat solvers."""

from .derivators import Derivator, Segment, identity, regular_points
from .errors import (
    DivergenceError,
    DomainError,
    EvaluationError,
    GateError,
    InvariantError,
    NoSolutionError,
    NonConvergenceError,
    SchemaError,
    StieltjesError,
)
from .gderiv import DiffConfig, gderiv, gderiv2, heat_residual, make_config, right_limit_of
from .heat1d import (
    HeatProblem,
    HeatSolution,
    PeriodicSolution,
    SeparatedTerm,
    SeriesDiagnostics,
    check_cos_condition,
    check_sin_condition,
    dirichlet_solution,
    find_periodic_eigenvalues,
    general_solution,
    neumann_solution,
    periodic_solution,
    series_solution,
    solve_ivp,
)
from .heat2d import (
    GateReport,
    GPolyContext,
    GPolySolution,
    G_mn,
    ProductCaseSolution,
    ProductDerivator,
    RadiusReport,
    SumDerivator,
    classical_heat_polynomial,
    gpoly_series_solution,
    heat_gpoly,
    independence_determinant,
    iterated_integral,
    product_partials,
    radius_sigma,
    solve_product_case,
)
from .lsintegral import Integrand, indefinite, integrate, integrate_signed
from .ode import (
    Ode2Solution,
    PeriodicFirstOrderSolution,
    Trajectory,
    build_grid,
    euler_stieltjes,
    solve_periodic_first_order,
    solve_second_order,
)
from .problems import ParsedProblem, alpha_stream, load_problem, solve
from .special import (
    MonomialTable,
    classify_regressivity,
    g_monomial,
    gcos_series,
    gcosh_series,
    gexp,
    gexp_right_limit,
    gexp_series,
    gsin_gcos,
    gsin_series,
    gsinh_gcosh,
    gsinh_series,
    monomial_table,
)

__version__ = "0.1.0"

__all__ = [
    "Derivator",
    "Segment",
    "identity",
    "regular_points",
    "StieltjesError",
    "DomainError",
    "SchemaError",
    "InvariantError",
    "GateError",
    "NonConvergenceError",
    "DivergenceError",
    "NoSolutionError",
    "EvaluationError",
    "DiffConfig",
    "make_config",
    "gderiv",
    "gderiv2",
    "right_limit_of",
    "heat_residual",
    "Integrand",
    "integrate",
    "integrate_signed",
    "indefinite",
    "gexp",
    "gexp_right_limit",
    "classify_regressivity",
    "gsin_gcos",
    "gsinh_gcosh",
    "MonomialTable",
    "monomial_table",
    "g_monomial",
    "gexp_series",
    "gsin_series",
    "gcos_series",
    "gsinh_series",
    "gcosh_series",
    "build_grid",
    "euler_stieltjes",
    "Trajectory",
    "Ode2Solution",
    "solve_second_order",
    "PeriodicFirstOrderSolution",
    "solve_periodic_first_order",
    "HeatProblem",
    "SeparatedTerm",
    "HeatSolution",
    "general_solution",
    "solve_ivp",
    "SeriesDiagnostics",
    "series_solution",
    "find_periodic_eigenvalues",
    "PeriodicSolution",
    "periodic_solution",
    "check_sin_condition",
    "check_cos_condition",
    "dirichlet_solution",
    "neumann_solution",
    "SumDerivator",
    "ProductDerivator",
    "G_mn",
    "GPolyContext",
    "heat_gpoly",
    "classical_heat_polynomial",
    "iterated_integral",
    "RadiusReport",
    "radius_sigma",
    "GateReport",
    "GPolySolution",
    "gpoly_series_solution",
    "product_partials",
    "independence_determinant",
    "ProductCaseSolution",
    "solve_product_case",
    "ParsedProblem",
    "load_problem",
    "alpha_stream",
    "solve",
]
