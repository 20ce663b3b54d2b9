"""Smooth plane curves over finite fields of odd characteristic."""

__version__ = "0.1.0"

from .curves import PlaneCurve, fermat_form, hermitian_family, pardini_form  # noqa: E402
from .experiments import (  # noqa: E402
    ExperimentResult,
    ExperimentSpec,
    fnc_report,
    plane_filling_search,
    random_smooth_curve,
    svb_check,
    verify_bertini_nonreflexive,
    verify_bertini_reflexive,
)
from .forms import (  # noqa: E402
    BinaryForm,
    IntersectionProfile,
    TernaryForm,
    divides,
    factor_profile,
    frobenius_form,
    hessian,
    partials,
    restrict_to_line,
    resultant,
    resultant_eliminate,
)
from .gf import FieldCtx, FieldElement, embed, field_create, frobenius_power  # noqa: E402
from .incidence import (  # noqa: E402
    CensusReport,
    FrobeniusProfile,
    LineClass,
    average_rational_per_line,
    classify_line,
    collinear_rational_max,
    find_good_line,
    frobenius_incidence,
    tangent_census,
)
from .io import emit_report, load_fixture, parse_curve_spec  # noqa: E402
from .projective import ProjLine, ProjPoint, all_lines, line_through  # noqa: E402

__all__ = [
    "BinaryForm", "CensusReport", "ExperimentResult", "ExperimentSpec", "FieldCtx",
    "FieldElement", "FrobeniusProfile", "IntersectionProfile", "LineClass", "PlaneCurve",
    "ProjLine", "ProjPoint", "TernaryForm", "all_lines", "average_rational_per_line",
    "classify_line", "collinear_rational_max", "divides", "embed", "emit_report",
    "factor_profile", "fermat_form", "field_create", "find_good_line", "fnc_report",
    "frobenius_form", "frobenius_incidence", "frobenius_power", "hermitian_family",
    "hessian", "line_through", "load_fixture", "pardini_form", "parse_curve_spec",
    "partials", "plane_filling_search", "random_smooth_curve", "restrict_to_line",
    "resultant", "resultant_eliminate", "svb_check", "tangent_census",
    "verify_bertini_nonreflexive", "verify_bertini_reflexive",
]
