from .base import (
    AXIOMS,
    OPTIONAL_AXIOMS,
    AxiomInstance,
    AxiomReport,
    AxiomResult,
    ModelError,
    ModelInterface,
    SamplingPlan,
    UndefinedCell,
    Valuation,
    check_axioms,
    interp,
    satisfies,
    validate,
)
from .finite import FiniteModel, ModelFileError, bundled_model_path, load_finite_model, parse_finite_model
from .term_model import TermModel, TermModelElement


def term_model(sig, budget=None):
    return TermModel(sig) if budget is None else TermModel(sig, budget)
