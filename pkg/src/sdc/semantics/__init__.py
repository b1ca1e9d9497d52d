from .encodings import corel_to_diagram, cospan_to_diagram, fn_to_diagram, rel_to_diagram, span_to_diagram
from .laws import FunctorReport, functor_check, trace_via_compact
from .models import (
    MODELS,
    CorelationSum,
    CospanSum,
    FinRelProduct,
    FinRelSum,
    FinSetSum,
    MatrixModel,
    SemanticModel,
    SpanSum,
    evaluate,
    model_by_name,
    model_corelation,
    model_cospan,
    model_finrel_product,
    model_finrel_sum,
    model_finset_sum,
    model_matrix,
    model_span_sum,
)
from .morphisms import Corelation, FinCospan, FinFunction, FinRelation, FinSpan, Matrix
